use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use super::parse::cocycle_leg_depth;
use super::{Atom, EvalError, SweedlerExpr};
use crate::hopf::{iterated_coproduct, HopfAlgebra};
use crate::linear::LinearMap;
use crate::scalar::Scalar;
use crate::tensor::{multi_index, SparseTensor};
use crate::twist::{invert_tensor_element, Cocycle};

/// The algebra an expression is evaluated in, plus the elements bound to
/// cocycle names.
pub struct EvaluationContext<'h> {
    hopf: &'h HopfAlgebra,
    // name -> (χ, χ⁻¹)
    bindings: BTreeMap<String, (SparseTensor, SparseTensor)>,
    opposite: bool,
    coproducts: RefCell<HashMap<usize, LinearMap>>,
    antipodes: RefCell<Vec<LinearMap>>,
}

impl<'h> EvaluationContext<'h> {
    pub fn new(hopf: &'h HopfAlgebra) -> Self {
        EvaluationContext {
            hopf,
            bindings: BTreeMap::new(),
            opposite: false,
            coproducts: RefCell::new(HashMap::new()),
            antipodes: RefCell::new(vec![LinearMap::identity(&[hopf.dim()])]),
        }
    }

    pub fn hopf(&self) -> &HopfAlgebra {
        self.hopf
    }

    /// Multiply inside slots with the opposite product.
    pub fn with_opposite(mut self, opposite: bool) -> Self {
        self.opposite = opposite;
        self
    }

    /// Binds `name` to `element`, computing its inverse.
    pub fn bind(&mut self, name: &str, element: &SparseTensor) -> Result<(), EvalError> {
        self.check_element(name, element)?;
        let inverse = invert_tensor_element(self.hopf, element)
            .map_err(|_| EvalError::Dimension(format!("`{name}` is not invertible in H⊗H")))?;
        self.bindings.insert(name.to_string(), (element.clone(), inverse));
        Ok(())
    }

    pub fn bind_cocycle(&mut self, name: &str, c: &Cocycle) -> Result<(), EvalError> {
        self.bind_pair(name, c.element(), c.inverse())
    }

    /// Binds an element together with a claimed inverse, which is checked.
    pub fn bind_pair(&mut self, name: &str, element: &SparseTensor, inverse: &SparseTensor) -> Result<(), EvalError> {
        self.check_element(name, element)?;
        self.check_element(name, inverse)?;
        let one = self.hopf.tensor_unit(2);
        if self.hopf.tensor_mul(element, inverse)? != one || self.hopf.tensor_mul(inverse, element)? != one {
            return Err(EvalError::Dimension(format!("the inverse given for `{name}` is not a two-sided inverse")));
        }
        self.bindings.insert(name.to_string(), (element.clone(), inverse.clone()));
        Ok(())
    }

    pub fn is_bound(&self, name: &str) -> bool {
        self.bindings.contains_key(name)
    }

    fn check_element(&self, name: &str, t: &SparseTensor) -> Result<(), EvalError> {
        let n = self.hopf.dim();
        if t.shape() != [n, n] {
            return Err(EvalError::Dimension(format!(
                "`{name}` has shape {:?}, expected [{n}, {n}]",
                t.shape()
            )));
        }
        Ok(())
    }

    fn coproduct(&self, depth: usize) -> LinearMap {
        self.coproducts
            .borrow_mut()
            .entry(depth)
            .or_insert_with(|| iterated_coproduct(self.hopf, depth))
            .clone()
    }

    fn antipode_power(&self, k: usize) -> LinearMap {
        let mut cache = self.antipodes.borrow_mut();
        while cache.len() <= k {
            let next = self.hopf.antipode().compose(cache.last().unwrap()).expect("endomorphisms");
            cache.push(next);
        }
        cache[k].clone()
    }

    fn product(&self, a: usize, b: usize) -> &SparseTensor {
        if self.opposite {
            self.hopf.mul_basis(b, a)
        } else {
            self.hopf.mul_basis(a, b)
        }
    }

    /// Evaluates at basis elements, one index per variable.
    pub fn evaluate_basis(&self, e: &SweedlerExpr, args: &[usize]) -> Result<SparseTensor, EvalError> {
        let n = self.hopf.dim();
        if let Some(&bad) = args.iter().find(|&&i| i >= n) {
            return Err(EvalError::Dimension(format!("basis index {bad} out of range for dimension {n}")));
        }
        let args: Vec<SparseTensor> = args.iter().map(|&i| self.hopf.basis(i)).collect();
        self.evaluate(e, &args)
    }

    /// Evaluates at arbitrary elements of `H`, one per variable, in the order
    /// of `e.variables`. The result lives in `H^{⊗slots}`.
    pub fn evaluate(&self, e: &SweedlerExpr, args: &[SparseTensor]) -> Result<SparseTensor, EvalError> {
        let n = self.hopf.dim();
        if args.len() != e.variables.len() {
            return Err(EvalError::Dimension(format!(
                "{} arguments for {} variables",
                args.len(),
                e.variables.len()
            )));
        }
        if let Some(a) = args.iter().find(|a| a.shape() != [n]) {
            return Err(EvalError::Dimension(format!("argument of shape {:?}, expected [{n}]", a.shape())));
        }
        let program = self.compile(e, args)?;
        Ok(program.run(self, n))
    }

    /// The multilinear map `H^{⊗vars} → H^{⊗slots}` defined by `e`.
    pub fn evaluate_map(&self, e: &SweedlerExpr) -> Result<LinearMap, EvalError> {
        let n = self.hopf.dim();
        let domain = vec![n; e.variables.len()];
        let codomain = vec![n; e.slot_count()];
        let size: usize = domain.iter().product();
        let mut columns = Vec::with_capacity(size);
        for flat in 0..size {
            columns.push(self.evaluate_basis(e, &multi_index(&domain, flat))?);
        }
        Ok(LinearMap::new(&domain, &codomain, columns)?)
    }

    fn compile(&self, e: &SweedlerExpr, args: &[SparseTensor]) -> Result<Program, EvalError> {
        let mut factor = Scalar::one();
        let mut sources: Vec<Source> = Vec::new();
        let mut var_source = HashMap::new();
        for ((var, depth), x) in e.variables.iter().zip(args) {
            if *depth == 0 {
                factor *= &self.hopf.counit_of(x);
                continue;
            }
            let legs = self.coproduct(*depth).apply(x)?;
            var_source.insert(var.clone(), sources.len());
            sources.push(Source::from_tensor(&legs));
        }
        let mut coc_source = HashMap::new();
        let mut coc_split = HashMap::new();
        for c in &e.cocycles {
            let (elem, inv) = self.bindings.get(&c.name).ok_or_else(|| EvalError::Unbound(c.name.clone()))?;
            let mut t = if c.inverse { inv.clone() } else { elem.clone() };
            let d1 = cocycle_leg_depth(e, c, 1);
            let d2 = cocycle_leg_depth(e, c, 2);
            t = self.coproduct(d2).apply_on_leg(&t, 1)?;
            t = self.coproduct(d1).apply_on_leg(&t, 0)?;
            coc_source.insert(c.clone(), sources.len());
            coc_split.insert(c.clone(), d1);
            if d1 + d2 == 0 {
                factor *= &t.get_flat(0);
                continue;
            }
            sources.push(Source::from_tensor(&t));
        }

        let mut offsets = Vec::with_capacity(sources.len());
        let mut width = e.slot_count();
        for s in &sources {
            offsets.push(width);
            width += s.legs;
        }
        let mut steps = Vec::new();
        for (slot, atoms) in e.slots.iter().enumerate() {
            for atom in atoms {
                let (mut a, mut spow) = (atom, 0);
                while let Atom::Antipode(inner) = a {
                    a = inner;
                    spow += 1;
                }
                let (source, pos) = match a {
                    Atom::Unit => {
                        steps.push(Step { slot, source: None, spow: 0, last: false });
                        continue;
                    }
                    Atom::Leg { var, index } => (var_source[var], index - 1),
                    Atom::CocycleLeg { cocycle, leg, sub } => {
                        let within = sub.unwrap_or(1) - 1;
                        let pos = if *leg == 1 { within } else { coc_split[cocycle] + within };
                        (coc_source[cocycle], pos)
                    }
                    Atom::Antipode(_) => unreachable!(),
                };
                steps.push(Step { slot, source: Some((source, offsets[source] + pos)), spow, last: false });
            }
        }
        // a source's legs are dropped from the state after its final use
        let mut seen = vec![false; sources.len()];
        for step in steps.iter_mut().rev() {
            if let Some((s, _)) = step.source {
                if !seen[s] {
                    seen[s] = true;
                    step.last = true;
                }
            }
        }
        Ok(Program { factor, sources, offsets, steps, slots: e.slot_count(), width })
    }
}

const EMPTY: usize = usize::MAX;

// all terms of a multi-leg tensor, as (legs, coefficient)
struct Source {
    legs: usize,
    terms: Vec<(Vec<usize>, Scalar)>,
}

impl Source {
    fn from_tensor(t: &SparseTensor) -> Self {
        Source { legs: t.rank(), terms: t.iter().map(|(i, s)| (i, s.clone())).collect() }
    }
}

struct Step {
    slot: usize,
    // (source, position of the leg in the state vector)
    source: Option<(usize, usize)>,
    spow: usize,
    last: bool,
}

struct Program {
    factor: Scalar,
    sources: Vec<Source>,
    offsets: Vec<usize>,
    steps: Vec<Step>,
    slots: usize,
    width: usize,
}

// Structure constants as term lists, so the inner loop allocates nothing.
struct Tables {
    // products[a * n + b] = terms of e_a e_b (or e_b e_a for the opposite product)
    products: Vec<Vec<(usize, Scalar)>>,
    // antipodes[k][v] = terms of S^k(e_v), k ≥ 1
    antipodes: HashMap<usize, Vec<Vec<(usize, Scalar)>>>,
    unit: Vec<(usize, Scalar)>,
}

fn terms(t: &SparseTensor) -> Vec<(usize, Scalar)> {
    t.iter_flat().map(|(k, x)| (k, x.clone())).collect()
}

impl Program {
    fn tables(&self, ctx: &EvaluationContext<'_>, n: usize) -> Tables {
        let mut products = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                products.push(terms(ctx.product(a, b)));
            }
        }
        let mut antipodes = HashMap::new();
        for step in &self.steps {
            if step.spow > 0 && !antipodes.contains_key(&step.spow) {
                let s = ctx.antipode_power(step.spow);
                antipodes.insert(step.spow, (0..n).map(|v| terms(s.column(v))).collect());
            }
        }
        Tables { products, antipodes, unit: terms(ctx.hopf.unit()) }
    }

    // State: one basis index per slot (the partial product so far, EMPTY
    // before the first atom), then the chosen legs of every open source.
    // Equal states are merged, so the work is bounded by the number of
    // distinct partial results rather than the number of summation terms.
    fn run(&self, ctx: &EvaluationContext<'_>, n: usize) -> SparseTensor {
        let shape = vec![n; self.slots];
        if self.factor.is_zero() {
            return SparseTensor::zeros(&shape);
        }
        let tables = self.tables(ctx, n);
        let mut states: HashMap<Vec<usize>, Scalar> = HashMap::new();
        states.insert(vec![EMPTY; self.width], self.factor.clone());
        let mut opened: Vec<(Vec<usize>, Scalar)> = Vec::new();
        for step in &self.steps {
            let antipode = tables.antipodes.get(&step.spow);
            let mut next: HashMap<Vec<usize>, Scalar> = HashMap::with_capacity(states.len());
            for (state, coef) in states {
                opened.clear();
                match step.source {
                    Some((s, _)) if state[self.offsets[s]] == EMPTY => {
                        let lo = self.offsets[s];
                        for (legs, c) in &self.sources[s].terms {
                            let mut st = state.clone();
                            st[lo..lo + legs.len()].copy_from_slice(legs);
                            opened.push((st, &coef * c));
                        }
                    }
                    _ => opened.push((state, coef)),
                }
                for (mut st, c) in opened.drain(..) {
                    let partial = st[step.slot];
                    let single;
                    let value: &[(usize, Scalar)] = match step.source {
                        None if partial == EMPTY => &tables.unit,
                        None => {
                            single = [(partial, Scalar::one())];
                            &single
                        }
                        Some((_, at)) => {
                            let v = st[at];
                            match (antipode, partial == EMPTY) {
                                (Some(s), true) => &s[v],
                                (None, true) => {
                                    single = [(v, Scalar::one())];
                                    &single
                                }
                                (None, false) => &tables.products[partial * n + v],
                                (Some(s), false) => {
                                    // e_partial · S^k(e_v), accumulated per basis index
                                    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                                    for (k, x) in &s[v] {
                                        for (m, y) in &tables.products[partial * n + k] {
                                            *acc.entry(*m).or_insert_with(Scalar::zero) += &(x * y);
                                        }
                                    }
                                    if step.last {
                                        let (s, _) = step.source.expect("last use of a source");
                                        let lo = self.offsets[s];
                                        st[lo..lo + self.sources[s].legs].fill(EMPTY);
                                    }
                                    for (m, y) in acc {
                                        if y.is_zero() {
                                            continue;
                                        }
                                        let mut key = st.clone();
                                        key[step.slot] = m;
                                        *next.entry(key).or_insert_with(Scalar::zero) += &(&c * &y);
                                    }
                                    continue;
                                }
                            }
                        }
                    };
                    if step.last {
                        let (s, _) = step.source.expect("last use of a source");
                        let lo = self.offsets[s];
                        st[lo..lo + self.sources[s].legs].fill(EMPTY);
                    }
                    for (k, x) in value {
                        let mut key = st.clone();
                        key[step.slot] = *k;
                        *next.entry(key).or_insert_with(Scalar::zero) += &(&c * x);
                    }
                }
            }
            next.retain(|_, c| !c.is_zero());
            states = next;
        }
        let mut out = SparseTensor::zeros(&shape);
        for (state, c) in states {
            let flat = state[..self.slots].iter().fold(0, |acc, &i| acc * n + i);
            out.add_at(flat, &c);
        }
        out
    }
}

/// The first basis assignment on which two expressions differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityWitness {
    pub assignment: Vec<usize>,
    pub lhs: SparseTensor,
    pub rhs: SparseTensor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    /// Number of basis assignments evaluated.
    pub assignments: usize,
    pub witness: Option<IdentityWitness>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Evaluates both sides on every basis assignment of the variables, in
/// row-major order, and stops at the first difference.
pub fn check_identity(lhs: &SweedlerExpr, rhs: &SweedlerExpr, ctx: &EvaluationContext<'_>) -> Result<IdentityCheck, EvalError> {
    if lhs.slot_count() != rhs.slot_count() {
        return Err(EvalError::Incompatible(format!(
            "{} tensor slots against {}",
            lhs.slot_count(),
            rhs.slot_count()
        )));
    }
    let mut left_names = lhs.variable_names();
    let mut right_names = rhs.variable_names();
    left_names.sort_unstable();
    right_names.sort_unstable();
    if left_names != right_names {
        return Err(EvalError::Incompatible(format!(
            "variables {:?} against {:?}",
            lhs.variable_names(),
            rhs.variable_names()
        )));
    }
    // rhs arguments follow the lhs variable order
    let order: Vec<usize> = rhs
        .variables
        .iter()
        .map(|(v, _)| lhs.variables.iter().position(|(w, _)| w == v).expect("same names"))
        .collect();
    let n = ctx.hopf.dim();
    let domain = vec![n; lhs.variables.len()];
    let total: usize = domain.iter().product();
    for flat in 0..total {
        let assignment = multi_index(&domain, flat);
        let a = ctx.evaluate_basis(lhs, &assignment)?;
        let b_args: Vec<usize> = order.iter().map(|&k| assignment[k]).collect();
        let b = ctx.evaluate_basis(rhs, &b_args)?;
        if a != b {
            return Ok(IdentityCheck {
                assignments: flat + 1,
                witness: Some(IdentityWitness { assignment, lhs: a, rhs: b }),
            });
        }
    }
    Ok(IdentityCheck { assignments: total, witness: None })
}
