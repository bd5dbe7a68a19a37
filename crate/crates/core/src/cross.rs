//! Cocycle bicrossproducts built from a Hopf algebra `H`:
//!
//! * the mirror product `M(H) = H^op ▷◀ H`,
//! * the twisted mirror product `M_χ(H) = H^op ▷◀^ψ H_χ` for a cocycle `χ`,
//! * `M̄(H) = H ▷◀^ψ H`.
//!
//! The action, coaction and dual cocycle are Sweedler expressions evaluated
//! on `H`. [`assemble`] builds the Hopf structure on `H_part ⊗ A_part` three
//! ways and refuses to return unless they agree:
//!
//! * `Explicit`: closed formulas for the product and the cross coproduct,
//! * `Generic`: the smash product and cocycle cross coproduct of the
//!   [`CrossData`] maps,
//! * `Transported`: the tensor product Hopf algebra pulled through `θ`.
//!
//! The transported structure is the one kept.

use serde::Serialize;
use thiserror::Error;

use crate::hopf::{
    check_morphism, convolution_inverse, iterated_coproduct, structural_variant, tensor_hopf, unit_counit,
    HopfAlgebra, HopfError, HopfMorphismReport, Variant,
};
use crate::linear::LinearMap;
use crate::sweedler::{parse_with, Declarations, EvalError, EvaluationContext, IdentityCheck, IdentityWitness, SweedlerExpr};
use crate::tensor::{SparseTensor, TensorError};
use crate::twist::{r_as_cocycle, twist_hopf, Cocycle, QuasitriangularStructure, TwistError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CrossError {
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("the cocycle lives on a different Hopf algebra")]
    HostMismatch,
    #[error("θ is not invertible")]
    SingularTheta,
    #[error("{0}")]
    Theta(Box<StructureMismatch>),
    #[error("the identity has no convolution inverse on the assembled coalgebra")]
    NoAntipode,
    #[error("{0}")]
    Mismatch(Box<StructureMismatch>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Mirror,
    TwistedMirror,
    Mbar,
}

impl Construction {
    pub fn name(self) -> &'static str {
        match self {
            Construction::Mirror => "mirror",
            Construction::TwistedMirror => "twisted_mirror",
            Construction::Mbar => "mbar",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Explicit,
    Generic,
    Transported,
    /// `θ⁻¹` against its closed form.
    ThetaInverse,
}

/// Two structures disagree: `map` applied to basis `basis` of its domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureMismatch {
    pub route: Route,
    pub map: &'static str,
    pub basis: Vec<usize>,
    pub expected: SparseTensor,
    pub found: SparseTensor,
}

impl std::fmt::Display for StructureMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:?} route disagrees on `{}` at basis {:?}: {} vs {}",
            self.route, self.map, self.basis, self.expected, self.found
        )
    }
}

// Closed forms, evaluated on H with X bound to the cocycle (1⊗1 for M(H)).
const MIRROR_ACTION: &str = "h1 a1 S(h2)";
const MIRROR_COACTION: &str = "h1 S(h3) (x) h2";
const MIRROR_PSI: &str = "h1 X1 S(h4) Xi1 (x) h2 X2 S(h3) Xi2";
const MIRROR_PRODUCT: &str = "g1 h1 (x) g2 a1 S(g3) b1";
const MIRROR_COPRODUCT: &str = "h1 (x) h2 X1 S(h6) a1 Xi1 (x) h3 (x) h4 X2 S(h5) a2 Xi2";
const MIRROR_THETA: &str = "h1 (x) h2 a1";
const MIRROR_THETA_INVERSE: &str = "h1 (x) S(h2) a1";
// Δθ(h⊗a) = (θ⊗θ)(h1 ⊗ χ a1 χ⁻¹ ⊗ h2 ⊗ χ a2 χ⁻¹)
const MIRROR_THETA_COPRODUCT: &str = "h1 (x) X1 a1 Xi1 (x) h2 (x) X2 a2 Xi2";

const MBAR_ACTION: &str = "S(h1) a1 h2";
const MBAR_COACTION: &str = "S(h1) h3 (x) h2";
const MBAR_PSI: &str = "S(h1) h3 (x) S(h2) h4";
const MBAR_PRODUCT: &str = "h1 g1 (x) S(g2) a1 g3 b1";
const MBAR_COPRODUCT: &str = "h1 (x) S(h2) h5 a1 (x) h3 (x) S(h4) h6 a2";
const MBAR_THETA: &str = "h1 (x) S(h2) a1";
const MBAR_THETA_INVERSE: &str = "h1 (x) h2 a1";
const MBAR_THETA_COPRODUCT: &str = "h1 (x) a1 (x) h2 (x) a2";

/// `ψ(h⊗g)` for `H = H₀⊗H₀` and `χ = ℜ₂₃`, written over `H₀`.
pub const R_MATRIX_PSI: &str = "h1 S(h4) (x) g1 R1 S(g2) Ri1 (x) h2 R2 S(h3) Ri2 (x) 1";

fn expr(text: &str, vars: &[&str], cocycles: &[&str]) -> SweedlerExpr {
    parse_with(text, &Declarations::new(vars.iter().copied(), cocycles.iter().copied()))
        .unwrap_or_else(|e| panic!("built-in expression `{text}`: {e}"))
}

fn formula_map(ctx: &EvaluationContext<'_>, text: &str, vars: &[&str], cocycles: &[&str]) -> Result<LinearMap, CrossError> {
    Ok(ctx.evaluate_map(&expr(text, vars, cocycles))?)
}

// merge pairs of consecutive legs: [n, n, n, n] -> [n², n²] and so on
fn squash(map: LinearMap, domain: &[usize], codomain: &[usize]) -> Result<LinearMap, CrossError> {
    Ok(map.reshape(domain, codomain)?)
}

/// The data of a cocycle bicrossproduct `H_part ▷◀^ψ A_part`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossData {
    construction: Construction,
    host: HopfAlgebra,
    cocycle: Cocycle,
    h_part: HopfAlgebra,
    a_part: HopfAlgebra,
    action: LinearMap,
    coaction: LinearMap,
    dual_cocycle: LinearMap,
}

impl CrossData {
    pub fn construction(&self) -> Construction {
        self.construction
    }

    /// The algebra `H` the formulas are evaluated on.
    pub fn host(&self) -> &HopfAlgebra {
        &self.host
    }

    /// The twisting cocycle; trivial for `M(H)` and `M̄(H)`.
    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn h_part(&self) -> &HopfAlgebra {
        &self.h_part
    }

    pub fn a_part(&self) -> &HopfAlgebra {
        &self.a_part
    }

    /// `◁: A⊗H → A`.
    pub fn action(&self) -> &LinearMap {
        &self.action
    }

    /// `β: H → A⊗H`.
    pub fn coaction(&self) -> &LinearMap {
        &self.coaction
    }

    /// `ψ: H → A⊗A`.
    pub fn dual_cocycle(&self) -> &LinearMap {
        &self.dual_cocycle
    }

    fn context(&self) -> Result<EvaluationContext<'_>, CrossError> {
        let mut ctx = EvaluationContext::new(&self.host);
        ctx.bind_cocycle("X", &self.cocycle)?;
        Ok(ctx)
    }

    /// Module algebra, counital coaction and counital dual cocycle, checked
    /// on every basis element. Returns the failures.
    pub fn check_invariants(&self) -> Vec<InvariantFailure> {
        let (nh, na) = (self.h_part.dim(), self.a_part.dim());
        let a = &self.a_part;
        let mut out = Vec::new();
        let act = |x: &SparseTensor, h: usize| {
            let mut r = SparseTensor::zeros(&[na]);
            for (i, c) in x.iter_flat() {
                r.axpy(c, self.action.column(i * nh + h));
            }
            r
        };
        for h in 0..nh {
            let dh = self.h_part.comult().column(h);
            // 1◁h = ε(h)1
            if act(a.unit(), h) != a.unit().scale(&self.h_part.counit_basis(h)) {
                out.push(InvariantFailure { invariant: Invariant::UnitAction, basis: vec![h] });
            }
            for x in 0..na {
                for y in 0..na {
                    let lhs = act(a.mul_basis(x, y), h);
                    let mut rhs = SparseTensor::zeros(&[na]);
                    for (ij, c) in dh.iter() {
                        let l = act(&a.basis(x), ij[0]);
                        let r = act(&a.basis(y), ij[1]);
                        rhs.axpy(c, &a.mul(&l, &r));
                    }
                    if lhs != rhs {
                        out.push(InvariantFailure { invariant: Invariant::ModuleAlgebra, basis: vec![x, y, h] });
                    }
                }
            }
            let beta = self.coaction.column(h);
            if a.counit().apply_on_leg(beta, 0).ok().as_ref() != Some(&self.h_part.basis(h)) {
                out.push(InvariantFailure { invariant: Invariant::CoactionCounit, basis: vec![h] });
            }
            let psi = self.dual_cocycle.column(h);
            let expect = a.unit().scale(&self.h_part.counit_basis(h));
            for leg in 0..2 {
                if a.counit().apply_on_leg(psi, leg).ok().as_ref() != Some(&expect) {
                    let invariant = if leg == 0 { Invariant::PsiLeftCounit } else { Invariant::PsiRightCounit };
                    out.push(InvariantFailure { invariant, basis: vec![h] });
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    /// `(ab)◁h = (a◁h₁)(b◁h₂)`
    ModuleAlgebra,
    /// `1◁h = ε(h)1`
    UnitAction,
    /// `(ε⊗id)β = id`
    CoactionCounit,
    /// `(ε⊗id)ψ(h) = ε(h)1`
    PsiLeftCounit,
    /// `(id⊗ε)ψ(h) = ε(h)1`
    PsiRightCounit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantFailure {
    pub invariant: Invariant,
    pub basis: Vec<usize>,
}

fn build_data(construction: Construction, host: &HopfAlgebra, cocycle: Cocycle) -> Result<CrossData, CrossError> {
    let (action, coaction, psi, h_part, a_part) = match construction {
        Construction::Mirror | Construction::TwistedMirror => (
            MIRROR_ACTION,
            MIRROR_COACTION,
            MIRROR_PSI,
            structural_variant(host, Variant::Op)?,
            twist_hopf(&cocycle)?,
        ),
        Construction::Mbar => {
            if host.antipode_inverse().is_err() {
                return Err(HopfError::SingularAntipode.into());
            }
            (MBAR_ACTION, MBAR_COACTION, MBAR_PSI, host.clone(), host.clone())
        }
    };
    let mut ctx = EvaluationContext::new(host);
    ctx.bind_cocycle("X", &cocycle)?;
    let action = formula_map(&ctx, action, &["a", "h"], &[])?;
    let coaction = formula_map(&ctx, coaction, &["h"], &[])?;
    let dual_cocycle = formula_map(&ctx, psi, &["h"], &["X"])?;
    Ok(CrossData { construction, host: host.clone(), cocycle, h_part, a_part, action, coaction, dual_cocycle })
}

/// `M(H) = H^op ▷◀ H` with `a◁h = h₁ a S(h₂)`, `β(h) = h₁ S(h₃) ⊗ h₂` and
/// trivial `ψ`.
pub fn mirror_data(h: &HopfAlgebra) -> Result<CrossData, CrossError> {
    build_data(Construction::Mirror, h, Cocycle::trivial(h))
}

/// `M_χ(H) = H^op ▷◀^ψ H_χ`: the action and coaction of `M(H)` and
/// `ψ(h) = h₁ χ⁽¹⁾ S(h₄) χ⁻⁽¹⁾ ⊗ h₂ χ⁽²⁾ S(h₃) χ⁻⁽²⁾`.
pub fn twisted_mirror_data(h: &HopfAlgebra, c: &Cocycle) -> Result<CrossData, CrossError> {
    if !c.host().same_structure(h) {
        return Err(CrossError::HostMismatch);
    }
    build_data(Construction::TwistedMirror, h, c.clone())
}

/// `M̄(H) = H ▷◀^ψ H` with `a◁h = S(h₁) a h₂`, `β(h) = S(h₁) h₃ ⊗ h₂` and
/// `ψ(h) = S(h₁) h₃ ⊗ S(h₂) h₄`.
pub fn mbar_data(h: &HopfAlgebra) -> Result<CrossData, CrossError> {
    build_data(Construction::Mbar, h, Cocycle::trivial(h))
}

/// An assembled bicrossproduct and the isomorphism `θ` from the tensor
/// product Hopf algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicrossproduct {
    data: CrossData,
    tensor: HopfAlgebra,
    total: HopfAlgebra,
    explicit: HopfAlgebra,
    theta: LinearMap,
    theta_inverse: LinearMap,
}

impl Bicrossproduct {
    pub fn data(&self) -> &CrossData {
        &self.data
    }

    /// The Hopf structure on the product space (transported through `θ`).
    pub fn total(&self) -> &HopfAlgebra {
        &self.total
    }

    /// The structure from the closed formulas, equal to [`Self::total`].
    pub fn explicit(&self) -> &HopfAlgebra {
        &self.explicit
    }

    /// `H_part ⊗ A_part` as a tensor product Hopf algebra.
    pub fn tensor_product(&self) -> &HopfAlgebra {
        &self.tensor
    }

    pub fn theta(&self) -> &LinearMap {
        &self.theta
    }

    pub fn theta_inverse(&self) -> &LinearMap {
        &self.theta_inverse
    }

    /// `Δθ(h⊗a) = (θ⊗θ)(…)` on every basis pair, with `Δ` the explicit cross
    /// coproduct. The bracket is `h₁ ⊗ χ⁽¹⁾a₁χ⁻⁽¹⁾ ⊗ h₂ ⊗ χ⁽²⁾a₂χ⁻⁽²⁾` for
    /// the mirror products and `Δ_{H⊗H}(h⊗a)` for `M̄(H)`.
    pub fn check_theta_coproduct(&self) -> Result<IdentityCheck, CrossError> {
        let ctx = self.data.context()?;
        let (n, big) = (self.data.host.dim(), self.total.dim());
        let text = match self.data.construction {
            Construction::Mbar => MBAR_THETA_COPRODUCT,
            _ => MIRROR_THETA_COPRODUCT,
        };
        let inner = squash(formula_map(&ctx, text, &["h", "a"], &["X"])?, &[big], &[big, big])?;
        let lhs = self.explicit.comult().compose(&self.theta)?;
        let rhs = self.theta.kron(&self.theta).compose(&inner)?;
        for i in 0..big {
            if lhs.column(i) != rhs.column(i) {
                return Ok(IdentityCheck {
                    assignments: i + 1,
                    witness: Some(IdentityWitness {
                        assignment: vec![i / n, i % n],
                        lhs: lhs.column(i).clone(),
                        rhs: rhs.column(i).clone(),
                    }),
                });
            }
        }
        Ok(IdentityCheck { assignments: big, witness: None })
    }
}

fn with_convolution_antipode(
    labels: Vec<String>,
    unit: SparseTensor,
    mult: LinearMap,
    counit: LinearMap,
    comult: LinearMap,
) -> Result<HopfAlgebra, CrossError> {
    let n = labels.len();
    let id = LinearMap::identity(&[n]);
    let b = HopfAlgebra::from_parts(labels, unit, mult, counit, comult, id.clone())?;
    let s = convolution_inverse(&id, &b, &b)?.ok_or(CrossError::NoAntipode)?;
    Ok(b.with_antipode(s)?)
}

fn explicit_structure(data: &CrossData, tensor: &HopfAlgebra) -> Result<HopfAlgebra, CrossError> {
    let ctx = data.context()?;
    let big = tensor.dim();
    let (product, coproduct) = match data.construction {
        Construction::Mbar => (MBAR_PRODUCT, MBAR_COPRODUCT),
        _ => (MIRROR_PRODUCT, MIRROR_COPRODUCT),
    };
    let mult = squash(formula_map(&ctx, product, &["h", "a", "g", "b"], &[])?, &[big, big], &[big])?;
    let comult = squash(formula_map(&ctx, coproduct, &["h", "a"], &["X"])?, &[big], &[big, big])?;
    with_convolution_antipode(
        tensor.labels().to_vec(),
        tensor.unit().clone(),
        mult,
        tensor.counit().clone(),
        comult,
    )
}

// Product (h⊗a)(g⊗b) = h g₁ ⊗ (a◁g₂) b in H_part and A_part, coproduct
// h₁ ⊗ β(h₂)⁽ᴬ⁾ ψ(h₃)⁽¹⁾ a₁ ⊗ β(h₂)⁽ᴴ⁾ ⊗ ψ(h₃)⁽²⁾ a₂.
fn generic_structure(data: &CrossData, tensor: &HopfAlgebra) -> Result<HopfAlgebra, CrossError> {
    let (hp, a) = (&data.h_part, &data.a_part);
    let (nh, na) = (hp.dim(), a.dim());
    let big = nh * na;
    let mult = LinearMap::from_fn(&[big, big], &[big], |f| {
        let (x, y) = (f / big, f % big);
        let (h, ai, g, b) = (x / na, x % na, y / na, y % na);
        let mut out = SparseTensor::zeros(&[nh, na]);
        for (g12, c) in hp.comult().column(g).iter() {
            let acted = data.action.column(ai * nh + g12[1]);
            let right = a.mul(acted, &a.basis(b));
            out.axpy(c, &hp.mul_basis(h, g12[0]).outer(&right));
        }
        out.reshape(&[big]).expect("size")
    });
    let d3 = iterated_coproduct(hp, 3);
    let comult = LinearMap::from_fn(&[big], &[big, big], |x| {
        let (h, ai) = (x / na, x % na);
        let mut out = SparseTensor::zeros(&[nh, na, nh, na]);
        for (legs, c) in d3.column(h).iter() {
            for (pq, c2) in data.coaction.column(legs[1]).iter() {
                for (rs, c3) in data.dual_cocycle.column(legs[2]).iter() {
                    for (a12, c4) in a.comult().column(ai).iter() {
                        let left = a.mul(a.mul_basis(pq[0], rs[0]), &a.basis(a12[0]));
                        let right = a.mul_basis(rs[1], a12[1]);
                        let coef = &(&(c * c2) * c3) * c4;
                        let term = hp.basis(legs[0]).outer(&left).outer(&hp.basis(pq[1])).outer(right);
                        out.axpy(&coef, &term);
                    }
                }
            }
        }
        out.reshape(&[big, big]).expect("size")
    });
    with_convolution_antipode(
        tensor.labels().to_vec(),
        tensor.unit().clone(),
        mult,
        tensor.counit().clone(),
        comult,
    )
}

fn transported_structure(tensor: &HopfAlgebra, theta: &LinearMap, inv: &LinearMap) -> Result<HopfAlgebra, CrossError> {
    let big = tensor.dim();
    let mult = theta.compose(tensor.mult())?.compose(&inv.kron(inv).reshape(&[big, big], &[big, big])?)?;
    let comult = theta.kron(theta).reshape(&[big, big], &[big, big])?.compose(tensor.comult())?.compose(inv)?;
    let counit = tensor.counit().compose(inv)?;
    let antipode = theta.compose(tensor.antipode())?.compose(inv)?;
    let unit = theta.apply(tensor.unit())?;
    Ok(HopfAlgebra::from_parts(tensor.labels().to_vec(), unit, mult, counit, comult, antipode)?)
}

fn first_map_difference(route: Route, name: &'static str, expected: &LinearMap, found: &LinearMap) -> Option<StructureMismatch> {
    (0..expected.domain_size()).find(|&i| expected.column(i) != found.column(i)).map(|i| StructureMismatch {
        route,
        map: name,
        basis: crate::tensor::multi_index(expected.domain(), i),
        expected: expected.column(i).clone(),
        found: found.column(i).clone(),
    })
}

fn structure_mismatch(route: Route, expected: &HopfAlgebra, found: &HopfAlgebra) -> Option<StructureMismatch> {
    if expected.unit() != found.unit() {
        return Some(StructureMismatch {
            route,
            map: "unit",
            basis: vec![],
            expected: expected.unit().clone(),
            found: found.unit().clone(),
        });
    }
    [
        ("mult", expected.mult(), found.mult()),
        ("comult", expected.comult(), found.comult()),
        ("counit", expected.counit(), found.counit()),
        ("antipode", expected.antipode(), found.antipode()),
    ]
    .into_iter()
    .find_map(|(name, e, f)| first_map_difference(route, name, e, f))
}

/// Builds the bicrossproduct and cross-checks the three constructions of
/// its Hopf structure. Any disagreement is an error carrying the first
/// differing basis element.
pub fn assemble(data: &CrossData) -> Result<Bicrossproduct, CrossError> {
    let ctx = data.context()?;
    let tensor = tensor_hopf(&data.h_part, &data.a_part);
    let big = tensor.dim();
    let (theta_text, inverse_text) = match data.construction {
        Construction::Mbar => (MBAR_THETA, MBAR_THETA_INVERSE),
        _ => (MIRROR_THETA, MIRROR_THETA_INVERSE),
    };
    let theta = squash(formula_map(&ctx, theta_text, &["h", "a"], &[])?, &[big], &[big])?;
    let theta_inverse = theta.inverse().ok_or(CrossError::SingularTheta)?;
    let closed = squash(formula_map(&ctx, inverse_text, &["h", "a"], &[])?, &[big], &[big])?;
    if let Some(m) = first_map_difference(Route::ThetaInverse, "theta_inverse", &theta_inverse, &closed) {
        return Err(CrossError::Theta(Box::new(m)));
    }
    let total = transported_structure(&tensor, &theta, &theta_inverse)?;
    let explicit = explicit_structure(data, &tensor)?;
    if let Some(m) = structure_mismatch(Route::Explicit, &total, &explicit) {
        return Err(CrossError::Mismatch(Box::new(m)));
    }
    let generic = generic_structure(data, &tensor)?;
    if let Some(m) = structure_mismatch(Route::Generic, &total, &generic) {
        return Err(CrossError::Mismatch(Box::new(m)));
    }
    Ok(Bicrossproduct { data: data.clone(), tensor, total, explicit, theta, theta_inverse })
}

/// The extension `A_part → total → H_part`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtensionReport {
    /// `ι(a) = 1⊗a`.
    pub inclusion: HopfMorphismReport,
    /// `π(h⊗a) = ε(a) h`.
    pub projection: HopfMorphismReport,
    pub inclusion_injective: bool,
    pub projection_surjective: bool,
    /// `π∘ι = ηε`.
    pub composite_trivial: bool,
}

impl ExtensionReport {
    pub fn passed(&self) -> bool {
        self.inclusion.is_hopf_morphism()
            && self.projection.is_hopf_morphism()
            && self.inclusion_injective
            && self.projection_surjective
            && self.composite_trivial
    }
}

pub fn check_extension(b: &Bicrossproduct) -> Result<ExtensionReport, CrossError> {
    let (hp, a) = (&b.data.h_part, &b.data.a_part);
    let (nh, na) = (hp.dim(), a.dim());
    let big = nh * na;
    let iota = LinearMap::from_fn(&[na], &[big], |j| hp.unit().outer(&a.basis(j)).reshape(&[big]).expect("size"));
    let pi = LinearMap::from_fn(&[big], &[nh], |x| hp.basis(x / na).scale(&a.counit_basis(x % na)));
    let inclusion = check_morphism(&iota, a, &b.total)?;
    let projection = check_morphism(&pi, &b.total, hp)?;
    let composite_trivial = pi.compose(&iota)? == unit_counit(a, hp);
    Ok(ExtensionReport {
        inclusion_injective: inclusion.rank == na,
        projection_surjective: projection.rank == nh,
        inclusion,
        projection,
        composite_trivial,
    })
}

/// Compares `M_R(H)` (twisted by `χ = R`) with `M̄(H^cop)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoincidenceReport {
    /// `Δ_R = flip∘Δ`.
    pub twist_is_cop: bool,
    /// `H_R` and `H^cop` agree as Hopf algebras, antipodes included.
    pub twist_equals_cop: bool,
    /// `S⊗id: M̄(H^cop) → M_R(H)`, from the identification `S: H^cop → H^op`.
    pub antipode_map: HopfMorphismReport,
    /// `θ_R ∘ (S⊗id) ∘ θ̄⁻¹`, the same identification read through both `θ`.
    pub through_theta: HopfMorphismReport,
}

impl CoincidenceReport {
    /// Whether the antipode-induced map is a Hopf isomorphism.
    pub fn coincides(&self) -> bool {
        self.antipode_map.is_isomorphism()
    }
}

pub fn quasitriangular_coincidence(h: &HopfAlgebra, q: &QuasitriangularStructure) -> Result<CoincidenceReport, CrossError> {
    if !q.host().same_structure(h) {
        return Err(CrossError::HostMismatch);
    }
    let n = h.dim();
    let twisted = assemble(&twisted_mirror_data(h, &q.cocycle()?)?)?;
    let cop = structural_variant(h, Variant::Cop)?;
    let mbar = assemble(&mbar_data(&cop)?)?;
    let h_r = twisted.data.a_part();
    let flip = h.comult().columns().iter().zip(h_r.comult().columns()).all(|(d, dr)| d.permute(&[1, 0]).as_ref() == Ok(dr));
    let s_id = h.antipode().kron(&LinearMap::identity(&[n])).reshape(&[n * n], &[n * n])?;
    let antipode_map = check_morphism(&s_id, mbar.total(), twisted.total())?;
    let composed = twisted.theta.compose(&s_id)?.compose(&mbar.theta_inverse)?;
    let through_theta = check_morphism(&composed, mbar.total(), twisted.total())?;
    Ok(CoincidenceReport { twist_is_cop: flip, twist_equals_cop: h_r.same_structure(&cop), antipode_map, through_theta })
}

/// First basis element of `H₀⊗H₀` on which the `ψ` of
/// [`twisted_mirror_data`] for `χ = ℜ₂₃` differs from [`R_MATRIX_PSI`].
pub fn check_r_matrix_psi(q: &QuasitriangularStructure) -> Result<IdentityCheck, CrossError> {
    let h0 = q.host();
    let n = h0.dim();
    let chi = r_as_cocycle(q)?;
    let data = twisted_mirror_data(chi.host(), &chi)?;
    let mut ctx = EvaluationContext::new(h0);
    ctx.bind_pair("R", q.r(), q.r_inverse())?;
    let display = squash(formula_map(&ctx, R_MATRIX_PSI, &["h", "g"], &["R"])?, &[n * n], &[n * n, n * n])?;
    let psi = data.dual_cocycle();
    for i in 0..n * n {
        if psi.column(i) != display.column(i) {
            return Ok(IdentityCheck {
                assignments: i + 1,
                witness: Some(IdentityWitness {
                    assignment: vec![i / n, i % n],
                    lhs: psi.column(i).clone(),
                    rhs: display.column(i).clone(),
                }),
            });
        }
    }
    Ok(IdentityCheck { assignments: n * n, witness: None })
}

/// `ψ(h) = ε(h) 1⊗1` for every basis `h`.
pub fn psi_is_trivial(data: &CrossData) -> bool {
    let a = data.a_part();
    let one = a.unit().outer(a.unit());
    (0..data.h_part.dim()).all(|h| data.dual_cocycle.column(h) == &one.scale(&data.h_part.counit_basis(h)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{sweedler_h4, validate_hopf, FiniteGroup};
    use crate::scalar::{Field, Scalar};
    use crate::twist::{bicharacter_cocycle, verify_quasitriangular};

    fn r0(h: &HopfAlgebra) -> SparseTensor {
        let (one, g) = (h.basis(0), h.basis(1));
        let mut r = one.outer(&one).add(&one.outer(&g)).unwrap().add(&g.outer(&one)).unwrap();
        r.axpy(&Scalar::from(-1), &g.outer(&g));
        r.scale(&Scalar::ratio(1, 2))
    }

    #[test]
    fn mirror_on_s3_is_conjugation() {
        let g = FiniteGroup::symmetric(3);
        let h = g.algebra();
        let d = mirror_data(&h).unwrap();
        let t = g.index_of("(12)").unwrap();
        let c = g.index_of("(123)").unwrap();
        // a ◁ h = h a h⁻¹
        let acted = d.action().column(c * 6 + t);
        assert_eq!(acted, &h.basis(g.mul(g.mul(t, c), g.inverse(t))));
        assert_eq!(g.labels()[g.mul(g.mul(t, c), g.inverse(t))], "(132)");
        // β(g) = 1⊗g
        for i in 0..6 {
            assert_eq!(d.coaction().column(i), &h.unit().outer(&h.basis(i)));
        }
        assert!(psi_is_trivial(&d));
        assert!(d.check_invariants().is_empty());
    }

    #[test]
    fn mirror_of_z2_is_the_tensor_square() {
        let h = FiniteGroup::cyclic(2).algebra();
        let b = assemble(&mirror_data(&h).unwrap()).unwrap();
        assert_eq!(b.total().dim(), 4);
        assert_eq!(b.total().comult(), b.tensor_product().comult());
        assert!(validate_hopf(b.total()).unwrap().is_valid());
        assert!(check_extension(&b).unwrap().passed());
    }

    #[test]
    fn mbar_on_h4() {
        let h = sweedler_h4();
        let d = mbar_data(&h).unwrap();
        assert!(d.check_invariants().is_empty());
        // ψ(x) = S(x₁) x₃ ⊗ S(x₂) x₄
        let x = h.basis(2);
        let direct = EvaluationContext::new(&h).evaluate(&crate::sweedler::parse("S(h1) h3 (x) S(h2) h4").unwrap(), &[x]).unwrap();
        assert_eq!(d.dual_cocycle().column(2), &direct);
        let b = assemble(&d).unwrap();
        assert!(validate_hopf(b.total()).unwrap().is_valid());
        assert!(b.check_theta_coproduct().unwrap().passed());
        let ext = check_extension(&b).unwrap();
        assert!(ext.passed());
        assert_eq!(ext.projection.rank, 4);
    }

    #[test]
    fn twisted_mirror_on_klein() {
        let g = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        let (a, bb) = (g.index_of("(a,e)").unwrap(), g.index_of("(e,a)").unwrap());
        let minus = Scalar::from(-1);
        let c = bicharacter_cocycle(&g, Field::Rational, |p, q| {
            if p.value(bb) == &minus && q.value(a) == &minus { minus.clone() } else { Scalar::one() }
        })
        .unwrap();
        let d = twisted_mirror_data(c.host(), &c).unwrap();
        assert!(d.check_invariants().is_empty());
        let b = assemble(&d).unwrap();
        assert!(validate_hopf(b.total()).unwrap().is_valid());
        assert!(b.check_theta_coproduct().unwrap().passed());
        assert!(check_extension(&b).unwrap().passed());
    }

    #[test]
    fn trivial_twist_is_the_mirror_product() {
        let h = sweedler_h4();
        let plain = assemble(&mirror_data(&h).unwrap()).unwrap();
        let twisted = assemble(&twisted_mirror_data(&h, &Cocycle::trivial(&h)).unwrap()).unwrap();
        assert!(plain.total().same_structure(twisted.total()));
        assert_eq!(plain.theta(), twisted.theta());
        assert_eq!(plain.data().dual_cocycle(), twisted.data().dual_cocycle());
    }

    #[test]
    fn twisted_mirror_with_r0_and_coincidence() {
        let h = sweedler_h4();
        let q = verify_quasitriangular(&h, &r0(&h)).unwrap();
        let b = assemble(&twisted_mirror_data(&h, &q.cocycle().unwrap()).unwrap()).unwrap();
        assert!(validate_hopf(b.total()).unwrap().is_valid());
        let report = quasitriangular_coincidence(&h, &q).unwrap();
        assert!(report.twist_is_cop);
        assert!(report.through_theta.is_isomorphism());
    }

    #[test]
    fn host_mismatch() {
        let h = sweedler_h4();
        let z2 = FiniteGroup::cyclic(2).algebra();
        assert_eq!(twisted_mirror_data(&h, &Cocycle::trivial(&z2)), Err(CrossError::HostMismatch));
    }
}
