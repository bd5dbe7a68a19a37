//! Linear maps between tensor spaces and exact Gaussian elimination.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::scalar::Scalar;
use crate::tensor::{SparseTensor, TensorError};

/// A linear map stored by the images of the domain basis (row-major).
///
/// The coefficient tensor of shape `codomain ++ domain` is available through
/// [`LinearMap::to_tensor`]; columns are the internal form because every
/// consumer in this crate evaluates maps one basis element at a time.
#[derive(Clone, PartialEq, Eq)]
pub struct LinearMap {
    domain: Vec<usize>,
    codomain: Vec<usize>,
    columns: Vec<SparseTensor>,
}

impl LinearMap {
    pub fn new(domain: &[usize], codomain: &[usize], columns: Vec<SparseTensor>) -> Result<Self, TensorError> {
        let dsize: usize = domain.iter().product();
        if columns.len() != dsize {
            return Err(TensorError::Shape(format!(
                "{} columns for domain {domain:?}",
                columns.len()
            )));
        }
        if let Some(c) = columns.iter().find(|c| c.shape() != codomain) {
            return Err(TensorError::Shape(format!(
                "column of shape {:?} for codomain {codomain:?}",
                c.shape()
            )));
        }
        Ok(LinearMap { domain: domain.to_vec(), codomain: codomain.to_vec(), columns })
    }

    /// Builds the map from the image of each domain basis offset.
    pub fn from_fn(domain: &[usize], codomain: &[usize], mut f: impl FnMut(usize) -> SparseTensor) -> Self {
        let dsize: usize = domain.iter().product();
        let columns = (0..dsize)
            .map(|i| {
                let c = f(i);
                assert_eq!(c.shape(), codomain, "image of basis {i} has the wrong shape");
                c
            })
            .collect();
        LinearMap { domain: domain.to_vec(), codomain: codomain.to_vec(), columns }
    }

    pub fn identity(shape: &[usize]) -> Self {
        Self::from_fn(shape, shape, |i| SparseTensor::unit_flat(shape, i))
    }

    pub fn zero(domain: &[usize], codomain: &[usize]) -> Self {
        Self::from_fn(domain, codomain, |_| SparseTensor::zeros(codomain))
    }

    /// Interprets the trailing `domain_rank` legs of `t` as the domain.
    pub fn from_tensor(t: &SparseTensor, domain_rank: usize) -> Result<Self, TensorError> {
        if domain_rank > t.rank() {
            return Err(TensorError::Shape(format!("domain rank {domain_rank} exceeds tensor rank {}", t.rank())));
        }
        let split = t.rank() - domain_rank;
        let codomain = t.shape()[..split].to_vec();
        let domain = t.shape()[split..].to_vec();
        let dsize: usize = domain.iter().product();
        let mut cols = vec![SparseTensor::zeros(&codomain); dsize];
        for (flat, s) in t.iter_flat() {
            cols[flat % dsize].add_at(flat / dsize, s);
        }
        Ok(LinearMap { domain, codomain, columns: cols })
    }

    /// Coefficient tensor with shape `codomain ++ domain`.
    pub fn to_tensor(&self) -> SparseTensor {
        let mut shape = self.codomain.clone();
        shape.extend_from_slice(&self.domain);
        let dsize = self.domain_size();
        SparseTensor::from_flat(
            &shape,
            self.columns
                .iter()
                .enumerate()
                .flat_map(|(j, c)| c.iter_flat().map(move |(i, s)| (i * dsize + j, s.clone()))),
        )
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn codomain(&self) -> &[usize] {
        &self.codomain
    }

    pub fn domain_size(&self) -> usize {
        self.domain.iter().product()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain.iter().product()
    }

    pub fn column(&self, i: usize) -> &SparseTensor {
        &self.columns[i]
    }

    pub fn columns(&self) -> &[SparseTensor] {
        &self.columns
    }

    pub fn apply(&self, v: &SparseTensor) -> Result<SparseTensor, TensorError> {
        if v.size() != self.domain_size() {
            return Err(TensorError::Shape(format!(
                "vector of shape {:?} fed to map with domain {:?}",
                v.shape(),
                self.domain
            )));
        }
        let mut out = SparseTensor::zeros(&self.codomain);
        for (i, s) in v.iter_flat() {
            out.axpy(s, &self.columns[i]);
        }
        Ok(out)
    }

    /// Image of a basis offset.
    pub fn apply_basis(&self, i: usize) -> &SparseTensor {
        &self.columns[i]
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap, TensorError> {
        if inner.codomain_size() != self.domain_size() {
            return Err(TensorError::Shape(format!(
                "cannot compose map with domain {:?} after map with codomain {:?}",
                self.domain, inner.codomain
            )));
        }
        let columns = inner.columns.iter().map(|c| self.apply(c)).collect::<Result<_, _>>()?;
        Ok(LinearMap { domain: inner.domain.clone(), codomain: self.codomain.clone(), columns })
    }

    /// `self ⊗ other`, acting on row-major tensor products.
    pub fn kron(&self, other: &LinearMap) -> LinearMap {
        let mut domain = self.domain.clone();
        domain.extend_from_slice(&other.domain);
        let mut codomain = self.codomain.clone();
        codomain.extend_from_slice(&other.codomain);
        let od = other.domain_size();
        Self::from_fn(&domain, &codomain, |f| self.columns[f / od].outer(&other.columns[f % od]))
    }

    /// Applies a map with a single-leg domain to leg `leg` of `t`. The
    /// codomain legs of the map replace that leg in place.
    pub fn apply_on_leg(&self, t: &SparseTensor, leg: usize) -> Result<SparseTensor, TensorError> {
        if self.domain.len() != 1 || leg >= t.rank() || t.shape()[leg] != self.domain[0] {
            return Err(TensorError::Shape(format!(
                "cannot apply map with domain {:?} to leg {leg} of shape {:?}",
                self.domain,
                t.shape()
            )));
        }
        let shape = t.shape();
        let mut out_shape = shape[..leg].to_vec();
        out_shape.extend_from_slice(&self.codomain);
        out_shape.extend_from_slice(&shape[leg + 1..]);
        let tail: usize = shape[leg + 1..].iter().product();
        let csize = self.codomain_size();
        let mut out = SparseTensor::zeros(&out_shape);
        for (flat, s) in t.iter_flat() {
            let head = flat / (tail * shape[leg]);
            let i = (flat / tail) % shape[leg];
            let rest = flat % tail;
            for (j, c) in self.columns[i].iter_flat() {
                out.add_at((head * csize + j) * tail + rest, &(s * c));
            }
        }
        Ok(out)
    }

    /// Same coefficients with domain and codomain reshaped (sizes must agree).
    pub fn reshape(&self, domain: &[usize], codomain: &[usize]) -> Result<LinearMap, TensorError> {
        if domain.iter().product::<usize>() != self.domain_size() {
            return Err(TensorError::Shape(format!("cannot reshape domain {:?} into {domain:?}", self.domain)));
        }
        let columns = self.columns.iter().map(|c| c.reshape(codomain)).collect::<Result<_, _>>()?;
        Ok(LinearMap { domain: domain.to_vec(), codomain: codomain.to_vec(), columns })
    }

    /// The transposed map (codomain and domain swap roles).
    pub fn transpose(&self) -> LinearMap {
        let mut columns = vec![SparseTensor::zeros(&self.domain); self.codomain_size()];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, s) in c.iter_flat() {
                columns[i].add_at(j, s);
            }
        }
        LinearMap { domain: self.codomain.clone(), codomain: self.domain.clone(), columns }
    }

    pub fn add(&self, other: &LinearMap) -> Result<LinearMap, TensorError> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(TensorError::Shape("adding maps of different shapes".into()));
        }
        let columns = self.columns.iter().zip(&other.columns).map(|(a, b)| a.add(b)).collect::<Result<_, _>>()?;
        Ok(LinearMap { domain: self.domain.clone(), codomain: self.codomain.clone(), columns })
    }

    pub fn scale(&self, c: &Scalar) -> LinearMap {
        LinearMap {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            columns: self.columns.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        Elimination::new(self, &[]).rank
    }

    /// Two-sided inverse, `None` when the map is not square or singular.
    pub fn inverse(&self) -> Option<LinearMap> {
        if self.domain_size() != self.codomain_size() {
            return None;
        }
        let rhs: Vec<SparseTensor> =
            (0..self.codomain_size()).map(|i| SparseTensor::unit_flat(&self.codomain, i)).collect();
        let sols = solve_many(self, &rhs).ok()?;
        let columns = sols
            .into_iter()
            .map(|s| match s {
                Solution::Unique(x) => Some(x),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        // column k of the inverse is the preimage of e_k; transpose into images
        let mut images = vec![SparseTensor::zeros(&self.domain); self.codomain_size()];
        for (k, x) in columns.into_iter().enumerate() {
            images[k] = x;
        }
        Some(LinearMap { domain: self.codomain.clone(), codomain: self.domain.clone(), columns: images })
    }
}

impl fmt::Debug for LinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearMap({:?} -> {:?}) {:?}", self.domain, self.codomain, self.columns)
    }
}

/// Outcome of [`solve_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(SparseTensor),
    /// One particular solution; the kernel has dimension `nullity > 0`.
    NonUnique { solution: SparseTensor, nullity: usize },
    NoSolution,
}

impl Solution {
    pub fn solution(&self) -> Option<&SparseTensor> {
        match self {
            Solution::Unique(x) | Solution::NonUnique { solution: x, .. } => Some(x),
            Solution::NoSolution => None,
        }
    }
}

/// Solves `map(x) = rhs` exactly.
pub fn solve_linear(map: &LinearMap, rhs: &SparseTensor) -> Result<Solution, TensorError> {
    Ok(solve_many(map, std::slice::from_ref(rhs))?.pop().expect("one right-hand side"))
}

/// Solves `map(x) = b` for every `b` in `rhs` with a single elimination.
pub fn solve_many(map: &LinearMap, rhs: &[SparseTensor]) -> Result<Vec<Solution>, TensorError> {
    if let Some(b) = rhs.iter().find(|b| b.size() != map.codomain_size()) {
        return Err(TensorError::Shape(format!(
            "right-hand side of shape {:?} for codomain {:?}",
            b.shape(),
            map.codomain()
        )));
    }
    let elim = Elimination::new(map, rhs);
    let n = map.domain_size();
    let nullity = n - elim.rank;
    Ok((0..rhs.len())
        .map(|r| {
            let col = n + r;
            if elim.inconsistent(col) {
                return Solution::NoSolution;
            }
            let mut x = SparseTensor::zeros(map.domain());
            for (row, &pivot) in elim.rows.iter().zip(&elim.pivots) {
                if let (Some(p), Some(v)) = (pivot, row.get(&col)) {
                    x.add_at(p, v);
                }
            }
            if nullity == 0 {
                Solution::Unique(x)
            } else {
                Solution::NonUnique { solution: x, nullity }
            }
        })
        .collect())
}

type Row = BTreeMap<usize, Scalar>;

/// Sparse Gauss–Jordan elimination over `[A | B]`, pivoting on the sparsest
/// available row for each variable column.
struct Elimination {
    rows: Vec<Row>,
    /// Pivot column of each row after reduction (`None` for non-pivot rows).
    pivots: Vec<Option<usize>>,
    rank: usize,
    nvars: usize,
}

impl Elimination {
    fn new(map: &LinearMap, rhs: &[SparseTensor]) -> Self {
        let n = map.domain_size();
        let m = map.codomain_size();
        let mut rows: Vec<Row> = vec![Row::new(); m];
        for (j, c) in map.columns().iter().enumerate() {
            for (i, s) in c.iter_flat() {
                rows[i].insert(j, s.clone());
            }
        }
        for (r, b) in rhs.iter().enumerate() {
            for (i, s) in b.iter_flat() {
                rows[i].insert(n + r, s.clone());
            }
        }
        // column -> rows containing it, kept as a superset (entries may cancel)
        let mut occurs: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for (i, row) in rows.iter().enumerate() {
            for &j in row.keys().take_while(|&&j| j < n) {
                occurs[j].insert(i);
            }
        }
        let mut pivots = vec![None; m];
        let mut used = vec![false; m];
        let mut rank = 0;
        for col in 0..n {
            let candidate = occurs[col]
                .iter()
                .copied()
                .filter(|&i| !used[i] && rows[i].contains_key(&col))
                .min_by_key(|&i| (rows[i].len(), i));
            let Some(p) = candidate else { continue };
            used[p] = true;
            pivots[p] = Some(col);
            rank += 1;
            let inv = rows[p][&col].inv().expect("pivot is nonzero");
            for v in rows[p].values_mut() {
                *v *= &inv;
            }
            let pivot_row = rows[p].clone();
            let targets: Vec<usize> = occurs[col].iter().copied().collect();
            for i in targets {
                if i == p {
                    continue;
                }
                let Some(factor) = rows[i].get(&col).cloned() else { continue };
                for (&j, v) in &pivot_row {
                    let delta = &factor * v;
                    let entry = rows[i].entry(j).or_default();
                    *entry -= &delta;
                    if entry.is_zero() {
                        rows[i].remove(&j);
                    } else if j < n && j > col {
                        occurs[j].insert(i);
                    }
                }
            }
        }
        Elimination { rows, pivots, rank, nvars: n }
    }

    fn inconsistent(&self, col: usize) -> bool {
        self.rows
            .iter()
            .zip(&self.pivots)
            .any(|(row, p)| p.is_none() && row.contains_key(&col) && row.keys().all(|&j| j >= self.nvars))
    }
}
