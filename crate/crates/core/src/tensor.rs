//! Sparse multi-index tensors with exact coefficients.
//!
//! Entries are keyed by their row-major offset: the multi-index
//! `(i_0, …, i_{k-1})` of a tensor with shape `(d_0, …, d_{k-1})` lives at
//! `((i_0·d_1 + i_1)·d_2 + …)`. In particular `e_i ⊗ e_j` in `V ⊗ W` sits at
//! `i·dim W + j`, which is the global convention for every tensor power.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("index {index:?} out of bounds for shape {shape:?}")]
    OutOfBounds { index: Vec<usize>, shape: Vec<usize> },
    #[error("invalid permutation {0:?}")]
    Permutation(Vec<usize>),
}

/// A sparse tensor. No stored entry is zero.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TensorRepr", try_from = "TensorRepr")]
pub struct SparseTensor {
    shape: Vec<usize>,
    entries: BTreeMap<usize, Scalar>,
}

impl SparseTensor {
    pub fn zeros(shape: &[usize]) -> Self {
        SparseTensor { shape: shape.to_vec(), entries: BTreeMap::new() }
    }

    /// The rank-0 tensor holding `s`.
    pub fn scalar(s: Scalar) -> Self {
        Self::from_flat(&[], [(0, s)])
    }

    /// The basis tensor `e_{i_0} ⊗ … ⊗ e_{i_{k-1}}`.
    pub fn basis(shape: &[usize], index: &[usize]) -> Result<Self, TensorError> {
        let mut t = Self::zeros(shape);
        let flat = t.flat_index(index)?;
        t.entries.insert(flat, Scalar::one());
        Ok(t)
    }

    /// Basis tensor by row-major offset. Panics when out of range.
    pub fn unit_flat(shape: &[usize], flat: usize) -> Self {
        let size: usize = shape.iter().product();
        assert!(flat < size, "offset {flat} out of range for shape {shape:?}");
        Self::from_flat(shape, [(flat, Scalar::one())])
    }

    pub fn from_entries<I>(shape: &[usize], entries: I) -> Result<Self, TensorError>
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        let mut t = Self::zeros(shape);
        for (idx, s) in entries {
            let flat = t.flat_index(&idx)?;
            t.add_at(flat, &s);
        }
        Ok(t)
    }

    /// Builds from row-major offsets, summing duplicates. Panics on offsets
    /// outside the shape.
    pub fn from_flat<I>(shape: &[usize], entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, Scalar)>,
    {
        let size: usize = shape.iter().product();
        let mut t = Self::zeros(shape);
        for (flat, s) in entries {
            assert!(flat < size, "offset {flat} out of range for shape {shape:?}");
            t.add_at(flat, &s);
        }
        t
    }

    /// Dense constructor, row-major.
    pub fn from_dense(shape: &[usize], values: &[Scalar]) -> Result<Self, TensorError> {
        let size: usize = shape.iter().product();
        if values.len() != size {
            return Err(TensorError::Shape(format!(
                "{} values for shape {shape:?}",
                values.len()
            )));
        }
        Ok(Self::from_flat(shape, values.iter().cloned().enumerate()))
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    /// Number of coordinates (product of the leg dimensions).
    pub fn size(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn flat_index(&self, index: &[usize]) -> Result<usize, TensorError> {
        flat_index(&self.shape, index)
    }

    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        multi_index(&self.shape, flat)
    }

    pub fn get(&self, index: &[usize]) -> Result<Scalar, TensorError> {
        let flat = self.flat_index(index)?;
        Ok(self.get_flat(flat))
    }

    pub fn get_flat(&self, flat: usize) -> Scalar {
        self.entries.get(&flat).cloned().unwrap_or_default()
    }

    /// Nonzero entries as `(multi-index, coefficient)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (Vec<usize>, &Scalar)> + '_ {
        self.entries.iter().map(|(&f, s)| (self.multi_index(f), s))
    }

    /// Nonzero entries as `(offset, coefficient)` in row-major order.
    pub fn iter_flat(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.entries.iter().map(|(&f, s)| (f, s))
    }

    pub fn add_at(&mut self, flat: usize, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        match self.entries.get_mut(&flat) {
            Some(v) => {
                *v += s;
                if v.is_zero() {
                    self.entries.remove(&flat);
                }
            }
            None => {
                self.entries.insert(flat, s.clone());
            }
        }
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: &Scalar, other: &SparseTensor) {
        assert_eq!(self.shape, other.shape, "axpy on different shapes");
        if c.is_zero() {
            return;
        }
        for (f, s) in other.iter_flat() {
            self.add_at(f, &(c * s));
        }
    }

    pub fn add(&self, other: &SparseTensor) -> Result<SparseTensor, TensorError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.axpy(&Scalar::one(), other);
        Ok(out)
    }

    pub fn sub(&self, other: &SparseTensor) -> Result<SparseTensor, TensorError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        out.axpy(&-Scalar::one(), other);
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> SparseTensor {
        let mut out = Self::zeros(&self.shape);
        out.axpy(c, self);
        out
    }

    fn check_same_shape(&self, other: &SparseTensor) -> Result<(), TensorError> {
        if self.shape != other.shape {
            return Err(TensorError::Shape(format!("{:?} vs {:?}", self.shape, other.shape)));
        }
        Ok(())
    }

    /// Outer product; the legs of `self` come first.
    pub fn outer(&self, other: &SparseTensor) -> SparseTensor {
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        let osize = other.size();
        let mut out = Self::zeros(&shape);
        for (i, a) in self.iter_flat() {
            for (j, b) in other.iter_flat() {
                out.entries.insert(i * osize + j, a * b);
            }
        }
        out
    }

    /// Same entries, new shape of equal size.
    pub fn reshape(&self, shape: &[usize]) -> Result<SparseTensor, TensorError> {
        let size: usize = shape.iter().product();
        if size != self.size() {
            return Err(TensorError::Shape(format!(
                "cannot reshape {:?} into {shape:?}",
                self.shape
            )));
        }
        Ok(SparseTensor { shape: shape.to_vec(), entries: self.entries.clone() })
    }

    /// Contracts leg `pairs[k].0` of `self` against leg `pairs[k].1` of
    /// `other`. The result carries the free legs of `self`, then the free legs
    /// of `other`, each in their original order.
    pub fn contract(
        &self,
        other: &SparseTensor,
        pairs: &[(usize, usize)],
    ) -> Result<SparseTensor, TensorError> {
        let mut used_a = vec![false; self.rank()];
        let mut used_b = vec![false; other.rank()];
        for &(la, lb) in pairs {
            if la >= self.rank() || lb >= other.rank() {
                return Err(TensorError::Shape(format!("contraction pair ({la}, {lb}) out of range")));
            }
            if used_a[la] || used_b[lb] {
                return Err(TensorError::Shape(format!("leg repeated in pair ({la}, {lb})")));
            }
            if self.shape[la] != other.shape[lb] {
                return Err(TensorError::Shape(format!(
                    "leg {la} has dimension {} but leg {lb} has dimension {}",
                    self.shape[la], other.shape[lb]
                )));
            }
            used_a[la] = true;
            used_b[lb] = true;
        }
        let free_a: Vec<usize> = (0..self.rank()).filter(|&l| !used_a[l]).collect();
        let free_b: Vec<usize> = (0..other.rank()).filter(|&l| !used_b[l]).collect();
        let mut shape: Vec<usize> = free_a.iter().map(|&l| self.shape[l]).collect();
        shape.extend(free_b.iter().map(|&l| other.shape[l]));
        let free_b_shape: Vec<usize> = free_b.iter().map(|&l| other.shape[l]).collect();
        let free_b_size: usize = free_b_shape.iter().product();

        // bucket `other` by the values on its contracted legs
        let mut buckets: HashMap<Vec<usize>, Vec<(usize, &Scalar)>> = HashMap::new();
        for (idx, s) in other.iter() {
            let key: Vec<usize> = pairs.iter().map(|&(_, lb)| idx[lb]).collect();
            let rest: Vec<usize> = free_b.iter().map(|&l| idx[l]).collect();
            let off = flat_index(&free_b_shape, &rest).expect("in bounds");
            buckets.entry(key).or_default().push((off, s));
        }

        let free_a_shape: Vec<usize> = free_a.iter().map(|&l| self.shape[l]).collect();
        let mut out = Self::zeros(&shape);
        for (idx, a) in self.iter() {
            let key: Vec<usize> = pairs.iter().map(|&(la, _)| idx[la]).collect();
            let Some(matches) = buckets.get(&key) else { continue };
            let rest: Vec<usize> = free_a.iter().map(|&l| idx[l]).collect();
            let base = flat_index(&free_a_shape, &rest).expect("in bounds") * free_b_size;
            for &(off, b) in matches {
                out.add_at(base + off, &(a * b));
            }
        }
        Ok(out)
    }

    /// Moves leg `k` to position `perm[k]`: the entry at multi-index `i` lands
    /// at `j` with `j[perm[k]] = i[k]`.
    pub fn permute(&self, perm: &[usize]) -> Result<SparseTensor, TensorError> {
        if perm.len() != self.rank() {
            return Err(TensorError::Permutation(perm.to_vec()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || seen[p] {
                return Err(TensorError::Permutation(perm.to_vec()));
            }
            seen[p] = true;
        }
        let mut shape = vec![0; self.rank()];
        for (k, &p) in perm.iter().enumerate() {
            shape[p] = self.shape[k];
        }
        let mut out = Self::zeros(&shape);
        let mut target = vec![0; self.rank()];
        for (idx, s) in self.iter() {
            for (k, &p) in perm.iter().enumerate() {
                target[p] = idx[k];
            }
            let f = flat_index(&shape, &target).expect("in bounds");
            out.entries.insert(f, s.clone());
        }
        Ok(out)
    }

    /// First offset (row-major) where the two tensors differ.
    pub fn first_difference(&self, other: &SparseTensor) -> Option<usize> {
        let keys = self.entries.keys().chain(other.entries.keys());
        keys.filter(|&&k| self.get_flat(k) != other.get_flat(k)).min().copied()
    }

    /// Applies `f` to every coefficient (dropping results that vanish).
    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> SparseTensor {
        Self::from_flat(&self.shape, self.iter_flat().map(|(k, s)| (k, f(s))))
    }
}

impl fmt::Debug for SparseTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparseTensor{:?}{{", self.shape)?;
        for (n, (idx, s)) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{idx:?}: {s}")?;
        }
        write!(f, "}}")
    }
}

/// `{[i, j]: c, …}`, or `0` for the zero tensor.
impl fmt::Display for SparseTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        write!(f, "{{")?;
        for (n, (idx, s)) in self.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{idx:?}: {s}")?;
        }
        write!(f, "}}")
    }
}

pub fn flat_index(shape: &[usize], index: &[usize]) -> Result<usize, TensorError> {
    if index.len() != shape.len() || index.iter().zip(shape).any(|(i, d)| i >= d) {
        return Err(TensorError::OutOfBounds { index: index.to_vec(), shape: shape.to_vec() });
    }
    Ok(index.iter().zip(shape).fold(0, |acc, (i, d)| acc * d + i))
}

pub fn multi_index(shape: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; shape.len()];
    for (k, d) in shape.iter().enumerate().rev() {
        idx[k] = flat % d;
        flat /= d;
    }
    idx
}

/// Wire form: `{"shape": [...], "entries": [[i0, i1, ..., "p/q"], ...]}`.
#[derive(Serialize, Deserialize)]
struct TensorRepr {
    shape: Vec<usize>,
    entries: Vec<Vec<serde_json::Value>>,
}

impl From<SparseTensor> for TensorRepr {
    fn from(t: SparseTensor) -> Self {
        TensorRepr { shape: t.shape.clone(), entries: entries_to_json(&t) }
    }
}

impl TryFrom<TensorRepr> for SparseTensor {
    type Error = String;

    fn try_from(r: TensorRepr) -> Result<Self, Self::Error> {
        entries_from_json(&r.shape, &r.entries, &|s| s.parse::<Scalar>().map_err(|e| e.to_string()))
    }
}

/// Serializes entries as `[index..., "p/q"]` rows in row-major order.
pub fn entries_to_json(t: &SparseTensor) -> Vec<Vec<serde_json::Value>> {
    t.iter()
        .map(|(idx, s)| {
            let mut row: Vec<serde_json::Value> = idx.into_iter().map(|i| i.into()).collect();
            row.push(s.to_string().into());
            row
        })
        .collect()
}

/// Inverse of [`entries_to_json`]; `parse` turns the trailing string into a
/// scalar (so callers can pick the field).
pub fn entries_from_json(
    shape: &[usize],
    rows: &[Vec<serde_json::Value>],
    parse: &dyn Fn(&str) -> Result<Scalar, String>,
) -> Result<SparseTensor, String> {
    let mut t = SparseTensor::zeros(shape);
    for (n, row) in rows.iter().enumerate() {
        if row.len() != shape.len() + 1 {
            return Err(format!(
                "entry {n}: expected {} indices and a coefficient, got {} items",
                shape.len(),
                row.len()
            ));
        }
        let mut idx = Vec::with_capacity(shape.len());
        for v in &row[..shape.len()] {
            let i = v.as_u64().ok_or_else(|| format!("entry {n}: index {v} is not a natural number"))?;
            idx.push(i as usize);
        }
        let s = match &row[shape.len()] {
            serde_json::Value::String(s) => parse(s),
            serde_json::Value::Number(x) if x.is_i64() => parse(&x.to_string()),
            other => Err(format!("coefficient {other} must be a string \"p/q\"")),
        }
        .map_err(|e| format!("entry {n}: {e}"))?;
        let flat = flat_index(shape, &idx).map_err(|e| format!("entry {n}: {e}"))?;
        t.add_at(flat, &s);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from(n)
    }

    #[test]
    fn identity_contracted_with_vector() {
        let id = SparseTensor::from_entries(&[2, 2], [(vec![0, 0], s(1)), (vec![1, 1], s(1))]).unwrap();
        let v = SparseTensor::basis(&[2], &[0]).unwrap();
        assert_eq!(id.contract(&v, &[(1, 0)]).unwrap(), v);
    }

    #[test]
    fn swap_matrix_squares_to_identity() {
        let x = SparseTensor::from_entries(&[2, 2], [(vec![0, 1], s(1)), (vec![1, 0], s(1))]).unwrap();
        let id = SparseTensor::from_entries(&[2, 2], [(vec![0, 0], s(1)), (vec![1, 1], s(1))]).unwrap();
        assert_eq!(x.contract(&x, &[(1, 0)]).unwrap(), id);
    }

    #[test]
    fn contraction_shape_errors() {
        let a = SparseTensor::zeros(&[2, 3]);
        let b = SparseTensor::zeros(&[2]);
        assert!(matches!(a.contract(&b, &[(1, 0)]), Err(TensorError::Shape(_))));
        assert!(a.contract(&b, &[(0, 0), (0, 0)]).is_err());
        assert!(a.contract(&b, &[(5, 0)]).is_err());
    }

    #[test]
    fn flip_of_simple_tensor() {
        let x = SparseTensor::basis(&[2], &[0]).unwrap();
        let y = SparseTensor::basis(&[2], &[1]).unwrap();
        assert_eq!(x.outer(&y).permute(&[1, 0]).unwrap(), y.outer(&x));
        assert_eq!(x.outer(&y).permute(&[0, 1]).unwrap(), x.outer(&y));
    }

    #[test]
    fn bad_permutations() {
        let t = SparseTensor::zeros(&[2, 2, 2]);
        assert!(matches!(t.permute(&[0, 0, 1]), Err(TensorError::Permutation(_))));
        assert!(t.permute(&[0, 1]).is_err());
        assert!(t.permute(&[0, 1, 3]).is_err());
    }

    #[test]
    fn zero_entries_are_dropped() {
        let mut t = SparseTensor::from_entries(&[3], [(vec![1], s(2)), (vec![2], s(0))]).unwrap();
        assert_eq!(t.nnz(), 1);
        t.add_at(1, &s(-2));
        assert!(t.is_zero());
        assert!(SparseTensor::from_entries(&[3], [(vec![3], s(1))]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = SparseTensor::from_entries(&[2, 3], [(vec![1, 2], Scalar::ratio(-3, 4)), (vec![0, 0], s(5))])
            .unwrap();
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(text, r#"{"shape":[2,3],"entries":[[0,0,"5"],[1,2,"-3/4"]]}"#);
        let back: SparseTensor = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }
}
