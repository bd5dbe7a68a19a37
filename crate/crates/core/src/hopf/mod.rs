//! Finite-dimensional Hopf algebras given by structure constants.
//!
//! A [`HopfAlgebra`] stores its multiplication `m: H⊗H → H`, comultiplication
//! `Δ: H → H⊗H`, counit `ε: H → k`, unit `1 ∈ H` and antipode `S: H → H` as
//! exact linear maps in a fixed basis. Nothing about the data is trusted:
//! [`validate_hopf`] checks every axiom on every basis element.

mod build;
mod maps;
mod validate;

pub use build::{
    dual_hopf, ground_field, group_algebra, structural_variant, sweedler_h4, tensor_hopf, FiniteGroup, Variant,
};
pub use maps::{
    check_morphism, convolution_inverse, iterated_coproduct, unit_counit, iterated_coproduct_with, Bracketing, HopfMorphismReport,
    MorphismFailure, MorphismProperty,
};
pub use validate::{validate_hopf, validate_hopf_with_cap, Axiom, AxiomCheck, AxiomWitness, HopfValidation, DEFAULT_DIM_CAP};

use thiserror::Error;

use crate::linear::LinearMap;
use crate::scalar::Scalar;
use crate::tensor::{SparseTensor, TensorError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error("inconsistent structure: {0}")]
    Shape(String),
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("antipode is not invertible")]
    SingularAntipode,
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
}

/// Structure constants of a finite-dimensional Hopf algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfAlgebra {
    labels: Vec<String>,
    unit: SparseTensor,
    mult: LinearMap,
    counit: LinearMap,
    comult: LinearMap,
    antipode: LinearMap,
}

impl HopfAlgebra {
    /// Assembles a Hopf algebra after checking that every piece has the shape
    /// dictated by `labels.len()`. The axioms are not checked here.
    pub fn from_parts(
        labels: Vec<String>,
        unit: SparseTensor,
        mult: LinearMap,
        counit: LinearMap,
        comult: LinearMap,
        antipode: LinearMap,
    ) -> Result<Self, HopfError> {
        let n = labels.len();
        if n == 0 {
            return Err(HopfError::Shape("dimension must be positive".into()));
        }
        let expect = |name: &str, ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(HopfError::Shape(format!("`{name}` has the wrong shape for dimension {n}")))
            }
        };
        expect("unit", unit.shape() == [n])?;
        expect("mult", mult.domain() == [n, n] && mult.codomain() == [n])?;
        expect("counit", counit.domain() == [n] && counit.codomain().is_empty())?;
        expect("comult", comult.domain() == [n] && comult.codomain() == [n, n])?;
        expect("antipode", antipode.domain() == [n] && antipode.codomain() == [n])?;
        Ok(HopfAlgebra { labels, unit, mult, counit, comult, antipode })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &SparseTensor {
        &self.unit
    }

    pub fn mult(&self) -> &LinearMap {
        &self.mult
    }

    pub fn counit(&self) -> &LinearMap {
        &self.counit
    }

    pub fn comult(&self) -> &LinearMap {
        &self.comult
    }

    pub fn antipode(&self) -> &LinearMap {
        &self.antipode
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, HopfError> {
        if labels.len() != self.dim() {
            return Err(HopfError::Shape(format!("{} labels for dimension {}", labels.len(), self.dim())));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_antipode(mut self, antipode: LinearMap) -> Result<Self, HopfError> {
        if antipode.domain() != [self.dim()] || antipode.codomain() != [self.dim()] {
            return Err(HopfError::Shape("`antipode` has the wrong shape".into()));
        }
        self.antipode = antipode;
        Ok(self)
    }

    pub fn basis(&self, i: usize) -> SparseTensor {
        SparseTensor::unit_flat(&[self.dim()], i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Element from `(label, coefficient)` pairs. Panics on unknown labels.
    pub fn element(&self, terms: &[(&str, Scalar)]) -> SparseTensor {
        SparseTensor::from_flat(
            &[self.dim()],
            terms.iter().map(|(l, s)| {
                let i = self.index_of(l).unwrap_or_else(|| panic!("no basis element labelled {l:?}"));
                (i, s.clone())
            }),
        )
    }

    /// `e_i · e_j`.
    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseTensor {
        self.mult.column(i * self.dim() + j)
    }

    pub fn mul(&self, a: &SparseTensor, b: &SparseTensor) -> SparseTensor {
        let n = self.dim();
        let mut out = SparseTensor::zeros(&[n]);
        for (i, x) in a.iter_flat() {
            for (j, y) in b.iter_flat() {
                out.axpy(&(x * y), self.mul_basis(i, j));
            }
        }
        out
    }

    pub fn coproduct(&self, a: &SparseTensor) -> SparseTensor {
        self.comult.apply(a).expect("element of H")
    }

    pub fn counit_of(&self, a: &SparseTensor) -> Scalar {
        self.counit.apply(a).expect("element of H").get_flat(0)
    }

    pub fn counit_basis(&self, i: usize) -> Scalar {
        self.counit.column(i).get_flat(0)
    }

    pub fn antipode_of(&self, a: &SparseTensor) -> SparseTensor {
        self.antipode.apply(a).expect("element of H")
    }

    /// The antipode's inverse, required for `H^op` and `H^cop`.
    pub fn antipode_inverse(&self) -> Result<LinearMap, HopfError> {
        self.antipode.inverse().ok_or(HopfError::SingularAntipode)
    }

    /// `1^{⊗k}`.
    pub fn tensor_unit(&self, k: usize) -> SparseTensor {
        (0..k).fold(SparseTensor::scalar(Scalar::one()), |acc, _| acc.outer(&self.unit))
    }

    /// Product in the algebra `H^{⊗k}` (factorwise).
    pub fn tensor_mul(&self, a: &SparseTensor, b: &SparseTensor) -> Result<SparseTensor, HopfError> {
        if a.shape() != b.shape() || a.shape().iter().any(|&d| d != self.dim()) {
            return Err(HopfError::Shape(format!(
                "cannot multiply tensors of shapes {:?} and {:?} in a tensor power of a {}-dimensional algebra",
                a.shape(),
                b.shape(),
                self.dim()
            )));
        }
        let mut out = SparseTensor::zeros(a.shape());
        for (ia, x) in a.iter() {
            for (ib, y) in b.iter() {
                let mut term = SparseTensor::scalar(x * y);
                for (&p, &q) in ia.iter().zip(&ib) {
                    term = term.outer(self.mul_basis(p, q));
                }
                out.axpy(&Scalar::one(), &term);
            }
        }
        Ok(out)
    }

    /// Places the legs of `t` at positions `legs` of `H^{⊗k}`, filling the
    /// remaining positions with the unit (leg numbering as in `χ_{23}`,
    /// zero-based here).
    pub fn embed(&self, t: &SparseTensor, legs: &[usize], k: usize) -> Result<SparseTensor, HopfError> {
        if legs.len() != t.rank() || legs.iter().any(|&l| l >= k) {
            return Err(HopfError::Shape(format!("cannot embed rank {} tensor at legs {legs:?} of {k}", t.rank())));
        }
        let padded = t.outer(&self.tensor_unit(k - t.rank()));
        let mut perm: Vec<usize> = legs.to_vec();
        perm.extend((0..k).filter(|l| !legs.contains(l)));
        Ok(padded.permute(&perm)?)
    }

    /// Applies `Δ` to leg `leg` of a tensor in `H^{⊗k}`.
    pub fn comult_on_leg(&self, t: &SparseTensor, leg: usize) -> Result<SparseTensor, HopfError> {
        Ok(self.comult.apply_on_leg(t, leg)?)
    }

    /// Applies `ε` to leg `leg` of a tensor in `H^{⊗k}`.
    pub fn counit_on_leg(&self, t: &SparseTensor, leg: usize) -> Result<SparseTensor, HopfError> {
        Ok(self.counit.apply_on_leg(t, leg)?)
    }

    /// Compares everything except labels. Returns the name of the first
    /// differing structure map, if any.
    pub fn structure_difference(&self, other: &HopfAlgebra) -> Option<&'static str> {
        if self.dim() != other.dim() {
            return Some("dim");
        }
        [
            ("unit", self.unit == other.unit),
            ("mult", self.mult == other.mult),
            ("counit", self.counit == other.counit),
            ("comult", self.comult == other.comult),
            ("antipode", self.antipode == other.antipode),
        ]
        .into_iter()
        .find(|(_, same)| !same)
        .map(|(name, _)| name)
    }

    pub fn same_structure(&self, other: &HopfAlgebra) -> bool {
        self.structure_difference(other).is_none()
    }
}
