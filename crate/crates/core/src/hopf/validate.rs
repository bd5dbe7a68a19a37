use std::fmt;

use serde::Serialize;

use super::{HopfAlgebra, HopfError};
use crate::tensor::SparseTensor;

/// Largest dimension accepted by [`validate_hopf`].
pub const DEFAULT_DIM_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Associativity,
    LeftUnit,
    RightUnit,
    Coassociativity,
    LeftCounit,
    RightCounit,
    ComultiplicationIsAlgebraMap,
    CounitIsAlgebraMap,
    Antipode,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [
        Axiom::Associativity,
        Axiom::LeftUnit,
        Axiom::RightUnit,
        Axiom::Coassociativity,
        Axiom::LeftCounit,
        Axiom::RightCounit,
        Axiom::ComultiplicationIsAlgebraMap,
        Axiom::CounitIsAlgebraMap,
        Axiom::Antipode,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::Associativity => "associativity",
            Axiom::LeftUnit => "left_unit",
            Axiom::RightUnit => "right_unit",
            Axiom::Coassociativity => "coassociativity",
            Axiom::LeftCounit => "left_counit",
            Axiom::RightCounit => "right_counit",
            Axiom::ComultiplicationIsAlgebraMap => "comultiplication_is_algebra_map",
            Axiom::CounitIsAlgebraMap => "counit_is_algebra_map",
            Axiom::Antipode => "antipode",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// First failing basis multi-index and both evaluated sides. An empty `basis`
/// refers to the unit conditions `Δ(1) = 1⊗1` and `ε(1) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomWitness {
    pub basis: Vec<usize>,
    pub lhs: SparseTensor,
    pub rhs: SparseTensor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub witness: Option<AxiomWitness>,
}

impl AxiomCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfValidation {
    pub checks: Vec<AxiomCheck>,
}

impl HopfValidation {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(AxiomCheck::passed)
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks.iter().find(|c| c.axiom == axiom).expect("every axiom is checked")
    }

    pub fn failures(&self) -> impl Iterator<Item = &AxiomCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

pub fn validate_hopf(h: &HopfAlgebra) -> Result<HopfValidation, HopfError> {
    validate_hopf_with_cap(h, DEFAULT_DIM_CAP)
}

/// Checks all nine Hopf axioms on every basis element (pairs, triples where
/// the axiom needs them), scanning in row-major order.
pub fn validate_hopf_with_cap(h: &HopfAlgebra, cap: usize) -> Result<HopfValidation, HopfError> {
    let n = h.dim();
    if n > cap {
        return Err(HopfError::DimensionCap { dim: n, cap });
    }
    let checks = Axiom::ALL
        .iter()
        .map(|&axiom| AxiomCheck { axiom, witness: first_failure(h, axiom) })
        .collect();
    Ok(HopfValidation { checks })
}

fn witness(basis: Vec<usize>, lhs: SparseTensor, rhs: SparseTensor) -> Option<AxiomWitness> {
    (lhs != rhs).then_some(AxiomWitness { basis, lhs, rhs })
}

fn first_failure(h: &HopfAlgebra, axiom: Axiom) -> Option<AxiomWitness> {
    let n = h.dim();
    let pairs = || (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)));
    match axiom {
        Axiom::Associativity => {
            for (i, j) in pairs() {
                let ij = h.mul_basis(i, j);
                for k in 0..n {
                    let ek = h.basis(k);
                    let lhs = h.mul(ij, &ek);
                    let rhs = h.mul(&h.basis(i), h.mul_basis(j, k));
                    if let Some(w) = witness(vec![i, j, k], lhs, rhs) {
                        return Some(w);
                    }
                }
            }
            None
        }
        Axiom::LeftUnit => {
            (0..n).find_map(|i| witness(vec![i], h.mul(h.unit(), &h.basis(i)), h.basis(i)))
        }
        Axiom::RightUnit => {
            (0..n).find_map(|i| witness(vec![i], h.mul(&h.basis(i), h.unit()), h.basis(i)))
        }
        Axiom::Coassociativity => (0..n).find_map(|i| {
            let d = h.comult().column(i);
            let lhs = h.comult_on_leg(d, 0).expect("shape");
            let rhs = h.comult_on_leg(d, 1).expect("shape");
            witness(vec![i], lhs, rhs)
        }),
        Axiom::LeftCounit => (0..n).find_map(|i| {
            let lhs = h.counit_on_leg(h.comult().column(i), 0).expect("shape");
            witness(vec![i], lhs, h.basis(i))
        }),
        Axiom::RightCounit => (0..n).find_map(|i| {
            let lhs = h.counit_on_leg(h.comult().column(i), 1).expect("shape");
            witness(vec![i], lhs, h.basis(i))
        }),
        Axiom::ComultiplicationIsAlgebraMap => {
            let unit = witness(vec![], h.coproduct(h.unit()), h.tensor_unit(2));
            unit.or_else(|| {
                pairs().find_map(|(i, j)| {
                    let lhs = h.coproduct(h.mul_basis(i, j));
                    let rhs = h
                        .tensor_mul(h.comult().column(i), h.comult().column(j))
                        .expect("shape");
                    witness(vec![i, j], lhs, rhs)
                })
            })
        }
        Axiom::CounitIsAlgebraMap => {
            let one = crate::tensor::SparseTensor::scalar(crate::scalar::Scalar::one());
            let unit = witness(vec![], SparseTensor::scalar(h.counit_of(h.unit())), one);
            unit.or_else(|| {
                pairs().find_map(|(i, j)| {
                    let lhs = SparseTensor::scalar(h.counit_of(h.mul_basis(i, j)));
                    let rhs = SparseTensor::scalar(&h.counit_basis(i) * &h.counit_basis(j));
                    witness(vec![i, j], lhs, rhs)
                })
            })
        }
        Axiom::Antipode => (0..n).find_map(|i| {
            let rhs = h.unit().scale(&h.counit_basis(i));
            let d = h.comult().column(i);
            let mut left = SparseTensor::zeros(&[n]);
            let mut right = SparseTensor::zeros(&[n]);
            for (idx, c) in d.iter() {
                let (a, b) = (idx[0], idx[1]);
                left.axpy(c, &h.mul(h.antipode().column(a), &h.basis(b)));
                right.axpy(c, &h.mul(&h.basis(a), h.antipode().column(b)));
            }
            witness(vec![i], left, rhs.clone()).or_else(|| witness(vec![i], right, rhs))
        }),
    }
}
