use serde::Serialize;

use super::{HopfAlgebra, HopfError};
use crate::linear::{solve_linear, LinearMap, Solution};
use crate::tensor::SparseTensor;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bracketing {
    /// `Δ^{(k)} = (Δ ⊗ id^{⊗k−2}) ∘ Δ^{(k−1)}`
    Left,
    /// `Δ^{(k)} = (id^{⊗k−2} ⊗ Δ) ∘ Δ^{(k−1)}`
    Right,
}

/// `Δ^{(k)}: H → H^{⊗k}`, the map behind the Sweedler legs
/// `h_{(1)} ⊗ … ⊗ h_{(k)}`. `Δ^{(1)} = id` and `Δ^{(0)} = ε`.
pub fn iterated_coproduct(h: &HopfAlgebra, k: usize) -> LinearMap {
    iterated_coproduct_with(h, k, Bracketing::Left)
}

pub fn iterated_coproduct_with(h: &HopfAlgebra, k: usize, bracketing: Bracketing) -> LinearMap {
    let n = h.dim();
    if k == 0 {
        return h.counit().clone();
    }
    let shape = vec![n; k];
    LinearMap::from_fn(&[n], &shape, |i| {
        let mut t = h.basis(i);
        for r in 1..k {
            let leg = match bracketing {
                Bracketing::Left => 0,
                Bracketing::Right => r - 1,
            };
            t = h.comult_on_leg(&t, leg).expect("legs of H");
        }
        t
    })
}

/// Inverse of `f: H → A` in the convolution algebra `Hom(H, A)`, where
/// `(f ∗ g)(h) = f(h_{(1)}) g(h_{(2)})`. Returns `Ok(None)` when the
/// convolution equations `g ∗ f = ηε = f ∗ g` have no solution.
pub fn convolution_inverse(
    f: &LinearMap,
    h: &HopfAlgebra,
    a: &HopfAlgebra,
) -> Result<Option<LinearMap>, HopfError> {
    let (n, m) = (h.dim(), a.dim());
    if f.domain() != [n] || f.codomain() != [m] {
        return Err(HopfError::Shape(format!(
            "convolution inverse of a map {:?} -> {:?} over H of dim {n} into A of dim {m}",
            f.domain(),
            f.codomain()
        )));
    }
    // unknown g(e_j) = Σ_p g[j·m + p] e_p; one block of m equations per
    // (side, basis element of H)
    let unknowns = [n * m];
    let equations = [2, n, m];
    let map = LinearMap::from_fn(&unknowns, &equations, |var| {
        let (j, p) = (var / m, var % m);
        let mut col = SparseTensor::zeros(&equations);
        for i in 0..n {
            for (idx, c) in h.comult().column(i).iter() {
                let (l, r) = (idx[0], idx[1]);
                // (g ∗ f)(e_i) picks up g(e_l) f(e_r); (f ∗ g)(e_i) picks up f(e_l) g(e_r)
                if l == j {
                    let prod = a.mul(&a.basis(p), f.column(r));
                    for (k, s) in prod.iter_flat() {
                        col.add_at(i * m + k, &(c * s));
                    }
                }
                if r == j {
                    let prod = a.mul(f.column(l), &a.basis(p));
                    for (k, s) in prod.iter_flat() {
                        col.add_at(n * m + i * m + k, &(c * s));
                    }
                }
            }
        }
        col
    });
    let mut rhs = SparseTensor::zeros(&equations);
    for side in 0..2 {
        for i in 0..n {
            let target = a.unit().scale(&h.counit_basis(i));
            for (k, s) in target.iter_flat() {
                rhs.add_at((side * n + i) * m + k, s);
            }
        }
    }
    let solution = match solve_linear(&map, &rhs)? {
        Solution::NoSolution => return Ok(None),
        s => s.solution().cloned().expect("consistent system"),
    };
    Ok(Some(LinearMap::from_fn(&[n], &[m], |j| {
        SparseTensor::from_flat(&[m], (0..m).map(|p| (p, solution.get_flat(j * m + p))))
    })))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismProperty {
    Multiplicative,
    Comultiplicative,
    Unital,
    Counital,
}

/// A basis multi-index on which `property` fails (empty for the unit).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismFailure {
    pub property: MorphismProperty,
    pub basis: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HopfMorphismReport {
    pub is_algebra_map: bool,
    pub is_coalgebra_map: bool,
    pub is_unit_counit_preserving: bool,
    pub is_bijective: bool,
    pub rank: usize,
    pub failing_basis_indices: Vec<MorphismFailure>,
}

impl HopfMorphismReport {
    pub fn is_hopf_morphism(&self) -> bool {
        self.is_algebra_map && self.is_coalgebra_map && self.is_unit_counit_preserving
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_hopf_morphism() && self.is_bijective
    }
}

/// Checks `f∘m = m∘(f⊗f)`, `Δ∘f = (f⊗f)∘Δ`, `f(1) = 1` and `ε∘f = ε` on
/// every basis element, and reports the rank of `f`.
pub fn check_morphism(f: &LinearMap, src: &HopfAlgebra, dst: &HopfAlgebra) -> Result<HopfMorphismReport, HopfError> {
    let (n, m) = (src.dim(), dst.dim());
    if f.domain() != [n] || f.codomain() != [m] {
        return Err(HopfError::Shape(format!(
            "map {:?} -> {:?} between algebras of dimension {n} and {m}",
            f.domain(),
            f.codomain()
        )));
    }
    let mut failures = Vec::new();
    let mut fail = |property, basis| failures.push(MorphismFailure { property, basis });

    for i in 0..n {
        for j in 0..n {
            let lhs = f.apply(src.mul_basis(i, j))?;
            let rhs = dst.mul(f.column(i), f.column(j));
            if lhs != rhs {
                fail(MorphismProperty::Multiplicative, vec![i, j]);
            }
        }
    }
    let ff = f.kron(f);
    for i in 0..n {
        let lhs = dst.coproduct(f.column(i));
        let rhs = ff.apply(src.comult().column(i))?;
        if lhs != rhs {
            fail(MorphismProperty::Comultiplicative, vec![i]);
        }
    }
    if &f.apply(src.unit())? != dst.unit() {
        fail(MorphismProperty::Unital, vec![]);
    }
    for i in 0..n {
        if dst.counit_of(f.column(i)) != src.counit_basis(i) {
            fail(MorphismProperty::Counital, vec![i]);
        }
    }
    let has = |p: MorphismProperty| failures.iter().any(|x| x.property == p);
    let rank = f.rank();
    Ok(HopfMorphismReport {
        is_algebra_map: !has(MorphismProperty::Multiplicative),
        is_coalgebra_map: !has(MorphismProperty::Comultiplicative),
        is_unit_counit_preserving: !has(MorphismProperty::Unital) && !has(MorphismProperty::Counital),
        is_bijective: n == m && rank == n,
        rank,
        failing_basis_indices: failures,
    })
}

/// `η∘ε` as a map `H → A`.
pub fn unit_counit(h: &HopfAlgebra, a: &HopfAlgebra) -> LinearMap {
    LinearMap::from_fn(&[h.dim()], &[a.dim()], |i| a.unit().scale(&h.counit_basis(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{ground_field, structural_variant, sweedler_h4, FiniteGroup, Variant};

    #[test]
    fn grouplike_legs() {
        let h = FiniteGroup::cyclic(3).algebra();
        let d3 = iterated_coproduct(&h, 3);
        let g = h.basis(1);
        assert_eq!(d3.column(1), &g.outer(&g).outer(&g));
        assert_eq!(&iterated_coproduct(&h, 2), h.comult());
        assert_eq!(iterated_coproduct(&h, 1), LinearMap::identity(&[3]));
    }

    #[test]
    fn bracketing_is_irrelevant() {
        let h = sweedler_h4();
        for k in 1..=5 {
            assert_eq!(
                iterated_coproduct_with(&h, k, Bracketing::Left),
                iterated_coproduct_with(&h, k, Bracketing::Right),
                "k = {k}"
            );
        }
    }

    #[test]
    fn antipode_is_convolution_inverse_of_identity() {
        for h in [FiniteGroup::cyclic(2).algebra(), sweedler_h4(), FiniteGroup::symmetric(3).algebra()] {
            let id = LinearMap::identity(&[h.dim()]);
            let s = convolution_inverse(&id, &h, &h).unwrap().unwrap();
            assert_eq!(&s, h.antipode());
        }
    }

    #[test]
    fn unit_of_convolution_is_self_inverse() {
        let h = sweedler_h4();
        let ee = unit_counit(&h, &h);
        assert_eq!(convolution_inverse(&ee, &h, &h).unwrap().unwrap(), ee);
    }

    #[test]
    fn zero_map_has_no_convolution_inverse() {
        let h = sweedler_h4();
        assert_eq!(convolution_inverse(&LinearMap::zero(&[4], &[4]), &h, &h).unwrap(), None);
    }

    #[test]
    fn morphism_checks() {
        let h = sweedler_h4();
        let id = LinearMap::identity(&[4]);
        let r = check_morphism(&id, &h, &h).unwrap();
        assert!(r.is_isomorphism());

        let opcop = structural_variant(&h, Variant::OpCop).unwrap();
        assert!(check_morphism(h.antipode(), &h, &opcop).unwrap().is_isomorphism());
        // S is not a Hopf map H -> H: it reverses products
        let r = check_morphism(h.antipode(), &h, &h).unwrap();
        assert!(!r.is_algebra_map);
        assert!(!r.failing_basis_indices.is_empty());

        let k = ground_field();
        let collapse = LinearMap::from_fn(&[4], &[1], |i| SparseTensor::unit_flat(&[1], 0).scale(&h.counit_basis(i)));
        let r = check_morphism(&collapse, &h, &k).unwrap();
        assert!(r.is_hopf_morphism());
        assert!(!r.is_bijective);
        assert_eq!(r.rank, 1);
    }
}
