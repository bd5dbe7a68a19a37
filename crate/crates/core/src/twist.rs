//! Drinfeld 2-cocycles, the twisted Hopf algebra `H_χ` and quasitriangular
//! structures.
//!
//! The cocycle identity used throughout is
//! `χ₁₂ · (Δ⊗id)(χ) = χ₂₃ · (id⊗Δ)(χ)` together with
//! `(ε⊗id)χ = 1 = (id⊗ε)χ`. With it, `Δ_χ(h) = χ Δ(h) χ⁻¹` is coassociative
//! and `S_χ = U S(·) U⁻¹` with `U = χ⁽¹⁾ S(χ⁽²⁾)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::hopf::{FiniteGroup, HopfAlgebra, HopfError};
use crate::linear::{solve_linear, LinearMap, Solution};
use crate::scalar::{Field, Scalar};
use crate::tensor::{SparseTensor, TensorError};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("element is not invertible")]
    NoInverse,
    #[error("{0}")]
    Condition(Box<ConditionFailure>),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("field {field} lacks the roots of unity needed for a group of order {order}")]
    MissingRoots { order: usize, field: Field },
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Hopf(#[from] HopfError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `(ε⊗id)χ = 1`
    LeftCounit,
    /// `(id⊗ε)χ = 1`
    RightCounit,
    /// `χ₁₂ (Δ⊗id)χ = χ₂₃ (id⊗Δ)χ`
    CocycleIdentity,
    /// `R Δ(h) = Δ^cop(h) R`
    Intertwining,
    /// `(Δ⊗id)R = R₁₃ R₂₃`
    LeftHexagon,
    /// `(id⊗Δ)R = R₁₃ R₁₂`
    RightHexagon,
}

/// A violated condition with the first differing coefficient position (or
/// the basis element the condition was evaluated on) and both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionFailure {
    pub condition: Condition,
    pub basis: Vec<usize>,
    pub lhs: SparseTensor,
    pub rhs: SparseTensor,
}

impl fmt::Display for ConditionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} fails at {:?}: {} vs {}", self.condition, self.basis, self.lhs, self.rhs)
    }
}

fn compare(condition: Condition, lhs: SparseTensor, rhs: SparseTensor) -> Result<(), TwistError> {
    match lhs.first_difference(&rhs) {
        None => Ok(()),
        Some(flat) => Err(TwistError::Condition(Box::new(ConditionFailure {
            condition,
            basis: lhs.multi_index(flat),
            lhs,
            rhs,
        }))),
    }
}

fn check_host_shape(host: &HopfAlgebra, t: &SparseTensor, rank: usize) -> Result<(), TwistError> {
    if t.rank() != rank || t.shape().iter().any(|&d| d != host.dim()) {
        return Err(TwistError::Shape(format!(
            "expected an element of H^{{⊗{rank}}} for H of dimension {}, got shape {:?}",
            host.dim(),
            t.shape()
        )));
    }
    Ok(())
}

/// Two-sided inverse of `u` in the algebra `H^{⊗k}`.
pub fn invert_tensor_element(host: &HopfAlgebra, u: &SparseTensor) -> Result<SparseTensor, TwistError> {
    let k = u.rank();
    if k == 0 {
        return Err(TwistError::Shape("inversion needs k ≥ 1".into()));
    }
    check_host_shape(host, u, k)?;
    let shape = u.shape().to_vec();
    let left_mul = LinearMap::from_fn(&shape, &shape, |j| {
        host.tensor_mul(u, &SparseTensor::unit_flat(&shape, j)).expect("same shape")
    });
    let one = host.tensor_unit(k);
    let v = match solve_linear(&left_mul, &one)? {
        Solution::Unique(v) => v,
        _ => return Err(TwistError::NoInverse),
    };
    if host.tensor_mul(&v, u)? != one {
        return Err(TwistError::NoInverse);
    }
    Ok(v)
}

/// A verified 2-cocycle together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    host: HopfAlgebra,
    element: SparseTensor,
    inverse: SparseTensor,
}

impl Cocycle {
    pub fn trivial(host: &HopfAlgebra) -> Cocycle {
        let one = host.tensor_unit(2);
        Cocycle { host: host.clone(), element: one.clone(), inverse: one }
    }

    pub fn host(&self) -> &HopfAlgebra {
        &self.host
    }

    pub fn element(&self) -> &SparseTensor {
        &self.element
    }

    pub fn inverse(&self) -> &SparseTensor {
        &self.inverse
    }

    /// `χ⁻¹` as a cocycle for `H_χ`. Twisting `H_χ` by it gives back `H`.
    pub fn untwisting(&self) -> Result<Cocycle, TwistError> {
        verify_cocycle(&twist_hopf(self)?, &self.inverse)
    }
}

/// Checks both counit conditions, inverts `chi`, then checks the cocycle
/// identity.
pub fn verify_cocycle(host: &HopfAlgebra, chi: &SparseTensor) -> Result<Cocycle, TwistError> {
    check_host_shape(host, chi, 2)?;
    compare(Condition::LeftCounit, host.counit_on_leg(chi, 0)?, host.unit().clone())?;
    compare(Condition::RightCounit, host.counit_on_leg(chi, 1)?, host.unit().clone())?;
    let inverse = invert_tensor_element(host, chi)?;
    let lhs = host.tensor_mul(&host.embed(chi, &[0, 1], 3)?, &host.comult_on_leg(chi, 0)?)?;
    let rhs = host.tensor_mul(&host.embed(chi, &[1, 2], 3)?, &host.comult_on_leg(chi, 1)?)?;
    compare(Condition::CocycleIdentity, lhs, rhs)?;
    Ok(Cocycle { host: host.clone(), element: chi.clone(), inverse })
}

/// `H_χ`: same algebra and counit, `Δ_χ(h) = χ Δ(h) χ⁻¹`,
/// `S_χ(h) = U S(h) U⁻¹` with `U = χ⁽¹⁾ S(χ⁽²⁾)`.
pub fn twist_hopf(c: &Cocycle) -> Result<HopfAlgebra, TwistError> {
    let h = &c.host;
    let n = h.dim();
    let comult = LinearMap::from_fn(&[n], &[n, n], |i| {
        let d = h.tensor_mul(&c.element, h.comult().column(i)).expect("H⊗H");
        h.tensor_mul(&d, &c.inverse).expect("H⊗H")
    });
    let mut u = SparseTensor::zeros(&[n]);
    for (idx, s) in c.element.iter() {
        u.axpy(s, &h.mul(&h.basis(idx[0]), h.antipode().column(idx[1])));
    }
    let u_inv = invert_tensor_element(h, &u)?;
    let antipode = LinearMap::from_fn(&[n], &[n], |i| h.mul(&h.mul(&u, h.antipode().column(i)), &u_inv));
    Ok(HopfAlgebra::from_parts(
        h.labels().to_vec(),
        h.unit().clone(),
        h.mult().clone(),
        h.counit().clone(),
        comult,
        antipode,
    )?)
}

/// A verified universal R-matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasitriangularStructure {
    host: HopfAlgebra,
    r: SparseTensor,
    r_inverse: SparseTensor,
}

impl QuasitriangularStructure {
    pub fn host(&self) -> &HopfAlgebra {
        &self.host
    }

    pub fn r(&self) -> &SparseTensor {
        &self.r
    }

    pub fn r_inverse(&self) -> &SparseTensor {
        &self.r_inverse
    }

    /// `R` is itself a cocycle on its host; twisting by it gives `H^cop`.
    pub fn cocycle(&self) -> Result<Cocycle, TwistError> {
        verify_cocycle(&self.host, &self.r)
    }
}

pub fn verify_quasitriangular(host: &HopfAlgebra, r: &SparseTensor) -> Result<QuasitriangularStructure, TwistError> {
    check_host_shape(host, r, 2)?;
    let r_inverse = invert_tensor_element(host, r)?;
    for i in 0..host.dim() {
        let d = host.comult().column(i);
        let lhs = host.tensor_mul(r, d)?;
        let rhs = host.tensor_mul(&d.permute(&[1, 0])?, r)?;
        if lhs != rhs {
            return Err(TwistError::Condition(Box::new(ConditionFailure {
                condition: Condition::Intertwining,
                basis: vec![i],
                lhs,
                rhs,
            })));
        }
    }
    let r13 = host.embed(r, &[0, 2], 3)?;
    let r23 = host.embed(r, &[1, 2], 3)?;
    let r12 = host.embed(r, &[0, 1], 3)?;
    compare(Condition::LeftHexagon, host.comult_on_leg(r, 0)?, host.tensor_mul(&r13, &r23)?)?;
    compare(Condition::RightHexagon, host.comult_on_leg(r, 1)?, host.tensor_mul(&r13, &r12)?)?;
    Ok(QuasitriangularStructure { host: host.clone(), r: r.clone(), r_inverse })
}

/// `ℜ₂₃` viewed in `(H₀⊗H₀)⊗(H₀⊗H₀)`, a cocycle on `H₀⊗H₀` (built with
/// [`crate::hopf::tensor_hopf`]).
pub fn r_as_cocycle(q: &QuasitriangularStructure) -> Result<Cocycle, TwistError> {
    let h0 = &q.host;
    let n = h0.dim();
    let host = crate::hopf::tensor_hopf(h0, h0);
    let chi = h0.embed(&q.r, &[1, 2], 4)?.reshape(&[n * n, n * n])?;
    verify_cocycle(&host, &chi)
}

/// A character of a finite abelian group, as its values on the elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<Scalar>,
}

impl Character {
    pub fn value(&self, g: usize) -> &Scalar {
        &self.values[g]
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(Scalar::is_one)
    }
}

/// All characters `G → k^×` with values in `field`, found by assigning roots
/// of unity to a generating set and keeping the assignments that extend to
/// homomorphisms. The trivial character comes first.
pub fn characters(group: &FiniteGroup, field: Field) -> Result<Vec<Character>, TwistError> {
    if !group.is_abelian() {
        return Err(TwistError::NotAbelian);
    }
    let n = group.order();
    let e = group.identity();
    // greedy generating set
    let mut gens = Vec::new();
    let mut span = vec![e];
    for g in 0..n {
        if span.contains(&g) {
            continue;
        }
        gens.push(g);
        span = closure(group, &gens);
    }
    let choices: Vec<Vec<Scalar>> =
        gens.iter().map(|&g| field.roots_of_unity(group.element_order(g) as u64)).collect();
    let mut found = Vec::new();
    let mut pick = vec![0usize; gens.len()];
    'outer: loop {
        if let Some(values) = extend(group, &gens, &pick.iter().zip(&choices).map(|(&k, c)| c[k].clone()).collect::<Vec<_>>()) {
            found.push(Character { values });
        }
        for (slot, c) in pick.iter_mut().zip(&choices) {
            *slot += 1;
            if *slot < c.len() {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    if found.len() != n {
        return Err(TwistError::MissingRoots { order: n, field });
    }
    found.sort_by_key(|c| !c.is_trivial());
    Ok(found)
}

fn closure(group: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut span = vec![group.identity()];
    let mut i = 0;
    while i < span.len() {
        for &g in gens {
            let x = group.mul(span[i], g);
            if !span.contains(&x) {
                span.push(x);
            }
        }
        i += 1;
    }
    span
}

// values of the homomorphism sending gens[k] to images[k], if it exists
fn extend(group: &FiniteGroup, gens: &[usize], images: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = group.order();
    let mut values: Vec<Option<Scalar>> = vec![None; n];
    values[group.identity()] = Some(Scalar::one());
    let mut queue = vec![group.identity()];
    while let Some(x) = queue.pop() {
        let vx = values[x].clone().expect("visited");
        for (&g, img) in gens.iter().zip(images) {
            let y = group.mul(x, g);
            let vy = &vx * img;
            match &values[y] {
                Some(v) if *v != vy => return None,
                Some(_) => {}
                None => {
                    values[y] = Some(vy);
                    queue.push(y);
                }
            }
        }
    }
    let values: Vec<Scalar> = values.into_iter().collect::<Option<_>>()?;
    for a in 0..n {
        for b in 0..n {
            if values[group.mul(a, b)] != &values[a] * &values[b] {
                return None;
            }
        }
    }
    Some(values)
}

/// `e_φ = |G|⁻¹ Σ_g φ(g⁻¹) g`, the primitive idempotent of `φ`.
pub fn character_idempotent(group: &FiniteGroup, phi: &Character) -> Result<SparseTensor, TwistError> {
    let n = group.order();
    let scale = phi.values[0]
        .field()
        .from_int(n as i64)
        .inv()
        .ok_or_else(|| TwistError::Shape(format!("group order {n} is zero in the field")))?;
    Ok(SparseTensor::from_flat(&[n], (0..n).map(|g| (g, &scale * phi.value(group.inverse(g))))))
}

/// `χ = Σ_{φ,ψ} ω(φ,ψ) e_φ ⊗ e_ψ` on the group algebra of an abelian group,
/// verified with [`verify_cocycle`].
pub fn bicharacter_cocycle(
    group: &FiniteGroup,
    field: Field,
    omega: impl Fn(&Character, &Character) -> Scalar,
) -> Result<Cocycle, TwistError> {
    let chars = characters(group, field)?;
    let n = group.order();
    let idempotents = chars.iter().map(|c| character_idempotent(group, c)).collect::<Result<Vec<_>, _>>()?;
    let mut chi = SparseTensor::zeros(&[n, n]);
    for (phi, ep) in chars.iter().zip(&idempotents) {
        for (psi, eq) in chars.iter().zip(&idempotents) {
            chi.axpy(&field.coerce(omega(phi, psi)), &ep.outer(eq));
        }
    }
    verify_cocycle(&group.algebra(), &chi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{sweedler_h4, validate_hopf, FiniteGroup};

    fn klein() -> FiniteGroup {
        FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))
    }

    // ω(φ,ψ) = −1 exactly when φ is −1 on the second factor and ψ is −1 on
    // the first
    fn klein_omega(g: &FiniteGroup) -> impl Fn(&Character, &Character) -> Scalar {
        let a = g.index_of("(a,e)").unwrap();
        let b = g.index_of("(e,a)").unwrap();
        move |phi, psi| {
            if phi.value(b) == &Scalar::from(-1) && psi.value(a) == &Scalar::from(-1) {
                Scalar::from(-1)
            } else {
                Scalar::one()
            }
        }
    }

    fn r0(h: &HopfAlgebra) -> SparseTensor {
        let half = Scalar::ratio(1, 2);
        let (one, g) = (h.basis(0), h.basis(1));
        let mut r = one.outer(&one).add(&one.outer(&g)).unwrap().add(&g.outer(&one)).unwrap();
        r.axpy(&Scalar::from(-1), &g.outer(&g));
        r.scale(&half)
    }

    #[test]
    fn trivial_cocycle() {
        let h = sweedler_h4();
        let c = verify_cocycle(&h, &h.tensor_unit(2)).unwrap();
        assert_eq!(c.inverse(), &h.tensor_unit(2));
        assert_eq!(c, Cocycle::trivial(&h));
        assert!(twist_hopf(&c).unwrap().same_structure(&h));
    }

    #[test]
    fn inversion() {
        let h = FiniteGroup::cyclic(2).algebra();
        let g = h.basis(1);
        assert_eq!(invert_tensor_element(&h, &g.outer(&g)).unwrap(), g.outer(&g));
        let one = h.tensor_unit(2);
        assert_eq!(invert_tensor_element(&h, &one).unwrap(), one);
        // 1 + g is a zero divisor
        let zd = h.unit().add(&g).unwrap();
        assert_eq!(invert_tensor_element(&h, &zd), Err(TwistError::NoInverse));
    }

    #[test]
    fn counitality_failure() {
        let h = FiniteGroup::cyclic(2).algebra();
        let g = h.basis(1);
        let chi = h.tensor_unit(2).add(&g.outer(&g)).unwrap();
        match verify_cocycle(&h, &chi) {
            Err(TwistError::Condition(f)) => {
                assert_eq!(f.condition, Condition::LeftCounit);
                assert_eq!(f.lhs, h.unit().add(&g).unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
        // an invertible element failing counitality: 1⊗1 + ½ g⊗g
        let chi = h.tensor_unit(2).add(&g.outer(&g).scale(&Scalar::ratio(1, 2))).unwrap();
        match verify_cocycle(&h, &chi) {
            Err(TwistError::Condition(f)) => {
                assert_eq!(f.condition, Condition::LeftCounit);
                assert_eq!(f.lhs, h.element(&[("e", Scalar::one()), ("a", Scalar::ratio(1, 2))]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn klein_bicharacter() {
        let g = klein();
        let c = bicharacter_cocycle(&g, Field::Rational, klein_omega(&g)).unwrap();
        assert_ne!(c.element(), &c.host().tensor_unit(2));
        let back = c.host().tensor_mul(c.element(), c.inverse()).unwrap();
        assert_eq!(back, c.host().tensor_unit(2));
        let twisted = twist_hopf(&c).unwrap();
        assert!(validate_hopf(&twisted).unwrap().is_valid());
        // the algebra is commutative, so conjugation leaves Δ unchanged
        assert!(twisted.same_structure(c.host()));

        let trivial = bicharacter_cocycle(&g, Field::Rational, |_, _| Scalar::one()).unwrap();
        assert_eq!(trivial, Cocycle::trivial(&g.algebra()));
    }

    #[test]
    fn cyclic_three_needs_cube_roots() {
        let g = FiniteGroup::cyclic(3);
        assert!(matches!(characters(&g, Field::Rational), Err(TwistError::MissingRoots { order: 3, .. })));
        let f7 = Field::prime(7).unwrap();
        let chars = characters(&g, f7).unwrap();
        assert_eq!(chars.len(), 3);
        // ω(φ_j, φ_k) = ζ^{jk}, ζ = 2, where φ_j(a) = ζ^j
        let zeta = Scalar::modular(2, 7);
        let log = |c: &Character| (0..3).find(|&j| &zeta.pow(j) == c.value(1)).unwrap();
        let c = bicharacter_cocycle(&g, f7, |p, q| zeta.pow(log(p) * log(q))).unwrap();
        assert_ne!(c.element(), &c.host().tensor_unit(2));
        assert!(validate_hopf(&twist_hopf(&c).unwrap()).unwrap().is_valid());
    }

    #[test]
    fn nonabelian_groups_are_rejected() {
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(characters(&s3, Field::Rational), Err(TwistError::NotAbelian));
    }

    #[test]
    fn sweedler_r_matrix() {
        let h = sweedler_h4();
        let q = verify_quasitriangular(&h, &r0(&h)).unwrap();
        assert_eq!(h.tensor_mul(q.r(), q.r_inverse()).unwrap(), h.tensor_unit(2));
        let c = q.cocycle().unwrap();
        let twisted = twist_hopf(&c).unwrap();
        assert!(validate_hopf(&twisted).unwrap().is_valid());
        for i in 0..4 {
            assert_eq!(twisted.comult().column(i), &h.comult().column(i).permute(&[1, 0]).unwrap());
        }
        // untwisting returns H exactly
        let back = twist_hopf(&c.untwisting().unwrap()).unwrap();
        assert!(back.same_structure(&h));
    }

    #[test]
    fn group_r_matrices() {
        let h = FiniteGroup::cyclic(2).algebra();
        assert!(verify_quasitriangular(&h, &h.tensor_unit(2)).is_ok());
        assert!(verify_quasitriangular(&h, &r0(&h)).is_ok());
        let g = h.basis(1);
        match verify_quasitriangular(&h, &g.outer(&g)) {
            Err(TwistError::Condition(f)) => assert_eq!(f.condition, Condition::LeftHexagon),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn r_as_cocycle_on_the_square() {
        let h = sweedler_h4();
        let q = verify_quasitriangular(&h, &r0(&h)).unwrap();
        let c = r_as_cocycle(&q).unwrap();
        assert_eq!(c.host().dim(), 16);
        assert!(validate_hopf(&twist_hopf(&c).unwrap()).unwrap().is_valid());

        // 1⊗1 is only quasitriangular on cocommutative hosts
        assert!(verify_quasitriangular(&h, &h.tensor_unit(2)).is_err());
        let z2 = FiniteGroup::cyclic(2).algebra();
        let trivial = verify_quasitriangular(&z2, &z2.tensor_unit(2)).unwrap();
        let c = r_as_cocycle(&trivial).unwrap();
        assert_eq!(c, Cocycle::trivial(c.host()));
    }
}
