//! Constructors: group algebras, the Sweedler algebra, op/cop variants, duals
//! and tensor products.

use super::{HopfAlgebra, HopfError};
use crate::linear::LinearMap;
use crate::scalar::Scalar;
use crate::tensor::SparseTensor;

/// A finite group by multiplication table, `table[a][b] = a·b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    labels: Vec<String>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the group axioms (closure, associativity, identity, inverses).
    pub fn new(table: Vec<Vec<usize>>, labels: Vec<String>) -> Result<Self, HopfError> {
        let n = table.len();
        if n == 0 {
            return Err(HopfError::NotAGroup("empty table".into()));
        }
        if labels.len() != n {
            return Err(HopfError::NotAGroup(format!("{} labels for {n} elements", labels.len())));
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(HopfError::NotAGroup(format!("row {a} has length {}", row.len())));
            }
            if let Some(&c) = row.iter().find(|&&c| c >= n) {
                return Err(HopfError::NotAGroup(format!("closure: product {c} out of range in row {a}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(HopfError::NotAGroup(format!("associativity fails at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| HopfError::NotAGroup("identity: no two-sided identity element".into()))?;
        let inverses = (0..n)
            .map(|g| {
                (0..n)
                    .find(|&h| table[g][h] == identity && table[h][g] == identity)
                    .ok_or_else(|| HopfError::NotAGroup(format!("inverses: element {g} has no inverse")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteGroup { table, labels, identity, inverses })
    }

    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self, HopfError> {
        let labels = (0..table.len()).map(|i| format!("g{i}")).collect();
        Self::new(table, labels)
    }

    /// `Z_n` with elements `0..n` labelled `e, a, a^2, …`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let labels = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "a".to_string(),
                k => format!("a^{k}"),
            })
            .collect();
        Self::new(table, labels).expect("cyclic groups are groups")
    }

    /// Direct product; `(a, b)` has index `a·|B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order(), b.order());
        let n = na * nb;
        let table = (0..n)
            .map(|x| (0..n).map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb)).collect())
            .collect();
        let labels = (0..n).map(|x| format!("({},{})", a.labels[x / nb], b.labels[x % nb])).collect();
        Self::new(table, labels).expect("products of groups are groups")
    }

    /// The symmetric group on `{1..n}` in lexicographic order of images, with
    /// `(στ)(x) = σ(τ(x))` and cycle-notation labels.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index(&(0..n).map(|x| s[t[x]]).collect()))
                    .collect()
            })
            .collect();
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::new(table, labels).expect("symmetric groups are groups")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Order of the element `g`.
    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.table[x][g];
            k += 1;
        }
        k
    }

    /// The group algebra `kG`: `Δg = g⊗g`, `ε(g) = 1`, `S(g) = g^{-1}`.
    pub fn algebra(&self) -> HopfAlgebra {
        let n = self.order();
        let one = Scalar::one();
        let unit = SparseTensor::unit_flat(&[n], self.identity);
        let mult = LinearMap::from_fn(&[n, n], &[n], |f| SparseTensor::unit_flat(&[n], self.table[f / n][f % n]));
        let counit = LinearMap::from_fn(&[n], &[], |_| SparseTensor::scalar(one.clone()));
        let comult = LinearMap::from_fn(&[n], &[n, n], |g| SparseTensor::unit_flat(&[n, n], g * n + g));
        let antipode = LinearMap::from_fn(&[n], &[n], |g| SparseTensor::unit_flat(&[n], self.inverses[g]));
        HopfAlgebra::from_parts(self.labels.clone(), unit, mult, counit, comult, antipode)
            .expect("group algebra shapes are consistent")
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in permutations(n - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".into()
    } else {
        out
    }
}

/// Group algebra of the group with multiplication table `table`.
pub fn group_algebra(table: &[Vec<usize>]) -> Result<HopfAlgebra, HopfError> {
    Ok(FiniteGroup::from_table(table.to_vec())?.algebra())
}

/// Sweedler's four-dimensional Hopf algebra with basis `{1, g, x, gx}`:
/// `g² = 1`, `x² = 0`, `xg = −gx`, `Δg = g⊗g`, `Δx = x⊗1 + g⊗x`,
/// `ε(g) = 1`, `ε(x) = 0`, `S(g) = g`, `S(x) = −gx`.
pub fn sweedler_h4() -> HopfAlgebra {
    const ONE: usize = 0;
    const G: usize = 1;
    const X: usize = 2;
    const GX: usize = 3;
    let n = 4;
    let s = Scalar::from;
    let v = |terms: &[(usize, i64)]| SparseTensor::from_flat(&[n], terms.iter().map(|&(i, c)| (i, s(c))));
    let products: [[&[(usize, i64)]; 4]; 4] = [
        [&[(ONE, 1)], &[(G, 1)], &[(X, 1)], &[(GX, 1)]],
        [&[(G, 1)], &[(ONE, 1)], &[(GX, 1)], &[(X, 1)]],
        [&[(X, 1)], &[(GX, -1)], &[], &[]],
        [&[(GX, 1)], &[(X, -1)], &[], &[]],
    ];
    let mult = LinearMap::from_fn(&[n, n], &[n], |f| v(products[f / n][f % n]));
    let t2 = |terms: &[(usize, usize, i64)]| {
        SparseTensor::from_flat(&[n, n], terms.iter().map(|&(i, j, c)| (i * n + j, s(c))))
    };
    let coproducts = [
        t2(&[(ONE, ONE, 1)]),
        t2(&[(G, G, 1)]),
        t2(&[(X, ONE, 1), (G, X, 1)]),
        t2(&[(GX, G, 1), (ONE, GX, 1)]),
    ];
    let comult = LinearMap::from_fn(&[n], &[n, n], |i| coproducts[i].clone());
    let counit = LinearMap::from_fn(&[n], &[], |i| SparseTensor::scalar(s(if i < 2 { 1 } else { 0 })));
    let antipodes: [&[(usize, i64)]; 4] = [&[(ONE, 1)], &[(G, 1)], &[(GX, -1)], &[(X, 1)]];
    let antipode = LinearMap::from_fn(&[n], &[n], |i| v(antipodes[i]));
    let labels = ["1", "g", "x", "gx"].iter().map(|l| l.to_string()).collect();
    HopfAlgebra::from_parts(labels, v(&[(ONE, 1)]), mult, counit, comult, antipode)
        .expect("H4 shapes are consistent")
}

/// The one-dimensional Hopf algebra `k`.
pub fn ground_field() -> HopfAlgebra {
    let e = || SparseTensor::unit_flat(&[1], 0);
    HopfAlgebra::from_parts(
        vec!["1".into()],
        e(),
        LinearMap::from_fn(&[1, 1], &[1], |_| e()),
        LinearMap::from_fn(&[1], &[], |_| SparseTensor::scalar(Scalar::one())),
        LinearMap::from_fn(&[1], &[1, 1], |_| SparseTensor::unit_flat(&[1, 1], 0)),
        LinearMap::identity(&[1]),
    )
    .expect("k shapes are consistent")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Op,
    Cop,
    OpCop,
}

/// `H^op`, `H^cop` or `H^{op,cop}`. The antipode of the first two is `S^{-1}`;
/// `H^{op,cop}` keeps `S`.
pub fn structural_variant(h: &HopfAlgebra, mode: Variant) -> Result<HopfAlgebra, HopfError> {
    let n = h.dim();
    let flip = LinearMap::from_fn(&[n, n], &[n, n], |f| SparseTensor::unit_flat(&[n, n], (f % n) * n + f / n));
    let (mult, comult, antipode) = match mode {
        Variant::Op => (h.mult().compose(&flip)?, h.comult().clone(), h.antipode_inverse()?),
        Variant::Cop => (h.mult().clone(), flip.compose(h.comult())?, h.antipode_inverse()?),
        Variant::OpCop => (h.mult().compose(&flip)?, flip.compose(h.comult())?, h.antipode().clone()),
    };
    HopfAlgebra::from_parts(h.labels().to_vec(), h.unit().clone(), mult, h.counit().clone(), comult, antipode)
}

/// The dual Hopf algebra in the dual basis: every structure map is the
/// transpose of its partner (`m* = Δᵀ`, `Δ* = mᵀ`, `1* = ε`, `ε* = 1`).
pub fn dual_hopf(h: &HopfAlgebra) -> HopfAlgebra {
    let n = h.dim();
    let unit = SparseTensor::from_flat(&[n], (0..n).map(|i| (i, h.counit_basis(i))));
    let counit = LinearMap::from_fn(&[n], &[], |i| SparseTensor::scalar(h.unit().get_flat(i)));
    let labels = h.labels().iter().map(|l| format!("{l}*")).collect();
    HopfAlgebra::from_parts(labels, unit, h.comult().transpose(), counit, h.mult().transpose(), h.antipode().transpose())
        .expect("transposes have dual shapes")
}

/// `A ⊗ B` with componentwise structure; `e_i ⊗ e_j` has index `i·dim B + j`.
pub fn tensor_hopf(a: &HopfAlgebra, b: &HopfAlgebra) -> HopfAlgebra {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let unit = a.unit().outer(b.unit()).reshape(&[n]).expect("size");
    let mult = LinearMap::from_fn(&[n, n], &[n], |f| {
        let (x, y) = (f / n, f % n);
        a.mul_basis(x / nb, y / nb).outer(b.mul_basis(x % nb, y % nb)).reshape(&[n]).expect("size")
    });
    let comult = LinearMap::from_fn(&[n], &[n, n], |x| {
        a.comult()
            .column(x / nb)
            .outer(b.comult().column(x % nb))
            .permute(&[0, 2, 1, 3])
            .and_then(|t| t.reshape(&[n, n]))
            .expect("size")
    });
    let counit = LinearMap::from_fn(&[n], &[], |x| {
        SparseTensor::scalar(&a.counit_basis(x / nb) * &b.counit_basis(x % nb))
    });
    let antipode = a.antipode().kron(b.antipode()).reshape(&[n], &[n]).expect("size");
    let labels = a
        .labels()
        .iter()
        .flat_map(|la| b.labels().iter().map(move |lb| format!("{la}⊗{lb}")))
        .collect();
    HopfAlgebra::from_parts(labels, unit, mult, counit, comult, antipode).expect("tensor shapes are consistent")
}
