//! Helpers shared by the integration tests and the acceptance target.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use hopfcross::hopf::HopfAlgebra;
use hopfcross::io::{load_cocycle, load_element, load_hopf, LoadOptions};
use hopfcross::scalar::Scalar;
use hopfcross::tensor::{multi_index, SparseTensor};
use hopfcross::twist::Cocycle;
use rand::Rng;

pub fn examples_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/examples")
}

pub fn identities_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/identities/twisted_mirror.sw")
}

pub fn shipped(name: &str) -> HopfAlgebra {
    load_hopf(&examples_dir().join(name), &LoadOptions::default()).unwrap_or_else(|e| panic!("{e}"))
}

pub const SHIPPED: [&str; 4] = ["kz2.json", "kz2xz2.json", "s3.json", "h4.json"];

pub fn shipped_algebras() -> Vec<(&'static str, HopfAlgebra)> {
    SHIPPED.iter().map(|n| (*n, shipped(n))).collect()
}

/// The shipped cocycles with their hosts: the bicharacter on the Klein group
/// and R0 on H4.
pub fn shipped_cocycles() -> Vec<(&'static str, Cocycle)> {
    ["bichar.json", "r0.json"]
        .iter()
        .map(|n| (*n, load_cocycle(&examples_dir().join(n), &LoadOptions::default()).unwrap_or_else(|e| panic!("{e}"))))
        .collect()
}

pub fn r0() -> (HopfAlgebra, SparseTensor) {
    let e = load_element(&examples_dir().join("r0.json"), &LoadOptions::default()).unwrap();
    (e.host, e.element)
}

/// Contraction by explicit loops over every output and every contracted
/// index, reading entries one by one.
pub fn dense_contract(a: &SparseTensor, b: &SparseTensor, pairs: &[(usize, usize)]) -> SparseTensor {
    let free_a: Vec<usize> = (0..a.rank()).filter(|l| !pairs.iter().any(|p| p.0 == *l)).collect();
    let free_b: Vec<usize> = (0..b.rank()).filter(|l| !pairs.iter().any(|p| p.1 == *l)).collect();
    let mut shape: Vec<usize> = free_a.iter().map(|&l| a.shape()[l]).collect();
    shape.extend(free_b.iter().map(|&l| b.shape()[l]));
    let inner: Vec<usize> = pairs.iter().map(|&(l, _)| a.shape()[l]).collect();
    let inner_size: usize = inner.iter().product();
    let out_size: usize = shape.iter().product();
    let mut values = Vec::with_capacity(out_size);
    for flat in 0..out_size {
        let out = multi_index(&shape, flat);
        let mut sum = Scalar::zero();
        for k in 0..inner_size {
            let c = multi_index(&inner, k);
            let mut ia = vec![0; a.rank()];
            let mut ib = vec![0; b.rank()];
            for (pos, &l) in free_a.iter().enumerate() {
                ia[l] = out[pos];
            }
            for (pos, &l) in free_b.iter().enumerate() {
                ib[l] = out[free_a.len() + pos];
            }
            for (p, &(la, lb)) in pairs.iter().enumerate() {
                ia[la] = c[p];
                ib[lb] = c[p];
            }
            sum = &sum + &(&a.get(&ia).unwrap() * &b.get(&ib).unwrap());
        }
        values.push(sum);
    }
    SparseTensor::from_dense(&shape, &values).unwrap()
}

/// A sparse tensor with small rational entries.
pub fn random_tensor(rng: &mut impl Rng, shape: &[usize]) -> SparseTensor {
    let size: usize = shape.iter().product();
    let density = rng.gen_range(0.0..1.0);
    let mut entries = Vec::new();
    for i in 0..size {
        if rng.gen_bool(density) {
            entries.push((i, Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4))));
        }
    }
    SparseTensor::from_flat(shape, entries)
}

/// Two tensors of rank at most 3 with legs of dimension at most 6 and a
/// random set of compatible contraction pairs.
pub fn random_contraction(rng: &mut impl Rng) -> (SparseTensor, SparseTensor, Vec<(usize, usize)>) {
    let ra = rng.gen_range(1..=3);
    let rb = rng.gen_range(1..=3);
    let shape_a: Vec<usize> = (0..ra).map(|_| rng.gen_range(1..=6)).collect();
    let mut shape_b: Vec<usize> = (0..rb).map(|_| rng.gen_range(1..=6)).collect();
    let mut legs_b: Vec<usize> = (0..rb).collect();
    let mut pairs = Vec::new();
    for la in 0..ra {
        if legs_b.is_empty() || !rng.gen_bool(0.5) {
            continue;
        }
        let lb = legs_b.swap_remove(rng.gen_range(0..legs_b.len()));
        shape_b[lb] = shape_a[la];
        pairs.push((la, lb));
    }
    (random_tensor(rng, &shape_a), random_tensor(rng, &shape_b), pairs)
}
