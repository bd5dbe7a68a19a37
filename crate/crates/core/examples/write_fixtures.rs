//! Regenerates the definition files under `data/examples`.
//!
//! ```text
//! cargo run -p hopfcross --example write_fixtures -- data/examples
//! ```

use std::fs;
use std::path::Path;

use hopfcross::hopf::{sweedler_h4, FiniteGroup, HopfAlgebra};
use hopfcross::io::{element_to_json, hopf_to_json, hopf_to_value, to_canonical_json};
use hopfcross::linear::LinearMap;
use hopfcross::scalar::{Field, Scalar};
use hopfcross::tensor::SparseTensor;
use hopfcross::twist::{bicharacter_cocycle, character_idempotent, characters, verify_cocycle, verify_quasitriangular};

fn klein() -> FiniteGroup {
    FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2))
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap_or_else(|e| panic!("{name}: {e}"));
    println!("wrote {name}");
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "data/examples".into());
    let dir = Path::new(&dir);
    let k = klein();
    write(dir, "kz2.json", &hopf_to_json(&FiniteGroup::cyclic(2).algebra()));
    write(dir, "kz2xz2.json", &hopf_to_json(&k.algebra()));
    write(dir, "s3.json", &hopf_to_json(&FiniteGroup::symmetric(3).algebra()));
    let h4 = sweedler_h4();
    write(dir, "h4.json", &hopf_to_json(&h4));

    // ω(φ,ψ) = −1 exactly when φ is −1 on (e,a) and ψ is −1 on (a,e)
    let (a, b) = (k.index_of("(a,e)").unwrap(), k.index_of("(e,a)").unwrap());
    let minus = Scalar::from(-1);
    let c = bicharacter_cocycle(&k, Field::Rational, |p, q| {
        if p.value(b) == &minus && q.value(a) == &minus { minus.clone() } else { Scalar::one() }
    })
    .expect("the bicharacter is a cocycle");
    write(dir, "bichar.json", &element_to_json("kz2xz2.json", c.element()));

    // the same construction with ω(φ,φ) = 2 for one nontrivial φ: normalised
    // and invertible, but ω is not a 2-cocycle on the character group
    let chars = characters(&k, Field::Rational).unwrap();
    let n = k.order();
    let mut bad = SparseTensor::zeros(&[n, n]);
    for (i, phi) in chars.iter().enumerate() {
        let ep = character_idempotent(&k, phi).unwrap();
        for (j, psi) in chars.iter().enumerate() {
            let eq = character_idempotent(&k, psi).unwrap();
            let first_nontrivial = chars.iter().position(|c| !c.is_trivial()).unwrap();
            let w = if i == j && i == first_nontrivial { Scalar::from(2) } else { Scalar::one() };
            bad.axpy(&w, &ep.outer(&eq));
        }
    }
    assert!(verify_cocycle(&k.algebra(), &bad).is_err());
    write(dir, "not_a_cocycle.json", &element_to_json("kz2xz2.json", &bad));

    let (one, g) = (h4.basis(0), h4.basis(1));
    let mut r0 = one.outer(&one).add(&one.outer(&g)).unwrap().add(&g.outer(&one)).unwrap();
    r0.axpy(&minus, &g.outer(&g));
    let r0 = r0.scale(&Scalar::ratio(1, 2));
    verify_quasitriangular(&h4, &r0).expect("R0 is quasitriangular");
    write(dir, "r0.json", &element_to_json("h4.json", &r0));

    // counital and invertible, but not a cocycle
    let mut corrupted = r0.clone();
    corrupted.axpy(&Scalar::ratio(1, 3), &one.sub(&g).unwrap().outer(&h4.basis(3)));
    assert!(verify_cocycle(&h4, &corrupted).is_err());
    write(dir, "r0_corrupted.json", &element_to_json("h4.json", &corrupted));

    // kZ2 with its antipode replaced by zero
    let z2: HopfAlgebra = FiniteGroup::cyclic(2).algebra();
    let broken = z2.with_antipode(LinearMap::zero(&[2], &[2])).unwrap();
    write(dir, "kz2_zero_antipode.json", &hopf_to_json(&broken));

    let mut v = hopf_to_value(&FiniteGroup::cyclic(2).algebra());
    v["mult"] = serde_json::json!([[0, 0, "1"]]);
    write(dir, "kz2_bad_mult.json", &to_canonical_json(&v));
    write(dir, "truncated.json", "{\n  \"dim\": 2,\n  \"basis\": [\"e\", \"a\"\n");

    let request = serde_json::json!({ "construction": "twisted_mirror", "hopf": "kz2xz2.json", "cocycle": "bichar.json" });
    write(dir, "request_twisted.json", &to_canonical_json(&request));
}
