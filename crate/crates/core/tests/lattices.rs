use std::time::Instant;

use moonshine_core::codes::golay_code;
use moonshine_core::lattice::{
    even_unimodular_extensions, lambda0, leech_lattice, leech_membership, niemeier_a1_24, EnumerationBudget,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn niemeier_norm_counts() {
    let n = niemeier_a1_24(&golay_code()).unwrap();
    let t = Instant::now();
    let counts = n.norm_counts(Ratio::from_integer(4), EnumerationBudget::default()).unwrap();
    eprintln!("N(A1^24) norms <= 4 in {:?}", t.elapsed());
    assert_eq!(counts.count_norm(Ratio::from_integer(2)), 48);
    assert_eq!(counts.count_norm(Ratio::from_integer(4)), 195408);
}

#[test]
fn leech_norm_counts() {
    let l = leech_lattice(&golay_code()).unwrap();
    let t = Instant::now();
    let counts = l.norm_counts(Ratio::from_integer(4), EnumerationBudget::default()).unwrap();
    eprintln!("Leech norms <= 4 in {:?}", t.elapsed());
    assert_eq!(counts.count_norm(Ratio::from_integer(2)), 0);
    assert_eq!(counts.count_norm(Ratio::from_integer(4)), 196560);
}

#[test]
fn lambda0_has_two_even_unimodular_neighbors() {
    let code = golay_code();
    let ext = even_unimodular_extensions(&lambda0(&code).unwrap()).unwrap();
    assert_eq!(ext.len(), 2);
    let mut roots: Vec<u64> = ext.iter().map(|e| e.root_count().unwrap()).collect();
    roots.sort();
    assert_eq!(roots, vec![0, 48]);
    let n = niemeier_a1_24(&code).unwrap();
    let leech = leech_lattice(&code).unwrap();
    for e in &ext {
        let rooted = e.root_count().unwrap() == 48;
        assert_eq!(e.lattice.same_points(&n), rooted);
        assert_eq!(e.lattice.same_points(&leech), !rooted);
    }
}

#[test]
fn congruence_membership_matches_linear_solve() {
    let code = golay_code();
    let leech = leech_lattice(&code).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut hits = 0;
    for trial in 0..10_000 {
        let v: Vec<i64> = if trial % 2 == 0 {
            (0..24).map(|_| rng.gen_range(-4..=4)).collect()
        } else {
            // random lattice combinations keep the positive cases frequent
            let mut v = vec![0i64; 24];
            for b in leech.basis() {
                let c = rng.gen_range(-1..=1);
                for (x, y) in v.iter_mut().zip(b) {
                    *x += c * y;
                }
            }
            v
        };
        let expected = leech.contains(&v);
        hits += expected as u32;
        assert_eq!(leech_membership(&code, &v), expected, "{v:?}");
    }
    assert!(hits >= 5000);
}
