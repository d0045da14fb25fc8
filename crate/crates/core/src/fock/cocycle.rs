//! The sign cocycle of the double cover of an even lattice.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::ScaledLattice;

/// `eps(a, b) = (-1)^{a^T B b}` on basis coefficients, where `B` is the
/// upper-triangular lift of the Gram matrix mod 2 (`B_ii = G_ii / 2`).
#[derive(Debug, Clone)]
pub struct LatticeCocycle {
    lattice: ScaledLattice,
    gram: Vec<Vec<i64>>,
    lift: Vec<Vec<u8>>,
}

pub fn lattice_cocycle(lattice: &ScaledLattice) -> Result<LatticeCocycle> {
    if !lattice.is_even() {
        return Err(Error::InvalidLattice("the cocycle needs an even lattice".into()));
    }
    let gram = lattice.integer_gram().expect("even lattices are integral");
    let n = gram.len();
    let mut lift = vec![vec![0u8; n]; n];
    for i in 0..n {
        lift[i][i] = (gram[i][i] / 2).rem_euclid(2) as u8;
        for j in i + 1..n {
            lift[i][j] = gram[i][j].rem_euclid(2) as u8;
        }
    }
    Ok(LatticeCocycle { lattice: lattice.clone(), gram, lift })
}

impl LatticeCocycle {
    pub fn lattice(&self) -> &ScaledLattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// `+1` or `-1` for coefficient vectors `a`, `b` in the lattice basis.
    pub fn epsilon(&self, a: &[i64], b: &[i64]) -> i8 {
        let mut parity = 0i64;
        for (i, &ai) in a.iter().enumerate() {
            if ai & 1 == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().skip(i) {
                if bj & 1 == 1 {
                    parity ^= self.lift[i][j] as i64;
                }
            }
        }
        if parity == 0 {
            1
        } else {
            -1
        }
    }

    /// `eps` on lattice vectors given in the frame coordinates.
    pub fn epsilon_of_vectors(&self, u: &[i64], v: &[i64]) -> Result<i8> {
        let a = self.lattice.solve(u).ok_or(Error::NotInLattice)?;
        let b = self.lattice.solve(v).ok_or(Error::NotInLattice)?;
        Ok(self.epsilon(&a, &b))
    }

    /// The pairing `(a, b)` on basis coefficients.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut total = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai != 0 {
                total += ai * self.gram[i].iter().zip(b).map(|(g, bj)| g * bj).sum::<i64>();
            }
        }
        total
    }

    fn commutes_correctly(&self, a: &[i64], b: &[i64]) -> bool {
        let expected = if self.pairing(a, b).rem_euclid(2) == 0 { 1 } else { -1 };
        self.epsilon(a, b) * self.epsilon(b, a) == expected
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CommutatorReport {
    pub basis_pairs: usize,
    pub random_pairs: usize,
    /// Checked pairs whose pairing is odd, so the signs must anticommute.
    pub odd_pairs: usize,
    pub failures: usize,
    pub bimultiplicative: bool,
}

impl CommutatorReport {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.bimultiplicative
    }
}

/// Checks `eps(a,b) eps(b,a) = (-1)^{(a,b)}` on all basis pairs and on
/// `trials` random pairs, plus bimultiplicativity in the first argument on
/// `trials` random triples.
pub fn verify_commutator(cocycle: &LatticeCocycle, trials: usize, seed: u64) -> CommutatorReport {
    let n = cocycle.rank();
    let unit = |i: usize| -> Vec<i64> { (0..n).map(|j| (i == j) as i64).collect() };
    let mut report =
        CommutatorReport { basis_pairs: 0, random_pairs: 0, odd_pairs: 0, failures: 0, bimultiplicative: true };
    let record = |a: &[i64], b: &[i64], report: &mut CommutatorReport| {
        if cocycle.pairing(a, b).rem_euclid(2) == 1 {
            report.odd_pairs += 1;
        }
        if !cocycle.commutes_correctly(a, b) {
            report.failures += 1;
        }
    };
    for i in 0..n {
        for j in 0..n {
            record(&unit(i), &unit(j), &mut report);
            report.basis_pairs += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random = |rng: &mut ChaCha8Rng| -> Vec<i64> { (0..n).map(|_| rng.gen_range(-3..=3)).collect() };
    for _ in 0..trials {
        let a = random(&mut rng);
        let b = random(&mut rng);
        record(&a, &b, &mut report);
        report.random_pairs += 1;
        let c = random(&mut rng);
        let ab: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        if cocycle.epsilon(&ab, &c) != cocycle.epsilon(&a, &c) * cocycle.epsilon(&b, &c) {
            report.bimultiplicative = false;
        }
    }
    report
}
