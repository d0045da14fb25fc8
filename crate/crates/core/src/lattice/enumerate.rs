//! Short-vector enumeration by coordinate descent.
//!
//! The HNF basis is lower triangular, so the last coordinate of a lattice
//! vector is a multiple of `d_{n-1}`, and once coordinates `j+1..n` are fixed
//! the coordinate `j` ranges over a single residue class mod `d_j`. Walking
//! the coordinates from last to first and pruning on the residual squared
//! radius visits every lattice point in the ball exactly once, in exact
//! integer arithmetic.

use std::collections::BTreeMap;

use num_integer::Roots;
use num_rational::Ratio;
use rayon::prelude::*;

use super::ScaledLattice;
use crate::error::{Error, Result};
use crate::qseries::FracQSeries;

/// Default cap on the estimated number of enumerated vectors.
///
/// Norm 6 in an even unimodular lattice of rank 24 estimates at about
/// 4.2e6 and norm 8 at about 1.3e8, so the default admits norm 6 and refuses
/// norm 8.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_estimated: u128,
    pub override_limit: bool,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget { max_estimated: DEFAULT_BUDGET, override_limit: false }
    }
}

impl EnumerationBudget {
    pub fn unlimited() -> Self {
        EnumerationBudget { max_estimated: u128::MAX, override_limit: true }
    }
}

/// Vector counts keyed by the stored squared length `x . x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormCounts {
    pub scale: i64,
    pub max_sq: i64,
    pub by_sq: BTreeMap<i64, u64>,
}

impl NormCounts {
    /// Number of vectors of norm `n`, i.e. `x . x = n * s`.
    pub fn count_norm(&self, n: Ratio<i64>) -> u64 {
        let sq = n * self.scale;
        if !sq.is_integer() {
            return 0;
        }
        self.by_sq.get(&sq.to_integer()).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.by_sq.values().sum()
    }
}

struct Walker<'a> {
    basis: &'a [Vec<i64>],
    max_sq: i64,
}

impl Walker<'_> {
    /// Candidate values `c` for level `j` given the partial vector.
    fn range(&self, j: usize, v: &[i64], rem: i64) -> (i64, i64) {
        let d = self.basis[j][j];
        let r = rem.sqrt();
        let lo = num_integer::div_ceil(-r - v[j], d);
        let hi = num_integer::div_floor(r - v[j], d);
        (lo, hi)
    }

    fn child(&self, j: usize, v: &[i64], c: i64, out: &mut [i64]) {
        out.copy_from_slice(v);
        if c != 0 {
            for (o, b) in out[..=j].iter_mut().zip(&self.basis[j][..=j]) {
                *o += c * b;
            }
        }
    }

    fn walk<F: FnMut(&[i64], i64)>(&self, level: usize, bufs: &mut [Vec<i64>], rem: i64, visit: &mut F) {
        // bufs[level] holds the partial vector with coordinates > level - 1 fixed
        if level == 0 {
            visit(&bufs[0], self.max_sq - rem);
            return;
        }
        let j = level - 1;
        let (lo, hi) = self.range(j, &bufs[level], rem);
        let (lower, upper) = bufs.split_at_mut(level);
        let parent = &upper[0];
        for c in lo..=hi {
            let x = parent[j] + c * self.basis[j][j];
            let next = rem - x * x;
            if next < 0 {
                continue;
            }
            self.child(j, parent, c, &mut lower[j]);
            self.walk(j, lower, next, visit);
        }
    }

    /// Partial states at a fixed depth, for parallel fan-out.
    fn frontier(&self, n: usize, depth: usize) -> Vec<(usize, Vec<i64>, i64)> {
        let mut states = vec![(n, vec![0i64; n], self.max_sq)];
        for _ in 0..depth.min(n) {
            let mut next = Vec::new();
            for (level, v, rem) in states {
                let j = level - 1;
                let (lo, hi) = self.range(j, &v, rem);
                for c in lo..=hi {
                    let x = v[j] + c * self.basis[j][j];
                    if rem - x * x < 0 {
                        continue;
                    }
                    let mut w = vec![0; n];
                    self.child(j, &v, c, &mut w);
                    next.push((j, w, rem - x * x));
                }
            }
            states = next;
        }
        states
    }
}

impl ScaledLattice {
    /// Heuristic count of vectors of norm at most `max_norm`: ball volume over
    /// covolume. Used only to decide whether an enumeration is affordable.
    pub fn estimate_count(&self, max_norm: Ratio<i64>) -> u128 {
        let n = self.rank() as f64;
        let r2 = *max_norm.numer() as f64 / *max_norm.denom() as f64;
        let ln_ball = (n / 2.0) * (std::f64::consts::PI * r2).ln() - ln_gamma(n / 2.0 + 1.0);
        let det = self.determinant();
        let ln_det = {
            use num_traits::ToPrimitive;
            det.numer().to_f64().unwrap_or(f64::MAX).ln() - det.denom().to_f64().unwrap_or(1.0).ln()
        };
        let est = (ln_ball - 0.5 * ln_det).exp();
        if est.is_finite() {
            est.max(1.0) as u128
        } else {
            u128::MAX
        }
    }

    fn check_budget(&self, max_norm: Ratio<i64>, budget: EnumerationBudget) -> Result<()> {
        if budget.override_limit {
            return Ok(());
        }
        let estimated = self.estimate_count(max_norm);
        if estimated > budget.max_estimated {
            return Err(Error::BudgetExceeded { estimated, budget: budget.max_estimated });
        }
        Ok(())
    }

    fn max_sq(&self, max_norm: Ratio<i64>) -> Result<i64> {
        if max_norm < Ratio::from_integer(0) {
            return Err(Error::InvalidLattice("negative norm bound".into()));
        }
        Ok((max_norm * self.scale).floor().to_integer())
    }

    /// Calls `visit(coords, x . x)` for every vector of norm at most
    /// `max_norm`, serially and in a deterministic order.
    pub fn for_each_short_vector<F: FnMut(&[i64], i64)>(
        &self,
        max_norm: Ratio<i64>,
        budget: EnumerationBudget,
        mut visit: F,
    ) -> Result<()> {
        self.check_budget(max_norm, budget)?;
        let n = self.rank();
        let walker = Walker { basis: self.basis(), max_sq: self.max_sq(max_norm)? };
        let mut bufs = vec![vec![0i64; n]; n + 1];
        walker.walk(n, &mut bufs, walker.max_sq, &mut visit);
        Ok(())
    }

    pub fn short_vectors(&self, max_norm: Ratio<i64>, budget: EnumerationBudget) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::new();
        self.for_each_short_vector(max_norm, budget, |v, _| out.push(v.to_vec()))?;
        Ok(out)
    }

    /// Counts of all vectors with norm at most `max_norm`, by squared length.
    /// The work is split across threads; the result does not depend on the
    /// number of threads.
    pub fn norm_counts(&self, max_norm: Ratio<i64>, budget: EnumerationBudget) -> Result<NormCounts> {
        self.check_budget(max_norm, budget)?;
        let n = self.rank();
        let max_sq = self.max_sq(max_norm)?;
        let walker = Walker { basis: self.basis(), max_sq };
        let depth = if n >= 6 { 3 } else { 0 };
        let frontier = walker.frontier(n, depth);
        let by_sq = frontier
            .into_par_iter()
            .map(|(level, v, rem)| {
                let mut local: BTreeMap<i64, u64> = BTreeMap::new();
                let mut bufs = vec![vec![0i64; n]; level + 1];
                bufs[level] = v;
                walker.walk(level, &mut bufs, rem, &mut |_, sq| *local.entry(sq).or_insert(0) += 1);
                local
            })
            .reduce(BTreeMap::new, |mut a, b| {
                for (k, c) in b {
                    *a.entry(k).or_insert(0) += c;
                }
                a
            });
        Ok(NormCounts { scale: self.scale(), max_sq, by_sq })
    }

    pub fn count_vectors_of_norm(&self, norm: i64, budget: EnumerationBudget) -> Result<u64> {
        let n = Ratio::from_integer(norm);
        Ok(self.norm_counts(n, budget)?.count_norm(n))
    }

    /// `sum_{v} q^{(v,v)/2}` through `q^nmax`, for integral lattices.
    pub fn theta_series(&self, nmax: i64, budget: EnumerationBudget) -> Result<FracQSeries> {
        if !self.is_integral() {
            return Err(Error::InvalidLattice("theta series needs an integral lattice".into()));
        }
        let counts = self.norm_counts(Ratio::from_integer(2 * nmax), budget)?;
        // exponent (x.x / s) / 2 in units of 1/2 is x.x / s
        let terms = counts.by_sq.iter().map(|(&sq, &c)| (sq / self.scale(), num_bigint::BigInt::from(c)));
        FracQSeries::from_terms(2, 2 * nmax + 2, terms)
    }
}

fn ln_gamma(x: f64) -> f64 {
    // Stirling series; only used for the enumeration-cost heuristic
    if x < 7.0 {
        let mut shift = 0.0;
        let mut y = x;
        while y < 7.0 {
            shift += y.ln();
            y += 1.0;
        }
        return ln_gamma(y) - shift;
    }
    let inv = 1.0 / x;
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + inv / 12.0 - inv.powi(3) / 360.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(l: &ScaledLattice, max_sq: i64, bound: i64) -> BTreeMap<i64, u64> {
        // enumerate integer coefficient vectors in a box
        let n = l.rank();
        let mut counts = BTreeMap::new();
        let mut c = vec![-bound; n];
        loop {
            let mut v = vec![0i64; n];
            for (ci, b) in c.iter().zip(l.basis()) {
                for (x, y) in v.iter_mut().zip(b) {
                    *x += ci * y;
                }
            }
            let sq = crate::lattice::dot(&v, &v);
            if sq <= max_sq {
                *counts.entry(sq).or_insert(0) += 1;
            }
            let mut i = 0;
            while i < n {
                c[i] += 1;
                if c[i] <= bound {
                    break;
                }
                c[i] = -bound;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        counts
    }

    #[test]
    fn a1_has_two_roots() {
        let a1 = ScaledLattice::from_generators(2, &[vec![2]]).unwrap();
        assert_eq!(a1.count_vectors_of_norm(2, EnumerationBudget::default()).unwrap(), 2);
    }

    #[test]
    fn matches_box_enumeration() {
        let lats = [
            ScaledLattice::from_generators(1, &[vec![1, 0, 0], vec![1, 2, 0], vec![1, 1, 3]]).unwrap(),
            ScaledLattice::from_generators(
                2,
                &[vec![2, 0, 0, 0], vec![0, 2, 0, 0], vec![1, 1, 1, 1], vec![0, 0, 2, 0]],
            )
            .unwrap(),
        ];
        for l in lats {
            let max_sq = 12;
            let ours = l.norm_counts(Ratio::new(max_sq, l.scale()), EnumerationBudget::default()).unwrap();
            // coefficients of vectors with x.x <= 12 are bounded by 12 in these small bases
            assert_eq!(ours.by_sq, brute_force(&l, max_sq, 12));
        }
    }

    #[test]
    fn serial_and_parallel_agree() {
        let rows: Vec<Vec<i64>> = (0..8)
            .map(|i| {
                (0..8)
                    .map(|j| {
                        if i == j {
                            2
                        } else if j == (i + 1) % 8 {
                            1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        let l = ScaledLattice::from_generators(1, &rows).unwrap();
        let bound = Ratio::from_integer(14);
        let par = l.norm_counts(bound, EnumerationBudget::default()).unwrap();
        let mut serial = BTreeMap::new();
        l.for_each_short_vector(bound, EnumerationBudget::default(), |_, sq| *serial.entry(sq).or_insert(0u64) += 1)
            .unwrap();
        assert_eq!(par.by_sq, serial);
    }

    #[test]
    fn budget_is_enforced() {
        let rows: Vec<Vec<i64>> = (0..24).map(|i| (0..24).map(|j| (i == j) as i64).collect()).collect();
        let z24 = ScaledLattice::from_generators(1, &rows).unwrap();
        let err = z24.norm_counts(Ratio::from_integer(40), EnumerationBudget::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }
}
