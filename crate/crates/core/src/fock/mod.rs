//! The Heisenberg Fock module `pi_0` on an orthonormal color basis, with the
//! mode operators of the Heisenberg algebra acting on it.
//!
//! Colors are `0..rank`. A basis monomial is a multiset of creation modes
//! `(mode, color)` with `mode < 0`, kept sorted with the most negative mode
//! first and colors increasing on ties.

mod cocycle;
mod field;

pub use cocycle::{lattice_cocycle, verify_commutator, CommutatorReport, LatticeCocycle};
pub use field::{
    check_borcherds, check_commutator_formula, check_skew_symmetry, check_virasoro, field_of_state, generator_field,
    identity_field, locality_order, residue_product, translation, virasoro_field, FieldConfig, TruncatedField,
};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Coeff = BigRational;

/// A canonical basis monomial.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(i64, usize)>);

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(Vec::new())
    }

    /// Builds a monomial from creation modes in any order.
    pub fn new(mut factors: Vec<(i64, usize)>) -> Self {
        assert!(factors.iter().all(|&(n, _)| n < 0), "creation modes must be negative");
        factors.sort_unstable();
        Monomial(factors)
    }

    pub fn factors(&self) -> &[(i64, usize)] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(n, _)| -n).sum()
    }

    fn inserted(&self, mode: i64, color: usize) -> Monomial {
        let mut f = self.0.clone();
        let pos = f.partition_point(|&x| x <= (mode, color));
        f.insert(pos, (mode, color));
        Monomial(f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(n, c) in &self.0 {
            write!(f, "a{c}({n})")?;
        }
        write!(f, "|0>")
    }
}

/// A finite rational combination of basis monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockState {
    rank: usize,
    terms: BTreeMap<Monomial, Coeff>,
}

impl FockState {
    pub fn zero(rank: usize) -> Self {
        FockState { rank, terms: BTreeMap::new() }
    }

    pub fn vacuum(rank: usize) -> Self {
        Self::basis(rank, Monomial::vacuum())
    }

    pub fn basis(rank: usize, m: Monomial) -> Self {
        assert!(m.0.iter().all(|&(_, c)| c < rank), "color out of range");
        let mut terms = BTreeMap::new();
        terms.insert(m, Coeff::one());
        FockState { rank, terms }
    }

    /// `a^{c_1}_{n_1} ... a^{c_k}_{n_k} |0>` from `(color, mode)` pairs.
    pub fn from_modes(rank: usize, modes: &[(usize, i64)]) -> Self {
        Self::basis(rank, Monomial::new(modes.iter().map(|&(c, n)| (n, c)).collect()))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Highest degree among the terms.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockState, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn add(&self, other: &FockState) -> FockState {
        let mut out = self.clone();
        out.add_scaled(other, &Coeff::one());
        out
    }

    pub fn sub(&self, other: &FockState) -> FockState {
        let mut out = self.clone();
        out.add_scaled(other, &-Coeff::one());
        out
    }

    pub fn scale(&self, c: &Coeff) -> FockState {
        let mut out = FockState::zero(self.rank);
        out.add_scaled(self, c);
        out
    }
}

impl fmt::Display for FockState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {m}")?;
        }
        Ok(())
    }
}

/// The action of `e^color t^n` on a state.
///
/// Creation modes (`n < 0`) insert a factor; `n = 0` kills `pi_0`; for
/// `n > 0` the mode is commuted to the vacuum, each matching factor
/// `e^color t^{-n}` contributing `n`.
pub fn apply_mode(color: usize, n: i64, s: &FockState) -> FockState {
    assert!(color < s.rank, "color {color} out of range for rank {}", s.rank);
    let mut out = FockState::zero(s.rank);
    match n {
        0 => {}
        n if n < 0 => {
            for (m, c) in &s.terms {
                out.add_term(m.inserted(n, color), c.clone());
            }
        }
        n => {
            for (m, c) in &s.terms {
                let f = &m.0;
                let Some(first) = f.iter().position(|&x| x == (-n, color)) else {
                    continue;
                };
                let mult = f[first..].iter().take_while(|&&x| x == (-n, color)).count();
                let mut rest = f.clone();
                rest.remove(first);
                out.add_term(Monomial(rest), c * BigInt::from(n * mult as i64));
            }
        }
    }
    out
}

/// All basis monomials of degree `n` with `rank` colors.
pub fn basis_monomials(rank: usize, n: i64) -> Vec<Monomial> {
    fn go(rank: usize, left: i64, max_part: (i64, usize), acc: &mut Vec<(i64, usize)>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::new(acc.clone()));
            return;
        }
        // parts listed in decreasing (size, color) order to avoid repeats
        for size in (1..=left.min(max_part.0)).rev() {
            let top_color = if size == max_part.0 { max_part.1 } else { rank - 1 };
            for color in (0..=top_color).rev() {
                acc.push((-size, color));
                go(rank, left - size, (size, color), acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n >= 0 && rank > 0 {
        go(rank, n, (n, rank - 1), &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Basis states of every degree up to `max_degree`.
pub fn basis_up_to(rank: usize, max_degree: i64) -> Vec<FockState> {
    (0..=max_degree).flat_map(|n| basis_monomials(rank, n)).map(|m| FockState::basis(rank, m)).collect()
}

/// Number of `rank`-colored partitions of `n`, i.e. the dimension of the
/// degree-`n` piece of `pi_0`.
pub fn graded_dimension(rank: usize, n: usize) -> BigUint {
    let mut ways = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::one();
    for part in 1..=n {
        for _ in 0..rank {
            for total in part..=n {
                let prev = ways[total - part].clone();
                ways[total] += prev;
            }
        }
    }
    ways.swap_remove(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Coeff {
        Coeff::from_integer(n.into())
    }

    #[test]
    fn annihilation_against_creation() {
        let s = FockState::from_modes(2, &[(0, -1)]);
        assert_eq!(apply_mode(0, 1, &s), FockState::vacuum(2));
        let s2 = FockState::from_modes(2, &[(0, -2)]);
        assert_eq!(apply_mode(0, 2, &s2), FockState::vacuum(2).scale(&r(2)));
        assert!(apply_mode(1, 1, &s).is_zero());
        assert!(apply_mode(0, 0, &s).is_zero());
    }

    #[test]
    fn repeated_factor_multiplicity() {
        let s = FockState::from_modes(1, &[(0, -1), (0, -1), (0, -1)]);
        let expected = FockState::from_modes(1, &[(0, -1), (0, -1)]).scale(&r(3));
        assert_eq!(apply_mode(0, 1, &s), expected);
    }

    #[test]
    fn canonical_order() {
        let a = FockState::from_modes(2, &[(1, -1), (0, -2), (0, -1)]);
        let b = apply_mode(0, -2, &apply_mode(1, -1, &apply_mode(0, -1, &FockState::vacuum(2))));
        assert_eq!(a, b);
        let (m, _) = a.terms().next().unwrap();
        assert_eq!(m.factors(), &[(-2, 0), (-1, 0), (-1, 1)]);
        assert_eq!(m.degree(), 4);
    }

    #[test]
    fn bracket_relation_on_basis() {
        let states = basis_up_to(2, 4);
        for s in &states {
            for i in 0..2 {
                for j in 0..2 {
                    for m in -3..=3 {
                        for n in -3..=3 {
                            let lhs =
                                apply_mode(i, m, &apply_mode(j, n, s)).sub(&apply_mode(j, n, &apply_mode(i, m, s)));
                            let central = if i == j && m == -n { m } else { 0 };
                            assert_eq!(lhs, s.scale(&r(central)), "i={i} j={j} m={m} n={n} s={s}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn basis_counts_match_partitions() {
        assert_eq!(basis_monomials(1, 4).len(), 5);
        assert_eq!(graded_dimension(1, 4), BigUint::from(5u32));
        assert_eq!(graded_dimension(24, 1), BigUint::from(24u32));
        assert_eq!(graded_dimension(3, 0), BigUint::one());
        for d in 1..=3 {
            for n in 0..=6 {
                let b = basis_monomials(d, n);
                assert_eq!(BigUint::from(b.len()), graded_dimension(d, n as usize));
                let mut dedup = b.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), b.len());
                assert!(b.iter().all(|m| m.degree() == n));
            }
        }
    }
}
