//! The binary octahedral group as exact 2x2 matrices over Q(zeta_8), its
//! diagonal action on the lattice vertex algebra of N(A1^24) through scalars
//! on the Heisenberg modules, and the integer facts about the weight-two
//! primary space.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::codes::BinaryCode;
use crate::error::{Error, Result};
use crate::lattice::{index_two_kernel, niemeier_a1_24, ScaledLattice};

type Q = Ratio<i64>;

/// `c0 + c1 z + c2 z^2 + c3 z^3` with `z = zeta_8`, `z^4 = -1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CyclotomicElem([Q; 4]);

impl CyclotomicElem {
    pub fn new(c: [Q; 4]) -> Self {
        CyclotomicElem(c)
    }

    pub fn coords(&self) -> [Q; 4] {
        self.0
    }

    pub fn rational(q: Q) -> Self {
        CyclotomicElem([q, Q::zero(), Q::zero(), Q::zero()])
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Q::from_integer(n))
    }

    pub fn zeta() -> Self {
        CyclotomicElem([Q::zero(), Q::one(), Q::zero(), Q::zero()])
    }

    /// `i = zeta^2`.
    pub fn i() -> Self {
        CyclotomicElem([Q::zero(), Q::zero(), Q::one(), Q::zero()])
    }

    /// `sqrt(2) = zeta - zeta^3`.
    pub fn sqrt2() -> Self {
        CyclotomicElem([Q::zero(), Q::one(), Q::zero(), -Q::one()])
    }

    pub fn scale(self, q: Q) -> Self {
        CyclotomicElem(self.0.map(|c| c * q))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Q::is_zero)
    }
}

impl Add for CyclotomicElem {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        CyclotomicElem(std::array::from_fn(|k| self.0[k] + o.0[k]))
    }
}

impl Sub for CyclotomicElem {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for CyclotomicElem {
    type Output = Self;
    fn neg(self) -> Self {
        CyclotomicElem(self.0.map(|c| -c))
    }
}

impl Mul for CyclotomicElem {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = [Q::zero(); 4];
        for a in 0..4 {
            for b in 0..4 {
                let p = self.0[a] * o.0[b];
                if a + b < 4 {
                    out[a + b] += p;
                } else {
                    out[a + b - 4] -= p;
                }
            }
        }
        CyclotomicElem(out)
    }
}

impl fmt::Debug for CyclotomicElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}, {}]", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// A 2x2 matrix over Q(zeta_8).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[CyclotomicElem; 2]; 2]);

impl Mat2 {
    pub fn new(a: CyclotomicElem, b: CyclotomicElem, c: CyclotomicElem, d: CyclotomicElem) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        let (o, z) = (CyclotomicElem::int(1), CyclotomicElem::int(0));
        Mat2::new(o, z, z, o)
    }

    pub fn determinant(&self) -> CyclotomicElem {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, c: CyclotomicElem) -> Self {
        Mat2(self.0.map(|row| row.map(|x| x * c)))
    }

    /// Inverse of a determinant-one matrix.
    pub fn inverse_sl2(&self) -> Self {
        let [[a, b], [c, d]] = self.0;
        Mat2::new(d, -b, -c, a)
    }

    pub fn conjugate(&self, x: &Mat2) -> Mat2 {
        *self * *x * self.inverse_sl2()
    }
}

impl Add for Mat2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Mat2(std::array::from_fn(|r| std::array::from_fn(|c| self.0[r][c] + o.0[r][c])))
    }
}

impl Neg for Mat2 {
    type Output = Self;
    fn neg(self) -> Self {
        Mat2(self.0.map(|row| row.map(|x| -x)))
    }
}

impl Mul for Mat2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Mat2(std::array::from_fn(|r| std::array::from_fn(|c| self.0[r][0] * o.0[0][c] + self.0[r][1] * o.0[1][c])))
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Images of the quaternion units `1, i, j, k`.
pub fn quaternion_units() -> [Mat2; 4] {
    let (z, o, i) = (CyclotomicElem::int(0), CyclotomicElem::int(1), CyclotomicElem::i());
    [Mat2::identity(), Mat2::new(i, z, z, -i), Mat2::new(z, i, i, z), Mat2::new(z, -o, o, z)]
}

/// `a + b i + c j + d k` for coefficients in Q(zeta_8).
pub fn quaternion(coeffs: [CyclotomicElem; 4]) -> Mat2 {
    let units = quaternion_units();
    let zero = Mat2::identity().scale(CyclotomicElem::int(0));
    (0..4).fold(zero, |acc, t| acc + units[t].scale(coeffs[t]))
}

/// The 48 elements `+-x`, `(+-1 +-i +-j +-k)/2` and `(+-x +-y)/sqrt 2`.
pub fn binary_octahedral_group() -> Result<Vec<Mat2>> {
    let z = CyclotomicElem::int(0);
    let signs = [1i64, -1];
    let mut elems = Vec::new();
    for t in 0..4 {
        for s in signs {
            let mut c = [z; 4];
            c[t] = CyclotomicElem::int(s);
            elems.push(quaternion(c));
        }
    }
    let half = Q::new(1, 2);
    for bits in 0..16u32 {
        let c = std::array::from_fn(|t| CyclotomicElem::rational(if bits >> t & 1 == 1 { -half } else { half }));
        elems.push(quaternion(c));
    }
    // 1/sqrt 2 = sqrt 2 / 2
    let inv_sqrt2 = CyclotomicElem::sqrt2().scale(half);
    for x in 0..4 {
        for y in x + 1..4 {
            for sx in signs {
                for sy in signs {
                    let mut c = [z; 4];
                    c[x] = inv_sqrt2.scale(Q::from_integer(sx));
                    c[y] = inv_sqrt2.scale(Q::from_integer(sy));
                    elems.push(quaternion(c));
                }
            }
        }
    }
    let set: HashSet<Mat2> = elems.iter().copied().collect();
    if set.len() != 48 {
        return Err(Error::Internal(format!("binary octahedral group has {} distinct elements", set.len())));
    }
    for g in &elems {
        if g.determinant() != CyclotomicElem::int(1) {
            return Err(Error::Internal(format!("element {g:?} has determinant != 1")));
        }
        for h in &elems {
            if !set.contains(&(*g * *h)) {
                return Err(Error::Internal("binary octahedral group is not closed".into()));
            }
        }
    }
    Ok(elems)
}

/// Order of `g` modulo `+-1`.
fn projective_order(g: &Mat2) -> usize {
    let id = Mat2::identity();
    let mut p = *g;
    let mut k = 1;
    while p != id && p != -id {
        p = p * *g;
        k += 1;
    }
    k
}

/// Element-order histogram of `group / {+-1}`.
pub fn quotient_order_profile(group: &[Mat2]) -> BTreeMap<usize, usize> {
    let mut seen: HashSet<Mat2> = HashSet::new();
    let mut profile = BTreeMap::new();
    for g in group {
        if seen.contains(g) {
            continue;
        }
        seen.insert(*g);
        seen.insert(-*g);
        *profile.entry(projective_order(g)).or_insert(0) += 1;
    }
    profile
}

/// The order profile of S4.
pub fn symmetric_group_4_profile() -> BTreeMap<usize, usize> {
    BTreeMap::from([(1, 1), (2, 9), (3, 8), (4, 6)])
}

/// `H`, `E`, `F` for sl_2.
pub fn sl2_basis() -> [Mat2; 3] {
    let (z, o) = (CyclotomicElem::int(0), CyclotomicElem::int(1));
    [Mat2::new(o, z, z, -o), Mat2::new(z, o, z, z), Mat2::new(z, z, o, z)]
}

/// Results of conjugating the sl_2 basis by the images of `i` and `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdjointFacts {
    pub i_fixes_diagonal: bool,
    pub i_negates_e_and_f: bool,
    pub j_negates_diagonal: bool,
    pub j_swaps_e_and_f: bool,
    /// The images of `i`, `j`, `k` are involutions in the adjoint group.
    pub units_are_involutions: bool,
    /// Each of `i`, `j`, `k` is conjugate to the others up to sign in 2O.
    pub units_mutually_conjugate: bool,
}

impl AdjointFacts {
    pub fn all_hold(&self) -> bool {
        self.i_fixes_diagonal
            && self.i_negates_e_and_f
            && self.j_negates_diagonal
            && self.j_swaps_e_and_f
            && self.units_are_involutions
            && self.units_mutually_conjugate
    }
}

pub fn adjoint_facts(group: &[Mat2]) -> AdjointFacts {
    let [_, qi, qj, qk] = quaternion_units();
    let [h, e, f] = sl2_basis();
    let up_to_sign = |a: &Mat2, b: &Mat2| a == b || *a == -*b;
    let conj_to = |x: &Mat2, y: &Mat2| group.iter().any(|g| up_to_sign(&g.conjugate(x), y));
    let units = [qi, qj, qk];
    AdjointFacts {
        i_fixes_diagonal: qi.conjugate(&h) == h,
        i_negates_e_and_f: qi.conjugate(&e) == -e && qi.conjugate(&f) == -f,
        j_negates_diagonal: qj.conjugate(&h) == -h,
        j_swaps_e_and_f: qj.conjugate(&e) == f && qj.conjugate(&f) == e,
        units_are_involutions: units.iter().all(|u| projective_order(u) == 2),
        units_mutually_conjugate: units.iter().all(|x| units.iter().all(|y| conj_to(x, y))),
    }
}

/// `exp(2 pi i e)` with the exponent reduced into `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RootOfUnityScalar {
    #[serde(serialize_with = "ser_ratio")]
    exponent: Q,
}

fn ser_ratio<S: serde::Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

impl RootOfUnityScalar {
    pub fn new(exponent: Q) -> Self {
        let e = exponent - exponent.floor();
        RootOfUnityScalar { exponent: e }
    }

    pub fn one() -> Self {
        Self::new(Q::zero())
    }

    pub fn exponent(&self) -> Q {
        self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.exponent.is_zero()
    }
}

impl Mul for RootOfUnityScalar {
    type Output = Self;
    // multiplying roots of unity adds exponents
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: Self) -> Self {
        Self::new(self.exponent + o.exponent)
    }
}

/// The quaternions whose action on `V_{N(A1^24)}` is examined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuaternionUnit {
    MinusOne,
    I,
    J,
    K,
}

/// How the diagonal image of a quaternion acts on the Heisenberg module `pi_u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleAction {
    /// Torus elements act on `pi_u` by a scalar.
    Scalar(RootOfUnityScalar),
    /// `j` and `k` lift `-1` on the lattice and carry `pi_u` to `pi_{-u}`.
    Negates,
}

/// The action on `pi_u` for `u` in N(A1^24), given in the sqrt(2) frame so
/// that the stored coordinate `x^a` equals `sqrt(2) u^a`: `i` acts by
/// `prod i^{x^a}` and `-1` by `prod (-1)^{x^a}`.
pub fn scalar_action(g: QuaternionUnit, lattice: &ScaledLattice, coords: &[i64]) -> Result<ModuleAction> {
    if lattice.scale() != 2 || !lattice.contains(coords) {
        return Err(Error::NotInLattice);
    }
    let sum: i64 = coords.iter().sum();
    Ok(match g {
        QuaternionUnit::I => ModuleAction::Scalar(RootOfUnityScalar::new(Q::new(sum, 4))),
        QuaternionUnit::MinusOne => ModuleAction::Scalar(RootOfUnityScalar::new(Q::new(sum, 2))),
        QuaternionUnit::J | QuaternionUnit::K => ModuleAction::Negates,
    })
}

/// `{u in N : i acts trivially on pi_u}`.
pub fn kernel_of_i_action(n: &ScaledLattice) -> Result<ScaledLattice> {
    index_two_kernel(
        n,
        |x| !matches!(scalar_action(QuaternionUnit::I, n, x), Ok(ModuleAction::Scalar(s)) if s.is_one()),
    )
}

/// Sign vectors `t in {+-1}^24` acting trivially on every `pi_u`, `u` in
/// N(A1^24), as the code of their `-1` positions: the subsets meeting the
/// support of every lattice vector evenly.
pub fn torus_trivial_subgroup(code: &BinaryCode) -> Result<BinaryCode> {
    let n = niemeier_a1_24(code)?;
    let rows = n
        .basis()
        .iter()
        .map(|b| b.iter().enumerate().fold(0u64, |w, (i, &x)| if x.rem_euclid(2) == 1 { w | 1 << i } else { w }));
    Ok(BinaryCode::span(24, rows)?.dual())
}

/// One exact integer identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArithmeticFact {
    pub statement: String,
    pub holds: bool,
}

fn fact(statement: impl Into<String>, holds: bool) -> ArithmeticFact {
    ArithmeticFact { statement: statement.into(), holds }
}

/// Integer identities about the weight-two primary space of the moonshine
/// module and the norm-4 vectors of the Leech lattice.
pub fn arithmetic_facts() -> Vec<ArithmeticFact> {
    let monster_dim: u64 = 196883;
    let factors = [47u64, 59, 71];
    let leech_norm4: u64 = 196560;
    let twisted = 24u64 << 12;
    let sym2 = 24u64 * 25 / 2;
    let is_prime = |p: u64| p > 1 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d));
    vec![
        fact("47 * 59 * 71 = 196883", factors.iter().product::<u64>() == monster_dim),
        fact("299 + 98280 + 24 * 2^12 = 196883", (sym2 - 1) + leech_norm4 / 2 + twisted == monster_dim),
        fact("dim Sym^2 of a 24-space minus the conformal line = 299", sym2 - 1 == 299),
        fact("196560 / 2 = 98280", leech_norm4.is_multiple_of(2) && leech_norm4 / 2 == 98280),
        fact("1 + 196883 = 196884", 1 + monster_dim == 196884),
        fact("47, 59, 71 are prime", factors.iter().all(|&p| is_prime(p))),
    ]
}

/// Exponent of `p` in `n`.
pub fn valuation(n: &BigUint, p: u64) -> u32 {
    let mut n = n.clone();
    let p = BigUint::from(p);
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::golay_code;
    use crate::lattice::lambda0;

    #[test]
    fn cyclotomic_identities() {
        let z = CyclotomicElem::zeta();
        assert_eq!(z * z * z * z, CyclotomicElem::int(-1));
        assert_eq!(CyclotomicElem::sqrt2() * CyclotomicElem::sqrt2(), CyclotomicElem::int(2));
        assert_eq!(CyclotomicElem::i() * CyclotomicElem::i(), CyclotomicElem::int(-1));
    }

    #[test]
    fn quaternion_relations() {
        let [one, i, j, k] = quaternion_units();
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(i * i, -one);
        assert_eq!((-one) * (-one), one);
    }

    #[test]
    fn group_and_quotient() {
        let g = binary_octahedral_group().unwrap();
        assert_eq!(g.len(), 48);
        let profile = quotient_order_profile(&g);
        assert_eq!(profile, symmetric_group_4_profile());
        assert_eq!(profile.values().sum::<usize>(), 24);
        assert!(adjoint_facts(&g).all_hold());
    }

    #[test]
    fn scalar_actions_on_niemeier() {
        let code = golay_code();
        let n = niemeier_a1_24(&code).unwrap();
        let mut root = vec![0i64; 24];
        root[0] = 2;
        let ModuleAction::Scalar(s) = scalar_action(QuaternionUnit::I, &n, &root).unwrap() else { panic!() };
        assert_eq!(s.exponent(), Q::new(1, 2));
        assert!(scalar_action(QuaternionUnit::I, &n, &[1; 24][..]).is_ok());
        let mut bad = vec![0i64; 24];
        bad[0] = 1;
        assert!(scalar_action(QuaternionUnit::I, &n, &bad).is_err());
        assert_eq!(scalar_action(QuaternionUnit::J, &n, &root).unwrap(), ModuleAction::Negates);
        for b in lambda0(&code).unwrap().basis() {
            assert_eq!(
                scalar_action(QuaternionUnit::I, &n, b).unwrap(),
                ModuleAction::Scalar(RootOfUnityScalar::one())
            );
        }
    }

    #[test]
    fn kernel_and_torus() {
        let code = golay_code();
        let n = niemeier_a1_24(&code).unwrap();
        let k = kernel_of_i_action(&n).unwrap();
        assert!(k.same_points(&lambda0(&code).unwrap()));
        assert_eq!(crate::lattice::index_in(&k, &n), Some(2));
        let t = torus_trivial_subgroup(&code).unwrap();
        assert_eq!(t.dimension(), 12);
        assert_eq!(t, code);
        assert!(t.contains((1 << 24) - 1));
    }

    #[test]
    fn facts_hold() {
        assert!(arithmetic_facts().iter().all(|f| f.holds));
        assert_eq!(valuation(&BigUint::from(13u32 * 13 * 13 * 2), 13), 3);
    }
}
