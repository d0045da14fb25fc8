//! Fields on `pi_0` represented lazily: a field is an expression built from
//! the identity field, the generator fields and residue products, and its
//! modes are evaluated on demand, graded piece by graded piece.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{apply_mode, basis_up_to, Coeff, FockState, Monomial};
use crate::error::{Error, Result};

/// Desk-scale limits for the fields built from generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldConfig {
    pub rank: usize,
    /// Inclusive mode range on which generator fields may be evaluated.
    pub window: (i64, i64),
    /// Largest degree of an input state.
    pub cutoff: i64,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig { rank: 2, window: (-10, 10), cutoff: 8 }
    }
}

enum Node {
    Identity,
    Generator(usize),
    Residue { a: TruncatedField, b: TruncatedField, m: i64, cache: Mutex<HashMap<(i64, Monomial), FockState>> },
    Sum(Vec<(Coeff, TruncatedField)>),
}

/// A field `A(z) = sum A_n z^{-n-1}` with a mode window and an input-degree
/// cutoff. `weight` bounds the conformal weight: `A_n` sends degree `m` into
/// degrees at most `m + weight - n - 1` (exactly that for homogeneous fields).
#[derive(Clone)]
pub struct TruncatedField {
    node: Arc<Node>,
    rank: usize,
    weight: i64,
    window: Option<(i64, i64)>,
    cutoff: Option<i64>,
}

fn meet_window(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> Option<(i64, i64)> {
    match (a, b) {
        (Some((l1, h1)), Some((l2, h2))) => Some((l1.max(l2), h1.min(h2))),
        (w, None) | (None, w) => w,
    }
}

fn meet_cutoff(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (c, None) | (None, c) => c,
    }
}

/// Generalized binomial coefficient `C(m, i)` for any integer `m`.
pub(crate) fn binomial(m: i64, i: i64) -> BigInt {
    let mut r = BigInt::one();
    for j in 0..i {
        r = r * BigInt::from(m - j) / BigInt::from(j + 1);
    }
    r
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

pub fn identity_field(rank: usize) -> TruncatedField {
    TruncatedField { node: Arc::new(Node::Identity), rank, weight: 0, window: None, cutoff: None }
}

/// `Y(e^color t^{-1}, z) = sum_n e^color t^n z^{-n-1}`.
pub fn generator_field(color: usize, config: &FieldConfig) -> TruncatedField {
    assert!(color < config.rank, "color {color} out of range for rank {}", config.rank);
    TruncatedField {
        node: Arc::new(Node::Generator(color)),
        rank: config.rank,
        weight: 1,
        window: Some(config.window),
        cutoff: Some(config.cutoff),
    }
}

/// The `m`-th residue product `A(z)_m B(z)`.
pub fn residue_product(a: &TruncatedField, b: &TruncatedField, m: i64) -> TruncatedField {
    assert_eq!(a.rank, b.rank, "fields act on different Fock spaces");
    TruncatedField {
        rank: a.rank,
        weight: a.weight + b.weight - m - 1,
        window: meet_window(a.window, b.window),
        cutoff: meet_cutoff(a.cutoff, b.cutoff),
        node: Arc::new(Node::Residue { a: a.clone(), b: b.clone(), m, cache: Mutex::new(HashMap::new()) }),
    }
}

impl TruncatedField {
    /// A rational combination of fields on the same space.
    pub fn combination(parts: Vec<(Coeff, TruncatedField)>) -> Result<TruncatedField> {
        let first = parts.first().ok_or_else(|| Error::Internal("empty field combination".into()))?;
        let rank = first.1.rank;
        if parts.iter().any(|(_, f)| f.rank != rank) {
            return Err(Error::Internal("fields act on different Fock spaces".into()));
        }
        let weight = parts.iter().map(|(_, f)| f.weight).max().unwrap_or(0);
        let window = parts.iter().fold(None, |w, (_, f)| meet_window(w, f.window));
        let cutoff = parts.iter().fold(None, |c, (_, f)| meet_cutoff(c, f.cutoff));
        Ok(TruncatedField { node: Arc::new(Node::Sum(parts)), rank, weight, window, cutoff })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// `None` when every mode may be evaluated.
    pub fn window(&self) -> Option<(i64, i64)> {
        self.window
    }

    pub fn cutoff(&self) -> Option<i64> {
        self.cutoff
    }

    /// `A_n s`.
    pub fn mode(&self, n: i64, s: &FockState) -> Result<FockState> {
        if let Some((lo, hi)) = self.window {
            if n < lo || n > hi {
                return Err(Error::OutOfWindow { mode: n, lo, hi });
            }
        }
        let mut out = FockState::zero(self.rank);
        for (m, c) in s.terms() {
            let image = self.mode_on(n, m)?;
            out.add_scaled(&image, c);
        }
        Ok(out)
    }

    fn mode_on(&self, n: i64, mon: &Monomial) -> Result<FockState> {
        let degree = mon.degree();
        if let Some(cut) = self.cutoff {
            if degree > cut {
                return Err(Error::DegreeCutoff { degree, cutoff: cut });
            }
        }
        if degree + self.weight - n - 1 < 0 {
            return Ok(FockState::zero(self.rank));
        }
        match &*self.node {
            Node::Identity => {
                Ok(if n == -1 { FockState::basis(self.rank, mon.clone()) } else { FockState::zero(self.rank) })
            }
            Node::Generator(c) => Ok(apply_mode(*c, n, &FockState::basis(self.rank, mon.clone()))),
            Node::Sum(parts) => {
                let s = FockState::basis(self.rank, mon.clone());
                let mut out = FockState::zero(self.rank);
                for (c, f) in parts {
                    out.add_scaled(&f.mode(n, &s)?, c);
                }
                Ok(out)
            }
            Node::Residue { a, b, m, cache } => {
                let key = (n, mon.clone());
                if let Some(hit) = cache.lock().expect("cache lock").get(&key) {
                    return Ok(hit.clone());
                }
                let value = residue_mode(a, b, *m, n, mon, self.rank)?;
                cache.lock().expect("cache lock").insert(key, value.clone());
                Ok(value)
            }
        }
    }
}

/// `(A_m B)_n s = sum_i (-1)^i C(m,i) (A_{m-i} B_{n+i} s - (-1)^m B_{m+n-i} A_i s)`,
/// with both sums cut where the inner mode kills `s` by degree.
fn residue_mode(
    a: &TruncatedField,
    b: &TruncatedField,
    m: i64,
    n: i64,
    mon: &Monomial,
    rank: usize,
) -> Result<FockState> {
    let s = FockState::basis(rank, mon.clone());
    let degree = mon.degree();
    let cap = |bound: i64| if m >= 0 { bound.min(m) } else { bound };
    let mut out = FockState::zero(rank);

    for i in 0..=cap(degree + b.weight - n - 1) {
        let c = sign(i) * binomial(m, i);
        if c.is_zero() {
            continue;
        }
        let inner = b.mode(n + i, &s)?;
        if inner.is_zero() {
            continue;
        }
        out.add_scaled(&a.mode(m - i, &inner)?, &Coeff::from_integer(c));
    }
    for i in 0..=cap(degree + a.weight - 1) {
        let c = -sign(i + m) * binomial(m, i);
        if c.is_zero() {
            continue;
        }
        let inner = a.mode(i, &s)?;
        if inner.is_zero() {
            continue;
        }
        out.add_scaled(&b.mode(m + n - i, &inner)?, &Coeff::from_integer(c));
    }
    Ok(out)
}

impl fmt::Debug for TruncatedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.node {
            Node::Identity => write!(f, "I"),
            Node::Generator(c) => write!(f, "a{c}"),
            Node::Residue { a, b, m, .. } => write!(f, "({a:?})_{m}({b:?})"),
            Node::Sum(parts) => {
                write!(f, "[")?;
                for (i, (c, p)) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c}*{p:?}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Modes `P, Q` scanned by the locality check on a state of degree `degree`:
/// a box of radius `degree + wA + wB + 2`, clipped to each field's window.
fn check_box(a: &TruncatedField, b: &TruncatedField, degree: i64) -> ((i64, i64), (i64, i64)) {
    let r = degree + a.weight.max(0) + b.weight.max(0) + 2;
    let clip = |f: &TruncatedField| match f.window {
        Some((lo, hi)) => (lo.max(-r), hi.min(r)),
        None => (-r, r),
    };
    (clip(a), clip(b))
}

/// Smallest `N <= nmax` with `(z - w)^N [A(z), B(w)] = 0` on every basis
/// state of degree at most `degree`.
///
/// The coefficient of `z^{-P-1} w^{-Q-1}` is
/// `sum_k C(N,k) (-1)^k [A_{P+N-k}, B_{Q+k}]`; it is checked for every `(P, Q)`
/// in a box around the degrees in play whose evaluation stays inside all windows and
/// cutoffs. Pairs that would touch an unavailable mode are outside the
/// verified region and skipped; if nothing at all can be checked the
/// result is an error.
pub fn locality_order(a: &TruncatedField, b: &TruncatedField, nmax: u32, degree: i64) -> Result<Option<u32>> {
    let states = basis_up_to(a.rank, degree);
    for n in 0..=nmax as i64 {
        let mut checked = 0usize;
        let mut local = true;
        for outcome in states.par_iter().map(|s| local_on(a, b, n, s)).collect::<Vec<_>>() {
            let (ok, count) = outcome?;
            checked += count;
            local &= ok;
        }
        if checked == 0 {
            return Err(Error::InsufficientPrecision("no commutator coefficient fits the windows".into()));
        }
        if local {
            return Ok(Some(n as u32));
        }
    }
    Ok(None)
}

fn unavailable(e: &Error) -> bool {
    matches!(e, Error::OutOfWindow { .. } | Error::DegreeCutoff { .. })
}

/// Whether every checkable coefficient vanishes on `s`, and how many were checked.
fn local_on(a: &TruncatedField, b: &TruncatedField, n: i64, s: &FockState) -> Result<(bool, usize)> {
    let deg = s.degree().unwrap_or(0);
    let ((alo, ahi), (blo, bhi)) = check_box(a, b, deg);
    let mut checked = 0;
    for p in alo..=ahi - n {
        for q in blo..=bhi - n {
            let coefficient = || -> Result<FockState> {
                let mut total = FockState::zero(a.rank);
                for k in 0..=n {
                    let c = Coeff::from_integer(sign(k) * binomial(n, k));
                    let ab = a.mode(p + n - k, &b.mode(q + k, s)?)?;
                    let ba = b.mode(q + k, &a.mode(p + n - k, s)?)?;
                    total.add_scaled(&ab.sub(&ba), &c);
                }
                Ok(total)
            };
            match coefficient() {
                Ok(total) if total.is_zero() => checked += 1,
                Ok(_) => return Ok((false, checked + 1)),
                Err(e) if unavailable(&e) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok((true, checked))
}

/// Both sides of the residue-product Borcherds identity
///
/// `sum_i C(p,i) (A_{r+i}B)_{p+q-i} C = sum_i (-1)^i C(r,i) (A_{p+r-i}(B_{q+i}C) - (-1)^r B_{q+r-i}(A_{p+i}C))`
///
/// evaluated on `s` at every mode whose image has degree at most that of
/// `s`. `locality` must bound the pairwise locality orders of `A, B, C`;
/// it truncates the infinite `i`-sums through `X_n Y = 0` for `n >= locality`.
pub fn check_borcherds(
    a: &TruncatedField,
    b: &TruncatedField,
    c: &TruncatedField,
    (p, q, r): (i64, i64, i64),
    s: &FockState,
    locality: u32,
) -> Result<bool> {
    let nl = locality as i64;
    let mut lhs = Vec::new();
    let top = if p >= 0 { p.min(nl - r - 1) } else { nl - r - 1 };
    for i in 0..=top {
        let k = binomial(p, i);
        if !k.is_zero() {
            lhs.push((Coeff::from_integer(k), residue_product(&residue_product(a, b, r + i), c, p + q - i)));
        }
    }
    let mut rhs = Vec::new();
    let (top1, top2) = if r >= 0 { (r, r) } else { (nl - q - 1, nl - p - 1) };
    for i in 0..=top1.max(top2) {
        let k = sign(i) * binomial(r, i);
        if k.is_zero() {
            continue;
        }
        if i <= top1 {
            rhs.push((Coeff::from_integer(k.clone()), residue_product(a, &residue_product(b, c, q + i), p + r - i)));
        }
        if i <= top2 {
            let k2 = -sign(r) * k;
            rhs.push((Coeff::from_integer(k2), residue_product(b, &residue_product(a, c, p + i), q + r - i)));
        }
    }

    let weight = a.weight + b.weight + c.weight - p - q - r - 2;
    let deg = s.degree().unwrap_or(0);
    let eval = |terms: &[(Coeff, TruncatedField)], k: i64| -> Result<FockState> {
        let mut out = FockState::zero(s.rank());
        for (coef, f) in terms {
            out.add_scaled(&f.mode(k, s)?, coef);
        }
        Ok(out)
    };
    for k in weight - 1..=deg + weight - 1 {
        if eval(&lhs, k)? != eval(&rhs, k)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Y(omega, z)` for `omega = 1/2 sum_i (e^i t^{-1})^2 |0>`, built as
/// `1/2 sum_i a^i(z)_{-1} a^i(z)`.
pub fn virasoro_field(config: &FieldConfig) -> TruncatedField {
    let half = Coeff::new(1.into(), 2.into());
    let parts = (0..config.rank)
        .map(|i| {
            let g = generator_field(i, config);
            (half.clone(), residue_product(&g, &g, -1))
        })
        .collect();
    TruncatedField::combination(parts).expect("rank is positive")
}

/// `[L_m, L_n] s = (m - n) L_{m+n} s + C(m+1, 3) delta_{m,-n} (c/2) s` with
/// `L_k = omega_{k+1}` and `c` the rank.
pub fn check_virasoro(omega: &TruncatedField, m: i64, n: i64, s: &FockState) -> Result<bool> {
    let l = |k: i64, v: &FockState| omega.mode(k + 1, v);
    let lhs = l(m, &l(n, s)?)?.sub(&l(n, &l(m, s)?)?);
    let mut rhs = l(m + n, s)?.scale(&Coeff::from_integer((m - n).into()));
    if m == -n {
        let central = Coeff::from_integer(binomial(m + 1, 3)) * Coeff::new(BigInt::from(omega.rank), 2.into());
        rhs.add_scaled(s, &central);
    }
    Ok(lhs == rhs)
}

/// The field attached to a state: `a^{c_1}_{n_1} ... a^{c_k}_{n_k} |0>` goes to
/// `a^{c_1}(z)_{n_1} ( ... (a^{c_k}(z)_{n_k} I(z)))`, extended linearly.
pub fn field_of_state(state: &FockState, config: &FieldConfig) -> TruncatedField {
    let parts: Vec<(Coeff, TruncatedField)> = state
        .terms()
        .map(|(mon, c)| {
            let f = mon.factors().iter().rev().fold(identity_field(config.rank), |acc, &(n, color)| {
                residue_product(&generator_field(color, config), &acc, n)
            });
            (c.clone(), f)
        })
        .collect();
    if parts.is_empty() {
        return TruncatedField::combination(vec![(Coeff::zero(), identity_field(config.rank))])
            .expect("nonempty combination");
    }
    TruncatedField::combination(parts).expect("fields share a rank")
}

/// `T w = w_{-2} |0>`.
pub fn translation(w: &FockState, config: &FieldConfig) -> Result<FockState> {
    field_of_state(w, config).mode(-2, &FockState::vacuum(config.rank))
}

/// Skew symmetry `v_n u = sum_k (-1)^{n+k+1} T^(k) (u_{n+k} v)` for every
/// `n` from `min_mode` up to the last mode that can act nontrivially.
pub fn check_skew_symmetry(u: &FockState, v: &FockState, min_mode: i64, config: &FieldConfig) -> Result<bool> {
    let yu = field_of_state(u, config);
    let yv = field_of_state(v, config);
    let top = u.degree().unwrap_or(0) + v.degree().unwrap_or(0) - 1;
    for n in min_mode..=top {
        let lhs = yv.mode(n, u)?;
        let mut rhs = FockState::zero(config.rank);
        let mut k = 0i64;
        let mut factorial = BigInt::one();
        while n + k <= top {
            let mut t = yu.mode(n + k, v)?;
            for _ in 0..k {
                t = translation(&t, config)?;
            }
            let c = Coeff::new(sign(n + k + 1), factorial.clone());
            rhs.add_scaled(&t, &c);
            k += 1;
            factorial *= k;
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The commutator formula `[u_p, v_q] s = sum_i C(p,i) (u_i v)_{p+q-i} s`.
pub fn check_commutator_formula(
    u: &FockState,
    v: &FockState,
    p: i64,
    q: i64,
    s: &FockState,
    config: &FieldConfig,
) -> Result<bool> {
    let yu = field_of_state(u, config);
    let yv = field_of_state(v, config);
    let lhs = yu.mode(p, &yv.mode(q, s)?)?.sub(&yv.mode(q, &yu.mode(p, s)?)?);
    let top = u.degree().unwrap_or(0) + v.degree().unwrap_or(0) - 1;
    let mut rhs = FockState::zero(config.rank);
    for i in 0..=top {
        let c = binomial(p, i);
        if c.is_zero() {
            continue;
        }
        let w = yu.mode(i, v)?;
        if w.is_zero() {
            continue;
        }
        rhs.add_scaled(&field_of_state(&w, config).mode(p + q - i, s)?, &Coeff::from_integer(c));
    }
    Ok(lhs == rhs)
}
