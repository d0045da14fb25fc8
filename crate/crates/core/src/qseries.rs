//! Truncated series in fractional powers of `q` with exact rational
//! coefficients, and the modular forms and eta quotients built from them.
//!
//! A [`FracQSeries`] with denominator `N` stores the coefficient of
//! `q^{k/N}` under key `k` and a truncation `T`: coefficients of exponents
//! `>= T/N` are unknown and never reported. Products propagate the
//! truncation as `min(T1 + l2, T2 + l1)` with `l` the leading exponents.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Largest exponent denominator a series may carry; `eta(tau/2)` needs 48.
pub const MAX_DENOM: i64 = 48;

pub type Coeff = BigRational;

fn rat(v: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(v))
}

#[derive(Clone, PartialEq, Eq)]
pub struct FracQSeries {
    denom: i64,
    /// `None` for an exact (finite) series.
    trunc: Option<i64>,
    coeffs: BTreeMap<i64, Coeff>,
}

impl FracQSeries {
    /// Builds a series, dropping zero coefficients and checking that nothing
    /// sits at or beyond the truncation.
    pub fn new(denom: i64, trunc: Option<i64>, coeffs: BTreeMap<i64, Coeff>) -> Result<Self> {
        if denom <= 0 {
            return Err(Error::InvalidSeries(format!("denominator {denom} must be positive")));
        }
        if denom > MAX_DENOM {
            return Err(Error::DenominatorOverflow { needed: denom as u64, max: MAX_DENOM as u64 });
        }
        let coeffs: BTreeMap<i64, Coeff> = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if let (Some(t), Some((&k, _))) = (trunc, coeffs.last_key_value()) {
            if k >= t {
                return Err(Error::InvalidSeries(format!("coefficient at {k}/{denom} beyond truncation {t}/{denom}")));
            }
        }
        Ok(FracQSeries { denom, trunc, coeffs }.normalized())
    }

    pub fn from_terms<C: Into<Coeff>>(
        denom: i64,
        trunc: i64,
        terms: impl IntoIterator<Item = (i64, C)>,
    ) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            *coeffs.entry(k).or_insert_with(Coeff::zero) += c.into();
        }
        Self::new(denom, Some(trunc), coeffs)
    }

    /// An exact finite sum `sum c_k q^{k/denom}`.
    pub fn polynomial<C: Into<Coeff>>(denom: i64, terms: impl IntoIterator<Item = (i64, C)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (k, c) in terms {
            *coeffs.entry(k).or_insert_with(Coeff::zero) += c.into();
        }
        Self::new(denom, None, coeffs)
    }

    pub fn constant(c: impl Into<Coeff>) -> Self {
        Self::polynomial(1, [(0, c.into())]).expect("denominator 1 is valid")
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    /// `q^exponent`, exactly.
    pub fn monomial(exponent: Ratio<i64>, c: impl Into<Coeff>) -> Result<Self> {
        Self::polynomial(*exponent.denom(), [(*exponent.numer(), c.into())])
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// Exponents strictly below this bound are known.
    pub fn truncation(&self) -> Option<Ratio<i64>> {
        self.trunc.map(|t| Ratio::new(t, self.denom))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Ratio<i64>, &Coeff)> + '_ {
        self.coeffs.iter().map(move |(&k, c)| (Ratio::new(k, self.denom), c))
    }

    pub fn raw_terms(&self) -> &BTreeMap<i64, Coeff> {
        &self.coeffs
    }

    /// Lowest exponent with a known nonzero coefficient.
    pub fn valuation(&self) -> Option<Ratio<i64>> {
        self.coeffs.keys().next().map(|&k| Ratio::new(k, self.denom))
    }

    pub fn leading_coefficient(&self) -> Option<&Coeff> {
        self.coeffs.values().next()
    }

    /// The coefficient of `q^exponent`; errors when the exponent is not
    /// covered by the truncation.
    pub fn coeff(&self, exponent: Ratio<i64>) -> Result<Coeff> {
        if let Some(t) = self.truncation() {
            if exponent >= t {
                return Err(Error::InsufficientPrecision(format!(
                    "coefficient of q^{exponent} requested, series known below q^{t}"
                )));
            }
        }
        let scaled = exponent * self.denom;
        if !scaled.is_integer() {
            return Ok(Coeff::zero());
        }
        Ok(self.coeffs.get(&scaled.to_integer()).cloned().unwrap_or_else(Coeff::zero))
    }

    pub fn coeff_int(&self, exponent: i64) -> Result<Coeff> {
        self.coeff(Ratio::from_integer(exponent))
    }

    /// Smallest denominator that represents the same series.
    fn normalized(mut self) -> Self {
        let mut g = self.denom;
        for &k in self.coeffs.keys() {
            g = g.gcd(&k);
        }
        if let Some(t) = self.trunc {
            g = g.gcd(&t);
        }
        if g > 1 {
            self.denom /= g;
            self.trunc = self.trunc.map(|t| t / g);
            self.coeffs = std::mem::take(&mut self.coeffs).into_iter().map(|(k, c)| (k / g, c)).collect();
        }
        self
    }

    /// Same series over the denominator `denom` (a multiple of the current one).
    fn lifted(&self, denom: i64) -> Result<Self> {
        if denom > MAX_DENOM {
            return Err(Error::DenominatorOverflow { needed: denom as u64, max: MAX_DENOM as u64 });
        }
        debug_assert_eq!(denom % self.denom, 0);
        let f = denom / self.denom;
        Ok(FracQSeries {
            denom,
            trunc: self.trunc.map(|t| t * f),
            coeffs: self.coeffs.iter().map(|(&k, c)| (k * f, c.clone())).collect(),
        })
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        let d = self.denom.lcm(&other.denom);
        Ok((self.lifted(d)?, other.lifted(d)?))
    }

    fn drop_from(&mut self, trunc: Option<i64>) {
        if let Some(t) = trunc {
            self.coeffs.retain(|&k, _| k < t);
        }
        self.trunc = trunc;
    }

    /// Forgets everything at or beyond `q^bound`.
    pub fn truncate(&self, bound: Ratio<i64>) -> Result<Self> {
        let d = self.denom.lcm(bound.denom());
        let mut s = self.lifted(d)?;
        let t = (bound * d).to_integer();
        let t = s.trunc.map_or(t, |old| old.min(t));
        s.drop_from(Some(t));
        Ok(s.normalized())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.aligned(other)?;
        let trunc = min_trunc(a.trunc, b.trunc);
        for (k, c) in b.coeffs {
            let e = a.coeffs.entry(k).or_insert_with(Coeff::zero);
            *e += c;
        }
        a.coeffs.retain(|_, c| !c.is_zero());
        a.drop_from(trunc);
        Ok(a.normalized())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FracQSeries {
            denom: self.denom,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return FracQSeries { denom: self.denom, trunc: self.trunc, coeffs: BTreeMap::new() }.normalized();
        }
        FracQSeries {
            denom: self.denom,
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&rat(c))
    }

    /// Leading key for truncation bookkeeping: the valuation, or the
    /// truncation itself for a series with no known nonzero term.
    fn lead_key(&self) -> Option<i64> {
        self.coeffs.keys().next().copied().or(self.trunc)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let trunc = match (a.trunc, b.trunc) {
            (None, None) => None,
            (Some(t), None) => match b.lead_key() {
                Some(l) => Some(t + l),
                None => return Ok(zero_exact(a.denom)),
            },
            (None, Some(t)) => match a.lead_key() {
                Some(l) => Some(t + l),
                None => return Ok(zero_exact(a.denom)),
            },
            (Some(t1), Some(t2)) => Some((t1 + b.lead_key().unwrap()).min(t2 + a.lead_key().unwrap())),
        };
        let mut out: BTreeMap<i64, Coeff> = BTreeMap::new();
        for (&i, x) in &a.coeffs {
            for (&j, y) in &b.coeffs {
                if let Some(t) = trunc {
                    if i + j >= t {
                        break;
                    }
                }
                *out.entry(i + j).or_insert_with(Coeff::zero) += x * y;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(FracQSeries { denom: a.denom, trunc, coeffs: out }.normalized())
    }

    /// Multiplicative inverse. The truncation becomes `T - 2l` for leading
    /// exponent `l`; an exact series with more than one term gets the
    /// truncation `-l + (T' - l)` where `T'` is `precision` past `l`.
    pub fn invert_with_precision(&self, precision: Ratio<i64>) -> Result<Self> {
        let Some((&lead, c0)) = self.coeffs.iter().next() else {
            return Err(Error::ZeroLeadingCoefficient);
        };
        if let Some(t) = self.trunc {
            if lead >= t {
                return Err(Error::ZeroLeadingCoefficient);
            }
        }
        if self.is_exact() && self.coeffs.len() == 1 {
            let mut coeffs = BTreeMap::new();
            coeffs.insert(-lead, c0.recip());
            return Ok(FracQSeries { denom: self.denom, trunc: None, coeffs }.normalized());
        }
        let d = self.denom.lcm(precision.denom());
        let s = self.lifted(d)?;
        let lead = lead * (d / self.denom);
        let rel = match s.trunc {
            Some(t) => t - lead,
            None => (precision * d).ceil().to_integer(),
        };
        if rel <= 0 {
            return Err(Error::InsufficientPrecision("no known terms to invert".into()));
        }
        let rel_usize = rel as usize;
        let mut u = vec![Coeff::zero(); rel_usize];
        for (&k, c) in &s.coeffs {
            let i = (k - lead) as usize;
            if i < rel_usize {
                u[i] = c.clone();
            }
        }
        let inv0 = u[0].recip();
        let mut b = vec![Coeff::zero(); rel_usize];
        b[0] = inv0.clone();
        for n in 1..rel_usize {
            let mut acc = Coeff::zero();
            for k in 1..=n {
                if !u[k].is_zero() {
                    acc += &u[k] * &b[n - k];
                }
            }
            b[n] = -(acc * &inv0);
        }
        let coeffs = b.into_iter().enumerate().map(|(i, c)| (i as i64 - lead, c)).collect();
        FracQSeries::new(d, Some(rel - lead), coeffs)
    }

    pub fn invert(&self) -> Result<Self> {
        self.invert_with_precision(Ratio::from_integer(0))
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.invert()?.pow(-n);
        }
        let mut result = FracQSeries::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// `q -> q^m`, i.e. `tau -> m tau`.
    pub fn rescale_q(&self, m: Ratio<i64>) -> Result<Self> {
        if m <= Ratio::from_integer(0) {
            return Err(Error::InvalidSeries(format!("rescale factor {m} must be positive")));
        }
        let (p, r) = (*m.numer(), *m.denom());
        let denom = self.denom * r;
        let s = FracQSeries {
            denom,
            trunc: self.trunc.map(|t| t * p),
            coeffs: self.coeffs.iter().map(|(&k, c)| (k * p, c.clone())).collect(),
        }
        .normalized();
        if s.denom > MAX_DENOM {
            return Err(Error::DenominatorOverflow { needed: s.denom as u64, max: MAX_DENOM as u64 });
        }
        Ok(s)
    }

    /// Keeps only the terms with integral exponent.
    pub fn integral_part(&self) -> Self {
        let coeffs = self.coeffs.iter().filter(|(&k, _)| k % self.denom == 0).map(|(&k, c)| (k, c.clone())).collect();
        FracQSeries { denom: self.denom, trunc: self.trunc, coeffs }.normalized()
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Whether every coefficient is a nonnegative integer.
    pub fn is_nonnegative_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer() && !c.is_negative())
    }

    /// Exact equality of the two series below the smaller truncation.
    pub fn agrees_with(&self, other: &Self) -> Result<bool> {
        Ok(self.first_difference(other)?.is_none())
    }

    /// First exponent below the shared truncation where the series differ.
    pub fn first_difference(&self, other: &Self) -> Result<Option<(Ratio<i64>, Coeff, Coeff)>> {
        let (a, b) = self.aligned(other)?;
        let t = min_trunc(a.trunc, b.trunc);
        let keys: std::collections::BTreeSet<i64> = a.coeffs.keys().chain(b.coeffs.keys()).copied().collect();
        for k in keys {
            if t.is_some_and(|t| k >= t) {
                break;
            }
            let x = a.coeffs.get(&k).cloned().unwrap_or_else(Coeff::zero);
            let y = b.coeffs.get(&k).cloned().unwrap_or_else(Coeff::zero);
            if x != y {
                return Ok(Some((Ratio::new(k, a.denom), x, y)));
            }
        }
        Ok(None)
    }

    /// Text form: `denom trunc` header (trunc `*` for exact), then one
    /// `k num/den` line per nonzero coefficient.
    pub fn to_text(&self) -> String {
        let t = self.trunc.map_or("*".to_string(), |t| t.to_string());
        let mut s = format!("{} {}\n", self.denom, t);
        for (k, c) in &self.coeffs {
            s.push_str(&format!("{} {}/{}\n", k, c.numer(), c.denom()));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty series text".into()))?;
        let mut h = header.split_whitespace();
        let denom: i64 = parse_tok(h.next(), "denom")?;
        let trunc = match h.next() {
            Some("*") => None,
            Some(t) => Some(t.parse::<i64>().map_err(|e| Error::Parse(format!("trunc: {e}")))?),
            None => return Err(Error::Parse("missing trunc".into())),
        };
        let mut coeffs = BTreeMap::new();
        let mut last: Option<i64> = None;
        for line in lines {
            let mut parts = line.split_whitespace();
            let k: i64 = parse_tok(parts.next(), "exponent")?;
            let c =
                parse_rational(parts.next().ok_or_else(|| Error::Parse(format!("missing coefficient in {line:?}")))?)?;
            if last.is_some_and(|l| k <= l) {
                return Err(Error::Parse("exponents must be strictly increasing".into()));
            }
            last = Some(k);
            coeffs.insert(k, c);
        }
        Self::new(denom, trunc, coeffs)
    }
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    tok.ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse::<T>()
        .map_err(|e| Error::Parse(format!("{what}: {e}")))
}

pub fn parse_rational(s: &str) -> Result<Coeff> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|e| Error::Parse(format!("numerator {n:?}: {e}")))?;
    let d: BigInt = d.parse().map_err(|e| Error::Parse(format!("denominator {d:?}: {e}")))?;
    if d.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn format_exponent(e: Ratio<i64>) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

fn min_trunc(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn zero_exact(denom: i64) -> FracQSeries {
    FracQSeries { denom, trunc: None, coeffs: BTreeMap::new() }.normalized()
}

impl fmt::Display for FracQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let is_one = abs.is_one();
            if e.is_zero() {
                write!(f, "{}", format_rational(&abs))?;
                continue;
            }
            if !is_one {
                write!(f, "{}*", format_rational(&abs))?;
            }
            if e.is_one() {
                f.write_str("q")?;
            } else {
                write!(f, "q^({})", format_exponent(e))?;
            }
        }
        if let Some(t) = self.truncation() {
            if first {
                write!(f, "O(q^({}))", format_exponent(t))?;
            } else {
                write!(f, " + O(q^({}))", format_exponent(t))?;
            }
        } else if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FracQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FracQSeries({self})")
    }
}

// ---------------------------------------------------------------------------
// Named series

/// `prod_{n >= 1} (1 - x^{step n})^power` as a dense integer vector of
/// length `len` in the variable `x`.
fn euler_power(step: usize, power: i64, len: usize) -> Vec<BigInt> {
    let mut base = vec![BigInt::zero(); len];
    if len == 0 {
        return base;
    }
    base[0] = BigInt::one();
    // prod (1 - x^{step n}) by successive multiplication
    let mut n = step;
    while n < len {
        for i in (n..len).rev() {
            let t = base[i - n].clone();
            base[i] -= t;
        }
        n += step;
    }
    if power == 1 {
        return base;
    }
    let base = if power < 0 { dense_inverse_unit(&base) } else { base };
    dense_pow(&base, power.unsigned_abs(), len)
}

fn dense_mul(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn dense_pow(base: &[BigInt], mut e: u64, len: usize) -> Vec<BigInt> {
    let mut result = vec![BigInt::zero(); len];
    if len > 0 {
        result[0] = BigInt::one();
    }
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            result = dense_mul(&result, &b, len);
        }
        e >>= 1;
        if e > 0 {
            b = dense_mul(&b, &b, len);
        }
    }
    result
}

/// Inverse of a series with constant term 1.
fn dense_inverse_unit(a: &[BigInt]) -> Vec<BigInt> {
    let len = a.len();
    let mut b = vec![BigInt::zero(); len];
    b[0] = BigInt::one();
    for n in 1..len {
        let mut acc = BigInt::zero();
        for k in 1..=n {
            if !a[k].is_zero() {
                acc += &a[k] * &b[n - k];
            }
        }
        b[n] = -acc;
    }
    b
}

/// One factor `eta(m tau)^r` of an eta quotient; `m` is a positive integer or
/// a half-integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EtaFactor {
    pub m: Ratio<i64>,
    pub r: i64,
}

impl EtaFactor {
    pub fn new(m: i64, r: i64) -> Self {
        EtaFactor { m: Ratio::from_integer(m), r }
    }

    pub fn half(numer: i64, r: i64) -> Self {
        EtaFactor { m: Ratio::new(numer, 2), r }
    }
}

/// `prod eta(m tau)^r`, valid for exponents below `prec`.
pub fn eta_quotient(factors: &[EtaFactor], prec: Ratio<i64>) -> Result<FracQSeries> {
    // grid: exponents of the product part are multiples of 1/grid
    let mut grid = 1i64;
    for f in factors {
        if f.m <= Ratio::from_integer(0) || !(f.m.is_integer() || *f.m.denom() == 2) {
            return Err(Error::UnsupportedEtaArgument(f.m.to_string()));
        }
        grid = grid.max(*f.m.denom());
    }
    let lead: Ratio<i64> = factors.iter().map(|f| f.m * f.r).sum::<Ratio<i64>>() / 24;
    let denom = grid.lcm(lead.denom());
    if denom > MAX_DENOM {
        return Err(Error::DenominatorOverflow { needed: denom as u64, max: MAX_DENOM as u64 });
    }
    let rel = prec - lead;
    if rel <= Ratio::from_integer(0) {
        return FracQSeries::new(denom, Some((prec * denom).ceil().to_integer()), BTreeMap::new());
    }
    let len = (rel * grid).ceil().to_integer() as usize;
    let mut prod = vec![BigInt::zero(); len];
    prod[0] = BigInt::one();
    for f in factors {
        let step = (f.m * grid).to_integer() as usize;
        prod = dense_mul(&prod, &euler_power(step, f.r, len), len);
    }
    let lead_key = (lead * denom).to_integer();
    let stride = denom / grid;
    let coeffs = prod
        .into_iter()
        .enumerate()
        .map(|(i, c)| (lead_key + i as i64 * stride, BigRational::from_integer(c)))
        .collect();
    let trunc = lead_key + len as i64 * stride;
    let s = FracQSeries::new(denom, Some(trunc), coeffs)?;
    s.truncate(prec)
}

pub fn eta_quotient_int(factors: &[(i64, i64)], prec: i64) -> Result<FracQSeries> {
    let f: Vec<EtaFactor> = factors.iter().map(|&(m, r)| EtaFactor::new(m, r)).collect();
    eta_quotient(&f, Ratio::from_integer(prec))
}

fn sigma3(n: i64) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum()
}

/// `E_4 = 1 + 240 sum sigma_3(n) q^n`, exponents below `prec`.
pub fn eisenstein_e4(prec: i64) -> FracQSeries {
    let terms = (0..prec).map(|n| (n, rat(if n == 0 { 1 } else { 240 * sigma3(n) })));
    FracQSeries::from_terms(1, prec.max(0), terms).expect("integer exponents")
}

/// `Delta = q prod (1 - q^n)^24`, exponents below `prec`.
pub fn discriminant_delta(prec: i64) -> FracQSeries {
    eta_quotient_int(&[(1, 24)], prec).expect("eta(tau)^24 is supported")
}

/// The weight-12 level-1 form `a E_4^3 + b Delta` with constant term `c0` and
/// `q`-coefficient `c1`, exponents below `prec`.
pub fn weight12_match(c0: &Coeff, c1: &Coeff, prec: i64) -> Result<FracQSeries> {
    let e4 = eisenstein_e4(prec);
    let e4_cubed = e4.pow(3)?;
    let b = c1 - c0 * rat(720);
    e4_cubed.scale(c0).add(&discriminant_delta(prec).scale(&b))?.truncate(Ratio::from_integer(prec))
}

/// `theta / eta^d`: the character of a lattice vertex algebra of rank `d`.
pub fn char_lattice_voa(theta: &FracQSeries, d: i64) -> Result<FracQSeries> {
    if theta.coeff_int(0)? != Coeff::one() || theta.valuation() != Some(Ratio::from_integer(0)) {
        return Err(Error::InvalidSeries("theta series must start with constant term 1".into()));
    }
    let prec = theta.truncation().unwrap_or(Ratio::from_integer(1));
    // eta^{-d} needs the same relative precision as theta
    let shift = Ratio::new(-d, 24);
    let eta_inv = eta_quotient(&[EtaFactor::new(1, -d)], prec + shift)?;
    theta.mul(&eta_inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ints(s: &FracQSeries) -> Vec<(Ratio<i64>, i64)> {
        s.terms().map(|(e, c)| (e, c.to_integer().to_i64().unwrap())).collect()
    }

    /// Oracle: coefficients of prod (1 - q^k)^{-24} by repeated geometric
    /// series multiplication in machine integers.
    fn inverse_eta24_oracle(n: usize) -> Vec<i64> {
        let mut c = vec![0i64; n];
        c[0] = 1;
        for k in 1..n {
            for _ in 0..24 {
                for i in k..n {
                    c[i] += c[i - k];
                }
            }
        }
        c
    }

    #[test]
    fn ring_law_inverse() {
        let one_minus_q = FracQSeries::polynomial(1, [(0, rat(1)), (1, rat(-1))]).unwrap();
        let inv = one_minus_q.invert_with_precision(Ratio::from_integer(10)).unwrap();
        let prod = one_minus_q.mul(&inv).unwrap();
        assert_eq!(prod.truncation(), Some(Ratio::from_integer(10)));
        assert!(prod.agrees_with(&FracQSeries::one()).unwrap());
    }

    #[test]
    fn geometric_series() {
        let one_plus_q = FracQSeries::from_terms(1, 6, [(0, rat(1)), (1, rat(1))]).unwrap();
        let inv = one_plus_q.pow(-1).unwrap();
        let expected: Vec<(Ratio<i64>, i64)> =
            (0..6).map(|k| (Ratio::from_integer(k), if k % 2 == 0 { 1 } else { -1 })).collect();
        assert_eq!(ints(&inv), expected);
    }

    #[test]
    fn truncation_propagation() {
        let a = FracQSeries::from_terms(1, 5, [(1, rat(1)), (2, rat(3))]).unwrap();
        let b = FracQSeries::from_terms(1, 4, [(-1, rat(1)), (0, rat(2))]).unwrap();
        // min(5 + (-1), 4 + 1) = 4
        assert_eq!(a.mul(&b).unwrap().truncation(), Some(Ratio::from_integer(4)));
        assert_eq!(a.add(&b).unwrap().truncation(), Some(Ratio::from_integer(4)));
        assert!(a.coeff_int(5).is_err());
    }

    #[test]
    fn inverse_eta24() {
        let s = eta_quotient_int(&[(1, -24)], 9).unwrap();
        assert_eq!(s.valuation(), Some(Ratio::from_integer(-1)));
        let oracle = inverse_eta24_oracle(10);
        assert_eq!(&oracle[..4], &[1, 24, 324, 3200]);
        for k in -1..9 {
            assert_eq!(s.coeff_int(k).unwrap(), rat(oracle[(k + 1) as usize]));
        }
    }

    #[test]
    fn trace_of_involution_coefficients() {
        let s = eta_quotient_int(&[(1, 24), (2, -24)], 3).unwrap();
        let c: Vec<i64> = (-1..3).map(|k| s.coeff_int(k).unwrap().to_integer().to_i64().unwrap()).collect();
        assert_eq!(c, vec![1, -24, 276, -2048]);
    }

    #[test]
    fn twisted_character_coefficients() {
        let s = eta_quotient(&[EtaFactor::new(1, 24), EtaFactor::half(1, -24)], Ratio::from_integer(2))
            .unwrap()
            .scale_int(4096);
        assert_eq!(s.valuation(), Some(Ratio::new(1, 2)));
        assert_eq!(s.coeff(Ratio::new(1, 2)).unwrap(), rat(4096));
        assert_eq!(s.coeff_int(1).unwrap(), rat(98304));
    }

    #[test]
    fn eta_quotient_inverse_pair() {
        let a = eta_quotient_int(&[(1, 24), (2, -24)], 12).unwrap();
        let b = eta_quotient_int(&[(2, 24), (1, -24)], 12).unwrap();
        let p = a.mul(&b).unwrap();
        assert!(p.agrees_with(&FracQSeries::one()).unwrap());
        assert!(p.truncation().unwrap() >= Ratio::from_integer(11));
    }

    #[test]
    fn rescale_doubles_exponents() {
        let eta = eta_quotient_int(&[(1, 1)], 6).unwrap();
        let eta2 = eta.rescale_q(Ratio::from_integer(2)).unwrap();
        assert_eq!(eta2.valuation(), Some(Ratio::new(2, 24)));
        let direct = eta_quotient_int(&[(2, 1)], 12).unwrap();
        assert!(eta2.agrees_with(&direct).unwrap());
        assert!(eta.rescale_q(Ratio::new(1, 5)).is_err());
    }

    #[test]
    fn eisenstein_and_delta() {
        let e4 = eisenstein_e4(4);
        assert_eq!(e4.coeff_int(1).unwrap(), rat(240));
        assert_eq!(e4.coeff_int(2).unwrap(), rat(2160));
        assert_eq!(e4.pow(3).unwrap().coeff_int(1).unwrap(), rat(720));
        let d = discriminant_delta(4);
        assert_eq!(ints(&d).iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, -24, 252]);
    }

    #[test]
    fn weight12_examples() {
        let n = weight12_match(&rat(1), &rat(48), 3).unwrap();
        assert_eq!(n.coeff_int(1).unwrap(), rat(48));
        assert_eq!(n.coeff_int(2).unwrap(), rat(195408));
        let l = weight12_match(&rat(1), &rat(0), 3).unwrap();
        assert_eq!(l.coeff_int(1).unwrap(), rat(0));
        assert_eq!(l.coeff_int(2).unwrap(), rat(196560));
        let d = weight12_match(&rat(0), &rat(1), 5).unwrap();
        assert!(d.agrees_with(&discriminant_delta(5)).unwrap());
    }

    #[test]
    fn lattice_voa_characters() {
        let theta = weight12_match(&rat(1), &rat(0), 4).unwrap();
        let ch = char_lattice_voa(&theta, 24).unwrap();
        assert_eq!(ch.coeff_int(-1).unwrap(), rat(1));
        assert_eq!(ch.coeff_int(0).unwrap(), rat(24));
        assert_eq!(ch.coeff_int(1).unwrap(), rat(196884));

        let trivial = char_lattice_voa(&FracQSeries::from_terms(1, 6, [(0, rat(1))]).unwrap(), 24).unwrap();
        assert!(trivial.agrees_with(&eta_quotient_int(&[(1, -24)], 6).unwrap()).unwrap());

        // A1: theta = sum_n q^{n^2}; divide by eta and compare with an
        // independent series division
        let theta_a1 = FracQSeries::from_terms(1, 10, (-3i64..=3).map(|n| (n * n, rat(1)))).unwrap();
        let ch = char_lattice_voa(&theta_a1, 1).unwrap();
        let eta = eta_quotient(&[EtaFactor::new(1, 1)], Ratio::from_integer(11)).unwrap();
        let back = ch.mul(&eta).unwrap();
        assert!(back.agrees_with(&theta_a1).unwrap());
        assert_eq!(ch.valuation(), Some(Ratio::new(-1, 24)));
    }

    #[test]
    fn unsupported_eta_argument() {
        let r = eta_quotient(&[EtaFactor { m: Ratio::new(1, 3), r: 1 }], Ratio::from_integer(3));
        assert!(matches!(r, Err(Error::UnsupportedEtaArgument(_))));
    }

    #[test]
    fn zero_leading_coefficient() {
        let z = FracQSeries::from_terms(1, 5, Vec::<(i64, Coeff)>::new()).unwrap();
        assert_eq!(z.invert().unwrap_err(), Error::ZeroLeadingCoefficient);
    }

    #[test]
    fn text_and_display() {
        let s = eta_quotient_int(&[(1, 24), (2, -24)], 2).unwrap();
        assert_eq!(FracQSeries::from_text(&s.to_text()).unwrap(), s);
        assert_eq!(s.to_string(), "q^(-1) - 24 + 276*q + O(q^(2))");
        assert!(FracQSeries::from_text("1 3\n2 1/1\n1 1/1\n").is_err());
    }
}
