//! The character of the moonshine module assembled from the Leech lattice
//! and its twisted sector, the triality splitting, and complete
//! replicability of McKay-Thompson series.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_actions::valuation;
use crate::qseries::{
    char_lattice_voa, eta_quotient, eta_quotient_int, format_rational, weight12_match, Coeff, EtaFactor, FracQSeries,
};

fn int(n: i64) -> Coeff {
    Coeff::from_integer(n.into())
}

fn q_exp(n: i64) -> Ratio<i64> {
    Ratio::from_integer(n)
}

/// `eta(tau)^24 / eta(2 tau)^24`, the graded trace of the lift of `-1`.
pub fn involution_trace(prec: i64) -> Result<FracQSeries> {
    eta_quotient_int(&[(1, 24), (2, -24)], prec)
}

/// `2^12 eta(tau)^24 / eta(tau/2)^24`, the character of the twisted module.
pub fn twisted_character(prec: i64) -> Result<FracQSeries> {
    Ok(eta_quotient(&[EtaFactor::new(1, 24), EtaFactor::half(1, -24)], q_exp(prec))?.scale_int(4096))
}

/// The Leech theta series as the weight-12 form `1 + 0 q + ...`, below `prec`.
pub fn leech_theta_modular(prec: i64) -> Result<FracQSeries> {
    weight12_match(&int(1), &int(0), prec)
}

/// The theta series of N(A1^24) as the weight-12 form `1 + 48 q + ...`.
pub fn niemeier_theta_modular(prec: i64) -> Result<FracQSeries> {
    weight12_match(&int(1), &int(48), prec)
}

/// All the characters that enter the construction, valid below `q^prec`.
#[derive(Debug, Clone)]
pub struct CharacterBundle {
    pub leech: FracQSeries,
    pub trace: FracQSeries,
    pub twisted: FracQSeries,
    /// `+1` or `-1`: the sign with which the integral part of the twisted
    /// character enters `J`.
    pub twisted_sign: i8,
    pub v00: FracQSeries,
    pub v01: FracQSeries,
    pub v10: FracQSeries,
    pub v11: FracQSeries,
    pub j: FracQSeries,
}

struct Candidate {
    sign: i8,
    j: FracQSeries,
    v00: FracQSeries,
    third: FracQSeries,
}

impl Candidate {
    fn triality_consistent(&self) -> bool {
        self.v00.is_nonnegative_integral() && self.third.is_nonnegative_integral()
    }
}

fn candidate(
    sign: i8,
    leech: &FracQSeries,
    niemeier: &FracQSeries,
    trace: &FracQSeries,
    twisted: &FracQSeries,
) -> Result<Candidate> {
    let half = Coeff::new(1.into(), 2.into());
    let untwisted = leech.add(trace)?.scale(&half);
    let j = untwisted.add(&twisted.integral_part().scale_int(sign as i64))?;
    let v00 = niemeier.add(&trace.scale_int(3))?.scale(&Coeff::new(1.into(), 4.into()));
    let third = j.sub(&v00)?.scale(&Coeff::new(1.into(), 3.into()));
    Ok(Candidate { sign, j, v00, third })
}

impl CharacterBundle {
    /// Builds every character from the two theta series (each valid below
    /// `q^{prec+1}`), choosing the twisted-sector sign that gives a vanishing
    /// `q^0` coefficient; when both signs do, the one compatible with the
    /// triality splitting is taken.
    pub fn from_thetas(leech_theta: &FracQSeries, niemeier_theta: &FracQSeries, prec: i64) -> Result<Self> {
        if prec < 3 {
            return Err(Error::InsufficientPrecision(format!("precision {prec} < 3")));
        }
        let cut = q_exp(prec);
        let leech = char_lattice_voa(leech_theta, 24)?.truncate(cut)?;
        let niemeier = char_lattice_voa(niemeier_theta, 24)?.truncate(cut)?;
        let trace = involution_trace(prec)?;
        let twisted = twisted_character(prec)?;

        let mut viable = Vec::new();
        for sign in [1i8, -1] {
            let c = candidate(sign, &leech, &niemeier, &trace, &twisted)?;
            if c.j.coeff_int(0)?.is_zero() {
                viable.push(c);
            }
        }
        if viable.len() > 1 {
            viable.retain(Candidate::triality_consistent);
        }
        if viable.len() != 1 {
            return Err(Error::NoTwistedComponent);
        }
        let c = viable.pop().expect("one candidate");
        Ok(CharacterBundle {
            leech,
            trace,
            twisted,
            twisted_sign: c.sign,
            v00: c.v00,
            v01: c.third.clone(),
            v10: c.third.clone(),
            v11: c.third,
            j: c.j,
        })
    }

    /// All characters from the modular-form theta series.
    pub fn compute(prec: i64) -> Result<Self> {
        Self::from_thetas(&leech_theta_modular(prec + 1)?, &niemeier_theta_modular(prec + 1)?, prec)
    }

    /// The four triality components sum to `J` and are nonnegative integral.
    pub fn triality_holds(&self) -> Result<bool> {
        let total = self.v00.add(&self.v01)?.add(&self.v10)?.add(&self.v11)?;
        Ok(total.agrees_with(&self.j)?
            && [&self.v00, &self.v01, &self.v10, &self.v11].iter().all(|s| s.is_nonnegative_integral()))
    }
}

/// `J = q^{-1} + 196884 q + ...`, valid below `q^prec`.
pub fn assemble_j(prec: i64) -> Result<FracQSeries> {
    Ok(CharacterBundle::compute(prec)?.j)
}

pub fn triality_components(prec: i64) -> Result<CharacterBundle> {
    CharacterBundle::compute(prec)
}

fn check_principal_part(f: &FracQSeries) -> Result<()> {
    if f.denom() != 1 {
        return Err(Error::InvalidSeries("series has fractional exponents".into()));
    }
    if f.valuation() != Some(q_exp(-1)) || f.leading_coefficient() != Some(&Coeff::one()) {
        return Err(Error::InvalidSeries("series must start with q^-1".into()));
    }
    Ok(())
}

/// Coefficients `c_0..c_k` of the Faber polynomial: `sum c_j f^j = q^{-k} + O(q)`.
pub fn faber_polynomial(f: &FracQSeries, k: usize) -> Result<Vec<Coeff>> {
    check_principal_part(f)?;
    let t = f.truncation().map(|t| t.to_integer());
    if t.is_some_and(|t| t < k as i64 + 1) {
        return Err(Error::InsufficientPrecision(format!("Faber polynomial of degree {k} needs precision {}", k + 1)));
    }
    let mut powers = vec![FracQSeries::one()];
    for j in 1..=k {
        powers.push(powers[j - 1].mul(f)?);
    }
    let mut coeffs = vec![Coeff::zero(); k + 1];
    coeffs[k] = Coeff::one();
    let mut acc = powers[k].clone();
    for j in (0..k).rev() {
        let x = acc.coeff_int(-(j as i64))?;
        if !x.is_zero() {
            acc = acc.sub(&powers[j].scale(&x))?;
            coeffs[j] = -x;
        }
    }
    Ok(coeffs)
}

/// `sum_j c_j f^j`.
pub fn evaluate_polynomial(coeffs: &[Coeff], f: &FracQSeries) -> Result<FracQSeries> {
    let mut out = FracQSeries::polynomial(1, std::iter::empty::<(i64, Coeff)>())?;
    let mut power = FracQSeries::one();
    for (j, c) in coeffs.iter().enumerate() {
        if j > 0 {
            power = power.mul(f)?;
        }
        if !c.is_zero() {
            out = out.add(&power.scale(c))?;
        }
    }
    Ok(out)
}

/// The series `T_{g^a}` of the powers of one element.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicableFamily {
    order: u32,
    series: BTreeMap<u32, FracQSeries>,
}

impl ReplicableFamily {
    /// `series[a-1]` is `T_{g^a}`; powers beyond the list repeat with period `order`.
    pub fn new(order: u32, series: Vec<FracQSeries>) -> Result<Self> {
        if order == 0 || series.is_empty() {
            return Err(Error::FamilyInconsistent("family needs a positive order and at least one series".into()));
        }
        let series = series.into_iter().enumerate().map(|(i, s)| (i as u32 + 1, s)).collect();
        Ok(ReplicableFamily { order, series })
    }

    /// `T_{g^a} = f` for every `a`.
    pub fn constant(f: FracQSeries) -> Self {
        ReplicableFamily { order: 1, series: BTreeMap::from([(1, f)]) }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// `T_{g^a}`.
    pub fn get(&self, a: u32) -> Result<&FracQSeries> {
        if let Some(s) = self.series.get(&a) {
            return Ok(s);
        }
        let reduced = (a - 1) % self.order + 1;
        self.series.get(&reduced).ok_or_else(|| Error::FamilyInconsistent(format!("no series for the power {a}")))
    }

    pub fn set(&mut self, a: u32, s: FracQSeries) {
        self.series.insert(a, s);
    }

    /// Header `order kmax denom`, then one series block per power `a`,
    /// blocks separated by blank lines.
    pub fn to_text(&self) -> String {
        let denom = self.series.values().map(FracQSeries::denom).max().unwrap_or(1);
        let mut out = format!("{} {} {}\n", self.order, self.series.len(), denom);
        for s in self.series.values() {
            out.push('\n');
            out.push_str(&s.to_text());
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut blocks = text.split("\n\n").map(str::trim).filter(|b| !b.is_empty());
        let header = blocks.next().ok_or_else(|| Error::Parse("empty family file".into()))?;
        let nums: Vec<i64> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad family header {header:?}"))))
            .collect::<Result<_>>()?;
        let [order, kmax, denom] = nums[..] else {
            return Err(Error::Parse(format!("family header needs 'order kmax denom', got {header:?}")));
        };
        if order <= 0 || kmax <= 0 || denom <= 0 {
            return Err(Error::Parse("family header entries must be positive".into()));
        }
        let series: Vec<FracQSeries> = blocks.map(FracQSeries::from_text).collect::<Result<_>>()?;
        if series.len() != kmax as usize {
            return Err(Error::Parse(format!("expected {kmax} series blocks, found {}", series.len())));
        }
        if let Some(s) = series.iter().find(|s| denom % s.denom() != 0) {
            return Err(Error::Parse(format!("series denominator {} does not divide {denom}", s.denom())));
        }
        ReplicableFamily::new(order as u32, series)
    }
}

/// `sum_{ad = k, 0 <= b < d} T_{g^a}((a tau + b)/d)`, collapsed to
/// `sum_{ad = k} d sum_{d | n} c_n(T_{g^a}) q^{na/d}`.
pub fn hecke_sum(family: &ReplicableFamily, k: u32) -> Result<FracQSeries> {
    if k == 0 {
        return Err(Error::FamilyInconsistent("k must be positive".into()));
    }
    let mut total: Option<FracQSeries> = None;
    for a in (1..=k).filter(|a| k.is_multiple_of(*a)) {
        let d = (k / a) as i64;
        let a_i = a as i64;
        let f = family.get(a)?;
        if f.denom() != 1 {
            return Err(Error::FamilyInconsistent(format!("T_(g^{a}) has fractional exponents")));
        }
        let terms: Vec<(i64, Coeff)> = f
            .terms()
            .filter(|(e, _)| e.to_integer() % d == 0)
            .map(|(e, c)| (e.to_integer() / d * a_i, c * BigInt::from(d)))
            .collect();
        let part = match f.truncation() {
            Some(t) => {
                // the first unknown c_n with d | n sits at n = d ceil(T/d)
                let t = t.to_integer();
                FracQSeries::from_terms(1, a_i * t.div_euclid(d) + a_i * (t.rem_euclid(d) != 0) as i64, terms)?
            }
            None => FracQSeries::polynomial(1, terms)?,
        };
        total = Some(match total {
            Some(acc) => acc.add(&part)?,
            None => part,
        });
    }
    Ok(total.expect("k >= 1 has the divisor 1"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub exponent: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplicabilityVerdict {
    pub check: String,
    pub k: u32,
    pub status: Status,
    pub first_discrepancy: Option<Discrepancy>,
}

/// For each `k <= kmax`: the Hecke-type sum equals the Faber polynomial of
/// `T_g` evaluated at `T_g`, on every coefficient both sides know.
pub fn check_completely_replicable(
    family: &ReplicableFamily,
    kmax: u32,
    prec: i64,
) -> Result<Vec<ReplicabilityVerdict>> {
    if prec < kmax as i64 + 2 {
        return Err(Error::InsufficientPrecision(format!("precision {prec} < kmax + 2 = {}", kmax + 2)));
    }
    let mut cut = family.clone();
    for s in cut.series.values_mut() {
        *s = s.truncate(q_exp(prec))?;
    }
    let tg = cut.get(1)?.clone();
    let mut verdicts = Vec::new();
    for k in 1..=kmax {
        let expected = evaluate_polynomial(&faber_polynomial(&tg, k as usize)?, &tg)?;
        let actual = hecke_sum(&cut, k)?;
        let first_discrepancy = expected.first_difference(&actual)?.map(|(e, x, y)| Discrepancy {
            exponent: e.to_string(),
            expected: format_rational(&x),
            actual: format_rational(&y),
        });
        verdicts.push(ReplicabilityVerdict {
            check: "completely-replicable".into(),
            k,
            status: if first_discrepancy.is_none() { Status::Pass } else { Status::Fail },
            first_discrepancy,
        });
    }
    Ok(verdicts)
}

/// The family `T_g = eta(tau)^24/eta(2 tau)^24 + shift`, `T_{g^2} = J`.
pub fn involution_family(shift: i64, kmax: u32, prec: i64) -> Result<ReplicableFamily> {
    let tg = involution_trace(prec)?.add(&FracQSeries::constant(int(shift)))?;
    let j = assemble_j(prec)?;
    let series = (1..=kmax).map(|a| if a % 2 == 1 { tg.clone() } else { j.clone() }).collect();
    ReplicableFamily::new(2, series)
}

pub fn supersingular_primes() -> [u64; 15] {
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 41, 47, 59, 71]
}

/// Prime factorization of the stated lower bound for the order of the
/// automorphism group of the moonshine module.
pub const ORDER_BOUND: [(u64, u32); 13] =
    [(2, 46), (3, 20), (5, 9), (7, 6), (11, 1), (13, 3), (23, 1), (29, 1), (31, 1), (41, 1), (47, 1), (59, 1), (71, 1)];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderBoundReport {
    pub product: String,
    pub bits: u64,
    /// `(p, v_p)` read back off the product by trial division.
    pub valuations: Vec<(u64, u32)>,
    pub primes_are_supersingular: bool,
    /// Valuations at 2, 3, 5, 7, 13 equal 46, 20, 9, 6, 3.
    pub sylow_valuations_match: bool,
    /// Supersingular primes that do not divide the bound.
    pub missing_supersingular: Vec<u64>,
}

impl OrderBoundReport {
    pub fn holds(&self) -> bool {
        self.primes_are_supersingular && self.sylow_valuations_match
    }
}

pub fn check_order_bound() -> OrderBoundReport {
    let product: BigUint = ORDER_BOUND.iter().map(|&(p, e)| BigUint::from(p).pow(e)).product();
    // trial division of the product over all primes up to 71
    let mut rest = product.clone();
    let mut valuations = Vec::new();
    for p in (2u64..=71).filter(|&p| (2..p).all(|d| p % d != 0)) {
        let v = valuation(&rest, p);
        if v > 0 {
            valuations.push((p, v));
            rest /= BigUint::from(p).pow(v);
        }
    }
    let ss = supersingular_primes();
    let fully_factored = rest.is_one();
    let v = |p: u64| valuations.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e);
    OrderBoundReport {
        bits: product.bits(),
        product: product.to_string(),
        primes_are_supersingular: fully_factored && valuations.iter().all(|(p, _)| ss.contains(p)),
        sylow_valuations_match: [(2, 46), (3, 20), (5, 9), (7, 6), (13, 3)].iter().all(|&(p, e)| v(p) == e),
        missing_supersingular: ss.iter().copied().filter(|&p| v(p) == 0).collect(),
        valuations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &FracQSeries, e: i64) -> Coeff {
        s.coeff_int(e).unwrap()
    }

    #[test]
    fn j_coefficients() {
        let j = assemble_j(4).unwrap();
        assert_eq!(c(&j, -1), int(1));
        assert_eq!(c(&j, 0), int(0));
        assert_eq!(c(&j, 1), int(196884));
        assert_eq!(c(&j, 2), int(21493760));
        assert_eq!(c(&j, 3), int(864299970));
    }

    #[test]
    fn triality_split() {
        let b = triality_components(8).unwrap();
        assert_eq!(b.twisted_sign, 1);
        assert!(b.triality_holds().unwrap());
        assert_eq!(c(&b.v00, -1), int(1));
        assert_eq!(c(&b.v00, 0), int(0));
        assert_eq!(c(&b.v00, 1), int(49428));
        assert_eq!(c(&b.v01, 1), int(49152));
        assert_eq!(b.v01, b.v10);
    }

    #[test]
    fn faber_small_degrees() {
        let j = assemble_j(12).unwrap();
        let f1 = faber_polynomial(&j, 1).unwrap();
        assert_eq!(f1, vec![int(0), int(1)]);
        let f2 = faber_polynomial(&j, 2).unwrap();
        let v = evaluate_polynomial(&f2, &j).unwrap();
        assert_eq!(c(&v, -2), int(1));
        assert_eq!(c(&v, -1), int(0));
        assert_eq!(c(&v, 0), int(0));
        assert!(faber_polynomial(&j.truncate(q_exp(2)).unwrap(), 4).is_err());
    }

    #[test]
    fn hecke_small_cases() {
        let j = assemble_j(12).unwrap();
        let fam = ReplicableFamily::constant(j.clone());
        assert_eq!(hecke_sum(&fam, 1).unwrap(), j);
        let formal = FracQSeries::monomial(q_exp(-1), int(1)).unwrap();
        let h = hecke_sum(&ReplicableFamily::constant(formal), 2).unwrap();
        assert_eq!(h, FracQSeries::monomial(q_exp(-2), int(1)).unwrap());
        let half = FracQSeries::monomial(Ratio::new(1, 2), int(1)).unwrap();
        assert!(matches!(hecke_sum(&ReplicableFamily::constant(half), 2), Err(Error::FamilyInconsistent(_))));
    }

    #[test]
    fn j_is_completely_replicable_and_faults_localize() {
        let j = assemble_j(12).unwrap();
        let fam = ReplicableFamily::constant(j.clone());
        let verdicts = check_completely_replicable(&fam, 6, 12).unwrap();
        assert!(verdicts.iter().all(|v| v.status == Status::Pass), "{verdicts:?}");

        let mut bad = ReplicableFamily::new(1, vec![j.clone(); 6]).unwrap();
        bad.set(2, j.add(&FracQSeries::monomial(q_exp(1), int(1)).unwrap()).unwrap());
        let verdicts = check_completely_replicable(&bad, 6, 12).unwrap();
        assert_eq!(verdicts[0].status, Status::Pass);
        assert_eq!(verdicts[1].status, Status::Fail);
        let d = verdicts[1].first_discrepancy.as_ref().unwrap();
        assert_eq!(d.exponent, "2");
    }

    #[test]
    fn involution_family_needs_the_shift() {
        let shifted = check_completely_replicable(&involution_family(24, 6, 12).unwrap(), 6, 12).unwrap();
        assert!(shifted.iter().all(|v| v.status == Status::Pass), "{shifted:?}");
        let bare = check_completely_replicable(&involution_family(0, 6, 12).unwrap(), 6, 12).unwrap();
        assert!(bare.iter().any(|v| v.status == Status::Fail));
    }

    #[test]
    fn family_text_round_trip() {
        let fam = involution_family(24, 3, 6).unwrap();
        let back = ReplicableFamily::from_text(&fam.to_text()).unwrap();
        assert_eq!(back, fam);
        assert!(ReplicableFamily::from_text("2 3").is_err());
    }

    #[test]
    fn order_bound() {
        let r = check_order_bound();
        assert!(r.holds());
        assert!(r.missing_supersingular.contains(&17));
        assert_eq!(r.missing_supersingular, vec![17, 19]);
        assert_eq!(supersingular_primes().len(), 15);
    }
}
