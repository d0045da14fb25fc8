use std::sync::OnceLock;

use moonshine_core::codes::{golay_code, BinaryCode};
use moonshine_core::fock::{
    apply_mode, basis_monomials, check_commutator_formula, check_skew_symmetry, generator_field, graded_dimension,
    residue_product, Coeff, FieldConfig, FockState,
};
use moonshine_core::group_actions::{scalar_action, ModuleAction, QuaternionUnit};
use moonshine_core::lattice::{niemeier_a1_24, EnumerationBudget, ScaledLattice};
use moonshine_core::moonshine::{
    assemble_j, evaluate_polynomial, faber_polynomial, hecke_sum, involution_trace, twisted_character, CharacterBundle,
    ReplicableFamily,
};
use moonshine_core::qseries::{char_lattice_voa, eta_quotient_int, FracQSeries};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn niemeier() -> &'static ScaledLattice {
    static N: OnceLock<ScaledLattice> = OnceLock::new();
    N.get_or_init(|| niemeier_a1_24(&golay_code()).unwrap())
}

fn j12() -> &'static FracQSeries {
    static J: OnceLock<FracQSeries> = OnceLock::new();
    J.get_or_init(|| assemble_j(12).unwrap())
}

fn rational() -> impl Strategy<Value = Coeff> {
    (-20i64..=20, 1i64..=4).prop_map(|(n, d)| Coeff::new(BigInt::from(n), BigInt::from(d)))
}

/// A series in `q^{1/denom}` starting at `q^{lead/denom}`, truncated a few terms on.
fn series() -> impl Strategy<Value = FracQSeries> {
    (prop::sample::select(vec![1i64, 2, 3]), -3i64..=3, prop::collection::vec(rational(), 1..8), 2i64..=6).prop_map(
        |(denom, lead, coeffs, extra)| {
            let len = coeffs.len() as i64;
            let terms = coeffs.into_iter().enumerate().map(|(i, c)| (lead + i as i64, c));
            FracQSeries::from_terms(denom, lead + len + extra, terms).unwrap()
        },
    )
}

fn lattice_vector(n: &ScaledLattice, ks: &[i64]) -> Vec<i64> {
    let mut v = vec![0i64; n.rank()];
    for (k, b) in ks.iter().zip(n.basis()) {
        v.iter_mut().zip(b).for_each(|(x, y)| *x += k * y);
    }
    v
}

fn scalar(g: QuaternionUnit, v: &[i64]) -> Ratio<i64> {
    match scalar_action(g, niemeier(), v).unwrap() {
        ModuleAction::Scalar(s) => s.exponent(),
        ModuleAction::Negates => panic!("not a torus element"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn code_size_and_double_dual(len in 4usize..=14, words in prop::collection::vec(any::<u64>(), 0..8)) {
        let mask = (1u64 << len) - 1;
        let code = BinaryCode::span(len, words.iter().map(|w| w & mask)).unwrap();
        let words = code.codewords().unwrap();
        prop_assert_eq!(words.len(), 1usize << code.dimension());
        prop_assert!(words.iter().all(|&w| code.contains(w)));
        prop_assert_eq!(code.dual().dual(), code.clone());
        prop_assert_eq!(code.dimension() + code.dual().dimension(), len);
    }

    #[test]
    fn series_ring_axioms(a in series(), b in series(), c in series()) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(ab_c.agrees_with(&a_bc).unwrap());
        prop_assert!(a.mul(&b).unwrap().agrees_with(&b.mul(&a).unwrap()).unwrap());
        let left = a.mul(&b.add(&c).unwrap()).unwrap();
        let right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(left.agrees_with(&right).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
        prop_assert_eq!(FracQSeries::from_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn series_inverse_and_rescale(a in series(), m in 1i64..=3) {
        if let Some(lead) = a.leading_coefficient() {
            prop_assume!(!lead.is_zero());
            let inv = a.invert().unwrap();
            let one = a.mul(&inv).unwrap();
            prop_assert!(one.agrees_with(&FracQSeries::one()).unwrap());
        }
        let b = a.clone().scale(&Coeff::new(BigInt::from(3), BigInt::from(2)));
        let m = Ratio::from_integer(m);
        let lhs = a.mul(&b).unwrap().rescale_q(m).unwrap();
        let rhs = a.rescale_q(m).unwrap().mul(&b.rescale_q(m).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs).unwrap());
    }

    #[test]
    fn eta_quotients_invert(t in 2i64..=30) {
        let eta24 = eta_quotient_int(&[(1, 24)], t).unwrap();
        let inverse = eta_quotient_int(&[(1, -24)], t).unwrap();
        let one = eta24.mul(&inverse).unwrap();
        prop_assert!(one.agrees_with(&FracQSeries::one()).unwrap());
        let quotient = eta_quotient_int(&[(1, 24), (2, -24)], t).unwrap();
        let flipped = eta_quotient_int(&[(2, 24), (1, -24)], t).unwrap();
        prop_assert!(quotient.mul(&flipped).unwrap().agrees_with(&FracQSeries::one()).unwrap());
    }

    #[test]
    fn small_lattice_enumeration_is_symmetric(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 3),
        scale in 1i64..=2,
        bound in 2i64..=8,
    ) {
        let Ok(l) = ScaledLattice::from_generators(scale, &rows) else { return Ok(()) };
        let vs = l.short_vectors(Ratio::from_integer(bound), EnumerationBudget::default()).unwrap();
        for v in &vs {
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            prop_assert!(vs.contains(&neg));
            prop_assert!(l.contains(v));
        }
        if l.is_integral() {
            let theta = l.theta_series(bound / 2, EnumerationBudget::default()).unwrap();
            prop_assert!(theta.coeff_int(0).unwrap().is_one());
            prop_assert!(theta.is_nonnegative_integral());
        }
        if l.is_even() {
            let counts = l.norm_counts(Ratio::from_integer(bound), EnumerationBudget::default()).unwrap();
            prop_assert!(counts.by_sq.iter().all(|(&sq, &c)| sq == 0 || c % 2 == 0));
        }
    }

    #[test]
    fn bracket_on_random_states(
        modes in prop::collection::vec((0usize..2, 1i64..=3), 0..4),
        i in 0usize..2, j in 0usize..2, m in -4i64..=4, n in -4i64..=4,
    ) {
        let s = FockState::from_modes(2, &modes.iter().map(|&(c, k)| (c, -k)).collect::<Vec<_>>())
            .add(&FockState::vacuum(2).scale(&Coeff::new(BigInt::from(2), BigInt::from(3))));
        let lhs = apply_mode(i, m, &apply_mode(j, n, &s)).sub(&apply_mode(j, n, &apply_mode(i, m, &s)));
        let central = if i == j && m == -n { m } else { 0 };
        prop_assert_eq!(lhs, s.scale(&Coeff::from_integer(central.into())));
    }

    #[test]
    fn scalar_action_is_a_homomorphism(
        a in prop::collection::vec(-2i64..=2, 24),
        b in prop::collection::vec(-2i64..=2, 24),
    ) {
        let n = niemeier();
        let (u, v) = (lattice_vector(n, &a), lattice_vector(n, &b));
        let sum: Vec<i64> = u.iter().zip(&v).map(|(x, y)| x + y).collect();
        for g in [QuaternionUnit::I, QuaternionUnit::MinusOne] {
            let lhs = scalar(g, &sum);
            let rhs = scalar(g, &u) + scalar(g, &v);
            prop_assert_eq!(lhs, rhs - rhs.floor());
        }
        let twice = scalar(QuaternionUnit::I, &u) * 2;
        prop_assert_eq!(twice - twice.floor(), scalar(QuaternionUnit::MinusOne, &u));
    }

    #[test]
    fn faber_polynomial_cancels_the_principal_part(k in 1usize..=8) {
        let j = j12();
        let f = evaluate_polynomial(&faber_polynomial(j, k).unwrap(), j).unwrap();
        prop_assert!(f.coeff_int(-(k as i64)).unwrap().is_one());
        for e in -(k as i64) + 1..=0 {
            prop_assert!(f.coeff_int(e).unwrap().is_zero());
        }
    }

    #[test]
    fn hecke_minus_faber_has_no_polar_part(k in 1u32..=6) {
        let j = j12();
        let fam = ReplicableFamily::constant(j.clone());
        let diff = hecke_sum(&fam, k).unwrap().sub(&evaluate_polynomial(&faber_polynomial(j, k as usize).unwrap(), j).unwrap()).unwrap();
        prop_assert!(diff.terms().all(|(e, _)| e > Ratio::from_integer(0)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn commutator_formula_for_generator_states(
        u in prop::collection::vec((0usize..2, 1i64..=2), 1..=2),
        v in prop::collection::vec((0usize..2, 1i64..=2), 1..=2),
        s in prop::collection::vec((0usize..2, 1i64..=2), 0..=2),
        p in -2i64..=2, q in -2i64..=2,
    ) {
        let config = FieldConfig { rank: 2, window: (-16, 16), cutoff: 20 };
        let state = |m: &[(usize, i64)]| FockState::from_modes(2, &m.iter().map(|&(c, k)| (c, -k)).collect::<Vec<_>>());
        prop_assert!(check_commutator_formula(&state(&u), &state(&v), p, q, &state(&s), &config).unwrap());
    }

    #[test]
    fn skew_symmetry_at_low_degree(
        u in prop::collection::vec((0usize..2, 1i64..=2), 0..=2),
        v in prop::collection::vec((0usize..2, 1i64..=2), 0..=2),
    ) {
        let config = FieldConfig { rank: 2, window: (-16, 16), cutoff: 20 };
        let state = |m: &[(usize, i64)]| FockState::from_modes(2, &m.iter().map(|&(c, k)| (c, -k)).collect::<Vec<_>>());
        let (u, v) = (state(&u), state(&v));
        prop_assume!(u.degree().unwrap() <= 3 && v.degree().unwrap() <= 3);
        prop_assert!(check_skew_symmetry(&u, &v, -3, &config).unwrap());
    }
}

#[test]
fn basis_size_matches_graded_dimension_series() {
    for d in 1..=3 {
        let series = eta_quotient_int(&[(1, -(d as i64))], 8).unwrap();
        for n in 0..=7usize {
            let dim = graded_dimension(d, n);
            assert_eq!(basis_monomials(d, n as i64).len(), usize::try_from(dim.clone()).unwrap());
            // eta^-d = q^{-d/24} prod (1-q^k)^-d
            let c = series.coeff(Ratio::new(-(d as i64), 24) + n as i64).unwrap();
            assert_eq!(c, Coeff::from_integer(BigInt::from(dim)));
        }
    }
}

#[test]
fn generator_pairs_are_local_of_order_two() {
    let config = FieldConfig { rank: 2, window: (-10, 10), cutoff: 12 };
    let g = [generator_field(0, &config), generator_field(1, &config)];
    for a in &g {
        for b in &g {
            let order = moonshine_core::fock::locality_order(a, b, 3, 3).unwrap().unwrap();
            assert!(order <= 2);
            for n in 2..=3 {
                let prod = residue_product(a, b, n);
                for s in moonshine_core::fock::basis_up_to(2, 3) {
                    for k in -3..=3 {
                        assert!(prod.mode(k, &s).unwrap().is_zero());
                    }
                }
            }
        }
    }
}

#[test]
fn niemeier_is_self_dual() {
    let n = niemeier();
    assert!(n.dual().same_points(n));
    assert!(n.determinant().is_one());
}

#[test]
fn j_is_the_same_from_an_enumerated_theta() {
    let leech = moonshine_core::lattice::leech_lattice(&golay_code()).unwrap();
    let theta = leech.theta_series(2, EnumerationBudget::default()).unwrap();
    let prec = 2;
    let bundle = CharacterBundle::compute(4).unwrap();
    let half = Coeff::new(BigInt::from(1), BigInt::from(2));
    let rebuilt = char_lattice_voa(&theta, 24)
        .unwrap()
        .add(&involution_trace(prec).unwrap())
        .unwrap()
        .scale(&half)
        .add(&twisted_character(prec).unwrap().integral_part().scale_int(bundle.twisted_sign as i64))
        .unwrap();
    assert!(rebuilt.agrees_with(&bundle.j).unwrap());
    assert_eq!(rebuilt.truncation(), Some(Ratio::from_integer(prec)));
    assert_eq!(rebuilt.coeff_int(1).unwrap(), Coeff::from_integer(196884.into()));
}
