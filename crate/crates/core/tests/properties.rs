//! Property tests of the module invariants.

mod common;

use proptest::prelude::*;
use summability::bounds::{
    aggregate_bounds, cotipon_lower, scalar_coincidence_s, even_real_lower, exact_index_c0, exact_index_scalar,
    mps_lower, mult_upper_from_coincidence, pol_exact_q1, pol_upper_from_coincidence,
    CoincidencePair, Direction, Field, IndexQuery, PolExactTarget, SpaceDescriptor, SpaceKind,
};
use summability::experiments::{fit_points, run_ratio_experiment, unit_vector_probe, preset};
use summability::io::CotypeTable;
use summability::numerics::{
    build_coordinate_operator, build_ksz_form, coordinate_operator_outputs, decode_form,
    diagonal_polynomial, encode_form, mixed_power_sum, operator_norm_ascent,
    operator_norm_bruteforce, pol_quotient, weak_q_norm, AscentOptions, MultilinearForm,
    VectorFamily,
};
use summability::Exponent;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        Just(Exponent::ONE),
        Just(Exponent::TWO),
        Just(Exponent::INFINITY),
        (1.0..6.0f64).prop_map(|e| Exponent::new(e).unwrap()),
    ]
}

fn matrix(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, len)
}

fn family(max_count: usize, max_dim: usize) -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (1..=max_count, 1..=max_dim).prop_flat_map(|(c, d)| (Just(c), Just(d), matrix(c * d)))
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn mult_branch_a_decreases_in_p_and_increases_in_q(
        m in 1u32..6, t in 1.0..6.0f64, s in 1.0..4.0f64, fp in 0.2..0.9f64, fq in 1.1..3.0f64,
    ) {
        // Inside branch (a) the value is m/p - m/t + m/s - m/q.
        let pair = CoincidencePair::new(t, s).unwrap();
        let (p, q) = (t * fp, s * fq);
        let h = 1e-6;
        let v = |p, q| mult_upper_from_coincidence(m, p, q, pair).unwrap();
        prop_assert!(v(p, q).region.starts_with("(a)"));
        prop_assert!(v(p + h, q).value < v(p, q).value);
        prop_assert!(v(p, q + h).value > v(p, q).value);
    }

    #[test]
    fn coincidence_branches_agree_on_boundaries(
        m in 1u32..6, t in 0.5..6.0f64, s in 1.0..6.0f64, x in 0.3..8.0f64,
    ) {
        let pair = CoincidencePair::new(t, s).unwrap();
        let q = s.max(1.0) * x.max(1.0);
        let mult = |p, q| mult_upper_from_coincidence(m, p, q, pair).unwrap().value;
        let pol = |p, q| pol_upper_from_coincidence(m, p, q, pair).unwrap().value;
        // At p = t the p-side vanishes and at q = s the q-side vanishes, so
        // every branch pair meeting there evaluates to the same number.
        let mf = m as f64;
        prop_assert!((mult(t, q) - (mf / s - mf / q).max(0.0)).abs() <= 1e-12);
        prop_assert!((mult(x, s) - (mf / x - mf / t).max(0.0)).abs() <= 1e-12);
        let a = pol(t, q);
        let b = pol(t * (1.0 + 1e-12), q);
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn exact_values_sit_between_applicable_bounds(
        m in 1u32..6, p in 0.3..8.0f64, q in 1.0..8.0f64, r in 2.0..10.0f64,
    ) {
        let tol = 1e-12;
        // Multilinear exact values against the coincidence upper bound they
        // are derived from; the polynomial lower bounds need an
        // infinite-dimensional codomain and are checked below.
        if let Ok(e) = exact_index_scalar(m, p, q) {
            prop_assert!(e.value >= -tol);
            if e.region.starts_with("(a)") {
                let pair = CoincidencePair::new(p, scalar_coincidence_s(m, p).unwrap()).unwrap();
                let u = mult_upper_from_coincidence(m, p, q, pair).unwrap();
                prop_assert!(u.value >= e.value - tol);
            }
        }
        if let Ok(e) = exact_index_c0(m, p, q) {
            prop_assert!((e.value - m as f64 / p).abs() <= tol);
        }
        if let Ok(e) = pol_exact_q1(m, p, PolExactTarget::Cotype(r)) {
            if let Ok(l) = cotipon_lower(m, p, 1.0, r) { prop_assert!(l.value <= e.value + tol); }
            if let Ok(l) = mps_lower(m, p, 1.0, r) { prop_assert!(l.value <= e.value + tol); }
            let u = pol_upper_from_coincidence(m, p, 1.0, CoincidencePair::new(r, 1.0).unwrap())
                .unwrap();
            prop_assert!(u.value >= e.value - tol);
        }
        if let Ok(e) = pol_exact_q1(m, p, PolExactTarget::RealScalarEven) {
            if let Ok(l) = even_real_lower(m, p, 1.0, Field::Real) {
                prop_assert!(l.value <= e.value + tol);
            }
        }
    }

    #[test]
    fn aggregate_values_are_nonnegative_and_ordered(
        m in 1u32..6, p in 0.3..8.0f64, q in 1.0..8.0f64, pol in any::<bool>(),
        domain_pick in 0usize..3, codomain_pick in 0usize..3, cotype in 2.0..8.0f64,
    ) {
        let table = CotypeTable::builtin();
        let q_star = Exponent::new(q).unwrap().conjugate();
        let domain = match domain_pick {
            0 => table.descriptor(SpaceKind::SequenceSpace(q_star)).unwrap(),
            1 => SpaceDescriptor::c0(),
            _ => table.descriptor(SpaceKind::SequenceSpace(Exponent::new(cotype).unwrap())).unwrap(),
        };
        let codomain = match codomain_pick {
            0 => SpaceDescriptor::scalar(),
            1 => SpaceDescriptor::c0(),
            _ => SpaceDescriptor::new(SpaceKind::Abstract, Exponent::new(cotype).unwrap()).unwrap(),
        };
        let query = if pol {
            IndexQuery::polynomial(m, p, q, domain, codomain).unwrap()
        } else {
            IndexQuery::multilinear(m, p, q, domain, codomain).unwrap()
        };
        let agg = aggregate_bounds(&query).unwrap();
        for b in [&agg.exact, &agg.upper].into_iter().flatten() {
            prop_assert!(b.value >= 0.0, "{b:?}");
        }
        let tol = 1e-12;
        if let (Some(l), Some(u)) = (&agg.lower, &agg.upper) { prop_assert!(l.value <= u.value + tol); }
        if let (Some(l), Some(e)) = (&agg.lower, &agg.exact) { prop_assert!(l.value <= e.value + tol); }
        if let (Some(e), Some(u)) = (&agg.exact, &agg.upper) { prop_assert!(e.value <= u.value + tol); }
        for b in &agg.applied {
            match b.direction {
                Direction::Upper => prop_assert!(agg.upper.as_ref().unwrap().value <= b.value + tol),
                Direction::Lower => prop_assert!(agg.lower.as_ref().unwrap().value >= b.value - tol),
                Direction::Exact => {}
            }
        }
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ascent_never_exceeds_exact_bruteforce(
        n in 2usize..5, coeffs in matrix(16), x in exponent(), y in exponent(), seed in 0u64..1000,
    ) {
        let extreme = |e: Exponent| e == Exponent::ONE || e == Exponent::INFINITY || e == Exponent::TWO;
        prop_assume!(extreme(x) && extreme(y));
        let form = MultilinearForm::dense(2, n, coeffs[..n * n].to_vec())
            .unwrap()
            .with_exponents(vec![x, y])
            .unwrap();
        let brute = operator_norm_bruteforce(&form, 64).unwrap();
        prop_assume!(brute.is_exact());
        let opts = AscentOptions { restarts: 4, seed, ..AscentOptions::default() };
        let ascent = operator_norm_ascent(&form, &opts).unwrap();
        prop_assert!(ascent.value <= brute.value + 1e-9);
    }

    #[test]
    fn forms_are_linear_in_each_slot(
        m in 1usize..4, n in 1usize..4, coeffs in matrix(27), xs in matrix(12), y in matrix(4),
        slot in 0usize..3, a in -3.0..3.0f64, b in -3.0..3.0f64,
    ) {
        let slot = slot % m;
        let form = MultilinearForm::dense(m, n, coeffs[..n.pow(m as u32)].to_vec()).unwrap();
        let vecs: Vec<&[f64]> = (0..m).map(|i| &xs[i * n..(i + 1) * n]).collect();
        let y = &y[..n];
        let eval = |v: &[f64]| {
            let mut inputs = vecs.clone();
            inputs[slot] = v;
            form.evaluate(&inputs).unwrap()
        };
        let combo: Vec<f64> = vecs[slot].iter().zip(y).map(|(u, v)| a * u + b * v).collect();
        let lhs = eval(&combo);
        let rhs = a * eval(vecs[slot]) + b * eval(y);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs().max(rhs.abs())));
    }

    #[test]
    fn weak_norms_match_singular_values_at_q2((count, dim, rows) in family(5, 5)) {
        let fam = VectorFamily::from_rows(&rows, count, dim, Exponent::TWO).unwrap();
        let weak = weak_q_norm(&fam, 2.0).unwrap().value;
        let oracle = common::jacobi_spectral_norm(&rows, count, dim);
        prop_assert!((weak - oracle).abs() <= 1e-9 * oracle.max(1.0));
    }

    #[test]
    fn weak_norms_do_not_increase_with_q(
        (count, dim, rows) in family(6, 6), one in any::<bool>(),
    ) {
        let ambient = if one { Exponent::ONE } else { Exponent::INFINITY };
        let fam = VectorFamily::from_rows(&rows, count, dim, ambient).unwrap();
        let values: Vec<f64> = [1.0, 1.5, 2.0, 3.0]
            .iter()
            .map(|&q| weak_q_norm(&fam, q).unwrap().value)
            .collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12), "{values:?}");
        }
    }

    #[test]
    fn coordinate_outputs_are_products_of_sup_norms(
        m in 1usize..4, n in 1usize..5, count in 1usize..4, data in matrix(3 * 3 * 4),
    ) {
        let families: Vec<VectorFamily> = (0..m)
            .map(|i| {
                let rows = &data[i * count * n..(i + 1) * count * n];
                VectorFamily::from_rows(rows, count, n, Exponent::INFINITY).unwrap()
            })
            .collect();
        let outputs = coordinate_operator_outputs(m, n, &families).unwrap();
        let form = build_coordinate_operator(m, n).unwrap();
        for (flat, out) in outputs.iter().enumerate() {
            let mut rest = flat;
            let mut bound = 1.0;
            let mut inputs = Vec::new();
            for i in (0..m).rev() {
                let k = rest % count;
                rest /= count;
                let v = families[i].vector(k);
                bound *= v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
                inputs.push(v);
            }
            inputs.reverse();
            prop_assert!(*out <= bound * (1.0 + 1e-12));
            prop_assert!((form.output_norm(&inputs).unwrap() - out).abs() <= 1e-12);
        }
    }

    #[test]
    fn probe_and_quotients_are_scale_invariant(
        m in 1usize..4, n in 1usize..5, seed in 0u64..100, c in 0.1..10.0f64, p in 1.0..4.0f64,
    ) {
        let form = build_ksz_form(m, n, seed).unwrap();
        let norm = 1.7;
        let base = unit_vector_probe(&form, p, norm).unwrap();
        let numerator = (n as f64).powf(m as f64 / p);
        prop_assert!((base * norm - numerator).abs() <= 1e-9 * numerator);
        let scaled = unit_vector_probe(&form.scaled(c).unwrap(), p, c * norm).unwrap();
        prop_assert!((scaled - base).abs() <= 1e-12 * base);

        let poly = diagonal_polynomial(m, n).unwrap();
        let fam = VectorFamily::unit_basis(n, Exponent::TWO).unwrap();
        let opts = AscentOptions::default();
        let a = pol_quotient(&poly, &fam, p, 2.0, m, &opts).unwrap().value;
        let b = pol_quotient(&poly, &fam.scaled(c), p, 2.0, m, &opts).unwrap().value;
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn slopes_are_recovered_from_power_laws(
        slope in -3.0..3.0f64, log_c in -5.0..5.0f64, k in 3usize..9,
    ) {
        let xs: Vec<f64> = (1..=k).map(|i| (1u64 << i) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| log_c.exp() * x.powf(slope)).collect();
        let fit = fit_points(&xs, &ys).unwrap();
        prop_assert!((fit.slope - slope).abs() <= 1e-12);
        prop_assert!((fit.intercept - log_c).abs() <= 1e-11);
        prop_assert!(fit.residual_rms.is_finite());
        let points: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        prop_assert!((common::loglog_slope(&points) - slope).abs() <= 1e-10);
    }

    #[test]
    fn forms_round_trip_bit_exactly(
        m in 1usize..4, n in 1usize..5, seed in any::<u64>(), e in exponent(),
    ) {
        let form = build_ksz_form(m, n, seed).unwrap().with_exponent(e);
        let bytes = encode_form(&form);
        let back = decode_form(&bytes).unwrap();
        prop_assert_eq!(&back, &form);
        prop_assert_eq!(encode_form(&back), bytes);
    }
}

#[test]
fn reported_ratios_recompute_from_their_parts() {
    for name in ["ksz-m2", "diagonal-m2", "coordinate-c0-m2", "coordinate-c0-m3"] {
        let mut config = preset(name).unwrap().config;
        config.n_grid = vec![2, 4, 8];
        for series in run_ratio_experiment(&config).unwrap() {
            for pt in &series.points {
                let r = pt.mixed_sum / (pt.norm_estimate * pt.weak_norm_product);
                assert!((r - pt.ratio).abs() <= 1e-12 * r, "{name} n={}", pt.n);
                assert!(pt.mixed_sum > 0.0 && pt.norm_estimate > 0.0 && pt.weak_norm_product > 0.0);
            }
        }
    }
}

#[test]
fn unit_basis_mixed_sums_match_hand_counts() {
    // KSZ: every |coefficient| is 1, so the sum over n^m tuples is n^{m/p}.
    let (m, n, p) = (2, 6, 2.0);
    let form = build_ksz_form(m, n, 3).unwrap();
    let basis = VectorFamily::unit_basis(n, Exponent::TWO).unwrap();
    let sum = mixed_power_sum(&form, &vec![basis; m], p).unwrap();
    assert!((sum - (n as f64).powf(m as f64 / p)).abs() <= 1e-12 * sum);
}
