//! Acceptance gate: every criterion runs at its stated tolerance and time
//! limit and prints one PASS/FAIL line. The test fails if any criterion does.

mod common;

use std::time::{Duration, Instant};

use rand::Rng;
use summability::bounds::{
    aggregate_bounds, cornbd_upper, cotipon_lower, cotype_coincidence_t, exact_index_scalar,
    mult_upper_from_coincidence, pol_exact_q1, pol_upper_from_coincidence, scalar_coincidence_s,
    CoincidencePair, Direction, Field, IndexQuery, PolExactTarget, SpaceDescriptor, SpaceKind,
};
use summability::experiments::{
    fit_exponent, median, preset, run_ratio_experiment, ExperimentConfig, NormMethod,
};
use summability::io::CotypeTable;
use summability::numerics::norm::ascent_from;
use summability::numerics::{
    operator_norm_ascent, rademacher_cotype_quotient, rademacher_cotype_quotient_mc,
    spectral_norm, weak_q_norm, AscentOptions, MultilinearForm, VectorFamily,
};
use summability::parallel::Execution;
use summability::Exponent;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn run(number: usize, name: &str, limit: Duration, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let Outcome { pass, detail } = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let ok = pass && in_time;
    println!(
        "[{}] criterion {number} {name}: {detail}; {:.2?} (limit {:?}){}",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        limit,
        if in_time { "" } else { " TIME LIMIT EXCEEDED" }
    );
    ok
}

fn slopes(config: &ExperimentConfig) -> Vec<f64> {
    run_ratio_experiment(config)
        .unwrap()
        .iter()
        .map(|s| fit_exponent(s).unwrap().slope)
        .collect()
}

fn coordinate_operator() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for (name, expected) in [("coordinate-c0-m2", 1.0), ("coordinate-c0-m3", 1.5)] {
        let config = preset(name).unwrap().config;
        assert_eq!(config.n_grid, vec![2, 4, 8, 16, 32, 64]);
        assert_eq!(config.norm_method, NormMethod::Analytic);
        let s = slopes(&config)[0];
        pass &= (s - expected).abs() <= 1e-9;
        details.push(format!("{name} slope {s:.15} (want {expected})"));
    }
    outcome(pass, details.join(", "))
}

fn diagonal_form() -> Outcome {
    let mut config = preset("diagonal-m2").unwrap().config;
    assert_eq!((config.m, config.p, config.q), (2, 4.0, 2.0));
    let analytic = slopes(&config)[0];
    config.norm_method = NormMethod::Ascent;
    let ascent = slopes(&config)[0];
    let pass = (analytic - 0.25).abs() <= 1e-9 && (ascent - 0.25).abs() <= 0.05;
    outcome(
        pass,
        format!("analytic slope {analytic:.15}, ascent slope {ascent:.15} (want 0.25)"),
    )
}

fn ksz_forms() -> Outcome {
    let config = preset("ksz-m2").unwrap().config;
    assert_eq!(config.seeds.len(), 5);
    assert_eq!(config.ascent.restarts, 16);
    assert_eq!(config.norm_method, NormMethod::Ascent);
    let s = slopes(&config);
    let med = median(&s).unwrap();
    let shown: Vec<String> = s.iter().map(|x| format!("{x:.3}")).collect();
    outcome(
        (med - 0.5).abs() <= 0.15,
        format!(
            "median slope {med:.4} over seeds {:?}, per seed [{}] (want 0.5 +- 0.15)",
            config.seeds,
            shown.join(", ")
        ),
    )
}

fn branch_letter(region: &str) -> &str {
    &region[..3]
}

fn formula_identities() -> Outcome {
    let mut rng = common::rng(4);
    let mut failures = Vec::new();
    let mut branches = std::collections::BTreeSet::new();
    let tuples = 1000;

    // (i) cornbd_upper against the composition, all four branches.
    let mut done = 0;
    while done < tuples {
        let m = rng.random_range(1..=4u32);
        let r = rng.random_range(2.0..8.0);
        let s = if rng.random_bool(0.3) { 1.0 } else { rng.random_range(1.0..2.0) };
        let Ok(t) = cotype_coincidence_t(m, r, s) else { continue };
        let p = t * rng.random_range(0.3..3.0);
        let q = (s * rng.random_range(0.5..2.0)).max(1.0);
        let a = cornbd_upper(m, r, p, q, Some(s)).unwrap();
        let b = mult_upper_from_coincidence(m, p, q, CoincidencePair::new(t, s).unwrap()).unwrap();
        // On a branch boundary both adjacent branches apply with equal
        // values, so the label is only compared away from p = t and q = s.
        let on_boundary = (p - t).abs() <= 1e-9 * t || (q - s).abs() <= 1e-9 * s;
        if !on_boundary {
            branches.insert(branch_letter(&a.region).to_string());
        }
        if (a.value - b.value).abs() > 1e-12 * a.value.abs().max(1.0)
            || (!on_boundary && branch_letter(&a.region) != branch_letter(&b.region))
        {
            failures.push(format!("(i) m={m} r={r} s={s} p={p} q={q}: {a:?} vs {b:?}"));
        }
        done += 1;
    }
    let all_branches = branches.len() == 4;

    // (ii) exact (a) against the scalar coincidence at t = p, branch (a).
    for _ in 0..tuples {
        let m = rng.random_range(1..=6u32);
        let mf = m as f64;
        let p = rng.random_range(2.0 * mf / (mf + 1.0)..=2.0);
        let q_low = 2.0 * mf * p / (mf * p + 2.0 * mf - p);
        let q = rng.random_range(q_low..=2.0);
        let e = exact_index_scalar(m, p, q).unwrap();
        let s = scalar_coincidence_s(m, p).unwrap();
        let u = mult_upper_from_coincidence(m, p, q, CoincidencePair::new(p, s).unwrap()).unwrap();
        let direct = mf / p + mf / 2.0 - 0.5 - mf / q;
        if !e.region.starts_with("(a)")
            || !u.region.starts_with("(a)")
            || (e.value - u.value).abs() > 1e-12
            || (e.value - direct).abs() > 1e-12
        {
            failures.push(format!("(ii) m={m} p={p} q={q}: {e:?} vs {u:?}"));
        }
    }

    // (iii) q = 1 exact value against the coincidence upper bound and the
    // cotype lower bound on their shared region.
    for _ in 0..tuples {
        let m = rng.random_range(1..=6u32);
        let mf = m as f64;
        let r = rng.random_range(2.0..10.0);
        let low = 2.0 * r / (mf * r + 2.0);
        let p = low + (r - low) * rng.random_range(0.001..0.999);
        let e = pol_exact_q1(m, p, PolExactTarget::Cotype(r)).unwrap();
        let u = pol_upper_from_coincidence(m, p, 1.0, CoincidencePair::new(r, 1.0).unwrap())
            .unwrap();
        let l = cotipon_lower(m, p, 1.0, r).unwrap();
        let direct = 1.0 / p - 1.0 / r;
        if (e.value - u.value).abs() > 1e-12
            || (e.value - l.value).abs() > 1e-12
            || (e.value - direct).abs() > 1e-12
        {
            failures.push(format!("(iii) m={m} r={r} p={p}: {e:?} {u:?} {l:?}"));
        }
    }
    outcome(
        failures.is_empty() && all_branches,
        format!(
            "{} tuples per identity, cornbd branches hit {:?}, {} mismatches{}",
            tuples,
            branches,
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

fn norm_oracles() -> Outcome {
    let mut rng = common::rng(5);
    let mut worst_ascent = 0.0_f64;
    let mut worst_weak = 0.0_f64;
    let opts = AscentOptions::default();
    for k in 0..20 {
        let n = rng.random_range(2..=5usize);
        let a = common::uniform_matrix(&mut rng, n, n);
        let base = MultilinearForm::dense(2, n, a.clone()).unwrap();

        let l2 = operator_norm_ascent(&base, &opts).unwrap().value;
        let oracle = common::jacobi_spectral_norm(&a, n, n);
        worst_ascent = worst_ascent.max((l2 - oracle).abs() / oracle);

        let (x_one, y_one) = [(true, true), (true, false), (false, true), (false, false)][k % 4];
        let e = |one: bool| if one { Exponent::ONE } else { Exponent::INFINITY };
        let form = base.clone().with_exponents(vec![e(x_one), e(y_one)]).unwrap();
        let ascent = operator_norm_ascent(&form, &opts).unwrap().value;
        let oracle = common::bilinear_extreme_norm(&a, n, x_one, y_one);
        worst_ascent = worst_ascent.max((ascent - oracle).abs() / oracle);

        let count = rng.random_range(1..=6usize);
        let rows = common::uniform_matrix(&mut rng, count, n);
        let family = VectorFamily::from_rows(&rows, count, n, Exponent::TWO).unwrap();
        let weak = weak_q_norm(&family, 2.0).unwrap().value;
        let oracle = common::jacobi_spectral_norm(&rows, count, n);
        worst_weak = worst_weak.max((weak - oracle).abs() / oracle.max(1.0));
        // The library's own singular-value routine against the same oracle.
        worst_weak = worst_weak.max((spectral_norm(&rows, count, n) - oracle).abs());
    }
    outcome(
        worst_ascent <= 1e-6 && worst_weak <= 1e-9,
        format!(
            "20 forms, worst ascent relative error {worst_ascent:.2e} (limit 1e-6), worst weak-norm error {worst_weak:.2e} (limit 1e-9)"
        ),
    )
}

fn rademacher() -> Outcome {
    let mut rng = common::rng(6);
    let mut worst_exact = 0.0_f64;
    let mut worst_mc = 0.0_f64;
    for count in 1..=12 {
        let dim = rng.random_range(count..=count + 3);
        let vectors = common::orthonormal_family(&mut rng, count, dim);
        let family = VectorFamily::new(vectors, Exponent::TWO).unwrap();
        let exact = rademacher_cotype_quotient(&family, Exponent::TWO).unwrap();
        worst_exact = worst_exact.max((exact - 1.0).abs());
        let mc = rademacher_cotype_quotient_mc(&family, Exponent::TWO, 100_000, count as u64)
            .unwrap();
        worst_mc = worst_mc.max((mc - exact).abs());
    }
    outcome(
        worst_exact <= 1e-12 && worst_mc <= 1e-2,
        format!(
            "n = 1..12, worst |exact - 1| {worst_exact:.2e} (limit 1e-12), worst |mc - exact| {worst_mc:.2e} (limit 1e-2)"
        ),
    )
}

fn properties() -> Outcome {
    let mut rng = common::rng(7);
    let mut failures: Vec<String> = Vec::new();
    let mut checks = 0usize;
    let mut check = |ok: bool, what: String| {
        checks += 1;
        if !ok {
            failures.push(what);
        }
    };

    // Branch continuity across p = t and q = s.
    for _ in 0..500 {
        let m = rng.random_range(1..=5u32);
        let t = rng.random_range(0.5..6.0);
        let s = rng.random_range(1.0..6.0);
        let pair = CoincidencePair::new(t, s).unwrap();
        let q = rng.random_range(1.0..8.0);
        let p = rng.random_range(0.3..8.0);
        let h = 1e-7;
        let f = |p: f64, q: f64| mult_upper_from_coincidence(m, p, q, pair).unwrap().value;
        let g = |p: f64, q: f64| pol_upper_from_coincidence(m, p, q, pair).unwrap().value;
        for (a, b) in [(f(t - h, q), f(t + h, q)), (f(p, s - h), f(p, s + h))] {
            check((a - b).abs() < 1e-4, format!("mult continuity m={m} t={t} s={s}: {a} {b}"));
        }
        if s - h >= 1.0 {
            for (a, b) in [(g(t - h, q), g(t + h, q)), (g(p, s - h), g(p, s + h))] {
                check((a - b).abs() < 1e-4, format!("pol continuity m={m} t={t} s={s}: {a} {b}"));
            }
        }
    }

    // lower <= exact <= upper over random queries.
    let table = CotypeTable::builtin();
    for _ in 0..500 {
        let m = rng.random_range(1..=5u32);
        let p = rng.random_range(0.3..6.0);
        let q = if rng.random_bool(0.2) { 1.0 } else { rng.random_range(1.0..6.0) };
        let q_star = Exponent::new(q).unwrap().conjugate();
        let domain = match rng.random_range(0..3) {
            0 => table.descriptor(SpaceKind::SequenceSpace(q_star)).unwrap(),
            1 => table
                .descriptor(SpaceKind::SequenceSpace(Exponent::new(rng.random_range(1.0..6.0)).unwrap()))
                .unwrap(),
            _ => SpaceDescriptor::c0(),
        };
        let codomain = match rng.random_range(0..3) {
            0 => SpaceDescriptor::scalar(),
            1 => SpaceDescriptor::c0(),
            _ => SpaceDescriptor::new(
                SpaceKind::Abstract,
                Exponent::new(rng.random_range(2.0..8.0)).unwrap(),
            )
            .unwrap(),
        };
        let query = if rng.random_bool(0.5) {
            IndexQuery::multilinear(m, p, q, domain, codomain).unwrap()
        } else {
            let field = if rng.random_bool(0.5) { Field::Real } else { Field::Complex };
            IndexQuery::polynomial(m, p, q, domain, codomain).unwrap().with_field(field)
        };
        match aggregate_bounds(&query) {
            Ok(agg) => {
                let lo = agg.lower.as_ref().map(|b| b.value);
                let up = agg.upper.as_ref().map(|b| b.value);
                let ex = agg.exact.as_ref().map(|b| b.value);
                let tol = 1e-12;
                let le = |a: Option<f64>, b: Option<f64>| match (a, b) {
                    (Some(a), Some(b)) => a <= b + tol * b.abs().max(1.0),
                    _ => true,
                };
                let lower_bounds_ok = agg
                    .applied
                    .iter()
                    .filter(|b| b.direction == Direction::Lower)
                    .all(|b| le(Some(b.value), up));
                check(
                    le(lo, ex) && le(ex, up) && le(lo, up) && lower_bounds_ok,
                    format!("ordering {query:?}: {lo:?} {ex:?} {up:?}"),
                );
            }
            Err(e) => check(false, format!("aggregate {query:?}: {e}")),
        }
    }

    // Ascent never decreases, from arbitrary starts.
    for _ in 0..100 {
        let m = rng.random_range(2..=3usize);
        let n = rng.random_range(2..=5usize);
        let coeffs = common::uniform_matrix(&mut rng, n.pow(m as u32), 1);
        let e = [1.0, 1.5, 2.0, 3.0, f64::INFINITY][rng.random_range(0..5)];
        let form = MultilinearForm::dense(m, n, coeffs)
            .unwrap()
            .with_exponent(Exponent::new(e).unwrap());
        let start: Vec<Vec<f64>> = (0..m)
            .map(|_| {
                let v = common::uniform_matrix(&mut rng, n, 1);
                let norm = Exponent::new(e).unwrap().norm(&v);
                v.into_iter().map(|x| x / norm).collect()
            })
            .collect();
        let run = ascent_from(&form, start, 1e-12, 200).unwrap();
        let monotone = run
            .history
            .windows(2)
            .all(|w| w[1] >= w[0] - 1e-12 * w[0].max(1.0));
        check(monotone, format!("ascent history {:?}", run.history));
    }

    // Linearity in every slot.
    for _ in 0..200 {
        let m = rng.random_range(1..=3usize);
        let n = rng.random_range(1..=4usize);
        let form = MultilinearForm::dense(m, n, common::uniform_matrix(&mut rng, n.pow(m as u32), 1))
            .unwrap();
        let xs: Vec<Vec<f64>> = (0..m).map(|_| common::uniform_matrix(&mut rng, n, 1)).collect();
        let slot = rng.random_range(0..m);
        let y = common::uniform_matrix(&mut rng, n, 1);
        let (a, b) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let eval = |v: &[f64]| {
            let mut inputs: Vec<&[f64]> = xs.iter().map(Vec::as_slice).collect();
            inputs[slot] = v;
            form.evaluate(&inputs).unwrap()
        };
        let combo: Vec<f64> = xs[slot].iter().zip(&y).map(|(u, v)| a * u + b * v).collect();
        let lhs = eval(&combo);
        let rhs = a * eval(&xs[slot]) + b * eval(&y);
        check((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()), format!("linearity {lhs} {rhs}"));
    }

    // Weak norms do not increase with q. Ambient l_inf and l_1 are the exact
    // routines (largest column norm and sign enumeration).
    for _ in 0..200 {
        let count = rng.random_range(1..=6usize);
        let dim = rng.random_range(1..=6usize);
        let ambient = if rng.random_bool(0.5) { Exponent::INFINITY } else { Exponent::ONE };
        let rows = common::uniform_matrix(&mut rng, count, dim);
        let family = VectorFamily::from_rows(&rows, count, dim, ambient).unwrap();
        let q1 = rng.random_range(1.0..6.0);
        let q2 = q1 + rng.random_range(0.0..4.0);
        let a = weak_q_norm(&family, q1).unwrap().value;
        let b = weak_q_norm(&family, q2).unwrap().value;
        check(b <= a * (1.0 + 1e-12), format!("weak monotonicity q {q1}->{q2}: {a} {b}"));
    }

    // Determinism, including across execution modes.
    for name in ["ksz-m2", "diagonal-m2", "coordinate-c0-m3"] {
        let mut config = preset(name).unwrap().config;
        config.n_grid = vec![2, 4, 8, 16];
        let a = run_ratio_experiment(&config).unwrap();
        let b = run_ratio_experiment(&config).unwrap();
        config.execution = Execution::Sequential;
        config.ascent.execution = Execution::Sequential;
        let c = run_ratio_experiment(&config).unwrap();
        check(a == b && b == c, format!("determinism {name}"));
    }

    outcome(
        failures.is_empty(),
        format!(
            "{checks} checks, {} failures{}",
            failures.len(),
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "coordinate operator exponent m/p", secs(5), coordinate_operator),
        run(2, "diagonal form exponent m-1+1/p-m/q", secs(30), diagonal_form),
        run(3, "random-sign form exponent", secs(120), ksz_forms),
        run(4, "formula identities", secs(5), formula_identities),
        run(5, "norm oracles", secs(10), norm_oracles),
        run(6, "Rademacher exactness", secs(10), rademacher),
        run(7, "property suite", secs(60), properties),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    println!(
        "acceptance: {} of {} criteria passed",
        results.len() - failed.len(),
        results.len()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
