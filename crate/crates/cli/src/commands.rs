use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use summability::bounds::{
    self, aggregate_bounds, BoundResult, CoincidencePair, Field, IndexQuery, PolExactTarget,
    SpaceDescriptor, SpaceKind,
};
use summability::experiments::{
    self, scenario_presets, verify_slope, Construction, ExperimentConfig, NormMethod, Scenario,
};
use summability::io::{
    build_report, run_records, write_csv, write_jsonl, ConfigFile, ConfigOverrides, CotypeTable,
    RunRecord,
};
use summability::numerics::{
    self, build_coordinate_operator, build_diagonal_form, build_ksz_form, diagonal_form_norm,
    operator_norm_ascent, operator_norm_bruteforce_with, AscentOptions, Coefficients,
    FormHeader, NormEstimate, BRUTEFORCE_BUDGET,
};
use summability::parallel::Execution;
use summability::{Error, Exponent, Result};

use crate::args::*;
use crate::output::{self, Output};

pub struct Context {
    pub format: Format,
    /// `--seed`, when given; 0 is used otherwise.
    pub seed: Option<u64>,
    pub config: Option<ConfigFile>,
    pub table: CotypeTable,
    pub invocation: Vec<String>,
}

impl Context {
    fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

fn exponent(flag: &str, s: &str) -> Result<Exponent> {
    s.parse::<Exponent>()
        .map_err(|e| Error::Parameter(format!("{flag}: {e}")))
}

fn space(
    flag: &str,
    spec: &str,
    cotype: Option<&str>,
    q: f64,
    table: &CotypeTable,
) -> Result<SpaceDescriptor> {
    let kind = match spec {
        "lq-star" => SpaceKind::SequenceSpace(Exponent::new(q)?.conjugate()),
        "c0" => SpaceKind::C0,
        "scalar" => SpaceKind::ScalarField,
        "abstract" => SpaceKind::Abstract,
        other => match other.strip_prefix("l:").or_else(|| other.strip_prefix("lp:")) {
            Some(s) => SpaceKind::SequenceSpace(exponent(flag, s)?),
            None => {
                return Err(Error::Parameter(format!(
                    "{flag}: unknown space {other:?}; expected lq-star, l:S, c0, scalar or abstract"
                )))
            }
        },
    };
    match cotype {
        Some(c) => SpaceDescriptor::new(kind, exponent(flag, c)?),
        None => table.descriptor(kind).map_err(|e| match e {
            Error::Parameter(msg) => Error::Parameter(format!("{flag}: {msg}")),
            other => other,
        }),
    }
}

fn query(args: &QueryArgs, table: &CotypeTable) -> Result<IndexQuery> {
    let domain = space(
        "--domain",
        &args.domain,
        args.domain_cotype.as_deref(),
        args.q,
        table,
    )?;
    let codomain_spec = args.codomain.as_deref().unwrap_or(if args.cotype.is_some() {
        "abstract"
    } else {
        "scalar"
    });
    let codomain = space("--codomain", codomain_spec, args.cotype.as_deref(), args.q, table)?;
    let field = match args.field {
        FieldArg::Real => Field::Real,
        FieldArg::Complex => Field::Complex,
    };
    let q = match args.variant {
        VariantArg::Mult => IndexQuery::multilinear(args.m, args.p, args.q, domain, codomain)?,
        VariantArg::Pol => IndexQuery::polynomial(args.m, args.p, args.q, domain, codomain)?,
    };
    Ok(q.with_field(field))
}

fn required<T: Copy>(value: Option<T>, flag: &str, formula: Formula) -> Result<T> {
    value.ok_or_else(|| Error::Parameter(format!("{flag} is required for {formula:?}")))
}

/// A single formula value, for formulas that return an exponent rather
/// than a bound.
#[derive(Serialize)]
struct FormulaValue {
    formula: &'static str,
    value: f64,
}

pub fn bounds(ctx: &Context, args: &BoundsArgs) -> Result<Output> {
    let Some(formula) = args.formula else {
        let q = query(&args.query, &ctx.table)?;
        let agg = aggregate_bounds(&q)?;
        return Ok(output::bounds(ctx.format, &q, &agg));
    };
    let QueryArgs { m, p, q, .. } = args.query;
    if m < 1 {
        return Err(Error::Parameter("--m must be at least 1".into()));
    }
    let r = || -> Result<f64> {
        let r = args
            .r
            .as_deref()
            .ok_or_else(|| Error::Parameter(format!("--r is required for {formula:?}")))?;
        Ok(exponent("--r", r)?.value())
    };
    let pair = || -> Result<CoincidencePair> {
        CoincidencePair::new(
            required(args.t, "--t", formula)?,
            required(args.s, "--s", formula)?,
        )
    };
    let field = match args.query.field {
        FieldArg::Real => Field::Real,
        FieldArg::Complex => Field::Complex,
    };
    let single = |b: BoundResult| output::single_bound(ctx.format, &b);
    let value = |name: &'static str, v: f64| {
        output::formula_value(ctx.format, &FormulaValue { formula: name, value: v })
    };
    Ok(match formula {
        Formula::MultUpperFromCoincidence => {
            single(bounds::mult_upper_from_coincidence(m, p, q, pair()?)?)
        }
        Formula::PolUpperFromCoincidence => {
            single(bounds::pol_upper_from_coincidence(m, p, q, pair()?)?)
        }
        Formula::CotypeCoincidenceT => value(
            "cotype_coincidence_t",
            bounds::cotype_coincidence_t(m, r()?, required(args.s, "--s", formula)?)?,
        ),
        Formula::ScalarCoincidenceS => value(
            "scalar_coincidence_s",
            bounds::scalar_coincidence_s(m, required(args.t, "--t", formula)?)?,
        ),
        Formula::CornbdUpper => single(bounds::cornbd_upper(m, r()?, p, q, args.s)?),
        Formula::ExactIndexScalar => single(bounds::exact_index_scalar(m, p, q)?),
        Formula::ExactIndexC0 => single(bounds::exact_index_c0(m, p, q)?),
        Formula::PolExactQ1 => {
            if (q - 1.0).abs() > 1e-12 {
                return Err(Error::region("pol_exact_q1", format!("q = 1 (q = {q})")));
            }
            let target = match &args.r {
                Some(_) => PolExactTarget::Cotype(r()?),
                None => PolExactTarget::RealScalarEven,
            };
            single(bounds::pol_exact_q1(m, p, target)?)
        }
        Formula::MpsLower => single(bounds::mps_lower(m, p, q, r()?)?),
        Formula::CotiponLower => single(bounds::cotipon_lower(m, p, q, r()?)?),
        Formula::EvenRealLower => single(bounds::even_real_lower(m, p, q, field)?),
    })
}

pub fn construct(ctx: &Context, args: &ConstructArgs) -> Result<Output> {
    let e = exponent("--exponent", &args.exponent)?;
    let form = match args.kind {
        Kind::Ksz => build_ksz_form(args.m, args.n, ctx.seed())?,
        Kind::Diagonal => build_diagonal_form(args.m, args.n)?,
        Kind::Coordinate => build_coordinate_operator(args.m, args.n)?,
    }
    .with_exponent(e);
    let file = fs::File::create(&args.out)
        .map_err(|err| Error::Io(format!("{}: {err}", args.out.display())))?;
    numerics::write_form(&form, std::io::BufWriter::new(file))?;
    Ok(output::header(ctx.format, &FormHeader::of(&form), &args.out))
}

fn ascent_options(ctx: &Context, args: &AscentArgs) -> AscentOptions {
    let mut opts = AscentOptions {
        seed: ctx.seed(),
        ..AscentOptions::default()
    };
    if let Some(r) = args.restarts {
        opts.restarts = r;
    }
    if let Some(t) = args.tol {
        opts.tol = t;
    }
    if let Some(i) = args.max_iters {
        opts.max_iters = i;
    }
    if args.sequential {
        opts.execution = Execution::Sequential;
    }
    opts
}

pub fn norm(ctx: &Context, args: &NormArgs) -> Result<Output> {
    let file = fs::File::open(&args.form)
        .map_err(|e| Error::Io(format!("{}: {e}", args.form.display())))?;
    let mut form = numerics::read_form(std::io::BufReader::new(file))?;
    if let Some(e) = &args.exponent {
        form = form.with_exponent(exponent("--exponent", e)?);
    }
    let opts = ascent_options(ctx, &args.ascent);
    let estimate = match args.method {
        MethodArg::Analytic => match form.coefficients() {
            Coefficients::Diagonal => NormEstimate::analytic(diagonal_form_norm(
                form.order(),
                form.dim(),
                form.exponents()[0],
            )),
            Coefficients::Coordinate => NormEstimate::analytic(1.0),
            other => {
                return Err(Error::Inapplicable {
                    formula: "analytic norm",
                    reason: format!("no closed form for {} coefficients", other.kind_name()),
                })
            }
        },
        MethodArg::Ascent => operator_norm_ascent(&form, &opts)?,
        MethodArg::Bruteforce => {
            operator_norm_bruteforce_with(&form, args.resolution, BRUTEFORCE_BUDGET, opts.execution)?
        }
    };
    Ok(output::norm(ctx.format, &estimate))
}

fn method(m: MethodArg) -> NormMethod {
    match m {
        MethodArg::Analytic => NormMethod::Analytic,
        MethodArg::Ascent => NormMethod::Ascent,
        MethodArg::Bruteforce => NormMethod::Bruteforce,
    }
}

/// Preset or scenario defaults, then the config file, then the flags.
pub fn experiment_config(ctx: &Context, args: &EstimateArgs) -> Result<ExperimentConfig> {
    let mut config = match (&args.preset, &args.scenario) {
        (Some(name), _) => experiments::preset(name)?.config,
        (None, Some(s)) => {
            let scenario: Scenario = s.parse()?;
            let m = args
                .m
                .ok_or_else(|| Error::Parameter("--m is required with --scenario".into()))?;
            let p = args
                .p
                .ok_or_else(|| Error::Parameter("--p is required with --scenario".into()))?;
            let q = args
                .q
                .ok_or_else(|| Error::Parameter("--q is required with --scenario".into()))?;
            ExperimentConfig::new(scenario, m, p, q)
        }
        (None, None) => {
            return Err(Error::Parameter("one of --preset or --scenario is required".into()))
        }
    };
    if let Some(file) = &ctx.config {
        let name = config.name.clone();
        file.apply(&name, &mut config);
    }
    let flags = ConfigOverrides {
        m: args.m,
        p: args.p,
        q: args.q,
        n_grid: args.n_grid.clone(),
        seeds: args.seeds.map(|k| (ctx.seed()..ctx.seed() + k).collect()),
        norm_method: args.norm_method.map(method),
        construction: args.construction.map(|k| match k {
            Kind::Ksz => Construction::Ksz,
            Kind::Diagonal => Construction::Diagonal,
            Kind::Coordinate => Construction::Coordinate,
        }),
        domain_exponent: args
            .domain_exponent
            .as_deref()
            .map(|s| exponent("--domain-exponent", s))
            .transpose()?,
        restarts: args.ascent.restarts,
        tol: args.ascent.tol,
        max_iters: args.ascent.max_iters,
        ascent_seed: ctx.seed,
        bruteforce_resolution: args.resolution,
        execution: args.ascent.sequential.then_some(Execution::Sequential),
    };
    flags.apply(&mut config);
    config.validate()?;
    Ok(config)
}

fn create(path: &Path) -> Result<std::io::BufWriter<fs::File>> {
    fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn estimate(ctx: &Context, args: &EstimateArgs) -> Result<Output> {
    let config = experiment_config(ctx, args)?;
    let (series, summary) = experiments::estimate(&config, &ctx.table, args.verify)?;
    fs::create_dir_all(&args.out_dir)
        .map_err(|e| Error::Io(format!("{}: {e}", args.out_dir.display())))?;
    let stem = config.name.clone();
    let csv_path = args.out_dir.join(format!("{stem}.csv"));
    let jsonl_path = args.out_dir.join(format!("{stem}.jsonl"));
    let run_path = args.out_dir.join(format!("{stem}.run.json"));
    write_csv(create(&csv_path)?, &series, &summary)?;
    write_jsonl(create(&jsonl_path)?, &run_records(&config, &series, &summary))?;
    let run = RunRecord::new(
        timestamp(),
        ctx.invocation.clone(),
        &config,
        &summary,
    )?;
    let mut w = create(&run_path)?;
    serde_json::to_writer_pretty(&mut w, &run).map_err(|e| Error::Io(e.to_string()))?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(output::estimate(
        ctx.format,
        &summary,
        &[&csv_path, &jsonl_path, &run_path],
    ))
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn verify(ctx: &Context, args: &VerifyArgs) -> Result<Output> {
    let q = query(&args.query, &ctx.table)?;
    let agg = aggregate_bounds(&q)?;
    let verdict = verify_slope(args.slope, &agg, args.tolerance, args.extremal);
    Ok(output::verdict(ctx.format, args.slope, &agg, verdict, args.tolerance))
}

pub fn presets(ctx: &Context) -> Result<Output> {
    Ok(output::presets(ctx.format, &scenario_presets()))
}

pub fn report(ctx: &Context, args: &ReportArgs) -> Result<Output> {
    let paths: Vec<&Path> = args.paths.iter().map(|p| p.as_path()).collect();
    let report = build_report(&paths)?;
    Ok(output::report(ctx.format, &report))
}
