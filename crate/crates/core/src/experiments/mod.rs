//! Dimension sweeps of the summability quotient and their growth exponents.
//!
//! An experiment builds one of the extremal operators for each `n` of a
//! grid, evaluates it on unit-basis families and records
//! `mixed_sum / (‖A‖ · Π weak norms)`. A least-squares fit of
//! `log ratio` against `log n` gives a slope that witnesses a lower bound on
//! the index, which [`verify_against_bounds`] compares with the closed-form
//! values.

mod fit;
mod ratio;
mod verify;

use serde::{Deserialize, Serialize};

use crate::bounds::{
    exact_index_c0, exact_index_scalar, IndexQuery, SpaceDescriptor, SpaceKind,
};
use crate::io::CotypeTable;
use crate::numerics::AscentOptions;
use crate::parallel::Execution;
use crate::{Error, Exponent, Result};

pub use fit::{fit_exponent, fit_points, median, median_fit, ExponentFit};
pub use ratio::{run_ratio_experiment, unit_vector_probe, RatioPoint, RatioSeries};
pub use verify::{verify_against_bounds, verify_slope, Verdict, VerificationReport};

/// Tolerance on fitted slopes when every norm is analytic.
pub const ANALYTIC_TOLERANCE: f64 = 1e-9;
/// Tolerance on fitted slopes that involve ascent or random draws.
pub const RANDOMIZED_TOLERANCE: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Random ±1 forms into the scalar field.
    KszScalar,
    /// The diagonal form `Σ_i x^{(1)}_i ⋯ x^{(m)}_i`.
    DiagonalScalar,
    /// The `c_0`-valued coordinate operator.
    CoordinateC0,
    /// Any construction on any domain exponent, with no region check.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Ksz,
    Diagonal,
    Coordinate,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::KszScalar => "ksz_scalar",
            Scenario::DiagonalScalar => "diagonal_scalar",
            Scenario::CoordinateC0 => "coordinate_c0",
            Scenario::Custom => "custom",
        }
    }

    pub fn construction(self) -> Option<Construction> {
        match self {
            Scenario::KszScalar => Some(Construction::Ksz),
            Scenario::DiagonalScalar => Some(Construction::Diagonal),
            Scenario::CoordinateC0 => Some(Construction::Coordinate),
            Scenario::Custom => None,
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "ksz_scalar" => Ok(Scenario::KszScalar),
            "diagonal_scalar" => Ok(Scenario::DiagonalScalar),
            "coordinate_c0" => Ok(Scenario::CoordinateC0),
            "custom" => Ok(Scenario::Custom),
            _ => Err(Error::Parameter(format!("unknown scenario {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    Analytic,
    Ascent,
    Bruteforce,
}

impl std::str::FromStr for NormMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(NormMethod::Analytic),
            "ascent" => Ok(NormMethod::Ascent),
            "bruteforce" => Ok(NormMethod::Bruteforce),
            _ => Err(Error::Parameter(format!("unknown norm method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Label written to artifacts; the preset name or the scenario name.
    pub name: String,
    pub scenario: Scenario,
    /// Required for [`Scenario::Custom`], ignored otherwise.
    #[serde(default)]
    pub construction: Option<Construction>,
    /// Exponent of every domain slot; `q*` when absent.
    #[serde(default)]
    pub domain_exponent: Option<Exponent>,
    pub m: usize,
    pub p: f64,
    pub q: f64,
    pub n_grid: Vec<usize>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    pub norm_method: NormMethod,
    pub ascent: AscentOptions,
    /// Angular resolution for brute force on exponents other than 1, 2, ∞.
    pub bruteforce_resolution: usize,
    pub execution: Execution,
}

pub fn default_grid() -> Vec<usize> {
    vec![2, 4, 8, 16, 32, 64]
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario, m: usize, p: f64, q: f64) -> Self {
        let randomized = scenario == Scenario::KszScalar;
        ExperimentConfig {
            name: scenario.name().to_string(),
            scenario,
            construction: None,
            domain_exponent: None,
            m,
            p,
            q,
            n_grid: default_grid(),
            seeds: if randomized { (0..5).collect() } else { Vec::new() },
            norm_method: if randomized {
                NormMethod::Ascent
            } else {
                NormMethod::Analytic
            },
            ascent: AscentOptions::default(),
            bruteforce_resolution: 64,
            execution: Execution::default(),
        }
    }

    pub fn construction(&self) -> Result<Construction> {
        self.scenario
            .construction()
            .or(self.construction)
            .ok_or_else(|| Error::Config("a custom scenario needs a construction".into()))
    }

    pub fn is_randomized(&self) -> Result<bool> {
        Ok(self.construction()? == Construction::Ksz)
    }

    pub fn domain_exponent(&self) -> Result<Exponent> {
        match self.domain_exponent {
            Some(e) if self.scenario == Scenario::Custom => Ok(e),
            Some(e) if e != self.q_star()? => Err(Error::Config(format!(
                "scenario {} runs on l_{{q*}}; a domain exponent of {e} needs the custom scenario",
                self.scenario.name()
            ))),
            _ => self.q_star(),
        }
    }

    pub fn q_star(&self) -> Result<Exponent> {
        Ok(Exponent::new(self.q)?.conjugate())
    }

    /// The named scenarios attain their exact index; custom runs need not.
    pub fn is_extremal(&self) -> bool {
        self.scenario != Scenario::Custom
    }

    /// Slope tolerance matching the sources of error in this run.
    pub fn tolerance(&self) -> f64 {
        let analytic = self.norm_method == NormMethod::Analytic
            && self.construction().map(|c| c != Construction::Ksz).unwrap_or(false);
        if analytic {
            ANALYTIC_TOLERANCE
        } else {
            RANDOMIZED_TOLERANCE
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(Error::Config("m must be at least 1".into()));
        }
        if !(self.p > 0.0 && self.p.is_finite()) {
            return Err(Error::Config(format!("p = {} must be positive and finite", self.p)));
        }
        if !(self.q >= 1.0 && self.q.is_finite()) {
            return Err(Error::Config(format!("q = {} must be finite and at least 1", self.q)));
        }
        if self.n_grid.len() < 3 {
            return Err(Error::Config(format!(
                "n_grid needs at least 3 dimensions to fit a slope, got {}",
                self.n_grid.len()
            )));
        }
        if self.n_grid[0] < 1 || self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "n_grid must be strictly increasing positive dimensions".into(),
            ));
        }
        if self.is_randomized()? && self.seeds.is_empty() {
            return Err(Error::Config("a randomized scenario needs at least one seed".into()));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("seeds must be distinct".into()));
        }
        self.domain_exponent()?;
        Ok(())
    }

    /// The calculator query whose index the scenario witnesses.
    pub fn query(&self, table: &CotypeTable) -> Result<IndexQuery> {
        let domain = table.descriptor(SpaceKind::SequenceSpace(self.domain_exponent()?))?;
        let codomain = match self.construction()? {
            Construction::Coordinate => SpaceDescriptor::c0(),
            _ => SpaceDescriptor::scalar(),
        };
        IndexQuery::multilinear(self.m as u32, self.p, self.q, domain, codomain)
    }

    /// Checks the hypotheses under which the scenario is extremal; returns
    /// a description of each one that fails. Custom runs have none.
    pub fn region_warnings(&self) -> Vec<String> {
        let m = self.m as u32;
        let result = match self.scenario {
            Scenario::KszScalar => exact_index_scalar(m, self.p, self.q).and_then(|b| {
                if b.region.starts_with("(a)") {
                    Ok(())
                } else {
                    Err(Error::region("exact_index_scalar", "region (a) does not hold"))
                }
            }),
            Scenario::DiagonalScalar => exact_index_scalar(m, self.p, self.q).and_then(|b| {
                if b.region.starts_with("(b)") {
                    Ok(())
                } else {
                    Err(Error::region("exact_index_scalar", "region (b) does not hold"))
                }
            }),
            Scenario::CoordinateC0 => exact_index_c0(m, self.p, self.q).map(|_| ()),
            Scenario::Custom => Ok(()),
        };
        match result {
            Ok(()) => Vec::new(),
            Err(e) => vec![format!("{}: {e}", self.name)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesFit {
    pub seed: Option<u64>,
    pub fit: ExponentFit,
}

/// Per-seed fits of one run, their median, and optionally the comparison
/// of the median slope with the calculator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub scenario: String,
    pub fits: Vec<SeriesFit>,
    pub median: ExponentFit,
    pub tolerance: f64,
    pub region_warnings: Vec<String>,
    pub verification: Option<VerificationReport>,
}

/// Runs the sweep, fits every series and, when `verify` is set, checks the
/// median slope against the bounds for [`ExperimentConfig::query`].
pub fn estimate(
    config: &ExperimentConfig,
    table: &CotypeTable,
    verify: bool,
) -> Result<(Vec<RatioSeries>, EstimateSummary)> {
    let series = run_ratio_experiment(config)?;
    let fits = series
        .iter()
        .map(|s| {
            Ok(SeriesFit {
                seed: s.seed,
                fit: fit_exponent(s)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let median = median_fit(&fits.iter().map(|f| f.fit).collect::<Vec<_>>())
        .ok_or_else(|| Error::Data("no series to fit".into()))?;
    let tolerance = config.tolerance();
    let verification = if verify {
        Some(verify_against_bounds(
            &median,
            &config.query(table)?,
            tolerance,
            config.is_extremal(),
        )?)
    } else {
        None
    };
    let summary = EstimateSummary {
        scenario: config.name.clone(),
        fits,
        median,
        tolerance,
        region_warnings: config.region_warnings(),
        verification,
    };
    Ok((series, summary))
}

/// A named, ready-to-run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub config: ExperimentConfig,
}

/// The canned reproductions of the three extremal constructions.
pub fn scenario_presets() -> Vec<Preset> {
    let mut out = Vec::new();
    let mut add = |name: &str, description: &str, scenario, m, p, q| {
        let mut config = ExperimentConfig::new(scenario, m, p, q);
        config.name = name.to_string();
        out.push(Preset {
            name: name.to_string(),
            description: description.to_string(),
            config,
        });
    };
    add(
        "ksz-m2",
        "random ±1 bilinear forms, p = q = 2, five seeds, ascent norms",
        Scenario::KszScalar,
        2,
        2.0,
        2.0,
    );
    add(
        "diagonal-m2",
        "diagonal bilinear form, p = 4, q = 2, analytic norm",
        Scenario::DiagonalScalar,
        2,
        4.0,
        2.0,
    );
    add(
        "coordinate-c0-m2",
        "c0-valued coordinate operator, m = 2, p = q = 2",
        Scenario::CoordinateC0,
        2,
        2.0,
        2.0,
    );
    add(
        "coordinate-c0-m3",
        "c0-valued coordinate operator, m = 3, p = q = 2",
        Scenario::CoordinateC0,
        3,
        2.0,
        2.0,
    );
    out
}

pub fn preset(name: &str) -> Result<Preset> {
    scenario_presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| {
            let names: Vec<String> = scenario_presets().into_iter().map(|p| p.name).collect();
            Error::Parameter(format!("unknown preset {name:?}; known: {}", names.join(", ")))
        })
}
