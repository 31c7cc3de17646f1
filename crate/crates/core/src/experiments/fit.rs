use serde::{Deserialize, Serialize};

use super::RatioSeries;
use crate::{Error, Result};

/// Least-squares line through `(log n, log ratio)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub n_used: usize,
}

pub fn fit_exponent(series: &RatioSeries) -> Result<ExponentFit> {
    let ns: Vec<f64> = series.points.iter().map(|p| p.n as f64).collect();
    let ratios: Vec<f64> = series.points.iter().map(|p| p.ratio).collect();
    fit_points(&ns, &ratios)
}

/// Ordinary least squares on `(log x, log y)`.
pub fn fit_points(xs: &[f64], ys: &[f64]) -> Result<ExponentFit> {
    if xs.len() != ys.len() {
        return Err(Error::Dimension(format!("{} abscissae, {} ordinates", xs.len(), ys.len())));
    }
    if xs.len() < 3 {
        return Err(Error::Data(format!("a slope needs at least 3 points, got {}", xs.len())));
    }
    for (&x, &y) in xs.iter().zip(ys) {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::Data(format!("dimension {x} is not positive")));
        }
        if !(y > 0.0 && y.is_finite()) {
            return Err(Error::Data(format!("ratio {y} at n = {x} is not positive")));
        }
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Data("all dimensions are equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    Ok(ExponentFit {
        slope,
        intercept,
        residual_rms: (sse / k).sqrt(),
        n_used: xs.len(),
    })
}

/// Median of a nonempty list; the mean of the two middle values for even
/// lengths.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    })
}

/// Componentwise median of per-seed fits.
pub fn median_fit(fits: &[ExponentFit]) -> Option<ExponentFit> {
    let pick = |f: fn(&ExponentFit) -> f64| median(&fits.iter().map(f).collect::<Vec<_>>());
    Some(ExponentFit {
        slope: pick(|f| f.slope)?,
        intercept: pick(|f| f.intercept)?,
        residual_rms: pick(|f| f.residual_rms)?,
        n_used: fits.iter().map(|f| f.n_used).min()?,
    })
}
