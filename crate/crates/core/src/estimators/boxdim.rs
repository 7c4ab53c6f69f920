//! Box-dimension regression on packing or mesh count series.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::stats::linear_fit;

/// Counts indexed by scale: N_n at scale base^{-n}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaleSeries {
    base: u32,
    entries: Vec<(u32, u64)>,
}

impl ScaleSeries {
    pub fn new(base: u32, entries: Vec<(u32, u64)>) -> Result<Self> {
        if base < 2 {
            return invalid(format!("series base {base} must be at least 2"));
        }
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return invalid("scale indices must be strictly increasing");
        }
        if entries.iter().any(|e| e.1 == 0) {
            return invalid("counts must be positive");
        }
        Ok(ScaleSeries { base, entries })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn entries(&self) -> &[(u32, u64)] {
        &self.entries
    }

    /// Plot coordinates (n log base, log count).
    pub fn log_points(&self) -> Vec<(f64, f64)> {
        let lb = (self.base as f64).ln();
        self.entries
            .iter()
            .map(|&(n, c)| (n as f64 * lb, (c as f64).ln()))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Liminf,
    Limsup,
    FullFit,
}

impl Variant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Liminf => "liminf",
            Variant::Limsup => "limsup",
            Variant::FullFit => "full-fit",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "liminf" => Some(Variant::Liminf),
            "limsup" => Some(Variant::Limsup),
            "full-fit" | "full" => Some(Variant::FullFit),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub intercept: f64,
    pub fit_r2: f64,
    pub range: (u32, u32),
    pub variant: Variant,
}

/// Dimension estimate from a count series.
///
/// `FullFit` is the least-squares slope of log N_n against n log base.
/// `Liminf` and `Limsup` take the minimum and maximum over the trailing half
/// of the scales of (log N_n − â) / (n log base), where â is the fitted
/// intercept. Removing the intercept keeps the bounded prefactor of the
/// count out of the ratio; at finite depth the raw ratio log N_n/(n log b)
/// is dominated by it.
pub fn box_dim_estimate(series: &ScaleSeries, variant: Variant) -> Result<DimensionEstimate> {
    let entries = series.entries();
    if entries.len() < 3 {
        return invalid(format!("need at least 3 scales, got {}", entries.len()));
    }
    let pts = series.log_points();
    let (xs, ys): (Vec<f64>, Vec<f64>) = pts.iter().copied().unzip();
    let fit = linear_fit(&xs, &ys).expect("distinct scales give a non-degenerate fit");
    let range = (entries[0].0, entries[entries.len() - 1].0);
    let slope = match variant {
        Variant::FullFit => fit.slope,
        Variant::Liminf | Variant::Limsup => {
            let tail = &pts[entries.len() / 2..];
            let ratios = tail
                .iter()
                .filter(|(x, _)| *x > 0.0)
                .map(|(x, y)| (y - fit.intercept) / x);
            if variant == Variant::Liminf {
                ratios.fold(f64::INFINITY, f64::min)
            } else {
                ratios.fold(f64::NEG_INFINITY, f64::max)
            }
        }
    };
    Ok(DimensionEstimate {
        slope,
        intercept: fit.intercept,
        fit_r2: fit.r2,
        range,
        variant,
    })
}
