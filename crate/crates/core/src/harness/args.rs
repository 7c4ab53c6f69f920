//! Command-line arguments for every experiment.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};

use crate::cantor::DigitFunction;
use crate::estimators::Variant;
use crate::metric_spaces::SpaceDescriptor;
use crate::prevalence::{BaseSpace, DigitDrift, Drift, ZeroDrift};

/// Inclusive range of scale indices written `a..b`, `a..=b` or `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScaleRange {
    pub lo: u32,
    pub hi: u32,
}

impl ScaleRange {
    pub fn iter(&self) -> std::ops::RangeInclusive<u32> {
        self.lo..=self.hi
    }
}

impl FromStr for ScaleRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|_| format!("{t:?} is not a scale index"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}..{hi}"));
        }
        Ok(ScaleRange { lo, hi })
    }
}

impl fmt::Display for ScaleRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Interval,
    Cantor,
    Harmonic,
}

impl SpaceArg {
    pub fn descriptor(&self) -> SpaceDescriptor {
        match self {
            SpaceArg::Interval => SpaceDescriptor::UnitInterval,
            SpaceArg::Cantor => SpaceDescriptor::TriadicCantor,
            SpaceArg::Harmonic => SpaceDescriptor::HarmonicSequence,
        }
    }

    /// Box dimension of the base space.
    pub fn box_dimension(&self) -> f64 {
        match self {
            SpaceArg::Interval => 1.0,
            SpaceArg::Cantor => 2f64.ln() / 3f64.ln(),
            SpaceArg::Harmonic => 0.5,
        }
    }

    pub fn hausdorff_dimension(&self) -> f64 {
        match self {
            SpaceArg::Interval => 1.0,
            SpaceArg::Cantor => 2f64.ln() / 3f64.ln(),
            SpaceArg::Harmonic => 0.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LayerSpaceArg {
    Cantor,
    Interval,
}

impl LayerSpaceArg {
    pub fn base(&self) -> BaseSpace {
        match self {
            LayerSpaceArg::Cantor => BaseSpace::Cantor,
            LayerSpaceArg::Interval => BaseSpace::Interval,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Liminf,
    Limsup,
    FullFit,
    /// Energy-dimension profile of the natural measures.
    Energy,
}

impl VariantArg {
    pub fn box_variant(&self) -> Option<Variant> {
        match self {
            VariantArg::Liminf => Some(Variant::Liminf),
            VariantArg::Limsup => Some(Variant::Limsup),
            VariantArg::FullFit => Some(Variant::FullFit),
            VariantArg::Energy => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            VariantArg::Liminf => "liminf",
            VariantArg::Limsup => "limsup",
            VariantArg::FullFit => "full-fit",
            VariantArg::Energy => "energy",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DriftArg {
    Zero,
    /// The odd-digit function on the Cantor set.
    Odd,
    Even,
    Sum,
}

impl DriftArg {
    pub fn drift(&self) -> Box<dyn Drift> {
        match self {
            DriftArg::Zero => Box::new(ZeroDrift),
            DriftArg::Odd => Box::new(DigitDrift(DigitFunction::OddDigits)),
            DriftArg::Even => Box::new(DigitDrift(DigitFunction::EvenDigits)),
            DriftArg::Sum => Box::new(DigitDrift(DigitFunction::Sum)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DriftArg::Zero => "zero",
            DriftArg::Odd => "odd",
            DriftArg::Even => "even",
            DriftArg::Sum => "sum",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AdversaryArg {
    Zero,
    Colliding,
    Sticky,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    /// Two-way splits across gaps shrinking like 2^{-10n}.
    Lacunary,
    /// Full branching at the minimal admissible depths.
    Natural,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepArg {
    P,
    Q,
    Theta,
    All,
}

#[derive(Clone, Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// CSV output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Plot data output path (scale-series experiments only).
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct EstimateArgs {
    #[arg(long, value_enum, default_value_t = SpaceArg::Cantor)]
    pub space: SpaceArg,
    /// Dimension of the cube factor; 0 for the space itself.
    #[arg(long, default_value_t = 0)]
    pub d: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::FullFit)]
    pub variant: VariantArg,
    #[arg(long, default_value = "4..12")]
    pub n: ScaleRange,
    /// Reference value; defaults to the known dimension.
    #[arg(long)]
    pub reference: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub tolerance: f64,
}

#[derive(Clone, Debug, Args)]
pub struct CantorArgs {
    #[arg(long, default_value_t = 3)]
    pub n_max: u32,
    /// Range for the slope fits, e.g. 3..7.
    #[arg(long)]
    pub fit: Option<ScaleRange>,
    #[arg(long, default_value_t = 0.02)]
    pub tolerance: f64,
}

#[derive(Clone, Debug, Args)]
pub struct PrevalenceArgs {
    #[arg(long, value_enum, default_value_t = LayerSpaceArg::Cantor)]
    pub space: LayerSpaceArg,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value = "5..7")]
    pub n: ScaleRange,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, value_enum, default_value_t = DriftArg::Zero)]
    pub drift: DriftArg,
}

#[derive(Clone, Debug, Args)]
pub struct Statement31Args {
    #[arg(long, value_enum, default_value_t = LayerSpaceArg::Cantor)]
    pub space: LayerSpaceArg,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 5)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = AdversaryArg::All)]
    pub adversary: AdversaryArg,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
}

#[derive(Clone, Debug, Args)]
pub struct EnergyArgs {
    #[arg(long, value_enum, default_value_t = ScheduleArg::Lacunary)]
    pub schedule: ScheduleArg,
    #[arg(long, default_value_t = 3)]
    pub depth: u32,
    /// Smallest family depth for the expected-energy rows.
    #[arg(long, default_value_t = 2)]
    pub min_depth: u32,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, default_value_t = 0.6)]
    pub s: f64,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    #[arg(long, value_enum, default_value_t = DriftArg::Zero)]
    pub drift: DriftArg,
}

#[derive(Clone, Debug, Args)]
pub struct Lemma52Args {
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Exponents, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub u: Vec<f64>,
    #[arg(long, value_enum, default_value_t = SweepArg::All)]
    pub sweep: SweepArg,
    /// p and q run over 2^{-1}, …, 2^{-levels}.
    #[arg(long, default_value_t = 8)]
    pub levels: u32,
    #[arg(long, value_delimiter = ',', default_value = "0,0.3,2")]
    pub thetas: Vec<f64>,
}

#[derive(Clone, Debug, Args)]
pub struct ReportArgs {
    /// Result CSV files to merge and summarize.
    #[arg(long, required = true, value_delimiter = ',')]
    pub input: Vec<PathBuf>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Box or energy dimension estimates of a base space or its product with a cube.
    Estimate {
        #[command(flatten)]
        args: EstimateArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Exact mesh counts of the digit-function graphs against the closed forms.
    Cantor {
        #[command(flatten)]
        args: CantorArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Fraction of sampled witnesses whose graphs meet the packing threshold.
    Prevalence {
        #[command(flatten)]
        args: PrevalenceArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Failure rate of translated unions against adaptive adversaries.
    Statement31 {
        #[command(flatten)]
        args: Statement31Args,
        #[command(flatten)]
        common: Common,
    },
    /// Pair expectation constants and expected graph energies on nested families.
    Energy {
        #[command(flatten)]
        args: EnergyArgs,
        #[command(flatten)]
        common: Common,
    },
    /// The pair integral against p^d q^{d-2u} over a parameter sweep.
    Lemma52 {
        #[command(flatten)]
        args: Lemma52Args,
        #[command(flatten)]
        common: Common,
    },
    /// Merge result files and summarize pass/fail.
    Report {
        #[command(flatten)]
        args: ReportArgs,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Estimate { common, .. }
            | Command::Cantor { common, .. }
            | Command::Prevalence { common, .. }
            | Command::Statement31 { common, .. }
            | Command::Energy { common, .. }
            | Command::Lemma52 { common, .. }
            | Command::Report { common, .. } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Estimate { .. } => "estimate",
            Command::Cantor { .. } => "cantor",
            Command::Prevalence { .. } => "prevalence",
            Command::Statement31 { .. } => "statement31",
            Command::Energy { .. } => "energy",
            Command::Lemma52 { .. } => "lemma52",
            Command::Report { .. } => "report",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("4..12".parse::<ScaleRange>().unwrap(), ScaleRange { lo: 4, hi: 12 });
        assert_eq!("4..=12".parse::<ScaleRange>().unwrap(), ScaleRange { lo: 4, hi: 12 });
        assert_eq!("5".parse::<ScaleRange>().unwrap(), ScaleRange { lo: 5, hi: 5 });
        assert!("7..3".parse::<ScaleRange>().is_err());
        assert!("a..3".parse::<ScaleRange>().is_err());
    }
}
