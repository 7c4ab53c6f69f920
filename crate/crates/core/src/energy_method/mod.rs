//! Random fields on nested families of Cantor cylinders, the pair integral
//! bound behind them, and the expected graph energy.

mod expectation;
mod family;
mod field;
mod kernel;

pub use expectation::{
    expected_energy_check, statement_55_check, DecadeConstant, ExpectedEnergyReport, GraphMeasure,
    PairBoundReport, PairExpectation,
};
pub use family::{
    build_nested_family, lacunary_schedule, minimal_depth, natural_schedule, LevelSpec, NestedFamily,
    Piece, Placement, FAMILY_DIGIT_LIMIT, LACUNARY_LEVELS,
};
pub use field::{sample_field, RandomFieldSample};
pub use kernel::{
    centered_bound, dyadic_ladder, lemma_52_check, lemma_52_sweep, pair_integral, sharp_constant,
    IntegralEstimate, KernelRow, KernelSweep, QMC_POINTS,
};
