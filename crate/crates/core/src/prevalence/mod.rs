//! Layered random functions whose graphs have large packing numbers.
//!
//! Layer n puts ℓ_n = s_n m_n "satellite" points near each point of a
//! maximal 2^{-n}-packing of the base space, and assigns to the i-th
//! satellite of every cluster the same random value X^n_i drawn uniformly
//! from the grid S_n = 2^{-n+3}{0,…,⌊2^n n^{-2}⌋}^d. A tent-shaped bump of
//! radius r_n extends these values continuously.

mod adversary;
mod event;
mod layer;
mod witness;

pub use adversary::{
    simulate_statement_31, Adversary, CollidingAdversary, StickyAdversary, TranslatedUnionReport,
    ZeroAdversary,
};
pub use event::{check_event, event_trials, DigitDrift, Drift, EventReport, EventSummary, ZeroDrift};
pub use layer::{build_layer, build_layers, BaseSpace, LayerSpec, WitnessConstruction};
pub use witness::{eval_witness, sample_witness, WitnessSample};
