//! Packing counts, mesh counts, dimension regressions and energies.

mod boxdim;
mod cover;
mod energy;
mod mesh;
mod packing;

pub use boxdim::{box_dim_estimate, DimensionEstimate, ScaleSeries, Variant};
pub use cover::{hausdorff_content_upper, localized_upper_box, CoverFamily, CoverPiece, LocalizedEstimate};
pub use energy::{
    discrete_energy, energies_on_grid, energy_dimension_profile, natural_measure, DiscreteMeasure, EnergyProfile,
    ProfileFlag,
};
pub use mesh::{mesh_count_2d, mesh_count_cells};
pub use packing::{
    exact_packing, greedy_packing, max_packing_exact, max_packing_greedy, packing_count, PackingMethod,
    PackingResult, DEFAULT_EXACT_LIMIT,
};
