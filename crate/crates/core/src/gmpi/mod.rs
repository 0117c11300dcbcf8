//! Generalized mixed product ideals and their minimal resolutions.
//!
//! Given `I ⊂ K[x_1, ..., x_n]` and ideals `L_{l,d}` in disjoint blocks of
//! variables, `L` is the sum over the generators `x^a` of `I` of the products
//! `Π_l L_{l,a(l)}`. Its minimal resolution is the total complex of a double
//! complex whose columns are tensor products of resolutions of the `L_{l,d}`.

mod double;
mod instance;
mod star;
mod tensor;

pub use double::{
    block_resolutions, build_double_complex, gmpi_linearity, gmpi_projdim, gmpi_regularity, resolve,
    rho_maps, total_complex, BlockResolution, BlockResolutions, ComparisonMaps, DoubleComplex,
    GmpiResolution, LinearityReport, ProjdimReport, RegularityReport,
};
pub use instance::{embed_ideal, inducing_context, DegreeLadder, GmpiInstance, SubstitutionFamily};
pub use star::{build_star_complex, star_acyclicity, StarComplex};
pub use tensor::{tensor_chain_map, tensor_product, TensorComplex, TensorKey};
