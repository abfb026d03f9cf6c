//! Truncated power series over exact fields, and the germ constructions
//! built on them.

mod field;
mod germ;
mod jets;
#[allow(clippy::module_inception)]
mod series;

pub use field::{Field, Fp};
pub use germ::{
    curve_on_hypersurface, dfm_surjective, extend_curve_to_surface, line_on_cone, LineSpec, StepReport,
    SurfaceGerm,
};
pub use jets::{blowup_chart_strict_transform, jet_equations, jet_variable};
pub use series::{homogeneous_decomposition, residual_order, Exponent, HomogeneousForm, ResidualOrder, TruncatedSeries};
