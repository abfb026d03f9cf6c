//! Fans subdividing a cone and the constructions that resolve it.

mod fan;
mod hj;
mod pipeline;

pub use fan::{
    exceptional_rays, is_divisorial, is_regular_fan, is_subdivision, preserves_regular_faces,
    star_subdivide, Fan, FanCone,
};
pub use hj::{hj_minimal_resolution_2d, HjResolution};
pub use pipeline::{
    avoid_ray, regularize, resolve, resolve_2d_minimal, simplicialize, Avoidance, Decomposition,
    DecompositionCase, Phase, SubdivisionLog, SubdivisionStep,
};
