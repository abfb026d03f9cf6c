//! Toric arcs, minimal elements of the singular locus cone order, fan
//! resolutions, and the germ-lifting constructions on hypersurfaces.

pub mod arc;
pub mod cone;
pub mod error;
pub mod lattice;
pub mod order;
pub mod parse;
pub mod resolution;
pub mod series;

pub use arc::{ArcFamily, LaurentSeries, TorusArc};
pub use cone::{Cone, Face};
pub use error::{Error, ErrorKind, Result};
pub use lattice::{IntMatrix, LatticeVector};
pub use order::MinimalElementReport;
pub use resolution::{Fan, SubdivisionLog};
pub use series::{Field, Fp, HomogeneousForm, LineSpec, TruncatedSeries};
