//! Exact elliptic genera of toric varieties and Calabi-Yau hypersurfaces.

pub mod error;
pub mod report;
pub mod scalar;
pub mod series;
pub mod theta;
pub mod chern;
pub mod lattice_sum;
pub mod theta_limit;
pub mod toric;
pub mod toric_genus;
pub mod hypersurface;
pub mod jacobi;

pub use error::{Error, Result};
pub use report::{Report, Status};
pub use series::{Genus, Laurent, Series};
