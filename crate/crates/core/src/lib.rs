//! Multiclass support vector machines for land-cover classification of
//! multi-band rasters.
//!
//! The crate is organised bottom-up:
//!
//! - [`kernels`]: kernel functions, Gram matrices and band standardization.
//! - [`binary_svm`]: a two-class soft-margin SVM trained by SMO, a dense
//!   projected-gradient oracle for the same dual, and stratified k-fold
//!   grid search.
//! - [`multiclass`]: one-against-all and one-against-one decomposition,
//!   including the unclassified / mixed pixel outcomes.
//! - [`assessment`]: confusion matrices, Cohen's kappa with its
//!   delta-method variance, the kappa Z-test and the comparison report.
//! - [`raster_io`]: raster, sample and PPM map formats plus a seeded
//!   synthetic scene generator.
//! - [`persist`]: versioned text formats for models, label grids and
//!   assessment records.

pub mod assessment;
pub mod binary_svm;
mod error;
pub mod kernels;
pub mod multiclass;
pub mod persist;
pub mod raster_io;

pub use error::{Error, Result};
