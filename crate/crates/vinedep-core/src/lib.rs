//! Dependence-structure analysis toolkit built around regular-vine copulas.
//!
//! The crate covers the full modelling pipeline for multivariate tabular
//! data:
//!
//! * [`marginals`] — empirical CDFs, the probability integral transform and
//!   a Kolmogorov–Smirnov uniformity check on the resulting copula data.
//! * [`dependence`] — empirical Kendall's tau (tau-a and tie-corrected
//!   tau-b, `O(N log N)`) and pairwise tau matrices.
//! * [`bicop`] — a ten-family bivariate copula zoo (densities, CDFs,
//!   h-functions and their inverses, sampling, theoretical tau, tail
//!   dependence, rotations).
//! * [`select`] — per-edge independence pre-test, maximum-likelihood
//!   fitting and AIC family selection.
//! * [`rvine`] — regular-vine structure selection by sequential maximum
//!   spanning trees, sequential fitting, vine density/log-likelihood,
//!   simulation and model export.
//! * [`gof`] — goodness of fit via the White information-matrix equality
//!   with a parametric bootstrap.
//! * [`dynamics`] — Granger causality between subscriber and view series,
//!   and upload-schedule periodicity analysis.

pub mod bicop;
pub mod dependence;
pub mod dynamics;
pub mod error;
pub mod gof;
pub mod marginals;
pub mod numeric;
pub mod rvine;
pub mod seed;
pub mod select;

pub use error::{Result, VineError};
