//! Nonparametric inference on the volatility of volatility from
//! high-frequency prices.
//!
//! * [`sim`]: Heston / CEV / Vasicek simulators with latent ground truth.
//! * [`spot`]: sliding-window spot variance and quarticity.
//! * [`volvol`]: the integrated vol-of-vol estimator, its variance
//!   estimators and the feasible standardized statistic.
//! * [`gof`]: residual-process goodness-of-fit test with a parametric bootstrap.
//! * [`mc`]: parallel, reproducible Monte Carlo experiments.
//! * [`io`]: CSV ingestion and report rendering.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coefficients;
pub mod error;
pub mod gof;
pub mod io;
pub mod mc;
pub mod normal;
pub mod reference;
pub mod rng;
pub mod sim;
pub mod spot;
pub mod sum;
pub mod volvol;

pub use error::{Error, Result};
pub use gof::{bootstrap_test, BootstrapConfig, GofConfig, GofReport, Tau2Fn};
pub use sim::{check_feller, simulate, ModelKind, ModelSpec, SampledPath, SimGrid};
pub use spot::{EstimatorConfig, SpotSeries, Window};
pub use volvol::{estimate, VolvolReport};
