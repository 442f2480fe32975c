//! Performance analysis of a double-IRS-aided amplify-and-forward relay link
//! whose surfaces use k-bit discrete phase shifters.
//!
//! The crate has two independent routes to the destination SNR:
//!
//! * [`analytic`] evaluates the closed forms obtained by replacing Rayleigh
//!   channel magnitudes with their means and the phase-quantization error with
//!   its expected attenuation (`sinc` or its second-order Taylor truncation).
//! * [`simulate`] draws channel realizations, aligns and quantizes the surface
//!   phases, and averages the per-trial SNR.
//!
//! [`experiments`] drives parameter sweeps and the `irs-af` command line.

pub mod analytic;
pub mod channels;
pub mod error;
pub mod experiments;
pub mod params;
pub mod quantizer;
pub mod simulate;

pub use analytic::{AnalyticResult, LossReport, Mode};
pub use error::{Error, Result};
pub use params::{Geometry, LinkGains, SystemParams};
pub use quantizer::QuantizerSpec;
pub use simulate::{BetaModel, ErrorModel, McConfig, McEstimate};
