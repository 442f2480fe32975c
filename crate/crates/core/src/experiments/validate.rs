//! Monte-Carlo versus closed-form checks used by the `validate` subcommand.

use std::fmt;

use crate::analytic::{self, Mode};
use crate::error::Result;
use crate::params::{link_gains, SystemParams};
use crate::quantizer::sinc_factor;
use crate::simulate::{mc_estimate, McConfig, McEstimate};

use super::SweepPoint;

/// Absolute floor on the loss tolerance, dB.
pub const LOSS_FLOOR_DB: f64 = 0.02;
/// Relative tolerance on mean hop amplitudes.
pub const AMPLITUDE_REL_TOL: f64 = 0.01;
/// Standard errors allowed on statistical comparisons.
pub const SIGMAS: f64 = 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: String, observed: f64, expected: f64, tolerance: f64) -> Self {
        Self {
            passed: (observed - expected).abs() <= tolerance,
            name,
            observed,
            expected,
            tolerance,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<40} observed {:>12.6} expected {:>12.6} tol {:.6}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.observed,
            self.expected,
            self.tolerance
        )
    }
}

/// Checks for one operating point, plus the estimate they were drawn from.
pub fn validate_point(
    params: &SystemParams,
    point: SweepPoint,
    config: &McConfig,
) -> Result<(McEstimate, Vec<Check>)> {
    let p = params.with_surfaces(point.n, point.m, point.k1, point.k2);
    let gains = link_gains(&p)?;
    let est = mc_estimate(&p, &gains, config)?;
    let loss = analytic::snr_loss(&p, &gains);
    let tag = format!(
        "N={} M={} k1={} k2={}",
        point.n, point.m, point.k1, point.k2
    );

    let a_pl = analytic::mean_amplitude_first_hop(Mode::Pl, &p, &gains);
    let b_pl = analytic::mean_amplitude_second_hop(Mode::Pl, &p, &gains);
    let mut checks = vec![
        Check::new(
            format!("{tag} loss_db"),
            est.loss_db,
            loss.loss_pl_db,
            LOSS_FLOOR_DB.max(SIGMAS * est.loss_stderr_db),
        ),
        Check::new(
            format!("{tag} mean A (quantized)"),
            est.amp_first_pl.mean,
            a_pl,
            AMPLITUDE_REL_TOL * a_pl,
        ),
        Check::new(
            format!("{tag} mean B (quantized)"),
            est.amp_second_pl.mean,
            b_pl,
            AMPLITUDE_REL_TOL * b_pl,
        ),
    ];
    if point.n > 0 {
        checks.push(Check::new(
            format!("{tag} mean cos err IRS-1"),
            est.cos_error_first.mean,
            sinc_factor(point.k1),
            SIGMAS * est.cos_error_first.stderr,
        ));
    }
    if point.m > 0 {
        checks.push(Check::new(
            format!("{tag} mean cos err IRS-2"),
            est.cos_error_second.mean,
            sinc_factor(point.k2),
            SIGMAS * est.cos_error_second.stderr,
        ));
    }
    Ok((est, checks))
}
