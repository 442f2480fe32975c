//! Parameter sweeps over surface size and quantizer resolution.

pub mod cli;
pub mod csv_io;
pub mod validate;

use rayon::prelude::*;

use crate::analytic::{evaluate_all, loss_report};
use crate::error::Result;
use crate::params::{link_gains, SystemParams};
use crate::quantizer::QuantizerSpec;
use crate::simulate::{mc_estimate, McConfig};

/// Powers of two from 16 to 1024.
pub const DEFAULT_ELEMENTS: [usize; 7] = [16, 32, 64, 128, 256, 512, 1024];

/// Surface pairs of the rate-versus-bits preset.
pub const DEFAULT_PAIRS: [(usize, usize); 4] = [(1024, 1024), (1024, 128), (128, 1024), (128, 128)];

/// One operating point: `(N, M, k1, k2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepPoint {
    pub n: usize,
    pub m: usize,
    pub k1: QuantizerSpec,
    pub k2: QuantizerSpec,
}

/// One CSV row. Column order follows field order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub n: usize,
    pub m: usize,
    pub k1: QuantizerSpec,
    pub k2: QuantizerSpec,
    pub snr_npl_db: f64,
    pub snr_pl_db: f64,
    pub snr_apl_db: f64,
    pub loss_pl_db: f64,
    pub loss_apl_db: f64,
    pub rate_npl: f64,
    pub rate_pl: f64,
    pub rate_apl: f64,
    pub mc_loss_db: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

/// Evaluate every point, adding Monte-Carlo columns when `mc` is given.
/// Rows come back in the order of `points`.
pub fn evaluate_points(
    params: &SystemParams,
    points: &[SweepPoint],
    mc: Option<&McConfig>,
) -> Result<Vec<SweepRow>> {
    let gains = link_gains(params)?;
    points
        .par_iter()
        .map(|pt| {
            let p = params.with_surfaces(pt.n, pt.m, pt.k1, pt.k2);
            let results = evaluate_all(&p, &gains);
            let loss = loss_report(&results);
            let [npl, pl, apl] = results;
            let estimate = mc.map(|cfg| mc_estimate(&p, &gains, cfg)).transpose()?;
            Ok(SweepRow {
                n: pt.n,
                m: pt.m,
                k1: pt.k1,
                k2: pt.k2,
                snr_npl_db: npl.snr_db,
                snr_pl_db: pl.snr_db,
                snr_apl_db: apl.snr_db,
                loss_pl_db: loss.loss_pl_db,
                loss_apl_db: loss.loss_apl_db,
                rate_npl: npl.rate,
                rate_pl: pl.rate,
                rate_apl: apl.rate,
                mc_loss_db: estimate.as_ref().map(|e| e.loss_db),
                mc_stderr: estimate.as_ref().map(|e| e.loss_stderr_db),
                trials: estimate.as_ref().map(|e| e.trials),
                seed: estimate.as_ref().map(|e| e.seed),
            })
        })
        .collect()
}

/// `M = N`, `k1 = k2 = k`; rows ordered by `k`, then `N`.
pub fn sweep_elements(
    params: &SystemParams,
    n_values: &[usize],
    k_values: &[QuantizerSpec],
    mc: Option<&McConfig>,
) -> Result<Vec<SweepRow>> {
    let points: Vec<SweepPoint> = k_values
        .iter()
        .flat_map(|&k| {
            n_values.iter().map(move |&n| SweepPoint {
                n,
                m: n,
                k1: k,
                k2: k,
            })
        })
        .collect();
    evaluate_points(params, &points, mc)
}

/// `k1 = k2 = k` for each `(N, M)` pair; rows ordered by pair, then `k`.
pub fn sweep_bits(
    params: &SystemParams,
    k_values: &[QuantizerSpec],
    nm_pairs: &[(usize, usize)],
    mc: Option<&McConfig>,
) -> Result<Vec<SweepRow>> {
    let points: Vec<SweepPoint> = nm_pairs
        .iter()
        .flat_map(|&(n, m)| {
            k_values
                .iter()
                .map(move |&k| SweepPoint { n, m, k1: k, k2: k })
        })
        .collect();
    evaluate_points(params, &points, mc)
}

pub fn bits_range(lo: u32, hi: u32) -> Vec<QuantizerSpec> {
    (lo..=hi).map(QuantizerSpec::Bits).collect()
}
