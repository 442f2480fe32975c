//! Monte-Carlo reference for the closed forms.
//!
//! Each trial draws a full channel realization, aligns both surfaces to their
//! direct-link phase, then applies phase errors (true k-bit rounding or the
//! uniform error model) and evaluates the end-to-end SNR. Continuous and
//! quantized phases share the realization so the two differ only by the
//! quantization error.
//!
//! Trial `i` draws from the ChaCha stream `i` of `seed`, and per-trial results
//! are reduced in index order, so an estimate is bit-identical regardless of
//! thread count.

use std::f64::consts::{LN_10, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{self, Mode};
use crate::channels::{ChannelRealization, Tap};
use crate::error::{Error, Result};
use crate::params::{linear_to_db, LinkGains, SystemParams};
use crate::quantizer::{quantize_phase, sample_phase_error, QuantizerSpec};

/// How the phase error of a quantized element is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ErrorModel {
    /// Round the ideal phase to the k-bit grid.
    #[default]
    Grid,
    /// Draw the error uniformly from `[-pi/2^k, pi/2^k]`.
    Uniform,
}

/// Which first-hop amplitude sets the relay gain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BetaModel {
    /// The realized amplitude of the trial.
    #[default]
    Instantaneous,
    /// The closed-form mean amplitude of the mode.
    Averaged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: usize,
    pub seed: u64,
    pub error_model: ErrorModel,
    pub beta_model: BetaModel,
}

impl McConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            error_model: ErrorModel::default(),
            beta_model: BetaModel::default(),
        }
    }

    pub fn with_error_model(self, error_model: ErrorModel) -> Self {
        Self {
            error_model,
            ..self
        }
    }

    pub fn with_beta_model(self, beta_model: BetaModel) -> Self {
        Self { beta_model, ..self }
    }
}

/// Sample mean with its standard error (`s / sqrt(n)`, zero for one sample).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeanStat {
    pub mean: f64,
    pub stderr: f64,
}

impl MeanStat {
    pub fn from_samples(samples: impl ExactSizeIterator<Item = f64> + Clone) -> Self {
        let n = samples.len();
        if n == 0 {
            return Self::default();
        }
        let mean = samples.clone().sum::<f64>() / n as f64;
        if n == 1 {
            return Self { mean, stderr: 0.0 };
        }
        let ss: f64 = samples.map(|x| (x - mean) * (x - mean)).sum();
        let var = ss / (n - 1) as f64;
        Self {
            mean,
            stderr: (var / n as f64).sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub trials: usize,
    pub seed: u64,
    pub mean_snr_npl: MeanStat,
    pub mean_snr_pl: MeanStat,
    pub mean_rate_npl: MeanStat,
    pub mean_rate_pl: MeanStat,
    /// `10 log10(mean_snr_npl / mean_snr_pl)`.
    pub loss_db: f64,
    /// Delta-method standard error of `loss_db` over paired trials.
    pub loss_stderr_db: f64,
    pub amp_first_npl: MeanStat,
    pub amp_first_pl: MeanStat,
    pub amp_second_npl: MeanStat,
    pub amp_second_pl: MeanStat,
    /// `cos(delta)` over every IRS-1 element of every trial.
    pub cos_error_first: MeanStat,
    pub cos_error_second: MeanStat,
    /// Loss obtained by feeding the simulated mean hop amplitudes through the
    /// closed-form SNR expression.
    pub mean_amplitude_loss_db: f64,
    /// Set when `trials == 1`; all standard errors are then zero.
    pub low_confidence: bool,
}

/// Realized hop amplitudes of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizedAmplitudes {
    pub a_npl: f64,
    pub a_pl: f64,
    pub b_npl: f64,
    pub b_pl: f64,
    /// Sum of `cos(delta)` over IRS-1 elements.
    pub cos_sum_first: f64,
    pub cos_sum_second: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub snr_npl: f64,
    pub snr_pl: f64,
    pub rate_npl: f64,
    pub rate_pl: f64,
    pub amplitudes: RealizedAmplitudes,
}

fn wrap_open_two_pi(phi: f64) -> f64 {
    // into (0, 2pi]
    let r = phi.rem_euclid(TAU);
    if r == 0.0 {
        TAU
    } else {
        r
    }
}

/// Continuous surface phases that bring every reflected path into phase with
/// the direct link of its hop.
pub fn ideal_phases(realization: &ChannelRealization) -> (Vec<f64>, Vec<f64>) {
    let align = |direct: Tap, incoming: &[Tap], outgoing: &[Tap]| -> Vec<f64> {
        incoming
            .iter()
            .zip(outgoing)
            .map(|(i, o)| wrap_open_two_pi(direct.phase - i.phase - o.phase))
            .collect()
    };
    (
        align(realization.h_sr, &realization.h_si, &realization.h_ir),
        align(realization.h_rd, &realization.h_ri, &realization.h_id),
    )
}

/// Complex received amplitude of one hop for given surface phases.
pub fn hop_response(
    direct_gain: f64,
    cascade_gain: f64,
    direct: Tap,
    incoming: &[Tap],
    outgoing: &[Tap],
    phases: &[f64],
) -> Complex64 {
    let reflected: Complex64 = incoming
        .iter()
        .zip(outgoing)
        .zip(phases)
        .map(|((i, o), &phi)| i.to_complex() * o.to_complex() * Complex64::from_polar(1.0, phi))
        .sum();
    direct_gain.sqrt() * direct.to_complex() + cascade_gain.sqrt() * reflected
}

/// Magnitude of the first hop when every IRS-1 element is off its ideal
/// phase by `errors[n]`.
pub fn first_hop_amplitude(
    realization: &ChannelRealization,
    gains: &LinkGains,
    errors: &[f64],
) -> f64 {
    let (ideal, _) = ideal_phases(realization);
    let phases: Vec<f64> = ideal.iter().zip(errors).map(|(p, e)| p + e).collect();
    hop_response(
        gains.g_sr,
        gains.g_sir,
        realization.h_sr,
        &realization.h_si,
        &realization.h_ir,
        &phases,
    )
    .norm()
}

pub fn second_hop_amplitude(
    realization: &ChannelRealization,
    gains: &LinkGains,
    errors: &[f64],
) -> f64 {
    let (_, ideal) = ideal_phases(realization);
    let phases: Vec<f64> = ideal.iter().zip(errors).map(|(p, e)| p + e).collect();
    hop_response(
        gains.g_rd,
        gains.g_rid,
        realization.h_rd,
        &realization.h_ri,
        &realization.h_id,
        &phases,
    )
    .norm()
}

/// Phases actually applied by a surface and the resulting errors.
fn applied_phases<R: Rng + ?Sized>(
    ideal: &[f64],
    spec: QuantizerSpec,
    model: ErrorModel,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    ideal
        .iter()
        .map(|&phi| match model {
            ErrorModel::Grid => quantize_phase(phi, spec),
            ErrorModel::Uniform => {
                let delta = sample_phase_error(spec, rng);
                (phi + delta, delta)
            }
        })
        .unzip()
}

/// Hop amplitudes with ideal and with quantized phases on the same channels.
pub fn realized_amplitudes<R: Rng + ?Sized>(
    realization: &ChannelRealization,
    gains: &LinkGains,
    k1: QuantizerSpec,
    k2: QuantizerSpec,
    error_model: ErrorModel,
    rng: &mut R,
) -> RealizedAmplitudes {
    let r = realization;
    let (ideal1, ideal2) = ideal_phases(r);
    let (applied1, err1) = applied_phases(&ideal1, k1, error_model, rng);
    let (applied2, err2) = applied_phases(&ideal2, k2, error_model, rng);

    let first = |phases: &[f64]| {
        hop_response(gains.g_sr, gains.g_sir, r.h_sr, &r.h_si, &r.h_ir, phases).norm()
    };
    let second = |phases: &[f64]| {
        hop_response(gains.g_rd, gains.g_rid, r.h_rd, &r.h_ri, &r.h_id, phases).norm()
    };

    RealizedAmplitudes {
        a_npl: first(&ideal1),
        a_pl: first(&applied1),
        b_npl: second(&ideal2),
        b_pl: second(&applied2),
        cos_sum_first: err1.iter().map(|d| d.cos()).sum(),
        cos_sum_second: err2.iter().map(|d| d.cos()).sum(),
    }
}

/// End-to-end SNR for hop amplitudes `a`, `b` and relay gain `beta`:
/// `beta^2 P_r P_s a^2 b^2 / (beta^2 P_r b^2 sigma_r^2 + sigma_d^2)`.
pub fn snr_from_amplitudes(params: &SystemParams, a: f64, b: f64, beta: f64) -> f64 {
    let pr = params.pr_mw();
    let signal = beta * beta * pr * params.ps_mw() * a * a * b * b;
    signal / (beta * beta * pr * b * b * params.sigma_r2_mw() + params.sigma_d2_mw())
}

/// Per-trial SNR and rate with continuous and quantized phases.
pub fn trial_snr<R: Rng + ?Sized>(
    realization: &ChannelRealization,
    params: &SystemParams,
    gains: &LinkGains,
    config: &McConfig,
    rng: &mut R,
) -> TrialOutcome {
    let amps = realized_amplitudes(
        realization,
        gains,
        params.k1_bits,
        params.k2_bits,
        config.error_model,
        rng,
    );
    let beta = |mode: Mode, realized: f64| match config.beta_model {
        BetaModel::Instantaneous => analytic::relay_gain_for_amplitude(params, realized),
        BetaModel::Averaged => analytic::relay_gain(mode, params, gains),
    };
    let snr_npl = snr_from_amplitudes(params, amps.a_npl, amps.b_npl, beta(Mode::Npl, amps.a_npl));
    let snr_pl = snr_from_amplitudes(params, amps.a_pl, amps.b_pl, beta(Mode::Pl, amps.a_pl));
    TrialOutcome {
        snr_npl,
        snr_pl,
        rate_npl: analytic::rate_from_snr(snr_npl),
        rate_pl: analytic::rate_from_snr(snr_pl),
        amplitudes: amps,
    }
}

/// The random stream of trial `index`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Trial `index` in isolation, reproducible from `(seed, index)`.
pub fn run_trial(
    params: &SystemParams,
    gains: &LinkGains,
    config: &McConfig,
    index: u64,
) -> Result<TrialOutcome> {
    let mut rng = trial_rng(config.seed, index);
    let realization = ChannelRealization::sample(params, &mut rng)?;
    Ok(trial_snr(&realization, params, gains, config, &mut rng))
}

pub fn mc_estimate(
    params: &SystemParams,
    gains: &LinkGains,
    config: &McConfig,
) -> Result<McEstimate> {
    if config.trials == 0 {
        return Err(Error::invalid("trials", "must be >= 1"));
    }
    let outcomes = (0..config.trials as u64)
        .into_par_iter()
        .map(|i| run_trial(params, gains, config, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(summarize(params, config, &outcomes))
}

fn summarize(params: &SystemParams, config: &McConfig, outcomes: &[TrialOutcome]) -> McEstimate {
    let stat = |f: fn(&TrialOutcome) -> f64| MeanStat::from_samples(outcomes.iter().map(f));
    let mean_snr_npl = stat(|o| o.snr_npl);
    let mean_snr_pl = stat(|o| o.snr_pl);

    let t = outcomes.len();
    let loss_stderr_db = if t > 1 {
        let paired = MeanStat::from_samples(
            outcomes
                .iter()
                .map(|o| o.snr_npl / mean_snr_npl.mean - o.snr_pl / mean_snr_pl.mean),
        );
        10.0 / LN_10 * paired.stderr
    } else {
        0.0
    };

    let per_element = |n: usize, f: fn(&TrialOutcome) -> f64| {
        if n == 0 {
            return MeanStat::default();
        }
        // trial-level averages are i.i.d.; their spread gives the standard error
        MeanStat::from_samples(outcomes.iter().map(move |o| f(o) / n as f64))
    };

    let amp_first_npl = stat(|o| o.amplitudes.a_npl);
    let amp_first_pl = stat(|o| o.amplitudes.a_pl);
    let amp_second_npl = stat(|o| o.amplitudes.b_npl);
    let amp_second_pl = stat(|o| o.amplitudes.b_pl);

    let plug = |a: f64, b: f64| {
        snr_from_amplitudes(params, a, b, analytic::relay_gain_for_amplitude(params, a))
    };
    let mean_amplitude_loss_db = linear_to_db(
        plug(amp_first_npl.mean, amp_second_npl.mean) / plug(amp_first_pl.mean, amp_second_pl.mean),
    );

    McEstimate {
        trials: t,
        seed: config.seed,
        mean_snr_npl,
        mean_snr_pl,
        mean_rate_npl: stat(|o| o.rate_npl),
        mean_rate_pl: stat(|o| o.rate_pl),
        loss_db: linear_to_db(mean_snr_npl.mean / mean_snr_pl.mean),
        loss_stderr_db,
        amp_first_npl,
        amp_first_pl,
        amp_second_npl,
        amp_second_pl,
        cos_error_first: per_element(params.n_elements, |o| o.amplitudes.cos_sum_first),
        cos_error_second: per_element(params.m_elements, |o| o.amplitudes.cos_sum_second),
        mean_amplitude_loss_db,
        low_confidence: t == 1,
    }
}
