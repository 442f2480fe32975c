//! Closed-form destination SNR, SNR loss and achievable rate.
//!
//! Every random channel magnitude is replaced by its Rayleigh mean and the
//! coherent sum over `N` (or `M`) reflecting elements by `N` times the mean
//! product, scaled by the expected quantization attenuation `F(k)`:
//!
//! * [`Mode::Npl`]: continuous phases, `F = 1`;
//! * [`Mode::Pl`]: `F = sinc(pi / 2^k)`;
//! * [`Mode::Apl`]: `F = 1 - (pi / 2^k)^2 / 6`.
//!
//! The relay gain, the four composite terms and the SNR are then evaluated on
//! those mean amplitudes. Powers are in mW.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::params::{linear_to_db, LinkGains, SystemParams};
use crate::quantizer::{sinc_factor, taylor_factor, QuantizerSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// No performance loss: ideal continuous phases.
    Npl,
    /// Performance loss from k-bit quantization.
    Pl,
    /// Taylor-approximate performance loss.
    Apl,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Npl, Mode::Pl, Mode::Apl];

    /// Attenuation applied to coherent sums over a surface with `spec`.
    pub fn factor(self, spec: QuantizerSpec) -> f64 {
        match self {
            Mode::Npl => 1.0,
            Mode::Pl => sinc_factor(spec),
            Mode::Apl => taylor_factor(spec),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Mode::Npl => "npl",
            Mode::Pl => "pl",
            Mode::Apl => "apl",
        }
    }
}

/// The four quantities from which the destination SNR is assembled: three
/// signal cross terms and the effective noise power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeTerms {
    /// IRS-1 path through the relay's direct link to D.
    pub t1: f64,
    /// Direct S -> RS link through IRS-2.
    pub t2: f64,
    /// IRS-1 path through IRS-2.
    pub t3: f64,
    /// Forwarded relay noise plus destination noise, mW.
    pub t4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticResult {
    pub mode: Mode,
    /// Mean amplitude of the combined S -> RS link.
    pub a_first_hop: f64,
    /// Mean amplitude of the combined RS -> D link.
    pub b_second_hop: f64,
    pub beta: f64,
    pub terms: CompositeTerms,
    pub snr: f64,
    pub snr_db: f64,
    /// bits/s/Hz
    pub rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossReport {
    pub loss_pl_db: f64,
    pub loss_apl_db: f64,
    pub rate_loss_pl: f64,
    pub rate_loss_apl: f64,
}

/// `sqrt(pi/2 * g_sr) * alpha_sr + sqrt(g_sir) * N * F(k1) * (pi/2) * alpha_ir * alpha_si`.
pub fn mean_amplitude_first_hop(mode: Mode, params: &SystemParams, gains: &LinkGains) -> f64 {
    let f1 = mode.factor(params.k1_bits);
    (FRAC_PI_2 * gains.g_sr).sqrt() * params.alpha_sr
        + gains.g_sir.sqrt()
            * params.n_elements as f64
            * f1
            * FRAC_PI_2
            * params.alpha_ir
            * params.alpha_si
}

/// Second-hop analogue of [`mean_amplitude_first_hop`] with `M` and `k2`.
pub fn mean_amplitude_second_hop(mode: Mode, params: &SystemParams, gains: &LinkGains) -> f64 {
    let f2 = mode.factor(params.k2_bits);
    (FRAC_PI_2 * gains.g_rd).sqrt() * params.alpha_rd
        + gains.g_rid.sqrt()
            * params.m_elements as f64
            * f2
            * FRAC_PI_2
            * params.alpha_id
            * params.alpha_ri
}

/// AF gain for a given first-hop amplitude: `sqrt(P_r) / sqrt(P_s A^2 + sigma_r^2)`,
/// or with `normalized_relay` the same without the `sqrt(P_r)`.
pub fn relay_gain_for_amplitude(params: &SystemParams, a: f64) -> f64 {
    let denom = (params.ps_mw() * a * a + params.sigma_r2_mw()).sqrt();
    if params.normalized_relay {
        1.0 / denom
    } else {
        params.pr_mw().sqrt() / denom
    }
}

pub fn relay_gain(mode: Mode, params: &SystemParams, gains: &LinkGains) -> f64 {
    relay_gain_for_amplitude(params, mean_amplitude_first_hop(mode, params, gains))
}

/// `sqrt(g_sr g_rd) (pi/2) alpha_rd alpha_sr`: the doubly direct signal term.
pub fn direct_term(params: &SystemParams, gains: &LinkGains) -> f64 {
    (gains.g_sr * gains.g_rd).sqrt() * FRAC_PI_2 * params.alpha_rd * params.alpha_sr
}

pub fn composite_terms(mode: Mode, params: &SystemParams, gains: &LinkGains) -> CompositeTerms {
    let f1 = mode.factor(params.k1_bits);
    let f2 = mode.factor(params.k2_bits);
    let n = params.n_elements as f64;
    let m = params.m_elements as f64;
    let half_pi_3_2 = FRAC_PI_2.powf(1.5);
    let p = params;

    let t1 = (gains.g_sir * gains.g_rd).sqrt()
        * n
        * half_pi_3_2
        * p.alpha_rd
        * p.alpha_ir
        * p.alpha_si
        * f1;
    let t2 = (gains.g_sr * gains.g_rid).sqrt()
        * m
        * half_pi_3_2
        * p.alpha_id
        * p.alpha_ri
        * p.alpha_sr
        * f2;
    let t3 = (gains.g_sir * gains.g_rid).sqrt()
        * m
        * n
        * (PI * PI / 4.0)
        * p.alpha_id
        * p.alpha_ri
        * p.alpha_ir
        * p.alpha_si
        * f1
        * f2;

    let beta = relay_gain(mode, params, gains);
    let b = mean_amplitude_second_hop(mode, params, gains);
    let t4 = beta * beta * params.pr_mw() * b * b * params.sigma_r2_mw() + params.sigma_d2_mw();
    CompositeTerms { t1, t2, t3, t4 }
}

/// Destination SNR, `beta^2 P_r P_s (direct + t1 + t2 + t3)^2 / t4`.
pub fn snr_destination(mode: Mode, params: &SystemParams, gains: &LinkGains) -> f64 {
    evaluate(mode, params, gains).snr
}

pub fn achievable_rate(mode: Mode, params: &SystemParams, gains: &LinkGains) -> f64 {
    rate_from_snr(snr_destination(mode, params, gains))
}

/// `log2(1 + snr)`, with no half-duplex prefactor.
pub fn rate_from_snr(snr: f64) -> f64 {
    snr.ln_1p() / std::f64::consts::LN_2
}

pub fn evaluate(mode: Mode, params: &SystemParams, gains: &LinkGains) -> AnalyticResult {
    let a = mean_amplitude_first_hop(mode, params, gains);
    let b = mean_amplitude_second_hop(mode, params, gains);
    let beta = relay_gain_for_amplitude(params, a);
    let terms = composite_terms(mode, params, gains);
    let signal = direct_term(params, gains) + terms.t1 + terms.t2 + terms.t3;
    let snr = beta * beta * params.pr_mw() * params.ps_mw() * signal * signal / terms.t4;
    AnalyticResult {
        mode,
        a_first_hop: a,
        b_second_hop: b,
        beta,
        terms,
        snr,
        snr_db: linear_to_db(snr),
        rate: rate_from_snr(snr),
    }
}

/// Results for [`Mode::ALL`], in that order.
pub fn evaluate_all(params: &SystemParams, gains: &LinkGains) -> [AnalyticResult; 3] {
    Mode::ALL.map(|mode| evaluate(mode, params, gains))
}

pub fn snr_loss(params: &SystemParams, gains: &LinkGains) -> LossReport {
    loss_report(&evaluate_all(params, gains))
}

pub fn loss_report(results: &[AnalyticResult; 3]) -> LossReport {
    let [npl, pl, apl] = results;
    LossReport {
        loss_pl_db: linear_to_db(npl.snr / pl.snr),
        loss_apl_db: linear_to_db(npl.snr / apl.snr),
        rate_loss_pl: npl.rate - pl.rate,
        rate_loss_apl: npl.rate - apl.rate,
    }
}
