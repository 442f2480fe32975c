//! Rayleigh channel taps.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// One complex channel coefficient in polar form. Phase lies in `(0, 2pi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tap {
    pub magnitude: f64,
    pub phase: f64,
}

impl Tap {
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
}

/// Every channel coefficient of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// Source -> relay.
    pub h_sr: Tap,
    /// Relay -> destination.
    pub h_rd: Tap,
    /// Source -> IRS-1, one per element.
    pub h_si: Vec<Tap>,
    /// IRS-1 -> relay.
    pub h_ir: Vec<Tap>,
    /// Relay -> IRS-2.
    pub h_ri: Vec<Tap>,
    /// IRS-2 -> destination.
    pub h_id: Vec<Tap>,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            "alpha",
            format!("Rayleigh scale must be > 0, got {alpha}"),
        ))
    }
}

/// Inverse Rayleigh CDF: `alpha * sqrt(-2 ln(1 - u))` for `u` in `[0, 1)`.
pub fn rayleigh_from_uniform(alpha: f64, u: f64) -> f64 {
    alpha * (-2.0 * (1.0 - u).ln()).sqrt()
}

pub fn sample_rayleigh<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(rayleigh_from_uniform(alpha, rng.gen::<f64>()))
}

fn draw_tap<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> Tap {
    let magnitude = rayleigh_from_uniform(alpha, rng.gen::<f64>());
    // gen() is in [0, 1), so 1 - u is in (0, 1]
    let phase = TAU * (1.0 - rng.gen::<f64>());
    Tap { magnitude, phase }
}

/// `count` independent taps with Rayleigh magnitude and uniform phase.
pub fn sample_channel_vector<R: Rng + ?Sized>(
    count: usize,
    alpha: f64,
    rng: &mut R,
) -> Result<Vec<Tap>> {
    check_alpha(alpha)?;
    Ok((0..count).map(|_| draw_tap(alpha, rng)).collect())
}

/// `E|h| = alpha * sqrt(pi / 2)`.
pub fn rayleigh_mean(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(alpha * FRAC_PI_2.sqrt())
}

/// `E[|h1| |h2|]` for independent magnitudes: `(pi / 2) * alpha1 * alpha2`.
pub fn rayleigh_product_mean(alpha1: f64, alpha2: f64) -> Result<f64> {
    check_alpha(alpha1)?;
    check_alpha(alpha2)?;
    Ok(FRAC_PI_2 * alpha1 * alpha2)
}

impl ChannelRealization {
    /// Draw all taps in a fixed order: `h_sr`, `h_rd`, `h_si`, `h_ir`, `h_ri`,
    /// `h_id`, each tap consuming a magnitude uniform then a phase uniform.
    pub fn sample<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> Result<Self> {
        for (_, a) in params.alphas() {
            check_alpha(a)?;
        }
        let (n, m) = (params.n_elements, params.m_elements);
        Ok(Self {
            h_sr: draw_tap(params.alpha_sr, rng),
            h_rd: draw_tap(params.alpha_rd, rng),
            h_si: sample_channel_vector(n, params.alpha_si, rng)?,
            h_ir: sample_channel_vector(n, params.alpha_ir, rng)?,
            h_ri: sample_channel_vector(m, params.alpha_ri, rng)?,
            h_id: sample_channel_vector(m, params.alpha_id, rng)?,
        })
    }

    pub fn n_elements(&self) -> usize {
        self.h_si.len()
    }

    pub fn m_elements(&self) -> usize {
        self.h_ri.len()
    }
}
