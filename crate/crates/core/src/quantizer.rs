//! k-bit discrete phase shifters.
//!
//! A k-bit shifter can realize the `2^k` phases `(2i - 1) * pi / 2^k`,
//! `i = 1..=2^k`. Rounding an ideal phase to the nearest grid point leaves an
//! error bounded by half the grid spacing, `pi / 2^k`. Averaging `cos` of a
//! uniform error over that interval gives the unnormalized `sinc(pi / 2^k)`
//! attenuation of a coherent sum; [`taylor_factor`] is its second-order
//! truncation.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest resolution for which [`phase_set`] will materialize the grid.
pub const MAX_GRID_BITS: u32 = 24;

/// Phase-shifter resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QuantizerSpec {
    /// `k`-bit shifter, `k >= 1`.
    Bits(u32),
    /// Ideal continuous phase control (no quantization error).
    Continuous,
}

impl QuantizerSpec {
    pub fn validate(self, key: &str) -> Result<Self> {
        match self {
            QuantizerSpec::Bits(0) => Err(Error::invalid(key, "bit count must be >= 1")),
            QuantizerSpec::Bits(k) if k > 62 => Err(Error::invalid(key, "bit count must be <= 62")),
            spec => Ok(spec),
        }
    }

    /// Half the grid spacing, `pi / 2^k`; zero for continuous phases.
    pub fn half_spacing(self) -> f64 {
        match self {
            QuantizerSpec::Bits(k) => PI / 2f64.powi(k as i32),
            QuantizerSpec::Continuous => 0.0,
        }
    }

    pub fn is_continuous(self) -> bool {
        matches!(self, QuantizerSpec::Continuous)
    }
}

impl fmt::Display for QuantizerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuantizerSpec::Bits(k) => write!(f, "{k}"),
            QuantizerSpec::Continuous => f.write_str("inf"),
        }
    }
}

impl FromStr for QuantizerSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "continuous" | "∞" => Ok(QuantizerSpec::Continuous),
            other => match other.parse::<u32>() {
                Ok(0) => Err("bit count must be >= 1".into()),
                Ok(k) => Ok(QuantizerSpec::Bits(k)),
                Err(_) => Err(format!("expected a positive integer or `inf`, got `{s}`")),
            },
        }
    }
}

/// Reduce an angle to `[0, 2pi)`.
pub fn wrap_two_pi(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Reduce an angle to `[-pi, pi]`.
pub fn wrap_pi(phi: f64) -> f64 {
    let r = wrap_two_pi(phi);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// The ordered feasible phase set of a `k`-bit shifter.
pub fn phase_set(spec: QuantizerSpec) -> Result<Vec<f64>> {
    let k = match spec {
        QuantizerSpec::Bits(k) if (1..=MAX_GRID_BITS).contains(&k) => k,
        QuantizerSpec::Bits(k) => {
            return Err(Error::invalid(
                "bits",
                format!("grid of {k} bits is not materializable (1..={MAX_GRID_BITS})"),
            ))
        }
        QuantizerSpec::Continuous => {
            return Err(Error::invalid(
                "bits",
                "continuous phases have no finite grid",
            ))
        }
    };
    let levels = 1u64 << k;
    let denom = levels as f64;
    Ok((1..=levels)
        .map(|i| (2 * i - 1) as f64 * PI / denom)
        .collect())
}

/// Round `phi` to the nearest feasible phase under circular distance.
///
/// Returns `(phi_bar, delta)` with `delta = wrap(phi_bar - phi)`, so
/// `|delta| <= pi / 2^k`. Equidistant candidates resolve to the smaller phase.
/// Continuous phases pass through unchanged with zero error.
pub fn quantize_phase(phi: f64, spec: QuantizerSpec) -> (f64, f64) {
    let k = match spec {
        QuantizerSpec::Bits(k) => k,
        QuantizerSpec::Continuous => return (phi, 0.0),
    };
    let levels = 2f64.powi(k as i32);
    let spacing = TAU / levels;
    let offset = PI / levels;
    let reduced = wrap_two_pi(phi);

    // Position on the grid in units of spacing; grid point i sits at i.
    let t = (reduced - offset) / spacing;
    let lower = t.floor();
    let frac = t - lower;
    let idx = |i: f64| i.rem_euclid(levels);
    let (lo, hi) = (idx(lower), idx(lower + 1.0));
    let chosen = if frac < 0.5 {
        lo
    } else if frac > 0.5 {
        hi
    } else {
        lo.min(hi)
    };
    let phi_bar = offset + chosen * spacing;
    (phi_bar, wrap_pi(phi_bar - reduced))
}

/// Draw a quantization error from the uniform model on `[-pi/2^k, pi/2^k]`.
pub fn sample_phase_error<R: Rng + ?Sized>(spec: QuantizerSpec, rng: &mut R) -> f64 {
    match spec {
        QuantizerSpec::Continuous => 0.0,
        QuantizerSpec::Bits(_) => {
            let half = spec.half_spacing();
            half * (2.0 * rng.gen::<f64>() - 1.0)
        }
    }
}

/// Expected coherent attenuation `E[cos(delta)] = sin(x) / x`, `x = pi / 2^k`.
pub fn sinc_factor(spec: QuantizerSpec) -> f64 {
    match spec {
        QuantizerSpec::Continuous => 1.0,
        QuantizerSpec::Bits(_) => {
            let x = spec.half_spacing();
            if x < SERIES_CUTOFF {
                1.0 - sinc_deficit(spec)
            } else {
                x.sin() / x
            }
        }
    }
}

const SERIES_CUTOFF: f64 = 0.1;

/// `1 - sinc_factor`, accurate to full relative precision for small `x`
/// where the factor itself is within an ulp of one.
pub fn sinc_deficit(spec: QuantizerSpec) -> f64 {
    let x = spec.half_spacing();
    if x == 0.0 {
        return 0.0;
    }
    if x < SERIES_CUTOFF {
        // x^2/3! - x^4/5! + x^6/7! - x^8/9!; next term < 1e-20 relative
        let x2 = x * x;
        x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)))
    } else {
        1.0 - x.sin() / x
    }
}

/// `1 - taylor_factor`, i.e. `x^2 / 6`.
pub fn taylor_deficit(spec: QuantizerSpec) -> f64 {
    let x = spec.half_spacing();
    x * x / 6.0
}

/// Second-order Taylor truncation of [`sinc_factor`]: `1 - x^2 / 6`.
pub fn taylor_factor(spec: QuantizerSpec) -> f64 {
    match spec {
        QuantizerSpec::Continuous => 1.0,
        QuantizerSpec::Bits(_) => {
            let x = spec.half_spacing();
            1.0 - x * x / 6.0
        }
    }
}
