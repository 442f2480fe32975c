//! System configuration, unit conversion and link budget.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::Path;

use crate::error::{Error, Result};
use crate::quantizer::QuantizerSpec;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Powers are carried in milliwatts throughout the crate.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    db_to_linear(dbm)
}

/// Log-distance path loss as a linear power gain,
/// `10^((pl0_db - 10 * exponent * log10(d / 1 m)) / 10)`.
pub fn path_loss_linear(distance_m: f64, exponent: f64, pl0_db: f64) -> Result<f64> {
    if !distance_m.is_finite() || distance_m <= 0.0 {
        return Err(Error::invalid(
            "distance",
            format!("must be positive and finite, got {distance_m}"),
        ));
    }
    Ok(db_to_linear(pl0_db - 10.0 * exponent * distance_m.log10()))
}

/// Node placement and path-loss model.
///
/// Angles are bearings measured at the source (for IRS-1 and the relay) and
/// at the relay (for IRS-2 and the destination); they only serve to derive
/// the IRS-to-relay and IRS-to-destination distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub d_si: f64,
    pub d_ri: f64,
    pub d_sr: f64,
    pub d_rd: f64,
    pub theta_si: f64,
    pub theta_ri: f64,
    pub theta_sr: f64,
    pub theta_rd: f64,
    pub gamma_sr: f64,
    pub gamma_si: f64,
    pub gamma_ir: f64,
    pub gamma_ri: f64,
    pub gamma_id: f64,
    pub gamma_rd: f64,
    pub pl0_db: f64,
}

impl Default for Geometry {
    fn default() -> Self {
        Self {
            d_si: 50.0,
            d_ri: 50.0,
            d_sr: 150.0,
            d_rd: 150.0,
            theta_si: FRAC_PI_4,
            theta_ri: FRAC_PI_4,
            theta_sr: FRAC_PI_2,
            theta_rd: FRAC_PI_2,
            gamma_sr: 3.5,
            gamma_si: 2.6,
            gamma_ir: 2.6,
            gamma_ri: 2.6,
            gamma_id: 2.6,
            gamma_rd: 3.5,
            pl0_db: -30.0,
        }
    }
}

impl Geometry {
    pub fn validate(&self) -> Result<()> {
        for (key, d) in [
            ("d_si", self.d_si),
            ("d_ri", self.d_ri),
            ("d_sr", self.d_sr),
            ("d_rd", self.d_rd),
        ] {
            if !d.is_finite() || d <= 0.0 {
                return Err(Error::invalid(
                    key,
                    format!("distance must be > 0, got {d}"),
                ));
            }
        }
        for (key, g) in [
            ("gamma_sr", self.gamma_sr),
            ("gamma_si", self.gamma_si),
            ("gamma_ir", self.gamma_ir),
            ("gamma_ri", self.gamma_ri),
            ("gamma_id", self.gamma_id),
            ("gamma_rd", self.gamma_rd),
        ] {
            if !(1.5..=6.0).contains(&g) {
                return Err(Error::invalid(
                    key,
                    format!("exponent must lie in [1.5, 6], got {g}"),
                ));
            }
        }
        for (key, t) in [
            ("theta_si", self.theta_si),
            ("theta_ri", self.theta_ri),
            ("theta_sr", self.theta_sr),
            ("theta_rd", self.theta_rd),
            ("pl0_db", self.pl0_db),
        ] {
            if !t.is_finite() {
                return Err(Error::invalid(key, "must be finite"));
            }
        }
        Ok(())
    }

    /// Distances IRS-1 -> relay and IRS-2 -> destination by the law of cosines.
    pub fn derive_distances(&self) -> (f64, f64) {
        let side = |a: f64, b: f64, angle: f64| {
            (a * a + b * b - 2.0 * a * b * angle.cos()).max(0.0).sqrt()
        };
        (
            side(self.d_si, self.d_sr, self.theta_sr - self.theta_si),
            side(self.d_ri, self.d_rd, self.theta_rd - self.theta_ri),
        )
    }
}

/// Linear power gains of the six links plus the cascaded products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    pub g_sr: f64,
    pub g_si: f64,
    pub g_ir: f64,
    pub g_ri: f64,
    pub g_id: f64,
    pub g_rd: f64,
    /// `g_si * g_ir`
    pub g_sir: f64,
    /// `g_ri * g_id`
    pub g_rid: f64,
}

impl LinkGains {
    pub fn new(g_sr: f64, g_si: f64, g_ir: f64, g_ri: f64, g_id: f64, g_rd: f64) -> Self {
        Self {
            g_sr,
            g_si,
            g_ir,
            g_ri,
            g_id,
            g_rd,
            g_sir: g_si * g_ir,
            g_rid: g_ri * g_id,
        }
    }
}

/// Full description of one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub ps_dbm: f64,
    pub pr_dbm: f64,
    pub sigma_r_dbm: f64,
    pub sigma_d_dbm: f64,
    /// Elements on IRS-1 (source side).
    pub n_elements: usize,
    /// Elements on IRS-2 (destination side).
    pub m_elements: usize,
    pub k1_bits: QuantizerSpec,
    pub k2_bits: QuantizerSpec,
    pub alpha_sr: f64,
    pub alpha_si: f64,
    pub alpha_ir: f64,
    pub alpha_ri: f64,
    pub alpha_id: f64,
    pub alpha_rd: f64,
    /// Drop the `sqrt(P_r)` from the relay gain so the relay output has unit
    /// power before the transmit amplitude is applied. Off by default.
    pub normalized_relay: bool,
    pub geometry: Geometry,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            ps_dbm: 30.0,
            pr_dbm: 35.0,
            sigma_r_dbm: -90.0,
            sigma_d_dbm: -90.0,
            n_elements: 256,
            m_elements: 256,
            k1_bits: QuantizerSpec::Bits(2),
            k2_bits: QuantizerSpec::Bits(2),
            alpha_sr: 0.5,
            alpha_si: 0.5,
            alpha_ir: 0.5,
            alpha_ri: 0.5,
            alpha_id: 0.5,
            alpha_rd: 0.5,
            normalized_relay: false,
            geometry: Geometry::default(),
        }
    }
}

/// Every key accepted in a config file.
pub const CONFIG_KEYS: &[&str] = &[
    "ps_dbm",
    "pr_dbm",
    "sigma_r_dbm",
    "sigma_d_dbm",
    "n_elements",
    "m_elements",
    "k1_bits",
    "k2_bits",
    "alpha_sr",
    "alpha_si",
    "alpha_ir",
    "alpha_ri",
    "alpha_id",
    "alpha_rd",
    "normalized_relay",
    "d_si",
    "d_ri",
    "d_sr",
    "d_rd",
    "theta_si",
    "theta_ri",
    "theta_sr",
    "theta_rd",
    "gamma_sr",
    "gamma_si",
    "gamma_ir",
    "gamma_ri",
    "gamma_id",
    "gamma_rd",
    "pl0_db",
];

impl SystemParams {
    pub fn ps_mw(&self) -> f64 {
        dbm_to_mw(self.ps_dbm)
    }

    pub fn pr_mw(&self) -> f64 {
        dbm_to_mw(self.pr_dbm)
    }

    /// Noise variance at the relay, mW.
    pub fn sigma_r2_mw(&self) -> f64 {
        dbm_to_mw(self.sigma_r_dbm)
    }

    /// Noise variance at the destination, mW.
    pub fn sigma_d2_mw(&self) -> f64 {
        dbm_to_mw(self.sigma_d_dbm)
    }

    pub fn alphas(&self) -> [(&'static str, f64); 6] {
        [
            ("alpha_sr", self.alpha_sr),
            ("alpha_si", self.alpha_si),
            ("alpha_ir", self.alpha_ir),
            ("alpha_ri", self.alpha_ri),
            ("alpha_id", self.alpha_id),
            ("alpha_rd", self.alpha_rd),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (key, p) in [
            ("ps_dbm", self.ps_dbm),
            ("pr_dbm", self.pr_dbm),
            ("sigma_r_dbm", self.sigma_r_dbm),
            ("sigma_d_dbm", self.sigma_d_dbm),
        ] {
            if !p.is_finite() {
                return Err(Error::invalid(key, "power must be finite"));
            }
        }
        if self.n_elements == 0 {
            return Err(Error::invalid("n_elements", "must be >= 1"));
        }
        if self.m_elements == 0 {
            return Err(Error::invalid("m_elements", "must be >= 1"));
        }
        self.k1_bits.validate("k1_bits")?;
        self.k2_bits.validate("k2_bits")?;
        for (key, a) in self.alphas() {
            if !a.is_finite() || a <= 0.0 {
                return Err(Error::invalid(
                    key,
                    format!("Rayleigh scale must be > 0, got {a}"),
                ));
            }
        }
        self.geometry.validate()
    }

    /// Same configuration with IRS sizes and resolutions replaced.
    pub fn with_surfaces(&self, n: usize, m: usize, k1: QuantizerSpec, k2: QuantizerSpec) -> Self {
        Self {
            n_elements: n,
            m_elements: m,
            k1_bits: k1,
            k2_bits: k2,
            ..self.clone()
        }
    }

    /// Parse a flat TOML table. Missing keys keep their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| Error::ConfigSyntax(e.to_string()))?;
        let mut params = Self::default();
        for (key, value) in &table {
            params.set(key, value)?;
        }
        params.validate()?;
        Ok(params)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::ConfigRead {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    /// Render as a config file that [`from_toml_str`](Self::from_toml_str)
    /// reads back to the same value.
    pub fn to_toml_string(&self) -> String {
        CONFIG_KEYS
            .iter()
            .map(|k| format!("{k} = {}\n", self.render_value(k)))
            .collect()
    }

    fn render_value(&self, key: &str) -> String {
        let float = |x: f64| format!("{x:?}");
        let g = &self.geometry;
        match key {
            "n_elements" => self.n_elements.to_string(),
            "m_elements" => self.m_elements.to_string(),
            "k1_bits" => render_bits(self.k1_bits),
            "k2_bits" => render_bits(self.k2_bits),
            "normalized_relay" => self.normalized_relay.to_string(),
            "ps_dbm" => float(self.ps_dbm),
            "pr_dbm" => float(self.pr_dbm),
            "sigma_r_dbm" => float(self.sigma_r_dbm),
            "sigma_d_dbm" => float(self.sigma_d_dbm),
            "alpha_sr" => float(self.alpha_sr),
            "alpha_si" => float(self.alpha_si),
            "alpha_ir" => float(self.alpha_ir),
            "alpha_ri" => float(self.alpha_ri),
            "alpha_id" => float(self.alpha_id),
            "alpha_rd" => float(self.alpha_rd),
            "d_si" => float(g.d_si),
            "d_ri" => float(g.d_ri),
            "d_sr" => float(g.d_sr),
            "d_rd" => float(g.d_rd),
            "theta_si" => float(g.theta_si),
            "theta_ri" => float(g.theta_ri),
            "theta_sr" => float(g.theta_sr),
            "theta_rd" => float(g.theta_rd),
            "gamma_sr" => float(g.gamma_sr),
            "gamma_si" => float(g.gamma_si),
            "gamma_ir" => float(g.gamma_ir),
            "gamma_ri" => float(g.gamma_ri),
            "gamma_id" => float(g.gamma_id),
            "gamma_rd" => float(g.gamma_rd),
            "pl0_db" => float(g.pl0_db),
            _ => unreachable!("unlisted key {key}"),
        }
    }

    fn set(&mut self, key: &str, value: &toml::Value) -> Result<()> {
        let g = &mut self.geometry;
        let slot: &mut f64 = match key {
            "n_elements" => {
                self.n_elements = as_count(key, value)?;
                return Ok(());
            }
            "m_elements" => {
                self.m_elements = as_count(key, value)?;
                return Ok(());
            }
            "k1_bits" => {
                self.k1_bits = as_bits(key, value)?;
                return Ok(());
            }
            "k2_bits" => {
                self.k2_bits = as_bits(key, value)?;
                return Ok(());
            }
            "normalized_relay" => {
                self.normalized_relay = value.as_bool().ok_or_else(|| Error::Config {
                    key: key.into(),
                    reason: "expected true or false".into(),
                })?;
                return Ok(());
            }
            "ps_dbm" => &mut self.ps_dbm,
            "pr_dbm" => &mut self.pr_dbm,
            "sigma_r_dbm" => &mut self.sigma_r_dbm,
            "sigma_d_dbm" => &mut self.sigma_d_dbm,
            "alpha_sr" => &mut self.alpha_sr,
            "alpha_si" => &mut self.alpha_si,
            "alpha_ir" => &mut self.alpha_ir,
            "alpha_ri" => &mut self.alpha_ri,
            "alpha_id" => &mut self.alpha_id,
            "alpha_rd" => &mut self.alpha_rd,
            "d_si" => &mut g.d_si,
            "d_ri" => &mut g.d_ri,
            "d_sr" => &mut g.d_sr,
            "d_rd" => &mut g.d_rd,
            "theta_si" => &mut g.theta_si,
            "theta_ri" => &mut g.theta_ri,
            "theta_sr" => &mut g.theta_sr,
            "theta_rd" => &mut g.theta_rd,
            "gamma_sr" => &mut g.gamma_sr,
            "gamma_si" => &mut g.gamma_si,
            "gamma_ir" => &mut g.gamma_ir,
            "gamma_ri" => &mut g.gamma_ri,
            "gamma_id" => &mut g.gamma_id,
            "gamma_rd" => &mut g.gamma_rd,
            "pl0_db" => &mut g.pl0_db,
            other => return Err(Error::UnknownKey(other.to_string())),
        };
        *slot = as_float(key, value)?;
        Ok(())
    }
}

fn render_bits(spec: QuantizerSpec) -> String {
    match spec {
        QuantizerSpec::Bits(k) => k.to_string(),
        QuantizerSpec::Continuous => "\"inf\"".to_string(),
    }
}

fn as_float(key: &str, value: &toml::Value) -> Result<f64> {
    match value {
        toml::Value::Float(x) => Ok(*x),
        toml::Value::Integer(i) => Ok(*i as f64),
        other => Err(Error::Config {
            key: key.into(),
            reason: format!("expected a number, got {}", other.type_str()),
        }),
    }
}

fn as_count(key: &str, value: &toml::Value) -> Result<usize> {
    match value {
        toml::Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        other => Err(Error::Config {
            key: key.into(),
            reason: format!("expected a non-negative integer, got {other}"),
        }),
    }
}

fn as_bits(key: &str, value: &toml::Value) -> Result<QuantizerSpec> {
    let parsed = match value {
        toml::Value::Integer(i) if *i >= 1 && *i <= u32::MAX as i64 => {
            Ok(QuantizerSpec::Bits(*i as u32))
        }
        toml::Value::Integer(i) => Err(format!("bit count must be >= 1, got {i}")),
        toml::Value::String(s) => s.parse::<QuantizerSpec>(),
        toml::Value::Float(x) if x.is_infinite() && *x > 0.0 => Ok(QuantizerSpec::Continuous),
        other => Err(format!("expected an integer or \"inf\", got {other}")),
    };
    parsed.map_err(|reason| Error::Config {
        key: key.into(),
        reason,
    })
}

/// Path-loss gains of all six links. Derived distances that collapse to zero
/// are reported under their derived names (`d_ir`, `d_id`).
pub fn link_gains(params: &SystemParams) -> Result<LinkGains> {
    let g = &params.geometry;
    let (d_ir, d_id) = g.derive_distances();
    let gain = |key: &str, d: f64, exponent: f64| {
        path_loss_linear(d, exponent, g.pl0_db).map_err(|_| {
            Error::invalid(
                key,
                format!("distance must be > 0, got {d} (degenerate geometry)"),
            )
        })
    };
    Ok(LinkGains::new(
        gain("d_sr", g.d_sr, g.gamma_sr)?,
        gain("d_si", g.d_si, g.gamma_si)?,
        gain("d_ir", d_ir, g.gamma_ir)?,
        gain("d_ri", g.d_ri, g.gamma_ri)?,
        gain("d_id", d_id, g.gamma_id)?,
        gain("d_rd", g.d_rd, g.gamma_rd)?,
    ))
}

#[cfg(test)]
#[allow(clippy::field_reassign_with_default)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_3;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn path_loss_examples() {
        assert!(rel(path_loss_linear(1.0, 3.5, -30.0).unwrap(), 1e-3) < 1e-15);
        // Oracle values from direct evaluation outside this crate.
        assert!(
            rel(
                path_loss_linear(150.0, 3.5, -30.0).unwrap(),
                2.419_249_128_674_741_6e-11
            ) < 1e-12
        );
        assert!(
            rel(
                path_loss_linear(50.0, 2.6, -30.0).unwrap(),
                3.825_409_999_160_146e-8
            ) < 1e-12
        );
    }

    #[test]
    fn path_loss_rejects_bad_distance() {
        for d in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                path_loss_linear(d, 2.0, 0.0),
                Err(Error::InvalidParameter { .. })
            ));
        }
    }

    #[test]
    fn derived_distances() {
        let g = Geometry::default();
        let (d_ir, d_id) = g.derive_distances();
        assert!((d_ir - 119.972_489_689_102_42).abs() < 1e-9);
        assert_eq!(d_ir, d_id);

        let right = Geometry {
            theta_si: 0.0,
            theta_sr: FRAC_PI_2,
            ..Geometry::default()
        };
        assert!((right.derive_distances().0 - 158.113_883_008_418_98).abs() < 1e-9);
    }

    #[test]
    fn collinear_coincident_geometry_is_rejected() {
        let mut p = SystemParams::default();
        p.geometry.d_si = 150.0;
        p.geometry.theta_si = p.geometry.theta_sr;
        assert_eq!(p.geometry.derive_distances().0, 0.0);
        match link_gains(&p) {
            Err(Error::InvalidParameter { key, .. }) => assert_eq!(key, "d_ir"),
            other => panic!("expected degenerate geometry error, got {other:?}"),
        }
    }

    #[test]
    fn default_gains_finite_positive() {
        let p = SystemParams::default();
        p.validate().unwrap();
        let g = link_gains(&p).unwrap();
        for x in [
            g.g_sr, g.g_si, g.g_ir, g.g_ri, g.g_id, g.g_rd, g.g_sir, g.g_rid,
        ] {
            assert!(x.is_finite() && x > 0.0 && x <= 1.0);
        }
        assert_eq!(g.g_sir, g.g_si * g.g_ir);
        assert_eq!(g.g_rid, g.g_ri * g.g_id);
    }

    #[test]
    fn unit_distances_give_unit_gains() {
        let mut p = SystemParams::default();
        let g = &mut p.geometry;
        g.pl0_db = 0.0;
        g.d_si = 1.0;
        g.d_ri = 1.0;
        g.d_sr = 1.0;
        g.d_rd = 1.0;
        // Equilateral placement puts the surfaces 1 m from relay and destination.
        g.theta_si = 0.0;
        g.theta_sr = FRAC_PI_3;
        g.theta_ri = 0.0;
        g.theta_rd = FRAC_PI_3;
        let gains = link_gains(&p).unwrap();
        for x in [
            gains.g_sr, gains.g_si, gains.g_ir, gains.g_ri, gains.g_id, gains.g_rd,
        ] {
            assert!((x - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn validation_names_key() {
        let mut p = SystemParams::default();
        p.alpha_id = 0.0;
        assert!(
            matches!(p.validate(), Err(Error::InvalidParameter { key, .. }) if key == "alpha_id")
        );
        let mut p = SystemParams::default();
        p.geometry.gamma_rd = 7.0;
        assert!(
            matches!(p.validate(), Err(Error::InvalidParameter { key, .. }) if key == "gamma_rd")
        );
        let mut p = SystemParams::default();
        p.m_elements = 0;
        assert!(
            matches!(p.validate(), Err(Error::InvalidParameter { key, .. }) if key == "m_elements")
        );
    }

    #[test]
    fn config_parsing() {
        let p = SystemParams::from_toml_str(
            "n_elements = 64\nm_elements = 32\nk1_bits = 3\nk2_bits = \"inf\"\nsigma_d_dbm = -80\nd_si = 40.0\n",
        )
        .unwrap();
        assert_eq!(p.n_elements, 64);
        assert_eq!(p.m_elements, 32);
        assert_eq!(p.k1_bits, QuantizerSpec::Bits(3));
        assert_eq!(p.k2_bits, QuantizerSpec::Continuous);
        assert_eq!(p.sigma_d_dbm, -80.0);
        assert_eq!(p.geometry.d_si, 40.0);
        assert_eq!(p.alpha_sr, 0.5);
    }

    #[test]
    fn config_errors_name_key() {
        let err = SystemParams::from_toml_str("alpha_ri = \"big\"").unwrap_err();
        assert!(err.to_string().contains("alpha_ri"), "{err}");
        let err = SystemParams::from_toml_str("k2_bits = 0").unwrap_err();
        assert!(err.to_string().contains("k2_bits"), "{err}");
        let err = SystemParams::from_toml_str("gamma_xx = 2.0").unwrap_err();
        assert!(err.to_string().contains("gamma_xx"), "{err}");
        let err = SystemParams::from_toml_str("d_rd = -5").unwrap_err();
        assert!(err.to_string().contains("d_rd"), "{err}");
    }

    #[test]
    fn config_round_trip() {
        let mut p = SystemParams::default();
        p.k2_bits = QuantizerSpec::Continuous;
        p.normalized_relay = true;
        p.geometry.theta_ri = 0.123_456_789_012_345_67;
        let back = SystemParams::from_toml_str(&p.to_toml_string()).unwrap();
        assert_eq!(back, p);
    }

    proptest! {
        #[test]
        fn path_loss_decreasing(d in 1.0001f64..1e4, step in 1.0001f64..10.0, gamma in 1.5f64..6.0, dg in 0.01f64..1.0) {
            let base = path_loss_linear(d, gamma, -30.0).unwrap();
            prop_assert!(path_loss_linear(d * step, gamma, -30.0).unwrap() < base);
            prop_assert!(path_loss_linear(d, gamma + dg, -30.0).unwrap() < base);
        }

        #[test]
        fn db_round_trip(db in -200.0f64..100.0) {
            let back = linear_to_db(db_to_linear(db));
            prop_assert!((back - db).abs() <= 1e-12 * db.abs().max(1.0));
        }
    }
}
