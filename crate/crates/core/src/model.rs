//! Physical data of the thawing problem and its reduction to dimensionless groups.
//!
//! Units are the CGS-calorie system throughout: lengths in cm, times in s,
//! temperatures in °C, heats in cal. No conversion is performed.
//!
//! The unfrozen zone occupies `0 < x < s(t)` and the frozen zone `x > s(t)`.
//! Temperature far from the face is `-A`; the face is either held at `B0`
//! (temperature problem) or exchanges heat with an external medium at `B`
//! through the coefficient `h0 / sqrt(t)` (convective problem).

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Dimensional material and boundary constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysicalParams {
    /// Porosity, in (0, 1).
    pub epsilon: f64,
    /// Density of water, g/cm³.
    pub rho_w: f64,
    /// Density of ice, g/cm³.
    pub rho_i: f64,
    /// Specific heat of water, cal/(g·°C).
    pub c_w: f64,
    /// Specific heat of ice, cal/(g·°C).
    pub c_i: f64,
    /// Specific heat of the unfrozen zone, cal/(g·°C).
    pub c_u: f64,
    /// Specific heat of the frozen zone, cal/(g·°C).
    pub c_f: f64,
    /// Conductivity of the unfrozen zone, cal/(s·cm·°C).
    pub k_u: f64,
    /// Conductivity of the frozen zone, cal/(s·cm·°C).
    pub k_f: f64,
    /// Bulk density of the unfrozen zone, g/cm³.
    pub rho_u: f64,
    /// Bulk density of the frozen zone, g/cm³.
    pub rho_f: f64,
    /// Latent heat at u = 0, cal/g.
    pub latent_l: f64,
    /// Clausius–Clapeyron coefficient, s²·cm·°C/g. Any sign.
    pub gamma_cc: f64,
    /// Liquid viscosity, g/(s·cm).
    pub mu: f64,
    /// Hydraulic permeability, cm².
    pub perm_k: f64,
    /// Magnitude of the initial and far-field temperature (the temperature is `-A`), °C.
    pub a_init: f64,
    /// External temperature seen through the convective condition, °C.
    pub b_ext: Option<f64>,
    /// Wall temperature for the temperature problem, °C.
    pub b0_wall: Option<f64>,
    /// Heat-transfer coefficient, cal/(s^½·cm²·°C).
    pub h0: Option<f64>,
}

/// Which degenerate reductions are accepted by [`reduce`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Accept `rho = 0`; the reduction then yields `p = M = N = 0`.
    pub allow_zero_density_jump: bool,
    /// Accept `beta = 0`; the reduction then yields `N = 0`.
    pub allow_zero_beta: bool,
}

impl ReduceOptions {
    pub fn strict() -> Self {
        Self::default()
    }

    /// Classical Stefan reduction: both degeneracies allowed.
    pub fn classical() -> Self {
        Self {
            allow_zero_density_jump: true,
            allow_zero_beta: true,
        }
    }
}

/// Dimensionless groups and derived coefficients.
///
/// `a_init`, `b_ext` and `b0_wall` are carried along because the interface
/// term of the transcendental equations involves `A M / B` (or `A M / B0`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionlessParams {
    pub d_u: f64,
    pub d_f: f64,
    pub alpha_u: f64,
    pub alpha_f: f64,
    pub b_coef: f64,
    pub d_coef: f64,
    pub rho_jump: f64,
    pub alpha_lat: f64,
    pub beta_coef: f64,
    pub m_par: f64,
    pub n_par: f64,
    pub p_par: f64,
    pub delta1: Option<f64>,
    pub delta1_tilde: Option<f64>,
    pub delta2: f64,
    pub k0: Option<f64>,
    pub gamma0: f64,
    pub a_init: f64,
    pub b_ext: Option<f64>,
    pub b0_wall: Option<f64>,
}

impl DimensionlessParams {
    /// `sqrt(B / (A M))`, the right end of the range where the interface
    /// factor `1 - (A M / B) y²` stays positive. `None` unless `M > 0` and `B` is known.
    pub fn interface_bound(&self) -> Option<f64> {
        let b = self.b_ext?;
        (self.m_par > 0.0).then(|| (b / (self.a_init * self.m_par)).sqrt())
    }

    /// Same as [`interface_bound`](Self::interface_bound) with the wall value `B0`.
    pub fn wall_interface_bound(&self) -> Option<f64> {
        let b0 = self.b0_wall?;
        (self.m_par > 0.0).then(|| (b0 / (self.a_init * self.m_par)).sqrt())
    }

    /// `sqrt(1/|N|)`, the positive zero of `y + N y³` when `N < 0`.
    pub fn cubic_bound(&self) -> Option<f64> {
        (self.n_par != 0.0).then(|| (1.0 / self.n_par.abs()).sqrt())
    }

    pub fn is_classical(&self) -> bool {
        self.rho_jump == 0.0
    }
}

const FIELDS: [&str; 19] = [
    "epsilon", "rho_w", "rho_i", "c_w", "c_i", "c_u", "c_f", "k_u", "k_f", "rho_u", "rho_f",
    "latent_l", "gamma_cc", "mu", "perm_k", "a_init", "b_ext", "b0_wall", "h0",
];

impl PhysicalParams {
    /// Checks every range constraint. Does not look at the density jump or at
    /// beta; those are the business of [`reduce`].
    pub fn validate(&self) -> Result<()> {
        fn finite(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(field, format!("must be finite, got {v}")))
            }
        }
        fn positive(field: &'static str, v: f64) -> Result<()> {
            finite(field, v)?;
            if v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(field, format!("must be > 0, got {v}")))
            }
        }

        finite("epsilon", self.epsilon)?;
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::invalid(
                "epsilon",
                format!("porosity must lie in (0, 1), got {}", self.epsilon),
            ));
        }
        for (field, v) in [
            ("rho_w", self.rho_w),
            ("rho_i", self.rho_i),
            ("c_w", self.c_w),
            ("c_i", self.c_i),
            ("c_u", self.c_u),
            ("c_f", self.c_f),
            ("k_u", self.k_u),
            ("k_f", self.k_f),
            ("rho_u", self.rho_u),
            ("rho_f", self.rho_f),
            ("latent_l", self.latent_l),
            ("mu", self.mu),
            ("perm_k", self.perm_k),
            ("a_init", self.a_init),
        ] {
            positive(field, v)?;
        }
        finite("gamma_cc", self.gamma_cc)?;
        for (field, v) in [
            ("b_ext", self.b_ext),
            ("b0_wall", self.b0_wall),
            ("h0", self.h0),
        ] {
            if let Some(v) = v {
                positive(field, v)?;
            }
        }
        if self.h0.is_none() && self.b0_wall.is_none() {
            return Err(Error::invalid(
                "h0",
                "one of `h0` (convective problem) or `b0_wall` (temperature problem) is required",
            ));
        }
        if self.h0.is_some() && self.b_ext.is_none() {
            return Err(Error::invalid(
                "b_ext",
                "the convective problem (h0 given) needs the external temperature `b_ext`",
            ));
        }
        Ok(())
    }

    /// Density jump `(rho_w - rho_i) / rho_w`.
    pub fn density_jump(&self) -> f64 {
        (self.rho_w - self.rho_i) / self.rho_w
    }

    pub fn d_coef(&self) -> f64 {
        self.epsilon * self.gamma_cc * self.mu / self.perm_k
    }

    pub fn beta_coef(&self) -> f64 {
        self.epsilon * self.d_coef() * self.rho_i * (self.c_w - self.c_i)
    }

    /// Parses the flat `key = value` format: one key per line, `#` starts a
    /// comment, keys are the field names of this struct. Unknown or repeated
    /// keys are rejected; `b_ext`, `b0_wall` and `h0` may be omitted.
    pub fn from_config_str(text: &str, path: &Path) -> Result<Self> {
        let mut values: [Option<f64>; 19] = [None; 19];
        let err = |line: usize, reason: String| Error::Config {
            path: path.to_path_buf(),
            line,
            reason,
        };

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(line_no, format!("expected `key = value`, got `{line}`")))?;
            let key = key.trim();
            let value = value.trim();
            let slot = FIELDS
                .iter()
                .position(|f| *f == key)
                .ok_or_else(|| err(line_no, format!("unknown key `{key}`")))?;
            if values[slot].is_some() {
                return Err(err(line_no, format!("key `{key}` given twice")));
            }
            let parsed: f64 = value.parse().map_err(|_| {
                err(
                    line_no,
                    format!("key `{key}`: `{value}` is not a decimal number"),
                )
            })?;
            values[slot] = Some(parsed);
        }

        let required = |i: usize| -> Result<f64> {
            values[i].ok_or_else(|| err(0, format!("missing required key `{}`", FIELDS[i])))
        };
        let params = PhysicalParams {
            epsilon: required(0)?,
            rho_w: required(1)?,
            rho_i: required(2)?,
            c_w: required(3)?,
            c_i: required(4)?,
            c_u: required(5)?,
            c_f: required(6)?,
            k_u: required(7)?,
            k_f: required(8)?,
            rho_u: required(9)?,
            rho_f: required(10)?,
            latent_l: required(11)?,
            gamma_cc: required(12)?,
            mu: required(13)?,
            perm_k: required(14)?,
            a_init: required(15)?,
            b_ext: values[16],
            b0_wall: values[17],
            h0: values[18],
        };
        params.validate()?;
        Ok(params)
    }

    pub fn from_config_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_config_str(&text, path)
    }

    /// Renders the parameters back into the config format.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        let mut push = |k: &str, v: Option<f64>| {
            if let Some(v) = v {
                out.push_str(&format!("{k} = {v}\n"));
            }
        };
        push("epsilon", Some(self.epsilon));
        push("rho_w", Some(self.rho_w));
        push("rho_i", Some(self.rho_i));
        push("c_w", Some(self.c_w));
        push("c_i", Some(self.c_i));
        push("c_u", Some(self.c_u));
        push("c_f", Some(self.c_f));
        push("k_u", Some(self.k_u));
        push("k_f", Some(self.k_f));
        push("rho_u", Some(self.rho_u));
        push("rho_f", Some(self.rho_f));
        push("latent_l", Some(self.latent_l));
        push("gamma_cc", Some(self.gamma_cc));
        push("mu", Some(self.mu));
        push("perm_k", Some(self.perm_k));
        push("a_init", Some(self.a_init));
        push("b_ext", self.b_ext);
        push("b0_wall", self.b0_wall);
        push("h0", self.h0);
        out
    }
}

/// Reduces physical data to the dimensionless groups of the similarity analysis.
pub fn reduce(phys: &PhysicalParams, opts: ReduceOptions) -> Result<DimensionlessParams> {
    phys.validate()?;

    let rho_jump = phys.density_jump();
    if rho_jump == 0.0 && !opts.allow_zero_density_jump {
        return Err(Error::DegenerateDensityJump);
    }
    let d_coef = phys.d_coef();
    let beta_coef = phys.beta_coef();
    if beta_coef == 0.0 && rho_jump != 0.0 && !opts.allow_zero_beta {
        return Err(Error::DegenerateBeta);
    }

    let d_u = phys.k_u / (phys.rho_u * phys.c_u);
    let d_f = phys.k_f / (phys.rho_f * phys.c_f);
    let alpha_u = d_u.sqrt();
    let alpha_f = d_f.sqrt();
    let b_coef = phys.epsilon * phys.rho_w * phys.c_w / (phys.rho_u * phys.c_u);
    let alpha_lat = phys.epsilon * phys.rho_i * phys.latent_l;

    let m_par = 2.0 * d_coef * rho_jump * d_u / phys.a_init;
    let n_par = 2.0 * beta_coef * rho_jump * d_u / alpha_lat;
    let p_par = 2.0 * b_coef * rho_jump;

    let delta1 = phys.b_ext.map(|b| phys.k_u * b / (2.0 * alpha_lat * d_u));
    let delta1_tilde = phys
        .b0_wall
        .map(|b0| phys.k_u * b0 / (2.0 * alpha_lat * d_u));
    let delta2 = phys.k_f * phys.a_init / (alpha_lat * alpha_u * alpha_f * PI.sqrt());
    let k0 = phys.h0.map(|h0| phys.k_u / (2.0 * alpha_u * h0));
    let gamma0 = alpha_u / alpha_f;

    Ok(DimensionlessParams {
        d_u,
        d_f,
        alpha_u,
        alpha_f,
        b_coef,
        d_coef,
        rho_jump,
        alpha_lat,
        beta_coef,
        m_par,
        n_par,
        p_par,
        delta1,
        delta1_tilde,
        delta2,
        k0,
        gamma0,
        a_init: phys.a_init,
        b_ext: phys.b_ext,
        b0_wall: phys.b0_wall,
    })
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::PhysicalParams;

    /// Water/ice in a fine-grained soil; M > 0, N > 0, p small.
    pub fn water_ice() -> PhysicalParams {
        PhysicalParams {
            epsilon: 0.4,
            rho_w: 1.0,
            rho_i: 0.917,
            c_w: 1.0,
            c_i: 0.5,
            c_u: 0.5,
            c_f: 0.4,
            k_u: 0.004,
            k_f: 0.006,
            rho_u: 2.0,
            rho_f: 1.9,
            latent_l: 80.0,
            gamma_cc: 5.0e-5,
            mu: 0.018,
            perm_k: 1.0e-9,
            a_init: 5.0,
            b_ext: Some(10.0),
            b0_wall: None,
            h0: Some(0.05),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::water_ice;
    use super::*;

    #[test]
    fn water_ice_groups_match_hand_evaluation() {
        let d = reduce(&water_ice(), ReduceOptions::strict()).unwrap();
        // hand evaluation of each definition
        let d_u = 0.004 / (2.0 * 0.5);
        let d_f = 0.006 / (1.9 * 0.4);
        let rho = 0.083;
        let b = 0.4 * 1.0 * 1.0 / (2.0 * 0.5);
        let dd = 0.4 * 5.0e-5 * 0.018 / 1.0e-9;
        let alpha = 0.4 * 0.917 * 80.0;
        let beta = 0.4 * dd * 0.917 * 0.5;
        assert!((d.d_u - d_u).abs() < 1e-18);
        assert!((d.d_f - d_f).abs() < 1e-15);
        assert!((d.rho_jump - rho).abs() < 1e-15);
        assert!((d.p_par - 2.0 * b * rho).abs() < 1e-15);
        assert!((d.p_par - 0.0664).abs() < 1e-12);
        assert!((d.m_par - 2.0 * dd * rho * d_u / 5.0).abs() < 1e-12);
        assert!((d.n_par - 2.0 * beta * rho * d_u / alpha).abs() < 1e-14);
        assert!(d.m_par.is_finite() && d.m_par > 0.0);
        assert!(d.n_par.is_finite() && d.n_par > 0.0);
        // spreadsheet-style numbers, computed independently
        assert!((d.m_par - 0.047808).abs() < 1e-9, "{}", d.m_par);
        assert!((d.alpha_lat - 29.344).abs() < 1e-12);
        assert!((d.delta1.unwrap() - 0.170392584514722).abs() < 1e-12);
        assert!((d.k0.unwrap() - 0.632455532033676).abs() < 1e-12);
    }

    #[test]
    fn equal_densities_need_classical_mode() {
        let mut p = water_ice();
        p.rho_i = p.rho_w;
        assert!(matches!(
            reduce(&p, ReduceOptions::strict()),
            Err(Error::DegenerateDensityJump)
        ));
        let d = reduce(&p, ReduceOptions::classical()).unwrap();
        assert_eq!((d.p_par, d.m_par, d.n_par), (0.0, 0.0, 0.0));
    }

    #[test]
    fn equal_specific_heats_flag_zero_beta() {
        let mut p = water_ice();
        p.c_i = p.c_w;
        assert!(matches!(
            reduce(&p, ReduceOptions::strict()),
            Err(Error::DegenerateBeta)
        ));
        let d = reduce(
            &p,
            ReduceOptions {
                allow_zero_beta: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(d.beta_coef, 0.0);
        assert_eq!(d.n_par, 0.0);
        assert!(d.m_par > 0.0);
    }

    #[test]
    fn invalid_fields_are_named() {
        let mut p = water_ice();
        p.epsilon = 1.0;
        match reduce(&p, ReduceOptions::strict()) {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "epsilon"),
            other => panic!("{other:?}"),
        }
        let mut p = water_ice();
        p.k_f = -1.0;
        match p.validate() {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "k_f"),
            other => panic!("{other:?}"),
        }
        let mut p = water_ice();
        p.h0 = None;
        assert!(p.validate().is_err());
        p.b0_wall = Some(4.0);
        assert!(p.validate().is_ok());
    }

    #[test]
    fn config_round_trip_and_diagnostics() {
        let p = water_ice();
        let text = p.to_config_string();
        let back = PhysicalParams::from_config_str(&text, Path::new("t.cfg")).unwrap();
        assert_eq!(back, p);

        let bad = format!("{text}\nbogus = 1\n");
        match PhysicalParams::from_config_str(&bad, Path::new("t.cfg")) {
            Err(Error::Config { line, reason, .. }) => {
                assert_eq!(line, text.lines().count() + 2);
                assert!(reason.contains("bogus"));
            }
            other => panic!("{other:?}"),
        }
        let bad = text.replace("mu = 0.018", "mu = 0.0x18");
        assert!(matches!(
            PhysicalParams::from_config_str(&bad, Path::new("t.cfg")),
            Err(Error::Config { .. })
        ));
        let commented = format!("# header\n{}", text.replace("mu =", "  mu   =")) + "# trailing\n";
        assert!(PhysicalParams::from_config_str(&commented, Path::new("t.cfg")).is_ok());
    }

    #[test]
    fn reduce_is_bit_identical_on_repeat() {
        let p = water_ice();
        let a = reduce(&p, ReduceOptions::strict()).unwrap();
        let b = reduce(&p, ReduceOptions::strict()).unwrap();
        assert_eq!(format!("{a:?}"), format!("{b:?}"));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // Holding both diffusivities fixed (rho*c scaled with k), scaling
            // k_u, k_f, h0 by lambda leaves K0, gamma0, M, N unchanged and
            // scales delta1, delta2 by lambda.
            #[test]
            fn conductivity_scaling(lambda in 0.05f64..20.0) {
                let p = water_ice();
                let mut q = p.clone();
                q.k_u *= lambda;
                q.k_f *= lambda;
                q.h0 = q.h0.map(|h| h * lambda);
                q.rho_u *= lambda;
                q.rho_f *= lambda;
                let a = reduce(&p, ReduceOptions::strict()).unwrap();
                let b = reduce(&q, ReduceOptions::strict()).unwrap();
                let rel = |x: f64, y: f64| ((x - y) / y).abs();
                prop_assert!(rel(b.k0.unwrap(), a.k0.unwrap()) < 1e-13);
                prop_assert!(rel(b.gamma0, a.gamma0) < 1e-13);
                prop_assert!(rel(b.m_par, a.m_par) < 1e-13);
                prop_assert!(rel(b.n_par, a.n_par) < 1e-13);
                prop_assert!(rel(b.delta1.unwrap(), lambda * a.delta1.unwrap()) < 1e-13);
                prop_assert!(rel(b.delta2, lambda * a.delta2) < 1e-13);
            }
        }
    }
}
