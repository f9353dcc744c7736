//! Closed-form temperature fields and free boundary.
//!
//! Both problems share one shape. In the unfrozen zone, with
//! `η = x / (2 α_U √t)`,
//!
//! ```text
//! Φ(η) = w + c ∫₀^η exp(-r² + p ξ r) dr
//! ```
//!
//! and in the frozen zone, with `z = x / (2 α_F √t)` and `z0 = γ0 ξ`,
//!
//! ```text
//! Ψ(z) = -A + (A M ξ² + A) erfc(z) / erfc(z0).
//! ```
//!
//! The convective problem has `w = C1, c = C2`; the temperature problem has
//! `w = B0, c = (A M ω² - B0) / g(p, ω)`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{reduce, DimensionlessParams, PhysicalParams, ReduceOptions};
use crate::numfmt::Num;
use crate::solver::{solve_omega, solve_xi, SolveOptions};
use crate::special_functions::{erf, erfc, erfcx, g_eval, gauss_integral};

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Region {
    U,
    F,
    #[serde(rename = "front")]
    Front,
}

impl Region {
    pub fn label(&self) -> &'static str {
        match self {
            Region::U => "U",
            Region::F => "F",
            Region::Front => "front",
        }
    }
}

/// Similarity profile shared by both solution types.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityProfile {
    /// Front coefficient (`ξ` or `ω`).
    pub coef: f64,
    /// `Φ(0)`.
    pub wall: f64,
    /// Multiplier of the Gaussian integral in `Φ`.
    pub slope: f64,
    /// Interface temperature `A M coef²`.
    pub interface: f64,
    pub p_par: f64,
    pub a_init: f64,
    pub alpha_u: f64,
    pub alpha_f: f64,
    pub gamma0: f64,
    erfcx_front: f64,
}

impl SimilarityProfile {
    fn new(d: &DimensionlessParams, coef: f64, wall: f64, slope: f64) -> Self {
        Self {
            coef,
            wall,
            slope,
            interface: d.a_init * d.m_par * coef * coef,
            p_par: d.p_par,
            a_init: d.a_init,
            alpha_u: d.alpha_u,
            alpha_f: d.alpha_f,
            gamma0: d.gamma0,
            erfcx_front: erfcx(d.gamma0 * coef),
        }
    }

    /// `∫₀^η exp(-r² + p coef r) dr`.
    pub fn partial_integral(&self, eta: f64) -> Result<f64> {
        let s = gauss_integral(0.5 * self.p_par * self.coef, eta)?;
        s.value().ok_or(Error::OverflowUnrepresentable {
            function: "partial_integral",
            y: eta,
            ln_value: s.ln(),
        })
    }

    pub fn phi(&self, eta: f64) -> Result<f64> {
        Ok(self.wall + self.slope * self.partial_integral(eta)?)
    }

    pub fn phi_prime(&self, eta: f64) -> f64 {
        self.slope * (-eta * eta + self.p_par * self.coef * eta).exp()
    }

    /// `erfc(z) / erfc(z0)` for `z >= z0`.
    pub fn frozen_ratio(&self, z: f64) -> f64 {
        let z0 = self.gamma0 * self.coef;
        erfcx(z) / self.erfcx_front * ((z0 - z) * (z0 + z)).exp()
    }

    pub fn psi(&self, z: f64) -> f64 {
        -self.a_init + (self.interface + self.a_init) * self.frozen_ratio(z)
    }

    pub fn psi_prime(&self, z: f64) -> f64 {
        let z0 = self.gamma0 * self.coef;
        -(self.interface + self.a_init) * TWO_OVER_SQRT_PI * ((z0 - z) * (z0 + z)).exp()
            / self.erfcx_front
    }

    /// `2 coef α_U √t`.
    pub fn front(&self, t: f64) -> f64 {
        2.0 * self.coef * self.alpha_u * t.sqrt()
    }

    /// `coef α_U / √t`.
    pub fn front_speed(&self, t: f64) -> f64 {
        self.coef * self.alpha_u / t.sqrt()
    }

    fn check_time(t: f64) -> Result<()> {
        if t > 0.0 && t.is_finite() {
            Ok(())
        } else {
            Err(Error::invalid(
                "t",
                format!("time must be positive and finite, got {t}"),
            ))
        }
    }

    fn eta(&self, x: f64, t: f64) -> f64 {
        x / (2.0 * self.alpha_u * t.sqrt())
    }

    fn z(&self, x: f64, t: f64) -> f64 {
        x / (2.0 * self.alpha_f * t.sqrt())
    }

    fn unfrozen_check(&self, x: f64, t: f64) -> Result<()> {
        Self::check_time(t)?;
        let s = self.front(t);
        if (0.0..=s).contains(&x) {
            Ok(())
        } else {
            Err(Error::OutOfPhaseRegion {
                region: "unfrozen",
                x,
                t,
                front: s,
            })
        }
    }

    fn frozen_check(&self, x: f64, t: f64) -> Result<()> {
        Self::check_time(t)?;
        let s = self.front(t);
        if x >= s && x.is_finite() {
            Ok(())
        } else {
            Err(Error::OutOfPhaseRegion {
                region: "frozen",
                x,
                t,
                front: s,
            })
        }
    }

    pub fn u(&self, x: f64, t: f64) -> Result<f64> {
        self.unfrozen_check(x, t)?;
        self.phi(self.eta(x, t))
    }

    pub fn u_x(&self, x: f64, t: f64) -> Result<f64> {
        self.unfrozen_check(x, t)?;
        Ok(self.phi_prime(self.eta(x, t)) / (2.0 * self.alpha_u * t.sqrt()))
    }

    pub fn v(&self, x: f64, t: f64) -> Result<f64> {
        self.frozen_check(x, t)?;
        Ok(self.psi(self.z(x, t)))
    }

    pub fn v_x(&self, x: f64, t: f64) -> Result<f64> {
        self.frozen_check(x, t)?;
        Ok(self.psi_prime(self.z(x, t)) / (2.0 * self.alpha_f * t.sqrt()))
    }

    /// Temperature at any `x >= 0`, with the region it was taken from.
    pub fn field(&self, x: f64, t: f64) -> Result<(Region, f64)> {
        Self::check_time(t)?;
        if x < 0.0 || !x.is_finite() {
            return Err(Error::invalid(
                "x",
                format!("position must be nonnegative and finite, got {x}"),
            ));
        }
        let s = self.front(t);
        if x < s {
            Ok((Region::U, self.u(x, t)?))
        } else if x == s {
            Ok((Region::Front, self.u(x, t)?))
        } else {
            Ok((Region::F, self.v(x, t)?))
        }
    }

    /// Default right end of a plotting grid at time `t`: the front plus
    /// eight frozen-zone diffusion lengths, where `v + A` is below `1e-8 A`.
    pub fn default_x_max(&self, t: f64) -> f64 {
        self.front(t) + 8.0 * self.alpha_f * t.sqrt()
    }
}

/// Solution of the problem with a convective condition at `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvectiveSolution {
    pub xi: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub dimless: DimensionlessParams,
    pub phys: PhysicalParams,
    profile: SimilarityProfile,
}

impl ConvectiveSolution {
    /// Builds the fields for a given `ξ`. `ξ` need not be a root; the
    /// verification module relies on that to test its own sensitivity.
    pub fn from_xi(phys: &PhysicalParams, dimless: &DimensionlessParams, xi: f64) -> Result<Self> {
        if !(xi > 0.0 && xi.is_finite()) {
            return Err(Error::invalid("xi", format!("must be positive, got {xi}")));
        }
        let b = dimless
            .b_ext
            .ok_or_else(|| Error::invalid("b_ext", "convective problem needs `b_ext`"))?;
        let k0 = dimless
            .k0
            .ok_or_else(|| Error::invalid("h0", "convective problem needs `h0`"))?;
        let g = g_eval(dimless.p_par, xi)?.value;
        let am = dimless.a_init * dimless.m_par * xi * xi;
        let c1 = (b * g + am * k0) / (g + k0);
        let c2 = (am - b) / (g + k0);
        let z0 = dimless.gamma0 * xi;
        let c3 = (am + dimless.a_init * erf(z0)) / erfc(z0);
        let c4 = -(am + dimless.a_init) / erfc(z0);
        Ok(Self {
            xi,
            c1,
            c2,
            c3,
            c4,
            dimless: dimless.clone(),
            phys: phys.clone(),
            profile: SimilarityProfile::new(dimless, xi, c1, c2),
        })
    }

    /// Reduces `phys`, solves for `ξ` and keeps the principal root.
    pub fn solve(
        phys: &PhysicalParams,
        reduce_opts: ReduceOptions,
        opts: &SolveOptions,
    ) -> Result<Self> {
        let d = reduce(phys, reduce_opts)?;
        let (roots, _) = solve_xi(&d, opts)?;
        Self::from_xi(
            phys,
            &d,
            roots
                .principal()
                .expect("solve_xi returns at least one root"),
        )
    }

    pub fn profile(&self) -> &SimilarityProfile {
        &self.profile
    }

    pub fn front(&self, t: f64) -> f64 {
        self.profile.front(t)
    }

    pub fn u(&self, x: f64, t: f64) -> Result<f64> {
        self.profile.u(x, t)
    }

    pub fn v(&self, x: f64, t: f64) -> Result<f64> {
        self.profile.v(x, t)
    }

    pub fn u_x(&self, x: f64, t: f64) -> Result<f64> {
        self.profile.u_x(x, t)
    }

    pub fn v_x(&self, x: f64, t: f64) -> Result<f64> {
        self.profile.v_x(x, t)
    }

    pub fn field(&self, x: f64, t: f64) -> Result<(Region, f64)> {
        self.profile.field(x, t)
    }
}

/// Solution of the problem with a prescribed temperature `B0` at `x = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureSolution {
    pub omega: f64,
    pub b0_wall: f64,
    pub dimless: DimensionlessParams,
    pub phys: PhysicalParams,
    profile: SimilarityProfile,
}

impl TemperatureSolution {
    pub fn from_omega(
        phys: &PhysicalParams,
        dimless: &DimensionlessParams,
        omega: f64,
    ) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::invalid(
                "omega",
                format!("must be positive, got {omega}"),
            ));
        }
        let b0 = dimless
            .b0_wall
            .ok_or_else(|| Error::invalid("b0_wall", "temperature problem needs `b0_wall`"))?;
        let g = g_eval(dimless.p_par, omega)?.value;
        let slope = (dimless.a_init * dimless.m_par * omega * omega - b0) / g;
        Ok(Self {
            omega,
            b0_wall: b0,
            dimless: dimless.clone(),
            phys: phys.clone(),
            profile: SimilarityProfile::new(dimless, omega, b0, slope),
        })
    }

    pub fn solve(
        phys: &PhysicalParams,
        reduce_opts: ReduceOptions,
        opts: &SolveOptions,
    ) -> Result<Self> {
        let d = reduce(phys, reduce_opts)?;
        let roots = solve_omega(&d, opts)?;
        Self::from_omega(
            phys,
            &d,
            roots
                .principal()
                .expect("solve_omega returns at least one root"),
        )
    }

    pub fn profile(&self) -> &SimilarityProfile {
        &self.profile
    }

    pub fn front(&self, t: f64) -> f64 {
        self.profile.front(t)
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        Ok(self.profile.field(x, t)?.1)
    }

    pub fn u(&self, x: f64, t: f64) -> Result<f64> {
        self.profile.u(x, t)
    }

    pub fn v(&self, x: f64, t: f64) -> Result<f64> {
        self.profile.v(x, t)
    }
}

pub fn eval_u(sol: &ConvectiveSolution, x: f64, t: f64) -> Result<f64> {
    sol.u(x, t)
}

pub fn eval_v(sol: &ConvectiveSolution, x: f64, t: f64) -> Result<f64> {
    sol.v(x, t)
}

pub fn eval_front(sol: &ConvectiveSolution, t: f64) -> f64 {
    sol.front(t)
}

pub fn eval_temperature_problem(sol: &TemperatureSolution, x: f64, t: f64) -> Result<f64> {
    sol.eval(x, t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileRow {
    pub t: f64,
    pub x: f64,
    pub region: Region,
    pub value: f64,
}

/// Evaluates the fields on `points` equally spaced positions in
/// `[0, x_max]` at each time. `x_max = None` uses
/// [`SimilarityProfile::default_x_max`] per time.
pub fn profile_grid(
    profile: &SimilarityProfile,
    times: &[f64],
    points: usize,
    x_max: Option<f64>,
) -> Result<Vec<ProfileRow>> {
    if points < 2 {
        return Err(Error::invalid("points", "a grid needs at least two points"));
    }
    let mut rows = Vec::with_capacity(times.len() * points);
    for &t in times {
        let hi = x_max.unwrap_or_else(|| profile.default_x_max(t));
        for i in 0..points {
            let x = hi * i as f64 / (points - 1) as f64;
            let (region, value) = profile.field(x, t)?;
            rows.push(ProfileRow {
                t,
                x,
                region,
                value,
            });
        }
    }
    Ok(rows)
}

/// Header plus one line per row; floats in shortest round-trip form.
pub fn write_profile_csv<W: Write>(rows: &[ProfileRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "t,x,region,value")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{}",
            Num(r.t),
            Num(r.x),
            r.region.label(),
            Num(r.value)
        )?;
    }
    Ok(())
}
