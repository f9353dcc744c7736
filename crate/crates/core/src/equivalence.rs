//! Maps between the convective problem and the prescribed-temperature
//! problem, and the inequalities the temperature coefficient satisfies.
//!
//! Everything here is gated on `M > 0, N > 0, p <= 1` (or the classical
//! reduction `M = N = p = 0`); outside that the operations refuse with
//! [`Error::HypothesesNotMet`].

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{reduce, DimensionlessParams, PhysicalParams, ReduceOptions};
use crate::numfmt::Num;
use crate::profiles::{ConvectiveSolution, SimilarityProfile, TemperatureSolution};
use crate::solver::{
    critical_h0, in_monotone_regime, solve_omega, solve_xi, with_thread_cap, SolveOptions,
};
use crate::special_functions::{erf, g_eval, sqrt_pi};

fn require_regime(d: &DimensionlessParams) -> Result<()> {
    if in_monotone_regime(d) {
        Ok(())
    } else {
        Err(Error::HypothesesNotMet(format!(
            "needs M > 0, N > 0, p <= 1 (got M = {}, N = {}, p = {})",
            d.m_par, d.n_par, d.p_par
        )))
    }
}

fn require_above_critical(phys: &PhysicalParams) -> Result<()> {
    let critical = critical_h0(phys)?;
    let h0 = phys
        .h0
        .ok_or_else(|| Error::invalid("h0", "convective problem needs `h0`"))?;
    if h0 > critical {
        Ok(())
    } else {
        Err(Error::HypothesesNotMet(format!(
            "h0 = {h0} is not above the critical value {critical}"
        )))
    }
}

/// Wall temperature that makes the prescribed-temperature problem share
/// the front of `sol`; equal to `u(0, t)`.
pub fn b0_from_convective(sol: &ConvectiveSolution) -> Result<f64> {
    require_regime(&sol.dimless)?;
    require_above_critical(&sol.phys)?;
    let p = &sol.phys;
    let d = &sol.dimless;
    let (b, h0) = (p.b_ext.expect("checked"), p.h0.expect("checked"));
    let g = g_eval(d.p_par, sol.xi)?.value;
    let am = d.a_init * d.m_par;
    let num = 2.0 * h0 * d.alpha_u * b * g + am * p.k_u * sol.xi * sol.xi;
    let den = 2.0 * h0 * d.alpha_u * g + p.k_u;
    Ok(num / den)
}

/// Physical data of the prescribed-temperature problem matching `sol`.
pub fn temperature_params_for(sol: &ConvectiveSolution) -> Result<PhysicalParams> {
    let mut p = sol.phys.clone();
    p.b0_wall = Some(b0_from_convective(sol)?);
    Ok(p)
}

/// Heat transfer coefficient that makes the convective problem with
/// external temperature `b` share the front of `sol`.
pub fn h0_from_temperature(sol: &TemperatureSolution, b: f64) -> Result<f64> {
    let d = &sol.dimless;
    require_regime(d)?;
    let b0 = sol.b0_wall;
    if !(b > b0) {
        return Err(Error::HypothesesNotMet(format!(
            "external temperature {b} must exceed the wall value {b0}"
        )));
    }
    let g = g_eval(d.p_par, sol.omega)?.value;
    let am = d.a_init * d.m_par * sol.omega * sol.omega;
    Ok(sol.phys.k_u * (b0 - am) / (2.0 * d.alpha_u * (b - b0) * g))
}

/// The convective solution obtained from `sol` through
/// [`h0_from_temperature`], solved independently.
pub fn convective_from_temperature(
    sol: &TemperatureSolution,
    b: f64,
    reduce_opts: ReduceOptions,
    opts: &SolveOptions,
) -> Result<ConvectiveSolution> {
    let h0 = h0_from_temperature(sol, b)?;
    let mut p = sol.phys.clone();
    p.h0 = Some(h0);
    p.b_ext = Some(b);
    p.b0_wall = None;
    ConvectiveSolution::solve(&p, reduce_opts, opts)
}

/// Outcome of an inequality `lhs > rhs`; `margin = lhs - rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

impl InequalityCheck {
    fn greater(lhs: f64, rhs: f64) -> Self {
        Self {
            holds: lhs > rhs,
            lhs,
            rhs,
            margin: lhs - rhs,
        }
    }
}

fn wall_side(sol: &TemperatureSolution) -> Result<f64> {
    let d = &sol.dimless;
    let g = g_eval(d.p_par, sol.omega)?.value;
    Ok((sol.b0_wall - d.a_init * d.m_par * sol.omega * sol.omega) / g)
}

/// `(B0 - A M ω²) / g(p, ω) > 2 α_U k_F A (B - B0) / (α_F k_U B √π)`.
pub fn omega_inequality_check(sol: &TemperatureSolution, b: f64) -> Result<InequalityCheck> {
    let d = &sol.dimless;
    require_regime(d)?;
    if !(b > sol.b0_wall) {
        return Err(Error::HypothesesNotMet(format!(
            "external temperature {b} must exceed the wall value {}",
            sol.b0_wall
        )));
    }
    let p = &sol.phys;
    let rhs = 2.0 * d.alpha_u * p.k_f * d.a_init * (b - sol.b0_wall)
        / (d.alpha_f * p.k_u * b * sqrt_pi());
    Ok(InequalityCheck::greater(wall_side(sol)?, rhs))
}

/// The `B -> ∞` form: `(B0 - A M ω²) / g(p, ω) > 2 α_U A k_F / (α_F k_U √π)`.
pub fn omega_inequality_limit(sol: &TemperatureSolution) -> Result<InequalityCheck> {
    let d = &sol.dimless;
    require_regime(d)?;
    let p = &sol.phys;
    let rhs = 2.0 * d.alpha_u * d.a_init * p.k_f / (d.alpha_f * p.k_u * sqrt_pi());
    Ok(InequalityCheck::greater(wall_side(sol)?, rhs))
}

/// Classical form (`ρ = 0`): `erf(ω) < (B0/A)(k_U/k_F) √(d_F/d_U)`.
/// Returned with `lhs` the bound and `rhs = erf(ω)`, so `margin > 0` when it holds.
pub fn classical_erf_bound(sol: &TemperatureSolution) -> Result<InequalityCheck> {
    let d = &sol.dimless;
    if !d.is_classical() {
        return Err(Error::HypothesesNotMet(format!(
            "classical form needs rho = 0 (got {})",
            d.rho_jump
        )));
    }
    let p = &sol.phys;
    let bound = sol.b0_wall / d.a_init * p.k_u / p.k_f * (d.d_f / d.d_u).sqrt();
    Ok(InequalityCheck::greater(bound, erf(sol.omega)))
}

/// Whether [`omega_infinity`] accepts `1 < p <= 2`, where the bound is not proven.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OmegaScope {
    #[default]
    Proven,
    ExploratoryUnproven,
}

/// Front coefficient of the prescribed-temperature problem with wall value
/// `B`: the `h0 -> ∞` limit of `ξ(h0)` and an upper bound for it.
pub fn omega_infinity(
    phys: &PhysicalParams,
    reduce_opts: ReduceOptions,
    opts: &SolveOptions,
    scope: OmegaScope,
) -> Result<f64> {
    let b = phys
        .b_ext
        .ok_or_else(|| Error::invalid("b_ext", "the bound uses the external temperature"))?;
    let mut p = phys.clone();
    p.b0_wall = Some(b);
    let d = reduce(&p, reduce_opts)?;
    let p_limit = match scope {
        OmegaScope::Proven => 1.0,
        OmegaScope::ExploratoryUnproven => 2.0,
    };
    let classical = d.m_par == 0.0 && d.n_par == 0.0 && d.p_par == 0.0;
    if !(classical || (d.m_par > 0.0 && d.n_par > 0.0 && d.p_par <= p_limit)) {
        return Err(Error::HypothesesNotMet(format!(
            "needs M > 0, N > 0, p <= {p_limit} (got M = {}, N = {}, p = {})",
            d.m_par, d.n_par, d.p_par
        )));
    }
    let roots = solve_omega(&d, opts)?;
    Ok(roots
        .principal()
        .expect("solve_omega returns at least one root"))
}

/// `n` deterministic probe points `(x, t)` with `t` in `[0.25, 4]` and `x`
/// spread over both phases (`x <= default_x_max(t)`).
pub fn probe_points(profile: &SimilarityProfile, n: usize) -> Vec<(f64, f64)> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    const SILVER: f64 = 0.414_213_562_373_095_1;
    (1..=n)
        .map(|k| {
            let k = k as f64;
            let t = 0.25 + 3.75 * (k * GOLDEN).fract();
            let x = profile.default_x_max(t) * (k * SILVER).fract();
            (x, t)
        })
        .collect()
}

/// Largest `|conv - temp|` over the probes; both solutions are evaluated
/// on their own phase regions.
pub fn max_profile_gap(
    conv: &ConvectiveSolution,
    temp: &TemperatureSolution,
    probes: &[(f64, f64)],
) -> Result<f64> {
    let mut gap: f64 = 0.0;
    for &(x, t) in probes {
        let a = conv.field(x, t)?.1;
        let b = temp.eval(x, t)?;
        gap = gap.max((a - b).abs());
    }
    Ok(gap)
}

/// Convective solve, its `B0`, the temperature solve with that `B0`, and
/// the `h0` recovered from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundTrip {
    pub h0: f64,
    pub xi: f64,
    pub b0: f64,
    pub omega: f64,
    pub roundtrip_h0: f64,
    pub max_profile_gap: f64,
}

pub const ROUND_TRIP_PROBES: usize = 20;

pub fn round_trip(
    phys: &PhysicalParams,
    reduce_opts: ReduceOptions,
    opts: &SolveOptions,
) -> Result<RoundTrip> {
    let d = reduce(phys, reduce_opts)?;
    require_regime(&d)?;
    require_above_critical(phys)?;
    let (roots, report) = solve_xi(&d, opts)?;
    let xi = roots
        .principal()
        .expect("solve_xi returns at least one root");
    if report.guarantee_violated {
        return Err(Error::UniquenessViolation {
            upper: report.range.map_or(f64::INFINITY, |r| r.1),
            found: roots.roots,
        });
    }
    let conv = ConvectiveSolution::from_xi(phys, &d, xi)?;
    let tp = temperature_params_for(&conv)?;
    let temp = TemperatureSolution::solve(&tp, reduce_opts, opts)?;
    let b = phys.b_ext.expect("checked by critical_h0");
    let roundtrip_h0 = h0_from_temperature(&temp, b)?;
    let probes = probe_points(conv.profile(), ROUND_TRIP_PROBES);
    Ok(RoundTrip {
        h0: phys.h0.expect("checked"),
        xi,
        b0: temp.b0_wall,
        omega: temp.omega,
        roundtrip_h0,
        max_profile_gap: max_profile_gap(&conv, &temp, &probes)?,
    })
}

/// [`round_trip`] for every `h0` in `grid`, in grid order.
pub fn round_trip_grid(
    phys: &PhysicalParams,
    reduce_opts: ReduceOptions,
    opts: &SolveOptions,
    grid: &[f64],
    threads: Option<usize>,
) -> Result<Vec<RoundTrip>> {
    with_thread_cap(threads, || {
        grid.par_iter()
            .map(|&h0| {
                let mut p = phys.clone();
                p.h0 = Some(h0);
                round_trip(&p, reduce_opts, opts)
            })
            .collect()
    })
}

pub fn write_round_trip_csv<W: Write>(rows: &[RoundTrip], mut out: W) -> std::io::Result<()> {
    writeln!(out, "h0,xi,b0,omega,roundtrip_h0,max_profile_gap")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            Num(r.h0),
            Num(r.xi),
            Num(r.b0),
            Num(r.omega),
            Num(r.roundtrip_h0),
            Num(r.max_profile_gap)
        )?;
    }
    Ok(())
}
