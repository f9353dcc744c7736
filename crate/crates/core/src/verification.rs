//! Checks a similarity solution against the free-boundary system it is
//! supposed to solve.
//!
//! PDE residuals are central differences of the closed forms, taken in the
//! similarity variables (`η` in the unfrozen zone, `z` in the frozen one)
//! at probe points whose stencils stay inside their phase region, then
//! mapped back to `(x, t)`:
//!
//! ```text
//! u_t - d_U u_xx + b ρ ṡ u_x = -(Φ'' + 2 (η - p ξ / 2) Φ') / (4 t)
//! v_t - d_F v_xx             = -(Ψ'' + 2 z Ψ') / (4 t)
//! ```
//!
//! Boundary and interface conditions use the analytic derivatives. All
//! gaps are dimensionless: temperatures are divided by `max(A, B)` (or
//! `max(A, B0)`), the interface energy balance by `α α_U / √t`, and the
//! convective flux by `h0 B / √t`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::profiles::{ConvectiveSolution, SimilarityProfile, TemperatureSolution};
use crate::solver::geometric_grid;
use crate::special_functions::{frozen_term, sqrt_pi, ConvectiveLhs};

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    /// Finite-difference steps in the similarity variable, coarse to fine.
    pub steps: Vec<f64>,
    pub times: Vec<f64>,
    pub interior_points: usize,
    pub gap_tolerance: f64,
    pub min_order: f64,
    pub min_r_squared: f64,
    /// Far-field position in units of `α_F √t`.
    pub farfield_lengths: f64,
    /// Width of the frozen probe window in `z`.
    pub frozen_span: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            steps: vec![1e-2, 5e-3, 2.5e-3],
            times: vec![0.25, 1.0, 4.0],
            interior_points: 1000,
            gap_tolerance: 1e-8,
            min_order: 1.8,
            min_r_squared: 0.99,
            farfield_lengths: 40.0,
            frozen_span: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerPhase {
    pub u: Option<f64>,
    pub v: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub problem: &'static str,
    pub coef: f64,
    pub steps: Vec<f64>,
    pub pde_u_residual: Vec<f64>,
    pub pde_v_residual: Vec<f64>,
    /// Fitted exponents of residual against step; `None` when every level
    /// is already at rounding level and there is nothing to fit.
    pub refinement_orders: PerPhase,
    pub r_squared: PerPhase,
    pub interface_temp_gap: f64,
    pub stefan_balance_gap: f64,
    pub convective_bc_gap: Option<f64>,
    pub wall_gap: Option<f64>,
    pub farfield_gap: f64,
    pub tolerance: f64,
    pub failures: Vec<String>,
}

impl ResidualReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Least-squares slope of `ln y` against `ln x`, with the coefficient of
/// determination.
pub fn fit_order(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = ly.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (slope, r2)
}

/// Max-norm PDE residuals per level for both phases.
fn pde_residuals(prof: &SimilarityProfile, cfg: &VerifyConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let coef = prof.coef;
    // unfrozen steps shrink with the zone when it is narrow
    let u_scale = coef.min(1.0);
    let h_max = cfg.steps.iter().copied().fold(0.0, f64::max);
    let shift = 0.5 * prof.p_par * coef;
    let n = cfg.interior_points;

    let eta_lo = h_max * u_scale;
    let eta_hi = coef - h_max * u_scale;
    let z0 = prof.gamma0 * coef;
    let z_lo = z0 + h_max;
    let z_hi = z0 + cfg.frozen_span;

    let levels = cfg
        .steps
        .par_iter()
        .map(|&h| -> Result<(f64, f64)> {
            let hu = h * u_scale;
            let mut ru: f64 = 0.0;
            let mut rv: f64 = 0.0;
            for j in 0..n {
                let frac = (j as f64 + 0.5) / n as f64;
                let eta = eta_lo + (eta_hi - eta_lo) * frac;
                let im = prof.partial_integral(eta - hu)?;
                let i0 = prof.partial_integral(eta)?;
                let ip = prof.partial_integral(eta + hu)?;
                let d1 = prof.slope * (ip - im) / (2.0 * hu);
                let d2 = prof.slope * (ip - 2.0 * i0 + im) / (hu * hu);
                let phi_part = (d2 + 2.0 * (eta - shift) * d1).abs();

                let z = z_lo + (z_hi - z_lo) * frac;
                let scale = prof.interface + prof.a_init;
                let rm = prof.frozen_ratio(z - h);
                let r0 = prof.frozen_ratio(z);
                let rp = prof.frozen_ratio(z + h);
                let e1 = scale * (rp - rm) / (2.0 * h);
                let e2 = scale * (rp - 2.0 * r0 + rm) / (h * h);
                let psi_part = (e2 + 2.0 * z * e1).abs();

                for &t in &cfg.times {
                    ru = ru.max(phi_part / (4.0 * t));
                    rv = rv.max(psi_part / (4.0 * t));
                }
            }
            Ok((ru, rv))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(levels.into_iter().unzip())
}

/// Residual levels (unfrozen, frozen) below which differencing is pure
/// rounding: a few ulps of the differenced quantity over `h²`, mapped back
/// with the earliest probe time.
fn rounding_floors(prof: &SimilarityProfile, cfg: &VerifyConfig) -> (f64, f64) {
    let h_min = cfg.steps.iter().copied().fold(f64::INFINITY, f64::min);
    let t_min = cfg.times.iter().copied().fold(f64::INFINITY, f64::min);
    let hu = h_min * prof.coef.min(1.0);
    let ulps = 16.0 * f64::EPSILON;
    let u = ulps * prof.slope.abs() * prof.coef / (hu * hu * 4.0 * t_min);
    let v = ulps * (prof.interface.abs() + prof.a_init) / (h_min * h_min * 4.0 * t_min);
    (u, v)
}

fn fit_phase(
    name: &str,
    steps: &[f64],
    res: &[f64],
    floor: f64,
    cfg: &VerifyConfig,
    failures: &mut Vec<String>,
) -> (Option<f64>, Option<f64>) {
    if res.iter().all(|r| *r <= floor) {
        return (None, None);
    }
    if res.iter().any(|r| !(*r > 0.0)) {
        failures.push(format!("pde_{name}: residual vanished on some levels only"));
        return (None, None);
    }
    let (order, r2) = fit_order(steps, res);
    if order < cfg.min_order {
        failures.push(format!(
            "pde_{name}: refinement order {order:.3} below {}",
            cfg.min_order
        ));
    }
    if r2 < cfg.min_r_squared {
        failures.push(format!(
            "pde_{name}: fit R^2 {r2:.4} below {}",
            cfg.min_r_squared
        ));
    }
    (Some(order), Some(r2))
}

fn validate_cfg(cfg: &VerifyConfig) -> Result<()> {
    if cfg.steps.len() < 3 {
        return Err(Error::invalid(
            "steps",
            "order fitting needs at least three levels",
        ));
    }
    if cfg.steps.iter().any(|h| !(*h > 0.0)) || cfg.times.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::invalid("steps", "steps and times must be positive"));
    }
    if cfg.times.is_empty() || cfg.interior_points == 0 {
        return Err(Error::invalid(
            "times",
            "need at least one time and one probe point",
        ));
    }
    Ok(())
}

struct Common {
    pde_u: Vec<f64>,
    pde_v: Vec<f64>,
    orders: PerPhase,
    r2: PerPhase,
    interface: f64,
    stefan: f64,
    farfield: f64,
}

/// Checks shared by both problems. `temp_scale` is `max(A, B)` or `max(A, B0)`.
fn common_checks(
    prof: &SimilarityProfile,
    phys: &crate::model::PhysicalParams,
    d: &crate::model::DimensionlessParams,
    temp_scale: f64,
    cfg: &VerifyConfig,
    failures: &mut Vec<String>,
) -> Result<Common> {
    validate_cfg(cfg)?;
    let (pde_u, pde_v) = pde_residuals(prof, cfg)?;
    let (floor_u, floor_v) = rounding_floors(prof, cfg);
    let (ou, ru) = fit_phase("u", &cfg.steps, &pde_u, floor_u, cfg, failures);
    let (ov, rv) = fit_phase("v", &cfg.steps, &pde_v, floor_v, cfg, failures);

    let mut interface: f64 = 0.0;
    let mut stefan: f64 = 0.0;
    let mut farfield: f64 = 0.0;
    for &t in &cfg.times {
        let s = prof.front(t);
        let sdot = prof.front_speed(t);
        let target = d.d_coef * d.rho_jump * s * sdot;
        interface = interface
            .max((prof.u(s, t)? - target).abs() / temp_scale)
            .max((prof.v(s, t)? - target).abs() / temp_scale);

        let lhs = phys.k_f * prof.v_x(s, t)? - phys.k_u * prof.u_x(s, t)?;
        let rhs = d.alpha_lat * sdot + d.beta_coef * d.rho_jump * s * sdot * sdot;
        stefan = stefan.max((lhs - rhs).abs() * t.sqrt() / (d.alpha_lat * d.alpha_u));

        let x_far = cfg.farfield_lengths * d.alpha_f * t.sqrt();
        if x_far > s {
            farfield = farfield.max((prof.v(x_far, t)? + d.a_init).abs() / d.a_init);
        }
    }
    for (name, gap) in [
        ("interface_temp", interface),
        ("stefan_balance", stefan),
        ("farfield", farfield),
    ] {
        if !(gap <= cfg.gap_tolerance) {
            failures.push(format!("{name}: gap {gap:e} above {:e}", cfg.gap_tolerance));
        }
    }
    Ok(Common {
        pde_u,
        pde_v,
        orders: PerPhase { u: ou, v: ov },
        r2: PerPhase { u: ru, v: rv },
        interface,
        stefan,
        farfield,
    })
}

fn finish(report: ResidualReport) -> Result<ResidualReport> {
    match report.failures.first() {
        None => Ok(report),
        Some(first) => {
            let component = first.split(':').next().unwrap_or("unknown").to_string();
            Err(Error::VerificationFailed {
                component,
                report: Box::new(report),
            })
        }
    }
}

/// Residuals of the convective problem; [`Error::VerificationFailed`]
/// carries the full report when any check fails.
pub fn verify_convective(sol: &ConvectiveSolution, cfg: &VerifyConfig) -> Result<ResidualReport> {
    let prof = sol.profile();
    let d = &sol.dimless;
    let phys = &sol.phys;
    let b = phys.b_ext.expect("convective solution has b_ext");
    let h0 = phys.h0.expect("convective solution has h0");
    let mut failures = Vec::new();
    let c = common_checks(prof, phys, d, d.a_init.max(b), cfg, &mut failures)?;

    let mut bc: f64 = 0.0;
    for &t in &cfg.times {
        let flux = phys.k_u * prof.u_x(0.0, t)?;
        let newton = h0 / t.sqrt() * (prof.u(0.0, t)? - b);
        bc = bc.max((flux - newton).abs() * t.sqrt() / (h0 * b));
    }
    if !(bc <= cfg.gap_tolerance) {
        failures.push(format!(
            "convective_bc: gap {bc:e} above {:e}",
            cfg.gap_tolerance
        ));
    }

    finish(ResidualReport {
        problem: "convective",
        coef: sol.xi,
        steps: cfg.steps.clone(),
        pde_u_residual: c.pde_u,
        pde_v_residual: c.pde_v,
        refinement_orders: c.orders,
        r_squared: c.r2,
        interface_temp_gap: c.interface,
        stefan_balance_gap: c.stefan,
        convective_bc_gap: Some(bc),
        wall_gap: None,
        farfield_gap: c.farfield,
        tolerance: cfg.gap_tolerance,
        failures,
    })
}

/// Residuals of the prescribed-temperature problem.
pub fn verify_temperature(sol: &TemperatureSolution, cfg: &VerifyConfig) -> Result<ResidualReport> {
    let prof = sol.profile();
    let d = &sol.dimless;
    let b0 = sol.b0_wall;
    let scale = d.a_init.max(b0);
    let mut failures = Vec::new();
    let c = common_checks(prof, &sol.phys, d, scale, cfg, &mut failures)?;

    let mut wall: f64 = 0.0;
    for &t in &cfg.times {
        wall = wall.max((prof.u(0.0, t)? - b0).abs() / scale);
    }
    if !(wall <= cfg.gap_tolerance) {
        failures.push(format!("wall: gap {wall:e} above {:e}", cfg.gap_tolerance));
    }

    finish(ResidualReport {
        problem: "temperature",
        coef: sol.omega,
        steps: cfg.steps.clone(),
        pde_u_residual: c.pde_u,
        pde_v_residual: c.pde_v,
        refinement_orders: c.orders,
        r_squared: c.r2,
        interface_temp_gap: c.interface,
        stefan_balance_gap: c.stefan,
        convective_bc_gap: None,
        wall_gap: Some(wall),
        farfield_gap: c.farfield,
        tolerance: cfg.gap_tolerance,
        failures,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticCheck {
    pub name: &'static str,
    /// The quantity compared against `threshold` (a ratio deviation, a
    /// magnitude or a violation count, depending on the check).
    pub observed: f64,
    pub threshold: f64,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub checks: Vec<AsymptoticCheck>,
}

impl AsymptoticReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Geometric grid on `[1e-2, 40]` with `10³` points.
pub fn default_asymptotic_grid() -> Vec<f64> {
    geometric_grid(1e-2, 40.0, 1000)
}

/// Large-`y` behaviour of the two halves of the convective left side.
///
/// Uses `A, B, K0, γ0` from `lhs` and a representative `|M| = max(|M|, B/A)`,
/// taken with both signs; below that the `B / (A M y²)` correction is still
/// several percent at `y = 25`. The `p` branches are `min(p, 1.5)` (or 1
/// when `p >= 2`), exactly 2, and `max(p, 3)`. Ratios are taken at `y = 25`, limits at the end of the grid.
pub fn asymptotic_suite(lhs: &ConvectiveLhs, y_grid: &[f64]) -> AsymptoticReport {
    let m_abs = lhs.m_par.abs().max(lhs.b_ext / lhs.a_init);
    let p_low = if lhs.p_par < 2.0 {
        lhs.p_par.min(1.5)
    } else {
        1.0
    };
    let p_high = lhs.p_par.max(3.0);
    let y_far = y_grid.last().copied().unwrap_or(40.0);
    let y_mid = 25.0;
    let a_over_b = lhs.a_init / lhs.b_ext;

    let term = |m: f64, p: f64, y: f64| -> Result<f64> {
        let l = ConvectiveLhs {
            m_par: m,
            p_par: p,
            ..*lhs
        };
        Ok(l.interface_term(y)?.value)
    };

    let mut checks = Vec::new();
    let mut push = |name, observed: f64, threshold: f64, passed: bool, detail: String| {
        checks.push(AsymptoticCheck {
            name,
            observed,
            threshold,
            passed,
            detail,
        });
    };

    // interface term vanishes for p < 2
    {
        let mut worst: f64 = 0.0;
        let mut detail = format!("p = {p_low}, y = {y_far}");
        for m in [m_abs, -m_abs] {
            match term(m, p_low, y_far) {
                Ok(v) => worst = worst.max(v.abs()),
                Err(e) => {
                    worst = f64::INFINITY;
                    detail = e.to_string();
                }
            }
        }
        push(
            "interface_term_vanishes_below_p2",
            worst,
            1e-8,
            worst <= 1e-8,
            detail,
        );
    }

    // interface term diverges with sign -sgn(M) for p >= 2
    {
        let mut ok = true;
        let mut growth = f64::INFINITY;
        let mut detail = String::new();
        for p in [2.0, p_high] {
            for m in [m_abs, -m_abs] {
                match (term(m, p, y_mid), term(m, p, y_far)) {
                    (Ok(a), Ok(b)) => {
                        let g = b.abs() / a.abs();
                        growth = growth.min(g);
                        if b.signum() != -m.signum() || !(g > 1.0) {
                            ok = false;
                            detail.push_str(&format!("p = {p}, M = {m}: {a} -> {b}; "));
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        ok = false;
                        detail.push_str(&format!("{e}; "));
                    }
                }
            }
        }
        push("interface_term_diverges_from_p2", growth, 1.0, ok, detail);
    }

    // equivalents at y = 25
    let equivalent = |p: f64, m: f64| -> Result<f64> {
        let reference = if p == 2.0 {
            -2.0 * a_over_b * m / sqrt_pi() * y_mid * y_mid
        } else {
            -a_over_b * m * (p - 2.0) * y_mid.powi(3)
        };
        Ok(term(m, p, y_mid)? / reference)
    };
    for (name, p) in [
        ("interface_term_equivalent_p2", 2.0),
        ("interface_term_equivalent_above_p2", p_high),
    ] {
        let mut dev: f64 = 0.0;
        let mut detail = format!("p = {p}, y = {y_mid}");
        for m in [m_abs, -m_abs] {
            match equivalent(p, m) {
                Ok(r) => dev = dev.max((r - 1.0).abs()),
                Err(e) => {
                    dev = f64::INFINITY;
                    detail = e.to_string();
                }
            }
        }
        push(name, dev, 0.05, dev <= 0.05, detail);
    }

    // frozen term ~ sqrt(pi) γ0 M y³
    {
        let mut dev: f64 = 0.0;
        let mut detail = format!("y = {y_mid}");
        for m in [m_abs, -m_abs] {
            match frozen_term(m, y_mid, lhs.gamma0) {
                Ok(v) => {
                    let r = v / (sqrt_pi() * lhs.gamma0 * m * y_mid.powi(3));
                    dev = dev.max((r - 1.0).abs());
                }
                Err(e) => {
                    dev = f64::INFINITY;
                    detail = e.to_string();
                }
            }
        }
        push("frozen_term_equivalent", dev, 0.02, dev <= 0.02, detail);
    }

    // frozen term increasing for M > 0
    {
        let values: Vec<Option<f64>> = y_grid
            .iter()
            .map(|&y| frozen_term(m_abs, y, lhs.gamma0).ok())
            .collect();
        let violations = values
            .windows(2)
            .filter(|w| match (w[0], w[1]) {
                (Some(a), Some(b)) => !(b > a),
                _ => true,
            })
            .count();
        push(
            "frozen_term_increasing",
            violations as f64,
            0.0,
            violations == 0,
            format!("{} grid points, M = {m_abs}", y_grid.len()),
        );
    }

    AsymptoticReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::water_ice;
    use crate::model::{reduce, ReduceOptions};
    use crate::solver::SolveOptions;

    fn solved() -> ConvectiveSolution {
        ConvectiveSolution::solve(
            &water_ice(),
            ReduceOptions::strict(),
            &SolveOptions::default(),
        )
        .unwrap()
    }

    #[test]
    fn fit_recovers_exact_power() {
        let h = [1e-2, 5e-3, 2.5e-3];
        let r: Vec<f64> = h.iter().map(|x| 3.0 * x * x).collect();
        let (order, r2) = fit_order(&h, &r);
        assert!((order - 2.0).abs() < 1e-12);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solved_instance_verifies() {
        let report = verify_convective(&solved(), &VerifyConfig::default()).unwrap();
        assert!(report.passed());
        let ou = report.refinement_orders.u.unwrap();
        let ov = report.refinement_orders.v.unwrap();
        assert!(
            (ou - 2.0).abs() < 0.2 && (ov - 2.0).abs() < 0.2,
            "{ou} {ov}"
        );
        assert!(report.stefan_balance_gap <= 1e-8);
        assert!(report.convective_bc_gap.unwrap() <= 1e-8);
    }

    #[test]
    fn perturbed_xi_is_rejected() {
        let sol = solved();
        let bad = ConvectiveSolution::from_xi(&sol.phys, &sol.dimless, 1.01 * sol.xi).unwrap();
        match verify_convective(&bad, &VerifyConfig::default()) {
            Err(Error::VerificationFailed { component, report }) => {
                assert_eq!(component, "stefan_balance");
                assert!(
                    report.stefan_balance_gap > 1e-3,
                    "{}",
                    report.stefan_balance_gap
                );
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stefan_gap_equals_front_equation_residual() {
        let sol = solved();
        let xi = 0.8 * sol.xi;
        let off = ConvectiveSolution::from_xi(&sol.phys, &sol.dimless, xi).unwrap();
        let report = match verify_convective(&off, &VerifyConfig::default()) {
            Err(Error::VerificationFailed { report, .. }) => report,
            other => panic!("{other:?}"),
        };
        let lhs = ConvectiveLhs::from_params(&sol.dimless).unwrap();
        let f = lhs.eval(xi).unwrap().value - xi - sol.dimless.n_par * xi.powi(3);
        assert!((report.stefan_balance_gap - f.abs()).abs() < 1e-12);
    }

    #[test]
    fn temperature_instance_verifies() {
        let mut p = water_ice();
        p.b0_wall = Some(6.0);
        let sol = TemperatureSolution::solve(&p, ReduceOptions::strict(), &SolveOptions::default())
            .unwrap();
        let report = verify_temperature(&sol, &VerifyConfig::default()).unwrap();
        assert_eq!(report.wall_gap, Some(0.0));
        assert!(report.farfield_gap <= 1e-8);
    }

    #[test]
    fn report_json_keys_are_stable() {
        let report = verify_convective(&solved(), &VerifyConfig::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        for key in [
            "pde_u_residual",
            "pde_v_residual",
            "interface_temp_gap",
            "stefan_balance_gap",
            "convective_bc_gap",
            "farfield_gap",
            "refinement_orders",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn asymptotic_suite_passes_on_fixture() {
        let d = reduce(&water_ice(), ReduceOptions::strict()).unwrap();
        let lhs = ConvectiveLhs::from_params(&d).unwrap();
        let report = asymptotic_suite(&lhs, &default_asymptotic_grid());
        assert_eq!(report.checks.len(), 6);
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
    }
}
