//! Root enumeration for the front equations and regime classification.
//!
//! Both equations are solved the same way: a sign scan of `LHS - RHS` on a
//! geometric grid, then each sign change is narrowed by a bracketed secant
//! (Illinois variant) that falls back to bisection whenever the secant step
//! stalls. All roots found are returned; the smallest is the principal one.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{reduce, DimensionlessParams, PhysicalParams, ReduceOptions};
use crate::special_functions::{rhs_eval, sqrt_pi, ConvectiveLhs, TemperatureLhs};

/// Environment variable capping the number of worker threads used by sweeps.
pub const THREADS_ENV: &str = "STEFAN_THAW_THREADS";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Right end of the scan window. `None` picks
    /// `4 * max(sqrt(B/(A|M|)), sqrt(1/|N|), 1)`.
    pub scan_max: Option<f64>,
    pub scan_points: usize,
    /// Bound on `|LHS - RHS|` at an accepted root.
    pub tolerance: f64,
    /// Left end of the scan window as a fraction of `scan_max`.
    pub scan_floor: f64,
    pub max_polish_iterations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            scan_max: None,
            scan_points: 2048,
            tolerance: 1e-12,
            scan_floor: 1e-9,
            max_polish_iterations: 300,
        }
    }
}

/// Roots of one front equation, in increasing order, with the scan brackets
/// they were polished from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<f64>,
    pub brackets: Vec<(f64, f64)>,
    pub residuals: Vec<f64>,
    pub scan_max: f64,
    pub scan_points: usize,
}

impl RootSet {
    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    /// Smallest root.
    pub fn principal(&self) -> Option<f64> {
        self.roots.first().copied()
    }

    pub fn secondary(&self) -> &[f64] {
        self.roots.get(1..).unwrap_or(&[])
    }

    /// Roots strictly inside `(lo, hi)`.
    pub fn in_range(&self, lo: f64, hi: f64) -> Vec<f64> {
        self.roots
            .iter()
            .copied()
            .filter(|r| *r > lo && *r < hi)
            .collect()
    }
}

/// `n` points from `lo` to `hi` (both included) with a constant ratio.
pub fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo * (ratio * i as f64).exp()
            }
        })
        .collect()
}

/// Sign scan of `f` over a geometric grid on `[lo, hi]`, then polish of every
/// bracket.
pub fn find_roots<F>(f: F, lo: f64, hi: f64, points: usize, opts: &SolveOptions) -> Result<RootSet>
where
    F: Fn(f64) -> Result<f64>,
{
    let grid = geometric_grid(lo, hi, points);
    let values = grid.iter().map(|&y| f(y)).collect::<Result<Vec<_>>>()?;

    let mut roots = Vec::new();
    let mut brackets = Vec::new();
    let mut residuals = Vec::new();
    let mut i = 0;
    while i + 1 < grid.len() {
        let (y0, f0) = (grid[i], values[i]);
        let (y1, f1) = (grid[i + 1], values[i + 1]);
        if f1 == 0.0 {
            // root exactly on a grid node; bracket with its neighbours
            let right = grid.get(i + 2).copied().unwrap_or(y1);
            roots.push(y1);
            brackets.push((y0, right));
            residuals.push(0.0);
            i += 2;
            continue;
        }
        if f0 != 0.0 && f0.signum() != f1.signum() {
            let (root, residual) = polish(&f, y0, f0, y1, f1, opts)?;
            roots.push(root);
            brackets.push((y0, y1));
            residuals.push(residual);
        }
        i += 1;
    }

    Ok(RootSet {
        roots,
        brackets,
        residuals,
        scan_max: hi,
        scan_points: points,
    })
}

fn polish<F>(f: &F, lo: f64, flo: f64, hi: f64, fhi: f64, opts: &SolveOptions) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<f64>,
{
    let (mut a, mut fa, mut b, mut fb) = (lo, flo, hi, fhi);
    let mut best = if fa.abs() < fb.abs() {
        (a, fa)
    } else {
        (b, fb)
    };
    // which end moved last: -1 left, +1 right
    let mut side = 0i8;
    let mut force_bisect = false;

    for _ in 0..opts.max_polish_iterations {
        let width = b - a;
        if width <= 4.0 * f64::EPSILON * b.abs() {
            break;
        }
        let mut x = if force_bisect {
            0.5 * (a + b)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            break;
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
        force_bisect = (b - a) > 0.5 * width;
    }

    if best.1.abs() <= opts.tolerance {
        Ok((best.0, best.1.abs()))
    } else {
        Err(Error::ToleranceNotReached {
            lo,
            hi,
            residual: best.1.abs(),
            tolerance: opts.tolerance,
        })
    }
}

fn default_scan_max(m: f64, n: f64, a: f64, b: f64) -> f64 {
    let mut scale: f64 = 1.0;
    if m != 0.0 {
        scale = scale.max((b / (a * m.abs())).sqrt());
    }
    if n != 0.0 {
        scale = scale.max((1.0 / n.abs()).sqrt());
    }
    4.0 * scale
}

fn scan_window(opts: &SolveOptions, m: f64, n: f64, a: f64, b: f64) -> (f64, f64) {
    let hi = opts
        .scan_max
        .unwrap_or_else(|| default_scan_max(m, n, a, b));
    (hi * opts.scan_floor, hi)
}

/// `(A/B) k_F / sqrt(pi d_F)`: phase change in the `M > 0, N > 0` quadrant
/// needs `h0` strictly above this.
pub fn critical_h0(phys: &PhysicalParams) -> Result<f64> {
    let b = phys
        .b_ext
        .ok_or_else(|| Error::invalid("b_ext", "critical h0 needs the external temperature"))?;
    let d_f = phys.k_f / (phys.rho_f * phys.c_f);
    Ok(phys.a_init / b * phys.k_f / (std::f64::consts::PI * d_f).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    fn of(x: f64) -> Self {
        if x > 0.0 {
            Sign::Positive
        } else if x < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PClass {
    /// `p <= 1`
    AtMostOne,
    /// `1 < p <= 2`
    UpToTwo,
    /// `p > 2`
    AboveTwo,
}

impl PClass {
    fn of(p: f64) -> Self {
        if p <= 1.0 {
            PClass::AtMostOne
        } else if p <= 2.0 {
            PClass::UpToTwo
        } else {
            PClass::AboveTwo
        }
    }
}

/// `h0` against the critical value, decided through the equivalent
/// comparison of `δ1/K0` with `δ2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum H0Condition {
    Above,
    AtThreshold,
    Below,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Guarantee {
    UniqueInRange,
    AtLeastOne,
    AtLeastTwo,
    ExistsAtQ1,
    NoneInRange,
    Unclassified,
}

/// The existence/uniqueness statement whose hypotheses all hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// `M > 0, N > 0, p <= 1, h0 > critical`: exactly one root below `sqrt(B/(AM))`.
    PositiveUnique,
    /// `M > 0, N > 0, h0 > critical`: at least one root below `sqrt(B/(AM))`.
    PositiveExistence,
    /// `M > 0, N > 0, p <= 1, h0 <= critical`: no root below `sqrt(B/(AM))`.
    PositiveBelowThreshold,
    /// `M > 0, N < 0, h0 > critical, B < AM/|N|`: at least one root below `sqrt(B/(AM))`.
    MixedInterfaceDominant,
    /// `M < 0, N > 0, h0 > critical`, LHS has a first zero `q1`: a root in `(0, q1)`.
    NegativeMBeforeFirstZero,
    /// `M < 0, N > 0, h0 <= critical`, LHS outgrows the cubic: at least one root.
    NegativeMFastGrowth,
    /// `M < 0, N < 0, h0 > critical, q1 < sqrt(1/|N|)`: at least two roots.
    NegativeTwoRoots,
    /// `M < 0, N < 0, h0 > critical, q1 = sqrt(1/|N|)`: `q1` itself is a root.
    NegativeRootAtQ1,
    /// `M < 0, N < 0, h0 < critical`: at least one root.
    NegativeBelowThreshold,
    /// `M > 0, N > 0, p <= 2` with a wall temperature: exactly one root below `sqrt(B0/(AM))`.
    TemperatureUnique,
    /// Classical reduction (`M = N = p = 0`): exactly one root.
    ClassicalUnique,
    None,
}

impl Clause {
    pub fn describe(&self) -> &'static str {
        match self {
            Clause::PositiveUnique => {
                "M>0, N>0, p<=1, h0 above critical: unique root in (0, sqrt(B/(AM)))"
            }
            Clause::PositiveExistence => {
                "M>0, N>0, h0 above critical: at least one root in (0, sqrt(B/(AM)))"
            }
            Clause::PositiveBelowThreshold => {
                "M>0, N>0, p<=1, h0 <= critical: no root in (0, sqrt(B/(AM))), no phase change"
            }
            Clause::MixedInterfaceDominant => {
                "M>0, N<0, h0 above critical, B < AM/|N|: at least one root in (0, sqrt(B/(AM)))"
            }
            Clause::NegativeMBeforeFirstZero => {
                "M<0, N>0, h0 above critical, LHS zero q1 found: at least one root in (0, q1)"
            }
            Clause::NegativeMFastGrowth => {
                "M<0, N>0, h0 <= critical, LHS/RHS limit above 1: at least one positive root"
            }
            Clause::NegativeTwoRoots => {
                "M<0, N<0, h0 above critical, q1 < sqrt(1/|N|): at least two positive roots"
            }
            Clause::NegativeRootAtQ1 => {
                "M<0, N<0, h0 above critical, q1 = sqrt(1/|N|): q1 is a root"
            }
            Clause::NegativeBelowThreshold => {
                "M<0, N<0, h0 below critical: at least one positive root"
            }
            Clause::TemperatureUnique => {
                "M>0, N>0, p<=2, wall temperature: unique root in (0, sqrt(B0/(AM)))"
            }
            Clause::ClassicalUnique => "classical reduction M=N=p=0: unique positive root",
            Clause::None => "no existence statement applies to these data",
        }
    }
}

/// A hypothesis that was evaluated; `holds == None` means it could not be
/// verified numerically (for example no LHS zero inside the scan window).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hypothesis {
    pub name: &'static str,
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub m_sign: Sign,
    pub n_sign: Sign,
    pub p_class: PClass,
    pub h0_condition: Option<H0Condition>,
    pub extra_conditions: Vec<Hypothesis>,
    pub guarantee: Guarantee,
    /// Interval the guarantee refers to, when it is a bounded one.
    pub range: Option<(f64, f64)>,
    pub clause: Clause,
    /// Smallest positive zero of the LHS, when it was looked for and found.
    pub q1: Option<f64>,
    pub notes: Vec<String>,
    /// Set by the solvers when the roots found contradict the guarantee.
    pub guarantee_violated: bool,
}

impl RegimeReport {
    fn new(d: &DimensionlessParams) -> Self {
        Self {
            m_sign: Sign::of(d.m_par),
            n_sign: Sign::of(d.n_par),
            p_class: PClass::of(d.p_par),
            h0_condition: None,
            extra_conditions: Vec::new(),
            guarantee: Guarantee::Unclassified,
            range: None,
            clause: Clause::None,
            q1: None,
            notes: Vec::new(),
            guarantee_violated: false,
        }
    }

    fn hypothesis(&mut self, name: &'static str, holds: Option<bool>) -> Option<bool> {
        self.extra_conditions.push(Hypothesis { name, holds });
        holds
    }

    fn set(&mut self, clause: Clause, guarantee: Guarantee, range: Option<(f64, f64)>) {
        self.clause = clause;
        self.guarantee = guarantee;
        self.range = range;
    }

    pub fn summary(&self) -> String {
        format!("{:?} ({})", self.guarantee, self.clause.describe())
    }

    /// True when the data are in the quadrant where phase change needs
    /// `h0` above the critical value and it is not.
    pub fn is_below_threshold(&self) -> bool {
        self.clause == Clause::PositiveBelowThreshold
    }

    /// Compares the roots found with the guarantee and records a violation.
    fn check_roots(&mut self, roots: &RootSet) {
        let (lo, hi) = self.range.unwrap_or((0.0, f64::INFINITY));
        let inside = roots.in_range(lo, hi).len();
        let ok = match self.guarantee {
            Guarantee::UniqueInRange => inside == 1,
            Guarantee::AtLeastOne | Guarantee::ExistsAtQ1 => inside >= 1,
            Guarantee::AtLeastTwo => inside >= 2,
            Guarantee::NoneInRange => inside == 0,
            Guarantee::Unclassified => true,
        };
        if !ok {
            self.guarantee_violated = true;
            self.notes.push(format!(
                "{inside} root(s) found in ({lo}, {hi}) contradict {:?}",
                self.guarantee
            ));
        }
    }
}

impl fmt::Display for RegimeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "M sign: {:?}, N sign: {:?}, p class: {:?}",
            self.m_sign, self.n_sign, self.p_class
        )?;
        if let Some(h) = self.h0_condition {
            writeln!(f, "h0 vs critical: {h:?}")?;
        }
        for h in &self.extra_conditions {
            let v = match h.holds {
                Some(true) => "true",
                Some(false) => "false",
                None => "unverified",
            };
            writeln!(f, "  {}: {v}", h.name)?;
        }
        if let Some(q1) = self.q1 {
            writeln!(f, "q1 = {q1}")?;
        }
        write!(f, "guarantee: {:?}", self.guarantee)?;
        if let Some((lo, hi)) = self.range {
            write!(f, " in ({lo}, {hi})")?;
        }
        writeln!(f)?;
        writeln!(f, "clause: {}", self.clause.describe())?;
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

fn h0_condition(lhs: &ConvectiveLhs) -> H0Condition {
    let lead = lhs.delta1 / lhs.k0;
    let diff = lead - lhs.delta2;
    if diff.abs() <= 8.0 * f64::EPSILON * lead.max(lhs.delta2) {
        H0Condition::AtThreshold
    } else if diff > 0.0 {
        H0Condition::Above
    } else {
        H0Condition::Below
    }
}

/// Smallest positive zero of the convective LHS within the scan window.
pub fn first_lhs_zero(
    lhs: &ConvectiveLhs,
    d: &DimensionlessParams,
    opts: &SolveOptions,
) -> Result<Option<f64>> {
    let (lo, hi) = scan_window(opts, d.m_par, d.n_par, lhs.a_init, lhs.b_ext);
    let zeros = find_roots(|y| Ok(lhs.eval(y)?.value), lo, hi, opts.scan_points, opts)?;
    Ok(zeros.principal())
}

/// Relative tolerance for deciding `q1 = sqrt(1/|N|)`.
const Q1_MATCH_REL: f64 = 1e-9;

/// Evaluates the hypotheses of every existence statement that could apply
/// to the convective problem and records which one fires. Never fails: data
/// that fit no statement come back `Unclassified`.
pub fn classify(d: &DimensionlessParams, opts: &SolveOptions) -> RegimeReport {
    let mut r = RegimeReport::new(d);
    let lhs = match ConvectiveLhs::from_params(d) {
        Ok(l) => l,
        Err(e) => {
            r.notes.push(format!("not a convective problem: {e}"));
            return r;
        }
    };
    let cond = h0_condition(&lhs);
    r.h0_condition = Some(cond);
    let above = cond == H0Condition::Above;
    let (m, n, p) = (d.m_par, d.n_par, d.p_par);
    let sqrt_pi = sqrt_pi();

    if m == 0.0 && n == 0.0 && p == 0.0 {
        r.notes
            .push("classical reduction (rho = 0): M = N = p = 0".into());
        if r.hypothesis("h0 > critical", Some(above)) == Some(true) {
            r.set(
                Clause::ClassicalUnique,
                Guarantee::UniqueInRange,
                Some((0.0, f64::INFINITY)),
            );
        }
        return r;
    }
    if m == 0.0 || n == 0.0 {
        r.notes
            .push("M = 0 or N = 0: outside the four sign quadrants".into());
        return r;
    }

    match (m > 0.0, n > 0.0) {
        (true, true) => {
            let bound = d.interface_bound().expect("M > 0 and B present");
            let small_p = r.hypothesis("p <= 1", Some(p <= 1.0)) == Some(true);
            r.hypothesis("h0 > critical", Some(above));
            if above && small_p {
                r.set(
                    Clause::PositiveUnique,
                    Guarantee::UniqueInRange,
                    Some((0.0, bound)),
                );
            } else if above {
                r.set(
                    Clause::PositiveExistence,
                    Guarantee::AtLeastOne,
                    Some((0.0, bound)),
                );
            } else if small_p {
                r.set(
                    Clause::PositiveBelowThreshold,
                    Guarantee::NoneInRange,
                    Some((0.0, bound)),
                );
            }
        }
        (true, false) => {
            let bound = d.interface_bound().expect("M > 0 and B present");
            r.hypothesis("h0 > critical", Some(above));
            let dominant = lhs.b_ext < lhs.a_init * m / n.abs();
            r.hypothesis("B < AM/|N|", Some(dominant));
            if above && dominant {
                r.set(
                    Clause::MixedInterfaceDominant,
                    Guarantee::AtLeastOne,
                    Some((0.0, bound)),
                );
            }
        }
        (false, true) => {
            r.hypothesis("h0 > critical", Some(above));
            if above {
                let q1 = first_lhs_zero(&lhs, d, opts).ok().flatten();
                r.q1 = q1;
                match q1 {
                    Some(q1) => {
                        r.hypothesis("LHS has a positive zero", Some(true));
                        r.set(
                            Clause::NegativeMBeforeFirstZero,
                            Guarantee::AtLeastOne,
                            Some((0.0, q1)),
                        );
                    }
                    None => {
                        r.hypothesis("LHS has a positive zero", None);
                        r.notes.push(
                            "no LHS zero inside the scan window; hypothesis unverified".into(),
                        );
                    }
                }
            } else {
                let stated = n < lhs.delta2 * sqrt_pi * m.abs() * lhs.gamma0;
                r.hypothesis("N < delta2 sqrt(pi) |M| gamma0", Some(stated));
                // limit of LHS/RHS as y -> inf, taken from the asymptotic equivalents
                let mut limit = -lhs.delta2 * sqrt_pi * lhs.gamma0 * m / n;
                if p > 2.0 {
                    limit -= lhs.delta1 * lhs.a_init * m * (p - 2.0) / (lhs.b_ext * n);
                }
                let grows = limit > 1.0;
                r.hypothesis("lim LHS/RHS > 1", Some(grows));
                if grows {
                    r.set(Clause::NegativeMFastGrowth, Guarantee::AtLeastOne, None);
                }
                if stated != grows {
                    r.notes.push(format!(
                        "stated growth condition ({stated}) and the limit form ({grows}) disagree; the limit form was used"
                    ));
                }
            }
        }
        (false, false) => {
            let cubic = d.cubic_bound().expect("N != 0");
            r.hypothesis("h0 > critical", Some(above));
            r.hypothesis("h0 < critical", Some(cond == H0Condition::Below));
            if above {
                let q1 = first_lhs_zero(&lhs, d, opts).ok().flatten();
                r.q1 = q1;
                match q1 {
                    Some(q1) => {
                        r.hypothesis("LHS has a positive zero", Some(true));
                        let matched = ((q1 - cubic) / cubic).abs() <= Q1_MATCH_REL;
                        let below = !matched && q1 < cubic;
                        r.hypothesis("q1 < sqrt(1/|N|)", Some(below));
                        r.hypothesis("q1 = sqrt(1/|N|)", Some(matched));
                        if below {
                            r.set(Clause::NegativeTwoRoots, Guarantee::AtLeastTwo, None);
                        } else if matched {
                            r.set(
                                Clause::NegativeRootAtQ1,
                                Guarantee::ExistsAtQ1,
                                Some((0.0, f64::INFINITY)),
                            );
                        }
                    }
                    None => {
                        r.hypothesis("LHS has a positive zero", None);
                        r.notes.push(
                            "no LHS zero inside the scan window; hypothesis unverified".into(),
                        );
                    }
                }
            } else if cond == H0Condition::Below {
                r.set(Clause::NegativeBelowThreshold, Guarantee::AtLeastOne, None);
            }
        }
    }
    r
}

fn classify_temperature(d: &DimensionlessParams) -> RegimeReport {
    let mut r = RegimeReport::new(d);
    let (m, n, p) = (d.m_par, d.n_par, d.p_par);
    if m == 0.0 && n == 0.0 && p == 0.0 {
        r.set(
            Clause::ClassicalUnique,
            Guarantee::UniqueInRange,
            Some((0.0, f64::INFINITY)),
        );
        return r;
    }
    let mp = r.hypothesis("M > 0", Some(m > 0.0)) == Some(true);
    let np = r.hypothesis("N > 0", Some(n > 0.0)) == Some(true);
    let pp = r.hypothesis("p <= 2", Some(p <= 2.0)) == Some(true);
    if mp && np && pp {
        let bound = d.wall_interface_bound().expect("M > 0 and B0 present");
        r.set(
            Clause::TemperatureUnique,
            Guarantee::UniqueInRange,
            Some((0.0, bound)),
        );
    }
    r
}

/// All positive roots of the convective front equation
/// `G(M, p, y) = y + N y³`, with the regime classification.
pub fn solve_xi(d: &DimensionlessParams, opts: &SolveOptions) -> Result<(RootSet, RegimeReport)> {
    let lhs = ConvectiveLhs::from_params(d)?;
    let mut report = classify(d, opts);
    let (lo, hi) = scan_window(opts, d.m_par, d.n_par, lhs.a_init, lhs.b_ext);
    let n = d.n_par;
    let roots = find_roots(
        |y| Ok(lhs.eval(y)?.value - rhs_eval(n, y)?),
        lo,
        hi,
        opts.scan_points,
        opts,
    )?;
    report.check_roots(&roots);
    if roots.is_empty() {
        return Err(Error::NoRootFound {
            scan_max: hi,
            report: Box::new(report),
        });
    }
    Ok((roots, report))
}

/// All positive roots of the temperature-problem front equation. When the
/// data guarantee uniqueness, anything but exactly one root inside
/// `(0, sqrt(B0/(AM)))` is reported as [`Error::UniquenessViolation`].
pub fn solve_omega(d: &DimensionlessParams, opts: &SolveOptions) -> Result<RootSet> {
    let lhs = TemperatureLhs::from_params(d)?;
    let mut report = classify_temperature(d);
    let (lo, hi) = scan_window(opts, d.m_par, d.n_par, lhs.a_init, lhs.b0_wall);
    let n = d.n_par;
    let roots = find_roots(
        |y| Ok(lhs.eval(y)?.value - rhs_eval(n, y)?),
        lo,
        hi,
        opts.scan_points,
        opts,
    )?;
    report.check_roots(&roots);
    if roots.is_empty() {
        return Err(Error::NoRootFound {
            scan_max: hi,
            report: Box::new(report),
        });
    }
    if report.guarantee == Guarantee::UniqueInRange
        && (report.guarantee_violated || roots.len() != 1)
    {
        return Err(Error::UniquenessViolation {
            upper: report.range.map_or(f64::INFINITY, |r| r.1),
            found: roots.roots,
        });
    }
    Ok(roots)
}

/// Data for which the front coefficient is proven unique and increasing in
/// `h0`: `M > 0, N > 0, p <= 1`, or the classical reduction.
pub fn in_monotone_regime(d: &DimensionlessParams) -> bool {
    let classical = d.m_par == 0.0 && d.n_par == 0.0 && d.p_par == 0.0;
    classical || (d.m_par > 0.0 && d.n_par > 0.0 && d.p_par <= 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub h0: f64,
    pub xi: f64,
}

/// Reads [`THREADS_ENV`].
pub fn thread_cap_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|n| *n > 0)
}

/// Runs `f` on a pool of at most `threads` workers (the global pool when `None`).
pub fn with_thread_cap<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads.and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Front coefficient along a grid of `h0` values; errors with
/// [`Error::MonotonicityViolation`] if it ever decreases.
pub fn monotonicity_sweep(
    phys: &PhysicalParams,
    reduce_opts: ReduceOptions,
    h0_grid: &[f64],
    opts: &SolveOptions,
    threads: Option<usize>,
) -> Result<Vec<SweepPoint>> {
    let critical = critical_h0(phys)?;
    if let Some(&bad) = h0_grid.iter().find(|&&h| h <= critical) {
        return Err(Error::HypothesesNotMet(format!(
            "h0 = {bad} is not above the critical value {critical}"
        )));
    }
    let base = reduce(phys, reduce_opts)?;
    if !in_monotone_regime(&base) {
        return Err(Error::HypothesesNotMet(format!(
            "monotonicity needs M > 0, N > 0, p <= 1 (got M = {}, N = {}, p = {})",
            base.m_par, base.n_par, base.p_par
        )));
    }

    let points = with_thread_cap(threads, || {
        h0_grid
            .par_iter()
            .map(|&h0| {
                let mut p = phys.clone();
                p.h0 = Some(h0);
                let d = reduce(&p, reduce_opts)?;
                let (roots, report) = solve_xi(&d, opts)?;
                let (lo, hi) = report.range.unwrap_or((0.0, f64::INFINITY));
                let inside = roots.in_range(lo, hi);
                match inside.as_slice() {
                    [xi] => Ok(SweepPoint { h0, xi: *xi }),
                    _ => Err(Error::UniquenessViolation {
                        upper: hi,
                        found: roots.roots,
                    }),
                }
            })
            .collect::<Result<Vec<_>>>()
    })?;

    for w in points.windows(2) {
        if w[1].xi < w[0].xi - opts.tolerance {
            return Err(Error::MonotonicityViolation {
                h0_lo: w[0].h0,
                xi_lo: w[0].xi,
                h0_hi: w[1].h0,
                xi_hi: w[1].xi,
            });
        }
    }
    Ok(points)
}
