//! Error-function family and the auxiliary functions of the front equations.
//!
//! Every function here combines exponentials before exponentiating. The
//! building block is a scaled Gaussian integral
//!
//! ```text
//! I(c, eta) = ∫₀^eta exp(-r² + 2 c r) dr = exp(c²) ∫_{-c}^{eta-c} exp(-u²) du
//! ```
//!
//! returned as `mantissa * exp(exponent)` with the exponent chosen so that
//! neither factor overflows. `g(p, y) = I(p y / 2, y)`, and the unfrozen
//! profile uses `I(p ξ / 2, eta)`.
//!
//! `erf` and `erfc` come from `libm`; `erfcx` is built on top of them.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::DimensionlessParams;

const SQRT_PI: f64 = 1.772_453_850_905_516;
const HALF_SQRT_PI: f64 = 0.886_226_925_452_758;

/// Exponents beyond this magnitude would over- or underflow a naive `exp`.
const EXP_SAFE: f64 = 700.0;
const LN_MAX: f64 = 709.782_712_893_384;

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function `exp(x²) erfc(x)`.
pub fn erfcx(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        // exp(x²)(2 - erfc(-x)); overflows below about -26.6
        let (hi, lo) = square_split(x);
        return 2.0 * hi.exp() * (1.0 + lo) - erfcx(-x);
    }
    if x < 12.0 {
        let (hi, lo) = square_split(x);
        hi.exp() * (1.0 + lo) * erfc(x)
    } else {
        erfcx_asymptotic(x)
    }
}

/// `x²` as `hi + lo` with `hi = fl(x*x)`, so that `exp(x²)` can be formed
/// without losing the rounding error of the square.
fn square_split(x: f64) -> (f64, f64) {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    (hi, lo)
}

/// `1/(x√π) Σ (-1)^k (2k-1)!! / (2x²)^k`, truncated at the first term below
/// `1e-17`. Used for `x >= 12`, where it converges to full precision
/// within a dozen terms.
fn erfcx_asymptotic(x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= -(2.0 * k - 1.0) * inv;
        sum += term;
        if term.abs() < 1e-17 || k > 40.0 {
            break;
        }
        k += 1.0;
    }
    sum / (x * SQRT_PI)
}

/// `ln(exp(a) + exp(b))`.
fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// A positive quantity stored as `mantissa * exp(exponent)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub exponent: f64,
}

impl Scaled {
    pub fn ln(&self) -> f64 {
        self.mantissa.ln() + self.exponent
    }

    /// Plain value; `None` when it is not representable.
    pub fn value(&self) -> Option<f64> {
        if self.mantissa == 0.0 {
            return Some(0.0);
        }
        if self.exponent.abs() < EXP_SAFE {
            return Some(self.mantissa * self.exponent.exp());
        }
        let ln = self.ln();
        (ln < LN_MAX).then(|| ln.exp())
    }

    /// True when `exp(exponent)` alone would not be representable.
    pub fn needs_log_space(&self) -> bool {
        self.exponent.abs() >= EXP_SAFE
    }
}

/// A function value plus a flag telling whether naive evaluation would have
/// over- or underflowed, so that log-space arithmetic was required.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluated {
    pub value: f64,
    pub log_space: bool,
}

impl Evaluated {
    fn direct(value: f64) -> Self {
        Self {
            value,
            log_space: false,
        }
    }
}

fn check_finite(function: &'static str, xs: &[f64]) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteInput { function })
    }
}

/// `∫₀^eta exp(-r² + 2 c r) dr` for `eta >= 0`, in scaled form.
///
/// Three cases by where the shifted interval `[-c, eta - c]` sits:
/// straddling zero (a sum of two `erf`s, no cancellation), entirely on the
/// positive side or entirely on the negative side (a difference of two
/// `erf`s, rewritten with `erfcx` once the lower end passes 0.5).
pub fn gauss_integral(c: f64, eta: f64) -> Result<Scaled> {
    check_finite("gauss_integral", &[c, eta])?;
    if eta < 0.0 {
        return Err(Error::DomainError {
            function: "gauss_integral",
            y: eta,
        });
    }
    if eta == 0.0 {
        return Ok(Scaled {
            mantissa: 0.0,
            exponent: 0.0,
        });
    }
    if (0.0..=eta).contains(&c) {
        return Ok(Scaled {
            mantissa: HALF_SQRT_PI * (erf(eta - c) + erf(c)),
            exponent: c * c,
        });
    }
    // a > b >= 0 are the ends of the interval after reflecting it onto the positive axis
    let (a, b) = if c < 0.0 { (eta - c, -c) } else { (c, c - eta) };
    if b < 0.5 {
        return Ok(Scaled {
            mantissa: HALF_SQRT_PI * (erf(a) - erf(b)),
            exponent: c * c,
        });
    }
    // exp(c²) (erfc(b) - erfc(a)) = exp(c² - b²) (erfcx(b) - erfcx(a) exp(b² - a²))
    // with c² - b² = 0 for c < 0 and eta (2c - eta) for c > eta; b² - a² = -eta (eta + 2|c|) or -eta (2c - eta).
    let (shift, decay) = if c < 0.0 {
        (0.0, -eta * (eta - 2.0 * c))
    } else {
        let e = eta * (2.0 * c - eta);
        (e, -e)
    };
    Ok(Scaled {
        mantissa: HALF_SQRT_PI * (erfcx(b) - erfcx(a) * decay.exp()),
        exponent: shift,
    })
}

/// `g(p, y) = ∫₀^y exp(-r² + p r y) dr` in scaled form.
pub fn g_scaled(p: f64, y: f64) -> Result<Scaled> {
    check_finite("g", &[p, y])?;
    if y < 0.0 {
        return Err(Error::DomainError { function: "g", y });
    }
    gauss_integral(0.5 * p * y, y)
}

/// `g(p, y)`; zero exactly at `y = 0`.
pub fn g_eval(p: f64, y: f64) -> Result<Evaluated> {
    let s = g_scaled(p, y)?;
    let value = s.value().ok_or(Error::OverflowUnrepresentable {
        function: "g",
        y,
        ln_value: s.ln(),
    })?;
    Ok(Evaluated {
        value,
        log_space: s.needs_log_space(),
    })
}

fn ratio_to_evaluated(
    function: &'static str,
    y: f64,
    numerator_exp: f64,
    ln_denominator: impl FnOnce() -> f64,
    direct_denominator: Option<f64>,
) -> Result<Evaluated> {
    if let Some(den) = direct_denominator {
        if numerator_exp.abs() < EXP_SAFE {
            return Ok(Evaluated::direct(numerator_exp.exp() / den));
        }
    }
    let ln_value = numerator_exp - ln_denominator();
    if ln_value >= LN_MAX {
        return Err(Error::OverflowUnrepresentable {
            function,
            y,
            ln_value,
        });
    }
    Ok(Evaluated {
        value: ln_value.exp(),
        log_space: true,
    })
}

/// `G1(p, y) = exp((p-1) y²) / (K0 + g(p, y))`.
pub fn g1_eval(p: f64, y: f64, k0: f64) -> Result<Evaluated> {
    check_finite("g1", &[p, y, k0])?;
    if y <= 0.0 || k0 <= 0.0 {
        return Err(Error::DomainError { function: "g1", y });
    }
    let g = g_scaled(p, y)?;
    let direct = (!g.needs_log_space()).then(|| k0 + g.mantissa * g.exponent.exp());
    ratio_to_evaluated(
        "g1",
        y,
        (p - 1.0) * y * y,
        || ln_add_exp(k0.ln(), g.ln()),
        direct,
    )
}

/// `G1~(p, y) = exp((p-1) y²) / g(p, y)`, the `K0 -> 0` limit of [`g1_eval`].
pub fn g1_tilde_eval(p: f64, y: f64) -> Result<Evaluated> {
    check_finite("g1_tilde", &[p, y])?;
    if y <= 0.0 {
        return Err(Error::DomainError {
            function: "g1_tilde",
            y,
        });
    }
    let g = g_scaled(p, y)?;
    // fold the g exponent into the numerator: no large intermediate at all
    let value_exp = (p - 1.0) * y * y - g.exponent;
    ratio_to_evaluated(
        "g1_tilde",
        y,
        value_exp,
        || g.mantissa.ln(),
        Some(g.mantissa),
    )
    .map(|mut e| {
        e.log_space |= g.needs_log_space();
        e
    })
}

/// `G2(y) = exp(-γ0² y²) / erfc(γ0 y) = 1 / erfcx(γ0 y)`.
pub fn g2_eval(y: f64, gamma0: f64) -> Result<Evaluated> {
    check_finite("g2", &[y, gamma0])?;
    if y <= 0.0 || gamma0 <= 0.0 {
        return Err(Error::DomainError { function: "g2", y });
    }
    let z = gamma0 * y;
    Ok(Evaluated {
        value: 1.0 / erfcx(z),
        log_space: z * z >= EXP_SAFE,
    })
}

/// `y + N y³`.
pub fn rhs_eval(n: f64, y: f64) -> Result<f64> {
    check_finite("rhs", &[n, y])?;
    Ok(y + n * y * y * y)
}

/// Left side of the convective front equation,
/// `δ1 (1 - (A M / B) y²) G1(p, y) - δ2 (1 + M y²) G2(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvectiveLhs {
    pub m_par: f64,
    pub p_par: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub k0: f64,
    pub gamma0: f64,
    pub a_init: f64,
    pub b_ext: f64,
}

impl ConvectiveLhs {
    pub fn from_params(d: &DimensionlessParams) -> Result<Self> {
        Ok(Self {
            m_par: d.m_par,
            p_par: d.p_par,
            delta1: d
                .delta1
                .ok_or_else(|| Error::invalid("b_ext", "convective problem needs `b_ext`"))?,
            delta2: d.delta2,
            k0: d
                .k0
                .ok_or_else(|| Error::invalid("h0", "convective problem needs `h0`"))?,
            gamma0: d.gamma0,
            a_init: d.a_init,
            b_ext: d.b_ext.expect("delta1 implies b_ext"),
        })
    }

    /// `(1 - (A M / B) y²) G1(p, y)`.
    pub fn interface_term(&self, y: f64) -> Result<Evaluated> {
        let g1 = g1_eval(self.p_par, y, self.k0)?;
        Ok(Evaluated {
            value: (1.0 - self.a_init * self.m_par / self.b_ext * y * y) * g1.value,
            log_space: g1.log_space,
        })
    }

    pub fn eval(&self, y: f64) -> Result<Evaluated> {
        let first = self.interface_term(y)?;
        let g2 = g2_eval(y, self.gamma0)?;
        Ok(Evaluated {
            value: self.delta1 * first.value - self.delta2 * (1.0 + self.m_par * y * y) * g2.value,
            log_space: first.log_space || g2.log_space,
        })
    }

    /// Limit of the left side as `y -> 0+`: `δ1/K0 - δ2`.
    pub fn limit_at_zero(&self) -> f64 {
        self.delta1 / self.k0 - self.delta2
    }
}

/// Left side of the temperature-problem front equation,
/// `δ1~ (1 - (A M / B0) y²) G1~(p, y) - δ2 (1 + M y²) G2(y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemperatureLhs {
    pub m_par: f64,
    pub p_par: f64,
    pub delta1_tilde: f64,
    pub delta2: f64,
    pub gamma0: f64,
    pub a_init: f64,
    pub b0_wall: f64,
}

impl TemperatureLhs {
    pub fn from_params(d: &DimensionlessParams) -> Result<Self> {
        Ok(Self {
            m_par: d.m_par,
            p_par: d.p_par,
            delta1_tilde: d
                .delta1_tilde
                .ok_or_else(|| Error::invalid("b0_wall", "temperature problem needs `b0_wall`"))?,
            delta2: d.delta2,
            gamma0: d.gamma0,
            a_init: d.a_init,
            b0_wall: d.b0_wall.expect("delta1_tilde implies b0_wall"),
        })
    }

    pub fn eval(&self, y: f64) -> Result<Evaluated> {
        let g1 = g1_tilde_eval(self.p_par, y)?;
        let g2 = g2_eval(y, self.gamma0)?;
        let first = (1.0 - self.a_init * self.m_par / self.b0_wall * y * y) * g1.value;
        Ok(Evaluated {
            value: self.delta1_tilde * first - self.delta2 * (1.0 + self.m_par * y * y) * g2.value,
            log_space: g1.log_space || g2.log_space,
        })
    }
}

/// Convenience wrapper over [`ConvectiveLhs::eval`].
pub fn lhs_convective(lhs: &ConvectiveLhs, y: f64) -> Result<Evaluated> {
    lhs.eval(y)
}

/// Convenience wrapper over [`TemperatureLhs::eval`].
pub fn lhs_temperature(lhs: &TemperatureLhs, y: f64) -> Result<Evaluated> {
    lhs.eval(y)
}

/// `(1 + M y²) G2(y)`, the frozen-side term.
pub fn frozen_term(m: f64, y: f64, gamma0: f64) -> Result<f64> {
    Ok((1.0 + m * y * y) * g2_eval(y, gamma0)?.value)
}

/// `√π`, exposed for asymptotic comparisons.
pub fn sqrt_pi() -> f64 {
    PI.sqrt()
}
