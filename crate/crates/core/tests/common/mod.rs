// Test-only oracles, written independently of the library internals.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use stefan_thaw::{DimensionlessParams, PhysicalParams};

const SQRT_PI: f64 = 1.772_453_850_905_516;

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive G7K15 integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (v, err) = gk15(f, a, b);
        if err <= tol || depth > 40 {
            return v;
        }
        let m = 0.5 * (a + b);
        rec(f, a, m, 0.5 * tol, depth + 1) + rec(f, m, b, 0.5 * tol, depth + 1)
    }
    rec(&f, a, b, tol, 0)
}

/// `∫₀^y exp(-r² + p r y) dr` by quadrature, to `1e-12` relative.
pub fn g_quadrature(p: f64, y: f64) -> f64 {
    // the integrand peaks at r = p y / 2 (clamped to [0, y]); scale by that peak
    let r_star = (0.5 * p * y).clamp(0.0, y);
    let peak = -r_star * r_star + p * r_star * y;
    let v = integrate(
        |r| (-r * r + p * r * y - peak).exp(),
        0.0,
        y,
        1e-14 * y.max(1e-300),
    );
    v * peak.exp()
}

/// `exp(x²) erfc(x)`: direct product below 25, continued fraction above.
pub fn erfcx_oracle(x: f64) -> f64 {
    if x < 25.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    // erfc(x) e^{x²} = (1/√π) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    let mut tail = x;
    // converged to double precision by 8 terms for x >= 25
    for k in (1..=12).rev() {
        tail = x + 0.5 * k as f64 / tail;
    }
    1.0 / (SQRT_PI * tail)
}

/// `G(M, p, y) - y - N y³` from the completed-square form of `g`, evaluated
/// with libm and without any scaling shared with the library.
pub fn front_residual_oracle(d: &DimensionlessParams, y: f64) -> f64 {
    let (m, p, n) = (d.m_par, d.p_par, d.n_par);
    let k0 = d.k0.expect("convective data");
    let b = d.b_ext.expect("convective data");
    let delta1 = d.delta1.expect("convective data");
    let e = 0.25 * p * p * y * y;
    let expo = (p - 1.0) * y * y - e;
    let g1 = if expo < -750.0 {
        0.0
    } else {
        let s = libm::erf((1.0 - 0.5 * p) * y) + libm::erf(0.5 * p * y);
        expo.exp() / (0.5 * SQRT_PI * s + k0 * (-e).exp())
    };
    let unfrozen = delta1 * (1.0 - d.a_init * m / b * y * y) * g1;
    let frozen = d.delta2 * (1.0 + m * y * y) / erfcx_oracle(d.gamma0 * y);
    unfrozen - frozen - y - n * y * y * y
}

/// Sign changes of `f` on a uniform grid of `points` intervals over
/// `[lo, hi]`, each refined by plain bisection.
pub fn scan_bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / points as f64;
    let mut roots = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=points {
        let b = lo + step * i as f64;
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if fa * fb < 0.0 {
            let (mut l, mut r, mut fl) = (a, b, fa);
            for _ in 0..200 {
                let mid = 0.5 * (l + r);
                if mid <= l || mid >= r {
                    break;
                }
                let fm = f(mid);
                if fm == 0.0 {
                    l = mid;
                    r = mid;
                    break;
                }
                if fl * fm < 0.0 {
                    r = mid;
                } else {
                    l = mid;
                    fl = fm;
                }
            }
            roots.push(0.5 * (l + r));
        }
        a = b;
        fa = fb;
    }
    roots
}

/// Signs of `M` and `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Quadrant {
    pub m_positive: bool,
    pub n_positive: bool,
}

impl Quadrant {
    pub const ALL: [Quadrant; 4] = [
        Quadrant {
            m_positive: true,
            n_positive: true,
        },
        Quadrant {
            m_positive: true,
            n_positive: false,
        },
        Quadrant {
            m_positive: false,
            n_positive: true,
        },
        Quadrant {
            m_positive: false,
            n_positive: false,
        },
    ];

    pub fn label(&self) -> &'static str {
        match (self.m_positive, self.n_positive) {
            (true, true) => "M>0,N>0",
            (true, false) => "M>0,N<0",
            (false, true) => "M<0,N>0",
            (false, false) => "M<0,N<0",
        }
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// `(A/B) k_F / sqrt(pi d_F)`.
pub fn threshold_h0(p: &PhysicalParams) -> f64 {
    let d_f = p.k_f / (p.rho_f * p.c_f);
    p.a_init / p.b_ext.unwrap() * p.k_f / (std::f64::consts::PI * d_f).sqrt()
}

/// Random soil-like data in the requested quadrant. The sign of `M` follows
/// `gamma_cc`; the sign of `N` additionally follows `c_w - c_i`.
/// `h0` is log-uniform in `[0.2, 50]` times the threshold, avoiding `[0.8, 1.25]`.
pub fn random_params(rng: &mut ChaCha8Rng, q: Quadrant) -> PhysicalParams {
    let gamma = log_uniform(rng, 1e-5, 1e-4);
    let gamma_cc = if q.m_positive { gamma } else { -gamma };
    let c_w = rng.gen_range(0.8..1.2);
    let gap = rng.gen_range(0.2..0.5);
    let c_i = if q.m_positive == q.n_positive {
        c_w - gap
    } else {
        c_w + gap
    };
    let mut p = PhysicalParams {
        epsilon: rng.gen_range(0.2..0.6),
        rho_w: 1.0,
        rho_i: rng.gen_range(0.85..0.97),
        c_w,
        c_i,
        c_u: rng.gen_range(0.3..0.6),
        c_f: rng.gen_range(0.3..0.6),
        k_u: rng.gen_range(0.002..0.008),
        k_f: rng.gen_range(0.003..0.01),
        rho_u: rng.gen_range(1.5..2.5),
        rho_f: rng.gen_range(1.5..2.5),
        latent_l: 80.0,
        gamma_cc,
        mu: rng.gen_range(0.01..0.02),
        perm_k: log_uniform(rng, 1e-10, 1e-8),
        a_init: rng.gen_range(1.0..10.0),
        b_ext: Some(rng.gen_range(2.0..20.0)),
        b0_wall: None,
        h0: None,
    };
    let factor = if rng.gen_bool(0.5) {
        log_uniform(rng, 1.25, 50.0)
    } else {
        log_uniform(rng, 0.2, 0.8)
    };
    p.h0 = Some(threshold_h0(&p) * factor);
    p
}

/// Like [`random_params`] restricted to `M > 0, N > 0, p <= 1` and `h0`
/// above the threshold by a factor in `[1.25, 50]`.
pub fn random_monotone_params(rng: &mut ChaCha8Rng) -> PhysicalParams {
    let mut p = random_params(rng, Quadrant::ALL[0]);
    p.h0 = Some(threshold_h0(&p) * log_uniform(rng, 1.25, 50.0));
    p
}

pub fn water_ice() -> PhysicalParams {
    PhysicalParams::from_config_file(
        concat!(env!("CARGO_MANIFEST_DIR"), "/data/water_ice.cfg").as_ref(),
    )
    .expect("fixture parses")
}

pub fn data_path(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}
