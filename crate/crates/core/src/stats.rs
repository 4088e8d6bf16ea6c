//! Trend validation: one-tailed regression t-tests and percent error.

use alloc::vec::Vec;

use crate::Error;

const CF_MAX_ITER: usize = 500;
const CF_EPS: f64 = 1e-16;
const CF_TINY: f64 = 1e-300;

/// Regularized incomplete beta `I_x(a, b)`, with `y = 1 - x` passed
/// separately so callers can avoid cancellation near `x = 1`.
fn inc_beta(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    let ln_front = a * libm::log(x) + b * libm::log(y) + libm::lgamma(a + b)
        - libm::lgamma(a)
        - libm::lgamma(b);
    let front = libm::exp(ln_front);
    // the continued fraction converges fast for x < (a + 1) / (a + b + 2)
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_cf(a, b, x) / a
    } else {
        1.0 - front * beta_cf(b, a, y) / b
    }
}

/// Continued fraction for the incomplete beta (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < CF_TINY {
        d = CF_TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < CF_TINY {
            d = CF_TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < CF_TINY {
            c = CF_TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function `I_x(a, b)` for `a, b > 0`,
/// `0 <= x <= 1`.
pub fn regularized_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    inc_beta(a, b, x, 1.0 - x)
}

/// Upper tail `P(T >= t)` of Student's t with `df` degrees of freedom.
pub fn t_tail(t: f64, df: u32) -> f64 {
    assert!(df >= 1, "t distribution needs df >= 1");
    if t.is_nan() {
        return f64::NAN;
    }
    if t == 0.0 {
        return 0.5;
    }
    if t.is_infinite() {
        return if t > 0.0 { 0.0 } else { 1.0 };
    }
    let nu = df as f64;
    let t2 = t * t;
    let x = nu / (nu + t2);
    let y = t2 / (nu + t2);
    let half = 0.5 * inc_beta(0.5 * nu, 0.5, x, y);
    if t > 0.0 {
        half
    } else {
        1.0 - half
    }
}

/// Hypothesized direction of a trend.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Increasing,
    Decreasing,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Increasing => "increasing",
            Direction::Decreasing => "decreasing",
        }
    }
}

/// Ordinary least squares fit of `ys` on `xs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub slope_se: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit, Error> {
    if xs.len() != ys.len() {
        return Err(Error::Degenerate("xs and ys differ in length"));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::Degenerate("need at least 3 samples"));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Degenerate("xs have zero variance"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let slope_se = libm::sqrt(sse / (nf - 2.0) / sxx);
    Ok(LinearFit {
        slope,
        intercept,
        slope_se,
    })
}

/// Result of a one-tailed regression t-test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendTest {
    pub slope: f64,
    pub t_statistic: f64,
    pub p_value: f64,
    pub direction: Direction,
    pub n: usize,
}

impl TrendTest {
    /// Direction supported at level `alpha`.
    pub fn significant(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// One-tailed t-test of the OLS slope of `ys` on `xs` against zero, in the
/// hypothesized `direction`, with `n - 2` degrees of freedom.
pub fn trend_test(xs: &[f64], ys: &[f64], direction: Direction) -> Result<TrendTest, Error> {
    let fit = linear_fit(xs, ys)?;
    let t = if fit.slope_se > 0.0 {
        fit.slope / fit.slope_se
    } else if fit.slope == 0.0 {
        0.0
    } else {
        f64::INFINITY.copysign(fit.slope)
    };
    let df = (xs.len() - 2) as u32;
    let p_value = match direction {
        Direction::Increasing => t_tail(t, df),
        Direction::Decreasing => t_tail(-t, df),
    };
    Ok(TrendTest {
        slope: fit.slope,
        t_statistic: t,
        p_value,
        direction,
        n: xs.len(),
    })
}

/// Flattens per-time observation groups into regression samples, one sample
/// per observation.
pub fn pooled_samples(times: &[f64], groups: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, g) in times.iter().zip(groups) {
        for &y in g {
            xs.push(t);
            ys.push(y);
        }
    }
    (xs, ys)
}

/// `|model - data| / data * 100`; `None` when `data` is zero.
pub fn percent_error(model: f64, data: f64) -> Option<f64> {
    (data != 0.0).then(|| (model - data).abs() / data * 100.0)
}
