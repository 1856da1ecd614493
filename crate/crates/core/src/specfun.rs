//! Dawson function, imaginary error function and generalized Laguerre
//! polynomials.
//!
//! `dawson` and `erfi` are computed by independent routes so that the identity
//! `D(w) = √π e^{-w²} erfi(w) / 2` is a meaningful cross-check:
//!
//! * `dawson`: Maclaurin series for `|w| < 1`, Rybicki's sampling-theorem sum
//!   for `1 ≤ |w| ≤ 10`, asymptotic expansion beyond.
//! * `erfi`: positive-term power series for `|w| ≤ 8`, `e^{w²}` times the
//!   asymptotic series beyond.

use crate::{Error, Result};

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Largest `|w|` accepted by [`erfi`].
pub const ERFI_MAX_ARG: f64 = 50.0;

fn check_finite(w: f64, what: &str) -> Result<()> {
    if w.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what}: argument {w} is not finite")))
    }
}

/// Dawson function `D(w) = e^{-w²} ∫₀^w e^{t²} dt`.
///
/// Absolute error below `1e-13` for all finite `w`.
pub fn dawson(w: f64) -> Result<f64> {
    check_finite(w, "dawson")?;
    Ok(dawson_unchecked(w))
}

pub(crate) fn dawson_unchecked(w: f64) -> f64 {
    let x = w.abs();
    let d = if x < 1.0 {
        dawson_maclaurin(x)
    } else if x <= 10.0 {
        dawson_rybicki(x)
    } else {
        dawson_asymptotic(x)
    };
    d.copysign(w)
}

/// `Σ (-1)ⁿ 2ⁿ w^{2n+1} / (2n+1)!!`
fn dawson_maclaurin(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut total = x;
    for n in 1..200 {
        term *= -2.0 * x2 / (2 * n + 1) as f64;
        total += term;
        if term.abs() < 1e-17 * total.abs() {
            break;
        }
    }
    total
}

/// Rybicki: `D(x) ≈ π^{-1/2} Σ_{n odd} e^{-(x - nh)²} / n`, error `~e^{-(π/2h)²}`.
fn dawson_rybicki(x: f64) -> f64 {
    const H: f64 = 0.2;
    const REACH: f64 = 6.6;
    let lo = ((x - REACH) / H).floor() as i64;
    let hi = ((x + REACH) / H).ceil() as i64;
    let mut acc = crate::sum::Neumaier::default();
    for n in lo..=hi {
        if n % 2 == 0 {
            continue;
        }
        let d = x - n as f64 * H;
        acc.add((-d * d).exp() / n as f64);
    }
    acc.value() * FRAC_1_SQRT_PI
}

/// `D(w) ~ (1/2w) Σ (2k-1)!! / (2w²)^k`, truncated at the smallest term.
fn dawson_asymptotic(x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut total = 1.0;
    for k in 1..400 {
        let next = term * (2 * k - 1) as f64 * inv;
        if next >= term || next < 1e-18 {
            break;
        }
        term = next;
        total += term;
    }
    total / (2.0 * x)
}

/// Imaginary error function `erfi(w) = -i erf(iw)`.
///
/// Overflows double range for `|w|` above about 26.6; such arguments and any
/// `|w| > 50` return [`Error::Overflow`].
pub fn erfi(w: f64) -> Result<f64> {
    check_finite(w, "erfi")?;
    let x = w.abs();
    if x > ERFI_MAX_ARG {
        return Err(Error::Overflow(format!("erfi({w}) exceeds |w| ≤ {ERFI_MAX_ARG}")));
    }
    let v = if x <= 8.0 { erfi_series(x) } else { erfi_asymptotic(x) };
    if !v.is_finite() {
        return Err(Error::Overflow(format!("erfi({w})")));
    }
    Ok(v.copysign(w))
}

/// `(2/√π) Σ w^{2n+1} / (n! (2n+1))`; all terms positive.
fn erfi_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut power = x;
    let mut total = x;
    for n in 1..1000 {
        power *= x2 / n as f64;
        let term = power / (2 * n + 1) as f64;
        total += term;
        if term < 1e-17 * total {
            break;
        }
    }
    2.0 * FRAC_1_SQRT_PI * total
}

fn erfi_asymptotic(x: f64) -> f64 {
    let inv = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut total = 1.0;
    for k in 1..400 {
        let next = term * (2 * k - 1) as f64 * inv;
        if next >= term || next < 1e-18 {
            break;
        }
        term = next;
        total += term;
    }
    (x * x).exp() * FRAC_1_SQRT_PI / x * total
}

/// Generalized Laguerre polynomial `Lₙ^α(x)` by the three-term recurrence
/// `(n+1) L_{n+1} = (2n+1+α-x) Lₙ - (n+α) L_{n-1}`.
pub fn laguerre_general(n: usize, alpha: f64, x: f64) -> Result<f64> {
    check_finite(alpha, "laguerre_general alpha")?;
    check_finite(x, "laguerre_general x")?;
    Ok(laguerre_unchecked(n, alpha, x))
}

pub(crate) fn laguerre_unchecked(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for m in 1..n {
        let m = m as f64;
        let next = ((2.0 * m + 1.0 + alpha - x) * cur - (m + alpha) * prev) / (m + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Power-series coefficients `c_j` of `Lₙ^α(q) = Σ_j c_j q^j`.
pub fn laguerre_coefficients(n: usize, alpha: f64) -> Vec<f64> {
    // c_j = (-1)^j binom(n+α, n-j) / j!, built from c_n = (-1)^n / n! downward
    let mut c = vec![0.0; n + 1];
    let mut fact = 1.0;
    for k in 1..=n {
        fact *= k as f64;
    }
    c[n] = if n % 2 == 0 { 1.0 } else { -1.0 } / fact;
    for j in (0..n).rev() {
        // c_j / c_{j+1} = -(j+1)(j+1+α) / (n-j)
        let jf = j as f64;
        c[j] = -c[j + 1] * (jf + 1.0) * (jf + 1.0 + alpha) / (n - j) as f64;
    }
    c
}

/// `√π`, shared by the closed-form field expressions.
pub(crate) const SQRT_PI: f64 = 1.772_453_850_905_516;
