//! Bessel functions I, J, K of real nonnegative order with the
//! order-derivatives needed at half-integer orders.
//!
//! Routing:
//! * `I`: power series up to `x = max(30, 2 nu)`, Hankel asymptotic series
//!   beyond; half-integer orders go through the sinh/cosh closed forms for
//!   `x >= 1` (below that the closed forms cancel catastrophically and the
//!   series is used instead).
//! * `K`: exponentially convergent trapezoidal quadrature of
//!   `exp(-x cosh t) cosh(nu t)`; half-integer orders through closed forms
//!   (upward recurrence, stable for K).
//! * `J`: power series for small x; Miller downward recurrence for integer
//!   orders at moderate x; Hankel asymptotic expansion for large x.

use super::expint::{expint_e1_scaled, expint_ei_pos};
use super::gamma::ln_gamma;
use crate::{Error, Result};
use std::f64::consts::PI;

const MAX_X: f64 = 705.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    I,
    J,
    K,
}

fn is_half_integer(nu: f64) -> bool {
    let two = 2.0 * nu;
    (two - two.round()).abs() < 1e-12 && (nu - nu.round()).abs() > 1e-12
}

fn is_integer(nu: f64) -> bool {
    (nu - nu.round()).abs() < 1e-12
}

/// Modified Bessel function of the first kind, nu >= 0, x > 0.
pub fn bessel_i(nu: f64, x: f64) -> Result<f64> {
    if nu < 0.0 {
        return Err(Error::domain(format!("bessel_i requires nu >= 0, got {nu}")));
    }
    if x <= 0.0 {
        return Err(Error::domain(format!("bessel_i requires x > 0, got {x}")));
    }
    if x > MAX_X {
        return Err(Error::Overflow(format!(
            "bessel_i({nu}, {x}): argument beyond exp range, scaled evaluation required"
        )));
    }
    if is_half_integer(nu) && x >= 1.0 {
        return Ok(bessel_i_half(nu, x));
    }
    if x <= (30.0f64).max(2.0 * nu) {
        Ok(bessel_i_series(nu, x))
    } else {
        Ok(bessel_i_asymptotic(nu, x))
    }
}

fn bessel_i_series(nu: f64, x: f64) -> f64 {
    let mut term = ((x / 2.0).ln() * nu - ln_gamma(nu + 1.0)).exp();
    let q = x * x / 4.0;
    let mut sum = term;
    for k in 0..600 {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (nu + kf + 1.0));
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// I_{k+1/2} via the sinh/cosh closed forms, recurring upward from
/// I_{-1/2} = sqrt(2/(pi x)) cosh x, I_{1/2} = sqrt(2/(pi x)) sinh x.
fn bessel_i_half(nu: f64, x: f64) -> f64 {
    let pref = (2.0 / (PI * x)).sqrt();
    let mut lo = pref * x.cosh(); // order -1/2
    let mut hi = pref * x.sinh(); // order  1/2
    let mut order = 0.5;
    while order + 0.5 < nu {
        let next = lo - (2.0 * order / x) * hi;
        lo = hi;
        hi = next;
        order += 1.0;
    }
    hi
}

fn hankel_term_update(t: &mut f64, nu: f64, k: u32, x: f64) {
    let tk = 2.0 * k as f64 - 1.0;
    *t *= (4.0 * nu * nu - tk * tk) / (8.0 * k as f64 * x);
}

fn bessel_i_asymptotic(nu: f64, x: f64) -> f64 {
    let mut t = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        hankel_term_update(&mut t, nu, k, x);
        if t.abs() >= prev {
            break;
        }
        prev = t.abs();
        sum += if k % 2 == 0 { t } else { -t };
        if t.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    x.exp() / (2.0 * PI * x).sqrt() * sum
}

/// Modified Bessel function of the second kind, real nu, x > 0.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let nu = nu.abs(); // K is even in the order
    if x <= 0.0 {
        return Err(Error::domain(format!("bessel_k requires x > 0, got {x}")));
    }
    if x > MAX_X {
        return Err(Error::Overflow(format!(
            "bessel_k({nu}, {x}): underflow range, scaled evaluation required"
        )));
    }
    if is_half_integer(nu) {
        return Ok(bessel_k_half(nu, x));
    }
    Ok(bessel_k_quadrature(nu, x))
}

/// K_{k+1/2} closed forms: K_{1/2} = K_{-1/2} = sqrt(pi/(2x)) e^{-x},
/// upward recurrence K_{nu+1} = K_{nu-1} + (2 nu/x) K_nu.
fn bessel_k_half(nu: f64, x: f64) -> f64 {
    let base = (PI / (2.0 * x)).sqrt() * (-x).exp();
    let mut lo = base; // order -1/2
    let mut hi = base; // order  1/2
    let mut order = 0.5;
    while order + 0.5 < nu {
        let next = lo + (2.0 * order / x) * hi;
        lo = hi;
        hi = next;
        order += 1.0;
    }
    hi
}

/// Trapezoidal quadrature of K_nu(x) = e^{-x} int_0^inf
/// exp(-x(cosh t - 1)) cosh(nu t) dt; geometric convergence in 1/h.
fn bessel_k_quadrature(nu: f64, x: f64) -> f64 {
    let mut h = 0.25f64.min(0.7 / x.sqrt());
    let mut prev = k_quad_pass(nu, x, h);
    for _ in 0..4 {
        h *= 0.5;
        let cur = k_quad_pass(nu, x, h);
        if (cur - prev).abs() <= 1e-15 * cur.abs() {
            return cur * (-x).exp();
        }
        prev = cur;
    }
    prev * (-x).exp()
}

fn k_quad_pass(nu: f64, x: f64, h: f64) -> f64 {
    let mut sum = 0.5; // f(0) = 1
    let mut k = 1u32;
    loop {
        let t = h * k as f64;
        let expo = -x * (t.cosh() - 1.0) + (nu * t).abs();
        if expo < -45.0 {
            break;
        }
        // cosh(nu t) computed stably as e^{|nu| t}(1 + e^{-2 |nu| t})/2
        sum += (-x * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
        k += 1;
        if k > 2_000_000 {
            break;
        }
    }
    sum * h
}

/// Bessel function of the first kind, nu >= 0, x >= 0.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    if nu < 0.0 {
        return Err(Error::domain(format!("bessel_j requires nu >= 0, got {nu}")));
    }
    if x < 0.0 {
        return Err(Error::domain(format!("bessel_j requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if is_integer(nu) {
        let n = nu.round() as u32;
        if x <= 8.0 {
            Ok(bessel_j_series(nu, x))
        } else if x <= 30.0 {
            Ok(bessel_j_miller(n, x))
        } else {
            Ok(bessel_j_asymptotic(nu, x))
        }
    } else if x <= 12.0 {
        Ok(bessel_j_series(nu, x))
    } else {
        Ok(bessel_j_asymptotic(nu, x))
    }
}

fn bessel_j_series(nu: f64, x: f64) -> f64 {
    let mut term = ((x / 2.0).ln() * nu - ln_gamma(nu + 1.0)).exp();
    let q = x * x / 4.0;
    let mut sum = term;
    for k in 0..200 {
        let kf = k as f64;
        term *= -q / ((kf + 1.0) * (nu + kf + 1.0));
        sum += term;
        if term.abs() < 1e-17 * (sum.abs() + 1e-300) && k as f64 > x {
            break;
        }
    }
    sum
}

/// Downward (Miller) recurrence for integer order; normalization
/// J_0 + 2 J_2 + 2 J_4 + ... = 1.
fn bessel_j_miller(n: u32, x: f64) -> f64 {
    let start = ((x + 15.0 * x.cbrt() + 20.0) as u32).max(n + 20);
    let start = start + (start & 1); // even
    let mut jp = 0.0f64;
    let mut j = 1e-30f64;
    let mut norm = 0.0;
    let mut out = 0.0;
    let mut k = start;
    loop {
        let jm = (2.0 * (k + 1) as f64 / x) * j - jp;
        jp = j;
        j = jm;
        // j now holds J_k estimate
        if k % 2 == 0 {
            norm += if k == 0 { j } else { 2.0 * j };
        }
        if k == n {
            out = j;
        }
        // rescale to avoid overflow
        if j.abs() > 1e280 {
            jp /= 1e280;
            j /= 1e280;
            norm /= 1e280;
            out /= 1e280;
        }
        if k == 0 {
            break;
        }
        k -= 1;
    }
    out / norm
}

fn bessel_j_asymptotic(nu: f64, x: f64) -> f64 {
    let mut t = 1.0;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        hankel_term_update(&mut t, nu, k, x);
        if t.abs() >= prev {
            break;
        }
        prev = t.abs();
        let sign = match k % 4 {
            0 | 1 => 1.0,
            _ => -1.0,
        };
        if k % 2 == 0 {
            p += sign * t;
        } else {
            q += sign * t;
        }
        if t.abs() < 1e-17 {
            break;
        }
    }
    let omega = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// Closed form of the order-derivative of K at order 1/2:
/// `[d/ds K_{s-1/2}(x)]_{s=1} = -sqrt(pi/(2x)) e^x Ei(-2x)`.
pub fn dbessel_k_order_at_half(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::domain(format!("x must be positive, got {x}")));
    }
    // e^x Ei(-2x) = -e^x E1(2x) = -e^{-x} * [e^{2x} E1(2x)]
    let scaled = expint_e1_scaled(2.0 * x);
    Ok((PI / (2.0 * x)).sqrt() * (-x).exp() * scaled)
}

/// Closed form of the order-derivative of I at order 1/2 (the DLMF
/// companion of `dbessel_k_order_at_half`, kept as a cross-check):
/// `[d/dnu I_nu(x)]_{nu=1/2} = -(2 pi x)^{-1/2} (e^x E1(2x) + e^{-x} Ei(2x))`.
pub fn dbessel_i_order_at_half(x: f64) -> Result<f64> {
    if x <= 0.0 || x > 300.0 {
        return Err(Error::domain(format!("x must be in (0, 300], got {x}")));
    }
    let term1 = (-x).exp() * expint_e1_scaled(2.0 * x);
    let term2 = (-x).exp() * expint_ei_pos(2.0 * x);
    Ok(-(term1 + term2) / (2.0 * PI * x).sqrt())
}

/// Central finite difference of the order-derivative, Richardson-improved:
/// `d/dnu Bessel(nu, x)` with steps h and h/2.
pub fn bessel_dnu_central(kind: BesselKind, nu: f64, x: f64, h: f64) -> Result<f64> {
    let eval = |v: f64| -> Result<f64> {
        match kind {
            BesselKind::I => bessel_i(v, x),
            BesselKind::J => bessel_j(v, x),
            BesselKind::K => bessel_k(v, x),
        }
    };
    let d1 = (eval(nu + h)? - eval(nu - h)?) / (2.0 * h);
    let d2 = (eval(nu + h / 2.0)? - eval(nu - h / 2.0)?) / h;
    Ok((4.0 * d2 - d1) / 3.0)
}
