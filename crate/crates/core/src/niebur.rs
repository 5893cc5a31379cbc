//! Niebur-Poincare series F_{m,s}(tau) at the cusp infinity: the direct
//! coset sum (Re s > 1), the Kloosterman-Bessel Fourier evaluation (valid in
//! a real neighborhood of s = 1), and the s-derivative at s = 1.
//!
//! Fourier structure:
//! `F_{m,s} = sqrt(tau_2) I_{s-1/2}(2 pi |m| tau_2) e^{2 pi i m tau_1}
//!           + B(0) tau_2^{1-s}/(2s-1)
//!           + sum_{n != 0} B(n) sqrt(tau_2) K_{s-1/2}(2 pi |n| tau_2)
//!             e^{2 pi i n tau_1}`
//! with `B(0) = 2 pi^s/Gamma(s) |m|^{s-1/2} sum_c S(m,0;c)/c^{2s}` and
//! `B(n) = 2 sum_c S(m,n;c)/c * J_{2s-1}(4 pi sqrt(mn)/c)` for mn > 0
//! (I-Bessel for mn < 0). At level one the c-sum in B(0) collapses to
//! sigma_{1-2s}(|m|)/zeta(2s).

use crate::arith::{sigma_real, Sieve};
use crate::halfplane::HalfPlanePoint;
use crate::kloosterman::{kloosterman_row, ramanujan_sum};
use crate::modgroup::{cosets_by_denominator, GroupSpec};
use crate::policy::TruncationPolicy;
use crate::series::SeriesResult;
use crate::specfun::{
    bessel_dnu_central, bessel_i, bessel_j, bessel_k, dbessel_i_order_at_half,
    dbessel_k_order_at_half, digamma, gamma, zeta, zeta_deriv, BesselKind,
};
use crate::{Complex, Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// One assembled Fourier mode of F_{m,s}: the coefficient B_{m,s}(n) and the
/// term b_{m,s}(tau_2; n) e^{2 pi i n tau_1} it contributes.
#[derive(Debug, Clone, Copy)]
pub struct NieburCoefficients {
    pub n: i64,
    pub b: f64,
    pub assembled: Complex,
}

fn check_args(m: i64, s: f64, tau: HalfPlanePoint) -> Result<()> {
    if m == 0 {
        return Err(Error::domain("Niebur series needs m != 0"));
    }
    if !(0.98..=2.5).contains(&s) {
        return Err(Error::domain(format!("niebur_fourier: s = {s} outside [0.98, 2.5]")));
    }
    if tau.im() < 0.3 {
        return Err(Error::domain(format!(
            "niebur_fourier needs tau_2 >= 0.3, got {}",
            tau.im()
        )));
    }
    Ok(())
}

/// B_{m,s}(0) together with a tail estimate; exact at level one.
pub fn b_zero(group: &GroupSpec, m: i64, s: f64, c_max: u32, sieve: &Sieve) -> (f64, f64) {
    let pref = 2.0 * PI.powf(s) / gamma(s) * (m.unsigned_abs() as f64).powf(s - 0.5);
    if group.level == 1 {
        (
            pref * sigma_real(m.unsigned_abs(), 1.0 - 2.0 * s) / zeta(2.0 * s),
            0.0,
        )
    } else {
        let mut sum = 0.0;
        let mut c = group.level as u64;
        while c <= c_max as u64 {
            sum += ramanujan_sum(m, c, sieve) as f64 / (c as f64).powf(2.0 * s);
            c += group.level as u64;
        }
        let tail = pref * sigma_real(m.unsigned_abs(), 1.0)
            * (c_max as f64).powf(1.0 - 2.0 * s)
            / ((2.0 * s - 1.0) * group.level as f64);
        (pref * sum, tail)
    }
}

/// d/ds B_{m,s}(0) at s = 1, level one, in closed form through zeta'.
fn b_zero_ds1_level1(m: i64) -> f64 {
    let am = m.unsigned_abs();
    let z2 = zeta(2.0);
    let sig = sigma_real(am, -1.0);
    let b0 = 2.0 * PI * (am as f64).sqrt() * sig / z2;
    // log-derivative pieces: d/ds [2 pi^s/Gamma(s)] and |m|^{s-1/2}
    let logpart = PI.ln() - digamma(1.0) + (am as f64).ln();
    // d/ds sigma_{1-2s}(|m|) = -2 sum_{d | |m|} log(d)/d at s=1
    let mut dsig = 0.0;
    for d in 1..=am {
        if am % d == 0 {
            dsig -= 2.0 * (d as f64).ln() / d as f64;
        }
    }
    // d/ds 1/zeta(2s) = -2 zeta'(2)/zeta(2)^2
    let dzeta = -2.0 * zeta_deriv(2.0) / (z2 * z2);
    b0 * logpart + 2.0 * PI * (am as f64).sqrt() * (dsig / z2 + sig * dzeta)
}

/// Per-mode Kloosterman modulus cap: the K-Bessel weight crushes high modes,
/// so their c-sums may stop early. Floor of 240 keeps every mode honest.
fn mode_c_cap(c_max: u32, n_abs: u32, tau2: f64) -> u32 {
    let scaled = c_max as f64 * (-PI * tau2 * (n_abs as f64 - 1.0)).exp();
    (scaled as u32).clamp(240.min(c_max), c_max)
}

/// Largest mode index worth keeping: include n while the envelope
/// exp(4 pi sqrt(|m| n) - 2 pi n tau_2) stays within 1e-18 of its peak.
fn mode_limit(m: i64, tau2: f64, cap: u32) -> u32 {
    let am = m.unsigned_abs() as f64;
    let peak = 2.0 * PI * am / tau2; // max over n of the envelope exponent
    let mut n = 1u32;
    while n < cap {
        let e = 4.0 * PI * (am * (n as f64 + 1.0)).sqrt() - 2.0 * PI * (n as f64 + 1.0) * tau2;
        if e < peak - 42.0 {
            break;
        }
        n += 1;
    }
    n
}

/// The Bessel factor of B_{m,s}(n): J_{2s-1} for mn > 0, I_{2s-1} for mn < 0.
fn b_bessel(m: i64, n: i64, s: f64, x: f64) -> Result<f64> {
    if m * n > 0 {
        bessel_j(2.0 * s - 1.0, x)
    } else {
        bessel_i(2.0 * s - 1.0, x)
    }
}

/// All mode coefficients B_{m,s}(n) for 1 <= |n| <= n_max, c-summed in
/// parallel blocks with per-mode caps. Returns (coefficients keyed by the
/// signed mode, per-mode tail estimates).
fn b_coefficients(
    group: &GroupSpec,
    m: i64,
    s: f64,
    tau2: f64,
    n_max: u32,
    c_max: u32,
) -> Result<(Vec<f64>, Vec<f64>)> {
    // modes laid out as [-n_max .. -1, 1 .. n_max]
    let modes: Vec<i64> = (-(n_max as i64)..=n_max as i64).filter(|&n| n != 0).collect();
    let caps: Vec<u32> = modes
        .iter()
        .map(|&n| mode_c_cap(c_max, n.unsigned_abs() as u32, tau2))
        .collect();
    let cap_max = caps.iter().copied().max().unwrap_or(0);
    let step = group.level as u64;
    let cs: Vec<u64> = (1..=(cap_max as u64 / step)).map(|k| k * step).collect();

    // per-c contributions, then an ordered reduction into full and half sums
    let rows: Vec<Vec<(usize, f64)>> = cs
        .par_iter()
        .map(|&c| {
            let active: Vec<(usize, i64)> = modes
                .iter()
                .copied()
                .enumerate()
                .filter(|&(i, _)| caps[i] as u64 >= c)
                .collect();
            if active.is_empty() {
                return Vec::new();
            }
            let act_modes: Vec<i64> = active.iter().map(|&(_, n)| n).collect();
            let kl = kloosterman_row(m, &act_modes, c);
            active
                .iter()
                .zip(kl.iter())
                .map(|(&(i, n), &sv)| {
                    let x = 4.0 * PI * ((m * n).unsigned_abs() as f64).sqrt() / c as f64;
                    let bess = b_bessel(m, n, s, x).unwrap_or(0.0);
                    (i, 2.0 * sv / c as f64 * bess)
                })
                .collect()
        })
        .collect();

    let mut full = vec![0.0f64; modes.len()];
    let mut half = vec![0.0f64; modes.len()];
    for (ci, row) in rows.iter().enumerate() {
        let c = cs[ci];
        for &(i, v) in row {
            full[i] += v;
            if c <= (caps[i] / 2) as u64 {
                half[i] += v;
            }
        }
    }
    let tails: Vec<f64> = full
        .iter()
        .zip(half.iter())
        .map(|(f, h)| (f - h).abs() + 1e-14 * f.abs())
        .collect();
    Ok((full, tails))
}

/// Fourier-expansion evaluation of F_{m,s}(tau).
pub fn niebur_fourier(
    group: &GroupSpec,
    m: i64,
    tau: HalfPlanePoint,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    check_args(m, s, tau)?;
    let y = tau.im();
    let sieve = Sieve::new(if group.level > 1 { policy.c_max as usize } else { 2 });
    let (b0, b0_tail) = b_zero(group, m, s, policy.c_max, &sieve);
    let n_max = mode_limit(m, y, policy.mode_max);
    let (bs, btails) = b_coefficients(group, m, s, y, n_max, policy.c_max)?;
    let modes: Vec<i64> = (-(n_max as i64)..=n_max as i64).filter(|&n| n != 0).collect();

    let am = m.unsigned_abs() as f64;
    let mut value = y.sqrt()
        * bessel_i(s - 0.5, 2.0 * PI * am * y)?
        * (Complex::new(0.0, 2.0 * PI * m as f64 * tau.re())).exp();
    value += b0 * y.powf(1.0 - s) / (2.0 * s - 1.0);
    let mut tail = b0_tail * y.powf(1.0 - s) / (2.0 * s - 1.0);
    let mut terms = 1 + 1;
    for (i, &n) in modes.iter().enumerate() {
        let kb = bessel_k(s - 0.5, 2.0 * PI * n.abs() as f64 * y)?;
        let w = y.sqrt() * kb;
        value += bs[i] * w * (Complex::new(0.0, 2.0 * PI * n as f64 * tau.re())).exp();
        tail += btails[i] * w;
        terms += 1;
    }
    // dropped-mode envelope: geometric in exp(4 pi sqrt(|m|n) - 2 pi n tau_2)
    if (n_max as u32) < policy.mode_max {
        let n1 = n_max as f64 + 1.0;
        tail += (4.0 * PI * (am * n1).sqrt() - 2.0 * PI * n1 * y).exp();
    } else {
        tail += 1.0; // mode budget exhausted without reaching the envelope cut
    }
    Ok(SeriesResult::new(value, tail, terms, policy.target))
}

/// Single mode coefficient and its assembled term (diagnostics / tests).
pub fn niebur_mode(
    group: &GroupSpec,
    m: i64,
    n: i64,
    tau: HalfPlanePoint,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<NieburCoefficients> {
    check_args(m, s, tau)?;
    let y = tau.im();
    if n == 0 {
        let sieve = Sieve::new(if group.level > 1 { policy.c_max as usize } else { 2 });
        let (b0, _) = b_zero(group, m, s, policy.c_max, &sieve);
        return Ok(NieburCoefficients {
            n,
            b: b0,
            assembled: Complex::new(b0 * y.powf(1.0 - s) / (2.0 * s - 1.0), 0.0),
        });
    }
    let cap = mode_c_cap(policy.c_max, n.unsigned_abs() as u32, y);
    let step = group.level as u64;
    let mut b = 0.0;
    let mut c = step;
    while c <= cap as u64 {
        let kl = kloosterman_row(m, &[n], c);
        let x = 4.0 * PI * ((m * n).unsigned_abs() as f64).sqrt() / c as f64;
        b += 2.0 * kl[0] / c as f64 * b_bessel(m, n, s, x)?;
        c += step;
    }
    let assembled = b
        * y.sqrt()
        * bessel_k(s - 0.5, 2.0 * PI * n.abs() as f64 * y)?
        * (Complex::new(0.0, 2.0 * PI * n as f64 * tau.re())).exp();
    Ok(NieburCoefficients { n, b, assembled })
}

/// Direct coset sum, Re(s) >= 1.1:
/// `F = sum_{cosets} sqrt(Im(gamma tau)) I_{s-1/2}(2 pi |m| Im(gamma tau))
///  e^{2 pi i m Re(gamma tau)}`, with a bound-halving tail estimate.
pub fn niebur_direct(
    group: &GroupSpec,
    m: i64,
    tau: HalfPlanePoint,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    if m == 0 {
        return Err(Error::domain("Niebur series needs m != 0"));
    }
    if s < 1.1 {
        return Err(Error::domain(format!(
            "niebur_direct needs s >= 1.1 (got {s}); use the Fourier route near s = 1"
        )));
    }
    let bound = policy.coset_bound;
    let reps = cosets_by_denominator(group, tau, bound)?;
    let mut full = Complex::new(0.0, 0.0);
    let mut half = Complex::new(0.0, 0.0);
    for rep in &reps {
        let w = rep.image(tau);
        let term = w.im().sqrt()
            * bessel_i(s - 0.5, 2.0 * PI * m.unsigned_abs() as f64 * w.im())?
            * (Complex::new(0.0, 2.0 * PI * m as f64 * w.re())).exp();
        full += term;
        if rep.denom_sq(tau) <= bound / 2.0 {
            half += term;
        }
    }
    let tail = (full - half).norm() + 1e-15 * full.norm();
    Ok(SeriesResult::new(full, tail, reps.len(), policy.target))
}

/// s-derivative of F_{m,s} at s = 1 by Richardson-improved central
/// differences of the Fourier route (primary), cross-checked against the
/// term-wise route with the exact Ei closed form for the K order-derivative.
/// If the two routes disagree beyond 100x the policy target the result is
/// flagged unconverged and the disagreement reported as the tail.
pub fn niebur_ds1(
    group: &GroupSpec,
    m: i64,
    tau: HalfPlanePoint,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let fd = niebur_ds1_fd(group, m, tau, policy)?;
    let tw = niebur_ds1_termwise(group, m, tau, policy)?;
    let disagreement = (fd.value - tw.value).norm();
    let tol = (100.0 * policy.target).max(1e-6);
    let tail = fd.tail_estimate.max(disagreement);
    let mut out = SeriesResult::new(fd.value, tail, fd.terms_used + tw.terms_used, policy.target);
    if disagreement > tol {
        out.converged = false;
    }
    Ok(out)
}

/// Finite-difference route: step h = policy.fd_step_s with Richardson h/2.
pub fn niebur_ds1_fd(
    group: &GroupSpec,
    m: i64,
    tau: HalfPlanePoint,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let h = policy.fd_step_s;
    let eval = |s: f64| niebur_fourier(group, m, tau, s, policy);
    let fp = eval(1.0 + h)?;
    let fm = eval(1.0 - h)?;
    let fp2 = eval(1.0 + h / 2.0)?;
    let fm2 = eval(1.0 - h / 2.0)?;
    let d1 = (fp.value - fm.value) / (2.0 * h);
    let d2 = (fp2.value - fm2.value) / h;
    let value = (4.0 * d2 - d1) / 3.0;
    // truncation errors are smooth in s, so most of the series tails cancel
    // in the difference; keep a conservative fraction
    let tail = 0.5 * (fp.tail_estimate + fm.tail_estimate) + (d2 - d1).norm() / 3.0;
    let terms = fp.terms_used + fm.terms_used + fp2.terms_used + fm2.terms_used;
    Ok(SeriesResult::new(value, tail, terms, policy.target))
}

/// Term-wise route at level one: the identity term differentiates through
/// the I order-derivative closed form, the zero mode through zeta
/// derivatives, and each K-mode splits into B'(n) K_{1/2} + B(n) dK with
/// `dK = [d/ds K_{s-1/2}]_{s=1} = -sqrt(pi/2x) e^x Ei(-2x)` exact.
pub fn niebur_ds1_termwise(
    group: &GroupSpec,
    m: i64,
    tau: HalfPlanePoint,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    check_args(m, 1.0, tau)?;
    let y = tau.im();
    let am = m.unsigned_abs() as f64;

    // identity term: sqrt(y) dI/dnu|_{1/2}(2 pi |m| y) e^{2 pi i m tau_1}
    let x_id = 2.0 * PI * am * y;
    let di = if x_id <= 300.0 {
        dbessel_i_order_at_half(x_id)?
    } else {
        bessel_dnu_central(BesselKind::I, 0.5, x_id, 1e-4)?
    };
    let mut value = y.sqrt() * di * (Complex::new(0.0, 2.0 * PI * m as f64 * tau.re())).exp();

    // zero mode: B'(0) + B(0) d/ds [tau_2^{1-s}/(2s-1)]|_1 = B'(0) - B(0)(ln y + 2)
    let sieve = Sieve::new(if group.level > 1 { policy.c_max as usize } else { 2 });
    let (b0, b0tail) = b_zero(group, m, 1.0, policy.c_max, &sieve);
    let db0 = if group.level == 1 {
        b_zero_ds1_level1(m)
    } else {
        // finite difference on the level-N Dirichlet series
        let h = 1e-4;
        let (bp, _) = b_zero(group, m, 1.0 + h, policy.c_max, &sieve);
        let (bm, _) = b_zero(group, m, 1.0 - h, policy.c_max, &sieve);
        (bp - bm) / (2.0 * h)
    };
    value += db0 - b0 * (y.ln() + 2.0);
    let mut tail = b0tail * (1.0 + y.ln().abs() + 2.0);

    // K modes
    let n_max = mode_limit(m, y, policy.mode_max);
    let (bs, btails) = b_coefficients(group, m, 1.0, y, n_max, policy.c_max)?;
    let modes: Vec<i64> = (-(n_max as i64)..=n_max as i64).filter(|&n| n != 0).collect();
    let mode_terms: Vec<Result<(Complex, f64)>> = modes
        .par_iter()
        .enumerate()
        .map(|(i, &n)| {
            let x = 2.0 * PI * n.abs() as f64 * y;
            let k_half = (PI / (2.0 * x)).sqrt() * (-x).exp();
            let dk = dbessel_k_order_at_half(x)?;
            // B'(n) = 2 sum_c S/c * 2 [d/dnu J or I]_{nu=1}(x_c)
            let cap = mode_c_cap(policy.c_max, n.unsigned_abs() as u32, y);
            let step = group.level as u64;
            let mut db = 0.0;
            let mut c = step;
            while c <= cap as u64 {
                let kl = kloosterman_row(m, &[n], c);
                let xc = 4.0 * PI * ((m * n).unsigned_abs() as f64).sqrt() / c as f64;
                let kind = if m * n > 0 { BesselKind::J } else { BesselKind::I };
                db += 2.0 * kl[0] / c as f64 * 2.0 * bessel_dnu_central(kind, 1.0, xc, 1e-4)?;
                c += step;
            }
            let phase = (Complex::new(0.0, 2.0 * PI * n as f64 * tau.re())).exp();
            let term = (db * k_half + bs[i] * dk) * y.sqrt() * phase;
            Ok((term, btails[i] * y.sqrt() * (k_half.abs() + dk.abs())))
        })
        .collect();
    let mut terms = 2usize;
    for mt in mode_terms {
        let (t, tl) = mt?;
        value += t;
        tail += tl;
        terms += 1;
    }
    Ok(SeriesResult::new(value, tail, terms, policy.target))
}
