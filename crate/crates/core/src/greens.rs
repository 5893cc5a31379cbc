//! Automorphic Green's function G_s(z, tau): the hypergeometric point-pair
//! kernel k_s, the direct Gamma-sum over a u-ball, the Fourier-expansion
//! route, and the regularized limit script-G at s = 1.
//!
//! Kernel form used everywhere:
//! `k_s(u) = -Gamma(s)^2/(4 pi Gamma(2s)) (1+u)^{-s} 2F1(s, s; 2s; 1/(1+u))`,
//! which keeps the hypergeometric argument inside (0, 1).

use crate::eisenstein::eisenstein_fourier;
use crate::halfplane::HalfPlanePoint;
use crate::modgroup::{ball_sum_binned, orbit_max_im, orbit_min_u, GroupSpec};
use crate::niebur::niebur_fourier;
use crate::policy::TruncationPolicy;
use crate::series::SeriesResult;
use crate::specfun::{bessel_k, gamma, hyp2f1, ln_gamma};
use crate::{Complex, Error, Result};
use std::f64::consts::PI;

/// Point-pair kernel k_s(u), u > 0, Re(s) >= 1. Negative real for s > 1.
pub fn green_kernel(s: f64, u: f64) -> Result<f64> {
    if u <= 0.0 {
        return Err(Error::Singularity(
            "k_s has a logarithmic singularity at u = 0".into(),
        ));
    }
    if s < 1.0 {
        return Err(Error::domain(format!("green_kernel needs s >= 1, got {s}")));
    }
    let pref = -(2.0 * ln_gamma(s) - ln_gamma(2.0 * s)).exp() / (4.0 * PI);
    Ok(pref * (1.0 + u).powf(-s) * hyp2f1(s, s, 2.0 * s, 1.0 / (1.0 + u))?)
}

/// Smooth-counting tail correction for the ball-truncated Gamma-sum:
/// integral of k_s against dN = (4 pi / vol) du from u_max to infinity,
/// integrated termwise through the 2F1 series.
fn direct_tail_correction(s: f64, u_max: f64, vol: f64) -> f64 {
    let pref = -(2.0 * ln_gamma(s) - ln_gamma(2.0 * s)).exp() / (4.0 * PI) * (4.0 * PI / vol);
    let w = 1.0 + u_max;
    let mut coeff = 1.0; // (s)_k^2 / ((2s)_k k!)
    let mut total = 0.0;
    for k in 0..200 {
        let kf = k as f64;
        let term = coeff * w.powf(1.0 - s - kf) / (s + kf - 1.0);
        total += term;
        if term.abs() < 1e-16 * total.abs() {
            break;
        }
        coeff *= (s + kf) * (s + kf) / ((2.0 * s + kf) * (kf + 1.0));
    }
    pref * total
}

/// Ball-truncated direct sum G_s(z, tau) = sum_{gamma} k_s(u(z, gamma tau))
/// over u <= u_max, plus the smooth-counting tail correction; the tail
/// estimate is the radius-halving difference.
pub fn green_direct(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    s: f64,
    u_max: f64,
) -> Result<SeriesResult> {
    if s < 1.3 {
        return Err(Error::domain(format!(
            "green_direct needs s >= 1.3 (tail ~ u^(1-s) must be controllable), got {s}"
        )));
    }
    if u_max <= 4.0 {
        return Err(Error::domain("u_max too small for a meaningful ball"));
    }
    if orbit_min_u(group, z, tau) < 1e-10 {
        return Err(Error::Singularity("z lies on the Gamma-orbit of tau".into()));
    }
    let pref = -(2.0 * ln_gamma(s) - ln_gamma(2.0 * s)).exp() / (4.0 * PI);
    let shells = [u_max / 2.0, u_max];
    let (bins, count) = ball_sum_binned(group, z, tau, &shells, |u, _| {
        let f = hyp2f1(s, s, 2.0 * s, 1.0 / (1.0 + u)).unwrap_or(f64::NAN);
        Complex::new(pref * (1.0 + u).powf(-s) * f, 0.0)
    })?;
    let vol = group.covolume;
    let full = bins[1].re + direct_tail_correction(s, u_max, vol);
    let half = bins[0].re + direct_tail_correction(s, u_max / 2.0, vol);
    let tail = (full - half).abs() + 1e-14 * full.abs();
    Ok(SeriesResult::new(
        Complex::new(full, 0.0),
        tail,
        count as usize,
        1e-7,
    ))
}

/// Fourier route (valid for z_2 above the whole tau-orbit):
/// `G_s(z,tau) = z_2^{1-s}/(1-2s) E(tau;s)
///  - sqrt(z_2) sum_{n != 0} F_{-n,s}(tau) K_{s-1/2}(2 pi |n| z_2)
///    e^{2 pi i n z_1}`.
pub fn green_fourier(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let max_im = orbit_max_im(group, tau);
    if z.im() <= max_im {
        return Err(Error::domain(format!(
            "Fourier route needs z_2 > max Im(gamma tau) = {max_im}, got {}",
            z.im()
        )));
    }
    if !(1.05..=2.5).contains(&s) {
        return Err(Error::domain(format!("green_fourier: s = {s} outside [1.05, 2.5]")));
    }
    let e = eisenstein_fourier(group, tau, s, policy)?;
    let mut value = z.im().powf(1.0 - s) / (1.0 - 2.0 * s) * e.value;
    let mut tail = e.tail_estimate * z.im().powf(1.0 - s) / (2.0 * s - 1.0);
    let mut terms = e.terms_used;
    // modes die like e^{2 pi n (max_im - z_2)}
    let ratio: f64 = (-2.0 * PI * (z.im() - max_im)).exp();
    let mut n = 1i64;
    let mut last_mag = f64::INFINITY;
    loop {
        let mut mode_pair = Complex::new(0.0, 0.0);
        let mut pair_tail = 0.0;
        for sign in [1i64, -1] {
            let nn = sign * n;
            let f = niebur_fourier(group, -nn, tau, s, policy)?;
            let kb = bessel_k(s - 0.5, 2.0 * PI * n as f64 * z.im())?;
            let phase = (Complex::new(0.0, 2.0 * PI * nn as f64 * z.re())).exp();
            mode_pair -= z.im().sqrt() * f.value * kb * phase;
            pair_tail += z.im().sqrt() * f.tail_estimate * kb;
            terms += f.terms_used;
        }
        value += mode_pair;
        tail += pair_tail;
        let mag = mode_pair.norm();
        if (mag < 1e-14 * value.norm() && last_mag < 1e-14 * value.norm()) || n as u32 >= policy.mode_max {
            tail += mag * ratio / (1.0 - ratio).max(0.1);
            break;
        }
        last_mag = mag;
        n += 1;
    }
    Ok(SeriesResult::new(value, tail, terms, policy.target))
}

/// The regularized limit script-G(z, tau) = lim_{s->1} (G_s + E(tau; s)),
/// evaluated in the Fourier regime through
/// `(2 + log z_2)/vol - (1/2) sum_{n != 0} F_{-n,1}(tau)/sqrt(|n|)
///  e^{2 pi i (n z_1 + i |n| z_2)}`.
pub fn g_script(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let max_im = orbit_max_im(group, tau);
    if z.im() <= max_im {
        return Err(Error::domain(format!(
            "script-G needs z_2 > max Im(gamma tau) = {max_im}, got {}",
            z.im()
        )));
    }
    let vol = group.covolume;
    let mut value = Complex::new((2.0 + z.im().ln()) / vol, 0.0);
    let mut tail = 0.0;
    let mut terms = 1usize;
    let ratio: f64 = (-2.0 * PI * (z.im() - max_im)).exp();
    let mut n = 1i64;
    let mut last_mag = f64::INFINITY;
    loop {
        let mut mode_pair = Complex::new(0.0, 0.0);
        for sign in [1i64, -1] {
            let nn = sign * n;
            let f = niebur_fourier(group, -nn, tau, 1.0, policy)?;
            let weight = (-2.0 * PI * n as f64 * z.im()).exp() / (n as f64).sqrt();
            let phase = (Complex::new(0.0, 2.0 * PI * nn as f64 * z.re())).exp();
            mode_pair -= 0.5 * f.value * weight * phase;
            tail += 0.5 * f.tail_estimate * weight;
            terms += f.terms_used;
        }
        value += mode_pair;
        let mag = mode_pair.norm();
        if (mag < 1e-15 * value.norm() && last_mag < 1e-15 * value.norm())
            || n as u32 >= policy.mode_max
        {
            tail += mag * ratio / (1.0 - ratio).max(0.1);
            break;
        }
        last_mag = mag;
        n += 1;
    }
    Ok(SeriesResult::new(value, tail, terms, policy.target))
}
