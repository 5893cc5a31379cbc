//! The generating functions: the mode sum curly-F_s(z, tau), its completion
//! f-hat, the closed coset-sum forms at integer s (geometric series for
//! s = 2, polylogarithms for s >= 2), the epsilon-truncated s = 1 form, and
//! the divisor-form residual tests on E4/E6.

use crate::halfplane::HalfPlanePoint;
use crate::modgroup::{cosets_by_denominator, orbit_max_im, GroupSpec};
use crate::niebur::niebur_fourier;
use crate::policy::TruncationPolicy;
use crate::series::SeriesResult;
use crate::specfun::{eisenstein_qseries, polylog, theta_eisenstein};
use crate::{Complex, Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Domain margin for mode-sum evaluations: z_2 must clear the tau-orbit by
/// this much so the geometric mode envelope is at most e^{-pi/2} per step.
pub const DOMAIN_MARGIN: f64 = 0.25;

fn check_domain(group: &GroupSpec, z: HalfPlanePoint, tau: HalfPlanePoint) -> Result<f64> {
    let max_im = orbit_max_im(group, tau);
    if z.im() < max_im + DOMAIN_MARGIN {
        return Err(Error::domain(format!(
            "generating function needs z_2 >= max Im(gamma tau) + {DOMAIN_MARGIN} = {}, got {}",
            max_im + DOMAIN_MARGIN,
            z.im()
        )));
    }
    Ok(max_im)
}

/// curly-F_s(z, tau) = 2 pi sum_{n >= 1} sqrt(n) F_{-n,s}(tau) e^{2 pi i n z}.
pub fn curly_f(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let max_im = check_domain(group, z, tau)?;
    let ratio = (-2.0 * PI * (z.im() - max_im)).exp();
    // modes needed so that the envelope C e^{-2 pi n (z_2 - max_im)} dies
    let n_max = ((42.0 / (2.0 * PI * (z.im() - max_im))).ceil() as u32).clamp(2, policy.mode_max);
    let modes: Vec<Result<SeriesResult>> = (1..=n_max as i64)
        .into_par_iter()
        .map(|n| niebur_fourier(group, -n, tau, s, policy))
        .collect();
    let mut value = Complex::new(0.0, 0.0);
    let mut tail = 0.0;
    let mut terms = 0usize;
    let mut last_mag = 0.0;
    for (i, mode) in modes.into_iter().enumerate() {
        let n = (i + 1) as f64;
        let f = mode?;
        let qz = (Complex::new(0.0, 2.0 * PI * n) * z.to_complex()).exp();
        let term = 2.0 * PI * n.sqrt() * f.value * qz;
        value += term;
        tail += 2.0 * PI * n.sqrt() * f.tail_estimate * qz.norm();
        terms += f.terms_used;
        last_mag = term.norm();
    }
    // geometric envelope for the dropped modes
    tail += last_mag * ratio / (1.0 - ratio);
    Ok(SeriesResult::new(value, tail, terms, policy.target))
}

/// f-hat(z, tau) = curly-F_1(z, tau) + 1/(vol z_2).
pub fn f_hat(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    let mut f = curly_f(group, z, tau, 1.0, policy)?;
    f.value += 1.0 / (group.covolume * z.im());
    Ok(f)
}

/// exp(2 pi i (z - w)) for complex w (the coset images and their conjugates).
fn eps_of(z: Complex, w: Complex) -> Complex {
    (Complex::new(0.0, 2.0 * PI) * (z - w)).exp()
}

/// Closed coset-sum form of curly-F_2:
/// per coset, with eps = e^{2 pi i (z - gamma tau)} and
/// eps-bar = e^{2 pi i (z - conj(gamma tau))},
/// `eps/(1-eps) + epsb/(1-epsb) + [Log(1-eps) - Log(1-epsb)]/(2 pi Im gamma tau)`.
pub fn curly_f2_closed(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    check_domain(group, z, tau)?;
    let reps = cosets_by_denominator(group, tau, policy.coset_bound)?;
    let zc = z.to_complex();
    let mut full = Complex::new(0.0, 0.0);
    let mut half = Complex::new(0.0, 0.0);
    for rep in &reps {
        let w = rep.image(tau).to_complex();
        let ew = eps_of(zc, w);
        let ewb = eps_of(zc, w.conj());
        let one = Complex::new(1.0, 0.0);
        let term = ew / (one - ew) + ewb / (one - ewb)
            + ((one - ew).ln() - (one - ewb).ln()) / (2.0 * PI * w.im);
        full += term;
        if rep.denom_sq(tau) <= policy.coset_bound / 2.0 {
            half += term;
        }
    }
    let tail = (full - half).norm() + 1e-15 * full.norm();
    Ok(SeriesResult::new(full, tail, reps.len(), policy.target))
}

/// sinh/cosh coefficient polynomials (in 1/x) of
/// I_{k-1/2}(x) = sqrt(2/(pi x)) (a_k(1/x) cosh x + b_k(1/x) sinh x),
/// generated by I_{nu+1} = I_{nu-1} - (2 nu / x) I_nu from
/// (a_0, b_0) = (1, 0), (a_1, b_1) = (0, 1).
pub fn half_bessel_coefficients(k: u32) -> (Vec<f64>, Vec<f64>) {
    // coefficient vectors indexed by the power of 1/x
    let mut am: Vec<f64> = vec![1.0]; // a_{k-1}
    let mut bm: Vec<f64> = vec![0.0];
    let mut a: Vec<f64> = vec![0.0]; // a_k
    let mut b: Vec<f64> = vec![1.0];
    for j in 1..k {
        // (a, b)_{j+1} = (a, b)_{j-1} - ((2j - 1)/x)(a, b)_j
        let shift = |v: &[f64], c: f64| -> Vec<f64> {
            let mut out = vec![0.0; v.len() + 1];
            for (i, &x) in v.iter().enumerate() {
                out[i + 1] = c * x;
            }
            out
        };
        let add = |u: &[f64], v: &[f64]| -> Vec<f64> {
            let n = u.len().max(v.len());
            (0..n)
                .map(|i| u.get(i).copied().unwrap_or(0.0) + v.get(i).copied().unwrap_or(0.0))
                .collect()
        };
        let c = -(2.0 * j as f64 - 1.0);
        let an = add(&am, &shift(&a, c));
        let bn = add(&bm, &shift(&b, c));
        am = std::mem::replace(&mut a, an);
        bm = std::mem::replace(&mut b, bn);
    }
    (a, b)
}

/// Closed coset-sum form of curly-F_k for integer k >= 2: each coset
/// contributes a finite combination of Li_j(eps) and Li_j(eps-bar),
/// 0 <= j <= k-1, with coefficients generated from the half-integer Bessel
/// recurrence.
pub fn curly_fn_closed(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    k: u32,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    if k < 2 {
        return Err(Error::domain("curly_fn_closed needs integer order k >= 2"));
    }
    check_domain(group, z, tau)?;
    let (ac, bc) = half_bessel_coefficients(k);
    let jmax = ac.len().max(bc.len());
    let reps = cosets_by_denominator(group, tau, policy.coset_bound)?;
    let zc = z.to_complex();
    let mut full = Complex::new(0.0, 0.0);
    let mut half = Complex::new(0.0, 0.0);
    for rep in &reps {
        let w = rep.image(tau).to_complex();
        let ew = eps_of(zc, w);
        let ewb = eps_of(zc, w.conj());
        let x_inv = 1.0 / (2.0 * PI * w.im);
        let mut term = Complex::new(0.0, 0.0);
        let mut pw = 1.0;
        for j in 0..jmax {
            let lw = polylog(j as u32, ew)?;
            let lwb = polylog(j as u32, ewb)?;
            let alpha = ac.get(j).copied().unwrap_or(0.0);
            let beta = bc.get(j).copied().unwrap_or(0.0);
            term += pw * (alpha * (lw + lwb) + beta * (lw - lwb));
            pw *= x_inv;
        }
        full += term;
        if rep.denom_sq(tau) <= policy.coset_bound / 2.0 {
            half += term;
        }
    }
    let tail = (full - half).norm() + 1e-15 * full.norm();
    Ok(SeriesResult::new(full, tail, reps.len(), policy.target))
}

/// Epsilon-truncated coset sum for s = 1:
/// sum over Im(gamma tau) > eps of 1/(1 - eps_w) - 1/(1 - eps_w-bar).
pub fn curly_f1_truncated(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    eps: f64,
) -> Result<SeriesResult> {
    if !(eps > 0.0) {
        return Err(Error::domain("eps must be positive"));
    }
    check_domain(group, z, tau)?;
    let bound = tau.im() / eps;
    let reps = cosets_by_denominator(group, tau, bound)?;
    let zc = z.to_complex();
    let one = Complex::new(1.0, 0.0);
    let mut sum = Complex::new(0.0, 0.0);
    let mut count = 0usize;
    for rep in &reps {
        let w = rep.image(tau).to_complex();
        if w.im <= eps {
            continue;
        }
        sum += one / (one - eps_of(zc, w)) - one / (one - eps_of(zc, w.conj()));
        count += 1;
    }
    // truncation error is O(1/log eps) by construction; report that scale
    let tail = 1.0 / (1.0 / eps).ln();
    Ok(SeriesResult {
        value: sum,
        tail_estimate: tail,
        terms_used: count,
        converged: false,
    })
}

/// Weight-k forms with a single divisor orbit used by the divisor test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisorForm {
    E4,
    E6,
}

impl DivisorForm {
    pub fn weight(&self) -> u32 {
        match self {
            DivisorForm::E4 => 4,
            DivisorForm::E6 => 6,
        }
    }

    /// The divisor point in the fundamental domain and its stabilizer order.
    pub fn divisor_point(&self) -> (HalfPlanePoint, u32) {
        match self {
            // E4 vanishes at rho = e^{2 pi i/3}, stabilizer order 3
            DivisorForm::E4 => (
                HalfPlanePoint::new(-0.5, 3.0f64.sqrt() / 2.0).unwrap(),
                3,
            ),
            // E6 vanishes at i, stabilizer order 2
            DivisorForm::E6 => (HalfPlanePoint::new(0.0, 1.0).unwrap(), 2),
        }
    }
}

/// Divisor residual f^div(z) - k/(4 pi z_2) + Theta f / f, which vanishes
/// identically at level one (S_2 = {0}). f^div = (ord/Stab) f-hat(z, tau_0)
/// over the single divisor orbit of E4 resp. E6.
pub fn divisor_residual(
    group: &GroupSpec,
    form: DivisorForm,
    z: HalfPlanePoint,
    policy: &TruncationPolicy,
) -> Result<Complex> {
    if group.level != 1 {
        return Err(Error::domain("divisor test is a level-one statement"));
    }
    let (tau0, stab) = form.divisor_point();
    let k = form.weight();
    let zc = z.to_complex();
    let fval = eisenstein_qseries(k, zc)?;
    if fval.norm() < 1e-8 {
        return Err(Error::Conditioning(format!(
            "|{form:?}(z)| = {} too small for the logarithmic derivative",
            fval.norm()
        )));
    }
    let theta = theta_eisenstein(k, zc)?;
    let fdiv = f_hat(group, z, tau0, policy)?.value / stab as f64;
    Ok(fdiv - k as f64 / (4.0 * PI * z.im()) + theta / fval)
}
