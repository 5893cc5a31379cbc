//! Parabolic Eisenstein series E(tau; s) at the cusp infinity: direct coset
//! sum, Fourier-expansion evaluation, and the Kronecker limit data at s = 1.
//!
//! At level one the Fourier coefficients are exact in terms of the zeta
//! function: the constant term is sqrt(pi) Gamma(s-1/2)/Gamma(s) *
//! zeta(2s-1)/zeta(2s) and mode n carries pi^s n^{s-1} sigma_{1-2s}(n) /
//! (Gamma(s) zeta(2s)). For Gamma0(N) the Dirichlet series run over N | c
//! directly.

use crate::arith::{sigma_real, Sieve};
use crate::halfplane::HalfPlanePoint;
use crate::kloosterman::ramanujan_sum;
use crate::modgroup::{cosets_by_denominator, GroupSpec};
use crate::policy::TruncationPolicy;
use crate::series::SeriesResult;
use crate::specfun::{bessel_k, dedekind_eta, gamma, zeta};
use crate::{Complex, Error, Result};
use std::f64::consts::PI;

/// Laurent data of E(tau; s) at s = 1: the pole coefficient (1/vol), the
/// constant beta, the Kronecker limit function P(tau) = log(|eta|^4 tau_2),
/// and a numerical estimate of the linear coefficient P_1(tau).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KroneckerLimitData {
    pub pole_coefficient: f64,
    pub beta: f64,
    pub p_value: f64,
    pub second_coefficient: f64,
}

/// Scattering value phi(s) and the mode coefficients n -> phi(s, n).
#[derive(Debug, Clone)]
pub struct EisensteinScattering {
    pub s: f64,
    pub phi: f64,
    pub coefficients: Vec<(u32, f64)>,
}

/// Direct coset sum E(tau; s) = sum Im(gamma tau)^s over cosets with
/// |c tau + d|^2 <= policy.coset_bound, plus the integral-comparison tail
/// from the counting law N(eps) ~ 1/(vol eps). The tail estimate is the
/// bound-halving difference.
pub fn eisenstein_direct(
    group: &GroupSpec,
    tau: HalfPlanePoint,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    if s < 1.1 {
        return Err(Error::domain(format!(
            "eisenstein_direct needs s >= 1.1 (got {s}); use the Fourier route near s = 1"
        )));
    }
    let bound = policy.coset_bound;
    let reps = cosets_by_denominator(group, tau, bound)?;
    let mut sum_full = 0.0;
    let mut sum_half = 0.0;
    for rep in &reps {
        let d2 = rep.denom_sq(tau);
        let term = (tau.im() / d2).powf(s);
        sum_full += term;
        if d2 <= bound / 2.0 {
            sum_half += term;
        }
    }
    let vol = group.covolume;
    let corr = |b: f64| -> f64 {
        let eps0 = tau.im() / b;
        eps0.powf(s - 1.0) / (vol * (s - 1.0))
    };
    let full = sum_full + corr(bound);
    let half = sum_half + corr(bound / 2.0);
    let tail = (full - half).abs() + 1e-15 * full.abs();
    Ok(SeriesResult::new(
        Complex::new(full, 0.0),
        tail,
        reps.len(),
        policy.target,
    ))
}

/// phi(s) for the group: level one uses zeta(2s-1)/zeta(2s), level N sums
/// the totient Dirichlet series over N | c. Returns (value, tail estimate).
fn phi_constant(group: &GroupSpec, s: f64, c_max: u32, sieve: Option<&Sieve>) -> (f64, f64) {
    let pref = PI.sqrt() * gamma(s - 0.5) / gamma(s);
    if group.level == 1 {
        (pref * zeta(2.0 * s - 1.0) / zeta(2.0 * s), 0.0)
    } else {
        let sieve = sieve.expect("sieve required for level > 1");
        let mut sum = 0.0;
        let mut c = group.level as u64;
        while c <= c_max as u64 {
            sum += sieve.phi(c) as f64 / (c as f64).powf(2.0 * s);
            c += group.level as u64;
        }
        // tail: phi(c) <= c, so sum_{c > C} <= C^{2-2s}/((2s-2) N)
        let tail = pref.abs() * (c_max as f64).powf(2.0 - 2.0 * s)
            / ((2.0 * s - 2.0).max(0.05) * group.level as f64);
        (pref * sum, tail)
    }
}

/// Mode coefficient phi(s, n), n >= 1, together with a tail estimate.
fn phi_mode(group: &GroupSpec, s: f64, n: u32, c_max: u32, sieve: Option<&Sieve>) -> (f64, f64) {
    let pref = PI.powf(s) * (n as f64).powf(s - 1.0) / gamma(s);
    if group.level == 1 {
        (
            pref * sigma_real(n as u64, 1.0 - 2.0 * s) / zeta(2.0 * s),
            0.0,
        )
    } else {
        let sieve = sieve.expect("sieve required for level > 1");
        let mut sum = 0.0;
        let mut c = group.level as u64;
        while c <= c_max as u64 {
            sum += ramanujan_sum(n as i64, c, sieve) as f64 / (c as f64).powf(2.0 * s);
            c += group.level as u64;
        }
        // |c_c(n)| <= sigma(gcd(c,n)) <= sigma(n)
        let tail = pref.abs() * sigma_real(n as u64, 1.0) * (c_max as f64).powf(1.0 - 2.0 * s)
            / ((2.0 * s - 1.0) * group.level as f64);
        (pref * sum, tail)
    }
}

/// Scattering data phi(s) and phi(s, n) for n = 1..=n_modes.
pub fn scattering(
    group: &GroupSpec,
    s: f64,
    n_modes: u32,
    policy: &TruncationPolicy,
) -> Result<EisensteinScattering> {
    if s <= 0.5 {
        return Err(Error::domain("scattering needs s > 1/2"));
    }
    let sieve = if group.level > 1 {
        Some(Sieve::new(policy.c_max as usize))
    } else {
        None
    };
    let phi = phi_constant(group, s, policy.c_max, sieve.as_ref()).0;
    let coefficients = (1..=n_modes)
        .map(|n| (n, phi_mode(group, s, n, policy.c_max, sieve.as_ref()).0))
        .collect();
    Ok(EisensteinScattering { s, phi, coefficients })
}

/// Fourier-expansion evaluation
/// `E = tau_2^s + phi(s) tau_2^{1-s} + 2 sqrt(tau_2) sum_{n != 0} sqrt(|n|)
///  phi(s,|n|) K_{s-1/2}(2 pi |n| tau_2) e^{2 pi i n tau_1}`.
pub fn eisenstein_fourier(
    group: &GroupSpec,
    tau: HalfPlanePoint,
    s: f64,
    policy: &TruncationPolicy,
) -> Result<SeriesResult> {
    if (s - 1.0).abs() < 1e-9 {
        return Err(Error::Singularity("E(tau; s) has its pole at s = 1".into()));
    }
    if !(0.75..=4.0).contains(&s) {
        return Err(Error::domain(format!("eisenstein_fourier: s = {s} outside [0.75, 4]")));
    }
    if group.level > 1 && s < 1.05 {
        return Err(Error::domain(
            "level > 1 Fourier route needs s >= 1.05 (Dirichlet series pole)",
        ));
    }
    if tau.im() < 0.4 {
        return Err(Error::domain(format!(
            "eisenstein_fourier needs tau_2 >= 0.4, got {}",
            tau.im()
        )));
    }
    let sieve = if group.level > 1 {
        Some(Sieve::new(policy.c_max as usize))
    } else {
        None
    };
    let y = tau.im();
    let (phi, mut tail) = phi_constant(group, s, policy.c_max, sieve.as_ref());
    let mut value = Complex::new(y.powf(s) + phi * y.powf(1.0 - s), 0.0);
    let mut terms = 1usize;
    let mut last = f64::INFINITY;
    for n in 1..=policy.mode_max {
        let (pn, ptail) = phi_mode(group, s, n, policy.c_max, sieve.as_ref());
        let kb = bessel_k(s - 0.5, 2.0 * PI * n as f64 * y)?;
        let weight = 2.0 * y.sqrt() * (n as f64).sqrt() * kb;
        let ang = 2.0 * PI * n as f64 * tau.re();
        value += weight * pn * 2.0 * ang.cos();
        tail += 2.0 * ptail * weight.abs();
        terms += 1;
        let mag = (weight * pn).abs();
        if mag < 1e-17 * value.norm() && last < 1e-17 * value.norm() {
            break;
        }
        last = mag;
        if n == policy.mode_max {
            tail += mag; // mode budget exhausted
        }
    }
    Ok(SeriesResult::new(value, tail, terms, policy.target))
}

/// Kronecker limit data at level one: the pole coefficient and the Laurent
/// constant are extracted by Richardson extrapolation of the Fourier route
/// at s = 1 + h, h in {0.08, 0.04, 0.02}; P(tau) comes from the classical
/// eta product, and beta = lim [E - 1/(vol(s-1))] + P(tau)/vol.
pub fn kronecker_limit(
    group: &GroupSpec,
    tau: HalfPlanePoint,
    policy: &TruncationPolicy,
) -> Result<KroneckerLimitData> {
    if group.level != 1 {
        return Err(Error::domain(
            "kronecker_limit: the eta normalization is only pinned at level 1",
        ));
    }
    let vol = group.covolume;
    let hs = [0.08, 0.04, 0.02];
    let mut d = [0.0; 3];
    let mut c = [0.0; 3];
    for (i, &h) in hs.iter().enumerate() {
        let e = eisenstein_fourier(group, tau, 1.0 + h, policy)?.value.re;
        d[i] = e - 1.0 / (vol * h);
        c[i] = h * e;
    }
    let rich = |v: [f64; 3]| -> f64 {
        let r1a = 2.0 * v[1] - v[0];
        let r1b = 2.0 * v[2] - v[1];
        (4.0 * r1b - r1a) / 3.0
    };
    let d0 = rich(d);
    let pole = rich(c);
    // non-Cauchy extrapolation guard
    let r1a = 2.0 * d[1] - d[0];
    let r1b = 2.0 * d[2] - d[1];
    if (r1b - r1a).abs() > 0.2 * (d[1] - d[0]).abs() + 1e-6 {
        return Err(Error::Conditioning(format!(
            "Kronecker extrapolation not Cauchy: stages {r1a} vs {r1b}"
        )));
    }
    let eta = dedekind_eta(tau.to_complex())?;
    let p_value = (eta.norm().powi(4) * tau.im()).ln();
    let beta = d0 + p_value / vol;
    // linear coefficient estimate: (D(h) - D0)/h extrapolated once
    let c1a = (d[1] - d0) / hs[1];
    let c1b = (d[2] - d0) / hs[2];
    let second = 2.0 * c1b - c1a;
    Ok(KroneckerLimitData {
        pole_coefficient: pole,
        beta,
        p_value,
        second_coefficient: second,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::zeta_deriv;
    use approx::assert_relative_eq;

    fn pt(re: f64, im: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(re, im).unwrap()
    }

    fn full() -> GroupSpec {
        GroupSpec::psl2z()
    }

    const CATALAN: f64 = 0.915_965_594_177_219;

    #[test]
    fn value_at_i_s2_lattice_identity() {
        // E(i;2) = 2 zeta(2) G / zeta(4) = 30 G / pi^2 via the lattice-sum
        // identity sum' (m^2+n^2)^{-2} = 4 zeta(2) beta(2)
        let policy = TruncationPolicy::default_policy().with_coset_bound(1.0e6);
        let e = eisenstein_direct(&full(), pt(0.0, 1.0), 2.0, &policy).unwrap();
        let oracle = 30.0 * CATALAN / (PI * PI);
        assert!((e.value.re - oracle).abs() < 2e-8, "{} vs {oracle}", e.value.re);
        // brute-force lattice cross-check of the oracle itself
        let mut lattice = 0.0;
        let r = 400i64;
        for m in -r..=r {
            for n in -r..=r {
                if m == 0 && n == 0 {
                    continue;
                }
                let q = (m * m + n * n) as f64;
                if q <= (r * r) as f64 {
                    lattice += 1.0 / (q * q);
                }
            }
        }
        // tail of the lattice sum ~ 2 pi int_r^inf t^-3 dt = pi/r^2
        lattice += PI / ((r * r) as f64);
        assert_relative_eq!(lattice, 4.0 * zeta(2.0) * CATALAN, max_relative = 1e-5);
    }

    #[test]
    fn leading_term_at_large_height() {
        // E(iY; 2) - Y^2 is dominated by the identity coset as Y grows
        let policy = TruncationPolicy::default_policy();
        let y = 40.0;
        let e = eisenstein_direct(&full(), pt(0.0, y), 2.0, &policy).unwrap();
        assert!((e.value.re - y * y).abs() < 1e-2, "{}", e.value.re - y * y);
    }

    #[test]
    fn phi_at_2_dirichlet_identity() {
        // phi(2) = sqrt(pi) Gamma(3/2)/Gamma(2) zeta(3)/zeta(4)
        //        = (pi/2) zeta(3)/zeta(4)
        let sc = scattering(&full(), 2.0, 3, &TruncationPolicy::default_policy()).unwrap();
        let oracle = 0.5 * PI * zeta(3.0) / zeta(4.0);
        assert_relative_eq!(sc.phi, oracle, max_relative = 1e-9);
    }

    #[test]
    fn fourier_matches_direct() {
        let policy = TruncationPolicy::default_policy().with_coset_bound(2.0e6);
        for &(tx, ty, s) in &[(1.0 / 3.0, 1.2, 1.7), (0.0, 1.0, 2.0), (0.3, 1.1, 1.7)] {
            let tau = pt(tx, ty);
            let dir = eisenstein_direct(&full(), tau, s, &policy).unwrap();
            let fou = eisenstein_fourier(&full(), tau, s, &policy).unwrap();
            assert!(
                (dir.value.re - fou.value.re).abs() < 1e-6,
                "({tx},{ty},{s}): direct {} fourier {}",
                dir.value.re,
                fou.value.re
            );
        }
    }

    #[test]
    fn fourier_matches_direct_level_two() {
        let policy = TruncationPolicy::default_policy().with_coset_bound(2.0e6);
        let g2 = GroupSpec::gamma0(2).unwrap();
        let tau = pt(0.3, 1.1);
        let s = 1.6;
        let dir = eisenstein_direct(&g2, tau, s, &policy).unwrap();
        let fou = eisenstein_fourier(&g2, tau, s, &policy).unwrap();
        assert!(
            (dir.value.re - fou.value.re).abs() < 1e-5,
            "direct {} fourier {}",
            dir.value.re,
            fou.value.re
        );
    }

    #[test]
    fn mode_decay_ratio() {
        // n-mode coefficients of the Fourier series fall like e^{-2 pi n tau_2}
        let tau = pt(0.0, 2.0);
        let s = 1.5;
        let w = |n: u32| {
            let (p, _) = phi_mode(&full(), s, n, 10_000, None);
            2.0 * tau.im().sqrt()
                * (n as f64).sqrt()
                * p
                * bessel_k(s - 0.5, 2.0 * PI * n as f64 * tau.im()).unwrap()
        };
        let r1 = (w(2) / w(1)).abs();
        let r2 = (w(3) / w(2)).abs();
        let model = (-2.0 * PI * tau.im()).exp();
        assert!(r1 < 2.0 * model && r2 < 2.0 * model, "r1={r1} r2={r2} model={model}");
    }

    #[test]
    fn gamma_invariance_both_routes() {
        // E(gamma tau; s) = E(tau; s) for gamma = S at s = 1.6
        let policy = TruncationPolicy::default_policy().with_coset_bound(1.0e6);
        let tau = pt(1.0 / 3.0, 1.2);
        let stau = {
            let t = tau.to_complex();
            let w = -1.0 / t;
            pt(w.re, w.im)
        };
        let s = 1.6;
        let a = eisenstein_fourier(&full(), tau, s, &policy).unwrap().value.re;
        let b = eisenstein_fourier(&full(), stau, s, &policy).unwrap().value.re;
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        let ad = eisenstein_direct(&full(), tau, s, &policy).unwrap().value.re;
        let bd = eisenstein_direct(&full(), stau, s, &policy).unwrap().value.re;
        assert!((ad - bd).abs() < 1e-4, "{ad} vs {bd}");
        assert!((a - ad).abs() < 1e-4);
    }

    #[test]
    fn laplace_eigen_equation_fd() {
        // Delta_0 E = s(1-s) E at (tau, s) = (0.3 + i, 1.7), 5-point stencil
        let policy = TruncationPolicy::default_policy();
        let s = 1.7;
        let f = |x: f64, y: f64| {
            eisenstein_fourier(&full(), pt(x, y), s, &policy).unwrap().value.re
        };
        let (x0, y0) = (0.3, 1.0);
        let lap = |h: f64| {
            let fxx = (f(x0 + h, y0) + f(x0 - h, y0) - 2.0 * f(x0, y0)) / (h * h);
            let fyy = (f(x0, y0 + h) + f(x0, y0 - h) - 2.0 * f(x0, y0)) / (h * h);
            -y0 * y0 * (fxx + fyy)
        };
        let l1 = lap(0.02);
        let l2 = lap(0.01);
        let lap_r = (4.0 * l2 - l1) / 3.0;
        let expect = s * (1.0 - s) * f(x0, y0);
        assert!(
            (lap_r - expect).abs() < 1e-4 * expect.abs(),
            "lap {lap_r} vs {expect}"
        );
    }

    #[test]
    fn kronecker_limit_level_one() {
        let policy = TruncationPolicy::default_policy();
        // classical oracle for beta on PSL2(Z):
        // beta = (6/pi)(gamma_E - log 2) - pi zeta'(2)/zeta(2)^2
        const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
        let beta_classical =
            6.0 / PI * (EULER_GAMMA - (2.0f64).ln()) - PI * zeta_deriv(2.0) / zeta(2.0).powi(2);
        let mut betas = Vec::new();
        for &(tx, ty) in &[(0.0, 1.0), (0.0, 2.0), (0.25, 3.0), (0.1, 1.4), (-0.3, 2.2)] {
            let k = kronecker_limit(&full(), pt(tx, ty), &policy).unwrap();
            assert!((k.pole_coefficient - 3.0 / PI).abs() < 1e-6, "pole {}", k.pole_coefficient);
            betas.push(k.beta);
        }
        let mean = betas.iter().sum::<f64>() / betas.len() as f64;
        for &b in &betas {
            assert!((b - mean).abs() < 1e-6, "beta spread: {betas:?}");
        }
        assert!(
            (mean - beta_classical).abs() < 1e-6,
            "beta {mean} vs classical {beta_classical}"
        );
        // P(i) = log(|eta(i)|^4) = -1.0547...
        let ki = kronecker_limit(&full(), pt(0.0, 1.0), &policy).unwrap();
        assert!((ki.p_value - (-1.054_7)).abs() < 1e-3, "P(i) = {}", ki.p_value);
        assert!(ki.pole_coefficient > 0.0);
    }

    #[test]
    fn domain_errors() {
        let policy = TruncationPolicy::default_policy();
        assert!(eisenstein_direct(&full(), pt(0.0, 1.0), 1.0, &policy).is_err());
        assert!(eisenstein_fourier(&full(), pt(0.0, 1.0), 1.0, &policy).is_err());
        assert!(eisenstein_fourier(&full(), pt(0.0, 0.2), 1.5, &policy).is_err());
        let g2 = GroupSpec::gamma0(2).unwrap();
        assert!(kronecker_limit(&g2, pt(0.0, 1.0), &policy).is_err());
    }
}
