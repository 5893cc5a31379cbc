//! Level-one modular q-series: Dedekind eta, Eisenstein series E2/E4/E6,
//! the discriminant and the j-invariant, plus their exact term-wise
//! q-derivatives (Theta = q d/dq).
//!
//! All evaluations assume tau_2 >= 0.2 (|q| <= e^{-0.4 pi} ~ 0.285), where a
//! few dozen terms reach full double accuracy; callers reduce to the
//! fundamental domain first if needed.

use crate::{Complex, Error, Result};
use std::f64::consts::PI;

pub const MIN_IM: f64 = 0.2;

/// A truncated q-expansion sum a_n q^n, n = 0..order, with the nome
/// q = e^{2 pi i tau} implied.
#[derive(Debug, Clone)]
pub struct QSeries {
    pub coefficients: Vec<f64>,
    pub order: usize,
}

impl QSeries {
    pub fn eval(&self, q: Complex) -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            acc = acc * q + c;
        }
        acc
    }

    /// Termwise Theta = q d/dq derivative.
    pub fn theta(&self) -> QSeries {
        QSeries {
            coefficients: self
                .coefficients
                .iter()
                .enumerate()
                .map(|(n, &c)| n as f64 * c)
                .collect(),
            order: self.order,
        }
    }

    /// Geometric bound on the dropped tail at |q|.
    pub fn tail_bound(&self, q_abs: f64) -> f64 {
        let last = self.coefficients.last().copied().unwrap_or(0.0).abs();
        last * q_abs.powi(self.order as i32) * q_abs / (1.0 - q_abs)
    }
}

fn sigma_u64(n: u64, e: u32) -> f64 {
    let mut s = 0.0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            s += (d as f64).powi(e as i32);
            let other = n / d;
            if other != d {
                s += (other as f64).powi(e as i32);
            }
        }
        d += 1;
    }
    s
}

/// Eisenstein q-expansion E_k, k in {2, 4, 6}, as a QSeries truncated so the
/// first omitted term is below 1e-16 relative at |q| = q_abs.
pub fn eisenstein_series_coeffs(k: u32, q_abs: f64, cap: usize) -> Result<QSeries> {
    let (mult, e) = match k {
        2 => (-24.0, 1),
        4 => (240.0, 3),
        6 => (-504.0, 5),
        _ => return Err(Error::domain(format!("E_k implemented for k in {{2,4,6}}, got {k}"))),
    };
    let mut coeffs = vec![1.0];
    for n in 1..=cap.max(8) {
        let c = mult * sigma_u64(n as u64, e);
        coeffs.push(c);
        if c.abs() * q_abs.powi(n as i32) < 1e-16 {
            break;
        }
    }
    let order = coeffs.len() - 1;
    Ok(QSeries { coefficients: coeffs, order })
}

fn check_domain(tau: Complex) -> Result<Complex> {
    if tau.im < MIN_IM {
        return Err(Error::domain(format!(
            "q-series require Im(tau) >= {MIN_IM}, got {}",
            tau.im
        )));
    }
    Ok((Complex::new(0.0, 2.0 * PI) * tau).exp())
}

/// E_k(tau) for k in {2, 4, 6}.
pub fn eisenstein_qseries(k: u32, tau: Complex) -> Result<Complex> {
    let q = check_domain(tau)?;
    let series = eisenstein_series_coeffs(k, q.norm(), 600)?;
    Ok(series.eval(q))
}

/// Theta E_k = q d/dq E_k, by exact termwise differentiation.
pub fn theta_eisenstein(k: u32, tau: Complex) -> Result<Complex> {
    let q = check_domain(tau)?;
    let series = eisenstein_series_coeffs(k, q.norm(), 600)?;
    Ok(series.theta().eval(q))
}

/// Dedekind eta via the pentagonal-number series
/// eta(tau) = q^{1/24} sum_k (-1)^k q^{k(3k-1)/2}.
pub fn dedekind_eta(tau: Complex) -> Result<Complex> {
    let q = check_domain(tau)?;
    let mut sum = Complex::new(0.0, 0.0);
    let qn = q.norm();
    for k in -12i64..=12 {
        let e = k * (3 * k - 1) / 2;
        if qn.powi(e as i32) < 1e-18 && k.abs() > 1 {
            continue;
        }
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        sum += sign * q.powf(e as f64);
    }
    let q24 = (Complex::new(0.0, 2.0 * PI) * tau / 24.0).exp();
    Ok(q24 * sum)
}

/// Modular discriminant Delta = eta^24.
pub fn discriminant(tau: Complex) -> Result<Complex> {
    Ok(dedekind_eta(tau)?.powi(24))
}

/// Klein j-invariant, j = E4^3 / Delta.
pub fn j_invariant(tau: Complex) -> Result<Complex> {
    let e4 = eisenstein_qseries(4, tau)?;
    let delta = discriminant(tau)?;
    if delta.norm() < 1e-250 {
        return Err(Error::Conditioning("Delta underflow in j".into()));
    }
    Ok(e4.powi(3) / delta)
}

/// Theta j = q dj/dq = -E4^2 E6 / Delta (classical closed form; this is
/// j'(tau)/(2 pi i)).
pub fn theta_j(tau: Complex) -> Result<Complex> {
    let e4 = eisenstein_qseries(4, tau)?;
    let e6 = eisenstein_qseries(6, tau)?;
    let delta = discriminant(tau)?;
    Ok(-e4 * e4 * e6 / delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn rho() -> Complex {
        c(-0.5, 3.0f64.sqrt() / 2.0)
    }

    #[test]
    fn j_classical_values() {
        // j(i) = 1728, j(rho) = 0, j(2i) = 66^3 = 287496
        let ji = j_invariant(c(0.0, 1.0)).unwrap();
        assert_relative_eq!(ji.re, 1728.0, max_relative = 1e-12);
        assert!(ji.im.abs() < 1e-9);
        let jrho = j_invariant(rho()).unwrap();
        assert!(jrho.norm() < 1e-9, "j(rho) = {jrho}");
        let j2i = j_invariant(c(0.0, 2.0)).unwrap();
        assert_relative_eq!(j2i.re, 287_496.0, max_relative = 1e-12);
    }

    #[test]
    fn j_qseries_leading_coefficients() {
        // q-series oracle: j = 1/q + 744 + 196884 q + O(q^2); test by
        // evaluating at large Im(tau) where higher terms die
        let tau = c(0.13, 6.0);
        let q = (Complex::new(0.0, 2.0 * PI) * tau).exp();
        let j = j_invariant(tau).unwrap();
        let model = 1.0 / q + 744.0 + 196_884.0 * q;
        assert!((j - model).norm() < 3e-8 * j.norm(), "diff {}", (j - model).norm());
    }

    #[test]
    fn modularity_fixed_points() {
        // E6(i) = 0 forced by modularity (E6(i) = i^6 E6(i) wait: S fixes i,
        // weight 6: E6(i) = (i)^6 E6(i) = -E6(i))
        assert!(eisenstein_qseries(6, c(0.0, 1.0)).unwrap().norm() < 1e-12);
        // E4(rho) = 0
        assert!(eisenstein_qseries(4, rho()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn eta_at_i() {
        // eta(i) = Gamma(1/4) / (2 pi^{3/4}) = 0.7682254223260566
        let v = dedekind_eta(c(0.0, 1.0)).unwrap();
        assert_relative_eq!(v.re, 0.768_225_422_326_056_6, max_relative = 1e-12);
        assert!(v.im.abs() < 1e-14);
    }

    #[test]
    fn eta_functional_equation() {
        // eta(-1/tau) = sqrt(-i tau) eta(tau)
        for &(re, im) in &[(0.0, 1.3), (0.2, 0.9), (-0.3, 1.8)] {
            let tau = c(re, im);
            let inv = -1.0 / tau;
            if inv.im < MIN_IM {
                continue;
            }
            let lhs = dedekind_eta(inv).unwrap();
            let rhs = (Complex::new(0.0, -1.0) * tau).sqrt() * dedekind_eta(tau).unwrap();
            assert!((lhs - rhs).norm() < 1e-13 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn discriminant_vs_e_series() {
        // 1728 Delta = E4^3 - E6^2
        for &(re, im) in &[(0.1, 1.0), (0.0, 2.0), (-0.4, 0.7)] {
            let tau = c(re, im);
            let lhs = 1728.0 * discriminant(tau).unwrap();
            let rhs = eisenstein_qseries(4, tau).unwrap().powi(3)
                - eisenstein_qseries(6, tau).unwrap().powi(2);
            assert!((lhs - rhs).norm() < 1e-12 * rhs.norm());
        }
    }

    #[test]
    fn theta_identities_ramanujan() {
        // Theta E4 = (E2 E4 - E6)/3, Theta E6 = (E2 E6 - E4^2)/2
        for &(re, im) in &[(0.0, 1.0), (0.3, 1.4), (0.0, 0.6)] {
            let tau = c(re, im);
            let e2 = eisenstein_qseries(2, tau).unwrap();
            let e4 = eisenstein_qseries(4, tau).unwrap();
            let e6 = eisenstein_qseries(6, tau).unwrap();
            let t4 = theta_eisenstein(4, tau).unwrap();
            let t6 = theta_eisenstein(6, tau).unwrap();
            assert!((t4 - (e2 * e4 - e6) / 3.0).norm() < 1e-11 * e4.norm().max(1.0));
            assert!((t6 - (e2 * e6 - e4 * e4) / 2.0).norm() < 1e-11 * e4.norm().max(1.0));
        }
    }

    #[test]
    fn theta_j_two_routes() {
        // closed form -E4^2 E6/Delta vs j (3 ThetaE4/E4 - E2)
        for &(re, im) in &[(0.0, 1.5), (0.2, 1.1)] {
            let tau = c(re, im);
            let a = theta_j(tau).unwrap();
            let j = j_invariant(tau).unwrap();
            let e2 = eisenstein_qseries(2, tau).unwrap();
            let e4 = eisenstein_qseries(4, tau).unwrap();
            let t4 = theta_eisenstein(4, tau).unwrap();
            let b = j * (3.0 * t4 / e4 - e2);
            assert!((a - b).norm() < 1e-10 * a.norm());
        }
    }

    #[test]
    fn hecke_consistency_via_reduction() {
        // j(i/2) = j(2i) (S-map) and j((i+1)/2) = j(i) (S then T)
        let j2i = j_invariant(c(0.0, 2.0)).unwrap();
        let ji2 = j_invariant(c(0.0, 0.5)).unwrap();
        assert!((j2i - ji2).norm() < 1e-9 * j2i.norm());
        let jhalf = j_invariant(c(0.5, 0.5)).unwrap();
        let ji = j_invariant(c(0.0, 1.0)).unwrap();
        assert!((jhalf - ji).norm() < 1e-8 * (ji.norm() + 1.0));
        // and the Hecke sum j(2i) + j(i/2) + j((i+1)/2) is self-consistent
        let hecke = j2i + ji2 + jhalf;
        assert_relative_eq!(hecke.re, 2.0 * 287_496.0 + 1728.0, max_relative = 1e-9);
    }

    #[test]
    fn domain_guard() {
        assert!(j_invariant(c(0.0, 0.1)).is_err());
        assert!(dedekind_eta(c(0.0, 0.19)).is_err());
    }
}
