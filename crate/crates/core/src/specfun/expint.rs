//! Exponential integrals E1 and Ei on the real line.

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// E1(y) for y > 0.
pub fn expint_e1(y: f64) -> f64 {
    debug_assert!(y > 0.0);
    if y <= 1.0 {
        // E1(y) = -gamma - ln y + sum_{k>=1} (-1)^{k+1} y^k/(k k!)
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -y / k as f64;
            let add = -term / k as f64;
            sum += add;
            if add.abs() < 1e-17 * (sum.abs() + 1.0) {
                break;
            }
        }
        -EULER_GAMMA - y.ln() + sum
    } else {
        (-y).exp() * e1_cf(y)
    }
}

/// e^y * E1(y), stable for large y (y > 0).
pub fn expint_e1_scaled(y: f64) -> f64 {
    debug_assert!(y > 0.0);
    if y <= 1.0 {
        y.exp() * expint_e1(y)
    } else {
        e1_cf(y)
    }
}

/// Continued fraction for e^y E1(y), y > 1 (modified Lentz).
fn e1_cf(y: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = tiny;
    let mut c = f;
    let mut d = 0.0;
    // CF: 1/(y+1- 1/(y+3- 4/(y+5- 9/(...))))  with a_k = -k^2
    for k in 0..200 {
        let (a, b) = if k == 0 {
            (1.0, y + 1.0)
        } else {
            let kf = k as f64;
            (-kf * kf, y + 2.0 * kf + 1.0)
        };
        d = b + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

/// Ei at negative argument: Ei(x) for x < 0 (errors at x >= 0).
pub fn expint_ei(x: f64) -> Result<f64> {
    if !(x < 0.0) {
        return Err(Error::domain(format!("Ei(x) implemented for x < 0 only, got {x}")));
    }
    Ok(-expint_e1(-x))
}

/// Ei(y) for y > 0 (principal value), needed by the I-Bessel
/// order-derivative cross-check.
pub fn expint_ei_pos(y: f64) -> f64 {
    debug_assert!(y > 0.0);
    if y <= 40.0 {
        // Ei(y) = gamma + ln y + sum y^k/(k k!)
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= y / k as f64;
            let add = term / k as f64;
            sum += add;
            if add < 1e-17 * sum {
                break;
            }
        }
        EULER_GAMMA + y.ln() + sum
    } else {
        // asymptotic: Ei(y) ~ e^y/y * sum k!/y^k
        let mut s = 1.0;
        let mut term = 1.0;
        for k in 1..60 {
            let next = term * k as f64 / y;
            if next > term {
                break;
            }
            term = next;
            s += term;
        }
        y.exp() / y * s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent oracle: alternating series for Ei(-x) summed in f64
    /// directly from the definition (converges for moderate x).
    fn ei_neg_series(x: f64) -> f64 {
        let y = -x;
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..120 {
            term *= -y / k as f64;
            sum += term / k as f64;
        }
        EULER_GAMMA + y.ln() + sum
    }

    #[test]
    fn ei_matches_series_oracle() {
        // Ei(-2) = -0.04890051070808063...
        let v = expint_ei(-2.0).unwrap();
        assert_relative_eq!(v, -0.048_900_510_708_080_63, max_relative = 1e-12);
        // the alternating oracle keeps ~12 digits up to |x| = 5
        for &x in &[-0.1, -0.5, -1.0, -2.0, -5.0] {
            assert_relative_eq!(expint_ei(x).unwrap(), ei_neg_series(x), max_relative = 1e-11);
        }
        // continued-fraction vs series branches agree across the switch
        for &y in &[0.8f64, 0.95, 1.0, 1.05, 1.3] {
            let a = expint_e1(y);
            let b = (-y).exp() * expint_e1_scaled(y);
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn ei_decay_at_infinity() {
        assert!(expint_ei(-20.0).unwrap().abs() < 1e-9);
        assert!(expint_ei(-20.0).unwrap() < 0.0);
    }

    #[test]
    fn ei_log_singularity_at_zero() {
        // Ei(-x) - (gamma + ln x) -> 0 as x -> 0-
        for &x in &[1e-2, 1e-4, 1e-6] {
            let v = expint_ei(-x).unwrap();
            assert!((v - (EULER_GAMMA + x.ln())).abs() < 2.0 * x, "x={x}");
        }
    }

    #[test]
    fn ei_domain_error() {
        assert!(expint_ei(0.0).is_err());
        assert!(expint_ei(1.0).is_err());
    }

    #[test]
    fn e1_scaled_consistency() {
        for &y in &[0.5, 1.0, 2.0, 10.0, 100.0, 700.0] {
            let s = expint_e1_scaled(y);
            assert!(s > 0.0 && s < 1.0);
            if y <= 300.0 {
                assert_relative_eq!(s, y.exp() * expint_e1(y), max_relative = 1e-12);
            }
            // asymptotic sanity: e^y E1(y) ~ 1/y for large y
            if y >= 100.0 {
                assert_relative_eq!(s, 1.0 / y, max_relative = 0.02);
            }
        }
    }

    #[test]
    fn ei_pos_vs_quadrature() {
        // crude trapezoid oracle for the principal value at y=2:
        // Ei(2) = 4.95423435600189...
        assert_relative_eq!(expint_ei_pos(2.0), 4.954_234_356_001_89, max_relative = 1e-12);
        assert_relative_eq!(expint_ei_pos(50.0), 1.058_563_689_713_169_1e20, max_relative = 1e-10);
    }
}
