//! Polylogarithms Li_s for integer s >= 0, the dilogarithm on the cut plane,
//! and the Rogers dilogarithm extended to the whole real line.

use crate::{Complex, Error, Result};
use std::f64::consts::PI;

const PI2_6: f64 = PI * PI / 6.0;

/// Li_s(w) for integer s >= 0 on |w| < 1 (s = 0, 1 in closed form, s >= 2 by
/// series). Li_2 additionally extends to all of C minus the cut [1, inf)
/// through `dilog`.
pub fn polylog(s: u32, w: Complex) -> Result<Complex> {
    match s {
        0 => {
            if (w - 1.0).norm() < 1e-300 {
                return Err(Error::Singularity("Li_0 pole at w = 1".into()));
            }
            Ok(w / (1.0 - w))
        }
        1 => Ok(-(Complex::new(1.0, 0.0) - w).ln()),
        2 => dilog(w),
        _ => {
            if w.norm() >= 1.0 {
                return Err(Error::domain(format!(
                    "Li_{s} series requires |w| < 1, got |w| = {}",
                    w.norm()
                )));
            }
            let mut sum = Complex::new(0.0, 0.0);
            let mut p = Complex::new(1.0, 0.0);
            for n in 1..2000 {
                p *= w;
                let term = p / (n as f64).powi(s as i32);
                sum += term;
                if term.norm() < 1e-17 * (sum.norm() + 1e-300) {
                    break;
                }
            }
            Ok(sum)
        }
    }
}

// Coefficients B_k/(k+1)! of the expansion Li_2(z) = sum_k B_k u^{k+1}/(k+1)!
// with u = -ln(1-z); all odd k > 1 vanish.
const DILOG_COEF: [(u32, f64); 18] = [
    (0, 1.0),
    (1, -0.25),
    (2, 2.777_777_777_777_778e-2),
    (4, -2.777_777_777_777_778e-4),
    (6, 4.724_111_866_969_01e-6),
    (8, -9.185_773_074_661_963e-8),
    (10, 1.897_886_998_897_1e-9),
    (12, -4.064_761_645_144_226e-11),
    (14, 8.921_691_020_456_452e-13),
    (16, -1.993_929_586_072_108e-14),
    (18, 4.518_980_029_619_918e-16),
    (20, -1.035_651_761_218_125e-17),
    (22, 2.395_218_621_026_187e-19),
    (24, -5.581_785_874_325_009e-21),
    (26, 1.309_150_755_418_321e-22),
    (28, -3.087_419_802_426_74e-24),
    (30, 7.315_975_652_702_203e-26),
    (32, -1.740_845_657_234_001e-27),
];

/// Dilogarithm on C \ [1, inf).
pub fn dilog(w: Complex) -> Result<Complex> {
    if w.im == 0.0 && w.re >= 1.0 {
        return Err(Error::domain(format!("Li_2 cut [1, inf) hit at {}", w.re)));
    }
    if w.norm() > 1.0 {
        // inversion: Li2(w) = -Li2(1/w) - pi^2/6 - Log^2(-w)/2
        let inner = dilog(1.0 / w)?;
        let l = (-w).ln();
        return Ok(-inner - PI2_6 - 0.5 * l * l);
    }
    if w.re > 0.5 {
        // reflection keeps |log(1-w)| bounded: Li2(w) =
        // pi^2/6 - Log(w) Log(1-w) - Li2(1-w)
        let one_minus = Complex::new(1.0, 0.0) - w;
        let inner = dilog(one_minus)?;
        return Ok(PI2_6 - w.ln() * one_minus.ln() - inner);
    }
    // |w| <= 1, Re w <= 1/2, off the cut: Bernoulli series in u = -Log(1-w);
    // |u| <= sqrt(ln^2 2 + pi^2/4) < 1.8 < 2 pi, so it converges geometrically.
    let u = -(Complex::new(1.0, 0.0) - w).ln();
    let mut sum = Complex::new(0.0, 0.0);
    let mut upow = Complex::new(1.0, 0.0);
    let mut k_done = 0;
    for &(k, c) in DILOG_COEF.iter() {
        while k_done < k + 1 {
            upow *= u;
            k_done += 1;
        }
        sum += c * upow;
    }
    Ok(sum)
}

fn li2_real(x: f64) -> f64 {
    dilog(Complex::new(x, 0.0)).expect("off-cut real dilog").re
}

/// Rogers dilogarithm on all of R:
/// `L(x) = Li2(x) + log(x) log(1-x)/2` on (0,1), `L(0) = 0`, `L(1) = pi^2/6`,
/// `L(x) = 2 L(1) - L(1/x)` for x > 1 and `L(x) = -L(x/(x-1))` for x < 0.
pub fn rogers_l(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x == 1.0 {
        PI2_6
    } else if 0.0 < x && x < 1.0 {
        li2_real(x) + 0.5 * x.ln() * (1.0 - x).ln()
    } else if x > 1.0 {
        2.0 * PI2_6 - rogers_l(1.0 / x)
    } else {
        -rogers_l(x / (x - 1.0))
    }
}

/// d/du of the Rogers kernel building block L(-u) for u > 0:
/// from L(-u) = Li2(-u) + log(u) log(1+u)/2 one gets
/// `d/du L(-u) = (log(u)/(1+u) - log(1+u)/u)/2`.
pub fn rogers_l_deriv_neg(u: f64) -> f64 {
    0.5 * (u.ln() / (1.0 + u) - (1.0 + u).ln() / u)
}

/// Derivative of L itself on (0,1) (used in tests).
pub fn rogers_l_deriv(x: f64) -> f64 {
    debug_assert!(0.0 < x && x < 1.0);
    // L'(x) = -log(1-x)/(2x) - log(x)/(2(1-x))
    -0.5 * (1.0 - x).ln() / x - 0.5 * x.ln() / (1.0 - x)
}
