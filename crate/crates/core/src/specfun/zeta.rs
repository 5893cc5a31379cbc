//! Riemann zeta and its derivative on the real line via Euler-Maclaurin.
//!
//! Valid for real s > -1 away from s = 1; accuracy ~1e-14 on the range this
//! crate uses (s in [0.9, 8] and the Kronecker-limit neighborhood of 1).

const EM_N: usize = 18;
// B_{2j} for j = 1..=6
const BERN: [f64; 6] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
];

/// zeta(s) for real s (simple pole at s=1; do not call at s=1 exactly).
pub fn zeta(s: f64) -> f64 {
    let n = EM_N as f64;
    let mut sum = 0.0;
    for k in 1..EM_N {
        sum += (k as f64).powf(-s);
    }
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // correction terms: B_{2j}/(2j)! * (s)_{2j-1} * n^{-s-2j+1}
    let mut rising = s; // (s)_1
    let mut fact = 2.0; // (2j)!
    let mut npow = n.powf(-s - 1.0);
    for (j, &b) in BERN.iter().enumerate() {
        sum += b / fact * rising * npow;
        // update for next j: rising *= (s+2j-1)(s+2j)
        let tj = 2.0 * (j as f64 + 1.0);
        rising *= (s + tj - 1.0) * (s + tj);
        fact *= (tj + 1.0) * (tj + 2.0);
        npow /= n * n;
    }
    sum
}

/// d/ds zeta(s), analytic Euler-Maclaurin derivative.
pub fn zeta_deriv(s: f64) -> f64 {
    let n = EM_N as f64;
    let ln_n = n.ln();
    let mut sum = 0.0;
    for k in 2..EM_N {
        let kf = k as f64;
        sum -= kf.ln() * kf.powf(-s);
    }
    sum += -ln_n * n.powf(1.0 - s) / (s - 1.0) - n.powf(1.0 - s) / ((s - 1.0) * (s - 1.0));
    sum += -0.5 * ln_n * n.powf(-s);
    // d/ds [B/(2j)! * P_j(s) * n^{-s-2j+1}], P_j(s) = s(s+1)...(s+2j-2)
    let mut fact = 2.0;
    let mut npow = n.powf(-s - 1.0);
    for (j, &b) in BERN.iter().enumerate() {
        let terms = 2 * j + 1; // factors in P_j
        let mut p = 1.0;
        let mut dp_over_p = 0.0;
        for i in 0..terms {
            p *= s + i as f64;
            dp_over_p += 1.0 / (s + i as f64);
        }
        sum += b / fact * (p * dp_over_p - p * ln_n) * npow;
        let tj = 2.0 * (j as f64 + 1.0);
        fact *= (tj + 1.0) * (tj + 2.0);
        npow /= n * n;
    }
    sum
}
