//! Kloosterman sums S(m, n; c) at the cusp infinity (level N requires N | c)
//! and the Ramanujan-sum fast path S(m, 0; c).

use crate::arith::{gcd, mod_inverse, Sieve};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Query for S(m, n; c) at a given level (level | c required).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KloostermanQuery {
    pub m: i64,
    pub n: i64,
    pub c: u64,
    pub level: u32,
}

/// S(m, n; c) = sum over d mod c, gcd(d, c) = 1, of
/// e^{2 pi i (m d^{-1} + n d)/c}. The sum is real (d <-> -d pairing); the
/// imaginary part is accumulated and asserted below 1e-12 of the term count.
pub fn kloosterman_sum(q: &KloostermanQuery) -> Result<f64> {
    if q.c == 0 {
        return Err(Error::domain("modulus c must be >= 1"));
    }
    if q.c % q.level as u64 != 0 {
        return Err(Error::domain(format!(
            "level {} does not divide modulus {}",
            q.level, q.c
        )));
    }
    let c = q.c as i64;
    if c == 1 {
        return Ok(1.0);
    }
    let mut re = 0.0;
    let mut im = 0.0;
    let step = 2.0 * PI / c as f64;
    for d in 1..c {
        if gcd(d, c) != 1 {
            continue;
        }
        let dbar = mod_inverse(d, c);
        let ang = step * ((q.m.rem_euclid(c) * dbar + q.n.rem_euclid(c) * d).rem_euclid(c)) as f64;
        re += ang.cos();
        im += ang.sin();
    }
    debug_assert!(im.abs() < 1e-12 * (q.c as f64), "imaginary part {im}");
    Ok(re)
}

/// Batched row: S(m, n; c) for all n in `modes`, sharing the per-d inverse
/// and turning the mode dependence into a complex-power recurrence. Used by
/// the Fourier assemblies where c runs over thousands of moduli.
pub fn kloosterman_row(m: i64, modes: &[i64], c: u64) -> Vec<f64> {
    let ci = c as i64;
    if c == 1 {
        return vec![1.0; modes.len()];
    }
    let (nmin, nmax) = modes
        .iter()
        .fold((i64::MAX, i64::MIN), |(lo, hi), &n| (lo.min(n), hi.max(n)));
    let span = (nmax - nmin) as usize;
    let mut acc = vec![num_complex::Complex64::new(0.0, 0.0); span + 1];
    let step = 2.0 * PI / c as f64;
    let mr = m.rem_euclid(ci);
    for d in 1..ci {
        if gcd(d, ci) != 1 {
            continue;
        }
        let dbar = mod_inverse(d, ci);
        // base = e(m dbar / c) * w^{nmin},  w = e(d/c)
        let base_ang = step * ((mr * dbar).rem_euclid(ci) as f64 + (nmin.rem_euclid(ci) * d).rem_euclid(ci) as f64);
        let w = num_complex::Complex64::new((step * d as f64).cos(), (step * d as f64).sin());
        let mut term = num_complex::Complex64::new(base_ang.cos(), base_ang.sin());
        for slot in acc.iter_mut() {
            *slot += term;
            term *= w;
        }
    }
    modes.iter().map(|&n| acc[(n - nmin) as usize].re).collect()
}

/// Ramanujan sum c_c(n) = S(n, 0; c) = S(0, n; c), via the divisor formula
/// c_c(n) = sum over d | gcd(n, c) of d mu(c/d). Exact in integers.
pub fn ramanujan_sum(n: i64, c: u64, sieve: &Sieve) -> i64 {
    let g = gcd(n, c as i64) as u64;
    let mut total = 0i64;
    for d in sieve.divisors(g) {
        total += d as i64 * sieve.mu(c / d);
    }
    total
}

/// Weil-bound majorant d(c) sqrt(gcd(m,n,c)) sqrt(c) (diagnostic).
pub fn weil_bound(m: i64, n: i64, c: u64, sieve: &Sieve) -> f64 {
    let g = gcd(gcd(m, n), c as i64) as f64;
    sieve.tau(c) as f64 * g.sqrt() * (c as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: i64, n: i64, c: u64) -> f64 {
        kloosterman_sum(&KloostermanQuery { m, n, c, level: 1 }).unwrap()
    }

    /// Direct-definition oracle, complex exponentials summed naively.
    fn brute(m: i64, n: i64, c: u64) -> f64 {
        let ci = c as i64;
        let mut re = 0.0;
        for d in 1..=ci {
            if gcd(d, ci) != 1 {
                continue;
            }
            // find inverse by scanning (independent of mod_inverse)
            let mut dbar = 0;
            for x in 1..=ci {
                if (d * x).rem_euclid(ci) == 1 % ci {
                    dbar = x;
                    break;
                }
            }
            let ang = 2.0 * PI * ((m * dbar + n * d) as f64) / c as f64;
            re += ang.cos();
        }
        if c == 1 {
            1.0
        } else {
            re
        }
    }

    #[test]
    fn trivial_and_small_cases() {
        assert_eq!(s(5, -3, 1), 1.0);
        // S(1,1;3) = -1 by direct enumeration over d in {1,2}
        assert!((s(1, 1, 3) + 1.0).abs() < 1e-13);
        // S(0,0;c) = phi(c); c = 12 -> 4
        assert!((s(0, 0, 12) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn matches_brute_force() {
        for c in 1..=40u64 {
            for m in -3..=3i64 {
                for n in -2..=4i64 {
                    let a = s(m, n, c);
                    let b = brute(m, n, c);
                    assert!((a - b).abs() < 1e-10, "S({m},{n};{c}): {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn symmetry_m_n() {
        for c in 1..=50u64 {
            for (m, n) in [(1, 2), (-1, 3), (2, 5), (-4, -7)] {
                assert!((s(m, n, c) - s(n, m, c)).abs() < 1e-11, "c={c} m={m} n={n}");
            }
        }
    }

    #[test]
    fn selberg_identity() {
        // S(m,n;c) = sum_{d | gcd(m,n,c)} d S(mn/d^2, 1; c/d)
        let sieve = Sieve::new(100);
        for m in 1..=6i64 {
            for n in 1..=6i64 {
                for c in 1..=60u64 {
                    let lhs = s(m, n, c);
                    let g = gcd(gcd(m, n), c as i64) as u64;
                    let mut rhs = 0.0;
                    for d in sieve.divisors(g) {
                        rhs += d as f64 * s(m * n / (d * d) as i64, 1, c / d);
                    }
                    assert!((lhs - rhs).abs() < 1e-9, "m={m} n={n} c={c}: {lhs} vs {rhs}");
                }
            }
        }
    }

    #[test]
    fn weil_bound_sanity() {
        let sieve = Sieve::new(200);
        for c in 1..=150u64 {
            for (m, n) in [(1, 1), (2, 3), (-1, 4)] {
                let v = s(m, n, c).abs();
                let bound = weil_bound(m, n, c, &sieve);
                assert!(v <= bound + 1e-9, "c={c}: |S|={v} > {bound}");
            }
        }
    }

    #[test]
    fn ramanujan_matches_direct() {
        let sieve = Sieve::new(200);
        // c_1(n) = 1
        assert_eq!(ramanujan_sum(7, 1, &sieve), 1);
        // c_4(2) = -2
        assert_eq!(ramanujan_sum(2, 4, &sieve), -2);
        for c in 1..=60u64 {
            for n in 0..=12i64 {
                let direct = s(n, 0, c);
                let fast = ramanujan_sum(n, c, &sieve) as f64;
                assert!((direct - fast).abs() < 1e-9, "n={n} c={c}");
            }
        }
        // c_c(0) = phi(c)
        for c in 2..=50u64 {
            assert_eq!(ramanujan_sum(0, c, &sieve), sieve.phi(c) as i64);
        }
    }

    #[test]
    fn batched_row_matches_single() {
        let modes: Vec<i64> = (-6..=6).collect();
        for c in [1u64, 2, 7, 12, 37, 101] {
            let row = kloosterman_row(-1, &modes, c);
            for (i, &n) in modes.iter().enumerate() {
                let single = s(-1, n, c);
                assert!((row[i] - single).abs() < 1e-9, "c={c} n={n}");
            }
        }
    }

    #[test]
    fn level_constraint() {
        let q = KloostermanQuery { m: 1, n: 1, c: 6, level: 4 };
        assert!(kloosterman_sum(&q).is_err());
        let q = KloostermanQuery { m: 1, n: 1, c: 8, level: 4 };
        assert!(kloosterman_sum(&q).is_ok());
    }
}
