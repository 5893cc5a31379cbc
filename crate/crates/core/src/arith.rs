//! Small integer-arithmetic helpers: gcd, extended gcd, modular inverses,
//! and multiplicative functions via a smallest-prime-factor sieve.

/// Greatest common divisor (non-negative result).
pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = b;
        b = a % b;
        a = t;
    }
    a
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    (r0, x0, y0)
}

/// Inverse of d modulo c (gcd(d, c) = 1, c >= 1), in [0, c).
pub fn mod_inverse(d: i64, c: i64) -> i64 {
    let (g, x, _) = ext_gcd(d.rem_euclid(c), c);
    debug_assert!(g == 1 || g == -1);
    let x = if g < 0 { -x } else { x };
    x.rem_euclid(c)
}

/// Smallest-prime-factor sieve for multiplicative-function evaluation.
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        let n = limit.max(2);
        let mut spf = vec![0u32; n + 1];
        for i in 2..=n {
            if spf[i] == 0 {
                let mut j = i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Prime factorization as (p, multiplicity) pairs.
    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        while n > 1 {
            let p = if (n as usize) < self.spf.len() {
                self.spf[n as usize] as u64
            } else {
                trial_factor(n)
            };
            let mut k = 0;
            while n % p == 0 {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        out
    }

    /// Euler totient.
    pub fn phi(&self, n: u64) -> u64 {
        let mut r = n;
        for (p, _) in self.factor(n) {
            r -= r / p;
        }
        r
    }

    /// Moebius function.
    pub fn mu(&self, n: u64) -> i64 {
        let f = self.factor(n);
        if f.iter().any(|&(_, k)| k > 1) {
            0
        } else if f.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Number of divisors.
    pub fn tau(&self, n: u64) -> u64 {
        self.factor(n).iter().map(|&(_, k)| (k + 1) as u64).product()
    }

    /// Divisors of n, ascending.
    pub fn divisors(&self, n: u64) -> Vec<u64> {
        let mut divs = vec![1u64];
        for (p, k) in self.factor(n) {
            let len = divs.len();
            let mut pe = 1;
            for _ in 0..k {
                pe *= p;
                for i in 0..len {
                    divs.push(divs[i] * pe);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

fn trial_factor(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 2;
    }
    n
}

/// sigma_e(n) = sum of d^e over divisors of n, for real exponent e.
pub fn sigma_real(n: u64, e: f64) -> f64 {
    let mut s = 0.0;
    for d in 1..=n {
        if n % d == 0 {
            s += (d as f64).powf(e);
        }
    }
    s
}

/// sigma_1(n), integer version.
pub fn sigma1(n: u64) -> u64 {
    (1..=n).filter(|d| n % d == 0).sum()
}
