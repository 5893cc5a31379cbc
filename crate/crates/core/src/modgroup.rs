//! Group combinatorics for PSL2(Z) and Gamma0(N): coset enumeration over
//! Gamma_inf \ Gamma by denominator pairs (c, d), Im(gamma tau) counting,
//! group balls in the point-pair invariant, and stabilizer orders.

use crate::arith::{ext_gcd, gcd};
use crate::halfplane::HalfPlanePoint;
use crate::{Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Integer matrix (a b; c d) with ad - bc = 1, identified with its negative.
/// Canonical representative: c > 0, or c = 0 and d > 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct UnimodularMap {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl UnimodularMap {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .and_then(|ad| b.checked_mul(c).and_then(|bc| ad.checked_sub(bc)))
            .ok_or_else(|| Error::TruncationTooLarge("matrix entries overflow".into()))?;
        if det != 1 {
            return Err(Error::domain(format!("determinant {det} != 1")));
        }
        Ok(Self::normalize(a, b, c, d))
    }

    fn normalize(a: i64, b: i64, c: i64, d: i64) -> Self {
        if c < 0 || (c == 0 && d < 0) {
            UnimodularMap { a: -a, b: -b, c: -c, d: -d }
        } else {
            UnimodularMap { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        UnimodularMap { a: 1, b: 0, c: 0, d: 1 }
    }

    pub fn mul(&self, other: &UnimodularMap) -> UnimodularMap {
        UnimodularMap::normalize(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    pub fn inverse(&self) -> UnimodularMap {
        UnimodularMap::normalize(self.d, -self.b, -self.c, self.a)
    }

    pub fn apply(&self, z: HalfPlanePoint) -> HalfPlanePoint {
        crate::halfplane::moebius_apply(self, z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKind {
    Full,
    Gamma0,
}

/// The ambient group: PSL2(Z) or Gamma0(N) (projectivized), with its
/// covolume (pi/3 times the index).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupSpec {
    pub kind: GroupKind,
    pub level: u32,
    pub index: u64,
    pub covolume: f64,
}

impl GroupSpec {
    pub fn psl2z() -> Self {
        GroupSpec { kind: GroupKind::Full, level: 1, index: 1, covolume: PI / 3.0 }
    }

    /// Gamma0(N); index = N prod_{p | N} (1 + 1/p).
    pub fn gamma0(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("level must be positive"));
        }
        if n == 1 {
            return Ok(Self::psl2z());
        }
        let mut index = n as u64;
        let mut m = n;
        let mut p = 2u32;
        while p * p <= m {
            if m % p == 0 {
                index = index / p as u64 * (p as u64 + 1);
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        if m > 1 {
            index = index / m as u64 * (m as u64 + 1);
        }
        Ok(GroupSpec {
            kind: GroupKind::Gamma0,
            level: n,
            index,
            covolume: PI / 3.0 * index as f64,
        })
    }

    pub fn level_divides(&self, c: i64) -> bool {
        c % self.level as i64 == 0
    }
}

/// Coset of Gamma_inf \ Gamma, keyed by the bottom row (c, d) with
/// gcd(c, d) = 1 and c >= 0 (c = 0 forces d = 1), completed to a matrix by
/// extended gcd with b canonicalized into [0, |d|) when d != 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CosetRep {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl CosetRep {
    /// Complete (c, d) with gcd = 1 to a representative matrix.
    pub fn from_pair(c: i64, d: i64) -> Result<Self> {
        if c == 0 {
            if d != 1 {
                return Err(Error::domain("c = 0 coset must have d = 1"));
            }
            return Ok(CosetRep { a: 1, b: 0, c: 0, d: 1 });
        }
        if c < 0 || gcd(c, d) != 1 {
            return Err(Error::domain(format!("({c}, {d}) is not a valid coset pair")));
        }
        if d == 0 {
            // c = 1: the inversion S = (0 -1; 1 0)
            return Ok(CosetRep { a: 0, b: -1, c: 1, d: 0 });
        }
        // a d - b c = 1
        let (g, x, y) = ext_gcd(d, -c);
        debug_assert_eq!(g.abs(), 1);
        let (mut a, mut b) = if g == 1 { (x, y) } else { (-x, -y) };
        // shift (a, b) -> (a + k c, b + k d) to land b in [0, |d|)
        let k = -(b.div_euclid(d.abs())) * d.signum();
        a = a
            .checked_add(k.checked_mul(c).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        b = b
            .checked_add(k.checked_mul(d).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
        debug_assert!(0 <= b && b < d.abs());
        debug_assert_eq!(a * d - b * c, 1);
        Ok(CosetRep { a, b, c, d })
    }

    pub fn matrix(&self) -> UnimodularMap {
        UnimodularMap { a: self.a, b: self.b, c: self.c, d: self.d }
    }

    /// Image gamma(tau).
    pub fn image(&self, tau: HalfPlanePoint) -> HalfPlanePoint {
        self.matrix().apply(tau)
    }

    /// |c tau + d|^2 for this bottom row.
    pub fn denom_sq(&self, tau: HalfPlanePoint) -> f64 {
        let re = self.c as f64 * tau.re() + self.d as f64;
        let im = self.c as f64 * tau.im();
        re * re + im * im
    }
}

fn overflow() -> Error {
    Error::TruncationTooLarge("coset completion overflows i64".into())
}

/// All cosets with |c tau + d|^2 <= bound, i.e. Im(gamma tau) >= tau_2/bound,
/// each exactly once, identity (0, 1) included. Deterministic (c, d) order.
pub fn cosets_by_denominator(
    group: &GroupSpec,
    tau: HalfPlanePoint,
    bound: f64,
) -> Result<Vec<CosetRep>> {
    if !(bound > 0.0) {
        return Err(Error::domain(format!("bound must be positive, got {bound}")));
    }
    if bound > 1e14 {
        return Err(Error::TruncationTooLarge(format!(
            "coset bound {bound:.3e} would overflow 64-bit enumeration"
        )));
    }
    let mut out = Vec::new();
    if bound >= 1.0 {
        out.push(CosetRep { a: 1, b: 0, c: 0, d: 1 });
    }
    let step = group.level as i64;
    let c_max = (bound.sqrt() / tau.im()).floor() as i64;
    let mut c = step;
    while c <= c_max {
        let ci = c as f64 * tau.im();
        let rem = bound - ci * ci;
        if rem >= 0.0 {
            let half = rem.sqrt();
            let center = -(c as f64) * tau.re();
            let dlo = (center - half).ceil() as i64;
            let dhi = (center + half).floor() as i64;
            for d in dlo..=dhi {
                if gcd(c, d) != 1 {
                    continue;
                }
                let dr = c as f64 * tau.re() + d as f64;
                if dr * dr + ci * ci <= bound {
                    out.push(CosetRep::from_pair(c, d)?);
                }
            }
        }
        c += step;
    }
    Ok(out)
}

/// Exact count of cosets with Im(gamma tau) > eps.
pub fn count_im_above(group: &GroupSpec, tau: HalfPlanePoint, eps: f64) -> Result<u64> {
    if !(eps > 0.0) {
        return Err(Error::domain(format!("eps must be positive, got {eps}")));
    }
    let bound = tau.im() / eps;
    // iteration estimate: half-disc area over the d-lattice
    let est = PI * bound / (2.0 * tau.im() * tau.im() / tau.im());
    if est > 4e9 {
        return Err(Error::TruncationTooLarge(format!(
            "eps = {eps} needs ~{est:.1e} lattice scans; refusing (memory/time budget)"
        )));
    }
    let mut count = 0u64;
    if bound > 1.0 {
        count += 1; // identity coset
    }
    let step = group.level as i64;
    let c_max = (bound.sqrt() / tau.im()).floor() as i64;
    let counts: Vec<u64> = (1..=c_max / step)
        .into_par_iter()
        .map(|k| {
            let c = k * step;
            let ci = c as f64 * tau.im();
            let rem = bound - ci * ci;
            if rem <= 0.0 {
                return 0;
            }
            let half = rem.sqrt();
            let center = -(c as f64) * tau.re();
            let dlo = (center - half).ceil() as i64;
            let dhi = (center + half).floor() as i64;
            let mut n = 0u64;
            for d in dlo..=dhi {
                if gcd(c, d) != 1 {
                    continue;
                }
                let dr = c as f64 * tau.re() + d as f64;
                if dr * dr + ci * ci < bound {
                    n += 1;
                }
            }
            n
        })
        .collect();
    count += counts.iter().sum::<u64>();
    Ok(count)
}

/// Every gamma in Gamma with u(z, gamma tau) <= u_max, exactly once
/// projectively, realized as T^k composed with coset representatives; the
/// admissible translation range k is solved in closed form per coset.
pub fn group_ball(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    u_max: f64,
) -> Result<Vec<UnimodularMap>> {
    if u_max < 0.0 {
        return Err(Error::domain("u_max must be nonnegative"));
    }
    let mut out = Vec::new();
    ball_visit(group, z, tau, u_max, |_, _, mat| out.push(mat))?;
    Ok(out)
}

/// Streaming parallel fold over the ball: calls `f(u, w)` for every gamma
/// with u = u(z, gamma tau) <= u_max and w = gamma tau, summing the complex
/// results with a deterministic (per-c ordered) reduction.
pub fn ball_sum(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    u_max: f64,
    f: impl Fn(f64, crate::Complex) -> crate::Complex + Sync,
) -> Result<(crate::Complex, u64)> {
    let (bins, count) = ball_sum_binned(group, z, tau, &[u_max], f)?;
    Ok((bins[0], count))
}

/// Binned variant: `shells` is an ascending list of radii; `bins[i]`
/// accumulates f over all gamma with u <= shells[i] (cumulative), the last
/// shell being the full ball. Deterministic per-c reduction.
pub fn ball_sum_binned(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    shells: &[f64],
    f: impl Fn(f64, crate::Complex) -> crate::Complex + Sync,
) -> Result<(Vec<crate::Complex>, u64)> {
    let u_max = *shells.last().ok_or_else(|| Error::domain("no shells given"))?;
    let plan = BallPlan::new(group, z, tau, u_max)?;
    let rows: Vec<(Vec<crate::Complex>, u64)> = plan
        .c_values()
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![crate::Complex::new(0.0, 0.0); shells.len()];
            let mut n = 0u64;
            plan.visit_row(c, |u, w, _| {
                let v = f(u, w);
                for (i, &cap) in shells.iter().enumerate() {
                    if u <= cap {
                        acc[i] += v;
                    }
                }
                n += 1;
            });
            (acc, n)
        })
        .collect();
    let mut total = vec![crate::Complex::new(0.0, 0.0); shells.len()];
    let mut count = 0u64;
    for (v, n) in rows {
        for (t, x) in total.iter_mut().zip(v) {
            *t += x;
        }
        count += n;
    }
    Ok((total, count))
}

/// Smallest u(z, gamma tau) over the group (the distance to the orbit),
/// together with the ball count at that radius. Used for singularity checks.
pub fn orbit_min_u(group: &GroupSpec, z: HalfPlanePoint, tau: HalfPlanePoint) -> f64 {
    // the orbit point nearest to z has u <= u(z, tau); search that ball
    let u0 = crate::halfplane::u_invariant(z, tau).value();
    let mut best = u0;
    let _ = ball_visit(group, z, tau, u0 * (1.0 + 1e-12), |u, _, _| {
        if u < best {
            best = u;
        }
    });
    best
}

fn ball_visit(
    group: &GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    u_max: f64,
    mut emit: impl FnMut(f64, crate::Complex, UnimodularMap),
) -> Result<()> {
    let plan = BallPlan::new(group, z, tau, u_max)?;
    for c in plan.c_values() {
        plan.visit_row(c, |u, w, mat| emit(u, w, mat));
    }
    Ok(())
}

/// Enumeration plan for a group ball: per bottom-row c, the d-window comes
/// from the coset bound and the k-window from the translation inequality.
struct BallPlan<'g> {
    group: &'g GroupSpec,
    z: HalfPlanePoint,
    tau: HalfPlanePoint,
    u_max: f64,
    coset_bound: f64,
}

impl<'g> BallPlan<'g> {
    fn new(
        group: &'g GroupSpec,
        z: HalfPlanePoint,
        tau: HalfPlanePoint,
        u_max: f64,
    ) -> Result<Self> {
        // Im(gamma tau) must lie in [z2/rho, z2*rho] with
        // rho = (1+2u) + sqrt((1+2u)^2 - 1); cosets need
        // |c tau + d|^2 <= tau_2 * rho / z2.
        let t = 1.0 + 2.0 * u_max;
        let rho = t + (t * t - 1.0).max(0.0).sqrt();
        let coset_bound = tau.im() * rho / z.im();
        if coset_bound > 1e14 {
            return Err(Error::TruncationTooLarge(format!(
                "ball with u_max = {u_max} needs coset bound {coset_bound:.2e}"
            )));
        }
        Ok(BallPlan { group, z, tau, u_max, coset_bound })
    }

    fn c_values(&self) -> Vec<i64> {
        let step = self.group.level as i64;
        let c_max = (self.coset_bound.sqrt() / self.tau.im()).floor() as i64;
        let mut v = vec![0i64];
        let mut c = step;
        while c <= c_max {
            v.push(c);
            c += step;
        }
        v
    }

    fn visit_row(&self, c: i64, mut emit: impl FnMut(f64, crate::Complex, UnimodularMap)) {
        let (z, tau, u_max) = (self.z, self.tau, self.u_max);
        let mut handle_coset = |rep: CosetRep| {
            let w = rep.image(tau);
            // (z1 - w1 - k)^2 <= 4 z2 w2 u - (z2 - w2)^2
            let disc = 4.0 * z.im() * w.im() * u_max - (z.im() - w.im()) * (z.im() - w.im());
            if disc < 0.0 {
                return;
            }
            let half = disc.sqrt();
            let center = z.re() - w.re();
            let klo = (center - half).ceil() as i64;
            let khi = (center + half).floor() as i64;
            for k in klo..=khi {
                let wk = crate::Complex::new(w.re() + k as f64, w.im());
                let u = ((z.re() - wk.re) * (z.re() - wk.re)
                    + (z.im() - wk.im) * (z.im() - wk.im))
                    / (4.0 * z.im() * wk.im);
                if u <= u_max {
                    let m = UnimodularMap::normalize(
                        rep.a + k * rep.c,
                        rep.b + k * rep.d,
                        rep.c,
                        rep.d,
                    );
                    emit(u, wk, m);
                }
            }
        };
        if c == 0 {
            handle_coset(CosetRep { a: 1, b: 0, c: 0, d: 1 });
            return;
        }
        let ci = c as f64 * tau.im();
        let rem = self.coset_bound - ci * ci;
        if rem < 0.0 {
            return;
        }
        let half = rem.sqrt();
        let center = -(c as f64) * tau.re();
        let dlo = (center - half).ceil() as i64;
        let dhi = (center + half).floor() as i64;
        for d in dlo..=dhi {
            if gcd(c, d) != 1 {
                continue;
            }
            if let Ok(rep) = CosetRep::from_pair(c, d) {
                handle_coset(rep);
            }
        }
    }
}

/// Order of the stabilizer of tau in the group: 2 on the orbit of i, 3 on
/// the orbit of rho (level one), 1 elsewhere; for Gamma0(N) it is decided by
/// orbit membership through the same ball search. Points within u <= 1e-12
/// of a fixed configuration count as fixed.
pub fn stabilizer_order(group: &GroupSpec, tau: HalfPlanePoint) -> u32 {
    match group_ball(group, tau, tau, 1e-12) {
        Ok(ball) => ball.len() as u32,
        Err(_) => 1,
    }
}

/// max over the orbit of Im(gamma tau) = tau_2 / min |c tau + d|^2.
pub fn orbit_max_im(group: &GroupSpec, tau: HalfPlanePoint) -> f64 {
    let mut min_d2 = 1.0f64; // (c, d) = (0, 1)
    let step = group.level as i64;
    let mut c = step;
    while (c as f64 * tau.im()).powi(2) <= min_d2 {
        let ci = c as f64 * tau.im();
        let center = -(c as f64) * tau.re();
        // scan d outward from the center until the horizontal part alone
        // exceeds the current minimum
        let d0 = center.round() as i64;
        let mut offset = 0i64;
        loop {
            let mut progressed = false;
            for d in [d0 - offset, d0 + offset] {
                let dr = c as f64 * tau.re() + d as f64;
                if dr * dr <= min_d2 {
                    progressed = true;
                    if gcd(c, d) == 1 {
                        let v = dr * dr + ci * ci;
                        if v < min_d2 {
                            min_d2 = v;
                        }
                    }
                }
            }
            if !progressed && offset > 0 {
                break;
            }
            offset += 1;
            if offset > 10_000 {
                break;
            }
        }
        c += step;
    }
    tau.im() / min_d2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfplane::u_invariant;

    fn pt(re: f64, im: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(re, im).unwrap()
    }

    fn full() -> GroupSpec {
        GroupSpec::psl2z()
    }

    #[test]
    fn covolume_index_formula() {
        assert_eq!(full().index, 1);
        assert_eq!(GroupSpec::gamma0(2).unwrap().index, 3);
        assert_eq!(GroupSpec::gamma0(4).unwrap().index, 6);
        assert_eq!(GroupSpec::gamma0(6).unwrap().index, 12);
        assert_eq!(GroupSpec::gamma0(12).unwrap().index, 24);
        assert!((GroupSpec::gamma0(2).unwrap().covolume - PI).abs() < 1e-15);
    }

    #[test]
    fn coset_examples() {
        // tau = 2i, B = 1: only the identity (c >= 1 forces |c tau|^2 >= 4)
        let reps = cosets_by_denominator(&full(), pt(0.0, 2.0), 1.0).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!((reps[0].c, reps[0].d), (0, 1));

        // tau = i, B = 1: {(0,1), (1,0)}
        let reps = cosets_by_denominator(&full(), pt(0.0, 1.0), 1.0).unwrap();
        let pairs: Vec<(i64, i64)> = reps.iter().map(|r| (r.c, r.d)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);

        // Gamma0(2), tau = i: the first cosets beyond the identity are
        // (2, +-1) with |2i +- 1|^2 = 5, all with 2 | c
        let g2 = GroupSpec::gamma0(2).unwrap();
        let reps = cosets_by_denominator(&g2, pt(0.0, 1.0), 5.0).unwrap();
        let pairs: Vec<(i64, i64)> = reps.iter().map(|r| (r.c, r.d)).collect();
        assert!(pairs.contains(&(0, 1)));
        assert!(pairs.contains(&(2, 1)));
        assert!(pairs.contains(&(2, -1)));
        assert!(pairs.iter().all(|&(c, _)| c % 2 == 0));
    }

    #[test]
    fn coset_completion_is_unimodular_and_canonical() {
        let reps = cosets_by_denominator(&full(), pt(0.21, 0.8), 400.0).unwrap();
        for r in &reps {
            assert_eq!(r.a * r.d - r.b * r.c, 1);
            if r.d != 0 {
                assert!(0 <= r.b && r.b < r.d.abs(), "rep {r:?}");
            }
        }
        // distinct pairs give distinct cosets: pairs unique
        let mut pairs: Vec<(i64, i64)> = reps.iter().map(|r| (r.c, r.d)).collect();
        let n = pairs.len();
        pairs.dedup();
        assert_eq!(n, pairs.len());
    }

    #[test]
    fn enumeration_completeness_brute_force() {
        // against a plain scan over |c|, |d| <= ceil(sqrt(B)) (1 + |tau|)
        let tau = pt(0.37, 1.21);
        let bound = 60.0;
        let reps = cosets_by_denominator(&full(), tau, bound).unwrap();
        let lim = (bound.sqrt() * (1.0 + tau.to_complex().norm())).ceil() as i64;
        let mut brute = vec![(0i64, 1i64)];
        for c in 1..=lim {
            for d in -lim..=lim {
                if gcd(c, d) == 1 {
                    let dr = c as f64 * tau.re() + d as f64;
                    let di = c as f64 * tau.im();
                    if dr * dr + di * di <= bound {
                        brute.push((c, d));
                    }
                }
            }
        }
        let mut pairs: Vec<(i64, i64)> = reps.iter().map(|r| (r.c, r.d)).collect();
        pairs.sort_unstable();
        brute.sort_unstable();
        assert_eq!(pairs, brute);
    }

    #[test]
    fn count_im_above_examples() {
        // tau = 2i, eps = 1.5: only the identity has Im = 2 > 1.5
        assert_eq!(count_im_above(&full(), pt(0.0, 2.0), 1.5).unwrap(), 1);
        // tau = i, eps = 0.9: cosets (0,1) and (1,0)
        assert_eq!(count_im_above(&full(), pt(0.0, 1.0), 0.9).unwrap(), 2);
        // eps = 0.01: within 15% of the leading term 1/(vol eps) = (3/pi)/eps
        let n = count_im_above(&full(), pt(0.0, 1.0), 0.01).unwrap() as f64;
        let lead = 3.0 / PI / 0.01;
        assert!((n / lead - 1.0).abs() < 0.15, "n={n} lead={lead}");
    }

    #[test]
    fn counting_asymptotic_shape() {
        // N(eps) * eps * vol -> 1 with |ratio - 1| <= C / log(1/eps)
        let tau = pt(0.0, 1.0);
        let vol = full().covolume;
        let mut worst_c: f64 = 0.0;
        for k in 4..=16 {
            let eps = 2.0f64.powi(-k);
            let n = count_im_above(&full(), tau, eps).unwrap() as f64;
            let ratio = n * eps * vol;
            let c = (ratio - 1.0).abs() * (1.0 / eps).ln();
            worst_c = worst_c.max(c);
        }
        // the constant must stay bounded (error shape O(1/log(1/eps)))
        assert!(worst_c < 3.0, "worst C = {worst_c}");
        // and the ratio itself approaches 1
        let eps = 2.0f64.powi(-16);
        let n = count_im_above(&full(), tau, eps).unwrap() as f64;
        assert!((n * eps * vol - 1.0).abs() < 0.07);
    }

    #[test]
    fn count_refuses_absurd_eps() {
        assert!(matches!(
            count_im_above(&full(), pt(0.0, 1.0), 1e-12),
            Err(Error::TruncationTooLarge(_))
        ));
    }

    #[test]
    fn ball_examples() {
        // z = tau = 2i, u_max = 0: identity only
        let ball = group_ball(&full(), pt(0.0, 2.0), pt(0.0, 2.0), 0.0).unwrap();
        assert_eq!(ball, vec![UnimodularMap::identity()]);

        // z = tau = i, u_max = 0.01: identity and S (both fix i)
        let ball = group_ball(&full(), pt(0.0, 1.0), pt(0.0, 1.0), 0.01).unwrap();
        assert_eq!(ball.len(), 2);
        assert!(ball.contains(&UnimodularMap::identity()));
        assert!(ball.contains(&UnimodularMap::new(0, -1, 1, 0).unwrap()));
    }

    #[test]
    fn ball_linear_growth() {
        // hyperbolic lattice count: N(u) ~ (4 pi / vol) u, so doubling u_max
        // should double the count within 25%
        let z = pt(0.0, 2.0);
        let tau = pt(0.0, 1.0);
        let n100 = group_ball(&full(), z, tau, 100.0).unwrap().len() as f64;
        let n200 = group_ball(&full(), z, tau, 200.0).unwrap().len() as f64;
        let n400 = group_ball(&full(), z, tau, 400.0).unwrap().len() as f64;
        assert!((n200 / n100 - 2.0).abs() < 0.5, "{n100} {n200}");
        assert!((n400 / n200 - 2.0).abs() < 0.5, "{n200} {n400}");
        // absolute scale vs (4 pi/vol) u = 12 u
        assert!((n400 / (12.0 * 400.0) - 1.0).abs() < 0.25);
    }

    #[test]
    fn ball_is_duplicate_free_and_complete() {
        let z = pt(0.3, 1.4);
        let tau = pt(-0.2, 0.9);
        let u_max = 30.0;
        let mut ball = group_ball(&full(), z, tau, u_max).unwrap();
        let n = ball.len();
        ball.sort_by_key(|m| (m.a, m.b, m.c, m.d));
        ball.dedup();
        assert_eq!(n, ball.len(), "duplicates in ball");
        // every element satisfies the ball condition
        for m in &ball {
            let u = u_invariant(z, m.apply(tau)).value();
            assert!(u <= u_max * (1.0 + 1e-12));
        }
        // brute-force check: every word T^p S T^q with small p, q that lands
        // in the ball is present
        let t = |n: i64| UnimodularMap::new(1, n, 0, 1).unwrap();
        let s = UnimodularMap::new(0, -1, 1, 0).unwrap();
        for p in -8..=8 {
            for q in -8..=8 {
                let g = t(p).mul(&s).mul(&t(q));
                let u = u_invariant(z, g.apply(tau)).value();
                if u <= u_max * (1.0 - 1e-9) {
                    assert!(ball.contains(&g), "missing {g:?} with u = {u}");
                }
            }
        }
    }

    #[test]
    fn ball_sum_matches_sequential() {
        let z = pt(0.1, 1.2);
        let tau = pt(0.4, 0.8);
        let ball = group_ball(&full(), z, tau, 200.0).unwrap();
        let seq: f64 = ball
            .iter()
            .map(|m| 1.0 / (1.0 + u_invariant(z, m.apply(tau)).value()))
            .sum();
        let (par, count) = ball_sum(&full(), z, tau, 200.0, |u, _| {
            crate::Complex::new(1.0 / (1.0 + u), 0.0)
        })
        .unwrap();
        assert_eq!(count as usize, ball.len());
        assert!((par.re - seq).abs() < 1e-9 * seq.abs());
    }

    #[test]
    fn stabilizers() {
        let g = full();
        assert_eq!(stabilizer_order(&g, pt(0.0, 1.0)), 2);
        let rho = pt(-0.5, 3.0f64.sqrt() / 2.0);
        assert_eq!(stabilizer_order(&g, rho), 3);
        assert_eq!(stabilizer_order(&g, pt(0.0, 2.0)), 1);
        // Gamma0(4) does not contain S, so i is unstabilized there
        let g4 = GroupSpec::gamma0(4).unwrap();
        assert_eq!(stabilizer_order(&g4, pt(0.0, 1.0)), 1);
    }

    #[test]
    fn orbit_max_im_values() {
        // fundamental-domain points: the orbit max is the point itself
        assert!((orbit_max_im(&full(), pt(0.0, 2.0)) - 2.0).abs() < 1e-14);
        assert!((orbit_max_im(&full(), pt(0.3, 1.5)) - 1.5).abs() < 1e-14);
        // tau = i/2 maps to i under S
        assert!((orbit_max_im(&full(), pt(0.0, 0.5)) - 2.0).abs() < 1e-12);
        // rho: max Im over orbit is sqrt(3)/2
        let rho = pt(-0.5, 3.0f64.sqrt() / 2.0);
        assert!((orbit_max_im(&full(), rho) - 3.0f64.sqrt() / 2.0).abs() < 1e-12);
        // level: Gamma0(2) orbit of i/2 does not reach i (S not in the group),
        // the best is Im = 0.5 via (2, +-1) -> |2 tau + 1|^2 = 2 -> hmm:
        // |c tau + d|^2 with tau = i/2, (c,d) = (2,-1): | i - 1|^2 = 2 -> Im = 0.25.
        let g2 = GroupSpec::gamma0(2).unwrap();
        assert!((orbit_max_im(&g2, pt(0.0, 0.5)) - 0.5).abs() < 1e-12);
    }
}
