//! Upper half-plane points, the Moebius action, the point-pair invariant
//! u(z, tau) = |z - tau|^2 / (4 z_2 tau_2) and the hyperbolic distance.

use crate::modgroup::UnimodularMap;
use crate::{Complex, Error, Result};

const MIN_IM: f64 = 1e-12;

/// A point tau = tau_1 + i tau_2 of the upper half-plane, tau_2 > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    re: f64,
    im: f64,
}

impl HalfPlanePoint {
    /// Rejects points with im <= 1e-12 (cancellation guard in u) and
    /// non-finite components.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::domain(format!("non-finite half-plane point ({re}, {im})")));
        }
        if im <= MIN_IM {
            return Err(Error::domain(format!(
                "Im = {im} below the {MIN_IM} floor for half-plane points"
            )));
        }
        Ok(HalfPlanePoint { re, im })
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(&self) -> Complex {
        Complex::new(self.re, self.im)
    }

    pub fn from_complex(z: Complex) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

/// The invariant u(z, tau) >= 0; zero exactly at coincident points.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PointPairArgument(pub f64);

impl PointPairArgument {
    pub fn value(&self) -> f64 {
        self.0
    }

    /// cosh of the hyperbolic distance: cosh d = 1 + 2u.
    pub fn cosh_distance(&self) -> f64 {
        1.0 + 2.0 * self.0
    }
}

/// Fractional linear action (a z + b)/(c z + d). The image has
/// Im = z_2 / |cz+d|^2 > 0, so this cannot leave the half-plane.
pub fn moebius_apply(g: &UnimodularMap, z: HalfPlanePoint) -> HalfPlanePoint {
    let (a, b, c, d) = (g.a as f64, g.b as f64, g.c as f64, g.d as f64);
    let den_re = c * z.re + d;
    let den_im = c * z.im;
    let den2 = den_re * den_re + den_im * den_im;
    let num_re = a * z.re + b;
    let num_im = a * z.im;
    // (num * conj(den)) / |den|^2
    let re = (num_re * den_re + num_im * den_im) / den2;
    let im = (num_im * den_re - num_re * den_im) / den2;
    HalfPlanePoint { re, im }
}

/// u(z, tau) = |z - tau|^2 / (4 z_2 tau_2); symmetric, Moebius-invariant.
pub fn u_invariant(z: HalfPlanePoint, tau: HalfPlanePoint) -> PointPairArgument {
    let dr = z.re - tau.re;
    let di = z.im - tau.im;
    PointPairArgument((dr * dr + di * di) / (4.0 * z.im * tau.im))
}

/// Holomorphic derivative of u in z:
/// du/dz = i (conj(z) - conj(tau)) (conj(z) - tau) / (8 z_2^2 tau_2).
pub fn du_dz(z: HalfPlanePoint, tau: HalfPlanePoint) -> Complex {
    let zc = Complex::new(z.re, -z.im);
    let t = tau.to_complex();
    let tc = t.conj();
    Complex::new(0.0, 1.0) * (zc - tc) * (zc - t) / (8.0 * z.im * z.im * tau.im)
}

/// Hyperbolic distance, via the independent arctanh route
/// d = 2 artanh(|z - tau| / |z - conj(tau)|).
pub fn hyperbolic_distance(z: HalfPlanePoint, tau: HalfPlanePoint) -> f64 {
    let zt = z.to_complex();
    let t = tau.to_complex();
    let r = (zt - t).norm() / (zt - t.conj()).norm();
    2.0 * r.atanh()
}
