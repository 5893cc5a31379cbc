//! Legendre function of the second kind Q_nu(w) for w > 1 and real degree
//! nu > -1, through the hypergeometric representation
//! `Q_nu(w) = sqrt(pi) Gamma(nu+1) / (Gamma(nu+3/2) (2w)^{nu+1})
//!            * 2F1((nu+2)/2, (nu+1)/2; nu+3/2; 1/w^2)`.
//! The 2F1 parameters are balanced (c - a - b = 0), so the argument -> 1
//! regime as w -> 1+ routes through the logarithmic transformation.

use super::gamma::gamma;
use super::hyp2f1::hyp2f1;
use crate::{Error, Result};
use std::f64::consts::PI;

pub fn legendre_q(nu: f64, w: f64) -> Result<f64> {
    if w <= 1.0 {
        return Err(Error::domain(format!("legendre_q requires w > 1, got {w}")));
    }
    if nu <= -1.0 {
        return Err(Error::domain(format!("legendre_q requires nu > -1, got {nu}")));
    }
    let f = hyp2f1((nu + 2.0) / 2.0, (nu + 1.0) / 2.0, nu + 1.5, 1.0 / (w * w))?;
    Ok(PI.sqrt() * gamma(nu + 1.0) / (gamma(nu + 1.5) * (2.0 * w).powf(nu + 1.0)) * f)
}
