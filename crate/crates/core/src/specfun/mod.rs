//! Special functions needed by the automorphic kernels: Bessel I/J/K of real
//! order with order-derivatives, the exponential integral, the Gauss
//! hypergeometric function, polylogarithms and the Rogers dilogarithm,
//! Legendre Q, and the level-one modular q-series (eta, j, E2/E4/E6).

mod bessel;
mod expint;
mod gamma;
mod hyp2f1;
mod legendre;
mod modular;
mod polylog;
mod zeta;

pub use bessel::{
    bessel_dnu_central, bessel_i, bessel_j, bessel_k, dbessel_i_order_at_half,
    dbessel_k_order_at_half, BesselKind,
};
pub use expint::{expint_e1, expint_e1_scaled, expint_ei};
pub use gamma::{digamma, gamma, ln_gamma};
pub use hyp2f1::hyp2f1;
pub use legendre::legendre_q;
pub use modular::{
    dedekind_eta, eisenstein_qseries, j_invariant, theta_eisenstein, theta_j, QSeries,
};
pub use polylog::{dilog, polylog, rogers_l, rogers_l_deriv, rogers_l_deriv_neg};
pub use zeta::{zeta, zeta_deriv};
