//! Contour and half-line integral representations.

mod integral;
pub mod quadrature;

pub use integral::{
    beta_moment, eval_integral, x_from_chi, x_from_upsilon, x_from_xi_cubic, x_from_xi_quartic,
    x_from_xi_sextic, BetaKind, Geometry, IntegralFamily, IntegralSpec,
};
