//! Numerical kernels: Bessel functions of the first kind and composite
//! Gauss–Legendre quadrature for oscillatory integrands.

pub mod bessel;
pub mod quadrature;

pub use bessel::{bessel_jn, bessel_jn_sequence, bessel_jn_signed, truncation_order};
pub use quadrature::{
    composite_gauss_legendre, oscillatory_quadrature, CompensatedSum, GaussLegendre,
    QuadratureConfig, QuadratureResult,
};
