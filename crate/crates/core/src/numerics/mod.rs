//! Log-domain complex arithmetic, special functions, and the quadrature
//! engines shared by every other module.

pub mod logc;
pub mod quad;
pub mod special;

pub use logc::{logc_sum, LogAccumulator, LogComplex};
pub use quad::{jacobi_rule, quad_jacobi, quad_jacobi_log, quad_semiinfinite, QuadratureResult};
pub use special::{hyp0f1, ln_gamma, sphere_area};
