//! The offset linear canonical transform.
//!
//! For `b != 0` the transform is the integral
//!
//! ```text
//! O(xi) = int f(t) K(t, xi) dt,
//! K(t, xi) = exp(j[(a/2b) t^2 - t(xi - tau)/b - xi(d tau - b eta)/b + (d/2b)(xi^2 + tau^2)]) / sqrt(j 2 pi b)
//! ```
//!
//! and for `b = 0` it degenerates to a scaled, chirped copy of the input:
//! `O(xi) = sqrt(d) exp(j[c d (xi - tau)^2 / 2 + xi eta]) f(d (xi - tau))`.

mod czt;
mod params;
mod transform;

pub use czt::chirp_z;
pub use params::{frft_params, ft_params, lct_params, OlctParams, DETERMINANT_TOLERANCE};
pub use transform::{
    interpolate_cubic, kernel, kernel_prefactor, olct_forward, olct_forward_b0, olct_inverse,
    parseval_gap, TransformPath,
};
