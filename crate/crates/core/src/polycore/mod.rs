//! Polynomials over tagged bases, root finding and root-location
//! classification, and the scalar special functions used by the transforms.

mod poly;
mod roots;
mod special;

pub use poly::{basis_to_monomial, boundary_family, poly_eval, Basis, Poly};
pub(crate) use poly::{check_jacobi_params, jacobi_next};
pub use roots::{classify_roots, monic_backward_error, poly_roots, RootClass, RootReport};
pub use special::{gamma, ln_factorial, ln_gamma, ln_gamma_signed, pochhammer};
