//! Exact arithmetic foundation: finite-field towers, polynomials, rational
//! functions, characteristic-p hyperderivatives, interpolation solvers, and
//! univariate factorization.

pub mod factor;
pub mod field;
pub mod hyper;
pub mod interp;
pub mod poly;
pub mod ratfun;
pub mod tower;

pub use factor::{factor_poly, Factorization};
pub use field::{FFElem, FiniteField};
pub use hyper::{binom_mod_p, hyper_expand, hyperderivative, MultiIndex};
pub use interp::{
    lagrange_unit_interpolation, root_coefficients, root_coefficients_periodic, ConstSpace,
    LinearSpace,
};
pub use poly::{format_poly, is_irreducible, parse_poly, Poly};
pub use ratfun::RatFun;
pub use tower::FieldTower;
