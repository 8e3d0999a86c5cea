//! Exact arithmetic: rationals, sparse multivariate polynomials, rational
//! functions, polynomial matrices and their determinants.

pub mod assignment;
pub mod factored;
pub mod gcd;
pub mod matrix;
pub mod nullspace;
pub mod poly;
pub mod ratfun;
pub mod univariate;

pub use assignment::{max_weight_assignment, minor_degree_bound, permanent_degree_bound, DegreeBound};
pub use factored::{coprime_base, Factored};
pub use gcd::{poly_gcd, poly_lcm};
pub use matrix::{det_at_point, det_rational, rank_rational, PolyMatrix};
pub use nullspace::{nullspace_poly, solve_nullspace, solve_particular};
pub use num_rational::BigRational;
pub use poly::{q_int, Monomial, MultiPoly, Vars};
pub use ratfun::RationalFunction;
pub use univariate::UniPoly;
