//! Diophantine relations, polynomial systems, Pell sequences and θ₁.

mod pell;
mod poly;
mod relations;
mod sexpr;

pub use pell::{
    pell_seq, prime_from_theta1, prime_next_from_theta1, theta1_partial, PellPair, THETA1_CAP,
};
pub use poly::{combine_sum_of_squares, poly_eval, DiophSystem, Monomial, Polynomial};
pub use relations::{rel_divides, rel_gcd, rel_lcm};
pub use sexpr::{parse_polynomial, parse_system};
