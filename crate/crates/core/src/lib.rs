//! Local time at zero of one-dimensional lattice paths with arbitrary bounded
//! integer jumps. Exact counts come from a q-marked generating function solved
//! order by order, cross-checked by an altitude DP and brute-force enumeration;
//! a numeric boundary system evaluates the same functions inside the disc of
//! convergence; `limitlaw` and `experiments` compare large-n tables with their
//! limiting distributions.

pub mod algebra;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod experiments;
pub mod kernel_numeric;
pub mod kernel_series;
pub mod limitlaw;
pub mod stepset;
pub mod walk;
