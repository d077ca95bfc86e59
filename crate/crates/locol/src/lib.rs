//! Linearly ordered (LO) colourings of LO 2-colourable 3-uniform
//! hypergraphs with O(log n) colours.
//!
//! An LO colouring gives every hyperedge a unique maximum colour. For a
//! 3-uniform hypergraph promised to admit an LO 2-colouring, this crate
//! finds an LO colouring with at most log2(n) colours by solving the
//! incidence system `Av = 1^m` over GF(2) and derandomizing with the
//! method of conditional expectations ([`mod2`]), or alternatively by
//! solving the homogeneous system over the exact rationals and bucketing
//! an unbalanced solution dyadically ([`rational`]). Instance
//! generators, exponential-time oracles and a verifier live in
//! [`instances`] and [`hypergraph`].

pub mod cli;
pub mod error;
pub mod gf2;
pub mod hypergraph;
pub mod instances;
pub mod mod2;
pub mod rational;
pub mod simplex;

pub use error::{ParseError, SolveError};
pub use hypergraph::{
    parse_colouring, parse_hypergraph, serialize_colouring, serialize_hypergraph,
    verify_lo_colouring, Colouring, Edge, Hypergraph, VerifyReport, Violation,
};
pub use mod2::{
    brute_force_lo2, inner_step, preprocess, solve_mod2, solve_mod2_edges, PreStatus,
    PreprocessResult, SolveReport, DEFAULT_BRUTE_THRESHOLD,
};
pub use rational::{
    find_all_vi, find_vi, nullspace_q, sample_u, sign_two_colouring, solve_rational,
    unbalanced_colouring, RationalSolveReport,
};
pub use instances::{
    brute_force_min_lo, enumerate_lo2, gen_clique_gadget, gen_planted, PlantedInstance,
};
