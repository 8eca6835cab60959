//! Mission planning for a fleet of servicing spacecraft repairing satellites
//! in geosynchronous orbit.
//!
//! Transfers combine a plane change with a multi-revolution phasing ellipse
//! ([`astro::rendezvous_mixed`]); routes are searched with a genetic algorithm
//! that hands its best individuals to a large neighborhood search
//! ([`search::solve_lns_aga`]).

// `!(x > 0.0)` style guards deliberately reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod astro;
pub mod cli;
pub mod planning;
pub mod scenarios;
pub mod search;
