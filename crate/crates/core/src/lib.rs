//! Exact power-series automorphisms over finite Artinian rings of residue
//! characteristic 5, with machine checks of the universality of the
//! deformation ring of the order-5, conductor-2 automorphism
//! `t -> t / sqrt(t^2 + 1)`.

pub mod artin;
pub mod cli;
pub mod deformation;
pub mod error;
pub mod linalg;
pub mod nottingham;
pub mod series;
pub mod symbolic;
mod expr;

pub use error::{Error, Result};
