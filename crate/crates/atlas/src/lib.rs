//! Exact computations around principal-series Bernstein components of split
//! reductive p-adic groups, carried out on the complex dual side: root data
//! and Weyl groups, finite torus points, pseudo-Levi centralizers, unipotent
//! classes, Springer correspondences and the parameter sets built from them.

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod config;
pub mod corpus;
pub mod fingrp;
pub mod lattice;
pub mod packets;
pub mod params;
pub mod rootdata;
pub mod springer;
pub mod subsystem;
pub mod torus;
pub mod unipotent;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AtlasError {
    #[error("unsupported type: {0}")]
    UnsupportedType(String),
    #[error("lattice error: {0}")]
    Lattice(String),
    #[error("Weyl group order exceeds the configured bound {0}")]
    WeylTooLarge(usize),
    #[error("group order {0} exceeds the configured bound {1}")]
    GroupTooLarge(usize, usize),
    #[error("action is not a homomorphism into automorphisms: {0}")]
    BadAction(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("grid of {0} points exceeds the cap {1}")]
    GridTooLarge(usize, usize),
    #[error("point is not on the component")]
    NotOnComponent,
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, AtlasError>;

pub use lattice::Q;
