//! Exact Reidemeister and Nielsen numbers for endomorphisms of free
//! nilpotent groups `N_{r,c}`, computed from the abelianized integer matrix,
//! plus enumeration of Reidemeister spectra.
//!
//! The pipeline is: Hall basis ([`hall`]) → bracket normal forms ([`lie`]) →
//! induced layer matrices and `det(1 - M_i)` ([`induced`]) → Reidemeister
//! numbers ([`reidemeister`]) → spectrum scans ([`spectrum`]).

pub mod cli;
pub mod error;
pub mod hall;
pub mod induced;
pub mod lie;
pub mod matrix;
pub mod poly;
pub mod reidemeister;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use hall::{build_hall_basis, witt_dimension, HallBasis, HallElement, HallKind, TieBreak};
pub use induced::{
    det_one_minus, induced_matrices, induced_matrix, layer_dets_structural, layer_dets_trace,
    LayerDeterminants, LayerMethod,
};
pub use lie::{FreeNilpotentLie, LieCombination};
pub use matrix::IntegerMatrix;
pub use poly::IntPolynomial;
pub use reidemeister::{
    reidemeister_number, Engine, MethodChoice, Mode, RValue, ReidemeisterReport,
};
