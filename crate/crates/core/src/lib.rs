//! Bures-Wasserstein geometry of determinant-normalized Kronecker SPD matrices.
//!
//! The model `𝒦ₙ = {V ⊗ U : U, V ∈ 𝕊₊₊ⁿ, det U = 1}` sits inside the cone of
//! `n² × n²` SPD matrices. This crate provides
//!
//! * [`spd`]: symmetric and SPD matrices, square roots, Kronecker products and
//!   partial traces;
//! * [`bures`]: Bures distance, transport maps and geodesics on the full cone;
//! * [`kron`]: points of `𝒦ₙ`, the factor-size distance reduction, factor
//!   leaves and their geodesics;
//! * [`closure`]: diagnostics for whether an ambient geodesic stays in `𝒦ₙ`
//!   (square-root profiles, departure moduli, partial-trace residual of the
//!   whitened initial velocity, rigidity classification);
//! * [`barycenter`]: exact barycenters on a fixed commuting slice (Perron
//!   singular vectors) and on factor leaves, with an independent log-coordinate
//!   solver for cross-checking.

pub mod barycenter;
pub mod bures;
pub mod closure;
pub mod error;
pub mod kron;
pub mod spd;

pub use error::{Error, Result};
pub use kron::{FactorLeaf, KroneckerPoint, LeafKind};
pub use spd::{EigenDecomposition, SpdMatrix, SymmetricMatrix};
