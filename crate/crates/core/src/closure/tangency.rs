//! Endpoint tangency: the partial-trace residual of the whitened initial
//! velocity, and the rigidity classification it certifies.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bures::transport_map;
use crate::error::{Error, Result};
use crate::kron::KroneckerPoint;
use crate::spd::{kron, partial_trace_1, partial_trace_2, SpdMatrix, SymmetricMatrix};

/// Default absolute tolerance on `‖Π(Z₀)‖_F` and relative tolerance of the
/// direct leaf checks.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Default tolerance of [`pattern_2x2_check`], relative to `max(1, ‖Z‖_F)`.
pub const PATTERN_TOL: f64 = 1e-10;

/// `Π(Z) = Z − (1/n) I⊗tr₁Z − (1/n) tr₂Z⊗I + (tr Z/n²) I`.
pub fn pi_residual(z: &SymmetricMatrix, n: usize) -> Result<SymmetricMatrix> {
    let t1 = partial_trace_1(z, n)?;
    let t2 = partial_trace_2(z, n)?;
    let id = DMatrix::<f64>::identity(n, n);
    let nf = n as f64;
    let mut r = z.as_matrix() - kron(&id, t1.as_matrix()) / nf - kron(t2.as_matrix(), &id) / nf;
    let shift = z.trace() / (nf * nf);
    for i in 0..n * n {
        r[(i, i)] += shift;
    }
    Ok(SymmetricMatrix::symmetrized(r))
}

/// Factor transports `S_V = T_{V₀→V₁}`, `S_U = T_{U₀→U₁}` and their whitened
/// forms `P = V₀^{-1/2} S_V V₀^{1/2}`, `Q = U₀^{-1/2} S_U U₀^{1/2}`.
#[derive(Clone, Debug)]
pub struct FactorTransports {
    pub s_u: SpdMatrix,
    pub s_v: SpdMatrix,
    pub p_mat: DMatrix<f64>,
    pub q_mat: DMatrix<f64>,
}

impl FactorTransports {
    /// `S_V ⊗ S_U`, the ambient transport between the embeddings.
    pub fn ambient(&self) -> DMatrix<f64> {
        kron(self.s_v.as_matrix(), self.s_u.as_matrix())
    }
}

pub fn factor_transports(p0: &KroneckerPoint, p1: &KroneckerPoint) -> Result<FactorTransports> {
    if p0.n() != p1.n() {
        return Err(Error::DimensionMismatch {
            expected: p0.n(),
            got: p1.n(),
        });
    }
    let s_u = transport_map(p0.u(), p1.u())?.matrix().clone();
    let s_v = transport_map(p0.v(), p1.v())?.matrix().clone();
    let whiten = |s: &SpdMatrix, base: &SpdMatrix| base.inv_sqrt().as_matrix() * s.as_matrix() * base.sqrt().as_matrix();
    Ok(FactorTransports {
        p_mat: whiten(&s_v, p0.v()),
        q_mat: whiten(&s_u, p0.u()),
        s_u,
        s_v,
    })
}

/// `Z₀ = P⊗Q + Pᵀ⊗Qᵀ − 2I`.
pub fn whitened_initial_velocity(ft: &FactorTransports) -> SymmetricMatrix {
    let pq = kron(&ft.p_mat, &ft.q_mat);
    let n2 = pq.nrows();
    let z = &pq + pq.transpose() - DMatrix::identity(n2, n2) * 2.0;
    SymmetricMatrix::symmetrized(z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TangencyVerdict {
    CommonRowLeaf,
    CommonColLeaf,
    Departs,
}

impl TangencyVerdict {
    pub fn is_leaf(self) -> bool {
        !matches!(self, TangencyVerdict::Departs)
    }
}

#[derive(Clone, Debug)]
pub struct TangencyReport {
    pub z0: SymmetricMatrix,
    pub residual: SymmetricMatrix,
    pub residual_norm: f64,
    pub verdict: TangencyVerdict,
}

/// Direct leaf checks on the factors, `U₁ = U₀` first, then `V₁ ∝ V₀`.
pub fn direct_leaf_verdict(p0: &KroneckerPoint, p1: &KroneckerPoint, tol: f64) -> TangencyVerdict {
    let (u0, u1) = (p0.u().as_matrix(), p1.u().as_matrix());
    if (u1 - u0).norm() <= tol * u0.norm() {
        return TangencyVerdict::CommonRowLeaf;
    }
    let (v0, v1) = (p0.v().as_matrix(), p1.v().as_matrix());
    let tau = v1.dot(v0) / v0.dot(v0);
    if tau > 0.0 && (v1 - v0 * tau).norm() <= tol * v1.norm() {
        return TangencyVerdict::CommonColLeaf;
    }
    TangencyVerdict::Departs
}

/// Classifies a pair by the direct leaf checks and confirms the verdict with
/// the residual `‖Π(Z₀)‖_F`; a disagreement is returned as
/// [`Error::InconsistentVerdict`].
pub fn endpoint_rigidity_classify(p0: &KroneckerPoint, p1: &KroneckerPoint, residual_tol: f64) -> Result<TangencyReport> {
    let ft = factor_transports(p0, p1)?;
    let z0 = whitened_initial_velocity(&ft);
    let residual = pi_residual(&z0, p0.n())?;
    let residual_norm = residual.frobenius_norm();
    let verdict = direct_leaf_verdict(p0, p1, residual_tol);
    if verdict.is_leaf() != (residual_norm <= residual_tol) {
        return Err(Error::InconsistentVerdict {
            residual_norm,
            leaf: verdict.is_leaf(),
            tolerance: residual_tol,
        });
    }
    Ok(TangencyReport {
        z0,
        residual,
        residual_norm,
        verdict,
    })
}

/// One of the five entry relations characterizing `Π(Z) = 0` for `n = 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Z14Zero,
    Z23Zero,
    Z12EqZ34,
    Z13EqZ24,
    DiagonalDifference,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Z14Zero => "z14=0",
            Relation::Z23Zero => "z23=0",
            Relation::Z12EqZ34 => "z12=z34",
            Relation::Z13EqZ24 => "z13=z24",
            Relation::DiagonalDifference => "z11-z22=z33-z44",
        })
    }
}

/// Checks the 2×2 tangency pattern entrywise. Returns whether every relation
/// holds, and the violated ones.
pub fn pattern_2x2_check(z0: &SymmetricMatrix) -> Result<(bool, Vec<Relation>)> {
    pattern_2x2_check_tol(z0, PATTERN_TOL)
}

pub fn pattern_2x2_check_tol(z0: &SymmetricMatrix, tol: f64) -> Result<(bool, Vec<Relation>)> {
    if z0.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            got: z0.dim(),
        });
    }
    let z = |i: usize, j: usize| z0[(i - 1, j - 1)];
    let bound = tol * z0.frobenius_norm().max(1.0);
    let checks = [
        (Relation::Z14Zero, z(1, 4)),
        (Relation::Z23Zero, z(2, 3)),
        (Relation::Z12EqZ34, z(1, 2) - z(3, 4)),
        (Relation::Z13EqZ24, z(1, 3) - z(2, 4)),
        (Relation::DiagonalDifference, (z(1, 1) - z(2, 2)) - (z(3, 3) - z(4, 4))),
    ];
    let violated: Vec<Relation> = checks.iter().filter(|(_, v)| v.abs() > bound).map(|(r, _)| *r).collect();
    Ok((violated.is_empty(), violated))
}
