//! The determinant-normalized Kronecker model `𝒦ₙ = {V ⊗ U : det U = 1}`.
//!
//! Points are stored by their factors. Distances between points reduce to two
//! `n × n` spectral problems, and the two families of factor leaves (fixed
//! normalized `U`, or `V` fixed up to a positive scalar) carry their own
//! geodesics, which coincide with the ambient Bures geodesics.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bures::{bures_distance_sq, clamp_sq, gaussian_w2_sq, GeodesicCurve};
use crate::error::{Error, Result};
use crate::spd::{
    gauge_normalize, kron, matrix_from_rows, partial_trace_1, partial_trace_2, symmetric_eigenvalues,
    SpdMatrix, SymmetricMatrix,
};

/// Relative reconstruction error above which a matrix is rejected by
/// [`recover_factors`].
pub const MEMBERSHIP_TOL: f64 = 1e-8;

/// Per-dimension bound on `|log det U|` for a normalized `U` factor.
pub const GAUGE_TOL: f64 = 1e-10;

/// Relative tolerance of [`leaf_membership`].
pub const LEAF_TOL: f64 = 1e-10;

/// A point `V ⊗ U` of the normalized model, `det U = 1`.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "KroneckerPointJson", into = "KroneckerPointJson")]
pub struct KroneckerPoint {
    u: SpdMatrix,
    v: SpdMatrix,
}

fn check_gauge(u: &SpdMatrix) -> Result<()> {
    let log_det = u.log_det();
    if log_det.abs() > GAUGE_TOL * u.dim() as f64 {
        return Err(Error::GaugeViolation { log_det });
    }
    Ok(())
}

impl KroneckerPoint {
    /// Requires `det U = 1` (see [`GAUGE_TOL`]).
    pub fn new(u: SpdMatrix, v: SpdMatrix) -> Result<Self> {
        if u.dim() != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: u.dim(),
                got: v.dim(),
            });
        }
        check_gauge(&u)?;
        Ok(Self { u, v })
    }

    /// Moves any scalar out of `U` into `V` first.
    pub fn from_factors(u: &SpdMatrix, v: &SpdMatrix) -> Result<Self> {
        let (u, v) = gauge_normalize(u, v)?;
        Self::new(u, v)
    }

    pub fn n(&self) -> usize {
        self.u.dim()
    }

    pub fn u(&self) -> &SpdMatrix {
        &self.u
    }

    pub fn v(&self) -> &SpdMatrix {
        &self.v
    }

    /// `V ⊗ U` as an `n² × n²` SPD matrix.
    pub fn embed(&self) -> Result<SpdMatrix> {
        embed(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("point serializes")
    }

    /// Parses `{"n", "u", "v"}`; the factors are gauge-normalized on load.
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

impl fmt::Debug for KroneckerPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KroneckerPoint")
            .field("u", &self.u)
            .field("v", &self.v)
            .finish()
    }
}

#[derive(Serialize, Deserialize)]
struct KroneckerPointJson {
    n: usize,
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

impl TryFrom<KroneckerPointJson> for KroneckerPoint {
    type Error = Error;

    fn try_from(j: KroneckerPointJson) -> Result<Self> {
        for m in [&j.u, &j.v] {
            if m.len() != j.n {
                return Err(Error::DimensionMismatch {
                    expected: j.n,
                    got: m.len(),
                });
            }
        }
        let u = SpdMatrix::from_rows(&j.u)?;
        let v = SpdMatrix::from_rows(&j.v)?;
        Self::from_factors(&u, &v)
    }
}

impl From<KroneckerPoint> for KroneckerPointJson {
    fn from(p: KroneckerPoint) -> Self {
        Self {
            n: p.n(),
            u: p.u.to_rows(),
            v: p.v.to_rows(),
        }
    }
}

fn same_n(p0: &KroneckerPoint, p1: &KroneckerPoint) -> Result<()> {
    if p0.n() != p1.n() {
        return Err(Error::DimensionMismatch {
            expected: p0.n(),
            got: p1.n(),
        });
    }
    Ok(())
}

/// `Φ(U, V) = V ⊗ U`.
pub fn embed(p: &KroneckerPoint) -> Result<SpdMatrix> {
    check_gauge(&p.u)?;
    SpdMatrix::from_matrix(kron(p.v.as_matrix(), p.u.as_matrix()))
}

/// Integer `n` with `n² = dim`.
pub fn block_size(dim: usize) -> Result<usize> {
    let n = (dim as f64).sqrt().round() as usize;
    if n == 0 || n * n != dim {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            got: dim,
        });
    }
    Ok(n)
}

/// Inverts [`embed`] through the partial traces:
/// `U = det(tr₁K)^{-1/n} tr₁K`, `V = tr₂K / tr U`.
pub fn recover_factors(k: &SpdMatrix) -> Result<KroneckerPoint> {
    let n = block_size(k.dim())?;
    let t1 = SpdMatrix::new(partial_trace_1(k.as_symmetric(), n)?)?;
    let t2 = partial_trace_2(k.as_symmetric(), n)?;
    let u = t1.scale((-t1.log_det() / n as f64).exp())?;
    let v = SpdMatrix::new(t2.scale(1.0 / u.trace()))?;
    let rebuilt = kron(v.as_matrix(), u.as_matrix());
    let relative = (rebuilt - k.as_matrix()).norm() / k.frobenius_norm();
    if relative > MEMBERSHIP_TOL {
        return Err(Error::NotInModel { relative });
    }
    KroneckerPoint::new(u, v)
}

/// Eigenvalues `α` of `V₀^{1/2} V₁ V₀^{1/2}` and `β` of `U₀^{1/2} U₁ U₀^{1/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairwiseSpectrum {
    pub alpha: DVector<f64>,
    pub beta: DVector<f64>,
}

impl PairwiseSpectrum {
    /// `Σ_{p,q} √(α_p β_q) = tr(A^{1/2}) tr(B^{1/2})`.
    pub fn fidelity(&self) -> f64 {
        let sa: f64 = self.alpha.iter().map(|x| x.max(0.0).sqrt()).sum();
        let sb: f64 = self.beta.iter().map(|x| x.max(0.0).sqrt()).sum();
        sa * sb
    }
}

fn congruence_spectrum(a: &SpdMatrix, b: &SpdMatrix) -> DVector<f64> {
    let s = a.sqrt();
    let m = SymmetricMatrix::symmetrized(s.as_matrix() * b.as_matrix() * s.as_matrix());
    symmetric_eigenvalues(m.as_matrix())
}

/// Squared Bures distance between `V₀ ⊗ U₀` and `V₁ ⊗ U₁` from two `n × n`
/// eigenvalue problems.
pub fn pairwise_bures_sq_reduced(p0: &KroneckerPoint, p1: &KroneckerPoint) -> Result<(f64, PairwiseSpectrum)> {
    same_n(p0, p1)?;
    let spectrum = PairwiseSpectrum {
        alpha: congruence_spectrum(&p0.v, &p1.v),
        beta: congruence_spectrum(&p0.u, &p1.u),
    };
    let scale = p0.u.trace() * p0.v.trace() + p1.u.trace() * p1.v.trace();
    let d = clamp_sq(scale - 2.0 * spectrum.fidelity(), scale)?;
    Ok((d, spectrum))
}

/// Matrix-normal law `MN(M, U, V)`: `vec X ~ N(vec M, V ⊗ U)`.
#[derive(Clone, Debug)]
pub struct MatrixNormalLaw {
    mean: DMatrix<f64>,
    point: KroneckerPoint,
}

impl MatrixNormalLaw {
    pub fn new(mean: DMatrix<f64>, point: KroneckerPoint) -> Result<Self> {
        let n = point.n();
        if mean.nrows() != n || mean.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: if mean.nrows() != n { mean.nrows() } else { mean.ncols() },
            });
        }
        Ok(Self { mean, point })
    }

    pub fn mean(&self) -> &DMatrix<f64> {
        &self.mean
    }

    pub fn point(&self) -> &KroneckerPoint {
        &self.point
    }

    /// Column-stacked `vec M`.
    pub fn vectorized_mean(&self) -> DVector<f64> {
        DVector::from_column_slice(self.mean.as_slice())
    }

    /// The law `N(vec M, V ⊗ U)` of `vec X`.
    pub fn vectorized(&self) -> Result<(DVector<f64>, SpdMatrix)> {
        Ok((self.vectorized_mean(), self.point.embed()?))
    }
}

/// `‖M₀ − M₁‖_F² + d_B²(V₀ ⊗ U₀, V₁ ⊗ U₁)`.
pub fn matrix_normal_w2_sq(l0: &MatrixNormalLaw, l1: &MatrixNormalLaw) -> Result<f64> {
    same_n(&l0.point, &l1.point)?;
    let (d, _) = pairwise_bures_sq_reduced(&l0.point, &l1.point)?;
    Ok((&l0.mean - &l1.mean).norm_squared() + d)
}

/// The same quantity through the ambient Gaussian formula on `n²` dimensions.
pub fn matrix_normal_w2_sq_ambient(l0: &MatrixNormalLaw, l1: &MatrixNormalLaw) -> Result<f64> {
    let (m0, k0) = l0.vectorized()?;
    let (m1, k1) = l1.vectorized()?;
    gaussian_w2_sq(&m0, &k0, &m1, &k1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LeafKind {
    /// `𝓕(U★) = {V ⊗ U★}`: the normalized `U` factor is fixed.
    Row,
    /// `𝓖(V★) = {α V★ ⊗ U}`: `V` is fixed up to a positive scalar.
    Col,
}

impl LeafKind {
    pub fn name(self) -> &'static str {
        match self {
            LeafKind::Row => "row",
            LeafKind::Col => "col",
        }
    }
}

/// A factor leaf with its anchor (`U★` for row leaves, `V★` for column leaves).
#[derive(Clone, Debug)]
pub struct FactorLeaf {
    kind: LeafKind,
    anchor: SpdMatrix,
}

impl FactorLeaf {
    pub fn row(u_star: SpdMatrix) -> Result<Self> {
        check_gauge(&u_star)?;
        Ok(Self {
            kind: LeafKind::Row,
            anchor: u_star,
        })
    }

    pub fn col(v_star: SpdMatrix) -> Self {
        Self {
            kind: LeafKind::Col,
            anchor: v_star,
        }
    }

    /// The leaf of the given kind through `p`.
    pub fn through(kind: LeafKind, p: &KroneckerPoint) -> Self {
        match kind {
            LeafKind::Row => Self {
                kind,
                anchor: p.u.clone(),
            },
            LeafKind::Col => Self::col(p.v.clone()),
        }
    }

    pub fn kind(&self) -> LeafKind {
        self.kind
    }

    pub fn anchor(&self) -> &SpdMatrix {
        &self.anchor
    }

    /// Scalar `τ = tr(V V★) / tr(V★ V★)` of a column-leaf point.
    pub fn col_scale(&self, v: &SpdMatrix) -> f64 {
        let a = self.anchor.as_matrix();
        v.as_matrix().dot(a) / a.dot(a)
    }

    fn require(&self, p: &KroneckerPoint) -> Result<()> {
        if !leaf_membership(self, p) {
            return Err(Error::NotOnLeaf { leaf: self.kind.name() });
        }
        Ok(())
    }
}

/// Membership of `p` in the leaf, at relative tolerance [`LEAF_TOL`].
pub fn leaf_membership(leaf: &FactorLeaf, p: &KroneckerPoint) -> bool {
    if leaf.anchor.dim() != p.n() {
        return false;
    }
    let a = leaf.anchor.as_matrix();
    match leaf.kind {
        LeafKind::Row => (p.u.as_matrix() - a).norm() <= LEAF_TOL * a.norm(),
        LeafKind::Col => {
            let tau = leaf.col_scale(&p.v);
            tau > 0.0 && (p.v.as_matrix() / tau - a).norm() <= LEAF_TOL * a.norm()
        }
    }
}

/// Geodesic between two points of a common leaf, with the factor transport
/// precomputed.
#[derive(Clone, Debug)]
pub struct LeafGeodesic {
    leaf: FactorLeaf,
    factor_curve: GeodesicCurve,
}

impl LeafGeodesic {
    pub fn new(leaf: &FactorLeaf, p0: &KroneckerPoint, p1: &KroneckerPoint) -> Result<Self> {
        same_n(p0, p1)?;
        leaf.require(p0)?;
        leaf.require(p1)?;
        let factor_curve = match leaf.kind {
            LeafKind::Row => GeodesicCurve::new(p0.v.clone(), p1.v.clone())?,
            LeafKind::Col => {
                let m0 = p0.u.scale(leaf.col_scale(&p0.v))?;
                let m1 = p1.u.scale(leaf.col_scale(&p1.v))?;
                GeodesicCurve::new(m0, m1)?
            }
        };
        Ok(Self {
            leaf: leaf.clone(),
            factor_curve,
        })
    }

    /// The factor-level Bures geodesic (`V_t` for row leaves, `M_t = α_t U_t`
    /// for column leaves).
    pub fn factor_curve(&self) -> &GeodesicCurve {
        &self.factor_curve
    }

    pub fn at(&self, t: f64) -> Result<KroneckerPoint> {
        let f = self.factor_curve.evaluate(t)?;
        match self.leaf.kind {
            LeafKind::Row => KroneckerPoint::new(self.leaf.anchor.clone(), f),
            LeafKind::Col => {
                let (u, v) = gauge_normalize(&f, &self.leaf.anchor)?;
                KroneckerPoint::new(u, v)
            }
        }
    }
}

pub fn leaf_geodesic(leaf: &FactorLeaf, p0: &KroneckerPoint, p1: &KroneckerPoint, t: f64) -> Result<KroneckerPoint> {
    LeafGeodesic::new(leaf, p0, p1)?.at(t)
}

/// Squared distance on a leaf through its homothety with `(𝕊₊₊ⁿ, d_B)`:
/// `tr(U★) d_B²(V₀, V₁)` on row leaves, `tr(V★) d_B²(α₀U₀, α₁U₁)` on column
/// leaves.
pub fn homothety_distance(leaf: &FactorLeaf, p0: &KroneckerPoint, p1: &KroneckerPoint) -> Result<f64> {
    same_n(p0, p1)?;
    leaf.require(p0)?;
    leaf.require(p1)?;
    match leaf.kind {
        LeafKind::Row => Ok(leaf.anchor.trace() * bures_distance_sq(&p0.v, &p1.v)?),
        LeafKind::Col => {
            let m0 = p0.u.scale(leaf.col_scale(&p0.v))?;
            let m1 = p1.u.scale(leaf.col_scale(&p1.v))?;
            Ok(leaf.anchor.trace() * bures_distance_sq(&m0, &m1)?)
        }
    }
}

/// Parses a square matrix from nested rows.
pub fn spd_from_rows(rows: &[Vec<f64>]) -> Result<SpdMatrix> {
    SpdMatrix::from_matrix(matrix_from_rows(rows, rows.len())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bures::bures_distance_sq;
    use crate::spd::rel_frobenius;

    fn diag(d: &[f64]) -> SpdMatrix {
        SpdMatrix::from_diagonal(d).unwrap()
    }

    fn spd(n: usize, seed: u64) -> SpdMatrix {
        let mut s = seed.wrapping_add(0x2545F4914F6CDD1D);
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let g = DMatrix::from_fn(n, n, |_, _| next());
        SpdMatrix::from_matrix(&g * g.transpose() + DMatrix::identity(n, n) * 0.1).unwrap()
    }

    fn point(n: usize, seed: u64) -> KroneckerPoint {
        KroneckerPoint::from_factors(&spd(n, seed), &spd(n, seed + 1000)).unwrap()
    }

    #[test]
    fn gauge_enforced() {
        assert!(matches!(
            KroneckerPoint::new(diag(&[2.0, 1.0]), diag(&[1.0, 1.0])),
            Err(Error::GaugeViolation { .. })
        ));
        assert!(KroneckerPoint::new(diag(&[2.0, 0.5]), diag(&[1.0, 1.0])).is_ok());
        assert!(KroneckerPoint::new(diag(&[1.0]), diag(&[1.0, 1.0])).is_err());
    }

    #[test]
    fn embed_examples() {
        let p = KroneckerPoint::new(SpdMatrix::identity(2), SpdMatrix::identity(2)).unwrap();
        assert_eq!(p.embed().unwrap().as_matrix(), &DMatrix::identity(4, 4));
        let p = KroneckerPoint::new(diag(&[2.0, 0.5]), diag(&[3.0, 1.0])).unwrap();
        let want = DMatrix::from_diagonal(&DVector::from_vec(vec![6.0, 1.5, 2.0, 0.5]));
        assert!((p.embed().unwrap().as_matrix() - want).norm() < 1e-15);
    }

    #[test]
    fn recover_round_trip() {
        let i4 = SpdMatrix::identity(4);
        let p = recover_factors(&i4).unwrap();
        assert!((p.u().as_matrix() - DMatrix::identity(2, 2)).norm() < 1e-15);
        assert!((p.v().as_matrix() - DMatrix::identity(2, 2)).norm() < 1e-15);
        for n in [2, 3, 4] {
            let p = point(n, n as u64 * 7);
            let q = recover_factors(&p.embed().unwrap()).unwrap();
            assert!(rel_frobenius(q.u().as_matrix(), p.u().as_matrix()) < 1e-11);
            assert!(rel_frobenius(q.v().as_matrix(), p.v().as_matrix()) < 1e-11);
        }
    }

    #[test]
    fn recover_rejects_off_model() {
        let p = point(2, 3);
        let k = p.embed().unwrap();
        let x = DVector::from_vec(vec![1.0, -2.0, 0.5, 1.5]).normalize();
        let bump = &x * x.transpose() * 0.1;
        let off = SpdMatrix::from_matrix(k.as_matrix() + bump).unwrap();
        assert!(matches!(recover_factors(&off), Err(Error::NotInModel { .. })));
        assert!(matches!(
            recover_factors(&SpdMatrix::identity(5)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reduced_distance_examples() {
        let p = point(3, 5);
        assert!(pairwise_bures_sq_reduced(&p, &p).unwrap().0.abs() < 1e-12);
        let p0 = KroneckerPoint::new(SpdMatrix::identity(2), SpdMatrix::identity(2)).unwrap();
        let p1 = KroneckerPoint::new(diag(&[2.0, 0.5]), diag(&[3.0, 1.0])).unwrap();
        let (red, spec) = pairwise_bures_sq_reduced(&p0, &p1).unwrap();
        let amb = bures_distance_sq(&p0.embed().unwrap(), &p1.embed().unwrap()).unwrap();
        assert!((red - amb).abs() <= 1e-12 * amb);
        assert!(spec.alpha.iter().chain(spec.beta.iter()).all(|&x| x > 0.0));
        assert!(pairwise_bures_sq_reduced(&p0, &point(3, 1)).is_err());
    }

    #[test]
    fn matrix_normal_cases() {
        let p = point(2, 9);
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let l0 = MatrixNormalLaw::new(m.clone(), p.clone()).unwrap();
        assert!(matrix_normal_w2_sq(&l0, &l0).unwrap().abs() < 1e-12);
        let mut m1 = m.clone();
        m1[(0, 0)] += 1.0;
        let l1 = MatrixNormalLaw::new(m1, p.clone()).unwrap();
        assert!((matrix_normal_w2_sq(&l0, &l1).unwrap() - 1.0).abs() < 1e-12);
        let l2 = MatrixNormalLaw::new(DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 2.0, 0.5]), point(2, 10)).unwrap();
        let red = matrix_normal_w2_sq(&l0, &l2).unwrap();
        let amb = matrix_normal_w2_sq_ambient(&l0, &l2).unwrap();
        assert!((red - amb).abs() <= 1e-11 * amb);
        assert!(MatrixNormalLaw::new(DMatrix::zeros(2, 3), p).is_err());
    }

    #[test]
    fn leaf_membership_examples() {
        let p = point(3, 11);
        let row = FactorLeaf::through(LeafKind::Row, &p);
        let col = FactorLeaf::through(LeafKind::Col, &p);
        assert!(leaf_membership(&row, &p));
        assert!(leaf_membership(&col, &p));
        let scaled = KroneckerPoint::new(p.u().clone(), p.v().scale(3.0).unwrap()).unwrap();
        assert!(leaf_membership(&col, &scaled));
        assert!(leaf_membership(&row, &scaled));
        assert!(!leaf_membership(&row, &point(3, 12)));

        // Endpoints sharing neither leaf.
        let p0 = KroneckerPoint::new(SpdMatrix::identity(2), SpdMatrix::identity(2)).unwrap();
        let p1 = KroneckerPoint::new(diag(&[2.0, 0.5]), diag(&[3.0, 1.0])).unwrap();
        for kind in [LeafKind::Row, LeafKind::Col] {
            assert!(!leaf_membership(&FactorLeaf::through(kind, &p0), &p1));
            assert!(!leaf_membership(&FactorLeaf::through(kind, &p1), &p0));
        }
        assert!(FactorLeaf::row(diag(&[2.0, 1.0])).is_err());
    }

    #[test]
    fn leaf_geodesic_endpoints_and_errors() {
        let p0 = point(3, 20);
        let p1 = KroneckerPoint::new(p0.u().clone(), spd(3, 21)).unwrap();
        let leaf = FactorLeaf::through(LeafKind::Row, &p0);
        let g0 = leaf_geodesic(&leaf, &p0, &p1, 0.0).unwrap();
        let g1 = leaf_geodesic(&leaf, &p0, &p1, 1.0).unwrap();
        assert!(rel_frobenius(g0.v().as_matrix(), p0.v().as_matrix()) < 1e-10);
        assert!(rel_frobenius(g1.v().as_matrix(), p1.v().as_matrix()) < 1e-10);
        assert!(matches!(
            leaf_geodesic(&leaf, &p0, &point(3, 30), 0.5),
            Err(Error::NotOnLeaf { .. })
        ));
        assert!(matches!(
            leaf_geodesic(&leaf, &p0, &p1, 2.0),
            Err(Error::ParameterOutOfRange { .. })
        ));
    }

    #[test]
    fn row_leaf_commuting_factor_curve() {
        let u = spd(2, 40);
        let p0 = KroneckerPoint::from_factors(&u, &diag(&[1.0, 4.0])).unwrap();
        let p1 = KroneckerPoint::new(p0.u().clone(), diag(&[9.0, 0.25])).unwrap();
        let leaf = FactorLeaf::through(LeafKind::Row, &p0);
        for t in [0.1, 0.5, 0.8] {
            let g = leaf_geodesic(&leaf, &p0, &p1, t).unwrap();
            let want = crate::bures::commuting_geodesic_eval(p0.v(), p1.v(), t).unwrap();
            assert!(rel_frobenius(g.v().as_matrix(), want.as_matrix()) < 1e-12);
        }
    }

    #[test]
    fn isotropic_col_leaf_scalar_geodesic() {
        let n = 3;
        let (a0, a1) = (0.7, 5.0);
        let p0 = KroneckerPoint::new(SpdMatrix::identity(n), diag(&[a0; 3])).unwrap();
        let p1 = KroneckerPoint::new(SpdMatrix::identity(n), diag(&[a1; 3])).unwrap();
        let leaf = FactorLeaf::col(SpdMatrix::identity(n));
        for t in [0.0, 0.3, 0.5, 1.0] {
            let g = leaf_geodesic(&leaf, &p0, &p1, t).unwrap();
            let alpha_t: f64 = ((1.0 - t) * a0.sqrt() + t * a1.sqrt()).powi(2);
            assert!((leaf.col_scale(g.v()) - alpha_t).abs() < 1e-12 * alpha_t);
            assert!((g.u().as_matrix() - DMatrix::identity(n, n)).norm() < 1e-12);
        }
    }

    #[test]
    fn homothety_examples() {
        let p0 = KroneckerPoint::new(SpdMatrix::identity(2), spd(2, 1)).unwrap();
        let p1 = KroneckerPoint::new(SpdMatrix::identity(2), spd(2, 2)).unwrap();
        let leaf = FactorLeaf::through(LeafKind::Row, &p0);
        assert!(homothety_distance(&leaf, &p0, &p0).unwrap().abs() < 1e-12);
        let h = homothety_distance(&leaf, &p0, &p1).unwrap();
        let want = 2.0 * bures_distance_sq(p0.v(), p1.v()).unwrap();
        assert!((h - want).abs() < 1e-12 * want);
        assert!(homothety_distance(&leaf, &p0, &point(2, 77)).is_err());
    }

    #[test]
    fn json_round_trip_and_schema() {
        let p = point(3, 50);
        let s = p.to_json();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["n"], 3);
        assert_eq!(v["u"].as_array().unwrap().len(), 3);
        let q = KroneckerPoint::from_json(&s).unwrap();
        assert!(rel_frobenius(q.u().as_matrix(), p.u().as_matrix()) < 1e-15);
        assert!(rel_frobenius(q.v().as_matrix(), p.v().as_matrix()) < 1e-15);

        let unnormalized = r#"{"n": 2, "u": [[4, 0], [0, 4]], "v": [[1, 0], [0, 2]]}"#;
        let q = KroneckerPoint::from_json(unnormalized).unwrap();
        assert!((q.u().as_matrix() - DMatrix::identity(2, 2)).norm() < 1e-14);
        assert!((q.v().as_matrix()[(1, 1)] - 8.0).abs() < 1e-13);
        assert!(KroneckerPoint::from_json(r#"{"n": 3, "u": [[1]], "v": [[1]]}"#).is_err());
    }
}
