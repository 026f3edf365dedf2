//! Joint eigenbases for commuting endpoints and the square-root profile.

use nalgebra::{DMatrix, DVector};

use crate::bures::{check_unit_interval, COMMUTE_TOL};
use crate::error::{Error, Result};
use crate::kron::{KroneckerPoint, GAUGE_TOL};
use crate::spd::{relative_commutator, EigenDecomposition, SpdMatrix};

/// Relative off-diagonal mass tolerated when a second factor is read off in
/// the first factor's eigenbasis.
pub const CHART_TOL: f64 = 1e-8;

/// Relative gap below which two eigenvalues of the first factor are treated
/// as one eigenspace.
const CLUSTER_TOL: f64 = 1e-8;

/// Default tolerance of [`classify_closure_commuting`].
pub const RANK_TOL: f64 = 1e-10;

const ORTHO_TOL: f64 = 1e-10;

/// `U_i = Q diag(u_i) Qᵀ`, `V_i = R diag(v_i) Rᵀ`.
#[derive(Clone, Debug)]
pub struct CommutingChart {
    q_basis: DMatrix<f64>,
    r_basis: DMatrix<f64>,
    u0: DVector<f64>,
    u1: DVector<f64>,
    v0: DVector<f64>,
    v1: DVector<f64>,
}

fn check_orthogonal(m: &DMatrix<f64>) -> Result<()> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: m.ncols(),
        });
    }
    let defect = (m.transpose() * m - DMatrix::identity(n, n)).norm();
    if defect > ORTHO_TOL * (n as f64).sqrt() {
        return Err(Error::InvalidData(format!("basis is not orthogonal (defect {defect:e})")));
    }
    Ok(())
}

fn check_positive(v: &DVector<f64>) -> Result<()> {
    match v.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
        Some(index) => Err(Error::NonPositiveCoordinate { index, value: v[index] }),
        None => Ok(()),
    }
}

fn check_unit_product(v: &DVector<f64>) -> Result<()> {
    let log_det: f64 = v.iter().map(|x| x.ln()).sum();
    if log_det.abs() > GAUGE_TOL * v.len() as f64 {
        return Err(Error::GaugeViolation { log_det });
    }
    Ok(())
}

impl CommutingChart {
    pub fn new(
        q_basis: DMatrix<f64>,
        r_basis: DMatrix<f64>,
        u0: DVector<f64>,
        u1: DVector<f64>,
        v0: DVector<f64>,
        v1: DVector<f64>,
    ) -> Result<Self> {
        let n = u0.len();
        for len in [q_basis.nrows(), r_basis.nrows(), u1.len(), v0.len(), v1.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        check_orthogonal(&q_basis)?;
        check_orthogonal(&r_basis)?;
        for v in [&u0, &u1, &v0, &v1] {
            check_positive(v)?;
        }
        check_unit_product(&u0)?;
        check_unit_product(&u1)?;
        Ok(Self {
            q_basis,
            r_basis,
            u0,
            u1,
            v0,
            v1,
        })
    }

    /// Chart with identity bases.
    pub fn diagonal(u0: DVector<f64>, u1: DVector<f64>, v0: DVector<f64>, v1: DVector<f64>) -> Result<Self> {
        let n = u0.len();
        Self::new(DMatrix::identity(n, n), DMatrix::identity(n, n), u0, u1, v0, v1)
    }

    pub fn n(&self) -> usize {
        self.u0.len()
    }

    pub fn q_basis(&self) -> &DMatrix<f64> {
        &self.q_basis
    }

    pub fn r_basis(&self) -> &DMatrix<f64> {
        &self.r_basis
    }

    pub fn u0(&self) -> &DVector<f64> {
        &self.u0
    }

    pub fn u1(&self) -> &DVector<f64> {
        &self.u1
    }

    pub fn v0(&self) -> &DVector<f64> {
        &self.v0
    }

    pub fn v1(&self) -> &DVector<f64> {
        &self.v1
    }

    pub fn profile(&self) -> SqrtProfile {
        SqrtProfile {
            a: self.u0.map(f64::sqrt),
            b: self.v0.map(f64::sqrt),
            c: self.u1.map(f64::sqrt),
            d: self.v1.map(f64::sqrt),
        }
    }

    /// The endpoints rebuilt from the chart.
    pub fn endpoints(&self) -> Result<(KroneckerPoint, KroneckerPoint)> {
        let q = &self.q_basis;
        let r = &self.r_basis;
        let point = |u: &DVector<f64>, v: &DVector<f64>| -> Result<KroneckerPoint> {
            let uu = SpdMatrix::from_eigen(u.clone(), q.clone())?;
            let vv = SpdMatrix::from_eigen(v.clone(), r.clone())?;
            KroneckerPoint::new(uu, vv)
        };
        Ok((point(&self.u0, &self.v0)?, point(&self.u1, &self.v1)?))
    }
}

/// Diagonalizes `a` and, inside each of its eigenspaces, the compression of
/// `b`. Returns the basis and both diagonals, ordered by descending
/// eigenvalue of `a`, ties by descending eigenvalue of `b`.
fn joint_diagonalize(a: &SpdMatrix, b: &SpdMatrix) -> Result<(DMatrix<f64>, DVector<f64>, DVector<f64>)> {
    let relative = relative_commutator(a.as_matrix(), b.as_matrix());
    if relative > COMMUTE_TOL {
        return Err(Error::NotSimultaneouslyDiagonalizable { relative });
    }
    let n = a.dim();
    let eig = a.eigen();
    let vals = &eig.eigenvalues;
    let mut basis = eig.eigenvectors.clone();
    let scale = vals[0];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && vals[end - 1] - vals[end] <= CLUSTER_TOL * scale {
            end += 1;
        }
        if end - start > 1 {
            let block = basis.columns(start, end - start).into_owned();
            let compressed = block.transpose() * b.as_matrix() * &block;
            let sub = EigenDecomposition::of(&((&compressed + compressed.transpose()) * 0.5));
            basis.columns_mut(start, end - start).copy_from(&(block * sub.eigenvectors));
        }
        start = end;
    }
    let da = basis.transpose() * a.as_matrix() * &basis;
    let db = basis.transpose() * b.as_matrix() * &basis;
    let off = |m: &DMatrix<f64>| {
        let mut d = m.clone();
        d.fill_diagonal(0.0);
        d.norm() / m.norm()
    };
    let relative = off(&db).max(off(&da));
    if relative > CHART_TOL {
        return Err(Error::NotSimultaneouslyDiagonalizable { relative });
    }
    Ok((basis, da.diagonal(), db.diagonal()))
}

/// Joint eigenbases of `(U₀, U₁)` and `(V₀, V₁)`.
pub fn build_chart(p0: &KroneckerPoint, p1: &KroneckerPoint) -> Result<CommutingChart> {
    if p0.n() != p1.n() {
        return Err(Error::DimensionMismatch {
            expected: p0.n(),
            got: p1.n(),
        });
    }
    let (q, u0, u1) = joint_diagonalize(p0.u(), p1.u())?;
    let (r, v0, v1) = joint_diagonalize(p0.v(), p1.v())?;
    // Diagonal entries of a gauge-normalized factor carry rounding of order
    // ε·cond; renormalize so the chart itself satisfies the gauge exactly.
    let renorm = |u: DVector<f64>| {
        let mean_log = u.iter().map(|x| x.ln()).sum::<f64>() / u.len() as f64;
        u * (-mean_log).exp()
    };
    CommutingChart::new(q, r, renorm(u0), renorm(u1), v0, v1)
}

/// Entrywise square roots `a = √u₀`, `b = √v₀`, `c = √u₁`, `d = √v₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct SqrtProfile {
    pub a: DVector<f64>,
    pub b: DVector<f64>,
    pub c: DVector<f64>,
    pub d: DVector<f64>,
}

impl SqrtProfile {
    pub fn new(a: DVector<f64>, b: DVector<f64>, c: DVector<f64>, d: DVector<f64>) -> Result<Self> {
        let n = a.len();
        for len in [b.len(), c.len(), d.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        for v in [&a, &b, &c, &d] {
            check_positive(v)?;
        }
        check_unit_product(&a)?;
        check_unit_product(&c)?;
        Ok(Self { a, b, c, d })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    /// `H_t = (1−t) abᵀ + t cdᵀ`.
    pub fn h_at(&self, t: f64) -> Result<DMatrix<f64>> {
        check_unit_interval(t)?;
        Ok(&self.a * self.b.transpose() * (1.0 - t) + &self.c * self.d.transpose() * t)
    }
}

pub fn sqrt_profile_at(chart: &CommutingChart, t: f64) -> Result<DMatrix<f64>> {
    chart.profile().h_at(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClosureClass {
    /// `u₁ = u₀`: the geodesic stays on the common row leaf.
    AlwaysInModelRowLeaf,
    /// `v₁ ∝ v₀`: the geodesic stays on the common column leaf.
    AlwaysInModelColLeaf,
    /// `H_t` has rank two at every interior time.
    DepartsImmediately,
}

impl ClosureClass {
    pub fn is_leaf(self) -> bool {
        !matches!(self, ClosureClass::DepartsImmediately)
    }
}

fn proportional(x: &DVector<f64>, y: &DVector<f64>, tol: f64) -> bool {
    let tau = x.dot(y) / y.dot(y);
    tau > 0.0 && (x - y * tau).norm() <= tol * x.norm()
}

pub fn classify_closure_commuting(chart: &CommutingChart, rank_tol: f64) -> ClosureClass {
    if (&chart.u1 - &chart.u0).norm() <= rank_tol * chart.u0.norm() {
        ClosureClass::AlwaysInModelRowLeaf
    } else if proportional(&chart.v1, &chart.v0, rank_tol) {
        ClosureClass::AlwaysInModelColLeaf
    } else {
        ClosureClass::DepartsImmediately
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bures::commuting_geodesic_eval;
    use crate::spd::kron;

    fn dv(x: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(x)
    }

    fn rotation(n: usize, seed: u64) -> DMatrix<f64> {
        let mut s = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let g = DMatrix::from_fn(n, n, |_, _| {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        });
        g.qr().q()
    }

    fn example_nonclosure() -> CommutingChart {
        CommutingChart::diagonal(dv(&[1.0, 1.0]), dv(&[2.0, 0.5]), dv(&[1.0, 1.0]), dv(&[3.0, 1.0])).unwrap()
    }

    #[test]
    fn diagonal_inputs_give_identity_bases() {
        let p0 = KroneckerPoint::new(SpdMatrix::from_diagonal(&[2.0, 0.5]).unwrap(), SpdMatrix::from_diagonal(&[4.0, 1.0]).unwrap()).unwrap();
        let p1 = KroneckerPoint::new(SpdMatrix::from_diagonal(&[4.0, 0.25]).unwrap(), SpdMatrix::from_diagonal(&[1.0, 3.0]).unwrap()).unwrap();
        let chart = build_chart(&p0, &p1).unwrap();
        assert!((chart.q_basis().abs() - DMatrix::identity(2, 2)).norm() < 1e-15);
        assert!((chart.r_basis().abs() - DMatrix::identity(2, 2)).norm() < 1e-15);
        assert!((chart.u0() - dv(&[2.0, 0.5])).norm() < 1e-15);
        assert!((chart.u1() - dv(&[4.0, 0.25])).norm() < 1e-15);
        assert!((chart.v0() - dv(&[4.0, 1.0])).norm() < 1e-15);
        assert!((chart.v1() - dv(&[1.0, 3.0])).norm() < 1e-15);
    }

    #[test]
    fn rotated_inputs_recover_eigenvalues() {
        for seed in 0..5 {
            let n = 4;
            let q = rotation(n, seed);
            let r = rotation(n, seed + 100);
            let u0 = dv(&[2.0, 1.0, 1.0, 0.5]);
            let u1 = dv(&[0.5, 4.0, 1.0, 0.5]);
            let v0 = dv(&[3.0, 3.0, 1.0, 0.2]);
            let v1 = dv(&[1.0, 2.0, 5.0, 5.0]);
            let chart = CommutingChart::new(q, r, u0.clone(), u1.clone(), v0.clone(), v1.clone()).unwrap();
            let (p0, p1) = chart.endpoints().unwrap();
            let rebuilt = build_chart(&p0, &p1).unwrap();
            // Recovered pairs (u0_p, u1_p) agree with the constructed pairs as sets.
            let pairs = |x: &DVector<f64>, y: &DVector<f64>| {
                let mut v: Vec<(f64, f64)> = x.iter().copied().zip(y.iter().copied()).collect();
                v.sort_by(|a, b| (a.0 + 1e-9 * a.1).total_cmp(&(b.0 + 1e-9 * b.1)).then(a.1.total_cmp(&b.1)));
                v
            };
            for (want, got) in [
                (pairs(&u0, &u1), pairs(rebuilt.u0(), rebuilt.u1())),
                (pairs(&v0, &v1), pairs(rebuilt.v0(), rebuilt.v1())),
            ] {
                for (w, g) in want.iter().zip(&got) {
                    assert!((w.0 - g.0).abs() < 1e-10 && (w.1 - g.1).abs() < 1e-10, "{want:?} vs {got:?}");
                }
            }
        }
    }

    #[test]
    fn noncommuting_example_rejected() {
        let u0 = SpdMatrix::from_diagonal(&[2.0, 0.5]).unwrap();
        let u1 = SpdMatrix::from_row_slice(2, &[1.25, 0.75, 0.75, 1.25]).unwrap();
        let p0 = KroneckerPoint::new(u0, SpdMatrix::from_diagonal(&[4.0, 1.0]).unwrap()).unwrap();
        let p1 = KroneckerPoint::new(u1, SpdMatrix::from_diagonal(&[1.0, 4.0]).unwrap()).unwrap();
        assert!(matches!(build_chart(&p0, &p1), Err(Error::NotSimultaneouslyDiagonalizable { .. })));
    }

    #[test]
    fn profile_endpoints_and_shared_leaf_rank() {
        let chart = example_nonclosure();
        let p = chart.profile();
        let h0 = p.h_at(0.0).unwrap();
        assert!((h0 - &p.a * p.b.transpose()).norm() == 0.0);
        assert!(p.h_at(1.5).is_err());

        let leaf = SqrtProfile::new(p.a.clone(), p.b.clone(), p.a.clone(), p.d.clone()).unwrap();
        for t in [0.2, 0.5, 0.9] {
            let h = leaf.h_at(t).unwrap();
            let want = &p.a * (&p.b * (1.0 - t) + &p.d * t).transpose();
            assert!((h - want).norm() < 1e-15);
        }
    }

    #[test]
    fn nonclosure_determinant() {
        let chart = example_nonclosure();
        let k = 6f64.sqrt() + 0.5f64.sqrt() - 2f64.sqrt() - 1.5f64.sqrt();
        for t in [0.25, 0.5, 0.75] {
            let h = sqrt_profile_at(&chart, t).unwrap();
            assert!((h.determinant() - t * (1.0 - t) * k).abs() < 1e-12);
        }
        assert_eq!(classify_closure_commuting(&chart, RANK_TOL), ClosureClass::DepartsImmediately);
    }

    #[test]
    fn classification_examples() {
        let u = dv(&[2.0, 0.5]);
        let v = dv(&[1.0, 3.0]);
        let row = CommutingChart::diagonal(u.clone(), u.clone(), v.clone(), dv(&[7.0, 0.1])).unwrap();
        assert_eq!(classify_closure_commuting(&row, RANK_TOL), ClosureClass::AlwaysInModelRowLeaf);
        let col = CommutingChart::diagonal(u.clone(), dv(&[0.25, 4.0]), v.clone(), &v * 5.0).unwrap();
        assert_eq!(classify_closure_commuting(&col, RANK_TOL), ClosureClass::AlwaysInModelColLeaf);
    }

    #[test]
    fn squared_profile_is_geodesic_diagonal() {
        let n = 3;
        let chart = CommutingChart::new(
            rotation(n, 7),
            rotation(n, 8),
            dv(&[2.0, 1.0, 0.5]),
            dv(&[0.25, 2.0, 2.0]),
            dv(&[1.0, 3.0, 0.5]),
            dv(&[2.0, 0.7, 1.1]),
        )
        .unwrap();
        let (p0, p1) = chart.endpoints().unwrap();
        let k0 = p0.embed().unwrap();
        let k1 = p1.embed().unwrap();
        let w = kron(chart.r_basis(), chart.q_basis());
        for t in [0.3, 0.6] {
            let g = commuting_geodesic_eval(&k0, &k1, t).unwrap();
            let diag = (w.transpose() * g.as_matrix() * &w).diagonal();
            let h = sqrt_profile_at(&chart, t).unwrap();
            let sq = h.component_mul(&h);
            let want = DVector::from_column_slice(sq.as_slice());
            assert!((diag - want).norm() < 1e-12);
        }
    }

    #[test]
    fn chart_validation() {
        assert!(CommutingChart::diagonal(dv(&[2.0, 1.0]), dv(&[1.0, 1.0]), dv(&[1.0, 1.0]), dv(&[1.0, 1.0])).is_err());
        assert!(CommutingChart::diagonal(dv(&[1.0, 1.0]), dv(&[1.0, 1.0]), dv(&[1.0, -1.0]), dv(&[1.0, 1.0])).is_err());
        let skew = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        let one = dv(&[1.0, 1.0]);
        assert!(CommutingChart::new(skew, DMatrix::identity(2, 2), one.clone(), one.clone(), one.clone(), one).is_err());
    }
}
