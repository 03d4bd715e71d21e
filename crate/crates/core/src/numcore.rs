//! Dense complex linear algebra with a rank-revealing tolerance policy.
//!
//! Everything here works on [`ComplexMatrix`] (a `nalgebra::DMatrix` of
//! `Complex64`). Rank decisions use one rule throughout: a singular value
//! `s` counts as zero when `s <= rank_cut * max(s_max, 1)`. The floor of one
//! keeps round-off noise on operators that are exactly zero from being read
//! as rank; all operators in this crate live at contraction scale.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Numerical tolerance policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Relative singular-value cut used for every rank decision.
    pub rank_cut: f64,
    /// Threshold for identity checks (Hermitian, contraction, PSD, ...).
    pub eq_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_cut: 1e-10,
            eq_tol: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(rank_cut: f64, eq_tol: f64) -> Result<Self> {
        let ok = |v: f64| v.is_finite() && v > 0.0 && v < 1.0;
        if !ok(rank_cut) {
            return Err(Error::InvalidTolerance(format!(
                "rank_cut must lie in (0, 1), got {rank_cut}"
            )));
        }
        if !ok(eq_tol) {
            return Err(Error::InvalidTolerance(format!(
                "eq_tol must lie in (0, 1), got {eq_tol}"
            )));
        }
        Ok(Self { rank_cut, eq_tol })
    }

    /// Singular values at or below this are treated as zero.
    pub fn cut_for(&self, sigma_max: f64) -> f64 {
        self.rank_cut * sigma_max.max(1.0)
    }
}

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Builds a complex matrix from real entries given row-major.
pub fn real_matrix(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
    ComplexMatrix::from_fn(rows, cols, |i, j| c(entries[i * cols + j], 0.0))
}

pub fn real_diag(values: &[f64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(values.len(), values.len());
    for (i, v) in values.iter().enumerate() {
        m[(i, i)] = c(*v, 0.0);
    }
    m
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(rows, cols)
}

pub fn all_finite(a: &ComplexMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Frobenius distance between two matrices of equal shape.
pub fn frob_dist(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "frob_dist needs equal shapes");
    (a - b).norm()
}

/// `(x, y)` with linearity in the first argument.
pub fn inner(x: &ComplexVector, y: &ComplexVector) -> C64 {
    y.dotc(x)
}

/// Thin singular value decomposition sorted by decreasing singular value.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

// The complex SVD of `nalgebra` loses accuracy on some rank-deficient
// inputs (reconstruction errors of order one were observed), so the
// decomposition is delegated to `faer`.
fn faer_svd(a: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
    let (m, n) = a.shape();
    let fa = faer::Mat::<C64>::from_fn(m, n, |i, j| a[(i, j)]);
    let dec = fa.thin_svd().expect("faer svd converges");
    let (fu, fs, fv) = (dec.U(), dec.S(), dec.V());
    let k = m.min(n);
    let u = ComplexMatrix::from_fn(m, k, |i, j| fu[(i, j)]);
    let v = ComplexMatrix::from_fn(n, k, |i, j| fv[(i, j)]);
    let sigma = (0..k).map(|i| fs[i].re).collect();
    (u, sigma, v)
}

pub fn svd(a: &ComplexMatrix) -> Svd {
    let (m, n) = a.shape();
    let k = m.min(n);
    if k == 0 {
        return Svd {
            u: zeros(m, 0),
            sigma: Vec::new(),
            v: zeros(n, 0),
        };
    }
    let (u, raw, v) = faer_svd(a);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| raw[j].total_cmp(&raw[i]));
    let sigma = order.iter().map(|&i| raw[i]).collect();
    let u = ComplexMatrix::from_fn(m, k, |r, col| u[(r, order[col])]);
    let v = ComplexMatrix::from_fn(n, k, |r, col| v[(r, order[col])]);
    Svd { u, sigma, v }
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    if a.nrows().min(a.ncols()) == 0 {
        return Vec::new();
    }
    let mut s = faer_svd(a).1;
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Spectral norm; zero for empty matrices.
pub fn op_norm(a: &ComplexMatrix) -> f64 {
    singular_values(a).first().copied().unwrap_or(0.0)
}

pub fn rank(a: &ComplexMatrix, tol: &Tolerance) -> usize {
    let s = singular_values(a);
    let cut = tol.cut_for(s.first().copied().unwrap_or(0.0));
    s.iter().filter(|&&x| x > cut).count()
}

pub fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + a.adjoint()) * c(0.5, 0.0)
}

/// `(A - A*) / 2i`, so that `A = Re A + i Im A` with both parts Hermitian.
pub fn imaginary_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a - a.adjoint()) * c(0.0, -0.5)
}

pub fn hermitian_deviation(a: &ComplexMatrix) -> f64 {
    (a - a.adjoint()).norm()
}

pub fn is_hermitian(a: &ComplexMatrix, tol: &Tolerance) -> bool {
    a.is_square() && hermitian_deviation(a) <= tol.eq_tol * a.norm().max(1.0)
}

fn check_hermitian(a: &ComplexMatrix, tol: &Tolerance) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !is_hermitian(a, tol) {
        return Err(Error::NotHermitian {
            deviation: hermitian_deviation(a),
        });
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V f(Λ) V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let fj = c(f(lam), 0.0);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        hermitian_part(&(scaled * self.vectors.adjoint()))
    }
}

/// Eigen-decomposition of the Hermitian part of `a`.
pub fn hermitian_eigen(a: &ComplexMatrix) -> HermitianEigen {
    let n = a.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: zeros(0, 0),
        };
    }
    let dec = hermitian_part(a).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| dec.eigenvalues[i].total_cmp(&dec.eigenvalues[j]));
    let values = order.iter().map(|&i| dec.eigenvalues[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, col| dec.eigenvectors[(r, order[col])]);
    HermitianEigen { values, vectors }
}

pub fn min_eigenvalue(a: &ComplexMatrix) -> f64 {
    hermitian_eigen(a)
        .values
        .first()
        .copied()
        .unwrap_or(f64::INFINITY)
}

pub fn max_eigenvalue(a: &ComplexMatrix) -> f64 {
    hermitian_eigen(a)
        .values
        .last()
        .copied()
        .unwrap_or(f64::NEG_INFINITY)
}

/// PSD test with the eigenvalue floor `-eq_tol * max(1, |A|)`.
pub fn is_psd(a: &ComplexMatrix, tol: &Tolerance) -> bool {
    is_hermitian(a, tol) && min_eigenvalue(a) >= -tol.eq_tol * a.norm().max(1.0)
}

/// `A <= B` in the PSD order.
pub fn psd_le(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> bool {
    is_psd(&(b - a), tol)
}

/// Nonnegative square root of a Hermitian PSD matrix.
///
/// Eigenvalues at or below the rank cut map to zero; eigenvalues below
/// `-eq_tol` (relative) are an error.
pub fn psd_sqrt(s: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    check_hermitian(s, tol)?;
    let eig = hermitian_eigen(s);
    let floor = -tol.eq_tol * s.norm().max(1.0);
    if let Some(&lo) = eig.values.first() {
        if lo < floor {
            return Err(Error::NegativeEigenvalueBeyondTolerance { eigenvalue: lo });
        }
    }
    // Eigenvalues under the rank cut are round-off on null directions;
    // their roots (~1e-8 for 1e-16) would otherwise pass as range.
    let cut = tol.cut_for(eig.values.last().copied().unwrap_or(0.0));
    Ok(eig.apply(|x| if x > cut { x.sqrt() } else { 0.0 }))
}

/// `S^{(-1/2)}`: Moore-Penrose inverse of the square root of a Hermitian
/// PSD matrix. The rank cut is applied to the eigenvalues of `S` itself, so
/// round-off on a null direction (`~1e-16`, whose root is `~1e-8`) is not
/// mistaken for range.
pub fn psd_pinv_sqrt(s: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    check_hermitian(s, tol)?;
    let eig = hermitian_eigen(s);
    let top = eig.values.last().copied().unwrap_or(0.0);
    if let Some(&lo) = eig.values.first() {
        if lo < -tol.eq_tol * s.norm().max(1.0) {
            return Err(Error::NegativeEigenvalueBeyondTolerance { eigenvalue: lo });
        }
    }
    let cut = tol.cut_for(top);
    Ok(eig.apply(|x| if x > cut { 1.0 / x.sqrt() } else { 0.0 }))
}

/// Moore-Penrose pseudo-inverse with the crate's rank cut.
pub fn pinv(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let (m, n) = a.shape();
    let dec = svd(a);
    let cut = tol.cut_for(dec.sigma.first().copied().unwrap_or(0.0));
    let mut out = zeros(n, m);
    for (j, &s) in dec.sigma.iter().enumerate() {
        if s <= cut {
            break;
        }
        let vj = dec.v.column(j);
        let uj = dec.u.column(j);
        out += (vj * uj.adjoint()) * c(1.0 / s, 0.0);
    }
    out
}

/// Defect operator `D_T = (I - T*T)^{1/2}`.
pub fn defect(t: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let norm = op_norm(t);
    if norm > 1.0 + tol.eq_tol {
        return Err(Error::NotContraction { norm });
    }
    let n = t.ncols();
    let gram = identity(n) - t.adjoint() * t;
    // 1 - |T|^2 can dip to about -2 eq_tol for |T| = 1 + eq_tol; values
    // under the rank cut are null directions (see `psd_sqrt`).
    let eig = hermitian_eigen(&gram);
    let cut = tol.cut_for(eig.values.last().copied().unwrap_or(0.0));
    Ok(eig.apply(|x| if x > cut { x.sqrt() } else { 0.0 }))
}

/// Orthonormal basis (as columns) of `ran A`.
pub fn range_basis(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let dec = svd(a);
    let cut = tol.cut_for(dec.sigma.first().copied().unwrap_or(0.0));
    let r = dec.sigma.iter().filter(|&&s| s > cut).count();
    dec.u.columns(0, r).into_owned()
}

/// Orthonormal basis of the orthogonal complement of `span(basis)` in `C^n`.
///
/// `basis` is assumed orthonormal.
pub fn orth_complement(basis: &ComplexMatrix, n: usize) -> ComplexMatrix {
    assert_eq!(basis.nrows(), n, "basis rows must equal ambient dimension");
    let k = basis.ncols();
    if k == 0 {
        return identity(n);
    }
    if k >= n {
        return zeros(n, 0);
    }
    let proj_perp = identity(n) - basis * basis.adjoint();
    let eig = hermitian_eigen(&proj_perp);
    // The complement projector has exactly n - k unit eigenvalues.
    let cols: Vec<usize> = (k..n).collect();
    ComplexMatrix::from_fn(n, cols.len(), |r, j| eig.vectors[(r, cols[j])])
}

/// Orthonormal basis of `ker A`.
pub fn null_space(a: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let row_space = range_basis(&a.adjoint(), tol);
    orth_complement(&row_space, a.ncols())
}

/// Cosines of the principal angles between two subspaces given by
/// orthonormal bases, in decreasing order.
pub fn principal_cosines(qa: &ComplexMatrix, qb: &ComplexMatrix) -> Vec<f64> {
    singular_values(&(qa.adjoint() * qb))
        .into_iter()
        .map(|s| s.min(1.0))
        .collect()
}

/// `ran A ∩ ran B = {0}`, decided by principal angles: every cosine must stay
/// below `1 - rank_cut`.
pub fn range_meet_trivial(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> bool {
    assert_eq!(a.nrows(), b.nrows(), "range_meet_trivial needs equal row counts");
    let qa = range_basis(a, tol);
    let qb = range_basis(b, tol);
    principal_cosines(&qa, &qb)
        .first()
        .map_or(true, |&cmax| cmax < 1.0 - tol.rank_cut)
}

/// Orthonormal basis of `ran A ∩ ran B` (principal vectors with cosine at
/// least `1 - rank_cut`).
pub fn range_intersection(a: &ComplexMatrix, b: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let qa = range_basis(a, tol);
    let qb = range_basis(b, tol);
    let n = a.nrows();
    if qa.ncols() == 0 || qb.ncols() == 0 {
        return zeros(n, 0);
    }
    let dec = svd(&(qa.adjoint() * &qb));
    let r = dec
        .sigma
        .iter()
        .filter(|&&s| s >= 1.0 - tol.rank_cut)
        .count();
    let vecs = &qa * dec.u.columns(0, r);
    range_basis(&vecs, tol)
}

/// Inverse of a square matrix, or `ResolventSingular` when its smallest
/// singular value falls under the rank cut.
pub fn checked_inverse(a: &ComplexMatrix, tol: &Tolerance, point: C64) -> Result<ComplexMatrix> {
    let n = a.nrows();
    if n == 0 {
        return Ok(zeros(0, 0));
    }
    let s = singular_values(a);
    let smax = s[0];
    let smin = *s.last().unwrap();
    if smin <= tol.cut_for(smax) {
        return Err(Error::ResolventSingular {
            point: format!("{point}"),
            sigma_min: smin,
        });
    }
    // LU with pivoting: the closed-form small-size inverses lose accuracy
    // near clustered small eigenvalues.
    a.clone().lu().try_inverse().ok_or(Error::ResolventSingular {
        point: format!("{point}"),
        sigma_min: smin,
    })
}

/// Block-diagonal `a ⊕ b`.
pub fn direct_sum(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (r1, c1) = a.shape();
    let (r2, c2) = b.shape();
    let mut out = zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((r1, c1), (r2, c2)).copy_from(b);
    out
}

/// Assembles `[[a, b], [c, d]]`.
pub fn block2(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c_: &ComplexMatrix,
    d: &ComplexMatrix,
) -> ComplexMatrix {
    let (r1, c1) = a.shape();
    let (r2, c2) = d.shape();
    assert_eq!(b.shape(), (r1, c2), "block (1,2) shape");
    assert_eq!(c_.shape(), (r2, c1), "block (2,1) shape");
    let mut out = zeros(r1 + r2, c1 + c2);
    out.view_mut((0, 0), (r1, c1)).copy_from(a);
    out.view_mut((0, c1), (r1, c2)).copy_from(b);
    out.view_mut((r1, 0), (r2, c1)).copy_from(c_);
    out.view_mut((r1, c1), (r2, c2)).copy_from(d);
    out
}

/// A subspace of `C^n` carried by an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    /// Wraps a basis that is already orthonormal (checked within `eq_tol`).
    pub fn from_orthonormal(basis: ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let k = basis.ncols();
        let dev = frob_dist(&(basis.adjoint() * &basis), &identity(k));
        if dev > tol.eq_tol * (k as f64).max(1.0) {
            return Err(Error::DimensionMismatch(format!(
                "basis is not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(Self {
            ambient_dim: basis.nrows(),
            basis,
        })
    }

    /// Range of an arbitrary spanning matrix.
    pub fn span(vectors: &ComplexMatrix, tol: &Tolerance) -> Self {
        Self {
            ambient_dim: vectors.nrows(),
            basis: range_basis(vectors, tol),
        }
    }

    /// Span of the given coordinate axes.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        let mut basis = zeros(ambient_dim, axes.len());
        for (j, &i) in axes.iter().enumerate() {
            basis[(i, j)] = c(1.0, 0.0);
        }
        Self { ambient_dim, basis }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: zeros(ambient_dim, 0),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: identity(ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn projector(&self) -> ComplexMatrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn complement(&self) -> Self {
        Self {
            ambient_dim: self.ambient_dim,
            basis: orth_complement(&self.basis, self.ambient_dim),
        }
    }

    /// `|P_self - P_other|`: the sine of the largest principal angle when the
    /// dimensions agree, one otherwise.
    pub fn distance(&self, other: &Subspace) -> f64 {
        assert_eq!(self.ambient_dim, other.ambient_dim, "subspaces in different spaces");
        if self.dim() != other.dim() {
            return 1.0;
        }
        op_norm(&(self.projector() - other.projector()))
    }

    pub fn contains(&self, v: &ComplexVector, tol: &Tolerance) -> bool {
        let resid = v - &self.basis * (self.basis.adjoint() * v);
        resid.norm() <= tol.eq_tol * v.norm().max(1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn tolerance_rejects_out_of_range() {
        assert!(Tolerance::new(0.0, 1e-8).is_err());
        assert!(Tolerance::new(1e-10, 1.5).is_err());
        assert!(Tolerance::new(1e-10, 1e-8).is_ok());
    }

    #[test]
    fn psd_sqrt_identity_and_diagonal() {
        let r = psd_sqrt(&identity(2), &tol()).unwrap();
        assert!(frob_dist(&r, &identity(2)) < 1e-14);
        let r = psd_sqrt(&real_diag(&[4.0, 0.0]), &tol()).unwrap();
        assert!(frob_dist(&r, &real_diag(&[2.0, 0.0])) < 1e-14);
    }

    #[test]
    fn psd_sqrt_errors() {
        let not_herm = real_matrix(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(
            psd_sqrt(&not_herm, &tol()),
            Err(Error::NotHermitian { .. })
        ));
        let neg = real_diag(&[1.0, -0.1]);
        assert!(matches!(
            psd_sqrt(&neg, &tol()),
            Err(Error::NegativeEigenvalueBeyondTolerance { .. })
        ));
        // Tiny negative eigenvalues are clamped.
        let r = psd_sqrt(&real_diag(&[1.0, -1e-12]), &tol()).unwrap();
        assert_eq!(r[(1, 1)], c(0.0, 0.0));
    }

    #[test]
    fn pinv_examples() {
        let p = pinv(&real_diag(&[2.0, 0.0]), &tol());
        assert!(frob_dist(&p, &real_diag(&[0.5, 0.0])) < 1e-14);
        let swap = real_matrix(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(frob_dist(&pinv(&swap, &tol()), &swap) < 1e-14);
        let ones = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let expect = real_matrix(2, 2, &[0.25, 0.25, 0.25, 0.25]);
        assert!(frob_dist(&pinv(&ones, &tol()), &expect) < 1e-14);
    }

    #[test]
    fn pinv_of_empty_and_zero() {
        let e = zeros(3, 0);
        assert_eq!(pinv(&e, &tol()).shape(), (0, 3));
        assert_eq!(pinv(&zeros(2, 3), &tol()), zeros(3, 2));
    }

    #[test]
    fn defect_examples() {
        let d = defect(&zeros(2, 2), &tol()).unwrap();
        assert!(frob_dist(&d, &identity(2)) < 1e-14);
        let d = defect(&identity(2), &tol()).unwrap();
        assert!(d.norm() < 1e-7);
        let t = real_matrix(2, 2, &[0.6, 0.0, 0.8, 0.0]);
        let d = defect(&t, &tol()).unwrap();
        assert!(frob_dist(&d, &real_diag(&[0.0, 1.0])) < 1e-7);
        let d_star = defect(&t.adjoint(), &tol()).unwrap();
        assert!(frob_dist(&(&t * &d), &(&d_star * &t)) < 1e-7);
        assert!(matches!(
            defect(&real_diag(&[1.5]), &tol()),
            Err(Error::NotContraction { .. })
        ));
    }

    #[test]
    fn range_meet_examples() {
        let e1 = real_matrix(2, 1, &[1.0, 0.0]);
        let e2 = real_matrix(2, 1, &[0.0, 1.0]);
        assert!(range_meet_trivial(&e1, &e2, &tol()));
        assert!(!range_meet_trivial(&identity(2), &identity(2), &tol()));
        let s = 0.5f64.sqrt();
        let a = real_matrix(2, 1, &[s, s]);
        let b = real_matrix(2, 1, &[s, -s]);
        assert!(range_meet_trivial(&a, &b, &tol()));
        assert!(range_meet_trivial(&zeros(2, 1), &identity(2), &tol()));
    }

    #[test]
    fn null_space_and_complement() {
        let a = real_matrix(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let ker = null_space(&a, &tol());
        assert_eq!(ker.ncols(), 1);
        assert!((ker[(2, 0)].norm() - 1.0).abs() < 1e-12);
        let s = Subspace::coordinate(3, &[0]);
        let comp = s.complement();
        assert_eq!(comp.dim(), 2);
        assert!(frob_dist(&(s.projector() + comp.projector()), &identity(3)) < 1e-12);
    }

    #[test]
    fn intersection_of_planes() {
        // span{e1, e2} ∩ span{e2, e3} = span{e2}
        let a = real_matrix(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let b = real_matrix(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        let i = range_intersection(&a, &b, &tol());
        assert_eq!(i.ncols(), 1);
        assert!((i[(1, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn checked_inverse_detects_singular() {
        let s = real_diag(&[1.0, 0.0]);
        assert!(matches!(
            checked_inverse(&s, &tol(), c(0.0, 0.0)),
            Err(Error::ResolventSingular { .. })
        ));
    }
}
