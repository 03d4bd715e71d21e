//! Hermitian contractions with a proper domain and their selfadjoint
//! (and quasi-selfadjoint) contractive extensions.
//!
//! A Hermitian contraction `B` is given by its values on an orthonormal
//! basis of `H0 = dom B`. It is split against `H = H0 ⊕ N` as
//! `B = B0 + K0 D_{B0}`; every qsc-extension then has the form
//! `mid + E X E*` where `mid = (B_mu + B_M)/2`, `E = P_N D_{K0*}` restricted
//! to an orthonormal basis of `cran D_{K0*}`, and `X` is a contraction in
//! those coordinates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{
    block2, c, defect, frob_dist, hermitian_deviation, identity, is_hermitian, op_norm,
    orth_complement, pinv, psd_sqrt, range_basis, zeros, ComplexMatrix, Subspace, Tolerance,
};

#[derive(Debug, Clone)]
pub struct HermitianContractionData {
    pub ambient_dim: usize,
    /// `H0 = dom B`.
    pub dom: Subspace,
    /// `N = H ⊖ H0`.
    pub n_space: Subspace,
    /// `B q_j` for the basis vectors `q_j` of `dom`, in `H` coordinates.
    pub b_column: ComplexMatrix,
    pub b0: ComplexMatrix,
    pub d_b0: ComplexMatrix,
    /// `K0 : cran D_{B0} → N` in (`dom`, `n_space`) coordinates.
    pub k0: ComplexMatrix,
    /// `D_{K0*}` on `N`.
    pub d_k0_star: ComplexMatrix,
    /// Orthonormal basis of `cran D_{K0*}` in `N` coordinates.
    pub defect_basis: ComplexMatrix,
    /// `(B_mu + B_M) / 2` on `H`.
    pub mid: ComplexMatrix,
    /// `P_N D_{K0*}` on the parameter coordinates, as a map into `H`.
    pub embed: ComplexMatrix,
}

impl HermitianContractionData {
    pub fn n_dim(&self) -> usize {
        self.n_space.dim()
    }

    pub fn dom_dim(&self) -> usize {
        self.dom.dim()
    }

    /// Dimension of the parameter space `cran D_{K0*}`.
    pub fn param_dim(&self) -> usize {
        self.defect_basis.ncols()
    }

    /// The extension is unique exactly when `D_{K0*} = 0`.
    pub fn has_unique_extension(&self) -> bool {
        self.param_dim() == 0
    }
}

/// Splits `B` against `H0 ⊕ N` and solves `K0 D_{B0} = P_N B`.
pub fn decompose(
    b_column: &ComplexMatrix,
    dom: &Subspace,
    tol: &Tolerance,
) -> Result<HermitianContractionData> {
    let n = dom.ambient_dim();
    if b_column.shape() != (n, dom.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "b_column must be {}x{}, got {}x{}",
            n,
            dom.dim(),
            b_column.nrows(),
            b_column.ncols()
        )));
    }
    let norm = op_norm(b_column);
    if norm > 1.0 + tol.eq_tol {
        return Err(Error::NotContraction { norm });
    }
    let q0 = dom.basis();
    let n_space = dom.complement();
    let qn = n_space.basis();
    let b0_raw = q0.adjoint() * b_column;
    if !is_hermitian(&b0_raw, tol) {
        return Err(Error::NotHermitianOnDomain {
            deviation: hermitian_deviation(&b0_raw),
        });
    }
    let b0 = crate::numcore::hermitian_part(&b0_raw);
    let b21 = qn.adjoint() * b_column;
    let d_b0 = defect(&b0, tol)?;
    let k0 = &b21 * pinv(&d_b0, tol);
    let residual = (&k0 * &d_b0 - &b21).norm();
    if residual > tol.eq_tol * b_column.norm().max(1.0) {
        return Err(Error::InconsistentFactorization { residual });
    }
    let d_k0_star = defect(&k0.adjoint(), tol)?;
    // Rank of D_{K0*} is read off I - K0 K0*: the square root would lift
    // round-off of size 1e-16 to 1e-8, far above the rank cut.
    let gram = identity(qn.ncols()) - &k0 * k0.adjoint();
    let defect_basis = range_basis(&gram, tol);
    let upper = &d_b0 * k0.adjoint();
    let mid_local = block2(
        &b0,
        &upper,
        &upper.adjoint(),
        &(-(&k0 * &b0 * k0.adjoint())),
    );
    let frame = join_columns(q0, qn);
    let mid = crate::numcore::hermitian_part(&(&frame * mid_local * frame.adjoint()));
    let embed = qn * &d_k0_star * &defect_basis;
    Ok(HermitianContractionData {
        ambient_dim: n,
        dom: dom.clone(),
        n_space: n_space.clone(),
        b_column: b_column.clone(),
        b0,
        d_b0,
        k0,
        d_k0_star,
        defect_basis,
        mid,
        embed,
    })
}

pub(crate) fn join_columns(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(a.nrows(), b.nrows());
    let mut out = zeros(a.nrows(), a.ncols() + b.ncols());
    out.columns_mut(0, a.ncols()).copy_from(a);
    out.columns_mut(a.ncols(), b.ncols()).copy_from(b);
    out
}

/// How an extension was parametrized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParameterOrigin {
    /// `X` on `cran D_{K0*}`.
    Defect,
    /// `Y` on `cran (B_M - B_mu)`.
    Interval,
}

#[derive(Debug, Clone)]
pub struct ScExtension {
    pub matrix: ComplexMatrix,
    pub parameter: ComplexMatrix,
    pub origin: ParameterOrigin,
}

fn check_parameter(x: &ComplexMatrix, dim: usize, tol: &Tolerance) -> Result<()> {
    if x.shape() != (dim, dim) {
        return Err(Error::ParameterWrongSpace {
            expected: dim,
            rows: x.nrows(),
            cols: x.ncols(),
        });
    }
    let norm = op_norm(x);
    if norm > 1.0 + tol.eq_tol {
        return Err(Error::ParameterNotContraction { norm });
    }
    Ok(())
}

/// The qsc-extension with parameter `X` (a contraction on `cran D_{K0*}`).
/// It is selfadjoint exactly when `X` is.
pub fn qsc_extension(
    data: &HermitianContractionData,
    x: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ScExtension> {
    check_parameter(x, data.param_dim(), tol)?;
    let e = &data.embed;
    Ok(ScExtension {
        matrix: &data.mid + e * x * e.adjoint(),
        parameter: x.clone(),
        origin: ParameterOrigin::Defect,
    })
}

/// `(B_mu, B_M)`, the extensions with `X = -I` and `X = I`.
pub fn extremes(data: &HermitianContractionData) -> (ComplexMatrix, ComplexMatrix) {
    let e = &data.embed;
    let spread = e * e.adjoint();
    (&data.mid - &spread, &data.mid + &spread)
}

/// Orthonormal basis of `cran (B_M - B_mu)`, the coordinates of `Y`.
pub fn interval_basis(
    b_mu: &ComplexMatrix,
    b_m: &ComplexMatrix,
    tol: &Tolerance,
) -> ComplexMatrix {
    range_basis(&(b_m - b_mu), tol)
}

/// `(B_M + B_mu)/2 + C^{1/2} Y C^{1/2} / 2` with `C = B_M - B_mu` and `Y`
/// given in the coordinates of [`interval_basis`].
pub fn interval_extension(
    b_mu: &ComplexMatrix,
    b_m: &ComplexMatrix,
    y: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ScExtension> {
    let spread = b_m - b_mu;
    let root = psd_sqrt(&spread, tol).map_err(|_| Error::OrderViolated {
        eigenvalue: crate::numcore::min_eigenvalue(&spread),
    })?;
    let qc = interval_basis(b_mu, b_m, tol);
    let dim = qc.ncols();
    if y.shape() != (dim, dim) {
        return Err(Error::ParameterWrongSpace {
            expected: dim,
            rows: y.nrows(),
            cols: y.ncols(),
        });
    }
    if !is_hermitian(y, tol) {
        return Err(Error::ParameterNotHermitianContraction {
            reason: format!("deviation from Hermitian {:.3e}", hermitian_deviation(y)),
        });
    }
    let norm = op_norm(y);
    if norm > 1.0 + tol.eq_tol {
        return Err(Error::ParameterNotHermitianContraction {
            reason: format!("norm {norm:.12}"),
        });
    }
    let half = c(0.5, 0.0);
    let matrix = (b_m + b_mu) * half + &root * &qc * y * qc.adjoint() * &root * half;
    Ok(ScExtension {
        matrix,
        parameter: y.clone(),
        origin: ParameterOrigin::Interval,
    })
}

/// The unitary `W` with `Y = W X W*` identifying the two parameter spaces.
pub fn parameter_bridge(data: &HermitianContractionData, tol: &Tolerance) -> ComplexMatrix {
    let (b_mu, b_m) = extremes(data);
    let qc = interval_basis(&b_mu, &b_m, tol);
    qc.adjoint() * data.n_space.basis() * &data.defect_basis
}

/// The two block forms of a selfadjoint contraction `X` on `H1 ⊕ H2`:
///
/// `X = [[X11, D_{X11} L*], [L D_{X11}, -L X11 L* + D_{L*} Y D_{L*}]]`
/// `  = [[-U X22 U* + D_{U*} V D_{U*}, U D_{X22}], [D_{X22} U*, X22]]`.
#[derive(Debug, Clone)]
pub struct BlockForms {
    pub h1_dim: usize,
    pub x11: ComplexMatrix,
    pub x22: ComplexMatrix,
    pub l: ComplexMatrix,
    pub y: ComplexMatrix,
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

pub fn block_forms(x: &ComplexMatrix, h1_dim: usize, tol: &Tolerance) -> Result<BlockForms> {
    if !x.is_square() || h1_dim > x.nrows() {
        return Err(Error::BadDims(format!(
            "cannot split a {}x{} operator at {h1_dim}",
            x.nrows(),
            x.ncols()
        )));
    }
    if !is_hermitian(x, tol) {
        return Err(Error::ParameterNotHermitianContraction {
            reason: format!("deviation from Hermitian {:.3e}", hermitian_deviation(x)),
        });
    }
    let norm = op_norm(x);
    if norm > 1.0 + tol.eq_tol {
        return Err(Error::ParameterNotContraction { norm });
    }
    let h2_dim = x.nrows() - h1_dim;
    let x11 = x.view((0, 0), (h1_dim, h1_dim)).into_owned();
    let x12 = x.view((0, h1_dim), (h1_dim, h2_dim)).into_owned();
    let x21 = x12.adjoint();
    let x22 = x.view((h1_dim, h1_dim), (h2_dim, h2_dim)).into_owned();

    let d11 = defect(&x11, tol)?;
    let l = &x21 * pinv(&d11, tol);
    let d_l_star = defect(&l.adjoint(), tol)?;
    let dl_pinv = pinv(&d_l_star, tol);
    let y = crate::numcore::hermitian_part(
        &(&dl_pinv * (&x22 + &l * &x11 * l.adjoint()) * &dl_pinv),
    );

    let d22 = defect(&x22, tol)?;
    let u = &x12 * pinv(&d22, tol);
    let d_u_star = defect(&u.adjoint(), tol)?;
    let du_pinv = pinv(&d_u_star, tol);
    let v = crate::numcore::hermitian_part(
        &(&du_pinv * (&x11 + &u * &x22 * u.adjoint()) * &du_pinv),
    );
    Ok(BlockForms {
        h1_dim,
        x11,
        x22,
        l,
        y,
        u,
        v,
    })
}

impl BlockForms {
    /// Reassembles `X` from `(X11, L, Y)`.
    pub fn assemble_first(&self, tol: &Tolerance) -> Result<ComplexMatrix> {
        let d11 = defect(&self.x11, tol)?;
        let d_l_star = defect(&self.l.adjoint(), tol)?;
        let off = &self.l * &d11;
        let corner = -(&self.l * &self.x11 * self.l.adjoint()) + &d_l_star * &self.y * &d_l_star;
        Ok(block2(&self.x11, &off.adjoint(), &off, &corner))
    }

    /// Reassembles `X` from `(X22, U, V)`.
    pub fn assemble_second(&self, tol: &Tolerance) -> Result<ComplexMatrix> {
        let d22 = defect(&self.x22, tol)?;
        let d_u_star = defect(&self.u.adjoint(), tol)?;
        let off = &self.u * &d22;
        let corner = -(&self.u * &self.x22 * self.u.adjoint()) + &d_u_star * &self.v * &d_u_star;
        Ok(block2(&corner, &off, &off.adjoint(), &self.x22))
    }
}

/// `|P_{D_{K0*}} - I_N|`: zero when `cran D_{K0*} = N`.
pub fn defect_covers_n(data: &HermitianContractionData, tol: &Tolerance) -> bool {
    let m = data.n_dim();
    let p = &data.defect_basis * data.defect_basis.adjoint();
    frob_dist(&p, &identity(m)) <= tol.eq_tol * (m as f64).max(1.0)
}

/// Basis of `N` complementing `cran D_{K0*}` inside `N`, in `H` coordinates.
pub fn defect_kernel_basis(data: &HermitianContractionData) -> ComplexMatrix {
    data.n_space.basis() * orth_complement(&data.defect_basis, data.n_dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{is_psd, real_diag, real_matrix};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn scalar(v: f64) -> ComplexMatrix {
        real_diag(&[v])
    }

    #[test]
    fn decompose_zero_column() {
        let dom = Subspace::coordinate(2, &[0]);
        let data = decompose(&zeros(2, 1), &dom, &tol()).unwrap();
        assert!(data.b0.norm() < 1e-14);
        assert!(frob_dist(&data.d_b0, &scalar(1.0)) < 1e-14);
        assert!(data.k0.norm() < 1e-14);
        assert_eq!(data.param_dim(), 1);
    }

    #[test]
    fn decompose_isometric_k0() {
        let s = 0.5f64.sqrt();
        let dom = Subspace::coordinate(2, &[0]);
        let data = decompose(&real_matrix(2, 1, &[s, s]), &dom, &tol()).unwrap();
        assert!((data.b0[(0, 0)].re - s).abs() < 1e-12);
        assert!((data.d_b0[(0, 0)].re - s).abs() < 1e-12);
        assert!((data.k0[(0, 0)].norm() - 1.0).abs() < 1e-12);
        assert!(data.has_unique_extension());
        let ext = qsc_extension(&data, &zeros(0, 0), &tol()).unwrap();
        let expect = real_matrix(2, 2, &[s, s, s, -s]);
        assert!(frob_dist(&ext.matrix, &expect) < 1e-12);
        let (mu, m) = extremes(&data);
        assert!(frob_dist(&mu, &expect) < 1e-12 && frob_dist(&m, &expect) < 1e-12);
    }

    #[test]
    fn decompose_zero_on_plane() {
        let dom = Subspace::coordinate(3, &[0, 1]);
        let data = decompose(&zeros(3, 2), &dom, &tol()).unwrap();
        assert_eq!(data.b0.shape(), (2, 2));
        assert_eq!(data.k0.shape(), (1, 2));
        let (mu, m) = extremes(&data);
        assert!(frob_dist(&mu, &real_diag(&[0.0, 0.0, -1.0])) < 1e-12);
        assert!(frob_dist(&m, &real_diag(&[0.0, 0.0, 1.0])) < 1e-12);
    }

    #[test]
    fn decompose_rejects_non_hermitian_and_large() {
        let dom = Subspace::coordinate(2, &[0, 1]);
        let b = real_matrix(2, 2, &[0.0, 0.5, 0.0, 0.0]);
        assert!(matches!(
            decompose(&b, &dom, &tol()),
            Err(Error::NotHermitianOnDomain { .. })
        ));
        let dom = Subspace::coordinate(2, &[0]);
        assert!(matches!(
            decompose(&real_matrix(2, 1, &[1.0, 1.0]), &dom, &tol()),
            Err(Error::NotContraction { .. })
        ));
    }

    #[test]
    fn qsc_scalar_examples() {
        let dom = Subspace::coordinate(2, &[0]);
        let data = decompose(&zeros(2, 1), &dom, &tol()).unwrap();
        let e = qsc_extension(&data, &scalar(0.0), &tol()).unwrap();
        assert!(e.matrix.norm() < 1e-14);
        let e = qsc_extension(&data, &scalar(1.0), &tol()).unwrap();
        assert!(frob_dist(&e.matrix, &real_diag(&[0.0, 1.0])) < 1e-14);
        let e = qsc_extension(&data, &scalar(-1.0), &tol()).unwrap();
        assert!(frob_dist(&e.matrix, &real_diag(&[0.0, -1.0])) < 1e-14);
        assert!(matches!(
            qsc_extension(&data, &scalar(1.5), &tol()),
            Err(Error::ParameterNotContraction { .. })
        ));
        assert!(matches!(
            qsc_extension(&data, &zeros(2, 2), &tol()),
            Err(Error::ParameterWrongSpace { .. })
        ));
    }

    #[test]
    fn interval_examples() {
        let dom = Subspace::coordinate(2, &[0]);
        let data = decompose(&zeros(2, 1), &dom, &tol()).unwrap();
        let (mu, m) = extremes(&data);
        let lo = interval_extension(&mu, &m, &scalar(-1.0), &tol()).unwrap();
        let hi = interval_extension(&mu, &m, &scalar(1.0), &tol()).unwrap();
        let mid = interval_extension(&mu, &m, &scalar(0.0), &tol()).unwrap();
        let half = interval_extension(&mu, &m, &scalar(0.5), &tol()).unwrap();
        assert!(frob_dist(&lo.matrix, &mu) < 1e-12);
        assert!(frob_dist(&hi.matrix, &m) < 1e-12);
        assert!(mid.matrix.norm() < 1e-12);
        assert!(frob_dist(&half.matrix, &real_diag(&[0.0, 0.5])) < 1e-12);
        let bad = real_matrix(1, 1, &[2.0]);
        assert!(matches!(
            interval_extension(&mu, &m, &bad, &tol()),
            Err(Error::ParameterNotHermitianContraction { .. })
        ));
    }

    #[test]
    fn extremes_are_ordered_and_short_to_zero() {
        let dom = Subspace::coordinate(3, &[0]);
        let b = real_matrix(3, 1, &[0.3, 0.4, -0.2]);
        let data = decompose(&b, &dom, &tol()).unwrap();
        let (mu, m) = extremes(&data);
        assert!(is_psd(&(&m - &mu), &tol()));
        let n = data.n_space.clone();
        let plus = crate::shorted::shorted(&(identity(3) + &mu), &n, &tol()).unwrap();
        let minus = crate::shorted::shorted(&(identity(3) - &m), &n, &tol()).unwrap();
        assert!(plus.value.norm() < 1e-8);
        assert!(minus.value.norm() < 1e-8);
    }

    #[test]
    fn block_forms_reassemble() {
        let x = real_matrix(
            3,
            3,
            &[0.2, 0.1, -0.3, 0.1, -0.4, 0.2, -0.3, 0.2, 0.1],
        );
        let forms = block_forms(&x, 1, &tol()).unwrap();
        assert!(frob_dist(&forms.assemble_first(&tol()).unwrap(), &x) < 1e-10);
        assert!(frob_dist(&forms.assemble_second(&tol()).unwrap(), &x) < 1e-10);
    }
}
