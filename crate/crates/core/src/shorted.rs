//! Kreĭn shorted operators and parallel sums.

use crate::error::{Error, Result};
use crate::numcore::{
    hermitian_part, is_psd, min_eigenvalue, pinv, psd_pinv_sqrt, psd_sqrt, ComplexMatrix, ComplexVector,
    Subspace, Tolerance,
};

/// The shorted operator `S_K` together with its Schur-complement block.
#[derive(Debug, Clone)]
pub struct ShortedResult {
    /// `S_K` on the whole space.
    pub value: ComplexMatrix,
    /// The `K`-block in the coordinates of `k_basis`.
    pub schur_complement: ComplexMatrix,
    pub k_basis: ComplexMatrix,
}

fn check_psd(s: &ComplexMatrix, what: &str, tol: &Tolerance) -> Result<()> {
    if !s.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            s.nrows(),
            s.ncols()
        )));
    }
    if !is_psd(s, tol) {
        return Err(Error::NotPsd {
            reason: format!(
                "{what} has smallest eigenvalue {:.3e}",
                min_eigenvalue(&hermitian_part(s))
            ),
        });
    }
    Ok(())
}

/// `S_K = [S11 - (S22^{(-1/2)} S12*)* (S22^{(-1/2)} S12*)] ⊕ 0` in the split
/// `K ⊕ K^⊥`.
pub fn shorted(s: &ComplexMatrix, k: &Subspace, tol: &Tolerance) -> Result<ShortedResult> {
    check_psd(s, "S", tol)?;
    if k.ambient_dim() != s.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "subspace lives in C^{}, operator acts on C^{}",
            k.ambient_dim(),
            s.nrows()
        )));
    }
    let s = hermitian_part(s);
    let qk = k.basis();
    let qp = k.complement();
    let qp = qp.basis();
    let s11 = qk.adjoint() * &s * qk;
    let s12 = qk.adjoint() * &s * qp;
    let s22 = qp.adjoint() * &s * qp;
    let inv_root = psd_pinv_sqrt(&s22, tol).map_err(|e| Error::NotPsd {
        reason: format!("S22: {e}"),
    })?;
    let w = &inv_root * s12.adjoint();
    // For PSD S the part of S12* outside ran S22 is at most
    // (|S| * dropped eigenvalue)^{1/2}; anything larger means S is not PSD.
    let root = psd_sqrt(&s22, tol)?;
    let residual = (&root * &w - s12.adjoint()).norm();
    if residual > tol.eq_tol.sqrt() * s.norm().max(1.0) {
        return Err(Error::NotPsd {
            reason: format!("ran S12* is not inside ran S22^(1/2) (residual {residual:.3e})"),
        });
    }
    let schur = hermitian_part(&(s11 - w.adjoint() * w));
    Ok(ShortedResult {
        value: qk * &schur * qk.adjoint(),
        schur_complement: schur,
        k_basis: qk.clone(),
    })
}

/// `inf_{φ ∈ K^⊥} (S(f + φ), f + φ)`, evaluated in closed form as
/// `((S - S P (P S P)^+ P S) f, f)` with `P = P_{K^⊥}`.
pub fn shorted_infimum_oracle(
    s: &ComplexMatrix,
    k: &Subspace,
    f: &ComplexVector,
    tol: &Tolerance,
) -> Result<f64> {
    check_psd(s, "S", tol)?;
    let p = k.complement().projector();
    let psp = &p * s * &p;
    let reduced = s - s * &p * pinv(&psp, tol) * &p * s;
    Ok((f.adjoint() * reduced * f)[(0, 0)].re)
}

/// `F : G = F (F + G)^+ G`.
pub fn parallel_sum(f: &ComplexMatrix, g: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    check_psd(f, "F", tol)?;
    check_psd(g, "G", tol)?;
    if f.shape() != g.shape() {
        return Err(Error::DimensionMismatch("F and G differ in size".into()));
    }
    Ok(hermitian_part(&(f * pinv(&(f + g), tol) * g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{c, frob_dist, identity, range_meet_trivial, real_diag, real_matrix};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn e(n: usize, i: usize) -> ComplexVector {
        let mut v = ComplexVector::zeros(n);
        v[i] = c(1.0, 0.0);
        v
    }

    #[test]
    fn shorted_examples() {
        let k = Subspace::coordinate(2, &[0]);
        let r = shorted(&identity(2), &k, &tol()).unwrap();
        assert!(frob_dist(&r.value, &real_diag(&[1.0, 0.0])) < 1e-12);
        let s = real_matrix(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let r = shorted(&s, &k, &tol()).unwrap();
        assert!(frob_dist(&r.value, &real_diag(&[1.0, 0.0])) < 1e-12);
        let s = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let r = shorted(&s, &k, &tol()).unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn shorted_rejects_indefinite() {
        let k = Subspace::coordinate(2, &[0]);
        assert!(matches!(
            shorted(&real_diag(&[1.0, -1.0]), &k, &tol()),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn infimum_examples() {
        let k = Subspace::coordinate(2, &[0]);
        let v = shorted_infimum_oracle(&identity(2), &k, &e(2, 0), &tol()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v = shorted_infimum_oracle(&identity(2), &k, &e(2, 1), &tol()).unwrap();
        assert!(v.abs() < 1e-12);
        let s = real_matrix(2, 2, &[2.0, 1.0, 1.0, 1.0]);
        let v = shorted_infimum_oracle(&s, &k, &e(2, 0), &tol()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_sum_examples() {
        let p = parallel_sum(&identity(2), &identity(2), &tol()).unwrap();
        assert!(frob_dist(&p, &(identity(2) * c(0.5, 0.0))) < 1e-12);
        let f = real_diag(&[1.0, 0.0]);
        let g = real_diag(&[0.0, 1.0]);
        assert!(parallel_sum(&f, &g, &tol()).unwrap().norm() < 1e-12);
        assert!(range_meet_trivial(&f, &g, &tol()));
        let g = real_matrix(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let p = parallel_sum(&f, &g, &tol()).unwrap();
        let expect = &f * (&f + &g).try_inverse().unwrap() * &g;
        assert!(frob_dist(&p, &expect) < 1e-12);
        // span{e1} and span{(1,1)} meet trivially, so the sum vanishes.
        assert!(p.norm() < 1e-12);
        assert!(range_meet_trivial(&f, &g, &tol()));
    }
}
