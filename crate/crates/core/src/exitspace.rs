//! Extensions with exit into `H ⊕ 𝓗`, the induced pair of extensions in `H`
//! and the special parameters built from a prescribed `(Z0, Z1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extensions::{qsc_extension, HermitianContractionData};
use crate::numcore::{
    block2, c, defect, direct_sum, frob_dist, hermitian_deviation, hermitian_part, identity,
    is_hermitian, op_norm, orth_complement, pinv, psd_sqrt, range_basis, range_meet_trivial,
    rank, zeros, ComplexMatrix, Subspace, Tolerance,
};
use crate::random::{instance_rng, isometry, unitary};
use crate::shorted::shorted;

/// A block contraction `X = [[X11, X12], [X21, X22]]` on `𝓚 ⊕ 𝓗`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitParameter {
    pub k_dim: usize,
    pub h_dim: usize,
    pub x11: ComplexMatrix,
    pub x12: ComplexMatrix,
    pub x21: ComplexMatrix,
    pub x22: ComplexMatrix,
}

impl ExitParameter {
    /// Selfadjoint parameter from its upper triangle; `X21 = X12*`.
    pub fn selfadjoint(
        x11: ComplexMatrix,
        x12: ComplexMatrix,
        x22: ComplexMatrix,
        tol: &Tolerance,
    ) -> Result<Self> {
        let k = x11.nrows();
        let h = x22.nrows();
        if !x11.is_square() || !x22.is_square() || x12.shape() != (k, h) {
            return Err(Error::BadDims(format!(
                "blocks {:?}, {:?}, {:?} do not form a square operator",
                x11.shape(),
                x12.shape(),
                x22.shape()
            )));
        }
        let x = Self {
            k_dim: k,
            h_dim: h,
            x21: x12.adjoint(),
            x11,
            x12,
            x22,
        };
        let full = x.matrix();
        if !is_hermitian(&full, tol) {
            return Err(Error::ParameterNotHermitianContraction {
                reason: format!("deviation from Hermitian {:.3e}", hermitian_deviation(&full)),
            });
        }
        x.check_contraction(tol)?;
        Ok(x)
    }

    /// Splits a contraction on `C^{k+h}` after the first `k_dim` coordinates.
    pub fn from_matrix(x: &ComplexMatrix, k_dim: usize, tol: &Tolerance) -> Result<Self> {
        if !x.is_square() || k_dim > x.nrows() {
            return Err(Error::BadDims(format!(
                "cannot split a {}x{} operator at {k_dim}",
                x.nrows(),
                x.ncols()
            )));
        }
        let h = x.nrows() - k_dim;
        let p = Self {
            k_dim,
            h_dim: h,
            x11: x.view((0, 0), (k_dim, k_dim)).into_owned(),
            x12: x.view((0, k_dim), (k_dim, h)).into_owned(),
            x21: x.view((k_dim, 0), (h, k_dim)).into_owned(),
            x22: x.view((k_dim, k_dim), (h, h)).into_owned(),
        };
        p.check_contraction(tol)?;
        Ok(p)
    }

    fn check_contraction(&self, tol: &Tolerance) -> Result<()> {
        let norm = op_norm(&self.matrix());
        if norm > 1.0 + tol.eq_tol {
            return Err(Error::ParameterNotContraction { norm });
        }
        Ok(())
    }

    pub fn matrix(&self) -> ComplexMatrix {
        block2(&self.x11, &self.x12, &self.x21, &self.x22)
    }

    pub fn is_selfadjoint(&self, tol: &Tolerance) -> bool {
        is_hermitian(&self.matrix(), tol)
    }
}

/// `Z0 = (I + X)_𝓚 - I` and `Z1 = I - (I - X)_𝓚`, both on `𝓚`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZPair {
    pub z0: ComplexMatrix,
    pub z1: ComplexMatrix,
}

/// The extension `B̃_X` of `B` acting in `H ⊕ 𝓗`.
pub fn exit_extension(
    data: &HermitianContractionData,
    x: &ExitParameter,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    let r = data.param_dim();
    if x.k_dim != r {
        return Err(Error::ParameterWrongSpace {
            expected: r,
            rows: x.k_dim,
            cols: x.k_dim,
        });
    }
    x.check_contraction(tol)?;
    let e = direct_sum(&data.embed, &identity(x.h_dim));
    Ok(direct_sum(&data.mid, &zeros(x.h_dim, x.h_dim)) + &e * x.matrix() * e.adjoint())
}

/// Schur complement of `s` onto the coordinates `start..start + len`.
pub fn short_to_block(
    s: &ComplexMatrix,
    start: usize,
    len: usize,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    let axes: Vec<usize> = (start..start + len).collect();
    let k = Subspace::coordinate(s.nrows(), &axes);
    Ok(shorted(s, &k, tol)?.schur_complement)
}

pub fn z_pair(x: &ExitParameter, tol: &Tolerance) -> Result<ZPair> {
    let full = x.matrix();
    let n = full.nrows();
    let k = x.k_dim;
    let plus = short_to_block(&(identity(n) + &full), 0, k, tol)?;
    let minus = short_to_block(&(identity(n) - &full), 0, k, tol)?;
    Ok(ZPair {
        z0: plus - identity(k),
        z1: identity(k) - minus,
    })
}

/// `(B̂0, B̂1)`: the qsc-extensions of `B` with parameters `Z0` and `Z1`.
pub fn induced_pair(
    data: &HermitianContractionData,
    x: &ExitParameter,
    tol: &Tolerance,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if x.k_dim != data.param_dim() {
        return Err(Error::ParameterWrongSpace {
            expected: data.param_dim(),
            rows: x.k_dim,
            cols: x.k_dim,
        });
    }
    let z = z_pair(x, tol)?;
    let b0 = qsc_extension(data, &hermitian_part(&z.z0), tol)?.matrix;
    let b1 = qsc_extension(data, &hermitian_part(&z.z1), tol)?.matrix;
    Ok((b0, b1))
}

/// Half the gap, `(Z1 - Z0)/2`, checked to be PSD.
fn half_gap(z: &ZPair, tol: &Tolerance) -> Result<ComplexMatrix> {
    let gap = hermitian_part(&((&z.z1 - &z.z0) * c(0.5, 0.0)));
    let lo = crate::numcore::min_eigenvalue(&gap);
    if lo < -tol.eq_tol {
        return Err(Error::OrderViolated { eigenvalue: 2.0 * lo });
    }
    Ok(gap)
}

/// Orthonormal basis of `cran (Z1 - Z0)`; the isometry `V` of
/// [`x_from_z_pair`] is given in these coordinates.
pub fn gap_basis(z: &ZPair, tol: &Tolerance) -> ComplexMatrix {
    range_basis(&(&z.z1 - &z.z0), tol)
}

/// An isometry from `cran (Z1 - Z0)` into `cran D_{X22}` (first principal
/// directions of `D_{X22}`).
pub fn default_isometry(z: &ZPair, x22: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let p = gap_basis(z, tol).ncols();
    let d = defect(x22, tol)?;
    let target = range_basis(&d, tol);
    if target.ncols() < p {
        return Err(Error::IsometryInfeasible {
            reason: format!(
                "cran(Z1 - Z0) has dimension {p} but cran D_X22 only {}",
                target.ncols()
            ),
        });
    }
    Ok(target.columns(0, p).into_owned())
}

/// All selfadjoint `X` on `𝓚 ⊕ 𝓗` with the prescribed `(Z0, Z1)`:
/// `X11 = (Z1+Z0)/2 - S 𝒱* X22 𝒱 S`, `X12 = S 𝒱* D_{X22}`, with
/// `S = ((Z1-Z0)/2)^{1/2}` and `𝒱 = V Q*` for the basis `Q` of
/// [`gap_basis`].
pub fn x_from_z_pair(
    z: &ZPair,
    x22: &ComplexMatrix,
    v: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ExitParameter> {
    let gap = half_gap(z, tol)?;
    let q = gap_basis(z, tol);
    let p = q.ncols();
    let h = x22.nrows();
    if h < p {
        return Err(Error::IsometryInfeasible {
            reason: format!("dim 𝓗 = {h} is smaller than dim cran(Z1 - Z0) = {p}"),
        });
    }
    if v.shape() != (h, p) {
        return Err(Error::IsometryInfeasible {
            reason: format!("V must be {h}x{p}, got {}x{}", v.nrows(), v.ncols()),
        });
    }
    let dev = frob_dist(&(v.adjoint() * v), &identity(p));
    if dev > tol.eq_tol * (p as f64).max(1.0) {
        return Err(Error::IsometryInfeasible {
            reason: format!("V*V deviates from I by {dev:.3e}"),
        });
    }
    let d = defect(x22, tol)?;
    let leak = (&d * pinv(&d, tol) * v - v).norm();
    if leak > tol.eq_tol * (p as f64).max(1.0) {
        return Err(Error::IsometryInfeasible {
            reason: format!("ran V is not inside cran D_X22 (residual {leak:.3e})"),
        });
    }
    let s = psd_sqrt(&gap, tol)?;
    let vv = v * q.adjoint();
    let centre = hermitian_part(&((&z.z1 + &z.z0) * c(0.5, 0.0)));
    let x11 = hermitian_part(&(centre - &s * vv.adjoint() * x22 * &vv * &s));
    let x12 = &s * vv.adjoint() * &d;
    ExitParameter::selfadjoint(x11, x12, hermitian_part(x22), tol)
}

/// `X = [[(Z1+Z0)/2, S 𝒱*], [𝒱 S, 0]]` with `S = ((Z1-Z0)/2)^{1/2}` and a
/// unitary `𝒱`.
pub fn construct_from_z_targets(
    z: &ZPair,
    v_unitary: &ComplexMatrix,
    tol: &Tolerance,
) -> Result<ExitParameter> {
    let k = z.z0.nrows();
    if v_unitary.shape() != (k, k)
        || frob_dist(&(v_unitary.adjoint() * v_unitary), &identity(k))
            > tol.eq_tol * (k as f64).max(1.0)
    {
        return Err(Error::IsometryInfeasible {
            reason: "𝒱 must be a unitary of the size of 𝓚".into(),
        });
    }
    let s = psd_sqrt(&half_gap(z, tol)?, tol)?;
    let centre = hermitian_part(&((&z.z1 + &z.z0) * c(0.5, 0.0)));
    ExitParameter::selfadjoint(centre, &s * v_unitary.adjoint(), zeros(k, k), tol)
}

/// Trivial-intersection tests for `(Z0, Z1)`:
/// `ran (Z1-Z0)^{1/2} ∩ ran (I+Z0)^{1/2}` and
/// `ran (Z1-Z0)^{1/2} ∩ ran (I-Z1)^{1/2}`.
///
/// In finite dimensions `ran S^{1/2} = ran S`; ranges are read from the PSD
/// matrices themselves, so eigenvalues at round-off level are not lifted to
/// `1e-8` by a square root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeConditions {
    pub lower_trivial: bool,
    pub upper_trivial: bool,
    pub lower_cosine: f64,
    pub upper_cosine: f64,
}

pub fn range_conditions(z: &ZPair, tol: &Tolerance) -> RangeConditions {
    let k = z.z0.nrows();
    let gap = hermitian_part(&(&z.z1 - &z.z0));
    let lower = hermitian_part(&(identity(k) + &z.z0));
    let upper = hermitian_part(&(identity(k) - &z.z1));
    let cos = |a: &ComplexMatrix, b: &ComplexMatrix| {
        crate::numcore::principal_cosines(&range_basis(a, tol), &range_basis(b, tol))
            .first()
            .copied()
            .unwrap_or(0.0)
    };
    RangeConditions {
        lower_trivial: range_meet_trivial(&gap, &lower, tol),
        upper_trivial: range_meet_trivial(&gap, &upper, tol),
        lower_cosine: cos(&gap, &lower),
        upper_cosine: cos(&gap, &upper),
    }
}

/// `|(I + X)_𝓗|` and `|(I - X)_𝓗|`.
pub fn exit_shortings(x: &ExitParameter, tol: &Tolerance) -> Result<(f64, f64)> {
    let full = x.matrix();
    let n = full.nrows();
    let plus = short_to_block(&(identity(n) + &full), x.k_dim, x.h_dim, tol)?;
    let minus = short_to_block(&(identity(n) - &full), x.k_dim, x.h_dim, tol)?;
    Ok((op_norm(&plus), op_norm(&minus)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionMode {
    /// The full property set: `(I ± X)_𝓗 = 0`, `|X22| < 1`, `ker X12* = {0}`,
    /// `Z0 ≠ -I`, `Z1 ≠ I`, `ker (Z1 - Z0) = {0}`.
    FullPart1,
    /// The two-step construction carried out with finite-dimensional
    /// substitutes for the conditions that cannot hold.
    FiniteAdaptation,
}

/// What the constructed `X` satisfies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub x22_norm: f64,
    pub plus_shorting_norm: f64,
    pub minus_shorting_norm: f64,
    pub ker_x12_trivial: bool,
    pub ker_x12_star_trivial: bool,
    pub z0_is_minus_identity: bool,
    pub z1_is_identity: bool,
    pub ker_gap_trivial: bool,
    pub ranges: RangeConditions,
    pub unit_singular_values: usize,
    pub l0_dim: usize,
    pub l0_attempts: usize,
}

#[derive(Debug, Clone)]
pub struct SpecialConstruction {
    /// `X11` on `Ω0 ⊕ M0`.
    pub x11: ComplexMatrix,
    pub m_op: ComplexMatrix,
    pub j0: ComplexMatrix,
    pub x: ExitParameter,
    pub report: ConstructionReport,
}

const L0_ATTEMPTS: usize = 64;

/// Two-step construction of a selfadjoint `X` on `𝓚 ⊕ 𝓗`,
/// `𝓚 = Ω0 ⊕ M0`, starting from a Hermitian strict contraction `A` on `Ω0`.
///
/// Step 1 builds
/// `X11 = [[A, D_A 𝓜*], [𝓜 D_A, -𝓜 A 𝓜* + D_{𝓜*} J0 D_{𝓜*}]]` with
/// `J0 = 2 P_{L0} - I` and `L0 ⊂ M0` meeting `ran D_{𝓜*}` and its own
/// complement's intersection with it trivially. Step 2 sets
/// `X = [[X11, D_{X11} L*], [L D_{X11}, -L X11 L*]]` for a co-isometry `L`.
///
/// [`ConstructionMode::FullPart1`] always fails in finite dimensions with a
/// dimension-counting diagnostic. [`ConstructionMode::FiniteAdaptation`]
/// gives `𝓜` exactly `ceil(dim M0 / 2)` unit singular values (so that
/// `ran D_{𝓜*} ≠ M0` and `L0` can exist) and takes `ran L* = cran D_{X11}`,
/// which has dimension at most `dim Ω0`.
pub fn construct_special_x(
    dim_omega0: usize,
    dim_m0: usize,
    a_op: &ComplexMatrix,
    seed: u64,
    mode: ConstructionMode,
    tol: &Tolerance,
) -> Result<SpecialConstruction> {
    let (a, b) = (dim_omega0, dim_m0);
    if a == 0 || b == 0 {
        return Err(Error::BadDims(format!(
            "dim Ω0 and dim M0 must be at least 1, got {a} and {b}"
        )));
    }
    if a_op.shape() != (a, a) {
        return Err(Error::ParameterWrongSpace {
            expected: a,
            rows: a_op.nrows(),
            cols: a_op.ncols(),
        });
    }
    if !is_hermitian(a_op, tol) || op_norm(a_op) >= 1.0 {
        return Err(Error::ParameterNotHermitianContraction {
            reason: format!("A must be Hermitian with |A| < 1 (|A| = {:.6})", op_norm(a_op)),
        });
    }
    let k = a + b;
    if mode == ConstructionMode::FullPart1 {
        return Err(Error::InfeasibleInFiniteDim {
            diagnostic: format!(
                "dim 𝓚 = {k} is finite: ker(Z1 - Z0) = {{0}} forces ran(Z1 - Z0)^(1/2) = 𝓚, so \
                 the trivial intersection with ran(I + Z0)^(1/2) forces I + Z0 = 0, i.e. Z0 = -I, \
                 contradicting Z0 ≠ -I; moreover ran L* = Ω0 gives dim 𝓗 = {a} < dim 𝓚 = {k}, so \
                 X12* : 𝓚 → 𝓗 cannot be injective"
            ),
        });
    }

    let s = b.div_ceil(2);
    if s > a.min(b) {
        return Err(Error::InfeasibleInFiniteDim {
            diagnostic: format!(
                "𝓜 : Ω0 → M0 needs {s} unit singular values to leave room for L0 in M0 \
                 (dim M0 = {b}), but has at most min({a}, {b}) = {}",
                a.min(b)
            ),
        });
    }
    let mut rng = instance_rng(seed, 0);
    let u_m = unitary(&mut rng, b);
    let v_o = unitary(&mut rng, a);
    let mut sigma = zeros(b, a);
    for i in 0..a.min(b) {
        let value = if i < s {
            1.0
        } else {
            rand::Rng::random_range(&mut rng, 0.2..0.9)
        };
        sigma[(i, i)] = c(value, 0.0);
    }
    let m_op = &u_m * sigma * v_o.adjoint();
    let d_m_star = defect(&m_op.adjoint(), tol)?;
    let ran_d = range_basis(&(identity(b) - &m_op * m_op.adjoint()), tol);

    let l0_dim = s;
    let mut attempts = 0;
    let mut l0 = None;
    while attempts < L0_ATTEMPTS {
        attempts += 1;
        let cand = isometry(&mut rng, b, l0_dim);
        let perp = orth_complement(&cand, b);
        if range_meet_trivial(&cand, &ran_d, tol) && range_meet_trivial(&perp, &ran_d, tol) {
            l0 = Some(cand);
            break;
        }
    }
    let l0 = l0.ok_or_else(|| Error::InfeasibleInFiniteDim {
        diagnostic: format!(
            "no subspace L0 of dimension {l0_dim} in M0 (dim {b}) with L0 and its complement \
             both meeting ran D_𝓜* (dim {}) trivially after {L0_ATTEMPTS} draws",
            ran_d.ncols()
        ),
    })?;
    let j0 = &l0 * l0.adjoint() * c(2.0, 0.0) - identity(b);

    let d_a = defect(a_op, tol)?;
    let upper = &d_a * m_op.adjoint();
    let corner = -(&m_op * a_op * m_op.adjoint()) + &d_m_star * &j0 * &d_m_star;
    let x11 = hermitian_part(&block2(a_op, &upper, &upper.adjoint(), &corner));

    let d_x11 = defect(&x11, tol)?;
    let cran = range_basis(&(identity(k) - &x11 * &x11), tol);
    let h = cran.ncols();
    let l_star = &cran * unitary(&mut rng, h);
    let l = l_star.adjoint();
    let off = &l * &d_x11;
    let x22 = -(&l * &x11 * &l_star);
    let x = ExitParameter::selfadjoint(x11.clone(), off.adjoint(), hermitian_part(&x22), tol)?;

    let report = build_report(&x, s, l0_dim, attempts, tol)?;
    Ok(SpecialConstruction {
        x11,
        m_op,
        j0,
        x,
        report,
    })
}

fn build_report(
    x: &ExitParameter,
    unit_singular_values: usize,
    l0_dim: usize,
    l0_attempts: usize,
    tol: &Tolerance,
) -> Result<ConstructionReport> {
    let (plus, minus) = exit_shortings(x, tol)?;
    let z = z_pair(x, tol)?;
    let k = x.k_dim;
    let close = |a: &ComplexMatrix, b: &ComplexMatrix| {
        frob_dist(a, b) <= tol.eq_tol * (k as f64).max(1.0)
    };
    Ok(ConstructionReport {
        x22_norm: op_norm(&x.x22),
        plus_shorting_norm: plus,
        minus_shorting_norm: minus,
        ker_x12_trivial: rank(&x.x12, tol) == x.h_dim,
        ker_x12_star_trivial: rank(&x.x12, tol) == x.k_dim,
        z0_is_minus_identity: close(&z.z0, &(-identity(k))),
        z1_is_identity: close(&z.z1, &identity(k)),
        ker_gap_trivial: rank(&(&z.z1 - &z.z0), tol) == k,
        ranges: range_conditions(&z, tol),
        unit_singular_values,
        l0_dim,
        l0_attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extensions::{decompose, extremes};
    use crate::numcore::{real_diag, real_matrix};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn swap() -> ExitParameter {
        ExitParameter::selfadjoint(real_diag(&[0.0]), real_diag(&[1.0]), real_diag(&[0.0]), &tol())
            .unwrap()
    }

    fn e1_zero() -> HermitianContractionData {
        decompose(&zeros(2, 1), &Subspace::coordinate(2, &[0]), &tol()).unwrap()
    }

    #[test]
    fn exit_extension_examples() {
        let data = e1_zero();
        let zero = ExitParameter::from_matrix(&zeros(2, 2), 1, &tol()).unwrap();
        assert!(exit_extension(&data, &zero, &tol()).unwrap().norm() < 1e-14);
        let bt = exit_extension(&data, &swap(), &tol()).unwrap();
        let expect = real_matrix(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0]);
        assert!(frob_dist(&bt, &expect) < 1e-14);
        let id = ExitParameter::from_matrix(&identity(2), 1, &tol()).unwrap();
        let bt = exit_extension(&data, &id, &tol()).unwrap();
        let (_, b_m) = extremes(&data);
        assert!(frob_dist(&bt, &direct_sum(&b_m, &identity(1))) < 1e-14);
    }

    #[test]
    fn z_pair_examples() {
        let z = z_pair(&swap(), &tol()).unwrap();
        assert!((z.z0[(0, 0)].re + 1.0).abs() < 1e-12);
        assert!((z.z1[(0, 0)].re - 1.0).abs() < 1e-12);
        let zero = ExitParameter::from_matrix(&zeros(2, 2), 1, &tol()).unwrap();
        let z = z_pair(&zero, &tol()).unwrap();
        assert!(z.z0.norm() < 1e-12 && z.z1.norm() < 1e-12);
        let diag = ExitParameter::from_matrix(&real_diag(&[0.3, -0.6]), 1, &tol()).unwrap();
        let z = z_pair(&diag, &tol()).unwrap();
        assert!((z.z0[(0, 0)].re - 0.3).abs() < 1e-12);
        assert!((z.z1[(0, 0)].re - 0.3).abs() < 1e-12);
    }

    #[test]
    fn induced_pair_examples() {
        let data = e1_zero();
        let (b0, b1) = induced_pair(&data, &swap(), &tol()).unwrap();
        assert!(frob_dist(&b0, &real_diag(&[0.0, -1.0])) < 1e-12);
        assert!(frob_dist(&b1, &real_diag(&[0.0, 1.0])) < 1e-12);
        let diag = ExitParameter::from_matrix(&real_diag(&[0.3, -0.6]), 1, &tol()).unwrap();
        let (b0, b1) = induced_pair(&data, &diag, &tol()).unwrap();
        let expect = qsc_extension(&data, &real_diag(&[0.3]), &tol()).unwrap().matrix;
        assert!(frob_dist(&b0, &expect) < 1e-12 && frob_dist(&b1, &expect) < 1e-12);
    }

    #[test]
    fn x_from_z_pair_examples() {
        let z = ZPair {
            z0: real_diag(&[-1.0]),
            z1: real_diag(&[1.0]),
        };
        let x = x_from_z_pair(&z, &real_diag(&[0.0]), &real_diag(&[1.0]), &tol()).unwrap();
        assert!(frob_dist(&x.matrix(), &swap().matrix()) < 1e-12);

        let zero = ZPair {
            z0: real_diag(&[0.0]),
            z1: real_diag(&[0.0]),
        };
        let x = x_from_z_pair(&zero, &real_diag(&[0.0]), &zeros(1, 0), &tol()).unwrap();
        assert!(x.matrix().norm() < 1e-12);

        let x22 = real_diag(&[0.5]);
        let v = default_isometry(&z, &x22, &tol()).unwrap();
        let x = x_from_z_pair(&z, &x22, &v, &tol()).unwrap();
        let back = z_pair(&x, &tol()).unwrap();
        assert!(frob_dist(&back.z0, &z.z0) < 1e-10);
        assert!(frob_dist(&back.z1, &z.z1) < 1e-10);
    }

    #[test]
    fn x_from_z_pair_dimension_deficit() {
        let z = ZPair {
            z0: -identity(2),
            z1: identity(2),
        };
        assert!(matches!(
            x_from_z_pair(&z, &real_diag(&[0.0]), &zeros(1, 2), &tol()),
            Err(Error::IsometryInfeasible { .. })
        ));
    }

    #[test]
    fn full_part_one_is_infeasible() {
        let a = real_diag(&[0.0]);
        let err = construct_special_x(1, 1, &a, 0, ConstructionMode::FullPart1, &tol());
        assert!(matches!(err, Err(Error::InfeasibleInFiniteDim { .. })));
    }

    #[test]
    fn finite_adaptation_one_dimensional() {
        let a = real_diag(&[0.0]);
        let built =
            construct_special_x(1, 1, &a, 5, ConstructionMode::FiniteAdaptation, &tol()).unwrap();
        assert_eq!(built.report.unit_singular_values, 1);
        assert!((op_norm(&built.m_op) - 1.0).abs() < 1e-12);
        assert!(built.report.x22_norm < 1.0);
    }

    #[test]
    fn part_two_with_extreme_targets() {
        let z = ZPair {
            z0: -identity(2),
            z1: identity(2),
        };
        let v = unitary(&mut instance_rng(9, 0), 2);
        let x = construct_from_z_targets(&z, &v, &tol()).unwrap();
        let (plus, minus) = exit_shortings(&x, &tol()).unwrap();
        assert!(plus < 1e-10 && minus < 1e-10);
    }
}
