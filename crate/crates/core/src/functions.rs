//! Operator functions: transfer functions of passive systems, the
//! Schur-Frobenius resolvent, compressed resolvents, `Φ_X` and `B̂_X`, the
//! Q-function pairs with their limit probes, the Kreĭn-Ovcharenko formula
//! for canonical resolvents and the family `N(λ)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exitspace::{induced_pair, ExitParameter};
use crate::extensions::HermitianContractionData;
use crate::numcore::{
    block2, c, checked_inverse, defect, hermitian_part, identity, is_hermitian, is_psd,
    max_eigenvalue, min_eigenvalue, op_norm, pinv, psd_sqrt, range_basis, zeros, ComplexMatrix,
    ComplexVector, Tolerance, C64,
};
use crate::relations::{region_classify, LinearRelation, Region};

/// A discrete-time system with block operator `U = [[D, C], [B, A]]` on
/// `input ⊕ state → output ⊕ state`.
#[derive(Debug, Clone, PartialEq)]
pub struct PassiveSystem {
    pub in_dim: usize,
    pub out_dim: usize,
    pub state_dim: usize,
    pub d: ComplexMatrix,
    pub c: ComplexMatrix,
    pub b: ComplexMatrix,
    pub a: ComplexMatrix,
}

impl PassiveSystem {
    /// Checks block shapes and passivity (`|U| <= 1`).
    pub fn new(
        d: ComplexMatrix,
        c_: ComplexMatrix,
        b: ComplexMatrix,
        a: ComplexMatrix,
        tol: &Tolerance,
    ) -> Result<Self> {
        let sys = Self::unchecked(d, c_, b, a)?;
        let norm = op_norm(&sys.block());
        if norm > 1.0 + tol.eq_tol {
            return Err(Error::NotContraction { norm });
        }
        Ok(sys)
    }

    fn unchecked(
        d: ComplexMatrix,
        c_: ComplexMatrix,
        b: ComplexMatrix,
        a: ComplexMatrix,
    ) -> Result<Self> {
        let (out_dim, in_dim) = d.shape();
        let state_dim = a.nrows();
        if !a.is_square()
            || c_.shape() != (out_dim, state_dim)
            || b.shape() != (state_dim, in_dim)
        {
            return Err(Error::BadDims(format!(
                "blocks D {:?}, C {:?}, B {:?}, A {:?} are inconsistent",
                d.shape(),
                c_.shape(),
                b.shape(),
                a.shape()
            )));
        }
        Ok(Self {
            in_dim,
            out_dim,
            state_dim,
            d,
            c: c_,
            b,
            a,
        })
    }

    /// Splits a square operator on `C^{io} ⊕ C^{state}`.
    pub fn from_block(u: &ComplexMatrix, io_dim: usize, tol: &Tolerance) -> Result<Self> {
        if !u.is_square() || io_dim > u.nrows() {
            return Err(Error::BadDims(format!(
                "cannot split a {}x{} operator at {io_dim}",
                u.nrows(),
                u.ncols()
            )));
        }
        let s = u.nrows() - io_dim;
        Self::new(
            u.view((0, 0), (io_dim, io_dim)).into_owned(),
            u.view((0, io_dim), (io_dim, s)).into_owned(),
            u.view((io_dim, 0), (s, io_dim)).into_owned(),
            u.view((io_dim, io_dim), (s, s)).into_owned(),
            tol,
        )
    }

    /// `Σ_X = {B̃; 𝓗, 𝓗, H}`: input/output in the exit space, state `H`.
    /// `h_space_dim` is `dim H`, the leading block of `bt`.
    pub fn exit_side(bt: &ComplexMatrix, h_space_dim: usize, tol: &Tolerance) -> Result<Self> {
        let n = h_space_dim;
        let h = bt.nrows() - n;
        Self::new(
            bt.view((n, n), (h, h)).into_owned(),
            bt.view((n, 0), (h, n)).into_owned(),
            bt.view((0, n), (n, h)).into_owned(),
            bt.view((0, 0), (n, n)).into_owned(),
            tol,
        )
    }

    /// `T_X = {B̃; H, H, 𝓗}`: input/output `H`, state in the exit space.
    pub fn inner_side(bt: &ComplexMatrix, h_space_dim: usize, tol: &Tolerance) -> Result<Self> {
        Self::from_block(bt, h_space_dim, tol)
    }

    pub fn block(&self) -> ComplexMatrix {
        block2(&self.d, &self.c, &self.b, &self.a)
    }

    pub fn is_selfadjoint(&self, tol: &Tolerance) -> bool {
        self.in_dim == self.out_dim && is_hermitian(&self.block(), tol)
    }
}

/// `D + z C (I - zA)^{-1} B`.
pub fn transfer(sys: &PassiveSystem, z: C64, tol: &Tolerance) -> Result<ComplexMatrix> {
    let s = sys.state_dim;
    if s == 0 {
        return Ok(sys.d.clone());
    }
    let inv = checked_inverse(&(identity(s) - &sys.a * z), tol, z)?;
    Ok(&sys.d + &sys.c * inv * &sys.b * z)
}

/// Block resolvent `(U - λ)^{-1}` assembled from `V(λ) = λ - D + C R_A(λ) B`.
#[derive(Debug, Clone)]
pub struct SchurFrobenius {
    pub v: ComplexMatrix,
    pub top_left: ComplexMatrix,
    pub top_right: ComplexMatrix,
    pub bottom_left: ComplexMatrix,
    pub bottom_right: ComplexMatrix,
}

impl SchurFrobenius {
    pub fn full(&self) -> ComplexMatrix {
        block2(
            &self.top_left,
            &self.top_right,
            &self.bottom_left,
            &self.bottom_right,
        )
    }
}

pub fn schur_frobenius(sys: &PassiveSystem, lambda: C64, tol: &Tolerance) -> Result<SchurFrobenius> {
    if sys.in_dim != sys.out_dim {
        return Err(Error::BadDims("the resolvent needs a square block operator".into()));
    }
    let s = sys.state_dim;
    let r_a = checked_inverse(&(&sys.a - identity(s) * lambda), tol, lambda)?;
    let v = identity(sys.in_dim) * lambda - &sys.d + &sys.c * &r_a * &sys.b;
    let v_inv = checked_inverse(&v, tol, lambda)?;
    let top_right = &v_inv * &sys.c * &r_a;
    let bottom_left = &r_a * &sys.b * &v_inv;
    let bottom_right = &r_a * (identity(s) - &sys.b * &v_inv * &sys.c * &r_a);
    Ok(SchurFrobenius {
        top_left: -v_inv,
        v,
        top_right,
        bottom_left,
        bottom_right,
    })
}

/// Which diagonal block a compressed resolvent is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// The leading `dim H` coordinates.
    H,
    /// The trailing exit-space coordinates.
    Exit,
}

/// `P (z B̃ - I)^{-1} ↾` on the chosen side of `H ⊕ 𝓗`.
pub fn compressed_resolvent(
    bt: &ComplexMatrix,
    h_space_dim: usize,
    side: Side,
    z: C64,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    let total = bt.nrows();
    let inv = checked_inverse(&(bt * z - identity(total)), tol, z)?;
    let (start, len) = match side {
        Side::H => (0, h_space_dim),
        Side::Exit => (h_space_dim, total - h_space_dim),
    };
    Ok(inv.view((start, start), (len, len)).into_owned())
}

/// `Φ_X(z) = X11 + z X12 (I - z X22)^{-1} X21`.
pub fn phi(x: &ExitParameter, z: C64, tol: &Tolerance) -> Result<ComplexMatrix> {
    let sys = PassiveSystem::unchecked(x.x11.clone(), x.x12.clone(), x.x21.clone(), x.x22.clone())?;
    transfer(&sys, z, tol)
}

/// `B̂_X(z) = (B_mu + B_M)/2 + (B_M - B_mu)^{1/2} Φ_X(z) (B_M - B_mu)^{1/2} / 2`.
pub fn b_hat(
    data: &HermitianContractionData,
    x: &ExitParameter,
    z: C64,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    if x.k_dim != data.param_dim() {
        return Err(Error::ParameterWrongSpace {
            expected: data.param_dim(),
            rows: x.k_dim,
            cols: x.k_dim,
        });
    }
    let e = &data.embed;
    Ok(&data.mid + e * phi(x, z, tol)? * e.adjoint())
}

/// `Φ_X(±1)` by Richardson extrapolation from `±(1 - 1e-5)` and
/// `±(1 - 1e-6)`: `(10 f(1e-6) - f(1e-5)) / 9` cancels the linear term.
pub fn phi_limit_extrapolated(x: &ExitParameter, sign: f64, tol: &Tolerance) -> Result<ComplexMatrix> {
    let near = phi(x, c(sign * (1.0 - 1e-6), 0.0), tol)?;
    let far = phi(x, c(sign * (1.0 - 1e-5), 0.0), tol)?;
    Ok((near * c(10.0, 0.0) - far) * c(1.0 / 9.0, 0.0))
}

/// `B̂_X(±1)` as the strong limit: `(B̂0, B̂1)` from the shorted operators.
pub fn b_hat_limits(
    data: &HermitianContractionData,
    x: &ExitParameter,
    tol: &Tolerance,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    induced_pair(data, x, tol)
}

fn check_order(b0: &ComplexMatrix, b1: &ComplexMatrix, tol: &Tolerance) -> Result<ComplexMatrix> {
    let gap = hermitian_part(&(b1 - b0));
    let lo = min_eigenvalue(&gap);
    if lo < -tol.eq_tol {
        return Err(Error::OrderViolated { eigenvalue: lo });
    }
    psd_sqrt(&gap, tol)
}

fn check_off_interval(xi: C64, tol: &Tolerance) -> Result<()> {
    if xi.im.abs() <= tol.eq_tol && xi.re.abs() < 1.0 {
        return Err(Error::ResolventSingular {
            point: format!("{xi}"),
            sigma_min: 0.0,
        });
    }
    Ok(())
}

/// `Q̂0(ξ) = [R (B̂0 - ξ)^{-1} R + I]↾N` and
/// `Q̂1(ξ) = [R (B̂1 - ξ)^{-1} R - I]↾N`, `R = (B̂1 - B̂0)^{1/2}`, in the
/// coordinates of `n_basis`.
pub fn q_pair(
    b0: &ComplexMatrix,
    b1: &ComplexMatrix,
    n_basis: &ComplexMatrix,
    xi: C64,
    tol: &Tolerance,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_off_interval(xi, tol)?;
    let root = check_order(b0, b1, tol)?;
    let n = b0.nrows();
    let m = n_basis.ncols();
    let r0 = checked_inverse(&(b0 - identity(n) * xi), tol, xi)?;
    let r1 = checked_inverse(&(b1 - identity(n) * xi), tol, xi)?;
    let side = &root * n_basis;
    let q0 = side.adjoint() * r0 * &side + identity(m);
    let q1 = side.adjoint() * r1 * &side - identity(m);
    Ok((q0, q1))
}

/// The pair dressed by an isometry `V` from `cran (B̂1 - B̂0)` (coordinates
/// of its range basis) into a target space:
/// `I + V R (B̂0 - ξ)^{-1} R V*` and `-I + V R (B̂1 - ξ)^{-1} R V*`.
pub fn dressed_q_pair(
    b0: &ComplexMatrix,
    b1: &ComplexMatrix,
    v: &ComplexMatrix,
    xi: C64,
    tol: &Tolerance,
) -> Result<(ComplexMatrix, ComplexMatrix)> {
    check_off_interval(xi, tol)?;
    let root = check_order(b0, b1, tol)?;
    let qc = range_basis(&(b1 - b0), tol);
    if v.ncols() != qc.ncols() {
        return Err(Error::IsometryInfeasible {
            reason: format!(
                "V must have {} columns (rank of B1 - B0), got {}",
                qc.ncols(),
                v.ncols()
            ),
        });
    }
    let n = b0.nrows();
    let t = v.nrows();
    let r0 = checked_inverse(&(b0 - identity(n) * xi), tol, xi)?;
    let r1 = checked_inverse(&(b1 - identity(n) * xi), tol, xi)?;
    let lift = &root * &qc * v.adjoint();
    Ok((
        identity(t) + lift.adjoint() * r0 * &lift,
        -identity(t) + lift.adjoint() * r1 * &lift,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QClass {
    /// `Q → I` at infinity, `(Q h, h) → +∞` as `ξ ↑ -1`, `Q → 0` as `ξ ↓ 1`.
    SMu,
    /// `Q → -I` at infinity, `Q → 0` as `ξ ↑ -1`, `(Q h, h) → -∞` as `ξ ↓ 1`.
    SM,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeOutcome {
    Pass,
    Fail,
    Indeterminate,
}

/// One probed condition: the sample abscissae and a scalar summary at each
/// (distance to the target limit, or the extreme eigenvalue for divergence).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionProbe {
    pub condition: u8,
    pub outcome: ProbeOutcome,
    pub samples: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub class: QClass,
    pub conditions: Vec<ConditionProbe>,
}

impl ProbeReport {
    pub fn passes_all(&self) -> bool {
        self.conditions.iter().all(|p| p.outcome == ProbeOutcome::Pass)
    }

    pub fn outcome(&self, condition: u8) -> Option<ProbeOutcome> {
        self.conditions
            .iter()
            .find(|p| p.condition == condition)
            .map(|p| p.outcome)
    }
}

/// Decades sampled by [`class_probe`]: `k = 2..=8`.
pub const PROBE_DECADES: std::ops::RangeInclusive<i32> = 2..=8;
const LIMIT_PASS: f64 = 1e-5;
const SETTLED: f64 = 1e-3;

enum Target {
    Limit(f64),
    /// `+1`: smallest eigenvalue to `+∞`; `-1`: largest to `-∞`.
    Diverge(f64),
}

fn probe_condition(
    q: &dyn Fn(f64) -> Result<ComplexMatrix>,
    condition: u8,
    points: &[f64],
    target: Target,
) -> ConditionProbe {
    let mut samples = Vec::with_capacity(points.len());
    for &x in points {
        let Ok(value) = q(x) else {
            return ConditionProbe {
                condition,
                outcome: ProbeOutcome::Indeterminate,
                samples,
            };
        };
        let summary = match target {
            Target::Limit(t) => (&value - identity(value.nrows()) * c(t, 0.0)).norm(),
            Target::Diverge(s) if s > 0.0 => min_eigenvalue(&value),
            Target::Diverge(_) => -max_eigenvalue(&value),
        };
        samples.push((x, summary));
    }
    let f: Vec<f64> = samples.iter().map(|s| s.1).collect();
    let last = *f.last().unwrap_or(&f64::NAN);
    let outcome = match target {
        Target::Limit(_) => {
            if last <= LIMIT_PASS {
                ProbeOutcome::Pass
            } else if (last - f[f.len() - 2]).abs() <= SETTLED * last.max(1.0) {
                ProbeOutcome::Fail
            } else {
                ProbeOutcome::Indeterminate
            }
        }
        Target::Diverge(_) => {
            let inc: Vec<f64> = f.windows(2).map(|w| w[1] - w[0]).collect();
            let k = inc.len();
            let settled = inc[k - 1].abs() <= SETTLED * last.abs().max(1.0);
            let growing = inc[k - 3..].iter().all(|&d| d > 0.0) && inc[k - 1] >= 3.0 * inc[k - 2];
            if growing && !settled {
                ProbeOutcome::Pass
            } else if settled {
                ProbeOutcome::Fail
            } else {
                ProbeOutcome::Indeterminate
            }
        }
    };
    ConditionProbe {
        condition,
        outcome,
        samples,
    }
}

/// Probes the three limit conditions of `S_mu` or `S_M` along real rays
/// with geometric samples `10^k`, `-1 - 10^{-k}` and `1 + 10^{-k}`.
pub fn class_probe(q: &dyn Fn(f64) -> Result<ComplexMatrix>, class: QClass) -> ProbeReport {
    let far: Vec<f64> = PROBE_DECADES.map(|k| 10f64.powi(k)).collect();
    let left: Vec<f64> = PROBE_DECADES.map(|k| -1.0 - 10f64.powi(-k)).collect();
    let right: Vec<f64> = PROBE_DECADES.map(|k| 1.0 + 10f64.powi(-k)).collect();
    let conditions = match class {
        QClass::SMu => vec![
            probe_condition(q, 1, &far, Target::Limit(1.0)),
            probe_condition(q, 2, &left, Target::Diverge(1.0)),
            probe_condition(q, 3, &right, Target::Limit(0.0)),
        ],
        QClass::SM => vec![
            probe_condition(q, 1, &far, Target::Limit(-1.0)),
            probe_condition(q, 2, &left, Target::Limit(0.0)),
            probe_condition(q, 3, &right, Target::Diverge(-1.0)),
        ],
    };
    ProbeReport { class, conditions }
}

/// Canonical generalized resolvent for a constant `0 <= K <= I` on `N`:
/// `R0 - R0 C^{1/2} K (I + (Q_mu - I) K)^{-1} C^{1/2} R0`, `R0 = (B_mu - ξ)^{-1}`.
pub fn krein_ovcharenko(
    b_mu: &ComplexMatrix,
    spread: &ComplexMatrix,
    k_op: &ComplexMatrix,
    n_basis: &ComplexMatrix,
    xi: C64,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    check_off_interval(xi, tol)?;
    let m = n_basis.ncols();
    if k_op.shape() != (m, m) {
        return Err(Error::ParameterWrongSpace {
            expected: m,
            rows: k_op.nrows(),
            cols: k_op.ncols(),
        });
    }
    if !is_psd(k_op, tol) || !is_psd(&(identity(m) - k_op), tol) {
        return Err(Error::ParameterNotHermitianContraction {
            reason: "K must satisfy 0 <= K <= I".into(),
        });
    }
    let n = b_mu.nrows();
    let r0 = checked_inverse(&(b_mu - identity(n) * xi), tol, xi)?;
    let side = psd_sqrt(spread, tol)? * n_basis;
    let q_mu_minus_i = side.adjoint() * &r0 * &side;
    let middle = checked_inverse(&(identity(m) + q_mu_minus_i * k_op), tol, xi)?;
    Ok(&r0 - &r0 * &side * k_op * middle * side.adjoint() * &r0)
}

/// A point of evaluation together with its position relative to `Π_±(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub z: C64,
    pub region: Region,
}

impl EvalPoint {
    pub fn new(z: C64, alpha: f64) -> Self {
        Self {
            z,
            region: region_classify(z, alpha),
        }
    }
}

/// `w = (1 + λ)/(1 - λ)`, mapping `Re λ < 0` onto the unit disk.
pub fn disk_point(lambda: C64, tol: &Tolerance) -> Result<C64> {
    if lambda.re >= -tol.eq_tol {
        return Err(Error::InvalidPoint(format!(
            "λ = {lambda} must satisfy Re λ < 0"
        )));
    }
    Ok((c(1.0, 0.0) + lambda) / (c(1.0, 0.0) - lambda))
}

/// `N(λ) = {{(I + Θ(w)) h, (I - Θ(w)) h}}`, the Cayley transform of the
/// graph of `Θ(w)`, i.e. the relation `-I + 2(I + Θ(w))^{-1}`.
pub fn n_lambda(sys: &PassiveSystem, lambda: C64, tol: &Tolerance) -> Result<LinearRelation> {
    let w = disk_point(lambda, tol)?;
    let theta = transfer(sys, w, tol)?;
    let h = theta.nrows();
    Ok(LinearRelation::from_pairs(
        &(identity(h) + &theta),
        &(identity(h) - &theta),
        tol,
    ))
}

/// `N(λ)[h, g] = ((I + V R (B̂0 - ξ)^{-1} R V*) Y h, Y g)` with
/// `ξ = (1 - λ)/(1 + λ)`, `R = (B̂1 - B̂0)^{1/2}`,
/// `Y = (I - X22)^{1/2} (I + X22)^{(-1/2)}` and `V` the isometric factor in
/// `√2 U* D_{K0*} P_N = V R`, `X12 = U D_{X22}`.
pub fn n_form_value(
    data: &HermitianContractionData,
    x: &ExitParameter,
    lambda: C64,
    h: &ComplexVector,
    g: &ComplexVector,
    tol: &Tolerance,
) -> Result<C64> {
    let w = disk_point(lambda, tol)?;
    let hd = x.h_dim;
    if h.len() != hd || g.len() != hd {
        return Err(Error::DimensionMismatch(format!(
            "vectors must have length {hd}"
        )));
    }
    let (b0, b1) = induced_pair(data, x, tol)?;
    let root = check_order(&b0, &b1, tol)?;
    let qc = range_basis(&(&b1 - &b0), tol);
    let n = b0.nrows();

    // w (w B̂0 - I)^{-1} = (B̂0 - 1/w)^{-1}, which vanishes at w = 0.
    let resolvent = checked_inverse(&(&b0 * w - identity(n)), tol, w)? * w;

    let x22 = hermitian_part(&x.x22);
    let u = &x.x12 * pinv(&defect(&x22, tol)?, tol);
    let m = u.adjoint() * data.embed.adjoint() * c(std::f64::consts::SQRT_2, 0.0);
    let v = m * pinv(&root, tol) * &qc;
    let lift = &root * &qc * v.adjoint();
    let inner = identity(hd) + lift.adjoint() * resolvent * &lift;

    let plus_root = psd_sqrt(&(identity(hd) + &x22), tol)?;
    let minus_root = psd_sqrt(&(identity(hd) - &x22), tol)?;
    let plus_pinv = pinv(&plus_root, tol);
    let in_domain = |u: &ComplexVector| -> Result<ComplexVector> {
        let pre = &plus_pinv * u;
        let residual = (&plus_root * &pre - u).norm();
        if residual > tol.eq_tol * u.norm().max(1.0) {
            return Err(Error::VectorOutsideFormDomain { residual });
        }
        Ok(&minus_root * pre)
    };
    let yh = in_domain(h)?;
    let yg = in_domain(g)?;
    Ok(yg.dotc(&(inner * yh)))
}

/// `Θ(z̄) - Θ(z)*` (zero for selfadjoint systems).
pub fn conjugate_symmetry_defect(sys: &PassiveSystem, z: C64, tol: &Tolerance) -> Result<f64> {
    let a = transfer(sys, z.conj(), tol)?;
    let b = transfer(sys, z, tol)?;
    Ok((a - b.adjoint()).norm())
}

pub fn zero_state_system(d: ComplexMatrix) -> PassiveSystem {
    let n = d.nrows();
    let m = d.ncols();
    PassiveSystem {
        in_dim: m,
        out_dim: n,
        state_dim: 0,
        c: zeros(n, 0),
        b: zeros(0, m),
        a: zeros(0, 0),
        d,
    }
}
