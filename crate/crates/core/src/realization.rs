//! Minimal selfadjoint realizations and recovery of the Hermitian
//! contraction they extend.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functions::PassiveSystem;
use crate::numcore::{
    c, hermitian_deviation, hermitian_eigen, is_hermitian, null_space, op_norm, svd, ComplexMatrix,
    ComplexVector, Subspace, Tolerance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimalMode {
    /// Reachable span, then the observable part of it.
    StateMinimal,
    /// Reachable span `cspan{A^n B u}` only.
    InputSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoverSide {
    /// `H` is the state space: `H0 = ker C`, `B = A↾H0`.
    FromExitSide,
    /// `H` is the input/output space: `H0 = ker B`, `B = D↾H0`.
    FromInnerSide,
}

#[derive(Debug, Clone)]
pub struct RealizationResult {
    pub system: PassiveSystem,
    pub recovered_dom: Subspace,
    /// Values on the basis of `recovered_dom`, in `H` coordinates.
    pub recovered_b: ComplexMatrix,
    /// Whether the span generated from the coupling fills the state space.
    pub simple: bool,
}

impl RealizationResult {
    /// The recovered operator padded by zero on the orthogonal complement
    /// of its domain; basis independent.
    pub fn padded_operator(&self) -> ComplexMatrix {
        &self.recovered_b * self.recovered_dom.basis().adjoint()
    }
}

/// Orthonormal basis of `cspan{A^n S}` by block Krylov iteration with
/// modified Gram-Schmidt (two passes) and rank-cut truncation.
pub fn krylov_basis(a: &ComplexMatrix, start: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let n = a.nrows();
    let mut basis: Vec<ComplexVector> = Vec::new();
    let mut frontier: Vec<ComplexVector> = start.column_iter().map(|c| c.into_owned()).collect();
    let scale = start.norm().max(a.norm()).max(1.0);
    while !frontier.is_empty() && basis.len() < n {
        let mut added = Vec::new();
        for v in frontier {
            let mut w = v;
            for _ in 0..2 {
                for q in &basis {
                    let proj = q.dotc(&w);
                    w -= q * proj;
                }
            }
            let norm = w.norm();
            if norm > tol.rank_cut * scale && basis.len() < n {
                let q = w / c(norm, 0.0);
                basis.push(q.clone());
                added.push(q);
            }
        }
        frontier = added.iter().map(|q| a * q).collect();
    }
    if basis.is_empty() {
        return ComplexMatrix::zeros(n, 0);
    }
    ComplexMatrix::from_columns(&basis)
}

/// Orthonormal basis of `cspan{A^n S}`. For Hermitian `A` the span is
/// assembled from the eigenspaces of `A` (clusters of eigenvalues closer
/// than the rank cut), each contributing the range of its projection of
/// `S`; this avoids the error growth of the Krylov recursion when some
/// directions are only weakly reachable. Other operators use
/// [`krylov_basis`].
pub fn reachable_basis(a: &ComplexMatrix, start: &ComplexMatrix, tol: &Tolerance) -> ComplexMatrix {
    let n = a.nrows();
    if !is_hermitian(a, tol) || n == 0 {
        return krylov_basis(a, start, tol);
    }
    let eig = hermitian_eigen(a);
    let scale = op_norm(start).max(op_norm(a)).max(1.0);
    let gap = tol.rank_cut * scale;
    let mut columns: Vec<ComplexVector> = Vec::new();
    let mut lo = 0;
    while lo < n {
        let mut hi = lo + 1;
        while hi < n && eig.values[hi] - eig.values[hi - 1] <= gap {
            hi += 1;
        }
        let vecs = eig.vectors.columns(lo, hi - lo).into_owned();
        let coupling = vecs.adjoint() * start;
        let dec = svd(&coupling);
        for (j, &sigma) in dec.sigma.iter().enumerate() {
            if sigma <= gap {
                break;
            }
            columns.push(&vecs * dec.u.column(j));
        }
        lo = hi;
    }
    if columns.is_empty() {
        return ComplexMatrix::zeros(n, 0);
    }
    ComplexMatrix::from_columns(&columns)
}

fn compress(sys: &PassiveSystem, q: &ComplexMatrix) -> PassiveSystem {
    PassiveSystem {
        in_dim: sys.in_dim,
        out_dim: sys.out_dim,
        state_dim: q.ncols(),
        d: sys.d.clone(),
        c: &sys.c * q,
        b: q.adjoint() * &sys.b,
        a: q.adjoint() * &sys.a * q,
    }
}

/// Compresses the state space onto the reachable (and, in
/// [`MinimalMode::StateMinimal`], observable) span. The transfer
/// function is unchanged.
pub fn minimal_restriction(sys: &PassiveSystem, mode: MinimalMode, tol: &Tolerance) -> PassiveSystem {
    let reach = reachable_basis(&sys.a, &sys.b, tol);
    let reduced = compress(sys, &reach);
    match mode {
        MinimalMode::InputSide => reduced,
        MinimalMode::StateMinimal => {
            let obs = reachable_basis(&reduced.a.adjoint(), &reduced.c.adjoint(), tol);
            compress(&reduced, &obs)
        }
    }
}

/// `C A^k B` for `k = 0..count`.
pub fn moments(sys: &PassiveSystem, count: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(count);
    let mut power_b = sys.b.clone();
    for _ in 0..count {
        out.push(&sys.c * &power_b);
        power_b = &sys.a * power_b;
    }
    out
}

/// Recovers `H0` and `B` from a selfadjoint passive system.
pub fn recover_hermitian(
    sys: &PassiveSystem,
    side: RecoverSide,
    tol: &Tolerance,
) -> Result<RealizationResult> {
    if !sys.is_selfadjoint(tol) {
        return Err(Error::NotHermitian {
            deviation: hermitian_deviation(&sys.block()),
        });
    }
    let simple = reachable_basis(&sys.a, &sys.b, tol).ncols() == sys.state_dim;
    let (coupling, main) = match side {
        RecoverSide::FromExitSide => (&sys.c, &sys.a),
        RecoverSide::FromInnerSide => (&sys.b, &sys.d),
    };
    let recovered_dom = Subspace::from_orthonormal(null_space(coupling, tol), tol)?;
    let recovered_b = main * recovered_dom.basis();
    Ok(RealizationResult {
        system: sys.clone(),
        recovered_dom,
        recovered_b,
        simple,
    })
}
