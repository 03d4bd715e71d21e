//! Seeded random instances.
//!
//! Every instance draws from its own ChaCha stream: `instance_rng(seed, i)`
//! is independent of the order in which instances are produced, so suites
//! can run in parallel and still be reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::extensions::{decompose, HermitianContractionData};
use crate::numcore::{
    block2, c, defect, hermitian_part, identity, op_norm, ComplexMatrix,
    ComplexVector, Subspace, Tolerance,
};

pub type InstanceRng = ChaCha20Rng;

pub fn instance_rng(seed: u64, stream: u64) -> InstanceRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Norm used when rescaling generated contractions.
pub const MAX_NORM: f64 = 1.0 - 1e-3;

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(s * re, s * im)
    })
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexVector {
    gaussian_matrix(rng, n, 1).column(0).into_owned()
}

/// Haar-distributed unitary (QR of a Gaussian matrix with phases fixed).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    if n == 0 {
        return identity(0);
    }
    let qr = gaussian_matrix(rng, n, n).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { c(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `rows x cols` matrix with orthonormal columns (`cols <= rows`).
pub fn isometry<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    assert!(cols <= rows, "an isometry needs cols <= rows");
    unitary(rng, rows).columns(0, cols).into_owned()
}

pub fn subspace<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Subspace {
    Subspace::from_orthonormal(isometry(rng, n, k), &Tolerance::default())
        .expect("generated basis is orthonormal")
}

/// Norm drawn uniformly from `[0.3, MAX_NORM]`.
pub fn contraction_norm<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(0.3..MAX_NORM)
}

/// Gaussian matrix rescaled to spectral norm `norm`.
pub fn contraction<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, norm: f64) -> ComplexMatrix {
    let g = gaussian_matrix(rng, rows, cols);
    let s = op_norm(&g);
    if s == 0.0 {
        return g;
    }
    g * c(norm / s, 0.0)
}

/// Hermitian matrix with eigenvalues uniform in `[-norm, norm]`.
pub fn hermitian_contraction<R: Rng + ?Sized>(rng: &mut R, n: usize, norm: f64) -> ComplexMatrix {
    let u = unitary(rng, n);
    let mut d = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = c(rng.random_range(-norm..=norm), 0.0);
    }
    hermitian_part(&(&u * d * u.adjoint()))
}

/// PSD matrix of the given rank.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, rank);
    hermitian_part(&(&g * g.adjoint()))
}

/// A Hermitian contraction on a random `k`-dimensional domain in `C^n`, cut
/// out of a random selfadjoint contraction.
pub fn hermitian_contraction_data<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    k: usize,
    tol: &Tolerance,
) -> Result<HermitianContractionData> {
    let norm = contraction_norm(rng);
    let t = hermitian_contraction(rng, n, norm);
    let dom = subspace(rng, n, k);
    let b_column = &t * dom.basis();
    decompose(&b_column, &dom, tol)
}

/// Random selfadjoint contraction on `C^{k+h}` with `|X| = norm`.
pub fn selfadjoint_block<R: Rng + ?Sized>(rng: &mut R, k: usize, h: usize, norm: f64) -> ComplexMatrix {
    let x = hermitian_contraction(rng, k + h, 1.0);
    let s = op_norm(&x);
    if s == 0.0 {
        return x;
    }
    x * c(norm / s, 0.0)
}

/// Selfadjoint contraction with `(I ± X)_H = 0` and `|X22| < 1`:
/// `X = [[X11, D L*], [L D, -L X11 L*]]` with `X11` a strict contraction on
/// `C^k` and `L : C^k → C^h` a co-isometry (`h <= k`).
pub fn coisometric_block<R: Rng + ?Sized>(
    rng: &mut R,
    k: usize,
    h: usize,
    tol: &Tolerance,
) -> Result<ComplexMatrix> {
    let norm = contraction_norm(rng);
    let x11 = hermitian_contraction(rng, k, norm);
    let l_star = isometry(rng, k, h);
    let l = l_star.adjoint();
    let d = defect(&x11, tol)?;
    let off = &l * &d;
    let corner = -(&l * &x11 * &l_star);
    Ok(hermitian_part(&block2(&x11, &off.adjoint(), &off, &corner)))
}
