//! Linear relations, the Cayley transform, sectorial classes `C_H(α)` and
//! the closed form of the m-sectorial relation `-I + 2(I + T)^{-1}`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{
    c, frob_dist, hermitian_part, identity, imaginary_part, inner, is_hermitian, min_eigenvalue,
    null_space, op_norm, pinv, psd_sqrt, range_basis, ComplexMatrix, ComplexVector, Subspace,
    Tolerance, C64,
};

/// A linear relation in `C^n`: a subspace of `C^n ⊕ C^n` whose first block
/// holds arguments and whose second block holds values.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRelation {
    ambient_dim: usize,
    graph: Subspace,
}

impl LinearRelation {
    /// Span of the pairs `⟨args[:, j], values[:, j]⟩`.
    pub fn from_pairs(args: &ComplexMatrix, values: &ComplexMatrix, tol: &Tolerance) -> Self {
        assert_eq!(args.shape(), values.shape(), "pair blocks must match");
        let n = args.nrows();
        let mut stacked = ComplexMatrix::zeros(2 * n, args.ncols());
        stacked.view_mut((0, 0), (n, args.ncols())).copy_from(args);
        stacked.view_mut((n, 0), (n, args.ncols())).copy_from(values);
        Self {
            ambient_dim: n,
            graph: Subspace::span(&stacked, tol),
        }
    }

    /// Graph of an everywhere defined operator.
    pub fn graph_of(t: &ComplexMatrix, tol: &Tolerance) -> Self {
        assert!(t.is_square(), "graph_of needs a square operator");
        Self::from_pairs(&identity(t.nrows()), t, tol)
    }

    /// Graph of `t` restricted to `dom`.
    pub fn graph_on(t: &ComplexMatrix, dom: &Subspace, tol: &Tolerance) -> Self {
        let q = dom.basis();
        Self::from_pairs(q, &(t * q), tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    fn blocks(&self) -> (ComplexMatrix, ComplexMatrix) {
        let n = self.ambient_dim;
        let g = self.graph.basis();
        let k = g.ncols();
        (
            g.view((0, 0), (n, k)).into_owned(),
            g.view((n, 0), (n, k)).into_owned(),
        )
    }

    /// `{⟨x + x', x - x'⟩ : ⟨x, x'⟩ ∈ S}`.
    pub fn cayley(&self) -> Self {
        let (args, vals) = self.blocks();
        let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let n = self.ambient_dim;
        let k = args.ncols();
        // The map is √2 times a unitary, so the rescaled basis stays orthonormal.
        let mut basis = ComplexMatrix::zeros(2 * n, k);
        basis
            .view_mut((0, 0), (n, k))
            .copy_from(&((&args + &vals) * s));
        basis
            .view_mut((n, 0), (n, k))
            .copy_from(&((&args - &vals) * s));
        Self {
            ambient_dim: n,
            graph: Subspace::from_orthonormal(basis.clone(), &Tolerance::default())
                .unwrap_or_else(|_| Subspace::span(&basis, &Tolerance::default())),
        }
    }

    /// Largest principal-angle sine between the two graphs.
    pub fn distance(&self, other: &LinearRelation) -> f64 {
        self.graph.distance(&other.graph)
    }

    pub fn approx_eq(&self, other: &LinearRelation, tol: &Tolerance) -> bool {
        self.ambient_dim == other.ambient_dim && self.distance(other) < tol.eq_tol
    }

    pub fn domain(&self, tol: &Tolerance) -> Subspace {
        Subspace::span(&self.blocks().0, tol)
    }

    /// `mul S = {x' : ⟨0, x'⟩ ∈ S}`.
    pub fn multivalued_part(&self, tol: &Tolerance) -> Subspace {
        let (args, vals) = self.blocks();
        let kernel = null_space(&args, tol);
        Subspace::span(&(vals * kernel), tol)
    }

    /// The operator whose graph this is, when the relation is the graph of
    /// an everywhere defined operator.
    pub fn as_operator(&self, tol: &Tolerance) -> Option<ComplexMatrix> {
        let (args, vals) = self.blocks();
        let n = self.ambient_dim;
        if args.ncols() != n || crate::numcore::rank(&args, tol) < n {
            return None;
        }
        args.lu().try_inverse().map(|inv| vals * inv)
    }

    /// `Re(x', x) >= 0` on every element, up to `eq_tol`.
    pub fn is_accretive(&self, tol: &Tolerance) -> bool {
        let (args, vals) = self.blocks();
        let form = hermitian_part(&(args.adjoint() * vals));
        form.nrows() == 0 || min_eigenvalue(&form) >= -tol.eq_tol
    }

    /// Gram matrix of the form `(x', x)` in graph-basis coordinates.
    pub fn form_gram(&self) -> ComplexMatrix {
        let (args, vals) = self.blocks();
        args.adjoint() * vals
    }
}

/// `I + T = R (I + iG) R` with `R = (I + T_R)^{1/2}` and `G` Hermitian on
/// `cran R`.
#[derive(Debug, Clone)]
pub struct SectorialDecomposition {
    pub real_part: ComplexMatrix,
    pub g_factor: ComplexMatrix,
    pub half_root: ComplexMatrix,
    /// Orthonormal basis of `cran (I + T_R)^{1/2}`.
    pub root_range: ComplexMatrix,
}

impl SectorialDecomposition {
    pub fn new(t: &ComplexMatrix, tol: &Tolerance) -> Result<Self> {
        let n = t.nrows();
        let real_part = hermitian_part(t);
        let half_root = psd_sqrt(&(identity(n) + &real_part), tol)?;
        let root_pinv = pinv(&half_root, tol);
        let g_factor = hermitian_part(&(&root_pinv * imaginary_part(t) * &root_pinv));
        let root_range = range_basis(&half_root, tol);
        Ok(Self {
            real_part,
            g_factor,
            half_root,
            root_range,
        })
    }

    /// `|R (P + iG) R - (I + T)|_F`.
    pub fn residual(&self, t: &ComplexMatrix) -> f64 {
        let n = t.nrows();
        let proj = &self.root_range * self.root_range.adjoint();
        let middle = proj + &self.g_factor * c(0.0, 1.0);
        frob_dist(
            &(&self.half_root * middle * &self.half_root),
            &(identity(n) + t),
        )
    }
}

fn check_contraction(t: &ComplexMatrix, tol: &Tolerance) -> Result<()> {
    if !t.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "expected a square operator, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    let norm = op_norm(t);
    if norm > 1.0 + tol.eq_tol {
        return Err(Error::NotContraction { norm });
    }
    Ok(())
}

/// Membership test for `C_H(α)` on the normalized quadratic form:
/// `sin α (I - T*T) ∓ 2 cos α Im T >= 0`, which is `1 - |T sin α ± i cos α|²`
/// divided by `sin α`.
pub fn in_class(t: &ComplexMatrix, alpha: f64, tol: &Tolerance) -> bool {
    let n = t.nrows();
    let (s, co) = alpha.sin_cos();
    let gap = identity(n) - t.adjoint() * t;
    let im = imaginary_part(t) * c(2.0 * co, 0.0);
    let base = gap * c(s, 0.0);
    min_eigenvalue(&(&base - &im)) >= -tol.eq_tol && min_eigenvalue(&(&base + &im)) >= -tol.eq_tol
}

/// Smallest `α` with `T ∈ C_H(α)`, by 60 bisection steps.
pub fn sectorial_angle(t: &ComplexMatrix, tol: &Tolerance) -> Result<f64> {
    check_contraction(t, tol)?;
    if is_hermitian(t, tol) {
        return Ok(0.0);
    }
    let mut hi = FRAC_PI_2 - tol.eq_tol;
    if !in_class(t, hi, tol) {
        return Err(Error::NotInClass);
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if in_class(t, mid, tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Value of the closed sectorial form of `M = -I + 2(I + T)^{-1}`:
/// `-(u, v) + 2((I + iG)^{-1} R^{(-1)} u, R^{(-1)} v)`, `R = (I + T_R)^{1/2}`.
pub fn clfrm_value(
    t: &ComplexMatrix,
    u: &ComplexVector,
    v: &ComplexVector,
    tol: &Tolerance,
) -> Result<C64> {
    check_contraction(t, tol)?;
    let dec = SectorialDecomposition::new(t, tol)?;
    let root_pinv = pinv(&dec.half_root, tol);
    let in_domain = |w: &ComplexVector| -> Result<ComplexVector> {
        let pre = &root_pinv * w;
        let residual = (&dec.half_root * &pre - w).norm();
        if residual > tol.eq_tol * w.norm().max(1.0) {
            return Err(Error::VectorOutsideFormDomain { residual });
        }
        Ok(pre)
    };
    let a = in_domain(u)?;
    let b = in_domain(v)?;
    let q = &dec.root_range;
    let k = q.ncols();
    if k == 0 {
        return Ok(-inner(u, v));
    }
    let g = q.adjoint() * &dec.g_factor * q;
    let system = identity(k) + g * c(0.0, 1.0);
    let rhs = q.adjoint() * a;
    let x = system
        .lu()
        .solve(&rhs)
        .ok_or(Error::ResolventSingular {
            point: "I + iG".into(),
            sigma_min: 0.0,
        })?;
    let bc = q.adjoint() * b;
    Ok(-inner(u, v) + inner(&x, &bc) * 2.0)
}

/// Where a point sits relative to `Π_±(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Region {
    PiPlus,
    PiMinus,
    /// In `C(α) = Π_+(α) ∩ Π_-(α)`.
    Both,
    Outside,
}

/// Classifies `z` by `|z sin α ± i cos α| < 1`.
///
/// The inequalities are evaluated as `sin α (|z|² - 1) ± 2 Im z cos α < 0`,
/// which is the same condition divided by `sin α`; at `α = 0` this gives the
/// limiting half-planes, with the real segment `(-1, 1)` in both.
pub fn region_classify(z: C64, alpha: f64) -> Region {
    let (s, co) = alpha.sin_cos();
    let base = s * (z.norm_sqr() - 1.0);
    let lift = 2.0 * z.im * co;
    let on_segment = z.im == 0.0 && z.re.abs() < 1.0;
    let plus = base + lift < 0.0 || (s == 0.0 && on_segment);
    let minus = base - lift < 0.0 || (s == 0.0 && on_segment);
    match (plus, minus) {
        (true, true) => Region::Both,
        (true, false) => Region::PiPlus,
        (false, true) => Region::PiMinus,
        (false, false) => Region::Outside,
    }
}
