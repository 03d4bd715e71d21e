//! Seeded verification suites. Every suite checks identities between two
//! independent computations over random instances and reports the largest
//! deviation.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exitspace::{
    construct_special_x, exit_extension, exit_shortings, induced_pair, range_conditions,
    short_to_block, z_pair, ConstructionMode, ExitParameter,
};
use crate::extensions::{extremes, interval_extension, qsc_extension, HermitianContractionData};
use crate::functions::{
    b_hat, class_probe, compressed_resolvent, conjugate_symmetry_defect, disk_point,
    dressed_q_pair, krein_ovcharenko, n_form_value, phi_limit_extrapolated, q_pair,
    schur_frobenius, transfer, PassiveSystem, ProbeOutcome, QClass, Side,
};
use crate::numcore::{
    c, checked_inverse, direct_sum, frob_dist, hermitian_deviation, hermitian_part, identity,
    imaginary_part, min_eigenvalue, op_norm, psd_sqrt, rank, range_basis, zeros, ComplexMatrix,
    ComplexVector, Subspace, Tolerance, C64,
};
use crate::random::{
    coisometric_block, contraction, contraction_norm, gaussian_vector, hermitian_contraction,
    hermitian_contraction_data, instance_rng, isometry, psd, selfadjoint_block, subspace, unitary,
    InstanceRng,
};
use crate::realization::{minimal_restriction, moments, recover_hermitian, MinimalMode, RecoverSide};
use crate::relations::{clfrm_value, LinearRelation};
use crate::shorted::{shorted, shorted_infimum_oracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    SchurFrobenius,
    CompressedResolvent,
    ExitResolvent,
    Shorted,
    LimitsExact,
    LimitsExtrapolated,
    QFunctions,
    RangeConditions,
    FiniteDimConstruction,
    Cayley,
    ClosedForm,
    RealizationRoundtrip,
    RealizationMinimal,
    FormRepresentation,
    CanonicalResolvent,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::SchurFrobenius,
        Suite::CompressedResolvent,
        Suite::ExitResolvent,
        Suite::Shorted,
        Suite::LimitsExact,
        Suite::LimitsExtrapolated,
        Suite::QFunctions,
        Suite::RangeConditions,
        Suite::FiniteDimConstruction,
        Suite::Cayley,
        Suite::ClosedForm,
        Suite::RealizationRoundtrip,
        Suite::RealizationMinimal,
        Suite::FormRepresentation,
        Suite::CanonicalResolvent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SchurFrobenius => "schur_frobenius",
            Suite::CompressedResolvent => "compressed_resolvent",
            Suite::ExitResolvent => "exit_resolvent",
            Suite::Shorted => "shorted",
            Suite::LimitsExact => "limits_exact",
            Suite::LimitsExtrapolated => "limits_extrapolated",
            Suite::QFunctions => "q_functions",
            Suite::RangeConditions => "range_conditions",
            Suite::FiniteDimConstruction => "finite_dim_construction",
            Suite::Cayley => "cayley",
            Suite::ClosedForm => "closed_form",
            Suite::RealizationRoundtrip => "realization_roundtrip",
            Suite::RealizationMinimal => "realization_minimal",
            Suite::FormRepresentation => "form_representation",
            Suite::CanonicalResolvent => "canonical_resolvent",
        }
    }

    /// Failure threshold used when no tolerance is requested.
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::SchurFrobenius
            | Suite::CompressedResolvent
            | Suite::ExitResolvent
            | Suite::RealizationMinimal => 1e-9,
            Suite::LimitsExtrapolated => 1e-5,
            Suite::FormRepresentation => 1e-7,
            // Deviations here are principal cosines.
            Suite::RangeConditions => 1.0 - 1e-8,
            _ => 1e-8,
        }
    }

    /// Numerical policy the suite runs under, derived from the caller's.
    pub fn numeric(self, base: Tolerance) -> Tolerance {
        match self {
            Suite::RangeConditions => Tolerance {
                rank_cut: base.rank_cut.max(1e-8),
                ..base
            },
            _ => base,
        }
    }

    fn check(self, rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
        match self {
            Suite::SchurFrobenius => schur_frobenius_suite(rng, n, tol),
            Suite::CompressedResolvent => compressed_resolvent_suite(rng, n, tol),
            Suite::ExitResolvent => exit_resolvent_suite(rng, n, tol),
            Suite::Shorted => shorted_suite(rng, n, tol),
            Suite::LimitsExact => limits_exact_suite(rng, n, tol),
            Suite::LimitsExtrapolated => limits_extrapolated_suite(rng, n, tol),
            Suite::QFunctions => q_functions_suite(rng, n, tol),
            Suite::RangeConditions => range_conditions_suite(rng, n, tol),
            Suite::FiniteDimConstruction => construction_suite(rng, n, tol),
            Suite::Cayley => cayley_suite(rng, n, tol),
            Suite::ClosedForm => closed_form_suite(rng, n, tol),
            Suite::RealizationRoundtrip => realization_roundtrip_suite(rng, n, tol),
            Suite::RealizationMinimal => realization_minimal_suite(rng, n, tol),
            Suite::FormRepresentation => form_representation_suite(rng, n, tol),
            Suite::CanonicalResolvent => canonical_resolvent_suite(rng, n, tol),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub seed: u64,
    pub identity: String,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub instances: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub failures: Vec<Failure>,
    pub runtime_ms: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub suite: Suite,
    pub count: usize,
    /// Candidate ambient dimensions; each instance draws one.
    pub dims: Vec<usize>,
    /// Failure threshold; the suite default when `None`.
    pub tol: Option<f64>,
    pub seed: u64,
    pub numeric: Tolerance,
    /// Record wall-clock time (otherwise `runtime_ms` is 0 so reports are
    /// reproducible byte for byte).
    pub timing: bool,
}

impl VerifyConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            count: 200,
            dims: (1..=8).collect(),
            tol: None,
            seed: 0,
            numeric: Tolerance::default(),
            timing: false,
        }
    }
}

/// Deviation recorded when an instance raises an error or a boolean
/// property fails.
pub const FAILED: f64 = 1.0;

type Check = (String, f64);

fn check(name: &str, deviation: f64) -> Check {
    (name.to_string(), deviation)
}

fn flag(name: &str, ok: bool) -> Check {
    check(name, if ok { 0.0 } else { FAILED })
}

/// Runs one instance; instance `seed` is reproducible on its own.
pub fn run_instance(suite: Suite, seed: u64, dims: &[usize], numeric: &Tolerance) -> Vec<Check> {
    let mut rng = instance_rng(seed, 0);
    let n = dims[rng.random_range(0..dims.len())];
    match suite.check(&mut rng, n, numeric) {
        Ok(checks) => checks,
        Err(e) => vec![check(&format!("error: {e}"), FAILED)],
    }
}

pub fn verify(config: &VerifyConfig) -> Result<VerificationReport> {
    if config.dims.is_empty() || config.dims.contains(&0) {
        return Err(Error::BadDims("dims must be a non-empty list of positive integers".into()));
    }
    let tolerance = config.tol.unwrap_or(config.suite.default_tolerance());
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(Error::InvalidTolerance(format!("tol must be positive, got {tolerance}")));
    }
    let numeric = config.suite.numeric(config.numeric);
    let start = Instant::now();
    let results: Vec<(u64, Vec<Check>)> = (0..config.count as u64)
        .into_par_iter()
        .map(|i| {
            let seed = config.seed.wrapping_add(i);
            (seed, run_instance(config.suite, seed, &config.dims, &numeric))
        })
        .collect();
    let mut max_deviation: f64 = 0.0;
    let mut failures = Vec::new();
    for (seed, checks) in results {
        for (identity, deviation) in checks {
            let deviation = if deviation.is_nan() { FAILED } else { deviation };
            max_deviation = max_deviation.max(deviation);
            if deviation > tolerance {
                failures.push(Failure {
                    seed,
                    identity,
                    deviation,
                });
            }
        }
    }
    failures.sort_by(|a, b| a.seed.cmp(&b.seed).then_with(|| a.identity.cmp(&b.identity)));
    Ok(VerificationReport {
        suite: config.suite.name().to_string(),
        instances: config.count,
        max_deviation,
        tolerance,
        failures,
        runtime_ms: if config.timing {
            start.elapsed().as_secs_f64() * 1e3
        } else {
            0.0
        },
    })
}

// ---- instance builders ----

fn random_data(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<HermitianContractionData> {
    let k = rng.random_range(0..n);
    hermitian_contraction_data(rng, n, k, tol)
}

fn random_exit(rng: &mut InstanceRng, r: usize, h: usize, norm: f64, tol: &Tolerance) -> Result<ExitParameter> {
    ExitParameter::from_matrix(&selfadjoint_block(rng, r, h, norm), r, tol)
}

fn disk_sample(rng: &mut InstanceRng, radius: f64) -> C64 {
    let r = radius * rng.random_range(0.0f64..1.0).sqrt();
    C64::from_polar(r, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// A point of `C \ [-1, 1]` at distance at least 0.05 from the segment.
fn off_segment(rng: &mut InstanceRng) -> C64 {
    let im = rng.random_range(0.05..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    c(rng.random_range(-3.0..3.0), im)
}

fn max_dev(name: &str, values: impl IntoIterator<Item = f64>) -> Check {
    check(name, values.into_iter().fold(0.0, f64::max))
}

// ---- suites ----

fn schur_frobenius_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let m = rng.random_range(1..=n);
    let s = rng.random_range(1..=n);
    let norm = contraction_norm(rng);
    let u = contraction(rng, m + s, m + s, norm);
    let sys = PassiveSystem::from_block(&u, m, tol)?;
    let (mut block, mut inverse) = (Vec::new(), Vec::new());
    for _ in 0..5 {
        let lambda = C64::from_polar(rng.random_range(1.2..3.0), rng.random_range(-3.1..3.1));
        let sf = schur_frobenius(&sys, lambda, tol)?;
        let direct = checked_inverse(&(&u - identity(m + s) * lambda), tol, lambda)?;
        block.push(frob_dist(&sf.full(), &direct));
        let r_a = checked_inverse(&(&sys.a - identity(s) * lambda), tol, lambda)?;
        let inv11 = &sys.d - &sys.c * r_a * &sys.b - identity(m) * lambda;
        inverse.push(frob_dist(&(&sf.top_left * inv11), &identity(m)));
    }
    Ok(vec![max_dev("block_resolvent", block), max_dev("corner_inverse", inverse)])
}

fn resolvent_points(rng: &mut InstanceRng) -> Vec<C64> {
    let mut z: Vec<C64> = (0..4).map(|_| disk_sample(rng, 0.95)).collect();
    z.extend((0..2).map(|_| c(rng.random_range(-0.99..0.99), 0.0)));
    z
}

fn compressed_resolvent_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let data = random_data(rng, n, tol)?;
    let h = rng.random_range(1..=n);
    let norm = contraction_norm(rng);
    let x = random_exit(rng, data.param_dim(), h, norm, tol)?;
    let bt = exit_extension(&data, &x, tol)?;
    let mut devs = Vec::new();
    for z in resolvent_points(rng) {
        let lhs = compressed_resolvent(&bt, n, Side::H, z, tol)?;
        let rhs = checked_inverse(&(b_hat(&data, &x, z, tol)? * z - identity(n)), tol, z)?;
        devs.push(frob_dist(&lhs, &rhs));
    }
    Ok(vec![max_dev("compressed_resolvent_h", devs)])
}

fn exit_resolvent_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let data = random_data(rng, n, tol)?;
    let h = rng.random_range(1..=n);
    let norm = contraction_norm(rng);
    let x = random_exit(rng, data.param_dim(), h, norm, tol)?;
    let bt = exit_extension(&data, &x, tol)?;
    let sys = PassiveSystem::exit_side(&bt, n, tol)?;
    let (mut devs, mut symmetry, mut sign) = (Vec::new(), Vec::new(), Vec::new());
    for z in resolvent_points(rng) {
        let lhs = compressed_resolvent(&bt, n, Side::Exit, z, tol)?;
        let theta = transfer(&sys, z, tol)?;
        let rhs = checked_inverse(&(&theta * z - identity(h)), tol, z)?;
        devs.push(frob_dist(&lhs, &rhs));
        symmetry.push(conjugate_symmetry_defect(&sys, z, tol)?);
        let im = min_eigenvalue(&imaginary_part(&theta)) * z.im.signum();
        sign.push((-im).max(0.0));
    }
    Ok(vec![
        max_dev("compressed_resolvent_exit", devs),
        max_dev("conjugate_symmetry", symmetry),
        max_dev("imaginary_part_sign", sign),
    ])
}

fn shorted_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let s_rank = rng.random_range(1..=n);
    let s = psd(rng, n, s_rank);
    let kdim = rng.random_range(1..=n);
    let k = subspace(rng, n, kdim);
    let f = gaussian_vector(rng, n);
    let value = shorted(&s, &k, tol)?.value;
    let direct = f.dotc(&(&value * &f)).re;
    let oracle = shorted_infimum_oracle(&s, &k, &f, tol)?;
    out.push(check("infimum", (direct - oracle).abs() / oracle.abs().max(1.0)));

    let data = random_data(rng, n, tol)?;
    let r = data.param_dim();
    let (mu, big) = extremes(&data);
    let norm = contraction_norm(rng);
    let b_hat_sa = qsc_extension(&data, &hermitian_contraction(rng, r, norm), tol)?.matrix;
    let upper = shorted(&(identity(n) - &b_hat_sa), &data.n_space, tol)?.value;
    let lower = shorted(&(identity(n) + &b_hat_sa), &data.n_space, tol)?.value;
    out.push(check("extension_gap_upper", frob_dist(&upper, &(&big - &b_hat_sa))));
    out.push(check("extension_gap_lower", frob_dist(&lower, &(&b_hat_sa - &mu))));

    let h = rng.random_range(1..=n);
    let norm = contraction_norm(rng);
    let x = random_exit(rng, r, h, norm, tol)?;
    let bt = exit_extension(&data, &x, tol)?;
    let xm = x.matrix();
    for (name, sign) in [("exit_shorting_plus", 1.0), ("exit_shorting_minus", -1.0)] {
        let big_side = short_to_block(&(identity(n + h) + &bt * c(sign, 0.0)), n, h, tol)?;
        let small_side = short_to_block(&(identity(r + h) + &xm * c(sign, 0.0)), r, h, tol)?;
        out.push(check(name, frob_dist(&big_side, &small_side)));
    }

    if r == data.n_dim() {
        let (b0, b1) = induced_pair(&data, &x, tol)?;
        let mut basis = zeros(n + h, r);
        basis.view_mut((0, 0), (n, r)).copy_from(data.n_space.basis());
        let n_tilde = Subspace::from_orthonormal(basis, tol)?;
        let plus = shorted(&(identity(n + h) + &bt), &n_tilde, tol)?.value;
        let minus = shorted(&(identity(n + h) - &bt), &n_tilde, tol)?.value;
        let plus = plus.view((0, 0), (n, n)).into_owned();
        let minus = minus.view((0, 0), (n, n)).into_owned();
        out.push(check("induced_lower", frob_dist(&b0, &(&mu + plus))));
        out.push(check("induced_upper", frob_dist(&b1, &(&big - minus))));
    }
    Ok(out)
}

fn limits_instance(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<(HermitianContractionData, ExitParameter)> {
    let data = random_data(rng, n, tol)?;
    let h = rng.random_range(1..=n);
    let norm = rng.random_range(0.3..0.95);
    let x = random_exit(rng, data.param_dim(), h, norm, tol)?;
    Ok((data, x))
}

fn limits_exact_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let (data, x) = limits_instance(rng, n, tol)?;
    let (b0, b1) = induced_pair(&data, &x, tol)?;
    Ok(vec![
        check("b_hat_at_minus_one", frob_dist(&b_hat(&data, &x, c(-1.0, 0.0), tol)?, &b0)),
        check("b_hat_at_plus_one", frob_dist(&b_hat(&data, &x, c(1.0, 0.0), tol)?, &b1)),
    ])
}

fn limits_extrapolated_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let (_, x) = limits_instance(rng, n, tol)?;
    let z = z_pair(&x, tol)?;
    Ok(vec![
        check("phi_limit_minus", frob_dist(&phi_limit_extrapolated(&x, -1.0, tol)?, &z.z0)),
        check("phi_limit_plus", frob_dist(&phi_limit_extrapolated(&x, 1.0, tol)?, &z.z1)),
    ])
}

fn q_functions_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let data = random_data(rng, n, tol)?;
    let nb = data.n_space.basis().clone();
    let m = nb.ncols();
    let h = rng.random_range(1..=n);
    let norm = contraction_norm(rng);
    let x = random_exit(rng, data.param_dim(), h, norm, tol)?;
    let (b0, b1) = induced_pair(&data, &x, tol)?;

    let p = range_basis(&(&b1 - &b0), tol).ncols();
    let t = p + rng.random_range(0..=2);
    let v = isometry(rng, t, p);
    let (mut product, mut dressed) = (Vec::new(), Vec::new());
    for _ in 0..20 {
        let xi = off_segment(rng);
        let (q0, q1) = q_pair(&b0, &b1, &nb, xi, tol)?;
        product.push(frob_dist(&(q0 * q1), &(-identity(m))));
        let (d0, d1) = dressed_q_pair(&b0, &b1, &v, xi, tol)?;
        dressed.push(frob_dist(&(d0 * d1), &(-identity(t))));
    }

    let (mu, big) = extremes(&data);
    let at = |lo: &ComplexMatrix, hi: &ComplexMatrix, x: f64, second: bool| {
        q_pair(lo, hi, &nb, c(x, 0.0), tol).map(|(q0, q1)| if second { q1 } else { q0 })
    };
    let mu_probe = class_probe(&|s| at(&mu, &big, s, false), QClass::SMu);
    let m_probe = class_probe(&|s| at(&mu, &big, s, true), QClass::SM);
    let lower_probe = class_probe(&|s| at(&b0, &b1, s, false), QClass::SMu);
    let upper_probe = class_probe(&|s| at(&b0, &b1, s, true), QClass::SM);
    Ok(vec![
        max_dev("q_product", product),
        max_dev("dressed_q_product", dressed),
        flag("extreme_lower_in_class", mu_probe.passes_all()),
        flag("extreme_upper_in_class", m_probe.passes_all()),
        flag("interior_lower_bounded_at_minus_one", lower_probe.outcome(2) == Some(ProbeOutcome::Fail)),
        flag("interior_upper_bounded_at_plus_one", upper_probe.outcome(3) == Some(ProbeOutcome::Fail)),
    ])
}

fn range_conditions_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let k = n;
    let h = rng.random_range(1..=n);
    let x = ExitParameter::from_matrix(&coisometric_block(rng, k, h, tol)?, k, tol)?;
    let (plus, minus) = exit_shortings(&x, tol)?;
    let hypotheses = plus <= tol.eq_tol && minus <= tol.eq_tol && op_norm(&x.x22) < 1.0;
    let cond = range_conditions(&z_pair(&x, tol)?, tol);
    Ok(vec![
        flag("hypotheses", hypotheses),
        check("lower_intersection", if cond.lower_trivial { cond.lower_cosine } else { FAILED }),
        check("upper_intersection", if cond.upper_trivial { cond.upper_cosine } else { FAILED }),
    ])
}

fn construction_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let a = rng.random_range(1..=n);
    let b = rng.random_range(1..=n);
    let norm = contraction_norm(rng);
    let a_op = hermitian_contraction(rng, a, norm);
    let seed: u64 = rng.random();
    let full = |_: ()| construct_special_x(a, b, &a_op, seed, ConstructionMode::FullPart1, tol);
    let diagnostics = match (full(()), full(())) {
        (Err(Error::InfeasibleInFiniteDim { diagnostic: d1 }), Err(Error::InfeasibleInFiniteDim { diagnostic: d2 })) => {
            !d1.is_empty() && d1 == d2
        }
        _ => false,
    };
    let mut out = vec![flag("full_property_set_infeasible", diagnostics)];
    match construct_special_x(a, b, &a_op, seed, ConstructionMode::FiniteAdaptation, tol) {
        Ok(sc) => {
            let rep = &sc.report;
            out.push(check("adapted_shortings", rep.plus_shorting_norm.max(rep.minus_shorting_norm)));
            out.push(flag("adapted_x22_strict", rep.x22_norm < 1.0));
            out.push(flag("adapted_ranges_trivial", rep.ranges.lower_trivial && rep.ranges.upper_trivial));
        }
        Err(Error::InfeasibleInFiniteDim { .. }) => {
            out.push(flag("adapted_infeasible_only_when_forced", b.div_ceil(2) > a.min(b)));
        }
        Err(e) => return Err(e),
    }
    Ok(out)
}

fn cayley_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let d = rng.random_range(1..=2 * n);
    let basis = subspace(rng, 2 * n, d).basis().clone();
    let rel = LinearRelation::from_pairs(&basis.rows(0, n).into_owned(), &basis.rows(n, n).into_owned(), tol);
    let twice = rel.cayley().cayley();

    let a_rank = rng.random_range(0..=n);
    let a = psd(rng, n, a_rank);
    let t = LinearRelation::graph_of(&a, tol).cayley().as_operator(tol);
    let to_contraction = match t {
        Some(t) => hermitian_deviation(&t) + (op_norm(&t) - 1.0).max(0.0),
        None => FAILED,
    };

    let u = unitary(rng, n);
    let mut eig = zeros(n, n);
    for i in 0..n {
        eig[(i, i)] = c(if i == 0 { -1.0 } else { rng.random_range(-1.0..=1.0) }, 0.0);
    }
    let contraction_op = hermitian_part(&(&u * eig * u.adjoint()));
    let back = LinearRelation::graph_of(&contraction_op, tol).cayley();
    let gram = back.form_gram();
    let to_nonnegative = if back.dim() == n {
        hermitian_deviation(&gram) + (-min_eigenvalue(&hermitian_part(&gram))).max(0.0)
    } else {
        FAILED
    };
    Ok(vec![
        check("involution", twice.distance(&rel)),
        check("nonnegative_to_contraction", to_contraction),
        check("contraction_to_nonnegative", to_nonnegative),
    ])
}

/// `T = (I - S)(I + S)^{-1}` with `S = R (I + iG) R`, `R = A^{1/2}`, `|G| <= tan α`.
fn sectorial_contraction(rng: &mut InstanceRng, n: usize, alpha: f64, tol: &Tolerance) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let a = psd(rng, n, n);
    let g = hermitian_contraction(rng, n, alpha.tan());
    let root = psd_sqrt(&a, tol)?;
    let s = &root * (identity(n) + g * c(0.0, 1.0)) * &root;
    let t = (identity(n) - &s) * checked_inverse(&(identity(n) + &s), tol, c(-1.0, 0.0))?;
    Ok((t, s))
}

fn closed_form_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let alpha = rng.random_range(0.1..1.4);
    let (t, s) = sectorial_contraction(rng, n, alpha, tol)?;
    let u = gaussian_vector(rng, n);
    let v = gaussian_vector(rng, n);
    let direct = v.dotc(&(&s * &u));
    let form = clfrm_value(&t, &u, &v, tol)?;
    let mut out = vec![check("two_route", (form - direct).norm() / direct.norm().max(1.0))];

    if n >= 2 {
        // T ⊕ (-1) rotated: the last direction is the multivalued part.
        let (t_small, _) = sectorial_contraction(rng, n - 1, alpha, tol)?;
        let w = unitary(rng, n);
        let t_big = &w * direct_sum(&t_small, &(-identity(1))) * w.adjoint();
        let e = w.column(n - 1).into_owned();
        let mut devs = Vec::new();
        for _ in 0..20 {
            let raw = gaussian_vector(rng, n);
            let u = &raw - &e * e.dotc(&raw);
            let limit = approximation_limit(&t_big, &u, tol)?;
            let form = clfrm_value(&t_big, &u, &u, tol)?;
            devs.push((form - limit).norm() / limit.norm().max(1.0));
        }
        out.push(max_dev("approximation_limit", devs));
    }
    Ok(out)
}

/// `lim_{t→1} -|u|² + 2((I + tT)^{-1} u, u)` by Richardson extrapolation.
fn approximation_limit(t: &ComplexMatrix, u: &ComplexVector, tol: &Tolerance) -> Result<C64> {
    let n = t.nrows();
    let f = |s: f64| -> Result<C64> {
        let inv = checked_inverse(&(identity(n) + t * c(s, 0.0)), tol, c(s, 0.0))?;
        Ok(c(-u.norm_squared(), 0.0) + u.dotc(&(inv * u)) * 2.0)
    };
    // Polynomial extrapolation in h = 1 - s to h = 0 through three nodes.
    let hs = [1e-4, 1e-5, 1e-6];
    let mut total = c(0.0, 0.0);
    for (i, &hi) in hs.iter().enumerate() {
        let weight: f64 = hs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &hj)| hj / (hj - hi))
            .product();
        total += f(1.0 - hi)? * weight;
    }
    Ok(total)
}

fn realization_roundtrip_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let data = random_data(rng, n, tol)?;
    let r = data.param_dim();
    let h = (r + rng.random_range(0..=2)).max(1);
    let norm = contraction_norm(rng);
    let x = random_exit(rng, r, h, norm, tol)?;
    let bt = exit_extension(&data, &x, tol)?;
    let sys = PassiveSystem::exit_side(&bt, n, tol)?;
    let rec = recover_hermitian(&sys, RecoverSide::FromExitSide, tol)?;
    let original = &data.b_column * data.dom.basis().adjoint();
    Ok(vec![
        check("domain", rec.recovered_dom.distance(&data.dom)),
        check("operator", frob_dist(&rec.padded_operator(), &original)),
    ])
}

fn realization_minimal_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let data = random_data(rng, n, tol)?;
    let h = rng.random_range(1..=n);
    let norm = contraction_norm(rng);
    let x = random_exit(rng, data.param_dim(), h, norm, tol)?;
    let bt = exit_extension(&data, &x, tol)?;
    let sys = PassiveSystem::exit_side(&bt, n, tol)?;

    // Pad with a decoupled state block and hide it with a state rotation.
    let pad = rng.random_range(1..=2);
    let pad_norm = contraction_norm(rng);
    let a_pad = direct_sum(&sys.a, &hermitian_contraction(rng, pad, pad_norm));
    let w = unitary(rng, n + pad);
    let b_pad = &w * direct_sum(&sys.b, &zeros(pad, 0));
    let padded = PassiveSystem::new(
        sys.d.clone(),
        b_pad.adjoint(),
        b_pad.clone(),
        hermitian_part(&(&w * a_pad * w.adjoint())),
        tol,
    )?;
    let minimal = minimal_restriction(&padded, MinimalMode::StateMinimal, tol);

    let mut transfer_devs = Vec::new();
    for _ in 0..30 {
        let z = disk_sample(rng, 0.95);
        transfer_devs.push(frob_dist(&transfer(&minimal, z, tol)?, &transfer(&padded, z, tol)?));
    }
    let count = 2 * padded.state_dim + 1;
    let moment_devs = moments(&padded, count)
        .iter()
        .zip(moments(&minimal, count).iter())
        .map(|(a, b)| frob_dist(a, b))
        .collect::<Vec<_>>();
    Ok(vec![
        max_dev("transfer_preserved", transfer_devs),
        max_dev("moments", moment_devs),
        flag("padding_removed", minimal.state_dim <= n),
    ])
}

fn form_representation_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let data = random_data(rng, n, tol)?;
    let r = data.param_dim();
    let h = rng.random_range(1..=n);
    let norm = contraction_norm(rng);
    let base = random_exit(rng, r, h, norm, tol)?;
    // Append an exit direction on which X22 = -1, outside the form domain.
    let x12 = {
        let mut m = zeros(r, h + 1);
        m.view_mut((0, 0), (r, h)).copy_from(&base.x12);
        m
    };
    let x22 = direct_sum(&base.x22, &(-identity(1)));
    let x = ExitParameter::selfadjoint(base.x11.clone(), x12, x22.clone(), tol)?;
    let bt = exit_extension(&data, &x, tol)?;
    let sys = PassiveSystem::exit_side(&bt, n, tol)?;

    let mut hv = gaussian_vector(rng, h + 1);
    let mut gv = gaussian_vector(rng, h + 1);
    hv[h] = c(0.0, 0.0);
    gv[h] = c(0.0, 0.0);
    let domain_rank = rank(&hermitian_part(&(identity(h + 1) + &x22)), tol);
    let (mut devs, mut ranks_equal) = (Vec::new(), true);
    for lambda in [c(-1.0, 0.0), c(-0.5, 0.0), c(-2.0, 1.0), c(-1.0, 3.0)] {
        let w = disk_point(lambda, tol)?;
        let theta = transfer(&sys, w, tol)?;
        let oracle = clfrm_value(&theta, &hv, &gv, tol)?;
        let value = n_form_value(&data, &x, lambda, &hv, &gv, tol)?;
        devs.push((value - oracle).norm() / oracle.norm().max(1.0));
        ranks_equal &= rank(&hermitian_part(&(identity(h + 1) + hermitian_part(&theta))), tol) == domain_rank;
    }
    Ok(vec![max_dev("form_representation", devs), flag("domain_rank_constant", ranks_equal)])
}

fn canonical_resolvent_suite(rng: &mut InstanceRng, n: usize, tol: &Tolerance) -> Result<Vec<Check>> {
    let data = random_data(rng, n, tol)?;
    let nb = data.n_space.basis().clone();
    let m = nb.ncols();
    let r = data.param_dim();
    let (mu, big) = extremes(&data);
    let spread = &big - &mu;
    let xi = off_segment(rng);
    let mut devs = Vec::new();
    for t in [0.0, 0.5, 1.0] {
        let k_op = identity(m) * c(t, 0.0);
        let y = identity(r) * c(2.0 * t - 1.0, 0.0);
        let ext = interval_extension(&mu, &big, &y, tol)?.matrix;
        let formula = krein_ovcharenko(&mu, &spread, &k_op, &nb, xi, tol)?;
        let direct = checked_inverse(&(ext - identity(n) * xi), tol, xi)?;
        devs.push(frob_dist(&formula, &direct));
    }
    Ok(vec![max_dev("canonical_resolvent", devs)])
}
