//! Grid evaluation of a passive system's transfer function.

use std::collections::BTreeMap;

use krein_ext::functions::{compressed_resolvent, conjugate_symmetry_defect, transfer, PassiveSystem, Side};
use krein_ext::json::MatrixJson;
use krein_ext::numcore::{block2, checked_inverse, frob_dist, identity, op_norm, Tolerance, C64};
use krein_ext::realization::{minimal_restriction, MinimalMode};
use krein_ext::{Error, Result};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct SystemSummary {
    pub in_dim: usize,
    pub out_dim: usize,
    pub state_dim: usize,
    pub minimal_state_dim: usize,
    pub selfadjoint: bool,
}

#[derive(Debug, Serialize)]
pub struct IdentitySummary {
    pub identity: String,
    pub max_deviation: f64,
}

#[derive(Debug, Serialize)]
pub struct PointReport {
    pub z: [f64; 2],
    pub theta: MatrixJson,
    pub deviations: BTreeMap<String, f64>,
}

#[derive(Debug, Serialize)]
pub struct GridReport {
    pub system: SystemSummary,
    pub tolerance: f64,
    pub identities: Vec<IdentitySummary>,
    pub points: Vec<PointReport>,
    pub passed: bool,
}

/// Evaluates `Θ` on the grid and checks, per point:
/// `contractive` (`max(0, |Θ(z)| - 1)`), `minimal_transfer` (against the
/// minimal restriction), `exit_resolvent` (`(zU - I)^{-1}` compressed to the
/// input space against `(zΘ(z) - I)^{-1}`, square systems) and
/// `conjugate_symmetry` (`Θ(z̄) = Θ(z)*`, selfadjoint systems).
pub fn grid_report(sys: &PassiveSystem, points: &[C64], threshold: f64, tol: &Tolerance) -> Result<GridReport> {
    if let Some(z) = points.iter().find(|z| !(z.norm() < 1.0)) {
        return Err(Error::InvalidPoint(format!("{z} is not in the open unit disk")));
    }
    let selfadjoint = sys.is_selfadjoint(tol);
    let square = sys.in_dim == sys.out_dim;
    let minimal = minimal_restriction(sys, MinimalMode::StateMinimal, tol);
    let state_first = block2(&sys.a, &sys.b, &sys.c, &sys.d);

    let mut rows = Vec::with_capacity(points.len());
    let mut worst: BTreeMap<String, f64> = BTreeMap::new();
    for &z in points {
        let theta = transfer(sys, z, tol)?;
        let mut deviations = BTreeMap::new();
        deviations.insert("contractive".to_string(), (op_norm(&theta) - 1.0).max(0.0));
        deviations.insert(
            "minimal_transfer".to_string(),
            frob_dist(&transfer(&minimal, z, tol)?, &theta),
        );
        if square {
            let lhs = compressed_resolvent(&state_first, sys.state_dim, Side::Exit, z, tol)?;
            let rhs = checked_inverse(&(&theta * z - identity(sys.in_dim)), tol, z)?;
            deviations.insert("exit_resolvent".to_string(), frob_dist(&lhs, &rhs));
        }
        if selfadjoint {
            deviations.insert("conjugate_symmetry".to_string(), conjugate_symmetry_defect(sys, z, tol)?);
        }
        for (name, &value) in &deviations {
            let entry = worst.entry(name.clone()).or_insert(0.0);
            *entry = entry.max(value);
        }
        rows.push(PointReport {
            z: [z.re, z.im],
            theta: (&theta).into(),
            deviations,
        });
    }
    let passed = worst.values().all(|&v| v <= threshold);
    Ok(GridReport {
        system: SystemSummary {
            in_dim: sys.in_dim,
            out_dim: sys.out_dim,
            state_dim: sys.state_dim,
            minimal_state_dim: minimal.state_dim,
            selfadjoint,
        },
        tolerance: threshold,
        identities: worst
            .into_iter()
            .map(|(identity, max_deviation)| IdentitySummary { identity, max_deviation })
            .collect(),
        points: rows,
        passed,
    })
}
