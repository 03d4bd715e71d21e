//! Seeded instance generation.

use clap::ValueEnum;
use krein_ext::exitspace::ExitParameter;
use krein_ext::functions::PassiveSystem;
use krein_ext::json::{self, ExitParameterJson, HermitianContractionJson, PassiveSystemJson};
use krein_ext::numcore::Tolerance;
use krein_ext::random::{
    contraction, contraction_norm, hermitian_contraction_data, instance_rng, selfadjoint_block,
};
use krein_ext::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Kind {
    /// `--dims n,k`: a Hermitian contraction on a `k`-dimensional subspace of `C^n`.
    HermitianContraction,
    /// `--dims k,h`: a selfadjoint contraction on `C^k ⊕ C^h`.
    ExitParameter,
    /// `--dims m,s`: a passive system with `m` inputs/outputs and `s` states.
    PassiveSystem,
}

fn pair(dims: &[usize], kind: &str) -> Result<(usize, usize)> {
    match *dims {
        [a, b] if a >= 1 => Ok((a, b)),
        _ => Err(Error::BadDims(format!(
            "{kind} needs --dims a,b with a >= 1, got {dims:?}"
        ))),
    }
}

/// Generates one instance as pretty JSON. Output depends only on the
/// arguments.
pub fn generate(kind: Kind, dims: &[usize], seed: u64, general: bool, tol: &Tolerance) -> Result<String> {
    let mut rng = instance_rng(seed, 0);
    match kind {
        Kind::HermitianContraction => {
            let (n, k) = pair(dims, "hermitian_contraction")?;
            if k > n {
                return Err(Error::BadDims(format!("domain dimension {k} exceeds {n}")));
            }
            let data = hermitian_contraction_data(&mut rng, n, k, tol)?;
            json::to_string(&HermitianContractionJson::encode(&data))
        }
        Kind::ExitParameter => {
            let (k, h) = pair(dims, "exit_parameter")?;
            let norm = contraction_norm(&mut rng);
            let x = ExitParameter::from_matrix(&selfadjoint_block(&mut rng, k, h, norm), k, tol)?;
            json::to_string(&ExitParameterJson::encode(&x))
        }
        Kind::PassiveSystem => {
            let (m, s) = pair(dims, "passive_system")?;
            let norm = contraction_norm(&mut rng);
            let block = if general {
                contraction(&mut rng, m + s, m + s, norm)
            } else {
                selfadjoint_block(&mut rng, m, s, norm)
            };
            let sys = PassiveSystem::from_block(&block, m, tol)?;
            json::to_string(&PassiveSystemJson::encode(&sys))
        }
    }
}
