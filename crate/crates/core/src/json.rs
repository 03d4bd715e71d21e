//! JSON encodings of the public data types.
//!
//! Matrices are `{"rows", "cols", "data": [[re, im], ...]}` in row-major
//! order; composite objects embed that schema. Derived parts of composite
//! objects are recomputed (and validated) on load.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exitspace::ExitParameter;
use crate::extensions::{decompose, HermitianContractionData};
use crate::functions::PassiveSystem;
use crate::numcore::{all_finite, c, ComplexMatrix, Subspace, Tolerance, C64};
use crate::relations::LinearRelation;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                data.push([z.re, z.im]);
            }
        }
        Self {
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }
}

impl TryFrom<&MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: &MatrixJson) -> Result<Self> {
        if j.data.len() != j.rows * j.cols {
            return Err(Error::Json(format!(
                "matrix claims {}x{} but holds {} entries",
                j.rows,
                j.cols,
                j.data.len()
            )));
        }
        let m = ComplexMatrix::from_row_iterator(
            j.rows,
            j.cols,
            j.data.iter().map(|&[re, im]| c(re, im)),
        );
        if !all_finite(&m) {
            return Err(Error::NonFinite);
        }
        Ok(m)
    }
}

fn mat(j: &MatrixJson) -> Result<ComplexMatrix> {
    ComplexMatrix::try_from(j)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationJson {
    pub ambient_dim: usize,
    #[serde(flatten)]
    pub basis: MatrixJson,
}

impl RelationJson {
    pub fn encode(rel: &LinearRelation) -> Self {
        Self {
            ambient_dim: rel.ambient_dim(),
            basis: rel.graph().basis().into(),
        }
    }

    pub fn decode(&self, tol: &Tolerance) -> Result<LinearRelation> {
        let basis = mat(&self.basis)?;
        let n = self.ambient_dim;
        if basis.nrows() != 2 * n {
            return Err(Error::DimensionMismatch(format!(
                "graph basis needs {} rows, has {}",
                2 * n,
                basis.nrows()
            )));
        }
        let args = basis.rows(0, n).into_owned();
        let values = basis.rows(n, n).into_owned();
        Ok(LinearRelation::from_pairs(&args, &values, tol))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianContractionJson {
    pub ambient_dim: usize,
    pub dom_basis: MatrixJson,
    pub b_column: MatrixJson,
}

impl HermitianContractionJson {
    pub fn encode(data: &HermitianContractionData) -> Self {
        Self {
            ambient_dim: data.ambient_dim,
            dom_basis: data.dom.basis().into(),
            b_column: (&data.b_column).into(),
        }
    }

    pub fn decode(&self, tol: &Tolerance) -> Result<HermitianContractionData> {
        let dom = Subspace::from_orthonormal(mat(&self.dom_basis)?, tol)?;
        if dom.ambient_dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "ambient_dim {} but domain basis has {} rows",
                self.ambient_dim,
                dom.ambient_dim()
            )));
        }
        decompose(&mat(&self.b_column)?, &dom, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitParameterJson {
    pub k_dim: usize,
    pub h_dim: usize,
    pub x11: MatrixJson,
    pub x12: MatrixJson,
    pub x22: MatrixJson,
}

impl ExitParameterJson {
    pub fn encode(x: &ExitParameter) -> Self {
        Self {
            k_dim: x.k_dim,
            h_dim: x.h_dim,
            x11: (&x.x11).into(),
            x12: (&x.x12).into(),
            x22: (&x.x22).into(),
        }
    }

    pub fn decode(&self, tol: &Tolerance) -> Result<ExitParameter> {
        let x = ExitParameter::selfadjoint(mat(&self.x11)?, mat(&self.x12)?, mat(&self.x22)?, tol)?;
        if x.k_dim != self.k_dim || x.h_dim != self.h_dim {
            return Err(Error::DimensionMismatch(format!(
                "declared ({}, {}) but blocks give ({}, {})",
                self.k_dim, self.h_dim, x.k_dim, x.h_dim
            )));
        }
        Ok(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassiveSystemJson {
    pub in_dim: usize,
    pub out_dim: usize,
    pub state_dim: usize,
    pub d: MatrixJson,
    pub c: MatrixJson,
    pub b: MatrixJson,
    pub a: MatrixJson,
}

impl PassiveSystemJson {
    pub fn encode(sys: &PassiveSystem) -> Self {
        Self {
            in_dim: sys.in_dim,
            out_dim: sys.out_dim,
            state_dim: sys.state_dim,
            d: (&sys.d).into(),
            c: (&sys.c).into(),
            b: (&sys.b).into(),
            a: (&sys.a).into(),
        }
    }

    pub fn decode(&self, tol: &Tolerance) -> Result<PassiveSystem> {
        let sys = PassiveSystem::new(mat(&self.d)?, mat(&self.c)?, mat(&self.b)?, mat(&self.a)?, tol)?;
        if (sys.in_dim, sys.out_dim, sys.state_dim) != (self.in_dim, self.out_dim, self.state_dim) {
            return Err(Error::DimensionMismatch(
                "declared dimensions disagree with the blocks".into(),
            ));
        }
        Ok(sys)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub points: Vec<[f64; 2]>,
}

impl GridJson {
    pub fn points(&self) -> Vec<C64> {
        self.points.iter().map(|&[re, im]| c(re, im)).collect()
    }
}

pub fn to_string<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Json(e.to_string()))
}

pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))
}
