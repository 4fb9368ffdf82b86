//! JSON form of a module: sparse action entries `[i, row, col, "p/q"]` meaning
//! `L(e_i)[row][col]` (resp. `R(e_i)`), plus the name of the algebra.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::Bimodule;
use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

type Entry = (usize, usize, usize, String);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub name: String,
    pub algebra: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Vec<u8>>,
}

fn sparse(mats: &[Matrix]) -> Vec<Entry> {
    let mut out = Vec::new();
    for (i, m) in mats.iter().enumerate() {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let x = m.get(r, c);
                if !x.is_zero() {
                    out.push((i, r, c, x.to_string()));
                }
            }
        }
    }
    out
}

impl ModuleSpec {
    pub fn from_module(m: &Bimodule) -> ModuleSpec {
        ModuleSpec {
            name: m.name().to_string(),
            algebra: m.algebra().name().to_string(),
            dim: m.dim(),
            left: m.left_mats().ok().map(sparse),
            right: m.right_mats().ok().map(sparse),
            parity: m.parity().map(<[u8]>::to_vec),
        }
    }

    /// Builds and validates the module over `algebra`, whose name must match.
    pub fn to_module(&self, algebra: &Arc<FiniteAlgebra>) -> Result<Bimodule> {
        let m = self.to_module_unchecked(algebra)?;
        let report = m.validate();
        if !report.valid {
            return Err(Error::InvalidModule(format!("{:?}", report.violations[0])));
        }
        Ok(m)
    }

    /// Builds the module checking shapes only.
    pub fn to_module_unchecked(&self, algebra: &Arc<FiniteAlgebra>) -> Result<Bimodule> {
        if algebra.name() != self.algebra {
            return Err(Error::InvalidModule(format!(
                "module refers to algebra `{}` but `{}` was supplied",
                self.algebra,
                algebra.name()
            )));
        }
        if self.left.is_none() && self.right.is_none() {
            return Err(Error::InvalidModule("module has neither a left nor a right action".into()));
        }
        let field = algebra.field();
        let n = algebra.dim();
        let dense = |entries: &Vec<Entry>| -> Result<Vec<Matrix>> {
            let mut mats = vec![Matrix::zeros(field, self.dim, self.dim); n];
            for (i, r, c, v) in entries {
                if *i >= n || *r >= self.dim || *c >= self.dim {
                    return Err(Error::InvalidModule(format!("action entry ({i},{r},{c}) out of range")));
                }
                let x = mats[*i].get(*r, *c) + &field.parse_scalar(v)?;
                mats[*i].set(*r, *c, x);
            }
            Ok(mats)
        };
        let left = self.left.as_ref().map(dense).transpose()?;
        let right = self.right.as_ref().map(dense).transpose()?;
        Bimodule::from_parts(self.name.clone(), algebra.clone(), self.dim, left, right, self.parity.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("module spec serializes")
    }

    pub fn from_json(s: &str) -> Result<ModuleSpec> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<ModuleSpec> {
        ModuleSpec::from_json(&std::fs::read_to_string(path)?)
    }
}

impl Bimodule {
    pub fn to_json(&self) -> String {
        ModuleSpec::from_module(self).to_json()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;
    use crate::Field;

    #[test]
    fn round_trip() {
        let a = Arc::new(catalog("matrix(2)", Field::Rational).unwrap());
        for m in [Bimodule::free(&a, 2), Bimodule::left_regular(&a)] {
            let spec = ModuleSpec::from_json(&m.to_json()).unwrap();
            assert_eq!(spec.to_module(&a).unwrap(), m);
        }
        let other = Arc::new(catalog("quaternions", Field::Rational).unwrap());
        let spec = ModuleSpec::from_module(&Bimodule::regular(&a));
        assert!(spec.to_module(&other).is_err());
    }
}
