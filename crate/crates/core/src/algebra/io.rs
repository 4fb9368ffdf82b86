//! JSON form of an algebra: sparse structure constants with exact rational entries.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub name: String,
    #[serde(rename = "char")]
    pub characteristic: u64,
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<Vec<u8>>,
    pub sc: Vec<(usize, usize, usize, String)>,
}

impl AlgebraSpec {
    pub fn from_algebra(a: &FiniteAlgebra) -> AlgebraSpec {
        let n = a.dim();
        let mut sc = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for (k, c) in a.product_of_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        sc.push((i, j, k, c.to_string()));
                    }
                }
            }
        }
        AlgebraSpec {
            name: a.name().to_string(),
            characteristic: a.field().characteristic(),
            dim: n,
            basis: a.basis_names().to_vec(),
            unit: a.unit().iter().map(Scalar::to_string).collect(),
            parity: a.parity().map(<[u8]>::to_vec),
            sc,
        }
    }

    pub fn field(&self) -> Result<Field> {
        match self.characteristic {
            0 => Ok(Field::Rational),
            p => Field::prime(p),
        }
    }

    /// Builds and validates the algebra.
    pub fn to_algebra(&self) -> Result<FiniteAlgebra> {
        let a = self.to_algebra_unchecked()?;
        let report = a.validate();
        if !report.valid {
            return Err(Error::InvalidAlgebra(format!("{:?}", report.violations[0])));
        }
        Ok(a)
    }

    /// Builds the algebra checking shapes only, so that a validation report
    /// can be produced for data that violates the axioms.
    pub fn to_algebra_unchecked(&self) -> Result<FiniteAlgebra> {
        let field = self.field()?;
        let n = self.dim;
        if self.basis.len() != n {
            return Err(Error::InvalidAlgebra(format!(
                "{} basis names for dimension {n}",
                self.basis.len()
            )));
        }
        if self.unit.len() != n {
            return Err(Error::InvalidAlgebra(format!("unit has {} entries for dimension {n}", self.unit.len())));
        }
        let unit = self
            .unit
            .iter()
            .map(|s| field.parse_scalar(s))
            .collect::<Result<Vec<_>>>()?;
        let mut sc = vec![field.zero(); n * n * n];
        for (i, j, k, c) in &self.sc {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::InvalidAlgebra(format!("structure constant index ({i},{j},{k}) out of range")));
            }
            let idx = (i * n + j) * n + k;
            sc[idx] = &sc[idx] + &field.parse_scalar(c)?;
        }
        FiniteAlgebra::from_parts(self.name.clone(), field, self.basis.clone(), sc, unit, self.parity.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra spec serializes")
    }

    pub fn from_json(s: &str) -> Result<AlgebraSpec> {
        Ok(serde_json::from_str(s)?)
    }
}

impl FiniteAlgebra {
    pub fn to_json(&self) -> String {
        AlgebraSpec::from_algebra(self).to_json()
    }

    pub fn from_json(s: &str) -> Result<FiniteAlgebra> {
        AlgebraSpec::from_json(s)?.to_algebra()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<FiniteAlgebra> {
        FiniteAlgebra::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;

    #[test]
    fn round_trip_is_exact() {
        for name in ["matrix(2)", "grassmann(2)", "quaternions", "product(xy_sq,trunc_poly(2))"] {
            let a = catalog(name, Field::Rational).unwrap();
            let back = FiniteAlgebra::from_json(&a.to_json()).unwrap();
            assert_eq!(back, a);
        }
        let f7 = Field::prime(7).unwrap();
        let a = catalog("quaternions", f7).unwrap();
        assert_eq!(FiniteAlgebra::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn fractional_constants_and_format() {
        // K[x]/(x^2) presented with basis 1, y = x/2.
        let json = r#"{"name":"scaled","char":0,"dim":2,"basis":["1","y"],"unit":["1","0"],
            "sc":[[0,0,0,"1"],[0,1,1,"1"],[1,0,1,"1"]]}"#;
        let a = FiniteAlgebra::from_json(json).unwrap();
        assert!(a.is_commutative());
        let spec = AlgebraSpec::from_algebra(&a);
        assert_eq!(spec.sc[0], (0, 0, 0, "1".to_string()));
        let bad = r#"{"name":"bad","char":0,"dim":1,"basis":["1"],"unit":["1/0"],"sc":[]}"#;
        assert!(FiniteAlgebra::from_json(bad).is_err());
        let not_assoc = r#"{"name":"na","char":0,"dim":1,"basis":["1"],"unit":["1"],"sc":[[0,0,0,"2"]]}"#;
        assert!(matches!(FiniteAlgebra::from_json(not_assoc), Err(Error::InvalidAlgebra(_))));
    }
}
