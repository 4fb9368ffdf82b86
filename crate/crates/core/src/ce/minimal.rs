//! The minimal calculus generated by exact forms, its duality with derivations,
//! and first-order checks for `d`.

use serde::{Deserialize, Serialize};

use super::CeCalculus;
use crate::diffops::dv_first_order;
use crate::error::{Error, Result};
use crate::hom::{Flavor, HomSpace};
use crate::linalg::{Matrix, Subspace};
use crate::module::Bimodule;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualityReport {
    pub algebra: String,
    pub derivations: usize,
    /// `dim Hom_{A-A}(O^1 A, A)`.
    pub bimodule_maps: usize,
    /// `u ↦ φ_u` followed by `φ ↦ u_φ` is the identity on derivations.
    pub derivations_round_trip: bool,
    /// `φ ↦ u_φ` followed by `u ↦ φ_u` is the identity on bimodule maps.
    pub maps_round_trip: bool,
}

impl DualityReport {
    pub fn holds(&self) -> bool {
        self.derivations == self.bimodule_maps && self.derivations_round_trip && self.maps_round_trip
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstOrderCheck {
    pub degree: usize,
    pub flavor: String,
    pub holds: bool,
}

impl CeCalculus {
    fn bimodule_ops(&self, k: usize) -> Vec<Matrix> {
        let a = self.algebra();
        (0..a.dim())
            .flat_map(|i| {
                let e = a.basis_element(i);
                [self.left_mult(k, &e), self.right_mult(k, &e)]
            })
            .collect()
    }

    /// `O^k A`, spanned by `a_0 da_1 ∧ ⋯ ∧ da_k`.
    pub fn minimal(&self, k: usize) -> Result<Subspace> {
        self.forms(k)?;
        let a = self.algebra().clone();
        let f = a.field();
        let mut current = Subspace::full(f, a.dim());
        for deg in 1..=k {
            let exact: Vec<Vec<_>> = (0..a.dim())
                .map(|b| self.exact(&a.basis_element(b)))
                .collect::<Result<_>>()?;
            let mut gens = Vec::new();
            for w in current.basis() {
                for de in &exact {
                    gens.push(self.wedge(w, deg - 1, de, 1)?);
                }
            }
            let ops = self.bimodule_ops(deg);
            let refs: Vec<&Matrix> = ops.iter().collect();
            current = Subspace::span(f, self.cochain_dim(deg), gens).closure(&refs);
        }
        Ok(current)
    }

    /// `O^k A` as a bimodule.
    pub fn minimal_module(&self, k: usize) -> Result<Bimodule> {
        let sub = self.minimal(k)?;
        Ok(self.cochain_module(k).submodule(&sub)?.with_name(format!("O^{k}A")))
    }

    /// `𝔡A ≅ Hom_{A-A}(O^1 A, A)` via `φ_u(ω) = ω(u)` and `u_φ(a) = φ(da)`.
    pub fn duality_check(&self) -> Result<DualityReport> {
        let a = self.algebra().clone();
        let f = a.field();
        let n = a.dim();
        let o1 = self.minimal(1)?;
        let module = self.cochain_module(1).submodule(&o1)?;
        let hom = HomSpace::new(&module, &Bimodule::regular(&a))?;
        let maps = hom.bimodule_morphisms()?;
        // exact forms in echelon coordinates of O^1 A
        let exact_coords: Vec<Vec<_>> = (0..n)
            .map(|b| {
                let de = self.exact(&a.basis_element(b))?;
                o1.coords(&de).ok_or_else(|| Error::Invariant("exact form outside O^1 A".into()))
            })
            .collect::<Result<_>>()?;
        let eval_at = |u: usize| -> Matrix {
            // ω ↦ ω(u) on the basis of O^1 A
            let cols: Vec<Vec<_>> = o1.basis().iter().map(|w| self.evaluate(w, &[u])).collect();
            Matrix::from_columns(f, n, &cols)
        };
        let to_derivation = |phi: &Matrix| -> Matrix {
            let cols: Vec<Vec<_>> = exact_coords.iter().map(|c| phi.mul_vec(c)).collect();
            Matrix::from_columns(f, n, &cols)
        };
        let basis = self.derivation_basis();
        let mut derivations_round_trip = true;
        let mut phis = Vec::new();
        for (i, u) in basis.iter().enumerate() {
            let phi = eval_at(i);
            derivations_round_trip &= maps.contains(&hom.flatten(&phi)?);
            derivations_round_trip &= &to_derivation(&phi) == u;
            phis.push(phi);
        }
        let mut maps_round_trip = true;
        for v in maps.basis() {
            let phi = hom.unflatten(v);
            let u = to_derivation(&phi);
            match self.derivations().coords(&u)? {
                Some(c) => {
                    let mut back = Matrix::zeros(f, n, o1.dim());
                    for (x, p) in c.iter().zip(&phis) {
                        back = &back + &p.scale(x);
                    }
                    maps_round_trip &= back == phi;
                }
                None => maps_round_trip = false,
            }
        }
        Ok(DualityReport {
            algebra: a.name().to_string(),
            derivations: basis.len(),
            bimodule_maps: maps.dim(),
            derivations_round_trip,
            maps_round_trip,
        })
    }

    /// `d: O^k → O^{k+1}` is first order: in the commutative sense on the full
    /// forms when `A` is commutative, and in the two-sided sense on the minimal
    /// calculus otherwise.
    pub fn d_is_first_order(&self, k: usize) -> Result<FirstOrderCheck> {
        let d = self.coboundary(k)?;
        let commutative = self.algebra().is_commutative();
        let (src, dst) = if commutative {
            (self.forms(k)?.clone(), self.forms(k + 1)?.clone())
        } else {
            (self.minimal(k)?, self.minimal(k + 1)?)
        };
        let ms = self.cochain_module(k).submodule(&src)?;
        let mt = self.cochain_module(k + 1).submodule(&dst)?;
        let cols = src
            .basis()
            .iter()
            .map(|v| dst.coords(&d.mul_vec(v)).ok_or_else(|| Error::Invariant("d leaves the calculus".into())))
            .collect::<Result<Vec<_>>>()?;
        let restricted = Matrix::from_columns(self.algebra().field(), dst.dim(), &cols);
        let hom = HomSpace::new(&ms, &mt)?;
        let (flavor, holds) = if commutative {
            ("grothendieck", hom.iterated_delta_vanishes(&restricted, 1, Flavor::Plain)?)
        } else {
            ("dv_first_order", dv_first_order(&hom)?.subspace.contains(&hom.flatten(&restricted)?))
        };
        Ok(FirstOrderCheck {
            degree: k,
            flavor: flavor.to_string(),
            holds,
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::catalog;
    use crate::Field;

    fn calc(name: &str, cap: usize) -> CeCalculus {
        let a = Arc::new(catalog(name, Field::Rational).unwrap());
        CeCalculus::new(&a, cap).unwrap()
    }

    #[test]
    fn duality() {
        for (name, dim) in [("trunc_poly(3)", 2), ("matrix(2)", 3), ("field", 0), ("upper_triangular(2)", 2)] {
            let r = calc(name, 1).duality_check().unwrap();
            assert_eq!(r.derivations, dim, "{name}");
            assert!(r.holds(), "{name}: {r:?}");
        }
    }

    #[test]
    fn d_is_first_order() {
        for name in ["trunc_poly(3)", "matrix(2)", "xy_sq"] {
            let c = calc(name, 2);
            for k in 0..2 {
                assert!(c.d_is_first_order(k).unwrap().holds, "{name} {k}");
            }
        }
    }

    #[test]
    fn minimal_calculus_of_matrices() {
        let c = calc("matrix(2)", 2);
        let o1 = c.minimal(1).unwrap();
        assert!(o1.is_subset(c.forms(1).unwrap()).unwrap());
        let o2 = c.minimal(2).unwrap();
        assert!(o2.is_subset(c.forms(2).unwrap()).unwrap());
        // d maps the minimal calculus into itself
        for v in o1.basis() {
            assert!(o2.contains(&c.coboundary(1).unwrap().mul_vec(v)));
        }
    }
}
