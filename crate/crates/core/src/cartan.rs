//! Cartan pairs: a first-order calculus `d: A → Q` with a one-sided dual of
//! `Q`, each dual element `u` giving the map `û(a) = u(da)` on `A`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteAlgebra;
use crate::ce::CeCalculus;
use crate::derivations::{algebra_derivations, derivations};
use crate::diffops::{dv_first_order, grothendieck_diff, lunts_filtration, Side};
use crate::error::{Error, Result};
use crate::hom::HomSpace;
use crate::linalg::{vector, Matrix, Subspace};
use crate::module::{Bimodule, DualModule};
use crate::universal::UniversalCalculus;

/// Which dual of `Q` the vector fields come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSide {
    /// Right-linear `u: Q → A`.
    Right,
    /// Left-linear `u: Q → A`.
    Left,
}

impl fmt::Display for PairSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairSide::Right => "right",
            PairSide::Left => "left",
        })
    }
}

impl From<Side> for PairSide {
    fn from(s: Side) -> PairSide {
        match s {
            Side::Left => PairSide::Left,
            Side::Right => PairSide::Right,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CartanPair {
    pub side: PairSide,
    pub q: Bimodule,
    /// `d: A → Q` as a `dim Q × dim A` matrix.
    pub d: Matrix,
    pub dual: DualModule,
    /// `û` for each basis element of the dual.
    pub hats: Vec<Matrix>,
}

/// The calculus a pair is built on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairCalculus {
    Universal,
    ChevalleyEilenberg,
}

impl CartanPair {
    pub fn new(q: &Bimodule, d: &Matrix, side: PairSide) -> Result<CartanPair> {
        if !derivations(q, false)?.contains(d)? {
            return Err(Error::NotADerivation("the differential of a Cartan pair must be a derivation".into()));
        }
        let dual = match side {
            PairSide::Right => q.right_dual()?,
            PairSide::Left => q.left_dual()?,
        };
        let hats = dual.basis_maps().iter().map(|u| u * d).collect();
        Ok(CartanPair {
            side,
            q: q.clone(),
            d: d.clone(),
            dual,
            hats,
        })
    }

    /// The pair on `Ω¹(A)` or on the first Chevalley–Eilenberg forms.
    pub fn on(algebra: &Arc<FiniteAlgebra>, calculus: PairCalculus, side: PairSide) -> Result<CartanPair> {
        match calculus {
            PairCalculus::Universal => {
                let u = UniversalCalculus::new(algebra)?;
                let d = crate::universal::DifferentialCalculus::differential(&u, 0)?;
                CartanPair::new(u.omega1_module(), &d, side)
            }
            PairCalculus::ChevalleyEilenberg => {
                let ce = CeCalculus::new(algebra, 1)?;
                let o1 = ce.minimal(1)?;
                let q = ce.minimal_module(1)?;
                let cols = (0..algebra.dim())
                    .map(|i| {
                        o1.coords(&ce.exact(&algebra.basis_element(i))?)
                            .ok_or_else(|| Error::Invariant("exact form outside O¹".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                let d = Matrix::from_columns(algebra.field(), o1.dim(), &cols);
                CartanPair::new(&q, &d, side)
            }
        }
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        self.q.algebra()
    }

    /// `û` for the dual element with the given coordinates.
    pub fn hat(&self, coords: &[crate::Scalar]) -> Matrix {
        &self.dual.map_matrix(coords) * &self.d
    }

    /// The hat map as a matrix from dual coordinates to flattened `A → A` maps.
    pub fn hat_matrix(&self) -> Matrix {
        let n = self.algebra().dim();
        let cols: Vec<Vec<_>> = self.hats.iter().map(|h| h.data().to_vec()).collect();
        Matrix::from_columns(self.algebra().field(), n * n, &cols)
    }

    /// The relations tying `û` to the module structure of the dual, on all basis
    /// elements. Right pairs: `(bu)^(a) = b û(a)` and `û(ba) = û(b)a + (ub)^(a)`.
    /// Left pairs: `(ub)^(a) = û(a) b` and `û(ab) = a û(b) + (bu)^(a)`.
    pub fn identities_hold(&self) -> Result<bool> {
        let a = self.algebra().clone();
        let n = a.dim();
        let f = a.field();
        let dm = self.dual.maps.dim();
        for j in 0..dm {
            let u = vector::unit(f, dm, j);
            let hat = &self.hats[j];
            for b in 0..n {
                let eb = a.basis_element(b);
                let bu = self.hat(&self.dual.module.act_left(&eb, &u)?);
                let ub = self.hat(&self.dual.module.act_right(&u, &eb)?);
                for i in 0..n {
                    let ea = a.basis_element(i);
                    let hat_a = hat.mul_vec(&ea);
                    let ok = match self.side {
                        PairSide::Right => {
                            bu.mul_vec(&ea) == a.mul(&eb, &hat_a)
                                && hat.mul_vec(&a.mul(&eb, &ea))
                                    == vector::add(&a.mul(&hat.mul_vec(&eb), &ea), &ub.mul_vec(&ea))
                        }
                        PairSide::Left => {
                            ub.mul_vec(&ea) == a.mul(&hat_a, &eb)
                                && hat.mul_vec(&a.mul(&ea, &eb))
                                    == vector::add(&a.mul(&ea, &hat.mul_vec(&eb)), &bu.mul_vec(&ea))
                        }
                    };
                    if !ok {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Right- and left-linear duals intersected, as a subspace of the pair's dual
    /// coordinates.
    pub fn two_sided_dual(&self) -> Result<Subspace> {
        let both = self.q.right_dual()?.maps.intersect(&self.q.left_dual()?.maps)?;
        let f = self.algebra().field();
        let coords = both
            .basis()
            .iter()
            .map(|v| {
                self.dual
                    .maps
                    .coords(v)
                    .ok_or_else(|| Error::Invariant("two-sided dual outside the one-sided dual".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(f, self.dual.maps.dim(), coords))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HatMembership {
    /// Index of the dual basis element.
    pub element: usize,
    pub derivation: bool,
    pub grothendieck_first_order: bool,
    pub dv_first_order: bool,
    pub lunts_left_first_order: bool,
    pub lunts_right_first_order: bool,
}

/// `(δ_b ∘ δ̄_c û)(e_p) ≠ 0`: `û` is not first order in the two-sided sense.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DvWitness {
    pub element: usize,
    pub b: usize,
    pub c: usize,
    pub p: usize,
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanReport {
    pub algebra: String,
    pub module: String,
    pub side: PairSide,
    pub dual_dim: usize,
    pub two_sided_dual_dim: usize,
    pub identities_hold: bool,
    pub hats: Vec<HatMembership>,
    /// Every `û` with `u` in the two-sided dual is a derivation and is first
    /// order in the two-sided sense.
    pub two_sided_hats_are_first_order: bool,
    pub dv_witness: Option<DvWitness>,
}

impl CartanReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Tests each `û` against the differential-operator definitions on `A`.
pub fn cartan_vs_definitions(pair: &CartanPair) -> Result<CartanReport> {
    let a = pair.algebra().clone();
    let reg = Bimodule::regular(&a);
    let hom = HomSpace::endomorphisms(&reg)?;
    let ders = algebra_derivations(&a, false)?;
    let groth = grothendieck_diff(&hom, 1)?;
    let dv = dv_first_order(&hom)?;
    let ll = lunts_filtration(&hom, 1, Side::Left)?.space(&hom, 1);
    let lr = lunts_filtration(&hom, 1, Side::Right)?.space(&hom, 1);
    let mut hats = Vec::new();
    let mut dv_witness = None;
    for (j, h) in pair.hats.iter().enumerate() {
        let flat = hom.flatten(h)?;
        let in_dv = dv.subspace.contains(&flat);
        hats.push(HatMembership {
            element: j,
            derivation: ders.subspace.contains(&flat),
            grothendieck_first_order: groth.subspace.contains(&flat),
            dv_first_order: in_dv,
            lunts_left_first_order: ll.subspace.contains(&flat),
            lunts_right_first_order: lr.subspace.contains(&flat),
        });
        if !in_dv && dv_witness.is_none() {
            dv_witness = dv_violation(&hom, j, &flat)?;
        }
    }
    let two = pair.two_sided_dual()?;
    let mut two_sided_hats_are_first_order = true;
    for v in two.basis() {
        let flat = hom.flatten(&pair.hat(v))?;
        two_sided_hats_are_first_order &= ders.subspace.contains(&flat) && dv.subspace.contains(&flat);
    }
    Ok(CartanReport {
        algebra: a.name().to_string(),
        module: pair.q.name().to_string(),
        side: pair.side,
        dual_dim: pair.dual.maps.dim(),
        two_sided_dual_dim: two.dim(),
        identities_hold: pair.identities_hold()?,
        hats,
        two_sided_hats_are_first_order,
        dv_witness,
    })
}

fn dv_violation(hom: &HomSpace, element: usize, flat: &[crate::Scalar]) -> Result<Option<DvWitness>> {
    let n = hom.algebra_dim();
    for b in 0..n {
        let db = hom.delta_op(b)?;
        for c in 0..n {
            let m = hom.unflatten(&db.mul_vec(&hom.bar_delta_op(c)?.mul_vec(flat)));
            for p in 0..m.cols() {
                let col = m.column(p);
                if !vector::is_zero(&col) {
                    return Ok(Some(DvWitness {
                        element,
                        b,
                        c,
                        p,
                        value: vector::to_strings(&col),
                    }));
                }
            }
        }
    }
    Ok(None)
}
