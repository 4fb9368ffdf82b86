//! The operations a scenario check can run.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::Outcome;
use crate::algebra::FiniteAlgebra;
use crate::cartan::{cartan_vs_definitions, CartanPair, PairCalculus, PairSide};
use crate::ce::graded::{sign_experiments, GradedCe, GradedSigns};
use crate::ce::CeCalculus;
use crate::derivations::{algebra_derivations, derivations, first_order_decomposition, SplitKind};
use crate::diffops::{
    composition_order_check, compare_definitions, dv_first_order, graded_diff, grothendieck_diff, lunts_filtration,
    two_sided_filtration, Definition, Relation, Side,
};
use crate::error::{Error, Result};
use crate::hom::HomSpace;
use crate::jets::{jet_module, left_jet_identity_failure, representability, two_sided_jet, two_sided_jet_check};
use crate::linalg::{vector, Matrix, Subspace};
use crate::module::{Bimodule, TensorAP};
use crate::scalar::{sign, Scalar};
use crate::universal::UniversalCalculus;

fn regular() -> String {
    "regular".into()
}

fn dilemma_modules() -> Vec<String> {
    vec![regular(), "free(2)".into(), "omega1".into()]
}

fn ce_cap() -> usize {
    crate::ce::DEFAULT_CE_CAP
}

/// One runnable operation. Module fields name modules over the check's
/// algebra, resolved by [`module_named`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Op {
    CheckAlgebra,
    CompareDefinitions {
        order: usize,
        #[serde(default = "regular")]
        source: String,
        #[serde(default = "regular")]
        target: String,
    },
    Relation {
        order: usize,
        first: Definition,
        second: Definition,
        #[serde(default = "regular")]
        source: String,
        #[serde(default = "regular")]
        target: String,
    },
    DiffDim {
        definition: Definition,
        order: usize,
        #[serde(default = "regular")]
        source: String,
        #[serde(default = "regular")]
        target: String,
    },
    FirstOrderSplit {
        split: SplitKind,
        #[serde(default = "regular")]
        target: String,
    },
    /// `δ_a ∘ δ̄_b = δ̄_b ∘ δ_a` as operators on `Hom(P, Q)`, for all basis pairs.
    DeltaCommutation {
        #[serde(default = "regular")]
        source: String,
        #[serde(default = "regular")]
        target: String,
    },
    /// Every composition of `length` basis derivations lies in the order-`length` space.
    DerivationCompositions { definition: Definition, length: usize },
    /// Random `Δ₁ ∈ I_n`, `Δ₂ ∈ I_m` with `n + m ≤ max_total`; `Δ₁∘Δ₂ ∈ I_{n+m}`.
    CompositionOrder { samples: usize, seed: u64, max_total: usize },
    CeComplex {
        #[serde(default = "ce_cap")]
        cap: usize,
    },
    /// `(da)(u) = u(a)` on basis elements and derivations.
    CeExactEvaluation,
    /// `d(1) = 0` in the chosen calculus.
    DUnit { calculus: PairCalculus },
    /// `da ∧ da' = −da' ∧ da` for central `a, a'`.
    CeExactAnticommute,
    /// `d(ω∧η) = dω∧η + (−1)^r ω∧dη` on random forms.
    CeWedgeLeibniz {
        samples: usize,
        seed: u64,
        #[serde(default = "ce_cap")]
        cap: usize,
    },
    /// `ω∧η = (−1)^{rs} η∧ω` on random forms.
    CeGradedCommutative {
        samples: usize,
        seed: u64,
        #[serde(default = "ce_cap")]
        cap: usize,
    },
    /// `a·da' = (da')·a` for central `a`.
    CeCenterRelation,
    Duality,
    Universal,
    /// Central `a` with `a·da ≠ (da)·a` in the universal calculus.
    UniversalCenterRelation,
    /// Every derivation into `A` and into `Ω¹` factors through `d`, uniquely.
    UniversalFactorization,
    CartanTwoSided { calculus: PairCalculus, side: PairSide },
    /// A `û` that is not first order in the two-sided sense.
    CartanDvFailure { calculus: PairCalculus, side: PairSide },
    /// `1⊗abp − a⊗bp − b⊗ap + ab⊗p ∈ μ²` for all basis `a, b, p`.
    JetRelation {
        #[serde(default = "regular")]
        source: String,
    },
    Representability {
        order: usize,
        #[serde(default = "regular")]
        source: String,
        #[serde(default = "regular")]
        target: String,
    },
    /// Maps out of the two-sided first jet of `A` against the two-sided first-order space.
    TwoSidedJet,
    LeftJetFailure {
        #[serde(default = "regular")]
        source: String,
        #[serde(default = "regular")]
        target: String,
    },
    /// A derivation failing `δ_a δ_b Δ = 0` that lies in left Lunts `I₁`.
    NaiveFailure,
    /// A two-sided first-order operator outside left Lunts `I₁`, searched
    /// over ordered pairs of the listed modules except (regular, regular).
    DvOutsideLunts {
        #[serde(default = "dilemma_modules")]
        modules: Vec<String>,
    },
    GradedDerivations,
    GradedCe,
    /// Which coboundary sign choices square to zero and preserve forms.
    GradedSignSearch,
}

/// `regular`, `left_regular`, `right_regular`, `zero`, `free(k)`, `omega1`
/// (universal one-forms) or `ce1` (first Chevalley–Eilenberg forms).
pub fn module_named(a: &Arc<FiniteAlgebra>, name: &str) -> Result<Bimodule> {
    let m = match name {
        "regular" => Bimodule::regular(a),
        "left_regular" => Bimodule::left_regular(a),
        "right_regular" => Bimodule::right_regular(a),
        "zero" => Bimodule::zero(a),
        "omega1" => UniversalCalculus::new(a)?.omega1_module().clone(),
        "ce1" => CeCalculus::new(a, 1)?.minimal_module(1)?,
        _ => {
            let rank = name
                .strip_prefix("free(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|r| r.trim().parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown module `{name}`")))?;
            Bimodule::free(a, rank)
        }
    };
    Ok(m.with_name(name))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializes")
}

fn hom(a: &Arc<FiniteAlgebra>, source: &str, target: &str) -> Result<HomSpace> {
    HomSpace::new(&module_named(a, source)?, &module_named(a, target)?)
}

pub fn diff_space(hom: &HomSpace, def: Definition, order: usize) -> Result<Subspace> {
    Ok(match def {
        Definition::Grothendieck => grothendieck_diff(hom, order)?.subspace,
        Definition::Graded => graded_diff(hom, order)?.subspace,
        Definition::DvFirstOrder => {
            if order != 1 {
                return Err(Error::InvalidParams("the two-sided first-order condition has order 1".into()));
            }
            dv_first_order(hom)?.subspace
        }
        Definition::LuntsLeft => lunts_filtration(hom, order, Side::Left)?.term(order).clone(),
        Definition::LuntsRight => lunts_filtration(hom, order, Side::Right)?.term(order).clone(),
        Definition::TwoSided => two_sided_filtration(hom, order)?.term(order).clone(),
    })
}

fn sample(rng: &mut ChaCha8Rng, s: &Subspace) -> Vec<Scalar> {
    let f = s.field();
    let c: Vec<Scalar> = (0..s.dim()).map(|_| f.from_i64(rng.gen_range(-3..=3))).collect();
    s.from_coords(&c)
}

fn holds(h: bool, details: Value) -> Outcome {
    Outcome {
        holds: h,
        details,
        ..Outcome::default()
    }
}

impl Op {
    pub(crate) fn module_names(&self) -> Vec<&str> {
        match self {
            Op::CompareDefinitions { source, target, .. }
            | Op::Relation { source, target, .. }
            | Op::DiffDim { source, target, .. }
            | Op::DeltaCommutation { source, target }
            | Op::Representability { source, target, .. }
            | Op::LeftJetFailure { source, target } => vec![source, target],
            Op::FirstOrderSplit { target, .. } => vec![target],
            Op::JetRelation { source } => vec![source],
            Op::DvOutsideLunts { modules } => modules.iter().map(String::as_str).collect(),
            _ => Vec::new(),
        }
    }

    pub fn run(&self, a: &Arc<FiniteAlgebra>) -> Result<Outcome> {
        match self {
            Op::CheckAlgebra => {
                let v = a.validate();
                Ok(Outcome {
                    holds: v.valid,
                    value: Some(a.dim()),
                    details: to_value(&v),
                    ..Outcome::default()
                })
            }
            Op::CompareDefinitions { order, source, target } => {
                let r = compare_definitions(&hom(a, source, target)?, *order)?;
                Ok(Outcome {
                    holds: r.all_equal(),
                    value: Some(r.definitions.len()),
                    details: to_value(&r),
                    ..Outcome::default()
                })
            }
            Op::Relation {
                order,
                first,
                second,
                source,
                target,
            } => relation(&hom(a, source, target)?, *order, *first, *second),
            Op::DiffDim {
                definition,
                order,
                source,
                target,
            } => {
                let s = diff_space(&hom(a, source, target)?, *definition, *order)?;
                Ok(Outcome {
                    holds: true,
                    value: Some(s.dim()),
                    details: json!({ "dim": s.dim() }),
                    ..Outcome::default()
                })
            }
            Op::FirstOrderSplit { split, target } => {
                let s = first_order_decomposition(&module_named(a, target)?, *split)?;
                Ok(Outcome {
                    holds: s.holds(),
                    value: Some(s.first_order.dim()),
                    details: json!({
                        "first_order": s.first_order.dim(),
                        "zero_order": s.zero_order.dim(),
                        "derivations": s.derivations.dim(),
                        "direct": s.direct,
                        "exhaustive": s.exhaustive,
                    }),
                    ..Outcome::default()
                })
            }
            Op::DeltaCommutation { source, target } => delta_commutation(&hom(a, source, target)?),
            Op::DerivationCompositions { definition, length } => derivation_compositions(a, *definition, *length),
            Op::CompositionOrder {
                samples,
                seed,
                max_total,
            } => composition_order(a, *samples, *seed, *max_total),
            Op::CeComplex { cap } => {
                let r = CeCalculus::new(a, *cap)?.report();
                Ok(holds(r.holds(), to_value(&r)))
            }
            Op::CeExactEvaluation => ce_exact_evaluation(a),
            Op::DUnit { calculus } => {
                let unit = a.unit();
                let du = match calculus {
                    PairCalculus::ChevalleyEilenberg => CeCalculus::new(a, 1)?.exact(unit)?,
                    PairCalculus::Universal => UniversalCalculus::new(a)?.d(unit),
                };
                Ok(holds(vector::is_zero(&du), json!({ "d_unit": vector::to_strings(&du) })))
            }
            Op::CeExactAnticommute => ce_exact_anticommute(a),
            Op::CeWedgeLeibniz { samples, seed, cap } => ce_random_identity(a, *samples, *seed, *cap, true),
            Op::CeGradedCommutative { samples, seed, cap } => ce_random_identity(a, *samples, *seed, *cap, false),
            Op::CeCenterRelation => ce_center_relation(a),
            Op::Duality => {
                let r = CeCalculus::new(a, 1)?.duality_check()?;
                Ok(Outcome {
                    holds: r.holds(),
                    value: Some(r.derivations),
                    details: to_value(&r),
                    ..Outcome::default()
                })
            }
            Op::Universal => {
                let r = UniversalCalculus::new(a)?.report();
                Ok(Outcome {
                    holds: r.holds(),
                    value: Some(r.dims[1]),
                    details: to_value(&r),
                    ..Outcome::default()
                })
            }
            Op::UniversalCenterRelation => {
                let w = UniversalCalculus::new(a)?.center_relation_witness();
                Ok(Outcome {
                    holds: w.witness.is_none(),
                    witness: w.witness.as_ref().map(to_value),
                    details: to_value(&w),
                    ..Outcome::default()
                })
            }
            Op::UniversalFactorization => universal_factorization(a),
            Op::CartanTwoSided { calculus, side } => {
                let r = cartan_vs_definitions(&CartanPair::on(a, *calculus, *side)?)?;
                Ok(Outcome {
                    holds: r.identities_hold && r.two_sided_hats_are_first_order,
                    value: Some(r.two_sided_dual_dim),
                    details: to_value(&r),
                    ..Outcome::default()
                })
            }
            Op::CartanDvFailure { calculus, side } => {
                let r = cartan_vs_definitions(&CartanPair::on(a, *calculus, *side)?)?;
                Ok(Outcome {
                    holds: r.dv_witness.is_none(),
                    witness: r.dv_witness.as_ref().map(to_value),
                    details: to_value(&r),
                    ..Outcome::default()
                })
            }
            Op::JetRelation { source } => jet_relation(&module_named(a, source)?),
            Op::Representability { order, source, target } => {
                let jm = jet_module(&module_named(a, source)?, *order)?;
                let r = representability(&jm, &module_named(a, target)?)?;
                Ok(Outcome {
                    holds: r.holds(),
                    value: Some(r.hom_dim),
                    details: to_value(&r),
                    ..Outcome::default()
                })
            }
            Op::TwoSidedJet => {
                let c = two_sided_jet_check(a)?;
                let reg = Bimodule::regular(a);
                let r = representability(&two_sided_jet(&reg)?, &reg)?;
                Ok(Outcome {
                    holds: c.hom_dim == c.dv_first_order_dim && r.holds(),
                    value: Some(c.hom_dim),
                    details: json!({ "dims": to_value(&c), "representability": to_value(&r) }),
                    ..Outcome::default()
                })
            }
            Op::LeftJetFailure { source, target } => {
                let w = left_jet_identity_failure(&module_named(a, source)?, &module_named(a, target)?)?;
                Ok(Outcome {
                    holds: w.map.is_none(),
                    witness: w.map.is_some().then(|| to_value(&w)),
                    details: json!({ "maps_searched": w.maps_searched }),
                    ..Outcome::default()
                })
            }
            Op::NaiveFailure => naive_failure(a),
            Op::DvOutsideLunts { modules } => dv_outside_lunts(a, modules),
            Op::GradedDerivations => {
                let d = algebra_derivations(a, true)?;
                let parities = d.basis_parities()?;
                Ok(Outcome {
                    holds: true,
                    value: Some(d.dim()),
                    details: json!({ "dim": d.dim(), "parities": parities }),
                    ..Outcome::default()
                })
            }
            Op::GradedCe => {
                let r = GradedCe::new(a, GradedSigns::CONSISTENT)?.report()?;
                Ok(holds(r.holds(), to_value(&r)))
            }
            Op::GradedSignSearch => {
                let runs = sign_experiments(std::slice::from_ref(a))?;
                let survivors: Vec<GradedSigns> = runs
                    .iter()
                    .filter(|r| r.d_squared_zero && r.d_preserves_forms)
                    .map(|r| r.signs)
                    .collect();
                Ok(Outcome {
                    holds: survivors.contains(&GradedSigns::CONSISTENT) && !survivors.contains(&GradedSigns::AS_WRITTEN),
                    value: Some(survivors.len()),
                    details: json!({ "tried": runs.len(), "survivors": to_value(&survivors) }),
                    ..Outcome::default()
                })
            }
        }
    }
}

fn relation(hom: &HomSpace, order: usize, first: Definition, second: Definition) -> Result<Outcome> {
    let s1 = diff_space(hom, first, order)?;
    let s2 = diff_space(hom, second, order)?;
    let only_first = s1.witness_outside(&s2);
    let only_second = s2.witness_outside(&s1);
    let rel = match (&only_first, &only_second) {
        (None, None) => Relation::Equal,
        (None, Some(_)) => Relation::Subset,
        (Some(_), None) => Relation::Superset,
        (Some(_), Some(_)) => Relation::Incomparable,
    };
    let witness = only_first
        .as_ref()
        .or(only_second.as_ref())
        .map(|v| json!(vector::to_strings(v)));
    Ok(Outcome {
        holds: rel == Relation::Equal,
        relation: Some(rel),
        witness,
        details: json!({
            "first_dim": s1.dim(),
            "second_dim": s2.dim(),
            "first_basis": s1.basis().iter().map(|v| vector::to_strings(v)).collect::<Vec<_>>(),
            "second_basis": s2.basis().iter().map(|v| vector::to_strings(v)).collect::<Vec<_>>(),
        }),
        ..Outcome::default()
    })
}

fn delta_commutation(hom: &HomSpace) -> Result<Outcome> {
    let n = hom.algebra_dim();
    let deltas = hom.delta_ops()?;
    let bars = hom.bar_delta_ops()?;
    for (i, d) in deltas.iter().enumerate() {
        for (j, b) in bars.iter().enumerate() {
            if d * b != b * d {
                return Ok(Outcome {
                    holds: false,
                    witness: Some(json!({ "a": i, "b": j })),
                    details: json!({ "pairs": n * n }),
                    ..Outcome::default()
                });
            }
        }
    }
    Ok(holds(true, json!({ "pairs": n * n })))
}

fn derivation_compositions(a: &Arc<FiniteAlgebra>, def: Definition, length: usize) -> Result<Outcome> {
    let reg = Bimodule::regular(a);
    let hom = HomSpace::endomorphisms(&reg)?;
    let space = diff_space(&hom, def, length)?;
    let basis = algebra_derivations(a, false)?.basis_maps();
    let mut words: Vec<(Vec<usize>, Matrix)> = vec![(Vec::new(), Matrix::identity(a.field(), a.dim()))];
    for _ in 0..length {
        words = words
            .iter()
            .flat_map(|(w, m)| {
                basis.iter().enumerate().map(move |(i, u)| {
                    let mut w = w.clone();
                    w.push(i);
                    (w, m * u)
                })
            })
            .collect();
    }
    for (w, m) in &words {
        if !space.contains(&hom.flatten(m)?) {
            return Ok(Outcome {
                holds: false,
                value: Some(words.len()),
                witness: Some(json!({ "word": w })),
                details: json!({ "space_dim": space.dim() }),
                ..Outcome::default()
            });
        }
    }
    Ok(Outcome {
        holds: true,
        value: Some(words.len()),
        details: json!({ "derivations": basis.len(), "space_dim": space.dim() }),
        ..Outcome::default()
    })
}

fn composition_order(a: &Arc<FiniteAlgebra>, samples: usize, seed: u64, max_total: usize) -> Result<Outcome> {
    let hom = HomSpace::endomorphisms(&Bimodule::regular(a))?;
    let filt = lunts_filtration(&hom, max_total, Side::Left)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    let mut runs = Vec::with_capacity(samples);
    for _ in 0..samples {
        let n = rng.gen_range(0..=max_total);
        let m = rng.gen_range(0..=max_total - n);
        let d1 = hom.unflatten(&sample(&mut rng, filt.term(n)));
        let d2 = hom.unflatten(&sample(&mut rng, filt.term(m)));
        let ok = composition_order_check(&hom, &d1, n, &d2, m)?;
        all &= ok;
        runs.push(json!({ "n": n, "m": m, "holds": ok }));
    }
    Ok(Outcome {
        holds: all,
        value: Some(samples),
        details: json!({ "filtration_dims": filt.dims(), "samples": runs }),
        ..Outcome::default()
    })
}

fn ce_exact_evaluation(a: &Arc<FiniteAlgebra>) -> Result<Outcome> {
    let ce = CeCalculus::new(a, 1)?;
    let mut count = 0;
    for i in 0..a.dim() {
        let e = a.basis_element(i);
        let da = ce.exact(&e)?;
        for (t, u) in ce.derivation_basis().iter().enumerate() {
            count += 1;
            if ce.evaluate(&da, &[t]) != u.mul_vec(&e) {
                return Ok(Outcome {
                    holds: false,
                    witness: Some(json!({ "a": i, "u": t })),
                    ..Outcome::default()
                });
            }
        }
    }
    Ok(Outcome {
        holds: true,
        value: Some(count),
        details: json!({ "pairs": count }),
        ..Outcome::default()
    })
}

fn ce_exact_anticommute(a: &Arc<FiniteAlgebra>) -> Result<Outcome> {
    let ce = CeCalculus::new(a, 2)?;
    let center = a.center();
    let exact: Vec<Vec<Scalar>> = center.basis().iter().map(|z| ce.exact(z)).collect::<Result<_>>()?;
    for (i, x) in exact.iter().enumerate() {
        for (j, y) in exact.iter().enumerate() {
            if ce.wedge(x, 1, y, 1)? != vector::neg(&ce.wedge(y, 1, x, 1)?) {
                return Ok(Outcome {
                    holds: false,
                    witness: Some(json!({ "first": i, "second": j })),
                    ..Outcome::default()
                });
            }
        }
    }
    Ok(Outcome {
        holds: true,
        value: Some(center.dim()),
        details: json!({ "center_dim": center.dim() }),
        ..Outcome::default()
    })
}

/// Wedge Leibniz rule (`leibniz`) or graded commutativity on random forms.
fn ce_random_identity(a: &Arc<FiniteAlgebra>, samples: usize, seed: u64, cap: usize, leibniz: bool) -> Result<Outcome> {
    let ce = CeCalculus::new(a, cap)?;
    let f = a.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // leibniz needs d on degree r + s, so r + s < cap
    let top = if leibniz { cap.saturating_sub(1) } else { cap };
    let mut degrees = Vec::with_capacity(samples);
    for k in 0..samples {
        let r = rng.gen_range(0..=top);
        let s = rng.gen_range(0..=top - r);
        let w = sample(&mut rng, ce.forms(r)?);
        let e = sample(&mut rng, ce.forms(s)?);
        let ok = if leibniz {
            let lhs = ce.apply_d(r + s, &ce.wedge(&w, r, &e, s)?)?;
            let first = ce.wedge(&ce.apply_d(r, &w)?, r + 1, &e, s)?;
            let second = ce.wedge(&w, r, &ce.apply_d(s, &e)?, s + 1)?;
            lhs == vector::add(&first, &vector::scale(&sign(f, r), &second))
        } else {
            ce.wedge(&w, r, &e, s)? == vector::scale(&sign(f, r * s), &ce.wedge(&e, s, &w, r)?)
        };
        degrees.push([r, s]);
        if !ok {
            return Ok(Outcome {
                holds: false,
                value: Some(k + 1),
                witness: Some(json!({ "sample": k, "r": r, "s": s })),
                ..Outcome::default()
            });
        }
    }
    Ok(Outcome {
        holds: true,
        value: Some(samples),
        details: json!({ "degrees": degrees, "form_dims": (0..=cap).map(|k| ce.forms(k).map(Subspace::dim)).collect::<Result<Vec<_>>>()? }),
        ..Outcome::default()
    })
}

fn ce_center_relation(a: &Arc<FiniteAlgebra>) -> Result<Outcome> {
    let ce = CeCalculus::new(a, 1)?;
    let center = a.center();
    for (i, z) in center.basis().iter().enumerate() {
        let (l, r) = (ce.left_mult(1, z), ce.right_mult(1, z));
        for j in 0..a.dim() {
            let da = ce.exact(&a.basis_element(j))?;
            if l.mul_vec(&da) != r.mul_vec(&da) {
                return Ok(Outcome {
                    holds: false,
                    witness: Some(json!({ "central": i, "a": j })),
                    ..Outcome::default()
                });
            }
        }
    }
    Ok(Outcome {
        holds: true,
        value: Some(center.dim()),
        details: json!({ "center_dim": center.dim() }),
        ..Outcome::default()
    })
}

fn universal_factorization(a: &Arc<FiniteAlgebra>) -> Result<Outcome> {
    let u = UniversalCalculus::new(a)?;
    let targets = [Bimodule::regular(a), u.omega1_module().clone().with_name("omega1")];
    let mut total = 0;
    let mut all = true;
    let mut per_target = Vec::new();
    for q in &targets {
        let ders = derivations(q, false)?;
        let mut ok = true;
        let mut unique = true;
        for m in ders.basis_maps() {
            let fz = u.factorize(q, &m)?;
            ok &= fz.residual_zero;
            unique &= fz.solution_space_dim == 0;
            total += 1;
        }
        all &= ok && unique;
        per_target.push(json!({
            "target": q.name(),
            "derivations": ders.dim(),
            "residual_zero": ok,
            "unique": unique,
        }));
    }
    Ok(Outcome {
        holds: all,
        value: Some(total),
        details: json!({ "targets": per_target }),
        ..Outcome::default()
    })
}

fn jet_relation(p: &Bimodule) -> Result<Outcome> {
    let a = p.algebra();
    let f = a.field();
    let jm = jet_module(p, 1)?;
    let t = TensorAP::new(p)?;
    let one = a.unit().to_vec();
    let mut count = 0;
    for i in 0..a.dim() {
        let x = a.basis_element(i);
        for j in 0..a.dim() {
            let y = a.basis_element(j);
            for l in 0..p.dim() {
                let q = vector::unit(f, p.dim(), l);
                let yq = p.act_left(&y, &q)?;
                let xq = p.act_left(&x, &q)?;
                let xyq = p.act_left(&x, &yq)?;
                let mut rel = t.pure(&one, &xyq);
                rel = vector::sub(&rel, &t.pure(&x, &yq));
                rel = vector::sub(&rel, &t.pure(&y, &xq));
                rel = vector::add(&rel, &t.pure(&a.mul(&x, &y), &q));
                count += 1;
                if !jm.mu.contains(&rel) {
                    return Ok(Outcome {
                        holds: false,
                        witness: Some(json!({ "a": i, "b": j, "p": l })),
                        ..Outcome::default()
                    });
                }
            }
        }
    }
    Ok(Outcome {
        holds: true,
        value: Some(count),
        details: json!({ "mu_dim": jm.mu.dim(), "ambient_dim": jm.ambient_dim, "relations": count }),
        ..Outcome::default()
    })
}

fn naive_failure(a: &Arc<FiniteAlgebra>) -> Result<Outcome> {
    let hom = HomSpace::endomorphisms(&Bimodule::regular(a))?;
    let ders = algebra_derivations(a, false)?;
    let naive = grothendieck_diff(&hom, 1)?.subspace;
    let left = lunts_filtration(&hom, 1, Side::Left)?.term(1).clone();
    let right = lunts_filtration(&hom, 1, Side::Right)?.term(1).clone();
    let details = json!({
        "derivations": ders.dim(),
        "naive_first_order": naive.dim(),
        "lunts_left_first_order": left.dim(),
    });
    let deltas = hom.delta_ops()?;
    for (k, u) in ders.basis_maps().iter().enumerate() {
        let v = hom.flatten(u)?;
        if naive.contains(&v) || !left.contains(&v) {
            continue;
        }
        for (i, di) in deltas.iter().enumerate() {
            for (j, dj) in deltas.iter().enumerate() {
                let w = di.mul_vec(&dj.mul_vec(&v));
                if !vector::is_zero(&w) {
                    return Ok(Outcome {
                        holds: false,
                        witness: Some(json!({
                            "derivation": k,
                            "map": vector::to_strings(&v),
                            "a": i,
                            "b": j,
                            "delta_a_delta_b": vector::to_strings(&w),
                            "in_lunts_left": true,
                            "in_lunts_right": right.contains(&v),
                        })),
                        details,
                        ..Outcome::default()
                    });
                }
            }
        }
    }
    Ok(holds(true, details))
}

fn dv_outside_lunts(a: &Arc<FiniteAlgebra>, modules: &[String]) -> Result<Outcome> {
    let mut searched = Vec::new();
    let mut witness = None;
    let mut total = 0;
    for s in modules {
        for t in modules {
            if s == "regular" && t == "regular" {
                continue;
            }
            let h = hom(a, s, t)?;
            let dv = dv_first_order(&h)?.subspace;
            let left = lunts_filtration(&h, 1, Side::Left)?.term(1).clone();
            total += h.dim();
            searched.push(json!({
                "source": s,
                "target": t,
                "hom_dim": h.dim(),
                "dv_first_order_dim": dv.dim(),
                "lunts_left_first_order_dim": left.dim(),
            }));
            if witness.is_none() {
                if let Some(v) = dv.witness_outside(&left) {
                    witness = Some(json!({ "source": s, "target": t, "map": vector::to_strings(&v) }));
                }
            }
        }
    }
    let log = json!({ "pairs": searched, "total_hom_dim": total });
    Ok(Outcome {
        holds: witness.is_none(),
        value: Some(total),
        negative: witness.is_none().then(|| log.clone()),
        witness,
        details: log,
        ..Outcome::default()
    })
}
