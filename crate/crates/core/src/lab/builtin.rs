//! The built-in scenario suite.

use super::{run_scenario, Check, Expect, Op, Report, Scenario};
use crate::algebra::{STANDARD, STANDARD_COMMUTATIVE};
use crate::cartan::{PairCalculus, PairSide};
use crate::derivations::SplitKind;
use crate::diffops::{Definition, Relation};
use crate::error::{Error, Result};

/// Statements the suite encodes, as `(id, statement)`.
pub const CLAIMS: &[(&str, &str)] = &[
    ("delta-bar-delta-commute", "δ_a ∘ δ̄_b = δ̄_b ∘ δ_a on Hom(P, Q)"),
    (
        "dv-equals-grothendieck-commutative",
        "over a commutative algebra the two-sided first-order condition is Grothendieck order 1",
    ),
    (
        "lunts-equals-grothendieck-commutative",
        "over a commutative algebra the Lunts filtration is the Grothendieck filtration",
    ),
    (
        "derivation-compositions-in-lunts",
        "compositions of r derivations lie in left Lunts I_r",
    ),
    (
        "derivation-compositions-two-sided",
        "derivations and their compositions lie in the two-sided filtration",
    ),
    (
        "definitions-coincide-first-order-commutative",
        "all first-order definitions agree over a commutative algebra",
    ),
    ("exact-form-evaluates-derivation", "(da)(u) = u(a)"),
    ("differential-kills-unit", "d(1) = 0"),
    ("central-exact-forms-anticommute", "da ∧ da' = −da' ∧ da for central a, a'"),
    ("ce-center-relation", "a·da' = (da')·a for central a in the Chevalley–Eilenberg calculus"),
    (
        "two-sided-dual-hats-first-order",
        "û is a first-order operator when u lies in the two-sided dual",
    ),
    ("first-order-jet-relation", "1⊗abp − a⊗bp − b⊗ap + ab⊗p lies in μ²"),
];

fn check(name: impl Into<String>, claim: Option<&str>, algebra: &str, op: Op, expect: Expect) -> Check {
    Check {
        name: name.into(),
        claim: claim.map(str::to_string),
        algebra: algebra.into(),
        op,
        expect,
    }
}

fn reg() -> String {
    "regular".into()
}

fn relation(order: usize, first: Definition, second: Definition) -> Op {
    Op::Relation {
        order,
        first,
        second,
        source: reg(),
        target: reg(),
    }
}

fn scenario(id: &str, checks: Vec<Check>) -> Scenario {
    Scenario {
        id: id.into(),
        field: "q".into(),
        checks,
    }
}

fn commutative_collapse() -> Scenario {
    let a = "trunc_poly(3)";
    let mut checks = Vec::new();
    for k in 0..=2 {
        let claim = (k == 1).then_some("definitions-coincide-first-order-commutative");
        checks.push(check(
            format!("all definitions agree at order {k}"),
            claim,
            a,
            Op::CompareDefinitions {
                order: k,
                source: reg(),
                target: reg(),
            },
            Expect::Holds,
        ));
        for def in [Definition::LuntsLeft, Definition::LuntsRight, Definition::TwoSided] {
            let claim = matches!(def, Definition::LuntsLeft | Definition::LuntsRight)
                .then_some("lunts-equals-grothendieck-commutative");
            checks.push(check(
                format!("{def} equals grothendieck at order {k}"),
                claim,
                a,
                relation(k, def, Definition::Grothendieck),
                Expect::Relation {
                    relation: Relation::Equal,
                },
            ));
        }
    }
    checks.push(check(
        "two-sided first order equals grothendieck order 1",
        Some("dv-equals-grothendieck-commutative"),
        a,
        relation(1, Definition::DvFirstOrder, Definition::Grothendieck),
        Expect::Relation {
            relation: Relation::Equal,
        },
    ));
    checks.push(check(
        "first-order operators split into zero order and derivations",
        None,
        a,
        Op::FirstOrderSplit {
            split: SplitKind::Commutative,
            target: reg(),
        },
        Expect::Holds,
    ));
    scenario("commutative-collapse", checks)
}

fn dilemma() -> Scenario {
    let m = "matrix(2)";
    let checks = vec![
        check(
            "definitions disagree at order 1",
            None,
            m,
            Op::CompareDefinitions {
                order: 1,
                source: reg(),
                target: reg(),
            },
            Expect::Fails,
        ),
        check(
            "derivation failing the naive first-order condition inside Lunts I1",
            None,
            m,
            Op::NaiveFailure,
            Expect::Witness,
        ),
        check(
            "vector field of the universal Cartan pair that is not two-sided first order",
            None,
            m,
            Op::CartanDvFailure {
                calculus: PairCalculus::Universal,
                side: PairSide::Right,
            },
            Expect::Witness,
        ),
        check(
            "two-sided first-order operator outside left Lunts I1",
            None,
            m,
            Op::DvOutsideLunts {
                modules: vec![reg(), "free(2)".into(), "omega1".into()],
            },
            Expect::WitnessOrNegative,
        ),
        check(
            "left jet identity fails at order 1",
            None,
            m,
            Op::LeftJetFailure {
                source: reg(),
                target: reg(),
            },
            Expect::Witness,
        ),
        check(
            "vector fields from the two-sided dual are first order",
            Some("two-sided-dual-hats-first-order"),
            m,
            Op::CartanTwoSided {
                calculus: PairCalculus::Universal,
                side: PairSide::Right,
            },
            Expect::Holds,
        ),
        check(
            "two-sided first jets represent two-sided first-order operators",
            None,
            m,
            Op::TwoSidedJet,
            Expect::Dimension { value: 7 },
        ),
    ];
    scenario("dilemma-M2", checks)
}

fn identities() -> Scenario {
    let mut checks = Vec::new();
    for (a, t) in [("matrix(2)", "regular"), ("matrix(2)", "free(2)"), ("trunc_poly(3)", "regular")] {
        checks.push(check(
            format!("delta operators commute on Hom(regular, {t})"),
            Some("delta-bar-delta-commute"),
            a,
            Op::DeltaCommutation {
                source: reg(),
                target: t.into(),
            },
            Expect::Holds,
        ));
    }
    for len in 1..=2 {
        checks.push(check(
            format!("compositions of {len} derivations lie in left Lunts I{len}"),
            Some("derivation-compositions-in-lunts"),
            "matrix(2)",
            Op::DerivationCompositions {
                definition: Definition::LuntsLeft,
                length: len,
            },
            Expect::Holds,
        ));
        checks.push(check(
            format!("compositions of {len} derivations lie in TS{len}"),
            Some("derivation-compositions-two-sided"),
            "matrix(2)",
            Op::DerivationCompositions {
                definition: Definition::TwoSided,
                length: len,
            },
            Expect::Holds,
        ));
    }
    for a in ["trunc_poly(3)", "matrix(2)", "quaternions"] {
        checks.push(check(
            "exact forms evaluate derivations",
            Some("exact-form-evaluates-derivation"),
            a,
            Op::CeExactEvaluation,
            Expect::Holds,
        ));
    }
    for (a, calculus) in [
        ("trunc_poly(3)", PairCalculus::ChevalleyEilenberg),
        ("matrix(2)", PairCalculus::ChevalleyEilenberg),
        ("matrix(2)", PairCalculus::Universal),
    ] {
        checks.push(check(
            "d of the unit vanishes",
            Some("differential-kills-unit"),
            a,
            Op::DUnit { calculus },
            Expect::Holds,
        ));
    }
    for a in ["trunc_poly(3)", "xy_sq", "matrix(2)"] {
        checks.push(check(
            "exact forms of central elements anticommute",
            Some("central-exact-forms-anticommute"),
            a,
            Op::CeExactAnticommute,
            Expect::Holds,
        ));
    }
    for a in ["trunc_poly(2)", "matrix(2)"] {
        checks.push(check(
            "central elements commute with exact forms",
            Some("ce-center-relation"),
            a,
            Op::CeCenterRelation,
            Expect::Holds,
        ));
    }
    checks.push(check(
        "central elements need not commute with universal exact forms",
        None,
        "trunc_poly(2)",
        Op::UniversalCenterRelation,
        Expect::Witness,
    ));
    for a in ["trunc_poly(3)", "xy_sq"] {
        checks.push(check(
            "first-order jet relation",
            Some("first-order-jet-relation"),
            a,
            Op::JetRelation { source: reg() },
            Expect::Holds,
        ));
    }
    scenario("identities", checks)
}

fn calculi() -> Scenario {
    let mut checks = Vec::new();
    for a in STANDARD {
        checks.push(check("coboundary squares to zero", None, a, Op::CeComplex { cap: 3 }, Expect::Holds));
        checks.push(check("universal calculus", None, a, Op::Universal, Expect::Holds));
        checks.push(check(
            "universal factorization of derivations",
            None,
            a,
            Op::UniversalFactorization,
            Expect::Holds,
        ));
    }
    for a in ["trunc_poly(3)", "xy_sq", "matrix(2)", "quaternions"] {
        checks.push(check(
            "wedge Leibniz rule",
            None,
            a,
            Op::CeWedgeLeibniz {
                samples: 100,
                seed: 7,
                cap: 3,
            },
            Expect::Holds,
        ));
    }
    for a in STANDARD_COMMUTATIVE {
        checks.push(check(
            "graded commutativity of forms",
            None,
            a,
            Op::CeGradedCommutative {
                samples: 100,
                seed: 11,
                cap: 3,
            },
            Expect::Holds,
        ));
    }
    for (a, d) in [("trunc_poly(3)", 2), ("matrix(2)", 3), ("quaternions", 3)] {
        checks.push(check(
            "derivations are dual to one-forms",
            None,
            a,
            Op::Duality,
            Expect::Dimension { value: d },
        ));
    }
    for (a, d) in [("matrix(2)", 12), ("trunc_poly(2)", 2)] {
        checks.push(check(
            "dimension of universal one-forms",
            None,
            a,
            Op::Universal,
            Expect::Dimension { value: d },
        ));
    }
    checks.push(check(
        "vector fields of the commutative Chevalley–Eilenberg pair are first order",
        None,
        "trunc_poly(3)",
        Op::CartanTwoSided {
            calculus: PairCalculus::ChevalleyEilenberg,
            side: PairSide::Right,
        },
        Expect::Holds,
    ));
    scenario("calculi", checks)
}

fn jets() -> Scenario {
    let mut checks = Vec::new();
    for a in STANDARD_COMMUTATIVE {
        for k in 0..=2 {
            for s in ["regular", "free(2)"] {
                for t in ["regular", "free(2)"] {
                    checks.push(check(
                        format!("J{k}({s}) represents Diff{k}({s}, {t})"),
                        None,
                        a,
                        Op::Representability {
                            order: k,
                            source: s.into(),
                            target: t.into(),
                        },
                        Expect::Holds,
                    ));
                }
            }
        }
    }
    scenario("jets", checks)
}

fn composition() -> Scenario {
    let checks = [("matrix(2)", 3), ("trunc_poly(4)", 5)]
        .into_iter()
        .map(|(a, seed)| {
            check(
                "composition adds Lunts orders",
                None,
                a,
                Op::CompositionOrder {
                    samples: 20,
                    seed,
                    max_total: 3,
                },
                Expect::Holds,
            )
        })
        .collect();
    scenario("composition", checks)
}

fn graded() -> Scenario {
    let mut checks = vec![check(
        "graded derivations of two odd generators",
        None,
        "grassmann(2)",
        Op::GradedDerivations,
        Expect::Dimension { value: 8 },
    )];
    for a in ["grassmann(1)", "grassmann(2)"] {
        checks.push(check(
            "graded first-order operators split",
            None,
            a,
            Op::FirstOrderSplit {
                split: SplitKind::Graded,
                target: reg(),
            },
            Expect::Holds,
        ));
        checks.push(check("graded coboundary squares to zero", None, a, Op::GradedCe, Expect::Holds));
    }
    checks.push(check(
        "one consistent sign choice",
        None,
        "grassmann(2)",
        Op::GradedSignSearch,
        Expect::Holds,
    ));
    scenario("graded", checks)
}

type Builder = fn() -> Scenario;

const BUILTIN: &[(&str, Builder)] = &[
    ("commutative-collapse", commutative_collapse),
    ("dilemma-M2", dilemma),
    ("identities", identities),
    ("calculi", calculi),
    ("jets", jets),
    ("composition", composition),
    ("graded", graded),
    ("empty", || scenario("empty", Vec::new())),
];

pub fn builtin_ids() -> Vec<&'static str> {
    BUILTIN.iter().map(|(id, _)| *id).collect()
}

pub fn builtin(id: &str) -> Result<Scenario> {
    BUILTIN
        .iter()
        .find(|(k, _)| *k == id)
        .map(|(_, f)| f())
        .ok_or_else(|| Error::Parse(format!("unknown scenario `{id}`")))
}

/// Runs every built-in scenario in a fixed order.
pub fn builtin_suite() -> Result<Vec<Report>> {
    builtin_ids().into_iter().map(|id| run_scenario(&builtin(id)?)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::Status;

    #[test]
    fn every_claim_is_covered() {
        let tagged: Vec<String> = builtin_ids()
            .into_iter()
            .flat_map(|id| builtin(id).unwrap().checks)
            .filter_map(|c| c.claim)
            .collect();
        for (id, _) in CLAIMS {
            assert!(tagged.iter().any(|t| t == id), "claim `{id}` has no check");
        }
        for t in &tagged {
            assert!(CLAIMS.iter().any(|(id, _)| id == t), "unknown claim `{t}`");
        }
    }

    #[test]
    fn commutative_collapse_is_all_equal() {
        let r = run_scenario(&builtin("commutative-collapse").unwrap()).unwrap();
        for c in &r.checks {
            assert_eq!(c.status, Status::Pass, "{}: {:?}", c.name, c.error);
        }
    }

    #[test]
    fn identities_pass() {
        let r = run_scenario(&builtin("identities").unwrap()).unwrap();
        for c in &r.checks {
            assert!(c.status.ok(), "{} on {}: {:?}", c.name, c.algebra, c.error);
        }
    }

    #[test]
    fn graded_pass() {
        let r = run_scenario(&builtin("graded").unwrap()).unwrap();
        for c in &r.checks {
            assert!(c.status.ok(), "{} on {}: {:?} {:?}", c.name, c.algebra, c.error, c.value);
        }
    }
}
