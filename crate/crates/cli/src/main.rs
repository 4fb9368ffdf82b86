use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ncdiff::cartan::{cartan_vs_definitions, CartanPair, PairCalculus, PairSide};
use ncdiff::ce::graded::{GradedCe, GradedSigns, GRADED_CAP};
use ncdiff::ce::{CeCalculus, DEFAULT_CE_CAP};
use ncdiff::derivations::derivations;
use ncdiff::diffops::{compare_definitions, lunts_filtration, two_sided_filtration, Definition, Side};
use ncdiff::jets::{jet_module, representability, two_sided_jet};
use ncdiff::lab::{builtin, builtin_ids, module_named, run_scenario, suite_json, Report, Scenario};
use ncdiff::linalg::vector;
use ncdiff::algebra::AlgebraSpec;
use ncdiff::module::ModuleSpec;
use ncdiff::universal::UniversalCalculus;
use ncdiff::{catalog, Bimodule, Field, FiniteAlgebra, HomSpace};

#[derive(Parser)]
#[command(name = "ncdiff", version, about = "Exact differential operators over finite-dimensional algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Ground field for catalog algebras: `q` or `p:PRIME`.
    #[arg(long, global = true, default_value = "q")]
    field: String,
    /// Also write the report as JSON to this path.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    order: usize,
    #[arg(long, global = true, default_value = "left")]
    side: Side,
    /// Highest form degree for the Chevalley–Eilenberg commands.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Calculus {
    Universal,
    Ce,
}

#[derive(Clone, Copy, ValueEnum)]
enum DefArg {
    Grothendieck,
    Graded,
    DvFirstOrder,
    LuntsLeft,
    LuntsRight,
    TwoSided,
}

impl From<DefArg> for Definition {
    fn from(d: DefArg) -> Definition {
        match d {
            DefArg::Grothendieck => Definition::Grothendieck,
            DefArg::Graded => Definition::Graded,
            DefArg::DvFirstOrder => Definition::DvFirstOrder,
            DefArg::LuntsLeft => Definition::LuntsLeft,
            DefArg::LuntsRight => Definition::LuntsRight,
            DefArg::TwoSided => Definition::TwoSided,
        }
    }
}

/// Algebras are a JSON spec file or a catalog expression such as `matrix(2)`.
/// Modules are a JSON spec file or one of `regular`, `free(k)`, `omega1`, `ce1`,
/// `left_regular`, `right_regular`, `zero`.
#[derive(Subcommand)]
enum Command {
    /// Validate the algebra axioms.
    CheckAlgebra { algebra: String },
    /// Validate a module over an algebra.
    CheckModule {
        module: String,
        #[arg(long)]
        algebra: String,
    },
    /// Basis of the derivations into a module.
    Derivations {
        algebra: String,
        #[arg(long, default_value = "regular")]
        target: String,
        #[arg(long)]
        graded: bool,
    },
    /// One definition of differential operators at `--order`.
    DiffSpace {
        algebra: String,
        #[arg(long, value_enum, default_value = "grothendieck")]
        definition: DefArg,
        #[arg(long, default_value = "regular")]
        source: String,
        #[arg(long, default_value = "regular")]
        target: String,
    },
    /// The Lunts filtration on `--side` up to `--order`.
    Lunts {
        algebra: String,
        #[arg(long, default_value = "regular")]
        source: String,
        #[arg(long, default_value = "regular")]
        target: String,
    },
    /// The two-sided filtration up to `--order`.
    TwoSided {
        algebra: String,
        #[arg(long, default_value = "regular")]
        source: String,
        #[arg(long, default_value = "regular")]
        target: String,
    },
    /// The Chevalley–Eilenberg calculus up to `--max-degree`.
    Ce { algebra: String },
    /// The graded Chevalley–Eilenberg complex.
    GradedCe { algebra: String },
    /// The universal calculus.
    Universal { algebra: String },
    /// Vector fields of a Cartan pair against the operator definitions.
    Cartan {
        algebra: String,
        #[arg(long, value_enum, default_value = "universal")]
        calculus: Calculus,
    },
    /// Jet modules and their representability at `--order`.
    Jets {
        algebra: String,
        #[arg(long, default_value = "regular")]
        source: String,
        #[arg(long, default_value = "regular")]
        target: String,
        /// First-order two-sided jets instead of one-sided ones.
        #[arg(long)]
        two_sided: bool,
    },
    /// Pairwise relations between all definitions at `--order`.
    CompareDefs {
        algebra: String,
        #[arg(long, default_value = "regular")]
        source: String,
        #[arg(long, default_value = "regular")]
        target: String,
    },
    /// Run scenario files, or the built-in suite when none are given.
    RunScenarios {
        files: Vec<PathBuf>,
        /// Run only this built-in scenario.
        #[arg(long)]
        scenario: Option<String>,
        /// List the built-in scenarios and exit.
        #[arg(long)]
        list: bool,
    },
}

fn read_algebra_spec(path: &str) -> Result<AlgebraSpec> {
    let body = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    AlgebraSpec::from_json(&body).with_context(|| format!("parsing {path}"))
}

/// Loads without checking the axioms, for the validation commands.
fn load_algebra_unchecked(spec: &str, field: Field) -> Result<Arc<FiniteAlgebra>> {
    if Path::new(spec).is_file() {
        return Ok(Arc::new(read_algebra_spec(spec)?.to_algebra_unchecked()?));
    }
    load_algebra(spec, field)
}

fn load_algebra(spec: &str, field: Field) -> Result<Arc<FiniteAlgebra>> {
    let a = if Path::new(spec).is_file() {
        read_algebra_spec(spec)?
            .to_algebra()
            .with_context(|| format!("loading algebra from {spec}"))?
    } else {
        catalog(spec, field).with_context(|| format!("building catalog algebra `{spec}`"))?
    };
    Ok(Arc::new(a))
}

fn load_module(a: &Arc<FiniteAlgebra>, spec: &str) -> Result<Bimodule> {
    if Path::new(spec).is_file() {
        let m = ModuleSpec::load(spec)
            .and_then(|s| s.to_module(a))
            .with_context(|| format!("loading module from {spec}"))?;
        return Ok(m);
    }
    Ok(module_named(a, spec)?)
}

fn strings(v: &[ncdiff::Scalar]) -> String {
    vector::to_strings(v).join(" ")
}

/// Text for stdout, JSON for `--json`, and whether expectations held.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

fn run(cli: &Cli) -> Result<Output> {
    let field = Field::parse(&cli.field)?;
    let k = cli.order;
    let out = match &cli.command {
        Command::CheckAlgebra { algebra } => {
            let a = load_algebra_unchecked(algebra, field)?;
            let r = a.validate();
            let mut text = format!("algebra {} dim {} over {}\n", a.name(), a.dim(), a.field());
            text += &format!("valid: {}\n", r.valid);
            for v in &r.violations {
                text += &format!("  {v:?}\n");
            }
            Output {
                text,
                ok: r.valid,
                json: serde_json::to_value(&r)?,
            }
        }
        Command::CheckModule { module, algebra } => {
            let a = load_algebra(algebra, field)?;
            let m = if Path::new(module).is_file() {
                ModuleSpec::load(module)
                    .and_then(|s| s.to_module_unchecked(&a))
                    .with_context(|| format!("loading module from {module}"))?
            } else {
                module_named(&a, module)?
            };
            let r = m.validate();
            let mut text = format!("module {} dim {} over {}\n", m.name(), m.dim(), a.name());
            text += &format!("valid: {}  central: {:?}\n", r.valid, r.central);
            for v in &r.violations {
                text += &format!("  {v:?}\n");
            }
            Output {
                text,
                ok: r.valid,
                json: serde_json::to_value(&r)?,
            }
        }
        Command::Derivations { algebra, target, graded } => {
            let a = load_algebra(algebra, field)?;
            let q = load_module(&a, target)?;
            let d = derivations(&q, *graded)?;
            let mut text = String::new();
            let maps = d.basis_maps();
            for (i, m) in maps.iter().enumerate() {
                text += &format!("u{i} =\n{m}");
            }
            text += &format!("dim = {}\n", d.dim());
            let basis: Vec<Vec<String>> = maps.iter().map(|m| vector::to_strings(m.data())).collect();
            Output {
                text,
                ok: true,
                json: json!({ "algebra": a.name(), "target": q.name(), "graded": graded, "dim": d.dim(), "basis": basis }),
            }
        }
        Command::DiffSpace {
            algebra,
            definition,
            source,
            target,
        } => {
            let a = load_algebra(algebra, field)?;
            let hom = HomSpace::new(&load_module(&a, source)?, &load_module(&a, target)?)?;
            let def = Definition::from(*definition);
            let s = ncdiff::lab::diff_space(&hom, def, k)?;
            let basis: Vec<Vec<String>> = s.basis().iter().map(|v| vector::to_strings(v)).collect();
            let mut text = format!("{def} order {k} in Hom({source}, {target}) of dim {}\n", hom.dim());
            for v in s.basis() {
                text += &format!("  [{}]\n", strings(v));
            }
            text += &format!("dim = {}\n", s.dim());
            Output {
                text,
                ok: true,
                json: json!({ "algebra": a.name(), "definition": def, "order": k, "dim": s.dim(), "basis": basis }),
            }
        }
        Command::Lunts { algebra, source, target } => {
            let a = load_algebra(algebra, field)?;
            let hom = HomSpace::new(&load_module(&a, source)?, &load_module(&a, target)?)?;
            let f = lunts_filtration(&hom, k, cli.side)?;
            let dims = f.dims();
            let side = match cli.side {
                Side::Left => "left",
                Side::Right => "right",
            };
            Output {
                text: format!("{side} Lunts filtration dims {dims:?} (hom dim {})\n", hom.dim()),
                ok: f.is_monotone(),
                json: json!({ "algebra": a.name(), "side": cli.side, "hom_dim": hom.dim(), "dims": dims }),
            }
        }
        Command::TwoSided { algebra, source, target } => {
            let a = load_algebra(algebra, field)?;
            let hom = HomSpace::new(&load_module(&a, source)?, &load_module(&a, target)?)?;
            let f = two_sided_filtration(&hom, k)?;
            let dims = f.dims();
            Output {
                text: format!("two-sided filtration dims {dims:?} (hom dim {})\n", hom.dim()),
                ok: f.is_monotone(),
                json: json!({ "algebra": a.name(), "hom_dim": hom.dim(), "dims": dims }),
            }
        }
        Command::Ce { algebra } => {
            let a = load_algebra(algebra, field)?;
            let r = CeCalculus::new(&a, cli.max_degree.unwrap_or(DEFAULT_CE_CAP))?.report();
            let text = format!(
                "CE calculus of {}: {} derivations\ncochain dims {:?}\nform dims {:?}\nminimal dims {:?}\nd^2 = 0: {:?}\nd preserves forms: {:?}\n",
                r.algebra, r.derivations, r.cochain_dims, r.form_dims, r.minimal_dims, r.d_squared_zero, r.d_preserves_forms
            );
            Output {
                text,
                ok: r.holds(),
                json: serde_json::to_value(&r)?,
            }
        }
        Command::GradedCe { algebra } => {
            let a = load_algebra(algebra, field)?;
            let cap = cli.max_degree.unwrap_or(GRADED_CAP);
            let r = GradedCe::with_cap(&a, GradedSigns::CONSISTENT, cap)?.report()?;
            let text = format!(
                "graded CE of {}: {} even and {} odd derivations\ncochain dims {:?}\nform dims {:?}\nd^2 = 0: {:?}\n",
                r.algebra, r.even_derivations, r.odd_derivations, r.cochain_dims, r.form_dims, r.d_squared_zero
            );
            Output {
                text,
                ok: r.holds(),
                json: serde_json::to_value(&r)?,
            }
        }
        Command::Universal { algebra } => {
            let a = load_algebra(algebra, field)?;
            let r = UniversalCalculus::new(&a)?.report();
            let mut text = format!(
                "universal calculus of {}: dims {:?}\nOmega^1 = ker m: {}\nLeibniz: {}  d^2 = 0: {}\n",
                r.algebra, r.dims, r.omega1_is_multiplication_kernel, r.leibniz, r.d_squared_zero
            );
            if let Some(w) = &r.center_relation.witness {
                text += &format!("central {} with a.da - da.a = [{}]\n", w.element, w.difference.join(" "));
            }
            Output {
                text,
                ok: r.holds(),
                json: serde_json::to_value(&r)?,
            }
        }
        Command::Cartan { algebra, calculus } => {
            let a = load_algebra(algebra, field)?;
            let calc = match calculus {
                Calculus::Universal => PairCalculus::Universal,
                Calculus::Ce => PairCalculus::ChevalleyEilenberg,
            };
            let r = cartan_vs_definitions(&CartanPair::on(&a, calc, PairSide::from(cli.side))?)?;
            let derivs = r.hats.iter().filter(|h| h.derivation).count();
            let dv = r.hats.iter().filter(|h| h.dv_first_order).count();
            let mut text = format!(
                "Cartan pair on {} ({} side): dual dim {}, two-sided dual dim {}\nidentities hold: {}\nvector fields that are derivations: {derivs}, two-sided first order: {dv}\n",
                r.module, r.side, r.dual_dim, r.two_sided_dual_dim, r.identities_hold
            );
            if let Some(w) = &r.dv_witness {
                text += &format!("witness: element {} fails at b={} c={} p={}\n", w.element, w.b, w.c, w.p);
            }
            Output {
                text,
                ok: r.identities_hold && r.two_sided_hats_are_first_order,
                json: serde_json::to_value(&r)?,
            }
        }
        Command::Jets {
            algebra,
            source,
            target,
            two_sided,
        } => {
            let a = load_algebra(algebra, field)?;
            let p = load_module(&a, source)?;
            let q = load_module(&a, target)?;
            let jm = if *two_sided { two_sided_jet(&p)? } else { jet_module(&p, k)? };
            let r = representability(&jm, &q)?;
            let text = format!(
                "jets of {} at order {}: ambient {}, mu {}, jet dim {}\noperators {} vs maps {}; round trips {} {}\n",
                r.source, r.order, r.ambient_dim, r.mu_dim, r.jet_dim, r.diff_dim, r.hom_dim, r.maps_round_trip, r.operators_round_trip
            );
            Output {
                text,
                ok: r.holds(),
                json: serde_json::to_value(&r)?,
            }
        }
        Command::CompareDefs { algebra, source, target } => {
            let a = load_algebra(algebra, field)?;
            let hom = HomSpace::new(&load_module(&a, source)?, &load_module(&a, target)?)?;
            let r = compare_definitions(&hom, k)?;
            let mut text = format!("order {k} on Hom({source}, {target}) over {}\n", r.algebra);
            for d in &r.definitions {
                text += &format!("  {:<16} dim {}{}\n", d.definition.slug(), d.dim, if d.naive { " (naive)" } else { "" });
            }
            for p in &r.relations {
                text += &format!("  {} vs {}: {:?}\n", p.first, p.second, p.relation);
            }
            for (d, why) in &r.skipped {
                text += &format!("  skipped {d}: {why}\n");
            }
            Output {
                text,
                ok: true,
                json: serde_json::to_value(&r)?,
            }
        }
        Command::RunScenarios { files, scenario, list } => {
            if *list {
                return Ok(Output {
                    text: builtin_ids().join("\n") + "\n",
                    ok: true,
                    json: json!(builtin_ids()),
                });
            }
            let scenarios: Vec<Scenario> = if !files.is_empty() {
                files
                    .iter()
                    .map(|f| {
                        let s = std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
                        Ok(Scenario::from_json(&s)?)
                    })
                    .collect::<Result<_>>()?
            } else if let Some(id) = scenario {
                vec![builtin(id)?]
            } else {
                builtin_ids().into_iter().map(builtin).collect::<ncdiff::Result<_>>()?
            };
            let reports: Vec<Report> = scenarios.iter().map(run_scenario).collect::<ncdiff::Result<_>>()?;
            let mut text = String::new();
            for r in &reports {
                let failed = r.failures().count();
                text += &format!("{}: {} checks, {failed} failed\n", r.scenario, r.checks.len());
                for c in &r.checks {
                    text += &format!("  [{:?}] {} ({})\n", c.status, c.name, c.algebra);
                }
            }
            let ok = reports.iter().all(|r| r.passed);
            let json = serde_json::from_str(&suite_json(&reports))?;
            Output { text, ok, json }
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    print!("{}", out.text);
    if let Some(path) = &cli.json {
        let body = serde_json::to_string_pretty(&out.json).expect("json serializes") + "\n";
        if let Err(e) = std::fs::write(path, body) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
