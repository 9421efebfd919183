//! The `vkt` command line. Every subcommand writes one JSON document to
//! standard output and exits with 0 on success, 1 when a check fails (the
//! report carries a witness) and 2 on bad input.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::canonical::{
    behavior_map, characteristic_formula, final_level, level_size, stable_behavior_kernel,
    terminal_uniqueness_check, TerminalViolation,
};
use crate::formula::{parse, Formula};
use crate::json::{
    model_to_json, parse_map, parse_model, parse_relation, parse_state_list, parse_subbase,
    parse_topology, relation_to_json, set_to_json, topology_to_json, InputError,
};
use crate::kripke::{
    check_bisimulation, check_saturation_finite, largest_bisimulation, quotient, BisimViolation,
    Clause, KripkeModel, Partition, Relation,
};
use crate::ladder::{
    ladder_eval, member_formula, nonsaturation_witness_chain, saturation_check_extended, Ladder,
    Uncovered,
};
use crate::selftest;
use crate::set::StateSet;
use crate::topology::{
    check_topological_model, formula_topology, AtomWitness, FiniteTopology, TopologicalModel,
};
use crate::vietoris::{
    closed_bisimulation_check, closed_subcoalgebra_check, structure_map_continuous,
    subbase_preimage_violation, vietoris_map, ClosureError, Modality, VietorisSpace,
};

#[derive(Debug, Parser)]
#[command(name = "vkt", version, about = "Modal logic, bisimulation and finite Vietoris coalgebras")]
struct Cli {
    /// Indent the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct ModelArg {
    #[arg(long)]
    model: PathBuf,
}

#[derive(Debug, Args)]
struct PairArgs {
    #[arg(long)]
    model_a: PathBuf,
    #[arg(long)]
    model_b: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula and print it back with its depth and atoms.
    Parse {
        #[arg(long)]
        formula: String,
    },
    /// Negation normal form.
    Nnf {
        #[arg(long)]
        formula: String,
    },
    /// Extension of a formula, or `⟨R⟩U` / `[R]U` of a state set.
    Eval {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long, required_unless_present = "pre", conflicts_with = "pre")]
        formula: Option<String>,
        /// `diamond` or `box`.
        #[arg(long, requires = "set", value_parser = ["diamond", "box"])]
        pre: Option<String>,
        /// Comma-separated state names.
        #[arg(long)]
        set: Option<String>,
    },
    /// Largest bisimulation between two models.
    Bisim {
        #[command(flatten)]
        models: PairArgs,
    },
    /// Check that a relation (optionally its converse, or its composite
    /// with a second relation into a third model) is a bisimulation.
    IsBisim {
        #[command(flatten)]
        models: PairArgs,
        #[arg(long)]
        relation: PathBuf,
        #[arg(long, conflicts_with = "compose")]
        converse: bool,
        #[arg(long, requires = "model_c")]
        compose: Option<PathBuf>,
        #[arg(long)]
        model_c: Option<PathBuf>,
    },
    /// Check that a state map is a homomorphism.
    HomCheck {
        #[command(flatten)]
        models: PairArgs,
        #[arg(long)]
        map: PathBuf,
    },
    /// Quotient by the largest auto-bisimulation.
    Quotient {
        #[command(flatten)]
        model: ModelArg,
    },
    /// The formula-induced topology, or the topology of a subbase file.
    Topologize {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        subbase: Option<PathBuf>,
        /// Also report the closure and clopen status of this state set.
        #[arg(long)]
        closure: Option<String>,
    },
    /// Check the topological model conditions.
    CheckTopmodel {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        topology: PathBuf,
    },
    /// Continuity of the structure map into the Vietoris space; with
    /// `--map`, the functor action of a continuous map instead.
    VietorisCheck {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        topology: PathBuf,
        /// List the Vietoris points and subbase.
        #[arg(long)]
        space: bool,
        #[arg(long, requires_all = ["target_model", "target_topology"])]
        map: Option<PathBuf>,
        #[arg(long)]
        target_model: Option<PathBuf>,
        #[arg(long)]
        target_topology: Option<PathBuf>,
    },
    /// Closure of a substructure is a substructure.
    ClosureSub {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        topology: PathBuf,
        /// Comma-separated state names.
        #[arg(long)]
        subset: String,
    },
    /// Closure of a bisimulation is a bisimulation.
    ClosureBisim {
        #[command(flatten)]
        models: PairArgs,
        #[arg(long)]
        topology_a: PathBuf,
        #[arg(long)]
        topology_b: PathBuf,
        #[arg(long)]
        relation: PathBuf,
    },
    /// Level cardinalities of the final sequence.
    FinalSeq {
        /// Comma-separated atom names.
        #[arg(long, default_value = "")]
        atoms: String,
        #[arg(long)]
        depth: usize,
        /// List every type with its characteristic formula.
        #[arg(long)]
        types: bool,
    },
    /// Depth-d behaviour types, their kernel, and the terminal checks.
    Behavior {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        depth: usize,
    },
    /// Compare model satisfaction with satisfaction on behaviour types.
    TruthLemma {
        #[command(flatten)]
        model: ModelArg,
        #[arg(long)]
        formula: String,
        /// Type depth; defaults to the formula's modal depth.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Exact evaluation on the infinite chain structures.
    Ladder {
        #[command(subcommand)]
        command: LadderCommand,
    },
    /// Run the randomised property suites.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
enum LadderCommand {
    Eval {
        #[arg(long, value_parser = ["chain", "extended"])]
        which: String,
        #[arg(long)]
        formula: String,
    },
    /// Non-saturation of the chain's root.
    WitnessChain {
        #[arg(long, default_value_t = 8)]
        bound: usize,
    },
    /// Decide the root's box-disjunction on the extended chain.
    Saturation {
        #[arg(long)]
        family: Vec<String>,
        /// Add the family □^{i+1}⊥ for every i.
        #[arg(long)]
        param: bool,
    },
}

/// Exit status and standard output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug)]
struct Failure {
    file: Option<PathBuf>,
    location: Option<String>,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            file: None,
            location: None,
            kind: "usage",
            message: message.into(),
        }
    }

    fn input(file: &Path, e: InputError) -> Self {
        Failure {
            file: Some(file.to_path_buf()),
            location: Some(e.location),
            kind: "input",
            message: e.message,
        }
    }

    fn kind(kind: &'static str, message: impl ToString) -> Self {
        Failure {
            file: None,
            location: None,
            kind,
            message: message.to_string(),
        }
    }

    fn to_json(&self) -> Value {
        json!({
            "error": {
                "file": self.file.as_ref().map(|p| p.display().to_string()),
                "kind": self.kind,
                "location": self.location,
                "message": self.message,
            }
        })
    }
}

type Res<T> = Result<T, Failure>;

fn read(path: &Path) -> Res<String> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        file: Some(path.to_path_buf()),
        location: None,
        kind: "io",
        message: e.to_string(),
    })
}

fn load_model(path: &Path) -> Res<KripkeModel> {
    parse_model(&read(path)?).map_err(|e| Failure::input(path, e))
}

fn load_topology(path: &Path, m: &KripkeModel) -> Res<FiniteTopology> {
    parse_topology(&read(path)?, m).map_err(|e| Failure::input(path, e))
}

fn load_relation(path: &Path, a: &KripkeModel, b: &KripkeModel) -> Res<Relation> {
    parse_relation(&read(path)?, a, b).map_err(|e| Failure::input(path, e))
}

fn topological_model(m: KripkeModel, t: FiniteTopology) -> Res<TopologicalModel> {
    TopologicalModel::new(m, t).map_err(|e| Failure::kind("input", e))
}

fn formula_arg(text: &str) -> Res<Formula> {
    parse(text).map_err(|e| Failure {
        file: None,
        location: Some(format!("--formula column {}", e.column())),
        kind: "syntax",
        message: e.to_string(),
    })
}

fn model_formula(m: &KripkeModel, text: &str) -> Res<Formula> {
    let f = formula_arg(text)?;
    if let Some(atom) = f.atoms().into_iter().find(|a| !m.atoms().contains(a)) {
        return Err(Failure {
            file: None,
            location: Some("--formula".into()),
            kind: "input",
            message: format!("undeclared atom {atom:?}"),
        });
    }
    Ok(f)
}

fn state_list(text: &str, m: &KripkeModel, flag: &str) -> Res<StateSet> {
    parse_state_list(text, m).map_err(|e| Failure {
        file: None,
        location: Some(flag.into()),
        kind: "input",
        message: e.message,
    })
}

/// A check result: `{"check": .., "pass": .., "witness": ..}` plus extras.
fn report(check: &str, witness: Option<Value>, extra: Value) -> (bool, Value) {
    let pass = witness.is_none();
    let mut out = Map::new();
    out.insert("check".into(), check.into());
    out.insert("pass".into(), pass.into());
    out.insert("witness".into(), witness.unwrap_or(Value::Null));
    if let Value::Object(extra) = extra {
        out.extend(extra);
    }
    (pass, Value::Object(out))
}

fn bisim_witness(v: &BisimViolation, a: &KripkeModel, b: &KripkeModel) -> Value {
    let (x, y) = v.pair;
    let mut w = json!({ "pair": [a.name(x), b.name(y)] });
    let (clause, successor) = match v.clause {
        Clause::Valuation => ("valuation", None),
        Clause::Forth { successor } => ("forth", Some(a.name(successor))),
        Clause::Back { successor } => ("back", Some(b.name(successor))),
    };
    w["clause"] = clause.into();
    w["successor"] = successor.into();
    w
}

fn atom_witness(w: &AtomWitness, clause: &str, m: &KripkeModel) -> Value {
    json!({
        "atom": w.atom,
        "clause": clause,
        "complement": w.complement,
        "set": set_to_json(&w.extension, m.names()),
    })
}

fn open_witness(clause: &str, open: &StateSet, image: StateSet, m: &KripkeModel) -> Value {
    json!({
        "clause": clause,
        "image": set_to_json(&image, m.names()),
        "open": set_to_json(open, m.names()),
    })
}

fn partition_json(p: &Partition, m: &KripkeModel) -> Value {
    p.blocks()
        .iter()
        .map(|b| b.iter().map(|&x| m.name(x)).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    code: 0,
                    stdout: e.to_string(),
                };
            }
            let body = Failure::usage(e.kind().to_string()).to_json();
            return Outcome {
                code: 2,
                stdout: format!("{}\n", body),
            };
        }
    };
    let (code, value) = match dispatch(cli.command) {
        Ok((pass, v)) => (if pass { 0 } else { 1 }, v),
        Err(f) => (2, f.to_json()),
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&value)
    } else {
        serde_json::to_string(&value)
    }
    .expect("values serialize");
    Outcome {
        code,
        stdout: format!("{text}\n"),
    }
}

fn dispatch(command: Command) -> Res<(bool, Value)> {
    let ok = |v: Value| Ok((true, v));
    match command {
        Command::Parse { formula } => {
            let f = formula_arg(&formula)?;
            ok(json!({
                "atoms": f.atoms(),
                "modal_depth": f.modal_depth(),
                "result": f.to_string(),
            }))
        }
        Command::Nnf { formula } => ok(json!({ "result": formula_arg(&formula)?.to_nnf().to_string() })),
        Command::Eval {
            model,
            formula,
            pre,
            set,
        } => {
            let m = load_model(&model.model)?;
            let result = match (formula, pre, set) {
                (Some(f), _, _) => {
                    let f = model_formula(&m, &f)?;
                    m.eval(&f).expect("atoms checked")
                }
                (None, Some(pre), Some(set)) => {
                    let u = state_list(&set, &m, "--set")?;
                    if pre == "diamond" {
                        m.diamond_pre(&u)
                    } else {
                        m.box_pre(&u)
                    }
                }
                _ => return Err(Failure::usage("need --formula or --pre with --set")),
            };
            ok(json!({ "result": set_to_json(&result, m.names()) }))
        }
        Command::Bisim { models } => {
            let a = load_model(&models.model_a)?;
            let b = load_model(&models.model_b)?;
            ok(relation_to_json(&largest_bisimulation(&a, &b), &a, &b))
        }
        Command::IsBisim {
            models,
            relation,
            converse,
            compose,
            model_c,
        } => {
            let a = load_model(&models.model_a)?;
            let b = load_model(&models.model_b)?;
            let r = load_relation(&relation, &a, &b)?;
            let (left, right, r) = match (converse, compose, model_c) {
                (true, _, _) => (b.clone(), a.clone(), r.converse()),
                (false, Some(path), Some(c)) => {
                    let c = load_model(&c)?;
                    let r2 = load_relation(&path, &b, &c)?;
                    let composed = r.compose(&r2).map_err(|e| Failure::kind("input", e))?;
                    (a.clone(), c, composed)
                }
                _ => (a.clone(), b.clone(), r),
            };
            let witness = check_bisimulation(&left, &right, &r)
                .err()
                .map(|v| bisim_witness(&v, &left, &right));
            let extra = json!({ "relation": relation_to_json(&r, &left, &right)["pairs"] });
            Ok(report("is-bisim", witness, extra))
        }
        Command::HomCheck { models, map } => {
            let a = load_model(&models.model_a)?;
            let b = load_model(&models.model_b)?;
            let f = parse_map(&read(&map)?, &a, &b).map_err(|e| Failure::input(&map, e))?;
            let graph = Relation::graph(&f, b.len()).expect("map resolved against b");
            let witness = check_bisimulation(&a, &b, &graph)
                .err()
                .map(|v| bisim_witness(&v, &a, &b));
            Ok(report("hom-check", witness, json!({})))
        }
        Command::Quotient { model } => {
            let m = load_model(&model.model)?;
            let (q, pi) = quotient(&m);
            let projection: Map<String, Value> = m
                .states()
                .map(|x| (m.name(x).to_string(), q.name(pi[x]).into()))
                .collect();
            ok(json!({
                "model": model_to_json(&q),
                "projection": projection,
                "saturated": check_saturation_finite(&m),
            }))
        }
        Command::Topologize {
            model,
            subbase,
            closure,
        } => {
            let m = load_model(&model.model)?;
            let t = match subbase {
                Some(path) => parse_subbase(&read(&path)?, &m).map_err(|e| Failure::input(&path, e))?,
                None => formula_topology(&m)
                    .map_err(|e| Failure::kind("input", e))?
                    .topology()
                    .clone(),
            };
            let mut out = json!({ "topology": topology_to_json(&t, m.names()) });
            if let Some(text) = closure {
                let a = state_list(&text, &m, "--closure")?;
                out["closure"] = set_to_json(&t.closure(&a), m.names());
                out["clopen"] = t.is_clopen(&a).into();
            }
            ok(out)
        }
        Command::CheckTopmodel { model, topology } => {
            let m = load_model(&model.model)?;
            let t = load_topology(&topology, &m)?;
            let tm = topological_model(m, t)?;
            let m = tm.model();
            let r = check_topological_model(&tm);
            let witness = r
                .diamond_open
                .as_ref()
                .map(|o| open_witness("diamond-open", o, m.diamond_pre(o), m))
                .or_else(|| r.box_open.as_ref().map(|o| open_witness("box-open", o, m.box_pre(o), m)))
                .or_else(|| r.atoms_clopen.as_ref().map(|w| atom_witness(w, "atoms-clopen", m)));
            let clauses = json!({
                "atoms-clopen": r.atoms_clopen.is_none(),
                "box-open": r.box_open.is_none(),
                "compact-successors": r.successors_compact,
                "diamond-open": r.diamond_open.is_none(),
            });
            Ok(report("check-topmodel", witness, json!({ "clauses": clauses })))
        }
        Command::VietorisCheck {
            model,
            topology,
            space,
            map,
            target_model,
            target_topology,
        } => {
            let m = load_model(&model.model)?;
            let t = load_topology(&topology, &m)?;
            if let (Some(map), Some(tm_path), Some(tt_path)) = (map, target_model, target_topology) {
                let target = load_model(&tm_path)?;
                let tt = load_topology(&tt_path, &target)?;
                let f = parse_map(&read(&map)?, &m, &target).map_err(|e| Failure::input(&map, e))?;
                return vietoris_functor(&m, t, &target, tt, &f);
            }
            let mut extra = json!({});
            if space {
                let v = VietorisSpace::new(t.clone()).map_err(|e| Failure::kind("input", e))?;
                extra["points"] = v.points().map(|k| set_to_json(&k, m.names())).collect::<Vec<_>>().into();
                extra["subbase"] = v
                    .subbase()
                    .into_iter()
                    .map(|(md, o, members)| {
                        json!({
                            "kind": if md == Modality::Diamond { "diamond" } else { "box" },
                            "members": members.iter().map(|i| set_to_json(&v.point(i), m.names())).collect::<Vec<_>>(),
                            "open": set_to_json(&o, m.names()),
                        })
                    })
                    .collect::<Vec<_>>()
                    .into();
            }
            let tm = topological_model(m, t)?;
            let m = tm.model();
            let r = structure_map_continuous(&tm);
            let witness = r
                .diamond_clause
                .as_ref()
                .map(|o| open_witness("diamond-preimage", o, m.diamond_pre(o), m))
                .or_else(|| r.box_clause.as_ref().map(|o| open_witness("box-preimage", o, m.box_pre(o), m)))
                .or_else(|| r.valuation_clause.as_ref().map(|w| atom_witness(w, "valuation-preimage", m)))
                .or_else(|| {
                    r.identity_violation
                        .as_ref()
                        .map(|o| json!({ "clause": "subbase-identities", "open": set_to_json(o, m.names()) }))
                });
            extra["clauses"] = json!({
                "box-preimage": r.box_clause.is_none(),
                "diamond-preimage": r.diamond_clause.is_none(),
                "subbase-identities": r.identity_violation.is_none(),
                "successors-are-points": r.successors_are_points,
                "valuation-preimage": r.valuation_clause.is_none(),
            });
            Ok(report("vietoris-check", witness, extra))
        }
        Command::ClosureSub {
            model,
            topology,
            subset,
        } => {
            let m = load_model(&model.model)?;
            let t = load_topology(&topology, &m)?;
            let u = state_list(&subset, &m, "--subset")?;
            let tm = topological_model(m, t)?;
            let m = tm.model();
            let r = closed_subcoalgebra_check(&tm, &u).map_err(|e| closure_failure(e, m, m))?;
            let witness = r.violation.map(|(x, y)| json!({ "edge": [m.name(x), m.name(y)] }));
            Ok(report(
                "closure-sub",
                witness,
                json!({ "closure": set_to_json(&r.closure, m.names()) }),
            ))
        }
        Command::ClosureBisim {
            models,
            topology_a,
            topology_b,
            relation,
        } => {
            let a = load_model(&models.model_a)?;
            let b = load_model(&models.model_b)?;
            let ta = load_topology(&topology_a, &a)?;
            let tb = load_topology(&topology_b, &b)?;
            let s = load_relation(&relation, &a, &b)?;
            let tma = topological_model(a, ta)?;
            let tmb = topological_model(b, tb)?;
            let (a, b) = (tma.model(), tmb.model());
            let r = closed_bisimulation_check(&tma, &tmb, &s).map_err(|e| closure_failure(e, a, b))?;
            let witness = r.violation.map(|v| bisim_witness(&v, a, b));
            Ok(report(
                "closure-bisim",
                witness,
                json!({ "closure": relation_to_json(&r.closure, a, b)["pairs"] }),
            ))
        }
        Command::FinalSeq { atoms, depth, types } => {
            let atoms: crate::AtomSet = atoms
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from)
                .collect();
            if let Some(bad) = atoms.iter().find(|a| !crate::kripke::valid_atom_name(a)) {
                return Err(Failure {
                    file: None,
                    location: Some("--atoms".into()),
                    kind: "input",
                    message: format!("invalid atom name {bad:?}"),
                });
            }
            let sizes: Vec<Value> = (0..=depth)
                .map(|d| match level_size(atoms.len(), d) {
                    Some(n) => n.into(),
                    None => Value::Null,
                })
                .collect();
            let mut out = json!({ "atoms": atoms, "depth": depth, "sizes": sizes });
            if types {
                let level = final_level(&atoms, depth).map_err(|e| Failure::kind("limit", e))?;
                let listing = level
                    .types
                    .iter()
                    .map(|t| {
                        let chi = characteristic_formula(t, &atoms).map_err(|e| Failure::kind("limit", e))?;
                        Ok(json!({ "characteristic": chi.to_string(), "type": t.to_string() }))
                    })
                    .collect::<Res<Vec<_>>>()?;
                out["types"] = listing.into();
            }
            ok(out)
        }
        Command::Behavior { model, depth } => {
            let m = load_model(&model.model)?;
            let beh = behavior_map(&m, depth);
            let types: Map<String, Value> = m
                .states()
                .map(|x| (m.name(x).to_string(), beh[x].to_string().into()))
                .collect();
            let kernel = Partition::from_keys(&beh);
            let (stable, stable_depth) = stable_behavior_kernel(&m);
            let terminal = terminal_uniqueness_check(&m, depth).map_err(|e| Failure::kind("limit", e))?;
            let witness = terminal.violation.as_ref().map(|v| terminal_witness(v, &m));
            Ok(report(
                "behavior",
                witness,
                json!({
                    "depth": depth,
                    "distinct_types": terminal.distinct_types,
                    "kernel": partition_json(&kernel, &m),
                    "stable_depth": stable_depth,
                    "stable_kernel": partition_json(&stable, &m),
                    "types": types,
                }),
            ))
        }
        Command::TruthLemma {
            model,
            formula,
            depth,
        } => {
            let m = load_model(&model.model)?;
            let f = model_formula(&m, &formula)?;
            let d = depth.unwrap_or_else(|| f.modal_depth());
            if d < f.modal_depth() {
                return Err(Failure::usage(format!(
                    "--depth {d} is below the formula's modal depth {}",
                    f.modal_depth()
                )));
            }
            let truth = m.eval(&f).expect("atoms checked");
            let beh = behavior_map(&m, d);
            let mut states = Map::new();
            let mut witness = None;
            for x in m.states() {
                let on_type = beh[x].satisfies(&f).expect("depth checked");
                if on_type != truth.contains(x) && witness.is_none() {
                    witness = Some(json!({ "state": m.name(x) }));
                }
                states.insert(
                    m.name(x).to_string(),
                    json!({ "model": truth.contains(x), "type": on_type }),
                );
            }
            Ok(report("truth-lemma", witness, json!({ "depth": d, "states": states })))
        }
        Command::Ladder { command } => ladder(command),
        Command::Selftest { seed, count } => {
            let results = selftest::run(seed, count);
            let witness = results
                .iter()
                .find(|r| !r.pass())
                .map(|r| json!({ "suite": r.name, "failure": r.first_failure }));
            let suites: Vec<Value> = results
                .iter()
                .map(|r| {
                    json!({
                        "failures": r.failures,
                        "first_failure": r.first_failure,
                        "instances": r.instances,
                        "name": r.name,
                    })
                })
                .collect();
            Ok(report("selftest", witness, json!({ "seed": seed, "suites": suites })))
        }
    }
}

fn vietoris_functor(
    m: &KripkeModel,
    t: FiniteTopology,
    target: &KripkeModel,
    tt: FiniteTopology,
    f: &[usize],
) -> Res<(bool, Value)> {
    let from = VietorisSpace::new(t).map_err(|e| Failure::kind("input", e))?;
    let to = VietorisSpace::new(tt).map_err(|e| Failure::kind("input", e))?;
    let vf = vietoris_map(f, &from, &to).map_err(|e| Failure::kind("input", e))?;
    let witness = subbase_preimage_violation(f, &vf, &from, &to).map(|(md, o)| {
        json!({
            "kind": if md == Modality::Diamond { "diamond" } else { "box" },
            "open": set_to_json(&o, target.names()),
        })
    });
    let images: Vec<Value> = vf
        .iter()
        .enumerate()
        .map(|(k, &fk)| json!([set_to_json(&from.point(k), m.names()), set_to_json(&to.point(fk), target.names())]))
        .collect();
    Ok(report("vietoris-map", witness, json!({ "images": images })))
}

fn closure_failure(e: ClosureError, a: &KripkeModel, b: &KripkeModel) -> Failure {
    let message = match &e {
        ClosureError::NotSubstructure(x, y) => {
            format!("not a substructure: {} -> {} leaves the set", a.name(*x), a.name(*y))
        }
        ClosureError::NotBisimulation(v) => {
            format!("not a bisimulation: {}", bisim_witness(v, a, b))
        }
        other => other.to_string(),
    };
    Failure::kind("precondition", message)
}

fn terminal_witness(v: &TerminalViolation, m: &KripkeModel) -> Value {
    match v {
        TerminalViolation::Forth { depth, state, successor } => {
            json!({ "clause": "forth", "depth": depth, "state": m.name(*state), "successor": m.name(*successor) })
        }
        TerminalViolation::Back { depth, state } => {
            json!({ "clause": "back", "depth": depth, "state": m.name(*state) })
        }
        TerminalViolation::Valuation { depth, state } => {
            json!({ "clause": "valuation", "depth": depth, "state": m.name(*state) })
        }
        TerminalViolation::Separation { first, second } => {
            json!({ "clause": "separation", "states": [m.name(*first), m.name(*second)] })
        }
    }
}

fn ladder(command: LadderCommand) -> Res<(bool, Value)> {
    match command {
        LadderCommand::Eval { which, formula } => {
            let which: Ladder = which.parse().map_err(Failure::usage)?;
            let f = formula_arg(&formula)?;
            let v = ladder_eval(which, &f).map_err(|e| Failure::kind("input", e))?;
            Ok((
                true,
                json!({ "inf": v.at_inf, "prefix": v.prefix, "root": v.at_root, "tail": v.tail }),
            ))
        }
        LadderCommand::WitnessChain { bound } => {
            if bound > 20 {
                return Err(Failure::usage("--bound above 20 enumerates too many index sets"));
            }
            let r = nonsaturation_witness_chain(bound);
            let witness = (!r.not_saturated()).then(|| {
                let bad = r.failures.iter().find(|f| f.witness.is_none());
                json!({ "covered_by": bad.map(|f| f.indices.clone()) })
            });
            let failures: Vec<Value> = r
                .failures
                .iter()
                .map(|f| json!({ "indices": f.indices, "state": f.witness.map(|m| format!("s{m}")) }))
                .collect();
            Ok(report(
                "nonsaturation-chain",
                witness,
                json!({
                    "bound": bound,
                    "failures": failures,
                    "infinite_family_covers": r.infinite_family_covers,
                    "saturated": !r.not_saturated(),
                }),
            ))
        }
        LadderCommand::Saturation { family, param } => {
            let family = family.iter().map(|f| formula_arg(f)).collect::<Res<Vec<_>>>()?;
            let r = saturation_check_extended(&family, param).map_err(|e| Failure::kind("input", e))?;
            let witness = r.witness.map(|w| match w {
                Uncovered::Chain(j) => json!({ "state": format!("s{j}") }),
                Uncovered::Inf => json!({ "state": "s_inf" }),
            });
            let subfamily: Vec<String> = r
                .subfamily
                .iter()
                .map(|&mb| member_formula(&family, mb).to_string())
                .collect();
            Ok(report(
                "saturation-extended",
                witness,
                json!({ "holds": r.holds, "subfamily": subfamily }),
            ))
        }
    }
}
