//! Randomised property suites behind `vkt selftest`. Each suite draws its
//! own instances from a generator seeded with `seed + suite index`, so a
//! given seed and count always replays the same instances.

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use crate::canonical::{behavior_map, stable_behavior_kernel};
use crate::formula::Formula;
use crate::kripke::{
    is_bisimulation, is_homomorphism, kernel, largest_bisimulation, quotient, Relation,
};
use crate::ladder::{ladder_eval, Ladder};
use crate::random;
use crate::topology::{check_topological_model, formula_topology, TopologicalModel};
use crate::vietoris::{closed_bisimulation_check, closed_subcoalgebra_check, structure_map_continuous};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub instances: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn pass(&self) -> bool {
        self.failures == 0
    }
}

type Check = fn(&mut StdRng) -> Result<(), String>;

pub const SUITES: &[(&str, Check)] = &[
    ("nnf", nnf_instance),
    ("bisimulation-algebra", bisim_algebra_instance),
    ("hennessy-milner", hennessy_milner_instance),
    ("quotient", quotient_instance),
    ("topmodel-vs-continuity", correspondence_instance),
    ("formula-topology", formula_topology_instance),
    ("closure-subcoalgebra", closure_sub_instance),
    ("closure-bisimulation", closure_bisim_instance),
    ("truth-lemma", truth_lemma_instance),
    ("ladder-collapse", ladder_instance),
];

/// Runs every suite `count` times.
pub fn run(seed: u64, count: usize) -> Vec<SuiteResult> {
    SUITES
        .iter()
        .enumerate()
        .map(|(i, &(name, check))| {
            let mut rng = StdRng::seed_from_u64(seed.wrapping_add(i as u64));
            let mut failures = 0;
            let mut first_failure = None;
            for n in 0..count {
                if let Err(msg) = check(&mut rng) {
                    failures += 1;
                    first_failure.get_or_insert_with(|| format!("instance {n}: {msg}"));
                }
            }
            SuiteResult {
                name,
                instances: count,
                failures,
                first_failure,
            }
        })
        .collect()
}

fn nnf_instance(rng: &mut StdRng) -> Result<(), String> {
    let m = random::small_model(rng, 8, 2);
    let f = random::formula(rng, m.atoms(), 6, 24);
    let g = f.to_nnf();
    if !g.is_nnf() || g.modal_depth() != f.modal_depth() {
        return Err(format!("{g} is not a depth-preserving nnf of {f}"));
    }
    if m.eval(&f) != m.eval(&g) {
        return Err(format!("{f} and {g} differ"));
    }
    Ok(())
}

fn bisim_algebra_instance(rng: &mut StdRng) -> Result<(), String> {
    let a = random::small_model(rng, 5, 1);
    let b = random::small_model(rng, 5, 1);
    let c = random::small_model(rng, 5, 1);
    let ab = largest_bisimulation(&a, &b);
    let bc = largest_bisimulation(&b, &c);
    if !largest_bisimulation(&a, &a).is_equivalence() {
        return Err("bisimilarity is not an equivalence".into());
    }
    if !is_bisimulation(&b, &a, &ab.converse()) {
        return Err("converse of a bisimulation".into());
    }
    let ac = ab.compose(&bc).map_err(|e| e.to_string())?;
    if !is_bisimulation(&a, &c, &ac) {
        return Err("composition of bisimulations".into());
    }
    Ok(())
}

/// Pairs related by the largest bisimulation between `a` and `b`, read off
/// the stable type kernel of their disjoint union.
pub fn kernel_relation(a: &crate::KripkeModel, b: &crate::KripkeModel) -> Relation {
    let union = a.disjoint_union(b);
    let (blocks, _) = stable_behavior_kernel(&union);
    let pairs = a
        .states()
        .flat_map(|x| b.states().map(move |y| (x, y)))
        .filter(|&(x, y)| blocks.block_of(x) == blocks.block_of(a.len() + y));
    Relation::new(a.len(), b.len(), pairs).expect("pairs in range")
}

fn hennessy_milner_instance(rng: &mut StdRng) -> Result<(), String> {
    let a = random::small_model(rng, 6, 1);
    let b = random::small_model(rng, 6, 1);
    if largest_bisimulation(&a, &b) != kernel_relation(&a, &b) {
        return Err("bisimilarity differs from the stable type kernel".into());
    }
    Ok(())
}

fn quotient_instance(rng: &mut StdRng) -> Result<(), String> {
    let m = random::small_model(rng, 8, 2);
    let (q, pi) = quotient(&m);
    if !is_homomorphism(&m, &q, &pi) {
        return Err("projection is not a homomorphism".into());
    }
    if largest_bisimulation(&q, &q) != Relation::identity(q.len()) {
        return Err("quotient is not simple".into());
    }
    if kernel(&pi, q.len()) != largest_bisimulation(&m, &m) {
        return Err("kernel of the projection differs from bisimilarity".into());
    }
    Ok(())
}

fn correspondence_instance(rng: &mut StdRng) -> Result<(), String> {
    let m = random::small_model(rng, 6, 2);
    let tm = if rng.random_bool(0.5) {
        random::topological_model(rng, &m)
    } else {
        TopologicalModel::new(m.clone(), random::topology(rng, m.len())).expect("sizes match")
    };
    let topo = check_topological_model(&tm);
    let smap = structure_map_continuous(&tm);
    let clauses = [
        (topo.diamond_open.is_none(), smap.diamond_clause.is_none()),
        (topo.box_open.is_none(), smap.box_clause.is_none()),
        (topo.atoms_clopen.is_none(), smap.valuation_clause.is_none()),
        (topo.successors_compact, smap.successors_are_points),
    ];
    if clauses.iter().any(|(l, r)| l != r) || topo.pass() != smap.pass() {
        return Err(format!("{topo:?} vs {smap:?}"));
    }
    Ok(())
}

fn formula_topology_instance(rng: &mut StdRng) -> Result<(), String> {
    let m = random::small_model(rng, 8, 2);
    let tm = formula_topology(&m).map_err(|e| e.to_string())?;
    let report = check_topological_model(&tm);
    if !report.pass() {
        return Err(format!("{report:?}"));
    }
    Ok(())
}

fn closure_sub_instance(rng: &mut StdRng) -> Result<(), String> {
    let m = random::small_model(rng, 7, 2);
    let tm = random::topological_model(rng, &m);
    let u = random::substructure(rng, &m);
    let report = closed_subcoalgebra_check(&tm, &u).map_err(|e| e.to_string())?;
    if !report.pass() {
        return Err(format!("{report:?}"));
    }
    Ok(())
}

fn closure_bisim_instance(rng: &mut StdRng) -> Result<(), String> {
    let a = random::small_model(rng, 6, 1);
    let b = random::small_model(rng, 6, 1);
    let (ta, tb) = (random::topological_model(rng, &a), random::topological_model(rng, &b));
    let s = largest_bisimulation(&a, &b);
    let report = closed_bisimulation_check(&ta, &tb, &s).map_err(|e| e.to_string())?;
    if !report.pass() {
        return Err(format!("{report:?}"));
    }
    Ok(())
}

fn truth_lemma_instance(rng: &mut StdRng) -> Result<(), String> {
    let m = random::small_model(rng, 6, 2);
    let d = rng.random_range(0..=3);
    let f = random::formula(rng, m.atoms(), d, 16);
    let truth = m.eval(&f).map_err(|e| e.to_string())?;
    for (x, t) in behavior_map(&m, d).iter().enumerate() {
        if t.satisfies(&f).map_err(|e| e.to_string())? != truth.contains(x) {
            return Err(format!("state {x}, formula {f}"));
        }
    }
    Ok(())
}

fn ladder_instance(rng: &mut StdRng) -> Result<(), String> {
    let f = random::formula(rng, &[], 8, 20);
    let values = [f.clone(), Formula::diamond(f.clone()), Formula::boxed(f.clone())]
        .map(|g| ladder_eval(Ladder::Extended, &g).map(|v| v.at_inf));
    if values[0] != values[1] || values[1] != values[2] {
        return Err(format!("modalities disagree at s_inf for {f}"));
    }
    Ok(())
}
