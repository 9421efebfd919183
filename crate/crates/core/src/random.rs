//! Random instances for the property suites: formulas, models, topologies
//! and topological models that satisfy the model conditions.

use rand::{Rng, RngExt};

use crate::formula::{AtomSet, Formula};
use crate::kripke::{largest_bisimulation, KripkeModel, Partition};
use crate::set::StateSet;
use crate::topology::{check_topological_model, FiniteTopology, TopologicalModel};

/// A formula over `atoms` of modal depth at most `depth`, with roughly
/// `budget` nodes.
pub fn formula<R: Rng>(rng: &mut R, atoms: &[String], depth: usize, budget: usize) -> Formula {
    if budget <= 1 {
        return leaf(rng, atoms);
    }
    let roll = rng.random_range(0..10);
    match roll {
        0 => leaf(rng, atoms),
        1 | 2 => Formula::not(formula(rng, atoms, depth, budget - 1)),
        3 | 4 => {
            let split = rng.random_range(1..budget);
            let l = formula(rng, atoms, depth, split);
            let r = formula(rng, atoms, depth, budget - split);
            if rng.random_bool(0.5) {
                Formula::and(l, r)
            } else {
                Formula::or(l, r)
            }
        }
        _ if depth == 0 => leaf(rng, atoms),
        5..=7 => Formula::boxed(formula(rng, atoms, depth - 1, budget - 1)),
        _ => Formula::diamond(formula(rng, atoms, depth - 1, budget - 1)),
    }
}

fn leaf<R: Rng>(rng: &mut R, atoms: &[String]) -> Formula {
    let choices = atoms.len() + 2;
    match rng.random_range(0..choices) {
        0 => Formula::Top,
        1 => Formula::Bot,
        i => Formula::atom(atoms[i - 2].clone()),
    }
}

/// A formula whose modal depth is exactly `depth` (when `budget` allows).
pub fn formula_of_depth<R: Rng>(rng: &mut R, atoms: &[String], depth: usize, budget: usize) -> Formula {
    loop {
        let f = formula(rng, atoms, depth, budget.max(depth + 1));
        if f.modal_depth() == depth {
            return f;
        }
    }
}

pub fn atom_names(n: usize) -> Vec<String> {
    ["p", "q", "r", "t"].iter().take(n).map(|s| s.to_string()).collect()
}

/// A model with `states` states; each edge present with probability
/// `density`, each atom true with probability one half.
pub fn model<R: Rng>(rng: &mut R, states: usize, atoms: &[String], density: f64) -> KripkeModel {
    let mut edges = Vec::new();
    for x in 0..states {
        for y in 0..states {
            if rng.random_bool(density) {
                edges.push((x, y));
            }
        }
    }
    let val = (0..states)
        .map(|_| atoms.iter().filter(|_| rng.random_bool(0.5)).cloned().collect::<AtomSet>())
        .collect();
    KripkeModel::new(
        atoms.to_vec(),
        (0..states).map(|i| format!("s{i}")).collect(),
        edges,
        val,
    )
    .expect("generated model is well formed")
}

/// A model with a random number of states in `1..=max_states`, atoms
/// `0..=max_atoms` and a random density.
pub fn small_model<R: Rng>(rng: &mut R, max_states: usize, max_atoms: usize) -> KripkeModel {
    let n = rng.random_range(1..=max_states);
    let atoms = atom_names(rng.random_range(0..=max_atoms));
    let density = [0.15, 0.3, 0.5][rng.random_range(0..3)];
    model(rng, n, &atoms, density)
}

pub fn subset<R: Rng>(rng: &mut R, n: usize) -> StateSet {
    StateSet::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)))
}

/// A topology generated by a few random subsets.
pub fn topology<R: Rng>(rng: &mut R, n: usize) -> FiniteTopology {
    let k = rng.random_range(0..=n.min(4) + 1);
    let subbase: Vec<StateSet> = (0..k).map(|_| subset(rng, n)).collect();
    FiniteTopology::generate(n, &subbase).expect("carrier within limits")
}

/// The smallest topology containing `seed`, the atom extensions and their
/// complements, and closed under `⟨R⟩` and `[R]` images of opens. It
/// satisfies the topological model conditions by construction.
pub fn closed_topology(m: &KripkeModel, seed: Vec<StateSet>) -> FiniteTopology {
    let mut subbase = seed;
    for p in m.atoms() {
        let ext = m.atom_extension(p);
        subbase.push(ext.complement());
        subbase.push(ext);
    }
    loop {
        let t = FiniteTopology::generate(m.len(), &subbase).expect("carrier within limits");
        let missing: Vec<StateSet> = t
            .opens()
            .flat_map(|o| [m.diamond_pre(o), m.box_pre(o)])
            .filter(|s| !t.is_open(s))
            .collect();
        if missing.is_empty() {
            return t;
        }
        subbase.extend(missing);
    }
}

/// Merges random pairs of bisimilarity blocks, keeping each merge only if
/// the coarser partition topology still satisfies the model conditions.
pub fn coarsened_formula_topology<R: Rng>(rng: &mut R, m: &KripkeModel) -> FiniteTopology {
    let blocks = Partition::from_equivalence(&largest_bisimulation(m, m));
    let mut labels: Vec<usize> = blocks.projection().to_vec();
    let mut best = FiniteTopology::from_partition(&blocks).expect("carrier within limits");
    for _ in 0..rng.random_range(0..=3) {
        let ids: Vec<usize> = {
            let mut ids = labels.clone();
            ids.sort_unstable();
            ids.dedup();
            ids
        };
        if ids.len() < 2 {
            break;
        }
        let a = ids[rng.random_range(0..ids.len())];
        let b = ids[rng.random_range(0..ids.len())];
        if a == b {
            continue;
        }
        let merged: Vec<usize> = labels.iter().map(|&l| if l == b { a } else { l }).collect();
        let t = FiniteTopology::from_partition(&Partition::from_keys(&merged))
            .expect("carrier within limits");
        let tm = TopologicalModel::new(m.clone(), t.clone()).expect("sizes match");
        if check_topological_model(&tm).pass() {
            labels = merged;
            best = t;
        }
    }
    best
}

/// A topological model satisfying the model conditions, drawn from one of
/// three families: coarsened bisimilarity partitions, closures of random
/// subbases, or the discrete topology.
pub fn topological_model<R: Rng>(rng: &mut R, m: &KripkeModel) -> TopologicalModel {
    let t = match rng.random_range(0..5) {
        0 | 1 => coarsened_formula_topology(rng, m),
        2 | 3 => {
            let k = rng.random_range(0..=2);
            let seed = (0..k).map(|_| subset(rng, m.len())).collect();
            closed_topology(m, seed)
        }
        _ => FiniteTopology::discrete(m.len()).expect("carrier within limits"),
    };
    TopologicalModel::new(m.clone(), t).expect("sizes match")
}

/// A substructure: the successor closure of a random seed set.
pub fn substructure<R: Rng>(rng: &mut R, m: &KripkeModel) -> StateSet {
    let mut u = subset(rng, m.len());
    let mut stack: Vec<usize> = u.iter().collect();
    while let Some(x) = stack.pop() {
        for &y in m.successors(x) {
            if !u.contains(y) {
                u.insert(y);
                stack.push(y);
            }
        }
    }
    u
}
