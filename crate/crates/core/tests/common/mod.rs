//! Independent oracles for the integration tests. They work on plain
//! bitmasks and recursion rather than the library's set machinery.
#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use vkt::{AtomSet, Formula, FiniteTopology, KripkeModel, Relation, StateSet};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Satisfaction by direct recursion on one state.
pub fn naive_sat(m: &KripkeModel, x: usize, f: &Formula) -> bool {
    match f {
        Formula::Atom(p) => m.val(x).contains(p),
        Formula::Top => true,
        Formula::Bot => false,
        Formula::Not(g) => !naive_sat(m, x, g),
        Formula::And(l, r) => naive_sat(m, x, l) && naive_sat(m, x, r),
        Formula::Or(l, r) => naive_sat(m, x, l) || naive_sat(m, x, r),
        Formula::Box(g) => m.successors(x).iter().all(|&y| naive_sat(m, y, g)),
        Formula::Diamond(g) => m.successors(x).iter().any(|&y| naive_sat(m, y, g)),
    }
}

pub fn naive_extension(m: &KripkeModel, f: &Formula) -> StateSet {
    StateSet::from_indices(m.len(), m.states().filter(|&x| naive_sat(m, x, f)))
}

/// Truth of `f` at every state, bottom-up over subformulas on plain
/// boolean vectors.
pub fn truth_table(m: &KripkeModel, f: &Formula) -> Vec<bool> {
    let n = m.len();
    match f {
        Formula::Atom(p) => (0..n).map(|x| m.val(x).contains(p)).collect(),
        Formula::Top => vec![true; n],
        Formula::Bot => vec![false; n],
        Formula::Not(g) => truth_table(m, g).into_iter().map(|b| !b).collect(),
        Formula::And(l, r) => {
            let (l, r) = (truth_table(m, l), truth_table(m, r));
            (0..n).map(|x| l[x] && r[x]).collect()
        }
        Formula::Or(l, r) => {
            let (l, r) = (truth_table(m, l), truth_table(m, r));
            (0..n).map(|x| l[x] || r[x]).collect()
        }
        Formula::Box(g) => {
            let g = truth_table(m, g);
            (0..n).map(|x| m.successors(x).iter().all(|&y| g[y])).collect()
        }
        Formula::Diamond(g) => {
            let g = truth_table(m, g);
            (0..n).map(|x| m.successors(x).iter().any(|&y| g[y])).collect()
        }
    }
}

fn succ_mask(m: &KripkeModel, x: usize) -> u64 {
    m.successors(x).iter().fold(0, |acc, &y| acc | 1 << y)
}

/// Union of every relation between `a` and `b` (at most 4 states each)
/// that satisfies the three bisimulation clauses, found by enumerating all
/// subsets of the valuation-compatible pairs. A relation is a 4x4 bit
/// matrix: bit `4x + y` holds `(x, y)`.
pub fn brute_force_bisim(a: &KripkeModel, b: &KripkeModel) -> Relation {
    assert!(a.len() <= 4 && b.len() <= 4, "oracle is for tiny models");
    let candidates: Vec<(usize, usize)> = a
        .states()
        .flat_map(|x| b.states().map(move |y| (x, y)))
        .filter(|&(x, y)| a.val(x) == b.val(y))
        .collect();
    let sa: Vec<u64> = a.states().map(|x| succ_mask(a, x)).collect();
    let sb: Vec<u64> = b.states().map(|y| succ_mask(b, y)).collect();
    // forth for (x, y): each successor x2 of x has a row meeting sb[y];
    // back: each successor y2 of y has a column meeting sa[x]
    let rows = |x2: usize| 0xfu64 << (4 * x2);
    let cols = |y2: usize| (0..4).fold(0u64, |acc, x| acc | 1 << (4 * x + y2));
    let spread = |mask: u64, lane: fn(usize, usize) -> usize| (0..4).fold(0u64, |acc, i| {
        if mask >> i & 1 == 1 { acc | (0..4).fold(0, |acc2, j| acc2 | 1 << lane(i, j)) } else { acc }
    });
    // obligations per candidate: a list of bit masks the relation must meet
    let obligations: Vec<Vec<u64>> = candidates
        .iter()
        .map(|&(x, y)| {
            let row_of_y = spread(sb[y], |y2, x2| 4 * x2 + y2);
            let col_of_x = spread(sa[x], |x2, y2| 4 * x2 + y2);
            let forth = (0..a.len()).filter(|&x2| sa[x] >> x2 & 1 == 1).map(|x2| rows(x2) & row_of_y);
            let back = (0..b.len()).filter(|&y2| sb[y] >> y2 & 1 == 1).map(|y2| cols(y2) & col_of_x);
            forth.chain(back).collect()
        })
        .collect();
    let bits: Vec<u64> = candidates.iter().map(|&(x, y)| 1 << (4 * x + y)).collect();
    let k = candidates.len();
    let mut relation = vec![0u64; 1 << k];
    let mut union = 0u64;
    for mask in 1usize..1 << k {
        let low = mask.trailing_zeros() as usize;
        let r = relation[mask & (mask - 1)] | bits[low];
        relation[mask] = r;
        if union | r == union {
            continue;
        }
        let ok = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .all(|i| obligations[i].iter().all(|&o| r & o != 0));
        if ok {
            union |= r;
        }
    }
    let pairs = (0..16).filter(|i| union >> i & 1 == 1).map(|i| (i / 4, i % 4));
    Relation::new(a.len(), b.len(), pairs).unwrap()
}

/// The largest bisimulation contained in `r`: repeatedly drop pairs that
/// break a clause.
pub fn prune_to_bisimulation(a: &KripkeModel, b: &KripkeModel, r: &Relation) -> Relation {
    let mut pairs: BTreeSet<(usize, usize)> =
        r.pairs().filter(|&(x, y)| a.val(x) == b.val(y)).collect();
    loop {
        let bad: Vec<(usize, usize)> = pairs
            .iter()
            .copied()
            .filter(|&(x, y)| {
                let forth = a
                    .successors(x)
                    .iter()
                    .all(|&x2| b.successors(y).iter().any(|&y2| pairs.contains(&(x2, y2))));
                let back = b
                    .successors(y)
                    .iter()
                    .all(|&y2| a.successors(x).iter().any(|&x2| pairs.contains(&(x2, y2))));
                !(forth && back)
            })
            .collect();
        if bad.is_empty() {
            return Relation::new(a.len(), b.len(), pairs).unwrap();
        }
        for p in bad {
            pairs.remove(&p);
        }
    }
}

/// Every model on `n` states over `atoms`: all edge sets times all
/// valuations.
pub fn all_models(n: usize, atoms: &[&str]) -> Vec<KripkeModel> {
    let mut out = Vec::new();
    let vals_per_state = 1usize << atoms.len();
    for edges in 0u64..1 << (n * n) {
        let e: Vec<(usize, usize)> = (0..n * n)
            .filter(|i| edges >> i & 1 == 1)
            .map(|i| (i / n, i % n))
            .collect();
        for mut code in 0..vals_per_state.pow(n as u32) {
            let val = (0..n)
                .map(|_| {
                    let v = code % vals_per_state;
                    code /= vals_per_state;
                    atoms
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| v >> i & 1 == 1)
                        .map(|(_, a)| a.to_string())
                        .collect::<AtomSet>()
                })
                .collect();
            out.push(KripkeModel::with_default_names(atoms, n, &e, val).unwrap());
        }
    }
    out
}

/// The topology generated by `subbase`, by closing the family under
/// binary unions and intersections until nothing changes.
pub fn naive_generate(n: usize, subbase: &[u64]) -> BTreeSet<u64> {
    let full = if n == 64 { u64::MAX } else { (1 << n) - 1 };
    let mut opens: BTreeSet<u64> = subbase.iter().copied().collect();
    opens.insert(0);
    opens.insert(full);
    loop {
        let list: Vec<u64> = opens.iter().copied().collect();
        let before = opens.len();
        for &a in &list {
            for &b in &list {
                opens.insert(a | b);
                opens.insert(a & b);
            }
        }
        if opens.len() == before {
            return opens;
        }
    }
}

pub fn open_masks(t: &FiniteTopology) -> BTreeSet<u64> {
    t.opens().map(StateSet::mask).collect()
}

/// Closure as the intersection of all closed supersets.
pub fn closure_oracle(t: &FiniteTopology, a: u64) -> u64 {
    let full = (1u64 << t.carrier_len()) - 1;
    t.opens()
        .map(|o| full & !o.mask())
        .filter(|c| a & !c == 0)
        .fold(full, |acc, c| acc & c)
}

/// Closure of `s` in the product topology, computed on the generated
/// product space with point `(x, y)` at bit `x * |Y| + y`.
pub fn product_closure_oracle(a: &FiniteTopology, b: &FiniteTopology, s: &Relation) -> Relation {
    let (n, m) = (a.carrier_len(), b.carrier_len());
    let boxes: Vec<u64> = a
        .opens()
        .flat_map(|o1| {
            b.opens().map(move |o2| {
                o1.iter()
                    .flat_map(|x| o2.iter().map(move |y| 1u64 << (x * m + y)))
                    .fold(0, |acc, bit| acc | bit)
            })
        })
        .collect();
    let opens = naive_generate(n * m, &boxes);
    let full = if n * m == 64 { u64::MAX } else { (1u64 << (n * m)) - 1 };
    let target = s.pairs().fold(0u64, |acc, (x, y)| acc | 1 << (x * m + y));
    let closure = opens
        .iter()
        .map(|o| full & !o)
        .filter(|c| target & !c == 0)
        .fold(full, |acc, c| acc & c);
    let pairs = (0..n * m).filter(|i| closure >> i & 1 == 1).map(|i| (i / m, i % m));
    Relation::new(n, m, pairs).unwrap()
}

/// A random topology on `n` points containing every set in `required`.
pub fn topology_containing(rng: &mut StdRng, n: usize, required: Vec<StateSet>) -> FiniteTopology {
    let mut subbase = required;
    for _ in 0..rng.random_range(0..3) {
        subbase.push(vkt::random::subset(rng, n));
    }
    FiniteTopology::generate(n, &subbase).unwrap()
}

/// Random maps `f: X → Y`, `g: Y → Z` with topologies making both
/// continuous.
pub struct ContinuousPair {
    pub tx: FiniteTopology,
    pub ty: FiniteTopology,
    pub tz: FiniteTopology,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

pub fn continuous_pair(rng: &mut StdRng, max: usize) -> ContinuousPair {
    let (nx, ny, nz) = (
        rng.random_range(1..=max),
        rng.random_range(1..=max),
        rng.random_range(1..=max),
    );
    let tz = vkt::random::topology(rng, nz);
    let g: Vec<usize> = (0..ny).map(|_| rng.random_range(0..nz)).collect();
    let pulled = tz.opens().map(|o| vkt::topology::preimage(&g, o, ny)).collect();
    let ty = topology_containing(rng, ny, pulled);
    let f: Vec<usize> = (0..nx).map(|_| rng.random_range(0..ny)).collect();
    let pulled = ty.opens().map(|o| vkt::topology::preimage(&f, o, nx)).collect();
    let tx = topology_containing(rng, nx, pulled);
    ContinuousPair { tx, ty, tz, f, g }
}

/// Formulas over `atoms` of modal depth at most `depth`: every recursion
/// level adds at most one modality.
pub fn formula_strategy(atoms: Vec<&'static str>, depth: u32) -> BoxedStrategy<Formula> {
    let mut leaves: Vec<BoxedStrategy<Formula>> = vec![Just(Formula::Top).boxed(), Just(Formula::Bot).boxed()];
    for a in atoms {
        leaves.push(Just(Formula::atom(a)).boxed());
    }
    let leaf = proptest::strategy::Union::new(leaves).boxed();
    if depth == 0 {
        return leaf
            .prop_recursive(4, 24, 2, |inner| {
                prop_oneof![
                    inner.clone().prop_map(Formula::not),
                    (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
                    (inner.clone(), inner).prop_map(|(l, r)| Formula::or(l, r)),
                ]
            })
            .boxed();
    }
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            inner.clone().prop_map(Formula::boxed),
            inner.prop_map(Formula::diamond),
        ]
    })
    .boxed()
}
