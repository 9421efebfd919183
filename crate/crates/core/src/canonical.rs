//! Bounded-depth behaviour types: the levels `Z_0 = P(Φ₀)`,
//! `Z_{d+1} = P(Z_d) × P(Φ₀)` of the final sequence, the depth-`d`
//! behaviour of each state of a model, satisfaction on types, and
//! characteristic formulas.
//!
//! A type of depth `d` stands in for the depth-`d` fragment of a maximally
//! consistent set: two states have the same depth-`d` type iff they agree
//! on all formulas of modal depth at most `d`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{AtomSet, Formula};
use crate::kripke::{KripkeModel, Partition};

/// Largest level `|Z_d|` that [`final_level`] enumerates.
pub const MAX_LEVEL_SIZE: u64 = 1 << 16;

/// Largest characteristic formula, in tree nodes, that will be built.
pub const MAX_FORMULA_NODES: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonicalError {
    #[error("level Z_{depth} over {atoms} atoms exceeds {max} types")]
    LevelTooLarge { atoms: usize, depth: usize, max: u64 },
    #[error("formula of modal depth {formula} evaluated on a type of depth {depth}")]
    DepthExceeded { formula: usize, depth: usize },
    #[error("characteristic formula would exceed {max} nodes")]
    FormulaTooLarge { max: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BehaviorType {
    depth: usize,
    val: AtomSet,
    succs: BTreeSet<Arc<BehaviorType>>,
}

impl BehaviorType {
    pub fn leaf(val: AtomSet) -> Self {
        BehaviorType {
            depth: 0,
            val,
            succs: BTreeSet::new(),
        }
    }

    /// A type of depth `depth`; every successor must have depth `depth - 1`.
    pub fn node(val: AtomSet, succs: BTreeSet<Arc<BehaviorType>>, depth: usize) -> Self {
        assert!(depth > 0, "successor types need depth at least 1");
        assert!(
            succs.iter().all(|s| s.depth + 1 == depth),
            "successor types must be exactly one level lower"
        );
        BehaviorType { depth, val, succs }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn val(&self) -> &AtomSet {
        &self.val
    }

    pub fn succs(&self) -> &BTreeSet<Arc<BehaviorType>> {
        &self.succs
    }

    /// Projection `Z_{d+1} → Z_d`: forget the deepest level of detail.
    pub fn truncate(&self) -> Option<BehaviorType> {
        match self.depth {
            0 => None,
            1 => Some(BehaviorType::leaf(self.val.clone())),
            d => Some(BehaviorType {
                depth: d - 1,
                val: self.val.clone(),
                succs: self
                    .succs
                    .iter()
                    .map(|s| Arc::new(s.truncate().expect("depth checked above")))
                    .collect(),
            }),
        }
    }

    /// Structural satisfaction: atoms read the valuation, `□`/`◇` quantify
    /// over the successor types.
    pub fn satisfies(&self, f: &Formula) -> Result<bool, CanonicalError> {
        let needed = f.modal_depth();
        if needed > self.depth {
            return Err(CanonicalError::DepthExceeded {
                formula: needed,
                depth: self.depth,
            });
        }
        Ok(self.satisfies_unchecked(f))
    }

    fn satisfies_unchecked(&self, f: &Formula) -> bool {
        match f {
            Formula::Atom(p) => self.val.contains(p),
            Formula::Top => true,
            Formula::Bot => false,
            Formula::Not(g) => !self.satisfies_unchecked(g),
            Formula::And(l, r) => self.satisfies_unchecked(l) && self.satisfies_unchecked(r),
            Formula::Or(l, r) => self.satisfies_unchecked(l) || self.satisfies_unchecked(r),
            Formula::Box(g) => self.succs.iter().all(|s| s.satisfies_unchecked(g)),
            Formula::Diamond(g) => self.succs.iter().any(|s| s.satisfies_unchecked(g)),
        }
    }
}

impl fmt::Display for BehaviorType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let val: Vec<&str> = self.val.iter().map(String::as_str).collect();
        write!(f, "({{{}}}", val.join(","))?;
        if self.depth > 0 {
            f.write_str(", {")?;
            for (i, s) in self.succs.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{s}")?;
            }
            f.write_str("}")?;
        }
        f.write_str(")")
    }
}

/// `t ⊨ f` for `modal_depth(f) ≤ t.depth()`.
pub fn type_satisfies(t: &BehaviorType, f: &Formula) -> Result<bool, CanonicalError> {
    t.satisfies(f)
}

/// `|Z_d|` over `atoms` atoms, or `None` once it passes `u64`.
pub fn level_size(atoms: usize, depth: usize) -> Option<u64> {
    let vals = 1u64.checked_shl(atoms as u32)?;
    let mut size = vals;
    for _ in 0..depth {
        let subsets = 1u64.checked_shl(u32::try_from(size).ok()?)?;
        size = subsets.checked_mul(vals)?;
    }
    Some(size)
}

/// All types of one depth over a declared atom set, in ascending order.
#[derive(Debug, Clone)]
pub struct FinalLevel {
    pub depth: usize,
    pub atoms: AtomSet,
    pub types: Vec<Arc<BehaviorType>>,
}

fn all_valuations(atoms: &AtomSet) -> Vec<AtomSet> {
    let atoms: Vec<&String> = atoms.iter().collect();
    (0..1u64 << atoms.len())
        .map(|mask| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, a)| (*a).clone())
                .collect()
        })
        .collect()
}

pub fn final_level(atoms: &AtomSet, depth: usize) -> Result<FinalLevel, CanonicalError> {
    let too_large = CanonicalError::LevelTooLarge {
        atoms: atoms.len(),
        depth,
        max: MAX_LEVEL_SIZE,
    };
    match level_size(atoms.len(), depth) {
        Some(n) if n <= MAX_LEVEL_SIZE => {}
        _ => return Err(too_large),
    }
    let vals = all_valuations(atoms);
    let mut level: Vec<Arc<BehaviorType>> = vals
        .iter()
        .map(|v| Arc::new(BehaviorType::leaf(v.clone())))
        .collect();
    for d in 1..=depth {
        let below = level;
        level = Vec::new();
        for mask in 0..1u64 << below.len() {
            let succs: BTreeSet<_> = below
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| Arc::clone(t))
                .collect();
            for v in &vals {
                level.push(Arc::new(BehaviorType::node(v.clone(), succs.clone(), d)));
            }
        }
        level.sort();
    }
    level.sort();
    Ok(FinalLevel {
        depth,
        atoms: atoms.clone(),
        types: level,
    })
}

fn restricted_val(m: &KripkeModel, x: usize, atoms: &AtomSet) -> AtomSet {
    m.val(x).intersection(atoms).cloned().collect()
}

/// Depth-`d` behaviour of every state, over the atom fragment `atoms`:
/// `beh₀(x) = v(x) ∩ Φ₀`, `beh_{k+1}(x) = (v(x) ∩ Φ₀, {beh_k(y) | x ⟶ y})`.
pub fn behavior_map_over(m: &KripkeModel, atoms: &AtomSet, d: usize) -> Vec<Arc<BehaviorType>> {
    let mut level: Vec<Arc<BehaviorType>> = m
        .states()
        .map(|x| Arc::new(BehaviorType::leaf(restricted_val(m, x, atoms))))
        .collect();
    for depth in 1..=d {
        level = m
            .states()
            .map(|x| {
                let succs = m.successors(x).iter().map(|&y| Arc::clone(&level[y])).collect();
                Arc::new(BehaviorType::node(restricted_val(m, x, atoms), succs, depth))
            })
            .collect();
    }
    level
}

/// [`behavior_map_over`] with the model's own declared atoms.
pub fn behavior_map(m: &KripkeModel, d: usize) -> Vec<Arc<BehaviorType>> {
    behavior_map_over(m, &m.atom_set(), d)
}

/// Kernels of `beh_0, .., beh_d`, computed on interned type ids instead of
/// type trees. Entry `k` is the partition of states by depth-`k` type.
pub fn behavior_kernels(m: &KripkeModel, d: usize) -> Vec<Partition> {
    let mut ids: Vec<usize> = Partition::from_keys(&m.states().map(|x| m.val(x)).collect::<Vec<_>>())
        .projection()
        .to_vec();
    let mut out = vec![Partition::from_keys(&ids)];
    for _ in 0..d {
        let signatures: Vec<(usize, BTreeSet<usize>)> = m
            .states()
            .map(|x| (ids[x], m.successors(x).iter().map(|&y| ids[y]).collect()))
            .collect();
        let next = Partition::from_keys(&signatures);
        ids = next.projection().to_vec();
        out.push(next);
    }
    out
}

/// Refines the type kernels until they stop changing. Returns the stable
/// partition and the first depth at which it is reached (at most `|X|`).
pub fn stable_behavior_kernel(m: &KripkeModel) -> (Partition, usize) {
    let mut depth = 0;
    let mut current = behavior_kernels(m, 0).pop().expect("one level");
    loop {
        let ids = current.projection();
        let signatures: Vec<(usize, BTreeSet<usize>)> = m
            .states()
            .map(|x| (ids[x], m.successors(x).iter().map(|&y| ids[y]).collect()))
            .collect();
        let next = Partition::from_keys(&signatures);
        if next.len() == current.len() {
            return (current, depth);
        }
        current = next;
        depth += 1;
    }
}

/// A formula true exactly at the states whose type (of the same depth,
/// over `atoms`) is `t`: the valuation part, `◇χ_s` for each successor
/// type, and `□` of the disjunction of those.
pub fn characteristic_formula(t: &BehaviorType, atoms: &AtomSet) -> Result<Formula, CanonicalError> {
    let mut sizes = HashMap::new();
    if characteristic_size(t, atoms.len() as u64, &mut sizes) > MAX_FORMULA_NODES {
        return Err(CanonicalError::FormulaTooLarge {
            max: MAX_FORMULA_NODES,
        });
    }
    Ok(build_characteristic(t, atoms))
}

// Upper bound on the node count, memoised by type address.
fn characteristic_size(t: &BehaviorType, atoms: u64, memo: &mut HashMap<usize, u64>) -> u64 {
    let key = t as *const BehaviorType as usize;
    if let Some(&n) = memo.get(&key) {
        return n;
    }
    let mut n = 3 * atoms + 1;
    if t.depth > 0 {
        let children: u64 = t
            .succs
            .iter()
            .map(|s| characteristic_size(s, atoms, memo))
            .fold(0u64, u64::saturating_add);
        n = n
            .saturating_add(children.saturating_mul(2))
            .saturating_add(3 * t.succs.len() as u64 + 2);
    }
    memo.insert(key, n);
    n
}

fn build_characteristic(t: &BehaviorType, atoms: &AtomSet) -> Formula {
    let val_part = atoms.iter().map(|p| {
        if t.val.contains(p) {
            Formula::atom(p.clone())
        } else {
            Formula::not(Formula::atom(p.clone()))
        }
    });
    if t.depth == 0 {
        return Formula::conj(val_part);
    }
    let children: Vec<Formula> = t.succs.iter().map(|s| build_characteristic(s, atoms)).collect();
    let mut parts: Vec<Formula> = val_part.collect();
    parts.extend(children.iter().cloned().map(Formula::diamond));
    parts.push(Formula::boxed(Formula::disj(children)));
    Formula::conj(parts)
}

/// `upper[x] = (v(x) ∩ Φ₀, {lower[y] | x ⟶ y})` for every state: the
/// one-step homomorphism condition between adjacent levels.
pub fn is_one_step_homomorphism(
    m: &KripkeModel,
    atoms: &AtomSet,
    lower: &[Arc<BehaviorType>],
    upper: &[Arc<BehaviorType>],
) -> bool {
    m.states().all(|x| {
        let succs: BTreeSet<&BehaviorType> = m.successors(x).iter().map(|&y| &*lower[y]).collect();
        upper[x].val == restricted_val(m, x, atoms)
            && upper[x].succs.iter().map(|s| &**s).collect::<BTreeSet<_>>() == succs
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TerminalViolation {
    /// `x ⟶ y` but `beh_k(y)` is not a successor type of `beh_{k+1}(x)`.
    Forth { depth: usize, state: usize, successor: usize },
    /// A successor type of `beh_{k+1}(x)` that no successor of `x` has.
    Back { depth: usize, state: usize },
    /// `beh_{k+1}(x)` disagrees with `x` on the valuation.
    Valuation { depth: usize, state: usize },
    /// Two states with different types that the characteristic formula of
    /// the first does not separate.
    Separation { first: usize, second: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TerminalReport {
    pub depth: usize,
    /// Number of distinct depth-`d` types realised in the model.
    pub distinct_types: usize,
    pub violation: Option<TerminalViolation>,
}

impl TerminalReport {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that the behaviour maps commute with one unfolding step at every
/// level up to `d`, and that distinct realised depth-`d` types are
/// separated by a formula of depth `d`.
pub fn terminal_uniqueness_check(
    m: &KripkeModel,
    d: usize,
) -> Result<TerminalReport, CanonicalError> {
    let atoms = m.atom_set();
    let levels: Vec<Vec<Arc<BehaviorType>>> =
        (0..=d).map(|k| behavior_map_over(m, &atoms, k)).collect();
    let mut violation = None;
    'levels: for k in 0..d {
        let (lower, upper) = (&levels[k], &levels[k + 1]);
        for x in m.states() {
            if upper[x].val != restricted_val(m, x, &atoms) {
                violation = Some(TerminalViolation::Valuation { depth: k + 1, state: x });
                break 'levels;
            }
            if let Some(&y) = m.successors(x).iter().find(|&&y| !upper[x].succs.contains(&lower[y])) {
                violation = Some(TerminalViolation::Forth {
                    depth: k + 1,
                    state: x,
                    successor: y,
                });
                break 'levels;
            }
            if upper[x]
                .succs
                .iter()
                .any(|s| !m.successors(x).iter().any(|&y| lower[y] == *s))
            {
                violation = Some(TerminalViolation::Back { depth: k + 1, state: x });
                break 'levels;
            }
        }
    }
    let top = &levels[d];
    let mut representatives: Vec<usize> = Vec::new();
    for x in m.states() {
        if !representatives.iter().any(|&r| top[r] == top[x]) {
            representatives.push(x);
        }
    }
    if violation.is_none() {
        'pairs: for &a in &representatives {
            let chi = characteristic_formula(&top[a], &atoms)?;
            if !top[a].satisfies(&chi)? {
                violation = Some(TerminalViolation::Separation { first: a, second: a });
                break;
            }
            for &b in &representatives {
                if a != b && top[b].satisfies(&chi)? {
                    violation = Some(TerminalViolation::Separation { first: a, second: b });
                    break 'pairs;
                }
            }
        }
    }
    Ok(TerminalReport {
        depth: d,
        distinct_types: representatives.len(),
        violation,
    })
}
