//! Finite Kripke models and their modal semantics.
//!
//! States are dense indices `0..n`; external names are kept alongside for
//! I/O. The relation and bisimulation machinery lives in the submodules.

mod bisim;
mod relation;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::{AtomSet, Formula};
use crate::set::StateSet;

pub use bisim::{
    check_bisimulation, check_saturation_finite, is_bisimulation, is_homomorphism, kernel,
    largest_bisimulation, quotient, BisimViolation, Clause,
};
pub use relation::{Partition, Relation, RelationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate state name {0:?}")]
    DuplicateState(String),
    #[error("duplicate atom {0:?}")]
    DuplicateAtom(String),
    #[error("invalid atom name {0:?}")]
    InvalidAtomName(String),
    #[error("state index {index} out of range for {len} states")]
    StateOutOfRange { index: usize, len: usize },
    #[error("valuation of state {state:?} uses undeclared atom {atom:?}")]
    UndeclaredAtom { state: String, atom: String },
    #[error("expected {expected} valuations, got {got}")]
    ValuationCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula uses undeclared atom {atom:?}")]
pub struct UndeclaredAtom {
    pub atom: String,
}

pub(crate) fn valid_atom_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "true"
        && name != "false"
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    atoms: Vec<String>,
    names: Vec<String>,
    edges: Vec<(usize, usize)>,
    succ: Vec<Vec<usize>>,
    val: Vec<AtomSet>,
}

impl KripkeModel {
    /// Builds a model from declared atoms (in declaration order), state
    /// names, edges and one valuation per state. Duplicate edges are dropped;
    /// the first occurrence keeps its position.
    pub fn new(
        atoms: Vec<String>,
        names: Vec<String>,
        edges: Vec<(usize, usize)>,
        val: Vec<AtomSet>,
    ) -> Result<Self, ModelError> {
        let n = names.len();
        let mut seen = BTreeSet::new();
        for a in &atoms {
            if !valid_atom_name(a) {
                return Err(ModelError::InvalidAtomName(a.clone()));
            }
            if !seen.insert(a.as_str()) {
                return Err(ModelError::DuplicateAtom(a.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for s in &names {
            if !seen.insert(s.as_str()) {
                return Err(ModelError::DuplicateState(s.clone()));
            }
        }
        if val.len() != n {
            return Err(ModelError::ValuationCount {
                expected: n,
                got: val.len(),
            });
        }
        let declared: BTreeSet<&str> = atoms.iter().map(String::as_str).collect();
        for (x, v) in val.iter().enumerate() {
            if let Some(atom) = v.iter().find(|a| !declared.contains(a.as_str())) {
                return Err(ModelError::UndeclaredAtom {
                    state: names[x].clone(),
                    atom: atom.clone(),
                });
            }
        }
        let mut succ = vec![Vec::new(); n];
        let mut kept = Vec::with_capacity(edges.len());
        let mut seen = BTreeSet::new();
        for (x, y) in edges {
            for index in [x, y] {
                if index >= n {
                    return Err(ModelError::StateOutOfRange { index, len: n });
                }
            }
            if seen.insert((x, y)) {
                succ[x].push(y);
                kept.push((x, y));
            }
        }
        for s in &mut succ {
            s.sort_unstable();
        }
        Ok(KripkeModel {
            atoms,
            names,
            edges: kept,
            succ,
            val,
        })
    }

    /// Same as [`KripkeModel::new`] with states named `s0, s1, ...`.
    pub fn with_default_names(
        atoms: &[&str],
        n: usize,
        edges: &[(usize, usize)],
        val: Vec<AtomSet>,
    ) -> Result<Self, ModelError> {
        Self::new(
            atoms.iter().map(|a| a.to_string()).collect(),
            (0..n).map(|i| format!("s{i}")).collect(),
            edges.to_vec(),
            val,
        )
    }

    /// A model over no atoms with every valuation empty.
    pub fn frame(n: usize, edges: &[(usize, usize)]) -> Self {
        Self::with_default_names(&[], n, edges, vec![AtomSet::new(); n])
            .expect("frame edges must reference declared states")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn states(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn atom_set(&self) -> AtomSet {
        self.atoms.iter().cloned().collect()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Edges in insertion order, without duplicates.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `R(x)`, sorted ascending.
    pub fn successors(&self, x: usize) -> &[usize] {
        &self.succ[x]
    }

    pub fn successor_set(&self, x: usize) -> StateSet {
        StateSet::from_indices(self.len(), self.succ[x].iter().copied())
    }

    pub fn val(&self, x: usize) -> &AtomSet {
        &self.val[x]
    }

    pub fn empty_set(&self) -> StateSet {
        StateSet::empty(self.len())
    }

    pub fn full_set(&self) -> StateSet {
        StateSet::full(self.len())
    }

    /// `⟦p⟧`; empty for atoms nobody carries.
    pub fn atom_extension(&self, atom: &str) -> StateSet {
        StateSet::from_indices(self.len(), self.states().filter(|&x| self.val[x].contains(atom)))
    }

    /// `⟨R⟩U`: states with at least one successor in `U`.
    pub fn diamond_pre(&self, u: &StateSet) -> StateSet {
        StateSet::from_indices(
            self.len(),
            self.states().filter(|&x| self.succ[x].iter().any(|&y| u.contains(y))),
        )
    }

    /// `[R]U`: states all of whose successors lie in `U`.
    pub fn box_pre(&self, u: &StateSet) -> StateSet {
        StateSet::from_indices(
            self.len(),
            self.states().filter(|&x| self.succ[x].iter().all(|&y| u.contains(y))),
        )
    }

    /// `⟦f⟧`, computed bottom-up over the subformulas of `f`.
    pub fn eval(&self, f: &Formula) -> Result<StateSet, UndeclaredAtom> {
        if let Some(atom) = f.atoms().into_iter().find(|a| !self.atoms.contains(a)) {
            return Err(UndeclaredAtom { atom });
        }
        Ok(self.eval_unchecked(f))
    }

    fn eval_unchecked(&self, f: &Formula) -> StateSet {
        match f {
            Formula::Atom(p) => self.atom_extension(p),
            Formula::Top => self.full_set(),
            Formula::Bot => self.empty_set(),
            Formula::Not(g) => self.eval_unchecked(g).complement(),
            Formula::And(l, r) => self.eval_unchecked(l).intersection(&self.eval_unchecked(r)),
            Formula::Or(l, r) => self.eval_unchecked(l).union(&self.eval_unchecked(r)),
            Formula::Box(g) => self.box_pre(&self.eval_unchecked(g)),
            Formula::Diamond(g) => self.diamond_pre(&self.eval_unchecked(g)),
        }
    }

    pub fn satisfies(&self, x: usize, f: &Formula) -> Result<bool, UndeclaredAtom> {
        Ok(self.eval(f)?.contains(x))
    }

    /// States closed under successors: `R(u) ⊆ U` for all `u ∈ U`. Returns
    /// the first offending edge otherwise.
    pub fn substructure_violation(&self, u: &StateSet) -> Option<(usize, usize)> {
        u.iter()
            .flat_map(|x| self.succ[x].iter().map(move |&y| (x, y)))
            .find(|&(_, y)| !u.contains(y))
    }

    /// Disjoint union; the states of `other` are shifted by `self.len()`.
    /// Atoms are merged, names prefixed with `a.`/`b.` to stay distinct.
    pub fn disjoint_union(&self, other: &KripkeModel) -> KripkeModel {
        let mut atoms = self.atoms.clone();
        for a in &other.atoms {
            if !atoms.contains(a) {
                atoms.push(a.clone());
            }
        }
        let offset = self.len();
        let names = self
            .names
            .iter()
            .map(|n| format!("a.{n}"))
            .chain(other.names.iter().map(|n| format!("b.{n}")))
            .collect();
        let edges = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(x, y)| (x + offset, y + offset)))
            .collect();
        let val = self.val.iter().chain(&other.val).cloned().collect();
        KripkeModel::new(atoms, names, edges, val).expect("union of valid models is valid")
    }
}
