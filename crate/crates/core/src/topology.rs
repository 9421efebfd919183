//! Finite topologies stored as explicit open-set families, and topological
//! models: Kripke models whose successor sets are compact, whose `⟨R⟩`/`[R]`
//! images of opens are open, and whose atoms denote clopen sets.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::kripke::{largest_bisimulation, KripkeModel, Partition};
use crate::set::StateSet;

/// Largest carrier a [`FiniteTopology`] accepts.
pub const MAX_CARRIER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("carrier of {size} points exceeds the limit of {max}")]
    CarrierTooLarge { size: usize, max: usize },
    #[error("set {0:?} does not fit the carrier")]
    WrongUniverse(StateSet),
    #[error("the empty set is not open")]
    MissingEmpty,
    #[error("the carrier is not open")]
    MissingCarrier,
    #[error("{op:?} of open sets {first:?} and {second:?} is not open")]
    NotClosed {
        first: StateSet,
        second: StateSet,
        op: SetOp,
    },
    #[error("topology has {topology} points but the model has {model} states")]
    CarrierMismatch { topology: usize, model: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    size: usize,
    opens: BTreeSet<StateSet>,
    // least open set containing each point
    neighborhoods: Vec<StateSet>,
}

fn check_size(size: usize) -> Result<(), TopologyError> {
    if size > MAX_CARRIER {
        return Err(TopologyError::CarrierTooLarge {
            size,
            max: MAX_CARRIER,
        });
    }
    Ok(())
}

impl FiniteTopology {
    /// The smallest topology on `0..size` containing every subbase member.
    ///
    /// Finite intersections of the subbase form a base, and on a finite
    /// carrier every base element is the union of the least base elements
    /// around its points, so the opens are exactly the unions of those least
    /// neighbourhoods.
    pub fn generate(size: usize, subbase: &[StateSet]) -> Result<Self, TopologyError> {
        check_size(size)?;
        if let Some(s) = subbase.iter().find(|s| s.universe() != size) {
            return Err(TopologyError::WrongUniverse(s.clone()));
        }
        let neighborhoods: Vec<StateSet> = (0..size)
            .map(|x| {
                subbase
                    .iter()
                    .filter(|s| s.contains(x))
                    .fold(StateSet::full(size), |acc, s| acc.intersection(s))
            })
            .collect();
        let mut opens = BTreeSet::from([StateSet::empty(size)]);
        for n in neighborhoods.iter().collect::<BTreeSet<_>>() {
            let grown: Vec<StateSet> = opens.iter().map(|o| o.union(n)).collect();
            opens.extend(grown);
        }
        opens.insert(StateSet::full(size));
        Ok(FiniteTopology {
            size,
            opens,
            neighborhoods,
        })
    }

    /// Accepts an explicit open family after checking that it contains `∅`
    /// and the carrier and is closed under pairwise union and intersection.
    pub fn from_opens<I>(size: usize, opens: I) -> Result<Self, TopologyError>
    where
        I: IntoIterator<Item = StateSet>,
    {
        check_size(size)?;
        let opens: BTreeSet<StateSet> = opens.into_iter().collect();
        if let Some(s) = opens.iter().find(|s| s.universe() != size) {
            return Err(TopologyError::WrongUniverse(s.clone()));
        }
        if !opens.contains(&StateSet::empty(size)) {
            return Err(TopologyError::MissingEmpty);
        }
        if !opens.contains(&StateSet::full(size)) {
            return Err(TopologyError::MissingCarrier);
        }
        for (i, a) in opens.iter().enumerate() {
            for b in opens.iter().skip(i + 1) {
                for op in [SetOp::Union, SetOp::Intersection] {
                    let c = match op {
                        SetOp::Union => a.union(b),
                        SetOp::Intersection => a.intersection(b),
                    };
                    if !opens.contains(&c) {
                        return Err(TopologyError::NotClosed {
                            first: a.clone(),
                            second: b.clone(),
                            op,
                        });
                    }
                }
            }
        }
        let neighborhoods = (0..size)
            .map(|x| {
                opens
                    .iter()
                    .filter(|o| o.contains(x))
                    .fold(StateSet::full(size), |acc, o| acc.intersection(o))
            })
            .collect();
        Ok(FiniteTopology {
            size,
            opens,
            neighborhoods,
        })
    }

    pub fn discrete(size: usize) -> Result<Self, TopologyError> {
        let singletons: Vec<_> = (0..size).map(|x| StateSet::singleton(size, x)).collect();
        Self::generate(size, &singletons)
    }

    pub fn indiscrete(size: usize) -> Result<Self, TopologyError> {
        Self::generate(size, &[])
    }

    /// The topology whose opens are the unions of blocks of `p`.
    pub fn from_partition(p: &Partition) -> Result<Self, TopologyError> {
        let n = p.universe();
        let blocks: Vec<_> = p
            .blocks()
            .iter()
            .map(|b| StateSet::from_indices(n, b.iter().copied()))
            .collect();
        Self::generate(n, &blocks)
    }

    pub fn carrier_len(&self) -> usize {
        self.size
    }

    pub fn opens(&self) -> impl Iterator<Item = &StateSet> {
        self.opens.iter()
    }

    pub fn open_count(&self) -> usize {
        self.opens.len()
    }

    pub fn closed_sets(&self) -> impl Iterator<Item = StateSet> + '_ {
        self.opens.iter().map(StateSet::complement)
    }

    /// Least open set containing `x`.
    pub fn neighborhood(&self, x: usize) -> &StateSet {
        &self.neighborhoods[x]
    }

    pub fn is_open(&self, a: &StateSet) -> bool {
        self.opens.contains(a)
    }

    pub fn is_closed(&self, a: &StateSet) -> bool {
        self.opens.contains(&a.complement())
    }

    pub fn is_clopen(&self, a: &StateSet) -> bool {
        self.is_open(a) && self.is_closed(a)
    }

    pub fn interior(&self, a: &StateSet) -> StateSet {
        StateSet::from_indices(
            self.size,
            (0..self.size).filter(|&x| self.neighborhoods[x].is_subset(a)),
        )
    }

    /// Smallest closed superset: the points every neighbourhood of which
    /// meets `a`.
    pub fn closure(&self, a: &StateSet) -> StateSet {
        StateSet::from_indices(
            self.size,
            (0..self.size).filter(|&x| self.neighborhoods[x].intersects(a)),
        )
    }

    /// Returns an open set of `target` whose preimage under `f` is not open
    /// in `self`, or `None` when `f` is continuous.
    pub fn continuity_violation(&self, f: &[usize], target: &FiniteTopology) -> Option<StateSet> {
        target
            .opens()
            .find(|o| !self.is_open(&preimage(f, o, self.size)))
            .cloned()
    }

    pub fn is_continuous(&self, f: &[usize], target: &FiniteTopology) -> bool {
        self.continuity_violation(f, target).is_none()
    }
}

/// `f⁻¹(o)` for a map given as a vector over the domain `0..domain`.
pub fn preimage(f: &[usize], o: &StateSet, domain: usize) -> StateSet {
    StateSet::from_indices(domain, (0..domain).filter(|&x| o.contains(f[x])))
}

/// `f(a)`.
pub fn image(f: &[usize], a: &StateSet, codomain: usize) -> StateSet {
    StateSet::from_indices(codomain, a.iter().map(|x| f[x]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologicalModel {
    model: KripkeModel,
    topology: FiniteTopology,
}

impl TopologicalModel {
    /// Pairs a model with a topology on its states. The topological model
    /// conditions are not enforced here; see [`check_topological_model`].
    pub fn new(model: KripkeModel, topology: FiniteTopology) -> Result<Self, TopologyError> {
        if model.len() != topology.carrier_len() {
            return Err(TopologyError::CarrierMismatch {
                topology: topology.carrier_len(),
                model: model.len(),
            });
        }
        Ok(TopologicalModel { model, topology })
    }

    pub fn model(&self) -> &KripkeModel {
        &self.model
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }
}

/// The topology generated by the extensions `⟦φ⟧` of all formulas. On a
/// finite model these are exactly the unions of bisimilarity classes, so
/// the classes are used as the generating family.
pub fn formula_topology(m: &KripkeModel) -> Result<TopologicalModel, TopologyError> {
    let blocks = Partition::from_equivalence(&largest_bisimulation(m, m));
    let t = FiniteTopology::from_partition(&blocks)?;
    TopologicalModel::new(m.clone(), t)
}

/// Failure evidence for the atom clause: `⟦atom⟧` (or its complement when
/// `complement` is set) is not open.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomWitness {
    pub atom: String,
    pub extension: StateSet,
    pub complement: bool,
}

/// Outcome of the four topological-model conditions. Each `Some` holds the
/// witness of a failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopModelReport {
    /// Always true on a finite carrier: every subset is compact.
    pub successors_compact: bool,
    /// An open `O` with `⟨R⟩O` not open.
    pub diamond_open: Option<StateSet>,
    /// An open `O` with `[R]O` not open.
    pub box_open: Option<StateSet>,
    pub atoms_clopen: Option<AtomWitness>,
}

impl TopModelReport {
    pub fn pass(&self) -> bool {
        self.successors_compact
            && self.diamond_open.is_none()
            && self.box_open.is_none()
            && self.atoms_clopen.is_none()
    }
}

pub(crate) fn atom_clause_violation(tm: &TopologicalModel) -> Option<AtomWitness> {
    let (m, t) = (tm.model(), tm.topology());
    m.atoms().iter().find_map(|p| {
        let ext = m.atom_extension(p);
        let complement = if !t.is_open(&ext) {
            false
        } else if !t.is_closed(&ext) {
            true
        } else {
            return None;
        };
        Some(AtomWitness {
            atom: p.clone(),
            extension: ext,
            complement,
        })
    })
}

pub fn check_topological_model(tm: &TopologicalModel) -> TopModelReport {
    let (m, t) = (tm.model(), tm.topology());
    TopModelReport {
        successors_compact: true,
        diamond_open: t.opens().find(|o| !t.is_open(&m.diamond_pre(o))).cloned(),
        box_open: t.opens().find(|o| !t.is_open(&m.box_pre(o))).cloned(),
        atoms_clopen: atom_clause_violation(tm),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::two_cycle;
    use crate::formula::AtomSet;

    fn s(n: usize, xs: &[usize]) -> StateSet {
        StateSet::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn generate_from_chain_subbase() {
        let t = FiniteTopology::generate(3, &[s(3, &[0]), s(3, &[0, 1])]).unwrap();
        let expected: BTreeSet<_> = [s(3, &[]), s(3, &[0]), s(3, &[0, 1]), s(3, &[0, 1, 2])].into();
        assert_eq!(t.opens().cloned().collect::<BTreeSet<_>>(), expected);
        assert_eq!(t.closure(&s(3, &[0])), s(3, &[0, 1, 2]));
        let closed: BTreeSet<_> = t.closed_sets().collect();
        let expected: BTreeSet<_> = [s(3, &[]), s(3, &[2]), s(3, &[1, 2]), s(3, &[0, 1, 2])].into();
        assert_eq!(closed, expected);
    }

    #[test]
    fn extreme_topologies() {
        let ind = FiniteTopology::indiscrete(3).unwrap();
        assert_eq!(ind.open_count(), 2);
        let disc = FiniteTopology::discrete(3).unwrap();
        assert_eq!(disc.open_count(), 8);
        for mask in 0..8 {
            let a = StateSet::from_mask(3, mask);
            assert_eq!(disc.closure(&a), a);
            assert!(disc.is_clopen(&a));
        }
        assert!(ind.closure(&s(3, &[])).is_empty());
        let empty = FiniteTopology::indiscrete(0).unwrap();
        assert_eq!(empty.open_count(), 1);
    }

    #[test]
    fn carrier_limit() {
        assert!(FiniteTopology::discrete(MAX_CARRIER).is_ok());
        assert_eq!(
            FiniteTopology::indiscrete(MAX_CARRIER + 1).unwrap_err(),
            TopologyError::CarrierTooLarge {
                size: 17,
                max: MAX_CARRIER
            }
        );
    }

    #[test]
    fn from_opens_reports_first_violation() {
        let bad = [s(3, &[]), s(3, &[0]), s(3, &[1]), s(3, &[0, 1, 2])];
        assert_eq!(
            FiniteTopology::from_opens(3, bad).unwrap_err(),
            TopologyError::NotClosed {
                first: s(3, &[0]),
                second: s(3, &[1]),
                op: SetOp::Union
            }
        );
        assert_eq!(
            FiniteTopology::from_opens(2, [s(2, &[0, 1])]).unwrap_err(),
            TopologyError::MissingEmpty
        );
        let t = FiniteTopology::generate(3, &[s(3, &[0]), s(3, &[1])]).unwrap();
        assert_eq!(FiniteTopology::from_opens(3, t.opens().cloned()).unwrap(), t);
    }

    #[test]
    fn formula_topology_examples() {
        let tm = formula_topology(&two_cycle()).unwrap();
        assert_eq!(tm.topology(), &FiniteTopology::indiscrete(2).unwrap());

        let v = vec![AtomSet::new(), AtomSet::from(["p".to_string()]), AtomSet::new()];
        let m = KripkeModel::with_default_names(&["p"], 3, &[(0, 1), (0, 2)], v).unwrap();
        let tm = formula_topology(&m).unwrap();
        assert_eq!(tm.topology(), &FiniteTopology::discrete(3).unwrap());
        assert!(check_topological_model(&tm).pass());
    }

    #[test]
    fn indiscrete_fails_atom_clause() {
        let v = vec![AtomSet::new(), AtomSet::from(["p".to_string()])];
        let m = KripkeModel::with_default_names(&["p"], 2, &[(0, 1)], v).unwrap();
        let tm = TopologicalModel::new(m.clone(), FiniteTopology::indiscrete(2).unwrap()).unwrap();
        let report = check_topological_model(&tm);
        assert!(!report.pass());
        assert_eq!(
            report.atoms_clopen,
            Some(AtomWitness {
                atom: "p".into(),
                extension: s(2, &[1]),
                complement: false
            })
        );
        let disc = TopologicalModel::new(m, FiniteTopology::discrete(2).unwrap()).unwrap();
        assert!(check_topological_model(&disc).pass());
    }

    #[test]
    fn continuity() {
        let sierpinski = FiniteTopology::generate(2, &[s(2, &[0])]).unwrap();
        let disc = FiniteTopology::discrete(2).unwrap();
        assert!(disc.is_continuous(&[1, 0], &sierpinski));
        assert_eq!(sierpinski.continuity_violation(&[1, 0], &sierpinski), Some(s(2, &[0])));
    }
}
