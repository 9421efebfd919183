//! The compact Vietoris construction on finite spaces.
//!
//! Every subset of a finite space is compact, so the points of `V(X)` are
//! all subsets of the carrier. The hyperspace topology itself is never
//! materialized; continuity into `V(X)` is decided on the subbase
//! `⟨O⟩ = {K | K ∩ O ≠ ∅}`, `[O] = {K | K ⊆ O}`.

use thiserror::Error;

use crate::formula::AtomSet;
use crate::kripke::{check_bisimulation, BisimViolation, KripkeModel, Relation};
use crate::set::StateSet;
use crate::topology::{
    image, preimage, AtomWitness, FiniteTopology, TopologicalModel, TopologyError,
};

/// Largest base carrier for which the point set `2^X` is materialized.
pub const MAX_VIETORIS_BASE: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VietorisError {
    #[error("base carrier of {size} points exceeds the limit of {max}")]
    BaseTooLarge { size: usize, max: usize },
    #[error("map is not continuous: preimage of open {open:?} is not open")]
    NotContinuous { open: StateSet },
    #[error("map does not fit the spaces")]
    ShapeMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClosureError {
    #[error("not a substructure: {0} -> {1} leaves the set")]
    NotSubstructure(usize, usize),
    #[error("not a bisimulation: {0}")]
    NotBisimulation(BisimViolation),
    #[error("set does not fit the carrier")]
    WrongUniverse,
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// `K ∈ ⟨O⟩`.
pub fn in_diamond(open: &StateSet, k: &StateSet) -> bool {
    k.intersects(open)
}

/// `K ∈ [O]`.
pub fn in_box(open: &StateSet, k: &StateSet) -> bool {
    k.is_subset(open)
}

/// Which kind of subbase set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Modality {
    Diamond,
    Box,
}

/// `V(X)` for a finite base space. Points are indexed by their bitmask over
/// the base carrier.
#[derive(Debug, Clone)]
pub struct VietorisSpace {
    base: FiniteTopology,
}

impl VietorisSpace {
    pub fn new(base: FiniteTopology) -> Result<Self, VietorisError> {
        let size = base.carrier_len();
        if size > MAX_VIETORIS_BASE {
            return Err(VietorisError::BaseTooLarge {
                size,
                max: MAX_VIETORIS_BASE,
            });
        }
        Ok(VietorisSpace { base })
    }

    pub fn base(&self) -> &FiniteTopology {
        &self.base
    }

    pub fn point_count(&self) -> usize {
        1 << self.base.carrier_len()
    }

    pub fn point(&self, index: usize) -> StateSet {
        StateSet::from_mask(self.base.carrier_len(), index as u64)
    }

    pub fn index_of(&self, k: &StateSet) -> usize {
        k.mask() as usize
    }

    pub fn points(&self) -> impl Iterator<Item = StateSet> + '_ {
        (0..self.point_count()).map(|i| self.point(i))
    }

    /// The subbase set `⟨O⟩` or `[O]` as a set of point indices.
    pub fn subbase_set(&self, modality: Modality, open: &StateSet) -> StateSet {
        let member = |k: &StateSet| match modality {
            Modality::Diamond => in_diamond(open, k),
            Modality::Box => in_box(open, k),
        };
        StateSet::from_indices(
            self.point_count(),
            (0..self.point_count()).filter(|&i| member(&self.point(i))),
        )
    }

    /// All subbase sets, one pair per base open, in the base's open order.
    pub fn subbase(&self) -> Vec<(Modality, StateSet, StateSet)> {
        self.base
            .opens()
            .flat_map(|o| {
                [Modality::Diamond, Modality::Box]
                    .map(|md| (md, o.clone(), self.subbase_set(md, o)))
            })
            .collect()
    }
}

/// `(Vf)(K) = f(K)`, as a map on point indices. `f` must be continuous
/// between the base topologies.
pub fn vietoris_map(
    f: &[usize],
    from: &VietorisSpace,
    to: &VietorisSpace,
) -> Result<Vec<usize>, VietorisError> {
    if f.len() != from.base.carrier_len() || f.iter().any(|&y| y >= to.base.carrier_len()) {
        return Err(VietorisError::ShapeMismatch);
    }
    if let Some(open) = from.base.continuity_violation(f, &to.base) {
        return Err(VietorisError::NotContinuous { open });
    }
    let n = to.base.carrier_len();
    Ok(from.points().map(|k| to.index_of(&image(f, &k, n))).collect())
}

/// Checks `(Vf)⁻¹(⟨O⟩) = ⟨f⁻¹(O)⟩` and `(Vf)⁻¹([O]) = [f⁻¹(O)]` for every
/// open `O` of the target base. Returns the first failing subbase set.
pub fn subbase_preimage_violation(
    f: &[usize],
    vf: &[usize],
    from: &VietorisSpace,
    to: &VietorisSpace,
) -> Option<(Modality, StateSet)> {
    let domain = from.point_count();
    for o in to.base.opens() {
        let pulled = preimage(f, o, from.base.carrier_len());
        for md in [Modality::Diamond, Modality::Box] {
            let lhs = preimage(vf, &to.subbase_set(md, o), domain);
            if lhs != from.subbase_set(md, &pulled) {
                return Some((md, o.clone()));
            }
        }
    }
    None
}

/// An element of `P(Φ)`, seen as a point of the space with subbase `↑p`
/// and the complements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropPoint(pub AtomSet);

impl PropPoint {
    /// `u ∈ ↑p`.
    pub fn in_up(&self, atom: &str) -> bool {
        self.0.contains(atom)
    }

    /// An atom `p` with exactly one of `self`, `other` in `↑p`: the subbase
    /// sets `↑p` and their complements separate points.
    pub fn separating_atom<'a>(&'a self, other: &'a PropPoint) -> Option<&'a str> {
        self.0
            .symmetric_difference(&other.0)
            .next()
            .map(String::as_str)
    }
}

/// Continuity of the structure map `x ↦ (R(x), v(x))` into `V(X) × P(Φ)`,
/// checked on the subbase. Each `Some` is a failure witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureMapReport {
    /// Every `R(x)` is a point of `V(X)`; true on finite carriers.
    pub successors_are_points: bool,
    /// An open `O` with `R⁻¹(⟨O⟩)` not open.
    pub diamond_clause: Option<StateSet>,
    /// An open `O` with `R⁻¹([O])` not open.
    pub box_clause: Option<StateSet>,
    /// An atom whose `v⁻¹(↑p)` or complement is not open.
    pub valuation_clause: Option<AtomWitness>,
    /// An open `O` where `R⁻¹([O]) = [R]O` or `R⁻¹(⟨O⟩) = ⟨R⟩O` fails.
    pub identity_violation: Option<StateSet>,
}

impl StructureMapReport {
    pub fn pass(&self) -> bool {
        self.successors_are_points
            && self.diamond_clause.is_none()
            && self.box_clause.is_none()
            && self.valuation_clause.is_none()
            && self.identity_violation.is_none()
    }
}

pub fn structure_map_continuous(tm: &TopologicalModel) -> StructureMapReport {
    let (m, t) = (tm.model(), tm.topology());
    let n = m.len();
    let successors: Vec<StateSet> = m.states().map(|x| m.successor_set(x)).collect();
    let pull = |member: &dyn Fn(&StateSet) -> bool| {
        StateSet::from_indices(n, (0..n).filter(|&x| member(&successors[x])))
    };
    let mut report = StructureMapReport {
        successors_are_points: successors.iter().all(|k| k.universe() == n),
        diamond_clause: None,
        box_clause: None,
        valuation_clause: None,
        identity_violation: None,
    };
    for o in t.opens() {
        let via_diamond = pull(&|k| in_diamond(o, k));
        let via_box = pull(&|k| in_box(o, k));
        if report.identity_violation.is_none()
            && (via_diamond != m.diamond_pre(o) || via_box != m.box_pre(o))
        {
            report.identity_violation = Some(o.clone());
        }
        if report.diamond_clause.is_none() && !t.is_open(&via_diamond) {
            report.diamond_clause = Some(o.clone());
        }
        if report.box_clause.is_none() && !t.is_open(&via_box) {
            report.box_clause = Some(o.clone());
        }
    }
    let points: Vec<PropPoint> = m.states().map(|x| PropPoint(m.val(x).clone())).collect();
    report.valuation_clause = m.atoms().iter().find_map(|p| {
        let up = StateSet::from_indices(n, (0..n).filter(|&x| points[x].in_up(p)));
        let complement = if !t.is_open(&up) {
            false
        } else if !t.is_open(&up.complement()) {
            true
        } else {
            return None;
        };
        Some(AtomWitness {
            atom: p.clone(),
            extension: up,
            complement,
        })
    });
    report
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubcoalgebraClosureReport {
    pub closure: StateSet,
    /// An edge `u ⟶ y` with `u` in the closure and `y` outside it.
    pub violation: Option<(usize, usize)>,
}

impl SubcoalgebraClosureReport {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Closes a Kripke substructure `U` topologically and checks that `Ū` is
/// again closed under successors.
pub fn closed_subcoalgebra_check(
    tm: &TopologicalModel,
    u: &StateSet,
) -> Result<SubcoalgebraClosureReport, ClosureError> {
    let m = tm.model();
    if u.universe() != m.len() {
        return Err(ClosureError::WrongUniverse);
    }
    if let Some((x, y)) = m.substructure_violation(u) {
        return Err(ClosureError::NotSubstructure(x, y));
    }
    let closure = tm.topology().closure(u);
    let violation = m.substructure_violation(&closure);
    Ok(SubcoalgebraClosureReport { closure, violation })
}

/// Closure of a relation in the product of two finite topologies: `(x, y)`
/// is in it iff the least box neighbourhood `N(x) × N(y)` meets `s`.
pub fn product_closure(a: &FiniteTopology, b: &FiniteTopology, s: &Relation) -> Relation {
    let pairs: Vec<(usize, usize)> = (0..a.carrier_len())
        .flat_map(|x| (0..b.carrier_len()).map(move |y| (x, y)))
        .filter(|&(x, y)| {
            let (nx, ny) = (a.neighborhood(x), b.neighborhood(y));
            s.pairs().any(|(p, q)| nx.contains(p) && ny.contains(q))
        })
        .collect();
    Relation::new(a.carrier_len(), b.carrier_len(), pairs).expect("pairs stay in range")
}

/// The product topology on `X × Y`, point `(x, y)` encoded as
/// `x * |Y| + y`, generated by the open boxes `O₁ × O₂`.
pub fn product_topology(
    a: &FiniteTopology,
    b: &FiniteTopology,
) -> Result<FiniteTopology, TopologyError> {
    let (n, m) = (a.carrier_len(), b.carrier_len());
    let boxes: Vec<StateSet> = a
        .opens()
        .flat_map(|o1| {
            b.opens().map(move |o2| {
                StateSet::from_indices(
                    n * m,
                    o1.iter().flat_map(|x| o2.iter().map(move |y| x * m + y)),
                )
            })
        })
        .collect();
    FiniteTopology::generate(n * m, &boxes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimClosureReport {
    pub closure: Relation,
    pub violation: Option<BisimViolation>,
}

impl BisimClosureReport {
    pub fn pass(&self) -> bool {
        self.violation.is_none()
    }
}

/// Closes a bisimulation in the product topology and checks the three
/// bisimulation clauses on the closure.
pub fn closed_bisimulation_check(
    a: &TopologicalModel,
    b: &TopologicalModel,
    s: &Relation,
) -> Result<BisimClosureReport, ClosureError> {
    if (s.left_len(), s.right_len()) != (a.model().len(), b.model().len()) {
        return Err(ClosureError::WrongUniverse);
    }
    check_bisimulation(a.model(), b.model(), s).map_err(ClosureError::NotBisimulation)?;
    let closure = product_closure(a.topology(), b.topology(), s);
    let violation = check_bisimulation(a.model(), b.model(), &closure).err();
    Ok(BisimClosureReport { closure, violation })
}

/// Helper for callers holding a bare model: the discrete topological model.
pub fn discrete_model(m: &KripkeModel) -> Result<TopologicalModel, TopologyError> {
    TopologicalModel::new(m.clone(), FiniteTopology::discrete(m.len())?)
}
