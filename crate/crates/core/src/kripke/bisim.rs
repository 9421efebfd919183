use std::fmt;

use super::{KripkeModel, Partition, Relation};

/// Which of the three bisimulation clauses failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// `v₁(x) ≠ v₂(y)`.
    Valuation,
    /// `x ⟶ successor` has no matching step from `y`.
    Forth { successor: usize },
    /// `y ⟶ successor` has no matching step from `x`.
    Back { successor: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BisimViolation {
    pub pair: (usize, usize),
    pub clause: Clause,
}

impl fmt::Display for BisimViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.pair;
        match self.clause {
            Clause::Valuation => write!(f, "({x}, {y}): valuations differ"),
            Clause::Forth { successor } => {
                write!(f, "({x}, {y}): {x} -> {successor} is not matched")
            }
            Clause::Back { successor } => {
                write!(f, "({x}, {y}): {y} -> {successor} is not matched")
            }
        }
    }
}

fn pair_violation(
    a: &KripkeModel,
    b: &KripkeModel,
    related: impl Fn(usize, usize) -> bool,
    x: usize,
    y: usize,
) -> Option<Clause> {
    if a.val(x) != b.val(y) {
        return Some(Clause::Valuation);
    }
    if let Some(&successor) = a
        .successors(x)
        .iter()
        .find(|&&x2| !b.successors(y).iter().any(|&y2| related(x2, y2)))
    {
        return Some(Clause::Forth { successor });
    }
    b.successors(y)
        .iter()
        .find(|&&y2| !a.successors(x).iter().any(|&x2| related(x2, y2)))
        .map(|&successor| Clause::Back { successor })
}

/// Checks the three bisimulation clauses at every pair of `r`, in pair
/// order, and reports the first failure.
pub fn check_bisimulation(
    a: &KripkeModel,
    b: &KripkeModel,
    r: &Relation,
) -> Result<(), BisimViolation> {
    assert_eq!(
        (r.left_len(), r.right_len()),
        (a.len(), b.len()),
        "relation does not match the models"
    );
    for (x, y) in r.pairs() {
        if let Some(clause) = pair_violation(a, b, |x2, y2| r.contains(x2, y2), x, y) {
            return Err(BisimViolation {
                pair: (x, y),
                clause,
            });
        }
    }
    Ok(())
}

pub fn is_bisimulation(a: &KripkeModel, b: &KripkeModel, r: &Relation) -> bool {
    check_bisimulation(a, b, r).is_ok()
}

/// The largest bisimulation `∼` between `a` and `b`: start from all pairs
/// with equal valuations and delete pairs violating the forth or back
/// clause until nothing changes.
pub fn largest_bisimulation(a: &KripkeModel, b: &KripkeModel) -> Relation {
    let (n, m) = (a.len(), b.len());
    let mut related = vec![false; n * m];
    for x in a.states() {
        for y in b.states() {
            related[x * m + y] = a.val(x) == b.val(y);
        }
    }
    loop {
        let mut changed = false;
        for x in a.states() {
            for y in b.states() {
                if !related[x * m + y] {
                    continue;
                }
                if pair_violation(a, b, |x2, y2| related[x2 * m + y2], x, y).is_some() {
                    related[x * m + y] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let pairs = (0..n * m).filter(|&i| related[i]).map(|i| (i / m, i % m));
    Relation::new(n, m, pairs).expect("pairs are in range")
}

/// A map is a homomorphism iff its graph is a bisimulation.
pub fn is_homomorphism(a: &KripkeModel, b: &KripkeModel, map: &[usize]) -> bool {
    if map.len() != a.len() {
        return false;
    }
    match Relation::graph(map, b.len()) {
        Ok(g) => is_bisimulation(a, b, &g),
        Err(_) => false,
    }
}

/// `ker f = G(f) ∘ G(f)⁻¹ = {(x, x') | f(x) = f(x')}`.
pub fn kernel(map: &[usize], codomain: usize) -> Relation {
    let g = Relation::graph(map, codomain).expect("map stays in its codomain");
    g.compose(&g.converse()).expect("graph endpoints line up")
}

/// Collapses `m` by its largest auto-bisimulation. Returns the quotient and
/// the projection `π`; quotient state `i` is named after the least state of
/// block `i`, and its valuation is the union over the block.
pub fn quotient(m: &KripkeModel) -> (KripkeModel, Vec<usize>) {
    let blocks = Partition::from_equivalence(&largest_bisimulation(m, m));
    let pi = blocks.projection().to_vec();
    let names = (0..blocks.len())
        .map(|b| m.name(blocks.representative(b)).to_string())
        .collect();
    let val = blocks
        .blocks()
        .iter()
        .map(|b| b.iter().flat_map(|&x| m.val(x).iter().cloned()).collect())
        .collect();
    let edges = m.edges().iter().map(|&(x, y)| (pi[x], pi[y])).collect();
    let q = KripkeModel::new(m.atoms().to_vec(), names, edges, val)
        .expect("quotient of a valid model is valid");
    (q, pi)
}

/// Every state of a finite model has finitely many successors, and image
/// finite states are saturated, so this holds for every input.
pub fn check_saturation_finite(m: &KripkeModel) -> bool {
    m.states().all(|x| m.successors(x).len() <= m.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{example1_truncation, example2_truncation, self_loop, two_cycle};
    use crate::formula::AtomSet;

    #[test]
    fn empty_and_identity_are_bisimulations() {
        let m = example1_truncation(3);
        assert!(is_bisimulation(&m, &m, &Relation::empty(m.len(), m.len())));
        assert!(is_bisimulation(&m, &m, &Relation::identity(m.len())));
    }

    #[test]
    fn example1_pair_fails_back_clause() {
        let m = example1_truncation(3);
        let (s0, s1) = (m.index_of("s0").unwrap(), m.index_of("s1").unwrap());
        let r = Relation::new(m.len(), m.len(), [(s0, s1)]).unwrap();
        assert_eq!(
            check_bisimulation(&m, &m, &r).unwrap_err(),
            BisimViolation {
                pair: (s0, s1),
                clause: Clause::Back { successor: s0 }
            }
        );
    }

    #[test]
    fn two_cycle_is_fully_bisimilar() {
        let m = two_cycle();
        let r = largest_bisimulation(&m, &m);
        assert_eq!(r.pairs().collect::<Vec<_>>(), [(0, 0), (0, 1), (1, 0), (1, 1)]);
    }

    #[test]
    fn example2_has_identity_bisimilarity() {
        let m = example2_truncation(3);
        assert_eq!(largest_bisimulation(&m, &m), Relation::identity(m.len()));
    }

    #[test]
    fn homomorphisms() {
        let m = two_cycle();
        assert!(is_homomorphism(&m, &m, &[0, 1]));
        assert!(is_homomorphism(&m, &self_loop(), &[0, 0]));
        assert!(!is_homomorphism(&m, &self_loop(), &[0]));
        assert!(!is_homomorphism(&m, &self_loop(), &[0, 1]));
        let v = vec![AtomSet::new(), ["p".to_string()].into()];
        let split = KripkeModel::with_default_names(&["p"], 2, &[], v).unwrap();
        let one = KripkeModel::with_default_names(&["p"], 1, &[], vec![AtomSet::new()]).unwrap();
        assert!(!is_homomorphism(&split, &one, &[0, 0]));
    }

    #[test]
    fn quotient_examples() {
        let (q, pi) = quotient(&two_cycle());
        assert_eq!(q.len(), 1);
        assert_eq!(q.successors(0), &[0]);
        assert_eq!(pi, [0, 0]);

        let m = example2_truncation(3);
        let (q, pi) = quotient(&m);
        assert_eq!(q, m);
        assert_eq!(pi, (0..m.len()).collect::<Vec<_>>());

        let v = (0..3).map(|i| AtomSet::from([format!("p{i}")])).collect();
        let distinct =
            KripkeModel::with_default_names(&["p0", "p1", "p2"], 3, &[(0, 1), (1, 1)], v).unwrap();
        assert_eq!(quotient(&distinct).0, distinct);
    }

    #[test]
    fn kernel_of_projection_is_bisimilarity() {
        let m = two_cycle().disjoint_union(&self_loop());
        let (q, pi) = quotient(&m);
        assert_eq!(kernel(&pi, q.len()), largest_bisimulation(&m, &m));
    }

    #[test]
    fn finite_models_are_saturated() {
        assert!(check_saturation_finite(&example1_truncation(3)));
        assert!(check_saturation_finite(&KripkeModel::frame(0, &[])));
        assert!(check_saturation_finite(&self_loop()));
    }
}
