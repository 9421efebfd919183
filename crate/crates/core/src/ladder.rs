//! Exact model checking on two infinite structures with empty valuations:
//!
//! * the **chain**: a root `s` with `s ⟶ s_i` for every `i ∈ ℕ` and
//!   `s_{i+1} ⟶ s_i`;
//! * the **extended** chain: the same plus a point `s_inf` with a self-loop,
//!   also reachable from `s`.
//!
//! The truth of a closed formula along `s_0, s_1, ..` is eventually
//! constant, so a finite prefix and a tail value describe it exactly.

use thiserror::Error;

use crate::formula::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Chain,
    Extended,
}

impl std::str::FromStr for Ladder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "chain" => Ok(Ladder::Chain),
            "extended" => Ok(Ladder::Extended),
            other => Err(format!("unknown structure {other:?}, expected chain or extended")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LadderError {
    #[error("formula contains atom {0:?}; every valuation here is empty")]
    AtomInFormula(String),
    #[error("an empty family covers no successor of the root")]
    EmptyFamily,
}

/// Truth of one formula at every state of a ladder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderValue {
    /// Truth at `s_0 .. s_{k-1}`; the last entry differs from `tail`.
    pub prefix: Vec<bool>,
    /// Truth at every `s_i` with `i ≥ prefix.len()`.
    pub tail: bool,
    pub at_root: bool,
    /// Truth at `s_inf`; present only for the extended structure.
    pub at_inf: Option<bool>,
}

impl LadderValue {
    fn normalized(mut prefix: Vec<bool>, tail: bool, at_root: bool, at_inf: Option<bool>) -> Self {
        while prefix.last() == Some(&tail) {
            prefix.pop();
        }
        LadderValue {
            prefix,
            tail,
            at_root,
            at_inf,
        }
    }

    fn constant(which: Ladder, b: bool) -> Self {
        let at_inf = (which == Ladder::Extended).then_some(b);
        LadderValue::normalized(Vec::new(), b, b, at_inf)
    }

    /// Truth at `s_i`.
    pub fn at(&self, i: usize) -> bool {
        self.prefix.get(i).copied().unwrap_or(self.tail)
    }

    /// Least `k` with the value constant from `s_k` on.
    pub fn threshold(&self) -> usize {
        self.prefix.len()
    }

    /// Truth at every `s_i`.
    pub fn all_chain(&self) -> bool {
        self.tail && self.prefix.iter().all(|&b| b)
    }

    /// Truth at some `s_i`.
    pub fn any_chain(&self) -> bool {
        self.tail || self.prefix.iter().any(|&b| b)
    }

    fn pointwise(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        let len = self.prefix.len().max(other.prefix.len());
        let prefix = (0..len).map(|i| op(self.at(i), other.at(i))).collect();
        let at_inf = self.at_inf.zip(other.at_inf).map(|(a, b)| op(a, b));
        LadderValue::normalized(
            prefix,
            op(self.tail, other.tail),
            op(self.at_root, other.at_root),
            at_inf,
        )
    }

    fn negate(&self) -> Self {
        LadderValue {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            tail: !self.tail,
            at_root: !self.at_root,
            at_inf: self.at_inf.map(|b| !b),
        }
    }

    /// `□` (`universal`) or `◇`: `s_0` has no successors, `s_{i+1}` sees
    /// `s_i`, `s_inf` sees itself, and the root sees every `s_i` and
    /// `s_inf`.
    fn modal(&self, universal: bool) -> Self {
        let prefix = std::iter::once(universal)
            .chain(self.prefix.iter().copied())
            .collect();
        let at_root = if universal {
            self.all_chain() && self.at_inf.unwrap_or(true)
        } else {
            self.any_chain() || self.at_inf.unwrap_or(false)
        };
        LadderValue::normalized(prefix, self.tail, at_root, self.at_inf)
    }
}

/// Exact truth of a closed formula on the chosen structure.
pub fn ladder_eval(which: Ladder, f: &Formula) -> Result<LadderValue, LadderError> {
    if let Some(atom) = f.atoms().into_iter().next() {
        return Err(LadderError::AtomInFormula(atom));
    }
    Ok(eval(which, f))
}

fn eval(which: Ladder, f: &Formula) -> LadderValue {
    match f {
        Formula::Atom(_) => unreachable!("atoms rejected in ladder_eval"),
        Formula::Top => LadderValue::constant(which, true),
        Formula::Bot => LadderValue::constant(which, false),
        Formula::Not(g) => eval(which, g).negate(),
        Formula::And(l, r) => eval(which, l).pointwise(&eval(which, r), |a, b| a && b),
        Formula::Or(l, r) => eval(which, l).pointwise(&eval(which, r), |a, b| a || b),
        Formula::Box(g) => eval(which, g).modal(true),
        Formula::Diamond(g) => eval(which, g).modal(false),
    }
}

/// The `i`-th member `□^{i+1}⊥` of the built-in parametric family.
pub fn parametric_member(i: usize) -> Formula {
    Formula::box_power(i + 1, Formula::Bot)
}

/// For one finite index set `I₀`, a chain state falsifying `⋁_{i∈I₀} □^{i+1}⊥`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCoverFailure {
    pub indices: Vec<usize>,
    /// `Some(m)` names `s_m`; `None` would mean the disjunction covers every
    /// `s_i`, which never happens.
    pub witness: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainWitnessReport {
    /// Largest index checked.
    pub bound: usize,
    /// Every `s_j` with `j ≤ bound + 1` satisfies the member with `i = j`.
    pub infinite_family_covers: bool,
    pub failures: Vec<FiniteCoverFailure>,
}

impl ChainWitnessReport {
    /// The root is not saturated: the infinite family covers its successors
    /// and no checked finite subfamily does.
    pub fn not_saturated(&self) -> bool {
        self.infinite_family_covers && self.failures.iter().all(|f| f.witness.is_some())
    }
}

/// Shows that the root of the chain is not saturated: every `s_j` satisfies
/// `□^{j+1}⊥`, yet for each `I₀ ⊆ {0..bound}` the state `s_m` with
/// `m = max(I₀) + 1` (or `s_0` for `I₀ = ∅`) falsifies the finite
/// disjunction.
pub fn nonsaturation_witness_chain(bound: usize) -> ChainWitnessReport {
    let members: Vec<LadderValue> = (0..=bound + 1)
        .map(|i| eval(Ladder::Chain, &parametric_member(i)))
        .collect();
    let infinite_family_covers = (0..=bound + 1).all(|j| members[j].at(j));
    let failures = (0..1u64 << (bound + 1))
        .map(|mask| {
            let indices: Vec<usize> = (0..=bound).filter(|i| mask >> i & 1 == 1).collect();
            let disjunction = Formula::disj(indices.iter().map(|&i| parametric_member(i)));
            let value = eval(Ladder::Chain, &disjunction);
            let m = indices.last().map_or(0, |&i| i + 1);
            let witness = (!value.at(m) && !value.tail).then_some(m);
            FiniteCoverFailure { indices, witness }
        })
        .collect();
    ChainWitnessReport {
        bound,
        infinite_family_covers,
        failures,
    }
}

/// A member of a family handed to [`saturation_check_extended`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Member {
    /// Index into the explicit list.
    Explicit(usize),
    /// `□^{i+1}⊥`.
    Parametric(usize),
}

/// A root successor no member covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Uncovered {
    Chain(usize),
    Inf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturationReport {
    /// Whether `s ⊩ □⋁ family`.
    pub holds: bool,
    /// When it holds: a finite subfamily that already covers every
    /// successor of the root, in the order chosen.
    pub subfamily: Vec<Member>,
    pub witness: Option<Uncovered>,
}

/// Decides `s ⊩ □⋁ family` on the extended structure, optionally with the
/// parametric family `□^{i+1}⊥` added, and extracts a finite subfamily: a
/// member true at `s_inf` is true on a whole tail `s_k, s_{k+1}, ..`, and
/// the finitely many states below `k` each pick a member of their own.
pub fn saturation_check_extended(
    family: &[Formula],
    plus_param: bool,
) -> Result<SaturationReport, LadderError> {
    if family.is_empty() && !plus_param {
        return Err(LadderError::EmptyFamily);
    }
    let values = family
        .iter()
        .map(|f| ladder_eval(Ladder::Extended, f))
        .collect::<Result<Vec<_>, _>>()?;

    let Some(inf_member) = values.iter().position(|v| v.at_inf == Some(true)) else {
        return Ok(SaturationReport {
            holds: false,
            subfamily: Vec::new(),
            witness: Some(Uncovered::Inf),
        });
    };
    let tail_start = values[inf_member].threshold();
    debug_assert!(values[inf_member].tail, "true at s_inf implies true on a tail");

    let mut subfamily = vec![Member::Explicit(inf_member)];
    for j in 0..tail_start {
        if values[inf_member].at(j) {
            continue;
        }
        let chosen = match values.iter().position(|v| v.at(j)) {
            Some(i) => Member::Explicit(i),
            None if plus_param => Member::Parametric(j),
            None => {
                return Ok(SaturationReport {
                    holds: false,
                    subfamily: Vec::new(),
                    witness: Some(Uncovered::Chain(j)),
                })
            }
        };
        if !subfamily.contains(&chosen) {
            subfamily.push(chosen);
        }
    }
    Ok(SaturationReport {
        holds: true,
        subfamily,
        witness: None,
    })
}

/// The formula a [`Member`] stands for.
pub fn member_formula(family: &[Formula], member: Member) -> Formula {
    match member {
        Member::Explicit(i) => family[i].clone(),
        Member::Parametric(i) => parametric_member(i),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn ext(text: &str) -> LadderValue {
        ladder_eval(Ladder::Extended, &parse(text).unwrap()).unwrap()
    }

    #[test]
    fn three_boxes_of_false() {
        assert_eq!(
            ext("[][][]false"),
            LadderValue {
                prefix: vec![true, true, true],
                tail: false,
                at_root: false,
                at_inf: Some(false)
            }
        );
    }

    #[test]
    fn top_is_constant() {
        assert_eq!(
            ext("true"),
            LadderValue {
                prefix: vec![],
                tail: true,
                at_root: true,
                at_inf: Some(true)
            }
        );
        let chain = ladder_eval(Ladder::Chain, &Formula::Top).unwrap();
        assert_eq!(chain.at_inf, None);
    }

    #[test]
    fn diamond_true() {
        assert_eq!(
            ext("<>true"),
            LadderValue {
                prefix: vec![false],
                tail: true,
                at_root: true,
                at_inf: Some(true)
            }
        );
    }

    #[test]
    fn root_box_on_chain_and_extension() {
        // □◇⊤ fails at the root because s_0 is a dead end.
        assert!(!ext("[]<>true").at_root);
        // ◇□⊥: the root sees s_0.
        assert!(ext("<>[]false").at_root);
        let chain = ladder_eval(Ladder::Chain, &parse("[]~[]<>true").unwrap()).unwrap();
        assert!(!chain.at_root);
    }

    #[test]
    fn atoms_are_rejected() {
        assert_eq!(
            ladder_eval(Ladder::Chain, &parse("[]p").unwrap()).unwrap_err(),
            LadderError::AtomInFormula("p".into())
        );
    }

    #[test]
    fn chain_witnesses() {
        let report = nonsaturation_witness_chain(8);
        assert!(report.infinite_family_covers);
        assert_eq!(report.failures.len(), 512);
        assert!(report.not_saturated());
        let find = |idx: &[usize]| {
            report
                .failures
                .iter()
                .find(|f| f.indices == idx)
                .unwrap()
                .witness
        };
        assert_eq!(find(&[0, 1, 2]), Some(3));
        assert_eq!(find(&[]), Some(0));
    }

    #[test]
    fn saturation_examples() {
        let r = saturation_check_extended(&[Formula::Top], false).unwrap();
        assert!(r.holds);
        assert_eq!(r.subfamily, [Member::Explicit(0)]);

        let family = [parse("<>true").unwrap(), parse("[]false").unwrap()];
        let r = saturation_check_extended(&family, false).unwrap();
        assert!(r.holds);
        assert_eq!(r.subfamily, [Member::Explicit(0), Member::Explicit(1)]);

        let r = saturation_check_extended(&[], true).unwrap();
        assert!(!r.holds);
        assert_eq!(r.witness, Some(Uncovered::Inf));

        assert_eq!(
            saturation_check_extended(&[], false).unwrap_err(),
            LadderError::EmptyFamily
        );
    }

    #[test]
    fn parametric_members_fill_the_prefix() {
        // ◇◇◇⊤ holds from s_3 on and at s_inf; s_0..s_2 need □^{j+1}⊥.
        let family = [parse("<><><>true").unwrap()];
        let r = saturation_check_extended(&family, true).unwrap();
        assert!(r.holds);
        assert_eq!(
            r.subfamily,
            [
                Member::Explicit(0),
                Member::Parametric(0),
                Member::Parametric(1),
                Member::Parametric(2)
            ]
        );
        let r = saturation_check_extended(&family, false).unwrap();
        assert_eq!(r.witness, Some(Uncovered::Chain(0)));
    }
}
