mod common;

use common::{formula_strategy, naive_sat, rng, truth_table};
use proptest::prelude::*;
use vkt::examples::{example1_truncation, example2_truncation};
use vkt::ladder::{
    ladder_eval, member_formula, nonsaturation_witness_chain, parametric_member,
    saturation_check_extended, Ladder, LadderValue, Uncovered,
};
use vkt::{random, Formula};

fn closed() -> BoxedStrategy<Formula> {
    formula_strategy(vec![], 8)
}

/// Truncation length so that every chain state up to `reach` sees the whole
/// relevant history of a formula of depth `depth`.
fn truncation(depth: usize, reach: usize) -> usize {
    depth + reach + 2
}

fn check_against_truncation(which: Ladder, f: &Formula, v: &LadderValue) -> Result<(), TestCaseError> {
    let d = f.modal_depth();
    let reach = v.threshold() + 2;
    let n = truncation(d, reach);
    let m = match which {
        Ladder::Chain => example1_truncation(n),
        Ladder::Extended => example2_truncation(n),
    };
    let truth = truth_table(&m, f);
    // state i + 1 is s_i; s_i only sees s_0 .. s_{i-1}, so no depth bound is needed
    for i in 0..=n {
        prop_assert_eq!(truth[i + 1], v.at(i), "s{} for {}", i, f);
    }
    // the root sees the cut-off end of the chain, which only looks like the
    // infinite tail up to depth n - d
    prop_assert_eq!(truth[0], v.at_root, "root for {}", f);
    if which == Ladder::Extended {
        prop_assert_eq!(Some(truth[n + 2]), v.at_inf);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn values_agree_with_long_truncations(f in closed()) {
        for which in [Ladder::Chain, Ladder::Extended] {
            let v = ladder_eval(which, &f).unwrap();
            prop_assert!(v.prefix.last() != Some(&v.tail));
            prop_assert_eq!(v.at_inf.is_some(), which == Ladder::Extended);
            check_against_truncation(which, &f, &v)?;
        }
    }

    #[test]
    fn infinity_collapses_the_modalities(f in closed()) {
        let inf = |g: Formula| ladder_eval(Ladder::Extended, &g).unwrap().at_inf;
        let here = inf(f.clone());
        prop_assert_eq!(inf(Formula::diamond(f.clone())), here);
        prop_assert_eq!(inf(Formula::boxed(f.clone())), here);
        prop_assert_eq!(ladder_eval(Ladder::Extended, &f).unwrap().tail, here.unwrap());
    }

    #[test]
    fn box_shifts_a_true_tail(f in closed()) {
        for which in [Ladder::Chain, Ladder::Extended] {
            let v = ladder_eval(which, &f).unwrap();
            let b = ladder_eval(which, &Formula::boxed(f.clone())).unwrap();
            if v.tail {
                let k = v.threshold();
                prop_assert!(b.tail && b.threshold() <= k + 1);
            }
        }
    }

    #[test]
    fn extracted_subfamilies_cover(seed in any::<u64>(), plus_param in any::<bool>()) {
        let mut rng = rng(seed);
        let family: Vec<Formula> = (0..1 + seed as usize % 4)
            .map(|_| random::formula(&mut rng, &[], 5, 12))
            .collect();
        let report = saturation_check_extended(&family, plus_param).unwrap();
        let all: Vec<LadderValue> = family.iter().map(|f| ladder_eval(Ladder::Extended, f).unwrap()).collect();
        if report.holds {
            let cover = Formula::disj(report.subfamily.iter().map(|&mb| member_formula(&family, mb)));
            let v = ladder_eval(Ladder::Extended, &cover).unwrap();
            prop_assert!(v.all_chain() && v.at_inf == Some(true), "{}", cover);
            prop_assert!(ladder_eval(Ladder::Extended, &Formula::boxed(cover)).unwrap().at_root);
        } else {
            match report.witness.unwrap() {
                Uncovered::Inf => prop_assert!(all.iter().all(|v| v.at_inf == Some(false))),
                Uncovered::Chain(j) => {
                    prop_assert!(!plus_param);
                    prop_assert!(all.iter().all(|v| !v.at(j)));
                }
            }
        }
    }
}

#[test]
fn chain_states_and_boxes_of_falsum() {
    for i in 0..=10 {
        for j in 0..=12 {
            let v = ladder_eval(Ladder::Chain, &Formula::box_power(j, Formula::Bot)).unwrap();
            assert_eq!(v.at(i), j > i, "s{i} and []^{j}false");
        }
    }
}

#[test]
fn the_chain_root_is_not_saturated() {
    let report = nonsaturation_witness_chain(8);
    assert!(report.infinite_family_covers);
    assert_eq!(report.failures.len(), 512);
    for failure in &report.failures {
        let m = failure.witness.expect("every finite subfamily fails");
        let chain = example1_truncation(m + 2);
        let disjunction = Formula::disj(failure.indices.iter().map(|&i| parametric_member(i)));
        assert!(!naive_sat(&chain, m + 1, &disjunction));
    }
}
