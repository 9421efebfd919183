//! Small named structures used throughout the test suites and the CLI.

use crate::kripke::KripkeModel;

fn chain_edges(n: usize) -> Vec<(usize, usize)> {
    // state 0 is the root s, state i+1 is s_i
    let to_root = (0..=n).map(|i| (0, i + 1));
    let down = (0..n).map(|i| (i + 2, i + 1));
    to_root.chain(down).collect()
}

fn chain_names(n: usize) -> Vec<String> {
    std::iter::once("s".to_string())
        .chain((0..=n).map(|i| format!("s{i}")))
        .collect()
}

/// The chain `s ⟶ s_i` for `i ≤ n`, `s_{i+1} ⟶ s_i`, all valuations empty.
/// States are `s, s0, .., sn` in that order.
pub fn example1_truncation(n: usize) -> KripkeModel {
    let names = chain_names(n);
    let len = names.len();
    KripkeModel::new(vec![], names, chain_edges(n), vec![Default::default(); len])
        .expect("chain is well formed")
}

/// [`example1_truncation`] plus a point `s_inf` with a self-loop that the
/// root also reaches. `s_inf` is the last state.
pub fn example2_truncation(n: usize) -> KripkeModel {
    let mut names = chain_names(n);
    let inf = names.len();
    names.push("s_inf".into());
    let mut edges = chain_edges(n);
    edges.push((0, inf));
    edges.push((inf, inf));
    KripkeModel::new(vec![], names, edges, vec![Default::default(); inf + 1])
        .expect("extended chain is well formed")
}

/// `a ⟶ b ⟶ a`, valuations empty.
pub fn two_cycle() -> KripkeModel {
    KripkeModel::new(
        vec![],
        vec!["a".into(), "b".into()],
        vec![(0, 1), (1, 0)],
        vec![Default::default(); 2],
    )
    .expect("two-cycle is well formed")
}

/// One state with a self-loop.
pub fn self_loop() -> KripkeModel {
    KripkeModel::frame(1, &[(0, 0)])
}
