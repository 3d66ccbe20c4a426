//! Shortest-path search with a deterministic lexicographic tiebreak.
//!
//! Keys are `(cost, path)` compared lexicographically. Every edge costs at
//! least one, so two paths of equal cost are never prefixes of one another
//! and appending a common label preserves their order: Dijkstra on these
//! keys settles every node with its least key.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::hash::Hash;

pub(crate) enum SearchOutcome<L, X> {
    /// The least-key node satisfying the predicate.
    Found { path: Vec<L>, extra: X },
    /// Every node within the bound was settled and none was bad; `cut` is
    /// true when some node lay beyond the bound.
    Exhausted { nodes: usize, cut: bool },
}

pub(crate) fn lex_search<N, L, X>(
    start: N,
    bound: Option<usize>,
    mut expand: impl FnMut(&N) -> Vec<(L, usize, N)>,
    mut bad: impl FnMut(&N) -> Option<X>,
) -> SearchOutcome<L, X>
where
    N: Clone + Eq + Hash,
    L: Ord + Clone,
{
    let mut ids: HashMap<N, usize> = HashMap::new();
    let mut nodes: Vec<N> = Vec::new();
    let mut settled: Vec<bool> = Vec::new();
    let mut intern = |n: N, nodes: &mut Vec<N>, settled: &mut Vec<bool>| -> usize {
        *ids.entry(n.clone()).or_insert_with(|| {
            nodes.push(n);
            settled.push(false);
            nodes.len() - 1
        })
    };
    let s = intern(start, &mut nodes, &mut settled);
    let mut heap = BinaryHeap::from([Reverse((0usize, Vec::<L>::new(), s))]);
    let mut beyond: Vec<usize> = Vec::new();
    let mut count = 0;
    while let Some(Reverse((cost, path, id))) = heap.pop() {
        if settled[id] {
            continue;
        }
        settled[id] = true;
        count += 1;
        let node = nodes[id].clone();
        if let Some(extra) = bad(&node) {
            return SearchOutcome::Found { path, extra };
        }
        for (label, step, next) in expand(&node) {
            let c = cost + step;
            let nid = intern(next, &mut nodes, &mut settled);
            if bound.is_some_and(|b| c > b) {
                beyond.push(nid);
                continue;
            }
            if !settled[nid] {
                let mut p = path.clone();
                p.push(label);
                heap.push(Reverse((c, p, nid)));
            }
        }
    }
    let cut = beyond.iter().any(|&id| !settled[id]);
    SearchOutcome::Exhausted { nodes: count, cut }
}
