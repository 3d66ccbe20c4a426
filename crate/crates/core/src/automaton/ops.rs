//! Language operations on automata.

use super::{Alphabet, Automaton, AutomatonError, EventId, Word};
use std::collections::{HashMap, VecDeque};

/// Subset construction over relabelled events. `label[e]` is the output
/// event for input event `e`, or `None` to treat it as a silent move. The
/// result is a partial DFA over `out` preserving both the generated and the
/// marked language of the relabelled input.
pub(crate) fn relabel_determinize(
    a: &Automaton,
    out: Alphabet,
    label: &[Option<usize>],
) -> Automaton {
    let closure = |seed: &mut Vec<usize>| {
        let mut seen = vec![false; a.num_states()];
        for &q in seed.iter() {
            seen[q] = true;
        }
        let mut stack = seed.clone();
        while let Some(q) = stack.pop() {
            for &(e, t) in a.successors(q) {
                if label[e].is_none() && !seen[t] {
                    seen[t] = true;
                    seed.push(t);
                    stack.push(t);
                }
            }
        }
        seed.sort_unstable();
        seed.dedup();
    };

    let mut start = vec![a.initial()];
    closure(&mut start);
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    index.insert(start.clone(), 0);
    subsets.push(start);
    let mut delta: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let mut moves: Vec<Vec<usize>> = vec![Vec::new(); out.len()];
        for &q in &subsets[i] {
            for &(e, t) in a.successors(q) {
                if let Some(o) = label[e] {
                    moves[o].push(t);
                }
            }
        }
        let mut row = Vec::new();
        for (o, mut next) in moves.into_iter().enumerate() {
            if next.is_empty() {
                continue;
            }
            closure(&mut next);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    index.insert(next.clone(), id);
                    subsets.push(next);
                    id
                }
            };
            row.push((o, id));
        }
        delta.push(row);
        i += 1;
    }
    let marked = subsets
        .iter()
        .map(|s| s.iter().any(|&q| a.is_marked(q)))
        .collect();
    Automaton::from_parts(out, None, 0, marked, delta)
}

/// Partial DFA with the same generated and marked language. Deterministic
/// inputs are returned unchanged.
pub fn to_dfa(a: &Automaton) -> Automaton {
    if a.is_deterministic() {
        return a.clone();
    }
    let label: Vec<Option<usize>> = (0..a.alphabet().len()).map(Some).collect();
    relabel_determinize(a, a.alphabet().clone(), &label)
}

/// Adds a non-marked sink so that every state has a transition on every
/// event. Nondeterministic inputs are determinized first.
pub fn complete(a: &Automaton) -> Automaton {
    let d = to_dfa(a);
    let k = d.alphabet().len();
    if d.delta().iter().all(|row| row.len() == k) {
        return d;
    }
    let sink = d.num_states();
    let mut names = d.state_names().to_vec();
    let mut sink_name = "sink".to_string();
    while names.contains(&sink_name) {
        sink_name.push('\'');
    }
    names.push(sink_name);
    let mut delta: Vec<Vec<(usize, usize)>> = Vec::with_capacity(sink + 1);
    for q in 0..sink {
        delta.push((0..k).map(|e| (e, d.step(q, e).unwrap_or(sink))).collect());
    }
    delta.push((0..k).map(|e| (e, sink)).collect());
    let mut marked = d.marked().to_vec();
    marked.push(false);
    Automaton::from_parts(
        d.alphabet().clone(),
        Some(names),
        d.initial(),
        marked,
        delta,
    )
}

/// Complete DFA with the same marked language (reachable subset construction).
pub fn determinize(a: &Automaton) -> Automaton {
    complete(a)
}

fn reachable_states(a: &Automaton) -> Vec<bool> {
    let mut seen = vec![false; a.num_states()];
    seen[a.initial()] = true;
    let mut stack = vec![a.initial()];
    while let Some(q) = stack.pop() {
        for &(_, t) in a.successors(q) {
            if !seen[t] {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen
}

/// States from which some marked state is reachable.
pub(crate) fn coaccessible_states(a: &Automaton) -> Vec<bool> {
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); a.num_states()];
    for (s, _, t) in a.transitions() {
        rev[t].push(s);
    }
    let mut seen = a.marked().to_vec();
    let mut stack: Vec<usize> = (0..a.num_states()).filter(|&q| seen[q]).collect();
    while let Some(q) = stack.pop() {
        for &p in &rev[q] {
            if !seen[p] {
                seen[p] = true;
                stack.push(p);
            }
        }
    }
    seen
}

/// Keeps the states flagged in `keep` (names and order preserved).
fn restrict_states(a: &Automaton, keep: &[bool]) -> Automaton {
    if !keep[a.initial()] {
        return Automaton::empty(a.alphabet().clone());
    }
    if keep.iter().all(|&k| k) {
        return a.clone();
    }
    let mut map = vec![usize::MAX; a.num_states()];
    let mut names = Vec::new();
    for q in 0..a.num_states() {
        if keep[q] {
            map[q] = names.len();
            names.push(a.state_name(q).to_string());
        }
    }
    let mut delta = vec![Vec::new(); names.len()];
    let mut marked = vec![false; names.len()];
    for q in (0..a.num_states()).filter(|&q| keep[q]) {
        marked[map[q]] = a.is_marked(q);
        delta[map[q]] = a
            .successors(q)
            .iter()
            .filter(|&&(_, t)| keep[t])
            .map(|&(e, t)| (e, map[t]))
            .collect();
    }
    Automaton::from_parts(
        a.alphabet().clone(),
        Some(names),
        map[a.initial()],
        marked,
        delta,
    )
}

/// Removes unreachable states.
pub fn accessible(a: &Automaton) -> Automaton {
    restrict_states(a, &reachable_states(a))
}

/// Removes states that are unreachable or cannot reach a marked state. An
/// empty marked language yields [`Automaton::empty`].
pub fn trim(a: &Automaton) -> Automaton {
    let acc = reachable_states(a);
    let co = coaccessible_states(a);
    let keep: Vec<bool> = acc.iter().zip(&co).map(|(x, y)| *x && *y).collect();
    restrict_states(a, &keep)
}

/// Minimal partial DFA for the pair (generated, marked) language, with
/// states renamed in breadth-first order.
pub fn minimize(a: &Automaton) -> Automaton {
    let d = accessible(&to_dfa(a));
    let n = d.num_states();
    let mut block: Vec<usize> = (0..n).map(|q| usize::from(d.is_marked(q))).collect();
    let mut count = block
        .iter()
        .copied()
        .collect::<std::collections::HashSet<_>>()
        .len();
    loop {
        let mut ids: HashMap<(usize, Vec<(usize, usize)>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let sig: Vec<(usize, usize)> = d
                .successors(q)
                .iter()
                .map(|&(e, t)| (e, block[t]))
                .collect();
            let fresh = ids.len();
            next[q] = *ids.entry((block[q], sig)).or_insert(fresh);
        }
        let new_count = ids.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut delta = vec![Vec::new(); count];
    let mut marked = vec![false; count];
    for q in 0..n {
        let b = block[q];
        marked[b] = d.is_marked(q);
        delta[b] = d
            .successors(q)
            .iter()
            .map(|&(e, t)| (e, block[t]))
            .collect();
    }
    Automaton::from_parts(
        d.alphabet().clone(),
        None,
        block[d.initial()],
        marked,
        delta,
    )
    .renumber()
}

/// Boolean operation selector for [`combine`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Union,
    Intersection,
    Difference,
}

/// Set operation on marked languages; the result is trim and minimal.
pub fn combine(op: SetOp, a: &Automaton, b: &Automaton) -> Result<Automaton, AutomatonError> {
    if !a.alphabet().same_events(b.alphabet()) {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let da = determinize(a);
    let db = determinize(b);
    let k = da.alphabet().len();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = vec![(da.initial(), db.initial())];
    index.insert(pairs[0], 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let mut row = Vec::with_capacity(k);
        for e in 0..k {
            let next = (
                da.step(p, e).expect("complete"),
                db.step(q, e).expect("complete"),
            );
            let id = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                pairs.len() - 1
            });
            row.push((e, id));
        }
        delta.push(row);
        i += 1;
    }
    let marked = pairs
        .iter()
        .map(|&(p, q)| {
            let (x, y) = (da.is_marked(p), db.is_marked(q));
            match op {
                SetOp::Union => x || y,
                SetOp::Intersection => x && y,
                SetOp::Difference => x && !y,
            }
        })
        .collect();
    let product = Automaton::from_parts(a.alphabet().clone(), None, 0, marked, delta);
    Ok(minimize(&trim(&product)))
}

/// `Σ* \ L_m(a)` over the input alphabet; trim and minimal.
pub fn complement(a: &Automaton) -> Automaton {
    let d = determinize(a);
    let marked = d.marked().iter().map(|m| !m).collect();
    let flipped = Automaton::from_parts(
        d.alphabet().clone(),
        None,
        d.initial(),
        marked,
        d.delta().to_vec(),
    );
    minimize(&trim(&flipped))
}

/// `L_m(a) · Σ*`; trim and minimal.
pub fn concat_sigma_star(a: &Automaton) -> Automaton {
    let d = to_dfa(a);
    let k = d.alphabet().len();
    let universal = d.num_states();
    let mut delta: Vec<Vec<(usize, usize)>> = (0..universal)
        .map(|q| {
            if d.is_marked(q) {
                (0..k).map(|e| (e, universal)).collect()
            } else {
                d.successors(q).to_vec()
            }
        })
        .collect();
    delta.push((0..k).map(|e| (e, universal)).collect());
    let mut marked = d.marked().to_vec();
    marked.push(true);
    let built = Automaton::from_parts(d.alphabet().clone(), None, d.initial(), marked, delta);
    minimize(&trim(&built))
}

/// Marks every state that can reach a marked state, so the marked language
/// becomes the prefix closure of the input's.
pub fn prefix_closure(a: &Automaton) -> Automaton {
    let co = coaccessible_states(a);
    let closed = Automaton::from_parts(
        a.alphabet().clone(),
        Some(a.state_names().to_vec()),
        a.initial(),
        co,
        a.delta().to_vec(),
    );
    minimize(&closed)
}

/// Every reachable state can reach a marked state.
pub fn is_nonblocking(a: &Automaton) -> bool {
    let acc = reachable_states(a);
    let co = coaccessible_states(a);
    acc.iter().zip(&co).all(|(r, c)| !r || *c)
}

/// Whether some reachable state lies on a cycle.
pub fn has_cycle(a: &Automaton) -> bool {
    // 0 = unseen, 1 = on stack, 2 = done
    let mut color = vec![0u8; a.num_states()];
    let mut stack = vec![(a.initial(), 0usize)];
    color[a.initial()] = 1;
    while let Some(&mut (q, ref mut i)) = stack.last_mut() {
        if let Some(&(_, t)) = a.successors(q).get(*i) {
            *i += 1;
            match color[t] {
                0 => {
                    color[t] = 1;
                    stack.push((t, 0));
                }
                1 => return true,
                _ => {}
            }
        } else {
            color[q] = 2;
            stack.pop();
        }
    }
    false
}

/// Outcome of an inclusion test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inclusion {
    Included,
    /// Shortest (then lexicographically least) string in the left operand
    /// but not the right.
    Witness(Word),
}

impl Inclusion {
    pub fn holds(&self) -> bool {
        matches!(self, Inclusion::Included)
    }

    pub fn witness(&self) -> Option<&Word> {
        match self {
            Inclusion::Included => None,
            Inclusion::Witness(w) => Some(w),
        }
    }
}

/// Length-lex BFS over the product of two partial DFAs; returns the first
/// string whose end pair satisfies `bad`.
fn first_bad(a: &Automaton, b: &Automaton, bad: impl Fn(bool, bool) -> bool) -> Option<Word> {
    let k = a.alphabet().len();
    type Node = (Option<usize>, Option<usize>);
    let start: Node = (Some(a.initial()), Some(b.initial()));
    let mut parent: HashMap<Node, Option<(Node, usize)>> = HashMap::new();
    parent.insert(start, None);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        let ma = node.0.is_some_and(|p| a.is_marked(p));
        let mb = node.1.is_some_and(|q| b.is_marked(q));
        if bad(ma, mb) {
            let mut word = Vec::new();
            let mut cur = node;
            while let Some(Some((prev, e))) = parent.get(&cur) {
                word.push(*e);
                cur = *prev;
            }
            word.reverse();
            return Some(a.alphabet().decode(&word));
        }
        for e in 0..k {
            let next = (
                node.0.and_then(|p| a.step(p, e)),
                node.1.and_then(|q| b.step(q, e)),
            );
            if next == (None, None) || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, Some((node, e)));
            queue.push_back(next);
        }
    }
    None
}

/// Decides `L_m(a) ⊆ L_m(b)`, with a shortest witness on failure.
pub fn included(a: &Automaton, b: &Automaton) -> Result<Inclusion, AutomatonError> {
    if !a.alphabet().same_events(b.alphabet()) {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let ta = trim(&to_dfa(a));
    let tb = to_dfa(b);
    Ok(match first_bad(&ta, &tb, |x, y| x && !y) {
        None => Inclusion::Included,
        Some(w) => Inclusion::Witness(w),
    })
}

/// Shortest string in the symmetric difference of the marked languages.
pub fn equivalence_witness(a: &Automaton, b: &Automaton) -> Result<Option<Word>, AutomatonError> {
    if !a.alphabet().same_events(b.alphabet()) {
        return Err(AutomatonError::AlphabetMismatch);
    }
    let ta = trim(&to_dfa(a));
    let tb = trim(&to_dfa(b));
    Ok(first_bad(&ta, &tb, |x, y| x != y))
}

/// Decides `L_m(a) = L_m(b)`.
pub fn equivalent(a: &Automaton, b: &Automaton) -> Result<bool, AutomatonError> {
    Ok(equivalence_witness(a, b)?.is_none())
}

/// Finite slice of a marked language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageSample {
    /// Marked strings in length-lexicographic order.
    pub strings: Vec<Word>,
    pub depth: usize,
}

impl LanguageSample {
    pub fn contains(&self, w: &[EventId]) -> bool {
        self.strings.iter().any(|s| s.as_slice() == w)
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }
}

/// All marked strings of length at most `depth`, length-lex ordered.
pub fn enumerate(a: &Automaton, depth: usize) -> LanguageSample {
    let d = trim(&to_dfa(a));
    let mut strings = Vec::new();
    let mut frontier: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), d.initial())];
    for level in 0..=depth {
        for (w, q) in &frontier {
            if d.is_marked(*q) {
                strings.push(d.alphabet().decode(w));
            }
        }
        if level == depth {
            break;
        }
        let mut next = Vec::new();
        for (w, q) in &frontier {
            for &(e, t) in d.successors(*q) {
                let mut w2 = w.clone();
                w2.push(e);
                next.push((w2, t));
            }
        }
        frontier = next;
    }
    LanguageSample { strings, depth }
}

/// `w ∈ L_m(a)`; strings using foreign events are rejected.
pub fn member(a: &Automaton, w: &[EventId]) -> bool {
    let Some(code) = a.alphabet().encode(w) else {
        return false;
    };
    let mut current = vec![false; a.num_states()];
    current[a.initial()] = true;
    for e in code {
        let mut next = vec![false; a.num_states()];
        for q in (0..a.num_states()).filter(|&q| current[q]) {
            for t in a.targets(q, e) {
                next[t] = true;
            }
        }
        current = next;
    }
    (0..a.num_states()).any(|q| current[q] && a.is_marked(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{chars, EventFlags};

    fn abc() -> Alphabet {
        Alphabet::uniform(["a", "b", "c"], EventFlags::default())
    }

    fn lang(words: &[&str]) -> Automaton {
        let ws: Vec<Word> = words.iter().map(|w| chars(w)).collect();
        Automaton::from_words(abc(), &ws, false).unwrap()
    }

    fn strings(a: &Automaton, depth: usize) -> Vec<String> {
        enumerate(a, depth)
            .strings
            .iter()
            .map(|w| w.iter().map(|e| e.as_str()).collect())
            .collect()
    }

    #[test]
    fn example_languages_enumerate_in_length_lex_order() {
        let l = lang(&["", "a", "b", "c", "ba", "ac", "bac"]);
        assert_eq!(strings(&l, 3), ["", "a", "b", "c", "ac", "ba", "bac"]);
        assert!(member(&l, &chars("bac")));
        assert!(!member(&l, &chars("ab")));
    }

    #[test]
    fn difference_isolates_bac() {
        let l = lang(&["", "a", "b", "c", "ba", "ac", "bac"]);
        let m = lang(&["", "a", "b", "c", "ba", "ac"]);
        let d = combine(SetOp::Difference, &l, &m).unwrap();
        assert_eq!(strings(&d, 6), ["bac"]);
        let empty = combine(SetOp::Difference, &l, &l).unwrap();
        assert!(enumerate(&empty, 6).is_empty());
        assert_eq!(empty.num_states(), 1);
    }

    #[test]
    fn complement_of_epsilon_a() {
        let alpha = Alphabet::uniform(["a"], EventFlags::default());
        let a = Automaton::from_words(alpha.clone(), &[vec![], chars("a")], false).unwrap();
        assert_eq!(strings(&complement(&a), 5), ["aa", "aaa", "aaaa", "aaaaa"]);
        let univ = complement(&Automaton::empty(alpha.clone()));
        assert!(equivalent(&univ, &Automaton::universal(alpha.clone())).unwrap());
        assert!(enumerate(&complement(&univ), 4).is_empty());
    }

    #[test]
    fn concat_and_closure() {
        let bac = lang(&["bac"]);
        let ext = concat_sigma_star(&bac);
        assert!(member(&ext, &chars("bac")));
        assert!(member(&ext, &chars("bacca")));
        assert!(!member(&ext, &chars("ba")));
        assert_eq!(strings(&prefix_closure(&bac), 4), ["", "b", "ba", "bac"]);
        assert_eq!(
            strings(&prefix_closure(&lang(&["ac", "b"])), 4),
            ["", "a", "b", "ac"]
        );
        let eps = concat_sigma_star(&Automaton::epsilon(abc()));
        assert!(equivalent(&eps, &Automaton::universal(abc())).unwrap());
    }

    #[test]
    fn inclusion_witness_is_shortest() {
        let small = lang(&["", "a", "b", "ba"]);
        let big = lang(&["", "a", "b", "c", "ba"]);
        assert!(included(&small, &big).unwrap().holds());
        assert_eq!(
            included(&big, &small).unwrap(),
            Inclusion::Witness(chars("c"))
        );
        assert_eq!(equivalence_witness(&small, &big).unwrap(), Some(chars("c")));
    }

    #[test]
    fn determinize_nfa_for_a_or_aa() {
        let alpha = Alphabet::uniform(["a"], EventFlags::default());
        let nfa = Automaton::from_parts(
            alpha,
            None,
            0,
            vec![false, true, false, true],
            vec![vec![(0, 1), (0, 2)], vec![], vec![(0, 3)], vec![]],
        );
        assert!(!nfa.is_deterministic());
        let d = determinize(&nfa);
        assert!(d.is_deterministic());
        assert!(d.delta().iter().all(|row| row.len() == 1));
        assert_eq!(strings(&d, 4), ["a", "aa"]);
    }

    #[test]
    fn nonblocking_detects_dead_end() {
        let alpha = Alphabet::uniform(["a"], EventFlags::default());
        let a = Automaton::from_parts(
            alpha,
            None,
            0,
            vec![true, false],
            vec![vec![(0, 1)], vec![]],
        );
        assert!(!is_nonblocking(&a));
        assert!(is_nonblocking(&a.mark_all()));
    }

    #[test]
    fn minimize_keeps_generated_language() {
        // a·b where the b-state is a dead end: generated {ε,a,ab}, marked {ε}.
        let alpha = Alphabet::uniform(["a", "b"], EventFlags::default());
        let a = Automaton::from_parts(
            alpha,
            None,
            0,
            vec![true, false, false, false],
            vec![vec![(0, 1)], vec![(1, 2)], vec![], vec![(0, 0)]],
        );
        let m = minimize(&a);
        assert_eq!(m.num_states(), 3);
        assert!(equivalent(&m.mark_all(), &a.mark_all()).unwrap());
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let other = Automaton::universal(Alphabet::uniform(["a"], EventFlags::default()));
        assert_eq!(
            combine(SetOp::Union, &lang(&["a"]), &other).unwrap_err(),
            AutomatonError::AlphabetMismatch
        );
        assert!(included(&lang(&["a"]), &other).is_err());
    }
}
