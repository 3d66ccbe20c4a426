//! Natural projections, synchronous composition, and the observer and local
//! control consistency properties of abstractions.
//!
//! A [`ProjectionContext`] fixes the global alphabet `Σ` together with its
//! observable (`Σo`), high-level (`Σhi`) and controllable (`Σc`) subsets.
//! It induces four projections:
//!
//! | map   | domain | codomain     |
//! |-------|--------|--------------|
//! | `P`   | `Σ`    | `Σo`         |
//! | `Q`   | `Σ`    | `Σhi`        |
//! | `Phi` | `Σhi`  | `Σhi ∩ Σo`   |
//! | `Qo`  | `Σo`   | `Σhi ∩ Σo`   |
//!
//! and `Phi ∘ Q = Qo ∘ P`.

use crate::automaton::{
    accessible, is_nonblocking, minimize, relabel_determinize, to_dfa, trim, Alphabet, Automaton,
    EventFlags, EventId, Inclusion, Word,
};
use crate::{Error, Outcome, Result};
use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};

/// Event alphabet with observation, abstraction and control attributes.
///
/// The sets are carried as the flags of `sigma`, so they can never disagree
/// with one another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionContext {
    sigma: Alphabet,
}

/// One of the four projections of a context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Map {
    P,
    Q,
    PHi,
    QO,
}

impl Map {
    fn name(self) -> &'static str {
        match self {
            Map::P => "P",
            Map::Q => "Q",
            Map::PHi => "P_hi",
            Map::QO => "Q_o",
        }
    }
}

impl ProjectionContext {
    /// Context whose sets are read off the event flags.
    pub fn new(sigma: Alphabet) -> Self {
        ProjectionContext { sigma }
    }

    /// Context from explicit name lists (all names must belong to `events`).
    pub fn from_names(
        events: &[&str],
        observable: &[&str],
        highlevel: &[&str],
        controllable: &[&str],
    ) -> Result<Self> {
        let sigma = Alphabet::uniform(events.iter().copied(), EventFlags::default());
        let set = |names: &[&str]| -> BTreeSet<EventId> {
            names.iter().map(|n| crate::automaton::ev(n)).collect()
        };
        ProjectionContext::new(sigma)
            .with_observable(&set(observable))?
            .with_highlevel(&set(highlevel))?
            .with_controllable(&set(controllable))
    }

    fn override_flag(
        &self,
        set: &BTreeSet<EventId>,
        apply: impl Fn(&mut EventFlags, bool),
    ) -> Result<Self> {
        if let Some(e) = set.iter().find(|e| !self.sigma.contains(e)) {
            return Err(Error::NotInContext(e.clone()));
        }
        let mut sigma = self.sigma.clone();
        for (e, mut f) in self.sigma.iter() {
            apply(&mut f, set.contains(e));
            sigma.set_flags(e, f);
        }
        Ok(ProjectionContext { sigma })
    }

    pub fn with_observable(&self, set: &BTreeSet<EventId>) -> Result<Self> {
        self.override_flag(set, |f, v| f.observable = v)
    }

    pub fn with_highlevel(&self, set: &BTreeSet<EventId>) -> Result<Self> {
        self.override_flag(set, |f, v| f.highlevel = v)
    }

    pub fn with_controllable(&self, set: &BTreeSet<EventId>) -> Result<Self> {
        self.override_flag(set, |f, v| f.controllable = v)
    }

    pub fn sigma(&self) -> &Alphabet {
        &self.sigma
    }

    pub fn events(&self) -> BTreeSet<EventId> {
        self.sigma.event_set()
    }

    pub fn observable(&self) -> BTreeSet<EventId> {
        self.sigma.observable()
    }

    pub fn highlevel(&self) -> BTreeSet<EventId> {
        self.sigma.highlevel()
    }

    pub fn controllable(&self) -> BTreeSet<EventId> {
        self.sigma.controllable()
    }

    pub fn uncontrollable(&self) -> BTreeSet<EventId> {
        self.sigma.uncontrollable()
    }

    /// `Σhi ∩ Σo`.
    pub fn highlevel_observable(&self) -> BTreeSet<EventId> {
        self.sigma.select(|f| f.highlevel && f.observable)
    }

    fn flags_of(&self, e: &EventId) -> Result<EventFlags> {
        self.sigma
            .flags(e)
            .ok_or_else(|| Error::NotInContext(e.clone()))
    }

    pub fn is_observable(&self, e: &EventId) -> Result<bool> {
        Ok(self.flags_of(e)?.observable)
    }

    pub fn is_highlevel(&self, e: &EventId) -> Result<bool> {
        Ok(self.flags_of(e)?.highlevel)
    }

    pub fn is_controllable(&self, e: &EventId) -> Result<bool> {
        Ok(self.flags_of(e)?.controllable)
    }

    /// The sub-alphabet of `Σ` given by a set (flags kept).
    pub fn alphabet_of(&self, set: &BTreeSet<EventId>) -> Alphabet {
        self.sigma.restrict(set)
    }

    /// The context restricted to the high-level alphabet, as used for the
    /// abstraction: `P` of the result is `Phi` of `self`.
    pub fn high_context(&self) -> ProjectionContext {
        ProjectionContext::new(self.sigma.restrict(&self.highlevel()))
    }

    /// Checks that every event of `alphabet` is known to the context.
    pub fn covers(&self, alphabet: &Alphabet) -> Result<()> {
        match alphabet.events().iter().find(|e| !self.sigma.contains(e)) {
            Some(e) => Err(Error::NotInContext(e.clone())),
            None => Ok(()),
        }
    }

    /// Per-event mask for `alphabet` selecting the events with the given flag.
    pub(crate) fn mask(
        &self,
        alphabet: &Alphabet,
        pick: impl Fn(EventFlags) -> bool,
    ) -> Result<Vec<bool>> {
        alphabet
            .events()
            .iter()
            .map(|e| self.flags_of(e).map(&pick))
            .collect()
    }

    fn domain_and_codomain(&self, map: Map) -> (BTreeSet<EventId>, BTreeSet<EventId>) {
        match map {
            Map::P => (self.events(), self.observable()),
            Map::Q => (self.events(), self.highlevel()),
            Map::PHi => (self.highlevel(), self.highlevel_observable()),
            Map::QO => (self.observable(), self.highlevel_observable()),
        }
    }
}

/// Applies one of the context's projections to a string.
pub fn project_string(ctx: &ProjectionContext, map: Map, s: &[EventId]) -> Result<Word> {
    let (domain, codomain) = ctx.domain_and_codomain(map);
    let mut out = Vec::new();
    for e in s {
        if !domain.contains(e) {
            return Err(Error::DomainViolation {
                event: e.clone(),
                map: map.name(),
            });
        }
        if codomain.contains(e) {
            out.push(e.clone());
        }
    }
    Ok(out)
}

/// Natural projection of an automaton onto `target`: generated and marked
/// languages are projected, the result is a minimal DFA over `a`'s events in
/// `target`.
pub fn project(a: &Automaton, target: &BTreeSet<EventId>) -> Automaton {
    let out = a.alphabet().restrict(target);
    let label: Vec<Option<usize>> = a
        .alphabet()
        .events()
        .iter()
        .map(|e| out.index_of(e))
        .collect();
    minimize(&relabel_determinize(a, out, &label))
}

/// Inverse projection onto a larger alphabet: self-loops on the new events
/// at every state.
pub fn inverse_project(a: &Automaton, superset: &Alphabet) -> Result<Automaton> {
    let lifted = a.with_alphabet(superset)?;
    let fresh: Vec<usize> = (0..superset.len())
        .filter(|&i| !a.alphabet().contains(superset.event(i)))
        .collect();
    if fresh.is_empty() {
        return Ok(lifted);
    }
    let delta = (0..lifted.num_states())
        .map(|q| {
            let mut row = lifted.successors(q).to_vec();
            row.extend(fresh.iter().map(|&e| (e, q)));
            row
        })
        .collect();
    Ok(Automaton::from_parts(
        superset.clone(),
        Some(lifted.state_names().to_vec()),
        lifted.initial(),
        lifted.marked().to_vec(),
        delta,
    ))
}

/// Synchronous composition. Events shared by several operands must be taken
/// jointly; the others interleave. The alphabet is the union of the
/// operands' alphabets, each event keeping the flags of the first operand
/// declaring it. States that cannot reach a marked state are kept, so the
/// generated language is composed as well.
pub fn parallel(operands: &[&Automaton]) -> Result<Automaton> {
    let Some(first) = operands.first() else {
        return Err(Error::NoOperands);
    };
    if operands.len() == 1 {
        return Ok((*first).clone());
    }
    let dfas: Vec<Automaton> = operands.iter().map(|a| to_dfa(a)).collect();
    let alphabet = operands
        .iter()
        .skip(1)
        .fold(first.alphabet().clone(), |acc, a| acc.union(a.alphabet()));
    // local[i][e] = index of global event e in operand i
    let local: Vec<Vec<Option<usize>>> = dfas
        .iter()
        .map(|d| {
            alphabet
                .events()
                .iter()
                .map(|e| d.alphabet().index_of(e))
                .collect()
        })
        .collect();
    let start: Vec<usize> = dfas.iter().map(Automaton::initial).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    index.insert(start.clone(), 0);
    let mut tuples = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < tuples.len() {
        let mut row = Vec::new();
        'events: for e in 0..alphabet.len() {
            let mut next = tuples[i].clone();
            for (k, (d, map)) in dfas.iter().zip(&local).enumerate() {
                if let Some(le) = map[e] {
                    match d.step(next[k], le) {
                        Some(t) => next[k] = t,
                        None => continue 'events,
                    }
                }
            }
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    index.insert(next.clone(), tuples.len());
                    tuples.push(next);
                    tuples.len() - 1
                }
            };
            row.push((e, id));
        }
        delta.push(row);
        i += 1;
    }
    let marked = tuples
        .iter()
        .map(|t| t.iter().zip(&dfas).all(|(&q, d)| d.is_marked(q)))
        .collect();
    Ok(Automaton::from_parts(alphabet, None, 0, marked, delta))
}

/// Whether the closure of the composed marked languages equals the
/// composition of their closures.
pub fn nonconflicting(operands: &[&Automaton]) -> Result<bool> {
    let trimmed: Vec<Automaton> = operands.iter().map(|a| trim(a)).collect();
    let refs: Vec<&Automaton> = trimmed.iter().collect();
    Ok(is_nonblocking(&parallel(&refs)?))
}

/// Violation of the observer property: `Q(s)` is a prefix of `t ∈ Q(L_m)`,
/// but no continuation of `s` in `L_m` projects to `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObserverViolation {
    pub s: Word,
    pub t: Word,
}

/// Violation of local control consistency: after `s`, the uncontrollable
/// high-level `event` is reachable by low-level strings but not by
/// uncontrollable low-level strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LccViolation {
    pub s: Word,
    pub event: EventId,
}

/// Decides whether `Q` is an `L_m(g)`-observer. The counterexample
/// minimizes `|s| + |t|`, then `s`, then `t` lexicographically.
pub fn check_observer(
    g: &Automaton,
    ctx: &ProjectionContext,
) -> Result<Outcome<ObserverViolation>> {
    ctx.covers(g.alphabet())?;
    if !is_nonblocking(g) {
        return Err(Error::BlockingPlant);
    }
    let d = accessible(&to_dfa(g));
    let hi_set = ctx.highlevel();
    let high = ctx.mask(d.alphabet(), |f| f.highlevel)?;
    let g_hi = project(&d, &hi_set);
    let hi_index: Vec<Option<usize>> = d
        .alphabet()
        .events()
        .iter()
        .map(|e| g_hi.alphabet().index_of(e))
        .collect();

    // Dijkstra over (x, y) with key (|s| + |Q(s)|, s).
    type Node = (usize, usize);
    let start: Node = (d.initial(), g_hi.initial());
    let mut best: HashMap<Node, (usize, Vec<usize>)> = HashMap::new();
    let mut heap = BinaryHeap::from([Reverse((0usize, Vec::<usize>::new(), start))]);
    let mut projected: HashMap<usize, Automaton> = HashMap::new();
    let mut worst: Option<(usize, Word, Word)> = None;
    while let Some(Reverse((cost, s, node))) = heap.pop() {
        if best.contains_key(&node) {
            continue;
        }
        best.insert(node, (cost, s.clone()));
        if worst.as_ref().is_some_and(|w| w.0 <= cost) {
            continue;
        }
        let (x, y) = node;
        let qx = projected
            .entry(x)
            .or_insert_with(|| project(&d.rooted(x), &hi_set));
        if let Inclusion::Witness(v) = crate::automaton::included(&g_hi.rooted(y), qx)? {
            let total = cost + v.len();
            let s_word = d.alphabet().decode(&s);
            let mut t = project_string(ctx, Map::Q, &s_word)?;
            t.extend(v);
            let candidate = (total, s_word, t);
            if worst.as_ref().is_none_or(|w| candidate < *w) {
                worst = Some(candidate);
            }
        }
        for &(e, x2) in d.successors(x) {
            let (y2, step_cost) = if high[e] {
                let he = hi_index[e].expect("high-level event in abstraction");
                (g_hi.step(y, he).expect("abstraction generates Q(L)"), 2)
            } else {
                (y, 1)
            };
            if !best.contains_key(&(x2, y2)) {
                let mut s2 = s.clone();
                s2.push(e);
                heap.push(Reverse((cost + step_cost, s2, (x2, y2))));
            }
        }
    }
    Ok(match worst {
        None => Outcome::Holds,
        Some((_, s, t)) => Outcome::Fails(ObserverViolation { s, t }),
    })
}

/// States reachable from `x` using only events allowed by `allow`, with the
/// breadth-first parent links needed to rebuild paths.
fn local_reach(d: &Automaton, x: usize, allow: &[bool]) -> HashMap<usize, Option<(usize, usize)>> {
    let mut parent = HashMap::from([(x, None)]);
    let mut queue = VecDeque::from([x]);
    while let Some(q) = queue.pop_front() {
        for &(e, t) in d.successors(q) {
            if allow[e] && !parent.contains_key(&t) {
                parent.insert(t, Some((q, e)));
                queue.push_back(t);
            }
        }
    }
    parent
}

/// Breadth-first access words (length-lex minimal) of the states of a DFA,
/// in discovery order.
pub(crate) fn access_words(d: &Automaton) -> Vec<(usize, Vec<usize>)> {
    let mut seen = vec![false; d.num_states()];
    seen[d.initial()] = true;
    let mut out = vec![(d.initial(), Vec::new())];
    let mut i = 0;
    while i < out.len() {
        let (q, w) = out[i].clone();
        for &(e, t) in d.successors(q) {
            if !seen[t] {
                seen[t] = true;
                let mut w2 = w.clone();
                w2.push(e);
                out.push((t, w2));
            }
        }
        i += 1;
    }
    out
}

struct LccFailure {
    state: usize,
    access: Vec<usize>,
    event: usize,
}

fn find_lcc_failure(d: &Automaton, ctx: &ProjectionContext) -> Result<Option<LccFailure>> {
    let low = ctx.mask(d.alphabet(), |f| !f.highlevel)?;
    let low_uc = ctx.mask(d.alphabet(), |f| !f.highlevel && !f.controllable)?;
    let targets: Vec<usize> = ctx
        .mask(d.alphabet(), |f| f.highlevel && !f.controllable)?
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(e, _)| e)
        .collect();
    if targets.is_empty() {
        return Ok(None);
    }
    for (x, access) in access_words(d) {
        let by_low = local_reach(d, x, &low);
        let by_uc = local_reach(d, x, &low_uc);
        for &e in &targets {
            let enabled = |set: &HashMap<usize, _>| set.keys().any(|&q| d.step(q, e).is_some());
            if enabled(&by_low) && !enabled(&by_uc) {
                return Ok(Some(LccFailure {
                    state: x,
                    access,
                    event: e,
                }));
            }
        }
    }
    Ok(None)
}

/// Decides local control consistency of `Q` for `L(g)`. The counterexample
/// has the shortest (then lexicographically least) `s`.
pub fn check_lcc(g: &Automaton, ctx: &ProjectionContext) -> Result<Outcome<LccViolation>> {
    ctx.covers(g.alphabet())?;
    let d = accessible(&to_dfa(g));
    Ok(match find_lcc_failure(&d, ctx)? {
        None => Outcome::Holds,
        Some(f) => Outcome::Fails(LccViolation {
            s: d.alphabet().decode(&f.access),
            event: d.alphabet().event(f.event).clone(),
        }),
    })
}

/// Grows `seed` until the induced projection is an `L_m(g)`-observer and
/// locally control consistent. Each failed check adds one event chosen from
/// its counterexample:
///
/// - observer: the least low-level event of `s`, else the least low-level
///   event reachable after `s`;
/// - LCC: the first controllable event on the shortest low-level path from
///   the state after `s` to one enabling the offending event.
///
/// If neither rule applies, the least event outside the current set is added.
pub fn extend_observer_lcc(
    g: &Automaton,
    ctx: &ProjectionContext,
    seed: &BTreeSet<EventId>,
) -> Result<BTreeSet<EventId>> {
    let mut out = seed.clone();
    out.extend(extension_order(g, ctx, seed)?);
    Ok(out)
}

/// The events added by [`extend_observer_lcc`], in the order they were added.
pub fn extension_order(
    g: &Automaton,
    ctx: &ProjectionContext,
    seed: &BTreeSet<EventId>,
) -> Result<Vec<EventId>> {
    ctx.covers(g.alphabet())?;
    let mut added = Vec::new();
    let d = accessible(&to_dfa(g));
    let mut current: BTreeSet<EventId> = seed.clone();
    loop {
        let c = ctx.with_highlevel(&current)?;
        let low = c.mask(d.alphabet(), |f| !f.highlevel)?;
        let pick = match check_observer(&d, &c)? {
            Outcome::Fails(v) => {
                let in_s = v.s.iter().filter(|e| !current.contains(*e)).min().cloned();
                in_s.or_else(|| {
                    let code = d.alphabet().encode(&v.s)?;
                    let x = d.run(&code)?;
                    let reach = local_reach(&d, x, &vec![true; d.alphabet().len()]);
                    reach
                        .keys()
                        .flat_map(|&q| d.successors(q).iter().map(|&(e, _)| e))
                        .filter(|&e| low[e])
                        .min()
                        .map(|e| d.alphabet().event(e).clone())
                })
            }
            Outcome::Holds => match find_lcc_failure(&d, &c)? {
                None => return Ok(added),
                Some(f) => {
                    let parent = local_reach(&d, f.state, &low);
                    let mut end = parent
                        .keys()
                        .copied()
                        .filter(|&q| d.step(q, f.event).is_some())
                        .min_by_key(|q| path_len(&parent, *q));
                    let mut path = Vec::new();
                    while let Some(q) = end {
                        match parent[&q] {
                            Some((p, e)) => {
                                path.push(e);
                                end = Some(p);
                            }
                            None => end = None,
                        }
                    }
                    path.reverse();
                    let ctrl = c.mask(d.alphabet(), |fl| fl.controllable)?;
                    path.into_iter()
                        .find(|&e| ctrl[e])
                        .map(|e| d.alphabet().event(e).clone())
                }
            },
        };
        let next = pick.or_else(|| {
            d.alphabet()
                .events()
                .iter()
                .find(|e| !current.contains(*e))
                .cloned()
        });
        match next {
            Some(e) => {
                current.insert(e.clone());
                added.push(e);
            }
            None => return Ok(added),
        }
    }
}

fn path_len(parent: &HashMap<usize, Option<(usize, usize)>>, mut q: usize) -> usize {
    let mut n = 0;
    while let Some(Some((p, _))) = parent.get(&q) {
        q = *p;
        n += 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{chars, enumerate, equivalent, ev, member};

    fn moc_gap() -> (Automaton, ProjectionContext) {
        let ctx =
            ProjectionContext::from_names(&["a", "b", "c"], &["a", "c"], &["b", "c"], &[]).unwrap();
        let words: Vec<Word> = ["", "a", "b", "c", "ba", "ac", "bac"]
            .iter()
            .map(|w| chars(w))
            .collect();
        let l = Automaton::from_words(ctx.sigma().clone(), &words, false).unwrap();
        (l, ctx)
    }

    fn set(names: &[&str]) -> BTreeSet<EventId> {
        names.iter().map(|n| ev(n)).collect()
    }

    #[test]
    fn string_projections() {
        let (_, ctx) = moc_gap();
        assert_eq!(
            project_string(&ctx, Map::Q, &chars("bac")).unwrap(),
            chars("bc")
        );
        assert_eq!(
            project_string(&ctx, Map::P, &[]).unwrap(),
            Vec::<EventId>::new()
        );
        let q = project_string(&ctx, Map::Q, &chars("c")).unwrap();
        assert_eq!(project_string(&ctx, Map::PHi, &q).unwrap(), chars("c"));
        assert_eq!(
            project_string(&ctx, Map::PHi, &chars("bc")).unwrap(),
            chars("c")
        );
        assert!(matches!(
            project_string(&ctx, Map::PHi, &chars("a")),
            Err(Error::DomainViolation { .. })
        ));
    }

    #[test]
    fn projection_of_example_language() {
        let (l, ctx) = moc_gap();
        let q = project(&l, &ctx.highlevel());
        let got: Vec<Word> = enumerate(&q, 4).strings;
        assert_eq!(got, vec![vec![], chars("b"), chars("c"), chars("bc")]);
    }

    #[test]
    fn inverse_projection_intersected_with_plant() {
        let (l, ctx) = moc_gap();
        let hi = ctx.alphabet_of(&ctx.highlevel());
        let eb = Automaton::from_words(hi.clone(), &[vec![], chars("b")], false).unwrap();
        let lifted = inverse_project(&eb, ctx.sigma()).unwrap();
        let both = parallel(&[&lifted, &l]).unwrap();
        let got = enumerate(&both, 4).strings;
        assert_eq!(got, vec![vec![], chars("a"), chars("b"), chars("ba")]);

        let c = Automaton::from_words(ctx.alphabet_of(&set(&["c"])), &[chars("c")], false).unwrap();
        let phi_inv = inverse_project(&c, &hi).unwrap();
        assert!(member(&phi_inv, &chars("bbcb")));
        assert!(!member(&phi_inv, &chars("bcc")));
    }

    #[test]
    fn conflict_between_ab_and_ac() {
        let alpha = Alphabet::uniform(["a", "b", "c"], EventFlags::default());
        let ab = Automaton::from_words(alpha.clone(), &[chars("ab")], false).unwrap();
        let ac = Automaton::from_words(alpha, &[chars("ac")], false).unwrap();
        assert!(!nonconflicting(&[&ab, &ac]).unwrap());
        assert!(nonconflicting(&[&ab]).unwrap());
        assert!(nonconflicting(&[&ab.mark_all(), &ac.mark_all()]).unwrap());
    }

    #[test]
    fn observer_counterexample_for_ab_c() {
        let ctx = ProjectionContext::from_names(&["a", "b", "c"], &[], &["b", "c"], &[]).unwrap();
        let g =
            Automaton::from_words(ctx.sigma().clone(), &[chars("ab"), chars("c")], false).unwrap();
        let v = check_observer(&g, &ctx).unwrap();
        assert_eq!(
            v,
            Outcome::Fails(ObserverViolation {
                s: chars("a"),
                t: chars("c")
            })
        );
        let full = ctx.with_highlevel(&ctx.events()).unwrap();
        assert!(check_observer(&g, &full).unwrap().holds());
        let grown = extend_observer_lcc(&g, &ctx, &set(&["b", "c"])).unwrap();
        assert!(grown.contains(&ev("a")));
        let c2 = ctx.with_highlevel(&grown).unwrap();
        assert!(check_observer(&g, &c2).unwrap().holds());
    }

    #[test]
    fn observer_rejects_blocking_plant() {
        let alpha = Alphabet::uniform(["a"], EventFlags::default());
        let g = Automaton::from_words(alpha.clone(), &[vec![]], false).unwrap();
        let g = parallel(&[&g]).unwrap();
        let blocking = crate::automaton::Automaton::from_des(
            "events: a\nstates: 0 1\ninitial: 0\nmarked: 0\ntrans: 0 a 1\n",
        )
        .unwrap();
        let ctx = ProjectionContext::new(alpha);
        assert!(check_observer(&g, &ctx).unwrap().holds());
        assert_eq!(check_observer(&blocking, &ctx), Err(Error::BlockingPlant));
    }

    #[test]
    fn lcc_violation_through_controllable_low_event() {
        let ctx = ProjectionContext::from_names(&["a", "e"], &["a", "e"], &["e"], &["a"]).unwrap();
        let g = Automaton::from_words(ctx.sigma().clone(), &[chars("ae")], true).unwrap();
        assert_eq!(
            check_lcc(&g, &ctx).unwrap(),
            Outcome::Fails(LccViolation {
                s: vec![],
                event: ev("e")
            })
        );
        let all_c = ctx.with_controllable(&ctx.events()).unwrap();
        assert!(check_lcc(&g, &all_c).unwrap().holds());
        let flat = ctx.with_highlevel(&ctx.events()).unwrap();
        assert!(check_lcc(&g, &flat).unwrap().holds());
        let grown = extend_observer_lcc(&g, &ctx, &set(&["e"])).unwrap();
        assert_eq!(grown, set(&["a", "e"]));
    }

    #[test]
    fn projection_onto_full_alphabet_is_identity() {
        let (l, ctx) = moc_gap();
        assert!(equivalent(&project(&l, &ctx.events()), &l).unwrap());
    }
}
