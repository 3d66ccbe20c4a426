//! Instance generators and brute-force oracles.
//!
//! The oracles quantify literally over enumerated strings, so they are
//! exact for acyclic automata once the depth covers the longest string, and
//! otherwise only judge strings up to that depth.
//!
//! Random instances use ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, so a seed replays the same instance on every platform.

use crate::automaton::{
    enumerate, has_cycle, included, prefix_closure, to_dfa, trim, Alphabet, Automaton, EventFlags,
    EventId, Word,
};
use crate::projection::{project, project_string, Map, ProjectionContext};
use crate::relational::{Counterexample, Proof, Verdict};
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

fn ev(name: &str) -> EventId {
    EventId::new(name).expect("generated names are valid")
}

/// Builds the hardness gadget `B` for an NFA `a` whose states are all
/// marked, with
///
/// `L_m(B) = @#L(A') ∪ @(Σ'Σ)* ∪ #(Σ'Σ)* ∪ L(A')`
///
/// where `A'` replaces every transition `p -σ-> q` of `a` by
/// `p -σ'-> x -σ-> q` through a fresh event `σ' = σ'p'q`. The context has
/// `Σhi = Σ ∪ {#}` and `Σo = Σ ∪ {@}`. `L(B)` is MOC exactly when `a` is
/// universal.
pub fn pspace_gadget(a: &Automaton) -> Result<(Automaton, ProjectionContext)> {
    if let Some(q) = (0..a.num_states()).find(|&q| !a.is_marked(q)) {
        return Err(Error::UnmarkedState(a.state_name(q).to_string()));
    }
    let base = a.alphabet().events().to_vec();
    let fresh_of = |p: usize, e: usize, q: usize| ev(&format!("{}'{p}'{q}", base[e]));
    let at = ev("@");
    let hash = ev("#");

    let mut alphabet = Alphabet::new();
    let hi_obs = EventFlags {
        controllable: false,
        observable: true,
        highlevel: true,
    };
    for e in &base {
        alphabet.insert(e.clone(), hi_obs);
    }
    let mut fresh = Vec::new();
    for (p, e, q) in a.transitions() {
        let f = fresh_of(p, e, q);
        if alphabet.insert(f.clone(), EventFlags::default()) {
            fresh.push(f);
        }
    }
    if fresh.is_empty() {
        // without transitions Σ' would be empty and (Σ'Σ)* would collapse to {ε}
        let f = ev("'");
        alphabet.insert(f.clone(), EventFlags::default());
        fresh.push(f);
    }
    alphabet.insert(
        at.clone(),
        EventFlags {
            observable: true,
            ..EventFlags::default()
        },
    );
    alphabet.insert(
        hash.clone(),
        EventFlags {
            highlevel: true,
            ..EventFlags::default()
        },
    );
    let idx = |e: &EventId| alphabet.index_of(e).expect("declared");

    type Delta = Vec<Vec<(usize, usize)>>;
    let mut delta: Delta = Vec::new();
    let mut marked = Vec::new();
    let mut new_state = |m: bool, delta: &mut Delta| {
        delta.push(Vec::new());
        marked.push(m);
        delta.len() - 1
    };
    // one copy of A' per call; returns the copy of a's initial state
    let copy_of_a =
        |delta: &mut Delta, new_state: &mut dyn FnMut(bool, &mut Delta) -> usize| -> usize {
            let ids: Vec<usize> = (0..a.num_states())
                .map(|_| new_state(true, delta))
                .collect();
            for (p, e, q) in a.transitions() {
                let x = new_state(true, delta);
                delta[ids[p]].push((idx(&fresh_of(p, e, q)), x));
                delta[x].push((idx(&base[e]), ids[q]));
            }
            ids[a.initial()]
        };
    let root = new_state(true, &mut delta);
    let plain = copy_of_a(&mut delta, &mut new_state);
    let entry = delta[plain].clone();
    delta[root].extend(entry);

    let after_at = new_state(true, &mut delta);
    let after_hash = new_state(true, &mut delta);
    delta[root].push((idx(&at), after_at));
    delta[root].push((idx(&hash), after_hash));
    let nested = copy_of_a(&mut delta, &mut new_state);
    delta[after_at].push((idx(&hash), nested));
    // (Σ'Σ)* after either prefix; the loop returns to a hub without the # edge
    for entry in [after_at, after_hash] {
        let hub = if entry == after_at {
            new_state(true, &mut delta)
        } else {
            entry
        };
        let mid = new_state(false, &mut delta);
        for f in &fresh {
            delta[entry].push((idx(f), mid));
            delta[hub].push((idx(f), mid));
        }
        for e in &base {
            delta[mid].push((idx(e), hub));
        }
    }
    let b = Automaton::from_parts(alphabet.clone(), None, root, marked, delta).renumber();
    Ok((b, ProjectionContext::new(alphabet)))
}

/// Whether an NFA with all states marked accepts every string.
pub fn nfa_universal(a: &Automaton) -> Result<bool> {
    if let Some(q) = (0..a.num_states()).find(|&q| !a.is_marked(q)) {
        return Err(Error::UnmarkedState(a.state_name(q).to_string()));
    }
    Ok(included(&Automaton::universal(a.alphabet().clone()), a)?.holds())
}

/// Shortest (then least) string outside the language of `a`.
pub fn nfa_shortest_rejected(a: &Automaton) -> Option<Word> {
    included(&Automaton::universal(a.alphabet().clone()), a)
        .ok()?
        .witness()
        .cloned()
}

/// Trim DFA of the prefix closure of `L_m(l)`, and whether `depth` covers
/// every string of it.
fn closed_dfa(l: &Automaton, depth: usize) -> (Automaton, bool) {
    let d = to_dfa(&trim(&prefix_closure(l)));
    let complete = !has_cycle(&d)
        && enumerate(&d, depth + 1)
            .strings
            .iter()
            .all(|w| w.len() <= depth);
    (d, complete)
}

/// Reachable triples `(state, Q(s), P(s))` with `|s| ≤ max_len`,
/// `|Q(s)| ≤ max_q` and `|P(s)| ≤ max_p`, each with the length-lex least
/// string `s` reaching it. The triple set is finite even when the string
/// set is not, so witnesses of bounded projections are found exactly.
fn triples(
    d: &Automaton,
    ctx: &ProjectionContext,
    max_len: usize,
    max_q: usize,
    max_p: usize,
) -> Result<BTreeMap<(usize, Word, Word), Word>> {
    let hi = ctx.mask(d.alphabet(), |f| f.highlevel)?;
    let obs = ctx.mask(d.alphabet(), |f| f.observable)?;
    let start = (d.initial(), Vec::new(), Vec::new());
    let mut found = BTreeMap::from([(start.clone(), Vec::new())]);
    let mut queue = VecDeque::from([(start, Vec::new())]);
    while let Some(((q, tq, tp), s)) = queue.pop_front() {
        if s.len() >= max_len {
            continue;
        }
        for &(e, r) in d.successors(q) {
            let ev = d.alphabet().event(e);
            let mut nq = tq.clone();
            let mut np = tp.clone();
            if hi[e] {
                nq.push(ev.clone());
            }
            if obs[e] {
                np.push(ev.clone());
            }
            if nq.len() > max_q || np.len() > max_p {
                continue;
            }
            let key = (r, nq, np);
            if found.contains_key(&key) {
                continue;
            }
            let mut ns = s.clone();
            ns.push(ev.clone());
            found.insert(key.clone(), ns.clone());
            queue.push_back((key, ns));
        }
    }
    Ok(found)
}

/// `Q(L)` up to length `max_q`.
fn abstract_strings(d: &Automaton, hi: &[bool], max_q: usize) -> BTreeSet<Word> {
    let mut seen = BTreeSet::from([(d.initial(), Vec::new())]);
    let mut queue = VecDeque::from([(d.initial(), Vec::<EventId>::new())]);
    while let Some((q, t)) = queue.pop_front() {
        for &(e, r) in d.successors(q) {
            let mut t2 = t.clone();
            if hi[e] {
                if t.len() >= max_q {
                    continue;
                }
                t2.push(d.alphabet().event(e).clone());
            }
            if seen.insert((r, t2.clone())) {
                queue.push_back((r, t2));
            }
        }
    }
    seen.into_iter().map(|(_, t)| t).collect()
}

fn pass(complete: bool, depth: usize) -> Verdict {
    if complete {
        Verdict::Holds {
            by: Proof::ExhaustiveFinite,
        }
    } else {
        Verdict::BoundedPass { bound: depth }
    }
}

fn total_key(a: &Word, b: &Word) -> (usize, Word, Word) {
    (a.len() + b.len(), a.clone(), b.clone())
}

/// Observation consistency of the prefix closure of `L_m(l)` by literal
/// quantification: `t, t'` range over `Q(L)` up to length `depth`, and the
/// common observation of the witnesses over strings up to `2·depth`. The
/// counterexample `(t, t')` minimises `|t| + |t'|`, then `t`, then `t'`.
pub fn brute_oc(l: &Automaton, ctx: &ProjectionContext, depth: usize) -> Result<Verdict> {
    ctx.covers(l.alphabet())?;
    let (d, complete) = closed_dfa(l, depth);
    let mut views: BTreeMap<Word, BTreeSet<Word>> = BTreeMap::new();
    for (_, t, o) in triples(&d, ctx, usize::MAX, depth, 2 * depth)?.into_keys() {
        views.entry(t).or_default().insert(o);
    }
    let mut worst: Option<(usize, Word, Word)> = None;
    for (t, ot) in &views {
        let pt = project_string(ctx, Map::PHi, t)?;
        for (t2, ot2) in &views {
            if project_string(ctx, Map::PHi, t2)? != pt || !ot.is_disjoint(ot2) {
                continue;
            }
            let key = total_key(t, t2);
            if worst.as_ref().is_none_or(|w| key < *w) {
                worst = Some(key);
            }
        }
    }
    Ok(match worst {
        Some((_, t, t2)) => Verdict::violated(t, t2, None),
        None => pass(complete, depth),
    })
}

/// Modified observation consistency by literal quantification over
/// `|s| ≤ depth` and `|t'| ≤ depth`. The witness `s'` needs
/// `|Q(s')| = |t'|` and `|P(s')| = |P(s)|`, so its search is exact and every
/// reported violation is genuine. The counterexample `(s, t')` minimises
/// `|s| + |t'|`, then `s`, then `t'`.
pub fn brute_moc(l: &Automaton, ctx: &ProjectionContext, depth: usize) -> Result<Verdict> {
    ctx.covers(l.alphabet())?;
    let (d, complete) = closed_dfa(l, depth);
    let witnesses = triples(&d, ctx, usize::MAX, depth, depth)?;
    let seen: BTreeSet<(&Word, &Word)> = witnesses.keys().map(|(_, t, o)| (t, o)).collect();
    let mut high: BTreeMap<Word, BTreeSet<&Word>> = BTreeMap::new();
    for (_, t, _) in witnesses.keys() {
        high.entry(project_string(ctx, Map::PHi, t)?)
            .or_default()
            .insert(t);
    }
    let mut worst: Option<(usize, Word, Word)> = None;
    for ((_, t, o), s) in triples(&d, ctx, depth, usize::MAX, usize::MAX)? {
        let key = project_string(ctx, Map::PHi, &t)?;
        for &t2 in high.get(&key).into_iter().flatten() {
            if seen.contains(&(t2, &o)) {
                continue;
            }
            let k = total_key(&s, t2);
            if worst.as_ref().is_none_or(|w| k < *w) {
                worst = Some(k);
            }
        }
    }
    Ok(match worst {
        Some((_, s, t2)) => Verdict::violated(s, t2, None),
        None => pass(complete, depth),
    })
}

/// Local observation consistency by literal quantification over
/// `|s|, |s'| ≤ depth` and low-level tails with observations up to
/// `depth`. The counterexample `(s, s', e)` minimises `|s| + |s'|`, then
/// `s`, `s'` and `e`.
pub fn brute_loc(l: &Automaton, ctx: &ProjectionContext, depth: usize) -> Result<Verdict> {
    ctx.covers(l.alphabet())?;
    let (d, complete) = closed_dfa(l, depth);
    let hi = ctx.mask(d.alphabet(), |f| f.highlevel)?;
    let obs = ctx.mask(d.alphabet(), |f| f.observable)?;
    let ctrl = ctx.mask(d.alphabet(), |f| f.controllable)?;
    let targets: Vec<usize> = (0..d.alphabet().len())
        .filter(|&e| hi[e] && ctrl[e])
        .collect();
    let abstraction = abstract_strings(&d, &hi, depth + 1);
    // (state, e) ↦ { P(u) : u low-level from state, u·e enabled }
    let mut tails: BTreeMap<(usize, usize), BTreeSet<Word>> = BTreeMap::new();
    for q in 0..d.num_states() {
        let mut seen = BTreeSet::from([(q, Vec::new())]);
        let mut queue = VecDeque::from([(q, Vec::<EventId>::new())]);
        while let Some((r, p)) = queue.pop_front() {
            for &e in &targets {
                if d.step(r, e).is_some() {
                    tails.entry((q, e)).or_default().insert(p.clone());
                }
            }
            for &(e, r2) in d.successors(r) {
                if hi[e] {
                    continue;
                }
                let mut p2 = p.clone();
                if obs[e] {
                    if p.len() >= depth {
                        continue;
                    }
                    p2.push(d.alphabet().event(e).clone());
                }
                if seen.insert((r2, p2.clone())) {
                    queue.push_back((r2, p2));
                }
            }
        }
    }
    let mut by_obs: BTreeMap<Word, Vec<(usize, Word, Word)>> = BTreeMap::new();
    for ((q, t, o), s) in triples(&d, ctx, depth, usize::MAX, usize::MAX)? {
        by_obs.entry(o).or_default().push((q, t, s));
    }
    let empty = BTreeSet::new();
    let mut worst: Option<(usize, Word, Word, usize)> = None;
    for group in by_obs.values() {
        for (q, t, s) in group {
            for (q2, t2, s2) in group {
                for &e in &targets {
                    let ev = d.alphabet().event(e);
                    let ext = |t: &Word| {
                        let mut v = t.clone();
                        v.push(ev.clone());
                        abstraction.contains(&v)
                    };
                    if !ext(t) || !ext(t2) {
                        continue;
                    }
                    let a = tails.get(&(*q, e)).unwrap_or(&empty);
                    let b = tails.get(&(*q2, e)).unwrap_or(&empty);
                    if !a.is_disjoint(b) {
                        continue;
                    }
                    let key = (s.len() + s2.len(), s.clone(), s2.clone(), e);
                    if worst.as_ref().is_none_or(|w| key < *w) {
                        worst = Some(key);
                    }
                }
            }
        }
    }
    Ok(match worst {
        Some((_, s, s2, e)) => Verdict::Violated {
            counterexample: Counterexample {
                left: s,
                right: s2,
                event: Some(d.alphabet().event(e).clone()),
            },
        },
        None => pass(complete, depth),
    })
}

/// Whether `s, s' ∈ closure(L_m(l))` exist with `Q(s) = t`, `Q(s') = t'`
/// and `P(s) = P(s')`, considering observations up to length `max_obs`.
pub fn brute_oc_pair(
    l: &Automaton,
    ctx: &ProjectionContext,
    t: &[EventId],
    t2: &[EventId],
    max_obs: usize,
) -> Result<bool> {
    let (d, _) = closed_dfa(l, 0);
    let limit = t.len().max(t2.len());
    let mut left = BTreeSet::new();
    let mut right = BTreeSet::new();
    for (_, q, o) in triples(&d, ctx, usize::MAX, limit, max_obs)?.into_keys() {
        if q == t {
            left.insert(o.clone());
        }
        if q == t2 {
            right.insert(o);
        }
    }
    Ok(!left.is_disjoint(&right))
}

/// Whether some `s' ∈ closure(L_m(l))` has `Q(s') = t'` and `P(s') = P(s)`.
/// Exact.
pub fn brute_moc_pair(
    l: &Automaton,
    ctx: &ProjectionContext,
    s: &[EventId],
    t2: &[EventId],
) -> Result<bool> {
    let (d, _) = closed_dfa(l, 0);
    let obs = project_string(ctx, Map::P, s)?;
    Ok(triples(&d, ctx, usize::MAX, t2.len(), obs.len())?
        .keys()
        .any(|(_, q, o)| q == t2 && *o == obs))
}

/// Finite plant languages for the supremum oracles.
struct FinitePlant {
    generated: BTreeSet<Word>,
}

impl FinitePlant {
    fn new(g: &Automaton, depth: usize) -> Self {
        let generated = enumerate(&trim(&g.mark_all()), depth)
            .strings
            .into_iter()
            .collect();
        FinitePlant { generated }
    }
}

fn closure_of(s: &BTreeSet<Word>) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for w in s {
        for i in 0..=w.len() {
            out.insert(w[..i].to_vec());
        }
    }
    out
}

fn closure_normal(
    closed: &BTreeSet<Word>,
    plant: &FinitePlant,
    ctx: &ProjectionContext,
) -> Result<bool> {
    let mut seen = BTreeSet::new();
    for w in closed {
        seen.insert(project_string(ctx, Map::P, w)?);
    }
    for w in &plant.generated {
        if !closed.contains(w) && seen.contains(&project_string(ctx, Map::P, w)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn closure_controllable(
    closed: &BTreeSet<Word>,
    plant: &FinitePlant,
    uc: &BTreeSet<EventId>,
) -> bool {
    plant.generated.iter().all(|w| match w.split_last() {
        Some((e, s)) if uc.contains(e) && closed.contains(s) => closed.contains(w),
        _ => true,
    })
}

/// Which sublanguages [`brute_supremum`] admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupKind {
    Normal,
    Controllable,
    ControllableNormal,
}

/// Union of all `S ⊆ L_m(k)` whose closure is normal and/or controllable
/// with respect to `L(g)` (up to `depth`). Enumerates every subset, so
/// `L_m(k)` must have at most 16 strings; returns `None` otherwise.
pub fn brute_supremum(
    k: &Automaton,
    g: &Automaton,
    ctx: &ProjectionContext,
    kind: SupKind,
    depth: usize,
) -> Result<Option<BTreeSet<Word>>> {
    let strings = enumerate(k, depth).strings;
    if strings.len() > 16 {
        return Ok(None);
    }
    let plant = FinitePlant::new(g, depth);
    let uc = ctx.uncontrollable();
    let mut union = BTreeSet::new();
    for mask in 0u32..(1 << strings.len()) {
        let s: BTreeSet<Word> = (0..strings.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| strings[i].clone())
            .collect();
        if s.is_subset(&union) {
            continue;
        }
        let closed = closure_of(&s);
        let ok = match kind {
            SupKind::Normal => closure_normal(&closed, &plant, ctx)?,
            SupKind::Controllable => closure_controllable(&closed, &plant, &uc),
            SupKind::ControllableNormal => {
                closure_controllable(&closed, &plant, &uc) && closure_normal(&closed, &plant, ctx)?
            }
        };
        if ok {
            union.extend(s);
        }
    }
    Ok(Some(union))
}

/// Supremal normal sublanguage of `k` by brute force, as a set of strings.
pub fn brute_sup_normal(
    k: &Automaton,
    g: &Automaton,
    ctx: &ProjectionContext,
    depth: usize,
) -> Result<Option<BTreeSet<Word>>> {
    brute_supremum(k, g, ctx, SupKind::Normal, depth)
}

/// The two-train bridge example: `(west train, east train, specification,
/// context)`.
///
/// Each train announces its arrival (`a`), then either waits (`w`) or enters
/// the bridge (`e`) and later leaves (`l`). The requirement over the
/// high-level events says that while both trains are pending, one of them
/// has to wait before anyone may leave the bridge, which rules out both
/// trains being on the bridge at once; the waiting train is served next.
pub fn railroad_models() -> (Automaton, Automaton, Automaton, ProjectionContext) {
    let train = |s: &str| {
        Automaton::from_des(&format!(
            "events: a_{s} w_{s} e_{s} l_{s}\n\
             states: 0 1 2\n\
             initial: 0\n\
             marked: 0\n\
             trans: 0 a_{s} 1\n\
             trans: 1 w_{s} 0\n\
             trans: 1 e_{s} 2\n\
             trans: 2 l_{s} 0\n"
        ))
        .expect("well-formed")
    };
    let spec = Automaton::from_des(
        "events: a_w w_w l_w a_e w_e l_e\n\
         states: II PI IP PP\n\
         initial: II\n\
         marked: II\n\
         trans: II a_w PI\n\
         trans: II a_e IP\n\
         trans: PI w_w II\n\
         trans: PI l_w II\n\
         trans: PI a_e PP\n\
         trans: IP w_e II\n\
         trans: IP l_e II\n\
         trans: IP a_w PP\n\
         trans: PP w_w IP\n\
         trans: PP w_e PI\n",
    )
    .expect("well-formed");
    let all = ["a_w", "w_w", "e_w", "l_w", "a_e", "w_e", "e_e", "l_e"];
    let observable: Vec<&str> = all
        .iter()
        .copied()
        .filter(|e| !e.starts_with("l_"))
        .collect();
    let high: Vec<&str> = all
        .iter()
        .copied()
        .filter(|e| !e.starts_with("e_"))
        .collect();
    let ctx = ProjectionContext::from_names(&all, &observable, &high, &all).expect("consistent");
    let with_ctx = |a: Automaton| {
        let alphabet = ctx.sigma().restrict(&a.alphabet().event_set());
        a.with_flags(&alphabet).expect("same events")
    };
    (
        with_ctx(train("w")),
        with_ctx(train("e")),
        with_ctx(spec),
        ctx,
    )
}

/// Shape of the instances produced by [`random_instance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// `Σo ⊆ Σhi` or `Σhi ⊆ Σo`.
    MocByConstruction,
    Unconstrained,
    /// At most 12 states and strings of length at most 6.
    AcyclicSmall,
}

/// A plant, a high-level specification `K ⊆ Q(L_m(G))` (prefix-closed) and
/// a context.
#[derive(Clone, Debug)]
pub struct Instance {
    pub plant: Automaton,
    pub spec: Automaton,
    pub ctx: ProjectionContext,
}

const NAMES: [&str; 5] = ["a", "b", "c", "d", "f"];

fn random_flags(rng: &mut ChaCha8Rng, n: usize, profile: Profile) -> Vec<EventFlags> {
    let mut flags: Vec<EventFlags> = (0..n)
        .map(|_| EventFlags {
            controllable: rng.gen_bool(0.6),
            observable: rng.gen_bool(0.6),
            highlevel: rng.gen_bool(0.6),
        })
        .collect();
    if profile == Profile::MocByConstruction {
        let obs_in_hi = rng.gen_bool(0.5);
        for f in &mut flags {
            if obs_in_hi && f.observable {
                f.highlevel = true;
            }
            if !obs_in_hi && f.highlevel {
                f.observable = true;
            }
        }
    }
    flags
}

/// Random deterministic plant with `n` states over `events`, trimmed.
fn random_cyclic(rng: &mut ChaCha8Rng, alphabet: &Alphabet, n: usize) -> Automaton {
    let k = alphabet.len();
    let mut delta: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    // spanning tree first, so every state is reachable
    for q in 1..n {
        let p = rng.gen_range(0..q);
        let free: Vec<usize> = (0..k)
            .filter(|e| delta[p].iter().all(|(x, _)| x != e))
            .collect();
        if let Some(&e) = free.choose(rng) {
            delta[p].push((e, q));
        }
    }
    for row in delta.iter_mut() {
        for e in 0..k {
            if row.iter().all(|&(x, _)| x != e) && rng.gen_bool(0.35) {
                row.push((e, rng.gen_range(0..n)));
            }
        }
    }
    let mut marked: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    marked[0] = marked[0] || rng.gen_bool(0.5);
    if !marked.iter().any(|m| *m) {
        marked[n - 1] = true;
    }
    let g = Automaton::from_parts(alphabet.clone(), None, 0, marked, delta);
    let t = trim(&g).renumber();
    if t.marked().iter().any(|m| *m) {
        t
    } else {
        Automaton::epsilon(alphabet.clone())
    }
}

/// Random acyclic deterministic automaton: a trie-like DAG with at most
/// `max_states` states and paths of length at most `max_depth`.
pub fn random_acyclic(
    rng: &mut ChaCha8Rng,
    alphabet: &Alphabet,
    max_states: usize,
    max_depth: usize,
    all_marked: bool,
) -> Automaton {
    let k = alphabet.len();
    let mut level = vec![0usize];
    let mut delta: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    let mut q = 0;
    while q < level.len() {
        if level[q] < max_depth {
            for e in 0..k {
                if level.len() >= max_states || !rng.gen_bool(0.55) {
                    continue;
                }
                // occasionally merge into an existing deeper state
                let deeper: Vec<usize> = (0..level.len())
                    .filter(|&t| level[t] == level[q] + 1)
                    .collect();
                let t = match deeper.choose(rng) {
                    Some(&t) if rng.gen_bool(0.25) => t,
                    _ => {
                        level.push(level[q] + 1);
                        delta.push(Vec::new());
                        level.len() - 1
                    }
                };
                delta[q].push((e, t));
            }
        }
        q += 1;
    }
    let n = level.len();
    let marked: Vec<bool> = (0..n)
        .map(|q| all_marked || delta[q].is_empty() || rng.gen_bool(0.4))
        .collect();
    Automaton::from_parts(alphabet.clone(), None, 0, marked, delta)
}

/// Random prefix-closed `K ⊆ Q(L_m(g))`: the closure of a random set of
/// abstract strings whose prefixes are all in `Q(L_m(g))`.
fn random_high_spec(rng: &mut ChaCha8Rng, g: &Automaton, ctx: &ProjectionContext) -> Automaton {
    let g_hi = project(g, &ctx.highlevel());
    let alphabet = g_hi.alphabet().clone();
    let marked = enumerate(&g_hi, 6).strings;
    let marked_set: BTreeSet<&Word> = marked.iter().collect();
    let closed: Vec<&Word> = marked
        .iter()
        .filter(|w| (0..=w.len()).all(|i| marked_set.contains(&w[..i].to_vec())))
        .collect();
    if closed.is_empty() {
        return Automaton::empty(alphabet);
    }
    let picks: Vec<Word> = closed
        .iter()
        .filter(|_| rng.gen_bool(0.4))
        .map(|w| (*w).clone())
        .collect();
    Automaton::from_words(alphabet, &picks, true).expect("events of the abstraction")
}

/// Reproducible random instance for property suites.
pub fn random_instance(seed: u64, profile: Profile) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_events = rng.gen_range(2..=4);
    let flags = random_flags(&mut rng, n_events, profile);
    let mut alphabet = Alphabet::new();
    for (name, f) in NAMES.iter().zip(&flags) {
        alphabet.insert(ev(name), *f);
    }
    let plant = match profile {
        Profile::AcyclicSmall => random_acyclic(&mut rng, &alphabet, 12, 6, false),
        _ => {
            let n = rng.gen_range(2..=6);
            random_cyclic(&mut rng, &alphabet, n)
        }
    };
    let ctx = ProjectionContext::new(alphabet);
    let spec = random_high_spec(&mut rng, &plant, &ctx);
    Instance { plant, spec, ctx }
}

/// Small acyclic plant with a low-level specification `K ⊆ L_m(G)` of at
/// most `max_spec` strings, for the supremum oracles.
pub fn random_sup_instance(seed: u64, events: usize, depth: usize, max_spec: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let flags = random_flags(&mut rng, events, Profile::Unconstrained);
    let mut alphabet = Alphabet::new();
    for (name, f) in NAMES.iter().zip(&flags) {
        alphabet.insert(ev(name), *f);
    }
    let plant = random_acyclic(&mut rng, &alphabet, 12, depth, false);
    let mut marked = enumerate(&plant, depth).strings;
    marked.shuffle(&mut rng);
    let take = rng.gen_range(0..=max_spec.min(marked.len()));
    let spec =
        Automaton::from_words(alphabet.clone(), &marked[..take], false).expect("plant events");
    Instance {
        plant,
        spec,
        ctx: ProjectionContext::new(alphabet),
    }
}

/// Random NFA with all states marked, for the gadget suites.
pub fn random_nfa(seed: u64, max_states: usize, max_events: usize) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_events);
    let alphabet = Alphabet::uniform(NAMES[..k].iter().copied(), EventFlags::default());
    let density = rng.gen_range(0.15..0.7);
    let mut delta: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for row in delta.iter_mut() {
        for e in 0..k {
            for t in 0..n {
                if rng.gen_bool(density) {
                    row.push((e, t));
                }
            }
        }
    }
    Automaton::from_parts(alphabet, None, 0, vec![true; n], delta)
}

/// Random, possibly nondeterministic automaton with random marking, for
/// kernel property suites.
pub fn random_automaton(seed: u64, max_states: usize, max_events: usize) -> Automaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_states);
    let k = rng.gen_range(1..=max_events);
    let alphabet = Alphabet::uniform(NAMES[..k].iter().copied(), EventFlags::default());
    let density = rng.gen_range(0.1..0.6);
    let mut delta: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for row in delta.iter_mut() {
        for e in 0..k {
            for t in 0..n {
                if rng.gen_bool(density) {
                    row.push((e, t));
                }
            }
        }
    }
    let marked = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    Automaton::from_parts(alphabet, None, 0, marked, delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{chars, is_nonblocking};
    use crate::relational::{check_moc, sufficient_moc};

    fn moc_gap() -> (Automaton, ProjectionContext) {
        let ctx =
            ProjectionContext::from_names(&["a", "b", "c"], &["a", "c"], &["b", "c"], &[]).unwrap();
        let alpha = ctx.sigma().clone();
        let words: Vec<Word> = ["ba", "bac", "ac", "c"].iter().map(|w| chars(w)).collect();
        (Automaton::from_words(alpha, &words, true).unwrap(), ctx)
    }

    #[test]
    fn moc_gap_brute_force() {
        let (l, ctx) = moc_gap();
        assert!(brute_oc(&l, &ctx, 4).unwrap().holds());
        assert_eq!(
            brute_moc(&l, &ctx, 4).unwrap(),
            Verdict::violated(chars("c"), chars("bc"), None)
        );
    }

    #[test]
    fn epsilon_language_passes_everything() {
        let ctx = ProjectionContext::from_names(&["a"], &[], &["a"], &["a"]).unwrap();
        let l = Automaton::epsilon(ctx.sigma().clone());
        for v in [
            brute_oc(&l, &ctx, 3).unwrap(),
            brute_moc(&l, &ctx, 3).unwrap(),
            brute_loc(&l, &ctx, 3).unwrap(),
        ] {
            assert!(v.holds(), "{v}");
        }
    }

    #[test]
    fn brute_supremal_normal_moc_gap() {
        let (l, ctx) = moc_gap();
        let kl_words: Vec<Word> = ["ba", "c", "ac", "a", "b", ""]
            .iter()
            .map(|w| chars(w))
            .collect();
        let kl = Automaton::from_words(ctx.sigma().clone(), &kl_words, false).unwrap();
        let sup = brute_sup_normal(&kl, &l, &ctx, 4).unwrap().unwrap();
        let expected: BTreeSet<Word> = ["", "a", "b", "c", "ba"].iter().map(|w| chars(w)).collect();
        assert_eq!(sup, expected);
    }

    #[test]
    fn gadget_follows_universality() {
        let alpha = Alphabet::uniform(["a"], EventFlags::default());
        let universal = Automaton::universal(alpha.clone());
        let (b, ctx) = pspace_gadget(&universal).unwrap();
        assert!(nfa_universal(&universal).unwrap());
        assert!(!brute_moc(&b, &ctx, 7).unwrap().is_violated());

        let eps = Automaton::epsilon(alpha);
        let (b, ctx) = pspace_gadget(&eps).unwrap();
        assert!(!nfa_universal(&eps).unwrap());
        let v = brute_moc(&b, &ctx, 7).unwrap();
        let ce = v.counterexample().expect("violated");
        let right = project_string(&ctx, Map::PHi, &ce.right).unwrap();
        assert_eq!(right, chars("a"));
        assert!(check_moc(&b.mark_all(), &ctx, Some(12))
            .unwrap()
            .is_violated());
    }

    #[test]
    fn gadget_is_linear() {
        let a = random_nfa(7, 4, 2);
        let (b, _) = pspace_gadget(&a).unwrap();
        let m = a.num_transitions();
        assert!(b.num_transitions() <= 10 * m + 2 * a.alphabet().len() + 8);
    }

    #[test]
    fn unmarked_nfa_is_rejected() {
        let a = Automaton::empty(Alphabet::uniform(["a"], EventFlags::default()));
        assert!(matches!(pspace_gadget(&a), Err(Error::UnmarkedState(_))));
    }

    #[test]
    fn railroad_models_are_consistent() {
        let (g1, g2, k, ctx) = railroad_models();
        let g = crate::projection::parallel(&[&g1, &g2]).unwrap();
        assert!(is_nonblocking(&g));
        assert_eq!(g.num_states(), 9);
        assert!(k
            .alphabet()
            .events()
            .iter()
            .all(|e| ctx.is_highlevel(e).unwrap()));
    }

    #[test]
    fn random_instances_are_reproducible() {
        for seed in 0..20 {
            let a = random_instance(seed, Profile::MocByConstruction);
            let b = random_instance(seed, Profile::MocByConstruction);
            assert_eq!(a.plant.to_des(), b.plant.to_des());
            assert_eq!(a.spec.to_des(), b.spec.to_des());
            assert!(sufficient_moc(&a.ctx));
            let small = random_instance(seed, Profile::AcyclicSmall);
            assert!(small.plant.num_states() <= 12);
            assert!(!has_cycle(&small.plant));
            assert!(enumerate(&small.plant.mark_all(), 7)
                .strings
                .iter()
                .all(|w| w.len() <= 6));
        }
    }
}
