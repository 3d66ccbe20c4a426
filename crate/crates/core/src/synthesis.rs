//! Controllability, observability and normality checks, and supremal
//! sublanguage synthesis.
//!
//! Specifications are read through their marked language `K`; plants
//! through both `L(G)` and `L_m(G)`. A specification over a subset of the
//! plant's events is viewed over the plant alphabet without self-loops, so
//! it still denotes the same set of strings. Every synthesis result is
//! trim and minimal; an empty supremum is [`Automaton::empty`].

use crate::automaton::{
    combine, concat_sigma_star, equivalence_witness, equivalent, included, minimize,
    prefix_closure, to_dfa, trim, Automaton, EventId, Inclusion, SetOp, Word,
};
use crate::projection::{inverse_project, parallel, project, ProjectionContext};
use crate::search::{lex_search, SearchOutcome};
use crate::{Error, Outcome, Result};
use serde::Serialize;
use std::collections::{BTreeSet, VecDeque};

/// `s ∈ K̄` and `s·event ∈ L(G) \ K̄` with `event` uncontrollable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ControllabilityViolation {
    pub s: Word,
    pub event: EventId,
}

/// `P(s) = P(s')`, `s·event ∈ K̄`, `s' ∈ K̄`, `s'·event ∈ L(G) \ K̄`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObservabilityViolation {
    pub s: Word,
    pub s_prime: Word,
    pub event: EventId,
}

/// `k` viewed over the plant alphabet.
fn lift(k: &Automaton, g: &Automaton) -> Result<Automaton> {
    if k.alphabet().same_events(g.alphabet()) {
        return Ok(k.with_flags(g.alphabet())?);
    }
    Ok(k.with_alphabet(g.alphabet())?)
}

/// Trim DFA of `K̄`; every state is marked.
fn closure_dfa(k: &Automaton) -> Automaton {
    trim(&prefix_closure(k))
}

fn generated(g: &Automaton) -> Automaton {
    trim(&to_dfa(&g.mark_all()))
}

fn require_closed(a: &Automaton) -> Result<()> {
    match included(&prefix_closure(a), a)? {
        Inclusion::Witness(w) => Err(Error::NotPrefixClosed(w)),
        Inclusion::Included => Ok(()),
    }
}

fn require_sublanguage(k: &Automaton, g: &Automaton) -> Result<()> {
    match included(k, g)? {
        Inclusion::Witness(w) => Err(Error::NotSublanguage(w)),
        Inclusion::Included => Ok(()),
    }
}

/// Decides `K̄·Σuc ∩ L(G) ⊆ K̄`. The counterexample has the length-lex
/// least `s`, then the least event.
pub fn check_controllability(
    k: &Automaton,
    g: &Automaton,
    sigma_uc: &BTreeSet<EventId>,
) -> Result<Outcome<ControllabilityViolation>> {
    let k = closure_dfa(&lift(k, g)?);
    let g = generated(g);
    let uc = g.alphabet().mask(sigma_uc);
    if k.marked().iter().all(|m| !m) {
        return Ok(Outcome::Holds);
    }
    // BFS in event order visits state pairs in length-lex order of access words
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut pairs = vec![(k.initial(), g.initial())];
    let mut index = std::collections::HashMap::from([(pairs[0], 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    let word_to = |mut i: usize, parent: &[Option<(usize, usize)>]| {
        let mut w = Vec::new();
        while let Some((p, e)) = parent[i] {
            w.push(e);
            i = p;
        }
        w.reverse();
        k.alphabet().decode(&w)
    };
    while let Some(i) = queue.pop_front() {
        let (x, y) = pairs[i];
        for &(e, y2) in g.successors(y) {
            match k.step(x, e) {
                Some(x2) => {
                    if let std::collections::hash_map::Entry::Vacant(slot) = index.entry((x2, y2)) {
                        slot.insert(pairs.len());
                        pairs.push((x2, y2));
                        parent.push(Some((i, e)));
                        queue.push_back(pairs.len() - 1);
                    }
                }
                None if uc[e] => {
                    return Ok(Outcome::Fails(ControllabilityViolation {
                        s: word_to(i, &parent),
                        event: g.alphabet().event(e).clone(),
                    }));
                }
                None => {}
            }
        }
    }
    Ok(Outcome::Holds)
}

/// Decides observability of `K̄` with respect to `L(G)`, the observable and
/// the controllable events of `ctx`. The counterexample minimises
/// `|s| + |s'|`.
pub fn check_observability(
    k: &Automaton,
    g: &Automaton,
    ctx: &ProjectionContext,
) -> Result<Outcome<ObservabilityViolation>> {
    ctx.covers(g.alphabet())?;
    let k = closure_dfa(&lift(k, g)?);
    let g = generated(g);
    if k.marked().iter().all(|m| !m) {
        return Ok(Outcome::Holds);
    }
    let obs = ctx.mask(g.alphabet(), |f| f.observable)?;
    let ctrl = ctx.mask(g.alphabet(), |f| f.controllable)?;
    let outcome = lex_search(
        (k.initial(), g.initial(), k.initial(), g.initial()),
        None,
        |&(x, y, x2, y2)| {
            let mut out = Vec::new();
            for &(e, yn) in g.successors(y) {
                let Some(xn) = k.step(x, e) else { continue };
                if obs[e] {
                    if let (Some(xn2), Some(yn2)) = (k.step(x2, e), g.step(y2, e)) {
                        out.push(((e, 0u8), 2, (xn, yn, xn2, yn2)));
                    }
                } else {
                    out.push(((e, 1), 1, (xn, yn, x2, y2)));
                }
            }
            for &(e, yn2) in g.successors(y2) {
                if obs[e] {
                    continue;
                }
                if let Some(xn2) = k.step(x2, e) {
                    out.push(((e, 2), 1, (x, y, xn2, yn2)));
                }
            }
            out
        },
        |&(x, _, x2, y2)| {
            (0..g.alphabet().len()).find(|&e| {
                ctrl[e]
                    && k.step(x, e).is_some()
                    && g.step(y2, e).is_some()
                    && k.step(x2, e).is_none()
            })
        },
    );
    Ok(match outcome {
        SearchOutcome::Found { path, extra, .. } => {
            let mut s = Vec::new();
            let mut s2 = Vec::new();
            for (e, side) in path {
                let ev = g.alphabet().event(e).clone();
                if side != 2 {
                    s.push(ev.clone());
                }
                if side != 1 {
                    s2.push(ev);
                }
            }
            Outcome::Fails(ObservabilityViolation {
                s,
                s_prime: s2,
                event: g.alphabet().event(extra).clone(),
            })
        }
        SearchOutcome::Exhausted { .. } => Outcome::Holds,
    })
}

/// Decides `K̄ = P⁻¹P(K̄) ∩ L(G)`. The counterexample is a shortest string
/// on which the two sides differ (normally one of `P⁻¹P(K̄) ∩ L(G)`
/// missing from `K̄`).
pub fn check_normality(
    k: &Automaton,
    g: &Automaton,
    ctx: &ProjectionContext,
) -> Result<Outcome<Word>> {
    ctx.covers(g.alphabet())?;
    let kbar = closure_dfa(&lift(k, g)?);
    let rhs = normal_hull(&kbar, &generated(g), &ctx.observable())?;
    Ok(match equivalence_witness(&rhs, &kbar)? {
        Some(w) => Outcome::Fails(w),
        None => Outcome::Holds,
    })
}

/// `P⁻¹P(B) ∩ M` for automata over the same events.
fn normal_hull(b: &Automaton, m: &Automaton, obs: &BTreeSet<EventId>) -> Result<Automaton> {
    let lifted = inverse_project(&project(b, obs), m.alphabet())?;
    Ok(combine(SetOp::Intersection, &lifted, m)?)
}

/// Supremal normal sublanguage of a prefix-closed `B ⊆ M`, computed as
/// `B − P⁻¹P(M − B)Σ*` where `P` projects onto the events of `obs`.
///
/// With `b`, `m` over the high-level events and `obs = Σo`, `P` is the
/// high-level observation `P_hi`.
pub fn sup_normal_closed(
    b: &Automaton,
    m: &Automaton,
    obs: &BTreeSet<EventId>,
) -> Result<Automaton> {
    let b = lift(b, m)?;
    require_closed(&b)?;
    require_closed(m)?;
    require_sublanguage(&b, m)?;
    sup_normal_unchecked(&b, m, obs)
}

fn sup_normal_unchecked(
    b: &Automaton,
    m: &Automaton,
    obs: &BTreeSet<EventId>,
) -> Result<Automaton> {
    let outside = combine(SetOp::Difference, m, b)?;
    let blamed = concat_sigma_star(&project(&outside, obs));
    let lifted = inverse_project(&blamed, m.alphabet())?;
    Ok(combine(SetOp::Difference, b, &lifted)?)
}

/// Largest `S ⊆ L_m(k)` whose closure is normal with respect to `L(g)`.
///
/// Iterates `S ← S ∩ supN(S̄, L(g), P)` from `S = L_m(k)`. Every iterate
/// contains every sublanguage of `L_m(k)` with normal closure, and a fixed
/// point has normal closure, so the limit is the supremum.
pub fn sup_normal_marked(
    k: &Automaton,
    g: &Automaton,
    ctx: &ProjectionContext,
) -> Result<Automaton> {
    ctx.covers(g.alphabet())?;
    let k = lift(k, g)?;
    require_sublanguage(&k, g)?;
    let lg = generated(g);
    let obs = ctx.observable();
    let mut s = minimize(&trim(&k));
    loop {
        let closed = closure_dfa(&s);
        let normal = sup_normal_unchecked(&closed, &lg, &obs)?;
        let next = combine(SetOp::Intersection, &s, &normal)?;
        if equivalent(&next, &s)? {
            return Ok(next);
        }
        s = next;
    }
}

/// Supremal controllable sublanguage of `L_m(k)` with respect to `L(g)` and
/// the uncontrollable events `sigma_uc`.
pub fn sup_controllable(
    k: &Automaton,
    g: &Automaton,
    sigma_uc: &BTreeSet<EventId>,
) -> Result<Automaton> {
    let k = lift(k, g)?;
    require_sublanguage(&k, g)?;
    let kd = trim(&to_dfa(&k));
    let gd = to_dfa(g);
    let uc = gd.alphabet().mask(sigma_uc);

    // product of K with the plant's generated language
    let mut pairs = vec![(kd.initial(), gd.initial())];
    let mut index = std::collections::HashMap::from([(pairs[0], 0usize)]);
    let mut delta: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut exposed: Vec<bool> = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (x, y) = pairs[i];
        let mut row = Vec::new();
        let mut bad = false;
        for &(e, y2) in gd.successors(y) {
            match kd.step(x, e) {
                Some(x2) => {
                    let id = *index.entry((x2, y2)).or_insert_with(|| {
                        pairs.push((x2, y2));
                        pairs.len() - 1
                    });
                    row.push((e, id));
                }
                None => bad |= uc[e],
            }
        }
        delta.push(row);
        exposed.push(bad);
        i += 1;
    }
    let marked: Vec<bool> = pairs
        .iter()
        .map(|&(x, y)| kd.is_marked(x) && gd.is_marked(y))
        .collect();
    let n = pairs.len();
    let mut alive: Vec<bool> = exposed.iter().map(|b| !b).collect();
    loop {
        // a state dies if an uncontrollable move leads to a dead state
        let mut changed = false;
        for q in 0..n {
            if alive[q] && delta[q].iter().any(|&(e, t)| uc[e] && !alive[t]) {
                alive[q] = false;
                changed = true;
            }
        }
        // or if no marked state stays reachable
        let mut co: Vec<bool> = (0..n).map(|q| alive[q] && marked[q]).collect();
        let mut grew = true;
        while grew {
            grew = false;
            for q in 0..n {
                if alive[q] && !co[q] && delta[q].iter().any(|&(_, t)| co[t]) {
                    co[q] = true;
                    grew = true;
                }
            }
        }
        for q in 0..n {
            if alive[q] && !co[q] {
                alive[q] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if !alive[0] {
        return Ok(Automaton::empty(g.alphabet().clone()));
    }
    let delta = delta
        .into_iter()
        .enumerate()
        .map(|(q, row)| {
            if alive[q] {
                row.into_iter().filter(|&(_, t)| alive[t]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let marked = marked.iter().zip(&alive).map(|(m, a)| *m && *a).collect();
    let product = Automaton::from_parts(g.alphabet().clone(), None, 0, marked, delta);
    Ok(minimize(&trim(&product)))
}

/// Supremal controllable and normal sublanguage, alternating the two
/// suprema until neither removes anything. Uncontrollable events come from
/// `ctx`.
pub fn sup_con_normal(k: &Automaton, g: &Automaton, ctx: &ProjectionContext) -> Result<Automaton> {
    ctx.covers(g.alphabet())?;
    let uc = ctx.uncontrollable();
    let mut s = sup_controllable(k, g, &uc)?;
    loop {
        let normal = sup_normal_marked(&s, g, ctx)?;
        let next = sup_controllable(&normal, g, &uc)?;
        if equivalent(&next, &s)? {
            return Ok(next);
        }
        s = next;
    }
}

/// The plant restricted by a supervisor over a subset of its events.
pub fn closed_loop(sup: &Automaton, g: &Automaton) -> Result<Automaton> {
    let lifted = inverse_project(sup, g.alphabet())?;
    Ok(minimize(&parallel(&[g, &lifted])?))
}
