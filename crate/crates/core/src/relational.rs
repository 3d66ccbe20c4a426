//! Relational languages and observation-consistency checks.
//!
//! A pair automaton runs two automata side by side, synchronised on a set
//! `Σ'` of shared events. Its language is the set of pairs `(w, w')` of
//! component strings agreeing on `Σ'`, spelled over pair events `(a,a)`,
//! `(a,ε)` and `(ε,a)`.
//!
//! OC and MOC can be phrased as inclusions of such relational languages,
//! but inclusion of pair-event strings is sensitive to the interleaving in
//! which a pair of strings is spelled. The checkers below therefore use the
//! pair product only to enumerate candidates, and judge every candidate
//! semantically: alongside each candidate pair-string they maintain the set
//! of partial witnesses that could still realise it. This set depends only
//! on the pair of component strings read so far, never on the interleaving.

use crate::automaton::{
    accessible, format_word, has_cycle, included, minimize, prefix_closure, relabel_determinize,
    to_dfa, trim, Alphabet, Automaton, EventFlags, EventId, Inclusion, Word,
};
use crate::projection::{project, project_string, Map, ProjectionContext};
use crate::search::{lex_search, SearchOutcome};
use crate::{Error, Result};
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// An event of a pair automaton. At least one side is present.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairEvent {
    pub left: Option<EventId>,
    pub right: Option<EventId>,
}

impl PairEvent {
    /// Rendering used as event name: `left|right`, with `-` for `ε`.
    pub fn name(&self) -> String {
        let side = |e: &Option<EventId>| e.as_ref().map_or("-".to_string(), |e| e.to_string());
        format!("{}|{}", side(&self.left), side(&self.right))
    }

    fn key(&self) -> (bool, Option<&EventId>, bool, Option<&EventId>) {
        (
            self.left.is_none(),
            self.left.as_ref(),
            self.right.is_none(),
            self.right.as_ref(),
        )
    }
}

/// Orders by left component, then right, with `ε` after every event.
impl Ord for PairEvent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for PairEvent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PairEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |e: &Option<EventId>| e.as_ref().map_or("ε".to_string(), |e| e.to_string());
        write!(f, "({},{})", side(&self.left), side(&self.right))
    }
}

/// Automaton over pair events.
#[derive(Clone, Debug)]
pub struct PairAutomaton {
    automaton: Automaton,
    /// `pairs[i]` is the pair behind event `i` of `automaton`.
    pairs: Vec<PairEvent>,
    /// Position of `pairs[i]` in [`PairEvent`] order.
    rank: Vec<usize>,
    left: Alphabet,
    right: Alphabet,
    sync: BTreeSet<EventId>,
}

impl PairAutomaton {
    fn assemble(
        automaton: Automaton,
        by_name: &HashMap<String, PairEvent>,
        left: Alphabet,
        right: Alphabet,
        sync: BTreeSet<EventId>,
    ) -> Self {
        let pairs: Vec<PairEvent> = automaton
            .alphabet()
            .events()
            .iter()
            .map(|e| by_name[e.as_str()].clone())
            .collect();
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        order.sort_by(|&i, &j| pairs[i].cmp(&pairs[j]));
        let mut rank = vec![0; pairs.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        PairAutomaton {
            automaton,
            pairs,
            rank,
            left,
            right,
            sync,
        }
    }

    pub fn automaton(&self) -> &Automaton {
        &self.automaton
    }

    pub fn pairs(&self) -> &[PairEvent] {
        &self.pairs
    }

    pub fn left_alphabet(&self) -> &Alphabet {
        &self.left
    }

    pub fn right_alphabet(&self) -> &Alphabet {
        &self.right
    }

    pub fn sync(&self) -> &BTreeSet<EventId> {
        &self.sync
    }

    pub fn num_states(&self) -> usize {
        self.automaton.num_states()
    }

    /// Splits a pair-string (given as event indices) into its components.
    pub fn split(&self, word: &[usize]) -> (Word, Word) {
        let mut l = Vec::new();
        let mut r = Vec::new();
        for &i in word {
            l.extend(self.pairs[i].left.clone());
            r.extend(self.pairs[i].right.clone());
        }
        (l, r)
    }

    fn index_of(&self, p: &PairEvent) -> Option<usize> {
        self.pairs.iter().position(|q| q == p)
    }

    /// Whether this exact pair-string (in this interleaving) is generated.
    pub fn generates(&self, word: &[PairEvent]) -> bool {
        let mut q = self.automaton.initial();
        for p in word {
            let Some(e) = self.index_of(p) else {
                return false;
            };
            match self.automaton.step(q, e) {
                Some(t) => q = t,
                None => return false,
            }
        }
        true
    }

    /// Pair-strings of the generated language up to `depth` pair events.
    pub fn enumerate_generated(&self, depth: usize) -> Vec<Vec<PairEvent>> {
        let g = self.automaton.mark_all();
        crate::automaton::enumerate(&g, depth)
            .strings
            .iter()
            .map(|w| {
                w.iter()
                    .map(|e| self.pairs[self.automaton.alphabet().index_of(e).unwrap()].clone())
                    .collect()
            })
            .collect()
    }
}

fn pair_alphabet(pairs: &[PairEvent]) -> (Alphabet, HashMap<String, PairEvent>) {
    let mut alphabet = Alphabet::new();
    let mut by_name = HashMap::new();
    for p in pairs {
        let name = p.name();
        alphabet.insert(
            EventId::new(name.clone()).expect("pair names are valid"),
            EventFlags::default(),
        );
        by_name.insert(name, p.clone());
    }
    (alphabet, by_name)
}

/// Synchronised pair product: `(a,a)` for `a ∈ Σ'`, `(a,ε)` for the other
/// events of `a`, `(ε,b)` for the other events of `b`. Both components are
/// determinized first; a pair state is marked when both components are.
pub fn sync_pair_product(
    a: &Automaton,
    b: &Automaton,
    sync: &BTreeSet<EventId>,
) -> Result<PairAutomaton> {
    if let Some(e) = sync
        .iter()
        .find(|e| !a.alphabet().contains(e) || !b.alphabet().contains(e))
    {
        return Err(Error::SyncSetNotShared(e.clone()));
    }
    let da = accessible(&to_dfa(a));
    let db = accessible(&to_dfa(b));
    let mut pairs = Vec::new();
    for e in da.alphabet().events() {
        pairs.push(if sync.contains(e) {
            PairEvent {
                left: Some(e.clone()),
                right: Some(e.clone()),
            }
        } else {
            PairEvent {
                left: Some(e.clone()),
                right: None,
            }
        });
    }
    for e in db.alphabet().events().iter().filter(|e| !sync.contains(*e)) {
        pairs.push(PairEvent {
            left: None,
            right: Some(e.clone()),
        });
    }
    let (alphabet, by_name) = pair_alphabet(&pairs);
    let moves: Vec<(Option<usize>, Option<usize>)> = alphabet
        .events()
        .iter()
        .map(|n| {
            let p = &by_name[n.as_str()];
            (
                p.left.as_ref().and_then(|e| da.alphabet().index_of(e)),
                p.right.as_ref().and_then(|e| db.alphabet().index_of(e)),
            )
        })
        .collect();

    let start = (da.initial(), db.initial());
    let mut index = HashMap::from([(start, 0usize)]);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (p, q) = states[i];
        let mut row = Vec::new();
        for (k, &(l, r)) in moves.iter().enumerate() {
            let p2 = match l {
                Some(e) => da.step(p, e),
                None => Some(p),
            };
            let q2 = match r {
                Some(e) => db.step(q, e),
                None => Some(q),
            };
            if let (Some(p2), Some(q2)) = (p2, q2) {
                let id = *index.entry((p2, q2)).or_insert_with(|| {
                    states.push((p2, q2));
                    states.len() - 1
                });
                row.push((k, id));
            }
        }
        delta.push(row);
        i += 1;
    }
    let marked = states
        .iter()
        .map(|&(p, q)| da.is_marked(p) && db.is_marked(q))
        .collect();
    let automaton = Automaton::from_parts(alphabet, None, 0, marked, delta);
    Ok(PairAutomaton::assemble(
        automaton,
        &by_name,
        a.alphabet().clone(),
        b.alphabet().clone(),
        sync.clone(),
    ))
}

fn map_pairs(pa: &PairAutomaton, ctx: &ProjectionContext, map_left: bool) -> Result<PairAutomaton> {
    let hi = ctx.highlevel();
    let keep = |e: &Option<EventId>| e.clone().filter(|e| hi.contains(e));
    let mut images: Vec<Option<PairEvent>> = Vec::new();
    for p in &pa.pairs {
        for e in p.left.iter().chain(p.right.iter()) {
            ctx.is_highlevel(e)?;
        }
        let left = if map_left {
            keep(&p.left)
        } else {
            p.left.clone()
        };
        let right = keep(&p.right);
        images.push((left.is_some() || right.is_some()).then_some(PairEvent { left, right }));
    }
    let distinct: Vec<PairEvent> = images
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let (alphabet, by_name) = pair_alphabet(&distinct);
    let label: Vec<Option<usize>> = images
        .iter()
        .map(|im| {
            im.as_ref()
                .map(|p| alphabet.index_of(&EventId::new(p.name()).unwrap()).unwrap())
        })
        .collect();
    let automaton = minimize(&relabel_determinize(&pa.automaton, alphabet, &label));
    let left = if map_left {
        pa.left.restrict(&hi)
    } else {
        pa.left.clone()
    };
    let sync = pa.sync.intersection(&hi).cloned().collect();
    Ok(PairAutomaton::assemble(
        automaton,
        &by_name,
        left,
        pa.right.restrict(&hi),
        sync,
    ))
}

/// Relabels each pair event componentwise under `Q`; pairs mapped to
/// `(ε,ε)` become silent.
pub fn map_pairs_q(pa: &PairAutomaton, ctx: &ProjectionContext) -> Result<PairAutomaton> {
    map_pairs(pa, ctx, true)
}

/// Like [`map_pairs_q`] but only the right component is projected.
pub fn map_pairs_q2(pa: &PairAutomaton, ctx: &ProjectionContext) -> Result<PairAutomaton> {
    map_pairs(pa, ctx, false)
}

/// How a consistency property was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Proof {
    /// `Σo ⊆ Σhi` or `Σhi ⊆ Σo`.
    SufficientCondition,
    /// The candidate pair language is finite and was enumerated completely.
    ExhaustiveFinite,
    /// The candidate language is infinite, but the search closed over a
    /// finite set of configurations, so every candidate was covered.
    ExhaustiveStateSpace,
}

/// Strings witnessing a violation. For OC and MOC `event` is `None`; for
/// LOC it is the controllable high-level event that cannot be matched.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub left: Word,
    pub right: Word,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event: Option<EventId>,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} | {}",
            format_word(&self.left),
            format_word(&self.right)
        )?;
        if let Some(e) = &self.event {
            write!(f, " | {e}")?;
        }
        Ok(())
    }
}

/// Three-valued outcome of a consistency check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Holds {
        by: Proof,
    },
    Violated {
        counterexample: Counterexample,
    },
    /// No violation among candidates of combined length up to the bound,
    /// but longer candidates exist.
    BoundedPass {
        bound: usize,
    },
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        matches!(self, Verdict::Violated { .. })
    }

    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Violated { counterexample } => Some(counterexample),
            _ => None,
        }
    }

    pub(crate) fn violated(left: Word, right: Word, event: Option<EventId>) -> Self {
        Verdict::Violated {
            counterexample: Counterexample { left, right, event },
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds { by } => {
                let why = match by {
                    Proof::SufficientCondition => "sufficient condition",
                    Proof::ExhaustiveFinite => "exhaustive, finite candidate language",
                    Proof::ExhaustiveStateSpace => "exhaustive, closed configuration space",
                };
                write!(f, "holds ({why})")
            }
            Verdict::Violated { counterexample } => write!(f, "violated: {counterexample}"),
            Verdict::BoundedPass { bound } => {
                write!(
                    f,
                    "no violation up to combined length {bound} (inconclusive)"
                )
            }
        }
    }
}

/// A verdict together with the search parameters that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub verdict: Verdict,
    /// Bound on combined candidate length; `None` when no search was needed.
    pub bound: Option<usize>,
    pub pair_states: usize,
    pub configurations: usize,
}

/// `Σo ⊆ Σhi` or `Σhi ⊆ Σo`, under which both OC and MOC hold.
pub fn sufficient_moc(ctx: &ProjectionContext) -> bool {
    let o = ctx.observable();
    let h = ctx.highlevel();
    o.is_subset(&h) || h.is_subset(&o)
}

/// Trim DFA of a language that must be prefix-closed.
fn closed_dfa(l: &Automaton, ctx: &ProjectionContext) -> Result<Automaton> {
    ctx.covers(l.alphabet())?;
    if let Inclusion::Witness(w) = included(&prefix_closure(l), l)? {
        return Err(Error::NotPrefixClosed(w));
    }
    Ok(trim(&to_dfa(l)))
}

/// Per-event classification relative to a context.
struct Classes {
    obs: Vec<bool>,
    hi: Vec<bool>,
}

impl Classes {
    fn new(d: &Automaton, ctx: &ProjectionContext) -> Result<Self> {
        Ok(Classes {
            obs: ctx.mask(d.alphabet(), |f| f.observable)?,
            hi: ctx.mask(d.alphabet(), |f| f.highlevel)?,
        })
    }
}

fn encode_high(d: &Automaton, ctx: &ProjectionContext, t: &[EventId]) -> Result<Vec<usize>> {
    t.iter()
        .map(|e| {
            if !ctx.is_highlevel(e)? {
                return Err(Error::DomainViolation {
                    event: e.clone(),
                    map: "Q",
                });
            }
            d.alphabet()
                .index_of(e)
                .ok_or_else(|| Error::NotInContext(e.clone()))
        })
        .collect()
}

/// Decides whether there are `s, s' ∈ L` with `Q(s) = t`, `Q(s') = t'` and
/// `P(s) = P(s')`, returning the least such pair.
pub fn oc_pair_witness(
    l: &Automaton,
    ctx: &ProjectionContext,
    t: &[EventId],
    t2: &[EventId],
) -> Result<Option<(Word, Word)>> {
    let d = closed_dfa(l, ctx)?;
    let cls = Classes::new(&d, ctx)?;
    let t = encode_high(&d, ctx, t)?;
    let t2 = encode_high(&d, ctx, t2)?;
    // labels: (side, event) with side 0 = joint, 1 = left, 2 = right
    let outcome = lex_search(
        (d.initial(), 0usize, d.initial(), 0usize),
        None,
        |&(x, i, y, j)| {
            let mut out = Vec::new();
            for &(e, x2) in d.successors(x) {
                if cls.obs[e] {
                    let Some(y2) = d.step(y, e) else { continue };
                    if cls.hi[e] {
                        if t.get(i) == Some(&e) && t2.get(j) == Some(&e) {
                            out.push(((e, 0u8), 2, (x2, i + 1, y2, j + 1)));
                        }
                    } else {
                        out.push(((e, 0), 2, (x2, i, y2, j)));
                    }
                } else if !cls.hi[e] {
                    out.push(((e, 1), 1, (x2, i, y, j)));
                } else if t.get(i) == Some(&e) {
                    out.push(((e, 1), 1, (x2, i + 1, y, j)));
                }
            }
            for &(e, y2) in d.successors(y) {
                if cls.obs[e] {
                    continue;
                }
                if !cls.hi[e] {
                    out.push(((e, 2), 1, (x, i, y2, j)));
                } else if t2.get(j) == Some(&e) {
                    out.push(((e, 2), 1, (x, i, y2, j + 1)));
                }
            }
            out
        },
        |&(_, i, _, j)| (i == t.len() && j == t2.len()).then_some(()),
    );
    Ok(match outcome {
        SearchOutcome::Found { path, .. } => {
            let mut s = Vec::new();
            let mut s2 = Vec::new();
            for (e, side) in path {
                let ev = d.alphabet().event(e).clone();
                if side != 2 {
                    s.push(ev.clone());
                }
                if side != 1 {
                    s2.push(ev);
                }
            }
            Some((s, s2))
        }
        SearchOutcome::Exhausted { .. } => None,
    })
}

/// Decides whether there is `s' ∈ L` with `Q(s') = t'` and `P(s') = P(s)`,
/// returning the shortest such string.
pub fn moc_pair_witness(
    l: &Automaton,
    ctx: &ProjectionContext,
    s: &[EventId],
    t2: &[EventId],
) -> Result<Option<Word>> {
    let d = closed_dfa(l, ctx)?;
    let cls = Classes::new(&d, ctx)?;
    let t2 = encode_high(&d, ctx, t2)?;
    let obs: Vec<usize> = project_string(ctx, Map::P, s)?
        .iter()
        .map(|e| {
            d.alphabet()
                .index_of(e)
                .ok_or_else(|| Error::NotInContext(e.clone()))
        })
        .collect::<Result<_>>()?;
    let outcome = lex_search(
        (d.initial(), 0usize, 0usize),
        None,
        |&(x, i, j)| {
            let mut out = Vec::new();
            for &(e, x2) in d.successors(x) {
                let need_hi = cls.hi[e];
                let need_obs = cls.obs[e];
                if need_hi && t2.get(i) != Some(&e) {
                    continue;
                }
                if need_obs && obs.get(j) != Some(&e) {
                    continue;
                }
                out.push((
                    e,
                    1,
                    (x2, i + usize::from(need_hi), j + usize::from(need_obs)),
                ));
            }
            out
        },
        |&(_, i, j)| (i == t2.len() && j == obs.len()).then_some(()),
    );
    Ok(match outcome {
        SearchOutcome::Found { path, .. } => Some(d.alphabet().decode(&path)),
        SearchOutcome::Exhausted { .. } => None,
    })
}

/// A partial witness: one or two low-level runs plus the high-level (or
/// observable) events they still owe to the candidate read so far.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Partial {
    x: u32,
    y: u32,
    owe_a: Vec<u16>,
    owe_b: Vec<u16>,
}

impl Partial {
    fn settled(&self) -> bool {
        self.owe_a.is_empty() && self.owe_b.is_empty()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Oc,
    Moc,
}

/// Effect of reading one candidate pair event on the partial witnesses.
#[derive(Clone, Copy)]
enum Effect {
    Nothing,
    OweA(u16),
    OweB(u16),
    Sync(usize),
}

struct Engine<'a> {
    mode: Mode,
    d: &'a Automaton,
    cls: Classes,
}

impl Engine<'_> {
    /// Moves of the witness runs that do not depend on the candidate.
    fn moves(&self, n: &Partial) -> Vec<Partial> {
        let d = self.d;
        let mut out = Vec::new();
        let pop = |owe: &[u16], e: usize| -> Option<Vec<u16>> {
            (owe.first() == Some(&(e as u16))).then(|| owe[1..].to_vec())
        };
        match self.mode {
            Mode::Moc => {
                // x: the run of s'; owe_a: observable events of s, owe_b: high-level events of t'
                for &(e, x2) in d.successors(n.x as usize) {
                    let (o, h) = (self.cls.obs[e], self.cls.hi[e]);
                    let mut m = n.clone();
                    m.x = x2 as u32;
                    match (o, h) {
                        (true, true) => continue,
                        (true, false) => match pop(&n.owe_a, e) {
                            Some(rest) => m.owe_a = rest,
                            None => continue,
                        },
                        (false, true) => match pop(&n.owe_b, e) {
                            Some(rest) => m.owe_b = rest,
                            None => continue,
                        },
                        (false, false) => {}
                    }
                    out.push(m);
                }
            }
            Mode::Oc => {
                // x, y: the runs of s and s'; owe_a / owe_b: unobservable high-level events of t / t'
                for &(e, x2) in d.successors(n.x as usize) {
                    let (o, h) = (self.cls.obs[e], self.cls.hi[e]);
                    if o {
                        if !h {
                            if let Some(y2) = d.step(n.y as usize, e) {
                                let mut m = n.clone();
                                m.x = x2 as u32;
                                m.y = y2 as u32;
                                out.push(m);
                            }
                        }
                        continue;
                    }
                    let mut m = n.clone();
                    m.x = x2 as u32;
                    if h {
                        match pop(&n.owe_a, e) {
                            Some(rest) => m.owe_a = rest,
                            None => continue,
                        }
                    }
                    out.push(m);
                }
                for &(e, y2) in d.successors(n.y as usize) {
                    let (o, h) = (self.cls.obs[e], self.cls.hi[e]);
                    if o {
                        continue;
                    }
                    let mut m = n.clone();
                    m.y = y2 as u32;
                    if h {
                        match pop(&n.owe_b, e) {
                            Some(rest) => m.owe_b = rest,
                            None => continue,
                        }
                    }
                    out.push(m);
                }
            }
        }
        out
    }

    /// Closes a set under witness moves, then drops partial witnesses that
    /// can never pay off what they owe (appending to a debt never helps).
    fn close(&self, seed: Vec<Partial>) -> Vec<Partial> {
        let mut index: HashMap<Partial, usize> = HashMap::new();
        let mut nodes: Vec<Partial> = Vec::new();
        let mut rev: Vec<Vec<usize>> = Vec::new();
        for n in seed {
            if !index.contains_key(&n) {
                index.insert(n.clone(), nodes.len());
                nodes.push(n);
                rev.push(Vec::new());
            }
        }
        let mut i = 0;
        while i < nodes.len() {
            for m in self.moves(&nodes[i]) {
                let j = match index.get(&m) {
                    Some(&j) => j,
                    None => {
                        index.insert(m.clone(), nodes.len());
                        nodes.push(m);
                        rev.push(Vec::new());
                        nodes.len() - 1
                    }
                };
                rev[j].push(i);
            }
            i += 1;
        }
        let mut live = vec![false; nodes.len()];
        let mut stack: Vec<usize> = (0..nodes.len()).filter(|&k| nodes[k].settled()).collect();
        for &k in &stack {
            live[k] = true;
        }
        while let Some(k) = stack.pop() {
            for &p in &rev[k] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut kept: Vec<Partial> = nodes
            .into_iter()
            .zip(live)
            .filter_map(|(n, l)| l.then_some(n))
            .collect();
        kept.sort_unstable();
        kept
    }

    fn apply(&self, set: &[Partial], effect: Effect) -> Vec<Partial> {
        match effect {
            Effect::Nothing => set.to_vec(),
            Effect::OweA(e) => {
                let grown = set
                    .iter()
                    .map(|n| {
                        let mut m = n.clone();
                        m.owe_a.push(e);
                        m
                    })
                    .collect();
                self.close(grown)
            }
            Effect::OweB(e) => {
                let grown = set
                    .iter()
                    .map(|n| {
                        let mut m = n.clone();
                        m.owe_b.push(e);
                        m
                    })
                    .collect();
                self.close(grown)
            }
            Effect::Sync(e) => {
                let d = self.d;
                let stepped = set
                    .iter()
                    .filter(|n| n.settled())
                    .filter_map(|n| {
                        let x = d.step(n.x as usize, e)?;
                        let y = match self.mode {
                            Mode::Oc => d.step(n.y as usize, e)?,
                            Mode::Moc => 0,
                        };
                        Some(Partial {
                            x: x as u32,
                            y: y as u32,
                            owe_a: Vec::new(),
                            owe_b: Vec::new(),
                        })
                    })
                    .collect();
                self.close(stepped)
            }
        }
    }
}

fn default_bound(pa: &PairAutomaton) -> usize {
    2 * pa.num_states()
}

fn run_consistency(
    mode: Mode,
    l: &Automaton,
    ctx: &ProjectionContext,
    bound: Option<usize>,
) -> Result<CheckReport> {
    let d = closed_dfa(l, ctx)?;
    let hi = ctx.highlevel();
    let sync = ctx.highlevel_observable();
    let g_hi = project(&d, &hi);
    let pa = match mode {
        Mode::Oc => sync_pair_product(&g_hi, &g_hi, &sync)?,
        Mode::Moc => sync_pair_product(&d, &g_hi, &sync)?,
    };
    if sufficient_moc(ctx) {
        return Ok(CheckReport {
            verdict: Verdict::Holds {
                by: Proof::SufficientCondition,
            },
            bound: None,
            pair_states: pa.num_states(),
            configurations: 0,
        });
    }
    let bound = bound.unwrap_or_else(|| default_bound(&pa));
    let cls = Classes::new(&d, ctx)?;
    let effects: Vec<(Effect, usize)> = pa
        .pairs
        .iter()
        .map(|p| {
            let idx = |e: &EventId| d.alphabet().index_of(e).expect("event of L");
            match (&p.left, &p.right) {
                (Some(a), Some(_)) => (Effect::Sync(idx(a)), 2),
                (Some(a), None) => {
                    let e = idx(a);
                    let eff = match mode {
                        Mode::Moc if cls.obs[e] => Effect::OweA(e as u16),
                        Mode::Moc => Effect::Nothing,
                        Mode::Oc => Effect::OweA(e as u16),
                    };
                    (eff, 1)
                }
                (None, Some(b)) => (Effect::OweB(idx(b) as u16), 1),
                (None, None) => unreachable!("pair events are never (ε,ε)"),
            }
        })
        .collect();
    let engine = Engine { mode, d: &d, cls };
    let init = d.initial() as u32;
    let start_set = engine.close(vec![Partial {
        x: init,
        y: if mode == Mode::Oc { init } else { 0 },
        owe_a: Vec::new(),
        owe_b: Vec::new(),
    }]);
    let pa_ref = &pa;
    let outcome = lex_search(
        (pa.automaton.initial(), start_set),
        Some(bound),
        |(q, set)| {
            pa_ref
                .automaton
                .successors(*q)
                .iter()
                .map(|&(k, q2)| {
                    let (effect, cost) = effects[k];
                    (pa_ref.rank[k], cost, (q2, engine.apply(set, effect)))
                })
                .collect()
        },
        |(_, set)| (!set.iter().any(Partial::settled)).then_some(()),
    );
    let by_rank: HashMap<usize, usize> = pa.rank.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let verdict;
    let configurations;
    match outcome {
        SearchOutcome::Found { path, .. } => {
            let word: Vec<usize> = path.iter().map(|r| by_rank[r]).collect();
            let (left, right) = pa.split(&word);
            debug_assert!(match mode {
                Mode::Oc => oc_pair_witness(l, ctx, &left, &right)?.is_none(),
                Mode::Moc => moc_pair_witness(l, ctx, &left, &right)?.is_none(),
            });
            verdict = Verdict::violated(left, right, None);
            configurations = 0;
        }
        SearchOutcome::Exhausted { nodes, cut } => {
            configurations = nodes;
            verdict = if cut {
                Verdict::BoundedPass { bound }
            } else if has_cycle(&pa.automaton) {
                Verdict::Holds {
                    by: Proof::ExhaustiveStateSpace,
                }
            } else {
                Verdict::Holds {
                    by: Proof::ExhaustiveFinite,
                }
            };
        }
    }
    Ok(CheckReport {
        verdict,
        bound: Some(bound),
        pair_states: pa.num_states(),
        configurations,
    })
}

/// Observation consistency of the prefix-closed language `L_m(l)`.
///
/// Candidates `(t, t')` are pair-strings of `Q(L) ∥_{Σhi∩Σo} Q(L)` of
/// combined length at most `bound` (default: twice the number of states of
/// that pair automaton), visited shortest first with ties broken by
/// [`PairEvent`] order.
pub fn check_oc(l: &Automaton, ctx: &ProjectionContext, bound: Option<usize>) -> Result<Verdict> {
    Ok(check_oc_report(l, ctx, bound)?.verdict)
}

pub fn check_oc_report(
    l: &Automaton,
    ctx: &ProjectionContext,
    bound: Option<usize>,
) -> Result<CheckReport> {
    run_consistency(Mode::Oc, l, ctx, bound)
}

/// Modified observation consistency of the prefix-closed language `L_m(l)`.
///
/// Candidates `(s, t')` are pair-strings of `L ∥_{Σhi∩Σo} Q(L)`; otherwise
/// as [`check_oc`].
pub fn check_moc(l: &Automaton, ctx: &ProjectionContext, bound: Option<usize>) -> Result<Verdict> {
    Ok(check_moc_report(l, ctx, bound)?.verdict)
}

pub fn check_moc_report(
    l: &Automaton,
    ctx: &ProjectionContext,
    bound: Option<usize>,
) -> Result<CheckReport> {
    run_consistency(Mode::Moc, l, ctx, bound)
}

/// Local observation consistency of the prefix-closed language `L_m(l)`.
///
/// The property only involves pairs `(s, s')` with equal observation, which
/// are tracked by the finite product `(x, x', y, y')` of two copies of `L`
/// synchronised on `Σo` and two copies of the abstraction. The check is
/// therefore exact; `bound` only limits the length `|s| + |s'|` of
/// reported counterexamples.
pub fn check_loc(l: &Automaton, ctx: &ProjectionContext, bound: Option<usize>) -> Result<Verdict> {
    let d = closed_dfa(l, ctx)?;
    let cls = Classes::new(&d, ctx)?;
    let hi_set = ctx.highlevel();
    let g_hi = project(&d, &hi_set);
    let to_hi: Vec<Option<usize>> = d
        .alphabet()
        .events()
        .iter()
        .map(|e| g_hi.alphabet().index_of(e))
        .collect();
    let ctrl = ctx.mask(d.alphabet(), |f| f.controllable)?;
    let targets: Vec<usize> = (0..d.alphabet().len())
        .filter(|&e| ctrl[e] && cls.hi[e])
        .collect();
    if targets.is_empty() {
        return Ok(Verdict::Holds {
            by: Proof::ExhaustiveFinite,
        });
    }

    // Can (x, x') be extended by low-level u, u' with P(u) = P(u') to a pair
    // enabling e on both sides?
    let mut cache: HashMap<(usize, usize, usize), bool> = HashMap::new();
    let mut extendable = |x: usize, y: usize, e: usize| -> bool {
        *cache.entry((x, y, e)).or_insert_with(|| {
            let mut seen = std::collections::HashSet::from([(x, y)]);
            let mut stack = vec![(x, y)];
            while let Some((p, q)) = stack.pop() {
                if d.step(p, e).is_some() && d.step(q, e).is_some() {
                    return true;
                }
                let mut next = Vec::new();
                for &(a, p2) in d.successors(p) {
                    if cls.hi[a] {
                        continue;
                    }
                    if cls.obs[a] {
                        if let Some(q2) = d.step(q, a) {
                            next.push((p2, q2));
                        }
                    } else {
                        next.push((p2, q));
                    }
                }
                for &(a, q2) in d.successors(q) {
                    if !cls.hi[a] && !cls.obs[a] {
                        next.push((p, q2));
                    }
                }
                for n in next {
                    if seen.insert(n) {
                        stack.push(n);
                    }
                }
            }
            false
        })
    };

    let step_hi = |y: usize, e: usize| -> usize {
        match to_hi[e] {
            Some(h) => g_hi.step(y, h).expect("abstraction generates Q(L)"),
            None => y,
        }
    };
    let outcome = lex_search(
        (d.initial(), d.initial(), g_hi.initial(), g_hi.initial()),
        bound,
        |&(x, x2, y, y2)| {
            let mut out = Vec::new();
            for &(e, t) in d.successors(x) {
                if cls.obs[e] {
                    if let Some(t2) = d.step(x2, e) {
                        out.push(((e, 0u8), 2, (t, t2, step_hi(y, e), step_hi(y2, e))));
                    }
                } else {
                    out.push(((e, 1), 1, (t, x2, step_hi(y, e), y2)));
                }
            }
            for &(e, t2) in d.successors(x2) {
                if !cls.obs[e] {
                    out.push(((e, 2), 1, (x, t2, y, step_hi(y2, e))));
                }
            }
            out
        },
        |&(x, x2, y, y2)| {
            targets.iter().copied().find(|&e| {
                let h = to_hi[e].expect("high-level");
                g_hi.step(y, h).is_some() && g_hi.step(y2, h).is_some() && !extendable(x, x2, e)
            })
        },
    );
    Ok(match outcome {
        SearchOutcome::Found { path, extra, .. } => {
            let mut s = Vec::new();
            let mut s2 = Vec::new();
            for (e, side) in path {
                let ev = d.alphabet().event(e).clone();
                if side != 2 {
                    s.push(ev.clone());
                }
                if side != 1 {
                    s2.push(ev);
                }
            }
            Verdict::violated(s, s2, Some(d.alphabet().event(extra).clone()))
        }
        SearchOutcome::Exhausted { cut: true, .. } => Verdict::BoundedPass {
            bound: bound.unwrap_or(0),
        },
        SearchOutcome::Exhausted { .. } => Verdict::Holds {
            by: if has_cycle(&d) {
                Proof::ExhaustiveStateSpace
            } else {
                Proof::ExhaustiveFinite
            },
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::chars;

    fn closed(events: &[&str], words: &[&str]) -> Automaton {
        let alpha = Alphabet::uniform(events.iter().copied(), EventFlags::default());
        let ws: Vec<Word> = words.iter().map(|w| chars(w)).collect();
        Automaton::from_words(alpha, &ws, true).unwrap()
    }

    fn moc_gap() -> (Automaton, ProjectionContext) {
        let ctx =
            ProjectionContext::from_names(&["a", "b", "c"], &["a", "c"], &["b", "c"], &[]).unwrap();
        (closed(&["a", "b", "c"], &["ba", "bac", "ac", "c"]), ctx)
    }

    #[test]
    fn pair_event_order_puts_epsilon_last() {
        let e = |l: Option<&str>, r: Option<&str>| PairEvent {
            left: l.map(crate::automaton::ev),
            right: r.map(crate::automaton::ev),
        };
        let mut v = [
            e(None, Some("a")),
            e(Some("b"), None),
            e(Some("a"), None),
            e(Some("a"), Some("a")),
        ];
        v.sort();
        assert_eq!(
            v.iter().map(PairEvent::name).collect::<Vec<_>>(),
            ["a|a", "a|-", "b|-", "-|a"]
        );
    }

    #[test]
    fn empty_sync_gives_interleavings() {
        let a = closed(&["a"], &["a"]);
        let pa = sync_pair_product(&a, &a, &BTreeSet::new()).unwrap();
        let strings = pa.enumerate_generated(2);
        let pairs: BTreeSet<(Word, Word)> = strings
            .iter()
            .map(|w| {
                let idx: Vec<usize> = w.iter().map(|p| pa.index_of(p).unwrap()).collect();
                pa.split(&idx)
            })
            .collect();
        assert_eq!(pairs.len(), 4);
    }

    #[test]
    fn sync_set_must_be_shared() {
        let a = closed(&["a"], &["a"]);
        let b = closed(&["b"], &["b"]);
        let sync = [crate::automaton::ev("a")].into_iter().collect();
        assert!(matches!(
            sync_pair_product(&a, &b, &sync),
            Err(Error::SyncSetNotShared(_))
        ));
    }

    #[test]
    fn moc_gap_pair_witnesses() {
        let (l, ctx) = moc_gap();
        assert_eq!(
            oc_pair_witness(&l, &ctx, &chars("c"), &chars("bc")).unwrap(),
            Some((chars("ac"), chars("bac")))
        );
        assert_eq!(
            moc_pair_witness(&l, &ctx, &chars("c"), &chars("bc")).unwrap(),
            None
        );
        assert_eq!(
            moc_pair_witness(&l, &ctx, &chars("ac"), &chars("c")).unwrap(),
            Some(chars("ac"))
        );
    }

    #[test]
    fn moc_gap_verdicts() {
        let (l, ctx) = moc_gap();
        assert_eq!(
            check_oc(&l, &ctx, None).unwrap(),
            Verdict::Holds {
                by: Proof::ExhaustiveFinite
            }
        );
        let moc = check_moc(&l, &ctx, Some(8)).unwrap();
        assert_eq!(moc, Verdict::violated(chars("c"), chars("bc"), None));
        assert_eq!(moc.to_string(), "violated: c | bc");
        assert!(!sufficient_moc(&ctx));
    }

    #[test]
    fn sufficient_condition_short_circuits() {
        let ctx =
            ProjectionContext::from_names(&["a", "b", "c"], &["c"], &["b", "c"], &[]).unwrap();
        let l = closed(&["a", "b", "c"], &["ba", "bac", "ac"]);
        assert_eq!(
            check_moc(&l, &ctx, None).unwrap(),
            Verdict::Holds {
                by: Proof::SufficientCondition
            }
        );
    }

    #[test]
    fn not_prefix_closed_is_rejected() {
        let (_, ctx) = moc_gap();
        let alpha = ctx.sigma().clone();
        let l = Automaton::from_words(alpha, &[chars("ab")], false).unwrap();
        assert!(matches!(
            check_oc(&l, &ctx, None),
            Err(Error::NotPrefixClosed(_))
        ));
    }

    #[test]
    fn map_q_relabels_components() {
        let (l, ctx) = moc_gap();
        let pa = sync_pair_product(&l, &l, &ctx.observable()).unwrap();
        let q = map_pairs_q(&pa, &ctx).unwrap();
        let e = |l: Option<&str>, r: Option<&str>| PairEvent {
            left: l.map(crate::automaton::ev),
            right: r.map(crate::automaton::ev),
        };
        // (ac, bac) is spelled (ε,b)(a,a)(c,c) in L ∥_{a,c} L and becomes (c, bc)
        assert!(q.generates(&[e(None, Some("b")), e(Some("c"), Some("c"))]));
        let q2 = map_pairs_q2(&pa, &ctx).unwrap();
        assert!(q2.generates(&[
            e(None, Some("b")),
            e(Some("a"), None),
            e(Some("c"), Some("c"))
        ]));
    }

    #[test]
    fn oc_violation_fails() {
        let ctx =
            ProjectionContext::from_names(&["a", "b", "c"], &["b", "c"], &["a", "b"], &[]).unwrap();
        let l = closed(&["a", "b", "c"], &["ab", "cb"]);
        assert_eq!(
            check_oc(&l, &ctx, None).unwrap(),
            Verdict::violated(chars("ab"), chars("b"), None)
        );
        assert!(check_moc(&l, &ctx, None).unwrap().is_violated());
    }

    #[test]
    fn loc_on_crafted_instance() {
        // s = u and s' = v are unobservable; after s' the controllable high
        // event h needs an observable detour o that s cannot copy.
        let ctx = ProjectionContext::from_names(&["h", "o", "u", "v"], &["h", "o"], &["h"], &["h"])
            .unwrap();
        let l = closed(&["h", "o", "u", "v"], &["uh", "voh"]);
        let v = check_loc(&l, &ctx, None).unwrap();
        assert_eq!(
            v,
            Verdict::violated(chars("u"), chars("v"), Some(crate::automaton::ev("h")))
        );
        let flat = ctx.with_highlevel(&ctx.events()).unwrap();
        let diag = closed(&["h", "u", "o"], &["h"]);
        assert!(check_loc(&diag, &flat, None).unwrap().holds());
    }
}
