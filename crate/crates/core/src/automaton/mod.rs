//! Finite automata over named events.
//!
//! An [`Automaton`] is a (possibly nondeterministic) acceptor with a single
//! initial state and a set of marked states. It denotes two languages: the
//! generated language `L(A)` (every string with a run) and the marked
//! language `L_m(A)` (every string with a run ending in a marked state).
//!
//! Events live in an [`Alphabet`], which keeps them sorted by name and
//! attaches controllable / observable / high-level flags to each. Every
//! algorithm in this crate iterates events in alphabet order, so strings are
//! produced and compared in length-lexicographic order with respect to event
//! names.

mod dot;
mod format;
mod ops;

pub use dot::to_dot;
pub use format::{parse_des, to_des};
pub use ops::{
    accessible, combine, complement, complete, concat_sigma_star, determinize, enumerate,
    equivalence_witness, equivalent, has_cycle, included, is_nonblocking, member, minimize,
    prefix_closure, to_dfa, trim, Inclusion, LanguageSample, SetOp,
};

pub(crate) use ops::relabel_determinize;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use thiserror::Error;

/// Errors raised while building, validating or parsing automata.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("invalid event name `{0}`")]
    InvalidEvent(String),
    #[error("invalid state name `{0}`")]
    InvalidState(String),
    #[error("duplicate event `{0}`")]
    DuplicateEvent(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("reference to undeclared state `{0}`")]
    DanglingState(String),
    #[error("event `{0}` is not in the alphabet")]
    UnknownEvent(String),
    #[error("more than one initial state: {}", .0.join(", "))]
    MultipleInitial(Vec<String>),
    #[error("no initial state declared")]
    MissingInitial,
    #[error("operands are over different alphabets")]
    AlphabetMismatch,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// Name of an event.
///
/// Names are non-empty and drawn from `[A-Za-z0-9_@#$'.|-]`. The `|` and `-`
/// characters exist so that pair events of relational automata can be
/// rendered as `left|right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventId(String);

impl EventId {
    pub fn new(name: impl Into<String>) -> Result<Self, AutomatonError> {
        let name = name.into();
        let ok = !name.is_empty()
            && name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || "_@#$'.|-".contains(c));
        if ok {
            Ok(EventId(name))
        } else {
            Err(AutomatonError::InvalidEvent(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EventId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Shorthand for building an event name that is known to be valid.
///
/// # Panics
/// Panics on a malformed name; meant for literals in code and tests.
pub fn ev(name: &str) -> EventId {
    EventId::new(name).unwrap_or_else(|e| panic!("{e}"))
}

/// A string over events.
pub type Word = Vec<EventId>;

/// Builds a word from single-character event names, e.g. `chars("bac")`.
pub fn chars(s: &str) -> Word {
    s.chars().map(|c| ev(&c.to_string())).collect()
}

/// Builds a word from whitespace-separated event names.
pub fn tokens(s: &str) -> Word {
    s.split_whitespace().map(ev).collect()
}

/// Renders a word for humans: `ε` when empty, concatenated when every event
/// name is a single character, space-separated otherwise.
pub fn format_word(w: &[EventId]) -> String {
    if w.is_empty() {
        return "ε".to_string();
    }
    let sep = if w.iter().all(|e| e.as_str().chars().count() == 1) {
        ""
    } else {
        " "
    };
    w.iter().map(EventId::as_str).collect::<Vec<_>>().join(sep)
}

/// Attribute flags carried by an event.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EventFlags {
    pub controllable: bool,
    pub observable: bool,
    pub highlevel: bool,
}

impl EventFlags {
    pub const ALL: EventFlags = EventFlags {
        controllable: true,
        observable: true,
        highlevel: true,
    };

    /// Parses a flag string such as `"co"` or `"c o h"`.
    pub fn parse(spec: &str) -> Result<Self, char> {
        let mut flags = EventFlags::default();
        for c in spec.chars().filter(|c| !c.is_whitespace()) {
            match c {
                'c' => flags.controllable = true,
                'o' => flags.observable = true,
                'h' => flags.highlevel = true,
                other => return Err(other),
            }
        }
        Ok(flags)
    }

    /// Canonical rendering used by the `.des` serializer (`c`, `o`, `h` in that order).
    pub fn render(&self) -> String {
        let mut s = String::new();
        if self.controllable {
            s.push('c');
        }
        if self.observable {
            s.push('o');
        }
        if self.highlevel {
            s.push('h');
        }
        s
    }
}

/// A finite set of events, sorted by name, each with its flags.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    events: Vec<EventId>,
    flags: Vec<EventFlags>,
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an alphabet, rejecting duplicate names.
    pub fn from_events<I>(events: I) -> Result<Self, AutomatonError>
    where
        I: IntoIterator<Item = (EventId, EventFlags)>,
    {
        let mut alphabet = Alphabet::new();
        for (e, f) in events {
            if !alphabet.insert(e.clone(), f) {
                return Err(AutomatonError::DuplicateEvent(e.0));
            }
        }
        Ok(alphabet)
    }

    /// Alphabet of the given names with identical flags.
    pub fn uniform<'a>(names: impl IntoIterator<Item = &'a str>, flags: EventFlags) -> Self {
        let mut alphabet = Alphabet::new();
        for n in names {
            alphabet.insert(ev(n), flags);
        }
        alphabet
    }

    /// Parses a declaration in `.des` syntax, e.g. `a[co] b[o] c[c]`.
    pub fn parse(decl: &str) -> Result<Self, AutomatonError> {
        let entries = format::parse_event_list(decl, 0)?;
        Alphabet::from_events(entries)
    }

    /// Inserts an event; returns `false` (leaving the alphabet unchanged) if
    /// the name is already present.
    pub fn insert(&mut self, event: EventId, flags: EventFlags) -> bool {
        match self.events.binary_search(&event) {
            Ok(_) => false,
            Err(pos) => {
                self.events.insert(pos, event);
                self.flags.insert(pos, flags);
                true
            }
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[EventId] {
        &self.events
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EventId, EventFlags)> + '_ {
        self.events.iter().zip(self.flags.iter().copied())
    }

    pub fn index_of(&self, event: &EventId) -> Option<usize> {
        self.events.binary_search(event).ok()
    }

    pub fn contains(&self, event: &EventId) -> bool {
        self.index_of(event).is_some()
    }

    pub fn event(&self, index: usize) -> &EventId {
        &self.events[index]
    }

    pub fn flags_at(&self, index: usize) -> EventFlags {
        self.flags[index]
    }

    pub fn flags(&self, event: &EventId) -> Option<EventFlags> {
        self.index_of(event).map(|i| self.flags[i])
    }

    pub fn set_flags(&mut self, event: &EventId, flags: EventFlags) -> bool {
        match self.index_of(event) {
            Some(i) => {
                self.flags[i] = flags;
                true
            }
            None => false,
        }
    }

    pub fn event_set(&self) -> BTreeSet<EventId> {
        self.events.iter().cloned().collect()
    }

    pub(crate) fn select(&self, pick: impl Fn(EventFlags) -> bool) -> BTreeSet<EventId> {
        self.iter()
            .filter(|(_, f)| pick(*f))
            .map(|(e, _)| e.clone())
            .collect()
    }

    pub fn controllable(&self) -> BTreeSet<EventId> {
        self.select(|f| f.controllable)
    }

    pub fn uncontrollable(&self) -> BTreeSet<EventId> {
        self.select(|f| !f.controllable)
    }

    pub fn observable(&self) -> BTreeSet<EventId> {
        self.select(|f| f.observable)
    }

    pub fn highlevel(&self) -> BTreeSet<EventId> {
        self.select(|f| f.highlevel)
    }

    /// True when both alphabets contain the same event names (flags ignored).
    pub fn same_events(&self, other: &Alphabet) -> bool {
        self.events == other.events
    }

    pub fn is_subset_of(&self, other: &Alphabet) -> bool {
        self.events.iter().all(|e| other.contains(e))
    }

    /// Union of two alphabets; flags of `self` win on shared events.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut out = self.clone();
        for (e, f) in other.iter() {
            out.insert(e.clone(), f);
        }
        out
    }

    /// The sub-alphabet of events in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<EventId>) -> Alphabet {
        let mut out = Alphabet::new();
        for (e, f) in self.iter() {
            if keep.contains(e) {
                out.insert(e.clone(), f);
            }
        }
        out
    }

    /// Membership mask over event indices.
    pub fn mask(&self, set: &BTreeSet<EventId>) -> Vec<bool> {
        self.events.iter().map(|e| set.contains(e)).collect()
    }

    /// Translates a word into event indices; `None` if it uses a foreign event.
    pub fn encode(&self, w: &[EventId]) -> Option<Vec<usize>> {
        w.iter().map(|e| self.index_of(e)).collect()
    }

    pub fn decode(&self, w: &[usize]) -> Word {
        w.iter().map(|&i| self.events[i].clone()).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .iter()
            .map(|(e, fl)| {
                let r = fl.render();
                if r.is_empty() {
                    e.to_string()
                } else {
                    format!("{e}[{r}]")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Unvalidated automaton description, as produced by the parser.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawAutomaton {
    pub events: Vec<(String, EventFlags)>,
    pub states: Vec<String>,
    pub initial: Vec<String>,
    pub marked: Vec<String>,
    pub transitions: Vec<(String, String, String)>,
}

/// Checks every structural invariant and builds an [`Automaton`].
pub fn validate(raw: RawAutomaton) -> Result<Automaton, AutomatonError> {
    let mut alphabet = Alphabet::new();
    for (name, flags) in raw.events {
        let id = EventId::new(name.clone())?;
        if !alphabet.insert(id, flags) {
            return Err(AutomatonError::DuplicateEvent(name));
        }
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, s) in raw.states.iter().enumerate() {
        if s.is_empty() || s.chars().any(|c| c.is_whitespace() || c == '[' || c == ']') {
            return Err(AutomatonError::InvalidState(s.clone()));
        }
        if index.insert(s.as_str(), i).is_some() {
            return Err(AutomatonError::DuplicateState(s.clone()));
        }
    }
    let lookup = |s: &String| {
        index
            .get(s.as_str())
            .copied()
            .ok_or_else(|| AutomatonError::DanglingState(s.clone()))
    };
    let initial = match raw.initial.as_slice() {
        [] => return Err(AutomatonError::MissingInitial),
        [one] => lookup(one)?,
        many => return Err(AutomatonError::MultipleInitial(many.to_vec())),
    };
    let mut marked = vec![false; raw.states.len()];
    for m in &raw.marked {
        marked[lookup(m)?] = true;
    }
    let mut delta = vec![Vec::new(); raw.states.len()];
    for (src, event, dst) in &raw.transitions {
        let s = lookup(src)?;
        let t = lookup(dst)?;
        let e = EventId::new(event.clone())
            .ok()
            .and_then(|id| alphabet.index_of(&id))
            .ok_or_else(|| AutomatonError::UnknownEvent(event.clone()))?;
        delta[s].push((e, t));
    }
    Ok(Automaton::from_parts(
        alphabet,
        Some(raw.states),
        initial,
        marked,
        delta,
    ))
}

/// A validated finite automaton. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    states: Vec<String>,
    initial: usize,
    marked: Vec<bool>,
    /// Outgoing transitions per state, sorted by (event, target), no duplicates.
    delta: Vec<Vec<(usize, usize)>>,
    deterministic: bool,
}

impl Automaton {
    /// Assembles an automaton from index-based parts. States are named by
    /// index when `names` is `None`.
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        names: Option<Vec<String>>,
        initial: usize,
        marked: Vec<bool>,
        mut delta: Vec<Vec<(usize, usize)>>,
    ) -> Self {
        let n = delta.len();
        debug_assert_eq!(marked.len(), n);
        debug_assert!(initial < n);
        let states = names.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect());
        let mut deterministic = true;
        for row in &mut delta {
            row.sort_unstable();
            row.dedup();
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                deterministic = false;
            }
        }
        Automaton {
            alphabet,
            states,
            initial,
            marked,
            delta,
            deterministic,
        }
    }

    /// The automaton with one unmarked state and no transitions (empty marked language).
    pub fn empty(alphabet: Alphabet) -> Self {
        Automaton::from_parts(alphabet, None, 0, vec![false], vec![Vec::new()])
    }

    /// The automaton marking exactly `{ε}`.
    pub fn epsilon(alphabet: Alphabet) -> Self {
        Automaton::from_parts(alphabet, None, 0, vec![true], vec![Vec::new()])
    }

    /// The automaton marking `Σ*`.
    pub fn universal(alphabet: Alphabet) -> Self {
        let row = (0..alphabet.len()).map(|e| (e, 0)).collect();
        Automaton::from_parts(alphabet, None, 0, vec![true], vec![row])
    }

    /// Builds a trie automaton marking the given words. With `prefix_closed`
    /// every prefix is marked as well.
    pub fn from_words(
        alphabet: Alphabet,
        words: &[Word],
        prefix_closed: bool,
    ) -> Result<Self, AutomatonError> {
        let mut delta: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut marked = vec![prefix_closed];
        for w in words {
            let mut q = 0;
            for e in w {
                let idx = alphabet
                    .index_of(e)
                    .ok_or_else(|| AutomatonError::UnknownEvent(e.to_string()))?;
                q = match delta[q].iter().find(|(x, _)| *x == idx) {
                    Some(&(_, t)) => t,
                    None => {
                        delta.push(Vec::new());
                        marked.push(prefix_closed);
                        let t = delta.len() - 1;
                        delta[q].push((idx, t));
                        t
                    }
                };
            }
            marked[q] = true;
        }
        Ok(Automaton::from_parts(alphabet, None, 0, marked, delta))
    }

    /// Parses and validates a `.des` document.
    pub fn from_des(text: &str) -> Result<Self, AutomatonError> {
        validate(parse_des(text)?)
    }

    pub fn to_des(&self) -> String {
        to_des(self)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_marked(&self, q: usize) -> bool {
        self.marked[q]
    }

    pub fn marked(&self) -> &[bool] {
        &self.marked
    }

    /// Sorted `(event, target)` pairs leaving `q`.
    pub fn successors(&self, q: usize) -> &[(usize, usize)] {
        &self.delta[q]
    }

    pub(crate) fn delta(&self) -> &[Vec<(usize, usize)>] {
        &self.delta
    }

    /// Successor of `q` under `event` in a deterministic automaton.
    pub fn step(&self, q: usize, event: usize) -> Option<usize> {
        let row = &self.delta[q];
        let start = row.partition_point(|&(e, _)| e < event);
        row.get(start).filter(|(e, _)| *e == event).map(|&(_, t)| t)
    }

    /// All successors of `q` under `event`.
    pub fn targets(&self, q: usize, event: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.delta[q];
        let start = row.partition_point(|&(e, _)| e < event);
        row[start..]
            .iter()
            .take_while(move |(e, _)| *e == event)
            .map(|&(_, t)| t)
    }

    /// Iterates `(source, event, target)` in canonical order.
    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().map(move |&(e, t)| (s, e, t)))
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    /// State reached from the initial state by `w` in a deterministic automaton.
    pub fn run(&self, w: &[usize]) -> Option<usize> {
        w.iter().try_fold(self.initial, |q, &e| self.step(q, e))
    }

    /// Same automaton viewed over a larger alphabet, without adding transitions.
    pub fn with_alphabet(&self, superset: &Alphabet) -> Result<Self, AutomatonError> {
        if !self.alphabet.is_subset_of(superset) {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let remap: Vec<usize> = self
            .alphabet
            .events()
            .iter()
            .map(|e| superset.index_of(e).expect("subset checked"))
            .collect();
        let delta = self
            .delta
            .iter()
            .map(|row| row.iter().map(|&(e, t)| (remap[e], t)).collect())
            .collect();
        Ok(Automaton::from_parts(
            superset.clone(),
            Some(self.states.clone()),
            self.initial,
            self.marked.clone(),
            delta,
        ))
    }

    /// Replaces event flags (names must match).
    pub fn with_flags(&self, alphabet: &Alphabet) -> Result<Self, AutomatonError> {
        if !self.alphabet.same_events(alphabet) {
            return Err(AutomatonError::AlphabetMismatch);
        }
        let mut out = self.clone();
        out.alphabet = alphabet.clone();
        Ok(out)
    }

    /// Same transition structure started from `q`.
    pub fn rooted(&self, q: usize) -> Self {
        let mut out = self.clone();
        out.initial = q;
        out
    }

    /// Marks every state, so the marked language becomes the generated one.
    pub fn mark_all(&self) -> Self {
        let mut out = self.clone();
        out.marked = vec![true; self.num_states()];
        out
    }

    /// Renames states to their index in breadth-first discovery order and
    /// drops unreachable states.
    pub fn renumber(&self) -> Self {
        let mut order = vec![usize::MAX; self.num_states()];
        let mut queue = std::collections::VecDeque::from([self.initial]);
        let mut seq = Vec::new();
        order[self.initial] = 0;
        seq.push(self.initial);
        while let Some(q) = queue.pop_front() {
            for &(_, t) in &self.delta[q] {
                if order[t] == usize::MAX {
                    order[t] = seq.len();
                    seq.push(t);
                    queue.push_back(t);
                }
            }
        }
        let delta = seq
            .iter()
            .map(|&q| self.delta[q].iter().map(|&(e, t)| (e, order[t])).collect())
            .collect();
        let marked = seq.iter().map(|&q| self.marked[q]).collect();
        Automaton::from_parts(self.alphabet.clone(), None, 0, marked, delta)
    }

    /// State, transition and event counts.
    pub fn stats(&self) -> Stats {
        Stats {
            states: self.num_states(),
            transitions: self.num_transitions(),
            events: self.alphabet.len(),
        }
    }
}

/// Size summary of an automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub states: usize,
    pub transitions: usize,
    pub events: usize,
}
