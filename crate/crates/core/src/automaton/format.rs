//! The line-oriented `.des` text format.
//!
//! ```text
//! # comment
//! events: a[co h] b[o] c[c]
//! states: q0 q1 q2
//! initial: q0
//! marked: q0 q2
//! trans: q0 a q1
//! ```
//!
//! A line is a comment when its first non-blank character is `#`. Inside a
//! line `#` is an ordinary character, so it may appear in event names.
//! Missing flags mean the complement set: an event without `c` is
//! uncontrollable, without `o` unobservable, without `h` low-level.

use super::{Automaton, AutomatonError, EventFlags, EventId, RawAutomaton};
use std::fmt::Write;

fn syntax(line: usize, message: impl Into<String>) -> AutomatonError {
    AutomatonError::Syntax {
        line,
        message: message.into(),
    }
}

/// Parses an event list such as `a[co h] b [o] c`.
pub(crate) fn parse_event_list(
    text: &str,
    line: usize,
) -> Result<Vec<(EventId, EventFlags)>, AutomatonError> {
    let mut out: Vec<(EventId, EventFlags)> = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix('[') {
            let close = after
                .find(']')
                .ok_or_else(|| syntax(line, "unterminated flag list"))?;
            let flags = EventFlags::parse(&after[..close])
                .map_err(|c| syntax(line, format!("unknown event flag `{c}`")))?;
            let last = out
                .last_mut()
                .ok_or_else(|| syntax(line, "flag list without an event"))?;
            if last.1 != EventFlags::default() {
                return Err(syntax(
                    line,
                    format!("event `{}` has two flag lists", last.0),
                ));
            }
            last.1 = flags;
            rest = after[close + 1..].trim_start();
            continue;
        }
        let end = rest
            .find(|c: char| c.is_whitespace() || c == '[' || c == ']')
            .unwrap_or(rest.len());
        if end == 0 {
            return Err(syntax(line, "unexpected `]`"));
        }
        let id = EventId::new(&rest[..end])?;
        out.push((id, EventFlags::default()));
        rest = rest[end..].trim_start();
    }
    Ok(out)
}

/// Parses a `.des` document without checking cross-references.
pub fn parse_des(text: &str) -> Result<RawAutomaton, AutomatonError> {
    let mut raw = RawAutomaton::default();
    for (i, line) in text.lines().enumerate() {
        let n = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, body) = line
            .split_once(':')
            .ok_or_else(|| syntax(n, "expected `keyword: ...`"))?;
        let words = body.split_whitespace().map(str::to_string);
        match key.trim() {
            "events" => raw.events.extend(
                parse_event_list(body, n)?
                    .into_iter()
                    .map(|(e, f)| (e.as_str().to_string(), f)),
            ),
            "states" => raw.states.extend(words),
            "initial" => raw.initial.extend(words),
            "marked" => raw.marked.extend(words),
            "trans" => {
                let parts: Vec<String> = words.collect();
                match <[String; 3]>::try_from(parts) {
                    Ok([s, e, t]) => raw.transitions.push((s, e, t)),
                    Err(_) => {
                        return Err(syntax(n, "a transition is `trans: source event target`"))
                    }
                }
            }
            other => return Err(syntax(n, format!("unknown section `{other}`"))),
        }
    }
    Ok(raw)
}

/// Canonical serialization: fixed section order, states in declaration
/// order, transitions sorted by (source, event, target).
pub fn to_des(a: &Automaton) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "events:{}", prefixed(a.alphabet().to_string()));
    let _ = writeln!(out, "states:{}", prefixed(a.state_names().join(" ")));
    let _ = writeln!(out, "initial: {}", a.state_name(a.initial()));
    let marked: Vec<&str> = (0..a.num_states())
        .filter(|&q| a.is_marked(q))
        .map(|q| a.state_name(q))
        .collect();
    let _ = writeln!(out, "marked:{}", prefixed(marked.join(" ")));
    for (s, e, t) in a.transitions() {
        let _ = writeln!(
            out,
            "trans: {} {} {}",
            a.state_name(s),
            a.alphabet().event(e),
            a.state_name(t)
        );
    }
    out
}

fn prefixed(s: String) -> String {
    if s.is_empty() {
        s
    } else {
        format!(" {s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::validate;

    const SAMPLE: &str = "\
# a comment
events: a[co h] b[o] c[c] #
states: q0 q1 q2
initial: q0
marked: q0 q2
trans: q1 b q2
trans: q0 a q1
trans: q0 # q0
";

    #[test]
    fn parses_and_canonicalizes() {
        let a = validate(parse_des(SAMPLE).unwrap()).unwrap();
        assert_eq!(a.alphabet().len(), 4);
        let text = to_des(&a);
        assert_eq!(
            text,
            "events: # a[coh] b[o] c[c]\nstates: q0 q1 q2\ninitial: q0\nmarked: q0 q2\n\
             trans: q0 # q0\ntrans: q0 a q1\ntrans: q1 b q2\n"
        );
        let again = validate(parse_des(&text).unwrap()).unwrap();
        assert_eq!(again, a);
        assert_eq!(to_des(&again), text);
    }

    #[test]
    fn flags_may_be_detached_and_spaced() {
        let ev = parse_event_list("a [ c  o ] b", 1).unwrap();
        assert!(ev[0].1.controllable && ev[0].1.observable && !ev[0].1.highlevel);
        assert_eq!(ev[1].1, EventFlags::default());
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_des("events: a\nstates q0\n").unwrap_err();
        assert!(matches!(err, AutomatonError::Syntax { line: 2, .. }));
        let err = parse_des("events: a[x]\n").unwrap_err();
        assert!(matches!(err, AutomatonError::Syntax { line: 1, .. }));
        let err = parse_des("trans: q0 a\n").unwrap_err();
        assert!(matches!(err, AutomatonError::Syntax { line: 1, .. }));
    }

    #[test]
    fn empty_marked_section_round_trips() {
        let text = "events: a\nstates: 0\ninitial: 0\nmarked:\n";
        let a = validate(parse_des(text).unwrap()).unwrap();
        assert_eq!(to_des(&a), text);
    }
}
