use super::{Acceptance, OmegaAutomaton, RabinPair, StateId, StateSet};
use crate::lasso::Alphabet;
use std::collections::BTreeMap;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HoaError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unsupported acceptance condition '{0}'")]
    UnsupportedAcceptance(String),
    #[error("state {0} has overlapping edges")]
    Nondeterministic(usize),
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn letter_label(alphabet: &Alphabet, letter: usize) -> String {
    if alphabet.is_empty() {
        return "t".into();
    }
    (0..alphabet.len())
        .map(|i| {
            if letter & (1 << i) != 0 {
                i.to_string()
            } else {
                format!("!{i}")
            }
        })
        .collect::<Vec<_>>()
        .join("&")
}

/// HOA v1 text with explicit per-letter edges and state-based acceptance.
pub fn to_hoa(a: &OmegaAutomaton) -> String {
    let mut out = String::new();
    let n = a.state_count();
    let _ = writeln!(out, "HOA: v1");
    let _ = writeln!(out, "States: {n}");
    let _ = writeln!(out, "Start: {}", a.initial);
    let aps: Vec<String> = a.alphabet.names().iter().map(|s| quote(s)).collect();
    let _ = writeln!(out, "AP: {}{}{}", aps.len(), if aps.is_empty() { "" } else { " " }, aps.join(" "));
    let mut marks: Vec<Vec<usize>> = vec![Vec::new(); n];
    match &a.acceptance {
        Acceptance::Buchi(s) => {
            let _ = writeln!(out, "acc-name: Buchi");
            let _ = writeln!(out, "Acceptance: 1 Inf(0)");
            s.iter().for_each(|&q| marks[q].push(0));
        }
        Acceptance::CoBuchi(s) => {
            let _ = writeln!(out, "acc-name: co-Buchi");
            let _ = writeln!(out, "Acceptance: 1 Fin(0)");
            s.iter().for_each(|&q| marks[q].push(0));
        }
        Acceptance::Rabin(pairs) => {
            let _ = writeln!(out, "acc-name: Rabin {}", pairs.len());
            let cond = if pairs.is_empty() {
                "f".to_string()
            } else {
                (0..pairs.len())
                    .map(|i| format!("(Fin({})&Inf({}))", 2 * i, 2 * i + 1))
                    .collect::<Vec<_>>()
                    .join("|")
            };
            let _ = writeln!(out, "Acceptance: {} {}", 2 * pairs.len(), cond);
            for (i, p) in pairs.iter().enumerate() {
                p.fin.iter().for_each(|&q| marks[q].push(2 * i));
                p.inf.iter().for_each(|&q| marks[q].push(2 * i + 1));
            }
        }
    }
    let _ = writeln!(out, "properties: trans-labels explicit-labels state-acc deterministic complete");
    let _ = writeln!(out, "--BODY--");
    for q in 0..n {
        let _ = write!(out, "State: {q} {}", quote(&a.labels[q]));
        if !marks[q].is_empty() {
            let m: Vec<String> = marks[q].iter().map(|x| x.to_string()).collect();
            let _ = write!(out, " {{{}}}", m.join(" "));
        }
        let _ = writeln!(out);
        for (l, &t) in a.transitions[q].iter().enumerate() {
            let _ = writeln!(out, "[{}] {t}", letter_label(&a.alphabet, l));
        }
    }
    let _ = writeln!(out, "--END--");
    out
}

enum AccKind {
    Buchi,
    CoBuchi,
    Rabin(usize),
}

fn parse_acceptance(s: &str) -> Result<AccKind, HoaError> {
    let unsupported = || HoaError::UnsupportedAcceptance(s.to_string());
    let (count, cond) = s.trim().split_once(' ').ok_or_else(unsupported)?;
    let count: usize = count.parse().map_err(|_| unsupported())?;
    let cond: String = cond.chars().filter(|c| !c.is_whitespace()).collect();
    match (count, cond.as_str()) {
        (1, "Inf(0)") => return Ok(AccKind::Buchi),
        (1, "Fin(0)") => return Ok(AccKind::CoBuchi),
        (0, "f") => return Ok(AccKind::Rabin(0)),
        _ => {}
    }
    if count % 2 != 0 {
        return Err(unsupported());
    }
    let expected: String = (0..count / 2)
        .map(|i| format!("(Fin({})&Inf({}))", 2 * i, 2 * i + 1))
        .collect::<Vec<_>>()
        .join("|");
    if cond == expected || (count == 2 && cond == "Fin(0)&Inf(1)") {
        return Ok(AccKind::Rabin(count / 2));
    }
    Err(unsupported())
}

fn unquote(s: &str) -> String {
    let s = s.trim();
    let inner = s.strip_prefix('"').unwrap_or(s);
    let inner = inner.strip_suffix('"').unwrap_or(inner);
    let mut out = String::new();
    let mut chars = inner.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            out.extend(chars.next());
        } else {
            out.push(c);
        }
    }
    out
}

/// Letters of `alphabet` satisfying a conjunction of literals.
fn label_letters(label: &str, aps: usize, line: usize) -> Result<Vec<usize>, HoaError> {
    let mut must = 0usize;
    let mut must_not = 0usize;
    for lit in label.split('&').map(str::trim) {
        if lit == "t" {
            continue;
        }
        let (neg, idx) = match lit.strip_prefix('!') {
            Some(rest) => (true, rest.trim()),
            None => (false, lit),
        };
        let i: usize = idx.parse().map_err(|_| HoaError::Syntax {
            line,
            message: format!("unsupported label literal '{lit}'"),
        })?;
        if i >= aps {
            return Err(HoaError::Syntax {
                line,
                message: format!("AP index {i} out of range"),
            });
        }
        if neg {
            must_not |= 1 << i;
        } else {
            must |= 1 << i;
        }
    }
    Ok((0..1usize << aps)
        .filter(|l| l & must == must && l & must_not == 0)
        .collect())
}

/// Reads automata in the subset of HOA written by [`to_hoa`]: state-based
/// Büchi, co-Büchi or Rabin acceptance and labels that are conjunctions of
/// literals. Missing edges go to a rejecting sink.
pub fn from_hoa(text: &str) -> Result<OmegaAutomaton, HoaError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut states: Option<usize> = None;
    let mut start: StateId = 0;
    let mut aps: Vec<String> = Vec::new();
    let mut acc: Option<AccKind> = None;
    let syntax = |line: usize, message: &str| HoaError::Syntax {
        line,
        message: message.to_string(),
    };
    for (no, line) in lines.by_ref() {
        if line == "--BODY--" {
            break;
        }
        let Some((key, value)) = line.split_once(':') else {
            continue;
        };
        match key.trim() {
            "States" => states = Some(value.trim().parse().map_err(|_| syntax(no, "bad state count"))?),
            "Start" => start = value.trim().parse().map_err(|_| syntax(no, "bad start state"))?,
            "AP" => {
                let value = value.trim();
                let rest = value.split_once(' ').map(|x| x.1).unwrap_or("");
                aps = rest
                    .split('"')
                    .enumerate()
                    .filter(|(i, _)| i % 2 == 1)
                    .map(|(_, s)| s.to_string())
                    .collect();
            }
            "Acceptance" => acc = Some(parse_acceptance(value)?),
            _ => {}
        }
    }
    let acc = acc.ok_or_else(|| syntax(0, "missing Acceptance header"))?;
    let alphabet = Alphabet::new(&aps);
    if alphabet.names() != aps.as_slice() {
        // Letter indices follow the header order, which must be sorted here.
        return Err(syntax(0, "AP names must be distinct and sorted"));
    }
    let letters = alphabet.letter_count();
    let n_declared = states.unwrap_or(0);
    let mut rows: Vec<Vec<Option<StateId>>> = vec![vec![None; letters]; n_declared];
    let mut labels: Vec<String> = vec![String::new(); n_declared];
    let mut state_marks: BTreeMap<StateId, Vec<usize>> = BTreeMap::new();
    let mut current: Option<StateId> = None;
    for (no, line) in lines {
        if line == "--END--" {
            break;
        }
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("State:") {
            let rest = rest.trim();
            let (id_part, tail) = rest.split_once(' ').unwrap_or((rest, ""));
            let q: StateId = id_part.parse().map_err(|_| syntax(no, "bad state id"))?;
            if q >= rows.len() {
                rows.resize(q + 1, vec![None; letters]);
                labels.resize(q + 1, String::new());
            }
            let mut tail = tail.trim();
            if tail.starts_with('"') {
                let close = tail[1..]
                    .char_indices()
                    .find(|&(i, c)| c == '"' && !tail[1..][..i].ends_with('\\'))
                    .map(|(i, _)| i + 1)
                    .ok_or_else(|| syntax(no, "unterminated state name"))?;
                labels[q] = unquote(&tail[..=close]);
                tail = tail[close + 1..].trim();
            }
            if let Some(body) = tail.strip_prefix('{') {
                let body = body.trim_end_matches('}');
                let m: Result<Vec<usize>, _> = body.split_whitespace().map(str::parse).collect();
                state_marks.insert(q, m.map_err(|_| syntax(no, "bad acceptance marks"))?);
            }
            current = Some(q);
        } else if let Some(rest) = line.strip_prefix('[') {
            let q = current.ok_or_else(|| syntax(no, "edge outside a state"))?;
            let (label, target) = rest.split_once(']').ok_or_else(|| syntax(no, "unterminated label"))?;
            let target: StateId = target.trim().parse().map_err(|_| syntax(no, "bad edge target"))?;
            for l in label_letters(label, aps.len(), no)? {
                if rows[q][l].is_some_and(|t| t != target) {
                    return Err(HoaError::Nondeterministic(q));
                }
                rows[q][l] = Some(target);
            }
        } else {
            return Err(syntax(no, "unexpected line in body"));
        }
    }
    let mut n = rows.len();
    let max_target = rows.iter().flatten().flatten().copied().max().unwrap_or(0);
    if max_target >= n {
        rows.resize(max_target + 1, vec![None; letters]);
        labels.resize(max_target + 1, String::new());
        n = rows.len();
    }
    let needs_sink = rows.iter().any(|r| r.iter().any(Option::is_none));
    let sink = n;
    let mut transitions: Vec<Vec<StateId>> = rows
        .into_iter()
        .map(|r| r.into_iter().map(|t| t.unwrap_or(sink)).collect())
        .collect();
    if needs_sink {
        transitions.push(vec![sink; letters]);
        labels.push("sink".into());
    }
    let in_set = |set: usize| -> StateSet {
        state_marks
            .iter()
            .filter(|(_, m)| m.contains(&set))
            .map(|(&q, _)| q)
            .collect()
    };
    let acceptance = match acc {
        AccKind::Buchi => Acceptance::Buchi(in_set(0)),
        AccKind::CoBuchi => {
            let mut s = in_set(0);
            if needs_sink {
                s.insert(sink);
            }
            Acceptance::CoBuchi(s)
        }
        AccKind::Rabin(k) => Acceptance::Rabin(
            (0..k)
                .map(|i| {
                    let mut fin = in_set(2 * i);
                    if needs_sink {
                        fin.insert(sink);
                    }
                    RabinPair {
                        fin,
                        inf: in_set(2 * i + 1),
                    }
                })
                .collect(),
        ),
    };
    Ok(OmegaAutomaton {
        alphabet,
        labels,
        initial: start,
        transitions,
        acceptance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lasso::LassoWord;

    fn sample() -> OmegaAutomaton {
        OmegaAutomaton {
            alphabet: Alphabet::new(["p", "q"]),
            labels: vec!["a \"quoted\"".into(), "b".into()],
            initial: 0,
            transitions: vec![vec![0, 1, 0, 1], vec![1, 1, 0, 0]],
            acceptance: Acceptance::Rabin(vec![
                RabinPair {
                    fin: [0].into_iter().collect(),
                    inf: [1].into_iter().collect(),
                },
                RabinPair {
                    fin: StateSet::new(),
                    inf: [0].into_iter().collect(),
                },
            ]),
        }
    }

    #[test]
    fn header_shapes() {
        let text = to_hoa(&sample());
        assert!(text.contains("acc-name: Rabin 2"));
        assert!(text.contains("Acceptance: 4 (Fin(0)&Inf(1))|(Fin(2)&Inf(3))"));
        assert!(text.contains("AP: 2 \"p\" \"q\""));
        let b = OmegaAutomaton {
            acceptance: Acceptance::Buchi([1].into_iter().collect()),
            ..sample()
        };
        let text = to_hoa(&b);
        assert!(text.contains("acc-name: Buchi"));
        assert!(text.contains("Acceptance: 1 Inf(0)"));
    }

    #[test]
    fn roundtrip() {
        let a = sample();
        let b = from_hoa(&to_hoa(&a)).unwrap();
        assert_eq!(a.transitions, b.transitions);
        assert_eq!(a.acceptance, b.acceptance);
        assert_eq!(a.labels, b.labels);
        assert_eq!(to_hoa(&a), to_hoa(&b));
    }

    #[test]
    fn partial_input_is_completed_with_rejecting_sink() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 1 \"p\"\nAcceptance: 1 Inf(0)\n--BODY--\nState: 0 {0}\n[0] 0\n--END--\n";
        let a = from_hoa(text).unwrap();
        assert_eq!(a.state_count(), 2);
        assert!(a.accepts(&LassoWord::parse("; {p}").unwrap()));
        assert!(!a.accepts(&LassoWord::parse("{p} ; {}").unwrap()));
    }

    #[test]
    fn rejects_unknown_acceptance() {
        let text = "HOA: v1\nStates: 1\nStart: 0\nAP: 0\nAcceptance: 2 Inf(0)&Inf(1)\n--BODY--\n--END--\n";
        assert!(matches!(from_hoa(text), Err(HoaError::UnsupportedAcceptance(_))));
    }
}
