//! Plain-text and JSON digraph formats.
//!
//! Text: the first non-comment line holds the vertex count `n`; every later
//! nonempty line is an arc `u v` (0-indexed). Anything after `#` on a line is
//! a comment. JSON: `{"n": 3, "arcs": [[0,1],[1,2],[2,0]]}` with arcs sorted
//! lexicographically.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};

pub fn parse(text: &str) -> Result<Digraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing vertex count".into(),
    })?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse {
            line: hline,
            msg: format!("malformed header {header:?}"),
        })?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: hline,
            msg: format!("malformed header {header:?}"),
        });
    }
    let mut d = Digraph::edgeless(n)?;
    for (line, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let (u, v) = match parts.as_slice() {
            [a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
                (Ok(u), Ok(v)) => (u, v),
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("bad arc {l:?}"),
                    })
                }
            },
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected `u v`, got {l:?}"),
                })
            }
        };
        d.check_vertex(u)?;
        d.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if d.has_arc(u, v) {
            return Err(Error::DuplicateArc(u, v));
        }
        d.set_arc(u, v);
    }
    Ok(d)
}

/// Canonical text: header line, then one arc per line in lexicographic order.
pub fn serialize(d: &Digraph) -> String {
    let mut s = format!("{}\n", d.n());
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigraphJson {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
}

impl From<&Digraph> for DigraphJson {
    fn from(d: &Digraph) -> Self {
        DigraphJson {
            n: d.n(),
            arcs: d.arcs().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl TryFrom<DigraphJson> for Digraph {
    type Error = Error;

    fn try_from(j: DigraphJson) -> Result<Digraph> {
        Digraph::from_arcs(j.n, j.arcs.into_iter().map(|[u, v]| (u, v)))
    }
}

pub fn to_json(d: &Digraph) -> String {
    serde_json::to_string(&DigraphJson::from(d)).expect("digraph json")
}

pub fn from_json(text: &str) -> Result<Digraph> {
    let j: DigraphJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    j.try_into()
}

/// Accepts either format, choosing JSON when the first non-blank character
/// is `{`.
pub fn parse_any(text: &str) -> Result<Digraph> {
    if text.trim_start().starts_with('{') {
        from_json(text)
    } else {
        parse(text)
    }
}
