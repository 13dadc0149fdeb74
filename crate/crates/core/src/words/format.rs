//! The `R1WORD 1` presentation file format.
//!
//! ```text
//! R1WORD 1
//! stem 0
//! stage 3 0 1
//! tail periodic 1
//! ```
//!
//! `#` starts a comment; blank lines are ignored.

use std::fmt::Write;

use super::{parse_word, Stage, Tail, WordPresentation};
use crate::error::{Error, Result};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

pub fn parse_presentation(text: &str) -> Result<WordPresentation> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (ln, header) = lines.next().ok_or_else(|| err(1, "empty file"))?;
    if header.split_whitespace().collect::<Vec<_>>() != ["R1WORD", "1"] {
        return Err(err(ln, format!("expected header `R1WORD 1`, got `{header}`")));
    }
    let (ln, stem_line) = lines.next().ok_or_else(|| err(ln, "missing stem line"))?;
    let stem = match stem_line.split_whitespace().collect::<Vec<_>>()[..] {
        ["stem", w] => parse_word(w).map_err(|e| err(ln, e.to_string()))?,
        _ => return Err(err(ln, format!("expected `stem <word>`, got `{stem_line}`"))),
    };

    let mut stages = Vec::new();
    let mut tail = None;
    let mut tail_line = 0;
    for (ln, line) in lines {
        if tail.is_some() {
            return Err(err(ln, "content after the tail line"));
        }
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("stage") => {
                let nums = toks
                    .map(|t| t.parse::<u64>().map_err(|_| err(ln, format!("bad natural `{t}`"))))
                    .collect::<Result<Vec<_>>>()?;
                let (&q, spacers) = nums.split_first().ok_or_else(|| err(ln, "stage needs a cut"))?;
                let stage = Stage::new(q as usize, spacers.to_vec()).map_err(|e| err(ln, e.to_string()))?;
                stages.push(stage);
            }
            Some("tail") => {
                tail_line = ln;
                tail = Some(match toks.collect::<Vec<_>>()[..] {
                    ["none"] => Tail::Finite,
                    ["periodic", k] => Tail::Periodic(k.parse().map_err(|_| err(ln, format!("bad period `{k}`")))?),
                    _ => return Err(err(ln, format!("bad tail line `{line}`"))),
                });
            }
            _ => return Err(err(ln, format!("unexpected line `{line}`"))),
        }
    }
    let tail = tail.ok_or_else(|| err(text.lines().count(), "missing tail line"))?;
    WordPresentation::new(stem, stages, tail).map_err(|e| err(tail_line, e.to_string()))
}

pub fn write_presentation(p: &WordPresentation) -> String {
    let mut out = String::from("R1WORD 1\n");
    writeln!(out, "stem {}", p.stem()).unwrap();
    for s in p.stages() {
        write!(out, "stage {}", s.cut).unwrap();
        for a in &s.spacers {
            write!(out, " {a}").unwrap();
        }
        out.push('\n');
    }
    match p.tail() {
        Tail::Finite => out.push_str("tail none\n"),
        Tail::Periodic(k) => writeln!(out, "tail periodic {k}").unwrap(),
    }
    out
}
