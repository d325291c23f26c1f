//! The line-oriented source file format.
//!
//! ```text
//! # comments run to the end of the line
//! source finite
//! vertex x          # optional, for isolated vertices
//! edge a b
//!
//! source stencil
//! width 2
//! window 24         # optional override of the oracle window
//! edge 0 1 +1
//!
//! source builtin necklace k=4
//! ```

use super::{make_builtin, FiniteSource, Source, SourceError, StencilSource};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    SemanticError { line: usize, message: String },
    #[error("{0}")]
    Source(#[from] SourceError),
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
}

/// A whitespace-separated token with its 1-based column.
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices().chain([(code.len(), ' ')]) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &code[s..i],
                    column: code[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::SyntaxError {
        line,
        column,
        message: message.into(),
    }
}

fn semantic(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::SemanticError {
        line,
        message: message.into(),
    }
}

fn number<T: std::str::FromStr>(line: usize, tok: &Token<'_>, what: &str) -> Result<T, ParseError> {
    tok.text
        .parse()
        .map_err(|_| syntax(line, tok.column, format!("expected {what}, found `{}`", tok.text)))
}

fn arity(line: usize, toks: &[Token<'_>], n: usize) -> Result<(), ParseError> {
    match toks.get(n) {
        Some(extra) => Err(syntax(line, extra.column, format!("unexpected `{}`", extra.text))),
        None if toks.len() < n => {
            let col = toks.last().map_or(1, |t| t.column + t.text.len());
            Err(syntax(line, col, format!("`{}` needs {} arguments", toks[0].text, n - 1)))
        }
        None => Ok(()),
    }
}

pub fn parse_source(text: &str) -> Result<Box<dyn Source>, ParseError> {
    let lines: Vec<(usize, Vec<Token<'_>>)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty())
        .collect();
    let Some((first, head)) = lines.first() else {
        return Err(syntax(1, 1, "empty source file"));
    };
    if head[0].text != "source" {
        return Err(syntax(*first, head[0].column, "expected `source <kind>`"));
    }
    let Some(kind) = head.get(1) else {
        return Err(syntax(*first, head[0].column + 6, "missing source kind"));
    };
    let body = &lines[1..];
    match kind.text {
        "finite" => {
            arity(*first, head, 2)?;
            parse_finite(body)
        }
        "stencil" => {
            arity(*first, head, 2)?;
            parse_stencil(*first, body)
        }
        "builtin" => {
            if let Some((l, t)) = body.first() {
                return Err(syntax(*l, t[0].column, "builtin sources take no body"));
            }
            let Some(name) = head.get(2) else {
                return Err(syntax(*first, kind.column + kind.text.len(), "missing builtin name"));
            };
            let mut params = Vec::new();
            for tok in &head[3..] {
                let (k, v) = tok
                    .text
                    .split_once('=')
                    .ok_or_else(|| syntax(*first, tok.column, "expected key=value"))?;
                params.push((k, v));
            }
            let b = make_builtin(name.text, &params).map_err(|e| semantic(*first, e.to_string()))?;
            Ok(Box::new(b))
        }
        other => Err(syntax(*first, kind.column, format!("unknown source kind `{other}`"))),
    }
}

fn parse_finite(body: &[(usize, Vec<Token<'_>>)]) -> Result<Box<dyn Source>, ParseError> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut arcs = Vec::new();
    let mut intern = |s: &str, labels: &mut Vec<String>| -> usize {
        *index.entry(s.to_string()).or_insert_with(|| {
            labels.push(s.to_string());
            labels.len() - 1
        })
    };
    for (line, toks) in body {
        match toks[0].text {
            "vertex" => {
                arity(*line, toks, 2)?;
                intern(toks[1].text, &mut labels);
            }
            "edge" => {
                arity(*line, toks, 3)?;
                if toks[1].text == toks[2].text {
                    return Err(semantic(*line, format!("loop at `{}`", toks[1].text)));
                }
                let a = intern(toks[1].text, &mut labels);
                let b = intern(toks[2].text, &mut labels);
                arcs.push((a, b));
            }
            other => {
                return Err(syntax(*line, toks[0].column, format!("unknown directive `{other}`")))
            }
        }
    }
    if labels.is_empty() {
        return Err(semantic(body.first().map_or(1, |l| l.0), "finite source has no vertices"));
    }
    Ok(Box::new(FiniteSource::new("finite", labels, arcs)?))
}

fn parse_stencil(first: usize, body: &[(usize, Vec<Token<'_>>)]) -> Result<Box<dyn Source>, ParseError> {
    let mut width: Option<usize> = None;
    let mut window: Option<usize> = None;
    let mut rules = Vec::new();
    for (line, toks) in body {
        match toks[0].text {
            "width" => {
                arity(*line, toks, 2)?;
                if width.is_some() {
                    return Err(semantic(*line, "width given twice"));
                }
                let k: usize = number(*line, &toks[1], "a width")?;
                if k == 0 {
                    return Err(semantic(*line, "width must be positive"));
                }
                width = Some(k);
            }
            "window" => {
                arity(*line, toks, 2)?;
                window = Some(number(*line, &toks[1], "a window size")?);
            }
            "edge" => {
                arity(*line, toks, 4)?;
                let Some(k) = width else {
                    return Err(semantic(*line, "edge before width"));
                };
                let i: usize = number(*line, &toks[1], "a position")?;
                let j: usize = number(*line, &toks[2], "a position")?;
                let d: i64 = number(*line, &toks[3], "an offset")?;
                if i >= k || j >= k {
                    return Err(semantic(*line, format!("position out of range 0..{k}")));
                }
                if !(-1..=1).contains(&d) {
                    return Err(semantic(*line, format!("offset {d} outside -1, 0, +1")));
                }
                if d == 0 && i == j {
                    return Err(semantic(*line, "edge would be a loop"));
                }
                rules.push((i, j, d));
            }
            other => {
                return Err(syntax(*line, toks[0].column, format!("unknown directive `{other}`")))
            }
        }
    }
    let Some(k) = width else {
        return Err(semantic(first, "stencil source needs a width"));
    };
    let s = StencilSource::new(k, rules)?;
    Ok(Box::new(match window {
        Some(w) => s.with_window(w),
        None => s,
    }))
}

/// Opens `builtin:<name>` or a source file.
pub fn open_source(spec: &str) -> Result<Box<dyn Source>, ParseError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return Ok(Box::new(super::builtin_from_spec(name)?));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| ParseError::Io {
        path: spec.to_string(),
        message: e.to_string(),
    })?;
    parse_source(&text)
}
