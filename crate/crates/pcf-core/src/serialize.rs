//! Text serialization of strategies.
//!
//! The format lists one view-function entry per line — the P-view as
//! `move@justifier` tokens followed by the response — under a header
//! recording the domain and codomain types, the window, and the norm.
//! Entries appear in view order, so equal strategies serialize to equal
//! bytes and the serialized form doubles as a deterministic sort key.
//! Only strategies over type-shaped arenas (contexts to types) can be
//! written.

use crate::arena::{Arena, Move, MoveKind, Node};
use crate::error::{Error, Result};
use crate::parse::parse_type;
use crate::strategy::Strategy;
use crate::syntax::Ty;

fn max_answers(n: &Node) -> u32 {
    n.children
        .iter()
        .map(max_answers)
        .max()
        .unwrap_or(0)
        .max(n.answers)
}

/// Renders `f` in the textual format.
pub fn write_strategy(f: &Strategy) -> Result<String> {
    let window = f
        .dom()
        .roots
        .iter()
        .chain(f.cod().roots.iter())
        .map(max_answers)
        .max()
        .unwrap_or(0);
    let dom_tys = f.dom().root_types(window)?;
    let cod_tys = f.cod().root_types(window)?;
    if cod_tys.len() != 1 {
        return Err(Error::ShapeMismatch(
            "serialization expects a single-rooted codomain".into(),
        ));
    }
    let mut out = String::new();
    out.push_str("pcf-strategy v1\n");
    out.push_str("dom:");
    for (i, t) in dom_tys.iter().enumerate() {
        out.push_str(if i == 0 { " " } else { ", " });
        out.push_str(&t.to_string());
    }
    out.push('\n');
    out.push_str(&format!("cod: {}\n", cod_tys[0]));
    out.push_str(&format!("window: {}\n", window));
    out.push_str(&format!("norm: {}\n", f.norm()));
    for (key, (rm, rj)) in f.entries() {
        let mut line = String::new();
        for (i, (m, j)) in key.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            match j {
                None => line.push_str(&m.to_string()),
                Some(j) => line.push_str(&format!("{}@{}", m, j)),
            }
        }
        line.push_str(&format!(" -> {}@{}", rm, rj));
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

fn parse_move(tok: &str) -> Result<Move> {
    let bad = || Error::Serial(format!("malformed move '{}'", tok));
    let (kind, path) = match tok.split_once(':') {
        Some((k, p)) => (k, p),
        None => return Err(bad()),
    };
    let kind = if kind == "q" {
        MoveKind::Question
    } else if let Some(v) = kind.strip_prefix('a') {
        MoveKind::Answer(v.parse().map_err(|_| bad())?)
    } else {
        return Err(bad());
    };
    let path = path
        .split('.')
        .map(|c| c.parse::<u16>().map_err(|_| bad()))
        .collect::<Result<Vec<u16>>>()?;
    Ok(Move { path, kind })
}

fn parse_just(tok: &str) -> Result<(Move, usize)> {
    let (m, j) = tok
        .rsplit_once('@')
        .ok_or_else(|| Error::Serial(format!("move '{}' lacks a justifier", tok)))?;
    Ok((
        parse_move(m)?,
        j.parse()
            .map_err(|_| Error::Serial(format!("bad justifier in '{}'", tok)))?,
    ))
}

/// Parses the textual format back into a validated strategy.
pub fn read_strategy(text: &str) -> Result<Strategy> {
    let mut lines = text.lines();
    let mut header = |tag: &str| -> Result<String> {
        let line = lines
            .next()
            .ok_or_else(|| Error::Serial(format!("missing header line '{}'", tag)))?;
        line.strip_prefix(tag)
            .map(|r| r.trim().to_string())
            .ok_or_else(|| Error::Serial(format!("expected header line '{}'", tag)))
    };
    if header("pcf-strategy")? != "v1" {
        return Err(Error::Serial("unsupported strategy format version".into()));
    }
    let dom_line = header("dom:")?;
    let cod_line = header("cod:")?;
    let window: u32 = header("window:")?
        .parse()
        .map_err(|_| Error::Serial("bad window".into()))?;
    let norm: usize = header("norm:")?
        .parse()
        .map_err(|_| Error::Serial("bad norm".into()))?;
    let dom_tys = if dom_line.is_empty() {
        Vec::new()
    } else {
        dom_line
            .split(',')
            .map(|s| parse_type(s.trim()))
            .collect::<Result<Vec<Ty>>>()?
    };
    let cod_ty = parse_type(&cod_line)?;
    let mut f = Strategy::bot(
        Arena::of_context(&dom_tys, window),
        Arena::of_type(&cod_ty, window),
    );
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (key_part, resp_part) = line
            .split_once(" -> ")
            .ok_or_else(|| Error::Serial(format!("entry line lacks '->': {}", line)))?;
        let mut key = Vec::new();
        for (i, tok) in key_part.split_whitespace().enumerate() {
            if i == 0 {
                key.push((parse_move(tok)?, None));
            } else {
                let (m, j) = parse_just(tok)?;
                key.push((m, Some(j)));
            }
        }
        f.insert(key, parse_just(resp_part.trim())?)?;
    }
    if f.norm() != norm {
        return Err(Error::Serial(format!(
            "norm header says {} but {} entries were read",
            norm,
            f.norm()
        )));
    }
    f.validate()?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::denote::Denoter;
    use crate::parse::parse_term;

    fn dn(src: &str, w: u32) -> Strategy {
        Denoter::new(w, 16)
            .denote_closed(&parse_term(src).unwrap())
            .unwrap()
    }

    #[test]
    fn round_trips_bit_exactly() {
        let w = 3;
        for src in [
            "omega",
            "2",
            "\\x:nat. x",
            "\\x:nat. case[2] x 1 0",
            "\\f:nat -> nat. f (f 0)",
            "\\f:(nat -> nat) -> nat. f (\\x:nat. case[2] x 0 2)",
        ] {
            let f = dn(src, w);
            let text = write_strategy(&f).unwrap();
            let g = read_strategy(&text).unwrap();
            assert_eq!(g, f, "{}", src);
            assert_eq!(write_strategy(&g).unwrap(), text, "{}", src);
        }
    }

    #[test]
    fn header_records_type_window_norm() {
        let f = dn("\\x:nat. x", 3);
        let text = write_strategy(&f).unwrap();
        assert!(text.starts_with(
            "pcf-strategy v1\ndom:\ncod: nat -> nat\nwindow: 3\nnorm: 4\n"
        ));
    }

    #[test]
    fn tampered_input_is_rejected() {
        let f = dn("\\x:nat. x", 3);
        let text = write_strategy(&f).unwrap();
        // break the norm header
        let bad = text.replacen("norm: 4", "norm: 5", 1);
        assert!(read_strategy(&bad).is_err());
        // drop a load-bearing entry so a later key loses its prefix
        let mut lines: Vec<&str> = text.lines().collect();
        lines.remove(5);
        let bad = format!("{}\n", lines.join("\n")).replacen("norm: 4", "norm: 3", 1);
        assert!(read_strategy(&bad).is_err());
    }
}
