//! Text form of diagrams.
//!
//! ```text
//! src: E_1 F_2 @ [1,0]
//! cup_l(2)@0; cross(2,1)@1; cap_l(2)@2
//! ```
//!
//! Positions are 0-based strand indices from the left; colors are vertex labels.
//! Weights are pairing vectors `[..]` or gl_n tuples `(..)`.

use super::{DiagramTerm, GenKind, Letter, OneMor, SliceKind, UcatError};
use crate::cartan::{CartanDatum, GlWeight, Weight};

use GenKind::*;

fn lab(d: Option<&CartanDatum>, i: usize) -> String {
    match d {
        Some(d) => d.label(i).to_string(),
        None => (i + 1).to_string(),
    }
}

pub fn format_kind(k: &SliceKind, d: Option<&CartanDatum>) -> String {
    let l = |i: usize| lab(d, i);
    match k {
        SliceKind::Gen(g) => match *g {
            UpDot(i) => format!("dot({})", l(i)),
            DownDot(i) => format!("ddot({})", l(i)),
            UpCross(i, j) => format!("cross({},{})", l(i), l(j)),
            DownCross(i, j) => format!("dcross({},{})", l(i), l(j)),
            SideCrossLR(i, j) => format!("side_lr({},{})", l(i), l(j)),
            SideCrossRL(i, j) => format!("side_rl({},{})", l(i), l(j)),
            CupLeft(i) => format!("cup_l({})", l(i)),
            CupRight(i) => format!("cup_r({})", l(i)),
            CapLeft(i) => format!("cap_l({})", l(i)),
            CapRight(i) => format!("cap_r({})", l(i)),
        },
        SliceKind::Bubble { i, cw, dots } => {
            format!("{}({},{})", if *cw { "bubble_cw" } else { "bubble_ccw" }, l(*i), dots)
        }
        SliceKind::Closed(m) => format!("closed({m})"),
    }
}

pub fn format_steps(steps: &[(SliceKind, usize)], d: Option<&CartanDatum>) -> String {
    if steps.is_empty() {
        return "id".to_string();
    }
    let v: Vec<String> = steps.iter().map(|(k, a)| format!("{}@{}", format_kind(k, d), a)).collect();
    v.join("; ")
}

pub fn format_letters(l: &[Letter], d: Option<&CartanDatum>) -> String {
    if l.is_empty() {
        return "1".to_string();
    }
    let v: Vec<String> = l
        .iter()
        .map(|x| match x {
            Letter::E(i) => format!("E_{}", lab(d, *i)),
            Letter::F(i) => format!("F_{}", lab(d, *i)),
        })
        .collect();
    v.join(" ")
}

/// Header line plus slice list.
pub fn format_term(t: &DiagramTerm, d: &CartanDatum) -> String {
    format!("src: {} @ {}\n{}", format_letters(&t.src.letters, Some(d)), t.src.weight, format_steps(&t.steps(), Some(d)))
}

/// Resolve `[a,b,..]` (pairings) or `(a,b,..)` (gl_n entries).
pub fn parse_weight(d: &CartanDatum, s: &str) -> Result<Weight, UcatError> {
    let s = s.trim();
    let err = || UcatError::Parse(format!("bad weight {s:?}"));
    let (gl, body) = if let Some(b) = s.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
        (false, b)
    } else if let Some(b) = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
        (true, b)
    } else {
        return Err(err());
    };
    let v: Vec<i64> = body
        .split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| x.trim().parse::<i64>().map_err(|_| err()))
        .collect::<Result<_, _>>()?;
    if gl {
        if v.len() != d.rank() + 1 {
            return Err(err());
        }
        Ok(d.gl_weight(&GlWeight { entries: v }))
    } else {
        if v.len() != d.rank() {
            return Err(err());
        }
        let bases = d.coset_bases().map_err(|e| UcatError::Parse(e.to_string()))?;
        d.weight_from_pairing(&bases, &v).map_err(|e| UcatError::Parse(e.to_string()))
    }
}

fn vertex(d: &CartanDatum, s: &str) -> Result<usize, UcatError> {
    let l: u32 = s.trim().parse().map_err(|_| UcatError::Parse(format!("bad vertex {s:?}")))?;
    d.index_of(l).map_err(|e| UcatError::Parse(e.to_string()))
}

fn parse_letters(d: &CartanDatum, s: &str) -> Result<Vec<Letter>, UcatError> {
    let mut out = Vec::new();
    for tok in s.split_whitespace() {
        if tok == "1" {
            continue;
        }
        let (up, rest) = if let Some(r) = tok.strip_prefix("E_") {
            (true, r)
        } else if let Some(r) = tok.strip_prefix("F_") {
            (false, r)
        } else {
            return Err(UcatError::Parse(format!("bad strand {tok:?}")));
        };
        let i = vertex(d, rest)?;
        out.push(if up { Letter::E(i) } else { Letter::F(i) });
    }
    Ok(out)
}

fn parse_slice(d: &CartanDatum, s: &str) -> Result<(SliceKind, usize), UcatError> {
    let err = || UcatError::Parse(format!("bad slice {s:?}"));
    let (call, pos) = s.rsplit_once('@').ok_or_else(err)?;
    let at: usize = pos.trim().parse().map_err(|_| err())?;
    let (name, args) = call.trim().split_once('(').ok_or_else(err)?;
    let args = args.strip_suffix(')').ok_or_else(err)?;
    let a: Vec<&str> = args.split(',').map(str::trim).collect();
    let one = |f: fn(usize) -> GenKind| -> Result<SliceKind, UcatError> {
        if a.len() != 1 {
            return Err(err());
        }
        Ok(SliceKind::Gen(f(vertex(d, a[0])?)))
    };
    let two = |f: fn(usize, usize) -> GenKind| -> Result<SliceKind, UcatError> {
        if a.len() != 2 {
            return Err(err());
        }
        Ok(SliceKind::Gen(f(vertex(d, a[0])?, vertex(d, a[1])?)))
    };
    let kind = match name.trim() {
        "dot" => one(UpDot)?,
        "ddot" => one(DownDot)?,
        "cross" => two(UpCross)?,
        "dcross" => two(DownCross)?,
        "side_lr" => two(SideCrossLR)?,
        "side_rl" => two(SideCrossRL)?,
        "cup_l" => one(CupLeft)?,
        "cup_r" => one(CupRight)?,
        "cap_l" => one(CapLeft)?,
        "cap_r" => one(CapRight)?,
        b @ ("bubble_cw" | "bubble_ccw") => {
            if a.len() != 2 {
                return Err(err());
            }
            let dots: i64 = a[1].parse().map_err(|_| err())?;
            SliceKind::Bubble { i: vertex(d, a[0])?, cw: b == "bubble_cw", dots }
        }
        _ => return Err(err()),
    };
    Ok((kind, at))
}

/// Parse a diagram in the text form above.
pub fn parse_term(d: &CartanDatum, s: &str) -> Result<DiagramTerm, UcatError> {
    let s = s.trim();
    let (head, body) = match s.split_once('\n') {
        Some((h, b)) => (h, b),
        None => (s, ""),
    };
    let head = head.trim().strip_prefix("src:").ok_or_else(|| UcatError::Parse("missing `src:` header".into()))?;
    let (letters, weight) = head.rsplit_once('@').ok_or_else(|| UcatError::Parse("header needs `@ weight`".into()))?;
    let src = OneMor::new(parse_weight(d, weight)?, parse_letters(d, letters)?);
    let mut steps = Vec::new();
    for part in body.split([';', '\n']) {
        let part = part.trim();
        if part.is_empty() || part == "id" {
            continue;
        }
        steps.push(parse_slice(d, part)?);
    }
    DiagramTerm::build(src, &steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let d = CartanDatum::type_a(2);
        let src = "src: E_1 F_2 @ [1,-1]\ncup_l(2)@0; cross(2,1)@1; cap_l(2)@2; dot(1)@1; bubble_ccw(2,-1)@0";
        let t = parse_term(&d, src).unwrap();
        assert_eq!(t.dst.letters, vec![Letter::F(1), Letter::E(0)]);
        let again = parse_term(&d, &format_term(&t, &d)).unwrap();
        assert_eq!(t, again);
    }

    #[test]
    fn gl_weights_and_errors() {
        let d = CartanDatum::gl(3).unwrap();
        let t = parse_term(&d, "src: E_2 @ (1,0,0)\ndot(2)@0").unwrap();
        assert_eq!(t.src.weight.pairings(), &[1, 0]);
        assert!(parse_term(&d, "src: E_2 @ (1,0,0)\nddot(2)@0").is_err());
        assert!(parse_term(&d, "E_2 @ (1,0,0)").is_err());
        assert!(parse_term(&d, "src: E_7 @ (1,0,0)").is_err());
    }
}
