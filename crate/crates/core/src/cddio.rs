//! cdd-style polyhedral text files for cones, so results can be cross-checked
//! with established vertex-enumeration tools.
//!
//! H-representation blocks:
//!
//! ```text
//! * optional comment lines
//! H-representation
//! linearity 1 5
//! begin
//!  5 8 rational
//!  0 1 0 0 0 0 0 0
//!  ...
//! end
//! ```
//!
//! Rows read `b a1 .. ad` with `b = 0` for cones; the `linearity` line lists
//! the 1-based indices of equality rows (equality rows are written last).
//! V-representation blocks are analogous: a leading `0` marks a ray and the
//! linearity rows span the lineality space. Rational tokens are bit-exact
//! (`p` or `p/q`).

use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use crate::cone::{HRep, VRep};
use crate::rational::{format_rat, parse_rat, QVec, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CddError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("expected {expected}, found a {found} block")]
    WrongBlockType { expected: &'static str, found: &'static str },
}

fn err(line: usize, reason: impl Into<String>) -> CddError {
    CddError::Parse { line, reason: reason.into() }
}

pub fn hrep_to_string(h: &HRep, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "* {c}").unwrap();
    }
    writeln!(out, "H-representation").unwrap();
    let m_ineq = h.inequalities.len();
    let m_eq = h.equalities.len();
    if m_eq > 0 {
        let idx: Vec<String> = (1..=m_eq).map(|k| (m_ineq + k).to_string()).collect();
        writeln!(out, "linearity {} {}", m_eq, idx.join(" ")).unwrap();
    }
    writeln!(out, "begin").unwrap();
    writeln!(out, " {} {} rational", m_ineq + m_eq, h.dim + 1).unwrap();
    for row in h.inequalities.iter().chain(&h.equalities) {
        write_row(&mut out, row);
    }
    writeln!(out, "end").unwrap();
    out
}

pub fn vrep_to_string(v: &VRep, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "* {c}").unwrap();
    }
    writeln!(out, "V-representation").unwrap();
    let m_rays = v.rays.len();
    let m_lin = v.lineality.len();
    if m_lin > 0 {
        let idx: Vec<String> = (1..=m_lin).map(|k| (m_rays + k).to_string()).collect();
        writeln!(out, "linearity {} {}", m_lin, idx.join(" ")).unwrap();
    }
    writeln!(out, "begin").unwrap();
    writeln!(out, " {} {} rational", m_rays + m_lin, v.dim + 1).unwrap();
    for row in v.rays.iter().chain(&v.lineality) {
        write_row(&mut out, row);
    }
    writeln!(out, "end").unwrap();
    out
}

fn write_row(out: &mut String, row: &[Rat]) {
    out.push_str(" 0");
    for x in row {
        out.push(' ');
        out.push_str(&format_rat(x));
    }
    out.push('\n');
}

struct Block {
    kind: &'static str,
    linearity: Vec<usize>,
    rows: Vec<QVec>,
    dim: usize,
}

fn parse_block(input: &str) -> Result<Block, CddError> {
    let mut kind: Option<&'static str> = None;
    let mut linearity: Vec<usize> = Vec::new();
    let mut rows: Vec<QVec> = Vec::new();
    let mut dim = 0usize;
    let mut expected_rows = 0usize;

    #[derive(PartialEq)]
    enum State {
        Preamble,
        AwaitSize,
        Rows,
        Done,
    }
    let mut state = State::Preamble;

    for (idx, raw) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('*') {
            continue;
        }
        match state {
            State::Preamble => {
                if line.eq_ignore_ascii_case("H-representation") {
                    kind = Some("H");
                } else if line.eq_ignore_ascii_case("V-representation") {
                    kind = Some("V");
                } else if let Some(rest) = line.strip_prefix("linearity") {
                    if kind.is_none() {
                        return Err(err(lineno, "linearity before the representation line"));
                    }
                    let mut tokens = rest.split_whitespace();
                    let count: usize = tokens
                        .next()
                        .ok_or_else(|| err(lineno, "linearity needs a count"))?
                        .parse()
                        .map_err(|_| err(lineno, "bad linearity count"))?;
                    linearity = tokens
                        .map(|t| t.parse::<usize>().map_err(|_| err(lineno, "bad linearity index")))
                        .collect::<Result<_, _>>()?;
                    if linearity.len() != count {
                        return Err(err(lineno, "linearity count does not match its indices"));
                    }
                } else if line == "begin" {
                    if kind.is_none() {
                        return Err(err(lineno, "begin before the representation line"));
                    }
                    state = State::AwaitSize;
                } else {
                    return Err(err(lineno, format!("unexpected line {line:?}")));
                }
            }
            State::AwaitSize => {
                let mut tokens = line.split_whitespace();
                expected_rows = tokens
                    .next()
                    .ok_or_else(|| err(lineno, "missing row count"))?
                    .parse()
                    .map_err(|_| err(lineno, "bad row count"))?;
                let cols: usize = tokens
                    .next()
                    .ok_or_else(|| err(lineno, "missing column count"))?
                    .parse()
                    .map_err(|_| err(lineno, "bad column count"))?;
                if cols < 2 {
                    return Err(err(lineno, "need at least one coefficient column"));
                }
                // The number-type token (rational/integer/real) is accepted
                // but tokens are always parsed exactly.
                dim = cols - 1;
                state = State::Rows;
            }
            State::Rows => {
                if line == "end" {
                    if rows.len() != expected_rows {
                        return Err(err(
                            lineno,
                            format!("expected {expected_rows} rows, found {}", rows.len()),
                        ));
                    }
                    state = State::Done;
                    continue;
                }
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() != dim + 1 {
                    return Err(err(
                        lineno,
                        format!("expected {} tokens, found {}", dim + 1, tokens.len()),
                    ));
                }
                let b = parse_rat(tokens[0]).map_err(|e| err(lineno, e.to_string()))?;
                if !b.is_zero() {
                    return Err(err(lineno, "cone rows must have 0 in the leading column"));
                }
                let row = tokens[1..]
                    .iter()
                    .map(|t| parse_rat(t).map_err(|e| err(lineno, e.to_string())))
                    .collect::<Result<QVec, _>>()?;
                rows.push(row);
            }
            State::Done => {
                return Err(err(lineno, "content after end"));
            }
        }
    }
    if state != State::Done {
        return Err(err(input.lines().count(), "missing end"));
    }
    for &k in &linearity {
        if k == 0 || k > rows.len() {
            return Err(err(0, format!("linearity index {k} out of range")));
        }
    }
    Ok(Block { kind: kind.unwrap(), linearity, rows, dim })
}

pub fn parse_hrep(input: &str) -> Result<HRep, CddError> {
    let block = parse_block(input)?;
    if block.kind != "H" {
        return Err(CddError::WrongBlockType { expected: "H-representation", found: "V" });
    }
    let mut h = HRep::new(block.dim);
    for (i, row) in block.rows.into_iter().enumerate() {
        if block.linearity.contains(&(i + 1)) {
            h.equalities.push(row);
        } else {
            h.inequalities.push(row);
        }
    }
    Ok(h)
}

pub fn parse_vrep(input: &str) -> Result<VRep, CddError> {
    let block = parse_block(input)?;
    if block.kind != "V" {
        return Err(CddError::WrongBlockType { expected: "V-representation", found: "H" });
    }
    let mut rays = Vec::new();
    let mut lineality = Vec::new();
    for (i, row) in block.rows.into_iter().enumerate() {
        if block.linearity.contains(&(i + 1)) {
            lineality.push(row);
        } else {
            rays.push(row);
        }
    }
    Ok(VRep { dim: block.dim, rays, lineality })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rint};

    fn row(v: &[i64]) -> QVec {
        v.iter().map(|&x| rint(x)).collect()
    }

    #[test]
    fn hrep_round_trip() {
        let h = HRep {
            dim: 3,
            inequalities: vec![row(&[1, 0, 0]), vec![rat(1, 2), rint(-1), rint(0)]],
            equalities: vec![row(&[1, 1, 1])],
        };
        let text = hrep_to_string(&h, &["monotonicity cone test"]);
        assert!(text.contains("H-representation"));
        assert!(text.contains("linearity 1 3"));
        assert!(text.contains("1/2"));
        let back = parse_hrep(&text).unwrap();
        assert_eq!(back.dim, 3);
        assert_eq!(back.inequalities, h.inequalities);
        assert_eq!(back.equalities, h.equalities);
    }

    #[test]
    fn vrep_round_trip() {
        let v = VRep {
            dim: 2,
            rays: vec![row(&[1, 0])],
            lineality: vec![row(&[0, 1])],
        };
        let text = vrep_to_string(&v, &[]);
        assert!(text.contains("V-representation"));
        let back = parse_vrep(&text).unwrap();
        assert_eq!(back.rays, v.rays);
        assert_eq!(back.lineality, v.lineality);
    }

    #[test]
    fn parser_rejects_malformed_blocks() {
        assert!(parse_hrep("begin\n 1 2 rational\n 0 1\nend\n").is_err());
        assert!(parse_hrep("H-representation\nbegin\n 2 2 rational\n 0 1\nend\n").is_err());
        assert!(parse_hrep("H-representation\nbegin\n 1 2 rational\n 1 1\nend\n").is_err());
        assert!(parse_hrep("H-representation\nbegin\n 1 2 rational\n 0 1\n").is_err());
        let v_text = "V-representation\nbegin\n 1 2 rational\n 0 1\nend\n";
        assert!(matches!(
            parse_hrep(v_text),
            Err(CddError::WrongBlockType { .. })
        ));
    }

    #[test]
    fn comments_and_blanks_are_skipped() {
        let text = "* a comment\n\nH-representation\n* another\nbegin\n 1 3 rational\n 0 2/3 -1\nend\n";
        let h = parse_hrep(text).unwrap();
        assert_eq!(h.inequalities, vec![vec![rat(2, 3), rint(-1)]]);
    }
}
