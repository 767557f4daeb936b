//! MEL, the multigraph edge-list text format.
//!
//! ```text
//! # optional comment lines
//! mg <nv> <ne>
//! <u> <v>        (ne lines, 0-based, u <= v, loops as u == v)
//! ```
//!
//! Serialisation writes edges normalised and sorted, so equal labelled
//! multigraphs give equal bytes. Parsing accepts any edge order and `u > v`.

use thiserror::Error;

use super::Multigraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MelError {
    #[error("no `mg` header found")]
    MissingHeader,
    #[error("line {line}: malformed header `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: malformed edge `{text}`")]
    BadEdge { line: usize, text: String },
    #[error("line {line}: vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { line: usize, vertex: usize, count: usize },
    #[error("header declares {expected} edges but {found} were given")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("header declares {vertices} vertices, more than {edges} edges can touch")]
    TooManyVertices { vertices: usize, edges: usize },
    #[error("vertex {0} has no incident edge")]
    IsolatedVertex(usize),
    #[error("vertex {vertex} has degree {degree}, more than 3")]
    DegreeOverflow { vertex: usize, degree: usize },
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotTrivalent { vertex: usize, degree: usize },
}

/// How strictly vertex degrees are checked while parsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    /// Any degree is accepted.
    #[default]
    Lenient,
    /// Degrees above 3 are rejected (valence 1 and 2 allowed for pinched or partial graphs).
    MaxDegreeThree,
    /// Every vertex must have degree exactly 3.
    Trivalent,
}

pub(super) fn serialize(g: &Multigraph) -> String {
    let mut out = format!("mg {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.sorted_edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}

fn parse_header(line_no: usize, line: &str) -> Result<(usize, usize), MelError> {
    let bad = || MelError::BadHeader { line: line_no, text: line.to_string() };
    let mut parts = line.split_whitespace();
    if parts.next() != Some("mg") {
        return Err(bad());
    }
    let nv = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let ne = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok((nv, ne))
}

/// Parses one record starting at `lines[start]` (a header line). Returns the
/// graph and the index of the first unconsumed line.
fn parse_record(lines: &[&str], start: usize, mode: ParseMode) -> Result<(Multigraph, usize), MelError> {
    let (nv, ne) = parse_header(start + 1, lines[start])?;
    if nv > ne.max(1).saturating_mul(2) {
        return Err(MelError::TooManyVertices { vertices: nv, edges: ne });
    }
    let mut edges = Vec::new();
    let mut i = start + 1;
    while i < lines.len() {
        let line = lines[i];
        if is_skippable(line) {
            i += 1;
            continue;
        }
        if line.trim_start().starts_with("mg") {
            break;
        }
        if edges.len() == ne {
            let extra = lines[i..]
                .iter()
                .take_while(|l| !l.trim_start().starts_with("mg"))
                .filter(|l| !is_skippable(l))
                .count();
            return Err(MelError::EdgeCountMismatch { expected: ne, found: ne + extra });
        }
        let line_no = i + 1;
        let bad = || MelError::BadEdge { line: line_no, text: line.to_string() };
        let mut parts = line.split_whitespace();
        let u: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let v: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        for w in [u, v] {
            if w >= nv {
                return Err(MelError::VertexOutOfRange { line: line_no, vertex: w, count: nv });
            }
        }
        edges.push((u, v));
        i += 1;
        if edges.len() == ne {
            // leave comments that may belong to the next record
            let next = lines[i..].iter().position(|l| !is_skippable(l)).map(|k| i + k);
            match next {
                Some(k) if !lines[k].trim_start().starts_with("mg") => {}
                _ => break,
            }
        }
    }
    if edges.len() != ne {
        return Err(MelError::EdgeCountMismatch { expected: ne, found: edges.len() });
    }
    let g = Multigraph::from_edges_unchecked(nv, &edges);
    for v in 0..nv {
        let d = g.degree(v);
        if d == 0 {
            return Err(MelError::IsolatedVertex(v));
        }
        match mode {
            ParseMode::Lenient => {}
            ParseMode::MaxDegreeThree if d > 3 => return Err(MelError::DegreeOverflow { vertex: v, degree: d }),
            ParseMode::MaxDegreeThree => {}
            ParseMode::Trivalent if d != 3 => return Err(MelError::NotTrivalent { vertex: v, degree: d }),
            ParseMode::Trivalent => {}
        }
    }
    Ok((g, i))
}

/// Parses a text holding exactly one MEL record.
pub fn parse_mel(text: &str, mode: ParseMode) -> Result<Multigraph, MelError> {
    let lines: Vec<&str> = text.lines().collect();
    let start = lines.iter().position(|l| !is_skippable(l)).ok_or(MelError::MissingHeader)?;
    let (g, end) = parse_record(&lines, start, mode)?;
    if let Some(extra) = lines[end..].iter().position(|l| !is_skippable(l)) {
        let line_no = end + extra + 1;
        return Err(MelError::BadHeader { line: line_no, text: lines[end + extra].to_string() });
    }
    Ok(g)
}

/// Parses a concatenation of MEL records, each optionally preceded by
/// comment lines. Returns each graph with the comment lines immediately
/// preceding its header.
pub fn parse_mel_stream(text: &str, mode: ParseMode) -> Result<Vec<(Vec<String>, Multigraph)>, MelError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut comments = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let t = lines[i].trim();
        if t.is_empty() {
            i += 1;
        } else if let Some(c) = t.strip_prefix('#') {
            comments.push(c.trim().to_string());
            i += 1;
        } else {
            let (g, end) = parse_record(&lines, i, mode)?;
            out.push((std::mem::take(&mut comments), g));
            i = end;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialises_examples() {
        let theta = Multigraph::build(&[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(serialize(&theta), "mg 2 3\n0 1\n0 1\n0 1\n");
        let dumbbell = Multigraph::build(&[(1, 1), (1, 0), (0, 0)]).unwrap();
        assert_eq!(serialize(&dumbbell), "mg 2 3\n0 0\n0 1\n1 1\n");
    }

    #[test]
    fn huge_header_counts() {
        let err = parse_mel("mg 0 17777700869520670086", ParseMode::Lenient).unwrap_err();
        assert!(matches!(err, MelError::EdgeCountMismatch { found: 0, .. }));
        assert!(parse_mel("mg 99999999999999999999 1\n0 0\n", ParseMode::Lenient).is_err());
    }

    #[test]
    fn round_trip() {
        let text = "# a comment\nmg 4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n";
        let g = parse_mel(text, ParseMode::Trivalent).unwrap();
        assert_eq!(serialize(&g), text.lines().skip(1).collect::<Vec<_>>().join("\n") + "\n");
    }

    #[test]
    fn errors() {
        assert_eq!(parse_mel("", ParseMode::Lenient), Err(MelError::MissingHeader));
        assert!(matches!(parse_mel("mg 2\n", ParseMode::Lenient), Err(MelError::BadHeader { .. })));
        assert!(matches!(parse_mel("mg 2 1\n0 x\n", ParseMode::Lenient), Err(MelError::BadEdge { .. })));
        assert!(matches!(
            parse_mel("mg 2 1\n0 2\n", ParseMode::Lenient),
            Err(MelError::VertexOutOfRange { vertex: 2, .. })
        ));
        assert_eq!(
            parse_mel("mg 2 2\n0 1\n", ParseMode::Lenient),
            Err(MelError::EdgeCountMismatch { expected: 2, found: 1 })
        );
        assert_eq!(parse_mel("mg 3 2\n0 1\n0 1\n", ParseMode::Lenient), Err(MelError::IsolatedVertex(2)));
        assert!(matches!(parse_mel("mg 3 1\n0 1\n", ParseMode::Lenient), Err(MelError::TooManyVertices { .. })));
        assert_eq!(
            parse_mel("mg 2 1\n0 1\n# c\n0 1\n", ParseMode::Lenient),
            Err(MelError::EdgeCountMismatch { expected: 1, found: 2 })
        );
        assert_eq!(
            parse_mel("mg 2 1\n0 1\n", ParseMode::Trivalent),
            Err(MelError::NotTrivalent { vertex: 0, degree: 1 })
        );
        assert_eq!(
            parse_mel("mg 1 2\n0 0\n0 0\n", ParseMode::MaxDegreeThree),
            Err(MelError::DegreeOverflow { vertex: 0, degree: 4 })
        );
    }

    #[test]
    fn stream() {
        let text = "# aut=12\nmg 2 3\n0 1\n0 1\n0 1\n# aut=8\nmg 2 3\n0 0\n0 1\n1 1\n";
        let records = parse_mel_stream(text, ParseMode::Trivalent).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[1].0, vec!["aut=8".to_string()]);
        assert_eq!(records[1].1.loop_count(), 2);
    }
}
