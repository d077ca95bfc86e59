//! Hypergraph and colouring data model, the text formats, and the
//! LO-colouring verifier that everything else is checked against.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::ParseError;

/// A {2,3}-uniform hypergraph on vertices `1..=n`.
///
/// Parsed input files are always 3-uniform; size-2 edges only appear in
/// internal hypergraphs produced by preprocessing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Edge>,
}

/// An unordered edge of 2 or 3 distinct vertices, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge(Vec<u32>);

impl Edge {
    pub fn new(mut vertices: Vec<u32>) -> Result<Self, ParseError> {
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(ParseError::RepeatedVertex);
        }
        if vertices.len() < 2 || vertices.len() > 3 {
            return Err(ParseError::BadArity(vertices.len()));
        }
        Ok(Edge(vertices))
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.contains(&v)
    }
}

impl Hypergraph {
    /// Builds a hypergraph, checking the vertex-range and arity invariants.
    /// `require_3uniform` is set when the edges come from an input file.
    pub fn new(n: usize, edges: Vec<Edge>, require_3uniform: bool) -> Result<Self, ParseError> {
        for e in &edges {
            if require_3uniform && e.len() != 3 {
                return Err(ParseError::BadArity(e.len()));
            }
            for &v in e.vertices() {
                if v == 0 || v as usize > n {
                    return Err(ParseError::VertexOutOfRange { vertex: v, n });
                }
            }
        }
        Ok(Hypergraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn is_3_uniform(&self) -> bool {
        self.edges.iter().all(|e| e.len() == 3)
    }
}

/// A (possibly partial) assignment of non-negative colours to `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colouring {
    colours: Vec<Option<u32>>,
}

impl Colouring {
    pub fn uncoloured(n: usize) -> Self {
        Colouring {
            colours: vec![None; n],
        }
    }

    pub fn from_assignment(colours: Vec<u32>) -> Self {
        Colouring {
            colours: colours.into_iter().map(Some).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.colours.len()
    }

    pub fn get(&self, v: u32) -> Option<u32> {
        self.colours[v as usize - 1]
    }

    pub fn set(&mut self, v: u32, colour: u32) {
        self.colours[v as usize - 1] = Some(colour);
    }

    pub fn is_complete(&self) -> bool {
        self.colours.iter().all(|c| c.is_some())
    }

    /// Number of distinct colours among coloured vertices.
    pub fn colours_used(&self) -> usize {
        self.colours
            .iter()
            .flatten()
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, Option<u32>)> + '_ {
        self.colours
            .iter()
            .enumerate()
            .map(|(i, c)| (i as u32 + 1, *c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    NoUniqueMaximum,
    UncolouredVertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub valid: bool,
    pub violations: Vec<(usize, Violation)>,
    pub colours_used: usize,
}

/// Checks that every vertex is coloured and every edge has a unique
/// maximum colour. Total: all failure modes land in the report.
pub fn verify_lo_colouring(h: &Hypergraph, c: &Colouring) -> VerifyReport {
    let mut violations = Vec::new();
    for (idx, e) in h.edges().iter().enumerate() {
        let mut max: Option<u32> = None;
        let mut max_count = 0usize;
        let mut uncoloured = false;
        for &v in e.vertices() {
            match c.get(v) {
                None => uncoloured = true,
                Some(col) => match max {
                    Some(m) if col == m => max_count += 1,
                    Some(m) if col > m => {
                        max = Some(col);
                        max_count = 1;
                    }
                    Some(_) => {}
                    None => {
                        max = Some(col);
                        max_count = 1;
                    }
                },
            }
        }
        if uncoloured {
            violations.push((idx, Violation::UncolouredVertex));
        } else if max_count != 1 {
            violations.push((idx, Violation::NoUniqueMaximum));
        }
    }
    VerifyReport {
        valid: violations.is_empty(),
        violations,
        colours_used: c.colours_used(),
    }
}

/// Parses the `p lo3` text format. Input must be 3-uniform.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(ParseError::Malformed {
                        line: lineno + 1,
                        what: "duplicate header".into(),
                    });
                }
                if parts.next() != Some("lo3") {
                    return Err(ParseError::Malformed {
                        line: lineno + 1,
                        what: "header must be `p lo3 <n> <m>`".into(),
                    });
                }
                let n = parse_num(parts.next(), lineno)?;
                let m = parse_num(parts.next(), lineno)?;
                if parts.next().is_some() {
                    return Err(ParseError::Malformed {
                        line: lineno + 1,
                        what: "trailing tokens in header".into(),
                    });
                }
                header = Some((n, m));
            }
            Some("e") => {
                if header.is_none() {
                    return Err(ParseError::Malformed {
                        line: lineno + 1,
                        what: "edge before header".into(),
                    });
                }
                let vs: Vec<u32> = parts
                    .map(|t| {
                        t.parse::<u32>().map_err(|_| ParseError::Malformed {
                            line: lineno + 1,
                            what: format!("bad vertex id `{t}`"),
                        })
                    })
                    .collect::<Result<_, _>>()?;
                if vs.len() != 3 {
                    return Err(ParseError::BadArity(vs.len()));
                }
                edges.push(Edge::new(vs)?);
            }
            _ => {
                return Err(ParseError::Malformed {
                    line: lineno + 1,
                    what: format!("unrecognised line `{line}`"),
                })
            }
        }
    }
    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if m != edges.len() {
        return Err(ParseError::EdgeCountMismatch {
            declared: m,
            actual: edges.len(),
        });
    }
    Hypergraph::new(n, edges, true)
}

fn parse_num(tok: Option<&str>, lineno: usize) -> Result<usize, ParseError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| ParseError::Malformed {
            line: lineno + 1,
            what: "expected a non-negative integer".into(),
        })
}

pub fn serialize_hypergraph(h: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "p lo3 {} {}", h.n(), h.m()).unwrap();
    for e in h.edges() {
        out.push('e');
        for &v in e.vertices() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// One line `<vertex> <colour>` per vertex in ascending vertex order.
/// Byte-exact: single spaces and a trailing newline.
pub fn serialize_colouring(c: &Colouring) -> String {
    debug_assert!(c.is_complete());
    let mut out = String::new();
    for (v, col) in c.iter() {
        writeln!(out, "{} {}", v, col.expect("complete colouring")).unwrap();
    }
    out
}

pub fn parse_colouring(text: &str) -> Result<Colouring, ParseError> {
    let mut pairs = Vec::new();
    let mut max_v = 0u32;
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let v: u32 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .filter(|&v| v > 0)
            .ok_or_else(|| ParseError::Malformed {
                line: lineno + 1,
                what: "expected `<vertex> <colour>`".into(),
            })?;
        let col: u32 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| ParseError::Malformed {
                line: lineno + 1,
                what: "colour must be a non-negative integer".into(),
            })?;
        if parts.next().is_some() {
            return Err(ParseError::Malformed {
                line: lineno + 1,
                what: "trailing tokens".into(),
            });
        }
        max_v = max_v.max(v);
        pairs.push((v, col));
    }
    let mut colours = vec![None; max_v as usize];
    for (v, col) in pairs {
        let slot = &mut colours[v as usize - 1];
        if slot.is_some() {
            return Err(ParseError::DuplicateVertex(v));
        }
        *slot = Some(col);
    }
    if let Some(v) = colours.iter().position(|c| c.is_none()) {
        return Err(ParseError::MissingVertex(v as u32 + 1));
    }
    Ok(Colouring {
        colours,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(n: usize, edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::new(
            n,
            edges.iter().map(|e| Edge::new(e.to_vec()).unwrap()).collect(),
            false,
        )
        .unwrap()
    }

    #[test]
    fn parse_single_edge() {
        let g = parse_hypergraph("p lo3 3 1\ne 1 2 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 1);
        assert_eq!(g.edges()[0].vertices(), &[1, 2, 3]);
    }

    #[test]
    fn parse_rejects_repeated_vertex() {
        assert!(matches!(
            parse_hypergraph("p lo3 3 1\ne 1 1 2\n"),
            Err(ParseError::RepeatedVertex)
        ));
    }

    #[test]
    fn parse_two_edges_with_comments() {
        let g = parse_hypergraph("c comment\np lo3 4 2\ne 1 2 3\ne 2 3 4\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn parse_rejects_bad_inputs() {
        assert!(parse_hypergraph("p lo3 3 2\ne 1 2 3\n").is_err()); // m mismatch
        assert!(parse_hypergraph("p lo3 3 1\ne 1 2 4\n").is_err()); // out of range
        assert!(parse_hypergraph("p lo3 3 1\ne 1 2\n").is_err()); // arity
        assert!(parse_hypergraph("e 1 2 3\n").is_err()); // edge before header
        assert!(parse_hypergraph("p lo3 x 1\ne 1 2 3\n").is_err());
    }

    #[test]
    fn verify_examples() {
        let g = h(3, &[&[1, 2, 3]]);
        let valid = Colouring::from_assignment(vec![1, 0, 0]);
        assert!(verify_lo_colouring(&g, &valid).valid);

        let tie = Colouring::from_assignment(vec![1, 1, 0]);
        let rep = verify_lo_colouring(&g, &tie);
        assert!(!rep.valid);
        assert_eq!(rep.violations, vec![(0, Violation::NoUniqueMaximum)]);

        let distinct = Colouring::from_assignment(vec![0, 1, 2]);
        let rep = verify_lo_colouring(&g, &distinct);
        assert!(rep.valid);
        assert_eq!(rep.colours_used, 3);
    }

    #[test]
    fn verify_flags_uncoloured() {
        let g = h(3, &[&[1, 2, 3]]);
        let mut c = Colouring::uncoloured(3);
        c.set(1, 1);
        c.set(2, 0);
        let rep = verify_lo_colouring(&g, &c);
        assert!(!rep.valid);
        assert_eq!(rep.violations, vec![(0, Violation::UncolouredVertex)]);
    }

    #[test]
    fn colouring_round_trip() {
        let c = Colouring::from_assignment(vec![0, 1]);
        let text = serialize_colouring(&c);
        assert_eq!(text, "1 0\n2 1\n");
        assert_eq!(parse_colouring(&text).unwrap(), c);
    }

    #[test]
    fn colouring_parse_rejects_duplicates() {
        assert!(matches!(
            parse_colouring("1 0\n1 1\n"),
            Err(ParseError::DuplicateVertex(1))
        ));
        assert!(parse_colouring("1 0\n3 1\n").is_err()); // gap
        assert!(parse_colouring("1 -2\n").is_err());
    }

    #[test]
    fn hypergraph_round_trip() {
        let g = h(4, &[&[1, 2, 3], &[2, 3, 4]]);
        assert_eq!(parse_hypergraph(&serialize_hypergraph(&g)).unwrap(), g);
    }

    #[test]
    fn validity_invariant_under_monotone_renaming() {
        // Only the order of colours matters.
        let g = h(4, &[&[1, 2, 3], &[2, 3, 4]]);
        let c = Colouring::from_assignment(vec![0, 0, 1, 2]);
        let renamed = Colouring::from_assignment(vec![3, 3, 7, 40]);
        assert_eq!(
            verify_lo_colouring(&g, &c).valid,
            verify_lo_colouring(&g, &renamed).valid
        );
    }
}
