//! Graph and instance data model plus the extended-DIMACS text format.
//!
//! An instance file consists of whitespace-separated directive lines:
//!
//! ```text
//! p edge <n> <m>    exactly one, before any edge line
//! e <v1> <v2>       m of these
//! l <len>           exactly one: maximum path length in edges
//! t <v1> <v2>       zero or one: path terminals (present iff the instance
//!                   asks for a single pair)
//! ```
//!
//! Comment lines starting with `c` and blank lines are ignored. Vertices are
//! numbered `1..=n`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// 1-based vertex id.
pub type Vertex = u32;

/// Which counting problem an instance poses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    /// Count simple paths between one terminal pair.
    SinglePair,
    /// Count simple paths over all unordered vertex pairs.
    AllPairs,
}

/// Everything that can be wrong with an instance, whether found while
/// parsing text or while validating an in-memory value.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("line {line}: malformed line: {content:?}")]
    MalformedLine { line: usize, content: String },
    #[error("header declared {declared} edges but {found} were given")]
    HeaderMismatch { declared: usize, found: usize },
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: Vertex, v: Vertex },
    #[error("self-loop at vertex {v}")]
    SelfLoop { v: Vertex },
    #[error("vertex {v} out of range 1..={n}")]
    VertexOutOfRange { v: Vertex, n: u32 },
    #[error("missing `p edge n m` header")]
    MissingHeader,
    #[error("missing `l len` line")]
    MissingLength,
    #[error("duplicate `{directive}` line")]
    DuplicateDirective { directive: char },
    #[error("terminals are identical (vertex {v})")]
    IdenticalTerminals { v: Vertex },
    #[error("i/o error: {0}")]
    Io(String),
}

/// Simple undirected graph: a vertex count and a list of edges with
/// endpoints stored as `u < v`. No self-loops, no duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    /// Builds a graph, normalizing each edge to `u < v` and rejecting
    /// self-loops, duplicates, and out-of-range endpoints. Edge list order is
    /// preserved.
    pub fn new(n: u32, edges: Vec<(Vertex, Vertex)>) -> Result<Self, InstanceError> {
        let mut normalized = Vec::with_capacity(edges.len());
        let mut seen = HashSet::with_capacity(edges.len());
        for (a, b) in edges {
            let (u, v) = normalize_edge(a, b, n)?;
            if !seen.insert((u, v)) {
                return Err(InstanceError::DuplicateEdge { u, v });
            }
            normalized.push((u, v));
        }
        Ok(Self { n, edges: normalized })
    }

    pub fn vertex_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as stored: normalized `u < v`, in insertion order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// Vertices `1..=n`.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    /// Neighbor lists indexed by vertex id (slot 0 unused).
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n as usize + 1];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        adj
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&(u, v))
    }

    /// Same edge set regardless of list order.
    pub fn same_edges(&self, other: &Graph) -> bool {
        if self.n != other.n || self.edges.len() != other.edges.len() {
            return false;
        }
        let mut a = self.edges.clone();
        let mut b = other.edges.clone();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    fn check(&self) -> Result<(), InstanceError> {
        let mut seen = HashSet::with_capacity(self.edges.len());
        for &(a, b) in &self.edges {
            let (u, v) = normalize_edge(a, b, self.n)?;
            if (a, b) != (u, v) {
                // stored edges must already be normalized
                return Err(InstanceError::MalformedLine {
                    line: 0,
                    content: format!("edge ({a}, {b}) not stored as u < v"),
                });
            }
            if !seen.insert((u, v)) {
                return Err(InstanceError::DuplicateEdge { u, v });
            }
        }
        Ok(())
    }
}

fn normalize_edge(a: Vertex, b: Vertex, n: u32) -> Result<(Vertex, Vertex), InstanceError> {
    for v in [a, b] {
        if v == 0 || v > n {
            return Err(InstanceError::VertexOutOfRange { v, n });
        }
    }
    if a == b {
        return Err(InstanceError::SelfLoop { v: a });
    }
    Ok(if a < b { (a, b) } else { (b, a) })
}

/// A counting problem: graph, maximum path length in edges, and an optional
/// terminal pair. Terminals present means [`ProblemKind::SinglePair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub max_len: u32,
    pub terminals: Option<(Vertex, Vertex)>,
}

impl Instance {
    pub fn new(
        graph: Graph,
        max_len: u32,
        terminals: Option<(Vertex, Vertex)>,
    ) -> Result<Self, InstanceError> {
        let inst = Self { graph, max_len, terminals };
        inst.validate()?;
        Ok(inst)
    }

    pub fn kind(&self) -> ProblemKind {
        if self.terminals.is_some() {
            ProblemKind::SinglePair
        } else {
            ProblemKind::AllPairs
        }
    }

    /// Checks every structural invariant, reporting the first violation.
    pub fn validate(&self) -> Result<(), InstanceError> {
        self.graph.check()?;
        if let Some((s, t)) = self.terminals {
            for v in [s, t] {
                if v == 0 || v > self.graph.n {
                    return Err(InstanceError::VertexOutOfRange { v, n: self.graph.n });
                }
            }
            if s == t {
                return Err(InstanceError::IdenticalTerminals { v: s });
            }
        }
        Ok(())
    }

    pub fn from_path(path: &Path) -> Result<Self, InstanceError> {
        let text = fs::read_to_string(path).map_err(|e| InstanceError::Io(e.to_string()))?;
        parse_instance(&text)
    }
}

/// Parses extended-DIMACS text into an [`Instance`].
///
/// The header must precede every other directive; the relative order of `e`,
/// `l`, and `t` lines after it does not matter. Comments (`c ...`) and blank
/// lines may appear anywhere.
pub fn parse_instance(text: &str) -> Result<Instance, InstanceError> {
    let mut header: Option<(u32, usize)> = None;
    let mut max_len: Option<u32> = None;
    let mut terminals: Option<(Vertex, Vertex)> = None;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut seen = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let malformed = || InstanceError::MalformedLine { line: line_no, content: raw.to_string() };
        let mut tokens = raw.split_whitespace();
        let Some(head) = tokens.next() else { continue };
        match head {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(InstanceError::DuplicateDirective { directive: 'p' });
                }
                if tokens.next() != Some("edge") {
                    return Err(malformed());
                }
                let n: u32 = parse_token(&mut tokens, malformed)?;
                let m: usize = parse_token(&mut tokens, malformed)?;
                if tokens.next().is_some() || n == 0 {
                    return Err(malformed());
                }
                header = Some((n, m));
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(InstanceError::MissingHeader);
                };
                let a: Vertex = parse_token(&mut tokens, malformed)?;
                let b: Vertex = parse_token(&mut tokens, malformed)?;
                if tokens.next().is_some() {
                    return Err(malformed());
                }
                let (u, v) = normalize_edge(a, b, n)?;
                if !seen.insert((u, v)) {
                    return Err(InstanceError::DuplicateEdge { u, v });
                }
                edges.push((u, v));
            }
            "l" => {
                if header.is_none() {
                    return Err(InstanceError::MissingHeader);
                }
                if max_len.is_some() {
                    return Err(InstanceError::DuplicateDirective { directive: 'l' });
                }
                let len: u32 = parse_token(&mut tokens, malformed)?;
                if tokens.next().is_some() {
                    return Err(malformed());
                }
                max_len = Some(len);
            }
            "t" => {
                let Some((n, _)) = header else {
                    return Err(InstanceError::MissingHeader);
                };
                if terminals.is_some() {
                    return Err(InstanceError::DuplicateDirective { directive: 't' });
                }
                let s: Vertex = parse_token(&mut tokens, malformed)?;
                let t: Vertex = parse_token(&mut tokens, malformed)?;
                if tokens.next().is_some() {
                    return Err(malformed());
                }
                for v in [s, t] {
                    if v == 0 || v > n {
                        return Err(InstanceError::VertexOutOfRange { v, n });
                    }
                }
                if s == t {
                    return Err(InstanceError::IdenticalTerminals { v: s });
                }
                terminals = Some((s, t));
            }
            _ => return Err(malformed()),
        }
    }

    let Some((n, m)) = header else {
        return Err(InstanceError::MissingHeader);
    };
    if edges.len() != m {
        return Err(InstanceError::HeaderMismatch { declared: m, found: edges.len() });
    }
    let Some(max_len) = max_len else {
        return Err(InstanceError::MissingLength);
    };
    Ok(Instance { graph: Graph { n, edges }, max_len, terminals })
}

fn parse_token<'a, T, I, F>(tokens: &mut I, malformed: F) -> Result<T, InstanceError>
where
    T: std::str::FromStr,
    I: Iterator<Item = &'a str>,
    F: Fn() -> InstanceError,
{
    tokens.next().and_then(|tok| tok.parse().ok()).ok_or_else(malformed)
}

/// Renders an instance back to extended-DIMACS text. Edges are emitted in
/// stored order with `u < v`; the `t` line appears iff terminals are present.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p edge {} {}", inst.graph.n, inst.graph.edges.len());
    for &(u, v) in &inst.graph.edges {
        let _ = writeln!(out, "e {u} {v}");
    }
    let _ = writeln!(out, "l {}", inst.max_len);
    if let Some((s, t)) = inst.terminals {
        let _ = writeln!(out, "t {s} {t}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIG1: &str = "p edge 4 5\ne 1 2\ne 2 3\ne 3 4\ne 1 4\ne 2 4\nl 2\nt 1 3\n";

    #[test]
    fn parses_single_pair_instance() {
        let inst = parse_instance(FIG1).unwrap();
        assert_eq!(inst.graph.vertex_count(), 4);
        assert_eq!(inst.graph.edge_count(), 5);
        assert_eq!(inst.max_len, 2);
        assert_eq!(inst.terminals, Some((1, 3)));
        assert_eq!(inst.kind(), ProblemKind::SinglePair);
    }

    #[test]
    fn parses_minimal_all_pairs_instance() {
        let inst = parse_instance("p edge 2 1\ne 1 2\nl 1\n").unwrap();
        assert_eq!(inst.kind(), ProblemKind::AllPairs);
        assert_eq!(inst.graph.edges(), &[(1, 2)]);
        assert_eq!(inst.max_len, 1);
    }

    #[test]
    fn header_mismatch_is_detected() {
        let err = parse_instance("p edge 3 1\ne 1 2\ne 2 3\nl 1\n").unwrap_err();
        assert_eq!(err, InstanceError::HeaderMismatch { declared: 1, found: 2 });
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let text = "c a comment\n\np edge 2 1\nc another\ne 1 2\n\nl 1\n";
        assert!(parse_instance(text).is_ok());
    }

    #[test]
    fn directive_order_after_header_is_free() {
        let a = parse_instance("p edge 3 2\nl 2\nt 1 3\ne 1 2\ne 2 3\n").unwrap();
        let b = parse_instance("p edge 3 2\ne 1 2\ne 2 3\nl 2\nt 1 3\n").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn edge_before_header_is_missing_header() {
        assert_eq!(parse_instance("e 1 2\np edge 2 1\nl 1\n").unwrap_err(), InstanceError::MissingHeader);
        assert_eq!(parse_instance("l 1\np edge 2 1\ne 1 2\n").unwrap_err(), InstanceError::MissingHeader);
        assert_eq!(parse_instance("").unwrap_err(), InstanceError::MissingHeader);
    }

    #[test]
    fn duplicate_directives_are_rejected() {
        let base = "p edge 2 1\ne 1 2\nl 1\n";
        assert_eq!(
            parse_instance(&format!("{base}l 2\n")).unwrap_err(),
            InstanceError::DuplicateDirective { directive: 'l' }
        );
        assert_eq!(
            parse_instance(&format!("{base}t 1 2\nt 2 1\n")).unwrap_err(),
            InstanceError::DuplicateDirective { directive: 't' }
        );
        assert_eq!(
            parse_instance(&format!("{base}p edge 2 1\n")).unwrap_err(),
            InstanceError::DuplicateDirective { directive: 'p' }
        );
    }

    #[test]
    fn missing_length_is_rejected() {
        assert_eq!(parse_instance("p edge 2 1\ne 1 2\n").unwrap_err(), InstanceError::MissingLength);
    }

    #[test]
    fn bad_edges_are_rejected() {
        assert_eq!(
            parse_instance("p edge 3 1\ne 1 1\nl 1\n").unwrap_err(),
            InstanceError::SelfLoop { v: 1 }
        );
        assert_eq!(
            parse_instance("p edge 3 2\ne 1 2\ne 2 1\nl 1\n").unwrap_err(),
            InstanceError::DuplicateEdge { u: 1, v: 2 }
        );
        assert_eq!(
            parse_instance("p edge 3 1\ne 0 3\nl 1\n").unwrap_err(),
            InstanceError::VertexOutOfRange { v: 0, n: 3 }
        );
        assert_eq!(
            parse_instance("p edge 3 1\ne 1 4\nl 1\n").unwrap_err(),
            InstanceError::VertexOutOfRange { v: 4, n: 3 }
        );
    }

    #[test]
    fn malformed_lines_are_rejected() {
        for text in [
            "p edge 2\n",
            "p edge 0 0\n",
            "q edge 2 1\n",
            "p edge 2 1\ne 1\nl 1\n",
            "p edge 2 1\ne 1 2 3\nl 1\n",
            "p edge 2 1\ne 1 2\nl x\n",
            "p edge 2 1\ne 1 2\nl 1 2\n",
        ] {
            assert!(
                matches!(parse_instance(text), Err(InstanceError::MalformedLine { .. })),
                "expected malformed: {text:?}"
            );
        }
    }

    #[test]
    fn identical_terminals_are_rejected() {
        assert_eq!(
            parse_instance("p edge 2 1\ne 1 2\nl 1\nt 2 2\n").unwrap_err(),
            InstanceError::IdenticalTerminals { v: 2 }
        );
    }

    #[test]
    fn round_trip_is_identity() {
        let inst = parse_instance(FIG1).unwrap();
        let text = serialize_instance(&inst);
        assert_eq!(parse_instance(&text).unwrap(), inst);
        // byte-identical on a second pass
        assert_eq!(serialize_instance(&parse_instance(&text).unwrap()), text);
    }

    #[test]
    fn serialize_normalizes_and_omits_t_for_all_pairs() {
        let g = Graph::new(4, vec![(4, 2)]).unwrap();
        let inst = Instance::new(g, 1, None).unwrap();
        let text = serialize_instance(&inst);
        assert!(text.contains("e 2 4\n"));
        assert!(!text.contains("\nt "));
    }

    #[test]
    fn validate_reports_violations() {
        let inst = parse_instance(FIG1).unwrap();
        assert!(inst.validate().is_ok());

        let g = Graph::new(3, vec![(1, 2)]).unwrap();
        let mut bad = Instance::new(g, 1, None).unwrap();
        bad.terminals = Some((1, 1));
        assert_eq!(bad.validate().unwrap_err(), InstanceError::IdenticalTerminals { v: 1 });

        assert_eq!(
            Graph::new(3, vec![(0, 3)]).unwrap_err(),
            InstanceError::VertexOutOfRange { v: 0, n: 3 }
        );
    }

    #[test]
    fn isolated_vertices_are_legal() {
        let inst = parse_instance("p edge 5 1\ne 1 2\nl 1\n").unwrap();
        assert!(inst.validate().is_ok());
        assert_eq!(inst.graph.vertex_count(), 5);
    }
}
