//! Undirected weighted graphs: the instance type shared by every solver.
//!
//! Graphs are simple (no self-loops, no parallel edges) and stored twice:
//! as a canonical edge list sorted by `(u, v)` with `u < v`, and as
//! per-node adjacency rows for O(degree) neighborhood scans. Node indices
//! are 0-based everywhere inside the library; the 1-based DIMACS
//! convention is translated at the parsing boundary.

use std::fmt;

/// A single undirected edge. Endpoints always satisfy `u < v`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub w: f64,
}

/// Simple undirected graph with real edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n_nodes: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(u32, f64)>>,
}

/// Errors raised while constructing or parsing a graph.
///
/// Parse variants carry the 1-based line number of the offending input
/// line so malformed files can be fixed by hand.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    SelfLoop { node: usize, line: Option<usize> },
    DuplicateEdge { u: usize, v: usize, line: Option<usize> },
    NodeOutOfRange { node: usize, n_nodes: usize, line: Option<usize> },
    MalformedHeader { line: usize, reason: String },
    MalformedLine { line: usize, reason: String },
    NonFiniteWeight { line: Option<usize> },
    MissingHeader,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = |line: &Option<usize>| match line {
            Some(l) => format!(" (line {l})"),
            None => String::new(),
        };
        match self {
            GraphError::SelfLoop { node, line } => {
                write!(f, "self-loop at node {node}{}", at(line))
            }
            GraphError::DuplicateEdge { u, v, line } => {
                write!(f, "duplicate edge ({u}, {v}){}", at(line))
            }
            GraphError::NodeOutOfRange { node, n_nodes, line } => {
                write!(
                    f,
                    "node index {node} out of range for {n_nodes} nodes{}",
                    at(line)
                )
            }
            GraphError::MalformedHeader { line, reason } => {
                write!(f, "malformed header (line {line}): {reason}")
            }
            GraphError::MalformedLine { line, reason } => {
                write!(f, "malformed line {line}: {reason}")
            }
            GraphError::NonFiniteWeight { line } => {
                write!(f, "edge weight is not finite{}", at(line))
            }
            GraphError::MissingHeader => write!(f, "input has no header line"),
        }
    }
}

impl std::error::Error for GraphError {}

impl Graph {
    /// Builds a graph from `(u, v, w)` triples, normalizing endpoint order
    /// and sorting the edge list. Rejects self-loops, duplicate edges
    /// (regardless of orientation), out-of-range endpoints, and non-finite
    /// weights.
    pub fn new(n_nodes: usize, edges: &[(usize, usize, f64)]) -> Result<Graph, GraphError> {
        let mut list: Vec<Edge> = Vec::with_capacity(edges.len());
        for &(a, b, w) in edges {
            if a == b {
                return Err(GraphError::SelfLoop { node: a, line: None });
            }
            for &node in &[a, b] {
                if node >= n_nodes {
                    return Err(GraphError::NodeOutOfRange { node, n_nodes, line: None });
                }
            }
            if !w.is_finite() {
                return Err(GraphError::NonFiniteWeight { line: None });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge { u: u as u32, v: v as u32, w });
        }
        list.sort_by_key(|e| (e.u, e.v));
        for pair in list.windows(2) {
            if pair[0].u == pair[1].u && pair[0].v == pair[1].v {
                return Err(GraphError::DuplicateEdge {
                    u: pair[0].u as usize,
                    v: pair[0].v as usize,
                    line: None,
                });
            }
        }
        let mut adj = vec![Vec::new(); n_nodes];
        for e in &list {
            adj[e.u as usize].push((e.v, e.w));
            adj[e.v as usize].push((e.u, e.w));
        }
        for row in &mut adj {
            row.sort_by_key(|&(j, _)| j);
        }
        Ok(Graph { n_nodes, edges: list, adj })
    }

    /// Builds an unweighted graph (all weights 1) from endpoint pairs.
    pub fn from_pairs(n_nodes: usize, pairs: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let triples: Vec<(usize, usize, f64)> =
            pairs.iter().map(|&(a, b)| (a, b, 1.0)).collect();
        Graph::new(n_nodes, &triples)
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list: sorted by `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Neighbors of `node` with edge weights, sorted by neighbor index.
    pub fn neighbors(&self, node: usize) -> &[(u32, f64)] {
        &self.adj[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adj[node].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search_by_key(&(b as u32), |&(j, _)| j).is_ok()
    }

    /// Complement graph with unit weights: edges exactly where `self` has
    /// none. Used by the clique/independent-set duality checks.
    pub fn complement(&self) -> Graph {
        let mut pairs = Vec::new();
        for a in 0..self.n_nodes {
            for b in (a + 1)..self.n_nodes {
                if !self.has_edge(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Graph::from_pairs(self.n_nodes, &pairs).expect("complement of a simple graph is simple")
    }

    /// Sum of all edge weights.
    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Serializes to DIMACS edge format (1-based `e u v` lines, sorted).
    /// Weights are not representable in this format and are dropped.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p edge {} {}\n", self.n_nodes, self.edges.len());
        for e in &self.edges {
            out.push_str(&format!("e {} {}\n", e.u + 1, e.v + 1));
        }
        out
    }

    /// Serializes to the weighted edge-list format: a `N M` header, then
    /// one 0-based `u v w` line per edge in canonical order. Round-trips
    /// through [`parse_weighted_edgelist`] exactly.
    pub fn to_weighted_edgelist(&self) -> String {
        let mut out = format!("{} {}\n", self.n_nodes, self.edges.len());
        for e in &self.edges {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
        }
        out
    }
}

/// Parses DIMACS edge format: a `p edge N M` header, comment lines
/// starting with `c`, and `e i j` lines with 1-based endpoints.
/// Duplicate edges (in either orientation) are an error.
pub fn parse_dimacs(text: &str) -> Result<Graph, GraphError> {
    let mut n_nodes: Option<usize> = None;
    let mut triples: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen_lines: Vec<usize> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "p" => {
                if n_nodes.is_some() {
                    return Err(GraphError::MalformedHeader {
                        line: line_no,
                        reason: "repeated problem line".into(),
                    });
                }
                if fields.len() != 4 || fields[1] != "edge" {
                    return Err(GraphError::MalformedHeader {
                        line: line_no,
                        reason: format!("expected `p edge N M`, got `{line}`"),
                    });
                }
                let n: usize = fields[2].parse().map_err(|_| GraphError::MalformedHeader {
                    line: line_no,
                    reason: format!("bad node count `{}`", fields[2]),
                })?;
                let _m: usize = fields[3].parse().map_err(|_| GraphError::MalformedHeader {
                    line: line_no,
                    reason: format!("bad edge count `{}`", fields[3]),
                })?;
                n_nodes = Some(n);
            }
            "e" => {
                let n = n_nodes.ok_or(GraphError::MissingHeader)?;
                if fields.len() != 3 {
                    return Err(GraphError::MalformedLine {
                        line: line_no,
                        reason: format!("expected `e i j`, got `{line}`"),
                    });
                }
                let parse_endpoint = |s: &str| -> Result<usize, GraphError> {
                    s.parse::<usize>().map_err(|_| GraphError::MalformedLine {
                        line: line_no,
                        reason: format!("bad endpoint `{s}`"),
                    })
                };
                let i = parse_endpoint(fields[1])?;
                let j = parse_endpoint(fields[2])?;
                if i == 0 || j == 0 {
                    return Err(GraphError::MalformedLine {
                        line: line_no,
                        reason: "DIMACS endpoints are 1-based".into(),
                    });
                }
                let (a, b) = (i - 1, j - 1);
                if a == b {
                    return Err(GraphError::SelfLoop { node: a, line: Some(line_no) });
                }
                for &node in &[a, b] {
                    if node >= n {
                        return Err(GraphError::NodeOutOfRange {
                            node,
                            n_nodes: n,
                            line: Some(line_no),
                        });
                    }
                }
                triples.push((a, b, 1.0));
                seen_lines.push(line_no);
            }
            other => {
                return Err(GraphError::MalformedLine {
                    line: line_no,
                    reason: format!("unknown record type `{other}`"),
                });
            }
        }
    }
    let n = n_nodes.ok_or(GraphError::MissingHeader)?;
    check_duplicates(&triples, &seen_lines)?;
    Graph::new(n, &triples)
}

/// Parses the whitespace-separated weighted edge-list format: an optional
/// `N M` header line, then `u v w` lines with 0-based endpoints. Lines
/// starting with `#` are comments. Without a header the node count is
/// inferred as `max endpoint + 1`. Zero-weight edges are kept (they count
/// as structural edges but contribute nothing to weighted energies).
pub fn parse_weighted_edgelist(text: &str) -> Result<Graph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut triples: Vec<(usize, usize, f64)> = Vec::new();
    let mut seen_lines: Vec<usize> = Vec::new();
    let mut first_data_line = true;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if first_data_line && fields.len() == 2 {
            let n: usize = fields[0].parse().map_err(|_| GraphError::MalformedHeader {
                line: line_no,
                reason: format!("bad node count `{}`", fields[0]),
            })?;
            let m: usize = fields[1].parse().map_err(|_| GraphError::MalformedHeader {
                line: line_no,
                reason: format!("bad edge count `{}`", fields[1]),
            })?;
            header = Some((n, m));
            first_data_line = false;
            continue;
        }
        first_data_line = false;
        if fields.len() != 3 {
            return Err(GraphError::MalformedLine {
                line: line_no,
                reason: format!("expected `u v w`, got `{line}`"),
            });
        }
        let parse_endpoint = |s: &str| -> Result<usize, GraphError> {
            s.parse::<usize>().map_err(|_| GraphError::MalformedLine {
                line: line_no,
                reason: format!("bad endpoint `{s}`"),
            })
        };
        let u = parse_endpoint(fields[0])?;
        let v = parse_endpoint(fields[1])?;
        let w: f64 = fields[2].parse().map_err(|_| GraphError::MalformedLine {
            line: line_no,
            reason: format!("bad weight `{}`", fields[2]),
        })?;
        if !w.is_finite() {
            return Err(GraphError::NonFiniteWeight { line: Some(line_no) });
        }
        if u == v {
            return Err(GraphError::SelfLoop { node: u, line: Some(line_no) });
        }
        if let Some((n, _)) = header {
            for &node in &[u, v] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange {
                        node,
                        n_nodes: n,
                        line: Some(line_no),
                    });
                }
            }
        }
        triples.push((u, v, w));
        seen_lines.push(line_no);
    }
    let n = match header {
        Some((n, _)) => n,
        None => triples.iter().map(|&(u, v, _)| u.max(v) + 1).max().unwrap_or(0),
    };
    check_duplicates(&triples, &seen_lines)?;
    Graph::new(n, &triples)
}

/// Reports the first duplicated undirected edge with the line number of
/// its second occurrence.
fn check_duplicates(
    triples: &[(usize, usize, f64)],
    lines: &[usize],
) -> Result<(), GraphError> {
    let mut keyed: Vec<(usize, usize, usize)> = triples
        .iter()
        .zip(lines)
        .map(|(&(a, b, _), &line)| {
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            (u, v, line)
        })
        .collect();
    keyed.sort();
    for pair in keyed.windows(2) {
        if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
            return Err(GraphError::DuplicateEdge {
                u: pair[1].0,
                v: pair[1].1,
                line: Some(pair[1].2),
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_triangle_and_exposes_adjacency() {
        let g = Graph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(g.n_nodes(), 3);
        assert_eq!(g.n_edges(), 3);
        assert_eq!(g.degree(1), 2);
        assert!(g.has_edge(2, 0));
        assert!(!g.has_edge(0, 0));
        assert_eq!(g.neighbors(0), &[(1, 1.0), (2, 1.0)]);
    }

    #[test]
    fn normalizes_endpoint_order() {
        let g = Graph::new(4, &[(3, 1, 2.5)]).unwrap();
        assert_eq!(g.edges()[0].u, 1);
        assert_eq!(g.edges()[0].v, 3);
        assert_eq!(g.edges()[0].w, 2.5);
    }

    #[test]
    fn rejects_self_loop_and_duplicates() {
        assert!(matches!(
            Graph::from_pairs(3, &[(1, 1)]),
            Err(GraphError::SelfLoop { node: 1, .. })
        ));
        // Duplicate detection must see through orientation.
        assert!(matches!(
            Graph::from_pairs(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge { u: 0, v: 1, .. })
        ));
        assert!(matches!(
            Graph::from_pairs(2, &[(0, 5)]),
            Err(GraphError::NodeOutOfRange { node: 5, .. })
        ));
    }

    #[test]
    fn parses_dimacs_triangle() {
        let text = "c sample\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n";
        let g = parse_dimacs(text).unwrap();
        assert_eq!(g.n_nodes(), 3);
        assert_eq!(g.n_edges(), 3);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(0, 2));
        assert!(g.edges().iter().all(|e| e.w == 1.0));
    }

    #[test]
    fn dimacs_duplicate_edge_reports_line() {
        let text = "p edge 3 2\ne 1 2\ne 2 1\n";
        match parse_dimacs(text) {
            Err(GraphError::DuplicateEdge { u: 0, v: 1, line: Some(3) }) => {}
            other => panic!("expected duplicate-edge error at line 3, got {other:?}"),
        }
    }

    #[test]
    fn dimacs_errors_are_precise() {
        assert!(matches!(
            parse_dimacs("p edge x 1\n"),
            Err(GraphError::MalformedHeader { line: 1, .. })
        ));
        assert!(matches!(
            parse_dimacs("p edge 3 1\ne 1 9\n"),
            Err(GraphError::NodeOutOfRange { node: 8, n_nodes: 3, line: Some(2) })
        ));
        assert!(matches!(parse_dimacs("e 1 2\n"), Err(GraphError::MissingHeader)));
        assert!(matches!(
            parse_dimacs("p edge 2 1\ne 1\n"),
            Err(GraphError::MalformedLine { line: 2, .. })
        ));
    }

    #[test]
    fn parses_weighted_edgelist_with_header() {
        let g = parse_weighted_edgelist("2 1\n0 1 -1\n").unwrap();
        assert_eq!(g.n_nodes(), 2);
        assert_eq!(g.n_edges(), 1);
        assert_eq!(g.edges()[0].w, -1.0);
    }

    #[test]
    fn parses_edgeless_graph_from_header() {
        let g = parse_weighted_edgelist("2 0\n").unwrap();
        assert_eq!(g.n_nodes(), 2);
        assert_eq!(g.n_edges(), 0);
    }

    #[test]
    fn weighted_edgelist_rejects_bad_weight() {
        assert!(matches!(
            parse_weighted_edgelist("2 1\n0 1 x\n"),
            Err(GraphError::MalformedLine { line: 2, .. })
        ));
    }

    #[test]
    fn weighted_edgelist_infers_node_count_without_header() {
        let g = parse_weighted_edgelist("0 1 1.0\n2 3 0.5\n").unwrap();
        assert_eq!(g.n_nodes(), 4);
        assert_eq!(g.n_edges(), 2);
    }

    #[test]
    fn zero_weight_edges_are_kept() {
        let g = parse_weighted_edgelist("3 2\n0 1 0\n1 2 1\n").unwrap();
        assert_eq!(g.n_edges(), 2);
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn round_trips_weighted_edgelist() {
        let g = Graph::new(5, &[(0, 4, -1.5), (2, 1, 0.0), (3, 4, 2.0)]).unwrap();
        let text = g.to_weighted_edgelist();
        let back = parse_weighted_edgelist(&text).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn round_trips_dimacs_for_unit_weights() {
        let g = Graph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let back = parse_dimacs(&g.to_dimacs()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn complement_of_path_is_single_edge() {
        // P3 = 0-1-2; complement has only (0, 2).
        let g = Graph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        let c = g.complement();
        assert_eq!(c.n_edges(), 1);
        assert!(c.has_edge(0, 2));
    }
}
