//! Directed graph with a scalar node attribute, plus the `.edges` text format.
//!
//! Nodes are dense ids `0..node_count`. Edges are ordered pairs stored in a
//! sorted set, so iteration order (and therefore serialized output) is
//! deterministic. The attribute is the homophily scalar in `[0, 1]`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// Node id. Graphs in this crate stay well below `u32` range.
pub type NodeId = u32;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("self-loop ({0}, {0}) is not allowed")]
    SelfLoop(NodeId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("node id {id} out of range for {node_count} nodes")]
    NodeOutOfRange { id: NodeId, node_count: usize },
    #[error("attribute {0} outside [0, 1]")]
    AttributeOutOfRange(f64),
    #[error("graph must have at least one node")]
    Empty,
}

/// Parse failure for the `.edges` text format, carrying the 1-based line.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct EdgeListParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: BTreeSet<(NodeId, NodeId)>,
    attributes: Vec<f64>,
}

impl Graph {
    /// Edgeless graph with the given per-node attributes.
    pub fn new(attributes: Vec<f64>) -> Result<Self, GraphError> {
        if attributes.is_empty() {
            return Err(GraphError::Empty);
        }
        for &a in &attributes {
            if !(0.0..=1.0).contains(&a) {
                return Err(GraphError::AttributeOutOfRange(a));
            }
        }
        Ok(Graph {
            node_count: attributes.len(),
            edges: BTreeSet::new(),
            attributes,
        })
    }

    /// Complete directed graph: every ordered pair (i, j), i != j, giving
    /// exactly n*(n-1) edges. Attributes are all 0.5.
    pub fn complete_digraph(n: usize) -> Result<Self, GraphError> {
        let mut g = Graph::new(vec![0.5; n])?;
        for i in 0..n as NodeId {
            for j in 0..n as NodeId {
                if i != j {
                    g.edges.insert((i, j));
                }
            }
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn attribute(&self, id: NodeId) -> f64 {
        self.attributes[id as usize]
    }

    pub fn attributes(&self) -> &[f64] {
        &self.attributes
    }

    pub fn has_edge(&self, src: NodeId, dst: NodeId) -> bool {
        self.edges.contains(&(src, dst))
    }

    /// Edges in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn add_edge(&mut self, src: NodeId, dst: NodeId) -> Result<(), GraphError> {
        let n = self.node_count;
        for id in [src, dst] {
            if id as usize >= n {
                return Err(GraphError::NodeOutOfRange { id, node_count: n });
            }
        }
        if src == dst {
            return Err(GraphError::SelfLoop(src));
        }
        if !self.edges.insert((src, dst)) {
            return Err(GraphError::DuplicateEdge(src, dst));
        }
        Ok(())
    }

    /// In-degree of every node.
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.node_count];
        for &(_, dst) in &self.edges {
            deg[dst as usize] += 1;
        }
        deg
    }

    /// Undirected projection as sorted, deduplicated adjacency lists.
    ///
    /// Every simulation-facing neighborhood (voting, centrality, cascades)
    /// is taken over this projection.
    pub fn undirected_adjacency(&self) -> Vec<Vec<NodeId>> {
        let mut adj: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); self.node_count];
        for &(src, dst) in &self.edges {
            adj[src as usize].insert(dst);
            adj[dst as usize].insert(src);
        }
        adj.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    /// Serialize to the `.edges` text format:
    /// a `nodes <n>` header, one `attr <id> <float>` line per node, then one
    /// `<src> <dst>` line per edge. LF endings. Attribute floats carry at
    /// least six decimal digits and round-trip exactly.
    pub fn write_edge_list(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("nodes {}\n", self.node_count));
        for (id, &a) in self.attributes.iter().enumerate() {
            out.push_str(&format!("attr {} {}\n", id, format_attr(a)));
        }
        for &(src, dst) in &self.edges {
            out.push_str(&format!("{} {}\n", src, dst));
        }
        out
    }

    /// Parse the `.edges` text format. Errors name the offending line.
    pub fn parse_edge_list(text: &str) -> Result<Self, EdgeListParseError> {
        let err = |line: usize, message: String| EdgeListParseError { line, message };
        let mut lines = text.lines().enumerate();

        let (_, header) = lines
            .next()
            .ok_or_else(|| err(1, String::from("missing `nodes <n>` header")))?;
        let node_count: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["nodes", n] => n
                .parse()
                .map_err(|_| err(1, format!("invalid node count `{n}`")))?,
            _ => return Err(err(1, format!("expected `nodes <n>`, got `{header}`"))),
        };
        if node_count == 0 {
            return Err(err(1, String::from("graph must have at least one node")));
        }

        let mut attributes = vec![f64::NAN; node_count];
        let mut seen = vec![false; node_count];
        let mut edges = BTreeSet::new();
        let mut attrs_done = false;
        for (idx, line) in lines {
            let lineno = idx + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["attr", id, value] => {
                    if attrs_done {
                        return Err(err(lineno, String::from("attr line after edge lines")));
                    }
                    let id: usize = id
                        .parse()
                        .map_err(|_| err(lineno, format!("invalid node id `{id}`")))?;
                    if id >= node_count {
                        return Err(err(lineno, format!("node id {id} out of range")));
                    }
                    if seen[id] {
                        return Err(err(lineno, format!("duplicate attr for node {id}")));
                    }
                    let value: f64 = value
                        .parse()
                        .map_err(|_| err(lineno, format!("invalid attribute `{value}`")))?;
                    if !(0.0..=1.0).contains(&value) {
                        return Err(err(lineno, format!("attribute {value} outside [0, 1]")));
                    }
                    attributes[id] = value;
                    seen[id] = true;
                }
                [src, dst] => {
                    attrs_done = true;
                    if let Some(missing) = seen.iter().position(|&s| !s) {
                        return Err(err(lineno, format!("missing attr for node {missing}")));
                    }
                    let src: NodeId = src
                        .parse()
                        .map_err(|_| err(lineno, format!("invalid node id `{src}`")))?;
                    let dst: NodeId = dst
                        .parse()
                        .map_err(|_| err(lineno, format!("invalid node id `{dst}`")))?;
                    if src as usize >= node_count || dst as usize >= node_count {
                        return Err(err(lineno, format!("edge ({src}, {dst}) out of range")));
                    }
                    if src == dst {
                        return Err(err(lineno, format!("self-loop ({src}, {src})")));
                    }
                    if !edges.insert((src, dst)) {
                        return Err(err(lineno, format!("duplicate edge ({src}, {dst})")));
                    }
                }
                [] => return Err(err(lineno, String::from("blank line"))),
                _ => return Err(err(lineno, format!("malformed line `{line}`"))),
            }
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(EdgeListParseError {
                line: text.lines().count() + 1,
                message: format!("missing attr for node {missing}"),
            });
        }
        Ok(Graph {
            node_count,
            edges,
            attributes,
        })
    }
}

/// Shortest decimal rendering with at least 6 fractional digits that parses
/// back to the identical f64.
fn format_attr(value: f64) -> String {
    // Precision here is decimal places, so small attributes need extra
    // digits beyond the 17 significant ones.
    for precision in 6..=40 {
        let s = format!("{value:.precision$}");
        if s.parse::<f64>() == Ok(value) {
            return s;
        }
    }
    // Display is shortest-round-trip; only reachable for values so small
    // that they carry six digits anyway.
    format!("{value}")
}
