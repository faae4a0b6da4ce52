//! Simple undirected graphs: model, JSON parsing, connectivity queries.

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use thiserror::Error;

/// Library-wide degree cap; the drawing algorithms enforce tighter ones.
pub const DEGREE_CAP: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(String),
    #[error("duplicate edge between {0} and {1}")]
    MultiEdge(String, String),
    #[error("malformed graph document: {0}")]
    MalformedDocument(String),
    #[error("vertex {0} has degree {1}, above the supported cap of 8")]
    DegreeCapExceeded(String, usize),
}

/// Connectivity classification, ordered weakest to strongest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConnectivityClass {
    Disconnected,
    Connected,
    Biconnected,
    Triconnected,
}

/// Simple undirected graph over dense vertex ids 0..n.
///
/// Input labels are kept in a side table; all algorithms work on the ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    labels: Vec<String>,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list, validating simplicity and the cap.
    pub fn new(labels: Vec<String>, edge_list: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let n = labels.len();
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edge_list {
            if a >= n || b >= n {
                return Err(GraphError::MalformedDocument(format!(
                    "edge ({a}, {b}) references a missing vertex"
                )));
            }
            if a == b {
                return Err(GraphError::SelfLoop(labels[a].clone()));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(GraphError::MultiEdge(labels[a].clone(), labels[b].clone()));
            }
            edges.push((a, b));
            adj[a].push(b);
            adj[b].push(a);
        }
        for v in 0..n {
            if adj[v].len() > DEGREE_CAP {
                return Err(GraphError::DegreeCapExceeded(labels[v].clone(), adj[v].len()));
            }
        }
        Ok(Graph { labels, edges, adj })
    }

    /// Convenience constructor with numeric labels "0".."n-1".
    pub fn from_edges(n: usize, edge_list: &[(usize, usize)]) -> Result<Graph, GraphError> {
        Graph::new((0..n).map(|i| i.to_string()).collect(), edge_list)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(&b)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Index of vertices reachable from 0 (all of them iff connected).
    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        reachable_without(&self.adj, 0, usize::MAX) == n
    }

    /// Cut vertices, ascending.
    pub fn articulation_points(&self) -> Vec<usize> {
        articulation_points_of(&self.adj)
    }

    /// Connected, no cut vertex, at least 3 vertices.
    pub fn is_biconnected(&self) -> bool {
        self.vertex_count() >= 3 && self.is_connected() && self.articulation_points().is_empty()
    }

    /// No separation pair: removing any single vertex leaves it biconnected.
    pub fn is_triconnected(&self) -> bool {
        let n = self.vertex_count();
        if n < 4 || !self.is_biconnected() {
            return false;
        }
        for v in 0..n {
            let adj = drop_vertex(&self.adj, v);
            let start = (0..n).find(|&u| u != v).unwrap();
            if reachable_without(&adj, start, v) != n - 1 {
                return false;
            }
            if !articulation_points_without(&adj, v).is_empty() {
                return false;
            }
        }
        true
    }

    pub fn connectivity_class(&self) -> ConnectivityClass {
        if !self.is_connected() {
            ConnectivityClass::Disconnected
        } else if self.is_triconnected() {
            ConnectivityClass::Triconnected
        } else if self.is_biconnected() {
            ConnectivityClass::Biconnected
        } else {
            ConnectivityClass::Connected
        }
    }

    /// Deterministic JSON serialization in the document format of `parse_graph`.
    pub fn to_json_string(&self) -> String {
        let mut out = String::from("{\"nodes\":[");
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("{{\"id\":{}}}", json_str(l)));
        }
        out.push_str("],\"edges\":[");
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!("[{},{}]", json_str(&self.labels[a]), json_str(&self.labels[b])));
        }
        out.push_str("]}");
        out
    }
}

pub(crate) fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("string serialization cannot fail")
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    nodes: Vec<NodeDoc>,
    edges: Vec<(String, String)>,
    #[serde(default)]
    embedding: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
}

/// Graph plus the optional rotation system supplied in the document.
pub struct ParsedGraph {
    pub graph: Graph,
    /// Per-vertex cyclic neighbor order, aligned with vertex ids.
    pub rotation: Option<Vec<Vec<usize>>>,
}

/// Parses the JSON graph document format.
///
/// `{"nodes":[{"id":"a"},...],"edges":[["a","b"],...],"embedding":{...}?}`;
/// unknown keys are rejected.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    Ok(parse_graph_document(text)?.graph)
}

/// Parses the document keeping the optional embedding map.
pub fn parse_graph_document(text: &str) -> Result<ParsedGraph, GraphError> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| GraphError::MalformedDocument(e.to_string()))?;
    let mut index = BTreeMap::new();
    for (i, node) in doc.nodes.iter().enumerate() {
        if index.insert(node.id.clone(), i).is_some() {
            return Err(GraphError::MalformedDocument(format!(
                "duplicate node id {:?}",
                node.id
            )));
        }
    }
    let mut edge_list = Vec::with_capacity(doc.edges.len());
    for (a, b) in &doc.edges {
        let ia = *index
            .get(a)
            .ok_or_else(|| GraphError::MalformedDocument(format!("edge endpoint {a:?} is not a node")))?;
        let ib = *index
            .get(b)
            .ok_or_else(|| GraphError::MalformedDocument(format!("edge endpoint {b:?} is not a node")))?;
        edge_list.push((ia, ib));
    }
    let labels: Vec<String> = doc.nodes.into_iter().map(|n| n.id).collect();
    let graph = Graph::new(labels, &edge_list)?;
    let rotation = match doc.embedding {
        None => None,
        Some(map) => {
            let mut rot = vec![Vec::new(); graph.vertex_count()];
            let mut seen = vec![false; graph.vertex_count()];
            for (id, nbrs) in &map {
                let v = *index
                    .get(id)
                    .ok_or_else(|| GraphError::MalformedDocument(format!("embedding key {id:?} is not a node")))?;
                seen[v] = true;
                for nb in nbrs {
                    let u = *index.get(nb).ok_or_else(|| {
                        GraphError::MalformedDocument(format!("embedding neighbor {nb:?} is not a node"))
                    })?;
                    rot[v].push(u);
                }
                let mut expect: Vec<usize> = graph.neighbors(v).to_vec();
                let mut got = rot[v].clone();
                expect.sort_unstable();
                got.sort_unstable();
                if expect != got {
                    return Err(GraphError::MalformedDocument(format!(
                        "embedding at {id:?} is not a permutation of its neighbors"
                    )));
                }
            }
            if !seen.iter().all(|&s| s) {
                return Err(GraphError::MalformedDocument(
                    "embedding must list every vertex".into(),
                ));
            }
            Some(rot)
        }
    };
    Ok(ParsedGraph { graph, rotation })
}

fn drop_vertex(adj: &[Vec<usize>], v: usize) -> Vec<Vec<usize>> {
    adj.iter()
        .enumerate()
        .map(|(u, nbrs)| {
            if u == v {
                Vec::new()
            } else {
                nbrs.iter().copied().filter(|&w| w != v).collect()
            }
        })
        .collect()
}

pub(crate) fn reachable_without(adj: &[Vec<usize>], start: usize, skip: usize) -> usize {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 0;
    while let Some(v) = stack.pop() {
        count += 1;
        for &w in &adj[v] {
            if w != skip && !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    count
}

fn articulation_points_of(adj: &[Vec<usize>]) -> Vec<usize> {
    articulation_points_without(adj, usize::MAX)
}

pub(crate) fn articulation_points_without(adj: &[Vec<usize>], skip: usize) -> Vec<usize> {
    let n = adj.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut cut = vec![false; n];
    let mut timer = 0usize;
    for root in 0..n {
        if root == skip || disc[root] != usize::MAX || adj[root].is_empty() {
            continue;
        }
        // Iterative DFS carrying (vertex, parent, neighbor cursor).
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        let mut root_children = 0usize;
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (v, parent, ref mut cursor)) = stack.last_mut() {
            if *cursor < adj[v].len() {
                let w = adj[v][*cursor];
                *cursor += 1;
                if w == skip || w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, v, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p] = low[p].min(low[v]);
                    if p != root && low[v] >= disc[p] {
                        cut[p] = true;
                    }
                }
            }
        }
        if root_children >= 2 {
            cut[root] = true;
        }
    }
    (0..n).filter(|&v| cut[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    pub fn octahedron() -> Graph {
        Graph::from_edges(
            6,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 1),
                (5, 1),
                (5, 2),
                (5, 3),
                (5, 4),
            ],
        )
        .unwrap()
    }

    #[test]
    fn parse_k4() {
        let doc = r#"{"nodes":[{"id":"a"},{"id":"b"},{"id":"c"},{"id":"d"}],
                      "edges":[["a","b"],["a","c"],["a","d"],["b","c"],["b","d"],["c","d"]]}"#;
        let g = parse_graph(doc).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.max_degree(), 3);
    }

    #[test]
    fn parse_rejects_self_loop() {
        let doc = r#"{"nodes":[{"id":"a"},{"id":"b"}],"edges":[["a","a"]]}"#;
        assert_eq!(parse_graph(doc), Err(GraphError::SelfLoop("a".into())));
    }

    #[test]
    fn parse_rejects_duplicate_edge() {
        let doc = r#"{"nodes":[{"id":"a"},{"id":"b"}],"edges":[["a","b"],["b","a"]]}"#;
        assert_eq!(parse_graph(doc), Err(GraphError::MultiEdge("b".into(), "a".into())));
    }

    #[test]
    fn parse_rejects_unknown_keys() {
        let doc = r#"{"nodes":[{"id":"a"}],"edges":[],"color":"red"}"#;
        assert!(matches!(parse_graph(doc), Err(GraphError::MalformedDocument(_))));
    }

    #[test]
    fn octahedron_is_4_regular() {
        let g = octahedron();
        assert_eq!(g.edge_count(), 12);
        assert!((0..6).all(|v| g.degree(v) == 4));
    }

    #[test]
    fn json_round_trip_is_identity() {
        let g = octahedron();
        let again = parse_graph(&g.to_json_string()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn connectivity_classes() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.connectivity_class(), ConnectivityClass::Connected);

        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(c4.connectivity_class(), ConnectivityClass::Biconnected);

        assert_eq!(k4().connectivity_class(), ConnectivityClass::Triconnected);
        assert_eq!(octahedron().connectivity_class(), ConnectivityClass::Triconnected);

        let two = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(two.connectivity_class(), ConnectivityClass::Disconnected);
    }

    #[test]
    fn articulation_point_in_bowtie() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        assert_eq!(g.articulation_points(), vec![2]);
    }

    #[test]
    fn embedding_map_is_validated() {
        let doc = r#"{"nodes":[{"id":"a"},{"id":"b"},{"id":"c"}],
                      "edges":[["a","b"],["b","c"],["c","a"]],
                      "embedding":{"a":["b","c"],"b":["c","a"],"c":["a","b"]}}"#;
        let parsed = parse_graph_document(doc).unwrap();
        assert_eq!(parsed.rotation.unwrap()[0], vec![1, 2]);

        let bad = r#"{"nodes":[{"id":"a"},{"id":"b"},{"id":"c"}],
                      "edges":[["a","b"],["b","c"],["c","a"]],
                      "embedding":{"a":["b","b"],"b":["c","a"],"c":["a","b"]}}"#;
        assert!(parse_graph_document(bad).is_err());
    }
}
