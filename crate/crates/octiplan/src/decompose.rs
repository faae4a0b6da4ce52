//! Graph decompositions behind the drawing algorithms: canonical order
//! for triconnected plane graphs, BC-tree, and SPQR-tree with
//! pertinent-degree queries and root selection.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::embed::{Dart, PlanarEmbedding};
use crate::graph::{self, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecomposeError {
    #[error("graph is not triconnected")]
    NotTriconnected,
    #[error("base edge is not on the outer face")]
    BaseNotOnOuterFace,
    #[error("graph is not connected")]
    NotConnected,
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("root policy infeasible: {0}")]
    PolicyInfeasible(String),
}

// --- canonical order ---------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionKind {
    Chain,
    Singleton,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub vertices: Vec<usize>,
    pub kind: PartitionKind,
}

/// Ordered partition P_0..P_m of the vertices: P_0 is the base pair
/// (v1, v2), P_m the apex {v_n}, chains are stored in contour order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalOrder {
    pub partitions: Vec<Partition>,
    pub base_edge: (usize, usize),
    pub apex: usize,
}

impl CanonicalOrder {
    /// Partition index per vertex.
    pub fn partition_index(&self) -> Vec<usize> {
        let n: usize = self.partitions.iter().map(|p| p.vertices.len()).sum();
        let mut idx = vec![usize::MAX; n];
        for (k, p) in self.partitions.iter().enumerate() {
            for &v in &p.vertices {
                idx[v] = k;
            }
        }
        idx
    }
}

/// Computes a canonical order by reverse deletion: repeatedly removes a
/// removable singleton or maximal chain from the current outer face,
/// breaking ties by lowest vertex id.
pub fn canonical_order(
    emb: &PlanarEmbedding,
    base: (usize, usize),
) -> Result<CanonicalOrder, DecomposeError> {
    let g = emb.graph();
    if !g.is_triconnected() {
        return Err(DecomposeError::NotTriconnected);
    }
    let (v1, v2) = base;
    let outer = emb.face(emb.outer_face());
    let d0 = if outer.contains(&(v1, v2)) {
        (v1, v2)
    } else if outer.contains(&(v2, v1)) {
        (v2, v1)
    } else {
        return Err(DecomposeError::BaseNotOnOuterFace);
    };

    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let live_deg = |live: &[bool], v: usize| adj[v].iter().filter(|&&w| live[w]).count();
    let mut live = vec![true; n];

    let full = contour_of(&restricted_outer_walk(emb, &live, d0), v1, v2);
    let apex = full[1];
    let mut rev = vec![Partition { vertices: vec![apex], kind: PartitionKind::Singleton }];
    live[apex] = false;

    loop {
        if (0..n).filter(|&v| live[v]).all(|v| live_deg(&live, v) == 2) {
            // the remaining graph is a cycle through the base edge; its
            // interior path becomes P_1
            let c = contour_of(&restricted_outer_walk(emb, &live, d0), v1, v2);
            let interior = c[1..c.len() - 1].to_vec();
            assert!(!interior.is_empty(), "cycle stage must keep an interior path");
            let kind = kind_of(&interior);
            rev.push(Partition { vertices: interior, kind });
            break;
        }
        let c = contour_of(&restricted_outer_walk(emb, &live, d0), v1, v2);
        let interior = &c[1..c.len() - 1];
        let mut candidates: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < interior.len() {
            if live_deg(&live, interior[i]) == 2 {
                let mut j = i;
                while j + 1 < interior.len() && live_deg(&live, interior[j + 1]) == 2 {
                    j += 1;
                }
                let run = interior[i..=j].to_vec();
                let lost = run.iter().all(|&w| g.degree(w) > 2);
                if lost && live_biconnected(&adj, &live, &run) {
                    candidates.push(run);
                }
                i = j + 1;
            } else {
                let w = interior[i];
                if g.degree(w) > live_deg(&live, w) && live_biconnected(&adj, &live, &[w]) {
                    candidates.push(vec![w]);
                }
                i += 1;
            }
        }
        let best = candidates
            .into_iter()
            .min_by_key(|p| *p.iter().min().unwrap())
            .expect("a triconnected plane graph always has a removable partition");
        for &w in &best {
            live[w] = false;
        }
        let kind = kind_of(&best);
        rev.push(Partition { vertices: best, kind });
    }

    let mut partitions = vec![Partition { vertices: vec![v1, v2], kind: PartitionKind::Chain }];
    partitions.extend(rev.into_iter().rev());
    Ok(CanonicalOrder { partitions, base_edge: (v1, v2), apex })
}

fn kind_of(vs: &[usize]) -> PartitionKind {
    if vs.len() == 1 {
        PartitionKind::Singleton
    } else {
        PartitionKind::Chain
    }
}

/// Checks the three defining properties of a canonical order directly
/// against the embedding, independently of the construction above.
pub fn validate_canonical_order(
    emb: &PlanarEmbedding,
    ord: &CanonicalOrder,
) -> Result<(), String> {
    let g = emb.graph();
    let n = g.vertex_count();
    let parts = &ord.partitions;
    if parts.len() < 2 {
        return Err("fewer than two partitions".into());
    }
    let (v1, v2) = ord.base_edge;
    if parts[0].vertices != vec![v1, v2] {
        return Err("P_0 must be the base pair".into());
    }
    if parts.last().unwrap().vertices != vec![ord.apex] {
        return Err("P_m must be the apex singleton".into());
    }
    let mut owner = vec![usize::MAX; n];
    for (k, p) in parts.iter().enumerate() {
        if p.vertices.is_empty() {
            return Err(format!("partition {k} is empty"));
        }
        for &v in &p.vertices {
            if v >= n || owner[v] != usize::MAX {
                return Err(format!("vertex {v} does not appear exactly once"));
            }
            owner[v] = k;
        }
        if p.kind != kind_of(&p.vertices) {
            return Err(format!("partition {k} has the wrong kind"));
        }
        for w in p.vertices.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(format!("partition {k} is not a path"));
            }
        }
    }
    if owner.contains(&usize::MAX) {
        return Err("partitions do not cover the vertex set".into());
    }
    if !g.has_edge(v1, v2) || !g.has_edge(v1, ord.apex) {
        return Err("base or apex edge missing".into());
    }
    let outer: BTreeSet<Dart> = emb.face(emb.outer_face()).iter().copied().collect();
    let on_outer = |a: usize, b: usize| outer.contains(&(a, b)) || outer.contains(&(b, a));
    if !on_outer(v2, v1) || !on_outer(v1, ord.apex) {
        return Err("v2 -> v1 -> v_n is not a path on the outer face".into());
    }
    let d0 = if outer.contains(&(v1, v2)) { (v1, v2) } else { (v2, v1) };

    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let m = parts.len() - 1;
    let mut live = vec![false; n];
    for &v in &parts[0].vertices {
        live[v] = true;
    }
    for k in 1..=m {
        let boundary: BTreeSet<usize> =
            restricted_outer_walk(emb, &live, d0).into_iter().collect();
        for &v in &parts[k].vertices {
            live[v] = true;
        }
        if k == m {
            break;
        }
        if !live_biconnected(&adj, &live, &[]) {
            return Err(format!("G_{k} is not biconnected"));
        }
        for &v in &parts[k].vertices {
            for &w in &adj[v] {
                if owner[w] < k && !boundary.contains(&w) {
                    return Err(format!(
                        "neighbor {w} of P_{k} is not on the outer face of G_{}",
                        k - 1
                    ));
                }
            }
        }
        for &v in &parts[k].vertices {
            if !adj[v].iter().any(|&w| owner[w] > k) {
                return Err(format!("vertex {v} of P_{k} has no later neighbor"));
            }
        }
    }
    Ok(())
}

/// Face walk starting at dart d0 in the embedding restricted to live
/// vertices; returns the tails of the traversed darts.
fn restricted_outer_walk(emb: &PlanarEmbedding, live: &[bool], d0: Dart) -> Vec<usize> {
    let succ = |v: usize, u: usize| -> usize {
        let rot = emb.rotation(v);
        let i = rot.iter().position(|&w| w == u).expect("dart endpoint adjacency");
        (1..=rot.len())
            .map(|k| rot[(i + k) % rot.len()])
            .find(|&w| live[w])
            .expect("live vertex with no live neighbor")
    };
    let mut walk = Vec::new();
    let mut cur = d0;
    loop {
        walk.push(cur.0);
        cur = (cur.1, succ(cur.1, cur.0));
        if cur == d0 {
            break;
        }
    }
    walk
}

/// Rewrites an outer-face walk through the base edge into the contour
/// v1, ..., v2.
fn contour_of(walk: &[usize], v1: usize, v2: usize) -> Vec<usize> {
    let c = if walk[0] == v1 {
        let mut c = vec![v1];
        c.extend(walk[1..].iter().rev().copied());
        c
    } else {
        let mut c = walk[1..].to_vec();
        c.push(walk[0]);
        c
    };
    assert!(c[0] == v1 && *c.last().unwrap() == v2, "contour must run v1..v2");
    c
}

/// Biconnectivity of the live subgraph after removing `minus`.
fn live_biconnected(adj: &[Vec<usize>], live: &[bool], minus: &[usize]) -> bool {
    let mut live2 = live.to_vec();
    for &v in minus {
        live2[v] = false;
    }
    let verts: Vec<usize> = (0..adj.len()).filter(|&v| live2[v]).collect();
    if verts.len() < 3 {
        return false;
    }
    let fadj: Vec<Vec<usize>> = (0..adj.len())
        .map(|v| {
            if live2[v] {
                adj[v].iter().copied().filter(|&w| live2[w]).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    graph::reachable_without(&fadj, verts[0], usize::MAX) == verts.len()
        && graph::articulation_points_without(&fadj, usize::MAX).is_empty()
}

// --- BC-tree -----------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BNode {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub is_bridge: bool,
}

/// Bipartite tree of biconnected components (B) and cut vertices (C),
/// rooted at the lowest component id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BcTree {
    pub b_nodes: Vec<BNode>,
    pub c_nodes: Vec<usize>,
    pub b_adj: Vec<Vec<usize>>,
    pub c_adj: Vec<Vec<usize>>,
    pub root: usize,
    /// Cut vertex joining each non-root B-node toward the root.
    pub link_vertex: Vec<Option<usize>>,
}

pub fn build_bc_tree(g: &Graph) -> Result<BcTree, DecomposeError> {
    if g.vertex_count() == 0 || !g.is_connected() {
        return Err(DecomposeError::NotConnected);
    }
    let mut b_nodes: Vec<BNode> = Vec::new();
    if g.vertex_count() == 1 {
        b_nodes.push(BNode { vertices: vec![0], edges: Vec::new(), is_bridge: false });
    }
    for block in crate::embed::blocks(g) {
        let mut es: Vec<(usize, usize)> =
            block.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        es.sort_unstable();
        let vs: BTreeSet<usize> = es.iter().flat_map(|&(a, b)| [a, b]).collect();
        let is_bridge = es.len() == 1;
        b_nodes.push(BNode { vertices: vs.into_iter().collect(), edges: es, is_bridge });
    }
    let c_nodes = g.articulation_points();
    let mut b_adj = vec![Vec::new(); b_nodes.len()];
    let mut c_adj = vec![Vec::new(); c_nodes.len()];
    for (ci, &cv) in c_nodes.iter().enumerate() {
        for (bi, b) in b_nodes.iter().enumerate() {
            if b.vertices.binary_search(&cv).is_ok() {
                b_adj[bi].push(ci);
                c_adj[ci].push(bi);
            }
        }
    }
    let root = 0;
    let mut link_vertex = vec![None; b_nodes.len()];
    let mut seen = vec![false; b_nodes.len()];
    seen[root] = true;
    let mut queue = vec![root];
    let mut head = 0;
    while head < queue.len() {
        let b = queue[head];
        head += 1;
        for &ci in &b_adj[b] {
            for &b2 in &c_adj[ci] {
                if !seen[b2] {
                    seen[b2] = true;
                    link_vertex[b2] = Some(c_nodes[ci]);
                    queue.push(b2);
                }
            }
        }
    }
    Ok(BcTree { b_nodes, c_nodes, b_adj, c_adj, root, link_vertex })
}

// --- SPQR-tree ---------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpqrKind {
    S,
    P,
    Q,
    R,
}

impl SpqrKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SpqrKind::S => "S",
            SpqrKind::P => "P",
            SpqrKind::Q => "Q",
            SpqrKind::R => "R",
        }
    }
}

/// Skeleton edge; `twin` names the adjacent tree node for a virtual edge
/// and is None for the real edge of a Q-node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkelEdge {
    pub u: usize,
    pub v: usize,
    pub twin: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpqrNode {
    pub kind: SpqrKind,
    pub edges: Vec<SkelEdge>,
}

/// SPQR-tree with explicit Q-nodes for every real edge. Rooted at a
/// Q-node; `reroot` re-orients parents, poles, and the pertinent-degree
/// cache.
#[derive(Debug, Clone)]
pub struct SpqrTree {
    nodes: Vec<SpqrNode>,
    adj: Vec<Vec<usize>>,
    root: usize,
    parent: Vec<Option<usize>>,
    poles: Vec<(usize, usize)>,
    pdeg: Vec<BTreeMap<usize, usize>>,
}

impl SpqrTree {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: usize) -> &SpqrNode {
        &self.nodes[id]
    }

    pub fn kind(&self, id: usize) -> SpqrKind {
        self.nodes[id].kind
    }

    pub fn neighbors(&self, id: usize) -> &[usize] {
        &self.adj[id]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, id: usize) -> Option<usize> {
        self.parent[id]
    }

    pub fn children(&self, id: usize) -> Vec<usize> {
        self.adj[id].iter().copied().filter(|&w| Some(w) != self.parent[id]).collect()
    }

    /// Pole pair (s, t) of a node, ordered (min, max); the root Q-node
    /// reports its real edge.
    pub fn poles(&self, id: usize) -> (usize, usize) {
        self.poles[id]
    }

    /// Endpoints of the real edge of a Q-node.
    pub fn real_edge(&self, id: usize) -> (usize, usize) {
        assert!(self.nodes[id].kind == SpqrKind::Q, "real_edge on a non-Q node");
        let e = self.nodes[id].edges.iter().find(|e| e.twin.is_none()).unwrap();
        (e.u, e.v)
    }

    /// Re-roots the tree at the given Q-node and refreshes parents,
    /// poles, and pertinent degrees.
    pub fn reroot(&mut self, q: usize) {
        assert!(self.nodes[q].kind == SpqrKind::Q, "SPQR root must be a Q-node");
        let nn = self.nodes.len();
        let mut parent = vec![None; nn];
        let mut seen = vec![false; nn];
        seen[q] = true;
        let mut order = vec![q];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    order.push(w);
                }
            }
        }
        let mut poles = vec![(0, 0); nn];
        for v in 0..nn {
            let e = self.nodes[v]
                .edges
                .iter()
                .find(|e| match parent[v] {
                    Some(p) => e.twin == Some(p),
                    None => e.twin.is_none(),
                })
                .expect("every node has a reference edge or is the root Q");
            poles[v] = (e.u.min(e.v), e.u.max(e.v));
        }
        let mut pdeg: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); nn];
        for &v in order.iter().rev() {
            let mut map: BTreeMap<usize, usize> = BTreeMap::new();
            for e in &self.nodes[v].edges {
                if parent[v].is_some() && e.twin == parent[v] {
                    continue;
                }
                for w in [e.u, e.v] {
                    let contrib = match e.twin {
                        None => 1,
                        Some(c) => pdeg[c][&w],
                    };
                    *map.entry(w).or_insert(0) += contrib;
                }
            }
            pdeg[v] = map;
        }
        self.root = q;
        self.parent = parent;
        self.poles = poles;
        self.pdeg = pdeg;
    }

    /// Expands every virtual edge recursively from the root; the result
    /// must equal the input edge multiset.
    pub fn recompose(&self) -> Vec<(usize, usize)> {
        fn walk(t: &SpqrTree, v: usize, from: Option<usize>, out: &mut Vec<(usize, usize)>) {
            for e in &t.nodes[v].edges {
                match e.twin {
                    None => out.push((e.u.min(e.v), e.u.max(e.v))),
                    Some(w) if Some(w) == from => {}
                    Some(w) => walk(t, w, Some(v), out),
                }
            }
        }
        let mut out = Vec::new();
        walk(self, self.root, None, &mut out);
        out.sort_unstable();
        out
    }

    /// Pertinent-degree bounds for max degree k at every non-root pole.
    pub fn lemma1_holds(&self, k: usize) -> bool {
        for v in 0..self.nodes.len() {
            if v == self.root {
                continue;
            }
            let (s, t) = self.poles[v];
            let parent_kind = self.nodes[self.parent[v].unwrap()].kind;
            for pole in [s, t] {
                let sdeg =
                    self.nodes[v].edges.iter().filter(|e| e.u == pole || e.v == pole).count();
                let pd = self.pdeg[v][&pole];
                let bound = match parent_kind {
                    SpqrKind::P | SpqrKind::R => k - 2,
                    _ => k - 1,
                };
                if pd + 1 < sdeg || pd > bound {
                    return false;
                }
            }
        }
        true
    }

    /// Debug dump; not a stability-guaranteed format.
    pub fn to_json_string(&self) -> String {
        let mut out = format!("{{\"root\":{},\"nodes\":[", self.root);
        for (i, node) in self.nodes.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "{{\"kind\":\"{}\",\"poles\":[{},{}],\"edges\":[",
                node.kind.as_str(),
                self.poles[i].0,
                self.poles[i].1
            ));
            for (j, e) in node.edges.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                match e.twin {
                    None => out.push_str(&format!("[{},{},null]", e.u, e.v)),
                    Some(w) => out.push_str(&format!("[{},{},{}]", e.u, e.v, w)),
                }
            }
            out.push_str("]}");
        }
        out.push_str("]}");
        out
    }
}

/// Pertinent degree of a pole: the degree of the vertex in the subgraph
/// represented by the node's subtree.
pub fn pertinent_degree(t: &SpqrTree, node: usize, pole: usize) -> usize {
    *t.pdeg[node].get(&pole).expect("pole must belong to the node's skeleton")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootPolicy {
    AdjacentPR,
    AvoidS,
    IncidentTo(usize),
}

/// Picks the lowest-id Q-node satisfying the policy.
pub fn choose_root_qnode(t: &SpqrTree, policy: RootPolicy) -> Result<usize, DecomposeError> {
    for v in 0..t.node_count() {
        if t.kind(v) != SpqrKind::Q {
            continue;
        }
        let ok = match policy {
            RootPolicy::AdjacentPR => t
                .neighbors(v)
                .iter()
                .any(|&w| matches!(t.kind(w), SpqrKind::P | SpqrKind::R)),
            RootPolicy::AvoidS => t.neighbors(v).iter().all(|&w| t.kind(w) != SpqrKind::S),
            RootPolicy::IncidentTo(x) => {
                let (a, b) = t.real_edge(v);
                a == x || b == x
            }
        };
        if ok {
            return Ok(v);
        }
    }
    let what = match policy {
        RootPolicy::AdjacentPR => "no Q-node adjacent to a P- or R-node".to_string(),
        RootPolicy::AvoidS => "every Q-node is adjacent to an S-node".to_string(),
        RootPolicy::IncidentTo(x) => format!("no Q-node incident to vertex {x}"),
    };
    Err(DecomposeError::PolicyInfeasible(what))
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CEdge {
    u: usize,
    v: usize,
    /// None marks a real edge, Some(p) one half of virtual pair p.
    tag: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CompKind {
    Bond,
    Polygon,
    Rigid,
}

fn comp_kind(edges: &[CEdge]) -> CompKind {
    let verts: BTreeSet<usize> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
    if verts.len() == 2 {
        return CompKind::Bond;
    }
    let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
    for e in edges {
        *deg.entry(e.u).or_insert(0) += 1;
        *deg.entry(e.v).or_insert(0) += 1;
    }
    if deg.values().all(|&d| d == 2) {
        CompKind::Polygon
    } else {
        CompKind::Rigid
    }
}

/// Splits the graph at bundles of parallel edges and separation pairs
/// until every component is a bond, a polygon, or triconnected.
fn split_components(g: &Graph) -> Vec<Vec<CEdge>> {
    let n = g.vertex_count();
    let initial: Vec<CEdge> =
        g.edges().iter().map(|&(a, b)| CEdge { u: a.min(b), v: a.max(b), tag: None }).collect();
    let mut queue = vec![initial];
    let mut done: Vec<Vec<CEdge>> = Vec::new();
    let mut next_pair = 0usize;
    while let Some(comp) = queue.pop() {
        let verts: BTreeSet<usize> = comp.iter().flat_map(|e| [e.u, e.v]).collect();
        if verts.len() == 2 {
            done.push(comp);
            continue;
        }
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (i, e) in comp.iter().enumerate() {
            groups.entry((e.u, e.v)).or_default().push(i);
        }
        if let Some((&(a, b), idxs)) = groups.iter().find(|(_, v)| v.len() >= 2) {
            let keep: BTreeSet<usize> = idxs.iter().copied().collect();
            let p = next_pair;
            next_pair += 1;
            let mut bond: Vec<CEdge> = keep.iter().map(|&i| comp[i].clone()).collect();
            bond.push(CEdge { u: a, v: b, tag: Some(p) });
            let mut rest: Vec<CEdge> = comp
                .iter()
                .enumerate()
                .filter(|(i, _)| !keep.contains(i))
                .map(|(_, e)| e.clone())
                .collect();
            rest.push(CEdge { u: a, v: b, tag: Some(p) });
            queue.push(bond);
            queue.push(rest);
            continue;
        }
        if comp_kind(&comp) == CompKind::Polygon {
            done.push(comp);
            continue;
        }
        let mut fadj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &comp {
            fadj[e.u].push(e.v);
            fadj[e.v].push(e.u);
        }
        let mut pair = None;
        for &a in &verts {
            let arts = graph::articulation_points_without(&fadj, a);
            if let Some(&b) = arts.first() {
                pair = Some((a, b));
                break;
            }
        }
        let Some((a, b)) = pair else {
            done.push(comp);
            continue;
        };
        // split classes: connected components after removing the pair
        let mut class: BTreeMap<usize, usize> = BTreeMap::new();
        let mut class_count = 0;
        for &start in &verts {
            if start == a || start == b || class.contains_key(&start) {
                continue;
            }
            let id = class_count;
            class_count += 1;
            let mut stack = vec![start];
            class.insert(start, id);
            while let Some(x) = stack.pop() {
                for &y in &fadj[x] {
                    if y != a && y != b && !class.contains_key(&y) {
                        class.insert(y, id);
                        stack.push(y);
                    }
                }
            }
        }
        let low_class = class[verts.iter().find(|&&v| v != a && v != b).unwrap()];
        let edge_class = |e: &CEdge| -> Option<usize> {
            if e.u != a && e.u != b {
                Some(class[&e.u])
            } else if e.v != a && e.v != b {
                Some(class[&e.v])
            } else {
                None
            }
        };
        let p = next_pair;
        next_pair += 1;
        let mut piece1: Vec<CEdge> =
            comp.iter().filter(|e| edge_class(e) == Some(low_class)).cloned().collect();
        piece1.push(CEdge { u: a.min(b), v: a.max(b), tag: Some(p) });
        let mut piece2: Vec<CEdge> =
            comp.iter().filter(|e| edge_class(e) != Some(low_class)).cloned().collect();
        piece2.push(CEdge { u: a.min(b), v: a.max(b), tag: Some(p) });
        queue.push(piece1);
        queue.push(piece2);
    }
    done
}

/// Merges adjacent bonds and adjacent polygons so no two equal kinds
/// except rigid components remain neighbors.
fn merge_components(mut comps: Vec<Vec<CEdge>>) -> Vec<Vec<CEdge>> {
    loop {
        let mut where_pair: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, c) in comps.iter().enumerate() {
            for e in c {
                if let Some(p) = e.tag {
                    where_pair.entry(p).or_default().push(i);
                }
            }
        }
        let mut merge: Option<(usize, usize, usize)> = None;
        for (&p, locs) in &where_pair {
            assert_eq!(locs.len(), 2, "virtual pair must join two components");
            let (i, j) = (locs[0], locs[1]);
            let (ki, kj) = (comp_kind(&comps[i]), comp_kind(&comps[j]));
            if ki == kj && ki != CompKind::Rigid {
                merge = Some((p, i.min(j), i.max(j)));
                break;
            }
        }
        let Some((p, i, j)) = merge else {
            return comps;
        };
        let mut moved: Vec<CEdge> =
            comps[j].iter().filter(|e| e.tag != Some(p)).cloned().collect();
        comps[i].retain(|e| e.tag != Some(p));
        comps[i].append(&mut moved);
        comps.remove(j);
    }
}

/// Builds the SPQR-tree of a biconnected graph with at least two edges.
/// Every real edge gets a Q-node; the default root is the Q-node of the
/// first input edge.
pub fn build_spqr_tree(g: &Graph) -> Result<SpqrTree, DecomposeError> {
    if !g.is_biconnected() || g.edge_count() < 2 {
        return Err(DecomposeError::NotBiconnected);
    }
    let mut comps = merge_components(split_components(g));
    comps.sort_by_key(|c| {
        let mut key: Vec<(usize, usize, usize)> =
            c.iter().map(|e| (e.u, e.v, e.tag.map_or(0, |p| p + 1))).collect();
        key.sort_unstable();
        key
    });
    let nc = comps.len();
    let mut nodes: Vec<SpqrNode> = comps
        .iter()
        .map(|c| {
            let kind = match comp_kind(c) {
                CompKind::Bond => SpqrKind::P,
                CompKind::Polygon => SpqrKind::S,
                CompKind::Rigid => SpqrKind::R,
            };
            SpqrNode { kind, edges: Vec::new() }
        })
        .collect();
    let mut real_home: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut pair_home: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, c) in comps.iter().enumerate() {
        for e in c {
            match e.tag {
                None => {
                    real_home.insert((e.u, e.v), i);
                }
                Some(p) => pair_home.entry(p).or_default().push(i),
            }
        }
    }
    let mut q_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(a, b) in g.edges() {
        let (u, v) = (a.min(b), a.max(b));
        let host = real_home[&(u, v)];
        let q = nodes.len();
        nodes.push(SpqrNode {
            kind: SpqrKind::Q,
            edges: vec![
                SkelEdge { u, v, twin: None },
                SkelEdge { u, v, twin: Some(host) },
            ],
        });
        q_of.insert((u, v), q);
    }
    for (i, c) in comps.iter().enumerate() {
        for e in c {
            let twin = match e.tag {
                None => Some(q_of[&(e.u, e.v)]),
                Some(p) => {
                    let hosts = &pair_home[&p];
                    Some(if hosts[0] == i { hosts[1] } else { hosts[0] })
                }
            };
            nodes[i].edges.push(SkelEdge { u: e.u, v: e.v, twin });
        }
    }
    let nn = nodes.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nn];
    for (i, node) in nodes.iter().enumerate() {
        for e in &node.edges {
            if let Some(w) = e.twin {
                adj[i].push(w);
            }
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let tree_edges: usize = adj.iter().map(|a| a.len()).sum::<usize>() / 2;
    assert_eq!(tree_edges, nn - 1, "SPQR adjacency must form a tree");
    let mut t = SpqrTree {
        nodes,
        adj,
        root: 0,
        parent: Vec::new(),
        poles: Vec::new(),
        pdeg: Vec::new(),
    };
    t.reroot(nc);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::planar_embed;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn octahedron() -> Graph {
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

    fn cube() -> Graph {
        Graph::from_edges(
            8,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 4),
                (0, 4),
                (1, 5),
                (2, 6),
                (3, 7),
            ],
        )
        .unwrap()
    }

    fn c4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn theta() -> Graph {
        Graph::from_edges(5, &[(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)]).unwrap()
    }

    fn embed_with_outer(g: &Graph, base: (usize, usize)) -> PlanarEmbedding {
        let mut emb = planar_embed(g).unwrap();
        let fid = (0..emb.face_count())
            .find(|&f| {
                emb.face(f).contains(&(base.0, base.1)) || emb.face(f).contains(&(base.1, base.0))
            })
            .unwrap();
        emb.set_outer_face(fid);
        emb
    }

    #[test]
    fn k4_order_is_forced() {
        let g = k4();
        let emb = embed_with_outer(&g, (0, 1));
        let ord = canonical_order(&emb, (0, 1)).unwrap();
        validate_canonical_order(&emb, &ord).unwrap();
        let sizes: Vec<usize> = ord.partitions.iter().map(|p| p.vertices.len()).collect();
        assert_eq!(sizes, vec![2, 1, 1]);
        let outer_third = *emb
            .face_vertices(emb.outer_face())
            .iter()
            .find(|&&v| v != 0 && v != 1)
            .unwrap();
        assert_eq!(ord.apex, outer_third);

        let other = (2..4).find(|&v| v != outer_third).unwrap();
        let swapped = CanonicalOrder {
            partitions: vec![
                Partition { vertices: vec![0, 1], kind: PartitionKind::Chain },
                Partition { vertices: vec![outer_third], kind: PartitionKind::Singleton },
                Partition { vertices: vec![other], kind: PartitionKind::Singleton },
            ],
            base_edge: (0, 1),
            apex: other,
        };
        assert!(validate_canonical_order(&emb, &swapped).is_err());
    }

    #[test]
    fn octahedron_order_is_valid() {
        let g = octahedron();
        let emb = embed_with_outer(&g, (0, 1));
        let ord = canonical_order(&emb, (0, 1)).unwrap();
        validate_canonical_order(&emb, &ord).unwrap();
        assert!((3..=5).contains(&ord.partitions.len()));
    }

    #[test]
    fn cube_order_uses_chains() {
        let g = cube();
        let emb = embed_with_outer(&g, (0, 1));
        let ord = canonical_order(&emb, (0, 1)).unwrap();
        validate_canonical_order(&emb, &ord).unwrap();
        assert!(ord.partitions[1..].iter().any(|p| p.kind == PartitionKind::Chain));
        let again = canonical_order(&emb, (0, 1)).unwrap();
        assert_eq!(ord, again);
    }

    #[test]
    fn cycle_is_rejected() {
        let g = c4();
        let emb = planar_embed(&g).unwrap();
        assert_eq!(canonical_order(&emb, (0, 1)), Err(DecomposeError::NotTriconnected));
    }

    #[test]
    fn base_off_outer_face_is_rejected() {
        let g = k4();
        let mut emb = planar_embed(&g).unwrap();
        let away = (0..emb.face_count())
            .find(|&f| !emb.face(f).contains(&(0, 1)) && !emb.face(f).contains(&(1, 0)))
            .unwrap();
        emb.set_outer_face(away);
        assert_eq!(canonical_order(&emb, (0, 1)), Err(DecomposeError::BaseNotOnOuterFace));
    }

    #[test]
    fn bc_tree_shapes() {
        let bowtie = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
            .unwrap();
        let t = build_bc_tree(&bowtie).unwrap();
        assert_eq!(t.b_nodes.len(), 2);
        assert_eq!(t.c_nodes, vec![2]);
        assert!(t.b_nodes.iter().all(|b| !b.is_bridge));

        let t = build_bc_tree(&k4()).unwrap();
        assert_eq!(t.b_nodes.len(), 1);
        assert!(t.c_nodes.is_empty());

        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let t = build_bc_tree(&path).unwrap();
        assert_eq!(t.b_nodes.len(), 3);
        assert!(t.b_nodes.iter().all(|b| b.is_bridge));
        assert_eq!(t.c_nodes, vec![1, 2]);
        assert_eq!(t.link_vertex[t.root], None);
        assert_eq!(t.link_vertex.iter().filter(|l| l.is_some()).count(), 2);

        let two = Graph::from_edges(2, &[]).unwrap();
        assert_eq!(build_bc_tree(&two), Err(DecomposeError::NotConnected));
    }

    fn sorted_edges(g: &Graph) -> Vec<(usize, usize)> {
        let mut es: Vec<(usize, usize)> =
            g.edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        es.sort_unstable();
        es
    }

    fn kind_counts(t: &SpqrTree) -> (usize, usize, usize, usize) {
        let mut c = (0, 0, 0, 0);
        for v in 0..t.node_count() {
            match t.kind(v) {
                SpqrKind::S => c.0 += 1,
                SpqrKind::P => c.1 += 1,
                SpqrKind::Q => c.2 += 1,
                SpqrKind::R => c.3 += 1,
            }
        }
        c
    }

    #[test]
    fn spqr_cycle_is_one_s_node() {
        let g = c4();
        let t = build_spqr_tree(&g).unwrap();
        assert_eq!(kind_counts(&t), (1, 0, 4, 0));
        let s = (0..t.node_count()).find(|&v| t.kind(v) == SpqrKind::S).unwrap();
        assert_eq!(t.node(s).edges.len(), 4);
        assert!(t.node(s).edges.iter().all(|e| e.twin.is_some()));
        assert_eq!(t.recompose(), sorted_edges(&g));
    }

    #[test]
    fn spqr_k4_is_one_r_node() {
        let g = k4();
        let t = build_spqr_tree(&g).unwrap();
        assert_eq!(kind_counts(&t), (0, 0, 6, 1));
        assert_eq!(t.recompose(), sorted_edges(&g));
        for v in 0..t.node_count() {
            if t.kind(v) == SpqrKind::Q && v != t.root() {
                let (s, tt) = t.poles(v);
                assert_eq!(pertinent_degree(&t, v, s), 1);
                assert_eq!(pertinent_degree(&t, v, tt), 1);
            }
        }
        assert!(t.lemma1_holds(3));
    }

    #[test]
    fn spqr_theta_is_p_with_three_s_children() {
        let g = theta();
        let t = build_spqr_tree(&g).unwrap();
        assert_eq!(kind_counts(&t), (3, 1, 6, 0));
        let p = (0..t.node_count()).find(|&v| t.kind(v) == SpqrKind::P).unwrap();
        let s_neighbors =
            t.neighbors(p).iter().filter(|&&w| t.kind(w) == SpqrKind::S).count();
        assert_eq!(s_neighbors, 3);
        assert_eq!(t.poles(p), (0, 1));
        assert_eq!(t.recompose(), sorted_edges(&g));

        // S-children of the P-node have pertinent degree 1 at both poles
        for v in 0..t.node_count() {
            if t.kind(v) == SpqrKind::S && t.parent(v) == Some(p) {
                assert_eq!(pertinent_degree(&t, v, 0), 1);
                assert_eq!(pertinent_degree(&t, v, 1), 1);
            }
        }
    }

    #[test]
    fn spqr_merges_adjacent_polygons() {
        // C6 plus the chord (0, 3)
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)])
            .unwrap();
        let t = build_spqr_tree(&g).unwrap();
        assert_eq!(kind_counts(&t), (2, 1, 7, 0));
        for v in 0..t.node_count() {
            if t.kind(v) == SpqrKind::S {
                assert_eq!(t.node(v).edges.len(), 4);
            }
        }
        assert_eq!(t.recompose(), sorted_edges(&g));
    }

    #[test]
    fn spqr_octahedron_bounds() {
        let g = octahedron();
        let t = build_spqr_tree(&g).unwrap();
        assert_eq!(kind_counts(&t), (0, 0, 12, 1));
        assert!(t.lemma1_holds(4));
        let m = g.edge_count();
        let total: usize = (0..t.node_count()).map(|v| t.node(v).edges.len()).sum();
        let internal: usize = (0..t.node_count())
            .filter(|&v| t.kind(v) != SpqrKind::Q)
            .map(|v| t.node(v).edges.len())
            .sum();
        assert!(internal <= 3 * m);
        assert!(total <= 5 * m);
    }

    #[test]
    fn root_policies() {
        let t = build_spqr_tree(&k4()).unwrap();
        assert_eq!(choose_root_qnode(&t, RootPolicy::AdjacentPR), Ok(1));
        assert_eq!(choose_root_qnode(&t, RootPolicy::AvoidS), Ok(1));
        assert_eq!(choose_root_qnode(&t, RootPolicy::IncidentTo(2)), Ok(2));

        let t = build_spqr_tree(&c4()).unwrap();
        assert!(matches!(
            choose_root_qnode(&t, RootPolicy::AdjacentPR),
            Err(DecomposeError::PolicyInfeasible(_))
        ));
        assert!(matches!(
            choose_root_qnode(&t, RootPolicy::AvoidS),
            Err(DecomposeError::PolicyInfeasible(_))
        ));

        let mut t = build_spqr_tree(&theta()).unwrap();
        let q = choose_root_qnode(&t, RootPolicy::IncidentTo(1)).unwrap();
        t.reroot(q);
        assert_eq!(t.root(), q);
        assert!(t.real_edge(q).0 == 1 || t.real_edge(q).1 == 1);
    }

    #[test]
    fn reroot_updates_pertinent_degrees() {
        let g = theta();
        let mut t = build_spqr_tree(&g).unwrap();
        let q = choose_root_qnode(&t, RootPolicy::IncidentTo(0)).unwrap();
        t.reroot(q);
        // the root covers the whole graph, so its pertinent degrees are
        // the plain graph degrees of its endpoints
        let (a, b) = t.real_edge(t.root());
        assert_eq!(pertinent_degree(&t, t.root(), a), g.degree(a));
        assert_eq!(pertinent_degree(&t, t.root(), b), g.degree(b));

        let mut t2 = build_spqr_tree(&g).unwrap();
        t2.reroot(q);
        assert_eq!(t.to_json_string(), t2.to_json_string());
    }

    #[test]
    fn not_biconnected_is_rejected() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(build_spqr_tree(&path).map(|_| ()), Err(DecomposeError::NotBiconnected));
    }
}
