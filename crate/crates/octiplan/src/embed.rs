//! Planar embeddings: face tracing, planarity testing, embedding extraction.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::Graph;

/// Directed edge (tail, head).
pub type Dart = (usize, usize);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmbedError {
    #[error("graph is not planar; minimal witness has {} edges", .witness.len())]
    NonPlanar { witness: Vec<(usize, usize)> },
    #[error("rotation system is not planar: traced {faces} faces, needed {expected}")]
    RotationNotPlanar { faces: usize, expected: usize },
}

/// Combinatorial embedding: rotation per vertex plus traced faces.
///
/// Faces are directed dart cycles; every dart lies on exactly one face.
/// The face successor of (u, v) is (v, w) where w follows u in the
/// rotation at v.
#[derive(Debug, Clone)]
pub struct PlanarEmbedding {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    faces: Vec<Vec<Dart>>,
    face_of: BTreeMap<Dart, usize>,
    outer_face: usize,
}

impl PlanarEmbedding {
    /// Builds the embedding induced by a rotation system, rejecting
    /// rotations of nonzero genus.
    pub fn from_rotation(graph: Graph, rotation: Vec<Vec<usize>>) -> Result<Self, EmbedError> {
        let n = graph.vertex_count();
        assert_eq!(rotation.len(), n, "rotation table must cover every vertex");
        for v in 0..n {
            let mut expect: Vec<usize> = graph.neighbors(v).to_vec();
            let mut got = rotation[v].clone();
            expect.sort_unstable();
            got.sort_unstable();
            assert_eq!(expect, got, "rotation at {v} must permute its neighbors");
        }
        let faces = trace_faces(&rotation);
        let (actual, expected) = face_balance(&graph, &faces);
        if actual != expected {
            return Err(EmbedError::RotationNotPlanar { faces: actual, expected });
        }
        let mut face_of = BTreeMap::new();
        for (id, face) in faces.iter().enumerate() {
            for &d in face {
                face_of.insert(d, id);
            }
        }
        let outer_face = faces
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.len().cmp(&b.len()).then(j.cmp(i)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        Ok(PlanarEmbedding { graph, rotation, faces, face_of, outer_face })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn face(&self, id: usize) -> &[Dart] {
        &self.faces[id]
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn outer_face(&self) -> usize {
        self.outer_face
    }

    pub fn set_outer_face(&mut self, id: usize) {
        assert!(id < self.faces.len(), "face id out of range");
        self.outer_face = id;
    }

    pub fn face_of_dart(&self, d: Dart) -> Option<usize> {
        self.face_of.get(&d).copied()
    }

    /// Vertices along a face, in trace order (tails of its darts).
    pub fn face_vertices(&self, id: usize) -> Vec<usize> {
        self.faces[id].iter().map(|&(u, _)| u).collect()
    }

    /// Neighbor following u in the rotation at v.
    pub fn rotation_succ(&self, v: usize, u: usize) -> usize {
        let rot = &self.rotation[v];
        let i = rot.iter().position(|&w| w == u).expect("u incident to v");
        rot[(i + 1) % rot.len()]
    }

    /// Neighbor preceding u in the rotation at v.
    pub fn rotation_pred(&self, v: usize, u: usize) -> usize {
        let rot = &self.rotation[v];
        let i = rot.iter().position(|&w| w == u).expect("u incident to v");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Face successor of a dart.
    pub fn next_in_face(&self, (u, v): Dart) -> Dart {
        (v, self.rotation_succ(v, u))
    }
}

/// Traces all face cycles of a rotation system.
fn trace_faces(rotation: &[Vec<usize>]) -> Vec<Vec<Dart>> {
    let mut succ_at = Vec::with_capacity(rotation.len());
    for rot in rotation {
        let mut m = BTreeMap::new();
        for (i, &u) in rot.iter().enumerate() {
            m.insert(u, rot[(i + 1) % rot.len()]);
        }
        succ_at.push(m);
    }
    let mut seen: BTreeSet<Dart> = BTreeSet::new();
    let mut faces = Vec::new();
    for u in 0..rotation.len() {
        for &v in &rotation[u] {
            if seen.contains(&(u, v)) {
                continue;
            }
            let mut face = Vec::new();
            let mut cur = (u, v);
            loop {
                face.push(cur);
                seen.insert(cur);
                cur = (cur.1, succ_at[cur.1][&cur.0]);
                if cur == (u, v) {
                    break;
                }
            }
            faces.push(face);
        }
    }
    if faces.is_empty() {
        faces.push(Vec::new());
    }
    faces
}

/// Returns (traced face count, face count required for genus zero).
///
/// The requirement is per connected component: a component with m ≥ 1
/// edges needs exactly 2 − n + m faces; edgeless components share the
/// single empty face synthesized by `trace_faces`.
fn face_balance(graph: &Graph, faces: &[Vec<Dart>]) -> (usize, usize) {
    let n = graph.vertex_count();
    let comp = component_ids(graph);
    let comp_count = comp.iter().copied().max().map_or(0, |c| c + 1);
    let mut verts = vec![0usize; comp_count];
    let mut edges = vec![0usize; comp_count];
    for v in 0..n {
        verts[comp[v]] += 1;
    }
    for &(a, _) in graph.edges() {
        edges[comp[a]] += 1;
    }
    let mut expected = 0;
    let mut edgeless = 0usize;
    for c in 0..comp_count {
        if edges[c] == 0 {
            edgeless += 1;
        } else {
            expected += 2 + edges[c] - verts[c];
        }
    }
    if expected == 0 {
        expected = 1;
    } else if edgeless > 0 {
        // Edgeless components live inside existing faces; no face of
        // their own.
    }
    let actual = if faces.len() == 1 && faces[0].is_empty() { 1 } else { faces.len() };
    (actual, expected)
}

fn component_ids(graph: &Graph) -> Vec<usize> {
    let n = graph.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = next;
        while let Some(v) = stack.pop() {
            for &w in graph.neighbors(v) {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Computes a planar embedding, or a minimal nonplanar witness.
pub fn planar_embed(g: &Graph) -> Result<PlanarEmbedding, EmbedError> {
    match try_embed(g) {
        Some(rotation) => Ok(PlanarEmbedding::from_rotation(g.clone(), rotation)
            .expect("constructed rotation has genus zero")),
        None => Err(EmbedError::NonPlanar { witness: kuratowski_witness(g) }),
    }
}

pub fn is_planar(g: &Graph) -> bool {
    try_embed(g).is_some()
}

/// Shrinks a nonplanar graph to an edge-minimal nonplanar subgraph
/// (a subdivision of K5 or K3,3).
fn kuratowski_witness(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut alive: Vec<(usize, usize)> = g.edges().to_vec();
    let mut i = 0;
    while i < alive.len() {
        let mut tryout = alive.clone();
        tryout.remove(i);
        let sub = Graph::from_edges(n, &tryout).expect("subgraph of a valid graph");
        if try_embed(&sub).is_none() {
            alive = tryout;
        } else {
            i += 1;
        }
    }
    alive
}

/// Planarity test returning a rotation system on success.
///
/// Each biconnected block is embedded independently by incremental face
/// insertion; block rotations are concatenated at cut vertices.
fn try_embed(g: &Graph) -> Option<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); n];
    for block in blocks(g) {
        if block.len() == 1 {
            let (u, v) = block[0];
            rotation[u].push(v);
            rotation[v].push(u);
            continue;
        }
        let local = dmp_embed(&block)?;
        for (v, rot) in local {
            rotation[v].extend(rot);
        }
    }
    Some(rotation)
}

/// Biconnected components as edge lists (bridges are single-edge blocks).
pub(crate) fn blocks(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0usize;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut out = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (v, parent, ref mut cursor)) = stack.last_mut() {
            if *cursor < g.neighbors(v).len() {
                let w = g.neighbors(v)[*cursor];
                *cursor += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(&top) = edge_stack.last() {
                            if disc[top.0] >= disc[v] || top == (p, v) {
                                block.push(edge_stack.pop().unwrap());
                                if top == (p, v) {
                                    break;
                                }
                            } else {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

struct Fragment {
    attachments: BTreeSet<usize>,
    kind: FragKind,
}

enum FragKind {
    Chord(usize, usize),
    Component(Vec<usize>),
}

/// Embeds one biconnected block (≥ 2 edges) by incremental insertion:
/// start from a cycle, repeatedly route a path of a remaining fragment
/// through a face containing all its attachments.
fn dmp_embed(block_edges: &[(usize, usize)]) -> Option<BTreeMap<usize, Vec<usize>>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v) in block_edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    for nbrs in adj.values_mut() {
        nbrs.sort_unstable();
    }
    let m = block_edges.len();

    let cycle = find_cycle(&adj);
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];
    let mut in_h: BTreeSet<usize> = cycle.iter().copied().collect();
    let mut embedded: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 0..cycle.len() {
        let a = cycle[i];
        let b = cycle[(i + 1) % cycle.len()];
        embedded.insert((a.min(b), a.max(b)));
    }

    while embedded.len() < m {
        let frags = fragments(&adj, &in_h, &embedded);
        let face_sets: Vec<BTreeSet<usize>> =
            faces.iter().map(|f| f.iter().copied().collect()).collect();
        let admissible: Vec<Vec<usize>> = frags
            .iter()
            .map(|fr| {
                (0..faces.len())
                    .filter(|&i| fr.attachments.is_subset(&face_sets[i]))
                    .collect()
            })
            .collect();
        if admissible.iter().any(|a| a.is_empty()) {
            return None;
        }
        let pick = admissible
            .iter()
            .position(|a| a.len() == 1)
            .unwrap_or(0);
        let face_id = admissible[pick][0];
        let path = alpha_path(&frags[pick], &adj, &in_h);
        for w in &path[1..path.len() - 1] {
            in_h.insert(*w);
        }
        for pair in path.windows(2) {
            embedded.insert((pair[0].min(pair[1]), pair[0].max(pair[1])));
        }
        split_face(&mut faces, face_id, &path);
    }

    Some(rotation_from_faces(&faces))
}

/// Finds any cycle in a biconnected block via DFS back edge.
fn find_cycle(adj: &BTreeMap<usize, Vec<usize>>) -> Vec<usize> {
    let start = *adj.keys().next().expect("block has vertices");
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut depth: BTreeMap<usize, usize> = BTreeMap::new();
    let mut stack = vec![(start, usize::MAX, 0usize)];
    depth.insert(start, 0);
    while let Some(&mut (v, par, ref mut cursor)) = stack.last_mut() {
        if *cursor >= adj[&v].len() {
            stack.pop();
            continue;
        }
        let w = adj[&v][*cursor];
        *cursor += 1;
        if w == par {
            continue;
        }
        if let Some(&dw) = depth.get(&w) {
            if dw < depth[&v] {
                let mut cycle = vec![v];
                let mut cur = v;
                while cur != w {
                    cur = parent[&cur];
                    cycle.push(cur);
                }
                return cycle;
            }
        } else {
            parent.insert(w, v);
            depth.insert(w, depth[&v] + 1);
            stack.push((w, v, 0));
        }
    }
    unreachable!("biconnected block contains a cycle")
}

fn fragments(
    adj: &BTreeMap<usize, Vec<usize>>,
    in_h: &BTreeSet<usize>,
    embedded: &BTreeSet<(usize, usize)>,
) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (&u, nbrs) in adj {
        if !in_h.contains(&u) {
            continue;
        }
        for &v in nbrs {
            if u < v && in_h.contains(&v) && !embedded.contains(&(u, v)) {
                out.push(Fragment {
                    attachments: [u, v].into_iter().collect(),
                    kind: FragKind::Chord(u, v),
                });
            }
        }
    }
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for &start in adj.keys() {
        if in_h.contains(&start) || seen.contains(&start) {
            continue;
        }
        let mut comp = vec![start];
        let mut attachments = BTreeSet::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            for &w in &adj[&v] {
                if in_h.contains(&w) {
                    attachments.insert(w);
                } else if seen.insert(w) {
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(Fragment { attachments, kind: FragKind::Component(comp) });
    }
    out
}

/// Path between two distinct attachments whose interior avoids the
/// embedded subgraph.
fn alpha_path(
    frag: &Fragment,
    adj: &BTreeMap<usize, Vec<usize>>,
    in_h: &BTreeSet<usize>,
) -> Vec<usize> {
    match &frag.kind {
        FragKind::Chord(u, v) => vec![*u, *v],
        FragKind::Component(comp) => {
            let a = *frag.attachments.iter().next().expect("fragment attaches");
            let comp_set: BTreeSet<usize> = comp.iter().copied().collect();
            let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
            let mut queue: std::collections::VecDeque<usize> = Default::default();
            for &w in &adj[&a] {
                if comp_set.contains(&w) && !parent.contains_key(&w) {
                    parent.insert(w, a);
                    queue.push_back(w);
                }
            }
            while let Some(x) = queue.pop_front() {
                for &w in &adj[&x] {
                    if in_h.contains(&w) && w != a {
                        let mut path = vec![w, x];
                        let mut cur = x;
                        while cur != a {
                            cur = parent[&cur];
                            path.push(cur);
                        }
                        path.reverse();
                        return path;
                    }
                }
                for &w in &adj[&x] {
                    if comp_set.contains(&w) && !parent.contains_key(&w) {
                        parent.insert(w, x);
                        queue.push_back(w);
                    }
                }
            }
            unreachable!("fragment has a second attachment")
        }
    }
}

/// Splits face `fid` along `path`, whose endpoints lie on the face.
fn split_face(faces: &mut Vec<Vec<usize>>, fid: usize, path: &[usize]) {
    let face = faces[fid].clone();
    let len = face.len();
    let a = path[0];
    let b = *path.last().unwrap();
    let i = face.iter().position(|&w| w == a).expect("path start on face");
    let j = face.iter().position(|&w| w == b).expect("path end on face");
    let mut seg1 = Vec::new();
    let mut k = i;
    loop {
        seg1.push(face[k]);
        if k == j {
            break;
        }
        k = (k + 1) % len;
    }
    let mut seg2 = Vec::new();
    let mut k = j;
    loop {
        seg2.push(face[k]);
        if k == i {
            break;
        }
        k = (k + 1) % len;
    }
    let interior: Vec<usize> = path[1..path.len() - 1].to_vec();
    let mut f1 = seg1;
    f1.extend(interior.iter().rev());
    let mut f2 = seg2;
    f2.extend(interior.iter());
    faces[fid] = f1;
    faces.push(f2);
}

/// Recovers the rotation system from consistently oriented face cycles.
fn rotation_from_faces(faces: &[Vec<usize>]) -> BTreeMap<usize, Vec<usize>> {
    let mut face_next: BTreeMap<Dart, Dart> = BTreeMap::new();
    let mut darts_at: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for face in faces {
        let len = face.len();
        for i in 0..len {
            let d = (face[i], face[(i + 1) % len]);
            let e = (face[(i + 1) % len], face[(i + 2) % len]);
            face_next.insert(d, e);
            darts_at.entry(d.0).or_default().insert(d.1);
        }
    }
    let mut rotation = BTreeMap::new();
    for (&u, heads) in &darts_at {
        let first = *heads.iter().next().unwrap();
        let mut rot = Vec::with_capacity(heads.len());
        let mut cur = first;
        loop {
            rot.push(cur);
            let next = face_next[&(cur, u)].1;
            if next == first {
                break;
            }
            cur = next;
        }
        assert_eq!(rot.len(), heads.len(), "rotation at {u} is a single cycle");
        rotation.insert(u, rot);
    }
    rotation
}

/// Exhaustive planarity oracle: tries every rotation system, testing the
/// genus-zero face count. Returns None when the search space exceeds
/// `budget` assignments.
pub fn planar_by_rotation_search(g: &Graph, budget: u128) -> Option<bool> {
    let n = g.vertex_count();
    let mut space: u128 = 1;
    for v in 0..n {
        let d = g.degree(v);
        if d > 1 {
            space = space.checked_mul(factorial(d - 1))?;
            if space > budget {
                return None;
            }
        }
    }
    let per_vertex: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|v| {
            let nbrs = g.neighbors(v);
            if nbrs.len() <= 1 {
                return vec![nbrs.to_vec()];
            }
            permutations(&nbrs[1..])
                .into_iter()
                .map(|mut tail| {
                    let mut rot = vec![nbrs[0]];
                    rot.append(&mut tail);
                    rot
                })
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; n];
    loop {
        let rotation: Vec<Vec<usize>> =
            (0..n).map(|v| per_vertex[v][idx[v]].clone()).collect();
        let faces = trace_faces(&rotation);
        let (actual, expected) = face_balance(g, &faces);
        if actual == expected {
            return Some(true);
        }
        let mut v = 0;
        loop {
            if v == n {
                return Some(false);
            }
            idx[v] += 1;
            if idx[v] < per_vertex[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest: Vec<usize> = items.to_vec();
        let x = rest.remove(i);
        for mut tail in permutations(&rest) {
            let mut perm = vec![x];
            perm.append(&mut tail);
            out.push(perm);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    fn k33() -> Graph {
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                edges.push((a, b));
            }
        }
        Graph::from_edges(6, &edges).unwrap()
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

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    #[test]
    fn k4_has_four_faces() {
        let emb = planar_embed(&k(4)).unwrap();
        assert_eq!(emb.face_count(), 4);
        assert!(emb.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn octahedron_has_eight_faces() {
        let emb = planar_embed(&octahedron()).unwrap();
        assert_eq!(emb.face_count(), 8);
        assert!(emb.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn every_dart_on_exactly_one_face() {
        let emb = planar_embed(&octahedron()).unwrap();
        let mut darts = BTreeSet::new();
        for face in emb.faces() {
            for &d in face {
                assert!(darts.insert(d), "dart {d:?} appears twice");
            }
        }
        assert_eq!(darts.len(), 2 * emb.graph().edge_count());
    }

    #[test]
    fn k5_and_k33_are_nonplanar_with_full_witness() {
        match planar_embed(&k(5)) {
            Err(EmbedError::NonPlanar { witness }) => assert_eq!(witness.len(), 10),
            other => panic!("expected NonPlanar, got {other:?}"),
        }
        match planar_embed(&k33()) {
            Err(EmbedError::NonPlanar { witness }) => assert_eq!(witness.len(), 9),
            other => panic!("expected NonPlanar, got {other:?}"),
        }
    }

    #[test]
    fn petersen_witness_is_minimal() {
        let g = petersen();
        let witness = match planar_embed(&g) {
            Err(EmbedError::NonPlanar { witness }) => witness,
            other => panic!("expected NonPlanar, got {other:?}"),
        };
        let sub = Graph::from_edges(10, &witness).unwrap();
        assert!(!is_planar(&sub));
        for i in 0..witness.len() {
            let mut fewer = witness.clone();
            fewer.remove(i);
            let sub = Graph::from_edges(10, &fewer).unwrap();
            assert!(is_planar(&sub), "witness not minimal at edge {i}");
        }
    }

    #[test]
    fn tree_has_one_face() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let emb = planar_embed(&g).unwrap();
        assert_eq!(emb.face_count(), 1);
        assert_eq!(emb.face(0).len(), 8);
    }

    #[test]
    fn disconnected_components_embed_independently() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let emb = planar_embed(&g).unwrap();
        assert_eq!(emb.face_count(), 4);
    }

    #[test]
    fn bowtie_merges_blocks_at_cut_vertex() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let emb = planar_embed(&g).unwrap();
        assert_eq!(emb.face_count(), 3);
        assert_eq!(emb.rotation(2).len(), 4);
    }

    #[test]
    fn outer_face_defaults_to_longest() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let emb = planar_embed(&g).unwrap();
        let outer_len = emb.face(emb.outer_face()).len();
        assert!(emb.faces().iter().all(|f| f.len() <= outer_len));
    }

    #[test]
    fn k4_rotations_split_planar_and_toroidal() {
        let g = k(4);
        let mut planar = 0;
        let mut toroidal = 0;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        let flip = |v: usize, f: usize| {
                            let mut rot: Vec<usize> =
                                (0..4).filter(|&w| w != v).collect();
                            if f == 1 {
                                rot.swap(1, 2);
                            }
                            rot
                        };
                        let rotation =
                            vec![flip(0, a), flip(1, b), flip(2, c), flip(3, d)];
                        match PlanarEmbedding::from_rotation(g.clone(), rotation) {
                            Ok(emb) => {
                                planar += 1;
                                assert_eq!(emb.face_count(), 4);
                            }
                            Err(EmbedError::RotationNotPlanar { .. }) => toroidal += 1,
                            Err(e) => panic!("unexpected error {e:?}"),
                        }
                    }
                }
            }
        }
        assert!(planar > 0 && toroidal > 0);
        assert_eq!(planar + toroidal, 16);
    }

    #[test]
    fn oracle_agrees_on_all_graphs_up_to_five_vertices() {
        let pairs: Vec<(usize, usize)> =
            (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::from_edges(5, &edges).unwrap();
            let fast = is_planar(&g);
            let slow = planar_by_rotation_search(&g, 1 << 20).unwrap();
            assert_eq!(fast, slow, "disagreement on mask {mask:#b}");
        }
    }

    #[test]
    fn embedding_next_in_face_walks_faces() {
        let emb = planar_embed(&k(4)).unwrap();
        for (id, face) in emb.faces().iter().enumerate() {
            for i in 0..face.len() {
                let next = emb.next_in_face(face[i]);
                assert_eq!(next, face[(i + 1) % face.len()]);
                assert_eq!(emb.face_of_dart(face[i]), Some(id));
            }
        }
    }
}
