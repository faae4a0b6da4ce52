//! Drawing construction for triconnected 4-planar graphs, plus the
//! subdrawing contract used when larger drawings are composed from pieces.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::decompose::{CanonicalOrder, Partition, PartitionKind};
use crate::embed::PlanarEmbedding;
use crate::layout::{Cut, OctiDrawing, Port};
use crate::{Coord, Point};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Octi4Error {
    #[error("vertex {0} has degree {1}, maximum is 4")]
    DegreeTooHigh(String, usize),
    #[error("graph is not triconnected")]
    NotTriconnected,
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("graph is not connected")]
    Disconnected,
}

fn big(v: i64) -> Coord {
    Coord::from(v)
}

// --- subdrawing contract ---

/// Shape contract for a drawing that will be pasted into a larger one.
///
/// The pole s sits on the left column of the bounding box and t on the
/// right column, and nothing else enters a pole's column. Pole edges
/// leave s through S, SE or E and leave t through N, NW or W. At its
/// other endpoint a pole edge arrives through W (edges at s) or E (edges
/// at t); only a fixed pole's extreme edge may arrive through N or S
/// instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdrawingSpec {
    pub s: usize,
    pub t: usize,
    pub s_fixed: bool,
    pub t_fixed: bool,
    pub pdeg_s: usize,
    pub pdeg_t: usize,
    pub width: Coord,
    pub height: Coord,
}

impl SubdrawingSpec {
    /// Checks the drawing against the contract.
    pub fn check(&self, d: &OctiDrawing) -> Result<(), String> {
        let (min_x, max_x, min_y, max_y) = d.extent().ok_or_else(|| "empty drawing".to_string())?;
        if &max_x - &min_x != self.width || &max_y - &min_y != self.height {
            return Err("bounding box does not match the recorded extent".into());
        }
        let cs = d.coord(self.s);
        if cs.x != min_x {
            return Err(format!(
                "pole {} is not on the left column",
                d.label(self.s)
            ));
        }
        let ct = d.coord(self.t);
        if ct.x != max_x {
            return Err(format!(
                "pole {} is not on the right column",
                d.label(self.t)
            ));
        }
        for v in 0..d.vertex_count() {
            if v != self.s && d.coord(v).x == cs.x {
                return Err(format!("vertex {} shares the left pole column", d.label(v)));
            }
            if v != self.t && d.coord(v).x == ct.x {
                return Err(format!("vertex {} shares the right pole column", d.label(v)));
            }
        }
        for e in d.edges() {
            let at_s = e.u == self.s || e.v == self.s;
            let at_t = e.u == self.t || e.v == self.t;
            if !at_s && e.route.iter().any(|p| p.x == cs.x) {
                return Err(format!(
                    "edge ({}, {}) enters the left pole column",
                    d.label(e.u),
                    d.label(e.v)
                ));
            }
            if !at_t && e.route.iter().any(|p| p.x == ct.x) {
                return Err(format!(
                    "edge ({}, {}) enters the right pole column",
                    d.label(e.u),
                    d.label(e.v)
                ));
            }
        }
        for (pole, pdeg) in [(self.s, self.pdeg_s), (self.t, self.pdeg_t)] {
            if !(1..=3).contains(&pdeg) {
                return Err(format!(
                    "pertinent degree {pdeg} of {} out of range",
                    d.label(pole)
                ));
            }
            let have = d.edges_at(pole).len();
            if have != pdeg {
                return Err(format!(
                    "pole {} has {have} edges, expected {pdeg}",
                    d.label(pole)
                ));
            }
        }
        if self.pdeg_s >= 2 && !self.s_fixed {
            return Err("s must be fixed when its pertinent degree is at least 2".into());
        }
        if self.t_fixed && self.pdeg_t != 3 {
            return Err("t may be fixed only at pertinent degree 3".into());
        }
        self.check_pole(d, self.s, [Port::S, Port::SE, Port::E], Port::W, Port::E, Port::N, self.s_fixed)?;
        self.check_pole(d, self.t, [Port::N, Port::NW, Port::W], Port::E, Port::W, Port::S, self.t_fixed)?;
        Ok(())
    }

    fn check_pole(
        &self,
        d: &OctiDrawing,
        pole: usize,
        allowed: [Port; 3],
        arrive: Port,
        extreme: Port,
        arrive_exception: Port,
        fixed: bool,
    ) -> Result<(), String> {
        for idx in d.edges_at(pole) {
            let e = &d.edges()[idx];
            let p = e.port_at(pole);
            if !allowed.contains(&p) {
                return Err(format!(
                    "edge leaves pole {} through port {}",
                    d.label(pole),
                    p.as_str()
                ));
            }
            let far = e.other(pole);
            let q = e.port_at(far);
            if q != arrive && !(fixed && p == extreme && q == arrive_exception) {
                return Err(format!(
                    "pole edge arrives at {} through port {}",
                    d.label(far),
                    q.as_str()
                ));
            }
        }
        Ok(())
    }
}

// --- triconnected construction ---

/// Incremental state of the row-by-row construction.
///
/// The contour lists the outer boundary of the partial drawing from the
/// left base vertex to the right one. Every placed vertex belongs to a
/// shift set named by a contour vertex; cut_after selects exactly the
/// sets named after a contour position, so a stretch moves each rigid
/// group as a whole.
#[derive(Debug, Clone)]
pub struct Tri4State {
    nbrs: Vec<Vec<usize>>,
    partitions: Vec<Partition>,
    part_of: Vec<usize>,
    base: (usize, usize),
    apex: usize,
    d: OctiDrawing,
    placed: Vec<bool>,
    contour: Vec<usize>,
    sid: Vec<usize>,
    next: usize,
}

impl Tri4State {
    /// Checks the degree bound and triconnectivity, then lays out the
    /// first two partitions along a single horizontal row.
    pub fn new(emb: &PlanarEmbedding, ord: &CanonicalOrder) -> Result<Tri4State, Octi4Error> {
        let g = emb.graph();
        for v in 0..g.vertex_count() {
            if g.degree(v) > 4 {
                return Err(Octi4Error::DegreeTooHigh(g.label(v).into(), g.degree(v)));
            }
        }
        if !g.is_triconnected() {
            return Err(Octi4Error::NotTriconnected);
        }

        let (v1, v2) = ord.base_edge;
        let mut row1 = ord.partitions[1].vertices.clone();
        if !g.has_edge(v1, row1[0]) {
            row1.reverse();
        }
        assert!(
            g.has_edge(v1, row1[0]) && g.has_edge(*row1.last().unwrap(), v2),
            "second partition must span the base pair"
        );

        let n = g.vertex_count();
        let mut st = Tri4State {
            nbrs: (0..n).map(|v| g.neighbors(v).to_vec()).collect(),
            partitions: ord.partitions.clone(),
            part_of: ord.partition_index(),
            base: (v1, v2),
            apex: ord.apex,
            d: OctiDrawing::empty(g.labels().to_vec()),
            placed: vec![false; n],
            contour: Vec::new(),
            sid: (0..n).collect(),
            next: 2,
        };
        st.d.place(v1, Point::of(0, 0));
        for (t, &z) in row1.iter().enumerate() {
            st.d.place(z, Point::of(t as i64 + 1, 0));
        }
        st.d.place(v2, Point::of(row1.len() as i64 + 1, 0));
        st.contour.push(v1);
        st.contour.extend_from_slice(&row1);
        st.contour.push(v2);
        for &v in &st.contour {
            st.placed[v] = true;
        }
        let pairs: Vec<(usize, usize)> = st.contour.windows(2).map(|w| (w[0], w[1])).collect();
        for (u, v) in pairs {
            let route = vec![st.d.coord(u).clone(), st.d.coord(v).clone()];
            st.add(u, v, route);
        }
        Ok(st)
    }

    pub fn drawing(&self) -> &OctiDrawing {
        &self.d
    }

    pub fn contour(&self) -> &[usize] {
        &self.contour
    }

    pub fn partition_count(&self) -> usize {
        self.partitions.len()
    }

    /// Cut whose right side holds every shift set named by a contour
    /// vertex after the given position.
    pub fn cut_after(&self, pos: usize) -> Cut {
        assert!(pos < self.contour.len());
        let roots: BTreeSet<usize> = self.contour[pos + 1..].iter().copied().collect();
        let right = (0..self.sid.len())
            .filter(|&v| roots.contains(&self.sid[v]))
            .collect();
        Cut::new(right)
    }

    fn stretch_after(&mut self, pos: usize, delta: &Coord) {
        let cut = self.cut_after(pos);
        self.d = self
            .d
            .apply_cut(&cut, delta)
            .expect("contour cuts cross only horizontal segments");
    }

    fn add(&mut self, u: usize, v: usize, route: Vec<Point>) {
        self.d
            .add_edge(u, v, route)
            .expect("construction never reuses a port");
    }

    fn cpos(&self, v: usize) -> usize {
        self.contour
            .iter()
            .position(|&w| w == v)
            .unwrap_or_else(|| panic!("vertex {v} is not on the contour"))
    }

    fn has_later(&self, v: usize, k: usize) -> bool {
        self.nbrs[v].iter().any(|&w| self.part_of[w] > k)
    }

    fn single_placed_neighbor(&self, z: usize) -> usize {
        let mut it = self.nbrs[z].iter().copied().filter(|&w| self.placed[w]);
        let a = it.next().expect("chain end has a placed neighbor");
        assert!(
            it.next().is_none(),
            "chain end must have exactly one placed neighbor"
        );
        a
    }

    /// New vertices in left-to-right order, the attachment pair (a, b)
    /// and, for a singleton with three placed neighbors, the middle one.
    fn attach_layout(&self, p: &Partition, is_apex: bool) -> (Vec<usize>, usize, usize, Option<usize>) {
        match p.kind {
            PartitionKind::Chain => {
                let mut verts = p.vertices.clone();
                let a = self.single_placed_neighbor(verts[0]);
                let b = self.single_placed_neighbor(*verts.last().unwrap());
                assert!(a != b, "chain attachments must be distinct");
                if self.cpos(a) > self.cpos(b) {
                    verts.reverse();
                    return (verts, b, a, None);
                }
                (verts, a, b, None)
            }
            PartitionKind::Singleton => {
                let z = p.vertices[0];
                let mut at: Vec<(usize, usize)> = self.nbrs[z]
                    .iter()
                    .copied()
                    .filter(|&w| self.placed[w] && !(is_apex && w == self.base.0))
                    .map(|w| (self.cpos(w), w))
                    .collect();
                at.sort();
                assert!(
                    (2..=3).contains(&at.len()),
                    "singleton must attach to two or three contour vertices"
                );
                let a = at[0].1;
                let b = at.last().unwrap().1;
                let mid = if at.len() == 3 { Some(at[1].1) } else { None };
                (p.vertices.clone(), a, b, mid)
            }
        }
    }
}

fn place_partition(mut st: Tri4State, k: usize) -> Tri4State {
    assert_eq!(k, st.next, "partitions must be placed in order");
    st.next += 1;
    let p = st.partitions[k].clone();
    let row = k - 1;
    let row_y = big(row as i64);
    let is_apex = k + 1 == st.partitions.len();

    let (verts, a, b, mid) = st.attach_layout(&p, is_apex);
    let i = st.cpos(a);
    let j = st.cpos(b);
    assert!(i < j, "attachments must be ordered along the contour");

    let left_diag = st.has_later(a, k);
    let right_diag = st.has_later(b, k);

    // a diagonal needs the covered region out of its span; the stretch
    // amount is the current drawing height
    if left_diag {
        st.stretch_after(i, &row_y);
    }
    let ca = st.d.coord(a).clone();
    let dl = if left_diag { &row_y - &ca.y } else { Coord::zero() };

    let x_first = match mid {
        Some(m) => st.d.coord(m).x.clone(),
        None => &ca.x + &dl + big(1),
    };
    let x_last = &x_first + big(verts.len() as i64 - 1);

    // widen the gap so the new row and the right-hand approach fit
    let xb = st.d.coord(b).x.clone();
    let dr = if right_diag {
        &row_y - &st.d.coord(b).y
    } else {
        Coord::zero()
    };
    let mut s2 = &x_last + &dr + big(1) - &xb;
    if right_diag && s2 < row_y {
        s2 = row_y.clone();
    }
    if s2.is_positive() {
        st.stretch_after(j - 1, &s2);
    }

    for (t, &z) in verts.iter().enumerate() {
        st.d.place(z, Point::new(&x_first + big(t as i64), row_y.clone()));
        st.placed[z] = true;
    }
    for w in verts.windows(2) {
        let route = vec![st.d.coord(w[0]).clone(), st.d.coord(w[1]).clone()];
        st.add(w[0], w[1], route);
    }

    let z_l = verts[0];
    let z_r = *verts.last().unwrap();
    let cb = st.d.coord(b).clone();
    let cl = st.d.coord(z_l).clone();
    let cr = st.d.coord(z_r).clone();

    let bend_l = Point::new(&ca.x + &dl, row_y.clone());
    st.add(a, z_l, vec![ca, bend_l, cl]);
    let bend_r = Point::new(&cb.x - &dr, row_y.clone());
    st.add(b, z_r, vec![cb, bend_r, cr]);
    if let Some(m) = mid {
        let route = vec![st.d.coord(z_l).clone(), st.d.coord(m).clone()];
        st.add(z_l, m, route);
    }

    let covered: BTreeSet<usize> = st.contour[i + 1..j].iter().copied().collect();
    if !covered.is_empty() {
        for r in st.sid.iter_mut() {
            if covered.contains(r) {
                *r = z_l;
            }
        }
    }
    let mut contour = st.contour[..=i].to_vec();
    contour.extend_from_slice(&verts);
    contour.extend_from_slice(&st.contour[j..]);
    st.contour = contour;
    st
}

/// Places chain partition k on the next row up. The end edges enter a
/// neighbor through N when they are its last edge and through NE or NW
/// otherwise; the gap between the attachments is stretched first so the
/// chain and both approaches fit.
pub fn place_chain_4(state: Tri4State, k: usize) -> Tri4State {
    assert_eq!(
        state.partitions[k].kind,
        PartitionKind::Chain,
        "partition {k} is not a chain"
    );
    place_partition(state, k)
}

/// Places singleton partition k on the next row up. With three placed
/// neighbors the vertex goes directly above the middle one and keeps a
/// straight vertical edge to it; with two it behaves like a chain of
/// length one.
pub fn place_singleton_4(state: Tri4State, k: usize) -> Tri4State {
    assert_eq!(
        state.partitions[k].kind,
        PartitionKind::Singleton,
        "partition {k} is not a singleton"
    );
    place_partition(state, k)
}

/// Moves the left base vertex to the upper-left corner and the right one
/// a unit right and down, redraws their incident edges, and adds the two
/// outer edges the incremental phase leaves out. Every touched edge ends
/// up with exactly one bend.
pub fn finalize_tri4(mut st: Tri4State) -> OctiDrawing {
    assert_eq!(st.next, st.partitions.len(), "all partitions must be placed");
    let (v1, v2) = st.base;
    let vn = st.apex;
    let h = &st.d.coord(vn).y + big(1);

    // the left base vertex rises above the apex row; its edges now leave
    // downward
    let c1 = st.d.coord(v1).clone();
    let p1 = Point::new(&c1.x - &h, &c1.y + &h);
    st.d.place(v1, p1.clone());
    for idx in st.d.edges_at(v1) {
        let far = st.d.edges()[idx].other(v1);
        let cf = st.d.coord(far).clone();
        let bend = if cf.y == c1.y {
            Point::new(p1.x.clone(), c1.y.clone())
        } else {
            Point::new(&c1.x - (&cf.y - &c1.y), cf.y.clone())
        };
        st.d.replace_route(idx, vec![p1.clone(), bend, cf]);
    }
    let cn = st.d.coord(vn).clone();
    let bend = Point::new(cn.x.clone(), p1.y.clone());
    st.add(v1, vn, vec![p1.clone(), bend, cn]);

    // the right base vertex steps off the base row, freeing its west
    // side; its edges reattach along the fresh column
    let c2 = st.d.coord(v2).clone();
    let p2 = c2.shift(1, -1);
    st.d.place(v2, p2.clone());
    let mut upward: Vec<(Coord, usize)> = Vec::new();
    let mut base_idx = None;
    for idx in st.d.edges_at(v2) {
        let far = st.d.edges()[idx].other(v2);
        let cf = st.d.coord(far);
        if cf.y == c2.y {
            base_idx = Some(idx);
        } else {
            upward.push((cf.y.clone(), idx));
        }
    }
    upward.sort();
    let bi = base_idx.expect("the right base vertex keeps a base-row neighbor");
    let far = st.d.edges()[bi].other(v2);
    let cf = st.d.coord(far).clone();
    st.d.replace_route(bi, vec![cf, c2.clone(), p2.clone()]);
    if let Some((row, idx)) = upward.first() {
        let far = st.d.edges()[*idx].other(v2);
        let cf = st.d.coord(far).clone();
        let bend = Point::new(p2.x.clone(), row.clone());
        st.d.replace_route(*idx, vec![p2.clone(), bend, cf]);
    }
    if let Some((row, idx)) = upward.get(1) {
        let far = st.d.edges()[*idx].other(v2);
        let cf = st.d.coord(far).clone();
        let bend = Point::new(&p2.x + (row - &p2.y), row.clone());
        st.d.replace_route(*idx, vec![p2.clone(), bend, cf]);
    }

    // the base edge passes under the whole drawing
    let bend = Point::new(&p1.x - (&p1.y - &p2.y), p2.y.clone());
    st.add(v1, v2, vec![p1, bend, p2]);
    st.d
}

/// Draws a triconnected graph with maximum degree 4 on the integer grid:
/// planar, octilinear, at most one bend per edge, linear height and
/// quadratic width.
pub fn draw_tri4(emb: &PlanarEmbedding, ord: &CanonicalOrder) -> Result<OctiDrawing, Octi4Error> {
    let mut st = Tri4State::new(emb, ord)?;
    for k in 2..ord.partitions.len() {
        st = match ord.partitions[k].kind {
            PartitionKind::Chain => place_chain_4(st, k),
            PartitionKind::Singleton => place_singleton_4(st, k),
        };
    }
    Ok(finalize_tri4(st))
}
