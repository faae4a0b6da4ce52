//! Octilinear drawing model: ports, routes, cuts, noses, transforms, JSON.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

use crate::geom::{slope_of, step_signs, Slope};
use crate::{Coord, Point};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("cut crosses edge ({0}, {1}) which has no horizontal segment")]
    InvalidCut(String, String),
    #[error("pole {0} is fixed")]
    PoleFixed(String),
    #[error("port conflict at vertex {0}")]
    PortConflict(String),
    #[error("drawing has no vertices")]
    EmptyDrawing,
    #[error("malformed drawing: {0}")]
    MalformedDrawing(String),
}

/// Compass direction of an edge end, in counterclockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    E,
    NE,
    N,
    NW,
    W,
    SW,
    S,
    SE,
}

pub const ALL_PORTS: [Port; 8] =
    [Port::E, Port::NE, Port::N, Port::NW, Port::W, Port::SW, Port::S, Port::SE];

impl Port {
    pub fn index(self) -> usize {
        ALL_PORTS.iter().position(|&p| p == self).unwrap()
    }

    pub fn from_index(i: usize) -> Port {
        ALL_PORTS[i % 8]
    }

    /// Unit step signs (dx, dy) pointing out of the vertex.
    pub fn step(self) -> (i8, i8) {
        match self {
            Port::E => (1, 0),
            Port::NE => (1, 1),
            Port::N => (0, 1),
            Port::NW => (-1, 1),
            Port::W => (-1, 0),
            Port::SW => (-1, -1),
            Port::S => (0, -1),
            Port::SE => (1, -1),
        }
    }

    pub fn from_step(sx: i8, sy: i8) -> Port {
        match (sx, sy) {
            (1, 0) => Port::E,
            (1, 1) => Port::NE,
            (0, 1) => Port::N,
            (-1, 1) => Port::NW,
            (-1, 0) => Port::W,
            (-1, -1) => Port::SW,
            (0, -1) => Port::S,
            (1, -1) => Port::SE,
            _ => panic!("zero-length step has no port"),
        }
    }

    pub fn opposite(self) -> Port {
        Port::from_index(self.index() + 4)
    }

    /// One 45° counterclockwise step.
    pub fn rot45(self) -> Port {
        Port::from_index(self.index() + 1)
    }

    pub fn mirror_h(self) -> Port {
        let (sx, sy) = self.step();
        Port::from_step(-sx, sy)
    }

    pub fn mirror_v(self) -> Port {
        let (sx, sy) = self.step();
        Port::from_step(sx, -sy)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Port::E => "E",
            Port::NE => "NE",
            Port::N => "N",
            Port::NW => "NW",
            Port::W => "W",
            Port::SW => "SW",
            Port::S => "S",
            Port::SE => "SE",
        }
    }

    pub fn parse(s: &str) -> Option<Port> {
        ALL_PORTS.iter().copied().find(|p| p.as_str() == s)
    }
}

/// One drawn edge: a route of 2 or 3 points (at most one bend) whose
/// first point sits at u and last point at v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrawnEdge {
    pub u: usize,
    pub v: usize,
    pub route: Vec<Point>,
    pub port_u: Port,
    pub port_v: Port,
}

impl DrawnEdge {
    pub fn bend(&self) -> Option<&Point> {
        if self.route.len() == 3 {
            Some(&self.route[1])
        } else {
            None
        }
    }

    /// Port at the given endpoint vertex.
    pub fn port_at(&self, w: usize) -> Port {
        if w == self.u {
            self.port_u
        } else {
            self.port_v
        }
    }

    pub fn other(&self, w: usize) -> usize {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Octilinear drawing: integer coordinates, routes with at most one bend,
/// one edge end per (vertex, port).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OctiDrawing {
    labels: Vec<String>,
    coords: Vec<Point>,
    edges: Vec<DrawnEdge>,
    fixed: Vec<bool>,
}

/// Vertex 2-coloring describing a stretchable vertical split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub right: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Cut {
    pub fn new(right: BTreeSet<usize>) -> Cut {
        Cut { right }
    }

    pub fn side(&self, v: usize) -> Side {
        if self.right.contains(&v) {
            Side::Right
        } else {
            Side::Left
        }
    }

    /// Indices of edges joining Left to Right.
    pub fn crossed_edges(&self, d: &OctiDrawing) -> Vec<usize> {
        d.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| self.side(e.u) != self.side(e.v))
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoseOrientation {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformOp {
    MirrorH,
    MirrorV,
    /// k successive 45° counterclockwise lattice rotations, k in 0..8.
    Rot45(u8),
}

impl OctiDrawing {
    /// Drawing with all vertices at the origin and no edges.
    pub fn empty(labels: Vec<String>) -> OctiDrawing {
        let n = labels.len();
        OctiDrawing {
            labels,
            coords: vec![Point::of(0, 0); n],
            edges: Vec::new(),
            fixed: vec![false; n],
        }
    }

    /// Assembles a drawing without any validation. Intended for tests and
    /// for loaders that run their own checks afterwards.
    pub fn from_raw_parts(
        labels: Vec<String>,
        coords: Vec<Point>,
        edges: Vec<DrawnEdge>,
    ) -> OctiDrawing {
        assert_eq!(labels.len(), coords.len());
        let n = labels.len();
        OctiDrawing {
            labels,
            coords,
            edges,
            fixed: vec![false; n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn coord(&self, v: usize) -> &Point {
        &self.coords[v]
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn edges(&self) -> &[DrawnEdge] {
        &self.edges
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edges
            .iter()
            .position(|e| (e.u == a && e.v == b) || (e.u == b && e.v == a))
    }

    pub fn edges_at(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.u == v || e.v == v)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn is_fixed(&self, v: usize) -> bool {
        self.fixed[v]
    }

    pub fn set_fixed(&mut self, v: usize, flag: bool) {
        self.fixed[v] = flag;
    }

    pub fn port_in_use(&self, v: usize, port: Port) -> bool {
        self.edges
            .iter()
            .any(|e| (e.u == v && e.port_u == port) || (e.v == v && e.port_v == port))
    }

    pub fn free_ports(&self, v: usize) -> Vec<Port> {
        ALL_PORTS.iter().copied().filter(|&p| !self.port_in_use(v, p)).collect()
    }

    pub(crate) fn place(&mut self, v: usize, p: Point) {
        self.coords[v] = p;
    }

    /// Adds an edge with the given route, deriving ports from the route
    /// directions. Panics on malformed routes; errors on port conflicts.
    pub(crate) fn add_edge(
        &mut self,
        u: usize,
        v: usize,
        route: Vec<Point>,
    ) -> Result<(), LayoutError> {
        validate_route(&route).unwrap_or_else(|e| panic!("route {u}-{v}: {e}"));
        let (port_u, port_v) = route_ports(&route);
        assert_eq!(route[0], self.coords[u], "route must start at u");
        assert_eq!(*route.last().unwrap(), self.coords[v], "route must end at v");
        if self.port_in_use(u, port_u) {
            return Err(LayoutError::PortConflict(self.labels[u].clone()));
        }
        if self.port_in_use(v, port_v) {
            return Err(LayoutError::PortConflict(self.labels[v].clone()));
        }
        self.edges.push(DrawnEdge { u, v, route, port_u, port_v });
        Ok(())
    }

    pub(crate) fn remove_edge(&mut self, idx: usize) -> DrawnEdge {
        self.edges.remove(idx)
    }

    pub(crate) fn replace_route(&mut self, idx: usize, route: Vec<Point>) {
        validate_route(&route).unwrap_or_else(|err| panic!("replacement route: {err}"));
        let (port_u, port_v) = route_ports(&route);
        let e = &mut self.edges[idx];
        e.route = route;
        e.port_u = port_u;
        e.port_v = port_v;
    }

    pub(crate) fn translate_all(&mut self, dx: &Coord, dy: &Coord) {
        for p in &mut self.coords {
            *p = p.add(dx, dy);
        }
        for e in &mut self.edges {
            for p in &mut e.route {
                *p = p.add(dx, dy);
            }
        }
    }

    pub fn translated(&self, dx: &Coord, dy: &Coord) -> OctiDrawing {
        let mut d = self.clone();
        d.translate_all(dx, dy);
        d
    }

    /// Stretches the drawing: Right vertices move +delta in x, crossed
    /// horizontal segments lengthen, everything else is rigid.
    pub fn apply_cut(&self, cut: &Cut, delta: &Coord) -> Result<OctiDrawing, LayoutError> {
        assert!(!delta.is_negative(), "cut delta must be non-negative");
        let mut out = self.clone();
        let zero = Coord::zero();
        for v in 0..out.coords.len() {
            if cut.side(v) == Side::Right {
                out.coords[v] = out.coords[v].add(delta, &zero);
            }
        }
        for e in &mut out.edges {
            let su = cut.side(e.u);
            let sv = cut.side(e.v);
            if su == sv {
                if su == Side::Right {
                    for p in &mut e.route {
                        *p = p.add(delta, &zero);
                    }
                }
                continue;
            }
            let h = horizontal_segment(&e.route).ok_or_else(|| {
                LayoutError::InvalidCut(
                    self.labels[e.u].clone(),
                    self.labels[e.v].clone(),
                )
            })?;
            let first_right = if sv == Side::Right { h + 1 } else { 0 };
            let last_right = if sv == Side::Right { e.route.len() - 1 } else { h };
            for p in &mut e.route[first_right..=last_right] {
                *p = p.add(delta, &zero);
            }
        }
        Ok(out)
    }

    /// Displaces an unfixed vertex v diagonally off its single horizontal
    /// edge, freeing the side port at the cost of one bend.
    pub fn make_nose(
        &self,
        v: usize,
        orientation: NoseOrientation,
    ) -> Result<OctiDrawing, LayoutError> {
        if self.fixed[v] {
            return Err(LayoutError::PoleFixed(self.labels[v].clone()));
        }
        let incident = self.edges_at(v);
        if incident.len() != 1 {
            return Err(LayoutError::PortConflict(self.labels[v].clone()));
        }
        let idx = incident[0];
        let e = &self.edges[idx];
        if e.route.len() != 2 || slope_of(&e.route[0], &e.route[1]) != Some(Slope::Horizontal) {
            return Err(LayoutError::PortConflict(self.labels[v].clone()));
        }
        let dx: i64 = match e.port_at(v) {
            Port::W => 1,
            Port::E => -1,
            _ => unreachable!("horizontal edge ends in a W or E port"),
        };
        let dy: i64 = match orientation {
            NoseOrientation::Up => 1,
            NoseOrientation::Down => -1,
        };
        let mut out = self.clone();
        let old = out.coords[v].clone();
        let new = old.shift(dx, dy);
        out.coords[v] = new.clone();
        let route = if out.edges[idx].u == v {
            vec![new, old, out.edges[idx].route[1].clone()]
        } else {
            vec![out.edges[idx].route[0].clone(), old, new]
        };
        out.replace_route(idx, route);
        Ok(out)
    }

    /// Octilinear-preserving transform applied to every coordinate.
    pub fn transform(&self, op: TransformOp) -> OctiDrawing {
        let mut out = self.clone();
        match op {
            TransformOp::MirrorH => out.map_points(|p| Point { x: -p.x.clone(), y: p.y.clone() }),
            TransformOp::MirrorV => out.map_points(|p| Point { x: p.x.clone(), y: -p.y.clone() }),
            TransformOp::Rot45(k) => {
                for _ in 0..k {
                    out.map_points(|p| Point { x: &p.x - &p.y, y: &p.x + &p.y });
                }
            }
        }
        out
    }

    fn map_points(&mut self, f: impl Fn(&Point) -> Point) {
        for p in &mut self.coords {
            *p = f(p);
        }
        for e in &mut self.edges {
            for p in &mut e.route {
                *p = f(p);
            }
            let (pu, pv) = route_ports(&e.route);
            e.port_u = pu;
            e.port_v = pv;
        }
    }

    /// Width and height over all vertices and route points.
    pub fn bounding_box(&self) -> Result<(Coord, Coord), LayoutError> {
        let (min_x, max_x, min_y, max_y) = self.extent().ok_or(LayoutError::EmptyDrawing)?;
        Ok((max_x - min_x, max_y - min_y))
    }

    /// (min_x, max_x, min_y, max_y), or None for an empty drawing.
    pub fn extent(&self) -> Option<(Coord, Coord, Coord, Coord)> {
        let mut it = self
            .coords
            .iter()
            .chain(self.edges.iter().flat_map(|e| e.route.iter()));
        let first = it.next()?;
        let mut min_x = first.x.clone();
        let mut max_x = first.x.clone();
        let mut min_y = first.y.clone();
        let mut max_y = first.y.clone();
        for p in it {
            if p.x < min_x {
                min_x = p.x.clone();
            }
            if p.x > max_x {
                max_x = p.x.clone();
            }
            if p.y < min_y {
                min_y = p.y.clone();
            }
            if p.y > max_y {
                max_y = p.y.clone();
            }
        }
        Some((min_x, max_x, min_y, max_y))
    }

    /// Deterministic JSON in the drawing document format.
    pub fn to_json_string(&self) -> String {
        let mut order: Vec<usize> = (0..self.labels.len()).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        let mut out = String::from("{\"vertices\":{");
        for (i, &v) in order.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "{}:[\"{}\",\"{}\"]",
                crate::graph::json_str(&self.labels[v]),
                self.coords[v].x,
                self.coords[v].y
            ));
        }
        out.push_str("},\"edges\":[");
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&format!(
                "{{\"u\":{},\"v\":{},\"route\":[",
                crate::graph::json_str(&self.labels[e.u]),
                crate::graph::json_str(&self.labels[e.v])
            ));
            for (j, p) in e.route.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&format!("[\"{}\",\"{}\"]", p.x, p.y));
            }
            out.push_str(&format!(
                "],\"ports\":[\"{}\",\"{}\"]}}",
                e.port_u.as_str(),
                e.port_v.as_str()
            ));
        }
        out.push_str("]}");
        out
    }
}

/// Index of the unique horizontal segment of a route, if any.
fn horizontal_segment(route: &[Point]) -> Option<usize> {
    (0..route.len() - 1).find(|&i| slope_of(&route[i], &route[i + 1]) == Some(Slope::Horizontal))
}

/// Ports implied by the first and last route steps.
fn route_ports(route: &[Point]) -> (Port, Port) {
    let (sx, sy) = step_signs(&route[0], &route[1]);
    let pu = Port::from_step(sx, sy);
    let k = route.len() - 1;
    let (sx, sy) = step_signs(&route[k], &route[k - 1]);
    (pu, Port::from_step(sx, sy))
}

/// Structural route check: 2–3 points, octilinear slopes, real bend.
fn validate_route(route: &[Point]) -> Result<(), String> {
    if route.len() < 2 || route.len() > 3 {
        return Err(format!("route has {} points, need 2 or 3", route.len()));
    }
    let mut slopes = Vec::new();
    for i in 0..route.len() - 1 {
        match slope_of(&route[i], &route[i + 1]) {
            Some(s) => slopes.push(s),
            None => return Err(format!("segment {i} is not octilinear or has zero length")),
        }
    }
    if slopes.len() == 2 && slopes[0] == slopes[1] {
        return Err("consecutive segments are collinear".into());
    }
    Ok(())
}

/// Full geometric cut validity: every crossed edge has a horizontal
/// crossing segment, and a y-monotone separating curve exists (on every
/// horizontal line, all Left geometry lies strictly left of all Right
/// geometry, crossing segments contributing their endpoints).
pub fn cut_is_separating(d: &OctiDrawing, cut: &Cut) -> bool {
    enum Piece {
        Normal(Side, Point, Point),
        Crossing(Point, Point, Side, Side),
    }
    let mut pieces = Vec::new();
    for e in d.edges() {
        let su = cut.side(e.u);
        let sv = cut.side(e.v);
        if su == sv {
            for w in e.route.windows(2) {
                pieces.push(Piece::Normal(su, w[0].clone(), w[1].clone()));
            }
            continue;
        }
        let h = match horizontal_segment(&e.route) {
            Some(h) => h,
            None => return false,
        };
        for (i, w) in e.route.windows(2).enumerate() {
            if i == h {
                pieces.push(Piece::Crossing(w[0].clone(), w[1].clone(), su, sv));
            } else {
                let side = if i < h { su } else { sv };
                pieces.push(Piece::Normal(side, w[0].clone(), w[1].clone()));
            }
        }
    }
    for (v, p) in d.coords().iter().enumerate() {
        pieces.push(Piece::Normal(cut.side(v), p.clone(), p.clone()));
    }

    // Work in doubled coordinates so strip midpoints stay integral.
    let two = Coord::from(2);
    let mut rows: BTreeSet<Coord> = BTreeSet::new();
    for piece in &pieces {
        let (a, b) = match piece {
            Piece::Normal(_, a, b) => (a, b),
            Piece::Crossing(a, b, _, _) => (a, b),
        };
        rows.insert(&a.y * &two);
        rows.insert(&b.y * &two);
    }
    let sorted: Vec<Coord> = rows.iter().cloned().collect();
    let mut samples = sorted.clone();
    for w in sorted.windows(2) {
        samples.push((&w[0] + &w[1]) / &two);
    }

    for r in &samples {
        let mut left_max: Option<Coord> = None;
        let mut right_min: Option<Coord> = None;
        let mut bump = |side: Side, x: Coord| match side {
            Side::Left => {
                if left_max.as_ref().map_or(true, |m| x > *m) {
                    left_max = Some(x);
                }
            }
            Side::Right => {
                if right_min.as_ref().map_or(true, |m| x < *m) {
                    right_min = Some(x);
                }
            }
        };
        for piece in &pieces {
            match piece {
                Piece::Normal(side, a, b) => {
                    if let Some((lo, hi)) = extent_at_row(a, b, r) {
                        match side {
                            Side::Left => bump(Side::Left, hi),
                            Side::Right => bump(Side::Right, lo),
                        }
                    }
                }
                Piece::Crossing(a, b, sa, sb) => {
                    let ya = &a.y * &two;
                    if ya == *r {
                        bump(*sa, &a.x * &two);
                        bump(*sb, &b.x * &two);
                    }
                }
            }
        }
        if let (Some(l), Some(rm)) = (&left_max, &right_min) {
            if l >= rm {
                return false;
            }
        }
    }
    true
}

/// x-extent (doubled) of an octilinear segment at doubled row r.
fn extent_at_row(a: &Point, b: &Point, r: &Coord) -> Option<(Coord, Coord)> {
    let two = Coord::from(2);
    let ax = &a.x * &two;
    let ay = &a.y * &two;
    let bx = &b.x * &two;
    let by = &b.y * &two;
    let (ylo, yhi) = if ay <= by { (ay.clone(), by.clone()) } else { (by.clone(), ay.clone()) };
    if *r < ylo || *r > yhi {
        return None;
    }
    if ay == by {
        let (lo, hi) = if ax <= bx { (ax, bx) } else { (bx, ax) };
        return Some((lo, hi));
    }
    if ax == bx {
        return Some((ax.clone(), ax));
    }
    let sx: i64 = if (bx > ax) == (by > ay) { 1 } else { -1 };
    let x = &ax + (r - &ay) * Coord::from(sx);
    Some((x.clone(), x))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DrawingDoc {
    vertices: BTreeMap<String, (String, String)>,
    edges: Vec<EdgeDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    u: String,
    v: String,
    route: Vec<(String, String)>,
    ports: (String, String),
}

/// Parses and structurally validates the drawing JSON format.
pub fn parse_drawing(text: &str) -> Result<OctiDrawing, LayoutError> {
    let doc: DrawingDoc = serde_json::from_str(text)
        .map_err(|e| LayoutError::MalformedDrawing(e.to_string()))?;
    let mut labels = Vec::new();
    let mut coords = Vec::new();
    let mut index = BTreeMap::new();
    for (id, (x, y)) in &doc.vertices {
        index.insert(id.clone(), labels.len());
        labels.push(id.clone());
        coords.push(Point { x: parse_int(x)?, y: parse_int(y)? });
    }
    let mut d = OctiDrawing {
        labels,
        fixed: vec![false; coords.len()],
        coords,
        edges: Vec::new(),
    };
    let mut seen = BTreeSet::new();
    for e in &doc.edges {
        let u = *index
            .get(&e.u)
            .ok_or_else(|| LayoutError::MalformedDrawing(format!("unknown vertex {:?}", e.u)))?;
        let v = *index
            .get(&e.v)
            .ok_or_else(|| LayoutError::MalformedDrawing(format!("unknown vertex {:?}", e.v)))?;
        if u == v || !seen.insert((u.min(v), u.max(v))) {
            return Err(LayoutError::MalformedDrawing(format!(
                "edge ({}, {}) repeated or degenerate",
                e.u, e.v
            )));
        }
        let mut route = Vec::new();
        for (x, y) in &e.route {
            route.push(Point { x: parse_int(x)?, y: parse_int(y)? });
        }
        validate_route(&route).map_err(LayoutError::MalformedDrawing)?;
        if route[0] != d.coords[u] || *route.last().unwrap() != d.coords[v] {
            return Err(LayoutError::MalformedDrawing(format!(
                "route of ({}, {}) does not join its endpoints",
                e.u, e.v
            )));
        }
        let (pu, pv) = route_ports(&route);
        if Port::parse(&e.ports.0) != Some(pu) || Port::parse(&e.ports.1) != Some(pv) {
            return Err(LayoutError::MalformedDrawing(format!(
                "declared ports of ({}, {}) do not match the route",
                e.u, e.v
            )));
        }
        if d.port_in_use(u, pu) || d.port_in_use(v, pv) {
            return Err(LayoutError::MalformedDrawing(format!(
                "port already occupied at ({}, {})",
                e.u, e.v
            )));
        }
        d.edges.push(DrawnEdge { u, v, route, port_u: pu, port_v: pv });
    }
    Ok(d)
}

fn parse_int(s: &str) -> Result<BigInt, LayoutError> {
    s.parse::<BigInt>()
        .map_err(|_| LayoutError::MalformedDrawing(format!("bad integer {s:?}")))
}
