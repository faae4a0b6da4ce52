//! Independent drawing verification: octilinearity, planarity, bend
//! counts, embedding preservation, area bounds.
//!
//! All geometric decisions use exact integer arithmetic; nothing here
//! reuses the construction-side geometry helpers.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::embed::PlanarEmbedding;
use crate::layout::{OctiDrawing, Port};
use crate::{Coord, Point};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("malformed drawing: {0}")]
    MalformedDrawing(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub octilinear: bool,
    /// Offending (edge u, edge v, segment index) when octilinear fails.
    pub octilinear_offender: Option<(String, String, usize)>,
    pub planar: bool,
    /// Two entity descriptions ("u-v" for an edge, a label for a vertex)
    /// when planar fails.
    pub crossing: Option<(String, String)>,
    pub max_bends: usize,
    pub total_bends: usize,
    pub bend_budget: usize,
    pub embedding_preserved: bool,
    pub embedding_offender: Option<String>,
    pub width: Coord,
    pub height: Coord,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.octilinear
            && self.planar
            && self.embedding_preserved
            && self.max_bends <= self.bend_budget
    }

    pub fn to_json_string(&self) -> String {
        let mut out = String::from("{");
        out.push_str(&format!("\"octilinear\":{}", self.octilinear));
        if let Some((u, v, s)) = &self.octilinear_offender {
            out.push_str(&format!(
                ",\"octilinear_offender\":{{\"edge\":[{},{}],\"segment\":{s}}}",
                crate::graph::json_str(u),
                crate::graph::json_str(v)
            ));
        }
        out.push_str(&format!(",\"planar\":{}", self.planar));
        if let Some((a, b)) = &self.crossing {
            out.push_str(&format!(
                ",\"crossing\":[{},{}]",
                crate::graph::json_str(a),
                crate::graph::json_str(b)
            ));
        }
        out.push_str(&format!(
            ",\"max_bends\":{},\"total_bends\":{},\"bend_budget\":{}",
            self.max_bends, self.total_bends, self.bend_budget
        ));
        out.push_str(&format!(",\"embedding_preserved\":{}", self.embedding_preserved));
        if let Some(v) = &self.embedding_offender {
            out.push_str(&format!(",\"embedding_offender\":{}", crate::graph::json_str(v)));
        }
        out.push_str(&format!(
            ",\"width\":\"{}\",\"height\":\"{}\",\"all_pass\":{}}}",
            self.width,
            self.height,
            self.all_pass()
        ));
        out
    }
}

/// Exact rational bound c = num/den.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Ratio {
        assert!(den > 0, "denominator must be positive");
        Ratio { num, den }
    }

    pub fn int(v: u64) -> Ratio {
        Ratio { num: v, den: 1 }
    }
}

/// Checks a drawing against every invariant, plus the embedding when one
/// is supplied. Structural defects abort with MalformedDrawing; geometric
/// and combinatorial defects land in the report.
pub fn verify(
    d: &OctiDrawing,
    emb: Option<&PlanarEmbedding>,
    bend_budget: usize,
) -> Result<VerificationReport, VerifyError> {
    check_structure(d)?;

    let (octilinear, octilinear_offender) = check_octilinear(d);
    let (planar, crossing) = check_planar(d);
    let (total_bends, max_bends) = count_bends(d);
    let (embedding_preserved, embedding_offender) = match emb {
        None => (true, None),
        Some(emb) => check_embedding(d, emb),
    };
    let (width, height) = match d.extent() {
        Some((min_x, max_x, min_y, max_y)) => (max_x - min_x, max_y - min_y),
        None => (Coord::zero(), Coord::zero()),
    };
    Ok(VerificationReport {
        octilinear,
        octilinear_offender,
        planar,
        crossing,
        max_bends,
        total_bends,
        bend_budget,
        embedding_preserved,
        embedding_offender,
        width,
        height,
    })
}

/// Total and per-edge maximum bend counts.
pub fn count_bends(d: &OctiDrawing) -> (usize, usize) {
    let mut total = 0;
    let mut max = 0;
    for e in d.edges() {
        let bends = e.route.len() - 2;
        total += bends;
        max = max.max(bends);
    }
    (total, max)
}

/// Pass iff width ≤ c_w·n² and height ≤ c_h·n.
pub fn check_area(d: &OctiDrawing, c_w: Ratio, c_h: Ratio, n: usize) -> bool {
    let (width, height) = match d.extent() {
        Some((min_x, max_x, min_y, max_y)) => (max_x - min_x, max_y - min_y),
        None => return true,
    };
    let n = BigInt::from(n);
    let w_ok = width * BigInt::from(c_w.den) <= BigInt::from(c_w.num) * &n * &n;
    let h_ok = height * BigInt::from(c_h.den) <= BigInt::from(c_h.num) * &n;
    w_ok && h_ok
}

fn edge_name(d: &OctiDrawing, idx: usize) -> String {
    let e = &d.edges()[idx];
    format!("{}-{}", d.label(e.u), d.label(e.v))
}

fn check_structure(d: &OctiDrawing) -> Result<(), VerifyError> {
    let fail = |msg: String| Err(VerifyError::MalformedDrawing(msg));
    let mut at: BTreeMap<&Point, usize> = BTreeMap::new();
    for v in 0..d.vertex_count() {
        if let Some(&w) = at.get(d.coord(v)) {
            return fail(format!(
                "vertices {} and {} share coordinates",
                d.label(w),
                d.label(v)
            ));
        }
        at.insert(d.coord(v), v);
    }
    let mut seen_edges = BTreeSet::new();
    let mut used_ports: BTreeSet<(usize, Port)> = BTreeSet::new();
    for e in d.edges() {
        let name = format!("{}-{}", d.label(e.u), d.label(e.v));
        if e.u == e.v {
            return fail(format!("edge {name} is a self-loop"));
        }
        if !seen_edges.insert((e.u.min(e.v), e.u.max(e.v))) {
            return fail(format!("edge {name} drawn twice"));
        }
        if e.route.len() < 2 || e.route.len() > 3 {
            return fail(format!("edge {name} has a route of {} points", e.route.len()));
        }
        if e.route[0] != *d.coord(e.u) || *e.route.last().unwrap() != *d.coord(e.v) {
            return fail(format!("route of {name} does not join its endpoints"));
        }
        let mut dirs = Vec::new();
        for (i, w) in e.route.windows(2).enumerate() {
            let dx = &w[1].x - &w[0].x;
            let dy = &w[1].y - &w[0].y;
            if dx.is_zero() && dy.is_zero() {
                return fail(format!("segment {i} of {name} has zero length"));
            }
            dirs.push((dx, dy));
        }
        if dirs.len() == 2 {
            let cross = &dirs[0].0 * &dirs[1].1 - &dirs[0].1 * &dirs[1].0;
            if cross.is_zero() {
                return fail(format!("consecutive segments of {name} are collinear"));
            }
        }
        let first = Port::from_step(bigint_sign(&dirs[0].0), bigint_sign(&dirs[0].1));
        let last = dirs.last().unwrap();
        let back = Port::from_step(-bigint_sign(&last.0), -bigint_sign(&last.1));
        if e.port_u != first || e.port_v != back {
            return fail(format!("declared ports of {name} do not match its route"));
        }
        if !used_ports.insert((e.u, e.port_u)) {
            return fail(format!(
                "port {} of vertex {} used twice",
                e.port_u.as_str(),
                d.label(e.u)
            ));
        }
        if !used_ports.insert((e.v, e.port_v)) {
            return fail(format!(
                "port {} of vertex {} used twice",
                e.port_v.as_str(),
                d.label(e.v)
            ));
        }
    }
    Ok(())
}

fn bigint_sign(v: &BigInt) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn check_octilinear(d: &OctiDrawing) -> (bool, Option<(String, String, usize)>) {
    for e in d.edges() {
        for (i, w) in e.route.windows(2).enumerate() {
            let dx = &w[1].x - &w[0].x;
            let dy = &w[1].y - &w[0].y;
            let ok = dx.is_zero() || dy.is_zero() || dx.abs() == dy.abs();
            if !ok {
                return (false, Some((d.label(e.u).into(), d.label(e.v).into(), i)));
            }
        }
    }
    (true, None)
}

struct SegRec {
    edge: usize,
    a: Point,
    b: Point,
    min_x: Coord,
    max_x: Coord,
    min_y: Coord,
    max_y: Coord,
}

fn seg_rec(edge: usize, a: &Point, b: &Point) -> SegRec {
    SegRec {
        edge,
        a: a.clone(),
        b: b.clone(),
        min_x: a.x.clone().min(b.x.clone()),
        max_x: a.x.clone().max(b.x.clone()),
        min_y: a.y.clone().min(b.y.clone()),
        max_y: a.y.clone().max(b.y.clone()),
    }
}

fn orient(a: &Point, b: &Point, c: &Point) -> i8 {
    let cross = (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x);
    bigint_sign(&cross)
}

fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    orient(a, b, p) == 0
        && p.x >= a.x.clone().min(b.x.clone())
        && p.x <= a.x.clone().max(b.x.clone())
        && p.y >= a.y.clone().min(b.y.clone())
        && p.y <= a.y.clone().max(b.y.clone())
}

fn check_planar(d: &OctiDrawing) -> (bool, Option<(String, String)>) {
    let mut segs = Vec::new();
    for (i, e) in d.edges().iter().enumerate() {
        for w in e.route.windows(2) {
            segs.push(seg_rec(i, &w[0], &w[1]));
        }
    }

    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            let (s1, s2) = (&segs[i], &segs[j]);
            if s1.max_x < s2.min_x
                || s2.max_x < s1.min_x
                || s1.max_y < s2.min_y
                || s2.max_y < s1.min_y
            {
                continue;
            }
            if !segments_compatible(d, s1, s2) {
                return (false, Some((edge_name(d, s1.edge), edge_name(d, s2.edge))));
            }
        }
    }

    for v in 0..d.vertex_count() {
        let p = d.coord(v);
        for s in &segs {
            let e = &d.edges()[s.edge];
            if e.u == v || e.v == v {
                continue;
            }
            if on_segment(&s.a, &s.b, p) {
                return (false, Some((d.label(v).into(), edge_name(d, s.edge))));
            }
        }
    }
    (true, None)
}

/// Decides whether two route segments may coexist: disjoint, or touching
/// in exactly one allowed point (a shared bend for segments of the same
/// edge, a shared endpoint vertex for segments of different edges).
fn segments_compatible(d: &OctiDrawing, s1: &SegRec, s2: &SegRec) -> bool {
    let d1 = orient(&s2.a, &s2.b, &s1.a);
    let d2 = orient(&s2.a, &s2.b, &s1.b);
    let d3 = orient(&s1.a, &s1.b, &s2.a);
    let d4 = orient(&s1.a, &s1.b, &s2.b);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return false;
    }
    let mut touches: Vec<&Point> = Vec::new();
    for p in [&s1.a, &s1.b] {
        if on_segment(&s2.a, &s2.b, p) && !touches.contains(&p) {
            touches.push(p);
        }
    }
    for p in [&s2.a, &s2.b] {
        if on_segment(&s1.a, &s1.b, p) && !touches.contains(&p) {
            touches.push(p);
        }
    }
    if touches.is_empty() {
        return true;
    }
    if touches.len() > 1 {
        return false;
    }
    let p = touches[0];
    if s1.edge == s2.edge {
        let e = &d.edges()[s1.edge];
        return e.route.len() == 3 && *p == e.route[1];
    }
    let e1 = &d.edges()[s1.edge];
    let e2 = &d.edges()[s2.edge];
    let shared: Vec<usize> = [e1.u, e1.v]
        .into_iter()
        .filter(|w| *w == e2.u || *w == e2.v)
        .collect();
    if shared.len() != 1 {
        return false;
    }
    let w = shared[0];
    *p == *d.coord(w) && (*p == s1.a || *p == s1.b) && (*p == s2.a || *p == s2.b)
}

/// Compares the counterclockwise port order at every vertex with the
/// embedding rotation, allowing one global reflection.
fn check_embedding(d: &OctiDrawing, emb: &PlanarEmbedding) -> (bool, Option<String>) {
    let g = emb.graph();
    let mut to_graph: BTreeMap<&str, usize> = BTreeMap::new();
    for v in 0..g.vertex_count() {
        to_graph.insert(g.label(v), v);
    }
    if g.vertex_count() != d.vertex_count() {
        return (false, Some("vertex sets differ".into()));
    }
    let mut drawn_rot: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    let mut drawn_count = 0;
    for e in d.edges() {
        drawn_count += 1;
        let (gu, gv) = match (to_graph.get(d.label(e.u)), to_graph.get(d.label(e.v))) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return (false, Some(d.label(e.u).into())),
        };
        if !g.has_edge(gu, gv) {
            return (false, Some(d.label(e.u).into()));
        }
        let _ = (gu, gv);
    }
    if drawn_count != g.edge_count() {
        return (false, Some("edge sets differ".into()));
    }
    for v in 0..d.vertex_count() {
        let gv = to_graph[d.label(v)];
        let mut ends: Vec<(usize, usize)> = d
            .edges()
            .iter()
            .filter(|e| e.u == v || e.v == v)
            .map(|e| (e.port_at(v).index(), to_graph[d.label(e.other(v))]))
            .collect();
        ends.sort_unstable();
        drawn_rot[gv] = ends.into_iter().map(|(_, w)| w).collect();
    }
    let forward = (0..g.vertex_count()).all(|v| cyclic_eq(&drawn_rot[v], emb.rotation(v)));
    if forward {
        return (true, None);
    }
    for v in 0..g.vertex_count() {
        let mut rev = drawn_rot[v].clone();
        rev.reverse();
        if !cyclic_eq(&rev, emb.rotation(v)) {
            return (false, Some(g.label(v).into()));
        }
    }
    (true, None)
}

fn cyclic_eq(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|k| (0..a.len()).all(|i| a[i] == b[(i + k) % b.len()]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::planar_embed;
    use crate::graph::Graph;
    use crate::layout::{DrawnEdge, NoseOrientation};

    fn pt(x: i64, y: i64) -> Point {
        Point::of(x, y)
    }

    fn triangle_drawing() -> OctiDrawing {
        let mut d = OctiDrawing::empty(vec!["0".into(), "1".into(), "2".into()]);
        d.place(0, pt(0, 0));
        d.place(1, pt(4, 0));
        d.place(2, pt(4, 4));
        d.add_edge(0, 1, vec![pt(0, 0), pt(4, 0)]).unwrap();
        d.add_edge(1, 2, vec![pt(4, 0), pt(4, 4)]).unwrap();
        d.add_edge(0, 2, vec![pt(0, 0), pt(4, 4)]).unwrap();
        d
    }

    #[test]
    fn straight_triangle_passes() {
        let d = triangle_drawing();
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let emb = planar_embed(&g).unwrap();
        let report = verify(&d, Some(&emb), 1).unwrap();
        assert!(report.all_pass(), "{report:?}");
        assert_eq!(report.total_bends, 0);
        assert_eq!(report.max_bends, 0);
        assert_eq!(report.width, Coord::from(4));
        assert_eq!(report.height, Coord::from(4));
    }

    #[test]
    fn crossing_diagonals_fail_planarity() {
        let mut d = OctiDrawing::empty(vec!["a".into(), "b".into(), "c".into(), "d".into()]);
        d.place(0, pt(0, 0));
        d.place(1, pt(4, 4));
        d.place(2, pt(0, 4));
        d.place(3, pt(4, 0));
        d.add_edge(0, 1, vec![pt(0, 0), pt(4, 4)]).unwrap();
        d.add_edge(2, 3, vec![pt(0, 4), pt(4, 0)]).unwrap();
        let report = verify(&d, None, 1).unwrap();
        assert!(!report.planar);
        assert_eq!(report.crossing, Some(("a-b".into(), "c-d".into())));
        assert!(report.octilinear);
    }

    #[test]
    fn shared_endpoint_is_allowed_interior_touch_is_not() {
        let d = triangle_drawing();
        let report = verify(&d, None, 1).unwrap();
        assert!(report.planar);

        let mut d = OctiDrawing::empty(vec!["a".into(), "b".into(), "c".into(), "w".into()]);
        d.place(0, pt(0, 0));
        d.place(1, pt(8, 0));
        d.place(2, pt(4, 4));
        d.place(3, pt(4, -4));
        d.add_edge(0, 1, vec![pt(0, 0), pt(8, 0)]).unwrap();
        d.add_edge(2, 3, vec![pt(4, 4), pt(4, -4)]).unwrap();
        let report = verify(&d, None, 1).unwrap();
        assert!(!report.planar);
    }

    #[test]
    fn vertex_on_foreign_edge_fails() {
        let mut d = OctiDrawing::empty(vec!["a".into(), "b".into(), "c".into()]);
        d.place(0, pt(0, 0));
        d.place(1, pt(6, 0));
        d.place(2, pt(3, 0));
        d.add_edge(0, 1, vec![pt(0, 0), pt(6, 0)]).unwrap();
        let report = verify(&d, None, 1).unwrap();
        assert!(!report.planar);
        assert_eq!(report.crossing, Some(("c".into(), "a-b".into())));
    }

    #[test]
    fn collinear_fake_bend_is_malformed() {
        let d = OctiDrawing::from_raw_parts(
            vec!["a".into(), "b".into()],
            vec![pt(0, 0), pt(4, 0)],
            vec![DrawnEdge {
                u: 0,
                v: 1,
                route: vec![pt(0, 0), pt(2, 0), pt(4, 0)],
                port_u: Port::E,
                port_v: Port::W,
            }],
        );
        assert!(matches!(verify(&d, None, 1), Err(VerifyError::MalformedDrawing(_))));
    }

    #[test]
    fn coincident_vertices_are_malformed() {
        let d = OctiDrawing::from_raw_parts(
            vec!["a".into(), "b".into()],
            vec![pt(1, 1), pt(1, 1)],
            vec![],
        );
        assert!(matches!(verify(&d, None, 1), Err(VerifyError::MalformedDrawing(_))));
    }

    #[test]
    fn duplicated_port_is_malformed() {
        let d = OctiDrawing::from_raw_parts(
            vec!["a".into(), "b".into(), "c".into()],
            vec![pt(0, 0), pt(4, 0), pt(8, 0)],
            vec![
                DrawnEdge {
                    u: 0,
                    v: 1,
                    route: vec![pt(0, 0), pt(4, 0)],
                    port_u: Port::E,
                    port_v: Port::W,
                },
                DrawnEdge {
                    u: 0,
                    v: 2,
                    route: vec![pt(0, 0), pt(8, 0)],
                    port_u: Port::E,
                    port_v: Port::W,
                },
            ],
        );
        assert!(matches!(verify(&d, None, 1), Err(VerifyError::MalformedDrawing(_))));
    }

    #[test]
    fn non_octilinear_segment_reported() {
        let d = OctiDrawing::from_raw_parts(
            vec!["a".into(), "b".into()],
            vec![pt(0, 0), pt(3, 1)],
            vec![DrawnEdge {
                u: 0,
                v: 1,
                route: vec![pt(0, 0), pt(3, 1)],
                port_u: Port::NE,
                port_v: Port::SW,
            }],
        );
        let report = verify(&d, None, 1).unwrap();
        assert!(!report.octilinear);
        assert_eq!(report.octilinear_offender, Some(("a".into(), "b".into(), 0)));
    }

    #[test]
    fn embedding_reflection_is_allowed_mixed_flip_is_not() {
        let g = Graph::new(
            vec!["u".into(), "v".into(), "a".into(), "b".into(), "c".into(), "d".into()],
            &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)],
        )
        .unwrap();
        let draw = || {
            let mut d = OctiDrawing::empty(
                vec!["u".into(), "v".into(), "a".into(), "b".into(), "c".into(), "d".into()],
            );
            d.place(0, pt(0, 0));
            d.place(1, pt(10, 0));
            d.place(2, pt(-1, 1));
            d.place(3, pt(-1, -1));
            d.place(4, pt(11, 1));
            d.place(5, pt(11, -1));
            d.add_edge(0, 1, vec![pt(0, 0), pt(10, 0)]).unwrap();
            d.add_edge(0, 2, vec![pt(0, 0), pt(-1, 1)]).unwrap();
            d.add_edge(0, 3, vec![pt(0, 0), pt(-1, -1)]).unwrap();
            d.add_edge(1, 4, vec![pt(10, 0), pt(11, 1)]).unwrap();
            d.add_edge(1, 5, vec![pt(10, 0), pt(11, -1)]).unwrap();
            d
        };

        let rot_match = vec![vec![1, 2, 3], vec![4, 0, 5], vec![0], vec![0], vec![1], vec![1]];
        let emb = PlanarEmbedding::from_rotation(g.clone(), rot_match).unwrap();
        let (ok, _) = check_embedding(&draw(), &emb);
        assert!(ok);

        let mirrored = draw().transform(crate::layout::TransformOp::MirrorH);
        let (ok, _) = check_embedding(&mirrored, &emb);
        assert!(ok, "global reflection must be accepted");

        let rot_flip_u_only =
            vec![vec![1, 3, 2], vec![4, 0, 5], vec![0], vec![0], vec![1], vec![1]];
        let emb = PlanarEmbedding::from_rotation(g, rot_flip_u_only).unwrap();
        let (ok, offender) = check_embedding(&draw(), &emb);
        assert!(!ok);
        assert!(offender.is_some());
    }

    #[test]
    fn area_check_examples() {
        let mut d = OctiDrawing::empty(vec!["a".into(), "b".into()]);
        d.place(0, pt(0, 0));
        d.place(1, pt(1, 0));
        d.add_edge(0, 1, vec![pt(0, 0), pt(1, 0)]).unwrap();
        assert!(check_area(&d, Ratio::int(8), Ratio::int(3), 2));
        let mut wide = OctiDrawing::empty(vec!["a".into(), "b".into()]);
        wide.place(0, pt(0, 0));
        wide.place(1, pt(33, 0));
        wide.add_edge(0, 1, vec![pt(0, 0), pt(33, 0)]).unwrap();
        assert!(!check_area(&wide, Ratio::int(8), Ratio::int(3), 2));
        assert!(check_area(&wide, Ratio::new(33, 4), Ratio::int(3), 2));
    }

    #[test]
    fn nose_output_verifies() {
        let mut d = OctiDrawing::empty(vec!["s".into(), "t".into()]);
        d.place(0, pt(0, 0));
        d.place(1, pt(4, 0));
        d.add_edge(0, 1, vec![pt(0, 0), pt(4, 0)]).unwrap();
        let out = d.make_nose(1, NoseOrientation::Down).unwrap();
        let report = verify(&out, None, 1).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.total_bends, 1);
    }

    #[test]
    fn report_json_is_deterministic() {
        let d = triangle_drawing();
        let r1 = verify(&d, None, 1).unwrap().to_json_string();
        let r2 = verify(&d, None, 1).unwrap().to_json_string();
        assert_eq!(r1, r2);
        assert!(r1.contains("\"all_pass\":true"));
    }
}
