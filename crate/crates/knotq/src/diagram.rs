//! Long knot diagrams: validated polylines, crossing detection, bridge
//! decomposition, bridge vertices and the auxiliary vertical lines.
//!
//! A long diagram is an oriented polyline traversed from right infinity to
//! left infinity. The first and last pieces extend horizontally to x = ±10^6,
//! a bound that is exact because no intersection can occur outside the
//! diagram's bounding box (finite coordinates are capped at 10^5).

use crate::error::{Error, Result};
use crate::exactgeom::{frac, parse_rat, rat, ray_down_hits, seg_intersect, Point, Rat, Seg};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const INFINITY_REACH: i64 = 1_000_000;
pub const COORD_BOUND: i64 = 100_000;

macro_rules! id_type {
    ($name:ident) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(SegId);
id_type!(BridgeId);
id_type!(CrossingId);
id_type!(LineId);

/// One passage of the strand through a crossing point.
#[derive(Clone, Debug)]
pub struct Passage {
    pub crossing: CrossingId,
    pub piece: usize,
    pub param: Rat,
    pub point: Point,
    pub over: bool,
}

#[derive(Clone, Debug)]
pub struct Crossing {
    pub id: CrossingId,
    pub position: Point,
    /// Sign of det(under direction, over direction); never zero.
    pub chirality: i8,
    pub over_in: SegId,
    pub over_out: SegId,
    pub under_in: SegId,
    pub under_out: SegId,
}

/// Maximal arc between consecutive crossing passages. Segment 0 is the right
/// infinite one, the last segment the left infinite one.
#[derive(Clone, Debug)]
pub struct Segment {
    pub id: SegId,
    /// Sub-polyline from the starting event to the ending event, corners
    /// included. Infinite ends use the extended virtual endpoints.
    pub path: Vec<Point>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BridgeEnd {
    Infinity,
    Crossing(CrossingId),
}

/// Maximal over-passing path between two under-crossings or an under-crossing
/// and an infinity.
#[derive(Clone, Debug)]
pub struct Bridge {
    pub id: BridgeId,
    pub segments: Vec<SegId>,
    pub begin: BridgeEnd,
    pub end: BridgeEnd,
    /// Crossings this bridge passes over, in traversal order.
    pub over_passes: Vec<CrossingId>,
}

#[derive(Clone, Debug)]
pub struct VerticalLine {
    pub id: LineId,
    pub owner_bridge: BridgeId,
    pub origin: Point,
    /// The crossing where the owner bridge ends.
    pub associated_crossing: CrossingId,
    /// Interior hits ordered from below upwards; when the bridge vertex is
    /// counted it is appended as the topmost entry.
    pub hits: Vec<(SegId, Point)>,
    pub vertex_counted: bool,
}

impl VerticalLine {
    /// Total number of intersections, bridge vertex included when counted.
    pub fn k_total(&self) -> usize {
        self.hits.len()
    }
}

/// How detected crossings receive their over/under resolution.
pub enum Resolution {
    /// Per detected crossing in (x, y)-sorted order: `First` means the
    /// earlier-visited passage is the over-pass.
    ByOrder(Vec<OverChoice>),
    /// Keyed by exact crossing position: `true` means the passage whose piece
    /// travels upwards (increasing y) is the over-pass.
    ByAscending(BTreeMap<Point, bool>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OverChoice {
    First,
    Second,
}

/// Rational literal in diagram documents: an integer or a `"p/q"` string.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatLit {
    Int(i64),
    Str(String),
}

impl RatLit {
    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            RatLit::Int(n) => Ok(rat(*n)),
            RatLit::Str(s) => parse_rat(s),
        }
    }
}

/// Input document for an explicit diagram: points in right-to-left traversal
/// order and one over/under choice per detected crossing.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub points: Vec<(RatLit, RatLit)>,
    pub over: Vec<OverChoice>,
}

#[derive(Clone, Debug)]
pub struct LongDiagram {
    /// Finite corners in traversal order.
    pub points: Vec<Point>,
    /// Traversal-ordered pieces; the first and last are the infinite tails
    /// extended to x = ±10^6.
    pub pieces: Vec<Seg>,
    /// Crossings sorted lexicographically by (x, y).
    pub crossings: Vec<Crossing>,
    /// All passages in traversal order.
    pub passages: Vec<Passage>,
    pub segments: Vec<Segment>,
    /// Global passage indices per piece, sorted by parameter.
    piece_passages: Vec<Vec<usize>>,
    /// Number of passages on pieces before piece `p`.
    passage_prefix: Vec<usize>,
}

pub fn parse_diagram(spec: &DiagramSpec) -> Result<LongDiagram> {
    let mut pts = Vec::with_capacity(spec.points.len());
    for (x, y) in &spec.points {
        pts.push(Point::new(x.to_rat()?, y.to_rat()?));
    }
    LongDiagram::from_polyline(pts, Resolution::ByOrder(spec.over.clone()))
}

impl LongDiagram {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Builds and validates a diagram from finite corners in right-to-left
    /// traversal order.
    pub fn from_polyline(mut points: Vec<Point>, resolution: Resolution) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Parse("diagram needs at least one point".into()));
        }
        let bound = rat(COORD_BOUND);
        for p in &points {
            if p.x.abs() > bound || p.y.abs() > bound {
                return Err(Error::InvalidDiagram(format!(
                    "coordinate out of range at {p} (|x|,|y| must be <= {COORD_BOUND})"
                )));
            }
        }
        points.dedup();
        merge_collinear(&mut points);

        let ext_right = Point::new(rat(INFINITY_REACH), points[0].y.clone());
        let ext_left = Point::new(rat(-INFINITY_REACH), points.last().unwrap().y.clone());
        let mut pieces = Vec::with_capacity(points.len() + 1);
        pieces.push(Seg::new(ext_right, points[0].clone())?);
        for w in points.windows(2) {
            let seg = Seg::new(w[0].clone(), w[1].clone())?;
            if seg.is_vertical() {
                return Err(Error::InvalidDiagram(format!(
                    "vertical piece at x = {}",
                    crate::exactgeom::rat_string(&seg.a.x)
                )));
            }
            pieces.push(seg);
        }
        pieces.push(Seg::new(points.last().unwrap().clone(), ext_left)?);

        // Adjacent pieces are exempt from pair testing, so catch collinear
        // backtracking corners here (same-direction collinear corners were
        // merged above).
        for w in pieces.windows(2) {
            let (ax, ay) = w[0].dir();
            let (bx, by) = w[1].dir();
            if (&ax * &by - &ay * &bx).is_zero() && !(&ax * &bx + &ay * &by).is_positive() {
                return Err(Error::InvalidDiagram(format!(
                    "polyline backtracks at {}",
                    w[0].b
                )));
            }
        }

        let raw = detect_crossings(&pieces)?;
        let d = Self::assemble(points, pieces, raw, resolution)?;
        Ok(d)
    }

    fn assemble(
        points: Vec<Point>,
        pieces: Vec<Seg>,
        raw: Vec<RawCrossing>,
        resolution: Resolution,
    ) -> Result<Self> {
        let n_crossings = raw.len();

        // Passages in traversal order.
        let mut passages = Vec::with_capacity(2 * n_crossings);
        for (cid, rc) in raw.iter().enumerate() {
            for &(piece, ref param) in &[
                (rc.piece_a, rc.param_a.clone()),
                (rc.piece_b, rc.param_b.clone()),
            ] {
                passages.push(Passage {
                    crossing: CrossingId(cid),
                    piece,
                    param: param.clone(),
                    point: rc.position.clone(),
                    over: false,
                });
            }
        }
        passages.sort_by(|p, q| (p.piece, &p.param).cmp(&(q.piece, &q.param)));

        // Resolve over/under per crossing.
        let mut visit_of: Vec<Vec<usize>> = vec![Vec::new(); n_crossings];
        for (g, p) in passages.iter().enumerate() {
            visit_of[p.crossing.0].push(g);
        }
        for (cid, visits) in visit_of.iter().enumerate() {
            debug_assert_eq!(visits.len(), 2);
            let over_first = match &resolution {
                Resolution::ByOrder(choices) => {
                    if choices.len() != n_crossings {
                        return Err(Error::ResolutionMismatch {
                            found: n_crossings,
                            given: choices.len(),
                        });
                    }
                    choices[cid] == OverChoice::First
                }
                Resolution::ByAscending(map) => {
                    let pos = &raw[cid].position;
                    let asc_over = *map.get(pos).ok_or_else(|| {
                        Error::Internal(format!("no resolution recorded for crossing at {pos}"))
                    })?;
                    let first_ascending = {
                        let piece = &pieces[passages[visits[0]].piece];
                        let (_, dy) = piece.dir();
                        dy.is_positive()
                    };
                    asc_over == first_ascending
                }
            };
            passages[visits[if over_first { 0 } else { 1 }]].over = true;
        }

        // Segments: arcs between consecutive passages.
        let mut piece_passages: Vec<Vec<usize>> = vec![Vec::new(); pieces.len()];
        for (g, p) in passages.iter().enumerate() {
            piece_passages[p.piece].push(g);
        }
        let mut passage_prefix = vec![0usize; pieces.len() + 1];
        for p in 0..pieces.len() {
            passage_prefix[p + 1] = passage_prefix[p] + piece_passages[p].len();
        }

        let mut seg_paths: Vec<Vec<Point>> = vec![vec![pieces[0].a.clone()]];
        for (p, piece) in pieces.iter().enumerate() {
            for &g in &piece_passages[p] {
                let pt = passages[g].point.clone();
                seg_paths.last_mut().unwrap().push(pt.clone());
                seg_paths.push(vec![pt]);
            }
            if p + 1 < pieces.len() {
                seg_paths.last_mut().unwrap().push(piece.b.clone());
            }
        }
        seg_paths
            .last_mut()
            .unwrap()
            .push(pieces.last().unwrap().b.clone());
        debug_assert_eq!(seg_paths.len(), 2 * n_crossings + 1);
        let segments: Vec<Segment> = seg_paths
            .into_iter()
            .enumerate()
            .map(|(i, path)| Segment {
                id: SegId(i),
                path,
            })
            .collect();

        // Crossing records with incident segment ids and chirality.
        let mut crossings = Vec::with_capacity(n_crossings);
        for (cid, rc) in raw.iter().enumerate() {
            let visits = &visit_of[cid];
            let (g_over, g_under) = if passages[visits[0]].over {
                (visits[0], visits[1])
            } else {
                (visits[1], visits[0])
            };
            let (ux, uy) = pieces[passages[g_under].piece].dir();
            let (ox, oy) = pieces[passages[g_over].piece].dir();
            let det = &ux * &oy - &uy * &ox;
            debug_assert!(!det.is_zero());
            crossings.push(Crossing {
                id: CrossingId(cid),
                position: rc.position.clone(),
                chirality: if det.is_positive() { 1 } else { -1 },
                over_in: SegId(g_over),
                over_out: SegId(g_over + 1),
                under_in: SegId(g_under),
                under_out: SegId(g_under + 1),
            });
        }

        Ok(LongDiagram {
            points,
            pieces,
            crossings,
            passages,
            segments,
            piece_passages,
            passage_prefix,
        })
    }

    /// Segment containing the point at `param` on `piece`. The parameter must
    /// not coincide with a passage parameter.
    fn segment_at(&self, piece: usize, param: &Rat) -> SegId {
        let before = self.piece_passages[piece]
            .iter()
            .take_while(|&&g| self.passages[g].param < *param)
            .count();
        SegId(self.passage_prefix[piece] + before)
    }

    /// All interior hits of the open downward ray from `origin`, sorted from
    /// below upwards, skipping the piece the origin lies on.
    fn scan_ray(&self, origin: &Point, skip_piece: usize) -> Result<Vec<(SegId, Point)>> {
        let mut found: Vec<(Rat, SegId, Point)> = Vec::new();
        for (p, piece) in self.pieces.iter().enumerate() {
            if p == skip_piece {
                continue;
            }
            if let Some((pt, y)) = ray_down_hits(origin, piece)? {
                let param = piece.param_of(&pt);
                let seg = self.segment_at(p, &param);
                found.push((y, seg, pt));
            }
        }
        found.sort_by(|a, b| a.0.cmp(&b.0));
        for w in found.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Degenerate(format!(
                    "two ray hits at the same height below {origin}"
                )));
            }
        }
        Ok(found.into_iter().map(|(_, s, p)| (s, p)).collect())
    }
}

struct RawCrossing {
    position: Point,
    piece_a: usize,
    param_a: Rat,
    piece_b: usize,
    param_b: Rat,
}

fn merge_collinear(points: &mut Vec<Point>) {
    let mut i = 1;
    while i + 1 < points.len() {
        let (ax, ay) = (&points[i].x - &points[i - 1].x, &points[i].y - &points[i - 1].y);
        let (bx, by) = (&points[i + 1].x - &points[i].x, &points[i + 1].y - &points[i].y);
        if (&ax * &by - &ay * &bx).is_zero() && (&ax * &bx + &ay * &by).is_positive() {
            points.remove(i);
        } else {
            i += 1;
        }
    }
}

fn bbox_disjoint(s: &Seg, t: &Seg) -> bool {
    let (sx0, sx1) = minmax(&s.a.x, &s.b.x);
    let (tx0, tx1) = minmax(&t.a.x, &t.b.x);
    if sx1 < tx0 || tx1 < sx0 {
        return true;
    }
    let (sy0, sy1) = minmax(&s.a.y, &s.b.y);
    let (ty0, ty1) = minmax(&t.a.y, &t.b.y);
    sy1 < ty0 || ty1 < sy0
}

fn minmax<'a>(a: &'a Rat, b: &'a Rat) -> (&'a Rat, &'a Rat) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn detect_crossings(pieces: &[Seg]) -> Result<Vec<RawCrossing>> {
    let mut raw: Vec<RawCrossing> = Vec::new();
    for i in 0..pieces.len() {
        for j in i + 2..pieces.len() {
            if bbox_disjoint(&pieces[i], &pieces[j]) {
                continue;
            }
            if let Some(p) = seg_intersect(&pieces[i], &pieces[j])? {
                raw.push(RawCrossing {
                    param_a: pieces[i].param_of(&p),
                    param_b: pieces[j].param_of(&p),
                    piece_a: i,
                    piece_b: j,
                    position: p,
                });
            }
        }
    }
    raw.sort_by(|a, b| (&a.position.x, &a.position.y).cmp(&(&b.position.x, &b.position.y)));
    for w in raw.windows(2) {
        if w[0].position == w[1].position {
            return Err(Error::InvalidDiagram(format!(
                "more than two strands pass through {}",
                w[0].position
            )));
        }
    }
    Ok(raw)
}

/// Splits the diagram into bridges. The linear order of bridges follows the
/// diagram orientation; there are always `crossings + 1` of them.
pub fn decompose_bridges(d: &LongDiagram) -> Vec<Bridge> {
    let mut bridges: Vec<Bridge> = Vec::with_capacity(d.crossings.len() + 1);
    let mut cur = Bridge {
        id: BridgeId(0),
        segments: vec![SegId(0)],
        begin: BridgeEnd::Infinity,
        end: BridgeEnd::Infinity,
        over_passes: Vec::new(),
    };
    for (g, passage) in d.passages.iter().enumerate() {
        if passage.over {
            cur.over_passes.push(passage.crossing);
            cur.segments.push(SegId(g + 1));
        } else {
            cur.end = BridgeEnd::Crossing(passage.crossing);
            bridges.push(cur);
            cur = Bridge {
                id: BridgeId(bridges.len()),
                segments: vec![SegId(g + 1)],
                begin: BridgeEnd::Crossing(passage.crossing),
                end: BridgeEnd::Infinity,
                over_passes: Vec::new(),
            };
        }
    }
    bridges.push(cur);
    debug_assert_eq!(bridges.len(), d.crossings.len() + 1);
    bridges
}

/// Bridge owning each segment.
pub fn bridge_of_segments(d: &LongDiagram, bridges: &[Bridge]) -> Vec<BridgeId> {
    let mut map = vec![BridgeId(0); d.segments.len()];
    for b in bridges {
        for s in &b.segments {
            map[s.0] = b.id;
        }
    }
    map
}

/// Deterministic perturbation parameters 1/2, 1/3, 2/3, 1/5, 2/5, ...
/// (numerators over prime denominators).
pub fn perturbation_schedule() -> impl Iterator<Item = Rat> {
    let primes = (2u64..).filter(|n| (2..*n).all(|d| n % d != 0));
    primes.flat_map(|q| (1..q).map(move |p| frac(p as i64, q as i64)))
}

const SCHEDULE_TRIES: usize = 64;

/// Places a vertex on every bridge except the left infinite one, on the final
/// segment strictly between the last crossing-or-corner event and the bridge
/// end, generic with respect to vertical alignment and ray shooting.
///
/// `schedule_offset` skips the first candidates of the perturbation schedule;
/// the downstream invariant must not depend on it.
pub fn place_bridge_vertices(
    d: &LongDiagram,
    bridges: &[Bridge],
    schedule_offset: usize,
) -> Result<BTreeMap<BridgeId, Point>> {
    let mut placed: BTreeMap<BridgeId, Point> = BTreeMap::new();
    for bridge in bridges {
        if bridge.end == BridgeEnd::Infinity {
            continue;
        }
        let last_seg = &d.segments[bridge.segments.last().unwrap().0];
        let path = &last_seg.path;
        debug_assert!(path.len() >= 2);
        let anchor = &path[path.len() - 2];
        let end = &path[path.len() - 1];
        // The final straight run lies on the piece carrying the end passage.
        let end_passage_global = last_seg.id.0; // passage index == segment index
        let own_piece = d.passages[end_passage_global].piece;

        let mut chosen = None;
        for t in perturbation_schedule()
            .skip(schedule_offset)
            .take(SCHEDULE_TRIES)
        {
            let v = Point::new(
                &anchor.x + &t * (&end.x - &anchor.x),
                &anchor.y + &t * (&end.y - &anchor.y),
            );
            let aligned_with_crossing = d.crossings.iter().any(|c| c.position.x == v.x);
            let aligned_with_vertex = placed.values().any(|p| p.x == v.x);
            if aligned_with_crossing || aligned_with_vertex {
                continue;
            }
            if d.scan_ray(&v, own_piece).is_err() {
                continue;
            }
            chosen = Some(v);
            break;
        }
        match chosen {
            Some(v) => {
                placed.insert(bridge.id, v);
            }
            None => return Err(Error::PerturbationExhausted),
        }
    }
    Ok(placed)
}

/// Shoots the downward vertical line from every bridge vertex and records its
/// intersections from below upwards. The vertex itself is counted as the
/// topmost intersection exactly when the ray departs to the right of the
/// diagram's direction, i.e. when the local direction has positive
/// x-component.
pub fn shoot_vertical_lines(
    d: &LongDiagram,
    bridges: &[Bridge],
    vertices: &BTreeMap<BridgeId, Point>,
) -> Result<Vec<VerticalLine>> {
    let mut lines = Vec::new();
    for bridge in bridges {
        let BridgeEnd::Crossing(assoc) = bridge.end else {
            continue;
        };
        let origin = vertices
            .get(&bridge.id)
            .ok_or_else(|| Error::Internal(format!("no vertex for bridge {}", bridge.id)))?;
        let last_seg = &d.segments[bridge.segments.last().unwrap().0];
        let own_piece = d.passages[last_seg.id.0].piece;
        let mut hits = d.scan_ray(origin, own_piece)?;
        let (dx, _) = d.pieces[own_piece].dir();
        let vertex_counted = dx.is_positive();
        if vertex_counted {
            hits.push((last_seg.id, origin.clone()));
        }
        lines.push(VerticalLine {
            id: LineId(lines.len()),
            owner_bridge: bridge.id,
            origin: origin.clone(),
            associated_crossing: assoc,
            hits,
            vertex_counted,
        });
    }
    debug_assert_eq!(lines.len(), d.crossings.len());
    Ok(lines)
}

/// Whether a downward ray from a vertex with local travel direction `dir`
/// departs to the right of the diagram (and is therefore counted).
pub fn ray_departs_right(dir: (&Rat, &Rat)) -> bool {
    // cross(dir, (0,-1)) = -dir.x, negative exactly when dir.x > 0
    dir.0.is_positive()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactgeom::frac;

    pub fn trefoil_spec() -> DiagramSpec {
        // Left-handed trefoil drawn as a long polyline, right-to-left.
        let pts: Vec<(RatLit, RatLit)> = vec![
            (RatLit::Int(5), RatLit::Int(0)),
            (RatLit::Int(4), RatLit::Int(0)),
            (RatLit::Int(3), RatLit::Int(1)),
            (RatLit::Int(2), RatLit::Int(0)),
            (RatLit::Str("4/5".into()), RatLit::Str("6/5".into())),
            (RatLit::Str("21/5".into()), RatLit::Str("6/5".into())),
            (RatLit::Int(3), RatLit::Int(0)),
            (RatLit::Int(2), RatLit::Int(1)),
            (RatLit::Int(1), RatLit::Int(0)),
            (RatLit::Int(0), RatLit::Int(0)),
        ];
        DiagramSpec {
            points: pts,
            over: vec![OverChoice::First, OverChoice::Second, OverChoice::First],
        }
    }

    #[test]
    fn trefoil_parses_with_three_crossings() {
        let d = parse_diagram(&trefoil_spec()).unwrap();
        assert_eq!(d.crossing_count(), 3);
        let xs: Vec<_> = d.crossings.iter().map(|c| c.position.clone()).collect();
        assert_eq!(xs[0], Point::new(frac(3, 2), frac(1, 2)));
        assert_eq!(xs[1], Point::new(frac(5, 2), frac(1, 2)));
        assert_eq!(xs[2], Point::new(frac(7, 2), frac(1, 2)));
        assert!(d.crossings.iter().all(|c| c.chirality == -1));
        assert_eq!(d.segments.len(), 7);
    }

    #[test]
    fn zero_crossing_line_is_valid() {
        let spec = DiagramSpec {
            points: vec![
                (RatLit::Int(1), RatLit::Int(0)),
                (RatLit::Int(0), RatLit::Int(0)),
            ],
            over: vec![],
        };
        let d = parse_diagram(&spec).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(decompose_bridges(&d).len(), 1);
    }

    #[test]
    fn shared_endpoint_crossing_is_degenerate() {
        // The last piece ends exactly on an earlier piece.
        let spec = DiagramSpec {
            points: vec![
                (RatLit::Int(4), RatLit::Int(0)),
                (RatLit::Int(0), RatLit::Int(0)),
                (RatLit::Int(2), RatLit::Int(2)),
                (RatLit::Int(2), RatLit::Int(0)),
            ],
            over: vec![],
        };
        assert!(matches!(
            parse_diagram(&spec),
            Err(Error::Degenerate(_)) | Err(Error::InvalidDiagram(_))
        ));
    }

    #[test]
    fn resolution_count_mismatch() {
        let mut spec = trefoil_spec();
        spec.over.pop();
        assert!(matches!(
            parse_diagram(&spec),
            Err(Error::ResolutionMismatch { found: 3, given: 2 })
        ));
    }

    #[test]
    fn trefoil_bridges() {
        let d = parse_diagram(&trefoil_spec()).unwrap();
        let bridges = decompose_bridges(&d);
        assert_eq!(bridges.len(), 4);
        assert_eq!(bridges[0].begin, BridgeEnd::Infinity);
        assert_eq!(bridges[3].end, BridgeEnd::Infinity);
        // Crossings sorted by x: c0 = (3/2,.), c1 = (5/2,.), c2 = (7/2,.).
        // Bridge 0 passes over the rightmost crossing, bridge 1 over the
        // leftmost, bridge 2 over the middle one.
        assert_eq!(bridges[0].over_passes, vec![CrossingId(2)]);
        assert_eq!(bridges[1].over_passes, vec![CrossingId(0)]);
        assert_eq!(bridges[2].over_passes, vec![CrossingId(1)]);
        assert_eq!(bridges[3].over_passes, vec![]);
        assert_eq!(bridges[0].end, BridgeEnd::Crossing(CrossingId(1)));
        assert_eq!(bridges[1].end, BridgeEnd::Crossing(CrossingId(2)));
        assert_eq!(bridges[2].end, BridgeEnd::Crossing(CrossingId(0)));
        // Every crossing is the end of exactly one bridge and the beginning
        // of exactly one bridge.
        for c in &d.crossings {
            let ends = bridges
                .iter()
                .filter(|b| b.end == BridgeEnd::Crossing(c.id))
                .count();
            let begins = bridges
                .iter()
                .filter(|b| b.begin == BridgeEnd::Crossing(c.id))
                .count();
            assert_eq!((ends, begins), (1, 1));
        }
    }

    #[test]
    fn trefoil_vertices_and_lines() {
        let d = parse_diagram(&trefoil_spec()).unwrap();
        let bridges = decompose_bridges(&d);
        let vertices = place_bridge_vertices(&d, &bridges, 0).unwrap();
        assert_eq!(vertices.len(), 3);
        // Midpoint of the final gap for bridges 0 and 2 reproduces the
        // reference picture's vertex spots.
        assert_eq!(
            vertices[&BridgeId(0)],
            Point::new(frac(11, 4), frac(3, 4))
        );
        assert_eq!(
            vertices[&BridgeId(2)],
            Point::new(frac(7, 4), frac(3, 4))
        );
        assert_eq!(
            vertices[&BridgeId(1)],
            Point::new(frac(77, 20), frac(17, 20))
        );

        let lines = shoot_vertical_lines(&d, &bridges, &vertices).unwrap();
        assert_eq!(lines.len(), 3);
        for line in &lines {
            assert_eq!(line.k_total(), 1);
            assert!(!line.vertex_counted);
            // hit strictly below the origin
            assert!(line.hits[0].1.y < line.origin.y);
        }
        // Line of bridge 2 (the one ending at the leftmost crossing) hits the
        // first segment of bridge 1.
        let l2 = lines.iter().find(|l| l.owner_bridge == BridgeId(2)).unwrap();
        assert_eq!(l2.associated_crossing, CrossingId(0));
        assert_eq!(l2.hits[0].0, bridges[1].segments[0]);
        assert_eq!(l2.hits[0].1, Point::new(frac(7, 4), frac(1, 4)));
    }

    #[test]
    fn vertex_counting_rule() {
        let right = (rat(1), rat(0));
        let left = (rat(-1), rat(0));
        let down_left = (rat(-1), rat(-1));
        assert!(ray_departs_right((&right.0, &right.1)));
        assert!(!ray_departs_right((&left.0, &left.1)));
        assert!(!ray_departs_right((&down_left.0, &down_left.1)));
    }

    #[test]
    fn schedule_prefix() {
        let got: Vec<Rat> = perturbation_schedule().take(7).collect();
        let want = vec![
            frac(1, 2),
            frac(1, 3),
            frac(2, 3),
            frac(1, 5),
            frac(2, 5),
            frac(3, 5),
            frac(4, 5),
        ];
        assert_eq!(got, want);
    }
}
