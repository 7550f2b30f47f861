//! Exact rational plane geometry: points, segments, transversal intersection
//! and downward ray shooting.
//!
//! Everything is computed over `BigRational`; there is no floating point and
//! no epsilon anywhere. Configurations that are not in general position
//! (touching endpoints, collinear overlaps, rays through vertices) are
//! reported as [`Error::Degenerate`] so that the diagram layer can apply its
//! deterministic perturbation schedule.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar. Always stored reduced with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational literal `{s}`")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Reduces `x` into `[0, 1)`.
pub fn mod1(x: &Rat) -> Rat {
    let f = x - x.floor();
    debug_assert!(!f.is_negative() && f < Rat::one());
    f
}

/// Renders a rational as `p` or `p/q` (canonical reduced form).
pub fn rat_string(x: &Rat) -> String {
    if is_integer(x) {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn of(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }
}

impl std::fmt::Display for Point {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", rat_string(&self.x), rat_string(&self.y))
    }
}

/// Non-degenerate closed segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seg {
    pub a: Point,
    pub b: Point,
}

impl Seg {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if a == b {
            return Err(Error::Degenerate(format!("zero-length segment at {a}")));
        }
        Ok(Seg { a, b })
    }

    /// Direction vector `b - a`.
    pub fn dir(&self) -> (Rat, Rat) {
        (&self.b.x - &self.a.x, &self.b.y - &self.a.y)
    }

    pub fn is_vertical(&self) -> bool {
        self.a.x == self.b.x
    }

    /// Parameter of a point known to lie on the supporting line, measured
    /// along the dominant coordinate.
    pub fn param_of(&self, p: &Point) -> Rat {
        let (dx, dy) = self.dir();
        if !dx.is_zero() {
            (&p.x - &self.a.x) / dx
        } else {
            (&p.y - &self.a.y) / dy
        }
    }
}

fn cross(ax: &Rat, ay: &Rat, bx: &Rat, by: &Rat) -> Rat {
    ax * by - ay * bx
}

/// Transversal interior intersection of two segments.
///
/// Returns the intersection point when the segments cross in the interior of
/// both, `None` when they are disjoint or parallel without overlap, and
/// `Degenerate` for endpoint touches, collinear overlaps, or intersections at
/// a segment endpoint.
pub fn seg_intersect(s: &Seg, t: &Seg) -> Result<Option<Point>> {
    let (d1x, d1y) = s.dir();
    let (d2x, d2y) = t.dir();
    let wx = &t.a.x - &s.a.x;
    let wy = &t.a.y - &s.a.y;
    let den = cross(&d1x, &d1y, &d2x, &d2y);

    if den.is_zero() {
        if !cross(&d1x, &d1y, &wx, &wy).is_zero() {
            return Ok(None); // parallel, distinct lines
        }
        // Collinear: compare parameter ranges of t's endpoints on s.
        let u0 = s.param_of(&t.a);
        let u1 = s.param_of(&t.b);
        let (lo, hi) = if u0 <= u1 { (u0, u1) } else { (u1, u0) };
        let zero = Rat::zero();
        let one = Rat::one();
        if hi < zero || lo > one {
            return Ok(None);
        }
        if hi == zero || lo == one {
            return Err(Error::Degenerate(format!(
                "collinear segments touching at an endpoint near {}",
                s.a
            )));
        }
        return Err(Error::Degenerate(format!(
            "collinear overlapping segments near {}",
            s.a
        )));
    }

    let u = cross(&wx, &wy, &d2x, &d2y) / &den;
    let v = cross(&wx, &wy, &d1x, &d1y) / &den;
    let zero = Rat::zero();
    let one = Rat::one();
    if u < zero || u > one || v < zero || v > one {
        return Ok(None);
    }
    let p = Point::new(&s.a.x + &u * &d1x, &s.a.y + &u * &d1y);
    if u == zero || u == one || v == zero || v == one {
        return Err(Error::Degenerate(format!(
            "segments intersect at a segment endpoint {p}"
        )));
    }
    Ok(Some(p))
}

/// Intersection of the open downward vertical ray from `origin` with the
/// interior of `s`.
///
/// Returns the hit point and its y-coordinate. Hits exactly at the origin, at
/// a segment endpoint, or on a vertical segment are degeneracies.
pub fn ray_down_hits(origin: &Point, s: &Seg) -> Result<Option<(Point, Rat)>> {
    if s.is_vertical() {
        return Err(Error::Degenerate(format!(
            "vertical segment at x = {} under ray test",
            rat_string(&s.a.x)
        )));
    }
    let (lo, hi) = if s.a.x <= s.b.x {
        (&s.a, &s.b)
    } else {
        (&s.b, &s.a)
    };
    if origin.x < lo.x || origin.x > hi.x {
        return Ok(None);
    }
    if origin.x == lo.x || origin.x == hi.x {
        // The ray line passes through a segment endpoint.
        let end = if origin.x == lo.x { lo } else { hi };
        if end.y < origin.y {
            return Err(Error::Degenerate(format!(
                "ray from {origin} through segment endpoint {end}"
            )));
        }
        if end.y == origin.y {
            return Err(Error::Degenerate(format!(
                "ray origin {origin} coincides with a segment endpoint"
            )));
        }
        return Ok(None);
    }
    let (dx, dy) = s.dir();
    let t = (&origin.x - &s.a.x) / &dx;
    let y = &s.a.y + &t * &dy;
    if y == origin.y {
        return Err(Error::Degenerate(format!(
            "ray origin {origin} lies on the segment"
        )));
    }
    if y < origin.y {
        let p = Point::new(origin.x.clone(), y.clone());
        Ok(Some((p, y)))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(ax: i64, ay: i64, bx: i64, by: i64) -> Seg {
        Seg::new(Point::of(ax, ay), Point::of(bx, by)).unwrap()
    }

    #[test]
    fn crossing_diagonals() {
        let s = seg(0, 0, 2, 2);
        let t = seg(0, 2, 2, 0);
        let p = seg_intersect(&s, &t).unwrap().unwrap();
        assert_eq!(p, Point::of(1, 1));
        // symmetric
        assert_eq!(seg_intersect(&t, &s).unwrap().unwrap(), p);
    }

    #[test]
    fn disjoint_collinear() {
        let s = seg(0, 0, 1, 0);
        let t = seg(2, 0, 3, 0);
        assert!(seg_intersect(&s, &t).unwrap().is_none());
    }

    #[test]
    fn trefoil_crossing_c1() {
        // v1-v2 against v5-v6 of the reference trefoil polyline
        let s = seg(1, 0, 2, 1);
        let t = Seg::new(
            Point::new(frac(4, 5), frac(6, 5)),
            Point::of(2, 0),
        )
        .unwrap();
        let p = seg_intersect(&s, &t).unwrap().unwrap();
        assert_eq!(p, Point::new(frac(3, 2), frac(1, 2)));
    }

    #[test]
    fn endpoint_touch_is_degenerate() {
        let s = seg(0, 0, 2, 0);
        let t = seg(1, 0, 1, 5); // endpoint of t in the interior of s
        assert!(matches!(seg_intersect(&s, &t), Err(Error::Degenerate(_))));
        let u = seg(2, 0, 3, 3); // shared endpoint
        assert!(matches!(seg_intersect(&s, &u), Err(Error::Degenerate(_))));
    }

    #[test]
    fn collinear_overlap_is_degenerate() {
        let s = seg(0, 0, 2, 0);
        let t = seg(1, 0, 3, 0);
        assert!(matches!(seg_intersect(&s, &t), Err(Error::Degenerate(_))));
    }

    #[test]
    fn parallel_disjoint() {
        let s = seg(0, 0, 2, 0);
        let t = seg(0, 1, 2, 1);
        assert!(seg_intersect(&s, &t).unwrap().is_none());
    }

    #[test]
    fn intersection_exact_on_both_lines() {
        // Re-substituting the returned point into both line equations is exact.
        let s = seg(0, 0, 7, 3);
        let t = seg(0, 3, 5, -2);
        let p = seg_intersect(&s, &t).unwrap().unwrap();
        for sg in [&s, &t] {
            let (dx, dy) = sg.dir();
            let lhs = (&p.x - &sg.a.x) * &dy - (&p.y - &sg.a.y) * &dx;
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn ray_hits_trefoil_r_segment() {
        let origin = Point::new(frac(7, 4), frac(3, 4));
        let s = Seg::new(Point::of(2, 0), Point::new(frac(4, 5), frac(6, 5))).unwrap();
        let (p, y) = ray_down_hits(&origin, &s).unwrap().unwrap();
        assert_eq!(p, Point::new(frac(7, 4), frac(1, 4)));
        assert_eq!(y, frac(1, 4));
        assert!(y < origin.y);
    }

    #[test]
    fn ray_misses_out_of_range() {
        let origin = Point::of(0, 0);
        let s = seg(1, 1, 2, 1);
        assert!(ray_down_hits(&origin, &s).unwrap().is_none());
    }

    #[test]
    fn ray_hits_horizontal_below() {
        let origin = Point::of(1, 2);
        let s = seg(0, 0, 2, 0);
        let (p, y) = ray_down_hits(&origin, &s).unwrap().unwrap();
        assert_eq!(p, Point::of(1, 0));
        assert_eq!(y, rat(0));
    }

    #[test]
    fn ray_above_misses() {
        let origin = Point::of(1, 0);
        let s = seg(0, 1, 2, 1);
        assert!(ray_down_hits(&origin, &s).unwrap().is_none());
    }

    #[test]
    fn ray_through_endpoint_is_degenerate() {
        let origin = Point::of(1, 2);
        let s = seg(1, 0, 2, 0);
        assert!(matches!(ray_down_hits(&origin, &s), Err(Error::Degenerate(_))));
    }

    #[test]
    fn ray_on_vertical_segment_is_degenerate() {
        let origin = Point::of(0, 5);
        let s = seg(0, 0, 0, 1);
        assert!(matches!(ray_down_hits(&origin, &s), Err(Error::Degenerate(_))));
    }

    #[test]
    fn parse_rat_forms() {
        assert_eq!(parse_rat("3").unwrap(), rat(3));
        assert_eq!(parse_rat("-4/6").unwrap(), frac(-2, 3));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn mod1_reduces() {
        assert_eq!(mod1(&frac(-1, 3)), frac(2, 3));
        assert_eq!(mod1(&frac(7, 3)), frac(1, 3));
        assert_eq!(mod1(&rat(2)), rat(0));
    }
}
