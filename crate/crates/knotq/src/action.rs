//! Admissible assignments and the action functional.
//!
//! Each segment of a bridge `x` carries an element `x + m*eps` with integer
//! offset `m`, where `eps` is the formal half (2*eps = 1, substituted as the
//! exact rational 1/2 when forms are built). The assignment rules:
//!
//! 1. a segment of bridge `x` carries `x + m*eps`, m integer;
//! 2. crossing a crossing vertex, the over-segment on the left-hand side of
//!    the under-strand's direction is the eps-larger one — equivalently the
//!    offset changes by the crossing's chirality along the over-strand;
//! 3. at an under-pass the offsets of the meeting last/first segments have
//!    odd sum;
//! 4. the two infinite segments carry offset 0.

use crate::diagram::{
    Bridge, BridgeEnd, BridgeId, Crossing, LongDiagram, SegId, VerticalLine,
};
use crate::error::{Error, Result};
use crate::exactgeom::{frac, Rat};
use crate::forms::{LinPoly, LinearForm, QuadraticForm};
use num_traits::Zero;

/// `bridge + m*eps`, attached to one segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Element {
    pub bridge: BridgeId,
    pub m: i64,
}

impl Element {
    fn poly(&self, eps: &Rat) -> LinPoly {
        LinPoly::variable(self.bridge).add(&LinPoly::constant(eps * crate::exactgeom::rat(self.m)))
    }
}

/// Map from segments to elements, indexed by segment id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub elems: Vec<Element>,
}

impl Assignment {
    pub fn of(&self, s: SegId) -> Element {
        self.elems[s.0]
    }
}

/// The exact rational substituted for eps. `half()` is the faithful choice;
/// `zero()` exists for experimentation only.
pub fn eps_half() -> Rat {
    frac(1, 2)
}

pub fn eps_zero() -> Rat {
    Rat::zero()
}

/// Entry offsets for rule 3 at each bridge junction: the default picks the
/// representative in {0, 1}; the shifted variant adds an even integer, which
/// must not change anything downstream.
pub enum EntryOffsets<'a> {
    Default,
    Shifted(&'a [i64]),
}

/// Constructs an admissible assignment deterministically.
///
/// The left infinite bridge is forced backwards from its infinite segment;
/// the rest are assigned forwards in traversal order. The parity at the final
/// junction holds automatically for every long knot diagram.
pub fn admissible_assignment(
    d: &LongDiagram,
    bridges: &[Bridge],
    entries: EntryOffsets<'_>,
) -> Result<Assignment> {
    let mut m = vec![0i64; d.segments.len()];
    let chirality_of = |c: crate::diagram::CrossingId| d.crossings[c.0].chirality as i64;

    let last = bridges.last().expect("at least one bridge");
    debug_assert_eq!(last.end, BridgeEnd::Infinity);
    // Backwards over the left infinite bridge: its last segment has m = 0.
    {
        let segs = &last.segments;
        let mut cur = 0i64;
        m[segs.last().unwrap().0] = 0;
        for idx in (0..segs.len() - 1).rev() {
            cur -= chirality_of(last.over_passes[idx]);
            m[segs[idx].0] = cur;
        }
    }

    // Forwards over the remaining bridges.
    for (bi, bridge) in bridges.iter().enumerate() {
        if bi == bridges.len() - 1 {
            break;
        }
        let entry = if bi == 0 {
            0 // rule 4: the right infinite segment
        } else {
            let prev_exit = m[bridges[bi - 1].segments.last().unwrap().0];
            let base = if prev_exit % 2 == 0 { 1 } else { 0 };
            match entries {
                EntryOffsets::Default => base,
                EntryOffsets::Shifted(shifts) => base + 2 * shifts[bi],
            }
        };
        let mut cur = entry;
        m[bridge.segments[0].0] = cur;
        for (idx, seg) in bridge.segments.iter().enumerate().skip(1) {
            cur += chirality_of(bridge.over_passes[idx - 1]);
            m[seg.0] = cur;
        }
    }

    // The forced final junction must satisfy rule 3.
    if bridges.len() > 1 {
        let before_last = &bridges[bridges.len() - 2];
        let exit = m[before_last.segments.last().unwrap().0];
        let entry = m[last.segments[0].0];
        if (exit + entry) % 2 == 0 {
            return Err(Error::Internal(format!(
                "final junction parity failed: {exit} + {entry} is even"
            )));
        }
    }

    let of_segment = crate::diagram::bridge_of_segments(d, bridges);
    let elems = m
        .into_iter()
        .enumerate()
        .map(|(s, m)| Element {
            bridge: of_segment[s],
            m,
        })
        .collect();
    Ok(Assignment { elems })
}

/// A violated assignment rule, with its location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongBridge { segment: SegId },
    Rule2 { crossing: crate::diagram::CrossingId },
    Rule3 { crossing: crate::diagram::CrossingId },
    Rule4 { segment: SegId },
}

/// Checks rules (1)-(4); the returned list is empty exactly for admissible
/// assignments.
pub fn validate_assignment(
    d: &LongDiagram,
    bridges: &[Bridge],
    a: &Assignment,
) -> Vec<Violation> {
    let mut out = Vec::new();
    let of_segment = crate::diagram::bridge_of_segments(d, bridges);
    for (s, elem) in a.elems.iter().enumerate() {
        if elem.bridge != of_segment[s] {
            out.push(Violation::WrongBridge { segment: SegId(s) });
        }
    }
    for c in &d.crossings {
        let step = a.of(c.over_out).m - a.of(c.over_in).m;
        if step != c.chirality as i64 {
            out.push(Violation::Rule2 { crossing: c.id });
        }
        let junction = a.of(c.under_in).m + a.of(c.under_out).m;
        if junction.rem_euclid(2) != 1 {
            out.push(Violation::Rule3 { crossing: c.id });
        }
    }
    for s in [SegId(0), SegId(d.segments.len() - 1)] {
        if a.of(s).m != 0 {
            out.push(Violation::Rule4 { segment: s });
        }
    }
    out
}

/// The auxiliary element of one vertical line:
/// (under_in + under_out - over_in - over_out) * (-1)^k, where k counts all
/// intersections of the line (bridge vertex included when counted). Rules 2
/// and 3 make the eps-part an even multiple of eps, so the constant is an
/// integer.
pub fn auxiliary_forms(
    d: &LongDiagram,
    a: &Assignment,
    lines: &[VerticalLine],
    eps: &Rat,
) -> Result<Vec<LinearForm>> {
    lines
        .iter()
        .map(|line| {
            let c = &d.crossings[line.associated_crossing.0];
            let poly = aux_poly(c, a, line.k_total(), eps);
            LinearForm::from_poly(&poly)
        })
        .collect()
}

fn aux_poly(c: &Crossing, a: &Assignment, k: usize, eps: &Rat) -> LinPoly {
    let sum = a
        .of(c.under_in)
        .poly(eps)
        .add(&a.of(c.under_out).poly(eps))
        .sub(&a.of(c.over_in).poly(eps))
        .sub(&a.of(c.over_out).poly(eps));
    sum.scale(&sign(k))
}

fn sign(k: usize) -> Rat {
    if k % 2 == 0 {
        crate::exactgeom::rat(1)
    } else {
        crate::exactgeom::rat(-1)
    }
}

/// Weight of one crossing: (over_in - under_out) times over_out for negative
/// chirality, times over_in for positive chirality.
pub fn crossing_weight(c: &Crossing, a: &Assignment, eps: &Rat) -> QuadraticForm {
    let o_in = a.of(c.over_in).poly(eps);
    let o_out = a.of(c.over_out).poly(eps);
    let u_out = a.of(c.under_out).poly(eps);
    let first = o_in.sub(&u_out);
    let second = if c.chirality < 0 { &o_out } else { &o_in };
    QuadraticForm::from_linear_product(&first, second)
}

/// Weight of the k-th intersection (1-based, from below) on a line with
/// auxiliary form `form`: (-1)^k (alpha - eps) * form.
pub fn intersection_weight(
    k: usize,
    hit_elem: Element,
    form: &LinearForm,
    eps: &Rat,
) -> QuadraticForm {
    let alpha = hit_elem.poly(eps).sub(&LinPoly::constant(eps.clone()));
    QuadraticForm::from_linear_product(&alpha, &form.as_poly()).scale(&sign(k))
}

/// The action functional: the sum of all crossing weights and all
/// intersection weights, expanded over the bridge variables.
pub fn action_functional(
    d: &LongDiagram,
    a: &Assignment,
    lines: &[VerticalLine],
    forms: &[LinearForm],
    eps: &Rat,
) -> QuadraticForm {
    let mut phi = QuadraticForm::zero();
    for c in &d.crossings {
        phi = phi.add(&crossing_weight(c, a, eps));
    }
    for (line, form) in lines.iter().zip(forms) {
        for (idx, (seg, _)) in line.hits.iter().enumerate() {
            phi = phi.add(&intersection_weight(idx + 1, a.of(*seg), form, eps));
        }
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{
        decompose_bridges, parse_diagram, place_bridge_vertices, shoot_vertical_lines, CrossingId,
        DiagramSpec, OverChoice, RatLit,
    };
    use crate::exactgeom::rat;
    use num_bigint::BigInt;

    fn trefoil() -> (LongDiagram, Vec<Bridge>, Vec<VerticalLine>) {
        let spec = crate::diagram::tests::trefoil_spec();
        let d = parse_diagram(&spec).unwrap();
        let bridges = decompose_bridges(&d);
        let vertices = place_bridge_vertices(&d, &bridges, 0).unwrap();
        let lines = shoot_vertical_lines(&d, &bridges, &vertices).unwrap();
        (d, bridges, lines)
    }

    #[test]
    fn trefoil_assignment_matches_reference_labels() {
        let (d, bridges, _) = trefoil();
        let a = admissible_assignment(&d, &bridges, EntryOffsets::Default).unwrap();
        // Segments in traversal order carry
        // b0, b0-eps, b1, b1-eps, b2, b2-eps, b3.
        let want = [
            (0, 0),
            (0, -1),
            (1, 0),
            (1, -1),
            (2, 0),
            (2, -1),
            (3, 0),
        ];
        for (s, (bridge, m)) in want.iter().enumerate() {
            assert_eq!(a.of(SegId(s)), Element {
                bridge: BridgeId(*bridge),
                m: *m
            });
        }
        assert!(validate_assignment(&d, &bridges, &a).is_empty());
    }

    #[test]
    fn corrupted_assignment_reports_violations() {
        let (d, bridges, _) = trefoil();
        let mut a = admissible_assignment(&d, &bridges, EntryOffsets::Default).unwrap();
        // Parity flip at the junction entering bridge 1 (segment 2).
        a.elems[2].m += 1;
        let v = validate_assignment(&d, &bridges, &a);
        // Bridge 1 starts at the crossing where bridge 0 ends: crossing id 1.
        assert!(v.contains(&Violation::Rule3 {
            crossing: CrossingId(1)
        }));
        // The offset shift also breaks rule 2 at bridge 1's over-pass.
        assert!(v.contains(&Violation::Rule2 {
            crossing: CrossingId(0)
        }));

        let mut b = admissible_assignment(&d, &bridges, EntryOffsets::Default).unwrap();
        b.elems[0].m = 1;
        let v = validate_assignment(&d, &bridges, &b);
        assert!(v.contains(&Violation::Rule4 { segment: SegId(0) }));
    }

    #[test]
    fn trefoil_aux_forms() {
        let (d, bridges, lines) = trefoil();
        let a = admissible_assignment(&d, &bridges, EntryOffsets::Default).unwrap();
        let forms = auxiliary_forms(&d, &a, &lines, &eps_half()).unwrap();
        // Line of bridge 0 (ends at middle crossing): 2*b2 - b0 - b1.
        // Line of bridge 1 (ends at rightmost):       2*b0 - b1 - b2.
        // Line of bridge 2 (ends at leftmost):        2*b1 - b2 - b3.
        let get = |i: usize| &forms[i];
        let big = |n: i64| BigInt::from(n);
        assert_eq!(get(0).coeffs[&BridgeId(0)], big(-1));
        assert_eq!(get(0).coeffs[&BridgeId(1)], big(-1));
        assert_eq!(get(0).coeffs[&BridgeId(2)], big(2));
        assert_eq!(get(1).coeffs[&BridgeId(0)], big(2));
        assert_eq!(get(1).coeffs[&BridgeId(1)], big(-1));
        assert_eq!(get(1).coeffs[&BridgeId(2)], big(-1));
        assert_eq!(get(2).coeffs[&BridgeId(1)], big(2));
        assert_eq!(get(2).coeffs[&BridgeId(2)], big(-1));
        assert_eq!(get(2).coeffs[&BridgeId(3)], big(-1));
        for f in &forms {
            assert!(f.constant.is_zero());
            let sum: BigInt = f.coeffs.values().sum();
            assert!(sum.is_zero());
        }
    }

    #[test]
    fn trefoil_crossing_weights() {
        let (d, bridges, _) = trefoil();
        let a = admissible_assignment(&d, &bridges, EntryOffsets::Default).unwrap();
        // Crossing id 0 (leftmost, x = 3/2): over bridge 1, under junction
        // bridge 2 -> bridge 3: (b1 - b3)(b1 - 1/2).
        let q = crossing_weight(&d.crossings[0], &a, &eps_half());
        assert_eq!(q.dump(), "b1^2 - b1*b3 - 1/2*b1 + 1/2*b3");
        // Crossing id 1 (middle): over bridge 2, under bridge 0 -> 1.
        let q = crossing_weight(&d.crossings[1], &a, &eps_half());
        assert_eq!(q.dump(), "-b1*b2 + b2^2 + 1/2*b1 - 1/2*b2");
        // Crossing id 2 (rightmost): over bridge 0, under bridge 1 -> 2.
        let q = crossing_weight(&d.crossings[2], &a, &eps_half());
        assert_eq!(q.dump(), "b0^2 - b0*b2 - 1/2*b0 + 1/2*b2");
    }

    #[test]
    fn equal_elements_give_zero_weight() {
        let (d, bridges, _) = trefoil();
        let mut a = admissible_assignment(&d, &bridges, EntryOffsets::Default).unwrap();
        let c = &d.crossings[0];
        a.elems[c.under_out.0] = a.of(c.over_in);
        let q = crossing_weight(c, &a, &eps_half());
        assert!(q.is_zero());
    }

    #[test]
    fn intersection_weight_signs() {
        let (d, bridges, lines) = trefoil();
        let a = admissible_assignment(&d, &bridges, EntryOffsets::Default).unwrap();
        let forms = auxiliary_forms(&d, &a, &lines, &eps_half()).unwrap();
        // Line of bridge 2 hits the segment carrying b1 as its only
        // intersection: -(b1 - 1/2) * (2 b1 - b2 - b3).
        let line = &lines[2];
        let w = intersection_weight(1, a.of(line.hits[0].0), &forms[2], &eps_half());
        assert_eq!(
            w.dump(),
            "-2*b1^2 + b1*b2 + b1*b3 + b1 - 1/2*b2 - 1/2*b3"
        );
        // Index 2 flips the sign.
        let w2 = intersection_weight(2, a.of(line.hits[0].0), &forms[2], &eps_half());
        assert_eq!(w2, w.scale(&rat(-1)));
    }

    #[test]
    fn trefoil_action_functional() {
        let (d, bridges, lines) = trefoil();
        let a = admissible_assignment(&d, &bridges, EntryOffsets::Default).unwrap();
        let forms = auxiliary_forms(&d, &a, &lines, &eps_half()).unwrap();
        let phi = action_functional(&d, &a, &lines, &forms, &eps_half());
        // b0 b1 + b0 b2 + b1 b2 - b0^2 - b1^2 - b2^2, nothing else.
        assert_eq!(
            phi.dump(),
            "-b0^2 + b0*b1 + b0*b2 - b1^2 + b1*b2 - b2^2"
        );
    }

    #[test]
    fn unknot_action_functional_is_zero() {
        let spec = DiagramSpec {
            points: vec![
                (RatLit::Int(1), RatLit::Int(0)),
                (RatLit::Int(0), RatLit::Int(0)),
            ],
            over: vec![],
        };
        let d = parse_diagram(&spec).unwrap();
        let bridges = decompose_bridges(&d);
        let vertices = place_bridge_vertices(&d, &bridges, 0).unwrap();
        let lines = shoot_vertical_lines(&d, &bridges, &vertices).unwrap();
        let a = admissible_assignment(&d, &bridges, EntryOffsets::Default).unwrap();
        assert!(validate_assignment(&d, &bridges, &a).is_empty());
        let forms = auxiliary_forms(&d, &a, &lines, &eps_half()).unwrap();
        let phi = action_functional(&d, &a, &lines, &forms, &eps_half());
        assert!(phi.is_zero());
    }
}
