//! Debug SVG renderer for the decorated diagram: bridges colored, under-pass
//! gaps, crossing and bridge vertices, vertical lines with intersection
//! indices and the assigned elements.
//!
//! The output is deterministic: elements are emitted in fixed id order and
//! all numbers use fixed-precision formatting.

use knotq::diagram::{BridgeId, SegId};
use knotq::invariant::Pipeline;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#e377c2",
];
const SCALE: f64 = 72.0;
const MARGIN: f64 = 40.0;
const GAP: f64 = 0.10;

fn f(x: &knotq::exactgeom::Rat) -> f64 {
    let n: f64 = x.numer().to_string().parse().unwrap_or(0.0);
    let d: f64 = x.denom().to_string().parse().unwrap_or(1.0);
    n / d
}

struct Frame {
    min_x: f64,
    max_x: f64,
    max_y: f64,
    width: f64,
    height: f64,
}

impl Frame {
    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.min_x) * SCALE,
            MARGIN + (self.max_y - y) * SCALE,
        )
    }
}

pub fn render(p: &Pipeline) -> String {
    let mut xs: Vec<f64> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for pt in &p.diagram.points {
        xs.push(f(&pt.x));
        ys.push(f(&pt.y));
    }
    for line in &p.lines {
        xs.push(f(&line.origin.x));
        ys.push(f(&line.origin.y) - 1.0);
        for (_, hit) in &line.hits {
            ys.push(f(&hit.y) - 0.5);
        }
    }
    if xs.is_empty() {
        xs.push(0.0);
        ys.push(0.0);
    }
    let min_x = xs.iter().cloned().fold(f64::INFINITY, f64::min) - 0.9;
    let max_x = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.9;
    let min_y = ys.iter().cloned().fold(f64::INFINITY, f64::min) - 0.6;
    let max_y = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 0.6;
    let frame = Frame {
        min_x,
        max_x,
        max_y,
        width: (max_x - min_x) * SCALE + 2.0 * MARGIN,
        height: (max_y - min_y) * SCALE + 2.0 * MARGIN,
    };

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {:.1} {:.1}\" \
         font-family=\"monospace\" font-size=\"13\">\n",
        frame.width, frame.height
    ));
    out.push_str(&format!(
        "<rect width=\"{:.1}\" height=\"{:.1}\" fill=\"white\"/>\n",
        frame.width, frame.height
    ));

    render_vertical_lines(p, &frame, &mut out);
    render_strands(p, &frame, &mut out);
    render_markers(p, &frame, &mut out);
    render_labels(p, &frame, &mut out);

    out.push_str("</svg>\n");
    out
}

fn render_vertical_lines(p: &Pipeline, frame: &Frame, out: &mut String) {
    for line in &p.lines {
        let x = f(&line.origin.x);
        let top = f(&line.origin.y);
        let lowest_hit = line
            .hits
            .iter()
            .map(|(_, h)| f(&h.y))
            .fold(top, f64::min);
        let bottom = lowest_hit - 0.45;
        let (x0, y0) = frame.map(x, top);
        let (_, y1) = frame.map(x, bottom);
        out.push_str(&format!(
            "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" \
             stroke=\"#555555\" stroke-width=\"1\"/>\n"
        ));
        for (idx, (_, hit)) in line.hits.iter().enumerate() {
            let (hx, hy) = frame.map(f(&hit.x), f(&hit.y));
            out.push_str(&format!(
                "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"#555555\">{}</text>\n",
                hx + 5.0,
                hy + 13.0,
                idx + 1
            ));
        }
        let label_y = y1 + 14.0;
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{label_y:.2}\" fill=\"#555555\">L{}</text>\n",
            x0 - 4.0,
            line.id.0
        ));
    }
}

/// World-coordinate path of one segment, with the infinite tails clipped to
/// the frame and under-pass gaps trimmed off both ends as needed.
fn segment_points(p: &Pipeline, frame: &Frame, seg: SegId) -> Vec<(f64, f64)> {
    let path = &p.diagram.segments[seg.0].path;
    let mut pts: Vec<(f64, f64)> = path.iter().map(|q| (f(&q.x), f(&q.y))).collect();
    let n = pts.len();
    if seg.0 == 0 {
        pts[0].0 = frame.max_x;
    }
    if seg.0 == p.diagram.segments.len() - 1 {
        pts[n - 1].0 = frame.min_x;
    }
    // gap at the start when the passage starting this segment goes under
    let starts_under = seg.0 > 0 && !p.diagram.passages[seg.0 - 1].over;
    let ends_under = seg.0 < p.diagram.passages.len() && !p.diagram.passages[seg.0].over;
    if starts_under {
        trim(&mut pts, GAP, false);
    }
    if ends_under {
        trim(&mut pts, GAP, true);
    }
    pts
}

fn trim(pts: &mut Vec<(f64, f64)>, amount: f64, from_end: bool) {
    if from_end {
        pts.reverse();
    }
    let mut rest = amount;
    while pts.len() >= 2 {
        let (x0, y0) = pts[0];
        let (x1, y1) = pts[1];
        let len = ((x1 - x0).powi(2) + (y1 - y0).powi(2)).sqrt();
        if len > rest {
            let t = rest / len;
            pts[0] = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            break;
        }
        rest -= len;
        pts.remove(0);
    }
    if from_end {
        pts.reverse();
    }
}

fn bridge_color(b: BridgeId) -> &'static str {
    PALETTE[b.0 % PALETTE.len()]
}

fn render_strands(p: &Pipeline, frame: &Frame, out: &mut String) {
    let owner = knotq::diagram::bridge_of_segments(&p.diagram, &p.bridges);
    for seg in &p.diagram.segments {
        let pts = segment_points(p, frame, seg.id);
        if pts.len() < 2 {
            continue;
        }
        let coords: Vec<String> = pts
            .iter()
            .map(|(x, y)| {
                let (sx, sy) = frame.map(*x, *y);
                format!("{sx:.2},{sy:.2}")
            })
            .collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"3\"/>\n",
            coords.join(" "),
            bridge_color(owner[seg.id.0])
        ));
    }
}

fn render_markers(p: &Pipeline, frame: &Frame, out: &mut String) {
    for c in &p.diagram.crossings {
        let (x, y) = frame.map(f(&c.position.x), f(&c.position.y));
        out.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"#222222\"/>\n"
        ));
    }
    for (bid, v) in &p.vertices {
        let (x, y) = frame.map(f(&v.x), f(&v.y));
        out.push_str(&format!(
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"6\" fill=\"{}\"/>\n",
            bridge_color(*bid)
        ));
    }
}

fn render_labels(p: &Pipeline, frame: &Frame, out: &mut String) {
    for seg in &p.diagram.segments {
        let elem = p.assignment.of(seg.id);
        let label = match elem.m {
            0 => format!("b{}", elem.bridge.0),
            1 => format!("b{}+\u{03b5}", elem.bridge.0),
            -1 => format!("b{}\u{2212}\u{03b5}", elem.bridge.0),
            m if m > 0 => format!("b{}+{}\u{03b5}", elem.bridge.0, m),
            m => format!("b{}\u{2212}{}\u{03b5}", elem.bridge.0, -m),
        };
        let pts = segment_points(p, frame, seg.id);
        if pts.is_empty() {
            continue;
        }
        let mid = pts[pts.len() / 2];
        let (x, y) = frame.map(mid.0, mid.1);
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"{}\">{}</text>\n",
            x + 4.0,
            y - 6.0,
            bridge_color(elem.bridge),
            label
        ));
    }
}
