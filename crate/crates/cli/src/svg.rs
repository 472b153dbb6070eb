//! Minimal SVG number-line plots.

use std::fmt::Write as _;

use splitline::collision::WitnessReport;

const WIDTH: f64 = 900.0;
const MARGIN: f64 = 40.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn x(&self, v: f64) -> f64 {
        MARGIN + (v - self.lo) / (self.hi - self.lo) * (WIDTH - 2.0 * MARGIN)
    }
}

fn header(height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height}\" font-family=\"monospace\" font-size=\"11\">\n\
<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

/// One row per enclosure on the unit interval.
pub fn enclosures(marks: &[(String, f64, f64)]) -> String {
    let axis = Axis { lo: 0.0, hi: 1.0 };
    let height = 60.0 + 22.0 * marks.len() as f64;
    let mut s = header(height);
    let _ = writeln!(s, "<line x1=\"{}\" y1=\"30\" x2=\"{}\" y2=\"30\" stroke=\"black\"/>", axis.x(0.0), axis.x(1.0));
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let _ = writeln!(s, "<text x=\"{:.1}\" y=\"20\" text-anchor=\"middle\">{t}</text>", axis.x(t));
    }
    for (i, (label, lo, hi)) in marks.iter().enumerate() {
        let y = 50.0 + 22.0 * i as f64;
        let (x0, x1) = (axis.x(*lo), axis.x(*hi));
        let _ = writeln!(
            s,
            "<rect x=\"{x0:.2}\" y=\"{:.1}\" width=\"{:.2}\" height=\"8\" fill=\"steelblue\"/>",
            y - 4.0,
            (x1 - x0).max(1.0)
        );
        let _ = writeln!(s, "<text x=\"{:.2}\" y=\"{:.1}\">{}</text>", x1 + 4.0, y + 4.0, escape(label));
    }
    s.push_str("</svg>\n");
    s
}

/// Orbit ladder of `x` under `g`, the intervals `J`, `f(J)`, `g^N(J)` and `c`.
pub fn ladder(r: &WitnessReport) -> String {
    let pad = (r.i.hi - r.i.lo) * 0.05;
    let axis = Axis { lo: r.i.lo - pad, hi: r.i.hi + pad };
    let mut s = header(230.0);
    let _ = writeln!(s, "<line x1=\"{}\" y1=\"40\" x2=\"{}\" y2=\"40\" stroke=\"black\"/>", MARGIN, WIDTH - MARGIN);
    for (v, name) in [(r.i.lo, "y"), (r.i.hi, "f^2(x)"), (r.x, "x"), (r.f_x, "f(x)")] {
        let _ = writeln!(
            s,
            "<line x1=\"{0:.2}\" y1=\"32\" x2=\"{0:.2}\" y2=\"48\" stroke=\"black\"/><text x=\"{0:.2}\" y=\"26\" text-anchor=\"middle\">{1}</text>",
            axis.x(v),
            escape(name)
        );
    }
    for e in &r.orbit {
        let colour = if e.side == "even" { "darkgreen" } else { "darkorange" };
        let _ = writeln!(s, "<circle cx=\"{:.2}\" cy=\"70\" r=\"3\" fill=\"{colour}\"/>", axis.x(e.value));
    }
    let _ = writeln!(s, "<text x=\"{MARGIN}\" y=\"88\">orbit of x under g (green even, orange odd)</text>");
    let rows = [("J", r.j, "steelblue"), ("f(J)", r.f_j, "firebrick"), ("g^N(J)", r.g_big_n_j, "purple")];
    for (i, (name, iv, colour)) in rows.iter().enumerate() {
        let y = 110.0 + 28.0 * i as f64;
        let (x0, x1) = (axis.x(iv.lo), axis.x(iv.hi));
        let _ = writeln!(
            s,
            "<rect x=\"{x0:.2}\" y=\"{:.1}\" width=\"{:.2}\" height=\"8\" fill=\"{colour}\"/><text x=\"{:.2}\" y=\"{:.1}\">{}</text>",
            y - 4.0,
            (x1 - x0).max(1.0),
            x1 + 4.0,
            y + 4.0,
            escape(name)
        );
    }
    let cx = axis.x(r.c);
    let _ = writeln!(
        s,
        "<line x1=\"{cx:.2}\" y1=\"100\" x2=\"{cx:.2}\" y2=\"180\" stroke=\"black\" stroke-dasharray=\"3,3\"/><text x=\"{cx:.2}\" y=\"196\" text-anchor=\"middle\">c, N = {}</text>",
        r.big_n
    );
    s.push_str("</svg>\n");
    s
}
