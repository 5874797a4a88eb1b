//! Graph of an exchange as an SVG document.
//!
//! The plot is the square `[0, r) × [0, r)`: one unit-slope segment per
//! interval from `(a_{i-1}, a_{i-1} + delta_i)` to `(a_i, a_i + delta_i)`, a
//! filled marker at the closed left end and a hollow one at the open right
//! end, dashed lines at the discontinuities (vertical) and at the image
//! breakpoints (horizontal). Floats appear only as coordinates, printed with
//! 9 significant digits, so equal input gives byte-identical output.

use ietforge::Iet;
use std::fmt::Write;

#[derive(Clone, Debug)]
pub struct SvgOptions {
    /// Side of the plotted square in user units.
    pub size: f64,
    pub margin: f64,
    /// Exact-string labels for breakpoints on both axes.
    pub labels: bool,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            size: 480.0,
            margin: 56.0,
            labels: true,
        }
    }
}

/// `x` with 9 significant digits, trailing zeros dropped.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(t: &Iet, options: &SvgOptions) -> String {
    let alpha = t.oracle().approx_f64();
    let r = t.total_length().to_f64(alpha);
    let (size, margin) = (options.size, options.margin);
    let px = |x: f64| sig9(margin + x / r * size);
    let py = |y: f64| sig9(margin + size - y / r * size);
    let full = sig9(size + 2.0 * margin);
    let d = t.describe();

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{full}" height="{full}" viewBox="0 0 {full} {full}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(&format!("{}-interval exchange of [0, {})", d.m, d.r)));
    let _ = writeln!(
        out,
        "<desc>{}</desc>",
        escape(&format!(
            "permutation {}; lengths {}; alpha = {}",
            t.permutation(),
            d.lengths.join(", "),
            d.alpha
        ))
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{full}" height="{full}" fill="white"/>"#);

    let _ = writeln!(out, r##"<g id="grid" stroke="#999999" stroke-width="0.75" stroke-dasharray="4 3">"##);
    for a in &t.breakpoints()[1..t.m()] {
        let x = px(a.to_f64(alpha));
        let _ = writeln!(out, r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#, py(0.0), py(r));
    }
    for b in &t.image_breakpoints()[1..t.m()] {
        let y = py(b.to_f64(alpha));
        let _ = writeln!(out, r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}"/>"#, px(0.0), px(r));
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(
        out,
        r#"<rect id="axes" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black" stroke-width="1"/>"#,
        px(0.0),
        py(r),
        sig9(size),
        sig9(size)
    );

    let _ = writeln!(out, r#"<g id="segments" stroke="black" stroke-width="2" stroke-linecap="butt">"#);
    let mut ends = Vec::with_capacity(t.m());
    for i in 1..=t.m() {
        let iv = t.interval(i);
        let delta = t.translation(i).to_f64(alpha);
        let (x0, x1) = (iv.lo.to_f64(alpha), iv.hi.to_f64(alpha));
        let start = (px(x0), py(x0 + delta));
        let end = (px(x1), py(x1 + delta));
        let _ = writeln!(
            out,
            r#"<line data-interval="{i}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            start.0, start.1, end.0, end.1
        );
        ends.push((start, end));
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="endpoints" stroke="black" stroke-width="1.25">"#);
    for (start, end) in &ends {
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="3" fill="black"/>"#, start.0, start.1);
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="3" fill="white"/>"#, end.0, end.1);
    }
    let _ = writeln!(out, "</g>");

    if options.labels {
        let _ = writeln!(out, r#"<g id="labels" font-family="serif" font-size="10" fill="black">"#);
        for (a, text) in t.breakpoints().iter().zip(&d.breakpoints) {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="end" transform="rotate(-45 {} {})">{}</text>"#,
                px(a.to_f64(alpha)),
                sig9(margin + size + 14.0),
                px(a.to_f64(alpha)),
                sig9(margin + size + 14.0),
                escape(text)
            );
        }
        for (b, text) in t.image_breakpoints().iter().zip(&d.image_breakpoints) {
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
                sig9(margin - 6.0),
                py(b.to_f64(alpha)),
                escape(text)
            );
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "</svg>");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ietforge::families::thm14_family;
    use ietforge::{build_iet, AlphaOracle, Permutation};
    use std::sync::Arc;

    fn oracle(k: i64) -> Arc<AlphaOracle> {
        Arc::new(ietforge::numeric::parse_oracle(&format!("sqrt(2)/{k}"), false).unwrap())
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(1.0), "1");
        assert_eq!(sig9(56.0), "56");
        assert_eq!(sig9(std::f64::consts::PI), "3.14159265");
        assert_eq!(sig9(123.456789012), "123.456789");
        assert_eq!(sig9(-0.000123456789123), "-0.000123456789");
        assert_eq!(sig9(-1e-12), "-0.000000000001");
    }

    #[test]
    fn one_segment_per_interval() {
        let t = thm14_family(4, oracle(6)).unwrap();
        let svg = render_svg(&t, &SvgOptions::default());
        assert_eq!(svg.matches("data-interval=").count(), 4);
        assert_eq!(svg.matches(r#"fill="white"/>"#).count(), 1 + 4);
        // segment 1 starts at height delta_1 = 1/3 + alpha
        let a = 2f64.sqrt() / 6.0;
        let y = sig9(56.0 + 480.0 - (1.0 / 3.0 + a) * 480.0);
        assert!(svg.contains(&format!(r#"<line data-interval="1" x1="56" y1="{y}""#)), "{svg}");
        assert_eq!(svg, render_svg(&t, &SvgOptions::default()));
    }

    #[test]
    fn identity_is_one_diagonal() {
        let t = build_iet(Permutation::identity(1), vec!["1".parse().unwrap()], oracle(2)).unwrap();
        let svg = render_svg(&t, &SvgOptions::default());
        assert!(svg.contains(r#"<line data-interval="1" x1="56" y1="536" x2="536" y2="56"/>"#), "{svg}");
        assert!(!svg.contains("<g id=\"grid\" stroke=\"#999999\" stroke-width=\"0.75\" stroke-dasharray=\"4 3\">\n<line"));
    }
}
