//! Deterministic scene output: a canonical JSON encoding and an SVG
//! rendering of a Ford domain footprint. Every number passes through the
//! canonical formatter so identical inputs produce identical bytes.

use crate::fmtnum::fmt_f64;
use fordom_core::ford::{FordFootprint, Visibility};
use fordom_core::ComplexValue;

#[derive(Debug, Clone)]
pub struct SceneCircle {
    pub center: ComplexValue,
    pub radius: f64,
    pub owner: String,
    pub visibility: Visibility,
    /// Omitted from output when the margin is not finite.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SceneDocument {
    pub circles: Vec<SceneCircle>,
    pub base: ComplexValue,
    pub e1: ComplexValue,
    pub e2: ComplexValue,
}

pub fn visibility_name(v: Visibility) -> &'static str {
    match v {
        Visibility::Visible => "visible",
        Visibility::Invisible => "invisible",
        Visibility::Uncertain => "uncertain",
    }
}

pub fn scene_from_footprint(fp: &FordFootprint) -> SceneDocument {
    let circles = fp
        .spheres
        .iter()
        .map(|s| SceneCircle {
            center: s.sphere.center,
            radius: s.sphere.radius,
            owner: s
                .sphere
                .owner
                .as_ref()
                .map_or_else(|| "?".into(), |w| w.to_string()),
            visibility: s.visibility,
            margin: s.margin.is_finite().then_some(s.margin),
        })
        .collect();
    SceneDocument {
        circles,
        base: fp.parallelogram.base,
        e1: fp.parallelogram.e1,
        e2: fp.parallelogram.e2,
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_pair(z: ComplexValue) -> String {
    format!("[{},{}]", fmt_f64(z.re), fmt_f64(z.im))
}

/// Canonical JSON: keys sorted, numbers in canonical form, no whitespace.
pub fn canonical_json(scene: &SceneDocument) -> String {
    let mut out = String::from("{\"circles\":[");
    for (i, c) in scene.circles.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str("{\"center\":");
        out.push_str(&json_pair(c.center));
        if let Some(margin) = c.margin {
            out.push_str(",\"margin\":");
            out.push_str(&fmt_f64(margin));
        }
        out.push_str(",\"owner\":");
        out.push_str(&json_string(&c.owner));
        out.push_str(",\"radius\":");
        out.push_str(&fmt_f64(c.radius));
        out.push_str(",\"visibility\":");
        out.push_str(&json_string(visibility_name(c.visibility)));
        out.push('}');
    }
    out.push_str("],\"parallelogram\":{\"base\":");
    out.push_str(&json_pair(scene.base));
    out.push_str(",\"e1\":");
    out.push_str(&json_pair(scene.e1));
    out.push_str(",\"e2\":");
    out.push_str(&json_pair(scene.e2));
    out.push_str("}}\n");
    out
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

/// Renders the scene as a standalone SVG. The vertical axis is flipped so
/// the complex plane appears in its usual orientation.
pub fn render_svg(scene: &SceneDocument) -> String {
    let corners = [
        scene.base,
        scene.base + scene.e1,
        scene.base + scene.e2,
        scene.base + scene.e1 + scene.e2,
    ];
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    let mut cover = |x: f64, y: f64| {
        min_x = min_x.min(x);
        max_x = max_x.max(x);
        min_y = min_y.min(y);
        max_y = max_y.max(y);
    };
    for p in corners {
        cover(p.re, -p.im);
    }
    for c in &scene.circles {
        cover(c.center.re - c.radius, -c.center.im - c.radius);
        cover(c.center.re + c.radius, -c.center.im + c.radius);
    }
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let pad = 0.05 * span;
    min_x -= pad;
    max_x += pad;
    min_y -= pad;
    max_y += pad;
    let width = max_x - min_x;
    let height = max_y - min_y;
    let sw = width.max(height) * 0.003;
    let px_height = 800.0 * height / width;

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"{}\" \
         viewBox=\"{} {} {} {}\">\n",
        fmt_f64(px_height),
        fmt_f64(min_x),
        fmt_f64(min_y),
        fmt_f64(width),
        fmt_f64(height)
    );
    let path: Vec<String> = corners
        .iter()
        .map(|p| format!("{} {}", fmt_f64(p.re), fmt_f64(-p.im)))
        .collect();
    svg.push_str(&format!(
        "<path d=\"M {} L {} L {} L {} Z\" fill=\"none\" stroke=\"#888\" \
         stroke-width=\"{}\"/>\n",
        path[0],
        path[1],
        path[3],
        path[2],
        fmt_f64(sw)
    ));
    for c in &scene.circles {
        let dash = match c.visibility {
            Visibility::Visible => String::new(),
            Visibility::Invisible => format!(
                " stroke-dasharray=\"{} {}\"",
                fmt_f64(4.0 * sw),
                fmt_f64(3.0 * sw)
            ),
            Visibility::Uncertain => format!(
                " stroke-dasharray=\"{} {}\"",
                fmt_f64(1.5 * sw),
                fmt_f64(1.5 * sw)
            ),
        };
        svg.push_str(&format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#000\" \
             stroke-width=\"{}\"{}/>\n",
            fmt_f64(c.center.re),
            fmt_f64(-c.center.im),
            fmt_f64(c.radius),
            fmt_f64(sw),
            dash
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\">{}</text>\n",
            fmt_f64(c.center.re),
            fmt_f64(-c.center.im),
            fmt_f64(c.radius * 0.6),
            xml_escape(&c.owner)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use fordom_core::ford::ford_footprint;
    use fordom_core::group::example_simple_ford;

    #[test]
    fn canonical_json_is_stable_and_sorted() {
        let fp = ford_footprint(&example_simple_ford(), 1, 1, 8).unwrap();
        let scene = scene_from_footprint(&fp);
        let a = canonical_json(&scene);
        let b = canonical_json(&scene_from_footprint(&fp));
        assert_eq!(a, b);
        assert!(a.starts_with("{\"circles\":[{\"center\":"));
        assert!(a.contains("\"parallelogram\":{\"base\":"));
        assert!(a.ends_with("}}\n"));
    }

    #[test]
    fn svg_rendering_is_deterministic_and_well_formed() {
        let fp = ford_footprint(&example_simple_ford(), 1, 1, 8).unwrap();
        let scene = scene_from_footprint(&fp);
        let a = render_svg(&scene);
        assert_eq!(a, render_svg(&scene));
        assert!(a.starts_with("<svg xmlns="));
        assert!(a.ends_with("</svg>\n"));
        assert_eq!(a.matches("<circle").count(), scene.circles.len());
    }

    #[test]
    fn empty_scene_renders_the_parallelogram_alone() {
        let scene = SceneDocument {
            circles: Vec::new(),
            base: ComplexValue::new(0.0, 0.0),
            e1: ComplexValue::new(2.0, 0.0),
            e2: ComplexValue::new(0.0, 2.0),
        };
        let svg = render_svg(&scene);
        assert!(svg.contains("<path"));
        assert!(!svg.contains("<circle"));
        assert_eq!(
            canonical_json(&scene),
            "{\"circles\":[],\"parallelogram\":{\"base\":[0,0],\"e1\":[2,0],\"e2\":[0,2]}}\n"
        );
    }

    #[test]
    fn strings_are_escaped() {
        assert_eq!(json_string("a\"b\\c"), "\"a\\\"b\\\\c\"");
        assert_eq!(xml_escape("a<b&c"), "a&lt;b&amp;c");
    }
}
