//! Top-view SVG of an interposer layout. One user unit is one micrometer and
//! y points up in layout coordinates, so it is negated on output.
//!
//! Element classes: `channel` (rect), `ribbon` (line), `hole`, `pad` and
//! `ball` (circle), `annotation` (rect), `violation` (circle marking a site
//! named by a DRC finding) and `drc` (text lines listing findings).

use std::fmt::Write;

use pinchip_core::layout::{AnnotationKind, DrcReport, InterposerLayout, Point};

fn um(meters: f64) -> String {
    let v = (meters * 1e9).round() / 1000.0;
    // Normalises -0.
    super::num(v + 0.0)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn circle(out: &mut String, class: &str, p: Point, r: f64, extra: &str) {
    let _ = writeln!(
        out,
        r#"<circle class="{class}" cx="{}" cy="{}" r="{}"{extra}/>"#,
        um(p.x),
        um(-p.y),
        um(r)
    );
}

pub fn render(layout: &InterposerLayout, drc: Option<&DrcReport>) -> String {
    let half = layout.extent() / 2.0;
    let pitch = layout.qubit_pitch;
    let ball_r = (layout.qubit_pitch * 0.04).min(20e-6);
    let tail = layout.annotations.iter().map(|a| a.position).fold(pitch, f64::max) + pitch;
    let margin = pitch;
    let (min_x, min_y) = (-half - margin, -half - margin);
    let width = 2.0 * half + tail + 2.0 * margin;
    let height = 2.0 * half + 2.0 * margin;
    let drc_lines = drc.map_or(0, |d| d.findings.len());
    let text_h = 24e-6 * layout.array_side_count.max(1) as f64 * pitch / 500e-6;
    let total_h = height + text_h * (drc_lines as f64 + 1.0);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        um(min_x),
        um(min_y),
        um(width),
        um(total_h),
        um(width),
        um(total_h)
    );
    let _ = writeln!(
        out,
        "<title>interposer layout {n}x{n}, pitch {p} um</title>",
        n = layout.array_side_count,
        p = um(pitch)
    );
    out.push_str("<style>.channel{fill:#e8d9a8}.ribbon{stroke:#c08040;stroke-width:4}.hole{fill:#ffffff;stroke:#555555}.pad{fill:#9090c0;fill-opacity:0.6}.ball{fill:#808080}.annotation{fill:#40a040}.violation{fill:none;stroke:#ff0000;stroke-width:6}.drc{font-family:monospace}</style>\n");

    out.push_str("<g id=\"channels\">\n");
    for c in &layout.channel_rows {
        let _ = writeln!(
            out,
            r#"<rect class="channel" x="{}" y="{}" width="{}" height="{}" data-row="{}"/>"#,
            um(c.x_min),
            um(-(c.y + c.width / 2.0)),
            um(c.x_max - c.x_min),
            um(c.width),
            c.row
        );
    }
    out.push_str("</g>\n<g id=\"ribbons\">\n");
    for (c, r) in layout.channel_rows.iter().zip(&layout.ribbon_assignments) {
        let _ = writeln!(
            out,
            r#"<line class="ribbon" x1="{}" y1="{}" x2="{}" y2="{}" data-cable="{}"/>"#,
            um(c.x_min),
            um(-c.y),
            um(half + tail),
            um(-c.y),
            escape(&r.cable)
        );
    }
    out.push_str("</g>\n<g id=\"holes\">\n");
    for h in &layout.hole_centers {
        circle(&mut out, "hole", *h, layout.hole_diameter / 2.0, "");
    }
    out.push_str("</g>\n<g id=\"pads\">\n");
    for p in &layout.pad_centers {
        circle(&mut out, "pad", *p, layout.pad_diameter / 2.0, "");
    }
    out.push_str("</g>\n<g id=\"solder-balls\">\n");
    for b in &layout.solder_ball_sites {
        circle(&mut out, "ball", *b, ball_r, "");
    }
    out.push_str("</g>\n<g id=\"annotations\">\n");
    for a in &layout.annotations {
        let y = layout.channel_rows.iter().find(|c| c.row == a.row).map_or(0.0, |c| c.y);
        let kind = match a.kind {
            AnnotationKind::Attenuator => "attenuator",
            AnnotationKind::Filter => "filter",
        };
        let s = pitch * 0.3;
        let _ = writeln!(
            out,
            r#"<rect class="annotation" data-kind="{kind}" x="{}" y="{}" width="{}" height="{}"><title>{}</title></rect>"#,
            um(half + a.position - s / 2.0),
            um(-y - s / 2.0),
            um(s),
            um(s),
            escape(&a.label)
        );
    }
    out.push_str("</g>\n");

    if let Some(report) = drc {
        out.push_str("<g id=\"drc\">\n");
        for f in &report.findings {
            for &i in &f.offending {
                if let Some(h) = layout.hole_centers.get(i) {
                    let extra = format!(r#" data-rule="{}""#, f.rule);
                    circle(&mut out, "violation", *h, layout.hole_diameter / 2.0, &extra);
                }
            }
        }
        let x = um(min_x + margin / 4.0);
        let font = um(text_h * 0.8);
        for (k, f) in report.findings.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<text class="drc" x="{x}" y="{}" font-size="{font}">{} {}: {}</text>"#,
                um(min_y + height + text_h * (k as f64 + 1.0)),
                f.rule,
                f.severity,
                escape(&f.message)
            );
        }
        if report.findings.is_empty() {
            let _ = writeln!(
                out,
                r#"<text class="drc" x="{x}" y="{}" font-size="{font}">DRC clean</text>"#,
                um(min_y + height + text_h)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
