use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use ivmap_core::{MapDocument, Scalar};

use crate::util::{read_to_string, write_atomic, Failure};

#[derive(Args, Debug)]
pub struct PlotArgs {
    /// Map document to draw.
    pub input: PathBuf,
    /// SVG output path.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Width and height of the drawing area in pixels.
    #[arg(long, default_value_t = 480)]
    pub size: u32,
}

const MARGIN: f64 = 24.0;

/// The graph of the map with the diagonal; for `d = 0` also the orbit points
/// `(x_i, x_{i+1})` and the line `x = t`.
pub fn render(doc: &MapDocument, size: u32) -> Result<String, Failure> {
    let f = doc.to_plmap()?;
    let (lo, hi) = (f.lo().to_f64(), f.hi().to_f64());
    let side = f64::from(size);
    let scale = side / (hi - lo);
    let px = |x: f64| MARGIN + (x - lo) * scale;
    let py = |y: f64| MARGIN + side - (y - lo) * scale;
    let total = side + 2.0 * MARGIN;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total:.0}" height="{total:.0}" viewBox="0 0 {total:.0} {total:.0}">"#
    );
    let _ = writeln!(
        s,
        "<title>p = {}, d = {}, lambda = {}: type {}, entropy {}</title>",
        doc.params.p, doc.params.d, doc.params.lambda, doc.claims.type_n, doc.claims.entropy
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{total:.0}" height="{total:.0}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r##"<rect x="{m:.3}" y="{m:.3}" width="{side:.3}" height="{side:.3}" fill="none" stroke="#888"/>"##,
        m = MARGIN
    );
    let _ = writeln!(
        s,
        r##"<line class="diagonal" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#aaa" stroke-dasharray="4 3"/>"##,
        px(lo),
        py(lo),
        px(hi),
        py(hi)
    );
    if doc.params.d == 0 {
        let t = doc.markers.t.to_f64();
        let _ = writeln!(
            s,
            r##"<line class="t" x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}" stroke="#c44" stroke-dasharray="2 2"/>"##,
            py(lo),
            py(hi),
            x = px(t)
        );
    }
    let points: Vec<String> = f
        .breakpoints()
        .iter()
        .zip(f.values())
        .map(|(x, y)| format!("{:.3},{:.3}", px(x.to_f64()), py(y.to_f64())))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline class="map" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        points.join(" ")
    );
    if doc.params.d == 0 {
        let orbit = &doc.markers.orbit;
        for (i, x) in orbit.iter().enumerate() {
            let y: &Scalar = &orbit[(i + 1) % orbit.len()];
            let _ = writeln!(
                s,
                r##"<circle class="orbit" cx="{:.3}" cy="{:.3}" r="3" fill="#26c"/>"##,
                px(x.to_f64()),
                py(y.to_f64())
            );
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}

pub fn run(args: &PlotArgs) -> Result<(), Failure> {
    if args.size == 0 {
        return Err(Failure::usage("--size must be positive"));
    }
    let doc = MapDocument::from_json(&read_to_string(&args.input)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.input.display())))?;
    write_atomic(&args.out, render(&doc, args.size)?.as_bytes())
}
