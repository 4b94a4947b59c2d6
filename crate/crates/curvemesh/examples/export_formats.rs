//! Serialize a mesh to the JSON report format and render it as SVG.
//!
//! The JSON report is the wire format of the CLI: exact dyadic coordinates
//! (mantissa/exponent pairs), the configuration that produced the run, the
//! bound provenance, and flat vertex/edge arrays. Serialization is byte
//! deterministic, so reports can be diffed and cached. The SVG rendering is
//! derived from the report alone and draws one polyline per graph edge plus
//! a diamond marker per singular point.
//!
//! Run with: cargo run --example export_formats

use curvemesh::bounds::BoundSource;
use curvemesh::mesher::{mesh, MeshConfig};
use curvemesh::numeric::{Box2, DyInterval, Dyadic};
use curvemesh::oracle::min_positive_critical_estimate;
use curvemesh::poly::BiPoly;
use curvemesh::report::{render_svg, Report};

fn main() -> curvemesh::Result<()> {
    let f = BiPoly::parse("y^2 - x^3 - x^2")?;
    let iv = DyInterval::new(Dyadic::from_int(-2), Dyadic::from_int(2));
    let region = Box2::new(iv.clone(), iv, 0);
    let est = min_positive_critical_estimate(&f.sq_plus_grad_sq(), &region.as_rect(), 6)
        .expect("oracle found no positive critical sample");
    let config = MeshConfig {
        ev_bound: Some(est),
        delta: Some(Dyadic::new(1.into(), -4)),
        override_source: BoundSource::OracleDerived,
        ..MeshConfig::default()
    };
    let result = mesh(&f, &region, &config)?;

    let report = Report::from_mesh(&result);
    let json = report.to_json_string();
    let svg = render_svg(&report);

    let dir = std::env::temp_dir();
    let json_path = dir.join("nodal_cubic.json");
    let svg_path = dir.join("nodal_cubic.svg");
    std::fs::write(&json_path, &json).expect("write json");
    std::fs::write(&svg_path, &svg).expect("write svg");

    println!("report: {} ({} bytes)", json_path.display(), json.len());
    println!("rendering: {} ({} bytes)", svg_path.display(), svg.len());
    println!();
    println!("report round trip preserves every byte: {}", {
        let back = Report::from_json_str(&json).expect("parse back");
        back == report && back.to_json_string() == json
    });

    // A taste of the format: the first vertex, exactly as serialized.
    if let Some(v) = json.find("\"vertices\"") {
        let head: String = json[v..].chars().take(220).collect();
        println!("---\n{head}...");
    }
    Ok(())
}
