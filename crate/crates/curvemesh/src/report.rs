//! JSON and SVG output.
//!
//! Every CLI mode emits one `Report` document. Dyadic numbers are written as
//! `{"m": "<decimal mantissa>", "e": <exponent>}` so exact values survive a
//! round-trip through the file; nothing is ever printed as floating point.
//! Serialization is byte-deterministic: field order is fixed by the struct
//! declarations, collections keep pipeline order, and the runtime stat is
//! pinned to zero (wall-clock noise would break file-level comparisons,
//! which the test suite relies on).
//!
//! The SVG renderer consumes the `Report` value itself, not the pipeline
//! structures, so the picture can never disagree with the JSON next to it.

use crate::bounds::{BoundReport, BoundValue};
use crate::graph::PLGraph;
use crate::mesher::{MeshConfig, MeshResult};
use crate::numeric::{Box2, Dyadic, DyInterval, Rect};
use crate::singular::IsolationResult;
use crate::subdivision::SubdivisionTree;
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JsonDyadic {
    /// Mantissa as a decimal string; may exceed every machine-integer range.
    pub m: String,
    pub e: i64,
}

impl JsonDyadic {
    pub fn of(d: &Dyadic) -> Self {
        JsonDyadic { m: d.mantissa().to_string(), e: d.exponent() }
    }

    pub fn to_dyadic(&self) -> crate::Result<Dyadic> {
        let m = self
            .m
            .parse::<num_bigint::BigInt>()
            .map_err(|_| crate::Error::Parse(format!("bad mantissa {:?}", self.m)))?;
        Ok(Dyadic::new(m, self.e))
    }

    /// Lossy value for drawing only.
    fn approx(&self) -> f64 {
        self.m.parse::<f64>().unwrap_or(0.0) * (self.e as f64).exp2()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JsonPoint {
    pub x: JsonDyadic,
    pub y: JsonDyadic,
}

impl JsonPoint {
    fn of(p: &(Dyadic, Dyadic)) -> Self {
        JsonPoint { x: JsonDyadic::of(&p.0), y: JsonDyadic::of(&p.1) }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JsonRect {
    pub x: [JsonDyadic; 2],
    pub y: [JsonDyadic; 2],
}

impl JsonRect {
    fn of_interval(i: &DyInterval) -> [JsonDyadic; 2] {
        [JsonDyadic::of(i.lo()), JsonDyadic::of(i.hi())]
    }

    pub fn of_rect(r: &Rect) -> Self {
        JsonRect { x: Self::of_interval(&r.x), y: Self::of_interval(&r.y) }
    }

    pub fn of_box(b: &Box2) -> Self {
        JsonRect { x: Self::of_interval(b.x()), y: Self::of_interval(b.y()) }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JsonConfig {
    pub poly: String,
    pub region: JsonRect,
    pub mode: String,
    pub exclude: Vec<JsonRect>,
    /// Refinement tolerance; `null` means infinite (topology only).
    pub eps: Option<JsonDyadic>,
    pub max_depth: u32,
    pub collar_eps: Option<JsonDyadic>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JsonBound {
    pub value: JsonDyadic,
    pub source: String,
}

impl JsonBound {
    fn of(b: &BoundValue) -> Self {
        JsonBound { value: JsonDyadic::of(&b.value), source: b.source.as_str().to_string() }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JsonBounds {
    pub degree: u32,
    pub height_bits: u32,
    pub ev: JsonBound,
    pub delta3: JsonBound,
    pub delta4: JsonBound,
}

impl JsonBounds {
    pub fn of(b: &BoundReport) -> Self {
        JsonBounds {
            degree: b.d,
            height_bits: b.height_bits,
            ev: JsonBound::of(&b.ev),
            delta3: JsonBound::of(&b.delta3),
            delta4: JsonBound::of(&b.delta4),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JsonVertex {
    pub pt: JsonPoint,
    pub tag: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JsonSingularity {
    pub center: JsonPoint,
    /// Branching degree; `null` when the run isolated but did not mesh.
    pub degree: Option<usize>,
    pub rect: JsonRect,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct JsonStats {
    pub boxes: usize,
    pub depth: u32,
    /// Always zero: output files must be byte-identical across runs.
    pub runtime_ms: u64,
}

/// The one wire format of the pipeline.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub config: JsonConfig,
    /// Absent for runs that never compute bounds (plain `pv`, `oracle`).
    pub bounds: Option<JsonBounds>,
    pub vertices: Vec<JsonVertex>,
    pub edges: Vec<[usize; 2]>,
    pub singularities: Vec<JsonSingularity>,
    pub stats: JsonStats,
}

fn graph_vertices(g: &PLGraph) -> Vec<JsonVertex> {
    (0..g.vertex_count())
        .map(|v| JsonVertex {
            pt: JsonPoint::of(g.point(v)),
            tag: g.tag(v).as_str().to_string(),
        })
        .collect()
}

fn graph_edges(g: &PLGraph) -> Vec<[usize; 2]> {
    g.edges().iter().map(|&(a, b)| [a, b]).collect()
}

fn config_echo(poly: &str, region: &Box2, mode: &str, cfg: &MeshConfig) -> JsonConfig {
    JsonConfig {
        poly: poly.to_string(),
        region: JsonRect::of_box(region),
        mode: mode.to_string(),
        exclude: cfg.exclude.iter().map(JsonRect::of_rect).collect(),
        eps: cfg.eps.as_ref().map(JsonDyadic::of),
        max_depth: cfg.max_depth,
        collar_eps: cfg.collar_eps.as_ref().map(JsonDyadic::of),
    }
}

impl Report {
    pub fn from_mesh(r: &MeshResult) -> Self {
        Report {
            config: config_echo(&r.poly.to_string(), &r.region, "mesh", &r.config),
            bounds: Some(JsonBounds::of(&r.bounds)),
            vertices: graph_vertices(&r.graph),
            edges: graph_edges(&r.graph),
            singularities: r
                .singularities
                .iter()
                .map(|s| JsonSingularity {
                    center: JsonPoint::of(&s.center),
                    degree: Some(s.degree),
                    rect: JsonRect::of_rect(&s.rect),
                })
                .collect(),
            stats: JsonStats { boxes: 0, depth: 0, runtime_ms: 0 }.with_tree(&r.tree),
        }
    }

    /// Graph-only run (the `pv` mode): no bound machinery involved.
    pub fn from_graph(
        poly: &str,
        region: &Box2,
        cfg: &MeshConfig,
        graph: &PLGraph,
        tree: &SubdivisionTree,
    ) -> Self {
        Report {
            config: config_echo(poly, region, "pv", cfg),
            bounds: None,
            vertices: graph_vertices(graph),
            edges: graph_edges(graph),
            singularities: Vec::new(),
            stats: JsonStats { boxes: 0, depth: 0, runtime_ms: 0 }.with_tree(tree),
        }
    }

    /// Isolation-only run: rectangles without branching degrees.
    pub fn from_isolation(
        poly: &str,
        region: &Box2,
        cfg: &MeshConfig,
        bounds: &BoundReport,
        iso: &IsolationResult,
    ) -> Self {
        Report {
            config: config_echo(poly, region, "singularities", cfg),
            bounds: Some(JsonBounds::of(bounds)),
            vertices: Vec::new(),
            edges: Vec::new(),
            singularities: iso
                .regions
                .iter()
                .map(|r| {
                    let c = r.rect.center();
                    JsonSingularity {
                        center: JsonPoint::of(&c),
                        degree: None,
                        rect: JsonRect::of_rect(&r.rect),
                    }
                })
                .collect(),
            stats: JsonStats { boxes: 0, depth: 0, runtime_ms: 0 },
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization is total");
        s.push('\n');
        s
    }

    pub fn from_json_str(s: &str) -> crate::Result<Report> {
        serde_json::from_str(s).map_err(|e| crate::Error::Parse(format!("report: {e}")))
    }
}

impl JsonStats {
    fn with_tree(mut self, tree: &SubdivisionTree) -> Self {
        self.boxes = tree.node_count();
        self.depth = tree.max_leaf_depth();
        self
    }
}

/// Draw the report: the region outline, one polyline per graph edge, and a
/// small diamond on every singular-center vertex. Coordinates are converted
/// to floating point here and nowhere else; the picture is a preview, the
/// JSON is the result.
pub fn render_svg(report: &Report) -> String {
    let rx = &report.config.region.x;
    let ry = &report.config.region.y;
    let (x0, x1) = (rx[0].approx(), rx[1].approx());
    let (y0, y1) = (ry[0].approx(), ry[1].approx());
    let w = x1 - x0;
    let h = y1 - y0;
    let margin = 0.03 * w.max(h);
    // Mathematical y grows upward; flip once around the region's midline.
    let flip = |y: f64| y0 + y1 - y;
    let stroke = (w.max(h) / 256.0).max(1e-9);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\" width=\"640\" height=\"640\">\n",
        fmt_f(x0 - margin),
        fmt_f(y0 - margin),
        fmt_f(w + 2.0 * margin),
        fmt_f(h + 2.0 * margin),
    ));
    out.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\" stroke=\"#bbbbbb\" stroke-width=\"{}\"/>\n",
        fmt_f(x0),
        fmt_f(y0),
        fmt_f(w),
        fmt_f(h),
        fmt_f(stroke * 0.5),
    ));
    for e in &report.edges {
        let a = &report.vertices[e[0]].pt;
        let b = &report.vertices[e[1]].pt;
        out.push_str(&format!(
            "<polyline points=\"{},{} {},{}\" fill=\"none\" stroke=\"#1a1a8c\" stroke-width=\"{}\" stroke-linecap=\"round\"/>\n",
            fmt_f(a.x.approx()),
            fmt_f(flip(a.y.approx())),
            fmt_f(b.x.approx()),
            fmt_f(flip(b.y.approx())),
            fmt_f(stroke),
        ));
    }
    for s in &report.singularities {
        let cx = s.center.x.approx();
        let cy = flip(s.center.y.approx());
        let r = stroke * 3.0;
        out.push_str(&format!(
            "<path d=\"M {} {} L {} {} L {} {} L {} {} Z\" fill=\"#c02020\"/>\n",
            fmt_f(cx - r),
            fmt_f(cy),
            fmt_f(cx),
            fmt_f(cy - r),
            fmt_f(cx + r),
            fmt_f(cy),
            fmt_f(cx),
            fmt_f(cy + r),
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Shortest-round-trip float formatting is locale-free and deterministic.
fn fmt_f(v: f64) -> String {
    let mut s = format!("{v}");
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesher::mesh;
    use crate::poly::BiPoly;
    use num_bigint::BigInt;

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    fn circle_report() -> Report {
        let f = BiPoly::parse("X^2+Y^2-1").unwrap();
        let region = Box2::centered(&dy(0, 0), &dy(0, 0), &dy(4, 0), 0);
        let r = mesh(&f, &region, &MeshConfig::default()).unwrap();
        Report::from_mesh(&r)
    }

    #[test]
    fn dyadic_encoding_is_mantissa_exponent() {
        let j = JsonDyadic::of(&dy(3, -2));
        assert_eq!(serde_json::to_string(&j).unwrap(), r#"{"m":"3","e":-2}"#);
        assert_eq!(j.to_dyadic().unwrap(), dy(3, -2));
    }

    #[test]
    fn huge_mantissas_round_trip_exactly() {
        let big = Dyadic::new(BigInt::from(3).pow(100), -700);
        let j = JsonDyadic::of(&big);
        assert_eq!(j.to_dyadic().unwrap(), big);
    }

    #[test]
    fn json_round_trips_through_text() {
        let rep = circle_report();
        let text = rep.to_json_string();
        let back = Report::from_json_str(&text).unwrap();
        assert_eq!(back, rep);
        assert_eq!(back.to_json_string(), text);
    }

    #[test]
    fn serialization_is_byte_deterministic() {
        let a = circle_report().to_json_string();
        let b = circle_report().to_json_string();
        assert_eq!(a, b);
        assert_eq!(a.matches("\"runtime_ms\": 0").count(), 1);
    }

    #[test]
    fn schema_keys_appear_in_declared_order() {
        let text = circle_report().to_json_string();
        let keys = ["\"config\"", "\"bounds\"", "\"vertices\"", "\"edges\"", "\"singularities\"", "\"stats\""];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
        let mut sorted = positions.clone();
        sorted.sort_unstable();
        assert_eq!(positions, sorted);
    }

    #[test]
    fn svg_has_one_polyline_per_edge() {
        let rep = circle_report();
        let svg = render_svg(&rep);
        assert_eq!(svg.matches("<polyline").count(), rep.edges.len());
        assert!(svg.starts_with("<svg "));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn singular_centers_get_markers() {
        let f = BiPoly::parse("Y^2-X^3-X^2").unwrap();
        let region = Box2::centered(&dy(0, 0), &dy(0, 0), &dy(4, 0), 0);
        let est = crate::oracle::min_positive_critical_estimate(
            &f.sq_plus_grad_sq(),
            &region.as_rect(),
            6,
        )
        .unwrap();
        let cfg = MeshConfig {
            ev_bound: Some(est),
            delta: Some(dy(1, -4)),
            override_source: crate::bounds::BoundSource::OracleDerived,
            ..MeshConfig::default()
        };
        let rep = Report::from_mesh(&mesh(&f, &region, &cfg).unwrap());
        assert_eq!(rep.singularities.len(), 1);
        assert_eq!(rep.singularities[0].degree, Some(4));
        let svg = render_svg(&rep);
        assert_eq!(svg.matches("<path ").count(), 1);
        assert!(rep.bounds.as_ref().unwrap().ev.source == "oracle-derived");
    }
}
