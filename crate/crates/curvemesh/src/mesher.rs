//! The end-to-end meshing pipeline.
//!
//! `mesh` reduces the input polynomial to its square-free part, isolates the
//! singular points of its zero set into tiny excluded boxes, meshes the
//! punctured region with the boundary-aware subdivision mesher, and finally
//! reconnects the curve branches entering each excluded box to an explicit
//! singular-center vertex. The output graph is isotopic to the curve inside
//! the region, including the correct local branching at every singularity.
//!
//! Around each isolated singular point the pipeline builds two concentric
//! squares: an inner box `B` (excluded from subdivision, curve topology
//! inside it is unknowable to interval tests) and an outer box `B'` five
//! times as wide. Between the two walls the curve consists of plain arcs, so
//! every graph chain that starts on the wall of `B` either escapes `B'`
//! (a genuine curve branch, reconnected to the center) or returns to the
//! wall of `B` (a local excursion artifact, deleted). The number of
//! escaping chains is the branching degree of the singular point.

use crate::bounds::{certified_report, BoundReport, BoundSource};
use crate::collar::{run_extended_pv, CollarOptions};
use crate::graph::{PLGraph, VertexTag};
use crate::numeric::{Box2, Dyadic, Rect};
use crate::poly::BiPoly;
use crate::singular::{on_border, step0_barrier, step1_cluster, step2_refine, Energy};
use crate::subdivision::SubdivisionTree;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use rayon::prelude::*;

/// Knobs for a full pipeline run.
///
/// The certified critical-value and separation bounds are astronomically
/// small for all but trivial polynomials, so runs on singular curves
/// normally supply overrides; `override_source` records where those values
/// came from so output files stay honest.
#[derive(Clone, Debug)]
pub struct MeshConfig {
    pub max_depth: u32,
    /// Rectangles removed from the region before meshing (window masks,
    /// L-shapes, annuli).
    pub exclude: Vec<Rect>,
    /// Replacement for the certified critical-value lower bound of the
    /// energy polynomial.
    pub ev_bound: Option<Dyadic>,
    /// Replacement for both certified separation bounds.
    pub delta: Option<Dyadic>,
    /// When set, every box kept for the graph is refined to width at most
    /// eps/4, so the output stays within eps of the curve.
    pub eps: Option<Dyadic>,
    /// Width cap for complementary boundary boxes the curve may enter.
    pub collar_eps: Option<Dyadic>,
    /// Provenance tag recorded on any overridden bound.
    pub override_source: BoundSource,
}

impl Default for MeshConfig {
    fn default() -> Self {
        MeshConfig {
            max_depth: 40,
            exclude: Vec::new(),
            ev_bound: None,
            delta: None,
            eps: None,
            collar_eps: None,
            override_source: BoundSource::UserOverride,
        }
    }
}

/// One isolated singular point of the meshed curve.
#[derive(Clone, Debug)]
pub struct Singularity {
    /// Graph vertex position: the center of the isolating rectangle.
    pub center: (Dyadic, Dyadic),
    /// Number of curve branches entering the excluded box.
    pub degree: usize,
    /// Isolating rectangle from the refinement stage; contains exactly one
    /// singular point.
    pub rect: Rect,
    /// Grid-aligned box carved out of the subdivision, contains `rect`.
    pub excluded: Box2,
    /// Concentric box five times as wide; branch classification happens
    /// between its wall and the excluded box's wall.
    pub annulus_outer: Box2,
}

/// Everything a pipeline run produces.
pub struct MeshResult {
    /// The input polynomial as given.
    pub poly: BiPoly,
    pub region: Box2,
    pub config: MeshConfig,
    pub bounds: BoundReport,
    pub graph: PLGraph,
    pub singularities: Vec<Singularity>,
    pub tree: SubdivisionTree,
}

/// Nearest point of the form `origin + k * grid` (ties round up). Exact on
/// mantissas, no rational division.
fn snap_to_grid(v: &Dyadic, origin: &Dyadic, grid: &Dyadic) -> Dyadic {
    let off = v.sub(origin);
    let (a, alpha) = (off.mantissa().clone(), off.exponent());
    let (s, sigma) = (grid.mantissa().clone(), grid.exponent());
    // k = floor(off/grid + 1/2) = floor((a 2^(alpha+1) + s 2^sigma) / (s 2^(sigma+1)))
    let t = (alpha + 1).min(sigma);
    let num: BigInt = (a << (alpha + 1 - t) as usize) + (&s << (sigma - t) as usize);
    let den: BigInt = s << (sigma + 1 - t) as usize;
    let k = num.div_floor(&den);
    origin.add(&Dyadic::new(k, 0).mul(grid))
}

fn rect_within(outer: &Rect, inner: &Rect) -> bool {
    outer.x.contains_interval(&inner.x) && outer.y.contains_interval(&inner.y)
}

struct AnnulusPass {
    /// Degree-1 vertices on the excluded box wall whose chain escapes the
    /// outer box.
    type3: Vec<usize>,
    /// Vertices of chains that return to the wall without escaping.
    drop: Vec<usize>,
}

/// Walk every chain that starts on the wall of `excluded` and decide its
/// fate. Also rejects closed curve components hiding between the two walls:
/// those mean the supplied bounds were too coarse to trust.
fn classify_annulus(
    graph: &PLGraph,
    adj: &[Vec<usize>],
    comps: &[Vec<usize>],
    rect: &Rect,
    excluded: &Box2,
    outer: &Box2,
) -> Result<AnnulusPass> {
    let wall = excluded.as_rect();
    let orect = outer.as_rect();
    let mut type3 = Vec::new();
    let mut drop = Vec::new();
    for v in 0..graph.vertex_count() {
        if adj[v].len() != 1 || !on_border(&wall, graph.point(v)) {
            continue;
        }
        let mut chain = vec![v];
        let (mut prev, mut cur) = (v, adj[v][0]);
        let escapes = loop {
            let p = graph.point(cur);
            if !orect.contains_point(&p.0, &p.1) {
                break true;
            }
            chain.push(cur);
            if adj[cur].len() == 1 {
                // Dead end between the walls: back on the inner wall is a
                // local excursion; any other stop (a mask edge cutting the
                // annulus) still means the branch left the neighborhood.
                break !on_border(&wall, p);
            }
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        };
        if escapes {
            type3.push(v);
        } else {
            drop.extend(chain);
        }
    }
    for comp in comps {
        if comp.iter().all(|&v| adj[v].len() == 2)
            && comp.iter().all(|&v| {
                let p = graph.point(v);
                orect.contains_point(&p.0, &p.1)
            })
        {
            let (cx, cy) = rect.center();
            return Err(Error::ClosedLoopInAnnulus {
                cx: cx.to_decimal_string(),
                cy: cy.to_decimal_string(),
            });
        }
    }
    Ok(AnnulusPass { type3, drop })
}

/// Mesh the zero set of `f_input` inside `region`.
///
/// The pipeline: square-free reduction, bound computation (with overrides),
/// singularity isolation, sizing and carving of the excluded boxes, one
/// boundary-aware subdivision run on the punctured region, then branch
/// classification and reconnection per singularity.
pub fn mesh(f_input: &BiPoly, region: &Box2, config: &MeshConfig) -> Result<MeshResult> {
    if f_input.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let f = f_input.sqfree_part();
    let mut bounds = certified_report(&f)?;
    if let Some(v) = &config.ev_bound {
        bounds.ev.replace(v.clone(), config.override_source);
    }
    if let Some(v) = &config.delta {
        bounds.delta3.replace(v.clone(), config.override_source);
        bounds.delta4.replace(v.clone(), config.override_source);
    }
    let sep = if bounds.delta3.value < bounds.delta4.value {
        bounds.delta3.value.clone()
    } else {
        bounds.delta4.value.clone()
    };

    let energy = Energy::of(&f);
    let barrier = step0_barrier(&energy, region, &bounds.ev.value, config.max_depth)?;
    let clusters = step1_cluster(&energy, region, &barrier, config.max_depth)?;

    let mut tree = SubdivisionTree::new(region.clone(), config.max_depth);
    for r in &config.exclude {
        tree.carve_complement(r, "user exclusion")?;
    }

    // Size the excluded boxes: the largest grid width w with 6w below the
    // separation bound, shrunk further until every 5x neighborhood fits in
    // the region and the neighborhoods are pairwise disjoint.
    let mut geom: Vec<(Rect, Box2, Box2)> = Vec::new();
    if !clusters.is_empty() {
        let w0 = region.width();
        let six = Dyadic::from_int(6);
        let five = Dyadic::from_int(5);
        let mut dep: u32 = 0;
        while six.mul(&w0.mul_pow2(-(dep as i64))) > sep {
            dep += 1;
            if dep + 1 > config.max_depth {
                return Err(Error::MaxDepthExceeded {
                    stage: "singularity box sizing",
                    max_depth: config.max_depth,
                });
            }
        }
        loop {
            let w = w0.mul_pow2(-(dep as i64));
            let target = w.mul_pow2(-2);
            let refined: Vec<Result<Option<Rect>>> = clusters
                .par_iter()
                .map(|c| step2_refine(&energy, c, &barrier, &target, config.max_depth))
                .collect();
            let mut rects = Vec::new();
            for r in refined {
                if let Some(rect) = r? {
                    rects.push(rect);
                }
            }
            if rects.is_empty() {
                break;
            }
            let grid = w.mul_pow2(-1);
            let candidate: Vec<(Rect, Box2, Box2)> = rects
                .into_iter()
                .map(|r| {
                    let (cx, cy) = r.center();
                    let sx = snap_to_grid(&cx, region.x().lo(), &grid);
                    let sy = snap_to_grid(&cy, region.y().lo(), &grid);
                    let b = Box2::centered(&sx, &sy, &w, dep);
                    let bp = Box2::centered(&sx, &sy, &w.mul(&five), dep);
                    (r, b, bp)
                })
                .collect();
            let rr = region.as_rect();
            let mut ok = candidate
                .iter()
                .all(|(r, b, bp)| rect_within(&b.as_rect(), r) && rect_within(&rr, &bp.as_rect()));
            for i in 1..candidate.len() {
                for j in 0..i {
                    ok &= !candidate[i].2.intersects_interior(&candidate[j].2);
                }
            }
            if ok {
                geom = candidate;
                break;
            }
            dep += 1;
            if dep + 1 > config.max_depth {
                return Err(Error::OverlappingSingularityNeighborhoods);
            }
        }
        for (_, b, _) in &geom {
            tree.carve_complement(&b.as_rect(), "singularity excision")?;
        }
    }

    let opts = CollarOptions {
        collar_eps: config.collar_eps.clone(),
        curve_eps: config.eps.clone(),
    };
    let (graph, _) = run_extended_pv(&f, &mut tree, &opts)?;

    let adj = graph.adjacency();
    let comps = graph.components();
    let passes: Vec<Result<AnnulusPass>> = geom
        .par_iter()
        .map(|(r, b, bp)| classify_annulus(&graph, &adj, &comps, r, b, bp))
        .collect();
    let mut all = Vec::with_capacity(passes.len());
    for p in passes {
        all.push(p?);
    }

    let mut keep = vec![true; graph.vertex_count()];
    for pass in &all {
        for &v in &pass.drop {
            keep[v] = false;
        }
    }
    let (mut final_graph, remap) = graph.subgraph(|v| keep[v]);
    let mut singularities = Vec::with_capacity(geom.len());
    for ((rect, b, bp), pass) in geom.iter().zip(&all) {
        let center = rect.center();
        let c = final_graph.add_vertex(center.clone(), VertexTag::SingularCenter);
        for &old in &pass.type3 {
            final_graph.add_edge(c, remap[old].expect("escaping chains survive the drop pass"));
        }
        singularities.push(Singularity {
            center,
            degree: pass.type3.len(),
            rect: rect.clone(),
            excluded: b.clone(),
            annulus_outer: bp.clone(),
        });
    }

    if cfg!(debug_assertions) {
        for s in &singularities {
            let b = &s.excluded;
            for v in 0..final_graph.vertex_count() {
                let p = final_graph.point(v);
                let inside = *b.x().lo() < p.0
                    && p.0 < *b.x().hi()
                    && *b.y().lo() < p.1
                    && p.1 < *b.y().hi();
                debug_assert!(
                    !inside || final_graph.tag(v) == VertexTag::SingularCenter,
                    "stray vertex inside an excluded box"
                );
            }
        }
    }

    Ok(MeshResult {
        poly: f_input.clone(),
        region: region.clone(),
        config: config.clone(),
        bounds,
        graph: final_graph,
        singularities,
        tree,
    })
}

/// Re-run the pipeline with a vertex accuracy target. Every box kept for
/// the graph is refined to width at most `eps`/4, which pins the output
/// within `eps` of the curve; the topology is unchanged.
pub fn refine_to_eps(result: &MeshResult, eps: &Dyadic) -> Result<MeshResult> {
    if !eps.is_positive() {
        return Err(Error::Invalid("refinement tolerance must be positive".into()));
    }
    let mut config = result.config.clone();
    config.eps = Some(eps.clone());
    mesh(&result.poly, &result.region, &config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::DyInterval;
    use crate::oracle;

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    fn square(lo: i64, hi: i64) -> Box2 {
        Box2::new(
            DyInterval::new(dy(lo, 0), dy(hi, 0)),
            DyInterval::new(dy(lo, 0), dy(hi, 0)),
            0,
        )
    }

    fn est(f: &BiPoly, region: &Box2) -> Dyadic {
        oracle::min_positive_critical_estimate(&f.sq_plus_grad_sq(), &region.as_rect(), 6)
            .unwrap_or_else(|| dy(1, -8))
    }

    fn singular_config(f: &BiPoly, region: &Box2) -> MeshConfig {
        MeshConfig {
            ev_bound: Some(est(f, region)),
            delta: Some(dy(1, -4)),
            override_source: BoundSource::OracleDerived,
            ..Default::default()
        }
    }

    /// (cycle rank, open ends, singular degrees) per component, sorted.
    fn invariants(g: &PLGraph) -> Vec<(usize, usize, Vec<usize>)> {
        let mut v: Vec<_> = g
            .topology_summary()
            .into_iter()
            .map(|c| {
                (
                    c.cycle_rank,
                    c.degree_histogram.get(&1).copied().unwrap_or(0),
                    c.singular_degrees,
                )
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn smooth_curve_needs_no_isolation() {
        // Fully certified run: the energy of the circle never gets near
        // zero, so clustering drains without ever sizing excluded boxes.
        let f = BiPoly::parse("X^2+Y^2-1").unwrap();
        let r = mesh(&f, &square(-2, 2), &MeshConfig::default()).unwrap();
        assert!(r.singularities.is_empty());
        assert_eq!(invariants(&r.graph), vec![(1, 0, vec![])]);
        assert_eq!(r.bounds.ev.source, BoundSource::CertifiedFormula);
    }

    #[test]
    fn near_singular_curve_stays_smooth_under_certified_bounds() {
        // Minimum energy is about 0.067, far above the certified bound, so
        // every cluster candidate drains.
        let f = BiPoly::parse("5*Y^2-5*X^2+5*X^3+1").unwrap();
        let r = mesh(&f, &square(-2, 2), &MeshConfig::default()).unwrap();
        assert!(r.singularities.is_empty());
        assert_eq!(invariants(&r.graph), vec![(0, 2, vec![])]);
    }

    #[test]
    fn node_mesh_restores_the_crossing() {
        let f = BiPoly::parse("Y^2-X^3-X^2").unwrap();
        let region = square(-2, 2);
        let r = mesh(&f, &region, &singular_config(&f, &region)).unwrap();
        assert_eq!(r.singularities.len(), 1);
        let s = &r.singularities[0];
        assert_eq!(s.degree, 4);
        assert!(s.rect.contains_point(&dy(0, 0), &dy(0, 0)));
        // delta 1/16 forces grid width 1/128, so the rectangle is tiny.
        assert!(s.rect.diameter() < dy(1, -9));
        // One component: the oval through the node plus the pair of branches
        // leaving through the top and bottom region edges.
        assert_eq!(invariants(&r.graph), vec![(1, 2, vec![4])]);
        assert_eq!(r.bounds.ev.source, BoundSource::OracleDerived);
    }

    #[test]
    fn cusp_mesh_is_a_single_chain() {
        let f = BiPoly::parse("Y^2-X^3").unwrap();
        let region = square(-2, 2);
        let r = mesh(&f, &region, &singular_config(&f, &region)).unwrap();
        assert_eq!(r.singularities.len(), 1);
        assert_eq!(r.singularities[0].degree, 2);
        assert_eq!(invariants(&r.graph), vec![(0, 2, vec![2])]);
    }

    #[test]
    fn curve_through_region_corners_grows_collar_chevrons() {
        // On [-1,1]^2 the cusp branches leave exactly through the region
        // corners (1,1) and (1,-1). A zero at a box corner reads as positive
        // under the perturbed sign rule, so the two complementary boxes
        // above and below those corners see uniform corner signs with a
        // possible incursion, and the collar must keep a gadget for each.
        // The output is the meshed chain plus two three-vertex chevrons;
        // this is the documented resolution of boundary contact, not a bug.
        let f = BiPoly::parse("Y^2-X^3").unwrap();
        let region = square(-1, 1);
        let r = mesh(&f, &region, &singular_config(&f, &region)).unwrap();
        assert_eq!(
            invariants(&r.graph),
            vec![(0, 2, vec![]), (0, 2, vec![]), (0, 2, vec![2])]
        );
        let mut chevrons = 0;
        for comp in r.graph.components() {
            if comp.iter().all(|&v| r.graph.tag(v) == VertexTag::AugmentedCollar) {
                assert_eq!(comp.len(), 3);
                chevrons += 1;
            }
        }
        assert_eq!(chevrons, 2);
    }

    #[test]
    fn lemniscate_mesh_is_a_figure_eight() {
        let f = BiPoly::parse("(X^2+Y^2)^2-4*X^2+4*Y^2").unwrap();
        let region = square(-4, 4);
        let r = mesh(&f, &region, &singular_config(&f, &region)).unwrap();
        assert_eq!(r.singularities.len(), 1);
        assert_eq!(r.singularities[0].degree, 4);
        assert_eq!(invariants(&r.graph), vec![(2, 0, vec![4])]);
    }

    #[test]
    fn isolated_point_becomes_a_lone_vertex() {
        // The real zero set of X^2+Y^2 is the origin alone: a singular point
        // with no branches. The mesh is a single degree-0 center vertex.
        let f = BiPoly::parse("X^2+Y^2").unwrap();
        let region = square(-1, 1);
        let config = MeshConfig {
            ev_bound: Some(dy(1, -4)),
            delta: Some(dy(1, -4)),
            ..Default::default()
        };
        let r = mesh(&f, &region, &config).unwrap();
        assert_eq!(r.singularities.len(), 1);
        assert_eq!(r.singularities[0].degree, 0);
        assert!(r.singularities[0].rect.contains_point(&dy(0, 0), &dy(0, 0)));
        assert_eq!(r.graph.vertex_count(), 1);
        assert_eq!(r.graph.edge_count(), 0);
        assert_eq!(r.graph.tag(0), VertexTag::SingularCenter);
    }

    #[test]
    fn eps_cap_pins_vertices_to_the_curve() {
        let f = BiPoly::parse("X^2+Y^2-1").unwrap();
        let base = mesh(&f, &square(-2, 2), &MeshConfig::default()).unwrap();
        let fine = refine_to_eps(&base, &dy(1, -3)).unwrap();
        assert_eq!(invariants(&fine.graph), invariants(&base.graph));
        // Within 1/8 of the unit circle: 49/64 <= x^2+y^2 <= 81/64.
        for p in fine.graph.points() {
            let s = p.0.square().add(&p.1.square());
            assert!(dy(49, -6) <= s && s <= dy(81, -6), "vertex too far: {s:?}");
        }
        use crate::subdivision::Label;
        for id in fine.tree.leaves_labeled(Label::Region) {
            assert!(fine.tree.box_of(id).width() <= dy(1, -5));
        }
    }

    #[test]
    fn huge_eps_changes_nothing() {
        let f = BiPoly::parse("X^2+Y^2-1").unwrap();
        let base = mesh(&f, &square(-2, 2), &MeshConfig::default()).unwrap();
        let same = refine_to_eps(&base, &dy(1, 8)).unwrap();
        assert_eq!(base.graph.points(), same.graph.points());
        assert_eq!(base.graph.edges(), same.graph.edges());
    }

    #[test]
    fn refinement_preserves_singular_topology() {
        let f = BiPoly::parse("Y^2-X^3-X^2").unwrap();
        let region = square(-2, 2);
        let base = mesh(&f, &region, &singular_config(&f, &region)).unwrap();
        let fine = refine_to_eps(&base, &dy(1, -3)).unwrap();
        assert_eq!(invariants(&fine.graph), invariants(&base.graph));
        assert!(fine.graph.vertex_count() > base.graph.vertex_count());
        assert_eq!(fine.singularities.len(), 1);
        assert_eq!(fine.singularities[0].degree, 4);
    }

    #[test]
    fn excluding_a_window_opens_the_loop() {
        let f = BiPoly::parse("X^2+Y^2-1").unwrap();
        let window = Rect::new(
            DyInterval::new(dy(1, -1), dy(3, -1)),
            DyInterval::new(dy(-1, -1), dy(1, -1)),
        );
        let config = MeshConfig { exclude: vec![window.clone()], ..Default::default() };
        let r = mesh(&f, &square(-2, 2), &config).unwrap();
        assert_eq!(invariants(&r.graph), vec![(0, 2, vec![])]);
        let adj = r.graph.adjacency();
        for (v, nbs) in adj.iter().enumerate() {
            if nbs.len() == 1 {
                assert!(on_border(&window, r.graph.point(v)), "loose end off the mask edge");
            }
        }
    }

    #[test]
    fn crowded_neighborhoods_shrink_until_disjoint() {
        // Two nodes two apart vertically; delta 3 first tries boxes whose 5x
        // neighborhoods collide, and the sizing loop must fall back.
        let f = BiPoly::parse("(X^2+Y^2-4)*((X-2)^2+Y^2-1)").unwrap();
        let region = square(-4, 4);
        let config = MeshConfig {
            ev_bound: Some(est(&f, &region)),
            delta: Some(dy(3, 0)),
            override_source: BoundSource::OracleDerived,
            ..Default::default()
        };
        let r = mesh(&f, &region, &config).unwrap();
        assert_eq!(r.singularities.len(), 2);
        for s in &r.singularities {
            assert_eq!(s.degree, 4);
        }
        assert!(!r.singularities[0]
            .annulus_outer
            .intersects_interior(&r.singularities[1].annulus_outer));
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        let f = BiPoly::zero();
        assert!(matches!(
            mesh(&f, &square(-1, 1), &MeshConfig::default()),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn repeated_runs_are_identical() {
        let f = BiPoly::parse("(X^2+Y^2)^2-4*X^2+4*Y^2").unwrap();
        let region = square(-4, 4);
        let config = singular_config(&f, &region);
        let a = mesh(&f, &region, &config).unwrap();
        let b = mesh(&f, &region, &config).unwrap();
        assert_eq!(a.graph.points(), b.graph.points());
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_eq!(a.singularities.len(), b.singularities.len());
        for (x, y) in a.singularities.iter().zip(&b.singularities) {
            assert_eq!(x.center, y.center);
            assert_eq!(x.degree, y.degree);
        }
    }
}
