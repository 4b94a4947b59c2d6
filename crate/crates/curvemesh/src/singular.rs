//! Isolation of curve singularities and local branching degree.
//!
//! Singular points of f are exactly the zeros of the nonnegative energy
//! polynomial E = f^2 + fx^2 + fy^2. They are isolated by a barrier
//! argument: choose eps below both the smallest positive critical value of
//! E and the minimum of E on the region boundary. Then the sublevel set
//! {E < eps} decomposes into connected pieces, each holding exactly one
//! zero; pieces certified free of a zero drain away on refinement.
//!
//! The local branching degree of an isolated singularity is read off a
//! square annulus around it: mesh the annulus, classify each graph
//! component by which boundary its endpoints touch, and count the
//! components running from the inner boundary to the outer one.

use crate::collar::{run_extended_pv, CollarOptions};
use crate::numeric::{Box2, Dyadic, DyInterval, Rect};
use crate::poly::BiPoly;
use crate::subdivision::SubdivisionTree;
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::VecDeque;

/// Interval evaluator for the energy E = f^2 + fx^2 + fy^2 that keeps the
/// sum-of-squares shape: the three parts are evaluated separately and
/// squared as intervals. Interval evaluation of the expanded polynomial is
/// useless here: its coefficients cancel catastrophically and the resulting
/// slack is orders of magnitude above the barrier scale. The square form
/// also makes every lower bound nonnegative by construction, which is what
/// the mountain-pass argument consumes.
pub struct Energy {
    f: BiPoly,
    fx: BiPoly,
    fy: BiPoly,
}

impl Energy {
    pub fn of(f: &BiPoly) -> Self {
        Energy { f: f.clone(), fx: f.dx(), fy: f.dy() }
    }

    pub fn eval_box(&self, b: &Box2) -> DyInterval {
        self.f
            .eval_box(b)
            .pow(2)
            .add(&self.fx.eval_box(b).pow(2))
            .add(&self.fy.eval_box(b).pow(2))
    }
}

/// One isolated singular region: the enclosing rectangle and the cluster
/// boxes it was refined from.
#[derive(Clone, Debug)]
pub struct SingularRegion {
    pub rect: Rect,
    pub footprint: Vec<Box2>,
}

/// Result of the isolation pass.
#[derive(Clone, Debug)]
pub struct IsolationResult {
    /// Barrier value: min of the critical-value lower bound and the
    /// certified boundary minimum of the energy polynomial.
    pub eps_barrier: Dyadic,
    pub regions: Vec<SingularRegion>,
}

fn touches_boundary(b: &Box2, b0: &Box2) -> bool {
    b.x().lo() == b0.x().lo()
        || b.x().hi() == b0.x().hi()
        || b.y().lo() == b0.y().lo()
        || b.y().hi() == b0.y().hi()
}

/// Certified positive lower bound of `energy` on the boundary of `b0`,
/// capped by `ev_lb`. Subdivides boundary-touching boxes until the interval
/// bound clears zero on each.
pub fn step0_barrier(
    energy: &Energy,
    b0: &Box2,
    ev_lb: &Dyadic,
    max_depth: u32,
) -> Result<Dyadic> {
    let mut eps = ev_lb.clone();
    let mut queue: VecDeque<Box2> = VecDeque::new();
    queue.push_back(b0.clone());
    while let Some(b) = queue.pop_front() {
        let iv = energy.eval_box(&b);
        if iv.lo().is_positive() {
            if *iv.lo() < eps {
                eps = iv.lo().clone();
            }
            continue;
        }
        if b.depth() >= max_depth {
            return Err(Error::SingularOnBoundary { max_depth });
        }
        for child in b.split() {
            if touches_boundary(&child, b0) {
                queue.push_back(child);
            }
        }
    }
    Ok(eps)
}

/// Boxes sharing a boundary segment of positive length. Corner contact does
/// not connect: the barrier between clusters must have positive width.
fn edge_adjacent(a: &Box2, b: &Box2) -> bool {
    let touch_x = a.x().hi() == b.x().lo() || b.x().hi() == a.x().lo();
    let touch_y = a.y().hi() == b.y().lo() || b.y().hi() == a.y().lo();
    (touch_x && a.y().overlaps_interior(b.y())) || (touch_y && a.x().overlaps_interior(b.x()))
}

/// Subdivide `b0` against the barrier: discard boxes with energy certainly
/// above eps/2, accept boxes with energy certainly below eps, split the
/// rest. Accepted boxes are grouped into edge-connected clusters, each
/// containing at most one energy zero.
pub fn step1_cluster(
    energy: &Energy,
    b0: &Box2,
    eps: &Dyadic,
    max_depth: u32,
) -> Result<Vec<Vec<Box2>>> {
    let half = eps.mul_pow2(-1);
    let mut accepted: Vec<Box2> = Vec::new();
    let mut queue: VecDeque<Box2> = VecDeque::new();
    queue.push_back(b0.clone());
    while let Some(b) = queue.pop_front() {
        let iv = energy.eval_box(&b);
        if *iv.lo() > half {
            continue;
        }
        if *iv.hi() < *eps {
            debug_assert!(!touches_boundary(&b, b0));
            accepted.push(b);
            continue;
        }
        if b.depth() >= max_depth {
            return Err(Error::MaxDepthExceeded { stage: "singularity isolation", max_depth });
        }
        queue.extend(b.split());
    }
    accepted.sort_by(|a, b| {
        (a.x().lo(), a.y().lo(), a.depth()).cmp(&(b.x().lo(), b.y().lo(), b.depth()))
    });
    // BFS over edge adjacency; accepted counts stay small (neighborhoods of
    // the finitely many singular points), so the quadratic scan is fine.
    let mut cluster_of = vec![usize::MAX; accepted.len()];
    let mut clusters: Vec<Vec<Box2>> = Vec::new();
    for start in 0..accepted.len() {
        if cluster_of[start] != usize::MAX {
            continue;
        }
        let id = clusters.len();
        let mut member = Vec::new();
        let mut bfs = VecDeque::new();
        cluster_of[start] = id;
        bfs.push_back(start);
        while let Some(i) = bfs.pop_front() {
            member.push(accepted[i].clone());
            for j in 0..accepted.len() {
                if cluster_of[j] == usize::MAX && edge_adjacent(&accepted[i], &accepted[j]) {
                    cluster_of[j] = id;
                    bfs.push_back(j);
                }
            }
        }
        member.sort_by(|a, b| {
            (a.x().lo(), a.y().lo(), a.depth()).cmp(&(b.x().lo(), b.y().lo(), b.depth()))
        });
        clusters.push(member);
    }
    Ok(clusters)
}

/// True when `rect` is covered by the (pairwise disjoint) boxes. Exact:
/// compares the clipped area sum against the rectangle area.
fn covered_by(rect: &Rect, boxes: &[Box2]) -> bool {
    let total = rect.x.width().mul(&rect.y.width());
    let mut sum = Dyadic::zero();
    for b in boxes {
        let ix = clip(&rect.x, b.x());
        let iy = clip(&rect.y, b.y());
        sum = sum.add(&ix.mul(&iy));
    }
    sum == total
}

fn clip(a: &DyInterval, b: &DyInterval) -> Dyadic {
    let lo = if a.lo() > b.lo() { a.lo() } else { b.lo() };
    let hi = if a.hi() < b.hi() { a.hi() } else { b.hi() };
    if lo < hi {
        hi.sub(lo)
    } else {
        Dyadic::zero()
    }
}

fn bounding_rect(boxes: &[Box2]) -> Rect {
    let mut r = boxes[0].as_rect();
    for b in &boxes[1..] {
        r = r.union(&b.as_rect());
    }
    r
}

/// Refine one cluster until it either drains (every box certified free of
/// an energy zero, so the cluster was spurious) or the surviving boxes fit
/// a rectangle that (a) certainly contains a point with energy below
/// eps/2, (b) stays within the original cluster footprint, and (c) has
/// diameter below `delta`. Discarding is by zero exclusion, so survivors
/// contract onto the energy zero and the rectangle shrinks to a point.
pub fn step2_refine(
    energy: &Energy,
    cluster: &[Box2],
    eps: &Dyadic,
    delta: &Dyadic,
    max_depth: u32,
) -> Result<Option<Rect>> {
    let half = eps.mul_pow2(-1);
    let mut live: Vec<Box2> = cluster.to_vec();
    loop {
        if live.is_empty() {
            return Ok(None);
        }
        let ivs: Vec<_> = live.iter().map(|b| energy.eval_box(b)).collect();
        let witnessed = ivs.iter().any(|iv| *iv.hi() < half);
        let rect = bounding_rect(&live);
        if witnessed && covered_by(&rect, cluster) && rect.diameter() < *delta {
            return Ok(Some(rect));
        }
        let mut next = Vec::with_capacity(live.len());
        for (b, iv) in live.iter().zip(&ivs) {
            if !iv.contains_zero() {
                continue;
            }
            if b.depth() >= max_depth {
                return Err(Error::MaxDepthExceeded {
                    stage: "singularity refinement",
                    max_depth,
                });
            }
            next.extend(b.split());
        }
        live = next;
    }
}

/// Full isolation pass: barrier, clustering, per-cluster refinement.
/// Clusters whose refinement drains are dropped; the rest come back as
/// disjoint rectangles, each holding exactly one singular point.
pub fn isolate_singularities(
    f: &BiPoly,
    b0: &Box2,
    ev_lb: &Dyadic,
    delta: &Dyadic,
    max_depth: u32,
) -> Result<IsolationResult> {
    let energy = Energy::of(f);
    let eps = step0_barrier(&energy, b0, ev_lb, max_depth)?;
    let clusters = step1_cluster(&energy, b0, &eps, max_depth)?;
    let refined: Vec<Result<Option<Rect>>> = clusters
        .par_iter()
        .map(|c| step2_refine(&energy, c, &eps, delta, max_depth))
        .collect();
    let mut regions = Vec::new();
    for (cluster, rect) in clusters.into_iter().zip(refined) {
        if let Some(rect) = rect? {
            regions.push(SingularRegion { rect, footprint: cluster });
        }
    }
    for i in 1..regions.len() {
        for j in 0..i {
            let (a, b) = (&regions[i].rect, &regions[j].rect);
            debug_assert!(
                !(a.x.overlaps_interior(&b.x) && a.y.overlaps_interior(&b.y)),
                "refined rectangles must be disjoint"
            );
        }
    }
    Ok(IsolationResult { eps_barrier: eps, regions })
}

/// Branching-degree report for one isolated singular (or regular) point.
#[derive(Clone, Debug)]
pub struct DegreeReport {
    /// Inner square containing the point.
    pub singular_point_box: Box2,
    /// Outer square, concentric and five times as wide.
    pub annulus_outer: Box2,
    /// Components with both endpoints outside, both inside, one of each.
    pub type_counts: (usize, usize, usize),
    /// Number of curve branches entering the inner square.
    pub degree: usize,
}

pub(crate) fn on_border(r: &Rect, p: &(Dyadic, Dyadic)) -> bool {
    ((p.0 == *r.x.lo() || p.0 == *r.x.hi()) && r.y.contains(&p.1))
        || ((p.1 == *r.y.lo() || p.1 == *r.y.hi()) && r.x.contains(&p.0))
}

/// Count curve branches crossing the annulus between `b2` and the
/// concentric square five times as wide. The ambient grid is an 8x square
/// so both annulus boundaries land on cell lines; the curve must be
/// nonsingular on the closed annulus.
pub fn annulus_degree(f: &BiPoly, b2: &Box2, max_depth: u32) -> Result<DegreeReport> {
    let w2 = b2.width();
    let (cx, cy) = b2.center();
    let root = Box2::centered(&cx, &cy, &w2.mul(&Dyadic::from_int(8)), 0);
    let b1 = Box2::centered(&cx, &cy, &w2.mul(&Dyadic::from_int(5)), b2.depth());
    let mut tree = SubdivisionTree::new(root.clone(), max_depth);
    let strips = [
        Rect::new(
            DyInterval::new(root.x().lo().clone(), b1.x().lo().clone()),
            root.y().clone(),
        ),
        Rect::new(
            DyInterval::new(b1.x().hi().clone(), root.x().hi().clone()),
            root.y().clone(),
        ),
        Rect::new(
            root.x().clone(),
            DyInterval::new(root.y().lo().clone(), b1.y().lo().clone()),
        ),
        Rect::new(
            root.x().clone(),
            DyInterval::new(b1.y().hi().clone(), root.y().hi().clone()),
        ),
        b2.as_rect(),
    ];
    for s in &strips {
        tree.carve_complement(s, "annulus setup")?;
    }
    let (graph, _) = run_extended_pv(f, &mut tree, &CollarOptions::default())?;
    let outer = b1.as_rect();
    let inner = b2.as_rect();
    let mut counts = (0usize, 0usize, 0usize);
    for comp in graph.components() {
        let ends: Vec<&(Dyadic, Dyadic)> = comp
            .iter()
            .filter(|&&v| graph.degree(v) == 1)
            .map(|&v| graph.point(v))
            .collect();
        if ends.is_empty() {
            return Err(Error::ClosedLoopInAnnulus {
                cx: cx.to_decimal_string(),
                cy: cy.to_decimal_string(),
            });
        }
        let o = ends.iter().filter(|p| on_border(&outer, p)).count();
        let i = ends.iter().filter(|p| on_border(&inner, p)).count();
        match (o, i) {
            (2, 0) => counts.0 += 1,
            (0, 2) => counts.1 += 1,
            (1, 1) => counts.2 += 1,
            _ => {
                return Err(Error::Invalid(format!(
                    "annulus component with endpoint pattern outer={o} inner={i}"
                )))
            }
        }
    }
    Ok(DegreeReport {
        singular_point_box: b2.clone(),
        annulus_outer: b1,
        type_counts: counts,
        degree: counts.2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use num_bigint::BigInt;

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

    fn energy_of(src: &str) -> Energy {
        Energy::of(&BiPoly::parse(src).unwrap())
    }

    #[test]
    fn barrier_respects_both_inputs() {
        let e = energy_of("X^2+Y^2-1");
        let b0 = square(-2, 2);
        // Small critical-value bound wins: the boundary minimum is 25.
        let eps = step0_barrier(&e, &b0, &dy(1, -1), 30).unwrap();
        assert!(eps.is_positive());
        assert!(eps <= dy(1, -1));
        // Huge bound: the boundary estimate wins and stays below the true
        // boundary minimum.
        let eps = step0_barrier(&e, &b0, &dy(1, 20), 30).unwrap();
        assert!(eps.is_positive());
        assert!(eps <= dy(25, 0));
    }

    #[test]
    fn barrier_is_immediate_when_gradient_never_vanishes() {
        // E = (X-Y)^2 + 2 >= 2 already holds at interval level in the
        // square form, so the root box clears without any splitting.
        let e = energy_of("X-Y");
        let eps = step0_barrier(&e, &square(-1, 1), &dy(1, 0), 10).unwrap();
        assert_eq!(eps, dy(1, 0));
    }

    #[test]
    fn barrier_rejects_boundary_singularity() {
        // Node at the origin, placed on the region boundary.
        let e = energy_of("Y^2-X^3-X^2");
        let err = step0_barrier(&e, &square(0, 2), &dy(1, 0), 12);
        assert!(matches!(err, Err(Error::SingularOnBoundary { max_depth: 12 })));
    }

    #[test]
    fn smooth_curve_produces_no_clusters() {
        // min E = 1 at the origin for the unit circle; eps = 1/2 drains all.
        let e = energy_of("X^2+Y^2-1");
        let clusters = step1_cluster(&e, &square(-2, 2), &dy(1, -1), 30).unwrap();
        assert!(clusters.is_empty());
    }

    #[test]
    fn node_gives_one_cluster_at_origin() {
        let f = BiPoly::parse("Y^2-X^3-X^2").unwrap();
        let e = Energy::of(&f);
        let b0 = square(-2, 2);
        let eps =
            oracle::min_positive_critical_estimate(&f.sq_plus_grad_sq(), &b0.as_rect(), 6)
                .expect("positive local minimum exists");
        let clusters = step1_cluster(&e, &b0, &eps, 30).unwrap();
        assert_eq!(clusters.len(), 1);
        let rect = bounding_rect(&clusters[0]);
        assert!(rect.contains_point(&dy(0, 0), &dy(0, 0)));
        // The nearby positive critical point at (-2/3, 0) must stay out.
        assert!(!rect.contains_point(&dy(-43, -6), &dy(0, 0)));
    }

    #[test]
    fn crossing_circles_give_two_clusters() {
        let f = BiPoly::parse("(X^2+Y^2-4)*((X-2)^2+Y^2-1)").unwrap();
        let e = Energy::of(&f);
        let b0 = square(-4, 4);
        let eps =
            oracle::min_positive_critical_estimate(&f.sq_plus_grad_sq(), &b0.as_rect(), 6)
                .expect("positive local minimum exists");
        let clusters = step1_cluster(&e, &b0, &eps, 30).unwrap();
        assert_eq!(clusters.len(), 2);
        // Crossings sit at x = 7/4, y = +-sqrt(15)/4.
        for c in &clusters {
            let r = bounding_rect(c);
            let (mx, my) = (r.center().0, r.center().1);
            assert!(mx > dy(3, -1) && mx < dy(5, -1), "x center {mx}");
            assert!(my.abs() > dy(1, -1) && my.abs() < dy(3, -1), "y center {my}");
        }
    }

    #[test]
    fn cusp_isolates_to_a_tiny_rectangle() {
        let f = BiPoly::parse("Y^2-X^3").unwrap();
        let b0 = square(-1, 1);
        let ev =
            oracle::min_positive_critical_estimate(&f.sq_plus_grad_sq(), &b0.as_rect(), 6)
                .unwrap_or_else(|| dy(1, -8));
        let delta = dy(1, -6);
        let iso = isolate_singularities(&f, &b0, &ev, &delta, 40).unwrap();
        assert_eq!(iso.regions.len(), 1);
        let r = &iso.regions[0];
        assert!(r.rect.contains_point(&dy(0, 0), &dy(0, 0)));
        assert!(r.rect.diameter() < delta);
        assert!(covered_by(&r.rect, &r.footprint));
    }

    #[test]
    fn near_singular_cluster_drains_to_none() {
        // Smooth perturbation of a nodal curve: E has a small positive
        // minimum near (2/3, 0) but no zero. An oversized eps accepts a
        // cluster there; refinement must drain it.
        let f = BiPoly::parse("5*Y^2-5*X^2+5*X^3+1").unwrap();
        let e = Energy::of(&f);
        let b0 = square(-2, 2);
        let eps = dy(1, -3);
        let clusters = step1_cluster(&e, &b0, &eps, 30).unwrap();
        assert!(!clusters.is_empty());
        for c in &clusters {
            let out = step2_refine(&e, c, &eps, &dy(1, 0), 40).unwrap();
            assert!(out.is_none());
        }
    }

    #[test]
    fn step_two_succeeds_fast_with_loose_delta() {
        let f = BiPoly::parse("Y^2-X^3").unwrap();
        let e = Energy::of(&f);
        let b0 = square(-1, 1);
        let eps = dy(1, -8);
        let clusters = step1_cluster(&e, &b0, &eps, 30).unwrap();
        assert_eq!(clusters.len(), 1);
        let tight = step2_refine(&e, &clusters[0], &eps, &dy(1, -6), 40).unwrap().unwrap();
        let loose = step2_refine(&e, &clusters[0], &eps, &dy(1, 0), 40).unwrap().unwrap();
        assert!(loose.diameter() >= tight.diameter());
    }

    fn small_box(half_exp: i64) -> Box2 {
        Box2::centered(&dy(0, 0), &dy(0, 0), &dy(1, half_exp + 1), 0)
    }

    #[test]
    fn node_has_degree_four() {
        let f = BiPoly::parse("Y^2-X^3-X^2").unwrap();
        let report = annulus_degree(&f, &small_box(-4), 30).unwrap();
        assert_eq!(report.degree, 4);
        assert_eq!(report.type_counts.2, 4);
        let oracle_count =
            oracle::loop_branch_count(&f, &dy(0, 0), &dy(0, 0), &dy(1, -3)).unwrap();
        assert_eq!(report.degree as u32, oracle_count);
    }

    #[test]
    fn cusp_has_degree_two() {
        let f = BiPoly::parse("Y^2-X^3").unwrap();
        let report = annulus_degree(&f, &small_box(-4), 30).unwrap();
        assert_eq!(report.degree, 2);
        let oracle_count =
            oracle::loop_branch_count(&f, &dy(0, 0), &dy(0, 0), &dy(1, -3)).unwrap();
        assert_eq!(report.degree as u32, oracle_count);
    }

    #[test]
    fn lemniscate_center_has_degree_four() {
        let f = BiPoly::parse("(X^2+Y^2)^2-4*X^2+4*Y^2").unwrap();
        let report = annulus_degree(&f, &small_box(-4), 30).unwrap();
        assert_eq!(report.degree, 4);
    }

    #[test]
    fn degree_is_stable_under_shrinking() {
        for src in ["Y^2-X^3-X^2", "Y^2-X^3", "(X^2+Y^2)^2-4*X^2+4*Y^2"] {
            let f = BiPoly::parse(src).unwrap();
            let a = annulus_degree(&f, &small_box(-4), 30).unwrap().degree;
            let b = annulus_degree(&f, &small_box(-5), 30).unwrap().degree;
            assert_eq!(a, b, "{src}");
        }
    }

    #[test]
    fn regular_point_has_degree_two() {
        let f = BiPoly::parse("X^2+Y^2-1").unwrap();
        let b2 = Box2::centered(&dy(1, 0), &dy(0, 0), &dy(1, -3), 0);
        let report = annulus_degree(&f, &b2, 30).unwrap();
        assert_eq!(report.degree, 2);
        assert_eq!(report.type_counts, (0, 0, 2));
    }
}
