//! Interior subdivision mesher.
//!
//! Three phases over region-labeled leaves:
//! 1. split every leaf until the curve provably misses it (the box interval
//!    excludes zero; leaf is discarded) or the gradient provably does not
//!    vanish on it (leaf is kept),
//! 2. balance kept leaves to neighbor width ratio at most 2, re-testing
//!    exclusion on freshly created children,
//! 3. place a vertex at the midpoint of every leaf-side segment whose
//!    perturbed endpoint signs differ and connect vertices inside each box.
//!
//! The perturbation rule is global and structural: an exact zero at a sample
//! point counts as positive, which amounts to meshing f - epsilon for an
//! infinitesimal epsilon. Both predicates are inherited by sub-boxes, so a
//! decision once made never has to be revisited.
//!
//! This module alone treats the region boundary naively: a curve touching
//! the boundary can gain or lose crossings there. The collar module wraps
//! these phases to repair exactly that.

use crate::graph::{PLGraph, VertexTag};
use crate::numeric::{Box2, Dyadic, Sign, SIDES};
use crate::poly::BiPoly;
use crate::subdivision::{Label, NodeId, Segment, SegmentKind, SubdivisionTree};
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::HashMap;

/// Polynomial plus cached derivative polynomials and corner signs.
pub struct CurveEval<'a> {
    f: &'a BiPoly,
    fx: BiPoly,
    fy: BiPoly,
    signs: HashMap<(Dyadic, Dyadic), Sign>,
}

impl<'a> CurveEval<'a> {
    pub fn new(f: &'a BiPoly) -> Self {
        CurveEval { f, fx: f.dx(), fy: f.dy(), signs: HashMap::new() }
    }

    pub fn poly(&self) -> &BiPoly {
        self.f
    }

    /// Curve-exclusion test: true guarantees f has no zero on the box.
    pub fn c0(&self, b: &Box2) -> bool {
        !self.f.eval_box(b).contains_zero()
    }

    /// Gradient-exclusion test: true guarantees the gradient has no zero on
    /// the box, which also pins one partial's sign and makes the curve a
    /// monotone graph there. Inherited by every sub-box.
    pub fn c1(&self, b: &Box2) -> bool {
        let gx = self.fx.eval_box(b);
        let gy = self.fy.eval_box(b);
        !gx.pow(2).add(&gy.pow(2)).contains_zero()
    }

    /// Perturbed sign at a point, cached: shared corners are evaluated once.
    pub fn sign(&mut self, p: &(Dyadic, Dyadic)) -> Sign {
        if let Some(&s) = self.signs.get(p) {
            return s;
        }
        let s = self.f.sign_at(&p.0, &p.1);
        self.signs.insert(p.clone(), s);
        s
    }
}

pub fn pred_c0(f: &BiPoly, b: &Box2) -> bool {
    CurveEval::new(f).c0(b)
}

pub fn pred_c1(f: &BiPoly, b: &Box2) -> bool {
    CurveEval::new(f).c1(b)
}

/// Split every region leaf until one of the predicates holds. Work proceeds
/// in breadth-first waves; predicate evaluation within a wave may run in
/// parallel, results are applied in leaf order so the outcome is identical
/// either way.
pub fn phase1(ev: &CurveEval, tree: &mut SubdivisionTree, stage: &'static str) -> Result<()> {
    let mut frontier = tree.leaves_labeled(Label::Region);
    while !frontier.is_empty() {
        let boxes: Vec<Box2> = frontier.iter().map(|&id| tree.box_of(id)).collect();
        let decide = |b: &Box2| {
            let c0 = ev.c0(b);
            (c0, !c0 && ev.c1(b))
        };
        let decisions: Vec<(bool, bool)> = if boxes.len() >= 64 {
            boxes.par_iter().map(decide).collect()
        } else {
            boxes.iter().map(decide).collect()
        };
        let mut next = Vec::new();
        for (&id, &(c0, c1)) in frontier.iter().zip(&decisions) {
            if c0 {
                tree.set_label(id, Label::Discarded);
            } else if !c1 {
                next.extend(tree.split(id, stage)?);
            }
        }
        frontier = next;
    }
    Ok(())
}

/// Neighbor-width balancing with the curve-exclusion retest on children.
pub fn phase2(ev: &CurveEval, tree: &mut SubdivisionTree, stage: &'static str) -> Result<()> {
    tree.balance(stage, |t, kids| {
        for k in kids {
            if t.label(k) == Label::Region && ev.c0(&t.box_of(k)) {
                t.set_label(k, Label::Discarded);
            }
        }
    })
}

/// Vertex for one segment: the exact midpoint, present iff the perturbed
/// endpoint signs differ.
pub fn phase3_vertex(ev: &mut CurveEval, seg: &Segment) -> Option<(Dyadic, Dyadic)> {
    if ev.sign(&seg.a) != ev.sign(&seg.b) {
        Some(seg.midpoint())
    } else {
        None
    }
}

/// Sort key walking the box boundary counterclockwise from the SW corner.
/// Every vertex lies strictly inside one side (segment midpoints are never
/// box corners), so the side is determined by exact coordinate comparisons.
fn walk_key(b: &Box2, p: &(Dyadic, Dyadic)) -> (u8, Dyadic) {
    if p.1 == *b.y().lo() {
        (0, p.0.clone())
    } else if p.0 == *b.x().hi() {
        (1, p.1.clone())
    } else if p.1 == *b.y().hi() {
        (2, p.0.neg())
    } else {
        debug_assert_eq!(p.0, *b.x().lo());
        (3, p.1.neg())
    }
}

/// Connect the boundary vertices of one box: one edge for two vertices; for
/// four, the unique non-crossing pairing that does not join the two vertices
/// sharing a side. Any other cardinality indicates an upstream sign bug and
/// aborts.
pub fn phase3_connect(
    tree: &SubdivisionTree,
    id: NodeId,
    b: &Box2,
    verts: &mut [(usize, (u8, Dyadic))],
) -> Result<Vec<(usize, usize)>> {
    match verts.len() {
        0 => Ok(Vec::new()),
        2 => Ok(vec![(verts[0].0, verts[1].0)]),
        4 => {
            verts.sort_by(|a, b| a.1.cmp(&b.1));
            let side_rank = |i: usize| verts[i].1 .0;
            let mut same = None;
            for i in 0..4 {
                if side_rank(i) == side_rank((i + 1) % 4) {
                    same = Some(i);
                    break;
                }
            }
            let Some(i) = same else {
                return Err(Error::CardinalityViolation { cell: tree.coords(id), count: 4 });
            };
            let v = |k: usize| verts[(i + k) % 4].0;
            let _ = b;
            Ok(vec![(v(1), v(2)), (v(3), v(0))])
        }
        n => Err(Error::CardinalityViolation { cell: tree.coords(id), count: n }),
    }
}

/// Boundary decomposition of one kept leaf: interior segments toward other
/// non-complement leaves, boundary segments along the region boundary.
pub fn leaf_segments(tree: &SubdivisionTree, id: NodeId) -> Vec<Segment> {
    let mut segs = Vec::new();
    for side in SIDES {
        let nbs = tree.neighbors_on_side(id, side);
        if nbs.is_empty() {
            let (a, b) = tree.box_of(id).side_segment(side);
            segs.push(Segment { a, b, kind: SegmentKind::Boundary });
            continue;
        }
        for (nid, seg) in nbs {
            if tree.label(nid) == Label::Complement {
                segs.push(Segment { a: seg.a, b: seg.b, kind: SegmentKind::Boundary });
            } else {
                segs.push(seg);
            }
        }
    }
    segs
}

/// Phase 3 over all kept leaves, appending to `graph`.
pub fn phase3(
    ev: &mut CurveEval,
    tree: &SubdivisionTree,
    graph: &mut PLGraph,
) -> Result<()> {
    for id in tree.leaves_labeled(Label::Region) {
        let b = tree.box_of(id);
        let mut verts: Vec<(usize, (u8, Dyadic))> = Vec::new();
        for seg in leaf_segments(tree, id) {
            if let Some(p) = phase3_vertex(ev, &seg) {
                let key = walk_key(&b, &p);
                let v = graph.add_vertex(p, VertexTag::SegmentMidpoint);
                verts.push((v, key));
            }
        }
        for (a, bb) in phase3_connect(tree, id, &b, &mut verts)? {
            graph.add_edge(a, bb);
        }
    }
    Ok(())
}

/// The naive pipeline: all three phases, region boundary untreated.
pub fn run_pv(f: &BiPoly, tree: &mut SubdivisionTree) -> Result<PLGraph> {
    let mut ev = CurveEval::new(f);
    phase1(&ev, tree, "interior subdivision")?;
    phase2(&ev, tree, "balancing")?;
    let mut graph = PLGraph::new();
    phase3(&mut ev, tree, &mut graph)?;
    Ok(graph)
}
