//! Boundary collar: certified treatment of the curve near the region
//! boundary.
//!
//! The interior phases are blind to what the curve does just outside the
//! region: a branch may dip across the boundary and come back (losing a
//! component) or graze it from outside (gaining nothing where something is
//! owed under perturbation). To repair this, every kept leaf touching the
//! region boundary gets a complementary box: its mirror image across the
//! shared side, lying outside the region. A kept boundary leaf is accepted
//! only once all its complementary boxes satisfy one of the two exclusion
//! predicates; otherwise the leaf is split and the smaller mirrors retried.
//!
//! Accepted complementary boxes where the curve may still be present are
//! classified by the perturbed corner signs relative to the shared side.
//! Two sign layouts (uniform, and a split parallel to the shared side) are
//! transient: the curve can touch the shared side without crossing it, so a
//! small two-edge chevron is inserted just inside the partner to represent
//! the grazing branch. The other layouts already leave their mark as
//! segment-midpoint vertices and need nothing extra.

use crate::graph::{PLGraph, VertexTag};
use crate::numeric::{Box2, CellCoords, Dyadic, Side, Sign, SIDES};
use crate::poly::BiPoly;
use crate::pv::{self, CurveEval};
use crate::subdivision::{Label, SubdivisionTree};
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashSet};

/// Corner-sign layout of a complementary box relative to one partner.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TypeTag {
    /// All four corners share one sign.
    A,
    /// The shared-side pair and the far pair carry opposite signs.
    B,
    /// Exactly one corner deviates and it lies on the shared side.
    C,
    /// Signs split across the box, one lateral side per sign.
    D,
    /// Exactly one corner deviates and it lies away from the shared side.
    E,
}

impl TypeTag {
    pub fn as_char(&self) -> char {
        match self {
            TypeTag::A => 'a',
            TypeTag::B => 'b',
            TypeTag::C => 'c',
            TypeTag::D => 'd',
            TypeTag::E => 'e',
        }
    }
}

/// Which exclusion predicate admitted the box.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CollarStatus {
    /// The curve provably misses the box.
    CurveExcluded,
    /// The gradient provably does not vanish on the box.
    GradientNonvanishing,
}

/// One partner relation of a complementary box.
#[derive(Clone, Debug)]
pub struct CollarPartner {
    /// Kept region leaf the box mirrors.
    pub leaf: CellCoords,
    /// Side of the partner leaf that faces the complementary box.
    pub shared_side: Side,
    /// Sign layout relative to this partner; absent when the curve is
    /// excluded from the box.
    pub type_tag: Option<TypeTag>,
    /// True when a grazing branch is possible and a chevron was inserted.
    pub transient: bool,
}

/// Mirror box outside the region, flush with one or two kept leaves.
/// Two partners arise at concave region corners where the mirrors of two
/// perpendicular boundary leaves coincide.
#[derive(Clone, Debug)]
pub struct ComplementaryBox {
    /// Cell address; may lie outside the root grid.
    pub cell: CellCoords,
    pub status: CollarStatus,
    /// Perturbed signs at the corners, counterclockwise from lower-left.
    pub corner_signs: [Sign; 4],
    pub partners: Vec<CollarPartner>,
}

/// Corner indices on the shared side and away from it, aligned so that
/// `far[i]` is the corner above/beside `shared[i]` on the same lateral
/// side. Corner order is counterclockwise from lower-left.
fn shared_far_indices(shared: Side) -> ([usize; 2], [usize; 2]) {
    match shared {
        Side::South => ([0, 1], [3, 2]),
        Side::East => ([1, 2], [0, 3]),
        Side::North => ([2, 3], [1, 0]),
        Side::West => ([3, 0], [2, 1]),
    }
}

/// Classify a complementary box from its corner signs. `shared` is the side
/// of the complementary box that touches the partner. The alternating
/// (diagonal) layout cannot occur while the gradient test holds, so it
/// reports an upstream bug rather than a curve feature.
pub fn classify_complementary(
    signs: &[Sign; 4],
    shared: Side,
    cell: CellCoords,
) -> Result<(TypeTag, bool)> {
    let (s, f) = shared_far_indices(shared);
    let (s1, s2) = (signs[s[0]], signs[s[1]]);
    let (f1, f2) = (signs[f[0]], signs[f[1]]);
    let tag = match (s1 == s2, f1 == f2) {
        (true, true) => {
            if s1 == f1 {
                TypeTag::A
            } else {
                TypeTag::B
            }
        }
        (true, false) => TypeTag::E,
        (false, true) => TypeTag::C,
        (false, false) => {
            if s1 == f1 {
                TypeTag::D
            } else {
                return Err(Error::AlternatingPattern { cell });
            }
        }
    };
    Ok((tag, matches!(tag, TypeTag::A | TypeTag::B)))
}

/// The two children of `cell` adjacent to `side`, in ascending grid order.
fn children_on_side(cell: CellCoords, side: Side) -> [CellCoords; 2] {
    let k = cell.children();
    match side {
        Side::South => [k[0], k[1]],
        Side::North => [k[2], k[3]],
        Side::West => [k[0], k[2]],
        Side::East => [k[1], k[3]],
    }
}

impl ComplementaryBox {
    /// Split into the two half-width children flush with the region
    /// boundary, re-pairing each with the matching partner child. The
    /// exclusion predicates are inherited by sub-boxes, so the parent's
    /// status stays valid; corner signs and layouts are recomputed.
    pub fn half_split(
        &self,
        tree: &SubdivisionTree,
        ev: &mut CurveEval,
    ) -> Result<(ComplementaryBox, ComplementaryBox)> {
        if self.partners.len() != 1 {
            return Err(Error::Invalid("half-split requires a single-partner box".into()));
        }
        let partner = &self.partners[0];
        let mirror_shared = partner.shared_side.opposite();
        let mcells = children_on_side(self.cell, mirror_shared);
        let pcells = children_on_side(partner.leaf, partner.shared_side);
        let mut halves = Vec::with_capacity(2);
        for (mc, pc) in mcells.into_iter().zip(pcells) {
            halves.push(build_collar_box(tree, ev, mc, &[(pc, partner.shared_side)])?);
        }
        let second = halves.pop().unwrap();
        Ok((halves.pop().unwrap(), second))
    }
}

/// Chevron vertices for a transient partner: u and w at the quarter points
/// of the shared side, v at the side midpoint pushed a quarter width into
/// the partner. All coordinates are exact.
pub fn gadget_vertices(partner: &Box2, side: Side) -> [(Dyadic, Dyadic); 3] {
    let (p, q) = partner.side_segment(side);
    let qx = q.0.sub(&p.0).mul_pow2(-2);
    let qy = q.1.sub(&p.1).mul_pow2(-2);
    let u = (p.0.add(&qx), p.1.add(&qy));
    let w = (q.0.sub(&qx), q.1.sub(&qy));
    let mid = (Dyadic::midpoint(&p.0, &q.0), Dyadic::midpoint(&p.1, &q.1));
    let (ox, oy) = side.offset();
    let depth = partner.width().mul_pow2(-2);
    let v = (
        mid.0.sub(&depth.mul(&Dyadic::from_int(ox))),
        mid.1.sub(&depth.mul(&Dyadic::from_int(oy))),
    );
    [u, v, w]
}

/// Extended-run options.
#[derive(Clone, Default)]
pub struct CollarOptions {
    /// When set, any complementary box the curve may enter is forced down
    /// to width at most eps/4 by splitting its partner.
    pub collar_eps: Option<Dyadic>,
    /// When set, every box kept for the graph is split down to width at
    /// most eps/4, pinning the output within eps of the approximated curve.
    pub curve_eps: Option<Dyadic>,
}

/// True when the leaf side faces the outside of the region: off the grid,
/// or against at least one complement leaf.
fn is_boundary_side(tree: &SubdivisionTree, id: crate::subdivision::NodeId, side: Side) -> bool {
    let nbs = tree.neighbors_on_side(id, side);
    nbs.is_empty() || nbs.iter().any(|(n, _)| tree.label(*n) == Label::Complement)
}

/// True when the mirror pokes through the complement back into the region
/// (thin carve, or a side facing a mix of complement and region cells).
fn mirror_overlaps_region(tree: &SubdivisionTree, mbox: &Box2) -> bool {
    tree.leaves_overlapping_interior(&mbox.as_rect())
        .iter()
        .any(|&l| tree.label(l) != Label::Complement)
}

enum Act {
    Discard,
    Keep,
    SplitCurve,
    SplitCollar { mirror: CellCoords, overlap: bool },
}

/// Interior subdivision with the collar acceptance conditions folded in:
/// a leaf with a boundary side is kept only when every mirror box is clear
/// of the region and passes one of the exclusion predicates (plus the
/// optional width cap for mirrors the curve may enter).
pub fn phase1_extended(
    ev: &CurveEval,
    tree: &mut SubdivisionTree,
    opts: &CollarOptions,
) -> Result<()> {
    let eps4 = opts.collar_eps.as_ref().map(|e| e.mul_pow2(-2));
    let cap4 = opts.curve_eps.as_ref().map(|e| e.mul_pow2(-2));
    let mut frontier = tree.leaves_labeled(Label::Region);
    while !frontier.is_empty() {
        let acts: Vec<Act> = {
            let t: &SubdivisionTree = tree;
            let decide = |&id: &crate::subdivision::NodeId| {
                let b = t.box_of(id);
                if ev.c0(&b) {
                    return Act::Discard;
                }
                if !ev.c1(&b) {
                    return Act::SplitCurve;
                }
                if let Some(c4) = &cap4 {
                    if b.width() > *c4 {
                        return Act::SplitCurve;
                    }
                }
                for side in SIDES {
                    if !is_boundary_side(t, id, side) {
                        continue;
                    }
                    let mcell = t.coords(id).step(side);
                    let mbox = t.box_of_coords(mcell);
                    if mirror_overlaps_region(t, &mbox) {
                        return Act::SplitCollar { mirror: mcell, overlap: true };
                    }
                    if !ev.c0(&mbox) {
                        if !ev.c1(&mbox) {
                            return Act::SplitCollar { mirror: mcell, overlap: false };
                        }
                        if let Some(e4) = &eps4 {
                            if b.width() > *e4 {
                                return Act::SplitCollar { mirror: mcell, overlap: false };
                            }
                        }
                    }
                }
                Act::Keep
            };
            if frontier.len() >= 64 {
                frontier.par_iter().map(decide).collect()
            } else {
                frontier.iter().map(decide).collect()
            }
        };
        let mut next = Vec::new();
        for (&id, act) in frontier.iter().zip(&acts) {
            match act {
                Act::Discard => tree.set_label(id, Label::Discarded),
                Act::Keep => {}
                Act::SplitCurve => next.extend(tree.split(id, "interior subdivision")?),
                Act::SplitCollar { mirror, overlap } => {
                    match tree.split(id, "collar refinement") {
                        Ok(kids) => next.extend(kids),
                        Err(Error::MaxDepthExceeded { .. }) if *overlap => {
                            return Err(Error::CollarInterference { cell: *mirror });
                        }
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(())
}

/// Mirror cells of all kept boundary leaves, with their partner relations.
/// Coincident mirrors (concave corners) collect both partners under one key.
fn collect_mirrors(tree: &SubdivisionTree) -> BTreeMap<CellCoords, Vec<(CellCoords, Side)>> {
    let mut mirrors: BTreeMap<CellCoords, Vec<(CellCoords, Side)>> = BTreeMap::new();
    for id in tree.leaves_labeled(Label::Region) {
        for side in SIDES {
            if is_boundary_side(tree, id, side) {
                let c = tree.coords(id);
                mirrors.entry(c.step(side)).or_default().push((c, side));
            }
        }
    }
    for partners in mirrors.values_mut() {
        partners.sort_by_key(|&(leaf, side)| (leaf, side.offset()));
    }
    mirrors
}

/// Partners whose mirror strictly contains another mirror, mapped to the
/// offending (larger) mirror cell. Splitting those partners shrinks the
/// larger mirror toward coincidence or disjointness.
fn nesting_conflicts(
    mirrors: &BTreeMap<CellCoords, Vec<(CellCoords, Side)>>,
) -> BTreeMap<CellCoords, CellCoords> {
    let cells: HashSet<CellCoords> = mirrors.keys().copied().collect();
    let min_depth = mirrors.keys().map(|c| c.depth).min().unwrap_or(0);
    let mut split = BTreeMap::new();
    for cell in mirrors.keys() {
        for d in min_depth..cell.depth {
            let anc = cell.ancestor_at(d);
            if cells.contains(&anc) {
                for &(leaf, _) in &mirrors[&anc] {
                    split.insert(leaf, anc);
                }
            }
        }
    }
    split
}

fn build_collar_box(
    tree: &SubdivisionTree,
    ev: &mut CurveEval,
    cell: CellCoords,
    partners: &[(CellCoords, Side)],
) -> Result<ComplementaryBox> {
    let mbox = tree.box_of_coords(cell);
    let status = if ev.c0(&mbox) {
        CollarStatus::CurveExcluded
    } else {
        debug_assert!(ev.c1(&mbox));
        CollarStatus::GradientNonvanishing
    };
    let corners = mbox.corners();
    let signs = [
        ev.sign(&corners[0]),
        ev.sign(&corners[1]),
        ev.sign(&corners[2]),
        ev.sign(&corners[3]),
    ];
    let mut plist = Vec::with_capacity(partners.len());
    for &(leaf, side) in partners {
        let (tag, transient) = if status == CollarStatus::GradientNonvanishing {
            let (t, tr) = classify_complementary(&signs, side.opposite(), cell)?;
            (Some(t), tr)
        } else {
            (None, false)
        };
        plist.push(CollarPartner { leaf, shared_side: side, type_tag: tag, transient });
    }
    Ok(ComplementaryBox { cell, status, corner_signs: signs, partners: plist })
}

/// Full boundary-aware pipeline: collar-conditioned subdivision, balancing,
/// mirror interference resolution to a fixpoint, vertex placement, and
/// chevron insertion for transient partners. Returns the augmented graph
/// and the final collar.
pub fn run_extended_pv(
    f: &BiPoly,
    tree: &mut SubdivisionTree,
    opts: &CollarOptions,
) -> Result<(PLGraph, Vec<ComplementaryBox>)> {
    let mut ev = CurveEval::new(f);
    loop {
        phase1_extended(&ev, tree, opts)?;
        pv::phase2(&ev, tree, "balancing")?;
        let mirrors = collect_mirrors(tree);
        let conflicts = nesting_conflicts(&mirrors);
        if conflicts.is_empty() {
            let mut collar = Vec::with_capacity(mirrors.len());
            for (cell, partners) in &mirrors {
                collar.push(build_collar_box(tree, &mut ev, *cell, partners)?);
            }
            let mut graph = PLGraph::new();
            pv::phase3(&mut ev, tree, &mut graph)?;
            for cb in &collar {
                for p in &cb.partners {
                    if !p.transient {
                        continue;
                    }
                    let pbox = tree.box_of_coords(p.leaf);
                    let [u, v, w] = gadget_vertices(&pbox, p.shared_side);
                    let ui = graph.add_vertex(u, VertexTag::AugmentedCollar);
                    let vi = graph.add_vertex(v, VertexTag::AugmentedCollar);
                    let wi = graph.add_vertex(w, VertexTag::AugmentedCollar);
                    graph.add_edge(ui, vi);
                    graph.add_edge(vi, wi);
                }
            }
            return Ok((graph, collar));
        }
        for (leaf, mirror) in conflicts {
            let id = tree.leaf_at(leaf).expect("conflicting partner must be a leaf");
            match tree.split(id, "collar refinement") {
                Ok(_) => {}
                Err(Error::MaxDepthExceeded { .. }) => {
                    return Err(Error::CollarInterference { cell: mirror });
                }
                Err(e) => return Err(e),
            }
        }
    }
}
