//! Quadtree subdivision of a dyadic square region.
//!
//! The tree is an arena of nodes addressed by [`NodeId`]; every leaf carries
//! a [`Label`]. `Region` leaves are the live part of the region of interest,
//! `Discarded` leaves are parts of it proven curve-free, and `Complement`
//! leaves lie outside the region of interest entirely (excluded rectangles,
//! annulus holes). The *geometry* of the region is the union of the
//! non-complement leaves; predicates only ever shrink the live set, never
//! the geometry.
//!
//! Leaves are indexed by [`CellCoords`] (depth plus grid position), which
//! makes neighbor lookup, mirror boxes across the region boundary, and
//! coincidence checks between them exact integer arithmetic.

use crate::numeric::{Box2, CellCoords, DyInterval, Dyadic, Rect, Side, SIDES};
use crate::{Error, Result};
use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Label {
    /// Inside the region of interest and still live.
    Region,
    /// Outside the region of interest.
    Complement,
    /// Inside the region of interest, proven curve-free.
    Discarded,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct NodeId(u32);

#[derive(Clone, Debug)]
enum NodeKind {
    Leaf(Label),
    Internal([NodeId; 4]),
}

#[derive(Clone, Debug)]
struct Node {
    coords: CellCoords,
    kind: NodeKind,
}

/// A 1-dimensional piece of a leaf side: either the shared edge of two
/// neighboring leaves or a piece of the region boundary. Never degenerate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Segment {
    pub a: (Dyadic, Dyadic),
    pub b: (Dyadic, Dyadic),
    pub kind: SegmentKind,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SegmentKind {
    Interior,
    Boundary,
}

impl Segment {
    pub fn midpoint(&self) -> (Dyadic, Dyadic) {
        (
            Dyadic::midpoint(&self.a.0, &self.b.0),
            Dyadic::midpoint(&self.a.1, &self.b.1),
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CornerKind {
    Convex,
    Concave,
}

/// Boundary decomposition of the region of interest.
#[derive(Clone, Debug)]
pub struct RegionGeometry {
    /// Boundary pieces: the owning non-complement leaf, the side it faces,
    /// and the segment itself.
    pub pieces: Vec<(NodeId, Side, Segment)>,
    /// Grid corners of the boundary, sorted by coordinates.
    pub corners: Vec<((Dyadic, Dyadic), CornerKind)>,
    /// Connected pieces of the boundary curve.
    pub loops: usize,
}

pub struct SubdivisionTree {
    root: Box2,
    nodes: Vec<Node>,
    leaf_index: HashMap<CellCoords, NodeId>,
    max_depth: u32,
}

impl SubdivisionTree {
    pub fn new(root: Box2, max_depth: u32) -> Self {
        assert_eq!(root.depth(), 0, "root box is at depth 0 by convention");
        let coords = CellCoords { depth: 0, gx: 0, gy: 0 };
        let mut leaf_index = HashMap::new();
        leaf_index.insert(coords, NodeId(0));
        SubdivisionTree {
            root,
            nodes: vec![Node { coords, kind: NodeKind::Leaf(Label::Region) }],
            leaf_index,
            max_depth,
        }
    }

    pub fn root_box(&self) -> &Box2 {
        &self.root
    }

    pub fn max_depth(&self) -> u32 {
        self.max_depth
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        matches!(self.nodes[id.0 as usize].kind, NodeKind::Leaf(_))
    }

    pub fn label(&self, id: NodeId) -> Label {
        match self.nodes[id.0 as usize].kind {
            NodeKind::Leaf(l) => l,
            NodeKind::Internal(_) => panic!("label of internal node"),
        }
    }

    pub fn set_label(&mut self, id: NodeId, label: Label) {
        match &mut self.nodes[id.0 as usize].kind {
            NodeKind::Leaf(l) => *l = label,
            NodeKind::Internal(_) => panic!("label of internal node"),
        }
    }

    pub fn coords(&self, id: NodeId) -> CellCoords {
        self.nodes[id.0 as usize].coords
    }

    /// All leaves in arena (creation) order; deterministic for a
    /// deterministic split sequence.
    pub fn leaves(&self) -> Vec<NodeId> {
        (0..self.nodes.len() as u32)
            .map(NodeId)
            .filter(|&id| self.is_leaf(id))
            .collect()
    }

    pub fn leaves_labeled(&self, label: Label) -> Vec<NodeId> {
        self.leaves().into_iter().filter(|&id| self.label(id) == label).collect()
    }

    pub fn max_leaf_depth(&self) -> u32 {
        self.leaves().iter().map(|&id| self.coords(id).depth).max().unwrap_or(0)
    }

    /// Geometry of an arbitrary grid cell, including cells outside the root
    /// grid (negative or overflowing coordinates), which arise as mirror
    /// boxes of boundary leaves.
    pub fn box_of_coords(&self, c: CellCoords) -> Box2 {
        let w = self.root.width().mul_pow2(-(c.depth as i64));
        let x_lo = self.root.x().lo().add(&w.mul(&Dyadic::from_int(c.gx)));
        let y_lo = self.root.y().lo().add(&w.mul(&Dyadic::from_int(c.gy)));
        Box2::new(
            DyInterval::new(x_lo.clone(), x_lo.add(&w)),
            DyInterval::new(y_lo.clone(), y_lo.add(&w)),
            c.depth,
        )
    }

    pub fn box_of(&self, id: NodeId) -> Box2 {
        self.box_of_coords(self.coords(id))
    }

    pub fn in_grid(&self, c: CellCoords) -> bool {
        let n = 1i64 << c.depth;
        c.gx >= 0 && c.gy >= 0 && c.gx < n && c.gy < n
    }

    /// The leaf whose cell is exactly `c`, if the tree has one.
    pub fn leaf_at(&self, c: CellCoords) -> Option<NodeId> {
        self.leaf_index.get(&c).copied()
    }

    /// The leaf whose cell contains `c` (possibly `c` itself); `None` when
    /// `c` is outside the grid or subdivided below cell size.
    pub fn leaf_covering(&self, c: CellCoords) -> Option<NodeId> {
        if !self.in_grid(c) {
            return None;
        }
        let mut cur = NodeId(0);
        for level in 0..c.depth {
            match self.nodes[cur.0 as usize].kind {
                NodeKind::Leaf(_) => return Some(cur),
                NodeKind::Internal(kids) => {
                    let shift = c.depth - 1 - level;
                    let bx = (c.gx >> shift) & 1;
                    let by = (c.gy >> shift) & 1;
                    cur = kids[(by * 2 + bx) as usize];
                }
            }
        }
        if self.is_leaf(cur) {
            Some(cur)
        } else {
            None
        }
    }

    pub fn split(&mut self, id: NodeId, stage: &'static str) -> Result<[NodeId; 4]> {
        let coords = self.coords(id);
        let label = self.label(id);
        if coords.depth >= self.max_depth {
            return Err(Error::MaxDepthExceeded { stage, max_depth: self.max_depth });
        }
        let mut kids = [NodeId(0); 4];
        for (slot, child_coords) in coords.children().into_iter().enumerate() {
            let kid = NodeId(self.nodes.len() as u32);
            self.nodes.push(Node { coords: child_coords, kind: NodeKind::Leaf(label) });
            self.leaf_index.insert(child_coords, kid);
            kids[slot] = kid;
        }
        self.leaf_index.remove(&coords);
        self.nodes[id.0 as usize].kind = NodeKind::Internal(kids);
        Ok(kids)
    }

    fn collect_leaves_on_side(&self, id: NodeId, side: Side, out: &mut Vec<NodeId>) {
        match self.nodes[id.0 as usize].kind {
            NodeKind::Leaf(_) => out.push(id),
            NodeKind::Internal(kids) => {
                // Child slots are SW, SE, NW, NE.
                let facing: [usize; 2] = match side {
                    Side::West => [0, 2],
                    Side::East => [1, 3],
                    Side::South => [0, 1],
                    Side::North => [2, 3],
                };
                for slot in facing {
                    self.collect_leaves_on_side(kids[slot], side, out);
                }
            }
        }
    }

    /// Leaves sharing a positive-length piece of the given side of leaf
    /// `id`, with the shared segment. Empty at the root boundary.
    pub fn neighbors_on_side(&self, id: NodeId, side: Side) -> Vec<(NodeId, Segment)> {
        let c = self.coords(id);
        let nb = c.step(side);
        if !self.in_grid(nb) {
            return Vec::new();
        }
        let mut cur = NodeId(0);
        for level in 0..nb.depth {
            match self.nodes[cur.0 as usize].kind {
                NodeKind::Leaf(_) => break,
                NodeKind::Internal(kids) => {
                    let shift = nb.depth - 1 - level;
                    let bx = (nb.gx >> shift) & 1;
                    let by = (nb.gy >> shift) & 1;
                    cur = kids[(by * 2 + bx) as usize];
                }
            }
        }
        match self.nodes[cur.0 as usize].kind {
            NodeKind::Leaf(_) => {
                // Neighbor at least as large as us: the shared edge is our
                // whole side.
                let (a, b) = self.box_of(id).side_segment(side);
                vec![(cur, Segment { a, b, kind: SegmentKind::Interior })]
            }
            NodeKind::Internal(_) => {
                // Neighbor cell is subdivided: gather its leaves facing us;
                // each contributes its own (smaller) facing side.
                let mut ids = Vec::new();
                self.collect_leaves_on_side(cur, side.opposite(), &mut ids);
                ids.into_iter()
                    .map(|nid| {
                        let (a, b) = self.box_of(nid).side_segment(side.opposite());
                        (nid, Segment { a, b, kind: SegmentKind::Interior })
                    })
                    .collect()
            }
        }
    }

    pub fn neighbors(&self, id: NodeId) -> Vec<(NodeId, Side, Segment)> {
        let mut out = Vec::new();
        for side in SIDES {
            for (nid, seg) in self.neighbors_on_side(id, side) {
                out.push((nid, side, seg));
            }
        }
        out
    }

    /// Enforce the width-ratio invariant: any two neighboring `Region`
    /// leaves differ in width by at most a factor of 2. Splits always go
    /// through `on_split`, which may relabel freshly created children (the
    /// curve-exclusion retest).
    ///
    /// Processing order is smallest-width-first with coordinate tie-breaks,
    /// so the result is deterministic.
    pub fn balance(
        &mut self,
        stage: &'static str,
        mut on_split: impl FnMut(&mut Self, [NodeId; 4]),
    ) -> Result<()> {
        use std::cmp::Reverse;
        use std::collections::BinaryHeap;
        type Key = (u32, Reverse<i64>, Reverse<i64>, NodeId);
        let mut heap: BinaryHeap<Key> = BinaryHeap::new();
        let key = |c: CellCoords, id: NodeId| (c.depth, Reverse(c.gx), Reverse(c.gy), id);
        for id in self.leaves_labeled(Label::Region) {
            heap.push(key(self.coords(id), id));
        }
        while let Some((depth, _, _, id)) = heap.pop() {
            if !self.is_leaf(id) || self.label(id) != Label::Region {
                continue;
            }
            for side in SIDES {
                loop {
                    let too_big = self
                        .neighbors_on_side(id, side)
                        .into_iter()
                        .map(|(nid, _)| nid)
                        .find(|&nid| {
                            self.label(nid) == Label::Region
                                && self.coords(nid).depth + 1 < depth
                        });
                    let Some(nid) = too_big else { break };
                    let kids = self.split(nid, stage)?;
                    on_split(self, kids);
                    for k in kids {
                        if self.is_leaf(k) && self.label(k) == Label::Region {
                            heap.push(key(self.coords(k), k));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Relabel everything inside `rect` as complement, splitting cells that
    /// straddle its boundary. The rectangle must be exactly representable at
    /// some depth within the cap, or the split chain runs out of depth.
    pub fn carve_complement(&mut self, rect: &Rect, stage: &'static str) -> Result<()> {
        self.carve_rec(NodeId(0), rect, stage)
    }

    fn carve_rec(&mut self, id: NodeId, rect: &Rect, stage: &'static str) -> Result<()> {
        let b = self.box_of(id);
        if !rect.intersects_interior_box(&b) {
            return Ok(());
        }
        let covered = rect.x.contains_interval(b.x()) && rect.y.contains_interval(b.y());
        if covered {
            self.relabel_subtree(id, Label::Complement);
            return Ok(());
        }
        let kids = match self.nodes[id.0 as usize].kind {
            NodeKind::Internal(kids) => kids,
            NodeKind::Leaf(_) => self.split(id, stage)?,
        };
        for k in kids {
            self.carve_rec(k, rect, stage)?;
        }
        Ok(())
    }

    fn relabel_subtree(&mut self, id: NodeId, label: Label) {
        match self.nodes[id.0 as usize].kind {
            NodeKind::Leaf(_) => self.set_label(id, label),
            NodeKind::Internal(kids) => {
                for k in kids {
                    self.relabel_subtree(k, label);
                }
            }
        }
    }

    /// Leaves whose interior meets the interior of `rect`.
    pub fn leaves_overlapping_interior(&self, rect: &Rect) -> Vec<NodeId> {
        let mut out = Vec::new();
        self.overlap_rec(NodeId(0), rect, &mut out);
        out
    }

    fn overlap_rec(&self, id: NodeId, rect: &Rect, out: &mut Vec<NodeId>) {
        if !rect.intersects_interior_box(&self.box_of(id)) {
            return;
        }
        match self.nodes[id.0 as usize].kind {
            NodeKind::Leaf(_) => out.push(id),
            NodeKind::Internal(kids) => {
                for k in kids {
                    self.overlap_rec(k, rect, out);
                }
            }
        }
    }

    /// The leaf containing points infinitesimally displaced from `p` toward
    /// the given quadrant; `None` when that displacement exits the root box.
    pub fn leaf_toward(&self, p: &(Dyadic, Dyadic), east: bool, north: bool) -> Option<NodeId> {
        let (px, py) = p;
        let xr = self.root.x();
        let yr = self.root.y();
        if px < xr.lo() || px > xr.hi() || py < yr.lo() || py > yr.hi() {
            return None;
        }
        if (east && px == xr.hi()) || (!east && px == xr.lo()) {
            return None;
        }
        if (north && py == yr.hi()) || (!north && py == yr.lo()) {
            return None;
        }
        let mut cur = NodeId(0);
        loop {
            match self.nodes[cur.0 as usize].kind {
                NodeKind::Leaf(_) => return Some(cur),
                NodeKind::Internal(kids) => {
                    let b = self.box_of(cur);
                    let (cx, cy) = b.center();
                    let right = match px.cmp_value(&cx) {
                        std::cmp::Ordering::Greater => true,
                        std::cmp::Ordering::Less => false,
                        std::cmp::Ordering::Equal => east,
                    };
                    let up = match py.cmp_value(&cy) {
                        std::cmp::Ordering::Greater => true,
                        std::cmp::Ordering::Less => false,
                        std::cmp::Ordering::Equal => north,
                    };
                    cur = kids[(up as usize) * 2 + (right as usize)];
                }
            }
        }
    }

    fn quadrant_inside(&self, p: &(Dyadic, Dyadic), east: bool, north: bool) -> bool {
        self.leaf_toward(p, east, north)
            .is_some_and(|id| self.label(id) != Label::Complement)
    }

    /// Decompose the boundary of the region of interest (the union of
    /// non-complement leaves) into per-leaf-side segments, classify its
    /// corners, and count its connected pieces.
    pub fn region_geometry(&self) -> Result<RegionGeometry> {
        let mut pieces: Vec<(NodeId, Side, Segment)> = Vec::new();
        for id in self.leaves() {
            if self.label(id) == Label::Complement {
                continue;
            }
            let c = self.coords(id);
            for side in SIDES {
                if !self.in_grid(c.step(side)) {
                    let (a, b) = self.box_of(id).side_segment(side);
                    pieces.push((id, side, Segment { a, b, kind: SegmentKind::Boundary }));
                    continue;
                }
                for (nid, seg) in self.neighbors_on_side(id, side) {
                    if self.label(nid) == Label::Complement {
                        pieces.push((
                            id,
                            side,
                            Segment { a: seg.a, b: seg.b, kind: SegmentKind::Boundary },
                        ));
                    }
                }
            }
        }

        // Corner candidates are the segment endpoints; classify by how many
        // of the four incident quadrants lie inside the region.
        let mut points: Vec<(Dyadic, Dyadic)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (_, _, seg) in &pieces {
            for p in [&seg.a, &seg.b] {
                if seen.insert(p.clone()) {
                    points.push(p.clone());
                }
            }
        }
        points.sort();
        let mut corners = Vec::new();
        for p in points {
            let q = [(false, false), (true, false), (false, true), (true, true)];
            let inside: Vec<bool> =
                q.iter().map(|&(e, n)| self.quadrant_inside(&p, e, n)).collect();
            match inside.iter().filter(|&&b| b).count() {
                1 => corners.push((p, CornerKind::Convex)),
                3 => corners.push((p, CornerKind::Concave)),
                // Diagonal pairs mean the region pinches to a point.
                2 if inside[0] == inside[3] => {
                    return Err(Error::Invalid(format!(
                        "region touches itself at the corner point ({}, {})",
                        p.0, p.1
                    )));
                }
                _ => {}
            }
        }

        // Count connected pieces of the boundary by joining segments that
        // share an endpoint.
        let mut parent: Vec<usize> = (0..pieces.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
                r
            } else {
                i
            }
        }
        let mut by_point: HashMap<(Dyadic, Dyadic), usize> = HashMap::new();
        for (i, (_, _, seg)) in pieces.iter().enumerate() {
            for p in [&seg.a, &seg.b] {
                match by_point.get(p) {
                    Some(&j) => {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        if ri != rj {
                            parent[ri] = rj;
                        }
                    }
                    None => {
                        by_point.insert(p.clone(), i);
                    }
                }
            }
        }
        let mut roots: Vec<usize> =
            (0..pieces.len()).map(|i| find(&mut parent, i)).collect();
        roots.sort_unstable();
        roots.dedup();
        Ok(RegionGeometry { pieces, corners, loops: roots.len() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
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

    fn tree(lo: i64, hi: i64) -> SubdivisionTree {
        SubdivisionTree::new(square(lo, hi), 40)
    }

    #[test]
    fn split_once_siblings_have_two_neighbors() {
        let mut t = tree(-2, 2);
        let kids = t.split(NodeId(0), "test").unwrap();
        for k in kids {
            let n = t.neighbors(k);
            assert_eq!(n.len(), 2, "corner-sharing pairs are not neighbors");
        }
    }

    #[test]
    fn uniform_grid_interior_box_has_four_neighbors() {
        let mut t = tree(-2, 2);
        let kids = t.split(NodeId(0), "test").unwrap();
        for k in kids {
            t.split(k, "test").unwrap();
        }
        // Depth-2 leaf at grid (1,1) is interior.
        let id = t.leaf_at(CellCoords { depth: 2, gx: 1, gy: 1 }).unwrap();
        assert_eq!(t.neighbors(id).len(), 4);
    }

    #[test]
    fn half_width_neighbors_are_reported_individually() {
        let mut t = tree(0, 2);
        let kids = t.split(NodeId(0), "test").unwrap();
        // Split the SE child: the SW child now sees two half-width leaves
        // on its east side.
        t.split(kids[1], "test").unwrap();
        let east = t.neighbors_on_side(kids[0], Side::East);
        assert_eq!(east.len(), 2);
        for (_, seg) in &east {
            assert_eq!(seg.a.0, dy(1, 0));
            assert_eq!(seg.b.0, dy(1, 0));
            assert_eq!(seg.b.1.sub(&seg.a.1), dy(1, -1));
        }
    }

    #[test]
    fn leaf_areas_tile_the_root() {
        let mut t = tree(-2, 2);
        let kids = t.split(NodeId(0), "test").unwrap();
        let gkids = t.split(kids[2], "test").unwrap();
        t.split(gkids[1], "test").unwrap();
        let mut area = Dyadic::zero();
        for id in t.leaves() {
            let w = t.box_of(id).width();
            area = area.add(&w.square());
        }
        assert_eq!(area, dy(16, 0));
    }

    #[test]
    fn balance_splits_oversized_neighbor_once() {
        let mut t = tree(0, 2);
        let kids = t.split(NodeId(0), "test").unwrap();
        let se = t.split(kids[1], "test").unwrap();
        t.split(se[0], "test").unwrap();
        // SW child (width 1) now neighbors width-1/4 leaves.
        let before = t.node_count();
        t.balance("test", |_, _| {}).unwrap();
        assert!(assert_balanced(&t));
        // Exactly one split requested: the SW child into width-1/2 leaves.
        assert_eq!(t.node_count(), before + 4);
        assert!(!t.is_leaf(kids[0]));
        // Balancing again changes nothing.
        t.balance("test", |_, _| {}).unwrap();
        assert_eq!(t.node_count(), before + 4);
    }

    fn assert_balanced(t: &SubdivisionTree) -> bool {
        for id in t.leaves_labeled(Label::Region) {
            let d = t.coords(id).depth;
            for (nid, _, _) in t.neighbors(id) {
                if t.label(nid) != Label::Region {
                    continue;
                }
                let nd = t.coords(nid).depth;
                if d.abs_diff(nd) > 1 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn balance_callback_can_discard_children() {
        let mut t = tree(0, 2);
        let kids = t.split(NodeId(0), "test").unwrap();
        let se = t.split(kids[1], "test").unwrap();
        t.split(se[0], "test").unwrap();
        t.balance("test", |t, new_kids| {
            for k in new_kids {
                t.set_label(k, Label::Discarded);
            }
        })
        .unwrap();
        // The split children were discarded by the callback.
        assert!(!t.is_leaf(kids[0]));
        let discarded = t.leaves_labeled(Label::Discarded);
        assert_eq!(discarded.len(), 4);
    }

    #[test]
    fn full_region_geometry() {
        let t = tree(-1, 1);
        let g = t.region_geometry().unwrap();
        assert_eq!(g.loops, 1);
        assert_eq!(g.pieces.len(), 4);
        assert!(g.corners.iter().all(|(_, k)| *k == CornerKind::Convex));
        assert_eq!(g.corners.len(), 4);
    }

    #[test]
    fn l_shape_has_one_concave_corner() {
        let mut t = tree(0, 2);
        let kids = t.split(NodeId(0), "test").unwrap();
        t.set_label(kids[3], Label::Complement);
        let g = t.region_geometry().unwrap();
        assert_eq!(g.loops, 1);
        let concave: Vec<_> =
            g.corners.iter().filter(|(_, k)| *k == CornerKind::Concave).collect();
        let convex = g.corners.len() - concave.len();
        assert_eq!(concave.len(), 1);
        assert_eq!(concave[0].0, (dy(1, 0), dy(1, 0)));
        assert_eq!(convex, 5);
    }

    #[test]
    fn annulus_boundary_has_two_loops() {
        let mut t = tree(-4, 4);
        let hole = Rect::new(
            DyInterval::new(dy(-1, 0), dy(1, 0)),
            DyInterval::new(dy(-1, 0), dy(1, 0)),
        );
        t.carve_complement(&hole, "test").unwrap();
        let g = t.region_geometry().unwrap();
        assert_eq!(g.loops, 2);
        let concave =
            g.corners.iter().filter(|(_, k)| *k == CornerKind::Concave).count();
        assert_eq!(concave, 4, "the four inner corners of the hole");
        // The carved cells are exactly the hole.
        let mut hole_area = Dyadic::zero();
        for id in t.leaves_labeled(Label::Complement) {
            hole_area = hole_area.add(&t.box_of(id).width().square());
        }
        assert_eq!(hole_area, dy(4, 0));
    }

    #[test]
    fn carve_needs_enough_depth() {
        let mut t = SubdivisionTree::new(square(0, 1), 2);
        let rect = Rect::new(
            DyInterval::new(dy(1, -3), dy(3, -3)),
            DyInterval::new(dy(1, -3), dy(3, -3)),
        );
        assert!(matches!(
            t.carve_complement(&rect, "test"),
            Err(Error::MaxDepthExceeded { .. })
        ));
    }

    #[test]
    fn pinched_region_is_rejected() {
        let mut t = tree(0, 2);
        let kids = t.split(NodeId(0), "test").unwrap();
        t.set_label(kids[0], Label::Complement);
        t.set_label(kids[3], Label::Complement);
        assert!(matches!(t.region_geometry(), Err(Error::Invalid(_))));
    }

    #[test]
    fn mirror_cells_outside_the_grid_have_exact_geometry() {
        let t = tree(0, 4);
        let outside = CellCoords { depth: 2, gx: -1, gy: 1 };
        assert!(!t.in_grid(outside));
        let b = t.box_of_coords(outside);
        assert_eq!(b.width(), dy(1, 0));
        assert_eq!(b.x().hi(), &dy(0, 0));
        assert_eq!(b.y().lo(), &dy(1, 0));
    }
}
