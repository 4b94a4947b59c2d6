//! What happens when the curve grazes the region boundary.
//!
//! Take the circle x^2 + (y-1)^2 = 1 and cut the region down to the lower
//! half plane: the circle touches the kept region in the single point (0,0).
//! No subdivision of the interior can decide whether that contact point
//! belongs to the mesh. The boundary treatment resolves this by inspecting
//! mirror boxes on the far side of the wall; where a branch may dip across,
//! it inserts a small chevron that represents the possible excursion. The
//! output is then isotopic to a curve within any requested tolerance of the
//! true one.
//!
//! Run with: cargo run --example boundary_collar

use curvemesh::collar::{run_extended_pv, CollarOptions};
use curvemesh::graph::VertexTag;
use curvemesh::numeric::{Box2, DyInterval, Dyadic, Rect, Sign};
use curvemesh::poly::BiPoly;
use curvemesh::subdivision::SubdivisionTree;

fn iv(lo: i64, hi: i64) -> DyInterval {
    DyInterval::new(Dyadic::from_int(lo), Dyadic::from_int(hi))
}

fn main() -> curvemesh::Result<()> {
    let f = BiPoly::parse("x^2 + y^2 - 2*y")?;
    let region = Box2::new(iv(-2, 2), iv(-2, 2), 0);
    // Keep [-2,2] x [-2,0]; the circle is tangent to its north wall.
    let cut = Rect::new(iv(-2, 2), iv(0, 2));

    let mut tree = SubdivisionTree::new(region, 40);
    tree.carve_complement(&cut, "user exclusion")?;
    let (graph, collar) = run_extended_pv(&f, &mut tree, &CollarOptions::default())?;

    let transients: Vec<_> = collar
        .iter()
        .filter(|b| b.partners.iter().any(|p| p.transient))
        .collect();
    println!("complementary boxes checked: {}", collar.len());
    println!("boxes where a grazing branch is possible: {}", transients.len());
    for b in &transients {
        let pattern: String =
            b.corner_signs.iter().map(|s| if *s == Sign::Pos { '+' } else { '-' }).collect();
        println!("  cell {:?}, corner signs {pattern}", b.cell);
    }

    println!("graph components:");
    for c in graph.topology_summary() {
        println!("  {} vertices, {} edges", c.vertices, c.edges);
    }
    let gadget_vertices =
        (0..graph.vertex_count()).filter(|&v| graph.tag(v) == VertexTag::AugmentedCollar).count();
    println!("every vertex is a collar gadget vertex: {}", gadget_vertices == graph.vertex_count());
    Ok(())
}
