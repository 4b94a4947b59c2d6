//! Mesh a few nonsingular curves and print what the graph looks like.
//!
//! The mesher subdivides the box until its two interval predicates hold on
//! every kept cell, places one vertex on each sign-changing cell edge, and
//! connects them. The result is isotopic to the curve, so component counts
//! and cycle ranks are exact, not estimates.
//!
//! Run with: cargo run --example smooth_topology

use curvemesh::collar::{run_extended_pv, CollarOptions};
use curvemesh::numeric::{Box2, DyInterval, Dyadic};
use curvemesh::poly::BiPoly;
use curvemesh::subdivision::SubdivisionTree;

fn interval(lo: i64, hi: i64) -> DyInterval {
    DyInterval::new(Dyadic::from_int(lo), Dyadic::from_int(hi))
}

fn main() -> curvemesh::Result<()> {
    let fixtures = [
        ("unit circle", "x^2 + y^2 - 1"),
        // Two disjoint ovals: radius-1/2 circles centered at (1,0) and (-1,0).
        ("two ovals", "(4*x^2 + 4*y^2 + 3)^2 - 64*x^2"),
        // One open branch entering and leaving through the box boundary.
        ("cubic branch", "5*y^2 - 5*x^2 + 5*x^3 + 1"),
    ];
    let region = Box2::new(interval(-2, 2), interval(-2, 2), 0);

    for (name, poly) in fixtures {
        let f = BiPoly::parse(poly)?;
        let mut tree = SubdivisionTree::new(region.clone(), 40);
        let (graph, _) = run_extended_pv(&f, &mut tree, &CollarOptions::default())?;

        println!("{name}: f = {f}");
        for (i, c) in graph.topology_summary().iter().enumerate() {
            let ends = c.degree_histogram.get(&1).copied().unwrap_or(0);
            let shape = match (c.cycle_rank, ends) {
                (0, 2) => "open chain",
                (r, 0) if r > 0 => "closed loop",
                _ => "mixed",
            };
            println!(
                "  component {i}: {} vertices, {} edges, cycle rank {} ({shape})",
                c.vertices, c.edges, c.cycle_rank
            );
        }
        println!();
    }
    Ok(())
}
