//! Drive the mesh toward the curve with a tolerance ladder.
//!
//! Topology comes first: the default run subdivides only far enough to
//! certify the isotopy. Passing a tolerance eps additionally caps every kept
//! box at width eps/4, which pins each graph vertex within eps of the true
//! curve. Refinement never changes the topology, only the metric accuracy.
//!
//! For the unit circle the claim "vertex v is within 1/8 of the curve" has a
//! closed form, 49/64 <= x^2 + y^2 <= 81/64, so this demo verifies its own
//! output exactly.
//!
//! Run with: cargo run --example refine_tolerance

use curvemesh::mesher::{mesh, refine_to_eps, MeshConfig};
use curvemesh::numeric::{Box2, DyInterval, Dyadic};
use curvemesh::poly::BiPoly;

fn main() -> curvemesh::Result<()> {
    let f = BiPoly::parse("x^2 + y^2 - 1")?;
    let iv = DyInterval::new(Dyadic::from_int(-2), Dyadic::from_int(2));
    let region = Box2::new(iv.clone(), iv, 0);

    let base = mesh(&f, &region, &MeshConfig::default())?;
    println!("eps      vertices   edges");
    println!("inf      {:>8}{:>8}", base.graph.vertex_count(), base.graph.edge_count());

    for k in 1..=5 {
        let eps = Dyadic::new(1.into(), -k);
        let refined = refine_to_eps(&base, &eps)?;
        println!(
            "2^-{k}     {:>8}{:>8}",
            refined.graph.vertex_count(),
            refined.graph.edge_count()
        );
        if k == 3 {
            let (lo, hi) = (Dyadic::new(49.into(), -6), Dyadic::new(81.into(), -6));
            let all_close = refined
                .graph
                .points()
                .iter()
                .all(|(x, y)| {
                    let s = x.square().add(&y.square());
                    lo <= s && s <= hi
                });
            println!("         every vertex within 1/8 of the circle: {all_close}");
        }
    }
    Ok(())
}
