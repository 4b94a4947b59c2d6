//! Count curve branches entering a box around a singular point.
//!
//! Once a singular point is trapped in a small box, the curve inside is a
//! cone over finitely many branch ends. The degree pass meshes the annulus
//! between the box and a concentric one five times as wide, then counts the
//! chains that cross from wall to wall. A node has 4 ends, a cusp 2, the
//! lemniscate crossing 4.
//!
//! The independent check walks a tiny square loop around the point and
//! counts sign alternations of f, which equals the number of branch
//! crossings. Both counts are printed side by side.
//!
//! Run with: cargo run --example branching_degree

use curvemesh::numeric::{Box2, Dyadic};
use curvemesh::oracle::loop_branch_count;
use curvemesh::poly::BiPoly;
use curvemesh::singular::annulus_degree;

fn main() -> curvemesh::Result<()> {
    let fixtures = [
        ("nodal cubic", "y^2 - x^3 - x^2"),
        ("cusp", "y^2 - x^3"),
        ("lemniscate", "(x^2 + y^2)^2 - 4*x^2 + 4*y^2"),
    ];
    let zero = Dyadic::from_int(0);
    let inner = Box2::centered(&zero, &zero, &Dyadic::new(1.into(), -3), 0);

    println!("{:<14}{:>8}{:>14}", "curve", "meshed", "sign walks");
    for (name, poly) in fixtures {
        let f = BiPoly::parse(poly)?;
        let report = annulus_degree(&f, &inner, 30)?;
        let walk = loop_branch_count(&f, &zero, &zero, &Dyadic::new(1.into(), -6))?;
        println!("{name:<14}{:>8}{walk:>14}", report.degree);
        let (out, within, cross) = report.type_counts;
        println!(
            "  annulus chains: {cross} crossing, {out} outer-wall returns, {within} inner-wall returns"
        );
    }
    Ok(())
}
