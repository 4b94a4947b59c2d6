//! Trap the singular points of a curve in tiny certified rectangles.
//!
//! Singular points are the zeros of f that are also zeros of the gradient,
//! i.e. the zeros of the energy polynomial F = f^2 + fx^2 + fy^2. The
//! isolation pass subdivides the box, keeps the cells where F certifiably
//! dips below a barrier value, clusters them, and shrinks each cluster until
//! its diameter is below the separation bound delta. Each resulting
//! rectangle contains exactly one singular point.
//!
//! The certified default barriers are far too small to reach in practice
//! (see the certified_bounds example), so this demo does what the test suite
//! does: it derives a practical override from the sampling oracle. The run
//! stays correct as long as the override really is a lower bound on the
//! smallest positive critical value of F.
//!
//! Run with: cargo run --example isolate_singularities

use curvemesh::numeric::{Box2, DyInterval, Dyadic};
use curvemesh::oracle::min_positive_critical_estimate;
use curvemesh::poly::BiPoly;
use curvemesh::singular::isolate_singularities;

fn square(half: i64) -> Box2 {
    let iv = DyInterval::new(Dyadic::from_int(-half), Dyadic::from_int(half));
    Box2::new(iv.clone(), iv, 0)
}

fn main() -> curvemesh::Result<()> {
    // Figure eight: one self-crossing at the origin.
    let f = BiPoly::parse("(x^2 + y^2)^2 - 4*x^2 + 4*y^2")?;
    let region = square(4);
    let delta = Dyadic::new(1.into(), -4); // isolate to diameter < 1/16

    let energy = f.sq_plus_grad_sq();
    let ev = min_positive_critical_estimate(&energy, &region.as_rect(), 6)
        .expect("the oracle found no positive critical sample");
    println!("oracle estimate for the smallest positive critical value of F: {}", ev.to_decimal_string());

    let iso = isolate_singularities(&f, &region, &ev, &delta, 40)?;
    println!("barrier used: {}", iso.eps_barrier.to_decimal_string());
    println!("isolated {} singular region(s):", iso.regions.len());
    for (i, r) in iso.regions.iter().enumerate() {
        let (cx, cy) = r.rect.center();
        println!(
            "  region {i}: center ({}, {}), diameter {}, {} subdivision boxes",
            cx.to_decimal_string(),
            cy.to_decimal_string(),
            r.rect.diameter().to_decimal_string(),
            r.footprint.len()
        );
    }
    Ok(())
}
