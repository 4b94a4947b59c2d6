//! The closed-form bounds, and why overrides exist.
//!
//! Three worst-case quantities drive the singular pipeline, all computed
//! from just the total degree d and the coefficient height of f:
//!
//!   EV(F)   lower bound on the smallest positive critical value of the
//!           energy polynomial F = f^2 + fx^2 + fy^2,
//!   delta3  lower bound on the pairwise distance between singular points,
//!   delta4  lower bound used to separate singular points from the rest of
//!           the critical set.
//!
//! They are honest but astronomically small: 2^-69 already for a quadratic
//! with single-bit coefficients. Reaching such widths by subdivision is
//! hopeless, which is why every bound can be overridden by a value obtained
//! elsewhere (resultants, a numerical solver, the built-in sampling oracle).
//! Overridden runs are still correct whenever the supplied value really is a
//! lower bound; the report records the source of each number.
//!
//! Run with: cargo run --example certified_bounds

use curvemesh::bounds::{certified_report, delta3_exponent, delta4_exponent, ev_exponent};
use curvemesh::poly::BiPoly;

fn main() -> curvemesh::Result<()> {
    println!("worst-case exponents: bound = 2^-k, k grows with degree d and height 2^L");
    println!("{:>4} {:>4} {:>10} {:>10} {:>12}", "d", "L", "k_ev", "k_delta3", "k_delta4");
    for d in [2u32, 4, 8] {
        for l in [2u32, 8, 16] {
            println!(
                "{d:>4} {l:>4} {:>10} {:>10} {:>12}",
                ev_exponent(d, l)?,
                delta3_exponent(d, l),
                delta4_exponent(d, l)
            );
        }
    }

    // A concrete sanity check. f = x^2 y^2 + 2xy has critical values -1 and
    // 0, so the smallest nonzero magnitude is exactly 1 and the certified
    // bound for f's own degree and height must come out at or below it.
    let f = BiPoly::parse("x^2*y^2 + 2*x*y")?;
    let k = ev_exponent(f.total_degree(), f.height_bits())?;
    println!();
    println!(
        "f = {f}: degree {}, height {} bits, certified bound 2^-{k} <= 1",
        f.total_degree(),
        f.height_bits()
    );

    // The pipeline applies the same formula to F = f^2 + fx^2 + fy^2, which
    // doubles the degree and grows the height, so the barrier it would have
    // to subdivide down to is smaller still.
    let report = certified_report(&f)?;
    let big = f.sq_plus_grad_sq();
    println!(
        "pipeline barrier for F (degree {}, height {} bits): 2^{}",
        big.total_degree(),
        big.height_bits(),
        report.ev.value.exponent()
    );
    Ok(())
}
