//! Closed-form lower bounds for critical values and singularity separation.
//!
//! Three quantities control when subdivision may stop while still proving
//! something: the smallest positive critical value of a polynomial (`ev`),
//! the distance from a singular point to the rest of the curve (`delta3`),
//! and the distance between two singular points (`delta4`). Each admits a
//! closed-form lower bound in the total degree d and the coefficient height
//! 2^L alone.
//!
//! The bounds are returned as pure powers of two, 2^-k: every integer base
//! in a denominator is rounded UP to a power of two (and e^7 to 1097), so k
//! comes from small ceiling arithmetic while the value stays a valid lower
//! bound. Full-mantissa precision would be pointless; these values are
//! astronomically small and only ever feed subdivision stop criteria.
//! `tools/bounds_check.py` recomputes the k table with exact big integers
//! and verifies the rounding direction; the test suite freezes its output.
//!
//! Because the certified values are so small, every bound can be replaced by
//! a user- or oracle-supplied dyadic; the report records which source was in
//! effect so output files are honest about what was proved.

use crate::numeric::Dyadic;
use crate::poly::BiPoly;
use crate::{Error, Result};

/// Where a bound value came from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundSource {
    CertifiedFormula,
    UserOverride,
    OracleDerived,
}

impl BoundSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundSource::CertifiedFormula => "certified-formula",
            BoundSource::UserOverride => "user-override",
            BoundSource::OracleDerived => "oracle-derived",
        }
    }
}

/// A bound together with its provenance.
#[derive(Clone, Debug)]
pub struct BoundValue {
    pub value: Dyadic,
    pub source: BoundSource,
}

impl BoundValue {
    pub fn certified(value: Dyadic) -> Self {
        BoundValue { value, source: BoundSource::CertifiedFormula }
    }

    pub fn replace(&mut self, value: Dyadic, source: BoundSource) {
        self.value = value;
        self.source = source;
    }
}

/// The bound set a pipeline run operates under.
///
/// `ev` bounds the auxiliary polynomial F = f^2 + fx^2 + fy^2 (that is what
/// the singularity isolation needs), so it is computed from F's own degree
/// and height. `delta3`/`delta4` are bounds for f itself.
#[derive(Clone, Debug)]
pub struct BoundReport {
    pub d: u32,
    pub height_bits: u32,
    pub ev: BoundValue,
    pub delta3: BoundValue,
    pub delta4: BoundValue,
}

fn ceil_log2(n: u64) -> i64 {
    assert!(n >= 1);
    (64 - (n - 1).leading_zeros()) as i64
}

/// Exponent k of the critical-value bound 2^-k.
///
/// True denominator: max([d^6 2^(L+2d+11)]^(d^2-1), [d^(3d+8) 2^(3L+5d)]^d);
/// d^j is rounded up to 2^(j*ceil_log2(d)).
pub fn ev_exponent(d: u32, height_bits: u32) -> Result<i64> {
    if d < 2 {
        return Err(Error::DegreeTooSmall { d });
    }
    let (d, l) = (d as i64, height_bits.max(1) as i64);
    let c = ceil_log2(d as u64);
    let k1 = (d * d - 1) * (6 * c + l + 2 * d + 11);
    let k2 = d * ((3 * d + 8) * c + 3 * l + 5 * d);
    Ok(k1.max(k2))
}

pub fn ev_lower_bound(d: u32, height_bits: u32) -> Result<Dyadic> {
    Ok(Dyadic::pow2(-ev_exponent(d, height_bits)?))
}

/// Exponent k of the singularity-to-curve separation bound 2^-k.
///
/// True value: min((16^(d+2) 256^L 81^(2d) d^5)^-d, (2^(8L+21) 3^(8d))^-2)
/// with 81 <= 2^7 and 3 <= 2^2.
pub fn delta3_exponent(d: u32, height_bits: u32) -> i64 {
    assert!(d >= 1, "separation bounds need a nonconstant polynomial");
    let (d, l) = (d as i64, height_bits.max(1) as i64);
    let c = ceil_log2(d as u64);
    let ka = d * (4 * (d + 2) + 8 * l + 14 * d + 5 * c);
    let kb = 2 * (8 * l + 21 + 16 * d);
    ka.max(kb)
}

pub fn delta3_lower_bound(d: u32, height_bits: u32) -> Dyadic {
    Dyadic::pow2(-delta3_exponent(d, height_bits))
}

/// Exponent k of the singularity-pair separation bound 2^-k.
///
/// True value: min over D in {d, 2} of
/// (36 e^7)^(-30 D^5) (4^4*6*d*2^(L+1))^(-5 D^4); only D = max(2, d)
/// matters since the exponent grows with D. 36 e^7 <= 36*1097 <= 2^16.
pub fn delta4_exponent(d: u32, height_bits: u32) -> i64 {
    assert!(d >= 1, "separation bounds need a nonconstant polynomial");
    let l = height_bits.max(1) as i64;
    let inner = ceil_log2(6 * d as u64) + l + 9;
    let dd = d.max(2) as i64;
    30 * dd.pow(5) * 16 + 5 * dd.pow(4) * inner
}

pub fn delta4_lower_bound(d: u32, height_bits: u32) -> Dyadic {
    Dyadic::pow2(-delta4_exponent(d, height_bits))
}

/// Compute the full certified bound set for a polynomial.
pub fn certified_report(f: &BiPoly) -> Result<BoundReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.total_degree();
    if d == 0 {
        return Err(Error::Invalid("constant polynomial has no curve".into()));
    }
    let height_bits = f.height_bits();
    let big = f.sq_plus_grad_sq();
    let ev = ev_lower_bound(big.total_degree(), big.height_bits())?;
    Ok(BoundReport {
        d,
        height_bits,
        ev: BoundValue::certified(ev),
        delta3: BoundValue::certified(delta3_lower_bound(d, height_bits)),
        delta4: BoundValue::certified(delta4_lower_bound(d, height_bits)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Output of tools/bounds_check.py, which re-derives these exponents with
    // Python integers and verifies 2^-k <= true value exactly.
    const TABLE: &[(u32, u32, Option<i64>, i64, i64)] = &[
        (1, 1, None, 90, 16400),
        (1, 4, None, 138, 16640),
        (2, 1, Some(66), 122, 16480),
        (2, 2, Some(69), 138, 16560),
        (2, 8, Some(96), 234, 17040),
        (2, 16, Some(144), 362, 17680),
        (3, 3, Some(256), 288, 123525),
        (4, 2, Some(495), 424, 512000),
        (4, 8, Some(585), 616, 519680),
        (4, 16, Some(705), 872, 529920),
        (8, 2, Some(2961), 1464, 16076800),
        (8, 8, Some(3339), 1848, 16199680),
        (8, 16, Some(3843), 2360, 16363520),
    ];

    #[test]
    fn exponents_match_independent_script() {
        for &(d, l, kev, kd3, kd4) in TABLE {
            match kev {
                Some(k) => assert_eq!(ev_exponent(d, l).unwrap(), k, "ev d={d} L={l}"),
                None => assert!(matches!(
                    ev_exponent(d, l),
                    Err(Error::DegreeTooSmall { .. })
                )),
            }
            assert_eq!(delta3_exponent(d, l), kd3, "delta3 d={d} L={l}");
            assert_eq!(delta4_exponent(d, l), kd4, "delta4 d={d} L={l}");
        }
    }

    #[test]
    fn bounds_are_positive_and_at_most_one() {
        let one = Dyadic::one();
        for d in 1..=10 {
            for l in 1..=20 {
                if d >= 2 {
                    let ev = ev_lower_bound(d, l).unwrap();
                    assert!(ev.is_positive() && ev < one);
                }
                let d3 = delta3_lower_bound(d, l);
                let d4 = delta4_lower_bound(d, l);
                assert!(d3.is_positive() && d3 < one);
                assert!(d4.is_positive() && d4 < one);
            }
        }
    }

    #[test]
    fn bounds_shrink_as_height_grows() {
        for l in 1..=19 {
            assert!(ev_lower_bound(4, l + 1).unwrap() < ev_lower_bound(4, l).unwrap());
            assert!(delta3_lower_bound(4, l + 1) < delta3_lower_bound(4, l));
            assert!(delta4_lower_bound(4, l + 1) < delta4_lower_bound(4, l));
        }
        for d in 2..=9 {
            assert!(delta3_lower_bound(d + 1, 4) < delta3_lower_bound(d, 4));
        }
    }

    #[test]
    fn model_singular_example_is_bounded_by_its_known_critical_value() {
        // X^2 Y^2 + 2XY has exactly one nonzero critical value, of absolute
        // value 1, so any valid lower bound is at most 1.
        let f = BiPoly::parse("X^2*Y^2+2*X*Y").unwrap();
        assert_eq!(f.total_degree(), 4);
        assert_eq!(f.height_bits(), 2);
        let ev = ev_lower_bound(4, 2).unwrap();
        assert_eq!(ev, Dyadic::pow2(-495));
        assert!(ev <= Dyadic::one());
    }

    #[test]
    fn degree_one_pair_bound_uses_the_floor_branch() {
        // For d = 1 the D = 2 branch dominates; both branches are computed
        // through the same max.
        assert_eq!(
            delta4_exponent(1, 1),
            30 * 32 * 16 + 5 * 16 * (ceil_log2(6) + 1 + 9)
        );
    }

    #[test]
    fn report_applies_ev_to_the_auxiliary_polynomial() {
        let f = BiPoly::parse("X^2+Y^2-1").unwrap();
        let report = certified_report(&f).unwrap();
        assert_eq!(report.d, 2);
        // F = (r^2+1)^2 has degree 4 and height 2 (coefficient of r^2 is 2).
        let big = f.sq_plus_grad_sq();
        assert_eq!(
            report.ev.value,
            ev_lower_bound(big.total_degree(), big.height_bits()).unwrap()
        );
        assert_eq!(report.delta3.value, delta3_lower_bound(2, 1));
        assert_eq!(report.ev.source, BoundSource::CertifiedFormula);
    }
}
