//! Bivariate integer polynomials: exact evaluation over dyadics, interval
//! (box) evaluation by plain Horner, derivatives, gcd, square-free part.
//!
//! The interval evaluator is deliberately the *plain* per-variable Horner
//! form with no algebraic rewriting: its output is inclusion monotone (a
//! sub-box never evaluates to a wider interval), which is the property every
//! exclusion certificate in the pipeline leans on. Tightened powers exist on
//! [`DyInterval::pow`] and are used where only a sum of even powers is
//! evaluated, never inside Horner.

mod parse;
pub mod univariate;

use crate::numeric::{Box2, DyInterval, Dyadic, Rect, Sign};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::fmt;
use univariate::Poly1;

/// Dense bivariate polynomial; `rows[j][i]` multiplies x^i y^j.
#[derive(Clone, PartialEq, Debug)]
pub struct BiPoly {
    rows: Vec<Vec<BigInt>>,
}

impl BiPoly {
    fn normalized(mut rows: Vec<Vec<BigInt>>) -> Self {
        for row in &mut rows {
            while row.last().is_some_and(|c| c.is_zero()) {
                row.pop();
            }
        }
        while rows.last().is_some_and(|r| r.is_empty()) {
            rows.pop();
        }
        BiPoly { rows }
    }

    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn constant(c: i64) -> Self {
        BiPoly::normalized(vec![vec![BigInt::from(c)]])
    }

    pub fn var_x() -> Self {
        BiPoly::from_monomials(&[(1, 1, 0)])
    }

    pub fn var_y() -> Self {
        BiPoly::from_monomials(&[(1, 0, 1)])
    }

    /// Build from (coefficient, x-degree, y-degree) triples.
    pub fn from_monomials(terms: &[(i64, u32, u32)]) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for &(c, i, j) in terms {
            let (i, j) = (i as usize, j as usize);
            if rows.len() <= j {
                rows.resize(j + 1, Vec::new());
            }
            if rows[j].len() <= i {
                rows[j].resize(i + 1, BigInt::zero());
            }
            rows[j][i] += BigInt::from(c);
        }
        BiPoly::normalized(rows)
    }

    pub fn parse(s: &str) -> crate::Result<Self> {
        parse::parse_bipoly(s)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        self.rows
            .get(j)
            .and_then(|r| r.get(i))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn degree_x(&self) -> u32 {
        self.rows.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0) as u32
    }

    pub fn degree_y(&self) -> u32 {
        self.rows.len().saturating_sub(1) as u32
    }

    /// Max of i+j over nonzero monomials; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        let mut d = 0;
        for (j, row) in self.rows.iter().enumerate() {
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    d = d.max((i + j) as u32);
                }
            }
        }
        d
    }

    /// Max |coefficient|.
    pub fn height(&self) -> BigInt {
        let mut h = BigInt::zero();
        for row in &self.rows {
            for c in row {
                let a = c.abs();
                if a > h {
                    h = a;
                }
            }
        }
        h
    }

    /// Bit length of the height (0 for the zero polynomial).
    pub fn height_bits(&self) -> u32 {
        self.height().bits() as u32
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut rows = self.rows.clone();
        if rows.len() < other.rows.len() {
            rows.resize(other.rows.len(), Vec::new());
        }
        for (j, row) in other.rows.iter().enumerate() {
            if rows[j].len() < row.len() {
                rows[j].resize(row.len(), BigInt::zero());
            }
            for (i, c) in row.iter().enumerate() {
                rows[j][i] += c;
            }
        }
        BiPoly::normalized(rows)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BiPoly {
            rows: self.rows.iter().map(|r| r.iter().map(|c| -c).collect()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return BiPoly::zero();
        }
        let ny = self.rows.len() + other.rows.len() - 1;
        let nx = (self.degree_x() + other.degree_x() + 1) as usize;
        let mut rows = vec![vec![BigInt::zero(); nx]; ny];
        for (ja, ra) in self.rows.iter().enumerate() {
            for (ia, ca) in ra.iter().enumerate() {
                if ca.is_zero() {
                    continue;
                }
                for (jb, rb) in other.rows.iter().enumerate() {
                    for (ib, cb) in rb.iter().enumerate() {
                        if cb.is_zero() {
                            continue;
                        }
                        rows[ja + jb][ia + ib] += ca * cb;
                    }
                }
            }
        }
        BiPoly::normalized(rows)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = BiPoly::constant(1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn dx(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, c)| c * BigInt::from(i))
                    .collect()
            })
            .collect();
        BiPoly::normalized(rows)
    }

    pub fn dy(&self) -> Self {
        let rows = self
            .rows
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, r)| r.iter().map(|c| c * BigInt::from(j)).collect())
            .collect();
        BiPoly::normalized(rows)
    }

    /// f^2 + fx^2 + fy^2. Nonnegative everywhere; vanishes exactly at points
    /// where f and both partials vanish, i.e. at singular points of the zero
    /// set (and at singular points of nearby level sets).
    pub fn sq_plus_grad_sq(&self) -> Self {
        let fx = self.dx();
        let fy = self.dy();
        self.mul(self).add(&fx.mul(&fx)).add(&fy.mul(&fy))
    }

    /// Exact value at a dyadic point (Horner in x inside Horner in y).
    pub fn eval(&self, x: &Dyadic, y: &Dyadic) -> Dyadic {
        let mut acc = Dyadic::zero();
        for row in self.rows.iter().rev() {
            let mut racc = Dyadic::zero();
            for c in row.iter().rev() {
                racc = racc.mul(x).add(&Dyadic::new(c.clone(), 0));
            }
            acc = acc.mul(y).add(&racc);
        }
        acc
    }

    /// Perturbed sign at a dyadic point (exact zeros count as positive).
    pub fn sign_at(&self, x: &Dyadic, y: &Dyadic) -> Sign {
        Sign::of_perturbed(&self.eval(x, y))
    }

    /// Interval Horner over a rectangle of inputs. Plain form, see the module
    /// docs; the output over-approximates the true range but shrinks
    /// monotonically under box refinement.
    pub fn eval_iv(&self, x: &DyInterval, y: &DyInterval) -> DyInterval {
        let zero = DyInterval::point(Dyadic::zero());
        let mut acc = zero.clone();
        for row in self.rows.iter().rev() {
            let mut racc = zero.clone();
            for c in row.iter().rev() {
                let cv = DyInterval::point(Dyadic::new(c.clone(), 0));
                racc = racc.mul(x).add(&cv);
            }
            acc = acc.mul(y).add(&racc);
        }
        acc
    }

    pub fn eval_box(&self, b: &Box2) -> DyInterval {
        self.eval_iv(b.x(), b.y())
    }

    pub fn eval_rect(&self, r: &Rect) -> DyInterval {
        self.eval_iv(&r.x, &r.y)
    }

    fn to_nested_y(&self) -> Poly1<Poly1<BigInt>> {
        Poly1::new(self.rows.iter().map(|r| Poly1::new(r.clone())).collect())
    }

    fn from_nested_y(p: &Poly1<Poly1<BigInt>>) -> Self {
        BiPoly::normalized(p.coeffs().iter().map(|c| c.coeffs().to_vec()).collect())
    }

    fn transpose(&self) -> Self {
        let nx = (self.degree_x() + 1) as usize;
        let mut rows = vec![Vec::new(); if self.is_zero() { 0 } else { nx }];
        for (j, row) in self.rows.iter().enumerate() {
            for (i, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if rows[i].len() <= j {
                    rows[i].resize(j + 1, BigInt::zero());
                }
                rows[i][j] = c.clone();
            }
        }
        BiPoly::normalized(rows)
    }

    /// Integer content: gcd of all coefficients (nonnegative).
    pub fn int_content(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for row in &self.rows {
            for c in row {
                acc = num_integer::Integer::gcd(&acc, c);
            }
        }
        acc
    }

    /// The graded-lex leading coefficient (largest i+j, ties to larger i).
    fn leading_coeff_graded(&self) -> BigInt {
        let mut best: Option<(usize, usize)> = None;
        for (j, row) in self.rows.iter().enumerate() {
            for (i, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => (i + j, i) > (bi + bj, bi),
                };
                if better {
                    best = Some((i, j));
                }
            }
        }
        match best {
            Some((i, j)) => self.rows[j][i].clone(),
            None => BigInt::zero(),
        }
    }

    /// Divide out the integer content and make the graded-lex leading
    /// coefficient positive.
    pub fn primitive_normalized(&self) -> Self {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let mut c = self.int_content();
        if self.leading_coeff_graded().is_negative() {
            c = -c;
        }
        BiPoly {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x / &c).collect())
                .collect(),
        }
    }

    /// Primitive, canonically signed gcd. The integer content of the true
    /// gcd is stripped: only the polynomial factor matters to callers.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_normalized();
        }
        if other.is_zero() {
            return self.primitive_normalized();
        }
        // Use the variable of lower joint degree as the main one; the
        // remainder sequence length is bounded by that degree.
        let dx = self.degree_x().max(other.degree_x());
        let dy = self.degree_y().max(other.degree_y());
        let g = if dy <= dx {
            let a = self.to_nested_y();
            let b = other.to_nested_y();
            BiPoly::from_nested_y(&a.gcd_poly(&b))
        } else {
            let a = self.transpose().to_nested_y();
            let b = other.transpose().to_nested_y();
            BiPoly::from_nested_y(&a.gcd_poly(&b)).transpose()
        };
        g.primitive_normalized()
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(BiPoly::zero());
        }
        if other.degree_y() > 0 {
            let q = self.to_nested_y().div_exact(&other.to_nested_y())?;
            Some(BiPoly::from_nested_y(&q))
        } else {
            // Divisor free of y: divide with x as the main variable so the
            // leading-coefficient steps stay scalar.
            let q = self
                .transpose()
                .to_nested_y()
                .div_exact(&other.transpose().to_nested_y())?;
            Some(BiPoly::from_nested_y(&q).transpose())
        }
    }

    /// Square-free part: the product of the distinct irreducible factors,
    /// primitive and canonically signed. Constants come back unchanged.
    pub fn sqfree_part(&self) -> Self {
        if self.is_zero() {
            return BiPoly::zero();
        }
        let p = self.primitive_normalized();
        let px = p.dx();
        let py = p.dy();
        if px.is_zero() && py.is_zero() {
            return p;
        }
        let g = p.gcd(&px).gcd(&py);
        if g.total_degree() == 0 {
            return p;
        }
        let q = p
            .div_exact(&g)
            .expect("gcd(f, fx, fy) divides f");
        q.primitive_normalized()
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(usize, usize, &BigInt)> = Vec::new();
        for (j, row) in self.rows.iter().enumerate() {
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    terms.push((i, j, c));
                }
            }
        }
        terms.sort_by_key(|t| std::cmp::Reverse((t.0 + t.1, t.0)));
        for (k, (i, j, c)) in terms.iter().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_one() || (*i == 0 && *j == 0) {
                parts.push(mag.to_string());
            }
            match i {
                0 => {}
                1 => parts.push("X".into()),
                _ => parts.push(format!("X^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("Y".into()),
                _ => parts.push(format!("Y^{j}")),
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

use num_traits::One;

impl std::str::FromStr for BiPoly {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        BiPoly::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dy(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    fn circle() -> BiPoly {
        BiPoly::parse("X^2+Y^2-1").unwrap()
    }

    #[test]
    fn degrees_and_height() {
        let f = BiPoly::parse("X^2*Y^2+2*X*Y").unwrap();
        assert_eq!(f.total_degree(), 4);
        assert_eq!(f.degree_x(), 2);
        assert_eq!(f.degree_y(), 2);
        assert_eq!(f.height(), BigInt::from(2));
        assert_eq!(f.height_bits(), 2);
    }

    #[test]
    fn exact_eval() {
        let f = circle();
        // (3/4)^2 + (1/2)^2 - 1 = -3/16
        assert_eq!(f.eval(&dy(3, -2), &dy(1, -1)), dy(-3, -4));
        assert_eq!(f.eval(&dy(1, 0), &dy(0, 0)), Dyadic::zero());
    }

    #[test]
    fn derivatives() {
        let f = circle();
        assert_eq!(f.dx(), BiPoly::parse("2*X").unwrap());
        assert_eq!(f.dy(), BiPoly::parse("2*Y").unwrap());
        let g = BiPoly::parse("X^2*Y^2+2*X*Y").unwrap();
        assert_eq!(g.dx(), BiPoly::parse("2*X*Y^2+2*Y").unwrap());
    }

    #[test]
    fn interval_horner_is_plain() {
        // y^2 - 2y over y in [-1,1] by Horner is (y-2)*y = [-3,3]; a
        // tightened square would give [-2,3]. The plain result is the
        // contract (inclusion monotonicity needs no more).
        let f = BiPoly::parse("Y^2-2*Y").unwrap();
        let x = DyInterval::new(dy(0, 0), dy(0, 0));
        let y = DyInterval::new(dy(-1, 0), dy(1, 0));
        let out = f.eval_iv(&x, &y);
        assert_eq!(out.lo(), &dy(-3, 0));
        assert_eq!(out.hi(), &dy(3, 0));
    }

    #[test]
    fn aux_polynomial_shape() {
        let f = circle();
        let big = f.sq_plus_grad_sq();
        // (x^2+y^2-1)^2 + 4x^2 + 4y^2
        let expect = f.mul(&f).add(&BiPoly::parse("4*X^2+4*Y^2").unwrap());
        assert_eq!(big, expect);
        assert_eq!(big.total_degree(), 4);
    }

    #[test]
    fn gcd_of_partials() {
        let f = BiPoly::parse("X^2*Y^2+2*X*Y").unwrap();
        let g = f.dx().gcd(&f.dy());
        assert_eq!(g, BiPoly::parse("X*Y+1").unwrap());
    }

    #[test]
    fn sqfree_strips_multiplicity() {
        let c = circle();
        let sq = c.mul(&c);
        assert_eq!(sq.sqfree_part(), c);
        assert_eq!(sq.neg().sqfree_part(), c);
        let scaled = sq.mul(&BiPoly::constant(4));
        assert_eq!(scaled.sqfree_part(), c);
    }

    #[test]
    fn sqfree_keeps_squarefree_inputs() {
        for s in ["Y^2-X^3", "Y^2-X^3-X^2", "(X^2+Y^2)^2-4*X^2+4*Y^2", "X-2*Y"] {
            let f = BiPoly::parse(s).unwrap();
            assert_eq!(f.sqfree_part(), f.primitive_normalized(), "{s}");
        }
        // The model singular example is already square-free.
        let f = BiPoly::parse("X^2*Y^2+2*X*Y").unwrap();
        assert_eq!(f.sqfree_part(), f);
    }

    #[test]
    fn display_roundtrip_fixed() {
        for s in ["X^2 + Y^2 - 1", "X^2*Y^2 + 2*X*Y", "-X + 5", "-X^3 - X^2 + Y^2"] {
            let f = BiPoly::parse(s).unwrap();
            assert_eq!(f.to_string(), s);
        }
    }

    fn arb_poly() -> impl Strategy<Value = BiPoly> {
        proptest::collection::vec((-9i64..10, 0u32..3, 0u32..3), 1..6)
            .prop_map(|t| BiPoly::from_monomials(&t))
    }

    proptest! {
        #[test]
        fn prop_eval_iv_contains_point_values(
            f in arb_poly(),
            xlo in -20i64..20, xw in 0i64..16,
            ylo in -20i64..20, yw in 0i64..16,
            tx in 0u32..=8, ty in 0u32..=8)
        {
            let xi = DyInterval::new(dy(xlo, -2), dy(xlo + xw, -2));
            let yi = DyInterval::new(dy(ylo, -2), dy(ylo + yw, -2));
            let pick = |iv: &DyInterval, k: u32| iv.lo().add(&iv.width().mul(&dy(k as i64, -3)));
            let x = pick(&xi, tx);
            let y = pick(&yi, ty);
            prop_assert!(f.eval_iv(&xi, &yi).contains(&f.eval(&x, &y)));
        }

        #[test]
        fn prop_eval_iv_inclusion_monotone(
            f in arb_poly(),
            xlo in -20i64..20, xw in 0i64..16, sx in 0i64..4, swx in 0i64..4,
            ylo in -20i64..20, yw in 0i64..16)
        {
            let outer_x = DyInterval::new(dy(xlo, -2), dy(xlo + xw + sx + swx, -2));
            let inner_x = DyInterval::new(dy(xlo + sx, -2), dy(xlo + sx + xw, -2));
            let yi = DyInterval::new(dy(ylo, -2), dy(ylo + yw, -2));
            let big = f.eval_iv(&outer_x, &yi);
            let small = f.eval_iv(&inner_x, &yi);
            prop_assert!(big.contains_interval(&small));
        }

        #[test]
        fn prop_display_parse_roundtrip(f in arb_poly()) {
            let s = f.to_string();
            prop_assert_eq!(BiPoly::parse(&s).unwrap(), f);
        }

        #[test]
        fn prop_gcd_divides_both(a in arb_poly(), b in arb_poly()) {
            let g = a.gcd(&b);
            if !g.is_zero() {
                prop_assert!(a.div_exact(&g).is_some());
                prop_assert!(b.div_exact(&g).is_some());
            }
        }

        #[test]
        fn prop_sqfree_idempotent(a in arb_poly()) {
            prop_assume!(!a.is_zero());
            let s = a.sqfree_part();
            prop_assert_eq!(s.sqfree_part(), s.clone());
            // Squaring never changes the square-free part.
            prop_assert_eq!(a.mul(&a).sqfree_part(), s);
        }
    }
}
