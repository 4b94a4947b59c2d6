//! Dense univariate polynomials over an exact ring, generic enough to nest:
//! `Poly1<BigInt>` is Z\[t\], `Poly1<Poly1<BigInt>>` is Z\[x\]\[y\]. The
//! nesting is what gives bivariate gcd for free, via primitive
//! pseudo-remainder sequences with content managed recursively.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact arithmetic with gcd and exact division. `gcd` must return a
/// canonically signed result (`is_sign_negative()` false) so contents are
/// reproducible; `exact_div` returns `None` unless the division is exact.
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn exact_div(&self, other: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    /// Canonical sign of the element (leading sign for nested polynomials).
    fn is_sign_negative(&self) -> bool;
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let (q, r) = self.div_rem(other);
        if Zero::is_zero(&r) {
            Some(q)
        } else {
            None
        }
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn is_sign_negative(&self) -> bool {
        self.is_negative()
    }
}

/// Dense polynomial: `coeffs[k]` multiplies `t^k`; no trailing zeros, so the
/// zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly1<R: Ring> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly1<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly1 { coeffs }
    }

    pub fn zero() -> Self {
        Poly1 { coeffs: Vec::new() }
    }

    pub fn constant(c: R) -> Self {
        Poly1::new(vec![c])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&R> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k);
            let b = other.coeffs.get(k);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly1::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly1 { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly1::new(out)
    }

    pub fn mul_scalar(&self, s: &R) -> Self {
        if s.is_zero() {
            return Poly1::zero();
        }
        Poly1::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// Multiply by t^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly1::zero();
        }
        let mut out = vec![R::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        Poly1 { coeffs: out }
    }

    /// gcd of the coefficients (canonically signed; zero for the zero
    /// polynomial).
    pub fn content(&self) -> R {
        let mut acc = R::zero();
        for c in &self.coeffs {
            acc = acc.gcd(c);
        }
        acc
    }

    /// self / content; keeps the polynomial's own sign.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Poly1::zero();
        }
        let c = self.content();
        Poly1 {
            coeffs: self
                .coeffs
                .iter()
                .map(|x| x.exact_div(&c).expect("content divides every coefficient"))
                .collect(),
        }
    }

    /// Long division; `None` unless `other` divides exactly.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly1::zero());
        }
        let dd = other.degree().unwrap();
        let mut r = self.clone();
        let dr0 = r.degree().unwrap();
        if dr0 < dd {
            return None;
        }
        let mut q = vec![R::zero(); dr0 - dd + 1];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return None;
            }
            let c = r.leading().unwrap().exact_div(other.leading().unwrap())?;
            let k = dr - dd;
            r = r.sub(&other.shift(k).mul_scalar(&c));
            q[k] = c;
            if r.is_zero() {
                return Some(Poly1::new(q));
            }
        }
        unreachable!()
    }

    /// Pseudo-remainder: repeatedly scales by other's leading coefficient so
    /// every reduction step is exact. The scaling constant is irrelevant to
    /// gcd computation because the caller takes primitive parts.
    fn pseudo_rem(&self, other: &Self) -> Self {
        let dd = other.degree().expect("pseudo_rem by zero");
        let lq = other.leading().unwrap();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let lr = r.leading().unwrap().clone();
            r = r.mul_scalar(lq).sub(&other.shift(dr - dd).mul_scalar(&lr));
        }
        r
    }

    fn sign_normalized(self) -> Self {
        if self.leading().is_some_and(|l| l.is_sign_negative()) {
            self.neg()
        } else {
            self
        }
    }

    /// gcd over R\[t\] for a gcd domain R: content gcd times the primitive
    /// pseudo-remainder sequence gcd. Result is canonically signed.
    pub fn gcd_poly(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone().sign_normalized();
        }
        if other.is_zero() {
            return self.clone().sign_normalized();
        }
        let cont = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.mul_scalar(&cont).sign_normalized()
    }
}

impl<R: Ring> Ring for Poly1<R> {
    fn zero() -> Self {
        Poly1::zero()
    }
    fn one() -> Self {
        Poly1::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        Poly1::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Poly1::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Poly1::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Poly1::mul(self, other)
    }
    fn neg(&self) -> Self {
        Poly1::neg(self)
    }
    fn exact_div(&self, other: &Self) -> Option<Self> {
        self.div_exact(other)
    }
    fn gcd(&self, other: &Self) -> Self {
        self.gcd_poly(other)
    }
    fn is_sign_negative(&self) -> bool {
        self.leading().is_some_and(|l| l.is_sign_negative())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> Poly1<BigInt> {
        Poly1::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn integer_gcd_over_zt() {
        // (t-1)(t+2) and (t-1)(t-3)
        let a = p(&[-2, 1, 1]);
        let b = p(&[3, -4, 1]);
        assert_eq!(a.gcd_poly(&b), p(&[-1, 1]));
        // content is carried: 2(t-1) and 4(t-1)(t+5)
        let c = p(&[-2, 2]);
        let d = p(&[-20, 16, 4]);
        assert_eq!(c.gcd_poly(&d), p(&[-2, 2]));
    }

    #[test]
    fn gcd_sign_is_canonical() {
        let a = p(&[1, -1]); // 1 - t
        let b = p(&[2, -2]);
        let g = a.gcd_poly(&b);
        assert!(!Ring::is_sign_negative(&g));
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn div_exact_inverts_mul() {
        let a = p(&[1, 2, 3]);
        let b = p(&[-4, 0, 5, 1]);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a.clone()));
        assert_eq!(prod.add(&Poly1::one()).div_exact(&a), None);
    }

    #[test]
    fn nested_gcd_finds_common_bivariate_factor() {
        // In Z[x][y]: a = (y + x)*x, b = (y + x)*y = y^2 + x*y.
        let x = Poly1::constant(p(&[0, 1]));
        let y: Poly1<Poly1<BigInt>> = Poly1::new(vec![Poly1::zero(), Poly1::one()]);
        let common = y.add(&x);
        let a = common.mul(&x);
        let b = common.mul(&y);
        assert_eq!(a.gcd_poly(&b), common);
    }

    #[test]
    fn coprime_polys_have_constant_gcd() {
        let a = p(&[1, 0, 1]); // t^2 + 1
        let b = p(&[-1, 1]); // t - 1
        let g = a.gcd_poly(&b);
        assert_eq!(g.degree(), Some(0));
    }
}
