//! Exact dyadic (binary rational) arithmetic.
//!
//! A [`Dyadic`] is m * 2^e with an arbitrary-precision integer mantissa. The
//! representation is canonical: the mantissa is odd or zero, and zero always
//! has exponent 0, so structural equality is value equality and the type can
//! key hash maps. Addition, subtraction and multiplication are closed; there
//! is no general division (the pipeline never needs it).
//!
//! [`DyInterval`] is a closed interval with dyadic endpoints; its operations
//! satisfy the inclusion property used by every certificate in the pipeline:
//! x in I, y in J implies x op y in I op J.
//!
//! [`Box2`] is an axis-aligned *square* with a quadtree depth attached;
//! [`Rect`] is a general axis-aligned rectangle (used for singularity
//! enclosures, which need not be square).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Binary rational m * 2^e in canonical form (m odd or zero; zero has e = 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        let mut d = Dyadic { mantissa, exponent };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exponent = 0;
            return;
        }
        let shift = self.mantissa.trailing_zeros().unwrap_or(0);
        if shift > 0 {
            self.mantissa >>= shift;
            self.exponent += shift as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: 0 }
    }

    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// 2^k as a dyadic.
    pub fn pow2(k: i64) -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: k }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// Sign as -1, 0, +1.
    pub fn signum(&self) -> i32 {
        if self.mantissa.is_zero() {
            0
        } else if self.mantissa.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn neg(&self) -> Self {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    /// self * 2^k (exact).
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.mantissa.is_zero() {
            Dyadic::zero()
        } else {
            Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + k }
        }
    }

    /// Exact midpoint of two dyadics.
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        a.add(b).mul_pow2(-1)
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // Align to the smaller exponent; the shift is bounded by the exponent
        // gap, which stays small for all quantities that are ever added.
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as u64;
        let b = &other.mantissa << (other.exponent - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        // Product of canonical forms is canonical: odd * odd is odd.
        Dyadic {
            mantissa: &self.mantissa * &other.mantissa,
            exponent: self.exponent + other.exponent,
        }
    }

    pub fn square(&self) -> Dyadic {
        self.mul(self)
    }

    /// floor(log2 |self|) for nonzero values: the unique k with
    /// 2^k <= |self| < 2^(k+1).
    pub fn floor_log2(&self) -> i64 {
        assert!(!self.is_zero(), "floor_log2 of zero");
        self.mantissa.bits() as i64 - 1 + self.exponent
    }

    /// Compare by value. Avoids materializing aligned mantissas when the
    /// magnitudes are decided by exponents alone, so comparisons against
    /// bounds like 2^-10^6 stay cheap.
    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            (s, _) => {
                let la = self.floor_log2();
                let lb = other.floor_log2();
                if la != lb {
                    let mag = la.cmp(&lb);
                    return if s > 0 { mag } else { mag.reverse() };
                }
                // Same binary magnitude window; align (gap <= bits difference).
                let e = self.exponent.min(other.exponent);
                let a = &self.mantissa << (self.exponent - e) as u64;
                let b = &other.mantissa << (other.exponent - e) as u64;
                a.cmp(&b)
            }
        }
    }

    /// Parse an integer, a fraction `p/q` with q a power of two, or a decimal
    /// string that is exactly dyadic (e.g. `0.5`, `-1.25`).
    pub fn parse(s: &str) -> crate::Result<Dyadic> {
        let s = s.trim();
        if s.is_empty() {
            return Err(crate::Error::Parse("empty number".into()));
        }
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num
                .trim()
                .parse()
                .map_err(|_| crate::Error::Parse(format!("bad numerator in {s:?}")))?;
            if let Some(exp) = den.trim().strip_prefix("2^") {
                let k: i64 = exp
                    .parse()
                    .map_err(|_| crate::Error::Parse(format!("bad exponent in {s:?}")))?;
                if k < 0 {
                    return Err(crate::Error::Parse(format!("negative exponent in {s:?}")));
                }
                return Ok(Dyadic::new(n, -k));
            }
            let d: BigInt = den
                .trim()
                .parse()
                .map_err(|_| crate::Error::Parse(format!("bad denominator in {s:?}")))?;
            if d.is_zero() || d.is_negative() {
                return Err(crate::Error::Parse(format!("denominator must be positive in {s:?}")));
            }
            let bits = d.bits();
            if d != BigInt::one() << (bits - 1) {
                return Err(crate::Error::Parse(format!(
                    "denominator of {s:?} is not a power of two; only dyadic rationals are exact here"
                )));
            }
            return Ok(Dyadic::new(n, -((bits - 1) as i64)));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let frac_digits = frac_part.len() as u32;
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(crate::Error::Parse(format!("bad decimal {s:?}")));
            }
            let negative = int_part.starts_with('-');
            let int_mag = int_part.trim_start_matches(['-', '+']);
            let int_val: BigInt = if int_mag.is_empty() {
                BigInt::zero()
            } else {
                int_mag
                    .parse()
                    .map_err(|_| crate::Error::Parse(format!("bad decimal {s:?}")))?
            };
            let frac_val: BigInt = frac_part
                .parse()
                .map_err(|_| crate::Error::Parse(format!("bad decimal {s:?}")))?;
            // int.frac = (int*10^k + frac) / 10^k; dyadic iff 5^k divides the
            // numerator.
            let ten_k = BigInt::from(10u32).pow(frac_digits);
            let five_k = BigInt::from(5u32).pow(frac_digits);
            let mut numer = &int_val * &ten_k + &frac_val;
            if &numer % &five_k != BigInt::zero() {
                return Err(crate::Error::Parse(format!(
                    "{s:?} is not an exact binary rational; write it as p/2^k or scale the input"
                )));
            }
            numer /= five_k;
            if negative {
                numer = -numer;
            }
            return Ok(Dyadic::new(numer, -(frac_digits as i64)));
        }
        let n: BigInt = s
            .parse()
            .map_err(|_| crate::Error::Parse(format!("bad number {s:?}")))?;
        Ok(Dyadic::new(n, 0))
    }

    /// Exact decimal rendering (dyadics always have finite decimal form).
    /// Falls back to `m*2^e` notation when the exponent is too large to print.
    pub fn to_decimal_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        if self.exponent >= 0 {
            if self.exponent > 4096 {
                return format!("{}*2^{}", self.mantissa, self.exponent);
            }
            return (&self.mantissa << self.exponent as u64).to_string();
        }
        let k = (-self.exponent) as u32;
        if k > 4096 {
            return format!("{}*2^{}", self.mantissa, self.exponent);
        }
        // m / 2^k = m * 5^k / 10^k.
        let scaled = (&self.mantissa * BigInt::from(5u32).pow(k)).abs();
        let digits = scaled.to_string();
        let sign = if self.is_negative() { "-" } else { "" };
        let k = k as usize;
        if digits.len() > k {
            let (int_part, frac_part) = digits.split_at(digits.len() - k);
            format!("{sign}{int_part}.{frac_part}")
        } else {
            format!("{sign}0.{}{digits}", "0".repeat(k - digits.len()))
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

/// Perturbed sign: exact zeros count as positive. Applying this at every
/// sample point consistently replaces f by an infinitesimally shifted curve,
/// which is what makes corner signs well defined on the zero set itself.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    pub fn of_perturbed(v: &Dyadic) -> Sign {
        if v.is_negative() {
            Sign::Neg
        } else {
            Sign::Pos
        }
    }
}

/// Closed interval [lo, hi] with dyadic endpoints.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DyInterval {
    lo: Dyadic,
    hi: Dyadic,
}

impl DyInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        DyInterval { lo, hi }
    }

    pub fn point(v: Dyadic) -> Self {
        DyInterval { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn midpoint(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn contains(&self, v: &Dyadic) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn contains_interval(&self, other: &DyInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Positive-length overlap test (shared endpoints do not count).
    pub fn overlaps_interior(&self, other: &DyInterval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    pub fn intersect(&self, other: &DyInterval) -> Option<DyInterval> {
        let lo = if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi <= other.hi { self.hi.clone() } else { other.hi.clone() };
        if lo <= hi {
            Some(DyInterval { lo, hi })
        } else {
            None
        }
    }

    pub fn add(&self, other: &DyInterval) -> DyInterval {
        DyInterval { lo: self.lo.add(&other.lo), hi: self.hi.add(&other.hi) }
    }

    pub fn sub(&self, other: &DyInterval) -> DyInterval {
        DyInterval { lo: self.lo.sub(&other.hi), hi: self.hi.sub(&other.lo) }
    }

    pub fn neg(&self) -> DyInterval {
        DyInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn mul(&self, other: &DyInterval) -> DyInterval {
        let candidates = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        DyInterval { lo, hi }
    }

    pub fn mul_scalar(&self, s: &Dyadic) -> DyInterval {
        let a = self.lo.mul(s);
        let b = self.hi.mul(s);
        if a <= b {
            DyInterval { lo: a, hi: b }
        } else {
            DyInterval { lo: b, hi: a }
        }
    }

    /// k-th power with the even-power tightening: an interval straddling zero
    /// maps to [0, max^k] for even k instead of the naive product bound.
    pub fn pow(&self, k: u32) -> DyInterval {
        if k == 0 {
            return DyInterval::point(Dyadic::one());
        }
        if k == 1 {
            return self.clone();
        }
        let lo_pows = pow_dyadic(&self.lo, k);
        let hi_pows = pow_dyadic(&self.hi, k);
        if !self.lo.is_negative() {
            DyInterval { lo: lo_pows, hi: hi_pows }
        } else if !self.hi.is_positive() {
            if k.is_multiple_of(2) {
                DyInterval { lo: hi_pows, hi: lo_pows }
            } else {
                DyInterval { lo: lo_pows, hi: hi_pows }
            }
        } else if k.is_multiple_of(2) {
            let hi = if lo_pows > hi_pows { lo_pows } else { hi_pows };
            DyInterval { lo: Dyadic::zero(), hi }
        } else {
            DyInterval { lo: lo_pows, hi: hi_pows }
        }
    }
}

fn pow_dyadic(base: &Dyadic, k: u32) -> Dyadic {
    let mut acc = Dyadic::one();
    for _ in 0..k {
        acc = acc.mul(base);
    }
    acc
}

/// Quadtree cell address: depth plus grid coordinates in units of the cell
/// width. Coordinates may be negative or out of range for boxes that lie
/// outside the root square (complementary boxes of the outermost collar).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct CellCoords {
    pub depth: u32,
    pub gx: i64,
    pub gy: i64,
}

impl CellCoords {
    pub fn parent(&self) -> CellCoords {
        assert!(self.depth > 0);
        CellCoords { depth: self.depth - 1, gx: self.gx.div_euclid(2), gy: self.gy.div_euclid(2) }
    }

    /// Ancestor at the given shallower depth.
    pub fn ancestor_at(&self, depth: u32) -> CellCoords {
        assert!(depth <= self.depth);
        let shift = (self.depth - depth) as i64;
        CellCoords {
            depth,
            gx: self.gx.div_euclid(1 << shift),
            gy: self.gy.div_euclid(1 << shift),
        }
    }

    /// Children in a fixed order: (0,0) (1,0) (0,1) (1,1) offsets.
    pub fn children(&self) -> [CellCoords; 4] {
        let d = self.depth + 1;
        let x = self.gx * 2;
        let y = self.gy * 2;
        [
            CellCoords { depth: d, gx: x, gy: y },
            CellCoords { depth: d, gx: x + 1, gy: y },
            CellCoords { depth: d, gx: x, gy: y + 1 },
            CellCoords { depth: d, gx: x + 1, gy: y + 1 },
        ]
    }

    pub fn step(&self, side: Side) -> CellCoords {
        let (dx, dy) = side.offset();
        CellCoords { depth: self.depth, gx: self.gx + dx, gy: self.gy + dy }
    }

    /// True when `self` equals `other` or lies inside it.
    pub fn within(&self, other: &CellCoords) -> bool {
        self.depth >= other.depth && self.ancestor_at(other.depth) == *other
    }
}

/// Sides of an axis-aligned box.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Side {
    West,
    East,
    South,
    North,
}

pub const SIDES: [Side; 4] = [Side::West, Side::East, Side::South, Side::North];

impl Side {
    pub fn offset(&self) -> (i64, i64) {
        match self {
            Side::West => (-1, 0),
            Side::East => (1, 0),
            Side::South => (0, -1),
            Side::North => (0, 1),
        }
    }

    pub fn opposite(&self) -> Side {
        match self {
            Side::West => Side::East,
            Side::East => Side::West,
            Side::South => Side::North,
            Side::North => Side::South,
        }
    }

    pub fn is_vertical(&self) -> bool {
        matches!(self, Side::West | Side::East)
    }
}

/// Axis-aligned square with its quadtree depth.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Box2 {
    x: DyInterval,
    y: DyInterval,
    depth: u32,
}

impl Box2 {
    pub fn new(x: DyInterval, y: DyInterval, depth: u32) -> Self {
        assert_eq!(x.width(), y.width(), "Box2 must be square");
        Box2 { x, y, depth }
    }

    /// Square [cx-h, cx+h] x [cy-h, cy+h] where h = width/2.
    pub fn centered(cx: &Dyadic, cy: &Dyadic, width: &Dyadic, depth: u32) -> Self {
        let h = width.mul_pow2(-1);
        Box2 {
            x: DyInterval::new(cx.sub(&h), cx.add(&h)),
            y: DyInterval::new(cy.sub(&h), cy.add(&h)),
            depth,
        }
    }

    pub fn x(&self) -> &DyInterval {
        &self.x
    }

    pub fn y(&self) -> &DyInterval {
        &self.y
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn width(&self) -> Dyadic {
        self.x.width()
    }

    pub fn center(&self) -> (Dyadic, Dyadic) {
        (self.x.midpoint(), self.y.midpoint())
    }

    /// Children in the order SW, SE, NW, NE (matching `CellCoords::children`).
    pub fn split(&self) -> [Box2; 4] {
        let mx = self.x.midpoint();
        let my = self.y.midpoint();
        let d = self.depth + 1;
        let xl = DyInterval::new(self.x.lo().clone(), mx.clone());
        let xr = DyInterval::new(mx, self.x.hi().clone());
        let yl = DyInterval::new(self.y.lo().clone(), my.clone());
        let yu = DyInterval::new(my, self.y.hi().clone());
        [
            Box2 { x: xl.clone(), y: yl.clone(), depth: d },
            Box2 { x: xr.clone(), y: yl, depth: d },
            Box2 { x: xl, y: yu.clone(), depth: d },
            Box2 { x: xr, y: yu, depth: d },
        ]
    }

    /// Corners counterclockwise from the lower-left:
    /// (lo,lo), (hi,lo), (hi,hi), (lo,hi).
    pub fn corners(&self) -> [(Dyadic, Dyadic); 4] {
        [
            (self.x.lo().clone(), self.y.lo().clone()),
            (self.x.hi().clone(), self.y.lo().clone()),
            (self.x.hi().clone(), self.y.hi().clone()),
            (self.x.lo().clone(), self.y.hi().clone()),
        ]
    }

    pub fn contains_point(&self, px: &Dyadic, py: &Dyadic) -> bool {
        self.x.contains(px) && self.y.contains(py)
    }

    /// Open-overlap test: true when the interiors intersect.
    pub fn intersects_interior(&self, other: &Box2) -> bool {
        self.x.overlaps_interior(&other.x) && self.y.overlaps_interior(&other.y)
    }

    pub fn contains_box(&self, other: &Box2) -> bool {
        self.x.contains_interval(&other.x) && self.y.contains_interval(&other.y)
    }

    /// Mirror image across the given side (same width and depth).
    pub fn mirror_across(&self, side: Side) -> Box2 {
        let w = self.width();
        match side {
            Side::West => Box2 {
                x: DyInterval::new(self.x.lo().sub(&w), self.x.lo().clone()),
                y: self.y.clone(),
                depth: self.depth,
            },
            Side::East => Box2 {
                x: DyInterval::new(self.x.hi().clone(), self.x.hi().add(&w)),
                y: self.y.clone(),
                depth: self.depth,
            },
            Side::South => Box2 {
                x: self.x.clone(),
                y: DyInterval::new(self.y.lo().sub(&w), self.y.lo().clone()),
                depth: self.depth,
            },
            Side::North => Box2 {
                x: self.x.clone(),
                y: DyInterval::new(self.y.hi().clone(), self.y.hi().add(&w)),
                depth: self.depth,
            },
        }
    }

    /// The side as a segment (endpoints ordered by increasing coordinate).
    pub fn side_segment(&self, side: Side) -> ((Dyadic, Dyadic), (Dyadic, Dyadic)) {
        match side {
            Side::West => (
                (self.x.lo().clone(), self.y.lo().clone()),
                (self.x.lo().clone(), self.y.hi().clone()),
            ),
            Side::East => (
                (self.x.hi().clone(), self.y.lo().clone()),
                (self.x.hi().clone(), self.y.hi().clone()),
            ),
            Side::South => (
                (self.x.lo().clone(), self.y.lo().clone()),
                (self.x.hi().clone(), self.y.lo().clone()),
            ),
            Side::North => (
                (self.x.lo().clone(), self.y.hi().clone()),
                (self.x.hi().clone(), self.y.hi().clone()),
            ),
        }
    }

    pub fn as_rect(&self) -> Rect {
        Rect { x: self.x.clone(), y: self.y.clone() }
    }
}

/// Axis-aligned rectangle (not necessarily square).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rect {
    pub x: DyInterval,
    pub y: DyInterval,
}

impl Rect {
    pub fn new(x: DyInterval, y: DyInterval) -> Self {
        Rect { x, y }
    }

    /// Max side length (the box metric diameter).
    pub fn diameter(&self) -> Dyadic {
        let wx = self.x.width();
        let wy = self.y.width();
        if wx >= wy {
            wx
        } else {
            wy
        }
    }

    pub fn center(&self) -> (Dyadic, Dyadic) {
        (self.x.midpoint(), self.y.midpoint())
    }

    pub fn contains_point(&self, px: &Dyadic, py: &Dyadic) -> bool {
        self.x.contains(px) && self.y.contains(py)
    }

    pub fn union(&self, other: &Rect) -> Rect {
        let xlo = if self.x.lo() <= other.x.lo() { self.x.lo() } else { other.x.lo() };
        let xhi = if self.x.hi() >= other.x.hi() { self.x.hi() } else { other.x.hi() };
        let ylo = if self.y.lo() <= other.y.lo() { self.y.lo() } else { other.y.lo() };
        let yhi = if self.y.hi() >= other.y.hi() { self.y.hi() } else { other.y.hi() };
        Rect {
            x: DyInterval::new(xlo.clone(), xhi.clone()),
            y: DyInterval::new(ylo.clone(), yhi.clone()),
        }
    }

    pub fn intersects_interior_box(&self, b: &Box2) -> bool {
        self.x.overlaps_interior(b.x()) && self.y.overlaps_interior(b.y())
    }
}
