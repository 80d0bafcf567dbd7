//! Exact arithmetic in the ring of integers `Z[w]` of a real quadratic field.
//!
//! Elements are stored as coordinates `a + b*w` in the integral basis
//! `{1, w}`, where `w = sqrt(D)` when `D = 2, 3 (mod 4)` and
//! `w = (1 + sqrt(D)) / 2` when `D = 1 (mod 4)`. Sign tests convert to the
//! half form `(X + Y*sqrt(D)) / 2` and never touch floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cf::{CfExpansion, Convergent};
use crate::error::{Error, Result};
use crate::semigroup::BlockLayout;

/// Which of the two integral-basis conventions the field uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OmegaCase {
    /// `D = 2, 3 (mod 4)`, `w = sqrt(D)`.
    SqrtD,
    /// `D = 1 (mod 4)`, `w = (1 + sqrt(D)) / 2`.
    HalfIntegral,
}

/// One of the two real embeddings of the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Embedding {
    /// `sqrt(D) -> +sqrt(D)`.
    First,
    /// `sqrt(D) -> -sqrt(D)`, i.e. the Galois conjugate.
    Second,
}

/// A validated squarefree `D` together with every constant derived from it.
///
/// The context also owns the purely periodic expansion and a growable cache
/// of convergents. The cache sits behind a lock, so a context can be shared
/// freely between threads.
pub struct FieldContext {
    d: u64,
    delta: u64,
    case: OmegaCase,
    d_big: BigInt,
    delta_big: BigInt,
    trace_omega: BigInt,
    norm_omega: BigInt,
    pub(crate) expansion: OnceLock<CfExpansion>,
    pub(crate) convergents: RwLock<Vec<Arc<Convergent>>>,
    pub(crate) blocks: OnceLock<BlockLayout>,
}

impl fmt::Debug for FieldContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldContext")
            .field("d", &self.d)
            .field("delta", &self.delta)
            .field("case", &self.case)
            .finish()
    }
}

/// Smallest square `p^2 > 1` dividing `d`, by trial division.
pub fn square_factor(d: u64) -> Option<u64> {
    let mut p = 2u64;
    while p.saturating_mul(p) <= d {
        if d.is_multiple_of(p * p) {
            return Some(p * p);
        }
        p += 1;
    }
    None
}

pub fn is_squarefree(d: u64) -> bool {
    square_factor(d).is_none()
}

impl FieldContext {
    /// Validates `d` and builds the context.
    pub fn new(d: i64) -> Result<Self> {
        if d < 2 {
            return Err(Error::DiscriminantTooSmall(d));
        }
        let du = d as u64;
        if let Some(factor) = square_factor(du) {
            return Err(Error::NotSquarefree { d, factor });
        }
        let (case, delta, trace, norm) = if du % 4 == 1 {
            (OmegaCase::HalfIntegral, du, 1i64, (1 - d) / 4)
        } else {
            (OmegaCase::SqrtD, 4 * du, 0i64, -d)
        };
        Ok(FieldContext {
            d: du,
            delta,
            case,
            d_big: BigInt::from(du),
            delta_big: BigInt::from(delta),
            trace_omega: BigInt::from(trace),
            norm_omega: BigInt::from(norm),
            expansion: OnceLock::new(),
            convergents: RwLock::new(Vec::new()),
            blocks: OnceLock::new(),
        })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// The field discriminant.
    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn omega_case(&self) -> OmegaCase {
        self.case
    }

    pub fn d_big(&self) -> &BigInt {
        &self.d_big
    }

    pub fn delta_big(&self) -> &BigInt {
        &self.delta_big
    }

    /// `Tr(w)`, either 0 or 1.
    pub fn trace_omega(&self) -> &BigInt {
        &self.trace_omega
    }

    /// `N(w)`, either `-D` or `(1 - D) / 4`.
    pub fn norm_omega(&self) -> &BigInt {
        &self.norm_omega
    }

    pub fn omega(&self) -> QuadInt {
        QuadInt::new(0, 1)
    }

    pub fn mul(&self, x: &QuadInt, y: &QuadInt) -> QuadInt {
        // w^2 = Tr(w) w - N(w)
        let bb = &x.b * &y.b;
        let a = &x.a * &y.a - &self.norm_omega * &bb;
        let b = &x.a * &y.b + &y.a * &x.b + &self.trace_omega * &bb;
        QuadInt { a, b }
    }

    pub fn square(&self, x: &QuadInt) -> QuadInt {
        self.mul(x, x)
    }

    pub fn pow(&self, x: &QuadInt, mut exp: u32) -> QuadInt {
        let mut base = x.clone();
        let mut acc = QuadInt::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// `a + b w'` rewritten in the basis `{1, w}`.
    pub fn conjugate(&self, x: &QuadInt) -> QuadInt {
        QuadInt {
            a: &x.a + &x.b * &self.trace_omega,
            b: -&x.b,
        }
    }

    pub fn norm(&self, x: &QuadInt) -> BigInt {
        &x.a * &x.a + &self.trace_omega * &x.a * &x.b + &self.norm_omega * &x.b * &x.b
    }

    pub fn trace(&self, x: &QuadInt) -> BigInt {
        BigInt::from(2) * &x.a + &self.trace_omega * &x.b
    }

    /// Returns `(X, Y)` with `x = (X + Y sqrt(D)) / 2`.
    pub fn half_form(&self, x: &QuadInt) -> (BigInt, BigInt) {
        match self.case {
            OmegaCase::SqrtD => (BigInt::from(2) * &x.a, BigInt::from(2) * &x.b),
            OmegaCase::HalfIntegral => (BigInt::from(2) * &x.a + &x.b, x.b.clone()),
        }
    }

    /// Inverse of [`FieldContext::half_form`]; `None` when `(X + Y sqrt(D)) / 2`
    /// is not an algebraic integer.
    pub fn from_half_form(&self, x: &BigInt, y: &BigInt) -> Option<QuadInt> {
        match self.case {
            OmegaCase::SqrtD => {
                if x.is_odd() || y.is_odd() {
                    return None;
                }
                Some(QuadInt::from_big(x / 2, y / 2))
            }
            OmegaCase::HalfIntegral => {
                let diff = x - y;
                if diff.is_odd() {
                    return None;
                }
                Some(QuadInt::from_big(diff / 2, y.clone()))
            }
        }
    }

    /// Exact sign of `x` under the chosen embedding.
    pub fn sign_at(&self, x: &QuadInt, which: Embedding) -> Ordering {
        let (hx, hy) = self.half_form(x);
        match which {
            Embedding::First => sign_plus_sqrt(&hx, &hy, &self.d_big),
            Embedding::Second => sign_plus_sqrt(&hx, &(-hy), &self.d_big),
        }
    }

    /// Orders `x` against `y` at one real embedding.
    pub fn compare_embedding(&self, x: &QuadInt, y: &QuadInt, which: Embedding) -> Ordering {
        self.sign_at(&(x - y), which)
    }

    pub fn is_totally_positive(&self, x: &QuadInt) -> bool {
        self.sign_at(x, Embedding::First) == Ordering::Greater
            && self.sign_at(x, Embedding::Second) == Ordering::Greater
    }

    /// `x > y` in the totally positive order, i.e. `x - y` is totally positive.
    pub fn succ(&self, x: &QuadInt, y: &QuadInt) -> bool {
        self.is_totally_positive(&(x - y))
    }

    /// `x >= y` in the totally positive order (`x - y` is zero or totally positive).
    pub fn succ_eq(&self, x: &QuadInt, y: &QuadInt) -> bool {
        let diff = x - y;
        diff.is_zero() || self.is_totally_positive(&diff)
    }

    /// `floor` of `x` evaluated at one embedding.
    pub fn floor_at(&self, x: &QuadInt, which: Embedding) -> BigInt {
        let (hx, hy) = self.half_form(x);
        let hy = match which {
            Embedding::First => hy,
            Embedding::Second => -hy,
        };
        floor_surd(&hx, &hy, &self.d_big, &BigInt::from(2))
    }

    /// `floor(z / w)` at one embedding, for totally positive `w`.
    pub fn floor_ratio(&self, z: &QuadInt, w: &QuadInt, which: Embedding) -> BigInt {
        // z / w = z w' / N(w), and N(w) > 0 for totally positive w
        let num = self.mul(z, &self.conjugate(w));
        let den = self.norm(w);
        debug_assert!(den.is_positive());
        let (hx, hy) = self.half_form(&num);
        let hy = match which {
            Embedding::First => hy,
            Embedding::Second => -hy,
        };
        floor_surd(&hx, &hy, &self.d_big, &(BigInt::from(2) * den))
    }

    /// `floor(z / sqrt(Delta))` at the first embedding.
    pub fn floor_over_sqrt_delta(&self, z: &QuadInt) -> BigInt {
        // (X + Y sqrt D) / 2 / sqrt(Delta) = (Y D + X sqrt D) / (2 D)  (Delta = D)
        //                                  = (Y D + X sqrt D) / (4 D)  (Delta = 4D)
        let (hx, hy) = self.half_form(z);
        let den = match self.case {
            OmegaCase::SqrtD => BigInt::from(4) * &self.d_big,
            OmegaCase::HalfIntegral => BigInt::from(2) * &self.d_big,
        };
        floor_surd(&(hy * &self.d_big), &hx, &self.d_big, &den)
    }

    /// All totally positive elements with trace exactly `t`.
    pub fn totally_positive_with_trace(&self, t: i64) -> Vec<QuadInt> {
        let mut out = Vec::new();
        if t <= 0 {
            return out;
        }
        let t_big = BigInt::from(t);
        let tt = &t_big * &t_big;
        // half form: X = t, tp iff Y^2 D < t^2
        let ymax = (&tt / &self.d_big).sqrt();
        let ymax: i64 = ymax.try_into().unwrap_or(i64::MAX);
        for y in -ymax..=ymax {
            let yb = BigInt::from(y);
            if &yb * &yb * &self.d_big >= tt {
                continue;
            }
            if let Some(q) = self.from_half_form(&t_big, &yb) {
                out.push(q);
            }
        }
        out
    }
}

/// Sign of `x + y sqrt(r)` for a positive non-square `r`.
pub fn sign_plus_sqrt(x: &BigInt, y: &BigInt, r: &BigInt) -> Ordering {
    let xs = x.sign();
    let ys = y.sign();
    use num_bigint::Sign::*;
    match (xs, ys) {
        (NoSign, NoSign) => Ordering::Equal,
        (Plus | NoSign, Plus | NoSign) => Ordering::Greater,
        (Minus | NoSign, Minus | NoSign) => Ordering::Less,
        (Plus, Minus) => (x * x).cmp(&(y * y * r)),
        (Minus, Plus) => (y * y * r).cmp(&(x * x)),
    }
}

/// `floor(y sqrt(r))` for positive non-square `r`.
pub fn floor_mul_sqrt(y: &BigInt, r: &BigInt) -> BigInt {
    if y.is_zero() {
        return BigInt::zero();
    }
    let s = (y * y * r).sqrt();
    if y.is_positive() {
        s
    } else {
        -s - 1
    }
}

/// `floor((x + y sqrt(r)) / c)` for `c > 0` and positive non-square `r`.
pub fn floor_surd(x: &BigInt, y: &BigInt, r: &BigInt, c: &BigInt) -> BigInt {
    debug_assert!(c.is_positive());
    (x + floor_mul_sqrt(y, r)).div_floor(c)
}

/// `ceil((x + y sqrt(r)) / c)` for `c > 0`.
pub fn ceil_surd(x: &BigInt, y: &BigInt, r: &BigInt, c: &BigInt) -> BigInt {
    -floor_surd(&-x, &-y, r, c)
}

/// An element `a + b w` of the ring of integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadInt {
    a: BigInt,
    b: BigInt,
}

impl QuadInt {
    pub fn new(a: i64, b: i64) -> Self {
        QuadInt {
            a: BigInt::from(a),
            b: BigInt::from(b),
        }
    }

    pub fn from_big(a: BigInt, b: BigInt) -> Self {
        QuadInt { a, b }
    }

    pub fn from_int<T: Into<BigInt>>(k: T) -> Self {
        QuadInt {
            a: k.into(),
            b: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        QuadInt::new(0, 0)
    }

    pub fn one() -> Self {
        QuadInt::new(1, 0)
    }

    /// Coefficient of 1.
    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// Coefficient of `w`.
    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn scalar_mul<T: Into<BigInt>>(&self, k: T) -> QuadInt {
        let k = k.into();
        QuadInt {
            a: &self.a * &k,
            b: &self.b * &k,
        }
    }

    pub fn scalar_mul_big(&self, k: &BigInt) -> QuadInt {
        QuadInt {
            a: &self.a * k,
            b: &self.b * k,
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let coef = if self.b.abs().is_one() {
            String::new()
        } else {
            self.b.abs().to_string()
        };
        if self.a.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{sign}{coef}w")
        } else {
            let sign = if self.b.is_negative() { '-' } else { '+' };
            write!(f, "{}{sign}{coef}w", self.a)
        }
    }
}

impl Add<&QuadInt> for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: QuadInt) -> QuadInt {
        QuadInt {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
        }
    }
}

impl Add<&QuadInt> for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: self.a + &rhs.a,
            b: self.b + &rhs.b,
        }
    }
}

impl Sub<&QuadInt> for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: QuadInt) -> QuadInt {
        QuadInt {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
        }
    }
}

impl Sub<&QuadInt> for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        QuadInt {
            a: self.a - &rhs.a,
            b: self.b - &rhs.b,
        }
    }
}

impl AddAssign<&QuadInt> for QuadInt {
    fn add_assign(&mut self, rhs: &QuadInt) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&QuadInt> for QuadInt {
    fn sub_assign(&mut self, rhs: &QuadInt) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            a: -&self.a,
            b: -&self.b,
        }
    }
}
