//! Norm identities and bounds for `e alpha_{i,r} + f alpha_{i,r+1}`.
//!
//! Every comparison involving `sqrt(Delta)` or a tail `gamma` is cleared to
//! integers: tails are `(P + sqrt(Delta)) / Q`, and surd inequalities with
//! positive sides are squared.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldContext, QuadInt};

/// `a + b sqrt(Delta)` with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Surd {
    a: BigInt,
    b: BigInt,
}

impl Surd {
    fn new(a: BigInt, b: BigInt) -> Self {
        Surd { a, b }
    }

    fn mul(&self, other: &Surd, delta: &BigInt) -> Surd {
        Surd {
            a: &self.a * &other.a + &self.b * &other.b * delta,
            b: &self.a * &other.b + &self.b * &other.a,
        }
    }
}

/// Lower-bound regimes; several may apply to one element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LowerCase {
    /// `f > 0, r = 0`: `N > e f sqrt(Delta)`.
    A,
    /// `f > 0, 1 <= r <= c u - 1`: `N > (1 - c)(e + f)^2 sqrt(Delta)`, `c = num / den`.
    B { num: u64, den: u64 },
    /// `f > 0, (u + 1) / 2 < r <= u - 1`: `N > e (e + f) sqrt(Delta) / 2`.
    C,
    /// `f = 0, r > 0`: `N > e^2 (1 - 1/u) sqrt(Delta)`.
    D,
    /// `f = r = 0`; no lower bound is claimed.
    MultipleOfConvergent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub element: QuadInt,
    pub i: i64,
    pub r: i64,
    pub e: BigInt,
    pub f: BigInt,
    pub norm: BigInt,
    /// `N < sqrt(Delta) ((r+1) e + (r+2) f)(e + f)`.
    pub upper1_holds: bool,
    /// `N < (e + f)^2 Delta / (4 N_{i+1})`.
    pub upper2_holds: bool,
    /// `N = (e + f)^2 Delta / (4 N_{i+1})` exactly; happens when
    /// `(e + f) T_{i+1} = (r e + (r+1) f) N_{i+1}`.
    pub upper2_tight: bool,
    /// Applicable lower-bound cases and whether each holds.
    pub lower: Vec<(LowerCase, bool)>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.upper1_holds && self.upper2_holds && self.lower.iter().all(|(_, ok)| *ok)
    }
}

/// The cap `7 Delta + (6 Delta + 2) sqrt(Delta)` on norms of uniquely
/// decomposable elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UdNormCap {
    pub rational: BigInt,
    pub surd_coeff: BigInt,
    delta: BigInt,
}

impl UdNormCap {
    /// Strict `n < cap`.
    pub fn admits(&self, n: &BigInt) -> bool {
        let lhs = n - &self.rational;
        if !lhs.is_positive() {
            return true;
        }
        &lhs * &lhs < &self.surd_coeff * &self.surd_coeff * &self.delta
    }

    /// Largest integer below the cap.
    pub fn floor(&self) -> BigInt {
        let root = (&self.surd_coeff * &self.surd_coeff * &self.delta).sqrt();
        &self.rational + root
    }
}

/// Checks `N > k sqrt(Delta)` for `N, k >= 0`, given `num / den = k`.
fn exceeds_sqrt_multiple(n: &BigInt, k_num: &BigInt, k_den: &BigInt, delta: &BigInt) -> bool {
    let lhs = n * k_den;
    lhs.is_positive() && &lhs * &lhs > k_num * k_num * delta
}

/// Checks `N < k sqrt(Delta)` for `N, k >= 0`.
fn below_sqrt_multiple(n: &BigInt, k: &BigInt, delta: &BigInt) -> bool {
    n * n < k * k * delta
}

impl FieldContext {
    fn n_conv(&self, i: i64) -> BigInt {
        self.convergent(i)
            .expect("convergent index >= -1")
            .n_abs
            .clone()
    }

    fn t_conv(&self, i: i64) -> BigInt {
        self.convergent(i)
            .expect("convergent index >= 0")
            .t
            .clone()
            .expect("T_i exists for i >= 0")
    }

    /// Checks the tail recurrences for `N_{i+1}` and `T_{i+1}` for
    /// `-1 <= i <= i_max`. Returns the first failing index.
    pub fn norm_recurrence_check(&self, i_max: i64) -> std::result::Result<(), i64> {
        let delta = self.delta_big();
        let t_omega = self.trace_omega();
        for i in -1..=i_max {
            let g = self.gamma_surd(i + 2).expect("i + 2 >= 1");
            let (p, q) = (g.p_big(), g.q_big());
            let n_i = self.n_conv(i);
            let n_next = self.n_conv(i + 1);
            // N_{i+1} gamma^2 = sqrt(Delta) gamma - N_i, times Q^2
            let lhs = Surd::new(&n_next * (&p * &p + delta), &n_next * BigInt::from(2) * &p);
            let rhs = Surd::new(delta * &q - &n_i * &q * &q, &p * &q);
            if lhs != rhs {
                return Err(i);
            }
            // (-1)^{i+1} T_{i+1} gamma = w gamma - N_i, with w = (tr w + sqrt(Delta)) / 2, times 2Q
            let sign = if (i + 1).rem_euclid(2) == 0 { 1 } else { -1 };
            let t = self.t_conv(i + 1) * sign;
            let lhs = Surd::new(BigInt::from(2) * &t * &p, BigInt::from(2) * &t);
            let rhs = Surd::new(
                t_omega * &p + delta - BigInt::from(2) * &n_i * &q,
                t_omega + &p,
            );
            if lhs != rhs {
                return Err(i);
            }
        }
        Ok(())
    }

    /// `N(m alpha_i + n alpha_{i+1})`, computed directly and through the
    /// factored tail form; panics if the two disagree.
    pub fn norm_combination(&self, i: i64, m: &BigInt, n: &BigInt) -> Result<BigInt> {
        check_odd(i)?;
        let x = self.alpha(i).scalar_mul_big(m) + self.alpha(i + 1).scalar_mul_big(n);
        let direct = self.norm(&x);

        let delta = self.delta_big();
        let g = self.gamma_surd(i + 2).expect("i + 2 >= 1");
        let (p, q) = (g.p_big(), g.q_big());
        let n_i = self.n_conv(i);
        // 1/gamma = Q (P - sqrt(Delta)) / E with E = P^2 - Delta
        let e = &p * &p - delta;
        let first = Surd::new(m * &e - n * &q * &p, n * &q);
        let second = Surd::new(m * &n_i * &e - n * &n_i * &q * &p, n * &e + n * &n_i * &q);
        let prod = first.mul(&second, delta);
        let factored_matches = prod.b.is_zero() && prod.a == &direct * &e * &e;
        assert!(
            factored_matches,
            "factored norm disagrees with direct norm at i = {i}, m = {m}, n = {n}"
        );
        Ok(direct)
    }

    /// Evaluates the upper and lower bounds for `e alpha_{i,r} + f alpha_{i,r+1}`;
    /// `c` is the case (b) parameter `num / den`, defaulting to `1/2`.
    pub fn bounds_check(
        &self,
        i: i64,
        r: i64,
        e: &BigInt,
        f: &BigInt,
        c: Option<(u64, u64)>,
    ) -> Result<BoundReport> {
        check_odd(i)?;
        let u = self.expansion().u(i + 2) as i64;
        if r < 0 || r >= u {
            return Err(Error::InvalidParameter(format!(
                "r = {r} outside 0..{u} for i = {i}"
            )));
        }
        if e < &BigInt::one() || f.is_negative() {
            return Err(Error::InvalidParameter(format!(
                "need e >= 1 and f >= 0, got e = {e}, f = {f}"
            )));
        }
        let (c_num, c_den) = c.unwrap_or((1, 2));
        if c_num == 0 || c_num >= c_den {
            return Err(Error::InvalidParameter(format!(
                "c = {c_num}/{c_den} is not in (0, 1)"
            )));
        }

        let delta = self.delta_big();
        let rb = BigInt::from(r);
        let element = self.semiconvergent(i, &rb).scalar_mul_big(e)
            + self.semiconvergent(i, &(&rb + 1)).scalar_mul_big(f);
        let norm = self.norm(&element);
        let ef = e + f;

        let k1 = (&(&rb + 1) * e + &(&rb + 2) * f) * &ef;
        let upper1_holds = below_sqrt_multiple(&norm, &k1, delta);
        let scaled = BigInt::from(4) * self.n_conv(i + 1) * &norm;
        let cap2 = &ef * &ef * delta;
        let upper2_holds = scaled < cap2;
        let upper2_tight = scaled == cap2;

        let one = BigInt::one();
        let mut lower = Vec::new();
        if f.is_positive() {
            if r == 0 {
                lower.push((
                    LowerCase::A,
                    exceeds_sqrt_multiple(&norm, &(e * f), &one, delta),
                ));
            }
            if r >= 1 && (r + 1) as u128 * c_den as u128 <= c_num as u128 * u as u128 {
                let k = BigInt::from(c_den - c_num) * &ef * &ef;
                lower.push((
                    LowerCase::B {
                        num: c_num,
                        den: c_den,
                    },
                    exceeds_sqrt_multiple(&norm, &k, &BigInt::from(c_den), delta),
                ));
            }
            if 2 * r > u + 1 {
                lower.push((
                    LowerCase::C,
                    exceeds_sqrt_multiple(&norm, &(e * &ef), &BigInt::from(2), delta),
                ));
            }
        } else if r > 0 {
            let k = e * e * BigInt::from(u - 1);
            lower.push((
                LowerCase::D,
                exceeds_sqrt_multiple(&norm, &k, &BigInt::from(u), delta),
            ));
        } else {
            lower.push((LowerCase::MultipleOfConvergent, true));
        }

        Ok(BoundReport {
            element,
            i,
            r,
            e: e.clone(),
            f: f.clone(),
            norm,
            upper1_holds,
            upper2_holds,
            upper2_tight,
            lower,
        })
    }

    pub fn ud_norm_bound(&self) -> UdNormCap {
        let delta = self.delta_big().clone();
        UdNormCap {
            rational: BigInt::from(7) * &delta,
            surd_coeff: BigInt::from(6) * &delta + 2,
            delta,
        }
    }

    /// Every representative of the uniquely decomposable classes has norm
    /// strictly below the cap.
    pub fn audit_ud_norms(&self) -> bool {
        let cap = self.ud_norm_bound();
        self.ud_representatives()
            .iter()
            .all(|x| cap.admits(&self.norm(x)))
    }
}

fn check_odd(i: i64) -> Result<()> {
    if i < -1 || i.rem_euclid(2) != 1 {
        return Err(Error::InvalidParameter(format!(
            "index i = {i} must be odd and >= -1"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: i64) -> FieldContext {
        FieldContext::new(d).unwrap()
    }

    fn big(k: i64) -> BigInt {
        BigInt::from(k)
    }

    #[test]
    fn recurrences_hold() {
        for d in [2i64, 3, 5, 6, 7, 13, 21, 94] {
            assert_eq!(ctx(d).norm_recurrence_check(50), Ok(()), "D={d}");
        }
    }

    #[test]
    fn combination_examples() {
        let c2 = ctx(2);
        assert_eq!(c2.norm_combination(-1, &big(1), &big(1)).unwrap(), big(2));
        for d in [2i64, 3, 5, 13] {
            let c = ctx(d);
            for i in [-1i64, 1, 3, 5] {
                let n = c.norm_combination(i, &big(1), &big(0)).unwrap();
                assert_eq!(n, c.convergent(i).unwrap().n_abs);
            }
        }
        ctx(3).norm_combination(1, &big(2), &big(1)).unwrap();
        assert!(c2.norm_combination(0, &big(1), &big(1)).is_err());
    }

    #[test]
    fn bounds_example_d2() {
        let c = ctx(2);
        let rep = c.bounds_check(-1, 0, &big(1), &big(1), None).unwrap();
        assert_eq!(rep.element, QuadInt::new(3, 1));
        assert_eq!(rep.norm, big(7));
        assert!(rep.upper1_holds && rep.upper2_holds);
        assert_eq!(rep.lower, vec![(LowerCase::A, true)]);
        let rep = c.bounds_check(1, 0, &big(3), &big(0), None).unwrap();
        assert_eq!(rep.lower, vec![(LowerCase::MultipleOfConvergent, true)]);
        // 2 + sqrt2 meets the second upper bound with equality
        let rep = c.bounds_check(-1, 1, &big(1), &big(0), None).unwrap();
        assert_eq!(rep.norm, big(2));
        assert!(!rep.upper2_holds && rep.upper2_tight);
        assert!(c.bounds_check(1, 2, &big(1), &big(0), None).is_err());
        assert!(c
            .bounds_check(1, 0, &big(1), &big(0), Some((1, 1)))
            .is_err());
    }

    #[test]
    fn bounds_d3_grid() {
        let c = ctx(3);
        for i in (-1..=9).step_by(2) {
            let u = c.expansion().u(i + 2) as i64;
            for r in 0..u {
                for e in 1..=5 {
                    for f in 0..=5 {
                        for cc in [(1, 4), (1, 2), (3, 4)] {
                            let rep = c.bounds_check(i, r, &big(e), &big(f), Some(cc)).unwrap();
                            assert!(rep.upper1_holds, "{rep:?}");
                            assert!(rep.lower.iter().all(|(_, ok)| *ok), "{rep:?}");
                            assert!(rep.upper2_holds || rep.upper2_tight, "{rep:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ud_cap() {
        for d in [2i64, 5] {
            assert!(ctx(d).audit_ud_norms());
        }
        let cap = ctx(2).ud_norm_bound();
        let fl = cap.floor();
        assert!(cap.admits(&fl));
        assert!(!cap.admits(&(&fl + 1)));
    }
}
