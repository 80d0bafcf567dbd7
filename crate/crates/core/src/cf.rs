//! The purely periodic continued fraction of `sigma = w + floor(-w')`,
//! convergents to `w`, the units, and exact surd forms of the tails.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldContext, OmegaCase, QuadInt};

/// One period `u_0, ..., u_{s-1}` of the expansion of `sigma`, plus the
/// surd states `(P_k + sqrt(Delta)) / Q_k` that produced each partial quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    u: Vec<u64>,
    u_big: Vec<BigInt>,
    states: Vec<SurdTail>,
    s_plus: usize,
}

/// A tail `(P + sqrt(Delta)) / Q` of the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SurdTail {
    pub p: i64,
    pub q: i64,
}

impl SurdTail {
    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    pub fn q_big(&self) -> BigInt {
        BigInt::from(self.q)
    }
}

impl CfExpansion {
    /// The period `u_0, ..., u_{s-1}`.
    pub fn period(&self) -> &[u64] {
        &self.u
    }

    /// Period length `s`.
    pub fn s(&self) -> usize {
        self.u.len()
    }

    /// `s` if `s` is even, `2s` otherwise.
    pub fn s_plus(&self) -> usize {
        self.s_plus
    }

    /// `u_k` with the periodic extension `u_{k+s} = u_k`.
    pub fn u(&self, k: i64) -> u64 {
        self.u[k.rem_euclid(self.u.len() as i64) as usize]
    }

    pub fn u_big(&self, k: i64) -> &BigInt {
        &self.u_big[k.rem_euclid(self.u.len() as i64) as usize]
    }

    /// `ceil(u_0 / 2)`, the integer part of `w`.
    pub fn p0(&self) -> u64 {
        self.u[0].div_ceil(2)
    }

    /// The surd state at position `k` (periodic).
    pub fn state(&self, k: i64) -> SurdTail {
        self.states[k.rem_euclid(self.u.len() as i64) as usize]
    }
}

/// Runs the `(P, Q)` surd iteration on `sigma` for a squarefree `d`.
///
/// `sigma` is reduced, so the expansion is purely periodic and the period ends
/// on the first return to the initial state.
pub(crate) fn expand_sigma(d: u64, case: OmegaCase) -> CfExpansion {
    let (delta, p_init) = match case {
        OmegaCase::SqrtD => {
            let delta = 4 * d as i64;
            (delta, 2 * isqrt(d) as i64)
        }
        OmegaCase::HalfIntegral => {
            let delta = d as i64;
            // floor((sqrt(D) - 1) / 2)
            let k = (isqrt(d) as i64 - 1) / 2;
            (delta, 2 * k + 1)
        }
    };
    let root = isqrt(delta as u64) as i64;
    let start = SurdTail { p: p_init, q: 2 };
    let mut state = start;
    let mut u = Vec::new();
    let mut states = Vec::new();
    loop {
        let a = (state.p + root).div_euclid(state.q);
        u.push(a as u64);
        states.push(state);
        let p = a * state.q - state.p;
        let q = (delta - p * p) / state.q;
        debug_assert_eq!((delta - p * p) % state.q, 0);
        state = SurdTail { p, q };
        if state == start {
            break;
        }
        assert!(
            u.len() <= 4 * delta as usize,
            "surd iteration failed to cycle"
        );
    }
    let s = u.len();
    CfExpansion {
        u_big: u.iter().map(|&x| BigInt::from(x)).collect(),
        u,
        states,
        s_plus: if s % 2 == 0 { s } else { 2 * s },
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// The `i`-th convergent `p_i / q_i` to `w` and the derived data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Convergent {
    pub i: i64,
    pub p: BigInt,
    pub q: BigInt,
    /// `alpha_i = p_i - q_i w'`.
    pub alpha: QuadInt,
    /// `N_i = |N(alpha_i)|`.
    pub n_abs: BigInt,
    /// `T_i`, defined by `alpha_{i-1} alpha_i' = T_i + (-1)^(i-1) w`; absent for `i = -1`.
    pub t: Option<BigInt>,
}

pub fn sigma_expand(ctx: &FieldContext) -> CfExpansion {
    ctx.expansion().clone()
}

impl FieldContext {
    pub fn expansion(&self) -> &CfExpansion {
        self.expansion
            .get_or_init(|| expand_sigma(self.d(), self.omega_case()))
    }

    /// Convergent `i >= -1`, memoized.
    pub fn convergent(&self, i: i64) -> Result<Arc<Convergent>> {
        if i < -1 {
            return Err(Error::IndexOutOfRange {
                what: "convergent",
                index: i,
            });
        }
        let pos = (i + 1) as usize;
        {
            let cache = self.convergents.read().expect("convergent cache poisoned");
            if let Some(c) = cache.get(pos) {
                return Ok(Arc::clone(c));
            }
        }
        let mut cache = self.convergents.write().expect("convergent cache poisoned");
        while cache.len() <= pos {
            let next = self.next_convergent(&cache);
            cache.push(Arc::new(next));
        }
        Ok(Arc::clone(&cache[pos]))
    }

    /// `alpha_i`; panics on `i < -1`.
    pub fn alpha(&self, i: i64) -> QuadInt {
        self.convergent(i).expect("alpha index >= -1").alpha.clone()
    }

    fn alpha_from_pq(&self, p: &BigInt, q: &BigInt) -> QuadInt {
        QuadInt::from_big(p - q * self.trace_omega(), q.clone())
    }

    fn next_convergent(&self, cache: &[Arc<Convergent>]) -> Convergent {
        let i = cache.len() as i64 - 1;
        let (p, q) = match i {
            -1 => (BigInt::one(), BigInt::zero()),
            0 => (BigInt::from(self.expansion().p0()), BigInt::one()),
            _ => {
                let u = self.expansion().u_big(i);
                let prev = &cache[cache.len() - 1];
                let prev2 = &cache[cache.len() - 2];
                (u * &prev.p + &prev2.p, u * &prev.q + &prev2.q)
            }
        };
        let alpha = self.alpha_from_pq(&p, &q);
        let norm = self.norm(&alpha);
        let n_abs = if (i + 1) % 2 == 0 { norm } else { -norm };
        debug_assert!(n_abs.is_positive());
        let t = if i >= 0 {
            let prev = &cache[cache.len() - 1].alpha;
            let prod = self.mul(prev, &self.conjugate(&alpha));
            let expected_b = if (i - 1).rem_euclid(2) == 0 { 1 } else { -1 };
            debug_assert_eq!(prod.b(), &BigInt::from(expected_b));
            Some(prod.a().clone())
        } else {
            None
        };
        Convergent {
            i,
            p,
            q,
            alpha,
            n_abs,
            t,
        }
    }

    /// The fundamental unit `eps = alpha_{s-1}`.
    pub fn fundamental_unit(&self) -> QuadInt {
        let s = self.expansion().s() as i64;
        let eps = self.alpha(s - 1);
        assert!(
            self.norm(&eps).abs().is_one(),
            "alpha_(s-1) is not a unit; continued fraction engine bug"
        );
        eps
    }

    /// The smallest totally positive unit `eps+ > 1`.
    pub fn totally_positive_unit(&self) -> QuadInt {
        let s = self.expansion().s() as i64;
        let unit = if s % 2 == 0 {
            self.fundamental_unit()
        } else {
            self.alpha(2 * s - 1)
        };
        assert!(
            self.norm(&unit).is_one() && self.is_totally_positive(&unit),
            "eps+ failed verification; continued fraction engine bug"
        );
        unit
    }

    /// Exact tail `gamma_i = [u_i, u_{i+1}, ...]` for `i >= 1`.
    pub fn gamma_surd(&self, i: i64) -> Result<SurdTail> {
        if i < 1 {
            return Err(Error::IndexOutOfRange {
                what: "gamma tail",
                index: i,
            });
        }
        Ok(self.expansion().state(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::square_factor;

    fn ctx(d: i64) -> FieldContext {
        FieldContext::new(d).unwrap()
    }

    #[test]
    fn small_periods() {
        assert_eq!(ctx(2).expansion().period(), &[2]);
        assert_eq!(ctx(3).expansion().period(), &[2, 1]);
        assert_eq!(ctx(13).expansion().period(), &[3]);
        assert_eq!(ctx(5).expansion().period(), &[1]);
        // sqrt(7) = [2; 1,1,1,4]
        assert_eq!(ctx(7).expansion().period(), &[4, 1, 1, 1]);
        assert_eq!(ctx(17).expansion().period(), &[3, 1, 1]);
    }

    #[test]
    fn convergents_d3() {
        let c = ctx(3);
        let c0 = c.convergent(0).unwrap();
        assert_eq!(
            (c0.p.clone(), c0.q.clone()),
            (BigInt::from(1), BigInt::from(1))
        );
        assert_eq!(c0.alpha, QuadInt::new(1, 1));
        let c1 = c.convergent(1).unwrap();
        assert_eq!(c1.alpha, QuadInt::new(2, 1));
        assert_eq!(c1.n_abs, BigInt::from(1));
        let cm = c.convergent(-1).unwrap();
        assert_eq!(cm.alpha, QuadInt::one());
        assert_eq!(cm.n_abs, BigInt::from(1));
        assert!(c.convergent(-2).is_err());
    }

    #[test]
    fn units() {
        let c2 = ctx(2);
        assert_eq!(c2.fundamental_unit(), QuadInt::new(1, 1));
        assert_eq!(c2.totally_positive_unit(), QuadInt::new(3, 2));
        let c3 = ctx(3);
        assert_eq!(c3.fundamental_unit(), QuadInt::new(2, 1));
        assert_eq!(c3.totally_positive_unit(), QuadInt::new(2, 1));
        let c5 = ctx(5);
        assert_eq!(c5.fundamental_unit(), QuadInt::new(0, 1));
        assert_eq!(c5.totally_positive_unit(), QuadInt::new(1, 1));
    }

    #[test]
    fn gamma_tails() {
        let c2 = ctx(2);
        for i in 1..5 {
            assert_eq!(c2.gamma_surd(i).unwrap(), SurdTail { p: 2, q: 2 });
        }
        assert!(c2.gamma_surd(0).is_err());
        // D = 3: sigma = (2 + sqrt12)/2 = 1 + sqrt3, then (2 + sqrt12)/4 = (1 + sqrt3)/2
        let c3 = ctx(3);
        assert_eq!(c3.gamma_surd(1).unwrap(), SurdTail { p: 2, q: 4 });
        assert_eq!(c3.gamma_surd(2).unwrap(), SurdTail { p: 2, q: 2 });
        assert_eq!(c3.gamma_surd(3).unwrap(), SurdTail { p: 2, q: 4 });
    }

    #[test]
    fn gamma_within_bounds() {
        for d in [2i64, 3, 7, 13, 19, 21, 31, 46, 94] {
            let c = ctx(d);
            let delta = BigInt::from(c.delta());
            for i in 1..=10 {
                let g = c.gamma_surd(i).unwrap();
                let u = BigInt::from(c.expansion().u(i));
                // u < (P + sqrt(Delta)) / Q < u + 1
                let lower = crate::field::sign_plus_sqrt(
                    &(g.p_big() - &u * g.q_big()),
                    &BigInt::one(),
                    &delta,
                );
                let upper = crate::field::sign_plus_sqrt(
                    &(g.p_big() - (&u + 1) * g.q_big()),
                    &BigInt::one(),
                    &delta,
                );
                assert_eq!(lower, std::cmp::Ordering::Greater, "D={d} i={i}");
                assert_eq!(upper, std::cmp::Ordering::Less, "D={d} i={i}");
                assert_eq!((c.delta() as i64 - g.p * g.p) % g.q, 0);
            }
        }
    }

    #[test]
    fn structural_invariants_over_sweep() {
        for d in 2u64..=600 {
            if square_factor(d).is_some() {
                continue;
            }
            let c = ctx(d as i64);
            let e = c.expansion();
            let u = e.period();
            let s = u.len();
            // palindrome u_1 .. u_{s-1}
            let mid: Vec<_> = u[1..].to_vec();
            let mut rev = mid.clone();
            rev.reverse();
            assert_eq!(mid, rev, "D={d}");
            // parity of u_0
            assert_eq!(u[0].is_multiple_of(2), d % 4 != 1, "D={d}");
            // u_0 is the strict maximum
            assert!(u[1..].iter().all(|&x| x < u[0]), "D={d}");
            // shortest period
            for t in 1..s {
                if s.is_multiple_of(t) {
                    assert!((0..s).any(|k| u[k] != u[(k + t) % s]), "D={d}");
                }
            }
            // ceil(u0/2) = (u0 + Tr w)/2
            let tr = if d % 4 == 1 { 1 } else { 0 };
            assert_eq!(e.p0(), (u[0] + tr) / 2);
        }
    }

    #[test]
    fn convergent_identities() {
        for d in [2i64, 3, 5, 6, 7, 13, 21, 43, 61, 94, 97] {
            let c = ctx(d);
            let sqrt_delta_sq = BigInt::from(c.delta());
            for i in -1..200i64 {
                let a = c.convergent(i).unwrap();
                let b = c.convergent(i + 1).unwrap();
                let det = &b.p * &a.q - &a.p * &b.q;
                let expected = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                assert_eq!(det, BigInt::from(expected), "D={d} i={i}");
                assert_eq!(c.is_totally_positive(&a.alpha), i.rem_euclid(2) == 1);
                // N_i < sqrt(Delta)
                assert!(&a.n_abs * &a.n_abs < sqrt_delta_sq, "D={d} i={i}");
            }
        }
    }

    #[test]
    fn t_closed_forms() {
        for d in [2i64, 3, 5, 13, 21, 22] {
            let c = ctx(d);
            let db = BigInt::from(d);
            for i in 0..40i64 {
                let cur = c.convergent(i).unwrap();
                let prev = c.convergent(i - 1).unwrap();
                let closed = if d % 4 == 1 {
                    &cur.p * (&prev.p - &prev.q) - &cur.q * &prev.q * (&db - 1) / 4
                } else {
                    &cur.p * &prev.p - &db * &cur.q * &prev.q
                };
                assert_eq!(cur.t.clone().unwrap(), closed, "D={d} i={i}");
            }
        }
    }

    #[test]
    fn unit_shift() {
        for d in [2i64, 3, 5, 7, 13, 19, 31] {
            let c = ctx(d);
            let ep = c.totally_positive_unit();
            let sp = c.expansion().s_plus() as i64;
            for i in (-1..30).step_by(2) {
                assert_eq!(c.alpha(i + sp), c.mul(&ep, &c.alpha(i)), "D={d} i={i}");
            }
        }
    }
}
