//! Uniquely decomposable elements: the classifier, a brute-force decomposition
//! search, and the count modulo totally positive units.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::field::{FieldContext, QuadInt};
use crate::semigroup::CanonicalForm;

/// Canonical coordinates `x = e alpha_{i,r} + f alpha_{i,r+1}`, after
/// normalising by conjugation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UdWitness {
    pub i: i64,
    pub r: i64,
    pub e: BigInt,
    pub f: BigInt,
}

/// The clause of the classification an element falls under.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum UdClass {
    /// `alpha_{i,r}`.
    Indecomposable(UdWitness),
    /// `e alpha_{i,0}` with `2 <= e <= u_{i+1} + 1`.
    ConvergentMultiple(UdWitness),
    /// `alpha_{i, u_{i+2}-1} + f alpha_{i+2,0}` with `u_{i+2} >= 2`.
    SeamPlusNext(UdWitness),
    /// `e alpha_{i,0} + alpha_{i,1}` with `u_{i+2} >= 2`.
    MultiplePlusOne(UdWitness),
    /// `e alpha_{i,0} + f alpha_{i+2,0}` with `u_{i+2} = 1`.
    UnitBlock(UdWitness),
    /// Conjugate of an element in one of the other clauses.
    ConjugateOf(Box<UdClass>),
    NotUd,
}

impl UdClass {
    pub fn is_ud(&self) -> bool {
        !matches!(self, UdClass::NotUd)
    }

    /// Single-letter clause tag, `f` for conjugates.
    pub fn letter(&self) -> Option<char> {
        Some(match self {
            UdClass::Indecomposable(_) => 'a',
            UdClass::ConvergentMultiple(_) => 'b',
            UdClass::SeamPlusNext(_) => 'c',
            UdClass::MultiplePlusOne(_) => 'd',
            UdClass::UnitBlock(_) => 'e',
            UdClass::ConjugateOf(_) => 'f',
            UdClass::NotUd => return None,
        })
    }

    pub fn witness(&self) -> Option<&UdWitness> {
        match self {
            UdClass::Indecomposable(w)
            | UdClass::ConvergentMultiple(w)
            | UdClass::SeamPlusNext(w)
            | UdClass::MultiplePlusOne(w)
            | UdClass::UnitBlock(w) => Some(w),
            UdClass::ConjugateOf(inner) => inner.witness(),
            UdClass::NotUd => None,
        }
    }
}

/// A multiset of indecomposables summing to a target, largest index first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    /// Indices `j` of the parts `beta_j`, non-increasing.
    pub indices: Vec<i64>,
    pub parts: Vec<QuadInt>,
}

impl FieldContext {
    fn ud_window(&self, c: &CanonicalForm) -> bool {
        let vj = BigInt::from(self.v_coeff(c.j0));
        let vj1 = BigInt::from(self.v_coeff(c.j0 + 1));
        let one = BigInt::one();
        c.e >= one
            && c.e < vj
            && !c.f.is_negative()
            && c.f < vj1
            && !(c.e == &vj - &one && c.f == &vj1 - &one)
    }

    pub fn is_uniquely_decomposable(&self, x: &QuadInt) -> Result<bool> {
        let c = self.canonicalize(x)?;
        Ok(self.ud_window(&c))
    }

    pub fn classify_ud(&self, x: &QuadInt) -> Result<UdClass> {
        let c = self.canonicalize(x)?;
        if !self.ud_window(&c) {
            return Ok(UdClass::NotUd);
        }
        if c.j0 >= 0 {
            return Ok(self.classify_nonneg(&c));
        }
        let mirrored = if c.f.is_zero() {
            CanonicalForm {
                j0: -c.j0,
                e: c.e,
                f: c.f,
            }
        } else {
            CanonicalForm {
                j0: -c.j0 - 1,
                e: c.f,
                f: c.e,
            }
        };
        Ok(UdClass::ConjugateOf(Box::new(
            self.classify_nonneg(&mirrored),
        )))
    }

    fn classify_nonneg(&self, c: &CanonicalForm) -> UdClass {
        let bc = self.beta_coords(c.j0);
        let u_next = self.expansion().u(bc.i + 2) as i64;
        let w = UdWitness {
            i: bc.i,
            r: bc.r,
            e: c.e.clone(),
            f: c.f.clone(),
        };
        let one = BigInt::one();
        if c.f.is_zero() {
            if c.e == one {
                UdClass::Indecomposable(w)
            } else {
                debug_assert_eq!(bc.r, 0);
                UdClass::ConvergentMultiple(w)
            }
        } else if u_next == 1 {
            UdClass::UnitBlock(w)
        } else if bc.r == 0 {
            debug_assert_eq!(c.f, one);
            UdClass::MultiplePlusOne(w)
        } else {
            debug_assert!(bc.r == u_next - 1 && c.e == one);
            UdClass::SeamPlusNext(w)
        }
    }

    /// Up to `limit` distinct decompositions of `x` into indecomposables.
    pub fn enumerate_decompositions(&self, x: &QuadInt, limit: usize) -> Vec<Decomposition> {
        if limit == 0 || !self.is_totally_positive(x) {
            return Vec::new();
        }
        let (lo, hi) = self.beta_range_below(x);
        let parts: Vec<(i64, QuadInt)> = (lo..=hi).rev().map(|j| (j, self.beta(j))).collect();
        let mut search = DecompSearch {
            ctx: self,
            parts: &parts,
            limit,
            memo: HashMap::new(),
        };
        let mut out = Vec::new();
        let mut stack = Vec::new();
        search.collect(x, 0, &mut stack, &mut out);
        out
    }

    /// One representative of every class of uniquely decomposable elements
    /// modulo powers of `eps+`.
    ///
    /// Clause parameters run over odd `i` in `[1, s+)`; these `beta` indices
    /// cover a full `eps+`-period, so conjugates are already represented.
    pub fn ud_representatives(&self) -> Vec<QuadInt> {
        let exp = self.expansion();
        let s_plus = exp.s_plus() as i64;
        let mut out = Vec::new();
        let big = |k: i64| BigInt::from(k);
        for i in (1..s_plus).step_by(2) {
            let u1 = exp.u(i + 1) as i64;
            let u2 = exp.u(i + 2) as i64;
            let u3 = exp.u(i + 3) as i64;
            let a0 = self.alpha(i);
            let a_next = self.alpha(i + 2);
            for r in 0..u2 {
                out.push(self.semiconvergent(i, &big(r)));
            }
            for e in 2..=u1 + 1 {
                out.push(a0.scalar_mul(e));
            }
            if u2 >= 2 {
                let seam = self.semiconvergent(i, &big(u2 - 1));
                for f in 1..=u3 {
                    out.push(&seam + &a_next.scalar_mul(f));
                }
                let a1 = self.semiconvergent(i, &big(1));
                for e in 1..=u1 {
                    out.push(a0.scalar_mul(e) + &a1);
                }
            } else {
                for e in 1..=u1 + 1 {
                    for f in 1..=u3 + 1 {
                        if (e, f) != (u1 + 1, u3 + 1) {
                            out.push(a0.scalar_mul(e) + a_next.scalar_mul(f));
                        }
                    }
                }
            }
        }
        out
    }

    /// The count modulo units by search: every `e beta_j + f beta_{j+1}` with
    /// `j` in one unit period and `e, f <= u_0 + 2` goes through
    /// [`FieldContext::enumerate_decompositions`]. Every coefficient box
    /// `v_j <= u_0 + 2` fits inside.
    pub fn count_ud_by_search(&self) -> u64 {
        let period = self.block_layout().period_len();
        let side = self.expansion().u(0) as i64 + 2;
        let mut n = 0;
        for j in 0..period {
            let (b1, b2) = (self.beta(j), self.beta(j + 1));
            for e in 1..=side {
                for f in 0..=side {
                    let x = b1.scalar_mul(e) + b2.scalar_mul(f);
                    if self.enumerate_decompositions(&x, 2).len() == 1 {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    pub fn count_ud_mod_units(&self) -> u64 {
        let exp = self.expansion();
        let s = exp.s() as i64;
        let u = |k: i64| exp.u(k);
        let total: u64 = (1..=s).map(u).sum();
        if s % 2 == 0 {
            let even: u64 = (1..=s).filter(|i| i % 2 == 0).map(u).sum();
            let seams: u64 = (1..s)
                .filter(|&i| i % 2 == 1 && u(i) == 1)
                .map(|i| u(i - 1) * u(i + 1))
                .sum();
            total + 2 * even + seams
        } else {
            let seams: u64 = (1..=s)
                .filter(|&i| u(i) == 1)
                .map(|i| u(i - 1) * u(i + 1))
                .sum();
            4 * total + seams
        }
    }
}

struct DecompSearch<'a> {
    ctx: &'a FieldContext,
    /// Candidate parts, largest index first.
    parts: &'a [(i64, QuadInt)],
    limit: usize,
    /// `(remainder, first usable part)` -> decompositions, capped at `limit`.
    memo: HashMap<(QuadInt, usize), usize>,
}

impl DecompSearch<'_> {
    fn fits(&self, rem: &QuadInt, k: usize) -> Option<QuadInt> {
        let next = rem - &self.parts[k].1;
        if next.is_zero() || self.ctx.is_totally_positive(&next) {
            Some(next)
        } else {
            None
        }
    }

    fn count(&mut self, rem: &QuadInt, from: usize) -> usize {
        if rem.is_zero() {
            return 1;
        }
        let key = (rem.clone(), from);
        if let Some(&n) = self.memo.get(&key) {
            return n;
        }
        let mut n = 0;
        for k in from..self.parts.len() {
            if let Some(next) = self.fits(rem, k) {
                n += self.count(&next, k);
                if n >= self.limit {
                    n = self.limit;
                    break;
                }
            }
        }
        self.memo.insert(key, n);
        n
    }

    fn collect(
        &mut self,
        rem: &QuadInt,
        from: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Decomposition>,
    ) {
        if out.len() >= self.limit {
            return;
        }
        if rem.is_zero() {
            out.push(Decomposition {
                indices: stack.iter().map(|&k| self.parts[k].0).collect(),
                parts: stack.iter().map(|&k| self.parts[k].1.clone()).collect(),
            });
            return;
        }
        for k in from..self.parts.len() {
            if out.len() >= self.limit {
                return;
            }
            if let Some(next) = self.fits(rem, k) {
                if self.count(&next, k) == 0 {
                    continue;
                }
                stack.push(k);
                self.collect(&next, k, stack, out);
                stack.pop();
            }
        }
    }
}
