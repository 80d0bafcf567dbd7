//! Indecomposables `beta_j`, the presentation relations, and the canonical
//! two-indecomposable form of totally positive integers.
//!
//! Indexing: `beta_0 = 1`, positive `j` walks up the semiconvergents
//! `alpha_{i,r} = alpha_i + r alpha_{i+1}` (odd `i >= -1`, `0 <= r < u_{i+2}`)
//! in lexicographic `(i, r)` order, and `beta_{-j}` is the conjugate of `beta_j`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldContext, QuadInt};

/// Block layout of one `eps+`-period of indecomposables.
///
/// Block `k` holds `alpha_{2k-1, r}` for `0 <= r < u_{2k+1}`; one period spans
/// `s+ / 2` blocks and `len` indecomposables.
#[derive(Debug, Clone)]
pub struct BlockLayout {
    starts: Vec<i64>,
    sizes: Vec<i64>,
    len: i64,
}

impl BlockLayout {
    fn new(ctx: &FieldContext) -> Self {
        let exp = ctx.expansion();
        let blocks = exp.s_plus() / 2;
        let mut starts = Vec::with_capacity(blocks);
        let mut sizes = Vec::with_capacity(blocks);
        let mut acc = 0i64;
        for k in 0..blocks as i64 {
            starts.push(acc);
            let size = exp.u(2 * k + 1) as i64;
            sizes.push(size);
            acc += size;
        }
        BlockLayout {
            starts,
            sizes,
            len: acc,
        }
    }

    /// Number of indecomposables `beta_j`, `j >= 0`, per `eps+`-period.
    pub fn period_len(&self) -> i64 {
        self.len
    }

    fn blocks(&self) -> i64 {
        self.starts.len() as i64
    }
}

/// Position of `beta_j` among the semiconvergents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BetaCoords {
    /// Odd index `i >= -1`.
    pub i: i64,
    /// `0 <= r <= u_{i+2} - 1`.
    pub r: i64,
    /// `beta_j` is the conjugate of `alpha_{i,r}` (only for `j < 0`).
    pub conjugated: bool,
}

/// `x = e beta_{j0} + f beta_{j0+1}` with `e >= 1`, `f >= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    pub j0: i64,
    pub e: BigInt,
    pub f: BigInt,
}

/// The relation `beta_{j-1} - v_j beta_j + beta_{j+1} = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub j: i64,
    pub v: u64,
    /// The left-hand side evaluated in coordinates.
    pub residual: QuadInt,
}

impl Relation {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

/// Which end of the support a reduction step absorbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Absorb {
    Low,
    High,
}

/// Adds `multiplier * (beta_{j-1} - v_j beta_j + beta_{j+1})` to a combination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationStep {
    pub j: i64,
    pub multiplier: BigInt,
    pub direction: Absorb,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub form: CanonicalForm,
    pub certificate: Vec<RelationStep>,
}

/// Largest `j` with `pred(j)`, for a predicate that is true up to some index
/// and false afterwards.
fn last_true(pred: impl Fn(i64) -> bool) -> i64 {
    let (mut lo, mut hi);
    if pred(0) {
        lo = 0;
        let mut step = 1;
        loop {
            let probe = lo + step;
            if pred(probe) {
                lo = probe;
                step *= 2;
            } else {
                hi = probe;
                break;
            }
        }
    } else {
        hi = 0;
        let mut step = 1;
        loop {
            let probe = hi - step;
            if pred(probe) {
                lo = probe;
                break;
            } else {
                hi = probe;
                step *= 2;
            }
        }
    }
    // pred(lo) && !pred(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

impl FieldContext {
    pub fn block_layout(&self) -> &BlockLayout {
        self.blocks.get_or_init(|| BlockLayout::new(self))
    }

    pub fn beta_coords(&self, j: i64) -> BetaCoords {
        let layout = self.block_layout();
        let conjugated = j < 0;
        let m = j.abs();
        let q = m / layout.len;
        let rem = m % layout.len;
        // last block whose start is <= rem
        let k = layout.starts.partition_point(|&st| st <= rem) - 1;
        let r = rem - layout.starts[k];
        debug_assert!(r < layout.sizes[k]);
        let block = q * layout.blocks() + k as i64;
        BetaCoords {
            i: 2 * block - 1,
            r,
            conjugated,
        }
    }

    /// Inverse of [`FieldContext::beta_coords`] for the non-conjugated family.
    pub fn beta_index(&self, i: i64, r: i64) -> Result<i64> {
        if i < -1 || i.rem_euclid(2) != 1 {
            return Err(Error::InvalidParameter(format!(
                "semiconvergent index i = {i} must be odd and >= -1"
            )));
        }
        let u = self.expansion().u(i + 2) as i64;
        if r < 0 || r >= u {
            return Err(Error::InvalidParameter(format!(
                "r = {r} outside 0..{u} for i = {i}"
            )));
        }
        let layout = self.block_layout();
        let block = (i + 1) / 2;
        let q = block / layout.blocks();
        let k = (block % layout.blocks()) as usize;
        Ok(q * layout.len + layout.starts[k] + r)
    }

    /// `alpha_{i,r} = alpha_i + r alpha_{i+1}`.
    pub fn semiconvergent(&self, i: i64, r: &BigInt) -> QuadInt {
        let base = self.alpha(i);
        let next = self.alpha(i + 1);
        base + next.scalar_mul_big(r)
    }

    pub fn beta(&self, j: i64) -> QuadInt {
        let c = self.beta_coords(j);
        let x = self.semiconvergent(c.i, &BigInt::from(c.r));
        if c.conjugated {
            self.conjugate(&x)
        } else {
            x
        }
    }

    /// The coefficient `v_j` with `v_j beta_j = beta_{j-1} + beta_{j+1}`.
    pub fn v_coeff(&self, j: i64) -> u64 {
        let c = self.beta_coords(j.abs());
        if c.r >= 1 {
            2
        } else {
            self.expansion().u(c.i + 1) + 2
        }
    }

    pub fn relation(&self, j: i64) -> Relation {
        let v = self.v_coeff(j);
        let residual = self.beta(j - 1) - self.beta(j).scalar_mul(v) + self.beta(j + 1);
        Relation { j, v, residual }
    }

    pub fn relations(&self, j_min: i64, j_max: i64) -> Result<Vec<Relation>> {
        if j_min > j_max {
            return Err(Error::InvalidParameter(format!(
                "empty relation range {j_min}..={j_max}"
            )));
        }
        Ok((j_min..=j_max).map(|j| self.relation(j)).collect())
    }

    /// Exact test of `beta_j / beta_j' <= x / x'`, for totally positive `x`.
    ///
    /// `x beta_j' - x' beta_j = z - z'` with `z = x beta_j'`, and `z - z'` is the
    /// `w`-coefficient of `z` times `sqrt(Delta) > 0`.
    fn ratio_at_most(&self, j: i64, x: &QuadInt) -> bool {
        let z = self.mul(x, &self.conjugate(&self.beta(j)));
        !z.b().is_negative()
    }

    /// The unique `j0` with `beta_j0 / beta_j0' <= x / x' < beta_(j0+1) / beta_(j0+1)'`.
    pub fn locate_j0(&self, x: &QuadInt) -> Result<i64> {
        if !self.is_totally_positive(x) {
            return Err(Error::NotTotallyPositive(x.clone()));
        }
        Ok(last_true(|j| self.ratio_at_most(j, x)))
    }

    pub fn canonicalize(&self, x: &QuadInt) -> Result<CanonicalForm> {
        let j0 = self.locate_j0(x)?;
        let b1 = self.beta(j0);
        let b2 = self.beta(j0 + 1);
        let det = b1.a() * b2.b() - b2.a() * b1.b();
        let e_num = x.a() * b2.b() - x.b() * b2.a();
        let f_num = b1.a() * x.b() - b1.b() * x.a();
        assert!(
            det.abs().is_one(),
            "consecutive indecomposables beta_{j0}, beta_{} are not a basis",
            j0 + 1
        );
        let e = e_num * &det;
        let f = f_num * &det;
        assert!(
            e >= BigInt::one() && !f.is_negative(),
            "canonical coefficients out of range for j0 = {j0}: e = {e}, f = {f}"
        );
        Ok(CanonicalForm { j0, e, f })
    }

    pub fn is_indecomposable(&self, x: &QuadInt) -> bool {
        if !self.is_totally_positive(x) {
            return false;
        }
        let c = self.canonicalize(x).expect("checked totally positive");
        c.e.is_one() && c.f.is_zero()
    }

    /// Evaluates `sum k_j beta_j`.
    pub fn evaluate_combination(&self, coeffs: &BTreeMap<i64, BigInt>) -> QuadInt {
        coeffs
            .iter()
            .filter(|(_, k)| !k.is_zero())
            .fold(QuadInt::zero(), |acc, (&j, k)| {
                acc + self.beta(j).scalar_mul_big(k)
            })
    }

    /// Rewrites `sum k_j beta_j` into canonical form using only the relations,
    /// absorbing the outermost index one step at a time.
    pub fn reduce_combination(&self, coeffs: &BTreeMap<i64, BigInt>) -> Result<Reduction> {
        let x = self.evaluate_combination(coeffs);
        let j0 = self.locate_j0(&x)?;
        let support: Vec<i64> = coeffs
            .iter()
            .filter(|(_, k)| !k.is_zero())
            .map(|(&j, _)| j)
            .collect();
        let mut j_min = support.first().copied().unwrap_or(j0).min(j0);
        let mut j_max = support.last().copied().unwrap_or(j0 + 1).max(j0 + 1);
        let offset = j_min;
        let mut k: Vec<BigInt> = (j_min..=j_max)
            .map(|j| coeffs.get(&j).cloned().unwrap_or_default())
            .collect();
        let idx = |j: i64| (j - offset) as usize;
        let mut certificate = Vec::new();

        while j_max - j_min + 1 >= 3 {
            if j_min < j0 {
                let c = -k[idx(j_min)].clone();
                let rel = j_min + 1;
                if !c.is_zero() {
                    let v = BigInt::from(self.v_coeff(rel));
                    k[idx(rel - 1)] += &c;
                    k[idx(rel)] -= &c * v;
                    k[idx(rel + 1)] += &c;
                    certificate.push(RelationStep {
                        j: rel,
                        multiplier: c,
                        direction: Absorb::Low,
                    });
                }
                j_min += 1;
            } else {
                let c = -k[idx(j_max)].clone();
                let rel = j_max - 1;
                if !c.is_zero() {
                    let v = BigInt::from(self.v_coeff(rel));
                    k[idx(rel - 1)] += &c;
                    k[idx(rel)] -= &c * v;
                    k[idx(rel + 1)] += &c;
                    certificate.push(RelationStep {
                        j: rel,
                        multiplier: c,
                        direction: Absorb::High,
                    });
                }
                j_max -= 1;
            }
        }
        let e = k[idx(j0)].clone();
        let f = k[idx(j0 + 1)].clone();
        assert!(
            e >= BigInt::one() && !f.is_negative(),
            "reduction ended outside the canonical cone: e = {e}, f = {f}"
        );
        Ok(Reduction {
            form: CanonicalForm { j0, e, f },
            certificate,
        })
    }

    /// Indices `j` with `beta_j <= x` in the totally positive order, as an
    /// inclusive range (empty when `lo > hi`).
    pub fn beta_range_below(&self, x: &QuadInt) -> (i64, i64) {
        use crate::field::Embedding;
        use std::cmp::Ordering;
        let hi = last_true(|j| {
            self.compare_embedding(&self.beta(j), x, Embedding::First) != Ordering::Greater
        });
        let lo = last_true(|j| {
            self.compare_embedding(&self.beta(j), x, Embedding::Second) == Ordering::Greater
        }) + 1;
        (lo, hi)
    }
}

/// Applies a certificate to a combination, returning the rewritten coefficients
/// with zero entries dropped.
pub fn replay_certificate(
    ctx: &FieldContext,
    coeffs: &BTreeMap<i64, BigInt>,
    certificate: &[RelationStep],
) -> BTreeMap<i64, BigInt> {
    let mut out = coeffs.clone();
    for step in certificate {
        let v = BigInt::from(ctx.v_coeff(step.j));
        *out.entry(step.j - 1).or_default() += &step.multiplier;
        *out.entry(step.j).or_default() -= &step.multiplier * v;
        *out.entry(step.j + 1).or_default() += &step.multiplier;
    }
    out.retain(|_, k| !k.is_zero());
    out
}

impl CanonicalForm {
    pub fn as_combination(&self) -> BTreeMap<i64, BigInt> {
        let mut m = BTreeMap::new();
        if !self.e.is_zero() {
            m.insert(self.j0, self.e.clone());
        }
        if !self.f.is_zero() {
            m.insert(self.j0 + 1, self.f.clone());
        }
        m
    }
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

    fn combo(pairs: &[(i64, i64)]) -> BTreeMap<i64, BigInt> {
        pairs.iter().map(|&(j, k)| (j, big(k))).collect()
    }

    #[test]
    fn betas_d2() {
        let c = ctx(2);
        assert_eq!(c.beta(0), QuadInt::one());
        assert_eq!(c.beta(1), QuadInt::new(2, 1));
        assert_eq!(c.beta(2), QuadInt::new(3, 2));
        assert_eq!(c.beta(-1), QuadInt::new(2, -1));
        assert_eq!(
            c.beta_coords(1),
            BetaCoords {
                i: -1,
                r: 1,
                conjugated: false
            }
        );
        assert_eq!(
            c.beta_coords(-1),
            BetaCoords {
                i: -1,
                r: 1,
                conjugated: true
            }
        );
    }

    #[test]
    fn betas_d3() {
        let c = ctx(3);
        assert_eq!(c.beta(1), QuadInt::new(2, 1));
        assert_eq!(
            c.beta_coords(2),
            BetaCoords {
                i: 3,
                r: 0,
                conjugated: false
            }
        );
    }

    #[test]
    fn beta_index_round_trip() {
        for d in [2i64, 3, 5, 7, 19, 94] {
            let c = ctx(d);
            for j in 0..200 {
                let bc = c.beta_coords(j);
                assert_eq!(c.beta_index(bc.i, bc.r).unwrap(), j);
            }
        }
        assert!(ctx(2).beta_index(0, 0).is_err());
        assert!(ctx(2).beta_index(1, 2).is_err());
    }

    #[test]
    fn betas_monotone_and_indecomposable_shape() {
        use crate::field::Embedding;
        use std::cmp::Ordering;
        for d in [2i64, 3, 5, 6, 7, 10, 13, 21, 31] {
            let c = ctx(d);
            for j in -30..30 {
                let a = c.beta(j);
                let b = c.beta(j + 1);
                assert!(c.is_totally_positive(&a));
                assert_eq!(
                    c.compare_embedding(&a, &b, Embedding::First),
                    Ordering::Less
                );
                assert_eq!(
                    c.compare_embedding(&a, &b, Embedding::Second),
                    Ordering::Greater
                );
                assert_eq!(c.beta(-j), c.conjugate(&a));
            }
        }
    }

    #[test]
    fn v_coefficients() {
        let c2 = ctx(2);
        assert_eq!(c2.v_coeff(0), 4);
        assert_eq!(c2.v_coeff(1), 2);
        assert_eq!(c2.v_coeff(-1), 2);
        let c3 = ctx(3);
        assert_eq!(c3.v_coeff(1), 4);
        // 4 (2 + sqrt3) = 1 + (7 + 4 sqrt3)
        assert_eq!(c3.beta(2), QuadInt::new(7, 4));
    }

    #[test]
    fn relations_vanish() {
        let c2 = ctx(2);
        let rels = c2.relations(-1, 1).unwrap();
        assert_eq!(rels.len(), 3);
        assert!(rels.iter().all(Relation::holds));
        let c3 = ctx(3);
        let r = c3.relation(1);
        assert_eq!(r.v, 4);
        assert!(r.holds());
        for d in [5i64, 7, 13, 94] {
            let c = ctx(d);
            let r0 = c.relation(0);
            assert_eq!(r0.v, c.expansion().u(0) + 2);
            assert!(r0.holds());
        }
        assert!(c2.relations(2, 1).is_err());
    }

    #[test]
    fn locate_examples() {
        let c2 = ctx(2);
        assert_eq!(c2.locate_j0(&QuadInt::new(3, 1)).unwrap(), 0);
        assert_eq!(c2.locate_j0(&QuadInt::new(4, 0)).unwrap(), 0);
        for j in -10..10 {
            assert_eq!(c2.locate_j0(&c2.beta(j)).unwrap(), j);
        }
        assert!(c2.locate_j0(&QuadInt::new(1, 1)).is_err());
    }

    #[test]
    fn canonical_examples() {
        let c2 = ctx(2);
        let f = c2.canonicalize(&QuadInt::new(3, 1)).unwrap();
        assert_eq!((f.j0, f.e.clone(), f.f.clone()), (0, big(1), big(1)));
        let f = c2.canonicalize(&QuadInt::new(4, 0)).unwrap();
        assert_eq!((f.j0, f.e.clone(), f.f.clone()), (0, big(4), big(0)));
        for j in -8..8 {
            let f = c2.canonicalize(&c2.beta(j)).unwrap();
            assert_eq!((f.j0, f.e, f.f), (j, big(1), big(0)));
        }
        assert!(c2.canonicalize(&QuadInt::zero()).is_err());
    }

    #[test]
    fn indecomposable_examples() {
        let c2 = ctx(2);
        assert!(c2.is_indecomposable(&QuadInt::new(2, 1)));
        assert!(!c2.is_indecomposable(&QuadInt::new(2, 0)));
        assert!(c2.is_indecomposable(&QuadInt::new(3, 2)));
        assert!(!c2.is_indecomposable(&QuadInt::new(1, 1)));
    }

    #[test]
    fn reduction_examples() {
        let c2 = ctx(2);
        let input = combo(&[(-1, 1), (1, 1)]);
        let red = c2.reduce_combination(&input).unwrap();
        assert_eq!(
            (red.form.j0, red.form.e.clone(), red.form.f.clone()),
            (0, big(4), big(0))
        );
        assert!(!red.certificate.is_empty());
        assert_eq!(
            replay_certificate(&c2, &input, &red.certificate),
            red.form.as_combination()
        );

        let already = combo(&[(3, 2), (4, 5)]);
        let red = c2.reduce_combination(&already).unwrap();
        assert!(red.certificate.is_empty());
        assert_eq!((red.form.j0, red.form.e, red.form.f), (3, big(2), big(5)));

        let c3 = ctx(3);
        let input = combo(&[(0, 1), (2, 1)]);
        let red = c3.reduce_combination(&input).unwrap();
        assert_eq!(
            (red.form.j0, red.form.e.clone(), red.form.f.clone()),
            (1, big(4), big(0))
        );
        assert_eq!(red.certificate.len(), 1);
        assert_eq!(red.certificate[0].j, 1);

        let negative = combo(&[(0, -1), (1, 1)]);
        assert!(matches!(
            c2.reduce_combination(&negative),
            Err(Error::NotTotallyPositive(_))
        ));
    }

    #[test]
    fn each_relation_is_needed_for_its_own_pair() {
        for d in [2i64, 3, 5, 7] {
            let c = ctx(d);
            for j in -6..=6 {
                let input = combo(&[(j - 1, 1), (j + 1, 1)]);
                let red = c.reduce_combination(&input).unwrap();
                assert_eq!(red.form.j0, j);
                assert_eq!(red.form.e, BigInt::from(c.v_coeff(j)));
                assert_eq!(red.certificate.len(), 1);
                assert_eq!(red.certificate[0].j, j);
            }
        }
    }

    #[test]
    fn range_below() {
        let c2 = ctx(2);
        // 4 >= beta_j for beta_-1, beta_0, beta_1
        assert_eq!(c2.beta_range_below(&QuadInt::new(4, 0)), (-1, 1));
        assert_eq!(c2.beta_range_below(&QuadInt::one()), (0, 0));
    }
}
