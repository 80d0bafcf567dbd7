//! An opaque-handle view of the totally positive integers, for driving the
//! reconstruction with additive structure only.

use std::collections::HashMap;

use num_bigint::BigInt;
use quadsemi_reconstruct::SemigroupOracle;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Embedding, FieldContext, QuadInt};

/// A handle that reveals nothing about the element behind it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpaqueHandle(u64);

/// The semigroup behind seed-randomised handles. The stream runs through
/// increasing trace, shuffled within each trace.
pub struct ScrambledOracle<'c> {
    ctx: &'c FieldContext,
    rng: ChaCha8Rng,
    handles: HashMap<QuadInt, OpaqueHandle>,
    elements: HashMap<OpaqueHandle, QuadInt>,
    stream: Vec<OpaqueHandle>,
    next_trace: i64,
}

pub fn scrambled_oracle(ctx: &FieldContext, seed: u64) -> ScrambledOracle<'_> {
    ScrambledOracle::new(ctx, seed)
}

impl<'c> ScrambledOracle<'c> {
    pub fn new(ctx: &'c FieldContext, seed: u64) -> Self {
        ScrambledOracle {
            ctx,
            rng: ChaCha8Rng::seed_from_u64(seed),
            handles: HashMap::new(),
            elements: HashMap::new(),
            stream: Vec::new(),
            next_trace: 1,
        }
    }

    pub fn handle_of(&mut self, x: &QuadInt) -> OpaqueHandle {
        if let Some(&h) = self.handles.get(x) {
            return h;
        }
        let h = loop {
            let h = OpaqueHandle(self.rng.gen());
            if !self.elements.contains_key(&h) {
                break h;
            }
        };
        self.handles.insert(x.clone(), h);
        self.elements.insert(h, x.clone());
        h
    }

    /// The element behind a handle. For verification only; reconstruction
    /// never sees this.
    pub fn reveal(&self, h: OpaqueHandle) -> &QuadInt {
        self.elements.get(&h).expect("handle issued by this oracle")
    }

    fn element(&self, h: OpaqueHandle) -> QuadInt {
        self.reveal(h).clone()
    }

    fn grow_stream(&mut self) {
        let mut layer = self.ctx.totally_positive_with_trace(self.next_trace);
        self.next_trace += 1;
        layer.shuffle(&mut self.rng);
        for x in layer {
            let h = self.handle_of(&x);
            self.stream.push(h);
        }
    }
}

/// All `y` with `y` and `x - y` totally positive.
pub fn elements_below(ctx: &FieldContext, x: &QuadInt) -> Vec<QuadInt> {
    let Ok(form) = ctx.canonicalize(x) else {
        return Vec::new();
    };
    // y = m b1 + n b2 over the unimodular basis b1 = beta_j0, b2 = beta_j0+1
    let b1 = ctx.beta(form.j0);
    let b2 = ctx.beta(form.j0 + 1);
    let xc = ctx.conjugate(x);
    // m (b1 b2' - b1' b2) = y b2' - y' b2, strictly between -x' b2 and x b2'
    let det = ctx.mul(&b1, &ctx.conjugate(&b2));
    let det_sign = det.b().sign();
    let hi = ctx.floor_over_sqrt_delta(&ctx.mul(x, &ctx.conjugate(&b2)));
    let lo = ctx.floor_over_sqrt_delta(&ctx.mul(&xc, &b2));
    let (m_lo, m_hi) = match det_sign {
        // w-coefficient of b1 b2' is the sign of det / sqrt(Delta)
        num_bigint::Sign::Minus => (-hi - 1, lo + 1),
        _ => (-lo - 1, hi + 1),
    };

    let mut out = Vec::new();
    let mut m = m_lo;
    while m <= m_hi {
        let mb1 = b1.scalar_mul_big(&m);
        let neg_mb1 = -&mb1;
        let rest = x - &mb1;
        // n > -m b1 / b2 and n < (x - m b1) / b2 at both embeddings
        let bounds = [Embedding::First, Embedding::Second].map(|which| {
            let low: BigInt = ctx.floor_ratio(&neg_mb1, &b2, which) + 1;
            let high: BigInt = -ctx.floor_ratio(&-&rest, &b2, which) - 1;
            (low, high)
        });
        let [(lo1, hi1), (lo2, hi2)] = bounds;
        let (mut n, n_hi) = (lo1.max(lo2), hi1.min(hi2));
        while n <= n_hi {
            let y = &mb1 + &b2.scalar_mul_big(&n);
            let z = x - &y;
            if !y.is_zero()
                && !z.is_zero()
                && ctx.is_totally_positive(&y)
                && ctx.is_totally_positive(&z)
            {
                out.push(y);
            }
            n += 1;
        }
        m += 1;
    }
    out.sort();
    out
}

impl SemigroupOracle for ScrambledOracle<'_> {
    type Handle = OpaqueHandle;

    fn add(&mut self, a: OpaqueHandle, b: OpaqueHandle) -> OpaqueHandle {
        let s = self.element(a) + self.element(b);
        self.handle_of(&s)
    }

    fn below(&mut self, h: OpaqueHandle) -> Vec<OpaqueHandle> {
        let x = self.element(h);
        let mut out: Vec<OpaqueHandle> = elements_below(self.ctx, &x)
            .iter()
            .map(|y| self.handle_of(y))
            .collect();
        out.sort();
        out
    }

    fn stream_nth(&mut self, k: usize) -> OpaqueHandle {
        while self.stream.len() <= k {
            self.grow_stream();
        }
        self.stream[k]
    }
}

/// Handles are the elements themselves; for cross-checks against the concrete
/// classifiers.
pub struct PlainOracle<'c> {
    ctx: &'c FieldContext,
    stream: Vec<QuadInt>,
    next_trace: i64,
}

impl<'c> PlainOracle<'c> {
    pub fn new(ctx: &'c FieldContext) -> Self {
        PlainOracle {
            ctx,
            stream: Vec::new(),
            next_trace: 1,
        }
    }
}

/// Handle of [`PlainOracle`]: the coordinates `(a, b)` themselves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlainHandle(pub i128, pub i128);

impl PlainHandle {
    pub fn from_quad(x: &QuadInt) -> Self {
        let a = i128::try_from(x.a()).expect("coordinate fits in i128");
        let b = i128::try_from(x.b()).expect("coordinate fits in i128");
        PlainHandle(a, b)
    }

    pub fn to_quad(self) -> QuadInt {
        QuadInt::from_big(BigInt::from(self.0), BigInt::from(self.1))
    }
}

impl SemigroupOracle for PlainOracle<'_> {
    type Handle = PlainHandle;

    fn add(&mut self, a: PlainHandle, b: PlainHandle) -> PlainHandle {
        PlainHandle(a.0 + b.0, a.1 + b.1)
    }

    fn below(&mut self, h: PlainHandle) -> Vec<PlainHandle> {
        elements_below(self.ctx, &h.to_quad())
            .iter()
            .map(PlainHandle::from_quad)
            .collect()
    }

    fn stream_nth(&mut self, k: usize) -> PlainHandle {
        while self.stream.len() <= k {
            let layer = self.ctx.totally_positive_with_trace(self.next_trace);
            self.next_trace += 1;
            self.stream.extend(layer);
        }
        PlainHandle::from_quad(&self.stream[k])
    }
}
