use std::fmt::Debug;
use std::hash::Hash;

/// Additive access to a cancellative commutative semigroup.
///
/// Handles are canonical: two handles denote the same element exactly when
/// they are equal, so the default [`SemigroupOracle::eq`] is plain `==`.
pub trait SemigroupOracle {
    type Handle: Copy + Eq + Hash + Ord + Debug;

    fn add(&mut self, a: Self::Handle, b: Self::Handle) -> Self::Handle;

    fn eq(&mut self, a: Self::Handle, b: Self::Handle) -> bool {
        a == b
    }

    /// Every `y` with `y + z = h` for some element `z`. Empty exactly when
    /// `h` is indecomposable.
    fn below(&mut self, h: Self::Handle) -> Vec<Self::Handle>;

    /// The `k`-th element of a fixed enumeration that eventually reaches every
    /// element.
    fn stream_nth(&mut self, k: usize) -> Self::Handle;
}

/// Iterator over an oracle's stream.
pub struct Stream<'a, O: SemigroupOracle> {
    oracle: &'a mut O,
    next: usize,
}

impl<'a, O: SemigroupOracle> Stream<'a, O> {
    pub fn new(oracle: &'a mut O) -> Self {
        Stream { oracle, next: 0 }
    }
}

impl<O: SemigroupOracle> Iterator for Stream<'_, O> {
    type Item = O::Handle;

    fn next(&mut self) -> Option<O::Handle> {
        let h = self.oracle.stream_nth(self.next);
        self.next += 1;
        Some(h)
    }
}

/// A formal difference `pos - neg` in the group of differences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DifferenceHandle<H> {
    pub pos: H,
    pub neg: H,
}

impl<H: Copy> DifferenceHandle<H> {
    pub fn new(pos: H, neg: H) -> Self {
        DifferenceHandle { pos, neg }
    }

    pub fn negate(&self) -> Self {
        DifferenceHandle {
            pos: self.neg,
            neg: self.pos,
        }
    }

    /// `(p, q) ~ (r, s)` iff `p + s = q + r`.
    pub fn equivalent<O>(&self, oracle: &mut O, other: &Self) -> bool
    where
        O: SemigroupOracle<Handle = H>,
    {
        let lhs = oracle.add(self.pos, other.neg);
        let rhs = oracle.add(self.neg, other.pos);
        oracle.eq(lhs, rhs)
    }

    /// Same unordered pair `{d, -d}`.
    pub fn same_pair<O>(&self, oracle: &mut O, other: &Self) -> bool
    where
        O: SemigroupOracle<Handle = H>,
    {
        self.equivalent(oracle, other) || self.equivalent(oracle, &other.negate())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OracleCalls {
    pub add: u64,
    pub eq: u64,
    pub below: u64,
    pub stream: u64,
}

/// Wraps an oracle and counts calls by kind.
#[derive(Debug)]
pub struct CountingOracle<O> {
    inner: O,
    calls: OracleCalls,
}

impl<O> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        CountingOracle {
            inner,
            calls: OracleCalls::default(),
        }
    }

    pub fn calls(&self) -> OracleCalls {
        self.calls
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: SemigroupOracle> SemigroupOracle for CountingOracle<O> {
    type Handle = O::Handle;

    fn add(&mut self, a: O::Handle, b: O::Handle) -> O::Handle {
        self.calls.add += 1;
        self.inner.add(a, b)
    }

    fn eq(&mut self, a: O::Handle, b: O::Handle) -> bool {
        self.calls.eq += 1;
        self.inner.eq(a, b)
    }

    fn below(&mut self, h: O::Handle) -> Vec<O::Handle> {
        self.calls.below += 1;
        self.inner.below(h)
    }

    fn stream_nth(&mut self, k: usize) -> O::Handle {
        self.calls.stream += 1;
        self.inner.stream_nth(k)
    }
}
