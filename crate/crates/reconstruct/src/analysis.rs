//! Intrinsic predicates: indecomposability, unique decomposability, the set
//! `A` of indecomposables with uniquely decomposable double, `k_alpha`, and
//! companions.

use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use crate::error::{ReconstructError, Result};
use crate::oracle::SemigroupOracle;

/// Largest multiple tried by [`Analyzer::k_alpha`] before giving up.
const K_ALPHA_CAP: u64 = 1 << 16;

/// Oracle wrapper with memoised `below` sets and verdicts.
pub struct Analyzer<'o, O: SemigroupOracle> {
    oracle: &'o mut O,
    below: HashMap<O::Handle, Rc<Vec<O::Handle>>>,
    ud: HashMap<O::Handle, bool>,
    k_alpha: HashMap<O::Handle, u64>,
}

impl<'o, O: SemigroupOracle> Analyzer<'o, O> {
    pub fn new(oracle: &'o mut O) -> Self {
        Analyzer {
            oracle,
            below: HashMap::new(),
            ud: HashMap::new(),
            k_alpha: HashMap::new(),
        }
    }

    pub fn oracle(&mut self) -> &mut O {
        self.oracle
    }

    pub fn add(&mut self, a: O::Handle, b: O::Handle) -> O::Handle {
        self.oracle.add(a, b)
    }

    pub fn below(&mut self, h: O::Handle) -> Rc<Vec<O::Handle>> {
        if let Some(b) = self.below.get(&h) {
            return Rc::clone(b);
        }
        let b = Rc::new(self.oracle.below(h));
        self.below.insert(h, Rc::clone(&b));
        b
    }

    /// `k h` for `k >= 1`.
    pub fn multiple(&mut self, h: O::Handle, k: u64) -> O::Handle {
        assert!(k >= 1, "multiple of a handle needs k >= 1");
        let mut acc = h;
        for _ in 1..k {
            acc = self.oracle.add(acc, h);
        }
        acc
    }

    pub fn is_indecomposable(&mut self, h: O::Handle) -> bool {
        self.below(h).is_empty()
    }

    /// Number of multisets of indecomposables summing to `h`, capped at `cap`.
    pub fn decomposition_count(&mut self, h: O::Handle, cap: u32) -> u32 {
        let below = self.below(h);
        let mut set: Vec<O::Handle> = below.iter().copied().collect();
        set.push(h);
        let members: HashSet<O::Handle> = set.iter().copied().collect();

        // (part, total) -> remainder, for every sum landing back in the set
        let mut remainder: HashMap<(O::Handle, O::Handle), O::Handle> = HashMap::new();
        let mut down: HashMap<O::Handle, usize> = set.iter().map(|&x| (x, 0)).collect();
        let mut decomposable: HashSet<O::Handle> = HashSet::new();
        for (ai, &a) in set.iter().enumerate() {
            for &b in &set[ai..] {
                let s = self.oracle.add(a, b);
                if members.contains(&s) {
                    decomposable.insert(s);
                    if remainder.insert((a, s), b).is_none() {
                        *down.get_mut(&s).expect("member") += 1;
                    }
                    if a != b && remainder.insert((b, s), a).is_none() {
                        *down.get_mut(&s).expect("member") += 1;
                    }
                }
            }
        }
        // strictly smaller elements have strictly smaller down-sets
        let mut order = set.clone();
        order.sort_by_key(|x| (down[x], *x));
        let parts: Vec<O::Handle> = order
            .iter()
            .copied()
            .filter(|x| !decomposable.contains(x))
            .collect();

        let mut ways: HashMap<O::Handle, u32> = HashMap::new();
        for &c in &parts {
            for &x in &order {
                let add = if x == c {
                    1
                } else if let Some(y) = remainder.get(&(c, x)) {
                    ways.get(y).copied().unwrap_or(0)
                } else {
                    0
                };
                if add > 0 {
                    let w = ways.entry(x).or_insert(0);
                    *w = (*w + add).min(cap);
                }
            }
        }
        ways.get(&h).copied().unwrap_or(0)
    }

    pub fn is_ud(&mut self, h: O::Handle) -> bool {
        if let Some(&v) = self.ud.get(&h) {
            return v;
        }
        let v = self.decomposition_count(h, 2) == 1;
        self.ud.insert(h, v);
        v
    }

    /// Indecomposable with uniquely decomposable double.
    pub fn in_a(&mut self, h: O::Handle) -> bool {
        if !self.is_indecomposable(h) {
            return false;
        }
        let double = self.oracle.add(h, h);
        self.is_ud(double)
    }

    /// The first `window` elements of `A` in stream order.
    pub fn find_a(&mut self, window: usize) -> Vec<O::Handle> {
        let mut out = Vec::with_capacity(window);
        let mut k = 0;
        while out.len() < window {
            let h = self.oracle.stream_nth(k);
            k += 1;
            if !out.contains(&h) && self.in_a(h) {
                out.push(h);
            }
        }
        out
    }

    /// Largest `k` with `k h` uniquely decomposable.
    pub fn k_alpha(&mut self, h: O::Handle) -> Result<u64> {
        if let Some(&k) = self.k_alpha.get(&h) {
            return Ok(k);
        }
        let mut k = 1;
        let mut multiple = h;
        loop {
            let next = self.oracle.add(multiple, h);
            if !self.is_ud(next) {
                break;
            }
            multiple = next;
            k += 1;
            if k > K_ALPHA_CAP {
                return Err(ReconstructError::UnboundedSearch("k_alpha"));
            }
        }
        self.k_alpha.insert(h, k);
        Ok(k)
    }

    /// The two indecomposables `beta != alpha` with `(k_alpha - 1) alpha + beta`
    /// uniquely decomposable.
    ///
    /// Both lie below `(k_alpha + 1) alpha`, which is the sum of the two.
    pub fn companions(&mut self, alpha: O::Handle) -> Result<[O::Handle; 2]> {
        let k = self.k_alpha(alpha)?;
        if k < 2 {
            return Err(ReconstructError::NotInA);
        }
        let top = self.multiple(alpha, k + 1);
        let base = self.multiple(alpha, k - 1);
        let candidates = self.below(top);
        let mut found = Vec::new();
        for &beta in candidates.iter() {
            if beta == alpha || !self.is_indecomposable(beta) {
                continue;
            }
            let x = self.oracle.add(base, beta);
            if self.is_ud(x) {
                found.push(beta);
            }
        }
        match found.as_slice() {
            &[a, b] => Ok([a, b]),
            _ => Err(ReconstructError::CompanionCount(found.len())),
        }
    }
}

pub fn is_indecomposable_abs<O: SemigroupOracle>(oracle: &mut O, h: O::Handle) -> bool {
    oracle.below(h).is_empty()
}

pub fn is_ud_abs<O: SemigroupOracle>(oracle: &mut O, h: O::Handle) -> bool {
    Analyzer::new(oracle).is_ud(h)
}

pub fn find_a<O: SemigroupOracle>(oracle: &mut O, window: usize) -> Vec<O::Handle> {
    Analyzer::new(oracle).find_a(window)
}

pub fn k_alpha<O: SemigroupOracle>(oracle: &mut O, h: O::Handle) -> Result<u64> {
    Analyzer::new(oracle).k_alpha(h)
}

pub fn companions<O: SemigroupOracle>(oracle: &mut O, h: O::Handle) -> Result<[O::Handle; 2]> {
    Analyzer::new(oracle).companions(h)
}
