//! The labelled chain through `A` and the difference pairs between
//! neighbouring elements of `A`.
//!
//! From an element `alpha` of `A` and its companion `beta` on one side, the
//! walk `w_1 = beta`, `w_l + alpha = w_{l-1} + beta` adds `gamma = beta - alpha`
//! until it lands in `A` again. That element is the next `A`-vertex, and the
//! number of steps is the label of the difference pair `{gamma, -gamma}`.

use std::collections::HashSet;

use crate::analysis::Analyzer;
use crate::error::{ReconstructError, Result};
use crate::oracle::{DifferenceHandle, SemigroupOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex<H> {
    /// An element of `A`, labelled `k_alpha - 1`.
    A(H),
    /// A difference pair `{gamma, -gamma}`, labelled by the step count.
    B(DifferenceHandle<H>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainVertex<H> {
    pub vertex: Vertex<H>,
    pub label: u64,
}

/// A finite window of the chain, centred on the element `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledChain<H> {
    pub vertices: Vec<ChainVertex<H>>,
    pub center: usize,
}

impl<H: Copy> LabeledChain<H> {
    pub fn labels(&self) -> Vec<u64> {
        self.vertices.iter().map(|v| v.label).collect()
    }

    /// Labels from the centre outward along the second half.
    pub fn outward_labels(&self) -> Vec<u64> {
        self.vertices[self.center..]
            .iter()
            .map(|v| v.label)
            .collect()
    }

    pub fn is_palindrome(&self) -> bool {
        let left = self.center;
        let right = self.vertices.len() - 1 - self.center;
        let reach = left.min(right);
        (1..=reach).all(|k| self.vertices[left - k].label == self.vertices[left + k].label)
    }

    /// Number of `A`-vertices on each side of the centre.
    pub fn radius(&self) -> usize {
        self.center.min(self.vertices.len() - 1 - self.center) / 2
    }
}

struct Side<H> {
    alpha: H,
    beta: H,
    vertices: Vec<ChainVertex<H>>,
}

/// Grows the chain outward from the centre on demand.
pub struct ChainBuilder<'o, O: SemigroupOracle> {
    analyzer: Analyzer<'o, O>,
    center: O::Handle,
    center_label: u64,
    sides: [Side<O::Handle>; 2],
    seen: HashSet<O::Handle>,
}

impl<'o, O: SemigroupOracle> ChainBuilder<'o, O> {
    /// The centre is the first element of `A` in stream order. The stream
    /// starts at the element of least trace, and that is `1`.
    pub fn new(oracle: &'o mut O) -> Result<Self> {
        let mut analyzer = Analyzer::new(oracle);
        let center = analyzer.find_a(1)[0];
        let k = analyzer.k_alpha(center)?;
        let [b1, b2] = analyzer.companions(center)?;
        let side = |beta| Side {
            alpha: center,
            beta,
            vertices: Vec::new(),
        };
        Ok(ChainBuilder {
            analyzer,
            center,
            center_label: k - 1,
            sides: [side(b1), side(b2)],
            seen: HashSet::from([center]),
        })
    }

    pub fn center(&self) -> O::Handle {
        self.center
    }

    pub fn analyzer(&mut self) -> &mut Analyzer<'o, O> {
        &mut self.analyzer
    }

    /// Extends both sides to `radius` `A`-vertices beyond the centre.
    pub fn extend_to(&mut self, radius: usize) -> Result<()> {
        for s in 0..2 {
            while self.sides[s].vertices.len() < 2 * radius {
                self.step(s)?;
            }
        }
        Ok(())
    }

    fn step(&mut self, s: usize) -> Result<()> {
        let (alpha, beta) = (self.sides[s].alpha, self.sides[s].beta);
        let cap = self.center_label + 2;
        let an = &mut self.analyzer;

        let mut w = beta;
        let mut l = 1u64;
        while !an.in_a(w) {
            let target = an.add(w, beta);
            let below = an.below(target);
            let mut next = None;
            for &y in below.iter() {
                if an.add(y, alpha) == target {
                    next = Some(y);
                    break;
                }
            }
            w = next.ok_or_else(|| {
                ReconstructError::NotAPath("difference step has no summand".into())
            })?;
            l += 1;
            if l > cap {
                return Err(ReconstructError::UnboundedSearch("difference label"));
            }
        }
        let alpha_next = w;
        if !self.seen.insert(alpha_next) {
            return Err(ReconstructError::NotAPath(
                "walk revisited an A-vertex".into(),
            ));
        }

        let k = an.k_alpha(alpha_next)?;
        let comps = an.companions(alpha_next)?;
        let lhs = an.add(alpha_next, alpha);
        let mut back = Vec::new();
        for &c in &comps {
            if an.add(c, beta) == lhs {
                back.push(c);
            }
        }
        if back.len() != 1 {
            return Err(ReconstructError::NotAPath(format!(
                "{} companions lead back",
                back.len()
            )));
        }
        let forward = if comps[0] == back[0] {
            comps[1]
        } else {
            comps[0]
        };

        let side = &mut self.sides[s];
        side.vertices.push(ChainVertex {
            vertex: Vertex::B(DifferenceHandle::new(beta, alpha)),
            label: l,
        });
        side.vertices.push(ChainVertex {
            vertex: Vertex::A(alpha_next),
            label: k - 1,
        });
        side.alpha = alpha_next;
        side.beta = forward;
        Ok(())
    }

    pub fn chain(&self) -> LabeledChain<O::Handle> {
        let mut vertices: Vec<_> = self.sides[1].vertices.iter().rev().copied().collect();
        let center = vertices.len();
        vertices.push(ChainVertex {
            vertex: Vertex::A(self.center),
            label: self.center_label,
        });
        vertices.extend(self.sides[0].vertices.iter().copied());
        LabeledChain { vertices, center }
    }
}

pub fn build_chain<O: SemigroupOracle>(
    oracle: &mut O,
    radius: usize,
) -> Result<LabeledChain<O::Handle>> {
    let mut builder = ChainBuilder::new(oracle)?;
    builder.extend_to(radius)?;
    let chain = builder.chain();
    if !chain.is_palindrome() {
        return Err(ReconstructError::NotPalindrome);
    }
    Ok(chain)
}
