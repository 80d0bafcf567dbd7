//! From chain labels to the period of `sigma` and on to `D`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{ReconstructError, Result};

/// Repetitions of a candidate period required before it is accepted.
pub const MIN_REPETITIONS: usize = 3;

/// Shortest period of labels read outward from the centre, rotated to start at
/// a maximal label.
pub fn recover_period(outward: &[u64]) -> Result<Vec<u64>> {
    if outward.is_empty() {
        return Err(ReconstructError::TooFewRepetitions {
            observed: 0,
            period: 1,
            needed: MIN_REPETITIONS,
        });
    }
    let n = outward.len();
    let s = (1..=n)
        .find(|&s| (s..n).all(|k| outward[k] == outward[k - s]))
        .expect("s = n is always consistent");
    if n < MIN_REPETITIONS * s {
        return Err(ReconstructError::TooFewRepetitions {
            observed: n,
            period: s,
            needed: MIN_REPETITIONS * s,
        });
    }
    let period = &outward[..s];
    let top = *period.iter().max().expect("nonempty");
    let start = period.iter().position(|&u| u == top).expect("max exists");
    Ok(period[start..]
        .iter()
        .chain(&period[..start])
        .copied()
        .collect())
}

fn isqrt_big(n: &BigInt) -> BigInt {
    n.sqrt()
}

/// Period of the purely periodic expansion of `sigma` for squarefree `d`.
pub fn sigma_period(d: u64) -> Vec<u64> {
    let d_big = BigInt::from(d);
    let root_d = isqrt_big(&d_big);
    let (delta, p0) = if d % 4 == 1 {
        // sigma = (1 + sqrt d) / 2 + floor((sqrt d - 1) / 2)
        let k = (&root_d - 1u32) / 2u32;
        (d_big.clone(), k * 2u32 + 1u32)
    } else {
        // sigma = sqrt d + floor(sqrt d)
        (&d_big * 4u32, &root_d * 2u32)
    };
    let root = isqrt_big(&delta);
    let q0 = BigInt::from(2);
    let (mut p, mut q) = (p0.clone(), q0.clone());
    let mut out = Vec::new();
    loop {
        let a = (&p + &root) / &q;
        let p_next = &a * &q - &p;
        let q_next = (&delta - &p_next * &p_next) / &q;
        out.push(a.to_u64().expect("partial quotient fits in u64"));
        p = p_next;
        q = q_next;
        if p == p0 && q == q0 {
            return out;
        }
    }
}

fn is_squarefree(d: u64) -> bool {
    let mut k = 2u64;
    while k * k <= d {
        if d.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    true
}

/// `D` whose `sigma` has purely periodic expansion with period `u`.
///
/// The period matrix `[[A, B], [C, E]]` gives `C sigma^2 + (E - A) sigma - B = 0`,
/// and `sigma - sigma' = sqrt(Delta)`, so `Delta = ((E - A)^2 + 4BC) / C^2`.
pub fn period_to_d(u: &[u64]) -> Result<u64> {
    let invalid = || ReconstructError::InvalidPeriod(u.to_vec());
    if u.is_empty() || u.contains(&0) {
        return Err(invalid());
    }
    let (mut a, mut b, mut c, mut e) =
        (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    for &uk in u {
        let uk = BigInt::from(uk);
        // [[a, b], [c, e]] * [[uk, 1], [1, 0]]
        let (na, nb) = (&a * &uk + &b, a.clone());
        let (nc, ne) = (&c * &uk + &e, c.clone());
        (a, b, c, e) = (na, nb, nc, ne);
    }
    let disc = (&e - &a) * (&e - &a) + BigInt::from(4) * &b * &c;
    let c2 = &c * &c;
    if (&disc % &c2) != BigInt::zero() {
        return Err(invalid());
    }
    let delta = (&disc / &c2).to_u64().ok_or_else(invalid)?;
    let d = match delta % 4 {
        0 => delta / 4,
        1 => delta,
        _ => return Err(invalid()),
    };
    if d < 2 || !is_squarefree(d) || (delta % 4 == 0 && d % 4 == 1) {
        return Err(invalid());
    }
    if sigma_period(d) != u {
        return Err(invalid());
    }
    Ok(d)
}
