//! JSON shapes for elements and big integers. Big integers are strings so that
//! no consumer silently rounds them.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use quadsemi::{Embedding, FieldContext, QuadInt};
use serde_json::{json, Value};

pub fn big(n: &BigInt) -> Value {
    Value::String(n.to_string())
}

/// `x + y sqrt(D)` style rendering of the half form `(x + y sqrt(D)) / 2`.
pub fn pretty(ctx: &FieldContext, q: &QuadInt) -> String {
    let (x, y) = ctx.half_form(q);
    let d = ctx.d();
    if x.is_even() && y.is_even() {
        surd_sum(&(x / 2), &(y / 2), d)
    } else {
        format!("({})/2", surd_sum(&x, &y, d))
    }
}

fn surd_sum(a: &BigInt, b: &BigInt, d: u64) -> String {
    let zero = BigInt::from(0);
    let one = BigInt::from(1);
    let root = format!("√{d}");
    let coeff = |c: &BigInt| {
        if c == &one {
            root.clone()
        } else {
            format!("{c}{root}")
        }
    };
    match (a == &zero, b.sign()) {
        (_, Sign::NoSign) => a.to_string(),
        (true, Sign::Minus) => format!("-{}", coeff(&-b)),
        (true, _) => coeff(b),
        (false, Sign::Minus) => format!("{a}-{}", coeff(&-b)),
        (false, _) => format!("{a}+{}", coeff(b)),
    }
}

/// Basis coordinates in `{1, omega}`, the half form, and a readable string.
pub fn element(ctx: &FieldContext, q: &QuadInt) -> Value {
    let (x, y) = ctx.half_form(q);
    json!({
        "basis": [big(q.a()), big(q.b())],
        "half": [big(&x), big(&y)],
        "pretty": pretty(ctx, q),
    })
}

pub fn sign(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "-",
        Ordering::Equal => "0",
        Ordering::Greater => "+",
    }
}

pub fn signs(ctx: &FieldContext, q: &QuadInt) -> Value {
    json!({
        "first": sign(ctx.sign_at(q, Embedding::First)),
        "second": sign(ctx.sign_at(q, Embedding::Second)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pretty_forms() {
        let c2 = FieldContext::new(2).unwrap();
        assert_eq!(pretty(&c2, &QuadInt::new(3, 2)), "3+2√2");
        assert_eq!(pretty(&c2, &QuadInt::new(1, -1)), "1-√2");
        assert_eq!(pretty(&c2, &QuadInt::new(0, 1)), "√2");
        assert_eq!(pretty(&c2, &QuadInt::new(4, 0)), "4");
        let c5 = FieldContext::new(5).unwrap();
        assert_eq!(pretty(&c5, &QuadInt::new(0, 1)), "(1+√5)/2");
        assert_eq!(pretty(&c5, &QuadInt::new(1, 2)), "2+√5");
        assert_eq!(pretty(&c5, &QuadInt::new(1, -1)), "(1-√5)/2");
    }
}
