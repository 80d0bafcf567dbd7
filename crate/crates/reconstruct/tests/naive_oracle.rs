//! End-to-end runs against a semigroup written from scratch here: pairs
//! `(x, y)` standing for `(x + y sqrt D) / 2`, with `below` by scanning.

use quadsemi_reconstruct::{reconstruct, CountingOracle, SemigroupOracle};

struct Naive {
    d: i64,
    stream: Vec<(i64, i64)>,
    next_trace: i64,
    flip: bool,
}

impl Naive {
    fn new(d: i64, flip: bool) -> Self {
        Naive {
            d,
            stream: Vec::new(),
            next_trace: 1,
            flip,
        }
    }

    fn valid(&self, x: i64, y: i64) -> bool {
        let parity = if self.d % 4 == 1 {
            (x - y) % 2 == 0
        } else {
            x % 2 == 0 && y % 2 == 0
        };
        parity && x > 0 && x * x > y * y * self.d
    }

    fn layer(&self, x: i64) -> Vec<(i64, i64)> {
        let r = (x as f64 / (self.d as f64).sqrt()) as i64 + 1;
        (-r..=r)
            .map(|y| (x, y))
            .filter(|&(x, y)| self.valid(x, y))
            .collect()
    }
}

impl SemigroupOracle for Naive {
    type Handle = (i64, i64);

    fn add(&mut self, a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
        (a.0 + b.0, a.1 + b.1)
    }

    fn below(&mut self, h: (i64, i64)) -> Vec<(i64, i64)> {
        // for each trace x, y lies in both cones |y| < x / sqrt D and
        // |h.1 - y| < (h.0 - x) / sqrt D; the float window is padded and every
        // candidate is checked exactly
        let root = (self.d as f64).sqrt();
        let mut out = Vec::new();
        for x in 1..h.0 {
            let reach = x as f64 / root;
            let rest = (h.0 - x) as f64 / root;
            let lo = (-reach).max(h.1 as f64 - rest).floor() as i64 - 1;
            let hi = reach.min(h.1 as f64 + rest).ceil() as i64 + 1;
            for y in lo..=hi {
                if self.valid(x, y) && self.valid(h.0 - x, h.1 - y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    fn stream_nth(&mut self, k: usize) -> (i64, i64) {
        while self.stream.len() <= k {
            let mut layer = self.layer(self.next_trace);
            if self.flip {
                layer.reverse();
            }
            self.stream.extend(layer);
            self.next_trace += 1;
        }
        self.stream[k]
    }
}

#[test]
fn recovers_small_fields() {
    for d in [2i64, 3, 5, 6, 10, 13, 17] {
        for flip in [false, true] {
            let mut o = CountingOracle::new(Naive::new(d, flip));
            let r = reconstruct(&mut o).unwrap_or_else(|e| panic!("D={d}: {e}"));
            assert_eq!(r.d, d as u64, "flip={flip}");
            assert!(o.calls().below > 0);
        }
    }
}

#[test]
fn chain_labels_repeat_the_period() {
    // D = 7: sigma = 2 + sqrt 7 has period [4, 1, 1, 1]
    let r = reconstruct(&mut Naive::new(7, false)).unwrap();
    assert_eq!(r.period, [4, 1, 1, 1]);
    let out = &r.labels[r.center..];
    assert!(out.len() >= 3 * r.period.len());
    for (k, &l) in out.iter().enumerate() {
        assert_eq!(l, r.period[k % r.period.len()]);
    }
}
