#![allow(dead_code)]

use num_integer::{Integer, Roots};
use proptest::prelude::*;
use sturmian::kernel::RealLike;

/// `theta = (a + b sqrt d)/c` in (0, 1) with `b > 0` and `d` not a square.
#[derive(Clone, Debug)]
pub struct Quad {
    pub a: i128,
    pub b: i128,
    pub d: i128,
    pub c: i128,
}

impl Quad {
    pub fn literal(&self) -> String {
        format!("quad:({}+{}*sqrt({}))/{}", self.a, self.b, self.d, self.c)
    }

    pub fn real(&self) -> RealLike {
        RealLike::parse(&self.literal()).unwrap()
    }

    /// `⌊n theta⌋` for `n >= 0` from an integer square root.
    pub fn floor_n(&self, n: i128) -> i128 {
        let s = (n * n * self.b * self.b * self.d).sqrt();
        Integer::div_floor(&(n * self.a + s), &self.c)
    }

    pub fn to_f64(&self) -> f64 {
        (self.a as f64 + self.b as f64 * (self.d as f64).sqrt()) / self.c as f64
    }
}

pub fn quad() -> impl Strategy<Value = Quad> {
    (2i128..60, 1i128..4, 2i128..12)
        .prop_filter("non-square", |(d, _, _)| d.sqrt() * d.sqrt() != *d)
        .prop_flat_map(|(d, b, c)| (Just(d), Just(b), Just(c), 0..c))
        .prop_map(|(d, b, c, t)| Quad { a: t - (b * b * d).sqrt(), b, d, c })
}

/// Fibonacci-word slope `(3 - sqrt 5)/2` as `floor_n` oracle.
pub fn fib_floor(n: i128) -> i128 {
    Quad { a: 3, b: -1, d: 5, c: 2 }.floor_neg_b(n)
}

impl Quad {
    /// `⌊n theta⌋` when `b < 0`.
    fn floor_neg_b(&self, n: i128) -> i128 {
        if n == 0 {
            return 0;
        }
        let s = (n * n * self.b * self.b * self.d).sqrt() + 1;
        Integer::div_floor(&(n * self.a - s), &self.c)
    }
}

/// `⌊(a + b sqrt d)/c⌋` for `c > 0` and `d` not a square.
pub fn floor_surd(a: i128, b: i128, d: i128, c: i128) -> i128 {
    // b sqrt d lies strictly between consecutive integers
    let s = (b * b * d).sqrt();
    let lo = if b >= 0 { a + s } else { a - s - 1 };
    Integer::div_floor(&lo, &c)
}

/// `⌈(a + b sqrt d)/c⌉` for `c > 0` and `d` not a square.
pub fn ceil_surd(a: i128, b: i128, d: i128, c: i128) -> i128 {
    -floor_surd(-a, -b, d, c)
}
