//! Exact and certified numeric primitives.

pub mod affine;
pub mod algebraic;
pub mod ball;
pub mod dyadic;
pub mod expr;
pub mod lattice;
pub mod literal;
pub mod poly;
pub mod reallike;
pub mod resultant;
pub mod roots;

pub use affine::Affine;
pub use algebraic::{AlgebraicNumber, Isolator};
pub use ball::{BallComplex, BallReal};
pub use dyadic::{Dyadic, Round};
pub use expr::Expr;
pub use poly::IntPoly;
pub use reallike::RealLike;

/// Environment variable overriding the precision ceiling in bits.
pub const PREC_CEILING_VAR: &str = "STURMIAN_PREC_CEILING";

pub const DEFAULT_PREC: u32 = 256;
pub const DEFAULT_CEILING: u32 = 1 << 20;
pub const DEFAULT_DEGREE_CAP: usize = 64;

/// Adaptive precision policy: start, doubling ceiling and algebraic degree cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precision {
    pub start: u32,
    pub ceiling: u32,
    pub degree_cap: usize,
}

impl Default for Precision {
    fn default() -> Self {
        let ceiling = std::env::var(PREC_CEILING_VAR)
            .ok()
            .and_then(|v| v.trim().parse::<u32>().ok())
            .filter(|&c| c >= 64)
            .unwrap_or(DEFAULT_CEILING);
        Precision { start: DEFAULT_PREC, ceiling, degree_cap: DEFAULT_DEGREE_CAP }
    }
}

impl Precision {
    pub fn with_start(start: u32) -> Self {
        let d = Precision::default();
        Precision { start: start.max(16), ceiling: d.ceiling.max(start), ..d }
    }
}
