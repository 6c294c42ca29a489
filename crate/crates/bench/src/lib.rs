//! Fixed curves shared by the benchmarks.

use ppcount::{PrimePowerCtx, SeparatedCurve};

/// `x2^2 - x1^3 - x1 - 1`, an elliptic curve for most primes.
pub fn elliptic(p: u64, k: u32) -> SeparatedCurve {
    let ctx = PrimePowerCtx::new(p, k).expect("prime modulus");
    SeparatedCurve::from_i64(&[-1, -1, 0, -1], &[0, 0, 1], &ctx)
}

/// `x2^2 - x1^6`, singular at the origin with a deep recursion tree.
pub fn cusp6(p: u64, k: u32) -> SeparatedCurve {
    let ctx = PrimePowerCtx::new(p, k).expect("prime modulus");
    SeparatedCurve::from_i64(&[0, 0, 0, 0, 0, 0, -1], &[0, 0, 1], &ctx)
}

/// `x1^2 + x2^2`, self-similar under perturbation at the origin.
pub fn circle(p: u64, k: u32) -> SeparatedCurve {
    let ctx = PrimePowerCtx::new(p, k).expect("prime modulus");
    SeparatedCurve::from_i64(&[0, 0, 1], &[0, 0, 1], &ctx)
}
