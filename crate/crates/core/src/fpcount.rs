//! Point counting over `F_p` by value histograms.
//!
//! For a separated curve the number of zeros of `g(x1) + h(x2)` is the
//! convolution of the value distributions of `g` and `h` at zero, so one pass
//! over `F_p` per axis suffices.

use rayon::prelude::*;

use crate::curve::{SeparatedCurve, SingularLocus};
use crate::error::{Error, Result};
use crate::modarith::add_mod;
use crate::unipoly::FpPoly;

/// Largest prime (exclusive) accepted by the histogram base case.
pub const DEFAULT_PRIME_CEILING: u64 = 1 << 31;

const CHUNK: u64 = 1 << 16;

/// `counts[v] = #{a in F_p : f(a) = v}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueHistogram {
    pub counts: Vec<u32>,
}

impl ValueHistogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| u64::from(c)).sum()
    }
}

pub fn value_histogram(f: &FpPoly) -> Result<ValueHistogram> {
    let p = f.p();
    if p >= DEFAULT_PRIME_CEILING {
        return Err(Error::PrimeTooLarge {
            p,
            ceiling: DEFAULT_PRIME_CEILING,
        });
    }
    let len = p as usize;
    if f.is_constant() {
        let mut counts = vec![0u32; len];
        counts[f.coeff(0) as usize] = p as u32;
        return Ok(ValueHistogram { counts });
    }
    let chunks: Vec<u64> = (0..p).step_by(CHUNK as usize).collect();
    let counts = chunks
        .into_par_iter()
        .fold(
            || vec![0u32; len],
            |mut acc, start| {
                for a in start..(start + CHUNK).min(p) {
                    acc[f.eval(a) as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u32; len],
            |mut x, y| {
                for (a, b) in x.iter_mut().zip(y) {
                    *a += b;
                }
                x
            },
        );
    Ok(ValueHistogram { counts })
}

/// `#{(a, b) in F_p^2 : g(a) + h(b) = 0}`.
pub fn fp_point_count(curve: &SeparatedCurve) -> Result<u64> {
    let g = curve.g_tilde();
    let h = curve.h_tilde();
    if g.is_zero() && h.is_zero() {
        return Err(Error::ZeroReduction);
    }
    let p = curve.p();
    let hg = value_histogram(&g)?;
    let hh = value_histogram(&h)?;
    let total = (0..p as usize)
        .map(|v| {
            let w = (p as usize - v) % p as usize;
            u64::from(hg.counts[v]) * u64::from(hh.counts[w])
        })
        .sum();
    Ok(total)
}

/// Number of smooth `F_p`-points, given the singular locus of the same curve.
pub fn fp_smooth_count(curve: &SeparatedCurve, locus: &SingularLocus) -> Result<u64> {
    let total = fp_point_count(curve)?;
    let singular = locus.point_count(curve.p(), total);
    debug_assert!(singular <= total);
    Ok(total - singular)
}

/// All `F_p`-points of the curve, sorted, or `FallbackBudgetExceeded` if
/// there are more than `budget` of them.
pub fn curve_points(curve: &SeparatedCurve, budget: usize) -> Result<Vec<(u64, u64)>> {
    let p = curve.p();
    let g = curve.g_tilde();
    let h = curve.h_tilde();
    if p >= DEFAULT_PRIME_CEILING {
        return Err(Error::PrimeTooLarge {
            p,
            ceiling: DEFAULT_PRIME_CEILING,
        });
    }
    let total = fp_point_count(curve)?;
    if total > budget as u64 {
        return Err(Error::FallbackBudgetExceeded {
            points: total,
            budget: budget as u64,
        });
    }
    // bucket x2 by the value of h
    let mut by_value: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
    for b in 0..p {
        by_value[h.eval(b) as usize].push(b);
    }
    let mut out = Vec::with_capacity(total as usize);
    for a in 0..p {
        let need = (p - g.eval(a)) % p;
        out.extend(by_value[need as usize].iter().map(|&b| (a, b)));
    }
    Ok(out)
}

/// Naive double loop, kept as an independent witness for small `p`.
pub fn naive_point_count(curve: &SeparatedCurve) -> u64 {
    let p = curve.p();
    let g = curve.g_tilde();
    let h = curve.h_tilde();
    let hv: Vec<u64> = (0..p).map(|b| h.eval(b)).collect();
    (0..p)
        .map(|a| {
            let ga = g.eval(a);
            hv.iter().filter(|&&v| add_mod(ga, v, p) == 0).count() as u64
        })
        .sum()
}
