//! Brute-force reference implementations. Slow on purpose and independent of
//! the recursion, so they can be used to check it.

use num_bigint::BigUint;

use crate::curve::SeparatedCurve;
use crate::error::{Error, Result};
use crate::modarith::{add_mod, big_mod_word, mul_mod};
use crate::unipoly::{FpPoly, UniPoly};

/// Default bound on `p^{2k}` for [`brute_count`].
pub const DEFAULT_ORACLE_CEILING: u64 = 100_000_000;

/// Bound on `p^{2k}` for [`naive_pair_count`].
pub const NAIVE_PAIR_CEILING: u64 = 1_000_000;

fn modulus_u64(curve: &SeparatedCurve) -> Option<u64> {
    let digits = curve.ctx().modulus().to_u64_digits();
    match digits.as_slice() {
        [m] if *m < 1 << 40 => Some(*m),
        _ => None,
    }
}

/// Table of `f(a) mod m` for every `a` in `[0, m)`.
fn value_table(f: &UniPoly, m: u64) -> Vec<u64> {
    let coeffs: Vec<u64> = f.coeffs().iter().map(|c| big_mod_word(c, m)).collect();
    (0..m)
        .map(|a| {
            coeffs
                .iter()
                .rev()
                .fold(0, |acc, &c| add_mod(mul_mod(acc, a, m), c, m))
        })
        .collect()
}

/// Root count over `(Z/p^k)^2` by per-axis value histograms, refusing when
/// `p^{2k}` exceeds `ceiling`.
pub fn brute_count(curve: &SeparatedCurve, ceiling: u64) -> Result<BigUint> {
    let too_large = Error::OracleTooLarge {
        k: curve.k(),
        ceiling,
    };
    let m = modulus_u64(curve).ok_or(too_large.clone())?;
    if m.checked_mul(m).is_none_or(|sq| sq > ceiling) {
        return Err(too_large);
    }
    Ok(histogram_count(curve, m))
}

/// [`brute_count`] without the ceiling; only a hard memory guard applies.
pub fn brute_count_unchecked(curve: &SeparatedCurve) -> Result<BigUint> {
    let m = modulus_u64(curve).ok_or(Error::OracleTooLarge {
        k: curve.k(),
        ceiling: 1 << 40,
    })?;
    Ok(histogram_count(curve, m))
}

fn histogram_count(curve: &SeparatedCurve, m: u64) -> BigUint {
    let mut hist_g = vec![0u64; m as usize];
    for v in value_table(curve.g(), m) {
        hist_g[v as usize] += 1;
    }
    let mut total = BigUint::default();
    for v in value_table(curve.h(), m) {
        let need = (m - v) % m;
        total += hist_g[need as usize];
    }
    total
}

/// Root count by scanning every pair; only for `p^{2k} <= 10^6`.
pub fn naive_pair_count(curve: &SeparatedCurve) -> Result<u64> {
    let m = modulus_u64(curve).filter(|&m| m * m <= NAIVE_PAIR_CEILING);
    let m = m.ok_or(Error::OracleTooLarge {
        k: curve.k(),
        ceiling: NAIVE_PAIR_CEILING,
    })?;
    let gv = value_table(curve.g(), m);
    let hv = value_table(curve.h(), m);
    let mut count = 0;
    for &x in &gv {
        for &y in &hv {
            if (x + y) % m == 0 {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Every root of the curve modulo `p^j` (`j <= k`), sorted.
pub fn roots_mod_power(curve: &SeparatedCurve, j: u32) -> Result<Vec<(u64, u64)>> {
    let ctx = curve.ctx().with_exponent(j)?;
    let reduced = curve.reduce_to(&ctx);
    let m = modulus_u64(&reduced).filter(|&m| m <= 1 << 24);
    let m = m.ok_or(Error::OracleTooLarge {
        k: j,
        ceiling: 1 << 24,
    })?;
    let gv = value_table(reduced.g(), m);
    let hv = value_table(reduced.h(), m);
    let mut by_value: Vec<Vec<u64>> = vec![Vec::new(); m as usize];
    for (b, &v) in hv.iter().enumerate() {
        by_value[v as usize].push(b as u64);
    }
    let mut out = Vec::new();
    for (a, &v) in gv.iter().enumerate() {
        for &b in &by_value[((m - v) % m) as usize] {
            out.push((a as u64, b));
        }
    }
    Ok(out)
}

/// Roots of `f` in `F_p` by evaluating at every residue.
pub fn brute_fp_roots(f: &FpPoly) -> Result<Vec<u64>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok((0..f.p()).filter(|&a| f.eval(a) == 0).collect())
}

/// Multiplicity of `f mod p` at `(a, b)` from the homogeneous decomposition
/// of the bivariate expansion of `f(a + x1, b + x2)`.
pub fn brute_multiplicity(curve: &SeparatedCurve, a: u64, b: u64) -> Result<u32> {
    let p = curve.p();
    let g = curve.g_tilde();
    let h = curve.h_tilde();
    if g.is_zero() && h.is_zero() {
        return Err(Error::ZeroReduction);
    }
    let d = g.coeffs().len().max(h.coeffs().len()).max(1);
    // monomials c * x1^i1 * x2^i2
    let mut monomials = Vec::new();
    for (i, &c) in g.coeffs().iter().enumerate() {
        monomials.push((i, 0usize, c));
    }
    for (i, &c) in h.coeffs().iter().enumerate() {
        monomials.push((0, i, c));
    }
    let binom = pascal_mod(d, p);
    let pow_table = |base: u64| -> Vec<u64> {
        let mut t = vec![1 % p; d];
        for e in 1..d {
            t[e] = mul_mod(t[e - 1], base % p, p);
        }
        t
    };
    let pa = pow_table(a);
    let pb = pow_table(b);
    let mut expanded = vec![vec![0u64; d]; d];
    for (i1, i2, c) in monomials {
        for j1 in 0..=i1 {
            let t1 = mul_mod(binom[i1][j1], pa[i1 - j1], p);
            for j2 in 0..=i2 {
                let t2 = mul_mod(binom[i2][j2], pb[i2 - j2], p);
                let term = mul_mod(c, mul_mod(t1, t2, p), p);
                expanded[j1][j2] = add_mod(expanded[j1][j2], term, p);
            }
        }
    }
    let lowest = (0..2 * d)
        .find(|&total| {
            (0..=total).any(|j1| {
                let j2 = total - j1;
                j1 < d && j2 < d && expanded[j1][j2] != 0
            })
        })
        .ok_or(Error::ZeroReduction)?;
    Ok(lowest as u32)
}

fn pascal_mod(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut rows = vec![vec![0u64; n]; n];
    for i in 0..n {
        rows[i][0] = 1 % p;
        for j in 1..=i {
            rows[i][j] = add_mod(rows[i - 1][j - 1], rows[i - 1][j], p);
        }
    }
    rows
}
