//! Modular arithmetic helpers: the `Z/p^k` context, p-adic valuations,
//! word-sized `F_p` arithmetic, primality and seed derivation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// The ring `Z/p^k` with its modulus cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimePowerCtx {
    p: u64,
    k: u32,
    modulus: BigUint,
}

impl PrimePowerCtx {
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        Ok(Self {
            p,
            k,
            modulus: BigUint::from(p).pow(k),
        })
    }

    /// Same prime, different exponent.
    pub fn with_exponent(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroExponent);
        }
        Ok(Self {
            p: self.p,
            k,
            modulus: BigUint::from(self.p).pow(k),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }

    /// `p^e` as a big integer.
    pub fn pow(&self, e: u32) -> BigUint {
        BigUint::from(self.p).pow(e)
    }

    /// Canonical residue of a signed integer in `[0, p^k)`.
    pub fn reduce(&self, n: &BigInt) -> BigUint {
        reduce_signed(n, &self.modulus)
    }
}

pub(crate) fn reduce_signed(n: &BigInt, m: &BigUint) -> BigUint {
    let r = n.magnitude() % m;
    if n.sign() == Sign::Minus && !r.is_zero() {
        m - r
    } else {
        r
    }
}

/// A p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Truncates to `cap`, mapping `Infinite` to `cap`.
    pub fn capped(self, cap: u32) -> u32 {
        match self {
            Valuation::Finite(v) => v.min(cap),
            Valuation::Infinite => cap,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in `n`.
pub fn valp(n: &BigUint, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(valp_capped(n, p, u32::MAX))
}

/// `min(ord_p(n), cap)`; zero maps to `cap`.
pub fn valp_capped(n: &BigUint, p: u64, cap: u32) -> u32 {
    if n.is_zero() {
        return cap;
    }
    if let Some(small) = u64_digits_if_small(n) {
        let mut v = 0;
        let mut m = small;
        while v < cap && m % p == 0 {
            m /= p;
            v += 1;
        }
        return v;
    }
    let p_big = BigUint::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while v < cap {
        let (q, r) = m.div_rem(&p_big);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    v
}

fn u64_digits_if_small(n: &BigUint) -> Option<u64> {
    let digits = n.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => Some(digits[0]),
        _ => None,
    }
}

/// Deterministic primality test: trial division below 2^32, Miller-Rabin
/// with a witness set that is exact for all 64-bit integers above.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 1 << 32 {
        if n < 4 {
            return true;
        }
        if n.is_multiple_of(2) {
            return false;
        }
        let mut d = 3u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 2;
        }
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Residue of a big integer modulo a word-sized prime.
pub fn big_mod_word(n: &BigUint, p: u64) -> u64 {
    let r = n % p;
    r.to_u64_digits().first().copied().unwrap_or(0)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the subtree reached by `path` (child indices from the root).
/// The root itself uses `seed` unchanged.
pub fn derive_seed(seed: u64, path: &[u32]) -> u64 {
    if path.is_empty() {
        return seed;
    }
    let h = path
        .iter()
        .fold(0x5eed_u64, |acc, &i| splitmix64(acc ^ u64::from(i)));
    seed ^ h
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
