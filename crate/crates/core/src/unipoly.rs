//! Univariate polynomials over `Z/p^k` ([`UniPoly`]) and over `F_p`
//! ([`FpPoly`]), with randomized root finding over `F_p`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::modarith::{
    add_mod, big_mod_word, inv_mod, mul_mod, rng_from_seed, sub_mod, valp_capped,
    PrimePowerCtx,
};

/// Polynomial with coefficients in `Z/p^k`; `coeffs[i]` is the coefficient
/// of `x^i`. Coefficients are canonical residues and trailing zeros are trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigUint>,
    ctx: PrimePowerCtx,
}

impl UniPoly {
    pub fn new(coeffs: Vec<BigUint>, ctx: &PrimePowerCtx) -> Self {
        let m = ctx.modulus();
        let coeffs = coeffs.into_iter().map(|c| c % m).collect();
        let mut poly = Self {
            coeffs,
            ctx: ctx.clone(),
        };
        poly.trim();
        poly
    }

    pub fn from_ints(coeffs: &[BigInt], ctx: &PrimePowerCtx) -> Self {
        let coeffs = coeffs.iter().map(|c| ctx.reduce(c)).collect();
        Self::new(coeffs, ctx)
    }

    pub fn from_i64(coeffs: &[i64], ctx: &PrimePowerCtx) -> Self {
        let coeffs: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::from_ints(&coeffs, ctx)
    }

    pub fn zero(ctx: &PrimePowerCtx) -> Self {
        Self {
            coeffs: Vec::new(),
            ctx: ctx.clone(),
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &PrimePowerCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigUint {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Horner evaluation reduced mod `m`.
    pub fn eval_mod(&self, a: &BigUint, m: &BigUint) -> BigUint {
        let a = a % m;
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, c| (acc * &a + c) % m)
    }

    pub fn eval(&self, a: &BigUint) -> BigUint {
        self.eval_mod(a, self.ctx.modulus())
    }

    /// Coefficients of `f(ζ + p·x)` mod `p^k`: synthetic recentering at `ζ`,
    /// then coefficient `i` scaled by `p^i`.
    pub fn taylor_shift_p(&self, zeta: &BigUint) -> UniPoly {
        let m = self.ctx.modulus();
        let zeta = zeta % m;
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let carry = &c[j + 1] * &zeta;
                c[j] = (&c[j] + carry) % m;
            }
        }
        let p = BigUint::from(self.ctx.p());
        let mut scale = BigUint::from(1u32);
        for ci in c.iter_mut() {
            *ci = (&*ci * &scale) % m;
            scale = (scale * &p) % m;
        }
        let mut out = UniPoly {
            coeffs: c,
            ctx: self.ctx.clone(),
        };
        out.trim();
        out
    }

    /// Least p-adic valuation over the coefficients, truncated at `cap`.
    /// The zero polynomial reports `cap`.
    pub fn content_valuation(&self, cap: u32) -> u32 {
        let p = self.ctx.p();
        self.coeffs
            .iter()
            .map(|c| valp_capped(c, p, cap))
            .min()
            .unwrap_or(cap)
    }

    /// Same as [`content_valuation`](Self::content_valuation) but ignoring the constant term.
    pub fn nonconstant_content_valuation(&self, cap: u32) -> u32 {
        let p = self.ctx.p();
        self.coeffs
            .iter()
            .skip(1)
            .map(|c| valp_capped(c, p, cap))
            .min()
            .unwrap_or(cap)
    }

    pub fn reduce_mod_p(&self) -> FpPoly {
        let p = self.ctx.p();
        FpPoly::new(self.coeffs.iter().map(|c| big_mod_word(c, p)).collect(), p)
    }

    /// Reduce into a smaller power of the same prime.
    pub fn reduce_to(&self, target: &PrimePowerCtx) -> UniPoly {
        debug_assert_eq!(target.p(), self.ctx.p());
        UniPoly::new(self.coeffs.clone(), target)
    }

    /// Divide every coefficient by `p^s` and land in `target`.
    /// Fails if some coefficient is not divisible by `p^s`.
    pub fn div_exact_pow(&self, s: u32, target: &PrimePowerCtx) -> Result<UniPoly> {
        let ps = self.ctx.pow(s);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (i, c) in self.coeffs.iter().enumerate() {
            let (q, r) = c.div_rem(&ps);
            if !r.is_zero() {
                return Err(Error::Internal(format!(
                    "coefficient {i} not divisible by p^{s} during perturbation"
                )));
            }
            out.push(q);
        }
        Ok(UniPoly::new(out, target))
    }

    pub fn add_constant(&self, c: &BigUint) -> UniPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(BigUint::zero());
        }
        coeffs[0] = (&coeffs[0] + c) % self.ctx.modulus();
        UniPoly::new(coeffs, &self.ctx)
    }

    /// Splits off the constant term: `(f(0), f - f(0))`.
    pub fn split_constant(&self) -> (BigUint, UniPoly) {
        let c0 = self.coeff(0);
        let mut coeffs = self.coeffs.clone();
        if let Some(first) = coeffs.first_mut() {
            *first = BigUint::zero();
        }
        (c0, UniPoly::new(coeffs, &self.ctx))
    }

    /// Coefficients as signed integers in the balanced range `(-p^k/2, p^k/2]`.
    pub fn balanced_coeffs(&self) -> Vec<BigInt> {
        let m = self.ctx.modulus();
        let half = m >> 1;
        self.coeffs
            .iter()
            .map(|c| {
                if c > &half {
                    BigInt::from(c.clone()) - BigInt::from(m.clone())
                } else {
                    BigInt::from(c.clone())
                }
            })
            .collect()
    }

    /// Formats using the balanced representatives, e.g. `x^2 - 3`.
    pub fn display_var<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        let terms = self
            .balanced_coeffs()
            .into_iter()
            .enumerate()
            .rev()
            .map(|(i, c)| (c, var, i))
            .collect();
        Terms(terms)
    }
}

/// Signed monomials `c * var^e`, printed in the given order with zeros skipped.
pub(crate) struct Terms<'a>(pub Vec<(BigInt, &'a str, usize)>);

impl fmt::Display for Terms<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, var, i) in &self.0 {
            if c.is_zero() {
                continue;
            }
            let neg = c.sign() == num_bigint::Sign::Minus;
            let mag = c.magnitude();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let unit = mag == &BigUint::from(1u32);
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str(var)?;
                    if *i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Polynomial over `F_p` with word-sized coefficients, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    coeffs: Vec<u64>,
    p: u64,
}

impl FpPoly {
    pub fn new(coeffs: Vec<u64>, p: u64) -> Self {
        let mut poly = Self {
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
            p,
        };
        poly.trim();
        poly
    }

    pub fn from_i64(coeffs: &[i64], p: u64) -> Self {
        let coeffs = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        Self::new(coeffs, p)
    }

    pub fn zero(p: u64) -> Self {
        Self {
            coeffs: Vec::new(),
            p,
        }
    }

    pub fn constant(c: u64, p: u64) -> Self {
        Self::new(vec![c], p)
    }

    /// `x + c`
    pub fn linear(c: u64, p: u64) -> Self {
        Self::new(vec![c, 1], p)
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Zero or a nonzero constant.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn lead(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, a: u64) -> u64 {
        let p = self.p;
        let a = a % p;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| add_mod(mul_mod(acc, a, p), c, p))
    }

    /// Formal derivative mod `p`.
    pub fn derivative(&self) -> FpPoly {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect();
        FpPoly::new(coeffs, p)
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = inv_mod(self.lead(), self.p);
        let coeffs = self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect();
        FpPoly::new(coeffs, self.p)
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| add_mod(self.coeff(i), other.coeff(i), self.p))
            .collect();
        FpPoly::new(coeffs, self.p)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| sub_mod(self.coeff(i), other.coeff(i), self.p))
            .collect();
        FpPoly::new(coeffs, self.p)
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
            }
        }
        FpPoly::new(out, p)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let p = self.p;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return (FpPoly::zero(p), self.clone());
        }
        let inv = inv_mod(divisor.lead(), p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = mul_mod(rem[i + dd], inv, p);
            quot[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = sub_mod(rem[i + j], mul_mod(c, d, p), p);
            }
        }
        rem.truncate(dd);
        (FpPoly::new(quot, p), FpPoly::new(rem, p))
    }

    pub fn rem(&self, divisor: &FpPoly) -> FpPoly {
        self.div_rem(divisor).1
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^exp mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut exp: u64, modulus: &FpPoly) -> FpPoly {
        let mut base = self.rem(modulus);
        let mut acc = FpPoly::constant(1, self.p).rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            exp >>= 1;
        }
        acc
    }

    /// Coefficients of `f(a + x)` over `F_p` (no scaling).
    pub fn taylor_shift(&self, a: u64) -> FpPoly {
        let p = self.p;
        let a = a % p;
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                c[j] = add_mod(c[j], mul_mod(c[j + 1], a, p), p);
            }
        }
        FpPoly::new(c, p)
    }

    /// Number of times `(x - a)` divides `self`; `self` must be nonzero.
    pub fn root_multiplicity(&self, a: u64) -> u32 {
        let shifted = self.taylor_shift(a);
        shifted.coeffs.iter().take_while(|&&c| c == 0).count() as u32
    }
}

/// Root-finding strategy over `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RootMethod {
    /// Evaluate at every residue.
    Brute,
    /// Cantor-Zassenhaus: distinct-degree step then random equal-degree splitting.
    CantorZassenhaus,
    /// Brute force for small `p`, Cantor-Zassenhaus otherwise.
    #[default]
    Auto,
}

impl RootMethod {
    /// Resolves `Auto` for a given prime and degree.
    pub fn resolve(self, p: u64, degree: usize) -> RootMethod {
        match self {
            RootMethod::Auto if p <= 4096 || p <= 64 * degree as u64 => RootMethod::Brute,
            RootMethod::Auto => RootMethod::CantorZassenhaus,
            m => m,
        }
    }
}

impl FromStr for RootMethod {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "brute" => Ok(RootMethod::Brute),
            "cz" => Ok(RootMethod::CantorZassenhaus),
            "auto" => Ok(RootMethod::Auto),
            other => Err(format!("unknown root method `{other}` (expected brute, cz or auto)")),
        }
    }
}

impl fmt::Display for RootMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RootMethod::Brute => "brute",
            RootMethod::CantorZassenhaus => "cz",
            RootMethod::Auto => "auto",
        })
    }
}

/// Roots in `F_p` with their multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RootProfile {
    pub entries: BTreeMap<u64, u32>,
}

impl RootProfile {
    pub fn roots(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.keys().copied()
    }

    /// Roots of multiplicity at least two.
    pub fn degenerate_roots(&self) -> Vec<u64> {
        self.entries
            .iter()
            .filter(|(_, &m)| m >= 2)
            .map(|(&a, _)| a)
            .collect()
    }

    /// Number of simple roots.
    pub fn simple_count(&self) -> usize {
        self.entries.values().filter(|&&m| m == 1).count()
    }

    pub fn multiplicity(&self, a: u64) -> u32 {
        self.entries.get(&a).copied().unwrap_or(0)
    }
}

/// Las Vegas root finder over `F_p`. Owns its RNG; the output never depends
/// on the random choices, only the number of retries does.
#[derive(Debug, Clone)]
pub struct RootFinder {
    method: RootMethod,
    rng: ChaCha8Rng,
    retries: u64,
}

impl RootFinder {
    pub fn new(method: RootMethod, seed: u64) -> Self {
        Self {
            method,
            rng: rng_from_seed(seed),
            retries: 0,
        }
    }

    pub fn method(&self) -> RootMethod {
        self.method
    }

    /// Failed splitting attempts so far.
    pub fn retries(&self) -> u64 {
        self.retries
    }

    /// Sorted distinct roots of `f` in `F_p`.
    pub fn roots(&mut self, f: &FpPoly) -> Result<Vec<u64>> {
        let Some(deg) = f.degree() else {
            return Err(Error::ZeroPolynomial);
        };
        if deg == 0 {
            return Ok(Vec::new());
        }
        let p = f.p();
        match self.method.resolve(p, deg) {
            RootMethod::Brute => Ok(brute_roots(f)),
            _ => {
                let mut out = self.cz_roots(f);
                out.sort_unstable();
                Ok(out)
            }
        }
    }

    pub fn multiplicities(&mut self, f: &FpPoly) -> Result<RootProfile> {
        let roots = self.roots(f)?;
        let entries = roots
            .into_iter()
            .map(|a| (a, f.root_multiplicity(a)))
            .collect();
        Ok(RootProfile { entries })
    }

    fn cz_roots(&mut self, f: &FpPoly) -> Vec<u64> {
        let p = f.p();
        let f = f.monic();
        let x = FpPoly::new(vec![0, 1], p);
        // product of the distinct linear factors: gcd(f, x^p - x)
        let xp = x.pow_mod(p, &f);
        let linear_part = f.gcd(&xp.sub(&x));
        let mut out = Vec::new();
        self.split(linear_part, &mut out);
        out
    }

    fn split(&mut self, g: FpPoly, out: &mut Vec<u64>) {
        let p = g.p();
        match g.degree() {
            None | Some(0) => {}
            Some(1) => {
                let g = g.monic();
                out.push((p - g.coeff(0)) % p);
            }
            Some(deg) => loop {
                let r = self.rng.random_range(0..p);
                let probe = if p == 2 {
                    // over F_2 the degree-1 trace map is the identity
                    FpPoly::linear(r, p)
                } else {
                    FpPoly::linear(r, p)
                        .pow_mod((p - 1) / 2, &g)
                        .sub(&FpPoly::constant(1, p))
                };
                let d = g.gcd(&probe);
                let dd = d.degree().unwrap_or(0);
                if dd > 0 && dd < deg {
                    let (q, _) = g.div_rem(&d);
                    self.split(d, out);
                    self.split(q, out);
                    break;
                }
                self.retries += 1;
            },
        }
    }
}

fn brute_roots(f: &FpPoly) -> Vec<u64> {
    (0..f.p()).filter(|&a| f.eval(a) == 0).collect()
}

/// Free-function form of [`UniPoly::eval_mod`].
pub fn eval_mod(f: &UniPoly, a: &BigUint, m: &BigUint) -> BigUint {
    f.eval_mod(a, m)
}
