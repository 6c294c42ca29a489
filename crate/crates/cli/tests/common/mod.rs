//! Deterministic curve corpus shared by the integration suites.

#![allow(dead_code)]

use num_bigint::BigInt;
use ppcount::{PrimePowerCtx, SeparatedCurve};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Integer coefficients of `g(x1) + h(x2)`; instantiate at any precision.
#[derive(Debug, Clone)]
pub struct Sample {
    pub p: u64,
    pub g: Vec<BigInt>,
    pub h: Vec<BigInt>,
    pub kind: &'static str,
}

impl Sample {
    pub fn at(&self, k: u32) -> SeparatedCurve {
        let ctx = PrimePowerCtx::new(self.p, k).unwrap();
        SeparatedCurve::from_ints(&self.g, &self.h, &ctx)
    }

    pub fn degree(&self) -> usize {
        let deg = |v: &[BigInt]| {
            v.iter()
                .rposition(|c| c != &BigInt::from(0))
                .unwrap_or(0)
        };
        deg(&self.g).max(deg(&self.h))
    }
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Product of integer polynomials.
fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

fn scale(a: &[i64], c: i64) -> Vec<i64> {
    a.iter().map(|&x| x * c).collect()
}

/// `(x - a)^m`
fn root_power(a: i64, m: usize) -> Vec<i64> {
    (0..m).fold(vec![1], |acc, _| mul(&acc, &[-a, 1]))
}

pub struct Gen {
    rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn poly(&mut self, deg: usize, bound: i64) -> Vec<i64> {
        (0..=deg).map(|_| self.rng.random_range(-bound..=bound)).collect()
    }

    fn rand_poly(&mut self, lo: usize, hi: usize, bound: i64) -> Vec<i64> {
        let deg = self.rng.random_range(lo..=hi);
        self.poly(deg, bound)
    }

    fn unit(&mut self, p: u64) -> i64 {
        let p = p as i64;
        let u = self.rng.random_range(1..p);
        if self.rng.random_bool(0.5) {
            u
        } else {
            u - p
        }
    }

    fn pow(p: u64, e: u32) -> i64 {
        (p as i64).pow(e)
    }

    /// One curve of the given kind with coefficients bounded by about `p^k`,
    /// total degree at most `max_deg`.
    pub fn sample(&mut self, p: u64, k: u32, kind: usize, max_deg: usize) -> Sample {
        let bound = Self::pow(p, k);
        let pi = p as i64;
        let (g, h, name) = match kind {
            // uniform coefficients
            0 | 1 => {
                let dg = self.rng.random_range(0..=max_deg);
                let dh = self.rng.random_range(0..=max_deg);
                (self.poly(dg, bound), self.poly(dh, bound), "random")
            }
            // small coefficients: cusps, nodes and other low-height shapes
            2 => {
                let dg = self.rng.random_range(1..=max_deg);
                let dh = self.rng.random_range(1..=max_deg);
                (self.poly(dg, 2), self.poly(dh, 2), "small")
            }
            // planted singular point at (a, b)
            3 | 4 => {
                let a = self.rng.random_range(0..pi);
                let b = self.rng.random_range(0..pi);
                let m1 = self.rng.random_range(2..=max_deg.min(4));
                let m2 = self.rng.random_range(2..=max_deg.min(4));
                let u = self.unit(p);
                let v = self.unit(p);
                let e = self.rng.random_range(1..=k);
                let noise_g = scale(&self.rand_poly(0, max_deg, pi), Self::pow(p, e));
                let noise_h = scale(&self.rand_poly(0, max_deg, pi), Self::pow(p, e));
                let g = add(&scale(&root_power(a, m1), u), &noise_g);
                let h = add(&scale(&root_power(b, m2), v), &noise_h);
                (g, h, "planted-point")
            }
            // line branch in x1: h divisible by p, g with a degenerate root
            5 => {
                let a = self.rng.random_range(0..pi);
                let m = self.rng.random_range(2..=max_deg.min(4));
                let q = self.rand_poly(0, max_deg - m, pi);
                let c = self.rng.random_range(1..=k);
                let e = self.rng.random_range(1..=k + 1);
                let g = add(
                    &mul(&root_power(a, m), &add(&q, &[self.unit(p)])),
                    &scale(&self.rand_poly(0, max_deg, pi), Self::pow(p, e)),
                );
                let h = scale(&self.rand_poly(1, max_deg, pi), Self::pow(p, c));
                (g, h, "line-x1")
            }
            // line branch in x2
            6 => {
                let b = self.rng.random_range(0..pi);
                let m = self.rng.random_range(2..=max_deg.min(4));
                let c = self.rng.random_range(1..=k);
                let h = mul(&root_power(b, m), &[self.unit(p)]);
                let mut g = scale(&self.rand_poly(1, max_deg, pi), Self::pow(p, c));
                g[0] = self.rng.random_range(-bound..=bound);
                (g, h, "line-x2")
            }
            // content-divisible or Frobenius-degenerate
            _ => {
                let e = self.rng.random_range(1..=k);
                if (p as usize) <= max_deg && self.rng.random_bool(0.5) {
                    let pu = p as usize;
                    let mut g = vec![0i64; pu + 1];
                    let mut h = vec![0i64; pu + 1];
                    g[pu] = self.unit(p);
                    h[pu] = self.unit(p);
                    let g = add(&g, &scale(&self.rand_poly(0, max_deg, pi), pi));
                    (g, h, "frobenius")
                } else {
                    let dg = self.rng.random_range(0..=max_deg);
                    let dh = self.rng.random_range(0..=max_deg);
                    let g = scale(&self.poly(dg, pi * pi), Self::pow(p, e));
                    let h = scale(&self.poly(dh, pi * pi), Self::pow(p, e));
                    (g, h, "content")
                }
            }
        };
        Sample {
            p,
            g: ints(&g),
            h: ints(&h),
            kind: name,
        }
    }

    pub fn corpus(&mut self, p: u64, k: u32, n: usize, max_deg: usize) -> Vec<Sample> {
        (0..n).map(|i| self.sample(p, k, i % 8, max_deg)).collect()
    }
}
