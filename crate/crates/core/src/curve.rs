//! Separated curves `f = g(x1) + h(x2)` over `Z/p^k`: normalization,
//! multiplicities, valuations, singular loci, perturbation and Hensel lifting.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{big_mod_word, inv_mod, mul_mod, sub_mod, valp_capped, PrimePowerCtx};
use crate::unipoly::{FpPoly, RootFinder, RootProfile, Terms, UniPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    X1,
    X2,
}

/// One element of a singular locus, as used to label tree edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LocusElement {
    Point { a: u64, b: u64 },
    /// `{a} x F_p`
    VerticalLine { a: u64 },
    /// `F_p x {b}`
    HorizontalLine { b: u64 },
}

impl fmt::Display for LocusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocusElement::Point { a, b } => write!(f, "({a},{b})"),
            LocusElement::VerticalLine { a } => write!(f, "x1={a}"),
            LocusElement::HorizontalLine { b } => write!(f, "x2={b}"),
        }
    }
}

/// Singular set of the reduction mod `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SingularLocus {
    IsolatedPoints(Vec<(u64, u64)>),
    VerticalLines(Vec<u64>),
    HorizontalLines(Vec<u64>),
    /// Both partial derivatives vanish identically: every curve point is singular.
    AllCurvePoints,
}

impl SingularLocus {
    pub fn is_empty(&self) -> bool {
        match self {
            SingularLocus::IsolatedPoints(v) => v.is_empty(),
            SingularLocus::VerticalLines(v) | SingularLocus::HorizontalLines(v) => v.is_empty(),
            SingularLocus::AllCurvePoints => false,
        }
    }

    /// Number of singular `F_p`-points, given the total point count of the curve.
    pub fn point_count(&self, p: u64, curve_points: u64) -> u64 {
        match self {
            SingularLocus::IsolatedPoints(v) => v.len() as u64,
            SingularLocus::VerticalLines(v) | SingularLocus::HorizontalLines(v) => v.len() as u64 * p,
            SingularLocus::AllCurvePoints => curve_points,
        }
    }

    /// Edge labels for the point and line variants; empty for `AllCurvePoints`.
    pub fn elements(&self) -> Vec<LocusElement> {
        match self {
            SingularLocus::IsolatedPoints(v) => {
                v.iter().map(|&(a, b)| LocusElement::Point { a, b }).collect()
            }
            SingularLocus::VerticalLines(v) => {
                v.iter().map(|&a| LocusElement::VerticalLine { a }).collect()
            }
            SingularLocus::HorizontalLines(v) => {
                v.iter().map(|&b| LocusElement::HorizontalLine { b }).collect()
            }
            SingularLocus::AllCurvePoints => Vec::new(),
        }
    }
}

/// How a curve with unit content is handled by the counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    /// Reduction mod `p` is identically zero.
    Zero,
    /// Reduction mod `p` is a nonzero constant.
    Constant,
    Squarefree,
    Line(Axis),
    Degenerate,
}

/// The `p` lifts of a smooth root from `Z/p^j` to `Z/p^{j+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftSet {
    pub base: (BigUint, BigUint),
    pub j: u32,
    pub lifts: Vec<(BigUint, BigUint)>,
}

/// Result of one perturbation step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub child: SeparatedCurve,
    pub k_child: u32,
    pub s: u32,
}

/// `f = g(x1) + h(x2)` with `h(0) = 0`; the constant term lives in `g`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeparatedCurve {
    g: UniPoly,
    h: UniPoly,
}

impl SeparatedCurve {
    /// Moves the constant term of `h` into `g`. Both must share a context.
    pub fn normalize(g: UniPoly, h: UniPoly) -> Self {
        assert_eq!(g.ctx(), h.ctx(), "g and h must live in the same ring");
        let (c, h) = h.split_constant();
        let g = if c.is_zero() { g } else { g.add_constant(&c) };
        Self { g, h }
    }

    pub fn from_ints(g: &[BigInt], h: &[BigInt], ctx: &PrimePowerCtx) -> Self {
        Self::normalize(UniPoly::from_ints(g, ctx), UniPoly::from_ints(h, ctx))
    }

    pub fn from_i64(g: &[i64], h: &[i64], ctx: &PrimePowerCtx) -> Self {
        Self::normalize(UniPoly::from_i64(g, ctx), UniPoly::from_i64(h, ctx))
    }

    pub fn zero(ctx: &PrimePowerCtx) -> Self {
        Self {
            g: UniPoly::zero(ctx),
            h: UniPoly::zero(ctx),
        }
    }

    pub fn g(&self) -> &UniPoly {
        &self.g
    }

    pub fn h(&self) -> &UniPoly {
        &self.h
    }

    pub fn ctx(&self) -> &PrimePowerCtx {
        self.g.ctx()
    }

    pub fn p(&self) -> u64 {
        self.ctx().p()
    }

    pub fn k(&self) -> u32 {
        self.ctx().k()
    }

    /// Total degree of the residue polynomial (0 for constants).
    pub fn degree(&self) -> usize {
        self.g.degree().unwrap_or(0).max(self.h.degree().unwrap_or(0))
    }

    pub fn g_tilde(&self) -> FpPoly {
        self.g.reduce_mod_p()
    }

    pub fn h_tilde(&self) -> FpPoly {
        self.h.reduce_mod_p()
    }

    /// Degree of `f mod p` (0 for constants and zero).
    pub fn reduced_degree(&self) -> usize {
        let g = self.g_tilde().degree().unwrap_or(0);
        let h = self.h_tilde().degree().unwrap_or(0);
        g.max(h)
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_zero() && self.h.is_zero()
    }

    /// `s(f)`, truncated at `cap`.
    pub fn content_valuation(&self, cap: u32) -> u32 {
        self.g.content_valuation(cap).min(self.h.content_valuation(cap))
    }

    /// `f(a, b) mod p^k`.
    pub fn eval(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (self.g.eval(a) + self.h.eval(b)) % self.ctx().modulus()
    }

    /// Same coefficients read in another power of `p`.
    pub fn reduce_to(&self, target: &PrimePowerCtx) -> SeparatedCurve {
        Self {
            g: self.g.reduce_to(target),
            h: self.h.reduce_to(target),
        }
    }

    /// Divides out `p^v` (which must divide every coefficient) into `Z/p^{k-v}`.
    pub fn divide_content(&self, v: u32) -> Result<SeparatedCurve> {
        let target = self.ctx().with_exponent(self.k() - v)?;
        Ok(Self {
            g: self.g.div_exact_pow(v, &target)?,
            h: self.h.div_exact_pow(v, &target)?,
        })
    }

    pub(crate) fn shape(&self) -> Shape {
        let gt = self.g_tilde();
        let ht = self.h_tilde();
        match (gt.is_constant(), ht.is_zero()) {
            (true, true) if gt.is_zero() => Shape::Zero,
            (true, true) => Shape::Constant,
            (false, true) => Shape::Line(Axis::X1),
            (true, false) => Shape::Line(Axis::X2),
            (false, false) => {
                if gt.derivative().is_zero() && ht.derivative().is_zero() {
                    Shape::Degenerate
                } else {
                    Shape::Squarefree
                }
            }
        }
    }

    /// Least total degree of a nonzero term of `f mod p` recentered at `(a, b)`.
    /// Zero exactly when the point is off the curve.
    pub fn multiplicity_at(&self, a: u64, b: u64) -> Result<u32> {
        let p = self.p();
        let gt = self.g_tilde();
        let ht = self.h_tilde();
        if gt.is_zero() && ht.is_zero() {
            return Err(Error::ZeroReduction);
        }
        let (a, b) = (a % p, b % p);
        if !(gt.eval(a) + ht.eval(b)).is_multiple_of(p) {
            return Ok(0);
        }
        let lowest = |f: &FpPoly, at: u64| -> Option<u32> {
            let shifted = f.taylor_shift(at);
            (1..shifted.coeffs().len())
                .find(|&j| shifted.coeff(j) != 0)
                .map(|j| j as u32)
        };
        // an on-curve point of a nonzero reduction has some nonconstant term
        lowest(&gt, a)
            .into_iter()
            .chain(lowest(&ht, b))
            .min()
            .ok_or(Error::ConstantReduction)
    }

    /// `s(f, (a, b))`: content valuation of `f(a + p x1, b + p x2)`, truncated at `cap`.
    pub fn point_valuation(&self, a: u64, b: u64, cap: u32) -> u32 {
        let gs = self.g.taylor_shift_p(&BigUint::from(a));
        let hs = self.h.taylor_shift_p(&BigUint::from(b));
        let p = self.p();
        let constant = (gs.coeff(0) + hs.coeff(0)) % self.ctx().modulus();
        valp_capped(&constant, p, cap)
            .min(gs.nonconstant_content_valuation(cap))
            .min(hs.nonconstant_content_valuation(cap))
    }

    /// The univariate polynomial carrying the roots on a line axis, and the
    /// content valuation `c` of the other variable's nonconstant part.
    fn line_parts(&self, axis: Axis, cap: u32) -> (UniPoly, u32) {
        match axis {
            Axis::X1 => (self.g.clone(), self.h.content_valuation(cap)),
            Axis::X2 => {
                let (c0, rest) = self.g.split_constant();
                (self.h.add_constant(&c0), rest.content_valuation(cap))
            }
        }
    }

    /// `min(s(G, z), c)` for the line branch along `axis`.
    pub fn line_valuation(&self, axis: Axis, z: u64, cap: u32) -> Result<u32> {
        if self.shape() != Shape::Line(axis) {
            return Err(Error::BranchMismatch("line branch does not apply on this axis"));
        }
        let (big_g, c) = self.line_parts(axis, cap);
        let shifted = big_g.taylor_shift_p(&BigUint::from(z));
        Ok(shifted.content_valuation(cap).min(c))
    }

    /// Root profile of the line polynomial `G mod p`.
    pub(crate) fn line_profile(&self, axis: Axis, rf: &mut RootFinder) -> Result<RootProfile> {
        let (big_g, _) = self.line_parts(axis, self.k());
        rf.multiplicities(&big_g.reduce_mod_p())
    }

    pub fn singular_locus(&self, rf: &mut RootFinder) -> Result<SingularLocus> {
        Ok(self.locus_with_profile(rf)?.0)
    }

    /// Singular locus plus, for the line branch, the root profile it came from.
    pub(crate) fn locus_with_profile(
        &self,
        rf: &mut RootFinder,
    ) -> Result<(SingularLocus, Option<RootProfile>)> {
        match self.shape() {
            Shape::Zero => Err(Error::ZeroReduction),
            Shape::Constant => Err(Error::ConstantReduction),
            Shape::Degenerate => Ok((SingularLocus::AllCurvePoints, None)),
            Shape::Line(axis) => {
                let profile = self.line_profile(axis, rf)?;
                let roots = profile.degenerate_roots();
                let locus = match axis {
                    Axis::X1 => SingularLocus::VerticalLines(roots),
                    Axis::X2 => SingularLocus::HorizontalLines(roots),
                };
                Ok((locus, Some(profile)))
            }
            Shape::Squarefree => {
                let p = self.p();
                let gt = self.g_tilde();
                let ht = self.h_tilde();
                let crit = |f: &FpPoly, rf: &mut RootFinder| -> Result<Vec<u64>> {
                    let df = f.derivative();
                    if df.is_zero() {
                        Ok((0..p).collect())
                    } else {
                        rf.roots(&df)
                    }
                };
                let xs = crit(&gt, rf)?;
                let ys = crit(&ht, rf)?;
                let hv: Vec<u64> = ys.iter().map(|&b| ht.eval(b)).collect();
                let mut points = Vec::new();
                for &a in &xs {
                    let target = sub_mod(0, gt.eval(a), p);
                    for (&b, &v) in ys.iter().zip(&hv) {
                        if v == target {
                            points.push((a, b));
                        }
                    }
                }
                Ok((SingularLocus::IsolatedPoints(points), None))
            }
        }
    }

    /// `f(shift)/p^s` in `Z/p^{k-s}`, shifting only the axes given.
    fn shift_and_divide(&self, a: Option<u64>, b: Option<u64>, s: u32) -> Result<SeparatedCurve> {
        let g = match a {
            Some(a) => self.g.taylor_shift_p(&BigUint::from(a)),
            None => self.g.clone(),
        };
        let h = match b {
            Some(b) => self.h.taylor_shift_p(&BigUint::from(b)),
            None => self.h.clone(),
        };
        let target = self.ctx().with_exponent(self.k() - s)?;
        let shifted = SeparatedCurve::normalize(g, h);
        let child = SeparatedCurve {
            g: shifted.g.div_exact_pow(s, &target)?,
            h: shifted.h.div_exact_pow(s, &target)?,
        };
        debug_assert!(child.h.coeff(0).is_zero());
        Ok(child)
    }

    /// `f(a + p x1, b + p x2) / p^s` with `s = s(f, (a, b))`, in `Z/p^{k-s}`.
    pub fn perturb_point(&self, a: u64, b: u64) -> Result<Perturbation> {
        let k = self.k();
        let s = self.point_valuation(a, b, k);
        if s < 2 || s >= k {
            return Err(Error::ValuationOutOfRange { s, k });
        }
        Ok(Perturbation {
            child: self.shift_and_divide(Some(a), Some(b), s)?,
            k_child: k - s,
            s,
        })
    }

    /// Perturbation along one axis for the line branch.
    pub fn perturb_line(&self, axis: Axis, z: u64) -> Result<Perturbation> {
        let k = self.k();
        let s = self.line_valuation(axis, z, k)?;
        if s < 1 || s >= k {
            return Err(Error::ValuationOutOfRange { s, k });
        }
        let child = match axis {
            Axis::X1 => self.shift_and_divide(Some(z), None, s)?,
            Axis::X2 => self.shift_and_divide(None, Some(z), s)?,
        };
        Ok(Perturbation {
            child,
            k_child: k - s,
            s,
        })
    }

    /// All `p` roots mod `p^{j+1}` above a root `sigma` mod `p^j` with smooth reduction.
    pub fn hensel_lifts(&self, sigma: (&BigUint, &BigUint), j: u32) -> Result<LiftSet> {
        if j == 0 {
            return Err(Error::ZeroExponent);
        }
        if self.k() < j + 1 {
            return Err(Error::PrecisionExceeded {
                needed: j + 1,
                available: self.k(),
            });
        }
        let p = self.p();
        let ctx = self.ctx();
        let pj = ctx.pow(j);
        let pj1 = ctx.pow(j + 1);
        let s1 = sigma.0 % &pj;
        let s2 = sigma.1 % &pj;
        let value = (self.g.eval_mod(&s1, &pj1) + self.h.eval_mod(&s2, &pj1)) % &pj1;
        if !(&value % &pj).is_zero() {
            return Err(Error::NotARoot(j));
        }
        let r = big_mod_word(&(&value / &pj), p);
        let da = self.g_tilde().derivative().eval(big_mod_word(&s1, p));
        let db = self.h_tilde().derivative().eval(big_mod_word(&s2, p));
        let rhs = sub_mod(0, r, p);
        let mut ts: Vec<(u64, u64)> = Vec::with_capacity(p as usize);
        if da != 0 {
            let inv = inv_mod(da, p);
            for t2 in 0..p {
                let t1 = mul_mod(sub_mod(rhs, mul_mod(db, t2, p), p), inv, p);
                ts.push((t1, t2));
            }
        } else if db != 0 {
            let t2 = mul_mod(rhs, inv_mod(db, p), p);
            ts.extend((0..p).map(|t1| (t1, t2)));
        } else {
            return Err(Error::NotSmooth);
        }
        ts.sort_unstable();
        let lifts = ts
            .into_iter()
            .map(|(t1, t2)| (&s1 + &pj * t1, &s2 + &pj * t2))
            .collect();
        Ok(LiftSet {
            base: (s1, s2),
            j,
            lifts,
        })
    }
}

impl fmt::Display for SeparatedCurve {
    /// Balanced-residue form: `x1` terms, then `x2` terms, then the constant.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.g.balanced_coeffs();
        let h = self.h.balanced_coeffs();
        let mut terms = Vec::with_capacity(g.len() + h.len());
        for (i, c) in g.iter().enumerate().skip(1).rev() {
            terms.push((c.clone(), "x1", i));
        }
        for (i, c) in h.iter().enumerate().skip(1).rev() {
            terms.push((c.clone(), "x2", i));
        }
        if let Some(c0) = g.first() {
            terms.push((c0.clone(), "", 0));
        }
        write!(f, "{}", Terms(terms))
    }
}
