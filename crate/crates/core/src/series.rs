//! One-variable Laurent series with an explicit truncation order.
//!
//! A series is `Σ_{e ≥ min_exp} c_e ζ^e` where coefficients above the
//! truncation order are unknown. Reading an unknown coefficient is an error.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::scalar::Scalar;

/// Identifies the local coordinate a series is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarTag(pub u32);

impl fmt::Display for VarTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series in different variables ({0} and {1})")]
    TagMismatch(VarTag, VarTag),
    #[error("cannot invert a zero series")]
    ZeroSeries,
    #[error("requested order {requested} exceeds attainable order {available}")]
    OrderBeyondTruncation { requested: i64, available: i64 },
    #[error("coefficient of exponent {exp} lies beyond truncation order {trunc}")]
    BeyondTruncation { exp: i64, trunc: i64 },
}

/// Laurent series in one local coordinate.
///
/// `trunc == None` means the series is known exactly (a Laurent polynomial).
#[derive(Clone, Debug)]
pub struct LaurentSeries<F: Scalar> {
    tag: VarTag,
    min_exp: i64,
    coeffs: Vec<F>,
    trunc: Option<i64>,
    ctx: F::Ctx,
}

impl<F: Scalar> PartialEq for LaurentSeries<F> {
    fn eq(&self, other: &Self) -> bool {
        if self.tag != other.tag || self.trunc != other.trunc {
            return false;
        }
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.max_stored().max(other.max_stored());
        (lo..=hi).all(|e| self.stored(e) == other.stored(e))
    }
}

impl<F: Scalar> LaurentSeries<F> {
    /// Builds a series from coefficients starting at `min_exp`. Coefficients
    /// beyond `trunc` are discarded.
    pub fn new(ctx: &F::Ctx, tag: VarTag, min_exp: i64, coeffs: Vec<F>, trunc: Option<i64>) -> Self {
        let mut s = LaurentSeries { tag, min_exp, coeffs, trunc, ctx: ctx.clone() };
        if let Some(n) = trunc {
            let keep = (n - min_exp + 1).max(0) as usize;
            s.coeffs.truncate(keep);
        }
        s.normalize();
        s
    }

    pub fn zero(ctx: &F::Ctx, tag: VarTag, trunc: Option<i64>) -> Self {
        LaurentSeries::new(ctx, tag, 0, Vec::new(), trunc)
    }

    pub fn monomial(ctx: &F::Ctx, tag: VarTag, coeff: F, exp: i64, trunc: Option<i64>) -> Self {
        LaurentSeries::new(ctx, tag, exp, vec![coeff], trunc)
    }

    /// Series from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms(ctx: &F::Ctx, tag: VarTag, terms: impl IntoIterator<Item = (i64, F)>, trunc: Option<i64>) -> Self {
        let terms: Vec<(i64, F)> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return LaurentSeries::zero(ctx, tag, trunc);
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap_or(lo);
        let mut coeffs = vec![F::zero(ctx); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += &c;
        }
        LaurentSeries::new(ctx, tag, lo, coeffs, trunc)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.min_exp = 0;
            return;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exp += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn tag(&self) -> VarTag {
        self.tag
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    /// Lowest stored exponent (0 for a series with no stored terms).
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn trunc_order(&self) -> Option<i64> {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    /// True when no nonzero coefficient is stored.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the lowest known nonzero term, `None` if every known
    /// coefficient vanishes.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.min_exp)
    }

    fn max_stored(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    fn stored(&self, e: i64) -> F {
        if e < self.min_exp || e > self.max_stored() {
            F::zero(&self.ctx)
        } else {
            self.coeffs[(e - self.min_exp) as usize].clone()
        }
    }

    /// Coefficient of `ζ^e`; an error when `e` lies beyond the truncation.
    pub fn coeff(&self, e: i64) -> Result<F, SeriesError> {
        match self.trunc {
            Some(n) if e > n => Err(SeriesError::BeyondTruncation { exp: e, trunc: n }),
            _ => Ok(self.stored(e)),
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    fn check_tag(&self, rhs: &Self) -> Result<(), SeriesError> {
        if self.tag != rhs.tag {
            return Err(SeriesError::TagMismatch(self.tag, rhs.tag));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_tag(rhs)?;
        let trunc = min_opt(self.trunc, rhs.trunc);
        if self.is_zero() {
            return Ok(LaurentSeries::new(&self.ctx, self.tag, rhs.min_exp, rhs.coeffs.clone(), trunc));
        }
        if rhs.is_zero() {
            return Ok(LaurentSeries::new(&self.ctx, self.tag, self.min_exp, self.coeffs.clone(), trunc));
        }
        let lo = self.min_exp.min(rhs.min_exp);
        let hi = self.max_stored().max(rhs.max_stored());
        let coeffs = (lo..=hi).map(|e| self.stored(e) + &rhs.stored(e)).collect();
        Ok(LaurentSeries::new(&self.ctx, self.tag, lo, coeffs, trunc))
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            tag: self.tag,
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            trunc: self.trunc,
            ctx: self.ctx.clone(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, k: &F) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * k).collect();
        LaurentSeries::new(&self.ctx, self.tag, self.min_exp, coeffs, self.trunc)
    }

    /// Effective valuation for truncation bookkeeping: a series with no known
    /// nonzero term is divisible by `ζ^(N+1)`.
    fn known_valuation(&self) -> Option<i64> {
        match (self.valuation(), self.trunc) {
            (Some(v), _) => Some(v),
            (None, Some(n)) => Some(n + 1),
            (None, None) => None,
        }
    }

    /// Cauchy product. The result is known up to `min(N₁+m₂, N₂+m₁)`.
    pub fn mul(&self, rhs: &Self) -> Result<Self, SeriesError> {
        self.check_tag(rhs)?;
        let (m1, m2) = (self.known_valuation(), rhs.known_valuation());
        // An exact zero factor makes the product exactly zero.
        if m1.is_none() || m2.is_none() {
            return Ok(LaurentSeries::zero(&self.ctx, self.tag, None));
        }
        let (m1, m2) = (m1.unwrap_or(0), m2.unwrap_or(0));
        let t1 = self.trunc.map(|n| n + m2);
        let t2 = rhs.trunc.map(|n| n + m1);
        let trunc = min_opt(t1, t2);
        if self.is_zero() || rhs.is_zero() {
            return Ok(LaurentSeries::zero(&self.ctx, self.tag, trunc));
        }
        let lo = self.min_exp + rhs.min_exp;
        let mut len = self.coeffs.len() + rhs.coeffs.len() - 1;
        if let Some(n) = trunc {
            len = len.min((n - lo + 1).max(0) as usize);
        }
        let mut out = vec![F::zero(&self.ctx); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out[i + j].mul_add_assign(a, b);
            }
        }
        Ok(LaurentSeries::new(&self.ctx, self.tag, lo, out, trunc))
    }

    /// Multiplicative inverse known up to exponent `order`.
    ///
    /// For `s = ζ^m u` with `u(0) ≠ 0` known to order `N`, the inverse is
    /// known to order `N − 2m`.
    pub fn invert(&self, order: i64) -> Result<Self, SeriesError> {
        let m = self.valuation().ok_or(SeriesError::ZeroSeries)?;
        if let Some(n) = self.trunc {
            let available = n - 2 * m;
            if order > available {
                return Err(SeriesError::OrderBeyondTruncation { requested: order, available });
            }
        }
        let len = (order + m + 1).max(0) as usize;
        let u = &self.coeffs;
        let u0 = u[0].clone();
        let mut out: Vec<F> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = if k == 0 { F::one(&self.ctx) } else { F::zero(&self.ctx) };
            for j in 1..=k.min(u.len() - 1) {
                let mut t = u[j].clone() * &out[k - j];
                t = -t;
                acc += &t;
            }
            out.push(acc / &u0);
        }
        Ok(LaurentSeries::new(&self.ctx, self.tag, -m, out, Some(order)))
    }

    /// `(s(ζ) − s(−ζ))/2`.
    pub fn odd_part(&self) -> Self {
        self.parity_part(1)
    }

    /// `(s(ζ) + s(−ζ))/2`.
    pub fn even_part(&self) -> Self {
        self.parity_part(0)
    }

    fn parity_part(&self, parity: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (self.min_exp + i as i64).rem_euclid(2) == parity { c.clone() } else { F::zero(&self.ctx) })
            .collect();
        LaurentSeries::new(&self.ctx, self.tag, self.min_exp, coeffs, self.trunc)
    }

    /// `s(−ζ)`.
    pub fn reflect(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| if (self.min_exp + i as i64) % 2 == 0 { c.clone() } else { -c.clone() }).collect();
        LaurentSeries::new(&self.ctx, self.tag, self.min_exp, coeffs, self.trunc)
    }

    /// Formal residue: the coefficient of `ζ⁻¹`.
    pub fn residue(&self) -> Result<F, SeriesError> {
        self.coeff(-1)
    }

    /// Term-wise derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| c.clone() * &F::from_i64(&self.ctx, self.min_exp + i as i64)).collect();
        LaurentSeries::new(&self.ctx, self.tag, self.min_exp - 1, coeffs, self.trunc.map(|n| n - 1))
    }

    /// Drops known terms above `order` (lowering the truncation order).
    pub fn truncate(&self, order: i64) -> Self {
        let trunc = min_opt(self.trunc, Some(order));
        LaurentSeries::new(&self.ctx, self.tag, self.min_exp, self.coeffs.clone(), trunc)
    }

    /// Evaluates the stored terms at a double-precision point.
    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc * z.powi(self.min_exp as i32)
    }

    /// Converts every coefficient into another scalar field.
    pub fn map_scalars<G: Scalar>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> G) -> LaurentSeries<G> {
        LaurentSeries::new(ctx, self.tag, self.min_exp, self.coeffs.iter().map(f).collect(), self.trunc)
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

impl<F: Scalar> fmt::Display for LaurentSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})·{}^{e}", self.tag)?;
        }
        if first {
            f.write_str("0")?;
        }
        if let Some(n) = self.trunc {
            write!(f, " + O({}^{})", self.tag, n + 1)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    const Z: VarTag = VarTag(0);

    fn s(min: i64, cs: &[(i64, i64)], trunc: Option<i64>) -> LaurentSeries<Exact> {
        LaurentSeries::new(&(), Z, min, cs.iter().map(|&(n, d)| Exact::ratio(n, d)).collect(), trunc)
    }

    #[test]
    fn telescoping_product() {
        let a = s(0, &[(1, 1), (1, 1)], Some(3));
        let b = s(0, &[(1, 1), (-1, 1)], Some(3));
        assert_eq!(a.mul(&b).unwrap(), s(0, &[(1, 1), (0, 1), (-1, 1)], Some(3)));
    }

    #[test]
    fn adding_zero_is_identity() {
        let a = s(-2, &[(1, 1), (0, 1), (3, 4)], Some(5));
        let zero = LaurentSeries::zero(&(), Z, None);
        assert_eq!(a.add(&zero).unwrap(), a);
    }

    #[test]
    fn truncation_of_monomial_product() {
        let a = s(-1, &[(1, 1)], Some(5));
        let b = s(1, &[(1, 1)], Some(5));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.trunc_order(), Some(4));
        assert_eq!(p, s(0, &[(1, 1)], Some(4)));
    }

    #[test]
    fn mismatched_tags_rejected() {
        let a = s(0, &[(1, 1)], None);
        let b = LaurentSeries::new(&(), VarTag(1), 0, vec![Exact::int(1)], None);
        assert_eq!(a.mul(&b), Err(SeriesError::TagMismatch(VarTag(0), VarTag(1))));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn inverse_examples() {
        let two_z = s(1, &[(2, 1)], Some(5));
        assert_eq!(two_z.invert(3).unwrap(), s(-1, &[(1, 2)], Some(3)));
        let one_plus = s(0, &[(1, 1), (1, 1)], Some(4));
        assert_eq!(one_plus.invert(2).unwrap(), s(0, &[(1, 1), (-1, 1), (1, 1)], Some(2)));
        // ζ − ζ³/6, multiplied back, is 1 to the returned order.
        let sinish = s(1, &[(1, 1), (0, 1), (-1, 6)], Some(5));
        let inv = sinish.invert(3).unwrap();
        assert_eq!(inv.min_exp(), -1);
        assert_eq!(inv.coeff(1).unwrap(), Exact::ratio(1, 6));
        let back = inv.mul(&sinish).unwrap();
        let order = back.trunc_order().unwrap();
        assert!(order >= 3);
        assert_eq!(back, s(0, &[(1, 1)], Some(order)));
    }

    #[test]
    fn inverse_errors() {
        let zero = LaurentSeries::<Exact>::zero(&(), Z, Some(3));
        assert_eq!(zero.invert(1), Err(SeriesError::ZeroSeries));
        let short = s(1, &[(1, 1)], Some(3));
        assert_eq!(short.invert(3), Err(SeriesError::OrderBeyondTruncation { requested: 3, available: 1 }));
    }

    #[test]
    fn odd_part_examples() {
        assert_eq!(s(0, &[(1, 1), (1, 1), (1, 1)], None).odd_part(), s(1, &[(1, 1)], None));
        assert!(s(0, &[(1, 1), (0, 1), (5, 1)], None).odd_part().is_zero());
        assert_eq!(s(-2, &[(1, 1), (1, 1)], None).odd_part(), s(-1, &[(1, 1)], None));
    }

    #[test]
    fn residue_examples() {
        assert_eq!(s(-1, &[(1, 1)], None).residue().unwrap(), Exact::int(1));
        assert_eq!(s(-2, &[(1, 1), (3, 1), (5, 1)], None).residue().unwrap(), Exact::int(3));
        assert!(s(-4, &[(1, 1), (0, 1), (7, 1), (0, 1), (2, 1)], None).residue().unwrap().is_zero());
        let deep = s(-5, &[(1, 1)], Some(-2));
        assert_eq!(deep.residue(), Err(SeriesError::BeyondTruncation { exp: -1, trunc: -2 }));
    }

    #[test]
    fn derivative_and_reflect() {
        let a = s(-1, &[(1, 1), (2, 1), (3, 1)], Some(4));
        assert_eq!(a.derivative(), s(-2, &[(-1, 1), (0, 1), (3, 1)], Some(3)));
        assert_eq!(a.reflect(), s(-1, &[(-1, 1), (2, 1), (-3, 1)], Some(4)));
    }
}
