//! Coefficient scalars.
//!
//! Every coefficient in a run lives in one field, fixed for the whole run:
//!
//! * [`Exact`]: Gaussian rationals `p/q + (r/s)i`, always in lowest terms.
//!   The imaginary unit is needed because the chart `x = x(a) + ζ²` at a
//!   ramification point where `x''` is negative produces imaginary local
//!   coefficients.
//! * [`Float`]: complex numbers with big-float parts of a fixed bit precision.
//! * [`Complex64`]: plain double precision, used only by the numeric sampling
//!   in the bound estimators (never as a run mode).

use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use core::str::FromStr;

use dashu_float::round::mode::HalfAway;
use dashu_int::{IBig, UBig};
use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Minimum precision accepted for float mode.
pub const MIN_FLOAT_BITS: u32 = 64;
/// Precision used when float mode is requested without an explicit width.
pub const DEFAULT_FLOAT_BITS: u32 = 256;

/// Which field a computation runs in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    Exact,
    Float { bits: u32 },
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Exact => f.write_str("exact"),
            ScalarMode::Float { bits } => write!(f, "float:{bits}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseScalarError {
    #[error("invalid scalar literal `{0}`")]
    Literal(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("unknown scalar mode `{0}` (expected `exact` or `float:<bits>`)")]
    Mode(String),
    #[error("float precision {0} is below the minimum of {MIN_FLOAT_BITS} bits")]
    Precision(u32),
}

impl FromStr for ScalarMode {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "exact" {
            return Ok(ScalarMode::Exact);
        }
        if s == "float" {
            return Ok(ScalarMode::Float { bits: DEFAULT_FLOAT_BITS });
        }
        let bits = s.strip_prefix("float:").and_then(|b| b.parse::<u32>().ok()).ok_or_else(|| ParseScalarError::Mode(s.to_string()))?;
        if bits < MIN_FLOAT_BITS {
            return Err(ParseScalarError::Precision(bits));
        }
        Ok(ScalarMode::Float { bits })
    }
}

/// Field operations shared by every coefficient type.
///
/// Constructors take a context (`()` for exact values, the bit precision for
/// floats) so that literals enter the computation at the run's precision.
pub trait Scalar:
    Sized
    + Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn mode(ctx: &Self::Ctx) -> ScalarMode;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self;
    /// Embeds an exact Gaussian rational (rounded in float modes).
    fn from_exact(ctx: &Self::Ctx, v: &Exact) -> Self;
    fn is_zero(&self) -> bool;
    fn to_c64(&self) -> Complex64;
    /// Principal square root, or `None` when it is not representable
    /// (an irrational root in exact mode).
    fn sqrt(&self) -> Option<Self>;

    fn one(ctx: &Self::Ctx) -> Self {
        Self::from_i64(ctx, 1)
    }

    fn from_ratio(ctx: &Self::Ctx, num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i64(ctx, num) / Self::from_i64(ctx, den)
    }

    /// `self += a * b`.
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self += &(a.clone() * b);
    }

    fn pow(&self, ctx: &Self::Ctx, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * &base;
            }
            base = base.clone() * &base;
            e >>= 1;
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Exact Gaussian rationals
// ---------------------------------------------------------------------------

/// An exact element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Exact {
    re: BigRational,
    im: BigRational,
}

impl Exact {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Exact { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Exact { re, im: BigRational::zero() }
    }

    pub fn int(v: i64) -> Self {
        Exact::real(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Exact::real(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Exact { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Exact { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Parses `p/q`, integers, decimals (`1.25`, `-3e-2`) and complex forms
    /// `a+bi`, `a-bi`, `bi`, `i`.
    pub fn parse(src: &str) -> Result<Self, ParseScalarError> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ParseScalarError::Literal(src.to_string()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Exact::real(parse_real(&s, src)?));
        };
        // Split `a+bi` at the last sign that is not a leading sign or part of
        // an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_part.is_empty() { BigRational::zero() } else { parse_real(re_part, src)? };
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_real(other, src)?,
        };
        Ok(Exact { re, im })
    }

    /// Principal square root when it lies in Q(i).
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.im.is_zero() {
            let r = &self.re;
            return if r.is_negative() {
                rational_sqrt(&-r.clone()).map(|s| Exact { re: BigRational::zero(), im: s })
            } else {
                rational_sqrt(r).map(Exact::real)
            };
        }
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let p = rational_sqrt(&((&modulus + &self.re) / &two))?;
        if p.is_zero() {
            return None;
        }
        let q = &self.im / (&two * &p);
        Some(Exact { re: p, im: q })
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

fn parse_real(s: &str, src: &str) -> Result<BigRational, ParseScalarError> {
    let bad = || ParseScalarError::Literal(src.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.strip_prefix('+').unwrap_or(n).parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ParseScalarError::ZeroDenominator(src.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(idx) => (&s[..idx], s[idx + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let mut digits = String::from(int_part);
    digits.push_str(frac_part);
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let scale = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(BigInt::from(10));
    for _ in 0..scale.unsigned_abs() {
        if scale > 0 {
            value *= &ten;
        } else {
            value /= &ten;
        }
    }
    Ok(if negative { -value } else { value })
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    write!(f, "{}/{}", r.numer(), r.denom())
}

impl fmt::Display for Exact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rational(f, &self.re)?;
        if !self.im.is_zero() {
            if self.im.is_negative() {
                f.write_str("-")?;
                write_rational(f, &-self.im.clone())?;
            } else {
                f.write_str("+")?;
                write_rational(f, &self.im)?;
            }
            f.write_str("i")?;
        }
        Ok(())
    }
}

impl FromStr for Exact {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Exact::parse(s)
    }
}

impl Add for Exact {
    type Output = Exact;
    fn add(self, rhs: Exact) -> Exact {
        self + &rhs
    }
}

impl<'a> Add<&'a Exact> for Exact {
    type Output = Exact;
    fn add(mut self, rhs: &'a Exact) -> Exact {
        self += rhs;
        self
    }
}

impl<'a> AddAssign<&'a Exact> for Exact {
    fn add_assign(&mut self, rhs: &'a Exact) {
        if !rhs.re.is_zero() {
            self.re += &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl Sub for Exact {
    type Output = Exact;
    fn sub(self, rhs: Exact) -> Exact {
        self - &rhs
    }
}

impl<'a> Sub<&'a Exact> for Exact {
    type Output = Exact;
    fn sub(mut self, rhs: &'a Exact) -> Exact {
        self -= rhs;
        self
    }
}

impl<'a> SubAssign<&'a Exact> for Exact {
    fn sub_assign(&mut self, rhs: &'a Exact) {
        if !rhs.re.is_zero() {
            self.re -= &rhs.re;
        }
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl Mul for Exact {
    type Output = Exact;
    fn mul(self, rhs: Exact) -> Exact {
        self * &rhs
    }
}

impl<'a> Mul<&'a Exact> for Exact {
    type Output = Exact;
    fn mul(self, rhs: &'a Exact) -> Exact {
        match (self.im.is_zero(), rhs.im.is_zero()) {
            (true, true) => Exact::real(self.re * &rhs.re),
            (true, false) => Exact { re: &self.re * &rhs.re, im: self.re * &rhs.im },
            (false, true) => Exact { re: self.re * &rhs.re, im: self.im * &rhs.re },
            (false, false) => Exact { re: &self.re * &rhs.re - &self.im * &rhs.im, im: self.re * &rhs.im + self.im * &rhs.re },
        }
    }
}

impl Div for Exact {
    type Output = Exact;
    fn div(self, rhs: Exact) -> Exact {
        self / &rhs
    }
}

impl<'a> Div<&'a Exact> for Exact {
    type Output = Exact;
    fn div(self, rhs: &'a Exact) -> Exact {
        if rhs.im.is_zero() {
            return Exact { re: self.re / &rhs.re, im: self.im / &rhs.re };
        }
        let n = rhs.norm_sqr();
        let num = self * &rhs.conj();
        Exact { re: num.re / &n, im: num.im / &n }
    }
}

impl Neg for Exact {
    type Output = Exact;
    fn neg(self) -> Exact {
        Exact { re: -self.re, im: -self.im }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for Exact {
    type Ctx = ();

    fn mode(_: &()) -> ScalarMode {
        ScalarMode::Exact
    }

    fn zero(_: &()) -> Self {
        Exact::default()
    }

    fn from_i64(_: &(), v: i64) -> Self {
        Exact::int(v)
    }

    fn from_ratio(_: &(), num: i64, den: i64) -> Self {
        Exact::ratio(num, den)
    }

    fn from_exact(_: &(), v: &Exact) -> Self {
        v.clone()
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn sqrt(&self) -> Option<Self> {
        self.sqrt_exact()
    }
}

// ---------------------------------------------------------------------------
// Complex big floats
// ---------------------------------------------------------------------------

/// Real big-float part of [`Float`].
pub type Real = dashu_float::FBig<HalfAway, 2>;

/// Precision context for [`Float`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FloatCtx {
    pub bits: u32,
}

impl FloatCtx {
    pub fn new(bits: u32) -> Result<Self, ParseScalarError> {
        if bits < MIN_FLOAT_BITS {
            return Err(ParseScalarError::Precision(bits));
        }
        Ok(FloatCtx { bits })
    }
}

impl Default for FloatCtx {
    fn default() -> Self {
        FloatCtx { bits: DEFAULT_FLOAT_BITS }
    }
}

/// A complex number with big-float parts; the precision travels with the
/// value.
#[derive(Clone, Debug)]
pub struct Float {
    re: Real,
    im: Real,
    bits: u32,
}

fn bigint_to_ibig(v: &BigInt) -> IBig {
    let (sign, bytes) = v.to_bytes_le();
    let u = IBig::from(UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -u
    } else {
        u
    }
}

fn real_from_rational(r: &BigRational, bits: u32) -> Real {
    if r.is_zero() {
        return Real::ZERO;
    }
    let n = Real::from(bigint_to_ibig(r.numer())).with_precision(bits as usize).value();
    if r.denom().is_one() {
        return n;
    }
    let d = Real::from(bigint_to_ibig(r.denom())).with_precision(bits as usize).value();
    n / d
}

fn real_is_zero(x: &Real) -> bool {
    *x.repr().significand() == IBig::ZERO
}

impl Float {
    pub fn from_parts(re: Real, im: Real, bits: u32) -> Self {
        Float { re: re.with_precision(bits as usize).value(), im: im.with_precision(bits as usize).value(), bits }
    }

    pub fn re(&self) -> &Real {
        &self.re
    }

    pub fn im(&self) -> &Real {
        &self.im
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Squared modulus.
    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Modulus as a real big float.
    pub fn abs(&self) -> Real {
        let n = self.norm_sqr();
        if real_is_zero(&n) {
            Real::ZERO
        } else {
            n.sqrt()
        }
    }

    fn join_bits(&self, other: &Float) -> u32 {
        self.bits.max(other.bits)
    }
}

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        self.re == other.re && self.im == other.im
    }
}

fn fmt_real(f: &mut fmt::Formatter<'_>, x: &Real, bits: u32) -> fmt::Result {
    // Decimal digits carrying the binary precision.
    let digits = libm::ceil((bits as f64) * core::f64::consts::LOG10_2) as usize + 1;
    let dec = x.to_decimal().value().with_precision(digits).value();
    write!(f, "{dec}")
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_real(f, &self.re, self.bits)?;
        if !real_is_zero(&self.im) {
            if self.im < Real::ZERO {
                f.write_str("-")?;
                fmt_real(f, &-self.im.clone(), self.bits)?;
            } else {
                f.write_str("+")?;
                fmt_real(f, &self.im, self.bits)?;
            }
            f.write_str("i")?;
        }
        write!(f, "@{}", self.bits)
    }
}

impl Add for Float {
    type Output = Float;
    fn add(self, rhs: Float) -> Float {
        self + &rhs
    }
}

impl<'a> Add<&'a Float> for Float {
    type Output = Float;
    fn add(mut self, rhs: &'a Float) -> Float {
        self += rhs;
        self
    }
}

impl<'a> AddAssign<&'a Float> for Float {
    fn add_assign(&mut self, rhs: &'a Float) {
        self.bits = self.join_bits(rhs);
        if !real_is_zero(&rhs.re) {
            self.re = &self.re + &rhs.re;
        }
        if !real_is_zero(&rhs.im) {
            self.im = &self.im + &rhs.im;
        }
    }
}

impl Sub for Float {
    type Output = Float;
    fn sub(self, rhs: Float) -> Float {
        self - &rhs
    }
}

impl<'a> Sub<&'a Float> for Float {
    type Output = Float;
    fn sub(mut self, rhs: &'a Float) -> Float {
        self -= rhs;
        self
    }
}

impl<'a> SubAssign<&'a Float> for Float {
    fn sub_assign(&mut self, rhs: &'a Float) {
        self.bits = self.join_bits(rhs);
        if !real_is_zero(&rhs.re) {
            self.re = &self.re - &rhs.re;
        }
        if !real_is_zero(&rhs.im) {
            self.im = &self.im - &rhs.im;
        }
    }
}

impl Mul for Float {
    type Output = Float;
    fn mul(self, rhs: Float) -> Float {
        self * &rhs
    }
}

impl<'a> Mul<&'a Float> for Float {
    type Output = Float;
    fn mul(self, rhs: &'a Float) -> Float {
        let bits = self.join_bits(rhs);
        let (re, im) = match (real_is_zero(&self.im), real_is_zero(&rhs.im)) {
            (true, true) => (&self.re * &rhs.re, Real::ZERO),
            (true, false) => (&self.re * &rhs.re, &self.re * &rhs.im),
            (false, true) => (&self.re * &rhs.re, &self.im * &rhs.re),
            (false, false) => (&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re),
        };
        Float { re, im, bits }
    }
}

impl Div for Float {
    type Output = Float;
    fn div(self, rhs: Float) -> Float {
        self / &rhs
    }
}

impl<'a> Div<&'a Float> for Float {
    type Output = Float;
    fn div(self, rhs: &'a Float) -> Float {
        let bits = self.join_bits(rhs);
        let p = bits as usize;
        if real_is_zero(&rhs.im) {
            let d = rhs.re.clone().with_precision(p).value();
            return Float { re: &self.re / &d, im: &self.im / &d, bits };
        }
        let n = rhs.norm_sqr().with_precision(p).value();
        let num = self * &Float { re: rhs.re.clone(), im: -rhs.im.clone(), bits };
        Float { re: &num.re / &n, im: &num.im / &n, bits }
    }
}

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        Float { re: -self.re, im: -self.im, bits: self.bits }
    }
}

impl Scalar for Float {
    type Ctx = FloatCtx;

    fn mode(ctx: &FloatCtx) -> ScalarMode {
        ScalarMode::Float { bits: ctx.bits }
    }

    fn zero(ctx: &FloatCtx) -> Self {
        Float { re: Real::ZERO, im: Real::ZERO, bits: ctx.bits }
    }

    fn from_i64(ctx: &FloatCtx, v: i64) -> Self {
        Float { re: Real::from(v).with_precision(ctx.bits as usize).value(), im: Real::ZERO, bits: ctx.bits }
    }

    fn from_exact(ctx: &FloatCtx, v: &Exact) -> Self {
        Float { re: real_from_rational(&v.re, ctx.bits), im: real_from_rational(&v.im, ctx.bits), bits: ctx.bits }
    }

    fn is_zero(&self) -> bool {
        real_is_zero(&self.re) && real_is_zero(&self.im)
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().value(), self.im.to_f64().value())
    }

    fn sqrt(&self) -> Option<Self> {
        let p = self.bits as usize;
        if self.is_zero() {
            return Some(self.clone());
        }
        let two = Real::from(2).with_precision(p).value();
        let modulus = self.abs().with_precision(p).value();
        let a = (&modulus + &self.re) / &two;
        let b = (&modulus - &self.re) / &two;
        let re = if real_is_zero(&a) || a < Real::ZERO { Real::ZERO } else { a.sqrt() };
        let mut im = if real_is_zero(&b) || b < Real::ZERO { Real::ZERO } else { b.sqrt() };
        if self.im < Real::ZERO {
            im = -im;
        }
        Some(Float { re, im, bits: self.bits })
    }
}

// ---------------------------------------------------------------------------
// Double precision, for sampling
// ---------------------------------------------------------------------------

impl Scalar for Complex64 {
    type Ctx = ();

    fn mode(_: &()) -> ScalarMode {
        ScalarMode::Float { bits: 53 }
    }

    fn zero(_: &()) -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn from_i64(_: &(), v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_exact(_: &(), v: &Exact) -> Self {
        v.to_c64()
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn sqrt(&self) -> Option<Self> {
        Some(Complex64::sqrt(*self))
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

#[cfg(test)]
fn big_rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Integer power of a rational.
pub fn rational_pow(base: &BigRational, e: u32) -> BigRational {
    num_traits::pow(base.clone(), e as usize)
}

/// Splits an `@bits` precision annotation off a float literal.
pub fn strip_precision_annotation(s: &str) -> (&str, Option<u32>) {
    match s.rsplit_once('@') {
        Some((v, bits)) => match bits.trim().parse::<u32>() {
            Ok(b) => (v, Some(b)),
            Err(_) => (s, None),
        },
        None => (s, None),
    }
}

/// Parses any scalar literal accepted in curve specs into the run field.
pub fn parse_scalar<F: Scalar>(ctx: &F::Ctx, s: &str) -> Result<F, ParseScalarError> {
    let (value, _) = strip_precision_annotation(s);
    Ok(F::from_exact(ctx, &Exact::parse(value)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_canonical_form() {
        let a = Exact::ratio(6, -4);
        assert_eq!(a.to_string(), "-3/2");
        assert_eq!(Exact::int(0).to_string(), "0/1");
        assert_eq!(Exact::parse("2/4").unwrap(), Exact::ratio(1, 2));
    }

    #[test]
    fn parses_complex_and_decimal_literals() {
        let z = Exact::parse("1/2-3/4i").unwrap();
        assert_eq!(z, Exact::new(big_rational(1, 2), big_rational(-3, 4)));
        assert_eq!(Exact::parse("i").unwrap(), Exact::i());
        assert_eq!(Exact::parse("-2i").unwrap(), Exact::new(big_rational(0, 1), big_rational(-2, 1)));
        assert_eq!(Exact::parse("1.25").unwrap(), Exact::ratio(5, 4));
        assert_eq!(Exact::parse("-3e-2").unwrap(), Exact::ratio(-3, 100));
        assert_eq!(Exact::parse("2.5e+1+1e-1i").unwrap(), Exact::new(big_rational(25, 1), big_rational(1, 10)));
        assert!(Exact::parse("1/0").is_err());
        assert!(Exact::parse("abc").is_err());
        let z = Exact::parse("-7/3+5/2i").unwrap();
        assert_eq!(Exact::parse(&z.to_string()).unwrap(), z);
    }

    #[test]
    fn gaussian_division_inverts_multiplication() {
        let a = Exact::parse("3/2+1/5i").unwrap();
        let b = Exact::parse("-2/7+4i").unwrap();
        assert_eq!((a.clone() * &b) / &b, a);
        assert_eq!(Exact::i() * Exact::i(), Exact::int(-1));
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(Exact::ratio(9, 4).sqrt_exact(), Some(Exact::ratio(3, 2)));
        assert_eq!(Exact::int(-1).sqrt_exact(), Some(Exact::i()));
        assert_eq!(Exact::ratio(4, 3).sqrt_exact(), None);
        // (1 + 2i)^2 = -3 + 4i
        assert_eq!(Exact::parse("-3+4i").unwrap().sqrt_exact(), Some(Exact::parse("1+2i").unwrap()));
    }

    #[test]
    fn float_mode_parsing() {
        assert_eq!("exact".parse::<ScalarMode>().unwrap(), ScalarMode::Exact);
        assert_eq!("float:128".parse::<ScalarMode>().unwrap(), ScalarMode::Float { bits: 128 });
        assert!(matches!("float:32".parse::<ScalarMode>(), Err(ParseScalarError::Precision(32))));
        assert_eq!(ScalarMode::Float { bits: 256 }.to_string(), "float:256");
    }

    #[test]
    fn float_arithmetic_tracks_exact() {
        let ctx = FloatCtx::default();
        let third = Float::from_ratio(&ctx, 1, 3);
        let back = third.clone() * &Float::from_i64(&ctx, 3);
        let err = (back - &Float::one(&ctx)).to_c64().norm();
        assert!(err < 1e-70);
        let z = Float::from_exact(&ctx, &Exact::parse("-3+4i").unwrap());
        let r = z.sqrt().unwrap();
        let d = (r.to_c64() - Complex64::new(1.0, 2.0)).norm();
        assert!(d < 1e-14);
        assert_eq!(third.bits(), 256);
        let q = Float::from_exact(&ctx, &Exact::parse("1/2+1/3i").unwrap()) / &Float::from_exact(&ctx, &Exact::parse("2-i").unwrap());
        let expect = Complex64::new(0.5, 1.0 / 3.0) / Complex64::new(2.0, -1.0);
        assert!((q.to_c64() - expect).norm() < 1e-15);
        assert!(q.to_string().ends_with("i@256"));
    }
}
