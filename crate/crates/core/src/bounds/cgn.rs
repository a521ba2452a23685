use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::factorial;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn int_pow(base: i64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

fn rat_pow(base: &BigRational, e: i64) -> BigRational {
    if e >= 0 {
        num_traits::pow(base.clone(), e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// `D_{g,n} = 3g − 3 + 2n`.
pub fn big_d(g: usize, n: usize) -> i64 {
    3 * g as i64 - 3 + 2 * n as i64
}

/// `A_{g,n} = 5g − 5 + 3n`.
pub fn big_a(g: usize, n: usize) -> i64 {
    5 * g as i64 - 5 + 3 * n as i64
}

fn stable(g: usize, n: usize) -> bool {
    2 * g + n > 2
}

/// Memoized exact values of the sequence `C_{g,n}`.
#[derive(Clone, Debug, Default)]
pub struct CgnTable {
    memo: BTreeMap<(usize, usize), BigRational>,
    overrides: BTreeMap<(usize, usize), BigRational>,
}

impl CgnTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Replaces one entry before anything depending on it is computed.
    /// Used to exercise the failure path of the bound checks.
    pub fn with_override(mut self, g: usize, n: usize, value: BigRational) -> Self {
        self.overrides.insert((g, n), value);
        self.memo.clear();
        self
    }

    pub fn get(&mut self, g: usize, n: usize) -> BigRational {
        if let Some(v) = self.overrides.get(&(g, n)) {
            return v.clone();
        }
        if n == 0 || !stable(g, n) {
            return BigRational::zero();
        }
        match (g, n) {
            (0, 3) | (1, 1) => return BigRational::one(),
            _ => {}
        }
        if let Some(v) = self.memo.get(&(g, n)) {
            return v.clone();
        }
        let v = self.recurse(g, n - 1);
        self.memo.insert((g, n), v.clone());
        v
    }

    /// `C_{g,n+1}` from lower entries.
    fn recurse(&mut self, g: usize, n: usize) -> BigRational {
        let d = big_d(g, n + 1);
        let mut bracket = BigRational::zero();
        if g >= 1 {
            bracket += BigRational::from_integer((n as i64 + 1).into()) * self.get(g - 1, n + 2);
        }
        for g1 in 0..=g {
            for n1 in 0..=n {
                let (g2, n2) = (g - g1, n - n1);
                if stable(g1, n1 + 1) && stable(g2, n2 + 1) {
                    bracket += self.get(g1, n1 + 1) * self.get(g2, n2 + 1);
                }
            }
        }
        let first = BigRational::new(int_pow(d + 1, (d + 1) as u32), int_pow(d, d as u32));
        let mut out = bracket * first;
        let lower = self.get(g, n);
        if !lower.is_zero() {
            let num = int_pow(2 * d + 1, (2 * d + 1) as u32);
            let den = BigInt::from(27) * int_pow(2 * d - 2, (2 * d - 2) as u32);
            out += BigRational::from_integer(2.into()) * lower * BigRational::new(num, den);
        }
        out
    }
}

/// Exact value of a convenience entry point.
pub fn cgn(g: usize, n: usize) -> BigRational {
    CgnTable::new().get(g, n)
}

/// Rational interval `[lo, hi]` containing `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EEnclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Default for EEnclosure {
    fn default() -> Self {
        EEnclosure { lo: rat(2_718_281_828, 1_000_000_000), hi: rat(2_718_281_829, 1_000_000_000) }
    }
}

impl EEnclosure {
    /// Lower bound of `e^k`, whichever sign `k` has.
    pub fn pow_lower(&self, k: i64) -> BigRational {
        if k >= 0 {
            rat_pow(&self.lo, k)
        } else {
            rat_pow(&self.hi, k)
        }
    }

    pub fn pow_upper(&self, k: i64) -> BigRational {
        if k >= 0 {
            rat_pow(&self.hi, k)
        } else {
            rat_pow(&self.lo, k)
        }
    }
}

/// `s = (27/80)e⁻³`, `r = (14·27/80²)e⁻⁴`, `t = (3⁵/80²)e⁻⁴` as rational
/// factor times a power of `e`, with the split constants `c, c′, c″`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorialBoundParams {
    pub s: (BigRational, i64),
    pub r: (BigRational, i64),
    pub t: (BigRational, i64),
    pub c: BigRational,
    pub c_prime: BigRational,
    pub c_second: BigRational,
    pub e: EEnclosure,
}

impl Default for FactorialBoundParams {
    fn default() -> Self {
        FactorialBoundParams {
            s: (rat(27, 80), -3),
            r: (rat(14 * 27, 80 * 80), -4),
            t: (rat(243, 80 * 80), -4),
            c: rat(9, 80),
            c_prime: rat(16, 80),
            c_second: rat(14, 80),
            e: EEnclosure::default(),
        }
    }
}

impl FactorialBoundParams {
    /// `t r^{−g} s^{−n}` as `(rational, power of e)`.
    pub fn prefactor(&self, g: usize, n: usize) -> (BigRational, i64) {
        let (g, n) = (g as i64, n as i64);
        let q = self.t.0.clone() * rat_pow(&self.r.0, -g) * rat_pow(&self.s.0, -n);
        (q, self.t.1 - g * self.r.1 - n * self.s.1)
    }

    /// `r` as an `f64`.
    pub fn r_f64(&self) -> f64 {
        self.r.0.to_f64().unwrap_or(f64::NAN) * libm::exp(self.r.1 as f64)
    }
}

/// Outcome of the factorial bound at one `(g, n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorialBoundReport {
    pub g: usize,
    pub n: usize,
    pub cgn: BigRational,
    /// Rigorous lower bound of `t r^{−g} s^{−n} A_{g,n}!`.
    pub bound: BigRational,
    /// Rigorous lower bound of `9 A! e^{4g−4+3n} 80^{2g−2+n} 3^{3−3g−3n} 14^{−g}`.
    pub bound_explicit: BigRational,
    /// Rigorous lower bound of `9 A! e^{4g−4+3n} 3^{5g−5+n} 14^{−g}`.
    pub bound_rewritten: BigRational,
    /// `C_{g,n}/bound`, rounded.
    pub ratio: f64,
    pub holds: bool,
}

pub fn factorial_bound_check(g: usize, n: usize, table: &mut CgnTable, params: &FactorialBoundParams) -> FactorialBoundReport {
    let c = table.get(g, n);
    let a = big_a(g, n);
    let fact = BigRational::from_integer(factorial(a.max(0) as u64));
    let (q, ek) = params.prefactor(g, n);
    let bound = q * params.e.pow_lower(ek) * &fact;
    let (gi, ni) = (g as i64, n as i64);
    let e_pow = params.e.pow_lower(4 * gi - 4 + 3 * ni);
    let nine = BigRational::from_integer(9.into());
    let fourteen = rat(14, 1);
    let explicit =
        nine.clone() * &fact * &e_pow * rat_pow(&rat(80, 1), 2 * gi - 2 + ni) * rat_pow(&rat(3, 1), 3 - 3 * gi - 3 * ni) * rat_pow(&fourteen, -gi);
    let rewritten = nine * &fact * &e_pow * rat_pow(&rat(3, 1), 5 * gi - 5 + ni) * rat_pow(&fourteen, -gi);
    let holds = c <= bound && c <= explicit && c <= rewritten;
    let ratio = ratio_f64(&c, &bound);
    FactorialBoundReport { g, n, cgn: c, bound, bound_explicit: explicit, bound_rewritten: rewritten, ratio, holds }
}

/// `x/y` in double precision without overflowing on huge operands.
pub fn ratio_f64(x: &BigRational, y: &BigRational) -> f64 {
    if y.is_zero() {
        return f64::INFINITY;
    }
    let q = x / y;
    log_abs(&q).map_or(0.0, libm::exp) * if q.is_negative() { -1.0 } else { 1.0 }
}

/// Natural log of `|x|`, `None` for zero.
pub fn log_abs(x: &BigRational) -> Option<f64> {
    if x.is_zero() {
        return None;
    }
    Some(log_big(x.numer()) - log_big(x.denom()))
}

fn log_big(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits < 1000 {
        return libm::log(v.abs().to_f64().unwrap_or(f64::MAX));
    }
    let shift = bits - 64;
    let top: BigInt = v.abs() >> shift;
    libm::log(top.to_f64().unwrap_or(1.0)) + shift as f64 * core::f64::consts::LN_2
}

/// `inf_{η∈(0,1)} 1/((1−η)^k η^d)`, attained at `η* = d/(d+k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaInfimum {
    pub eta_star: BigRational,
    pub value: BigRational,
    /// `e^k (d+k)^k / k^k` evaluated with the upper end of the enclosure.
    pub upper: BigRational,
}

pub fn inf_eta(k: u32, d: u32) -> EtaInfimum {
    assert!(k >= 1 && d >= 1, "inf_eta needs k, d ≥ 1");
    let s = (k + d) as i64;
    let value = BigRational::new(int_pow(s, s as u32), int_pow(k as i64, k) * int_pow(d as i64, d));
    let upper = EEnclosure::default().pow_upper(k as i64) * BigRational::new(int_pow(s, k), int_pow(k as i64, k));
    EtaInfimum { eta_star: rat(d as i64, s), value, upper }
}

/// Minimum of `1/((1−η)^k η^d)` over a uniform grid of `points` interior
/// points, refined once around the best cell with another `points` points.
pub fn grid_min_eta(k: u32, d: u32, points: usize) -> f64 {
    let f = |eta: f64| -(k as f64) * libm::log(1.0 - eta) - d as f64 * libm::log(eta);
    let scan = |lo: f64, hi: f64| {
        let h = (hi - lo) / (points as f64 + 1.0);
        let mut best = (f64::INFINITY, lo);
        for i in 1..=points {
            let x = lo + h * i as f64;
            let v = f(x);
            if v < best.0 {
                best = (v, x);
            }
        }
        (best, h)
    };
    let ((_, x), h) = scan(0.0, 1.0);
    let ((v, _), _) = scan((x - h).max(0.0), (x + h).min(1.0));
    libm::exp(v)
}

/// One named check of the proof's arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub holds: bool,
    /// First `(g, n)` or `(a, b)` that failed, if any.
    pub counterexample: Option<(i64, i64)>,
}

/// Exact verification of the identities and inequalities the factorial
/// bound relies on, for stable `(g, n)` with `n ≥ 1` and `2g + n ≤ max_2g_n`.
pub fn verify_proof_identities(max_2g_n: usize, params: &FactorialBoundParams) -> Vec<IdentityCheck> {
    let (c, c1, c2) = (&params.c, &params.c_prime, &params.c_second);
    let two = rat(2, 1);
    let mut out = Vec::new();
    let scalar = |name, holds| IdentityCheck { name, holds, counterexample: None };
    out.push(scalar("c'' + 2c - 2c' = 0", (c2 + &two * c - &two * c1).is_zero()));
    out.push(scalar("4c - (9/4)c' = 0", (rat(4, 1) * c - rat(9, 4) * c1).is_zero()));
    out.push(scalar("2c'' + 4c + c' = 1", (&two * c2 + rat(4, 1) * c + c1).is_one()));
    let mut range = Vec::new();
    for g in 0..=max_2g_n / 2 {
        for n in 1..=max_2g_n - 2 * g {
            if stable(g, n) {
                range.push((g, n));
            }
        }
    }
    let mut check = |name: &'static str, pred: &dyn Fn(i64, i64) -> bool| {
        let bad = range.iter().map(|&(g, n)| (g as i64, n as i64)).find(|&(g, n)| !pred(g, n));
        out.push(IdentityCheck { name, holds: bad.is_none(), counterexample: bad });
    };
    let a = |g: i64, n: i64| 5 * g - 5 + 3 * n;
    check("D_{g,n} + 1 <= A_{g,n}", &|g, n| 3 * g - 3 + 2 * n < a(g, n));
    check("n <= 2A_{g,n} - 5", &|g, n| n <= 2 * a(g, n) - 5);
    check("g + 1 <= 2(A_{g,n} - 2)", &|g, n| g < 2 * (a(g, n) - 2));
    check("(g+1)(n+1) - 4 <= 4(A_{g,n+1} - 2)(A_{g,n+1} - 3/2)", &|g, n| {
        let an = a(g, n + 1);
        // Doubled to stay in integers.
        2 * ((g + 1) * (n + 1) - 4) <= 4 * (an - 2) * (2 * an - 3)
    });
    check("A_{g,n} = A_{g,n+1} - 3", &|g, n| a(g, n) == a(g, n + 1) - 3);
    check("A_{g-1,n+2} = A_{g,n+1} - 2", &|g, n| a(g - 1, n + 2) == a(g, n + 1) - 2);
    check("A_{g1,n1+1} + A_{g2,n2+1} = A_{g,n+1} - 2", &|g, n| {
        (0..=g).all(|g1| (0..=n).all(|n1| a(g1, n1 + 1) + a(g - g1, n - n1 + 1) == a(g, n + 1) - 2))
    });
    let mut bad = None;
    'outer: for x in 1..=40u64 {
        for y in 1..=40u64 {
            if factorial(x) * factorial(y) > factorial(x + y - 1) {
                bad = Some((x as i64, y as i64));
                break 'outer;
            }
        }
    }
    out.push(IdentityCheck { name: "a! b! <= (a+b-1)!", holds: bad.is_none(), counterexample: bad });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases_and_first_step() {
        let mut t = CgnTable::new();
        assert_eq!(t.get(0, 3), rat(1, 1));
        assert_eq!(t.get(1, 1), rat(1, 1));
        assert_eq!(t.get(3, 0), rat(0, 1));
        assert_eq!(t.get(1, 2), rat(81857, 128));
    }

    #[test]
    fn zero_four_has_only_the_lower_term() {
        // D = 5: C_{0,4} = 2·C_{0,3}·11¹¹/(27·8⁸).
        let expect = rat(2, 1) * BigRational::new(int_pow(11, 11), BigInt::from(27) * int_pow(8, 8));
        assert_eq!(cgn(0, 4), expect);
    }

    #[test]
    fn eta_closed_form() {
        let r = inf_eta(1, 1);
        assert_eq!(r.eta_star, rat(1, 2));
        assert_eq!(r.value, rat(4, 1));
        assert_eq!(inf_eta(2, 3).value, rat(3125, 108));
    }

    #[test]
    fn identities_hold() {
        for c in verify_proof_identities(16, &FactorialBoundParams::default()) {
            assert!(c.holds, "{}", c.name);
        }
    }

    #[test]
    fn small_factorial_bounds() {
        let p = FactorialBoundParams::default();
        let mut t = CgnTable::new();
        let r11 = factorial_bound_check(1, 1, &mut t, &p);
        let b = r11.bound.to_f64().unwrap();
        assert!((b - 229.5).abs() < 0.5, "{b}");
        assert!(factorial_bound_check(0, 3, &mut t, &p).holds);
    }
}
