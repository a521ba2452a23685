//! Independent checks for the engine, kept out of the computational API.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::curve::SpectralCurveLocal;
use crate::engine::{self, EngineError, EngineOptions, Slot};
use crate::scalar::Scalar;

fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Intersection numbers `⟨τ_{k₁}⋯τ_{k_n}⟩_g` from the Virasoro recursion.
#[derive(Default)]
pub struct Dvv {
    memo: BTreeMap<(usize, Vec<usize>), BigRational>,
}

impl Dvv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, g: usize, ks: &[usize]) -> BigRational {
        let n = ks.len();
        let total: usize = ks.iter().sum();
        if 2 * g + n < 3 || total as i64 != 3 * g as i64 - 3 + n as i64 {
            return BigRational::zero();
        }
        let mut key = ks.to_vec();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(v) = self.memo.get(&(g, key.clone())) {
            return v.clone();
        }
        let v = self.compute(g, &key);
        self.memo.insert((g, key), v.clone());
        v
    }

    fn compute(&mut self, g: usize, ks: &[usize]) -> BigRational {
        if g == 0 && ks == [0, 0, 0] {
            return BigRational::one();
        }
        if g == 1 && ks == [1] {
            return BigRational::new(1.into(), 24.into());
        }
        let k1 = ks[0];
        let rest = &ks[1..];
        let k1i = k1 as i64;
        let mut acc = BigRational::zero();
        for j in 0..rest.len() {
            let kj = rest[j] as i64;
            if k1i + kj < 1 {
                continue;
            }
            let mut sub: Vec<usize> = rest.to_vec();
            sub[j] = (k1i + kj - 1) as usize;
            let coef = BigRational::new(double_factorial(2 * k1i + 2 * kj - 1), double_factorial(2 * kj - 1));
            acc += coef * self.get(g, &sub);
        }
        let half = BigRational::new(1.into(), 2.into());
        for a in 0..k1.saturating_sub(1) {
            let b = k1 - 2 - a;
            let coef = BigRational::from_integer(double_factorial(2 * a as i64 + 1) * double_factorial(2 * b as i64 + 1)) * &half;
            let mut inner = BigRational::zero();
            if g >= 1 {
                let mut sub = Vec::with_capacity(rest.len() + 2);
                sub.push(a);
                sub.push(b);
                sub.extend_from_slice(rest);
                inner += self.get(g - 1, &sub);
            }
            for mask in 0u32..(1 << rest.len()) {
                let mut i1 = alloc::vec![a];
                let mut i2 = alloc::vec![b];
                for (i, k) in rest.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        i1.push(*k);
                    } else {
                        i2.push(*k);
                    }
                }
                for g1 in 0..=g {
                    let x = self.get(g1, &i1);
                    if x.is_zero() {
                        continue;
                    }
                    inner += x * self.get(g - g1, &i2);
                }
            }
            acc += coef * inner;
        }
        acc / BigRational::from_integer(double_factorial(2 * k1i + 1))
    }
}

/// Recomputes the coefficient of `key` in `ω_{g,n}` with the slot at
/// position `first` playing the role of `p₁`, which the engine never does
/// unless that slot is the smallest. Returns `(table value, audited value)`.
pub fn audit_coefficient<F: Scalar>(curve: &SpectralCurveLocal<F>, g: usize, n: usize, key: &[Slot], first: usize) -> Result<(F, F), EngineError> {
    let builder = engine::run(curve, &[(g, n)], EngineOptions::default())?;
    let mut sorted = key.to_vec();
    sorted.sort_unstable();
    let table = builder.forms[&(g, n)].coeff(&sorted).cloned().unwrap_or_else(|| F::zero(curve.ctx()));
    let mut rest = key.to_vec();
    let p1 = rest.remove(first);
    rest.sort_unstable();
    let q = builder.integrand(g, n, p1.point as usize, &rest)?;
    let audited = builder.project(&q, g, n, p1.point as usize, p1.k as i64)?;
    Ok((table, audited))
}
