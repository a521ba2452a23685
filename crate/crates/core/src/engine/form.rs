use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::scalar::Scalar;

/// A basis differential `φ_{point,k}`: in the disc of `point` it is
/// `ζ^{−k−2} dζ` plus a regular part fixed by `B`, and in other discs it is
/// regular. Only even `k` occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub point: u16,
    pub k: u16,
}

impl Slot {
    pub const fn new(point: u16, k: u16) -> Self {
        Slot { point, k }
    }

    /// Exponent of the polar monomial, `−(k+2)`.
    pub fn exponent(&self) -> i64 {
        -(self.k as i64) - 2
    }

    /// Inverse of [`Self::exponent`]; `None` for exponents above −2.
    pub fn from_exponent(point: u16, e: i64) -> Option<Self> {
        (e <= -2).then(|| Slot { point, k: (-e - 2) as u16 })
    }

    /// Degree contribution `k/2`.
    pub fn weight(&self) -> usize {
        self.k as usize / 2
    }
}

/// Sorted multiset of slots.
pub type Key = Vec<Slot>;

/// `d_{g,n} = 3g − 3 + n`.
pub fn dim(g: usize, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

/// `2g − 2 + n`.
pub fn euler(g: usize, n: usize) -> i64 {
    2 * g as i64 - 2 + n as i64
}

/// The invariant `ω_{g,n}` as a symmetric coefficient table.
///
/// `ω_{g,n} = Σ c(s₁…s_n) φ_{s₁}(p₁)⋯φ_{s_n}(p_n)` over ordered tuples, with
/// `c` depending only on the multiset of slots and stored once per sorted
/// key.
#[derive(Clone, Debug, PartialEq)]
pub struct OmegaForm<F: Scalar> {
    pub g: usize,
    pub n: usize,
    coeffs: BTreeMap<Key, F>,
    /// Highest known exponent of the regular parts of the basis
    /// differentials, `None` when the curve data is exact.
    pub regular_ceiling: Option<usize>,
}

impl<F: Scalar> OmegaForm<F> {
    pub fn new(g: usize, n: usize, regular_ceiling: Option<usize>) -> Self {
        OmegaForm { g, n, coeffs: BTreeMap::new(), regular_ceiling }
    }

    /// Inserts a coefficient, dropping zeros. The key is sorted first.
    pub fn insert(&mut self, mut key: Key, value: F) {
        assert_eq!(key.len(), self.n, "key length must equal n");
        key.sort_unstable();
        if value.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, value);
        }
    }

    /// Coefficient of `φ_{s₁}(p₁)⋯φ_{s_n}(p_n)` for slots in any order.
    pub fn coeff(&self, slots: &[Slot]) -> Option<&F> {
        let mut key = slots.to_vec();
        key.sort_unstable();
        self.coeffs.get(&key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Key, &F)> + '_ {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn d(&self) -> i64 {
        dim(self.g, self.n)
    }

    /// `−(2 d_{g,n} + 2)`.
    pub fn polar_floor(&self) -> i64 {
        -(2 * self.d() + 2)
    }

    /// Most negative exponent over all keys and slots, `None` if the form
    /// vanishes.
    pub fn deepest_exponent(&self) -> Option<i64> {
        self.coeffs.keys().flat_map(|k| k.iter().map(Slot::exponent)).min()
    }

    /// Converts the coefficients into another scalar field.
    pub fn map_scalars<G: Scalar>(&self, f: impl Fn(&F) -> G) -> OmegaForm<G> {
        OmegaForm {
            g: self.g,
            n: self.n,
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
            regular_ceiling: self.regular_ceiling,
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}:{}", self.point, self.exponent())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use alloc::vec;

    #[test]
    fn keys_are_order_free() {
        let mut w = OmegaForm::<Exact>::new(0, 3, None);
        w.insert(vec![Slot::new(0, 2), Slot::new(0, 0), Slot::new(1, 0)], Exact::ratio(1, 3));
        let perm = [Slot::new(1, 0), Slot::new(0, 2), Slot::new(0, 0)];
        assert_eq!(w.coeff(&perm), Some(&Exact::ratio(1, 3)));
        assert_eq!(w.deepest_exponent(), Some(-4));
        assert_eq!(w.polar_floor(), -2);
        w.insert(perm.to_vec(), Exact::int(0));
        assert!(w.is_empty());
    }

    #[test]
    fn slot_exponents() {
        assert_eq!(Slot::new(0, 4).exponent(), -6);
        assert_eq!(Slot::from_exponent(0, -6), Some(Slot::new(0, 4)));
        assert_eq!(Slot::from_exponent(0, -1), None);
    }
}
