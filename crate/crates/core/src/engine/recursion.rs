//! Level-by-level construction of the `ω_{g,n}` tables.
//!
//! For a target `ω_{g,n+1}` the first slot `(a, k₁)` is always the smallest
//! slot of the key, so every sorted key is produced exactly once. The
//! bracketed integrand `Q(ζ)` depends only on `(a, J)` where `J` is the rest
//! of the key, so it is computed once and projected onto every admissible
//! `k₁`.
//!
//! Lower forms enter through first-slot expansions
//! `E_f[a][rest](ζ) = ω_f(ζ_a, rest)/dζ`, accumulated from the coefficient
//! tables as soon as a form is finished.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::form::{dim, euler, Key, OmegaForm, Slot};
use super::{EngineError, TermGroup};
use crate::curve::SpectralCurveLocal;
use crate::scalar::Scalar;

type Gn = (usize, usize);

pub(crate) fn min_known(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn stable(g: usize, n: usize) -> bool {
    euler(g, n) > 0
}

/// Coefficients of `ζ^lo … ζ^(lo+len−1)`, known up to `known` (`None` when
/// exact).
#[derive(Clone, Debug)]
pub(crate) struct Dense<F: Scalar> {
    pub lo: i64,
    pub c: Vec<F>,
    pub known: Option<i64>,
}

impl<F: Scalar> Dense<F> {
    pub fn zeros(ctx: &F::Ctx, lo: i64, hi: i64) -> Self {
        let len = (hi - lo + 1).max(0) as usize;
        Dense { lo, c: vec![F::zero(ctx); len], known: None }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.c.len() as i64 - 1
    }

    pub fn get(&self, e: i64) -> Option<&F> {
        if e < self.lo || e > self.hi() {
            return None;
        }
        let v = &self.c[(e - self.lo) as usize];
        (!v.is_zero()).then_some(v)
    }

    /// Lowest exponent that may carry a nonzero coefficient; `None` for an
    /// exact zero.
    pub fn valuation(&self) -> Option<i64> {
        match self.c.iter().position(|v| !v.is_zero()) {
            Some(i) => Some(self.lo + i as i64),
            None => self.known.map(|n| n + 1),
        }
    }

    /// `self += k·other` on the overlap of the two ranges.
    pub fn add_scaled(&mut self, other: &Dense<F>, k: &F) {
        self.known = min_known(self.known, other.known);
        for (i, v) in other.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let e = other.lo + i as i64;
            debug_assert!(e >= self.lo && e <= self.hi(), "accumulator range too small");
            if e >= self.lo && e <= self.hi() {
                self.c[(e - self.lo) as usize].mul_add_assign(v, k);
            }
        }
    }
}

/// `κ_a(ζ) = Σ_j c[j] ζ^{2j−1} = 1/(4 y_odd(ζ))`.
#[derive(Clone, Debug)]
pub(crate) struct Kappa<F: Scalar> {
    pub c: Vec<F>,
    /// Highest index `j` that could be computed from the `y` data.
    pub known: usize,
}

pub(crate) fn kappa<F: Scalar>(curve: &SpectralCurveLocal<F>, a: usize, jmax: usize) -> Result<Kappa<F>, EngineError> {
    let ctx = curve.ctx();
    let y1 = curve.y(a, 1).map_err(|e| EngineError::KernelData { point: a, source: e })?;
    if y1.is_zero() {
        return Err(EngineError::DegenerateKernel { point: a });
    }
    let limit = match curve.points()[a].trunc {
        Some(t) => jmax.min(t.saturating_sub(1) / 2),
        None => jmax,
    };
    let four = F::from_i64(ctx, 4);
    let p: Vec<F> = (0..=limit)
        .map(|i| curve.y(a, 2 * i + 1).map(|v| v * &four))
        .collect::<Result<_, _>>()
        .map_err(|e| EngineError::KernelData { point: a, source: e })?;
    let inv_p0 = F::one(ctx) / &p[0];
    let mut c: Vec<F> = Vec::with_capacity(limit + 1);
    c.push(inv_p0.clone());
    for n in 1..=limit {
        let mut acc = F::zero(ctx);
        for i in 1..=n {
            acc.mul_add_assign(&p[i], &c[n - i]);
        }
        c.push(-(acc * &inv_p0));
    }
    Ok(Kappa { c, known: limit })
}

/// The bracketed integrand, even exponents `lo, lo+2, …, 0` only, with the
/// known order tracked separately per term group.
pub(crate) struct QAcc<F: Scalar> {
    pub lo: i64,
    pub c: Vec<F>,
    pub known: [(TermGroup, Option<i64>); 4],
    zero: F,
}

impl<F: Scalar> QAcc<F> {
    fn new(ctx: &F::Ctx, lo: i64) -> Self {
        debug_assert!(lo % 2 == 0 && lo <= 0);
        QAcc {
            lo,
            c: vec![F::zero(ctx); (-lo / 2 + 1) as usize],
            known: [(TermGroup::Base, None), (TermGroup::Splitting, None), (TermGroup::Degenerate, None), (TermGroup::Insertion, None)],
            zero: F::zero(ctx),
        }
    }

    fn note(&mut self, group: TermGroup, known: Option<i64>) {
        for (g, k) in self.known.iter_mut() {
            if *g == group {
                *k = min_known(*k, known);
            }
        }
    }

    fn slot(&mut self, e: i64) -> Option<&mut F> {
        if e < self.lo || e > 0 || e % 2 != 0 {
            return None;
        }
        Some(&mut self.c[((e - self.lo) / 2) as usize])
    }

    pub fn get(&self, e: i64) -> Option<&F> {
        if e < self.lo || e > 0 || e % 2 != 0 {
            return None;
        }
        let v = &self.c[((e - self.lo) / 2) as usize];
        (!v.is_zero()).then_some(v)
    }

    /// `Q += w·A(ζ)·B(−ζ)·(−1)`, the sign coming from `dζ(σ_a(p)) = −dζ`.
    fn add_reflected_product(&mut self, a: &Dense<F>, b: &Dense<F>, w: &F, group: TermGroup) {
        let (Some(va), Some(vb)) = (a.valuation(), b.valuation()) else {
            return;
        };
        let known = min_known(a.known.map(|n| n + vb), b.known.map(|n| n + va));
        self.note(group, known);
        let (a_hi, b_hi) = (a.hi(), b.hi());
        let mut e = self.lo;
        while e <= 0 {
            let e1_lo = a.lo.max(e - b_hi);
            let e1_hi = a_hi.min(e - b.lo);
            if e1_lo <= e1_hi {
                let mut plus = self.zero.clone();
                let mut minus = self.zero.clone();
                for e1 in e1_lo..=e1_hi {
                    let Some(x) = a.get(e1) else { continue };
                    let e2 = e - e1;
                    let Some(y) = b.get(e2) else { continue };
                    // (−1)^{e2+1}
                    if e2 % 2 == 0 {
                        minus.mul_add_assign(x, y);
                    } else {
                        plus.mul_add_assign(x, y);
                    }
                }
                let s = plus - &minus;
                if !s.is_zero() {
                    if let Some(slot) = self.slot(e) {
                        slot.mul_add_assign(&s, w);
                    }
                }
            }
            e += 2;
        }
    }

    /// `Q += w·ζ^shift·A(ζ)`.
    fn add_shifted(&mut self, a: &Dense<F>, shift: i64, w: &F, group: TermGroup) {
        self.note(group, a.known.map(|n| n + shift));
        for (i, v) in a.c.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            if let Some(slot) = self.slot(a.lo + i as i64 + shift) {
                slot.mul_add_assign(v, w);
            }
        }
    }
}

/// Sub-multisets `T₁ ⊆ J` with multiplicity weight `∏ C(m_v, t_v)`.
fn sub_multisets(j: &[Slot]) -> Vec<(Key, Key, u64)> {
    let mut runs: Vec<(Slot, usize)> = Vec::new();
    for s in j {
        match runs.last_mut() {
            Some((v, m)) if v == s => *m += 1,
            _ => runs.push((*s, 1)),
        }
    }
    let mut out = Vec::new();
    let mut counts = vec![0usize; runs.len()];
    loop {
        let mut t1 = Vec::new();
        let mut t2 = Vec::new();
        let mut w = 1u64;
        for ((v, m), &t) in runs.iter().zip(&counts) {
            t1.extend(core::iter::repeat_n(*v, t));
            t2.extend(core::iter::repeat_n(*v, m - t));
            w *= binom(*m as u64, t as u64);
        }
        out.push((t1, t2, w));
        // Mixed-radix increment.
        let mut i = 0;
        loop {
            if i == runs.len() {
                return out;
            }
            counts[i] += 1;
            if counts[i] <= runs[i].1 {
                break;
            }
            counts[i] = 0;
            i += 1;
        }
    }
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn insert_sorted(j: &[Slot], s: Slot) -> Key {
    let pos = j.partition_point(|x| *x < s);
    let mut out = Vec::with_capacity(j.len() + 1);
    out.extend_from_slice(&j[..pos]);
    out.push(s);
    out.extend_from_slice(&j[pos..]);
    out
}

/// Sorted multisets of `size` slots drawn from `universe` (itself sorted),
/// with total weight at most `budget`.
fn multisets(universe: &[Slot], size: usize, budget: usize) -> Vec<Key> {
    fn rec(u: &[Slot], start: usize, size: usize, budget: usize, cur: &mut Key, out: &mut Vec<Key>) {
        if size == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..u.len() {
            let w = u[i].weight();
            if w > budget {
                continue;
            }
            cur.push(u[i]);
            rec(u, i, size - 1, budget - w, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(universe, 0, size, budget, &mut Vec::new(), &mut out);
    out
}

pub(crate) struct Builder<'c, F: Scalar> {
    pub curve: &'c SpectralCurveLocal<F>,
    pub np: usize,
    pub kappa: Vec<Kappa<F>>,
    /// `x[a][b][k/2]`: the basis differential `φ_{b,k}` expanded in `ζ_a`.
    pub x: Vec<Vec<Vec<Dense<F>>>>,
    pub reg_hi: i64,
    pub forms: BTreeMap<(usize, usize), OmegaForm<F>>,
    pub expansions: BTreeMap<Gn, Vec<BTreeMap<Key, Dense<F>>>>,
    pub factors: BTreeSet<(usize, usize)>,
    pub degree_filter: bool,
    pub regular_ceiling: Option<usize>,
}

impl<'c, F: Scalar> Builder<'c, F> {
    /// Prepares kernel and basis data for forms with `d_{g,n} ≤ d_max`.
    pub fn new(curve: &'c SpectralCurveLocal<F>, d_max: usize, factors: BTreeSet<(usize, usize)>) -> Result<Self, EngineError> {
        let ctx = curve.ctx();
        let np = curve.num_points();
        let kappa = (0..np).map(|a| kappa(curve, a, d_max + 1)).collect::<Result<Vec<_>, _>>()?;
        let reg_cap = 2 * d_max + 2;
        let mut x = Vec::with_capacity(np);
        let mut reg_hi = 0i64;
        let mut ceiling: Option<usize> = None;
        for a in 0..np {
            let mut row = Vec::with_capacity(np);
            for b in 0..np {
                let part = curve.b_part(a, b);
                let mut col = Vec::with_capacity(d_max + 1);
                for half in 0..=d_max {
                    let k = 2 * half;
                    let (jlim, known) = match part.trunc {
                        None => (part.coeffs.len() as i64 - 1, None),
                        Some(t) if k > t => (-1, Some(-1)),
                        Some(t) => {
                            let j = t.min(reg_cap) as i64;
                            (j, Some(j))
                        }
                    };
                    if let Some(t) = part.trunc {
                        ceiling = Some(ceiling.map_or(t, |c: usize| c.min(t)));
                    }
                    reg_hi = reg_hi.max(jlim);
                    let lo = if a == b { -(k as i64) - 2 } else { 0 };
                    let mut d = Dense::zeros(ctx, lo, jlim.max(lo));
                    d.known = known;
                    if a == b {
                        d.c[0] = F::one(ctx);
                    }
                    let inv = F::from_ratio(ctx, 1, k as i64 + 1);
                    for j in 0..=jlim {
                        let v = curve.beta(a, b, j as usize, k).expect("index within truncation");
                        if !v.is_zero() {
                            d.c[(j - lo) as usize] = v * &inv;
                        }
                    }
                    col.push(d);
                }
                row.push(col);
            }
            x.push(row);
        }
        Ok(Builder {
            curve,
            np,
            kappa,
            x,
            reg_hi,
            forms: BTreeMap::new(),
            expansions: BTreeMap::new(),
            factors,
            degree_filter: true,
            regular_ceiling: ceiling,
        })
    }

    fn ctx(&self) -> &F::Ctx {
        self.curve.ctx()
    }

    fn basis(&self, a: usize, s: Slot) -> &Dense<F> {
        &self.x[a][s.point as usize][s.k as usize / 2]
    }

    fn expansion(&self, f: (usize, usize), a: usize, rest: &[Slot]) -> Option<&Dense<F>> {
        let table = self.expansions.get(&f);
        debug_assert!(table.is_some(), "expansion of ω_{:?} requested but not built", f);
        table?[a].get(rest)
    }

    fn universe(&self, d: i64) -> Vec<Slot> {
        let mut u = Vec::new();
        for b in 0..self.np {
            for half in 0..=d.max(0) {
                u.push(Slot::new(b as u16, 2 * half as u16));
            }
        }
        u
    }

    /// Computes `ω_{g,n1}` and, if it feeds later levels, its first-slot
    /// expansions.
    pub fn compute(&mut self, g: usize, n1: usize) -> Result<(), EngineError> {
        let d = dim(g, n1);
        let n = n1 - 1;
        let universe = self.universe(d);
        let budget = if self.degree_filter { d as usize } else { usize::MAX / 4 };
        let mut form = OmegaForm::new(g, n1, self.regular_ceiling);
        for j in multisets(&universe, n, budget) {
            let w: usize = j.iter().map(Slot::weight).sum();
            for a in 0..self.np {
                let mut kmax = if self.degree_filter { 2 * (d - w as i64) } else { 2 * d };
                if let Some(first) = j.first() {
                    if a > first.point as usize {
                        continue;
                    }
                    if a == first.point as usize {
                        kmax = kmax.min(first.k as i64);
                    }
                }
                if kmax < 0 {
                    continue;
                }
                let q = self.integrand(g, n1, a, &j)?;
                let mut k1 = 0;
                while k1 <= kmax {
                    let c = self.project(&q, g, n1, a, k1)?;
                    if !c.is_zero() {
                        let mut key = Vec::with_capacity(n1);
                        key.push(Slot::new(a as u16, k1 as u16));
                        key.extend_from_slice(&j);
                        form.insert(key, c);
                    }
                    k1 += 2;
                }
            }
        }
        if self.factors.contains(&(g, n1)) {
            let exp = self.expand(&form);
            self.expansions.insert((g, n1), exp);
        }
        self.forms.insert((g, n1), form);
        Ok(())
    }

    /// First-slot expansions `E[a][rest] = Σ_s c(s ∪ rest) φ_s(ζ_a)`.
    fn expand(&self, form: &OmegaForm<F>) -> Vec<BTreeMap<Key, Dense<F>>> {
        let ctx = self.ctx();
        let lo = form.polar_floor();
        let mut out: Vec<BTreeMap<Key, Dense<F>>> = (0..self.np).map(|_| BTreeMap::new()).collect();
        for (key, c) in form.iter() {
            for i in 0..key.len() {
                if i > 0 && key[i] == key[i - 1] {
                    continue;
                }
                let mut rest = key.clone();
                let s = rest.remove(i);
                for (a, table) in out.iter_mut().enumerate() {
                    let entry = table.entry(rest.clone()).or_insert_with(|| Dense::zeros(ctx, lo, self.reg_hi));
                    entry.add_scaled(self.basis(a, s), c);
                }
            }
        }
        out
    }

    /// The bracketed integrand `Q(ζ_a)` for target `ω_{g,n1}` with remaining
    /// slots `j`.
    pub fn integrand(&self, g: usize, n1: usize, a: usize, j: &[Slot]) -> Result<QAcc<F>, EngineError> {
        let ctx = self.ctx();
        let d = dim(g, n1);
        let mut q = QAcc::new(ctx, -(2 * d + 2));
        let n = n1 - 1;
        let a16 = a as u16;
        match (g, n1) {
            (0, 3) => {
                // 2·B(ζ, p₂)·B(−ζ, p₃), polar parts only when both sit at a.
                if j[0].point == a16 && j[1].point == a16 {
                    let (k2, k3) = (j[0].k as i64, j[1].k as i64);
                    let sign = if k3 % 2 == 0 { -1 } else { 1 };
                    let v = F::from_i64(ctx, 2 * sign * (k2 + 1) * (k3 + 1));
                    if let Some(slot) = q.slot(k2 + k3) {
                        *slot += &v;
                    }
                }
            }
            (1, 1) => {
                // B(ζ, −ζ)/dζ² = −1/(4ζ²) − Σ β_{kl} (−1)^l ζ^{k+l}.
                if let Some(slot) = q.slot(-2) {
                    *slot -= &F::from_ratio(ctx, 1, 4);
                }
                let part = self.curve.b_part(a, a);
                let beta = self.curve.beta(a, a, 0, 0).map_err(|_| EngineError::Truncation {
                    g,
                    n: n1,
                    term: TermGroup::Base,
                    needed: 0,
                    known: part.trunc.map_or(-1, |t| t as i64),
                })?;
                if let Some(slot) = q.slot(0) {
                    *slot -= &beta;
                }
            }
            _ => {
                self.add_splittings(&mut q, g, a, j);
                if g >= 1 {
                    self.add_degenerate(&mut q, g, n, a, j);
                }
                if n >= 1 && stable(g, n) {
                    self.add_insertions(&mut q, g, n, a, j);
                }
            }
        }
        Ok(q)
    }

    fn add_splittings(&self, q: &mut QAcc<F>, g: usize, a: usize, j: &[Slot]) {
        let ctx = self.ctx();
        for (t1, t2, w) in sub_multisets(j) {
            for g1 in 0..=g {
                let g2 = g - g1;
                let (f1, f2) = ((g1, t1.len() + 1), (g2, t2.len() + 1));
                if !stable(f1.0, f1.1) || !stable(f2.0, f2.1) {
                    continue;
                }
                // On even exponents A(ζ)B(−ζ) = B(ζ)A(−ζ), so each unordered
                // pair is taken once.
                let weight = match (g1, &t1).cmp(&(g2, &t2)) {
                    core::cmp::Ordering::Greater => continue,
                    core::cmp::Ordering::Equal => w,
                    core::cmp::Ordering::Less => 2 * w,
                };
                let (Some(e1), Some(e2)) = (self.expansion(f1, a, &t1), self.expansion(f2, a, &t2)) else {
                    continue;
                };
                q.add_reflected_product(e1, e2, &F::from_i64(ctx, weight as i64), TermGroup::Splitting);
            }
        }
    }

    fn add_degenerate(&self, q: &mut QAcc<F>, g: usize, n: usize, a: usize, j: &[Slot]) {
        let ctx = self.ctx();
        let f = (g - 1, n + 2);
        let one = F::one(ctx);
        for s in self.universe(dim(f.0, f.1)) {
            let key = insert_sorted(j, s);
            if let Some(e) = self.expansion(f, a, &key) {
                q.add_reflected_product(e, self.basis(a, s), &one, TermGroup::Degenerate);
            }
        }
    }

    fn add_insertions(&self, q: &mut QAcc<F>, g: usize, n: usize, a: usize, j: &[Slot]) {
        let ctx = self.ctx();
        let mut i = 0;
        while i < j.len() {
            let v = j[i];
            let m = j[i..].iter().take_while(|s| **s == v).count();
            if v.point as usize == a {
                let mut rest = j.to_vec();
                rest.remove(i);
                if let Some(e) = self.expansion((g, n), a, &rest) {
                    let k = v.k as i64;
                    let sign = if k % 2 == 0 { -1 } else { 1 };
                    let w = F::from_i64(ctx, 2 * sign * (k + 1) * m as i64);
                    q.add_shifted(e, k, &w, TermGroup::Insertion);
                }
            }
            i += m;
        }
    }

    /// `Res ζ^{k₁} κ_a(ζ) Q(ζ) dζ`, the coefficient of `φ_{a,k₁}`.
    pub fn project(&self, q: &QAcc<F>, g: usize, n1: usize, a: usize, k1: i64) -> Result<F, EngineError> {
        for (group, known) in q.known {
            if let Some(n) = known {
                if -k1 > n {
                    return Err(EngineError::Truncation { g, n: n1, term: group, needed: -k1, known: n });
                }
            }
        }
        let kap = &self.kappa[a];
        let mut acc = F::zero(self.ctx());
        let mut jj = 0usize;
        loop {
            let e = -k1 - 2 * jj as i64;
            if e < q.lo {
                break;
            }
            if let Some(v) = q.get(e) {
                if jj > kap.known {
                    return Err(EngineError::Truncation {
                        g,
                        n: n1,
                        term: TermGroup::Kernel,
                        needed: 2 * jj as i64 - 1,
                        known: 2 * kap.known as i64 - 1,
                    });
                }
                acc.mul_add_assign(&kap.c[jj], v);
            }
            jj += 1;
        }
        Ok(acc)
    }
}

/// Every `(g, n)` needed to compute `targets`, and the subset used as a
/// lower factor.
pub(crate) fn closure(targets: &[(usize, usize)]) -> (BTreeSet<Gn>, BTreeSet<Gn>) {
    let mut all = BTreeSet::new();
    let mut factors = BTreeSet::new();
    let mut stack: Vec<(usize, usize)> = targets.to_vec();
    while let Some((g, n1)) = stack.pop() {
        if !all.insert((g, n1)) {
            continue;
        }
        let mut deps = Vec::new();
        let n = n1 - 1;
        if (g, n1) != (0, 3) && (g, n1) != (1, 1) {
            for g1 in 0..=g {
                for n_1 in 0..=n {
                    let (f1, f2) = ((g1, n_1 + 1), (g - g1, n - n_1 + 1));
                    if stable(f1.0, f1.1) && stable(f2.0, f2.1) {
                        deps.push(f1);
                        deps.push(f2);
                    }
                }
            }
            if g >= 1 {
                deps.push((g - 1, n + 2));
            }
            if n >= 1 && stable(g, n) {
                deps.push((g, n));
            }
        }
        for f in deps {
            factors.insert(f);
            stack.push(f);
        }
    }
    (all, factors)
}
