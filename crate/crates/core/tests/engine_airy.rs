use std::time::Instant;

use toprec_core::curve::builtin_airy;
use toprec_core::engine::{dim, euler, omega_eval, project_residue, tr_table, EngineError, Slot};
use toprec_core::oracle::Dvv;
use toprec_core::{Exact, LaurentSeries, Scalar, VarTag};

fn a(k: u16) -> Slot {
    Slot::new(0, k)
}

#[test]
fn base_cases() {
    let curve = builtin_airy::<Exact>(&());
    let t = tr_table(&curve, 1).unwrap();
    let w03 = t.get(0, 3).unwrap();
    assert_eq!(w03.len(), 1);
    assert_eq!(w03.coeff(&[a(0), a(0), a(0)]), Some(&Exact::ratio(-1, 2)));
    let w11 = t.get(1, 1).unwrap();
    assert_eq!(w11.len(), 1);
    assert_eq!(w11.coeff(&[a(2)]), Some(&Exact::ratio(-1, 16)));
    assert_eq!(w11.deepest_exponent(), Some(-4));
}

#[test]
fn matches_intersection_numbers() {
    let start = Instant::now();
    let curve = builtin_airy::<Exact>(&());
    let t = tr_table(&curve, 8).unwrap();
    // c = A^{2g−2+n} B^n ∏(2d_i+1)!! ⟨τ_d⟩ with A B³ = c₀₃ and A B = 8 c₁₁.
    let c03 = t.get(0, 3).unwrap().coeff(&[a(0), a(0), a(0)]).unwrap().clone();
    let c11 = t.get(1, 1).unwrap().coeff(&[a(2)]).unwrap().clone();
    let b = (c03.clone() / (c11.clone() * Exact::int(8))).sqrt_exact().expect("rational normalization");
    let big_a = c11 * Exact::int(8) / b.clone();
    let mut dvv = Dvv::new();
    let mut checked = 0;
    for form in t.iter() {
        let (g, n) = (form.g, form.n);
        // Every admissible key, not only the stored ones.
        let d = dim(g, n) as usize;
        for ks in partitions(d, n) {
            let key: Vec<Slot> = ks.iter().map(|&k| a(2 * k as u16)).collect();
            let tau = dvv.get(g, &ks);
            let mut expect = Exact::real(tau) * big_a.pow(&(), euler(g, n) as u32) * b.pow(&(), n as u32);
            for k in &ks {
                expect = expect * Exact::int(double_factorial(2 * *k as i64 + 1));
            }
            let got = form.coeff(&key).cloned().unwrap_or(Exact::int(0));
            assert_eq!(got, expect, "g = {g}, n = {n}, key = {ks:?}");
            checked += 1;
        }
        assert!(form.iter().all(|(k, _)| k.iter().map(|s| s.k as usize / 2).sum::<usize>() == d));
    }
    assert!(checked > 100);
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn pole_depth_is_attained() {
    let curve = builtin_airy::<Exact>(&());
    let t = tr_table(&curve, 6).unwrap();
    for form in t.iter() {
        assert_eq!(form.deepest_exponent(), Some(form.polar_floor()), "g = {}, n = {}", form.g, form.n);
    }
}

#[test]
fn evaluation_of_one_point_form() {
    let curve = builtin_airy::<Exact>(&());
    let t = tr_table(&curve, 1).unwrap();
    let w11 = t.get(1, 1).unwrap();
    assert_eq!(omega_eval(&curve, w11, &[(0, Exact::ratio(1, 4))]).unwrap(), Exact::int(-16));
    assert!(matches!(omega_eval(&curve, w11, &[(0, Exact::ratio(3, 4))]), Err(EngineError::OutsideDisc { .. })));
    assert!(matches!(omega_eval(&curve, w11, &[(0, Exact::int(0))]), Err(EngineError::ZeroZeta)));
    let w03 = t.get(0, 3).unwrap();
    let p = [(0, Exact::ratio(1, 5)), (0, Exact::ratio(-1, 3)), (0, Exact::ratio(1, 7))];
    let q = [p[2].clone(), p[0].clone(), p[1].clone()];
    assert_eq!(omega_eval(&curve, w03, &p).unwrap(), omega_eval(&curve, w03, &q).unwrap());
}

#[test]
fn residue_projection() {
    let curve = builtin_airy::<Exact>(&());
    let zero = LaurentSeries::zero(&(), VarTag(0), None);
    assert!(project_residue(&curve, 0, &zero, 4).unwrap().is_empty());
    let q = LaurentSeries::monomial(&(), VarTag(0), Exact::ratio(-1, 4), -2, None);
    let out = project_residue(&curve, 0, &q, 4).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out.get(&(0, -4)), Some(&Exact::ratio(-1, 16)));
    let even = LaurentSeries::from_terms(&(), VarTag(0), [(-6, Exact::int(3)), (-2, Exact::int(1)), (0, Exact::int(5))], None);
    let out = project_residue(&curve, 0, &even, 4).unwrap();
    assert!(out.keys().all(|(_, e)| e % 2 == 0));
    assert!(!out.contains_key(&(0, -1)));
}

fn partitions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in (0..=max.min(total)).rev() {
            cur.push(k);
            rec(total - k, parts - 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, total, &mut Vec::new(), &mut out);
    out
}

fn double_factorial(n: i64) -> i64 {
    (1..=n).rev().step_by(2).product::<i64>().max(1)
}
