use super::{EngineError, TermGroup, TrTable};
use crate::curve::SpectralCurveLocal;
use crate::scalar::Scalar;

/// `F_g = 1/(2g−2) Σ_a Res ω_{g,1}·Φ_a` with `dΦ_a = (y − y(a)) dx`.
///
/// With `x = x(a) + ζ²`, `Φ_a = Σ_{m≥1} 2 y_m ζ^{m+2}/(m+2)`, so a key
/// `(a, k)` contributes `c·2 y_{k−1}/(k+1)`. Regular parts of the basis
/// differentials never pair with `Φ_a` to give a residue.
pub fn compute_fg<F: Scalar>(curve: &SpectralCurveLocal<F>, g: usize, table: &TrTable<F>) -> Result<F, EngineError> {
    if g < 2 {
        return Err(EngineError::GenusTooSmall(g));
    }
    let ctx = curve.ctx();
    let form = table.form(g, 1)?;
    let mut acc = F::zero(ctx);
    for (key, c) in form.iter() {
        let s = key[0];
        if s.point as usize >= curve.num_points() {
            return Err(EngineError::UnknownPoint(s.point as usize));
        }
        let k = s.k as usize;
        if k < 2 {
            continue;
        }
        let y = curve.y(s.point as usize, k - 1).map_err(|e| EngineError::Truncation {
            g,
            n: 1,
            term: TermGroup::Kernel,
            needed: e.index as i64,
            known: e.trunc as i64,
        })?;
        let w = F::from_ratio(ctx, 2, k as i64 + 1);
        acc.mul_add_assign(&(y * &w), c);
    }
    Ok(acc / &F::from_i64(ctx, 2 * g as i64 - 2))
}
