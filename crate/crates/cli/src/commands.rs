use std::collections::BTreeMap;
use std::fmt::{Display, Write as _};
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use toprec_core::analysis::{borel_coeffs, fit_growth, AnalysisError, BorelSeries, GrowthFit};
use toprec_core::bounds::{
    check_fg_bound, estimate_constants, factorial_bound_check, sample_tuples, verify_proof_identities, BoundCheckReport, BoundConstants, CgnTable,
    FactorialBoundParams, FgBoundReport, OmegaBoundChecker, SamplingConfig, SamplingMeta,
};
use toprec_core::curve::builtin;
use toprec_core::engine::{build, compute_fg, euler, EngineOptions, OmegaForm, TrTable};
use toprec_core::scalar::DEFAULT_FLOAT_BITS;
use toprec_core::{Exact, Float, FloatCtx, Scalar, ScalarMode, SpectralCurveLocal};

use crate::config::{Cli, CommandKind, CurveSource, RunConfig};
use crate::error::{CliError, ExitCode};
use crate::report::{sha256_hex, Meta, Writer};
use crate::spec::{serialize_curve, CurveSpec};

/// Result of a command that ran to completion.
#[derive(Debug)]
pub struct Outcome {
    pub code: ExitCode,
    pub summary: String,
    pub files: Vec<PathBuf>,
}

pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let mut cfg = RunConfig::from_command(cli.command)?;
    if let CurveSource::Csv(path) = &cfg.source {
        let path = path.clone();
        return analyze_csv(&cfg, &path);
    }
    let spec = match &cfg.source {
        CurveSource::Spec(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            let parsed = CurveSpec::from_json(&text).map_err(|source| CliError::Spec { path: path.clone(), source })?;
            Some((path.clone(), text, parsed))
        }
        _ => None,
    };
    let mode = match (&cfg.mode, &spec) {
        (Some(m), _) => m.parse()?,
        (None, Some((path, text, s))) => s.mode(text).map_err(|source| CliError::Spec { path: path.clone(), source })?.unwrap_or(ScalarMode::Exact),
        // analyze only reads F_g as f64, so a builtin run defaults to float
        (None, None) if cfg.command == CommandKind::Analyze => ScalarMode::Float { bits: DEFAULT_FLOAT_BITS },
        (None, None) => ScalarMode::Exact,
    };
    cfg.mode = Some(mode.to_string());
    let ctx = Ctx { cfg: &cfg, spec: spec.as_ref().map(|(p, t, s)| (p.as_path(), t.as_str(), s)) };
    match mode {
        ScalarMode::Exact => ctx.dispatch::<Exact>(&()),
        ScalarMode::Float { bits } => ctx.dispatch::<Float>(&FloatCtx::new(bits)?),
    }
}

struct Ctx<'a> {
    cfg: &'a RunConfig,
    spec: Option<(&'a Path, &'a str, &'a CurveSpec)>,
}

/// `(g, n)` with `1 ≤ 2g − 2 + n ≤ chi_max`, `n ≥ 1`, then `(g, 1)` for
/// `2 ≤ g ≤ g_max`.
fn targets(cfg: &RunConfig) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for chi in 1..=cfg.chi_max.unwrap_or(0) as i64 {
        for g in 0..=((chi + 1) / 2) as usize {
            let n = chi - 2 * g as i64 + 2;
            if n >= 1 {
                out.push((g, n as usize));
            }
        }
    }
    out.extend((2..=cfg.g_max.unwrap_or(0)).map(|g| (g, 1)));
    out
}

/// Truncation order for lowering builtins: `6 g_max + 8`, raised to
/// `2 d_max + 8` when the table reaches deeper poles.
pub fn default_trunc(cfg: &RunConfig) -> usize {
    let d_max = targets(cfg).iter().map(|&(g, n)| 3 * g + n).max().unwrap_or(3).saturating_sub(3);
    (6 * cfg.g_max.unwrap_or(0) + 8).max(2 * d_max + 8)
}

impl Ctx<'_> {
    fn trunc(&self) -> Option<usize> {
        match self.cfg.source {
            CurveSource::Builtin(_) => Some(self.cfg.trunc.unwrap_or_else(|| default_trunc(self.cfg))),
            _ => None,
        }
    }

    fn load<F: Scalar>(&self, ctx: &F::Ctx, trunc: Option<usize>) -> Result<SpectralCurveLocal<F>, CliError> {
        match (&self.cfg.source, self.spec) {
            (CurveSource::Builtin(name), _) => {
                let curve = builtin(ctx, name, trunc.unwrap_or(0)).ok_or_else(|| CliError::Config(format!("unknown builtin `{name}`")))?;
                Ok(curve.validated()?)
            }
            (_, Some((path, text, spec))) => spec.to_curve(ctx, text).map_err(|source| CliError::Spec { path: path.to_path_buf(), source }),
            _ => Err(CliError::Config("no curve source".into())),
        }
    }

    fn dispatch<F: Scalar + Display>(&self, ctx: &F::Ctx) -> Result<Outcome, CliError> {
        let trunc = self.trunc();
        let curve = self.load::<F>(ctx, trunc)?;
        let meta = Meta::new(
            self.cfg,
            curve.name().to_string(),
            sha256_hex(serialize_curve(&curve).as_bytes()),
            F::mode(ctx).to_string(),
            curve.trunc_order(),
        );
        let table = build(&curve, &targets(self.cfg), EngineOptions::default())?;
        if self.cfg.recheck {
            if let Some(t) = trunc {
                let wider = build(&self.load::<F>(ctx, Some(t + 4))?, &targets(self.cfg), EngineOptions::default())?;
                recheck(&table, &wider)?;
            }
        }
        let mut fg = Vec::new();
        for g in 2..=self.cfg.g_max.unwrap_or(0) {
            fg.push((g, compute_fg(&curve, g, &table)?));
        }
        match self.cfg.command {
            CommandKind::Compute => compute(self.cfg, &meta, &curve, &table, &fg),
            CommandKind::Verify => verify(self.cfg, &meta, &curve, &table, &fg),
            CommandKind::Analyze => {
                let seq: Vec<(usize, f64)> = fg.iter().map(|(g, v)| (*g, v.to_c64().re)).collect();
                analyze(self.cfg, &meta, &seq)
            }
        }
    }
}

fn recheck<F: Scalar>(a: &TrTable<F>, b: &TrTable<F>) -> Result<(), CliError> {
    for form in a.iter() {
        let other = b.get(form.g, form.n);
        let same = other.is_some_and(|o| o.len() == form.len() && form.iter().all(|(k, v)| o.coeff(k) == Some(v)));
        if !same {
            return Err(CliError::Recheck(format!("ω_{{{},{}}} changed with truncation +4", form.g, form.n)));
        }
    }
    Ok(())
}

fn key_string<F: Scalar>(curve: &SpectralCurveLocal<F>, key: &[toprec_core::engine::Slot]) -> String {
    let pts = curve.points();
    key.iter().map(|s| format!("{}:{}", pts[s.point as usize].id, s.exponent())).collect::<Vec<_>>().join(";")
}

#[derive(Serialize)]
struct FormOut {
    g: usize,
    n: usize,
    polar_floor: i64,
    deepest_exponent: Option<i64>,
    terms: usize,
    /// `[key, coefficient]` pairs in key order.
    coefficients: Vec<(String, String)>,
}

#[derive(Serialize)]
struct OmegaFile<'a> {
    meta: &'a Meta,
    forms: Vec<FormOut>,
}

#[derive(Serialize)]
struct FgEntry {
    g: usize,
    value: String,
}

#[derive(Serialize)]
struct FgFile<'a> {
    meta: &'a Meta,
    free_energies: Vec<FgEntry>,
}

fn form_out<F: Scalar + Display>(curve: &SpectralCurveLocal<F>, form: &OmegaForm<F>) -> FormOut {
    FormOut {
        g: form.g,
        n: form.n,
        polar_floor: form.polar_floor(),
        deepest_exponent: form.deepest_exponent(),
        terms: form.len(),
        coefficients: form.iter().map(|(k, v)| (key_string(curve, k), v.to_string())).collect(),
    }
}

fn compute<F: Scalar + Display>(
    cfg: &RunConfig,
    meta: &Meta,
    curve: &SpectralCurveLocal<F>,
    table: &TrTable<F>,
    fg: &[(usize, F)],
) -> Result<Outcome, CliError> {
    let mut w = Writer::new(&cfg.out_dir)?;
    let chi_max = cfg.chi_max.unwrap_or(0) as i64;
    let forms: Vec<FormOut> = table.iter().filter(|f| euler(f.g, f.n) <= chi_max).map(|f| form_out(curve, f)).collect();
    let energies: Vec<FgEntry> = fg.iter().map(|(g, v)| FgEntry { g: *g, value: v.to_string() }).collect();
    match cfg.format {
        crate::config::Format::Json => {
            w.json("omega.json", &OmegaFile { meta, forms: forms.iter().map(clone_form).collect() })?;
            if !energies.is_empty() {
                w.json("fg.json", &FgFile { meta, free_energies: energies })?;
            }
        }
        crate::config::Format::Csv => {
            let rows: Vec<Vec<String>> = forms
                .iter()
                .flat_map(|f| f.coefficients.iter().map(move |(k, v)| vec![f.g.to_string(), f.n.to_string(), k.clone(), v.clone()]))
                .collect();
            w.csv("omega.csv", meta, &[], &["g", "n", "key", "coefficient"], &rows)?;
            if !energies.is_empty() {
                let rows: Vec<Vec<String>> = energies.iter().map(|e| vec![e.g.to_string(), e.value.clone()]).collect();
                w.csv("fg.csv", meta, &[], &["g", "value"], &rows)?;
            }
        }
    }
    let mut summary = format!("curve {}: {} forms\n", curve.name(), forms.len());
    for f in &forms {
        let deepest = f.deepest_exponent.map_or_else(|| "none".to_string(), |e| e.to_string());
        let _ = writeln!(summary, "  omega_{{{},{}}}: {} terms, deepest pole {} (floor {})", f.g, f.n, f.terms, deepest, f.polar_floor);
    }
    for (g, v) in fg {
        let _ = writeln!(summary, "  F_{g} = {v}");
    }
    Ok(Outcome { code: ExitCode::Ok, summary, files: w.written })
}

fn clone_form(f: &FormOut) -> FormOut {
    FormOut { g: f.g, n: f.n, polar_floor: f.polar_floor, deepest_exponent: f.deepest_exponent, terms: f.terms, coefficients: f.coefficients.clone() }
}

#[derive(Serialize)]
struct ConstantsOut {
    c_sup: f64,
    b_sup: f64,
    ctilde: f64,
    radius: f64,
    sampling: BTreeMap<&'static str, SamplingOut>,
}

#[derive(Serialize)]
struct SamplingOut {
    angles: usize,
    radii: usize,
    levels: usize,
    evaluations: u64,
    last_change: f64,
    converged: bool,
}

impl From<&SamplingMeta> for SamplingOut {
    fn from(m: &SamplingMeta) -> Self {
        SamplingOut {
            angles: m.angles,
            radii: m.radii,
            levels: m.levels,
            evaluations: m.evaluations,
            last_change: m.last_change,
            converged: m.converged,
        }
    }
}

#[derive(Serialize)]
struct SampleOut {
    /// `[disc id, Re ρ, Im ρ]` per point.
    points: Vec<(String, f64, f64)>,
    r_min: f64,
    lhs: f64,
    rhs: f64,
    margin: f64,
}

#[derive(Serialize)]
struct OmegaCheckOut {
    g: usize,
    n: usize,
    cgn: String,
    holds: bool,
    min_margin: f64,
    /// Smallest `rhs/lhs` over the samples.
    min_ratio: f64,
    samples: Vec<SampleOut>,
}

#[derive(Serialize)]
struct FactorialOut {
    g: usize,
    n: usize,
    cgn: String,
    ratio: f64,
    holds: bool,
}

#[derive(Serialize)]
struct IdentityOut {
    name: &'static str,
    holds: bool,
    counterexample: Option<(i64, i64)>,
}

#[derive(Serialize)]
struct FgCheckOut {
    g: usize,
    value: String,
    lhs: f64,
    rhs: f64,
    rhs_factorial: f64,
    margin: f64,
    margin_factorial: f64,
    holds: bool,
}

#[derive(Serialize)]
struct BoundsFile<'a> {
    meta: &'a Meta,
    e_enclosure: (String, String),
    constants: ConstantsOut,
    identities: Vec<IdentityOut>,
    factorial_bounds: Vec<FactorialOut>,
    omega_checks: Vec<OmegaCheckOut>,
    fg_checks: Vec<FgCheckOut>,
    violations: Vec<String>,
}

fn sample_seed(seed: u64, g: usize, n: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ ((g as u64) << 32 | n as u64)
}

fn verify<F: Scalar + Display>(
    cfg: &RunConfig,
    meta: &Meta,
    curve: &SpectralCurveLocal<F>,
    table: &TrTable<F>,
    fg: &[(usize, F)],
) -> Result<Outcome, CliError> {
    let constants: BoundConstants = estimate_constants(curve, &SamplingConfig::default())?;
    let params = FactorialBoundParams::default();
    let mut cgn = CgnTable::new();
    if let Some((g, n, v)) = &cfg.cgn_override {
        let value: BigRational = v.parse().map_err(|_| CliError::Config(format!("bad override value `{v}`")))?;
        cgn = cgn.with_override(*g, *n, value);
    }
    let mut violations = Vec::new();
    let chi_max = cfg.chi_max.unwrap_or(0) as i64;
    let ids: Vec<String> = curve.points().iter().map(|p| p.id.clone()).collect();

    let mut omega_checks = Vec::new();
    for form in table.iter().filter(|f| euler(f.g, f.n) <= chi_max) {
        let checker = OmegaBoundChecker::new(curve, form, &constants, &mut cgn)?;
        let mut samples = Vec::with_capacity(cfg.samples);
        for pts in sample_tuples(curve.num_points(), constants.radius, form.n, cfg.samples, sample_seed(cfg.seed, form.g, form.n)) {
            samples.push(checker.check(&pts)?);
        }
        let min_margin = samples.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        let min_ratio = samples.iter().map(|r| r.rhs / r.lhs).fold(f64::INFINITY, f64::min);
        let holds = samples.iter().all(BoundCheckReport::holds);
        if !holds {
            violations.push(format!("omega bound fails at (g, n) = ({}, {}), min margin {min_margin:e}", form.g, form.n));
        }
        omega_checks.push(OmegaCheckOut {
            g: form.g,
            n: form.n,
            cgn: cgn.get(form.g, form.n).to_string(),
            holds,
            min_margin,
            min_ratio,
            samples: samples.iter().map(|r| sample_out(r, &ids)).collect(),
        });
    }

    let max_2g_n = table.iter().map(|f| 2 * f.g + f.n).max().unwrap_or(0).max(16);
    let identities: Vec<IdentityOut> = verify_proof_identities(max_2g_n, &params)
        .into_iter()
        .map(|c| IdentityOut { name: c.name, holds: c.holds, counterexample: c.counterexample })
        .collect();
    for c in identities.iter().filter(|c| !c.holds) {
        violations.push(format!("identity `{}` fails at {:?}", c.name, c.counterexample));
    }
    let mut factorial_bounds = Vec::new();
    for g in 0..=max_2g_n / 2 {
        for n in 1..=max_2g_n - 2 * g {
            if 2 * g + n < 3 {
                continue;
            }
            let r = factorial_bound_check(g, n, &mut cgn, &params);
            if !r.holds {
                violations.push(format!("factorial bound fails at (g, n) = ({g}, {n}), ratio {:e}", r.ratio));
            }
            factorial_bounds.push(FactorialOut { g, n, cgn: r.cgn.to_string(), ratio: r.ratio, holds: r.holds });
        }
    }
    let mut fg_checks = Vec::new();
    for (g, v) in fg {
        let r: FgBoundReport = check_fg_bound(*g, v, &constants, &mut cgn, &params)?;
        if !r.holds() {
            violations.push(format!("F_g bound fails at g = {g}"));
        }
        fg_checks.push(FgCheckOut {
            g: *g,
            value: v.to_string(),
            lhs: r.lhs,
            rhs: r.rhs,
            rhs_factorial: r.rhs_factorial,
            margin: r.margin,
            margin_factorial: r.margin_factorial,
            holds: r.holds(),
        });
    }

    let sampling: BTreeMap<&'static str, SamplingOut> =
        [("B", (&constants.b_meta).into()), ("C", (&constants.c_meta).into()), ("Phi", (&constants.phi_meta).into())].into();
    let e = (params.e.lo.to_string(), params.e.hi.to_string());
    let mut w = Writer::new(&cfg.out_dir)?;
    match cfg.format {
        crate::config::Format::Json => {
            let file = BoundsFile {
                meta,
                e_enclosure: e,
                constants: ConstantsOut {
                    c_sup: constants.c_sup,
                    b_sup: constants.b_sup,
                    ctilde: constants.ctilde,
                    radius: constants.radius,
                    sampling,
                },
                identities,
                factorial_bounds,
                omega_checks,
                fg_checks,
                violations: violations.clone(),
            };
            w.json("bounds.json", &file)?;
        }
        crate::config::Format::Csv => {
            let extra = [
                ("e_enclosure", format!("[{}, {}]", e.0, e.1)),
                ("C", constants.c_sup.to_string()),
                ("B", constants.b_sup.to_string()),
                ("Ctilde", constants.ctilde.to_string()),
                ("R", constants.radius.to_string()),
                ("sampling_angles", constants.c_meta.angles.to_string()),
                ("sampling_radii", constants.c_meta.radii.to_string()),
                ("sampling_levels", constants.c_meta.levels.to_string()),
            ];
            let mut rows = Vec::new();
            for c in &omega_checks {
                for (i, s) in c.samples.iter().enumerate() {
                    let pts = s.points.iter().map(|(id, re, im)| format!("{id}:{re}{im:+}i")).collect::<Vec<_>>().join(";");
                    rows.push(vec![
                        c.g.to_string(),
                        c.n.to_string(),
                        i.to_string(),
                        pts,
                        s.r_min.to_string(),
                        s.lhs.to_string(),
                        s.rhs.to_string(),
                        s.margin.to_string(),
                    ]);
                }
            }
            w.csv("omega_bounds.csv", meta, &extra, &["g", "n", "sample", "points", "r_min", "lhs", "rhs", "margin"], &rows)?;
            let rows: Vec<Vec<String>> = factorial_bounds
                .iter()
                .map(|f| vec![f.g.to_string(), f.n.to_string(), f.cgn.clone(), f.ratio.to_string(), f.holds.to_string()])
                .collect();
            w.csv("factorial_bounds.csv", meta, &extra[..1], &["g", "n", "cgn", "ratio", "holds"], &rows)?;
            let rows: Vec<Vec<String>> = identities.iter().map(|c| vec![c.name.to_string(), c.holds.to_string()]).collect();
            w.csv("identities.csv", meta, &[], &["identity", "holds"], &rows)?;
            if !fg_checks.is_empty() {
                let rows: Vec<Vec<String>> = fg_checks
                    .iter()
                    .map(|f| {
                        vec![f.g.to_string(), f.value.clone(), f.lhs.to_string(), f.rhs.to_string(), f.rhs_factorial.to_string(), f.holds.to_string()]
                    })
                    .collect();
                w.csv("fg_bounds.csv", meta, &extra, &["g", "value", "lhs", "rhs", "rhs_factorial", "holds"], &rows)?;
            }
        }
    }
    let mut summary = format!(
        "curve {}: C = {:.9}, B = {:.9}, C~ = {:.9}, R = {}\n  omega checks: {} forms x {} samples\n",
        curve.name(),
        constants.c_sup,
        constants.b_sup,
        constants.ctilde,
        constants.radius,
        table.iter().filter(|f| euler(f.g, f.n) <= chi_max).count(),
        cfg.samples
    );
    let code = if violations.is_empty() {
        summary.push_str("  all bounds hold\n");
        ExitCode::Ok
    } else {
        for v in &violations {
            let _ = writeln!(summary, "  VIOLATION: {v}");
        }
        ExitCode::BoundViolated
    };
    Ok(Outcome { code, summary, files: w.written })
}

fn sample_out(r: &BoundCheckReport, ids: &[String]) -> SampleOut {
    SampleOut {
        points: r.points.iter().map(|(a, z): &(usize, Complex64)| (ids[*a].clone(), z.re, z.im)).collect(),
        r_min: r.r_min,
        lhs: r.lhs,
        rhs: r.rhs,
        margin: r.margin,
    }
}

#[derive(Serialize)]
struct FitOut {
    beta: f64,
    r_est: f64,
    offset: f64,
    residual: f64,
    g_range: (usize, usize),
    used: usize,
    scan: Vec<(f64, f64)>,
}

#[derive(Serialize)]
struct BorelOut {
    beta: f64,
    /// `null` when the transform is entire.
    radius_est: Option<f64>,
    entire: bool,
    coefficients: Vec<(usize, f64)>,
}

#[derive(Serialize)]
struct AnalysisFile<'a> {
    meta: &'a Meta,
    sequence: Vec<(usize, f64)>,
    fit: FitOut,
    borel: BorelOut,
}

fn analyze(cfg: &RunConfig, meta: &Meta, seq: &[(usize, f64)]) -> Result<Outcome, CliError> {
    let fit: GrowthFit = match fit_growth(seq, &cfg.beta_grid) {
        Ok(f) => f,
        Err(AnalysisError::Degenerate { nonzero: 0 }) => return Err(CliError::Degenerate("degenerate (all-zero) F_g sequence".into())),
        Err(AnalysisError::Degenerate { nonzero }) => {
            return Err(CliError::Degenerate(format!("degenerate F_g sequence: {nonzero} nonzero entries, at least 4 needed")))
        }
        Err(e) => return Err(e.into()),
    };
    let borel: BorelSeries = borel_coeffs(seq, fit.beta)?;
    let entire = borel.radius_est.is_infinite();
    let mut w = Writer::new(&cfg.out_dir)?;
    match cfg.format {
        crate::config::Format::Json => {
            let file = AnalysisFile {
                meta,
                sequence: seq.to_vec(),
                fit: FitOut {
                    beta: fit.beta,
                    r_est: fit.r_est,
                    offset: fit.offset,
                    residual: fit.residual,
                    g_range: fit.g_range,
                    used: fit.used,
                    scan: fit.scan.clone(),
                },
                borel: BorelOut {
                    beta: borel.beta,
                    radius_est: (!entire).then_some(borel.radius_est),
                    entire,
                    coefficients: borel.coefficients.clone(),
                },
            };
            w.json("analysis.json", &file)?;
        }
        crate::config::Format::Csv => {
            let extra = [
                ("beta", fit.beta.to_string()),
                ("r_est", fit.r_est.to_string()),
                ("offset", fit.offset.to_string()),
                ("residual", fit.residual.to_string()),
                ("radius_est", borel.radius_est.to_string()),
            ];
            let rows: Vec<Vec<String>> =
                seq.iter().zip(&borel.coefficients).map(|((g, v), (_, c))| vec![g.to_string(), v.to_string(), c.to_string()]).collect();
            w.csv("analysis.csv", meta, &extra, &["g", "value", "borel_coefficient"], &rows)?;
            let rows: Vec<Vec<String>> = fit.scan.iter().map(|(b, r)| vec![b.to_string(), r.to_string(), (*b == fit.beta).to_string()]).collect();
            w.csv("fit.csv", meta, &[], &["beta", "residual", "selected"], &rows)?;
        }
    }
    let radius = if entire { "infinite (entire)".to_string() } else { format!("{:.6}", borel.radius_est) };
    let summary = format!(
        "fit over g = {}..{}: beta = {}, r = {:.6}, residual = {:.3e}\n  Borel radius estimate: {radius}\n",
        fit.g_range.0, fit.g_range.1, fit.beta, fit.r_est, fit.residual
    );
    Ok(Outcome { code: ExitCode::Ok, summary, files: w.written })
}

/// Reads `g,value` rows; `#` lines are comments and a header row is
/// optional. Values may be decimals or `p/q`.
pub fn read_sequence(path: &Path, text: &str) -> Result<Vec<(usize, f64)>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).comment(Some(b'#')).trim(csv::Trim::All).flexible(false).from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Input { path: path.to_path_buf(), message: e.to_string() })?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        let bad = |m: String| CliError::Input { path: path.to_path_buf(), message: format!("line {line}: {m}") };
        if rec.len() != 2 {
            return Err(bad(format!("expected 2 columns, got {}", rec.len())));
        }
        if i == 0 && rec[0].eq_ignore_ascii_case("g") {
            continue;
        }
        let g: usize = rec[0].parse().map_err(|_| bad(format!("bad genus `{}`", &rec[0])))?;
        let v = match rec[1].parse::<f64>() {
            Ok(v) => v,
            Err(_) => toprec_core::scalar::parse_scalar::<Complex64>(&(), &rec[1]).map_err(|e| bad(e.to_string()))?.re,
        };
        out.push((g, v));
    }
    out.sort_by_key(|p| p.0);
    Ok(out)
}

fn analyze_csv(cfg: &RunConfig, path: &Path) -> Result<Outcome, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let seq = read_sequence(path, &text)?;
    let meta = Meta::new(cfg, path.display().to_string(), sha256_hex(text.as_bytes()), "f64".into(), None);
    analyze(cfg, &meta, &seq)
}
