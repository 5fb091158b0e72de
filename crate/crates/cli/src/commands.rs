use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use landau1d::binding::critical_charge;
use landau1d::eigensolve::{ground_state_with, DEFAULT_SEED};
use landau1d::landscape::{
    classify_regime, find_critical_points, locate_boundaries, section_profiles, RegimeBoundaries, RegimeReport, Region,
};
use landau1d::liebbound::{
    consistency_record, convexity_chain_scan, ionization_bound, pair_inequality_scan, DEFAULT_SCAN_SEED,
};
use landau1d::model::{assemble, default_half_width, max_spacing, w_surface, GridSpec, ModelParams};
use landau1d::quasirandom::golden_points;
use landau1d::specfun::{coulomb, g_bound, localization_error, nu, v0, v_cut, w_pair, AccuracyBudget, PotentialKind};
use landau1d::Error;

use crate::args::*;
use crate::output::{emit, write_atomic, Cell, Csv, RunRecord};
use crate::Context;

pub(crate) enum Failure {
    Usage(String),
    Compute(String),
}

impl From<String> for Failure {
    fn from(msg: String) -> Self {
        Failure::Usage(msg)
    }
}

type Outcome = std::result::Result<(), Failure>;

pub(crate) fn dispatch(cmd: &Command, ctx: &Context) -> Outcome {
    match cmd {
        Command::Potential(a) => potential(&ctx.resolve(a, &["potential"])?, ctx),
        Command::Surface(a) => surface(&ctx.resolve(a, &["surface"])?, ctx),
        Command::Spectrum(a) => spectrum(&ctx.resolve(a, &["spectrum"])?, ctx),
        Command::Bind(a) => bind(&ctx.resolve(a, &["bind"])?, ctx),
        Command::Zc(a) => zc(&ctx.resolve(a, &["zc"])?, ctx),
        Command::Landscape(LandscapeCommand::Profiles(a)) => profiles(&ctx.resolve(a, &["landscape", "profiles"])?, ctx),
        Command::Landscape(LandscapeCommand::CriticalPoints(a)) => {
            critical_points(&ctx.resolve(a, &["landscape", "critical-points"])?, ctx)
        }
        Command::Landscape(LandscapeCommand::Regime(a)) => regime(&ctx.resolve(a, &["landscape", "regime"])?, ctx),
        Command::Verify(VerifyCommand::Envelope(a)) => envelope(&ctx.resolve(a, &["verify", "envelope"])?, ctx),
        Command::Verify(VerifyCommand::Odes(a)) => odes(&ctx.resolve(a, &["verify", "odes"])?, ctx),
        Command::Verify(VerifyCommand::PairInequality(a)) => {
            pair_inequality(&ctx.resolve(a, &["verify", "pair-inequality"])?, ctx)
        }
        Command::Verify(VerifyCommand::ConvexityChain(a)) => {
            convexity_chain(&ctx.resolve(a, &["verify", "convexity-chain"])?, ctx)
        }
        Command::Bound(a) => bound(&ctx.resolve(a, &["bound"])?, ctx),
        Command::Consistency(a) => consistency(&ctx.resolve(a, &["consistency"])?, ctx),
    }
}

/// JSON record to `out` (stdout when absent); a core error is recorded and
/// then reported as a computational failure.
fn finish_json<C: Serialize, R: Serialize>(
    command: &str,
    seed: u64,
    config: &C,
    out: Option<&Path>,
    outcome: Result<R, Error>,
) -> Outcome {
    let failed = outcome.as_ref().err().map(|e| e.to_string());
    let rec = RunRecord::new(command, seed, config, outcome);
    emit(out, &rec.to_json().map_err(Failure::Compute)?).map_err(Failure::Compute)?;
    match failed {
        Some(msg) => Err(Failure::Compute(msg)),
        None => Ok(()),
    }
}

/// Table to `out` (stdout when absent) plus an optional JSON record
/// holding `summary`.
fn finish_csv<C: Serialize, S: Serialize>(
    command: &str,
    seed: u64,
    config: &C,
    out: Option<&Path>,
    record: Option<&Path>,
    outcome: Result<(Csv, S), Error>,
) -> Outcome {
    let (table, summary, failed) = match outcome {
        Ok((t, s)) => (Some(t), Ok(s), None),
        Err(e) => {
            let msg = e.to_string();
            (None, Err(e), Some(msg))
        }
    };
    if let Some(t) = table {
        emit(out, &t.finish()).map_err(Failure::Compute)?;
    }
    if let Some(p) = record {
        let rec = RunRecord::new(command, seed, config, summary);
        write_atomic(p, rec.to_json().map_err(Failure::Compute)?.as_bytes()).map_err(Failure::Compute)?;
    }
    match failed {
        Some(msg) => Err(Failure::Compute(msg)),
        None => Ok(()),
    }
}

fn sample_range(xmin: f64, xmax: f64, steps: usize) -> Result<Vec<f64>, Failure> {
    if !(xmin.is_finite() && xmax.is_finite() && xmin < xmax) {
        return Err(Failure::Usage(format!("need finite --xmin < --xmax, got {xmin} and {xmax}")));
    }
    if steps == 0 {
        return Err(Failure::Usage("--steps must be positive".into()));
    }
    let h = (xmax - xmin) / steps as f64;
    Ok((0..=steps).map(|i| if i == steps { xmax } else { xmin + i as f64 * h }).collect())
}

fn positive_count(n: usize, flag: &str) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Usage(format!("--{flag} must be positive")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableSummary {
    pub rows: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failures: Option<usize>,
}

fn potential(a: &PotentialArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SEED)?;
    let xs = sample_range(a.xmin, a.xmax, a.steps)?;
    let outcome = (|| -> Result<_, Error> {
        let f: Box<dyn Fn(f64) -> Result<f64, Error> + Sync> = match a.kind {
            Tabulated::V0 => Box::new(|x| Ok(v0(x))),
            Tabulated::Regularized => {
                let p = PotentialKind::Regularized { m: a.m, b: a.b }.prepare(AccuracyBudget::default())?;
                Box::new(move |x| p.eval(x))
            }
            Tabulated::Cutoff => Box::new(|x| Ok(v_cut(x))),
            Tabulated::Coulomb => Box::new(|x| Ok(coulomb(x))),
            Tabulated::GLower | Tabulated::GUpper => {
                PotentialKind::LowerBoundG { k: a.k }.validate()?;
                let k = a.k;
                Box::new(move |x: f64| Ok(g_bound(k, x.abs())))
            }
            Tabulated::Pair => {
                PotentialKind::Regularized { m: 0, b: a.b }.validate()?;
                let b = a.b;
                Box::new(move |x| Ok(w_pair(b, x)))
            }
            Tabulated::Nu => Box::new(|x| Ok(nu(x))),
            Tabulated::LocalizationError => Box::new(|x| Ok(localization_error(x))),
        };
        let values = xs.par_iter().map(|&x| f(x)).collect::<Result<Vec<_>, _>>()?;
        let mut t = Csv::new(&["x", "value"]);
        for (&x, &v) in xs.iter().zip(&values) {
            t.row(&[x.into(), v.into()]);
        }
        Ok((t, TableSummary { rows: xs.len(), failures: None }))
    })();
    finish_csv("potential", seed, a, a.out.as_deref(), a.record.as_deref(), outcome)
}

fn surface(a: &SurfaceArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SEED)?;
    let z = required(a.z, "Z")?;
    if !(a.extent > 0.0 && a.extent.is_finite()) {
        return Err(Failure::Usage("--extent must be positive".into()));
    }
    let xs = sample_range(-a.extent, a.extent, a.steps)?;
    let params = ModelParams::new(2, z, a.b).with_alpha(a.alpha).with_attraction(a.attraction.kind());
    let outcome = (|| -> Result<_, Error> {
        params.validate()?;
        let rows: Vec<Vec<f64>> = xs
            .par_iter()
            .map(|&x| xs.iter().map(|&y| w_surface(&params, x, y)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()?;
        let mut t = Csv::new(&["x", "y", "w"]);
        for (&x, row) in xs.iter().zip(&rows) {
            for (&y, &w) in xs.iter().zip(row) {
                t.row(&[x.into(), y.into(), w.into()]);
            }
        }
        Ok((t, TableSummary { rows: xs.len() * xs.len(), failures: None }))
    })();
    finish_csv("surface", seed, a, a.out.as_deref(), a.record.as_deref(), outcome)
}

fn spectrum(a: &SpectrumArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SEED)?;
    let params = a.model.params()?;
    let outcome = (|| {
        params.validate()?;
        let l = a.half_width.unwrap_or_else(|| default_half_width(&params));
        let grid = match a.points {
            Some(n) => GridSpec::new(l, n),
            None => GridSpec::with_max_spacing(l, max_spacing(&params, a.discretization.sampling())?),
        }
        .with_stencil(a.discretization.stencil())
        .with_sampling(a.discretization.sampling());
        let op = assemble(&params, &grid)?;
        let mut opts = a.solver.options(seed);
        opts.keep_vectors = a.vectors;
        ground_state_with(&op, a.k, &opts)
    })();
    finish_json("spectrum", seed, a, a.out.as_deref(), outcome)
}

fn bind(a: &BindArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SEED)?;
    let z = required(a.z, "Z")?;
    let params = ModelParams::new(2, z, a.b).with_alpha(a.alpha).with_attraction(a.attraction.kind());
    let outcome = landau1d::binding::binding_report(&params, &a.ladder.policy(seed));
    finish_json("bind", seed, a, a.out.as_deref(), outcome)
}

fn zc(a: &ZcArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SEED)?;
    let b = required(a.b, "B")?;
    let outcome = critical_charge(b, a.tol, &a.ladder.policy(seed));
    if let (Some(p), Ok(r)) = (a.trace.as_deref(), outcome.as_ref()) {
        let mut t = Csv::new(&["z", "margin", "error"]);
        for pt in r.sorted_trace() {
            t.row(&[pt.z.into(), pt.margin.into(), pt.error.into()]);
        }
        write_atomic(p, t.finish().as_bytes()).map_err(Failure::Compute)?;
    }
    finish_json("zc", seed, a, a.out.as_deref(), outcome)
}

fn profiles(a: &ProfilesArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SEED)?;
    if a.z.is_empty() {
        return Err(Failure::Usage("--Z needs at least one charge".into()));
    }
    let xs = sample_range(a.xmin, a.xmax, a.steps)?;
    let outcome = section_profiles(&a.z, a.b, &xs).map(|rows| {
        let mut t = Csv::new(&["z", "x", "w_opposite", "w_one_at_nucleus"]);
        for r in &rows {
            t.row(&[r.z.into(), r.x.into(), r.opposite.into(), r.one_at_nucleus.into()]);
        }
        (t, TableSummary { rows: rows.len(), failures: None })
    });
    finish_csv("landscape profiles", seed, a, a.out.as_deref(), a.record.as_deref(), outcome)
}

fn critical_points(a: &CriticalPointsArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SEED)?;
    let z = required(a.z, "Z")?;
    let region = match a.extent {
        Some(r) => Region::square(r),
        None => Region::default_for(a.b),
    };
    let outcome = find_critical_points(z, a.b, &region).map(|points| {
        let mut t = Csv::new(&[
            "x",
            "y",
            "value",
            "gradient_norm",
            "hessian_min",
            "hessian_max",
            "slope_min",
            "slope_max",
            "kind",
            "smooth",
        ]);
        let pair = |v: Option<[f64; 2]>| match v {
            Some([lo, hi]) => [Cell::Num(lo), Cell::Num(hi)],
            None => [Cell::Text(""), Cell::Text("")],
        };
        for p in &points {
            let [h0, h1] = pair(p.hessian_eigenvalues);
            let [s0, s1] = pair(p.directional_slopes);
            let kind = kind_name(p.kind);
            t.row(&[p.x.into(), p.y.into(), p.value.into(), p.gradient_norm.into(), h0, h1, s0, s1, kind.into(), p.smooth.into()]);
        }
        (t, TableSummary { rows: points.len(), failures: None })
    });
    finish_csv("landscape critical-points", seed, a, a.out.as_deref(), a.record.as_deref(), outcome)
}

fn kind_name(k: landau1d::landscape::PointKind) -> &'static str {
    use landau1d::landscape::PointKind::*;
    match k {
        Minimum => "minimum",
        Saddle => "saddle",
        Maximum => "maximum",
        Degenerate => "degenerate",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeOutput {
    pub report: RegimeReport<f64>,
    pub boundaries: RegimeBoundaries<f64>,
}

fn regime(a: &RegimeArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SEED)?;
    let z = required(a.z, "Z")?;
    let outcome = classify_regime(z, a.b).and_then(|report| Ok(RegimeOutput { report, boundaries: locate_boundaries(a.b)? }));
    finish_json("landscape regime", seed, a, a.out.as_deref(), outcome)
}

fn envelope(a: &EnvelopeArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SCAN_SEED)?;
    positive_count(a.samples, "samples")?;
    if !(a.xmax > 0.0 && a.xmax.is_finite()) {
        return Err(Failure::Usage("--xmax must be positive".into()));
    }
    let pi = std::f64::consts::PI;
    let rows: Vec<_> = golden_points(a.samples, 0.0, a.xmax, seed)
        .into_par_iter()
        .filter(|&x| x > 0.0)
        .map(|x| {
            let (v, g3, g4, gpi) = (v0(x), g_bound(3.0, x), g_bound(4.0, x), g_bound(pi, x));
            (x, v, g3, g4, gpi, g3 < v && v < g4 && gpi < v)
        })
        .collect();
    let failures = rows.iter().filter(|r| !r.5).count();
    let mut t = Csv::new(&["x", "v0", "g3", "g4", "g_pi", "pass"]);
    let mut written = 0;
    for &(x, v, g3, g4, gpi, pass) in rows.iter().filter(|r| !r.5).chain(rows.iter().filter(|r| r.5)) {
        if a.failures_only && pass {
            continue;
        }
        t.row(&[x.into(), v.into(), g3.into(), g4.into(), gpi.into(), pass.into()]);
        written += 1;
    }
    let summary = TableSummary { rows: written, failures: Some(failures) };
    finish_csv("verify envelope", seed, a, a.out.as_deref(), a.record.as_deref(), Ok((t, summary)))
}

fn odes(a: &OdesArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SCAN_SEED)?;
    positive_count(a.samples, "samples")?;
    if !(a.xmax > 0.0 && a.xmax.is_finite() && a.step > 0.0 && a.tol > 0.0) {
        return Err(Failure::Usage("--xmax, --step and --tol must be positive".into()));
    }
    let h = a.step;
    // both ODEs hold on x > 0; keep the stencil clear of the kink at 0
    let rows: Vec<_> = golden_points(a.samples, 2.0 * h, a.xmax, seed)
        .into_par_iter()
        .map(|x| {
            let dv = (v0(x + h) - v0(x - h)) / (2.0 * h);
            let dn = (nu(x + h) - nu(x - h)) / (2.0 * h);
            let rv = dv - 2.0 * (x * v0(x) - 1.0);
            let rn = dn - 2.0 * nu(x) * (nu(x) - x);
            (x, rv, rn, rv.abs() <= a.tol && rn.abs() <= a.tol)
        })
        .collect();
    let failures = rows.iter().filter(|r| !r.3).count();
    let mut t = Csv::new(&["x", "v0_residual", "nu_residual", "pass"]);
    let mut written = 0;
    for &(x, rv, rn, pass) in rows.iter().filter(|r| !r.3).chain(rows.iter().filter(|r| r.3)) {
        if a.failures_only && pass {
            continue;
        }
        t.row(&[x.into(), rv.into(), rn.into(), pass.into()]);
        written += 1;
    }
    let summary = TableSummary { rows: written, failures: Some(failures) };
    finish_csv("verify odes", seed, a, a.out.as_deref(), a.record.as_deref(), Ok((t, summary)))
}

fn pair_inequality(a: &PairArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SCAN_SEED)?;
    positive_count(a.samples, "samples")?;
    let outcome = pair_inequality_scan(&a.kind.kind(), a.samples, a.range, seed).map(|samples| {
        let failures = samples.iter().filter(|s| !s.pass).count();
        let mut t = Csv::new(&["x", "y", "lhs", "pass"]);
        let mut written = 0;
        for s in samples.iter().filter(|s| !a.failures_only || !s.pass) {
            t.row(&[s.x.into(), s.y.into(), s.lhs.into(), s.pass.into()]);
            written += 1;
        }
        (t, TableSummary { rows: written, failures: Some(failures) })
    });
    finish_csv("verify pair-inequality", seed, a, a.out.as_deref(), a.record.as_deref(), outcome)
}

fn convexity_chain(a: &ChainArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SCAN_SEED)?;
    positive_count(a.samples, "samples")?;
    if !(a.range > 0.0 && a.range.is_finite()) {
        return Err(Failure::Usage("--range must be positive".into()));
    }
    let samples = convexity_chain_scan(a.samples, a.range, seed);
    let failures = samples.iter().filter(|s| !s.pass).count();
    let mut t = Csv::new(&["x", "w", "lhs", "mid", "rhs", "pass"]);
    let mut written = 0;
    for s in samples.iter().filter(|s| !a.failures_only || !s.pass) {
        t.row(&[s.x.into(), s.w.into(), s.lhs.into(), s.mid.into(), s.rhs.into(), s.pass.into()]);
        written += 1;
    }
    let summary = TableSummary { rows: written, failures: Some(failures) };
    finish_csv("verify convexity-chain", seed, a, a.out.as_deref(), a.record.as_deref(), Ok((t, summary)))
}

fn bound(a: &BoundArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SEED)?;
    let z = required(a.z, "Z")?;
    let b = required(a.b, "B")?;
    finish_json("bound", seed, a, a.out.as_deref(), ionization_bound(z, b, a.kind.kind()))
}

fn consistency(a: &ConsistencyArgs, ctx: &Context) -> Outcome {
    let seed = ctx.seed(DEFAULT_SEED)?;
    if a.z.is_empty() || a.b.is_empty() {
        return Err(Failure::Usage("--Z and --B need at least one value each".into()));
    }
    let policy = a.ladder.policy(seed);
    let lattice: Vec<(f64, f64)> = a.z.iter().flat_map(|&z| a.b.iter().map(move |&b| (z, b))).collect();
    let outcome = lattice.par_iter().map(|&(z, b)| consistency_record(z, b, &policy)).collect::<Result<Vec<_>, _>>();
    finish_json("consistency", seed, a, a.out.as_deref(), outcome)
}
