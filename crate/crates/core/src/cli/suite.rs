//! Runs the selected experiments and writes the report bundle.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::bounds::{
    constants, fourier_split_diag, lemma2_from_parts, loglog_slope, scaling_experiment,
    theorem1_from_parts, BoundReport, ConstantsRegistry, Resources, ScalingReport, SplitDiagnostic,
};
use crate::cli::config::{FamilyKind, RunConfig};
use crate::cli::svg::{emit_svg, power_line, Plot, Series, Style};
use crate::geometry::{c_r, lemma3_sweep, lemma4_sweep, Lemma3Row, Lemma4Row};
use crate::kinetic::{
    bump_sources, duhamel_solve_with, materialize_average, transport_residual, AverageGrid4, BumpParams,
    DuhamelSolution, PhasePoint, ScalarField7, SupportBox, TransportPair, ZeroField,
};
use crate::norms::{fft4_padded, gagliardo_mc, hs_norm_fourier, lp_norm_phase, seminorm_mc, NormEstimate, Variant};
use crate::numerics::{counter_uniform, CompositeGaussLegendre};
use crate::{Error, Result};

/// Per-point slopes of the finite-difference residual of one source.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportRow {
    pub source: usize,
    pub steps: Vec<f64>,
    /// Residual RMS over the points, per step.
    pub rms: Vec<f64>,
    pub slopes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// Double-integral value over the Fourier value, per field.
    pub ratios: Vec<f64>,
    /// Same with the small-offset bias added back.
    pub corrected_ratios: Vec<f64>,
    pub reference: f64,
    pub spread: f64,
    pub corrected_spread: f64,
}

/// Content of `report.json`; free of timings so that reruns compare equal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub version: String,
    pub config: RunConfig,
    pub constants: Option<ConstantsRegistry>,
    pub reports: Vec<BoundReport>,
    pub lemma3: Vec<Lemma3Row>,
    pub lemma4: Vec<Lemma4Row>,
    pub transport: Vec<TransportRow>,
    pub scaling: Option<ScalingReport>,
    pub split: Vec<SplitDiagnostic>,
    pub equivalence: Option<EquivalenceReport>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&BoundReport> {
        self.reports.iter().filter(|r| !r.pass).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::invalid("report", e.to_string()))
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("name,lhs,rhs,margin,mc_error,pass\n");
        for r in &self.reports {
            let _ = writeln!(out, "{},{:e},{:e},{:e},{:e},{}", r.name, r.lhs, r.rhs, r.margin, r.mc_error, r.pass);
        }
        out
    }
}

pub struct SuiteOutcome {
    pub report: SuiteReport,
    pub timings: Vec<(String, Duration)>,
}

/// Lazily built sources and cached grids shared by the experiments.
struct Workbench<'a> {
    cfg: &'a RunConfig,
    domain: SupportBox,
    res: Resources,
    pairs: Vec<ScalarField7>,
    bumps: Vec<ScalarField7>,
    bump_params: Vec<BumpParams>,
    undamped: BTreeMap<usize, Arc<AverageGrid4>>,
    solutions: BTreeMap<usize, Arc<DuhamelSolution>>,
    phase_norms: BTreeMap<(usize, u64), (NormEstimate, NormEstimate)>,
}

impl<'a> Workbench<'a> {
    fn new(cfg: &'a RunConfig) -> Result<Self> {
        let domain = SupportBox::cube_domain(cfg.horizon, cfg.eps0, cfg.half_extent, cfg.radius)?;
        let mut res = Resources::new(cfg.radius, cfg.grid.clone());
        res.phase_points = cfg.budget.phase_points;
        res.pair_points = cfg.budget.pair_points;
        res.shifts = cfg.budget.shifts;
        res.padding = cfg.budget.padding;
        res.seed = cfg.seed;
        Ok(Workbench {
            cfg,
            domain,
            res,
            pairs: Vec::new(),
            bumps: Vec::new(),
            bump_params: Vec::new(),
            undamped: BTreeMap::new(),
            solutions: BTreeMap::new(),
            phase_norms: BTreeMap::new(),
        })
    }

    fn zero(&self) -> bool {
        self.cfg.family.kind == FamilyKind::Zero
    }

    fn pair_params(&self, n: usize) -> Result<Vec<TransportPair>> {
        crate::kinetic::transported_sources(&self.domain, n, self.cfg.family.seed)
    }

    /// First `n` transport-pair sources (zero fields for the zero family).
    fn pair_sources(&mut self, n: usize) -> Result<Vec<ScalarField7>> {
        if self.pairs.len() < n {
            self.pairs = if self.zero() {
                vec![ZeroField::shared(self.domain); n]
            } else {
                self.pair_params(n)?.iter().map(|p| p.source()).collect()
            };
        }
        Ok(self.pairs[..n].to_vec())
    }

    /// First `n` tensor-bump sources with their parameters.
    fn bump_sources(&mut self, n: usize) -> Result<Vec<ScalarField7>> {
        if self.bumps.len() < n {
            if self.zero() {
                self.bumps = vec![ZeroField::shared(self.domain); n];
            } else {
                let b = bump_sources(&self.domain, n, self.cfg.family.seed)?;
                self.bump_params = b.iter().map(|x| *x.params()).collect();
                self.bumps = b.into_iter().map(|x| x.shared()).collect();
            }
        }
        Ok(self.bumps[..n].to_vec())
    }

    fn time_rule(&self) -> Result<CompositeGaussLegendre> {
        CompositeGaussLegendre::new(self.cfg.grid.time_order, self.cfg.horizon / self.cfg.grid.time_panels as f64)
    }

    fn undamped_grid(&mut self, k: usize) -> Result<Arc<AverageGrid4>> {
        if let Some(g) = self.undamped.get(&k) {
            return Ok(g.clone());
        }
        let f = self.pair_sources(k + 1)?[k].clone();
        let g = Arc::new(materialize_average(f, &self.res.grid, false)?);
        self.undamped.insert(k, g.clone());
        Ok(g)
    }

    fn solution(&mut self, k: usize) -> Result<Arc<DuhamelSolution>> {
        if let Some(u) = self.solutions.get(&k) {
            return Ok(u.clone());
        }
        let f = self.pair_sources(k + 1)?[k].clone();
        let u = Arc::new(duhamel_solve_with(f, false, self.time_rule()?)?);
        self.solutions.insert(k, u.clone());
        Ok(u)
    }

    /// `(‖u‖_p, ‖f‖_p)` of pair `k`.
    fn norms(&mut self, k: usize, p: f64) -> Result<(NormEstimate, NormEstimate)> {
        let key = (k, p.to_bits());
        if let Some(n) = self.phase_norms.get(&key) {
            return Ok(*n);
        }
        let u = self.solution(k)?;
        let f = self.pair_sources(k + 1)?[k].clone();
        let sampler = self.res.phase_sampler();
        let n = (lp_norm_phase(u.as_ref(), p, &sampler)?, lp_norm_phase(f.as_ref(), p, &sampler)?);
        self.phase_norms.insert(key, n);
        Ok(n)
    }
}

fn run_lemma3(cfg: &RunConfig, out: &mut SuiteReport) -> Result<()> {
    let s = &cfg.slices;
    let rows = lemma3_sweep(cfg.radius, s.directions, &s.epsilons, s.points, s.seed)?;
    for (i, r) in rows.iter().enumerate() {
        let dir = i / s.epsilons.len();
        out.reports.push(
            BoundReport::new(format!("lemma3[dir={dir},eps={}]", r.epsilon), r.measure, r.bound, r.std_error)
                .with("nonempty", r.nonempty),
        );
    }
    out.lemma3 = rows;
    Ok(())
}

fn run_lemma4(cfg: &RunConfig, out: &mut SuiteReport) -> Result<()> {
    let s = &cfg.slices;
    let rows = lemma4_sweep(cfg.radius, s.directions, &s.epsilons, s.points, s.seed)?;
    for (i, r) in rows.iter().enumerate() {
        let dir = i / s.epsilons.len();
        let tag = format!("dir={dir},eps={}", r.epsilon);
        let mut bound = BoundReport::new(format!("lemma4/bound[{tag}]"), r.reduced, r.bound, 0.0);
        bound.pass = r.bound_holds();
        out.reports.push(bound);
        out.reports.push(
            BoundReport::new(format!("lemma4/agree[{tag}]"), (r.mc - r.reduced).abs(), 0.0, r.mc_std_error)
                .with("mc", r.mc)
                .with("reduced", r.reduced),
        );
    }
    out.lemma4 = rows;
    Ok(())
}

fn run_transport(bench: &mut Workbench, out: &mut SuiteReport) -> Result<()> {
    let cfg = bench.cfg;
    let tc = &cfg.transport;
    let sources = bench.bump_sources(tc.sources)?;
    let steps: Vec<f64> = (0..4).map(|i| tc.h0 / f64::powi(2.0, i)).collect();
    for (k, f) in sources.iter().enumerate() {
        let u = duhamel_solve_with(f.clone(), false, bench.time_rule()?)?;
        let points: Vec<PhasePoint> = match bench.bump_params.get(k) {
            Some(bp) => (0..tc.points).map(|i| interior_point(bp, cfg.seed, k, i)).collect(),
            None => (0..tc.points)
                .map(|i| PhasePoint::new(0.5 * cfg.horizon, [0.0; 3], [0.1 * i as f64 / tc.points as f64, 0.0, 0.0]))
                .collect(),
        };
        let mut rms = Vec::with_capacity(steps.len());
        let mut per_point = vec![Vec::with_capacity(steps.len()); points.len()];
        for &h in &steps {
            let mut acc = 0.0;
            for (j, pt) in points.iter().enumerate() {
                let r = transport_residual(&u, f.as_ref(), pt, h)?;
                per_point[j].push(r.abs());
                acc += r * r;
            }
            rms.push((acc / points.len() as f64).sqrt());
        }
        let slopes: Vec<f64> = per_point
            .iter()
            .map(|r| if r.iter().all(|v| *v > 0.0) { loglog_slope(&steps, r) } else { 2.0 })
            .collect();
        let worst = slopes.iter().map(|s| (s - 2.0).abs()).fold(0.0, f64::max);
        let rms_slope = if rms.iter().all(|v| *v > 0.0) { loglog_slope(&steps, &rms) } else { 2.0 };
        out.reports.push(
            BoundReport::new(format!("transport[src={k}]"), worst, 0.2, 0.0)
                .with("rms_slope", rms_slope)
                .with("min_slope", slopes.iter().cloned().fold(f64::INFINITY, f64::min))
                .with("max_slope", slopes.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
        );
        out.transport.push(TransportRow {
            source: k,
            steps: steps.clone(),
            rms,
            slopes,
        });
    }
    Ok(())
}

/// Deterministic point in the inner half of the bump support.
fn interior_point(bp: &BumpParams, seed: u64, source: usize, i: usize) -> PhasePoint {
    let stream = 0x7472_616e << 16 | source as u64;
    let u = |c: u64| 2.0 * counter_uniform(seed, stream, 8 * i as u64 + c) - 1.0;
    let t = bp.t_center + 0.5 * bp.t_halfwidth * u(0);
    let x = [
        bp.x_center[0] + 0.3 * bp.x_radius * u(1),
        bp.x_center[1] + 0.3 * bp.x_radius * u(2),
        bp.x_center[2] + 0.3 * bp.x_radius * u(3),
    ];
    let p = [
        bp.p_center[0] + 0.3 * bp.p_radius * u(4),
        bp.p_center[1] + 0.3 * bp.p_radius * u(5),
        bp.p_center[2] + 0.3 * bp.p_radius * u(6),
    ];
    PhasePoint::new(t, x, p)
}

fn run_lemma2(bench: &mut Workbench, out: &mut SuiteReport) -> Result<()> {
    for k in 0..bench.cfg.family.count {
        let grid = bench.undamped_grid(k)?;
        let (nu, nf) = bench.norms(k, 2.0)?;
        let r = lemma2_from_parts(&grid, &nu, &nf, &bench.res)?;
        out.reports.push(BoundReport {
            name: format!("lemma2[src={k}]"),
            ..r
        });
    }
    let worst = out
        .reports
        .iter()
        .filter(|r| r.name.starts_with("lemma2["))
        .filter_map(|r| r.parameters.get("ratio").and_then(|v| v.as_f64()))
        .fold(0.0, f64::max);
    out.notes.push(format!("lemma2: largest lhs/rhs ratio {worst:e}"));
    Ok(())
}

fn run_lq(bench: &mut Workbench, out: &mut SuiteReport) -> Result<()> {
    let cfg = bench.cfg;
    for (k, h) in bench.bump_sources(cfg.lq.sources)?.into_iter().enumerate() {
        let grid = materialize_average(h.clone(), &bench.res.grid, true)?;
        for &q in &cfg.lq.q {
            let r = crate::bounds::lq_bound_on_grid(&grid, h.clone(), q, &bench.res)?;
            out.reports.push(BoundReport {
                name: format!("{}[src={k}]", r.name),
                ..r
            });
        }
    }
    Ok(())
}

fn run_theorem1(bench: &mut Workbench, out: &mut SuiteReport) -> Result<()> {
    let cfg = bench.cfg;
    for k in 0..cfg.theorem1.sources {
        let grid = bench.undamped_grid(k)?;
        for &[p, s] in &cfg.theorem1.pairs {
            let (nu, nf) = bench.norms(k, p)?;
            let est = gagliardo_mc(&grid, s, p, Variant::Paper, &bench.res.pair_sampler())?;
            let r = theorem1_from_parts(&est, &nu, &nf, cfg.horizon, cfg.radius, &grid.meta.source)?;
            out.reports.push(BoundReport {
                name: format!("{}[src={k}]", r.name),
                ..r
            });
        }
    }
    Ok(())
}

/// Pair 0 of the family moved to `x = 0` and `t = λ_min T/2`, so that every
/// dilated time window stays inside `(0, T)`.
fn scaling_source(bench: &Workbench) -> Result<ScalarField7> {
    let cfg = bench.cfg;
    let lam_min = cfg.scaling.lambdas.iter().cloned().fold(f64::INFINITY, f64::min);
    let pair = bench.pair_params(1)?.remove(0);
    let mut params = pair.params;
    params.x_center = [0.0; 3];
    params.t_center = 0.5 * lam_min * cfg.horizon;
    if params.t_halfwidth > params.t_center {
        return Err(Error::invalid("scaling.lambdas", "smallest lambda leaves no room for the source window"));
    }
    let wide = SupportBox::new(
        cfg.horizon,
        (0.0, cfg.horizon),
        [-4.0 * cfg.half_extent; 3],
        [4.0 * cfg.half_extent; 3],
        cfg.radius,
    )?;
    Ok(TransportPair::new(&wide, params, pair.drift)?.source())
}

fn run_scaling(bench: &mut Workbench, out: &mut SuiteReport) -> Result<()> {
    let cfg = bench.cfg;
    if bench.zero() {
        out.notes.push("scaling: skipped, the zero field has no dilation exponent".into());
        return Ok(());
    }
    let f = scaling_source(bench)?;
    let mut res = bench.res.clone();
    if let Some(g) = &cfg.scaling.grid {
        res.grid = g.clone();
    }
    let sc = scaling_experiment(f, &cfg.scaling.lambdas, cfg.scaling.s, cfg.scaling.p, cfg.scaling.frame, &res)?;
    out.reports.extend(sc.reports(cfg.scaling.tolerance));
    out.notes.push("scaling: family pair 0 recentred at x = 0, t = lambda_min T / 2".into());
    out.scaling = Some(sc);
    Ok(())
}

fn run_split(bench: &mut Workbench, out: &mut SuiteReport) -> Result<()> {
    let cfg = bench.cfg;
    for (k, f) in bench.pair_sources(cfg.split.sources)?.into_iter().enumerate() {
        let d = fourier_split_diag(f, cfg.split.alpha, &cfg.split.grid, cfg.budget.padding, cfg.radius)?;
        for r in d.reports() {
            out.reports.push(BoundReport {
                name: format!("{}[src={k}]", r.name),
                ..r
            });
        }
        out.split.push(d);
    }
    Ok(())
}

fn spread(xs: &[f64]) -> f64 {
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let (lo, hi) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    (hi - lo) / mean
}

fn run_equivalence(bench: &mut Workbench, out: &mut SuiteReport) -> Result<()> {
    let cfg = bench.cfg;
    if bench.zero() {
        out.notes.push("norm-equivalence: skipped, both norms vanish on the zero field".into());
        return Ok(());
    }
    let mut ratios = Vec::new();
    let mut corrected = Vec::new();
    for k in 0..cfg.equivalence.sources {
        let grid = bench.undamped_grid(k)?;
        let hs = hs_norm_fourier(&fft4_padded(&grid, bench.res.padding)?, 0.5);
        let est = seminorm_mc(&grid, 0.5, 2.0, Variant::Paper, &bench.res.pair_sampler())?;
        ratios.push(est.value / hs);
        corrected.push(est.corrected_value() / hs);
    }
    let reference = (8.0 * std::f64::consts::PI * std::f64::consts::PI / 3.0).sqrt();
    let eq = EquivalenceReport {
        spread: spread(&ratios),
        corrected_spread: spread(&corrected),
        ratios,
        corrected_ratios: corrected,
        reference,
    };
    out.reports.push(
        BoundReport::new("norm-equivalence/spread", eq.corrected_spread, cfg.equivalence.max_spread, 0.0)
            .with("raw_spread", eq.spread)
            .with("continuum_ratio", reference),
    );
    out.equivalence = Some(eq);
    Ok(())
}

/// Runs every selected experiment in the fixed order of
/// [`EXPERIMENTS`](crate::cli::config::EXPERIMENTS).
pub fn run_suite(cfg: &RunConfig) -> Result<SuiteOutcome> {
    cfg.validate()?;
    let mut bench = Workbench::new(cfg)?;
    let mut report = SuiteReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        constants: cfg.lq.q.iter().find(|q| q.is_finite() && **q > 1.0).map(|q| constants(cfg.horizon, cfg.radius, *q)).transpose()?,
        reports: Vec::new(),
        lemma3: Vec::new(),
        lemma4: Vec::new(),
        transport: Vec::new(),
        scaling: None,
        split: Vec::new(),
        equivalence: None,
        notes: Vec::new(),
    };
    let mut timings = Vec::new();
    for name in cfg.selected() {
        let start = Instant::now();
        let step = match name {
            "lemma3" => run_lemma3(cfg, &mut report),
            "lemma4" => run_lemma4(cfg, &mut report),
            "transport" => run_transport(&mut bench, &mut report),
            "lemma2" => run_lemma2(&mut bench, &mut report),
            "lq-bounds" => run_lq(&mut bench, &mut report),
            "theorem1" => run_theorem1(&mut bench, &mut report),
            "scaling" => run_scaling(&mut bench, &mut report),
            "fourier-split" => run_split(&mut bench, &mut report),
            "norm-equivalence" => run_equivalence(&mut bench, &mut report),
            _ => unreachable!("experiment names are validated"),
        };
        step.map_err(|e| Error::Experiment {
            name: name.to_string(),
            source: Box::new(e),
        })?;
        timings.push((name.to_string(), start.elapsed()));
    }
    Ok(SuiteOutcome { report, timings })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

/// Writes `report.json`, `summary.csv`, the plots and `run-meta.txt` into `dir`.
pub fn write_bundle(outcome: &SuiteOutcome, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
    let report = &outcome.report;
    let mut files = vec![dir.join("report.json"), dir.join("summary.csv")];
    write(&files[0], &report.to_json()?)?;
    write(&files[1], &report.summary_csv())?;
    for (name, plot) in plots(report)? {
        let path = dir.join(name);
        emit_svg(&plot, &path)?;
        files.push(path);
    }
    let mut meta = String::new();
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let _ = writeln!(meta, "started_unix = {now}");
    let _ = writeln!(meta, "threads = {}", rayon::current_num_threads());
    let _ = writeln!(meta, "version = {}", report.version);
    for (name, d) in &outcome.timings {
        let _ = writeln!(meta, "seconds.{name} = {:.3}", d.as_secs_f64());
    }
    let meta_path = dir.join("run-meta.txt");
    write(&meta_path, &meta)?;
    files.push(meta_path);
    Ok(files)
}

fn plots(report: &SuiteReport) -> Result<Vec<(&'static str, Plot)>> {
    let cfg = &report.config;
    let mut out = Vec::new();
    let nonzero3: Vec<(f64, f64)> = report
        .lemma3
        .iter()
        .filter(|r| r.measure > 0.0)
        .map(|r| (r.epsilon, r.measure))
        .collect();
    if !nonzero3.is_empty() {
        let cr = c_r(cfg.radius)?;
        let eps = &cfg.slices.epsilons;
        let (lo, hi) = eps.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
        out.push((
            "lemma3.svg",
            Plot {
                title: "slab measure against epsilon".into(),
                x_label: "epsilon".into(),
                y_label: "measure".into(),
                log_x: true,
                log_y: true,
                series: vec![
                    Series::new("MC estimate", nonzero3, Style::Points),
                    power_line("C_R epsilon", 1.0, cr, 1.0, lo, hi),
                ],
            },
        ));
    }
    let nonzero4: Vec<(f64, f64)> = report
        .lemma4
        .iter()
        .filter(|r| r.reduced > 0.0)
        .map(|r| (r.epsilon, r.reduced))
        .collect();
    if !nonzero4.is_empty() {
        let cr = c_r(cfg.radius)?;
        let eps = &cfg.slices.epsilons;
        let (lo, hi) = eps.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
        out.push((
            "lemma4.svg",
            Plot {
                title: "weighted integral against epsilon".into(),
                x_label: "epsilon".into(),
                y_label: "integral".into(),
                log_x: true,
                log_y: true,
                series: vec![
                    Series::new("reduced quadrature", nonzero4, Style::Points),
                    power_line("2 C_R / epsilon", 1.0, 2.0 * cr, -1.0, lo, hi),
                ],
            },
        ));
    }
    if let Some(sc) = &report.scaling {
        let pts: Vec<(f64, f64)> = sc.lambdas.iter().cloned().zip(sc.norms.iter().cloned()).collect();
        let lp: Vec<(f64, f64)> = sc.lambdas.iter().cloned().zip(sc.lp_norms.iter().cloned()).collect();
        let (lo, hi) = sc.lambdas.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &e| (a.min(e), b.max(e)));
        let anchor = |p: &[(f64, f64)]| p.iter().map(|q| q.1.ln()).sum::<f64>() / p.len() as f64;
        let lx = sc.lambdas.iter().map(|l| l.ln()).sum::<f64>() / sc.lambdas.len() as f64;
        out.push((
            "scaling.svg",
            Plot {
                title: "dilation law".into(),
                x_label: "lambda".into(),
                y_label: "norm".into(),
                log_x: true,
                log_y: true,
                series: vec![
                    power_line("target seminorm slope", lx.exp(), anchor(&pts).exp(), sc.target, lo, hi),
                    Series::new("seminorm", pts, Style::Points),
                    power_line("target L^p slope", lx.exp(), anchor(&lp).exp(), sc.lp_target, lo, hi),
                    Series::new("L^p norm", lp, Style::Points),
                ],
            },
        ));
    }
    let bars: Vec<(f64, f64)> = report
        .reports
        .iter()
        .filter(|r| !r.name.starts_with("lemma3[") && !r.name.starts_with("lemma4/"))
        .enumerate()
        .map(|(i, r)| {
            let scale = r.rhs.abs().max(r.lhs.abs());
            (i as f64, if scale > 0.0 { r.margin / scale } else { 0.0 })
        })
        .collect();
    if !bars.is_empty() {
        out.push((
            "margins.svg",
            Plot {
                title: "relative margins (rhs - lhs) / max(|lhs|, |rhs|)".into(),
                x_label: "check index".into(),
                y_label: "relative margin".into(),
                log_x: false,
                log_y: false,
                series: vec![Series::new("margin", bars, Style::Bars)],
            },
        ));
    }
    Ok(out)
}
