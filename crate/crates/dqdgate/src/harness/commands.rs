use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, SchemeName};
use super::output::{sha256_hex, Check, Manifest, OutputSink};
use crate::algebra::C64;
use crate::dynamics::{propagate_state_trajectory, required_steps, write_trajectory_csv, ErrorInjection};
use crate::error::{Error, Result};
use crate::experiments::{
    bgate_duration, bgate_hamiltonian, gate_channel, simulate_bgate, simulate_fsim, Diagnostics, FsimDesign,
    FsimPulse, record_density_health, SimulationOptions,
};
use crate::fidelity::{
    analytic_rabi_fidelity, average_fidelity, build_grid, write_reports_csv, FidelityReport, ReportMeta,
};
use crate::kak::b_gate;
use crate::pulse_designs::{bgate_rectangular, error_sensitivity, optimize_eta, PolynomialLayout};

/// Files, checks and one-line summaries of a finished command.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub manifest: Manifest,
    pub summary: Vec<String>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.manifest.passed()
    }
}

struct Run {
    command: String,
    config_sha256: String,
    seed: u64,
    started: Instant,
    sink: OutputSink,
    checks: Vec<Check>,
    summary: Vec<String>,
}

impl Run {
    fn start(command: &str, cfg: &ExperimentConfig, subdir: Option<&str>) -> Result<Self> {
        cfg.validate()?;
        let dir = match subdir {
            Some(s) => cfg.output_dir.join(s),
            None => cfg.output_dir.clone(),
        };
        Ok(Self {
            command: command.to_string(),
            config_sha256: sha256_hex(serde_json::to_string(cfg)?.as_bytes()),
            seed: cfg.seed,
            started: Instant::now(),
            sink: OutputSink::create(dir)?,
            checks: Vec::new(),
            summary: Vec::new(),
        })
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn diagnostics(&mut self, label: &str, d: &Diagnostics) {
        let detail = format!(
            "steps {} unitarity {:.2e} trace {:.2e} min eigenvalue {:.2e}",
            d.steps, d.unitarity_defect, d.trace_defect, d.min_eigenvalue
        );
        self.check(format!("numerics {label}"), d.healthy(), detail);
    }

    fn note(&mut self, line: String) {
        self.summary.push(line);
    }

    fn reports(&mut self, name: &str, reports: &[FidelityReport]) -> Result<()> {
        self.sink.write_with(name, |w| write_reports_csv(w, reports))?;
        Ok(())
    }

    fn finish(self) -> Result<RunOutcome> {
        let manifest = Manifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_sha256: self.config_sha256,
            seed: self.seed,
            runtime_s: self.started.elapsed().as_secs_f64(),
            files: Vec::new(),
            checks: self.checks,
        };
        Ok(RunOutcome { manifest: self.sink.finish(manifest)?, summary: self.summary })
    }
}

fn schedule_name(cfg: &ExperimentConfig, design: &FsimDesign, eta_index: usize) -> String {
    match (cfg.scheme, cfg.eta.len()) {
        (SchemeName::FsimGeometric, _) => "schedule_fsim_geometric.csv".into(),
        (SchemeName::FsimPoly, n) if n > 1 => format!("schedule_fsim_poly_n{}_eta{eta_index}.csv", design.repetitions),
        _ => format!("schedule_{}_n{}.csv", cfg.scheme, design.repetitions),
    }
}

fn constraint_check(run: &mut Run, label: &str, residual: f64) {
    run.check(format!("constraints {label}"), residual <= 1e-8, format!("max residual {residual:.2e}"));
}

/// Writes the pulse schedule(s) of the configured scheme as CSV.
pub fn cmd_synthesize(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let mut run = Run::start("synthesize", cfg, None)?;
    let params = cfg.device_params()?;
    if cfg.scheme == SchemeName::Bgate {
        let (w1, w2) = params.qubit_carriers();
        let t = cfg.gate_time_s.unwrap_or_else(|| bgate_duration(&params));
        let design = bgate_rectangular(t, w1, w2)?;
        for (k, c) in [&design.first, &design.second].into_iter().enumerate() {
            constraint_check(&mut run, &format!("bgate segment {}", k + 1), c.max_constraint_residual(&design.schedule));
        }
        run.sink.write_with("schedule_bgate.csv", |w| design.schedule.write_csv(w, cfg.sample_points))?;
        run.note(format!(
            "bgate: T = {:.3} ns, switch at {:.3} ns, max |J|/2pi = {:.3} MHz",
            t * 1e9,
            design.split * 1e9,
            2.0 * design.schedule.peak_envelope() / std::f64::consts::TAU * 1e-6
        ));
        return run.finish();
    }
    let repetitions: &[u32] = if cfg.scheme == SchemeName::FsimGeometric { &cfg.repetitions[..1] } else { &cfg.repetitions };
    let etas: &[f64] = if cfg.scheme == SchemeName::FsimPoly { &cfg.eta } else { &cfg.eta[..1] };
    for &n in repetitions {
        for (k, &eta) in etas.iter().enumerate() {
            let design = cfg.fsim_design(n, eta)?.expect("fsim scheme");
            let schedule = design.schedule()?;
            let controls = design.controls()?;
            let name = schedule_name(cfg, &design, k);
            constraint_check(&mut run, &name, controls.max_constraint_residual(&schedule));
            run.sink.write_with(&name, |w| schedule.write_csv(w, cfg.sample_points))?;
            run.note(format!(
                "{name}: T = {:.3} ns, max |J|/2pi = {:.3} MHz",
                design.duration * 1e9,
                2.0 * schedule.peak_envelope() / std::f64::consts::TAU * 1e-6
            ));
        }
    }
    run.finish()
}

fn superposition_00_01() -> [C64; 4] {
    let h = FRAC_1_SQRT_2;
    [C64::new(h, 0.0), C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]
}

fn error_grid(cfg: &ExperimentConfig) -> Result<Vec<ErrorInjection>> {
    let mut out = Vec::new();
    for &d in &cfg.rabi_deltas {
        for &e in &cfg.detuning_eps {
            out.push(ErrorInjection::new(d, e)?);
        }
    }
    Ok(out)
}

/// Runs every (N, Delta, epsilon) channel and scores it for each initial-phase setting.
fn fsim_reports(
    designs: &[FsimDesign],
    errors: &[ErrorInjection],
    phases: &[[f64; 3]],
    rwa: bool,
    opts: &SimulationOptions,
) -> Result<Vec<(String, Vec<FidelityReport>, Diagnostics)>> {
    let items: Vec<(FsimDesign, ErrorInjection)> =
        designs.iter().flat_map(|d| errors.iter().map(move |e| (*d, *e))).collect();
    items
        .par_iter()
        .map(|(design, err)| {
            let h = design.hamiltonian(*err, rwa)?;
            let (channel, mut diag) = gate_channel(&h, opts)?;
            let mut reports = Vec::with_capacity(phases.len());
            for &p in phases {
                let grid = build_grid(opts.grid_n, p)?;
                record_density_health(&channel, &grid.states, &mut diag);
                reports.push(
                    average_fidelity(&channel, &design.target(), &grid, opts.convention)?.with_meta(design.meta(*err)),
                );
            }
            let label = format!(
                "{} N={} rabi={} detuning={}",
                design.pulse.label(),
                design.repetitions,
                err.rabi,
                err.detuning
            );
            Ok((label, reports, diag))
        })
        .collect()
}

/// Fidelity report rows for every (N, Delta, epsilon, phase) combination, plus an optional trajectory.
pub fn cmd_simulate(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let mut run = Run::start("simulate", cfg, None)?;
    let opts = cfg.simulation_options()?;
    let params = cfg.device_params()?;
    if cfg.scheme == SchemeName::Bgate {
        let h = bgate_hamiltonian(&params, cfg.rwa)?;
        let (channel, mut diag) = gate_channel(&h, &opts)?;
        let meta = ReportMeta {
            scheme: "bgate".into(),
            repetitions: None,
            zeeman_difference: params.zeeman_difference,
            gate_time: h.schedule.duration,
            errors: ErrorInjection::default(),
        };
        let mut reports = Vec::new();
        for &p in &cfg.initial_phases {
            let grid = build_grid(opts.grid_n, p)?;
            record_density_health(&channel, &grid.states, &mut diag);
            reports.push(average_fidelity(&channel, &b_gate(), &grid, opts.convention)?.with_meta(meta.clone()));
        }
        run.diagnostics("bgate", &diag);
        for r in &reports {
            run.note(format!("bgate phases {:?}: F = {:.4}%", r.phases, r.average * 100.0));
        }
        run.reports("reports.csv", &reports)?;
        let b = simulate_bgate(&params, cfg.rwa, cfg.step_factor.min(2.0), cfg.integrator)?;
        let summary = BGateSummary {
            rwa: cfg.rwa,
            gate_time_ns: h.schedule.duration * 1e9,
            switch_ns: b.design.split * 1e9,
            segment1_distance: b.first_distance,
            segment2_distance: b.second_distance,
            total_distance: b.total_distance,
            state_infidelity: b.state_infidelity,
            steps: b.steps,
        };
        run.check(
            "bgate final state",
            b.state_infidelity <= 1e-3,
            format!("infidelity {:.3e} from (|00>+|01>)/sqrt2", b.state_infidelity),
        );
        run.note(format!(
            "bgate segment distances {:.4} / {:.4}, final state infidelity {:.2e}",
            b.first_distance, b.second_distance, b.state_infidelity
        ));
        run.sink.write_bytes("bgate_summary.json", serde_json::to_string_pretty(&summary)?.as_bytes())?;
        if cfg.trajectory {
            let steps = required_steps(&h, 0.0, h.schedule.duration) * 2;
            let tr = propagate_state_trajectory(&h, superposition_00_01(), steps, cfg.sample_points, cfg.integrator)?;
            run.sink.write_with("trajectory_bgate.csv", |w| write_trajectory_csv(w, &tr))?;
        }
        return run.finish();
    }
    let designs = cfg
        .repetitions
        .iter()
        .map(|&n| cfg.fsim_design(n, cfg.eta[0]).map(|d| d.expect("fsim scheme")))
        .collect::<Result<Vec<_>>>()?;
    let designs = if cfg.scheme == SchemeName::FsimGeometric { designs[..1].to_vec() } else { designs };
    let results = fsim_reports(&designs, &error_grid(cfg)?, &cfg.initial_phases, cfg.rwa, &opts)?;
    let mut all = Vec::new();
    for (label, reports, diag) in results {
        run.diagnostics(&label, &diag);
        for r in &reports {
            run.note(format!("{label} phases {:?}: F = {:.4}%", r.phases, r.average * 100.0));
        }
        all.extend(reports);
    }
    run.reports("reports.csv", &all)?;
    if cfg.trajectory {
        let h = designs[0].hamiltonian(ErrorInjection::default(), cfg.rwa)?;
        let steps = required_steps(&h, 0.0, h.schedule.duration) * 2;
        let tr = propagate_state_trajectory(&h, superposition_00_01(), steps, cfg.sample_points, cfg.integrator)?;
        run.sink.write_with(&format!("trajectory_{}.csv", cfg.scheme), |w| write_trajectory_csv(w, &tr))?;
    }
    run.finish()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BGateSummary {
    pub rwa: bool,
    pub gate_time_ns: f64,
    pub switch_ns: f64,
    pub segment1_distance: f64,
    pub segment2_distance: f64,
    pub total_distance: f64,
    pub state_infidelity: f64,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct EtaRow {
    eta: f64,
    repetitions: u32,
    gate_time: f64,
    sensitivity: Option<f64>,
    fidelity: Option<f64>,
}

fn write_eta_rows(w: &mut Vec<u8>, rows: &[EtaRow]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["eta", "N", "gate_time_ns", "q_s", "fidelity"])?;
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.12e}")).unwrap_or_default();
    let opt_fixed = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    for r in rows {
        out.write_record([
            format!("{:.6}", r.eta),
            r.repetitions.to_string(),
            opt_fixed(r.gate_time.is_finite().then_some(r.gate_time * 1e9)),
            opt(r.sensitivity),
            opt(r.fidelity),
        ])?;
    }
    out.flush()?;
    Ok(())
}

fn eta_rows(cfg: &ExperimentConfig, fixed_time: Option<f64>) -> Result<Vec<EtaRow>> {
    let opts = cfg.simulation_options()?;
    let items: Vec<(u32, f64)> = cfg.repetitions.iter().flat_map(|&n| cfg.eta.iter().map(move |&e| (n, e))).collect();
    items
        .par_iter()
        .map(|&(n, eta)| {
            let cfg_eta = ExperimentConfig { gate_time_s: fixed_time.or(cfg.gate_time_s), ..cfg.clone() };
            let built = cfg_eta
                .fsim_design(n, eta)
                .and_then(|d| d.expect("fsim scheme").schedule().map(|s| (d.expect("fsim scheme"), s)));
            let (design, schedule) = match built {
                Ok(pair) => pair,
                Err(Error::Singular(_)) => {
                    let gate_time = cfg_eta.gate_time_s.unwrap_or(f64::NAN);
                    return Ok(EtaRow { eta, repetitions: n, gate_time, sensitivity: None, fidelity: None });
                }
                Err(e) => return Err(e),
            };
            let sensitivity = error_sensitivity(&schedule, design.meta(ErrorInjection::default()).zeeman_difference);
            let out = simulate_fsim(&design, ErrorInjection::default(), cfg.rwa, &opts)?;
            Ok(EtaRow {
                eta,
                repetitions: n,
                gate_time: design.duration,
                sensitivity: Some(sensitivity),
                fidelity: Some(out.report.average),
            })
        })
        .collect()
}

/// Sensitivity q_s and average fidelity of the polynomial pulse over the eta grid, for each N.
/// Without an explicit gate time each eta gets its own exchange-limited T.
pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    if cfg.scheme != SchemeName::FsimPoly {
        return Err(Error::InvalidParameter(format!("sweep runs over eta and needs scheme fsim_poly, got {}", cfg.scheme)));
    }
    let mut run = Run::start("sweep", cfg, None)?;
    let rows = eta_rows(cfg, None)?;
    sweep_summary(&mut run, &rows);
    run.sink.write_with("eta_sweep.csv", |w| write_eta_rows(w, &rows))?;
    run.finish()
}

fn sweep_summary(run: &mut Run, rows: &[EtaRow]) {
    let finite = rows.iter().filter(|r| r.fidelity.is_some()).count();
    run.check("eta sweep", finite > 0, format!("{finite} of {} eta points non-singular", rows.len()));
    let best = rows
        .iter()
        .filter_map(|r| r.fidelity.map(|f| (r, f)))
        .max_by(|a, b| a.1.total_cmp(&b.1));
    if let Some((r, f)) = best {
        run.note(format!("best fidelity {:.4}% at eta = {:.3} (N = {})", f * 100.0, r.eta, r.repetitions));
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReproduceTarget {
    Table1,
    Fig1a,
    Fig4c,
    Fig4d,
    Fig5,
    Fig6,
}

impl ReproduceTarget {
    pub const ALL: [ReproduceTarget; 6] = [Self::Table1, Self::Fig1a, Self::Fig4c, Self::Fig4d, Self::Fig5, Self::Fig6];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Table1 => "table1",
            Self::Fig1a => "fig1a",
            Self::Fig4c => "fig4c",
            Self::Fig4d => "fig4d",
            Self::Fig5 => "fig5",
            Self::Fig6 => "fig6",
        }
    }
}

impl fmt::Display for ReproduceTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReproduceTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown reproduce target '{s}'")))
    }
}

/// Evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect(),
    }
}

fn poly() -> FsimPulse {
    FsimPulse::Polynomial { eta: -1.0 / 3.0, layout: PolynomialLayout::Repeated }
}

/// Regenerates one dataset from the default device and gate parameters.
/// Only the output directory, grid size, device, integrator settings and fidelity convention of `base` are used.
pub fn cmd_reproduce(target: ReproduceTarget, base: &ExperimentConfig) -> Result<RunOutcome> {
    let cfg = ExperimentConfig {
        output_dir: base.output_dir.clone(),
        grid_n: base.grid_n,
        device: base.device,
        convention: base.convention,
        integrator: base.integrator,
        step_factor: base.step_factor,
        min_steps: base.min_steps,
        dephasing_form: base.dephasing_form,
        seed: base.seed,
        ..ExperimentConfig::default()
    };
    let mut run = Run::start(&format!("reproduce {target}"), &cfg, Some(target.as_str()))?;
    let params = cfg.device_params()?;
    let jmax = params.exchange_max;
    let (swap, phase) = (FRAC_PI_4, FRAC_PI_2);
    let clean = SimulationOptions { dephasing: None, ..cfg.simulation_options()? };
    let fine = cfg.grid_n >= 40;
    match target {
        ReproduceTarget::Table1 => {
            let opts = cfg.simulation_options()?;
            let mut designs = Vec::new();
            for pulse in [FsimPulse::Rectangular, poly()] {
                for n in 1..=10 {
                    designs.push(FsimDesign::with_exchange_limit(pulse, swap, phase, n, jmax)?);
                }
            }
            let results = fsim_reports(&designs, &[ErrorInjection::default()], &[[0.0; 3]], false, &opts)?;
            let mut rows = Vec::new();
            for (label, reports, diag) in results {
                run.diagnostics(&label, &diag);
                let r = &reports[0];
                run.note(format!("{} T = {:.2} ns: F = {:.3}%", label, r.meta.gate_time * 1e9, r.average * 100.0));
                rows.extend(reports);
            }
            run.check("table1 rows", rows.len() == 20, format!("{} rows", rows.len()));
            run.reports("table1.csv", &rows)?;
        }
        ReproduceTarget::Fig1a => {
            let (swaps, phases) = (linspace(0.0, FRAC_PI_2, 51), linspace(0.0, std::f64::consts::PI, 51));
            let rows: Vec<(f64, f64, f64, Option<f64>)> = swaps
                .iter()
                .flat_map(|&s| phases.iter().map(move |&p| (s, p)))
                .map(|(s, p)| {
                    let unit = |pulse| FsimDesign { pulse, swap_angle: s, phase: p, repetitions: 1, duration: 1.0 }.schedule();
                    let rect = 2.0 * unit(FsimPulse::Rectangular)?.peak_envelope();
                    let polyv = match unit(poly()) {
                        Ok(sch) => Some(2.0 * sch.peak_envelope()),
                        Err(Error::Singular(_)) => None,
                        Err(e) => return Err(e),
                    };
                    Ok((s, p, rect, polyv))
                })
                .collect::<Result<_>>()?;
            let max_rect = rows.iter().map(|r| r.2).fold(0.0, f64::max);
            run.check("fig1a grid", rows.len() == 51 * 51 && max_rect.is_finite(), format!("{} points", rows.len()));
            run.note(format!("largest |JT| (rectangular) {max_rect:.4} rad"));
            run.sink.write_with("fig1a.csv", |w| {
                let mut out = csv::Writer::from_writer(w);
                out.write_record(["swap_angle", "phase", "jt_max_rect", "jt_max_poly"])?;
                for (s, p, r, q) in &rows {
                    out.write_record([
                        format!("{s:.6}"),
                        format!("{p:.6}"),
                        format!("{r:.9}"),
                        q.map(|v| format!("{v:.9}")).unwrap_or_default(),
                    ])?;
                }
                out.flush()?;
                Ok(())
            })?;
        }
        ReproduceTarget::Fig4c => {
            let etas = linspace(-1.0, 1.0, 201);
            let scan = optimize_eta(swap, phase, &etas)?;
            run.check("fig4c minimum", scan.best_sensitivity.is_finite(), format!("q_s minimum at eta = {:.3}", scan.best_eta));
            run.note(format!("q_s minimum {:.6e} at eta = {:.3}", scan.best_sensitivity, scan.best_eta));
            run.sink.write_with("fig4c.csv", |w| {
                let mut out = csv::Writer::from_writer(w);
                out.write_record(["eta", "q_s"])?;
                for (e, q) in scan.etas.iter().zip(&scan.sensitivity) {
                    out.write_record([format!("{e:.6}"), q.map(|v| format!("{v:.12e}")).unwrap_or_default()])?;
                }
                out.flush()?;
                Ok(())
            })?;
        }
        ReproduceTarget::Fig4d => {
            let t = FsimDesign::with_exchange_limit(poly(), swap, phase, 1, jmax)?.duration;
            let sweep_cfg = ExperimentConfig {
                scheme: SchemeName::FsimPoly,
                eta: linspace(-1.0, 1.0, if fine { 41 } else { 21 }),
                ..cfg.clone()
            };
            let rows = eta_rows(&sweep_cfg, Some(t))?;
            sweep_summary(&mut run, &rows);
            run.sink.write_with("fig4d.csv", |w| write_eta_rows(w, &rows))?;
        }
        ReproduceTarget::Fig5 => {
            let deltas = linspace(-0.1, 0.1, 21);
            let rect = FsimDesign::with_exchange_limit(FsimPulse::Rectangular, swap, phase, 1, jmax)?;
            let errs: Vec<_> = deltas.iter().map(|&d| ErrorInjection::new(d, 0.0)).collect::<Result<_>>()?;
            let a = fsim_reports(&[rect], &errs, &[[0.0; 3]], true, &clean)?;
            let mut rows_a = Vec::new();
            let mut worst = 0.0f64;
            for (label, reports, diag) in a {
                run.diagnostics(&label, &diag);
                worst = worst.max((reports[0].average - analytic_rabi_fidelity(reports[0].meta.errors.rabi)).abs());
                rows_a.extend(reports);
            }
            run.note(format!("Rabi sweep: largest deviation from the analytic law {worst:.2e}"));
            run.reports("fig5a.csv", &rows_a)?;
            run.sink.write_with("fig5a_analytic.csv", |w| {
                let mut out = csv::Writer::from_writer(w);
                out.write_record(["rabi_delta", "fidelity"])?;
                for d in linspace(-0.1, 0.1, 201) {
                    out.write_record([format!("{d:.6}"), format!("{:.12}", analytic_rabi_fidelity(d))])?;
                }
                out.flush()?;
                Ok(())
            })?;
            let designs: Vec<_> =
                (1..=3).map(|n| FsimDesign::with_exchange_limit(poly(), swap, phase, n, jmax)).collect::<Result<_>>()?;
            let errs: Vec<_> = deltas.iter().map(|&e| ErrorInjection::new(0.0, e)).collect::<Result<_>>()?;
            let mut rows_b = Vec::new();
            for (label, reports, diag) in fsim_reports(&designs, &errs, &[[0.0; 3]], true, &clean)? {
                run.diagnostics(&label, &diag);
                rows_b.extend(reports);
            }
            run.reports("fig5b.csv", &rows_b)?;
        }
        ReproduceTarget::Fig6 => {
            let geo = FsimDesign::with_exchange_limit(FsimPulse::Geometric, swap, phase, 1, jmax)?;
            let dynamic = FsimDesign { pulse: FsimPulse::Rectangular, repetitions: 2, ..geo };
            let grid = linspace(-0.1, 0.1, 21);
            run.sink.write_with("fig6b_schedule.csv", |w| geo.schedule()?.write_csv(w, 2001))?;
            for (name, errs) in [
                ("fig6c.csv", grid.iter().map(|&d| ErrorInjection::new(d, 0.0)).collect::<Result<Vec<_>>>()?),
                ("fig6d.csv", grid.iter().map(|&e| ErrorInjection::new(0.0, e)).collect::<Result<Vec<_>>>()?),
            ] {
                let mut rows = Vec::new();
                for (label, reports, diag) in fsim_reports(&[geo, dynamic], &errs, &[[0.0; 3]], true, &clean)? {
                    run.diagnostics(&label, &diag);
                    rows.extend(reports);
                }
                let edge = |scheme: &str, pick: fn(&ErrorInjection) -> f64| {
                    rows.iter()
                        .filter(|r| r.meta.scheme == scheme && (pick(&r.meta.errors).abs() - 0.1).abs() < 1e-12)
                        .map(|r| r.average)
                        .fold(f64::INFINITY, f64::min)
                };
                let pick: fn(&ErrorInjection) -> f64 = if name == "fig6c.csv" { |e| e.rabi } else { |e| e.detuning };
                let (g, d) = (edge("fsim_geometric", pick), edge("fsim_rect", pick));
                run.note(format!("{name}: worst fidelity at |error| = 0.1, geometric {:.4}% vs dynamic {:.4}%", g * 100.0, d * 100.0));
                run.reports(name, &rows)?;
            }
            run.note(format!("T = {:.2} ns, Zeeman difference 4 pi / T", geo.duration * 1e9));
        }
    }
    run.finish()
}
