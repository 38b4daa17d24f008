//! Simulation drivers shared by the binary and the acceptance checks.
//!
//! Every grid point is computed independently and collected in grid order,
//! so output does not depend on the thread count.

use catlight::analysis::{fit_loglog_slope, negativity, trace_distance, ScalingPoint, DEFAULT_FIT_FLOOR};
use catlight::basis::{DOWN_DOWN, UP_DOWN, UP_UP};
use catlight::effective::evolve_ensemble;
use catlight::full::{decompose_interference, evolve_full_with, partial_trace_photon};
use catlight::photon::{cat_fock, cat_p, coherent_fock, coherent_p};
use catlight::{DickeConfig, DynamicsMode, FockVector, PDistribution, TwoBodyMatrix, C64};
use rayon::prelude::*;

use crate::config::{ExperimentKind, ExperimentSpec, LightKind, Mode};
use crate::error::RunError;
use crate::series::{Key, ObservableSeries};

pub fn photon_state(light: LightKind, alpha: C64, cutoff: usize) -> FockVector {
    match light {
        LightKind::Cat => cat_fock(alpha, cutoff),
        LightKind::Coherent => coherent_fock(alpha, cutoff),
    }
}

pub fn p_distribution(light: LightKind, alpha: C64) -> PDistribution {
    match light {
        LightKind::Cat => cat_p(alpha),
        LightKind::Coherent => coherent_p(alpha),
    }
}

/// Two-electron density matrices of one run, one entry per time step.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub rho: Vec<TwoBodyMatrix>,
    /// Classical and interference parts; empty unless requested.
    pub classical: Vec<TwoBodyMatrix>,
    pub interference: Vec<TwoBodyMatrix>,
}

fn dynamics(mode: Mode) -> Option<DynamicsMode> {
    match mode {
        Mode::Full => None,
        Mode::XfaSg => Some(DynamicsMode::SudarshanGlauber),
        Mode::XfaGp => Some(DynamicsMode::GeneralizedP),
    }
}

fn rescaled(m: &TwoBodyMatrix, factor: f64) -> TwoBodyMatrix {
    TwoBodyMatrix::new(m.matrix.scale_real(factor), m.time)
}

/// Runs one mode. Generalized-P ensembles are trace-normalized step by step,
/// with the parts rescaled by the same factor so they still sum to `rho`.
pub fn simulate(
    mode: Mode,
    light: LightKind,
    alpha: C64,
    cfg: &DickeConfig,
    parts: bool,
) -> catlight::Result<Simulation> {
    let mut sim = Simulation { rho: vec![], classical: vec![], interference: vec![] };
    match dynamics(mode) {
        None => {
            evolve_full_with(cfg, &photon_state(light, alpha, cfg.cutoff), |state| {
                sim.rho.push(partial_trace_photon(state));
                if parts {
                    let c = decompose_interference(state, cfg.free_field(alpha, state.time))?;
                    sim.classical.push(c.classical());
                    sim.interference.push(c.interference());
                }
                Ok(())
            })?;
        }
        Some(dm) => {
            let run = evolve_ensemble(&p_distribution(light, alpha), cfg, dm)?;
            for k in 0..run.steps() {
                let rho = run.assembled(k)?;
                let factor = match dm {
                    DynamicsMode::GeneralizedP => 1.0 / rho.trace().re,
                    DynamicsMode::SudarshanGlauber => 1.0,
                };
                if parts {
                    sim.classical.push(rescaled(&run.classical_part(k), factor));
                    sim.interference.push(rescaled(&run.interference_part(k), factor));
                }
                sim.rho.push(rescaled(&rho, factor));
            }
        }
    }
    Ok(sim)
}

/// The density matrix at `t_max` only.
pub fn simulate_final(mode: Mode, light: LightKind, alpha: C64, cfg: &DickeConfig) -> catlight::Result<TwoBodyMatrix> {
    match dynamics(mode) {
        None => {
            let mut last = None;
            evolve_full_with(cfg, &photon_state(light, alpha, cfg.cutoff), |state| {
                if state.time >= cfg.t_max - 0.5 * cfg.dt {
                    last = Some(partial_trace_photon(state));
                }
                Ok(())
            })?;
            Ok(last.expect("the final step is always observed"))
        }
        Some(_) => Ok(simulate(mode, light, alpha, cfg, false)?.rho.pop().expect("nonempty run")),
    }
}

fn at(cfg: &DickeConfig, alpha: C64) -> impl Fn(catlight::Error) -> RunError + '_ {
    move |source| RunError::Simulation { gamma: cfg.gamma, alpha, source }
}

/// Step indices kept in time-resolved output; the last step is always kept.
pub fn sample_indices(steps: usize, every: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..=steps).step_by(every.max(1)).collect();
    if idx.last() != Some(&steps) {
        idx.push(steps);
    }
    idx
}

/// A named table ready to be written as `<name>.csv`.
#[derive(Clone, Debug)]
pub struct Artifact {
    pub name: String,
    pub series: ObservableSeries,
}

pub fn run(spec: &ExperimentSpec) -> Result<Vec<Artifact>, RunError> {
    let report = spec.validate();
    if !report.is_ok() {
        return Err(RunError::Config(crate::config::ConfigError { errors: report.errors }));
    }
    match spec.kind {
        ExperimentKind::InterferenceDynamics => interference_dynamics(spec),
        ExperimentKind::NegativitySweep => negativity_sweep(spec),
        ExperimentKind::GammaScaling => gamma_scaling(spec),
        ExperimentKind::Custom => custom(spec),
    }
}

fn negativity_series(
    rho: &[TwoBodyMatrix],
    idx: &[usize],
    cfg: &DickeConfig,
    alpha: C64,
) -> Result<Vec<f64>, RunError> {
    idx.iter().map(|&k| negativity(&rho[k]).map_err(at(cfg, alpha))).collect()
}

fn interference_dynamics(spec: &ExperimentSpec) -> Result<Vec<Artifact>, RunError> {
    let cfg = spec.physics_at(spec.gammas[0]);
    let alpha = spec.light.alphas[0];
    let light = spec.light.kinds[0];
    let sims = spec
        .modes
        .par_iter()
        .map(|&m| simulate(m, light, alpha, &cfg, true).map_err(at(&cfg, alpha)))
        .collect::<Result<Vec<_>, _>>()?;
    let idx = sample_indices(cfg.steps(), spec.sample_every);
    let full = spec.modes.iter().position(|&m| m == Mode::Full).map(|i| &sims[i]);

    let mut series = ObservableSeries::new("t", Key::Real(idx.iter().map(|&k| cfg.time(k)).collect()));
    for (&mode, sim) in spec.modes.iter().zip(&sims) {
        let pick = |v: &[TwoBodyMatrix], i: usize, j: usize| idx.iter().map(|&k| v[k].get(i, j)).collect::<Vec<_>>();
        let corner = pick(&sim.rho, UP_UP, DOWN_DOWN);
        series.push_real(format!("{mode}_rho_uudd_abs"), corner.iter().map(|z| z.norm()).collect());
        series.push_complex(format!("{mode}_rho_uudd"), corner);
        series.push_real(format!("{mode}_rho_udud"), pick(&sim.rho, UP_DOWN, UP_DOWN).iter().map(|z| z.re).collect());
        for (label, part) in [("cls", &sim.classical), ("itf", &sim.interference)] {
            series.push_real(
                format!("{mode}_{label}_rho_udud"),
                pick(part, UP_DOWN, UP_DOWN).iter().map(|z| z.re).collect(),
            );
            series.push_real(
                format!("{mode}_{label}_rho_uudd_abs"),
                pick(part, UP_UP, DOWN_DOWN).iter().map(|z| z.norm()).collect(),
            );
        }
        series.push_real(format!("{mode}_negativity"), negativity_series(&sim.rho, &idx, &cfg, alpha)?);
        if let (true, Some(full)) = (mode.is_effective(), full) {
            let d = idx
                .iter()
                .map(|&k| trace_distance(&sim.rho[k], &full.rho[k]).map_err(at(&cfg, alpha)))
                .collect::<Result<Vec<_>, _>>()?;
            series.push_real(format!("{mode}_trace_distance"), d);
        }
    }
    Ok(vec![Artifact { name: spec.output.clone(), series }])
}

fn negativity_sweep(spec: &ExperimentSpec) -> Result<Vec<Artifact>, RunError> {
    let cfg = spec.physics_at(spec.gammas[0]);
    let light = spec.light.kinds[0];
    let grid: Vec<(C64, Mode)> =
        spec.light.alphas.iter().flat_map(|&a| spec.modes.iter().map(move |&m| (a, m))).collect();
    let values = grid
        .par_iter()
        .map(|&(alpha, mode)| {
            simulate_final(mode, light, alpha, &cfg).and_then(|rho| negativity(&rho)).map_err(at(&cfg, alpha))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let nm = spec.modes.len();
    let mut sweep = ObservableSeries::new("alpha", Key::Real(spec.light.alphas.iter().map(|a| a.re).collect()));
    for (j, mode) in spec.modes.iter().enumerate() {
        sweep.push_real(format!("{mode}_negativity"), values.iter().skip(j).step_by(nm).copied().collect());
    }
    let mut out = vec![Artifact { name: spec.output.clone(), series: sweep }];

    let has_effective = spec.modes.iter().any(|m| m.is_effective());
    if spec.modes.contains(&Mode::Full) && has_effective {
        out.extend(negativity_inset(spec, &cfg, light)?);
    }
    Ok(out)
}

/// Time-resolved negativity at the inset amplitude and its deviation from
/// the full run.
pub fn negativity_inset(spec: &ExperimentSpec, cfg: &DickeConfig, light: LightKind) -> Result<Vec<Artifact>, RunError> {
    let alpha = C64::new(spec.light.inset_alpha, 0.0);
    let all: Vec<usize> = (0..=cfg.steps()).collect();
    let curves = spec
        .modes
        .par_iter()
        .map(|&m| {
            let sim = simulate(m, light, alpha, cfg, false).map_err(at(cfg, alpha))?;
            negativity_series(&sim.rho, &all, cfg, alpha)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let full = &curves[spec.modes.iter().position(|&m| m == Mode::Full).expect("caller checked")];
    let idx = sample_indices(cfg.steps(), spec.sample_every);

    let mut inset = ObservableSeries::new("t", Key::Real(idx.iter().map(|&k| cfg.time(k)).collect()));
    let mut labels = vec![];
    let mut means = vec![];
    for (mode, curve) in spec.modes.iter().zip(&curves) {
        inset.push_real(format!("{mode}_negativity"), idx.iter().map(|&k| curve[k]).collect());
        if mode.is_effective() {
            let delta: Vec<f64> = curve.iter().zip(full).map(|(a, b)| a - b).collect();
            inset.push_real(format!("{mode}_delta_negativity"), idx.iter().map(|&k| delta[k]).collect());
            labels.push(mode.name().to_string());
            means.push(delta.iter().map(|d| d.abs()).sum::<f64>() / delta.len() as f64);
        }
    }
    let mut summary = ObservableSeries::new("mode", Key::Label(labels));
    summary.push_real("mean_abs_delta_negativity", means);
    Ok(vec![
        Artifact { name: format!("{}_inset", spec.output), series: inset },
        Artifact { name: format!("{}_inset_summary", spec.output), series: summary },
    ])
}

/// Trace distance between the full and effective runs at `t_max`, one entry
/// per effective mode in `modes`.
pub fn final_distances(light: LightKind, alpha: C64, cfg: &DickeConfig, modes: &[Mode]) -> Result<Vec<f64>, RunError> {
    let err = at(cfg, alpha);
    let full = simulate_final(Mode::Full, light, alpha, cfg).map_err(&err)?;
    modes
        .iter()
        .filter(|m| m.is_effective())
        .map(|&m| simulate_final(m, light, alpha, cfg).and_then(|rho| trace_distance(&rho, &full)).map_err(&err))
        .collect()
}

fn gamma_scaling(spec: &ExperimentSpec) -> Result<Vec<Artifact>, RunError> {
    let alpha = spec.light.alphas[0];
    let effective: Vec<Mode> = spec.modes.iter().copied().filter(|m| m.is_effective()).collect();
    let grid: Vec<(LightKind, f64)> =
        spec.light.kinds.iter().flat_map(|&l| spec.gammas.iter().map(move |&g| (l, g))).collect();
    let distances = grid
        .par_iter()
        .map(|&(light, gamma)| final_distances(light, alpha, &spec.physics_at(gamma), &spec.modes))
        .collect::<Result<Vec<_>, _>>()?;

    let ng = spec.gammas.len();
    let mut points = ObservableSeries::new("gamma", Key::Real(spec.gammas.clone()));
    let (mut labels, mut slopes, mut retained) = (vec![], vec![], vec![]);
    for (li, light) in spec.light.kinds.iter().enumerate() {
        for (mi, mode) in effective.iter().enumerate() {
            let d: Vec<f64> = distances[li * ng..(li + 1) * ng].iter().map(|row| row[mi]).collect();
            let pts: Vec<ScalingPoint> =
                spec.gammas.iter().zip(&d).map(|(&gamma, &distance)| ScalingPoint { gamma, distance }).collect();
            labels.push(format!("{light}_{mode}"));
            slopes.push(fit_loglog_slope(&pts, DEFAULT_FIT_FLOOR).unwrap_or(f64::NAN));
            retained.push(pts.iter().filter(|p| p.distance > DEFAULT_FIT_FLOOR).count() as f64);
            points.push_real(format!("{light}_{mode}_trace_distance"), d);
        }
    }
    let mut fit = ObservableSeries::new("series", Key::Label(labels));
    fit.push_real("slope", slopes);
    fit.push_real("retained_points", retained);
    Ok(vec![
        Artifact { name: spec.output.clone(), series: points },
        Artifact { name: format!("{}_fit", spec.output), series: fit },
    ])
}

fn custom(spec: &ExperimentSpec) -> Result<Vec<Artifact>, RunError> {
    let light = spec.light.kinds[0];
    let grid: Vec<(f64, C64)> =
        spec.gammas.iter().flat_map(|&g| spec.light.alphas.iter().map(move |&a| (g, a))).collect();
    let finals = grid
        .par_iter()
        .map(|&(gamma, alpha)| {
            let cfg = spec.physics_at(gamma);
            spec.modes
                .iter()
                .map(|&m| simulate_final(m, light, alpha, &cfg).map_err(at(&cfg, alpha)))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut table = ObservableSeries::new("point", Key::Real((0..grid.len()).map(|i| i as f64).collect()));
    table.push_real("gamma", grid.iter().map(|p| p.0).collect());
    table.push_real("alpha_re", grid.iter().map(|p| p.1.re).collect());
    table.push_real("alpha_im", grid.iter().map(|p| p.1.im).collect());
    let full = spec.modes.iter().position(|&m| m == Mode::Full);
    for (j, mode) in spec.modes.iter().enumerate() {
        table.push_real(format!("{mode}_rho_udud"), finals.iter().map(|f| f[j].get(UP_DOWN, UP_DOWN).re).collect());
        table.push_real(
            format!("{mode}_rho_uudd_abs"),
            finals.iter().map(|f| f[j].get(UP_UP, DOWN_DOWN).norm()).collect(),
        );
        let mut neg = vec![];
        let mut dist = vec![];
        for (f, &(gamma, alpha)) in finals.iter().zip(&grid) {
            let cfg = spec.physics_at(gamma);
            neg.push(negativity(&f[j]).map_err(at(&cfg, alpha))?);
            if let (true, Some(fi)) = (mode.is_effective(), full) {
                dist.push(trace_distance(&f[j], &f[fi]).map_err(at(&cfg, alpha))?);
            }
        }
        table.push_real(format!("{mode}_negativity"), neg);
        if !dist.is_empty() {
            table.push_real(format!("{mode}_trace_distance"), dist);
        }
    }
    Ok(vec![Artifact { name: spec.output.clone(), series: table }])
}
