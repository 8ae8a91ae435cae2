//! Command implementations. Each returns the files it wrote and a summary
//! for the manifest; nothing here touches argv or the process exit code.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use zbw_core::dynamics::{integrate_tau, standard_zbw, uncertainty_products, HarmonicSpec, TauOptions};
use zbw_core::field::{beta, hamiltonian, kg_split_residual, quantum_potential};
use zbw_core::nonrel::{nogo_checks, nonrel_limit_check, nonrel_profile, nonrel_split_residuals, NonRelKind};
use zbw_core::profile::{integrate_profile, normalize_profile_with, solve_f};
use zbw_core::{PhysicalParams, ProfileGrid, ProfileParams};

use crate::config::{CommandKind, Format, ModelInput, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{manifest_path, to_json_bytes, write_bytes, Table, WrittenFile};

pub const SWEEP_COLUMNS: [&str; 8] = ["v_o", "theta", "gamma_o", "gamma_s", "dx_dp", "dE_dt", "omega", "A"];

/// Constants derived from a single-point configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derived {
    pub gamma_o: f64,
    pub gamma_s: f64,
    pub lambda_r: f64,
    pub f: f64,
    pub omega: f64,
    pub amplitude: f64,
    /// Peak amplitude after normalization; absent when the profile keeps R_M = 1.
    pub r_max: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: CommandKind,
    pub parameters: &'a RunConfig,
    pub derived: Option<Derived>,
    pub summary: serde_json::Value,
    pub outputs: Vec<WrittenFile>,
    pub wall_time_s: f64,
}

#[derive(Debug)]
pub struct Outcome {
    pub outputs: Vec<WrittenFile>,
    pub derived: Option<Derived>,
    pub summary: serde_json::Value,
    /// False only when verification found an uncertified result.
    pub passed: bool,
}

struct Model {
    phys: PhysicalParams,
    grid: ProfileGrid,
    harmonic: HarmonicSpec,
    derived: Derived,
}

pub fn shape_constant(cfg: &RunConfig) -> CliResult<f64> {
    Ok(match cfg.model() {
        ModelInput::F(f) => f,
        ModelInput::Target(t) => solve_f(t)?,
    })
}

fn physical(cfg: &RunConfig, v_o: f64, theta_deg: f64) -> CliResult<PhysicalParams> {
    Ok(PhysicalParams::natural(v_o, theta_deg.to_radians())?.with_mass(cfg.m)?)
}

fn build_model(cfg: &RunConfig) -> CliResult<Model> {
    let phys = physical(cfg, cfg.v_o.single("v-o")?, cfg.theta_deg.single("theta")?)?;
    let f = shape_constant(cfg)?;
    let params = ProfileParams::for_particle(f, 1.0, &phys)?;
    let mut grid = integrate_profile(&params, cfg.r_floor, cfg.grid)?;
    let mut r_max = None;
    if cfg.normalize {
        let norm = normalize_profile_with(&grid, cfg.tail_tol)?;
        log::info!("normalized: R_M = {}, tail {:.2e}", norm.r_max, norm.tail_estimate);
        r_max = Some(norm.r_max);
        grid = norm.grid;
    }
    let harmonic = HarmonicSpec::for_profile(grid.params(), &phys, cfg.vi0 * phys.c())?;
    let derived = Derived {
        gamma_o: phys.gamma_o(),
        gamma_s: phys.direction().gamma_s,
        lambda_r: phys.lambda_r(),
        f,
        omega: harmonic.omega,
        amplitude: harmonic.amplitude,
        r_max,
    };
    Ok(Model {
        phys,
        grid,
        harmonic,
        derived,
    })
}

pub fn execute(cfg: &RunConfig) -> CliResult<Outcome> {
    let start = Instant::now();
    let mut outcome = match cfg.command {
        CommandKind::Profile => run_profile(cfg)?,
        CommandKind::Trajectory => run_trajectory(cfg)?,
        CommandKind::Uncertainty => run_uncertainty(cfg)?,
        CommandKind::Verify => run_verify(cfg)?,
        CommandKind::Sweep => run_sweep(cfg)?,
    };
    let manifest = RunManifest {
        tool: "zbw",
        version: env!("CARGO_PKG_VERSION"),
        command: cfg.command,
        parameters: cfg,
        derived: outcome.derived,
        summary: outcome.summary.clone(),
        outputs: outcome.outputs.clone(),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let written = write_bytes(&manifest_path(&cfg.out), &to_json_bytes(&manifest)?)?;
    outcome.outputs.push(written);
    Ok(outcome)
}

fn run_profile(cfg: &RunConfig) -> CliResult<Outcome> {
    let model = build_model(cfg)?;
    let params = model.grid.params();
    let mut table = Table::new(&["ell", "R", "V_Q", "H", "beta"]);
    for (&ell, &r) in model.grid.ell().iter().zip(model.grid.r()) {
        table.push(vec![
            ell,
            r,
            quantum_potential(r, params, &model.phys)?,
            hamiltonian(r, params, &model.phys)?,
            beta(r, params)?,
        ]);
    }
    let file = write_bytes(&cfg.out, &table.render(cfg.format)?)?;
    Ok(Outcome {
        outputs: vec![file],
        derived: Some(model.derived),
        summary: json!({
            "points": table.rows.len(),
            "ell_max": model.grid.ell_max(),
            "quadrature_error": model.grid.quadrature_error(),
        }),
        passed: true,
    })
}

fn run_trajectory(cfg: &RunConfig) -> CliResult<Outcome> {
    let model = build_model(cfg)?;
    let opts = TauOptions {
        dtau: cfg.dtau,
        drift_tol: cfg.drift_tol,
        record_every: cfg.sample_every,
        max_steps: None,
    };
    let traj = integrate_tau(&model.grid, &model.phys, cfg.vi0 * model.phys.c(), cfg.periods, &opts)?;
    let e0 = traj.initial_energy();
    let mut table = Table::new(&["tau", "ell", "v_i", "V_Q", "E_Q", "drift"]);
    for s in &traj.states {
        table.push(vec![s.tau, s.ell, s.v_i, s.v_q, s.e_q, s.drift_from(e0)]);
    }
    let file = write_bytes(&cfg.out, &table.render(cfg.format)?)?;
    Ok(Outcome {
        outputs: vec![file],
        derived: Some(model.derived),
        summary: json!({
            "scheme": traj.scheme,
            "dtau": traj.dtau,
            "steps": traj.steps,
            "period_estimate": traj.period_estimate,
            "harmonic_period": model.harmonic.period(),
            "first_period": traj.first_period,
            "last_period": traj.last_period,
            "energy_drift": traj.energy_drift,
            "max_excursion": traj.max_excursion,
        }),
        passed: true,
    })
}

fn sweep_row(cfg: &RunConfig, f: f64, v_o: f64, theta_deg: f64) -> CliResult<Vec<f64>> {
    let phys = physical(cfg, v_o, theta_deg)?;
    let u = uncertainty_products(f, &phys)?;
    let params = ProfileParams::for_particle(f, 1.0, &phys)?;
    let h = HarmonicSpec::for_profile(&params, &phys, cfg.vi0 * phys.c())?;
    Ok(vec![
        v_o,
        theta_deg,
        phys.gamma_o(),
        phys.direction().gamma_s,
        u.dx_dp,
        u.de_dt,
        h.omega,
        h.amplitude,
    ])
}

fn run_uncertainty(cfg: &RunConfig) -> CliResult<Outcome> {
    let model = build_model(cfg)?;
    let (v_o, theta) = (cfg.v_o.single("v-o")?, cfg.theta_deg.single("theta")?);
    let f = model.derived.f;
    let u = uncertainty_products(f, &model.phys)?;
    let z = standard_zbw(&model.phys)?;
    let summary = json!({
        "dx_dp": u.dx_dp,
        "dE_dt": u.de_dt,
        "standard_zbw": { "f": z.f, "omega": z.spec.omega, "amplitude": z.spec.amplitude },
    });
    let bytes = match cfg.format {
        Format::Csv => {
            let mut table = Table::new(&SWEEP_COLUMNS);
            table.push(sweep_row(cfg, f, v_o, theta)?);
            table.to_csv()?
        }
        Format::Json => to_json_bytes(&json!({
            "v_o": v_o,
            "theta": theta,
            "f": f,
            "gamma_o": model.derived.gamma_o,
            "gamma_s": model.derived.gamma_s,
            "dx_dp": u.dx_dp,
            "dE_dt": u.de_dt,
            "omega": model.harmonic.omega,
            "A": model.harmonic.amplitude,
            "period": model.harmonic.period(),
            "standard_zbw": summary["standard_zbw"],
        }))?,
    };
    let file = write_bytes(&cfg.out, &bytes)?;
    Ok(Outcome {
        outputs: vec![file],
        derived: Some(model.derived),
        summary,
        passed: true,
    })
}

pub fn sweep_table(cfg: &RunConfig) -> CliResult<Table> {
    let f = shape_constant(cfg)?;
    let speeds = cfg.v_o.values("v-o")?;
    let angles = cfg.theta_deg.values("theta")?;
    let points: Vec<(f64, f64)> = speeds.iter().flat_map(|&v| angles.iter().map(move |&t| (v, t))).collect();
    if points.is_empty() {
        return Err(CliError::usage("sweep has no points"));
    }
    let mut rows = points
        .par_iter()
        .map(|&(v, t)| sweep_row(cfg, f, v, t))
        .collect::<CliResult<Vec<_>>>()?;
    // Order by parameters, never by completion.
    rows.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    rows.dedup_by(|a, b| a[0] == b[0] && a[1] == b[1]);
    let mut table = Table::new(&SWEEP_COLUMNS);
    table.rows = rows;
    Ok(table)
}

fn run_sweep(cfg: &RunConfig) -> CliResult<Outcome> {
    let table = sweep_table(cfg)?;
    let file = write_bytes(&cfg.out, &table.render(cfg.format)?)?;
    Ok(Outcome {
        outputs: vec![file],
        derived: None,
        summary: json!({ "points": table.rows.len(), "f": shape_constant(cfg)? }),
        passed: true,
    })
}

fn run_verify(cfg: &RunConfig) -> CliResult<Outcome> {
    let model = build_model(cfg)?;
    let grid = match cfg.perturb {
        Some(scale) => {
            log::warn!("scaling sampled amplitudes by {scale} before certification");
            let bumped = model.grid.r().iter().map(|r| r * scale).collect();
            ProfileGrid::from_samples(model.grid.ell().to_vec(), bumped, *model.grid.params())?
        }
        None => model.grid.clone(),
    };
    let kg = kg_split_residual(&grid, &model.phys);

    // Fixed reference case for the non-relativistic family, at the run's mass.
    let (k, v) = (1.0, 0.6);
    let cosine = nonrel_profile(NonRelKind::Cosine, k, 1.0, 0.0, v, cfg.m)?;
    let p = cfg.m * v;
    let nonrel = nonrel_split_residuals(&cosine, p, p * p / (2.0 * cfg.m) + cosine.v_q())?;
    let exponential = nonrel_profile(NonRelKind::Exponential, k, 1.0, 1.0, v, cfg.m)?;

    let nogo = nogo_checks(&[1.0, 10.0, 100.0])?;
    let limit = nonrel_limit_check(grid.params(), &model.phys)?;

    let certified = kg.certified && nonrel.certified && nogo.confirmed;
    let report = json!({
        "certified": certified,
        "kg_split": kg,
        "nonrel": { "profile": cosine, "residuals": nonrel },
        "exponential_divergent": exponential.divergent,
        "exponential_onset": exponential.divergence_onset(),
        "nogo": nogo,
        "limit": limit,
    });
    let file = write_bytes(&cfg.out, &to_json_bytes(&report)?)?;
    if !certified {
        log::error!(
            "verification failed: kg_split {}, nonrel {}, nogo {}",
            kg.certified,
            nonrel.certified,
            nogo.confirmed
        );
    }
    Ok(Outcome {
        outputs: vec![file],
        derived: Some(model.derived),
        summary: json!({
            "certified": certified,
            "kg_split": kg.certified,
            "max_residual_a": kg.max_residual_a,
            "max_residual_b": kg.max_residual_b,
            "max_guidance_residual": kg.max_guidance_residual,
            "nonrel": nonrel.certified,
            "nogo": nogo.confirmed,
            "limit": limit.verdict,
        }),
        passed: certified,
    })
}
