//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use zbw_core::dynamics::{
    integrate_tau, standard_zbw, tau_acceleration, turning_point, uncertainty_products, HarmonicSpec, Leapfrog,
    TauOptions,
};
use zbw_core::field::{energy_budget, field_sample, hamiltonian, kg_split_residual, quantum_potential};
use zbw_core::kinematics::PhysicalParams;
use zbw_core::nonrel::{
    constant_h_check, nogo_checks, nonrel_limit_check, nonrel_profile, nonrel_split_residuals, LimitVerdict,
    NonRelKind,
};
use zbw_core::profile::{integrate_profile, profile_extremes, shape_map, solve_f, ProfileGrid, ProfileParams};

struct Report {
    failed: usize,
    total: usize,
}

impl Report {
    fn record(&mut self, id: u32, name: &str, pass: bool, detail: String) {
        self.total += 1;
        if !pass {
            self.failed += 1;
        }
        println!("{} {id:>2} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn rest_frame() -> PhysicalParams {
    PhysicalParams::natural(1e-9, 0.0).expect("valid")
}

fn standard_grid(phys: &PhysicalParams) -> ProfileGrid {
    let f = solve_f(2.0).expect("root");
    let p = ProfileParams::for_particle(f, 1.0, phys).expect("params");
    integrate_profile(&p, 0.05, 4001).expect("grid")
}

fn within(x: f64, want: f64, tol: f64) -> bool {
    (x - want).abs() <= tol
}

fn main() -> ExitCode {
    let mut rep = Report { failed: 0, total: 0 };
    let phys = rest_frame();
    let grid = standard_grid(&phys);
    let f = grid.params().f();
    let full = integrate_tau(&grid, &phys, 1.0, 10, &TauOptions { record_every: 100, ..TauOptions::default() })
        .expect("orbit");

    // 1
    let reps = 2000;
    let start = Instant::now();
    let mut acc = 0.0;
    for i in 0..reps {
        acc += solve_f(2.0 + 1e-12 * i as f64).expect("root");
    }
    let per_call = start.elapsed().as_secs_f64() / reps as f64;
    std::hint::black_box(acc);
    rep.record(
        1,
        "shape constant",
        within(f, 0.839, 1e-3) && per_call < 1e-3,
        format!("f = {f:.9} (want 0.839 ± 0.001), {:.2} µs per solve (want < 1 ms)", per_call * 1e6),
    );

    // 2
    let ext = profile_extremes(grid.params()).expect("extremes");
    let closed = 1.0 / (1.0 + 1.0 / (2.0 * f)).sqrt();
    let reached = grid.eval(full.max_excursion).expect("inside grid");
    rep.record(
        2,
        "amplitude minimum",
        within(ext.r_m_ratio, 0.79, 5e-3) && within(ext.r_m_ratio, closed, 1e-15) && within(reached, closed, 1e-8),
        format!("R_m/R_M = {:.6} (want 0.79 ± 0.005), orbit reaches R = {reached:.9}", ext.r_m_ratio),
    );

    // 3
    let ell_turn = full.max_excursion;
    let v_turn = quantum_potential(reached, grid.params(), &phys).expect("V_Q");
    let want_v = phys.energy_scale() * (f + 0.5);
    rep.record(
        3,
        "turning point",
        within(ell_turn, 0.42, 0.01) && within(v_turn, want_v, 1e-3),
        format!(
            "ℓ_turn = {ell_turn:.6} λ_r (want 0.42 ± 0.01; quadratic estimate {:.6}), V_Q(ℓ_turn) = {v_turn:.9} (want {want_v:.9} ± 1e-3)",
            ext.ell_m_quadratic_estimate
        ),
    );

    // 4
    let budget = energy_budget(grid.params(), &phys, 1.0).expect("budget");
    let turn = turning_point(&grid, &phys, 1.0).expect("turning point");
    let h_min = field_sample(0.0, &grid, &phys).expect("origin").h;
    let h_max = hamiltonian(grid.eval(turn).expect("inside"), grid.params(), &phys).expect("H");
    let spread = h_max - h_min;
    rep.record(
        4,
        "Hamiltonian oscillation",
        within(spread, 0.5, 1e-9) && within(budget.h_max - budget.h_min, 0.5, 1e-9),
        format!(
            "H(ℓ_turn) − H(0) = {spread:.12}, budget spread = {:.12} (want 0.5 ± 1e-9)",
            budget.h_max - budget.h_min
        ),
    );

    // 5
    let z = standard_zbw(&phys).expect("zbw");
    let ok5 = within(z.spec.amplitude, 0.5, 1e-12)
        && within(z.spec.omega, 2.0, 1e-12)
        && within(z.f, 0.839, 1e-3)
        && within(z.f, f, 1e-12);
    rep.record(
        5,
        "standard Zitterbewegung",
        ok5,
        format!("A = {:.12}, ω = {:.12}, f = {:.9}", z.spec.amplitude, z.spec.omega, z.f),
    );

    // 6
    let base = PhysicalParams::natural(0.6, 0.0).expect("valid");
    let doubled = PhysicalParams::natural((1.0f64 - 1.0 / 6.25).sqrt(), 0.0).expect("valid");
    let u1 = uncertainty_products(f, &base).expect("u");
    let u2 = uncertainty_products(f, &doubled).expect("u");
    let ratio = u2.dx_dp / u1.dx_dp;
    let rest_u = uncertainty_products(f, &phys).expect("u");
    let closed_dx = 1.0 / (shape_map(f) * base.gamma_o());
    let transverse: Vec<f64> = (1..=9)
        .map(|i| {
            let p = PhysicalParams::natural(0.1 * i as f64, PI / 2.0).expect("valid");
            uncertainty_products(f, &p).expect("u").dx_dp
        })
        .collect();
    let t_spread = transverse.iter().cloned().fold(f64::MIN, f64::max) - transverse.iter().cloned().fold(f64::MAX, f64::min);
    let de_ok = within(u1.de_dt, PI / (2.0 * shape_map(f) * base.gamma_o()), 1e-12) && within(rest_u.de_dt, PI / 4.0, 1e-12);
    rep.record(
        6,
        "uncertainty scaling",
        within(ratio, 0.5, 1e-12) && within(u1.dx_dp, closed_dx, 1e-12) && t_spread <= 1e-12 && de_ok,
        format!(
            "ratio = {ratio:.15} (want 0.5 ± 1e-12), transverse spread = {t_spread:.1e}, ΔEΔt(rest) = {:.12}",
            rest_u.de_dt
        ),
    );

    // 7
    let period = full.period_estimate;
    let oracle = common::period_oracle(f, 1.0, 1.0);
    let steps = (period / full.dtau).round() as usize;
    let fwd = Leapfrog::new(&grid, &phys, full.dtau).expect("stepper");
    let back = Leapfrog::new(&grid, &phys, -full.dtau).expect("stepper");
    let (l, v) = fwd.run(0.0, 1.0, steps).expect("forward");
    let (l0, v0) = back.run(l, v, steps).expect("backward");
    let round_trip = l0.abs().max((v0 - 1.0).abs());
    let period_err = (period / oracle - 1.0).abs();
    rep.record(
        7,
        "energy conservation",
        full.energy_drift <= 1e-8 && round_trip <= 1e-8 && period_err <= 1e-6,
        format!(
            "drift = {:.2e} over 10 periods (want ≤ 1e-8), round trip = {round_trip:.2e} (want ≤ 1e-8), period {period:.10} vs oracle {oracle:.10}, rel {period_err:.1e} (want ≤ 1e-6)",
            full.energy_drift
        ),
    );

    // 8
    let mut worst = 0.0f64;
    let mut all_certified = true;
    let mut configs = 0;
    for &fc in &[0.1, 0.45, f, 2.0, 4.0] {
        for &(v_o, theta) in &[(1e-6, 0.0), (0.6, 0.0), (0.95, 0.7), (0.3, PI / 2.0)] {
            let ph = PhysicalParams::natural(v_o, theta).expect("valid");
            let p = ProfileParams::for_particle(fc, 1.0, &ph).expect("params");
            let g = integrate_profile(&p, 0.05, 4001).expect("grid");
            let r = kg_split_residual(&g, &ph);
            worst = worst.max(r.max_residual_a).max(r.max_residual_b).max(r.max_guidance_residual);
            all_certified &= r.certified;
            configs += 1;
        }
    }
    let bumped: Vec<f64> = grid.r().iter().map(|r| 1.1 * r).collect();
    let fake = ProfileGrid::from_samples(grid.ell().to_vec(), bumped, *grid.params()).expect("grid");
    let fake_rep = kg_split_residual(&fake, &phys);
    let fake_worst = fake_rep.max_residual_a.max(fake_rep.max_residual_b);
    rep.record(
        8,
        "first-integral certification",
        all_certified && worst < 1e-6 && !fake_rep.certified && fake_worst > 1e-2,
        format!("{configs} grids, worst residual {worst:.2e} (want < 1e-6); 10% perturbation residual {fake_worst:.3e} (want > 1e-2)"),
    );

    // 9
    let w = HarmonicSpec::for_profile(grid.params(), &phys, 1.0).expect("spec").omega;
    let lam = grid.params().lambda_r();
    let mut acc_dev = 0.0f64;
    for i in 1..=100 {
        let ell = 0.05 * lam * i as f64 / 100.0;
        for s in [ell, -ell] {
            let a = tau_acceleration(s, &grid, &phys).expect("inside");
            acc_dev = acc_dev.max((a / (-w * w * s) - 1.0).abs());
        }
    }
    let slow = integrate_tau(&grid, &phys, 0.01, 3, &TauOptions { record_every: 1000, ..TauOptions::default() })
        .expect("orbit");
    let slow_err = (slow.period_estimate * w / (2.0 * PI) - 1.0).abs();
    rep.record(
        9,
        "harmonic consistency",
        acc_dev <= 0.01 && slow_err <= 1e-3,
        format!("max |a/(−ω²ℓ) − 1| on |ℓ| ≤ 0.05 λ_r = {acc_dev:.5} (want ≤ 0.01), period error at 0.01c = {slow_err:.2e} (want ≤ 1e-3)"),
    );

    // 10
    let cos = nonrel_profile(NonRelKind::Cosine, 1.0, 1.0, 0.0, 0.6, 1.0).expect("profile");
    let res = nonrel_split_residuals(&cos, 0.6, 0.18 + cos.v_q()).expect("residuals");
    let exp = nonrel_profile(NonRelKind::Exponential, 1.0, 1.0, 1.0, 0.6, 1.0).expect("profile");
    let worst10 = res.v_q_stddev.max(res.v_q_max_deviation).max(res.hj_max).max(res.continuity_max);
    rep.record(
        10,
        "non-relativistic suite",
        worst10 < 1e-5 && exp.divergent && !cos.divergent,
        format!(
            "V_Q spread {:.1e}, HJ {:.1e}, continuity {:.1e} (want < 1e-5); exponential divergent = {}",
            res.v_q_max_deviation, res.hj_max, res.continuity_max, exp.divergent
        ),
    );

    // 11
    let nogo = nogo_checks(&[1.0, 10.0, 100.0]).expect("nogo");
    let forced = constant_h_check(0.5, 1.0, &PhysicalParams::natural(0.5, 0.0).expect("valid")).expect("check");
    let slopes_ok = nogo.log_slopes.iter().all(|s| (s + 2.0).abs() <= 0.05);
    rep.record(
        11,
        "no-go demonstrations",
        forced.unique && forced.v_q == 0.0 && slopes_ok && nogo.last_term_spread <= 1e-12 && nogo.no_root,
        format!(
            "forced H = {:.12} (mγc² = {:.12}), log slopes {:?} (want −2 ± 0.05), 2γ³ = {:.12}, spread {:.1e}",
            forced.forced_h,
            forced.rest_energy,
            nogo.log_slopes.iter().map(|s| (s * 1e4).round() / 1e4).collect::<Vec<_>>(),
            nogo.per_mass[0].last,
            nogo.last_term_spread
        ),
    );

    // 12
    let p12 = ProfileParams::new(0.839, 1.0, 1.0).expect("params");
    let lim = nonrel_limit_check(&p12, &phys).expect("limit");
    let closed12 = 0.839 * 2.839;
    let mut ratios = Vec::new();
    for hbar in [1.0, 0.5, 1e-3, 40.0] {
        let ph = PhysicalParams::natural(0.4, 0.3).expect("valid").with_hbar(hbar).expect("valid");
        let p = ProfileParams::for_particle(0.839, 1.0, &ph).expect("params");
        ratios.push(nonrel_limit_check(&p, &ph).expect("limit").v_qm_ratio);
    }
    let hbar_spread = ratios.iter().cloned().fold(f64::MIN, f64::max) - ratios.iter().cloned().fold(f64::MAX, f64::min);
    rep.record(
        12,
        "limit-validity verdict",
        within(lim.correction, closed12, 1e-9)
            && within(lim.correction, 2.382, 5e-4)
            && lim.verdict == LimitVerdict::ExpansionInvalid
            && hbar_spread <= 1e-12,
        format!(
            "|λ_r² R̈/R|(0) = {:.12} (f(f+2) = {closed12:.12}, quoted 2.382), verdict {:?}, V_QM/(mγc²) spread over ħ = {hbar_spread:.1e}",
            lim.correction, lim.verdict
        ),
    );

    println!("{} of {} criteria passed", rep.total - rep.failed, rep.total);
    if rep.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
