//! One runner per subcommand; each returns the summary JSON plus any data
//! files (name, contents) to be written next to it.

use ncqm_core::algebra::{boost_derivative_check, casimir_invariants, check_exotic_algebra};
use ncqm_core::dynamics::{ehrenfest_residuals, evolve};
use ncqm_core::grid::{Boundary, ThetaTensor};
use ncqm_core::hamiltonian::{build_linear_hamiltonian, build_nc_hamiltonian};
use ncqm_core::perturbation::{
    first_order_shift, paper_delta_e, verify_integral_identities, PerturbationSetup,
};
use ncqm_core::potential::PolynomialPotential;
use ncqm_core::spectra::{linear_solution, nc_ho_energy, solve_eigen, QuantumNumbers};
use ncqm_core::star::moyal_star;
use ncqm_core::wavefunction::WaveFunction;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::{Experiment, RunConfig};
use crate::CliError;

pub struct ExperimentOutput {
    pub summary: Value,
    pub files: Vec<(String, String)>,
}

pub fn run_experiment(exp: Experiment, cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    match exp {
        Experiment::AlgebraCheck => algebra_check(cfg),
        Experiment::Star => star(cfg),
        Experiment::Spectrum => spectrum(cfg),
        Experiment::Linear => linear(cfg),
        Experiment::Evolve => evolve_run(cfg, false),
        Experiment::Ehrenfest => evolve_run(cfg, true),
        Experiment::Perturb => perturb(cfg),
        Experiment::Errata => errata(cfg),
    }
}

fn potential_or_harmonic(cfg: &RunConfig) -> PolynomialPotential {
    cfg.potential
        .clone()
        .unwrap_or_else(|| PolynomialPotential::harmonic(1.0, 1.0))
}

fn algebra_check(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let grid = cfg.grid.build()?;
    let phys = cfg.phys.build()?;
    let ctx = cfg.boost.build()?;
    let theta = ThetaTensor::new(cfg.theta);
    let report = check_exotic_algebra(&grid, &phys, &theta, &ctx, cfg.tolerance, cfg.seed)
        .map_err(CliError::from_core)?;
    let boost_residual = boost_derivative_check(&grid, &phys, &theta, &ctx, cfg.seed)
        .map_err(CliError::from_core)?;
    let (_i1, _i2, casimir) =
        casimir_invariants(&grid, &phys, &theta, &ctx, cfg.tolerance, cfg.seed)
            .map_err(CliError::from_core)?;
    let all_pass = report.all_pass() && casimir.pass;
    Ok(ExperimentOutput {
        summary: json!({
            "algebra": report.to_json(),
            "boost_residual": boost_residual,
            "casimir": serde_json::to_value(&casimir).expect("casimir report"),
            "all_pass": all_pass,
        }),
        files: Vec::new(),
    })
}

fn star(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let theta = ThetaTensor::new(cfg.theta);
    let product = moyal_star(&cfg.star.f, &cfg.star.g, &theta, cfg.star.max_order);
    let reversed = moyal_star(&cfg.star.g, &cfg.star.f, &theta, cfg.star.max_order);
    let comm = product
        .result
        .plus(&reversed.result.scaled(Complex64::new(-1.0, 0.0)));
    Ok(ExperimentOutput {
        summary: json!({
            "result": serde_json::to_value(&product.result).expect("potential emits"),
            "truncated": product.truncated,
            "star_commutator": serde_json::to_value(&comm).expect("potential emits"),
        }),
        files: Vec::new(),
    })
}

fn spectrum(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let grid = cfg.grid.build()?;
    let phys = cfg.phys.build()?;
    let theta = ThetaTensor::new(cfg.theta);
    let v = potential_or_harmonic(cfg);
    let h = build_nc_hamiltonian(&v, &grid, &phys, &theta).map_err(CliError::from_core)?;
    let res = solve_eigen(&h, cfg.solver.k, cfg.solver.method.into()).map_err(CliError::from_core)?;
    let mut summary = res.to_json();
    // isotropic harmonic potentials get the closed-form reference levels
    if let (Some(wx), Some(wy)) = (v.omega_x(), v.omega_y()) {
        if (wx - wy).abs() < 1e-14 && v.num_terms() == 2 {
            let closed: Vec<f64> = (0..cfg.solver.k as u32)
                .map(|n| nc_ho_energy(QuantumNumbers::new(n, 0), wx, &theta).expect("omega > 0"))
                .collect();
            summary["closed_form_towers"] = json!(closed);
        }
    }
    let mut files = Vec::new();
    for i in 0..res.eigenvectors.len().min(4) {
        if let Some(csv) = res.eigenvector_csv(i) {
            files.push((format!("eigvec_{i:02}.csv"), csv));
        }
    }
    Ok(ExperimentOutput { summary, files })
}

fn linear(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    if cfg.grid.boundary != Boundary::Dirichlet {
        return Err(CliError::Validation(
            "linear needs grid.boundary = \"dirichlet\" (try --set grid.boundary=dirichlet)"
                .into(),
        ));
    }
    let grid = cfg.grid.build()?;
    let phys = cfg.phys.build()?;
    let (alpha, beta) = (cfg.linear.alpha, cfg.linear.beta);
    let h0 = build_linear_hamiltonian(alpha, beta, &grid, &phys, &ThetaTensor::zero())
        .map_err(CliError::from_core)?;
    let ht = build_linear_hamiltonian(alpha, beta, &grid, &phys, &ThetaTensor::new(cfg.theta))
        .map_err(CliError::from_core)?;
    let k = cfg.solver.k;
    let r0 = solve_eigen(&h0, k, cfg.solver.method.into()).map_err(CliError::from_core)?;
    let rt = solve_eigen(&ht, k, cfg.solver.method.into()).map_err(CliError::from_core)?;
    let expected_shift = -cfg.theta * cfg.theta * (alpha * alpha + beta * beta) / 8.0;
    let shifts: Vec<f64> = rt
        .eigenvalues
        .iter()
        .zip(&r0.eigenvalues)
        .map(|(t, z)| t - z)
        .collect();
    let moduli_max_diff = rt
        .eigenvectors
        .iter()
        .zip(&r0.eigenvectors)
        .map(|(a, b)| {
            a.data()
                .iter()
                .zip(b.data())
                .map(|(u, v)| (u.norm() - v.norm()).abs())
                .fold(0.0_f64, f64::max)
        })
        .fold(0.0_f64, f64::max);

    let profile = linear_solution(alpha, beta, cfg.linear.energy, &grid)
        .map_err(CliError::from_core)?;
    let mut profile_csv = String::from("x,y,re,im\n");
    let g = profile.grid();
    for iy in 0..g.ny {
        for ix in 0..g.nx {
            let z = profile.data()[g.idx(ix, iy)];
            profile_csv.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                g.x(ix),
                g.y(iy),
                z.re,
                z.im
            ));
        }
    }

    let mut files = vec![("airy_profile.csv".to_string(), profile_csv)];
    for i in 0..rt.eigenvectors.len().min(3) {
        if let Some(csv) = rt.eigenvector_csv(i) {
            files.push((format!("eigvec_theta_{i:02}.csv"), csv));
        }
    }
    Ok(ExperimentOutput {
        summary: json!({
            "eigenvalues_theta": rt.eigenvalues,
            "eigenvalues_zero": r0.eigenvalues,
            "shifts": shifts,
            "expected_shift": expected_shift,
            "moduli_max_diff": moduli_max_diff,
            "residuals_theta": rt.residuals,
        }),
        files,
    })
}

fn evolve_run(cfg: &RunConfig, with_ehrenfest: bool) -> Result<ExperimentOutput, CliError> {
    let grid = cfg.grid.build()?;
    let phys = cfg.phys.build()?;
    let theta = ThetaTensor::new(cfg.theta);
    let v = potential_or_harmonic(cfg);
    let h = build_nc_hamiltonian(&v, &grid, &phys, &theta).map_err(CliError::from_core)?;
    let e = &cfg.evolve;
    let psi0 = WaveFunction::gaussian(grid, e.x0, e.y0, e.sigma, e.px, e.py)
        .map_err(CliError::from_core)?;
    let trace =
        evolve(&h, &psi0, e.dt, e.steps, &phys, &v, &theta).map_err(CliError::from_core)?;
    let mut summary = trace.summary_json();
    let mut files = vec![("trace.csv".to_string(), trace.to_csv())];
    if with_ehrenfest {
        let resid = ehrenfest_residuals(&trace, &v, &theta, &phys).map_err(CliError::from_core)?;
        summary["ehrenfest"] = json!({
            "max_rx": resid.max_rx(),
            "max_rp": resid.max_rp(),
            "max_rp_literal": resid.max_rp_literal(),
            "stencil_order": resid.stencil_order,
        });
        let mut csv = String::from("t,rx1,rx2,rp1,rp2,rp1_literal,rp2_literal\n");
        for i in 0..resid.times.len() {
            csv.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                resid.times[i],
                resid.r_x[0][i],
                resid.r_x[1][i],
                resid.r_p[0][i],
                resid.r_p[1][i],
                resid.r_p_literal[0][i],
                resid.r_p_literal[1][i],
            ));
        }
        files.push(("ehrenfest_residuals.csv".to_string(), csv));
    }
    Ok(ExperimentOutput { summary, files })
}

fn perturb(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let p = &cfg.perturb;
    let setup = PerturbationSetup::new(
        QuantumNumbers::new(p.n1, p.n2),
        p.omega,
        cfg.theta,
        p.alpha_c,
        p.gamma,
    )
    .map_err(CliError::from_core)?;
    let shift = first_order_shift(&setup, p.basis_size).map_err(CliError::from_core)?;
    let paper = paper_delta_e(&setup);
    Ok(ExperimentOutput {
        summary: json!({
            "setup": serde_json::to_value(setup).expect("setup emits"),
            "first_order_shift": shift.value,
            "cubic_part": shift.cubic_part,
            "quartic_part": shift.quartic_part,
            "converged": shift.converged,
            "paper_delta_e": paper,
            "difference": shift.value - paper,
        }),
        files: Vec::new(),
    })
}

fn errata(cfg: &RunConfig) -> Result<ExperimentOutput, CliError> {
    let report = verify_integral_identities(cfg.errata.max_n).map_err(CliError::from_core)?;
    let mismatches: Vec<Value> = report
        .mismatches()
        .map(|c| serde_json::to_value(c).expect("check emits"))
        .collect();
    Ok(ExperimentOutput {
        summary: json!({
            "report": report.to_json(),
            "mismatch_count": mismatches.len(),
            "mismatches": mismatches,
        }),
        files: Vec::new(),
    })
}
