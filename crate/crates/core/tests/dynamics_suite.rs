//! Crank–Nicolson propagation and the Ehrenfest relations: unitarity,
//! stationarity, classical motion and θ-corrections.

use num_complex::Complex64;
use ncqm_core::dynamics::{ehrenfest_residuals, evolve, expectation};
use ncqm_core::grid::{Grid2D, PhysParams, ThetaTensor};
use ncqm_core::hamiltonian::build_nc_hamiltonian;
use ncqm_core::potential::PolynomialPotential;
use ncqm_core::spectra::{solve_eigen, EigenMethod};
use ncqm_core::wavefunction::{inner_product, WaveFunction};

fn grid32() -> Grid2D {
    Grid2D::periodic(32, 32, 8.0, 8.0).unwrap()
}

#[test]
fn coherent_state_oscillates_classically() {
    // ⟨x⟩(t) = x₀ cos t for the displaced ground state of the ω = 1 well
    let g = grid32();
    let phys = PhysParams::default();
    let v = PolynomialPotential::harmonic(1.0, 1.0);
    let h = build_nc_hamiltonian(&v, &g, &phys, &ThetaTensor::zero()).unwrap();
    let psi0 = WaveFunction::gaussian(g, 1.0, 0.0, 1.0, 0.0, 0.0).unwrap();
    let dt = 1e-3;
    let steps = (2.0 * std::f64::consts::PI / dt).round() as usize;
    let trace = evolve(&h, &psi0, dt, steps, &phys, &v, &ThetaTensor::zero()).unwrap();
    let mut worst = 0.0_f64;
    for (i, t) in trace.times.iter().enumerate() {
        worst = worst.max((trace.x1[i] - t.cos()).abs());
    }
    assert!(worst <= 1e-4, "classical oscillation error {worst}");
    // unitarity along the way
    for n in &trace.norm {
        assert!((n - 1.0).abs() <= 1e-8, "norm drift {n}");
    }
}

#[test]
fn nc_ground_state_is_stationary() {
    let g = grid32();
    let phys = PhysParams::default();
    let theta = ThetaTensor::new(0.5);
    let v = PolynomialPotential::harmonic(1.0, 1.0);
    let h = build_nc_hamiltonian(&v, &g, &phys, &theta).unwrap();
    let ground = solve_eigen(&h, 1, EigenMethod::Dense).unwrap();
    let psi0 = ground.eigenvectors[0].clone();
    let trace = evolve(&h, &psi0, 1e-3, 1000, &phys, &v, &theta).unwrap();
    let e0 = trace.energy[0];
    for i in 0..trace.times.len() {
        assert!((trace.energy[i] - e0).abs() <= 1e-8 * e0.abs(), "energy drift");
        assert!((trace.norm[i] - 1.0).abs() <= 1e-8, "norm drift");
    }
    assert!((e0 - ground.eigenvalues[0]).abs() < 1e-8, "⟨H⟩ vs eigenvalue");
}

#[test]
fn time_reversal_recovers_initial_state() {
    let g = grid32();
    let phys = PhysParams::default();
    let theta = ThetaTensor::new(0.3);
    let v = PolynomialPotential::harmonic(1.0, 1.0);
    let h = build_nc_hamiltonian(&v, &g, &phys, &theta).unwrap();
    let psi0 = WaveFunction::gaussian(g, 0.7, -0.4, 1.0, 0.3, 0.0).unwrap();
    let fwd = evolve(&h, &psi0, 1e-2, 100, &phys, &v, &theta).unwrap();
    let back = evolve(
        &h,
        fwd.states.last().unwrap(),
        -1e-2,
        100,
        &phys,
        &v,
        &theta,
    )
    .unwrap();
    let fid = inner_product(&psi0, back.states.last().unwrap()).unwrap().norm();
    assert!(fid >= 1.0 - 1e-8, "time-reversal fidelity {fid}");
}

#[test]
fn ehrenfest_linear_potential_residuals() {
    // linear V: the Bopp expansion terminates, Eqs. of motion exact up to
    // integrator and stencil error (O(dt²))
    let g = grid32();
    let phys = PhysParams::default();
    let theta = ThetaTensor::new(0.4);
    let (alpha, beta) = (0.7, -0.4);
    let v = PolynomialPotential::linear(alpha, beta);
    let h = build_nc_hamiltonian(&v, &g, &phys, &theta).unwrap();
    let psi0 = WaveFunction::gaussian(g, 0.0, 0.0, 0.7, 0.0, 0.0).unwrap();
    let trace = evolve(&h, &psi0, 1e-3, 500, &phys, &v, &theta).unwrap();
    let resid = ehrenfest_residuals(&trace, &v, &theta, &phys).unwrap();
    assert!(resid.max_rx() <= 1e-4, "r_x max {}", resid.max_rx());
    assert!(resid.max_rp() <= 1e-4, "r_p max {}", resid.max_rp());
    assert_eq!(resid.stencil_order, 2);

    // Eq. (8) θ-term: d/dt⟨x₁⟩ − ⟨p̂₁⟩/m = −(θ/2ħ)β uniformly in t
    for (i, _t) in resid.times.iter().enumerate() {
        let j = i + 1; // interior index in the parent trace
        let dxdt = (trace.x1[j + 1] - trace.x1[j - 1]) / (2.0 * trace.meta.dt);
        let lhs = dxdt - trace.p1[j] / phys.mass;
        let expect = -(theta.theta / (2.0 * phys.hbar)) * beta;
        assert!(
            (lhs - expect).abs() <= 1e-4,
            "θ-term at t_{j}: {lhs} vs {expect}"
        );
    }
}

#[test]
fn ehrenfest_second_order_in_dt() {
    // wider packet and finer grid keep the spatial floor orders below the
    // dt² part being measured
    let g = Grid2D::periodic(48, 48, 8.0, 8.0).unwrap();
    let phys = PhysParams::default();
    let theta = ThetaTensor::new(0.4);
    let v = PolynomialPotential::linear(0.7, -0.4);
    let h = build_nc_hamiltonian(&v, &g, &phys, &theta).unwrap();
    let psi0 = WaveFunction::gaussian(g, 0.0, 0.0, 1.0, 0.0, 0.0).unwrap();
    let run = |dt: f64, steps: usize| -> f64 {
        let trace = evolve(&h, &psi0, dt, steps, &phys, &v, &theta).unwrap();
        let r = ehrenfest_residuals(&trace, &v, &theta, &phys).unwrap();
        r.max_rx().max(r.max_rp())
    };
    let coarse = run(2e-3, 250);
    let fine = run(1e-3, 500);
    let ratio = coarse / fine;
    assert!(
        (3.5..=4.5).contains(&ratio),
        "dt-halving ratio {ratio} (coarse {coarse}, fine {fine})"
    );
}

#[test]
fn ehrenfest_theta_zero_is_ordinary() {
    let g = grid32();
    let phys = PhysParams::default();
    let v = PolynomialPotential::harmonic(1.0, 1.0);
    let h = build_nc_hamiltonian(&v, &g, &phys, &ThetaTensor::zero()).unwrap();
    let psi0 = WaveFunction::gaussian(g, 0.8, 0.0, 1.0, 0.0, 0.4).unwrap();
    let trace = evolve(&h, &psi0, 1e-3, 500, &phys, &v, &ThetaTensor::zero()).unwrap();
    let resid = ehrenfest_residuals(&trace, &v, &ThetaTensor::zero(), &phys).unwrap();
    assert!(resid.max_rx() <= 1e-4);
    assert!(resid.max_rp() <= 1e-4);
    // at θ = 0 both contractions coincide
    assert!((resid.max_rp() - resid.max_rp_literal()).abs() < 1e-12);
}

#[test]
fn ehrenfest_quadratic_theta_scaling() {
    // harmonic V at θ ≠ 0: the relations hold to O(θ²); halving θ cuts the
    // residual by ≳ 3.5×
    let g = grid32();
    let phys = PhysParams::default();
    let v = PolynomialPotential::harmonic(1.0, 1.0);
    let run = |theta_val: f64| -> f64 {
        let theta = ThetaTensor::new(theta_val);
        let h = build_nc_hamiltonian(&v, &g, &phys, &theta).unwrap();
        let psi0 = WaveFunction::gaussian(g, 0.8, -0.5, 1.0, 0.0, 0.0).unwrap();
        let trace = evolve(&h, &psi0, 1e-3, 400, &phys, &v, &theta).unwrap();
        let r = ehrenfest_residuals(&trace, &v, &theta, &phys).unwrap();
        r.max_rx()
    };
    let full = run(0.4);
    let half = run(0.2);
    assert!(
        full / half >= 3.5,
        "θ-halving ratio {} (full {full}, half {half})",
        full / half
    );
    // the literal-index contraction misses at O(θ) for this potential and
    // is reported alongside (here it only differs in r_p)
    let theta = ThetaTensor::new(0.4);
    let h = build_nc_hamiltonian(&v, &g, &phys, &theta).unwrap();
    let psi0 = WaveFunction::gaussian(g, 0.8, -0.5, 1.0, 0.0, 0.0).unwrap();
    let trace = evolve(&h, &psi0, 1e-3, 400, &phys, &v, &theta).unwrap();
    let r = ehrenfest_residuals(&trace, &v, &theta, &phys).unwrap();
    assert!(
        r.max_rp_literal() > 5.0 * r.max_rp(),
        "derived contraction {} should beat the literal one {}",
        r.max_rp(),
        r.max_rp_literal()
    );
}

#[test]
fn expectation_of_eigenstate_is_eigenvalue() {
    let g = grid32();
    let phys = PhysParams::default();
    let v = PolynomialPotential::harmonic(1.0, 1.0);
    let h = build_nc_hamiltonian(&v, &g, &phys, &ThetaTensor::new(0.25)).unwrap();
    let res = solve_eigen(&h, 3, EigenMethod::Dense).unwrap();
    for k in 0..3 {
        let e = expectation(&h, &res.eigenvectors[k]).unwrap();
        assert!(
            (e.re - res.eigenvalues[k]).abs() <= 1e-8,
            "⟨H⟩ {} vs λ {}",
            e.re,
            res.eigenvalues[k]
        );
        assert!(e.im.abs() <= 1e-10);
    }
}

#[test]
fn trace_csv_format() {
    let g = Grid2D::periodic(16, 16, 4.0, 4.0).unwrap();
    let phys = PhysParams::default();
    let v = PolynomialPotential::zero();
    let h = build_nc_hamiltonian(&v, &g, &phys, &ThetaTensor::zero()).unwrap();
    let psi0 = WaveFunction::gaussian(g, 0.0, 0.0, 0.8, 0.0, 0.0).unwrap();
    let trace = evolve(&h, &psi0, 1e-2, 3, &phys, &v, &ThetaTensor::zero()).unwrap();
    let csv = trace.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,x1,x2,p1,p2,energy,norm");
    assert_eq!(csv.lines().count(), 1 + 4);
    let parsed: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(parsed.len(), 7);
    assert_eq!(parsed[0], 0.0);
    // metadata hash is stable across identical configs
    assert_eq!(
        trace.meta.potential_hash,
        ncqm_core::dynamics::potential_hash(&v)
    );
    let c = Complex64::new(1.0, 0.0);
    let _ = c;
}
