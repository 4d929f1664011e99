//! Internal 2D FFT engine on row-major grids, with cached plans.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

struct PlanCache {
    planner: FftPlanner<f64>,
    plans: HashMap<(usize, bool), Arc<dyn Fft<f64>>>,
}

fn cache() -> &'static Mutex<PlanCache> {
    static CACHE: OnceLock<Mutex<PlanCache>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(PlanCache { planner: FftPlanner::new(), plans: HashMap::new() })
    })
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut c = cache().lock().expect("fft plan cache poisoned");
    if let Some(p) = c.plans.get(&(n, forward)) {
        return Arc::clone(p);
    }
    let dir = if forward { FftDirection::Forward } else { FftDirection::Inverse };
    let p = c.planner.plan_fft(n, dir);
    c.plans.insert((n, forward), Arc::clone(&p));
    p
}

fn transform_rows(data: &mut [Complex64], nx: usize, ny: usize, forward: bool) {
    let p = plan(nx, forward);
    let mut scratch = vec![Complex64::default(); p.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(nx) {
        p.process_with_scratch(row, &mut scratch);
    }
    let _ = ny;
}

fn transform_cols(data: &mut [Complex64], nx: usize, ny: usize, forward: bool) {
    let p = plan(ny, forward);
    let mut scratch = vec![Complex64::default(); p.get_inplace_scratch_len()];
    let mut col = vec![Complex64::default(); ny];
    for ix in 0..nx {
        for iy in 0..ny {
            col[iy] = data[iy * nx + ix];
        }
        p.process_with_scratch(&mut col, &mut scratch);
        for iy in 0..ny {
            data[iy * nx + ix] = col[iy];
        }
    }
}

/// In-place unnormalized forward 2D FFT of a row-major `ny × nx` field.
pub fn fft2_forward(data: &mut [Complex64], nx: usize, ny: usize) {
    debug_assert_eq!(data.len(), nx * ny);
    transform_rows(data, nx, ny, true);
    transform_cols(data, nx, ny, true);
}

/// In-place inverse 2D FFT including the 1/(nx·ny) normalization.
pub fn fft2_inverse(data: &mut [Complex64], nx: usize, ny: usize) {
    debug_assert_eq!(data.len(), nx * ny);
    transform_rows(data, nx, ny, false);
    transform_cols(data, nx, ny, false);
    let scale = 1.0 / (nx * ny) as f64;
    for z in data.iter_mut() {
        *z *= scale;
    }
}

/// In-place forward 1D FFT (unnormalized).
pub fn fft1_forward(data: &mut [Complex64]) {
    let p = plan(data.len(), true);
    let mut scratch = vec![Complex64::default(); p.get_inplace_scratch_len()];
    p.process_with_scratch(data, &mut scratch);
}

/// In-place inverse 1D FFT including the 1/n normalization.
pub fn fft1_inverse(data: &mut [Complex64]) {
    let n = data.len();
    let p = plan(n, false);
    let mut scratch = vec![Complex64::default(); p.get_inplace_scratch_len()];
    p.process_with_scratch(data, &mut scratch);
    let scale = 1.0 / n as f64;
    for z in data.iter_mut() {
        *z *= scale;
    }
}
