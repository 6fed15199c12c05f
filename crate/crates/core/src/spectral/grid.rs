use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Largest number of grid points accepted (per blade).
pub const MAX_POINTS: usize = 1 << 24;

struct GridCache {
    /// Integer frequency `m` per axis index.
    m_axis: Vec<i64>,
    /// Wavenumber `κ m` with the Nyquist entry set to zero.
    k_axis: Vec<f64>,
    /// `|k|²` per flat frequency index.
    ksq: Vec<f64>,
    /// `k_axis` expanded to flat indices, one array per axis.
    k_flat: Vec<Vec<f64>>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

/// Uniform grid on the flat torus `𝕋ⁿ_L` with `N` points per axis.
///
/// Data are laid out row-major with axis 0 slowest. The frequency attached to
/// axis index `j` is `m = j` for `j ≤ N/2` and `m = j − N` otherwise.
/// Differential multipliers use `k = (2π/L)m` except at the Nyquist index,
/// where the wavenumber is taken as 0 so that derivatives of real fields stay
/// real and `dδ + δd` remains the `|k|²` multiplier.
#[derive(Clone)]
pub struct TorusGrid {
    n: usize,
    size: usize,
    period: f64,
    cache: Arc<GridCache>,
}

impl TorusGrid {
    pub fn new(n: usize, size: usize, period: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGrid("dimension must be positive".into()));
        }
        if size < 2 || !size.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("N = {size} is not a power of two >= 2")));
        }
        if !(period.is_finite() && period > 0.0) {
            return Err(Error::InvalidGrid(format!("period L = {period} must be positive")));
        }
        let total = (0..n)
            .try_fold(1usize, |acc, _| acc.checked_mul(size).filter(|&t| t <= MAX_POINTS))
            .ok_or_else(|| Error::InvalidGrid(format!("N^n = {size}^{n} exceeds {MAX_POINTS} points")))?;

        let kappa = 2.0 * PI / period;
        let half = (size / 2) as i64;
        let m_axis: Vec<i64> = (0..size as i64).map(|j| if j <= half { j } else { j - size as i64 }).collect();
        let k_axis: Vec<f64> = m_axis.iter().map(|&m| if m == half { 0.0 } else { kappa * m as f64 }).collect();
        let mut k_flat = vec![vec![0.0; total]; n];
        for (axis, ks) in k_flat.iter_mut().enumerate() {
            let stride = size.pow((n - 1 - axis) as u32);
            for (idx, k) in ks.iter_mut().enumerate() {
                *k = k_axis[(idx / stride) % size];
            }
        }
        let ksq: Vec<f64> = (0..total).map(|idx| k_flat.iter().map(|ks| ks[idx] * ks[idx]).sum()).collect();
        let mut planner = FftPlanner::new();
        let cache = GridCache {
            m_axis,
            k_axis,
            ksq,
            k_flat,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        };
        Ok(TorusGrid { n, size, period, cache: Arc::new(cache) })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Points per axis.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    /// Total number of grid points `Nⁿ`.
    pub fn len(&self) -> usize {
        self.cache.ksq.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn kappa(&self) -> f64 {
        2.0 * PI / self.period
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.size as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.n as i32)
    }

    pub fn volume(&self) -> f64 {
        self.period.powi(self.n as i32)
    }

    /// Flat-index stride of `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        self.size.pow((self.n - 1 - axis) as u32)
    }

    /// Index along `axis` of the flat index `idx`.
    pub fn axis_index(&self, idx: usize, axis: usize) -> usize {
        (idx / self.stride(axis)) % self.size
    }

    /// Integer frequency along `axis` at flat index `idx`.
    pub fn mode(&self, idx: usize, axis: usize) -> i64 {
        self.cache.m_axis[self.axis_index(idx, axis)]
    }

    /// Wavenumber per axis index (Nyquist entry zero).
    pub fn axis_wavenumbers(&self) -> &[f64] {
        &self.cache.k_axis
    }

    pub fn axis_modes(&self) -> &[i64] {
        &self.cache.m_axis
    }

    pub fn wavenumber(&self, idx: usize, axis: usize) -> f64 {
        self.cache.k_axis[self.axis_index(idx, axis)]
    }

    /// Wavenumber along `axis` per flat index.
    pub fn wavenumbers(&self, axis: usize) -> &[f64] {
        &self.cache.k_flat[axis]
    }

    /// `|k|²` per flat index.
    pub fn ksq(&self) -> &[f64] {
        &self.cache.ksq
    }

    /// Physical coordinates of the grid point with flat index `idx`.
    pub fn point(&self, idx: usize, out: &mut [f64]) {
        let h = self.spacing();
        for (axis, x) in out.iter_mut().enumerate().take(self.n) {
            *x = self.axis_index(idx, axis) as f64 * h;
        }
    }

    /// Flat index of the frequency with integer modes `m` (each in `−N/2+1..=N/2`).
    pub fn index_of_mode(&self, modes: &[i64]) -> Option<usize> {
        if modes.len() != self.n {
            return None;
        }
        let half = (self.size / 2) as i64;
        let mut idx = 0usize;
        for &m in modes {
            if m <= -half || m > half {
                return None;
            }
            let j = if m >= 0 { m } else { m + self.size as i64 } as usize;
            idx = idx * self.size + j;
        }
        Some(idx)
    }

    /// Same number of points, dimension and period.
    pub fn same_as(&self, other: &TorusGrid) -> bool {
        self == other
    }

    pub(crate) fn check_same(&self, other: &TorusGrid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// In-place n-dimensional FFT. The forward transform is scaled by `N⁻ⁿ`
    /// so a constant field maps to its value on the zero mode.
    pub(crate) fn fft(&self, data: &mut [Complex64], inverse: bool) {
        debug_assert_eq!(data.len(), self.len());
        let plan = if inverse { &self.cache.inverse } else { &self.cache.forward };
        let n = self.size;
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        let mut lines = vec![Complex64::new(0.0, 0.0); data.len()];
        for axis in 0..self.n {
            let stride = self.stride(axis);
            if stride == 1 {
                plan.process_with_scratch(data, &mut scratch);
                continue;
            }
            let block = n * stride;
            // Gather every line along `axis` into contiguous storage.
            let mut pos = 0;
            for outer in 0..data.len() / block {
                let base = outer * block;
                for inner in 0..stride {
                    for j in 0..n {
                        lines[pos + j] = data[base + inner + j * stride];
                    }
                    pos += n;
                }
            }
            plan.process_with_scratch(&mut lines, &mut scratch);
            let mut pos = 0;
            for outer in 0..data.len() / block {
                let base = outer * block;
                for inner in 0..stride {
                    for j in 0..n {
                        data[base + inner + j * stride] = lines[pos + j];
                    }
                    pos += n;
                }
            }
        }
        if !inverse {
            let scale = 1.0 / data.len() as f64;
            for c in data.iter_mut() {
                *c *= scale;
            }
        }
    }
}

impl PartialEq for TorusGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.size == other.size && self.period == other.period
    }
}

impl fmt::Debug for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid")
            .field("n", &self.n)
            .field("size", &self.size)
            .field("period", &self.period)
            .finish()
    }
}
