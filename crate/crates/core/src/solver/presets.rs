//! Named initial data.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::spectral::{d_spec, PhysicalFormField, SpectralFormField, TorusGrid};

/// Initial data `(u₀, b₀)` by name.
#[derive(Clone, Debug, PartialEq)]
pub enum Preset {
    Zero,
    /// `u₀ = A(sin x₁ cos x₂ cos x₃ e1 − cos x₁ sin x₂ cos x₃ e2)` and
    /// `b₀ = d(B(sin x₃ e1 + sin x₁ e2 + sin x₂ e3))`, in units of `2π/L`.
    TaylorGreen { u_amp: f64, b_amp: f64 },
    /// Random modes with `|m_a| ≤ 2`, scaled to the given peak values.
    RandomLowMode { u_amp: f64, b_amp: f64, seed: u64 },
}

impl Preset {
    /// `zero`, `small-taylor-green`, `huge-taylor-green`, `random`.
    pub fn from_name(name: &str, seed: u64) -> Result<Preset> {
        match name {
            "zero" => Ok(Preset::Zero),
            "small-taylor-green" => Ok(Preset::TaylorGreen { u_amp: 0.05, b_amp: 0.05 }),
            "huge-taylor-green" => Ok(Preset::TaylorGreen { u_amp: 1e3, b_amp: 1e3 }),
            "random" => Ok(Preset::RandomLowMode { u_amp: 0.05, b_amp: 0.05, seed }),
            _ => Err(Error::InvalidConfig(format!("unknown preset '{name}'"))),
        }
    }

    pub fn names() -> &'static [&'static str] {
        &["zero", "small-taylor-green", "huge-taylor-green", "random"]
    }

    pub fn build(&self, grid: &TorusGrid) -> Result<(PhysicalFormField, PhysicalFormField)> {
        if grid.dim() < 3 {
            return Err(Error::InvalidConfig("presets need n >= 3".into()));
        }
        match *self {
            Preset::Zero => Ok((PhysicalFormField::zeros(grid, 1), PhysicalFormField::zeros(grid, 2))),
            Preset::TaylorGreen { u_amp, b_amp } => Ok((taylor_green_u(grid, u_amp), taylor_green_b(grid, b_amp))),
            Preset::RandomLowMode { u_amp, b_amp, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let u = normalized(random_low_mode(grid, 1, &mut rng).inverse(), u_amp);
                let a = random_low_mode(grid, 1, &mut rng);
                let b = normalized(d_spec(&a).inverse(), b_amp);
                Ok((u, b))
            }
        }
    }
}

pub fn taylor_green_u(grid: &TorusGrid, amp: f64) -> PhysicalFormField {
    let k = grid.kappa();
    PhysicalFormField::from_fn(grid, 1, |x, out| {
        let (s1, c1) = (k * x[0]).sin_cos();
        let (s2, c2) = (k * x[1]).sin_cos();
        let c3 = (k * x[2]).cos();
        out[0] = amp * s1 * c2 * c3;
        out[1] = -amp * c1 * s2 * c3;
    })
}

pub fn taylor_green_b(grid: &TorusGrid, amp: f64) -> PhysicalFormField {
    let k = grid.kappa();
    let a = PhysicalFormField::from_fn(grid, 1, |x, out| {
        out[0] = amp * (k * x[2]).sin();
        out[1] = amp * (k * x[0]).sin();
        out[2] = amp * (k * x[1]).sin();
    });
    d_spec(&a.forward()).inverse()
}

fn normalized(f: PhysicalFormField, amp: f64) -> PhysicalFormField {
    let peak = f.max_abs();
    if peak > 0.0 {
        f.scaled(amp / peak)
    } else {
        f
    }
}

/// Real random field of the given grade supported on the modes `|m_a| ≤ 2`.
pub fn random_low_mode_field(grid: &TorusGrid, grade: usize, seed: u64) -> SpectralFormField {
    random_low_mode(grid, grade, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Hermitian random spectrum on the modes `|m_a| ≤ 2`.
fn random_low_mode(grid: &TorusGrid, grade: usize, rng: &mut ChaCha8Rng) -> SpectralFormField {
    let n = grid.dim();
    let mut w = SpectralFormField::zeros(grid, grade);
    let count = 5usize.pow(n as u32);
    for comp in w.components_mut() {
        for code in 0..count {
            let modes: Vec<i64> = (0..n).map(|a| ((code / 5usize.pow(a as u32)) % 5) as i64 - 2).collect();
            // Draw once per ± pair, on the representative whose first nonzero mode is positive.
            let first = modes.iter().find(|m| **m != 0);
            if first.is_none_or(|m| *m < 0) {
                continue;
            }
            let c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let neg: Vec<i64> = modes.iter().map(|m| -m).collect();
            if let (Some(i), Some(j)) = (grid.index_of_mode(&modes), grid.index_of_mode(&neg)) {
                comp[i] = c;
                comp[j] = c.conj();
            }
        }
    }
    w
}
