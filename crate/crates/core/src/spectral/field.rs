use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior::Blade;

use super::grid::TorusGrid;

/// A grade-ℓ form field sampled on the grid, one real array per blade in
/// canonical (lexicographic) blade order.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalFormField {
    grid: TorusGrid,
    grade: usize,
    data: Vec<Vec<f64>>,
}

/// A grade-ℓ form field held as Fourier coefficients, one complex array per
/// blade. The coefficient at the zero mode is the mean of the field.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralFormField {
    grid: TorusGrid,
    grade: usize,
    data: Vec<Vec<Complex64>>,
}

/// Number of blades of grade `grade` in dimension `n` (0 when out of range).
pub fn blade_count(n: usize, grade: usize) -> usize {
    if grade > n {
        return 0;
    }
    let mut c = 1usize;
    for i in 0..grade {
        c = c * (n - i) / (i + 1);
    }
    c
}

fn check_shape<T>(grid: &TorusGrid, grade: usize, data: &[Vec<T>]) -> Result<()> {
    let blades = blade_count(grid.dim(), grade);
    if data.len() != blades {
        return Err(Error::SizeMismatch { expected: blades, found: data.len() });
    }
    for comp in data {
        if comp.len() != grid.len() {
            return Err(Error::SizeMismatch { expected: grid.len(), found: comp.len() });
        }
    }
    Ok(())
}

impl PhysicalFormField {
    pub fn zeros(grid: &TorusGrid, grade: usize) -> Self {
        let blades = blade_count(grid.dim(), grade);
        PhysicalFormField { grid: grid.clone(), grade, data: vec![vec![0.0; grid.len()]; blades] }
    }

    pub fn from_data(grid: &TorusGrid, grade: usize, data: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(grid, grade, &data)?;
        Ok(PhysicalFormField { grid: grid.clone(), grade, data })
    }

    /// Samples `f(x, out)`, which writes one value per blade into `out`.
    pub fn from_fn(grid: &TorusGrid, grade: usize, mut f: impl FnMut(&[f64], &mut [f64])) -> Self {
        let mut field = PhysicalFormField::zeros(grid, grade);
        let blades = field.data.len();
        let mut x = vec![0.0; grid.dim()];
        let mut vals = vec![0.0; blades];
        for idx in 0..grid.len() {
            grid.point(idx, &mut x);
            vals.iter_mut().for_each(|v| *v = 0.0);
            f(&x, &mut vals);
            for (b, v) in vals.iter().enumerate() {
                field.data[b][idx] = *v;
            }
        }
        field
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn blades(&self) -> Vec<Blade> {
        Blade::all(self.grid.dim(), self.grade)
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.data
    }

    pub fn components_mut(&mut self) -> &mut [Vec<f64>] {
        &mut self.data
    }

    pub fn into_components(self) -> Vec<Vec<f64>> {
        self.data
    }

    /// Values of the given blade (zeros are not stored for absent blades).
    pub fn component(&self, blade: Blade) -> Option<&[f64]> {
        let pos = self.blades().iter().position(|b| *b == blade)?;
        Some(&self.data[pos])
    }

    pub fn forward(&self) -> SpectralFormField {
        let data = self
            .data
            .iter()
            .map(|comp| {
                let mut buf: Vec<Complex64> = comp.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                self.grid.fft(&mut buf, false);
                buf
            })
            .collect();
        SpectralFormField { grid: self.grid.clone(), grade: self.grade, data }
    }

    /// Largest absolute coefficient over all blades and points.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let data = self.data.iter().map(|c| c.iter().map(|v| v * factor).collect()).collect();
        PhysicalFormField { grid: self.grid.clone(), grade: self.grade, data }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        if self.grade != other.grade {
            return Err(Error::WrongGrade { expected: self.grade, found: other.grade.to_string() });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect())
            .collect();
        Ok(PhysicalFormField { grid: self.grid.clone(), grade: self.grade, data })
    }
}

impl SpectralFormField {
    pub fn zeros(grid: &TorusGrid, grade: usize) -> Self {
        let blades = blade_count(grid.dim(), grade);
        SpectralFormField {
            grid: grid.clone(),
            grade,
            data: vec![vec![Complex64::new(0.0, 0.0); grid.len()]; blades],
        }
    }

    pub fn from_data(grid: &TorusGrid, grade: usize, data: Vec<Vec<Complex64>>) -> Result<Self> {
        check_shape(grid, grade, &data)?;
        Ok(SpectralFormField { grid: grid.clone(), grade, data })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn blades(&self) -> Vec<Blade> {
        Blade::all(self.grid.dim(), self.grade)
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.data
    }

    pub fn components_mut(&mut self) -> &mut [Vec<Complex64>] {
        &mut self.data
    }

    /// Real part of the inverse transform.
    pub fn inverse(&self) -> PhysicalFormField {
        let data = self
            .data
            .iter()
            .map(|comp| {
                let mut buf = comp.clone();
                self.grid.fft(&mut buf, true);
                buf.into_iter().map(|c| c.re).collect()
            })
            .collect();
        PhysicalFormField { grid: self.grid.clone(), grade: self.grade, data }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().flatten().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `Σ |ĉ|²` over blades and frequencies.
    pub fn energy(&self) -> f64 {
        self.data.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        self.map(|_, c| c * factor)
    }

    /// Multiplies each coefficient by `f(flat_index, coeff)`.
    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let data = self
            .data
            .iter()
            .map(|comp| comp.iter().enumerate().map(|(i, c)| f(i, *c)).collect())
            .collect();
        SpectralFormField { grid: self.grid.clone(), grade: self.grade, data }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, other: &Self, factor: f64) -> Result<()> {
        self.check_compatible(other)?;
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y * factor;
            }
        }
        Ok(())
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        if self.grade != other.grade {
            return Err(Error::WrongGrade { expected: self.grade, found: other.grade.to_string() });
        }
        Ok(())
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.check_compatible(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect())
            .collect();
        Ok(SpectralFormField { grid: self.grid.clone(), grade: self.grade, data })
    }

    pub(crate) fn require_grade(&self, grade: usize) -> Result<()> {
        if self.grade != grade {
            return Err(Error::WrongGrade { expected: grade, found: self.grade.to_string() });
        }
        Ok(())
    }
}

/// Fourier coefficients of a sampled field.
pub fn transform_forward(field: &PhysicalFormField) -> SpectralFormField {
    field.forward()
}

/// Sampled field from Fourier coefficients (real part).
pub fn transform_inverse(spec: &SpectralFormField) -> PhysicalFormField {
    spec.inverse()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn blade_counts() {
        assert_eq!(blade_count(3, 2), 3);
        assert_eq!(blade_count(4, 2), 6);
        assert_eq!(blade_count(3, 4), 0);
    }

    #[test]
    fn constant_field_has_only_zero_mode() {
        let g = TorusGrid::new(3, 8, 2.0).unwrap();
        let f = PhysicalFormField::from_fn(&g, 0, |_, out| out[0] = 1.75);
        let s = f.forward();
        assert!((s.components()[0][0] - Complex64::new(1.75, 0.0)).norm() < 1e-15);
        assert!(s.components()[0][1..].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn single_cosine_has_two_symmetric_coefficients() {
        let l = 3.0;
        let g = TorusGrid::new(2, 16, l).unwrap();
        let f = PhysicalFormField::from_fn(&g, 0, |x, out| out[0] = (2.0 * PI * x[0] / l).cos());
        let s = f.forward();
        let plus = g.index_of_mode(&[1, 0]).unwrap();
        let minus = g.index_of_mode(&[-1, 0]).unwrap();
        for (i, c) in s.components()[0].iter().enumerate() {
            let expected = if i == plus || i == minus { 0.5 } else { 0.0 };
            assert!((c - Complex64::new(expected, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let g = TorusGrid::new(3, 8, 1.0).unwrap();
        let mut state = 7u64;
        let f = PhysicalFormField::from_fn(&g, 2, |_, out| {
            for v in out.iter_mut() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *v = (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
            }
        });
        let back = f.forward().inverse();
        let err = back.try_sub(&f).unwrap().max_abs();
        assert!(err <= 1e-12 * f.max_abs(), "{err}");
    }

    #[test]
    fn shape_is_checked() {
        let g = TorusGrid::new(2, 4, 1.0).unwrap();
        assert!(matches!(
            PhysicalFormField::from_data(&g, 1, vec![vec![0.0; 16]]),
            Err(Error::SizeMismatch { expected: 2, found: 1 })
        ));
        assert!(matches!(
            PhysicalFormField::from_data(&g, 1, vec![vec![0.0; 16], vec![0.0; 15]]),
            Err(Error::SizeMismatch { expected: 16, found: 15 })
        ));
    }
}
