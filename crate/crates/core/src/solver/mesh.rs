use crate::error::{Error, Result};

/// Time nodes `0 = t₀ < t₁ < … < t_M = T`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeMesh {
    times: Vec<f64>,
}

impl TimeMesh {
    /// Graded nodes `t_j = T (j/M)^γ`, clustered at 0 for `γ > 1`.
    pub fn graded(horizon: f64, intervals: usize, grading: f64) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) || intervals == 0 || !(grading >= 1.0) {
            return Err(Error::InvalidTimeGrid(format!(
                "T = {horizon}, M = {intervals}, gamma = {grading}"
            )));
        }
        let m = intervals as f64;
        let mut times: Vec<f64> = (0..=intervals).map(|j| horizon * (j as f64 / m).powf(grading)).collect();
        times[intervals] = horizon;
        TimeMesh::from_times(times)
    }

    pub fn from_times(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 || times[0] != 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTimeGrid("nodes must start at 0 and increase strictly".into()));
        }
        Ok(TimeMesh { times })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Number of intervals `M`.
    pub fn intervals(&self) -> usize {
        self.times.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn step(&self, j: usize) -> f64 {
        self.times[j] - self.times[j - 1]
    }
}
