use crate::error::{Error, Result};

/// An i.i.d. sample of real observations.
///
/// Construction checks that the sample is non-empty and that every value
/// is finite, so downstream code can rely on `mean` and `variance`
/// returning finite numbers without re-validating.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("sample must contain at least one value"));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "sample value at index {pos} is not finite"
            )));
        }
        Ok(Sample { values })
    }

    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Sample::new(values.to_vec())
    }

    // No is_empty: construction rejects empty samples.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        let n = self.values.len() as f64;
        self.values.iter().sum::<f64>() / n
    }

    /// Unbiased sample variance s² with the n-1 denominator.
    ///
    /// Requires at least two observations; operations that divide by s²
    /// must check `len() >= 2` before calling.
    pub fn variance(&self) -> f64 {
        assert!(
            self.values.len() >= 2,
            "variance needs at least two observations"
        );
        let mean = self.mean();
        let n = self.values.len() as f64;
        let ss: f64 = self.values.iter().map(|v| (v - mean) * (v - mean)).sum();
        ss / (n - 1.0)
    }

    /// Standard error of the mean, sqrt(s²/n).
    pub fn se_mean(&self) -> f64 {
        (self.variance() / self.values.len() as f64).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_empty_and_non_finite() {
        assert!(Sample::new(vec![]).is_err());
        assert!(Sample::new(vec![1.0, f64::NAN]).is_err());
        assert!(Sample::new(vec![1.0, f64::INFINITY]).is_err());
        let err = Sample::new(vec![0.0, f64::NAN]).unwrap_err();
        assert!(err.to_string().contains("index 1"));
    }

    #[test]
    fn mean_and_variance_match_hand_computation() {
        let s = Sample::new(vec![2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]).unwrap();
        assert_relative_eq!(s.mean(), 5.0);
        // Squared deviations: 9+1+1+1+0+0+4+16 = 32, divided by 7.
        assert_relative_eq!(s.variance(), 32.0 / 7.0);
        assert_relative_eq!(s.se_mean(), (32.0f64 / 7.0 / 8.0).sqrt());
    }

    #[test]
    fn variance_of_two_points_is_half_squared_gap() {
        let s = Sample::new(vec![1.0, 3.0]).unwrap();
        assert_relative_eq!(s.variance(), 2.0);
    }
}
