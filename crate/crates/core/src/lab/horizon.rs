use crate::error::{usage, Result};

/// Increasing pullback depths `T₁ < T₂ < …`; start times are `t - Tₖ`.
#[derive(Debug, Clone, PartialEq)]
pub struct HorizonSchedule {
    depths: Vec<f64>,
}

impl HorizonSchedule {
    /// At least two strictly increasing positive depths, so that a Cauchy
    /// gap can be measured.
    pub fn new(depths: Vec<f64>) -> Result<Self> {
        if depths.len() < 2 {
            return Err(usage("horizon schedule needs at least two depths"));
        }
        if depths.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
            return Err(usage("horizon depths must be positive and finite"));
        }
        if depths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(usage("horizon depths must increase strictly"));
        }
        Ok(Self { depths })
    }

    /// `initial · 2^k` for `k = 0..levels`.
    pub fn doubling(initial: f64, levels: usize) -> Result<Self> {
        Self::new((0..levels).map(|k| initial * 2f64.powi(k as i32)).collect())
    }

    pub fn depths(&self) -> &[f64] {
        &self.depths
    }

    pub fn deepest(&self) -> f64 {
        *self.depths.last().expect("schedule has at least two depths")
    }
}

impl Default for HorizonSchedule {
    /// 1, 2, 4, …, 256.
    fn default() -> Self {
        Self::doubling(1.0, 9).expect("static schedule is valid")
    }
}

/// Whole steps covering `depth` (at least one).
pub(crate) fn depth_steps(depth: f64, dt: f64) -> usize {
    ((depth / dt).round() as usize).max(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction() {
        assert_eq!(
            HorizonSchedule::doubling(5.0, 4).unwrap().depths(),
            &[5.0, 10.0, 20.0, 40.0]
        );
        assert!(HorizonSchedule::new(vec![1.0]).is_err());
        assert!(HorizonSchedule::new(vec![2.0, 1.0]).is_err());
        assert!(HorizonSchedule::new(vec![0.0, 1.0]).is_err());
        assert_eq!(HorizonSchedule::default().deepest(), 256.0);
        assert_eq!(depth_steps(5.0, 1e-3), 5000);
        assert_eq!(depth_steps(1e-9, 1e-3), 1);
    }
}
