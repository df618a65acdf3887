//! Angle-averaged interaction strengths from tabulated angular profiles.

use super::Frequency;
use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// A tabulated interaction strength versus the polar angle θ of the molecular
/// axis, on [0, π/2]. Values between samples are linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularProfile {
    samples: Vec<(f64, Frequency)>,
}

impl AngularProfile {
    /// Validates the sample set: strictly increasing angles from 0 to π/2.
    pub fn new(samples: Vec<(f64, Frequency)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidInput("empty angular profile".into()));
        }
        if samples.len() < 2 {
            return Err(Error::InvalidInput(
                "angular profile needs samples at both 0 and pi/2".into(),
            ));
        }
        if samples[0].0 != 0.0 {
            return Err(Error::InvalidInput(format!(
                "first profile angle must be 0, got {}",
                samples[0].0
            )));
        }
        let last = samples[samples.len() - 1].0;
        if (last - FRAC_PI_2).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "last profile angle must be pi/2, got {last}"
            )));
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::InvalidInput(
                    "profile angles must be strictly increasing".into(),
                ));
            }
        }
        Ok(AngularProfile { samples })
    }

    /// Linear interpolation of the tabulated value (cyclic MHz) at angle θ.
    fn value_at(&self, theta: f64) -> f64 {
        let s = &self.samples;
        if theta <= s[0].0 {
            return s[0].1.cyclic();
        }
        for w in s.windows(2) {
            if theta <= w[1].0 {
                let frac = (theta - w[0].0) / (w[1].0 - w[0].0);
                return w[0].1.cyclic() + frac * (w[1].1.cyclic() - w[0].1.cyclic());
            }
        }
        s[s.len() - 1].1.cyclic()
    }

    /// Computes `∫₀^{π/2} value(θ) sinθ dθ` by composite trapezoids on the sample
    /// intervals, halving every interval until the estimate moves by less than
    /// 1e-6 relative, then extrapolating the refinement sequence to cancel the
    /// residual h² error (the integrand is smooth inside each sample interval).
    pub fn angle_average(&self) -> Frequency {
        let integrand = |theta: f64| self.value_at(theta) * theta.sin();

        // Trapezoid estimate with each original sample interval split 2^level times.
        let trapezoid = |level: u32| -> f64 {
            let split = 1usize << level;
            let mut total = 0.0;
            for w in self.samples.windows(2) {
                let (a, b) = (w[0].0, w[1].0);
                let h = (b - a) / split as f64;
                let mut acc = 0.5 * (integrand(a) + integrand(b));
                for k in 1..split {
                    acc += integrand(a + h * k as f64);
                }
                total += acc * h;
            }
            total
        };

        let mut estimates = vec![trapezoid(0)];
        for level in 1..=24u32 {
            let next = trapezoid(level);
            let prev = *estimates.last().unwrap();
            estimates.push(next);
            if (next - prev).abs() <= 1e-6 * next.abs().max(f64::MIN_POSITIVE) && level >= 2 {
                break;
            }
        }

        // Richardson extrapolation of the halving sequence (Romberg table row).
        let mut row = estimates;
        let mut order = 4.0;
        while row.len() > 1 {
            let mut next_row = Vec::with_capacity(row.len() - 1);
            for k in 1..row.len() {
                next_row.push((order * row[k] - row[k - 1]) / (order - 1.0));
            }
            row = next_row;
            order *= 4.0;
        }
        Frequency::from_cyclic(row[0])
    }
}
