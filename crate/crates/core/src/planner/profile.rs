use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planned average forward speed `v_a*(l)` and density `ρ_a*(l)` as
/// piecewise cubics.
///
/// Segment `k` covers `[segment_breaks[k], segment_breaks[k + 1]]`. Its
/// coefficients are stored highest power first, `[c3, c2, c1, c0]`, in the
/// local variable `x = l - segment_breaks[k]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanProfile {
    pub segment_breaks: Vec<f64>,
    pub speed_coeffs: Vec<[f64; 4]>,
    pub density_coeffs: Vec<[f64; 4]>,
}

#[inline]
fn horner(c: &[f64; 4], x: f64) -> f64 {
    ((c[0] * x + c[1]) * x + c[2]) * x + c[3]
}

#[inline]
fn horner_d(c: &[f64; 4], x: f64) -> f64 {
    (3.0 * c[0] * x + 2.0 * c[1]) * x + c[2]
}

impl PlanProfile {
    /// A plan that holds `speed` and `density` constant on `[0, length]`.
    pub fn constant(length: f64, segments: usize, speed: f64, density: f64) -> Self {
        let k = segments.max(1);
        Self {
            segment_breaks: (0..=k).map(|i| length * i as f64 / k as f64).collect(),
            speed_coeffs: vec![[0.0, 0.0, 0.0, speed]; k],
            density_coeffs: vec![[0.0, 0.0, 0.0, density]; k],
        }
    }

    pub fn validate_shape(&self) -> Result<()> {
        let k = self.speed_coeffs.len();
        if k == 0 || self.density_coeffs.len() != k || self.segment_breaks.len() != k + 1 {
            return Err(Error::config(
                "profile",
                format!(
                    "need K >= 1 segments with K + 1 breaks (got {} breaks, {} speed and {} density segments)",
                    self.segment_breaks.len(),
                    k,
                    self.density_coeffs.len()
                ),
            ));
        }
        if self.segment_breaks[0] != 0.0 {
            return Err(Error::config("profile.segment_breaks[0]", "first break must be 0"));
        }
        if self.segment_breaks.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::config("profile.segment_breaks", "breaks must be strictly increasing"));
        }
        let finite = self
            .speed_coeffs
            .iter()
            .chain(&self.density_coeffs)
            .flatten()
            .all(|c| c.is_finite());
        if !finite {
            return Err(Error::config("profile", "coefficients must be finite"));
        }
        Ok(())
    }

    pub fn segment_count(&self) -> usize {
        self.speed_coeffs.len()
    }

    pub fn length(&self) -> f64 {
        *self.segment_breaks.last().unwrap_or(&0.0)
    }

    /// Active segment and local offset; a break belongs to the later segment.
    pub fn locate(&self, l: f64) -> Result<(usize, f64)> {
        if !(0.0..=self.length()).contains(&l) {
            return Err(Error::domain(format!("arc length {l} outside [0, {}]", self.length())));
        }
        Ok(self.locate_clamped(l))
    }

    pub(crate) fn locate_clamped(&self, l: f64) -> (usize, f64) {
        let k = self.segment_count();
        let l = l.clamp(0.0, self.length());
        let idx = self.segment_breaks.partition_point(|&b| b <= l).saturating_sub(1).min(k - 1);
        (idx, l - self.segment_breaks[idx])
    }

    /// `(v_a*(l), ρ_a*(l))`.
    pub fn evaluate(&self, l: f64) -> Result<(f64, f64)> {
        let (k, x) = self.locate(l)?;
        Ok((horner(&self.speed_coeffs[k], x), horner(&self.density_coeffs[k], x)))
    }

    /// `(dv_a*/dl, dρ_a*/dl)`.
    pub fn derivatives(&self, l: f64) -> Result<(f64, f64)> {
        let (k, x) = self.locate(l)?;
        Ok((horner_d(&self.speed_coeffs[k], x), horner_d(&self.density_coeffs[k], x)))
    }

    /// Evaluation with `l` clamped into `[0, L]`, for robots outside the tube.
    pub fn evaluate_clamped(&self, l: f64) -> (f64, f64) {
        let (k, x) = self.locate_clamped(l);
        (horner(&self.speed_coeffs[k], x), horner(&self.density_coeffs[k], x))
    }

    /// Values of segment `k` at local offset `x`, ignoring which segment is active.
    pub(crate) fn segment_values(&self, k: usize, x: f64) -> (f64, f64, f64, f64) {
        let (s, d) = (&self.speed_coeffs[k], &self.density_coeffs[k]);
        (horner(s, x), horner_d(s, x), horner(d, x), horner_d(d, x))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(s)?;
        p.validate_shape()?;
        Ok(p)
    }
}
