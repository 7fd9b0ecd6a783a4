//! Planar virtual tubes: a C¹ chain of straight and circular-arc center
//! segments with a piecewise-linear half-width profile.
//!
//! A point inside the tube is addressed by `(l, side, rho)`: arc length `l`
//! along the center curve, the side of the center curve (`+n` or `-n`), and
//! the fraction `rho ∈ [0, 1]` of the local half-width.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

pub type Vec2 = nalgebra::Vector2<f64>;

/// Curvature radius reported for straight segments.
pub const R_CAP: f64 = 1e9;

const JOIN_TOL: f64 = 1e-9;
const QUAD_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn left_normal(t: &Vec2) -> Vec2 {
    Vec2::new(-t.y, t.x)
}

#[inline]
fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    Straight,
    Arc,
}

/// One piece of the center curve.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterSegment {
    pub kind: SegmentKind,
    pub start_point: Vec2,
    pub start_tangent: Vec2,
    pub length: f64,
    /// Signed curvature, positive when turning toward the left normal.
    pub signed_curvature: f64,
}

impl CenterSegment {
    pub fn straight(start_point: Vec2, start_tangent: Vec2, length: f64) -> Self {
        Self {
            kind: SegmentKind::Straight,
            start_point,
            start_tangent: start_tangent.normalize(),
            length,
            signed_curvature: 0.0,
        }
    }

    pub fn arc(start_point: Vec2, start_tangent: Vec2, length: f64, signed_curvature: f64) -> Self {
        Self {
            kind: SegmentKind::Arc,
            start_point,
            start_tangent: start_tangent.normalize(),
            length,
            signed_curvature,
        }
    }

    fn heading(&self) -> f64 {
        self.start_tangent.y.atan2(self.start_tangent.x)
    }

    /// Point at local arc length `s`.
    pub fn point(&self, s: f64) -> Vec2 {
        match self.kind {
            SegmentKind::Straight => self.start_point + self.start_tangent * s,
            SegmentKind::Arc => {
                let k = self.signed_curvature;
                let h0 = self.heading();
                let h = h0 + k * s;
                self.start_point + Vec2::new((h.sin() - h0.sin()) / k, (h0.cos() - h.cos()) / k)
            }
        }
    }

    pub fn tangent(&self, s: f64) -> Vec2 {
        match self.kind {
            SegmentKind::Straight => self.start_tangent,
            SegmentKind::Arc => {
                let h = self.heading() + self.signed_curvature * s;
                Vec2::new(h.cos(), h.sin())
            }
        }
    }

    pub fn curvature_radius(&self) -> f64 {
        match self.kind {
            SegmentKind::Straight => R_CAP,
            SegmentKind::Arc => 1.0 / self.signed_curvature.abs(),
        }
    }

    fn center(&self) -> Vec2 {
        self.start_point + left_normal(&self.start_tangent) / self.signed_curvature
    }

    /// Closest point parameter on this segment (clamped to `[0, length]`)
    /// and its distance to `p`.
    fn closest(&self, p: &Vec2) -> (f64, f64) {
        let s = match self.kind {
            SegmentKind::Straight => (p - self.start_point).dot(&self.start_tangent).clamp(0.0, self.length),
            SegmentKind::Arc => {
                let c = self.center();
                let r0 = self.start_point - c;
                let v = p - c;
                if v.norm() < 1e-15 {
                    0.0
                } else {
                    let ccw = cross(&r0, &v).atan2(r0.dot(&v));
                    let mut ang = ccw * self.signed_curvature.signum();
                    if ang < 0.0 {
                        ang += std::f64::consts::TAU;
                    }
                    let span = self.signed_curvature.abs() * self.length;
                    if ang <= span {
                        ang / self.signed_curvature.abs()
                    } else {
                        let d0 = (p - self.start_point).norm();
                        let d1 = (p - self.point(self.length)).norm();
                        if d1 < d0 {
                            self.length
                        } else {
                            0.0
                        }
                    }
                }
            }
        };
        (s, (p - self.point(s)).norm())
    }

    fn validate(&self) -> Result<()> {
        if !(self.length > 0.0) || !self.length.is_finite() {
            return Err(Error::InvalidTube(format!("segment length must be > 0, got {}", self.length)));
        }
        if (self.start_tangent.norm() - 1.0).abs() > 1e-12 || !self.start_tangent.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidTube("segment tangent must be a unit vector".into()));
        }
        match self.kind {
            SegmentKind::Straight if self.signed_curvature != 0.0 => {
                Err(Error::InvalidTube("straight segment with nonzero curvature".into()))
            }
            SegmentKind::Arc if !(self.signed_curvature.abs() > 0.0) || !self.signed_curvature.is_finite() => {
                Err(Error::InvalidTube("arc segment needs nonzero finite curvature".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Continuous, strictly positive half-width profile stored as
/// piecewise-linear samples `(l, width)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WidthProfile {
    samples: Vec<(f64, f64)>,
    /// Cumulative `∫ 2λ` at each sample.
    cumulative: Vec<f64>,
}

impl WidthProfile {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidTube("width profile needs at least one sample".into()));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidTube("width sample arc lengths must be strictly increasing".into()));
            }
        }
        if let Some(&(l, w)) = samples.iter().find(|(l, w)| !(*w > 0.0) || !w.is_finite() || !l.is_finite()) {
            return Err(Error::InvalidTube(format!("width must be finite and > 0, got {w} at l = {l}")));
        }
        let mut cumulative = Vec::with_capacity(samples.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for w in samples.windows(2) {
            let (a, wa) = w[0];
            let (b, wb) = w[1];
            let seg = |x: f64| 2.0 * (wa + (wb - wa) * (x - a) / (b - a));
            acc += adaptive_simpson(&seg, a, b, QUAD_TOL);
            cumulative.push(acc);
        }
        Ok(Self { samples, cumulative })
    }

    pub fn constant(length: f64, width: f64) -> Result<Self> {
        Self::new(vec![(0.0, width), (length, width)])
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn start(&self) -> f64 {
        self.samples[0].0
    }

    pub fn end(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    /// Index of the piece containing `l` (`samples[i].0 <= l < samples[i+1].0`).
    fn piece(&self, l: f64) -> usize {
        let n = self.samples.len();
        if n < 2 {
            return 0;
        }
        let idx = self.samples.partition_point(|s| s.0 <= l);
        idx.saturating_sub(1).min(n - 2)
    }

    /// Width at `l`, held constant beyond the first and last samples.
    pub fn eval(&self, l: f64) -> f64 {
        let n = self.samples.len();
        if n == 1 || l <= self.samples[0].0 {
            return self.samples[0].1;
        }
        if l >= self.samples[n - 1].0 {
            return self.samples[n - 1].1;
        }
        let i = self.piece(l);
        let (a, wa) = self.samples[i];
        let (b, wb) = self.samples[i + 1];
        wa + (wb - wa) * (l - a) / (b - a)
    }

    /// Slope of the width profile at `l` (right-sided at knots).
    pub fn slope(&self, l: f64) -> f64 {
        let n = self.samples.len();
        if n == 1 || l < self.samples[0].0 || l >= self.samples[n - 1].0 {
            return 0.0;
        }
        let i = self.piece(l);
        let (a, wa) = self.samples[i];
        let (b, wb) = self.samples[i + 1];
        (wb - wa) / (b - a)
    }

    pub fn min_width(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min)
    }

    /// `∫ 2λ(l) dl` from the first sample to `x`, with constant extension.
    fn cumulative_at(&self, x: f64) -> f64 {
        let n = self.samples.len();
        let (l0, w0) = self.samples[0];
        if n == 1 || x <= l0 {
            return 2.0 * w0 * (x - l0);
        }
        let (ln, wn) = self.samples[n - 1];
        if x >= ln {
            return self.cumulative[n - 1] + 2.0 * wn * (x - ln);
        }
        let i = self.piece(x);
        let a = self.samples[i].0;
        let f = |y: f64| 2.0 * self.eval(y);
        self.cumulative[i] + adaptive_simpson(&f, a, x, QUAD_TOL)
    }

    /// `∫_a^b 2λ(l) dl`, the tube area between two arc lengths.
    pub fn area_between(&self, a: f64, b: f64) -> f64 {
        self.cumulative_at(b) - self.cumulative_at(a)
    }
}

/// Side of the center curve: `Positive` is the `+n` side (θ = 0),
/// `Negative` the `-n` side (θ = π).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Positive,
    Negative,
}

impl Side {
    pub fn theta(self) -> f64 {
        match self {
            Side::Positive => 0.0,
            Side::Negative => std::f64::consts::PI,
        }
    }

    /// `cos θ`, exactly ±1.
    pub fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }
}

/// Tube coordinates of a point, as returned by [`VirtualTube::project`].
#[derive(Clone, Debug, PartialEq)]
pub struct TubeCoordinates {
    pub arc_length: f64,
    pub side: Side,
    /// `|offset| / λ(l)`; exceeds 1 for points outside the tube.
    pub radial_fraction: f64,
    pub tangent: Vec2,
    pub normal: Vec2,
    pub width: f64,
    pub curvature_radius: f64,
    /// Signed offset along the normal, `ρ λ cos θ`.
    pub lateral_offset: f64,
    /// The foot point fell before `γ(0)` or past `γ(L)` and was clamped.
    pub out_of_tube: bool,
}

/// Serializable tube description: a start pose, a chain of segments, and
/// half-width samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TubeDefinition {
    pub start: [f64; 2],
    /// Heading of the initial tangent in radians.
    pub heading: f64,
    pub segments: Vec<SegmentDefinition>,
    /// `[l, half_width]` pairs; must span `[0, L]`.
    pub width: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDefinition {
    pub kind: SegmentKind,
    pub length: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curvature: Option<f64>,
}

impl TubeDefinition {
    pub fn build(&self) -> Result<VirtualTube> {
        let mut builder = TubeBuilder::new(Vec2::new(self.start[0], self.start[1]), self.heading);
        for (i, s) in self.segments.iter().enumerate() {
            builder = match (s.kind, s.curvature) {
                (SegmentKind::Straight, None) => builder.straight(s.length),
                (SegmentKind::Straight, Some(0.0)) => builder.straight(s.length),
                (SegmentKind::Straight, Some(_)) => {
                    return Err(Error::InvalidTube(format!("segments[{i}]: straight segment with curvature")))
                }
                (SegmentKind::Arc, Some(k)) => builder.arc(s.length, k),
                (SegmentKind::Arc, None) => {
                    return Err(Error::InvalidTube(format!("segments[{i}]: arc segment needs `curvature`")))
                }
            };
        }
        let width = WidthProfile::new(self.width.iter().map(|w| (w[0], w[1])).collect())?;
        builder.build(width)
    }
}

/// Chains C¹ segments from a start pose.
#[derive(Clone, Debug)]
pub struct TubeBuilder {
    point: Vec2,
    tangent: Vec2,
    segments: Vec<CenterSegment>,
}

impl TubeBuilder {
    pub fn new(start: Vec2, heading: f64) -> Self {
        Self {
            point: start,
            tangent: Vec2::new(heading.cos(), heading.sin()),
            segments: Vec::new(),
        }
    }

    pub fn straight(self, length: f64) -> Self {
        let seg = CenterSegment::straight(self.point, self.tangent, length);
        self.advance(seg)
    }

    pub fn arc(self, length: f64, signed_curvature: f64) -> Self {
        let seg = CenterSegment::arc(self.point, self.tangent, length, signed_curvature);
        self.advance(seg)
    }

    fn advance(mut self, seg: CenterSegment) -> Self {
        self.point = seg.point(seg.length);
        self.tangent = seg.tangent(seg.length);
        self.segments.push(seg);
        self
    }

    pub fn build(self, width: WidthProfile) -> Result<VirtualTube> {
        VirtualTube::new(self.segments, width)
    }
}

/// An immutable planar virtual tube.
#[derive(Clone, Debug, PartialEq)]
pub struct VirtualTube {
    segments: Vec<CenterSegment>,
    offsets: Vec<f64>,
    width: WidthProfile,
    total_length: f64,
}

impl VirtualTube {
    pub fn new(segments: Vec<CenterSegment>, width: WidthProfile) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidTube("tube needs at least one segment".into()));
        }
        for s in &segments {
            s.validate()?;
        }
        for (i, w) in segments.windows(2).enumerate() {
            let end = w[0].point(w[0].length);
            let tan = w[0].tangent(w[0].length);
            if (end - w[1].start_point).norm() > JOIN_TOL || (tan - w[1].start_tangent).norm() > JOIN_TOL {
                return Err(Error::InvalidTube(format!("segments {i} and {} are not C1-continuous", i + 1)));
            }
        }
        let mut offsets = Vec::with_capacity(segments.len());
        let mut acc = 0.0;
        for s in &segments {
            offsets.push(acc);
            acc += s.length;
        }
        if width.start().abs() > JOIN_TOL || (width.end() - acc).abs() > JOIN_TOL * acc.max(1.0) {
            return Err(Error::InvalidTube(format!(
                "width samples must span [0, {acc}], got [{}, {}]",
                width.start(),
                width.end()
            )));
        }
        Ok(Self {
            segments,
            offsets,
            width,
            total_length: acc,
        })
    }

    pub fn straight(length: f64, width: f64) -> Result<Self> {
        TubeBuilder::new(Vec2::zeros(), 0.0)
            .straight(length)
            .build(WidthProfile::constant(length, width)?)
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn segments(&self) -> &[CenterSegment] {
        &self.segments
    }

    pub fn width_profile(&self) -> &WidthProfile {
        &self.width
    }

    fn check_l(&self, l: f64) -> Result<()> {
        if !(0.0..=self.total_length).contains(&l) {
            return Err(Error::domain(format!("arc length {l} outside [0, {}]", self.total_length)));
        }
        Ok(())
    }

    /// Active segment at `l`; at a joint the later segment wins.
    fn locate(&self, l: f64) -> (usize, f64) {
        let idx = self.offsets.partition_point(|&o| o <= l).saturating_sub(1);
        let idx = idx.min(self.segments.len() - 1);
        let s = (l - self.offsets[idx]).clamp(0.0, self.segments[idx].length);
        (idx, s)
    }

    /// Center point, unit tangent and unit normal at `l` (clamped to `[0, L]`).
    pub fn frame(&self, l: f64) -> (Vec2, Vec2, Vec2) {
        let (i, s) = self.locate(l.clamp(0.0, self.total_length));
        let seg = &self.segments[i];
        let t = seg.tangent(s);
        (seg.point(s), t, left_normal(&t))
    }

    pub fn center(&self, l: f64) -> Vec2 {
        self.frame(l).0
    }

    /// `γ(l) + ρ λ(l) n(l) cos θ`.
    pub fn tube_point(&self, l: f64, side: Side, radial_fraction: f64) -> Result<Vec2> {
        self.check_l(l)?;
        if !(0.0..=1.0).contains(&radial_fraction) {
            return Err(Error::domain(format!("radial fraction {radial_fraction} outside [0, 1]")));
        }
        let (c, _, n) = self.frame(l);
        Ok(c + n * (radial_fraction * self.width.eval(l) * side.sign()))
    }

    pub fn width(&self, l: f64) -> Result<f64> {
        self.check_l(l)?;
        Ok(self.width.eval(l))
    }

    /// Half-width with constant extension outside `[0, L]`.
    pub fn width_clamped(&self, l: f64) -> f64 {
        self.width.eval(l)
    }

    /// Curvature radius of the active segment; [`R_CAP`] on straight pieces.
    pub fn curvature_radius(&self, l: f64) -> f64 {
        let (i, _) = self.locate(l.clamp(0.0, self.total_length));
        self.segments[i].curvature_radius()
    }

    pub fn arc_length_between(&self, l_a: f64, l_b: f64) -> Result<f64> {
        self.check_l(l_a)?;
        self.check_l(l_b)?;
        Ok((l_b - l_a).abs())
    }

    /// Tube area `∫_a^b 2λ dl` (constant width extension outside `[0, L]`).
    pub fn area_between(&self, a: f64, b: f64) -> f64 {
        self.width.area_between(a, b)
    }

    /// Nearest center-curve point and the tube coordinates of `p`.
    /// Equidistant candidates resolve to the smallest arc length.
    pub fn project(&self, p: &Vec2) -> TubeCoordinates {
        let mut best_l = 0.0;
        let mut best_d = f64::INFINITY;
        for (seg, &off) in self.segments.iter().zip(&self.offsets) {
            let (s, d) = seg.closest(p);
            if d < best_d - 1e-12 {
                best_d = d;
                best_l = off + s;
            }
        }
        let l = best_l.clamp(0.0, self.total_length);
        let (c, t, n) = self.frame(l);
        let rel = p - c;
        let along = rel.dot(&t);
        let out_of_tube = (l <= 0.0 && along < -1e-12) || (l >= self.total_length && along > 1e-12);
        let offset = rel.dot(&n);
        let width = self.width.eval(l);
        TubeCoordinates {
            arc_length: l,
            side: if offset >= 0.0 { Side::Positive } else { Side::Negative },
            radial_fraction: offset.abs() / width,
            tangent: t,
            normal: n,
            width,
            curvature_radius: self.curvature_radius(l),
            lateral_offset: offset,
            out_of_tube,
        }
    }

    /// True iff `p` projects inside `[0, L]` and its offset stays within
    /// `λ(l) - margin`. The boundary itself counts as inside.
    pub fn contains(&self, p: &Vec2, margin: f64) -> bool {
        let c = self.project(p);
        !c.out_of_tube && c.lateral_offset.abs() <= c.width - margin
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn straight() -> VirtualTube {
        VirtualTube::straight(20.0, 2.0).unwrap()
    }

    fn quarter_arc(width: f64) -> VirtualTube {
        TubeBuilder::new(Vec2::new(10.0, 0.0), PI / 2.0)
            .arc(10.0 * PI / 2.0, 0.1)
            .build(WidthProfile::constant(10.0 * PI / 2.0, width).unwrap())
            .unwrap()
    }

    #[test]
    fn tube_point_straight() {
        let t = straight();
        let p = t.tube_point(3.0, Side::Positive, 0.5).unwrap();
        assert_abs_diff_eq!(p, Vec2::new(3.0, 1.0), epsilon = 1e-15);
        let q = t.tube_point(7.0, Side::Negative, 0.0).unwrap();
        assert_eq!(q, t.center(7.0));
    }

    #[test]
    fn tube_point_domain_errors() {
        let t = straight();
        assert!(t.tube_point(-0.1, Side::Positive, 0.5).is_err());
        assert!(t.tube_point(20.1, Side::Positive, 0.5).is_err());
        assert!(t.tube_point(1.0, Side::Positive, 1.5).is_err());
        assert!(t.width(21.0).is_err());
        assert!(t.arc_length_between(-1.0, 2.0).is_err());
    }

    #[test]
    fn tube_point_on_quarter_arc() {
        let t = quarter_arc(1.0);
        let p = t.tube_point(10.0 * PI / 2.0, Side::Positive, 1.0).unwrap();
        // center curve ends at (0, 10); +n points at the circle's center
        assert_abs_diff_eq!(t.center(10.0 * PI / 2.0), Vec2::new(0.0, 10.0), epsilon = 1e-12);
        assert_abs_diff_eq!(p, Vec2::new(0.0, 9.0), epsilon = 1e-12);
    }

    #[test]
    fn project_straight() {
        let t = straight();
        let c = t.project(&Vec2::new(3.0, 1.0));
        assert_abs_diff_eq!(c.arc_length, 3.0, epsilon = 1e-15);
        assert_eq!(c.side, Side::Positive);
        assert_abs_diff_eq!(c.radial_fraction, 0.5, epsilon = 1e-15);
        let c = t.project(&t.center(5.0));
        assert_abs_diff_eq!(c.arc_length, 5.0, epsilon = 1e-15);
        assert_eq!(c.radial_fraction, 0.0);
    }

    #[test]
    fn project_arc_on_45_degree_ray() {
        let t = quarter_arc(2.0);
        let p = Vec2::new(9.0 * (PI / 4.0).cos(), 9.0 * (PI / 4.0).sin());
        let c = t.project(&p);
        assert_abs_diff_eq!(c.arc_length, 10.0 * PI / 4.0, epsilon = 1e-12);
        assert_eq!(c.side, Side::Positive);
        assert_abs_diff_eq!(c.radial_fraction, 0.5, epsilon = 1e-12);
        // dense sampling of candidate arc lengths agrees
        let best = (0..=200_000)
            .map(|i| i as f64 / 200_000.0 * t.total_length())
            .min_by(|a, b| (t.center(*a) - p).norm().total_cmp(&(t.center(*b) - p).norm()))
            .unwrap();
        assert!((best - c.arc_length).abs() < 1e-4);
    }

    #[test]
    fn project_clamps_past_the_ends() {
        let t = straight();
        let c = t.project(&Vec2::new(-2.0, 0.5));
        assert!(c.out_of_tube);
        assert_eq!(c.arc_length, 0.0);
        assert_abs_diff_eq!(c.lateral_offset, 0.5);
        let c = t.project(&Vec2::new(25.0, -0.5));
        assert!(c.out_of_tube);
        assert_eq!(c.arc_length, 20.0);
        assert_eq!(c.side, Side::Negative);
    }

    #[test]
    fn curvature_radius_rules() {
        let t = TubeBuilder::new(Vec2::zeros(), 0.0)
            .straight(5.0)
            .arc(5.0, 0.1)
            .build(WidthProfile::constant(10.0, 1.0).unwrap())
            .unwrap();
        assert_eq!(t.curvature_radius(2.0), R_CAP);
        assert_abs_diff_eq!(t.curvature_radius(7.0), 10.0, epsilon = 1e-12);
        // joint belongs to the later segment
        assert_abs_diff_eq!(t.curvature_radius(5.0), 10.0, epsilon = 1e-12);
    }

    #[test]
    fn width_and_arc_length() {
        let w = WidthProfile::new(vec![(0.0, 5.0), (20.0, 3.0)]).unwrap();
        let t = TubeBuilder::new(Vec2::zeros(), 0.0).straight(20.0).build(w).unwrap();
        assert_abs_diff_eq!(t.width(10.0).unwrap(), 4.0, epsilon = 1e-15);
        assert_eq!(t.arc_length_between(4.0, 4.0).unwrap(), 0.0);
        assert_eq!(t.arc_length_between(4.0, 10.0).unwrap(), 6.0);
        assert_eq!(t.arc_length_between(10.0, 4.0).unwrap(), 6.0);
    }

    #[test]
    fn contains_closed_boundary_and_margin() {
        let t = straight();
        assert!(t.contains(&t.center(4.0), 0.0));
        assert!(t.contains(&Vec2::new(4.0, 2.0), 0.0));
        assert!(!t.contains(&Vec2::new(4.0, 2.0 - 0.2), 0.3));
        assert!(!t.contains(&Vec2::new(4.0, 2.1), 0.0));
        assert!(!t.contains(&Vec2::new(-1.0, 0.0), 0.0));
    }

    #[test]
    fn area_between_linear_profile() {
        let w = WidthProfile::new(vec![(0.0, 5.0), (50.0, 0.0 + 1.0)]).unwrap();
        // 2 ∫_0^10 (5 - 0.08 l) dl
        assert_abs_diff_eq!(w.area_between(0.0, 10.0), 2.0 * (50.0 - 4.0), epsilon = 1e-10);
        // constant extension outside the samples
        assert_abs_diff_eq!(w.area_between(-2.0, 0.0), 20.0, epsilon = 1e-12);
        assert_abs_diff_eq!(w.area_between(50.0, 52.0), 4.0, epsilon = 1e-12);
    }

    #[test]
    fn rejects_discontinuous_chains() {
        let a = CenterSegment::straight(Vec2::zeros(), Vec2::new(1.0, 0.0), 5.0);
        let b = CenterSegment::straight(Vec2::new(5.0, 0.1), Vec2::new(1.0, 0.0), 5.0);
        let w = WidthProfile::constant(10.0, 1.0).unwrap();
        assert!(VirtualTube::new(vec![a.clone(), b], w.clone()).is_err());
        let c = CenterSegment::straight(Vec2::new(5.0, 0.0), Vec2::new(0.0, 1.0), 5.0);
        assert!(VirtualTube::new(vec![a, c], w).is_err());
    }

    #[test]
    fn rejects_bad_width_profiles() {
        assert!(WidthProfile::new(vec![(0.0, 1.0), (5.0, 0.0)]).is_err());
        assert!(WidthProfile::new(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
        let t = TubeBuilder::new(Vec2::zeros(), 0.0)
            .straight(10.0)
            .build(WidthProfile::constant(9.0, 1.0).unwrap());
        assert!(t.is_err());
    }
}
