//! Lorentz quasi-norms `‖f‖_{p,q}` of sampled functions.
//!
//! A sample is a list of values `|f|` with area weights, read as a step
//! function. Its decreasing rearrangement is again a step function, so the
//! defining integral `(∫ (t^{1/p} f*(t))^q dt/t)^{1/q}` is summed in closed
//! form over the steps. This is the quasi-norm, not the equivalent Banach norm.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasuredSample {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl MeasuredSample {
    pub fn new(values: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::DimensionMismatch(values.len(), weights.len()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::OutOfRange(format!("area weight {w}")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sample value".into()));
        }
        let values = values.into_iter().map(f64::abs).collect();
        Ok(Self { values, weights })
    }

    /// Like [`MeasuredSample::new`], also checking the weights add up to `area`.
    pub fn with_area(values: Vec<f64>, weights: Vec<f64>, area: f64) -> Result<Self> {
        let s = Self::new(values, weights)?;
        let total = s.area();
        if (total - area).abs() > 1e-10 * area.max(1.0) {
            return Err(Error::OutOfRange(format!(
                "total weight {total} differs from domain area {area}"
            )));
        }
        Ok(s)
    }

    pub fn area(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Steps of `f*` as `(value, cumulative measure)`, largest value first.
    /// Equal values are merged, and the order does not depend on how the
    /// input was permuted.
    pub fn rearrangement(&self) -> Vec<(f64, f64)> {
        let mut pairs: Vec<(f64, f64)> = self
            .values
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
            .filter(|(_, w)| *w > 0.0)
            .collect();
        pairs.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.total_cmp(&b.1)));
        let mut steps: Vec<(f64, f64)> = Vec::new();
        let mut acc = 0.0;
        for (v, w) in pairs {
            acc += w;
            match steps.last_mut() {
                Some(last) if last.0 == v => last.1 = acc,
                _ => steps.push((v, acc)),
            }
        }
        steps
    }

    /// Distribution function `d_f(s) = |{|f| > s}|`.
    pub fn distribution(&self, s: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.weights)
            .filter(|(v, _)| **v > s)
            .map(|(_, w)| w)
            .sum()
    }
}

/// `q = f64::INFINITY` selects the weak norm `sup t^{1/p} f*(t)`.
pub fn lorentz_norm(sample: &MeasuredSample, p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::OutOfRange(format!(
            "Lorentz exponent p = {p} must lie in (1, inf)"
        )));
    }
    if !(q >= 1.0) {
        return Err(Error::OutOfRange(format!(
            "Lorentz exponent q = {q} must lie in [1, inf]"
        )));
    }
    let steps = sample.rearrangement();
    if q.is_infinite() {
        return Ok(steps.iter().map(|(v, w)| w.powf(1.0 / p) * v).fold(0.0, f64::max));
    }
    let r = q / p;
    let mut prev = 0.0;
    let mut sum = 0.0;
    for (v, w) in steps {
        let cur = w.powf(r);
        sum += v.powf(q) * (cur - prev);
        prev = cur;
    }
    Ok((sum / r).powf(1.0 / q))
}

/// Plain `L^p` norm `(Σ w |f|^p)^{1/p}`.
pub fn lp_norm(sample: &MeasuredSample, p: f64) -> f64 {
    sample
        .values
        .iter()
        .zip(&sample.weights)
        .map(|(v, w)| w * v.powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// How a radial function is read on a ring `[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingValue {
    /// `f(b)`; a minorant when `f` decreases in ρ.
    Outer,
    /// `f(√(ab))`.
    GeometricMid,
}

/// Radial sample on `{a < ρ < b}` with rings whose edges are `edges`.
pub fn radial_sample(f: impl Fn(f64) -> f64, edges: &[f64], rule: RingValue) -> Result<MeasuredSample> {
    let mut values = Vec::with_capacity(edges.len() - 1);
    let mut weights = Vec::with_capacity(edges.len() - 1);
    for e in edges.windows(2) {
        let x = match rule {
            RingValue::Outer => e[1],
            RingValue::GeometricMid => (e[0] * e[1]).sqrt(),
        };
        values.push(f(x));
        weights.push(PI * (e[1] * e[1] - e[0] * e[0]));
    }
    MeasuredSample::new(values, weights)
}

/// `n` rings of equal width covering the unit disc.
pub fn disc_edges(n: usize) -> Vec<f64> {
    (0..=n).map(|k| k as f64 / n as f64).collect()
}

/// `n` rings, equally spaced in `log ρ`, covering `{r < ρ < 1}`.
pub fn annulus_edges(r: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| r.powf(1.0 - k as f64 / n as f64)).collect()
}

/// Exact `‖1/ρ‖_{2,1}` on `{r < ρ < 1}`, from `‖f‖_{2,1} = 2∫ d_f(s)^{1/2} ds`.
pub fn inverse_radius_l21(r: f64) -> f64 {
    let c = (1.0 - r * r).sqrt();
    2.0 * PI.sqrt() * ((1.0 + c) / r).ln()
}

/// Exact `‖1/ρ‖_{2,∞}` on `{r < ρ < 1}` (`√π` on the disc, `r = 0`).
pub fn inverse_radius_l2inf(r: f64) -> f64 {
    (PI * (1.0 - r * r)).sqrt()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakNormRow {
    pub resolution: usize,
    pub norm: f64,
    pub drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakNormReport {
    pub exponent: f64,
    pub exact: Option<f64>,
    pub rows: Vec<WeakNormRow>,
    pub max_drift: f64,
}

/// `‖ρ^{-a}‖_{2,∞}` on the unit disc at each ring count. `drift` is the relative
/// change from the previous resolution.
pub fn weak_norm_refinement(exponent: f64, resolutions: &[usize]) -> Result<WeakNormReport> {
    let mut rows: Vec<WeakNormRow> = Vec::new();
    for &n in resolutions {
        let s = radial_sample(|x| x.powf(-exponent), &disc_edges(n), RingValue::Outer)?;
        let norm = lorentz_norm(&s, 2.0, f64::INFINITY)?;
        let drift = rows.last().map_or(0.0, |prev| (norm - prev.norm).abs() / prev.norm);
        rows.push(WeakNormRow {
            resolution: n,
            norm,
            drift,
        });
    }
    let max_drift = rows.iter().map(|r| r.drift).fold(0.0, f64::max);
    let exact = (exponent == 1.0 || exponent == 0.0).then(|| PI.sqrt());
    Ok(WeakNormReport {
        exponent,
        exact,
        rows,
        max_drift,
    })
}

/// Finiteness of `‖1/ρ‖_{2,∞}` on the unit disc, witnessed by refinement.
pub fn verify_r1(resolutions: &[usize]) -> Result<WeakNormReport> {
    weak_norm_refinement(1.0, resolutions)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRatioRow {
    pub r: f64,
    pub norm: f64,
    pub exact: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogRatioTable {
    pub rows: Vec<LogRatioRow>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub spread: f64,
}

pub const R2_RINGS_PER_DECADE: usize = 2000;

/// `‖1/ρ‖_{L^{2,1}(D∖B(0,r))} / |log r|` for each radius.
pub fn verify_r2(radii: &[f64]) -> Result<LogRatioTable> {
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        if !(r > 0.0 && r < 0.25) {
            return Err(Error::OutOfRange(format!("inner radius {r} outside (0, 1/4)")));
        }
        let n = ((-r.log10()).ceil() as usize).max(1) * R2_RINGS_PER_DECADE;
        let s = radial_sample(|x| 1.0 / x, &annulus_edges(r, n), RingValue::GeometricMid)?;
        let norm = lorentz_norm(&s, 2.0, 1.0)?;
        rows.push(LogRatioRow {
            r,
            norm,
            exact: inverse_radius_l21(r),
            ratio: norm / r.ln().abs(),
        });
    }
    let min_ratio = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(LogRatioTable {
        rows,
        min_ratio,
        max_ratio,
        spread: max_ratio / min_ratio,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Both sides of `∫_r^1 |f| dρ ≤ ‖f‖_{2,1} ‖1/ρ‖_{2,∞}` on `{r < ρ < 1}`,
/// with `n` log-spaced rings.
pub fn duality_bound(f: impl Fn(f64) -> f64, r: f64, n: usize) -> Result<DualityBound> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfRange(format!("inner radius {r} outside (0, 1)")));
    }
    let edges = annulus_edges(r, n);
    let fs = radial_sample(&f, &edges, RingValue::GeometricMid)?;
    let lhs: f64 = edges.windows(2).zip(&fs.values).map(|(e, v)| v * (e[1] - e[0])).sum();
    let inv = radial_sample(|x| 1.0 / x, &edges, RingValue::GeometricMid)?;
    let rhs = lorentz_norm(&fs, 2.0, 1.0)? * lorentz_norm(&inv, 2.0, f64::INFINITY)?;
    Ok(DualityBound {
        lhs,
        rhs,
        holds: lhs <= rhs,
    })
}

/// Sharp constant in `‖f‖_{p,q2} ≤ K ‖f‖_{p,q1}` for `q1 ≤ q2`.
pub fn nesting_constant(p: f64, q1: f64, q2: f64) -> f64 {
    let inv2 = if q2.is_infinite() { 0.0 } else { 1.0 / q2 };
    (q1 / p).powf(1.0 / q1 - inv2)
}
