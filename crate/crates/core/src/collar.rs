//! Hyperbolic collars as flat cylinders.
//!
//! A collar around a closed geodesic of length `l` is the cylinder
//! `t_min < t < t_max`, `θ ∈ [0, 2π)` with metric
//! `(l / (2π sin(lt/2π)))² (dt² + dθ²)`. The geodesic is the circle `t = π²/l`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollarChart {
    pub l: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl CollarChart {
    pub fn new(l: f64) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidChart(format!("geodesic length {l} must be positive")));
        }
        let a = (0.5 * l).sinh().atan();
        Ok(Self {
            l,
            t_min: TAU / l * a,
            t_max: TAU / l * (PI - a),
        })
    }

    /// Collar-lemma regime `l < 2 arcsinh(1)`.
    pub fn is_thin(&self) -> bool {
        self.l < 2.0 * 1f64.asinh()
    }

    pub fn geodesic_t(&self) -> f64 {
        PI * PI / self.l
    }

    pub fn contains(&self, t: f64) -> bool {
        t > self.t_min && t < self.t_max
    }

    fn check(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!(
                "t = {t} outside collar ({}, {})",
                self.t_min, self.t_max
            )))
        }
    }

    /// `e^λ` with `ds² = e^{2λ}(dt² + dθ²)`.
    pub fn metric_factor(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        Ok(self.factor(t))
    }

    fn factor(&self, t: f64) -> f64 {
        self.l / (TAU * (self.l * t / TAU).sin())
    }

    /// Length of the circle `{t}` by the trapezoid rule with `n` nodes
    /// (exact for the constant integrand).
    pub fn circle_length(&self, t: f64, n: usize) -> Result<f64> {
        let f = self.metric_factor(t)?;
        let h = TAU / n as f64;
        Ok((0..n).map(|_| f * h).sum())
    }

    pub fn geodesic_length(&self) -> f64 {
        self.factor(self.geodesic_t()) * TAU
    }

    /// Samples `t_k` of `n` interior nodes, excluding both ends.
    pub fn t_nodes(&self, n: usize) -> Vec<f64> {
        let h = (self.t_max - self.t_min) / (n + 1) as f64;
        (1..=n).map(|k| self.t_min + k as f64 * h).collect()
    }

    /// Gaussian curvature `-e^{-2λ} λ''` from centered second differences of
    /// `λ = log metric_factor` on `n` interior nodes; entries are `(t, K)`.
    pub fn discrete_curvature(&self, n: usize) -> Vec<(f64, f64)> {
        let ts = self.t_nodes(n);
        let h = ts[1] - ts[0];
        let lam = |t: f64| self.factor(t).ln();
        ts.iter()
            .map(|&t| {
                let d2 = (lam(t + h) - 2.0 * lam(t) + lam(t - h)) / (h * h);
                (t, -d2 / self.factor(t).powi(2))
            })
            .collect()
    }

    /// Grid node of smallest metric factor among `n` interior nodes.
    pub fn argmin_factor(&self, n: usize) -> f64 {
        self.t_nodes(n)
            .into_iter()
            .min_by(|a, b| self.factor(*a).total_cmp(&self.factor(*b)))
            .unwrap_or(self.geodesic_t())
    }
}

/// Parameters of the annulus `{e^{-1/l} < ρ < 1}` and the map from the collar.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusParams {
    pub inner_radius: f64,
    pub geodesic_radius: f64,
    pub modulus: f64,
    /// `ρ = exp(-scale (t - t_min))`.
    pub scale: f64,
    pub t_min: f64,
}

impl AnnulusParams {
    pub fn radius(&self, t: f64) -> f64 {
        (-self.scale * (t - self.t_min)).exp()
    }

    pub fn point(&self, t: f64, theta: f64) -> [f64; 2] {
        let r = self.radius(t);
        [r * theta.cos(), r * theta.sin()]
    }
}

/// The collar is sent onto `{e^{-1/l} < ρ < 1}` by `(t, θ) ↦ e^{-scale (t - t_min)} e^{iθ}`,
/// with `scale` chosen so the log-modulus is `1/l`. The geodesic lands on `ρ = e^{-1/(2l)}`.
pub fn cylinder_to_annulus(chart: &CollarChart) -> AnnulusParams {
    let inner = (-1.0 / chart.l).exp();
    let scale = (1.0 / chart.l) / (chart.t_max - chart.t_min);
    let params = AnnulusParams {
        inner_radius: inner,
        geodesic_radius: 0.0,
        modulus: (1.0 / inner).ln() / TAU,
        scale,
        t_min: chart.t_min,
    };
    AnnulusParams {
        geodesic_radius: params.radius(chart.geodesic_t()),
        ..params
    }
}

/// The flat torus chart `(θ, r) ↦ (cos θ, sin θ, -log r) / √(2πl)` from
/// `{e^{-l} < r < 1}` onto the cylinder of circumference `√(2π/l)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusCylinderChart {
    pub l: f64,
}

pub fn torus_cylinder_chart(l: f64) -> Result<TorusCylinderChart> {
    if !(l > 0.0) || !l.is_finite() {
        return Err(Error::InvalidChart(format!("length {l} must be positive")));
    }
    Ok(TorusCylinderChart { l })
}

impl TorusCylinderChart {
    pub fn inner_radius(&self) -> f64 {
        (-self.l).exp()
    }

    pub fn map(&self, theta: f64, r: f64) -> [f64; 3] {
        let s = 1.0 / (TAU * self.l).sqrt();
        [theta.cos() * s, theta.sin() * s, -r.ln() * s]
    }

    /// In Cartesian coordinates `z = x + iy` of the annulus.
    pub fn map_xy(&self, x: f64, y: f64) -> [f64; 3] {
        self.map(y.atan2(x), x.hypot(y))
    }

    /// Worst relative violation of `|∂x ψ| = |∂y ψ|`, `∂x ψ ⟂ ∂y ψ` over an
    /// `n × n` polar sample, using 5-point differences of step `h`.
    pub fn conformal_defect(&self, n: usize, h: f64) -> f64 {
        let r0 = self.inner_radius();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let r = r0 + (1.0 - r0) * (i as f64 + 0.5) / n as f64;
            for j in 0..n {
                let th = TAU * (j as f64 + 0.5) / n as f64;
                let (x, y) = (r * th.cos(), r * th.sin());
                let d = |dx: f64, dy: f64| {
                    let at = |k: f64| self.map_xy(x + k * dx, y + k * dy);
                    let (a, b, c, e) = (at(2.0), at(1.0), at(-1.0), at(-2.0));
                    let w = |i: usize| (-a[i] + 8.0 * b[i] - 8.0 * c[i] + e[i]) / (12.0 * h);
                    [w(0), w(1), w(2)]
                };
                let (u, v) = (d(h, 0.0), d(0.0, h));
                let dot = |p: [f64; 3], q: [f64; 3]| p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
                let (e, g, f) = (dot(u, u), dot(v, v), dot(u, v));
                worst = worst.max(((e - g).abs() + 2.0 * f.abs()) / (e + g));
            }
        }
        worst
    }
}
