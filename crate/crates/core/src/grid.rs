//! Structured parametric charts sampling an immersion `Φ: domain → R^m`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::Axis;
use crate::multivec::{MAX_DIM, MIN_DIM};

pub const MIN_SAMPLES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChartKind {
    /// Both directions bounded.
    Rectangle,
    /// Polar `(ρ, θ)`, `θ` periodic; `ρ` is sampled uniformly in `log ρ` so
    /// that the sampling coordinates `(log ρ, θ)` are conformal.
    Annulus,
    /// `u` bounded, `v` periodic.
    Cylinder,
    /// Both directions periodic.
    Torus,
}

/// How the surface behaves past a bounded `u`-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// A genuine boundary of the surface.
    #[default]
    Boundary,
    /// The chart degenerates to a single smooth point (e.g. a Mercator pole);
    /// the surface continues and closes up there.
    Pole,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartDomain {
    pub kind: ChartKind,
    /// `(ρ_min, ρ_max)` for annuli, otherwise the `u` interval.
    pub u_range: (f64, f64),
    pub v_range: (f64, f64),
    pub nu: usize,
    pub nv: usize,
}

impl ChartDomain {
    pub fn new(kind: ChartKind, u_range: (f64, f64), v_range: (f64, f64), nu: usize, nv: usize) -> Result<Self> {
        let d = Self {
            kind,
            u_range,
            v_range,
            nu,
            nv,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nu < MIN_SAMPLES || self.nv < MIN_SAMPLES {
            return Err(Error::InvalidChart(format!(
                "grid {}x{} below minimum {MIN_SAMPLES}",
                self.nu, self.nv
            )));
        }
        let (a, b) = self.u_range;
        let (c, d) = self.v_range;
        if !(a < b) || !(c < d) || ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(Error::InvalidChart(format!(
                "empty ranges u = {:?}, v = {:?}",
                self.u_range, self.v_range
            )));
        }
        if self.kind == ChartKind::Annulus && a <= 0.0 {
            return Err(Error::InvalidChart(format!("annulus needs 0 < ρ_min, got {a}")));
        }
        Ok(())
    }

    pub fn periodic_u(&self) -> bool {
        self.kind == ChartKind::Torus
    }

    pub fn periodic_v(&self) -> bool {
        self.kind != ChartKind::Rectangle
    }

    /// Range of the conformal sampling coordinate in `u` (`log ρ` for annuli).
    pub fn conformal_u_range(&self) -> (f64, f64) {
        match self.kind {
            ChartKind::Annulus => (self.u_range.0.ln(), self.u_range.1.ln()),
            _ => self.u_range,
        }
    }

    pub fn hu(&self) -> f64 {
        let (a, b) = self.conformal_u_range();
        if self.periodic_u() {
            (b - a) / self.nu as f64
        } else {
            (b - a) / (self.nu - 1) as f64
        }
    }

    pub fn hv(&self) -> f64 {
        let (a, b) = self.v_range;
        if self.periodic_v() {
            (b - a) / self.nv as f64
        } else {
            (b - a) / (self.nv - 1) as f64
        }
    }

    /// Conformal coordinate of row `i` (`log ρ_i` for annuli).
    pub fn conformal_u(&self, i: usize) -> f64 {
        self.conformal_u_range().0 + i as f64 * self.hu()
    }

    /// Chart coordinate of row `i` (`ρ_i` for annuli).
    pub fn u(&self, i: usize) -> f64 {
        match self.kind {
            ChartKind::Annulus => self.conformal_u(i).exp(),
            _ => self.conformal_u(i),
        }
    }

    pub fn v(&self, j: usize) -> f64 {
        self.v_range.0 + j as f64 * self.hv()
    }

    pub fn u_axis(&self) -> Axis {
        Axis::new(self.nu, self.hu(), self.periodic_u())
    }

    pub fn v_axis(&self) -> Axis {
        Axis::new(self.nv, self.hv(), self.periodic_v())
    }

    /// Conformal `u` coordinate of the contour of radius `ρ`: `log ρ`.
    /// For cylinders and tori the complex coordinate is `z = exp(u + i v)`.
    pub fn radius_to_u(&self, rho: f64) -> Result<f64> {
        if !self.periodic_v() {
            return Err(Error::Topology("a chart with periodic v for contour integrals".into()));
        }
        if !(rho > 0.0) {
            return Err(Error::OutOfRange(format!("radius {rho} must be positive")));
        }
        Ok(rho.ln())
    }

    /// Fractional row index of conformal coordinate `u`.
    pub fn row_position(&self, u: f64) -> f64 {
        (u - self.conformal_u_range().0) / self.hu()
    }
}

/// Samples of an immersion on a structured chart.
#[derive(Clone, Debug, PartialEq)]
pub struct ImmersionGrid {
    pub domain: ChartDomain,
    pub m: usize,
    /// Row-major `(nu, nv, m)` positions.
    pub points: Vec<f64>,
    /// Behaviour at the low and high `u` edges (ignored for tori).
    pub u_edges: [EdgeKind; 2],
    /// Upper bound on [`crate::immersion::conformal_defect`] expected for
    /// this chart; `f64::INFINITY` marks a deliberately non-conformal chart.
    pub conformal_tolerance: f64,
    /// Optional exact `(∂uΦ, ∂vΦ)` per sample (`2m` values, sampling
    /// coordinates), used by the conformality check.
    pub tangents: Option<Vec<f64>>,
}

impl ImmersionGrid {
    pub fn new(domain: ChartDomain, m: usize, points: Vec<f64>) -> Result<Self> {
        domain.validate()?;
        if !(MIN_DIM..=MAX_DIM).contains(&m) {
            return Err(Error::UnsupportedDimension(m));
        }
        if points.len() != domain.nu * domain.nv * m {
            return Err(Error::InvalidChart(format!(
                "expected {} coordinates, got {}",
                domain.nu * domain.nv * m,
                points.len()
            )));
        }
        if let Some(bad) = points.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(format!("point coordinate #{bad}")));
        }
        Ok(Self {
            domain,
            m,
            points,
            u_edges: [EdgeKind::Boundary; 2],
            conformal_tolerance: 1e-8,
            tangents: None,
        })
    }

    /// Samples `f(u, v)` at every grid node, where `u` is the chart
    /// coordinate (`ρ` for annuli).
    pub fn from_fn(domain: ChartDomain, m: usize, f: impl Fn(f64, f64) -> Vec<f64>) -> Result<Self> {
        domain.validate()?;
        let mut points = Vec::with_capacity(domain.nu * domain.nv * m);
        for i in 0..domain.nu {
            let u = domain.u(i);
            for j in 0..domain.nv {
                let p = f(u, domain.v(j));
                if p.len() != m {
                    return Err(Error::DimensionMismatch(p.len(), m));
                }
                points.extend_from_slice(&p);
            }
        }
        Self::new(domain, m, points)
    }

    pub fn with_edges(mut self, edges: [EdgeKind; 2]) -> Self {
        self.u_edges = edges;
        self
    }

    pub fn with_conformal_tolerance(mut self, tol: f64) -> Self {
        self.conformal_tolerance = tol;
        self
    }

    pub fn with_tangents(mut self, tangents: Vec<f64>) -> Result<Self> {
        if tangents.len() != 2 * self.points.len() {
            return Err(Error::InvalidChart(format!(
                "expected {} tangent values, got {}",
                2 * self.points.len(),
                tangents.len()
            )));
        }
        if tangents.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("tangent".into()));
        }
        self.tangents = Some(tangents);
        Ok(self)
    }

    /// Exact `(∂uΦ, ∂vΦ)` at sample `k`, if known.
    pub fn tangent(&self, k: usize) -> Option<(&[f64], &[f64])> {
        self.tangents.as_ref().map(|t| {
            let o = 2 * self.m * k;
            (&t[o..o + self.m], &t[o + self.m..o + 2 * self.m])
        })
    }

    /// Rows `first..=last` as a new grid over `domain` (which must describe
    /// exactly those rows).
    pub fn rows(&self, first: usize, last: usize, domain: ChartDomain) -> Result<Self> {
        if last < first || last >= self.domain.nu || domain.nu != last - first + 1 || domain.nv != self.domain.nv {
            return Err(Error::InvalidChart(format!(
                "row range {first}..={last} does not match domain"
            )));
        }
        let w = self.domain.nv * self.m;
        let points = self.points[first * w..(last + 1) * w].to_vec();
        let mut out = Self::new(domain, self.m, points)?;
        out.conformal_tolerance = self.conformal_tolerance;
        if let Some(t) = &self.tangents {
            out.tangents = Some(t[2 * first * w..2 * (last + 1) * w].to_vec());
        }
        Ok(out)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.domain.nv + j
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> &[f64] {
        let k = self.index(i, j) * self.m;
        &self.points[k..k + self.m]
    }

    pub fn len(&self) -> usize {
        self.domain.nu * self.domain.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// True when every chart edge is periodic or collapses to a pole.
    pub fn is_closed(&self) -> bool {
        let u_closed = self.domain.periodic_u() || self.u_edges.iter().all(|e| *e == EdgeKind::Pole);
        u_closed && self.domain.periodic_v()
    }

    /// Applies `f` to every sample, keeping the chart.
    pub fn map_points(&self, m: usize, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let mut points = Vec::with_capacity(self.len() * m);
        for p in self.points.chunks(self.m) {
            let q = f(p);
            if q.len() != m {
                return Err(Error::DimensionMismatch(q.len(), m));
            }
            points.extend_from_slice(&q);
        }
        let mut out = Self::new(self.domain.clone(), m, points)?;
        out.u_edges = self.u_edges;
        out.conformal_tolerance = self.conformal_tolerance;
        Ok(out)
    }

    /// Applies `f(point, tangent)` to each sample, mapping tangents by the
    /// differential `df(point, tangent)` when they are known.
    pub fn map_with_differential(
        &self,
        m: usize,
        f: impl Fn(&[f64]) -> Vec<f64>,
        df: impl Fn(&[f64], &[f64]) -> Vec<f64>,
    ) -> Result<Self> {
        let mut out = self.map_points(m, &f)?;
        out.tangents = None;
        if let Some(t) = &self.tangents {
            let mut mapped = Vec::with_capacity(2 * self.len() * m);
            for (k, p) in self.points.chunks(self.m).enumerate() {
                let o = 2 * self.m * k;
                mapped.extend(df(p, &t[o..o + self.m]));
                mapped.extend(df(p, &t[o + self.m..o + 2 * self.m]));
            }
            out = out.with_tangents(mapped)?;
        }
        Ok(out)
    }

    /// Largest distance between two samples (brute force over a subsample).
    pub fn diameter(&self) -> f64 {
        let stride = (self.len() / 2048).max(1);
        let pts: Vec<&[f64]> = self.points.chunks(self.m).step_by(stride).collect();
        let mut best: f64 = 0.0;
        for (a, p) in pts.iter().enumerate() {
            for q in &pts[a + 1..] {
                best = best.max(dist(p, q));
            }
        }
        best
    }

    pub fn to_document(&self) -> GridDocument {
        GridDocument {
            schema: "1".into(),
            kind: self.domain.kind,
            u_range: [self.domain.u_range.0, self.domain.u_range.1],
            v_range: [self.domain.v_range.0, self.domain.v_range.1],
            nu: self.domain.nu,
            nv: self.domain.nv,
            m: self.m,
            u_edges: self.u_edges,
            conformal_tolerance: if self.conformal_tolerance.is_finite() {
                Some(self.conformal_tolerance)
            } else {
                None
            },
            points: self.points.chunks(self.m).map(|c| c.to_vec()).collect(),
            tangents: self
                .tangents
                .as_ref()
                .map(|t| t.chunks(2 * self.m).map(|c| c.to_vec()).collect()),
        }
    }

    pub fn from_document(doc: &GridDocument) -> Result<Self> {
        let domain = ChartDomain::new(
            doc.kind,
            (doc.u_range[0], doc.u_range[1]),
            (doc.v_range[0], doc.v_range[1]),
            doc.nu,
            doc.nv,
        )?;
        if doc.points.iter().any(|p| p.len() != doc.m) {
            return Err(Error::InvalidChart("point with wrong dimension".into()));
        }
        let points = doc.points.iter().flatten().copied().collect();
        let grid = Self::new(domain, doc.m, points)?
            .with_edges(doc.u_edges)
            .with_conformal_tolerance(doc.conformal_tolerance.unwrap_or(f64::INFINITY));
        match &doc.tangents {
            Some(t) => grid.with_tangents(t.iter().flatten().copied().collect()),
            None => Ok(grid),
        }
    }
}

/// JSON form of an [`ImmersionGrid`]; `points` is row-major (`u` outer).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridDocument {
    pub schema: String,
    pub kind: ChartKind,
    pub u_range: [f64; 2],
    pub v_range: [f64; 2],
    pub nu: usize,
    pub nv: usize,
    pub m: usize,
    #[serde(default)]
    pub u_edges: [EdgeKind; 2],
    #[serde(default)]
    pub conformal_tolerance: Option<f64>,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangents: Option<Vec<Vec<f64>>>,
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annulus_samples_geometrically() {
        let d = ChartDomain::new(ChartKind::Annulus, (0.1, 1.0), (0.0, std::f64::consts::TAU), 16, 32).unwrap();
        assert!((d.u(0) - 0.1).abs() < 1e-15);
        assert!((d.u(15) - 1.0).abs() < 1e-14);
        let r = d.u(1) / d.u(0);
        assert!((d.u(8) / d.u(7) - r).abs() < 1e-12);
        assert!((d.hv() - std::f64::consts::TAU / 32.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_domains() {
        assert!(ChartDomain::new(ChartKind::Rectangle, (0.0, 1.0), (0.0, 1.0), 8, 32).is_err());
        assert!(ChartDomain::new(ChartKind::Annulus, (0.0, 1.0), (0.0, 1.0), 32, 32).is_err());
        assert!(ChartDomain::new(ChartKind::Cylinder, (1.0, 1.0), (0.0, 1.0), 32, 32).is_err());
    }

    #[test]
    fn document_round_trip() {
        let d = ChartDomain::new(ChartKind::Cylinder, (-1.0, 1.0), (0.0, 6.0), 16, 16).unwrap();
        let g = ImmersionGrid::from_fn(d, 3, |u, v| vec![u, v, u * v])
            .unwrap()
            .with_edges([EdgeKind::Pole, EdgeKind::Boundary]);
        let text = serde_json::to_string(&g.to_document()).unwrap();
        let back = ImmersionGrid::from_document(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn closedness() {
        let d = ChartDomain::new(ChartKind::Cylinder, (-1.0, 1.0), (0.0, 6.0), 16, 16).unwrap();
        let g = ImmersionGrid::from_fn(d, 3, |u, v| vec![u, v, 0.0]).unwrap();
        assert!(!g.is_closed());
        assert!(g.clone().with_edges([EdgeKind::Pole; 2]).is_closed());
    }
}
