//! Analytic test surfaces in conformal charts and Möbius transformations.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::elastica::{fiber, qi, ElasticaSolution};
use crate::error::{Error, Result};
use crate::grid::{dist, ChartDomain, ChartKind, EdgeKind, ImmersionGrid};
use crate::immersion::conformal_defect;
use crate::multivec::MAX_DIM;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    Plane,
    Sphere,
    Catenoid,
    InvertedCatenoid,
    #[serde(alias = "clifford-torus-R4")]
    CliffordTorusR4,
    #[serde(alias = "clifford-torus-R3")]
    CliffordTorusR3,
    HopfTorus,
    GraphBump,
}

impl SurfaceKind {
    /// Accepted parameters and their defaults (`NaN` marks "no default").
    fn parameters(self) -> &'static [(&'static str, f64)] {
        match self {
            SurfaceKind::Plane => &[
                ("u_min", 0.0),
                ("u_max", 1.0),
                ("v_min", 0.0),
                ("v_max", 1.0),
                ("rho_min", f64::NAN),
                ("rho_max", f64::NAN),
                ("dim", 3.0),
            ],
            SurfaceKind::Sphere => &[("radius", 1.0), ("u_min", f64::NAN), ("u_max", 6.5), ("dim", 3.0)],
            SurfaceKind::Catenoid => &[("neck", 1.0), ("t_min", f64::NAN), ("t_max", 2.0), ("dim", 3.0)],
            SurfaceKind::InvertedCatenoid => &[
                ("neck", 1.0),
                ("t_min", f64::NAN),
                ("t_max", 2.0),
                ("center_offset", f64::NAN),
                ("inversion_radius", f64::NAN),
                ("dim", 3.0),
            ],
            SurfaceKind::CliffordTorusR4 => &[("dim", 4.0)],
            SurfaceKind::CliffordTorusR3 => &[("dim", 3.0)],
            SurfaceKind::HopfTorus => &[("k0", 0.0), ("dk0", 0.0), ("length", PI), ("max_step", 1e-3)],
            SurfaceKind::GraphBump => &[("rho_min", 0.2), ("rho_max", 2.0), ("amplitude", 1.0)],
        }
    }
}

/// A catalogue surface: `{"kind": ..., "params": {...}, "resolution": [nu, nv]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub resolution: [usize; 2],
}

impl SurfaceSpec {
    pub fn new(kind: SurfaceKind, nu: usize, nv: usize) -> Self {
        Self {
            kind,
            params: BTreeMap::new(),
            resolution: [nu, nv],
        }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let allowed = self.kind.parameters();
        for (name, value) in &self.params {
            if !allowed.iter().any(|(a, _)| a == name) {
                return Err(Error::InvalidSpec(format!(
                    "unknown parameter '{name}' for {:?}",
                    self.kind
                )));
            }
            if !value.is_finite() {
                return Err(Error::InvalidSpec(format!("parameter '{name}' is not finite")));
            }
        }
        let [nu, nv] = self.resolution;
        if nu < crate::grid::MIN_SAMPLES || nv < crate::grid::MIN_SAMPLES {
            return Err(Error::InvalidSpec(format!("resolution {nu}x{nv} is too coarse")));
        }
        Ok(())
    }

    fn get(&self, name: &str) -> Option<f64> {
        self.params.get(name).copied().or_else(|| {
            self.kind
                .parameters()
                .iter()
                .find(|(a, _)| *a == name)
                .map(|(_, d)| *d)
                .filter(|d| !d.is_nan())
        })
    }

    fn positive(&self, name: &str) -> Result<f64> {
        let v = self.get(name).unwrap_or(f64::NAN);
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::InvalidSpec(format!(
                "parameter '{name}' must be positive, got {v}"
            )))
        }
    }
}

/// Builds the sampled immersion described by `spec`.
pub fn realize(spec: &SurfaceSpec) -> Result<ImmersionGrid> {
    spec.validate()?;
    let [nu, nv] = spec.resolution;
    let grid = match spec.kind {
        SurfaceKind::Plane => plane(spec, nu, nv)?,
        SurfaceKind::Sphere => sphere(spec, nu, nv)?,
        SurfaceKind::Catenoid => catenoid(spec, nu, nv)?,
        SurfaceKind::InvertedCatenoid => {
            let a = spec.positive("neck")?;
            let base = catenoid(spec, nu, nv)?;
            let offset = spec.get("center_offset").unwrap_or(0.5 * a);
            let radius = spec.get("inversion_radius").unwrap_or(a);
            let map = MobiusMap::new(vec![MobiusStep::Inversion {
                center: vec![0.0, 0.0, offset],
                radius,
            }]);
            apply_mobius(&map, &base)?
        }
        SurfaceKind::CliffordTorusR4 => clifford(nu, nv)?,
        SurfaceKind::CliffordTorusR3 => {
            let t = clifford(nu, nv)?;
            t.map_with_differential(
                3,
                |x| {
                    let s = 1.0 / (1.0 - x[3]);
                    vec![x[0] * s, x[1] * s, x[2] * s]
                },
                |x, v| {
                    let s = 1.0 / (1.0 - x[3]);
                    (0..3).map(|c| v[c] * s + x[c] * v[3] * s * s).collect()
                },
            )?
        }
        SurfaceKind::HopfTorus => hopf_torus(spec, nu, nv)?,
        SurfaceKind::GraphBump => graph_bump(spec, nu, nv)?,
    };
    let dim = spec.get("dim").unwrap_or(grid.m as f64);
    if dim.fract() != 0.0 || (dim as usize) < grid.m || dim as usize > MAX_DIM {
        return Err(Error::InvalidSpec(format!(
            "dim = {dim} cannot host a surface in R^{}",
            grid.m
        )));
    }
    pad(grid, dim as usize)
}

fn pad(grid: ImmersionGrid, m: usize) -> Result<ImmersionGrid> {
    if m == grid.m {
        return Ok(grid);
    }
    let edges = grid.u_edges;
    let widen = |x: &[f64]| {
        let mut y = x.to_vec();
        y.resize(m, 0.0);
        y
    };
    Ok(grid.map_with_differential(m, widen, |_, v| widen(v))?.with_edges(edges))
}

/// Samples `f(u, v) -> (Φ, ∂uΦ, ∂vΦ)` with derivatives in sampling coordinates.
fn sample(
    domain: ChartDomain,
    m: usize,
    f: impl Fn(f64, f64) -> (Vec<f64>, Vec<f64>, Vec<f64>),
) -> Result<ImmersionGrid> {
    let mut points = Vec::with_capacity(domain.nu * domain.nv * m);
    let mut tangents = Vec::with_capacity(2 * domain.nu * domain.nv * m);
    for i in 0..domain.nu {
        let u = domain.u(i);
        for j in 0..domain.nv {
            let (p, a, b) = f(u, domain.v(j));
            points.extend(p);
            tangents.extend(a);
            tangents.extend(b);
        }
    }
    ImmersionGrid::new(domain, m, points)?.with_tangents(tangents)
}

fn plane(spec: &SurfaceSpec, nu: usize, nv: usize) -> Result<ImmersionGrid> {
    match (spec.get("rho_min"), spec.get("rho_max")) {
        (Some(r0), Some(r1)) => {
            let d = ChartDomain::new(ChartKind::Annulus, (r0, r1), (0.0, TAU), nu, nv)?;
            sample(d, 3, |r, t| {
                let (s, c) = t.sin_cos();
                (
                    vec![r * c, r * s, 0.0],
                    vec![r * c, r * s, 0.0],
                    vec![-r * s, r * c, 0.0],
                )
            })
        }
        (None, None) => {
            let u = (spec.get("u_min").unwrap_or(0.0), spec.get("u_max").unwrap_or(1.0));
            let v = (spec.get("v_min").unwrap_or(0.0), spec.get("v_max").unwrap_or(1.0));
            let d = ChartDomain::new(ChartKind::Rectangle, u, v, nu, nv)?;
            sample(d, 3, |u, v| (vec![u, v, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]))
        }
        _ => Err(Error::InvalidSpec(
            "plane annulus needs both rho_min and rho_max".into(),
        )),
    }
}

/// Pole edges are declared when the Mercator band reaches `|u| >= 4`.
const POLE_U: f64 = 4.0;

fn sphere(spec: &SurfaceSpec, nu: usize, nv: usize) -> Result<ImmersionGrid> {
    let r = spec.positive("radius")?;
    let u1 = spec.get("u_max").unwrap_or(6.5);
    let u0 = spec.get("u_min").unwrap_or(-u1);
    let d = ChartDomain::new(ChartKind::Cylinder, (u0, u1), (0.0, TAU), nu, nv)?;
    let edge = |u: f64| {
        if u.abs() >= POLE_U {
            EdgeKind::Pole
        } else {
            EdgeKind::Boundary
        }
    };
    Ok(sample(d, 3, |u, v| {
        let (sech, th) = (1.0 / u.cosh(), u.tanh());
        let (s, c) = v.sin_cos();
        (
            vec![r * sech * c, r * sech * s, r * th],
            vec![-r * sech * th * c, -r * sech * th * s, r * sech * sech],
            vec![-r * sech * s, r * sech * c, 0.0],
        )
    })?
    .with_edges([edge(u0), edge(u1)]))
}

fn catenoid(spec: &SurfaceSpec, nu: usize, nv: usize) -> Result<ImmersionGrid> {
    let a = spec.positive("neck")?;
    let t1 = spec.get("t_max").unwrap_or(2.0);
    let t0 = spec.get("t_min").unwrap_or(-t1);
    let d = ChartDomain::new(ChartKind::Cylinder, (t0, t1), (0.0, TAU), nu, nv)?;
    sample(d, 3, |t, th| {
        let (ch, sh) = (t.cosh(), t.sinh());
        let (s, c) = th.sin_cos();
        (
            vec![a * ch * c, a * ch * s, a * t],
            vec![a * sh * c, a * sh * s, a],
            vec![-a * ch * s, a * ch * c, 0.0],
        )
    })
}

fn clifford(nu: usize, nv: usize) -> Result<ImmersionGrid> {
    let d = ChartDomain::new(ChartKind::Torus, (0.0, TAU), (0.0, TAU), nu, nv)?;
    let k = FRAC_1_SQRT_2;
    sample(d, 4, |a, b| {
        let (sa, ca) = a.sin_cos();
        let (sb, cb) = b.sin_cos();
        (
            vec![k * ca, k * sa, k * cb, k * sb],
            vec![-k * sa, k * ca, 0.0, 0.0],
            vec![0.0, 0.0, -k * sb, k * cb],
        )
    })
}

/// `Φ(s, θ) = e^{iθ} γ̃(s)` over `s ∈ [0, length]`, `γ̃` the horizontal lift
/// of the elastica with `k(0) = k0`, `k'(0) = dk0`.
pub fn hopf_torus_with_solution(spec: &SurfaceSpec) -> Result<(ImmersionGrid, ElasticaSolution, usize)> {
    spec.validate()?;
    let [nu, nv] = spec.resolution;
    let length = spec.positive("length")?;
    let max_step = spec.positive("max_step")?;
    let h = length / (nu - 1) as f64;
    let sub = (h / max_step).ceil().max(1.0) as usize;
    let sol = ElasticaSolution::compute(
        spec.get("k0").unwrap_or(0.0),
        spec.get("dk0").unwrap_or(0.0),
        length,
        h / sub as f64,
    )?;
    if sol.len() != (nu - 1) * sub + 1 {
        return Err(Error::InvalidSpec("elastica grid does not align with the chart".into()));
    }
    let d = ChartDomain::new(ChartKind::Cylinder, (0.0, length), (0.0, TAU), nu, nv)?;
    let mut points = Vec::with_capacity(nu * nv * 4);
    let mut tangents = Vec::with_capacity(2 * nu * nv * 4);
    for i in 0..nu {
        let q = sol.lift[i * sub];
        let dq = sol.lift_velocity(i * sub);
        for j in 0..nv {
            let th = d.v(j);
            let p = fiber(th, q);
            points.extend(p);
            tangents.extend(fiber(th, dq));
            tangents.extend(qi(p));
        }
    }
    let grid = ImmersionGrid::new(d, 4, points)?
        .with_tangents(tangents)?
        .with_conformal_tolerance(1e-6);
    Ok((grid, sol, sub))
}

fn hopf_torus(spec: &SurfaceSpec, _nu: usize, _nv: usize) -> Result<ImmersionGrid> {
    hopf_torus_with_solution(spec).map(|(g, _, _)| g)
}

fn graph_bump(spec: &SurfaceSpec, nu: usize, nv: usize) -> Result<ImmersionGrid> {
    let r0 = spec.positive("rho_min")?;
    let r1 = spec.positive("rho_max")?;
    let amp = spec.get("amplitude").unwrap_or(1.0);
    let d = ChartDomain::new(ChartKind::Annulus, (r0, r1), (0.0, TAU), nu, nv)?;
    Ok(sample(d, 3, |r, t| {
        let (s, c) = t.sin_cos();
        let z = amp * (-r * r).exp();
        (
            vec![r * c, r * s, z],
            vec![r * c, r * s, -2.0 * r * r * z],
            vec![-r * s, r * c, 0.0],
        )
    })?
    .with_conformal_tolerance(f64::INFINITY))
}

/// One generator of the Möbius group of `R^m ∪ {∞}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MobiusStep {
    Translation {
        offset: Vec<f64>,
    },
    Dilation {
        factor: f64,
    },
    /// Row-major orthogonal matrix.
    Rotation {
        matrix: Vec<Vec<f64>>,
    },
    /// `x ↦ c + r² (x - c) / |x - c|²`.
    Inversion {
        center: Vec<f64>,
        #[serde(default = "unit")]
        radius: f64,
    },
}

fn unit() -> f64 {
    1.0
}

impl MobiusStep {
    fn check(&self, m: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match self {
            MobiusStep::Translation { offset } if offset.len() != m => bad(format!("translation needs {m} components")),
            MobiusStep::Dilation { factor } if !(*factor > 0.0) => {
                bad(format!("dilation factor {factor} must be positive"))
            }
            MobiusStep::Rotation { matrix } => {
                if matrix.len() != m || matrix.iter().any(|r| r.len() != m) {
                    return bad(format!("rotation must be {m}x{m}"));
                }
                for i in 0..m {
                    for j in 0..m {
                        let g: f64 = (0..m).map(|k| matrix[k][i] * matrix[k][j]).sum();
                        let want = if i == j { 1.0 } else { 0.0 };
                        if (g - want).abs() > 1e-10 {
                            return bad("rotation matrix is not orthogonal".into());
                        }
                    }
                }
                Ok(())
            }
            MobiusStep::Inversion { center, radius } if center.len() != m || !(*radius > 0.0) => {
                bad(format!("inversion needs a center in R^{m} and a positive radius"))
            }
            _ => Ok(()),
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            MobiusStep::Translation { offset } => x.iter().zip(offset).map(|(a, b)| a + b).collect(),
            MobiusStep::Dilation { factor } => x.iter().map(|a| a * factor).collect(),
            MobiusStep::Rotation { matrix } => matrix
                .iter()
                .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                .collect(),
            MobiusStep::Inversion { center, radius } => {
                let y: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let s = radius * radius / y.iter().map(|a| a * a).sum::<f64>();
                center.iter().zip(&y).map(|(c, a)| c + s * a).collect()
            }
        }
    }

    fn push(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        match self {
            MobiusStep::Translation { .. } => v.to_vec(),
            MobiusStep::Dilation { factor } => v.iter().map(|a| a * factor).collect(),
            MobiusStep::Rotation { .. } => self.apply(v),
            MobiusStep::Inversion { center, radius } => {
                let y: Vec<f64> = x.iter().zip(center).map(|(a, c)| a - c).collect();
                let yy: f64 = y.iter().map(|a| a * a).sum();
                let yv: f64 = y.iter().zip(v).map(|(a, b)| a * b).sum();
                let s = radius * radius / yy;
                v.iter().zip(&y).map(|(b, a)| s * (b - 2.0 * yv / yy * a)).collect()
            }
        }
    }
}

/// A composition `steps[last] ∘ … ∘ steps[0]`.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct MobiusMap {
    pub steps: Vec<MobiusStep>,
}

impl MobiusMap {
    pub fn new(steps: Vec<MobiusStep>) -> Self {
        Self { steps }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn apply_point(&self, x: &[f64]) -> Vec<f64> {
        self.steps.iter().fold(x.to_vec(), |p, s| s.apply(&p))
    }

    /// A random composition of `len` generators in `R^m`, with inversion
    /// centers kept between `0.5 D` and `2 D` away from `grid` (`D` the
    /// current diameter) so that the image stays well sampled.
    pub fn random_generic<R: Rng>(rng: &mut R, grid: &ImmersionGrid, len: usize) -> Self {
        let m = grid.m;
        let mut current = grid.points.clone();
        let mut steps = Vec::with_capacity(len);
        for _ in 0..len {
            let step = match rng.gen_range(0..4) {
                0 => MobiusStep::Translation {
                    offset: (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                },
                1 => MobiusStep::Dilation {
                    factor: rng.gen_range(0.5..2.0),
                },
                2 => MobiusStep::Rotation {
                    matrix: random_rotation(rng, m),
                },
                _ => {
                    let pts: Vec<&[f64]> = current.chunks(m).collect();
                    let centroid: Vec<f64> = (0..m)
                        .map(|c| pts.iter().map(|p| p[c]).sum::<f64>() / pts.len() as f64)
                        .collect();
                    let diam = sampled_diameter(&pts);
                    loop {
                        let dir: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
                        let n = dir.iter().map(|a| a * a).sum::<f64>().sqrt();
                        if !(n > 1e-3) {
                            continue;
                        }
                        let reach = rng.gen_range(0.0..2.0 * diam);
                        let center: Vec<f64> = centroid.iter().zip(&dir).map(|(c, d)| c + reach * d / n).collect();
                        let gap = pts.iter().map(|p| dist(p, &center)).fold(f64::INFINITY, f64::min);
                        if gap >= 0.5 * diam && gap <= 2.0 * diam {
                            break MobiusStep::Inversion { center, radius: diam };
                        }
                    }
                }
            };
            current = current.chunks(m).flat_map(|p| step.apply(p)).collect();
            steps.push(step);
        }
        Self { steps }
    }
}

fn sampled_diameter(pts: &[&[f64]]) -> f64 {
    let stride = (pts.len() / 512).max(1);
    let sub: Vec<&[f64]> = pts.iter().step_by(stride).copied().collect();
    let mut best: f64 = 0.0;
    for (i, p) in sub.iter().enumerate() {
        for q in &sub[i + 1..] {
            best = best.max(dist(p, q));
        }
    }
    best
}

/// Gram-Schmidt on a random Gaussian-ish matrix; determinant +1.
pub fn random_rotation<R: Rng>(rng: &mut R, m: usize) -> Vec<Vec<f64>> {
    loop {
        let mut rows: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        let mut ok = true;
        for i in 0..m {
            for j in 0..i {
                let d: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
                let rj = rows[j].clone();
                rows[i].iter_mut().zip(&rj).for_each(|(a, b)| *a -= d * b);
            }
            let n = rows[i].iter().map(|a| a * a).sum::<f64>().sqrt();
            if n < 1e-6 {
                ok = false;
                break;
            }
            rows[i].iter_mut().for_each(|a| *a /= n);
        }
        if !ok {
            continue;
        }
        if determinant(&rows) < 0.0 {
            rows[0].iter_mut().for_each(|a| *a = -*a);
        }
        return rows;
    }
}

fn determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
            .unwrap_or(c);
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let f = m[r][c] / m[c][c];
            for k in c..n {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    det
}

/// Relative distance below which an inversion center counts as on the surface.
pub const GENERIC_MARGIN: f64 = 1e-3;

/// Applies `map` to every sample (and exact tangent), rejecting inversion
/// centers within `GENERIC_MARGIN` diameters of the current image.
pub fn apply_mobius(map: &MobiusMap, grid: &ImmersionGrid) -> Result<ImmersionGrid> {
    let m = grid.m;
    let mut out = grid.clone();
    for step in &map.steps {
        step.check(m)?;
        if let MobiusStep::Inversion { center, .. } = step {
            let pts: Vec<&[f64]> = out.points.chunks(m).collect();
            let required = GENERIC_MARGIN * sampled_diameter(&pts);
            let distance = pts.iter().map(|p| dist(p, center)).fold(f64::INFINITY, f64::min);
            if distance < required {
                return Err(Error::NonGenericInversion { distance, required });
            }
        }
        let edges = out.u_edges;
        out = out
            .map_with_differential(m, |x| step.apply(x), |x, v| step.push(x, v))?
            .with_edges(edges);
    }
    if out.tangents.is_some() && out.conformal_tolerance.is_finite() {
        let defect = conformal_defect(&out);
        if !(defect <= out.conformal_tolerance) {
            return Err(Error::InvalidChart(format!(
                "conformal defect {defect:.3e} after Möbius map exceeds {:.1e}",
                out.conformal_tolerance
            )));
        }
    }
    Ok(out)
}

/// Restricts a chart with periodic `v` to the rows with `log ρ_min <= u <=
/// log ρ_max`, where the conformal `u` coordinate is read as `log ρ`. No
/// interpolation is done: the bounds snap inwards to grid rows.
pub fn extract_annulus(grid: &ImmersionGrid, rho_min: f64, rho_max: f64) -> Result<ImmersionGrid> {
    let d = &grid.domain;
    if !d.periodic_v() || d.periodic_u() {
        return Err(Error::Topology("a chart with bounded u and periodic v".into()));
    }
    if !(0.0 < rho_min && rho_min < rho_max) {
        return Err(Error::OutOfRange(format!(
            "need 0 < ρ_min < ρ_max, got {rho_min}, {rho_max}"
        )));
    }
    let (u0, u1) = d.conformal_u_range();
    let (a, b) = (rho_min.ln(), rho_max.ln());
    let tol = 1e-9 * d.hu();
    if a < u0 - tol || b > u1 + tol {
        return Err(Error::OutOfRange(format!(
            "radii [{rho_min}, {rho_max}] outside the chart [{}, {}]",
            u0.exp(),
            u1.exp()
        )));
    }
    let first = ((a - u0) / d.hu() - 1e-9).ceil().max(0.0) as usize;
    let last = (((b - u0) / d.hu() + 1e-9).floor() as usize).min(d.nu - 1);
    if last < first || last - first + 1 < crate::grid::MIN_SAMPLES {
        return Err(Error::OutOfRange("annulus contains too few grid rows".into()));
    }
    let domain = ChartDomain::new(
        ChartKind::Annulus,
        (d.conformal_u(first).exp(), d.conformal_u(last).exp()),
        d.v_range,
        last - first + 1,
        d.nv,
    )?;
    grid.rows(first, last, domain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_round_trip_and_validation() {
        let s = SurfaceSpec::new(SurfaceKind::CliffordTorusR4, 32, 32);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("clifford-torus-r4"));
        let back: SurfaceSpec = serde_json::from_str(r#"{"kind":"clifford-torus-R4","resolution":[32,32]}"#).unwrap();
        assert_eq!(back, s);
        assert!(realize(&SurfaceSpec::new(SurfaceKind::Sphere, 8, 8)).is_err());
        assert!(realize(&SurfaceSpec::new(SurfaceKind::Sphere, 32, 32).with("bogus", 1.0)).is_err());
        assert!(realize(&SurfaceSpec::new(SurfaceKind::Sphere, 32, 32).with("radius", -1.0)).is_err());
        assert!(serde_json::from_str::<SurfaceSpec>(r#"{"kind":"enneper","resolution":[32,32]}"#).is_err());
    }

    #[test]
    fn analytic_charts_are_conformal() {
        for kind in [
            SurfaceKind::Sphere,
            SurfaceKind::Catenoid,
            SurfaceKind::InvertedCatenoid,
            SurfaceKind::CliffordTorusR4,
            SurfaceKind::CliffordTorusR3,
            SurfaceKind::HopfTorus,
        ] {
            let g = realize(&SurfaceSpec::new(kind, 32, 32)).unwrap();
            assert!(conformal_defect(&g) < 1e-10, "{kind:?}: {}", conformal_defect(&g));
        }
        let bump = realize(&SurfaceSpec::new(SurfaceKind::GraphBump, 32, 32)).unwrap();
        assert!(conformal_defect(&bump) > 0.1);
    }

    #[test]
    fn identity_map_is_identity() {
        let g = realize(&SurfaceSpec::new(SurfaceKind::Catenoid, 32, 32)).unwrap();
        assert_eq!(apply_mobius(&MobiusMap::identity(), &g).unwrap(), g);
    }

    #[test]
    fn inversion_on_the_surface_is_rejected() {
        let g = realize(&SurfaceSpec::new(SurfaceKind::Sphere, 32, 32)).unwrap();
        let p = g.point(10, 3).to_vec();
        let map = MobiusMap::new(vec![MobiusStep::Inversion { center: p, radius: 1.0 }]);
        assert!(matches!(apply_mobius(&map, &g), Err(Error::NonGenericInversion { .. })));
    }

    #[test]
    fn annulus_extraction_snaps_to_rows() {
        let g = realize(&SurfaceSpec::new(SurfaceKind::Catenoid, 65, 32)).unwrap();
        let a = extract_annulus(&g, (-1.0f64).exp(), 1.0f64.exp()).unwrap();
        assert_eq!(a.domain.kind, ChartKind::Annulus);
        assert_eq!(a.domain.nu, 33);
        assert_eq!(a.point(0, 0), g.point(16, 0));
        assert!((a.domain.hu() - g.domain.hu()).abs() < 1e-12);
        assert!(extract_annulus(&g, 0.01, 1.0).is_err());
    }

    #[test]
    fn stereographic_clifford_misses_the_pole() {
        let g = realize(&SurfaceSpec::new(SurfaceKind::CliffordTorusR3, 32, 32)).unwrap();
        assert!(g.points.iter().all(|x| x.abs() < 10.0));
    }
}
