//! Residues of the Willmore conservation laws on annular charts, the
//! potentials `L`, `S`, `R` and the pointwise identities they satisfy.
//!
//! Everything is computed in the conformal coordinates `(t, θ) = (log ρ, θ)`
//! of the chart, with `∇⊥ = (-∂θ, ∂t)`, `∇ log ρ = (1, 0)`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elastica::{qi, ElasticaSolution, Quat};
use crate::error::{Error, Result};
use crate::fd::fornberg;
use crate::grid::{ChartDomain, ImmersionGrid};
use crate::immersion::{
    derivative, from_coeffs, interior, to_coeffs, vector, willmore_current, CurrentField, Dir, FrameField,
};
use crate::multivec::{blade_label, blades, MultiVector};

/// `(-1)^{m-1} 2`.
pub fn twist_sign(m: usize) -> f64 {
    if (m - 1).is_multiple_of(2) {
        2.0
    } else {
        -2.0
    }
}

fn parity(m: usize) -> f64 {
    if m.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Local data at one sample, in `(t, θ)` coordinates.
#[derive(Clone, Debug)]
pub struct PointData {
    pub phi: MultiVector,
    pub phi_t: MultiVector,
    pub phi_th: MultiVector,
    pub normal: MultiVector,
    pub h: MultiVector,
    pub l: MultiVector,
    /// `C0 = c0 + ⟨c, Φ⟩`.
    pub c0: f64,
    /// `C1 = c1 + c ∧ Φ`.
    pub c1: MultiVector,
}

/// Gradients of `S` and `R` at one point.
#[derive(Clone, Debug)]
pub struct PotentialGradient {
    pub s_t: f64,
    pub s_th: f64,
    pub r_t: MultiVector,
    pub r_th: MultiVector,
}

impl PointData {
    /// `⋆(n ⌐ H)`.
    fn twist(&self) -> MultiVector {
        self.normal.contract(&self.h).expect("grade m-2 >= 1").hodge()
    }

    pub fn gradient(&self) -> PotentialGradient {
        let m = self.phi.dim();
        let tw = self.twist();
        let s2 = twist_sign(m);
        let r = |d: &MultiVector| -> MultiVector {
            self.l.wedge(d).expect("grade 2") + tw.contract(d).expect("grade 1") * s2
        };
        PotentialGradient {
            s_t: self.l.inner(&self.phi_t).expect("vectors"),
            s_th: self.l.inner(&self.phi_th).expect("vectors") + self.c0,
            r_t: r(&self.phi_t),
            r_th: r(&self.phi_th) + self.c1,
        }
    }
}

/// Residual vectors of the three identities at one point, given the
/// potential gradients (exact or measured).
#[derive(Clone, Debug)]
pub struct IdentityResidual {
    /// `4 e^{2λ} H` minus its expression through `∇R`, `∇S`, `C0`, `C1`.
    pub heq: f64,
    /// Both components of the first-order system for `∇R`.
    pub main1: f64,
    /// Both components of the system for `∇S`.
    pub main11: f64,
}

pub fn identity_residual(p: &PointData, g: &PotentialGradient) -> IdentityResidual {
    let m = p.phi.dim();
    let sg = parity(m);
    let e2l = p.phi_t.norm_sq();
    let star_n = p.normal.hodge();
    let neg_th = -p.phi_th;

    let lhs = p.h * (4.0 * e2l);
    let rhs = -(g.r_t.contract(&neg_th).expect("grade 1") + g.r_th.contract(&p.phi_t).expect("grade 1"))
        + p.phi_t * (-g.s_th)
        + p.phi_th * g.s_t
        + p.phi_t * p.c0
        + p.c1.contract(&p.phi_t).expect("grade 1");
    let heq = (lhs - rhs).norm();

    let nb = |x: &MultiVector| p.normal.bullet(x).expect("grade m-2").hodge();
    let rt = nb(&(-g.r_th)) * sg + star_n * (-g.s_th) + star_n * p.c0 + nb(&p.c1) * sg;
    let rth = nb(&g.r_t) * sg + star_n * g.s_t + p.c1;
    let main1 = (g.r_t - rt).norm().max((g.r_th - rth).norm());

    let inner = |a: &MultiVector| a.inner(&star_n).expect("2-vectors");
    let st = inner(&g.r_th) - inner(&p.c1);
    let sth = -inner(&g.r_t) + p.c0;
    let main11 = (g.s_t - st).abs().max((g.s_th - sth).abs());

    IdentityResidual { heq, main1, main11 }
}

/// `c`, `c0` and `c1` on the coordinate circle of radius `radius`, each with
/// the `1/2π` normalization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueSet {
    pub m: usize,
    pub c: Vec<f64>,
    pub c0: f64,
    /// Coefficients of `c1` on `e_i ∧ e_j`, keyed `"ij"` (1-based).
    pub c1: BTreeMap<String, f64>,
    pub radius: f64,
    /// Gap between the trapezoid rule on all samples and on every other one.
    pub quad_error: f64,
}

impl ResidueSet {
    fn from_packed(m: usize, radius: f64, full: &[f64], half: &[f64]) -> Self {
        let c1 = blades(m, 2)
            .iter()
            .zip(&full[m + 1..])
            .map(|(&b, &x)| (blade_label(b), x))
            .collect();
        let quad_error = full.iter().zip(half).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Self {
            m,
            c: full[..m].to_vec(),
            c0: full[m],
            c1,
            radius,
            quad_error,
        }
    }

    pub fn c1_multivector(&self) -> MultiVector {
        let mut out = MultiVector::zero(self.m, 2).expect("dimension validated by the grid");
        for &b in blades(self.m, 2) {
            out.set_coeff(b, self.c1.get(&blade_label(b)).copied().unwrap_or(0.0));
        }
        out
    }

    pub fn c_norm(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn c1_norm(&self) -> f64 {
        self.c1_multivector().norm()
    }
}

fn packed_width(m: usize) -> usize {
    m + 1 + blades(m, 2).len()
}

/// Interpolation weights for the row at conformal coordinate `u`.
fn row_weights(domain: &ChartDomain, u: f64) -> Result<Vec<(usize, f64)>> {
    let n = domain.nu;
    let (u0, u1) = domain.conformal_u_range();
    let tol = 1e-9 * domain.hu();
    let mut x = domain.row_position(u);
    if domain.periodic_u() {
        x = x.rem_euclid(n as f64);
    } else if u < u0 - tol || u > u1 + tol {
        return Err(Error::OutOfRange(format!(
            "contour at u = {u} outside the chart [{u0}, {u1}]"
        )));
    }
    let near = x.round();
    if (x - near).abs() < 1e-9 {
        return Ok(vec![((near as usize).min(n - 1) % n, 1.0)]);
    }
    let base = if domain.periodic_u() {
        x.floor() as isize - 1
    } else {
        (x.floor() as isize - 1).clamp(0, n as isize - 4)
    };
    let nodes: Vec<f64> = (0..4).map(|k| (base + k) as f64).collect();
    let w = fornberg(x, &nodes, 0);
    Ok((0..4)
        .map(|k| ((base + k as isize).rem_euclid(n as isize) as usize, w[0][k]))
        .collect())
}

/// Per-row contour integrals of the residue densities, from which residues
/// at any radius inside the chart are interpolated.
#[derive(Clone, Debug)]
pub struct ContourIntegrals {
    pub m: usize,
    domain: ChartDomain,
    full: Vec<Vec<f64>>,
    half: Vec<Vec<f64>>,
}

impl ContourIntegrals {
    pub fn new(grid: &ImmersionGrid, frames: &FrameField) -> Result<Self> {
        Self::with_current(grid, frames, &willmore_current(grid, frames))
    }

    pub fn with_current(grid: &ImmersionGrid, frames: &FrameField, current: &CurrentField) -> Result<Self> {
        let d = &grid.domain;
        if !d.periodic_v() {
            return Err(Error::Topology("a chart with periodic v for contour integrals".into()));
        }
        let m = grid.m;
        let w = packed_width(m);
        let s2 = twist_sign(m);
        let density = |k: usize| -> Vec<f64> {
            let tt = current.tu(k);
            let phi = &grid.points[k * m..(k + 1) * m];
            let mut out = Vec::with_capacity(w);
            out.extend_from_slice(tt);
            out.push(-tt.iter().zip(phi).map(|(a, b)| a * b).sum::<f64>());
            let twist = frames
                .normal_mv(k)
                .contract(&vector(frames.h(k)))
                .expect("grade 1")
                .hodge();
            let f = -vector(tt).wedge(&vector(phi)).expect("grade 2")
                - twist.contract(&vector(frames.phi_v(k))).expect("grade 1") * s2;
            out.extend(to_coeffs(&f));
            out
        };
        let hv = d.hv();
        let (full, half): (Vec<Vec<f64>>, Vec<Vec<f64>>) = (0..d.nu)
            .into_par_iter()
            .map(|i| {
                let mut a = vec![0.0; w];
                let mut b = vec![0.0; w];
                for j in 0..d.nv {
                    let f = density(i * d.nv + j);
                    for c in 0..w {
                        a[c] += f[c] * hv / TAU;
                        if j % 2 == 0 {
                            b[c] += f[c] * 2.0 * hv / TAU;
                        }
                    }
                }
                (a, b)
            })
            .unzip();
        Ok(Self {
            m,
            domain: d.clone(),
            full,
            half,
        })
    }

    /// Residues on the circle `{log ρ = u}`.
    pub fn at_u(&self, u: f64) -> Result<ResidueSet> {
        let w = packed_width(self.m);
        let mut a = vec![0.0; w];
        let mut b = vec![0.0; w];
        for (i, x) in row_weights(&self.domain, u)? {
            for c in 0..w {
                a[c] += x * self.full[i][c];
                b[c] += x * self.half[i][c];
            }
        }
        Ok(ResidueSet::from_packed(self.m, u.exp(), &a, &b))
    }

    pub fn at_radius(&self, rho: f64) -> Result<ResidueSet> {
        self.at_u(self.domain.radius_to_u(rho)?)
    }

    pub fn at_row(&self, i: usize) -> ResidueSet {
        ResidueSet::from_packed(self.m, self.domain.conformal_u(i).exp(), &self.full[i], &self.half[i])
    }
}

/// Radius at the middle of the chart in the conformal coordinate.
pub fn mid_radius(domain: &ChartDomain) -> f64 {
    let (a, b) = domain.conformal_u_range();
    (0.5 * (a + b)).exp()
}

pub fn residues(grid: &ImmersionGrid, frames: &FrameField, rho: f64) -> Result<ResidueSet> {
    ContourIntegrals::new(grid, frames)?.at_radius(rho)
}

/// `c = (1/2π) ∮ (∂νH - 3π_n(∂νH) - ⋆(∂τn ∧ H)) dσ`.
pub fn residue_c(grid: &ImmersionGrid, frames: &FrameField, rho: f64) -> Result<Vec<f64>> {
    residues(grid, frames, rho).map(|r| r.c)
}

pub fn residue_c0(grid: &ImmersionGrid, frames: &FrameField, rho: f64) -> Result<f64> {
    residues(grid, frames, rho).map(|r| r.c0)
}

pub fn residue_c1(grid: &ImmersionGrid, frames: &FrameField, rho: f64) -> Result<MultiVector> {
    residues(grid, frames, rho).map(|r| r.c1_multivector())
}

pub const MIN_SWEEP_RADII: usize = 3;

/// Max pairwise distance between the values at different radii.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub c: f64,
    pub c0: f64,
    pub c1: f64,
}

impl Deviation {
    pub fn max(&self) -> f64 {
        self.c.max(self.c0).max(self.c1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueSweep {
    pub sets: Vec<ResidueSet>,
    /// Requested radii outside the chart.
    pub skipped: Vec<f64>,
    pub deviation: Deviation,
}

pub fn residue_sweep(grid: &ImmersionGrid, frames: &FrameField, radii: &[f64]) -> Result<ResidueSweep> {
    let ci = ContourIntegrals::new(grid, frames)?;
    let mut sets = Vec::new();
    let mut skipped = Vec::new();
    for &r in radii {
        match ci.at_radius(r) {
            Ok(s) => sets.push(s),
            Err(Error::OutOfRange(_)) => skipped.push(r),
            Err(e) => return Err(e),
        }
    }
    if sets.len() < MIN_SWEEP_RADII {
        return Err(Error::OutOfRange(format!(
            "{} of the radii lie inside the chart, need at least {MIN_SWEEP_RADII}",
            sets.len()
        )));
    }
    let mut dev = Deviation {
        c: 0.0,
        c0: 0.0,
        c1: 0.0,
    };
    for (a, x) in sets.iter().enumerate() {
        for y in &sets[a + 1..] {
            let dc = x.c.iter().zip(&y.c).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
            dev.c = dev.c.max(dc);
            dev.c0 = dev.c0.max((x.c0 - y.c0).abs());
            dev.c1 = dev.c1.max((x.c1_multivector() - y.c1_multivector()).norm());
        }
    }
    Ok(ResidueSweep {
        sets,
        skipped,
        deviation: dev,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurlDefects {
    pub l: f64,
    pub s: f64,
    pub r: f64,
}

/// Potentials on an annular chart, normalized to mean zero on the innermost
/// circle.
#[derive(Clone, Debug)]
pub struct PotentialFields {
    pub m: usize,
    pub nu: usize,
    pub nv: usize,
    pub l: Vec<f64>,
    pub s: Vec<f64>,
    /// Coefficients on the 2-blades in [`blades`] order.
    pub r: Vec<f64>,
    /// `max |radial-first - angular-first|` of each integrated field,
    /// including the closure mismatch around each circle.
    pub curl_defect: CurlDefects,
    /// Thresholds above which [`solve_potentials`] reports a failure.
    pub limit: CurlDefects,
    pub residues: ResidueSet,
}

impl PotentialFields {
    pub fn l(&self, k: usize) -> &[f64] {
        &self.l[k * self.m..(k + 1) * self.m]
    }

    pub fn r_mv(&self, k: usize) -> MultiVector {
        let w = blades(self.m, 2).len();
        from_coeffs(self.m, 2, &self.r[k * w..(k + 1) * w])
    }
}

struct PathIntegral {
    values: Vec<f64>,
    defect: f64,
    gradient_max: f64,
}

/// Integrates `(∂t F, ∂θ F) = (gt, gth)` along rays then circles, and
/// compares with circles then rays.
fn integrate_gradient(domain: &ChartDomain, k: usize, gt: &[f64], gth: &[f64]) -> PathIntegral {
    let (nu, nv) = (domain.nu, domain.nv);
    let (ua, va) = (domain.u_axis(), domain.v_axis());
    let at = |f: &[f64], i: usize, j: usize, c: usize| f[(i * nv + j) * k + c];
    // circles: (nu, nv + 1, k)
    let circles: Vec<Vec<f64>> = (0..nu)
        .into_par_iter()
        .map(|i| {
            let mut out = vec![0.0; (nv + 1) * k];
            for c in 0..k {
                let row: Vec<f64> = (0..nv).map(|j| at(gth, i, j, c)).collect();
                for (j, x) in va.cumulative(&row).into_iter().enumerate() {
                    out[j * k + c] = x;
                }
            }
            out
        })
        .collect();
    // rays: (nv, nu, k)
    let rays: Vec<Vec<f64>> = (0..nv)
        .into_par_iter()
        .map(|j| {
            let mut out = vec![0.0; nu * k];
            for c in 0..k {
                let col: Vec<f64> = (0..nu).map(|i| at(gt, i, j, c)).collect();
                for (i, x) in ua.cumulative(&col).into_iter().enumerate() {
                    out[i * k + c] = x;
                }
            }
            out
        })
        .collect();
    let mut values = vec![0.0; nu * nv * k];
    let mut defect: f64 = 0.0;
    for i in 0..nu {
        for j in 0..=nv {
            let mut d2 = 0.0;
            for c in 0..k {
                let radial = rays[0][i * k + c] + circles[i][j * k + c];
                let angular = circles[0][j * k + c] + rays[j % nv][i * k + c];
                d2 += (radial - angular).powi(2);
                if j < nv {
                    values[(i * nv + j) * k + c] = radial;
                }
            }
            defect = defect.max(d2.sqrt());
        }
    }
    let closure: f64 = (0..k).map(|c| circles[0][nv * k + c].powi(2)).sum::<f64>().sqrt();
    defect = defect.max(closure);
    for c in 0..k {
        let mean = (0..nv).map(|j| values[j * k + c]).sum::<f64>() / nv as f64;
        for p in 0..nu * nv {
            values[p * k + c] -= mean;
        }
    }
    let gradient_max = gt
        .chunks(k)
        .chain(gth.chunks(k))
        .map(|g| g.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    PathIntegral {
        values,
        defect,
        gradient_max,
    }
}

fn annular(grid: &ImmersionGrid) -> Result<()> {
    if grid.domain.periodic_u() || !grid.domain.periodic_v() {
        return Err(Error::Topology("an annular chart (bounded u, periodic v)".into()));
    }
    Ok(())
}

fn point_data(grid: &ImmersionGrid, frames: &FrameField, residues: &ResidueSet, l: &[f64], k: usize) -> PointData {
    let m = grid.m;
    let phi = vector(&grid.points[k * m..(k + 1) * m]);
    let c = vector(&residues.c);
    PointData {
        c0: residues.c0 + c.inner(&phi).expect("vectors"),
        c1: residues.c1_multivector() + c.wedge(&phi).expect("grade 2"),
        phi,
        phi_t: vector(frames.phi_u(k)),
        phi_th: vector(frames.phi_v(k)),
        normal: frames.normal_mv(k),
        h: vector(frames.h(k)),
        l: vector(&l[k * m..(k + 1) * m]),
    }
}

/// Integrates `L`, `S` and `R` without enforcing the curl-defect guard.
pub fn integrate_potentials(
    grid: &ImmersionGrid,
    frames: &FrameField,
    residues: &ResidueSet,
) -> Result<PotentialFields> {
    annular(grid)?;
    let d = &grid.domain;
    let m = grid.m;
    let n = grid.len();
    let current = willmore_current(grid, frames);
    let gt_l = current.tv.clone();
    let gth_l: Vec<f64> = current
        .tu
        .chunks(m)
        .flat_map(|t| t.iter().zip(&residues.c).map(|(x, c)| c - x).collect::<Vec<_>>())
        .collect();
    let lp = integrate_gradient(d, m, &gt_l, &gth_l);

    let nr = blades(m, 2).len();
    let grads: Vec<PotentialGradient> = (0..n)
        .into_par_iter()
        .map(|k| point_data(grid, frames, residues, &lp.values, k).gradient())
        .collect();
    let mut gt_s = Vec::with_capacity(n);
    let mut gth_s = Vec::with_capacity(n);
    let mut gt_r = Vec::with_capacity(n * nr);
    let mut gth_r = Vec::with_capacity(n * nr);
    for g in &grads {
        gt_s.push(g.s_t);
        gth_s.push(g.s_th);
        gt_r.extend(to_coeffs(&g.r_t));
        gth_r.extend(to_coeffs(&g.r_th));
    }
    let sp = integrate_gradient(d, 1, &gt_s, &gth_s);
    let rp = integrate_gradient(d, nr, &gt_r, &gth_r);

    let h = d.hu().max(d.hv());
    let (u0, u1) = d.conformal_u_range();
    let extent = (u1 - u0) + (d.v_range.1 - d.v_range.0);
    let limit = |p: &PathIntegral, reference: f64| 100.0 * h * h * (p.gradient_max * extent + reference);
    Ok(PotentialFields {
        m,
        nu: d.nu,
        nv: d.nv,
        curl_defect: CurlDefects {
            l: lp.defect,
            s: sp.defect,
            r: rp.defect,
        },
        limit: CurlDefects {
            l: limit(&lp, 1.0 / grid.diameter()),
            s: limit(&sp, 1.0),
            r: limit(&rp, 1.0),
        },
        l: lp.values,
        s: sp.values,
        r: rp.values,
        residues: residues.clone(),
    })
}

/// Potentials with `∇⊥L = T - c ∇log ρ` and the systems for `S`, `R`; fails
/// when a field is path dependent beyond its discretization budget.
pub fn solve_potentials(grid: &ImmersionGrid, frames: &FrameField, residues: &ResidueSet) -> Result<PotentialFields> {
    let p = integrate_potentials(grid, frames, residues)?;
    let checks = [
        ("L", p.curl_defect.l, p.limit.l),
        ("S", p.curl_defect.s, p.limit.s),
        ("R", p.curl_defect.r, p.limit.r),
    ];
    for (field, defect, limit) in checks {
        if !(defect <= limit) {
            return Err(Error::CurlDefect { field, defect, limit });
        }
    }
    Ok(p)
}

/// Fraction of rows dropped at each end of the chart by [`verify_identities`].
pub const IDENTITY_MARGIN: f64 = 0.125;

/// Max residuals over the interior of the chart.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub heq: f64,
    pub main1: f64,
    pub main11: f64,
}

/// Checks the expression of `4 e^{2λ} H` through `∇R`, `∇S` and the
/// first-order systems satisfied by `R` and `S`, with `∇R`, `∇S` measured by
/// differencing the integrated potentials.
pub fn verify_identities(
    grid: &ImmersionGrid,
    frames: &FrameField,
    potentials: &PotentialFields,
    residues: &ResidueSet,
) -> Result<IdentityReport> {
    annular(grid)?;
    let d = &grid.domain;
    let nr = blades(grid.m, 2).len();
    let rt = derivative(d, &potentials.r, nr, Dir::U, 1);
    let rth = derivative(d, &potentials.r, nr, Dir::V, 1);
    let st = derivative(d, &potentials.s, 1, Dir::U, 1);
    let sth = derivative(d, &potentials.s, 1, Dir::V, 1);
    let (ri, rj) = interior(d, IDENTITY_MARGIN);
    let cells: Vec<usize> = ri.flat_map(|i| rj.clone().map(move |j| i * d.nv + j)).collect();
    let per: Vec<IdentityResidual> = cells
        .par_iter()
        .map(|&k| {
            let p = point_data(grid, frames, residues, &potentials.l, k);
            let g = PotentialGradient {
                s_t: st[k],
                s_th: sth[k],
                r_t: from_coeffs(grid.m, 2, &rt[k * nr..(k + 1) * nr]),
                r_th: from_coeffs(grid.m, 2, &rth[k * nr..(k + 1) * nr]),
            };
            identity_residual(&p, &g)
        })
        .collect();
    let mut out = IdentityReport {
        heq: 0.0,
        main1: 0.0,
        main11: 0.0,
    };
    for r in per {
        out.heq = out.heq.max(r.heq);
        out.main1 = out.main1.max(r.main1);
        out.main11 = out.main11.max(r.main11);
    }
    Ok(out)
}

fn quat(q: Quat) -> MultiVector {
    vector(&q)
}

/// `ι(a ∧ b) = i a ∧ i b`, extended linearly.
fn left_i(x: &MultiVector) -> MultiVector {
    let mut out = MultiVector::zero(4, 2).expect("m = 4");
    for (mask, coef) in x.terms() {
        let idx: Vec<usize> = (0..4).filter(|b| mask & (1 << b) != 0).collect();
        let e = |a: usize| {
            let mut q = [0.0; 4];
            q[a] = 1.0;
            quat(qi(q))
        };
        out += e(idx[0]).wedge(&e(idx[1])).expect("grade 2") * coef;
    }
    out
}

/// Closed-form `c1` of the Hopf torus `Φ(s, θ) = e^{iθ} γ̃(s)` on the circle
/// `{s}`.
#[derive(Clone, Debug)]
pub struct HopfResidue {
    /// `-∂sH ∧ Φ`, `3π_n(∂sH) ∧ Φ`, `⋆(∂θn ∧ H) ∧ Φ`, `2(⋆(n ⌐ H)) ⌐ ∂θΦ`
    /// at `θ = 0`.
    pub terms: [MultiVector; 4],
    /// `c1 = ½ (F + ιF)` with `F` the sum of the terms: the fiber rotation
    /// `e^{iθ}` averages the integrand over the circle.
    pub c1: MultiVector,
    /// `⟨c1, i∂sΦ ∧ Φ⟩` at `θ = 0`.
    pub normal_phi: f64,
}

pub fn analytic_c1_hopf(sol: &ElasticaSolution, s: f64) -> Result<HopfResidue> {
    let i = sol.index_of(s)?;
    let q = sol.lift[i];
    let w = sol.lift_velocity(i);
    let (k, dk) = (sol.k[i], sol.dk[i]);
    let (phi, ds_phi, dth_phi) = (quat(q), quat(w), quat(qi(q)));
    let iw = quat(qi(w));
    // H = k i∂sΦ - Φ, and (i∂sΦ)' = -iΦ - 2k ∂sΦ
    let h = iw * k - phi;
    let dh = iw * dk - dth_phi * k - ds_phi * (1.0 + 2.0 * k * k);
    let normal = ds_phi.wedge(&dth_phi).expect("grade 2").hodge();
    let dth_normal = (iw.wedge(&dth_phi).expect("grade 2") - ds_phi.wedge(&phi).expect("grade 2")).hodge();
    let proj = {
        let a = dh.inner(&ds_phi).expect("vectors");
        let b = dh.inner(&dth_phi).expect("vectors");
        dh - ds_phi * a - dth_phi * b
    };
    let wedge = |a: &MultiVector, b: &MultiVector| a.wedge(b).expect("grade fits");
    let terms = [
        -wedge(&dh, &phi),
        wedge(&proj, &phi) * 3.0,
        wedge(&wedge(&dth_normal, &h).hodge(), &phi) * crate::immersion::CURRENT_SIGN,
        normal
            .contract(&h)
            .expect("grade 1")
            .hodge()
            .contract(&dth_phi)
            .expect("grade 1")
            * (-twist_sign(4)),
    ];
    let f = terms
        .iter()
        .cloned()
        .fold(MultiVector::zero(4, 2).expect("m = 4"), |a, b| a + b);
    let c1 = (f + left_i(&f)) * 0.5;
    let normal_phi = c1.inner(&wedge(&iw, &phi)).expect("2-vectors");
    Ok(HopfResidue { terms, c1, normal_phi })
}

/// `i ∂sΦ` at `(s_i, θ = 0)`: the unit normal of the torus inside `S³`.
pub fn hopf_normal(sol: &ElasticaSolution, i: usize) -> Quat {
    qi(sol.lift_velocity(i))
}
