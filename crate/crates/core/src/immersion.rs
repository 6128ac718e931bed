//! Frames, curvature, energies and the Willmore current of a sampled
//! immersion.
//!
//! All derivatives are taken with respect to the sampling coordinates of the
//! chart (`(log ρ, θ)` on annuli), which are conformal for conformal charts.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fd::Axis;
use crate::grid::{dist, ChartDomain, EdgeKind, ImmersionGrid};
use crate::multivec::{blades, MultiVector, SimpleUnitNormal};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dir {
    U,
    V,
}

/// Derivative of order 1 or 2 of a field with `k` components per sample.
pub fn derivative(domain: &ChartDomain, data: &[f64], k: usize, dir: Dir, order: usize) -> Vec<f64> {
    let (nu, nv) = (domain.nu, domain.nv);
    assert_eq!(data.len(), nu * nv * k);
    let axis: Axis = match dir {
        Dir::U => domain.u_axis(),
        Dir::V => domain.v_axis(),
    };
    let mut out = vec![0.0; data.len()];
    out.par_chunks_mut(nv * k).enumerate().for_each(|(i, row)| {
        for j in 0..nv {
            let dst = &mut row[j * k..(j + 1) * k];
            match dir {
                Dir::U => axis.stencil(i, order, |ii, w| {
                    let src = &data[(ii * nv + j) * k..(ii * nv + j + 1) * k];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += w * s;
                    }
                }),
                Dir::V => axis.stencil(j, order, |jj, w| {
                    let src = &data[(i * nv + jj) * k..(i * nv + jj + 1) * k];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += w * s;
                    }
                }),
            }
        }
    });
    out
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn vector(c: &[f64]) -> MultiVector {
    MultiVector::vector(c).expect("dimension validated by the grid")
}

/// A grade-`grade` multivector from coefficients listed in `blades` order.
pub(crate) fn from_coeffs(m: usize, grade: usize, c: &[f64]) -> MultiVector {
    let mut out = MultiVector::zero(m, grade).expect("dimension validated by the grid");
    for (&mask, &x) in blades(m, grade).iter().zip(c) {
        out.set_coeff(mask, x);
    }
    out
}

pub(crate) fn to_coeffs(a: &MultiVector) -> Vec<f64> {
    blades(a.dim(), a.grade()).iter().map(|&b| a.coeff(b)).collect()
}

/// Geometry derived at every sample.
#[derive(Clone, Debug)]
pub struct FrameField {
    pub m: usize,
    pub nu: usize,
    pub nv: usize,
    pub du: Vec<f64>,
    pub dv: Vec<f64>,
    pub duu: Vec<f64>,
    pub duv: Vec<f64>,
    pub dvv: Vec<f64>,
    /// `(E, F, G)` per sample.
    pub metric: Vec<[f64; 3]>,
    /// Per-point `λ` with `e^{2λ} = |∂uΦ ∧ ∂vΦ|`.
    pub lambda: Vec<f64>,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    /// Coefficients of `n = ⋆(e1 ∧ e2)` on the grade `m-2` blades.
    pub normal: Vec<f64>,
    /// Normal parts of `∂uuΦ, ∂uvΦ, ∂vvΦ` (`3m` values per sample).
    pub second_form: Vec<f64>,
    pub mean_curvature: Vec<f64>,
}

impl FrameField {
    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn normal_width(&self) -> usize {
        blades(self.m, self.m - 2).len()
    }

    pub fn e1(&self, k: usize) -> &[f64] {
        &self.e1[k * self.m..(k + 1) * self.m]
    }

    pub fn e2(&self, k: usize) -> &[f64] {
        &self.e2[k * self.m..(k + 1) * self.m]
    }

    pub fn h(&self, k: usize) -> &[f64] {
        &self.mean_curvature[k * self.m..(k + 1) * self.m]
    }

    pub fn phi_u(&self, k: usize) -> &[f64] {
        &self.du[k * self.m..(k + 1) * self.m]
    }

    pub fn phi_v(&self, k: usize) -> &[f64] {
        &self.dv[k * self.m..(k + 1) * self.m]
    }

    pub fn normal_mv(&self, k: usize) -> MultiVector {
        let w = self.normal_width();
        from_coeffs(self.m, self.m - 2, &self.normal[k * w..(k + 1) * w])
    }

    pub fn normal(&self, k: usize) -> SimpleUnitNormal {
        SimpleUnitNormal::from_orthonormal_unchecked(self.normal_mv(k))
    }

    /// `sup_θ λ` over row `i`.
    pub fn circle_sup_lambda(&self, i: usize) -> f64 {
        self.lambda[i * self.nv..(i + 1) * self.nv]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Normal projection `w - ⟨w,e1⟩e1 - ⟨w,e2⟩e2`.
    pub fn project_normal(&self, k: usize, w: &[f64]) -> Vec<f64> {
        let (a, b) = (self.e1(k), self.e2(k));
        let (pa, pb) = (dot(w, a), dot(w, b));
        w.iter()
            .zip(a.iter().zip(b))
            .map(|(x, (y, z))| x - pa * y - pb * z)
            .collect()
    }
}

/// Builds tangent frames, `λ`, `n`, `II` and `H` with 4th-order differences.
pub fn build_frames(grid: &ImmersionGrid) -> Result<FrameField> {
    let d = &grid.domain;
    let m = grid.m;
    let p = &grid.points;
    let du = derivative(d, p, m, Dir::U, 1);
    let dv = derivative(d, p, m, Dir::V, 1);
    let duu = derivative(d, p, m, Dir::U, 2);
    let dvv = derivative(d, p, m, Dir::V, 2);
    let duv = derivative(d, &du, m, Dir::V, 1);
    let n = grid.len();
    let nw = blades(m, m - 2).len();

    struct Local {
        metric: [f64; 3],
        lambda: f64,
        e1: Vec<f64>,
        e2: Vec<f64>,
        normal: Vec<f64>,
        ii: Vec<f64>,
        h: Vec<f64>,
    }

    let locals: Vec<Result<Local>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let s = k * m..(k + 1) * m;
            let (pu, pv) = (&du[s.clone()], &dv[s.clone()]);
            let (e, f, g) = (dot(pu, pu), dot(pu, pv), dot(pv, pv));
            let det = e * g - f * f;
            if !(det > 1e-28 * (e * g).max(f64::MIN_POSITIVE)) || !det.is_finite() {
                return Err(Error::Degenerate {
                    i: k / d.nv,
                    j: k % d.nv,
                });
            }
            let lu = e.sqrt();
            let e1: Vec<f64> = pu.iter().map(|x| x / lu).collect();
            let proj = dot(pv, &e1);
            let mut e2: Vec<f64> = pv.iter().zip(&e1).map(|(x, y)| x - proj * y).collect();
            let l2 = dot(&e2, &e2).sqrt();
            e2.iter_mut().for_each(|x| *x /= l2);
            let nmv = vector(&e1).wedge(&vector(&e2)).expect("grade 2 <= m").hodge();
            let normal = to_coeffs(&nmv);
            let mut ii = Vec::with_capacity(3 * m);
            for second in [&duu[s.clone()], &duv[s.clone()], &dvv[s.clone()]] {
                let (a, b) = (dot(second, &e1), dot(second, &e2));
                ii.extend(
                    second
                        .iter()
                        .zip(e1.iter().zip(&e2))
                        .map(|(x, (y, z))| x - a * y - b * z),
                );
            }
            let h: Vec<f64> = (0..m)
                .map(|c| 0.5 * (g * ii[c] - 2.0 * f * ii[m + c] + e * ii[2 * m + c]) / det)
                .collect();
            Ok(Local {
                metric: [e, f, g],
                lambda: 0.25 * det.ln(),
                e1,
                e2,
                normal,
                ii,
                h,
            })
        })
        .collect();

    let mut out = FrameField {
        m,
        nu: d.nu,
        nv: d.nv,
        du,
        dv,
        duu,
        duv,
        dvv,
        metric: Vec::with_capacity(n),
        lambda: Vec::with_capacity(n),
        e1: Vec::with_capacity(n * m),
        e2: Vec::with_capacity(n * m),
        normal: Vec::with_capacity(n * nw),
        second_form: Vec::with_capacity(3 * n * m),
        mean_curvature: Vec::with_capacity(n * m),
    };
    for l in locals {
        let l = l?;
        out.metric.push(l.metric);
        out.lambda.push(l.lambda);
        out.e1.extend(l.e1);
        out.e2.extend(l.e2);
        out.normal.extend(l.normal);
        out.second_form.extend(l.ii);
        out.mean_curvature.extend(l.h);
    }
    Ok(out)
}

/// `max(|⟨∂uΦ,∂vΦ⟩| / |∂uΦ|², ||∂uΦ| - |∂vΦ|| / |∂uΦ|)` over the grid, from
/// exact tangents when the grid carries them.
pub fn conformal_defect(grid: &ImmersionGrid) -> f64 {
    let m = grid.m;
    let (tu, tv) = match &grid.tangents {
        Some(t) => {
            let mut tu = Vec::with_capacity(t.len() / 2);
            let mut tv = Vec::with_capacity(t.len() / 2);
            for c in t.chunks(2 * m) {
                tu.extend_from_slice(&c[..m]);
                tv.extend_from_slice(&c[m..]);
            }
            (tu, tv)
        }
        None => (
            derivative(&grid.domain, &grid.points, m, Dir::U, 1),
            derivative(&grid.domain, &grid.points, m, Dir::V, 1),
        ),
    };
    tu.chunks(m)
        .zip(tv.chunks(m))
        .map(|(a, b)| {
            let (ea, eb) = (dot(a, a), dot(b, b));
            (dot(a, b).abs() / ea).max((ea.sqrt() - eb.sqrt()).abs() / ea.sqrt())
        })
        .fold(0.0, f64::max)
}

/// `∫ f du dv` by tensor-product quadrature. Pole edges are completed with
/// an exponential tail fitted to the last two row integrals.
pub fn integrate(grid: &ImmersionGrid, density: &[f64]) -> f64 {
    let d = &grid.domain;
    let wv = d.v_axis().quadrature_weights();
    let wu = d.u_axis().quadrature_weights();
    let rows: Vec<f64> = density.chunks(d.nv).map(|r| dot(r, &wv)).collect();
    let mut total = dot(&rows, &wu);
    if !d.periodic_u() {
        let h = d.hu();
        let n = d.nu;
        let tails = [(rows[0], rows[1]), (rows[n - 1], rows[n - 2])];
        for (edge, (outer, inner)) in grid.u_edges.iter().zip(tails) {
            if *edge == EdgeKind::Pole && outer > 0.0 && inner > outer {
                let kappa = (inner / outer).ln() / h;
                total += outer / kappa;
            }
        }
    }
    total
}

pub fn area(grid: &ImmersionGrid, frames: &FrameField) -> f64 {
    let dens: Vec<f64> = frames.lambda.iter().map(|l| (2.0 * l).exp()).collect();
    integrate(grid, &dens)
}

/// `W = ∫ |H|² dv_g`.
pub fn willmore_energy(grid: &ImmersionGrid, frames: &FrameField) -> f64 {
    let dens: Vec<f64> = (0..frames.len())
        .map(|k| {
            let h = frames.h(k);
            dot(h, h) * (2.0 * frames.lambda[k]).exp()
        })
        .collect();
    integrate(grid, &dens)
}

/// `E = ∫ |II|²_g dv_g`.
pub fn second_form_energy(grid: &ImmersionGrid, frames: &FrameField) -> f64 {
    let m = frames.m;
    let dens: Vec<f64> = (0..frames.len())
        .map(|k| {
            let [e, f, g] = frames.metric[k];
            let det = e * g - f * f;
            let ginv = [[g / det, -f / det], [-f / det, e / det]];
            let ii = &frames.second_form[3 * m * k..3 * m * (k + 1)];
            let comp = |i: usize, j: usize| &ii[(i + j) * m..(i + j + 1) * m];
            let mut s = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    for a in 0..2 {
                        for b in 0..2 {
                            s += ginv[i][a] * ginv[j][b] * dot(comp(i, j), comp(a, b));
                        }
                    }
                }
            }
            s * det.sqrt()
        })
        .collect();
    integrate(grid, &dens)
}

/// `|E - 4W + 4πχ| / max(E, 1)` on a closed surface.
pub fn gauss_bonnet_residual(grid: &ImmersionGrid, frames: &FrameField, chi: i32) -> Result<f64> {
    if !grid.is_closed() {
        return Err(Error::Topology("a closed surface for the Gauss-Bonnet identity".into()));
    }
    let e = second_form_energy(grid, frames);
    let w = willmore_energy(grid, frames);
    Ok((e - 4.0 * w + 4.0 * std::f64::consts::PI * chi as f64).abs() / e.max(1.0))
}

/// Sign in front of `⋆(∇⊥n ∧ H)` in the Willmore current. Fixed by requiring
/// the current to vanish on round spheres of every radius.
pub const CURRENT_SIGN: f64 = 1.0;

/// Identifier of the frozen orientation choices (Hodge star, `∇⊥`, current
/// and twist signs), stamped into every report.
pub const SIGN_CONVENTION: &str = "wrl-signs-1";

/// `T = ∇H - 3π_n(∇H) + ⋆(∇⊥n ∧ H)` with `∇⊥ = (-∂v, ∂u)`.
#[derive(Clone, Debug)]
pub struct CurrentField {
    pub m: usize,
    pub tu: Vec<f64>,
    pub tv: Vec<f64>,
}

impl CurrentField {
    pub fn tu(&self, k: usize) -> &[f64] {
        &self.tu[k * self.m..(k + 1) * self.m]
    }

    pub fn tv(&self, k: usize) -> &[f64] {
        &self.tv[k * self.m..(k + 1) * self.m]
    }
}

pub fn willmore_current(grid: &ImmersionGrid, frames: &FrameField) -> CurrentField {
    willmore_current_signed(grid, frames, CURRENT_SIGN)
}

pub fn willmore_current_signed(grid: &ImmersionGrid, frames: &FrameField, sign: f64) -> CurrentField {
    let m = grid.m;
    let d = &grid.domain;
    let nw = frames.normal_width();
    let hu = derivative(d, &frames.mean_curvature, m, Dir::U, 1);
    let hv = derivative(d, &frames.mean_curvature, m, Dir::V, 1);
    let nu = derivative(d, &frames.normal, nw, Dir::U, 1);
    let nv = derivative(d, &frames.normal, nw, Dir::V, 1);
    let pairs: Vec<(Vec<f64>, Vec<f64>)> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let s = k * m..(k + 1) * m;
            let h = vector(frames.h(k));
            let star = |dn: &[f64]| -> Vec<f64> {
                let t = from_coeffs(m, m - 2, dn).wedge(&h).expect("grade m-1").hodge();
                (0..m).map(|c| t.coeff(1 << c)).collect()
            };
            let part = |dh: &[f64], dn: &[f64], sg: f64| -> Vec<f64> {
                let pn = frames.project_normal(k, dh);
                let st = star(dn);
                (0..m).map(|c| dh[c] - 3.0 * pn[c] + sg * st[c]).collect()
            };
            let tu = part(&hu[s.clone()], &nv[k * nw..(k + 1) * nw], -sign);
            let tv = part(&hv[s.clone()], &nu[k * nw..(k + 1) * nw], sign);
            (tu, tv)
        })
        .collect();
    let mut out = CurrentField {
        m,
        tu: Vec::with_capacity(grid.len() * m),
        tv: Vec::with_capacity(grid.len() * m),
    };
    for (a, b) in pairs {
        out.tu.extend(a);
        out.tv.extend(b);
    }
    out
}

/// `∂u T_u + ∂v T_v`.
pub fn current_divergence(grid: &ImmersionGrid, current: &CurrentField) -> Vec<f64> {
    let a = derivative(&grid.domain, &current.tu, current.m, Dir::U, 1);
    let b = derivative(&grid.domain, &current.tv, current.m, Dir::V, 1);
    a.iter().zip(&b).map(|(x, y)| x + y).collect()
}

/// Index ranges excluding a `margin` fraction at each non-periodic edge.
pub fn interior(domain: &ChartDomain, margin: f64) -> (std::ops::Range<usize>, std::ops::Range<usize>) {
    let cut = |n: usize, periodic: bool| {
        if periodic {
            0..n
        } else {
            let k = ((n - 1) as f64 * margin).ceil() as usize;
            k..n - k
        }
    };
    (cut(domain.nu, domain.periodic_u()), cut(domain.nv, domain.periodic_v()))
}

/// Max Euclidean norm of a `k`-component field over the interior.
pub fn interior_max(domain: &ChartDomain, field: &[f64], k: usize, margin: f64) -> f64 {
    let (ri, rj) = interior(domain, margin);
    let mut best: f64 = 0.0;
    for i in ri {
        for j in rj.clone() {
            let o = (i * domain.nv + j) * k;
            best = best.max(dot(&field[o..o + k], &field[o..o + k]).sqrt());
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub willmore: f64,
    pub boundary_length: f64,
    /// `sup_{p∈Σ} inf_{q∈∂Σ} |p - q| + sup_{q∈∂Σ} inf_{p∈Σ} |p - q|`.
    pub distance: f64,
    pub holds: bool,
}

/// Checks `4π ≤ ∫|H|² dv_g + 2 H¹(∂Σ) / d(∂Σ, Σ)`.
pub fn monotonicity_check(grid: &ImmersionGrid, frames: &FrameField) -> Result<MonotonicityReport> {
    let d = &grid.domain;
    let m = grid.m;
    let mut boundary: Vec<usize> = Vec::new();
    let mut length = 0.0;
    if !d.periodic_u() {
        let wv = d.v_axis().quadrature_weights();
        for (edge, i) in grid.u_edges.iter().zip([0, d.nu - 1]) {
            if *edge == EdgeKind::Boundary {
                for (j, w) in wv.iter().enumerate() {
                    let k = grid.index(i, j);
                    boundary.push(k);
                    let t = frames.phi_v(k);
                    length += w * dot(t, t).sqrt();
                }
            }
        }
    }
    if !d.periodic_v() {
        let wu = d.u_axis().quadrature_weights();
        for j in [0, d.nv - 1] {
            for (i, w) in wu.iter().enumerate() {
                let k = grid.index(i, j);
                boundary.push(k);
                let t = frames.phi_u(k);
                length += w * dot(t, t).sqrt();
            }
        }
    }
    if boundary.is_empty() {
        return Err(Error::Topology("a surface with nonempty boundary".into()));
    }
    let bpts: Vec<&[f64]> = boundary.iter().map(|&k| &grid.points[k * m..(k + 1) * m]).collect();
    let distance = grid
        .points
        .par_chunks(m)
        .map(|p| bpts.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min))
        .collect::<Vec<f64>>()
        .into_iter()
        .fold(0.0, f64::max);
    let willmore = willmore_energy(grid, frames);
    let lhs = 4.0 * std::f64::consts::PI;
    let rhs = willmore + 2.0 * length / distance;
    Ok(MonotonicityReport {
        lhs,
        rhs,
        willmore,
        boundary_length: length,
        distance,
        holds: lhs <= rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::ChartKind;
    use std::f64::consts::{PI, TAU};

    fn plane(n: usize) -> ImmersionGrid {
        let d = ChartDomain::new(ChartKind::Rectangle, (0.0, 1.0), (0.0, 1.0), n, n).unwrap();
        ImmersionGrid::from_fn(d, 3, |u, v| vec![2.0 * u + 1.0, 2.0 * v, 0.0]).unwrap()
    }

    #[test]
    fn plane_is_flat() {
        let g = plane(32);
        let f = build_frames(&g).unwrap();
        assert!(f.lambda.iter().all(|l| (l - 2f64.ln()).abs() < 1e-12));
        assert!(f.second_form.iter().all(|x| x.abs() < 1e-10));
        assert!(willmore_energy(&g, &f).abs() < 1e-18);
        let t = willmore_current(&g, &f);
        assert!(t.tu.iter().chain(&t.tv).all(|x| x.abs() < 1e-8));
    }

    #[test]
    fn flat_square_monotonicity() {
        let g = plane(33);
        let f = build_frames(&g).unwrap();
        let r = monotonicity_check(&g, &f).unwrap();
        // side 2: length 8, farthest point from the boundary at distance 1
        assert!((r.boundary_length - 8.0).abs() < 1e-10);
        assert!((r.distance - 1.0).abs() < 1e-12);
        assert!((r.rhs - 16.0).abs() < 1e-9);
        assert!(r.holds);
    }

    #[test]
    fn degenerate_grid_is_rejected() {
        let d = ChartDomain::new(ChartKind::Rectangle, (0.0, 1.0), (0.0, 1.0), 16, 16).unwrap();
        let g = ImmersionGrid::from_fn(d, 3, |u, _| vec![u, 0.0, 0.0]).unwrap();
        assert!(matches!(build_frames(&g), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn graph_chart_is_not_conformal() {
        let d = ChartDomain::new(ChartKind::Rectangle, (-1.0, 1.0), (-1.0, 1.0), 32, 32).unwrap();
        let g = ImmersionGrid::from_fn(d, 3, |u, v| vec![u, v, u * u]).unwrap();
        assert!(conformal_defect(&g) > 0.5);
    }

    #[test]
    fn open_surface_has_no_gauss_bonnet() {
        let g = plane(16);
        let f = build_frames(&g).unwrap();
        assert!(gauss_bonnet_residual(&g, &f, 0).is_err());
    }

    #[test]
    fn cylinder_mean_curvature() {
        // round cylinder of radius 2: |H| = 1/4, conformal in (u/2, v)
        let d = ChartDomain::new(ChartKind::Cylinder, (-1.0, 1.0), (0.0, TAU), 32, 64).unwrap();
        let g = ImmersionGrid::from_fn(d, 3, |u, v| vec![2.0 * v.cos(), 2.0 * v.sin(), 2.0 * u]).unwrap();
        let f = build_frames(&g).unwrap();
        for k in 0..g.len() {
            let h = f.h(k);
            assert!((dot(h, h).sqrt() - 0.25).abs() < 1e-5);
        }
        let a = area(&g, &f);
        assert!((a / (16.0 * PI) - 1.0).abs() < 1e-5);
    }
}
