//! The invariant suite behind `wrl verify`. Every check compares one number
//! against a fixed limit; seeds and resolutions are fixed so the report is
//! reproducible byte for byte.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use willmore_core::catalogue::{apply_mobius, realize, MobiusMap, SurfaceKind, SurfaceSpec};
use willmore_core::collar::{torus_cylinder_chart, CollarChart};
use willmore_core::elastica::{solve_elastica, ElasticaSolution};
use willmore_core::fd::observed_order;
use willmore_core::immersion::{build_frames, gauss_bonnet_residual, willmore_energy};
use willmore_core::lorentz::{duality_bound, lorentz_norm, lp_norm, verify_r1, verify_r2, MeasuredSample};
use willmore_core::multivec::{blades, MultiVector};
use willmore_core::residues::{
    analytic_c1_hopf, residue_sweep, residues, solve_potentials, verify_identities, ContourIntegrals,
};
use willmore_core::{Error, ImmersionGrid};

use crate::args::Suite;
use crate::commands::hopf;
use crate::report::{Cell, Header, Rendered, Table};
use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::Above => ">",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub group: &'static str,
    pub value: f64,
    pub relation: Relation,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    fn new(group: &'static str, id: &str, value: f64, relation: Relation, limit: f64) -> Self {
        let passed = match relation {
            Relation::Below => value < limit,
            Relation::Above => value > limit,
        };
        Self {
            id: format!("{group}.{id}"),
            group,
            value,
            relation,
            limit,
            passed,
        }
    }
}

fn below(group: &'static str, id: &str, value: f64, limit: f64) -> Check {
    Check::new(group, id, value, Relation::Below, limit)
}

fn above(group: &'static str, id: &str, value: f64, limit: f64) -> Check {
    Check::new(group, id, value, Relation::Above, limit)
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    #[serde(flatten)]
    pub header: Header,
    pub suite: String,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn render(&self) -> Result<Rendered, Failure> {
        let mut table = Table::new(["id", "value", "relation", "limit", "passed"]);
        for c in &self.checks {
            table.push(vec![
                c.id.clone().into(),
                c.value.into(),
                c.relation.symbol().into(),
                c.limit.into(),
                Cell::Text(c.passed.to_string()),
            ]);
        }
        Rendered::new(self, table)
    }
}

type Group = fn() -> Result<Vec<Check>, Failure>;

pub fn run_suite(suite: Suite) -> Result<SuiteReport, Failure> {
    let groups: &[(Suite, Group)] = &[
        (Suite::Algebra, algebra),
        (Suite::Energy, energy),
        (Suite::Residues, residue_checks),
        (Suite::Hopf, hopf_checks),
        (Suite::Elastica, elastica),
        (Suite::Lorentz, lorentz),
        (Suite::Collar, collar),
    ];
    let mut checks = Vec::new();
    for (g, f) in groups {
        if suite == Suite::All || suite == *g {
            checks.extend(f()?);
        }
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(SuiteReport {
        header: Header::new("verify"),
        suite: format!("{suite:?}").to_lowercase(),
        failed: checks.len() - passed,
        passed,
        checks,
    })
}

fn basis(m: usize, mask: u8) -> MultiVector {
    MultiVector::from_blades(m, mask.count_ones() as usize, [(mask, 1.0)]).expect("valid blade")
}

fn gap(a: &MultiVector, b: &MultiVector) -> f64 {
    (*a - *b).max_abs()
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Largest residual of each algebraic identity over every basis combination.
pub fn algebra_residuals() -> Result<[(&'static str, f64); 6], Failure> {
    let (mut star, mut pairing, mut adjoint, mut leibniz, mut plane, mut rotation) =
        (0f64, 0f64, 0f64, 0f64, 0f64, 0f64);
    for m in 3..=6 {
        let vol = MultiVector::volume(m)?;
        for p in 0..=m {
            for &a in blades(m, p) {
                let ea = basis(m, a);
                star = star.max(gap(&ea.hodge().hodge(), &(ea * sign(p * (m - p)))));
                for &b in blades(m, p) {
                    let lhs = basis(m, b).wedge(&ea.hodge())?;
                    pairing = pairing.max(gap(&lhs, &(vol * if a == b { 1.0 } else { 0.0 })));
                }
                for q in 0..=p {
                    for &b in blades(m, q) {
                        let eb = basis(m, b);
                        let ab = ea.contract(&eb)?;
                        for &c in blades(m, p - q) {
                            let ec = basis(m, c);
                            adjoint = adjoint.max((ab.inner(&ec)? - ea.inner(&eb.wedge(&ec)?)?).abs());
                        }
                    }
                }
            }
        }
        for p in 1..=m {
            for q in 1..m {
                for r in 1..=m - q {
                    if p + q + r - 2 > m {
                        continue;
                    }
                    for &a in blades(m, p) {
                        let ea = basis(m, a);
                        for &b in blades(m, q) {
                            for &c in blades(m, r) {
                                let (eb, ec) = (basis(m, b), basis(m, c));
                                let lhs = ea.bullet(&eb.wedge(&ec)?)?;
                                let rhs = ea.bullet(&eb)?.wedge(&ec)? + ea.bullet(&ec)?.wedge(&eb)? * sign(q * r);
                                leibniz = leibniz.max(gap(&lhs, &rhs));
                            }
                        }
                    }
                }
            }
        }
        let s = sign(m - 1);
        for i in 0..m {
            for j in (0..m).filter(|j| *j != i) {
                let (e1, e2) = (basis(m, 1 << i), basis(m, 1 << j));
                let n = e1.wedge(&e2)?.hodge();
                for k in (0..m).filter(|k| *k != i && *k != j) {
                    let big = basis(m, 1 << k);
                    let lhs = n.contract(&big)?.hodge();
                    plane = plane.max(gap(&lhs, &(e1.wedge(&e2)?.wedge(&big)? * s)));
                    for (u, ju) in [(e1, -e2), (e2, e1)] {
                        rotation = rotation.max(gap(&(lhs.contract(&u)? * s), &(-ju.wedge(&big)?)));
                    }
                }
            }
        }
    }
    Ok([
        ("hodge_sign_law", star),
        ("hodge_pairing", pairing),
        ("contraction_adjoint", adjoint),
        ("bullet_leibniz", leibniz),
        ("normal_plane_identity", plane),
        ("normal_rotation_identity", rotation),
    ])
}

fn algebra() -> Result<Vec<Check>, Failure> {
    Ok(algebra_residuals()?
        .iter()
        .map(|(id, r)| below("algebra", id, *r, 1e-12))
        .collect())
}

fn surface(kind: SurfaceKind, nu: usize, nv: usize) -> Result<ImmersionGrid, Failure> {
    Ok(realize(&SurfaceSpec::new(kind, nu, nv))?)
}

fn energy_of(g: &ImmersionGrid) -> Result<f64, Failure> {
    Ok(willmore_energy(g, &build_frames(g)?))
}

fn energy() -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    let sphere = surface(SurfaceKind::Sphere, 256, 128)?;
    let ws = energy_of(&sphere)?;
    out.push(below("energy", "sphere_4pi", (ws / (4.0 * PI) - 1.0).abs(), 1e-3));
    let torus = surface(SurfaceKind::CliffordTorusR3, 128, 128)?;
    let wt = energy_of(&torus)?;
    let oracle = energy_of(&surface(SurfaceKind::CliffordTorusR3, 512, 512)?)?;
    out.push(below(
        "energy",
        "clifford_r3_2pi2",
        (wt / (2.0 * PI * PI) - 1.0).abs(),
        5e-3,
    ));
    out.push(below("energy", "clifford_r3_vs_4x", (wt / oracle - 1.0).abs(), 5e-3));
    out.push(below(
        "energy",
        "gauss_bonnet_sphere",
        gauss_bonnet_residual(&sphere, &build_frames(&sphere)?, 2)?,
        1e-2,
    ));
    out.push(below(
        "energy",
        "gauss_bonnet_torus",
        gauss_bonnet_residual(&torus, &build_frames(&torus)?, 0)?,
        1e-2,
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (kind, id) in [
        (SurfaceKind::Sphere, "mobius_sphere"),
        (SurfaceKind::CliffordTorusR4, "mobius_torus"),
    ] {
        let g = surface(kind, 192, 128)?;
        let w0 = energy_of(&g)?;
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let map = MobiusMap::random_generic(&mut rng, &g, 4);
            worst = worst.max(((energy_of(&apply_mobius(&map, &g)?)? - w0) / w0).abs());
        }
        out.push(below("energy", id, worst, 5e-3));
    }
    Ok(out)
}

const RADII: [f64; 5] = [0.3, 0.5, 0.7, 1.0, 2.0];

fn identity_errors(g: &ImmersionGrid) -> Result<[f64; 6], Failure> {
    let f = build_frames(g)?;
    let r = residues(g, &f, 1.0)?;
    let p = solve_potentials(g, &f, &r)?;
    let id = verify_identities(g, &f, &p, &r)?;
    let c = p.curl_defect;
    Ok([c.l, c.s, c.r, id.heq, id.main1, id.main11])
}

fn residue_checks() -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    let dev = |n: usize| -> Result<f64, Failure> {
        let g = surface(SurfaceKind::Catenoid, n, n)?;
        Ok(residue_sweep(&g, &build_frames(&g)?, &RADII)?.deviation.max())
    };
    out.push(above(
        "residues",
        "sweep_order_256_512",
        observed_order(dev(256)?, dev(512)?, 2.0),
        1.8,
    ));
    let at = |kind, n| -> Result<f64, Failure> {
        let g = surface(kind, n, n)?;
        Ok(residues(&g, &build_frames(&g)?, 1.0)?.c_norm())
    };
    out.push(below("residues", "catenoid_c", at(SurfaceKind::Catenoid, 256)?, 1e-5));
    let cat = at(SurfaceKind::Catenoid, 128)?;
    let inv = at(SurfaceKind::InvertedCatenoid, 128)?;
    let inv4 = at(SurfaceKind::InvertedCatenoid, 512)?;
    out.push(above(
        "residues",
        "inverted_over_catenoid",
        inv / cat.max(f64::MIN_POSITIVE),
        100.0,
    ));
    out.push(below("residues", "inverted_vs_4x", (inv / inv4 - 1.0).abs(), 0.02));
    let names = ["curl_l", "curl_s", "curl_r", "heq", "main1", "main11"];
    for (kind, label) in [
        (SurfaceKind::Catenoid, "catenoid"),
        (SurfaceKind::Sphere, "sphere_band"),
    ] {
        let grid = |n| -> Result<ImmersionGrid, Failure> {
            let mut spec = SurfaceSpec::new(kind, n, n);
            if kind == SurfaceKind::Sphere {
                spec = spec.with("u_min", -1.0).with("u_max", 1.0);
            }
            Ok(realize(&spec)?)
        };
        let (a, b) = (identity_errors(&grid(128)?)?, identity_errors(&grid(256)?)?);
        for (k, name) in names.iter().enumerate() {
            out.push(above(
                "residues",
                &format!("{label}_{name}_order"),
                observed_order(a[k], b[k], 2.0),
                1.8,
            ));
        }
    }
    let bump = surface(SurfaceKind::GraphBump, 128, 128)?;
    let f = build_frames(&bump)?;
    let r = residues(&bump, &f, 1.0)?;
    let tripped = matches!(solve_potentials(&bump, &f, &r), Err(Error::CurlDefect { .. }));
    out.push(above(
        "residues",
        "graph_bump_guard",
        if tripped { 1.0 } else { 0.0 },
        0.5,
    ));
    Ok(out)
}

fn hopf_checks() -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    let (g, _, _) = hopf(0.0, 128)?;
    let ci = ContourIntegrals::new(&g, &build_frames(&g)?)?;
    let flat = (0..g.domain.nu).map(|i| ci.at_row(i).c1_norm()).fold(0.0, f64::max);
    out.push(below("hopf", "great_circle_c1", flat, 1e-5));
    let mut errs = Vec::new();
    let mut smallest = f64::INFINITY;
    for n in [64usize, 128, 256] {
        let (g, sol, sub) = hopf(0.5, n)?;
        let ci = ContourIntegrals::new(&g, &build_frames(&g)?)?;
        let mut worst: f64 = 0.0;
        for i in [n / 4, n / 2, 3 * n / 4] {
            let numeric = ci.at_row(i);
            smallest = smallest.min(numeric.c1_norm());
            let exact = analytic_c1_hopf(&sol, sol.s[i * sub])?.c1;
            worst = worst.max((numeric.c1_multivector() - exact).norm());
        }
        errs.push(worst);
    }
    out.push(above("hopf", "elastica_c1", smallest, 1e-2));
    out.push(above(
        "hopf",
        "c1_closed_form_order",
        observed_order(errs[1], errs[2], 2.0),
        1.8,
    ));
    Ok(out)
}

fn elastica() -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    let sol = ElasticaSolution::compute(0.5, 0.2, 10.0, 1e-3)?;
    out.push(below(
        "elastica",
        "first_integral_drift",
        sol.first_integral_drift(),
        1e-8,
    ));
    let end = |ds: f64| -> Result<f64, Failure> { Ok(*solve_elastica(1.2, 0.4, 4.0, ds)?.k.last().unwrap_or(&0.0)) };
    let (a, b, c) = (end(0.04)?, end(0.02)?, end(0.01)?);
    out.push(above(
        "elastica",
        "step_halving_order",
        observed_order(a - b, b - c, 2.0),
        3.8,
    ));
    let worst = [0.0, 0.5, 1.3]
        .iter()
        .map(|&k0| ElasticaSolution::compute(k0, 0.0, PI, 1e-3).map(|s| s.horizontality_defect()))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(below("elastica", "lift_horizontality", worst, 1e-8));
    Ok(out)
}

fn lorentz() -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(1..80);
        let values = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
        let weights = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let s = MeasuredSample::new(values, weights)?;
        let p = rng.gen_range(1.05..6.0);
        let a = lorentz_norm(&s, p, p)?;
        worst = worst.max((a - lp_norm(&s, p)).abs() / a.max(1.0));
    }
    out.push(below("lorentz", "diagonal_is_lebesgue", worst, 1e-10));
    out.push(below(
        "lorentz",
        "weak_norm_drift",
        verify_r1(&[128, 256, 512])?.max_drift,
        0.05,
    ));
    out.push(below(
        "lorentz",
        "log_ratio_spread",
        verify_r2(&[1e-1, 1e-2, 1e-3])?.spread,
        10.0,
    ));
    let fs: [fn(f64) -> f64; 5] = [
        |_| 1.0,
        |x| 1.0 / x,
        |x| x.sin(),
        |x| (3.0 * x).cos() / x.sqrt(),
        |x| (-x).exp(),
    ];
    let mut ratio: f64 = 0.0;
    for f in fs {
        for r in [0.1, 0.01] {
            let d = duality_bound(f, r, 2000)?;
            ratio = ratio.max(d.lhs / d.rhs);
        }
    }
    out.push(below("lorentz", "duality_ratio", ratio, 1.0));
    Ok(out)
}

fn collar() -> Result<Vec<Check>, Failure> {
    let mut out = Vec::new();
    let mut worst: f64 = 0.0;
    for l in [1.0, 0.1, 0.01] {
        let c = CollarChart::new(l)?;
        worst = worst
            .max((c.geodesic_length() - l).abs())
            .max((c.circle_length(c.geodesic_t(), 256)? - l).abs());
    }
    out.push(below("collar", "geodesic_length", worst, 1e-12));
    let c = CollarChart::new(0.1)?;
    let err = |n: usize| {
        c.discrete_curvature(n)
            .iter()
            .map(|(_, k)| (k + 1.0).abs())
            .fold(0.0, f64::max)
    };
    let (a, b) = (err(801), err(1601));
    out.push(below("collar", "curvature_minus_one", b, 1e-3));
    out.push(above("collar", "curvature_order", observed_order(a, b, 2.0), 1.8));
    let defect = [1.0, 0.2, 0.05]
        .iter()
        .map(|&l| torus_cylinder_chart(l).map(|t| t.conformal_defect(48, 1e-3)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(below("collar", "torus_chart_conformal", defect, 1e-10));
    Ok(out)
}
