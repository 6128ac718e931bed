use std::f64::consts::PI;

use serde::Serialize;
use willmore_core::catalogue::{hopf_torus_with_solution, SurfaceKind};
use willmore_core::collar::{cylinder_to_annulus, AnnulusParams, CollarChart};
use willmore_core::elastica::ElasticaSolution;
use willmore_core::fd::observed_order;
use willmore_core::immersion::{area, build_frames, conformal_defect, gauss_bonnet_residual, willmore_energy};
use willmore_core::lorentz::{
    lorentz_norm, lp_norm, verify_r1, verify_r2, LogRatioTable, MeasuredSample, WeakNormReport,
};
use willmore_core::multivec::{blade_label, blades};
use willmore_core::residues::{
    mid_radius, residue_sweep, residues, solve_potentials, verify_identities, CurlDefects, Deviation, IdentityReport,
    ResidueSet,
};
use willmore_core::ImmersionGrid;

use crate::args::{CollarArgs, ElasticaArgs, LorentzArgs, SurfaceArgs};
use crate::input::{load_json, SurfaceInput, SurfaceLabel};
use crate::report::{Cell, Estimate, Header, Rendered, Table};
use crate::Failure;

fn resolution(g: &ImmersionGrid) -> [usize; 2] {
    [g.domain.nu, g.domain.nv]
}

#[derive(Serialize)]
struct Target {
    name: &'static str,
    value: f64,
    rel_err: Estimate,
}

#[derive(Serialize)]
struct GaussBonnet {
    chi: i32,
    residual: f64,
}

#[derive(Serialize)]
struct EnergyReport {
    #[serde(flatten)]
    header: Header,
    surface: SurfaceLabel,
    resolution: [usize; 2],
    coarse_resolution: Option<[usize; 2]>,
    willmore: Estimate,
    area: Estimate,
    target: Option<Target>,
    conformal_defect: f64,
    gauss_bonnet: Option<GaussBonnet>,
}

fn known_energy(input: &SurfaceInput, grid: &ImmersionGrid) -> Option<(&'static str, f64, i32)> {
    let spec = input.spec()?;
    let flat = |name: &str| spec.params.get(name).copied().unwrap_or(0.0) == 0.0;
    match spec.kind {
        SurfaceKind::Sphere if grid.is_closed() => Some(("4π", 4.0 * PI, 2)),
        SurfaceKind::CliffordTorusR3 | SurfaceKind::CliffordTorusR4 => Some(("2π²", 2.0 * PI * PI, 0)),
        SurfaceKind::HopfTorus if flat("k0") && flat("dk0") && spec.params.get("length").is_none_or(|l| *l == PI) => {
            Some(("2π²", 2.0 * PI * PI, 0))
        }
        _ => None,
    }
}

pub fn energy(args: &SurfaceArgs) -> Result<Rendered, Failure> {
    let input = SurfaceInput::load(&args.surface, args.resolution)?;
    let grid = input.realize()?;
    let frames = build_frames(&grid)?;
    let w = willmore_energy(&grid, &frames);
    let a = area(&grid, &frames);
    let coarse = input.coarse(&grid);
    let (wc, ac) = match &coarse {
        Some(c) => {
            let f = build_frames(c)?;
            (Some(willmore_energy(c, &f)), Some(area(c, &f)))
        }
        None => (None, None),
    };
    let willmore = Estimate::against(w, wc);
    let known = known_energy(&input, &grid);
    let target = known.map(|(name, value, _)| Target {
        name,
        value,
        rel_err: Estimate::new((w - value).abs() / value, willmore.error.map(|e| e / value)),
    });
    let gauss_bonnet = match known {
        Some((_, _, chi)) if grid.is_closed() => Some(GaussBonnet {
            chi,
            residual: gauss_bonnet_residual(&grid, &frames, chi)?,
        }),
        _ => None,
    };
    let report = EnergyReport {
        header: Header::new("energy"),
        surface: input.label(),
        resolution: resolution(&grid),
        coarse_resolution: coarse.as_ref().map(resolution),
        willmore,
        area: Estimate::against(a, ac),
        target,
        conformal_defect: conformal_defect(&grid),
        gauss_bonnet,
    };
    let mut table = Table::new(["quantity", "value", "error", "target"]);
    table.push(vec![
        "willmore".into(),
        w.into(),
        willmore.error.into(),
        known.map(|k| k.1).into(),
    ]);
    table.push(vec!["area".into(), a.into(), report.area.error.into(), Cell::Empty]);
    table.push(vec![
        "conformal_defect".into(),
        report.conformal_defect.into(),
        Cell::Empty,
        Cell::Empty,
    ]);
    if let Some(gb) = &report.gauss_bonnet {
        table.push(vec![
            "gauss_bonnet_residual".into(),
            gb.residual.into(),
            Cell::Empty,
            Cell::Empty,
        ]);
    }
    Rendered::new(&report, table)
}

/// Largest component gap between two residue sets.
fn residue_gap(a: &ResidueSet, b: &ResidueSet) -> [f64; 3] {
    let c = a.c.iter().zip(&b.c).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let c1 = (a.c1_multivector() - b.c1_multivector()).max_abs();
    [c, (a.c0 - b.c0).abs(), c1]
}

#[derive(Serialize)]
struct ResidueErrors {
    c: f64,
    c0: f64,
    c1: f64,
}

impl From<[f64; 3]> for ResidueErrors {
    fn from([c, c0, c1]: [f64; 3]) -> Self {
        Self { c, c0, c1 }
    }
}

#[derive(Serialize)]
struct ResiduesReport {
    #[serde(flatten)]
    header: Header,
    surface: SurfaceLabel,
    resolution: [usize; 2],
    coarse_resolution: Option<[usize; 2]>,
    residues: ResidueSet,
    /// Gap to the coarse-resolution values on the same circle.
    error: Option<ResidueErrors>,
    #[serde(skip_serializing_if = "Option::is_none")]
    potentials: Option<PotentialChecks>,
}

#[derive(Serialize)]
struct PotentialChecks {
    curl_defect: CurlDefects,
    identities: IdentityReport,
}

fn residue_columns(m: usize) -> Vec<String> {
    let mut cols = vec!["radius".to_string()];
    cols.extend((1..=m).map(|i| format!("c_{i}")));
    cols.push("c0".into());
    cols.extend(blades(m, 2).iter().map(|&b| format!("c1_{}", blade_label(b))));
    cols.extend(["quad_error".into(), "error".into(), "deviation".into()]);
    cols
}

fn residue_row(r: &ResidueSet, error: Option<f64>, deviation: f64) -> Vec<Cell> {
    let mut row: Vec<Cell> = vec![r.radius.into()];
    row.extend(r.c.iter().map(|&x| Cell::Num(x)));
    row.push(r.c0.into());
    let c1 = r.c1_multivector();
    row.extend(blades(r.m, 2).iter().map(|&b| Cell::Num(c1.coeff(b))));
    row.extend([r.quad_error.into(), error.into(), deviation.into()]);
    row
}

pub fn residues_at(args: &SurfaceArgs, radius: Option<f64>, potentials: bool) -> Result<Rendered, Failure> {
    let input = SurfaceInput::load(&args.surface, args.resolution)?;
    let grid = input.realize()?;
    let rho = radius.unwrap_or_else(|| mid_radius(&grid.domain));
    let frames = build_frames(&grid)?;
    let set = residues(&grid, &frames, rho)?;
    let checks = if potentials {
        let p = solve_potentials(&grid, &frames, &set)?;
        Some(PotentialChecks {
            curl_defect: p.curl_defect,
            identities: verify_identities(&grid, &frames, &p, &set)?,
        })
    } else {
        None
    };
    let coarse = input.coarse(&grid);
    let coarse_set = match &coarse {
        Some(c) => Some(residues(c, &build_frames(c)?, rho)?),
        None => None,
    };
    let gap = coarse_set.as_ref().map(|c| residue_gap(&set, c));
    let mut table = Table::new(residue_columns(grid.m));
    table.push(residue_row(&set, gap.map(|g| g.into_iter().fold(0.0, f64::max)), 0.0));
    let report = ResiduesReport {
        header: Header::new("residues"),
        surface: input.label(),
        resolution: resolution(&grid),
        coarse_resolution: coarse.as_ref().map(resolution),
        residues: set,
        error: gap.map(Into::into),
        potentials: checks,
    };
    Rendered::new(&report, table)
}

#[derive(Serialize)]
struct SweepReport {
    #[serde(flatten)]
    header: Header,
    surface: SurfaceLabel,
    resolution: [usize; 2],
    coarse_resolution: Option<[usize; 2]>,
    sets: Vec<ResidueSet>,
    skipped: Vec<f64>,
    deviation: Deviation,
    coarse_deviation: Option<Deviation>,
    /// Observed order of the deviation between the two resolutions.
    order: Option<f64>,
}

pub fn sweep(args: &SurfaceArgs, radii: &[f64]) -> Result<Rendered, Failure> {
    let input = SurfaceInput::load(&args.surface, args.resolution)?;
    let grid = input.realize()?;
    let s = residue_sweep(&grid, &build_frames(&grid)?, radii)?;
    let coarse = input.coarse(&grid);
    let cs = match &coarse {
        Some(c) => residue_sweep(c, &build_frames(c)?, radii).ok(),
        None => None,
    };
    let mut table = Table::new(residue_columns(grid.m));
    for a in &s.sets {
        let dev = s
            .sets
            .iter()
            .map(|b| residue_gap(a, b).into_iter().fold(0.0, f64::max))
            .fold(0.0, f64::max);
        let err = cs
            .as_ref()
            .and_then(|c| c.sets.iter().find(|b| b.radius == a.radius))
            .map(|b| residue_gap(a, b).into_iter().fold(0.0, f64::max));
        table.push(residue_row(a, err, dev));
    }
    let ratio = coarse
        .as_ref()
        .map(|c| (grid.domain.nu - 1) as f64 / (c.domain.nu - 1) as f64);
    let order = match (&cs, ratio) {
        (Some(c), Some(r)) => Some(observed_order(c.deviation.max(), s.deviation.max(), r)),
        _ => None,
    };
    let report = SweepReport {
        header: Header::new("sweep"),
        surface: input.label(),
        resolution: resolution(&grid),
        coarse_resolution: coarse.as_ref().map(resolution),
        sets: s.sets,
        skipped: s.skipped,
        deviation: s.deviation,
        coarse_deviation: cs.map(|c| c.deviation),
        order,
    };
    Rendered::new(&report, table)
}

#[derive(Serialize)]
struct ElasticaReport {
    #[serde(flatten)]
    header: Header,
    k0: f64,
    dk0: f64,
    length: f64,
    ds: f64,
    /// Gap in `k` to the solution with step `2 ds`.
    k_error: f64,
    first_integral_drift: f64,
    horizontality_defect: f64,
    projection_defect: f64,
    solution: ElasticaSolution,
}

pub fn elastica(args: &ElasticaArgs) -> Result<Rendered, Failure> {
    let sol = ElasticaSolution::compute(args.k0, args.dk0, args.length, args.ds)?;
    let coarse = ElasticaSolution::compute(args.k0, args.dk0, args.length, 2.0 * args.ds)?;
    let k_error = coarse
        .k
        .iter()
        .enumerate()
        .filter_map(|(i, k)| sol.k.get(2 * i).map(|f| (f - k).abs()))
        .fold(0.0, f64::max);
    let mut table = Table::new([
        "s",
        "k",
        "dk",
        "first_integral",
        "gamma_1",
        "gamma_2",
        "gamma_3",
        "lift_1",
        "lift_2",
        "lift_3",
        "lift_4",
    ]);
    for i in 0..sol.len() {
        let mut row: Vec<Cell> = vec![
            sol.s[i].into(),
            sol.k[i].into(),
            sol.dk[i].into(),
            sol.first_integral[i].into(),
        ];
        row.extend(sol.gamma[i].iter().map(|&x| Cell::Num(x)));
        row.extend(sol.lift[i].iter().map(|&x| Cell::Num(x)));
        table.push(row);
    }
    let report = ElasticaReport {
        header: Header::new("elastica"),
        k0: args.k0,
        dk0: args.dk0,
        length: args.length,
        ds: sol.ds,
        k_error,
        first_integral_drift: sol.first_integral_drift(),
        horizontality_defect: sol.horizontality_defect(),
        projection_defect: sol.projection_defect(),
        solution: sol,
    };
    Rendered::new(&report, table)
}

#[derive(serde::Deserialize)]
struct SampleInput {
    values: Vec<f64>,
    weights: Vec<f64>,
    area: Option<f64>,
}

#[derive(Serialize)]
struct SampleReport {
    #[serde(flatten)]
    header: Header,
    p: f64,
    #[serde(serialize_with = "extended_real")]
    q: f64,
    area: f64,
    norm: Estimate,
    lp_norm: Estimate,
}

/// `inf` as a string, finite values as numbers.
fn extended_real<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if x.is_infinite() {
        s.serialize_str(if *x > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*x)
    }
}

#[derive(Serialize)]
struct InverseRadiusReport {
    #[serde(flatten)]
    header: Header,
    weak_norm: WeakNormReport,
    log_growth: LogRatioTable,
}

pub fn lorentz(args: &LorentzArgs) -> Result<Rendered, Failure> {
    let Some(src) = &args.sample else {
        let weak = verify_r1(&args.resolutions)?;
        let log = verify_r2(&args.radii)?;
        let mut table = Table::new(["quantity", "parameter", "value", "exact", "error"]);
        for row in &weak.rows {
            let exact = weak.exact;
            table.push(vec![
                "weak_norm".into(),
                row.resolution.into(),
                row.norm.into(),
                exact.into(),
                exact.map(|e| (row.norm - e).abs()).into(),
            ]);
        }
        for row in &log.rows {
            table.push(vec![
                "log_norm".into(),
                row.r.into(),
                row.norm.into(),
                row.exact.into(),
                (row.norm - row.exact).abs().into(),
            ]);
        }
        let report = InverseRadiusReport {
            header: Header::new("lorentz"),
            weak_norm: weak,
            log_growth: log,
        };
        return Rendered::new(&report, table);
    };
    let s: SampleInput = load_json(src)?;
    let n = s.values.len() as f64;
    let sample = match s.area {
        Some(a) => MeasuredSample::with_area(s.values, s.weights, a)?,
        None => MeasuredSample::new(s.values, s.weights)?,
    };
    let norm = lorentz_norm(&sample, args.p, args.q)?;
    let lp = lp_norm(&sample, args.p);
    // step functions are exact; only summation rounding remains
    let rounding = |x: f64| Some(n * f64::EPSILON * x);
    let report = SampleReport {
        header: Header::new("lorentz"),
        p: args.p,
        q: args.q,
        area: sample.area(),
        norm: Estimate::new(norm, rounding(norm)),
        lp_norm: Estimate::new(lp, rounding(lp)),
    };
    let mut table = Table::new(["quantity", "p", "q", "value", "error"]);
    table.push(vec![
        "lorentz_norm".into(),
        args.p.into(),
        args.q.into(),
        norm.into(),
        report.norm.error.into(),
    ]);
    table.push(vec![
        "lp_norm".into(),
        args.p.into(),
        args.p.into(),
        lp.into(),
        report.lp_norm.error.into(),
    ]);
    Rendered::new(&report, table)
}

#[derive(Serialize)]
struct CurvatureCheck {
    n: usize,
    max_error: f64,
    coarse_n: usize,
    coarse_max_error: f64,
    order: f64,
}

#[derive(Serialize)]
struct CollarReport {
    #[serde(flatten)]
    header: Header,
    chart: CollarChart,
    thin: bool,
    geodesic_t: f64,
    geodesic_length: Estimate,
    geodesic_factor: f64,
    edge_factor: f64,
    curvature: CurvatureCheck,
    annulus: AnnulusParams,
}

pub fn collar(args: &CollarArgs) -> Result<Rendered, Failure> {
    let c = CollarChart::new(args.l)?;
    if args.n < 5 {
        return Err(Failure::Config("--n must be at least 5".into()));
    }
    let curv = c.discrete_curvature(args.n);
    let err = |k: &[(f64, f64)]| k.iter().map(|(_, k)| (k + 1.0).abs()).fold(0.0, f64::max);
    let coarse_n = (args.n - 1) / 2;
    let coarse = err(&c.discrete_curvature(coarse_n));
    let fine = err(&curv);
    let ratio = (args.n + 1) as f64 / (coarse_n + 1) as f64;
    let edge_t = c.t_min + 1e-9 * (c.t_max - c.t_min);
    let report = CollarReport {
        header: Header::new("collar"),
        chart: c,
        thin: c.is_thin(),
        geodesic_t: c.geodesic_t(),
        geodesic_length: Estimate::new(
            c.geodesic_length(),
            Some((c.circle_length(c.geodesic_t(), 256)? - c.geodesic_length()).abs()),
        ),
        geodesic_factor: c.metric_factor(c.geodesic_t())?,
        edge_factor: c.metric_factor(edge_t)?,
        curvature: CurvatureCheck {
            n: args.n,
            max_error: fine,
            coarse_n,
            coarse_max_error: coarse,
            order: observed_order(coarse, fine, ratio),
        },
        annulus: cylinder_to_annulus(&c),
    };
    let mut table = Table::new(["t", "metric_factor", "curvature", "curvature_error"]);
    for (t, k) in curv {
        table.push(vec![
            t.into(),
            c.metric_factor(t)?.into(),
            k.into(),
            (k + 1.0).abs().into(),
        ]);
    }
    Rendered::new(&report, table)
}

/// Hopf torus helper shared with the suite.
pub fn hopf(k0: f64, n: usize) -> Result<(ImmersionGrid, ElasticaSolution, usize), Failure> {
    let spec = willmore_core::catalogue::SurfaceSpec::new(SurfaceKind::HopfTorus, n, n).with("k0", k0);
    Ok(hopf_torus_with_solution(&spec)?)
}
