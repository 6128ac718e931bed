use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;
use willmore_core::catalogue::{realize, SurfaceKind, SurfaceSpec};
use willmore_core::grid::GridDocument;
use willmore_core::{ChartDomain, ImmersionGrid};

use crate::args::Resolution;
use crate::Failure;

/// Reads `arg` as inline JSON when it starts with `{`, else as a file path.
pub fn load_json<T: DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    serde_json::from_value(load_value(arg)?).map_err(|e| Failure::Config(format!("malformed JSON: {e}")))
}

fn load_value(arg: &str) -> Result<serde_json::Value, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(Path::new(arg)).map_err(|e| Failure::Config(format!("cannot read {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Config(format!("malformed JSON in {arg}: {e}")))
}

/// A catalogue spec or an explicit sampled grid.
#[derive(Clone, Debug)]
pub enum SurfaceInput {
    Spec(SurfaceSpec),
    Grid(GridDocument),
}

/// How the surface is described in reports.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum SurfaceLabel {
    Spec(SurfaceSpec),
    Grid {
        kind: &'static str,
        nu: usize,
        nv: usize,
        m: usize,
    },
}

impl SurfaceInput {
    pub fn load(arg: &str, resolution: Option<Resolution>) -> Result<Self, Failure> {
        let mut value = load_value(arg)?;
        let obj = value
            .as_object_mut()
            .ok_or_else(|| Failure::Config("surface must be a JSON object".into()))?;
        if obj.contains_key("points") {
            if resolution.is_some() {
                return Err(Failure::Config("--resolution does not apply to a sampled grid".into()));
            }
            let doc: GridDocument =
                serde_json::from_value(value).map_err(|e| Failure::Config(format!("malformed grid: {e}")))?;
            return Ok(SurfaceInput::Grid(doc));
        }
        if let Some(Resolution(r)) = resolution {
            obj.insert("resolution".into(), serde_json::json!(r));
        }
        let spec: SurfaceSpec =
            serde_json::from_value(value).map_err(|e| Failure::Config(format!("malformed surface spec: {e}")))?;
        Ok(SurfaceInput::Spec(spec))
    }

    pub fn label(&self) -> SurfaceLabel {
        match self {
            SurfaceInput::Spec(s) => SurfaceLabel::Spec(s.clone()),
            SurfaceInput::Grid(d) => SurfaceLabel::Grid {
                kind: "grid",
                nu: d.nu,
                nv: d.nv,
                m: d.m,
            },
        }
    }

    pub fn kind(&self) -> Option<SurfaceKind> {
        match self {
            SurfaceInput::Spec(s) => Some(s.kind),
            SurfaceInput::Grid(_) => None,
        }
    }

    pub fn spec(&self) -> Option<&SurfaceSpec> {
        match self {
            SurfaceInput::Spec(s) => Some(s),
            SurfaceInput::Grid(_) => None,
        }
    }

    pub fn realize(&self) -> Result<ImmersionGrid, Failure> {
        Ok(match self {
            SurfaceInput::Spec(s) => realize(s)?,
            SurfaceInput::Grid(d) => ImmersionGrid::from_document(d)?,
        })
    }

    /// The same surface at about half the resolution, when one exists.
    pub fn coarse(&self, fine: &ImmersionGrid) -> Option<ImmersionGrid> {
        match self {
            SurfaceInput::Spec(s) => {
                let mut c = s.clone();
                c.resolution = s.resolution.map(|n| n.div_ceil(2));
                realize(&c).ok()
            }
            SurfaceInput::Grid(_) => subsample(fine),
        }
    }
}

fn halve(n: usize, periodic: bool) -> Option<usize> {
    match (periodic, n % 2) {
        (true, 0) => Some(n / 2),
        (false, 1) => Some(n.div_ceil(2)),
        _ => None,
    }
}

/// Every other sample in each direction, keeping the chart ranges.
pub fn subsample(grid: &ImmersionGrid) -> Option<ImmersionGrid> {
    let d = &grid.domain;
    let nu = halve(d.nu, d.periodic_u())?;
    let nv = halve(d.nv, d.periodic_v())?;
    let domain = ChartDomain::new(d.kind, d.u_range, d.v_range, nu, nv).ok()?;
    let m = grid.m;
    let mut points = Vec::with_capacity(nu * nv * m);
    let mut tangents = grid.tangents.as_ref().map(|_| Vec::with_capacity(2 * nu * nv * m));
    for i in 0..nu {
        for j in 0..nv {
            let k = grid.index(2 * i, 2 * j);
            points.extend_from_slice(&grid.points[k * m..(k + 1) * m]);
            if let (Some(out), Some(t)) = (tangents.as_mut(), grid.tangents.as_ref()) {
                out.extend_from_slice(&t[2 * m * k..2 * m * (k + 1)]);
            }
        }
    }
    let mut out = ImmersionGrid::new(domain, m, points)
        .ok()?
        .with_edges(grid.u_edges)
        .with_conformal_tolerance(grid.conformal_tolerance);
    if let Some(t) = tangents {
        out = out.with_tangents(t).ok()?;
    }
    Some(out)
}
