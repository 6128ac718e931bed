//! WebAssembly bindings for the demo page in `www/`. Each exported function
//! returns a JSON string that the page plots on a canvas.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use willmore_core::collar::CollarChart;
use willmore_core::elastica::ElasticaSolution;
use willmore_core::lorentz::{lorentz_norm, lp_norm, MeasuredSample};
use willmore_core::multivec::{blade_label, blades};
use willmore_core::residues::analytic_c1_hopf;

#[derive(Serialize)]
pub struct LorentzView {
    pub norm: f64,
    pub lp_norm: f64,
    pub area: f64,
    /// Decreasing rearrangement as `(value, measure of {|f| ≥ value})`.
    pub steps: Vec<(f64, f64)>,
}

pub fn lorentz_view(values: &[f64], weights: &[f64], p: f64, q: f64) -> Result<LorentzView, String> {
    let s = MeasuredSample::new(values.to_vec(), weights.to_vec()).map_err(|e| e.to_string())?;
    Ok(LorentzView {
        norm: lorentz_norm(&s, p, q).map_err(|e| e.to_string())?,
        lp_norm: lp_norm(&s, p),
        area: s.area(),
        steps: s.rearrangement(),
    })
}

#[derive(Serialize)]
pub struct CollarView {
    pub l: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub geodesic_t: f64,
    pub thin: bool,
    /// `(t, metric factor, discrete curvature)` on interior nodes.
    pub profile: Vec<(f64, f64, f64)>,
}

pub fn collar_view(l: f64, n: usize) -> Result<CollarView, String> {
    let c = CollarChart::new(l).map_err(|e| e.to_string())?;
    let n = n.clamp(5, 20_000);
    let profile = c
        .discrete_curvature(n)
        .into_iter()
        .map(|(t, k)| c.metric_factor(t).map(|f| (t, f, k)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    Ok(CollarView {
        l,
        t_min: c.t_min,
        t_max: c.t_max,
        geodesic_t: c.geodesic_t(),
        thin: c.is_thin(),
        profile,
    })
}

#[derive(Serialize)]
pub struct HopfView {
    pub labels: Vec<String>,
    pub s: Vec<f64>,
    pub k: Vec<f64>,
    pub c1_norm: Vec<f64>,
    /// `c1` coefficients per sample, ordered as `labels`.
    pub c1: Vec<Vec<f64>>,
    pub drift: f64,
}

pub fn hopf_view(k0: f64, dk0: f64, length: f64, samples: usize) -> Result<HopfView, String> {
    if !(length > 0.0 && length <= 50.0) {
        return Err(format!("length {length} outside (0, 50]"));
    }
    let sol = ElasticaSolution::compute(k0, dk0, length, 1e-3).map_err(|e| e.to_string())?;
    let stride = (sol.len() / samples.max(2)).max(1);
    let mut view = HopfView {
        labels: blades(4, 2).iter().map(|&b| blade_label(b)).collect(),
        s: Vec::new(),
        k: Vec::new(),
        c1_norm: Vec::new(),
        c1: Vec::new(),
        drift: sol.first_integral_drift(),
    };
    for i in (0..sol.len()).step_by(stride) {
        let r = analytic_c1_hopf(&sol, sol.s[i]).map_err(|e| e.to_string())?;
        view.s.push(sol.s[i]);
        view.k.push(sol.k[i]);
        view.c1_norm.push(r.c1.norm());
        view.c1.push(blades(4, 2).iter().map(|&b| r.c1.coeff(b)).collect());
    }
    Ok(view)
}

fn to_json<T: Serialize>(r: Result<T, String>) -> Result<String, JsError> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsError::new(&e))
}

/// `‖f‖_{p,q}` of the step function with the given values and cell weights.
#[wasm_bindgen(js_name = lorentzNorm)]
pub fn lorentz_norm_js(values: &[f64], weights: &[f64], p: f64, q: f64) -> Result<String, JsError> {
    to_json(lorentz_view(values, weights, p, q))
}

/// Metric factor and curvature of the collar around a geodesic of length `l`.
#[wasm_bindgen(js_name = collarProfile)]
pub fn collar_profile_js(l: f64, n: usize) -> Result<String, JsError> {
    to_json(collar_view(l, n))
}

/// Closed-form residue `c1` along the Hopf torus of an elastica.
#[wasm_bindgen(js_name = hopfResidue)]
pub fn hopf_residue_js(k0: f64, dk0: f64, length: f64, samples: usize) -> Result<String, JsError> {
    to_json(hopf_view(k0, dk0, length, samples))
}
