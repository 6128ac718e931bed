//! Elastica on `S²`, curves of prescribed geodesic curvature, and their
//! horizontal lifts to `S³` through the Hopf fibration.
//!
//! Quaternions are `[w, x, y, z] = w + x i + y j + z k`, `S³` is the unit
//! quaternions, the Hopf map is `q ↦ q̄ i q` (imaginary part read as a point of
//! `R³`) and the fibers are the orbits of `q ↦ e^{iθ} q`. With this
//! convention `q = 1` maps to `(1, 0, 0)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Quat = [f64; 4];
pub type Vec3 = [f64; 3];

pub fn qmul(a: Quat, b: Quat) -> Quat {
    [
        a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
        a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
        a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
        a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
    ]
}

pub fn qconj(a: Quat) -> Quat {
    [a[0], -a[1], -a[2], -a[3]]
}

/// `i q`.
pub fn qi(a: Quat) -> Quat {
    qmul([0.0, 1.0, 0.0, 0.0], a)
}

/// `e^{iθ} q`.
pub fn fiber(theta: f64, q: Quat) -> Quat {
    qmul([theta.cos(), theta.sin(), 0.0, 0.0], q)
}

fn pure(v: Vec3) -> Quat {
    [0.0, v[0], v[1], v[2]]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn dot4(a: Quat, b: Quat) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

fn axpy3(a: Vec3, t: f64, b: Vec3) -> Vec3 {
    [a[0] + t * b[0], a[1] + t * b[1], a[2] + t * b[2]]
}

fn axpy4(a: Quat, t: f64, b: Quat) -> Quat {
    [a[0] + t * b[0], a[1] + t * b[1], a[2] + t * b[2], a[3] + t * b[3]]
}

/// The Hopf map `q ↦ q̄ i q`.
pub fn hopf_project(q: Quat) -> Result<Vec3> {
    let n = dot4(q, q).sqrt();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::OutOfRange(format!("|q| = {n}, expected a unit quaternion")));
    }
    Ok(hopf_raw(q))
}

fn hopf_raw(q: Quat) -> Vec3 {
    let p = qmul(qconj(q), qi(q));
    [p[1], p[2], p[3]]
}

/// `(k')² + k⁴/4 + k²/2`, constant along solutions of `k'' + (k³ + k)/2 = 0`.
pub fn first_integral(k: f64, dk: f64) -> f64 {
    dk * dk + 0.25 * k.powi(4) + 0.5 * k * k
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureProfile {
    pub ds: f64,
    pub s: Vec<f64>,
    pub k: Vec<f64>,
    pub dk: Vec<f64>,
    pub first_integral: Vec<f64>,
}

impl CurvatureProfile {
    /// `k` at `s_i + ds/2` by cubic Hermite interpolation.
    fn k_mid(&self, i: usize) -> f64 {
        0.5 * (self.k[i] + self.k[i + 1]) + self.ds / 8.0 * (self.dk[i] - self.dk[i + 1])
    }
}

fn steps(length: f64, ds: f64) -> Result<usize> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(Error::OutOfRange(format!("length {length} must be positive")));
    }
    if !(ds > 0.0) || ds > length {
        return Err(Error::OutOfRange(format!("step {ds} must lie in (0, length]")));
    }
    Ok(((length / ds).round() as usize).max(1))
}

/// Integrates `k'' + (k³ + k)/2 = 0` with classical RK4. The step is adjusted
/// to `length / round(length / ds)` so that the grid ends at `length`.
pub fn solve_elastica(k0: f64, dk0: f64, length: f64, ds: f64) -> Result<CurvatureProfile> {
    let n = steps(length, ds)?;
    let h = length / n as f64;
    let f = |y: [f64; 2]| [y[1], -0.5 * (y[0].powi(3) + y[0])];
    let mut y = [k0, dk0];
    let mut out = CurvatureProfile {
        ds: h,
        s: Vec::with_capacity(n + 1),
        k: Vec::with_capacity(n + 1),
        dk: Vec::with_capacity(n + 1),
        first_integral: Vec::with_capacity(n + 1),
    };
    for i in 0..=n {
        if !y[0].is_finite() || !y[1].is_finite() {
            return Err(Error::NonFinite(format!("elastica at step {i}")));
        }
        out.s.push(i as f64 * h);
        out.k.push(y[0]);
        out.dk.push(y[1]);
        out.first_integral.push(first_integral(y[0], y[1]));
        if i == n {
            break;
        }
        let k1 = f(y);
        let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for c in 0..2 {
            y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
    }
    Ok(out)
}

/// A curve on the unit sphere with speed 2 and its unit tangent.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereCurve {
    pub ds: f64,
    pub s: Vec<f64>,
    pub k: Vec<f64>,
    pub gamma: Vec<Vec3>,
    pub tangent: Vec<Vec3>,
}

impl SphereCurve {
    /// Conormal `γ × T`.
    pub fn conormal(&self, i: usize) -> Vec3 {
        cross(self.gamma[i], self.tangent[i])
    }
}

/// Integrates `γ' = 2T`, `T' = 2(-γ + k γ×T)` from `γ = (1,0,0)`,
/// `T = (0,1,0)`: a speed-2 curve with geodesic curvature `k`.
pub fn frame_curve(profile: &CurvatureProfile) -> SphereCurve {
    let h = profile.ds;
    let f = |g: Vec3, t: Vec3, k: f64| -> (Vec3, Vec3) {
        let nrm = cross(g, t);
        (
            [2.0 * t[0], 2.0 * t[1], 2.0 * t[2]],
            [
                2.0 * (-g[0] + k * nrm[0]),
                2.0 * (-g[1] + k * nrm[1]),
                2.0 * (-g[2] + k * nrm[2]),
            ],
        )
    };
    let n = profile.s.len();
    let mut g = [1.0, 0.0, 0.0];
    let mut t = [0.0, 1.0, 0.0];
    let mut out = SphereCurve {
        ds: h,
        s: profile.s.clone(),
        k: profile.k.clone(),
        gamma: Vec::with_capacity(n),
        tangent: Vec::with_capacity(n),
    };
    for i in 0..n {
        out.gamma.push(g);
        out.tangent.push(t);
        if i + 1 == n {
            break;
        }
        let (ka, km, kb) = (profile.k[i], profile.k_mid(i), profile.k[i + 1]);
        let (a1, b1) = f(g, t, ka);
        let (a2, b2) = f(axpy3(g, 0.5 * h, a1), axpy3(t, 0.5 * h, b1), km);
        let (a3, b3) = f(axpy3(g, 0.5 * h, a2), axpy3(t, 0.5 * h, b2), km);
        let (a4, b4) = f(axpy3(g, h, a3), axpy3(t, h, b3), kb);
        for c in 0..3 {
            g[c] += h / 6.0 * (a1[c] + 2.0 * a2[c] + 2.0 * a3[c] + a4[c]);
            t[c] += h / 6.0 * (b1[c] + 2.0 * b2[c] + 2.0 * b3[c] + b4[c]);
        }
    }
    out
}

/// Horizontal lift through `q = 1`: `q' = -q (γ × T)`, which keeps
/// `q̄ i q = γ` and `⟨q', i q⟩ = 0`.
pub fn hopf_lift(curve: &SphereCurve) -> Vec<Quat> {
    let h = curve.ds;
    let n = curve.s.len();
    // (γ×T)' = -2k T
    let conormal_mid = |i: usize| -> Vec3 {
        let (a, b) = (curve.conormal(i), curve.conormal(i + 1));
        let (da, db) = (curve.tangent[i], curve.tangent[i + 1]);
        let (ka, kb) = (curve.k[i], curve.k[i + 1]);
        let mut out = [0.0; 3];
        for c in 0..3 {
            out[c] = 0.5 * (a[c] + b[c]) + h / 8.0 * (-2.0 * ka * da[c] + 2.0 * kb * db[c]);
        }
        out
    };
    let f = |q: Quat, v: Vec3| -> Quat {
        let p = qmul(q, pure(v));
        [-p[0], -p[1], -p[2], -p[3]]
    };
    let mut q = [1.0, 0.0, 0.0, 0.0];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(q);
        if i + 1 == n {
            break;
        }
        let (va, vm, vb) = (curve.conormal(i), conormal_mid(i), curve.conormal(i + 1));
        let k1 = f(q, va);
        let k2 = f(axpy4(q, 0.5 * h, k1), vm);
        let k3 = f(axpy4(q, 0.5 * h, k2), vm);
        let k4 = f(axpy4(q, h, k3), vb);
        for c in 0..4 {
            q[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
    }
    out
}

/// Curvature profile, spherical curve and horizontal lift on one `s` grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElasticaSolution {
    pub ds: f64,
    pub s: Vec<f64>,
    pub k: Vec<f64>,
    /// `dk/ds`.
    pub dk: Vec<f64>,
    /// [`first_integral`] of `k` and `dk/dσ`.
    pub first_integral: Vec<f64>,
    pub gamma: Vec<Vec3>,
    pub tangent: Vec<Vec3>,
    pub lift: Vec<Quat>,
}

impl ElasticaSolution {
    /// The curve is parametrized by `s` with `|γ'| = 2`, so the unit-speed
    /// arclength of the elastica equation is `σ = 2s`. `k0` and `dk0` are
    /// `k` and `dk/dσ` at the start; the stored `dk` is `dk/ds`.
    pub fn compute(k0: f64, dk0: f64, length: f64, ds: f64) -> Result<Self> {
        let arc = solve_elastica(k0, dk0, 2.0 * length, 2.0 * ds)?;
        let profile = CurvatureProfile {
            ds: 0.5 * arc.ds,
            s: arc.s.iter().map(|x| 0.5 * x).collect(),
            dk: arc.dk.iter().map(|x| 2.0 * x).collect(),
            k: arc.k,
            first_integral: arc.first_integral,
        };
        let curve = frame_curve(&profile);
        let lift = hopf_lift(&curve);
        Ok(Self {
            ds: profile.ds,
            s: profile.s,
            k: profile.k,
            dk: profile.dk,
            first_integral: profile.first_integral,
            gamma: curve.gamma,
            tangent: curve.tangent,
            lift,
        })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// `γ̃'(s_i) = -γ̃ (γ × T)`.
    pub fn lift_velocity(&self, i: usize) -> Quat {
        let p = qmul(self.lift[i], pure(cross(self.gamma[i], self.tangent[i])));
        [-p[0], -p[1], -p[2], -p[3]]
    }

    /// `max |F(s) - F(0)| / length` for the first integral `F`.
    pub fn first_integral_drift(&self) -> f64 {
        let f0 = self.first_integral[0];
        let length = self.s[self.len() - 1];
        self.first_integral.iter().map(|f| (f - f0).abs()).fold(0.0, f64::max) / length
    }

    /// `max |⟨γ̃', i γ̃⟩|`.
    pub fn horizontality_defect(&self) -> f64 {
        (0..self.len())
            .map(|i| dot4(self.lift_velocity(i), qi(self.lift[i])).abs())
            .fold(0.0, f64::max)
    }

    /// `max |π(γ̃) - γ|`.
    pub fn projection_defect(&self) -> f64 {
        self.lift
            .iter()
            .zip(&self.gamma)
            .map(|(q, g)| {
                let p = hopf_raw(*q);
                ((p[0] - g[0]).powi(2) + (p[1] - g[1]).powi(2) + (p[2] - g[2]).powi(2)).sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// `max ||γ| - 1|` and `max ||γ̃| - 1|`.
    pub fn norm_defects(&self) -> (f64, f64) {
        let a = self
            .gamma
            .iter()
            .map(|g| (dot3(*g, *g).sqrt() - 1.0).abs())
            .fold(0.0, f64::max);
        let b = self
            .lift
            .iter()
            .map(|q| (dot4(*q, *q).sqrt() - 1.0).abs())
            .fold(0.0, f64::max);
        (a, b)
    }

    /// Index of the sample at arclength `s` (which must be on the grid).
    pub fn index_of(&self, s: f64) -> Result<usize> {
        let x = s / self.ds;
        let i = x.round();
        if (x - i).abs() > 1e-6 || i < 0.0 || i as usize >= self.len() {
            return Err(Error::OutOfRange(format!("s = {s} is not a grid point")));
        }
        Ok(i as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_to_anchor() {
        assert_eq!(hopf_project([1.0, 0.0, 0.0, 0.0]).unwrap(), [1.0, 0.0, 0.0]);
        assert!(hopf_project([2.0, 0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn fibers_collapse() {
        let q = {
            let v = [0.3, -0.5, 0.7, 0.1];
            let n = dot4(v, v).sqrt();
            [v[0] / n, v[1] / n, v[2] / n, v[3] / n]
        };
        let p = hopf_project(q).unwrap();
        for t in [0.4, 1.9, 3.3, 5.0] {
            let r = hopf_project(fiber(t, q)).unwrap();
            for c in 0..3 {
                assert!((r[c] - p[c]).abs() < 1e-12);
            }
        }
        // j = (0,0,1,0) maps to -i, not on the same fiber as 1
        let r = hopf_project([0.0, 0.0, 1.0, 0.0]).unwrap();
        assert!((r[0] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_curvature_is_equilibrium() {
        let p = solve_elastica(0.0, 0.0, 5.0, 1e-2).unwrap();
        assert!(p.k.iter().all(|k| *k == 0.0));
    }

    #[test]
    fn great_circle_lift() {
        let sol = ElasticaSolution::compute(0.0, 0.0, std::f64::consts::PI, 1e-3).unwrap();
        let last = sol.len() - 1;
        // speed 2 closes the great circle at s = π; the lift lands on -1
        assert!((sol.gamma[last][0] - 1.0).abs() < 1e-10);
        assert!((sol.lift[last][0] + 1.0).abs() < 1e-10);
        assert!(sol.horizontality_defect() < 1e-12);
    }

    #[test]
    fn constant_curvature_gives_small_circle() {
        // k'' + (k³+k)/2 = 0 is not solved by constant k ≠ 0, so the frame is
        // driven directly with a constant profile
        let k = 0.75;
        let n = 4001;
        let ds = 2.0 / (n - 1) as f64;
        let profile = CurvatureProfile {
            ds,
            s: (0..n).map(|i| i as f64 * ds).collect(),
            k: vec![k; n],
            dk: vec![0.0; n],
            first_integral: vec![first_integral(k, 0.0); n],
        };
        let c = frame_curve(&profile);
        // axis along γ×T + kγ, Euclidean radius 1/√(1+k²)
        let axis = {
            let nrm = cross(c.gamma[0], c.tangent[0]);
            let a = axpy3(nrm, k, c.gamma[0]);
            let l = dot3(a, a).sqrt();
            [a[0] / l, a[1] / l, a[2] / l]
        };
        let r = 1.0 / (1.0 + k * k).sqrt();
        let h = dot3(axis, c.gamma[0]);
        for g in &c.gamma {
            assert!((dot3(axis, *g) - h).abs() < 1e-10);
            let d = axpy3(*g, -dot3(axis, *g), axis);
            assert!((dot3(d, d).sqrt() - r).abs() < 1e-10);
        }
    }
}
