//! Finite differences, quadrature and interpolation on uniform 1-D axes.
//!
//! Interior points use centered 5-point stencils (4th order for both the first
//! and second derivative). The two points nearest a non-periodic edge use a
//! one-sided 6-point window with Fornberg weights.

/// Fornberg's algorithm: weights for derivatives `0..=order` at `x0` on nodes `xs`.
pub fn fornberg(x0: f64, xs: &[f64], order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

const EDGE_WINDOW: usize = 6;

/// A uniform axis with `n` samples at spacing `h`.
#[derive(Clone, Debug)]
pub struct Axis {
    pub n: usize,
    pub h: f64,
    pub periodic: bool,
    // One-sided weights for the first and last two samples, [d1, d2].
    head: [[Vec<f64>; 2]; 2],
    tail: [[Vec<f64>; 2]; 2],
}

const D1: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
const D2: [f64; 5] = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];

impl Axis {
    pub fn new(n: usize, h: f64, periodic: bool) -> Self {
        assert!(n >= EDGE_WINDOW, "axis needs at least {EDGE_WINDOW} samples");
        let nodes: Vec<f64> = (0..EDGE_WINDOW).map(|k| k as f64).collect();
        let side = |x0: f64| {
            let w = fornberg(x0, &nodes, 2);
            [w[1].clone(), w[2].clone()]
        };
        Self {
            n,
            h,
            periodic,
            head: [side(0.0), side(1.0)],
            tail: [side(4.0), side(5.0)],
        }
    }

    /// Calls `f(index, weight)` for every stencil node of derivative `order`
    /// (1 or 2) at sample `i`; weights already include the `h^-order` scale.
    #[inline]
    pub fn stencil(&self, i: usize, order: usize, mut f: impl FnMut(usize, f64)) {
        let scale = if order == 1 {
            1.0 / self.h
        } else {
            1.0 / (self.h * self.h)
        };
        let n = self.n;
        let centered = if order == 1 { &D1 } else { &D2 };
        if self.periodic || (i >= 2 && i + 2 < n) {
            for (k, w) in centered.iter().enumerate() {
                if *w != 0.0 {
                    let idx = (i + n + k - 2) % n;
                    f(idx, w * scale);
                }
            }
        } else if i < 2 {
            for (k, w) in self.head[i][order - 1].iter().enumerate() {
                f(k, w * scale);
            }
        } else {
            let start = n - EDGE_WINDOW;
            let local = i - start - 4;
            for (k, w) in self.tail[local][order - 1].iter().enumerate() {
                f(start + k, w * scale);
            }
        }
    }

    /// Quadrature weights: trapezoid if periodic, composite Simpson otherwise
    /// (with a 3/8 panel at the end when the interval count is odd).
    pub fn quadrature_weights(&self) -> Vec<f64> {
        let n = self.n;
        let h = self.h;
        if self.periodic {
            return vec![h; n];
        }
        let mut w = vec![0.0; n];
        let intervals = n - 1;
        let simpson_end = if intervals.is_multiple_of(2) { n - 1 } else { n - 4 };
        let mut k = 0;
        while k + 2 <= simpson_end {
            w[k] += h / 3.0;
            w[k + 1] += 4.0 * h / 3.0;
            w[k + 2] += h / 3.0;
            k += 2;
        }
        if intervals % 2 == 1 {
            let s = n - 4;
            for (o, c) in [1.0, 3.0, 3.0, 1.0].iter().enumerate() {
                w[s + o] += 3.0 * h / 8.0 * c;
            }
        }
        w
    }

    /// Cumulative integral `F[k] = ∫_{x_0}^{x_k} f` with 4th-order panels.
    /// For periodic axes the wrap-around samples are used by the stencils and
    /// `F` has `n + 1` entries (the last one being the full period).
    pub fn cumulative(&self, values: &[f64]) -> Vec<f64> {
        let n = self.n;
        let h = self.h;
        let panels = if self.periodic { n } else { n - 1 };
        let at = |k: isize| values[k.rem_euclid(n as isize) as usize];
        let mut out = Vec::with_capacity(panels + 1);
        out.push(0.0);
        let mut acc = 0.0;
        for j in 0..panels {
            let jj = j as isize;
            let panel = if self.periodic || (j >= 1 && j + 2 < n) {
                h / 24.0 * (-at(jj - 1) + 13.0 * at(jj) + 13.0 * at(jj + 1) - at(jj + 2))
            } else if j == 0 {
                h / 24.0 * (9.0 * at(0) + 19.0 * at(1) - 5.0 * at(2) + at(3))
            } else {
                let e = n as isize - 1;
                h / 24.0 * (at(e - 3) - 5.0 * at(e - 2) + 19.0 * at(e - 1) + 9.0 * at(e))
            };
            acc += panel;
            out.push(acc);
        }
        out
    }
}

/// 4-point Lagrange weights for evaluating at fractional index `x` on a
/// non-periodic axis of `n` samples; returns `(first_index, weights)`.
pub fn lagrange4(x: f64, n: usize) -> (usize, [f64; 4]) {
    let base = (x.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
    let nodes: Vec<f64> = (0..4).map(|k| (base + k) as f64).collect();
    let w = fornberg(x, &nodes, 0);
    (base, [w[0][0], w[0][1], w[0][2], w[0][3]])
}

/// Observed order of convergence from errors at spacings `h` and `h / ratio`.
pub fn observed_order(coarse: f64, fine: f64, ratio: f64) -> f64 {
    (coarse.abs() / fine.abs()).ln() / ratio.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn apply(axis: &Axis, f: &[f64], order: usize) -> Vec<f64> {
        (0..axis.n)
            .map(|i| {
                let mut s = 0.0;
                axis.stencil(i, order, |k, w| s += w * f[k]);
                s
            })
            .collect()
    }

    #[test]
    fn fornberg_reproduces_centered_stencil() {
        let w = fornberg(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 2);
        for k in 0..5 {
            assert!((w[1][k] - D1[k]).abs() < 1e-14);
            assert!((w[2][k] - D2[k]).abs() < 1e-14);
        }
    }

    #[test]
    fn derivatives_are_fourth_order() {
        let errs: Vec<(f64, f64)> = [32usize, 64]
            .iter()
            .map(|&n| {
                let h = 1.0 / (n - 1) as f64;
                let axis = Axis::new(n, h, false);
                let xs: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
                let f: Vec<f64> = xs.iter().map(|x| (2.0 * x).sin()).collect();
                let d1 = apply(&axis, &f, 1);
                let d2 = apply(&axis, &f, 2);
                let e1 = xs
                    .iter()
                    .zip(&d1)
                    .map(|(x, d)| (d - 2.0 * (2.0 * x).cos()).abs())
                    .fold(0.0, f64::max);
                let e2 = xs
                    .iter()
                    .zip(&d2)
                    .map(|(x, d)| (d + 4.0 * (2.0 * x).sin()).abs())
                    .fold(0.0, f64::max);
                (e1, e2)
            })
            .collect();
        let h_ratio = 63.0 / 31.0;
        assert!(observed_order(errs[0].0, errs[1].0, h_ratio) > 3.7);
        assert!(observed_order(errs[0].1, errs[1].1, h_ratio) > 3.7);
    }

    #[test]
    fn periodic_derivative_wraps() {
        let n = 64;
        let h = std::f64::consts::TAU / n as f64;
        let axis = Axis::new(n, h, true);
        let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).sin()).collect();
        let d = apply(&axis, &f, 1);
        for (i, v) in d.iter().enumerate() {
            assert!((v - (i as f64 * h).cos()).abs() < 1e-5);
        }
    }

    #[test]
    fn quadrature_exact_on_cubics() {
        for n in [9usize, 10] {
            let h = 2.0 / (n - 1) as f64;
            let w = Axis::new(n, h, false).quadrature_weights();
            let s: f64 = (0..n)
                .map(|i| {
                    let x = -1.0 + i as f64 * h;
                    w[i] * (x * x * x + 3.0 * x * x)
                })
                .sum();
            assert!((s - 2.0).abs() < 1e-13, "n = {n}: {s}");
        }
    }

    #[test]
    fn cumulative_is_fourth_order() {
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let f: Vec<f64> = (0..n).map(|i| (3.0 * i as f64 * h).exp()).collect();
            Axis::new(n, h, false)
                .cumulative(&f)
                .iter()
                .enumerate()
                .map(|(k, c)| (c - ((3.0 * k as f64 * h).exp() - 1.0) / 3.0).abs())
                .fold(0.0, f64::max)
        };
        let (coarse, fine) = (err(41), err(81));
        assert!(coarse < 1e-5);
        assert!(observed_order(coarse, fine, 2.0) > 3.8);
    }

    #[test]
    fn periodic_cumulative_closes() {
        let n = 32;
        let h = std::f64::consts::TAU / n as f64;
        let f: Vec<f64> = (0..n).map(|i| 1.0 + (i as f64 * h).cos()).collect();
        let cum = Axis::new(n, h, true).cumulative(&f);
        assert_eq!(cum.len(), n + 1);
        assert!((cum[n] - std::f64::consts::TAU).abs() < 1e-12);
        assert!((cum[n / 4] - (std::f64::consts::FRAC_PI_2 + 1.0)).abs() < 1e-4);
    }

    #[test]
    fn lagrange_is_exact_on_cubics() {
        let f = |x: f64| 1.0 - x + 0.5 * x * x * x;
        let (base, w) = lagrange4(5.3, 10);
        let s: f64 = (0..4).map(|k| w[k] * f((base + k) as f64)).sum();
        assert!((s - f(5.3)).abs() < 1e-12);
        let (base, _) = lagrange4(0.2, 10);
        assert_eq!(base, 0);
        let (base, _) = lagrange4(8.9, 10);
        assert_eq!(base, 6);
    }
}
