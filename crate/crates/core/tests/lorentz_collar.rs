use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use willmore_core::collar::{cylinder_to_annulus, torus_cylinder_chart, CollarChart};
use willmore_core::fd::observed_order;
use willmore_core::lorentz::{
    duality_bound, inverse_radius_l21, inverse_radius_l2inf, lorentz_norm, lp_norm, nesting_constant, verify_r1,
    verify_r2, weak_norm_refinement, MeasuredSample,
};

fn sample() -> impl Strategy<Value = MeasuredSample> {
    prop::collection::vec((0.0f64..10.0, 0.0f64..1.0), 1..60)
        .prop_map(|v| MeasuredSample::new(v.iter().map(|x| x.0).collect(), v.iter().map(|x| x.1).collect()).unwrap())
}

proptest! {
    #[test]
    fn diagonal_lorentz_is_lebesgue(s in sample(), p in 1.05f64..6.0) {
        let a = lorentz_norm(&s, p, p).unwrap();
        prop_assert!((a - lp_norm(&s, p)).abs() <= 1e-10 * (1.0 + a));
    }

    #[test]
    fn permuting_samples_changes_nothing(s in sample(), p in 1.05f64..6.0, q in 1.0f64..8.0, rot in 0usize..60) {
        let n = s.values.len();
        let k = rot % n;
        let mut v = s.values.clone();
        let mut w = s.weights.clone();
        v.rotate_left(k);
        w.rotate_left(k);
        v.reverse();
        w.reverse();
        let t = MeasuredSample::new(v, w).unwrap();
        for q in [1.0, q, f64::INFINITY] {
            prop_assert_eq!(lorentz_norm(&s, p, q).unwrap(), lorentz_norm(&t, p, q).unwrap());
        }
    }

    #[test]
    fn second_index_nests(s in sample(), p in 1.05f64..6.0, q1 in 1.0f64..4.0, dq in 0.0f64..4.0) {
        let q2 = q1 + dq;
        let a = lorentz_norm(&s, p, q1).unwrap();
        let b = lorentz_norm(&s, p, q2).unwrap();
        let c = lorentz_norm(&s, p, f64::INFINITY).unwrap();
        prop_assert!(b <= nesting_constant(p, q1, q2) * a * (1.0 + 1e-12));
        prop_assert!(c <= nesting_constant(p, q2, f64::INFINITY) * b * (1.0 + 1e-12));
        prop_assert!(c <= nesting_constant(p, 1.0, f64::INFINITY) * lorentz_norm(&s, p, 1.0).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn norms_scale_linearly(s in sample(), p in 1.05f64..6.0, q in 1.0f64..8.0, lam in 0.01f64..100.0) {
        let t = MeasuredSample::new(s.values.iter().map(|v| v * lam).collect(), s.weights.clone()).unwrap();
        let (a, b) = (lorentz_norm(&s, p, q).unwrap(), lorentz_norm(&t, p, q).unwrap());
        prop_assert!((b - lam * a).abs() <= 1e-12 * b.max(1.0));
    }
}

#[test]
fn weak_norm_of_inverse_radius_is_stable() {
    let r = verify_r1(&[128, 256, 512]).unwrap();
    assert!(r.max_drift < 0.05);
    for row in &r.rows {
        assert!((row.norm - PI.sqrt()).abs() < 1e-12);
    }
    let blow = weak_norm_refinement(1.5, &[128, 256, 512]).unwrap();
    assert!(blow.rows.windows(2).all(|w| w[1].norm > 1.3 * w[0].norm));
    let flat = weak_norm_refinement(0.0, &[128, 256, 512]).unwrap();
    assert!(flat.rows.iter().all(|r| (r.norm - PI.sqrt()).abs() < 1e-12));
}

#[test]
fn strong_norm_grows_like_log() {
    let t = verify_r2(&[1e-1, 1e-2, 1e-3]).unwrap();
    assert!(t.spread < 10.0);
    for row in &t.rows {
        assert!((row.norm / row.exact - 1.0).abs() < 1e-3, "{row:?}");
    }
    // the ratio tends to 2√π
    let small = verify_r2(&[1e-8]).unwrap().rows[0].exact / 1e-8f64.ln().abs();
    assert!((small - 2.0 * PI.sqrt()).abs() < 0.2);
    assert!(verify_r2(&[0.3]).is_err());
    assert!(verify_r2(&[0.2499]).unwrap().rows[0].ratio > 0.0);
}

#[test]
fn duality_inequality() {
    for r in [0.1, 0.01] {
        let one = duality_bound(|_| 1.0, r, 4000).unwrap();
        assert!((one.lhs - (1.0 - r)).abs() < 1e-9);
        // ‖1‖_{2,1} = 2|A|^{1/2} and ‖1/ρ‖_{2,∞} = |A|^{1/2}
        let area = PI * (1.0 - r * r);
        assert!((one.rhs / (2.0 * area) - 1.0).abs() < 1e-3);
        assert!(one.holds);
        let inv = duality_bound(|x| 1.0 / x, r, 4000).unwrap();
        assert!((inv.lhs - r.ln().abs()).abs() < 1e-4);
        assert!((inv.rhs / (inverse_radius_l21(r) * inverse_radius_l2inf(r)) - 1.0).abs() < 1e-3);
        assert!(inv.holds);
        let zero = duality_bound(|_| 0.0, r, 100).unwrap();
        assert!(zero.lhs == 0.0 && zero.rhs == 0.0 && zero.holds);
    }
    for f in [
        |x: f64| x.sin(),
        |x: f64| (3.0 * x).cos() / x.sqrt(),
        |x: f64| (-x).exp(),
    ] {
        assert!(duality_bound(f, 0.05, 2000).unwrap().holds);
    }
}

#[test]
fn collar_geodesic_length() {
    for l in [1.0, 0.1, 0.01] {
        let c = CollarChart::new(l).unwrap();
        assert!((c.geodesic_length() - l).abs() < 1e-12);
        assert!((c.circle_length(c.geodesic_t(), 256).unwrap() - l).abs() < 1e-12);
        for t in [c.t_min + 0.1 * (c.t_max - c.t_min), c.t_max - 0.3] {
            assert!(c.circle_length(t, 256).unwrap() > l);
        }
        assert!(c.is_thin());
    }
    assert!(!CollarChart::new(2.0).unwrap().is_thin());
    assert!(CollarChart::new(0.0).is_err());
}

#[test]
fn collar_ends_dwarf_the_geodesic() {
    let mut last = 0.0;
    for l in [0.5, 0.1, 0.02] {
        let c = CollarChart::new(l).unwrap();
        let edge = c.metric_factor(c.t_min + 1e-9).unwrap();
        // sin(arctan(sinh(l/2))) = tanh(l/2), so the edge factor tends to 1/π
        assert!((edge - l / (TAU * (0.5 * l).tanh())).abs() < 1e-6 * edge);
        assert!((edge - 1.0 / PI).abs() < l);
        let ratio = edge / c.metric_factor(c.geodesic_t()).unwrap();
        assert!(ratio > last && ratio > 1.9 / l);
        last = ratio;
    }
}

#[test]
fn collar_metric_has_curvature_minus_one() {
    let c = CollarChart::new(0.1).unwrap();
    let err = |n: usize| {
        c.discrete_curvature(n)
            .iter()
            .map(|(_, k)| (k + 1.0).abs())
            .fold(0.0, f64::max)
    };
    let (a, b) = (err(801), err(1601));
    assert!(b < 1e-3);
    assert!(observed_order(a, b, 2.0) > 1.8);
    let n = 801;
    let h = (c.t_max - c.t_min) / (n + 1) as f64;
    assert!((c.argmin_factor(n) - c.geodesic_t()).abs() <= h);
}

#[test]
fn collar_to_annulus() {
    for l in [0.5, 0.1] {
        let c = CollarChart::new(l).unwrap();
        let a = cylinder_to_annulus(&c);
        assert!((a.inner_radius - (-1.0 / l).exp()).abs() < 1e-15);
        assert!((a.geodesic_radius / (-0.5 / l).exp() - 1.0).abs() < 1e-12);
        assert!((a.modulus - 1.0 / (TAU * l)).abs() < 1e-12);
        assert!((a.radius(c.t_min) - 1.0).abs() < 1e-15);
        assert!((a.radius(c.t_max) / a.inner_radius - 1.0).abs() < 1e-12);
    }
}

#[test]
fn torus_chart_is_conformal() {
    for l in [1.0, 0.2, 0.05] {
        let c = torus_cylinder_chart(l).unwrap();
        assert!(c.conformal_defect(48, 1e-3) < 1e-10);
        let far = c.map(0.0, c.inner_radius());
        assert!((far[2] - (l / TAU).sqrt()).abs() < 1e-14);
    }
}
