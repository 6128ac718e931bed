use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use willmore_core::catalogue::{apply_mobius, realize, MobiusMap, MobiusStep, SurfaceKind, SurfaceSpec};
use willmore_core::immersion::{area, build_frames, gauss_bonnet_residual, monotonicity_check, willmore_energy};
use willmore_core::{Error, ImmersionGrid};

fn energy(g: &ImmersionGrid) -> f64 {
    willmore_energy(g, &build_frames(g).unwrap())
}

fn surface(kind: SurfaceKind, nu: usize, nv: usize) -> ImmersionGrid {
    realize(&SurfaceSpec::new(kind, nu, nv)).unwrap()
}

#[test]
fn round_sphere_energy() {
    let w = energy(&surface(SurfaceKind::Sphere, 256, 128));
    assert!((w / (4.0 * PI) - 1.0).abs() < 1e-3, "W = {w}");
}

#[test]
fn sphere_energy_is_scale_free() {
    for r in [0.25, 4.0] {
        let g = realize(&SurfaceSpec::new(SurfaceKind::Sphere, 256, 128).with("radius", r)).unwrap();
        let f = build_frames(&g).unwrap();
        assert!((willmore_energy(&g, &f) / (4.0 * PI) - 1.0).abs() < 1e-3);
        assert!((area(&g, &f) / (4.0 * PI * r * r) - 1.0).abs() < 1e-3);
    }
}

#[test]
fn clifford_energy_in_r3_and_r4() {
    let target = 2.0 * PI * PI;
    let coarse = energy(&surface(SurfaceKind::CliffordTorusR3, 128, 128));
    let fine = energy(&surface(SurfaceKind::CliffordTorusR3, 512, 512));
    assert!((coarse / target - 1.0).abs() < 5e-3, "W = {coarse}");
    assert!((coarse / fine - 1.0).abs() < 5e-3);
    let flat = energy(&surface(SurfaceKind::CliffordTorusR4, 64, 64));
    assert!((flat / target - 1.0).abs() < 1e-5, "W = {flat}");
}

#[test]
fn gauss_bonnet_on_closed_surfaces() {
    let s = surface(SurfaceKind::Sphere, 256, 128);
    assert!(gauss_bonnet_residual(&s, &build_frames(&s).unwrap(), 2).unwrap() < 1e-2);
    let t = surface(SurfaceKind::CliffordTorusR3, 128, 128);
    let ft = build_frames(&t).unwrap();
    assert!(gauss_bonnet_residual(&t, &ft, 0).unwrap() < 1e-2);
    // wrong Euler characteristic is visible
    assert!(gauss_bonnet_residual(&t, &ft, 2).unwrap() > 0.1);
}

#[test]
fn energy_is_mobius_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for kind in [SurfaceKind::Sphere, SurfaceKind::CliffordTorusR4] {
        let g = surface(kind, 192, 128);
        let w0 = energy(&g);
        for _ in 0..20 {
            let map = MobiusMap::random_generic(&mut rng, &g, 4);
            let w = energy(&apply_mobius(&map, &g).unwrap());
            assert!(((w - w0) / w0).abs() < 5e-3, "{kind:?}: {w} vs {w0}");
        }
    }
}

#[test]
fn inversion_through_the_surface_is_rejected() {
    let g = surface(SurfaceKind::Sphere, 64, 32);
    let p = g.point(20, 3).to_vec();
    let map = MobiusMap::new(vec![MobiusStep::Inversion { center: p, radius: 1.0 }]);
    assert!(matches!(apply_mobius(&map, &g), Err(Error::NonGenericInversion { .. })));
}

#[test]
fn catenoid_band_monotonicity() {
    let g = surface(SurfaceKind::Catenoid, 64, 64);
    let r = monotonicity_check(&g, &build_frames(&g).unwrap()).unwrap();
    assert!(r.willmore < 1e-8);
    assert!(r.holds);
}
