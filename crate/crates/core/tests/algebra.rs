use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use willmore_core::multivec::{blades, project_normal, MultiVector, SimpleUnitNormal};

const TOL: f64 = 1e-12;

fn basis(m: usize, mask: u8) -> MultiVector {
    MultiVector::from_blades(m, mask.count_ones() as usize, [(mask, 1.0)]).unwrap()
}

fn vector(v: &[f64]) -> MultiVector {
    MultiVector::vector(v).unwrap()
}

fn random_mv(rng: &mut ChaCha8Rng, m: usize, p: usize) -> MultiVector {
    MultiVector::from_blades(m, p, blades(m, p).iter().map(|&b| (b, rng.gen_range(-1.0..1.0)))).unwrap()
}

fn diff(a: &MultiVector, b: &MultiVector) -> f64 {
    (*a - *b).max_abs()
}

// α ⌐ β read off from ⟨α ⌐ β, γ⟩ = ⟨α, β ∧ γ⟩ over basis γ.
fn contract_oracle(a: &MultiVector, b: &MultiVector) -> MultiVector {
    let m = a.dim();
    let g = a.grade() - b.grade();
    let terms = blades(m, g)
        .iter()
        .map(|&c| (c, a.inner(&b.wedge(&basis(m, c)).unwrap()).unwrap()));
    MultiVector::from_blades(m, g, terms.collect::<Vec<_>>()).unwrap()
}

// α • e_B expanded by peeling the highest factor of e_B, where the library
// peels the lowest.
fn bullet_oracle(a: &MultiVector, b: u8) -> MultiVector {
    let m = a.dim();
    let q = b.count_ones() as usize;
    let last = 1u8 << (7 - b.leading_zeros());
    let head = contract_oracle(a, &basis(m, last));
    if q == 1 {
        return head;
    }
    let rest = b & !last;
    let lhs = bullet_oracle(a, rest).wedge(&basis(m, last)).unwrap();
    let sign = if (q - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    lhs + head.wedge(&basis(m, rest)).unwrap() * sign
}

#[test]
fn hodge_twice_sign_law() {
    for m in 3..=6 {
        for p in 0..=m {
            let sign = if (p * (m - p)) % 2 == 0 { 1.0 } else { -1.0 };
            for &a in blades(m, p) {
                let e = basis(m, a);
                assert!(diff(&e.hodge().hodge(), &(e * sign)) < TOL, "m={m} blade {a:b}");
            }
        }
    }
}

#[test]
fn hodge_defining_identity_over_basis() {
    for m in 3..=6 {
        let vol = MultiVector::volume(m).unwrap();
        for p in 0..=m {
            for &a in blades(m, p) {
                for &b in blades(m, p) {
                    let lhs = basis(m, b).wedge(&basis(m, a).hodge()).unwrap();
                    let rhs = vol * if a == b { 1.0 } else { 0.0 };
                    assert!(diff(&lhs, &rhs) < TOL);
                }
            }
        }
    }
}

#[test]
fn contraction_is_adjoint_over_basis() {
    for m in 3..=6 {
        for p in 0..=m {
            for q in 0..=p {
                for &a in blades(m, p) {
                    for &b in blades(m, q) {
                        let c = basis(m, a).contract(&basis(m, b)).unwrap();
                        assert!(diff(&c, &contract_oracle(&basis(m, a), &basis(m, b))) < TOL);
                    }
                }
            }
        }
    }
}

#[test]
fn contraction_is_adjoint_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 3..=6 {
        for p in 0..=m {
            for q in 0..=p {
                for _ in 0..1000 {
                    let (a, b, c) = (
                        random_mv(&mut rng, m, p),
                        random_mv(&mut rng, m, q),
                        random_mv(&mut rng, m, p - q),
                    );
                    let lhs = a.contract(&b).unwrap().inner(&c).unwrap();
                    let rhs = a.inner(&b.wedge(&c).unwrap()).unwrap();
                    assert!((lhs - rhs).abs() < TOL * (1.0 + rhs.abs()), "m={m} p={p} q={q}");
                }
            }
        }
    }
}

#[test]
fn bullet_agrees_with_second_expansion() {
    for m in 3..=6 {
        for p in 1..=m {
            for q in 1..=m {
                if p + q - 2 > m {
                    continue;
                }
                for &a in blades(m, p) {
                    for &b in blades(m, q) {
                        let got = basis(m, a).bullet(&basis(m, b)).unwrap();
                        assert!(diff(&got, &bullet_oracle(&basis(m, a), b)) < TOL, "m={m} {a:b} • {b:b}");
                    }
                }
            }
        }
    }
}

#[test]
fn bullet_leibniz_over_basis() {
    for m in 3..=6 {
        for p in 1..=m {
            for q in 1..m {
                for r in 1..=m - q {
                    if p + q + r - 2 > m {
                        continue;
                    }
                    let sign = if (q * r) % 2 == 0 { 1.0 } else { -1.0 };
                    for &a in blades(m, p) {
                        let a = basis(m, a);
                        for &b in blades(m, q) {
                            for &c in blades(m, r) {
                                let (b, c) = (basis(m, b), basis(m, c));
                                let lhs = a.bullet(&b.wedge(&c).unwrap()).unwrap();
                                let rhs = a.bullet(&b).unwrap().wedge(&c).unwrap()
                                    + a.bullet(&c).unwrap().wedge(&b).unwrap() * sign;
                                assert!(diff(&lhs, &rhs) < TOL);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn bullet_on_two_planes() {
    let m = 3;
    let e12 = basis(m, 0b011);
    let e13 = basis(m, 0b101);
    // e12 • (e1 ∧ e3) = (e12 ⌐ e1) ∧ e3 - (e12 ⌐ e3) ∧ e1 = e2 ∧ e3
    let got = e12.bullet(&e13).unwrap();
    assert!(diff(&got, &basis(m, 0b110)) < TOL);
    assert_eq!(got.grade(), 2);
}

fn twisted(m: usize) -> f64 {
    if (m - 1).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

// ⋆(n ⌐ N) = (-1)^{m-1} e1 ∧ e2 ∧ N, and (-1)^{m-1} ⋆(n ⌐ N) ⌐ u = -(Ju) ∧ N
// with J e1 = -e2, J e2 = e1.
fn check_normal_identities(e1: &MultiVector, e2: &MultiVector, big_n: &MultiVector) {
    let m = e1.dim();
    let s = twisted(m);
    let n = e1.wedge(e2).unwrap().hodge();
    let lhs = n.contract(big_n).unwrap().hodge();
    let rhs = e1.wedge(e2).unwrap().wedge(big_n).unwrap() * s;
    assert!(diff(&lhs, &rhs) < TOL, "plane identity, m = {m}");
    for (u, ju) in [(*e1, -*e2), (*e2, *e1)] {
        let lhs = lhs.contract(&u).unwrap() * s;
        let rhs = -ju.wedge(big_n).unwrap();
        assert!(diff(&lhs, &rhs) < TOL, "rotation identity, m = {m}");
    }
}

#[test]
fn normal_identities_over_basis() {
    for m in 3..=6 {
        for a in 0..m {
            for b in 0..m {
                if a == b {
                    continue;
                }
                for c in (0..m).filter(|c| *c != a && *c != b) {
                    check_normal_identities(&basis(m, 1 << a), &basis(m, 1 << b), &basis(m, 1 << c));
                }
            }
        }
    }
}

fn orthonormal(rng: &mut ChaCha8Rng, m: usize, k: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    while out.len() < k {
        let mut v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for u in &out {
            let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(a, b)| *a -= d * b);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            out.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_identities_on_random_frames(seed in any::<u64>(), m in 3usize..=6, scale in 0.1f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = orthonormal(&mut rng, m, m);
        let (e1, e2) = (vector(&f[0]), vector(&f[1]));
        let mut big_n = MultiVector::zero(m, 1).unwrap();
        for v in &f[2..] {
            big_n += vector(v) * (scale * rng.gen_range(-1.0..1.0));
        }
        check_normal_identities(&e1, &e2, &big_n);
    }

    #[test]
    fn projection_is_normal_and_idempotent(seed in any::<u64>(), m in 3usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = orthonormal(&mut rng, m, 2);
        let (e1, e2) = (vector(&f[0]), vector(&f[1]));
        let n = SimpleUnitNormal::from_tangents(&e1, &e2).unwrap();
        let w = random_mv(&mut rng, m, 1);
        let pw = project_normal(&n, &w).unwrap();
        prop_assert!(diff(&project_normal(&n, &pw).unwrap(), &pw) < TOL);
        prop_assert!(pw.inner(&e1).unwrap().abs() < TOL);
        prop_assert!(pw.inner(&e2).unwrap().abs() < TOL);
        // w - π(w) is tangent
        let t = w - pw;
        let back = e1 * t.inner(&e1).unwrap() + e2 * t.inner(&e2).unwrap();
        prop_assert!(diff(&t, &back) < TOL);
    }

    #[test]
    fn projection_has_rank_m_minus_two(seed in any::<u64>(), m in 3usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = orthonormal(&mut rng, m, 2);
        let n = SimpleUnitNormal::from_tangents(&vector(&f[0]), &vector(&f[1])).unwrap();
        let p = n.projector();
        let trace: f64 = (0..m).map(|i| p[i][i]).sum();
        prop_assert!((trace - (m - 2) as f64).abs() < TOL);
        for i in 0..m {
            for j in 0..m {
                let pp: f64 = (0..m).map(|k| p[i][k] * p[k][j]).sum();
                prop_assert!((pp - p[i][j]).abs() < TOL);
            }
        }
    }

    #[test]
    fn wedge_is_graded_commutative(seed in any::<u64>(), m in 3usize..=6, p in 0usize..=3, q in 0usize..=3) {
        prop_assume!(p + q <= m);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = (random_mv(&mut rng, m, p), random_mv(&mut rng, m, q));
        let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!(diff(&a.wedge(&b).unwrap(), &(b.wedge(&a).unwrap() * sign)) < TOL);
    }
}

#[test]
fn m3_projection_matches_normal_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let f = orthonormal(&mut rng, 3, 3);
        let n = SimpleUnitNormal::from_tangents(&vector(&f[0]), &vector(&f[1])).unwrap();
        let w = random_mv(&mut rng, 3, 1);
        let nv = n.as_multivector();
        let expect = *nv * w.inner(nv).unwrap();
        assert!(diff(&project_normal(&n, &w).unwrap(), &expect) < TOL);
    }
}
