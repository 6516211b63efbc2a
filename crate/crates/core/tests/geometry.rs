mod common;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{random_float_point, random_metric, random_point, rk4};
use tsankov::algebra::{int, rat, FnExpr, Matrix, Rational, Scalar, Value};
use tsankov::geometry::{
    christoffel, christoffel_generic, covariant_derivative_r, curvature_at, curvature_derivatives,
    curvature_generic, exp_inverse, geodesic, geodesic_residual, metric_at, ChristoffelKind,
    CoordTensor, Frame, Geodesic, PlaneWaveMetric, Quadrature,
};
use tsankov::model::validate_curvature_symmetries;

fn flat(a: usize, b: usize) -> PlaneWaveMetric {
    let c = (0..b)
        .map(|i| (0..b).map(|j| Value::Exact(int((i == j) as i64))).collect())
        .collect();
    PlaneWaveMetric::new(a, b, c, BTreeMap::new()).unwrap()
}

/// `a = 2, b = 2` with transcendental entries, for the float checks.
fn wavy() -> PlaneWaveMetric {
    let x = FnExpr::var;
    let mut psi = BTreeMap::new();
    psi.insert((0, 0), vec![x(1).sin(), x(0) * x(1)]);
    psi.insert(
        (0, 1),
        vec![(x(0) * FnExpr::rat(1, 2)).exp(), FnExpr::zero()],
    );
    psi.insert((1, 1), vec![FnExpr::zero(), x(0).cos() + x(1).pow(2)]);
    let c = vec![
        vec![Value::Exact(int(1)), Value::Exact(rat(1, 2))],
        vec![Value::Exact(rat(1, 2)), Value::Exact(int(-2))],
    ];
    PlaneWaveMetric::new(2, 2, c, psi).unwrap()
}

#[test]
fn flat_metric_is_flat() {
    let m = flat(2, 3);
    let p: Vec<Rational> = (1..=7).map(|k| rat(k, 3)).collect();
    let g = metric_at(&m, &p).unwrap();
    for i in 0..7 {
        for j in 0..7 {
            let want = (i < 2 && j == i + 2) || (j < 2 && i == j + 2) || (i >= 4 && i == j);
            assert_eq!(g.entry(i, j), &int(want as i64));
        }
    }
    assert!(christoffel(&m, &p, ChristoffelKind::Second)
        .unwrap()
        .is_zero());
    assert!(christoffel(&m, &p, ChristoffelKind::First)
        .unwrap()
        .is_zero());
    assert!(curvature_at(&m, &p).unwrap().is_zero());
    assert!(covariant_derivative_r(&m, &p, 1).unwrap().is_zero());
    let v: Vec<Rational> = (0..7).map(|k| rat(k - 3, 2)).collect();
    let q = geodesic(&m, &p, &v, &int(3), Quadrature::ExactPoly).unwrap();
    for i in 0..7 {
        assert_eq!(q[i], p[i].clone() + int(3) * v[i].clone());
    }
    let back = exp_inverse(&m, &p, &q, Quadrature::ExactPoly).unwrap();
    let diff: Vec<Rational> = q.iter().zip(&p).map(|(a, b)| a - b).collect();
    assert_eq!(back, diff);
}

#[test]
fn metric_json_roundtrip_and_validation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = random_metric(&mut rng, 3, 2, 3);
    let back = PlaneWaveMetric::from_json(&m.to_json()).unwrap();
    assert_eq!(back, m);
    assert_eq!(m.coord_names()[3], "x1*");

    let zero_c = vec![vec![Value::Exact(int(0))]];
    assert!(PlaneWaveMetric::new(1, 1, zero_c, BTreeMap::new()).is_err());
    let c = vec![vec![Value::Exact(int(1))]];
    let mut psi = BTreeMap::new();
    psi.insert((0, 0), vec![FnExpr::var(1)]);
    assert!(
        PlaneWaveMetric::new(1, 1, c.clone(), psi).is_err(),
        "psi may not depend on x*"
    );
    let mut psi = BTreeMap::new();
    psi.insert((0, 0), vec![FnExpr::var(0), FnExpr::var(0)]);
    assert!(
        PlaneWaveMetric::new(1, 1, c, psi).is_err(),
        "wrong psi length"
    );
}

#[test]
fn metric_determinant_is_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = random_metric(&mut rng, 3, 3, 3);
    let origin = vec![int(0); m.dim()];
    let d0 = metric_at(&m, &origin).unwrap().determinant();
    assert!(!d0.is_zero());
    for _ in 0..50 {
        let p = random_point(&mut rng, m.dim());
        assert_eq!(metric_at(&m, &p).unwrap().determinant(), d0);
    }
}

#[test]
fn christoffel_closed_form_matches_koszul() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (a, b) in [(1, 1), (2, 2), (3, 2), (2, 4)] {
        for _ in 0..3 {
            let m = random_metric(&mut rng, a, b, 3);
            let p = random_point(&mut rng, m.dim());
            let closed = christoffel(&m, &p, ChristoffelKind::Second).unwrap();
            let generic = christoffel_generic(&m, &p).unwrap();
            assert_eq!(closed, generic, "a={a} b={b}");
            for idx in closed.entries.keys() {
                // outputs only in x* and y, inputs never x*
                assert!(idx[0] >= a, "{idx:?}");
                assert!(idx[1..].iter().all(|&i| i < a || i >= 2 * a), "{idx:?}");
            }
        }
    }
}

#[test]
fn first_kind_symbols_are_lowered_second_kind() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let m = random_metric(&mut rng, 3, 2, 2);
    let p = random_point(&mut rng, m.dim());
    let first = christoffel(&m, &p, ChristoffelKind::First).unwrap();
    let second = christoffel(&m, &p, ChristoffelKind::Second).unwrap();
    let g = metric_at(&m, &p).unwrap();
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            for l in 0..n {
                let mut s = int(0);
                for k in 0..n {
                    s += second.get(&[k, i, j]) * g.entry(k, l);
                }
                assert_eq!(first.get(&[i, j, l]), s, "({i},{j},{l})");
            }
        }
    }
    // g(nabla_{x_i} d_{y_nu}, d_{x_k}) = psi_{ik nu}
    let x = &p[..3];
    for i in 0..3 {
        for k in 0..3 {
            for nu in 0..2 {
                let want = m
                    .psi(i, k, nu)
                    .map(|e| e.eval(x).unwrap())
                    .unwrap_or_else(|| int(0));
                assert_eq!(first.get(&[i, 6 + nu, k]), want);
                assert_eq!(first.get(&[i, k, 6 + nu]), -want);
            }
        }
    }
}

#[test]
fn christoffel_against_finite_differences() {
    let m = wavy();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let n = m.dim();
    let h = 1e-5;
    for _ in 0..5 {
        let p = random_float_point(&mut rng, n, 1.5);
        let dg: Vec<Matrix<f64>> = (0..n)
            .map(|q| {
                let mut plus = p.clone();
                let mut minus = p.clone();
                plus[q] += h;
                minus[q] -= h;
                let gp = metric_at(&m, &plus).unwrap();
                let gm = metric_at(&m, &minus).unwrap();
                gp.gram().sub(gm.gram()).scale(&(0.5 / h))
            })
            .collect();
        let ginv = metric_at(&m, &p).unwrap().gram().inverse().unwrap();
        let closed = christoffel(&m, &p, ChristoffelKind::Second).unwrap();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += ginv[(k, l)] * 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                    }
                    let c = closed.get(&[k, i, j]);
                    assert!(
                        (c - s).abs() <= 1e-7 * c.abs().max(1.0),
                        "[{k},{i},{j}] {c} vs {s}"
                    );
                }
            }
        }
    }
}

#[test]
fn curvature_closed_form_matches_generic() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for (a, b) in [(1, 2), (2, 2), (2, 3), (3, 2)] {
        for _ in 0..3 {
            let m = random_metric(&mut rng, a, b, 3);
            let p = random_point(&mut rng, m.dim());
            let r = curvature_at(&m, &p).unwrap();
            assert_eq!(r, curvature_generic(&m, &p).unwrap(), "a={a} b={b}");
            let t = r.to_curvature().unwrap();
            assert!(validate_curvature_symmetries(&t).holds());
            for idx in r.entries.keys() {
                assert!(
                    idx.iter().all(|&i| i < a || i >= 2 * a),
                    "x* slot in {idx:?}"
                );
                assert!(
                    idx.iter().filter(|&&i| i >= 2 * a).count() <= 1,
                    "two y slots in {idx:?}"
                );
            }
        }
    }
}

#[test]
fn curvature_float_matches_generic() {
    let m = wavy();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = random_float_point(&mut rng, m.dim(), 1.0);
    let r = curvature_at(&m, &p).unwrap();
    let g = curvature_generic(&m, &p).unwrap();
    for idx in r.entries.keys().chain(g.entries.keys()) {
        assert!(r.get(idx).approx_eq(&g.get(idx), 1e-12), "{idx:?}");
    }
    assert!(validate_curvature_symmetries(&r.to_curvature().unwrap()).holds());
}

#[test]
fn second_bianchi_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..3 {
        let m = random_metric(&mut rng, 3, 2, 3);
        let p = random_point(&mut rng, m.dim());
        let d = covariant_derivative_r(&m, &p, 1).unwrap();
        let n = m.dim();
        let mut keys: Vec<[usize; 5]> = Vec::new();
        for idx in d.entries.keys() {
            let [i, j, k, l, q] = [idx[0], idx[1], idx[2], idx[3], idx[4]];
            keys.extend([[i, j, k, l, q], [i, j, l, q, k], [i, j, q, k, l]]);
        }
        for [i, j, k, l, q] in keys {
            let s = d.get(&[i, j, k, l, q]) + d.get(&[i, j, l, q, k]) + d.get(&[i, j, q, k, l]);
            assert!(s.is_zero(), "({i},{j},{k},{l};{q}) of {n}");
        }
        // nabla R keeps the algebraic symmetries in its first four slots
        for (idx, v) in &d.entries {
            let swapped = [idx[2], idx[3], idx[0], idx[1], idx[4]];
            assert_eq!(&d.get(&swapped), v);
            let anti = [idx[1], idx[0], idx[2], idx[3], idx[4]];
            assert_eq!(d.get(&anti), -v.clone());
        }
    }
}

#[test]
fn nabla_r_derivative_order_is_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = random_metric(&mut rng, 2, 2, 3);
    let p = random_point(&mut rng, m.dim());
    let all = curvature_derivatives(&m, &p, 2).unwrap();
    assert_eq!(all[0], curvature_at(&m, &p).unwrap());
    assert_eq!(all[1], covariant_derivative_r(&m, &p, 1).unwrap());
    assert_eq!(all[2], covariant_derivative_r(&m, &p, 2).unwrap());
    assert_eq!(all[2].rank(), 6);
    let f = flat(2, 2);
    assert!(covariant_derivative_r(&f, &p, 2).unwrap().is_zero());
}

#[test]
fn contraction_with_frames() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let m = random_metric(&mut rng, 3, 2, 2);
    let p = random_point(&mut rng, m.dim());
    let r = curvature_at(&m, &p).unwrap();
    let coord = Frame::<Rational>::coordinate(m.coord_names());
    for (idx, v) in r.entries.iter().take(20) {
        let labels: Vec<&str> = idx.iter().map(|&i| coord.labels()[i].as_str()).collect();
        assert_eq!(&r.contract_frame(&coord, &labels).unwrap(), v);
        let mut vecs: Vec<Vec<Rational>> =
            idx.iter().map(|&i| coord.vectors()[i].clone()).collect();
        vecs[2] = vecs[2].iter().map(|x| x * int(2)).collect();
        let refs: Vec<&[Rational]> = vecs.iter().map(Vec::as_slice).collect();
        assert_eq!(r.contract(&refs).unwrap(), v * int(2));
    }
    assert!(r.contract(&[]).is_err());
    let dup = vec![coord.vectors()[0].clone(), coord.vectors()[0].clone()];
    assert!(Frame::new(dup, vec!["u".into(), "v".into()]).is_err());
}

#[test]
fn coord_tensor_symmetry_check() {
    let mut t = CoordTensor::<Rational>::new(4, 0, 4, 0);
    t.set(vec![0, 1, 2, 3], int(1));
    assert!(t.to_curvature().is_err());
    t.set(vec![1, 0, 2, 3], int(-1));
    t.set(vec![0, 1, 3, 2], int(-1));
    t.set(vec![1, 0, 3, 2], int(1));
    t.set(vec![2, 3, 0, 1], int(1));
    t.set(vec![3, 2, 0, 1], int(-1));
    t.set(vec![2, 3, 1, 0], int(-1));
    t.set(vec![3, 2, 1, 0], int(1));
    assert!(t.to_curvature().is_ok());
}

#[test]
fn exact_geodesics_solve_the_equation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let m = random_metric(&mut rng, 3, 2, 3);
        let p = random_point(&mut rng, m.dim());
        let v = random_point(&mut rng, m.dim());
        let ts: Vec<Rational> = (0..10).map(|k| rat(k, 3) - int(1)).collect();
        let res = geodesic_residual(&m, &p, &v, &ts, Quadrature::ExactPoly).unwrap();
        assert!(res.iter().flatten().all(Scalar::is_zero));
        let g = Geodesic::new(&m, &p, &v, Quadrature::ExactPoly).unwrap();
        for t in &ts {
            let [x, xd, _] = g.state(t).unwrap();
            for i in 0..3 {
                assert_eq!(x[i], p[i].clone() + t.clone() * v[i].clone());
                assert_eq!(xd[i], v[i]);
            }
        }
        assert_eq!(g.at(&int(0)).unwrap(), p);
        let zero = vec![int(0); m.dim()];
        assert_eq!(
            geodesic(&m, &p, &zero, &int(5), Quadrature::ExactPoly).unwrap(),
            p
        );
    }
}

#[test]
fn adaptive_geodesics_agree_with_exact_and_rk4() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let m = random_metric(&mut rng, 3, 2, 2);
    let pr = random_point(&mut rng, m.dim());
    let vr = random_point(&mut rng, m.dim());
    let p: Vec<f64> = pr.iter().map(Scalar::to_f64).collect();
    let v: Vec<f64> = vr.iter().map(|x| x.to_f64() / 4.0).collect();
    let vq: Vec<Rational> = vr.iter().map(|x| x / int(4)).collect();
    let exact = geodesic(&m, &pr, &vq, &int(1), Quadrature::ExactPoly).unwrap();
    let adaptive = geodesic(&m, &p, &v, &1.0, Quadrature::Adaptive).unwrap();
    let oracle = rk4(&m, &p, &v, 1.0, 400).0;
    for i in 0..m.dim() {
        let e = exact[i].to_f64();
        assert!(
            (e - adaptive[i]).abs() <= 1e-10 * e.abs().max(1.0),
            "{i}: {e} vs {}",
            adaptive[i]
        );
        assert!(
            (e - oracle[i]).abs() <= 1e-8 * e.abs().max(1.0),
            "{i}: {e} vs {}",
            oracle[i]
        );
    }
    assert!(geodesic(&m, &pr, &vq, &int(1), Quadrature::Adaptive).is_err());
}

#[test]
fn transcendental_geodesics_against_rk4() {
    let m = wavy();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    assert!(Geodesic::new(&m, &[0.0; 6], &[0.0; 6], Quadrature::ExactPoly).is_err());
    for _ in 0..3 {
        let p = random_float_point(&mut rng, 6, 1.0);
        let v = random_float_point(&mut rng, 6, 0.5);
        let q = geodesic(&m, &p, &v, &1.0, Quadrature::Adaptive).unwrap();
        let oracle = rk4(&m, &p, &v, 1.0, 400).0;
        for i in 0..6 {
            assert!(
                (q[i] - oracle[i]).abs() <= 1e-8 * q[i].abs().max(1.0),
                "{i}: {} vs {}",
                q[i],
                oracle[i]
            );
        }
        let ts: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
        let res = geodesic_residual(&m, &p, &v, &ts, Quadrature::Adaptive).unwrap();
        let worst = res.iter().flatten().fold(0.0f64, |a, b| a.max(b.abs()));
        assert!(worst < 1e-9, "residual {worst}");
        let back = exp_inverse(&m, &p, &q, Quadrature::Adaptive).unwrap();
        for i in 0..6 {
            assert!(
                (back[i] - v[i]).abs() < 1e-9,
                "{i}: {} vs {}",
                back[i],
                v[i]
            );
        }
    }
}

#[test]
fn exact_exp_inverse_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..5 {
        let m = random_metric(&mut rng, 3, 3, 3);
        let p = random_point(&mut rng, m.dim());
        let v = random_point(&mut rng, m.dim());
        let q = geodesic(&m, &p, &v, &int(1), Quadrature::ExactPoly).unwrap();
        assert_eq!(exp_inverse(&m, &p, &q, Quadrature::ExactPoly).unwrap(), v);
        assert_eq!(
            exp_inverse(&m, &p, &p, Quadrature::ExactPoly).unwrap(),
            vec![int(0); m.dim()]
        );
    }
}
