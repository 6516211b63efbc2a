use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

use common::{
    a, combo, e, inner_product_table, jacobi_table, jt, m, random_sparse_model, symmetry_pairings,
};

use tsankov::algebra::{int, rat, Matrix, Rational, Scalar, Signature};
use tsankov::model::m14::{self, index};
use tsankov::model::{
    check_property, invariant_spans, jacobi, jacobi_polarized, skew, validate_curvature_symmetries,
    Model0, OpSpec, Property, WitnessExpr,
};

#[test]
fn signature_and_symmetries() {
    let model = m();
    assert_eq!(model.form().signature().unwrap(), Signature { p: 8, q: 6 });
    assert!(validate_curvature_symmetries(model.tensor()).holds());
}

#[test]
fn listed_components() {
    let model = m();
    let g = model.form();
    assert_eq!(g.eval(&e("a1"), &e("a1*")), int(1));
    assert_eq!(g.eval(&e("b41"), &e("b42")), rat(1, 4));
    let t = model.tensor();
    let i = |l: &str| index(l).unwrap();
    assert_eq!(t.get([i("a1"), i("a2"), i("a3"), i("b41")]), rat(-1, 2));
    assert_eq!(t.get([i("a3"), i("a2"), i("a2"), i("b32")]), int(1));
    for k in 0..14 {
        for l in 0..14 {
            assert_eq!(t.get([0, 0, k, l]), int(0));
        }
    }
}

#[test]
fn beta4_duals() {
    let model = m();
    let ginv = model.inverse_gram();
    let (b41, b42) = (index("b41").unwrap(), index("b42").unwrap());
    assert_eq!(ginv[(b41, b41)], rat(-8, 3));
    assert_eq!(ginv[(b41, b42)], rat(-4, 3));
    assert_eq!(ginv[(b42, b42)], rat(-8, 3));
}

#[test]
fn jacobi_examples() {
    let model = m();
    assert_eq!(jacobi(&model, &a(2)).mul_vec(&a(1)), e("b11"));
    assert_eq!(jacobi(&model, &a(3)).mul_vec(&e("b11")), e("a1*"));
    assert_eq!(
        jacobi(&model, &a(3)).mul_vec(&jacobi(&model, &a(2)).mul_vec(&a(1))),
        e("a1*")
    );
    assert_eq!(jt(&model, 1, 3, 2), e("b42"));
    assert_eq!(
        jt(&model, 1, 2, 3),
        combo(&[("b41", int(-1)), ("b42", int(-1))])
    );
}

#[test]
fn skew_examples() {
    let model = m();
    let a12 = skew(&model, &a(1), &a(2));
    let a13 = skew(&model, &a(1), &a(3));
    assert_eq!(a13.mul_vec(&a(3)), e("b12"));
    assert_eq!(a12.mul_vec(&a13.mul_vec(&a(3))), combo(&[("a2*", int(-1))]));
    assert_eq!(
        a13.mul_vec(&a12.mul_vec(&a(3))),
        combo(&[("a2*", rat(1, 3))])
    );
    assert!(skew(&model, &a(2), &a(2)).is_zero());
}

#[test]
fn jacobi_component_table() {
    let model = m();
    let listed = jacobi_table();
    assert_eq!(listed.len(), 15);
    for ((i, j, k), want) in &listed {
        assert_eq!(&jt(&model, *i, *j, *k), want, "J_{i}{j}{k}");
        assert_eq!(&jt(&model, *j, *i, *k), want, "J_{j}{i}{k}");
    }
    // every unlisted J_ijk vanishes
    for i in 1..=3 {
        for j in i..=3 {
            for k in 1..=3 {
                if !listed.iter().any(|(t, _)| *t == (i, j, k)) {
                    assert!(
                        jt(&model, i, j, k).iter().all(|x| x.is_zero()),
                        "J_{i}{j}{k}"
                    );
                }
            }
        }
    }
}

#[test]
fn inner_products() {
    let model = m();
    let ip = |x: (usize, usize, usize), y: (usize, usize, usize)| {
        model
            .form()
            .eval(&jt(&model, x.0, x.1, x.2), &jt(&model, y.0, y.1, y.2))
    };
    let listed = inner_product_table();
    for (x, y, want) in &listed {
        assert_eq!(&ip(*x, *y), want, "<J{x:?}, J{y:?}>");
    }
    for (x, y, u, v) in symmetry_pairings() {
        assert_eq!(ip(x, y), ip(u, v));
    }
    // the general pairing identity over all index tuples
    let triples: Vec<(usize, usize, usize)> = (1..=3)
        .flat_map(|i| (1..=3).flat_map(move |j| (1..=3).map(move |k| (i, j, k))))
        .collect();
    for &(i1, i2, i3) in &triples {
        for &(j1, j2, j3) in &triples {
            assert_eq!(
                ip((i1, i2, i3), (j1, j2, j3)),
                ip((i1, i2, j3), (j1, j2, i3))
            );
        }
    }
}

#[test]
fn inner_products_are_complete() {
    let model = m();
    let ip = |x: (usize, usize, usize), y: (usize, usize, usize)| {
        model
            .form()
            .eval(&jt(&model, x.0, x.1, x.2), &jt(&model, y.0, y.1, y.2))
    };
    // the starred diagonal entries
    for t in [(1, 2, 3), (1, 3, 2), (2, 3, 1)] {
        assert_eq!(ip(t, t), rat(-1, 2), "{t:?}");
    }
    let numeric = [
        ((1, 1, 2), (3, 3, 2)),
        ((1, 1, 2), (2, 3, 3)),
        ((1, 2, 1), (3, 3, 2)),
        ((1, 2, 1), (2, 3, 3)),
        ((1, 1, 3), (2, 2, 3)),
        ((1, 1, 3), (2, 3, 2)),
        ((1, 3, 1), (2, 2, 3)),
        ((2, 3, 2), (1, 3, 1)),
        ((2, 2, 1), (3, 3, 1)),
        ((2, 2, 1), (1, 3, 3)),
        ((1, 2, 2), (3, 3, 1)),
        ((1, 2, 2), (1, 3, 3)),
        ((1, 2, 3), (1, 3, 2)),
        ((1, 2, 3), (2, 3, 1)),
        ((1, 3, 2), (2, 3, 1)),
        ((1, 2, 3), (1, 2, 3)),
        ((1, 3, 2), (1, 3, 2)),
        ((2, 3, 1), (2, 3, 1)),
    ];
    let listed = |x, y| {
        numeric
            .iter()
            .any(|&(a, b)| (a, b) == (x, y) || (a, b) == (y, x))
    };
    // with i <= j every J_ijk appears once
    let mut triples = Vec::new();
    for i in 1..=3 {
        for j in i..=3 {
            for k in 1..=3 {
                triples.push((i, j, k));
            }
        }
    }
    for &x in &triples {
        for &y in &triples {
            if !listed(x, y) {
                assert_eq!(ip(x, y), int(0), "<J{x:?}, J{y:?}>");
            }
        }
    }
}

#[test]
fn beta4_dual_expressions() {
    let model = m();
    let ginv = model.inverse_gram();
    let (b41, b42) = (index("b41").unwrap(), index("b42").unwrap());
    let dual = |j: usize| {
        combo(&[
            ("b41", ginv[(b41, j)].clone()),
            ("b42", ginv[(b42, j)].clone()),
        ])
    };
    let (d1, d2) = (dual(b41), dual(b42));
    for (d, j) in [(&d1, b41), (&d2, b42)] {
        assert_eq!(
            model.form().eval(d, &e("b41")),
            if j == b41 { int(1) } else { int(0) }
        );
        assert_eq!(
            model.form().eval(d, &e("b42")),
            if j == b42 { int(1) } else { int(0) }
        );
    }
    let lin = |c1: Rational, c2: Rational| -> Vec<Rational> {
        d1.iter()
            .zip(&d2)
            .map(|(x, y)| c1.clone() * x.clone() + c2.clone() * y.clone())
            .collect()
    };
    assert_eq!(lin(rat(1, 4), rat(-1, 2)), jt(&model, 1, 3, 2));
    assert_eq!(lin(rat(-1, 2), rat(1, 4)), jt(&model, 2, 3, 1));
    assert_eq!(lin(rat(1, 4), rat(1, 4)), jt(&model, 1, 2, 3));
    // A12 a3 = -(b41* - b42*)/2
    let a12 = skew(&model, &a(1), &a(2));
    assert_eq!(a12.mul_vec(&a(3)), lin(rat(-1, 2), rat(1, 2)));
}

#[test]
fn m14_property_verdicts() {
    let model = m();
    let jt = check_property(&model, Property::JacobiTsankov);
    assert!(jt.holds());
    assert_eq!(jt.checked, 105 * 105);
    assert!(check_property(&model, Property::MixedTsankov).holds());
    assert!(check_property(&model, Property::JacobiSquareZero).holds());

    let nil = check_property(&model, Property::TwoStepJacobiNilpotent);
    assert!(!nil.holds());
    let w = nil.witness.clone().unwrap();
    assert_eq!(
        w.expr,
        WitnessExpr::Product {
            left: OpSpec::Jacobi { x: 2, y: 2 },
            right: OpSpec::Jacobi { x: 1, y: 1 },
        }
    );
    assert_eq!(w.vector, Some(0));
    assert_eq!(w.reevaluate(&model).unwrap(), e("a1*"));

    let sk = check_property(&model, Property::SkewTsankov);
    assert!(!sk.holds());
    let w = sk.witness.clone().unwrap();
    assert_eq!(
        w.expr,
        WitnessExpr::Commutator {
            left: OpSpec::Skew { x: 0, y: 1 },
            right: OpSpec::Skew { x: 0, y: 2 },
        }
    );
    assert!(w.reevaluate(&model).unwrap().iter().any(|x| !x.is_zero()));
    // the same pair acting on a3 gives -a2* - a2*/3
    let a12 = skew(&model, &a(1), &a(2));
    let a13 = skew(&model, &a(1), &a(3));
    assert_eq!(
        a12.commutator(&a13).mul_vec(&a(3)),
        combo(&[("a2*", rat(-4, 3))])
    );

    for kind in [
        Property::TwoStepSkewNilpotent,
        Property::MixedNilpotentTsankov,
    ] {
        let r = check_property(&model, kind);
        assert!(!r.holds(), "{kind}");
        let w = r.witness.unwrap();
        assert!(w.reevaluate(&model).unwrap().iter().any(|x| !x.is_zero()));
    }
}

#[test]
fn zero_model_satisfies_everything() {
    let zero = Model0::<Rational>::zero(m14::m14_form());
    for kind in Property::ALL {
        assert!(check_property(&zero, kind).holds(), "{kind}");
    }
    let spans = invariant_spans(&zero);
    assert!(spans.beta_alpha_star.is_empty() && spans.alpha_star.is_empty());
}

fn span_dim(vs: &[Vec<Rational>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    Matrix::from_rows(vs.to_vec()).unwrap().rank()
}

#[test]
fn invariant_spans_of_m14() {
    let model = m();
    let spans = invariant_spans(&model);
    assert_eq!(spans.beta_alpha_star.len(), 11);
    assert_eq!(spans.alpha_star.len(), 3);
    let mut expected: Vec<Vec<Rational>> = m14::beta_indices()
        .iter()
        .map(|&i| e(m14::LABELS[i]))
        .collect();
    expected.extend(["a1*", "a2*", "a3*"].iter().map(|l| e(l)));
    let mut both = expected.clone();
    both.extend(spans.beta_alpha_star.iter().cloned());
    assert_eq!(span_dim(&both), 11);
    let stars: Vec<_> = ["a1*", "a2*", "a3*"].iter().map(|l| e(l)).collect();
    let mut both = stars.clone();
    both.extend(spans.alpha_star.iter().cloned());
    assert_eq!(span_dim(&both), 3);
}

#[test]
fn alpha_star_span_by_brute_force_triples() {
    // J(e_i)J(e_j)e_k over all basis triples, no polarization
    let model = m();
    let mut images = Vec::new();
    for i in 0..14 {
        let ji = jacobi(&model, &e(m14::LABELS[i]));
        for j in 0..14 {
            let jj = jacobi(&model, &e(m14::LABELS[j]));
            let prod = ji.mul(&jj);
            for k in 0..14 {
                images.push(prod.column(k));
            }
        }
    }
    // random combinations reach the polarized directions as well
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let x = random_vec(&mut rng, 14);
        let y = random_vec(&mut rng, 14);
        let z = random_vec(&mut rng, 14);
        images.push(jacobi(&model, &x).mul_vec(&jacobi(&model, &y).mul_vec(&z)));
    }
    assert_eq!(span_dim(&images), 3);
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
        .collect()
}

#[test]
fn jacobi_identities_on_random_vectors() {
    let model = m();
    let g = model.form().gram().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for _ in 0..200 {
        let x = random_vec(&mut rng, 14);
        let y = random_vec(&mut rng, 14);
        let jx = jacobi(&model, &x);
        // self-adjoint: G J = (G J)^T
        let gj = g.mul(&jx);
        assert_eq!(gj, gj.transpose());
        assert!(jx.mul_vec(&x).iter().all(|c| c.is_zero()));
        let lhs = model.form().eval(&jx.mul_vec(&y), &y);
        assert_eq!(lhs, model.tensor().eval(&y, &x, &x, &y));
        // J(x, x) = J(x) and skew(x, y) alternates
        assert_eq!(jacobi_polarized(&model, &x, &x), jx);
        let sxy = skew(&model, &x, &y);
        assert_eq!(sxy.add(&skew(&model, &y, &x)), Matrix::zeros(14, 14));
        // <A(x,y)z, w> = -<z, A(x,y)w>
        let z = random_vec(&mut rng, 14);
        let w = random_vec(&mut rng, 14);
        assert_eq!(
            model.form().eval(&sxy.mul_vec(&z), &w),
            -model.form().eval(&z, &sxy.mul_vec(&w))
        );
    }
}

#[test]
fn jacobi_tsankov_implies_square_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut tsankov_models = 0;
    let check = |model: &Model0<Rational>| {
        let jt = check_property(model, Property::JacobiTsankov).holds();
        let sq = check_property(model, Property::JacobiSquareZero).holds();
        assert!(!jt || sq, "counterexample: {model:?}");
        jt
    };
    assert!(check(&m()));
    for _ in 0..50 {
        let n = rng.gen_range(3..=6);
        if check(&random_sparse_model(&mut rng, n)) {
            tsankov_models += 1;
        }
    }
    // the corpus is not vacuous for the hypothesis
    assert!(tsankov_models >= 1, "no Jacobi-Tsankov model in the corpus");
}

#[test]
fn failing_witnesses_reevaluate_nonzero() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let model = random_sparse_model(&mut rng, 4);
        for kind in Property::ALL {
            let r = check_property(&model, kind);
            if let Some(w) = r.witness {
                let res = w.reevaluate(&model).unwrap();
                assert!(res.iter().any(|x| !x.is_zero()), "{kind}");
                let recorded: Vec<_> = res.iter().map(Scalar::to_value).collect();
                assert_eq!(recorded, w.residual);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polarization_diagonal(xs in proptest::collection::vec(-4i64..=4, 14),
                             zs in proptest::collection::vec(-4i64..=4, 14)) {
        let model = m();
        let x: Vec<Rational> = xs.iter().map(|&v| int(v)).collect();
        let z: Vec<Rational> = zs.iter().map(|&v| int(v)).collect();
        prop_assert_eq!(
            jacobi_polarized(&model, &x, &x).mul_vec(&z),
            jacobi(&model, &x).mul_vec(&z)
        );
    }
}
