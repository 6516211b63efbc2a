#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;

use tsankov::algebra::{int, rat, BilinearForm, FnExpr, Matrix, Rational, Scalar, Value};
use tsankov::geometry::{christoffel, ChristoffelKind, PlaneWaveMetric};
use tsankov::model::m14::index;
use tsankov::model::{build_m14, jacobi_polarized, CurvatureTensor, Model0};
use tsankov::realizations::AFamily;

pub type Triple = (usize, usize, usize);

pub fn small_rat(rng: &mut impl Rng) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn nonzero_rat(rng: &mut impl Rng) -> Rational {
    loop {
        let r = small_rat(rng);
        if r != rat(0, 1) {
            return r;
        }
    }
}

/// A random polynomial in `x_0..x_{a-1}` of total degree at most `deg`.
pub fn random_poly(rng: &mut impl Rng, a: usize, deg: u32) -> FnExpr {
    let terms = rng.gen_range(1..=4);
    let mut out = Vec::new();
    for _ in 0..terms {
        let mut t = FnExpr::rational(nonzero_rat(rng));
        let mut left = rng.gen_range(0..=deg);
        for v in 0..a {
            if left == 0 {
                break;
            }
            let e = rng.gen_range(0..=left);
            left -= e;
            if e > 0 {
                t = t * FnExpr::var(v).pow(e as i32);
            }
        }
        out.push(t);
    }
    out.into_iter().reduce(|x, y| x + y).unwrap()
}

/// Random symmetric nondegenerate `C` with small rational entries.
pub fn random_c(rng: &mut impl Rng, b: usize) -> Vec<Vec<Value>> {
    let mut c = vec![vec![rat(0, 1); b]; b];
    for i in 0..b {
        c[i][i] = if rng.gen_bool(0.5) {
            rat(1, 1)
        } else {
            rat(-1, 1)
        } * rat(rng.gen_range(1..=3), 1);
    }
    // a unit lower triangular congruence keeps it nondegenerate
    for i in 1..b {
        for j in 0..i {
            if rng.gen_bool(0.3) {
                let k = small_rat(rng);
                for col in 0..b {
                    let v = c[j][col].clone() * k.clone();
                    c[i][col] = c[i][col].clone() + v;
                }
                for row in 0..b {
                    let v = c[row][j].clone() * k.clone();
                    c[row][i] = c[row][i].clone() + v;
                }
            }
        }
    }
    c.into_iter()
        .map(|r| r.into_iter().map(Value::Exact).collect())
        .collect()
}

/// A random metric with polynomial `psi` of degree at most `deg`.
pub fn random_metric(rng: &mut impl Rng, a: usize, b: usize, deg: u32) -> PlaneWaveMetric {
    let mut psi = BTreeMap::new();
    for i in 0..a {
        for j in i..a {
            if rng.gen_bool(0.3) {
                continue;
            }
            let v: Vec<FnExpr> = (0..b)
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        random_poly(rng, a, deg)
                    } else {
                        FnExpr::zero()
                    }
                })
                .collect();
            psi.insert((i, j), v);
        }
    }
    PlaneWaveMetric::new(a, b, random_c(rng, b), psi).unwrap()
}

pub fn random_point(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| small_rat(rng)).collect()
}

pub fn random_float_point(rng: &mut impl Rng, n: usize, r: f64) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-r..r)).collect()
}

pub fn random_a_family(rng: &mut impl Rng) -> AFamily {
    AFamily::from_rationals(std::array::from_fn(|_| [small_rat(rng), small_rat(rng)]))
}

/// A random `A` satisfying the three locally-symmetric equations: pick
/// `a11, a12, a31` and solve for `a21`, then `a32`, then `a22`.
pub fn symmetric_a_family(rng: &mut impl Rng) -> AFamily {
    loop {
        let (a11, a12, a31) = (small_rat(rng), small_rat(rng), small_rat(rng));
        let r = |n: i64| Rational::from_integer(n.into());
        let a21 = (r(4) - r(3) * &a31 - r(3) * &a12 * &a11) / r(3);
        let den = r(3) - r(3) * &a21 * &a31;
        if den == r(0) {
            continue;
        }
        let a32 = (r(4) - r(3) * &a12 - r(3) * &a21 * (r(2) - &a11)) / den;
        let a22 = r(2) - &a11 - &a31 * &a32;
        return AFamily::from_rationals([[a11, a12], [a21, a22], [a31, a32]]);
    }
}

fn a_of(f: &AFamily) -> impl Fn(usize, usize) -> Rational + '_ {
    move |i, j| f.value::<Rational>(i - 1, j - 1).unwrap()
}

/// The listed `R(x_i,x_j,x_k,x_l) = c x_u x_v` of `M_A` (zero-based indices).
pub fn m_a_curvature_xxxx(f: &AFamily) -> Vec<([usize; 4], Rational, [usize; 2])> {
    let a = a_of(f);
    let r = |n: i64, d: i64| rat(n, d);
    vec![
        ([0, 1, 1, 0], -(a(3, 1) * a(3, 2)), [2, 2]),
        (
            [0, 2, 2, 0],
            -r(1, 3) * (r(2, 1) + r(3, 1) * a(2, 1) * a(2, 2)),
            [1, 1],
        ),
        (
            [2, 1, 1, 2],
            -r(1, 3) * (r(2, 1) + r(3, 1) * a(1, 1) * a(1, 2)),
            [0, 0],
        ),
        (
            [1, 0, 0, 2],
            r(1, 1) - a(1, 1) - a(1, 2) + a(1, 1) * a(1, 2) + a(2, 1) - a(2, 1) * a(2, 2) + a(3, 1)
                - a(3, 1) * a(3, 2),
            [1, 2],
        ),
        (
            [0, 1, 1, 2],
            r(1, 1) + a(1, 2) - a(2, 1) - a(1, 1) * a(1, 2) - a(2, 2) + a(2, 1) * a(2, 2) + a(3, 2)
                - a(3, 1) * a(3, 2),
            [0, 2],
        ),
        (
            [0, 2, 2, 1],
            r(2, 3) + a(1, 1) - a(1, 1) * a(1, 2) + a(2, 2) - a(2, 1) * a(2, 2) - a(3, 1) - a(3, 2)
                + a(3, 1) * a(3, 2),
            [0, 1],
        ),
    ]
}

/// The nine listed `nabla R(x_i,x_j,x_k,x_l; x_d) = c x_u` of `M_A`.
pub fn m_a_nabla_r(f: &AFamily) -> Vec<([usize; 5], Rational, usize)> {
    let a = a_of(f);
    let r = |n: i64, d: i64| rat(n, d);
    let k1 = r(2, 1) - a(1, 1) - a(1, 2) + a(2, 1) - a(2, 2) + a(3, 1) - a(3, 2)
        + a(1, 1) * a(1, 2)
        - a(2, 1) * a(2, 2)
        - a(3, 1) * a(3, 2);
    let k2 = r(2, 1) - a(1, 1) + a(1, 2) - a(2, 1) - a(2, 2) - a(3, 1) + a(3, 2)
        - a(1, 1) * a(1, 2)
        + a(2, 1) * a(2, 2)
        - a(3, 1) * a(3, 2);
    let k3 = r(2, 3) + a(1, 1) - a(1, 2) - a(2, 1) + a(2, 2)
        - a(3, 1)
        - a(3, 2)
        - a(1, 1) * a(1, 2)
        - a(2, 1) * a(2, 2)
        + a(3, 1) * a(3, 2);
    vec![
        (
            [0, 1, 1, 0, 2],
            r(-2, 1) * (r(-2, 1) + a(1, 1) + a(2, 2) + a(3, 1) * a(3, 2)),
            2,
        ),
        (
            [0, 2, 2, 0, 1],
            r(-2, 3)
                * (r(-4, 1) + r(3, 1) * a(1, 2) + r(3, 1) * a(3, 2) + r(3, 1) * a(2, 1) * a(2, 2)),
            1,
        ),
        (
            [1, 2, 2, 1, 0],
            r(-2, 3)
                * (r(-4, 1) + r(3, 1) * a(2, 1) + r(3, 1) * a(3, 1) + r(3, 1) * a(1, 1) * a(1, 2)),
            0,
        ),
        ([1, 0, 0, 2, 1], k1.clone(), 2),
        ([1, 0, 0, 2, 2], k1, 1),
        ([0, 1, 1, 2, 0], k2.clone(), 2),
        ([0, 1, 1, 2, 2], k2, 0),
        ([0, 2, 2, 1, 0], k3.clone(), 1),
        ([0, 2, 2, 1, 1], k3, 0),
    ]
}

pub fn e(label: &str) -> Vec<Rational> {
    let mut v = vec![int(0); 14];
    v[index(label).unwrap()] = int(1);
    v
}

pub fn combo(terms: &[(&str, Rational)]) -> Vec<Rational> {
    let mut v = vec![int(0); 14];
    for (l, c) in terms {
        v[index(l).unwrap()] += c.clone();
    }
    v
}

pub fn m() -> Model0<Rational> {
    build_m14()
}

pub fn a(i: usize) -> Vec<Rational> {
    e(&format!("a{i}"))
}

/// `J(a_i, a_j) a_k`.
pub fn jt(model: &Model0<Rational>, i: usize, j: usize, k: usize) -> Vec<Rational> {
    jacobi_polarized(model, &a(i), &a(j)).mul_vec(&a(k))
}

/// The nonzero `J(a_i, a_j) a_k` of `M14` with `i <= j`.
pub fn jacobi_table() -> Vec<((usize, usize, usize), Vec<Rational>)> {
    vec![
        ((1, 1, 2), e("b22")),
        ((1, 1, 3), e("b32")),
        ((2, 2, 1), e("b11")),
        ((2, 2, 3), e("b31")),
        ((3, 3, 1), e("b12")),
        ((3, 3, 2), e("b21")),
        ((1, 2, 1), combo(&[("b22", rat(-1, 2))])),
        ((1, 2, 2), combo(&[("b11", rat(-1, 2))])),
        ((1, 3, 1), combo(&[("b32", rat(-1, 2))])),
        ((1, 3, 3), combo(&[("b12", rat(-1, 2))])),
        ((2, 3, 2), combo(&[("b31", rat(-1, 2))])),
        ((2, 3, 3), combo(&[("b21", rat(-1, 2))])),
        ((1, 3, 2), e("b42")),
        ((2, 3, 1), e("b41")),
        ((1, 2, 3), combo(&[("b41", int(-1)), ("b42", int(-1))])),
    ]
}

/// The listed nonzero `<J_x, J_y>` of `M14` off the diagonal.
pub fn inner_product_table() -> Vec<(Triple, Triple, Rational)> {
    vec![
        ((1, 1, 2), (3, 3, 2), rat(1, 1)),
        ((1, 1, 2), (2, 3, 3), rat(-1, 2)),
        ((1, 2, 1), (3, 3, 2), rat(-1, 2)),
        ((1, 2, 1), (2, 3, 3), rat(1, 4)),
        ((1, 1, 3), (2, 2, 3), rat(1, 1)),
        ((1, 1, 3), (2, 3, 2), rat(-1, 2)),
        ((1, 3, 1), (2, 2, 3), rat(-1, 2)),
        ((2, 3, 2), (1, 3, 1), rat(1, 4)),
        ((2, 2, 1), (3, 3, 1), rat(1, 1)),
        ((2, 2, 1), (1, 3, 3), rat(-1, 2)),
        ((1, 2, 2), (3, 3, 1), rat(-1, 2)),
        ((1, 2, 2), (1, 3, 3), rat(1, 4)),
        ((1, 2, 3), (1, 3, 2), rat(1, 4)),
        ((1, 2, 3), (2, 3, 1), rat(1, 4)),
        ((1, 3, 2), (2, 3, 1), rat(1, 4)),
    ]
}

/// Pairs `(x, y, u, v)` with `<J_x, J_y> = <J_u, J_v>`.
pub fn symmetry_pairings() -> Vec<(Triple, Triple, Triple, Triple)> {
    vec![
        ((1, 1, 2), (2, 3, 3), (1, 1, 3), (2, 3, 2)),
        ((1, 2, 3), (1, 3, 2), (1, 2, 2), (1, 3, 3)),
        ((1, 2, 1), (3, 3, 2), (1, 2, 2), (3, 3, 1)),
        ((1, 2, 3), (2, 3, 1), (1, 2, 1), (2, 3, 3)),
        ((1, 3, 1), (2, 2, 3), (1, 3, 3), (2, 2, 1)),
        ((1, 3, 2), (2, 3, 1), (1, 3, 1), (2, 3, 2)),
    ]
}

/// `phi(x,w)phi(y,z) - phi(x,z)phi(y,w)` summed over a few sparse symmetric
/// `phi`: always an algebraic curvature tensor.
pub fn random_sparse_model(rng: &mut impl Rng, n: usize) -> Model0<Rational> {
    let mut t = CurvatureTensor::zero(n);
    for _ in 0..rng.gen_range(1..=3) {
        let mut phi = Matrix::<Rational>::zeros(n, n);
        for _ in 0..rng.gen_range(1..=3) {
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let v = rat(rng.gen_range(-3..=3), rng.gen_range(1..=2));
            phi[(i, j)] += v.clone();
            if i != j {
                phi[(j, i)] += v;
            }
        }
        let c = int(rng.gen_range(-2..=2));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = phi[(i, l)].clone() * phi[(j, k)].clone()
                            - phi[(i, k)].clone() * phi[(j, l)].clone();
                        if v.is_zero()
                            || tsankov::model::canonical([i, j, k, l])
                                != Some(([i, j, k, l], false))
                        {
                            continue;
                        }
                        t.add_to([i, j, k, l], c.clone() * v);
                    }
                }
            }
        }
    }
    // a random nondegenerate diagonal form, possibly indefinite
    let diag: Vec<Rational> = (0..n)
        .map(|_| if rng.gen_bool(0.5) { int(1) } else { int(-1) })
        .collect();
    let g = Matrix::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { int(0) });
    Model0::new(BilinearForm::new(g).unwrap(), t).unwrap()
}

/// Classical fourth-order Runge-Kutta on the geodesic equation; returns
/// position and velocity at `t`.
pub fn rk4(
    m: &PlaneWaveMetric,
    p: &[f64],
    v: &[f64],
    t: f64,
    steps: usize,
) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let accel = |x: &[f64], u: &[f64]| -> Vec<f64> {
        let g = christoffel(m, x, ChristoffelKind::Second).unwrap();
        let mut acc = vec![0.0; n];
        for (idx, c) in &g.entries {
            acc[idx[0]] -= c * u[idx[1]] * u[idx[2]];
        }
        acc
    };
    let h = t / steps as f64;
    let mut x = p.to_vec();
    let mut u = v.to_vec();
    for _ in 0..steps {
        let k1x = u.clone();
        let k1u = accel(&x, &u);
        let step = |base: &[f64], k: &[f64], s: f64| -> Vec<f64> {
            base.iter().zip(k).map(|(b, k)| b + s * k).collect()
        };
        let x2 = step(&x, &k1x, h / 2.0);
        let u2 = step(&u, &k1u, h / 2.0);
        let k2x = u2.clone();
        let k2u = accel(&x2, &u2);
        let x3 = step(&x, &k2x, h / 2.0);
        let u3 = step(&u, &k2u, h / 2.0);
        let k3x = u3.clone();
        let k3u = accel(&x3, &u3);
        let x4 = step(&x, &k3x, h);
        let u4 = step(&u, &k3u, h);
        let k4x = u4.clone();
        let k4u = accel(&x4, &u4);
        for i in 0..n {
            x[i] += h / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
            u[i] += h / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
        }
    }
    (x, u)
}
