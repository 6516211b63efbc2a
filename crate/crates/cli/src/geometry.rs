use std::path::Path;

use clap::Subcommand;
use serde::Serialize;
use serde_json::json;
use tsankov::algebra::{Scalar, Value};
use tsankov::geometry::{
    covariant_derivative_r, curvature_at, exp_inverse, geodesic, geodesic_residual, geodesic_trace,
    CoordTensor, Quadrature,
};
use tsankov::model::{canonical, validate_curvature_symmetries};
use tsankov::realizations::{symmetric_space_check, verify_0_model, xi_invariant, Family, XiMode};
use tsankov::{Error, Result};

use crate::check_model::from_report;
use crate::input::{parse_vector, GeometryInput, Sampler, Sweep};
use crate::report::{fmt_value, Check};

#[derive(Clone, Debug, Subcommand)]
pub enum GeometryOp {
    /// Curvature components R(i,j,k,l) at points.
    Curvature {
        /// Comma-separated coordinates; random points otherwise.
        #[arg(long)]
        at: Option<String>,
    },
    /// Components of the k-th covariant derivative of R at points.
    NablaR {
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long)]
        at: Option<String>,
    },
    /// Checks that the normalized frame reproduces M14 at points.
    #[command(name = "verify-0-model")]
    Verify0Model {
        #[arg(long)]
        at: Option<String>,
    },
    /// The invariant Xi at points or along a coordinate sweep.
    Xi {
        #[arg(long)]
        at: Option<String>,
        #[arg(long = "xi-mode", default_value = "frame")]
        xi_mode: XiMode,
        /// `x1=start:end:step`, other coordinates taken from --at or zero.
        #[arg(long)]
        sweep: Option<Sweep>,
    },
    /// The locally-symmetric equations for M_A, against nabla R at points.
    Symmetric,
    /// Trace of the geodesic through --at with --velocity.
    Geodesic {
        #[arg(long)]
        at: Option<String>,
        #[arg(long)]
        velocity: Option<String>,
        #[arg(long = "t-max", default_value = "1")]
        t_max: String,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long)]
        quadrature: Option<Quadrature>,
    },
    /// Round trip v -> exp_P(v) -> exp_P^{-1} at random P, v.
    ExpInverse {
        #[arg(long)]
        quadrature: Option<Quadrature>,
    },
}

impl GeometryOp {
    pub fn name(&self) -> &'static str {
        match self {
            GeometryOp::Curvature { .. } => "curvature",
            GeometryOp::NablaR { .. } => "nabla-r",
            GeometryOp::Verify0Model { .. } => "verify-0-model",
            GeometryOp::Xi { .. } => "xi",
            GeometryOp::Symmetric => "symmetric",
            GeometryOp::Geodesic { .. } => "geodesic",
            GeometryOp::ExpInverse { .. } => "exp-inverse",
        }
    }

    pub fn default_points(&self) -> usize {
        match self {
            GeometryOp::Verify0Model { .. } | GeometryOp::ExpInverse { .. } => 10,
            GeometryOp::Symmetric => 20,
            _ => 1,
        }
    }
}

pub struct Ctx<'a> {
    pub input: &'a GeometryInput,
    pub tol: f64,
    pub points: usize,
    pub seed: u64,
    pub out: Option<&'a Path>,
}

/// Coordinate names; realizations index `y` like the `beta`s of M14.
fn names(input: &GeometryInput) -> Vec<String> {
    let m = input.metric();
    match input {
        GeometryInput::Realization(_) => {
            let mut v: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
            v.extend((1..=3).map(|i| format!("x{i}*")));
            v.extend((1..=4).flat_map(|i| (1..=2).map(move |j| format!("y{i}{j}"))));
            v
        }
        GeometryInput::Metric(_) => m.coord_names(),
    }
}

fn values<S: Scalar>(v: &[S]) -> Vec<Value> {
    v.iter().map(Scalar::to_value).collect()
}

fn points<S: Scalar>(ctx: &Ctx, at: Option<&str>, sampler: &mut Sampler) -> Result<Vec<Vec<S>>> {
    let n = ctx.input.metric().dim();
    match at {
        Some(s) => Ok(vec![parse_vector(s, n)?]),
        None => Ok((0..ctx.points).map(|_| sampler.vector(n)).collect()),
    }
}

fn default_quadrature(ctx: &Ctx, q: Option<Quadrature>) -> Quadrature {
    q.unwrap_or(if ctx.input.metric().is_polynomial() {
        Quadrature::ExactPoly
    } else {
        Quadrature::Adaptive
    })
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let io = |e: csv::Error| Error::Invalid(format!("cannot write {}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display())))
}

#[derive(Serialize)]
struct Component {
    component: String,
    value: Value,
}

/// Nonzero components with the first four slots in canonical order.
fn components<S: Scalar>(t: &CoordTensor<S>, names: &[String]) -> Vec<Component> {
    t.entries
        .iter()
        .filter(|(idx, _)| {
            let four = [idx[0], idx[1], idx[2], idx[3]];
            canonical(four).is_some_and(|(c, _)| c == four)
        })
        .map(|(idx, v)| {
            let n: Vec<&str> = idx.iter().map(|&i| names[i].as_str()).collect();
            let mut s = format!("R({}", n[..4].join(","));
            for d in &n[4..] {
                s.push(';');
                s.push_str(d);
            }
            s.push(')');
            Component {
                component: s,
                value: v.to_value(),
            }
        })
        .collect()
}

fn quad_name(q: Quadrature) -> &'static str {
    match q {
        Quadrature::ExactPoly => "exact-poly",
        Quadrature::Adaptive => "adaptive",
    }
}

fn max_abs<S: Scalar>(v: &[S]) -> f64 {
    v.iter().map(Scalar::magnitude).fold(0.0, f64::max)
}

pub fn run<S: Scalar>(op: &GeometryOp, ctx: &Ctx) -> Result<Vec<Check>> {
    let mut sampler = Sampler::new(ctx.seed);
    let m = ctx.input.metric();
    let names = names(ctx.input);
    let mut checks = Vec::new();
    match op {
        GeometryOp::Curvature { at } => {
            let mut out = Vec::new();
            for p in points::<S>(ctx, at.as_deref(), &mut sampler)? {
                let r = curvature_at(m, &p)?;
                let sym = match r.to_curvature() {
                    Ok(c) => validate_curvature_symmetries(&c),
                    Err(e) => {
                        checks.push(Check::new("curvature-symmetries", false, e.to_string()));
                        continue;
                    }
                };
                let comps = components(&r, &names);
                if !sym.holds() {
                    checks.push(from_report(sym, &names));
                }
                out.push(json!({ "point": values(&p), "components": comps }));
            }
            if checks.is_empty() {
                checks.push(Check::new(
                    "curvature-symmetries",
                    true,
                    format!("holds at {} points", out.len()),
                ));
            }
            checks.push(
                Check::new("curvature", true, format!("{} points", out.len())).with_detail(out),
            );
        }
        GeometryOp::NablaR { order, at } => {
            let mut out = Vec::new();
            for p in points::<S>(ctx, at.as_deref(), &mut sampler)? {
                let t = covariant_derivative_r(m, &p, *order)?;
                out.push(json!({
                    "point": values(&p),
                    "max_abs": t.max_abs(),
                    "components": components(&t, &names),
                }));
            }
            checks.push(
                Check::new(
                    "nabla-r",
                    true,
                    format!("order {order} at {} points", out.len()),
                )
                .with_detail(json!({ "order": order, "points": out })),
            );
        }
        GeometryOp::Verify0Model { at } => {
            let r = ctx.input.realization("verify-0-model")?;
            let pts = points::<S>(ctx, at.as_deref(), &mut sampler)?;
            let mut failure = None;
            for (k, p) in pts.iter().enumerate() {
                let rep = verify_0_model(r, p, ctx.tol)?;
                if !rep.holds() {
                    failure = Some((k, p.clone(), rep));
                    break;
                }
            }
            checks.push(match failure {
                None => Check::new(
                    "0-model",
                    true,
                    format!("frame reproduces M14 at {} points", pts.len()),
                )
                .with_detail(json!({ "points": pts.len() })),
                Some((k, p, rep)) => {
                    let mut c = from_report(rep, &names);
                    c.summary = format!("point {k}: {}", c.summary);
                    c.name = "0-model".into();
                    c.detail = json!({ "point_index": k, "point": values(&p), "report": c.detail });
                    c
                }
            });
        }
        GeometryOp::Xi { at, xi_mode, sweep } => {
            let r = ctx.input.realization("xi")?;
            let n = m.dim();
            let (pts, swept) = match sweep {
                Some(sw) => {
                    let base: Vec<S> = match at {
                        Some(s) => parse_vector(s, n)?,
                        None => vec![S::zero(); n],
                    };
                    let (idx, vals) = sw.samples::<S>(&names)?;
                    let pts = vals
                        .into_iter()
                        .map(|v| {
                            let mut p = base.clone();
                            p[idx] = v;
                            p
                        })
                        .collect();
                    (pts, Some(idx))
                }
                None => (points::<S>(ctx, at.as_deref(), &mut sampler)?, None),
            };
            let other = match xi_mode {
                XiMode::Frame => XiMode::Direct,
                XiMode::Direct => XiMode::Frame,
            };
            let mut rows = Vec::new();
            let mut worst = 0.0f64;
            for p in &pts {
                let v = xi_invariant(r, p, *xi_mode, ctx.tol)?;
                let w = xi_invariant(r, p, other, ctx.tol)?;
                let (a, b) = (v.value.to_f64(), w.value.to_f64());
                worst = worst.max((a - b).abs() / a.abs().max(b.abs()).max(1.0));
                rows.push(json!({
                    "point": values(p),
                    "xi": v.value,
                    "quotients": v.quotients,
                }));
            }
            let agree = worst <= ctx.tol.max(1e-9);
            checks.push(
                Check::new(
                    "xi-frame-direct",
                    agree,
                    format!("frame and direct modes differ by at most {worst:.3e}"),
                )
                .with_detail(json!({ "max_relative_difference": worst })),
            );
            let col = swept.unwrap_or(0);
            let csv_rows: Vec<Vec<String>> = rows
                .iter()
                .zip(&pts)
                .map(|(row, p)| {
                    let xi: Value = serde_json::from_value(row["xi"].clone()).expect("value");
                    vec![fmt_value(&p[col].to_value()), fmt_value(&xi)]
                })
                .collect();
            if let Some(path) = ctx.out {
                write_csv(path, &[names[col].clone(), "Xi".into()], &csv_rows)?;
            }
            let shown: Vec<String> = csv_rows.iter().map(|r| r[1].clone()).take(4).collect();
            checks.push(
                Check::new(
                    "xi",
                    true,
                    format!(
                        "{} values, first {}{}",
                        rows.len(),
                        shown.join(", "),
                        if rows.len() > 4 { ", ..." } else { "" }
                    ),
                )
                .with_detail(json!({ "column": names[col], "rows": rows })),
            );
        }
        GeometryOp::Symmetric => {
            let r = ctx.input.realization("symmetric")?;
            let Some(Family::A(f)) = r.family() else {
                return Err(Error::Invalid("symmetric needs m-a".into()));
            };
            let pts = points::<S>(ctx, None, &mut sampler)?;
            let rep = symmetric_space_check::<S>(f, &pts, ctx.tol)?;
            let res: Vec<String> = rep.residuals.iter().map(fmt_value).collect();
            checks.push(
                Check::new(
                    "equations",
                    rep.equations_hold,
                    format!("residuals ({})", res.join(", ")),
                )
                .with_detail(json!({ "residuals": rep.residuals })),
            );
            checks.push(Check::new(
                "nabla-r-vanishes",
                rep.nabla_r_vanishes,
                format!(
                    "max |nabla R| = {:.3e} over {} points",
                    rep.max_nabla_r, rep.points
                ),
            ));
            let mut c = from_report(rep.report.clone(), &names);
            c.detail = serde_json::to_value(&rep).expect("serializes");
            checks.push(c);
        }
        GeometryOp::Geodesic {
            at,
            velocity,
            t_max,
            steps,
            quadrature,
        } => {
            let n = m.dim();
            let quad = default_quadrature(ctx, *quadrature);
            let p: Vec<S> = match at {
                Some(s) => parse_vector(s, n)?,
                None => vec![S::zero(); n],
            };
            let v: Vec<S> = match velocity {
                Some(s) => parse_vector(s, n)?,
                None => sampler.vector(n),
            };
            let t_max = crate::input::parse_scalar::<S>(t_max)?;
            let steps = (*steps).max(1);
            let ts: Vec<S> = (0..=steps)
                .map(|k| t_max.clone() * S::from_frac(k as i64, steps as i64))
                .collect();
            let trace = geodesic_trace(m, &p, &v, &ts, quad)?;
            let a = m.a();
            let affine = trace.iter().all(|(t, q)| {
                (0..a).all(|i| q[i].approx_eq(&(p[i].clone() + t.clone() * v[i].clone()), ctx.tol))
            });
            checks.push(Check::new(
                "x-affine",
                affine,
                if affine {
                    "x(t) = x(0) + t v_x"
                } else {
                    "x(t) is not affine"
                },
            ));
            let res = geodesic_residual(m, &p, &v, &ts, quad)?;
            let worst = res.iter().map(|r| max_abs(r)).fold(0.0, f64::max);
            let ok = match S::MODE {
                tsankov::algebra::Mode::Rational => worst == 0.0,
                tsankov::algebra::Mode::Float => worst <= ctx.tol.max(1e-8),
            };
            checks.push(Check::new(
                "geodesic-equation",
                ok,
                format!("max residual {worst:.3e} at {} times", ts.len()),
            ));
            let rows: Vec<Vec<String>> = trace
                .iter()
                .map(|(t, q)| {
                    std::iter::once(fmt_value(&t.to_value()))
                        .chain(q.iter().map(|x| fmt_value(&x.to_value())))
                        .collect()
                })
                .collect();
            if let Some(path) = ctx.out {
                let header: Vec<String> = std::iter::once("t".to_string())
                    .chain(names.iter().cloned())
                    .collect();
                write_csv(path, &header, &rows)?;
            }
            let detail: Vec<_> = trace
                .iter()
                .map(|(t, q)| json!({ "t": t.to_value(), "point": values(q) }))
                .collect();
            checks.push(
                Check::new(
                    "geodesic",
                    true,
                    format!("{} samples, {} quadrature", ts.len(), quad_name(quad)),
                )
                .with_detail(json!({
                    "start": values(&p),
                    "velocity": values(&v),
                    "trace": detail,
                })),
            );
        }
        GeometryOp::ExpInverse { quadrature } => {
            let n = m.dim();
            let quad = default_quadrature(ctx, *quadrature);
            let mut worst = 0.0f64;
            let mut samples = Vec::new();
            for _ in 0..ctx.points {
                let p: Vec<S> = sampler.vector(n);
                let v: Vec<S> = sampler.vector(n);
                let q = geodesic(m, &p, &v, &S::one(), quad)?;
                let back = exp_inverse(m, &p, &q, quad)?;
                let diff: Vec<S> = back
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| a.clone() - b.clone())
                    .collect();
                let r = max_abs(&diff);
                worst = worst.max(r);
                samples.push(json!({ "point": values(&p), "velocity": values(&v), "residual": r }));
            }
            let ok = match S::MODE {
                tsankov::algebra::Mode::Rational => worst == 0.0,
                tsankov::algebra::Mode::Float => worst <= ctx.tol.max(1e-9),
            };
            checks.push(
                Check::new(
                    "exp-inverse",
                    ok,
                    format!(
                        "max roundtrip residual {worst:.3e} over {} samples",
                        ctx.points
                    ),
                )
                .with_detail(json!({ "max_residual": worst, "samples": samples })),
            );
        }
    }
    Ok(checks)
}
