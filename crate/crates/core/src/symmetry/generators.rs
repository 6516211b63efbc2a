//! Explicit symmetries of `M14` generating `SL±(3)` on `V_{alpha*}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LinearMap;
use crate::algebra::{parse_rational, Matrix, Scalar, Value, DEFAULT_REL_TOL};
use crate::error::{Error, Result};
use crate::model::m14::{index, DIM};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorSpec {
    /// Exchanges the first two coordinates.
    Swap12,
    /// Exchanges the first and third coordinates.
    Swap13,
    /// Rotation in the first two coordinates; `cos^2 + sin^2 = 1`.
    Rotation { cos: Value, sin: Value },
    /// `alpha_i -> a_i alpha_i` with `a1 a2 a3 = ±1`.
    Dilatation { a: [Value; 3] },
}

struct Images<S> {
    cols: Vec<Vec<S>>,
}

impl<S: Scalar> Images<S> {
    fn identity() -> Self {
        let m = Matrix::<S>::identity(DIM);
        Images {
            cols: (0..DIM).map(|j| m.column(j)).collect(),
        }
    }

    /// `T e_label = sum coeff * e_target`.
    fn set(&mut self, label: &str, terms: &[(&str, S)]) {
        let mut v = vec![S::zero(); DIM];
        for (t, c) in terms {
            let i = index(t).expect("known label");
            v[i] = v[i].clone() + c.clone();
        }
        self.cols[index(label).expect("known label")] = v;
    }

    fn swap(&mut self, a: &str, b: &str) {
        self.set(a, &[(b, S::one())]);
        self.set(b, &[(a, S::one())]);
    }

    fn finish(self) -> LinearMap<S> {
        LinearMap::from_images(&self.cols).expect("square")
    }
}

impl GeneratorSpec {
    pub fn rotation<S: Scalar>(cos: S, sin: S) -> Self {
        GeneratorSpec::Rotation {
            cos: cos.to_value(),
            sin: sin.to_value(),
        }
    }

    /// Rotation by an angle; float mode only.
    pub fn rotation_angle(theta: f64) -> Self {
        Self::rotation(theta.cos(), theta.sin())
    }

    pub fn dilatation<S: Scalar>(a1: S, a2: S, a3: S) -> Self {
        GeneratorSpec::Dilatation {
            a: [a1.to_value(), a2.to_value(), a3.to_value()],
        }
    }

    /// Checks the parameter constraints.
    pub fn validate<S: Scalar>(&self) -> Result<()> {
        match self {
            GeneratorSpec::Swap12 | GeneratorSpec::Swap13 => Ok(()),
            GeneratorSpec::Rotation { cos, sin } => {
                let (c, s): (S, S) = (cos.to_scalar()?, sin.to_scalar()?);
                let norm = c.clone() * c + s.clone() * s;
                if norm.approx_eq(&S::one(), DEFAULT_REL_TOL) {
                    Ok(())
                } else {
                    Err(Error::Invalid(format!(
                        "rotation needs cos^2 + sin^2 = 1, got {norm}"
                    )))
                }
            }
            GeneratorSpec::Dilatation { a } => {
                let p = dilatation_product::<S>(a)?;
                if p.approx_eq(&S::one(), DEFAULT_REL_TOL)
                    || p.approx_eq(&-S::one(), DEFAULT_REL_TOL)
                {
                    Ok(())
                } else {
                    Err(Error::Invalid(format!(
                        "dilatation needs a1 a2 a3 = ±1, got {p}"
                    )))
                }
            }
        }
    }

    /// The map, after validating the parameters.
    pub fn build<S: Scalar>(&self) -> Result<LinearMap<S>> {
        self.validate::<S>()?;
        self.build_unchecked()
    }

    /// The map defined by the same formulas without the parameter
    /// constraints, so that invalid parameters can be shown to fail
    /// membership. Dilatation entries must still be nonzero.
    pub fn build_unchecked<S: Scalar>(&self) -> Result<LinearMap<S>> {
        let mut t = Images::<S>::identity();
        match self {
            GeneratorSpec::Swap12 => {
                t.swap("a1", "a2");
                t.swap("a1*", "a2*");
                t.swap("b11", "b22");
                t.swap("b12", "b21");
                t.swap("b31", "b32");
                t.swap("b41", "b42");
            }
            GeneratorSpec::Swap13 => {
                t.swap("a1", "a3");
                t.swap("a1*", "a3*");
                t.swap("b11", "b31");
                t.swap("b12", "b32");
                t.swap("b21", "b22");
                // b41 <-> b43 := -b41 - b42, b42 fixed
                t.set("b41", &[("b41", -S::one()), ("b42", -S::one())]);
            }
            GeneratorSpec::Rotation { cos, sin } => {
                let (c, s): (S, S) = (cos.to_scalar()?, sin.to_scalar()?);
                let (cc, ss, cs) = (
                    c.clone() * c.clone(),
                    s.clone() * s.clone(),
                    c.clone() * s.clone(),
                );
                let two = S::from_i64(2);
                let half = S::from_frac(1, 2);
                t.set("a1", &[("a1", c.clone()), ("a2", s.clone())]);
                t.set("a2", &[("a1", -s.clone()), ("a2", c.clone())]);
                t.set("a1*", &[("a1*", c.clone()), ("a2*", s.clone())]);
                t.set("a2*", &[("a1*", -s.clone()), ("a2*", c.clone())]);
                t.set("b11", &[("b11", c.clone()), ("b22", s.clone())]);
                t.set("b12", &[("b12", c.clone()), ("b21", s.clone())]);
                t.set("b21", &[("b12", -s.clone()), ("b21", c.clone())]);
                t.set("b22", &[("b11", -s.clone()), ("b22", c.clone())]);
                // b43 = -b41 - b42
                let tcs = two * cs.clone();
                t.set(
                    "b31",
                    &[
                        ("b32", ss.clone()),
                        ("b41", tcs.clone()),
                        ("b42", tcs.clone()),
                        ("b31", cc.clone()),
                    ],
                );
                t.set(
                    "b32",
                    &[
                        ("b32", cc.clone()),
                        ("b41", -tcs.clone()),
                        ("b42", -tcs),
                        ("b31", ss.clone()),
                    ],
                );
                let hcs = half * cs;
                t.set(
                    "b41",
                    &[
                        ("b32", hcs.clone()),
                        ("b31", -hcs.clone()),
                        ("b42", -ss.clone()),
                        ("b41", cc.clone()),
                    ],
                );
                t.set(
                    "b42",
                    &[
                        ("b32", hcs.clone()),
                        ("b31", -hcs),
                        ("b42", cc),
                        ("b41", -ss),
                    ],
                );
            }
            GeneratorSpec::Dilatation { a } => {
                let [a1, a2, a3]: [S; 3] =
                    [a[0].to_scalar()?, a[1].to_scalar()?, a[2].to_scalar()?];
                if a1.is_zero() || a2.is_zero() || a3.is_zero() {
                    return Err(Error::SingularMap);
                }
                // determinant -1 flips every beta so the three-alpha entries keep their sign
                let p = a1.clone() * a2.clone() * a3.clone();
                let eps = if p.approx_eq(&-S::one(), DEFAULT_REL_TOL) {
                    -S::one()
                } else {
                    S::one()
                };
                let q = |x: &S, y: &S| eps.clone() * x.clone() / y.clone();
                t.set("a1", &[("a1", a1.clone())]);
                t.set("a2", &[("a2", a2.clone())]);
                t.set("a3", &[("a3", a3.clone())]);
                t.set("a1*", &[("a1*", a1.recip()?)]);
                t.set("a2*", &[("a2*", a2.recip()?)]);
                t.set("a3*", &[("a3*", a3.recip()?)]);
                t.set("b11", &[("b11", q(&a2, &a3))]);
                t.set("b12", &[("b12", q(&a3, &a2))]);
                t.set("b21", &[("b21", q(&a3, &a1))]);
                t.set("b22", &[("b22", q(&a1, &a3))]);
                t.set("b31", &[("b31", q(&a2, &a1))]);
                t.set("b32", &[("b32", q(&a1, &a2))]);
                t.set("b41", &[("b41", eps.clone())]);
                t.set("b42", &[("b42", eps)]);
            }
        }
        Ok(t.finish())
    }
}

fn dilatation_product<S: Scalar>(a: &[Value; 3]) -> Result<S> {
    let mut p = S::one();
    for v in a {
        p = p * v.to_scalar::<S>()?;
    }
    Ok(p)
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = |x: &Value| match x {
            Value::Exact(r) => r.to_string(),
            Value::Float(x) => x.to_string(),
        };
        match self {
            GeneratorSpec::Swap12 => f.write_str("swap12"),
            GeneratorSpec::Swap13 => f.write_str("swap13"),
            GeneratorSpec::Rotation { cos, sin } => write!(f, "rotation:{},{}", v(cos), v(sin)),
            GeneratorSpec::Dilatation { a } => {
                write!(f, "dilatation:{},{},{}", v(&a[0]), v(&a[1]), v(&a[2]))
            }
        }
    }
}

/// Parses `swap12`, `swap13`, `rotation:c,s` or `dilatation:a1,a2,a3`.
/// Numbers with a slash or plain integers are exact; anything else that
/// parses as a float is kept as a float.
impl FromStr for GeneratorSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, args) = s.split_once(':').unwrap_or((s, ""));
        let nums = || -> Result<Vec<Value>> {
            args.split(',')
                .map(|x| {
                    let x = x.trim();
                    if x.contains(['e', 'E']) || (x.contains('.') && !x.contains('/')) {
                        x.parse::<f64>()
                            .map(Value::Float)
                            .map_err(|_| Error::Parse(format!("bad number {x:?}")))
                    } else {
                        parse_rational(x).map(Value::Exact)
                    }
                })
                .collect()
        };
        match kind.trim() {
            "swap12" => Ok(GeneratorSpec::Swap12),
            "swap13" => Ok(GeneratorSpec::Swap13),
            "rotation" => match nums()?.as_slice() {
                [c, s] => Ok(GeneratorSpec::Rotation {
                    cos: c.clone(),
                    sin: s.clone(),
                }),
                _ => Err(Error::Parse("rotation takes cos,sin".into())),
            },
            "dilatation" => match nums()?.as_slice() {
                [a1, a2, a3] => Ok(GeneratorSpec::Dilatation {
                    a: [a1.clone(), a2.clone(), a3.clone()],
                }),
                _ => Err(Error::Parse("dilatation takes a1,a2,a3".into())),
            },
            other => Err(Error::Parse(format!("unknown generator {other:?}"))),
        }
    }
}
