//! Expression trees for user-supplied scalar functions of `x_1..x_a`.
//!
//! An [`FnExpr`] is evaluated through an [`ExprAlgebra`]: plain scalars, Taylor
//! jets, or univariate polynomials (for pullbacks along affine lines). One
//! tree therefore gives values, derivatives and exact quadrature inputs.

use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::jet::{Jet, JetSpace};
use super::poly::UPoly;
use super::scalar::{Rational, Scalar, Value};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum FnExpr {
    Const(Value),
    /// Zero-based variable index.
    Var(usize),
    Add(Vec<FnExpr>),
    Sub(Box<FnExpr>, Box<FnExpr>),
    Mul(Vec<FnExpr>),
    Div(Box<FnExpr>, Box<FnExpr>),
    Neg(Box<FnExpr>),
    Pow(Box<FnExpr>, i32),
    Exp(Box<FnExpr>),
    Sin(Box<FnExpr>),
    Cos(Box<FnExpr>),
    Ln(Box<FnExpr>),
    /// `outer(inner_0, inner_1, ...)`: variable `j` of `outer` is bound to
    /// `inner_j`.
    Compose(Box<FnExpr>, Vec<FnExpr>),
}

/// The operations an expression needs from its evaluation domain.
pub trait ExprAlgebra {
    type Elem: Clone;
    fn constant(&self, v: &Value) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn powi(&self, a: &Self::Elem, n: i32) -> Result<Self::Elem>;
    fn exp(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn sin(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn cos(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn ln(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

/// Evaluation to plain scalars.
pub struct Scalars<S>(std::marker::PhantomData<S>);

impl<S> Default for Scalars<S> {
    fn default() -> Self {
        Scalars(std::marker::PhantomData)
    }
}

impl<S: Scalar> ExprAlgebra for Scalars<S> {
    type Elem = S;
    fn constant(&self, v: &Value) -> Result<S> {
        v.to_scalar()
    }
    fn add(&self, a: &S, b: &S) -> S {
        a.clone() + b.clone()
    }
    fn sub(&self, a: &S, b: &S) -> S {
        a.clone() - b.clone()
    }
    fn mul(&self, a: &S, b: &S) -> S {
        a.clone() * b.clone()
    }
    fn neg(&self, a: &S) -> S {
        -a.clone()
    }
    fn div(&self, a: &S, b: &S) -> Result<S> {
        a.checked_div(b)
    }
    fn powi(&self, a: &S, n: i32) -> Result<S> {
        a.powi(n)
    }
    fn exp(&self, a: &S) -> Result<S> {
        a.exp()
    }
    fn sin(&self, a: &S) -> Result<S> {
        a.sin()
    }
    fn cos(&self, a: &S) -> Result<S> {
        a.cos()
    }
    fn ln(&self, a: &S) -> Result<S> {
        a.ln()
    }
}

/// Evaluation to Taylor jets in a fixed [`JetSpace`].
pub struct Jets<S> {
    space: Arc<JetSpace>,
    _s: std::marker::PhantomData<S>,
}

impl<S> Jets<S> {
    pub fn new(space: Arc<JetSpace>) -> Self {
        Jets {
            space,
            _s: std::marker::PhantomData,
        }
    }
}

impl<S: Scalar> ExprAlgebra for Jets<S> {
    type Elem = Jet<S>;
    fn constant(&self, v: &Value) -> Result<Jet<S>> {
        Ok(Jet::constant(&self.space, v.to_scalar()?))
    }
    fn add(&self, a: &Jet<S>, b: &Jet<S>) -> Jet<S> {
        a.add(b)
    }
    fn sub(&self, a: &Jet<S>, b: &Jet<S>) -> Jet<S> {
        a.sub(b)
    }
    fn mul(&self, a: &Jet<S>, b: &Jet<S>) -> Jet<S> {
        a.mul(b)
    }
    fn neg(&self, a: &Jet<S>) -> Jet<S> {
        a.neg()
    }
    fn div(&self, a: &Jet<S>, b: &Jet<S>) -> Result<Jet<S>> {
        a.div(b)
    }
    fn powi(&self, a: &Jet<S>, n: i32) -> Result<Jet<S>> {
        a.powi(n)
    }
    fn exp(&self, a: &Jet<S>) -> Result<Jet<S>> {
        a.exp()
    }
    fn sin(&self, a: &Jet<S>) -> Result<Jet<S>> {
        a.sin()
    }
    fn cos(&self, a: &Jet<S>) -> Result<Jet<S>> {
        a.cos()
    }
    fn ln(&self, a: &Jet<S>) -> Result<Jet<S>> {
        a.ln()
    }
}

/// Evaluation to univariate polynomials. Only polynomial expressions (with
/// divisions by constants) succeed.
pub struct Polys<S>(std::marker::PhantomData<S>);

impl<S> Default for Polys<S> {
    fn default() -> Self {
        Polys(std::marker::PhantomData)
    }
}

impl<S: Scalar> Polys<S> {
    fn on_constant(
        &self,
        a: &UPoly<S>,
        name: &'static str,
        f: impl Fn(&S) -> Result<S>,
    ) -> Result<UPoly<S>> {
        match a.as_constant() {
            Some(c) => Ok(UPoly::constant(f(&c)?)),
            None => Err(Error::Invalid(format!(
                "{name} of a non-constant polynomial"
            ))),
        }
    }
}

impl<S: Scalar> ExprAlgebra for Polys<S> {
    type Elem = UPoly<S>;
    fn constant(&self, v: &Value) -> Result<UPoly<S>> {
        Ok(UPoly::constant(v.to_scalar()?))
    }
    fn add(&self, a: &UPoly<S>, b: &UPoly<S>) -> UPoly<S> {
        a.add(b)
    }
    fn sub(&self, a: &UPoly<S>, b: &UPoly<S>) -> UPoly<S> {
        a.sub(b)
    }
    fn mul(&self, a: &UPoly<S>, b: &UPoly<S>) -> UPoly<S> {
        a.mul(b)
    }
    fn neg(&self, a: &UPoly<S>) -> UPoly<S> {
        a.neg()
    }
    fn div(&self, a: &UPoly<S>, b: &UPoly<S>) -> Result<UPoly<S>> {
        a.div(b)
    }
    fn powi(&self, a: &UPoly<S>, n: i32) -> Result<UPoly<S>> {
        if n >= 0 {
            Ok(a.powi(n as u32))
        } else {
            self.on_constant(a, "negative power", |c| c.powi(n))
        }
    }
    fn exp(&self, a: &UPoly<S>) -> Result<UPoly<S>> {
        self.on_constant(a, "exp", S::exp)
    }
    fn sin(&self, a: &UPoly<S>) -> Result<UPoly<S>> {
        self.on_constant(a, "sin", S::sin)
    }
    fn cos(&self, a: &UPoly<S>) -> Result<UPoly<S>> {
        self.on_constant(a, "cos", S::cos)
    }
    fn ln(&self, a: &UPoly<S>) -> Result<UPoly<S>> {
        self.on_constant(a, "ln", S::ln)
    }
}

impl FnExpr {
    pub fn var(i: usize) -> Self {
        FnExpr::Var(i)
    }

    pub fn int(n: i64) -> Self {
        FnExpr::Const(Value::Exact(super::scalar::int(n)))
    }

    pub fn rat(n: i64, d: i64) -> Self {
        FnExpr::Const(Value::Exact(super::scalar::rat(n, d)))
    }

    pub fn rational(r: Rational) -> Self {
        FnExpr::Const(Value::Exact(r))
    }

    pub fn float(x: f64) -> Self {
        FnExpr::Const(Value::Float(x))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn exp(self) -> Self {
        FnExpr::Exp(Box::new(self))
    }

    pub fn sin(self) -> Self {
        FnExpr::Sin(Box::new(self))
    }

    pub fn cos(self) -> Self {
        FnExpr::Cos(Box::new(self))
    }

    pub fn ln(self) -> Self {
        FnExpr::Ln(Box::new(self))
    }

    pub fn pow(self, n: i32) -> Self {
        FnExpr::Pow(Box::new(self), n)
    }

    /// `self(inner_0, inner_1, ...)`.
    pub fn compose(self, inner: Vec<FnExpr>) -> Self {
        FnExpr::Compose(Box::new(self), inner)
    }

    pub fn eval_in<A: ExprAlgebra>(&self, alg: &A, env: &[A::Elem]) -> Result<A::Elem> {
        Ok(match self {
            FnExpr::Const(v) => alg.constant(v)?,
            FnExpr::Var(i) => env
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::Invalid(format!("variable x{} is not bound", i + 1)))?,
            FnExpr::Add(args) => {
                let mut it = args.iter();
                let Some(first) = it.next() else {
                    return alg.constant(&Value::Exact(super::scalar::int(0)));
                };
                let mut acc = first.eval_in(alg, env)?;
                for a in it {
                    acc = alg.add(&acc, &a.eval_in(alg, env)?);
                }
                acc
            }
            FnExpr::Mul(args) => {
                let mut it = args.iter();
                let Some(first) = it.next() else {
                    return alg.constant(&Value::Exact(super::scalar::int(1)));
                };
                let mut acc = first.eval_in(alg, env)?;
                for a in it {
                    acc = alg.mul(&acc, &a.eval_in(alg, env)?);
                }
                acc
            }
            FnExpr::Sub(a, b) => alg.sub(&a.eval_in(alg, env)?, &b.eval_in(alg, env)?),
            FnExpr::Div(a, b) => alg.div(&a.eval_in(alg, env)?, &b.eval_in(alg, env)?)?,
            FnExpr::Neg(a) => alg.neg(&a.eval_in(alg, env)?),
            FnExpr::Pow(a, n) => alg.powi(&a.eval_in(alg, env)?, *n)?,
            FnExpr::Exp(a) => alg.exp(&a.eval_in(alg, env)?)?,
            FnExpr::Sin(a) => alg.sin(&a.eval_in(alg, env)?)?,
            FnExpr::Cos(a) => alg.cos(&a.eval_in(alg, env)?)?,
            FnExpr::Ln(a) => alg.ln(&a.eval_in(alg, env)?)?,
            FnExpr::Compose(outer, inner) => {
                let vals = inner
                    .iter()
                    .map(|e| e.eval_in(alg, env))
                    .collect::<Result<Vec<_>>>()?;
                outer.eval_in(alg, &vals)?
            }
        })
    }

    pub fn eval<S: Scalar>(&self, point: &[S]) -> Result<S> {
        self.eval_in(&Scalars::default(), point)
    }

    /// Jet of the expression in all variables of `point`.
    pub fn jet<S: Scalar>(&self, space: &Arc<JetSpace>, point: &[S]) -> Result<Jet<S>> {
        let env: Vec<Jet<S>> = point
            .iter()
            .enumerate()
            .map(|(i, p)| Jet::variable(space, i, p.clone()))
            .collect();
        self.eval_in(&Jets::new(space.clone()), &env)
    }

    /// Pullback along the affine line `x(t) = p + t v`, as a polynomial in `t`.
    pub fn along_line<S: Scalar>(&self, p: &[S], v: &[S]) -> Result<UPoly<S>> {
        let env: Vec<UPoly<S>> = p
            .iter()
            .zip(v)
            .map(|(a, b)| UPoly::linear(a.clone(), b.clone()))
            .collect();
        self.eval_in(&Polys::default(), &env)
    }

    /// `true` when every node is polynomial: no transcendental functions,
    /// divisions only by constant subtrees, negative powers only of constants.
    pub fn is_polynomial(&self) -> bool {
        match self {
            FnExpr::Const(_) | FnExpr::Var(_) => true,
            FnExpr::Add(a) | FnExpr::Mul(a) => a.iter().all(Self::is_polynomial),
            FnExpr::Sub(a, b) => a.is_polynomial() && b.is_polynomial(),
            FnExpr::Div(a, b) => a.is_polynomial() && b.is_constant(),
            FnExpr::Neg(a) => a.is_polynomial(),
            FnExpr::Pow(a, n) => a.is_polynomial() && (*n >= 0 || a.is_constant()),
            FnExpr::Exp(a) | FnExpr::Sin(a) | FnExpr::Cos(a) | FnExpr::Ln(a) => a.is_constant(),
            FnExpr::Compose(o, inner) => o.is_polynomial() && inner.iter().all(Self::is_polynomial),
        }
    }

    /// `true` for a literal zero constant (what folded derivatives of
    /// constants become).
    pub fn is_zero(&self) -> bool {
        matches!(self, FnExpr::Const(v) if v.is_zero())
    }

    /// `true` when the expression contains no free variables.
    pub fn is_constant(&self) -> bool {
        match self {
            FnExpr::Const(_) => true,
            FnExpr::Var(_) => false,
            FnExpr::Add(a) | FnExpr::Mul(a) => a.iter().all(Self::is_constant),
            FnExpr::Sub(a, b) | FnExpr::Div(a, b) => a.is_constant() && b.is_constant(),
            FnExpr::Neg(a)
            | FnExpr::Pow(a, _)
            | FnExpr::Exp(a)
            | FnExpr::Sin(a)
            | FnExpr::Cos(a)
            | FnExpr::Ln(a) => a.is_constant(),
            FnExpr::Compose(o, inner) => {
                o.max_var().is_none() || inner.iter().all(Self::is_constant)
            }
        }
    }

    /// `true` when the expression contains a float constant.
    pub fn has_float(&self) -> bool {
        match self {
            FnExpr::Const(v) => matches!(v, Value::Float(_)),
            FnExpr::Var(_) => false,
            FnExpr::Add(a) | FnExpr::Mul(a) => a.iter().any(Self::has_float),
            FnExpr::Sub(a, b) | FnExpr::Div(a, b) => a.has_float() || b.has_float(),
            FnExpr::Neg(a)
            | FnExpr::Pow(a, _)
            | FnExpr::Exp(a)
            | FnExpr::Sin(a)
            | FnExpr::Cos(a)
            | FnExpr::Ln(a) => a.has_float(),
            FnExpr::Compose(o, inner) => o.has_float() || inner.iter().any(Self::has_float),
        }
    }

    /// Largest variable index referenced, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            FnExpr::Const(_) => None,
            FnExpr::Var(i) => Some(*i),
            FnExpr::Add(a) | FnExpr::Mul(a) => a.iter().filter_map(Self::max_var).max(),
            FnExpr::Sub(a, b) | FnExpr::Div(a, b) => a.max_var().max(b.max_var()),
            FnExpr::Neg(a)
            | FnExpr::Pow(a, _)
            | FnExpr::Exp(a)
            | FnExpr::Sin(a)
            | FnExpr::Cos(a)
            | FnExpr::Ln(a) => a.max_var(),
            FnExpr::Compose(o, inner) => {
                if o.max_var().is_none() {
                    None
                } else {
                    inner.iter().filter_map(Self::max_var).max()
                }
            }
        }
    }

    fn exact_value(&self) -> Option<&Rational> {
        match self {
            FnExpr::Const(Value::Exact(r)) => Some(r),
            _ => None,
        }
    }

    fn is_exact(&self, n: i64) -> bool {
        self.exact_value() == Some(&super::scalar::int(n))
    }

    /// Symbolic partial derivative in variable `v`, with constant folding.
    pub fn derivative(&self, v: usize) -> FnExpr {
        use FnExpr::*;
        match self {
            Const(_) => Self::zero(),
            Var(i) => Self::int((*i == v) as i64),
            Add(args) => sum(args.iter().map(|a| a.derivative(v)).collect()),
            Sub(a, b) => diff(a.derivative(v), b.derivative(v)),
            Neg(a) => negate(a.derivative(v)),
            Mul(args) => {
                let mut terms = Vec::new();
                for k in 0..args.len() {
                    let dk = args[k].derivative(v);
                    if dk.is_exact(0) {
                        continue;
                    }
                    let mut factors: Vec<FnExpr> = args.clone();
                    factors[k] = dk;
                    terms.push(product(factors));
                }
                sum(terms)
            }
            Div(a, b) => {
                // (a/b)' = a'/b - a b' / b^2
                let da = a.derivative(v);
                let db = b.derivative(v);
                let first = quotient(da, (**b).clone());
                let second = quotient(product(vec![(**a).clone(), db]), power((**b).clone(), 2));
                diff(first, second)
            }
            Pow(a, n) => {
                if *n == 0 {
                    return Self::zero();
                }
                product(vec![
                    Self::int(*n as i64),
                    power((**a).clone(), n - 1),
                    a.derivative(v),
                ])
            }
            Exp(a) => product(vec![self.clone(), a.derivative(v)]),
            Sin(a) => product(vec![(**a).clone().cos(), a.derivative(v)]),
            Cos(a) => negate(product(vec![(**a).clone().sin(), a.derivative(v)])),
            Ln(a) => quotient(a.derivative(v), (**a).clone()),
            Compose(outer, inner) => {
                let terms = inner
                    .iter()
                    .enumerate()
                    .map(|(j, e)| {
                        let dj = e.derivative(v);
                        if dj.is_exact(0) {
                            return Self::zero();
                        }
                        let douter = outer.derivative(j);
                        if douter.is_exact(0) {
                            return Self::zero();
                        }
                        product(vec![compose_folded(douter, inner.clone()), dj])
                    })
                    .collect();
                sum(terms)
            }
        }
    }
}

fn compose_folded(outer: FnExpr, inner: Vec<FnExpr>) -> FnExpr {
    match outer {
        FnExpr::Const(_) => outer,
        _ => FnExpr::Compose(Box::new(outer), inner),
    }
}

fn sum(terms: Vec<FnExpr>) -> FnExpr {
    let mut konst = super::scalar::int(0);
    let mut rest = Vec::new();
    for t in terms {
        match t {
            FnExpr::Const(Value::Exact(r)) => konst += r,
            FnExpr::Add(inner) => rest.extend(inner),
            other => rest.push(other),
        }
    }
    if !num_traits::Zero::is_zero(&konst) {
        rest.push(FnExpr::Const(Value::Exact(konst)));
    }
    match rest.len() {
        0 => FnExpr::zero(),
        1 => rest.pop().expect("one term"),
        _ => FnExpr::Add(rest),
    }
}

fn product(factors: Vec<FnExpr>) -> FnExpr {
    let mut konst = super::scalar::int(1);
    let mut rest = Vec::new();
    for f in factors {
        match f {
            FnExpr::Const(Value::Exact(r)) => konst *= r,
            FnExpr::Mul(inner) => rest.extend(inner),
            other => rest.push(other),
        }
    }
    if num_traits::Zero::is_zero(&konst) {
        return FnExpr::zero();
    }
    if !num_traits::One::is_one(&konst) || rest.is_empty() {
        rest.insert(0, FnExpr::Const(Value::Exact(konst)));
    }
    match rest.len() {
        1 => rest.pop().expect("one factor"),
        _ => FnExpr::Mul(rest),
    }
}

fn diff(a: FnExpr, b: FnExpr) -> FnExpr {
    if b.is_exact(0) {
        return a;
    }
    sum(vec![a, negate(b)])
}

fn negate(a: FnExpr) -> FnExpr {
    match a {
        FnExpr::Const(Value::Exact(r)) => FnExpr::Const(Value::Exact(-r)),
        FnExpr::Neg(inner) => *inner,
        other => FnExpr::Neg(Box::new(other)),
    }
}

fn quotient(a: FnExpr, b: FnExpr) -> FnExpr {
    if a.is_exact(0) {
        return FnExpr::zero();
    }
    if b.is_exact(1) {
        return a;
    }
    FnExpr::Div(Box::new(a), Box::new(b))
}

fn power(a: FnExpr, n: i32) -> FnExpr {
    match n {
        0 => FnExpr::int(1),
        1 => a,
        _ => FnExpr::Pow(Box::new(a), n),
    }
}

/// Value and mixed partials of `f` at `point` along the variables `dirs`, up
/// to total order `k`. Variables outside `dirs` are held fixed.
pub fn jet_eval<S: Scalar>(f: &FnExpr, point: &[S], dirs: &[usize], k: usize) -> Result<Jet<S>> {
    let space = JetSpace::new(dirs.len(), k);
    let env: Vec<Jet<S>> = point
        .iter()
        .enumerate()
        .map(|(i, p)| match dirs.iter().position(|&d| d == i) {
            Some(slot) => Jet::variable(&space, slot, p.clone()),
            None => Jet::constant(&space, p.clone()),
        })
        .collect();
    f.eval_in(&Jets::new(space.clone()), &env)
}

impl Add for FnExpr {
    type Output = FnExpr;
    fn add(self, o: FnExpr) -> FnExpr {
        sum(vec![self, o])
    }
}

impl Sub for FnExpr {
    type Output = FnExpr;
    fn sub(self, o: FnExpr) -> FnExpr {
        diff(self, o)
    }
}

impl Mul for FnExpr {
    type Output = FnExpr;
    fn mul(self, o: FnExpr) -> FnExpr {
        product(vec![self, o])
    }
}

impl Div for FnExpr {
    type Output = FnExpr;
    fn div(self, o: FnExpr) -> FnExpr {
        quotient(self, o)
    }
}

impl Neg for FnExpr {
    type Output = FnExpr;
    fn neg(self) -> FnExpr {
        negate(self)
    }
}

// JSON: {"var": i}, {"op": "...", "args": [...], "n": k}, or a bare value.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Repr {
    Var {
        var: usize,
    },
    Op {
        op: String,
        args: Vec<FnExpr>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        n: Option<i32>,
    },
    Const(Value),
}

impl Serialize for FnExpr {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let op = |name: &str, args: Vec<FnExpr>| Repr::Op {
            op: name.to_string(),
            args,
            n: None,
        };
        let one = |a: &FnExpr| vec![a.clone()];
        let repr = match self {
            FnExpr::Const(v) => Repr::Const(v.clone()),
            FnExpr::Var(i) => Repr::Var { var: *i },
            FnExpr::Add(a) => op("add", a.clone()),
            FnExpr::Mul(a) => op("mul", a.clone()),
            FnExpr::Sub(a, b) => op("sub", vec![(**a).clone(), (**b).clone()]),
            FnExpr::Div(a, b) => op("div", vec![(**a).clone(), (**b).clone()]),
            FnExpr::Neg(a) => op("neg", one(a)),
            FnExpr::Pow(a, n) => Repr::Op {
                op: "pow".into(),
                args: one(a),
                n: Some(*n),
            },
            FnExpr::Exp(a) => op("exp", one(a)),
            FnExpr::Sin(a) => op("sin", one(a)),
            FnExpr::Cos(a) => op("cos", one(a)),
            FnExpr::Ln(a) => op("ln", one(a)),
            FnExpr::Compose(o, inner) => {
                let mut args = vec![(**o).clone()];
                args.extend(inner.iter().cloned());
                op("compose", args)
            }
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FnExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match Repr::deserialize(d)? {
            Repr::Const(v) => Ok(FnExpr::Const(v)),
            Repr::Var { var } => Ok(FnExpr::Var(var)),
            Repr::Op { op, mut args, n } => {
                let arity = |k: usize| {
                    if args.len() == k {
                        Ok(())
                    } else {
                        Err(D::Error::custom(format!(
                            "op {op:?} takes {k} argument(s), got {}",
                            args.len()
                        )))
                    }
                };
                let unary = |args: &mut Vec<FnExpr>| Box::new(args.remove(0));
                Ok(match op.as_str() {
                    "add" => FnExpr::Add(args),
                    "mul" => FnExpr::Mul(args),
                    "sub" | "div" => {
                        arity(2)?;
                        let b = Box::new(args.pop().expect("two args"));
                        let a = Box::new(args.pop().expect("two args"));
                        if op == "sub" {
                            FnExpr::Sub(a, b)
                        } else {
                            FnExpr::Div(a, b)
                        }
                    }
                    "neg" | "exp" | "sin" | "cos" | "ln" | "pow" => {
                        arity(1)?;
                        let a = unary(&mut args);
                        match op.as_str() {
                            "neg" => FnExpr::Neg(a),
                            "exp" => FnExpr::Exp(a),
                            "sin" => FnExpr::Sin(a),
                            "cos" => FnExpr::Cos(a),
                            "ln" => FnExpr::Ln(a),
                            _ => FnExpr::Pow(
                                a,
                                n.ok_or_else(|| D::Error::custom("pow needs an exponent \"n\""))?,
                            ),
                        }
                    }
                    "compose" => {
                        if args.is_empty() {
                            return Err(D::Error::custom("compose needs an outer expression"));
                        }
                        let outer = unary(&mut args);
                        FnExpr::Compose(outer, args)
                    }
                    other => return Err(D::Error::custom(format!("unknown op {other:?}"))),
                })
            }
        }
    }
}
