//! Łukasiewicz fuzzy semantics for connectives plus generalized-mean
//! aggregation.
//!
//! Truth degrees live in `[0, 1]`. Connectives:
//!
//! ```text
//! not(a)        = 1 - a
//! and(a, b)     = max(0, a + b - 1)
//! or(a, b)      = min(1, a + b)
//! implies(a, b) = min(1, 1 - a + b)
//! ```
//!
//! A batch of formula degrees is aggregated with the generalized p-mean
//! `((1/N) sum max(d_i, eps)^p)^(1/p)`; `p = -1` gives the harmonic mean.
//! The `eps` clamp keeps the mean finite and differentiable when a degree
//! hits exactly zero under a negative exponent.
//!
//! All connectives are piecewise linear; derivatives at the kink points use
//! the interior linear piece, so gradients are deterministic.

use crate::error::{Error, Result};

/// Epsilon clamp applied inside [`generalized_mean`] by training defaults.
pub const DEGREE_CLAMP: f64 = 1e-12;

/// A truth value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct TruthDegree(f64);

impl TruthDegree {
    pub const ZERO: TruthDegree = TruthDegree(0.0);
    pub const ONE: TruthDegree = TruthDegree(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::invalid(format!(
                "truth degree {value} outside [0, 1]"
            )));
        }
        Ok(TruthDegree(value))
    }

    /// Clamps into `[0, 1]`; used where round-off may leave a value a ulp
    /// outside the interval.
    pub fn clamped(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::Numeric(format!("truth degree {value} not finite")));
        }
        Ok(TruthDegree(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Fuzzy connective kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connective {
    Not,
    And,
    Or,
    Implies,
}

impl Connective {
    pub fn arity(self) -> usize {
        match self {
            Connective::Not => 1,
            _ => 2,
        }
    }
}

pub(crate) fn lukasiewicz_not(a: f64) -> f64 {
    1.0 - a
}

pub(crate) fn lukasiewicz_and(a: f64, b: f64) -> f64 {
    (a + b - 1.0).max(0.0)
}

pub(crate) fn lukasiewicz_or(a: f64, b: f64) -> f64 {
    (a + b).min(1.0)
}

pub(crate) fn lukasiewicz_implies(a: f64, b: f64) -> f64 {
    (1.0 - a + b).min(1.0)
}

/// Applies one Łukasiewicz connective to operand degrees.
pub fn eval_connective(kind: Connective, operands: &[TruthDegree]) -> Result<TruthDegree> {
    if operands.len() != kind.arity() {
        return Err(Error::invalid(format!(
            "{kind:?} takes {} operands, got {}",
            kind.arity(),
            operands.len()
        )));
    }
    let v = match kind {
        Connective::Not => lukasiewicz_not(operands[0].value()),
        Connective::And => lukasiewicz_and(operands[0].value(), operands[1].value()),
        Connective::Or => lukasiewicz_or(operands[0].value(), operands[1].value()),
        Connective::Implies => lukasiewicz_implies(operands[0].value(), operands[1].value()),
    };
    TruthDegree::new(v)
}

/// A fuzzy formula tree over atoms of type `A`.
///
/// `A` is a template variable atom inside constraints and a ground atom
/// everywhere else; the training engine lowers ground formulas to
/// `Formula<usize>` indices into its atom table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula<A> {
    Atom(A),
    Not(Box<Formula<A>>),
    And(Box<Formula<A>>, Box<Formula<A>>),
    Or(Box<Formula<A>>, Box<Formula<A>>),
    Implies(Box<Formula<A>>, Box<Formula<A>>),
}

impl<A> Formula<A> {
    pub fn atom(a: A) -> Self {
        Formula::Atom(a)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Self) -> Self {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    pub fn or(self, rhs: Self) -> Self {
        Formula::Or(Box::new(self), Box::new(rhs))
    }

    pub fn implies(self, rhs: Self) -> Self {
        Formula::Implies(Box::new(self), Box::new(rhs))
    }

    /// Visits every atom in the tree, left to right.
    pub fn for_each_atom(&self, f: &mut impl FnMut(&A)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(c) => c.for_each_atom(f),
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.for_each_atom(f);
                r.for_each_atom(f);
            }
        }
    }

    /// Rebuilds the tree with atoms mapped through `f`.
    pub fn map_atoms<B>(&self, f: &mut impl FnMut(&A) -> B) -> Formula<B> {
        match self {
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Not(c) => Formula::Not(Box::new(c.map_atoms(f))),
            Formula::And(l, r) => {
                Formula::And(Box::new(l.map_atoms(f)), Box::new(r.map_atoms(f)))
            }
            Formula::Or(l, r) => Formula::Or(Box::new(l.map_atoms(f)), Box::new(r.map_atoms(f))),
            Formula::Implies(l, r) => {
                Formula::Implies(Box::new(l.map_atoms(f)), Box::new(r.map_atoms(f)))
            }
        }
    }
}

/// Evaluates a formula given a degree for every atom.
///
/// `degrees` returns `None` for unknown atoms, which is reported as a
/// lookup error.
pub fn eval_formula<A: std::fmt::Debug>(
    formula: &Formula<A>,
    degrees: &impl Fn(&A) -> Option<TruthDegree>,
) -> Result<TruthDegree> {
    let v = eval_raw(formula, &|a| {
        degrees(a)
            .map(|d| d.value())
            .ok_or_else(|| Error::Lookup(format!("no degree supplied for atom {a:?}")))
    })?;
    TruthDegree::new(v)
}

fn eval_raw<A>(formula: &Formula<A>, degree: &impl Fn(&A) -> Result<f64>) -> Result<f64> {
    Ok(match formula {
        Formula::Atom(a) => degree(a)?,
        Formula::Not(c) => lukasiewicz_not(eval_raw(c, degree)?),
        Formula::And(l, r) => lukasiewicz_and(eval_raw(l, degree)?, eval_raw(r, degree)?),
        Formula::Or(l, r) => lukasiewicz_or(eval_raw(l, degree)?, eval_raw(r, degree)?),
        Formula::Implies(l, r) => lukasiewicz_implies(eval_raw(l, degree)?, eval_raw(r, degree)?),
    })
}

/// Evaluates a formula and accumulates `d(formula degree) / d(atom degree)`
/// into `sink` for every atom occurrence.
///
/// Kink convention: at `a + b = 1` (and the analogous implication kink) the
/// derivative of the interior linear piece is used.
pub fn eval_formula_grad<A>(
    formula: &Formula<A>,
    degree: &impl Fn(&A) -> Result<f64>,
    sink: &mut impl FnMut(&A, f64),
) -> Result<f64> {
    backward(formula, degree, 1.0, sink)
}

fn backward<A>(
    formula: &Formula<A>,
    degree: &impl Fn(&A) -> Result<f64>,
    upstream: f64,
    sink: &mut impl FnMut(&A, f64),
) -> Result<f64> {
    Ok(match formula {
        Formula::Atom(a) => {
            let v = degree(a)?;
            sink(a, upstream);
            v
        }
        Formula::Not(c) => lukasiewicz_not(backward(c, degree, -upstream, sink)?),
        Formula::And(l, r) => {
            let lv = eval_raw(l, degree)?;
            let rv = eval_raw(r, degree)?;
            // linear piece active iff a + b - 1 >= 0
            if lv + rv - 1.0 >= 0.0 {
                backward(l, degree, upstream, sink)?;
                backward(r, degree, upstream, sink)?;
            }
            lukasiewicz_and(lv, rv)
        }
        Formula::Or(l, r) => {
            let lv = eval_raw(l, degree)?;
            let rv = eval_raw(r, degree)?;
            // linear piece active iff a + b <= 1
            if lv + rv <= 1.0 {
                backward(l, degree, upstream, sink)?;
                backward(r, degree, upstream, sink)?;
            }
            lukasiewicz_or(lv, rv)
        }
        Formula::Implies(l, r) => {
            let lv = eval_raw(l, degree)?;
            let rv = eval_raw(r, degree)?;
            // linear piece active iff 1 - a + b <= 1, i.e. b <= a
            if rv <= lv {
                backward(l, degree, -upstream, sink)?;
                backward(r, degree, upstream, sink)?;
            }
            lukasiewicz_implies(lv, rv)
        }
    })
}

/// Generalized p-mean of truth degrees with an epsilon clamp.
///
/// Returns `((1/N) sum max(d_i, epsilon)^p)^(1/p)`. `p` must be a nonzero
/// integer; `p = -1` is the harmonic mean.
pub fn generalized_mean(degrees: &[TruthDegree], p: i32, epsilon: f64) -> Result<TruthDegree> {
    let raw: Vec<f64> = degrees.iter().map(|d| d.value()).collect();
    let (mean, _) = generalized_mean_grad(&raw, p, epsilon)?;
    TruthDegree::clamped(mean)
}

/// Generalized p-mean plus its gradient with respect to each degree.
///
/// Degrees below the clamp contribute a constant term, so their gradient is
/// zero.
pub fn generalized_mean_grad(degrees: &[f64], p: i32, epsilon: f64) -> Result<(f64, Vec<f64>)> {
    if degrees.is_empty() {
        return Err(Error::invalid("generalized_mean: empty degree list"));
    }
    if p == 0 {
        return Err(Error::invalid("generalized_mean: p must be nonzero"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::invalid(format!(
            "generalized_mean: epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let n = degrees.len() as f64;
    let mut power_sum = 0.0;
    for &d in degrees {
        if !d.is_finite() {
            return Err(Error::Numeric("generalized_mean: non-finite degree".into()));
        }
        power_sum += d.max(epsilon).powi(p);
    }
    let mean = (power_sum / n).powf(1.0 / p as f64);
    if !mean.is_finite() {
        return Err(Error::Numeric(format!(
            "generalized_mean: mean not finite (p={p})"
        )));
    }
    // dM/dd_i = (1/N) M^(1-p) c_i^(p-1) on the active branch of the clamp
    let scale = mean.powi(1 - p) / n;
    let grad = degrees
        .iter()
        .map(|&d| {
            if d >= epsilon {
                scale * d.max(epsilon).powi(p - 1)
            } else {
                0.0
            }
        })
        .collect();
    Ok((mean, grad))
}
