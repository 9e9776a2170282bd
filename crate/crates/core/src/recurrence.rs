//! Linear-recurrence detection over exact rationals and iteration of
//! piecewise-linear integer recurrences.
//!
//! Berlekamp-Massey runs in exact rational arithmetic: degree sequences
//! are exact integers and a floating-point detector would report spurious
//! recurrences. "No recurrence" is never claimed outright; the
//! order-growth profile is the empirical witness.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::IntPolynomial;

/// A linear recurrence `s_N = c_1 s_{N-1} + ... + c_L s_{N-L}` with exact
/// rational coefficients. Order 0 generates the zero tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    coeffs: Vec<BigRational>,
}

impl Recurrence {
    pub fn new(coeffs: Vec<BigRational>) -> Self {
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Characteristic polynomial `t^L - c_1 t^(L-1) - ... - c_L`, scaled
    /// to integer coefficients.
    pub fn characteristic_poly(&self) -> IntPolynomial {
        let l = self.order();
        let mut rat = vec![BigRational::zero(); l + 1];
        rat[l] = BigRational::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            rat[l - 1 - i] = -c.clone();
        }
        let denom_lcm = rat
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
        IntPolynomial::new(
            rat.iter()
                .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
                .collect(),
        )
    }
}

impl fmt::Display for Recurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "s_N = 0");
        }
        write!(f, "s_N = ")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})*s_(N-{})", i + 1)?;
        }
        Ok(())
    }
}

/// Minimal-order linear recurrence generating the full prefix, by
/// Berlekamp-Massey over the rationals.
pub fn minimal_recurrence(seq: &[BigRational]) -> Recurrence {
    Recurrence::new(berlekamp_massey(seq))
}

/// Exact check that every term from index `order` on satisfies the
/// relation.
pub fn verify_recurrence(seq: &[BigRational], rec: &Recurrence) -> bool {
    let l = rec.order();
    if seq.len() <= l {
        return false;
    }
    for n in l..seq.len() {
        let mut acc = BigRational::zero();
        for (i, c) in rec.coeffs().iter().enumerate() {
            acc += c * &seq[n - 1 - i];
        }
        if acc != seq[n] {
            return false;
        }
    }
    true
}

/// Minimal Berlekamp-Massey order for each prefix length `2..=len`. A
/// sequence truly satisfying an order-L recurrence plateaus at L; the
/// profile of a non-recurrent sequence keeps growing.
pub fn recurrence_order_profile(seq: &[BigRational]) -> Vec<(usize, usize)> {
    (2..=seq.len())
        .map(|len| (len, berlekamp_massey(&seq[..len]).len()))
        .collect()
}

/// Length of the longest run of equal orders ending the profile.
pub fn final_plateau_length(profile: &[(usize, usize)]) -> usize {
    let Some(&(_, last)) = profile.last() else {
        return 0;
    };
    profile.iter().rev().take_while(|(_, l)| *l == last).count()
}

/// Core Berlekamp-Massey synthesis; returns the recurrence coefficients
/// `c_1..c_L` of the minimal LFSR generating `seq`.
fn berlekamp_massey(seq: &[BigRational]) -> Vec<BigRational> {
    // Connection polynomial c(x) = 1 + a_1 x + ... + a_L x^L with
    // sum_j a_j s_{n-j} = -s_n, i.e. recurrence coefficients are -a_j.
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut b_disc = BigRational::one();
    for n in 0..seq.len() {
        let mut d = seq[n].clone();
        for j in 1..c.len().min(n + 1) {
            d += &c[j] * &seq[n - j];
        }
        if d.is_zero() {
            m += 1;
            continue;
        }
        let coef = &d / &b_disc;
        if 2 * l <= n {
            let t = c.clone();
            sub_scaled_shifted(&mut c, &b, &coef, m);
            b = t;
            l = n + 1 - l;
            b_disc = d;
            m = 1;
        } else {
            sub_scaled_shifted(&mut c, &b, &coef, m);
            m += 1;
        }
    }
    (1..=l)
        .map(|j| {
            c.get(j)
                .map(|a| -a.clone())
                .unwrap_or_else(BigRational::zero)
        })
        .collect()
}

fn sub_scaled_shifted(c: &mut Vec<BigRational>, b: &[BigRational], coef: &BigRational, shift: usize) {
    if c.len() < b.len() + shift {
        c.resize(b.len() + shift, BigRational::zero());
    }
    for (i, bi) in b.iter().enumerate() {
        let delta = coef * bi;
        c[i + shift] -= delta;
    }
}

/// Expression tree of a piecewise-linear recurrence: `{max, min, +, -,
/// integer*term}` over the previous `arity` values. `Lag(1)` is the
/// immediately preceding term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlExpr {
    Lag(usize),
    Int(BigInt),
    Neg(Box<PlExpr>),
    Add(Box<PlExpr>, Box<PlExpr>),
    Sub(Box<PlExpr>, Box<PlExpr>),
    Scale(BigInt, Box<PlExpr>),
    Max(Vec<PlExpr>),
    Min(Vec<PlExpr>),
}

impl PlExpr {
    fn eval(&self, history: &[BigInt]) -> BigInt {
        match self {
            PlExpr::Lag(k) => history[history.len() - k].clone(),
            PlExpr::Int(v) => v.clone(),
            PlExpr::Neg(e) => -e.eval(history),
            PlExpr::Add(a, b) => a.eval(history) + b.eval(history),
            PlExpr::Sub(a, b) => a.eval(history) - b.eval(history),
            PlExpr::Scale(k, e) => k * e.eval(history),
            PlExpr::Max(es) => es.iter().map(|e| e.eval(history)).max().unwrap(),
            PlExpr::Min(es) => es.iter().map(|e| e.eval(history)).min().unwrap(),
        }
    }

    fn max_lag(&self) -> usize {
        match self {
            PlExpr::Lag(k) => *k,
            PlExpr::Int(_) => 0,
            PlExpr::Neg(e) | PlExpr::Scale(_, e) => e.max_lag(),
            PlExpr::Add(a, b) | PlExpr::Sub(a, b) => a.max_lag().max(b.max_lag()),
            PlExpr::Max(es) | PlExpr::Min(es) => es.iter().map(PlExpr::max_lag).max().unwrap_or(0),
        }
    }
}

/// A piecewise-linear recurrence of the given arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlRecurrence {
    arity: usize,
    expr: PlExpr,
}

impl PlRecurrence {
    pub fn new(arity: usize, expr: PlExpr) -> Result<Self> {
        let lag = expr.max_lag();
        if lag == 0 {
            return Err(Error::Invalid(
                "recurrence must reference at least one lag".into(),
            ));
        }
        if lag > arity {
            return Err(Error::Invalid(format!(
                "expression references lag {lag} but arity is {arity}"
            )));
        }
        if arity == 0 {
            return Err(Error::Invalid("arity must be positive".into()));
        }
        Ok(Self { arity, expr })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

/// Iterates the recurrence to `total` terms, the initial values included.
pub fn pl_iterate(rec: &PlRecurrence, init: &[BigInt], total: usize) -> Result<Vec<BigInt>> {
    if init.len() != rec.arity {
        return Err(Error::DimensionMismatch(format!(
            "recurrence of arity {} needs {} initial values, got {}",
            rec.arity,
            rec.arity,
            init.len()
        )));
    }
    let mut out: Vec<BigInt> = init.to_vec();
    while out.len() < total {
        let next = rec.expr.eval(&out);
        out.push(next);
    }
    out.truncate(total);
    Ok(out)
}
