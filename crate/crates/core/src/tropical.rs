//! Max-plus piecewise-linear dynamics.
//!
//! A tropical expression is the pointwise max of finitely many affine
//! forms; a component is a max-plus quotient `num - den` (substitution
//! of quotients into forms with negative coefficients needs subtraction,
//! which the quotient shape absorbs). Canonical form keeps only
//! essential forms — those attaining the strict max somewhere — decided
//! by exact rational LP, never by sampling.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lp::{maximize, LpOutcome};
use crate::poly::Poly;
use crate::ratfn::RationalFn;

/// Default cap on form counts produced by composition.
pub const DEFAULT_FORM_BUDGET: usize = 10_000;

/// An affine form `coeffs . x + constant` with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineForm {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl AffineForm {
    pub fn zero(dim: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); dim],
            constant: BigRational::zero(),
        }
    }

    pub fn from_ints(coeffs: &[i64], constant: i64) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&c| crate::bigutil::rat_int(c)).collect(),
            constant: crate::bigutil::rat_int(constant),
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = self.constant.clone();
        for (c, x) in self.coeffs.iter().zip(point) {
            acc += c * x;
        }
        acc
    }

    fn add(&self, other: &AffineForm) -> AffineForm {
        AffineForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
            constant: &self.constant + &other.constant,
        }
    }

    fn sub(&self, other: &AffineForm) -> AffineForm {
        AffineForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
            constant: &self.constant - &other.constant,
        }
    }

    fn scale(&self, c: &BigRational) -> AffineForm {
        AffineForm {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            constant: &self.constant * c,
        }
    }

    pub fn coeff_sum(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    pub fn l1_norm(&self) -> BigRational {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    fn cmp_key(&self, other: &AffineForm) -> Ordering {
        self.coeffs
            .cmp(&other.coeffs)
            .then_with(|| self.constant.cmp(&other.constant))
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", display_form(self, self.coeffs.len()))
    }
}

/// Pointwise max of affine forms; canonical form stores only essential
/// forms, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropExpr {
    dim: usize,
    forms: Vec<AffineForm>,
}

impl TropExpr {
    /// Builds an expression and canonicalizes it (dedupe + essential
    /// forms + sort). The form list must be nonempty.
    pub fn new(dim: usize, forms: Vec<AffineForm>) -> Result<Self> {
        if forms.is_empty() {
            return Err(Error::Invalid("tropical expression needs a form".into()));
        }
        for f in &forms {
            if f.coeffs.len() != dim {
                return Err(Error::DimensionMismatch(
                    "affine form dimension mismatch".into(),
                ));
            }
        }
        Ok(Self { dim, forms }.canonical())
    }

    pub fn single(form: AffineForm) -> Self {
        let dim = form.coeffs.len();
        Self {
            dim,
            forms: vec![form],
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::single(AffineForm::zero(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn forms(&self) -> &[AffineForm] {
        &self.forms
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.forms
            .iter()
            .map(|f| f.eval(point))
            .max()
            .expect("nonempty")
    }

    /// Max-plus product: pointwise sum, i.e. all pairwise form sums.
    fn product_raw(&self, other: &TropExpr) -> Vec<AffineForm> {
        let mut out = Vec::with_capacity(self.forms.len() * other.forms.len());
        for a in &self.forms {
            for b in &other.forms {
                out.push(a.add(b));
            }
        }
        dedupe(out)
    }

    pub fn product(&self, other: &TropExpr) -> TropExpr {
        TropExpr {
            dim: self.dim,
            forms: self.product_raw(other),
        }
        .canonical()
    }

    /// Scalar multiple by a nonnegative rational (max commutes with
    /// scaling by nonnegative constants, so each form scales in place).
    pub fn scale(&self, c: &BigRational) -> TropExpr {
        assert!(!c.is_negative(), "tropical scaling needs c >= 0");
        if c.is_zero() {
            return TropExpr::zero(self.dim);
        }
        TropExpr {
            dim: self.dim,
            forms: dedupe(self.forms.iter().map(|f| f.scale(c)).collect()),
        }
    }

    fn shift(&self, form: &AffineForm) -> TropExpr {
        TropExpr {
            dim: self.dim,
            forms: self.forms.iter().map(|f| f.add(form)).collect(),
        }
    }

    fn canonical(mut self) -> Self {
        self.forms = essential_subset(self.dim, dedupe(self.forms));
        self.forms.sort_by(AffineForm::cmp_key);
        self
    }

    /// Union of the form sets (the tropical sum, i.e. pointwise max).
    pub fn max_with(&self, other: &TropExpr) -> TropExpr {
        let mut forms = self.forms.clone();
        forms.extend(other.forms.iter().cloned());
        TropExpr {
            dim: self.dim,
            forms: dedupe(forms),
        }
        .canonical()
    }
}

impl fmt::Display for TropExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.forms.len() == 1 {
            return write!(f, "{}", display_form(&self.forms[0], self.dim));
        }
        let parts: Vec<String> = self
            .forms
            .iter()
            .map(|x| display_form(x, self.dim))
            .collect();
        write!(f, "max({})", parts.join(", "))
    }
}

fn var_name(i: usize, dim: usize) -> String {
    const NAMES: &[u8] = b"abcdefgh";
    if dim <= NAMES.len() {
        (NAMES[i] as char).to_string()
    } else {
        format!("x{}", i + 1)
    }
}

fn display_form(form: &AffineForm, dim: usize) -> String {
    use crate::bigutil::format_big_rational as fr;
    let mut out = String::new();
    for (i, c) in form.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push('-');
        } else {
            out.push('+');
        }
        if !mag.is_one() {
            out.push_str(&fr(&mag));
            out.push('*');
        }
        out.push_str(&var_name(i, dim));
    }
    if !form.constant.is_zero() || out.is_empty() {
        if form.constant.is_negative() {
            out.push('-');
            out.push_str(&fr(&form.constant.abs()));
        } else {
            if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&fr(&form.constant));
        }
    }
    out
}

fn dedupe(mut forms: Vec<AffineForm>) -> Vec<AffineForm> {
    forms.sort_by(AffineForm::cmp_key);
    forms.dedup();
    forms
}

/// Keeps exactly the forms that strictly exceed all the others somewhere.
/// The upper envelope of distinct affine forms equals the max over this
/// subset, so the reduction is lossless.
fn essential_subset(dim: usize, forms: Vec<AffineForm>) -> Vec<AffineForm> {
    if forms.len() <= 1 {
        return forms;
    }
    let mut keep = Vec::with_capacity(forms.len());
    for (i, f) in forms.iter().enumerate() {
        let others: Vec<&AffineForm> = forms
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g)
            .collect();
        if strictly_exceeds_somewhere(dim, f, &others) {
            keep.push(f.clone());
        }
    }
    debug_assert!(!keep.is_empty(), "an upper envelope has a facet");
    keep
}

/// Exact LP feasibility: is there a point where `f` strictly exceeds
/// every form in `others`? Decided by maximizing the margin t subject to
/// `f(x) - g(x) >= t`; essential iff sup t > 0 (or unbounded).
fn strictly_exceeds_somewhere(dim: usize, f: &AffineForm, others: &[&AffineForm]) -> bool {
    if others.is_empty() {
        return true;
    }
    // Variables: x = u - v (u, v >= 0), t = tp - tm.
    let nvars = 2 * dim + 2;
    let mut a = Vec::with_capacity(others.len());
    let mut b = Vec::with_capacity(others.len());
    for g in others {
        let d = f.sub(g);
        // -(d . x) + t <= d_const
        let mut row = Vec::with_capacity(nvars);
        for c in &d.coeffs {
            row.push(-c.clone());
        }
        for c in &d.coeffs {
            row.push(c.clone());
        }
        row.push(BigRational::one());
        row.push(-BigRational::one());
        a.push(row);
        b.push(d.constant.clone());
    }
    let mut objective = vec![BigRational::zero(); nvars];
    objective[nvars - 2] = BigRational::one();
    objective[nvars - 1] = -BigRational::one();
    match maximize(&objective, &a, &b) {
        LpOutcome::Unbounded => true,
        LpOutcome::Optimal(v) => v.is_positive(),
        LpOutcome::Infeasible => unreachable!("t can always go to -infinity"),
    }
}

/// Is `f <= max(set)` everywhere? (The negation of "strictly exceeds
/// somewhere".)
fn dominated_by(dim: usize, f: &AffineForm, set: &[AffineForm]) -> bool {
    let refs: Vec<&AffineForm> = set.iter().collect();
    !strictly_exceeds_somewhere(dim, f, &refs)
}

/// Semantic equality of two max expressions: equal essential-form sets.
pub fn equivalent(e1: &TropExpr, e2: &TropExpr) -> bool {
    e1.dim == e2.dim && e1.forms == e2.forms
}

/// A max-plus quotient `num - den`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropComponent {
    num: TropExpr,
    den: TropExpr,
}

impl TropComponent {
    /// Builds and canonicalizes the quotient: essential forms on both
    /// sides, single-form denominators folded into the numerator, and a
    /// pure max-form recovered by exact LP when the quotient is convex.
    pub fn new(num: TropExpr, den: TropExpr) -> Result<Self> {
        if num.dim != den.dim {
            return Err(Error::DimensionMismatch(
                "numerator/denominator dimensions differ".into(),
            ));
        }
        let dim = num.dim;
        let mut num = num.canonical();
        let mut den = den.canonical();
        // Single-form content cancellation: a one-form denominator is an
        // affine shift, folded into the numerator.
        if den.forms.len() == 1 {
            let shift = den.forms[0].clone();
            num = num.shift(&neg_form(&shift));
            den = TropExpr::zero(dim);
            return Ok(Self { num, den });
        }
        // Anchor the denominator at zero: subtract its minimal form from
        // both sides.
        let anchor = den.forms[0].clone();
        num = num.shift(&neg_form(&anchor));
        den = den.shift(&neg_form(&anchor));
        // Convexification: if the quotient is itself an upper envelope,
        // recover it as a pure max. Candidate facets are differences of
        // numerator and denominator forms; a candidate survives iff it
        // never exceeds the quotient, and the surviving set must
        // reproduce the quotient exactly.
        let mut kept: Vec<AffineForm> = Vec::new();
        'cand: for n in &num.forms {
            for d in &den.forms {
                let cand = n.sub(d);
                if kept.contains(&cand) {
                    continue;
                }
                // cand <= num - den  iff  for every den branch d_i,
                // cand <= max_j (num_j - d_i).
                let below = den.forms.iter().all(|di| {
                    let branch: Vec<AffineForm> =
                        num.forms.iter().map(|nj| nj.sub(di)).collect();
                    dominated_by(dim, &cand, &branch)
                });
                if below {
                    kept.push(cand);
                    if kept.len() > num.forms.len() * den.forms.len() {
                        break 'cand;
                    }
                }
            }
        }
        if !kept.is_empty() {
            let pure = TropExpr {
                dim,
                forms: dedupe(kept),
            }
            .canonical();
            let candidate = Self {
                num: pure,
                den: TropExpr::zero(dim),
            };
            let quotient = Self {
                num: num.clone(),
                den: den.clone(),
            };
            if candidate.equivalent(&quotient) {
                return Ok(candidate);
            }
        }
        Ok(Self { num, den })
    }

    pub fn from_forms(num: Vec<AffineForm>, den: Vec<AffineForm>) -> Result<Self> {
        let dim = num
            .first()
            .map(|f| f.coeffs.len())
            .ok_or_else(|| Error::Invalid("empty numerator".into()))?;
        Self::new(TropExpr::new(dim, num)?, TropExpr::new(dim, den)?)
    }

    /// Pure max expression (denominator is the zero form).
    pub fn pure(num: TropExpr) -> Self {
        let dim = num.dim;
        Self {
            num: num.canonical(),
            den: TropExpr::zero(dim),
        }
    }

    pub fn num(&self) -> &TropExpr {
        &self.num
    }

    pub fn den(&self) -> &TropExpr {
        &self.den
    }

    pub fn dim(&self) -> usize {
        self.num.dim
    }

    pub fn is_pure(&self) -> bool {
        self.den.forms.len() == 1 && self.den.forms[0] == AffineForm::zero(self.num.dim)
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.num.eval(point) - self.den.eval(point)
    }

    /// Semantic equality of quotients: `n1 - d1 = n2 - d2` iff
    /// `n1 + d2 = n2 + d1` as upper envelopes.
    pub fn equivalent(&self, other: &TropComponent) -> bool {
        equivalent(
            &self.num.product(&other.den),
            &other.num.product(&self.den),
        )
    }

    fn neg(&self) -> TropComponent {
        TropComponent {
            num: self.den.clone(),
            den: self.num.clone(),
        }
    }

    fn add(&self, other: &TropComponent) -> Result<TropComponent> {
        TropComponent::new(
            self.num.product(&other.num),
            self.den.product(&other.den),
        )
    }

    fn scale_signed(&self, c: &BigRational) -> TropComponent {
        if c.is_negative() {
            let p = -c.clone();
            TropComponent {
                num: self.den.scale(&p),
                den: self.num.scale(&p),
            }
        } else {
            TropComponent {
                num: self.num.scale(c),
                den: self.den.scale(c),
            }
        }
    }

    /// Tropical max of two quotients, over a common denominator.
    fn max_with(&self, other: &TropComponent) -> Result<TropComponent> {
        let n1 = self.num.product(&other.den);
        let n2 = other.num.product(&self.den);
        TropComponent::new(n1.max_with(&n2), self.den.product(&other.den))
    }
}

fn neg_form(f: &AffineForm) -> AffineForm {
    AffineForm {
        coeffs: f.coeffs.iter().map(|c| -c).collect(),
        constant: -f.constant.clone(),
    }
}

impl fmt::Display for TropComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_pure() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) - ({})", self.num, self.den)
        }
    }
}

/// A piecewise-linear self-map: one max-plus quotient per coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropMap {
    dim: usize,
    components: Vec<TropComponent>,
}

impl TropMap {
    pub fn new(components: Vec<TropComponent>) -> Result<Self> {
        let dim = components.len();
        if dim == 0 {
            return Err(Error::Invalid("tropical map needs components".into()));
        }
        if components.iter().any(|c| c.dim() != dim) {
            return Err(Error::DimensionMismatch(
                "component count must equal dimension".into(),
            ));
        }
        Ok(Self { dim, components })
    }

    pub fn identity(dim: usize) -> Self {
        let components = (0..dim)
            .map(|i| {
                let mut f = AffineForm::zero(dim);
                f.coeffs[i] = BigRational::one();
                TropComponent::pure(TropExpr::single(f))
            })
            .collect();
        Self { dim, components }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[TropComponent] {
        &self.components
    }

    pub fn evaluate(&self, point: &[BigRational]) -> Result<Vec<BigRational>> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch("point dimension".into()));
        }
        Ok(self.components.iter().map(|c| c.eval(point)).collect())
    }

    /// `self . other` (apply `other` first), canonicalized, with a form
    /// budget guarding the intermediate expansion.
    pub fn compose_budgeted(&self, other: &TropMap, budget: usize) -> Result<TropMap> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch("composing different dims".into()));
        }
        let components = self
            .components
            .iter()
            .map(|c| substitute_component(c, other, budget))
            .collect::<Result<Vec<_>>>()?;
        TropMap::new(components)
    }

    pub fn compose(&self, other: &TropMap) -> Result<TropMap> {
        self.compose_budgeted(other, DEFAULT_FORM_BUDGET)
    }

    /// N-th iterate by repeated composition with canonicalization.
    pub fn iterate(&self, n: u32) -> Result<TropMap> {
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn equivalent(&self, other: &TropMap) -> bool {
        self.dim == other.dim
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.equivalent(b))
    }

    /// Upper bound on the Lipschitz constant in the sup metric: max over
    /// components of (max l1-norm among numerator forms + max l1-norm
    /// among denominator forms).
    pub fn lipschitz_bound(&self) -> BigRational {
        self.components
            .iter()
            .map(|c| {
                let n = c
                    .num
                    .forms()
                    .iter()
                    .map(AffineForm::l1_norm)
                    .max()
                    .unwrap_or_else(BigRational::zero);
                let d = c
                    .den
                    .forms()
                    .iter()
                    .map(AffineForm::l1_norm)
                    .max()
                    .unwrap_or_else(BigRational::zero);
                n + d
            })
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Homogeneity weight: `m` such that every essential form of every
    /// component has coefficient sum `m` (numerator sum minus denominator
    /// sum for every pairing). `None` when inhomogeneous.
    pub fn homogeneity(&self) -> Option<BigRational> {
        let mut m: Option<BigRational> = None;
        for c in &self.components {
            let mut num_sums = c.num.forms().iter().map(AffineForm::coeff_sum);
            let first_num = num_sums.next().expect("nonempty");
            if num_sums.any(|s| s != first_num) {
                return None;
            }
            let mut den_sums = c.den.forms().iter().map(AffineForm::coeff_sum);
            let first_den = den_sums.next().expect("nonempty");
            if den_sums.any(|s| s != first_den) {
                return None;
            }
            let this = first_num - first_den;
            match &m {
                None => m = Some(this),
                Some(v) if *v == this => {}
                _ => return None,
            }
        }
        m
    }

    /// Evaluation on the quotient modulo multiples of (1,..,1): applies
    /// the map and normalizes the representative so its last coordinate
    /// is 0. Only meaningful for homogeneous maps.
    pub fn quotient_evaluate(&self, point: &[BigRational]) -> Result<Vec<BigRational>> {
        let image = self.evaluate(point)?;
        Ok(quotient_representative(&image))
    }
}

/// Canonical representative of a point modulo the diagonal: subtracts the
/// last coordinate from every coordinate.
pub fn quotient_representative(v: &[BigRational]) -> Vec<BigRational> {
    let last = v.last().cloned().unwrap_or_else(BigRational::zero);
    v.iter().map(|x| x - &last).collect()
}

fn substitute_component(
    c: &TropComponent,
    g: &TropMap,
    budget: usize,
) -> Result<TropComponent> {
    let num_side = substitute_expr(&c.num, g, budget)?;
    let den_side = substitute_expr(&c.den, g, budget)?;
    let num = num_side.num.product(&den_side.den);
    let den = num_side.den.product(&den_side.num);
    check_budget(num.forms.len().max(den.forms.len()), budget)?;
    TropComponent::new(num, den)
}

/// Substitutes the components of `g` into a max of affine forms,
/// producing a quotient: each form becomes a quotient, and the max is
/// combined over a common max-plus denominator.
fn substitute_expr(e: &TropExpr, g: &TropMap, budget: usize) -> Result<TropComponent> {
    let dim = g.dim;
    let mut acc: Option<TropComponent> = None;
    for form in e.forms() {
        let mut num = TropExpr::single(AffineForm {
            coeffs: vec![BigRational::zero(); dim],
            constant: form.constant.clone(),
        });
        let mut den = TropExpr::zero(dim);
        for (j, alpha) in form.coeffs.iter().enumerate() {
            if alpha.is_zero() {
                continue;
            }
            let comp = &g.components[j];
            if alpha.is_positive() {
                num = num.product(&comp.num.scale(alpha));
                den = den.product(&comp.den.scale(alpha));
            } else {
                let p = -alpha.clone();
                num = num.product(&comp.den.scale(&p));
                den = den.product(&comp.num.scale(&p));
            }
            check_budget(num.forms.len().max(den.forms.len()), budget)?;
        }
        let q = TropComponent { num, den };
        acc = Some(match acc {
            None => q,
            Some(prev) => {
                let merged = prev.max_with(&q)?;
                check_budget(merged.num.forms.len().max(merged.den.forms.len()), budget)?;
                merged
            }
        });
    }
    Ok(acc.expect("expression has at least one form"))
}

fn check_budget(forms: usize, budget: usize) -> Result<()> {
    if forms > budget {
        return Err(Error::FormBudgetExceeded { forms, budget });
    }
    Ok(())
}

/// Tropicalization of a subtraction-free rational function: each
/// polynomial becomes the max of `exponent . a` over its support
/// (coefficients dropped), and the fraction becomes numerator minus
/// denominator.
pub fn tropicalize(f: &RationalFn) -> Result<TropComponent> {
    if f.is_zero() {
        return Err(Error::NotSubtractionFree(
            "the zero function has no subtraction-free form".into(),
        ));
    }
    if !f.is_subtraction_free() {
        return Err(Error::NotSubtractionFree(format!("{f}")));
    }
    let dim = f.vars().len();
    let num = trop_of_poly(f.num());
    let mut den = TropExpr::single(AffineForm {
        coeffs: f
            .mono_den()
            .0
            .iter()
            .map(|&k| crate::bigutil::rat_int(k as i64))
            .collect(),
        constant: BigRational::zero(),
    });
    for (g, p) in f.den_factors() {
        let tg = trop_of_poly(g);
        den = den.product(&tg.scale(&crate::bigutil::rat_int(*p as i64)));
    }
    let _ = dim;
    TropComponent::new(num, den)
}

fn trop_of_poly(p: &Poly) -> TropExpr {
    let dim = p.vars().len();
    let forms: Vec<AffineForm> = p
        .terms()
        .keys()
        .map(|e| AffineForm {
            coeffs: e.0.iter().map(|&k| crate::bigutil::rat_int(k as i64)).collect(),
            constant: BigRational::zero(),
        })
        .collect();
    TropExpr { dim, forms }.canonical()
}
