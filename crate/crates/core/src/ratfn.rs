//! Rational functions with factored denominators.
//!
//! A `RationalFn` is `num / (x^mono * f1^p1 * ... * fk^pk)`. Denominator
//! factors are seeded from the factors appearing syntactically in a map
//! definition (plus individual variables); reduction is trial division
//! of the numerator against that basis plus monomial-content extraction.
//! `gcd_probe` independently certifies, by restriction to random lines,
//! that reduction found every common factor.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::poly::{Expo, Poly, Vars};

/// Multivariate rational function in canonical reduced form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFn {
    num: Poly,
    /// Pure variable powers split out of the denominator.
    mono_den: Expo,
    /// Non-monomial denominator factors with multiplicities, each
    /// canonically normalized and sorted.
    factors: Vec<(Poly, u32)>,
}

impl RationalFn {
    pub fn from_poly(num: Poly) -> Self {
        let n = num.vars().len();
        Self {
            num,
            mono_den: Expo::zero(n),
            factors: vec![],
        }
        .reduced()
    }

    pub fn zero(vars: Vars) -> Self {
        Self::from_poly(Poly::zero(vars))
    }

    pub fn one(vars: Vars) -> Self {
        Self::from_poly(Poly::one(vars))
    }

    pub fn constant(vars: Vars, c: BigRational) -> Self {
        Self::from_poly(Poly::constant(vars, c))
    }

    pub fn variable(vars: Vars, index: usize) -> Self {
        Self::from_poly(Poly::variable(vars, index))
    }

    /// General constructor; normalizes and reduces.
    pub fn new(num: Poly, mono_den: Expo, factors: Vec<(Poly, u32)>) -> Result<Self> {
        for (f, _) in &factors {
            if f.is_zero() {
                return Err(Error::DivisionByZero);
            }
        }
        Ok(Self {
            num,
            mono_den,
            factors,
        }
        .reduced())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn mono_den(&self) -> &Expo {
        &self.mono_den
    }

    pub fn den_factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Laurent form: denominator is a pure monomial.
    pub fn is_laurent(&self) -> bool {
        self.factors.is_empty()
    }

    /// Polynomial (not just Laurent) form.
    pub fn is_polynomial(&self) -> bool {
        self.factors.is_empty() && self.mono_den.is_zero()
    }

    /// Numerator and all denominator factors have strictly positive
    /// coefficients.
    pub fn is_subtraction_free(&self) -> bool {
        self.num.has_positive_coeffs()
            && self.factors.iter().all(|(f, _)| f.has_positive_coeffs())
    }

    /// The denominator expanded to a single polynomial.
    pub fn expanded_den(&self) -> Poly {
        let vars = self.vars().clone();
        let mut den = Poly::monomial(vars, self.mono_den.clone(), BigRational::one());
        for (f, p) in &self.factors {
            den = den.mul(&f.pow(*p));
        }
        den
    }

    /// Canonical normalization: factor content into the numerator, move
    /// monomial factors to `mono_den`, sort/merge factors, trial-divide
    /// the numerator against every factor, then cancel common monomial
    /// content between numerator and `mono_den`.
    fn reduced(mut self) -> Self {
        let vars = self.num.vars().clone();
        if self.num.is_zero() {
            return Self::zero_inner(vars);
        }
        let mut scale = BigRational::one();
        let mut norm_factors: Vec<(Poly, u32)> = Vec::new();
        for (f, p) in std::mem::take(&mut self.factors) {
            if p == 0 {
                continue;
            }
            // Pull out monomial content of the factor.
            let mc = f.monomial_content();
            let f = f.div_monomial(&mc);
            for _ in 0..p {
                self.mono_den = self.mono_den.add(&mc);
            }
            // Pull out rational content (sign normalized on the leading
            // coefficient).
            let rc = f.rational_content();
            let f = f.scale(&rc.recip());
            for _ in 0..p {
                scale *= &rc;
            }
            if f.is_constant() {
                continue; // folded into scale entirely
            }
            match norm_factors.iter_mut().find(|(g, _)| *g == f) {
                Some((_, q)) => *q += p,
                None => norm_factors.push((f, p)),
            }
        }
        self.num = self.num.scale(&scale.recip());

        // Trial-divide the numerator by each factor.
        for (f, p) in &mut norm_factors {
            while *p > 0 {
                match self.num.exact_div(f) {
                    Some(q) => {
                        self.num = q;
                        *p -= 1;
                    }
                    None => break,
                }
            }
        }
        norm_factors.retain(|(_, p)| *p > 0);
        norm_factors.sort_by(|(a, _), (b, _)| a.cmp(b));

        // Cancel monomial content of the numerator against mono_den.
        let content = self.num.monomial_content();
        let common: Expo = Expo(
            content
                .0
                .iter()
                .zip(&self.mono_den.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        );
        if !common.is_zero() {
            self.num = self.num.div_monomial(&common);
            self.mono_den = self.mono_den.checked_sub(&common).unwrap();
        }
        Self {
            num: self.num,
            mono_den: self.mono_den,
            factors: norm_factors,
        }
    }

    fn zero_inner(vars: Vars) -> Self {
        let n = vars.len();
        Self {
            num: Poly::zero(vars),
            mono_den: Expo::zero(n),
            factors: vec![],
        }
    }

    /// Least common denominator of a family, as (monomial part, factor
    /// part): componentwise max of monomial exponents and per-factor max
    /// powers.
    pub fn common_denominator(fs: &[&RationalFn]) -> (Expo, Vec<(Poly, u32)>) {
        assert!(!fs.is_empty());
        let mut mono = fs[0].mono_den.clone();
        let mut factors: Vec<(Poly, u32)> = fs[0].factors.clone();
        for f in &fs[1..] {
            mono = Expo(
                mono.0
                    .iter()
                    .zip(&f.mono_den.0)
                    .map(|(x, y)| *x.max(y))
                    .collect(),
            );
            for (g, p) in &f.factors {
                match factors.iter_mut().find(|(h, _)| h == g) {
                    Some((_, q)) => *q = (*q).max(*p),
                    None => factors.push((g.clone(), *p)),
                }
            }
        }
        (mono, factors)
    }

    /// Numerator of `self` rewritten over the given common denominator
    /// (which must be a multiple of this function's denominator).
    pub fn numerator_over(&self, mono: &Expo, factors: &[(Poly, u32)]) -> Poly {
        self.lift_to(mono, factors)
    }

    fn merge_factor_bases(a: &RationalFn, b: &RationalFn) -> (Expo, Vec<(Poly, u32)>) {
        let mono = Expo(
            a.mono_den
                .0
                .iter()
                .zip(&b.mono_den.0)
                .map(|(x, y)| *x.max(y))
                .collect(),
        );
        let mut factors: Vec<(Poly, u32)> = a.factors.clone();
        for (f, p) in &b.factors {
            match factors.iter_mut().find(|(g, _)| g == f) {
                Some((_, q)) => *q = (*q).max(*p),
                None => factors.push((f.clone(), *p)),
            }
        }
        (mono, factors)
    }

    /// Numerator of `self` when rewritten over the common denominator
    /// `(mono, factors)`.
    fn lift_to(&self, mono: &Expo, factors: &[(Poly, u32)]) -> Poly {
        let extra_mono = mono.checked_sub(&self.mono_den).expect("common multiple");
        let mut out = self
            .num
            .mul_monomial(&extra_mono, &BigRational::one());
        for (f, p) in factors {
            let have = self
                .factors
                .iter()
                .find(|(g, _)| g == f)
                .map(|(_, q)| *q)
                .unwrap_or(0);
            debug_assert!(*p >= have);
            out = out.mul(&f.pow(p - have));
        }
        out
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        assert!(self.vars() == other.vars(), "variable universes differ");
        let (mono, factors) = Self::merge_factor_bases(self, other);
        let num = self.lift_to(&mono, &factors).add(&other.lift_to(&mono, &factors));
        RationalFn {
            num,
            mono_den: mono,
            factors,
        }
        .reduced()
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn {
            num: self.num.neg(),
            mono_den: self.mono_den.clone(),
            factors: self.factors.clone(),
        }
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        assert!(self.vars() == other.vars(), "variable universes differ");
        let mut factors = self.factors.clone();
        for (f, p) in &other.factors {
            match factors.iter_mut().find(|(g, _)| g == f) {
                Some((_, q)) => *q += p,
                None => factors.push((f.clone(), *p)),
            }
        }
        RationalFn {
            num: self.num.mul(&other.num),
            mono_den: self.mono_den.add(&other.mono_den),
            factors,
        }
        .reduced()
    }

    /// Reciprocal: the old numerator joins the denominator basis as a
    /// single factor; the old denominator is expanded into the numerator.
    pub fn recip(&self) -> Result<RationalFn> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let vars = self.vars().clone();
        let mut num = Poly::monomial(vars, self.mono_den.clone(), BigRational::one());
        for (f, p) in &self.factors {
            num = num.mul(&f.pow(*p));
        }
        RationalFn::new(num, Expo::zero(self.vars().len()), vec![(self.num.clone(), 1)])
    }

    pub fn div(&self, other: &RationalFn) -> Result<RationalFn> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, k: i64) -> Result<RationalFn> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut acc = RationalFn::one(self.vars().clone());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Exact evaluation; errors when the denominator vanishes.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        let den = self.expanded_den().eval(point);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(point) / den)
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let trivial_den = self.factors.is_empty() && self.mono_den.is_zero();
        let num_atomic = self.num.term_count() <= 1;
        if trivial_den {
            return write!(f, "{}", self.num);
        }
        if num_atomic && !self.num.to_string().contains(['+', '-', '*', '/']) {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        let vars = self.vars();
        for (i, &k) in self.mono_den.0.iter().enumerate() {
            if k == 0 {
                continue;
            }
            write!(f, "/{}", vars[i])?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
        }
        for (g, p) in &self.factors {
            write!(f, "/({g})")?;
            if *p > 1 {
                write!(f, "^{p}")?;
            }
        }
        Ok(())
    }
}

/// Probabilistic certificate that a family of polynomials has no joint
/// common factor: restrict all of them to `trials` random rational lines
/// and take the minimum over trials of the degree of the univariate gcd.
/// A result of 0 certifies coprimality with high probability; a positive
/// result is an upper bound on the evidence for a common factor.
pub fn gcd_probe(polys: &[&Poly], trials: u32, seed: u64) -> Result<usize> {
    if polys.len() < 2 {
        return Err(Error::Invalid("gcd_probe needs at least two polynomials".into()));
    }
    if polys.iter().any(|p| p.is_zero()) {
        return Err(Error::Invalid("gcd_probe needs nonzero polynomials".into()));
    }
    let n = polys[0].vars().len();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut best: Option<usize> = None;
    let mut attempts = 0u32;
    let mut done = 0u32;
    while done < trials {
        attempts += 1;
        if attempts > trials + 64 {
            return Err(Error::Invalid(
                "gcd_probe kept sampling lines on which a polynomial vanishes".into(),
            ));
        }
        // Small random integers in [-99, 99] from the seeded generator.
        let a: Vec<BigRational> = (0..n)
            .map(|_| crate::bigutil::rat_int(rng.gen_range(-99i64..=99)))
            .collect();
        let b: Vec<BigRational> = (0..n)
            .map(|_| crate::bigutil::rat_int(rng.gen_range(-99i64..=99)))
            .collect();
        let restricted: Vec<_> = polys.iter().map(|p| p.restrict_to_line(&a, &b)).collect();
        if restricted.iter().any(|r| r.is_zero()) {
            continue; // resample
        }
        let mut g = restricted[0].clone();
        for r in &restricted[1..] {
            g = g.gcd(r);
            if g.degree() == 0 {
                break;
            }
        }
        let d = g.degree();
        best = Some(best.map_or(d, |b| b.min(d)));
        if d == 0 {
            return Ok(0);
        }
        done += 1;
    }
    Ok(best.unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigutil::rat_int;
    use crate::poly::vars_of;

    fn xy() -> Vars {
        vars_of(&["x", "y"])
    }

    fn x() -> RationalFn {
        RationalFn::variable(xy(), 0)
    }

    fn y() -> RationalFn {
        RationalFn::variable(xy(), 1)
    }

    /// (y^2+1)/x, the second component of the zero-entropy map.
    fn musiker_component() -> RationalFn {
        let num = Poly::variable(xy(), 1)
            .pow(2)
            .add(&Poly::one(xy()));
        RationalFn::new(num, Expo(vec![1, 0]), vec![]).unwrap()
    }

    #[test]
    fn add_zero_is_identity() {
        let f = musiker_component();
        assert_eq!(f.add(&RationalFn::zero(xy())), f);
    }

    #[test]
    fn mul_inverse_pairs_cancel() {
        let f = x().div(&y()).unwrap();
        let g = y().div(&x()).unwrap();
        assert_eq!(f.mul(&g), RationalFn::one(xy()));
    }

    #[test]
    fn laurent_cancellation() {
        // ((y^2+1)/x)^2 + 1, divided by (y^2+1)/x: the y^2+1 factor must
        // cancel, leaving (y^6+3y^4+3y^2+2x^2y^2+x^4+2x^2+1)/(x^3 y^2)...
        // with the intermediate division by x^2 y^0 folded in, i.e. the
        // result of one more map iteration is computed in ratmap tests.
        let f = musiker_component();
        let g = f.mul(&f).add(&RationalFn::one(xy()));
        let h = g.div(&f).unwrap();
        assert!(h.is_laurent(), "expected Laurent form, got {h}");
        assert_eq!(h.mono_den().0, vec![1, 0]);
        // h = (y^4 + 2y^2 + 1 + x^2) / (x y^0) ... sanity-check by eval.
        let p = vec![rat_int(2), rat_int(3)];
        let lhs = h.eval(&p).unwrap();
        let rhs = g.eval(&p).unwrap() / f.eval(&p).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_consistency_random_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let f = musiker_component();
        let g = x().add(&y()).div(&y()).unwrap();
        for _ in 0..50 {
            let p = vec![
                rat_int(rng.gen_range(1..30i64)),
                rat_int(rng.gen_range(1..30i64)),
            ];
            let sum = f.add(&g).eval(&p).unwrap();
            assert_eq!(sum, f.eval(&p).unwrap() + g.eval(&p).unwrap());
            let prod = f.mul(&g).eval(&p).unwrap();
            assert_eq!(prod, f.eval(&p).unwrap() * g.eval(&p).unwrap());
            let quot = f.div(&g).unwrap().eval(&p).unwrap();
            assert_eq!(quot, f.eval(&p).unwrap() / g.eval(&p).unwrap());
        }
    }

    #[test]
    fn division_by_zero_function_fails() {
        assert!(x().div(&RationalFn::zero(xy())).is_err());
    }

    #[test]
    fn factor_sign_normalization() {
        // 1/(-x^2+y): the factor normalizes to (x^2-y) with the sign
        // pushed into the numerator.
        let den = Poly::variable(xy(), 1).sub(&Poly::variable(xy(), 0).pow(2));
        let f = RationalFn::new(Poly::one(xy()), Expo::zero(2), vec![(den, 1)]).unwrap();
        let (g, p) = &f.den_factors()[0];
        assert_eq!(*p, 1);
        assert_eq!(g.to_string(), "x^2-y");
        assert_eq!(f.num().to_string(), "-1");
    }

    #[test]
    fn gcd_probe_detects_common_factor() {
        let vars = xy();
        let xv = Poly::variable(vars.clone(), 0);
        let yv = Poly::variable(vars.clone(), 1);
        // {x^2 - y^2, x - y} share the factor x - y.
        let a = xv.pow(2).sub(&yv.pow(2));
        let b = xv.sub(&yv);
        let d = gcd_probe(&[&a, &b], 5, 42).unwrap();
        assert!(d >= 1);
    }

    #[test]
    fn gcd_probe_certifies_coprime_triple() {
        // The degree-2 projective tuple (yz, xy, z^2) shares no factor.
        let vars = vars_of(&["x", "y", "z"]);
        let xv = Poly::variable(vars.clone(), 0);
        let yv = Poly::variable(vars.clone(), 1);
        let zv = Poly::variable(vars.clone(), 2);
        let d = gcd_probe(&[&yv.mul(&zv), &xv.mul(&yv), &zv.pow(2)], 5, 1).unwrap();
        assert_eq!(d, 0);
    }

    #[test]
    fn gcd_probe_recovers_planted_factor_degree() {
        use rand::{Rng, SeedableRng};
        let vars = xy();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut rand_poly = |rng: &mut rand_chacha::ChaCha8Rng, deg: u32| {
            let mut acc = Poly::zero(vars.clone());
            for _ in 0..6 {
                let e = Expo(vec![rng.gen_range(0..=deg), rng.gen_range(0..=deg)]);
                acc = acc.add(&Poly::monomial(
                    vars.clone(),
                    e,
                    rat_int(rng.gen_range(1..=5i64)),
                ));
            }
            acc
        };
        for seed in 0..20u64 {
            let g = rand_poly(&mut rng, 2);
            let p = rand_poly(&mut rng, 2);
            let q = rand_poly(&mut rng, 2);
            if g.is_constant() || p.is_zero() || q.is_zero() {
                continue;
            }
            let a = p.mul(&g);
            let b = q.mul(&g);
            let d = gcd_probe(&[&a, &b], 3, seed).unwrap();
            // The planted factor survives restriction on almost every
            // line, so the probe sees at least its degree... unless p and
            // q themselves share more. Either way it cannot miss g.
            assert!(d >= 1);
        }
    }

    #[test]
    fn display_shapes() {
        let f = musiker_component();
        assert_eq!(f.to_string(), "(y^2+1)/x");
        assert_eq!(x().to_string(), "x");
    }
}
