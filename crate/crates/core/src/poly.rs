//! Sparse multivariate polynomials over the exact rationals.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, so the leading term is the last map entry and
//! canonical form is equality of term maps. Coefficients are rationals:
//! conjugation examples introduce non-integer intermediates even when
//! the inputs are integral.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::roots::RatPoly;

/// Shared, ordered variable universe.
pub type Vars = Arc<Vec<String>>;

pub fn vars_of(names: &[&str]) -> Vars {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

/// Exponent vector under graded lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Expo(pub Vec<u32>);

impl Expo {
    pub fn zero(n: usize) -> Self {
        Expo(vec![0; n])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Expo) -> Expo {
        Expo(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise subtraction; `None` if any component would go
    /// negative.
    pub fn checked_sub(&self, other: &Expo) -> Option<Expo> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(Expo)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&k| k == 0)
    }
}

impl Ord for Expo {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Expo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; the zero polynomial has an empty term map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Expo, BigRational>,
}

impl Poly {
    pub fn zero(vars: Vars) -> Self {
        Self {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Expo::zero(vars.len()), c);
        }
        Self { vars, terms }
    }

    pub fn one(vars: Vars) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn variable(vars: Vars, index: usize) -> Self {
        let mut e = Expo::zero(vars.len());
        e.0[index] = 1;
        Self::monomial(vars, e, BigRational::one())
    }

    pub fn monomial(vars: Vars, expo: Expo, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(expo, coeff);
        }
        Self { vars, terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Expo, BigRational> {
        &self.terms
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().total_degree() == 0)
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// The single term, if the polynomial is a monomial.
    pub fn as_monomial(&self) -> Option<(&Expo, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Expo::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Leading term under graded lex.
    pub fn leading(&self) -> Option<(&Expo, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(Expo::total_degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// All coefficients strictly positive (the subtraction-free test).
    pub fn has_positive_coeffs(&self) -> bool {
        self.terms.values().all(Signed::is_positive)
    }

    fn assert_same_vars(&self, other: &Poly) {
        assert!(
            self.vars == other.vars,
            "polynomials over different variable universes"
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.assert_same_vars(other);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            match terms.get_mut(e) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(e);
                    }
                }
                None => {
                    terms.insert(e.clone(), c.clone());
                }
            }
        }
        Poly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.assert_same_vars(other);
        let mut terms: BTreeMap<Expo, BigRational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.add(eb);
                let c = ca * cb;
                match terms.get_mut(&e) {
                    Some(v) => {
                        *v += c;
                        if v.is_zero() {
                            terms.remove(&e);
                        }
                    }
                    None => {
                        terms.insert(e, c);
                    }
                }
            }
        }
        Poly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn mul_monomial(&self, expo: &Expo, coeff: &BigRational) -> Poly {
        if coeff.is_zero() {
            return Poly::zero(self.vars.clone());
        }
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(expo), c * coeff))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.vars.clone());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact division by iterated leading-term elimination under graded
    /// lex; returns `None` when `other` does not divide `self`.
    pub fn exact_div(&self, other: &Poly) -> Option<Poly> {
        self.assert_same_vars(other);
        assert!(!other.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero(self.vars.clone()));
        }
        let (lead_e, lead_c) = other.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.vars.clone());
        while !rem.is_zero() {
            let (re, rc) = rem.leading().unwrap();
            let qe = re.checked_sub(lead_e)?;
            let qc = rc / lead_c;
            let t = Poly::monomial(self.vars.clone(), qe, qc);
            rem = rem.sub(&t.mul(other));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Componentwise minimum exponent over all terms: the monomial
    /// content.
    pub fn monomial_content(&self) -> Expo {
        let n = self.vars.len();
        let mut out = match self.terms.keys().next() {
            None => return Expo::zero(n),
            Some(e) => e.0.clone(),
        };
        for e in self.terms.keys() {
            for (o, v) in out.iter_mut().zip(&e.0) {
                *o = (*o).min(*v);
            }
        }
        Expo(out)
    }

    /// Divides out an exponent vector (must divide every term).
    pub fn div_monomial(&self, expo: &Expo) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    (
                        e.checked_sub(expo).expect("monomial divides every term"),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Rational content: gcd of numerators over lcm of denominators,
    /// signed so the leading coefficient of `self / content` is positive.
    pub fn rational_content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_integer::gcd(num_gcd, c.numer().clone());
            den_lcm = num_integer::lcm(den_lcm, c.denom().clone());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        content
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(&e.0) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (x, &k) in point.iter().zip(&e.0) {
                t *= x.powu(k);
            }
            acc += t;
        }
        acc
    }

    /// Restriction to the line `t -> (a_1 t + b_1, ..., a_n t + b_n)` as
    /// an exact univariate polynomial.
    pub fn restrict_to_line(&self, a: &[BigRational], b: &[BigRational]) -> RatPoly {
        let n = self.vars.len();
        assert!(a.len() == n && b.len() == n);
        let mut power_cache: Vec<Vec<RatPoly>> = (0..n)
            .map(|i| {
                vec![
                    RatPoly::new(vec![BigRational::one()]),
                    RatPoly::new(vec![b[i].clone(), a[i].clone()]),
                ]
            })
            .collect();
        let mut acc: Vec<BigRational> = vec![];
        for (e, c) in &self.terms {
            let mut term = RatPoly::new(vec![c.clone()]);
            for (i, &k) in e.0.iter().enumerate() {
                let cache = &mut power_cache[i];
                while cache.len() <= k as usize {
                    let next = mul_ratpoly(cache.last().unwrap(), &cache[1]);
                    cache.push(next);
                }
                term = mul_ratpoly(&term, &cache[k as usize]);
            }
            let coeffs = term.coeffs();
            if acc.len() < coeffs.len() {
                acc.resize(coeffs.len(), BigRational::zero());
            }
            for (i, c) in coeffs.iter().enumerate() {
                acc[i] += c;
            }
        }
        RatPoly::new(acc)
    }

    /// Homogenizes into a universe with one extra (last) variable, padding
    /// every term to total degree `target`.
    pub fn homogenize_into(&self, target_vars: Vars, target_degree: u32) -> Result<Poly> {
        if target_vars.len() != self.vars.len() + 1 {
            return Err(Error::DimensionMismatch(
                "homogenization adds exactly one variable".into(),
            ));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.total_degree();
            if d > target_degree {
                return Err(Error::Invalid(format!(
                    "term degree {d} exceeds target {target_degree}"
                )));
            }
            let mut v = e.0.clone();
            v.push(target_degree - d);
            terms.insert(Expo(v), c.clone());
        }
        Ok(Poly {
            vars: target_vars,
            terms,
        })
    }
}

fn mul_ratpoly(a: &RatPoly, b: &RatPoly) -> RatPoly {
    if a.is_zero() || b.is_zero() {
        return RatPoly::zero();
    }
    let mut out = vec![BigRational::zero(); a.coeffs().len() + b.coeffs().len() - 1];
    for (i, ca) in a.coeffs().iter().enumerate() {
        for (j, cb) in b.coeffs().iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    RatPoly::new(out)
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((ea, ca)), Some((eb, cb))) => {
                    let ord = ea.cmp(eb).then_with(|| ca.cmp(cb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let mut printed = false;
            if !mag.is_one() || e.total_degree() == 0 {
                write!(f, "{}", crate::bigutil::format_big_rational(&mag))?;
                printed = true;
            }
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if printed {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.vars[i])?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
                printed = true;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigutil::{rat, rat_int};

    fn xy() -> Vars {
        vars_of(&["x", "y"])
    }

    fn x() -> Poly {
        Poly::variable(xy(), 0)
    }

    fn y() -> Poly {
        Poly::variable(xy(), 1)
    }

    #[test]
    fn graded_lex_leading_term() {
        // x^2 + y^3: graded lex picks y^3 (higher total degree).
        let f = x().pow(2).add(&y().pow(3));
        assert_eq!(f.leading().unwrap().0 .0, vec![0, 3]);
        // x*y vs y^2 at equal degree: lex prefers x*y.
        let g = x().mul(&y()).add(&y().pow(2));
        assert_eq!(g.leading().unwrap().0 .0, vec![1, 1]);
    }

    #[test]
    fn arithmetic_round_trip() {
        let f = x().add(&y()).pow(2);
        let expanded = x()
            .pow(2)
            .add(&x().mul(&y()).scale(&rat_int(2)))
            .add(&y().pow(2));
        assert_eq!(f, expanded);
        assert!(f.sub(&expanded).is_zero());
    }

    #[test]
    fn exact_division_examples() {
        // (y^4 + 2y^2 + 1) / (y^2 + 1) = y^2 + 1
        let d = y().pow(2).add(&Poly::one(xy()));
        let f = d.mul(&d);
        assert_eq!(f.exact_div(&d), Some(d.clone()));
        // (y^4 + 2y^2 + 1 + x^2) / (y^2 + 1) leaves remainder x^2.
        let g = f.add(&x().pow(2));
        assert_eq!(g.exact_div(&d), None);
    }

    #[test]
    fn division_round_trip_on_random_sparse_polys() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let vars = xy();
        for _ in 0..20 {
            let mut rand_poly = |rng: &mut rand_chacha::ChaCha8Rng| {
                let mut acc = Poly::zero(vars.clone());
                for _ in 0..rng.gen_range(1..=8usize) {
                    let e = Expo(vec![rng.gen_range(0..4u32), rng.gen_range(0..4u32)]);
                    let c = rat_int(rng.gen_range(-6i64..=6));
                    acc = acc.add(&Poly::monomial(vars.clone(), e, c));
                }
                acc
            };
            let a = rand_poly(&mut rng);
            let b = rand_poly(&mut rng);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let prod = a.mul(&b);
            assert_eq!(prod.exact_div(&b), Some(a.clone()));
        }
    }

    #[test]
    fn content_extraction() {
        // 6x^2y + 4xy^2 has monomial content xy and rational content 2.
        let f = x()
            .pow(2)
            .mul(&y())
            .scale(&rat_int(6))
            .add(&x().mul(&y().pow(2)).scale(&rat_int(4)));
        assert_eq!(f.monomial_content().0, vec![1, 1]);
        assert_eq!(f.rational_content(), rat_int(2));
        assert_eq!(f.neg().rational_content(), rat_int(-2));
    }

    #[test]
    fn line_restriction_matches_eval() {
        let f = x()
            .pow(3)
            .sub(&y().mul(&x()))
            .add(&Poly::constant(xy(), rat(5, 2)));
        let a = vec![rat_int(2), rat_int(-1)];
        let b = vec![rat_int(1), rat_int(3)];
        let uni = f.restrict_to_line(&a, &b);
        for t in [rat_int(0), rat_int(1), rat(7, 3), rat_int(-2)] {
            let pt: Vec<BigRational> =
                a.iter().zip(&b).map(|(ai, bi)| ai * &t + bi).collect();
            assert_eq!(uni.eval(&t), f.eval(&pt));
        }
    }

    #[test]
    fn homogenize_pads_terms() {
        let f = y().pow(2).add(&Poly::one(xy())); // y^2 + 1
        let xyz = vars_of(&["x", "y", "z"]);
        let h = f.homogenize_into(xyz.clone(), 2).unwrap();
        let y2 = Poly::variable(xyz.clone(), 1).pow(2);
        let z2 = Poly::variable(xyz, 2).pow(2);
        assert_eq!(h, y2.add(&z2));
        assert!(h.is_homogeneous());
        assert!(x()
            .pow(3)
            .homogenize_into(vars_of(&["x", "y", "z"]), 2)
            .is_err());
    }

    #[test]
    fn display_is_stable() {
        let f = y()
            .pow(2)
            .scale(&rat_int(3))
            .add(&x().mul(&y()))
            .sub(&Poly::one(xy()));
        // Graded lex descending: x*y precedes y^2 at equal total degree.
        assert_eq!(f.to_string(), "x*y+3*y^2-1");
    }
}
