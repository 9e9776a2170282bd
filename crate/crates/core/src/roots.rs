//! Complex root estimation for exact integer polynomials.
//!
//! The characteristic polynomial is the only numeric surface: it is split
//! into square-free factors exactly (Yun's algorithm over the rationals),
//! rational roots at +/-1 are deflated exactly, and the remaining simple
//! roots are located by Durand-Kerner simultaneous iteration. Each root
//! carries a residual and a certified modulus interval derived from the
//! Newton-type bound `|w - root| <= deg * |p(w)/p'(w)|`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::IntPolynomial;

/// Default residual target for the simultaneous iteration.
pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 1000;
/// Fixed irrational-angle offset for the initial guesses, so the starting
/// configuration never aligns with real roots or axes.
const SEED_ANGLE_OFFSET: f64 = 0.36787944117144233; // 1/e of a full turn

/// Univariate polynomial over the rationals, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_int(p: &IntPolynomial) -> Self {
        Self::new(
            p.coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        RatPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn monic(&self) -> RatPoly {
        match self.coeffs.last() {
            None => RatPoly::zero(),
            Some(lead) => RatPoly::new(self.coeffs.iter().map(|c| c / lead).collect()),
        }
    }

    fn sub(&self, other: &RatPoly) -> RatPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = other
                .coeffs
                .get(i)
                .cloned()
                .unwrap_or_else(BigRational::zero);
            out.push(a - b);
        }
        RatPoly::new(out)
    }

    /// Euclidean division, returning (quotient, remainder).
    pub fn div_rem(&self, divisor: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let ddeg = divisor.degree();
        let dlead = divisor.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return (RatPoly::zero(), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - ddeg];
        for k in (0..quot.len()).rev() {
            let idx = k + ddeg;
            if rem[idx].is_zero() {
                continue;
            }
            let factor = &rem[idx] / &dlead;
            quot[k] = factor.clone();
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let delta = dc * &factor;
                rem[k + i] -= delta;
            }
        }
        rem.truncate(ddeg);
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun square-free decomposition: returns `(factor, multiplicity)`
    /// pairs with each factor square-free and pairwise coprime.
    pub fn squarefree_decomposition(&self) -> Vec<(RatPoly, usize)> {
        let p = self.monic();
        if p.degree() == 0 {
            return vec![];
        }
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        if a0.degree() == 0 {
            return vec![(p, 1)];
        }
        let mut out = Vec::new();
        let mut b = p.div_rem(&a0).0;
        let mut c = dp.div_rem(&a0).0;
        let mut i = 1usize;
        loop {
            let d = c.sub(&b.derivative());
            let f = b.gcd(&d);
            if f.degree() > 0 {
                out.push((f.clone(), i));
            }
            b = b.div_rem(&f).0;
            c = d.div_rem(&f).0;
            i += 1;
            if b.degree() == 0 {
                break;
            }
        }
        out
    }
}

/// One estimated root with its certificate.
#[derive(Debug, Clone)]
pub struct RootEstimate {
    pub value: Complex64,
    pub multiplicity: usize,
    /// |p(value)| for the square-free factor the root came from.
    pub residual: f64,
    /// Certified interval containing |root|.
    pub modulus_lo: f64,
    pub modulus_hi: f64,
    /// Set when the root is known exactly (deflated rational root).
    pub exact: bool,
}

/// All complex roots of a polynomial, with multiplicity.
#[derive(Debug, Clone)]
pub struct RootEstimates {
    pub roots: Vec<RootEstimate>,
}

impl RootEstimates {
    /// Total root count including multiplicity (= degree of the input).
    pub fn count_with_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots
            .iter()
            .map(|r| r.value.norm())
            .fold(0.0, f64::max)
    }

    /// Certified interval for the maximum modulus.
    pub fn max_modulus_interval(&self) -> (f64, f64) {
        let lo = self
            .roots
            .iter()
            .map(|r| r.modulus_lo)
            .fold(0.0, f64::max);
        let hi = self
            .roots
            .iter()
            .map(|r| r.modulus_hi)
            .fold(0.0, f64::max);
        (lo, hi)
    }
}

/// Finds all complex roots of `p` with residuals below `tol`.
pub fn poly_roots(p: &IntPolynomial, tol: f64) -> Result<RootEstimates> {
    if p.is_zero() || p.degree() == 0 {
        return Err(Error::Invalid(
            "root finding requires a nonconstant polynomial".into(),
        ));
    }
    let rp = RatPoly::from_int(p).monic();
    let mut roots = Vec::new();
    for (factor, multiplicity) in rp.squarefree_decomposition() {
        let mut f = factor;
        // Deflate exact roots at +/-1 so unit-circle decisions stay exact.
        for candidate in [BigRational::one(), -BigRational::one()] {
            while f.degree() >= 1 && f.eval(&candidate).is_zero() {
                let lin = RatPoly::new(vec![-candidate.clone(), BigRational::one()]);
                f = f.div_rem(&lin).0;
                let v = candidate.to_f64().unwrap();
                roots.push(RootEstimate {
                    value: Complex64::new(v, 0.0),
                    multiplicity,
                    residual: 0.0,
                    modulus_lo: 1.0,
                    modulus_hi: 1.0,
                    exact: true,
                });
            }
        }
        if f.degree() == 0 {
            continue;
        }
        for est in durand_kerner(&f, tol)? {
            roots.push(RootEstimate {
                multiplicity,
                ..est
            });
        }
    }
    Ok(RootEstimates { roots })
}

fn durand_kerner(f: &RatPoly, tol: f64) -> Result<Vec<RootEstimate>> {
    let coeffs: Vec<Complex64> = f
        .coeffs()
        .iter()
        .map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
        .collect();
    if coeffs.iter().any(|c| !c.re.is_finite()) {
        return Err(Error::Invalid(
            "polynomial coefficients overflow f64".into(),
        ));
    }
    let deg = f.degree();
    let radius = 1.0
        + coeffs[..deg]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max);
    let tau = std::f64::consts::TAU;
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let theta = tau * (k as f64 / deg as f64 + SEED_ANGLE_OFFSET);
            Complex64::from_polar(radius, theta)
        })
        .collect();

    let eval = |coeffs: &[Complex64], x: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };

    let mut residual = f64::INFINITY;
    for _iter in 0..MAX_ITERATIONS {
        let mut max_res = 0.0f64;
        for i in 0..deg {
            let p = eval(&coeffs, z[i]);
            max_res = max_res.max(p.norm());
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() > 0.0 {
                z[i] -= p / denom;
            }
        }
        residual = max_res;
        if residual < tol {
            break;
        }
    }
    // Re-evaluate residuals at the final iterates.
    let final_res: Vec<f64> = z.iter().map(|&zi| eval(&coeffs, zi).norm()).collect();
    let worst = final_res.iter().cloned().fold(0.0, f64::max);
    if worst >= tol {
        return Err(Error::RootsDidNotConverge {
            residual: worst.max(residual),
            iterations: MAX_ITERATIONS,
        });
    }

    let dcoeffs: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();
    let out = z
        .iter()
        .zip(final_res)
        .map(|(&zi, res)| {
            let dp = eval(&dcoeffs, zi).norm();
            let err = if dp > 0.0 {
                (deg as f64) * res / dp * (1.0 + 1e-9) + 1e-15
            } else {
                f64::INFINITY
            };
            RootEstimate {
                value: zi,
                multiplicity: 1,
                residual: res,
                modulus_lo: (zi.norm() - err).max(0.0),
                modulus_hi: zi.norm() + err,
                exact: false,
            }
        })
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigutil::rat_int;

    #[test]
    fn factorable_quadratic() {
        // t^2 - 5t + 6 has roots 2 and 3.
        let p = IntPolynomial::from_i64(&[6, -5, 1]);
        let roots = poly_roots(&p, 1e-12).unwrap();
        let mut mods: Vec<f64> = roots.roots.iter().map(|r| r.value.norm()).collect();
        mods.sort_by(f64::total_cmp);
        assert!((mods[0] - 2.0).abs() < 1e-12);
        assert!((mods[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn counterexample_cubic_roots() {
        // t^3 + t^2 + t - 1: real root near 0.5437, complex pair near
        // -0.7718 +/- 1.1151i (quoted to two decimals as 0.54, -0.77+/-1.12i).
        let p = IntPolynomial::from_i64(&[-1, 1, 1, 1]);
        let roots = poly_roots(&p, 1e-12).unwrap();
        assert_eq!(roots.count_with_multiplicity(), 3);
        let real = roots
            .roots
            .iter()
            .find(|r| r.value.im.abs() < 1e-9)
            .expect("one real root");
        assert!((real.value.re - 0.5436890126920764).abs() < 1e-10);
        let complex = roots
            .roots
            .iter()
            .find(|r| r.value.im > 1e-9)
            .expect("complex pair");
        assert!((complex.value.re - -0.7718445063460382).abs() < 1e-10);
        assert!((complex.value.im - 1.115142508039937).abs() < 1e-10);
        // Two-decimal agreement with the quoted approximations.
        assert!((real.value.re - 0.54).abs() < 5e-3);
        assert!((complex.value.re - -0.77).abs() < 5e-3);
        assert!((complex.value.im - 1.12).abs() < 5e-3);
    }

    #[test]
    fn gaussian_pair() {
        // t^2 - 2t + 5 has roots 1 +/- 2i.
        let p = IntPolynomial::from_i64(&[5, -2, 1]);
        let roots = poly_roots(&p, 1e-12).unwrap();
        for r in &roots.roots {
            assert!((r.value.re - 1.0).abs() < 1e-12);
            assert!((r.value.im.abs() - 2.0).abs() < 1e-12);
            assert!(r.modulus_lo <= 5f64.sqrt() && 5f64.sqrt() <= r.modulus_hi);
        }
    }

    #[test]
    fn repeated_roots_are_deflated_exactly() {
        // (t - 1)^3: exact deflation, no floating iteration involved.
        let p = IntPolynomial::from_i64(&[-1, 3, -3, 1]);
        let roots = poly_roots(&p, 1e-12).unwrap();
        assert_eq!(roots.roots.len(), 1);
        let r = &roots.roots[0];
        assert_eq!(r.multiplicity, 3);
        assert!(r.exact);
        assert_eq!((r.modulus_lo, r.modulus_hi), (1.0, 1.0));
    }

    #[test]
    fn squarefree_decomposition_splits_multiplicities() {
        // (t-1)^2 (t-2) = t^3 - 4t^2 + 5t - 2
        let p = RatPoly::new(vec![rat_int(-2), rat_int(5), rat_int(-4), rat_int(1)]);
        let decomp = p.squarefree_decomposition();
        assert_eq!(decomp.len(), 2);
        let deg_by_mult: Vec<(usize, usize)> =
            decomp.iter().map(|(f, m)| (f.degree(), *m)).collect();
        assert!(deg_by_mult.contains(&(1, 1)));
        assert!(deg_by_mult.contains(&(1, 2)));
    }

    #[test]
    fn intervals_contain_true_moduli() {
        // Golden ratio polynomial t^2 - t - 1.
        let p = IntPolynomial::from_i64(&[-1, -1, 1]);
        let roots = poly_roots(&p, 1e-12).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let (lo, hi) = roots.max_modulus_interval();
        assert!(lo <= phi && phi <= hi);
        assert!(hi - lo < 1e-9);
    }
}
