//! Exact arbitrary-precision integer and rational linear algebra.
//!
//! Everything here is computed over `BigInt`/`BigRational`; no floating
//! point enters determinants, characteristic polynomials, or compound
//! matrices. Matrix powers used for degree sequences are produced by an
//! incremental iterator since the whole prefix is always consumed.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Square matrix with arbitrary-precision integer entries, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Invalid("matrix dimension must be >= 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(Self { n, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must be square");
        Self {
            n,
            entries: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn row_sum(&self, i: usize) -> BigInt {
        self.row(i).iter().sum()
    }

    pub fn trace(&self) -> BigInt {
        (0..self.n).map(|i| self.entry(i, i)).sum()
    }

    /// Exact matrix product; both operands must have the same dimension.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        let n = self.n;
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.entry(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(IntMatrix { n, entries })
    }

    /// Exact `A^N` for `N >= 1`, computed incrementally.
    pub fn pow(&self, n: u32) -> Result<IntMatrix> {
        if n == 0 {
            return Err(Error::Invalid("matrix power requires N >= 1".into()));
        }
        self.powers()
            .nth(n as usize - 1)
            .ok_or_else(|| Error::Invalid("power iterator exhausted".into()))
    }

    /// Iterator over `A, A^2, A^3, ...`; each step is one multiplication,
    /// so consuming a prefix reuses all earlier work.
    pub fn powers(&self) -> MatrixPowers<'_> {
        MatrixPowers {
            base: self,
            current: None,
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        let mut m = self.entries.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            // Pivot selection: any nonzero entry in column k at or below row k.
            if m[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                    m[i * n + j] = num / &prev; // exact by Bareiss
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = m[k * n + k].clone();
        }
        let det = m[(n - 1) * n + (n - 1)].clone();
        if sign < 0 {
            -det
        } else {
            det
        }
    }

    /// Monic characteristic polynomial `det(tI - A)`, exact, via the
    /// Faddeev-LeVerrier trace recursion (every division is exact).
    pub fn char_poly(&self) -> IntPolynomial {
        let n = self.n;
        // coeffs[k] multiplies t^(n-k); coeffs[0] = 1.
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::one();
        let mut m = self.clone();
        for k in 1..=n {
            let c = -(m.trace() / BigInt::from(k as i64));
            debug_assert_eq!(&c * BigInt::from(k as i64), -m.trace());
            coeffs[k] = c.clone();
            if k < n {
                let mut shifted = m.clone();
                for i in 0..n {
                    shifted.entries[i * n + i] += &c;
                }
                m = self.mul(&shifted).expect("same dimension");
            }
        }
        // Store constant term first.
        coeffs.reverse();
        IntPolynomial::new(coeffs)
    }

    /// Adjugate matrix (transpose of cofactors), so `A * adj(A) = det(A) I`.
    pub fn adjugate(&self) -> IntMatrix {
        let n = self.n;
        if n == 1 {
            return IntMatrix::identity(1);
        }
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor_matrix(i, j);
                let cof = minor.determinant();
                let sign_neg = (i + j) % 2 == 1;
                entries[j * n + i] = if sign_neg { -cof } else { cof };
            }
        }
        IntMatrix { n, entries }
    }

    fn minor_matrix(&self, skip_row: usize, skip_col: usize) -> IntMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == skip_row {
                continue;
            }
            for j in 0..n {
                if j == skip_col {
                    continue;
                }
                entries.push(self.entry(i, j).clone());
            }
        }
        IntMatrix {
            n: n - 1,
            entries,
        }
    }

    /// Exact inverse as a rational matrix, via adjugate over determinant.
    pub fn inverse_rational(&self) -> Result<RatMatrix> {
        let det = self.determinant();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let adj = self.adjugate();
        let entries = adj
            .entries
            .iter()
            .map(|e| BigRational::new(e.clone(), det.clone()))
            .collect();
        Ok(RatMatrix {
            n: self.n,
            entries,
        })
    }

    /// `k`-th compound matrix: the `C(n,k) x C(n,k)` matrix of `k x k`
    /// minors, rows and columns indexed by sorted `k`-subsets in
    /// lexicographic order. Its eigenvalues are all `k`-fold products of
    /// eigenvalues of `A`.
    pub fn compound(&self, k: usize) -> Result<IntMatrix> {
        if k == 0 || k > self.n {
            return Err(Error::OutOfRange(format!(
                "compound order {k} not in 1..={}",
                self.n
            )));
        }
        let subsets = k_subsets(self.n, k);
        let m = subsets.len();
        let mut entries = Vec::with_capacity(m * m);
        for rows in &subsets {
            for cols in &subsets {
                let sub: Vec<BigInt> = rows
                    .iter()
                    .flat_map(|&r| cols.iter().map(move |&c| self.entry(r, c).clone()))
                    .collect();
                let minor = IntMatrix {
                    n: k,
                    entries: sub,
                };
                entries.push(minor.determinant());
            }
        }
        Ok(IntMatrix { n: m, entries })
    }

    /// Induced 1-norm (max column absolute sum).
    pub fn norm_one(&self) -> BigInt {
        (0..self.n)
            .map(|j| (0..self.n).map(|i| self.entry(i, j).abs()).sum())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Iterator yielding `A, A^2, A^3, ...`.
pub struct MatrixPowers<'a> {
    base: &'a IntMatrix,
    current: Option<IntMatrix>,
}

impl Iterator for MatrixPowers<'_> {
    type Item = IntMatrix;

    fn next(&mut self) -> Option<IntMatrix> {
        let next = match &self.current {
            None => self.base.clone(),
            Some(c) => c.mul(self.base).expect("same dimension"),
        };
        self.current = Some(next.clone());
        Some(next)
    }
}

/// Sorted `k`-subsets of `{0, .., n-1}` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next subset in lex order.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Integer polynomial, constant term first; the zero polynomial is `[]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Matrix substitution `p(A)`; used for Cayley-Hamilton checks.
    pub fn eval_matrix(&self, a: &IntMatrix) -> Result<IntMatrix> {
        let n = a.dim();
        let mut acc = IntMatrix {
            n,
            entries: vec![BigInt::zero(); n * n],
        };
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(a)?;
            for i in 0..n {
                acc.entries[i * n + i] += c;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    write!(f, "t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Square matrix of exact rationals (reduced, positive denominators —
/// `BigRational` maintains both invariants).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigRational::one();
        }
        Self { n, entries }
    }

    pub fn mul_int(&self, other: &IntMatrix) -> Result<RatMatrix> {
        if self.n != other.dim() {
            return Err(Error::DimensionMismatch("rational * integer".into()));
        }
        let n = self.n;
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.entries[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.entry(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * BigRational::from_integer(b.clone());
                    }
                }
            }
        }
        Ok(RatMatrix { n, entries })
    }
}
