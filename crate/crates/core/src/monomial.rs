//! Monomial maps of projective space, driven entirely by the integer
//! matrix that defines them: the piecewise-linear degree formula, the
//! homogenized exponent matrix, exact degree and chamber sequences, and
//! the signature (zero-pattern) dynamics that carve out the domain of
//! iteration.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;

/// A nonsingular integer matrix regarded as a monomial self-map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    matrix: IntMatrix,
}

impl MonomialMap {
    /// Constructs the map, rejecting singular matrices: the defining datum
    /// must be invertible for the dynamics to make sense.
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        if matrix.determinant().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// `max(0, ...)` over an iterator of big integers.
fn max0<I: IntoIterator<Item = BigInt>>(vals: I) -> BigInt {
    vals.into_iter()
        .fold(BigInt::zero(), |acc, v| if v > acc { v } else { acc })
}

/// Degree of the projective monomial map of `A`:
/// `D(A) = sum_j max(0, max_i(-a_ij)) + max(0, max_i sum_j a_ij)`.
pub fn degree(a: &IntMatrix) -> BigInt {
    let n = a.dim();
    let mut d = BigInt::zero();
    for j in 0..n {
        d += max0((0..n).map(|i| -a.entry(i, j)));
    }
    d + max0((0..n).map(|i| a.row_sum(i)))
}

/// Exact degree sequence `[D(A^1), ..., D(A^nmax)]`. The `N = 0` term
/// (degree 1) is a display convention handled by callers.
pub fn degree_sequence(a: &IntMatrix, nmax: usize) -> Vec<BigInt> {
    a.powers().take(nmax).map(|p| degree(&p)).collect()
}

/// The chamber functional `c_N`: last-row sum of `A^N` minus the trace of
/// `A^N`, for `N = 0 .. count-1`. Indexing starts at the zeroth power so
/// the output aligns with the degree sequence displayed with its leading 1.
pub fn cn_sequence(a: &IntMatrix, count: usize) -> Vec<BigInt> {
    let n = a.dim();
    let mut out = Vec::with_capacity(count);
    let mut powers = a.powers();
    for k in 0..count {
        let p = if k == 0 {
            IntMatrix::identity(n)
        } else {
            powers.next().expect("powers iterator is infinite")
        };
        out.push(p.row_sum(n - 1) - p.trace());
    }
    out
}

/// Which arguments attain one `max(0, ...)` branch of the degree formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Attainment {
    /// Row indices (0-based) attaining the max over matrix arguments.
    pub rows: BTreeSet<usize>,
    /// Whether the 0 branch of `max(0, ...)` attains the max.
    pub zero: bool,
}

/// Exact record of which chamber of the piecewise-linear degree functional
/// a matrix lies in: per-column argmax data plus the row-sum argmax.
/// Equal matrices produce equal keys, and the recorded linear functional
/// reproduces `degree` on the defining matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChamberKey {
    pub cols: Vec<Attainment>,
    pub row: Attainment,
}

impl ChamberKey {
    /// Applies the recorded linear functional `L_C` to a matrix of the
    /// same dimension. Attaining rows all agree on the defining matrix,
    /// so the smallest row index is used as the representative.
    pub fn linear_value(&self, m: &IntMatrix) -> Result<BigInt> {
        if self.cols.len() != m.dim() {
            return Err(Error::DimensionMismatch(
                "chamber key does not match matrix dimension".into(),
            ));
        }
        let mut total = BigInt::zero();
        for (j, att) in self.cols.iter().enumerate() {
            if let Some(&r) = att.rows.iter().next() {
                total -= m.entry(r, j);
            }
        }
        if let Some(&r) = self.row.rows.iter().next() {
            total += m.row_sum(r);
        }
        Ok(total)
    }
}

impl fmt::Display for ChamberKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |att: &Attainment| {
            let rows: Vec<String> = att.rows.iter().map(|r| (r + 1).to_string()).collect();
            let mut s = format!("{{{}}}", rows.join(","));
            if att.zero {
                s.push_str("+0");
            }
            s
        };
        let cols: Vec<String> = self.cols.iter().map(show).collect();
        write!(f, "cols[{}] row{}", cols.join(";"), show(&self.row))
    }
}

/// Records exactly which arguments attain each max in the degree formula,
/// including whether the 0 branch attains.
pub fn chamber_key(m: &IntMatrix) -> ChamberKey {
    let n = m.dim();
    let cols = (0..n)
        .map(|j| {
            let vals: Vec<BigInt> = (0..n).map(|i| -m.entry(i, j)).collect();
            attainment(&vals)
        })
        .collect();
    let sums: Vec<BigInt> = (0..n).map(|i| m.row_sum(i)).collect();
    ChamberKey {
        cols,
        row: attainment(&sums),
    }
}

fn attainment(vals: &[BigInt]) -> Attainment {
    let best = max0(vals.iter().cloned());
    Attainment {
        rows: vals
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == best)
            .map(|(i, _)| i)
            .collect(),
        zero: best.is_zero(),
    }
}

/// The `(n+1) x (n+1)` nonnegative exponent matrix of the projectivized
/// monomial map: row `i` holds the exponents of the `i`-th coordinate
/// monomial. Every row sums to the degree and every column contains a
/// zero (no joint common monomial factor).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomExpMatrix {
    size: usize,
    entries: Vec<BigInt>,
    degree: BigInt,
}

impl HomExpMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn degree(&self) -> &BigInt {
        &self.degree
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.size + j]
    }

    /// Validates the type invariants; `homogenize` output always passes.
    pub fn check_invariants(&self) -> Result<()> {
        let s = self.size;
        if self.entries.iter().any(Signed::is_negative) {
            return Err(Error::Invalid("negative exponent".into()));
        }
        for i in 0..s {
            let sum: BigInt = (0..s).map(|j| self.entry(i, j)).sum();
            if sum != self.degree {
                return Err(Error::Invalid(format!(
                    "row {i} sums to {sum}, expected degree {}",
                    self.degree
                )));
            }
        }
        for j in 0..s {
            if !(0..s).any(|i| self.entry(i, j).is_zero()) {
                return Err(Error::Invalid(format!(
                    "column {j} has no zero entry (common monomial factor)"
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for HomExpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            let row: Vec<String> = (0..self.size).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Homogenized exponent matrix of the monomial map of `A`: multiply each
/// coordinate monomial by the variable powers that clear negative
/// exponents, then pad with the homogenizing variable so all rows reach
/// the common degree `D(A)`.
pub fn homogenize(a: &IntMatrix) -> HomExpMatrix {
    let n = a.dim();
    let s = n + 1;
    let deg = degree(a);
    let m: Vec<BigInt> = (0..n)
        .map(|j| max0((0..n).map(|i| -a.entry(i, j))))
        .collect();
    let mut entries = vec![BigInt::zero(); s * s];
    for i in 0..n {
        let mut row_sum = BigInt::zero();
        for j in 0..n {
            let b = a.entry(i, j) + &m[j];
            row_sum += &b;
            entries[i * s + j] = b;
        }
        entries[i * s + n] = &deg - row_sum;
    }
    for j in 0..n {
        entries[n * s + j] = m[j].clone();
    }
    entries[n * s + n] = max0((0..n).map(|i| a.row_sum(i)));
    let out = HomExpMatrix {
        size: s,
        entries,
        degree: deg,
    };
    debug_assert!(out.check_invariants().is_ok());
    out
}

/// Zero/nonzero pattern of homogeneous coordinates; `true` = nonzero.
/// The all-zero pattern is the non-point and is not a valid signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    bits: Vec<bool>,
}

impl Signature {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.iter().all(|b| !b) {
            return Err(Error::Invalid(
                "all-zero signature is the non-point".into(),
            ));
        }
        Ok(Self { bits })
    }

    pub fn all_ones(len: usize) -> Self {
        Self {
            bits: vec![true; len],
        }
    }

    /// Signature with the given bit pattern, lowest bit = first coordinate.
    pub fn from_mask(mask: u64, len: usize) -> Result<Self> {
        Self::new((0..len).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        write!(f, "({s})")
    }
}

/// One application of the map to a signature: output coordinate `i` is
/// nonzero iff every variable its monomial uses is nonzero. `None` means
/// the image is the non-point (the orbit dies).
pub fn signature_step(b: &HomExpMatrix, s: &Signature) -> Result<Option<Signature>> {
    let n = b.size();
    if s.bits.len() != n {
        return Err(Error::DimensionMismatch(
            "signature length does not match exponent matrix".into(),
        ));
    }
    let bits: Vec<bool> = (0..n)
        .map(|i| (0..n).all(|j| b.entry(i, j).is_zero() || s.bits[j]))
        .collect();
    Ok(Signature::new(bits).ok())
}

/// How a single signature orbit resolves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitFate {
    /// The orbit reaches the non-point after `step` applications.
    Dies { step: usize },
    /// The orbit enters a cycle: `transient` steps before a state that
    /// repeats with the given period.
    Periodic { transient: usize, period: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignatureOrbit {
    pub start: Signature,
    pub fate: OrbitFate,
    /// Steps taken until the orbit resolved (died or revisited a state).
    pub resolved_at: usize,
}

impl SignatureOrbit {
    pub fn survives(&self) -> bool {
        matches!(self.fate, OrbitFate::Periodic { .. })
    }
}

/// Full report over all `2^(n+1) - 1` nonzero signatures.
#[derive(Debug, Clone)]
pub struct SignatureReport {
    pub orbits: Vec<SignatureOrbit>,
}

impl SignatureReport {
    /// Signatures whose entire forward orbit is defined; these describe
    /// the natural domain of the iterated map.
    pub fn survivors(&self) -> Vec<&Signature> {
        self.orbits
            .iter()
            .filter(|o| o.survives())
            .map(|o| &o.start)
            .collect()
    }

    pub fn max_resolution_steps(&self) -> usize {
        self.orbits.iter().map(|o| o.resolved_at).max().unwrap_or(0)
    }
}

/// Classifies every nonzero signature orbit. By pigeonhole every orbit
/// must die or repeat within `2^(n+1)` steps.
pub fn signature_analysis(b: &HomExpMatrix) -> SignatureReport {
    let n = b.size();
    assert!(n <= 24, "signature enumeration is desk-scale only");
    let mut orbits = Vec::with_capacity((1usize << n) - 1);
    for mask in 1u64..(1 << n) {
        let start = Signature::from_mask(mask, n).expect("nonzero mask");
        let mut seen: HashMap<Signature, usize> = HashMap::new();
        let mut cur = start.clone();
        let mut step = 0usize;
        let (fate, resolved_at) = loop {
            seen.insert(cur.clone(), step);
            match signature_step(b, &cur).expect("dimensions agree") {
                None => break (OrbitFate::Dies { step: step + 1 }, step + 1),
                Some(next) => {
                    step += 1;
                    if let Some(&first) = seen.get(&next) {
                        let fate = OrbitFate::Periodic {
                            transient: first,
                            period: step - first,
                        };
                        break (fate, step);
                    }
                    cur = next;
                }
            }
        };
        orbits.push(SignatureOrbit {
            start,
            fate,
            resolved_at,
        });
    }
    SignatureReport { orbits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigutil::big;

    fn fib() -> IntMatrix {
        IntMatrix::from_rows(&[vec![0, 1], vec![1, 1]])
    }

    fn counterexample() -> IntMatrix {
        IntMatrix::from_rows(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![1, 0, 0]])
    }

    #[test]
    fn monomial_map_rejects_singular() {
        let s = IntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]);
        assert!(MonomialMap::new(s).is_err());
        assert!(MonomialMap::new(fib()).is_ok());
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&IntMatrix::identity(3)), big(1));
        assert_eq!(degree(&fib()), big(2));
        assert_eq!(
            degree(&IntMatrix::from_rows(&[vec![1, 1], vec![1, 2]])),
            big(3)
        );
        assert_eq!(degree(&counterexample()), big(2));
    }

    #[test]
    fn degree_sequence_of_identity_is_constant() {
        let seq = degree_sequence(&IntMatrix::identity(2), 6);
        assert!(seq.iter().all(|d| d == &big(1)));
    }

    #[test]
    fn degree_sequence_of_diagonal() {
        // D(diag(2^N, 3^N)) = 3^N by direct evaluation of the formula.
        let d = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        let seq = degree_sequence(&d, 4);
        assert_eq!(seq, vec![big(3), big(9), big(27), big(81)]);
    }

    #[test]
    fn counterexample_degree_sequence() {
        let mut seq = vec![big(1)];
        seq.extend(degree_sequence(&counterexample(), 20));
        let expected: Vec<BigInt> = crate::testdata::COUNTEREXAMPLE_DEGREES
            .iter()
            .map(|&d| big(d))
            .collect();
        assert_eq!(seq, expected);
    }

    #[test]
    fn counterexample_cn_sequence() {
        let cn = cn_sequence(&counterexample(), 21);
        let expected: Vec<BigInt> = crate::testdata::COUNTEREXAMPLE_CN
            .iter()
            .map(|&c| big(c))
            .collect();
        assert_eq!(cn, expected);
    }

    #[test]
    fn cn_satisfies_char_poly_recurrence() {
        // c_N = c_{N-3} - c_{N-2} - c_{N-1}, the Cayley-Hamilton relation.
        let cn = cn_sequence(&counterexample(), 21);
        for n in 3..cn.len() {
            assert_eq!(cn[n], &cn[n - 3] - &cn[n - 2] - &cn[n - 1]);
        }
    }

    #[test]
    fn cn_of_identity_is_constant() {
        // last-row sum 1, trace 3 for every power of the 3x3 identity.
        let cn = cn_sequence(&IntMatrix::identity(3), 5);
        assert!(cn.iter().all(|c| c == &big(-2)));
    }

    #[test]
    fn cn_agreement_positions() {
        // Positions (0-indexed powers) where c_N equals the degree d_N.
        let cn = cn_sequence(&counterexample(), 21);
        let mut deg = vec![big(1)];
        deg.extend(degree_sequence(&counterexample(), 20));
        let agree: Vec<usize> = (0..21).filter(|&i| cn[i] == deg[i]).collect();
        assert_eq!(agree, vec![1, 4, 7, 10, 13, 16]);
    }

    #[test]
    fn chamber_key_of_identity() {
        let key = chamber_key(&IntMatrix::identity(3));
        for (j, att) in key.cols.iter().enumerate() {
            assert!(att.zero, "column {j} max should be the 0 branch");
            // Off-diagonal -a entries are 0 and attain the max.
            assert_eq!(att.rows.len(), 2);
            assert!(!att.rows.contains(&j));
        }
        assert_eq!(key.row.rows.len(), 3);
        assert!(!key.row.zero);
    }

    #[test]
    fn chamber_key_of_counterexample() {
        let key = chamber_key(&counterexample());
        assert_eq!(key.cols[0].rows, BTreeSet::from([0, 1]));
        assert!(!key.cols[0].zero);
        assert_eq!(key.cols[1].rows, BTreeSet::from([1, 2]));
        assert!(key.cols[1].zero);
        assert_eq!(key.cols[2].rows, BTreeSet::from([0, 2]));
        assert!(key.cols[2].zero);
        assert_eq!(key.row.rows, BTreeSet::from([2]));
        assert!(!key.row.zero);
    }

    #[test]
    fn chamber_functional_reproduces_degree() {
        for m in [
            IntMatrix::identity(3),
            fib(),
            counterexample(),
            IntMatrix::from_rows(&[vec![-2, 3], vec![1, -4]]),
        ] {
            let key = chamber_key(&m);
            assert_eq!(key.linear_value(&m).unwrap(), degree(&m));
        }
    }

    #[test]
    fn diagonal_chamber_visits_of_counterexample() {
        // At the powers where c_N = d_N, the chamber has the row-sum max
        // attained by the last row and each column max attained on the
        // diagonal.
        let a = counterexample();
        for (k, p) in a.powers().take(20).enumerate() {
            let n = k + 1;
            let key = chamber_key(&p);
            let diagonal_chamber = key.row.rows.contains(&2)
                && (0..3).all(|j| key.cols[j].rows.contains(&j) || key.cols[j].zero);
            if [1, 4, 7, 10, 13, 16].contains(&n) {
                assert!(diagonal_chamber, "expected diagonal chamber at N={n}");
            }
        }
    }

    #[test]
    fn homogenize_examples() {
        let b = homogenize(&fib());
        let expect = [[0, 1, 1], [1, 1, 0], [0, 0, 2]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b.entry(i, j), &big(expect[i][j]));
            }
        }
        assert_eq!(b.degree(), &big(2));

        let b = homogenize(&IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]));
        let expect = [[1, 0, 1], [1, 1, 0], [0, 0, 2]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b.entry(i, j), &big(expect[i][j]));
            }
        }

        let b = homogenize(&IntMatrix::identity(2));
        let expect = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(b.entry(i, j), &big(expect[i][j]));
            }
        }
    }

    #[test]
    fn homogenize_counterexample_invariants() {
        let b = homogenize(&counterexample());
        b.check_invariants().unwrap();
        assert_eq!(b.degree(), &big(2));
    }

    fn sig(bits: &[u8]) -> Signature {
        Signature::new(bits.iter().map(|&b| b == 1).collect()).unwrap()
    }

    #[test]
    fn signature_steps_on_fib_map() {
        let b = homogenize(&fib());
        // All-ones stays all-ones: the eigentorus never leaves the torus.
        assert_eq!(
            signature_step(&b, &Signature::all_ones(3)).unwrap(),
            Some(Signature::all_ones(3))
        );
        // Not well-defined at (1:0:0).
        assert_eq!(signature_step(&b, &sig(&[1, 0, 0])).unwrap(), None);
        // (1:1:0) survives one step then dies.
        let next = signature_step(&b, &sig(&[1, 1, 0])).unwrap().unwrap();
        assert_eq!(next, sig(&[0, 1, 0]));
        assert_eq!(signature_step(&b, &next).unwrap(), None);
    }

    #[test]
    fn signature_analysis_identity_never_dies() {
        let report = signature_analysis(&homogenize(&IntMatrix::identity(2)));
        assert_eq!(report.orbits.len(), 7);
        assert!(report.orbits.iter().all(SignatureOrbit::survives));
    }

    #[test]
    fn signature_analysis_fib_map() {
        let report = signature_analysis(&homogenize(&fib()));
        let dead: BTreeSet<Signature> = report
            .orbits
            .iter()
            .filter(|o| !o.survives())
            .map(|o| o.start.clone())
            .collect();
        assert_eq!(
            dead,
            BTreeSet::from([sig(&[1, 0, 0]), sig(&[0, 1, 0]), sig(&[1, 1, 0])])
        );
        for orbit in &report.orbits {
            match (&orbit.start, &orbit.fate) {
                (s, OrbitFate::Dies { step }) if *s == sig(&[1, 0, 0]) => assert_eq!(*step, 1),
                (s, OrbitFate::Dies { step }) if *s == sig(&[0, 1, 0]) => assert_eq!(*step, 1),
                (s, OrbitFate::Dies { step }) if *s == sig(&[1, 1, 0]) => assert_eq!(*step, 2),
                _ => {}
            }
        }
        // Pigeonhole bound: everything resolves within 2^(n+1) steps.
        assert!(report.max_resolution_steps() <= 1 << 3);
    }
}
