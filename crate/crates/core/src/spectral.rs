//! Entropy quantities of a monomial map: spectral radius, algebraic
//! entropy, the toral lower bound, and the conjectural intermediate
//! dynamical degrees via compound matrices.
//!
//! Every eigenvalue modulus comes from the exact characteristic
//! polynomial; where two computation routes exist (root products vs
//! compound-matrix spectral radii) both are computed and cross-checked.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bigutil::ln_bigint;
use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::monomial::degree;
use crate::roots::{poly_roots, RootEstimates, DEFAULT_TOL};

/// How many powers the Gelfand cross-check inspects by default.
pub const DEFAULT_GELFAND_CAP: u32 = 24;

/// Spectral radius with a certified enclosure.
#[derive(Debug, Clone, Copy)]
pub struct SpectralRadius {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

impl SpectralRadius {
    pub fn error_bound(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }
}

/// All complex roots of the characteristic polynomial of `a`.
pub fn eigenvalues(a: &IntMatrix, tol: f64) -> Result<RootEstimates> {
    poly_roots(&a.char_poly(), tol)
}

/// Maximum eigenvalue modulus, cross-checked against the Gelfand upper
/// bound `||A^N||_1^(1/N) >= rho(A)` for powers up to `gelfand_cap`.
pub fn spectral_radius_with(a: &IntMatrix, tol: f64, gelfand_cap: u32) -> Result<SpectralRadius> {
    let roots = eigenvalues(a, tol)?;
    let (lo, hi) = roots.max_modulus_interval();
    let value = roots.max_modulus();
    for (k, p) in a.powers().take(gelfand_cap as usize).enumerate() {
        let norm = p.norm_one();
        if norm.is_zero() {
            // Nilpotent: spectral radius must be 0.
            if lo > 1e-9 {
                return Err(Error::CrossCheckFailed(format!(
                    "A^{} vanishes but spectral radius lower bound is {lo}",
                    k + 1
                )));
            }
            break;
        }
        let gelfand = ln_bigint(&norm) / (k + 1) as f64;
        if value > 0.0 && value.ln() > gelfand + 1e-9 {
            return Err(Error::CrossCheckFailed(format!(
                "spectral radius {value} exceeds Gelfand bound exp({gelfand}) at N={}",
                k + 1
            )));
        }
    }
    Ok(SpectralRadius { value, lo, hi })
}

pub fn spectral_radius(a: &IntMatrix) -> Result<SpectralRadius> {
    spectral_radius_with(a, DEFAULT_TOL, DEFAULT_GELFAND_CAP)
}

/// Algebraic entropy of the monomial map of `a`: log of the spectral
/// radius (in nats). Requires a nonsingular matrix.
pub fn algebraic_entropy(a: &IntMatrix) -> Result<f64> {
    if a.determinant().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let r = spectral_radius(a)?;
    Ok(r.value.ln())
}

/// Spectral radius of `A^{-1}` computed on the integer side: the adjugate
/// has integer entries and `A^{-1} = adj(A)/det(A)`, so
/// `rho(A^{-1}) = rho(adj(A)) / |det(A)|`.
pub fn spectral_radius_of_inverse(a: &IntMatrix) -> Result<f64> {
    let det = a.determinant();
    if det.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let adj = a.adjugate();
    let r = spectral_radius(&adj)?;
    Ok((r.value.ln() - ln_bigint(&det.abs())).exp())
}

/// Toral entropy computed two independent ways.
#[derive(Debug, Clone, Copy)]
pub struct ToralEntropy {
    /// Preferred value (compound route for small matrices).
    pub value: f64,
    /// Route 1: sum of log-moduli of eigenvalues outside the unit circle.
    pub root_route: f64,
    /// Route 2: max over k of log spectral radius of the k-th compound.
    pub compound_route: f64,
    /// Set when some eigenvalue-modulus interval straddles the unit
    /// circle, so membership in the sum could not be certified.
    pub ambiguous: bool,
}

/// Topological entropy of the toral endomorphism of `a`: the log-modulus
/// of the product of eigenvalues outside the unit circle. Both routes
/// must agree within their combined error bounds.
pub fn toral_entropy(a: &IntMatrix) -> Result<ToralEntropy> {
    toral_entropy_with(a, DEFAULT_TOL)
}

pub fn toral_entropy_with(a: &IntMatrix, tol: f64) -> Result<ToralEntropy> {
    if a.determinant().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let roots = eigenvalues(a, tol)?;
    let mut root_route = 0.0;
    let mut ambiguous = false;
    for r in &roots.roots {
        if r.modulus_lo > 1.0 {
            root_route += (r.multiplicity as f64) * r.value.norm().ln();
        } else if r.modulus_hi > 1.0 {
            // Interval straddles the unit circle: report, do not guess.
            ambiguous = true;
            let m = r.value.norm();
            if m > 1.0 {
                root_route += (r.multiplicity as f64) * m.ln();
            }
        }
    }

    let degrees = dynamical_degrees(a)?;
    let compound_route = degrees
        .iter()
        .map(|d| d.log_value)
        .fold(0.0, f64::max);

    if (root_route - compound_route).abs() > 1e-8 && !ambiguous {
        return Err(Error::CrossCheckFailed(format!(
            "toral entropy routes disagree: roots {root_route} vs compounds {compound_route}"
        )));
    }
    let value = if a.dim() <= 8 {
        compound_route
    } else {
        root_route
    };
    Ok(ToralEntropy {
        value,
        root_route,
        compound_route,
        ambiguous,
    })
}

/// One conjectural dynamical degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DynamicalDegree {
    pub k: usize,
    /// log |lambda_1 ... lambda_k| = log spectral radius of the k-th
    /// compound matrix.
    pub log_value: f64,
    pub error_bound: f64,
    /// The identification with intersection-theoretic dynamical degrees
    /// is proven for k = 1 and k = n, conjectural in between.
    pub conjectural: bool,
}

/// log of the k-th dynamical degree for k = 1..n, via compound matrices.
pub fn dynamical_degrees(a: &IntMatrix) -> Result<Vec<DynamicalDegree>> {
    let n = a.dim();
    if a.determinant().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let comp = a.compound(k)?;
        let r = spectral_radius(&comp)?;
        let log_value = if r.value > 0.0 { r.value.ln() } else { f64::NEG_INFINITY };
        out.push(DynamicalDegree {
            k,
            log_value,
            error_bound: (r.hi.max(1e-300).ln() - r.lo.max(1e-300).ln()).abs() / 2.0,
            conjectural: k != 1 && k != n,
        });
    }
    // k = n is exactly log |det A|; cross-check the numeric route.
    let det = a.determinant();
    let exact_top = ln_bigint(&det.abs());
    let top = out.last().expect("n >= 1");
    if (top.log_value - exact_top).abs() > 1e-8 {
        return Err(Error::CrossCheckFailed(format!(
            "top dynamical degree {} differs from log|det| {exact_top}",
            top.log_value
        )));
    }
    Ok(out)
}

/// Finite convergence profile of `(1/N) log D(A^N)` toward the entropy.
#[derive(Debug, Clone)]
pub struct ConvergenceProfile {
    pub points: Vec<(usize, f64)>,
    /// Deviation from log spectral radius at the last computed N.
    pub deviation_at_end: f64,
}

pub fn convergence_profile(a: &IntMatrix, nmax: usize) -> Result<ConvergenceProfile> {
    if nmax == 0 {
        return Err(Error::Invalid("profile requires N >= 1".into()));
    }
    let h = algebraic_entropy(a)?;
    let points: Vec<(usize, f64)> = a
        .powers()
        .take(nmax)
        .enumerate()
        .map(|(k, p)| {
            let n = k + 1;
            (n, ln_bigint(&degree(&p)) / n as f64)
        })
        .collect();
    let deviation_at_end = (points.last().unwrap().1 - h).abs();
    Ok(ConvergenceProfile {
        points,
        deviation_at_end,
    })
}

/// Full entropy report for a matrix, as serialized by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntropyReport {
    pub algebraic_entropy: f64,
    pub toral_entropy: f64,
    pub dynamical_degrees: Vec<f64>,
    pub conjectural: Vec<bool>,
    pub error_bounds: Vec<f64>,
    pub ambiguous_unit_circle: bool,
}

pub fn entropy_report(a: &IntMatrix) -> Result<EntropyReport> {
    let degrees = dynamical_degrees(a)?;
    let toral = toral_entropy(a)?;
    let report = EntropyReport {
        algebraic_entropy: degrees[0].log_value,
        toral_entropy: toral.value,
        dynamical_degrees: degrees.iter().map(|d| d.log_value).collect(),
        conjectural: degrees.iter().map(|d| d.conjectural).collect(),
        error_bounds: degrees.iter().map(|d| d.error_bound).collect(),
        ambiguous_unit_circle: toral.ambiguous,
    };
    // The first dynamical degree is the algebraic entropy by definition;
    // the toral entropy is the running maximum (with the k=0 term 0).
    debug_assert!(report.toral_entropy >= report.algebraic_entropy - 1e-9);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> IntMatrix {
        IntMatrix::from_rows(&[vec![0, 1], vec![1, 1]])
    }

    fn counterexample() -> IntMatrix {
        IntMatrix::from_rows(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![1, 0, 0]])
    }

    fn squaremono() -> IntMatrix {
        IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]])
    }

    fn inv_gap() -> IntMatrix {
        IntMatrix::from_rows(&[vec![1, 2], vec![-2, 1]])
    }

    const PHI: f64 = 1.618033988749895;

    #[test]
    fn spectral_radius_examples() {
        assert!((spectral_radius(&squaremono()).unwrap().value - 3.0).abs() < 1e-12);
        // Real root alpha of t^3+t^2+t-1 gives rho = 1/sqrt(alpha) ~ 1.3562.
        let rho = spectral_radius(&counterexample()).unwrap().value;
        assert!((rho - 1.3562030656262952).abs() < 1e-10);
        assert!((rho - 1.36).abs() < 5e-3);
        let perm = IntMatrix::from_rows(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]);
        assert!((spectral_radius(&perm).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn algebraic_entropy_examples() {
        assert!((algebraic_entropy(&squaremono()).unwrap() - 3f64.ln()).abs() < 1e-12);
        assert!((algebraic_entropy(&fib()).unwrap() - PHI.ln()).abs() < 1e-12);
        assert!(algebraic_entropy(&IntMatrix::identity(3)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn toral_entropy_examples() {
        let t = toral_entropy(&squaremono()).unwrap();
        assert!((t.value - 6f64.ln()).abs() < 1e-10);
        assert!(!t.ambiguous);

        // |1 +/- 2i|^2 = 5, both roots outside the unit circle.
        let t = toral_entropy(&inv_gap()).unwrap();
        assert!((t.value - 5f64.ln()).abs() < 1e-10);

        // Second eigenvalue -1/phi lies inside the unit circle.
        let t = toral_entropy(&fib()).unwrap();
        assert!((t.value - PHI.ln()).abs() < 1e-10);
    }

    #[test]
    fn toral_entropy_routes_agree() {
        for m in [fib(), squaremono(), counterexample(), inv_gap()] {
            let t = toral_entropy(&m).unwrap();
            assert!((t.root_route - t.compound_route).abs() < 1e-8);
        }
    }

    #[test]
    fn dynamical_degree_examples() {
        let d = dynamical_degrees(&squaremono()).unwrap();
        assert!((d[0].log_value - 3f64.ln()).abs() < 1e-10);
        assert!((d[1].log_value - 6f64.ln()).abs() < 1e-10);
        assert!(!d[0].conjectural && !d[1].conjectural);

        // |lambda1 lambda2| = 1/alpha ~ 1.8393, |det| = 1.
        let d = dynamical_degrees(&counterexample()).unwrap();
        assert!((d[0].log_value - 1.3562030656262952f64.ln()).abs() < 1e-9);
        assert!((d[1].log_value - 1.839286755214161f64.ln()).abs() < 1e-9);
        assert!(d[2].log_value.abs() < 1e-9);
        assert!(d[1].conjectural);

        let d = dynamical_degrees(&IntMatrix::identity(3)).unwrap();
        assert!(d.iter().all(|dd| dd.log_value.abs() < 1e-12));
    }

    #[test]
    fn inverse_spectral_radius_is_square_of_forward() {
        let a = counterexample();
        let rho = spectral_radius(&a).unwrap().value;
        let rho_inv = spectral_radius_of_inverse(&a).unwrap();
        assert!((rho_inv - rho * rho).abs() < 1e-9);
        assert!((rho_inv - 1.84).abs() < 5e-3);
    }

    #[test]
    fn entropy_never_exceeds_toral() {
        for m in [fib(), squaremono(), counterexample(), inv_gap()] {
            let h = algebraic_entropy(&m).unwrap();
            let t = toral_entropy(&m).unwrap();
            assert!(h <= t.value + 1e-9);
        }
    }

    #[test]
    fn strict_gap_with_two_expanding_eigenvalues() {
        for m in [squaremono(), inv_gap()] {
            let roots = eigenvalues(&m, 1e-12).unwrap();
            let expanding = roots
                .roots
                .iter()
                .filter(|r| r.modulus_lo > 1.0)
                .map(|r| r.multiplicity)
                .sum::<usize>();
            assert!(expanding >= 2);
            let h = algebraic_entropy(&m).unwrap();
            let t = toral_entropy(&m).unwrap();
            assert!(t.value - h > 0.0);
        }
    }

    #[test]
    fn convergence_profile_examples() {
        let p = convergence_profile(&squaremono(), 10).unwrap();
        for (_, v) in &p.points {
            assert!((v - 3f64.ln()).abs() < 1e-12);
        }

        let p = convergence_profile(&counterexample(), 20).unwrap();
        let (n, v) = *p.points.last().unwrap();
        assert_eq!(n, 20);
        assert!((v - (833f64.ln() / 20.0)).abs() < 1e-12);
        assert!((v - 0.3363).abs() < 1e-3);
        assert!((p.deviation_at_end - (v - 1.3562030656262952f64.ln())).abs() < 1e-12);

        let p = convergence_profile(&IntMatrix::identity(2), 5).unwrap();
        assert!(p.points.iter().all(|(_, v)| v.abs() < 1e-12));
    }

    #[test]
    fn gelfand_bound_holds() {
        for m in [fib(), squaremono(), counterexample(), inv_gap()] {
            let rho = spectral_radius(&m).unwrap().value;
            for (k, p) in m.powers().take(60).enumerate() {
                let bound = ln_bigint(&p.norm_one()) / (k + 1) as f64;
                assert!(bound >= rho.ln() - 1e-9);
                if k + 1 == 60 {
                    assert!(bound - rho.ln() < 0.05, "Gelfand gap too wide at N=60");
                }
            }
        }
    }

    #[test]
    fn algebraic_integer_consistency() {
        // exp(entropy) equals the max root modulus of the exact integer
        // characteristic polynomial (true by construction; asserted).
        for m in [fib(), squaremono(), counterexample(), inv_gap()] {
            let h = algebraic_entropy(&m).unwrap();
            let roots = eigenvalues(&m, 1e-12).unwrap();
            assert!((h.exp() - roots.max_modulus()).abs() < 1e-9);
        }
    }

    #[test]
    fn report_shape() {
        let r = entropy_report(&counterexample()).unwrap();
        assert_eq!(r.dynamical_degrees.len(), 3);
        assert_eq!(r.conjectural, vec![false, true, false]);
        assert!((r.algebraic_entropy - r.dynamical_degrees[0]).abs() < 1e-15);
        let toral = r
            .dynamical_degrees
            .iter()
            .cloned()
            .fold(0.0f64, f64::max);
        assert!((r.toral_entropy - toral).abs() < 1e-12);
    }
}
