//! Small exact simplex solver over the rationals.
//!
//! Two-phase primal simplex with Bland's rule, so every pivot is exact
//! and termination is guaranteed. Dimensions here are tiny (redundancy
//! tests on max-plus expressions in <= 6 variables), so no effort goes
//! into sparsity.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Outcome of `maximize`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    /// Finite optimum of the objective.
    Optimal(BigRational),
    Unbounded,
    Infeasible,
}

/// Maximizes `c . v` subject to `a v <= b`, `v >= 0`.
pub fn maximize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> LpOutcome {
    let nvars = c.len();
    let nrows = a.len();
    assert_eq!(b.len(), nrows);
    assert!(a.iter().all(|row| row.len() == nvars));

    // Standard form: A v + s = b with b >= 0 after sign flips; rows whose
    // slack got flipped receive an artificial variable instead.
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(nrows);
    let mut rhs: Vec<BigRational> = Vec::with_capacity(nrows);
    let mut flipped = Vec::with_capacity(nrows);
    for i in 0..nrows {
        let flip = b[i].is_negative();
        flipped.push(flip);
        let mut row: Vec<BigRational> = a[i]
            .iter()
            .map(|x| if flip { -x.clone() } else { x.clone() })
            .collect();
        // Slack coefficient: +1 normally, -1 on flipped rows.
        for j in 0..nrows {
            let mut v = BigRational::zero();
            if j == i {
                v = if flip {
                    -BigRational::one()
                } else {
                    BigRational::one()
                };
            }
            row.push(v);
        }
        rows.push(row);
        rhs.push(if flip { -b[i].clone() } else { b[i].clone() });
    }
    let slack_base = nvars;
    let mut ncols = nvars + nrows;

    // Artificial variables for flipped rows.
    let mut basis: Vec<usize> = Vec::with_capacity(nrows);
    let mut artificial: Vec<usize> = Vec::new();
    for i in 0..nrows {
        if flipped[i] {
            for (r, row) in rows.iter_mut().enumerate() {
                row.push(if r == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
            basis.push(ncols);
            artificial.push(ncols);
            ncols += 1;
        } else {
            basis.push(slack_base + i);
        }
    }

    if !artificial.is_empty() {
        // Phase I: minimize the sum of artificials.
        let mut phase1 = vec![BigRational::zero(); ncols];
        for &j in &artificial {
            phase1[j] = -BigRational::one();
        }
        let opt = simplex(&mut rows, &mut rhs, &mut basis, &phase1);
        match opt {
            Some(v) if v.is_zero() => {}
            _ => return LpOutcome::Infeasible,
        }
        // Pivot any artificial still in the basis out; if its row is all
        // zero the constraint was redundant and the row is dropped.
        for i in 0..rows.len() {
            if artificial.contains(&basis[i]) {
                if let Some(j) = (0..nvars + nrows).find(|&j| !rows[i][j].is_zero()) {
                    pivot(&mut rows, &mut rhs, &mut basis, i, j);
                }
            }
        }
        let keep: Vec<bool> = basis.iter().map(|b| !artificial.contains(b)).collect();
        retain_by(&mut rows, &keep);
        retain_by(&mut rhs, &keep);
        retain_by(&mut basis, &keep);
        // Artificial columns are no longer referenced by the basis.
        for row in rows.iter_mut() {
            row.truncate(nvars + nrows);
        }
        ncols = nvars + nrows;
    }

    // Phase II on the real objective.
    let mut objective = vec![BigRational::zero(); ncols];
    objective[..nvars].clone_from_slice(c);
    match simplex(&mut rows, &mut rhs, &mut basis, &objective) {
        Some(v) => LpOutcome::Optimal(v),
        None => LpOutcome::Unbounded,
    }
}

fn retain_by<T>(items: &mut Vec<T>, keep: &[bool]) {
    let mut idx = 0usize;
    items.retain(|_| {
        let k = keep[idx];
        idx += 1;
        k
    });
}

/// Primal simplex with Bland's rule; returns the optimum or `None` when
/// unbounded. `rows`/`rhs`/`basis` must describe a feasible dictionary.
fn simplex(
    rows: &mut [Vec<BigRational>],
    rhs: &mut [BigRational],
    basis: &mut [usize],
    objective: &[BigRational],
) -> Option<BigRational> {
    let ncols = objective.len();
    loop {
        // Reduced costs: c_j - c_B . B^{-1} A_j over the current dictionary.
        let reduced: Vec<BigRational> = (0..ncols)
            .map(|j| {
                let mut r = objective[j].clone();
                for (i, row) in rows.iter().enumerate() {
                    r -= &objective[basis[i]] * &row[j];
                }
                r
            })
            .collect();
        // Bland: smallest index with positive reduced cost.
        let Some(enter) = (0..ncols).find(|&j| reduced[j].is_positive()) else {
            let mut value = BigRational::zero();
            for (i, _) in rows.iter().enumerate() {
                value += &objective[basis[i]] * &rhs[i];
            }
            return Some(value);
        };
        // Ratio test, Bland tie-break on the leaving basis index.
        let mut leave: Option<(usize, BigRational)> = None;
        for i in 0..rows.len() {
            if rows[i][enter].is_positive() {
                let ratio = &rhs[i] / &rows[i][enter];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && basis[i] < basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((leave, _)) = leave else {
            return None; // unbounded direction
        };
        pivot(rows, rhs, basis, leave, enter);
    }
}

fn pivot(rows: &mut [Vec<BigRational>], rhs: &mut [BigRational], basis: &mut [usize], r: usize, c: usize) {
    let p = rows[r][c].clone();
    for v in rows[r].iter_mut() {
        *v /= p.clone();
    }
    rhs[r] /= p;
    for i in 0..rows.len() {
        if i == r || rows[i][c].is_zero() {
            continue;
        }
        let f = rows[i][c].clone();
        for j in 0..rows[i].len() {
            let delta = &f * &rows[r][j];
            rows[i][j] -= delta;
        }
        let delta = &f * &rhs[r];
        rhs[i] -= delta;
    }
    basis[r] = c;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigutil::{rat, rat_int};

    fn r(v: i64) -> BigRational {
        rat_int(v)
    }

    #[test]
    fn simple_bounded_maximum() {
        // max x + y st x <= 2, y <= 3, x + y <= 4: optimum 4.
        let c = vec![r(1), r(1)];
        let a = vec![
            vec![r(1), r(0)],
            vec![r(0), r(1)],
            vec![r(1), r(1)],
        ];
        let b = vec![r(2), r(3), r(4)];
        assert_eq!(maximize(&c, &a, &b), LpOutcome::Optimal(r(4)));
    }

    #[test]
    fn unbounded_problem() {
        // max x st -x <= 1: unbounded above.
        let c = vec![r(1)];
        let a = vec![vec![r(-1)]];
        let b = vec![r(1)];
        assert_eq!(maximize(&c, &a, &b), LpOutcome::Unbounded);
    }

    #[test]
    fn infeasible_problem() {
        // x <= -1 with x >= 0 is infeasible.
        let c = vec![r(1)];
        let a = vec![vec![r(1)]];
        let b = vec![r(-1)];
        assert_eq!(maximize(&c, &a, &b), LpOutcome::Infeasible);
    }

    #[test]
    fn negative_rhs_feasible() {
        // max -x st -x <= -2 (x >= 2): optimum -2, needs phase I.
        let c = vec![r(-1)];
        let a = vec![vec![r(-1)]];
        let b = vec![r(-2)];
        assert_eq!(maximize(&c, &a, &b), LpOutcome::Optimal(r(-2)));
    }

    #[test]
    fn fractional_pivots_stay_exact() {
        // max x st 3x <= 1: optimum exactly 1/3.
        let c = vec![r(1)];
        let a = vec![vec![r(3)]];
        let b = vec![r(1)];
        assert_eq!(maximize(&c, &a, &b), LpOutcome::Optimal(rat(1, 3)));
    }

    #[test]
    fn degenerate_cycling_terminates() {
        // A classic degenerate instance; Bland's rule must terminate.
        let c = vec![rat(3, 4), r(-150), rat(1, 50), r(-6)];
        let a = vec![
            vec![rat(1, 4), r(-60), rat(-1, 25), r(9)],
            vec![rat(1, 2), r(-90), rat(-1, 50), r(3)],
            vec![r(0), r(0), r(1), r(0)],
        ];
        let b = vec![r(0), r(0), r(1)];
        match maximize(&c, &a, &b) {
            LpOutcome::Optimal(v) => assert_eq!(v, rat(1, 20)),
            other => panic!("expected optimum, got {other:?}"),
        }
    }
}
