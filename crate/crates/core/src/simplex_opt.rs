//! Maximum of `f(lambda t12, t13, t14, t23, t24, 0)` over the simplex
//! `sum t = C`, in closed form and by grid search.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::zonotope::volume_f;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("lambda must be >= 1 and C > 0 (got lambda = {lambda}, C = {c})")]
    Domain { lambda: f64, c: f64 },
}

/// `(t12, t13, t14, t23, t24)` with `t34 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimplexPoint {
    pub tau: [f64; 5],
    pub budget: f64,
}

impl SimplexPoint {
    pub fn sum(&self) -> f64 {
        self.tau.iter().sum()
    }
}

/// Objective on the face `t34 = 0`, with `t12` stretched by `lambda`.
pub fn objective(lambda: f64, tau: &[f64; 5]) -> f64 {
    let [t12, t13, t14, t23, t24] = *tau;
    volume_f(&[lambda * t12, t13, t14, t23, t24, 0.0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimplexMax {
    pub max_value: f64,
    pub argmax: SimplexPoint,
}

pub fn lemma3_max(lambda: f64, c: f64) -> Result<SimplexMax, SimplexError> {
    if !(lambda >= 1.0 && c > 0.0 && lambda.is_finite() && c.is_finite()) {
        return Err(SimplexError::Domain { lambda, c });
    }
    let max_value = 16.0 * c.powi(3) * lambda.powi(3) / (27.0 * (4.0 * lambda - 1.0).powi(2));
    let s = 2.0 * lambda * c / (12.0 * lambda - 3.0);
    let t12 = (4.0 * lambda - 3.0) * c / (12.0 * lambda - 3.0);
    Ok(SimplexMax { max_value, argmax: SimplexPoint { tau: [t12, s, s, s, s], budget: c } })
}

/// Candidate maxima on the boundary strata, for `C = 1`.
pub fn lemma3_case_values(lambda: f64) -> Result<[f64; 4], SimplexError> {
    if !(lambda >= 1.0 && lambda.is_finite()) {
        return Err(SimplexError::Domain { lambda, c: 1.0 });
    }
    Ok([
        1.0 / 16.0,
        4.0 * lambda * lambda / (27.0 * (4.0 * lambda - 1.0)),
        lambda / 27.0,
        1.0 / 27.0,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimplexSearch {
    pub grid_max: f64,
    pub refined: f64,
    pub argmax: SimplexPoint,
}

pub const REFINE_ROUNDS: usize = 60;
const SWEEPS_PER_ROUND: usize = 200;

/// Best point over all compositions of `grid_n` into five parts (scaled by
/// `C / grid_n`), then pairwise-transfer coordinate descent from it.
pub fn brute_force_simplex_search(lambda: f64, c: f64, grid_n: usize) -> SimplexSearch {
    let n = grid_n.max(1);
    let h = c / n as f64;
    let (grid_max, best) = (0..=n)
        .into_par_iter()
        .map(|a| {
            let mut best = (f64::NEG_INFINITY, [0usize; 5]);
            for b in 0..=(n - a) {
                for d in 0..=(n - a - b) {
                    for e in 0..=(n - a - b - d) {
                        let f = n - a - b - d - e;
                        let k = [a, b, d, e, f];
                        let v = objective(lambda, &k.map(|x| x as f64 * h));
                        if v > best.0 {
                            best = (v, k);
                        }
                    }
                }
            }
            best
        })
        .reduce(
            || (f64::NEG_INFINITY, [0usize; 5]),
            |x, y| if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x },
        );
    let mut tau = best.map(|x| x as f64 * h);
    let mut value = objective(lambda, &tau);
    let mut step = h;
    for _ in 0..REFINE_ROUNDS {
        for _ in 0..SWEEPS_PER_ROUND {
            let mut improved = false;
            for i in 0..5 {
                for j in 0..5 {
                    if i == j || tau[j] <= 0.0 {
                        continue;
                    }
                    let d = step.min(tau[j]);
                    let mut trial = tau;
                    trial[i] += d;
                    trial[j] -= d;
                    let v = objective(lambda, &trial);
                    if v > value {
                        tau = trial;
                        value = v;
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    SimplexSearch { grid_max, refined: value, argmax: SimplexPoint { tau, budget: c } }
}

pub fn brute_force_simplex_max(lambda: f64, c: f64, grid_n: usize) -> f64 {
    brute_force_simplex_search(lambda, c, grid_n).refined
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_examples() {
        let m = lemma3_max(1.0, 1.0).unwrap();
        assert!((m.max_value - 16.0 / 243.0).abs() < 1e-15);
        assert!((m.argmax.tau[0] - 1.0 / 9.0).abs() < 1e-15);
        for t in &m.argmax.tau[1..] {
            assert!((t - 2.0 / 9.0).abs() < 1e-15);
        }
        let m2 = lemma3_max(2.0, 1.0).unwrap();
        assert!((m2.max_value - 128.0 / 1323.0).abs() < 1e-15);
        let m3 = lemma3_max(1.0, 2.0).unwrap();
        assert_eq!(m3.max_value, 8.0 * m.max_value);
    }

    #[test]
    fn argmax_attains_the_value() {
        for lambda in [1.0, 1.2, 2.0, 3.0, 5.0, 20.0] {
            for c in [0.5, 1.0, 3.0] {
                let m = lemma3_max(lambda, c).unwrap();
                assert!((m.argmax.sum() - c).abs() < 1e-12);
                assert!(m.argmax.tau.iter().all(|&t| t >= 0.0));
                let v = objective(lambda, &m.argmax.tau);
                assert!((v - m.max_value).abs() < 1e-12 * m.max_value.max(1.0));
                // t12 = ((4 lambda - 3) / (2 lambda)) t13
                let ratio = (4.0 * lambda - 3.0) / (2.0 * lambda);
                assert!((m.argmax.tau[0] - ratio * m.argmax.tau[1]).abs() < 1e-14 * c);
            }
        }
    }

    #[test]
    fn domain_error_below_one() {
        assert!(matches!(lemma3_max(0.99, 1.0), Err(SimplexError::Domain { .. })));
        assert!(lemma3_max(1.0, 0.0).is_err());
        assert!(lemma3_case_values(0.5).is_err());
    }

    #[test]
    fn brute_force_matches_closed_form() {
        for lambda in [1.0, 1.2, 2.0, 3.0, 5.0, 20.0] {
            let exact = lemma3_max(lambda, 1.0).unwrap().max_value;
            let s = brute_force_simplex_search(lambda, 1.0, 60);
            assert!(s.grid_max <= exact + 1e-15);
            assert!(s.refined <= exact + 1e-15);
            assert!((s.refined - exact).abs() < 1e-5, "lambda {lambda}: {} vs {exact}", s.refined);
        }
    }

    #[test]
    fn coarse_grid_never_exceeds_true_max() {
        let s = brute_force_simplex_search(1.0, 1.0, 10);
        assert!(s.grid_max <= 16.0 / 243.0);
    }

    #[test]
    fn interior_value_dominates_boundary_cases() {
        let c = lemma3_case_values(1.0).unwrap();
        assert_eq!(c, [0.0625, 4.0 / 81.0, 1.0 / 27.0, 1.0 / 27.0]);
        assert_eq!(c.iter().cloned().fold(0.0, f64::max), 0.0625);
        for lambda in [1.0, 1.2, 2.0, 5.0, 10.0, 20.0, 100.0] {
            let m = lemma3_max(lambda, 1.0).unwrap().max_value;
            for v in lemma3_case_values(lambda).unwrap() {
                assert!(v < m, "lambda {lambda}: {v} >= {m}");
            }
        }
    }
}
