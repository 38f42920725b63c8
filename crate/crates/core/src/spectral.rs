//! The polynomial form `P_H(x) = r * sum_{e in H} prod_{i in e} x_i` and the
//! spectral radius `lambda(H)`, its maximum over nonnegative vectors of unit
//! `l_r` norm.
//!
//! A maximizer satisfies `(A x^{r-1})_i = lambda x_i^{r-1}` with
//! `(A x^{r-1})_i = sum_{e ∋ i} prod_{j in e \ i} x_j`. We run a shifted power
//! iteration on every shadow component and bracket `lambda` from below by the
//! form value at an explicit feasible vector and from above by the largest
//! Collatz–Wielandt ratio `(A x^{r-1})_i / x_i^{r-1}`.

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::Hypergraph;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ITER: usize = 1_000_000;

const SHIFT: f64 = 1.0;
const CLAMP: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("vector has {found} entries, hypergraph has {n} vertices")]
    DimensionMismatch { n: usize, found: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

/// A nonnegative vector together with its `l_r` norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector {
    entries: Vec<f64>,
    norm: f64,
}

impl WeightVector {
    /// Wraps `entries`, which must be finite and nonnegative.
    pub fn new(entries: Vec<f64>, r: usize) -> Self {
        assert!(
            entries.iter().all(|x| x.is_finite() && *x >= 0.0),
            "weight vectors must be finite and nonnegative"
        );
        let norm = lr_norm(&entries, r);
        WeightVector { entries, norm }
    }

    /// Rescales `entries` to unit `l_r` norm (the zero vector stays zero).
    pub fn normalized(entries: Vec<f64>, r: usize) -> Self {
        let mut v = Self::new(entries, r);
        if v.norm > 0.0 {
            let s = v.norm;
            v.entries.iter_mut().for_each(|x| *x /= s);
            v.norm = lr_norm(&v.entries, r);
        }
        v
    }

    /// The uniform unit vector on `n` coordinates.
    pub fn uniform(n: usize, r: usize) -> Self {
        Self::normalized(vec![1.0; n], r)
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn lr_norm(x: &[f64], r: usize) -> f64 {
    let s: f64 = x.iter().map(|v| v.powi(r as i32)).sum();
    s.powf(1.0 / r as f64)
}

fn check_dim(h: &Hypergraph, x: &[f64]) -> Result<(), SpectralError> {
    if x.len() != h.n() {
        return Err(SpectralError::DimensionMismatch { n: h.n(), found: x.len() });
    }
    Ok(())
}

fn raw_form(h: &Hypergraph, x: &[f64]) -> f64 {
    let sum: f64 = h.edges().iter().map(|e| e.vertices().map(|i| x[i]).product::<f64>()).sum();
    h.r() as f64 * sum
}

/// `P_H(x)`, with leading factor `r`.
pub fn evaluate_form(h: &Hypergraph, x: &[f64]) -> Result<f64, SpectralError> {
    check_dim(h, x)?;
    Ok(raw_form(h, x))
}

/// `(A x^{r-1})_i = sum_{e ∋ i} prod_{j in e \ i} x_j` for every `i`.
fn apply_tensor(h: &Hypergraph, x: &[f64], out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for e in h.edges() {
        for i in e.vertices() {
            let prod: f64 = e.vertices().filter(|&j| j != i).map(|j| x[j]).product();
            out[i] += prod;
        }
    }
}

/// Gradient of `P_H`: component `i` is `r * (A x^{r-1})_i`.
pub fn gradient_form(h: &Hypergraph, x: &[f64]) -> Result<Vec<f64>, SpectralError> {
    check_dim(h, x)?;
    let mut g = vec![0.0; h.n()];
    apply_tensor(h, x, &mut g);
    let r = h.r() as f64;
    g.iter_mut().for_each(|v| *v *= r);
    Ok(g)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralEstimate {
    /// `P_H(vector)`, a certified lower bound on `lambda`.
    pub lower: f64,
    /// Largest Collatz–Wielandt ratio over the maximizing component.
    pub upper: f64,
    /// Unit `l_r` vector supported on the best component.
    pub vector: WeightVector,
    pub iterations: usize,
    pub converged: bool,
}

impl SpectralEstimate {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

struct ComponentRun {
    lower: f64,
    upper: f64,
    vector: Vec<f64>,
    iterations: usize,
    converged: bool,
}

/// Power iteration on one component. With `decide = Some(t)` the run also
/// stops as soon as the bracket lies strictly on one side of `t`.
fn component_radius(h: &Hypergraph, comp: u64, tol: f64, max_iter: usize, decide: Option<f64>) -> ComponentRun {
    let n = h.n();
    let r = h.r();
    let sub = Hypergraph::from_sorted_unchecked(
        n,
        r,
        h.edges().iter().copied().filter(|e| e.mask() & comp != 0).collect(),
    );
    let members: Vec<usize> = (0..n).filter(|&v| comp & (1u64 << v) != 0).collect();
    let mut x = vec![0.0; n];
    let start = (members.len() as f64).powf(-1.0 / r as f64);
    for &v in &members {
        x[v] = start;
    }
    let mut y = vec![0.0; n];
    let exp = 1.0 / (r - 1) as f64;

    let mut best_lower = raw_form(&sub, &x);
    let mut best_vector = x.clone();
    let mut best_upper = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    loop {
        apply_tensor(&sub, &x, &mut y);
        let mut cw_max = f64::NEG_INFINITY;
        for &v in &members {
            let denom = x[v].max(CLAMP).powi(r as i32 - 1);
            cw_max = cw_max.max(y[v] / denom);
        }
        best_upper = best_upper.min(cw_max);
        let lower = raw_form(&sub, &x);
        if lower > best_lower {
            best_lower = lower;
            best_vector.copy_from_slice(&x);
        }
        if best_upper - best_lower <= tol {
            converged = true;
            break;
        }
        if let Some(t) = decide {
            let slack = rounding_slack(t);
            if best_lower > t + slack || best_upper <= t + slack {
                break;
            }
        }
        if iterations >= max_iter {
            break;
        }
        iterations += 1;
        for &v in &members {
            let shifted = y[v] + SHIFT * x[v].powi(r as i32 - 1);
            x[v] = shifted.max(CLAMP).powf(exp);
        }
        let norm = lr_norm(&x, r);
        x.iter_mut().for_each(|v| *v /= norm);
    }
    ComponentRun {
        lower: best_lower,
        upper: best_upper.max(best_lower),
        vector: best_vector,
        iterations,
        converged,
    }
}

/// Certified bracket on `lambda(H)`.
///
/// Components are handled separately and the one with the largest upper
/// bound decides; isolated vertices contribute zero. A run that hits
/// `max_iter` returns its best bracket with `converged = false`.
pub fn spectral_radius(h: &Hypergraph, tol: f64, max_iter: usize) -> Result<SpectralEstimate, SpectralError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(SpectralError::BadTolerance(tol));
    }
    let mut lower = 0.0;
    let mut upper = 0.0;
    let mut vector = vec![0.0; h.n()];
    let mut iterations = 0;
    let mut converged = true;
    for comp in h.components() {
        if comp.count_ones() < h.r() as u32 {
            continue;
        }
        let run = component_radius(h, comp, tol, max_iter, None);
        iterations += run.iterations;
        converged &= run.converged;
        if run.lower > lower {
            lower = run.lower;
            vector = run.vector;
        }
        upper = f64::max(upper, run.upper);
    }
    Ok(SpectralEstimate {
        lower,
        upper,
        vector: WeightVector::new(vector, h.r()),
        iterations,
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdVerdict {
    CertifiedAbove,
    CertifiedBelowOrEqual,
    Undecided,
}

/// Rounding slack applied when comparing a float bound with a threshold.
fn rounding_slack(t: f64) -> f64 {
    64.0 * f64::EPSILON * t.abs().max(1.0)
}

/// Decides `lambda(H) > t` from a certified bracket.
pub fn classify(estimate: &SpectralEstimate, t: f64) -> ThresholdVerdict {
    let slack = rounding_slack(t);
    if estimate.lower > t + slack {
        ThresholdVerdict::CertifiedAbove
    } else if estimate.upper <= t + slack {
        ThresholdVerdict::CertifiedBelowOrEqual
    } else {
        ThresholdVerdict::Undecided
    }
}

/// Whether `lambda(H) > t`, certified by the spectral bracket at `tol`.
///
/// Iteration stops once the bracket clears `t`, so this is much cheaper than
/// a full [`spectral_radius`] run when `lambda` is far from `t`.
pub fn exceeds_threshold(h: &Hypergraph, t: f64, tol: f64) -> Result<ThresholdVerdict, SpectralError> {
    exceeds_threshold_with(h, t, tol, DEFAULT_MAX_ITER).map(|(v, _)| v)
}

/// [`exceeds_threshold`] with an iteration cap; also reports whether every
/// component run ended by convergence or decision rather than the cap.
pub fn exceeds_threshold_with(
    h: &Hypergraph,
    t: f64,
    tol: f64,
    max_iter: usize,
) -> Result<(ThresholdVerdict, bool), SpectralError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(SpectralError::BadTolerance(tol));
    }
    let slack = rounding_slack(t);
    let mut verdict = ThresholdVerdict::CertifiedBelowOrEqual;
    let mut finished = true;
    for comp in h.components() {
        if comp.count_ones() < h.r() as u32 {
            continue;
        }
        let run = component_radius(h, comp, tol, max_iter, Some(t));
        finished &= run.converged || run.iterations < max_iter;
        if run.lower > t + slack {
            return Ok((ThresholdVerdict::CertifiedAbove, true));
        }
        if run.upper.max(run.lower) > t + slack {
            verdict = ThresholdVerdict::Undecided;
        }
    }
    Ok((verdict, finished))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn form_examples() {
        let k4 = Hypergraph::complete(4, 3).unwrap();
        let x = WeightVector::uniform(4, 3);
        assert!((evaluate_form(&k4, x.entries()).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(evaluate_form(&k4, &[0.0; 4]).unwrap(), 0.0);

        let single = Hypergraph::new(5, 3, [[0, 1, 2]]).unwrap();
        let v = WeightVector::normalized(vec![1.0, 1.0, 1.0, 0.0, 0.0], 3);
        assert!((evaluate_form(&single, v.entries()).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(
            evaluate_form(&single, &[1.0]),
            Err(SpectralError::DimensionMismatch { n: 5, found: 1 })
        ));
    }

    #[test]
    fn gradient_basics() {
        let kv = Hypergraph::clique_plus_isolated(6, 3).unwrap();
        let x = [0.3, 0.5, 0.7, 0.2, 0.9, 0.4];
        let g = gradient_form(&kv, &x).unwrap();
        assert_eq!(g[5], 0.0);
        let euler: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
        let p = evaluate_form(&kv, &x).unwrap();
        assert!((euler - 3.0 * p).abs() < 1e-12);
    }

    #[test]
    fn radius_examples() {
        let k5 = spectral_radius(&Hypergraph::complete(5, 3).unwrap(), 1e-9, DEFAULT_MAX_ITER).unwrap();
        assert!(k5.converged);
        assert!(k5.lower <= 6.0 + 1e-12 && k5.upper >= 6.0 - 1e-12);
        assert!(k5.width() <= 1e-9);

        let kv = spectral_radius(&Hypergraph::clique_plus_isolated(6, 3).unwrap(), 1e-9, DEFAULT_MAX_ITER).unwrap();
        assert!((kv.lower - 6.0).abs() < 1e-9 && (kv.upper - 6.0).abs() < 1e-9);
        assert_eq!(kv.vector.entries()[5], 0.0);

        let single = spectral_radius(&Hypergraph::new(5, 3, [[0, 1, 2]]).unwrap(), 1e-9, 1000).unwrap();
        assert!((single.lower - 1.0).abs() < 1e-9);

        let empty = spectral_radius(&Hypergraph::empty(4, 3).unwrap(), 1e-9, 10).unwrap();
        assert_eq!((empty.lower, empty.upper), (0.0, 0.0));
        assert!(spectral_radius(&Hypergraph::empty(4, 3).unwrap(), 0.0, 10).is_err());
    }

    #[test]
    fn unconverged_is_flagged() {
        let ke = Hypergraph::clique_plus_pendant(6, 3).unwrap();
        let est = spectral_radius(&ke, 1e-15, 2).unwrap();
        assert!(!est.converged);
        assert!(est.lower <= est.upper);
    }

    #[test]
    fn lower_is_form_value() {
        let ke = Hypergraph::clique_plus_pendant(7, 4).unwrap();
        let est = spectral_radius(&ke, 1e-10, DEFAULT_MAX_ITER).unwrap();
        assert!((est.vector.norm() - 1.0).abs() < 1e-12);
        assert_eq!(est.lower, evaluate_form(&ke, est.vector.entries()).unwrap());
    }

    #[test]
    fn threshold_examples() {
        let ke = Hypergraph::clique_plus_pendant(6, 3).unwrap();
        let kv = Hypergraph::clique_plus_isolated(6, 3).unwrap();
        let k6 = Hypergraph::complete(6, 3).unwrap();
        assert_eq!(exceeds_threshold(&ke, 6.0, 1e-9).unwrap(), ThresholdVerdict::CertifiedAbove);
        assert_eq!(exceeds_threshold(&kv, 6.0, 1e-9).unwrap(), ThresholdVerdict::CertifiedBelowOrEqual);
        assert_eq!(exceeds_threshold(&k6, 6.0, 1e-9).unwrap(), ThresholdVerdict::CertifiedAbove);
    }
}
