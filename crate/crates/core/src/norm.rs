use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::vector::NonnegVector;
use crate::Result;

/// Supported norm families. All three are monotone for positive weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    /// `Σ_i w_i |x_i| / s`
    L1,
    /// `sqrt(Σ_i w_i x_i^2) / s`
    L2,
    /// `max_i w_i |x_i| / s`
    Linf,
}

impl std::str::FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "l1" => Ok(NormKind::L1),
            "l2" => Ok(NormKind::L2),
            "linf" => Ok(NormKind::Linf),
            other => Err(Error::InvalidNorm(format!(
                "unknown norm kind {other:?} (expected l1, l2, or linf)"
            ))),
        }
    }
}

/// A weighted ℓ1/ℓ2/ℓ∞ norm with a positive scale divisor.
///
/// The scale `s` represents the norm `x ↦ ‖x‖_base / s`, which is how the
/// power budget enters the canonical problem: `‖x‖ = ‖x‖_a / p̄` is itself a
/// monotone norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneNorm {
    kind: NormKind,
    weights: Vec<f64>,
    scale: f64,
}

impl MonotoneNorm {
    pub fn new(kind: NormKind, weights: Vec<f64>, scale: f64) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidNorm("weight list must be nonempty".into()));
        }
        if let Some(&w) = weights.iter().find(|w| !w.is_finite() || **w <= 0.0) {
            return Err(Error::InvalidNorm(format!("weight {w} is not positive")));
        }
        if !scale.is_finite() || scale <= 0.0 {
            return Err(Error::InvalidNorm(format!("scale {scale} is not positive")));
        }
        Ok(Self { kind, weights, scale })
    }

    /// Unit-weight norm with scale 1.
    pub fn unit(kind: NormKind, dim: usize) -> Self {
        Self {
            kind,
            weights: vec![1.0; dim],
            scale: 1.0,
        }
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Same norm with the scale divisor multiplied by `factor`.
    ///
    /// Used to form the scaled norm `‖x‖_a / p̄` of the canonical problem.
    pub fn rescaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.kind, self.weights.clone(), self.scale * factor)
    }

    pub fn eval(&self, x: &NonnegVector) -> Result<f64> {
        Ok(self.eval_slice_checked(x.as_slice())?)
    }

    fn eval_slice_checked(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                got: x.len(),
            });
        }
        Ok(self.eval_slice(x))
    }

    /// Norm of a raw slice whose length is known to match.
    pub(crate) fn eval_slice(&self, x: &[f64]) -> f64 {
        let w = &self.weights;
        let base = match self.kind {
            NormKind::L1 => x.iter().zip(w).map(|(v, w)| w * v.abs()).sum(),
            NormKind::L2 => x
                .iter()
                .zip(w)
                .map(|(v, w)| w * v * v)
                .sum::<f64>()
                .sqrt(),
            NormKind::Linf => x
                .iter()
                .zip(w)
                .map(|(v, w)| w * v.abs())
                .fold(0.0, f64::max),
        };
        base / self.scale
    }
}

/// Weighted norm evaluation (free-function form of [`MonotoneNorm::eval`]).
pub fn norm_eval(norm: &MonotoneNorm, x: &NonnegVector) -> Result<f64> {
    norm.eval(x)
}

/// Smallest closed-form `α` with `‖x‖_a ≤ α ‖x‖_b` for all `x ≥ 0`.
///
/// The constant is exact for every pair of supported kinds; the maximizing
/// direction follows the standard ℓp-equivalence argument adjusted by the
/// weight ratios and scales.
pub fn norm_equivalence_alpha(a: &MonotoneNorm, b: &MonotoneNorm) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let wa = a.weights();
    let wb = b.weights();
    let ratio = b.scale() / a.scale();
    use NormKind::*;
    let base = match (a.kind(), b.kind()) {
        // Same family: ratio of weights, attained on a single coordinate.
        (L1, L1) | (Linf, Linf) => max_over(wa.iter().zip(wb).map(|(a, b)| a / b)),
        (L2, L2) => max_over(wa.iter().zip(wb).map(|(a, b)| a / b)).sqrt(),
        // Against sup norms: attained at the all-ones corner of the wb-ball.
        (L1, Linf) => wa.iter().zip(wb).map(|(a, b)| a / b).sum(),
        (L2, Linf) => wa.iter().zip(wb).map(|(a, b)| a / (b * b)).sum::<f64>().sqrt(),
        // Against sum norms: attained on a single coordinate.
        (Linf, L1) => max_over(wa.iter().zip(wb).map(|(a, b)| a / b)),
        (L2, L1) => max_over(wa.iter().zip(wb).map(|(a, b)| a.sqrt() / b)),
        // Cauchy-Schwarz, attained at x_i ∝ wa_i / wb_i.
        (L1, L2) => wa.iter().zip(wb).map(|(a, b)| a * a / b).sum::<f64>().sqrt(),
        (Linf, L2) => max_over(wa.iter().zip(wb).map(|(a, b)| a / b.sqrt())),
    };
    Ok(base * ratio)
}

/// Direction on which [`norm_equivalence_alpha`] is attained (or approached).
///
/// Returned unnormalized; the ratio `‖x‖_a / ‖x‖_b` at this point equals the
/// equivalence constant up to rounding.
pub fn norm_equivalence_witness(a: &MonotoneNorm, b: &MonotoneNorm) -> Result<NonnegVector> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    let wa = a.weights();
    let wb = b.weights();
    use NormKind::*;
    let values: Vec<f64> = match (a.kind(), b.kind()) {
        (L1, L1) | (Linf, Linf) => single_coord(wa.len(), argmax(wa.iter().zip(wb).map(|(a, b)| a / b))),
        (L2, L2) => single_coord(wa.len(), argmax(wa.iter().zip(wb).map(|(a, b)| a / b))),
        (L1, Linf) | (L2, Linf) => wb.iter().map(|w| 1.0 / w).collect(),
        (Linf, L1) => single_coord(wa.len(), argmax(wa.iter().zip(wb).map(|(a, b)| a / b))),
        (L2, L1) => single_coord(wa.len(), argmax(wa.iter().zip(wb).map(|(a, b)| a.sqrt() / b))),
        (L1, L2) => wa.iter().zip(wb).map(|(a, b)| a / b).collect(),
        (Linf, L2) => single_coord(wa.len(), argmax(wa.iter().zip(wb).map(|(a, b)| a / b.sqrt()))),
    };
    NonnegVector::new(values)
}

fn max_over(iter: impl Iterator<Item = f64>) -> f64 {
    iter.fold(f64::NEG_INFINITY, f64::max)
}

fn argmax(iter: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in iter.enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

fn single_coord(dim: usize, index: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[index] = 1.0;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn vec2(values: &[f64]) -> NonnegVector {
        NonnegVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn eval_matches_documented_formulas() {
        let linf = MonotoneNorm::unit(NormKind::Linf, 2);
        assert_eq!(linf.eval(&vec2(&[1.0, 1.0])).unwrap(), 1.0);

        let l1 = MonotoneNorm::new(NormKind::L1, vec![1.0, 1.0], 2.0).unwrap();
        assert_eq!(l1.eval(&vec2(&[1.0, 3.0])).unwrap(), 2.0);

        let l2 = MonotoneNorm::new(NormKind::L2, vec![4.0, 1.0], 1.0).unwrap();
        let value = l2.eval(&vec2(&[1.0, 2.0])).unwrap();
        assert!((value - 8.0_f64.sqrt()).abs() < 1e-12, "got {value}");
    }

    #[test]
    fn eval_rejects_dimension_mismatch() {
        let l1 = MonotoneNorm::unit(NormKind::L1, 3);
        assert!(matches!(
            l1.eval(&vec2(&[1.0, 2.0])),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn construction_rejects_bad_weights_and_scale() {
        assert!(MonotoneNorm::new(NormKind::L1, vec![1.0, 0.0], 1.0).is_err());
        assert!(MonotoneNorm::new(NormKind::L1, vec![1.0], 0.0).is_err());
        assert!(MonotoneNorm::new(NormKind::L1, vec![], 1.0).is_err());
    }

    #[test]
    fn equivalence_constants_for_unit_weights() {
        let l1 = MonotoneNorm::unit(NormKind::L1, 3);
        let linf = MonotoneNorm::unit(NormKind::Linf, 3);
        assert_eq!(norm_equivalence_alpha(&l1, &linf).unwrap(), 3.0);
        assert_eq!(norm_equivalence_alpha(&linf, &l1).unwrap(), 1.0);

        let l2 = MonotoneNorm::unit(NormKind::L2, 4);
        let linf4 = MonotoneNorm::unit(NormKind::Linf, 4);
        // Maximizing ‖x‖_2 over the unit sup-norm ball is attained at all-ones.
        assert_eq!(norm_equivalence_alpha(&l2, &linf4).unwrap(), 2.0);
    }

    #[test]
    fn sampled_monotonicity_and_triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for kind in [NormKind::L1, NormKind::L2, NormKind::Linf] {
            let weights: Vec<f64> = (0..4).map(|_| rng.gen_range(0.1..5.0)).collect();
            let norm = MonotoneNorm::new(kind, weights, rng.gen_range(0.5..2.0)).unwrap();
            for _ in 0..1000 {
                let x: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..10.0)).collect();
                let y: Vec<f64> =
                    x.iter().map(|v| v + rng.gen_range(0.0..10.0)).collect();
                let nx = norm.eval_slice(&x);
                let ny = norm.eval_slice(&y);
                assert!(nx <= ny + 1e-12, "monotonicity violated: {nx} > {ny}");
                let sum: Vec<f64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
                assert!(norm.eval_slice(&sum) <= nx + ny + 1e-9 * (nx + ny));
            }
            assert_eq!(norm.eval_slice(&[0.0; 4]), 0.0);
        }
    }

    #[test]
    fn equivalence_alpha_is_valid_and_tight_for_all_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let kinds = [NormKind::L1, NormKind::L2, NormKind::Linf];
        for &ka in &kinds {
            for &kb in &kinds {
                let dim = 5;
                let wa: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.2..4.0)).collect();
                let wb: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.2..4.0)).collect();
                let a = MonotoneNorm::new(ka, wa, rng.gen_range(0.5..3.0)).unwrap();
                let b = MonotoneNorm::new(kb, wb, rng.gen_range(0.5..3.0)).unwrap();
                let alpha = norm_equivalence_alpha(&a, &b).unwrap();
                for _ in 0..10_000 {
                    let x: Vec<f64> = (0..dim)
                        .map(|_| 10f64.powf(rng.gen_range(-3.0..3.0)))
                        .collect();
                    let na = a.eval_slice(&x);
                    let nb = b.eval_slice(&x);
                    assert!(
                        na <= alpha * nb * (1.0 + 1e-12),
                        "{ka:?}/{kb:?}: ratio {} exceeds alpha {alpha}",
                        na / nb
                    );
                }
                let witness = norm_equivalence_witness(&a, &b).unwrap();
                let ratio = a.eval(&witness).unwrap() / b.eval(&witness).unwrap();
                assert!(
                    ratio >= (1.0 - 1e-9) * alpha,
                    "{ka:?}/{kb:?}: witness ratio {ratio} below alpha {alpha}"
                );
            }
        }
    }
}
