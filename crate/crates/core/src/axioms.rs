//! Sampling-based validation of the standard interference axioms:
//! scalability (`α T(x) > T(αx)` for `α > 1`, and the mirrored inequality
//! for `α ∈ (0,1)`) and coordinate-wise monotonicity.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::mapping::InterferenceMapping;
use crate::vector::NonnegVector;
use crate::Result;

/// Which axiom a counterexample violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// `α T(x) > T(αx)` for `α > 1`.
    Scalability,
    /// `T(αx) > α T(x)` for `α ∈ (0,1)`.
    SubunitScalability,
    /// `x1 ≥ x2 ⇒ T(x1) ≥ T(x2)`.
    Monotonicity,
}

/// First counterexample found while sampling.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomFailure {
    pub axiom: Axiom,
    pub coordinate: usize,
    pub x: Vec<f64>,
    /// Scaling factor for scalability failures, the dominated vector for
    /// monotonicity failures.
    pub alpha: Option<f64>,
    pub other: Option<Vec<f64>>,
}

/// Outcome of a sampling run.
#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub seed: u64,
    pub passed: bool,
    pub failure: Option<AxiomFailure>,
}

/// Draws `samples` random points and checks the Definition-2 axioms plus the
/// `α ∈ (0,1)` corollary on each. Coordinate magnitudes are log-uniform over
/// `[1e-6, 1e6]`; scalability violations typically surface at scale extremes.
///
/// Evaluation errors (e.g. a nonpositive output) are propagated; axiom
/// violations are report content, not errors.
pub fn validate_interference_axioms(
    t: &InterferenceMapping,
    samples: usize,
    seed: u64,
) -> Result<AxiomReport> {
    assert!(samples >= 1, "samples must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = t.dim();

    let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
        (0..dim)
            .map(|_| 10f64.powf(rng.gen_range(-6.0..6.0)))
            .collect()
    };

    for _ in 0..samples {
        let x = draw(&mut rng);
        let xv = NonnegVector::new(x.clone())?;
        let tx = t.eval(&xv)?;

        // Scalability with alpha > 1 (log-uniform in (1, 1e3]).
        let alpha = 1.0 + 10f64.powf(rng.gen_range(-3.0..3.0));
        let txa = t.eval(&xv.scale(alpha)?)?;
        for i in 0..dim {
            if !(alpha * tx[i] > txa[i]) {
                return Ok(fail(
                    samples,
                    seed,
                    AxiomFailure {
                        axiom: Axiom::Scalability,
                        coordinate: i,
                        x,
                        alpha: Some(alpha),
                        other: None,
                    },
                ));
            }
        }

        // Corollary for alpha in (0,1): T(αx) > α T(x).
        let alpha = rng.gen_range(1e-3..1.0);
        let txa = t.eval(&xv.scale(alpha)?)?;
        for i in 0..dim {
            if !(txa[i] > alpha * tx[i]) {
                return Ok(fail(
                    samples,
                    seed,
                    AxiomFailure {
                        axiom: Axiom::SubunitScalability,
                        coordinate: i,
                        x,
                        alpha: Some(alpha),
                        other: None,
                    },
                ));
            }
        }

        // Monotonicity on an ordered pair x1 = x + delta >= x.
        let x1: Vec<f64> = x
            .iter()
            .map(|v| v + 10f64.powf(rng.gen_range(-6.0..6.0)))
            .collect();
        let tx1 = t.eval(&NonnegVector::new(x1.clone())?)?;
        for i in 0..dim {
            if !(tx1[i] >= tx[i]) {
                return Ok(fail(
                    samples,
                    seed,
                    AxiomFailure {
                        axiom: Axiom::Monotonicity,
                        coordinate: i,
                        x: x1,
                        alpha: None,
                        other: Some(x),
                    },
                ));
            }
        }
    }

    Ok(AxiomReport {
        samples,
        seed,
        passed: true,
        failure: None,
    })
}

fn fail(samples: usize, seed: u64, failure: AxiomFailure) -> AxiomReport {
    AxiomReport {
        samples,
        seed,
        passed: false,
        failure: Some(failure),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::InterferenceMapping;

    #[test]
    fn affine_with_positive_offset_passes() {
        let t = InterferenceMapping::affine(vec![0.0, 0.5, 0.5, 0.0], vec![1.0, 1.0]).unwrap();
        let report = validate_interference_axioms(&t, 1000, 1).unwrap();
        assert!(report.passed, "failure: {:?}", report.failure);
    }

    #[test]
    fn identity_fails_scalability() {
        // x ↦ x is homogeneous, so the strict inequality α·x > α·x fails.
        // Shift inputs so outputs stay positive and only scalability trips.
        let t = InterferenceMapping::general(2, |x| vec![x[0].max(1e-300), x[1].max(1e-300)])
            .unwrap();
        let report = validate_interference_axioms(&t, 1000, 2).unwrap();
        assert!(!report.passed);
        let failure = report.failure.unwrap();
        assert!(matches!(
            failure.axiom,
            Axiom::Scalability | Axiom::SubunitScalability
        ));
    }

    #[test]
    fn additive_homogeneous_max_passes() {
        let t = InterferenceMapping::additive_homogeneous(
            2,
            |x| vec![f64::max(2.0 * x[0], 3.0 * x[1]), f64::max(2.0 * x[0], 3.0 * x[1])],
            vec![1.0, 1.0],
        )
        .unwrap();
        let report = validate_interference_axioms(&t, 1000, 3).unwrap();
        assert!(report.passed, "failure: {:?}", report.failure);
    }

    #[test]
    fn decreasing_mapping_fails_monotonicity() {
        let t = InterferenceMapping::general(1, |x| vec![1.0 / (1.0 + x[0])]).unwrap();
        let report = validate_interference_axioms(&t, 1000, 4).unwrap();
        assert!(!report.passed);
        assert_eq!(report.failure.unwrap().axiom, Axiom::Monotonicity);
    }
}
