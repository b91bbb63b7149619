use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::vector::NonnegVector;
use crate::Result;

/// Shared evaluator closure for mappings `R^N_+ → R^N`.
pub type VectorFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Structural metadata of an interference mapping.
///
/// The decomposition tags let downstream code compute asymptotic mappings
/// analytically: an affine mapping `x ↦ Ax + b` has asymptotic mapping
/// `x ↦ Ax`, and an additive-homogeneous mapping `x ↦ g(x) + b` has
/// asymptotic mapping `g`.
#[derive(Clone)]
pub enum Structure {
    /// `T(x) = A x + b` with `A ≥ 0` entrywise and `b > 0`.
    Affine {
        /// Row-major `N × N` gain matrix.
        gain: Vec<f64>,
        offset: Vec<f64>,
    },
    /// `T(x) = g(x) + b` with `g` positively homogeneous, monotone, `g(0) = 0`.
    AdditiveHomogeneous {
        homogeneous: VectorFn,
        offset: Vec<f64>,
    },
    /// No declared structure; asymptotics fall back to the numeric limit.
    General { evaluator: VectorFn },
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Affine { gain, offset } => f
                .debug_struct("Affine")
                .field("gain", gain)
                .field("offset", offset)
                .finish(),
            Structure::AdditiveHomogeneous { offset, .. } => f
                .debug_struct("AdditiveHomogeneous")
                .field("offset", offset)
                .finish_non_exhaustive(),
            Structure::General { .. } => f.debug_struct("General").finish_non_exhaustive(),
        }
    }
}

/// An evaluatable standard interference mapping `T: R^N_+ → R^N_++`.
///
/// Off-orthant inputs are rejected at the type boundary ([`NonnegVector`])
/// rather than mapped to infinity; the algorithms only ever evaluate on the
/// orthant. Whether `T` actually satisfies the scalability and monotonicity
/// axioms is checked by sampling in [`crate::axioms`].
#[derive(Clone)]
pub struct InterferenceMapping {
    dim: usize,
    structure: Structure,
    asymptotic_override: Option<VectorFn>,
}

impl fmt::Debug for InterferenceMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InterferenceMapping")
            .field("dim", &self.dim)
            .field("structure", &self.structure)
            .field("has_override", &self.asymptotic_override.is_some())
            .finish()
    }
}

impl InterferenceMapping {
    /// Affine mapping `x ↦ A x + b`, row-major `A`.
    pub fn affine(gain: Vec<f64>, offset: Vec<f64>) -> Result<Self> {
        let dim = offset.len();
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        if gain.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: gain.len(),
            });
        }
        if let Some((index, &value)) = gain
            .iter()
            .enumerate()
            .find(|(_, g)| !g.is_finite() || **g < 0.0)
        {
            return Err(Error::InvalidCoordinate { index, value });
        }
        if let Some((index, &value)) = offset
            .iter()
            .enumerate()
            .find(|(_, b)| !b.is_finite() || **b <= 0.0)
        {
            return Err(Error::NonPositiveOutput { index, value });
        }
        Ok(Self {
            dim,
            structure: Structure::Affine { gain, offset },
            asymptotic_override: None,
        })
    }

    /// Mapping `x ↦ g(x) + b` with a positively homogeneous monotone part.
    pub fn additive_homogeneous(
        dim: usize,
        homogeneous: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
        offset: Vec<f64>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        if offset.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: offset.len(),
            });
        }
        if let Some((index, &value)) = offset
            .iter()
            .enumerate()
            .find(|(_, b)| !b.is_finite() || **b <= 0.0)
        {
            return Err(Error::NonPositiveOutput { index, value });
        }
        Ok(Self {
            dim,
            structure: Structure::AdditiveHomogeneous {
                homogeneous: Arc::new(homogeneous),
                offset,
            },
            asymptotic_override: None,
        })
    }

    /// Mapping with no declared structure.
    pub fn general(
        dim: usize,
        evaluator: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        Ok(Self {
            dim,
            structure: Structure::General {
                evaluator: Arc::new(evaluator),
            },
            asymptotic_override: None,
        })
    }

    /// Attach a known asymptotic mapping `T∞`.
    ///
    /// The override wins over the numeric limit but is cross-checked against
    /// it when the asymptotic mapping is built.
    pub fn with_asymptotic_override(
        mut self,
        evaluator: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.asymptotic_override = Some(Arc::new(evaluator));
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn asymptotic_override(&self) -> Option<&VectorFn> {
        self.asymptotic_override.as_ref()
    }

    /// Evaluate `T(x)`, enforcing strict positivity of the output.
    pub fn eval(&self, x: &NonnegVector) -> Result<NonnegVector> {
        let out = self.eval_raw(x.as_slice())?;
        for (index, &value) in out.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::NonPositiveOutput { index, value });
            }
        }
        NonnegVector::new(out)
    }

    /// Evaluate without the positivity check (used by hot solver loops that
    /// validate lazily).
    pub(crate) fn eval_raw(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(match &self.structure {
            Structure::Affine { gain, offset } => {
                let n = self.dim;
                let mut out = offset.clone();
                for i in 0..n {
                    let row = &gain[i * n..(i + 1) * n];
                    out[i] += row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>();
                }
                out
            }
            Structure::AdditiveHomogeneous { homogeneous, offset } => {
                let mut out = homogeneous(x);
                assert_eq!(out.len(), self.dim, "homogeneous part changed dimension");
                for (o, b) in out.iter_mut().zip(offset) {
                    *o += b;
                }
                out
            }
            Structure::General { evaluator } => {
                let out = evaluator(x);
                assert_eq!(out.len(), self.dim, "evaluator changed dimension");
                out
            }
        })
    }

    /// Offset `b = T(0)`.
    pub fn at_zero(&self) -> Result<NonnegVector> {
        self.eval(&NonnegVector::zeros(self.dim))
    }
}
