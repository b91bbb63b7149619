//! Asymptotic functions and mappings: the positively homogeneous limit
//! `f∞(x) = lim_{h→∞} f(hx)/h` that captures pure interference behavior with
//! noise scaled away.
//!
//! For declared structure the limit is analytic (affine mappings drop their
//! offset, additive-homogeneous mappings keep their homogeneous part); for
//! general mappings it is estimated on a doubling schedule whose ratios are
//! certified monotone.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::mapping::{InterferenceMapping, Structure, VectorFn};
use crate::vector::NonnegVector;
use crate::Result;

/// How an [`AsymptoticMapping`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    /// Offset dropped from an affine mapping; exact.
    AnalyticAffine,
    /// Homogeneous part of an additive-homogeneous mapping; exact.
    AnalyticHomogeneousPart,
    /// Coordinate-wise numeric limit.
    NumericLimit,
    /// User-supplied override, cross-checked against the numeric estimate.
    Override,
}

/// Result of a radial limit estimation.
#[derive(Debug, Clone, Copy)]
pub struct LimitEstimate {
    pub value: f64,
    /// Last `h` evaluated; `value = f(h·x)/h` there, which is a certified
    /// upper bound on the limit.
    pub h_final: f64,
    /// `|r(h_final) − r(h_final/2)|`, a quality indicator for the estimate.
    pub bracket_width: f64,
}

/// Maximum `h` on the doubling schedule; caps overflow in squared terms.
const H_CAP: f64 = 1e12;

/// Estimate `lim_{h→∞} f(hx)/h` on the doubling schedule `h = 1, 2, 4, …`.
///
/// Stops when successive ratios agree to `rel_tol` or `h` exceeds the cap,
/// returning the ratio at the final `h`. The ratio sequence of a standard
/// interference function is monotonically decreasing; a violation is
/// reported as an error rather than smoothed over.
pub fn estimate_asymptotic_value(
    f: impl Fn(&[f64]) -> f64,
    x: &NonnegVector,
    rel_tol: f64,
) -> Result<LimitEstimate> {
    if !(rel_tol > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "rel_tol must be positive, got {rel_tol}"
        )));
    }
    let ratio = |h: f64| -> Result<f64> {
        let scaled: Vec<f64> = x.as_slice().iter().map(|v| v * h).collect();
        let value = f(&scaled);
        if !value.is_finite() {
            return Err(Error::LimitOverflow { last_h: h / 2.0 });
        }
        Ok(value / h)
    };

    let mut h = 1.0;
    let mut r = ratio(h)?;
    loop {
        let h_next = 2.0 * h;
        let r_next = ratio(h_next)?;
        if r_next > r + 1e-12 * r.abs().max(1e-300) {
            return Err(Error::NotInterferenceFunction {
                h: h_next,
                previous: r,
                current: r_next,
            });
        }
        let gap = (r_next - r).abs();
        if gap <= rel_tol * r_next.max(1e-30) || h_next > H_CAP {
            return Ok(LimitEstimate {
                value: r_next,
                h_final: h_next,
                bracket_width: gap,
            });
        }
        h = h_next;
        r = r_next;
    }
}

enum Kind {
    Affine { gain: Vec<f64> },
    Closure { f: VectorFn },
    Numeric { source: InterferenceMapping, rel_tol: f64 },
}

/// The asymptotic mapping `T∞` associated with an interference mapping.
///
/// Outputs are nonnegative and may have zero coordinates; positive
/// homogeneity and monotonicity hold (up to estimation error for the
/// numeric provenance).
pub struct AsymptoticMapping {
    dim: usize,
    kind: Kind,
    provenance: Provenance,
}

impl std::fmt::Debug for AsymptoticMapping {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AsymptoticMapping")
            .field("dim", &self.dim)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl AsymptoticMapping {
    /// Linear mapping `x ↦ Ax` from a row-major square matrix.
    pub fn analytic_affine(gain: Vec<f64>) -> Result<Self> {
        let dim = (gain.len() as f64).sqrt() as usize;
        if dim * dim != gain.len() || dim == 0 {
            return Err(Error::InvalidConfig(format!(
                "gain matrix length {} is not a positive perfect square",
                gain.len()
            )));
        }
        Ok(Self {
            dim,
            kind: Kind::Affine { gain },
            provenance: Provenance::AnalyticAffine,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Row-major matrix when the mapping is linear.
    pub fn matrix(&self) -> Option<&[f64]> {
        match &self.kind {
            Kind::Affine { gain } => Some(gain),
            _ => None,
        }
    }

    pub fn eval(&self, x: &NonnegVector) -> Result<NonnegVector> {
        NonnegVector::new(self.eval_slice(x.as_slice())?)
    }

    pub(crate) fn eval_slice(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        match &self.kind {
            Kind::Affine { gain } => {
                let n = self.dim;
                Ok((0..n)
                    .map(|i| {
                        gain[i * n..(i + 1) * n]
                            .iter()
                            .zip(x)
                            .map(|(a, v)| a * v)
                            .sum()
                    })
                    .collect())
            }
            Kind::Closure { f } => Ok(f(x)),
            Kind::Numeric { source, rel_tol } => {
                // Homogeneity forces T∞(0) = 0; skip the estimator there.
                if x.iter().all(|&v| v == 0.0) {
                    return Ok(vec![0.0; self.dim]);
                }
                let xv = NonnegVector::new(x.to_vec())?;
                (0..self.dim)
                    .map(|i| {
                        let estimate = estimate_asymptotic_value(
                            |y| source.eval_raw(y).map(|out| out[i]).unwrap_or(f64::NAN),
                            &xv,
                            *rel_tol,
                        )?;
                        Ok(estimate.value)
                    })
                    .collect()
            }
        }
    }

    /// Bracket widths of the numeric estimate at `x`; `None` for analytic
    /// provenances, whose values are exact.
    pub fn bracket_widths(&self, x: &NonnegVector) -> Result<Option<Vec<f64>>> {
        match &self.kind {
            Kind::Numeric { source, rel_tol } => {
                if x.as_slice().iter().all(|&v| v == 0.0) {
                    return Ok(Some(vec![0.0; self.dim]));
                }
                let widths = (0..self.dim)
                    .map(|i| {
                        let estimate = estimate_asymptotic_value(
                            |y| source.eval_raw(y).map(|out| out[i]).unwrap_or(f64::NAN),
                            x,
                            *rel_tol,
                        )?;
                        Ok(estimate.bracket_width)
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Ok(Some(widths))
            }
            _ => Ok(None),
        }
    }
}

/// Build `T∞` for a mapping, analytically where the structure allows.
///
/// An attached asymptotic override wins over the structural rule but is
/// cross-checked at 5 sample points against the numeric estimate.
pub fn build_asymptotic_mapping(
    t: &InterferenceMapping,
    rel_tol: f64,
) -> Result<AsymptoticMapping> {
    let dim = t.dim();
    if let Some(override_fn) = t.asymptotic_override() {
        cross_check_override(t, override_fn, rel_tol)?;
        return Ok(AsymptoticMapping {
            dim,
            kind: Kind::Closure {
                f: override_fn.clone(),
            },
            provenance: Provenance::Override,
        });
    }
    Ok(match t.structure() {
        Structure::Affine { gain, .. } => AsymptoticMapping {
            dim,
            kind: Kind::Affine { gain: clone_gain(gain) },
            provenance: Provenance::AnalyticAffine,
        },
        Structure::AdditiveHomogeneous { homogeneous, .. } => AsymptoticMapping {
            dim,
            kind: Kind::Closure {
                f: homogeneous.clone(),
            },
            provenance: Provenance::AnalyticHomogeneousPart,
        },
        Structure::General { .. } => AsymptoticMapping {
            dim,
            kind: Kind::Numeric {
                source: t.clone(),
                rel_tol,
            },
            provenance: Provenance::NumericLimit,
        },
    })
}

fn clone_gain(gain: &[f64]) -> Vec<f64> {
    gain.to_vec()
}

fn cross_check_override(
    t: &InterferenceMapping,
    override_fn: &VectorFn,
    rel_tol: f64,
) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..5 {
        let x = NonnegVector::new(
            (0..t.dim())
                .map(|_| 10f64.powf(rng.gen_range(-2.0..2.0)))
                .collect(),
        )?;
        let claimed = override_fn(x.as_slice());
        for i in 0..t.dim() {
            let estimate = estimate_asymptotic_value(
                |y| t.eval_raw(y).map(|out| out[i]).unwrap_or(f64::NAN),
                &x,
                rel_tol,
            )?;
            let tol = 1e-5 * estimate.value.abs().max(1.0) + 10.0 * estimate.bracket_width;
            if (claimed[i] - estimate.value).abs() > tol {
                return Err(Error::OverrideMismatch {
                    point: x.as_slice().to_vec(),
                    detail: format!(
                        "coordinate {i}: override {} vs numeric {} (tol {tol:.3e})",
                        claimed[i], estimate.value
                    ),
                });
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapping::InterferenceMapping;

    fn v(values: &[f64]) -> NonnegVector {
        NonnegVector::new(values.to_vec()).unwrap()
    }

    #[test]
    fn scalar_limits_match_symbolic_values() {
        let est = estimate_asymptotic_value(|x| 1.0 + 0.5 * x[0], &v(&[1.0]), 1e-10).unwrap();
        assert!((est.value - 0.5).abs() < 1e-9, "got {}", est.value);

        let est = estimate_asymptotic_value(
            |x| 1.0 + f64::max(2.0 * x[0], 3.0 * x[1]),
            &v(&[1.0, 1.0]),
            1e-10,
        )
        .unwrap();
        assert!((est.value - 3.0).abs() < 1e-8, "got {}", est.value);

        // Sublinear sqrt term vanishes: limit is the linear coefficient.
        // The sqrt tail decays as h^(-1/2), so the remaining gap at the
        // stopping point is a small constant multiple of rel_tol.
        let est =
            estimate_asymptotic_value(|x| 1.0 + x[0].sqrt() + 2.0 * x[0], &v(&[1.0]), 1e-6)
                .unwrap();
        assert!((est.value - 2.0).abs() < 1e-5, "got {}", est.value);
        assert!(est.value >= 2.0, "ratio is an upper bound on the limit");
    }

    #[test]
    fn ratio_increase_is_rejected() {
        // f(x) = x^2 is superlinear: r(h) = h x^2 increases.
        let err = estimate_asymptotic_value(|x| x[0] * x[0], &v(&[1.0]), 1e-10).unwrap_err();
        assert!(matches!(err, Error::NotInterferenceFunction { .. }));
    }

    #[test]
    fn overflow_reports_last_finite_h() {
        // Huge affine function: the ratio is properly decreasing but f(hx)
        // itself overflows well before the schedule cap.
        let err =
            estimate_asymptotic_value(|x| 1e300 * (1.0 + x[0]), &v(&[1.0]), 1e-16).unwrap_err();
        match err {
            Error::LimitOverflow { last_h } => assert!(last_h.is_finite() && last_h >= 1.0),
            other => panic!("expected LimitOverflow, got {other:?}"),
        }
    }

    #[test]
    fn affine_structure_drops_offset() {
        let t = InterferenceMapping::affine(vec![0.0, 0.5, 0.5, 0.0], vec![1.0, 1.0]).unwrap();
        let t_inf = build_asymptotic_mapping(&t, 1e-10).unwrap();
        assert_eq!(t_inf.provenance(), Provenance::AnalyticAffine);
        let y = t_inf.eval(&v(&[2.0, 2.0])).unwrap();
        assert_eq!(y.as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn additive_homogeneous_keeps_homogeneous_part() {
        let t = InterferenceMapping::additive_homogeneous(
            2,
            |x| vec![f64::max(2.0 * x[0], 3.0 * x[1]), f64::max(x[0], x[1])],
            vec![1.0, 1.0],
        )
        .unwrap();
        let t_inf = build_asymptotic_mapping(&t, 1e-10).unwrap();
        assert_eq!(t_inf.provenance(), Provenance::AnalyticHomogeneousPart);
        let y = t_inf.eval(&v(&[1.0, 1.0])).unwrap();
        assert_eq!(y.as_slice(), &[3.0, 1.0]);
    }

    #[test]
    fn numeric_limit_matches_linear_part_of_general_mapping() {
        // f_i(p) = sigma_i + (Ap)_i + sqrt(sum p): the sqrt is sublinear.
        let a = [[0.2, 0.4], [0.3, 0.1]];
        let t = InterferenceMapping::general(2, move |p| {
            let root = (p[0] + p[1]).sqrt();
            vec![
                1.0 + a[0][0] * p[0] + a[0][1] * p[1] + root,
                2.0 + a[1][0] * p[0] + a[1][1] * p[1] + root,
            ]
        })
        .unwrap();
        let t_inf = build_asymptotic_mapping(&t, 1e-10).unwrap();
        assert_eq!(t_inf.provenance(), Provenance::NumericLimit);

        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10 {
            let x = v(&[rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0)]);
            let got = t_inf.eval(&x).unwrap();
            for i in 0..2 {
                let want = a[i][0] * x[0] + a[i][1] * x[1];
                assert!(
                    (got[i] - want).abs() <= 1e-5 * want.abs().max(1e-30),
                    "coordinate {i}: {} vs {want}",
                    got[i]
                );
            }
        }
        let widths = t_inf.bracket_widths(&v(&[1.0, 1.0])).unwrap().unwrap();
        assert!(widths.iter().all(|&w| w >= 0.0));
    }

    #[test]
    fn override_wins_and_is_cross_checked() {
        let t = InterferenceMapping::general(1, |x| vec![1.0 + 0.5 * x[0]])
            .unwrap()
            .with_asymptotic_override(|x| vec![0.5 * x[0]]);
        let t_inf = build_asymptotic_mapping(&t, 1e-10).unwrap();
        assert_eq!(t_inf.provenance(), Provenance::Override);
        assert_eq!(t_inf.eval(&v(&[4.0])).unwrap().as_slice(), &[2.0]);

        let bad = InterferenceMapping::general(1, |x| vec![1.0 + 0.5 * x[0]])
            .unwrap()
            .with_asymptotic_override(|x| vec![0.9 * x[0]]);
        let err = build_asymptotic_mapping(&bad, 1e-10).unwrap_err();
        assert!(matches!(err, Error::OverrideMismatch { .. }));
    }

    #[test]
    fn zero_vector_short_circuits_to_zero() {
        let t = InterferenceMapping::general(2, |x| vec![1.0 + x[0], 1.0 + x[1]]).unwrap();
        let t_inf = build_asymptotic_mapping(&t, 1e-10).unwrap();
        let y = t_inf.eval(&NonnegVector::zeros(2)).unwrap();
        assert_eq!(y.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn sampled_homogeneity_monotonicity_dominance_concavity() {
        let t = InterferenceMapping::affine(
            vec![0.1, 0.3, 0.0, 0.2, 0.1, 0.4, 0.3, 0.2, 0.1],
            vec![1.0, 2.0, 0.5],
        )
        .unwrap();
        let t_inf = build_asymptotic_mapping(&t, 1e-10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..10.0)).collect();
            let xv = v(&x);
            let base = t_inf.eval(&xv).unwrap();
            let sup = base.as_slice().iter().fold(0.0_f64, |m, &v| m.max(v));

            for alpha in [0.5, 2.0, 10.0] {
                let scaled = t_inf.eval(&xv.scale(alpha).unwrap()).unwrap();
                for i in 0..3 {
                    assert!((scaled[i] - alpha * base[i]).abs() <= 1e-8 * (1.0 + sup));
                }
            }

            // Monotonicity against a dominated point.
            let y: Vec<f64> = x.iter().map(|v| v * rng.gen_range(0.0..1.0)).collect();
            let smaller = t_inf.eval(&v(&y)).unwrap();
            assert!(base.dominates(&smaller));

            // Dominance: T∞(x) <= T(x) coordinate-wise.
            let full = t.eval(&xv).unwrap();
            assert!(full.dominates(&base));

            // Midpoint concavity, with equality for linear maps.
            let z: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..10.0)).collect();
            let mid: Vec<f64> = x.iter().zip(&z).map(|(a, b)| 0.5 * (a + b)).collect();
            let f_mid = t_inf.eval(&v(&mid)).unwrap();
            let f_z = t_inf.eval(&v(&z)).unwrap();
            for i in 0..3 {
                let avg = 0.5 * (base[i] + f_z[i]);
                assert!(f_mid[i] >= avg - 1e-10 * (1.0 + avg));
                assert!((f_mid[i] - avg).abs() <= 1e-10 * (1.0 + avg), "linear: equality");
            }
        }
    }
}
