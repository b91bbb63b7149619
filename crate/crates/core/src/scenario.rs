//! Synthetic wireless scenarios: seeded placement of transmitter–receiver
//! pairs, log-distance path loss, and the affine SINR interference mapping
//! `t_i(p) = γ_i (σ_i + Σ_{j≠i} G_ij p_j) / G_ii` they induce.

use std::path::Path;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::Error;
use crate::mapping::InterferenceMapping;
use crate::Result;

/// Planar positions of one link's endpoints, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub tx: [f64; 2],
    pub rx: [f64; 2],
}

/// A concrete network: linear power gains `G_ij` from transmitter `j` to
/// receiver `i`, noise powers in watts, and linear-scale SINR targets.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkScenario {
    pub num_links: usize,
    /// Row-major `N × N`, linear scale.
    pub gain_matrix: Vec<f64>,
    pub noise_power: Vec<f64>,
    pub sinr_targets: Vec<f64>,
    pub geometry: Option<Vec<LinkGeometry>>,
    pub seed: u64,
}

impl NetworkScenario {
    pub fn gain(&self, i: usize, j: usize) -> f64 {
        self.gain_matrix[i * self.num_links + j]
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_links;
        if n == 0 {
            return Err(Error::InvalidScenario("num_links must be at least 1".into()));
        }
        if self.gain_matrix.len() != n * n {
            return Err(Error::InvalidScenario(format!(
                "gain_matrix has {} entries, expected {}",
                self.gain_matrix.len(),
                n * n
            )));
        }
        if self.noise_power.len() != n || self.sinr_targets.len() != n {
            return Err(Error::InvalidScenario(
                "noise_power and sinr_targets must have num_links entries".into(),
            ));
        }
        for (k, &g) in self.gain_matrix.iter().enumerate() {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::InvalidScenario(format!(
                    "gain_matrix entry {k} is {g}"
                )));
            }
        }
        for i in 0..n {
            if !(self.gain(i, i) > 0.0) {
                return Err(Error::InvalidScenario(format!(
                    "non-positive direct gain G_{{{i},{i}}} = {}",
                    self.gain(i, i)
                )));
            }
        }
        if let Some(&sigma) = self.noise_power.iter().find(|s| !(**s > 0.0)) {
            return Err(Error::InvalidScenario(format!(
                "noise power {sigma} is not positive"
            )));
        }
        if let Some(&gamma) = self.sinr_targets.iter().find(|g| !(**g > 0.0)) {
            return Err(Error::InvalidScenario(format!(
                "SINR target {gamma} is not positive"
            )));
        }
        if let Some(geometry) = &self.geometry {
            if geometry.len() != n {
                return Err(Error::InvalidScenario(
                    "geometry must have num_links entries".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Generator parameters with dense-urban defaults.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub num_links: usize,
    /// Side of the square deployment area, meters.
    pub area_side: f64,
    pub path_loss_exponent: f64,
    /// Reference loss at 1 m, dB.
    pub reference_loss_db: f64,
    pub noise_psd_dbm_per_hz: f64,
    pub bandwidth_hz: f64,
    pub target_sinr_db: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            num_links: 2,
            area_side: 100.0,
            path_loss_exponent: 3.7,
            reference_loss_db: 30.0,
            noise_psd_dbm_per_hz: -154.0,
            bandwidth_hz: 1e7,
            target_sinr_db: 0.0,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    fn validate(&self) -> Result<()> {
        if self.num_links < 2 {
            return Err(Error::InvalidConfig("num_links must be at least 2".into()));
        }
        for (name, value) in [
            ("area_side", self.area_side),
            ("path_loss_exponent", self.path_loss_exponent),
            ("bandwidth_hz", self.bandwidth_hz),
        ] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        Ok(())
    }
}

/// Place `N` transmitter–receiver pairs uniformly at random in the square
/// and derive gains, noise powers, and targets. Identical config and seed
/// produce identical scenarios.
pub fn generate_scenario(config: &ScenarioConfig) -> Result<NetworkScenario> {
    config.validate()?;
    let n = config.num_links;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let geometry: Vec<LinkGeometry> = (0..n)
        .map(|_| LinkGeometry {
            tx: [
                rng.gen_range(0.0..config.area_side),
                rng.gen_range(0.0..config.area_side),
            ],
            rx: [
                rng.gen_range(0.0..config.area_side),
                rng.gen_range(0.0..config.area_side),
            ],
        })
        .collect();

    let reference_gain = 10f64.powf(-config.reference_loss_db / 10.0);
    let mut gain_matrix = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            // Distance clamped to the 1 m reference to keep gains bounded.
            let dx = geometry[j].tx[0] - geometry[i].rx[0];
            let dy = geometry[j].tx[1] - geometry[i].rx[1];
            let d = (dx * dx + dy * dy).sqrt().max(1.0);
            gain_matrix[i * n + j] = reference_gain * d.powf(-config.path_loss_exponent);
        }
    }

    let noise = 10f64.powf((config.noise_psd_dbm_per_hz - 30.0) / 10.0) * config.bandwidth_hz;
    let gamma = 10f64.powf(config.target_sinr_db / 10.0);

    let scenario = NetworkScenario {
        num_links: n,
        gain_matrix,
        noise_power: vec![noise; n],
        sinr_targets: vec![gamma; n],
        geometry: Some(geometry),
        seed: config.seed,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// Materialize the scenario as the affine interference mapping with
/// `A_ij = γ_i G_ij / G_ii` for `j ≠ i`, `A_ii = 0`, `b_i = γ_i σ_i / G_ii`.
pub fn build_mapping(s: &NetworkScenario) -> Result<InterferenceMapping> {
    s.validate()?;
    let n = s.num_links;
    let mut gain = vec![0.0; n * n];
    let mut offset = vec![0.0; n];
    for i in 0..n {
        let direct = s.gain(i, i);
        for j in 0..n {
            if j != i {
                gain[i * n + j] = s.sinr_targets[i] * s.gain(i, j) / direct;
            }
        }
        offset[i] = s.sinr_targets[i] * s.noise_power[i] / direct;
    }
    InterferenceMapping::affine(gain, offset)
}

/// Spectral radius of the interference part `A` of the scenario's mapping,
/// i.e. `λ∞`. Zero for a degenerate (interference-free) scenario.
pub fn interference_spectral_radius(s: &NetworkScenario) -> Result<f64> {
    use crate::norm::{MonotoneNorm, NormKind};
    use crate::num::lambda_infinity;
    use crate::solver::SolverConfig;
    let t = build_mapping(s)?;
    let norm = MonotoneNorm::unit(NormKind::Linf, s.num_links);
    match lambda_infinity(&t, &norm, &SolverConfig::default()) {
        Ok(solution) => Ok(solution.lambda_inf),
        Err(Error::AssumptionViolated { partial, .. }) => Ok(partial.lambda_inf),
        Err(e) => Err(e),
    }
}

const FORMAT_VERSION: &str = "1";

/// Serialize to the scenario document format: a TOML file with version tag
/// "1" and numbers written with 17 significant digits so the round trip is
/// exact.
pub fn scenario_to_string(s: &NetworkScenario) -> Result<String> {
    s.validate()?;
    let n = s.num_links;
    let mut out = String::new();
    out.push_str(&format!("version = \"{FORMAT_VERSION}\"\n"));
    out.push_str(&format!("num_links = {n}\n"));
    out.push_str(&format!("seed = {}\n", s.seed));
    out.push_str("gain_matrix = [\n");
    for i in 0..n {
        out.push_str("  [");
        out.push_str(&row_csv(&s.gain_matrix[i * n..(i + 1) * n]));
        out.push_str("],\n");
    }
    out.push_str("]\n");
    out.push_str(&format!("noise_power = [{}]\n", row_csv(&s.noise_power)));
    out.push_str(&format!("sinr_targets = [{}]\n", row_csv(&s.sinr_targets)));
    if let Some(geometry) = &s.geometry {
        out.push_str("geometry = [\n");
        for g in geometry {
            out.push_str("  [");
            out.push_str(&row_csv(&[g.tx[0], g.tx[1], g.rx[0], g.rx[1]]));
            out.push_str("],\n");
        }
        out.push_str("]\n");
    }
    Ok(out)
}

fn row_csv(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.16e}"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[derive(Deserialize)]
struct ScenarioDoc {
    version: String,
    num_links: usize,
    seed: u64,
    gain_matrix: Vec<Vec<f64>>,
    noise_power: Vec<f64>,
    sinr_targets: Option<Vec<f64>>,
    geometry: Option<Vec<Vec<f64>>>,
}

/// Parse the scenario document format. A missing `sinr_targets` array
/// defaults to all-ones with a warning.
pub fn scenario_from_str(text: &str) -> Result<NetworkScenario> {
    let doc: ScenarioDoc =
        toml::from_str(text).map_err(|e| Error::ScenarioParse(e.to_string()))?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::ScenarioParse(format!(
            "unsupported version {:?} (expected {FORMAT_VERSION:?})",
            doc.version
        )));
    }
    let n = doc.num_links;
    let mut gain_matrix = Vec::with_capacity(n * n);
    if doc.gain_matrix.len() != n {
        return Err(Error::ScenarioParse(format!(
            "gain_matrix has {} rows, expected {n}",
            doc.gain_matrix.len()
        )));
    }
    for (i, row) in doc.gain_matrix.iter().enumerate() {
        if row.len() != n {
            return Err(Error::ScenarioParse(format!(
                "gain_matrix row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        gain_matrix.extend_from_slice(row);
    }
    let sinr_targets = doc.sinr_targets.unwrap_or_else(|| {
        log::warn!("sinr_targets missing from scenario document; defaulting to all-ones");
        vec![1.0; n]
    });
    let geometry = doc
        .geometry
        .map(|rows| {
            rows.iter()
                .enumerate()
                .map(|(i, row)| {
                    if row.len() != 4 {
                        return Err(Error::ScenarioParse(format!(
                            "geometry row {i} has {} entries, expected 4 (tx_x, tx_y, rx_x, rx_y)",
                            row.len()
                        )));
                    }
                    Ok(LinkGeometry {
                        tx: [row[0], row[1]],
                        rx: [row[2], row[3]],
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;

    let scenario = NetworkScenario {
        num_links: n,
        gain_matrix,
        noise_power: doc.noise_power,
        sinr_targets,
        geometry,
        seed: doc.seed,
    };
    scenario.validate()?;
    Ok(scenario)
}

pub fn save_scenario(s: &NetworkScenario, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, scenario_to_string(s)?)?;
    Ok(())
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<NetworkScenario> {
    let text = std::fs::read_to_string(path)?;
    scenario_from_str(&text)
}
