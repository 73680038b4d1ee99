//! Scenario files and built-in named scenarios.
//!
//! A scenario declares the interval length, the angle functions `theta`
//! and `phi` as lists of affine pieces and/or sample arrays, a jump list
//! of `(location, d_theta, d_phi)` triples, an optional geometric tail of
//! countably many jumps, solver settings, and an optional initial frame
//! given as a composition of axis-angle rotations. See the repository
//! README for the full schema.

use nalgebra::Vector3;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::bvmeasure::{
    BVScalar, CountableSkewPath, GeometricJumpFamily, Jump, Piece, SkewPath,
};
use crate::error::{Error, Result};
use crate::liegroup::{rodrigues_exp, AxisAngle, RotationMatrix};
use crate::solver::SolverConfig;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default = "default_dimension")]
    pub dimension: usize,
    pub length: f64,
    pub theta: FunctionSpec,
    #[serde(default)]
    pub phi: Option<FunctionSpec>,
    #[serde(default)]
    pub jumps: Vec<JumpSpec>,
    #[serde(default)]
    pub tail: Option<TailSpec>,
    #[serde(default)]
    pub solver: SolverSpec,
    #[serde(default)]
    pub initial_frame: Vec<RotationSpec>,
}

fn default_dimension() -> usize {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionSpec {
    #[serde(default)]
    pub monotone: bool,
    pub pieces: Vec<PieceSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    /// Arc length where the piece ends.
    pub to: f64,
    #[serde(flatten)]
    pub form: PieceForm,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PieceForm {
    Affine { slope: f64, intercept: f64 },
    Samples { values: Vec<f64> },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSpec {
    pub at: f64,
    #[serde(default)]
    pub d_theta: f64,
    #[serde(default)]
    pub d_phi: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailSpec {
    #[serde(default)]
    pub theta_amp: f64,
    #[serde(default)]
    pub phi_amp: f64,
    pub ratio: f64,
    pub location_ratio: f64,
    #[serde(default = "default_start_index")]
    pub start_index: u32,
}

fn default_start_index() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
    #[serde(default = "default_substeps")]
    pub oracle_substeps: usize,
    #[serde(default = "default_max_step")]
    pub max_step_increment: f64,
    #[serde(default = "default_nmax")]
    pub truncation_levels: u32,
}

fn default_grid() -> usize {
    4096
}
fn default_eps() -> Vec<f64> {
    vec![0.2, 0.1, 0.05, 0.025]
}
fn default_substeps() -> usize {
    4
}
fn default_max_step() -> f64 {
    1e-2
}
fn default_nmax() -> u32 {
    12
}

impl Default for SolverSpec {
    fn default() -> Self {
        Self {
            grid: default_grid(),
            eps: default_eps(),
            oracle_substeps: default_substeps(),
            max_step_increment: default_max_step(),
            truncation_levels: default_nmax(),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSpec {
    pub axis: [f64; 3],
    pub angle: f64,
}

/// Scenario compiled into solver inputs.
#[derive(Debug, Clone)]
pub struct BuiltScenario {
    pub name: String,
    pub dimension: usize,
    pub data: CountableSkewPath,
    pub initial: RotationMatrix,
    pub config: SolverConfig,
    pub theta_monotone: bool,
    pub truncation_levels: u32,
}

impl Scenario {
    /// Parses a TOML scenario; errors carry the file's line and field.
    pub fn from_toml(name_hint: &str, text: &str) -> Result<Scenario> {
        toml::from_str(text).map_err(|e| Error::ScenarioParse {
            name: name_hint.to_string(),
            message: e.to_string(),
        })
    }

    pub fn from_file(path: &std::path::Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&path.display().to_string(), &text)
    }

    fn function(&self, spec: &FunctionSpec, jumps: Vec<Jump>) -> Result<BVScalar> {
        let pieces = spec
            .pieces
            .iter()
            .map(|p| {
                let piece = match &p.form {
                    PieceForm::Affine { slope, intercept } => Piece::Affine {
                        slope: *slope,
                        intercept: *intercept,
                    },
                    PieceForm::Samples { values } => Piece::Samples {
                        values: values.clone(),
                    },
                };
                (p.to, piece)
            })
            .collect();
        BVScalar::new(self.length, pieces, jumps, spec.monotone)
    }

    /// Compiles the scenario: builds the datum, the initial frame, and the
    /// solver configuration.
    pub fn build(&self) -> Result<BuiltScenario> {
        if self.dimension != 2 && self.dimension != 3 {
            return Err(Error::Dimension {
                expected: 3,
                got: self.dimension,
            });
        }
        let theta_jumps: Vec<Jump> = self
            .jumps
            .iter()
            .filter(|j| j.d_theta != 0.0)
            .map(|j| Jump {
                location: j.at,
                value: j.d_theta,
            })
            .collect();
        let phi_jumps: Vec<Jump> = self
            .jumps
            .iter()
            .filter(|j| j.d_phi != 0.0)
            .map(|j| Jump {
                location: j.at,
                value: j.d_phi,
            })
            .collect();
        let theta = self.function(&self.theta, theta_jumps)?;
        let base = if self.dimension == 2 {
            if self.phi.is_some() || !phi_jumps.is_empty() {
                return Err(Error::BadJumpList(
                    "planar scenarios cannot declare phi data".into(),
                ));
            }
            SkewPath::planar(theta)
        } else {
            let phi_spec = self.phi.clone().unwrap_or(FunctionSpec {
                monotone: false,
                pieces: vec![PieceSpec {
                    to: self.length,
                    form: PieceForm::Affine {
                        slope: 0.0,
                        intercept: 0.0,
                    },
                }],
            });
            let phi = self.function(&phi_spec, phi_jumps)?;
            SkewPath::spatial(theta, phi)?
        };
        let tail = match &self.tail {
            None => None,
            Some(t) => {
                let family = GeometricJumpFamily {
                    theta_amp: t.theta_amp,
                    phi_amp: t.phi_amp,
                    ratio: t.ratio,
                    location_ratio: t.location_ratio,
                    start_index: t.start_index,
                };
                family.validate()?;
                Some(family)
            }
        };
        let initial = self.initial_rotation()?;
        let config = SolverConfig {
            base_grid: self.solver.grid,
            eps_ladder: self.solver.eps.clone(),
            oracle_substeps: self.solver.oracle_substeps,
            max_step_increment: self.solver.max_step_increment,
            ..SolverConfig::default()
        };
        config.validate()?;
        Ok(BuiltScenario {
            name: self.name.clone(),
            dimension: self.dimension,
            data: CountableSkewPath { base, tail },
            initial,
            config,
            theta_monotone: self.theta.monotone,
            truncation_levels: self.solver.truncation_levels,
        })
    }

    fn initial_rotation(&self) -> Result<RotationMatrix> {
        let mut g = RotationMatrix::identity(self.dimension);
        for spec in &self.initial_frame {
            let axis = Vector3::new(spec.axis[0], spec.axis[1], spec.axis[2]);
            let factor = if self.dimension == 2 {
                if axis.x != 0.0 || axis.y != 0.0 || axis.z <= 0.0 {
                    return Err(Error::BadConfig(
                        "planar initial frames rotate about [0, 0, 1]".into(),
                    ));
                }
                RotationMatrix::planar(spec.angle)
            } else {
                let n = axis.norm();
                if n < 1e-12 {
                    return Err(Error::NonUnitAxis(n));
                }
                rodrigues_exp(&AxisAngle::new(axis / n, spec.angle)?)?
            };
            g = g.compose(&factor);
        }
        Ok(g)
    }
}

/// Names of the built-in scenarios, mirroring the worked examples:
/// the one-jump case study, the planar jump, the circular helix, the 2D
/// circle, a strictly increasing wavy planar angle, a three-jump datum,
/// the geometric countable-jump family, and a seeded random-jump datum.
pub const BUILTIN_NAMES: [&str; 8] = [
    "case-study",
    "planar-jump",
    "helix",
    "circle-2d",
    "sine-2d",
    "three-jumps",
    "geometric-tail",
    "random-jumps",
];

/// Parameters accepted by [`builtin`].
#[derive(Debug, Clone, Copy)]
pub struct BuiltinParams {
    /// Curvature-angle jump for `case-study` / `planar-jump`.
    pub d: f64,
    /// Torsion-angle jump for `case-study`.
    pub tau: f64,
    /// Seed for `random-jumps`.
    pub seed: u64,
}

impl Default for BuiltinParams {
    fn default() -> Self {
        Self {
            d: 1.0,
            tau: 1.0,
            seed: 7,
        }
    }
}

fn affine_function(monotone: bool, to: f64, slope: f64, intercept: f64) -> FunctionSpec {
    FunctionSpec {
        monotone,
        pieces: vec![PieceSpec {
            to,
            form: PieceForm::Affine { slope, intercept },
        }],
    }
}

/// Returns the built-in scenario of the given name, or an error listing it
/// as unknown.
pub fn builtin(name: &str, params: BuiltinParams) -> Result<Scenario> {
    let d = params.d;
    let tau = params.tau;
    match name {
        "case-study" => {
            // the one-jump datum on (-1, 1), shifted to (0, 2): theta has
            // slope one and a jump of d at midpoint, phi jumps by tau there.
            // The initial frame anchors the solution so the one-sided
            // frames at the jump take their closed forms R(-a, u), R(a, u).
            let big = d.hypot(tau);
            if !(big > 0.0 && big < std::f64::consts::PI) {
                return Err(Error::JumpTooLarge {
                    location: 1.0,
                    magnitude: big,
                });
            }
            Ok(Scenario {
                name: format!("case-study(d={d},tau={tau})"),
                dimension: 3,
                length: 2.0,
                theta: affine_function(true, 2.0, 1.0, -1.0),
                phi: Some(affine_function(false, 2.0, 0.0, 0.0)),
                jumps: vec![JumpSpec {
                    at: 1.0,
                    d_theta: d,
                    d_phi: tau,
                }],
                tail: None,
                solver: SolverSpec::default(),
                initial_frame: vec![
                    RotationSpec {
                        axis: [tau / big, 0.0, d / big],
                        angle: -big / 2.0,
                    },
                    RotationSpec {
                        axis: [0.0, 0.0, 1.0],
                        angle: -1.0,
                    },
                ],
            })
        }
        "planar-jump" => {
            if !(d > 0.0 && d < std::f64::consts::PI) {
                return Err(Error::JumpTooLarge {
                    location: 1.0,
                    magnitude: d,
                });
            }
            Ok(Scenario {
                name: format!("planar-jump(d={d})"),
                dimension: 2,
                length: 2.0,
                theta: affine_function(true, 2.0, 1.0, 0.0),
                phi: None,
                jumps: vec![JumpSpec {
                    at: 1.0,
                    d_theta: d,
                    d_phi: 0.0,
                }],
                tail: None,
                solver: SolverSpec::default(),
                initial_frame: vec![],
            })
        }
        "helix" => {
            let l = 4.0 * std::f64::consts::PI;
            Ok(Scenario {
                name: "helix(k=1,tau=0.5)".into(),
                dimension: 3,
                length: l,
                theta: affine_function(true, l, 1.0, 0.0),
                phi: Some(affine_function(false, l, 0.5, 0.0)),
                jumps: vec![],
                tail: None,
                solver: SolverSpec::default(),
                initial_frame: vec![],
            })
        }
        "circle-2d" => {
            let l = 2.0 * std::f64::consts::PI;
            Ok(Scenario {
                name: "circle-2d".into(),
                dimension: 2,
                length: l,
                theta: affine_function(true, l, 1.0, 0.0),
                phi: None,
                jumps: vec![],
                tail: None,
                solver: SolverSpec::default(),
                initial_frame: vec![],
            })
        }
        "sine-2d" => {
            // theta(s) = s + 0.25 sin s on (0, 2 pi), strictly increasing
            let l = 2.0 * std::f64::consts::PI;
            let n = 16384;
            let values: Vec<f64> = (0..=n)
                .map(|i| {
                    let s = l * i as f64 / n as f64;
                    s + 0.25 * s.sin()
                })
                .collect();
            Ok(Scenario {
                name: "sine-2d".into(),
                dimension: 2,
                length: l,
                theta: FunctionSpec {
                    monotone: true,
                    pieces: vec![PieceSpec {
                        to: l,
                        form: PieceForm::Samples { values },
                    }],
                },
                phi: None,
                jumps: vec![],
                tail: None,
                solver: SolverSpec {
                    grid: 8192,
                    ..SolverSpec::default()
                },
                initial_frame: vec![],
            })
        }
        "three-jumps" => Ok(Scenario {
            name: "three-jumps".into(),
            dimension: 3,
            length: 2.0,
            theta: affine_function(true, 2.0, 1.0, 0.0),
            phi: Some(affine_function(false, 2.0, 0.0, 0.0)),
            jumps: vec![
                JumpSpec {
                    at: 0.5,
                    d_theta: 0.5,
                    d_phi: 0.0,
                },
                JumpSpec {
                    at: 1.0,
                    d_theta: 0.0,
                    d_phi: 0.5,
                },
                JumpSpec {
                    at: 1.5,
                    d_theta: 0.3,
                    d_phi: 0.4,
                },
            ],
            tail: None,
            solver: SolverSpec::default(),
            initial_frame: vec![],
        }),
        "geometric-tail" => Ok(Scenario {
            name: "geometric-tail".into(),
            dimension: 3,
            length: 2.0,
            theta: affine_function(true, 2.0, 1.0, 0.0),
            phi: Some(affine_function(false, 2.0, 0.0, 0.0)),
            jumps: vec![],
            tail: Some(TailSpec {
                theta_amp: 1.0,
                phi_amp: 0.0,
                ratio: 0.8,
                location_ratio: 0.5,
                start_index: 1,
            }),
            solver: SolverSpec::default(),
            initial_frame: vec![],
        }),
        "random-jumps" => {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            let count = rng.random_range(1..=4usize);
            let mut jumps = Vec::with_capacity(count);
            for i in 0..count {
                // spaced locations, jump magnitudes well inside (0, pi)
                let at = 2.0 * (i as f64 + rng.random_range(0.25..0.75)) / count as f64;
                let magnitude = rng.random_range(0.1..2.6);
                let mix = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
                jumps.push(JumpSpec {
                    at,
                    d_theta: magnitude * mix.cos(),
                    d_phi: magnitude * mix.sin(),
                });
            }
            Ok(Scenario {
                name: format!("random-jumps(seed={})", params.seed),
                dimension: 3,
                length: 2.0,
                theta: affine_function(true, 2.0, rng.random_range(0.5..1.5), 0.0),
                phi: Some(affine_function(false, 2.0, rng.random_range(-0.5..0.5), 0.0)),
                jumps,
                tail: None,
                solver: SolverSpec::default(),
                initial_frame: vec![],
            })
        }
        other => Err(Error::UnknownBuiltin(other.to_string())),
    }
}
