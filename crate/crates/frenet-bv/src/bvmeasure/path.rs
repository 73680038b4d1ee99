//! The Sk(N)-valued datum `Omega` built from scalar BV functions.
//!
//! In dimension 3 the datum is `Omega = -theta J3 - phi J1`, i.e. the only
//! nonzero entries are `(1,2) = theta` and `(2,3) = phi` (and their
//! negatives). In dimension 2 it is `theta` times the planar generator.
//! Any other dimension is supported for continuous (jump-free) data only.

use nalgebra::DMatrix;

use crate::bvmeasure::scalar::{BVScalar, Jump, Side};
use crate::error::{Error, Result};

/// Margin below pi required of every jump magnitude.
pub const JUMP_CAP_MARGIN: f64 = 1e-9;

/// Merged jump atom of the matrix datum: theta and phi jumps at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JumpAtom {
    pub location: f64,
    pub d_theta: f64,
    pub d_phi: f64,
}

impl JumpAtom {
    /// `sqrt(d^2 + tau^2)`, the rotation angle the atom induces.
    pub fn magnitude(&self) -> f64 {
        self.d_theta.hypot(self.d_phi)
    }

    /// `|D^J Omega|({s})` in Frobenius norm, `sqrt(2) * magnitude`.
    pub fn mass(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.magnitude()
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Data {
    TwoD { theta: BVScalar },
    ThreeD { theta: BVScalar, phi: BVScalar },
    /// Jump-free upper-triangle entries, row-major: (0,1), (0,2), ..., (n-2,n-1).
    Continuous { n: usize, upper: Vec<BVScalar> },
}

/// Skew-matrix-valued BV function on (0, L).
#[derive(Debug, Clone, PartialEq)]
pub struct SkewPath {
    data: Data,
}

/// Per-jump admissibility check result.
#[derive(Debug, Clone, Copy)]
pub struct JumpCheck {
    pub location: f64,
    pub d_theta: f64,
    pub d_phi: f64,
    pub magnitude: f64,
    pub admissible: bool,
}

/// Report from [`SkewPath::validate_jumps`].
#[derive(Debug, Clone)]
pub struct JumpValidationReport {
    pub checks: Vec<JumpCheck>,
}

impl JumpValidationReport {
    pub fn violations(&self) -> usize {
        self.checks.iter().filter(|c| !c.admissible).count()
    }

    pub fn pass(&self) -> bool {
        self.violations() == 0
    }
}

impl SkewPath {
    /// Planar datum `Omega = theta Jhat`.
    pub fn planar(theta: BVScalar) -> Self {
        Self {
            data: Data::TwoD { theta },
        }
    }

    /// Spatial datum from the angle pair; domains must agree.
    pub fn spatial(theta: BVScalar, phi: BVScalar) -> Result<Self> {
        if (theta.length() - phi.length()).abs() > 1e-12 * theta.length().max(1.0) {
            return Err(Error::BadLength(phi.length()));
        }
        Ok(Self {
            data: Data::ThreeD { theta, phi },
        })
    }

    /// Continuous datum in any dimension `n >= 2`; every entry must be
    /// jump-free. Entries fill the upper triangle row-major.
    pub fn continuous(n: usize, upper: Vec<BVScalar>) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension { expected: 2, got: n });
        }
        if upper.len() != n * (n - 1) / 2 {
            return Err(Error::Dimension {
                expected: n * (n - 1) / 2,
                got: upper.len(),
            });
        }
        let length = upper[0].length();
        for u in &upper {
            if !u.jumps().is_empty() {
                return Err(Error::BadJumpList(
                    "continuous datum cannot carry jumps".into(),
                ));
            }
            if (u.length() - length).abs() > 1e-12 * length.max(1.0) {
                return Err(Error::BadLength(u.length()));
            }
        }
        Ok(Self {
            data: Data::Continuous { n, upper },
        })
    }

    pub fn dimension(&self) -> usize {
        match &self.data {
            Data::TwoD { .. } => 2,
            Data::ThreeD { .. } => 3,
            Data::Continuous { n, .. } => *n,
        }
    }

    pub fn length(&self) -> f64 {
        match &self.data {
            Data::TwoD { theta } => theta.length(),
            Data::ThreeD { theta, .. } => theta.length(),
            Data::Continuous { upper, .. } => upper[0].length(),
        }
    }

    pub fn theta(&self) -> Option<&BVScalar> {
        match &self.data {
            Data::TwoD { theta } => Some(theta),
            Data::ThreeD { theta, .. } => Some(theta),
            Data::Continuous { .. } => None,
        }
    }

    pub fn phi(&self) -> Option<&BVScalar> {
        match &self.data {
            Data::ThreeD { phi, .. } => Some(phi),
            _ => None,
        }
    }

    /// One-sided value `Omega(s±)` as a dense matrix.
    pub fn value_side(&self, s: f64, side: Side) -> DMatrix<f64> {
        match &self.data {
            Data::TwoD { theta } => {
                let t = theta.value_side(s, side);
                let mut m = DMatrix::zeros(2, 2);
                m[(0, 1)] = t;
                m[(1, 0)] = -t;
                m
            }
            Data::ThreeD { theta, phi } => {
                let t = theta.value_side(s, side);
                let p = phi.value_side(s, side);
                let mut m = DMatrix::zeros(3, 3);
                m[(0, 1)] = t;
                m[(1, 0)] = -t;
                m[(1, 2)] = p;
                m[(2, 1)] = -p;
                m
            }
            Data::Continuous { n, upper } => {
                let mut m = DMatrix::zeros(*n, *n);
                let mut k = 0;
                for i in 0..*n {
                    for j in (i + 1)..*n {
                        let v = upper[k].value_side(s, side);
                        m[(i, j)] = v;
                        m[(j, i)] = -v;
                        k += 1;
                    }
                }
                m
            }
        }
    }

    /// The merged jump list `S(Omega)`, ordered by location.
    pub fn jumps(&self) -> Vec<JumpAtom> {
        match &self.data {
            Data::TwoD { theta } => theta
                .jumps()
                .iter()
                .map(|j| JumpAtom {
                    location: j.location,
                    d_theta: j.value,
                    d_phi: 0.0,
                })
                .collect(),
            Data::ThreeD { theta, phi } => {
                let mut atoms: Vec<JumpAtom> = Vec::new();
                let mut push = |location: f64, d_theta: f64, d_phi: f64| {
                    match atoms.iter_mut().find(|a| a.location == location) {
                        Some(a) => {
                            a.d_theta += d_theta;
                            a.d_phi += d_phi;
                        }
                        None => atoms.push(JumpAtom {
                            location,
                            d_theta,
                            d_phi,
                        }),
                    }
                };
                for j in theta.jumps() {
                    push(j.location, j.value, 0.0);
                }
                for j in phi.jumps() {
                    push(j.location, 0.0, j.value);
                }
                atoms.sort_by(|a, b| a.location.total_cmp(&b.location));
                atoms
            }
            Data::Continuous { .. } => Vec::new(),
        }
    }

    /// Keeps exactly the jumps with `|D^J Omega|({s}) > 1/n`; the kept set
    /// grows with `n`.
    pub fn truncate_jumps(&self, n: u32) -> SkewPath {
        let threshold = 1.0 / n as f64;
        let keep = |location: f64| {
            self.jumps()
                .iter()
                .find(|a| a.location == location)
                .map(|a| a.mass() > threshold)
                .unwrap_or(false)
        };
        match &self.data {
            Data::TwoD { theta } => SkewPath {
                data: Data::TwoD {
                    theta: theta.filter_jumps(|j| keep(j.location)),
                },
            },
            Data::ThreeD { theta, phi } => SkewPath {
                data: Data::ThreeD {
                    theta: theta.filter_jumps(|j| keep(j.location)),
                    phi: phi.filter_jumps(|j| keep(j.location)),
                },
            },
            Data::Continuous { .. } => self.clone(),
        }
    }

    /// Checks `0 < sqrt(d^2 + tau^2) < pi - 1e-9` for every jump.
    /// Report-only; the solvers reject on violations.
    pub fn validate_jumps(&self) -> JumpValidationReport {
        let cap = std::f64::consts::PI - JUMP_CAP_MARGIN;
        let checks = self
            .jumps()
            .iter()
            .map(|a| {
                let magnitude = a.magnitude();
                JumpCheck {
                    location: a.location,
                    d_theta: a.d_theta,
                    d_phi: a.d_phi,
                    magnitude,
                    admissible: magnitude > 0.0 && magnitude < cap,
                }
            })
            .collect();
        JumpValidationReport { checks }
    }

    /// Sorted solver nodes: uniform base grid joined with every breakpoint
    /// and jump location (no duplicates; the solver inserts one-sided pairs
    /// at jumps itself).
    pub fn solver_nodes(&self, base: usize) -> Vec<f64> {
        let length = self.length();
        let mut nodes: Vec<f64> = (0..=base)
            .map(|i| i as f64 * length / base as f64)
            .collect();
        let mut add_breaks = |u: &BVScalar| nodes.extend_from_slice(u.breakpoints());
        match &self.data {
            Data::TwoD { theta } => add_breaks(theta),
            Data::ThreeD { theta, phi } => {
                add_breaks(theta);
                add_breaks(phi);
            }
            Data::Continuous { upper, .. } => {
                for u in upper {
                    add_breaks(u);
                }
            }
        }
        nodes.sort_by(f64::total_cmp);
        nodes.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * length.max(1.0));
        *nodes.first_mut().unwrap() = 0.0;
        *nodes.last_mut().unwrap() = length;
        nodes
    }

    /// Mollifies every scalar entry with the same window.
    pub fn mollify(&self, eps: f64) -> Result<SkewPath> {
        match &self.data {
            Data::TwoD { theta } => Ok(SkewPath {
                data: Data::TwoD {
                    theta: theta.mollify(eps)?,
                },
            }),
            Data::ThreeD { theta, phi } => Ok(SkewPath {
                data: Data::ThreeD {
                    theta: theta.mollify(eps)?,
                    phi: phi.mollify(eps)?,
                },
            }),
            Data::Continuous { n, upper } => {
                let mollified: Result<Vec<_>> = upper.iter().map(|u| u.mollify(eps)).collect();
                Ok(SkewPath {
                    data: Data::Continuous {
                        n: *n,
                        upper: mollified?,
                    },
                })
            }
        }
    }

    /// Total jump mass `|D^J Omega|(I)`.
    pub fn jump_mass(&self) -> f64 {
        self.jumps().iter().map(|a| a.mass()).sum()
    }

    /// Adds materialized extra atoms (used for countable families).
    pub fn with_extra_atoms(&self, extra: &[JumpAtom]) -> Result<SkewPath> {
        match &self.data {
            Data::TwoD { theta } => {
                let t_extra: Vec<Jump> = extra
                    .iter()
                    .filter(|a| a.d_theta != 0.0)
                    .map(|a| Jump {
                        location: a.location,
                        value: a.d_theta,
                    })
                    .collect();
                Ok(SkewPath {
                    data: Data::TwoD {
                        theta: theta.with_extra_jumps(&t_extra)?,
                    },
                })
            }
            Data::ThreeD { theta, phi } => {
                let t_extra: Vec<Jump> = extra
                    .iter()
                    .filter(|a| a.d_theta != 0.0)
                    .map(|a| Jump {
                        location: a.location,
                        value: a.d_theta,
                    })
                    .collect();
                let p_extra: Vec<Jump> = extra
                    .iter()
                    .filter(|a| a.d_phi != 0.0)
                    .map(|a| Jump {
                        location: a.location,
                        value: a.d_phi,
                    })
                    .collect();
                Ok(SkewPath {
                    data: Data::ThreeD {
                        theta: theta.with_extra_jumps(&t_extra)?,
                        phi: phi.with_extra_jumps(&p_extra)?,
                    },
                })
            }
            Data::Continuous { .. } => Err(Error::BadJumpList(
                "continuous datum cannot carry jumps".into(),
            )),
        }
    }
}

/// Countable jump family `d_k = theta_amp r^k`, `tau_k = phi_amp r^k` at
/// `s_k = L (1 - q^k)`, for `k >= start_index`. Summable when `r < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricJumpFamily {
    pub theta_amp: f64,
    pub phi_amp: f64,
    /// Amplitude ratio `r` in (0, 1).
    pub ratio: f64,
    /// Location ratio `q` in (0, 1): `s_k = L (1 - q^k)`.
    pub location_ratio: f64,
    pub start_index: u32,
}

impl GeometricJumpFamily {
    pub fn validate(&self) -> Result<()> {
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::NonSummableTail(self.ratio));
        }
        if !(self.location_ratio > 0.0 && self.location_ratio < 1.0) {
            return Err(Error::BadJumpList(format!(
                "location ratio {} outside (0, 1)",
                self.location_ratio
            )));
        }
        let first = self.theta_amp.hypot(self.phi_amp) * self.ratio.powi(self.start_index as i32);
        if first >= std::f64::consts::PI {
            return Err(Error::JumpTooLarge {
                location: 0.0,
                magnitude: first,
            });
        }
        Ok(())
    }

    fn amplitude(&self) -> f64 {
        self.theta_amp.hypot(self.phi_amp)
    }

    /// Atoms with mass `sqrt(2) sqrt(d_k^2 + tau_k^2)` strictly above
    /// `min_mass`, in location order.
    pub fn materialize(&self, length: f64, min_mass: f64) -> Vec<JumpAtom> {
        let mut atoms = Vec::new();
        let mut k = self.start_index;
        loop {
            let scale = self.ratio.powi(k as i32);
            let mass = std::f64::consts::SQRT_2 * self.amplitude() * scale;
            if mass <= min_mass || !mass.is_normal() {
                break;
            }
            let location = length * (1.0 - self.location_ratio.powi(k as i32));
            if location > 0.0 && location < length {
                atoms.push(JumpAtom {
                    location,
                    d_theta: self.theta_amp * scale,
                    d_phi: self.phi_amp * scale,
                });
            }
            k += 1;
        }
        atoms
    }

    /// Tail mass `|D^J Omega|` of the atoms with mass at most `min_mass`
    /// (geometric closed form).
    pub fn tail_mass(&self, min_mass: f64) -> f64 {
        let a = std::f64::consts::SQRT_2 * self.amplitude();
        let mut k = self.start_index;
        while a * self.ratio.powi(k as i32) > min_mass {
            k += 1;
            if k > 10_000 {
                break;
            }
        }
        a * self.ratio.powi(k as i32) / (1.0 - self.ratio)
    }
}

/// A datum with countably many jumps: explicit base atoms plus an optional
/// geometric tail rule.
#[derive(Debug, Clone, PartialEq)]
pub struct CountableSkewPath {
    pub base: SkewPath,
    pub tail: Option<GeometricJumpFamily>,
}

impl CountableSkewPath {
    pub fn finite(base: SkewPath) -> Self {
        Self { base, tail: None }
    }

    /// Materializes every family atom with mass above `min_mass` into an
    /// ordinary [`SkewPath`].
    pub fn materialize(&self, min_mass: f64) -> Result<SkewPath> {
        match &self.tail {
            None => Ok(self.base.clone()),
            Some(family) => {
                family.validate()?;
                let atoms = family.materialize(self.base.length(), min_mass);
                self.base.with_extra_atoms(&atoms)
            }
        }
    }

    /// Jump mass discarded by the level-n truncation, including the
    /// analytic tail of the family.
    pub fn discarded_mass(&self, n: u32) -> f64 {
        let threshold = 1.0 / n as f64;
        let explicit: f64 = self
            .base
            .jumps()
            .iter()
            .map(|a| a.mass())
            .filter(|m| *m <= threshold)
            .sum();
        let tail = match &self.tail {
            None => 0.0,
            Some(family) => family.tail_mass(threshold),
        };
        explicit + tail
    }
}
