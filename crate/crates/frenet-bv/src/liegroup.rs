//! Small dense matrix primitives on Sk(N) and SO(N).
//!
//! Everything here is exact small-matrix arithmetic: the canonical
//! generators of Sk(3), the Rodrigues exponential and its logarithm,
//! the Cayley transform, the atomic skew part `(A^T - A)/2` of a
//! rotation, and the derivative of an exponential path `s -> exp(X(s))`.
//!
//! Conventions: `skew(w) v = w x v`, so
//! `skew(w) = [[0,-w3,w2],[w3,0,-w1],[-w2,w1,0]]`, and a rotation by
//! angle `a` about the unit axis `k` is `I + sin(a) J + (1-cos(a)) J^2`
//! with `J = skew(k)`.

use nalgebra::{DMatrix, Vector3};

use crate::error::{Error, Result};

/// Antisymmetry tolerance checked when constructing a [`SkewMatrix`].
pub const SKEW_TOL: f64 = 1e-12;
/// Orthogonality tolerance checked when constructing a [`RotationMatrix`].
pub const ORTHO_TOL: f64 = 1e-10;
/// Smallest |det(A + I)| accepted by the Cayley transform.
pub const CAYLEY_DET_TOL: f64 = 1e-12;

/// Real skew-symmetric N x N matrix (N >= 2).
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    m: DMatrix<f64>,
}

impl SkewMatrix {
    /// Checks antisymmetry entrywise to [`SKEW_TOL`].
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() < 2 {
            return Err(Error::Dimension {
                expected: 2,
                got: m.nrows().min(m.ncols()),
            });
        }
        let mut worst = 0.0f64;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                worst = worst.max((m[(i, j)] + m[(j, i)]).abs());
            }
        }
        if worst > SKEW_TOL {
            return Err(Error::NotSkew(worst));
        }
        Ok(Self { m })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            m: DMatrix::zeros(n, n),
        }
    }

    /// 3x3 skew matrix of the axial vector `w`, i.e. `skew(w) v = w x v`.
    pub fn from_axial(w: &Vector3<f64>) -> Self {
        let mut m = DMatrix::zeros(3, 3);
        m[(0, 1)] = -w.z;
        m[(0, 2)] = w.y;
        m[(1, 0)] = w.z;
        m[(1, 2)] = -w.x;
        m[(2, 0)] = -w.y;
        m[(2, 1)] = w.x;
        Self { m }
    }

    /// Axial vector of a 3x3 skew matrix.
    pub fn axial(&self) -> Result<Vector3<f64>> {
        if self.dim() != 3 {
            return Err(Error::Dimension {
                expected: 3,
                got: self.dim(),
            });
        }
        Ok(Vector3::new(self.m[(2, 1)], self.m[(0, 2)], self.m[(1, 0)]))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn frobenius(&self) -> f64 {
        self.m.norm()
    }
}

/// Element of SO(N): orthogonal to [`ORTHO_TOL`] with positive determinant.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationMatrix {
    m: DMatrix<f64>,
}

impl RotationMatrix {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() < 2 {
            return Err(Error::Dimension {
                expected: 2,
                got: m.nrows().min(m.ncols()),
            });
        }
        let defect = orthogonality_defect(&m);
        let det = m.determinant();
        if defect > ORTHO_TOL || det <= 0.0 {
            return Err(Error::NotRotation { defect, det });
        }
        Ok(Self { m })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: DMatrix::identity(n, n),
        }
    }

    /// Planar rotation by `angle` embedded in SO(2).
    pub fn planar(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = c;
        m[(0, 1)] = -s;
        m[(1, 0)] = s;
        m[(1, 1)] = c;
        Self { m }
    }

    /// Rotation by `angle` about a (not necessarily unit) 3-vector axis.
    pub fn about_axis(axis: &Vector3<f64>, angle: f64) -> Result<Self> {
        let n = axis.norm();
        if (n - 1.0).abs() > 1e-9 {
            if n < 1e-300 {
                return Err(Error::NonUnitAxis(n));
            }
            return rodrigues_exp(&AxisAngle::new(axis / n, angle)?);
        }
        rodrigues_exp(&AxisAngle::new(*axis, angle)?)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn transpose(&self) -> Self {
        Self {
            m: self.m.transpose(),
        }
    }

    /// Matrix product; stays in SO(N) up to rounding so no re-check is done.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self {
            m: &self.m * &rhs.m,
        }
    }

    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.m)
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> nalgebra::DVector<f64> {
        self.m.column(j).into_owned()
    }
}

fn orthogonality_defect(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    (m.transpose() * m - DMatrix::identity(n, n)).norm()
}

/// Unit axis and rotation angle in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisAngle {
    axis: Vector3<f64>,
    angle: f64,
}

impl AxisAngle {
    pub fn new(axis: Vector3<f64>, angle: f64) -> Result<Self> {
        let n = axis.norm();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitAxis(n));
        }
        Ok(Self { axis, angle })
    }

    pub fn axis(&self) -> Vector3<f64> {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }
}

/// Canonical generator `J_l` of Sk(3), `l` in 1..=3, with `J_l v = e_l x v`.
///
/// `J_l^3 = -J_l` and `J_l^4 = I` hold exactly.
pub fn generator(l: usize) -> Result<SkewMatrix> {
    if !(1..=3).contains(&l) {
        return Err(Error::GeneratorIndex(l));
    }
    let mut e = Vector3::zeros();
    e[l - 1] = 1.0;
    Ok(SkewMatrix::from_axial(&e))
}

/// The planar generator `[[0,1],[-1,0]]` spanning Sk(2).
pub fn planar_generator() -> SkewMatrix {
    let mut m = DMatrix::zeros(2, 2);
    m[(0, 1)] = 1.0;
    m[(1, 0)] = -1.0;
    SkewMatrix { m }
}

/// Rodrigues formula `exp(a J) = I + sin(a) J + (1 - cos(a)) J^2` for the
/// unit-axis skew generator `J` of the given axis.
pub fn rodrigues_exp(ax: &AxisAngle) -> Result<RotationMatrix> {
    let j = SkewMatrix::from_axial(&ax.axis());
    let j = j.matrix();
    let a = ax.angle();
    let m = DMatrix::identity(3, 3) + j * a.sin() + (j * j) * (1.0 - a.cos());
    Ok(RotationMatrix { m })
}

/// Inverse of the Rodrigues map on angles strictly below pi.
///
/// The angle comes from `atan2(|axial(R - R^T)/2|, (tr R - 1)/2)`, which is
/// well conditioned away from pi. Rotations with trace within `1e-9` of -1
/// are rejected because the axis is no longer unique there.
pub fn log_rotation(r: &RotationMatrix) -> Result<AxisAngle> {
    if r.dim() != 3 {
        return Err(Error::Dimension {
            expected: 3,
            got: r.dim(),
        });
    }
    let m = r.matrix();
    let tr = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
    if tr <= -1.0 + 1e-9 {
        return Err(Error::AnglePi(tr));
    }
    let axial = Vector3::new(
        (m[(2, 1)] - m[(1, 2)]) / 2.0,
        (m[(0, 2)] - m[(2, 0)]) / 2.0,
        (m[(1, 0)] - m[(0, 1)]) / 2.0,
    );
    let sin_a = axial.norm();
    let cos_a = (tr - 1.0) / 2.0;
    let angle = sin_a.atan2(cos_a);
    let axis = if sin_a > 1e-14 {
        axial / sin_a
    } else {
        Vector3::new(1.0, 0.0, 0.0)
    };
    AxisAngle::new(axis, angle)
}

/// Cayley transform `B = (A + I)^-1 (A - I)`, defined when `A + I` is
/// invertible, i.e. when -1 is not an eigenvalue of `A`.
pub fn cayley(a: &RotationMatrix) -> Result<SkewMatrix> {
    let n = a.dim();
    let id = DMatrix::identity(n, n);
    let sum = a.matrix() + &id;
    let det = sum.determinant();
    if det.abs() <= CAYLEY_DET_TOL {
        return Err(Error::CayleySingular(det.abs()));
    }
    let diff = a.matrix() - &id;
    let lu = sum.clone().lu();
    let mut b = lu
        .solve(&diff)
        .ok_or(Error::CayleySingular(det.abs()))?;
    // one step of iterative refinement keeps the result skew to ~1e-14
    // even when A + I is poorly conditioned
    let residual = &diff - &sum * &b;
    if let Some(correction) = lu.solve(&residual) {
        b += correction;
    }
    SkewMatrix::new(b)
}

/// Inverse Cayley map `B -> (I + B)(I - B)^-1`, used as the round-trip
/// oracle for [`cayley`]. `I + B` and `(I - B)^-1` commute, so the product
/// is computed as `(I - B)^-1 (I + B)`.
pub fn cayley_inverse(b: &SkewMatrix) -> Result<RotationMatrix> {
    let n = b.dim();
    let id = DMatrix::identity(n, n);
    let num = &id + b.matrix();
    let den = &id - b.matrix();
    let x = den
        .lu()
        .solve(&num)
        .ok_or(Error::Numerical("I - B is singular".into()))?;
    RotationMatrix::new(x)
}

/// Atomic skew part `(A^T - A)/2` of a rotation.
///
/// Antisymmetry is exact by construction.
pub fn atomic_skew(a: &RotationMatrix) -> SkewMatrix {
    let n = a.dim();
    let m = a.matrix();
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (m[(j, i)] - m[(i, j)]) / 2.0;
            b[(i, j)] = v;
            b[(j, i)] = -v;
        }
    }
    SkewMatrix { m: b }
}

/// Exponential of a skew matrix: closed form for N = 2 and 3, a
/// scaling-and-squaring series otherwise. The result is orthogonal up to
/// rounding for exact skew input.
pub fn exp_skew(b: &SkewMatrix) -> RotationMatrix {
    let n = b.dim();
    let m = b.matrix();
    match n {
        2 => {
            // exp(t Jhat) with Jhat = [[0,1],[-1,0]] rotates by -t.
            RotationMatrix::planar(-m[(0, 1)])
        }
        3 => {
            let w = Vector3::new(m[(2, 1)], m[(0, 2)], m[(1, 0)]);
            let a = w.norm();
            let (c1, c2) = if a < 1e-4 {
                // sin(a)/a and (1-cos(a))/a^2 by series
                let a2 = a * a;
                (
                    1.0 - a2 / 6.0 + a2 * a2 / 120.0,
                    0.5 - a2 / 24.0 + a2 * a2 / 720.0,
                )
            } else {
                (a.sin() / a, (1.0 - a.cos()) / (a * a))
            };
            let j = SkewMatrix::from_axial(&w);
            let j = j.matrix();
            let r = DMatrix::identity(3, 3) + j * c1 + (j * j) * c2;
            RotationMatrix { m: r }
        }
        _ => {
            let mut x = m.clone();
            let mut squarings = 0u32;
            while x.norm() > 0.5 {
                x /= 2.0;
                squarings += 1;
            }
            let mut sum = DMatrix::identity(n, n);
            let mut term = DMatrix::identity(n, n);
            let mut k = 1.0f64;
            loop {
                term = (&term * &x) / k;
                let t = term.norm();
                sum += &term;
                if t < 1e-18 {
                    break;
                }
                k += 1.0;
            }
            for _ in 0..squarings {
                sum = &sum * &sum;
            }
            RotationMatrix { m: sum }
        }
    }
}

/// Derivative matrix `B(s)` of the exponential path `s -> exp(X(s))`, where
/// `X = [[0,f,h],[-f,0,g],[-h,-g,0]]` is built from three C1 scalar paths,
/// each supplied as `s -> (value, derivative)`.
///
/// Satisfies `d/ds exp(X(s)) = exp(X(s)) B(s)`. The radius
/// `rho = sqrt(f^2 + g^2 + h^2)` must stay away from zero at `s`.
pub fn exp_path_derivative(
    f: &dyn Fn(f64) -> (f64, f64),
    g: &dyn Fn(f64) -> (f64, f64),
    h: &dyn Fn(f64) -> (f64, f64),
    s: f64,
) -> Result<SkewMatrix> {
    let (fv, fd) = f(s);
    let (gv, gd) = g(s);
    let (hv, hd) = h(s);
    let rho = (fv * fv + gv * gv + hv * hv).sqrt();
    if rho <= 1e-12 {
        return Err(Error::PathRadiusZero(s, rho));
    }
    let rho_d = (fv * fd + gv * gd + hv * hd) / rho;
    let sin_r = rho.sin();
    let w = (1.0 - rho.cos()) / (rho * rho);
    // d/ds (p / rho) = (p' rho - p rho') / rho^2
    let du = |pv: f64, pd: f64| (pd * rho - pv * rho_d) / (rho * rho);
    // Equivalent to skew(Jr(u) u') where u = (-g, h, -f) is the axial
    // vector of X and Jr the right Jacobian of SO(3); agrees with the
    // quadrature of the exponential-path derivative to machine precision.
    let b12 = sin_r * du(fv, fd) + fv / rho * rho_d + w * (gd * hv - gv * hd);
    let b13 = sin_r * du(hv, hd) + hv / rho * rho_d + w * (fd * gv - fv * gd);
    let b23 = sin_r * du(gv, gd) + gv / rho * rho_d + w * (fv * hd - fd * hv);
    let mut m = DMatrix::zeros(3, 3);
    m[(0, 1)] = b12;
    m[(1, 0)] = -b12;
    m[(0, 2)] = b13;
    m[(2, 0)] = -b13;
    m[(1, 2)] = b23;
    m[(2, 1)] = -b23;
    Ok(SkewMatrix { m })
}

/// The path matrix `X(s) = [[0,f,h],[-f,0,g],[-h,-g,0]]` used by
/// [`exp_path_derivative`].
pub fn exp_path_matrix(f: f64, g: f64, h: f64) -> SkewMatrix {
    let mut m = DMatrix::zeros(3, 3);
    m[(0, 1)] = f;
    m[(1, 0)] = -f;
    m[(0, 2)] = h;
    m[(2, 0)] = -h;
    m[(1, 2)] = g;
    m[(2, 1)] = -g;
    SkewMatrix { m }
}
