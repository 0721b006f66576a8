//! Pose chart on SE(3), the homogeneous-matrix parameterization, the
//! left-invariant frame and the right-invariant momentum functions.
//!
//! The chart is `R = Rx(theta) * Ry(beta) * Rz(alpha)` with
//! `theta in [-pi/2, pi/2)`, `beta in [-pi, pi)`, `alpha in [0, 2pi)`,
//! plus a translation `(x, y, z)`. With those ranges the chart is one-to-one;
//! the triple `(theta, beta, alpha)` and `(theta - pi, pi - beta, alpha + pi)`
//! describe the same rotation, which is how angles outside the theta range
//! are folded back in. The chart degenerates where `cos(beta) = 0`.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// `|sin(beta)|` must stay below `1 - CHART_EPS` for the chart to be usable.
pub const CHART_EPS: f64 = 1e-9;

/// An SE(3) element in chart coordinates: position plus the three angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub theta: f64,
    pub beta: f64,
    pub alpha: f64,
}

/// Homogeneous 4x4 rigid-motion matrix (row-major).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseMatrix(pub [[f64; 4]; 4]);

fn wrap_half_open(x: f64, lo: f64, width: f64) -> f64 {
    let w = x - width * ((x - lo) / width).floor();
    // floor rounding can land exactly on the upper bound
    if w >= lo + width {
        w - width
    } else {
        w
    }
}

/// Fold an arbitrary angle triple into the chart ranges without changing the
/// rotation it represents.
pub fn normalize_angles(theta: f64, beta: f64, alpha: f64) -> (f64, f64, f64) {
    let mut theta = wrap_half_open(theta, -PI, TAU);
    let mut beta = wrap_half_open(beta, -PI, TAU);
    let mut alpha = wrap_half_open(alpha, 0.0, TAU);
    if !(-FRAC_PI_2..FRAC_PI_2).contains(&theta) {
        // (theta, beta, alpha) -> (theta -+ pi, pi - beta, alpha + pi)
        theta = if theta >= FRAC_PI_2 {
            theta - PI
        } else {
            theta + PI
        };
        beta = wrap_half_open(PI - beta, -PI, TAU);
        alpha = wrap_half_open(alpha + PI, 0.0, TAU);
    }
    (theta, beta, alpha)
}

impl Pose {
    /// Construct a pose, folding the angles into their chart ranges.
    pub fn new(x: f64, y: f64, z: f64, theta: f64, beta: f64, alpha: f64) -> Self {
        let (theta, beta, alpha) = normalize_angles(theta, beta, alpha);
        Pose {
            x,
            y,
            z,
            theta,
            beta,
            alpha,
        }
    }

    pub fn identity() -> Self {
        Pose {
            x: 0.0,
            y: 0.0,
            z: 0.0,
            theta: 0.0,
            beta: 0.0,
            alpha: 0.0,
        }
    }

    pub fn to_matrix(&self) -> PoseMatrix {
        pose_to_matrix(self)
    }
}

impl PoseMatrix {
    pub fn identity() -> Self {
        let mut m = [[0.0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        PoseMatrix(m)
    }

    /// Build from a rotation block and translation vector.
    pub fn from_parts(r: [[f64; 3]; 3], p: [f64; 3]) -> Self {
        let mut m = [[0.0; 4]; 4];
        for i in 0..3 {
            m[i][..3].copy_from_slice(&r[i]);
            m[i][3] = p[i];
        }
        m[3][3] = 1.0;
        PoseMatrix(m)
    }

    pub fn rotation(&self) -> [[f64; 3]; 3] {
        let mut r = [[0.0; 3]; 3];
        for (row, src) in r.iter_mut().zip(&self.0) {
            row.copy_from_slice(&src[..3]);
        }
        r
    }

    pub fn translation(&self) -> [f64; 3] {
        [self.0[0][3], self.0[1][3], self.0[2][3]]
    }

    /// Max-abs entry of `R^T R - I`.
    pub fn orthogonality_residual(&self) -> f64 {
        let r = self.rotation();
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                let mut dot = 0.0;
                for (row_i, row_j) in r.iter().map(|row| (row[i], row[j])) {
                    dot += row_i * row_j;
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    pub fn det_rotation(&self) -> f64 {
        let r = self.rotation();
        r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
            - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
            + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
    }

    /// Check the rigid-motion invariants: orthogonal rotation block with unit
    /// determinant and an exact `(0, 0, 0, 1)` bottom row.
    pub fn validate(&self) -> Result<()> {
        if self.0[3] != [0.0, 0.0, 0.0, 1.0] {
            return Err(Error::InvalidInput(
                "bottom row must be (0, 0, 0, 1)".into(),
            ));
        }
        if self.orthogonality_residual() > 1e-10 {
            return Err(Error::InvalidInput(
                "rotation block is not orthogonal".into(),
            ));
        }
        if (self.det_rotation() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(
                "rotation block must have determinant +1".into(),
            ));
        }
        Ok(())
    }
}

impl std::ops::Mul for PoseMatrix {
    type Output = PoseMatrix;

    fn mul(self, rhs: PoseMatrix) -> PoseMatrix {
        let mut out = [[0.0; 4]; 4];
        for (out_row, lhs_row) in out.iter_mut().zip(&self.0) {
            for (j, cell) in out_row.iter_mut().enumerate() {
                *cell = (0..4).map(|l| lhs_row[l] * rhs.0[l][j]).sum();
            }
        }
        PoseMatrix(out)
    }
}

/// The homogeneous matrix of the chart at `g`.
pub fn pose_to_matrix(g: &Pose) -> PoseMatrix {
    let (st, ct) = g.theta.sin_cos();
    let (sb, cb) = g.beta.sin_cos();
    let (sa, ca) = g.alpha.sin_cos();
    PoseMatrix([
        [ca * cb, -cb * sa, sb, g.x],
        [ct * sa + ca * sb * st, ca * ct - sa * sb * st, -cb * st, g.y],
        [sa * st - ca * ct * sb, ct * sa * sb + ca * st, cb * ct, g.z],
        [0.0, 0.0, 0.0, 1.0],
    ])
}

/// Invert the chart: recover `(theta, beta, alpha, x, y, z)` from a rigid
/// motion. Fails within `CHART_EPS` of the `|sin(beta)| = 1` singular set.
pub fn matrix_to_pose(m: &PoseMatrix) -> Result<Pose> {
    let sb = m.0[0][2];
    if sb.abs() >= 1.0 - CHART_EPS {
        return Err(Error::ChartSingularity(sb.clamp(-1.0, 1.0).asin()));
    }
    let beta = sb.asin();
    let alpha = (-m.0[0][1]).atan2(m.0[0][0]);
    let theta = (-m.0[1][2]).atan2(m.0[2][2]);
    Ok(Pose::new(
        m.0[0][3], m.0[1][3], m.0[2][3], theta, beta, alpha,
    ))
}

/// Coordinate components of the six left-invariant frame fields at `g`,
/// in tangent order `(x, y, z, theta, beta, alpha)`. The rotational fields
/// carry `sec(beta)`/`tan(beta)` factors, so the chart band applies.
pub fn frame_fields(g: &Pose) -> Result<[[f64; 6]; 6]> {
    let (st, ct) = g.theta.sin_cos();
    let (sb, cb) = g.beta.sin_cos();
    let (sa, ca) = g.alpha.sin_cos();
    if sb.abs() >= 1.0 - CHART_EPS {
        return Err(Error::ChartSingularity(g.beta));
    }
    let sec_b = 1.0 / cb;
    let tan_b = sb / cb;
    Ok([
        [
            ca * cb,
            sa * ct + ca * sb * st,
            sa * st - ca * sb * ct,
            0.0,
            0.0,
            0.0,
        ],
        [
            -sa * cb,
            ca * ct - sa * sb * st,
            ca * st + sa * sb * ct,
            0.0,
            0.0,
            0.0,
        ],
        [sb, -cb * st, cb * ct, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, ca * sec_b, sa, -ca * tan_b],
        [0.0, 0.0, 0.0, -sa * sec_b, ca, sa * tan_b],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ])
}

/// The three right-invariant momentum functions evaluated at `(u, g)`.
/// They depend on the first three momentum components and the angles only.
pub fn rho_invariants(u: &[f64; 6], g: &Pose) -> [f64; 3] {
    let (st, ct) = g.theta.sin_cos();
    let (sb, cb) = g.beta.sin_cos();
    let (sa, ca) = g.alpha.sin_cos();
    let (u1, u2, u3) = (u[0], u[1], u[2]);
    let rho1 = -u1 * ca * cb + u2 * cb * sa - u3 * sb;
    let rho2 = -ct * (u2 * ca + u1 * sa) + (u3 * cb + (-u1 * ca + u2 * sa) * sb) * st;
    let rho3 = -u3 * cb * ct + ct * (u1 * ca - u2 * sa) * sb - (u2 * ca + u1 * sa) * st;
    [rho1, rho2, rho3]
}
