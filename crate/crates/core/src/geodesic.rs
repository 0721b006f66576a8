//! Horizontal (configuration-space) integration: the geodesic driven by the
//! closed-form controls, with two interchangeable backends.
//!
//! The `Angles` backend integrates the six chart equations directly and must
//! abort when `beta` approaches ±pi/2. The `Matrix` backend integrates the
//! rotation block as `R' = R * Omega(u4, u5)` together with
//! `p' = u3 * (third column of R)`, re-orthonormalizing each step; it has no
//! singular set. Controls are evaluated from the closed forms at every RK
//! sub-step time, so no interpolation error enters.

use crate::controls::{classify, eval_controls, first_integrals, ControlSample, InitialMomentum};
use crate::error::{Error, Result};
use crate::se3::{rho_invariants, Pose, PoseMatrix};
use std::f64::consts::FRAC_PI_2;

/// Which representation carries the orientation during integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Angles,
    Matrix,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "angles" => Ok(Backend::Angles),
            "matrix" => Ok(Backend::Matrix),
            other => Err(Error::InvalidInput(format!(
                "unknown backend '{other}' (expected 'angles' or 'matrix')"
            ))),
        }
    }
}

/// Conserved quantities evaluated at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSample {
    pub h: f64,
    pub w: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
}

/// Max absolute drift of each invariant from its t = 0 value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantDrift {
    pub h: f64,
    pub w: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rho3: f64,
}

impl InvariantDrift {
    pub fn max(&self) -> f64 {
        self.h.max(self.w).max(self.rho1).max(self.rho2).max(self.rho3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub pose: Pose,
    pub controls: ControlSample,
}

/// A geodesic sampled at equally spaced times, starting from the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub invariant_log: Vec<InvariantSample>,
}

/// The angles backend aborts once `|beta|` passes this line.
const BETA_ABORT: f64 = FRAC_PI_2 - 1e-6;

/// Chart equations of motion. Fails inside the `|sin beta| = 1` band where
/// `sec`/`tan` blow up.
pub fn horizontal_rhs(g: &Pose, u: &ControlSample) -> Result<[f64; 6]> {
    let (st, ct) = g.theta.sin_cos();
    let (sb, cb) = g.beta.sin_cos();
    let (sa, ca) = g.alpha.sin_cos();
    if sb.abs() >= 1.0 - crate::se3::CHART_EPS {
        return Err(Error::ChartSingularity(g.beta));
    }
    let swing = u.u4 * ca - u.u5 * sa;
    Ok([
        u.u3 * sb,
        -u.u3 * cb * st,
        u.u3 * cb * ct,
        swing / cb,
        u.u4 * sa + u.u5 * ca,
        -swing * sb / cb,
    ])
}

/// Integrate the geodesic from the identity over `[0, t1]`, reporting
/// `n_samples >= 2` equally spaced poses with their control samples and
/// invariant values. Internal RK4 steps never exceed 1e-3 time units.
pub fn integrate_geodesic(
    m: &InitialMomentum,
    t1: f64,
    n_samples: usize,
    backend: Backend,
) -> Result<Trajectory> {
    if !t1.is_finite() || t1 <= 0.0 {
        return Err(Error::InvalidInput(format!("t1 must be positive, got {t1}")));
    }
    if n_samples < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 samples, got {n_samples}"
        )));
    }
    if !m.is_finite() {
        return Err(Error::InvalidInput("momentum must be finite".into()));
    }
    let cp = classify(m);
    let controls_at = |t: f64| eval_controls(t, &cp, m);

    let dt_out = t1 / (n_samples - 1) as f64;
    let n_sub = (dt_out / 1e-3).ceil().max(1.0) as usize;
    let h = dt_out / n_sub as f64;

    let mut samples = Vec::with_capacity(n_samples);
    let mut invariant_log = Vec::with_capacity(n_samples);
    let mut push_sample = |pose: Pose, t: f64| {
        let controls = controls_at(t);
        let (hh, ww) = first_integrals(&controls);
        let rho = rho_invariants(&controls.momentum_six(), &pose);
        samples.push(TrajectorySample { pose, controls });
        invariant_log.push(InvariantSample {
            h: hh,
            w: ww,
            rho1: rho[0],
            rho2: rho[1],
            rho3: rho[2],
        });
    };

    match backend {
        Backend::Angles => {
            // raw chart coordinates, normalized only when a sample is emitted
            let mut s = [0.0_f64; 6];
            push_sample(Pose::identity(), 0.0);
            for i in 0..n_samples - 1 {
                let t_base = i as f64 * dt_out;
                for j in 0..n_sub {
                    let t = t_base + j as f64 * h;
                    s = angles_rk4_step(&s, t, h, &controls_at)?;
                    check_beta(s[4], t + h)?;
                }
                let t_next = (i + 1) as f64 * dt_out;
                push_sample(Pose::new(s[0], s[1], s[2], s[3], s[4], s[5]), t_next);
            }
        }
        Backend::Matrix => {
            let mut r = [[0.0_f64; 3]; 3];
            for (i, row) in r.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            let mut p = [0.0_f64; 3];
            push_sample(Pose::identity(), 0.0);
            for i in 0..n_samples - 1 {
                let t_base = i as f64 * dt_out;
                for j in 0..n_sub {
                    let t = t_base + j as f64 * h;
                    (r, p) = matrix_rk4_step(&r, &p, t, h, &controls_at);
                    r = orthonormalize(&r);
                }
                let t_next = (i + 1) as f64 * dt_out;
                push_sample(pose_from_rotation(&r, &p), t_next);
            }
        }
    }

    Ok(Trajectory {
        samples,
        invariant_log,
    })
}

/// Recompute the invariants sample by sample and report the max drift from
/// their t = 0 values.
pub fn check_invariants(tr: &Trajectory) -> InvariantDrift {
    let first = &tr.samples[0];
    let (h0, w0) = first_integrals(&first.controls);
    let rho0 = rho_invariants(&first.controls.momentum_six(), &first.pose);
    let mut drift = InvariantDrift {
        h: 0.0,
        w: 0.0,
        rho1: 0.0,
        rho2: 0.0,
        rho3: 0.0,
    };
    for s in &tr.samples {
        let (h, w) = first_integrals(&s.controls);
        let rho = rho_invariants(&s.controls.momentum_six(), &s.pose);
        drift.h = drift.h.max((h - h0).abs());
        drift.w = drift.w.max((w - w0).abs());
        drift.rho1 = drift.rho1.max((rho[0] - rho0[0]).abs());
        drift.rho2 = drift.rho2.max((rho[1] - rho0[1]).abs());
        drift.rho3 = drift.rho3.max((rho[2] - rho0[2]).abs());
    }
    drift
}

fn check_beta(beta: f64, t: f64) -> Result<()> {
    if beta.abs() > BETA_ABORT {
        return Err(Error::ChartSingularityAt { t, beta });
    }
    Ok(())
}

fn angles_rhs_raw(s: &[f64; 6], u: &ControlSample) -> [f64; 6] {
    let (st, ct) = s[3].sin_cos();
    let (sb, cb) = s[4].sin_cos();
    let (sa, ca) = s[5].sin_cos();
    let swing = u.u4 * ca - u.u5 * sa;
    [
        u.u3 * sb,
        -u.u3 * cb * st,
        u.u3 * cb * ct,
        swing / cb,
        u.u4 * sa + u.u5 * ca,
        -swing * sb / cb,
    ]
}

fn angles_rk4_step<F>(s: &[f64; 6], t: f64, h: f64, controls_at: &F) -> Result<[f64; 6]>
where
    F: Fn(f64) -> ControlSample,
{
    let c0 = controls_at(t);
    let c1 = controls_at(t + 0.5 * h);
    let c2 = controls_at(t + h);
    let stage = |base: &[f64; 6], k: &[f64; 6], c: f64| -> Result<[f64; 6]> {
        let mut out = *base;
        for i in 0..6 {
            out[i] += c * k[i];
        }
        check_beta(out[4], t)?;
        Ok(out)
    };
    let k1 = angles_rhs_raw(s, &c0);
    let k2 = angles_rhs_raw(&stage(s, &k1, 0.5 * h)?, &c1);
    let k3 = angles_rhs_raw(&stage(s, &k2, 0.5 * h)?, &c1);
    let k4 = angles_rhs_raw(&stage(s, &k3, h)?, &c2);
    let mut next = *s;
    for i in 0..6 {
        next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(next)
}

type RotTrans = ([[f64; 3]; 3], [f64; 3]);

/// `R' = R * Omega`, `p' = u3 * R e3`, where `Omega` is the skew matrix of
/// the body angular rate `(u4, u5, 0)` read off from the frame at the
/// identity (validated against the angles backend in the test suite).
fn matrix_rhs(r: &[[f64; 3]; 3], u: &ControlSample) -> RotTrans {
    let mut dr = [[0.0_f64; 3]; 3];
    for i in 0..3 {
        // Omega = [[0, 0, u5], [0, 0, -u4], [-u5, u4, 0]]
        dr[i][0] = -r[i][2] * u.u5;
        dr[i][1] = r[i][2] * u.u4;
        dr[i][2] = r[i][0] * u.u5 - r[i][1] * u.u4;
    }
    let dp = [u.u3 * r[0][2], u.u3 * r[1][2], u.u3 * r[2][2]];
    (dr, dp)
}

fn matrix_rk4_step<F>(
    r: &[[f64; 3]; 3],
    p: &[f64; 3],
    t: f64,
    h: f64,
    controls_at: &F,
) -> RotTrans
where
    F: Fn(f64) -> ControlSample,
{
    let c0 = controls_at(t);
    let c1 = controls_at(t + 0.5 * h);
    let c2 = controls_at(t + h);
    let stage = |kr: &[[f64; 3]; 3], kp: &[f64; 3], c: f64| -> RotTrans {
        let mut rr = *r;
        let mut pp = *p;
        for i in 0..3 {
            for j in 0..3 {
                rr[i][j] += c * kr[i][j];
            }
            pp[i] += c * kp[i];
        }
        (rr, pp)
    };
    let (kr1, kp1) = matrix_rhs(r, &c0);
    let (r2, _) = stage(&kr1, &kp1, 0.5 * h);
    let (kr2, kp2) = matrix_rhs(&r2, &c1);
    let (r3, _) = stage(&kr2, &kp2, 0.5 * h);
    let (kr3, kp3) = matrix_rhs(&r3, &c1);
    let (r4, _) = stage(&kr3, &kp3, h);
    let (kr4, kp4) = matrix_rhs(&r4, &c2);
    let mut rn = *r;
    let mut pn = *p;
    for i in 0..3 {
        for j in 0..3 {
            rn[i][j] += h / 6.0 * (kr1[i][j] + 2.0 * kr2[i][j] + 2.0 * kr3[i][j] + kr4[i][j]);
        }
        pn[i] += h / 6.0 * (kp1[i] + 2.0 * kp2[i] + 2.0 * kp3[i] + kp4[i]);
    }
    (rn, pn)
}

/// Gram-Schmidt on the columns; the third column is the cross product, which
/// pins the determinant to +1.
fn orthonormalize(r: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let col = |j: usize| [r[0][j], r[1][j], r[2][j]];
    let c0 = normalize(col(0));
    let mut c1 = col(1);
    let d = dot(&c0, &c1);
    for i in 0..3 {
        c1[i] -= d * c0[i];
    }
    let c1 = normalize(c1);
    let c2 = cross(&c0, &c1);
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        out[i] = [c0[i], c1[i], c2[i]];
    }
    out
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let n = dot(&v, &v).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Chart angles from a rotation matrix, with a gimbal-tolerant fallback: at
/// `|sin beta| = 1` only a combination of theta and alpha is determined, so
/// alpha is set to zero by convention. Output samples must always exist, so
/// unlike `matrix_to_pose` this never fails.
fn pose_from_rotation(r: &[[f64; 3]; 3], p: &[f64; 3]) -> Pose {
    let m = PoseMatrix::from_parts(*r, *p);
    match crate::se3::matrix_to_pose(&m) {
        Ok(pose) => pose,
        Err(_) => {
            let sb = r[0][2].clamp(-1.0, 1.0);
            let beta = sb.asin();
            let theta = if sb > 0.0 {
                r[1][0].atan2(r[1][1])
            } else {
                -r[1][0].atan2(r[1][1])
            };
            Pose::new(p[0], p[1], p[2], theta, beta, 0.0)
        }
    }
}
