//! Fixed-step RK4 integrator for the momentum (vertical) system, used as
//! ground truth against the closed forms. It integrates the full six-momentum
//! dynamics (u6 is carried along even though the closed forms fix it to zero)
//! plus the running integral `U` as a seventh component.

use crate::controls::InitialMomentum;
use crate::error::{Error, Result};

/// One integrator state: the six momenta plus the accumulated `int u3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalState {
    pub t: f64,
    pub u: [f64; 6],
    /// U(t) = int_0^t u3, accumulated alongside the momenta.
    pub u_int: f64,
}

/// Right-hand side of the momentum system:
/// `(-u3 u5, u3 u4, u1 u5 - u2 u4, u2 u3 - u5 u6, u4 u6 - u1 u3, 0)`.
pub fn vertical_rhs(u: &[f64; 6]) -> [f64; 6] {
    let [u1, u2, u3, u4, u5, u6] = *u;
    [
        -u3 * u5,
        u3 * u4,
        u1 * u5 - u2 * u4,
        u2 * u3 - u5 * u6,
        u4 * u6 - u1 * u3,
        0.0,
    ]
}

fn rhs7(s: &[f64; 7]) -> [f64; 7] {
    let u = [s[0], s[1], s[2], s[3], s[4], s[5]];
    let du = vertical_rhs(&u);
    [du[0], du[1], du[2], du[3], du[4], du[5], s[2]]
}

/// Classical RK4 on the u6 = 0 slice; returns all `n_steps + 1` states.
pub fn integrate_vertical(
    m: &InitialMomentum,
    t1: f64,
    n_steps: usize,
) -> Result<Vec<VerticalState>> {
    integrate_vertical_full(m.to_six(), t1, n_steps)
}

/// Classical RK4 on the full six-momentum system (u6 may be nonzero here;
/// it is never updated along the flow).
pub fn integrate_vertical_full(
    u0: [f64; 6],
    t1: f64,
    n_steps: usize,
) -> Result<Vec<VerticalState>> {
    if !t1.is_finite() || t1 <= 0.0 {
        return Err(Error::InvalidInput(format!("t1 must be positive, got {t1}")));
    }
    if n_steps == 0 {
        return Err(Error::InvalidInput("n_steps must be at least 1".into()));
    }
    let h = t1 / n_steps as f64;
    let mut s = [u0[0], u0[1], u0[2], u0[3], u0[4], u0[5], 0.0];
    let mut out = Vec::with_capacity(n_steps + 1);
    out.push(state_from(&s, 0.0));
    for i in 0..n_steps {
        s = rk4_step(&s, h);
        s[5] = u0[5]; // du6/dt = 0 exactly
        out.push(state_from(&s, (i + 1) as f64 * h));
    }
    Ok(out)
}

fn rk4_step(s: &[f64; 7], h: f64) -> [f64; 7] {
    let k1 = rhs7(s);
    let k2 = rhs7(&add_scaled(s, &k1, 0.5 * h));
    let k3 = rhs7(&add_scaled(s, &k2, 0.5 * h));
    let k4 = rhs7(&add_scaled(s, &k3, h));
    let mut next = *s;
    for i in 0..7 {
        next[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    next
}

fn add_scaled(s: &[f64; 7], k: &[f64; 7], c: f64) -> [f64; 7] {
    let mut out = *s;
    for (o, kv) in out.iter_mut().zip(k) {
        *o += c * kv;
    }
    out
}

fn state_from(s: &[f64; 7], t: f64) -> VerticalState {
    VerticalState {
        t,
        u: [s[0], s[1], s[2], s[3], s[4], s[5]],
        u_int: s[6],
    }
}
