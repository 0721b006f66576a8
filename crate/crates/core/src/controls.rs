//! Closed-form extremal controls for the u6 = 0 momentum slice.
//!
//! The derived controls u1, u2, u4, u5 are exponential combinations of the
//! running integral `U(t) = int_0^t u3`, so everything reduces to evaluating
//! u3 and U. Writing `A = (u1(0)+u5(0))^2 + (u2(0)-u4(0))^2` and
//! `B = (u1(0)-u5(0))^2 + (u2(0)+u4(0))^2`, the integral satisfies
//! `U'' = (A/4) e^{-2U} - (B/4) e^{2U}`, which splits into three regimes:
//! a pure exponential relaxation when A = 0 or B = 0, and a Jacobi-elliptic
//! oscillation when both are positive.

use crate::elliptic::{incomplete_f, jacobi_sn_cn_dn};
use crate::error::{Error, Result};

/// Momentum components at t = 0. The sixth component is identically zero in
/// this slice; [`InitialMomentum::from_six`] is the validating boundary for
/// callers that carry a full 6-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialMomentum {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub u4: f64,
    pub u5: f64,
}

impl InitialMomentum {
    pub fn new(u1: f64, u2: f64, u3: f64, u4: f64, u5: f64) -> Self {
        InitialMomentum { u1, u2, u3, u4, u5 }
    }

    /// Accept a 6-component momentum, rejecting u6 != 0.
    pub fn from_six(u: [f64; 6]) -> Result<Self> {
        if u[5] != 0.0 {
            return Err(Error::NonzeroU6(u[5]));
        }
        Ok(InitialMomentum::new(u[0], u[1], u[2], u[3], u[4]))
    }

    pub fn to_six(&self) -> [f64; 6] {
        [self.u1, self.u2, self.u3, self.u4, self.u5, 0.0]
    }

    pub fn to_array(&self) -> [f64; 5] {
        [self.u1, self.u2, self.u3, self.u4, self.u5]
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// H(0) = (u3^2 + u4^2 + u5^2) / 2.
    pub fn hamiltonian(&self) -> f64 {
        0.5 * (self.u3 * self.u3 + self.u4 * self.u4 + self.u5 * self.u5)
    }
}

/// Which closed form applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// All six momenta vanish; the flow is frozen at a point.
    Trivial,
    /// A = 0: u3 relaxes monotonically to -b.
    I,
    /// B = 0: u3 relaxes monotonically to +b.
    II,
    /// A*B > 0: u3 oscillates with Jacobi-elliptic profile.
    III,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseTag::Trivial => write!(f, "TRIVIAL"),
            CaseTag::I => write!(f, "I"),
            CaseTag::II => write!(f, "II"),
            CaseTag::III => write!(f, "III"),
        }
    }
}

/// Derived constants of the closed forms. `k`, `p0`, `psi0`, `v0` only exist
/// in the oscillatory case and are `None` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseParams {
    pub tag: CaseTag,
    /// A = (u1(0)+u5(0))^2 + (u2(0)-u4(0))^2, coefficient of e^{-2U}.
    pub a: f64,
    /// B = (u1(0)-u5(0))^2 + (u2(0)+u4(0))^2, coefficient of e^{2U}.
    pub b: f64,
    /// b = sqrt(u3(0)^2 + u4(0)^2 + u5(0)^2) = sqrt(2 H(0)), the asymptotic
    /// value of |u3| in cases I/II.
    pub sr_speed: f64,
    /// B1 = u4(0)^2 + u5(0)^2.
    pub b1: f64,
    /// P = sqrt(4 u3(0)^2 + (sqrt(A) - sqrt(B))^2), the u3 oscillation
    /// amplitude is P/2.
    pub p: f64,
    /// Q = sqrt(4 u3(0)^2 + (sqrt(A) + sqrt(B))^2), the elliptic phase
    /// advances by Q/2 per unit time.
    pub q: f64,
    /// Elliptic modulus k = P/Q < 1.
    pub k: Option<f64>,
    /// Initial amplitude picking the oscillation phase at t = 0.
    pub p0: Option<f64>,
    /// psi0 = F(p0, k), the elliptic phase at t = 0.
    pub psi0: Option<f64>,
    /// V0 = ln(B/A) / 2.
    pub v0: Option<f64>,
}

/// One evaluation of the five controls and the running integral `U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlSample {
    pub t: f64,
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
    pub u4: f64,
    pub u5: f64,
    /// U(t) = int_0^t u3.
    pub u_int: f64,
}

impl ControlSample {
    pub fn momentum_six(&self) -> [f64; 6] {
        [self.u1, self.u2, self.u3, self.u4, self.u5, 0.0]
    }
}

/// A and B are declared zero below this relative threshold; exact symbolic
/// zeros survive floating-point construction, near-zeros come from rounding.
fn zero_tol(a: f64, b: f64) -> f64 {
    1e-14 * (a + b).max(1.0)
}

/// Split the initial momentum into its case and derived constants.
pub fn classify(m: &InitialMomentum) -> CaseParams {
    let a = (m.u1 + m.u5).powi(2) + (m.u2 - m.u4).powi(2);
    let b = (m.u1 - m.u5).powi(2) + (m.u2 + m.u4).powi(2);
    let tol = zero_tol(a, b);
    let a_zero = a <= tol;
    let b_zero = b <= tol;
    let sr_speed = (m.u3 * m.u3 + m.u4 * m.u4 + m.u5 * m.u5).sqrt();
    let b1 = m.u4 * m.u4 + m.u5 * m.u5;
    let sa = a.sqrt();
    let sb = b.sqrt();
    let p = (4.0 * m.u3 * m.u3 + (sa - sb).powi(2)).sqrt();
    let q = (4.0 * m.u3 * m.u3 + (sa + sb).powi(2)).sqrt();

    let tag = if a_zero && b_zero && m.u3 == 0.0 && m.u4 == 0.0 && m.u5 == 0.0 {
        CaseTag::Trivial
    } else if a_zero {
        // A = B = 0 with u3 != 0 lands here as well: both exponential forms
        // coincide at u3 == const, so case I is the tie-break.
        CaseTag::I
    } else if b_zero {
        CaseTag::II
    } else {
        CaseTag::III
    };

    let (k, p0, psi0, v0) = if tag == CaseTag::III {
        let k = p / q;
        assert!(
            k < 1.0,
            "P = Q is impossible with A*B > 0 (A = {a}, B = {b})"
        );
        let v0 = 0.5 * (b / a).ln();
        if p == 0.0 {
            // u3(0) = 0 with A = B exactly: the oscillation degenerates to
            // u3 == 0; pick the zero phase rather than evaluate asin(0/0).
            (Some(0.0), Some(0.0), Some(0.0), Some(v0))
        } else {
            let s = (2.0 * m.u3 / p).clamp(-1.0, 1.0);
            let p0 = if b >= a {
                -s.asin()
            } else {
                std::f64::consts::PI + s.asin()
            };
            let psi0 = incomplete_f(p0, k).expect("modulus < 1 in case III");
            (Some(k), Some(p0), Some(psi0), Some(v0))
        }
    } else {
        (None, None, None, None)
    };

    CaseParams {
        tag,
        a,
        b,
        sr_speed,
        b1,
        p,
        q,
        k,
        p0,
        psi0,
        v0,
    }
}

/// Exponential relaxation shared by cases I and II.
///
/// With `x = sign * b * t` both cases read
/// `u3 = b (cp e^x - cm e^{-x}) / (cp e^x + cm e^{-x})` and
/// `U = sign * ln((cp e^x + cm e^{-x}) / 2)`; `sign = -1` is case I,
/// `sign = +1` case II. The dominant exponential is factored out so nothing
/// overflows for any `b*t`.
fn relaxation_u3_u(t: f64, b: f64, u3_0: f64, sign: f64) -> (f64, f64) {
    let cp = 1.0 + u3_0 / b;
    let cm = 1.0 - u3_0 / b;
    // Degenerate endpoints u3(0) = +-b (only reachable when A = B = 0):
    // the solution is exactly constant.
    if cm == 0.0 {
        return (b, b * t);
    }
    if cp == 0.0 {
        return (-b, -b * t);
    }
    let x = sign * b * t;
    if x >= 0.0 {
        let e = (-2.0 * x).exp();
        let den = cp + cm * e;
        let u3 = b * (cp - cm * e) / den;
        let u = sign * (x + (0.5 * den).ln());
        (u3, u)
    } else {
        let e = (2.0 * x).exp();
        let den = cp * e + cm;
        let u3 = b * (cp * e - cm) / den;
        let u = sign * (-x + (0.5 * den).ln());
        (u3, u)
    }
}

/// Elliptic branch: `y(t)` and `y'(t)` of the oscillation, from which
/// `u3 = y'/2` and `U = y/2 - V0/2`.
fn oscillation_y(t: f64, cp: &CaseParams) -> (f64, f64) {
    let (k, psi0) = (cp.k.unwrap(), cp.psi0.unwrap());
    let psi = psi0 + 0.5 * cp.q * t;
    let j = jacobi_sn_cn_dn(psi, k).expect("modulus < 1 in case III");
    // Group P^2 and P*Q with the cn terms so nothing divides by k.
    let arg = 1.0
        + (cp.p * cp.p * j.cn * j.cn + cp.p * cp.q * j.cn * j.dn) / (2.0 * (cp.a * cp.b).sqrt());
    (arg.ln(), -cp.p * j.sn)
}

/// Evaluate `(u3(t), U(t))` for the classified momentum.
pub fn eval_u3_u(t: f64, cp: &CaseParams, m: &InitialMomentum) -> (f64, f64) {
    if t == 0.0 {
        return (m.u3, 0.0);
    }
    match cp.tag {
        CaseTag::Trivial => (0.0, 0.0),
        CaseTag::I => relaxation_u3_u(t, cp.sr_speed, m.u3, -1.0),
        CaseTag::II => relaxation_u3_u(t, cp.sr_speed, m.u3, 1.0),
        CaseTag::III => {
            if cp.p == 0.0 {
                return (0.0, 0.0);
            }
            let (y, ydot) = oscillation_y(t, cp);
            (0.5 * ydot, 0.5 * y - 0.5 * cp.v0.unwrap())
        }
    }
}

/// `c * e`, treating an exactly-zero coefficient as an exact zero so that a
/// saturated exponential never turns into 0 * inf.
fn exp_term(c: f64, e: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * e
    }
}

/// Evaluate all five controls and `U` at time `t`.
pub fn eval_controls(t: f64, cp: &CaseParams, m: &InitialMomentum) -> ControlSample {
    if t == 0.0 {
        return ControlSample {
            t: 0.0,
            u1: m.u1,
            u2: m.u2,
            u3: m.u3,
            u4: m.u4,
            u5: m.u5,
            u_int: 0.0,
        };
    }
    let (u3, u_int) = eval_u3_u(t, cp, m);
    let e_pos = u_int.exp();
    let e_neg = (-u_int).exp();
    let ca = 0.5 * (m.u1 + m.u5);
    let cb = 0.5 * (m.u1 - m.u5);
    let cc = 0.5 * (m.u2 + m.u4);
    let cd = 0.5 * (m.u2 - m.u4);
    ControlSample {
        t,
        u1: exp_term(ca, e_neg) + exp_term(cb, e_pos),
        u2: exp_term(cc, e_pos) + exp_term(cd, e_neg),
        u3,
        u4: exp_term(cc, e_pos) - exp_term(cd, e_neg),
        u5: exp_term(ca, e_neg) - exp_term(cb, e_pos),
        u_int,
    }
}

/// The Hamiltonian `H = (u3^2 + u4^2 + u5^2)/2` and the Casimir
/// `W = u1 u4 + u2 u5` (the `u3 u6` term drops in this slice).
pub fn first_integrals(s: &ControlSample) -> (f64, f64) {
    let h = 0.5 * (s.u3 * s.u3 + s.u4 * s.u4 + s.u5 * s.u5);
    let w = s.u1 * s.u4 + s.u2 * s.u5;
    (h, w)
}
