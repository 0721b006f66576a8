//! Elliptic integrals of the first kind and Jacobi elliptic functions.
//!
//! Everything here is built on the arithmetic-geometric mean: `K` and `F`
//! use the ascending Landen transformation, `sn`/`cn`/`dn` recover the
//! amplitude by the descending Gauss transformation. The modulus convention
//! is `k` (not the parameter `m = k^2`), and `F` is extended to all real
//! amplitudes through its quasi-periodicity `F(phi + n*pi, k) = 2nK + F(phi, k)`.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_PI_2, PI};

const AGM_MAX_ITER: usize = 32;

/// One simultaneous evaluation of the three Jacobi functions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

fn check_modulus(k: f64) -> Result<()> {
    // contains() is false for NaN, so that falls through to the error too
    if !(0.0..1.0).contains(&k) {
        return Err(Error::ModulusOutOfRange(k));
    }
    Ok(())
}

/// Complete elliptic integral of the first kind, `K(k)`.
///
/// Computed as `pi / (2 * agm(1, k'))` with `k' = sqrt(1 - k^2)`.
pub fn complete_k(k: f64) -> Result<f64> {
    check_modulus(k)?;
    if k == 0.0 {
        return Ok(FRAC_PI_2);
    }
    let mut a = 1.0_f64;
    // (1-k)(1+k) avoids cancellation for k near 1.
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let am = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = am;
    }
    Ok(PI / (a + b))
}

/// Incomplete elliptic integral of the first kind,
/// `F(phi, k) = int_0^phi dt / sqrt(1 - k^2 sin^2 t)`, for any real `phi`.
pub fn incomplete_f(phi: f64, k: f64) -> Result<f64> {
    check_modulus(k)?;
    if !phi.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite amplitude {phi}")));
    }
    if k == 0.0 {
        return Ok(phi);
    }
    // Reduce to the principal branch: F(phi + n*pi) = 2nK + F(phi).
    let n = (phi / PI).round();
    let phi_r = phi - n * PI;
    let mut f = if phi_r.abs() >= FRAC_PI_2 {
        phi_r.signum() * complete_k(k)?
    } else {
        phi_r.signum() * f_principal(phi_r.abs(), k)
    };
    if n != 0.0 {
        f += 2.0 * n * complete_k(k)?;
    }
    Ok(f)
}

/// `F(phi, k)` on `0 <= phi < pi/2`, `0 < k < 1`, by the ascending Landen
/// transformation with amplitude-branch bookkeeping.
fn f_principal(phi: f64, k: f64) -> f64 {
    if phi == 0.0 {
        return 0.0;
    }
    let kp = ((1.0 - k) * (1.0 + k)).sqrt();
    let mut t = phi.tan();
    if t.abs() > 10.0 {
        // Complementary-amplitude transform keeps tan away from its pole.
        let e = 1.0 / (kp * t);
        if e.abs() < 10.0 {
            // complete_k cannot fail here: 0 < k < 1 was already checked.
            let big_k = complete_k(k).expect("modulus validated");
            return big_k - f_principal(e.atan(), k);
        }
    }
    let mut a = 1.0_f64;
    let mut b = kp;
    let mut c = k;
    let mut amp = phi;
    let mut half_turns = 0.0_f64;
    let mut scale = 1.0_f64;
    for _ in 0..AGM_MAX_ITER {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let ratio = b / a;
        amp += (t * ratio).atan() + half_turns * PI;
        half_turns = ((amp + FRAC_PI_2) / PI).floor();
        t *= (1.0 + ratio) / (1.0 - ratio * t * t);
        c = 0.5 * (a - b);
        let gm = (a * b).sqrt();
        a = 0.5 * (a + b);
        b = gm;
        scale *= 2.0;
    }
    (t.atan() + half_turns * PI) / (scale * a)
}

/// Jacobi elliptic functions `sn(u, k)`, `cn(u, k)`, `dn(u, k)` for real `u`.
///
/// Uses the AGM with the descending amplitude recurrence
/// `phi_{n-1} = (phi_n + asin((c_n/a_n) sin phi_n)) / 2`; `dn` comes from the
/// defining relation `dn^2 = 1 - k^2 sn^2`.
pub fn jacobi_sn_cn_dn(u: f64, k: f64) -> Result<JacobiTriple> {
    check_modulus(k)?;
    if k == 0.0 {
        return Ok(JacobiTriple {
            sn: u.sin(),
            cn: u.cos(),
            dn: 1.0,
        });
    }
    let mut a_seq = [0.0_f64; AGM_MAX_ITER + 1];
    let mut c_seq = [0.0_f64; AGM_MAX_ITER + 1];
    let mut a = 1.0_f64;
    let mut b = ((1.0 - k) * (1.0 + k)).sqrt();
    a_seq[0] = a;
    c_seq[0] = k;
    let mut n = 0;
    while n < AGM_MAX_ITER && c_seq[n].abs() > f64::EPSILON * a_seq[n] {
        let am = 0.5 * (a + b);
        let c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = am;
        n += 1;
        a_seq[n] = a;
        c_seq[n] = c;
    }
    let mut phi = (1u64 << n) as f64 * a * u;
    for i in (1..=n).rev() {
        let s = (c_seq[i] / a_seq[i] * phi.sin()).clamp(-1.0, 1.0);
        phi = 0.5 * (phi + s.asin());
    }
    let sn = phi.sin();
    let cn = phi.cos();
    let dn = (1.0 - (k * sn) * (k * sn)).sqrt();
    Ok(JacobiTriple { sn, cn, dn })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    // Oracle values for K and F come from adaptive quadrature of the defining
    // integral (cross-checked in the acceptance suite, which carries its own
    // quadrature routine).
    const K_HALF: f64 = 1.685750354812596; // K(0.5)
    const F_09_06: f64 = 0.9417015780511269; // F(0.9, 0.6)

    #[test]
    fn complete_k_at_zero_modulus() {
        assert_eq!(complete_k(0.0).unwrap(), FRAC_PI_2);
    }

    #[test]
    fn complete_k_matches_quadrature_value() {
        assert_relative_eq!(complete_k(0.5).unwrap(), K_HALF, max_relative = 1e-15);
    }

    #[test]
    fn complete_k_diverges_monotonically_towards_one() {
        let k9 = complete_k(0.9).unwrap();
        let k99 = complete_k(0.99).unwrap();
        let k999 = complete_k(0.999).unwrap();
        assert!(k999 > k99 && k99 > k9 && k9 > FRAC_PI_2);
    }

    #[test]
    fn complete_k_rejects_bad_modulus() {
        assert!(matches!(complete_k(-0.1), Err(Error::ModulusOutOfRange(_))));
        assert!(matches!(complete_k(1.0), Err(Error::ModulusOutOfRange(_))));
        assert!(matches!(
            complete_k(f64::NAN),
            Err(Error::ModulusOutOfRange(_))
        ));
    }

    #[test]
    fn incomplete_f_reduces_to_amplitude_at_zero_modulus() {
        assert_eq!(incomplete_f(FRAC_PI_2, 0.0).unwrap(), FRAC_PI_2);
        assert_eq!(incomplete_f(-2.3, 0.0).unwrap(), -2.3);
    }

    #[test]
    fn incomplete_f_is_odd() {
        let f = incomplete_f(0.7, 0.3).unwrap();
        let g = incomplete_f(-0.7, 0.3).unwrap();
        assert_relative_eq!(f, -g, max_relative = 1e-15);
    }

    #[test]
    fn incomplete_f_matches_quadrature_value() {
        assert_relative_eq!(
            incomplete_f(0.9, 0.6).unwrap(),
            F_09_06,
            max_relative = 1e-14
        );
    }

    #[test]
    fn incomplete_f_at_quarter_period_is_complete_k() {
        for k in [0.1, 0.5, 0.9, 0.99] {
            let f = incomplete_f(FRAC_PI_2, k).unwrap();
            assert_relative_eq!(f, complete_k(k).unwrap(), max_relative = 1e-13);
        }
    }

    #[test]
    fn incomplete_f_quasi_periodicity() {
        let k = 0.7;
        let big_k = complete_k(k).unwrap();
        let f0 = incomplete_f(0.4, k).unwrap();
        for n in [-3i32, -1, 1, 2, 5] {
            let f = incomplete_f(0.4 + n as f64 * PI, k).unwrap();
            assert_relative_eq!(f, 2.0 * n as f64 * big_k + f0, max_relative = 1e-12);
        }
    }

    #[test]
    fn incomplete_f_strictly_increasing_in_amplitude() {
        let k = 0.85;
        let mut prev = incomplete_f(-2.0, k).unwrap();
        let mut phi = -2.0 + 0.05;
        while phi < 2.0 {
            let f = incomplete_f(phi, k).unwrap();
            assert!(f > prev, "F not increasing at phi = {phi}");
            prev = f;
            phi += 0.05;
        }
    }

    #[test]
    fn jacobi_at_zero_argument() {
        for k in [0.0, 0.3, 0.9, 0.999] {
            let j = jacobi_sn_cn_dn(0.0, k).unwrap();
            assert_eq!((j.sn, j.cn, j.dn), (0.0, 1.0, 1.0));
        }
    }

    #[test]
    fn jacobi_degenerates_to_trig_at_zero_modulus() {
        let j = jacobi_sn_cn_dn(1.3, 0.0).unwrap();
        assert_eq!(j.sn, 1.3_f64.sin());
        assert_eq!(j.cn, 1.3_f64.cos());
        assert_eq!(j.dn, 1.0);
    }

    #[test]
    fn jacobi_inverts_incomplete_f() {
        // sn(F(phi, k), k) = sin(phi)
        let u = incomplete_f(0.4, 0.7).unwrap();
        let j = jacobi_sn_cn_dn(u, 0.7).unwrap();
        assert_relative_eq!(j.sn, 0.4_f64.sin(), epsilon = 1e-11);
    }

    #[test]
    fn jacobi_periodicity_4k() {
        let k = 0.8;
        let period = 4.0 * complete_k(k).unwrap();
        for u in [-2.0, 0.3, 1.7, 5.0] {
            let a = jacobi_sn_cn_dn(u, k).unwrap();
            let b = jacobi_sn_cn_dn(u + period, k).unwrap();
            assert_relative_eq!(a.sn, b.sn, epsilon = 1e-10);
            assert_relative_eq!(a.cn, b.cn, epsilon = 1e-10);
            assert_relative_eq!(a.dn, b.dn, epsilon = 1e-10);
        }
    }

    #[test]
    fn jacobi_half_period_flips_sn() {
        // sn(u + 2K) = -sn(u), dn has period 2K
        let k = 0.6;
        let two_k = 2.0 * complete_k(k).unwrap();
        let a = jacobi_sn_cn_dn(0.9, k).unwrap();
        let b = jacobi_sn_cn_dn(0.9 + two_k, k).unwrap();
        assert_relative_eq!(b.sn, -a.sn, epsilon = 1e-11);
        assert_relative_eq!(b.dn, a.dn, epsilon = 1e-11);
    }

    #[test]
    fn jacobi_derivative_of_sn() {
        // d/du sn = cn * dn, checked by central differences.
        let h = 1e-6;
        for (u, k) in [(0.37, 0.5), (1.9, 0.8), (-1.1, 0.95)] {
            let plus = jacobi_sn_cn_dn(u + h, k).unwrap().sn;
            let minus = jacobi_sn_cn_dn(u - h, k).unwrap().sn;
            let j = jacobi_sn_cn_dn(u, k).unwrap();
            assert_relative_eq!((plus - minus) / (2.0 * h), j.cn * j.dn, epsilon = 1e-6);
        }
    }
}
