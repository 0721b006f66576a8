//! Python bindings for the core library. Build with
//! `cargo build -p se3sr-python --release` and import the produced
//! `libse3sr.so` as `se3sr` (see `python/smoke_test.py` for a loader).

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use se3sr_core as core;

fn to_py_err(e: core::Error) -> PyErr {
    match e {
        core::Error::ModulusOutOfRange(_)
        | core::Error::NonzeroU6(_)
        | core::Error::InvalidInput(_) => PyValueError::new_err(e.to_string()),
        core::Error::ChartSingularity(_) | core::Error::ChartSingularityAt { .. } => {
            PyRuntimeError::new_err(e.to_string())
        }
    }
}

fn momentum(u0: [f64; 5]) -> core::InitialMomentum {
    core::InitialMomentum::new(u0[0], u0[1], u0[2], u0[3], u0[4])
}

/// Case classification and derived constants of an initial momentum.
#[pyclass(frozen)]
struct CaseInfo {
    /// "TRIVIAL", "I", "II" or "III".
    #[pyo3(get)]
    case: String,
    #[pyo3(get)]
    a: f64,
    #[pyo3(get)]
    b: f64,
    #[pyo3(get)]
    sr_speed: f64,
    #[pyo3(get)]
    b1: f64,
    #[pyo3(get)]
    p: f64,
    #[pyo3(get)]
    q: f64,
    #[pyo3(get)]
    k: Option<f64>,
    #[pyo3(get)]
    p0: Option<f64>,
    #[pyo3(get)]
    psi0: Option<f64>,
    #[pyo3(get)]
    v0: Option<f64>,
}

#[pymethods]
impl CaseInfo {
    fn __repr__(&self) -> String {
        format!(
            "CaseInfo(case='{}', A={}, B={}, b={}, P={}, Q={}, k={:?})",
            self.case, self.a, self.b, self.sr_speed, self.p, self.q, self.k
        )
    }
}

/// Classify an initial momentum (u1, u2, u3, u4, u5) and return the derived
/// constants of the closed-form solution.
#[pyfunction]
fn classify(u0: [f64; 5]) -> CaseInfo {
    let cp = core::classify(&momentum(u0));
    CaseInfo {
        case: cp.tag.to_string(),
        a: cp.a,
        b: cp.b,
        sr_speed: cp.sr_speed,
        b1: cp.b1,
        p: cp.p,
        q: cp.q,
        k: cp.k,
        p0: cp.p0,
        psi0: cp.psi0,
        v0: cp.v0,
    }
}

/// Closed-form controls at time t: returns (u1, u2, u3, u4, u5, U).
#[pyfunction]
fn eval_controls(t: f64, u0: [f64; 5]) -> (f64, f64, f64, f64, f64, f64) {
    let m = momentum(u0);
    let cp = core::classify(&m);
    let s = core::eval_controls(t, &cp, &m);
    (s.u1, s.u2, s.u3, s.u4, s.u5, s.u_int)
}

/// Table of closed-form controls at `samples` equally spaced times in
/// [0, t1]; rows are (t, u1, u2, u3, u4, u5, U, H, W).
#[pyfunction]
fn controls_table(u0: [f64; 5], t1: f64, samples: usize) -> PyResult<Vec<[f64; 9]>> {
    if !t1.is_finite() || t1 <= 0.0 || samples < 2 {
        return Err(PyValueError::new_err("need t1 > 0 and samples >= 2"));
    }
    let m = momentum(u0);
    let cp = core::classify(&m);
    Ok((0..samples)
        .map(|i| {
            let t = t1 * i as f64 / (samples - 1) as f64;
            let s = core::eval_controls(t, &cp, &m);
            let (h, w) = core::first_integrals(&s);
            [s.t, s.u1, s.u2, s.u3, s.u4, s.u5, s.u_int, h, w]
        })
        .collect())
}

/// Integrate the geodesic from the identity; rows are
/// (t, x, y, z, theta, beta, alpha, u1, u2, u3, u4, u5, rho1, rho2, rho3).
/// `backend` is "angles" or "matrix".
#[pyfunction]
#[pyo3(signature = (u0, t1, samples, backend = "matrix"))]
fn geodesic_table(u0: [f64; 5], t1: f64, samples: usize, backend: &str) -> PyResult<Vec<[f64; 15]>> {
    let b: core::Backend = backend.parse().map_err(to_py_err)?;
    let tr = core::integrate_geodesic(&momentum(u0), t1, samples, b).map_err(to_py_err)?;
    Ok(tr
        .samples
        .iter()
        .zip(&tr.invariant_log)
        .map(|(s, inv)| {
            [
                s.controls.t,
                s.pose.x,
                s.pose.y,
                s.pose.z,
                s.pose.theta,
                s.pose.beta,
                s.pose.alpha,
                s.controls.u1,
                s.controls.u2,
                s.controls.u3,
                s.controls.u4,
                s.controls.u5,
                inv.rho1,
                inv.rho2,
                inv.rho3,
            ]
        })
        .collect())
}

/// Max drift of (H, W, rho1, rho2, rho3) along an integrated geodesic.
#[pyfunction]
#[pyo3(signature = (u0, t1, samples, backend = "matrix"))]
fn invariant_drift(u0: [f64; 5], t1: f64, samples: usize, backend: &str) -> PyResult<(f64, f64, f64, f64, f64)> {
    let b: core::Backend = backend.parse().map_err(to_py_err)?;
    let tr = core::integrate_geodesic(&momentum(u0), t1, samples, b).map_err(to_py_err)?;
    let d = core::check_invariants(&tr);
    Ok((d.h, d.w, d.rho1, d.rho2, d.rho3))
}

/// RK4 oracle for the momentum system; rows are (t, u1..u6, U).
#[pyfunction]
fn integrate_vertical(u0: [f64; 5], t1: f64, n_steps: usize) -> PyResult<Vec<[f64; 8]>> {
    let states = core::integrate_vertical(&momentum(u0), t1, n_steps).map_err(to_py_err)?;
    Ok(states
        .iter()
        .map(|s| [s.t, s.u[0], s.u[1], s.u[2], s.u[3], s.u[4], s.u[5], s.u_int])
        .collect())
}

/// Complete elliptic integral of the first kind K(k).
#[pyfunction]
fn complete_k(k: f64) -> PyResult<f64> {
    core::complete_k(k).map_err(to_py_err)
}

/// Incomplete elliptic integral of the first kind F(phi, k), any real phi.
#[pyfunction]
fn incomplete_f(phi: f64, k: f64) -> PyResult<f64> {
    core::incomplete_f(phi, k).map_err(to_py_err)
}

/// Jacobi elliptic functions: returns (sn(u, k), cn(u, k), dn(u, k)).
#[pyfunction]
fn jacobi_sn_cn_dn(u: f64, k: f64) -> PyResult<(f64, f64, f64)> {
    let j = core::jacobi_sn_cn_dn(u, k).map_err(to_py_err)?;
    Ok((j.sn, j.cn, j.dn))
}

/// Homogeneous 4x4 matrix of the pose (x, y, z, theta, beta, alpha).
#[pyfunction]
fn pose_matrix(pose: [f64; 6]) -> [[f64; 4]; 4] {
    let g = core::Pose::new(pose[0], pose[1], pose[2], pose[3], pose[4], pose[5]);
    core::pose_to_matrix(&g).0
}

/// Invert the pose chart: (x, y, z, theta, beta, alpha) from a 4x4 rigid
/// motion. Raises for matrices inside the gimbal band or otherwise invalid.
#[pyfunction]
fn matrix_pose(m: [[f64; 4]; 4]) -> PyResult<[f64; 6]> {
    let pm = core::PoseMatrix(m);
    pm.validate().map_err(to_py_err)?;
    let g = core::matrix_to_pose(&pm).map_err(to_py_err)?;
    Ok([g.x, g.y, g.z, g.theta, g.beta, g.alpha])
}

#[pymodule]
fn se3sr(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<CaseInfo>()?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(eval_controls, m)?)?;
    m.add_function(wrap_pyfunction!(controls_table, m)?)?;
    m.add_function(wrap_pyfunction!(geodesic_table, m)?)?;
    m.add_function(wrap_pyfunction!(invariant_drift, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_vertical, m)?)?;
    m.add_function(wrap_pyfunction!(complete_k, m)?)?;
    m.add_function(wrap_pyfunction!(incomplete_f, m)?)?;
    m.add_function(wrap_pyfunction!(jacobi_sn_cn_dn, m)?)?;
    m.add_function(wrap_pyfunction!(pose_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_pose, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
