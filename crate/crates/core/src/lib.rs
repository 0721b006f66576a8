//! Closed-form extremal controls and geodesics for the sub-Riemannian
//! structure on SE(3), restricted to the u6 = 0 momentum slice.
//!
//! The library has five parts:
//!
//! - [`elliptic`]: elliptic integrals of the first kind and the Jacobi
//!   functions sn/cn/dn, all AGM-based and self-contained.
//! - [`se3`]: the angle chart on SE(3), its homogeneous-matrix form, the
//!   left-invariant frame, and the right-invariant momentum functions.
//! - [`controls`]: case classification of the initial momentum and the
//!   closed-form evaluation of the five extremal controls.
//! - [`oracle`]: an independent fixed-step RK4 integrator of the momentum
//!   system, used as ground truth for the closed forms.
//! - [`geodesic`]: integration of the configuration equations driven by the
//!   closed-form controls, with an angle backend and a singularity-free
//!   rotation-matrix backend, plus conservation reporting.

pub mod controls;
pub mod elliptic;
mod error;
pub mod geodesic;
pub mod oracle;
pub mod se3;

pub use controls::{
    classify, eval_controls, eval_u3_u, first_integrals, CaseParams, CaseTag, ControlSample,
    InitialMomentum,
};
pub use elliptic::{complete_k, incomplete_f, jacobi_sn_cn_dn, JacobiTriple};
pub use error::{Error, Result};
pub use geodesic::{
    check_invariants, horizontal_rhs, integrate_geodesic, Backend, InvariantDrift,
    InvariantSample, Trajectory, TrajectorySample,
};
pub use oracle::{integrate_vertical, integrate_vertical_full, vertical_rhs, VerticalState};
pub use se3::{
    frame_fields, matrix_to_pose, pose_to_matrix, rho_invariants, Pose, PoseMatrix,
};
