//! Static-noise ensemble averages.
//!
//! The field value `Δ` is uniform on `[Δo - Δm/2, Δo + Δm/2]`. In the common
//! configuration model (ccm) both qubits see the same draw; in the different
//! configuration model (dcm) the draws are independent.
//!
//! Both averages keep the matrix in the block pattern
//!
//! ```text
//! [ e11 e12 e12 e11 ]
//! [ e21 e22 e22 e21 ]
//! [ e21 e22 e22 e21 ]
//! [ e11 e12 e12 e11 ]
//! ```
//!
//! which [`BlockEntries`] describes. Closed forms for the entries are
//! provided alongside the quadrature; the quadrature is the reference.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{conjugate_sandwich, kron, Mat2, Mat4, C64};
use crate::model::{self, DensityMatrix, Realization, SystemParams};
use crate::quadrature::{QuadratureRule, QuadratureSpec};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticNoiseParams {
    /// Width of the uniform distribution, `Δm > 0`.
    pub delta_m: f64,
    /// Mean of the uniform distribution.
    pub delta_o: f64,
}

impl StaticNoiseParams {
    pub fn new(delta_m: f64, delta_o: f64) -> Result<Self> {
        let n = StaticNoiseParams { delta_m, delta_o };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta_m.is_finite() && self.delta_m > 0.0) {
            return Err(Error::Domain(format!("delta_m = {} must be > 0", self.delta_m)));
        }
        if !self.delta_o.is_finite() {
            return Err(Error::Domain("delta_o must be finite".into()));
        }
        Ok(())
    }

    pub fn interval(&self) -> (f64, f64) {
        (
            self.delta_o - 0.5 * self.delta_m,
            self.delta_o + 0.5 * self.delta_m,
        )
    }

    /// Variance of the field distribution, `Δm²/12`.
    pub fn variance(&self) -> f64 {
        self.delta_m * self.delta_m / 12.0
    }
}

impl Default for StaticNoiseParams {
    fn default() -> Self {
        StaticNoiseParams {
            delta_m: 1.0,
            delta_o: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CouplingModel {
    /// Both qubits share one environment (`Δa = Δb`).
    Ccm,
    /// Independent environments.
    Dcm,
}

impl CouplingModel {
    pub fn name(self) -> &'static str {
        match self {
            CouplingModel::Ccm => "ccm",
            CouplingModel::Dcm => "dcm",
        }
    }
}

impl fmt::Display for CouplingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CouplingModel {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ccm" => Ok(CouplingModel::Ccm),
            "dcm" => Ok(CouplingModel::Dcm),
            other => Err(format!("unknown model `{other}` (expected ccm or dcm)")),
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("time {t} must be finite and >= 0")))
    }
}

pub fn average_ccm(
    p: &SystemParams,
    n: &StaticNoiseParams,
    t: f64,
    q: &QuadratureSpec,
) -> Result<DensityMatrix> {
    let rho0 = model::initial_state(p.r)?;
    n.validate()?;
    check_time(t)?;
    let (lo, hi) = n.interval();
    let nodes = q.nodes_1d(lo, hi)?;
    if t == 0.0 {
        return Ok(rho0);
    }
    let mut acc = Mat4::zeros();
    for (delta, w) in nodes {
        let rho = model::evolve_matrix(p, Realization::common(delta), t, rho0.matrix());
        acc.add_scaled(w, &rho);
    }
    Ok(DensityMatrix::from_trusted(acc))
}

pub fn average_dcm(
    p: &SystemParams,
    n: &StaticNoiseParams,
    t: f64,
    q: &QuadratureSpec,
) -> Result<DensityMatrix> {
    let rho0 = model::initial_state(p.r)?;
    n.validate()?;
    check_time(t)?;
    let (lo, hi) = n.interval();
    q.validate()?;
    if t == 0.0 {
        return Ok(rho0);
    }
    let mut acc = Mat4::zeros();
    if q.rule == QuadratureRule::MonteCarlo {
        for ((da, db), w) in q.nodes_2d(lo, hi)? {
            let rho = model::evolve_matrix(p, Realization::new(da, db), t, rho0.matrix());
            acc.add_scaled(w, &rho);
        }
        return Ok(DensityMatrix::from_trusted(acc));
    }
    // Tensor rule: each per-qubit propagator depends on one coordinate only.
    let line = q.nodes_1d(lo, hi)?;
    let ua: Vec<Mat2> = line
        .iter()
        .map(|&(d, _)| model::single_qubit_propagator(p.eps_a, p.lambda, d, t))
        .collect();
    let ub: Vec<Mat2> = line
        .iter()
        .map(|&(d, _)| model::single_qubit_propagator(p.eps_b, p.lambda, d, t))
        .collect();
    for (a, &(_, wa)) in ua.iter().zip(&line) {
        for (b, &(_, wb)) in ub.iter().zip(&line) {
            let u = kron(a, b);
            acc.add_scaled(wa * wb, &conjugate_sandwich(&u, rho0.matrix()));
        }
    }
    Ok(DensityMatrix::from_trusted(acc))
}

pub fn average(
    model: CouplingModel,
    p: &SystemParams,
    n: &StaticNoiseParams,
    t: f64,
    q: &QuadratureSpec,
) -> Result<DensityMatrix> {
    match model {
        CouplingModel::Ccm => average_ccm(p, n, t, q),
        CouplingModel::Dcm => average_dcm(p, n, t, q),
    }
}

/// The four distinct entries of the averaged block-pattern matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlockEntries {
    pub e11: C64,
    pub e12: C64,
    pub e21: C64,
    pub e22: C64,
}

impl BlockEntries {
    pub fn to_matrix(&self) -> Mat4 {
        let BlockEntries { e11, e12, e21, e22 } = *self;
        crate::linalg::Mat([
            [e11, e12, e12, e11],
            [e21, e22, e22, e21],
            [e21, e22, e22, e21],
            [e11, e12, e12, e11],
        ])
    }

    /// Reads the pattern back from a matrix (top-left representatives).
    pub fn from_matrix(m: &Mat4) -> Self {
        BlockEntries {
            e11: m[(0, 0)],
            e12: m[(0, 1)],
            e21: m[(1, 0)],
            e22: m[(1, 1)],
        }
    }
}

/// Below this value of `φ = t Δm λ` the closed forms switch to their series limits.
pub const SERIES_THRESHOLD: f64 = 1e-6;

fn phi(n: &StaticNoiseParams, lambda: f64, t: f64) -> f64 {
    t * n.delta_m * lambda
}

/// ccm entries `h11, h12, h21, h22` as tabulated.
pub fn ccm_entries(n: &StaticNoiseParams, lambda: f64, t: f64) -> BlockEntries {
    let (dm, d0) = (n.delta_m, n.delta_o);
    let phi = phi(n, lambda, t);
    if phi.abs() < SERIES_THRESHOLD {
        // sin(2φ ∓ a) + sin(2φ ± a) = 2 sin 2φ cos a and sin 2φ / 2φ ≈ 1 - (2φ)²/6
        let a = 4.0 * t * d0 * lambda;
        let sinc = 1.0 - (2.0 * phi).powi(2) / 6.0;
        let re = 0.25 * a.cos() * sinc;
        let im = 0.25 * a.sin() * sinc;
        return BlockEntries {
            e11: C64::new(0.25 + re, 0.0),
            e12: C64::new(0.0, im),
            e21: C64::new(0.0, -im),
            e22: C64::new(0.25 - re, 0.0),
        };
    }
    let minus = 2.0 * t * (dm - 2.0 * d0) * lambda;
    let plus = 2.0 * t * (dm + 2.0 * d0) * lambda;
    let den = 16.0 * t * dm * lambda;
    let h11 = (4.0 * t * dm * lambda + minus.sin() + plus.sin()) / den;
    let h12 = (minus.cos() - plus.cos()) / den;
    let h22 = (4.0 * t * dm * lambda + (4.0 * t * (-dm / 2.0 + d0) * lambda).sin() - plus.sin()) / den;
    BlockEntries {
        e11: C64::new(h11, 0.0),
        e12: C64::new(0.0, h12),
        e21: C64::new(0.0, -h12),
        e22: C64::new(h22, 0.0),
    }
}

/// dcm entries `p11, p12, p21, p22` exactly as tabulated, including the
/// sign of `p11` (which makes the trace `-... ≠ 1`; see [`dcm_entries`]).
pub fn dcm_entries_printed(n: &StaticNoiseParams, lambda: f64, t: f64) -> BlockEntries {
    let (p11, p12, p22) = dcm_parts(n, lambda, t, -1.0);
    BlockEntries {
        e11: C64::new(p11, 0.0),
        e12: C64::new(0.0, p12),
        e21: C64::new(0.0, -p12),
        e22: C64::new(p22, 0.0),
    }
}

/// dcm entries with `p11` sign-corrected: the tabulated numerator of `p11`
/// is the negation of the integral of `cos²χ / 2`.
pub fn dcm_entries(n: &StaticNoiseParams, lambda: f64, t: f64) -> BlockEntries {
    let (p11, p12, p22) = dcm_parts(n, lambda, t, 1.0);
    BlockEntries {
        e11: C64::new(p11, 0.0),
        e12: C64::new(0.0, p12),
        e21: C64::new(0.0, -p12),
        e22: C64::new(p22, 0.0),
    }
}

/// `(p11, Im p12, p22)`; `p11_sign = -1` reproduces the tabulated `p11`.
fn dcm_parts(n: &StaticNoiseParams, lambda: f64, t: f64, p11_sign: f64) -> (f64, f64, f64) {
    let (dm, d0) = (n.delta_m, n.delta_o);
    let phi = phi(n, lambda, t);
    let a = 4.0 * t * d0 * lambda;
    if phi.abs() < SERIES_THRESHOLD {
        // cos(2φ - a) - 2 cos a + cos(2φ + a) = -4 cos a sin²φ, sin²φ/φ² ≈ 1 - φ²/3
        let s = 1.0 - phi * phi / 3.0;
        let c = 0.25 * a.cos() * s;
        let p11 = if p11_sign > 0.0 { 0.25 + c } else { -0.25 - c };
        return (p11, 0.25 * a.sin() * s, 0.25 - c);
    }
    let minus = 2.0 * t * (dm - 2.0 * d0) * lambda;
    let plus = 2.0 * t * (dm + 2.0 * d0) * lambda;
    let quad = 4.0 * t * t * dm * dm * lambda * lambda;
    let den = 16.0 * t * t * dm * dm * lambda * lambda;
    let cosines = minus.cos() - 2.0 * a.cos() + plus.cos();
    let p11 = if p11_sign > 0.0 {
        (quad - cosines) / den
    } else {
        (-quad + cosines) / den
    };
    let p12 = (minus.sin() + 2.0 * a.sin() - plus.sin()) / den;
    let p22 = (quad + cosines) / den;
    (p11, p12, p22)
}

/// Closed-form ccm average of the Bell state (`r = 1`).
pub fn closed_form_ccm(n: &StaticNoiseParams, lambda: f64, t: f64) -> Result<DensityMatrix> {
    n.validate()?;
    check_time(t)?;
    Ok(DensityMatrix::from_trusted(ccm_entries(n, lambda, t).to_matrix()))
}

/// Closed-form dcm average of the Bell state (`r = 1`), sign-corrected.
pub fn closed_form_dcm(n: &StaticNoiseParams, lambda: f64, t: f64) -> Result<DensityMatrix> {
    n.validate()?;
    check_time(t)?;
    Ok(DensityMatrix::from_trusted(dcm_entries(n, lambda, t).to_matrix()))
}

pub fn closed_form(
    model: CouplingModel,
    n: &StaticNoiseParams,
    lambda: f64,
    t: f64,
) -> Result<DensityMatrix> {
    match model {
        CouplingModel::Ccm => closed_form_ccm(n, lambda, t),
        CouplingModel::Dcm => closed_form_dcm(n, lambda, t),
    }
}
