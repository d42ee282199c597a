//! Decoherence (von Neumann entropy), purity and Wootters concurrence.

use std::f64::consts::{LN_2, SQRT_2};
use std::fmt;

use crate::error::Result;
use crate::linalg::{herm_eig4, hermitian_function, kron, pauli_y, Mat4};
use crate::model::DensityMatrix;
use crate::noise::{CouplingModel, StaticNoiseParams, SERIES_THRESHOLD};

pub const LN_4: f64 = 2.0 * LN_2;

/// Results this close to a bound are reported as the bound itself; the
/// eigensolver cannot resolve anything finer.
const SNAP: f64 = 1e-14;

fn snap_to_bounds(x: f64, lo: f64, hi: f64) -> f64 {
    if x - lo < SNAP {
        lo
    } else if hi - x < SNAP {
        hi
    } else {
        x
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureTriple {
    /// Von Neumann entropy in nats, in `[0, ln 4]`.
    pub decoherence: f64,
    /// `tr ρ²`, in `[1/4, 1]`.
    pub purity: f64,
    /// In `[0, 1]`.
    pub concurrence: f64,
}

impl MeasureTriple {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        Ok(MeasureTriple {
            decoherence: von_neumann_entropy(rho)?,
            purity: purity(rho),
            concurrence: concurrence(rho)?,
        })
    }

    /// Checks the bounds with slack `tol` for round-off.
    pub fn within_bounds(&self, tol: f64) -> bool {
        (-tol..=LN_4 + tol).contains(&self.decoherence)
            && (0.25 - tol..=1.0 + tol).contains(&self.purity)
            && (-tol..=1.0 + tol).contains(&self.concurrence)
    }
}

/// `-Σ ν ln ν` over the spectrum, natural log.
///
/// Eigenvalues are clamped into `[0, 1]` first; the density-matrix invariant
/// already rules out anything below the round-off window.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let values = herm_eig4(rho.matrix())?.values;
    let s: f64 = values
        .iter()
        .map(|&v| v.clamp(0.0, 1.0))
        .filter(|&v| v > 0.0)
        .map(|v| -v * v.ln())
        .sum();
    Ok(snap_to_bounds(s, 0.0, LN_4))
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    // tr ρ² = Σ |ρ_ij|² for Hermitian ρ
    m.0.iter().flatten().map(|z| z.norm_sqr()).sum()
}

/// `σ_y ⊗ σ_y ρ* σ_y ⊗ σ_y`.
pub fn spin_flip(m: &Mat4) -> Mat4 {
    let yy = kron(&pauli_y(), &pauli_y());
    yy * m.conj() * yy
}

/// Wootters concurrence `max(0, s1 - s2 - s3 - s4)`.
///
/// The `s_i` are square roots of the eigenvalues of `ρ ρ̃`, obtained as the
/// eigenvalues of the Hermitian matrix `√(√ρ ρ̃ √ρ)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    let m = rho.matrix();
    let sqrt_rho = hermitian_function(m, |v| v.max(0.0).sqrt())?;
    let inner = sqrt_rho * spin_flip(m) * sqrt_rho;
    let hermitian = Mat4::from_fn(|i, j| 0.5 * (inner[(i, j)] + inner[(j, i)].conj()));
    let mu = herm_eig4(&hermitian)?.values;
    debug_assert!(mu[3] > -1e-8, "ρρ̃ spectrum {mu:?}");
    let s = mu.map(|v| v.max(0.0).sqrt());
    Ok(snap_to_bounds(s[0] - s[1] - s[2] - s[3], 0.0, 1.0))
}

/// Why a tabulated measure expression could not be evaluated as a real number.
#[derive(Clone, Debug, PartialEq)]
pub enum DomainFlag {
    /// Square root of a negative quantity.
    NegativeSqrt { name: &'static str, argument: f64 },
    /// Logarithm of a non-positive quantity.
    NonPositiveLog { name: &'static str, argument: f64 },
    /// `arccoth` needs `|x| > 1`, `arctanh` needs `|x| < 1`.
    InverseHyperbolic { name: &'static str, argument: f64 },
    /// `0/0` in an auxiliary quantity (e.g. `sin 2φ = 0` inside `η`).
    Indeterminate { name: &'static str },
}

impl fmt::Display for DomainFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainFlag::NegativeSqrt { name, argument } => {
                write!(f, "sqrt of negative {name} = {argument:?}")
            }
            DomainFlag::NonPositiveLog { name, argument } => {
                write!(f, "log of non-positive {name} = {argument:?}")
            }
            DomainFlag::InverseHyperbolic { name, argument } => {
                write!(f, "{name} argument {argument:?} outside real domain")
            }
            DomainFlag::Indeterminate { name } => write!(f, "{name} is 0/0"),
        }
    }
}

pub type FormulaValue = std::result::Result<f64, DomainFlag>;

/// Tabulated closed-form expressions for the three measures.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedFormMeasures {
    pub decoherence: FormulaValue,
    pub purity: FormulaValue,
    pub concurrence: FormulaValue,
    /// `φ = t Δm λ`.
    pub phi: f64,
}

impl ClosedFormMeasures {
    /// All three values, if none was flagged.
    pub fn triple(&self) -> Option<MeasureTriple> {
        Some(MeasureTriple {
            decoherence: self.decoherence.clone().ok()?,
            purity: self.purity.clone().ok()?,
            concurrence: self.concurrence.clone().ok()?,
        })
    }
}

fn sqrt_checked(name: &'static str, x: f64) -> FormulaValue {
    if x < 0.0 {
        Err(DomainFlag::NegativeSqrt { name, argument: x })
    } else {
        Ok(x.sqrt())
    }
}

fn ln_checked(name: &'static str, x: f64) -> FormulaValue {
    if x > 0.0 && x.is_finite() {
        Ok(x.ln())
    } else {
        Err(DomainFlag::NonPositiveLog { name, argument: x })
    }
}

/// Evaluates the tabulated measure expressions as printed.
///
/// These are reproduced, not trusted: several leave their real domain or
/// disagree with the measures of the averaged state. Below
/// [`SERIES_THRESHOLD`] in `φ` the removable limits are used where they exist.
pub fn closed_form_measures(
    model: CouplingModel,
    n: &StaticNoiseParams,
    lambda: f64,
    t: f64,
) -> ClosedFormMeasures {
    let phi = t * n.delta_m * lambda;
    let small = phi.abs() < SERIES_THRESHOLD;
    let (decoherence, purity, concurrence) = match model {
        CouplingModel::Ccm => {
            if small {
                (Ok(0.0), Ok(1.0), eta3_limit_flag())
            } else {
                (d_ccm(phi), Ok(p_ccm(phi)), c_ccm(phi))
            }
        }
        CouplingModel::Dcm => {
            if small {
                let purity = if t > 0.0 {
                    Ok(1.0 / t.powi(4))
                } else {
                    Err(DomainFlag::Indeterminate { name: "P_dcm" })
                };
                // η2 → 4 so ½ - η2/2 → -3/2
                let d = Err(DomainFlag::NonPositiveLog {
                    name: "1/2 - eta2/2",
                    argument: -1.5,
                });
                (d, purity, Ok(SQRT_2))
            } else {
                (d_dcm(phi), Ok(p_dcm_printed(phi, t)), c_dcm(phi))
            }
        }
    };
    ClosedFormMeasures {
        decoherence,
        purity,
        concurrence,
        phi,
    }
}

fn eta3_limit_flag() -> FormulaValue {
    Err(DomainFlag::NegativeSqrt {
        name: "4 - eta3",
        argument: -4.0,
    })
}

fn d_ccm(phi: f64) -> FormulaValue {
    let s2 = (2.0 * phi).sin();
    let den = (phi * phi * s2 * s2).sqrt();
    if den == 0.0 {
        return Err(DomainFlag::Indeterminate { name: "eta1" });
    }
    let eta1 = s2 * s2 / den;
    let x = 2.0 * phi / s2;
    if x.abs() <= 1.0 {
        return Err(DomainFlag::InverseHyperbolic {
            name: "arccoth",
            argument: x,
        });
    }
    let arccoth = 0.5 * ((x + 1.0) / (x - 1.0)).ln();
    Ok(0.5
        * (LN_4 - ln_checked("1/2 - eta1/4", 0.5 - 0.25 * eta1)?
            - ln_checked("2 + eta1", 2.0 + eta1)?
            - arccoth * s2 / phi))
}

fn d_dcm(phi: f64) -> FormulaValue {
    let s2 = (2.0 * phi).sin();
    let den = (phi * phi * s2 * s2).sqrt();
    if den == 0.0 {
        return Err(DomainFlag::Indeterminate { name: "eta2" });
    }
    let eta2 = 2.0 * s2 * s2 / den;
    let s1sq = phi.sin().powi(2);
    let x = s1sq / (phi * phi);
    if x.abs() >= 1.0 {
        return Err(DomainFlag::InverseHyperbolic {
            name: "arctanh",
            argument: x,
        });
    }
    Ok(0.5
        * (LN_2 - ln_checked("1/2 - eta2/2", 0.5 - 0.5 * eta2)?
            - ln_checked("1 + eta2", 1.0 + eta2)?
            - 2.0 * x.atanh() * s1sq / (phi * phi)))
}

/// `(1 + 8φ² - cos 4φ) / (16 φ²)`.
pub fn p_ccm(phi: f64) -> f64 {
    (1.0 + 8.0 * phi * phi - (4.0 * phi).cos()) / (16.0 * phi * phi)
}

/// The dcm purity as tabulated, with its `t⁴` in the denominator.
pub fn p_dcm_printed(phi: f64, t: f64) -> f64 {
    p_dcm_numerator(phi) / (16.0 * t.powi(4) * phi.powi(4))
}

/// `(3 + 8φ⁴ - 4 cos 2φ + cos 4φ) / (16 φ⁴)`, the form without the stray `t⁴`.
pub fn p_dcm(phi: f64) -> f64 {
    p_dcm_numerator(phi) / (16.0 * phi.powi(4))
}

fn p_dcm_numerator(phi: f64) -> f64 {
    3.0 + 8.0 * phi.powi(4) - 4.0 * (2.0 * phi).cos() + (4.0 * phi).cos()
}

fn c_ccm(phi: f64) -> FormulaValue {
    let den = (phi * phi * phi.sin().powi(2)).sqrt();
    if den == 0.0 {
        return Err(DomainFlag::Indeterminate { name: "eta3" });
    }
    let eta3 = 2.0 * (2.0 * phi).sin().powi(2) / den;
    Ok((-sqrt_checked("4 - eta3", 4.0 - eta3)? + sqrt_checked("4 + eta3", 4.0 + eta3)?)
        / (2.0 * SQRT_2))
}

fn c_dcm(phi: f64) -> FormulaValue {
    let s4 = phi.sin().powi(4);
    let den = (phi.powi(4) * s4).sqrt();
    if den == 0.0 {
        return Err(DomainFlag::Indeterminate { name: "eta4" });
    }
    let eta4 = s4 / den;
    Ok(-sqrt_checked("1 - eta4", 1.0 - eta4)? / SQRT_2 + sqrt_checked("1 + eta4", 1.0 + eta4)?)
}

/// Measures of any state whose nonzero block is `[[a, z], [z*, 1 - a]]` in the
/// `{|ψ⁺⟩, |Ψ⁺⟩}` basis depend only on the Bloch length `R` of that block:
/// eigenvalues `(1 ± R)/2`. For the averaged Bell state `R = |sin 2φ|/(2φ)`
/// (ccm) and `R = sin²φ/φ²` (dcm).
pub fn bloch_length(model: CouplingModel, phi: f64) -> f64 {
    if phi.abs() < SERIES_THRESHOLD {
        return match model {
            CouplingModel::Ccm => 1.0 - (2.0 * phi).powi(2) / 6.0,
            CouplingModel::Dcm => 1.0 - phi * phi / 3.0,
        };
    }
    match model {
        CouplingModel::Ccm => ((2.0 * phi).sin() / (2.0 * phi)).abs(),
        CouplingModel::Dcm => (phi.sin() / phi).powi(2),
    }
}

/// Entropy, purity and concurrence of the two-level block with Bloch length `r`.
pub fn measures_from_bloch_length(r: f64) -> MeasureTriple {
    let r = r.clamp(0.0, 1.0);
    let hi = 0.5 * (1.0 + r);
    let lo = 0.5 * (1.0 - r);
    let h = |v: f64| if v > 0.0 { -v * v.ln() } else { 0.0 };
    MeasureTriple {
        decoherence: h(hi) + h(lo),
        purity: 0.5 * (1.0 + r * r),
        concurrence: r,
    }
}
