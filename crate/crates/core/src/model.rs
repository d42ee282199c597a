//! Two non-interacting qubits, each driven by `ε_n I + λ Δ_n σ_x`.
//!
//! Under static noise a realization fixes `(Δa, Δb)` for all times, so the
//! Hamiltonian is constant and the propagator is available in closed form.

use crate::error::{Error, Result};
use crate::linalg::{self, herm_eig4, kron, Mat2, Mat4, C64, TOL};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub eps_a: f64,
    pub eps_b: f64,
    /// System-environment coupling, `λ ≥ 0`.
    pub lambda: f64,
    /// Weight of the Bell component in the initial state, `0 ≤ r ≤ 1`.
    pub r: f64,
}

impl SystemParams {
    pub fn new(eps_a: f64, eps_b: f64, lambda: f64, r: f64) -> Result<Self> {
        let p = SystemParams {
            eps_a,
            eps_b,
            lambda,
            r,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps_a.is_finite() && self.eps_b.is_finite()) {
            return Err(Error::Domain("qubit energies must be finite".into()));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::Domain(format!("lambda = {} must be >= 0", self.lambda)));
        }
        check_purity(self.r)
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams {
            eps_a: 0.0,
            eps_b: 0.0,
            lambda: 0.5,
            r: 1.0,
        }
    }
}

/// One draw of the static field values for the two qubits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Realization {
    pub delta_a: f64,
    pub delta_b: f64,
}

impl Realization {
    pub fn new(delta_a: f64, delta_b: f64) -> Self {
        Realization { delta_a, delta_b }
    }

    pub fn common(delta: f64) -> Self {
        Realization::new(delta, delta)
    }
}

/// A Hermitian, unit-trace, positive semidefinite 4×4 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    /// Validates the physicality invariants.
    pub fn new(m: Mat4) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::Unphysical("non-finite entries".into()));
        }
        let defect = m.hermiticity_defect();
        if defect > TOL.hermiticity {
            return Err(Error::Unphysical(format!(
                "hermiticity defect {defect:e}"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > TOL.trace || tr.im.abs() > TOL.trace {
            return Err(Error::Unphysical(format!("trace {tr}")));
        }
        let min = herm_eig4(&m)?.values[3];
        if min < TOL.negative_eigenvalue {
            return Err(Error::Unphysical(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix(m))
    }

    /// For matrices that are physical by construction (unitary images and
    /// convex mixtures of physical states).
    pub(crate) fn from_trusted(m: Mat4) -> Self {
        debug_assert!(m.is_hermitian(1e-8), "defect {}", m.hermiticity_defect());
        DensityMatrix(m)
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    pub fn maximally_mixed() -> Self {
        DensityMatrix(Mat4::identity().scale_re(0.25))
    }
}

impl std::ops::Index<(usize, usize)> for DensityMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

fn check_purity(r: f64) -> Result<()> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(Error::Domain(format!("r = {r} must lie in [0, 1]")))
    }
}

/// `exp(-i (ε I + λΔ σ_x) t) = e^{-iεt} (cos(λΔt) I - i sin(λΔt) σ_x)`.
pub fn single_qubit_propagator(eps: f64, lambda: f64, delta: f64, t: f64) -> Mat2 {
    let global = C64::from_polar(1.0, -eps * t);
    let (s, c) = (lambda * delta * t).sin_cos();
    let diag = global * c;
    let off = global * C64::new(0.0, -s);
    linalg::Mat([[diag, off], [off, diag]])
}

pub fn pair_propagator(p: &SystemParams, real: Realization, t: f64) -> Mat4 {
    kron(
        &single_qubit_propagator(p.eps_a, p.lambda, real.delta_a, t),
        &single_qubit_propagator(p.eps_b, p.lambda, real.delta_b, t),
    )
}

/// `r |ψ⁺⟩⟨ψ⁺| + (1 - r) I/4` with `|ψ⁺⟩ = (|00⟩ + |11⟩)/√2`.
pub fn initial_state(r: f64) -> Result<DensityMatrix> {
    check_purity(r)?;
    Ok(DensityMatrix(werner_matrix(r)))
}

pub(crate) fn werner_matrix(r: f64) -> Mat4 {
    let corner = (1.0 + r) / 4.0;
    let inner = (1.0 - r) / 4.0;
    let mut m = Mat4::diag([corner, inner, inner, corner]);
    m[(0, 3)] = C64::new(r / 2.0, 0.0);
    m[(3, 0)] = C64::new(r / 2.0, 0.0);
    m
}

pub fn evolve_realization(p: &SystemParams, real: Realization, t: f64) -> Result<DensityMatrix> {
    let rho0 = initial_state(p.r)?;
    Ok(DensityMatrix(evolve_matrix(p, real, t, rho0.matrix())))
}

/// Inner loop of the quadratures: no validation, no allocation.
#[inline]
pub(crate) fn evolve_matrix(p: &SystemParams, real: Realization, t: f64, rho0: &Mat4) -> Mat4 {
    if t == 0.0 {
        return *rho0;
    }
    linalg::conjugate_sandwich(&pair_propagator(p, real, t), rho0)
}

/// `ρ(r) = r ρ(1) + (1 - r) I/4`; the identity part is conjugation invariant.
pub fn mix_with_identity(bell_part: &Mat4, r: f64) -> Mat4 {
    let mut m = bell_part.scale_re(r);
    for i in 0..4 {
        m[(i, i)] += (1.0 - r) / 4.0;
    }
    m
}

/// The propagator as tabulated entry by entry for equal qubit energies `ε`.
pub fn explicit_pair_propagator(eps: f64, lambda: f64, real: Realization, t: f64) -> Mat4 {
    let (sa, ca) = (real.delta_a * lambda * t).sin_cos();
    let (sb, cb) = (real.delta_b * lambda * t).sin_cos();
    let i = C64::new(0.0, 1.0);
    let cc = C64::new(ca * cb, 0.0);
    let cs = -i * (ca * sb);
    let sc = -i * (cb * sa);
    let ss = C64::new(-sa * sb, 0.0);
    let m = linalg::Mat([
        [cc, cs, sc, ss],
        [cs, cc, ss, sc],
        [sc, ss, cc, cs],
        [ss, sc, cs, cc],
    ]);
    m.scale(C64::from_polar(1.0, -2.0 * t * eps))
}

/// The evolved Bell state (`r = 1`) written through `χ = λ t (Δa + Δb)`.
pub fn explicit_evolved_state(lambda: f64, real: Realization, t: f64) -> Mat4 {
    let chi = lambda * t * (real.delta_a + real.delta_b);
    let c2 = C64::new(chi.cos().powi(2) / 2.0, 0.0);
    let s2 = C64::new(chi.sin().powi(2) / 2.0, 0.0);
    let up = C64::new(0.0, (2.0 * chi).sin() / 4.0);
    let dn = -up;
    linalg::Mat([
        [c2, up, up, c2],
        [dn, s2, s2, dn],
        [dn, s2, s2, dn],
        [c2, up, up, c2],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// exp(M) by scaling and squaring a truncated Taylor series.
    fn expm2(m: &Mat2) -> Mat2 {
        let norm = m.frobenius_norm();
        let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
        let scaled = m.scale_re(0.5f64.powi(squarings));
        let mut term = Mat2::identity();
        let mut sum = Mat2::identity();
        for k in 1..30 {
            term = (term * scaled).scale_re(1.0 / k as f64);
            sum = sum + term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }

    fn hamiltonian2(eps: f64, lambda: f64, delta: f64) -> Mat2 {
        Mat2::identity().scale_re(eps) + linalg::pauli_x().scale_re(lambda * delta)
    }

    #[test]
    fn zero_field_propagator_is_identity() {
        assert_eq!(single_qubit_propagator(0.0, 1.0, 0.0, 3.0), Mat2::identity());
    }

    #[test]
    fn quarter_period_is_minus_i_sigma_x() {
        let u = single_qubit_propagator(0.0, 1.0, 1.0, PI / 2.0);
        let expected = linalg::pauli_x().scale(C64::new(0.0, -1.0));
        assert!(u.frobenius_distance(&expected) < 1e-15);
    }

    #[test]
    fn propagator_matches_matrix_exponential() {
        let (eps, lambda, delta, t) = (1.0, 0.5, 1.0, 5.0);
        let oracle = expm2(&hamiltonian2(eps, lambda, delta).scale(C64::new(0.0, -t)));
        let u = single_qubit_propagator(eps, lambda, delta, t);
        assert!(u.frobenius_distance(&oracle) < 1e-10);
    }

    #[test]
    fn pair_propagator_spot_values() {
        let p = SystemParams::new(0.0, 0.0, 0.5, 1.0).unwrap();
        assert_eq!(pair_propagator(&p, Realization::common(1.0), 0.0), Mat4::identity());
        let u = pair_propagator(&p, Realization::common(1.0), 1.0);
        // cos²(0.5)
        assert!((u[(0, 0)].re - 0.770_151_152_934_069_9).abs() < 1e-15);
        assert!(u[(0, 0)].im.abs() < 1e-15);

        // four-qubit-space exponential of the summed generator
        let ua = expm2(&hamiltonian2(0.0, 0.5, 1.0).scale(C64::new(0.0, -1.0)));
        let oracle = kron(&ua, &ua);
        assert!(u.frobenius_distance(&oracle) < 1e-10);
    }

    #[test]
    fn initial_state_entries() {
        let bell = initial_state(1.0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let corner = (i == 0 || i == 3) && (j == 0 || j == 3);
                let expected = if corner { 0.5 } else { 0.0 };
                assert_eq!(bell[(i, j)], C64::new(expected, 0.0));
            }
        }
        assert_eq!(*initial_state(0.0).unwrap().matrix(), Mat4::identity().scale_re(0.25));

        let half = initial_state(0.5).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| half[(i, i)].re).collect();
        assert_eq!(diag, vec![0.375, 0.125, 0.125, 0.375]);
        assert_eq!(half[(0, 3)].re, 0.25);
        assert_eq!(half[(3, 0)].re, 0.25);
        let eig = herm_eig4(half.matrix()).unwrap().values;
        let expected = [0.625, 0.125, 0.125, 0.125];
        for (a, b) in eig.iter().zip(expected) {
            assert!((a - b).abs() < 1e-14);
        }

        assert!(matches!(initial_state(1.5), Err(Error::Domain(_))));
        assert!(matches!(initial_state(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn evolved_state_spot_value() {
        let p = SystemParams::new(0.0, 0.0, 0.5, 1.0).unwrap();
        let rho = evolve_realization(&p, Realization::common(1.0), 1.0).unwrap();
        let expected = 1f64.cos().powi(2) / 2.0;
        assert!((rho[(0, 0)].re - expected).abs() < 1e-12);
        assert!((expected - 0.145_963).abs() < 1e-6);
        assert_eq!(
            evolve_realization(&p, Realization::common(1.0), 0.0).unwrap(),
            initial_state(1.0).unwrap()
        );
    }

    #[test]
    fn explicit_propagator_and_state_match_pipeline() {
        let p = SystemParams::new(0.7, 0.7, 0.9, 1.0).unwrap();
        for &(da, db, t) in &[(1.0, 1.0, 2.3), (0.3, -1.2, 4.1), (2.0, 0.5, 0.7)] {
            let real = Realization::new(da, db);
            let u = pair_propagator(&p, real, t);
            assert!(u.frobenius_distance(&explicit_pair_propagator(0.7, 0.9, real, t)) < 1e-12);
            let rho = evolve_realization(&p, real, t).unwrap();
            let closed = explicit_evolved_state(0.9, real, t);
            assert!(rho.matrix().frobenius_distance(&closed) < 1e-10);
        }
    }

    fn arb_params() -> impl Strategy<Value = (SystemParams, Realization, f64)> {
        (
            -3.0..3.0f64,
            -3.0..3.0f64,
            0.0..2.0f64,
            0.0..=1.0f64,
            -3.0..3.0f64,
            -3.0..3.0f64,
            0.0..20.0f64,
        )
            .prop_map(|(ea, eb, l, r, da, db, t)| {
                (
                    SystemParams::new(ea, eb, l, r).unwrap(),
                    Realization::new(da, db),
                    t,
                )
            })
    }

    proptest! {
        #[test]
        fn propagator_is_unitary((p, real, t) in arb_params()) {
            prop_assert!(pair_propagator(&p, real, t).is_unitary(TOL.unitarity));
        }

        #[test]
        fn bell_state_stays_pure((p, real, t) in arb_params()) {
            let p = SystemParams { r: 1.0, ..p };
            let rho = *evolve_realization(&p, real, t).unwrap().matrix();
            prop_assert!(((rho * rho).trace().re - 1.0).abs() < 1e-10);
        }

        #[test]
        fn r_linearity((p, real, t) in arb_params()) {
            let pure = SystemParams { r: 1.0, ..p };
            let bell = *evolve_realization(&pure, real, t).unwrap().matrix();
            let rho = *evolve_realization(&p, real, t).unwrap().matrix();
            prop_assert!(rho.frobenius_distance(&mix_with_identity(&bell, p.r)) < 1e-12);
        }

        #[test]
        fn qubit_energies_cancel((p, real, t) in arb_params()) {
            let flat = SystemParams { eps_a: 0.0, eps_b: 0.0, ..p };
            let a = *evolve_realization(&p, real, t).unwrap().matrix();
            let b = *evolve_realization(&flat, real, t).unwrap().matrix();
            prop_assert!(a.frobenius_distance(&b) < 1e-12);
        }

        #[test]
        fn state_is_periodic_in_chi((p, real, t) in arb_params()) {
            let sum = real.delta_a + real.delta_b;
            prop_assume!(p.lambda > 0.05 && sum.abs() > 0.05);
            let period = PI / (p.lambda * sum.abs());
            let a = *evolve_realization(&p, real, t).unwrap().matrix();
            let b = *evolve_realization(&p, real, t + period).unwrap().matrix();
            prop_assert!(a.frobenius_distance(&b) < 1e-10);
        }

        #[test]
        fn explicit_form_equivalence((p, real, t) in arb_params()) {
            let p = SystemParams { r: 1.0, ..p };
            let rho = *evolve_realization(&p, real, t).unwrap().matrix();
            prop_assert!(rho.frobenius_distance(&explicit_evolved_state(p.lambda, real, t)) < 1e-10);
        }
    }
}
