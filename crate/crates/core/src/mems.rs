//! Maximally entangled mixed X-states.
//!
//! For a fixed concurrence `C = 2|γ|` the largest linear entropy any N-qubit
//! X-state can reach is attained by
//!
//! ```text
//! a_1 = b_1 = f(γ),  z_1 = γ,  a_2 = … = a_n = g(γ),  everything else 0
//! ```
//!
//! with `f = g = 1/(n+1)` while `|γ| ≤ 1/(n+1)`, and `f = |γ|`,
//! `g = (1 - 2|γ|)/(n-1)` above that. Any entangled X-state can be pushed
//! towards this family by [`bar_transform`], which keeps the concurrence and
//! never lowers the entropy.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{gm_concurrence, linear_entropy};
use crate::xstate::{block_count, check_qubits, XState};

/// Slack allowed above `|γ| = 1/2` before a value is rejected. Covers
/// concurrences that round to slightly above 1.
pub const GAMMA_SLACK: f64 = 1e-12;

/// Largest N for which [`critical_entropy_exact`] is available.
pub const EXACT_CRITICAL_MAX_QUBITS: u32 = 30;

fn check_gamma(gamma_abs: f64) -> Result<f64> {
    if !(0.0..=0.5 + GAMMA_SLACK).contains(&gamma_abs) {
        return Err(Error::Domain(format!("|gamma| = {gamma_abs} outside [0, 1/2]")));
    }
    Ok(gamma_abs.min(0.5))
}

/// `|γ|` at which the family switches branch, `1/(n+1)`.
pub fn branch_point(n_qubits: u32) -> f64 {
    1.0 / (block_count(n_qubits) + 1) as f64
}

/// Population of the entangled pair, `f(γ)`.
pub fn f_value(n_qubits: u32, gamma_abs: f64) -> f64 {
    let knee = branch_point(n_qubits);
    if gamma_abs <= knee {
        knee
    } else {
        gamma_abs
    }
}

/// Population of each of the remaining upper diagonal entries, `g(γ)`.
pub fn g_value(n_qubits: u32, gamma_abs: f64) -> f64 {
    let knee = branch_point(n_qubits);
    if gamma_abs <= knee {
        knee
    } else {
        (1.0 - 2.0 * gamma_abs) / (block_count(n_qubits) - 1) as f64
    }
}

/// Coefficients of the entropy quadratic in `t = x + |γ|` for the
/// equal-population family: `S = d/(d-1) (A t² + B t + C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub blocks: usize,
}

impl BoundaryCoefficients {
    pub fn new(n_qubits: u32, gamma_abs: f64) -> Result<Self> {
        check_qubits(n_qubits)?;
        let gamma_abs = check_gamma(gamma_abs)?;
        let blocks = block_count(n_qubits);
        let m = (blocks - 1) as f64;
        let n = blocks as f64;
        Ok(Self {
            a: -2.0 * (n + 1.0) / m,
            b: 4.0 / m,
            c: 1.0 - 1.0 / m - 2.0 * gamma_abs * gamma_abs,
            blocks,
        })
    }

    /// `d/(d-1)` for `d = 2n`.
    pub fn prefactor(&self) -> f64 {
        let d = (2 * self.blocks) as f64;
        d / (d - 1.0)
    }

    pub fn entropy_at(&self, t: f64) -> f64 {
        self.prefactor() * (self.a * t * t + self.b * t + self.c)
    }

    /// Unconstrained maximiser `-B/(2A)`.
    pub fn vertex(&self) -> f64 {
        -self.b / (2.0 * self.a)
    }
}

/// One member of the maximally entangled mixed X-state family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MemsPoint {
    pub n_qubits: u32,
    #[serde(serialize_with = "serialize_complex")]
    pub gamma: Complex64,
    pub f_value: f64,
    pub g_value: f64,
    pub concurrence: f64,
    pub entropy: f64,
}

fn serialize_complex<S: serde::Serializer>(c: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [c.re, c.im].serialize(s)
}

/// Builds the family member with coherence `gamma`. Only `|gamma|` enters
/// the populations; the phase is kept on `z_1`.
pub fn mems_state(n_qubits: u32, gamma: Complex64) -> Result<(MemsPoint, XState)> {
    check_qubits(n_qubits)?;
    let gamma_abs = check_gamma(gamma.norm())?;
    let n = block_count(n_qubits);
    let f = f_value(n_qubits, gamma_abs);
    let g = g_value(n_qubits, gamma_abs);

    let mut a = vec![g; n];
    a[0] = f;
    let mut b = vec![0.0; n];
    b[0] = f;
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    z[0] = gamma;
    let state = XState::new(n_qubits, a, b, z)?;

    let point = MemsPoint {
        n_qubits,
        gamma,
        f_value: f,
        g_value: g,
        concurrence: 2.0 * gamma.norm(),
        entropy: boundary_entropy(n_qubits, gamma_abs)?,
    };
    Ok((point, state))
}

/// Largest linear entropy of an X-state with concurrence `2·gamma_abs`.
pub fn boundary_entropy(n_qubits: u32, gamma_abs: f64) -> Result<f64> {
    let coeffs = BoundaryCoefficients::new(n_qubits, gamma_abs)?;
    Ok(coeffs.entropy_at(f_value(n_qubits, gamma_abs.min(0.5))))
}

/// Entropy above which no X-state is genuinely multipartite entangled:
/// `2^(2N-1) / ((2^N - 1)(2^(N-1) + 1))`.
pub fn critical_entropy(n_qubits: u32) -> Result<f64> {
    if n_qubits < 2 {
        return Err(Error::Domain(format!("need at least 2 qubits, got {n_qubits}")));
    }
    // 2n²/((2n-1)(n+1)) with n = 2^(N-1), rearranged so large N stays finite.
    let inv_n = 0.5f64.powi(n_qubits as i32 - 1);
    Ok(1.0 / ((1.0 - 0.5 * inv_n) * (1.0 + inv_n)))
}

/// [`critical_entropy`] as a reduced fraction `(numerator, denominator)`.
pub fn critical_entropy_exact(n_qubits: u32) -> Result<(u64, u64)> {
    if n_qubits < 2 {
        return Err(Error::Domain(format!("need at least 2 qubits, got {n_qubits}")));
    }
    if n_qubits > EXACT_CRITICAL_MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "exact critical entropy is available up to N = {EXACT_CRITICAL_MAX_QUBITS}"
        )));
    }
    let num = 1u64 << (2 * n_qubits - 1);
    let den = ((1u64 << n_qubits) - 1) * ((1u64 << (n_qubits - 1)) + 1);
    let g = gcd(num, den);
    Ok((num / g, den / g))
}

fn gcd(mut x: u64, mut y: u64) -> u64 {
    while y != 0 {
        (x, y) = (y, x % y);
    }
    x
}

/// Entropy of the equal-population family as a function of `t = x + |γ|`,
/// sampled at `samples` evenly spaced points of the allowed range
/// `[|γ|, 1/2]`.
pub fn entropy_vs_diagonal_curve(n_qubits: u32, gamma_abs: f64, samples: usize) -> Result<Vec<(f64, f64)>> {
    if samples < 2 {
        return Err(Error::Domain(format!("need at least 2 samples, got {samples}")));
    }
    let coeffs = BoundaryCoefficients::new(n_qubits, gamma_abs)?;
    let lo = gamma_abs.min(0.5);
    let step = (0.5 - lo) / (samples - 1) as f64;
    Ok((0..samples)
        .map(|k| {
            let t = if k + 1 == samples {
                0.5
            } else {
                lo + k as f64 * step
            };
            (t, coeffs.entropy_at(t))
        })
        .collect())
}

/// Result of [`bar_transform`].
#[derive(Debug, Clone, PartialEq)]
pub struct BarTransform {
    pub state: XState,
    /// 0-based block of the input that was swapped into block 0 before the
    /// transform (0 when no relabelling was needed).
    pub source_block: usize,
}

/// Moves every population except the entangled pair into the upper half and
/// drops all other coherences:
///
/// ```text
/// ā_1 = a_1, b̄_1 = b_1, z̄_1 = |z_1| - Σ_{j≠1} sqrt(a_j b_j)
/// ā_i = a_i + b_i, b̄_i = z̄_i = 0            (i ≥ 2)
/// ```
///
/// The block attaining the concurrence is relabelled to block 1 first.
/// The output has the same concurrence and at least the same entropy.
pub fn bar_transform(state: &XState) -> Result<BarTransform> {
    let c = gm_concurrence(state);
    let Some(source_block) = c.block() else {
        return Err(Error::Domain(
            "transform is defined only for genuinely entangled states".into(),
        ));
    };
    let mut s = state.clone();
    s.swap_blocks(0, source_block);

    let n = s.blocks();
    let rest: f64 = (1..n).map(|j| s.coherence_ceiling(j)).sum();
    let mut a = Vec::with_capacity(n);
    a.push(s.a()[0]);
    a.extend((1..n).map(|i| s.a()[i] + s.b()[i]));
    let mut b = vec![0.0; n];
    b[0] = s.b()[0];
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    z[0] = Complex64::new(s.z()[0].norm() - rest, 0.0);

    Ok(BarTransform {
        state: XState::new(s.n_qubits(), a, b, z)?,
        source_block,
    })
}

/// Entropy gain of [`bar_transform`], for diagnostics.
pub fn bar_entropy_gain(state: &XState) -> Result<f64> {
    let out = bar_transform(state)?;
    Ok(linear_entropy(&out.state) - linear_entropy(state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::purity;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coefficients_open_downward() {
        for n in 2..=24 {
            let c = BoundaryCoefficients::new(n, 0.1).unwrap();
            assert!(c.a < 0.0);
            assert_abs_diff_eq!(c.vertex(), branch_point(n), epsilon = 1e-15);
        }
        assert!(BoundaryCoefficients::new(1, 0.1).is_err());
    }

    #[test]
    fn munro_point() {
        let (p, s) = mems_state(2, Complex64::new(1.0 / 3.0, 0.0)).unwrap();
        assert_abs_diff_eq!(p.entropy, 16.0 / 27.0, epsilon = 1e-15);
        assert_abs_diff_eq!(p.concurrence, 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(s.a(), &[1.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(s.b(), &[1.0 / 3.0, 0.0]);
        assert_abs_diff_eq!(purity(&s), 5.0 / 9.0, epsilon = 1e-15);
    }

    #[test]
    fn endpoints() {
        for n in 2..=10 {
            let (p, s) = mems_state(n, Complex64::new(0.5, 0.0)).unwrap();
            assert_eq!(s, XState::ghz(n).unwrap());
            assert_abs_diff_eq!(p.entropy, 0.0, epsilon = 1e-14);
            assert_eq!(p.concurrence, 1.0);

            let (p, s) = mems_state(n, Complex64::new(0.0, 0.0)).unwrap();
            assert_abs_diff_eq!(p.entropy, critical_entropy(n).unwrap(), epsilon = 1e-14);
            assert_eq!(p.concurrence, 0.0);
            assert!(s.validate(1e-12).unwrap().is_ok());
        }
        assert!(matches!(
            mems_state(3, Complex64::new(0.4, 0.4)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn complex_gamma_keeps_phase() {
        let gamma = Complex64::from_polar(0.3, 0.9);
        let (p, s) = mems_state(3, gamma).unwrap();
        assert_eq!(s.z()[0], gamma);
        assert_abs_diff_eq!(p.concurrence, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(linear_entropy(&s), p.entropy, epsilon = 1e-12);
    }

    #[test]
    fn boundary_examples() {
        assert_abs_diff_eq!(
            boundary_entropy(2, 1.0 / 3.0).unwrap(),
            16.0 / 27.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(boundary_entropy(2, 0.0).unwrap(), 8.0 / 9.0, epsilon = 1e-15);
        for n in 2..=12 {
            assert_abs_diff_eq!(boundary_entropy(n, 0.5).unwrap(), 0.0, epsilon = 1e-14);
        }
        assert!(boundary_entropy(3, 0.51).is_err());
        assert!(boundary_entropy(3, -0.01).is_err());
        assert_eq!(
            boundary_entropy(3, 0.5 + 1e-13).unwrap(),
            boundary_entropy(3, 0.5).unwrap()
        );
    }

    #[test]
    fn branch_continuity() {
        for n in 2..=12 {
            let knee = branch_point(n);
            let above = knee + 1e-13;
            assert_abs_diff_eq!(f_value(n, knee), f_value(n, above), epsilon = 1e-12);
            assert_abs_diff_eq!(g_value(n, knee), g_value(n, above), epsilon = 1e-12);
        }
    }

    #[test]
    fn critical_values() {
        assert_eq!(critical_entropy_exact(2).unwrap(), (8, 9));
        assert_eq!(critical_entropy_exact(3).unwrap(), (32, 35));
        assert_eq!(critical_entropy_exact(10).unwrap(), (524_288, 1023 * 513));
        assert_abs_diff_eq!(critical_entropy(2).unwrap(), 8.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(critical_entropy(3).unwrap(), 32.0 / 35.0, epsilon = 1e-15);
        assert_abs_diff_eq!(critical_entropy(10).unwrap(), 0.999_027, epsilon = 1e-6);
        assert!(critical_entropy(1).is_err());
        assert!(critical_entropy_exact(31).is_err());
        for n in 2..=EXACT_CRITICAL_MAX_QUBITS {
            let (num, den) = critical_entropy_exact(n).unwrap();
            assert_abs_diff_eq!(
                num as f64 / den as f64,
                critical_entropy(n).unwrap(),
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn curve_argmax() {
        let argmax = |n, g| {
            let curve = entropy_vs_diagonal_curve(n, g, 100_001).unwrap();
            curve
                .iter()
                .copied()
                .fold(
                    (f64::NAN, f64::NEG_INFINITY),
                    |best, p| if p.1 > best.1 { p } else { best },
                )
                .0
        };
        assert_abs_diff_eq!(argmax(3, 0.1), 0.2, epsilon = 1e-5);
        assert_eq!(argmax(3, 0.3), 0.3);
        let c = entropy_vs_diagonal_curve(3, 0.1, 2).unwrap();
        assert_eq!(c[0].0, 0.1);
        assert_eq!(c[1].0, 0.5);
        assert!(entropy_vs_diagonal_curve(3, 0.1, 1).is_err());
    }

    #[test]
    fn bar_fixes_ghz() {
        for n in 2..=6 {
            let ghz = XState::ghz(n).unwrap();
            let out = bar_transform(&ghz).unwrap();
            assert_eq!(out.state, ghz);
            assert_eq!(out.source_block, 0);
        }
    }

    #[test]
    fn bar_worked_example() {
        let s = XState::from_real(2, vec![0.35, 0.05], vec![0.5, 0.1], vec![0.4, 0.0]).unwrap();
        let out = bar_transform(&s).unwrap().state;
        assert_abs_diff_eq!(out.a()[0], 0.35, epsilon = 1e-15);
        assert_abs_diff_eq!(out.a()[1], 0.15, epsilon = 1e-15);
        assert_eq!(out.b(), &[0.5, 0.0]);
        assert_abs_diff_eq!(out.z()[0].re, 0.329_289_321_881_345_2, epsilon = 1e-12);
        assert_eq!(out.z()[1].norm(), 0.0);
        assert_abs_diff_eq!(
            gm_concurrence(&out).value,
            0.658_578_643_762_690_5,
            epsilon = 1e-12
        );
        assert!(bar_entropy_gain(&s).unwrap() > 0.0);
    }

    #[test]
    fn bar_relabels_later_block() {
        let s = XState::from_real(
            3,
            vec![0.05, 0.1, 0.3, 0.05],
            vec![0.1, 0.05, 0.3, 0.05],
            vec![0.0, 0.0, 0.29, 0.0],
        )
        .unwrap();
        let out = bar_transform(&s).unwrap();
        assert_eq!(out.source_block, 2);
        assert_eq!(out.state.a()[0], 0.3);
        assert_eq!(out.state.b()[0], 0.3);
        assert_abs_diff_eq!(
            gm_concurrence(&out.state).value,
            gm_concurrence(&s).value,
            epsilon = 1e-12
        );
    }

    #[test]
    fn bar_rejects_separable() {
        assert!(matches!(
            bar_transform(&XState::maximally_mixed(3).unwrap()),
            Err(Error::Domain(_))
        ));
    }
}
