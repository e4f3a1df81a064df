//! The odd smooth profile used by the lower-bound test densities.
//!
//! With the mollifier psi(v) = exp(-1/(1-v^2)) on (-1, 1) and the odd square
//! wave H = -1 on (-1, 0), +1 on (0, 1), the profile is
//!
//! profile(u) = (H * psi)(2u),
//!
//! an odd C-infinity function supported on [-1, 1] with
//! |profile| <= int psi <= 2/e. It has no closed form, so it is tabulated
//! once (adaptive quadrature of the two convolution windows per table point)
//! and queried through cubic interpolation.

use crate::quad::adaptive_simpson;
use std::sync::OnceLock;

/// Loose uniform bound on |profile|: 2/e.
pub const PROFILE_SUP_BOUND: f64 = 2.0 / std::f64::consts::E;

const TABLE_CELLS: usize = 4096;
const WINDOW_TOL: f64 = 1e-11;

/// The mollifier psi, a C-infinity bump on (-1, 1).
pub fn mollifier(v: f64) -> f64 {
    if v <= -1.0 || v >= 1.0 {
        return 0.0;
    }
    (-1.0 / (1.0 - v * v)).exp()
}

/// int_a^b psi, clipped to the support.
fn mollifier_mass(a: f64, b: f64) -> f64 {
    let lo = a.max(-1.0);
    let hi = b.min(1.0);
    if lo >= hi {
        return 0.0;
    }
    adaptive_simpson(mollifier, lo, hi, WINDOW_TOL)
}

/// (H * psi)(y) for y >= 0: mass of psi in the positive window minus the
/// mass in the negative window.
fn convolution_at(y: f64) -> f64 {
    mollifier_mass(y - 1.0, y.min(1.0)) - mollifier_mass(y.min(1.0), 1.0)
}

fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=TABLE_CELLS)
            .map(|i| convolution_at(2.0 * i as f64 / TABLE_CELLS as f64))
            .collect()
    })
}

/// Four-point Lagrange interpolation on the table at u in [0, 1].
fn interpolate(u: f64) -> f64 {
    let tab = table();
    let x = u * TABLE_CELLS as f64;
    let cell = (x as usize).min(TABLE_CELLS - 1);
    // Stencil i0..i0+3 clamped inside the table.
    let i0 = cell.saturating_sub(1).min(TABLE_CELLS - 3);
    let mut acc = 0.0;
    for a in 0..4 {
        let xa = (i0 + a) as f64;
        let mut basis = 1.0;
        for b in 0..4 {
            if a != b {
                let xb = (i0 + b) as f64;
                basis *= (x - xb) / (xa - xb);
            }
        }
        acc += basis * tab[i0 + a];
    }
    acc
}

/// The odd profile (H * psi)(2u); zero outside [-1, 1].
pub fn bump_profile(u: f64) -> f64 {
    if u == 0.0 || u.abs() >= 1.0 {
        return 0.0;
    }
    if u < 0.0 {
        -interpolate(-u)
    } else {
        interpolate(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{composite_integrate, GaussRule};

    #[test]
    fn profile_at_half_matches_the_mollifier_mass() {
        // At u = 1/2 the negative window is empty and the positive window is
        // all of (0, 1): profile(1/2) = int_0^1 psi.
        let rule = GaussRule::new(16);
        let oracle = composite_integrate(&rule, 0.0, 1.0, 64, mollifier);
        let got = bump_profile(0.5);
        assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
        assert!((got - 0.221997).abs() < 2e-6);
    }

    #[test]
    fn profile_is_odd_and_vanishes_at_the_edges() {
        assert_eq!(bump_profile(0.0), 0.0);
        assert_eq!(bump_profile(1.0), 0.0);
        assert_eq!(bump_profile(-1.0), 0.0);
        assert_eq!(bump_profile(2.3), 0.0);
        for i in 0..=1000 {
            let u = i as f64 / 1000.0;
            let asym = (bump_profile(u) + bump_profile(-u)).abs();
            assert!(asym < 1e-9, "u={u}");
        }
    }

    #[test]
    fn profile_respects_the_uniform_bound() {
        for i in 0..=4096 {
            let u = i as f64 / 4096.0;
            assert!(bump_profile(u).abs() <= PROFILE_SUP_BOUND);
        }
    }

    #[test]
    fn profile_integrates_to_zero() {
        let rule = GaussRule::new(8);
        let integral = composite_integrate(&rule, -1.0, 1.0, 256, bump_profile);
        assert!(integral.abs() < 1e-8);
    }

    #[test]
    fn interpolation_error_is_small_between_nodes() {
        // Query off the table nodes and compare with a direct window
        // computation.
        for &u in &[0.1234567, 0.3330001, 0.66600017, 0.9871111] {
            let direct = convolution_at(2.0 * u);
            let got = bump_profile(u);
            assert!((got - direct).abs() < 1e-10, "u={u}: {got} vs {direct}");
        }
    }
}
