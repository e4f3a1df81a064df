//! Minimal-norm kernels of arbitrary order on [0, 1].
//!
//! The order-m kernel is the polynomial
//!
//! w_m(u) = sum_{r=0}^m phi_r(0) phi_r(u),   u in [0, 1],
//!
//! where phi_r(u) = sqrt(2r+1) Q_r(2u-1) and Q_r is the Legendre polynomial
//! of degree r on [-1, 1]. The phi_r form an orthonormal basis of
//! L2([0, 1]), which gives the exact identities
//!
//! ||w_m||_2 = m+1,   ||w_m||_inf = w_m(0) = (m+1)^2,
//!
//! and w_m integrates to 1 while annihilating the moments u^r, r = 1..m.
//! The same polynomial solves the Hilbert system H_m a = e_0 in monomial
//! coordinates, which serves as an independent (exact rational) oracle for
//! small orders.

use crate::error::{Error, Result};
use crate::quad::GaussRule;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Largest order accepted by [`OrderedKernel::of_order`].
///
/// Beyond this the monomial coefficients (which grow like 16^m) lose all
/// precision in f64 and no bandwidth family at realistic sample sizes ever
/// requests such an order.
pub const MAX_ORDER: usize = 40;

/// Largest order for which the Hilbert system is solved as an oracle; the
/// Hilbert matrix condition number passes 1e10 shortly after.
pub const MAX_HILBERT_ORDER: usize = 8;

/// Legendre polynomial Q_r(x) on [-1, 1] by the three-term recurrence.
pub fn legendre_poly(r: usize, x: f64) -> f64 {
    if r == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = x;
    for k in 1..r {
        let next = ((2 * k + 1) as f64 * x * curr - k as f64 * prev) / (k + 1) as f64;
        prev = curr;
        curr = next;
    }
    curr
}

/// Orthonormal shifted Legendre basis function phi_r(u) = sqrt(2r+1) Q_r(2u-1).
pub fn shifted_legendre(r: usize, u: f64) -> f64 {
    ((2 * r + 1) as f64).sqrt() * legendre_poly(r, 2.0 * u - 1.0)
}

/// Univariate kernel of order m on [0, 1].
///
/// `coeffs` holds the monomial coefficients (a_0, ..., a_m); evaluation goes
/// through the Legendre recurrence instead, which stays accurate at orders
/// where the monomial form has already cancelled away all precision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderedKernel {
    order: usize,
    coeffs: Vec<f64>,
}

/// Binomial coefficients C(n, k) for n <= nmax as f64 (exact while < 2^53).
fn pascal_triangle(nmax: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let mut row = vec![1.0; n + 1];
        for k in 1..n {
            row[k] = rows[n - 1][k - 1] + rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}

impl OrderedKernel {
    /// Construct w_m. Fails with `OrderTooLarge` for m > [`MAX_ORDER`].
    pub fn of_order(order: usize) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order,
                max: MAX_ORDER,
            });
        }
        // Monomial form of the shifted Legendre expansion:
        // a_k = (-1)^k sum_{r=k}^m (2r+1) C(r,k) C(r+k,k).
        let binom = pascal_triangle(2 * order);
        let mut coeffs = vec![0.0; order + 1];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = 0.0;
            for r in k..=order {
                acc += (2 * r + 1) as f64 * binom[r][k] * binom[r + k][k];
            }
            *c = if k % 2 == 0 { acc } else { -acc };
        }
        Ok(OrderedKernel { order, coeffs })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Monomial coefficients (a_0, ..., a_m).
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficients in the orthonormal basis: b_r = phi_r(0) = (-1)^r sqrt(2r+1).
    pub fn legendre_coeffs(&self) -> Vec<f64> {
        (0..=self.order)
            .map(|r| {
                let b = ((2 * r + 1) as f64).sqrt();
                if r % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .collect()
    }

    /// ||w_m||_inf = (m+1)^2, attained at u = 0.
    pub fn sup_norm(&self) -> f64 {
        ((self.order + 1) * (self.order + 1)) as f64
    }

    /// ||w_m||_2 = m+1.
    pub fn l2_norm(&self) -> f64 {
        (self.order + 1) as f64
    }

    /// Evaluate the kernel; zero outside [0, 1].
    ///
    /// Inside the support this accumulates
    /// sum_r (-1)^r (2r+1) Q_r(2u-1)
    /// (the radicals of phi_r(0) phi_r(u) cancel analytically), so every term
    /// is bounded by 2r+1 and the evaluation error stays near machine
    /// precision for all supported orders.
    pub fn eval(&self, u: f64) -> f64 {
        if !(0.0..=1.0).contains(&u) {
            return 0.0;
        }
        let x = 2.0 * u - 1.0;
        let mut acc = 1.0; // r = 0 term
        if self.order == 0 {
            return acc;
        }
        let mut prev = 1.0;
        let mut curr = x;
        let mut sign = -1.0;
        acc += sign * 3.0 * curr;
        for k in 1..self.order {
            let next = ((2 * k + 1) as f64 * x * curr - k as f64 * prev) / (k + 1) as f64;
            prev = curr;
            curr = next;
            sign = -sign;
            acc += sign * (2 * (k + 1) + 1) as f64 * curr;
        }
        acc
    }

    /// Real roots of the kernel inside (0, 1), ascending.
    ///
    /// Sign changes are located on a fine scan and polished by bisection;
    /// this is where |w|^p loses smoothness, so the L_p quadrature splits
    /// its panels here.
    fn interior_roots(&self) -> Vec<f64> {
        const SCAN: usize = 4096;
        let mut roots = Vec::new();
        let mut prev_u = 0.0;
        let mut prev_v = self.eval(0.0);
        for i in 1..=SCAN {
            let u = i as f64 / SCAN as f64;
            let v = self.eval(u);
            if prev_v == 0.0 {
                if prev_u > 0.0 {
                    roots.push(prev_u);
                }
            } else if v != 0.0 && prev_v.signum() != v.signum() {
                let (mut lo, mut hi) = (prev_u, u);
                let mut flo = prev_v;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let fmid = self.eval(mid);
                    if fmid == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if flo.signum() == fmid.signum() {
                        lo = mid;
                        flo = fmid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev_u = u;
            prev_v = v;
        }
        roots
    }

    /// L_p norm on [0, 1] for p >= 1.
    ///
    /// p = 2 comes from the orthonormal expansion in closed form; other
    /// exponents integrate |w|^p by composite Gauss panels split at the
    /// kernel's sign changes.
    pub fn lp_norm(&self, p: f64) -> f64 {
        assert!(p >= 1.0, "L_p norm needs p >= 1, got {p}");
        if p == 2.0 {
            let sum_sq: f64 = (0..=self.order).map(|r| (2 * r + 1) as f64).sum();
            return sum_sq.sqrt();
        }
        let mut breaks = vec![0.0];
        breaks.extend(self.interior_roots());
        breaks.push(1.0);
        let rule = GaussRule::new(32);
        let mut acc = 0.0;
        for pair in breaks.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b <= a {
                continue;
            }
            let panels = ((b - a) * 16.0).ceil().max(4.0) as usize;
            acc += crate::quad::composite_integrate(&rule, a, b, panels, |u| {
                self.eval(u).abs().powf(p)
            });
        }
        acc.powf(1.0 / p)
    }
}

/// Exact monomial coefficients a = H^{-1} e_0 from the Hilbert system,
/// solved in rational arithmetic. Independent oracle for
/// [`OrderedKernel::of_order`]; capped at order [`MAX_HILBERT_ORDER`].
pub fn hilbert_coeffs(order: usize) -> Result<Vec<f64>> {
    if order > MAX_HILBERT_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            max: MAX_HILBERT_ORDER,
        });
    }
    let n = order + 1;
    let rat = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
    // Augmented system [H | e_0].
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> =
                (0..n).map(|j| rat(1, (i + j + 1) as i64)).collect();
            row.push(if i == 0 { rat(1, 1) } else { rat(0, 1) });
            row
        })
        .collect();
    // Gaussian elimination with partial pivoting (exact, pivoting only to
    // avoid a zero pivot).
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| a[r][col].abs().cmp(&a[s][col].abs()))
            .expect("nonempty column");
        a.swap(col, pivot_row);
        assert!(!a[col][col].is_zero(), "Hilbert matrix is nonsingular");
        let pivot = a[col][col].clone();
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            if factor.is_zero() {
                continue;
            }
            for c in col..=n {
                let delta = &factor * &a[col][c];
                a[r][c] = &a[r][c] - delta;
            }
        }
    }
    Ok((0..n)
        .map(|r| {
            let x = &a[r][n] / &a[r][r];
            x.to_f64().expect("coefficient fits in f64")
        })
        .collect())
}
