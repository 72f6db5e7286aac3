//! Cosine integral, shifted sine integral, and the resolvent combination
//! entering the kernel m_lambda.
//!
//! Conventions:
//!   Ci(r) = -int_r^inf cos(t)/t dt          (returned by `cosint`)
//!   si(r) = Si(r) - pi/2,  Si(r) = int_0^r sin(t)/t dt
//!
//! The resolvent combination pairs si with the *opposite-sign* cosine
//! integral int_r^inf cos(t)/t dt = -Ci(r):
//!   w(r) = cos(r) si(r) - sin(r) Ci(r),
//! which is what the boundary values of (sqrt(-Laplace) - lambda -+ i0)^{-1}
//! require (cross-checked against a principal-value Fourier oracle; the
//! sign is easy to get wrong because both variants obey the same small-r
//! limit and (1+r)^{-1} envelope).
//!
//! Two branches: power series below `SWITCH_RADIUS`, and the auxiliary
//! functions f, g obtained from a Lentz continued fraction for
//! e^{ir} E_1(ir) = g(r) - i f(r) above it. With Ci = f sin - g cos and
//! si = -f cos - g sin, the combination collapses to w(r) = -f(r):
//! smooth, monotone, ~ -1/r, no cancellation at large r.

use crate::error::{Error, Result};
use crate::scalar::{rabs, ComplexField, Cplx, Real};

/// Euler-Mascheroni constant, 20 significant digits.
pub const EULER_GAMMA: f64 = 0.57721566490153286061;

/// Radius separating the power-series branch from the continued-fraction branch.
pub const SWITCH_RADIUS: f64 = 12.0;

/// Radius above which w(r) is assembled from the auxiliary functions directly.
const W_ASYMPTOTIC_RADIUS: f64 = 20.0;

/// Value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult<T> {
    pub value: T,
    pub est_error: T,
}

/// Ci(r) for r > 0.
pub fn cosint<T: Real>(r: T) -> Result<SpecFunResult<T>> {
    if r <= T::zero() {
        return Err(Error::Domain(format!(
            "cosint requires r > 0, got {}",
            r.to_f64_lossy()
        )));
    }
    if r < T::of(SWITCH_RADIUS) {
        Ok(ci_series(r))
    } else {
        let (f, g, err) = aux_fg(r);
        let value = f * ComplexField::sin(r) - g * ComplexField::cos(r);
        Ok(SpecFunResult { value, est_error: err })
    }
}

/// si(r) = Si(r) - pi/2 for r >= 0.
pub fn sinint_si<T: Real>(r: T) -> Result<SpecFunResult<T>> {
    if r < T::zero() {
        return Err(Error::Domain(format!(
            "sinint_si requires r >= 0, got {}",
            r.to_f64_lossy()
        )));
    }
    if r == T::zero() {
        return Ok(SpecFunResult {
            value: -T::frac_pi_2(),
            est_error: T::default_epsilon(),
        });
    }
    if r < T::of(SWITCH_RADIUS) {
        Ok(si_series(r))
    } else {
        let (f, g, err) = aux_fg(r);
        let value = -f * ComplexField::cos(r) - g * ComplexField::sin(r);
        Ok(SpecFunResult { value, est_error: err })
    }
}

/// w(r) = cos(r) si(r) - sin(r) Ci(r) for r > 0 (equal to -f(r)).
pub fn resolvent_combo<T: Real>(r: T) -> Result<SpecFunResult<T>> {
    if r <= T::zero() {
        return Err(Error::Domain(format!(
            "resolvent_combo requires r > 0, got {}",
            r.to_f64_lossy()
        )));
    }
    if r > T::of(W_ASYMPTOTIC_RADIUS) {
        let (f, _, err) = aux_fg(r);
        Ok(SpecFunResult {
            value: -f,
            est_error: err,
        })
    } else {
        let ci = cosint(r)?;
        let si = sinint_si(r)?;
        let s = ComplexField::sin(r);
        let c = ComplexField::cos(r);
        Ok(SpecFunResult {
            value: c * si.value - s * ci.value,
            est_error: rabs(s) * ci.est_error + rabs(c) * si.est_error + T::default_epsilon(),
        })
    }
}

/// Ci(r) = gamma + ln r + sum_{k>=1} (-1)^k r^{2k} / (2k (2k)!).
fn ci_series<T: Real>(r: T) -> SpecFunResult<T> {
    let r2 = r * r;
    let mut term_base = T::one(); // (-1)^k r^{2k} / (2k)!
    let mut sum = T::zero();
    let mut max_term = T::zero();
    let eps = T::default_epsilon();
    for k in 1..=120usize {
        let two_k = T::of_usize(2 * k);
        term_base *= -r2 / ((two_k - T::one()) * two_k);
        let term = term_base / two_k;
        sum += term;
        if rabs(term) > max_term {
            max_term = rabs(term);
        }
        if rabs(term) < eps * rabs(sum).max(eps) {
            break;
        }
    }
    let value = T::of(EULER_GAMMA) + ComplexField::ln(r) + sum;
    SpecFunResult {
        value,
        est_error: max_term * eps * T::of(8.0) + eps,
    }
}

/// Si(r) - pi/2 from the Si power series.
fn si_series<T: Real>(r: T) -> SpecFunResult<T> {
    let r2 = r * r;
    let mut term_base = r; // (-1)^k r^{2k+1} / (2k+1)!
    let mut sum = r;
    let mut max_term = r;
    let eps = T::default_epsilon();
    for k in 1..=120usize {
        let two_k = T::of_usize(2 * k);
        term_base *= -r2 / (two_k * (two_k + T::one()));
        let term = term_base / (two_k + T::one());
        sum += term;
        if rabs(term) > max_term {
            max_term = rabs(term);
        }
        if rabs(term) < eps * rabs(sum).max(eps) {
            break;
        }
    }
    SpecFunResult {
        value: sum - T::frac_pi_2(),
        est_error: max_term * eps * T::of(8.0) + eps,
    }
}

/// Auxiliary functions (f, g) with Ci = f sin - g cos, si = -f cos - g sin,
/// via the continued fraction for e^{ir} E_1(ir) = g - i f (modified Lentz).
/// Returns (f, g, error estimate). Reliable for r >= ~4.
fn aux_fg<T: Real>(r: T) -> (T, T, T) {
    let eps = T::default_epsilon();
    let tiny = T::of(1e-30);
    let z = Cplx::new(T::zero(), r);
    let one = Cplx::new(T::one(), T::zero());

    let mut b = z + one;
    let mut c = Cplx::new(T::one() / tiny, T::zero());
    let mut d = cinv(b);
    let mut h = d;
    let mut converged = false;
    for i in 1..=200usize {
        let ai = T::of_usize(i * i);
        let a = Cplx::new(-ai, T::zero());
        b += Cplx::new(T::of(2.0), T::zero());
        d = cinv(a * d + b);
        c = b + a * cinv(c);
        let del = c * d;
        h *= del;
        if rabs(del.re - T::one()) + rabs(del.im) < eps * T::of(4.0) {
            converged = true;
            break;
        }
    }
    debug_assert!(converged, "Lentz continued fraction stalled");
    // h = e^{ir} E_1(ir) = g - i f
    let g = h.re;
    let f = -h.im;
    let scale = rabs(f) + rabs(g);
    (f, g, scale * eps * T::of(16.0) + eps)
}

#[inline]
fn cinv<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let d = z.re * z.re + z.im * z.im;
    Cplx::new(z.re / d, -z.im / d)
}
