//! Potential families satisfying the decay condition |V(x)| <= C <x>^{-sigma},
//! their factorization V = u0 v0, dilates, and virial derivatives.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid3};
use crate::scalar::{jweight, rabs, rsign, ComplexField, Real};

/// Base shapes; all built-in kinds are radial attractive wells of unit depth,
/// scaled by the coupling.
#[derive(Debug, Clone)]
pub enum PotentialKind<T: Real> {
    /// -exp(-r^2/width^2)
    GaussianWell { width: T },
    /// -e * exp(-1/(1-(r/radius)^2)) inside |x| < radius, 0 outside
    Bump { radius: T },
    /// -exp(-mu r)/<r>; the <r> factor removes the Coulomb singularity
    YukawaReg { mu: T },
    /// real part of a stored field, trilinear interpolation off nodes
    Tabulated(Arc<Field<T>>),
}

/// A potential a * kind, optionally dilated: V(x) = a * base(e^{-tau} x).
#[derive(Debug, Clone)]
pub struct Potential<T: Real> {
    pub kind: PotentialKind<T>,
    /// coupling constant a
    pub coupling: T,
    /// claimed decay exponent of Condition (1.1)
    pub sigma: T,
    tau: T,
}

impl<T: Real> Potential<T> {
    pub fn new(kind: PotentialKind<T>, coupling: T, sigma: T) -> Self {
        Self {
            kind,
            coupling,
            sigma,
            tau: T::zero(),
        }
    }

    pub fn gaussian_well(a: T, width: T, sigma: T) -> Self {
        Self::new(PotentialKind::GaussianWell { width }, a, sigma)
    }

    pub fn bump(a: T, radius: T, sigma: T) -> Self {
        Self::new(PotentialKind::Bump { radius }, a, sigma)
    }

    pub fn yukawa_reg(a: T, mu: T, sigma: T) -> Self {
        Self::new(PotentialKind::YukawaReg { mu }, a, sigma)
    }

    pub fn tabulated(field: Field<T>, a: T, sigma: T) -> Self {
        Self::new(PotentialKind::Tabulated(Arc::new(field)), a, sigma)
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    /// V_tau(x) = V(e^{-tau} x); dilation parameters accumulate.
    pub fn dilate(&self, tau: T) -> Self {
        let mut out = self.clone();
        out.tau += tau;
        out
    }

    /// Potential with coupling scaled by c.
    pub fn scaled(&self, c: T) -> Self {
        let mut out = self.clone();
        out.coupling *= c;
        out
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self.kind, PotentialKind::Tabulated(_))
    }

    /// V(x).
    pub fn eval(&self, x: [T; 3]) -> T {
        let s = ComplexField::exp(-self.tau);
        let y = [x[0] * s, x[1] * s, x[2] * s];
        match &self.kind {
            PotentialKind::Tabulated(f) => self.coupling * trilinear(f, y),
            _ => {
                let r = ComplexField::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
                self.coupling * self.base_eval_r(r)
            }
        }
    }

    /// v0 = |V|^{1/2}.
    pub fn v0(&self, x: [T; 3]) -> T {
        ComplexField::sqrt(rabs(self.eval(x)))
    }

    /// u0 = |V|^{1/2} sgn(V), with sgn(0) = 0.
    pub fn u0(&self, x: [T; 3]) -> T {
        let v = self.eval(x);
        rsign(v) * ComplexField::sqrt(rabs(v))
    }

    fn base_eval_r(&self, r: T) -> T {
        match &self.kind {
            PotentialKind::GaussianWell { width } => {
                -ComplexField::exp(-r * r / (*width * *width))
            }
            PotentialKind::Bump { radius } => {
                let s = r / *radius;
                if s < T::one() {
                    -ComplexField::exp(T::one() - T::one() / (T::one() - s * s))
                } else {
                    T::zero()
                }
            }
            PotentialKind::YukawaReg { mu } => -ComplexField::exp(-*mu * r) / jweight(r),
            PotentialKind::Tabulated(_) => unreachable!("tabulated kinds are not radial"),
        }
    }

    /// d/dr of the unit-depth base shape; analytic kinds only.
    fn base_deriv_r(&self, r: T) -> T {
        match &self.kind {
            PotentialKind::GaussianWell { width } => {
                let w2 = *width * *width;
                T::of(2.0) * r / w2 * ComplexField::exp(-r * r / w2)
            }
            PotentialKind::Bump { radius } => {
                let s = r / *radius;
                if s < T::one() {
                    let d = T::one() - s * s;
                    // d/dr [-exp(1 - 1/(1-s^2))] = V(r) * (-2 s / (radius d^2))
                    let v = -ComplexField::exp(T::one() - T::one() / d);
                    v * (-T::of(2.0) * s / (*radius * d * d))
                } else {
                    T::zero()
                }
            }
            PotentialKind::YukawaReg { mu } => {
                // V'(r)/V(r) = -mu - r/(1+r^2)
                let v = self.base_eval_r(r);
                v * (-*mu - r / (T::one() + r * r))
            }
            PotentialKind::Tabulated(_) => unreachable!(),
        }
    }

    /// d^2/dr^2 of the base shape; analytic kinds only.
    fn base_deriv2_r(&self, r: T) -> T {
        match &self.kind {
            PotentialKind::GaussianWell { width } => {
                let w2 = *width * *width;
                let e = ComplexField::exp(-r * r / w2);
                (T::of(2.0) / w2 - T::of(4.0) * r * r / (w2 * w2)) * e
            }
            PotentialKind::Bump { radius } => {
                let s = r / *radius;
                if s < T::one() {
                    let d = T::one() - s * s;
                    let v = -ComplexField::exp(T::one() - T::one() / d);
                    let phi = -T::of(2.0) * s / (d * d);
                    let dphi = -T::of(2.0) / (d * d)
                        - T::of(8.0) * s * s / (d * d * d);
                    v * (phi * phi + dphi) / (*radius * *radius)
                } else {
                    T::zero()
                }
            }
            PotentialKind::YukawaReg { mu } => {
                let v = self.base_eval_r(r);
                let q = -*mu - r / (T::one() + r * r);
                let opr2 = T::one() + r * r;
                let dq = -(T::one() - r * r) / (opr2 * opr2);
                v * (q * q + dq)
            }
            PotentialKind::Tabulated(_) => unreachable!(),
        }
    }

    /// Virial x . grad V at x; analytic kinds only. For the dilated potential
    /// this is (y . grad V_base)(y) at y = e^{-tau} x.
    pub fn virial_at(&self, x: [T; 3]) -> Result<T> {
        if !self.is_analytic() {
            return Err(Error::Unsupported(
                "virial_at requires an analytic potential kind; use virial_field".into(),
            ));
        }
        let s = ComplexField::exp(-self.tau);
        let r = ComplexField::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * s;
        Ok(self.coupling * r * self.base_deriv_r(r))
    }

    /// Second virial x . grad (x . grad V) = r V' + r^2 V''; analytic kinds only.
    pub fn second_virial_at(&self, x: [T; 3]) -> Result<T> {
        if !self.is_analytic() {
            return Err(Error::Unsupported(
                "second virial requires an analytic potential kind".into(),
            ));
        }
        let s = ComplexField::exp(-self.tau);
        let r = ComplexField::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) * s;
        Ok(self.coupling * (r * self.base_deriv_r(r) + r * r * self.base_deriv2_r(r)))
    }

    /// Sample V on a grid.
    pub fn sample(&self, grid: Grid3<T>) -> Field<T> {
        Field::from_real_fn(grid, |x| self.eval(x))
    }

    /// Virial field on a grid: analytic gradient for built-in kinds,
    /// 4th-order central differences for tabulated data. Returns the field
    /// and the set of boundary cells where the stencil was truncated.
    pub fn virial_field(&self, grid: Grid3<T>) -> (Field<T>, Vec<usize>) {
        if self.is_analytic() {
            let f = Field::from_real_fn(grid, |x| self.virial_at(x).expect("analytic"));
            return (f, Vec::new());
        }
        let n = grid.n();
        let h = grid.spacing();
        let vals = self.sample(grid);
        let mut out = Field::zeros(grid);
        let mut flagged = Vec::new();
        let c1 = T::of(8.0);
        let denom = T::of(12.0) * h;
        for idx in 0..grid.len() {
            let (ix, iy, iz) = grid.unindex(idx);
            let x = grid.node(idx);
            if ix < 2 || ix >= n - 2 || iy < 2 || iy >= n - 2 || iz < 2 || iz >= n - 2 {
                flagged.push(idx);
                continue;
            }
            let mut acc = T::zero();
            for (axis, &xi) in x.iter().enumerate() {
                let at = |d: isize| -> T {
                    let mut c = [ix as isize, iy as isize, iz as isize];
                    c[axis] += d;
                    vals.values[grid.index(c[0] as usize, c[1] as usize, c[2] as usize)].re
                };
                let dv = (at(-2) - at(2) + c1 * (at(1) - at(-1))) / denom;
                acc += xi * dv;
            }
            out.values[idx] = crate::scalar::Cplx::new(acc, T::zero());
        }
        (out, flagged)
    }

    /// sup over nodes of <x>^sigma |V(x)| and a pass/fail against a cap.
    pub fn decay_check(&self, sigma: T, grid: Grid3<T>, cap: T) -> DecayReport<T> {
        let mut sup = T::zero();
        let mut argmax = [T::zero(); 3];
        for idx in 0..grid.len() {
            let x = grid.node(idx);
            let r = ComplexField::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            let val = ComplexField::powf(jweight(r), sigma) * rabs(self.eval(x));
            if val > sup {
                sup = val;
                argmax = x;
            }
        }
        DecayReport {
            sup,
            argmax,
            cap,
            pass: sup <= cap,
        }
    }

    /// (h^3 sum |V|^3)^{1/3} on the grid.
    pub fn l3_norm(&self, grid: Grid3<T>) -> T {
        let mut acc = T::zero();
        for idx in 0..grid.len() {
            let v = rabs(self.eval(grid.node(idx)));
            acc += v * v * v;
        }
        ComplexField::powf(acc * grid.cell_volume(), T::of(1.0 / 3.0))
    }

    /// max |V| over the grid.
    pub fn sup_norm(&self, grid: Grid3<T>) -> T {
        let mut sup = T::zero();
        for idx in 0..grid.len() {
            let v = rabs(self.eval(grid.node(idx)));
            if v > sup {
                sup = v;
            }
        }
        sup
    }
}

#[derive(Debug, Clone)]
pub struct DecayReport<T> {
    pub sup: T,
    pub argmax: [T; 3],
    pub cap: T,
    pub pass: bool,
}

/// Trilinear interpolation of the real part of a stored field; zero outside.
fn trilinear<T: Real>(f: &Field<T>, y: [T; 3]) -> T {
    let grid = f.grid;
    let n = grid.n();
    let h = grid.spacing();
    let half = T::of_usize(n / 2);
    let mut base = [0usize; 3];
    let mut frac = [T::zero(); 3];
    for a in 0..3 {
        let t = y[a] / h + half;
        if t < T::zero() || t > T::of_usize(n - 1) {
            return T::zero();
        }
        let fl = ComplexField::floor(t);
        let mut b = fl.to_f64_lossy() as usize;
        let mut fr = t - fl;
        if b >= n - 1 {
            // clamp onto the last cell so the final node is representable
            b = n - 2;
            fr = T::one();
        }
        base[a] = b;
        frac[a] = fr;
    }
    let mut acc = T::zero();
    for dx in 0..2usize {
        for dy in 0..2usize {
            for dz in 0..2usize {
                let w = wgt(frac[0], dx) * wgt(frac[1], dy) * wgt(frac[2], dz);
                acc += w * f.values[grid.index(base[0] + dx, base[1] + dy, base[2] + dz)].re;
            }
        }
    }
    acc
}

#[inline]
fn wgt<T: Real>(t: T, d: usize) -> T {
    if d == 0 {
        T::one() - t
    } else {
        t
    }
}
