//! Uniform centered 3-D grids, complex fields, FFT-based Fourier multipliers,
//! sphere quadrature, and weighted norms.
//!
//! Fourier convention is the symmetric one,
//! F f (k) = (2 pi)^{-3/2} int f(x) e^{-i k x} dx,
//! and inner products are linear in the first argument:
//! <f, g> = int f conj(g).

use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::scalar::{cis, jweight, Cplx, ComplexField, Real};

/// Uniform centered cubic grid: n points per axis, half-extent L, spacing
/// h = 2L/n. Node 0 is on the grid; the dual grid carries |k| <= pi/h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid3<T> {
    n: usize,
    l: T,
    h: T,
}

impl<T: Real> Grid3<T> {
    pub fn new(n: usize, l: T) -> Result<Self> {
        if n < 16 || n % 2 != 0 {
            return Err(Error::Config(format!(
                "grid size must be even and >= 16, got {n}"
            )));
        }
        if l <= T::zero() {
            return Err(Error::Config("grid half-extent must be positive".into()));
        }
        let h = T::of(2.0) * l / T::of_usize(n);
        Ok(Self { n, l, h })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn half_extent(&self) -> T {
        self.l
    }

    #[inline]
    pub fn spacing(&self) -> T {
        self.h
    }

    /// Quadrature weight of one cell.
    #[inline]
    pub fn cell_volume(&self) -> T {
        self.h * self.h * self.h
    }

    /// Largest resolvable |k| per axis.
    #[inline]
    pub fn nyquist(&self) -> T {
        T::pi() / self.h
    }

    /// Dual-grid spacing 2 pi / (n h).
    #[inline]
    pub fn k_spacing(&self) -> T {
        T::two_pi() / (T::of_usize(self.n) * self.h)
    }

    /// Position coordinate along one axis for index i in [0, n).
    #[inline]
    pub fn axis_coord(&self, i: usize) -> T {
        (T::of_usize(i) - T::of_usize(self.n / 2)) * self.h
    }

    /// Frequency along one axis for FFT-ordered index m in [0, n).
    #[inline]
    pub fn axis_freq(&self, m: usize) -> T {
        let half = self.n / 2;
        let signed = if m < half {
            T::of_usize(m)
        } else {
            T::of_usize(m) - T::of_usize(self.n)
        };
        signed * self.k_spacing()
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (ix * self.n + iy) * self.n + iz
    }

    #[inline]
    pub fn unindex(&self, idx: usize) -> (usize, usize, usize) {
        let iz = idx % self.n;
        let iy = (idx / self.n) % self.n;
        let ix = idx / (self.n * self.n);
        (ix, iy, iz)
    }

    /// Position of the node with linear index idx.
    #[inline]
    pub fn node(&self, idx: usize) -> [T; 3] {
        let (ix, iy, iz) = self.unindex(idx);
        [self.axis_coord(ix), self.axis_coord(iy), self.axis_coord(iz)]
    }

    /// Dual node (FFT ordering) for linear index idx.
    #[inline]
    pub fn k_node(&self, idx: usize) -> [T; 3] {
        let (ix, iy, iz) = self.unindex(idx);
        [self.axis_freq(ix), self.axis_freq(iy), self.axis_freq(iz)]
    }
}

/// Complex scalar field sampled on a [`Grid3`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    pub grid: Grid3<T>,
    pub values: Vec<Cplx<T>>,
}

impl<T: Real> Field<T> {
    pub fn zeros(grid: Grid3<T>) -> Self {
        Self {
            grid,
            values: vec![Cplx::zero(); grid.len()],
        }
    }

    /// Sample a function of position on every node.
    pub fn from_fn(grid: Grid3<T>, f: impl Fn([T; 3]) -> Cplx<T> + Sync) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|idx| f(grid.node(idx)))
            .collect();
        Self { grid, values }
    }

    pub fn from_real_fn(grid: Grid3<T>, f: impl Fn([T; 3]) -> T + Sync) -> Self {
        Self::from_fn(grid, |x| Cplx::new(f(x), T::zero()))
    }

    /// L2 norm sqrt(h^3 sum |f|^2). Sequential sum: reproducible across thread counts.
    pub fn norm_l2(&self) -> T {
        let s: T = self.values.iter().map(|v| v.norm_sqr()).sum();
        ComplexField::sqrt(s * self.grid.cell_volume())
    }

    /// <f, g> = h^3 sum f conj(g); linear in self.
    pub fn inner(&self, other: &Self) -> Result<Cplx<T>> {
        self.check_grid(other)?;
        let mut acc = Cplx::zero();
        for (a, b) in self.values.iter().zip(&other.values) {
            acc += a * b.conj();
        }
        Ok(acc * self.grid.cell_volume())
    }

    /// L2 norm of <x>^s f.
    pub fn weighted_norm(&self, s: T) -> T {
        let mut acc = T::zero();
        for (idx, v) in self.values.iter().enumerate() {
            let x = self.grid.node(idx);
            let r = ComplexField::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
            let w = ComplexField::powf(jweight(r), s);
            acc += w * w * v.norm_sqr();
        }
        ComplexField::sqrt(acc * self.grid.cell_volume())
    }

    pub fn sup_norm(&self) -> T {
        self.values
            .iter()
            .map(|v| crate::scalar::cabs(*v))
            .fold(T::zero(), |a, b| if b > a { b } else { a })
    }

    /// Integral h^3 sum f (the k = 0 Fourier mode up to scale).
    pub fn integral(&self) -> Cplx<T> {
        let mut acc = Cplx::zero();
        for v in &self.values {
            acc += v;
        }
        acc * self.grid.cell_volume()
    }

    pub fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::Shape(
                "fields live on different grids".into(),
            ));
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, c: Cplx<T>, other: &Self) -> Result<()> {
        self.check_grid(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn scaled(&self, c: Cplx<T>) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Pointwise multiply by a real function of position.
    pub fn mul_real_fn(&self, f: impl Fn([T; 3]) -> T + Sync) -> Self {
        let values = (0..self.grid.len())
            .into_par_iter()
            .map(|idx| self.values[idx] * f(self.grid.node(idx)))
            .collect();
        Self {
            grid: self.grid,
            values,
        }
    }
}

/// Cached 1-D FFT plans for in-place 3-D transforms on an n^3 cube.
pub struct Fft3<T: Real> {
    n: usize,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
}

impl<T: Real> Fft3<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Unnormalized forward DFT along all three axes.
    pub fn forward(&self, data: &mut Vec<Cplx<T>>) {
        self.pass3(data, &self.fwd);
    }

    /// Unnormalized inverse DFT; divide by n^3 to invert `forward`.
    pub fn inverse(&self, data: &mut Vec<Cplx<T>>) {
        self.pass3(data, &self.inv);
    }

    fn pass3(&self, data: &mut Vec<Cplx<T>>, plan: &Arc<dyn Fft<T>>) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n, "data must be an n^3 cube");
        let mut scratch: Vec<Cplx<T>> = vec![Cplx::zero(); data.len()];
        for _ in 0..3 {
            let scratch_len = plan.get_inplace_scratch_len();
            data.par_chunks_exact_mut(n).for_each_init(
                || vec![Cplx::zero(); scratch_len],
                |s, row| plan.process_with_scratch(row, s),
            );
            rotate_axes(data, &mut scratch, n);
            std::mem::swap(data, &mut scratch);
        }
    }
}

/// B[i2][i0][i1] = A[i0][i1][i2]; three applications restore the layout.
fn rotate_axes<T: Real>(input: &[Cplx<T>], out: &mut [Cplx<T>], n: usize) {
    out.par_chunks_exact_mut(n * n)
        .enumerate()
        .for_each(|(i2, slab)| {
            for i0 in 0..n {
                let base = i0 * n * n + i2;
                for i1 in 0..n {
                    slab[i0 * n + i1] = input[base + i1 * n];
                }
            }
        });
}

/// Apply the Fourier multiplier `symbol(k)` to f: F* symbol F f.
pub fn multiplier_apply<T: Real>(
    symbol: impl Fn([T; 3]) -> Cplx<T> + Sync,
    f: &Field<T>,
) -> Field<T> {
    let fft = Fft3::new(f.grid.n());
    multiplier_apply_with(&fft, symbol, f)
}

/// Same as [`multiplier_apply`] but reusing FFT plans.
pub fn multiplier_apply_with<T: Real>(
    fft: &Fft3<T>,
    symbol: impl Fn([T; 3]) -> Cplx<T> + Sync,
    f: &Field<T>,
) -> Field<T> {
    assert_eq!(fft.n(), f.grid.n(), "plan size does not match grid");
    let grid = f.grid;
    let mut data = f.values.clone();
    fft.forward(&mut data);
    let scale = T::one() / T::of_usize(grid.len());
    data.par_iter_mut().enumerate().for_each(|(idx, v)| {
        *v *= symbol(grid.k_node(idx)) * scale;
    });
    fft.inverse(&mut data);
    Field { grid, values: data }
}

/// Apply a precomputed symbol table (FFT ordering, already divided by n^3).
pub fn apply_symbol_table<T: Real>(fft: &Fft3<T>, table: &[Cplx<T>], f: &Field<T>) -> Field<T> {
    assert_eq!(table.len(), f.grid.len());
    let mut data = f.values.clone();
    fft.forward(&mut data);
    data.par_iter_mut()
        .zip(table.par_iter())
        .for_each(|(v, s)| *v *= s);
    fft.inverse(&mut data);
    Field {
        grid: f.grid,
        values: data,
    }
}

/// Build the table for [`apply_symbol_table`]: symbol(k)/n^3 in FFT ordering.
pub fn symbol_table<T: Real>(
    grid: Grid3<T>,
    symbol: impl Fn([T; 3]) -> Cplx<T> + Sync,
) -> Vec<Cplx<T>> {
    let scale = T::one() / T::of_usize(grid.len());
    (0..grid.len())
        .into_par_iter()
        .map(|idx| symbol(grid.k_node(idx)) * scale)
        .collect()
}

/// |k|^{-1/2} multiplier with the k = 0 mode set to zero.
pub fn quarter_inverse_laplacian<T: Real>(f: &Field<T>) -> Field<T> {
    multiplier_apply(
        |k| {
            let kk = knorm(k);
            if kk == T::zero() {
                Cplx::zero()
            } else {
                Cplx::new(T::one() / ComplexField::sqrt(kk), T::zero())
            }
        },
        f,
    )
}

#[inline]
pub fn knorm<T: Real>(k: [T; 3]) -> T {
    ComplexField::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2])
}

/// Fourier coefficients on the dual grid (FFT ordering), with the
/// (2 pi)^{-3/2} h^3 normalization and centered-grid phases.
pub fn fourier_grid<T: Real>(f: &Field<T>) -> Vec<Cplx<T>> {
    let grid = f.grid;
    let fft = Fft3::new(grid.n());
    let mut data = f.values.clone();
    fft.forward(&mut data);
    let c = grid.cell_volume() * ComplexField::powf(T::two_pi(), T::of(-1.5));
    data.par_iter_mut().enumerate().for_each(|(idx, v)| {
        let (mx, my, mz) = grid.unindex(idx);
        let sign = if (mx + my + mz) % 2 == 0 { c } else { -c };
        *v *= sign;
    });
    data
}

/// Field with prescribed Fourier transform: f(x) = F^{-1}[fk](x) with the
/// same normalization as [`fourier_grid`].
pub fn field_from_fourier<T: Real>(
    grid: Grid3<T>,
    fk: impl Fn([T; 3]) -> Cplx<T> + Sync,
) -> Field<T> {
    let fft = Fft3::new(grid.n());
    let dk = grid.k_spacing();
    let c = dk * dk * dk * ComplexField::powf(T::two_pi(), T::of(-1.5));
    let mut data: Vec<Cplx<T>> = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let (mx, my, mz) = grid.unindex(idx);
            let sign = if (mx + my + mz) % 2 == 0 { c } else { -c };
            fk(grid.k_node(idx)) * sign
        })
        .collect();
    fft.inverse(&mut data);
    Field { grid, values: data }
}

/// Direct oscillatory quadrature of the Fourier transform at an arbitrary k:
/// (2 pi)^{-3/2} h^3 sum f(x) e^{-i k x}, restricted to cells where
/// |f| > 1e-14 max|f|.
pub struct FourierProbe<T> {
    points: Vec<[T; 3]>,
    values: Vec<Cplx<T>>,
    scale: T,
}

impl<T: Real> FourierProbe<T> {
    pub fn new(f: &Field<T>) -> Self {
        let cutoff = f.sup_norm() * T::of(1e-14);
        let mut points = Vec::new();
        let mut values = Vec::new();
        for (idx, v) in f.values.iter().enumerate() {
            if crate::scalar::cabs(*v) > cutoff {
                points.push(f.grid.node(idx));
                values.push(*v);
            }
        }
        let scale = f.grid.cell_volume() * ComplexField::powf(T::two_pi(), T::of(-1.5));
        Self {
            points,
            values,
            scale,
        }
    }

    pub fn eval(&self, k: [T; 3]) -> Cplx<T> {
        let mut acc = Cplx::zero();
        for (x, v) in self.points.iter().zip(&self.values) {
            let phase = -(k[0] * x[0] + k[1] * x[1] + k[2] * x[2]);
            acc += v * cis(phase);
        }
        acc * self.scale
    }

    pub fn eval_many(&self, ks: &[[T; 3]]) -> Vec<Cplx<T>> {
        ks.par_iter().map(|&k| self.eval(k)).collect()
    }
}

/// Quadrature on the unit sphere: Gauss-Legendre in cos(theta) times a
/// uniform rule in phi. `order` is the polar node count; 2*order azimuthal
/// nodes. Weights sum to 4 pi exactly.
#[derive(Debug, Clone)]
pub struct SphereQuad<T> {
    pub nodes: Vec<[T; 3]>,
    pub weights: Vec<T>,
}

impl<T: Real> SphereQuad<T> {
    pub fn new(order: usize) -> Result<Self> {
        if order < 4 {
            return Err(Error::Config(format!(
                "sphere quadrature order must be >= 4, got {order}"
            )));
        }
        let n_phi = 2 * order;
        let (ct, wt) = gauss_legendre::<T>(order);
        let dphi = T::two_pi() / T::of_usize(n_phi);
        let mut nodes = Vec::with_capacity(order * n_phi);
        let mut weights = Vec::with_capacity(order * n_phi);
        for (c, w) in ct.iter().zip(&wt) {
            let st = ComplexField::sqrt(T::one() - *c * *c);
            for j in 0..n_phi {
                let phi = dphi * T::of_usize(j);
                nodes.push([
                    st * ComplexField::cos(phi),
                    st * ComplexField::sin(phi),
                    *c,
                ]);
                weights.push(*w * dphi);
            }
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn([T; 3]) -> Cplx<T>) -> Cplx<T> {
        let mut acc = Cplx::zero();
        for (w, node) in self.weights.iter().zip(&self.nodes) {
            acc += f(*node) * *w;
        }
        acc
    }

    /// <phi, psi> = sum w phi conj(psi) on the sphere; linear in the first slot.
    pub fn inner(&self, phi: &[Cplx<T>], psi: &[Cplx<T>]) -> Cplx<T> {
        let mut acc = Cplx::zero();
        for ((w, a), b) in self.weights.iter().zip(phi).zip(psi) {
            acc += a * b.conj() * *w;
        }
        acc
    }

    pub fn norm(&self, phi: &[Cplx<T>]) -> T {
        let mut acc = T::zero();
        for (w, a) in self.weights.iter().zip(phi) {
            acc += *w * a.norm_sqr();
        }
        ComplexField::sqrt(acc)
    }
}
