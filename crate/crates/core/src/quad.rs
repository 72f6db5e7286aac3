//! Gauss-Legendre quadrature rules and composite panel integration.

use crate::scalar::{rabs, ComplexField, Real};

/// Gauss-Legendre rule on [-1, 1]: nodes and weights.
///
/// Nodes are found by Newton iteration on P_n seeded with the Chebyshev-like
/// initial guess; accurate to machine precision for n up to a few hundred.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let m = n.div_ceil(2);
    let nf = T::of_usize(n);
    for i in 0..m {
        // initial guess (Abramowitz & Stegun 25.4.30 style)
        let theta = T::pi() * (T::of_usize(i) + T::of(0.75)) / (nf + T::of(0.5));
        let mut x = ComplexField::cos(theta);
        for _ in 0..100 {
            // evaluate P_n(x) and P_n'(x) by the three-term recurrence
            let mut p0 = T::one();
            let mut p1 = x;
            for k in 2..=n {
                let kf = T::of_usize(k);
                let p2 = ((T::of(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = nf * (x * p1 - p0) / (x * x - T::one());
            let dx = p1 / dp;
            x -= dx;
            if rabs(dx) <= T::default_epsilon() * T::of(4.0) {
                break;
            }
        }
        // recompute derivative at the converged node for the weight
        let mut p0 = T::one();
        let mut p1 = x;
        for k in 2..=n {
            let kf = T::of_usize(k);
            let p2 = ((T::of(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
            p0 = p1;
            p1 = p2;
        }
        let dp = nf * (x * p1 - p0) / (x * x - T::one());
        let w = T::of(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to [a, b].
pub fn gauss_legendre_ab<T: Real>(n: usize, a: T, b: T) -> (Vec<T>, Vec<T>) {
    let (xs, ws) = gauss_legendre::<T>(n);
    let half = T::of(0.5);
    let mid = half * (a + b);
    let rad = half * (b - a);
    (
        xs.iter().map(|&x| mid + rad * x).collect(),
        ws.iter().map(|&w| rad * w).collect(),
    )
}

/// Integrate f over [a, b] with a fixed-order Gauss-Legendre rule.
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, order: usize) -> T {
    let (xs, ws) = gauss_legendre_ab(order, a, b);
    xs.iter().zip(&ws).map(|(&x, &w)| w * f(x)).sum()
}

/// Composite Gauss-Legendre: [a, b] split into `panels` equal panels,
/// `order` nodes per panel. Suited to oscillatory integrands when the
/// panel width resolves the oscillation.
pub fn integrate_panels<T: Real>(
    f: impl Fn(T) -> T,
    a: T,
    b: T,
    panels: usize,
    order: usize,
) -> T {
    let (xs, ws) = gauss_legendre::<T>(order);
    let width = (b - a) / T::of_usize(panels);
    let half = T::of(0.5);
    let mut total = T::zero();
    for p in 0..panels {
        let lo = a + width * T::of_usize(p);
        let mid = lo + half * width;
        let rad = half * width;
        let mut s = T::zero();
        for (&x, &w) in xs.iter().zip(&ws) {
            s += w * f(mid + rad * x);
        }
        total += rad * s;
    }
    total
}
