use relscat_core::grid::*;
use relscat_core::kernels::*;
use relscat_core::quad::integrate_panels;

fn main() {
    let w = 2.0f64;
    let oracle = |x: f64| -> f64 {
        let g = |s: f64| s * (-s * s / (w * w)).exp();
        let delta = 1e-3;
        let integrand = |s: f64| g(s) * ((x + s).abs() / (x - s).abs()).ln();
        let a = integrate_panels(integrand, 0.0, x - delta, 800, 10);
        let b = integrate_panels(integrand, x + delta, 15.0, 1600, 10);
        let center = g(x) * 2.0 * delta * ((2.0 * x).ln() - delta.ln() + 1.0);
        (a + b + center) / (std::f64::consts::PI * x)
    };
    for (n, l) in [(32usize, 8.0f64), (48, 9.0), (64, 8.0), (96, 9.0)] {
        let grid = Grid3::<f64>::new(n, l).unwrap();
        let f = Field::from_real_fn(grid, |x| {
            let r2: f64 = x.iter().map(|a| a * a).sum();
            (-r2 / (w * w)).exp()
        });
        let op = KernelOp::assemble(KernelKind::G0, grid).unwrap();
        let out = op.apply(&f).unwrap();
        let h = grid.spacing();
        // nearest lattice point to x = 1 on the z-axis
        let iz = n / 2 + (1.0 / h).round() as usize;
        let idx = grid.index(n / 2, n / 2, iz);
        let x = grid.node(idx)[2];
        let got = out.values[idx].re;
        let want = oracle(x);
        println!("h={h:.4} x={x:.3}: rel={:.3e}", (got - want).abs() / want);
    }
}
