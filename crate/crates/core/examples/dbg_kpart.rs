use relscat_core::grid::*;
use relscat_core::kernels::*;
use relscat_core::quad::*;
use relscat_core::Cplx;

fn main() {
    let lam = 1.0f64;
    let sig = 1.5f64;
    let grid = Grid3::<f64>::new(64, 16.0).unwrap();
    let f = Field::from_real_fn(grid, |x| {
        let r2: f64 = x.iter().map(|a| a * a).sum();
        (-r2 / (2.0 * sig * sig)).exp()
    });
    // (K_l f)(x) = (1/(i x)) int_0^inf s f(s) (e^{i l (x+s)} - e^{i l |x-s|}) ds
    let koracle = |x: f64| -> Cplx<f64> {
        let re = integrate_panels(|s: f64| {
            let fs = s * (-s * s / (2.0 * sig * sig)).exp();
            fs * ((lam * (x + s)).cos() - (lam * (x - s).abs()).cos())
        }, 0.0, 14.0, 500, 8);
        let im = integrate_panels(|s: f64| {
            let fs = s * (-s * s / (2.0 * sig * sig)).exp();
            fs * ((lam * (x + s)).sin() - (lam * (x - s).abs()).sin())
        }, 0.0, 14.0, 500, 8);
        Cplx::new(re, im) / Cplx::new(0.0, x)
    };
    for kind in [KernelKind::KLambda { lambda: lam, sign: Sign::Plus },
                 KernelKind::G0, KernelKind::MLambda { lambda: lam }] {
        let op = KernelOp::assemble(kind, grid).unwrap();
        let out = op.apply(&f).unwrap();
        if matches!(kind, KernelKind::KLambda { .. }) {
            println!("K-part:");
            for iz in [33usize, 34, 36, 40, 44] {
                let idx = grid.index(32, 32, iz);
                let x = grid.node(idx)[2];
                let ex = koracle(x);
                let got = out.values[idx];
                println!("  r={x:.2} err={:.6} |exact|={:.4}", (got - ex).norm(), ex.norm());
            }
        } else {
            // report for later comparison
            let idx = grid.index(32, 32, 36);
            println!("{kind:?} at r=2: {:?}", out.values[idx]);
        }
    }
}
