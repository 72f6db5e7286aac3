use relscat_core::grid::*;
use relscat_core::kernels::*;
use relscat_core::quad::*;
use relscat_core::Cplx;

fn main() {
    let lam = 1.0;
    let sig = 1.5f64;
    let grid = Grid3::<f64>::new(64, 16.0).unwrap();
    let f = Field::from_real_fn(grid, |x| {
        let r2: f64 = x.iter().map(|a| a * a).sum();
        (-r2 / (2.0 * sig * sig)).exp()
    });
    let kr = apply_resolvent(lam, Sign::Plus, &f).unwrap();

    let fhat = |k: f64| sig.powi(3) * (-0.5 * sig * sig * k * k).exp();
    let gnum = |k: f64, r: f64| k * fhat(k) * (k * r).sin();
    let d = 0.5;
    let eval = |r: f64| -> Cplx<f64> {
        let pv1 = integrate_panels(|k| gnum(k, r) / (k - lam), 0.0, lam - d, 64, 12);
        let kmax = lam + 12.0 / sig;
        let pv2 = integrate_panels(|k| gnum(k, r) / (k - lam), lam + d, kmax, 512, 12);
        let glam = gnum(lam, r);
        let pv3 = integrate_panels(
            |k| if (k - lam).abs() > 1e-14 { (gnum(k, r) - glam) / (k - lam) } else { 0.0 },
            lam - d, lam + d, 128, 12,
        );
        let c = (2.0 * std::f64::consts::PI).powf(-1.5) * 4.0 * std::f64::consts::PI / r;
        Cplx::new(c * (pv1 + pv2 + pv3), c * std::f64::consts::PI * glam)
    };
    println!("point r |err| |exact|");
    let n = 64;
    for (ix, iy, iz) in [(32usize,32usize,33usize), (32,33,33), (33,33,33), (32,32,34), (32,34,34), (32,32,36), (32,32,40), (32,32,48)] {
        let idx = grid.index(ix, iy, iz);
        let x = grid.node(idx);
        let r = (x[0]*x[0]+x[1]*x[1]+x[2]*x[2]).sqrt();
        let ex = eval(r);
        let got = kr.values[idx];
        println!("({ix},{iy},{iz}) r={r:.3} err={:.5} exact={:.4}", (got-ex).norm(), ex.norm());
    }
    let _ = n;
}
