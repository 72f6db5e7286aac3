use relscat_core::grid::*;
use relscat_core::kernels::*;
use relscat_core::quad::*;
use relscat_core::Cplx;

fn pv_oracle(grid: Grid3<f64>, lam: f64, s: f64) -> Field<f64> {
    let fhat = |k: f64| s.powi(3) * (-0.5 * s * s * k * k).exp();
    let gnum = |k: f64, r: f64| k * fhat(k) * (k * r).sin();
    let d = 0.5;
    let eval = |r: f64| -> Cplx<f64> {
        if r < 1e-9 { return Cplx::new(0.0, 0.0); }
        let pv1 = integrate_panels(|k| gnum(k, r) / (k - lam), 0.0, lam - d, 64, 12);
        let kmax = lam + 12.0 / s;
        let pv2 = integrate_panels(|k| gnum(k, r) / (k - lam), lam + d, kmax, 512, 12);
        let glam = gnum(lam, r);
        let pv3 = integrate_panels(
            |k| if (k - lam).abs() > 1e-14 { (gnum(k, r) - glam) / (k - lam) } else { 0.0 },
            lam - d, lam + d, 128, 12,
        );
        let c = (2.0 * std::f64::consts::PI).powf(-1.5) * 4.0 * std::f64::consts::PI / r;
        Cplx::new(c * (pv1 + pv2 + pv3), c * std::f64::consts::PI * glam)
    };
    let mut cache: std::collections::HashMap<i64, Cplx<f64>> = std::collections::HashMap::new();
    let mut f = Field::zeros(grid);
    for idx in 0..grid.len() {
        let x = grid.node(idx);
        let r2 = x[0]*x[0]+x[1]*x[1]+x[2]*x[2];
        let key = (r2 * 1e9).round() as i64;
        let v = *cache.entry(key).or_insert_with(|| eval(r2.sqrt()));
        f.values[idx] = v;
    }
    f
}

fn zero_origin(f: &Field<f64>) -> Field<f64> {
    let mut g = f.clone();
    let n = f.grid.n();
    g.values[f.grid.index(n/2, n/2, n/2)] = Cplx::new(0.0, 0.0);
    g
}

fn w2(a: &Field<f64>, b: &Field<f64>) -> f64 {
    let (a, b) = (zero_origin(a), zero_origin(b));
    a.sub(&b).unwrap().weighted_norm(-2.0) / b.weighted_norm(-2.0)
}

fn main() {
    let lam = 1.0;
    for (l, sig) in [(10.0f64, 1.6f64), (12.0, 1.8), (12.0, 1.5)] {
        let grid = Grid3::<f64>::new(64, l).unwrap();
        let f = Field::from_real_fn(grid, |x| {
            let r2: f64 = x.iter().map(|a| a * a).sum();
            (-r2 / (2.0 * sig * sig)).exp()
        });
        let oracle = pv_oracle(grid, lam, sig);
        let kr = apply_resolvent(lam, Sign::Plus, &f).unwrap();
        println!("L={l} sig={sig} h={}: kr-ex={:.4}", grid.spacing(), w2(&kr, &oracle));
        for pad in [2usize, 3] {
            for exps in [[1.0, 1.5], [1.0, 2.0]] {
                let m = resolvent_multiplier_extrapolated(lam, Sign::Plus, &[0.2, 0.1, 0.05], exps, pad, &f);
                println!("   pad={pad} exps={exps:?}: m-ex={:.4} m-kr={:.4}", w2(&m, &oracle), w2(&m, &kr));
            }
        }
    }
}
