use relscat_core::grid::*;
use relscat_core::potential::*;
fn main() {
    let grid = Grid3::<f64>::new(160, 20.0).unwrap();
    let analytic = Potential::gaussian_well(1.0, 10.0, 6.0);
    let tab = Potential::tabulated(analytic.sample(grid), 1.0, 6.0);
    let (fd, flagged) = tab.virial_field(grid);
    let (exact, _) = analytic.virial_field(grid);
    let mut max_err = 0.0f64; let mut arg = 0usize;
    for idx in 0..grid.len() {
        if flagged.binary_search(&idx).is_ok() { continue; }
        let e = (fd.values[idx].re - exact.values[idx].re).abs();
        if e > max_err { max_err = e; arg = idx; }
    }
    let x = grid.node(arg);
    println!("max_err {} at {:?} fd={} exact={}", max_err, x, fd.values[arg].re, exact.values[arg].re);
    // check sampling fidelity at that node
    println!("tab.eval = {}, analytic.eval = {}", tab.eval(x), analytic.eval(x));
    let xn = grid.node(grid.index(3,80,80));
    println!("near-boundary x={:?} tab={} exact={}", xn, tab.eval(xn), analytic.eval(xn));
}
