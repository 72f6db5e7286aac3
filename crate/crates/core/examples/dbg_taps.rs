use relscat_core::grid::*;
use relscat_core::kernels::*;

fn main() {
    let h = 0.5f64;
    let sampler = KernelSampler::new(KernelKind::<f64>::G0, h).unwrap();
    // sum of taps * h^3 over the 7^3 window
    let mut sum = 0.0;
    for ix in -3i32..=3 {
        for iy in -3i32..=3 {
            for iz in -3i32..=3 {
                let d = [ix as f64 * h, iy as f64 * h, iz as f64 * h];
                sum += sampler.sample(d).re * h * h * h;
            }
        }
    }
    println!("sum taps h^3 = {sum:.10}");
    println!("(expected window integral printed by python below)");
    println!("center tap = {:.8}", sampler.diagonal().re);
    println!("ball avg   = {:.8}", sampler.ball_average_diagonal().re);
    let d1 = sampler.sample([h, 0.0, 0.0]).re;
    println!("tap(1,0,0) = {d1:.8}, point value = {:.8}", eval_kernel(KernelKind::<f64>::G0, h).unwrap().re);
}
