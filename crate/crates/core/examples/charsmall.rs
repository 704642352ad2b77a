//! Dirichlet approximation, the rescaling chain for small-dimensional sets,
//! and the L¹ norm of exponential sums.
use halab::constructions::{charsmall_pipeline, dirichlet_approx, littlewood_integral_auto, Phase};
use halab::rational::Rational;

fn main() -> halab::Result<()> {
    let golden = dirichlet_approx(
        &[Phase::Radians(0.618034 * std::f64::consts::TAU)],
        Rational::new(1, 10),
        10,
        false,
    )?;
    println!("golden ratio, ε = 1/10: q = {:?}", golden.map(|r| r.q));
    let theta = [Phase::Turns(Rational::new(3, 17)), Phase::Turns(Rational::new(5, 29))];
    let r = dirichlet_approx(&theta, Rational::new(1, 8), 64, false)?.expect("pigeonhole");
    println!("(3/17, 5/29), ε = 1/8: q = {} achieving {:?}", r.q, r.achieved_exact);

    let c = charsmall_pipeline(&[1, 2, 4, 8, 3000], 10007)?;
    println!("basis {:?}, d = {}, q = {:?}", c.basis, c.d, c.q);
    println!("rescaled {:?}", c.rescaled);
    println!("‖χ_A‖ = {:.6}, ‖χ_qA‖ = {:?}", c.norm_a, c.norm_b);

    for m in [2i64, 16, 128, 1024] {
        let b: Vec<i64> = (0..m).collect();
        let v = littlewood_integral_auto(&b)?;
        println!(
            "m = {m:>4}: (1/2π)∫|D_m| = {v:.6}, ratio to ln m = {:.4}",
            v / (m as f64).ln()
        );
    }
    Ok(())
}
