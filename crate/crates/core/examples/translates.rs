//! Random translate sums of a centered indicator and the √k bound on the
//! expected Wiener norm.
use halab::constructions::{centered_indicator, random_translate_sum};
use halab::group::CyclicGroup;

fn main() -> halab::Result<()> {
    let g = CyclicGroup::new(101)?;
    let a: Vec<usize> = vec![0, 4, 9, 15, 22, 30, 39, 49];
    let eta = a.len() as f64 / 101.0;
    let r = random_translate_sum(&centered_indicator(g, &a), eta, 400, 42)?;
    println!(
        "k = {}, ‖f_0‖_A = {:.4}, bound √k‖f_0‖_A = {:.4}",
        r.k, r.base_norm, r.bound
    );
    println!(
        "mean ‖f‖_A = {:.4} ± {:.4}",
        r.mean_norm,
        r.standard_error * r.mean_norm
    );
    println!("fraction of trials within the bound: {:.3}", r.fraction_within_bound);
    println!(
        "checks: mean {}, f^(0) {}, sup {}",
        r.mean_check, r.zero_coefficient_check, r.sup_check
    );
    Ok(())
}
