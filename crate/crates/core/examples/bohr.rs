//! Bohr sets, the measure bound μ ≥ δ^d, smoothing diagnostics and the
//! parameter calculators.
use halab::bohr::{
    beta, bohr_elements, char_parameters, measure_bound_check, sanders_parameter_budget, smoothing_diagnostics,
};
use halab::constructions::centered_indicator;
use halab::group::{dft, CyclicGroup};
use halab::rational::Rational;

fn main() -> halab::Result<()> {
    let b = bohr_elements(101, &[1, 10], Rational::new(1, 10))?;
    println!("B = {:?}", b.elements());
    let m = measure_bound_check(&b);
    println!("μ = {} ≥ δ^d = {}: {}", m.measure, m.bound, m.pass);
    println!("β̂(0) = {:.12}", dft(&beta(&b)).get(0).re);

    let g = CyclicGroup::new(101)?;
    let f = centered_indicator(g, &(0..30).map(|i| (i * 7) % 101).collect::<Vec<_>>());
    let outer = bohr_elements(101, &[1], Rational::new(1, 8))?;
    for d in [16, 64, 256] {
        let inner = bohr_elements(101, &[1], Rational::new(1, d))?;
        let s = smoothing_diagnostics(&f, &outer, &inner)?;
        println!(
            "δ' = 1/{d}: oscillation {:.4}, local L2 {:.4}",
            s.sup_oscillation, s.sup_local_l2
        );
    }

    let budget = sanders_parameter_budget(4.0, 0.1, 1.0)?;
    println!("d = {:.3e}, log(1/δ') = {:.3e}", budget.d, budget.log_inv_delta_prime);
    let c = char_parameters(1000.0, 0.1, 0.5, 1.0)?;
    println!("{}", serde_json::to_string_pretty(&c)?);
    Ok(())
}
