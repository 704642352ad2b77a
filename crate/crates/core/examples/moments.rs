//! Additive moments T_k by exhaustive counting, through the spectrum, and
//! the phase-restricted count T_k^{φ,η}.
use halab::group::{CyclicGroup, GroupFunction};
use halab::moments::{t_k_brute, t_k_phi, t_k_set, t_k_spectral, WorkBudget};
use halab::rational::Rational;
use halab::wiener::CircleMap;

fn main() -> halab::Result<()> {
    let budget = WorkBudget::default();
    let g = CyclicGroup::new(5)?;
    let f = GroupFunction::indicator(g, &[0, 1]);
    println!("T_2({{0,1}} ⊂ Z_5) = {:?}", t_k_brute(&f, 2, &budget)?.value);

    let g = CyclicGroup::new(101)?;
    let set = [2, 9, 17, 40, 41, 60, 77, 88];
    let f = GroupFunction::indicator(g, &set);
    for k in 1..=3 {
        let brute = t_k_brute(&f, k, &budget)?.value.as_f64();
        let spec = t_k_spectral(&f, k)?.value.as_f64();
        let direct = t_k_set(&set, 101, k, &budget)?;
        println!("k = {k}: brute {brute}, spectral {spec:.6}, sorted sums {direct}");
    }

    let tent = CircleMap::tent();
    for eta in [Rational::new(1, 100), Rational::new(1, 10), Rational::new(1, 2)] {
        let t = t_k_phi(&set, 101, &tent, eta, 2, &budget)?;
        println!("T_2^(tent, {eta}) = {t}");
    }
    Ok(())
}
