//! Normalized DFT on Z_N, Wiener norms of finite sets and the complement
//! identity.
use halab::group::{dft, dft_direct, idft, CyclicGroup, GroupFunction};
use halab::wiener::wiener_norm_group;

fn main() -> halab::Result<()> {
    let g = CyclicGroup::new(101)?;
    let a = [0, 1, 3, 7, 12, 20];
    let f = GroupFunction::indicator(g, &a);
    let spec = dft(&f);
    println!(
        "f^(0) = {:.6} (expect |A|/N = {:.6})",
        spec.get(0).re,
        a.len() as f64 / 101.0
    );

    let err = spec
        .coefficients()
        .iter()
        .zip(dft_direct(&f).coefficients())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    println!("chirp vs direct: {err:.2e}");
    let back = idft(&spec);
    println!("roundtrip f(3) = {:.12}", back.get(3).re);

    let comp: Vec<usize> = (0..101).filter(|x| !a.contains(x)).collect();
    let (na, nc) = (
        wiener_norm_group(&f),
        wiener_norm_group(&GroupFunction::indicator(g, &comp)),
    );
    println!("‖χ_A‖ = {na:.6}, ‖χ_comp‖ = {nc:.6}");
    println!(
        "difference {:.12} vs 1 - 2|A|/p = {:.12}",
        nc - na,
        1.0 - 2.0 * a.len() as f64 / 101.0
    );
    Ok(())
}
