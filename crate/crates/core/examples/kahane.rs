//! Certified enclosures of ‖e^{inφ}‖_{A(T)} for the tent map and the
//! running maximum Θ(n).
use halab::constructions::{kahane_family, KahaneShape};
use halab::rational::Rational;
use halab::wiener::{theta, wiener_norm_circle, CircleMap, NormOptions};

fn main() -> halab::Result<()> {
    let opts = NormOptions::default();
    let tent = CircleMap::tent();
    println!("{:>5} {:>10} {:>10} {:>8}", "n", "lower", "upper", "ln n");
    for n in [1i64, 2, 4, 8, 16, 32, 64, 128] {
        let iv = wiener_norm_circle(&tent, n, &opts)?;
        println!("{n:>5} {:>10.5} {:>10.5} {:>8.4}", iv.lower, iv.upper, (n as f64).ln());
    }
    let t = theta(&tent, 16, &opts)?;
    println!("Θ(16) ∈ [{:.4}, {:.4}]", t.lower, t.upper);

    let lin = CircleMap::linear(3, Rational::new(1, 7));
    println!("linear, n = 50: {:?}", wiener_norm_circle(&lin, 50, &opts)?);

    let asym = kahane_family(
        &KahaneShape::Asymmetric {
            a: Rational::from(3),
            b: Rational::from(-1),
        },
        1,
    )?;
    println!("asymmetric map breakpoints: {:?}", asym.map.breakpoints());
    println!("n = 32: {:.4}", wiener_norm_circle(&asym.map, 32, &opts)?.lower);
    Ok(())
}
