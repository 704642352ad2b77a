//! Bohr sets `B(Γ,δ) = {x : ‖γx/N‖ ≤ δ for all γ ∈ Γ}` in `Z_N`, the
//! normalized indicator β, smoothing diagnostics, and parameter calculators.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Pow, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{circle_numerator, convolve, CyclicGroup, GroupFunction};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct BohrSet {
    modulus: usize,
    gamma: Vec<usize>,
    delta: Rational,
    elements: Vec<usize>,
}

impl Serialize for BohrSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            #[serde(rename = "N")]
            modulus: usize,
            gamma: &'a [usize],
            delta: String,
            size: usize,
        }
        Repr {
            modulus: self.modulus,
            gamma: &self.gamma,
            delta: rational::format_rational(&self.delta),
            size: self.elements.len(),
        }
        .serialize(s)
    }
}

fn in_bohr(x: usize, modulus: usize, gamma: &[usize], delta: &Rational) -> bool {
    let n = modulus as i128;
    gamma
        .iter()
        .all(|&g| circle_numerator(g as i128 * x as i128, n) * delta.denom() <= delta.numer() * n)
}

/// Enumerates `B(Γ,δ)` with exact membership:
/// `x ∈ B ⇔ min(γx mod N, N − γx mod N)·q ≤ p·N` for `δ = p/q`.
pub fn bohr_elements(modulus: usize, gamma: &[usize], delta: Rational) -> Result<BohrSet> {
    CyclicGroup::new(modulus)?;
    if !rational::is_positive(&delta) || delta > Rational::one() {
        return Err(Error::Precondition("delta must lie in (0, 1]".into()));
    }
    let mut gamma: Vec<usize> = gamma.iter().map(|&g| g % modulus).collect();
    gamma.sort_unstable();
    gamma.dedup();
    if gamma.is_empty() {
        return Err(Error::Precondition("frequency set must be nonempty".into()));
    }
    let elements = (0..modulus).filter(|&x| in_bohr(x, modulus, &gamma, &delta)).collect();
    Ok(BohrSet {
        modulus,
        gamma,
        delta,
        elements,
    })
}

impl BohrSet {
    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn gamma(&self) -> &[usize] {
        &self.gamma
    }

    pub fn delta(&self) -> Rational {
        self.delta
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// `d = |Γ|`.
    pub fn rank(&self) -> usize {
        self.gamma.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&(x % self.modulus)).is_ok()
    }

    /// `μ(B) = |B|/N`.
    pub fn measure(&self) -> Rational {
        Rational::new(self.size() as i128, self.modulus as i128)
    }

    /// The value `1/μ(B)` that β takes on `B`.
    pub fn beta_value(&self) -> Rational {
        self.measure().recip()
    }
}

/// `β = μ(B)^{-1}·χ_B`.
pub fn beta(b: &BohrSet) -> GroupFunction {
    let g = CyclicGroup::new(b.modulus).expect("validated modulus");
    let v = rational::to_f64(&b.beta_value());
    GroupFunction::indicator(g, &b.elements).scale(Complex64::new(v, 0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureBoundReport {
    pub measure: String,
    /// `δ^d`.
    pub bound: String,
    pub d: usize,
    pub pass: bool,
}

/// Exact check of `μ(B(Γ,δ)) ≥ δ^d`.
pub fn measure_bound_check(b: &BohrSet) -> MeasureBoundReport {
    let d = b.rank() as u32;
    let p = BigInt::from(*b.delta.numer());
    let q = BigInt::from(*b.delta.denom());
    let pd: BigInt = Pow::pow(&p, d);
    let qd: BigInt = Pow::pow(&q, d);
    // |B|/N ≥ p^d/q^d  ⇔  |B|·q^d ≥ N·p^d
    let pass = BigInt::from(b.size()) * &qd >= BigInt::from(b.modulus) * &pd;
    let m = b.measure();
    MeasureBoundReport {
        measure: rational::format_rational(&m),
        bound: format!("{pd}/{qd}"),
        d: d as usize,
        pass,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SmoothingReport {
    /// `sup_x max_{y ∈ x+B'} |f*β(y) − f*β(x)|`.
    pub sup_oscillation: f64,
    /// `sup_x ‖f − f*β‖_{L²(x+B')}` with the normalized measure on the coset.
    pub sup_local_l2: f64,
    pub f_sup: f64,
    /// The diagnostics divided by `‖f‖_∞` (zero when `f ≡ 0`).
    pub implied_eps_oscillation: f64,
    pub implied_eps_l2: f64,
    pub inner_size: usize,
}

/// Left-hand sides of the two smoothing inequalities for `f`, `β` built on
/// `b`, measured on cosets of `inner`.
pub fn smoothing_diagnostics(f: &GroupFunction, b: &BohrSet, inner: &BohrSet) -> Result<SmoothingReport> {
    if b.gamma != inner.gamma {
        return Err(Error::Precondition(
            "inner Bohr set must share the frequency set".into(),
        ));
    }
    if f.modulus() != b.modulus || inner.modulus != b.modulus {
        return Err(Error::ModulusMismatch {
            left: f.modulus(),
            right: b.modulus,
        });
    }
    let n = b.modulus;
    let g = convolve(f, &beta(b))?;
    let (fv, gv) = (f.values(), g.values());
    let mut osc: f64 = 0.0;
    let mut l2: f64 = 0.0;
    for x in 0..n {
        let mut m: f64 = 0.0;
        let mut acc = 0.0;
        for &e in &inner.elements {
            let y = (x + e) % n;
            m = m.max((gv[y] - gv[x]).norm());
            acc += (fv[y] - gv[y]).norm_sqr();
        }
        osc = osc.max(m);
        l2 = l2.max((acc / inner.size() as f64).sqrt());
    }
    let sup = f.sup_norm();
    let ratio = |v: f64| if sup > 0.0 { v / sup } else { 0.0 };
    Ok(SmoothingReport {
        sup_oscillation: osc,
        sup_local_l2: l2,
        f_sup: sup,
        implied_eps_oscillation: ratio(osc),
        implied_eps_l2: ratio(l2),
        inner_size: inner.size(),
    })
}

/// Right-hand sides of the Bohr-set parameter bounds with explicit constant
/// `C`, where `δ′ = εδ/(C·d)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SandersBudget {
    pub a_f: f64,
    pub eps: f64,
    pub constant: f64,
    /// `C·ε⁻²·A(1+ln A)(1+ln(A/ε))`.
    pub d: f64,
    /// `C·ε⁻²·A(1+ln(A/ε))`.
    pub log_inv_delta: f64,
    pub log_inv_delta_prime: f64,
}

impl SandersBudget {
    /// `d·ln(1/δ′)`.
    pub fn d_log_inv_delta_prime(&self) -> f64 {
        self.d * self.log_inv_delta_prime
    }

    /// `(δ′)^d > 1/p`, evaluated in log space from `ln p`.
    pub fn cond_nontrivial(&self, ln_p: f64) -> bool {
        self.d_log_inv_delta_prime() < ln_p
    }
}

pub fn sanders_parameter_budget(a_f: f64, eps: f64, c: f64) -> Result<SandersBudget> {
    if !(a_f >= 1.0) || !a_f.is_finite() {
        return Err(Error::Precondition("A_f must be a finite real ≥ 1".into()));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Precondition("eps must lie in (0, 1]".into()));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::Precondition("C must be positive".into()));
    }
    let inv2 = eps.powi(-2);
    let tail = 1.0 + (a_f / eps).ln();
    let d = c * inv2 * a_f * (1.0 + a_f.ln()) * tail;
    let log_inv_delta = c * inv2 * a_f * tail;
    let log_inv_delta_prime = log_inv_delta + d.max(1.0).ln() + (1.0 / eps).ln() + c.ln();
    Ok(SandersBudget {
        a_f,
        eps,
        constant: c,
        d,
        log_inv_delta,
        log_inv_delta_prime,
    })
}

/// Parameters of the two-case argument for `‖χ_A‖_A` lower bounds at
/// density `η` in `Z_p`. Takes `ln p` so that astronomically large `p` stay
/// representable.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharParameters {
    pub ln_p: f64,
    pub eta: f64,
    pub case: u8,
    /// `(ln p)^{-1/4}(ln ln p)^{1/2}`.
    pub threshold: f64,
    pub k: u64,
    pub u1: f64,
    pub u0: f64,
    pub v0: f64,
    /// The right-hand side of the lower bound with constant 1.
    pub lower_bound: f64,
    /// Budget at `A_f = u0/v0`, `ε = 0.1/v0`.
    pub budget: Option<SandersBudget>,
    pub cond_nontrivial: Option<bool>,
}

pub fn char_parameters(ln_p: f64, eta: f64, c: f64, budget_constant: f64) -> Result<CharParameters> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::Precondition("eta must lie in (0, 1/2)".into()));
    }
    if !(ln_p > std::f64::consts::E) || !ln_p.is_finite() {
        return Err(Error::Precondition("ln p must exceed e so that ln ln p > 1".into()));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Precondition("c must lie in (0, 1)".into()));
    }
    let lp = ln_p;
    let llp = lp.ln();
    let threshold = lp.powf(-0.25) * llp.sqrt();
    let k = (1.0 / (2.0 * eta)).floor() as u64;
    let (case, u1, lower_bound) = if eta >= threshold {
        let inner = eta * eta * lp.sqrt() / llp;
        let br = (1.0 + inner.ln()).powf(-0.5);
        (1, eta * lp.sqrt() / llp * br, lp.sqrt() / llp * eta.powf(1.5) * br)
    } else {
        let u1 = lp.powf(0.25) / llp.sqrt();
        (2, u1, eta.sqrt() * u1)
    };
    let u0 = c * u1;
    let v0 = (k as f64).min(u0);
    let eps = 0.1 / v0;
    let budget = if v0 > 0.0 && eps <= 1.0 && u0 / v0 >= 1.0 {
        Some(sanders_parameter_budget(u0 / v0, eps, budget_constant)?)
    } else {
        None
    };
    let cond = budget.as_ref().map(|b| b.cond_nontrivial(ln_p));
    Ok(CharParameters {
        ln_p,
        eta,
        case,
        threshold,
        k,
        u1,
        u0,
        v0,
        lower_bound,
        budget,
        cond_nontrivial: cond,
    })
}

/// `|B| / N` as `f64`.
pub fn measure_f64(b: &BohrSet) -> f64 {
    b.measure().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::dft;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::seq::index::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(p: i128, q: i128) -> Rational {
        Rational::new(p, q)
    }

    /// Membership through real-valued phases, away from boundary ties.
    fn float_member(x: usize, n: usize, gamma: &[usize], delta: f64) -> bool {
        gamma.iter().all(|&g| {
            let t = (g * x % n) as f64 / n as f64;
            t.min(1.0 - t) <= delta + 1e-12
        })
    }

    #[test]
    fn examples() {
        let b = bohr_elements(8, &[1], r(1, 4)).unwrap();
        assert_eq!(b.elements(), &[0, 1, 2, 6, 7]);
        assert_eq!(b.measure(), r(5, 8));
        assert_eq!(b.beta_value(), r(8, 5));
        assert_eq!(bohr_elements(13, &[3, 5], r(1, 2)).unwrap().size(), 13);
        assert_eq!(bohr_elements(13, &[0], r(1, 100)).unwrap().size(), 13);
        assert!(bohr_elements(13, &[], r(1, 2)).is_err());
        assert!(bohr_elements(13, &[1], r(0, 1)).is_err());
        assert!(bohr_elements(13, &[1], r(3, 2)).is_err());
    }

    #[test]
    fn json_shape() {
        let b = bohr_elements(8, &[1], r(1, 4)).unwrap();
        assert_eq!(
            serde_json::to_value(&b).unwrap(),
            serde_json::json!({"N": 8, "gamma": [1], "delta": "1/4", "size": 5})
        );
    }

    #[test]
    fn beta_normalization() {
        let b = bohr_elements(8, &[1], r(1, 4)).unwrap();
        // (1/N)·|B|·(N/|B|) = 1 exactly
        assert_eq!(
            b.beta_value() * Rational::from(b.size() as i128) / Rational::from(8),
            r(1, 1)
        );
        let bt = beta(&b);
        assert_abs_diff_eq!(bt.get(1).re, 1.6, epsilon = 1e-15);
        let s = dft(&bt);
        assert_abs_diff_eq!(s.get(0).re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.get(0).im, 0.0, epsilon = 1e-14);
        let full = bohr_elements(8, &[1], r(1, 2)).unwrap();
        assert!(beta(&full).values().iter().all(|v| (v.re - 1.0).abs() < 1e-15));
    }

    #[test]
    fn measure_examples() {
        let b = bohr_elements(8, &[1], r(1, 4)).unwrap();
        let rep = measure_bound_check(&b);
        assert!(rep.pass);
        assert_eq!((rep.measure.as_str(), rep.bound.as_str()), ("5/8", "1/4"));
        let b = bohr_elements(101, &[1, 10], r(1, 10)).unwrap();
        let rep = measure_bound_check(&b);
        assert!(rep.pass);
        assert_eq!(rep.bound, "1/100");
        // brute count with the float route
        let cnt = (0..101).filter(|&x| float_member(x, 101, &[1, 10], 0.1)).count();
        assert_eq!(cnt, b.size());
    }

    #[test]
    fn boundary_is_inclusive() {
        // ‖2/8‖ = 1/4 exactly
        assert!(bohr_elements(8, &[1], r(1, 4)).unwrap().contains(2));
        assert!(!bohr_elements(8, &[1], r(1, 5)).unwrap().contains(2));
    }

    #[test]
    fn smoothing_constant_and_singleton() {
        let g = CyclicGroup::new(31).unwrap();
        let b = bohr_elements(31, &[1], r(1, 8)).unwrap();
        let tiny = bohr_elements(31, &[1], r(1, 100)).unwrap();
        assert_eq!(tiny.elements(), &[0]);
        let c = GroupFunction::constant(g, Complex64::new(2.5, 0.0));
        let rep = smoothing_diagnostics(&c, &b, &tiny).unwrap();
        assert_abs_diff_eq!(rep.sup_oscillation, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rep.sup_local_l2, 0.0, epsilon = 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = sample(&mut rng, 31, 9).into_vec();
        let f = GroupFunction::indicator(g, &a);
        let rep = smoothing_diagnostics(&f, &b, &tiny).unwrap();
        assert_abs_diff_eq!(rep.sup_oscillation, 0.0, epsilon = 1e-12);
        // singleton coset: pointwise |f(x) − f*β(x)|, with f*β a local average
        let expect = (0..31)
            .map(|x| {
                let avg = b
                    .elements()
                    .iter()
                    .filter(|&&e| a.contains(&((x + 31 - e) % 31)))
                    .count() as f64
                    / b.size() as f64;
                ((if a.contains(&x) { 1.0 } else { 0.0 }) - avg).abs()
            })
            .fold(0.0, f64::max);
        assert_abs_diff_eq!(rep.sup_local_l2, expect, epsilon = 1e-12);
        let other = bohr_elements(31, &[2], r(1, 8)).unwrap();
        assert!(smoothing_diagnostics(&f, &b, &other).is_err());
    }

    #[test]
    fn oscillation_shrinks_with_inner_radius() {
        let g = CyclicGroup::new(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let a = sample(&mut rng, 101, 30).into_vec();
        let f = GroupFunction::indicator(g, &a)
            .add(&GroupFunction::constant(g, Complex64::new(-30.0 / 101.0, 0.0)))
            .unwrap();
        let b = bohr_elements(101, &[1], r(1, 8)).unwrap();
        let mut last = f64::INFINITY;
        for den in [8, 16, 32, 64, 128, 256] {
            let inner = bohr_elements(101, &[1], r(1, den)).unwrap();
            let rep = smoothing_diagnostics(&f, &b, &inner).unwrap();
            assert!(rep.sup_oscillation <= last + 1e-12);
            last = rep.sup_oscillation;
        }
    }

    #[test]
    fn sanders_budget_examples() {
        let b = sanders_parameter_budget(1.0, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(b.d, 1.0, epsilon = 1e-15);
        let b = sanders_parameter_budget(std::f64::consts::E, 1.0, 1.0).unwrap();
        assert_abs_diff_eq!(b.d, std::f64::consts::E * 4.0, epsilon = 1e-12);
        let b2 = sanders_parameter_budget(std::f64::consts::E, 1.0, 3.0).unwrap();
        assert_abs_diff_eq!(b2.d, 3.0 * b.d, epsilon = 1e-12);
        assert!(sanders_parameter_budget(0.5, 1.0, 1.0).is_err());
        assert!(sanders_parameter_budget(1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn char_case_split() {
        // at p = 10^6 the threshold exceeds 1/2, so only the second case exists
        let small = char_parameters(1e6f64.ln(), 0.25, 0.5, 1.0).unwrap();
        assert!(small.threshold > 0.5);
        assert_eq!(small.case, 2);
        let lp = 1000.0f64;
        let th = lp.powf(-0.25) * lp.ln().sqrt();
        assert!(th < 0.5);
        let at = char_parameters(lp, th, 0.5, 1.0).unwrap();
        assert_eq!(at.case, 1);
        // at the threshold the bracket is 1 + ln(1) and both bounds agree
        let two = char_parameters(lp, th * (1.0 - 1e-12), 0.5, 1.0).unwrap();
        assert_eq!(two.case, 2);
        assert_abs_diff_eq!(at.lower_bound, two.lower_bound, epsilon = 1e-9);
        assert!(at.budget.is_some());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn structure_invariants(
            n in 2usize..400,
            g1 in 0usize..400,
            g2 in 0usize..400,
            p in 1i128..20,
            q in 1i128..60,
        ) {
            prop_assume!(p <= q);
            let d = r(p, q);
            let b1 = bohr_elements(n, &[g1], d).unwrap();
            let b12 = bohr_elements(n, &[g1, g2], d).unwrap();
            let half = bohr_elements(n, &[g1, g2], d / 2).unwrap();
            prop_assert!(b12.contains(0));
            for &x in b12.elements() {
                prop_assert!(b12.contains((n - x) % n));
                prop_assert!(b1.contains(x));
            }
            for &x in half.elements() {
                prop_assert!(b12.contains(x));
            }
            prop_assert!(measure_bound_check(&b12).pass);
            prop_assert!(measure_bound_check(&half).pass);
            let s = dft(&beta(&b12));
            prop_assert!((s.get(0).re - 1.0).abs() < 1e-12);
            prop_assert!(s.coefficients().iter().all(|c| c.norm() <= 1.0 + 1e-12));
        }
    }
}
