//! Constructive steps: random translate sums, simultaneous Dirichlet
//! approximation, rescaling by units, the Littlewood L¹ integral, the
//! small-set characteristic pipeline, and Kahane's piecewise linear maps.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::dissociation::{max_dissociated_subset, spanning_witness, FamilySpec, SubsetMode};
use crate::error::{Error, Result};
use crate::group::{dft, CyclicGroup, GroupFunction};
use crate::rational::{self, Rational};
use crate::wiener::{wiener_norm_group, CircleMap};

/// `χ_A − |A|/N`, the mean-zero base function.
pub fn centered_indicator(group: CyclicGroup, set: &[usize]) -> GroupFunction {
    let f = GroupFunction::indicator(group, set);
    let m = f.mean();
    f.add(&GroupFunction::constant(group, -m)).expect("same group")
}

/// `f(x) = Σ_j f_0(x − x_j)`.
#[derive(Clone, Debug)]
pub struct TranslateSum {
    pub base: GroupFunction,
    pub translates: Vec<usize>,
    pub seed: u64,
}

impl TranslateSum {
    /// Draws `k` independent uniform translates from the stream seeded by `seed`.
    pub fn sample(base: GroupFunction, k: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = base.modulus();
        let translates = (0..k).map(|_| rng.gen_range(0..n)).collect();
        Self { base, translates, seed }
    }

    pub fn k(&self) -> usize {
        self.translates.len()
    }

    pub fn materialize(&self) -> GroupFunction {
        let mut f = GroupFunction::zero(self.base.group());
        for &t in &self.translates {
            f = f.add(&self.base.translate(t)).expect("same group");
        }
        f
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslateTrial {
    pub trial: u64,
    pub translates: Vec<usize>,
    pub norm: f64,
    pub sup: f64,
    pub mean_coefficient: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TranslateReport {
    pub seed: u64,
    pub trials: u64,
    pub k: usize,
    pub base_norm: f64,
    pub base_sup: f64,
    /// `√k·‖f_0‖_A`.
    pub bound: f64,
    pub mean_norm: f64,
    pub standard_error: f64,
    pub fraction_within_bound: f64,
    /// `mean ≤ √k‖f_0‖_A·(1 + 3·SE)`, up to [`MEAN_ROUNDOFF`].
    pub mean_check: bool,
    /// `|f̂(0)| ≤ 1e-9` on every trial.
    pub zero_coefficient_check: bool,
    /// `‖f‖_∞ ≤ min(k‖f_0‖_∞, ‖f‖_A) + 1e-9` on every trial.
    pub sup_check: bool,
    pub per_trial: Vec<TranslateTrial>,
}

/// Relative slack on the mean check. At `k = 1` every trial is a single
/// translate, so the mean equals the bound and only rounding separates them.
pub const MEAN_ROUNDOFF: f64 = 1e-12;

/// Monte Carlo over `k = ⌊1/(2η)⌋` uniform translates of `f0`; trial `t`
/// uses the stream seeded by `seed ^ t`.
pub fn random_translate_sum(f0: &GroupFunction, eta: f64, trials: u64, seed: u64) -> Result<TranslateReport> {
    if !(eta > 0.0 && eta < 0.5) {
        return Err(Error::Precondition("eta must lie in (0, 1/2)".into()));
    }
    if trials == 0 {
        return Err(Error::Precondition("trials must be positive".into()));
    }
    let k = (1.0 / (2.0 * eta)).floor() as usize;
    let base_norm = wiener_norm_group(f0);
    let base_sup = f0.sup_norm();
    let bound = (k as f64).sqrt() * base_norm;
    let mut per_trial = Vec::with_capacity(trials as usize);
    let (mut zero_ok, mut sup_ok) = (true, true);
    for t in 0..trials {
        let ts = TranslateSum::sample(f0.clone(), k, seed ^ t);
        let f = ts.materialize();
        let spec = dft(&f);
        let norm = spec.l1_norm();
        let sup = f.sup_norm();
        let c0 = spec.get(0).norm();
        zero_ok &= c0 <= 1e-9;
        sup_ok &= sup <= (k as f64 * base_sup).min(norm) + 1e-9;
        per_trial.push(TranslateTrial {
            trial: t,
            translates: ts.translates,
            norm,
            sup,
            mean_coefficient: c0,
        });
    }
    let n = trials as f64;
    let mean = per_trial.iter().map(|t| t.norm).sum::<f64>() / n;
    let se = if trials > 1 {
        let var = per_trial.iter().map(|t| (t.norm - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    let within = per_trial.iter().filter(|t| t.norm <= bound + 1e-12).count() as f64 / n;
    Ok(TranslateReport {
        seed,
        trials,
        k,
        base_norm,
        base_sup,
        bound,
        mean_norm: mean,
        standard_error: se,
        fraction_within_bound: within,
        mean_check: mean <= bound * (1.0 + 3.0 * se + MEAN_ROUNDOFF),
        zero_coefficient_check: zero_ok,
        sup_check: sup_ok,
        per_trial,
    })
}

/// A phase given either exactly, as a rational number of turns, or as a
/// real number of radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Phase {
    Turns(Rational),
    Radians(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproximationResult {
    pub q: u128,
    /// `max_i ‖qθ_i‖`.
    pub achieved: f64,
    /// The same quantity as an exact rational when every input is exact.
    pub achieved_exact: Option<String>,
    pub eps: String,
    pub search_bound: u128,
}

/// Largest scan performed on real-valued inputs.
pub const FLOAT_SCAN_LIMIT: u128 = 100_000_000;

fn pigeonhole_bound(eps: &Rational, dim: usize) -> Option<u128> {
    let c = Integer::div_ceil(eps.denom(), eps.numer());
    (c as u128).checked_pow(dim as u32)
}

/// Least `q ∈ [1, q_max]` with `max_i ‖qθ_i‖ ≤ eps`. Without
/// `allow_failure`, `q_max` must cover the pigeonhole bound `⌈1/ε⌉^dim`.
/// Returns `Ok(None)` only when `allow_failure` is set and no `q` exists.
pub fn dirichlet_approx(
    theta: &[Phase],
    eps: Rational,
    q_max: u128,
    allow_failure: bool,
) -> Result<Option<ApproximationResult>> {
    if !rational::is_positive(&eps) {
        return Err(Error::Precondition("eps must be positive".into()));
    }
    if q_max == 0 {
        return Err(Error::Precondition("q_max must be positive".into()));
    }
    if !allow_failure && pigeonhole_bound(&eps, theta.len()).is_none_or(|b| q_max < b) {
        return Err(Error::Precondition(format!(
            "q_max = {q_max} is below the pigeonhole bound ceil(1/eps)^{}",
            theta.len()
        )));
    }
    let exact: Option<Vec<Rational>> = theta
        .iter()
        .map(|p| match p {
            Phase::Turns(r) => Some(rational::frac(r)),
            Phase::Radians(_) => None,
        })
        .collect();
    let found = match exact {
        Some(t) => {
            // qθ is periodic in q with period lcm of the denominators
            let period = rational::common_denominator(&t).ok_or(Error::PhaseOverflow)? as u128;
            let nums: Vec<(i128, i128)> = t.iter().map(|r| (*r.numer(), *r.denom())).collect();
            let mut hit = None;
            for q in 1..=q_max.min(period) {
                let mut worst = Rational::zero();
                for &(a, b) in &nums {
                    let r = ((q % b as u128) as i128 * a).rem_euclid(b);
                    let d = Rational::new(r.min(b - r), b);
                    if d > worst {
                        worst = d;
                    }
                }
                if worst <= eps {
                    hit = Some((q, worst));
                    break;
                }
            }
            hit.map(|(q, w)| ApproximationResult {
                q,
                achieved: rational::to_f64(&w),
                achieved_exact: Some(rational::format_rational(&w)),
                eps: rational::format_rational(&eps),
                search_bound: q_max,
            })
        }
        None => {
            let limit = q_max.min(FLOAT_SCAN_LIMIT);
            if limit < q_max && !allow_failure {
                return Err(Error::BudgetExceeded {
                    what: "real-valued Dirichlet scan",
                    needed: q_max,
                    budget: FLOAT_SCAN_LIMIT,
                });
            }
            let turns: Vec<f64> = theta
                .iter()
                .map(|p| match p {
                    Phase::Turns(r) => rational::to_f64(r),
                    Phase::Radians(x) => x / std::f64::consts::TAU,
                })
                .collect();
            let e = rational::to_f64(&eps);
            let mut hit = None;
            for q in 1..=limit {
                let worst = turns
                    .iter()
                    .map(|t| {
                        let v = (q as f64 * t).rem_euclid(1.0);
                        v.min(1.0 - v)
                    })
                    .fold(0.0, f64::max);
                if worst <= e {
                    hit = Some((q, worst));
                    break;
                }
            }
            hit.map(|(q, w)| ApproximationResult {
                q,
                achieved: w,
                achieved_exact: None,
                eps: rational::format_rational(&eps),
                search_bound: q_max,
            })
        }
    };
    match found {
        Some(r) => Ok(Some(r)),
        None if allow_failure => Ok(None),
        None => Err(Error::NoWitness(format!("no q ≤ {q_max} achieves the target"))),
    }
}

/// `B = {qa : a ∈ A}` in `Z_p`, sorted.
pub fn rescale_set(set: &[usize], q: usize, modulus: usize) -> Result<Vec<usize>> {
    if q % modulus == 0 || q.gcd(&modulus) != 1 {
        return Err(Error::Precondition(format!("{q} is not a unit modulo {modulus}")));
    }
    let mut b: Vec<usize> = set
        .iter()
        .map(|&a| ((a as u128 * q as u128) % modulus as u128) as usize)
        .collect();
    b.sort_unstable();
    b.dedup();
    Ok(b)
}

/// Largest node count tried by [`littlewood_integral`].
pub const LITTLEWOOD_MAX_NODES: usize = 1 << 24;

/// Trapezoid values of `(1/2π)∫|Σ_b e^{ibx}|dx` on `m` nodes.
fn trapezoid(coeffs: &[f64], m: usize, planner: &mut FftPlanner<f64>) -> f64 {
    let mut buf = vec![Complex64::zero(); m];
    for (i, &c) in coeffs.iter().enumerate() {
        buf[i].re = c;
    }
    planner.plan_fft_forward(m).process(&mut buf);
    buf.iter().map(|z| z.norm()).sum::<f64>() / m as f64
}

/// `(1/2π)∫_{−π}^{π} |Σ_{b∈B} e^{ibx}| dx` by the periodic trapezoid rule,
/// with Richardson extrapolation over node doublings until successive
/// extrapolants differ by less than `1e-6`.
pub fn littlewood_integral(set: &[i64], quad_points: usize) -> Result<f64> {
    let mut b: Vec<i64> = set.to_vec();
    b.sort_unstable();
    b.dedup();
    let (Some(&lo), Some(&hi)) = (b.first(), b.last()) else {
        return Ok(0.0);
    };
    let span = (hi - lo) as usize;
    if quad_points < 64 * (span + 1) {
        return Err(Error::Precondition(format!(
            "quad_points must be at least {}",
            64 * (span + 1)
        )));
    }
    let mut coeffs = vec![0.0; span + 1];
    for &x in &b {
        coeffs[(x - lo) as usize] = 1.0;
    }
    let mut planner = FftPlanner::new();
    let mut m = quad_points.next_power_of_two();
    let mut t_prev = trapezoid(&coeffs, m, &mut planner);
    let mut r_prev: Option<f64> = None;
    let mut last_change = f64::INFINITY;
    let mut refinements = 0;
    while m * 2 <= LITTLEWOOD_MAX_NODES {
        m *= 2;
        refinements += 1;
        let t = trapezoid(&coeffs, m, &mut planner);
        let r = (4.0 * t - t_prev) / 3.0;
        if let Some(rp) = r_prev {
            last_change = (r - rp).abs();
            if last_change < 1e-6 {
                return Ok(r);
            }
        }
        r_prev = Some(r);
        t_prev = t;
    }
    Err(Error::NoConvergence {
        refinements,
        last_change,
    })
}

/// Littlewood integral with the minimal admissible node count.
pub fn littlewood_integral_auto(set: &[i64]) -> Result<f64> {
    let span = match (set.iter().min(), set.iter().max()) {
        (Some(lo), Some(hi)) => (hi - lo) as usize,
        _ => 0,
    };
    littlewood_integral(set, 64 * (span + 1))
}

#[derive(Clone, Debug, Serialize)]
pub struct CharsmallReport {
    pub p: usize,
    pub set: Vec<usize>,
    pub basis: Vec<usize>,
    pub d: usize,
    pub q: Option<usize>,
    /// `max_λ |qλ|` over signed representatives.
    pub max_q_lambda: Option<i64>,
    /// `p^{1−1/d}`.
    pub lambda_bound: Option<f64>,
    /// `max_λ |qλ| ≤ p^{1−1/d}`, compared exactly as `max^d ≤ p^{d−1}`.
    pub lambda_bound_holds: Option<bool>,
    /// Every `a ∉ basis` is `Σ ε_λ λ` with `ε ∈ {−1,0,1}`, and
    /// `|qa| ≤ Σ|qλ|` for its signed representative.
    pub spanning_holds: bool,
    pub rescaled: Vec<i64>,
    pub max_b: Option<i64>,
    /// `B ⊆ [−p/3, p/3]`.
    pub third_containment: Option<bool>,
    pub littlewood: Option<f64>,
    pub norm_a: f64,
    pub norm_b: Option<f64>,
    pub norm_identity_holds: Option<bool>,
    pub norm_over_log_size: Option<f64>,
    pub norm_over_integral: Option<f64>,
}

fn signed_rep(x: usize, p: usize) -> i64 {
    CyclicGroup::new(p).expect("positive modulus").signed(x % p)
}

/// The dimension → Dirichlet → rescale → L¹ comparison chain for `A ⊂ Z_p`.
pub fn charsmall_pipeline(set: &[usize], p: usize) -> Result<CharsmallReport> {
    let group = CyclicGroup::new(p)?;
    if !group.is_prime() {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let mut a: Vec<usize> = set.iter().map(|&x| x % p).collect();
    a.sort_unstable();
    a.dedup();
    let basis = max_dissociated_subset(&a, p, SubsetMode::Exact)?;
    let d = basis.len();
    let norm_a = wiener_norm_group(&GroupFunction::indicator(group, &a));

    let q = if d == 0 {
        None
    } else {
        let mut best: Option<(i64, usize)> = None;
        for q in 1..p {
            let m = basis.iter().map(|&l| signed_rep(l * q % p, p).abs()).max().unwrap_or(0);
            if best.is_none_or(|(bm, _)| m < bm) {
                best = Some((m, q));
            }
        }
        best.map(|(_, q)| q)
    };

    let classical = FamilySpec::classical(p);
    let mut spanning_holds = true;
    for &x in &a {
        if basis.contains(&x) {
            continue;
        }
        match spanning_witness(x, &basis, &classical) {
            Ok(w) => {
                spanning_holds &= w.verify(&classical)? && w.x_coeff.abs() == 1;
                if let Some(q) = q {
                    let lhs = signed_rep(x * q % p, p).abs();
                    let rhs: i64 = w.terms.iter().map(|&(l, _)| signed_rep(l * q % p, p).abs()).sum();
                    spanning_holds &= lhs <= rhs;
                }
            }
            Err(Error::NoWitness(_)) => spanning_holds = false,
            Err(e) => return Err(e),
        }
    }

    let mut report = CharsmallReport {
        p,
        set: a.clone(),
        basis: basis.clone(),
        d,
        q,
        max_q_lambda: None,
        lambda_bound: None,
        lambda_bound_holds: None,
        spanning_holds,
        rescaled: Vec::new(),
        max_b: None,
        third_containment: None,
        littlewood: None,
        norm_a,
        norm_b: None,
        norm_identity_holds: None,
        norm_over_log_size: (a.len() > 1).then(|| norm_a / (a.len() as f64).ln()),
        norm_over_integral: None,
    };
    let Some(q) = q else {
        return Ok(report);
    };
    let mq = basis.iter().map(|&l| signed_rep(l * q % p, p).abs()).max().unwrap_or(0);
    report.max_q_lambda = Some(mq);
    report.lambda_bound = Some((p as f64).powf(1.0 - 1.0 / d as f64));
    let lhs: BigInt = Pow::pow(&BigInt::from(mq), d as u32);
    let rhs: BigInt = Pow::pow(&BigInt::from(p), d as u32 - 1);
    report.lambda_bound_holds = Some(lhs <= rhs);

    let b_set = rescale_set(&a, q, p)?;
    let mut rescaled: Vec<i64> = a.iter().map(|&x| signed_rep(x * q % p, p)).collect();
    rescaled.sort_unstable();
    let max_b = rescaled.iter().map(|b| b.abs()).max().unwrap_or(0);
    report.max_b = Some(max_b);
    report.third_containment = Some(3 * max_b <= p as i64);
    let integral = littlewood_integral_auto(&rescaled)?;
    report.littlewood = Some(integral);
    let norm_b = wiener_norm_group(&GroupFunction::indicator(group, &b_set));
    report.norm_b = Some(norm_b);
    report.norm_identity_holds = Some((norm_a - norm_b).abs() <= 1e-10);
    report.norm_over_integral = Some(norm_a / integral);
    report.rescaled = rescaled;
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub enum KahaneShape {
    /// Slopes `+1, −1` on the two halves, winding 0.
    SymmetricTent,
    /// Slopes `a` then `b`, breaking where the winding works out.
    Asymmetric {
        a: Rational,
        b: Rational,
    },
    Linear,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KahaneMap {
    pub map: CircleMap,
    /// Linear maps have bounded `‖e^{inφ}‖_A` and are not Kahane examples.
    pub linear: bool,
}

pub fn kahane_family(shape: &KahaneShape, winding: i64) -> Result<KahaneMap> {
    let map = match shape {
        KahaneShape::SymmetricTent => {
            if winding != 0 {
                return Err(Error::InvalidCircleMap("the symmetric tent has winding 0".into()));
            }
            CircleMap::tent()
        }
        KahaneShape::Asymmetric { a, b } => {
            if a == b {
                return Err(Error::InvalidCircleMap("equal slopes give a linear map".into()));
            }
            // a·t1 + b·(1 − t1) = winding
            let t1 = (Rational::from(winding as i128) - b) / (a - b);
            if !(t1 > Rational::zero() && t1 < Rational::one()) {
                return Err(Error::InvalidCircleMap(format!(
                    "slopes {} and {} cannot produce winding {winding}",
                    rational::format_rational(a),
                    rational::format_rational(b)
                )));
            }
            CircleMap::new(
                vec![Rational::zero(), t1, Rational::one()],
                vec![*a, *b],
                Rational::zero(),
                winding,
            )?
        }
        KahaneShape::Linear => CircleMap::linear(winding, Rational::zero()),
    };
    let linear = map.is_linear();
    Ok(KahaneMap { map, linear })
}
