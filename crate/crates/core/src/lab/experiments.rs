use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use super::config::{ExperimentConfig, OneOrMany, RationalParam};
use super::report::{Assertion, Report};
use crate::bohr::{self, bohr_elements};
use crate::constructions::{
    centered_indicator, charsmall_pipeline, dirichlet_approx, littlewood_integral_auto, random_translate_sum, Phase,
    MEAN_ROUNDOFF,
};
use crate::dissociation::{check_membership, verify_dim_bound, FamilySpec, SubsetMode};
use crate::error::{Error, Result};
use crate::group::{convolve, dft, dft_chirp, dft_direct, idft, CyclicGroup, GroupFunction};
use crate::moments::{rudin_upper_bound, t_k_brute, t_k_set, t_k_spectral, tk_est_lower_bound, WorkBudget};
use crate::rational::{self, Rational};
use crate::wiener::{wiener_norm_circle, wiener_norm_group, CircleMap, NormOptions};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, size: usize) -> Vec<usize> {
    let mut v = sample(rng, n, size).into_vec();
    v.sort_unstable();
    v
}

fn random_function(rng: &mut ChaCha8Rng, g: CyclicGroup) -> GroupFunction {
    GroupFunction::from_fn(g, |_| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn norm_of(set: &[usize], n: usize) -> Result<f64> {
    Ok(wiener_norm_group(&GroupFunction::indicator(CyclicGroup::new(n)?, set)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct DftParams {
    sizes: Vec<usize>,
    functions: usize,
    tol: f64,
    fast_tol: f64,
}

impl Default for DftParams {
    fn default() -> Self {
        Self {
            sizes: vec![16, 17, 101, 257, 1009],
            functions: 200,
            tol: 1e-10,
            fast_tol: 1e-9,
        }
    }
}

pub fn dft_oracle(cfg: &ExperimentConfig) -> Result<Report> {
    let p: DftParams = cfg.params()?;
    if p.sizes.is_empty() {
        return Err(Error::Config("sizes must be nonempty".into()));
    }
    let mut rep = Report::new(
        "dft-oracle",
        cfg.seed,
        cfg.raw().clone(),
        &[
            "f = idft(dft(f))",
            "(1/N)Σ f·conj(g) = Σ f̂·conj(ĝ)",
            "fast transform = O(N²) transform",
        ],
    );
    let mut r = rng(cfg.seed);
    for i in 0..p.functions {
        let n = p.sizes[i % p.sizes.len()];
        let g = CyclicGroup::new(n)?;
        let f = random_function(&mut r, g);
        let h = random_function(&mut r, g);
        let id = format!("f{i:04}/N={n}");
        let (sf, sh) = (dft(&f), dft(&h));
        let back = idft(&sf);
        let err_id = f
            .values()
            .iter()
            .zip(back.values())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        rep.check(Assertion::le(&id, "inverse_roundtrip_error", err_id, p.tol));
        let err_pars = (f.inner(&h)? - sf.inner(&sh)?).norm();
        rep.check(Assertion::le(&id, "parseval_error", err_pars, p.tol));
        let (fast, slow) = (dft_chirp(&f), dft_direct(&f));
        let err_fast = fast
            .coefficients()
            .iter()
            .zip(slow.coefficients())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        rep.check(Assertion::le(&id, "fast_vs_direct_error", err_fast, p.fast_tol));
    }
    Ok(rep.finish(Value::Null))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct TkParams {
    #[serde(rename = "N")]
    moduli: OneOrMany<usize>,
    k: OneOrMany<u32>,
    sizes: Vec<usize>,
    sets: usize,
    rel_tol: f64,
}

impl Default for TkParams {
    fn default() -> Self {
        Self {
            moduli: OneOrMany::Many(vec![17, 101]),
            k: OneOrMany::Many(vec![1, 2, 3]),
            sizes: (4..=10).collect(),
            sets: 20,
            rel_tol: 1e-8,
        }
    }
}

pub fn tk_oracle(cfg: &ExperimentConfig) -> Result<Report> {
    let p: TkParams = cfg.params()?;
    let mut rep = Report::new(
        "tk-oracle",
        cfg.seed,
        cfg.raw().clone(),
        &["T_k(f) = N^{2k−1} Σ_γ |f̂(γ)|^{2k}", "T_2(χ_{0,1} ⊂ Z_5) = 6"],
    );
    let budget = WorkBudget::default();
    let z5 = CyclicGroup::new(5)?;
    let frozen = t_k_brute(&GroupFunction::indicator(z5, &[0, 1]), 2, &budget)?;
    rep.check(Assertion::eq("frozen/Z5", "T_2", frozen.value.exact().unwrap_or(0), 6));
    let mut r = rng(cfg.seed);
    for n in p.moduli.to_vec() {
        let g = CyclicGroup::new(n)?;
        for &size in &p.sizes {
            if size > n {
                return Err(Error::Config(format!("set size {size} exceeds N = {n}")));
            }
            for j in 0..p.sets {
                let set = random_subset(&mut r, n, size);
                let f = GroupFunction::indicator(g, &set);
                for k in p.k.to_vec() {
                    let id = format!("N={n:04}/size={size:02}/k={k}/#{j:02}");
                    let brute = t_k_brute(&f, k, &budget)?;
                    let Some(exact) = brute.value.exact() else {
                        rep.check(Assertion::holds(&id, "brute_is_exact_integer", false));
                        continue;
                    };
                    let spec = t_k_spectral(&f, k)?.value.as_f64();
                    let rel = (spec - exact as f64).abs() / (exact as f64).max(1.0);
                    rep.check(Assertion::le(&id, "spectral_vs_brute_rel_err", rel, p.rel_tol));
                }
            }
        }
    }
    Ok(rep.finish(Value::Null))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct DimParams {
    #[serde(rename = "N")]
    modulus: usize,
    instances: usize,
    min_size: usize,
    max_size: usize,
    #[serde(rename = "C")]
    constant: f64,
    dyadic_m: u32,
    max_attempts: usize,
}

impl Default for DimParams {
    fn default() -> Self {
        Self {
            modulus: 257,
            instances: 50,
            min_size: 2,
            max_size: 14,
            constant: 10.0,
            dyadic_m: 7,
            max_attempts: 10_000,
        }
    }
}

pub fn dim_bound(cfg: &ExperimentConfig) -> Result<Report> {
    let p: DimParams = cfg.params()?;
    if p.min_size == 0 || p.min_size > p.max_size || p.max_size > p.modulus {
        return Err(Error::Config("need 1 ≤ min_size ≤ max_size ≤ N".into()));
    }
    let mut rep = Report::new(
        "dim-bound",
        cfg.seed,
        cfg.raw().clone(),
        &[
            "dim(S) ≤ C·K²(1 + log(|S|/K²)) for K = ‖χ_S‖_A, K² ≤ |S|",
            "dim{1,2,…,2^m} = m+1",
        ],
    );
    let mut r = rng(cfg.seed);
    let (mut done, mut attempts, mut skipped) = (0, 0, 0);
    let mut dims = Vec::new();
    while done < p.instances && attempts < p.max_attempts {
        attempts += 1;
        let size = r.gen_range(p.min_size..=p.max_size);
        let set = random_subset(&mut r, p.modulus, size);
        let d = verify_dim_bound(&set, p.modulus, p.constant)?;
        let (Some(dim), Some(scale)) = (d.dimension, d.scale) else {
            skipped += 1;
            continue;
        };
        let id = format!("#{done:03}/size={size:02}");
        rep.check(Assertion::le(&id, "dim_vs_bound", dim as f64, p.constant * scale));
        dims.push(json!({"size": size, "K": d.wiener_norm, "dim": dim, "ratio": d.ratio}));
        done += 1;
    }
    rep.check(Assertion::eq("instances", "hypothesis_instances", done, p.instances));
    let dyadic: Vec<usize> = (0..=p.dyadic_m).map(|i| (1usize << i) % p.modulus).collect();
    let dd = crate::dissociation::additive_dimension(&dyadic, p.modulus, SubsetMode::Exact)?;
    rep.check(Assertion::eq("dyadic", "dim", dd, p.dyadic_m as usize + 1));
    Ok(rep.finish(json!({"attempts": attempts, "skipped_hypothesis": skipped, "instances": dims})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RudinParams {
    #[serde(rename = "N")]
    modulus: usize,
    sizes: Vec<usize>,
    ks: Vec<u32>,
    sets_per_size: usize,
    #[serde(rename = "C")]
    constant: f64,
    budget: u128,
}

impl Default for RudinParams {
    fn default() -> Self {
        Self {
            modulus: 1_000_000_007,
            sizes: (2..=14).collect(),
            ks: vec![2, 3, 4],
            sets_per_size: 3,
            constant: 8.0,
            budget: 2_000_000_000,
        }
    }
}

pub fn rudin_calibration(cfg: &ExperimentConfig) -> Result<Report> {
    let p: RudinParams = cfg.params()?;
    let mut rep = Report::new(
        "rudin-calibration",
        cfg.seed,
        cfg.raw().clone(),
        &["T_k(Λ) ≤ (Ck)^k |Λ|^k for dissociated Λ, k ≥ 2"],
    );
    let mut r = rng(cfg.seed);
    let spec = FamilySpec::classical(p.modulus);
    let budget = WorkBudget::new(p.budget);
    let mut ratios = Vec::new();
    for &size in &p.sizes {
        for j in 0..p.sets_per_size {
            let set = loop {
                let s = random_subset(&mut r, p.modulus, size);
                if check_membership(&s, &spec)?.is_dissociated() {
                    break s;
                }
            };
            for &k in &p.ks {
                let id = format!("size={size:02}/#{j}/k={k}");
                let t = t_k_set(&set, p.modulus, k, &budget)?;
                let bound = rudin_upper_bound(k, size, p.constant);
                rep.check(Assertion::new(&id, "T_k", t, "<=", bound, (t as f64) <= bound));
                ratios.push(json!({"size": size, "k": k, "T_k": t.to_string(), "ratio": t as f64 / bound}));
            }
        }
    }
    Ok(rep.finish(json!({"ratios": ratios})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct TkEstParams {
    p: usize,
    instances: usize,
    ks: Vec<u32>,
    max_s: usize,
    rel_slack: f64,
}

impl Default for TkEstParams {
    fn default() -> Self {
        Self {
            p: 101,
            instances: 100,
            ks: vec![1, 2, 3, 4],
            max_s: 30,
            rel_slack: 1e-9,
        }
    }
}

pub fn tkest_inequality(cfg: &ExperimentConfig) -> Result<Report> {
    let p: TkEstParams = cfg.params()?;
    if p.max_s < 1 || p.max_s > p.p {
        return Err(Error::Config("need 1 ≤ max_s ≤ p".into()));
    }
    let mut rep = Report::new(
        "tkest-inequality",
        cfg.seed,
        cfg.raw().clone(),
        &["T_k(χ_Q) ≥ |Q|^{2k} / (|S|·K^{2k−2}), Q ⊆ S, K = ‖χ_S‖_A"],
    );
    let mut r = rng(cfg.seed);
    let g = CyclicGroup::new(p.p)?;
    let budget = WorkBudget::default();
    let kmax = p.ks.iter().copied().max().unwrap_or(1);
    // keep |Q|^{2k} within the brute budget for the largest k
    let qcap = (budget.max_tuples as f64).powf(1.0 / (2 * kmax) as f64).floor() as usize;
    for i in 0..p.instances {
        let s_size = r.gen_range(1..=p.max_s);
        let s = random_subset(&mut r, p.p, s_size);
        let q_size = r.gen_range(1..=s_size.min(qcap.max(1)));
        let q: Vec<usize> = sample(&mut r, s_size, q_size).into_iter().map(|j| s[j]).collect();
        let k_norm = wiener_norm_group(&GroupFunction::indicator(g, &s));
        let fq = GroupFunction::indicator(g, &q);
        for &k in &p.ks {
            let id = format!("#{i:03}/k={k}");
            let t = t_k_brute(&fq, k, &budget)?.value.as_f64();
            let bound = tk_est_lower_bound(q_size, s_size, k_norm, k);
            rep.check(Assertion::new(
                &id,
                "T_k(chi_Q)",
                t,
                ">=",
                bound,
                t >= bound * (1.0 - p.rel_slack),
            ));
        }
    }
    Ok(rep.finish(Value::Null))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct ComplementParams {
    p: OneOrMany<usize>,
    trials: usize,
    tol: f64,
}

impl Default for ComplementParams {
    fn default() -> Self {
        Self {
            p: OneOrMany::Many(vec![101, 1009]),
            trials: 100,
            tol: 1e-9,
        }
    }
}

pub fn complement_identity(cfg: &ExperimentConfig) -> Result<Report> {
    let p: ComplementParams = cfg.params()?;
    let mut rep = Report::new(
        "complement-identity",
        cfg.seed,
        cfg.raw().clone(),
        &["‖χ_{Z_p∖A}‖_A − ‖χ_A‖_A = 1 − 2|A|/p"],
    );
    let mut r = rng(cfg.seed);
    for n in p.p.to_vec() {
        if n < 2 {
            return Err(Error::Config("p must be at least 2".into()));
        }
        for t in 0..p.trials {
            let size = r.gen_range(1..n);
            let a = random_subset(&mut r, n, size);
            let comp: Vec<usize> = (0..n).filter(|x| a.binary_search(x).is_err()).collect();
            let lhs = norm_of(&comp, n)? - norm_of(&a, n)?;
            let rhs = 1.0 - 2.0 * size as f64 / n as f64;
            rep.check(Assertion::close(
                format!("p={n:04}/#{t:03}"),
                "norm_difference",
                lhs,
                rhs,
                p.tol,
            ));
        }
    }
    Ok(rep.finish(Value::Null))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct BohrParams {
    moduli: Vec<usize>,
    instances: usize,
    max_rank: usize,
    max_den: i128,
}

impl Default for BohrParams {
    fn default() -> Self {
        Self {
            moduli: vec![8, 101, 1009, 4096],
            instances: 60,
            max_rank: 3,
            max_den: 64,
        }
    }
}

fn bohr_checks(rep: &mut Report, id: &str, n: usize, gamma: &[usize], delta: Rational) -> Result<Value> {
    let b = bohr_elements(n, gamma, delta)?;
    let m = bohr::measure_bound_check(&b);
    rep.check(Assertion::new(
        id,
        "measure_vs_delta_pow_d",
        m.measure.clone(),
        ">=",
        m.bound.clone(),
        m.pass,
    ));
    let asym = b.elements().iter().filter(|&&x| !b.contains((n - x) % n)).count();
    rep.check(Assertion::eq(id, "asymmetric_elements", asym, 0));
    rep.check(Assertion::holds(id, "contains_zero", b.contains(0)));
    let half = bohr_elements(n, gamma, delta / 2)?;
    let mut nest = half.elements().iter().filter(|&&x| !b.contains(x)).count();
    if gamma.len() > 1 {
        let fewer = bohr_elements(n, &gamma[..gamma.len() - 1], delta)?;
        nest += b.elements().iter().filter(|&&x| !fewer.contains(x)).count();
    }
    rep.check(Assertion::eq(id, "nesting_violations", nest, 0));
    let s = dft(&bohr::beta(&b));
    rep.check(Assertion::close(id, "beta_hat_0", s.get(0).re, 1.0, 1e-12));
    let top = s.coefficients().iter().map(|c| c.norm()).fold(0.0, f64::max);
    rep.check(Assertion::le(id, "max_abs_beta_hat", top, 1.0 + 1e-12));
    Ok(serde_json::to_value(&b)?)
}

pub fn bohr_measure(cfg: &ExperimentConfig) -> Result<Report> {
    let p: BohrParams = cfg.params()?;
    if p.moduli.is_empty() || p.max_rank == 0 || p.max_den < 1 {
        return Err(Error::Config("need nonempty moduli, max_rank ≥ 1, max_den ≥ 1".into()));
    }
    let mut rep = Report::new(
        "bohr-measure",
        cfg.seed,
        cfg.raw().clone(),
        &["B(Γ,δ) = {x : ‖γx/N‖ ≤ δ, γ ∈ Γ}", "μ(B(Γ,δ)) ≥ δ^d", "β̂(0) = 1"],
    );
    let mut sets = vec![bohr_checks(&mut rep, "fixed/N=8", 8, &[1], Rational::new(1, 4))?];
    sets.push(bohr_checks(
        &mut rep,
        "fixed/N=101",
        101,
        &[1, 10],
        Rational::new(1, 10),
    )?);
    let mut r = rng(cfg.seed);
    for i in 0..p.instances {
        let n = p.moduli[i % p.moduli.len()];
        let d = r.gen_range(1..=p.max_rank);
        let gamma: Vec<usize> = (0..d).map(|_| r.gen_range(0..n)).collect();
        let den = r.gen_range(1..=p.max_den);
        let num = r.gen_range(1..=den);
        let id = format!("#{i:03}/N={n:04}");
        sets.push(bohr_checks(&mut rep, &id, n, &gamma, Rational::new(num, den))?);
    }
    Ok(rep.finish(json!({"sets": sets})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SandersParams {
    p: usize,
    size: usize,
    gamma: Vec<usize>,
    delta: RationalParam,
    inner: Vec<RationalParam>,
    budget_constant: f64,
    c: f64,
    eps_values: Vec<f64>,
    char_ln_p: Vec<f64>,
    char_eta: Vec<f64>,
}

impl Default for SandersParams {
    fn default() -> Self {
        Self {
            p: 101,
            size: 30,
            gamma: vec![1],
            delta: RationalParam(Rational::new(1, 8)),
            inner: [16, 32, 64, 128, 256]
                .iter()
                .map(|&d| RationalParam(Rational::new(1, d)))
                .collect(),
            budget_constant: 1.0,
            c: 0.5,
            eps_values: vec![1.0, 0.5, 0.1],
            char_ln_p: vec![(1e6f64).ln(), 1000.0],
            char_eta: vec![0.05, 0.1, 0.25, 0.45],
        }
    }
}

pub fn sanders_diagnostics(cfg: &ExperimentConfig) -> Result<Report> {
    let p: SandersParams = cfg.params()?;
    if p.size == 0 || p.size >= p.p {
        return Err(Error::Config("need 0 < size < p".into()));
    }
    let mut rep = Report::new(
        "sanders-diagnostics",
        cfg.seed,
        cfg.raw().clone(),
        &[
            "sup_x ‖f*β − f*β(x)‖_{L∞(x+B(Γ,δ′))} ≤ ε‖f‖_∞",
            "sup_x ‖f − f*β‖_{L²(x+B(Γ,δ′))} ≤ ε‖f‖_∞",
            "(f*g)^ = f̂·ĝ",
            "d ≪ ε^{−2}A_f(1+log A_f)(1+log(ε^{−1}A_f))",
            "(δ′)^d > 1/p",
        ],
    );
    let mut r = rng(cfg.seed);
    let g = CyclicGroup::new(p.p)?;
    let a = random_subset(&mut r, p.p, p.size);
    let f = centered_indicator(g, &a);
    let b = bohr_elements(p.p, &p.gamma, p.delta.0)?;
    let beta = bohr::beta(&b);
    let conv = dft(&convolve(&f, &beta)?);
    let prod = dft(&f).pointwise_mul(&dft(&beta))?;
    let err = conv
        .coefficients()
        .iter()
        .zip(prod.coefficients())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    rep.check(Assertion::le("convolution", "four_conv_error", err, 1e-10));

    let mut inner_sorted: Vec<Rational> = p.inner.iter().map(|x| x.0).collect();
    inner_sorted.sort_by(|x, y| y.cmp(x));
    let mut last: Option<f64> = None;
    let mut diags = Vec::new();
    for d in &inner_sorted {
        let inner = bohr_elements(p.p, &p.gamma, *d)?;
        let s = bohr::smoothing_diagnostics(&f, &b, &inner)?;
        let id = format!("delta_prime={}", rational::format_rational(d));
        if let Some(prev) = last {
            rep.check(Assertion::le(
                &id,
                "oscillation_nonincreasing",
                s.sup_oscillation,
                prev + 1e-12,
            ));
        }
        last = Some(s.sup_oscillation);
        diags.push(json!({"delta_prime": rational::format_rational(d), "report": s}));
    }

    let a_f = (wiener_norm_group(&f) / f.sup_norm()).max(1.0);
    let budgets: Vec<Value> = p
        .eps_values
        .iter()
        .map(|&e| bohr::sanders_parameter_budget(a_f, e, p.budget_constant).map(|b| json!(b)))
        .collect::<Result<_>>()?;
    let mut table = Vec::new();
    for &lp in &p.char_ln_p {
        let th = lp.powf(-0.25) * lp.ln().sqrt();
        let mut etas = p.char_eta.clone();
        if th < 0.5 {
            etas.push(th);
        }
        for eta in etas {
            table.push(json!(bohr::char_parameters(lp, eta, p.c, p.budget_constant)?));
        }
    }
    Ok(rep.finish(json!({
        "set": a,
        "bohr": b,
        "diagnostics": diags,
        "A_f": a_f,
        "budgets": budgets,
        "case_parameters": table,
    })))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct TranslateParams {
    p: usize,
    sets: usize,
    min_size: usize,
    max_size: usize,
    trials: u64,
}

impl Default for TranslateParams {
    fn default() -> Self {
        Self {
            p: 101,
            sets: 5,
            min_size: 3,
            max_size: 40,
            trials: 400,
        }
    }
}

pub fn translate_expectation(cfg: &ExperimentConfig) -> Result<Report> {
    let p: TranslateParams = cfg.params()?;
    if p.min_size == 0 || p.min_size > p.max_size || 2 * p.max_size >= p.p {
        return Err(Error::Config("need 1 ≤ min_size ≤ max_size < p/2".into()));
    }
    let mut rep = Report::new(
        "translate-expectation",
        cfg.seed,
        cfg.raw().clone(),
        &[
            "f = Σ_{j≤k} f_0(x − x_j), k = [1/(2η)]",
            "E‖f‖_A ≤ √k ‖f_0‖_A",
            "f̂(0) = 0",
            "‖f‖_∞ ≤ k, ‖f‖_∞ ≤ ‖f‖_A",
        ],
    );
    let mut r = rng(cfg.seed);
    let g = CyclicGroup::new(p.p)?;
    let mut summaries = Vec::new();
    for i in 0..p.sets {
        let size = r.gen_range(p.min_size..=p.max_size);
        let a = random_subset(&mut r, p.p, size);
        let set_seed: u64 = r.gen();
        let eta = size as f64 / p.p as f64;
        let t = random_translate_sum(&centered_indicator(g, &a), eta, p.trials, set_seed)?;
        let id = format!("set{i:02}/size={size:02}");
        rep.check(Assertion::le(
            &id,
            "mean_norm",
            t.mean_norm,
            t.bound * (1.0 + 3.0 * t.standard_error + MEAN_ROUNDOFF),
        ));
        let c0 = t.per_trial.iter().map(|x| x.mean_coefficient).fold(0.0, f64::max);
        rep.check(Assertion::le(&id, "max_abs_f_hat_0", c0, 1e-9));
        let excess = t
            .per_trial
            .iter()
            .map(|x| x.sup - (t.k as f64 * t.base_sup).min(x.norm))
            .fold(f64::NEG_INFINITY, f64::max);
        rep.check(Assertion::le(&id, "max_sup_excess", excess, 1e-9));
        summaries.push(json!({
            "set": a,
            "seed": set_seed,
            "trials": t.trials,
            "k": t.k,
            "base_norm": t.base_norm,
            "bound": t.bound,
            "mean_norm": t.mean_norm,
            "standard_error": t.standard_error,
            "fraction_within_bound": t.fraction_within_bound,
            "norms": t.per_trial.iter().map(|x| x.norm).collect::<Vec<_>>(),
        }));
    }
    Ok(rep.finish(json!({"sets": summaries})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct DirichletParams {
    instances: usize,
    max_dim: usize,
    max_den: i128,
    max_eps_den: i128,
    theta: Option<Vec<RationalParam>>,
    eps: Option<RationalParam>,
    q_max: Option<u128>,
}

impl Default for DirichletParams {
    fn default() -> Self {
        Self {
            instances: 40,
            max_dim: 3,
            max_den: 60,
            max_eps_den: 12,
            theta: None,
            eps: None,
            q_max: None,
        }
    }
}

fn dirichlet_instance(
    rep: &mut Report,
    id: &str,
    theta: &[Rational],
    eps: Rational,
    q_max: Option<u128>,
) -> Result<Value> {
    let bound = q_max.unwrap_or_else(|| {
        let c = num_integer::Integer::div_ceil(eps.denom(), eps.numer()) as u128;
        c.saturating_pow(theta.len() as u32)
    });
    let phases: Vec<Phase> = theta.iter().map(|t| Phase::Turns(*t)).collect();
    let res = dirichlet_approx(&phases, eps, bound, false)?.ok_or_else(|| Error::NoWitness(id.to_string()))?;
    let worst = theta
        .iter()
        .map(|t| rational::dist_to_int(&(t * Rational::from(res.q as i128))))
        .max()
        .unwrap_or_default();
    rep.check(Assertion::new(
        id,
        "max_dist_q_theta",
        rational::format_rational(&worst),
        "<=",
        rational::format_rational(&eps),
        worst <= eps,
    ));
    rep.check(Assertion::new(
        id,
        "q",
        res.q,
        "<=",
        bound,
        res.q >= 1 && res.q <= bound,
    ));
    Ok(json!(res))
}

pub fn dirichlet(cfg: &ExperimentConfig) -> Result<Report> {
    let p: DirichletParams = cfg.params()?;
    let mut rep = Report::new(
        "dirichlet",
        cfg.seed,
        cfg.raw().clone(),
        &["‖qθ_i‖ ≤ ε for all i, 1 ≤ q ≤ ⌈1/ε⌉^{dim}"],
    );
    let mut results = Vec::new();
    if let Some(theta) = &p.theta {
        let eps = p.eps.map(|e| e.0).unwrap_or(Rational::new(1, 10));
        let t: Vec<Rational> = theta.iter().map(|x| x.0).collect();
        results.push(dirichlet_instance(&mut rep, "config", &t, eps, p.q_max)?);
        return Ok(rep.finish(json!({"results": results})));
    }
    let golden = dirichlet_approx(
        &[Phase::Radians(0.618034 * std::f64::consts::TAU)],
        Rational::new(1, 10),
        10,
        false,
    )?
    .ok_or_else(|| Error::NoWitness("golden".into()))?;
    rep.check(Assertion::eq("golden", "q", golden.q, 5));
    let mut r = rng(cfg.seed);
    for i in 0..p.instances {
        let dim = r.gen_range(1..=p.max_dim);
        let theta: Vec<Rational> = (0..dim)
            .map(|_| {
                let b = r.gen_range(1..=p.max_den);
                Rational::new(r.gen_range(0..b), b)
            })
            .collect();
        let eps = Rational::new(1, r.gen_range(2..=p.max_eps_den));
        results.push(dirichlet_instance(&mut rep, &format!("#{i:03}"), &theta, eps, None)?);
    }
    Ok(rep.finish(json!({"golden": golden, "results": results})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct CharsmallParams {
    p: usize,
    set: Vec<usize>,
}

impl Default for CharsmallParams {
    fn default() -> Self {
        Self {
            p: 10007,
            set: vec![1, 2, 4, 8],
        }
    }
}

pub fn charsmall(cfg: &ExperimentConfig) -> Result<Report> {
    let p: CharsmallParams = cfg.params()?;
    let mut rep = Report::new(
        "charsmall",
        cfg.seed,
        cfg.raw().clone(),
        &[
            "|qλ| ≤ p^{1−1/d}",
            "b = Σ ε_λ qλ",
            "‖χ_A‖_A = ‖χ_B‖_A, B = qA",
            "B ⊆ [−p/3, p/3]",
            "‖χ_B‖_A ≫ ∫|Σ_{b∈B} e^{ibx}|dx",
        ],
    );
    let c = charsmall_pipeline(&p.set, p.p)?;
    let id = format!("p={}", p.p);
    match (c.max_q_lambda, c.lambda_bound, c.lambda_bound_holds) {
        (Some(m), Some(b), Some(ok)) => rep.check(Assertion::new(&id, "max_abs_q_lambda", m, "<=", b, ok)),
        _ => rep.observe(Assertion::holds(&id, "dirichlet_q_found", false)),
    }
    rep.check(Assertion::holds(&id, "spanning_representation", c.spanning_holds));
    if let (Some(nb), Some(ok)) = (c.norm_b, c.norm_identity_holds) {
        rep.check(Assertion::new(&id, "norm_A_vs_norm_B", c.norm_a, "~1e-10", nb, ok));
    }
    if let Some(ok) = c.third_containment {
        rep.observe(Assertion::new(
            &id,
            "max_abs_b",
            c.max_b.unwrap_or(0),
            "<=",
            p.p as f64 / 3.0,
            ok,
        ));
    }
    if let Some(ratio) = c.norm_over_log_size {
        rep.observe(Assertion::ge(&id, "norm_over_log_size", ratio, 0.5));
    }
    Ok(rep.finish(json!(c)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct LittlewoodParams {
    m_values: Vec<usize>,
    ratio_lo: f64,
    ratio_hi: f64,
    ratio_from: usize,
    tol_m2: f64,
}

impl Default for LittlewoodParams {
    fn default() -> Self {
        Self {
            m_values: (1..=10).map(|i| 1usize << i).collect(),
            ratio_lo: 0.3,
            ratio_hi: 0.6,
            ratio_from: 64,
            tol_m2: 1e-4,
        }
    }
}

/// `(1/2π)∫|Σ_{b<m} e^{ibx}|dx` for `m` in order, with the pinned checks.
pub fn littlewood_growth(cfg: &ExperimentConfig) -> Result<Report> {
    let p: LittlewoodParams = cfg.params()?;
    let mut rep = Report::new(
        "littlewood-growth",
        cfg.seed,
        cfg.raw().clone(),
        &[
            "∫_{−π}^{π} |Σ_{b∈B} e^{ibx}| dx ≫ log|B|",
            "(1/2π)∫|1 + e^{ix}|dx = 4/π",
        ],
    );
    let mut series = Vec::new();
    let mut prev: Option<(usize, f64)> = None;
    for &m in &p.m_values {
        if m == 0 {
            return Err(Error::Config("m must be positive".into()));
        }
        let b: Vec<i64> = (0..m as i64).collect();
        let v = littlewood_integral_auto(&b)?;
        let id = format!("m={m:05}");
        if m == 2 {
            rep.check(Assertion::close(
                &id,
                "integral",
                v,
                4.0 / std::f64::consts::PI,
                p.tol_m2,
            ));
        }
        if let Some((pm, pv)) = prev {
            if m > pm {
                rep.check(Assertion::new(&id, "integral_increase", v, ">", pv, v > pv));
            }
        }
        let ratio = if m > 1 { Some(v / (m as f64).ln()) } else { None };
        if let Some(ratio) = ratio {
            if m >= p.ratio_from {
                rep.check(Assertion::new(
                    &id,
                    "integral_over_log_m",
                    ratio,
                    "in",
                    format!("[{}, {}]", p.ratio_lo, p.ratio_hi),
                    ratio >= p.ratio_lo && ratio <= p.ratio_hi,
                ));
            }
        }
        series.push(json!({"m": m, "integral": v, "over_log_m": ratio}));
        prev = Some((m, v));
    }
    Ok(rep.finish(json!({"series": series})))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct KahaneParams {
    n_values: Vec<i64>,
    tol: f64,
    k_max: i64,
    min_slope: f64,
    min_r2: f64,
    phi: Option<CircleMap>,
}

impl Default for KahaneParams {
    fn default() -> Self {
        Self {
            n_values: (1..=8).map(|i| 1i64 << i).collect(),
            tol: 1e-2,
            k_max: 1 << 20,
            min_slope: 0.15,
            min_r2: 0.9,
            phi: None,
        }
    }
}

/// Least-squares fit `y ≈ a + b·x`; returns `(a, b, R²)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let ss_res: f64 = x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum();
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    (a, b, 1.0 - ss_res / ss_tot)
}

pub fn kahane_growth(cfg: &ExperimentConfig) -> Result<Report> {
    let p: KahaneParams = cfg.params()?;
    if p.n_values.len() < 2 || p.n_values.iter().any(|&n| n < 1) {
        return Err(Error::Config("need at least two positive n values".into()));
    }
    let mut rep = Report::new(
        "kahane-growth",
        cfg.seed,
        cfg.raw().clone(),
        &[
            "‖e^{inφ}‖_{A(T)} ≍ log|n| for piecewise linear, non-linear φ",
            "‖e^{inφ}‖_{A(T)} = 1 for linear φ",
        ],
    );
    let opts = NormOptions {
        tol: p.tol,
        k_max: p.k_max,
    };
    let phi = p.phi.clone().unwrap_or_else(CircleMap::tent);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut series = Vec::new();
    for &n in &p.n_values {
        let iv = wiener_norm_circle(&phi, n, &opts)?;
        xs.push((n as f64).ln());
        ys.push(iv.lower);
        series.push(json!({"n": n, "interval": iv}));
    }
    let (a, b, r2) = linear_fit(&xs, &ys);
    rep.check(Assertion::new("fit", "slope_b", b, ">", p.min_slope, b > p.min_slope));
    rep.check(Assertion::new("fit", "r_squared", r2, ">", p.min_r2, r2 > p.min_r2));
    let linear = CircleMap::linear(1, Rational::from(0));
    let mut lin = Vec::new();
    for &n in &p.n_values {
        let iv = wiener_norm_circle(&linear, n, &opts)?;
        rep.check(Assertion::new(
            format!("linear/n={n:04}"),
            "interval_contains_1",
            format!("[{}, {}]", iv.lower, iv.upper),
            "contains~tol",
            1.0,
            iv.contains(1.0, p.tol),
        ));
        lin.push(json!({"n": n, "interval": iv}));
    }
    Ok(rep.finish(json!({
        "phi": phi,
        "fit": {"a": a, "b": b, "r_squared": r2},
        "series": series,
        "linear": lin,
    })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 + 0.5 * v).collect();
        let (a, b, r2) = linear_fit(&x, &y);
        assert!((a - 2.0).abs() < 1e-12 && (b - 0.5).abs() < 1e-12 && (r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn small_runs_pass() {
        let cfg = ExperimentConfig::named("complement-identity", 7)
            .with_param("p", json!(101))
            .with_param("trials", json!(50));
        let r = complement_identity(&cfg).unwrap();
        assert!(r.passed());
        assert_eq!(r.assertions.len(), 50);
        let cfg = ExperimentConfig::named("tk-oracle", 1)
            .with_param("N", json!(17))
            .with_param("k", json!(3))
            .with_param("sizes", json!([4, 6, 8]));
        assert!(tk_oracle(&cfg).unwrap().passed());
    }
}
