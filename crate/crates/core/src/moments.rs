//! `T_k` moments: counts (or weighted sums) over 2k-tuples with
//! `x_1+…+x_k = x'_1+…+x'_k` in Z_N, and the phase-constrained count
//! `T_k^{φ,η}` which additionally requires
//! `‖φ*(x_1)+…+φ*(x_k) − φ*(x'_1) − … − φ*(x'_k)‖ ≤ η`.
//!
//! Counting is meet-in-the-middle: every k-tuple contributes one
//! `(sum, phase)` key, so the cost is `|S|^k` rather than `|S|^{2k}`.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{dft, GroupFunction};
use crate::rational::{self, Rational};
use crate::wiener::CircleMap;

/// Upper limit on the number of 2k-tuples a brute count may represent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkBudget {
    pub max_tuples: u128,
}

impl Default for WorkBudget {
    fn default() -> Self {
        Self {
            max_tuples: 1_000_000_000,
        }
    }
}

impl WorkBudget {
    pub fn new(max_tuples: u128) -> Self {
        Self { max_tuples }
    }

    fn check(&self, support: usize, k: u32) -> Result<()> {
        let needed = (support as u128).saturating_pow(2 * k);
        if needed > self.max_tuples {
            return Err(Error::BudgetExceeded {
                what: "2k-tuple count",
                needed,
                budget: self.max_tuples,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    Brute,
    Spectral,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MomentValue {
    Exact(u128),
    Real(f64),
}

impl MomentValue {
    pub fn as_f64(&self) -> f64 {
        match *self {
            MomentValue::Exact(v) => v as f64,
            MomentValue::Real(v) => v,
        }
    }

    pub fn exact(&self) -> Option<u128> {
        match *self {
            MomentValue::Exact(v) => Some(v),
            MomentValue::Real(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentResult {
    pub k: u32,
    pub value: MomentValue,
    pub method: MomentMethod,
    /// Set when `|T_k| < 1e-6·Σ|weights|`, i.e. the weighted sum cancels so
    /// heavily that relative comparisons are meaningless.
    pub cancellation_warning: bool,
}

/// Calls `visit(sum, index_tuple)` for every k-tuple of `0..m` in
/// lexicographic order; `sum` is the residue of `Σ elems[i]`.
fn for_each_tuple(elems: &[usize], modulus: usize, k: u32, mut visit: impl FnMut(usize, &[usize])) {
    let m = elems.len();
    if m == 0 {
        return;
    }
    let k = k as usize;
    let mut idx = vec![0usize; k];
    let mut partial = vec![0usize; k + 1];
    for j in 0..k {
        partial[j + 1] = (partial[j] + elems[0]) % modulus;
    }
    loop {
        visit(partial[k], &idx);
        // odometer increment from the last position
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < m {
                break;
            }
            idx[pos] = 0;
        }
        for j in pos..k {
            partial[j + 1] = (partial[j] + elems[idx[j]]) % modulus;
        }
    }
}

fn is_indicator(f: &GroupFunction, support: &[usize]) -> bool {
    support.iter().all(|&x| f.get(x) == Complex64::new(1.0, 0.0))
}

/// Weighted count `Σ f(x_1)…f(x_k) conj(f(x'_1)…f(x'_k))` over all solutions.
pub fn t_k_brute(f: &GroupFunction, k: u32, budget: &WorkBudget) -> Result<MomentResult> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let support = f.support();
    budget.check(support.len(), k)?;
    let n = f.modulus();
    if is_indicator(f, &support) {
        let mut hist = vec![0u64; n];
        for_each_tuple(&support, n, k, |s, _| hist[s] += 1);
        let total: u128 = hist.iter().map(|&c| (c as u128) * (c as u128)).sum();
        return Ok(MomentResult {
            k,
            value: MomentValue::Exact(total),
            method: MomentMethod::Brute,
            cancellation_warning: false,
        });
    }
    let weights: Vec<Complex64> = support.iter().map(|&x| f.get(x)).collect();
    let mut hist = vec![Complex64::zero(); n];
    let mut abs_hist = vec![0.0f64; n];
    for_each_tuple(&support, n, k, |s, idx| {
        let w: Complex64 = idx.iter().map(|&i| weights[i]).product();
        hist[s] += w;
        abs_hist[s] += w.norm();
    });
    let total: f64 = hist.iter().map(|w| w.norm_sqr()).sum();
    let scale: f64 = abs_hist.iter().map(|a| a * a).sum();
    Ok(MomentResult {
        k,
        value: MomentValue::Real(total),
        method: MomentMethod::Brute,
        cancellation_warning: total.abs() < 1e-6 * scale,
    })
}

/// `N^{2k-1} Σ_γ |f̂(γ)|^{2k}`.
pub fn t_k_spectral(f: &GroupFunction, k: u32) -> Result<MomentResult> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let spec = dft(f);
    let s: f64 = spec.coefficients().iter().map(|c| c.norm_sqr().powi(k as i32)).sum();
    let value = (f.modulus() as f64).powi(2 * k as i32 - 1) * s;
    Ok(MomentResult {
        k,
        value: MomentValue::Real(value),
        method: MomentMethod::Spectral,
        cancellation_warning: false,
    })
}

fn dedup_sorted(set: &[usize], modulus: usize) -> Vec<usize> {
    let mut v: Vec<usize> = set.iter().map(|&x| x % modulus).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Exact `T_k(χ_S)` for a set in `Z_N` without materializing a function on
/// the whole group; suited to very large moduli.
pub fn t_k_set(set: &[usize], modulus: usize, k: u32, budget: &WorkBudget) -> Result<u128> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let elems = dedup_sorted(set, modulus);
    budget.check(elems.len(), k)?;
    let mut sums: Vec<usize> = Vec::with_capacity(elems.len().pow(k));
    for_each_tuple(&elems, modulus, k, |s, _| sums.push(s));
    sums.sort_unstable();
    Ok(sums
        .chunk_by(|a, b| a == b)
        .map(|c| (c.len() as u128) * (c.len() as u128))
        .sum())
}

/// Counts pairs `(a, b)` from a sorted bucket of phases in `[0, den)` whose
/// circular distance is at most `w`.
fn count_close_pairs<T>(sorted: &[T], den: T, w: T) -> u128
where
    T: Copy + PartialOrd + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + Zero,
{
    let m = sorted.len();
    let mut total: u128 = 0;
    let count_range = |lo: T, hi: T| -> usize {
        // number of entries in [lo, hi]
        let a = sorted.partition_point(|&v| v < lo);
        let b = sorted.partition_point(|&v| v <= hi);
        b.saturating_sub(a)
    };
    for &p in sorted {
        let lo = p - w;
        let hi = p + w;
        let mut c = count_range(lo, hi);
        if lo < T::zero() {
            c += count_range(lo + den, den);
        }
        if hi >= den {
            c += count_range(T::zero(), hi - den);
        }
        total += c.min(m) as u128;
    }
    total
}

/// Exact `T_k^{φ,η}(S)`; the phase test runs in integer arithmetic on a
/// common denominator, with tuples exactly at distance η counted as inside.
pub fn t_k_phi(
    set: &[usize],
    modulus: usize,
    phi: &CircleMap,
    eta: Rational,
    k: u32,
    budget: &WorkBudget,
) -> Result<u128> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    if eta.is_negative() {
        return Err(Error::Precondition("eta must be nonnegative".into()));
    }
    let elems = dedup_sorted(set, modulus);
    budget.check(elems.len(), k)?;
    let turns: Vec<Rational> = elems.iter().map(|&x| phi.phi_star_turns(modulus, x)).collect();
    let den = rational::common_denominator(&turns).ok_or(Error::PhaseOverflow)?;
    if den.checked_mul(2 * k as i128 + 2).is_none() || den > 1 << 100 {
        return Err(Error::PhaseOverflow);
    }
    let phase: Vec<i128> = turns
        .iter()
        .map(|t| (t * Rational::from(den)).to_integer().rem_euclid(den))
        .collect();
    // ‖d/den‖ ≤ η  ⇔  circle_numerator(d) ≤ ⌊η·den⌋
    let w = Integer::div_floor(&eta.numer().checked_mul(den).ok_or(Error::PhaseOverflow)?, eta.denom());

    let mut keys: Vec<(usize, i128)> = Vec::with_capacity(elems.len().pow(k));
    for_each_tuple(&elems, modulus, k, |s, idx| {
        let p = idx.iter().map(|&i| phase[i]).sum::<i128>().rem_euclid(den);
        keys.push((s, p));
    });
    keys.sort_unstable();
    let mut total: u128 = 0;
    let mut start = 0;
    while start < keys.len() {
        let s = keys[start].0;
        let end = start + keys[start..].partition_point(|e| e.0 == s);
        let bucket: Vec<i128> = keys[start..end].iter().map(|e| e.1).collect();
        let m = bucket.len() as u128;
        if 2 * w + 1 >= den {
            total += m * m;
        } else {
            total += count_close_pairs(&bucket, den, w);
        }
        start = end;
    }
    Ok(total)
}

/// Absolute slack used by [`t_k_phi_float`] when comparing a phase distance
/// against η. Results from this variant are not certified.
pub const FLOAT_PHASE_TOL: f64 = 1e-9;

/// `T_k^{φ,η}` for arbitrary real phases (in turns, one per element of
/// `set`); a tuple counts when its phase distance is `≤ η + 1e-9`.
pub fn t_k_phi_float(
    set: &[usize],
    phases: &[f64],
    modulus: usize,
    eta: f64,
    k: u32,
    budget: &WorkBudget,
) -> Result<u128> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    if set.len() != phases.len() {
        return Err(Error::Precondition("one phase per element is required".into()));
    }
    if let Some(&bad) = phases.iter().find(|p| !p.is_finite()) {
        return Err(Error::NonFinite(bad));
    }
    budget.check(set.len(), k)?;
    let elems: Vec<usize> = set.iter().map(|&x| x % modulus).collect();
    let phase: Vec<f64> = phases.iter().map(|p| p.rem_euclid(1.0)).collect();
    let mut keys: Vec<(usize, f64)> = Vec::with_capacity(elems.len().pow(k));
    for_each_tuple(&elems, modulus, k, |s, idx| {
        let p = idx.iter().map(|&i| phase[i]).sum::<f64>().rem_euclid(1.0);
        keys.push((s, p));
    });
    keys.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let w = eta + FLOAT_PHASE_TOL;
    let mut total = 0u128;
    let mut start = 0;
    while start < keys.len() {
        let s = keys[start].0;
        let end = start + keys[start..].partition_point(|e| e.0 == s);
        let bucket: Vec<f64> = keys[start..end].iter().map(|e| e.1).collect();
        let m = bucket.len() as u128;
        if w >= 0.5 {
            total += m * m;
        } else {
            total += count_close_pairs(&bucket, 1.0, w);
        }
        start = end;
    }
    Ok(total)
}

/// Lower bound `|Q|^{2k} / (|S|·K^{2k-2})` for `T_k(χ_Q)` when `Q ⊆ S` and
/// `‖χ_S‖_A ≤ K`.
pub fn tk_est_lower_bound(q_size: usize, s_size: usize, wiener_norm: f64, k: u32) -> f64 {
    let k = k as i32;
    (q_size as f64).powi(2 * k) / (s_size as f64 * wiener_norm.powi(2 * k - 2))
}

/// `2^{3k} k^k |Λ|^k max{1, (k/|Λ|)^k |Λ|^{k/s}}` for Λ in Λ(k,s) with
/// `|Λ| ≥ k`; `None` when that hypothesis fails.
pub fn lambda_k_upper_bound(k: u32, s: u32, size: usize) -> Option<f64> {
    if size < k as usize || size == 0 {
        return None;
    }
    let kf = k as f64;
    let l = size as f64;
    let m = 1f64.max((kf / l).powf(kf) * l.powf(kf / s as f64));
    Some(2f64.powf(3.0 * kf) * kf.powf(kf) * l.powf(kf) * m)
}

/// `2^{4k+2} k^{k+1} |Λ|^k max{1, (k/|Λ|)^k |Λ|^{4k/s}}` bounding
/// `T_k^{φ,η/2}(Λ)` for Λ in Λ^{φ,η}(2k,s), `s ≥ 5`; `None` otherwise.
pub fn lambda_k_phi_upper_bound(k: u32, s: u32, size: usize) -> Option<f64> {
    if s < 5 || size == 0 {
        return None;
    }
    let kf = k as f64;
    let l = size as f64;
    let m = 1f64.max((kf / l).powf(kf) * l.powf(4.0 * kf / s as f64));
    Some(2f64.powf(4.0 * kf + 2.0) * kf.powf(kf + 1.0) * l.powf(kf) * m)
}

/// `(Ck)^k |Λ|^k`, the dissociated-set moment bound with explicit `C`.
pub fn rudin_upper_bound(k: u32, size: usize, c: f64) -> f64 {
    let kf = k as f64;
    (c * kf).powf(kf) * (size as f64).powf(kf)
}

/// `|S|^{2k} / (2N ν^{2k-1})`, the tuple-count lower bound used in the
/// main scan.
pub fn phase_tuple_lower_bound(s_size: usize, modulus: usize, nu: f64, k: u32) -> f64 {
    let k = k as i32;
    (s_size as f64).powi(2 * k) / (2.0 * modulus as f64 * nu.powi(2 * k - 1))
}
