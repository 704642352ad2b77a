//! Dissociativity certificates, additive dimension, and the bounded-relation
//! families Λ(k,s) and Λ^{φ,η}(k,s).
//!
//! A *relation* on a list `λ_1,…,λ_m` of residues is a nonzero integer vector
//! `c` with `Σ c_i λ_i ≡ 0 (mod N)`. The notions differ in which relations are
//! admissible:
//!
//! * classical: `c_i ∈ {-1, 0, 1}`;
//! * Λ(k,s): `|c_i| ≤ s` and `Σ|c_i| ≤ 2k`;
//! * Λ^{φ,η}(k,s): as Λ(k,s), and additionally `‖Σ c_i φ*(λ_i)‖ ≤ η`.
//!
//! A set is a member (dissociated) iff it has no admissible relation.
//! Searches are meet-in-the-middle over the two halves of the list, and are
//! exhaustive: every "dissociated" verdict is a proof over the whole space.

use std::collections::HashMap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{circle_numerator, CyclicGroup, GroupFunction};
use crate::rational::{self, Rational};
use crate::wiener::{wiener_norm_group, CircleMap};

/// Default limit on the number of half-vectors a relation search enumerates.
pub const DEFAULT_SEARCH_BUDGET: u128 = 100_000_000;

/// Largest set accepted by [`SubsetMode::Exact`].
pub const EXACT_MAX_SET: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Notion {
    Classical,
    LambdaKs,
    LambdaKsPhi,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    notion: Notion,
    modulus: usize,
    k: u32,
    s: u32,
    eta: Option<Rational>,
    phi: Option<CircleMap>,
}

impl FamilySpec {
    pub fn classical(modulus: usize) -> Self {
        Self {
            notion: Notion::Classical,
            modulus,
            k: 0,
            s: 1,
            eta: None,
            phi: None,
        }
    }

    /// Λ(k,s): relations with `|c_i| ≤ s`, `Σ|c_i| ≤ 2k`.
    pub fn lambda_ks(modulus: usize, k: u32, s: u32) -> Result<Self> {
        if k == 0 || s == 0 {
            return Err(Error::Precondition("k and s must be positive".into()));
        }
        Ok(Self {
            notion: Notion::LambdaKs,
            modulus,
            k,
            s,
            eta: None,
            phi: None,
        })
    }

    /// Λ^{φ,η}(k,s); `η ∈ (0, 1]`.
    pub fn lambda_ks_phi(modulus: usize, k: u32, s: u32, phi: CircleMap, eta: Rational) -> Result<Self> {
        if k == 0 || s == 0 {
            return Err(Error::Precondition("k and s must be positive".into()));
        }
        if !rational::is_positive(&eta) || eta > Rational::from(1) {
            return Err(Error::Precondition("eta must lie in (0, 1]".into()));
        }
        Ok(Self {
            notion: Notion::LambdaKsPhi,
            modulus,
            k,
            s,
            eta: Some(eta),
            phi: Some(phi),
        })
    }

    pub fn notion(&self) -> Notion {
        self.notion
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn eta(&self) -> Option<Rational> {
        self.eta
    }

    pub fn phi(&self) -> Option<&CircleMap> {
        self.phi.as_ref()
    }

    fn coeff_max(&self) -> i64 {
        self.s as i64
    }

    /// Upper limit on `Σ|c_i|`, `None` for the classical notion.
    pub fn weight_max(&self) -> Option<u32> {
        match self.notion {
            Notion::Classical => None,
            _ => Some(2 * self.k),
        }
    }

    fn params(&self) -> FamilyParams {
        FamilyParams {
            modulus: self.modulus,
            k: (self.notion != Notion::Classical).then_some(self.k),
            s: (self.notion != Notion::Classical).then_some(self.s),
            eta: self.eta.map(|e| rational::format_rational(&e)),
        }
    }

    /// Phase numerators of `φ*(λ)` on a common denominator, with the
    /// integer window `⌊η·D⌋`.
    fn phase_data(&self, elems: &[usize]) -> Result<Option<PhaseData>> {
        let (Some(phi), Some(eta)) = (&self.phi, self.eta) else {
            return Ok(None);
        };
        let turns: Vec<Rational> = elems.iter().map(|&x| phi.phi_star_turns(self.modulus, x)).collect();
        let den = rational::common_denominator(&turns).ok_or(Error::PhaseOverflow)?;
        if den > 1 << 80 {
            return Err(Error::PhaseOverflow);
        }
        let nums = turns
            .iter()
            .map(|t| (t * Rational::from(den)).to_integer().rem_euclid(den))
            .collect();
        let window = Integer::div_floor(&eta.numer().checked_mul(den).ok_or(Error::PhaseOverflow)?, eta.denom());
        Ok(Some(PhaseData { nums, den, window }))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyParams {
    #[serde(rename = "N")]
    pub modulus: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
}

struct PhaseData {
    nums: Vec<i128>,
    den: i128,
    window: i128,
}

impl PhaseData {
    fn accepts(&self, phase_sum: i128) -> bool {
        circle_numerator(phase_sum, self.den) <= self.window
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Dissociated,
    Dependent,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DissociativityCertificate {
    pub verdict: Verdict,
    /// Coefficients aligned with the checked list; present iff dependent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<Vec<i64>>,
    pub notion: Notion,
    pub params: FamilyParams,
}

impl DissociativityCertificate {
    pub fn is_dissociated(&self) -> bool {
        self.verdict == Verdict::Dissociated
    }

    /// Re-checks a dependent verdict by direct arithmetic. Dissociated
    /// verdicts carry no witness and return `true`.
    pub fn verify(&self, elems: &[usize], spec: &FamilySpec) -> Result<bool> {
        match &self.relation {
            None => Ok(self.verdict == Verdict::Dissociated),
            Some(rel) => relation_holds(elems, rel, spec),
        }
    }
}

/// Whether `rel` is an admissible nonzero relation on `elems` for `spec`.
pub fn relation_holds(elems: &[usize], rel: &[i64], spec: &FamilySpec) -> Result<bool> {
    if rel.len() != elems.len() || rel.iter().all(|&c| c == 0) {
        return Ok(false);
    }
    if rel.iter().any(|c| c.abs() > spec.coeff_max()) {
        return Ok(false);
    }
    if let Some(w) = spec.weight_max() {
        if rel.iter().map(|c| c.unsigned_abs()).sum::<u64>() > w as u64 {
            return Ok(false);
        }
    }
    let n = spec.modulus as i128;
    let lin: i128 = elems.iter().zip(rel).map(|(&x, &c)| c as i128 * x as i128).sum();
    if lin.rem_euclid(n) != 0 {
        return Ok(false);
    }
    if let (Some(phi), Some(eta)) = (spec.phi(), spec.eta()) {
        let ph: Rational = elems
            .iter()
            .zip(rel)
            .map(|(&x, &c)| phi.phi_star_turns(spec.modulus, x) * Rational::from(c as i128))
            .sum();
        if rational::dist_to_int(&ph) > eta {
            return Ok(false);
        }
    }
    Ok(true)
}

struct HalfVec {
    coeffs: Vec<i8>,
    weight: u32,
    sum: usize,
    phase: i128,
}

/// Number of vectors of length `len` with `|c_i| ≤ cmax` and `Σ|c_i| ≤ wmax`.
fn count_vectors(len: usize, cmax: i64, wmax: u32) -> u128 {
    // dp[w] = number of prefixes with weight exactly w
    let mut dp = vec![0u128; wmax as usize + 1];
    dp[0] = 1;
    for _ in 0..len {
        let mut next = vec![0u128; wmax as usize + 1];
        for (w, &c) in dp.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for a in 0..=cmax {
                let nw = w + a as usize;
                if nw > wmax as usize {
                    break;
                }
                let mult = if a == 0 { 1 } else { 2 };
                next[nw] = next[nw].saturating_add(c.saturating_mul(mult));
            }
        }
        dp = next;
    }
    dp.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

fn enumerate_half(
    elems: &[usize],
    modulus: usize,
    cmax: i64,
    wmax: u32,
    phases: Option<&[i128]>,
    out: &mut Vec<HalfVec>,
) {
    fn rec(
        i: usize,
        elems: &[usize],
        modulus: usize,
        cmax: i64,
        wmax: u32,
        phases: Option<&[i128]>,
        cur: &mut Vec<i8>,
        weight: u32,
        sum: i128,
        phase: i128,
        out: &mut Vec<HalfVec>,
    ) {
        if i == elems.len() {
            out.push(HalfVec {
                coeffs: cur.clone(),
                weight,
                sum: sum.rem_euclid(modulus as i128) as usize,
                phase,
            });
            return;
        }
        let room = (wmax - weight) as i64;
        let lim = cmax.min(room);
        for c in -lim..=lim {
            cur.push(c as i8);
            let p = phases.map_or(0, |ph| phase + c as i128 * ph[i]);
            rec(
                i + 1,
                elems,
                modulus,
                cmax,
                wmax,
                phases,
                cur,
                weight + c.unsigned_abs() as u32,
                sum + c as i128 * elems[i] as i128,
                p,
                out,
            );
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(elems.len());
    rec(0, elems, modulus, cmax, wmax, phases, &mut cur, 0, 0, 0, out);
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Order {
    /// Lexicographically least sign-normalized relation.
    Lex,
    /// Least total weight, ties broken lexicographically.
    WeightThenLex,
}

/// Exhaustive meet-in-the-middle search for an admissible relation on
/// `elems`. With `require_first`, only relations whose first coefficient is
/// nonzero are admissible. Returns the canonical witness: sign-normalized
/// (first nonzero coefficient positive) and least under `order`.
fn find_relation(elems: &[usize], spec: &FamilySpec, require_first: bool, budget: u128) -> Result<Option<Vec<i64>>> {
    let n = elems.len();
    if n == 0 {
        return Ok(None);
    }
    let cmax = spec.coeff_max();
    if cmax > i8::MAX as i64 {
        return Err(Error::Precondition("coefficient bound too large".into()));
    }
    let wmax = spec.weight_max().unwrap_or((n as i64 * cmax) as u32);
    let order = match spec.notion {
        Notion::Classical => Order::Lex,
        _ => Order::WeightThenLex,
    };
    let split = n.div_ceil(2);
    let (left, right) = elems.split_at(split);
    let needed = count_vectors(left.len(), cmax, wmax) + count_vectors(right.len(), cmax, wmax);
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: "relation search half-vectors",
            needed,
            budget,
        });
    }
    let phase = spec.phase_data(elems)?;
    let (lp, rp) = match &phase {
        Some(p) => {
            let (a, b) = p.nums.split_at(split);
            (Some(a), Some(b))
        }
        None => (None, None),
    };
    let mut lv = Vec::new();
    enumerate_half(left, spec.modulus, cmax, wmax, lp, &mut lv);
    let mut rv = Vec::new();
    enumerate_half(right, spec.modulus, cmax, wmax, rp, &mut rv);
    let mut by_sum: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, v) in rv.iter().enumerate() {
        by_sum.entry(v.sum).or_default().push(i);
    }

    let modulus = spec.modulus;
    let mut best: Option<(u32, Vec<i64>)> = None;
    for a in &lv {
        if require_first && a.coeffs[0] == 0 {
            continue;
        }
        let want = (modulus - a.sum) % modulus;
        let Some(bucket) = by_sum.get(&want) else {
            continue;
        };
        for &j in bucket {
            let b = &rv[j];
            let weight = a.weight + b.weight;
            if weight == 0 || weight > wmax {
                continue;
            }
            if let Some(p) = &phase {
                if !p.accepts(a.phase + b.phase) {
                    continue;
                }
            }
            let mut full: Vec<i64> = a.coeffs.iter().chain(&b.coeffs).map(|&c| c as i64).collect();
            if full.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                full.iter_mut().for_each(|c| *c = -*c);
            }
            let better = match &best {
                None => true,
                Some((bw, bv)) => match order {
                    Order::Lex => full < *bv,
                    Order::WeightThenLex => (weight, &full) < (*bw, bv),
                },
            };
            if better {
                best = Some((weight, full));
            }
        }
    }
    Ok(best.map(|(_, v)| v))
}

/// Decides membership of the list `set` (taken mod N, in the given order)
/// in the family described by `spec`.
pub fn check_membership(set: &[usize], spec: &FamilySpec) -> Result<DissociativityCertificate> {
    check_membership_with_budget(set, spec, DEFAULT_SEARCH_BUDGET)
}

pub fn check_membership_with_budget(
    set: &[usize],
    spec: &FamilySpec,
    budget: u128,
) -> Result<DissociativityCertificate> {
    let elems: Vec<usize> = set.iter().map(|&x| x % spec.modulus).collect();
    let relation = find_relation(&elems, spec, false, budget)?;
    if let Some(rel) = &relation {
        debug_assert!(relation_holds(&elems, rel, spec).unwrap_or(false));
    }
    Ok(DissociativityCertificate {
        verdict: if relation.is_some() {
            Verdict::Dependent
        } else {
            Verdict::Dissociated
        },
        relation,
        notion: spec.notion,
        params: spec.params(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetMode {
    /// Inclusion-maximal, scanning residues in ascending order.
    Greedy,
    /// Maximum cardinality; lexicographically least among the maximum ones.
    Exact,
}

fn normalize_set(set: &[usize], modulus: usize) -> Vec<usize> {
    let mut v: Vec<usize> = set.iter().map(|&x| x % modulus).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Greedy inclusion-maximal member of `spec`'s family inside `set`.
pub fn greedy_family_subset(set: &[usize], spec: &FamilySpec) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::new();
    for x in normalize_set(set, spec.modulus) {
        chosen.push(x);
        if !check_membership(&chosen, spec)?.is_dissociated() {
            chosen.pop();
        }
    }
    Ok(chosen)
}

/// Maximum classical dissociated subset by branch and bound. A set is
/// dissociated iff its `2^d` subset sums are distinct, so extending by `x`
/// is allowed iff `(sums + x) ∩ sums = ∅`.
fn exact_dissociated_subset(elems: &[usize], modulus: usize) -> Vec<usize> {
    struct Search<'a> {
        elems: &'a [usize],
        modulus: usize,
        cap: usize,
        best: Vec<usize>,
        seen: Vec<bool>,
    }
    impl Search<'_> {
        fn rec(&mut self, i: usize, chosen: &mut Vec<usize>, sums: &mut Vec<usize>) {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            if self.best.len() >= self.cap || i == self.elems.len() {
                return;
            }
            if chosen.len() + (self.elems.len() - i) <= self.best.len() {
                return;
            }
            let x = self.elems[i];
            let clash = sums.iter().any(|&s| self.seen[(s + x) % self.modulus]);
            if !clash {
                let old = sums.len();
                for j in 0..old {
                    let t = (sums[j] + x) % self.modulus;
                    self.seen[t] = true;
                    sums.push(t);
                }
                chosen.push(x);
                self.rec(i + 1, chosen, sums);
                chosen.pop();
                for &t in &sums[old..] {
                    self.seen[t] = false;
                }
                sums.truncate(old);
            }
            self.rec(i + 1, chosen, sums);
        }
    }
    // 2^d distinct sums need 2^d ≤ N
    let cap = (usize::BITS - 1 - modulus.leading_zeros()) as usize;
    let mut seen = vec![false; modulus];
    seen[0] = true;
    let mut s = Search {
        elems,
        modulus,
        cap,
        best: Vec::new(),
        seen,
    };
    let mut sums = vec![0usize];
    s.rec(0, &mut Vec::new(), &mut sums);
    s.best
}

/// Maximal (greedy) or maximum (exact) classical dissociated subset.
pub fn max_dissociated_subset(set: &[usize], modulus: usize, mode: SubsetMode) -> Result<Vec<usize>> {
    let elems = normalize_set(set, modulus);
    match mode {
        SubsetMode::Greedy => greedy_family_subset(&elems, &FamilySpec::classical(modulus)),
        SubsetMode::Exact => {
            if elems.len() > EXACT_MAX_SET {
                return Err(Error::BudgetExceeded {
                    what: "exact dimension set size",
                    needed: elems.len() as u128,
                    budget: EXACT_MAX_SET as u128,
                });
            }
            Ok(exact_dissociated_subset(&elems, modulus))
        }
    }
}

/// `dim(S)`: size of a maximal (greedy) or maximum (exact) dissociated subset.
pub fn additive_dimension(set: &[usize], modulus: usize, mode: SubsetMode) -> Result<usize> {
    Ok(max_dissociated_subset(set, modulus, mode)?.len())
}

/// `x_coeff · x ≡ Σ c_j λ_j (mod N)`, plus the phase condition
/// `‖x_coeff·φ*(x) − Σ c_j φ*(λ_j)‖ ≤ η` for the φ family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanningWitness {
    pub x: usize,
    pub x_coeff: i64,
    /// `(λ_j, c_j)` with `c_j ≠ 0`.
    pub terms: Vec<(usize, i64)>,
}

impl SpanningWitness {
    pub fn weight(&self) -> u64 {
        self.x_coeff.unsigned_abs() + self.terms.iter().map(|t| t.1.unsigned_abs()).sum::<u64>()
    }

    /// Direct re-check against `spec`.
    pub fn verify(&self, spec: &FamilySpec) -> Result<bool> {
        if self.x_coeff == 0 {
            return Ok(false);
        }
        let mut elems = vec![self.x];
        let mut rel = vec![self.x_coeff];
        for &(l, c) in &self.terms {
            elems.push(l);
            rel.push(-c);
        }
        relation_holds(&elems, &rel, spec)
    }
}

/// Relation certifying that adjoining `x` to `basis` leaves the family.
pub fn spanning_witness(x: usize, basis: &[usize], spec: &FamilySpec) -> Result<SpanningWitness> {
    let x = x % spec.modulus;
    let basis: Vec<usize> = basis.iter().map(|&l| l % spec.modulus).collect();
    if basis.contains(&x) {
        return Err(Error::Precondition(format!("{x} already belongs to the basis")));
    }
    let mut elems = vec![x];
    elems.extend_from_slice(&basis);
    let rel = find_relation(&elems, spec, true, DEFAULT_SEARCH_BUDGET)?
        .ok_or_else(|| Error::NoWitness(format!("{x} is not spanned; the basis is not maximal")))?;
    let terms = basis
        .iter()
        .zip(&rel[1..])
        .filter(|(_, &c)| c != 0)
        .map(|(&l, &c)| (l, -c))
        .collect();
    Ok(SpanningWitness {
        x,
        x_coeff: rel[0],
        terms,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DimBoundReport {
    pub size: usize,
    pub wiener_norm: f64,
    pub hypothesis_met: bool,
    pub dimension: Option<usize>,
    /// `K²(1 + ln(|S|/K²))`.
    pub scale: Option<f64>,
    pub ratio: Option<f64>,
    pub constant: f64,
    /// `None` when the hypothesis `K² ≤ |S|` fails.
    pub pass: Option<bool>,
}

/// Checks `dim(S) ≤ C·K²(1 + ln(|S|/K²))` with `K = ‖χ_S‖_A`, using the
/// exact dimension.
pub fn verify_dim_bound(set: &[usize], modulus: usize, c: f64) -> Result<DimBoundReport> {
    let elems = normalize_set(set, modulus);
    let g = CyclicGroup::new(modulus)?;
    let k = wiener_norm_group(&GroupFunction::indicator(g, &elems));
    let k2 = k * k;
    let size = elems.len();
    if size == 0 || k2 > size as f64 * (1.0 + 1e-9) {
        return Ok(DimBoundReport {
            size,
            wiener_norm: k,
            hypothesis_met: false,
            dimension: None,
            scale: None,
            ratio: None,
            constant: c,
            pass: None,
        });
    }
    let dim = additive_dimension(&elems, modulus, SubsetMode::Exact)?;
    let scale = k2 * (1.0 + (size as f64 / k2).ln().max(0.0));
    let ratio = dim as f64 / scale;
    Ok(DimBoundReport {
        size,
        wiener_norm: k,
        hypothesis_met: true,
        dimension: Some(dim),
        scale: Some(scale),
        ratio: Some(ratio),
        constant: c,
        pass: Some(ratio <= c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::seq::index::sample;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Full enumeration of `{-1,0,1}^m`.
    fn naive_classical_dissociated(set: &[usize], n: usize) -> bool {
        let m = set.len();
        // the code with every digit 1 is the zero vector
        let zero_code = (3usize.pow(m as u32) - 1) / 2;
        for code in 0..3usize.pow(m as u32) {
            let mut c = code;
            let mut s: i64 = 0;
            for &x in set {
                s += ((c % 3) as i64 - 1) * x as i64;
                c /= 3;
            }
            if code != zero_code && s.rem_euclid(n as i64) == 0 {
                return false;
            }
        }
        true
    }

    #[test]
    fn classical_examples() {
        let c = check_membership(&[1, 2], &FamilySpec::classical(7)).unwrap();
        assert!(c.is_dissociated());
        assert!(naive_classical_dissociated(&[1, 2], 7));

        let spec = FamilySpec::classical(101);
        let c = check_membership(&[1, 2, 3], &spec).unwrap();
        assert_eq!(c.verdict, Verdict::Dependent);
        assert_eq!(c.relation.as_deref(), Some(&[1, 1, -1][..]));
        assert!(c.verify(&[1, 2, 3], &spec).unwrap());

        let c = check_membership(&[0], &spec).unwrap();
        assert_eq!(c.relation.as_deref(), Some(&[1][..]));
    }

    #[test]
    fn lambda_ks_example() {
        let spec = FamilySpec::lambda_ks(101, 2, 2).unwrap();
        let c = check_membership(&[1, 2], &spec).unwrap();
        assert_eq!(c.relation.as_deref(), Some(&[2, -1][..]));
        assert!(c.verify(&[1, 2], &spec).unwrap());
        // Λ(1,1) only sees relations of weight ≤ 2
        let spec = FamilySpec::lambda_ks(101, 1, 1).unwrap();
        assert!(check_membership(&[1, 2, 3], &spec).unwrap().is_dissociated());
    }

    #[test]
    fn certificate_json_shape() {
        let spec = FamilySpec::lambda_ks(101, 2, 2).unwrap();
        let c = check_membership(&[1, 2], &spec).unwrap();
        let js = serde_json::to_value(&c).unwrap();
        assert_eq!(
            js,
            serde_json::json!({
                "verdict": "dependent",
                "relation": [2, -1],
                "notion": "lambda_ks",
                "params": {"N": 101, "k": 2, "s": 2}
            })
        );
    }

    #[test]
    fn phase_family_filters_relations() {
        let n = 31;
        let plain = FamilySpec::lambda_ks(n, 2, 2).unwrap();
        let phased = FamilySpec::lambda_ks_phi(n, 2, 2, CircleMap::tent(), Rational::new(1, 100)).unwrap();
        let loose = FamilySpec::lambda_ks_phi(n, 2, 2, CircleMap::tent(), Rational::from(1)).unwrap();
        let mut strictly_weaker = 0;
        for a in 1..n {
            for b in a + 1..n {
                let set = [a, b];
                let p = check_membership(&set, &plain).unwrap();
                let q = check_membership(&set, &phased).unwrap();
                // η = 1 admits every phase, so it coincides with Λ(k,s)
                assert_eq!(check_membership(&set, &loose).unwrap().relation, p.relation);
                if !q.is_dissociated() {
                    assert!(!p.is_dissociated());
                    assert!(q.verify(&set, &phased).unwrap());
                } else if !p.is_dissociated() {
                    strictly_weaker += 1;
                }
            }
        }
        assert!(strictly_weaker > 0);
    }

    #[test]
    fn greedy_and_exact_examples() {
        let s = [1usize, 2, 3, 4];
        assert_eq!(max_dissociated_subset(&s, 101, SubsetMode::Greedy).unwrap(), [1, 2, 4]);
        assert_eq!(additive_dimension(&s, 101, SubsetMode::Exact).unwrap(), 3);
        assert_eq!(max_dissociated_subset(&[7], 101, SubsetMode::Greedy).unwrap(), [7]);
        assert_eq!(additive_dimension(&[7], 101, SubsetMode::Exact).unwrap(), 1);
        assert!(max_dissociated_subset(&[0], 101, SubsetMode::Greedy)
            .unwrap()
            .is_empty());
        assert!(max_dissociated_subset(&[0], 101, SubsetMode::Exact).unwrap().is_empty());
        let dyadic: Vec<usize> = (0..7).map(|i| 1 << i).collect();
        assert_eq!(additive_dimension(&dyadic, 257, SubsetMode::Exact).unwrap(), 7);
        let big: Vec<usize> = (1..=21).collect();
        assert!(additive_dimension(&big, 1009, SubsetMode::Exact).is_err());
    }

    #[test]
    fn spanning_examples() {
        let spec = FamilySpec::classical(101);
        let w = spanning_witness(3, &[1, 2, 4], &spec).unwrap();
        assert_eq!((w.x_coeff, w.terms.clone()), (1, vec![(1, 1), (2, 1)]));
        assert!(w.verify(&spec).unwrap());
        let w = spanning_witness(0, &[1, 2, 4], &spec).unwrap();
        assert_eq!((w.x_coeff, w.terms.len()), (1, 0));
        let w = spanning_witness(5, &[1, 4], &spec).unwrap();
        assert_eq!(w.terms, vec![(1, 1), (4, 1)]);
        assert!(spanning_witness(4, &[1, 4], &spec).is_err());
        assert!(matches!(spanning_witness(50, &[1], &spec), Err(Error::NoWitness(_))));
    }

    #[test]
    fn dim_bound_examples() {
        let full: Vec<usize> = (0..17).collect();
        let r = verify_dim_bound(&full, 17, 10.0).unwrap();
        assert!(r.hypothesis_met);
        assert_eq!(r.dimension, Some(4));
        let ap: Vec<usize> = (1..=16).collect();
        let r = verify_dim_bound(&ap, 1009, 10.0).unwrap();
        assert_eq!(r.dimension, Some(5));
        assert!(r.pass.unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let s = sample(&mut rng, 257, 12).into_vec();
        assert!(verify_dim_bound(&s, 257, 10.0).unwrap().pass.unwrap());
    }

    #[test]
    fn budget_errors_are_hard() {
        let set: Vec<usize> = (1..=20).collect();
        let err = check_membership_with_budget(&set, &FamilySpec::classical(100_003), 1000);
        assert!(matches!(err, Err(Error::BudgetExceeded { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn classical_matches_enumeration(raw in proptest::collection::btree_set(0usize..61, 1..10)) {
            let set: Vec<usize> = raw.into_iter().collect();
            let spec = FamilySpec::classical(61);
            let c = check_membership(&set, &spec).unwrap();
            prop_assert_eq!(c.is_dissociated(), naive_classical_dissociated(&set, 61));
            prop_assert!(c.verify(&set, &spec).unwrap());
        }

        #[test]
        fn subsets_of_members_are_members(
            raw in proptest::collection::btree_set(1usize..127, 1..8),
            mask in 0u32..256,
        ) {
            let set: Vec<usize> = raw.into_iter().collect();
            let specs = [
                FamilySpec::classical(127),
                FamilySpec::lambda_ks(127, 2, 3).unwrap(),
                FamilySpec::lambda_ks_phi(127, 2, 3, CircleMap::tent(), Rational::new(1, 50)).unwrap(),
            ];
            for spec in &specs {
                if check_membership(&set, spec).unwrap().is_dissociated() {
                    let sub: Vec<usize> = set.iter().enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x).collect();
                    prop_assert!(check_membership(&sub, spec).unwrap().is_dissociated());
                }
            }
        }

        #[test]
        fn greedy_is_maximal_and_bounded_by_exact(raw in proptest::collection::btree_set(0usize..97, 1..13)) {
            let set: Vec<usize> = raw.into_iter().collect();
            let greedy = max_dissociated_subset(&set, 97, SubsetMode::Greedy).unwrap();
            let exact = max_dissociated_subset(&set, 97, SubsetMode::Exact).unwrap();
            prop_assert!(greedy.len() <= exact.len());
            let spec = FamilySpec::classical(97);
            for cand in [&greedy, &exact] {
                prop_assert!(check_membership(cand, &spec).unwrap().is_dissociated());
                for &x in &set {
                    if !cand.contains(&x) {
                        let mut ext = cand.to_vec();
                        ext.push(x);
                        prop_assert!(!check_membership(&ext, &spec).unwrap().is_dissociated());
                    }
                }
            }
        }
    }
}
