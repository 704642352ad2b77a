//! Wiener norms on Z_N and on the circle.
//!
//! Circle maps are continuous and piecewise linear with rational data. The
//! circle is parameterized by the fraction of a full turn, so a map is a
//! function `t ↦ φ(t)` on `[0, 1)` with values in turns, and its lift gains
//! exactly `winding` turns over one period.
//!
//! Fourier coefficients of `e^{inφ}` are integrated in closed form segment by
//! segment. Every phase is reduced modulo one turn in exact integer arithmetic
//! before the trig call, so the only error is final rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{dft, GroupFunction};
use crate::rational::{self, Rational};

/// `‖f‖_{A(Z_N)} = Σ_γ |f̂(γ)|`.
pub fn wiener_norm_group(f: &GroupFunction) -> f64 {
    dft(f).l1_norm()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CircleMapRepr", into = "CircleMapRepr")]
pub struct CircleMap {
    breakpoints: Vec<Rational>,
    slopes: Vec<Rational>,
    offset: Rational,
    winding: i64,
}

#[derive(Clone, Serialize, Deserialize)]
struct CircleMapRepr {
    #[serde(with = "rational::serde_str_vec")]
    breakpoints: Vec<Rational>,
    #[serde(with = "rational::serde_str_vec")]
    slopes: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    offset: Rational,
    winding: i64,
}

impl TryFrom<CircleMapRepr> for CircleMap {
    type Error = Error;

    fn try_from(r: CircleMapRepr) -> Result<Self> {
        CircleMap::new(r.breakpoints, r.slopes, r.offset, r.winding)
    }
}

impl From<CircleMap> for CircleMapRepr {
    fn from(m: CircleMap) -> Self {
        CircleMapRepr {
            breakpoints: m.breakpoints,
            slopes: m.slopes,
            offset: m.offset,
            winding: m.winding,
        }
    }
}

impl CircleMap {
    pub fn new(breakpoints: Vec<Rational>, slopes: Vec<Rational>, offset: Rational, winding: i64) -> Result<Self> {
        let bad = |m: &str| Err(Error::InvalidCircleMap(m.to_string()));
        if breakpoints.len() < 2 {
            return bad("need at least two breakpoints");
        }
        if !breakpoints[0].is_zero() || breakpoints[breakpoints.len() - 1] != Rational::from(1) {
            return bad("breakpoints must start at 0 and end at 1");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return bad("breakpoints must be strictly increasing");
        }
        if slopes.len() != breakpoints.len() - 1 {
            return bad("need exactly one slope per segment");
        }
        let increment: Rational = slopes
            .iter()
            .zip(breakpoints.windows(2))
            .map(|(m, w)| m * (w[1] - w[0]))
            .sum();
        if increment != Rational::from(winding as i128) {
            return Err(Error::InvalidCircleMap(format!(
                "total increment {} does not equal winding {winding}",
                rational::format_rational(&increment)
            )));
        }
        Ok(Self {
            breakpoints,
            slopes,
            offset,
            winding,
        })
    }

    /// `t ↦ ν t + offset`.
    pub fn linear(winding: i64, offset: Rational) -> Self {
        Self {
            breakpoints: vec![Rational::zero(), Rational::from(1)],
            slopes: vec![Rational::from(winding as i128)],
            offset,
            winding,
        }
    }

    /// Slopes `+1` on the first half turn and `-1` on the second; winding 0.
    pub fn tent() -> Self {
        Self {
            breakpoints: vec![Rational::zero(), Rational::new(1, 2), Rational::from(1)],
            slopes: vec![Rational::from(1), Rational::from(-1)],
            offset: Rational::zero(),
            winding: 0,
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    pub fn offset(&self) -> Rational {
        self.offset
    }

    pub fn winding(&self) -> i64 {
        self.winding
    }

    pub fn is_linear(&self) -> bool {
        self.slopes.windows(2).all(|w| w[0] == w[1])
    }

    pub fn max_abs_slope(&self) -> f64 {
        self.slopes
            .iter()
            .map(|s| rational::to_f64(&s.abs()))
            .fold(0.0, f64::max)
    }

    /// Lifted value (in turns) at the start of every segment.
    fn segment_starts(&self) -> Vec<Rational> {
        let mut acc = self.offset;
        let mut out = Vec::with_capacity(self.slopes.len());
        for (m, w) in self.slopes.iter().zip(self.breakpoints.windows(2)) {
            out.push(acc);
            acc += m * (w[1] - w[0]);
        }
        out
    }

    /// Lifted value `φ(t)` in turns; `t` is any rational (turns).
    pub fn value_at(&self, t: &Rational) -> Rational {
        let whole = t.floor();
        let u = t - whole;
        let starts = self.segment_starts();
        let j = self
            .breakpoints
            .windows(2)
            .position(|w| u >= w[0] && u < w[1])
            .unwrap_or(self.slopes.len() - 1);
        starts[j] + self.slopes[j] * (u - self.breakpoints[j]) + whole * Rational::from(self.winding as i128)
    }

    /// `φ*(x) = φ(x/N)` in turns, exact.
    pub fn phi_star_turns(&self, modulus: usize, x: usize) -> Rational {
        self.value_at(&Rational::new(x as i128, modulus as i128))
    }
}

/// `φ*(x)` in radians.
pub fn phi_star(phi: &CircleMap, modulus: usize, x: usize) -> Result<f64> {
    if x >= modulus {
        return Err(Error::Precondition(format!(
            "residue {x} out of range for modulus {modulus}"
        )));
    }
    Ok(2.0 * PI * rational::to_f64(&phi.phi_star_turns(modulus, x)))
}

/// Integer form of a circle map for fast coefficient evaluation.
struct SegmentTable {
    /// Common denominator of the breakpoints.
    bp_den: i128,
    /// Common denominator of the slopes.
    slope_den: i128,
    /// Denominator of every phase, in turns.
    phase_den: i128,
    segments: Vec<Segment>,
}

struct Segment {
    start: i128,
    len: i128,
    slope: i128,
    /// Lifted segment start value times `phase_den`, reduced.
    value: i128,
    width: f64,
}

impl SegmentTable {
    fn new(phi: &CircleMap) -> Result<Self> {
        let bp_den = rational::common_denominator(&phi.breakpoints).ok_or(Error::PhaseOverflow)?;
        let slope_den = rational::common_denominator(&phi.slopes).ok_or(Error::PhaseOverflow)?;
        let ed = bp_den.checked_mul(slope_den).ok_or(Error::PhaseOverflow)?;
        let phase_den = ed.lcm(phi.offset.denom()).checked_mul(2).ok_or(Error::PhaseOverflow)?;
        if phase_den > 1 << 52 {
            return Err(Error::PhaseOverflow);
        }
        let starts = phi.segment_starts();
        let segments = phi
            .breakpoints
            .windows(2)
            .zip(&phi.slopes)
            .zip(&starts)
            .map(|((w, m), c)| {
                let scaled = c * Rational::from(phase_den);
                Segment {
                    start: (w[0] * Rational::from(bp_den)).to_integer(),
                    len: ((w[1] - w[0]) * Rational::from(bp_den)).to_integer(),
                    slope: (m * Rational::from(slope_den)).to_integer(),
                    value: scaled.to_integer().rem_euclid(phase_den),
                    width: rational::to_f64(&(w[1] - w[0])),
                }
            })
            .collect();
        Ok(Self {
            bp_den,
            slope_den,
            phase_den,
            segments,
        })
    }

    fn coefficient(&self, n: i64, k: i64) -> Complex64 {
        let z = self.phase_den;
        let ed = self.bp_den * self.slope_den;
        let n = n as i128;
        let k = k as i128;
        let mut acc = Complex64::new(0.0, 0.0);
        for s in &self.segments {
            // r = (n·m - k)·Δt, an exact rational with denominator ed
            let r_num = (n * s.slope - k * self.slope_den) * s.len;
            let sinc = if r_num == 0 {
                1.0
            } else {
                let red = r_num.rem_euclid(2 * ed);
                if red % ed == 0 {
                    0.0
                } else {
                    (PI * red as f64 / ed as f64).sin() / (PI * r_num as f64 / ed as f64)
                }
            };
            if sinc == 0.0 {
                continue;
            }
            // total phase in turns: n·c_j - k·t_{j-1} + r/2
            let p1 = (n.rem_euclid(z) * s.value).rem_euclid(z);
            let p2 = (k.rem_euclid(z) * (s.start * (z / self.bp_den)).rem_euclid(z)).rem_euclid(z);
            let p3 = (r_num.rem_euclid(2 * ed) * (z / (2 * ed))).rem_euclid(z);
            let p = (p1 - p2 + p3).rem_euclid(z);
            let angle = 2.0 * PI * p as f64 / z as f64;
            acc += Complex64::new(angle.cos(), angle.sin()) * (s.width * sinc);
        }
        acc
    }
}

/// Fourier coefficients `ĉ_k` of `e^{inφ}` for `k` in `k_lo..=k_hi`.
pub fn exp_map_coefficients(phi: &CircleMap, n: i64, k_lo: i64, k_hi: i64) -> Result<Vec<Complex64>> {
    let table = SegmentTable::new(phi)?;
    Ok((k_lo..=k_hi).map(|k| table.coefficient(n, k)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormOptions {
    pub tol: f64,
    pub k_max: i64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            tol: 1e-2,
            k_max: 1 << 20,
        }
    }
}

/// Certified enclosure of `‖e^{inφ}‖_{A(T)}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormInterval {
    pub lower: f64,
    /// `f64::INFINITY` when no bound is available.
    pub upper: f64,
    /// Truncation order `K` used for the lower sum.
    pub k_used: i64,
    pub tolerance_met: bool,
    /// `Σ_{|k|≤K} |ĉ_k|²`.
    pub bessel_sum: f64,
}

impl NormInterval {
    pub fn exact(v: f64) -> Self {
        Self {
            lower: v,
            upper: v,
            k_used: 0,
            tolerance_met: true,
            bessel_sum: v * v,
        }
    }

    pub fn contains(&self, v: f64, slack: f64) -> bool {
        self.lower - slack <= v && v <= self.upper + slack
    }
}

/// `n·max|slope|·√(2/K)`: Cauchy–Schwarz against `Σ_{|k|>K} k^{-2} ≤ 2/K`
/// with `‖(e^{inφ})'‖_{L²} ≤ |n|·max|slope|`.
pub fn tail_bound(phi: &CircleMap, n: i64, k: i64) -> f64 {
    (n.unsigned_abs() as f64) * phi.max_abs_slope() * (2.0 / k as f64).sqrt()
}

pub fn wiener_norm_circle(phi: &CircleMap, n: i64, opts: &NormOptions) -> Result<NormInterval> {
    if !(opts.tol > 0.0) {
        return Err(Error::Precondition("tolerance must be positive".into()));
    }
    if n == 0 {
        return Ok(NormInterval::exact(1.0));
    }
    let table = SegmentTable::new(phi)?;
    let spread = (n.unsigned_abs() as f64 * phi.max_abs_slope()).ceil() as i64;
    let mut k_target = (4 * spread).max(16).min(opts.k_max.max(1));
    let mut lower = 0.0;
    let mut bessel = 0.0;
    // summation order: k = 0, -1, 1, -2, 2, ...
    let c0 = table.coefficient(n, 0);
    lower += c0.norm();
    bessel += c0.norm_sqr();
    let mut k_done = 0i64;
    loop {
        for k in (k_done + 1)..=k_target {
            for c in [table.coefficient(n, -k), table.coefficient(n, k)] {
                lower += c.norm();
                bessel += c.norm_sqr();
            }
        }
        k_done = k_target;
        let tail = tail_bound(phi, n, k_done);
        if tail <= opts.tol || k_done >= opts.k_max {
            return Ok(NormInterval {
                lower,
                upper: lower + tail,
                k_used: k_done,
                tolerance_met: tail <= opts.tol,
                bessel_sum: bessel,
            });
        }
        k_target = (k_done * 2).min(opts.k_max);
    }
}

/// `Θ(l)` for `l = 0..=n`, each a running maximum of the certified intervals.
pub fn theta_sequence(phi: &CircleMap, n: u64, opts: &NormOptions) -> Result<Vec<NormInterval>> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut run = NormInterval::exact(1.0);
    out.push(run);
    for l in 1..=n {
        let iv = wiener_norm_circle(phi, l as i64, opts)?;
        run = NormInterval {
            lower: run.lower.max(iv.lower),
            upper: run.upper.max(iv.upper),
            k_used: run.k_used.max(iv.k_used),
            tolerance_met: run.tolerance_met && iv.tolerance_met,
            bessel_sum: iv.bessel_sum,
        };
        out.push(run);
    }
    Ok(out)
}

/// `Θ(n) = max_{0≤l≤n} ‖e^{ilφ}‖_{A(T)}` as a certified interval.
pub fn theta(phi: &CircleMap, n: u64, opts: &NormOptions) -> Result<NormInterval> {
    Ok(*theta_sequence(phi, n, opts)?.last().expect("nonempty"))
}
