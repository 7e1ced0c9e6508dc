//! Graded Floer homology of +-p/q surgery from a box-class profile.
//!
//! The surgery line through (0, -1/2 + i/q + eps) with slope p/q meets the
//! meridian at heights -1/2 + v/q + eps for v = i + tp. A vertical segment
//! at height s is crossed by the values of v in [qs, q(s+1) - 1].

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::curve::{CurveProfile, Rational};
use crate::lens::{self, LensError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SlopePair {
    pub p: i64,
    pub q: i64,
}

impl SlopePair {
    pub fn new(p: i64, q: i64) -> Result<Self, SurgeryError> {
        if p <= 0 || q <= 0 {
            return Err(SurgeryError::Slope(format!("{p}/{q} needs positive p and q")));
        }
        if p.gcd(&q) != 1 {
            return Err(SurgeryError::Slope(format!("{p}/{q} is not in lowest terms")));
        }
        Ok(SlopePair { p, q })
    }
}

impl fmt::Display for SlopePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl std::str::FromStr for SlopePair {
    type Err = SurgeryError;

    /// "P/Q" or "P" (q = 1).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SurgeryError::Slope(format!("cannot parse slope {s:?}; expected P/Q"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => (s.trim().parse().map_err(|_| bad())?, 1),
        };
        SlopePair::new(p, q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurgeryError {
    #[error("bad slope: {0}")]
    Slope(String),
    #[error("spin^c index {i} out of range for p = {p}")]
    IndexOutOfRange { p: i64, i: i64 },
    #[error("q must be nonzero")]
    ZeroQ,
    #[error("no crossing {j} in window {s} for spin^c {i} of slope {p}/{q}")]
    NoCrossing { p: i64, q: i64, i: i64, s: i64, j: i64 },
    #[error("graded comparison needs a box-class profile with epsilon = 0")]
    Unsupported,
    #[error(transparent)]
    Lens(#[from] LensError),
}

fn check_index(p: i64, q: i64, i: i64) -> Result<(), SurgeryError> {
    if p <= 0 {
        return Err(SurgeryError::Slope(format!("p = {p} must be positive")));
    }
    if q == 0 {
        return Err(SurgeryError::ZeroQ);
    }
    if !(0..p).contains(&i) {
        return Err(SurgeryError::IndexOutOfRange { p, i });
    }
    Ok(())
}

/// Values v = i + tp, ascending, landing in the window of height s (q > 0).
fn window_values(p: i64, q: i64, i: i64, s: i64) -> Vec<i64> {
    let (lo, hi) = (q * s, q * (s + 1) - 1);
    let first = lo + (i - lo).rem_euclid(p);
    (0..).map(|t| first + t * p).take_while(|&v| v <= hi).collect()
}

/// Number of times the i-th surgery line crosses the height-s window.
/// Negative q relabels the spin^c index as -i mod p.
pub fn spin_c_crossings(p: i64, q: i64, i: i64, s: i64) -> Result<usize, SurgeryError> {
    check_index(p, q, i)?;
    if q < 0 {
        return Ok(window_values(p, -q, (-i).rem_euclid(p), s).len());
    }
    Ok(window_values(p, q, i, s).len())
}

/// Marked points inside the triangle cut off by the j-th crossing (q > 0).
pub fn triangle_count(p: i64, q: i64, i: i64, s: i64, j: usize) -> Result<i64, SurgeryError> {
    check_index(p, q, i)?;
    if q < 0 {
        return Err(SurgeryError::Slope("triangle counts are taken for positive q".into()));
    }
    let values = window_values(p, q, i, s);
    let Some(&v) = values.get(j) else {
        return Err(SurgeryError::NoCrossing { p, q, i, s, j: j as i64 });
    };
    Ok(triangle_at(p, q, s, v))
}

fn triangle_at(p: i64, q: i64, s: i64, v: i64) -> i64 {
    match s.signum() {
        0 => 0,
        1 => (1..).take_while(|k| k * q < v).map(|k| (v - k * q).div_euclid(p)).sum(),
        _ => {
            // rows below the crossing; points on the shifted line are outside
            let w = -v;
            (0..).take_while(|m| m * q < w).map(|m| (w - m * q - 1).div_euclid(p)).sum()
        }
    }
}

/// One non-distinguished pair of generators: the two vertical segments of a
/// simple box at (s, d) meeting one crossing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoxPair {
    pub s: i64,
    pub d: i64,
    pub k: i64,
    /// Relative gradings in the +p/q surgery.
    pub rel: [i64; 2],
    /// Grading change to the -p/q surgery, 1 - 2|s| - 4k.
    pub delta_rel: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinC {
    pub index: i64,
    pub d_plus: Rational,
    pub d_minus: Rational,
    pub pairs: Vec<BoxPair>,
    /// Sorted absolute gradings, distinguished generator included.
    pub multiset_plus: Vec<Rational>,
    pub multiset_minus: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSurgeryComparison {
    pub slope: SlopePair,
    pub spin_c: Vec<SpinC>,
    pub matched: bool,
    /// sigma[i] = j with multiset_plus(i) == multiset_minus(j).
    pub sigma: Option<Vec<usize>>,
}

impl GradedSurgeryComparison {
    pub fn rank(&self) -> usize {
        self.spin_c.iter().map(|c| c.multiset_plus.len()).sum()
    }

    /// Sum of the grading changes over every generator.
    pub fn delta_rel_sum(&self) -> i64 {
        self.spin_c.iter().flat_map(|c| &c.pairs).map(|b| 2 * b.delta_rel).sum()
    }
}

pub fn graded_surgery(profile: &CurveProfile, slope: SlopePair) -> Result<GradedSurgeryComparison, SurgeryError> {
    let SlopePair { p, q } = SlopePair::new(slope.p, slope.q)?;
    let census = match (&profile.e, profile.box_class, profile.epsilon) {
        (Some(e), true, 0) => e,
        _ => return Err(SurgeryError::Unsupported),
    };
    let d_plus = lens::d_invariants(p, q)?;
    let d_minus = lens::d_invariants(p, -q)?;

    let mut spin_c = Vec::with_capacity(p as usize);
    for i in 0..p {
        let mut pairs = Vec::new();
        for (&(s, d), &count) in census {
            for v in window_values(p, q, i, s) {
                let k = triangle_at(p, q, s, v);
                let a = -1 + 2 * k + s.abs() - d;
                let pair = BoxPair { s, d, k, rel: [a, a + 1], delta_rel: 1 - 2 * s.abs() - 4 * k };
                pairs.extend(std::iter::repeat_n(pair, count as usize));
            }
        }
        let (dp, dm) = (d_plus[i as usize], d_minus[i as usize]);
        let mut plus = vec![dp];
        let mut minus = vec![dm];
        for b in &pairs {
            for r in b.rel {
                plus.push(dp + r);
                minus.push(dm + r + b.delta_rel);
            }
        }
        plus.sort();
        minus.sort();
        spin_c.push(SpinC { index: i, d_plus: dp, d_minus: dm, pairs, multiset_plus: plus, multiset_minus: minus });
    }

    let sigma = match_spin_c(&spin_c);
    Ok(GradedSurgeryComparison { slope: SlopePair { p, q }, matched: sigma.is_some(), sigma, spin_c })
}

fn match_spin_c(spin_c: &[SpinC]) -> Option<Vec<usize>> {
    let mut pool: BTreeMap<&[Rational], Vec<usize>> = BTreeMap::new();
    for (j, c) in spin_c.iter().enumerate().rev() {
        pool.entry(&c.multiset_minus).or_default().push(j);
    }
    spin_c
        .iter()
        .map(|c| pool.get_mut(c.multiset_plus.as_slice()).and_then(Vec::pop))
        .collect()
}

/// rk HF-hat of p/q surgery: |p - mq| + n|q|.
pub fn total_rank(p: i64, q: i64, m: i64, n: i64) -> i64 {
    (p - m * q).abs() + n * q.abs()
}

/// Outcome of the slope-one figure-eight balance condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Balance {
    /// (D, e_0^D, required) wherever the two sides differ.
    pub failures: Vec<(i64, u64, u64)>,
}

impl Balance {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Height-zero boxes must balance the rest: e_0^D equals the number of boxes
/// at (s, d) with s != 0 and |d - D| < s^2, for every D.
pub fn slope_one_balance(census: &BTreeMap<(i64, i64), u64>) -> Balance {
    let reach = census.keys().map(|&(s, _)| s * s).max().unwrap_or(0);
    let ds = census.keys().map(|&(_, d)| d);
    let (lo, hi) = match (ds.clone().min(), ds.max()) {
        (Some(lo), Some(hi)) => (lo - reach, hi + reach),
        _ => return Balance { failures: Vec::new() },
    };
    let mut failures = Vec::new();
    for big_d in lo..=hi {
        let have = census.get(&(0, big_d)).copied().unwrap_or(0);
        let need: u64 = census
            .iter()
            .filter(|(&(s, d), _)| s != 0 && (d - big_d).abs() < s * s)
            .map(|(_, &c)| c)
            .sum();
        if have != need {
            failures.push((big_d, have, need));
        }
    }
    Balance { failures }
}
