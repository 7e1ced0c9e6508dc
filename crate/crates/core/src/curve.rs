//! Numerical profile of the immersed curve: slope m, vertical segment counts
//! n_s, the figure-eight census e_s^d, and the candidate denominator q*.

use std::collections::{BTreeMap, HashMap};

use num_rational::Ratio;

use crate::cfk::{Kind, UVZeroComplex};
use crate::gf2;
use crate::reduction::{Decomposition, KnotInvariants};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProfileError {
    #[error("needs epsilon = 0 (an isolated generator at (0,0))")]
    EpsilonNonzero,
    #[error("hook complex at level {s} has rank {rank}, expected at least 1")]
    HookRank { s: i64, rank: usize },
    #[error("vertical segment counts are not symmetric: n_{s} = {a} but n_{neg} = {b}", neg = -s)]
    Asymmetric { s: i64, a: u64, b: u64 },
    #[error("candidate q needs genus at least 2, got {0}")]
    GenusTooSmall(i64),
    #[error("candidate q has zero denominator")]
    ZeroDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveProfile {
    pub genus: i64,
    pub thickness: i64,
    pub tau: i64,
    pub epsilon: i64,
    pub m: i64,
    /// Nonzero n_s; `None` when epsilon != 0.
    pub n: Option<BTreeMap<i64, u64>>,
    /// Simple box counts at (s, d); `None` unless box_class and epsilon = 0.
    pub e: Option<BTreeMap<(i64, i64), u64>>,
    pub box_class: bool,
}

impl CurveProfile {
    pub fn n_at(&self, s: i64) -> u64 {
        self.n.as_ref().and_then(|n| n.get(&s).copied()).unwrap_or(0)
    }

    pub fn n_total(&self) -> u64 {
        self.n.as_ref().map_or(0, |n| n.values().sum())
    }

    /// Profile of a box-class knot given only its census. The staircase is
    /// a single generator, so tau = epsilon = m = 0 and n_s = 2 sum_d e_s^d.
    pub fn from_census(census: &BTreeMap<(i64, i64), u64>) -> CurveProfile {
        let e: BTreeMap<(i64, i64), u64> = census.iter().filter(|(_, &c)| c > 0).map(|(&k, &c)| (k, c)).collect();
        let mut n = BTreeMap::new();
        for (&(s, _), &c) in &e {
            *n.entry(s).or_default() += 2 * c;
        }
        let genus = e.keys().map(|&(s, _)| s.abs() + 1).max().unwrap_or(0);
        let thickness = if e.is_empty() {
            0
        } else {
            let ds = e.keys().map(|&(_, d)| d).chain([0]);
            ds.clone().max().unwrap() - ds.min().unwrap()
        };
        CurveProfile { genus, thickness, tau: 0, epsilon: 0, m: 0, n: Some(n), e: Some(e), box_class: true }
    }
}

fn has_isolated_origin(reduced: &UVZeroComplex) -> bool {
    reduced.generators.iter().any(|g| {
        (g.alexander, g.maslov) == (0, 0) && !reduced.arrows.iter().any(|a| a.src == g.id || a.dst == g.id)
    })
}

/// Homology rank of the hook complex at level `s`: column copies of
/// generators with A <= s joined along A = s to row copies with A >= s,
/// with V arrows acting on the column and U arrows on the row.
pub fn hook_homology_rank(reduced: &UVZeroComplex, s: i64) -> Result<usize, ProfileError> {
    if !has_isolated_origin(reduced) {
        return Err(ProfileError::EpsilonNonzero);
    }
    Ok(hook_rank_unchecked(reduced, s))
}

fn hook_rank_unchecked(reduced: &UVZeroComplex, s: i64) -> usize {
    let mut col: HashMap<&str, usize> = HashMap::new();
    let mut row: HashMap<&str, usize> = HashMap::new();
    let mut dim = 0;
    for g in &reduced.generators {
        let a = g.alexander;
        if a == s {
            col.insert(&g.id, dim);
            row.insert(&g.id, dim);
            dim += 1;
        } else if a < s {
            col.insert(&g.id, dim);
            dim += 1;
        } else {
            row.insert(&g.id, dim);
            dim += 1;
        }
    }
    let alex = |id: &str| reduced.generator(id).unwrap().alexander;
    let entries = reduced.arrows.iter().filter_map(|ar| match ar.kind {
        Kind::V if alex(&ar.src) <= s => Some((col[ar.src.as_str()], col[ar.dst.as_str()])),
        Kind::U if alex(&ar.src) >= s => Some((row[ar.src.as_str()], row[ar.dst.as_str()])),
        _ => None,
    });
    dim - 2 * gf2::rank_of_entries(dim, dim, entries)
}

pub fn curve_profile(
    decomp: &Decomposition,
    inv: &KnotInvariants,
    reduced: &UVZeroComplex,
) -> Result<CurveProfile, ProfileError> {
    let box_class = decomp.box_class();
    let mut profile = CurveProfile {
        genus: inv.genus,
        thickness: inv.thickness,
        tau: inv.tau,
        epsilon: inv.epsilon,
        m: 2 * inv.tau - inv.epsilon,
        n: None,
        e: None,
        box_class,
    };
    if inv.epsilon != 0 {
        return Ok(profile);
    }
    let mut n = BTreeMap::new();
    for s in -inv.genus..=inv.genus {
        let rank = hook_homology_rank(reduced, s)?;
        if rank < 1 {
            return Err(ProfileError::HookRank { s, rank });
        }
        if rank > 1 {
            n.insert(s, rank as u64 - 1);
        }
    }
    for (&s, &a) in &n {
        let b = n.get(&-s).copied().unwrap_or(0);
        if a != b {
            return Err(ProfileError::Asymmetric { s, a, b });
        }
    }
    profile.n = Some(n);
    if box_class {
        profile.e = Some(decomp.census());
    }
    Ok(profile)
}

/// q* = (n_0 + 2 sum_{s>=1} n_s) / (4 sum_{s>=1} s^2 n_s), exact.
pub fn candidate_q(profile: &CurveProfile) -> Result<Rational, ProfileError> {
    let Some(n) = &profile.n else {
        return Err(ProfileError::EpsilonNonzero);
    };
    if profile.genus < 2 {
        return Err(ProfileError::GenusTooSmall(profile.genus));
    }
    let n0 = n.get(&0).copied().unwrap_or(0) as i64;
    let pos = n.range(1..);
    let num = n0 + 2 * pos.clone().map(|(_, &c)| c as i64).sum::<i64>();
    let den = 4 * pos.map(|(&s, &c)| s * s * c as i64).sum::<i64>();
    if den == 0 {
        return Err(ProfileError::ZeroDenominator);
    }
    Ok(Rational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile_with(n: &[(i64, u64)], genus: i64) -> CurveProfile {
        CurveProfile {
            genus,
            thickness: 0,
            tau: 0,
            epsilon: 0,
            m: 0,
            n: Some(n.iter().copied().collect()),
            e: None,
            box_class: false,
        }
    }

    #[test]
    fn q_star_examples() {
        let p = profile_with(&[(-1, 2), (0, 4), (1, 2)], 2);
        assert_eq!(candidate_q(&p), Ok(Rational::from_integer(1)));
        let p = profile_with(&[(-1, 1), (0, 4), (1, 1)], 2);
        assert_eq!(candidate_q(&p), Ok(Rational::new(3, 2)));
        let p = profile_with(&[(0, 2)], 1);
        assert_eq!(candidate_q(&p), Err(ProfileError::GenusTooSmall(1)));
    }

    #[test]
    fn census_profile() {
        let p = CurveProfile::from_census(&BTreeMap::from([((1, 0), 1), ((-1, 0), 1), ((0, 0), 2)]));
        assert_eq!(p.genus, 2);
        assert_eq!(p.n, Some(BTreeMap::from([(-1, 2), (0, 4), (1, 2)])));
    }
}
