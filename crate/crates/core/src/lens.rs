//! Correction terms of lens spaces, exactly.
//!
//! Sign convention: `d(L(2,1), 0) = 1/4`. The Hirzebruch-Jung closed form for
//! the total sum uses the opposite orientation, so `d_sum` reports
//! `recursive_sum == -closed_form`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_traits::Zero;

use crate::curve::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LensError {
    #[error("p must be positive, got {0}")]
    NonPositiveP(i64),
    #[error("p = {p} and q = {q} are not coprime")]
    NotCoprime { p: i64, q: i64 },
    #[error("spin^c index {i} out of range for p = {p}")]
    IndexOutOfRange { p: i64, i: i64 },
    #[error("need 0 < q < p, got p = {p}, q = {q}")]
    Range { p: i64, q: i64 },
}

type Cache = RwLock<HashMap<(i64, i64), Arc<Vec<Rational>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn check(p: i64, q: i64) -> Result<(), LensError> {
    if p <= 0 {
        return Err(LensError::NonPositiveP(p));
    }
    if p.gcd(&q) != 1 {
        return Err(LensError::NotCoprime { p, q });
    }
    Ok(())
}

/// All of d(L(p,q), i) for 0 <= i < p, with 0 <= q < p already normalized.
fn d_table(p: i64, q: i64) -> Arc<Vec<Rational>> {
    if p == 1 {
        return Arc::new(vec![Rational::zero()]);
    }
    if let Some(v) = cache().read().unwrap().get(&(p, q)) {
        return v.clone();
    }
    let inner = d_table(q, p % q);
    let table: Vec<Rational> = (0..p)
        .map(|i| {
            let t = 2 * i + 1 - p - q;
            let d = Rational::new(-1, 4) + Rational::new(t * t, 4 * p * q) - inner[(i % q) as usize];
            assert_eq!((4 * p * q) % d.denom(), 0, "denominator of d(L({p},{q}),{i}) must divide 4pq");
            d
        })
        .collect();
    let table = Arc::new(table);
    cache().write().unwrap().insert((p, q), table.clone());
    table
}

/// The full vector d(L(p,q), 0..p).
pub fn d_invariants(p: i64, q: i64) -> Result<Vec<Rational>, LensError> {
    check(p, q)?;
    if q < 0 {
        return Ok(d_table(p, (-q).rem_euclid(p)).iter().map(|d| -d).collect());
    }
    Ok(d_table(p, q.rem_euclid(p)).to_vec())
}

pub fn d_invariant(p: i64, q: i64, i: i64) -> Result<Rational, LensError> {
    check(p, q)?;
    if !(0..p).contains(&i) {
        return Err(LensError::IndexOutOfRange { p, i });
    }
    let d = d_table(p, q.abs().rem_euclid(p))[i as usize];
    Ok(if q < 0 { -d } else { d })
}

fn check_range(p: i64, q: i64) -> Result<(), LensError> {
    if !(0 < q && q < p) {
        return Err(LensError::Range { p, q });
    }
    check(p, q)
}

/// Greedy expansion p/q = a1 - 1/(a2 - 1/(... - 1/an)), every ai >= 2.
pub fn hj_expansion(p: i64, q: i64) -> Result<Vec<i64>, LensError> {
    check_range(p, q)?;
    let (mut p, mut q) = (p, q);
    let mut out = Vec::new();
    while q > 0 {
        let a = (p + q - 1) / q;
        out.push(a);
        (p, q) = (q, a * q - p);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSum {
    pub recursive_sum: Rational,
    pub closed_form: Rational,
    pub lambda: Rational,
}

fn inverse_mod(q: i64, p: i64) -> i64 {
    let e = q.extended_gcd(&p);
    e.x.rem_euclid(p)
}

pub fn d_sum(p: i64, q: i64) -> Result<DSum, LensError> {
    let a = hj_expansion(p, q)?;
    let recursive_sum: Rational = d_table(p, q).iter().sum();
    let q_inv = inverse_mod(q, p);
    let tail: i64 = a.iter().map(|ai| ai - 3).sum();
    let closed_form = Rational::new(-(q + q_inv + p * tail), 12);
    Ok(DSum { recursive_sum, closed_form, lambda: recursive_sum / p })
}

/// Sum of the first q correction terms of L(p,q).
pub fn first_q_sum(p: i64, q: i64) -> Result<Rational, LensError> {
    check_range(p, q)?;
    Ok(d_table(p, q)[..q as usize].iter().sum())
}
