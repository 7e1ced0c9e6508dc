//! The per-knot decision procedure and corpus funnel.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::cfk::{validate, UVZeroComplex, Violation};
use crate::curve::{self, CurveProfile, ProfileError, Rational};
use crate::reduction::{self, Decomposition, KnotInvariants, ReductionError};
use crate::report::fmt_rational;
use crate::surgery::{self, SlopePair, SurgeryError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GateName {
    EpsilonNonzero,
    GenusOne,
    BoyerLines,
    QNotPositiveInteger,
    ThicknessBound,
    SlopeTwoCondition,
    FigureEightBalance,
    GradedMismatch,
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// `passed` means the knot survived the gate (it was not obstructed there).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gate {
    pub name: GateName,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    TrivialKnot,
    NoCosmetic,
    HFIndistinguishable,
    Inconclusive,
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub gates: Vec<Gate>,
    pub surviving_pairs: Vec<SlopePair>,
}

impl Verdict {
    fn passed(&self, name: GateName) -> bool {
        self.gates.iter().any(|g| g.name == name && g.passed)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("invalid complex: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("cannot decompose: {0}")]
    Decompose(#[from] ReductionError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl From<ProfileError> for PipelineError {
    fn from(e: ProfileError) -> Self {
        PipelineError::Internal(e.to_string())
    }
}

impl From<SurgeryError> for PipelineError {
    fn from(e: SurgeryError) -> Self {
        PipelineError::Internal(e.to_string())
    }
}

/// Everything computed on the way to a verdict.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub name: String,
    pub reduced: UVZeroComplex,
    pub decomposition: Decomposition,
    pub invariants: KnotInvariants,
    pub profile: Option<CurveProfile>,
    pub q_star: Option<Rational>,
    pub verdict: Verdict,
}

/// Reduce, decompose and compute invariants; validation included.
pub fn prepare(c: &UVZeroComplex) -> Result<(UVZeroComplex, Decomposition, KnotInvariants), PipelineError> {
    let violations = validate(c);
    if !violations.is_empty() {
        return Err(PipelineError::Invalid(violations));
    }
    let reduced = reduction::reduce(c);
    let decomposition = reduction::decompose(&reduced)?;
    let invariants = reduction::knot_invariants(&decomposition, &reduced)?;
    Ok((reduced, decomposition, invariants))
}

fn gate(name: GateName, passed: bool, detail: String) -> Gate {
    Gate { name, passed, detail }
}

pub fn analyze(c: &UVZeroComplex) -> Result<Analysis, PipelineError> {
    let (reduced, decomposition, invariants) = prepare(c)?;
    let mut out = Analysis {
        name: c.name.clone(),
        reduced,
        decomposition,
        invariants,
        profile: None,
        q_star: None,
        verdict: Verdict { kind: VerdictKind::NoCosmetic, gates: Vec::new(), surviving_pairs: Vec::new() },
    };
    if out.reduced.generators.len() == 1 {
        out.verdict.kind = VerdictKind::TrivialKnot;
        return Ok(out);
    }
    let inv = &out.invariants;
    let gates = &mut out.verdict.gates;

    let eps_ok = inv.epsilon == 0;
    gates.push(gate(GateName::EpsilonNonzero, eps_ok, format!("epsilon = {}, tau = {}", inv.epsilon, inv.tau)));
    if !eps_ok {
        return Ok(out);
    }
    let genus_ok = inv.genus != 1;
    gates.push(gate(GateName::GenusOne, genus_ok, format!("genus = {}", inv.genus)));
    if !genus_ok {
        return Ok(out);
    }
    let bl_ok = inv.alex_dd1 == 0;
    gates.push(gate(GateName::BoyerLines, bl_ok, format!("Alexander''(1) = {}", inv.alex_dd1)));
    if !bl_ok {
        return Ok(out);
    }

    let profile = curve::curve_profile(&out.decomposition, inv, &out.reduced)?;
    let q_star = curve::candidate_q(&profile)?;
    let (g, th) = (profile.genus, profile.thickness);
    let mut candidates = Vec::new();

    let q_int = q_star.is_integer() && q_star > Rational::from_integer(0);
    gates.push(gate(GateName::QNotPositiveInteger, q_int, format!("q* = {}", fmt_rational(&q_star))));
    if q_int {
        let bound = Rational::new(th + 2 * g, 2 * g * (g - 1));
        let ok = q_star <= bound;
        gates.push(gate(
            GateName::ThicknessBound,
            ok,
            format!("q* = {}, bound (th + 2g)/(2g(g-1)) = {} with th = {th}, g = {g}", fmt_rational(&q_star), fmt_rational(&bound)),
        ));
        if ok {
            candidates.push(SlopePair::new(1, *q_star.numer())?);
        }
    }
    let (n0, n1) = (profile.n_at(0), profile.n_at(1));
    let two_ok = g == 2 && n0 == 2 * n1;
    gates.push(gate(GateName::SlopeTwoCondition, two_ok, format!("g = {g}, n_0 = {n0}, n_1 = {n1}")));
    if two_ok {
        candidates.push(SlopePair::new(2, 1)?);
    }

    out.q_star = Some(q_star);
    if candidates.is_empty() {
        out.profile = Some(profile);
        return Ok(out);
    }
    if !profile.box_class {
        gates.push(gate(
            GateName::GradedMismatch,
            true,
            "not compared: some acyclic summand is not a simple figure eight; \
             absolutely graded HF+ is needed to decide"
                .into(),
        ));
        out.verdict.kind = VerdictKind::Inconclusive;
        out.verdict.surviving_pairs = candidates;
        out.profile = Some(profile);
        return Ok(out);
    }

    let census = profile.e.clone().unwrap_or_default();
    let mut kept = Vec::new();
    for slope in candidates {
        if (slope.p, slope.q) == (1, 1) {
            let bal = surgery::slope_one_balance(&census);
            let detail = if bal.holds() {
                "height-0 figure eights balance the others in every delta grading".to_string()
            } else {
                let (d, have, need) = bal.failures[0];
                format!("slope 1: e_0^{d} = {have} but the other heights require {need}")
            };
            gates.push(gate(GateName::FigureEightBalance, bal.holds(), detail));
            if !bal.holds() {
                continue;
            }
        }
        let cmp = surgery::graded_surgery(&profile, slope)?;
        let detail = match &cmp.sigma {
            Some(sigma) => format!("slope {slope}: graded groups agree under spin^c permutation {sigma:?}"),
            None => format!("slope {slope}: graded groups of +{slope} and -{slope} differ"),
        };
        gates.push(gate(GateName::GradedMismatch, cmp.matched, detail));
        if cmp.matched {
            kept.push(slope);
        }
    }
    if !kept.is_empty() {
        out.verdict.kind = VerdictKind::HFIndistinguishable;
        out.verdict.surviving_pairs = kept;
    }
    out.profile = Some(profile);
    Ok(out)
}

pub fn check_knot(c: &UVZeroComplex) -> Result<Verdict, PipelineError> {
    analyze(c).map(|a| a.verdict)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchError {
    pub name: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Funnel {
    pub total: usize,
    pub pass_epsilon: usize,
    pub pass_genus: usize,
    pub pass_boyer_lines: usize,
    pub with_candidates: usize,
    pub hf_indistinguishable: Vec<String>,
    pub inconclusive: Vec<String>,
    pub errors: Vec<BatchError>,
}

/// Run every input through the pipeline; results come back sorted by name.
/// Parse failures enter as `Err` and are tallied as errors, never fatal.
pub fn batch_funnel(inputs: Vec<Result<UVZeroComplex, BatchError>>) -> (Vec<Analysis>, Funnel) {
    let mut results: Vec<Result<Analysis, BatchError>> = inputs
        .into_par_iter()
        .map(|inp| {
            let c = inp?;
            analyze(&c).map_err(|e| BatchError { name: c.name.clone(), message: e.to_string() })
        })
        .collect();
    results.sort_by(|a, b| {
        let key = |r: &Result<Analysis, BatchError>| match r {
            Ok(a) => a.name.clone(),
            Err(e) => e.name.clone(),
        };
        key(a).cmp(&key(b))
    });

    let mut funnel = Funnel::default();
    let mut analyses = Vec::new();
    for r in results {
        let a = match r {
            Ok(a) => a,
            Err(e) => {
                funnel.errors.push(e);
                continue;
            }
        };
        funnel.total += 1;
        let v = &a.verdict;
        funnel.pass_epsilon += v.passed(GateName::EpsilonNonzero) as usize;
        funnel.pass_genus += v.passed(GateName::GenusOne) as usize;
        funnel.pass_boyer_lines += v.passed(GateName::BoyerLines) as usize;
        let has_candidates = v.gates.iter().any(|g| {
            g.passed && matches!(g.name, GateName::ThicknessBound | GateName::SlopeTwoCondition)
        });
        funnel.with_candidates += has_candidates as usize;
        match v.kind {
            VerdictKind::HFIndistinguishable => funnel.hf_indistinguishable.push(a.name.clone()),
            VerdictKind::Inconclusive => funnel.inconclusive.push(a.name.clone()),
            _ => {}
        }
        analyses.push(a);
    }
    (analyses, funnel)
}

pub mod synth {
    //! Complexes built to order, for fixtures and property tests.

    use super::*;
    use crate::cfk::{Arrow, Generator, Kind};

    #[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
    pub enum SynthError {
        #[error("census is not symmetric: {count} boxes at ({s}, {d}) but {mirror} at ({neg}, {d})", neg = -s)]
        Asymmetric { s: i64, d: i64, count: u64, mirror: u64 },
        #[error("parameters out of range: {0}")]
        Range(String),
    }

    /// Append a simple box at (s, d) with id prefix `tag`.
    pub fn push_box(gens: &mut Vec<Generator>, arrows: &mut Vec<Arrow>, tag: &str, s: i64, d: i64) {
        let id = |r: &str| format!("{tag}{r}");
        gens.push(Generator::new(id("a"), s + 1, s + 1 - d));
        gens.push(Generator::new(id("b"), s, s - d));
        gens.push(Generator::new(id("c"), s, s - d));
        gens.push(Generator::new(id("e"), s - 1, s - 1 - d));
        arrows.push(Arrow::new(id("c"), id("a"), Kind::U, 1));
        arrows.push(Arrow::new(id("a"), id("b"), Kind::V, 1));
        arrows.push(Arrow::new(id("c"), id("e"), Kind::V, 1));
        arrows.push(Arrow::new(id("e"), id("b"), Kind::U, 1));
    }

    /// A staircase with steps (a_i, b_i): x_{2i-1} -> x_{2i-2} by U^a_i and
    /// x_{2i-1} -> x_{2i} by V^b_i, x_0 at Maslov 0 and Alexander
    /// sum(a_i + b_i)/2.
    pub fn staircase(name: &str, steps: &[(u32, u32)]) -> Result<UVZeroComplex, SynthError> {
        let total: i64 = steps.iter().map(|&(a, b)| (a + b) as i64).sum();
        if total % 2 != 0 || steps.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(SynthError::Range("steps need positive powers with even total".into()));
        }
        let mut gens = vec![Generator::new("x00", total / 2, 0)];
        let mut arrows = Vec::new();
        let (mut a_cur, mut m_cur) = (total / 2, 0);
        for (i, &(a, b)) in steps.iter().enumerate() {
            let (odd, even) = (format!("x{:02}", 2 * i + 1), format!("x{:02}", 2 * i + 2));
            let prev = format!("x{:02}", 2 * i);
            // prev = odd + U^a
            let (oa, om) = (a_cur - a as i64, m_cur + 1 - 2 * a as i64);
            gens.push(Generator::new(odd.clone(), oa, om));
            arrows.push(Arrow::new(odd.clone(), prev, Kind::U, a));
            (a_cur, m_cur) = (oa - b as i64, om - 1);
            gens.push(Generator::new(even.clone(), a_cur, m_cur));
            arrows.push(Arrow::new(odd, even, Kind::V, b));
        }
        UVZeroComplex::new(name, gens, arrows).map_err(|e| SynthError::Range(e.to_string()))
    }

    /// Staircase (trivial: one generator, else the right-handed trefoil)
    /// plus the requested simple boxes.
    pub fn synthesize_box_complex(
        staircase_trivial: bool,
        boxes: &[(i64, i64, u64)],
    ) -> Result<UVZeroComplex, SynthError> {
        let mut census: BTreeMap<(i64, i64), u64> = BTreeMap::new();
        for &(s, d, c) in boxes {
            *census.entry((s, d)).or_default() += c;
        }
        for (&(s, d), &count) in &census {
            let mirror = census.get(&(-s, d)).copied().unwrap_or(0);
            if mirror != count {
                return Err(SynthError::Asymmetric { s, d, count, mirror });
            }
        }
        let base = if staircase_trivial {
            UVZeroComplex::new("x", vec![Generator::new("x00", 0, 0)], vec![]).unwrap()
        } else {
            staircase("x", &[(1, 1)])?
        };
        let (mut gens, mut arrows) = (base.generators, base.arrows);
        let mut k = 0;
        for (&(s, d), &count) in &census {
            for _ in 0..count {
                push_box(&mut gens, &mut arrows, &format!("f{k:04}"), s, d);
                k += 1;
            }
        }
        let name = if census.is_empty() && staircase_trivial { "unknot" } else { "box-complex" };
        UVZeroComplex::new(name, gens, arrows).map_err(|e| SynthError::Range(e.to_string()))
    }

    /// Census of the unobstructed curve for slope pair 1/q: q figure eights
    /// at heights +-(g-1) and, for each crossing j with grading drop D_j,
    /// two height-0 figure eights in each delta grading -m_j .. -m_j+D_j-1.
    pub fn unobstructed_census(g: i64, q: i64) -> Result<Vec<(i64, i64, u64)>, SynthError> {
        if g < 2 || q < 1 {
            return Err(SynthError::Range(format!("need g >= 2 and q >= 1, got g = {g}, q = {q}")));
        }
        let s = g - 1;
        let mut census = vec![(s, 0, q as u64), (-s, 0, q as u64)];
        for j in 0..q as usize {
            let k = surgery::triangle_count(1, q, 0, s, j).map_err(|e| SynthError::Range(e.to_string()))?;
            let m = -1 + 2 * k + s;
            let drop = 2 * s + 4 * k - 1;
            for d in -m..-m + drop {
                census.push((0, d, 2));
            }
        }
        Ok(census)
    }

    pub fn synthesize_unobstructed(g: i64, q: i64) -> Result<UVZeroComplex, SynthError> {
        let census = unobstructed_census(g, q)?;
        let mut c = synthesize_box_complex(true, &census)?;
        c.name = format!("unobstructed-g{g}-q{q}");
        Ok(c)
    }
}
