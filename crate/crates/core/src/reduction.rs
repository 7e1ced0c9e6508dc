//! Cancellation of power-0 arrows, splitting into summands, and the classical
//! invariants read off the reduced complex.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::cfk::{Arrow, Generator, Kind, Mono, UVZeroComplex};
use crate::gf2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("complex still has power-0 arrows; reduce it first")]
    NotReduced,
    #[error("expected exactly one summand with nonzero vertical homology, found {0}")]
    NonAcyclicCount(usize),
    #[error("non-acyclic summand has vertical homology of rank {0}, expected 1")]
    StaircaseRank(usize),
    #[error("isolated staircase generator sits at (A,M) = ({0}, {1}), expected (0, 0)")]
    StaircaseBase(i64, i64),
    #[error("V-matching of the staircase leaves {0} generators unmatched, expected 1")]
    Matching(usize),
}

/// Indexed adjacency form used while cancelling.
struct Work {
    out: Vec<BTreeMap<usize, Mono>>,
    inn: Vec<BTreeMap<usize, Mono>>,
    ones: BTreeSet<(usize, usize)>,
}

impl Work {
    fn toggle(&mut self, w: usize, z: usize, m: Mono) {
        match self.out[w].get(&z) {
            Some(&old) => {
                assert_eq!(old, m, "inhomogeneous differential between generators {w} and {z}");
                self.out[w].remove(&z);
                self.inn[z].remove(&w);
                self.ones.remove(&(w, z));
            }
            None => {
                self.out[w].insert(z, m);
                self.inn[z].insert(w, m);
                if m == Mono::One {
                    self.ones.insert((w, z));
                }
            }
        }
    }

    fn detach(&mut self, v: usize) {
        for (z, _) in std::mem::take(&mut self.out[v]) {
            self.inn[z].remove(&v);
            self.ones.remove(&(v, z));
        }
        for (w, _) in std::mem::take(&mut self.inn[v]) {
            self.out[w].remove(&v);
            self.ones.remove(&(w, v));
        }
    }
}

/// Gaussian cancellation of every power-0 arrow, smallest (source, target) first.
/// Expects a valid complex.
pub fn reduce(c: &UVZeroComplex) -> UVZeroComplex {
    let n = c.generators.len();
    let idx: HashMap<&str, usize> =
        c.generators.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
    let mut w = Work { out: vec![BTreeMap::new(); n], inn: vec![BTreeMap::new(); n], ones: BTreeSet::new() };
    for a in &c.arrows {
        w.toggle(idx[a.src.as_str()], idx[a.dst.as_str()], a.mono());
    }
    let mut alive = vec![true; n];

    while let Some(&(x, y)) = w.ones.iter().next() {
        let into_y: Vec<(usize, Mono)> =
            w.inn[y].iter().filter(|(&v, _)| v != x).map(|(&v, &m)| (v, m)).collect();
        let from_x: Vec<(usize, Mono)> =
            w.out[x].iter().filter(|(&v, _)| v != y).map(|(&v, &m)| (v, m)).collect();
        for &(src, a) in &into_y {
            for &(dst, b) in &from_x {
                if let Some(m) = a.then(b) {
                    w.toggle(src, dst, m);
                }
            }
        }
        w.detach(x);
        w.detach(y);
        alive[x] = false;
        alive[y] = false;
    }

    let generators = (0..n).filter(|&i| alive[i]).map(|i| c.generators[i].clone()).collect();
    let mut arrows = Vec::new();
    for (i, targets) in w.out.iter().enumerate() {
        for (&j, &m) in targets {
            let (kind, power) = m.kind_power();
            arrows.push(Arrow::new(c.generators[i].id.clone(), c.generators[j].id.clone(), kind, power));
        }
    }
    UVZeroComplex::new(c.name.clone(), generators, arrows).expect("reduction keeps the complex well formed")
}

/// Homology dimension at each bigrading of the power-0 part of the differential.
pub fn power_zero_homology(c: &UVZeroComplex) -> BTreeMap<(i64, i64), usize> {
    let mut by_grading: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, g) in c.generators.iter().enumerate() {
        by_grading.entry((g.alexander, g.maslov)).or_default().push(i);
    }
    let pos: HashMap<&str, usize> = c
        .generators
        .iter()
        .map(|g| {
            let list = &by_grading[&(g.alexander, g.maslov)];
            let p = list.iter().position(|&i| c.generators[i].id == g.id).unwrap();
            (g.id.as_str(), p)
        })
        .collect();
    let grading = |id: &str| {
        let g = c.generator(id).unwrap();
        (g.alexander, g.maslov)
    };
    // rank of d leaving each bigrading
    let mut leaving: BTreeMap<(i64, i64), Vec<(usize, usize)>> = BTreeMap::new();
    for a in c.arrows.iter().filter(|a| a.power == 0) {
        leaving.entry(grading(&a.src)).or_default().push((pos[a.src.as_str()], pos[a.dst.as_str()]));
    }
    let rank_from = |ag: (i64, i64)| -> usize {
        let Some(entries) = leaving.get(&ag) else { return 0 };
        let rows = by_grading.get(&ag).map_or(0, Vec::len);
        let cols = by_grading.get(&(ag.0, ag.1 - 1)).map_or(0, Vec::len);
        gf2::rank_of_entries(rows, cols, entries.iter().copied())
    };
    by_grading
        .iter()
        .map(|(&(a, m), list)| {
            let h = list.len() - rank_from((a, m)) - rank_from((a, m + 1));
            ((a, m), h)
        })
        .filter(|&(_, h)| h > 0)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "variant")]
pub enum Variant {
    Staircase,
    /// `simple` means every power is 1, the only case with closed-form gradings.
    Box { s: i64, d: i64, simple: bool },
    Exotic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub variant: Variant,
    /// Staircases list generators in walk order from the top; boxes as
    /// [top, sink, source, bottom].
    pub gens: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub staircase: Summand,
    pub boxes: Vec<Summand>,
    pub exotics: Vec<Summand>,
}

impl Decomposition {
    /// Every acyclic summand is a box with unit powers.
    pub fn box_class(&self) -> bool {
        self.exotics.is_empty()
            && self.boxes.iter().all(|b| matches!(b.variant, Variant::Box { simple: true, .. }))
    }

    /// Count of simple boxes at each (height, delta).
    pub fn census(&self) -> BTreeMap<(i64, i64), u64> {
        let mut m = BTreeMap::new();
        for b in &self.boxes {
            if let Variant::Box { s, d, simple: true } = b.variant {
                *m.entry((s, d)).or_default() += 1;
            }
        }
        m
    }
}

fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let r = find(&mut parent, v);
        groups.entry(r).or_default().push(v);
    }
    groups.into_values().collect()
}

fn classify_box(gens: &[Generator], arrows: &[(usize, usize, Mono)]) -> Option<Summand> {
    if gens.len() != 4 || arrows.len() != 4 {
        return None;
    }
    let out = |v: usize| arrows.iter().filter(move |a| a.0 == v);
    let in_deg = |v: usize| arrows.iter().filter(|a| a.1 == v).count();
    let c = (0..4).find(|&v| in_deg(v) == 0 && out(v).count() == 2)?;
    let (a, pa) = out(c).find_map(|x| match x.2 {
        Mono::U(p) => Some((x.1, p)),
        _ => None,
    })?;
    let (e, pe) = out(c).find_map(|x| match x.2 {
        Mono::V(p) => Some((x.1, p)),
        _ => None,
    })?;
    let (b, pab) = out(a).find_map(|x| match x.2 {
        Mono::V(p) => Some((x.1, p)),
        _ => None,
    })?;
    let pe_b = out(e).find_map(|x| match x.2 {
        Mono::U(p) if x.1 == b => Some(p),
        _ => None,
    })?;
    if in_deg(b) != 2 || [a, b, e].contains(&c) || a == e {
        return None;
    }
    let simple = [pa, pe, pab, pe_b].iter().all(|&p| p == 1);
    let g = &gens[c];
    Some(Summand {
        variant: Variant::Box { s: g.alexander, d: g.delta(), simple },
        gens: [a, b, c, e].iter().map(|&i| gens[i].id.clone()).collect(),
    })
}

fn staircase_order(gens: &[Generator], arrows: &[(usize, usize, Mono)]) -> Vec<String> {
    let n = gens.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in arrows {
        adj[a].push(b);
        adj[b].push(a);
    }
    let is_path = arrows.len() + 1 == n && adj.iter().all(|v| v.len() <= 2);
    let key = |i: usize| (-gens[i].alexander, gens[i].id.clone());
    if !is_path || n == 1 {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| key(i));
        return order.into_iter().map(|i| gens[i].id.clone()).collect();
    }
    let start = (0..n).filter(|&i| adj[i].len() == 1).min_by_key(|&i| key(i)).unwrap();
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj[cur].iter().find(|&&v| v != prev) {
        order.push(next);
        prev = cur;
        cur = next;
    }
    order.into_iter().map(|i| gens[i].id.clone()).collect()
}

/// Split a reduced complex into connected summands and classify each.
pub fn decompose(reduced: &UVZeroComplex) -> Result<Decomposition, ReductionError> {
    if reduced.arrows.iter().any(|a| a.power == 0) {
        return Err(ReductionError::NotReduced);
    }
    let idx: HashMap<&str, usize> =
        reduced.generators.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
    let edges: Vec<(usize, usize, Mono)> = reduced
        .arrows
        .iter()
        .map(|a| (idx[a.src.as_str()], idx[a.dst.as_str()], a.mono()))
        .collect();
    let plain: Vec<(usize, usize)> = edges.iter().map(|e| (e.0, e.1)).collect();

    let mut staircases = Vec::new();
    let mut boxes = Vec::new();
    let mut exotics = Vec::new();
    for comp in components(reduced.generators.len(), &plain) {
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(l, &g)| (g, l)).collect();
        let gens: Vec<Generator> = comp.iter().map(|&i| reduced.generators[i].clone()).collect();
        let arrows: Vec<(usize, usize, Mono)> = edges
            .iter()
            .filter(|e| local.contains_key(&e.0))
            .map(|e| (local[&e.0], local[&e.1], e.2))
            .collect();
        let v_rank = gf2::rank_of_entries(
            gens.len(),
            gens.len(),
            arrows.iter().filter(|a| matches!(a.2, Mono::V(_))).map(|a| (a.0, a.1)),
        );
        let vertical = gens.len() - 2 * v_rank;
        if vertical > 0 {
            staircases.push((vertical, gens, arrows));
        } else if let Some(b) = classify_box(&gens, &arrows) {
            boxes.push(b);
        } else {
            exotics.push(Summand {
                variant: Variant::Exotic,
                gens: gens.iter().map(|g| g.id.clone()).collect(),
            });
        }
    }

    if staircases.len() != 1 {
        return Err(ReductionError::NonAcyclicCount(staircases.len()));
    }
    let (vertical, gens, arrows) = staircases.pop().unwrap();
    if vertical != 1 {
        return Err(ReductionError::StaircaseRank(vertical));
    }
    if gens.len() == 1 && (gens[0].alexander, gens[0].maslov) != (0, 0) {
        return Err(ReductionError::StaircaseBase(gens[0].alexander, gens[0].maslov));
    }
    let staircase = Summand { variant: Variant::Staircase, gens: staircase_order(&gens, &arrows) };
    Ok(Decomposition { staircase, boxes, exotics })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotInvariants {
    pub genus: i64,
    pub thickness: i64,
    pub tau: i64,
    pub epsilon: i64,
    /// Generator count at each (A, M).
    pub hfk: BTreeMap<(i64, i64), usize>,
    /// Nonzero coefficients of the Alexander polynomial by exponent.
    pub alexander: BTreeMap<i64, i64>,
    pub alex_dd1: i64,
}

impl KnotInvariants {
    /// Coefficients from t^-g up to t^g.
    pub fn alexander_coeffs(&self) -> Vec<i64> {
        (-self.genus..=self.genus).map(|s| self.alexander.get(&s).copied().unwrap_or(0)).collect()
    }
}

pub fn knot_invariants(
    decomp: &Decomposition,
    reduced: &UVZeroComplex,
) -> Result<KnotInvariants, ReductionError> {
    let in_stair: BTreeSet<&str> = decomp.staircase.gens.iter().map(String::as_str).collect();
    let stair_arrows: Vec<&Arrow> = reduced
        .arrows
        .iter()
        .filter(|a| in_stair.contains(a.src.as_str()) && in_stair.contains(a.dst.as_str()))
        .collect();

    let mut matched = BTreeSet::new();
    for a in stair_arrows.iter().filter(|a| a.kind == Kind::V) {
        if !matched.contains(a.src.as_str()) && !matched.contains(a.dst.as_str()) {
            matched.insert(a.src.as_str());
            matched.insert(a.dst.as_str());
        }
    }
    let unmatched: Vec<&str> = in_stair.difference(&matched).copied().collect();
    if unmatched.len() != 1 {
        return Err(ReductionError::Matching(unmatched.len()));
    }
    let x = unmatched[0];
    let tau = reduced.generator(x).unwrap().alexander;
    let u_arrows = || stair_arrows.iter().filter(|a| a.kind == Kind::U);
    let epsilon = if u_arrows().any(|a| a.dst == x) {
        1
    } else if u_arrows().any(|a| a.src == x) {
        -1
    } else {
        0
    };

    let gens = &reduced.generators;
    let genus = gens.iter().map(|g| g.alexander).max().unwrap_or(0);
    let deltas = gens.iter().map(Generator::delta);
    let thickness = deltas.clone().max().unwrap_or(0) - deltas.min().unwrap_or(0);
    let mut hfk = BTreeMap::new();
    let mut alexander = BTreeMap::new();
    for g in gens {
        *hfk.entry((g.alexander, g.maslov)).or_default() += 1;
        let sign = if g.maslov.rem_euclid(2) == 0 { 1 } else { -1 };
        *alexander.entry(g.alexander).or_default() += sign;
    }
    alexander.retain(|_, c| *c != 0);
    let alex_dd1 = alexander.iter().map(|(&s, &a)| a * s * (s - 1)).sum();
    Ok(KnotInvariants { genus, thickness, tau, epsilon, hfk, alexander, alex_dd1 })
}
