#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use hfcosmetic_core::cfk::Mono;
use hfcosmetic_core::{parse_complex, Arrow, Generator, UVZeroComplex};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> UVZeroComplex {
    let text = std::fs::read_to_string(fixtures_dir().join(name)).unwrap();
    parse_complex(&text).unwrap()
}

/// Every top-level `.cfk` fixture, sorted by file name.
pub fn all_fixtures() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cfk"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

/// A symmetric census with heights up to `max_s` and deltas in [-max_d, max_d].
pub fn random_census<R: Rng>(rng: &mut R, max_s: i64, max_d: i64, entries: usize) -> Vec<(i64, i64, u64)> {
    let mut m: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    for _ in 0..rng.random_range(0..=entries) {
        let s = rng.random_range(0..=max_s);
        let d = rng.random_range(-max_d..=max_d);
        let c = rng.random_range(1..=2);
        *m.entry((s, d)).or_default() += c;
        if s != 0 {
            *m.entry((-s, d)).or_default() += c;
        }
    }
    m.into_iter().map(|((s, d), c)| (s, d, c)).collect()
}

pub fn census_map(c: &[(i64, i64, u64)]) -> BTreeMap<(i64, i64), u64> {
    let mut m = BTreeMap::new();
    for &(s, d, n) in c {
        if n > 0 {
            *m.entry((s, d)).or_default() += n;
        }
    }
    m
}

/// Rename generators with random distinct ids and shuffle arrow order.
pub fn relabel<R: Rng>(c: &UVZeroComplex, rng: &mut R) -> UVZeroComplex {
    let mut ids: Vec<usize> = (0..c.generators.len()).collect();
    ids.shuffle(rng);
    let map: HashMap<&str, String> =
        c.generators.iter().zip(&ids).map(|(g, &k)| (g.id.as_str(), format!("g{k:03}"))).collect();
    let gens = c.generators.iter().map(|g| Generator::new(map[g.id.as_str()].clone(), g.alexander, g.maslov)).collect();
    let mut arrows: Vec<Arrow> = c
        .arrows
        .iter()
        .map(|a| Arrow::new(map[a.src.as_str()].clone(), map[a.dst.as_str()].clone(), a.kind, a.power))
        .collect();
    arrows.shuffle(rng);
    UVZeroComplex::new(c.name.clone(), gens, arrows).unwrap()
}

type Diff = BTreeMap<(usize, usize), Mono>;

fn toggle(d: &mut Diff, key: (usize, usize), m: Mono) {
    match d.get(&key) {
        Some(&old) => {
            assert_eq!(old, m);
            d.remove(&key);
        }
        None => {
            d.insert(key, m);
        }
    }
}

/// Homotopy-equivalent unreduced version of `c`: adds cancelling pairs,
/// then applies random basis changes x -> x + y among generators sharing a
/// bigrading.
pub fn perturb<R: Rng>(c: &UVZeroComplex, rng: &mut R, pairs: usize, slides: usize) -> UVZeroComplex {
    let mut gens = c.generators.clone();
    let idx: HashMap<&str, usize> = c.generators.iter().enumerate().map(|(i, g)| (g.id.as_str(), i)).collect();
    let mut d: Diff = c.arrows.iter().map(|a| ((idx[a.src.as_str()], idx[a.dst.as_str()]), a.mono())).collect();
    for k in 0..pairs {
        let base = &c.generators[rng.random_range(0..c.generators.len())];
        let (a, m) = (base.alexander, base.maslov + rng.random_range(0..=1));
        let u = gens.len();
        gens.push(Generator::new(format!("p{k:02}u"), a, m));
        gens.push(Generator::new(format!("p{k:02}v"), a, m - 1));
        d.insert((u, u + 1), Mono::One);
    }
    let mut by_grading: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, g) in gens.iter().enumerate() {
        by_grading.entry((g.alexander, g.maslov)).or_default().push(i);
    }
    let classes: Vec<Vec<usize>> = by_grading.into_values().filter(|v| v.len() >= 2).collect();
    for _ in 0..slides {
        let Some(class) = classes.choose(rng) else { break };
        let mut two: Vec<usize> = class.clone();
        two.shuffle(rng);
        let (x, y) = (two[0], two[1]);
        // new x = x + y: row x picks up row y; column y picks up column x
        let row_y: Vec<(usize, Mono)> = d.iter().filter(|((s, _), _)| *s == y).map(|(&(_, t), &m)| (t, m)).collect();
        for (t, m) in row_y {
            toggle(&mut d, (x, t), m);
        }
        let col_x: Vec<(usize, Mono)> = d.iter().filter(|((_, t), _)| *t == x).map(|(&(s, _), &m)| (s, m)).collect();
        for (s, m) in col_x {
            toggle(&mut d, (s, y), m);
        }
    }
    let arrows = d
        .into_iter()
        .map(|((s, t), m)| {
            let (kind, power) = m.kind_power();
            Arrow::new(gens[s].id.clone(), gens[t].id.clone(), kind, power)
        })
        .collect();
    UVZeroComplex::new(format!("{}-perturbed", c.name), gens, arrows).unwrap()
}
