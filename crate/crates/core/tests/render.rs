mod common;

use hfcosmetic_core::*;
use num_integer::Integer;

type Pt = (i64, i64);

/// (class, polylines) for every path element; coordinates scaled by 1000.
fn paths(svg: &str) -> Vec<(String, Vec<Vec<Pt>>)> {
    let attr = |el: &str, name: &str| -> Option<String> {
        let start = el.find(&format!(" {name}=\""))? + name.len() + 3;
        let len = el[start..].find('"')?;
        Some(el[start..start + len].to_string())
    };
    let mut out = Vec::new();
    for el in svg.split("<path").skip(1) {
        let el = &el[..el.find("/>").unwrap()];
        let class = attr(el, "class").unwrap();
        let d = attr(el, "d").unwrap();
        let mut lines: Vec<Vec<Pt>> = Vec::new();
        let mut toks = d.split_whitespace();
        while let Some(t) = toks.next() {
            match t {
                "M" | "L" => {
                    let mut num = || {
                        let x: f64 = toks.next().unwrap().parse().unwrap();
                        (x * 1000.0).round() as i64
                    };
                    let pt = (num(), num());
                    if t == "M" {
                        lines.push(vec![pt]);
                    } else {
                        lines.last_mut().unwrap().push(pt);
                    }
                }
                "Z" => {
                    let l = lines.last_mut().unwrap();
                    let first = l[0];
                    l.push(first);
                }
                other => panic!("unexpected path command {other}"),
            }
        }
        out.push((class, lines));
    }
    out
}

fn orient(a: Pt, b: Pt, c: Pt) -> i128 {
    let (ax, ay, bx, by, cx, cy) = (a.0 as i128, a.1 as i128, b.0 as i128, b.1 as i128, c.0 as i128, c.1 as i128);
    (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
}

/// Transverse crossings only; any touching or collinear contact panics.
fn crosses(a: Pt, b: Pt, c: Pt, d: Pt) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    let straddle = |x: i128, y: i128| (x > 0 && y < 0) || (x < 0 && y > 0);
    if straddle(o1, o2) && straddle(o3, o4) {
        return true;
    }
    let inside = |p: Pt, q: Pt, r: Pt| r.0 >= p.0.min(q.0) && r.0 <= p.0.max(q.0) && r.1 >= p.1.min(q.1) && r.1 <= p.1.max(q.1);
    let touch = (o1 == 0 && inside(a, b, c))
        || (o2 == 0 && inside(a, b, d))
        || (o3 == 0 && inside(c, d, a))
        || (o4 == 0 && inside(c, d, b));
    assert!(!touch, "degenerate contact between {a:?}-{b:?} and {c:?}-{d:?}");
    false
}

fn segments(lines: &[Vec<Pt>]) -> Vec<(Pt, Pt)> {
    lines.iter().flat_map(|l| l.windows(2).map(|w| (w[0], w[1]))).collect()
}

fn intersections(svg: &str) -> usize {
    let all = paths(svg);
    let curve: Vec<(Pt, Pt)> = all.iter().filter(|(c, _)| c == "curve").flat_map(|(_, l)| segments(l)).collect();
    let lines: Vec<(Pt, Pt)> = all.iter().filter(|(c, _)| c == "overlay").flat_map(|(_, l)| segments(l)).collect();
    let mut n = 0;
    for &(a, b) in &lines {
        for &(c, d) in &curve {
            n += crosses(a, b, c, d) as usize;
        }
    }
    n
}

fn profile_of(name: &str) -> CurveProfile {
    analyze(&common::fixture(name)).unwrap().profile.unwrap()
}

fn draw(profile: &CurveProfile, slope: Option<(i64, i64, bool)>) -> String {
    let overlay = slope.map(|(p, q, negative)| Overlay { slope: SlopePair::new(p, q).unwrap(), negative });
    render_curves(&DiagramSpec { profile: profile.clone(), overlay }).unwrap()
}

#[test]
fn nine_44_slope_one_has_nine_crossings() {
    let svg = draw(&profile_of("9_44.cfk"), Some((1, 1, false)));
    assert_eq!(intersections(&svg), 9);
    let curves = paths(&svg).iter().filter(|(c, _)| c == "curve").count();
    assert_eq!(curves, 5);
}

#[test]
fn crossings_equal_total_rank() {
    let mut profiles: Vec<CurveProfile> = ["9_44.cfk", "thin_n2.cfk"].iter().map(|f| profile_of(f)).collect();
    profiles.push(CurveProfile::from_census(&common::census_map(&[(2, 0, 1), (-2, 0, 1), (0, 1, 3), (1, -1, 1), (-1, -1, 1)])));
    for profile in &profiles {
        let n = profile.n_total() as i64;
        for p in 1..=5i64 {
            for q in (1..=4).filter(|q| q.gcd(&p) == 1) {
                for negative in [false, true] {
                    let svg = draw(profile, Some((p, q, negative)));
                    let want = total_rank(p, q, profile.m, n) as usize;
                    assert_eq!(intersections(&svg), want, "{:?} at {p}/{q}, negative = {negative}", profile.e);
                }
            }
        }
    }
}

#[test]
fn output_is_deterministic_and_plain() {
    let profile = profile_of("9_44.cfk");
    let a = draw(&profile, Some((2, 1, false)));
    assert_eq!(a, draw(&profile, Some((2, 1, false))));
    for (_, lines) in paths(&a) {
        assert!(!lines.is_empty());
    }
    assert!(a.starts_with("<?xml") && a.ends_with("</svg>\n"));
    assert!(!a.contains(" C ") && !a.contains(" Q ") && !a.contains(" A "));
}

#[test]
fn unknot_draws_one_curve() {
    let c = common::fixture("unknot.cfk");
    let (reduced, decomp, inv) = hfcosmetic_core::pipeline::prepare(&c).unwrap();
    let profile = curve_profile(&decomp, &inv, &reduced).unwrap();
    let svg = draw(&profile, None);
    let found = paths(&svg);
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].0, "curve");
}

#[test]
fn staircase_knots_are_refused() {
    let a = analyze(&common::fixture("4_1.cfk")).unwrap();
    let (reduced, decomp, inv) = (&a.reduced, &a.decomposition, &a.invariants);
    let profile = curve_profile(decomp, inv, reduced).unwrap();
    assert!(render_curves(&DiagramSpec { profile, overlay: None }).is_ok());
    let trefoil = analyze(&common::fixture("3_1.cfk")).unwrap();
    let p = curve_profile(&trefoil.decomposition, &trefoil.invariants, &trefoil.reduced).unwrap();
    assert_eq!(render_curves(&DiagramSpec { profile: p, overlay: None }), Err(RenderError::Unsupported));
}
