//! Machine-readable records. Field order is fixed by declaration order, and
//! rationals are written as "num/den".

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::curve::{CurveProfile, Rational};
use crate::reduction::KnotInvariants;
use crate::pipeline::{Analysis, BatchError, Funnel};
use crate::surgery::GradedSurgeryComparison;

pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = s.split_once('/')?;
    let (n, d): (i64, i64) = (n.parse().ok()?, d.parse().ok()?);
    (d != 0).then(|| Rational::new(n, d))
}

/// Box census keyed by "s,d", in numeric order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Census(pub BTreeMap<(i64, i64), u64>);

impl Serialize for Census {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(self.0.len()))?;
        for ((s, d), c) in &self.0 {
            map.serialize_entry(&format!("{s},{d}"), c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Census {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        struct CensusVisitor;
        impl<'de> Visitor<'de> for CensusVisitor {
            type Value = Census;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from \"s,d\" to counts")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Census, A::Error> {
                let mut out = BTreeMap::new();
                while let Some((key, count)) = access.next_entry::<String, u64>()? {
                    let parsed = key
                        .split_once(',')
                        .and_then(|(s, d)| Some((s.parse().ok()?, d.parse().ok()?)))
                        .ok_or_else(|| de::Error::custom(format!("bad census key {key:?}")))?;
                    out.insert(parsed, count);
                }
                Ok(Census(out))
            }
        }
        de.deserialize_map(CensusVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateRecord {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsRecord {
    pub genus: i64,
    pub thickness: i64,
    pub tau: i64,
    pub epsilon: i64,
    pub m: i64,
    pub n: Option<BTreeMap<i64, u64>>,
    pub e: Option<Census>,
    pub q_star: Option<String>,
    pub alexander: Vec<i64>,
    pub alex_dd1: i64,
}

impl InvariantsRecord {
    pub fn new(inv: &KnotInvariants, profile: Option<&CurveProfile>, q_star: Option<&Rational>) -> Self {
        InvariantsRecord {
            genus: inv.genus,
            thickness: inv.thickness,
            tau: inv.tau,
            epsilon: inv.epsilon,
            m: 2 * inv.tau - inv.epsilon,
            n: profile.and_then(|p| p.n.clone()),
            e: profile.and_then(|p| p.e.clone()).map(Census),
            q_star: q_star.map(fmt_rational),
            alexander: inv.alexander_coeffs(),
            alex_dd1: inv.alex_dd1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotReport {
    pub name: String,
    pub verdict: String,
    pub gates: Vec<GateRecord>,
    pub surviving_pairs: Vec<[i64; 2]>,
    pub invariants: InvariantsRecord,
}

impl KnotReport {
    pub fn from_analysis(a: &Analysis) -> Self {
        let invariants = InvariantsRecord::new(&a.invariants, a.profile.as_ref(), a.q_star.as_ref());
        KnotReport {
            name: a.name.clone(),
            verdict: a.verdict.kind.to_string(),
            gates: a
                .verdict
                .gates
                .iter()
                .map(|g| GateRecord { name: g.name.to_string(), passed: g.passed, detail: g.detail.clone() })
                .collect(),
            surviving_pairs: a.verdict.surviving_pairs.iter().map(|s| [s.p, s.q]).collect(),
            invariants,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub name: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunnelRecord {
    pub total: usize,
    pub pass_epsilon: usize,
    pub pass_genus: usize,
    pub pass_boyer_lines: usize,
    pub with_candidates: usize,
    pub hf_indistinguishable: Vec<String>,
    pub inconclusive: Vec<String>,
    pub errors: Vec<ErrorRecord>,
}

impl From<&Funnel> for FunnelRecord {
    fn from(f: &Funnel) -> Self {
        FunnelRecord {
            total: f.total,
            pass_epsilon: f.pass_epsilon,
            pass_genus: f.pass_genus,
            pass_boyer_lines: f.pass_boyer_lines,
            with_candidates: f.with_candidates,
            hf_indistinguishable: f.hf_indistinguishable.clone(),
            inconclusive: f.inconclusive.clone(),
            errors: f
                .errors
                .iter()
                .map(|BatchError { name, message }| ErrorRecord { name: name.clone(), message: message.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchReport {
    pub reports: Vec<KnotReport>,
    pub funnel: FunnelRecord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinCRecord {
    pub index: i64,
    pub d_plus: String,
    pub d_minus: String,
    pub multiset_plus: Vec<String>,
    pub multiset_minus: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryRecord {
    pub name: String,
    pub slope: [i64; 2],
    pub total_rank: usize,
    pub spin_c: Vec<SpinCRecord>,
    #[serde(rename = "match")]
    pub matched: bool,
    pub sigma: Option<Vec<usize>>,
}

impl SurgeryRecord {
    pub fn new(name: &str, g: &GradedSurgeryComparison) -> Self {
        let strs = |v: &[Rational]| v.iter().map(fmt_rational).collect();
        SurgeryRecord {
            name: name.to_string(),
            slope: [g.slope.p, g.slope.q],
            total_rank: g.rank(),
            spin_c: g
                .spin_c
                .iter()
                .map(|c| SpinCRecord {
                    index: c.index,
                    d_plus: fmt_rational(&c.d_plus),
                    d_minus: fmt_rational(&c.d_minus),
                    multiset_plus: strs(&c.multiset_plus),
                    multiset_minus: strs(&c.multiset_minus),
                })
                .collect(),
            matched: g.matched,
            sigma: g.sigma.clone(),
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_round_trip() {
        let c = Census(BTreeMap::from([((-1, 0), 1), ((0, -2), 2), ((1, 0), 1)]));
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"{"-1,0":1,"0,-2":2,"1,0":1}"#);
        assert_eq!(serde_json::from_str::<Census>(&s).unwrap(), c);
    }

    #[test]
    fn rationals() {
        assert_eq!(fmt_rational(&Rational::new(-2, 8)), "-1/4");
        assert_eq!(fmt_rational(&Rational::from_integer(0)), "0/1");
        assert_eq!(parse_rational("-1/4"), Some(Rational::new(-1, 4)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
