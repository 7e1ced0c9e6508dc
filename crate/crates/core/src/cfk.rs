//! UV=0 knot Floer complexes: the input model, its JSON format and validation.
//!
//! A document looks like
//!
//! ```json
//! {
//!   "name": "trefoil",
//!   "generators": [{ "id": "a", "alexander": 1, "maslov": 0 }],
//!   "arrows": [{ "from": "b", "to": "a", "kind": "U", "power": 1 }]
//! }
//! ```
//!
//! Conventions: a `U^a` arrow raises the Alexander grading by `a` and changes
//! the Maslov grading by `2a - 1`; a `V^b` arrow lowers Alexander by `b` and
//! Maslov by one. Exports that use the opposite U convention must swap the
//! sign of every Alexander grading before loading.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    U,
    V,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::U => f.write_str("U"),
            Kind::V => f.write_str("V"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub alexander: i64,
    pub maslov: i64,
}

impl Generator {
    pub fn new(id: impl Into<String>, alexander: i64, maslov: i64) -> Self {
        Generator { id: id.into(), alexander, maslov }
    }

    /// The delta grading `A - M`.
    pub fn delta(&self) -> i64 {
        self.alexander - self.maslov
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Arrow {
    #[serde(rename = "from")]
    pub src: String,
    #[serde(rename = "to")]
    pub dst: String,
    pub kind: Kind,
    pub power: u32,
}

impl Arrow {
    pub fn new(src: impl Into<String>, dst: impl Into<String>, kind: Kind, power: u32) -> Self {
        Arrow { src: src.into(), dst: dst.into(), kind, power }
    }

    pub fn mono(&self) -> Mono {
        Mono::of(self.kind, self.power)
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} {}^{}", self.src, self.dst, self.kind, self.power)
    }
}

/// A coefficient of the differential: `1`, `U^a` or `V^b` with positive powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mono {
    One,
    U(u32),
    V(u32),
}

impl Mono {
    pub fn of(kind: Kind, power: u32) -> Mono {
        match (kind, power) {
            (_, 0) => Mono::One,
            (Kind::U, a) => Mono::U(a),
            (Kind::V, b) => Mono::V(b),
        }
    }

    /// Product in F2[U,V]/(UV); `None` is zero.
    pub fn then(self, other: Mono) -> Option<Mono> {
        match (self, other) {
            (Mono::One, m) | (m, Mono::One) => Some(m),
            (Mono::U(a), Mono::U(b)) => Some(Mono::U(a + b)),
            (Mono::V(a), Mono::V(b)) => Some(Mono::V(a + b)),
            _ => None,
        }
    }

    pub fn kind_power(self) -> (Kind, u32) {
        match self {
            // power-0 arrows are written with kind U by convention
            Mono::One => (Kind::U, 0),
            Mono::U(a) => (Kind::U, a),
            Mono::V(b) => (Kind::V, b),
        }
    }

    /// Change in (A, M) along an arrow carrying this coefficient.
    pub fn shift(self) -> (i64, i64) {
        match self {
            Mono::One => (0, -1),
            Mono::U(a) => (a as i64, 2 * a as i64 - 1),
            Mono::V(b) => (-(b as i64), -1),
        }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mono::One => f.write_str("1"),
            Mono::U(a) => write!(f, "U^{a}"),
            Mono::V(b) => write!(f, "V^{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UVZeroComplex {
    pub name: String,
    pub generators: Vec<Generator>,
    pub arrows: Vec<Arrow>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CfkError {
    #[error("malformed complex document: {0}")]
    Malformed(String),
    #[error("duplicate generator id {0:?}")]
    DuplicateId(String),
    #[error("arrow {arrow} references unknown generator {id:?}")]
    UnknownId { arrow: String, id: String },
    #[error("arrow {from}->{to} has negative power {power}")]
    NegativePower { from: String, to: String, power: i64 },
    #[error("arrow {0} from a generator to itself")]
    SelfLoop(String),
    #[error("arrow {0} listed more than once")]
    DuplicateArrow(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComplex {
    name: String,
    generators: Vec<Generator>,
    arrows: Vec<RawArrow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrow {
    from: String,
    to: String,
    kind: Kind,
    power: i64,
}

/// Parse a complex document. Structural checks only; see [`validate`].
pub fn parse_complex(text: &str) -> Result<UVZeroComplex, CfkError> {
    let raw: RawComplex =
        serde_json::from_str(text).map_err(|e| CfkError::Malformed(e.to_string()))?;
    let mut arrows = Vec::with_capacity(raw.arrows.len());
    for a in raw.arrows {
        if a.power < 0 {
            return Err(CfkError::NegativePower { from: a.from, to: a.to, power: a.power });
        }
        let power = u32::try_from(a.power)
            .map_err(|_| CfkError::Malformed(format!("power {} too large", a.power)))?;
        arrows.push(Arrow { src: a.from, dst: a.to, kind: a.kind, power });
    }
    UVZeroComplex::new(raw.name, raw.generators, arrows)
}

impl UVZeroComplex {
    /// Build a complex, checking ids, endpoints and duplicate arrows.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<Generator>,
        arrows: Vec<Arrow>,
    ) -> Result<Self, CfkError> {
        let mut ids = BTreeSet::new();
        for g in &generators {
            if !ids.insert(g.id.as_str()) {
                return Err(CfkError::DuplicateId(g.id.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for a in &arrows {
            for end in [&a.src, &a.dst] {
                if !ids.contains(end.as_str()) {
                    return Err(CfkError::UnknownId { arrow: a.to_string(), id: end.clone() });
                }
            }
            if a.src == a.dst {
                return Err(CfkError::SelfLoop(a.to_string()));
            }
            // a power-0 arrow is the coefficient 1 whatever its kind label says
            let key = (a.src.as_str(), a.dst.as_str(), a.mono());
            if !seen.insert(key) {
                return Err(CfkError::DuplicateArrow(a.to_string()));
            }
        }
        let mut c = UVZeroComplex { name: name.into(), generators, arrows };
        c.canonicalize();
        Ok(c)
    }

    fn canonicalize(&mut self) {
        self.generators.sort();
        self.arrows.sort();
    }

    pub fn generator(&self, id: &str) -> Option<&Generator> {
        self.generators
            .binary_search_by(|g| g.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.generators[i])
    }

    /// Canonical serialization: sorted arrays, pretty JSON, trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("complex serializes");
        s.push('\n');
        s
    }

    /// Mirror image: arrows reversed, gradings negated.
    pub fn mirror(&self) -> UVZeroComplex {
        let generators = self
            .generators
            .iter()
            .map(|g| Generator::new(g.id.clone(), -g.alexander, -g.maslov))
            .collect();
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow::new(a.dst.clone(), a.src.clone(), a.kind, a.power))
            .collect();
        let mut c = UVZeroComplex { name: format!("{}-mirror", self.name), generators, arrows };
        c.canonicalize();
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Violation {
    /// An arrow whose endpoints break the grading law for its coefficient.
    Grading { arrow: String, expected: (i64, i64), found: (i64, i64) },
    /// An odd number of two-step paths `x -> y -> z` with product `mono`.
    DSquared { from: String, to: String, mono: String, paths: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Grading { arrow, expected, found } => write!(
                f,
                "grading law broken by {arrow}: target should sit at (A,M) = ({}, {}), found ({}, {})",
                expected.0, expected.1, found.0, found.1
            ),
            Violation::DSquared { from, to, mono, paths } => {
                write!(f, "d^2 != 0: {paths} paths {from} -> {to} with coefficient {mono}")
            }
        }
    }
}

/// Every broken grading law and every odd two-step path count.
pub fn validate(c: &UVZeroComplex) -> Vec<Violation> {
    let gens: HashMap<&str, &Generator> =
        c.generators.iter().map(|g| (g.id.as_str(), g)).collect();
    let mut out = Vec::new();

    for a in &c.arrows {
        let (s, d) = (gens[a.src.as_str()], gens[a.dst.as_str()]);
        let (da, dm) = a.mono().shift();
        let expected = (s.alexander + da, s.maslov + dm);
        let found = (d.alexander, d.maslov);
        if expected != found {
            out.push(Violation::Grading { arrow: a.to_string(), expected, found });
        }
    }

    let mut outgoing: HashMap<&str, Vec<&Arrow>> = HashMap::new();
    for a in &c.arrows {
        outgoing.entry(a.src.as_str()).or_default().push(a);
    }
    let mut counts: BTreeMap<(&str, &str, Mono), usize> = BTreeMap::new();
    for first in &c.arrows {
        for second in outgoing.get(first.dst.as_str()).into_iter().flatten() {
            if let Some(m) = first.mono().then(second.mono()) {
                *counts.entry((first.src.as_str(), second.dst.as_str(), m)).or_default() += 1;
            }
        }
    }
    for ((from, to, m), n) in counts {
        if n % 2 == 1 {
            out.push(Violation::DSquared {
                from: from.to_string(),
                to: to.to_string(),
                mono: m.to_string(),
                paths: n,
            });
        }
    }
    out
}
