use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    MeasurePreserving,
    Ergodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Holds,
    Fails,
}

/// Data sufficient to re-check a failing level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// `φ_k(prefix, first) = φ_k(prefix, second)`.
    NotBijective { prefix: u64, first: u32, second: u32 },
    /// `b_first ≡ b_second mod p` inside one fiber.
    VdpCollision { first: u64, second: u64, residue: u64 },
    /// `b_m ≡ 0 mod p` for an `m` above the base of its fiber.
    VdpZero { m: u64 },
    /// The orbit product `F_{k,anchor}` (or `φ_0` at level 0) is not a single cycle.
    NotTransitive { anchor: u64, product: String, cycle_type: Vec<u64> },
    /// The orbit of the anchor under `f mod p^k` closed after `length < p^k` steps.
    ShortOrbit { anchor: u64, length: u64 },
    /// The sum condition evaluates to zero modulo `p`.
    SumVanishes { lhs: u64 },
    /// A closed-form coefficient condition is violated.
    Condition { detail: String },
    /// The exhaustive check found a shorter orbit of 0 modulo `p^{k+1}`.
    OracleCycle { orbit_length: u64 },
    /// An earlier level already fails.
    LowerLevel { level: u32 },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::NotBijective { prefix, first, second } => write!(
                f,
                "subfunction at prefix {prefix} sends {first} and {second} to the same digit"
            ),
            Witness::VdpCollision { first, second, residue } => {
                write!(f, "b_{first} ≡ b_{second} ≡ {residue} mod p")
            }
            Witness::VdpZero { m } => write!(f, "b_{m} ≡ 0 mod p"),
            Witness::NotTransitive { anchor, product, cycle_type } => {
                if cycle_type.iter().all(|&l| l == 1) {
                    write!(f, "orbit product at anchor {anchor} is the identity")
                } else {
                    write!(f, "orbit product at anchor {anchor} = {product} is not transitive")
                }
            }
            Witness::ShortOrbit { anchor, length } => {
                write!(f, "orbit of {anchor} closes after {length} steps")
            }
            Witness::SumVanishes { lhs } => write!(f, "sum condition evaluates to {lhs} ≡ 0 mod p"),
            Witness::Condition { detail } => write!(f, "{detail}"),
            Witness::OracleCycle { orbit_length } => {
                write!(f, "orbit of 0 has length {orbit_length}")
            }
            Witness::LowerLevel { level } => write!(f, "fails already at level {level}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStatus {
    pub k: u32,
    pub status: Status,
    pub witness: Option<Witness>,
}

/// A sum condition evaluated at one level; `holds ⇔ lhs ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumCondition {
    pub k: u32,
    pub lhs: u64,
    pub holds: bool,
}

impl SumCondition {
    pub fn new(k: u32, lhs: u64) -> Self {
        SumCondition { k, lhs, holds: lhs != 0 }
    }
}

/// Per-level outcome of a decision procedure through `certified_depth`.
///
/// Level `k` concerns `f mod p^{k+1}`. Statuses are cumulative: once a level
/// fails, every higher level fails with [`Witness::LowerLevel`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub certified_depth: u32,
    pub levels: Vec<LevelStatus>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sums: Vec<SumCondition>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    /// Levels below `failure` hold; `failure` fails with its witness; the rest
    /// inherit the failure.
    pub fn from_first_failure(kind: VerdictKind, depth: u32, failure: Option<(u32, Witness)>) -> Self {
        let levels = (0..=depth)
            .map(|k| match &failure {
                Some((level, w)) if k == *level => LevelStatus {
                    k,
                    status: Status::Fails,
                    witness: Some(w.clone()),
                },
                Some((level, _)) if k > *level => LevelStatus {
                    k,
                    status: Status::Fails,
                    witness: Some(Witness::LowerLevel { level: *level }),
                },
                _ => LevelStatus {
                    k,
                    status: Status::Holds,
                    witness: None,
                },
            })
            .collect();
        Verdict {
            kind,
            certified_depth: depth,
            levels,
            sums: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.levels.iter().all(|l| l.status == Status::Holds)
    }

    pub fn holds_at(&self, k: u32) -> bool {
        self.levels
            .get(k as usize)
            .is_some_and(|l| l.status == Status::Holds)
    }

    pub fn first_failure(&self) -> Option<&LevelStatus> {
        self.levels.iter().find(|l| l.status == Status::Fails)
    }

    /// `holds_at(k)` for every level, in order.
    pub fn statuses(&self) -> Vec<bool> {
        self.levels.iter().map(|l| l.status == Status::Holds).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

impl LevelStatus {
    fn write_witness(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            // at level 0 the orbit product is φ_0 itself
            Some(Witness::NotTransitive { product, cycle_type, .. }) if self.k == 0 => {
                if cycle_type.iter().all(|&c| c == 1) {
                    write!(f, " (φ_0 = identity)")
                } else {
                    write!(f, " (φ_0 = {product} is not transitive)")
                }
            }
            Some(w) => write!(f, " ({w})"),
            None => Ok(()),
        }
    }
}

impl fmt::Display for LevelStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            Status::Holds => "holds",
            Status::Fails => "fails",
        };
        write!(f, "level {}: {status}", self.k)?;
        self.write_witness(f)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            VerdictKind::MeasurePreserving => "measure-preserving",
            VerdictKind::Ergodic => "ergodic",
        };
        match self.first_failure() {
            None => write!(
                f,
                "{what} through depth {} (necessary conditions verified; full {} requires all k)",
                self.certified_depth,
                match self.kind {
                    VerdictKind::MeasurePreserving => "measure preservation",
                    VerdictKind::Ergodic => "ergodicity",
                }
            ),
            Some(l) => {
                write!(f, "not {what}: fails at level {}", l.k)?;
                l.write_witness(f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failure_propagates_upwards() {
        let v = Verdict::from_first_failure(
            VerdictKind::Ergodic,
            3,
            Some((1, Witness::SumVanishes { lhs: 0 })),
        );
        assert_eq!(v.statuses(), vec![true, false, false, false]);
        assert_eq!(v.levels[3].witness, Some(Witness::LowerLevel { level: 1 }));
        assert!(!v.holds());
    }

    #[test]
    fn json_shape() {
        let v = Verdict::from_first_failure(VerdictKind::Ergodic, 1, None);
        let json: serde_json::Value = serde_json::from_str(&v.to_json()).unwrap();
        assert_eq!(json["kind"], "ergodic");
        assert_eq!(json["certified_depth"], 1);
        assert_eq!(json["levels"][1]["status"], "holds");
        assert!(json["levels"][0]["witness"].is_null());
        let back: Verdict = serde_json::from_value(json).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn display_wording() {
        let v = Verdict::from_first_failure(VerdictKind::Ergodic, 4, None);
        assert_eq!(
            v.to_string(),
            "ergodic through depth 4 (necessary conditions verified; full ergodicity requires all k)"
        );
    }

    #[test]
    fn level_zero_names_phi0() {
        let id = crate::perm::Perm::identity(3);
        let w = Witness::NotTransitive {
            anchor: 0,
            product: id.to_string(),
            cycle_type: id.cycle_type().lengths().to_vec(),
        };
        let v = Verdict::from_first_failure(VerdictKind::Ergodic, 2, Some((0, w.clone())));
        assert_eq!(v.to_string(), "not ergodic: fails at level 0 (φ_0 = identity)");
        assert_eq!(v.levels[0].to_string(), "level 0: fails (φ_0 = identity)");
        assert_eq!(v.levels[1].to_string(), "level 1: fails (fails already at level 0)");
        let later = Verdict::from_first_failure(VerdictKind::Ergodic, 2, Some((1, w)));
        assert!(later.to_string().ends_with("(orbit product at anchor 0 is the identity)"));
    }
}
