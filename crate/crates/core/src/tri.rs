//! Three-valued verdicts for semidecidable cone queries.
//!
//! Cone membership over infinite carriers is in general only boundedly
//! searchable, so every query answers `Yes`, `No`, or `Unknown` together with
//! the budget that was exhausted. Connectives follow the strong Kleene tables;
//! when two unknowns meet, the larger budget is kept.

use std::fmt;
use std::ops::Not;

use crate::element::Element;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tri {
    Yes,
    No,
    Unknown { bound: u64 },
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }

    pub fn unknown(bound: u64) -> Tri {
        Tri::Unknown { bound }
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    pub fn is_no(self) -> bool {
        self == Tri::No
    }

    pub fn is_unknown(self) -> bool {
        matches!(self, Tri::Unknown { .. })
    }

    pub fn is_decided(self) -> bool {
        !self.is_unknown()
    }

    pub fn bound(self) -> Option<u64> {
        match self {
            Tri::Unknown { bound } => Some(bound),
            _ => None,
        }
    }

    /// Position in the Kleene truth order `No < Unknown < Yes`.
    pub fn rank(self) -> u8 {
        match self {
            Tri::No => 0,
            Tri::Unknown { .. } => 1,
            Tri::Yes => 2,
        }
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            (a, b) => Tri::unknown(a.bound().unwrap_or(0).max(b.bound().unwrap_or(0))),
        }
    }

    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::Yes, _) | (_, Tri::Yes) => Tri::Yes,
            (Tri::No, Tri::No) => Tri::No,
            (a, b) => Tri::unknown(a.bound().unwrap_or(0).max(b.bound().unwrap_or(0))),
        }
    }

    pub fn implies(self, other: Tri) -> Tri {
        (!self).or(other)
    }

    /// Kleene meet (minimum in the truth order).
    pub fn min(self, other: Tri) -> Tri {
        self.and(other)
    }

    pub fn all<I: IntoIterator<Item = Tri>>(items: I) -> Tri {
        items.into_iter().fold(Tri::Yes, Tri::and)
    }

    pub fn any<I: IntoIterator<Item = Tri>>(items: I) -> Tri {
        items.into_iter().fold(Tri::No, Tri::or)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown { .. } => "unknown",
        }
    }
}

impl Not for Tri {
    type Output = Tri;

    fn not(self) -> Tri {
        match self {
            Tri::Yes => Tri::No,
            Tri::No => Tri::Yes,
            u => u,
        }
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Tri {
        Tri::from_bool(b)
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tri::Unknown { bound } => write!(f, "unknown (bound {bound})"),
            t => f.write_str(t.as_str()),
        }
    }
}

/// A verdict together with the evidence that produced it.
///
/// For `No` the witness is a counterexample; for `Yes` it may carry a
/// certificate (for instance a coefficient vector); `note` says which
/// condition the verdict refers to when several were checked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub value: Tri,
    pub witness: Vec<Element>,
    pub note: Option<String>,
}

impl Verdict {
    pub fn new(value: Tri) -> Self {
        Verdict {
            value,
            witness: Vec::new(),
            note: None,
        }
    }

    pub fn yes() -> Self {
        Verdict::new(Tri::Yes)
    }

    pub fn no() -> Self {
        Verdict::new(Tri::No)
    }

    pub fn unknown(bound: u64) -> Self {
        Verdict::new(Tri::unknown(bound))
    }

    pub fn with_witness(mut self, witness: Vec<Element>) -> Self {
        self.witness = witness;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_yes(&self) -> bool {
        self.value.is_yes()
    }

    pub fn is_no(&self) -> bool {
        self.value.is_no()
    }

    /// Kleene conjunction keeping the evidence of the deciding side.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self.value, other.value) {
            (Tri::No, _) => self,
            (_, Tri::No) => other,
            (Tri::Yes, _) => other,
            (_, Tri::Yes) => self,
            (a, b) => Verdict {
                value: a.and(b),
                ..self
            },
        }
    }

    /// Folds a sequence of checks, stopping at the first `No`.
    pub fn all<I: IntoIterator<Item = Verdict>>(items: I) -> Verdict {
        let mut acc = Verdict::yes();
        for v in items {
            acc = acc.and(v);
            if acc.is_no() {
                break;
            }
        }
        acc
    }

    pub fn witness_string(&self) -> Option<String> {
        if self.witness.is_empty() {
            None
        } else {
            Some(
                self.witness
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(", "),
            )
        }
    }
}

impl From<Tri> for Verdict {
    fn from(t: Tri) -> Self {
        Verdict::new(t)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)?;
        if let Some(w) = self.witness_string() {
            write!(f, " [witness {w}]")?;
        }
        if let Some(n) = &self.note {
            write!(f, " ({n})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ALL: [Tri; 4] = [Tri::Yes, Tri::No, Tri::Unknown { bound: 3 }, Tri::Unknown { bound: 7 }];

    #[test]
    fn kleene_tables() {
        assert_eq!(Tri::Yes.and(Tri::unknown(4)), Tri::unknown(4));
        assert_eq!(Tri::No.and(Tri::unknown(4)), Tri::No);
        assert_eq!(Tri::Yes.or(Tri::unknown(4)), Tri::Yes);
        assert_eq!(Tri::No.or(Tri::unknown(4)), Tri::unknown(4));
        assert_eq!(Tri::unknown(2).and(Tri::unknown(9)), Tri::unknown(9));
        assert_eq!(!Tri::unknown(5), Tri::unknown(5));
    }

    #[test]
    fn unknown_never_equals_decided() {
        for t in ALL {
            if t.is_unknown() {
                assert_ne!(t, Tri::Yes);
                assert_ne!(t, Tri::No);
            }
        }
    }

    #[test]
    fn de_morgan_and_commutativity() {
        for a in ALL {
            for b in ALL {
                assert_eq!(a.and(b).rank(), b.and(a).rank());
                assert_eq!((!(a.and(b))).rank(), ((!a).or(!b)).rank());
                assert_eq!(a.and(b).rank(), a.rank().min(b.rank()));
                assert_eq!(a.or(b).rank(), a.rank().max(b.rank()));
            }
        }
    }

    #[test]
    fn verdict_keeps_first_counterexample() {
        let v = Verdict::all(vec![
            Verdict::yes(),
            Verdict::no().with_witness(vec![Element::int(1)]),
            Verdict::no().with_witness(vec![Element::int(2)]),
        ]);
        assert!(v.is_no());
        assert_eq!(v.witness, vec![Element::int(1)]);
    }
}
