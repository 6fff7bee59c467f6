//! Structural element representation shared by every carrier backend.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

/// An element of some carrier.
///
/// Equality is structural: finite-group elements are dense indices,
/// f.g. abelian elements are coordinate vectors with torsion coordinates
/// reduced, rationals are kept in lowest terms with positive denominator, and
/// semidirect-product elements are pairs `(x, b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Index(usize),
    Vector(Vec<BigInt>),
    Rational(BigRational),
    Pair(Box<Element>, Box<Element>),
}

impl Element {
    /// An element of `Z` (rank-one free abelian group).
    pub fn int(n: i64) -> Element {
        Element::Vector(vec![BigInt::from(n)])
    }

    pub fn vector(coords: &[i64]) -> Element {
        Element::Vector(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn rational(numer: i64, denom: i64) -> Element {
        Element::Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn pair(x: Element, b: Element) -> Element {
        Element::Pair(Box::new(x), Box::new(b))
    }

    pub fn as_index(&self) -> Option<usize> {
        match self {
            Element::Index(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[BigInt]> {
        match self {
            Element::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Element::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Element, &Element)> {
        match self {
            Element::Pair(x, b) => Some((x, b)),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Index(i) => write!(f, "#{i}"),
            Element::Vector(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Element::Vector(v) => {
                f.write_str("(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
            Element::Rational(q) => write!(f, "{q}"),
            Element::Pair(x, b) => write!(f, "<{x}; {b}>"),
        }
    }
}
