//! Group carriers: the underlying groups of right-preordered groups.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::abelian::FgAbelianGroup;
use crate::action::GroupAction;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::finite::FiniteGroupTable;

/// Upper limit on the number of elements produced by [`Carrier::sample`].
pub const DEFAULT_SAMPLE_LIMIT: usize = 4096;

#[derive(Clone, Debug)]
pub enum Carrier {
    Finite(Arc<FiniteGroupTable>),
    /// Also realizes the integers (`Z` is the free abelian group of rank one).
    Abelian(Arc<FgAbelianGroup>),
    /// The additive group of rationals.
    Rational,
    Semidirect(Arc<SemidirectCarrier>),
}

/// `X ⋊_φ B` with operation `(x, b) + (y, b') = (x + φ_b(y), b + b')`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemidirectCarrier {
    pub kernel: Carrier,
    pub quotient: Carrier,
    pub action: GroupAction,
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Carrier) -> bool {
        match (self, other) {
            (Carrier::Finite(a), Carrier::Finite(b)) => Arc::ptr_eq(a, b) || a == b,
            (Carrier::Abelian(a), Carrier::Abelian(b)) => a == b,
            (Carrier::Rational, Carrier::Rational) => true,
            (Carrier::Semidirect(a), Carrier::Semidirect(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Eq for Carrier {}

impl Carrier {
    pub fn finite(t: FiniteGroupTable) -> Self {
        Carrier::Finite(Arc::new(t))
    }

    pub fn abelian(g: FgAbelianGroup) -> Self {
        Carrier::Abelian(Arc::new(g))
    }

    pub fn integers() -> Self {
        Self::abelian(FgAbelianGroup::free(1))
    }

    pub fn semidirect(kernel: Carrier, quotient: Carrier, action: GroupAction) -> Result<Self> {
        if action.actor() != &quotient || action.acted() != &kernel {
            return Err(Error::validation("action does not match the factors of the semidirect product"));
        }
        Ok(Carrier::Semidirect(Arc::new(SemidirectCarrier {
            kernel,
            quotient,
            action,
        })))
    }

    /// Direct product as a semidirect product with trivial action.
    pub fn direct(kernel: Carrier, quotient: Carrier) -> Self {
        let action = GroupAction::trivial(quotient.clone(), kernel.clone());
        Carrier::Semidirect(Arc::new(SemidirectCarrier {
            kernel,
            quotient,
            action,
        }))
    }

    pub fn as_finite(&self) -> Option<&FiniteGroupTable> {
        match self {
            Carrier::Finite(t) => Some(t),
            _ => None,
        }
    }

    pub fn abelian_group(&self) -> Option<&Arc<FgAbelianGroup>> {
        match self {
            Carrier::Abelian(g) => Some(g),
            _ => None,
        }
    }

    /// Shorthand used by automorphisms, which already know the carrier kind.
    pub(crate) fn abelian_ref(&self) -> Option<&FgAbelianGroup> {
        self.abelian_group().map(|g| g.as_ref())
    }

    pub fn as_semidirect(&self) -> Option<&SemidirectCarrier> {
        match self {
            Carrier::Semidirect(s) => Some(s),
            _ => None,
        }
    }

    pub fn zero(&self) -> Element {
        match self {
            Carrier::Finite(_) => Element::Index(0),
            Carrier::Abelian(g) => Element::Vector(g.zero()),
            Carrier::Rational => Element::Rational(BigRational::zero()),
            Carrier::Semidirect(s) => Element::pair(s.kernel.zero(), s.quotient.zero()),
        }
    }

    pub fn op(&self, a: &Element, b: &Element) -> Element {
        match (self, a, b) {
            (Carrier::Finite(t), Element::Index(x), Element::Index(y)) => Element::Index(t.op(*x, *y)),
            (Carrier::Abelian(g), Element::Vector(x), Element::Vector(y)) => Element::Vector(g.add(x, y)),
            (Carrier::Rational, Element::Rational(x), Element::Rational(y)) => Element::Rational(x + y),
            (Carrier::Semidirect(s), Element::Pair(x, b), Element::Pair(y, c)) => {
                let y = s.action.act(b, y);
                Element::pair(s.kernel.op(x, &y), s.quotient.op(b, c))
            }
            _ => panic!("operation on elements of the wrong kind for {self}"),
        }
    }

    pub fn neg(&self, a: &Element) -> Element {
        match (self, a) {
            (Carrier::Finite(t), Element::Index(x)) => Element::Index(t.inv(*x)),
            (Carrier::Abelian(g), Element::Vector(x)) => Element::Vector(g.neg(x)),
            (Carrier::Rational, Element::Rational(x)) => Element::Rational(-x),
            (Carrier::Semidirect(s), Element::Pair(x, b)) => {
                let nb = s.quotient.neg(b);
                let nx = s.action.act(&nb, &s.kernel.neg(x));
                Element::pair(nx, nb)
            }
            _ => panic!("inverse of an element of the wrong kind for {self}"),
        }
    }

    /// `a - b`, i.e. `a + (-b)`.
    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.op(a, &self.neg(b))
    }

    /// `n · a` (repeated operation, negative `n` uses the inverse).
    pub fn times(&self, n: &BigInt, a: &Element) -> Element {
        match (self, a) {
            (Carrier::Abelian(g), Element::Vector(x)) => return Element::Vector(g.scale(n, x)),
            (Carrier::Rational, Element::Rational(x)) => {
                return Element::Rational(x * BigRational::from_integer(n.clone()))
            }
            _ => {}
        }
        let mut base = if n < &BigInt::zero() { self.neg(a) } else { a.clone() };
        let mut e = if n < &BigInt::zero() { -n } else { n.clone() };
        let mut acc = self.zero();
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                acc = self.op(&acc, &base);
            }
            e /= &two;
            if !e.is_zero() {
                base = self.op(&base, &base);
            }
        }
        acc
    }

    pub fn is_zero(&self, a: &Element) -> bool {
        *a == self.zero()
    }

    /// Checks that `a` is a well-formed, normalized element of this carrier.
    pub fn check(&self, a: &Element) -> Result<()> {
        let ok = match (self, a) {
            (Carrier::Finite(t), Element::Index(i)) => *i < t.order(),
            (Carrier::Abelian(g), Element::Vector(v)) => g.is_normalized(v),
            (Carrier::Rational, Element::Rational(_)) => true,
            (Carrier::Semidirect(s), Element::Pair(x, b)) => {
                s.kernel.check(x)?;
                s.quotient.check(b)?;
                true
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("{a} is not an element of {self}")))
        }
    }

    /// Brings an element into normal form (reduces torsion coordinates).
    pub fn normalize(&self, a: &Element) -> Element {
        match (self, a) {
            (Carrier::Abelian(g), Element::Vector(v)) if v.len() == g.dim() => Element::Vector(g.normalize(v)),
            (Carrier::Semidirect(s), Element::Pair(x, b)) => Element::pair(s.kernel.normalize(x), s.quotient.normalize(b)),
            _ => a.clone(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Carrier::Finite(_) => true,
            Carrier::Abelian(g) => g.is_finite(),
            Carrier::Rational => false,
            Carrier::Semidirect(s) => s.kernel.is_finite() && s.quotient.is_finite(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            Carrier::Finite(t) => t.is_abelian(),
            Carrier::Abelian(_) | Carrier::Rational => true,
            Carrier::Semidirect(s) => s.kernel.is_abelian() && s.quotient.is_abelian() && s.action.is_trivial(),
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.elements(usize::MAX).map(|e| e.len())
    }

    /// All elements when finite with at most `limit` of them, in a fixed order.
    pub fn elements(&self, limit: usize) -> Option<Vec<Element>> {
        match self {
            Carrier::Finite(t) => (t.order() <= limit).then(|| (0..t.order()).map(Element::Index).collect()),
            Carrier::Abelian(g) => g
                .elements(limit)
                .map(|v| v.into_iter().map(Element::Vector).collect()),
            Carrier::Rational => None,
            Carrier::Semidirect(s) => {
                let xs = s.kernel.elements(limit)?;
                let bs = s.quotient.elements(limit)?;
                if xs.len().checked_mul(bs.len())? > limit {
                    return None;
                }
                Some(
                    bs.iter()
                        .flat_map(|b| xs.iter().map(move |x| Element::pair(x.clone(), b.clone())))
                        .collect(),
                )
            }
        }
    }

    /// Elements generating the group (as a group).
    pub fn group_generators(&self) -> Option<Vec<Element>> {
        match self {
            Carrier::Finite(t) => Some(t.generating_set().into_iter().map(Element::Index).collect()),
            Carrier::Abelian(g) => Some((0..g.dim()).map(|i| Element::Vector(g.unit(i))).collect()),
            Carrier::Rational => None,
            Carrier::Semidirect(s) => {
                let mut out: Vec<Element> = s
                    .kernel
                    .group_generators()?
                    .into_iter()
                    .map(|x| Element::pair(x, s.quotient.zero()))
                    .collect();
                out.extend(
                    s.quotient
                        .group_generators()?
                        .into_iter()
                        .map(|b| Element::pair(s.kernel.zero(), b)),
                );
                Some(out)
            }
        }
    }

    /// A deterministic sample: every element of a finite carrier, otherwise
    /// a coordinate box of radius at most `radius`, shrunk so that the sample
    /// has at most `limit` elements.
    pub fn sample(&self, radius: u64, limit: usize) -> Vec<Element> {
        if let Some(all) = self.elements(limit) {
            return all;
        }
        let mut r = radius;
        loop {
            let count = self.box_size(r);
            if count.is_some_and(|c| c <= limit as u128) || r == 0 {
                return self.box_elements(r);
            }
            r -= 1;
        }
    }

    fn box_size(&self, r: u64) -> Option<u128> {
        let side = 2 * r as u128 + 1;
        match self {
            Carrier::Finite(t) => Some(t.order() as u128),
            Carrier::Abelian(g) => {
                let torsion: u128 = g.torsion().iter().map(|d| d.to_string().parse::<u128>().ok()).product::<Option<u128>>()?;
                side.checked_pow(g.rank() as u32)?.checked_mul(torsion)
            }
            Carrier::Rational => Some(side * 3),
            Carrier::Semidirect(s) => s.kernel.box_size(r)?.checked_mul(s.quotient.box_size(r)?),
        }
    }

    fn box_elements(&self, r: u64) -> Vec<Element> {
        match self {
            Carrier::Finite(t) => (0..t.order()).map(Element::Index).collect(),
            Carrier::Abelian(g) => {
                let mut out = Vec::new();
                let mut cur: Vec<BigInt> = (0..g.dim())
                    .map(|i| if i < g.rank() { -BigInt::from(r) } else { BigInt::zero() })
                    .collect();
                if g.dim() == 0 {
                    return vec![Element::Vector(vec![])];
                }
                'outer: loop {
                    out.push(Element::Vector(cur.clone()));
                    for i in 0..g.dim() {
                        cur[i] += 1;
                        let top = if i < g.rank() {
                            BigInt::from(r) + 1
                        } else {
                            g.modulus(i)
                        };
                        if cur[i] < top {
                            continue 'outer;
                        }
                        cur[i] = if i < g.rank() { -BigInt::from(r) } else { BigInt::zero() };
                    }
                    break;
                }
                out
            }
            Carrier::Rational => {
                let r = r as i64;
                let mut out = Vec::new();
                for d in 1..=3i64 {
                    for a in -r..=r {
                        let q = BigRational::new(a.into(), d.into());
                        let e = Element::Rational(q);
                        if !out.contains(&e) {
                            out.push(e);
                        }
                    }
                }
                out.sort();
                out
            }
            Carrier::Semidirect(s) => {
                let xs = s.kernel.box_elements(r);
                let bs = s.quotient.box_elements(r);
                bs.iter()
                    .flat_map(|b| xs.iter().map(move |x| Element::pair(x.clone(), b.clone())))
                    .collect()
            }
        }
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Finite(t) => write!(f, "finite({})", t.order()),
            Carrier::Abelian(g) => write!(f, "{g}"),
            Carrier::Rational => f.write_str("Q"),
            Carrier::Semidirect(s) if s.action.is_trivial() => write!(f, "({}) x ({})", s.kernel, s.quotient),
            Carrier::Semidirect(s) => write!(f, "({}) ⋊ ({})", s.kernel, s.quotient),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::IntMatrix;
    use crate::action::Automorphism;

    #[test]
    fn semidirect_inverse() {
        let z = Carrier::integers();
        let neg = Automorphism::matrix(&z, IntMatrix::from_i64(&[&[-1]])).unwrap();
        let act = GroupAction::by_generators(z.clone(), z.clone(), vec![neg]).unwrap();
        let s = Carrier::semidirect(z.clone(), z, act).unwrap();
        let a = Element::pair(Element::int(3), Element::int(1));
        let b = Element::pair(Element::int(5), Element::int(2));
        assert_eq!(s.op(&a, &b), Element::pair(Element::int(-2), Element::int(3)));
        assert!(s.is_zero(&s.op(&a, &s.neg(&a))));
        assert!(s.is_zero(&s.op(&s.neg(&a), &a)));
        assert_eq!(s.times(&BigInt::from(2), &a), Element::pair(Element::int(0), Element::int(2)));
    }

    #[test]
    fn sample_respects_limit() {
        let z2 = Carrier::abelian(FgAbelianGroup::free(2));
        let s = z2.sample(64, 1000);
        assert!(s.len() <= 1000);
        assert!(s.contains(&Element::vector(&[-15, 15])));
        let q = Carrier::Rational.sample(4, 100);
        assert!(q.contains(&Element::rational(-4, 3)));
        assert_eq!(Carrier::abelian(FgAbelianGroup::trivial()).sample(5, 10), vec![Element::Vector(vec![])]);
    }

    #[test]
    fn element_checks() {
        let z4 = Carrier::abelian(FgAbelianGroup::cyclic(4));
        assert!(z4.check(&Element::int(3)).is_ok());
        assert!(z4.check(&Element::int(4)).is_err());
        assert!(z4.check(&Element::Index(0)).is_err());
    }
}
