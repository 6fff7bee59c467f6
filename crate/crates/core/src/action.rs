//! Automorphisms and group actions `B -> Aut(X)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::abelian::{FgAbelianGroup, IntMatrix};
use crate::carrier::Carrier;
use crate::element::Element;
use crate::error::{Error, Result};

/// Exponent limit for scalar automorphisms in analysis queries.
pub const SCALAR_EXPONENT_LIMIT: u64 = 64;

/// An automorphism of some carrier `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automorphism {
    Identity,
    /// Finite `X`: image of each element index.
    Permutation(Arc<Vec<usize>>),
    /// Abelian `X`: `x -> x * forward`, with its inverse.
    Matrix { forward: IntMatrix, inverse: IntMatrix },
    /// `X = Q`: multiplication by a nonzero rational.
    Scalar(BigRational),
}

impl Automorphism {
    /// Validates a permutation of a finite carrier as an automorphism.
    pub fn permutation(x: &Carrier, images: Vec<usize>) -> Result<Self> {
        let Carrier::Finite(t) = x else {
            return Err(Error::validation("a permutation action needs a finite acted group"));
        };
        if images.len() != t.order() {
            return Err(Error::validation_with(
                "permutation has wrong length",
                format!("{} entries for a group of order {}", images.len(), t.order()),
            ));
        }
        let mut seen = vec![false; t.order()];
        for &i in &images {
            if i >= t.order() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::validation_with("images do not form a permutation", format!("entry {i}")));
            }
        }
        if let Err((a, b)) = t.check_homomorphism(t, &images) {
            return Err(Error::validation_with(
                "permutation is not a homomorphism",
                format!("{} + {}", t.label(a), t.label(b)),
            ));
        }
        Ok(Automorphism::Permutation(Arc::new(images)))
    }

    /// Validates an integer matrix as an automorphism of an abelian carrier.
    pub fn matrix(x: &Carrier, forward: IntMatrix) -> Result<Self> {
        let Carrier::Abelian(g) = x else {
            return Err(Error::validation("a matrix action needs an abelian acted group"));
        };
        g.check_hom_matrix(g, &forward)?;
        let hom = crate::abelian::AbelianHom::new((**g).clone(), (**g).clone(), forward.clone())?;
        let inv = hom.inverse().ok_or_else(|| {
            Error::validation_with("matrix is not invertible on the group", forward.to_string())
        })?;
        let forward = hom.matrix;
        Ok(Automorphism::Matrix {
            forward,
            inverse: inv.matrix,
        })
    }

    pub fn scalar(q: BigRational) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::validation("scalar automorphism must be nonzero"));
        }
        Ok(Automorphism::Scalar(q))
    }

    pub fn apply(&self, x_carrier: &Carrier, x: &Element) -> Element {
        match (self, x) {
            (Automorphism::Identity, _) => x.clone(),
            (Automorphism::Permutation(p), Element::Index(i)) => Element::Index(p[*i]),
            (Automorphism::Matrix { forward, .. }, Element::Vector(v)) => {
                let g = x_carrier.abelian_ref().expect("matrix automorphism on an abelian carrier");
                Element::Vector(g.normalize(&forward.apply(v)))
            }
            (Automorphism::Scalar(q), Element::Rational(r)) => Element::Rational(q * r),
            _ => panic!("automorphism applied to an element of the wrong kind"),
        }
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Automorphism, x_carrier: &Carrier) -> Automorphism {
        match (self, other) {
            (Automorphism::Identity, a) | (a, Automorphism::Identity) => a.clone(),
            (Automorphism::Permutation(p), Automorphism::Permutation(q)) => {
                Automorphism::Permutation(Arc::new(q.iter().map(|&i| p[i]).collect()))
            }
            (
                Automorphism::Matrix { forward: f, inverse: fi },
                Automorphism::Matrix { forward: g, inverse: gi },
            ) => {
                let x = x_carrier.abelian_ref().expect("matrix automorphism on an abelian carrier");
                Automorphism::Matrix {
                    forward: normalize_rows(x, &g.mul(f)),
                    inverse: normalize_rows(x, &fi.mul(gi)),
                }
            }
            (Automorphism::Scalar(a), Automorphism::Scalar(b)) => Automorphism::Scalar(a * b),
            _ => panic!("composing automorphisms of different kinds"),
        }
    }

    pub fn inverse(&self) -> Automorphism {
        match self {
            Automorphism::Identity => Automorphism::Identity,
            Automorphism::Permutation(p) => {
                let mut inv = vec![0; p.len()];
                for (i, &j) in p.iter().enumerate() {
                    inv[j] = i;
                }
                Automorphism::Permutation(Arc::new(inv))
            }
            Automorphism::Matrix { forward, inverse } => Automorphism::Matrix {
                forward: inverse.clone(),
                inverse: forward.clone(),
            },
            Automorphism::Scalar(q) => Automorphism::Scalar(q.recip()),
        }
    }

    pub fn pow(&self, n: &BigInt, x_carrier: &Carrier) -> Automorphism {
        if let Automorphism::Scalar(q) = self {
            let e = n.abs().to_u64().expect("scalar exponent fits in u64");
            let base = if n.is_negative() { q.recip() } else { q.clone() };
            return Automorphism::Scalar(num_traits::pow::Pow::pow(&base, e));
        }
        let mut base = if n.is_negative() { self.inverse() } else { self.clone() };
        let mut e = n.abs();
        let mut acc = Automorphism::Identity;
        let two = BigInt::from(2);
        while !e.is_zero() {
            if e.is_odd() {
                acc = acc.compose(&base, x_carrier);
            }
            e /= &two;
            if !e.is_zero() {
                base = base.compose(&base, x_carrier);
            }
        }
        acc
    }

    /// Semantic identity test.
    pub fn is_identity(&self, x_carrier: &Carrier) -> bool {
        match self {
            Automorphism::Identity => true,
            Automorphism::Permutation(p) => p.iter().enumerate().all(|(i, &j)| i == j),
            Automorphism::Matrix { forward, .. } => {
                let g = x_carrier.abelian_ref().expect("matrix automorphism on an abelian carrier");
                (0..g.dim()).all(|i| g.normalize(forward.row(i)) == g.unit(i))
            }
            Automorphism::Scalar(q) => q.is_one(),
        }
    }

    /// Semantic equality on the acted carrier.
    pub fn same_as(&self, other: &Automorphism, x_carrier: &Carrier) -> bool {
        self.compose(&other.inverse(), x_carrier).is_identity(x_carrier)
    }

    pub fn describe(&self) -> String {
        match self {
            Automorphism::Identity => "id".to_string(),
            Automorphism::Permutation(p) => format!("{:?}", p.as_slice()),
            Automorphism::Matrix { forward, .. } => forward.to_string(),
            Automorphism::Scalar(q) => format!("x -> {q}x"),
        }
    }
}

fn normalize_rows(g: &FgAbelianGroup, m: &IntMatrix) -> IntMatrix {
    IntMatrix::from_rows((0..m.rows()).map(|i| g.normalize(m.row(i))).collect(), m.cols())
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum ActionKind {
    Trivial,
    /// Finite actor: one automorphism per element index.
    PerElement(Vec<Automorphism>),
    /// Abelian actor: one automorphism per canonical generator.
    PerGenerator(Vec<Automorphism>),
}

/// A homomorphism `φ: B -> Aut(X)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAction {
    actor: Carrier,
    acted: Carrier,
    kind: ActionKind,
}

impl GroupAction {
    pub fn trivial(actor: Carrier, acted: Carrier) -> Self {
        GroupAction {
            actor,
            acted,
            kind: ActionKind::Trivial,
        }
    }

    /// Action of an f.g. abelian group given by the images of its canonical
    /// generators. Images must commute and respect the torsion relations.
    pub fn by_generators(actor: Carrier, acted: Carrier, images: Vec<Automorphism>) -> Result<Self> {
        let Carrier::Abelian(b) = &actor else {
            return Err(Error::validation("generator images need an abelian acting group"));
        };
        if images.len() != b.dim() {
            return Err(Error::validation_with(
                "wrong number of generator images",
                format!("{} given for {} generators", images.len(), b.dim()),
            ));
        }
        for (i, a) in images.iter().enumerate() {
            for (j, c) in images.iter().enumerate().skip(i + 1) {
                if !a.compose(c, &acted).same_as(&c.compose(a, &acted), &acted) {
                    return Err(Error::validation_with(
                        "generator images do not commute",
                        format!("generators {} and {}", i + 1, j + 1),
                    ));
                }
            }
        }
        for (k, d) in b.torsion().iter().enumerate() {
            let a = &images[b.rank() + k];
            if !a.pow(d, &acted).is_identity(&acted) {
                return Err(Error::validation_with(
                    "generator image does not respect its torsion relation",
                    format!("generator {} has order dividing {d} but its image does not", b.rank() + k + 1),
                ));
            }
        }
        Ok(GroupAction {
            actor,
            acted,
            kind: ActionKind::PerGenerator(images),
        })
    }

    /// Action of a finite group given by images of some generating elements;
    /// the images are extended along words and checked for consistency.
    pub fn by_finite_generators(actor: Carrier, acted: Carrier, gens: &[usize], images: Vec<Automorphism>) -> Result<Self> {
        let Carrier::Finite(t) = &actor else {
            return Err(Error::validation("element generators need a finite acting group"));
        };
        let mut per: Vec<Option<Automorphism>> = vec![None; t.order()];
        per[0] = Some(Automorphism::Identity);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (&g, img) in gens.iter().zip(&images) {
                let b = t.op(a, g);
                let phi = per[a].as_ref().expect("visited").compose(img, &acted);
                match &per[b] {
                    None => {
                        per[b] = Some(phi);
                        queue.push_back(b);
                    }
                    Some(existing) => {
                        if !existing.same_as(&phi, &acted) {
                            return Err(Error::validation_with(
                                "generator images do not define a homomorphism",
                                format!("two words for {} act differently", t.label(b)),
                            ));
                        }
                    }
                }
            }
        }
        let per: Option<Vec<Automorphism>> = per.into_iter().collect();
        let per = per.ok_or_else(|| Error::validation("listed elements do not generate the acting group"))?;
        Ok(GroupAction {
            actor,
            acted,
            kind: ActionKind::PerElement(per),
        })
    }

    pub fn actor(&self) -> &Carrier {
        &self.actor
    }

    pub fn acted(&self) -> &Carrier {
        &self.acted
    }

    pub fn is_trivial(&self) -> bool {
        match &self.kind {
            ActionKind::Trivial => true,
            ActionKind::PerElement(v) | ActionKind::PerGenerator(v) => v.iter().all(|a| a.is_identity(&self.acted)),
        }
    }

    /// `φ_b` computed exactly.
    pub fn phi(&self, b: &Element) -> Automorphism {
        match &self.kind {
            ActionKind::Trivial => Automorphism::Identity,
            ActionKind::PerElement(per) => per[b.as_index().expect("finite actor element")].clone(),
            ActionKind::PerGenerator(gens) => {
                let coords = b.as_vector().expect("abelian actor element");
                let mut acc = Automorphism::Identity;
                for (a, c) in gens.iter().zip(coords) {
                    if !c.is_zero() {
                        acc = acc.compose(&a.pow(c, &self.acted), &self.acted);
                    }
                }
                acc
            }
        }
    }

    /// `φ_b` when its representation stays within the scalar exponent limit.
    pub fn phi_bounded(&self, b: &Element) -> Option<Automorphism> {
        if let ActionKind::PerGenerator(gens) = &self.kind {
            let coords = b.as_vector()?;
            for (a, c) in gens.iter().zip(coords) {
                if matches!(a, Automorphism::Scalar(_)) && c.abs() > BigInt::from(SCALAR_EXPONENT_LIMIT) {
                    return None;
                }
            }
        }
        Some(self.phi(b))
    }

    pub fn act(&self, b: &Element, x: &Element) -> Element {
        self.phi(b).apply(&self.acted, x)
    }

    /// Generator images, for reporting.
    pub fn describe(&self) -> String {
        match &self.kind {
            ActionKind::Trivial => "trivial".to_string(),
            ActionKind::PerElement(per) => per.iter().map(Automorphism::describe).collect::<Vec<_>>().join("; "),
            ActionKind::PerGenerator(g) => g.iter().map(Automorphism::describe).collect::<Vec<_>>().join("; "),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FgAbelianGroup;
    use crate::finite::FiniteGroupTable;

    fn z() -> Carrier {
        Carrier::Abelian(Arc::new(FgAbelianGroup::free(1)))
    }

    #[test]
    fn sign_action_of_z_on_z() {
        let neg = Automorphism::matrix(&z(), IntMatrix::from_i64(&[&[-1]])).unwrap();
        let act = GroupAction::by_generators(z(), z(), vec![neg]).unwrap();
        assert_eq!(act.act(&Element::int(3), &Element::int(5)), Element::int(-5));
        assert_eq!(act.act(&Element::int(-2), &Element::int(5)), Element::int(5));
    }

    #[test]
    fn scalar_powers() {
        let q = Automorphism::scalar(BigRational::new((-2).into(), 1.into())).unwrap();
        let act = GroupAction::by_generators(z(), Carrier::Rational, vec![q]).unwrap();
        assert_eq!(act.act(&Element::int(3), &Element::rational(1, 1)), Element::rational(-8, 1));
        assert_eq!(act.act(&Element::int(-2), &Element::rational(1, 1)), Element::rational(1, 4));
        assert!(act.phi_bounded(&Element::int(65)).is_none());
    }

    #[test]
    fn torsion_relation_is_enforced() {
        let z2 = Carrier::Abelian(Arc::new(FgAbelianGroup::cyclic(2)));
        let z3 = Carrier::Finite(Arc::new(FiniteGroupTable::cyclic(3)));
        let inv = Automorphism::permutation(&z3, vec![0, 2, 1]).unwrap();
        assert!(GroupAction::by_generators(z2.clone(), z3.clone(), vec![inv]).is_ok());
        let z4 = Carrier::Abelian(Arc::new(FgAbelianGroup::cyclic(4)));
        let z5 = Carrier::Finite(Arc::new(FiniteGroupTable::cyclic(5)));
        let double = Automorphism::permutation(&z5, vec![0, 2, 4, 1, 3]).unwrap();
        assert!(GroupAction::by_generators(z2, z5.clone(), vec![double.clone()]).is_err());
        assert!(GroupAction::by_generators(z4, z5, vec![double]).is_ok());
    }

    #[test]
    fn non_automorphism_rejected() {
        let z4 = Carrier::Finite(Arc::new(FiniteGroupTable::cyclic(4)));
        assert!(Automorphism::permutation(&z4, vec![0, 2, 1, 3]).is_err());
        assert!(Automorphism::matrix(&z(), IntMatrix::from_i64(&[&[2]])).is_err());
    }
}
