//! Positive cones: submonoids of a carrier, queried by membership.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::abelian::{AffineMonoid, DEFAULT_BOUND};
use crate::carrier::Carrier;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::morphism::HomMap;
use crate::tri::Tri;

/// Explicit cone on a finite carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCone {
    elements: Vec<usize>,
    mask: Vec<bool>,
}

impl SubsetCone {
    pub fn new(order: usize, elements: &[usize]) -> Self {
        let mut mask = vec![false; order];
        for &e in elements {
            mask[e] = true;
        }
        let elements = (0..order).filter(|&i| mask[i]).collect();
        SubsetCone { elements, mask }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask.get(i).copied().unwrap_or(false)
    }
}

/// `{x | f(x) ∈ P}` for a homomorphism `f` into a carrier with cone `P`.
#[derive(Clone, Debug)]
pub struct PreimageCone {
    pub map: HomMap,
    pub source: Carrier,
    pub target: Carrier,
    pub cone: Cone,
}

#[derive(Clone, Debug)]
pub enum Cone {
    /// `{0}`: the discrete preorder.
    Trivial,
    /// The whole carrier.
    Total,
    /// Abelian carriers: free coordinates nonnegative, torsion coordinates zero.
    /// On `Q`: the nonnegative rationals.
    Orthant,
    Subset(Arc<SubsetCone>),
    /// Submonoid of an abelian carrier generated by finitely many elements.
    Generated(Arc<AffineMonoid>),
    Preimage(Arc<PreimageCone>),
    /// Intersection.
    Meet(Vec<Cone>),
    /// On `X ⋊ B`: `x ∈ P_X` and `b ∈ P_B`.
    Product(Arc<(Cone, Cone)>),
    /// On `X ⋊ B`: `b > 0`, or `b ∼ 0` and `x ∈ P_X`.
    Lex(Arc<(Cone, Cone)>),
    /// On `Z ⋊ Z` (trivial action): `b >= 0` and `den·x + num·b >= 0`.
    HalfPlane { num: BigInt, den: BigInt },
}

impl Cone {
    pub fn subset(carrier: &Carrier, elements: &[usize]) -> Result<Cone> {
        let t = carrier
            .as_finite()
            .ok_or_else(|| Error::validation("explicit-subset cones need a finite carrier"))?;
        if let Some(&e) = elements.iter().find(|&&e| e >= t.order()) {
            return Err(Error::domain(format!("index {e} is outside a group of order {}", t.order())));
        }
        Ok(Cone::Subset(Arc::new(SubsetCone::new(t.order(), elements))))
    }

    pub fn generated(carrier: &Carrier, generators: &[Element], bound: u64) -> Result<Cone> {
        let g = carrier
            .abelian_group()
            .ok_or_else(|| Error::validation("generated cones need an abelian carrier"))?;
        let mut gens = Vec::with_capacity(generators.len());
        for e in generators {
            let v = e
                .as_vector()
                .filter(|v| v.len() == g.dim())
                .ok_or_else(|| Error::domain(format!("{e} is not an element of {g}")))?;
            gens.push(v.to_vec());
        }
        Ok(Cone::Generated(Arc::new(AffineMonoid::new((**g).clone(), gens, bound)?)))
    }

    pub fn product(x: Cone, b: Cone) -> Cone {
        Cone::Product(Arc::new((x, b)))
    }

    pub fn lex(x: Cone, b: Cone) -> Cone {
        Cone::Lex(Arc::new((x, b)))
    }

    pub fn preimage(map: HomMap, source: Carrier, target: Carrier, cone: Cone) -> Cone {
        Cone::Preimage(Arc::new(PreimageCone {
            map,
            source,
            target,
            cone,
        }))
    }

    pub fn contains(&self, carrier: &Carrier, x: &Element) -> Tri {
        self.member(carrier, x, DEFAULT_BOUND)
    }

    /// Membership of `x`, searching at most `bound` deep where a search is needed.
    pub fn member(&self, carrier: &Carrier, x: &Element, bound: u64) -> Tri {
        match self {
            Cone::Trivial => Tri::from_bool(carrier.is_zero(x)),
            Cone::Total => Tri::Yes,
            Cone::Orthant => match (carrier, x) {
                (Carrier::Abelian(g), Element::Vector(v)) => Tri::from_bool(
                    v[..g.rank()].iter().all(|c| !c.is_negative()) && v[g.rank()..].iter().all(Zero::is_zero),
                ),
                (Carrier::Rational, Element::Rational(q)) => Tri::from_bool(!q.is_negative()),
                _ => Tri::from_bool(carrier.is_zero(x)),
            },
            Cone::Subset(s) => Tri::from_bool(x.as_index().is_some_and(|i| s.contains(i))),
            Cone::Generated(m) => match x {
                Element::Vector(v) => m.member(v, bound).value,
                _ => Tri::No,
            },
            Cone::Preimage(p) => {
                let y = p.map.apply(&p.source, &p.target, x);
                p.cone.member(&p.target, &y, bound)
            }
            Cone::Meet(cs) => {
                let mut acc = Tri::Yes;
                for c in cs {
                    acc = acc.and(c.member(carrier, x, bound));
                    if acc.is_no() {
                        break;
                    }
                }
                acc
            }
            Cone::Product(pair) => {
                let (s, (xx, b)) = split(carrier, x);
                let in_b = pair.1.member(&s.quotient, b, bound);
                if in_b.is_no() {
                    return Tri::No;
                }
                in_b.and(pair.0.member(&s.kernel, xx, bound))
            }
            Cone::Lex(pair) => {
                let (s, (xx, b)) = split(carrier, x);
                let b_pos = pair.1.member(&s.quotient, b, bound);
                let b_neg = pair.1.member(&s.quotient, &s.quotient.neg(b), bound);
                let strictly = b_pos.and(!b_neg);
                if strictly.is_yes() {
                    return Tri::Yes;
                }
                let equiv = b_pos.and(b_neg);
                if equiv.is_no() {
                    return strictly;
                }
                strictly.or(equiv.and(pair.0.member(&s.kernel, xx, bound)))
            }
            Cone::HalfPlane { num, den } => {
                let (_, (xx, b)) = split(carrier, x);
                let (Some(xv), Some(bv)) = (xx.as_vector(), b.as_vector()) else {
                    return Tri::No;
                };
                let (xv, bv) = (&xv[0], &bv[0]);
                Tri::from_bool(!bv.is_negative() && !(den * xv + num * bv).is_negative())
            }
        }
    }

    /// Finitely many monoid generators, when known.
    pub fn generators(&self, carrier: &Carrier) -> Option<Vec<Element>> {
        match self {
            Cone::Trivial => Some(Vec::new()),
            Cone::Total => match carrier {
                Carrier::Abelian(g) => {
                    let mut out = Vec::new();
                    for i in 0..g.dim() {
                        out.push(Element::Vector(g.unit(i)));
                        if i < g.rank() {
                            out.push(Element::Vector(g.neg(&g.unit(i))));
                        }
                    }
                    Some(out)
                }
                Carrier::Finite(_) => carrier.group_generators(),
                _ => None,
            },
            Cone::Orthant => match carrier {
                Carrier::Abelian(g) => Some((0..g.rank()).map(|i| Element::Vector(g.unit(i))).collect()),
                Carrier::Finite(_) => Some(Vec::new()),
                _ => None,
            },
            Cone::Subset(s) => Some(s.elements().iter().filter(|&&e| e != 0).map(|&e| Element::Index(e)).collect()),
            Cone::Generated(m) => Some(m.generators().iter().cloned().map(Element::Vector).collect()),
            Cone::Product(pair) => {
                let s = carrier.as_semidirect()?;
                let mut out: Vec<Element> = pair
                    .0
                    .generators(&s.kernel)?
                    .into_iter()
                    .map(|x| Element::pair(x, s.quotient.zero()))
                    .collect();
                out.extend(
                    pair.1
                        .generators(&s.quotient)?
                        .into_iter()
                        .map(|b| Element::pair(s.kernel.zero(), b)),
                );
                Some(out)
            }
            Cone::Preimage(_) | Cone::Meet(_) | Cone::Lex(_) | Cone::HalfPlane { .. } => {
                if let Carrier::Finite(t) = carrier {
                    let els: Vec<usize> = (0..t.order())
                        .filter(|&i| self.contains(carrier, &Element::Index(i)).is_yes())
                        .collect();
                    return Some(els.into_iter().filter(|&e| e != 0).map(Element::Index).collect());
                }
                None
            }
        }
    }

    /// Explicit element list on a finite carrier (exact there).
    pub fn elements(&self, carrier: &Carrier, limit: usize) -> Option<Vec<Element>> {
        let all = carrier.elements(limit)?;
        let mut out = Vec::new();
        for e in all {
            match self.contains(carrier, &e) {
                Tri::Yes => out.push(e),
                Tri::No => {}
                Tri::Unknown { .. } => return None,
            }
        }
        Some(out)
    }

    /// `P ∩ (-P)`, when it can be computed exactly.
    pub fn symmetric_part(&self, carrier: &Carrier) -> Option<Cone> {
        match self {
            Cone::Trivial | Cone::Orthant => Some(Cone::Trivial),
            Cone::Total => Some(Cone::Total),
            Cone::Subset(_) => Some(self.clone()),
            Cone::Generated(m) => {
                let g = m.ambient();
                let mut gens = m.invertible_generators()?;
                let negs: Vec<_> = gens.iter().map(|v| g.neg(v)).collect();
                gens.extend(negs);
                let h = AffineMonoid::new(g.clone(), gens, m.default_bound()).expect("generators lie in the ambient");
                Some(Cone::Generated(Arc::new(h)))
            }
            Cone::Preimage(p) => Some(Cone::preimage(
                p.map.clone(),
                p.source.clone(),
                p.target.clone(),
                p.cone.symmetric_part(&p.target)?,
            )),
            Cone::Meet(cs) => cs.iter().map(|c| c.symmetric_part(carrier)).collect::<Option<Vec<_>>>().map(Cone::Meet),
            Cone::Product(pair) => {
                let s = carrier.as_semidirect()?;
                if !s.action.is_trivial() {
                    return None;
                }
                Some(Cone::product(pair.0.symmetric_part(&s.kernel)?, pair.1.symmetric_part(&s.quotient)?))
            }
            Cone::Lex(_) | Cone::HalfPlane { .. } => {
                if carrier.is_finite() {
                    let els = self.elements(carrier, usize::MAX)?;
                    let idx: Vec<usize> = els.iter().filter_map(Element::as_index).collect();
                    if idx.len() == els.len() {
                        return Cone::subset(carrier, &idx).ok();
                    }
                }
                None
            }
        }
    }

    pub fn is_builtin(&self) -> bool {
        matches!(self, Cone::Trivial | Cone::Total | Cone::Orthant)
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Cone::Trivial => "trivial",
            Cone::Total => "total",
            Cone::Orthant => "orthant",
            Cone::Subset(_) => "subset",
            Cone::Generated(_) => "generated",
            Cone::Preimage(_) => "preimage",
            Cone::Meet(_) => "meet",
            Cone::Product(_) => "product",
            Cone::Lex(_) => "lex",
            Cone::HalfPlane { .. } => "half-plane",
        }
    }
}

fn split<'a>(carrier: &'a Carrier, x: &'a Element) -> (&'a crate::carrier::SemidirectCarrier, (&'a Element, &'a Element)) {
    let s = carrier.as_semidirect().expect("pair cones live on semidirect carriers");
    let (a, b) = x.as_pair().expect("semidirect elements are pairs");
    (s, (a, b))
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cone::Subset(s) => {
                f.write_str("{")?;
                for (i, e) in s.elements().iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "#{e}")?;
                }
                f.write_str("}")
            }
            Cone::Generated(m) => {
                f.write_str("<")?;
                for (i, g) in m.generators().iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", Element::Vector(g.clone()))?;
                }
                f.write_str(">")
            }
            Cone::Meet(cs) => {
                let parts: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                write!(f, "meet[{}]", parts.join(", "))
            }
            Cone::Product(p) => write!(f, "{} x {}", p.0, p.1),
            Cone::Lex(p) => write!(f, "lex({}, {})", p.0, p.1),
            Cone::HalfPlane { num, den } => write!(f, "half-plane(alpha = {num}/{den})"),
            Cone::Preimage(p) => write!(f, "preimage of {}", p.cone),
            other => f.write_str(other.kind()),
        }
    }
}
