//! Group homomorphisms between right-preordered groups and monotonicity.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::abelian::IntMatrix;
use crate::carrier::Carrier;
use crate::cone::Cone;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::group::{RPGroup, SEARCH_LIMIT, SEARCH_RADIUS};
use crate::tri::{Tri, Verdict};

/// Radius of the sample used to check the homomorphism law when it cannot
/// be checked exactly.
const LAW_SAMPLE_RADIUS: u64 = 3;
const LAW_SAMPLE_LIMIT: usize = 200;

/// How a homomorphism acts on elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HomMap {
    Identity,
    Zero,
    /// Finite source: image index of each element.
    Table(Arc<Vec<usize>>),
    /// Abelian source and target: `x -> x * M`.
    Matrix(IntMatrix),
    /// Multiplication by a rational, from `Z` or `Q` into `Q`.
    Scalar(BigRational),
    /// Abelian source: images of the canonical generators, into any carrier.
    Generators(Arc<Vec<Element>>),
    /// `x -> (x, 0)` into `X ⋊ B`.
    InjectKernel,
    /// `b -> (0, b)` into `X ⋊ B`.
    InjectQuotient,
    /// `(x, b) -> x`; a homomorphism only for trivial actions.
    ProjectKernel,
    /// `(x, b) -> b`.
    ProjectQuotient,
    /// `x -> (f(x), g(x))` into a direct product.
    Pair(Arc<(HomMap, HomMap)>),
    /// `first` into `mid`, then `second`.
    Compose(Arc<(HomMap, Carrier, HomMap)>),
}

impl HomMap {
    pub fn apply(&self, source: &Carrier, target: &Carrier, x: &Element) -> Element {
        match self {
            HomMap::Identity => x.clone(),
            HomMap::Zero => target.zero(),
            HomMap::Table(t) => Element::Index(t[x.as_index().expect("finite element")]),
            HomMap::Matrix(m) => {
                let g = target.abelian_group().expect("matrix maps into an abelian carrier");
                Element::Vector(g.normalize(&m.apply(x.as_vector().expect("abelian element"))))
            }
            HomMap::Scalar(q) => match x {
                Element::Rational(r) => Element::Rational(q * r),
                Element::Vector(v) => Element::Rational(q * BigRational::from_integer(v[0].clone())),
                _ => panic!("scalar map on a non-numeric element"),
            },
            HomMap::Generators(imgs) => {
                let v = x.as_vector().expect("abelian element");
                let mut acc = target.zero();
                for (c, img) in v.iter().zip(imgs.iter()) {
                    if !c.is_zero() {
                        acc = target.op(&acc, &target.times(c, img));
                    }
                }
                acc
            }
            HomMap::InjectKernel => {
                let s = target.as_semidirect().expect("semidirect target");
                Element::pair(x.clone(), s.quotient.zero())
            }
            HomMap::InjectQuotient => {
                let s = target.as_semidirect().expect("semidirect target");
                Element::pair(s.kernel.zero(), x.clone())
            }
            HomMap::ProjectKernel => x.as_pair().expect("pair element").0.clone(),
            HomMap::ProjectQuotient => x.as_pair().expect("pair element").1.clone(),
            HomMap::Pair(fg) => {
                let s = target.as_semidirect().expect("product target");
                Element::pair(fg.0.apply(source, &s.kernel, x), fg.1.apply(source, &s.quotient, x))
            }
            HomMap::Compose(c) => {
                let y = c.0.apply(source, &c.1, x);
                c.2.apply(&c.1, target, &y)
            }
        }
    }

    /// Full table when the source is finite.
    pub fn to_table(&self, source: &Carrier, target: &Carrier) -> Option<Vec<usize>> {
        let t = source.as_finite()?;
        (0..t.order())
            .map(|i| self.apply(source, target, &Element::Index(i)).as_index())
            .collect()
    }

    pub fn describe(&self) -> String {
        match self {
            HomMap::Identity => "identity".into(),
            HomMap::Zero => "zero".into(),
            HomMap::Table(t) => format!("table {:?}", t.as_slice()),
            HomMap::Matrix(m) => format!("matrix {m}"),
            HomMap::Scalar(q) => format!("x -> {q}x"),
            HomMap::Generators(g) => {
                let parts: Vec<String> = g.iter().map(|e| e.to_string()).collect();
                format!("generators -> [{}]", parts.join(", "))
            }
            HomMap::InjectKernel => "<1,0>".into(),
            HomMap::InjectQuotient => "<0,1>".into(),
            HomMap::ProjectKernel => "pi_1".into(),
            HomMap::ProjectQuotient => "pi_2".into(),
            HomMap::Pair(fg) => format!("<{}, {}>", fg.0.describe(), fg.1.describe()),
            HomMap::Compose(c) => format!("{} then {}", c.0.describe(), c.2.describe()),
        }
    }
}

/// A group homomorphism between right-preordered groups together with its
/// verified monotonicity status.
#[derive(Clone, Debug)]
pub struct Morphism {
    source: RPGroup,
    target: RPGroup,
    map: HomMap,
    monotone: Verdict,
}

impl Morphism {
    /// Validates the homomorphism law (exactly where possible) and computes
    /// the monotonicity status.
    pub fn new(source: RPGroup, target: RPGroup, map: HomMap) -> Result<Self> {
        check_shape(source.carrier(), target.carrier(), &map)?;
        check_law(source.carrier(), target.carrier(), &map)?;
        Ok(Self::trusted(source, target, map))
    }

    /// Skips the homomorphism check; for maps that are homomorphisms by construction.
    pub(crate) fn trusted(source: RPGroup, target: RPGroup, map: HomMap) -> Self {
        let monotone = monotone_status(&source, &target, &map);
        Morphism {
            source,
            target,
            map,
            monotone,
        }
    }

    pub fn identity(g: &RPGroup) -> Self {
        Self::trusted(g.clone(), g.clone(), HomMap::Identity)
    }

    pub fn zero(source: &RPGroup, target: &RPGroup) -> Self {
        Self::trusted(source.clone(), target.clone(), HomMap::Zero)
    }

    pub fn source(&self) -> &RPGroup {
        &self.source
    }

    pub fn target(&self) -> &RPGroup {
        &self.target
    }

    pub fn map(&self) -> &HomMap {
        &self.map
    }

    pub fn monotone(&self) -> &Verdict {
        &self.monotone
    }

    pub fn is_monotone(&self) -> Tri {
        self.monotone.value
    }

    pub fn apply(&self, x: &Element) -> Element {
        self.map.apply(self.source.carrier(), self.target.carrier(), x)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        if self.target.carrier() != next.source.carrier() {
            return Err(Error::validation("composable morphisms must share the middle carrier"));
        }
        let finite_ends = self.source.carrier().as_finite().zip(next.target.carrier().as_finite());
        let map = match (&self.map, &next.map) {
            (HomMap::Identity, m) | (m, HomMap::Identity) => m.clone(),
            (HomMap::Zero, _) | (_, HomMap::Zero) => HomMap::Zero,
            (HomMap::Matrix(a), HomMap::Matrix(b)) => HomMap::Matrix(a.mul(b)),
            (HomMap::Scalar(a), HomMap::Scalar(b)) => HomMap::Scalar(a * b),
            _ => match finite_ends {
                Some((s, _)) => HomMap::Table(Arc::new(
                    (0..s.order())
                        .map(|i| {
                            next.apply(&self.apply(&Element::Index(i)))
                                .as_index()
                                .expect("finite target")
                        })
                        .collect(),
                )),
                None => HomMap::Compose(Arc::new((
                    self.map.clone(),
                    self.target.carrier().clone(),
                    next.map.clone(),
                ))),
            },
        };
        Ok(Morphism::trusted(self.source.clone(), next.target.clone(), map))
    }

    /// Same map with different cones on the same carriers.
    pub fn with_cones(&self, source: RPGroup, target: RPGroup) -> Result<Morphism> {
        if source.carrier() != self.source.carrier() || target.carrier() != self.target.carrier() {
            return Err(Error::validation("re-coning a morphism must keep its carriers"));
        }
        Ok(Morphism::trusted(source, target, self.map.clone()))
    }
}

fn check_shape(source: &Carrier, target: &Carrier, map: &HomMap) -> Result<()> {
    let bad = |what: &str| Err(Error::validation(format!("{what} cannot map {source} to {target}")));
    match map {
        HomMap::Identity if source != target => bad("identity"),
        HomMap::Table(t) => match (source.as_finite(), target.as_finite()) {
            (Some(s), Some(tt)) if t.len() == s.order() => {
                if let Some(&i) = t.iter().find(|&&i| i >= tt.order()) {
                    return Err(Error::domain(format!("image index {i} outside the target")));
                }
                Ok(())
            }
            _ => bad("a table"),
        },
        HomMap::Matrix(m) => match (source.abelian_group(), target.abelian_group()) {
            (Some(s), Some(t)) => s.check_hom_matrix(t, m),
            _ => bad("a matrix"),
        },
        HomMap::Scalar(_) => {
            let z = Carrier::integers();
            if (source == &Carrier::Rational || source == &z) && target == &Carrier::Rational {
                Ok(())
            } else {
                bad("a scalar")
            }
        }
        HomMap::Generators(imgs) => match source.abelian_group() {
            Some(g) if g.dim() == imgs.len() => {
                for img in imgs.iter() {
                    target.check(img)?;
                }
                Ok(())
            }
            _ => bad("generator images"),
        },
        HomMap::InjectKernel | HomMap::InjectQuotient => match target.as_semidirect() {
            Some(s) if (matches!(map, HomMap::InjectKernel) && &s.kernel == source)
                || (matches!(map, HomMap::InjectQuotient) && &s.quotient == source) =>
            {
                Ok(())
            }
            _ => bad("an injection"),
        },
        HomMap::ProjectKernel | HomMap::ProjectQuotient => match source.as_semidirect() {
            Some(s) if matches!(map, HomMap::ProjectQuotient) && &s.quotient == target => Ok(()),
            Some(s) if matches!(map, HomMap::ProjectKernel) && &s.kernel == target && s.action.is_trivial() => Ok(()),
            _ => bad("a projection"),
        },
        _ => Ok(()),
    }
}

fn check_law(source: &Carrier, target: &Carrier, map: &HomMap) -> Result<()> {
    let f = |x: &Element| map.apply(source, target, x);
    let violation = |a: &Element, b: &Element| {
        Err(Error::validation_with(
            "map is not a homomorphism",
            format!("f({a} + {b}) != f({a}) + f({b})"),
        ))
    };
    match (map, source) {
        (HomMap::Matrix(_), _) | (HomMap::Identity, _) | (HomMap::Zero, _) => return Ok(()),
        (HomMap::Generators(imgs), Carrier::Abelian(g)) => {
            for (i, a) in imgs.iter().enumerate() {
                for b in imgs.iter().skip(i + 1) {
                    if target.op(a, b) != target.op(b, a) {
                        return Err(Error::validation_with("generator images do not commute", format!("{a}, {b}")));
                    }
                }
            }
            for (k, d) in g.torsion().iter().enumerate() {
                let img = &imgs[g.rank() + k];
                if !target.is_zero(&target.times(d, img)) {
                    return Err(Error::validation_with(
                        "generator image does not respect its torsion relation",
                        format!("{d} * {img} != 0"),
                    ));
                }
            }
            return Ok(());
        }
        _ => {}
    }
    if let Carrier::Finite(t) = source {
        let gens = t.generating_set();
        if !target.is_zero(&f(&Element::Index(0))) {
            return Err(Error::validation("map does not send the identity to the identity"));
        }
        for a in 0..t.order() {
            for &g in &gens {
                let (a, g) = (Element::Index(a), Element::Index(g));
                if f(&source.op(&a, &g)) != target.op(&f(&a), &f(&g)) {
                    return violation(&a, &g);
                }
            }
        }
        return Ok(());
    }
    let sample = source.sample(LAW_SAMPLE_RADIUS, LAW_SAMPLE_LIMIT);
    for a in &sample {
        for b in &sample {
            if f(&source.op(a, b)) != target.op(&f(a), &f(b)) {
                return violation(a, b);
            }
        }
    }
    Ok(())
}

/// Monotone iff `f(P_X) ⊆ P_Y`; checked on all cone elements (finite),
/// on cone generators, by exact reasoning for builtin rational cones, or by
/// counterexample search.
pub fn monotone_status(source: &RPGroup, target: &RPGroup, map: &HomMap) -> Verdict {
    let (sc, tc) = (source.carrier(), target.carrier());
    let check = |xs: Vec<Element>| -> Verdict {
        let mut acc = Verdict::yes();
        for x in xs {
            match target.contains(&map.apply(sc, tc, &x)) {
                Tri::No => return Verdict::no().with_witness(vec![x]),
                Tri::Yes => {}
                u => acc = acc.and(Verdict::new(u)),
            }
        }
        acc
    };
    if let Some(els) = source.cone().elements(sc, SEARCH_LIMIT) {
        return check(els);
    }
    if let Some(gens) = source.cone().generators(sc) {
        return check(gens);
    }
    if let (HomMap::Scalar(q), Carrier::Rational) = (map, sc) {
        if let Some(v) = scalar_monotone(source.cone(), target.cone(), q) {
            return v;
        }
    }
    if matches!(target.cone(), Cone::Total) {
        return Verdict::yes();
    }
    if matches!(map, HomMap::Identity) && same_cone(source.cone(), target.cone()) {
        return Verdict::yes();
    }
    for x in sc.sample(SEARCH_RADIUS, SEARCH_LIMIT) {
        if source.contains(&x).is_yes() && target.contains(&map.apply(sc, tc, &x)).is_no() {
            return Verdict::no().with_witness(vec![x]);
        }
    }
    Verdict::unknown(SEARCH_RADIUS).with_note("no counterexample in the sampled box")
}

/// Builtin cones on `Q`: `Q^+` is mapped by `x -> q x` onto `Q^+`, `Q^-` or `{0}`.
fn scalar_monotone(source: &Cone, target: &Cone, q: &BigRational) -> Option<Verdict> {
    let one = Element::Rational(BigRational::from_integer(BigInt::from(1)));
    match (source, target) {
        (Cone::Trivial, _) | (_, Cone::Total) => Some(Verdict::yes()),
        (Cone::Orthant, Cone::Orthant) => Some(if q.is_negative() {
            Verdict::no().with_witness(vec![one])
        } else {
            Verdict::yes()
        }),
        (Cone::Orthant | Cone::Total, Cone::Trivial) => Some(if q.is_zero() {
            Verdict::yes()
        } else {
            Verdict::no().with_witness(vec![one])
        }),
        (Cone::Total, Cone::Orthant) => Some(if q.is_zero() {
            Verdict::yes()
        } else {
            Verdict::no().with_witness(vec![Element::Rational(if q.is_negative() {
                BigRational::from_integer(BigInt::from(1))
            } else {
                BigRational::from_integer(BigInt::from(-1))
            })])
        }),
        _ => None,
    }
}

fn same_cone(a: &Cone, b: &Cone) -> bool {
    match (a, b) {
        (Cone::Trivial, Cone::Trivial) | (Cone::Total, Cone::Total) | (Cone::Orthant, Cone::Orthant) => true,
        (Cone::Generated(x), Cone::Generated(y)) => Arc::ptr_eq(x, y),
        (Cone::Product(x), Cone::Product(y)) | (Cone::Lex(x), Cone::Lex(y)) => {
            same_cone(&x.0, &y.0) && same_cone(&x.1, &y.1)
        }
        (Cone::HalfPlane { num: a, den: b }, Cone::HalfPlane { num: c, den: d }) => a * d == b * c,
        _ => false,
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} by {}", self.source, self.target, self.map.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z_map(source: RPGroup, target: RPGroup, k: i64) -> Morphism {
        Morphism::new(source, target, HomMap::Matrix(IntMatrix::from_i64(&[&[k]]))).unwrap()
    }

    #[test]
    fn monotonicity_examples() {
        let n = RPGroup::z_natural();
        assert!(Morphism::identity(&n).monotone().is_yes());
        let neg = z_map(n.clone(), n.clone(), -1);
        assert!(neg.monotone().is_no());
        assert_eq!(neg.monotone().witness, vec![Element::int(1)]);
        assert!(z_map(RPGroup::z_generated(&[2, 3]), n, 1).monotone().is_yes());
    }

    #[test]
    fn composition_of_tables() {
        use crate::finite::FiniteGroupTable;
        let z4 = RPGroup::finite(FiniteGroupTable::cyclic(4), &[0]).unwrap();
        let z2 = RPGroup::finite(FiniteGroupTable::cyclic(2), &[0, 1]).unwrap();
        let f = Morphism::new(z4.clone(), z2.clone(), HomMap::Table(Arc::new(vec![0, 1, 0, 1]))).unwrap();
        let g = Morphism::identity(&z2);
        let h = f.then(&g).unwrap();
        assert_eq!(h.apply(&Element::Index(3)), Element::Index(1));
        assert!(Morphism::new(z4, z2, HomMap::Table(Arc::new(vec![0, 1, 1, 0]))).is_err());
    }

    #[test]
    fn scalar_monotonicity() {
        let q = RPGroup::q_nonneg();
        let half = Morphism::new(q.clone(), q.clone(), HomMap::Scalar(BigRational::new(1.into(), 2.into()))).unwrap();
        assert!(half.monotone().is_yes());
        let neg = Morphism::new(q.clone(), q, HomMap::Scalar(BigRational::new((-2).into(), 1.into()))).unwrap();
        assert!(neg.monotone().is_no());
    }
}
