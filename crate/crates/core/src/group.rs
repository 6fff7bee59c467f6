//! Right-preordered groups as (carrier, positive cone) pairs.

use std::fmt;

use crate::abelian::{grothendieck_completion, AffineMonoid, FgAbelianGroup, DEFAULT_BOUND};
use crate::carrier::Carrier;
use crate::cone::Cone;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::finite::FiniteGroupTable;
use crate::tri::{Tri, Verdict};

/// Coordinate box radius for sampled closure checks on infinite carriers.
const CLOSURE_SAMPLE_RADIUS: u64 = 6;
const CLOSURE_SAMPLE_LIMIT: usize = 400;
/// Coordinate box radius and size for counterexample searches.
pub const SEARCH_RADIUS: u64 = 64;
pub const SEARCH_LIMIT: usize = 20_000;

/// A group with a right-invariant preorder, given by its positive cone.
#[derive(Clone, Debug)]
pub struct RPGroup {
    carrier: Carrier,
    cone: Cone,
    bound: u64,
}

/// `P ∩ (-P)` together with whether it was computed exactly.
#[derive(Clone, Debug)]
pub struct SymmetricPart {
    pub cone: Option<Cone>,
    pub exact: Tri,
}

impl RPGroup {
    /// Validates that the cone contains zero and is closed under the
    /// operation: exhaustively on finite carriers, on a sample otherwise.
    pub fn new(carrier: Carrier, cone: Cone) -> Result<Self> {
        check_cone_kind(&carrier, &cone)?;
        let g = RPGroup {
            carrier,
            cone,
            bound: DEFAULT_BOUND,
        };
        if !g.contains(&g.carrier.zero()).is_yes() {
            return Err(Error::validation("cone does not contain the identity"));
        }
        if let Some((a, b)) = g.closure_violation() {
            return Err(Error::validation_with(
                "cone is not closed under the group operation",
                format!("{a} + {b}"),
            ));
        }
        Ok(g)
    }

    /// Skips validation; for cones that are submonoids by construction.
    pub(crate) fn trusted(carrier: Carrier, cone: Cone) -> Self {
        RPGroup {
            carrier,
            cone,
            bound: DEFAULT_BOUND,
        }
    }

    pub fn with_bound(mut self, bound: u64) -> Self {
        self.bound = bound.max(1);
        self
    }

    pub fn z_natural() -> Self {
        Self::trusted(Carrier::integers(), Cone::Orthant)
    }

    pub fn z_trivial() -> Self {
        Self::trusted(Carrier::integers(), Cone::Trivial)
    }

    pub fn z_total() -> Self {
        Self::trusted(Carrier::integers(), Cone::Total)
    }

    pub fn z_generated(gens: &[i64]) -> Self {
        let c = Carrier::integers();
        let gens: Vec<Element> = gens.iter().map(|&g| Element::int(g)).collect();
        let cone = Cone::generated(&c, &gens, DEFAULT_BOUND).expect("integer generators");
        Self::trusted(c, cone)
    }

    pub fn q_nonneg() -> Self {
        Self::trusted(Carrier::Rational, Cone::Orthant)
    }

    pub fn abelian(g: FgAbelianGroup, cone: Cone) -> Result<Self> {
        Self::new(Carrier::abelian(g), cone)
    }

    pub fn finite(t: FiniteGroupTable, cone: &[usize]) -> Result<Self> {
        let c = Carrier::finite(t);
        let cone = Cone::subset(&c, cone)?;
        Self::new(c, cone)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn zero(&self) -> Element {
        self.carrier.zero()
    }

    pub fn contains(&self, x: &Element) -> Tri {
        self.cone.member(&self.carrier, x, self.bound)
    }

    /// `x <= y` iff `y - x` lies in the cone.
    pub fn leq(&self, x: &Element, y: &Element) -> Result<Tri> {
        self.carrier.check(x)?;
        self.carrier.check(y)?;
        Ok(self.contains(&self.carrier.sub(y, x)))
    }

    /// `b >= 0` and `b <= 0`.
    pub fn equiv_zero(&self, b: &Element) -> Result<Tri> {
        self.carrier.check(b)?;
        let pos = self.contains(b);
        if pos.is_no() {
            return Ok(Tri::No);
        }
        Ok(pos.and(self.contains(&self.carrier.neg(b))))
    }

    pub fn symmetric_part(&self) -> SymmetricPart {
        match self.cone.symmetric_part(&self.carrier) {
            Some(cone) => SymmetricPart { cone: Some(cone), exact: Tri::Yes },
            None => SymmetricPart {
                cone: None,
                exact: Tri::unknown(self.bound),
            },
        }
    }

    /// Cone elements of a finite group, sorted by index.
    pub fn cone_indices(&self) -> Option<Vec<usize>> {
        let t = self.carrier.as_finite()?;
        Some(
            (0..t.order())
                .filter(|&i| self.contains(&Element::Index(i)).is_yes())
                .collect(),
        )
    }

    /// Whether the cone is a subgroup, i.e. the preorder is an equivalence
    /// relation. On `No` the witness is a cone element whose inverse is not
    /// in the cone.
    pub fn is_group_cone(&self) -> Verdict {
        if let Some(els) = self.cone.elements(&self.carrier, SEARCH_LIMIT) {
            for x in els {
                if !self.contains(&self.carrier.neg(&x)).is_yes() {
                    return Verdict::no().with_witness(vec![x]);
                }
            }
            return Verdict::yes();
        }
        if let Some(gens) = self.cone.generators(&self.carrier) {
            let mut acc = Verdict::yes();
            for g in gens {
                match self.contains(&self.carrier.neg(&g)) {
                    Tri::No => return Verdict::no().with_witness(vec![g]),
                    Tri::Yes => {}
                    u => acc = acc.and(Verdict::new(u)),
                }
            }
            return acc;
        }
        for x in self.carrier.sample(SEARCH_RADIUS, SEARCH_LIMIT) {
            if self.contains(&x).is_yes() && self.contains(&self.carrier.neg(&x)).is_no() {
                return Verdict::no().with_witness(vec![x]);
            }
        }
        Verdict::unknown(self.bound).with_note("no counterexample in the sampled box")
    }

    /// Protomodularity, the Mal'tsev property and strong unitality of the
    /// object all coincide with the cone being a group.
    pub fn object_properties(&self) -> ObjectProperties {
        let v = self.is_group_cone();
        ObjectProperties {
            group_cone: v.clone(),
            protomodular: v.clone(),
            malcev: v.clone(),
            strongly_unital: v,
        }
    }

    fn closure_violation(&self) -> Option<(Element, Element)> {
        let members: Vec<Element> = match self.cone.elements(&self.carrier, 4096) {
            Some(els) => els,
            None => {
                if matches!(self.cone, Cone::Generated(_) | Cone::Trivial | Cone::Total | Cone::Orthant) {
                    return None;
                }
                self.carrier
                    .sample(CLOSURE_SAMPLE_RADIUS, CLOSURE_SAMPLE_LIMIT)
                    .into_iter()
                    .filter(|x| self.contains(x).is_yes())
                    .collect()
            }
        };
        for a in &members {
            for b in &members {
                if self.contains(&self.carrier.op(a, b)).is_no() {
                    return Some((a.clone(), b.clone()));
                }
            }
        }
        None
    }
}

/// The object-level properties that reduce to the cone being a group.
#[derive(Clone, Debug)]
pub struct ObjectProperties {
    pub group_cone: Verdict,
    pub protomodular: Verdict,
    pub malcev: Verdict,
    pub strongly_unital: Verdict,
}

fn check_cone_kind(carrier: &Carrier, cone: &Cone) -> Result<()> {
    let ok = match cone {
        Cone::Trivial | Cone::Total | Cone::Meet(_) => true,
        Cone::Orthant => !matches!(carrier, Carrier::Semidirect(_)),
        Cone::Subset(s) => carrier.as_finite().is_some_and(|t| s.elements().iter().all(|&e| e < t.order())),
        Cone::Generated(m) => carrier.abelian_group().is_some_and(|g| **g == *m.ambient()),
        Cone::Preimage(p) => p.source == *carrier,
        Cone::Product(_) | Cone::Lex(_) => carrier.as_semidirect().is_some(),
        Cone::HalfPlane { den, .. } => {
            let z = Carrier::integers();
            den.sign() == num_bigint::Sign::Plus
                && carrier
                    .as_semidirect()
                    .is_some_and(|s| s.kernel == z && s.quotient == z && s.action.is_trivial())
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::validation(format!("a {} cone cannot live on {carrier}", cone.kind())))
    }
}

/// Reads off the cone `{x | 0 R x}` of a relation on a finite group after
/// checking that it is reflexive, transitive and right-invariant.
pub fn cone_from_preorder(t: &FiniteGroupTable, rel: &[Vec<bool>]) -> Result<Vec<usize>> {
    let n = t.order();
    if rel.len() != n || rel.iter().any(|r| r.len() != n) {
        return Err(Error::validation(format!("relation must be a {n}x{n} matrix")));
    }
    if let Some(x) = (0..n).find(|&x| !rel[x][x]) {
        return Err(Error::validation_with("relation is not reflexive", t.label(x).to_string()));
    }
    for x in 0..n {
        for y in 0..n {
            if !rel[x][y] {
                continue;
            }
            for z in 0..n {
                if rel[y][z] && !rel[x][z] {
                    return Err(Error::validation_with(
                        "relation is not transitive",
                        format!("{} <= {} <= {}", t.label(x), t.label(y), t.label(z)),
                    ));
                }
                if !rel[t.op(x, z)][t.op(y, z)] {
                    return Err(Error::validation_with(
                        "relation is not right-invariant",
                        format!("{} <= {} but not after adding {}", t.label(x), t.label(y), t.label(z)),
                    ));
                }
            }
        }
    }
    Ok((0..n).filter(|&x| rel[0][x]).collect())
}

/// The relation `x <= y` induced by a cone on a finite group.
pub fn induced_relation(g: &RPGroup) -> Option<Vec<Vec<bool>>> {
    let t = g.carrier.as_finite()?;
    let n = t.order();
    let cone = g.cone_indices()?;
    let mask = t.mask(&cone);
    Some((0..n).map(|x| (0..n).map(|y| mask[t.sub(y, x)]).collect()).collect())
}

/// Group completion of a commutative monoid, as a right-preordered group.
pub fn completion(m: &AffineMonoid) -> RPGroup {
    let c = grothendieck_completion(m);
    let carrier = Carrier::abelian(c.monoid.ambient().clone());
    RPGroup::trusted(carrier, Cone::Generated(std::sync::Arc::new(c.monoid)))
}

impl fmt::Display for RPGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.carrier, self.cone)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leq_examples() {
        assert_eq!(RPGroup::z_natural().leq(&Element::int(2), &Element::int(5)).unwrap(), Tri::Yes);
        assert_eq!(RPGroup::z_trivial().leq(&Element::int(0), &Element::int(1)).unwrap(), Tri::No);
        assert_eq!(RPGroup::z_generated(&[2, 3]).leq(&Element::int(0), &Element::int(1)).unwrap(), Tri::No);
        assert!(RPGroup::z_natural().leq(&Element::Index(0), &Element::int(1)).is_err());
    }

    #[test]
    fn equiv_zero_examples() {
        assert_eq!(RPGroup::z_total().equiv_zero(&Element::int(5)).unwrap(), Tri::Yes);
        assert_eq!(RPGroup::z_natural().equiv_zero(&Element::int(1)).unwrap(), Tri::No);
        assert_eq!(RPGroup::z_natural().equiv_zero(&Element::int(0)).unwrap(), Tri::Yes);
    }

    #[test]
    fn group_cone_examples() {
        assert!(RPGroup::z_natural().is_group_cone().is_no());
        assert!(RPGroup::z_total().is_group_cone().is_yes());
        assert!(RPGroup::z_generated(&[2, -3]).is_group_cone().is_yes());
        assert!(RPGroup::q_nonneg().is_group_cone().is_no());
    }

    #[test]
    fn preorder_roundtrip_z2() {
        let t = FiniteGroupTable::cyclic(2);
        let eq = vec![vec![true, false], vec![false, true]];
        assert_eq!(cone_from_preorder(&t, &eq).unwrap(), vec![0]);
        let total = vec![vec![true; 2]; 2];
        assert_eq!(cone_from_preorder(&t, &total).unwrap(), vec![0, 1]);
        let bad = vec![vec![true, true], vec![false, true]];
        assert!(cone_from_preorder(&t, &bad).is_err());
    }

    #[test]
    fn rejects_non_submonoid() {
        assert!(RPGroup::finite(FiniteGroupTable::cyclic(4), &[0, 1]).is_err());
        assert!(RPGroup::finite(FiniteGroupTable::cyclic(4), &[1, 2, 3]).is_err());
        assert!(RPGroup::finite(FiniteGroupTable::cyclic(4), &[0, 2]).is_ok());
    }

    #[test]
    fn symmetric_part_of_half_plane_with_line() {
        let c = Carrier::abelian(FgAbelianGroup::free(2));
        let gens = [Element::vector(&[1, 0]), Element::vector(&[-1, 0]), Element::vector(&[0, 1])];
        let g = RPGroup::new(c.clone(), Cone::generated(&c, &gens, DEFAULT_BOUND).unwrap()).unwrap();
        let h = g.symmetric_part();
        assert_eq!(h.exact, Tri::Yes);
        let h = h.cone.unwrap();
        assert_eq!(h.contains(&c, &Element::vector(&[-7, 0])), Tri::Yes);
        assert_eq!(h.contains(&c, &Element::vector(&[0, 1])), Tri::No);
    }
}
