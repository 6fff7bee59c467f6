//! Split extensions `X -> X ⋊_φ B -> B` and their compatible cones.
//!
//! Every compatible cone `P` satisfies `P_prod ⊆ P ⊆ P_lex`, and a compatible
//! cone exists iff `P_lex` is one, iff `φ_b` is monotone for every `b ∈ P_B`
//! admitting `b' ∈ P_B` with `b + b' ∼ 0` (condition (iii)).

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::abelian::{direct_sum, AffineMonoid, FgAbelianGroup, IntMatrix};
use crate::action::{Automorphism, GroupAction};
use crate::carrier::Carrier;
use crate::catops::{abelian_hom, jointly_strongly_epi, kernel, product};
use crate::cone::Cone;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::finite::FiniteGroupTable;
use crate::group::{RPGroup, SEARCH_LIMIT, SEARCH_RADIUS};
use crate::morphism::{HomMap, Morphism};
use crate::tri::{Tri, Verdict};

/// Radius of the coordinate box used by sampled cross-checks.
pub const CROSS_CHECK_RADIUS: u64 = 16;
/// Element budget of the sampled cross-checks.
pub const CROSS_CHECK_LIMIT: usize = 600;
/// Maximum number of cones returned by an enumeration.
pub const MAX_ENUMERATED: usize = 10_000;

#[derive(Clone, Debug)]
pub enum ConePolicy {
    Prod,
    Lex,
    Custom(Cone),
}

#[derive(Clone, Debug)]
pub struct SemidirectGroup {
    kernel: RPGroup,
    quotient: RPGroup,
    action: GroupAction,
    policy: ConePolicy,
    carrier: Carrier,
    model: OnceLock<FiniteModel>,
}

/// A finite semidirect product as an explicit table; index `i` stands for
/// `elements[i]`.
#[derive(Clone, Debug)]
pub struct FiniteModel {
    pub table: Arc<FiniteGroupTable>,
    pub elements: Vec<Element>,
    index: BTreeMap<Element, usize>,
}

impl FiniteModel {
    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn carrier(&self) -> Carrier {
        Carrier::Finite(self.table.clone())
    }
}

#[derive(Clone, Debug)]
pub struct InvertiblePart {
    /// Monoid generators of `{b ∈ P_B | ∃ b' ∈ P_B, b + b' ∼ 0}`.
    pub generators: Vec<Element>,
    /// Monoid generators of `{b | b ∼ 0}`, reported separately.
    pub equivalent_to_zero: Vec<Element>,
    pub exact: Tri,
}

#[derive(Clone, Debug)]
pub struct SplitExtAnalysis {
    pub condition_iii: Verdict,
    pub lex_compatible: Verdict,
    /// Direct closure check of `P_lex` (exhaustive when finite, sampled otherwise).
    pub lex_cross_check: Verdict,
    pub prod_compatible: Verdict,
    pub exists_compatible: Verdict,
    pub invertible_part: InvertiblePart,
    /// `Yes` when some `φ_b` fails to be monotone for the reference cone,
    /// which rules out compatible two-sided preorders.
    pub two_sided_obstruction: Verdict,
    pub reference_cone: String,
    pub enumerated_cones: Option<Vec<Vec<usize>>>,
}

/// One member of the half-plane family on `Z × Z`.
#[derive(Clone, Debug)]
pub struct HalfPlaneCone {
    pub alpha: BigRational,
    pub cone: Cone,
    pub compatible: Verdict,
    pub cross_check: Verdict,
}

#[derive(Clone, Debug)]
pub struct CounterexampleReport {
    pub object: RPGroup,
    pub projection: Morphism,
    pub section: Morphism,
    /// `(0, b)` in `Y × ⟨b⟩`.
    pub candidate: Element,
    pub membership: Tri,
    pub strong: Verdict,
}

impl SemidirectGroup {
    pub fn new(kernel: RPGroup, quotient: RPGroup, action: GroupAction, policy: ConePolicy) -> Result<Self> {
        let carrier = Carrier::semidirect(kernel.carrier().clone(), quotient.carrier().clone(), action.clone())?;
        let s = SemidirectGroup {
            kernel,
            quotient,
            action,
            policy,
            carrier,
            model: OnceLock::new(),
        };
        s.check_action_laws()?;
        if let ConePolicy::Custom(c) = &s.policy {
            s.check_kernel_condition(c)?;
        }
        Ok(s)
    }

    fn check_action_laws(&self) -> Result<()> {
        let (xc, bc) = (self.kernel.carrier(), self.quotient.carrier());
        let xs = xc.sample(3, 24);
        let bs = bc.sample(3, 24);
        for b in &bs {
            for c in &bs {
                let (Some(pb), Some(pc), Some(pbc)) = (
                    self.action.phi_bounded(b),
                    self.action.phi_bounded(c),
                    self.action.phi_bounded(&bc.op(b, c)),
                ) else {
                    continue;
                };
                for x in &xs {
                    if pbc.apply(xc, x) != pb.apply(xc, &pc.apply(xc, x)) {
                        return Err(Error::validation_with(
                            "action is not a homomorphism",
                            format!("b = {b}, b' = {c}, x = {x}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_kernel_condition(&self, cone: &Cone) -> Result<()> {
        let xc = self.kernel.carrier();
        for x in xc.sample(CROSS_CHECK_RADIUS, CROSS_CHECK_LIMIT) {
            let lhs = self.kernel.contains(&x);
            let rhs = cone.contains(&self.carrier, &Element::pair(x.clone(), self.quotient.zero()));
            if lhs.is_decided() && rhs.is_decided() && lhs != rhs {
                return Err(Error::validation_with(
                    "cone does not restrict to the kernel cone",
                    format!("x = {x}"),
                ));
            }
        }
        Ok(())
    }

    pub fn kernel(&self) -> &RPGroup {
        &self.kernel
    }

    pub fn quotient(&self) -> &RPGroup {
        &self.quotient
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    pub fn policy(&self) -> &ConePolicy {
        &self.policy
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn prod_cone(&self) -> Cone {
        Cone::product(self.kernel.cone().clone(), self.quotient.cone().clone())
    }

    pub fn lex_cone(&self) -> Cone {
        Cone::lex(self.kernel.cone().clone(), self.quotient.cone().clone())
    }

    pub fn cone(&self) -> Cone {
        match &self.policy {
            ConePolicy::Prod => self.prod_cone(),
            ConePolicy::Lex => self.lex_cone(),
            ConePolicy::Custom(c) => c.clone(),
        }
    }

    fn bound(&self) -> u64 {
        self.kernel.bound().max(self.quotient.bound())
    }

    /// The semidirect product with the cone of the policy.
    pub fn object(&self) -> RPGroup {
        RPGroup::trusted(self.carrier.clone(), self.cone()).with_bound(self.bound())
    }

    pub fn prod_member(&self, e: &Element) -> Tri {
        self.prod_cone().member(&self.carrier, e, self.bound())
    }

    pub fn lex_member(&self, e: &Element) -> Tri {
        self.lex_cone().member(&self.carrier, e, self.bound())
    }

    /// `⟨1, 0⟩: X -> X ⋊ B`.
    pub fn inclusion(&self) -> Morphism {
        Morphism::trusted(self.kernel.clone(), self.object(), HomMap::InjectKernel)
    }

    /// `π_B: X ⋊ B -> B`.
    pub fn projection(&self) -> Morphism {
        Morphism::trusted(self.object(), self.quotient.clone(), HomMap::ProjectQuotient)
    }

    /// `⟨0, 1⟩: B -> X ⋊ B`.
    pub fn section(&self) -> Morphism {
        Morphism::trusted(self.quotient.clone(), self.object(), HomMap::InjectQuotient)
    }

    /// Explicit table when both factors are finite with at most `cap`
    /// elements in total.
    pub fn finite_model(&self, cap: usize) -> Result<FiniteModel> {
        if let Some(m) = self.model.get() {
            if m.elements.len() <= cap {
                return Ok(m.clone());
            }
        }
        let m = self.build_model(cap)?;
        Ok(self.model.get_or_init(|| m).clone())
    }

    fn build_model(&self, cap: usize) -> Result<FiniteModel> {
        let mut elements = self
            .carrier
            .elements(cap)
            .ok_or_else(|| Error::Resource(format!("semidirect product is infinite or has more than {cap} elements")))?;
        let zero = self.carrier.zero();
        let z = elements.iter().position(|e| *e == zero).expect("identity is an element");
        elements.swap(0, z);
        let index: BTreeMap<Element, usize> = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let rows = match self.finite_rows(&elements, &index) {
            Some(rows) => rows,
            None => elements
                .iter()
                .map(|a| elements.iter().map(|b| index[&self.carrier.op(a, b)]).collect())
                .collect(),
        };
        let labels = elements.iter().map(ToString::to_string).collect();
        Ok(FiniteModel {
            table: Arc::new(FiniteGroupTable::from_group_rows(&rows, labels)),
            elements,
            index,
        })
    }

    /// Operation table from the factor tables when both factors are finite.
    fn finite_rows(&self, elements: &[Element], index: &BTreeMap<Element, usize>) -> Option<Vec<Vec<usize>>> {
        let (xt, bt) = (self.kernel.carrier().as_finite()?, self.quotient.carrier().as_finite()?);
        let (nx, nb) = (xt.order(), bt.order());
        let xc = self.kernel.carrier();
        let phi: Vec<Vec<usize>> = (0..nb)
            .map(|b| {
                let f = self.action.phi(&Element::Index(b));
                (0..nx).map(|y| f.apply(xc, &Element::Index(y)).as_index().expect("finite kernel")).collect()
            })
            .collect();
        let pos: Vec<usize> = (0..nx * nb)
            .map(|k| index[&Element::pair(Element::Index(k % nx), Element::Index(k / nx))])
            .collect();
        let coords: Vec<(usize, usize)> = elements
            .iter()
            .map(|e| {
                let (x, b) = e.as_pair().expect("pair");
                (x.as_index().expect("finite"), b.as_index().expect("finite"))
            })
            .collect();
        Some(
            coords
                .iter()
                .map(|&(x, b)| {
                    coords.iter().map(|&(y, c)| pos[xt.op(x, phi[b][y]) + nx * bt.op(b, c)]).collect()
                })
                .collect(),
        )
    }

    /// Whether `φ_b(P_X) ⊆ P_X`; on `No` the witness is `[b, x]`.
    pub fn phi_monotone(&self, b: &Element) -> Verdict {
        self.phi_monotone_for(b, self.kernel.cone())
    }

    fn phi_monotone_for(&self, b: &Element, cone: &Cone) -> Verdict {
        let xc = self.kernel.carrier();
        let Some(phi) = self.action.phi_bounded(b) else {
            return Verdict::unknown(crate::action::SCALAR_EXPONENT_LIMIT)
                .with_note(format!("phi_{b} exceeds the exponent limit"));
        };
        let bound = self.kernel.bound();
        let check = |xs: Vec<Element>| {
            let mut acc = Verdict::yes();
            for x in xs {
                match cone.member(xc, &phi.apply(xc, &x), bound) {
                    Tri::No => return Verdict::no().with_witness(vec![b.clone(), x]),
                    Tri::Yes => {}
                    u => acc = acc.and(Verdict::new(u)),
                }
            }
            acc
        };
        if let Some(els) = cone.elements(xc, SEARCH_LIMIT) {
            return check(els);
        }
        if let Some(gens) = cone.generators(xc) {
            return check(gens);
        }
        if let (Carrier::Rational, Some(signs)) = (xc, q_signs(cone)) {
            let q = match &phi {
                Automorphism::Identity => return Verdict::yes(),
                Automorphism::Scalar(q) => q,
                _ => return Verdict::unknown(bound),
            };
            let unit = [rational(0), rational(1), rational(-1)];
            let image_class = |i: usize| if q.is_negative() { 3 - i } else { i };
            return match (1..3).find(|&i| signs[i] && !signs[image_class(i)]) {
                Some(i) => Verdict::no().with_witness(vec![b.clone(), unit[i].clone()]),
                None => Verdict::yes(),
            };
        }
        for x in xc.sample(SEARCH_RADIUS, SEARCH_LIMIT) {
            if cone.member(xc, &x, bound).is_yes() && cone.member(xc, &phi.apply(xc, &x), bound).is_no() {
                return Verdict::no().with_witness(vec![b.clone(), x]);
            }
        }
        Verdict::unknown(SEARCH_RADIUS).with_note("no counterexample in the sampled box")
    }
}

fn q_signs(c: &Cone) -> Option<[bool; 3]> {
    match c {
        Cone::Trivial => Some([true, false, false]),
        Cone::Orthant => Some([true, true, false]),
        Cone::Total => Some([true, true, true]),
        _ => None,
    }
}

fn rational(n: i64) -> Element {
    Element::Rational(BigRational::from_integer(n.into()))
}

/// `{b ∈ P_B | ∃ b' ∈ P_B, b + b' ∼ 0}`. For finite groups this is the whole
/// cone; for abelian groups it is the symmetric part `P_B ∩ -P_B`.
pub fn invertible_part(b: &RPGroup) -> InvertiblePart {
    let bc = b.carrier();
    if bc.is_finite() {
        if let Some(els) = b.cone().elements(bc, SEARCH_LIMIT) {
            return InvertiblePart {
                generators: els.clone(),
                equivalent_to_zero: els,
                exact: Tri::Yes,
            };
        }
    }
    if bc.is_abelian() {
        if let Some(gens) = b.cone().symmetric_part(bc).and_then(|h| h.generators(bc)) {
            return InvertiblePart {
                generators: gens.clone(),
                equivalent_to_zero: gens,
                exact: Tri::Yes,
            };
        }
    }
    let found: Vec<Element> = bc
        .sample(SEARCH_RADIUS, SEARCH_LIMIT)
        .into_iter()
        .filter(|x| b.equiv_zero(x).map(Tri::is_yes).unwrap_or(false))
        .collect();
    InvertiblePart {
        generators: found.clone(),
        equivalent_to_zero: found,
        exact: Tri::unknown(SEARCH_RADIUS),
    }
}

/// Condition (iii): `φ_b` monotone for every `b` in the invertible part.
pub fn check_condition_iii(s: &SemidirectGroup) -> Verdict {
    let inv = invertible_part(s.quotient());
    let mut acc = Verdict::yes();
    for b in &inv.generators {
        let v = s.phi_monotone(b);
        if v.is_no() {
            return v;
        }
        acc = acc.and(v);
    }
    if !inv.exact.is_yes() {
        acc = acc.and(Verdict::new(inv.exact).with_note("invertible part found by bounded search"));
    }
    acc
}

/// `P_prod` is compatible iff `φ_b` is monotone for every `b ∈ P_B`; monotone
/// maps compose, so monoid generators of `P_B` suffice.
pub fn prod_compatible(s: &SemidirectGroup) -> Verdict {
    let b = s.quotient();
    let bc = b.carrier();
    let gens = b.cone().elements(bc, SEARCH_LIMIT).or_else(|| b.cone().generators(bc));
    let Some(gens) = gens else {
        return Verdict::unknown(b.bound()).with_note("base cone has no generators available");
    };
    let mut acc = Verdict::yes();
    for g in gens {
        let v = s.phi_monotone(&g);
        if v.is_no() {
            return v;
        }
        acc = acc.and(v);
    }
    acc
}

/// Direct submonoid check of a cone on the semidirect product: exhaustive on
/// finite products, a sampled grid otherwise.
pub fn closure_check(s: &SemidirectGroup, cone: &Cone) -> Verdict {
    if let Ok(model) = s.finite_model(SEARCH_LIMIT) {
        let members: Vec<usize> = (0..model.elements.len())
            .filter(|&i| cone.contains(s.carrier(), &model.elements[i]).is_yes())
            .collect();
        return match model.table.check_submonoid(&members) {
            Ok(()) => Verdict::yes(),
            Err((a, b)) => Verdict::no().with_witness(vec![model.elements[a].clone(), model.elements[b].clone()]),
        };
    }
    let c = s.carrier();
    let members: Vec<Element> = c
        .sample(CROSS_CHECK_RADIUS, CROSS_CHECK_LIMIT)
        .into_iter()
        .filter(|e| cone.member(c, e, s.bound()).is_yes())
        .collect();
    for a in &members {
        for b in &members {
            if cone.member(c, &c.op(a, b), s.bound()).is_no() {
                return Verdict::no().with_witness(vec![a.clone(), b.clone()]);
            }
        }
    }
    Verdict::unknown(CROSS_CHECK_RADIUS).with_note("closure holds on the sampled grid")
}

pub fn lex_closure_check(s: &SemidirectGroup) -> Verdict {
    closure_check(s, &s.lex_cone())
}

/// Whether `cone` makes the canonical split extension live in right-preordered
/// groups: a submonoid restricting to `P_X` on the kernel, with the
/// projection and the section monotone.
pub fn is_compatible_cone(s: &SemidirectGroup, cone: &Cone) -> Verdict {
    if let Cone::HalfPlane { num, den } = cone {
        if let Some(v) = half_plane_compatibility(s, num, den) {
            return v;
        }
    }
    let c = s.carrier();
    let (x, b) = (s.kernel(), s.quotient());
    let finite = s.finite_model(SEARCH_LIMIT).ok();
    let sample: Vec<Element> = match &finite {
        Some(m) => m.elements.clone(),
        None => c.sample(CROSS_CHECK_RADIUS, CROSS_CHECK_LIMIT),
    };
    for e in &sample {
        let (xx, bb) = e.as_pair().expect("pair");
        let inside = cone.member(c, e, s.bound());
        if inside.is_yes() && b.contains(bb).is_no() {
            return Verdict::no().with_witness(vec![e.clone()]).with_note("projection is not monotone");
        }
        if b.carrier().is_zero(bb) {
            let k = x.contains(xx);
            if k.is_decided() && inside.is_decided() && k != inside {
                return Verdict::no().with_witness(vec![e.clone()]).with_note("cone does not restrict to the kernel cone");
            }
        }
    }
    let bgens = b
        .cone()
        .elements(b.carrier(), SEARCH_LIMIT)
        .or_else(|| b.cone().generators(b.carrier()))
        .unwrap_or_default();
    for g in bgens {
        let e = Element::pair(x.zero(), g);
        if cone.member(c, &e, s.bound()).is_no() {
            return Verdict::no().with_witness(vec![e]).with_note("section is not monotone");
        }
    }
    let closure = closure_check(s, cone);
    if closure.is_no() {
        return closure.with_note("not closed under the operation");
    }
    if finite.is_some() {
        Verdict::yes()
    } else {
        Verdict::unknown(CROSS_CHECK_RADIUS).with_note("compatibility holds on the sampled grid")
    }
}

/// Exact verdict for a half-plane cone on `(Z, N) × (Z, N)`: lattice points
/// of a convex cone form a submonoid, the kernel and projection conditions
/// hold by construction, and the section is monotone iff `α ≥ 0`.
fn half_plane_compatibility(s: &SemidirectGroup, num: &BigInt, den: &BigInt) -> Option<Verdict> {
    let z = Carrier::integers();
    let standard = s.kernel().carrier() == &z
        && s.quotient().carrier() == &z
        && matches!(s.kernel().cone(), Cone::Orthant)
        && matches!(s.quotient().cone(), Cone::Orthant)
        && s.action().is_trivial()
        && den.is_positive();
    if !standard {
        return None;
    }
    if num.is_negative() {
        return Some(
            Verdict::no()
                .with_witness(vec![Element::pair(Element::int(0), Element::int(1))])
                .with_note("section is not monotone"),
        );
    }
    Some(Verdict::yes())
}

/// Half-plane cones `{(x, b) | b ≥ 0, x + αb ≥ 0}` on `(Z, N) × (Z, N)`.
pub fn half_plane_family(alphas: &[BigRational]) -> Result<(SemidirectGroup, Vec<HalfPlaneCone>)> {
    let z = Carrier::integers();
    let s = SemidirectGroup::new(
        RPGroup::z_natural(),
        RPGroup::z_natural(),
        GroupAction::trivial(z.clone(), z),
        ConePolicy::Prod,
    )?;
    let family = alphas
        .iter()
        .map(|alpha| {
            let cone = Cone::HalfPlane {
                num: alpha.numer().clone(),
                den: alpha.denom().clone(),
            };
            HalfPlaneCone {
                alpha: alpha.clone(),
                compatible: is_compatible_cone(&s, &cone),
                cross_check: sampled_sandwich(&s, &cone).and(closure_check(&s, &cone)),
                cone,
            }
        })
        .collect();
    Ok((s, family))
}

/// `P_prod ⊆ P ⊆ P_lex` on the sampled grid.
fn sampled_sandwich(s: &SemidirectGroup, cone: &Cone) -> Verdict {
    let c = s.carrier();
    for e in c.sample(CROSS_CHECK_RADIUS, CROSS_CHECK_LIMIT) {
        let p = cone.member(c, &e, s.bound());
        if s.prod_member(&e).is_yes() && p.is_no() {
            return Verdict::no().with_witness(vec![e]).with_note("misses an element of the product cone");
        }
        if p.is_yes() && s.lex_member(&e).is_no() {
            return Verdict::no().with_witness(vec![e]).with_note("exceeds the lexicographic cone");
        }
    }
    Verdict::unknown(CROSS_CHECK_RADIUS).with_note("sandwich holds on the sampled grid")
}

/// An element of `Z × Z` in exactly one of two half-plane cones.
pub fn distinguishing_point(a: &BigRational, b: &BigRational) -> Option<Element> {
    if a == b {
        return None;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    // (x, d) with x = -hi * d lies in the `hi` cone only.
    let d = lo.denom() * hi.denom();
    let x = -(hi * BigRational::from_integer(d.clone())).to_integer();
    Some(Element::pair(Element::Vector(vec![x]), Element::Vector(vec![d])))
}

/// Every compatible cone of a finite semidirect product, as index sets of
/// its finite model. The search runs over submonoids between `P_prod` and
/// `P_lex`.
pub fn enumerate_compatible_cones(s: &SemidirectGroup, cap: usize) -> Result<(FiniteModel, Vec<Vec<usize>>)> {
    let model = s.finite_model(cap)?;
    let t = &model.table;
    let n = t.order();
    let lex: Vec<bool> = model.elements.iter().map(|e| s.lex_member(e).is_yes()).collect();
    let prod: Vec<usize> = (0..n).filter(|&i| s.prod_member(&model.elements[i]).is_yes()).collect();
    let start = t.submonoid_closure(&prod);
    if start.iter().any(|&i| !lex[i]) {
        return Ok((model, Vec::new()));
    }
    let mut in_start = vec![false; n];
    for &i in &start {
        in_start[i] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&i| lex[i] && !in_start[i]).collect();
    let mut out = Vec::new();
    let mut excluded = vec![false; n];
    enumerate_rec(t, &lex, &free, 0, in_start, &mut excluded, &mut out)?;
    out.sort_by(|a: &Vec<usize>, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok((model, out))
}

fn enumerate_rec(
    t: &FiniteGroupTable,
    lex: &[bool],
    free: &[usize],
    k: usize,
    current: Vec<bool>,
    excluded: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    if k == free.len() {
        if out.len() >= MAX_ENUMERATED {
            return Err(Error::Resource(format!("more than {MAX_ENUMERATED} compatible cones")));
        }
        out.push((0..current.len()).filter(|&i| current[i]).collect());
        return Ok(());
    }
    let e = free[k];
    if current[e] {
        return enumerate_rec(t, lex, free, k + 1, current, excluded, out);
    }
    excluded[e] = true;
    enumerate_rec(t, lex, free, k + 1, current.clone(), excluded, out)?;
    excluded[e] = false;
    let mut seeds: Vec<usize> = (0..current.len()).filter(|&i| current[i]).collect();
    seeds.push(e);
    let closed = t.submonoid_closure(&seeds);
    if closed.iter().all(|&i| lex[i] && !excluded[i]) {
        let mut next = vec![false; current.len()];
        for i in closed {
            next[i] = true;
        }
        enumerate_rec(t, lex, free, k + 1, next, excluded, out)?;
    }
    Ok(())
}

/// Reference cone for the two-sided obstruction: the kernel cone, or the
/// standard order when the kernel cone is trivial or total.
fn reference_cone(s: &SemidirectGroup) -> Cone {
    let xc = s.kernel().carrier();
    match s.kernel().cone() {
        Cone::Trivial | Cone::Total if matches!(xc, Carrier::Rational) => Cone::Orthant,
        Cone::Trivial | Cone::Total if xc.abelian_group().is_some_and(|g| g.rank() > 0) => Cone::Orthant,
        c => c.clone(),
    }
}

pub fn analyze(s: &SemidirectGroup, cap: usize) -> SplitExtAnalysis {
    let invertible_part = invertible_part(s.quotient());
    let condition_iii = check_condition_iii(s);
    let lex_cross_check = lex_closure_check(s);
    let mut lex_compatible = condition_iii.clone();
    if !lex_compatible.value.is_decided() && lex_cross_check.value.is_decided() && s.carrier().is_finite() {
        lex_compatible = lex_cross_check.clone();
    }
    let prod_compatible = prod_compatible(s);
    let exists_compatible = lex_compatible.clone();

    let reference = reference_cone(s);
    let mut two_sided = Verdict::no();
    if let Some(gens) = s.quotient().carrier().group_generators() {
        for b in gens {
            let v = s.phi_monotone_for(&b, &reference);
            if v.is_no() {
                two_sided = Verdict::yes()
                    .with_witness(v.witness)
                    .with_note(format!("phi is not monotone for the cone {reference}"));
                break;
            }
            if !v.is_yes() {
                two_sided = Verdict::unknown(v.value.bound().unwrap_or(SEARCH_RADIUS));
            }
        }
    } else {
        two_sided = Verdict::unknown(SEARCH_RADIUS);
    }

    let enumerated_cones = if s.carrier().is_finite() {
        enumerate_compatible_cones(s, cap).ok().map(|(_, c)| c)
    } else {
        None
    };
    SplitExtAnalysis {
        condition_iii,
        lex_compatible,
        lex_cross_check,
        prod_compatible,
        exists_compatible,
        invertible_part,
        two_sided_obstruction: two_sided,
        reference_cone: reference.to_string(),
        enumerated_cones,
    }
}

/// A point `(p, s)` with `p ∘ s = 1` is strong when the kernel inclusion of
/// `p` and `s` are jointly strongly epimorphic.
pub fn strong_point_test(p: &Morphism, s: &Morphism) -> Result<Verdict> {
    if s.target().carrier() != p.source().carrier() || p.target().carrier() != s.source().carrier() {
        return Err(Error::validation("section and projection do not compose"));
    }
    let bc = s.source().carrier();
    let probe = bc
        .group_generators()
        .unwrap_or_else(|| bc.sample(SEARCH_RADIUS, SEARCH_LIMIT));
    for b in probe {
        if p.apply(&s.apply(&b)) != b {
            return Err(Error::validation_with("p ∘ s is not the identity", format!("b = {b}")));
        }
    }
    if p.source().carrier().is_finite() {
        let k = kernel(p)?;
        return jointly_strongly_epi(&[k.maps[0].clone(), s.clone()]);
    }
    abelian_strong_point(p, s)
}

/// Abelian case. When `P_B` is pointed, `ker p ∩ P` is a face of `P`, so it
/// is generated by the generators of `P` lying in the kernel.
fn abelian_strong_point(p: &Morphism, s: &Morphism) -> Result<Verdict> {
    let h = abelian_hom(p).ok_or_else(|| Error::unsupported("strong point test needs abelian or finite carriers"))?;
    let e = p.source();
    let inv = invertible_part(p.target());
    let pointed = inv.exact.is_yes() && inv.generators.iter().all(|g| p.target().carrier().is_zero(g));
    let gens = e.cone().generators(e.carrier());
    let (true, Some(gens)) = (pointed, gens) else {
        return Ok(Verdict::unknown(e.bound()).with_note("kernel cone generators not available"));
    };
    let k = h.kernel();
    let kc = Carrier::abelian(k.group.clone());
    let kgens: Vec<Element> = gens
        .iter()
        .filter(|g| p.target().carrier().is_zero(&p.apply(g)))
        .map(|g| Element::Vector(k.coordinates(g.as_vector().expect("vector")).expect("kernel element")))
        .collect();
    let kobj = RPGroup::trusted(kc.clone(), Cone::generated(&kc, &kgens, e.bound())?).with_bound(e.bound());
    let incl = Morphism::trusted(kobj, e.clone(), HomMap::Matrix(k.inclusion.clone()));
    jointly_strongly_epi(&[incl, s.clone()])
}

/// The pullback point over `Y` built from a non-gregarious `b ∈ P_Y`:
/// `Y × ⟨b⟩` with projection `π_2` and section `⟨j, 1⟩`. The point is strong
/// iff `(0, b)` lies in the submonoid generated by `⟨1,0⟩(P_Y)` and
/// `⟨j,1⟩(P_⟨b⟩)`.
pub fn protomodular_counterexample(y: &RPGroup, b: &Element) -> Result<CounterexampleReport> {
    let Carrier::Abelian(yg) = y.carrier() else {
        return Err(Error::unsupported("the construction needs a finitely generated abelian group"));
    };
    y.carrier().check(b)?;
    let b = y.carrier().normalize(b);
    match y.contains(&b) {
        Tri::Yes => {}
        Tri::No => return Err(Error::validation_with("element is not in the cone", b.to_string())),
        Tri::Unknown { .. } => return Err(Error::validation_with("cone membership of the element is undecided", b.to_string())),
    }
    match y.contains(&y.carrier().neg(&b)) {
        Tri::No => {}
        Tri::Yes => {
            return Err(Error::validation_with(
                "element is invertible in the cone, so u + b + v = 0 has a solution",
                b.to_string(),
            ))
        }
        Tri::Unknown { .. } => {
            return Err(Error::validation_with("could not certify that -b lies outside the cone", b.to_string()))
        }
    }
    let py = y
        .cone()
        .generators(y.carrier())
        .ok_or_else(|| Error::unsupported("cone generators are not available"))?;

    // X = <b> is infinite cyclic with the usual order.
    let x = RPGroup::z_natural();
    let prod = product(y, &x)?;
    let e = prod.object.clone();
    let eg = e.carrier().abelian_group().expect("abelian product").clone();
    let d = direct_sum(yg, &FgAbelianGroup::free(1));
    debug_assert_eq!(d.group, *eg);
    let x_one = d.inject[1].apply(&[BigInt::one()]);
    let s_row = eg.add(&d.inject[0].apply(b.as_vector().expect("vector")), &x_one);
    let section = Morphism::trusted(x.clone(), e.clone(), HomMap::Matrix(IntMatrix::from_rows(vec![s_row.clone()], eg.dim())));
    let projection = prod.maps[1].clone();

    let mut gens: Vec<Vec<BigInt>> = py.iter().map(|g| d.inject[0].apply(g.as_vector().expect("vector"))).collect();
    gens.push(s_row);
    let monoid = AffineMonoid::new((*eg).clone(), gens, y.bound())?;
    let membership = monoid.member(&x_one, y.bound()).value;
    let strong = strong_point_test(&projection, &section)?;
    Ok(CounterexampleReport {
        object: e,
        projection,
        section,
        candidate: Element::pair(y.zero(), b),
        membership,
        strong,
    })
}
