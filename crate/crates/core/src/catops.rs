//! Limits, colimits, lifts, factorizations and morphism classification in
//! the category of right-preordered groups and monotone homomorphisms.
//!
//! Algebraically every construction is formed as for groups; the cone of a
//! limit is the largest cone making the limit projections monotone, and the
//! cone of a coequalizer is the image of the target cone.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::abelian::{direct_sum, subgroup, AbelianHom, AffineMonoid, IntMatrix};
use crate::carrier::Carrier;
use crate::cone::Cone;
use crate::element::Element;
use crate::error::{Error, Result};
use crate::finite::FiniteGroupTable;
use crate::group::{RPGroup, SEARCH_LIMIT, SEARCH_RADIUS};
use crate::morphism::{HomMap, Morphism};
use crate::tri::{Tri, Verdict};

/// A limit object with its canonical maps (projections or inclusion).
#[derive(Clone, Debug)]
pub struct Limit {
    pub object: RPGroup,
    pub maps: Vec<Morphism>,
}

/// A coequalizer with the comparison against the monoid-level coequalizer
/// of the restricted cone maps.
#[derive(Clone, Debug)]
pub struct Coequalizer {
    pub object: RPGroup,
    pub projection: Morphism,
    /// Whether the cone of the coequalizer is the coequalizer of the cones.
    pub cone_preserved: Verdict,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct MorphClass {
    pub mono: Verdict,
    pub epi: Verdict,
    pub regular_mono: Verdict,
    pub regular_epi: Verdict,
    pub iso: Verdict,
}

/// `f = m ∘ e` through a middle object.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub e: Morphism,
    pub middle: RPGroup,
    pub m: Morphism,
}

#[derive(Clone, Debug)]
pub struct Factorizations {
    /// Middle `(f(X), P_Y ∩ f(X))`: an epi followed by a regular mono.
    pub epi_regmono: Factorization,
    /// Middle `(f(X), f(P_X))`: a regular epi followed by a mono.
    pub regepi_mono: Factorization,
}

// ---------------------------------------------------------------------------
// Lifts

/// The group with the discrete preorder, `P = {0}`.
pub fn discrete_lift(carrier: &Carrier) -> RPGroup {
    RPGroup::trusted(carrier.clone(), Cone::Trivial)
}

/// The group with the total preorder, `P = X`.
pub fn total_lift(carrier: &Carrier) -> RPGroup {
    RPGroup::trusted(carrier.clone(), Cone::Total)
}

/// Largest cone on `carrier` making every map of the family monotone:
/// `{x | f_i(x) ∈ P_i for all i}`. Source cones of the family are ignored.
pub fn initial_lift(carrier: &Carrier, family: &[Morphism]) -> Result<RPGroup> {
    for f in family {
        if f.source().carrier() != carrier {
            return Err(Error::validation("every map of the family must start at the lifted carrier"));
        }
    }
    if family.is_empty() {
        return Ok(total_lift(carrier));
    }
    let parts: Vec<Cone> = family
        .iter()
        .map(|f| {
            Cone::preimage(
                f.map().clone(),
                carrier.clone(),
                f.target().carrier().clone(),
                f.target().cone().clone(),
            )
        })
        .collect();
    let cone = if parts.len() == 1 {
        parts.into_iter().next().expect("one part")
    } else {
        Cone::Meet(parts)
    };
    Ok(RPGroup::trusted(carrier.clone(), materialize(carrier, cone)))
}

/// Replaces a derived cone by an explicit subset on finite carriers.
fn materialize(carrier: &Carrier, cone: Cone) -> Cone {
    if let Carrier::Finite(t) = carrier {
        let els: Vec<usize> = (0..t.order())
            .filter(|&i| cone.contains(carrier, &Element::Index(i)).is_yes())
            .collect();
        return Cone::subset(carrier, &els).expect("indices are in range");
    }
    cone
}

// ---------------------------------------------------------------------------
// Limits

pub fn product(g: &RPGroup, h: &RPGroup) -> Result<Limit> {
    match (g.carrier(), h.carrier()) {
        (Carrier::Finite(a), Carrier::Finite(b)) => {
            let t = FiniteGroupTable::direct_product(a, b);
            let (na, nb) = (a.order(), b.order());
            let carrier = Carrier::finite(t);
            let p1 = HomMap::Table(Arc::new((0..na * nb).map(|i| i % na).collect()));
            let p2 = HomMap::Table(Arc::new((0..na * nb).map(|i| i / na).collect()));
            let total = total_lift(&carrier);
            let pr1 = Morphism::trusted(total.clone(), g.clone(), p1);
            let pr2 = Morphism::trusted(total, h.clone(), p2);
            let object = initial_lift(&carrier, &[pr1.clone(), pr2.clone()])?;
            Ok(Limit {
                maps: vec![pr1.with_cones(object.clone(), g.clone())?, pr2.with_cones(object.clone(), h.clone())?],
                object,
            })
        }
        (Carrier::Abelian(a), Carrier::Abelian(b)) => {
            let d = direct_sum(a, b);
            let carrier = Carrier::abelian(d.group.clone());
            let cone = match (g.cone(), h.cone()) {
                (Cone::Trivial, Cone::Trivial) => Cone::Trivial,
                (Cone::Total, Cone::Total) => Cone::Total,
                (Cone::Orthant, Cone::Orthant) => Cone::Orthant,
                (cg, ch) => match (cg.generators(g.carrier()), ch.generators(h.carrier())) {
                    (Some(ga), Some(gb)) => {
                        let mut gens: Vec<Element> = ga
                            .iter()
                            .map(|x| Element::Vector(d.inject[0].apply(x.as_vector().expect("vector"))))
                            .collect();
                        gens.extend(gb.iter().map(|x| Element::Vector(d.inject[1].apply(x.as_vector().expect("vector")))));
                        Cone::generated(&carrier, &gens, g.bound().max(h.bound()))?
                    }
                    _ => Cone::Meet(vec![
                        Cone::preimage(HomMap::Matrix(d.project[0].matrix.clone()), carrier.clone(), g.carrier().clone(), cg.clone()),
                        Cone::preimage(HomMap::Matrix(d.project[1].matrix.clone()), carrier.clone(), h.carrier().clone(), ch.clone()),
                    ]),
                },
            };
            let object = RPGroup::trusted(carrier, cone).with_bound(g.bound().max(h.bound()));
            Ok(Limit {
                maps: vec![
                    Morphism::trusted(object.clone(), g.clone(), HomMap::Matrix(d.project[0].matrix.clone())),
                    Morphism::trusted(object.clone(), h.clone(), HomMap::Matrix(d.project[1].matrix.clone())),
                ],
                object,
            })
        }
        (a, b) => {
            let carrier = Carrier::direct(a.clone(), b.clone());
            let object = RPGroup::trusted(carrier, Cone::product(g.cone().clone(), h.cone().clone()));
            Ok(Limit {
                maps: vec![
                    Morphism::trusted(object.clone(), g.clone(), HomMap::ProjectKernel),
                    Morphism::trusted(object.clone(), h.clone(), HomMap::ProjectQuotient),
                ],
                object,
            })
        }
    }
}

/// Coproducts are free products, which are infinite and not supported.
pub fn coproduct(_g: &RPGroup, _h: &RPGroup) -> Result<Limit> {
    Err(Error::unsupported(
        "coproducts are free products of the underlying groups, which are infinite and not representable here; \
         their positive cone would be the submonoid of the free product generated by the two cones",
    ))
}

fn same_parallel(f: &Morphism, g: &Morphism) -> Result<()> {
    if f.source().carrier() != g.source().carrier() || f.target().carrier() != g.target().carrier() {
        return Err(Error::validation("parallel morphisms must share source and target"));
    }
    Ok(())
}

/// Matrix of a homomorphism between abelian carriers.
pub fn abelian_matrix(f: &Morphism) -> Option<IntMatrix> {
    let (s, t) = (f.source().carrier().abelian_group()?, f.target().carrier().abelian_group()?);
    if let HomMap::Matrix(m) = f.map() {
        return Some(m.clone());
    }
    let rows: Vec<Vec<BigInt>> = (0..s.dim())
        .map(|i| f.apply(&Element::Vector(s.unit(i))).as_vector().map(<[BigInt]>::to_vec))
        .collect::<Option<_>>()?;
    Some(IntMatrix::from_rows(rows, t.dim()))
}

pub(crate) fn abelian_hom(f: &Morphism) -> Option<AbelianHom> {
    let m = abelian_matrix(f)?;
    let (s, t) = (f.source().carrier().abelian_group()?, f.target().carrier().abelian_group()?);
    AbelianHom::new((**s).clone(), (**t).clone(), m).ok()
}

/// `{x | f(x) = g(x)}` with the cone pulled back along the inclusion.
pub fn equalizer(f: &Morphism, g: &Morphism) -> Result<Limit> {
    same_parallel(f, g)?;
    let src = f.source();
    match src.carrier() {
        Carrier::Finite(t) => {
            let elems: Vec<usize> = (0..t.order())
                .filter(|&i| f.apply(&Element::Index(i)) == g.apply(&Element::Index(i)))
                .collect();
            let (sub, elems) = t.subgroup_table(&elems)?;
            let carrier = Carrier::finite(sub);
            let incl = Morphism::trusted(total_lift(&carrier), src.clone(), HomMap::Table(Arc::new(elems)));
            let object = initial_lift(&carrier, std::slice::from_ref(&incl))?;
            Ok(Limit {
                maps: vec![incl.with_cones(object.clone(), src.clone())?],
                object,
            })
        }
        Carrier::Abelian(_) => {
            let (hf, hg) = abelian_hom(f)
                .zip(abelian_hom(g))
                .ok_or_else(|| Error::unsupported("equalizers of abelian groups need an abelian target"))?;
            let diff = AbelianHom::new(hf.source.clone(), hf.target.clone(), hf.matrix.sub(&hg.matrix))?;
            let k = diff.kernel();
            let carrier = Carrier::abelian(k.group.clone());
            let incl_map = HomMap::Matrix(k.inclusion.clone());
            let cone = match src.cone() {
                Cone::Trivial => Cone::Trivial,
                Cone::Total => Cone::Total,
                c => Cone::preimage(incl_map.clone(), carrier.clone(), src.carrier().clone(), c.clone()),
            };
            let object = RPGroup::trusted(carrier, cone).with_bound(src.bound());
            Ok(Limit {
                maps: vec![Morphism::trusted(object.clone(), src.clone(), incl_map)],
                object,
            })
        }
        _ => Err(Error::unsupported("equalizers need a finite or finitely generated abelian source")),
    }
}

pub fn kernel(f: &Morphism) -> Result<Limit> {
    equalizer(f, &Morphism::zero(f.source(), f.target()))
}

/// Pullback of `f: X -> Z` and `g: Y -> Z`, with projections to `X` and `Y`.
pub fn pullback(f: &Morphism, g: &Morphism) -> Result<Limit> {
    if f.target().carrier() != g.target().carrier() {
        return Err(Error::validation("pullback needs a common target"));
    }
    let prod = product(f.source(), g.source())?;
    let a = prod.maps[0].then(f)?;
    let b = prod.maps[1].then(g)?;
    let eq = equalizer(&a, &b)?;
    let incl = &eq.maps[0];
    Ok(Limit {
        maps: vec![incl.then(&prod.maps[0])?, incl.then(&prod.maps[1])?],
        object: eq.object,
    })
}

// ---------------------------------------------------------------------------
// Colimits

/// Quotient of the target by the normal subgroup generated by `f(x) - g(x)`,
/// with the image of the target cone.
pub fn coequalizer(f: &Morphism, g: &Morphism) -> Result<Coequalizer> {
    same_parallel(f, g)?;
    let tgt = f.target();
    match tgt.carrier() {
        Carrier::Finite(t) => finite_coequalizer(f, g, t),
        Carrier::Abelian(_) => abelian_coequalizer(f, g),
        _ => Err(Error::unsupported("coequalizers need a finite or finitely generated abelian target")),
    }
}

pub fn cokernel(f: &Morphism) -> Result<Coequalizer> {
    coequalizer(f, &Morphism::zero(f.source(), f.target()))
}

fn finite_coequalizer(f: &Morphism, g: &Morphism, t: &FiniteGroupTable) -> Result<Coequalizer> {
    let src = f.source();
    let tgt = f.target();
    let xs = src
        .carrier()
        .group_generators()
        .ok_or_else(|| Error::unsupported("source group has no finite generating set"))?;
    let diffs: Vec<usize> = xs
        .iter()
        .map(|x| {
            let d = tgt.carrier().sub(&f.apply(x), &g.apply(x));
            d.as_index().expect("finite element")
        })
        .collect();
    let normal = t.conjugation_closure(&diffs);
    let (q, coset) = t.quotient(&normal)?;
    let carrier = Carrier::finite(q);
    let p_y = tgt.cone_indices().expect("finite target");
    let image: BTreeSet<usize> = p_y.iter().map(|&y| coset[y]).collect();
    let object = RPGroup::trusted(carrier.clone(), Cone::subset(&carrier, &image.into_iter().collect::<Vec<_>>())?);
    let projection = Morphism::trusted(tgt.clone(), object.clone(), HomMap::Table(Arc::new(coset.clone())));

    // Monoid-level coequalizer of the restricted maps P_X -> P_Y.
    let p_x: Vec<Element> = match src.cone().elements(src.carrier(), SEARCH_LIMIT) {
        Some(e) => e,
        None => {
            return Ok(Coequalizer {
                object,
                projection,
                cone_preserved: Verdict::unknown(src.bound()).with_note("source cone is not finite"),
                note: None,
            })
        }
    };
    let pairs: Vec<(usize, usize)> = p_x
        .iter()
        .map(|x| {
            (
                f.apply(x).as_index().expect("finite element"),
                g.apply(x).as_index().expect("finite element"),
            )
        })
        .collect();
    let classes = monoid_congruence(t, &p_y, &pairs);
    for (i, &a) in p_y.iter().enumerate() {
        for (j, &b) in p_y.iter().enumerate().skip(i + 1) {
            if coset[a] == coset[b] && classes[i] != classes[j] {
                return Ok(Coequalizer {
                    object,
                    projection,
                    cone_preserved: Verdict::no().with_witness(vec![Element::Index(a), Element::Index(b)]),
                    note: Some(format!(
                        "cone elements {} and {} are identified in the coequalizer but not in the monoid coequalizer of the cones",
                        t.label(a),
                        t.label(b)
                    )),
                });
            }
        }
    }
    Ok(Coequalizer {
        object,
        projection,
        cone_preserved: Verdict::yes(),
        note: None,
    })
}

/// Classes (by position in `m`) of the least monoid congruence on the
/// submonoid `m` identifying each pair.
fn monoid_congruence(t: &FiniteGroupTable, m: &[usize], pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut pos = vec![usize::MAX; t.order()];
    for (i, &e) in m.iter().enumerate() {
        pos[e] = i;
    }
    let mut parent: Vec<usize> = (0..m.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let n = p[y];
            p[y] = r;
            y = n;
        }
        r
    }
    let mut queue: Vec<(usize, usize)> = pairs.iter().map(|&(a, b)| (pos[a], pos[b])).collect();
    while let Some((a, b)) = queue.pop() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            continue;
        }
        parent[ra] = rb;
        for &c in m {
            queue.push((pos[t.op(m[a], c)], pos[t.op(m[b], c)]));
            queue.push((pos[t.op(c, m[a])], pos[t.op(c, m[b])]));
        }
    }
    (0..m.len()).map(|i| find(&mut parent, i)).collect()
}

fn abelian_coequalizer(f: &Morphism, g: &Morphism) -> Result<Coequalizer> {
    let src = f.source();
    let tgt = f.target();
    let yg = tgt.carrier().abelian_group().expect("abelian target").clone();
    let xs = src
        .carrier()
        .group_generators()
        .ok_or_else(|| Error::unsupported("source group has no finite generating set"))?;
    let diffs: Vec<Vec<BigInt>> = xs
        .iter()
        .map(|x| {
            tgt.carrier()
                .sub(&f.apply(x), &g.apply(x))
                .as_vector()
                .expect("abelian element")
                .to_vec()
        })
        .collect();
    let (pres, proj) = crate::abelian::quotient(&yg, &diffs);
    let carrier = Carrier::abelian(pres.group.clone());
    let cone = match tgt.cone() {
        Cone::Trivial => Cone::Trivial,
        Cone::Total => Cone::Total,
        c => {
            let gens = c.generators(tgt.carrier()).ok_or_else(|| {
                Error::unsupported("the image of this cone has no finite generating set available")
            })?;
            let imgs: Vec<Element> = gens
                .iter()
                .map(|y| Element::Vector(proj.apply(y.as_vector().expect("vector"))))
                .collect();
            Cone::generated(&carrier, &imgs, tgt.bound())?
        }
    };
    let object = RPGroup::trusted(carrier, cone).with_bound(tgt.bound());
    let projection = Morphism::trusted(tgt.clone(), object.clone(), HomMap::Matrix(proj.matrix.clone()));

    // The monoid congruence is trivial when f and g agree on the source cone;
    // then the monoid coequalizer is the identity on P_Y and preservation
    // means the projection is injective on P_Y.
    let Some(cone_gens) = src.cone().generators(src.carrier()) else {
        return Ok(Coequalizer {
            object,
            projection,
            cone_preserved: Verdict::unknown(src.bound()).with_note("source cone has no generators available"),
            note: None,
        });
    };
    if cone_gens.iter().any(|x| f.apply(x) != g.apply(x)) {
        return Ok(Coequalizer {
            object,
            projection,
            cone_preserved: Verdict::unknown(src.bound())
                .with_note("maps differ on the source cone; monoid congruence not computed"),
            note: None,
        });
    }
    let Some(y_gens) = tgt.cone().generators(tgt.carrier()) else {
        return Ok(Coequalizer {
            object,
            projection,
            cone_preserved: Verdict::unknown(tgt.bound()).with_note("target cone has no generators available"),
            note: None,
        });
    };
    let y_rows: Vec<Vec<BigInt>> = y_gens.iter().map(|e| e.as_vector().expect("vector").to_vec()).collect();
    match lattice_meet_witness(&yg, &y_rows, &diffs) {
        Some(c) => {
            let mut a = yg.zero();
            let mut b = yg.zero();
            for (ci, row) in c.iter().zip(&y_rows) {
                if ci.is_positive() {
                    a = yg.add(&a, &yg.scale(ci, row));
                } else if ci.is_negative() {
                    b = yg.add(&b, &yg.scale(&-ci, row));
                }
            }
            let (a, b) = (Element::Vector(a), Element::Vector(b));
            Ok(Coequalizer {
                note: Some(format!(
                    "the monoid coequalizer of the cone maps is the identity on the target cone, \
                     but the cone elements {a} and {b} are identified in the coequalizer"
                )),
                object,
                projection,
                cone_preserved: Verdict::no().with_witness(vec![a, b]),
            })
        }
        None => Ok(Coequalizer {
            object,
            projection,
            cone_preserved: Verdict::yes(),
            note: None,
        }),
    }
}

/// Coefficients `c` over `a_rows` with `Σ c_i a_i` a nonzero element of the
/// subgroup generated by `l_rows`, if such an element exists.
fn lattice_meet_witness(
    g: &crate::abelian::FgAbelianGroup,
    a_rows: &[Vec<BigInt>],
    l_rows: &[Vec<BigInt>],
) -> Option<Vec<BigInt>> {
    let n = g.dim();
    let a = IntMatrix::from_rows(a_rows.to_vec(), n);
    let l = IntMatrix::from_rows(l_rows.iter().map(|r| r.iter().map(|c| -c).collect()).collect(), n);
    let stacked = a.vstack(&l).vstack(&g.relation_matrix());
    let k = crate::abelian::left_kernel(&stacked);
    for i in 0..k.rows() {
        let c = k.row(i)[..a_rows.len()].to_vec();
        let v = g.normalize(&a.apply(&c));
        if v.iter().any(|x| !x.is_zero()) {
            return Some(c);
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Classification

fn injectivity(f: &Morphism) -> Verdict {
    let (sc, tc) = (f.source().carrier(), f.target().carrier());
    if let (Some(t), Some(_)) = (sc.as_finite(), tc.as_finite()) {
        return match (1..t.order()).find(|&i| tc.is_zero(&f.apply(&Element::Index(i)))) {
            Some(i) => Verdict::no().with_witness(vec![Element::Index(i)]),
            None => Verdict::yes(),
        };
    }
    if let Some(h) = abelian_hom(f) {
        let k = h.kernel();
        return match (0..k.group.dim()).map(|i| k.include(&k.group.unit(i))).next() {
            Some(x) => Verdict::no().with_witness(vec![Element::Vector(x)]),
            None => Verdict::yes(),
        };
    }
    match f.map() {
        HomMap::Identity | HomMap::InjectKernel | HomMap::InjectQuotient => return Verdict::yes(),
        HomMap::Scalar(q) => {
            return if q.is_zero() {
                Verdict::no().with_witness(vec![rational(1)])
            } else {
                Verdict::yes()
            }
        }
        _ => {}
    }
    for x in sc.sample(SEARCH_RADIUS, SEARCH_LIMIT) {
        if !sc.is_zero(&x) && tc.is_zero(&f.apply(&x)) {
            return Verdict::no().with_witness(vec![x]);
        }
    }
    Verdict::unknown(SEARCH_RADIUS).with_note("no kernel element in the sampled box")
}

fn surjectivity(f: &Morphism) -> Verdict {
    let (sc, tc) = (f.source().carrier(), f.target().carrier());
    if let (Some(s), Some(t)) = (sc.as_finite(), tc.as_finite()) {
        let mut hit = vec![false; t.order()];
        for i in 0..s.order() {
            hit[f.apply(&Element::Index(i)).as_index().expect("finite element")] = true;
        }
        return match hit.iter().position(|h| !h) {
            Some(y) => Verdict::no().with_witness(vec![Element::Index(y)]),
            None => Verdict::yes(),
        };
    }
    if let Some(h) = abelian_hom(f) {
        return match h.image().missing_generator() {
            Some(y) => Verdict::no().with_witness(vec![Element::Vector(y)]),
            None => Verdict::yes(),
        };
    }
    match (f.map(), sc) {
        (HomMap::Identity | HomMap::ProjectKernel | HomMap::ProjectQuotient, _) => Verdict::yes(),
        (HomMap::Scalar(q), Carrier::Rational) => {
            if q.is_zero() {
                Verdict::no().with_witness(vec![rational(1)])
            } else {
                Verdict::yes()
            }
        }
        (HomMap::Scalar(q), _) => {
            let half = if q.is_zero() { rational(1) } else { Element::Rational(q / BigRational::from_integer(2.into())) };
            Verdict::no().with_witness(vec![half])
        }
        _ => Verdict::unknown(SEARCH_RADIUS).with_note("surjectivity not decidable for this map"),
    }
}

fn rational(n: i64) -> Element {
    Element::Rational(BigRational::from_integer(n.into()))
}

/// Sign pattern of a builtin cone on `Q`: which of `0, +, -` it contains.
fn q_signs(c: &Cone) -> Option<[bool; 3]> {
    match c {
        Cone::Trivial => Some([true, false, false]),
        Cone::Orthant => Some([true, true, false]),
        Cone::Total => Some([true, true, true]),
        _ => None,
    }
}

/// `P_Y ⊆ f(P_X)`; together with monotonicity this is `f(P_X) = P_Y`.
fn cone_surjectivity(f: &Morphism) -> Verdict {
    let (src, tgt) = (f.source(), f.target());
    let (sc, tc) = (src.carrier(), tgt.carrier());
    if let (Some(px), Some(py)) = (src.cone().elements(sc, SEARCH_LIMIT), tgt.cone().elements(tc, SEARCH_LIMIT)) {
        let img: BTreeSet<Element> = px.iter().map(|x| f.apply(x)).collect();
        return match py.into_iter().find(|y| !img.contains(y)) {
            Some(y) => Verdict::no().with_witness(vec![y]),
            None => Verdict::yes(),
        };
    }
    if let (Some(yg), Some(py_gens)) = (tc.abelian_group(), tgt.cone().generators(tc)) {
        if let Some(px_gens) = src.cone().generators(sc) {
            let imgs: Vec<Vec<BigInt>> = px_gens
                .iter()
                .map(|x| f.apply(x).as_vector().expect("vector").to_vec())
                .collect();
            let m = AffineMonoid::new((**yg).clone(), imgs, tgt.bound()).expect("images lie in the target");
            let mut acc = Verdict::yes();
            for y in py_gens {
                match m.member(y.as_vector().expect("vector"), tgt.bound()).value {
                    Tri::No => return Verdict::no().with_witness(vec![y]),
                    Tri::Yes => {}
                    u => acc = acc.and(Verdict::new(u)),
                }
            }
            return acc;
        }
    }
    if let (HomMap::Scalar(q), Carrier::Rational) = (f.map(), sc) {
        if let (Some(a), Some(b)) = (q_signs(src.cone()), q_signs(tgt.cone())) {
            let mut img = [a[0], false, false];
            if !q.is_zero() {
                let flip = q.is_negative();
                img[1] = if flip { a[2] } else { a[1] };
                img[2] = if flip { a[1] } else { a[2] };
            }
            let witness = [rational(0), rational(1), rational(-1)];
            return match (0..3).find(|&i| b[i] && !img[i]) {
                Some(i) => Verdict::no().with_witness(vec![witness[i].clone()]),
                None => Verdict::yes(),
            };
        }
    }
    Verdict::unknown(tgt.bound()).with_note("cone image not computable for this map")
}

/// `f^{-1}(P_Y) ⊆ P_X`.
fn cone_reflection(f: &Morphism) -> Verdict {
    let (src, tgt) = (f.source(), f.target());
    let (sc, tc) = (src.carrier(), tgt.carrier());
    if matches!(src.cone(), Cone::Total) {
        return Verdict::yes();
    }
    let violates = |x: &Element| src.contains(x).is_no() && tgt.contains(&f.apply(x)).is_yes();
    if let Some(all) = sc.elements(SEARCH_LIMIT) {
        let mut acc = Verdict::yes();
        for x in all {
            if violates(&x) {
                return Verdict::no().with_witness(vec![x]);
            }
            if src.contains(&x).is_unknown() || tgt.contains(&f.apply(&x)).is_unknown() {
                acc = acc.and(Verdict::unknown(src.bound()));
            }
        }
        return acc;
    }
    if let (HomMap::Scalar(q), Carrier::Rational) = (f.map(), sc) {
        if let (Some(a), Some(b)) = (q_signs(src.cone()), q_signs(tgt.cone())) {
            let pre = [b[0], if q.is_negative() { b[2] } else { b[1] }, if q.is_negative() { b[1] } else { b[2] }];
            let pre = if q.is_zero() { [b[0]; 3] } else { pre };
            let witness = [rational(0), rational(1), rational(-1)];
            return match (0..3).find(|&i| pre[i] && !a[i]) {
                Some(i) => Verdict::no().with_witness(vec![witness[i].clone()]),
                None => Verdict::yes(),
            };
        }
    }
    if let Some(h) = abelian_hom(f) {
        if h.is_injective() && matches!(tgt.cone(), Cone::Trivial) {
            return Verdict::yes();
        }
        if let (Some(inv), Some(gens)) = (h.inverse(), tgt.cone().generators(tc)) {
            let mut acc = Verdict::yes();
            for y in gens {
                let x = Element::Vector(inv.apply(y.as_vector().expect("vector")));
                match src.contains(&x) {
                    Tri::No => return Verdict::no().with_witness(vec![x]),
                    Tri::Yes => {}
                    u => acc = acc.and(Verdict::new(u)),
                }
            }
            return acc;
        }
    }
    for x in sc.sample(SEARCH_RADIUS, SEARCH_LIMIT) {
        if violates(&x) {
            return Verdict::no().with_witness(vec![x]);
        }
    }
    Verdict::unknown(SEARCH_RADIUS).with_note("no counterexample in the sampled box")
}

/// Classification by the characterizations: monos are injective, epis
/// surjective; `f` is a regular epi iff `f` and its cone restriction are
/// surjective, a regular mono iff injective with `P_X = f^{-1}(P_Y)`.
pub fn classify(f: &Morphism) -> MorphClass {
    let mono = injectivity(f);
    let epi = surjectivity(f);
    let regular_epi = epi.clone().and(cone_surjectivity(f));
    let iso = mono.clone().and(regular_epi.clone());
    let mut regular_mono = mono.clone().and(cone_reflection(f));
    if iso.is_yes() {
        regular_mono = Verdict::yes();
    }
    MorphClass {
        mono,
        epi,
        regular_mono,
        regular_epi,
        iso,
    }
}

// ---------------------------------------------------------------------------
// Factorizations

pub fn factorize(f: &Morphism) -> Result<Factorizations> {
    let (src, tgt) = (f.source(), f.target());
    match (src.carrier(), tgt.carrier()) {
        (Carrier::Finite(s), Carrier::Finite(t)) => {
            let image: Vec<usize> = (0..s.order())
                .map(|i| f.apply(&Element::Index(i)).as_index().expect("finite element"))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let (sub, elems) = t.subgroup_table(&image)?;
            let mut pos = vec![usize::MAX; t.order()];
            for (i, &e) in elems.iter().enumerate() {
                pos[e] = i;
            }
            let carrier = Carrier::finite(sub);
            let e_map = HomMap::Table(Arc::new(
                (0..s.order())
                    .map(|i| pos[f.apply(&Element::Index(i)).as_index().expect("finite element")])
                    .collect(),
            ));
            let m_map = HomMap::Table(Arc::new(elems.clone()));
            let meet: Vec<usize> = (0..elems.len())
                .filter(|&i| tgt.contains(&Element::Index(elems[i])).is_yes())
                .collect();
            let img: BTreeSet<usize> = src
                .cone_indices()
                .expect("finite source")
                .iter()
                .map(|&x| pos[f.apply(&Element::Index(x)).as_index().expect("finite element")])
                .collect();
            let mid1 = RPGroup::trusted(carrier.clone(), Cone::subset(&carrier, &meet)?);
            let mid2 = RPGroup::trusted(carrier.clone(), Cone::subset(&carrier, &img.into_iter().collect::<Vec<_>>())?);
            Ok(Factorizations {
                epi_regmono: Factorization {
                    e: Morphism::trusted(src.clone(), mid1.clone(), e_map.clone()),
                    m: Morphism::trusted(mid1.clone(), tgt.clone(), m_map.clone()),
                    middle: mid1,
                },
                regepi_mono: Factorization {
                    e: Morphism::trusted(src.clone(), mid2.clone(), e_map),
                    m: Morphism::trusted(mid2.clone(), tgt.clone(), m_map),
                    middle: mid2,
                },
            })
        }
        (Carrier::Abelian(_), Carrier::Abelian(yg)) => {
            let h = abelian_hom(f).ok_or_else(|| Error::unsupported("map has no matrix"))?;
            let img = h.image();
            let carrier = Carrier::abelian(img.group.clone());
            let rows: Vec<Vec<BigInt>> = h
                .generator_images()
                .iter()
                .map(|y| img.coordinates(y).expect("image element lies in the image"))
                .collect();
            let e_map = HomMap::Matrix(IntMatrix::from_rows(rows, img.group.dim()));
            let m_map = HomMap::Matrix(img.inclusion.clone());
            let cone1 = match tgt.cone() {
                Cone::Trivial => Cone::Trivial,
                Cone::Total => Cone::Total,
                c => Cone::preimage(m_map.clone(), carrier.clone(), Carrier::Abelian(yg.clone()), c.clone()),
            };
            let cone2 = match src.cone() {
                Cone::Trivial => Cone::Trivial,
                Cone::Total => Cone::Total,
                c => {
                    let gens = c.generators(src.carrier()).ok_or_else(|| {
                        Error::unsupported("the image of this cone has no finite generating set available")
                    })?;
                    let imgs: Vec<Element> = gens
                        .iter()
                        .map(|x| e_map.apply(src.carrier(), &carrier, x))
                        .collect();
                    Cone::generated(&carrier, &imgs, src.bound())?
                }
            };
            let mid1 = RPGroup::trusted(carrier.clone(), cone1).with_bound(tgt.bound());
            let mid2 = RPGroup::trusted(carrier, cone2).with_bound(src.bound());
            Ok(Factorizations {
                epi_regmono: Factorization {
                    e: Morphism::trusted(src.clone(), mid1.clone(), e_map.clone()),
                    m: Morphism::trusted(mid1.clone(), tgt.clone(), m_map.clone()),
                    middle: mid1,
                },
                regepi_mono: Factorization {
                    e: Morphism::trusted(src.clone(), mid2.clone(), e_map),
                    m: Morphism::trusted(mid2.clone(), tgt.clone(), m_map),
                    middle: mid2,
                },
            })
        }
        _ => Err(Error::unsupported("factorizations need finite or finitely generated abelian carriers")),
    }
}

// ---------------------------------------------------------------------------
// Jointly strongly epimorphic families

/// A family into a common target is jointly strongly epimorphic iff the
/// images generate the target group and the cone images generate the
/// target cone as a monoid.
pub fn jointly_strongly_epi(family: &[Morphism]) -> Result<Verdict> {
    let Some(first) = family.first() else {
        return Err(Error::validation("the family must contain at least one morphism"));
    };
    let tgt = first.target();
    if family.iter().any(|f| f.target().carrier() != tgt.carrier()) {
        return Err(Error::validation("all morphisms of the family must share the target"));
    }
    match tgt.carrier() {
        Carrier::Finite(t) => {
            let mut imgs = Vec::new();
            let mut cone_imgs = Vec::new();
            for f in family {
                let sc = f.source().carrier();
                let gens = sc
                    .group_generators()
                    .ok_or_else(|| Error::unsupported("source group has no finite generating set"))?;
                imgs.extend(gens.iter().map(|x| f.apply(x).as_index().expect("finite element")));
                let cg = f
                    .source()
                    .cone()
                    .generators(sc)
                    .ok_or_else(|| Error::unsupported("source cone has no generators available"))?;
                cone_imgs.extend(cg.iter().map(|x| f.apply(x).as_index().expect("finite element")));
            }
            let span = t.submonoid_closure(&imgs);
            if span.len() != t.order() {
                let missing = (0..t.order()).find(|x| span.binary_search(x).is_err()).expect("missing element");
                return Ok(Verdict::no()
                    .with_witness(vec![Element::Index(missing)])
                    .with_note("images do not generate the target group"));
            }
            let cone_span = t.submonoid_closure(&cone_imgs);
            let p_y = tgt.cone_indices().expect("finite target");
            match p_y.iter().find(|y| cone_span.binary_search(y).is_err()) {
                Some(&y) => Ok(Verdict::no()
                    .with_witness(vec![Element::Index(y)])
                    .with_note("cone images do not generate the target cone")),
                None => Ok(Verdict::yes()),
            }
        }
        Carrier::Abelian(yg) => {
            let mut imgs = Vec::new();
            let mut cone_imgs = Vec::new();
            for f in family {
                let sc = f.source().carrier();
                let gens = sc
                    .group_generators()
                    .ok_or_else(|| Error::unsupported("source group has no finite generating set"))?;
                imgs.extend(gens.iter().map(|x| f.apply(x).as_vector().expect("vector").to_vec()));
                let cg = f
                    .source()
                    .cone()
                    .generators(sc)
                    .ok_or_else(|| Error::unsupported("source cone has no generators available"))?;
                cone_imgs.extend(cg.iter().map(|x| f.apply(x).as_vector().expect("vector").to_vec()));
            }
            if let Some(y) = subgroup(yg, &imgs).missing_generator() {
                return Ok(Verdict::no()
                    .with_witness(vec![Element::Vector(y)])
                    .with_note("images do not generate the target group"));
            }
            let py = tgt
                .cone()
                .generators(tgt.carrier())
                .ok_or_else(|| Error::unsupported("target cone has no generators available"))?;
            let m = AffineMonoid::new((**yg).clone(), cone_imgs, tgt.bound()).expect("images lie in the target");
            let mut acc = Verdict::yes();
            for y in py {
                match m.member(y.as_vector().expect("vector"), tgt.bound()).value {
                    Tri::No => {
                        return Ok(Verdict::no()
                            .with_witness(vec![y])
                            .with_note("cone images do not generate the target cone"))
                    }
                    Tri::Yes => {}
                    u => acc = acc.and(Verdict::new(u)),
                }
            }
            Ok(acc)
        }
        _ => Err(Error::unsupported("joint strong epimorphy needs a finite or finitely generated abelian target")),
    }
}

// ---------------------------------------------------------------------------
// Reflection to two-sided preordered groups

/// Replaces the cone by the least conjugation-closed submonoid containing
/// it; the unit is the identity on elements.
pub fn reflect_to_ordgrp(g: &RPGroup) -> Result<(RPGroup, Morphism)> {
    let reflected = match g.carrier() {
        Carrier::Finite(t) => {
            let cone = g.cone_indices().expect("finite carrier");
            let closed = t.conjugation_closure(&cone);
            RPGroup::trusted(g.carrier().clone(), Cone::subset(g.carrier(), &closed)?)
        }
        c if c.is_abelian() => g.clone(),
        _ => return Err(Error::unsupported("conjugation closure needs a finite or abelian carrier")),
    };
    let unit = Morphism::trusted(g.clone(), reflected.clone(), HomMap::Identity);
    Ok((reflected, unit))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmat(k: i64) -> HomMap {
        HomMap::Matrix(IntMatrix::from_i64(&[&[k]]))
    }

    #[test]
    fn paper_coequalizer() {
        let x = RPGroup::z_trivial();
        let y = RPGroup::z_natural();
        let f = Morphism::new(x.clone(), y.clone(), zmat(1)).unwrap();
        let g = Morphism::new(x, y, zmat(2)).unwrap();
        let c = coequalizer(&f, &g).unwrap();
        assert!(c.object.carrier().order() == Some(1));
        assert!(c.cone_preserved.is_no());
    }

    #[test]
    fn coequalizer_mod_three() {
        let z = RPGroup::z_natural();
        let f = Morphism::new(RPGroup::z_trivial(), z.clone(), zmat(0)).unwrap();
        let g = Morphism::new(RPGroup::z_trivial(), z, zmat(3)).unwrap();
        let c = coequalizer(&f, &g).unwrap();
        assert_eq!(c.object.carrier().order(), Some(3));
        assert!(c.object.is_group_cone().is_yes());
        assert_eq!(c.object.contains(&Element::int(2)), Tri::Yes);
    }

    #[test]
    fn identity_into_natural_is_not_regular_mono() {
        let f = Morphism::new(RPGroup::z_trivial(), RPGroup::z_natural(), HomMap::Identity).unwrap();
        let c = classify(&f);
        assert!(c.mono.is_yes());
        assert!(c.epi.is_yes());
        assert!(c.regular_mono.is_no());
        assert_eq!(c.regular_mono.witness, vec![Element::int(1)]);
        assert!(c.iso.is_no());
        let id = classify(&Morphism::identity(&RPGroup::z_natural()));
        for v in [id.mono, id.epi, id.regular_mono, id.regular_epi, id.iso] {
            assert!(v.is_yes());
        }
    }

    #[test]
    fn mod_two_projection_is_regular_epi() {
        let z2 = RPGroup::abelian(crate::abelian::FgAbelianGroup::cyclic(2), Cone::Total).unwrap();
        let f = Morphism::new(RPGroup::z_natural(), z2, zmat(1)).unwrap();
        assert!(classify(&f).regular_epi.is_yes());
    }

    #[test]
    fn kernel_of_mod_two() {
        let z2 = RPGroup::abelian(crate::abelian::FgAbelianGroup::cyclic(2), Cone::Total).unwrap();
        let f = Morphism::new(RPGroup::z_natural(), z2, zmat(1)).unwrap();
        let k = kernel(&f).unwrap();
        let incl = &k.maps[0];
        let one = incl.apply(&Element::int(1));
        assert_eq!(one.as_vector().unwrap()[0].abs(), BigInt::from(2));
        assert_eq!(k.object.contains(&Element::int(1)), Tri::from_bool(one == Element::int(2)));
    }

    #[test]
    fn initial_lift_of_id_and_negation() {
        let z = Carrier::integers();
        let n = RPGroup::z_natural();
        let id = Morphism::new(total_lift(&z), n.clone(), HomMap::Identity).unwrap();
        let neg = Morphism::new(total_lift(&z), n, zmat(-1)).unwrap();
        let g = initial_lift(&z, &[id, neg]).unwrap();
        assert_eq!(g.contains(&Element::int(0)), Tri::Yes);
        assert_eq!(g.contains(&Element::int(1)), Tri::No);
        assert_eq!(g.contains(&Element::int(-1)), Tri::No);
        assert!(initial_lift(&z, &[]).unwrap().is_group_cone().is_yes());
    }

    #[test]
    fn coproduct_is_rejected() {
        let e = coproduct(&RPGroup::z_natural(), &RPGroup::z_natural()).unwrap_err();
        assert!(matches!(e, Error::Unsupported(_)));
    }
}
