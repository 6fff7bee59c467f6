//! The bundled example scenarios with their expected outcomes.

use std::sync::Arc;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use rpgroup::catops::{classify, coequalizer, product};
use rpgroup::finite::FiniteGroupTable;
use rpgroup::morphism::HomMap;
use rpgroup::splitext::{analyze, distinguishing_point, half_plane_family, protomodular_counterexample, strong_point_test};
use rpgroup::{Element, Morphism, RPGroup, Tri, Verdict};

use crate::error::CliResult;
use crate::report::Report;

/// Number of random finite points checked by the seeded scenario.
pub const RANDOM_POINTS: usize = 12;

fn scenario(r: &mut Report, name: &str, pass: bool, evidence: &Verdict, expectation: &str) {
    let v = if pass { Verdict::yes() } else { Verdict::no() };
    let v = v.with_witness(evidence.witness.clone()).with_note(expectation.to_string());
    if !pass {
        r.failed = true;
    }
    r.verdict(name, &v);
}

fn first_witness_is(v: &Verdict, e: &Element) -> bool {
    v.witness.first() == Some(e)
}

pub fn paper_examples(ws: &crate::workspace::Workspace, seed: u64) -> CliResult<Report> {
    let mut r = Report::new("paper-examples");
    r.input("seed", seed);
    let one = Element::int(1);

    let c = coequalizer(ws.morphism("coeq_f")?, ws.morphism("coeq_g")?)?;
    let trivial = c.object.carrier().order() == Some(1) && c.object.contains(&c.object.carrier().zero()).is_yes();
    scenario(&mut r, "coequalizer.trivial", trivial, &Verdict::yes(), "coequalizer of 1, 2: (Z, {0}) => (Z, N) is the trivial group with cone {0}");
    scenario(
        &mut r,
        "coequalizer.mismatch_flagged",
        c.cone_preserved.is_no(),
        &c.cone_preserved,
        "the monoid coequalizer is the identity on N, so the cone is not preserved",
    );

    let k = classify(ws.morphism("id_Z0_ZN")?);
    scenario(
        &mut r,
        "classify.identity",
        k.mono.is_yes() && k.epi.is_yes() && k.regular_mono.is_no() && k.iso.is_no(),
        &k.regular_mono,
        "id: (Z, {0}) -> (Z, N) is mono and epi, not regular mono, not iso",
    );

    let zn = ws.group("ZN")?.is_group_cone();
    let zz = ws.group("ZZ")?.is_group_cone();
    let z2 = ws.group("Z2")?.is_group_cone();
    scenario(&mut r, "object.ZN", zn.is_no(), &zn, "(Z, N) is not protomodular");
    scenario(&mut r, "object.ZZ", zz.is_yes(), &zz, "(Z, Z) is protomodular");
    scenario(&mut r, "object.finite", z2.is_yes(), &z2, "finite right-preordered groups are protomodular");

    let rep = protomodular_counterexample(ws.group("ZN")?, &one)?;
    scenario(
        &mut r,
        "counterexample.ZN",
        rep.membership == Tri::No && rep.strong.is_no(),
        &rep.strong,
        "(0, 1) is outside the generated cone, so the point is not strong",
    );

    let a = analyze(ws.split("E2a")?, 24);
    scenario(
        &mut r,
        "splitext.E2a",
        a.exists_compatible.is_no() && first_witness_is(&a.exists_compatible, &one),
        &a.exists_compatible,
        "sign action with P = N: no compatible cone, witness b = 1",
    );
    let a = analyze(ws.split("E2b")?, 24);
    scenario(
        &mut r,
        "splitext.E2b",
        a.prod_compatible.is_yes() && a.lex_compatible.is_yes(),
        &a.lex_compatible,
        "sign action with P = {0}: the product cone and the lexicographic cone are compatible",
    );
    scenario(
        &mut r,
        "splitext.E2b.two_sided",
        a.two_sided_obstruction.is_yes() && first_witness_is(&a.two_sided_obstruction, &one),
        &a.two_sided_obstruction,
        "phi_1 is not monotone on N, so no two-sided compatible preorder exists",
    );
    let a = analyze(ws.split("E3neg")?, 24);
    scenario(
        &mut r,
        "splitext.E3neg",
        a.lex_compatible.is_yes() && a.prod_compatible.is_no() && first_witness_is(&a.prod_compatible, &one),
        &a.prod_compatible,
        "q = -2: lexicographic cone compatible, phi_1 not monotone",
    );
    let a = analyze(ws.split("E3half")?, 24);
    scenario(
        &mut r,
        "splitext.E3half",
        a.lex_compatible.is_yes() && a.prod_compatible.is_yes(),
        &a.prod_compatible,
        "q = 1/2: lexicographic and product cones compatible",
    );

    let alphas: Vec<BigRational> = [(0, 1), (1, 2), (1, 1), (2, 1), (7, 3)]
        .iter()
        .map(|&(n, d)| BigRational::new(n.into(), d.into()))
        .collect();
    let (s, fam) = half_plane_family(&alphas)?;
    let all_compatible = fam.iter().all(|h| h.compatible.is_yes() && !h.cross_check.is_no());
    let mut distinct = true;
    for (i, a) in fam.iter().enumerate() {
        for b in &fam[i + 1..] {
            distinct &= distinguishing_point(&a.alpha, &b.alpha)
                .is_some_and(|p| a.cone.contains(s.carrier(), &p) != b.cone.contains(s.carrier(), &p));
        }
    }
    r.object("half_plane_alphas", json!(alphas.iter().map(ToString::to_string).collect::<Vec<_>>()));
    scenario(
        &mut r,
        "splitext.E1.half_planes",
        all_compatible && distinct,
        &Verdict::yes(),
        "five half-plane cones on (Z, N) x (Z, N), each compatible and pairwise distinct",
    );

    let (ok, failures) = random_points(seed, RANDOM_POINTS)?;
    scenario(
        &mut r,
        "random_points.strong",
        failures == 0,
        &Verdict::yes(),
        "points over finite groups with group cones are strong",
    );
    r.object("random_points", json!({ "checked": ok.to_string(), "failed": failures.to_string() }));
    Ok(r)
}

fn small_groups() -> Vec<FiniteGroupTable> {
    let mut out: Vec<FiniteGroupTable> = (1..=6).map(FiniteGroupTable::cyclic).collect();
    out.push(FiniteGroupTable::direct_product(&FiniteGroupTable::cyclic(2), &FiniteGroupTable::cyclic(2)));
    out.push(FiniteGroupTable::symmetric(3).0);
    out
}

fn random_cone(t: &FiniteGroupTable, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let subs = t.enumerate_submonoids(t.order()).expect("small group");
    subs.choose(rng).expect("at least the trivial subgroup").clone()
}

/// Points `π_Y: X × Y -> Y` with sections `⟨h, 1⟩` for random monotone
/// homomorphisms `h: Y -> X`.
pub fn random_points(seed: u64, count: usize) -> CliResult<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups = small_groups();
    let (mut checked, mut failed) = (0, 0);
    while checked < count {
        let xt = groups.choose(&mut rng).expect("nonempty").clone();
        let yt = groups.choose(&mut rng).expect("nonempty").clone();
        let x = RPGroup::finite(xt.clone(), &random_cone(&xt, &mut rng))?;
        let y = RPGroup::finite(yt.clone(), &random_cone(&yt, &mut rng))?;
        let homs: Vec<Vec<usize>> = yt
            .homomorphisms_to(&xt)
            .into_iter()
            .filter(|h| y.cone_indices().expect("finite").iter().all(|&p| x.contains(&Element::Index(h[p])).is_yes()))
            .collect();
        let h = homs[rng.gen_range(0..homs.len())].clone();
        let prod = product(&x, &y)?;
        let n = xt.order();
        let table: Vec<usize> = (0..yt.order()).map(|b| h[b] + n * b).collect();
        let s = Morphism::new(y.clone(), prod.object.clone(), HomMap::Table(Arc::new(table)))?;
        let v = strong_point_test(&prod.maps[1], &s)?;
        checked += 1;
        if !v.is_yes() {
            failed += 1;
        }
    }
    Ok((checked, failed))
}
