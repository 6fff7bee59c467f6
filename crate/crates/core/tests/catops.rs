use rpgroup::abelian::{FgAbelianGroup, IntMatrix};
use rpgroup::catops::{
    classify, cokernel, coproduct, equalizer, factorize, initial_lift, jointly_strongly_epi, kernel, product,
};
use rpgroup::cone::Cone;
use rpgroup::morphism::HomMap;
use rpgroup::{Element, Error, Morphism, RPGroup, Tri};

fn mat(g: &RPGroup, h: &RPGroup, rows: &[&[i64]]) -> Morphism {
    Morphism::new(g.clone(), h.clone(), HomMap::Matrix(IntMatrix::from_i64(rows))).unwrap()
}

#[test]
fn doubling_on_natural_integers() {
    let zn = RPGroup::z_natural();
    let f = mat(&zn, &zn, &[&[2]]);
    let k = classify(&f);
    assert!(k.mono.is_yes());
    assert!(k.epi.is_no());
    assert!(!k.regular_mono.is_no());
    let c = cokernel(&f).unwrap();
    assert_eq!(c.object.carrier().order(), Some(2));
    assert_eq!(c.projection.apply(&Element::int(3)), Element::vector(&[1]));
    let fs = factorize(&f).unwrap();
    for fac in [&fs.epi_regmono, &fs.regepi_mono] {
        for x in -4..=4 {
            let x = Element::int(x);
            assert_eq!(fac.m.apply(&fac.e.apply(&x)), f.apply(&x));
        }
    }
}

#[test]
fn equalizer_of_coordinate_maps() {
    let z2 = RPGroup::abelian(FgAbelianGroup::free(2), Cone::Orthant).unwrap();
    let zz = RPGroup::z_total();
    let f = mat(&z2, &zz, &[&[1], &[0]]);
    let g = mat(&z2, &zz, &[&[0], &[1]]);
    let e = equalizer(&f, &g).unwrap();
    let incl = &e.maps[0];
    let one = Element::vector(&[1]);
    let img = incl.apply(&one);
    let (a, b) = (img.as_vector().unwrap()[0].clone(), img.as_vector().unwrap()[1].clone());
    assert_eq!(a, b);
    assert_eq!(e.object.contains(&one), Tri::from_bool(a > 0.into()));
}

#[test]
fn kernel_of_projection() {
    let z2 = RPGroup::abelian(FgAbelianGroup::free(2), Cone::Orthant).unwrap();
    let p = mat(&z2, &RPGroup::z_natural(), &[&[1], &[0]]);
    let k = kernel(&p).unwrap();
    let img = k.maps[0].apply(&Element::vector(&[1]));
    assert_eq!(img.as_vector().unwrap()[0], 0.into());
    assert!(k.object.contains(&Element::vector(&[1])).is_yes() ^ k.object.contains(&Element::vector(&[-1])).is_yes());
}

#[test]
fn initial_lift_along_two_maps() {
    let z2 = RPGroup::abelian(FgAbelianGroup::free(2), Cone::Trivial).unwrap();
    let zn = RPGroup::z_natural();
    let sum = mat(&z2, &zn, &[&[1], &[1]]);
    let first = mat(&z2, &zn, &[&[1], &[0]]);
    let lifted = initial_lift(z2.carrier(), &[sum, first]).unwrap();
    assert!(lifted.contains(&Element::vector(&[2, -1])).is_yes());
    assert!(lifted.contains(&Element::vector(&[1, -2])).is_no());
    assert!(lifted.contains(&Element::vector(&[-1, 3])).is_no());
}

#[test]
fn jointly_epi_families() {
    let zn = RPGroup::z_natural();
    let z2 = RPGroup::abelian(FgAbelianGroup::free(2), Cone::Orthant).unwrap();
    let i1 = mat(&zn, &z2, &[&[1, 0]]);
    let i2 = mat(&zn, &z2, &[&[0, 1]]);
    assert!(jointly_strongly_epi(&[i1.clone(), i2]).unwrap().is_yes());
    let d = mat(&zn, &z2, &[&[1, 1]]);
    assert!(jointly_strongly_epi(&[i1, d]).unwrap().is_no());
}

#[test]
fn product_and_coproduct() {
    let p = product(&RPGroup::z_natural(), &RPGroup::z_trivial()).unwrap();
    assert!(p.object.contains(&Element::vector(&[3, 0])).is_yes());
    assert!(p.object.contains(&Element::vector(&[3, 1])).is_no());
    assert!(matches!(coproduct(&RPGroup::z_natural(), &RPGroup::z_natural()), Err(Error::Unsupported(_))));
}
