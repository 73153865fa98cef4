use locnilp::classify::{classify, count_classes, db_conjugate, ClassifyOptions, Count, Tag};
use locnilp::construct::{make_a_alpha, make_g_alpha_b, make_h_alpha, PrimitiveData};
use locnilp::oracle::{
    conjugator_search, element_conjugator, exhaustive_classification, maximality_check,
    MaximalityMode,
};
use locnilp::props::{
    is_primitive, normal_abelian_check, syl2_quotient_structure, sylq_quotient_generator, Syl2Case,
};
use locnilp::{Cardinal, Elem, Field, Mat, MatGroup};

fn gf(p: u64) -> Field {
    Field::prime(p).unwrap()
}

fn coeffs(f: &Field, b: &[i64]) -> Vec<Elem> {
    b.iter().map(|&x| f.from_i64(x)).collect()
}

#[test]
fn gl37_two_classes() {
    let f = gf(7);
    let opts = ClassifyOptions {
        maximality_mode: Some(MaximalityMode::Normalizer),
        ..ClassifyOptions::default()
    };
    let c = classify(3, &f, &opts).unwrap();
    let found: Vec<(Tag, String)> = c
        .classes
        .iter()
        .map(|r| (r.tag, r.verified.as_ref().unwrap().order.clone()))
        .collect();
    assert_eq!(
        found,
        vec![
            (Tag::MonomialH, "162".to_string()),
            (Tag::AbelianSinger, "342".to_string())
        ]
    );
    assert!(c.classes.iter().all(|r| r
        .verified
        .as_ref()
        .unwrap()
        .maximal
        .as_ref()
        .unwrap()
        .maximal));
    assert_eq!(count_classes(3, &f).unwrap().count, Count::Finite(2));
}

#[test]
fn rational_stream_starts_at_two() {
    let f = Field::rationals();
    let opts = ClassifyOptions {
        limit: 3,
        maximality: false,
        ..ClassifyOptions::default()
    };
    let c = classify(2, &f, &opts).unwrap();
    let alphas: Vec<String> = c
        .classes
        .iter()
        .filter(|r| r.tag == Tag::MonomialH)
        .map(|r| r.parameters.alpha.clone().unwrap())
        .collect();
    assert_eq!(alphas, ["2", "3", "5"]);
    assert_eq!(count_classes(2, &f).unwrap().count, Count::Infinite);
}

#[test]
fn h1_below_g_minus_one_is_not_maximal() {
    let f = gf(3);
    let h = make_h_alpha(&f, 2, &f.from_i64(1)).unwrap();
    let g = make_g_alpha_b(&f, 2, &f.from_i64(-1), &coeffs(&f, &[1, 0])).unwrap();
    let v = maximality_check(&h, MaximalityMode::Exhaustive).unwrap();
    assert!(!v.maximal);
    let w = v.witness.unwrap();
    assert!(w.overgroup.is_nilpotent().unwrap());
    // the overgroup found sits inside a conjugate of G(-1, 1)
    assert_eq!(w.overgroup.order().unwrap(), Cardinal::Finite(16));
    assert!(conjugator_search(&w.overgroup, &g).unwrap().is_some());
    assert!(
        maximality_check(&g, MaximalityMode::Exhaustive)
            .unwrap()
            .maximal
    );
}

#[test]
fn gl23_lattice_single_class() {
    let r = exhaustive_classification(&gf(3), 2).unwrap();
    assert_eq!(r.classes.len(), 1);
    assert_eq!(r.classes[0].order, 16);
    assert_eq!(r.classes[0].nilpotency_class, 3);
}

#[test]
fn a_alpha_orders() {
    let f7 = gf(7);
    assert_eq!(
        make_a_alpha(&f7, 2, &f7.from_i64(-1))
            .unwrap()
            .order()
            .unwrap(),
        Cardinal::Finite(48)
    );
    assert_eq!(
        make_a_alpha(&f7, 3, &f7.from_i64(2))
            .unwrap()
            .projective_order()
            .unwrap(),
        3
    );
    let f3 = gf(3);
    let a = make_a_alpha(&f3, 2, &f3.from_i64(-1)).unwrap();
    assert_eq!(a.order().unwrap(), Cardinal::Finite(8));
    assert!(a.is_abelian());
    assert!(is_primitive(&a).unwrap().primitive);
}

#[test]
fn g_over_gf7_degree_3() {
    let f = gf(7);
    let g = make_g_alpha_b(&f, 3, &f.from_i64(2), &coeffs(&f, &[1, 1, 0])).unwrap();
    assert_eq!(g.projective_order().unwrap(), 9);
    assert_eq!(g.nilpotency_class().unwrap().class(), Some(2));
    // <2, (F^x)^3> is all of GF(7)^x, so the group is monomial
    assert!(!is_primitive(&g).unwrap().primitive);
}

#[test]
fn g_minus_one_over_gf7() {
    let f = gf(7);
    let g = make_g_alpha_b(&f, 2, &f.from_i64(-1), &coeffs(&f, &[1, 0])).unwrap();
    assert_eq!(g.order().unwrap(), Cardinal::Finite(96));
    assert!(g.is_nilpotent().unwrap());
    let w = normal_abelian_check(&g).unwrap().unwrap();
    assert_eq!(w.order, Cardinal::Finite(48));
}

#[test]
fn db_elements_conjugate_iff_det_agree() {
    let f = gf(7);
    let alpha = f.from_i64(3);
    let data = |b: &[i64]| PrimitiveData::new(&f, 2, &alpha, &coeffs(&f, b)).unwrap();
    // det(b_0 + b_1 I_3) = b_0^2 - 3 b_1^2
    let pairs = [
        ([1, 0], [2, 1]),
        ([0, 1], [2, 0]),
        ([1, 0], [3, 0]),
        ([1, 1], [2, 0]),
    ];
    let mut seen = [false, false];
    for (b1, b2) in pairs {
        let (d1, d2) = (data(&b1), data(&b2));
        let same_det = d1.det_b() == d2.det_b();
        let found = element_conjugator(&f, &d1.db(), &d2.db()).unwrap();
        assert_eq!(found.is_some(), same_det, "{b1:?} {b2:?}");
        assert_eq!(
            db_conjugate(&f, 2, &alpha, &d1.b_coeffs, &d2.b_coeffs).unwrap(),
            same_det
        );
        if let Some(t) = found {
            assert_eq!(Mat::conjugate(&f, &t, &d1.db()).unwrap(), d2.db());
        }
        seen[same_det as usize] = true;
    }
    assert_eq!(seen, [true, true]);
}

#[test]
fn sylow_quotients() {
    let s3 = syl2_quotient_structure(&gf(3)).unwrap();
    assert_eq!((s3.case, s3.m, s3.predicted_order), (Syl2Case::I, 3, 4));
    let s7 = syl2_quotient_structure(&gf(7)).unwrap();
    assert_eq!(
        (s7.case, s7.m, s7.brute_force_order),
        (Syl2Case::I, 4, Some(8))
    );
    let sq = syl2_quotient_structure(&Field::rationals()).unwrap();
    assert_eq!((sq.case, sq.predicted_order), (Syl2Case::II, 4));
    let f5 = gf(5);
    let g = sylq_quotient_generator(&f5, 2, &f5.from_i64(2)).unwrap();
    assert_eq!((g.generator_order, g.sylow_order), (2, Some(2)));
    let f7 = gf(7);
    let g = sylq_quotient_generator(&f7, 3, &f7.from_i64(2)).unwrap();
    assert_eq!((g.quotient_order, g.sylow_order), (Some(57), Some(3)));
}

#[test]
fn sylow_subgroups_of_gl23_are_conjugate() {
    let f = gf(3);
    let g = make_g_alpha_b(&f, 2, &f.from_i64(-1), &coeffs(&f, &[1, 0])).unwrap();
    let t = Mat::parse(&f, "1,1;0,1").unwrap();
    let conj: Vec<Mat> = g
        .gens()
        .iter()
        .map(|x| Mat::conjugate(&f, &t, x).unwrap())
        .collect();
    let other = MatGroup::new(&f, 2, conj, true).unwrap();
    let c = conjugator_search(&g, &other).unwrap().unwrap();
    for x in g.gens() {
        assert!(other.contains(&Mat::conjugate(&f, &c, x).unwrap()).unwrap());
    }
}
