use std::sync::Arc;

use qhcat::exactlin::Field;
use qhcat::meshcat::{PresentedCategory, QuiverWithRelations, Relation};
use qhcat::qhcheck::Filtration;
use qhcat::tensorqh::{
    check_chain, descending_chain, interleaved_chain, literal_chain, tensor_category,
    verify_tensor_qh,
};
use qhcat::Error;

fn linear(n: usize) -> Arc<PresentedCategory> {
    Arc::new(
        QuiverWithRelations::linear(n)
            .build(Field::Rational, None, None)
            .unwrap(),
    )
}

fn order(c: &PresentedCategory, objs: &[usize]) -> Filtration {
    Filtration::new(c, objs.iter().map(|&x| vec![x]).collect()).unwrap()
}

fn sink_first(c: &PresentedCategory) -> Filtration {
    let objs: Vec<usize> = (0..c.len()).rev().collect();
    order(c, &objs)
}

#[test]
fn hom_dimensions_multiply() {
    let a2 = linear(2);
    let t = tensor_category(&a2, &a2).unwrap();
    let c = &t.category;
    assert_eq!(c.len(), 4);
    let dims: Vec<usize> = (0..4)
        .flat_map(|x| (0..4).map(move |y| (x, y)))
        .map(|(x, y)| c.dim(x, y))
        .collect();
    assert_eq!(dims, vec![1, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 1]);
    c.check_associativity().unwrap();
    let a3 = linear(3);
    let t = tensor_category(&a3, &a2).unwrap();
    assert_eq!(t.category.dim(t.pair(0, 0), t.pair(2, 1)), 1);
    t.category.check_associativity().unwrap();
}

#[test]
fn unit_factor_is_neutral() {
    let unit = linear(1);
    let a3 = linear(3);
    let t = tensor_category(&a3, &unit).unwrap();
    for x in 0..3 {
        for y in 0..3 {
            assert_eq!(t.category.dim(x, y), a3.dim(x, y));
        }
    }
    let v = verify_tensor_qh(&a3, &sink_first(&a3), &unit, &sink_first(&unit)).unwrap();
    assert!(v.certificate.passed, "{}", v.certificate);
    let own = descending_chain(&a3, &sink_first(&a3));
    assert_eq!(v.chain.terms.len(), own.len());
    for (term, ideal) in v.chain.terms.iter().zip(&own) {
        assert_eq!(term.ideal.total_dim(), ideal.total_dim());
    }
}

#[test]
fn composition_is_bilinear_in_factors() {
    let mut q = QuiverWithRelations::linear(3);
    q.relations.push(Relation {
        terms: vec![(Field::Rational.one(), vec![0, 1])],
    });
    let zero = Arc::new(q.build(Field::Rational, None, None).unwrap());
    let a2 = linear(2);
    let t = tensor_category(&zero, &a2).unwrap();
    assert_eq!(t.category.dim(t.pair(0, 0), t.pair(2, 1)), 0);
    assert_eq!(t.category.dim(t.pair(0, 0), t.pair(1, 1)), 1);
}

#[test]
fn a2_a2_and_a3_a2() {
    let a2 = linear(2);
    let a3 = linear(3);
    for (l, r) in [(&a2, &a2), (&a3, &a2)] {
        let v = verify_tensor_qh(l, &sink_first(l), r, &sink_first(r)).unwrap();
        assert!(v.certificate.passed, "{}", v.certificate);
        assert_eq!(v.chain.terms.len(), l.len() * r.len() + 1);
    }
    let v = verify_tensor_qh(&a3, &order(&a3, &[1, 0, 2]), &a2, &order(&a2, &[0, 1])).unwrap();
    assert!(v.certificate.passed, "{}", v.certificate);
}

#[test]
fn semisimple_factor() {
    let points = Arc::new(
        QuiverWithRelations::discrete(2)
            .build(Field::Rational, None, None)
            .unwrap(),
    );
    let single = Filtration::new(&points, vec![vec![0, 1]]).unwrap();
    let a3 = linear(3);
    let v = verify_tensor_qh(&points, &single, &a3, &sink_first(&a3)).unwrap();
    assert!(v.certificate.passed, "{}", v.certificate);
}

#[test]
fn alternating_chain_fails_on_a2_a2() {
    let a2 = linear(2);
    let t = tensor_category(&a2, &a2).unwrap();
    let f = sink_first(&a2);
    let first = descending_chain(&a2, &f);
    let chain = literal_chain(&t, &first, &first).unwrap();
    let cert = check_chain(&t.category, &chain).unwrap();
    assert!(!cert.passed);
    println!("{}", cert.counterexample.clone().unwrap());
    let refined =
        check_chain(&t.category, &interleaved_chain(&t, &first, &first).unwrap()).unwrap();
    assert!(refined.passed);
}

#[test]
fn non_heredity_factor_is_rejected() {
    let mut q = QuiverWithRelations::linear(3);
    q.relations.push(Relation {
        terms: vec![(Field::Rational.one(), vec![0, 1])],
    });
    let zero = Arc::new(q.build(Field::Rational, None, None).unwrap());
    let a2 = linear(2);
    let err =
        verify_tensor_qh(&zero, &order(&zero, &[1, 0, 2]), &a2, &sink_first(&a2)).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}
