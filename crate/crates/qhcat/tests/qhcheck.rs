use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use qhcat::exactlin::{Field, Matrix, Scalar};
use qhcat::functors::*;
use qhcat::meshcat::*;
use qhcat::qhcheck::*;
use qhcat::quiver::*;

fn q() -> Field {
    Field::Rational
}

fn simple(c: &Arc<PresentedCategory>, x: usize) -> FunctorModule {
    let dims: Vec<usize> = (0..c.len()).map(|y| usize::from(y == x)).collect();
    let maps = c
        .generators()
        .iter()
        .map(|g| Matrix::zeros(c.field(), dims[g.source], dims[g.target]))
        .collect();
    FunctorModule::new(c.clone(), dims, maps).unwrap()
}

fn linear(n: usize, zero_composites: bool) -> Arc<PresentedCategory> {
    let mut rq = QuiverWithRelations::linear(n);
    if zero_composites {
        for k in 0..n.saturating_sub(2) {
            rq.relations.push(Relation {
                terms: vec![(q().one(), vec![k, k + 1])],
            });
        }
    }
    Arc::new(rq.build(q(), None, None).unwrap())
}

fn order(c: &Arc<PresentedCategory>, objs: &[usize]) -> Filtration {
    Filtration::new(c, objs.iter().map(|&x| vec![x]).collect()).unwrap()
}

fn family_truncation(
    family: Family,
    kind: FiltrationKind,
    layers: usize,
    cols: Option<std::ops::RangeInclusive<i64>>,
) -> (LabeledFiltration, Arc<PresentedCategory>, Filtration) {
    let amb = Ambient::new(family).unwrap();
    let lf = example_filtration(family, kind, layers, cols).unwrap();
    let objs: Vec<Vertex> = lf.layers.iter().flatten().map(|(_, v)| *v).collect();
    let c = Arc::new(truncation(&amb, &objs, q()).unwrap());
    let f = Filtration::from_labeled(&c, &lf).unwrap();
    (lf, c, f)
}

fn find_witness<'a>(cert: &'a Certificate, label: &str) -> Option<&'a Witness> {
    cert.witnesses
        .iter()
        .find(|w| w.label == label)
        .or_else(|| cert.children.iter().find_map(|ch| find_witness(ch, label)))
}

#[test]
fn filtration_validation() {
    let c = linear(3, false);
    assert!(Filtration::new(&c, vec![vec![0], vec![1]]).is_err());
    assert!(Filtration::new(&c, vec![vec![0, 1], vec![1, 2]]).is_err());
    assert!(Filtration::new(&c, vec![vec![0, 1, 2], vec![]]).is_err());
    let f = Filtration::new(&c, vec![vec![2], vec![0, 1]]).unwrap();
    assert_eq!(f.cumulative(0), BTreeSet::new());
    assert_eq!(f.cumulative(1), BTreeSet::from([2]));
    assert_eq!(f.layer_of(0), Some(2));
    assert!(!f.is_finite_on_window());
    assert!(f.declare_finite().is_finite_on_window());
}

#[test]
fn heredity_ideals_on_small_categories() {
    let a2 = linear(2, false);
    let zero = check_heredity_ideal(&a2, &a2.zero_ideal()).unwrap();
    assert!(zero.passed && zero.recheck());

    let source = check_heredity_ideal(&a2, &a2.ideal_table(&BTreeSet::from([0]))).unwrap();
    assert!(source.passed);
    let w = find_witness(&source, "I(-,2)").unwrap();
    assert!(w.detail.contains("[1]"), "{}", w.detail);
    assert!(source.recheck());

    let sink = check_heredity_ideal(&a2, &a2.ideal_table(&BTreeSet::from([1]))).unwrap();
    assert!(sink.passed);

    let a3 = linear(3, true);
    let middle = check_heredity_ideal(&a3, &a3.ideal_table(&BTreeSet::from([1]))).unwrap();
    assert!(!middle.passed);
    assert_eq!(middle.check_passed("idempotent"), Some(true));
    assert_eq!(middle.check_passed("I rad I = 0"), Some(true));
    assert_eq!(middle.check_passed("I(-,X) projective"), Some(false));
    assert!(middle.counterexample.unwrap().contains("I(-,3)"));
}

#[test]
fn linear_orders() {
    for objs in [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ] {
        let c = linear(3, false);
        assert!(check_qh(&c, &order(&c, &objs)).unwrap().passed, "{objs:?}");
    }
    let c = linear(3, true);
    for (objs, expect) in [
        ([0, 1, 2], true),
        ([0, 2, 1], true),
        ([1, 0, 2], false),
        ([1, 2, 0], false),
        ([2, 0, 1], true),
        ([2, 1, 0], true),
    ] {
        let cert = check_qh(&c, &order(&c, &objs)).unwrap();
        assert_eq!(cert.passed, expect, "{objs:?}");
        assert_eq!(cert.check_passed("routes agree"), Some(true));
        if !expect {
            let cx = cert.counterexample.unwrap();
            assert!(cx.contains("I_B1(-,3) presented by [1] -> [2]"), "{cx}");
        }
    }
}

#[test]
fn semisimple_single_layer() {
    let c = Arc::new(
        QuiverWithRelations::discrete(4)
            .build(q(), None, None)
            .unwrap(),
    );
    let f = Filtration::new(&c, vec![(0..4).collect()]).unwrap();
    let cert = check_qh(&c, &f).unwrap();
    assert!(cert.passed && cert.recheck());
}

#[test]
fn ring_filtration_presentation() {
    let (lf, c, f) = family_truncation(Family::ZAInfInf, FiltrationKind::Standard, 5, None);
    let cert = check_qh(&c, &f).unwrap();
    assert!(cert.passed, "{cert}");
    assert!(cert.recheck());
    let name = |i, j| {
        c.name(c.find_vertex(lf.vertex(i, j).unwrap()).unwrap())
            .to_string()
    };
    let w = find_witness(&cert, &format!("I_B4(-,{})", name(5, 7))).unwrap();
    assert_eq!(
        w.detail,
        format!("[{}] -> [{}, {}]", name(3, 4), name(4, 5), name(4, 6))
    );
}

#[test]
fn row_filtration_and_a_wrong_one() {
    let (_, c, f) = family_truncation(Family::ZAInf, FiltrationKind::Standard, 4, Some(-2..=2));
    assert!(check_qh(&c, &f).unwrap().passed);
    let mut layers = f.layers().to_vec();
    layers.swap(0, 1);
    let wrong = Filtration::new(&c, layers).unwrap();
    let cert = check_qh(&c, &wrong).unwrap();
    assert!(!cert.passed);
    assert!(cert
        .counterexample
        .unwrap()
        .contains("layer 1: radical identity"));
}

#[test]
fn labelled_filtrations_with_boundary_fail_at_layer_one() {
    let (_, c, f) = family_truncation(Family::ZDInf, FiltrationKind::Standard, 4, None);
    let cert = check_qh(&c, &f).unwrap();
    assert!(!cert.passed);
    assert_eq!(cert.check_passed("routes agree"), Some(true));
    assert!(cert
        .counterexample
        .unwrap()
        .contains("layer 1: presentations"));
    let (_, c, f) = family_truncation(Family::ZAInf, FiltrationKind::Boxes, 4, None);
    let cert = check_qh(&c, &f).unwrap();
    assert!(!cert.passed);
    assert_eq!(cert.check_passed("routes agree"), Some(true));
}

#[test]
fn standard_modules() {
    let (_, c, f) = family_truncation(Family::ZAInfInf, FiltrationKind::Standard, 4, None);
    let fam = standard_family(&c, &f).unwrap();
    assert_eq!(fam.entries.len(), c.len());
    for e in fam.layer(1) {
        assert!(e
            .delta
            .same_data(&FunctorModule::representable(&c, e.object)));
    }
    for e in &fam.entries {
        assert_eq!(e.delta.dim(e.object), 1);
        assert_eq!(e.nabla.dims(), e.delta_op.dims());
    }
    let lemmas = check_delta_lemmas(&fam).unwrap();
    assert!(lemmas.passed, "{lemmas}");
    assert_eq!(lemmas.checks.len(), 5);
}

#[test]
fn a2_hand_oracle() {
    let c = linear(2, false);
    let f = order(&c, &[1, 0]);
    let fam = standard_family(&c, &f).unwrap();
    assert!(fam.entry(0).unwrap().delta.same_data(&simple(&c, 0)));
    assert!(!is_delta_filtered(&simple(&c, 1), &fam).unwrap().passed);
    assert!(is_delta_filtered(&simple(&c, 0), &fam).unwrap().passed);
    for x in 0..2 {
        let rep = is_delta_filtered(&FunctorModule::representable(&c, x), &fam).unwrap();
        assert!(rep.passed && rep.recheck());
        let d = is_delta_filtered(&fam.entry(x).unwrap().delta, &fam).unwrap();
        let summary = find_witness(&d, "standard summands").unwrap();
        assert_eq!(summary.detail.matches('+').count(), 0);
        assert!(summary.detail.ends_with("^1"));
    }
    assert!(tor_criterion(&simple(&c, 1), &fam).is_err());
}

#[test]
fn trace_filtration_of_representables() {
    let (_, c, f) = family_truncation(Family::ZAInfInf, FiltrationKind::Standard, 4, None);
    for x in 0..c.len() {
        let tf = trace_filtration(&FunctorModule::representable(&c, x), &f).unwrap();
        assert_eq!(tf.stabilizes_at(), f.layer_of(x));
    }
    let fam = standard_family(&c, &f).unwrap();
    for x in [0, 5, 13, 24] {
        let cert = is_delta_filtered(&FunctorModule::representable(&c, x), &fam).unwrap();
        assert!(cert.passed, "{cert}");
    }
}

#[test]
fn restriction_and_induction() {
    let (_, c, f) = family_truncation(Family::ZAInfInf, FiltrationKind::Standard, 4, None);
    let fam = standard_family(&c, &f).unwrap();
    let e = f.layer(3)[2];
    let rep = FunctorModule::representable(&c, e);
    for i in 3..=4 {
        let cert = restrict_induce_check(&rep, &f, i).unwrap();
        assert!(cert.passed, "{cert}");
        assert!(cert.recheck());
    }
    let delta = &fam.entry(e).unwrap().delta;
    assert!(restrict_induce_check(delta, &f, 3).unwrap().passed);
    assert!(matches!(
        restrict_induce_check(&rep, &f, 2),
        Err(qhcat::Error::Precondition(_))
    ));
}

#[test]
fn tor_criterion_agrees_on_a3() {
    let c = linear(3, false);
    for objs in [[2, 1, 0], [0, 2, 1], [1, 0, 2]] {
        let f = order(&c, &objs).declare_finite();
        let fam = standard_family(&c, &f).unwrap();
        let mut corpus: Vec<FunctorModule> = (0..3).map(|x| simple(&c, x)).collect();
        corpus.extend((0..3).map(|x| FunctorModule::representable(&c, x)));
        corpus.extend(fam.deltas().cloned());
        corpus.extend(fam.nablas().cloned());
        for m in &corpus {
            let cert = tor_criterion(m, &fam).unwrap();
            assert_eq!(
                cert.check_passed("agrees with trace filtration"),
                Some(true),
                "{cert}"
            );
        }
    }
}

#[test]
fn universal_extension_examples() {
    let c = linear(3, false);
    let fam = standard_family(&c, &order(&c, &[0, 1, 2])).unwrap();
    let start = simple(&c, 0);
    let step = universal_extension(&start, &fam, 2).unwrap();
    assert_eq!(step.module.dims(), &[1, 1, 0]);
    assert_eq!(step.summands, vec![1]);
    assert!(step.certificate.passed && step.certificate.recheck());
    assert!(matches!(
        universal_extension(&start, &fam, 3),
        Err(qhcat::Error::Precondition(_))
    ));

    let core = coresolution(&start, &fam).unwrap();
    assert_eq!(core.y.dims(), &[1, 1, 1]);
    assert_eq!(core.x.dims(), &[0, 1, 1]);
    assert!(core.certificate.passed && core.certificate.recheck());

    for e in &fam.entries {
        for t in 1..=3 {
            let u = universal_extension(&e.nabla, &fam, t).unwrap();
            assert!(u.quotient.is_zero());
            assert!(u.module.same_data(&e.nabla));
        }
    }
}

#[test]
fn approximations() {
    let c = linear(3, false);
    let fam = standard_family(&c, &order(&c, &[0, 2, 1])).unwrap();
    let split = right_approximation(&FunctorModule::representable(&c, 2), &fam, &[]).unwrap();
    assert!(split.split && split.certificate.passed);
    let a = right_approximation(&simple(&c, 2), &fam, &[]).unwrap();
    assert!(!a.split);
    assert_eq!(a.z.dims(), &[1, 2, 2]);
    assert!(a.certificate.passed, "{}", a.certificate);
    assert!(a.certificate.recheck());
    let nabla = &fam.entry(2).unwrap().nabla;
    assert!(
        right_approximation(nabla, &fam, &[])
            .unwrap()
            .certificate
            .passed
    );
}

fn combination(classes: &[Vec<Scalar>], coeffs: &[i64]) -> Vec<Scalar> {
    let mut out = vec![q().zero(); classes[0].len()];
    for (class, &k) in classes.iter().zip(coeffs) {
        for (o, v) in out.iter_mut().zip(class) {
            *o = &*o + &(v * &q().from_i64(k));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn extensions_of_standard_modules_are_filtered(a in 0usize..3, b in 0usize..3, coeffs in prop::collection::vec(-3i64..4, 1..3)) {
        let c = linear(3, false);
        let fam = standard_family(&c, &order(&c, &[0, 2, 1])).unwrap();
        let (da, db) = (&fam.entries[a].delta, &fam.entries[b].delta);
        let ext = ext1(da, db).unwrap();
        prop_assume!(ext.dim() > 0);
        let cocycle = combination(&ext.classes, &coeffs);
        let e = extension_from_cocycle(da, db, &cocycle).unwrap();
        prop_assert!(e.is_exact());
        prop_assert!(is_delta_filtered(&e.module, &fam).unwrap().passed);
        let (tm, ta, tb) = (
            trace_filtration(&e.module, &fam.filtration).unwrap(),
            trace_filtration(db, &fam.filtration).unwrap(),
            trace_filtration(da, &fam.filtration).unwrap(),
        );
        for i in 1..=3 {
            let dims = |t: &TraceFiltration| t.subquotient(i).unwrap().total_dim();
            prop_assert_eq!(dims(&tm), dims(&ta) + dims(&tb));
        }
    }
}
