use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use qhcat::exactlin::{Field, Matrix, Scalar};
use qhcat::functors::*;
use qhcat::meshcat::*;
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

fn ring_window() -> (Ambient, Arc<PresentedCategory>) {
    let amb = Ambient::new(Family::ZAInfInf).unwrap();
    let set = amb.interval(Vertex::new(-1, 3), Vertex::new(19, 3));
    let c = Arc::new(window_category(&amb, &set, q()).unwrap());
    (amb, c)
}

fn b4(c: &PresentedCategory) -> BTreeSet<usize> {
    let f = example_filtration(Family::ZAInfInf, FiltrationKind::Standard, 4, None).unwrap();
    f.vertices()
        .iter()
        .map(|v| c.find_vertex(*v).unwrap())
        .collect()
}

/// Expected cells in doubled coordinates: `(row, first, last, dim)`.
fn expand(rows: &[(i64, i64, i64, usize)]) -> Vec<(Vertex, usize)> {
    rows.iter()
        .flat_map(|&(y, from, to, d)| (from..=to).step_by(2).map(move |x| (Vertex::new(x, y), d)))
        .collect()
}

#[test]
fn ideal_functor_grid() {
    let (_, c) = ring_window();
    let x = c.find_vertex(Vertex::new(13, 3)).unwrap();
    let ideal = c.ideal_table(&b4(&c));
    let (m, inc) = ideal_module(&c, &ideal, x).unwrap();
    assert!(inc.is_injective());
    let cells = expand(&[
        (6, 2, 10, 1),
        (6, 12, 16, 0),
        (5, 3, 11, 1),
        (5, 13, 15, 0),
        (4, 2, 12, 1),
        (4, 14, 16, 0),
        (3, 3, 11, 1),
        (3, 13, 15, 0),
        (2, 2, 12, 1),
        (2, 14, 16, 0),
        (1, 3, 11, 1),
        (1, 13, 15, 0),
        (0, 2, 10, 1),
        (0, 12, 16, 0),
    ]);
    for (v, d) in cells {
        assert_eq!(m.dim(c.find_vertex(v).unwrap()), d, "{v:?}");
    }
    let (t, _) = trace_of_representables(
        &FunctorModule::representable(&c, x),
        &b4(&c).into_iter().collect::<Vec<_>>(),
    )
    .unwrap();
    assert_eq!(t.dims(), m.dims());
}

#[test]
fn cover_and_relation_module_grids() {
    let (_, c) = ring_window();
    let x = c.find_vertex(Vertex::new(13, 3)).unwrap();
    let (m, _) = ideal_module(&c, &c.ideal_table(&b4(&c)), x).unwrap();
    let cover = projective_cover(&m).unwrap();
    let mut tops: Vec<Vertex> = cover
        .summands
        .iter()
        .map(|&s| c.coords(s).unwrap())
        .collect();
    tops.sort();
    assert_eq!(tops, vec![Vertex::new(12, 2), Vertex::new(12, 4)]);
    let p0 = &cover.module;
    let cells = expand(&[
        (6, 2, 8, 2),
        (6, 10, 10, 1),
        (6, 12, 16, 0),
        (5, 3, 9, 2),
        (5, 11, 11, 1),
        (5, 13, 15, 0),
        (4, 2, 10, 2),
        (4, 12, 12, 1),
        (4, 14, 16, 0),
        (3, 3, 11, 2),
        (3, 13, 15, 0),
        (2, 2, 10, 2),
        (2, 12, 12, 1),
        (2, 14, 16, 0),
        (1, 3, 9, 2),
        (1, 11, 11, 1),
        (1, 13, 15, 0),
        (0, 2, 8, 2),
        (0, 10, 10, 1),
    ]);
    for (v, d) in cells {
        assert_eq!(p0.dim(c.find_vertex(v).unwrap()), d, "{v:?}");
    }
    assert!(cover.map.is_surjective());
    let (kernel, _) = cover.map.kernel().unwrap();
    let k_tops: Vec<Vertex> = top_elements(&kernel)
        .iter()
        .map(|(o, _)| c.coords(*o).unwrap())
        .collect();
    assert_eq!(k_tops, vec![Vertex::new(11, 3)]);
    let e34 = FunctorModule::representable(&c, c.find_vertex(Vertex::new(11, 3)).unwrap());
    assert!(is_isomorphic(&kernel, &e34).unwrap());
    for y in 0..c.len() {
        assert_eq!(p0.dim(y), m.dim(y) + kernel.dim(y));
    }
    let pres = presentation(&m).unwrap();
    assert_eq!(
        pres.relations,
        vec![c.find_vertex(Vertex::new(11, 3)).unwrap()]
    );
}

#[test]
fn yoneda_on_a_diamond() {
    let amb = Ambient::new(Family::ZAInfInf).unwrap();
    let c = Arc::new(
        window_category(
            &amb,
            &amb.interval(Vertex::new(0, 0), Vertex::new(6, 0)),
            q(),
        )
        .unwrap(),
    );
    let mut modules: Vec<FunctorModule> = (0..c.len())
        .map(|x| FunctorModule::representable(&c, x))
        .collect();
    let top = c.find_vertex(Vertex::new(6, 0)).unwrap();
    let rep = FunctorModule::representable(&c, top);
    modules.push(rep.quotient(&radical_spaces(&rep)).unwrap().0);
    modules.push(rep.dualize().dualize());
    for m in &modules {
        m.check_functorial().unwrap();
        for x in 0..c.len() {
            let rx = FunctorModule::representable(&c, x);
            assert_eq!(hom_dim(&rx, m).unwrap(), m.dim(x));
        }
    }
    assert!(modules.last().unwrap().same_data(&rep));
}

#[test]
fn ext_on_linear_categories() {
    let a2 = linear(2, false);
    assert_eq!(ext_dim(&simple(&a2, 1), &simple(&a2, 0), 1).unwrap(), 1);
    assert_eq!(ext_dim(&simple(&a2, 0), &simple(&a2, 1), 1).unwrap(), 0);
    assert_eq!(ext_dim(&simple(&a2, 1), &simple(&a2, 1), 0).unwrap(), 1);

    let a3 = linear(3, false);
    assert_eq!(ext_dim(&simple(&a3, 2), &simple(&a3, 0), 1).unwrap(), 0);
    assert_eq!(ext_dim(&simple(&a3, 2), &simple(&a3, 1), 1).unwrap(), 1);
    assert_eq!(ext_dim(&simple(&a3, 2), &simple(&a3, 0), 2).unwrap(), 0);

    let rad2 = linear(3, true);
    let res = minimal_resolution(&simple(&rad2, 2), 4).unwrap();
    assert_eq!(res.terms, vec![vec![2], vec![1], vec![0]]);
    assert_eq!(res.length(), Some(2));
    assert_eq!(ext_dim(&simple(&rad2, 2), &simple(&rad2, 0), 2).unwrap(), 1);
    assert_eq!(ext_dim(&simple(&rad2, 2), &simple(&rad2, 0), 1).unwrap(), 0);
}

#[test]
fn tensor_and_tor_on_linear_categories() {
    let c = linear(3, true);
    let op = c.opposite();
    for a in 0..3 {
        for b in 0..3 {
            assert_eq!(
                tensor_dim(&simple(&op, a), &simple(&c, b)).unwrap(),
                usize::from(a == b)
            );
        }
        let n = FunctorModule::representable(&c, 2);
        assert_eq!(
            tensor_dim(&FunctorModule::corepresentable(&c, a), &n).unwrap(),
            n.dim(a)
        );
    }
    assert_eq!(tor_dim(&simple(&op, 0), &simple(&c, 2), 2).unwrap(), 1);
    assert_eq!(tor_dim(&simple(&op, 1), &simple(&c, 2), 1).unwrap(), 1);
    assert_eq!(tor_dim(&simple(&op, 0), &simple(&c, 2), 1).unwrap(), 0);
    for a in 0..3 {
        for b in 0..3 {
            for t in 0..3 {
                let left = tor_resolving(&simple(&c, b), &simple(&op, a), t).unwrap();
                let right = tor_resolving(&simple(&op, a), &simple(&c, b), t).unwrap();
                assert_eq!(left, right, "Tor_{t}({a}, {b})");
            }
        }
    }
}

#[test]
fn non_functorial_data_is_rejected() {
    let c = linear(3, true);
    let one = Matrix::identity(q(), 1);
    let err = FunctorModule::new(c.clone(), vec![1, 1, 1], vec![one.clone(), one]).unwrap_err();
    assert!(matches!(err, qhcat::Error::NotFunctorial(_)));
    let bad_zero = FunctorModule::new(
        c.quotient(&c.ideal_table(&[0].into()))
            .map(Arc::new)
            .unwrap(),
        vec![1, 0, 0],
        vec![Matrix::zeros(q(), 1, 0), Matrix::zeros(q(), 0, 0)],
    );
    assert!(bad_zero.is_err());
}

#[test]
fn induction_of_restrictions() {
    let amb = Ambient::new(Family::ZAInfInf).unwrap();
    let c = Arc::new(
        window_category(
            &amb,
            &amb.interval(Vertex::new(0, 0), Vertex::new(6, 0)),
            q(),
        )
        .unwrap(),
    );
    let objects: Vec<usize> = [Vertex::new(3, 1), Vertex::new(2, 0), Vertex::new(4, 0)]
        .iter()
        .map(|v| c.find_vertex(*v).unwrap())
        .collect();
    let sub = Arc::new(c.full_subcategory(&objects).unwrap());
    for (i, &o) in objects.iter().enumerate() {
        let ind = induce(&c, &objects, &FunctorModule::representable(&sub, i)).unwrap();
        assert!(is_isomorphic(&ind, &FunctorModule::representable(&c, o)).unwrap());
    }
    let top = FunctorModule::representable(&c, c.find_vertex(Vertex::new(6, 0)).unwrap());
    let counit = induction_counit(&top, &sub, &objects).unwrap();
    let (trace, _) = trace_of_representables(&top, &objects).unwrap();
    assert_eq!(counit.image().unwrap().0.dims(), trace.dims());
}

#[test]
fn grid_rendering() {
    let (_, c) = ring_window();
    let m = FunctorModule::representable(&c, c.find_vertex(Vertex::new(1, 3)).unwrap());
    let grid = render_grid(&m);
    assert_eq!(grid.lines().count(), 21);
    assert!(grid.contains('K') && grid.contains('.'));
}

fn small() -> Arc<PresentedCategory> {
    let amb = Ambient::new(Family::ZAInfInf).unwrap();
    Arc::new(
        window_category(
            &amb,
            &amb.interval(Vertex::new(0, 0), Vertex::new(6, 0)),
            q(),
        )
        .unwrap(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn maps_between_free_modules_are_exact(
        src in prop::collection::vec(0usize..16, 1..3),
        dst in prop::collection::vec(0usize..16, 1..3),
        seed in prop::collection::vec(-2i64..3, 64),
    ) {
        let c = small();
        let mut k = 0;
        let entries = src
            .iter()
            .map(|&a| {
                dst.iter()
                    .map(|&b| {
                        (0..c.dim(a, b))
                            .map(|_| {
                                k += 1;
                                q().from_i64(seed[k % seed.len()])
                            })
                            .collect::<Vec<Scalar>>()
                    })
                    .collect()
            })
            .collect();
        let map = ProjMap { source: src, target: dst, entries }.realize(&c).unwrap();
        let (ker, inc) = map.kernel().unwrap();
        let (im, _) = map.image().unwrap();
        let (cok, proj) = map.cokernel().unwrap();
        prop_assert!(inc.then(&map).unwrap().is_zero());
        prop_assert!(map.then(&proj).unwrap().is_zero());
        for y in 0..c.len() {
            prop_assert_eq!(ker.dim(y) + im.dim(y), map.source().dim(y));
            prop_assert_eq!(im.dim(y) + cok.dim(y), map.target().dim(y));
        }
        ker.check_functorial().unwrap();
        cok.check_functorial().unwrap();
    }

    #[test]
    fn ideal_modules_are_traces(mask in 0u32..(1 << 16), x in 0usize..16) {
        let c = small();
        let b: BTreeSet<usize> = (0..c.len()).filter(|i| mask & (1 << i) != 0).collect();
        let (from_ideal, _) = ideal_module(&c, &c.ideal_table(&b), x).unwrap();
        let rep = FunctorModule::representable(&c, x);
        let (traced, _) = trace_of_representables(&rep, &b.iter().copied().collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(from_ideal.dims(), traced.dims());
        let family: Vec<FunctorModule> = b.iter().map(|&e| FunctorModule::representable(&c, e)).collect();
        let (general, _) = trace(&rep, &family).unwrap();
        prop_assert_eq!(general.dims(), traced.dims());
    }

    #[test]
    fn double_dual_is_identity(x in 0usize..16) {
        let c = small();
        let m = FunctorModule::representable(&c, x);
        let dd = m.dualize().dualize();
        prop_assert!(dd.same_data(&m));
        prop_assert_eq!(dd.category().uid(), c.uid());
    }
}
