//! Acceptance criteria. One sequential test prints a PASS/FAIL line per criterion (written to the
//! process stdout, so it shows without `--nocapture`) and then asserts that every outcome matches
//! `EXPECTED_FAILURES`. Criteria known not to hold are listed there with the reason.

use std::io::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qhcat::cli::{run, FamilySpec, SpecFile};
use qhcat::exactlin::{Field, Matrix, Scalar};
use qhcat::functors::*;
use qhcat::meshcat::*;
use qhcat::qhcheck::*;
use qhcat::tensorqh::{
    check_chain, descending_chain, literal_chain, tensor_category, verify_tensor_qh,
};
use qhcat::tilting_za::{row_family, verify_ses, verify_t_in_fdelta, verify_tilting, ZaWindow};

const GRID_TIME_LIMIT: Duration = Duration::from_secs(5);
const FAMILIES_TIME_LIMIT: Duration = Duration::from_secs(60);
const TOR_CORPUS_MIN: usize = 200;
const APPROX_CORPUS_MIN: usize = 50;
const EXACTNESS_INSTANCES: usize = 10_000;
const PRIME: u64 = 32003;

/// Criteria expected to fail, with the reason.
const EXPECTED_FAILURES: &[(u8, &str)] = &[(
    2,
    "the zd-inf standard and za-inf boxes filtrations are not quasi-hereditary at layer 1",
)];

struct Outcome {
    criterion: u8,
    title: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn line(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
    let _ = out.flush();
}

fn timed(criterion: u8, title: &'static str, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = f();
    let o = Outcome {
        criterion,
        title,
        passed,
        detail,
        elapsed: start.elapsed(),
    };
    line(&format!(
        "{} criterion {}: {} ({:.2} s) {}",
        if o.passed { "PASS" } else { "FAIL" },
        o.criterion,
        o.title,
        o.elapsed.as_secs_f64(),
        o.detail
    ));
    o
}

fn linear(n: usize, field: Field) -> Arc<PresentedCategory> {
    Arc::new(
        QuiverWithRelations::linear(n)
            .build(field, None, None)
            .unwrap(),
    )
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

fn single_layers(c: &Arc<PresentedCategory>, order: &[usize]) -> Filtration {
    Filtration::new(c, order.iter().map(|&x| vec![x]).collect()).unwrap()
}

const A3_ORDERS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn family(name: &str, filtration: &str, layers: usize, field: &str) -> qhcat::cli::Built {
    SpecFile {
        field: field.into(),
        family: Some(FamilySpec {
            name: name.into(),
            filtration: filtration.into(),
            layers,
            cols: None,
            window: None,
        }),
        quiver: None,
        layers: None,
    }
    .build()
    .unwrap()
}

fn random_scalars_in(rng: &mut ChaCha8Rng, field: Field, n: usize, bound: i64) -> Vec<Scalar> {
    (0..n)
        .map(|_| field.from_i64(rng.gen_range(-bound..=bound)))
        .collect()
}

fn random_scalars(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Vec<Scalar> {
    random_scalars_in(rng, field, n, 6)
}

fn nonzero_scalars(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Vec<Scalar> {
    loop {
        let v = random_scalars(rng, field, n);
        if v.iter().any(|s| !s.is_zero()) {
            return v;
        }
    }
}

fn combination(field: Field, classes: &[Vec<Scalar>], coeffs: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![field.zero(); classes[0].len()];
    for (class, k) in classes.iter().zip(coeffs) {
        for (o, v) in out.iter_mut().zip(class) {
            *o = &*o + &(v * k);
        }
    }
    out
}

/// A random non-split extension `0 → N → E → M → 0`, if `Ext¹(M, N) ≠ 0`.
fn random_extension(
    rng: &mut ChaCha8Rng,
    m: &FunctorModule,
    n: &FunctorModule,
) -> Option<FunctorModule> {
    let ext = ext1(m, n).unwrap();
    if ext.dim() == 0 {
        return None;
    }
    let coeffs = nonzero_scalars(rng, m.field(), ext.dim());
    let cocycle = combination(m.field(), &ext.classes, &coeffs);
    let e = extension_from_cocycle(m, n, &cocycle).unwrap();
    assert!(e.is_exact());
    Some(e.module)
}

/// Expected rows from the top boundary row down; `?` marks an unspecified cell.
const EXPECTED_IDEAL: [&str; 7] = [
    "K K K K K . . .",
    "K K K K K . .",
    "K K K K K K . .",
    "K K K K K . .",
    "K K K K K K . .",
    "K K K K K . .",
    "K K K K K . . .",
];
const EXPECTED_COVER: [&str; 7] = [
    "K2 K2 K2 K2 K . . .",
    "K2 K2 K2 K2 K . .",
    "K2 K2 K2 K2 K2 K . .",
    "K2 K2 K2 K2 K2 . .",
    "K2 K2 K2 K2 K2 K . .",
    "K2 K2 K2 K2 K . .",
    "K2 K2 K2 K2 K ? ? ?",
];
const EXPECTED_KERNEL: [&str; 7] = [
    "K K K K . . . .",
    "K K K K . . .",
    "K K K K K . . .",
    "K K K K K . .",
    "K K K K K . . .",
    "K K K K . . .",
    "K K K K . . . .",
];

fn section<'a>(stdout: &'a str, title: &str) -> Vec<Vec<&'a str>> {
    let header = format!("== {title} ==");
    stdout
        .lines()
        .skip_while(|l| *l != header)
        .skip(1)
        .take_while(|l| !l.is_empty())
        .map(|l| l.split_whitespace().collect())
        .collect()
}

fn grid_mismatches(got: &[Vec<&str>], want: &[&str]) -> usize {
    if got.len() != want.len() {
        return usize::MAX;
    }
    got.iter()
        .zip(want)
        .map(|(g, w)| {
            let w: Vec<&str> = w.split_whitespace().collect();
            if g.len() != w.len() {
                return w.len();
            }
            g.iter()
                .zip(&w)
                .filter(|(a, b)| **b != "?" && a != b)
                .count()
        })
        .sum()
}

fn criterion_1() -> (bool, String) {
    let start = Instant::now();
    let out = run([
        "qhcat",
        "ideal",
        "--family",
        "za-inf-inf",
        "--layer",
        "4",
        "--target",
        "E5_7",
    ]);
    let elapsed = start.elapsed();
    let grids = [
        ("I_B4(-,(13,3))", &EXPECTED_IDEAL),
        ("cover [(12,4), (12,2)]", &EXPECTED_COVER),
        ("kernel [(11,3)]", &EXPECTED_KERNEL),
    ];
    let mismatches: Vec<usize> = grids
        .iter()
        .map(|(title, want)| grid_mismatches(&section(&out.stdout, title), want.as_slice()))
        .collect();
    let width = section(&out.stdout, grids[0].0)
        .iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0);
    let matched = mismatches.iter().all(|&m| m == 0);
    (
        out.code == 0 && matched && width >= 8 && elapsed < GRID_TIME_LIMIT,
        format!("window 7 x {width}, mismatched cells {mismatches:?}, limit {GRID_TIME_LIMIT:?}"),
    )
}

/// (family, filtration, expected to pass)
const FAMILIES: [(&str, &str, bool); 6] = [
    ("za-inf", "standard", true),
    ("za-inf", "boxes", false),
    ("za-inf-inf", "standard", true),
    ("zd-inf", "standard", false),
    ("n-d4", "standard", true),
    ("n-e6", "standard", true),
];

struct FamilyResult {
    built: qhcat::cli::Built,
    passed: bool,
    routes_agree: bool,
}

fn criterion_2(results: &mut Vec<FamilyResult>) -> (bool, String) {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (name, filtration, _) in FAMILIES {
        let built = family(name, filtration, 4, "q");
        let cert = check_qh(&built.category, &built.filtration).unwrap();
        let routes_agree = cert.check_passed("routes agree") == Some(true);
        parts.push(format!(
            "{name}/{filtration} {}{}",
            if cert.passed { "pass" } else { "fail" },
            if routes_agree {
                ""
            } else {
                " (routes disagree)"
            }
        ));
        if !cert.passed {
            line(&format!(
                "    {name}/{filtration}: {}",
                cert.counterexample.clone().unwrap_or_default()
            ));
        }
        results.push(FamilyResult {
            built,
            passed: cert.passed,
            routes_agree,
        });
    }
    let elapsed = start.elapsed();
    let all = results.iter().all(|r| r.passed && r.routes_agree);
    (
        all && elapsed < FAMILIES_TIME_LIMIT,
        format!("4 layers: {}", parts.join(", ")),
    )
}

fn criterion_3(results: &[FamilyResult]) -> (bool, String) {
    let mut windows = 0;
    let mut counterexamples = Vec::new();
    let mut sweep = |label: String, c: &Arc<PresentedCategory>, f: &Filtration| {
        let fam = standard_family(c, f).unwrap();
        let cert = check_delta_lemmas(&fam).unwrap();
        windows += 1;
        if !cert.passed {
            counterexamples.push(format!(
                "{label}: {}",
                cert.counterexample.unwrap_or_default()
            ));
        }
    };
    for (r, (name, filtration, _)) in results.iter().zip(FAMILIES) {
        if r.passed {
            sweep(
                format!("{name}/{filtration}"),
                &r.built.category,
                &r.built.filtration,
            );
        }
    }
    let a3 = linear(3, Field::Rational);
    for order in A3_ORDERS {
        sweep(format!("A3 {order:?}"), &a3, &single_layers(&a3, &order));
    }
    (
        counterexamples.is_empty(),
        format!("{windows} certified windows, counterexamples {counterexamples:?}"),
    )
}

fn criterion_4() -> (bool, String) {
    let w = ZaWindow::rectangle(6, -4..=3, Field::Rational).unwrap();
    let ses = verify_ses(&w, 3, 1).unwrap();
    let tilting = verify_tilting(&w).unwrap();
    let fam = row_family(&w).unwrap();
    let filtered = verify_t_in_fdelta(&w, &fam, 1, 1).unwrap();
    let one_per_layer = filtered.check_passed("one standard summand per layer") == Some(true);
    let ext = tilting.check_passed("Ext1(T, T') = 0") == Some(true);
    let resolutions = tilting.check_passed("two-term resolutions of representables") == Some(true);
    (
        ses.passed && tilting.passed && ext && resolutions && filtered.passed && one_per_layer,
        format!(
            "6 x 8 window ({} cells): sequence {}, Ext1 {}, resolutions {}, T(1,1) one Delta per layer {}",
            w.cells().len(),
            ses.passed,
            ext,
            resolutions,
            one_per_layer
        ),
    )
}

/// Representables, simples, standard and costandard modules, and random extensions among them.
fn corpus(
    rng: &mut ChaCha8Rng,
    c: &Arc<PresentedCategory>,
    fam: &StandardFamily,
    extensions: usize,
) -> Vec<FunctorModule> {
    let mut base: Vec<FunctorModule> = (0..c.len())
        .map(|x| FunctorModule::representable(c, x))
        .collect();
    base.extend((0..c.len()).map(|x| simple(c, x)));
    base.extend(fam.deltas().cloned());
    base.extend(fam.nablas().cloned());
    let mut out = base.clone();
    let mut attempts = 0;
    while out.len() < base.len() + extensions && attempts < extensions * 20 {
        attempts += 1;
        let m = &base[rng.gen_range(0..base.len())];
        let n = &base[rng.gen_range(0..base.len())];
        if let Some(e) = random_extension(rng, m, n) {
            out.push(e);
        }
    }
    out
}

fn criterion_5() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut total = 0;
    let mut filtered = 0;
    let mut disagreements = Vec::new();
    let mut check = |label: &str, fam: &StandardFamily, modules: &[FunctorModule]| {
        for m in modules {
            let cert = tor_criterion(m, fam).unwrap();
            total += 1;
            if cert.check_passed("tor-vanishing") == Some(true) {
                filtered += 1;
            }
            if cert.check_passed("agrees with trace filtration") != Some(true) {
                disagreements.push(format!("{label}: {:?}", m.dims()));
            }
        }
    };
    let a3 = linear(3, Field::Rational);
    for order in A3_ORDERS {
        let fam = standard_family(&a3, &single_layers(&a3, &order).declare_finite()).unwrap();
        let modules = corpus(&mut rng, &a3, &fam, 12);
        check(&format!("A3 {order:?}"), &fam, &modules);
    }
    for (name, filtration, layers) in [("za-inf-inf", "standard", 3), ("n-d4", "standard", 3)] {
        let built = family(name, filtration, layers, "q");
        let f = built.filtration.clone().declare_finite();
        let fam = standard_family(&built.category, &f).unwrap();
        let modules = corpus(&mut rng, &built.category, &fam, 10);
        check(name, &fam, &modules);
    }
    (
        total >= TOR_CORPUS_MIN && disagreements.is_empty(),
        format!("{total} modules ({filtered} Delta-filtered), disagreements {disagreements:?}"),
    )
}

fn criterion_6() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut total = 0;
    let mut failures = Vec::new();
    let mut approximate = |label: &str, fam: &StandardFamily, modules: &[FunctorModule]| {
        for m in modules {
            let a = right_approximation(m, fam, &[]).unwrap();
            total += 1;
            if !(a.certificate.passed && a.certificate.recheck()) {
                failures.push(format!("{label}: {:?}", m.dims()));
            }
        }
    };
    let a3 = linear(3, Field::Rational);
    for order in A3_ORDERS {
        let fam = standard_family(&a3, &single_layers(&a3, &order)).unwrap();
        let modules = corpus(&mut rng, &a3, &fam, 3);
        approximate(&format!("A3 {order:?}"), &fam, &modules);
    }
    let built = family("za-inf-inf", "standard", 3, "q");
    let fam = standard_family(&built.category, &built.filtration).unwrap();
    let modules: Vec<FunctorModule> = (0..built.category.len())
        .step_by(3)
        .map(|x| simple(&built.category, x))
        .collect();
    approximate("za-inf-inf", &fam, &modules);
    (
        total >= APPROX_CORPUS_MIN && failures.is_empty(),
        format!("{total} modules, failures {failures:?}"),
    )
}

fn criterion_7() -> (bool, String) {
    let a2 = linear(2, Field::Rational);
    let a3 = linear(3, Field::Rational);
    let sink_first = |c: &Arc<PresentedCategory>| {
        let order: Vec<usize> = (0..c.len()).rev().collect();
        single_layers(c, &order)
    };
    let mut parts = Vec::new();
    let mut all = true;
    for (label, left, right) in [("A2 (x) A2", &a2, &a2), ("A3 (x) A2", &a3, &a2)] {
        let v = verify_tensor_qh(left, &sink_first(left), right, &sink_first(right)).unwrap();
        let heredity = v.certificate.passed && v.certificate.recheck();
        all &= heredity;
        parts.push(format!(
            "{label} {} ideals {}",
            v.chain.terms.len(),
            if heredity { "pass" } else { "fail" }
        ));
    }
    let t = tensor_category(&a2, &a2).unwrap();
    let first = descending_chain(&a2, &sink_first(&a2));
    let literal = check_chain(&t.category, &literal_chain(&t, &first, &first).unwrap()).unwrap();
    parts.push(format!(
        "alternating chain without refinement {}",
        if literal.passed { "passes" } else { "fails" }
    ));
    (all, parts.join(", "))
}

fn trace(m: &Matrix) -> Scalar {
    let f = m.field();
    (0..m.nrows()).fold(f.zero(), |acc, i| &acc + m.get(i, i))
}

fn random_matrix(rng: &mut ChaCha8Rng, field: Field, rows: usize, cols: usize) -> Matrix {
    let entries = (0..rows)
        .map(|_| random_scalars_in(rng, field, cols, 5))
        .collect();
    Matrix::from_rows(field, cols, entries)
}

fn unit_triangular(rng: &mut ChaCha8Rng, field: Field, n: usize, lower: bool) -> Matrix {
    let entries = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i == j, (i > j) == lower) {
                    (true, _) => field.one(),
                    (false, true) => field.from_i64(rng.gen_range(-4..=4)),
                    _ => field.zero(),
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(field, n, entries)
}

/// Modules with composable morphism triples, for the functoriality and additivity instances.
struct ModulePool {
    category: Arc<PresentedCategory>,
    modules: Vec<FunctorModule>,
    triples: Vec<(usize, usize, usize)>,
    maps: Vec<(usize, usize, Vec<ModuleMap>)>,
}

fn module_pool(rng: &mut ChaCha8Rng, c: Arc<PresentedCategory>, f: &Filtration) -> ModulePool {
    let fam = standard_family(&c, f).unwrap();
    let modules = corpus(rng, &c, &fam, 4);
    let n = c.len();
    let mut triples = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for w in 0..n {
                if c.dim(x, y) > 0 && c.dim(y, w) > 0 && c.dim(x, w) > 0 {
                    triples.push((x, y, w));
                }
            }
        }
    }
    let mut maps = Vec::new();
    while maps.len() < 12 {
        let (a, b) = (
            rng.gen_range(0..modules.len()),
            rng.gen_range(0..modules.len()),
        );
        let basis = hom_space(&modules[a], &modules[b]).unwrap();
        if !basis.is_empty() {
            maps.push((a, b, basis));
        }
    }
    ModulePool {
        category: c,
        modules,
        triples,
        maps,
    }
}

fn exactness_instance(
    rng: &mut ChaCha8Rng,
    field: Field,
    kind: usize,
    pools: &[ModulePool],
) -> Result<(), String> {
    match kind {
        0 => {
            let (rows, cols) = (rng.gen_range(1..=7), rng.gen_range(1..=7));
            let a = if rng.gen_bool(0.5) {
                random_matrix(rng, field, rows, cols)
            } else {
                let k = rng.gen_range(1..=cols);
                &random_matrix(rng, field, rows, k) * &random_matrix(rng, field, k, cols)
            };
            let kernel = a.kernel_basis();
            let r = a.rank();
            let ok = r + kernel.ncols() == cols
                && (&a * &kernel).is_zero()
                && a.image_basis().ncols() == r
                && a.transpose().rank() == r;
            ok.then_some(())
                .ok_or_else(|| format!("rank-nullity {rows}x{cols}"))
        }
        1 => {
            let n = rng.gen_range(1..=6);
            let s = &unit_triangular(rng, field, n, true) * &unit_triangular(rng, field, n, false);
            let inverse = s
                .solve_matrix(&Matrix::identity(field, n))
                .unwrap()
                .unwrap();
            let ones: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
            let d = Matrix::from_fn(field, n, n, |i, j| {
                if i == j && ones[i] {
                    field.one()
                } else {
                    field.zero()
                }
            });
            let p = &(&s * &d) * &inverse;
            let rank = ones.iter().filter(|&&b| b).count();
            let ok = &p * &p == p && p.rank() == rank && trace(&p) == field.from_i64(rank as i64);
            ok.then_some(())
                .ok_or_else(|| format!("idempotent of size {n}"))
        }
        2 => {
            let pool = &pools[rng.gen_range(0..pools.len())];
            let c = &pool.category;
            let (x, y, w) = pool.triples[rng.gen_range(0..pool.triples.len())];
            let m = &pool.modules[rng.gen_range(0..pool.modules.len())];
            let f = random_scalars(rng, field, c.dim(x, y));
            let g = random_scalars(rng, field, c.dim(y, w));
            let gf = c.compose_vec(x, y, w, &f, &g);
            let ok = m.act(x, w, &gf) == &m.act(x, y, &f) * &m.act(y, w, &g);
            ok.then_some(())
                .ok_or_else(|| format!("functoriality at {x} -> {y} -> {w}"))
        }
        _ => {
            let pool = &pools[rng.gen_range(0..pools.len())];
            let (a, b, basis) = &pool.maps[rng.gen_range(0..pool.maps.len())];
            let coeffs = random_scalars(rng, field, basis.len());
            let map = basis.iter().zip(&coeffs).fold(
                ModuleMap::zero(&pool.modules[*a], &pool.modules[*b]),
                |acc, (h, k)| acc.add(&h.scale(k)),
            );
            let (kernel, inclusion) = map.kernel().unwrap();
            let (image, _) = map.image().unwrap();
            let (cokernel, _) = map.cokernel().unwrap();
            let (src, dst) = (map.source(), map.target());
            let additive = (0..pool.category.len()).all(|x| {
                src.dim(x) == kernel.dim(x) + image.dim(x)
                    && dst.dim(x) == image.dim(x) + cokernel.dim(x)
            });
            let ok =
                additive && inclusion.then(&map).unwrap().is_zero() && inclusion.is_injective();
            ok.then_some(())
                .ok_or_else(|| "kernel/image/cokernel dimensions".to_string())
        }
    }
}

fn criterion_8() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut failures = Vec::new();
    let mut count = 0;
    for (field, name) in [
        (Field::Rational, "q".to_string()),
        (Field::Prime(PRIME), format!("fp:{PRIME}")),
    ] {
        let a3 = linear(3, field);
        let built = family("za-inf-inf", "standard", 3, &name);
        let pools = [
            module_pool(&mut rng, a3.clone(), &single_layers(&a3, &[2, 1, 0])),
            module_pool(&mut rng, built.category.clone(), &built.filtration),
        ];
        for k in 0..EXACTNESS_INSTANCES / 2 {
            count += 1;
            if let Err(e) = exactness_instance(&mut rng, field, k % 4, &pools) {
                failures.push(format!("{field}: {e}"));
            }
        }
    }
    (
        count >= EXACTNESS_INSTANCES && failures.is_empty(),
        format!(
            "{count} instances over Q and F_{PRIME}, failures {}",
            failures.len()
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let mut families = Vec::new();
    let outcomes = [
        timed(1, "ideal, cover and kernel grids", criterion_1),
        timed(
            2,
            "quasi-hereditary certification of the example families",
            || criterion_2(&mut families),
        ),
        timed(3, "standard module lemma sweeps", || criterion_3(&families)),
        timed(4, "tilting family", criterion_4),
        timed(5, "Tor criterion equivalence", criterion_5),
        timed(6, "right approximations", criterion_6),
        timed(7, "tensor products", criterion_7),
        timed(8, "exactness suite", criterion_8),
    ];
    for (r, (name, filtration, expected)) in families.iter().zip(FAMILIES) {
        assert!(r.routes_agree, "{name}/{filtration}: routes disagree");
        assert_eq!(r.passed, expected, "{name}/{filtration}");
    }
    for o in &outcomes {
        let expected_failure = EXPECTED_FAILURES.iter().find(|(c, _)| *c == o.criterion);
        if let Some((_, reason)) = expected_failure {
            line(&format!(
                "  criterion {} is expected to fail: {reason}",
                o.criterion
            ));
        }
        assert_eq!(
            o.passed,
            expected_failure.is_none(),
            "criterion {}: {}",
            o.criterion,
            o.detail
        );
    }
}
