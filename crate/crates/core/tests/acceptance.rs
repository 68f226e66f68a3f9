//! Acceptance criteria, one pass/fail line each. Oracles used here are
//! written independently of the library code they check.

use std::collections::BTreeMap;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::Instant;

use adams_bar_core::bar;
use adams_bar_core::cdga::{BiDegree, Cdga, Element, GeneratorSpec, TruncationWindow};
use adams_bar_core::cell::{hom_complex, hom_group, CellModule, Column};
use adams_bar_core::connection::{from_connection, t_truncate, t_truncate_module, to_connection};
use adams_bar_core::linalg::kernel_basis;
use adams_bar_core::minimal_model::{idempotence_witnesses, quillen_compare, relative_minimal_model};
use adams_bar_core::parse::{parse_cdga, CdgaFile};
use adams_bar_core::relative::{
    bar_connection, base_change, coaction_check, delta_stabilization, pi1_demo, semidirect, AugmentedOverN,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

mod common;
use common::{adjoin_random, has_differential, int, random_free};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn fixture(name: &str) -> CdgaFile {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    parse_cdga(&std::fs::read_to_string(&path).expect("fixture readable")).expect("fixture parses")
}

fn absolute_fixtures() -> Vec<Cdga> {
    ["e1.cdga", "e2.cdga", "e3.cdga", "e4.cdga", "e4prime.cdga"].iter().map(|f| fixture(f).cdga).collect()
}

fn pair(total: &str) -> AugmentedOverN {
    AugmentedOverN::from_files(&fixture("e1.cdga"), &fixture(total)).expect("relative fixture")
}

fn bar_d_squared_failures(a: &Cdga, w_max: usize) -> usize {
    let mut bad = 0;
    for w in 1..=w_max {
        for word in bar::words_of_weight(a, w) {
            let dd = bar::bar_d_chain(a, &bar::bar_d(a, &word));
            if dd.values().any(|c| !c.is_zero()) {
                bad += 1;
            }
        }
    }
    bad
}

fn criterion_1() -> Outcome {
    let mut rng = StdRng::seed_from_u64(1);
    let mut algebras = absolute_fixtures();
    algebras.extend((0..50).map(|k| random_free(&mut rng, k, k % 2 == 0)));
    let window = TruncationWindow::new(5, 4).unwrap();
    let mut words = 0;
    let nontrivial = algebras.iter().filter(|a| has_differential(a)).count();
    for a in &algebras {
        let v = a.validate(window);
        ensure!(v.passed(), "{} fails validation: {:?}", a.name(), v.failures);
        let bad = bar_d_squared_failures(a, 4);
        ensure!(bad == 0, "{}: bar_d^2 != 0 on {bad} words", a.name());
        words += (1..=4).map(|w| bar::words_of_weight(a, w).len()).sum::<usize>();
    }
    Ok(format!("{} algebras, {nontrivial} with nonzero d, {words} bar words", algebras.len()))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for a in absolute_fixtures() {
        let hp = bar::h0_hopf(&a, 4).map_err(|e| e.to_string())?;
        for (label, ws) in [
            ("commutativity", hp.check_commutative()),
            ("associativity", hp.check_associative()),
            ("coassociativity", hp.check_coassociative()),
            ("counit", hp.check_counit()),
            ("bialgebra", hp.check_bialgebra()),
            ("antipode", hp.check_antipode()),
            ("chain level", hp.witnesses.clone()),
        ] {
            ensure!(ws.is_empty(), "{} {label}: {:?}", a.name(), ws.first());
        }
        checked += hp.dims().iter().sum::<usize>();
    }
    Ok(format!("{checked} basis elements"))
}

type Word = Vec<u8>;

fn all_words(letters: u8, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out.iter().flat_map(|w| (0..letters).map(move |l| [w.clone(), vec![l]].concat())).collect();
    }
    out
}

/// Shuffle product of words of degree-zero letters: no signs.
fn shuffle_words(u: &[u8], v: &[u8]) -> BTreeMap<Word, i64> {
    if u.is_empty() || v.is_empty() {
        return BTreeMap::from([([u, v].concat(), 1)]);
    }
    let mut out = BTreeMap::new();
    for (head, rest, other) in [(u[0], &u[1..], v), (v[0], &v[1..], u)] {
        for (w, c) in shuffle_words(rest, other) {
            *out.entry([vec![head], w].concat()).or_insert(0) += c;
        }
    }
    out
}

fn dense_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, |r| r.len());
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = &row[c] / &pivot_row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Number of words of length `w` over `q` letters, and the rank of the span
/// of all shuffles of shorter nonempty words.
fn shuffle_oracle(q: u8, w: usize) -> (usize, usize) {
    let words = all_words(q, w);
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut rows = Vec::new();
    for k in 1..w {
        for u in all_words(q, k) {
            for v in all_words(q, w - k) {
                let mut row = vec![BigRational::zero(); words.len()];
                for (x, c) in shuffle_words(&u, &v) {
                    row[index[&x]] += BigRational::from_integer(BigInt::from(c));
                }
                rows.push(row);
            }
        }
    }
    (words.len(), dense_rank(rows))
}

fn is_lyndon(w: &[u8]) -> bool {
    (1..w.len()).all(|k| w < &[&w[k..], &w[..k]].concat()[..])
}

fn lyndon_count(q: u8, w: usize) -> usize {
    all_words(q, w).iter().filter(|x| is_lyndon(x)).count()
}

fn criterion_3() -> Outcome {
    let e2 = fixture("e2.cdga").cdga;
    let hp = bar::h0_hopf(&e2, 4).map_err(|e| e.to_string())?;
    let g = bar::gamma(&e2, 4).map_err(|e| e.to_string())?;
    let mut h0 = Vec::new();
    let mut gamma = Vec::new();
    for w in 1..=4 {
        let (words, decomposable) = shuffle_oracle(2, w);
        ensure!(words == 1 << w, "oracle word count {words} at weight {w}");
        ensure!(words - decomposable == lyndon_count(2, w), "shuffle oracle disagrees with Lyndon count at {w}");
        h0.push(words);
        gamma.push(words - decomposable);
    }
    ensure!(gamma == vec![2, 1, 2, 3], "oracle gamma {gamma:?}");
    ensure!(hp.dims()[1..] == h0[..], "H0 dims {:?} vs oracle {h0:?}", hp.dims());
    ensure!(g.colie.dims[1..] == gamma[..], "gamma dims {:?} vs oracle {gamma:?}", g.colie.dims);
    Ok(format!("H0 {h0:?}, gamma {gamma:?}"))
}

fn criterion_4() -> Outcome {
    let mut dims = Vec::new();
    for name in ["e1.cdga", "e2.cdga", "e3.cdga"] {
        let a = fixture(name).cdga;
        let r = quillen_compare(&a, 3).map_err(|e| e.to_string())?;
        ensure!(r.passed(), "{}: {:?}", a.name(), r.witnesses);
        ensure!(r.gamma_dims == r.qa_dims, "{}: gamma {:?} vs QA {:?}", a.name(), r.gamma_dims, r.qa_dims);
        dims.push(format!("{} {:?}", a.name(), &r.qa_dims[1..]));
    }
    Ok(dims.join(", "))
}

fn criterion_5() -> Outcome {
    let base = fixture("e1.cdga").cdga;
    let total = fixture("e4.cdga").cdga;
    let images = vec![total.gen("x")];
    let r = relative_minimal_model(&base, &total, &images, 2, 3).map_err(|e| e.to_string())?;
    ensure!(r.certificate.passed(), "certificate: {:?}", r.certificate);
    let mut covered = Vec::new();
    for i in 1..=2 {
        for w in 1..=3 {
            let s = r.certificate.slices.iter().find(|s| s.degree == i && s.weight == w);
            ensure!(s.is_some_and(|s| s.ok && s.requirement == "iso"), "slice ({i},{w}) missing or not iso");
            covered.push((i, w));
        }
    }
    let idem = idempotence_witnesses(&r, &base).map_err(|e| e.to_string())?;
    ensure!(idem.is_empty(), "not idempotent: {idem:?}");
    let own: Vec<String> = r.own_generators().map(|g| r.model.generators()[g].name.clone()).collect();
    ensure!(own.len() == 2, "expected two own generators, got {own:?}");
    Ok(format!("{} iso slices, own generators {own:?}", covered.len()))
}

fn criterion_6() -> Outcome {
    let x = pair("e4.cdga");
    let h0 = |a: &Cdga, w: usize| bar::h0_weight(a, w, None).dim();
    let total = x.total().clone();
    let base = x.base().clone();
    let fiber = x.fiber();
    let mut rows = Vec::new();
    for w in 0..=4 {
        let lhs = h0(&total, w);
        let rhs: usize = (0..=w).map(|v| h0(&base, v) * h0(&fiber, w - v)).sum();
        ensure!(lhs == rhs, "weight {w}: total {lhs} vs product {rhs}");
        rows.push(lhs);
    }
    let sd = semidirect(&x, 4).map_err(|e| e.to_string())?;
    ensure!(sd.passed(), "semidirect witnesses: {:?}", sd.witnesses);
    ensure!(sd.total_dims == rows, "library total dims {:?} vs {rows:?}", sd.total_dims);
    Ok(format!("total dims {rows:?}"))
}

/// A base of one or two closed degree-one generators plus free own
/// generators whose differentials only involve earlier generators.
fn random_relative(rng: &mut StdRng, k: usize) -> AugmentedOverN {
    loop {
        let mut base = Cdga::free(format!("N{k}"), Vec::new()).unwrap();
        let mut specs: Vec<GeneratorSpec> =
            (0..rng.gen_range(1..=2)).map(|i| GeneratorSpec::new(format!("t{i}"), 1, rng.gen_range(1..=2))).collect();
        specs.sort_by_key(|s| s.bidegree.adams);
        adjoin_random(rng, &mut base, specs);
        let mut total = base.clone();
        total.set_name(format!("T{k}"));
        let mut own: Vec<GeneratorSpec> =
            (0..rng.gen_range(1..=3)).map(|i| GeneratorSpec::new(format!("u{i}"), 1, rng.gen_range(1..=3))).collect();
        own.sort_by_key(|s| s.bidegree.adams);
        adjoin_random(rng, &mut total, own);
        let nontrivial = (base.num_generators()..total.num_generators()).any(|g| !total.differential_of(g).is_zero());
        if let (true, Ok(x)) = (nontrivial, AugmentedOverN::new(&base, &total, &BTreeMap::new())) {
            return x;
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    let mut pairs = vec![pair("e4.cdga"), pair("e4prime.cdga")];
    pairs.extend((0..20).map(|k| random_relative(&mut rng, k)));
    let mut entries = 0;
    for x in &pairs {
        let r = coaction_check(x, 3).map_err(|e| e.to_string())?;
        ensure!(
            r.passed(),
            "{}: split {:?} conn {:?} witnesses {:?}",
            x.total().name(),
            r.split,
            r.conn,
            r.witnesses
        );
        entries += r.split.len();
        let flat = bar_connection(x, 3).flatness_witnesses();
        ensure!(flat.is_empty(), "{}: bar connection is not flat: {:?}", x.total().name(), flat.first());
    }
    ensure!(entries > 0, "all co-action matrices vanish");
    Ok(format!("{} instances, {entries} nonzero matrix entries", pairs.len()))
}

/// Cells added one at a time, each with a random closed boundary in the
/// module built so far. Odd `k` keeps every cell in degree zero.
fn random_module(rng: &mut StdRng, a: &Cdga, k: usize) -> CellModule {
    let mut cells = Vec::new();
    let mut columns: Vec<Column> = Vec::new();
    for j in 0..rng.gen_range(2..=5) {
        let deg = if k % 2 == 1 { 0 } else { rng.gen_range(-1..=1) };
        let wt = rng.gen_range(0..=2);
        let m = CellModule::new("partial", a, cells.clone(), columns.clone()).unwrap();
        let basis = m.slice_basis(deg + 1, wt);
        let mut col = Column::new();
        if rng.gen_bool(0.8) {
            for z in kernel_basis(&m.d_matrix(deg + 1, wt)).vectors {
                let c = int([-1, 1, 2][rng.gen_range(0..3)]);
                for (i, x) in z {
                    let (mono, cell) = &basis[i];
                    col.entry(*cell).or_insert_with(Element::zero).add_term(mono.clone(), &x * &c);
                }
            }
        }
        col.retain(|_, e| !e.is_zero());
        cells.push((format!("b{j}"), BiDegree::new(deg, wt)));
        columns.push(col);
    }
    CellModule::new(format!("M{k}"), a, cells, columns).unwrap()
}

type Dims = BTreeMap<(i64, i64), usize>;

fn q_dims(m: &CellModule) -> Dims {
    m.q_functor().cohomology()
}

fn add_dims(x: &Dims, y: &Dims) -> Dims {
    let mut out = x.clone();
    for (k, v) in y {
        *out.entry(*k).or_insert(0) += v;
    }
    out
}

fn weight_identities(m: &CellModule) -> Result<(), String> {
    let full = q_dims(m);
    let weights = m.weights();
    let lo = weights.first().copied().unwrap_or(0) - 1;
    let hi = weights.last().copied().unwrap_or(0);
    let mut graded = Dims::new();
    for n in lo..=hi {
        let t = m.weight_truncate(n);
        ensure!(t.lower.len() + t.upper.len() == m.len(), "{}: cell count at weight {n}", m.name);
        ensure!(add_dims(&q_dims(&t.lower), &q_dims(&t.upper)) == full, "{}: split at weight {n}", m.name);
        graded = add_dims(&graded, &q_dims(&t.graded));
    }
    ensure!(graded == full, "{}: graded pieces do not add up", m.name);
    Ok(())
}

fn heart_consistency(m: &CellModule) -> Result<bool, String> {
    let c = to_connection(m);
    for n in -1..=1 {
        let t = t_truncate(&c, n).map_err(|e| e.to_string())?;
        ensure!(t.witnesses.is_empty(), "{} at {n}: {:?}", m.name, t.witnesses);
        let h = from_connection(&t.cohomology).map_err(|e| e.to_string())?;
        ensure!(h.shift_by(n).in_heart(), "{}: H^{n} is not in the heart", m.name);
    }
    let upper0 = t_truncate(&c, 0).map_err(|e| e.to_string())?.upper;
    let lower_neg = t_truncate(&c, -1).map_err(|e| e.to_string())?.lower;
    let by_truncation = upper0.q_complex().is_acyclic() && lower_neg.q_complex().is_acyclic();
    ensure!(m.in_heart() == by_truncation, "{}: heart predicate disagrees with truncation", m.name);
    if m.in_heart() {
        let (lower, ..) = t_truncate_module(m, 0).map_err(|e| e.to_string())?;
        let (_, both, ..) = t_truncate_module(&lower, -1).map_err(|e| e.to_string())?;
        ensure!(q_dims(&both) == q_dims(m) && both.in_heart(), "{}: truncations move a heart member", m.name);
    }
    Ok(m.in_heart())
}

fn criterion_8() -> Outcome {
    let a = fixture("e3.cdga").cdga;
    let mut rng = StdRng::seed_from_u64(8);
    let corpus: Vec<CellModule> = (0..20).map(|k| random_module(&mut rng, &a, k)).collect();
    let mut hearts = 0;
    for m in &corpus {
        weight_identities(m)?;
        if heart_consistency(m)? {
            hearts += 1;
        }
    }
    let mut nonzero_homs = 0;
    for (i, m) in corpus.iter().enumerate() {
        let n = &corpus[(i + 1) % corpus.len()];
        let (le0, ..) = t_truncate_module(m, 0).map_err(|e| e.to_string())?;
        let (_, ge0, ..) = t_truncate_module(n, -1).map_err(|e| e.to_string())?;
        ensure!(q_dims(&le0).keys().all(|k| k.0 <= 0) && q_dims(&ge0).keys().all(|k| k.0 >= 0), "truncation degrees");
        let h = hom_group(&le0, &ge0.shift_by(-1)).map_err(|e| e.to_string())?;
        ensure!(h == 0, "Hom({}, {}[-1]) has dimension {h}", m.name, n.name);
        if hom_group(&le0, &ge0).map_err(|e| e.to_string())? > 0 {
            nonzero_homs += 1;
        }
    }
    let mut tate = 0;
    for x in 0..=3 {
        for y in 0..=3 {
            let hom = hom_complex(&CellModule::tate(&a, x), &CellModule::tate(&a, y)).map_err(|e| e.to_string())?;
            for n in 0..=2 {
                let want = if y >= x { a.cohomology_slice(n, y - x).dim } else { 0 };
                let got = hom.cohomology_dim(n, 0);
                ensure!(got == want, "Hom(Q({x}), Q({y})[{n}]) = {got}, expected {want}");
                tate += got;
            }
            let h0 = hom_group(&CellModule::tate(&a, x), &CellModule::tate(&a, y)).map_err(|e| e.to_string())?;
            ensure!(h0 == usize::from(x == y), "Hom(Q({x}), Q({y})) = {h0}");
        }
    }
    Ok(format!("20 modules, {hearts} in the heart, {nonzero_homs} nonzero Hom(t<=0, t>=0), Tate total {tate}"))
}

fn criterion_9() -> Outcome {
    let mut algebras = absolute_fixtures();
    algebras.push(pair("e4.cdga").fiber());
    algebras.push(pair("e4prime.cdga").fiber());
    let w_max = 4;
    let mut checked = 0;
    for a in &algebras {
        let full: Vec<usize> = (0..=w_max).map(|w| bar::h0_weight(a, w, None).dim()).collect();
        let st = delta_stabilization(a, w_max, w_max).map_err(|e| e.to_string())?;
        ensure!(st.witnesses.is_empty(), "{}: {:?}", a.name(), st.witnesses);
        ensure!(st.full == full, "{}: full {:?} vs {full:?}", a.name(), st.full);
        for m in 0..=w_max {
            let trunc = bar::bar_truncated_h0(a, m, w_max).map_err(|e| e.to_string())?;
            for w in 1..=m {
                ensure!(trunc[w] == full[w], "{}: truncated m={m} w={w}: {} vs {}", a.name(), trunc[w], full[w]);
                ensure!(st.dims[m][w] == full[w], "{}: delta n={m} w={w}: {} vs {}", a.name(), st.dims[m][w], full[w]);
                checked += 2;
            }
        }
    }
    Ok(format!("{} algebras, {checked} comparisons", algebras.len()))
}

fn criterion_10() -> Outcome {
    let mut out = Vec::new();
    for total in ["e4.cdga", "e4prime.cdga"] {
        let x = pair(total);
        let bc = base_change(&x, 4).map_err(|e| e.to_string())?;
        ensure!(bc.passed(), "{total}: {:?}", bc.witnesses);
        ensure!(bc.before.passed() && bc.after.passed(), "{total}: kernel identification fails after base change");
        ensure!(bc.coaction_before.passed() && bc.coaction_after.passed(), "{total}: co-actions disagree after base change");
        ensure!(
            (&bc.before.kernel_dims, &bc.before.base_dims, &bc.before.total_dims)
                == (&bc.after.kernel_dims, &bc.after.base_dims, &bc.after.total_dims),
            "{total}: dimensions changed"
        );
        ensure!(bc.coaction_before.split.len() == bc.coaction_after.split.len(), "{total}: co-action support changed");
        out.push(format!("{} kernel {:?}", x.total().name(), bc.after.kernel_dims));
    }
    Ok(out.join(", "))
}

fn criterion_11() -> Outcome {
    let mut out = Vec::new();
    for k in 2..=4 {
        let d = pi1_demo(k, 4).map_err(|e| e.to_string())?;
        let oracle: Vec<usize> = (1..=4).map(|w| lyndon_count(k as u8 - 1, w)).collect();
        ensure!(d.gamma_dims[1..] == oracle[..], "k={k}: gamma {:?} vs Lyndon {oracle:?}", d.gamma_dims);
        ensure!(d.passed(), "k={k}: {:?}", d.witnesses);
        ensure!(d.note.contains("not the motivic"), "k={k}: report lacks the scope note");
        out.push(format!("k={k} {oracle:?}"));
    }
    Ok(out.join(", "))
}

fn run(number: usize, name: &str, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let secs = start.elapsed().as_secs_f64();
    match &result {
        Ok(detail) => println!("criterion {number:>2} PASS  {name} ({detail}; {secs:.1}s)"),
        Err(why) => println!("criterion {number:>2} FAIL  {name}: {why} ({secs:.1}s)"),
    }
    result.is_ok()
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("structural soundness", criterion_1),
        ("Hopf axioms", criterion_2),
        ("bar dimensions vs shuffle oracle", criterion_3),
        ("Quillen comparison", criterion_4),
        ("relative minimal model certification", criterion_5),
        ("kernel identification", criterion_6),
        ("two co-actions agree", criterion_7),
        ("t-structure and weight filtration", criterion_8),
        ("stabilization of truncations", criterion_9),
        ("base change", criterion_10),
        ("punctured line demo", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        if !run(i + 1, name, f) {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
