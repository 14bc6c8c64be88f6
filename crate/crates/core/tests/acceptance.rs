//! Acceptance criteria. Run with `cargo test --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion. Every comparison is exact
//! equality of rationals.

mod common;

use std::collections::HashMap;

use hoalg::constructions::PBWAlgebra;
use hoalg::envelope::{envelope_general, envelope_of_dgl, primitives_linf, Envelope};
use hoalg::homotopy::{bar, check_jacobi, check_stasheff, Antisymmetrized, LInfAlgebra};
use hoalg::models::{
    example, quillen_model_of, sullivan_model, whitehead_massey_certificate, Example,
};
use hoalg::multiop::bounded_tuples;
use hoalg::scalar::{factorial, int, q, sign};
use hoalg::transfer::{
    homology_contraction, perturb_contraction, underlying_complex, ContractionOptions,
};
use hoalg::{Element, Operations, Truncation, Q};

const TOLERANCE: &str = "exact rational equality";

fn report(n: usize, ok: bool, detail: &str) {
    println!(
        "criterion {n:>2}: {} ({detail}; tolerance: {TOLERANCE})",
        if ok { "PASS" } else { "FAIL" }
    );
}

fn catalog() -> Vec<Example> {
    vec![
        Example::Cpk(1),
        Example::Cpk(2),
        Example::Cpk(3),
        Example::OddSphere(3),
        Example::OddSphere(5),
        Example::OddSphere(7),
        Example::EvenSphere(2),
        Example::EvenSphere(4),
        Example::EvenSphere(6),
        Example::EmProduct(vec![2, 5]),
        Example::EmProduct(vec![2, 3, 4]),
        Example::EmProduct(vec![3, 3]),
    ]
}

/// The DGL part (`ℓ₁`, `ℓ₂`) of an L∞ algebra.
fn dgl_part(l: &LInfAlgebra) -> LInfAlgebra {
    let mut out = LInfAlgebra::new(l.space().clone());
    for k in [1, 2] {
        if let Some(m) = l.op_table(k) {
            for (x, v) in m.entries() {
                out.set(x.clone(), v.clone()).unwrap();
            }
        }
    }
    out
}

/// `ι ℓₙ = Σ_σ χ(σ) mₙ∘σ` on every tuple of `H` within `t`, arity ≤ `max_n`.
/// Returns (tuples checked, failures).
fn antisymmetrization_failures(e: &Envelope, t: &Truncation, max_n: usize) -> (usize, usize) {
    let h = e.lie.space();
    let anti = Antisymmetrized::new(&e.structure);
    let (mut checked, mut failed) = (0, 0);
    for n in 1..=max_n.min(t.max_arity) {
        for x in bounded_tuples(h, n, n as i64 - 2, t.max_degree) {
            let lhs = e.inclusion.apply(&e.lie.op_basis(n, &x).unwrap());
            let ys: Vec<Element> = x.iter().map(|&i| e.letter(i)).collect();
            let refs: Vec<&Element> = ys.iter().collect();
            let rhs = anti.op(n, &refs).unwrap();
            checked += 1;
            if lhs != rhs {
                failed += 1;
            }
        }
    }
    (checked, failed)
}

/// Catalog envelope checks: `m₁ = 0`; `m₂` is the classical envelope
/// product of the DGL part of `L`; `m_{k+1}(x,…,x) = y/((k+1)!)²` when
/// `top` is `Some(k+1)`; every other table is empty; Stasheff and the
/// antisymmetrization identity hold.
fn catalog_check(e: &Envelope, l: &LInfAlgebra, t: &Truncation, top: Option<usize>) -> Vec<String> {
    let mut problems = Vec::new();
    let space = e.space();
    let pbw = PBWAlgebra::new(
        dgl_part(l),
        &Truncation {
            max_degree: t.max_degree + 1,
            ..*t
        },
    )
    .unwrap();
    let by_name: HashMap<&str, usize> = (0..space.dim()).map(|i| (space.name(i), i)).collect();
    for (k, table) in e.structure.tables() {
        match k {
            1 => problems.push("m1 ≠ 0".into()),
            2 => {}
            k if Some(k) == top => {}
            k => problems.push(format!("m{k} ≠ 0 ({} entries)", table.len())),
        }
    }
    for x in bounded_tuples(space, 2, 0, t.max_degree) {
        let got = e.structure.op_basis(2, &x).unwrap();
        let u = pbw.space().require(space.name(x[0])).unwrap();
        let v = pbw.space().require(space.name(x[1])).unwrap();
        let want = pbw
            .mul_basis(u, v)
            .unwrap()
            .map_indices(|w| by_name[pbw.space().name(w)]);
        if got != want {
            problems.push(format!("m2({},{}) = {}", space.name(x[0]), space.name(x[1]), got.format(space)));
        }
    }
    if let Some(n) = top {
        let x = e.letter(l.space().require("x").unwrap());
        let y = e.letter(l.space().require("y").unwrap());
        let args = vec![&x; n];
        let got = e.structure.op(n, &args).unwrap();
        let want = y.scaled(&(factorial(n) * factorial(n)).recip());
        if got != want {
            problems.push(format!("m{n}(x,…,x) = {}", got.format(space)));
        }
    }
    let stasheff = check_stasheff(&e.structure, t).unwrap();
    if let Some(f) = stasheff.first_failure(space, space) {
        problems.push(f);
    }
    let (_, failed) = antisymmetrization_failures(e, t, t.max_arity);
    if failed > 0 {
        problems.push(format!("antisymmetrization identity fails on {failed} tuples"));
    }
    problems
}

fn cpk_truncation(k: usize) -> Truncation {
    Truncation::new(4 * k as i64 + 2, k + 2, 8).unwrap()
}

fn sphere_truncation() -> Truncation {
    Truncation::new(12, 4, 8).unwrap()
}

fn cpk_envelope(k: usize) -> (LInfAlgebra, Envelope, Truncation) {
    let t = cpk_truncation(k);
    let l = example(&Example::Cpk(k)).unwrap();
    let e = envelope_general(&l, &t, None).unwrap();
    (l, e, t)
}

fn sphere_envelopes() -> Vec<(Example, LInfAlgebra, Envelope)> {
    let t = sphere_truncation();
    [Example::OddSphere(3), Example::OddSphere(5), Example::OddSphere(7), Example::EvenSphere(2), Example::EvenSphere(4), Example::EvenSphere(6)]
        .into_iter()
        .map(|ex| {
            let l = example(&ex).unwrap();
            let e = envelope_general(&l, &t, None).unwrap();
            (ex, l, e)
        })
        .collect()
}

const RANDOM_DGLS: usize = 24;
const RANDOM_MAX_DIM: usize = 12;

fn random_truncation() -> Truncation {
    Truncation::new(10, 4, 8).unwrap()
}

/// Seeded random DGLs with their envelopes.
fn random_envelopes(count: usize, seed: u64) -> Vec<(LInfAlgebra, Envelope)> {
    let mut rng = common::rng(seed);
    let t = random_truncation();
    let mut out = Vec::new();
    while out.len() < count {
        let Some(l) = common::random_dgl(&mut rng, RANDOM_MAX_DIM) else {
            continue;
        };
        if l.space().max_degree() > Some(t.max_degree) {
            continue;
        }
        let c = homology_contraction(&underlying_complex(&l).unwrap(), &ContractionOptions::default()).unwrap();
        let e = envelope_of_dgl(&l, &c, &t).unwrap();
        out.push((l, e));
    }
    out
}

#[test]
fn criterion_01_cpk_envelope_numbers() {
    let mut ok = true;
    let mut details = Vec::new();
    for k in 1..=3 {
        let (l, e, t) = cpk_envelope(k);
        let problems = catalog_check(&e, &l, &t, Some(k + 1));
        if !problems.is_empty() {
            ok = false;
            details.push(format!("cpk {k}: {}", problems.join("; ")));
        }
    }
    report(1, ok, &format!("ℂP^k, k = 1..3, m_(k+1)(x,…,x) = y/((k+1)!)², other m_n zero {}", details.join(" | ")));
    assert!(ok, "{details:?}");
}

#[test]
fn criterion_02_sphere_envelopes() {
    let t = sphere_truncation();
    let mut details = Vec::new();
    for (ex, l, e) in sphere_envelopes() {
        let problems = catalog_check(&e, &l, &t, None);
        let mut extra = Vec::new();
        match ex {
            Example::EvenSphere(_) => {
                let x = e.letter(0);
                let m2 = e.structure.op(2, &[&x, &x]).unwrap();
                if m2 != e.letter(1).scaled(&q(1, 2)) {
                    extra.push(format!("m2(x,x) = {}", m2.format(e.space())));
                }
            }
            _ => {
                if e.structure.tables().any(|(k, m)| k != 2 && !m.is_zero()) {
                    extra.push("higher product present".into());
                }
            }
        }
        if !problems.is_empty() || !extra.is_empty() {
            details.push(format!("{ex}: {} {}", problems.join("; "), extra.join("; ")));
        }
    }
    let ok = details.is_empty();
    report(2, ok, &format!("odd spheres 3,5,7 have no m_(≥3); even spheres 2,4,6 have m2(x,x) = y/2 {}", details.join(" | ")));
    assert!(ok, "{details:?}");
}

#[test]
fn criterion_03_antisymmetrization_on_random_dgls() {
    let t = random_truncation();
    let mut checked = 0;
    let mut failed = 0;
    let envs = random_envelopes(RANDOM_DGLS, 3);
    let higher = envs
        .iter()
        .filter(|(_, e)| e.lie.tables().any(|(k, m)| k >= 3 && !m.is_zero()))
        .count();
    let compatible = envs.iter().filter(|(_, e)| e.homotopy_compatible).count();
    for (_, e) in &envs {
        let (c, f) = antisymmetrization_failures(e, &t, 4);
        checked += c;
        failed += f;
    }
    let ok = failed == 0 && envs.len() >= 20 && higher > 0;
    report(
        3,
        ok,
        &format!(
            "{} random DGLs ({higher} with a nonzero transferred ℓ_(≥3), {compatible} homotopy compatible), {checked} homology tuples with n ≤ 4 and degree ≤ 10, {failed} failures",
            envs.len()
        ),
    );
    assert!(ok);
}

#[test]
fn criterion_04_transferred_identities() {
    let mut structures = 0;
    let mut problems = Vec::new();
    let mut check = |name: String, e: &Envelope, t: &Truncation| {
        structures += 1;
        let s = check_stasheff(&e.structure, t).unwrap();
        let j = check_jacobi(&e.lie, t).unwrap();
        let b = bar(&e.structure, t).unwrap().check();
        if !s.passed() || !j.passed() || !b.square_zero {
            problems.push(format!("{name}: stasheff {} jacobi {} bar {}", s.passed(), j.passed(), b.square_zero));
        }
    };
    for k in 1..=3 {
        let (_, e, t) = cpk_envelope(k);
        check(format!("cpk {k}"), &e, &t);
    }
    for (ex, _, e) in sphere_envelopes() {
        check(ex.to_string(), &e, &sphere_truncation());
    }
    for (i, (_, e)) in random_envelopes(RANDOM_DGLS, 3).iter().enumerate() {
        check(format!("random DGL {i}"), e, &random_truncation());
    }
    let ok = problems.is_empty();
    report(4, ok, &format!("{structures} transferred structures pass Stasheff, Jacobi and bar δ² = 0 {}", problems.join(" | ")));
    assert!(ok, "{problems:?}");
}

#[test]
fn criterion_05_contraction_axioms() {
    let mut rng = common::rng(5);
    let mut homology = 0;
    let mut perturbed = 0;
    let mut failures = 0;
    for _ in 0..50 {
        let c = common::random_complex(&mut rng, 0, 4, 12);
        let h = homology_contraction(&c, &ContractionOptions::default()).unwrap();
        homology += 1;
        if !h.check().passed() {
            failures += 1;
        }
    }
    for _ in 0..50 {
        let a = common::random_complex(&mut rng, 0, 2, 2);
        let b = common::random_complex(&mut rng, 0, 2, 2);
        let (ab, t) = common::tensor_bicomplex(&a, &b);
        let h = homology_contraction(&ab, &ContractionOptions::default()).unwrap();
        let p = perturb_contraction(&h, &t, 16).unwrap();
        perturbed += 1;
        if !h.check().passed() || !p.check().passed() || p.big.d != ab.d.plus(&t) {
            failures += 1;
        }
    }
    let ok = failures == 0;
    report(
        5,
        ok,
        &format!("{homology} homology contractions and {perturbed} perturbed contractions satisfy qi = id, dK + Kd = iq − id, K² = Ki = qK = 0; {failures} failures"),
    );
    assert!(ok);
}

fn catalog_truncation(ex: &Example) -> Truncation {
    match ex {
        Example::Cpk(k) => cpk_truncation(*k),
        _ => Truncation::new(12, 4, 8).unwrap(),
    }
}

#[test]
fn criterion_06_primitives_round_trip() {
    let mut bad = Vec::new();
    let entries = catalog();
    for ex in &entries {
        let t = catalog_truncation(ex);
        let l = example(ex).unwrap();
        let e = envelope_general(&l, &t, None).unwrap();
        if primitives_linf(&e, &t).unwrap() != l.truncated(&t) {
            bad.push(ex.to_string());
        }
    }
    let ok = bad.is_empty();
    report(6, ok, &format!("primitives of the envelope equal L for {} catalog entries {}", entries.len(), bad.join(", ")));
    assert!(ok, "{bad:?}");
}

/// `⟨d_{k+1} w, (sx)^{k+1}⟩ / (k+1)!` straight from the catalog `m_{k+1}`.
fn sullivan_oracle(k: usize) -> Q {
    let n = k + 1;
    let m = (factorial(n) * factorial(n)).recip();
    let mut total = int(0);
    for sigma in hoalg::perm::all_permutations(n) {
        total += int(hoalg::perm::chi(&sigma, &vec![1; n]).unwrap()) * &m;
    }
    let eps: i64 = (1..n as i64).map(|j| n as i64 - j).sum();
    sign(eps) * total / factorial(n)
}

#[test]
fn criterion_07_sullivan_models() {
    let golden = [q(-1, 4), q(-1, 36), q(1, 576)];
    let mut bad = Vec::new();
    for k in 1..=3usize {
        let c = sullivan_oracle(k);
        if c != golden[k - 1] {
            bad.push(format!("oracle for k = {k} gives {c}"));
        }
        let t = Truncation::new(2 * k as i64 + 1, k + 2, 8).unwrap();
        let e = envelope_general(&example(&Example::Cpk(k)).unwrap(), &t, None).unwrap();
        let s = sullivan_model(&e, &t).unwrap();
        let v = s.generators.require("v_x").unwrap();
        let w = s.generators.require("v_y").unwrap();
        let power = s.algebra.normal_form(&vec![v; k + 1]).unwrap();
        if !s.on_generators[v].is_zero()
            || s.on_generators[w] != power.scaled(&golden[k - 1])
            || !s.square_defects().is_empty()
        {
            bad.push(format!("k = {k}: {}", s.format_generator(w)));
        }
    }
    let ok = bad.is_empty();
    report(7, ok, &format!("ℂP^k Sullivan models dw = c v^(k+1) with c = -1/4, -1/36, 1/576 and d² = 0 {}", bad.join(" | ")));
    assert!(ok, "{bad:?}");
}

#[test]
fn criterion_08_quillen_models() {
    let t = Truncation::new(9, 5, 10).unwrap();
    let mut bad = Vec::new();
    let entries = catalog();
    for ex in &entries {
        let l = example(ex).unwrap();
        let e = envelope_general(&l, &t, None).unwrap();
        let qm = quillen_model_of(&e, &t).unwrap();
        let defects = qm.square_defects();
        let mismatches = qm.homology_mismatches().unwrap();
        if !defects.is_empty() || !mismatches.is_empty() {
            bad.push(format!("{ex}: ∂² defects {}, homology mismatches {mismatches:?}", defects.len()));
        }
    }
    let ok = bad.is_empty();
    report(8, ok, &format!("{} catalog Quillen models have ∂² = 0 and homology of dim L up to degree 8 {}", entries.len(), bad.join(" | ")));
    assert!(ok, "{bad:?}");
}

fn cli(args: &[&str], stdin: &str) -> (i32, String) {
    let mut input = stdin.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["hoalg"];
    argv.extend_from_slice(args);
    let code = hoalg::cli::run(argv, &mut input, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap())
}

#[test]
fn criterion_09_whitehead_certificates() {
    let (_, cp2) = cli(&["example", "cpk", "2"], "");
    let (code, text) = cli(&["certify-whitehead", "-", "--tuple", "x,x,x", "--max-degree", "6", "--max-arity", "4"], &cp2);
    let mut ok = code == 0 && text.contains("verdict equal");
    let t = random_truncation();
    let mut pairs = 0;
    let mut failed = 0;
    let mut triples = 0;
    for (_, e) in random_envelopes(24, 3) {
        for x in bounded_tuples(e.lie.space(), 2, 0, t.max_degree) {
            pairs += 1;
            if !whitehead_massey_certificate(&e, &x, &t).unwrap().equal() {
                failed += 1;
            }
        }
        for x in bounded_tuples(e.lie.space(), 3, 1, t.max_degree) {
            let cert = whitehead_massey_certificate(&e, &x, &t).unwrap();
            if cert.bracket.is_zero() {
                continue;
            }
            triples += 1;
            if !cert.equal() {
                failed += 1;
            }
        }
    }
    ok &= failed == 0 && triples > 0;
    report(
        9,
        ok,
        &format!("ℂP² (x,x,x) certified by the CLI; {pairs} pairs and {triples} triples with nonzero ℓ3 on 24 random DGL envelopes, {failed} failures"),
    );
    assert!(ok, "{text}");
}

/// Adds one to the first coefficient of a single entry.
fn corrupt(e: &Envelope, k: usize, x: &[usize]) -> Envelope {
    let mut bad = e.clone();
    let v = e.structure.op_table(k).unwrap().eval_basis(x);
    let (i, c) = v.leading().unwrap();
    let mut w = v.clone();
    w.add_term(i, -c.clone() + c + int(1));
    bad.structure.set(x.to_vec(), w).unwrap();
    bad
}

#[test]
fn criterion_10_negative_controls() {
    let mut survivors = Vec::new();
    let mut corrupted = 0;
    let mut sweep = |name: &str, e: &Envelope, l: &LInfAlgebra, t: &Truncation, top: Option<usize>| {
        assert!(catalog_check(e, l, t, top).is_empty(), "{name} must pass before corruption");
        let entries: Vec<(usize, Vec<usize>)> = e
            .structure
            .tables()
            .flat_map(|(k, m)| m.entries().map(move |(x, _)| (k, x.clone())))
            .collect();
        for (k, x) in entries {
            corrupted += 1;
            if catalog_check(&corrupt(e, k, &x), l, t, top).is_empty() {
                survivors.push(format!("{name} m{k}{x:?}"));
            }
        }
    };
    for k in 1..=2 {
        let (l, e, t) = cpk_envelope(k);
        sweep(&format!("cpk {k}"), &e, &l, &t, Some(k + 1));
    }
    let st = sphere_truncation();
    for (ex, l, e) in sphere_envelopes().into_iter().filter(|(ex, _, _)| matches!(ex, Example::OddSphere(3) | Example::EvenSphere(2) | Example::EvenSphere(4))) {
        sweep(&ex.to_string(), &e, &l, &st, None);
    }
    // the certificate on ℂP² and on a pair with a nonzero bracket
    let t = Truncation::new(6, 4, 8).unwrap();
    let e = envelope_general(&example(&Example::Cpk(2)).unwrap(), &t, None).unwrap();
    let m3 = e.structure.op_table(3).unwrap();
    for (x, _) in m3.entries().filter(|(x, _)| x.iter().all(|&i| i == 0)) {
        corrupted += 1;
        if whitehead_massey_certificate(&corrupt(&e, 3, x), &[0, 0, 0], &t).unwrap().equal() {
            survivors.push(format!("certificate m3{x:?}"));
        }
    }
    let rt = random_truncation();
    let mut pair_controls = 0;
    for (_, e) in random_envelopes(12, 9) {
        for x in bounded_tuples(e.lie.space(), 2, 0, rt.max_degree) {
            let cert = whitehead_massey_certificate(&e, &x, &rt).unwrap();
            if cert.lhs.is_zero() || pair_controls >= 10 {
                continue;
            }
            pair_controls += 1;
            corrupted += 1;
            let ys: Vec<usize> = x.iter().map(|&i| e.letter(i).leading().unwrap().0).collect();
            if whitehead_massey_certificate(&corrupt(&e, 2, &ys), &x, &rt).unwrap().equal() {
                survivors.push(format!("certificate pair {x:?}"));
            }
        }
    }
    let ok = survivors.is_empty() && pair_controls > 0;
    report(
        10,
        ok,
        &format!("{corrupted} single-constant corruptions, every one flips its check {}", survivors.join(", ")),
    );
    assert!(ok, "{survivors:?}");
}
