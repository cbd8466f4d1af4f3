//! The end-to-end acceptance suite. Each numbered criterion prints one
//! pass/fail line; the test fails if any criterion does.

use std::path::Path;
use std::time::Instant;

use rand::Rng;
use serde::Deserialize;

use pcf_core::arena::Arena;
use pcf_core::axioms::{check_axiom, Axiom};
use pcf_core::decompose::{classify, decompose, recompose, strict_total, Class};
use pcf_core::denote::{adequacy_check, Denoter};
use pcf_core::eval::Outcome;
use pcf_core::evaltree::{
    approximant, extract_term, extract_term_pk, tree_of_strategy, tree_of_term,
    EvalTree,
};
use pcf_core::fullabs::coherence_check;
use pcf_core::generate::{
    prune_random, random_canonical_term, random_y_term, rng_from_seed,
};
use pcf_core::parse::{parse_term, parse_type};
use pcf_core::stlc::check_full_completeness;
use pcf_core::strategy::Strategy;
use pcf_core::syntax::Term;

fn canonical(point: &Strategy) -> Strategy {
    let root = &point.cod().roots[0];
    let dom = Arena::product(
        root.children.iter().map(|c| Arena { roots: vec![c.clone()] }),
    );
    point
        .resplit(dom, Arena::flat(root.answers))
        .expect("closed point has a canonical split")
}

fn denote_canonical(m: &Term, window: u32, unroll: u32) -> Strategy {
    canonical(
        &Denoter::new(window, unroll)
            .denote_closed(m)
            .expect("generated term denotes"),
    )
}

fn uses_fixpoint(m: &Term) -> bool {
    match m {
        Term::Y(_) => true,
        Term::Lam(_, _, b) => uses_fixpoint(b),
        Term::App(f, a) => uses_fixpoint(f) || uses_fixpoint(a),
        _ => false,
    }
}

/// Tree agreement between the model route and the syntactic route. A `cut`
/// on the syntactic side may stand for a diverging head normalization that
/// the finite-unroll denotation collapses to bottom, so it matches bottom
/// as well as a model-side cut.
fn trees_agree(model: &EvalTree, syntactic: &EvalTree) -> bool {
    match (model, syntactic) {
        (EvalTree::Bottom, EvalTree::Cut) | (EvalTree::Cut, EvalTree::Cut) => true,
        (
            EvalTree::Node { binders: b1, head: h1, args: a1, branches: r1 },
            EvalTree::Node { binders: b2, head: h2, args: a2, branches: r2 },
        ) => {
            b1 == b2
                && h1 == h2
                && a1.len() == a2.len()
                && a1.iter().zip(a2).all(|(x, y)| trees_agree(x, y))
                && r1.len() == r2.len()
                && r1
                    .iter()
                    .zip(r2)
                    .all(|((k1, x), (k2, y))| k1 == k2 && trees_agree(x, y))
        }
        _ => model == syntactic,
    }
}

#[derive(Deserialize)]
struct ManifestEntry {
    file: String,
    expected: Option<u32>,
}

fn criterion_1() -> (bool, String) {
    let start = Instant::now();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/adequacy");
    let manifest: Vec<ManifestEntry> = serde_json::from_str(
        &std::fs::read_to_string(dir.join("manifest.json")).expect("manifest"),
    )
    .expect("well-formed manifest");
    let mut ok = manifest.len() >= 30;
    let (mut diverging_loops, mut terminating_recursions, mut agreed) = (0, 0, 0);
    for e in &manifest {
        let src = std::fs::read_to_string(dir.join(&e.file)).expect("program");
        let m = parse_term(&src).expect("parses");
        if uses_fixpoint(&m) {
            match e.expected {
                None => diverging_loops += 1,
                Some(_) => terminating_recursions += 1,
            }
        }
        let rep = adequacy_check(&m, 100_000, 4, 32).expect("adequacy runs");
        let operational = match rep.operational {
            Outcome::Converges(v) => Some(v),
            Outcome::FuelExhausted => None,
        };
        if rep.agree && operational == e.expected {
            agreed += 1;
        } else {
            ok = false;
        }
    }
    ok &= diverging_loops >= 5 && terminating_recursions >= 5;
    let elapsed = start.elapsed();
    ok &= elapsed.as_secs() < 60;
    (
        ok,
        format!(
            "{}/{} programs agree ({} diverging loops, {} terminating recursions), {:.1}s",
            agreed,
            manifest.len(),
            diverging_loops,
            terminating_recursions,
            elapsed.as_secs_f64()
        ),
    )
}

/// Generated strategies shared between criteria 2 and 3.
fn generated_strategies() -> Vec<(Strategy, u32)> {
    let mut rng = rng_from_seed(11);
    let types = [
        parse_type("nat -> nat").unwrap(),
        parse_type("(nat -> nat) -> nat").unwrap(),
        parse_type("nat -> nat -> nat").unwrap(),
    ];
    let mut out = Vec::new();
    let mut i = 0;
    while out.len() < 510 && i < 2000 {
        let ty = &types[i % types.len()];
        let window = 2 + (i % 2) as u32;
        let m = random_canonical_term(&mut rng, ty, 3, window);
        let mut f = denote_canonical(&m, window, 8);
        if rng.gen_range(0..3u32) == 0 {
            f = prune_random(&mut rng, &f, 2);
        }
        if f.norm() <= 6 {
            out.push((f, window));
        }
        i += 1;
    }
    out
}

fn criterion_2(set: &[(Strategy, u32)]) -> (bool, String) {
    let mut ok = set.len() >= 500;
    let mut failures = 0;
    for (f, window) in set {
        let d = match decompose(f) {
            Ok(d) => d,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        let back = recompose(&d, f.dom(), f.cod().roots[0].answers);
        if back.as_ref() != Ok(f) {
            failures += 1;
            continue;
        }
        // trichotomy: classification and the strict/total predicates agree
        let st = strict_total(f).expect("strictness defined");
        let consistent = match classify(f).expect("classification defined") {
            Class::Bottom => f.is_bot() && st.strict && !st.total,
            Class::Constant(x) => {
                !st.strict
                    && !f.is_bot()
                    && Strategy::constant(f.dom().clone(), x, *window)
                        .map(|c| c == *f)
                        .unwrap_or(false)
            }
            Class::StrictTotal { .. } => st.strict && st.total,
        };
        if !consistent {
            failures += 1;
        }
    }
    ok &= failures == 0;
    (
        ok,
        format!("{} strategies, {} failures", set.len(), failures),
    )
}

fn criterion_3(set: &[(Strategy, u32)]) -> (bool, String) {
    let totals: Vec<&(Strategy, u32)> = set
        .iter()
        .filter(|(f, _)| {
            matches!(classify(f), Ok(Class::StrictTotal { .. }))
        })
        .collect();
    let mut failures = 0;
    for (f, window) in &totals {
        let m = match extract_term(f) {
            Ok(m) => m,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        if denote_canonical(&m, *window, 8) != *f {
            failures += 1;
        }
    }
    let mut pk_failures = 0;
    for (f, window) in totals.iter().take(30) {
        for k in 0..=8 {
            let lhs = extract_term_pk(f, k)
                .map(|m| denote_canonical(&m, *window, 8));
            let rhs = approximant(f, k);
            if lhs.ok() != rhs.ok() {
                pk_failures += 1;
            }
        }
    }
    (
        failures == 0 && pk_failures == 0,
        format!(
            "{} total strategies round-trip ({} failures), approximant sweep {} failures",
            totals.len(),
            failures,
            pk_failures
        ),
    )
}

fn criterion_4() -> (bool, String) {
    let mut ok = true;
    let mut detail = String::new();
    for which in Axiom::all() {
        let rep = check_axiom(which, 200, 5, 3);
        ok &= rep.ok() && rep.passed == 200;
        detail.push_str(&format!("{} {}/200 ", which, rep.passed));
    }
    (ok, detail.trim_end().to_string())
}

fn criterion_5() -> (bool, String) {
    let mut rng = rng_from_seed(23);
    let types = [
        parse_type("nat -> nat").unwrap(),
        parse_type("nat -> nat -> nat").unwrap(),
        parse_type("(nat -> nat) -> nat").unwrap(),
    ];
    let mut mismatches = 0;
    let y_free = 110;
    for i in 0..y_free {
        let m = random_canonical_term(&mut rng, &types[i % types.len()], 3, 3);
        let model = tree_of_strategy(&denote_canonical(&m, 3, 16), 16);
        let syntactic = tree_of_term(&m, 16, 3, 100_000);
        match (model, syntactic) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => mismatches += 1,
        }
    }
    let mut y_mismatches = 0;
    let y_terms = 22;
    for _ in 0..y_terms {
        let m = random_y_term(&mut rng, 3);
        let model = tree_of_strategy(&denote_canonical(&m, 3, 16), 4);
        let syntactic = tree_of_term(&m, 4, 3, 100_000);
        match (model, syntactic) {
            (Ok(a), Ok(b)) if trees_agree(&a, &b) => {}
            _ => y_mismatches += 1,
        }
    }
    (
        mismatches == 0 && y_mismatches == 0,
        format!(
            "{} fixpoint-free terms ({} mismatches), {} fixpoint terms ({} mismatches)",
            y_free, mismatches, y_terms, y_mismatches
        ),
    )
}

fn criterion_6() -> (bool, String) {
    let cases = [
        ("i -> i", 7, 3, Some(1)),
        ("(i -> i) -> i -> i", 7, 3, Some(3)),
        ("i -> i -> i", 7, 3, Some(2)),
        ("((i -> i) -> i) -> i", 9, 4, None),
    ];
    let mut ok = true;
    let mut detail = String::new();
    for (ty, size, norm, expect) in cases {
        let t = parse_type(ty).unwrap();
        let rep = check_full_completeness(&t, size, norm).expect("check runs");
        ok &= rep.ok;
        if let Some(n) = expect {
            ok &= rep.nf_count == n;
        }
        detail.push_str(&format!("{}: {} NFs; ", ty, rep.nf_count));
    }
    (ok, detail.trim_end().trim_end_matches(';').to_string())
}

fn criterion_7() -> (bool, String) {
    let mut rng = rng_from_seed(31);
    let types = [
        parse_type("nat -> nat").unwrap(),
        parse_type("nat -> nat -> nat").unwrap(),
    ];
    let mut first_order: Vec<Term> = (0..23)
        .map(|_| random_canonical_term(&mut rng, &types[0], 3, 2))
        .collect();
    for src in [
        "\\x:nat. 0",
        "\\x:nat. 1",
        "\\x:nat. omega",
        "\\x:nat. case[1] x 0",
    ] {
        first_order.push(parse_term(src).unwrap());
    }
    let mut second_order: Vec<Term> = (0..23)
        .map(|_| random_canonical_term(&mut rng, &types[1], 3, 2))
        .collect();
    for src in [
        "\\x:nat. \\y:nat. case[1] x (case[1] y 0)",
        "\\x:nat. \\y:nat. case[1] y (case[1] x 0)",
    ] {
        second_order.push(parse_term(src).unwrap());
    }
    let mut pairs = 0;
    let mut incoherent = 0;
    let mut separations = 0;
    for pool in [&first_order, &second_order] {
        for i in 0..pool.len() {
            let j = (i + 1) % pool.len();
            for (m, n) in [(&pool[i], &pool[j]), (&pool[j], &pool[i])] {
                pairs += 1;
                let rep =
                    coherence_check(m, n, 3, 1_500, 2, 8).expect("comparison runs");
                if !rep.coherent {
                    incoherent += 1;
                }
                if rep.intrinsic.is_some() || rep.observational.is_some() {
                    separations += 1;
                }
            }
        }
    }
    (
        pairs >= 100 && incoherent == 0,
        format!(
            "{} directed comparisons, {} separations, {} mismatches",
            pairs, separations, incoherent
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let set = generated_strategies();
    let results = [
        ("1 computational adequacy", criterion_1()),
        ("2 decomposition uniqueness", criterion_2(&set)),
        ("3 definability round-trip", criterion_3(&set)),
        ("4 axiom suites", criterion_4()),
        ("5 evaluation-tree oracle", criterion_5()),
        ("6 full completeness", criterion_6()),
        ("7 comparison coherence", criterion_7()),
    ];
    let mut all = true;
    for (name, (ok, detail)) in &results {
        println!(
            "criterion {}: {} — {}",
            name,
            if *ok { "PASS" } else { "FAIL" },
            detail
        );
        all &= ok;
    }
    assert!(all, "some acceptance criteria failed");
}
