//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the test harness so the lines show up in `cargo test`
//! output. Exits nonzero when a criterion fails that is not listed in
//! [`KNOWN_FAILURES`]; those are printed as FAIL with the measured values.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use serde_json::Value;
use whitehead_core::dgl::{FreeDgl, HomologyClass};
use whitehead_core::fixtures;
use whitehead_core::investigation::{investigate_example37, Example37Report, EXAMPLE37_CAP};
use whitehead_core::lie::LieElement;
use whitehead_core::qlinalg::Scalar;
use whitehead_core::retract::{random_retract, HomotopyData, Retract};
use whitehead_core::syntax::parse_dgl;
use whitehead_core::transfer::{verify_generalized_jacobi, LInftyTable, Transfer, TreeWeights};
use whitehead_core::trees::enumerate_trees;
use whitehead_core::whitehead::{
    build_fat_wedge, verify_elprime, verify_elsegundo, verify_main1, Extension, Main1Outcome,
};
use whitehead_core::coalgebra::PhiOutcome;

/// `H_10` of the twisted example is two-dimensional (it also holds the class
/// of `[z, z]`) and the printed attaching image is not a cycle, so the
/// homology criterion cannot pass as stated.
const KNOWN_FAILURES: &[usize] = &[2];

struct Outcome {
    passed: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            passed: true,
            notes: Vec::new(),
        }
    }

    fn require(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.passed = false;
            self.notes.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn t2() -> Arc<FreeDgl> {
    build_fat_wedge(&[3, 3, 3], None).unwrap().dgl().clone()
}

fn named_fixtures() -> Vec<(&'static str, Arc<FreeDgl>)> {
    vec![
        ("example37", fixtures::example37(Some(EXAMPLE37_CAP)).unwrap()),
        ("t0", fixtures::t0(None).unwrap()),
        ("t1", fixtures::t1(None).unwrap()),
        ("t2", t2()),
    ]
}

/// The reference retract of a fixture: the bundled table for the twisted
/// example, the standard one otherwise.
fn reference_retract(name: &str, dgl: Arc<FreeDgl>) -> Retract {
    if name == "example37" {
        fixtures::example37_table_retract(dgl).unwrap()
    } else {
        Retract::standard(dgl).unwrap()
    }
}

fn units(table: &LInftyTable, tuple: &[usize]) -> Vec<HomologyClass> {
    tuple
        .iter()
        .map(|&g| {
            let (n, j) = table.basis()[g];
            HomologyClass::unit(n, table.homology_dims()[&n], j)
        })
        .collect()
}

fn structural_exactness() -> Outcome {
    let mut out = Outcome::new();
    for (name, dgl) in named_fixtures() {
        let r = dgl.check(200, 0).unwrap();
        out.require(r.passed(), format!("{name}: {r:?}"));
        out.note(format!("{name}: {} Jacobi samples, {} derivation samples", r.jacobi_samples, r.derivation_samples));
    }
    let wedges: [&[i64]; 8] = [&[2, 2], &[3, 3], &[2, 2, 2], &[3, 3, 3], &[2, 3, 4], &[2, 2, 2, 2], &[3, 3, 3, 3], &[3, 3, 3, 3, 3]];
    for spheres in wedges {
        let m = build_fat_wedge(spheres, None).unwrap();
        let r = m.dgl().check(200, 0).unwrap();
        out.require(r.passed(), format!("fat wedge {spheres:?}: {r:?}"));
        out.require(
            m.product().apply_differential(m.omega()).is_zero(),
            format!("fat wedge {spheres:?}: attaching element is not a cycle"),
        );
        out.note(format!("fat wedge {spheres:?}: cap {}, {} Jacobi samples", m.dgl().cap(), r.jacobi_samples));
    }
    out
}

fn example37_homology(r: &Example37Report) -> Outcome {
    let mut out = Outcome::new();
    let dim = |n: i64| r.homology_dims.get(&n).copied().unwrap_or(0);
    out.require(dim(2) == 4, format!("dim H_2 = {}", dim(2)));
    out.require(dim(5) == 1, format!("dim H_5 = {}", dim(5)));
    out.require(dim(10) == 1, format!("dim H_10 = {}, representatives {:?}", dim(10), r.h10_representatives));
    out.require(r.class_generates_h10, format!("class of phi(omega) {} does not generate H_10", r.whitehead_class));
    out.require(
        r.listed_matches.is_some(),
        format!("listed element differs from phi(omega) = {}", r.whitehead_element),
    );
    out.note(format!("listed element is a cycle: {}; its boundary: {}", r.listed_is_cycle, r.listed_boundary));
    for t in &r.terms {
        let mark = if t.computed == t.listed { "" } else { "  <- differs" };
        out.note(format!("term {}: computed {}, listed {}{mark}", t.term, t.computed, t.listed));
    }
    out
}

fn representative(dgl: &FreeDgl, h: &HomologyClass) -> LieElement {
    let reps = dgl.homology(h.degree).unwrap();
    let mut out = LieElement::zero(h.degree);
    for (c, r) in h.coords.iter().zip(reps.representatives()) {
        out.add_scaled(r, c);
    }
    out
}

/// `-q Σ χ [K[x_a, x_b], x_c]` over the three `(2,1)`-unshuffles.
fn ell3_by_hand(r: &Retract, a: &HomologyClass, b: &HomologyClass, c: &HomologyClass) -> HomologyClass {
    let (da, db, dc) = (a.degree, b.degree, c.degree);
    let (ia, ib, ic) = (r.include(a).unwrap(), r.include(b).unwrap(), r.include(c).unwrap());
    let dgl = r.dgl();
    let term = |x: &LieElement, y: &LieElement, z: &LieElement| {
        dgl.bracket(&r.homotopy(&dgl.bracket(x, y).unwrap()).unwrap(), z).unwrap()
    };
    let sign = |e: i64| Scalar::from_int(if e.rem_euclid(2) == 0 { 1 } else { -1 });
    let mut sum = term(&ia, &ib, &ic);
    sum.add_scaled(&term(&ia, &ic, &ib), &sign(1 + db * dc));
    sum.add_scaled(&term(&ib, &ic, &ia), &sign(da * (db + dc)));
    r.project(&-&sum).unwrap()
}

fn transfer_oracles() -> Outcome {
    let mut out = Outcome::new();
    for (name, dgl) in named_fixtures() {
        let retracts = [
            ("reference", reference_retract(name, dgl.clone())),
            ("seed 1", random_retract(dgl.clone(), 1).unwrap()),
        ];
        for (label, r) in &retracts {
            let table = Transfer::new(r).table(3).unwrap();
            let (mut pairs, mut triples) = (0, 0);
            for (k, tuple, value) in table.entries() {
                let xs = units(&table, tuple);
                if k == 2 {
                    let x = dgl.bracket(&representative(&dgl, &xs[0]), &representative(&dgl, &xs[1])).unwrap();
                    out.require(*value == dgl.classify(&x).unwrap(), format!("{name} {label} l2 {tuple:?}"));
                    pairs += 1;
                } else {
                    out.require(*value == ell3_by_hand(r, &xs[0], &xs[1], &xs[2]), format!("{name} {label} l3 {tuple:?}"));
                    triples += 1;
                }
            }
            out.note(format!("{name} {label}: {pairs} pairs, {triples} triples"));
        }
    }
    out
}

const MASSEY: &str = "dgl { cap 9 gen a:1 gen b:1 gen c:2 gen u:3 gen w:4 d u = [a, b] d w = [b, c] }";

fn l_infinity_axioms() -> Outcome {
    let mut out = Outcome::new();
    for (name, dgl) in named_fixtures() {
        let mut retracts = vec![("reference".to_string(), reference_retract(name, dgl.clone()))];
        for seed in 1..=20 {
            retracts.push((format!("seed {seed}"), random_retract(dgl.clone(), seed).unwrap()));
        }
        let mut tuples = [0usize; 2];
        for (label, r) in &retracts {
            let table = Transfer::new(r).table(3).unwrap();
            for n in 3..=4 {
                let j = verify_generalized_jacobi(&table, n).unwrap();
                out.require(j.passed(), format!("{name} {label} arity {n}: {:?}", j.first_violation));
                tuples[n - 3] += j.tuples_checked;
            }
        }
        out.note(format!("{name}: 21 retracts, {} triples and {} quadruples checked", tuples[0], tuples[1]));
    }
    // Negative control. Arities 3 and 4 are quadratic in l2 and linear in l3,
    // so rescaling a single bracket leaves them intact; arity 5 sees every flip.
    let dgl = Arc::new(parse_dgl(MASSEY).unwrap().build(None, 9).unwrap());
    let r = random_retract(dgl, 1).unwrap();
    let baseline = Transfer::new(&r).table(4).unwrap();
    out.require(verify_generalized_jacobi(&baseline, 5).unwrap().passed(), "control model fails unperturbed");
    for k in 2..=4 {
        for t in enumerate_trees(k).unwrap().iter() {
            let weights = TreeWeights::standard().with_override(t, Scalar::one());
            let table = Transfer::new(&r).with_weights(weights).table(4).unwrap();
            let broken: Vec<usize> = (3..=5)
                .filter(|&n| !verify_generalized_jacobi(&table, n).unwrap().passed())
                .collect();
            out.require(!broken.is_empty(), format!("weight of {} set to 1 goes undetected", t.key()));
            out.note(format!("weight of {} set to 1: identity breaks at arities {broken:?}", t.key()));
        }
    }
    out
}

/// Every planar bracketing of `k` leaves, as canonical keys with children
/// ordered by (leaf count, key), descending.
fn planar_bracketings(k: usize) -> Vec<(usize, String)> {
    if k == 1 {
        return vec![(1, "*".to_string())];
    }
    let mut out = Vec::new();
    for left in 1..k {
        for a in planar_bracketings(left) {
            for b in planar_bracketings(k - left) {
                let (hi, lo) = if (a.0, &a.1) >= (b.0, &b.1) { (&a, &b) } else { (&b, &a) };
                out.push((k, format!("({} {})", hi.1, lo.1)));
            }
        }
    }
    out
}

fn catalan(n: u64) -> u64 {
    (1..=n).fold(1u64, |c, i| c * (n + i) / i) / (n + 1)
}

fn tree_combinatorics() -> Outcome {
    let mut out = Outcome::new();
    let expected_counts = [1usize, 1, 2, 3, 6, 11];
    for (k, &expected) in (2..=7).zip(&expected_counts) {
        let planar = planar_bracketings(k);
        let mut orbit: BTreeMap<String, u64> = BTreeMap::new();
        for (_, key) in &planar {
            *orbit.entry(key.clone()).or_default() += 1;
        }
        let trees = enumerate_trees(k).unwrap();
        let keys: BTreeSet<String> = trees.iter().map(|t| t.key().to_string()).collect();
        out.require(trees.len() == expected, format!("k = {k}: {} classes", trees.len()));
        out.require(keys == orbit.keys().cloned().collect(), format!("k = {k}: classes differ from brute force"));
        let mut total = Scalar::zero();
        for t in trees.iter() {
            let planar_count = 1u64 << (k - 1);
            out.require(
                orbit.get(t.key()) == Some(&(planar_count / t.aut_order())),
                format!("k = {k}: orbit of {} is not 2^(k-1)/|Aut|", t.key()),
            );
            total = &total + &Scalar::new(planar_count as i64, t.aut_order() as i64).unwrap();
        }
        let cat = catalan(k as u64 - 1);
        out.require(planar.len() as u64 == cat, format!("k = {k}: {} bracketings", planar.len()));
        out.require(total == Scalar::from_int(cat as i64), format!("k = {k}: weighted count {total}"));
        out.note(format!("k = {k}: {} classes, weighted count {total} = Catalan {cat}", trees.len()));
    }
    out
}

fn adapted_retract_identity() -> Outcome {
    let mut out = Outcome::new();
    let m = build_fat_wedge(&[3, 3, 3], None).unwrap();
    match verify_main1(&m, &Extension::identity(&m)).unwrap() {
        Main1Outcome::NotAdapted(ob) => out.require(false, format!("no adapted retract: {ob:?}")),
        Main1Outcome::Adapted {
            bracket,
            epsilon,
            whitehead_class,
            comparison,
            induction,
            ..
        } => {
            out.require(comparison.equal, format!("eps {epsilon} times {bracket} against {whitehead_class}"));
            for size in [2, 3] {
                let at: Vec<_> = induction.iter().filter(|c| c.size == size).collect();
                out.require(!at.is_empty(), format!("no induction check at size {size}"));
                for c in at {
                    out.require(c.holds, format!("induction identity at {}", c.generator));
                }
            }
            out.note(format!(
                "eps {epsilon}, l3 = {bracket}, Whitehead class {whitehead_class}, {} induction checks",
                induction.len()
            ));
        }
    }
    out
}

fn lower_image_identity() -> Outcome {
    let mut out = Outcome::new();
    let doc = fixtures::example37_phi().unwrap();
    let dgl = fixtures::example37(Some(EXAMPLE37_CAP)).unwrap();
    let model = build_fat_wedge(&doc.spheres, Some(EXAMPLE37_CAP)).unwrap();
    let ext = Extension::from_document(&model, dgl.clone(), &doc).unwrap();
    let r = fixtures::example37_table_retract(dgl).unwrap();
    let table = Transfer::new(&r).table(4).unwrap();
    let e = verify_elprime(&model, &ext, &r, &table).unwrap();
    out.require(e.difference_in_lower_images, "eps l4 - class outside the lower images");
    out.require(matches!(e.certificate, PhiOutcome::Solved(_)), format!("certificate: {:?}", e.certificate));
    out.require(e.certificates_checked, "certificate recheck");
    out.note(format!(
        "eps {} l4 = {}, class {}, witness {:?}",
        e.epsilon,
        e.bracket,
        e.whitehead_class,
        e.witness.as_ref().map(|w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>())
    ));
    out
}

fn homotopy_image_extension() -> Outcome {
    let mut out = Outcome::new();
    for (spheres, seeds) in [(&[3i64, 3, 3][..], 0..=3u64), (&[3, 3, 3, 3][..], 0..=2)] {
        let m = build_fat_wedge(spheres, None).unwrap();
        let reps: Vec<_> = (0..spheres.len()).map(|i| m.dgl().generator(i as u16)).collect();
        for seed in seeds {
            let r = if seed == 0 {
                Retract::standard(m.dgl().clone()).unwrap()
            } else {
                random_retract(m.dgl().clone(), seed).unwrap()
            };
            let table = Transfer::new(&r).table((spheres.len() - 1).max(2)).unwrap();
            let e = verify_elsegundo(&m, &reps, &r, &table).unwrap();
            let what = format!("{spheres:?} retract {seed}");
            out.require(e.hypothesis, format!("{what}: hypothesis fails at {:?}", e.hypothesis_failure));
            out.require(e.consistent(), format!("{what}: bracket {:?}, extension {:?}", e.bracket, e.extension.as_ref().map(|x| x.is_ok())));
            if let (Some(b), Some(Ok(x))) = (&e.bracket, &e.extension) {
                out.note(format!("{what}: bracket {b}, Whitehead class {x}"));
            }
        }
    }
    out
}

type FirstBracket = Option<(usize, Vec<(Vec<usize>, HomologyClass)>)>;

fn first_bracket(table: &LInftyTable) -> FirstBracket {
    let k = table.entries().filter(|(_, _, v)| !v.is_zero()).map(|(k, _, _)| k).min()?;
    let values = table
        .entries()
        .filter(|(a, _, _)| *a == k)
        .map(|(_, t, v)| (t.to_vec(), v.clone()))
        .collect();
    Some((k, values))
}

fn retract_invariance() -> Outcome {
    let mut out = Outcome::new();
    for (name, dgl) in named_fixtures() {
        let arity = if name == "example37" { 3 } else { 4 };
        let mut first: Option<FirstBracket> = None;
        for seed in 1..=10 {
            let r = random_retract(dgl.clone(), seed).unwrap();
            let got = first_bracket(&Transfer::new(&r).table(arity).unwrap());
            match &first {
                None => first = Some(got),
                Some(expected) => out.require(&got == expected, format!("{name} seed {seed}")),
            }
        }
        let summary = match first.flatten() {
            Some((k, values)) => format!("arity {k}, {} values", values.len()),
            None => format!("all brackets vanish through arity {arity}"),
        };
        out.note(format!("{name}: {summary} agree across 10 retracts"));
    }
    out
}

fn example37_investigation() -> Outcome {
    let mut out = Outcome::new();
    let path = std::env::temp_dir().join(format!("dglw-acceptance-{}.json", std::process::id()));
    let run = whitehead_cli::run([
        "dglw",
        "verify",
        "--theorem",
        "example37",
        "--seeds",
        "20",
        "--json",
        path.to_str().unwrap(),
    ]);
    out.require(run.code == whitehead_cli::EXIT_PASS, format!("exit code {}: {}", run.code, run.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let _ = std::fs::remove_file(&path);
    let inv = &report["results"]["investigation"];
    let cases = inv["cases"].as_array().unwrap();
    let label = |c: &Value| c["retract"].as_str().unwrap().to_string();
    let random = cases.iter().filter(|c| label(c).starts_with("random seed")).count();
    out.require(cases.iter().any(|c| label(c) == "table"), "table retract case missing");
    out.require(random >= 20, format!("{random} random retracts"));
    out.require(cases.iter().any(|c| label(c).contains("v12 + z")), "decomposition with v12 + z in A missing");
    for c in cases {
        out.require(c["difference_in_lower_images"] == true, format!("{}: identity fails", label(c)));
        out.require(c["certificate"]["status"] == "solved", format!("{}: no certificate", label(c)));
        out.note(format!(
            "{}: l4 = {}, equals class {}, equals minus class {}",
            label(c),
            c["bracket"]["coords"],
            c["equals_class"],
            c["equals_negated_class"]
        ));
    }
    let claim = if inv["some_retract_gives_the_class"] == true {
        "contradicted: some retract gives l4 = +-class"
    } else {
        "consistent: no retract examined gives l4 = +-class"
    };
    out.note(format!("claim that no retract gives l4 = +-class: {claim}"));
    out
}

fn main() {
    let criteria: Vec<(usize, &str, Box<dyn Fn() -> Outcome>)> = {
        let report = Arc::new(investigate_example37(&(1..=20).collect::<Vec<_>>()).unwrap());
        vec![
            (1, "structural exactness", Box::new(structural_exactness)),
            (2, "homology of the twisted example", Box::new(move || example37_homology(&report))),
            (3, "transfer oracles", Box::new(transfer_oracles)),
            (4, "generalized Jacobi and weight control", Box::new(l_infinity_axioms)),
            (5, "tree combinatorics", Box::new(tree_combinatorics)),
            (6, "adapted retract identity on T2", Box::new(adapted_retract_identity)),
            (7, "identity modulo lower images", Box::new(lower_image_identity)),
            (8, "homotopy-image extension", Box::new(homotopy_image_extension)),
            (9, "retract invariance", Box::new(retract_invariance)),
            (10, "twisted example investigation", Box::new(example37_investigation)),
        ]
    };
    let mut unexpected = Vec::new();
    for (n, title, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        for note in &outcome.notes {
            println!("    {note}");
        }
        let known = KNOWN_FAILURES.contains(n);
        let tag = match (outcome.passed, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("{tag} criterion {n}: {title} [{secs:.1}s]");
        if !outcome.passed && !known {
            unexpected.push(*n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
