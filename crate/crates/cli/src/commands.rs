//! One function per subcommand. Each fills a [`Report`].

use serde_json::{json, Value};
use whitehead_core::coalgebra::{check_quillen_delta_squared, check_transferred_delta_squared, PhiOutcome};
use whitehead_core::investigation::{investigate_example37, Example37Report, RetractCase};
use whitehead_core::qlinalg::Scalar;
use whitehead_core::retract::verify_retract;
use whitehead_core::syntax::format_element;
use whitehead_core::transfer::{verify_generalized_jacobi, LInftyTable, Transfer};
use whitehead_core::trees::enumerate_trees;
use whitehead_core::whitehead::{
    build_fat_wedge, verify_elprime, verify_elsegundo, verify_main1, Extension, Main1Outcome, SignedComparison,
    WedgeModel,
};

use crate::report::{class, classes, num, scalar, Report};
use crate::{load_input, CliError, CliResult, Cli, Command, Input, Session, Theorem};

pub fn dispatch(cli: &Cli, echo: Vec<String>) -> CliResult<Report> {
    let mut report = Report::new(echo);
    report.seed = cli.seed;
    let session = Session {
        cli_cap: cli.max_degree,
        seed: cli.seed,
        retract_file: cli.retract_file.clone(),
    };
    match &cli.command {
        Command::Check { input, samples } => check(&session, input, *samples, &mut report)?,
        Command::Homology { input, representatives } => homology(&session, input, *representatives, &mut report)?,
        Command::Retract { input, emit } => retract(&session, input, emit.as_deref(), &mut report)?,
        Command::Transfer { input, arity } => transfer(&session, input, *arity, &mut report)?,
        Command::Coalgebra { input, length } => coalgebra(&session, input, *length, &mut report)?,
        Command::Whitehead { spheres, emit } => whitehead(&session, spheres, emit.as_deref(), &mut report)?,
        Command::Verify {
            theorem,
            input,
            spheres,
            extension,
            seeds,
        } => {
            let target = Target {
                input: input.as_deref(),
                spheres: spheres.as_deref(),
                extension: extension.as_deref(),
            };
            match theorem {
                Theorem::Main1 => main1(&session, &target, &mut report)?,
                Theorem::Elprime => elprime(&session, &target, &mut report)?,
                Theorem::Elsegundo => elsegundo(&session, &target, &mut report)?,
                Theorem::Example37 => example37(*seeds, &mut report)?,
            }
        }
        Command::Trees { leaves } => trees(*leaves, &mut report)?,
    }
    Ok(report)
}

fn load(session: &Session, name: &str, report: &mut Report) -> CliResult<Input> {
    let input = load_input(name, session.cli_cap)?;
    report.input(input.name.clone(), input.text.clone());
    report.cap = Some(input.dgl.cap());
    Ok(input)
}

fn check(session: &Session, name: &str, samples: usize, report: &mut Report) -> CliResult<()> {
    let input = load(session, name, report)?;
    let seed = session.seed.unwrap_or(0);
    report.seed = Some(seed);
    let dgl = &input.dgl;
    let r = dgl.check(samples, seed)?;
    report.set("generators", num(dgl.generators().len()));
    report.set("d_squared_failures", json!(r.d_squared_failures));
    report.set("jacobi_samples", num(r.jacobi_samples));
    report.set("jacobi_failures", json!(r.jacobi_failures));
    report.set("derivation_samples", num(r.derivation_samples));
    report.set("derivation_failures", json!(r.derivation_failures));
    report.line(format!(
        "{}: {} generators, cap {}, {} Jacobi and {} derivation samples",
        input.name,
        dgl.generators().len(),
        dgl.cap(),
        r.jacobi_samples,
        r.derivation_samples
    ));
    report.verdict("d squared vanishes on generators", r.d_squared_failures.is_empty());
    report.verdict("graded Jacobi on samples", r.jacobi_failures.is_empty());
    report.verdict("derivation rule on samples", r.derivation_failures.is_empty());
    if let Some(m) = &input.model {
        let cycle = m.product().apply_differential(m.omega()).is_zero();
        report.set("attaching_element", json!(format_element(m.product(), m.omega())));
        report.verdict("attaching element is a cycle", cycle);
    }
    Ok(())
}

fn homology(session: &Session, name: &str, representatives: bool, report: &mut Report) -> CliResult<()> {
    let input = load(session, name, report)?;
    let dgl = &input.dgl;
    let mut degrees = Vec::new();
    for n in 1..dgl.cap() as i64 {
        let h = dgl.homology(n)?;
        let mut entry = json!({ "degree": num(n), "dim": num(h.dim()) });
        if h.dim() > 0 {
            report.line(format!("H_{n}: {}", h.dim()));
        }
        if representatives {
            let reps: Vec<String> = h.representatives().iter().map(|r| format_element(dgl, r)).collect();
            for r in &reps {
                report.line(format!("  {r}"));
            }
            entry["representatives"] = json!(reps);
        }
        degrees.push(entry);
    }
    report.set("homology", Value::Array(degrees));
    Ok(())
}

fn retract(session: &Session, name: &str, emit: Option<&std::path::Path>, report: &mut Report) -> CliResult<()> {
    let input = load(session, name, report)?;
    let (source, r) = session.retract(&input, report)?;
    let checks = verify_retract(&r)?;
    let list: Vec<Value> = checks
        .checks
        .iter()
        .map(|c| {
            json!({
                "identity": c.identity,
                "degree": num(c.degree),
                "samples": num(c.samples),
                "failures": num(c.failures),
            })
        })
        .collect();
    let doc = r.to_document().to_string();
    report.set("retract", json!(source));
    report.set("checks", Value::Array(list));
    report.set("decomposition", json!(doc));
    report.line(format!("retract: {source}, {} identity checks", checks.checks.len()));
    for c in checks.failing() {
        report.line(format!("  {} fails in degree {} ({} of {})", c.identity, c.degree, c.failures, c.samples));
    }
    if let Some(path) = emit {
        std::fs::write(path, &doc).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    report.verdict("retract identities", checks.passed());
    Ok(())
}

fn basis_label(table: &LInftyTable, g: usize) -> String {
    let (n, j) = table.basis()[g];
    format!("H{n}[{j}]")
}

fn table_json(table: &LInftyTable) -> Value {
    let values: Vec<Value> = table
        .entries()
        .filter(|(_, _, v)| !v.is_zero())
        .map(|(k, t, v)| {
            json!({
                "arity": num(k),
                "inputs": t.iter().map(|&g| basis_label(table, g)).collect::<Vec<_>>(),
                "value": class(v),
            })
        })
        .collect();
    json!({
        "max_arity": num(table.max_arity()),
        "basis": (0..table.basis().len()).map(|g| basis_label(table, g)).collect::<Vec<_>>(),
        "nonzero_values": values,
    })
}

fn transfer(session: &Session, name: &str, arity: usize, report: &mut Report) -> CliResult<()> {
    if arity < 2 {
        return Err(CliError::Usage("--arity must be at least 2".into()));
    }
    let input = load(session, name, report)?;
    let (source, r) = session.retract(&input, report)?;
    let table = Transfer::new(&r).table(arity)?;
    report.set("retract", json!(source));
    report.set("table", table_json(&table));
    for (k, t, v) in table.entries() {
        if !v.is_zero() {
            let args: Vec<String> = t.iter().map(|&g| basis_label(&table, g)).collect();
            report.line(format!("l{k}({}) = {v}", args.join(", ")));
        }
    }
    let mut jacobi = Vec::new();
    for n in 3..=arity + 1 {
        let j = verify_generalized_jacobi(&table, n)?;
        jacobi.push(json!({
            "arity": num(n),
            "tuples_checked": num(j.tuples_checked),
            "violations": num(j.violations),
            "first_violation": j.first_violation,
        }));
        report.line(format!("Jacobi arity {n}: {} tuples, {} violations", j.tuples_checked, j.violations));
        report.verdict(&format!("generalized Jacobi arity {n}"), j.passed());
    }
    report.set("jacobi", Value::Array(jacobi));
    Ok(())
}

fn coalgebra(session: &Session, name: &str, length: usize, report: &mut Report) -> CliResult<()> {
    if length < 2 {
        return Err(CliError::Usage("--length must be at least 2".into()));
    }
    let input = load(session, name, report)?;
    let dgl = &input.dgl;
    let quillen = check_quillen_delta_squared(dgl, length, dgl.cap() as i64 - 1)?;
    let (source, r) = session.retract(&input, report)?;
    let table = Transfer::new(&r).table(length)?;
    let transferred = check_transferred_delta_squared(&table, length)?;
    report.set("retract", json!(source));
    report.set(
        "quillen",
        json!({
            "words_checked": num(quillen.words_checked),
            "failures": quillen.failures.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        }),
    );
    report.set(
        "transferred",
        json!({
            "words_checked": num(transferred.words_checked),
            "failures": transferred.failures.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        }),
    );
    report.line(format!(
        "Quillen chains: {} words; transferred coalgebra: {} words",
        quillen.words_checked, transferred.words_checked
    ));
    report.verdict("delta squared on Quillen chains", quillen.passed());
    report.verdict("delta squared on transferred coalgebra", transferred.passed());
    Ok(())
}

fn whitehead(session: &Session, spheres: &[i64], emit: Option<&std::path::Path>, report: &mut Report) -> CliResult<()> {
    let input = crate::fat_wedge_input(spheres, session.cli_cap)?;
    report.input(input.name.clone(), input.text.clone());
    report.cap = Some(input.dgl.cap());
    let m = input.model.as_ref().expect("fat-wedge input");
    let gens: Vec<Value> = m
        .dgl()
        .generators()
        .iter()
        .enumerate()
        .map(|(j, g)| {
            json!({
                "name": g.name,
                "degree": num(g.degree),
                "differential": format_element(m.dgl(), m.dgl().generator_differential(j as u16)),
            })
        })
        .collect();
    let omega = format_element(m.product(), m.omega());
    report.set("generators", Value::Array(gens));
    report.set("attaching_element", json!(omega));
    report.set("model", json!(input.text));
    report.line(format!("{} generators; attaching element:", m.dgl().generators().len()));
    report.line(format!("  {omega}"));
    if let Some(path) = emit {
        std::fs::write(path, &input.text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    report.verdict(
        "attaching element is a cycle",
        m.product().apply_differential(m.omega()).is_zero(),
    );
    Ok(())
}

struct Target<'a> {
    input: Option<&'a str>,
    spheres: Option<&'a [i64]>,
    extension: Option<&'a std::path::Path>,
}

/// The fat-wedge model and the extension to check: the identity extension
/// of `--spheres` without an input, otherwise the extension document.
fn model_and_extension(session: &Session, target: &Target, report: &mut Report) -> CliResult<(Input, WedgeModel, Extension)> {
    match target.input {
        None => {
            let spheres = target.spheres.unwrap_or(&[3, 3, 3]);
            let input = crate::fat_wedge_input(spheres, session.cli_cap)?;
            report.input(input.name.clone(), input.text.clone());
            report.cap = Some(input.dgl.cap());
            let model = input.model.clone().expect("fat-wedge input");
            let ext = Extension::identity(&model);
            Ok((input, model, ext))
        }
        Some(name) => {
            let input = load(session, name, report)?;
            let doc = session.extension(target.extension, &input, report)?;
            let model = build_fat_wedge(&doc.spheres, Some(input.dgl.cap()))?;
            let ext = Extension::from_document(&model, input.dgl.clone(), &doc)?;
            Ok((input, model, ext))
        }
    }
}

fn comparison_json(c: &SignedComparison) -> Value {
    json!({ "equal": c.equal, "opposite": c.opposite, "realized_sign": c.realized_sign().map(num) })
}

fn main1(session: &Session, target: &Target, report: &mut Report) -> CliResult<()> {
    let (_, model, ext) = model_and_extension(session, target, report)?;
    match verify_main1(&model, &ext)? {
        Main1Outcome::NotAdapted(ob) => {
            let combo: Vec<Value> = ob.combination.iter().map(|(n, c)| json!({ "image": n, "coeff": scalar(c) })).collect();
            report.set(
                "obstruction",
                json!({
                    "degree": num(ob.degree),
                    "combination": combo,
                    "cycle": format_element(ext.target(), &ob.cycle),
                }),
            );
            report.line(format!("no adapted retract: obstruction in degree {}", ob.degree));
            report.verdict("adapted retract exists", false);
        }
        Main1Outcome::Adapted {
            skipped_in_c,
            bracket,
            epsilon,
            whitehead_class,
            comparison,
            induction,
            ..
        } => {
            let ind: Vec<Value> = induction
                .iter()
                .map(|c| json!({ "generator": c.generator, "size": num(c.size), "holds": c.holds, "holds_negated": c.holds_negated }))
                .collect();
            report.set("epsilon", num(epsilon));
            report.set("bracket", class(&bracket));
            report.set("whitehead_class", class(&whitehead_class));
            report.set("comparison", comparison_json(&comparison));
            report.set("skipped_in_c", json!(skipped_in_c));
            report.set("induction", Value::Array(ind));
            report.line(format!(
                "epsilon {epsilon}, bracket {bracket}, Whitehead class {whitehead_class}, realized sign {:?}",
                comparison.realized_sign()
            ));
            report.verdict("adapted retract exists", true);
            report.verdict("eps * bracket equals the Whitehead class", comparison.equal);
            report.verdict("induction identity", induction.iter().all(|c| c.holds));
        }
    }
    Ok(())
}

fn phi_json(p: &PhiOutcome) -> Value {
    match p {
        PhiOutcome::Solved(c) => json!({
            "status": "solved",
            "unknowns": num(c.unknowns),
            "equations": num(c.equations),
            "phi": c.phi.iter().map(|(w, x)| json!({ "word": w.to_string(), "coeff": scalar(x) })).collect::<Vec<_>>(),
        }),
        PhiOutcome::NoSolution { unknowns, equations } => json!({
            "status": "no solution",
            "unknowns": num(unknowns),
            "equations": num(equations),
        }),
        PhiOutcome::DegreeMismatch => json!({ "status": "degree mismatch" }),
    }
}

fn elprime(session: &Session, target: &Target, report: &mut Report) -> CliResult<()> {
    let (input, model, ext) = model_and_extension(session, target, report)?;
    let (source, r) = session.retract(&input, report)?;
    let table = Transfer::new(&r).table(model.k())?;
    let e = verify_elprime(&model, &ext, &r, &table)?;
    report.set("retract", json!(source));
    report.set("arity", num(e.arity));
    report.set("epsilon", num(e.epsilon));
    report.set("bracket", class(&e.bracket));
    report.set("whitehead_class", class(&e.whitehead_class));
    report.set("comparison", comparison_json(&e.comparison));
    report.set("lower_image_span", classes(&e.spanning));
    report.set("witness", json!(e.witness.as_ref().map(|w| w.iter().map(scalar).collect::<Vec<_>>())));
    report.set("difference_in_lower_images", json!(e.difference_in_lower_images));
    report.set("certificate", phi_json(&e.certificate));
    report.set("certificate_negated", phi_json(&e.certificate_negated));
    report.line(format!(
        "retract {source}: eps * l{} = {} times {}, Whitehead class {}",
        e.arity, e.epsilon, e.bracket, e.whitehead_class
    ));
    report.verdict("difference lies in lower bracket images", e.difference_in_lower_images);
    report.verdict("certificate found", matches!(e.certificate, PhiOutcome::Solved(_)));
    report.verdict("certificate rechecked", e.certificates_checked);
    Ok(())
}

fn elsegundo(session: &Session, target: &Target, report: &mut Report) -> CliResult<()> {
    let (input, model, ext) = model_and_extension(session, target, report)?;
    let reps: Vec<_> = (0..model.k())
        .map(|i| {
            let id = model.generator_id(&[i]).expect("sphere generator");
            ext.image(id).cloned().ok_or_else(|| CliError::Usage("sphere image missing".into()))
        })
        .collect::<CliResult<_>>()?;
    let (source, r) = session.retract(&input, report)?;
    let table = Transfer::new(&r).table(model.k().saturating_sub(1).max(2))?;
    let e = verify_elsegundo(&model, &reps, &r, &table)?;
    report.set("retract", json!(source));
    report.set("hypothesis", json!(e.hypothesis));
    report.set("subtuples_vanish", json!(e.subtuples_vanish));
    report.set("bracket", json!(e.bracket.as_ref().map(class)));
    match &e.extension {
        Some(Ok(x)) => report.set("whitehead_class", class(x)),
        Some(Err(ob)) => report.set(
            "obstruction",
            json!({ "generator": ob.generator, "element": format_element(ext.target(), &ob.element), "class": class(&ob.class) }),
        ),
        None => {}
    }
    report.set("comparison", json!(e.comparison.as_ref().map(comparison_json)));
    if !e.hypothesis {
        report.line(format!("hypothesis fails at {:?}; nothing to check", e.hypothesis_failure));
    } else if let (Some(b), Some(Ok(x))) = (&e.bracket, &e.extension) {
        report.line(format!("retract {source}: bracket {b}, Whitehead class of the extension {x}"));
    }
    report.verdict("bracket realized by the homotopy-image extension", e.consistent());
    Ok(())
}

fn case_json(c: &RetractCase) -> Value {
    json!({
        "retract": c.label,
        "retract_valid": c.retract_valid,
        "bracket": class(&c.bracket),
        "equals_class": c.equals_class,
        "equals_negated_class": c.equals_negated_class,
        "difference_in_lower_images": c.elprime.difference_in_lower_images,
        "witness": c.elprime.witness.as_ref().map(|w| w.iter().map(scalar).collect::<Vec<_>>()),
        "certificate": phi_json(&c.elprime.certificate),
    })
}

fn example37_json(r: &Example37Report) -> Value {
    let dims: Vec<Value> = r.homology_dims.iter().map(|(n, d)| json!({ "degree": num(n), "dim": num(d) })).collect();
    let terms: Vec<Value> = r
        .terms
        .iter()
        .map(|t| json!({ "term": t.term, "computed": scalar(&t.computed), "listed": scalar(&t.listed) }))
        .collect();
    let induction: Vec<Value> = r
        .adapted
        .induction
        .iter()
        .map(|c| json!({ "generator": c.generator, "holds": c.holds, "holds_negated": c.holds_negated }))
        .collect();
    json!({
        "homology": dims,
        "h10_representatives": r.h10_representatives,
        "whitehead_element": r.whitehead_element,
        "whitehead_class": class(&r.whitehead_class),
        "class_generates_h10": r.class_generates_h10,
        "listed_element_is_cycle": r.listed_is_cycle,
        "listed_element_boundary": r.listed_boundary,
        "listed_element_matches": r.listed_matches.map(num),
        "terms": terms,
        "cases": r.all_cases().map(case_json).collect::<Vec<_>>(),
        "adapted_retract": {
            "found": r.adapted.found,
            "obstruction": r.adapted.obstruction,
            "induction": induction,
        },
        "some_retract_gives_the_class": r.bracket_realizes_class(),
    })
}

fn example37(seeds: u64, report: &mut Report) -> CliResult<()> {
    let seeds: Vec<u64> = (1..=seeds).collect();
    let r = investigate_example37(&seeds)?;
    report.input("example37", whitehead_core::fixtures::EXAMPLE37_DGL);
    report.cap = Some(whitehead_core::investigation::EXAMPLE37_CAP);
    report.set("investigation", example37_json(&r));
    let dims: Vec<String> = r
        .homology_dims
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(n, d)| format!("H_{n}={d}"))
        .collect();
    report.line(format!("homology: {}", dims.join(" ")));
    report.line(format!("phi(omega) = {}", r.whitehead_element));
    report.line(format!("class of phi(omega): {}", r.whitehead_class));
    report.line(format!("class generates H_10: {}", r.class_generates_h10));
    report.line(format!("listed element is a cycle: {}", r.listed_is_cycle));
    for t in r.terms.iter().filter(|t| t.computed != t.listed) {
        report.line(format!("  term {}: computed {}, listed {}", t.term, t.computed, t.listed));
    }
    for c in r.all_cases() {
        report.line(format!(
            "{}: l4 = {}, equals class {}, equals minus class {}, identity modulo lower images {}, certificate {}",
            c.label,
            c.bracket,
            c.equals_class,
            c.equals_negated_class,
            c.elprime.difference_in_lower_images,
            matches!(c.elprime.certificate, PhiOutcome::Solved(_))
        ));
    }
    match &r.adapted.obstruction {
        Some(ob) => report.line(format!("no adapted retract: {ob}")),
        None => report.line(format!(
            "adapted retract found; induction identity holds at every generator: {}",
            r.adapted.induction.iter().all(|c| c.holds)
        )),
    }
    report.line(format!("some retract gives l4 = +-class: {}", r.bracket_realizes_class()));
    report.verdict(
        "bracket identity modulo lower images in every case",
        r.all_cases().all(|c| c.elprime_holds()),
    );
    report.verdict(
        "certificate found in every case",
        r.all_cases().all(|c| matches!(c.elprime.certificate, PhiOutcome::Solved(_)) && c.elprime.certificates_checked),
    );
    report.verdict("every retract valid", r.all_cases().all(|c| c.retract_valid));
    Ok(())
}

fn catalan(n: u64) -> u64 {
    whitehead_core::signs::binomial(2 * n, n) / (n + 1)
}

fn trees(leaves: usize, report: &mut Report) -> CliResult<()> {
    if leaves == 0 {
        return Err(CliError::Usage("--leaves must be positive".into()));
    }
    let ts = enumerate_trees(leaves)?;
    let mut total = Scalar::zero();
    let list: Vec<Value> = ts
        .iter()
        .map(|t| {
            total = &total + &Scalar::new(1 << (leaves - 1), t.aut_order() as i64).expect("nonzero");
            report.line(format!("{t}  |Aut| = {}", t.aut_order()));
            json!({ "tree": t.to_string(), "aut_order": num(t.aut_order()) })
        })
        .collect();
    let expected = Scalar::from_int(catalan(leaves as u64 - 1) as i64);
    report.set("count", num(ts.len()));
    report.set("trees", Value::Array(list));
    report.set("weighted_count", scalar(&total));
    report.line(format!("{} classes; sum of 2^(k-1)/|Aut| = {total}", ts.len()));
    report.verdict("weighted count equals the Catalan number", total == expected);
    Ok(())
}
