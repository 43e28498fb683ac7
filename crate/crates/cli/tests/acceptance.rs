//! Acceptance run: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit
//! if any criterion fails.

mod common;

use std::fs;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use amalgam_core::certificate::element_expr;
use amalgam_core::instances::{
    make_instance, AnyInstance, CyclicInstance, InstanceDescriptor, InstanceKind, DEFAULT_LEVEL_CAP,
};
use amalgam_core::padic::Prime;
use amalgam_core::suites::{
    axioms_suite, centrality_suite, cyclic_alphabet, exhaustive_suite, hom_suite, lemma21_suite,
    oracle_suite, random_element, SuiteReport, MAX_LEVEL,
};
use amalgam_core::witness::{derived_escape, escape_witness};
use amalgam_core::{with_instance, Amalgam, Error};
use common::{amalgam, golden_path, golden_run, stdout, GOLDEN};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_251_015;

const AXIOM_TRIPLES: usize = 10_000;
const ORACLE_WORDS: usize = 1_000;
const EXHAUSTIVE_LEN: usize = 4;
const LEMMA21_SAMPLES: usize = 10_000;
const HOM_PAIRS: usize = 10_000;
const HOM_PER_LEVEL: usize = 1_000;
const CENTRALITY_SAMPLES: usize = 10_000;
const MAX_FLOOR: usize = 10;
const MAX_DEPTH: usize = 5;
const ROUND_TRIPS: usize = 100;

const AXIOMS_BUDGET: Duration = Duration::from_secs(60);
const LEMMA21_BUDGET: Duration = Duration::from_secs(120);
const DERIVED_BUDGET: Duration = Duration::from_secs(10);

struct Verdict {
    id: &'static str,
    title: &'static str,
    problems: Vec<String>,
    note: String,
}

fn descriptor(kind: InstanceKind, prime: u64, length: Option<u32>) -> InstanceDescriptor {
    InstanceDescriptor {
        kind,
        prime,
        length,
    }
}

/// Dense with p = 2, 3, 5; Heisenberg with p = 3; cyclic Z/8.
fn instances() -> Vec<AnyInstance> {
    [
        descriptor(InstanceKind::Dense, 2, None),
        descriptor(InstanceKind::Dense, 3, None),
        descriptor(InstanceKind::Dense, 5, None),
        descriptor(InstanceKind::Heisenberg, 3, None),
        descriptor(InstanceKind::Cyclic, 2, Some(3)),
    ]
    .iter()
    .map(|d| make_instance(d).expect("shipped instance builds"))
    .collect()
}

fn collect(reports: &[SuiteReport]) -> Vec<String> {
    reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| {
            format!(
                "{} on {}: {} of {} failed; {}",
                r.suite,
                r.instance,
                r.failures,
                r.samples,
                r.first_failure.as_deref().unwrap_or("")
            )
        })
        .collect()
}

fn over_budget(problems: &mut Vec<String>, what: &str, took: Duration, budget: Duration) {
    if took >= budget {
        problems.push(format!("{what} took {took:.2?}, budget {budget:?}"));
    }
}

fn ac1() -> Verdict {
    let start = Instant::now();
    let reports: Vec<SuiteReport> = instances()
        .into_iter()
        .map(|inst| with_instance!(inst, s => axioms_suite(&Amalgam::new(s), AXIOM_TRIPLES, SEED)))
        .collect();
    let took = start.elapsed();
    let mut problems = collect(&reports);
    over_budget(&mut problems, "axiom suite", took, AXIOMS_BUDGET);
    Verdict {
        id: "AC1",
        title: "group axioms",
        problems,
        note: format!(
            "{} instances x {AXIOM_TRIPLES} triples in {took:.2?}",
            reports.len()
        ),
    }
}

fn ac2() -> Verdict {
    let mut reports: Vec<SuiteReport> = instances()
        .into_iter()
        .map(|inst| with_instance!(inst, s => oracle_suite(&Amalgam::new(s), ORACLE_WORDS, SEED)))
        .collect();
    let cyclic = CyclicInstance::new(Prime::new(2).unwrap(), 3).unwrap();
    let alphabet = cyclic_alphabet(&cyclic);
    let exhaustive = exhaustive_suite(&Amalgam::new(cyclic), &alphabet, EXHAUSTIVE_LEN);
    let words = exhaustive.samples;
    reports.push(exhaustive);
    Verdict {
        id: "AC2",
        title: "normal-form soundness against the oracle",
        problems: collect(&reports),
        note: format!("{ORACLE_WORDS} random words per instance, {words} exhaustive words and all their pairs"),
    }
}

fn ac3() -> Verdict {
    let start = Instant::now();
    let reports: Vec<SuiteReport> = instances()
        .into_iter()
        .map(|inst| with_instance!(inst, s => lemma21_suite(&Amalgam::new(s), LEMMA21_SAMPLES, SEED)))
        .collect();
    let took = start.elapsed();
    let mut problems = collect(&reports);
    over_budget(
        &mut problems,
        "conjugate/commutator suite",
        took,
        LEMMA21_BUDGET,
    );
    Verdict {
        id: "AC3",
        title: "conjugates and commutators leave G_m",
        problems,
        note: format!("{LEMMA21_SAMPLES} samples per instance in {took:.2?}"),
    }
}

fn ac4() -> Verdict {
    let mut problems = Vec::new();
    let dense = Amalgam::new(amalgam_core::instances::DenseInstance::new(
        Prime::new(5).unwrap(),
    ));
    let heis = Amalgam::new(amalgam_core::instances::HeisenbergInstance::new(
        Prime::new(3).unwrap(),
    ));
    let dense_h =
        [(1, 1), (25, 0)].map(|(n, e)| dense.syllable(0, &dense.system().value(n, e)).unwrap());
    let heis_h = heis
        .syllable(0, &amalgam_core::instances::HeisenbergElem::new(1, 1, 0))
        .unwrap();
    for k in 0..=MAX_FLOOR {
        for h in &dense_h {
            match escape_witness(&dense, h, k) {
                Ok(c) if c.verify(&dense) && c.result.level() > k => {}
                other => problems.push(format!("escape {} k={k}: {other:?}", dense.format(h))),
            }
        }
        match escape_witness(&heis, &heis_h, k) {
            Ok(c) if c.verify(&heis) && c.result.level() > k => {}
            other => problems.push(format!("escape (1,1,0) k={k}: {other:?}")),
        }
    }
    let mut slowest = Duration::ZERO;
    for d in 0..=MAX_DEPTH {
        let start = Instant::now();
        let outcome = derived_escape(&dense, d, MAX_FLOOR);
        let took = start.elapsed();
        slowest = slowest.max(took);
        match outcome {
            Ok(c) if c.verify(&dense) && c.result.level() > MAX_FLOOR => {}
            Ok(c) => problems.push(format!(
                "derived d={d}: certificate does not verify: {:?}",
                c.check(&dense)
            )),
            Err(e) => problems.push(format!("derived d={d}: {e}")),
        }
        over_budget(
            &mut problems,
            &format!("derived d={d}"),
            took,
            DERIVED_BUDGET,
        );
    }
    Verdict {
        id: "AC4",
        title: "escape and derived witnesses",
        problems,
        note: format!("k <= {MAX_FLOOR}, depth <= {MAX_DEPTH}, slowest derived run {slowest:.2?}"),
    }
}

fn ac5() -> Verdict {
    let mut problems = Vec::new();
    let mut without_psi = Vec::new();
    for inst in instances() {
        let desc = inst.descriptor();
        match with_instance!(inst, s => hom_suite(&Amalgam::new(s), HOM_PAIRS, HOM_PER_LEVEL, SEED))
        {
            Ok(r) => {
                let owned: Vec<SuiteReport> = r.reports().into_iter().cloned().collect();
                problems.extend(collect(&owned));
                if r.psi.is_none() {
                    without_psi.push(desc.to_string());
                }
            }
            Err(e) => problems.push(format!("{desc}: {e}")),
        }
    }
    Verdict {
        id: "AC5",
        title: "homomorphism, inclusion, kernel and matrix image",
        problems,
        note: format!(
            "{HOM_PAIRS} pairs, {HOM_PER_LEVEL} per level <= {MAX_LEVEL}; no matrix image for {}",
            without_psi.join(", ")
        ),
    }
}

fn ac6() -> Verdict {
    let reports: Vec<SuiteReport> = instances()
        .into_iter()
        .map(|inst| with_instance!(inst, s => centrality_suite(&Amalgam::new(s), CENTRALITY_SAMPLES, SEED)))
        .collect();
    Verdict {
        id: "AC6",
        title: "centrality of B_n in G_{n+1}",
        problems: collect(&reports),
        note: format!("{CENTRALITY_SAMPLES} samples per instance"),
    }
}

fn ac7() -> Verdict {
    let mut problems = Vec::new();
    for args in [
        &["--instance", "dense", "--prime", "5"][..],
        &["--instance", "heisenberg", "--prime", "3"],
        &["--instance", "cyclic", "--prime", "2", "--length", "3"],
    ] {
        let mut full = vec!["check", "instance"];
        full.extend(args);
        let o = amalgam(&full);
        if o.status.code() != Some(0) {
            problems.push(format!(
                "check instance {}: {}",
                args.join(" "),
                stdout(&o).trim()
            ));
        }
    }
    match CyclicInstance::with_shift(Prime::new(2).unwrap(), 3, 0, DEFAULT_LEVEL_CAP) {
        Err(Error::InvalidParams(_)) => {}
        other => problems.push(format!(
            "B_0 = H_0 cyclic instance was not rejected: {other:?}"
        )),
    }
    Verdict {
        id: "AC7",
        title: "instance contract conformance",
        problems,
        note: "3 shipped instances pass; B_0 = H_0 rejected".into(),
    }
}

fn random_certificate_args(rng: &mut ChaCha8Rng, out: &str) -> Vec<String> {
    let choices = [
        descriptor(InstanceKind::Dense, 2, None),
        descriptor(InstanceKind::Dense, 3, None),
        descriptor(InstanceKind::Dense, 5, None),
        descriptor(InstanceKind::Heisenberg, 3, None),
        descriptor(InstanceKind::Cyclic, 2, Some(3)),
    ];
    let desc = choices[rng.gen_range(0..choices.len())];
    let mut args: Vec<String> = vec!["witness".into()];
    if rng.gen_bool(0.5) {
        let inst = make_instance(&desc).unwrap();
        let h = with_instance!(inst, s => {
            let am = Amalgam::new(s);
            loop {
                let g = random_element(&am, rng, 4);
                if !am.is_identity(&g) {
                    break element_expr(&am, &g);
                }
            }
        });
        args.extend(["escape".into(), "--h".into(), h]);
    } else {
        args.extend([
            "derived".into(),
            "--depth".into(),
            rng.gen_range(0..=4usize).to_string(),
        ]);
    }
    args.extend([
        "--k".into(),
        rng.gen_range(0..=8usize).to_string(),
        "--out".into(),
        out.into(),
        "--instance".into(),
        desc.kind.to_string(),
        "--prime".into(),
        desc.prime.to_string(),
    ]);
    if let Some(l) = desc.length {
        args.extend(["--length".into(), l.to_string()]);
    }
    args
}

fn ac8() -> Verdict {
    let mut problems = Vec::new();
    for (name, args) in GOLDEN {
        let want = fs::read_to_string(golden_path(name)).unwrap_or_default();
        if golden_run(args) != want {
            problems.push(format!("golden output `{name}` differs"));
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..ROUND_TRIPS {
        let path = dir.path().join(format!("cert{i}.json"));
        let p = path.to_str().unwrap();
        let args = random_certificate_args(&mut rng, p);
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let gen = amalgam(&refs);
        if gen.status.code() != Some(0) {
            problems.push(format!("generation failed: {}", args.join(" ")));
            continue;
        }
        let check = amalgam(&["verify", p]);
        if check.status.code() != Some(0) {
            problems.push(format!(
                "verify failed for {}: {}",
                args.join(" "),
                stdout(&check).trim()
            ));
        }
    }
    Verdict {
        id: "AC8",
        title: "CLI golden outputs and certificate round trips",
        problems,
        note: format!(
            "{} golden invocations, {ROUND_TRIPS} certificates",
            GOLDEN.len()
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [fn() -> Verdict; 8] = [ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8];
    let mut failed = 0;
    for run in criteria {
        let v = run();
        let tag = if v.problems.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!("[{tag}] {} {}: {}", v.id, v.title, v.note);
        for p in v.problems.iter().take(5) {
            println!("       {p}");
        }
        if !v.problems.is_empty() {
            failed += 1;
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
