use std::collections::{BTreeMap, HashSet};
use std::io::Write;

use pirep_core::algebra::span_closure;
use pirep_core::identity::{minimal_standard_degree, IdentityVerdict, MinimalDegree};
use pirep_core::rep::{
    check_generator_identity, invariant_series_from_identity, kolchin_flag, lift_identity_through_nilpotent_ideal,
    tuple_names, unipotency_index, unipotent_radical, EnvelopingData, GeneratorIdentity, KolchinOutcome,
    Representation, Unipotency,
};
use pirep_core::words::{
    algebraic_element_probe, brute_force_unipotent_radical, engel_probe, enumerate_elements, evaluate_word,
    nil_index_probe, AlgebraicProbe, ProbeResult, SampleOutcome, Word,
};
use pirep_core::{Error, Matrix};

use crate::certificate::{
    matrices_text, subspace_text, verify_certificate, write_atomic, Certificate, DegreeVerdict, ElementIndex,
    Membership, OracleReport, Payload, ProbeEntry, Verdict,
};
use crate::repfile::{load_rep, matrix_text};
use crate::{Command, Common, ProbeKind, EXIT_FAILS, EXIT_HOLDS, EXIT_INCONCLUSIVE, EXIT_USAGE};

/// A finished command: report lines, verdict and certificate contents.
struct Outcome {
    lines: Vec<String>,
    verdict: Verdict,
    payload: Payload,
    arguments: BTreeMap<String, String>,
    seed: Option<u64>,
}

impl Outcome {
    fn new(verdict: Verdict, payload: Payload) -> Self {
        Outcome { lines: Vec::new(), verdict, payload, arguments: BTreeMap::new(), seed: None }
    }

    fn arg(mut self, k: &str, v: impl ToString) -> Self {
        self.arguments.insert(k.into(), v.to_string());
        self
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }
}

fn exit_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Holds => EXIT_HOLDS,
        Verdict::Fails => EXIT_FAILS,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn error_code(e: &Error) -> i32 {
    match e {
        Error::CharacteristicTooSmall { .. } | Error::NotFinite { .. } => EXIT_INCONCLUSIVE,
        Error::LiftHypothesis { .. } | Error::IdentityFails { .. } => EXIT_FAILS,
        _ => EXIT_USAGE,
    }
}

fn parse_words(rep: &Representation, words: &[String]) -> pirep_core::Result<Vec<(String, Matrix)>> {
    words
        .iter()
        .map(|w| {
            let parsed = Word::parse(w)?;
            Ok((parsed.to_string(), evaluate_word(rep, &parsed)?))
        })
        .collect()
}

fn join(xs: &[String]) -> String {
    xs.join(", ")
}

fn dims(steps: &[pirep_core::Subspace]) -> String {
    steps.iter().map(|s| s.dim().to_string()).collect::<Vec<_>>().join(" < ")
}

fn check_unipotent(rep: &Representation, elements: &[String]) -> pirep_core::Result<Outcome> {
    let targets: Vec<(String, Matrix)> = if elements.is_empty() {
        rep.generators().map(|(n, g)| (n.to_string(), g.matrix.clone())).collect()
    } else {
        parse_words(rep, elements)?
    };
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for (word, m) in &targets {
        let index = match unipotency_index(rep, m)? {
            Unipotency::Index(k) => {
                lines.push(format!("{word}: unipotent, index {k}"));
                Some(k)
            }
            Unipotency::NotUnipotent => {
                lines.push(format!("{word}: NotUnipotent"));
                None
            }
        };
        entries.push(ElementIndex { word: word.clone(), index });
    }
    let all = entries.iter().all(|e| e.index.is_some());
    let mut o = Outcome::new(
        if all { Verdict::Holds } else { Verdict::Fails },
        Payload::UnipotencyIndices { elements: entries },
    )
    .arg("elements", join(elements));
    o.lines = lines;
    o.line(if all { "all unipotent" } else { "not all unipotent" });
    Ok(o)
}

fn kolchin(rep: &Representation) -> pirep_core::Result<Outcome> {
    Ok(match kolchin_flag(rep)? {
        KolchinOutcome::Unitriangular(cert) => {
            let mut o = Outcome::new(
                Verdict::Holds,
                Payload::Unitriangular {
                    degree: cert.degree,
                    flag: cert.flag.steps().iter().map(subspace_text).collect(),
                    base_change: matrix_text(&cert.base_change),
                },
            );
            o.line(format!("unitriangular, degree {}", cert.degree));
            o.line(format!("flag dimensions: {}", dims(cert.flag.steps())));
            o.line(format!("base change: {}", cert.base_change));
            o
        }
        KolchinOutcome::NotUnipotent { stage, residual } => {
            let mut o =
                Outcome::new(Verdict::Fails, Payload::NotUnitriangular { stage, residual: subspace_text(&residual) });
            o.line(format!(
                "not unitriangular: stage {stage}, no nonzero vector of V/W is fixed (dim W = {})",
                residual.dim()
            ));
            o
        }
    })
}

fn identity_check(rep: &Representation, length: usize, lift: bool) -> pirep_core::Result<Outcome> {
    if length == 0 {
        return Err(Error::InvalidArgument("--length must be positive".into()));
    }
    if lift {
        let env = EnvelopingData::new(rep)?;
        let radical = env.radical()?;
        let lb = lift_identity_through_nilpotent_ideal(rep, &env, radical, length)?;
        let mut o = Outcome::new(
            Verdict::Holds,
            Payload::LiftedIdentity {
                length,
                ideal: matrices_text(&radical.matrices()),
                ideal_index: lb.ideal_index,
                bound: lb.bound,
            },
        )
        .arg("length", length)
        .arg("lift_through_radical", true);
        o.line(format!("identity of length {length} holds modulo the radical (nilpotency index {})", lb.ideal_index));
        o.line(format!("lifted bound {}: verified on all generator tuples", lb.bound));
        return Ok(o);
    }
    Ok(match check_generator_identity(rep, length) {
        GeneratorIdentity::Verified => {
            let series = invariant_series_from_identity(rep, length)?;
            let mut o = Outcome::new(
                Verdict::Holds,
                Payload::IdentitySeries { length, series: series.steps().iter().map(subspace_text).collect() },
            )
            .arg("length", length);
            o.line(format!("Verified: every product of {length} factors (h - I) vanishes"));
            o.line(format!("invariant series dimensions: {}", dims(series.steps())));
            o
        }
        GeneratorIdentity::Witness { tuple, product } => {
            let names = tuple_names(rep, &tuple);
            let mut o = Outcome::new(
                Verdict::Fails,
                Payload::IdentityWitness { length, tuple: names.clone(), product: matrix_text(&product) },
            )
            .arg("length", length);
            o.line(format!("Witness ({}): product {}", join(&names), product));
            o
        }
    })
}

fn pi_check(rep: &Representation, max_degree: usize) -> pirep_core::Result<Outcome> {
    if max_degree < 2 {
        return Err(Error::InvalidArgument("--max-degree must be at least 2".into()));
    }
    let algebra = span_closure(rep.field(), rep.dim(), &rep.matrices(), true)?;
    let (minimal, scanned) = minimal_standard_degree(&algebra, max_degree);
    let mut lines = vec![format!("enveloping algebra dimension {}", algebra.dim())];
    let mut degrees = Vec::new();
    for (k, v) in scanned {
        match v {
            IdentityVerdict::Verified => {
                lines.push(format!("S_{k}: holds"));
                degrees.push(DegreeVerdict { degree: k, witness: None, value: None });
            }
            IdentityVerdict::Witness { indices, value } => {
                lines.push(format!("S_{k}: fails on basis elements {indices:?}, value {value}"));
                degrees.push(DegreeVerdict { degree: k, witness: Some(indices), value: Some(matrix_text(&value)) });
            }
        }
    }
    let (verdict, min) = match minimal {
        MinimalDegree::Found(k) => {
            lines.push(format!("minimal standard identity degree: {k}"));
            (Verdict::Holds, Some(k))
        }
        MinimalDegree::NotFoundUpTo(k) => {
            lines.push(format!("no standard identity of degree <= {k}"));
            (Verdict::Inconclusive, None)
        }
    };
    let mut o = Outcome::new(
        verdict,
        Payload::StandardIdentity { algebra: matrices_text(algebra.basis()), degrees, minimal: min },
    )
    .arg("max_degree", max_degree);
    o.lines = lines;
    Ok(o)
}

fn radical(rep: &Representation, tests: &[String], oracle: bool, element_cap: usize) -> pirep_core::Result<Outcome> {
    let env = EnvelopingData::new(rep)?;
    let rad = unipotent_radical(rep, &env)?;
    let mut lines = vec![format!("radical dimension {}, nilpotency index {}", rad.radical.dim(), rad.nilpotency_index)];
    let mut memberships = Vec::new();
    for (word, m) in parse_words(rep, tests)? {
        let member = rad.contains(&m);
        lines.push(format!("{word}: {}", if member { "member" } else { "non-member" }));
        memberships.push(Membership { word, member });
    }
    let mut report = None;
    if oracle {
        let table = enumerate_elements(rep, element_cap, element_cap);
        if !table.is_closed() {
            return Err(Error::NotFinite { elements: table.len() });
        }
        let members: HashSet<Matrix> = rad.members(table.matrices()).into_iter().collect();
        let brute: HashSet<Matrix> = brute_force_unipotent_radical(rep, element_cap)?.into_iter().collect();
        let agrees = members == brute;
        lines.push(format!(
            "oracle {}: radical order {} (oracle {}) in a group of order {}",
            if agrees { "agrees" } else { "DISAGREES" },
            members.len(),
            brute.len(),
            table.len()
        ));
        report = Some(OracleReport {
            group_order: table.len(),
            radical_order: members.len(),
            oracle_order: brute.len(),
            agrees,
        });
    }
    let verdict = if report.as_ref().is_none_or(|r| r.agrees) { Verdict::Holds } else { Verdict::Fails };
    let mut o = Outcome::new(
        verdict,
        Payload::UnipotentRadical {
            algebra: matrices_text(env.algebra.basis()),
            radical: matrices_text(&rad.radical.matrices()),
            nilpotency_index: rad.nilpotency_index,
            tests: memberships,
            oracle: report,
        },
    )
    .arg("tests", join(tests))
    .arg("oracle", oracle);
    if oracle {
        o = o.arg("element_cap", element_cap);
    }
    o.lines = lines;
    Ok(o)
}

struct ProbeArgs {
    kind: ProbeKind,
    g: Option<String>,
    x: Option<String>,
    n: usize,
    depth_cap: usize,
    element_cap: usize,
    samples: usize,
    word_length: usize,
    seed: u64,
}

fn probe(rep: &Representation, a: ProbeArgs) -> pirep_core::Result<Outcome> {
    if a.depth_cap == 0 || a.element_cap == 0 {
        return Err(Error::InvalidArgument("caps must be positive".into()));
    }
    let g_text = a.g.clone().unwrap_or_else(|| rep.names().next().unwrap_or("1").to_string());
    let xs: Vec<String> = match &a.x {
        Some(x) => vec![x.clone()],
        None => rep.names().map(str::to_string).collect(),
    };
    const EVIDENCE: &str = "Evidence (not proof)";
    let o = match a.kind {
        ProbeKind::Nil => {
            let (g_word, g) = parse_words(rep, std::slice::from_ref(&g_text))?.remove(0);
            let mut results = Vec::new();
            let mut lines = Vec::new();
            for (x_word, x) in parse_words(rep, &xs)? {
                let depth = match nil_index_probe(&x, &g, a.depth_cap)? {
                    ProbeResult::Found(k) => {
                        lines.push(format!("x = {x_word}: commutator reaches I at index {k}"));
                        Some(k)
                    }
                    ProbeResult::NotFoundUpTo(k) => {
                        lines.push(format!("x = {x_word}: NotFoundUpTo({k})"));
                        None
                    }
                };
                results.push(ProbeEntry { x: x_word, depth });
            }
            let all = results.iter().all(|r| r.depth.is_some());
            if all {
                lines.push(format!("{EVIDENCE}: g = {g_word} acts as a nil-element on every tested x"));
            }
            let mut o = Outcome::new(
                if all { Verdict::Holds } else { Verdict::Inconclusive },
                Payload::NilProbe { g: g_word.clone(), depth_cap: a.depth_cap, results },
            )
            .arg("g", g_word)
            .arg("depth_cap", a.depth_cap);
            o.lines = lines;
            o
        }
        ProbeKind::Engel => {
            if a.n == 0 {
                return Err(Error::InvalidArgument("--n must be positive".into()));
            }
            let outcome = engel_probe(rep, a.n, a.samples, a.word_length, a.seed)?;
            let mut o = match outcome {
                SampleOutcome::Consistent { samples } => {
                    let mut o =
                        Outcome::new(Verdict::Holds, Payload::EngelProbe { n: a.n, samples, counterexample: None });
                    o.line(format!("Consistent after {samples} samples: {EVIDENCE}"));
                    o
                }
                SampleOutcome::Counterexample { words, value } => {
                    let texts: Vec<String> = words.iter().map(Word::to_string).collect();
                    let mut o = Outcome::new(
                        Verdict::Fails,
                        Payload::EngelProbe { n: a.n, samples: a.samples, counterexample: Some(texts.clone()) },
                    );
                    o.line(format!("CounterexamplePair({}): commutator {}", join(&texts), value));
                    o
                }
            };
            o = o.arg("n", a.n).arg("samples", a.samples).arg("word_length", a.word_length);
            o.seed = Some(a.seed);
            o
        }
        ProbeKind::Algebraic => {
            let (g_word, g) = parse_words(rep, std::slice::from_ref(&g_text))?.remove(0);
            let mut results = Vec::new();
            let mut lines = Vec::new();
            for (x_word, x) in parse_words(rep, &xs)? {
                let depth = match algebraic_element_probe(rep, &g, &x, a.depth_cap, a.element_cap)? {
                    AlgebraicProbe::StabilizedAt(k) => {
                        lines.push(format!("x = {x_word}: StabilizedAt({k})"));
                        Some(k)
                    }
                    AlgebraicProbe::Inconclusive => {
                        lines.push(format!("x = {x_word}: Inconclusive"));
                        None
                    }
                };
                results.push(ProbeEntry { x: x_word, depth });
            }
            let all = results.iter().all(|r| r.depth.is_some());
            if all {
                lines.push(format!("{EVIDENCE}: commutator subgroups stabilized for every tested x"));
            }
            let mut o = Outcome::new(
                if all { Verdict::Holds } else { Verdict::Inconclusive },
                Payload::AlgebraicProbe {
                    g: g_word.clone(),
                    depth_cap: a.depth_cap,
                    element_cap: a.element_cap,
                    results,
                },
            )
            .arg("g", g_word)
            .arg("depth_cap", a.depth_cap)
            .arg("element_cap", a.element_cap);
            o.lines = lines;
            o
        }
    };
    let kind = match a.kind {
        ProbeKind::Nil => "nil",
        ProbeKind::Engel => "engel",
        ProbeKind::Algebraic => "algebraic",
    };
    let mut o = o.arg("kind", kind);
    if let Some(x) = a.x {
        o = o.arg("x", x);
    }
    Ok(o)
}

fn verify_cert(path: &std::path::Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let cert = match Certificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: line {}, column {}: {e}", e.line(), e.column());
            return EXIT_USAGE;
        }
    };
    match verify_certificate(&cert) {
        Ok(report) => {
            for l in report {
                let _ = writeln!(out, "ok: {l}");
            }
            let _ = writeln!(out, "certificate verified");
            EXIT_HOLDS
        }
        Err(e) => {
            let _ = writeln!(out, "certificate REJECTED: {e}");
            EXIT_FAILS
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckUnipotent { .. } => "check-unipotent",
        Command::Kolchin { .. } => "kolchin",
        Command::IdentityCheck { .. } => "identity-check",
        Command::PiCheck { .. } => "pi-check",
        Command::UnipotentRadical { .. } => "unipotent-radical",
        Command::Probe { .. } => "probe",
        Command::VerifyCert { .. } => "verify-cert",
    }
}

type Runner = Box<dyn FnOnce(&Representation) -> pirep_core::Result<Outcome>>;

pub fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let name = command_name(&command);
    let (common, run): (Common, Runner) = match command {
        Command::VerifyCert { certificate } => return verify_cert(&certificate, out, err),
        Command::CheckUnipotent { common, elements } => (common, Box::new(move |r| check_unipotent(r, &elements))),
        Command::Kolchin { common } => (common, Box::new(kolchin)),
        Command::IdentityCheck { common, length, lift_through_radical } => {
            (common, Box::new(move |r| identity_check(r, length, lift_through_radical)))
        }
        Command::PiCheck { common, max_degree } => (common, Box::new(move |r| pi_check(r, max_degree))),
        Command::UnipotentRadical { common, tests, oracle, element_cap } => {
            (common, Box::new(move |r| radical(r, &tests, oracle, element_cap)))
        }
        Command::Probe { common, kind, g, x, n, depth_cap, element_cap, samples, word_length, seed } => (
            common,
            Box::new(move |r| {
                probe(r, ProbeArgs { kind, g, x, n, depth_cap, element_cap, samples, word_length, seed })
            }),
        ),
    };
    let rep = match load_rep(&common.repfile) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", common.repfile.display());
            return EXIT_USAGE;
        }
    };
    let outcome = match run(&rep) {
        Ok(o) => o,
        Err(e) => {
            let code = error_code(&e);
            let label = match code {
                EXIT_FAILS => "fails",
                EXIT_INCONCLUSIVE => "inconclusive",
                _ => "error",
            };
            if code == EXIT_USAGE {
                let _ = writeln!(err, "{label}: {e}");
            } else {
                let _ = writeln!(out, "{label}: {e}");
            }
            return code;
        }
    };
    for l in &outcome.lines {
        let _ = writeln!(out, "{l}");
    }
    let code = exit_code(&outcome.verdict);
    if let Some(path) = &common.cert {
        let cert = Certificate::new(&rep, name, outcome.arguments, outcome.seed, outcome.verdict, outcome.payload);
        if let Err(e) = write_atomic(path, &cert.to_json()) {
            let _ = writeln!(err, "error: cannot write certificate {}: {e}", path.display());
            return EXIT_USAGE;
        }
        let _ = writeln!(out, "certificate written to {}", path.display());
    }
    code
}
