//! Certificates: self-contained JSON records of a command's result, and an
//! independent checker that re-verifies them with plain linear algebra.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use pirep_core::linalg::Subspace;
use pirep_core::rep::Representation;
use pirep_core::words::{evaluate_word, Word, COMMUTATOR_CONVENTION};
use pirep_core::{fixed_space, quotient_action, FieldSpec, Matrix, Scalar};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::repfile::{matrix_from_text, matrix_text, render_rep_file, MatrixText, RepFile};

pub const TOOLKIT: &str = "pirep";
pub const ACTION_CONVENTION: &str = "row vectors, v -> v*g; flag bases list the smallest step first";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub action: String,
    pub commutator: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions { action: ACTION_CONVENTION.into(), commutator: COMMUTATOR_CONVENTION.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementIndex {
    pub word: String,
    /// Smallest `k` with `(g − I)^k = 0`; `None` if not unipotent.
    pub index: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeVerdict {
    pub degree: usize,
    /// Basis indices of the first nonzero evaluation, if any.
    pub witness: Option<Vec<usize>>,
    pub value: Option<MatrixText>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub word: String,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub group_order: usize,
    pub radical_order: usize,
    pub oracle_order: usize,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeEntry {
    pub x: String,
    pub depth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Payload {
    UnipotencyIndices {
        elements: Vec<ElementIndex>,
    },
    Unitriangular {
        degree: usize,
        /// Basis rows of each flag step, from `0` up to `V`.
        flag: Vec<MatrixText>,
        base_change: MatrixText,
    },
    NotUnitriangular {
        stage: usize,
        /// Invariant subspace whose quotient has no nonzero fixed vector.
        residual: MatrixText,
    },
    IdentitySeries {
        length: usize,
        series: Vec<MatrixText>,
    },
    IdentityWitness {
        length: usize,
        tuple: Vec<String>,
        product: MatrixText,
    },
    LiftedIdentity {
        length: usize,
        ideal: Vec<MatrixText>,
        ideal_index: usize,
        bound: usize,
    },
    StandardIdentity {
        algebra: Vec<MatrixText>,
        degrees: Vec<DegreeVerdict>,
        minimal: Option<usize>,
    },
    UnipotentRadical {
        algebra: Vec<MatrixText>,
        radical: Vec<MatrixText>,
        nilpotency_index: usize,
        tests: Vec<Membership>,
        oracle: Option<OracleReport>,
    },
    NilProbe {
        g: String,
        depth_cap: usize,
        results: Vec<ProbeEntry>,
    },
    EngelProbe {
        n: usize,
        samples: usize,
        counterexample: Option<Vec<String>>,
    },
    AlgebraicProbe {
        g: String,
        depth_cap: usize,
        element_cap: usize,
        results: Vec<ProbeEntry>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub toolkit: String,
    pub version: String,
    pub command: String,
    pub arguments: BTreeMap<String, String>,
    pub input_digest: String,
    pub result: Verdict,
    pub conventions: Conventions,
    pub seed: Option<u64>,
    pub representation: RepFile,
    pub payload: Payload,
}

/// `sha256` over the canonical representation text, command, arguments and seed.
pub fn input_digest(rep: &RepFile, command: &str, arguments: &BTreeMap<String, String>, seed: Option<u64>) -> String {
    let mut h = Sha256::new();
    h.update(render_rep_file(rep).as_bytes());
    h.update(b"\0");
    h.update(command.as_bytes());
    for (k, v) in arguments {
        h.update(b"\0");
        h.update(k.as_bytes());
        h.update(b"=");
        h.update(v.as_bytes());
    }
    if let Some(s) = seed {
        h.update(format!("\0seed={s}").as_bytes());
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

impl Certificate {
    pub fn new(
        rep: &Representation,
        command: &str,
        arguments: BTreeMap<String, String>,
        seed: Option<u64>,
        result: Verdict,
        payload: Payload,
    ) -> Self {
        let representation = RepFile::from_representation(rep);
        Certificate {
            toolkit: TOOLKIT.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input_digest: input_digest(&representation, command, &arguments, seed),
            arguments,
            result,
            conventions: Conventions::default(),
            seed,
            representation,
            payload,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn matrices_text(ms: &[Matrix]) -> Vec<MatrixText> {
    ms.iter().map(matrix_text).collect()
}

pub fn subspace_text(s: &Subspace) -> MatrixText {
    matrix_text(s.basis())
}

/// What the checker established, line by line.
pub type CheckReport = Vec<String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn read_matrix(field: FieldSpec, m: &MatrixText) -> Result<Matrix, String> {
    matrix_from_text(field, m).map_err(|e| e.to_string())
}

fn read_space(field: FieldSpec, dim: usize, rows: &MatrixText) -> Result<Subspace, String> {
    let vectors = rows
        .iter()
        .map(|r| {
            if r.len() != dim {
                return fail(format!("vector of length {} in dimension {dim}", r.len()));
            }
            r.iter().map(|s| field.parse_scalar(&s.0).map_err(|e| e.to_string())).collect()
        })
        .collect::<Result<Vec<Vec<Scalar>>, String>>()?;
    Ok(Subspace::span(field, dim, &vectors))
}

fn read_word(rep: &Representation, text: &str) -> Result<Matrix, String> {
    let w = Word::parse(text).map_err(|e| e.to_string())?;
    evaluate_word(rep, &w).map_err(|e| e.to_string())
}

/// Span of matrices, as a subspace of flattened `n²`-vectors.
fn matrix_span(field: FieldSpec, n: usize, ms: &[Matrix]) -> Subspace {
    Subspace::span(field, n * n, &ms.iter().map(Matrix::flatten).collect::<Vec<_>>())
}

/// Smallest `m` with `R^m = 0` for the span `R` of `ms`, if at most `cap`.
fn span_nilpotency(field: FieldSpec, n: usize, ms: &[Matrix], cap: usize) -> Option<usize> {
    let mut power: Vec<Matrix> =
        matrix_span(field, n, ms).basis_vectors().iter().map(|v| Matrix::unflatten(field, n, v)).collect();
    for m in 1..=cap {
        if power.is_empty() {
            return Some(m);
        }
        let products: Vec<Matrix> = power.iter().flat_map(|p| ms.iter().map(move |x| p.mul(x))).collect();
        power =
            matrix_span(field, n, &products).basis_vectors().iter().map(|v| Matrix::unflatten(field, n, v)).collect();
    }
    None
}

fn generator_diffs(rep: &Representation) -> Vec<Matrix> {
    rep.generators().map(|(_, g)| g.matrix.minus_identity()).collect()
}

/// `V·(h_1 − I)···(h_k − I)` summed over all generator tuples, for `k = len`.
fn descending_image(rep: &Representation, len: usize) -> Subspace {
    let diffs = generator_diffs(rep);
    let mut v = Subspace::full(rep.field(), rep.dim());
    for _ in 0..len {
        let mut next = Subspace::zero(rep.field(), rep.dim());
        for d in &diffs {
            next = next.sum(&v.image(d)).expect("same ambient space");
        }
        v = next;
    }
    v
}

fn check_flag(rep: &Representation, steps: &[MatrixText]) -> Result<Vec<Subspace>, String> {
    let (field, dim) = (rep.field(), rep.dim());
    let spaces = steps.iter().map(|s| read_space(field, dim, s)).collect::<Result<Vec<_>, _>>()?;
    if spaces.first().is_none_or(|s| !s.is_zero()) || spaces.last().is_none_or(|s| !s.is_full()) {
        return fail("flag must start at 0 and end at V");
    }
    for (i, pair) in spaces.windows(2).enumerate() {
        if !pair[0].is_subspace_of(&pair[1]) || pair[0].dim() >= pair[1].dim() {
            return fail(format!("flag step {} does not strictly contain step {i}", i + 1));
        }
        for (name, g) in rep.generators() {
            let d = g.matrix.minus_identity();
            if !pair[1].image(&d).is_subspace_of(&pair[0]) {
                return fail(format!("{name} - I does not map step {} into step {i}", i + 1));
            }
        }
    }
    Ok(spaces)
}

/// Signed permutation sum, independent of the library's evaluator.
fn standard_polynomial(args: &[Matrix]) -> Matrix {
    fn go(args: &[Matrix], used: &mut Vec<bool>, acc: Matrix, sign: bool, depth: usize, out: &mut Matrix) {
        if depth == args.len() {
            *out = if sign { out.sub(&acc) } else { out.add(&acc) };
            return;
        }
        let mut passed = 0;
        for i in 0..args.len() {
            if used[i] {
                continue;
            }
            // choosing i at this position inverts it with every unused smaller index
            let s = sign ^ (passed % 2 == 1);
            passed += 1;
            used[i] = true;
            go(args, used, acc.mul(&args[i]), s, depth + 1, out);
            used[i] = false;
        }
    }
    let n = args[0].rows();
    let mut out = Matrix::zeros(args[0].field(), n, n);
    go(args, &mut vec![false; args.len()], Matrix::identity(args[0].field(), n), false, 0, &mut out);
    out
}

/// Budget of permutation terms for re-verifying a "holds" identity claim.
pub const IDENTITY_RECHECK_BUDGET: u128 = 2_000_000;

fn check_algebra(rep: &Representation, algebra: &[MatrixText]) -> Result<(Vec<Matrix>, Subspace), String> {
    let (field, n) = (rep.field(), rep.dim());
    let basis = algebra.iter().map(|m| read_matrix(field, m)).collect::<Result<Vec<_>, _>>()?;
    let span = matrix_span(field, n, &basis);
    if span.dim() != basis.len() {
        return fail("algebra basis is linearly dependent");
    }
    if !span.contains(&rep.identity().flatten()) || rep.generators().any(|(_, g)| !span.contains(&g.matrix.flatten())) {
        return fail("algebra does not contain I and every generator");
    }
    for a in &basis {
        for b in &basis {
            if !span.contains(&a.mul(b).flatten()) {
                return fail("algebra basis is not closed under products");
            }
        }
    }
    Ok((basis, span))
}

/// Re-verifies a certificate. Returns what was checked, or the first problem.
pub fn verify_certificate(cert: &Certificate) -> Result<CheckReport, String> {
    let mut report = Vec::new();
    if cert.toolkit != TOOLKIT {
        return fail(format!("unknown toolkit {:?}", cert.toolkit));
    }
    let digest = input_digest(&cert.representation, &cert.command, &cert.arguments, cert.seed);
    if digest != cert.input_digest {
        return fail("input digest does not match the embedded inputs");
    }
    report.push("input digest matches".to_string());
    let rep = cert.representation.to_representation().map_err(|e| e.to_string())?;
    let (field, n) = (rep.field(), rep.dim());
    let expect = |v: Verdict| -> Result<(), String> {
        if cert.result == v {
            Ok(())
        } else {
            fail(format!("result {:?} inconsistent with payload", cert.result))
        }
    };

    match &cert.payload {
        Payload::UnipotencyIndices { elements } => {
            let mut all = true;
            for e in elements {
                let d = read_word(&rep, &e.word)?.minus_identity();
                match e.index {
                    Some(k) => {
                        let prev = Matrix::identity(field, n);
                        let before = (1..k).fold(prev, |acc, _| acc.mul(&d));
                        if k == 0 || !before.mul(&d).is_zero() || (k > 1 && before.is_zero()) {
                            return fail(format!("{}: unipotency index {k} is wrong", e.word));
                        }
                    }
                    None => {
                        all = false;
                        if d.pow(n as u32).is_zero() {
                            return fail(format!("{} is unipotent", e.word));
                        }
                    }
                }
            }
            expect(if all { Verdict::Holds } else { Verdict::Fails })?;
            report.push(format!("{} unipotency indices recomputed", elements.len()));
        }
        Payload::Unitriangular { degree, flag, base_change } => {
            expect(Verdict::Holds)?;
            let spaces = check_flag(&rep, flag)?;
            if spaces.len() != degree + 1 {
                return fail("degree does not match flag length");
            }
            let b = read_matrix(field, base_change)?;
            if b.rows() != n || b.cols() != n || b.inverse().is_none() {
                return fail("base change is not an invertible n x n matrix");
            }
            for w in &spaces {
                let prefix = Subspace::span(field, n, &b.row_vecs()[..w.dim()]);
                if &prefix != w {
                    return fail("base change rows are not adapted to the flag");
                }
            }
            report.push(format!("flag of length {degree} dropped by every generator"));
            report.push("base change is adapted to the flag".to_string());
        }
        Payload::NotUnitriangular { stage, residual } => {
            expect(Verdict::Fails)?;
            let w = read_space(field, n, residual)?;
            if w.is_full() {
                return fail("residual space is all of V");
            }
            let mut induced = Vec::new();
            for (name, g) in rep.generators() {
                if w.check_invariant(&g.matrix).is_err() {
                    return fail(format!("residual space not invariant under {name}"));
                }
                induced.push(quotient_action(&g.matrix, &w).map_err(|e| e.to_string())?);
            }
            if !fixed_space(field, n - w.dim(), &induced).map_err(|e| e.to_string())?.is_zero() {
                return fail("quotient has a nonzero fixed vector");
            }
            report.push(format!("stage {stage}: invariant subspace with fixed-point-free quotient"));
        }
        Payload::IdentitySeries { length, series } => {
            expect(Verdict::Holds)?;
            let spaces = check_flag(&rep, series)?;
            if spaces.len() - 1 > *length {
                return fail("series is longer than the identity length");
            }
            report
                .push(format!("invariant series of length {} implies the length-{length} identity", spaces.len() - 1));
        }
        Payload::IdentityWitness { length, tuple, product } => {
            expect(Verdict::Fails)?;
            if tuple.len() != *length {
                return fail("witness tuple has the wrong length");
            }
            let mut p = Matrix::identity(field, n);
            for name in tuple {
                let g = rep.generator(name).ok_or_else(|| format!("unknown generator {name}"))?;
                p = p.mul(&g.matrix.minus_identity());
            }
            if p.is_zero() || p != read_matrix(field, product)? {
                return fail("witness product does not match or vanishes");
            }
            report.push("witness product recomputed, nonzero".to_string());
        }
        Payload::LiftedIdentity { length, ideal, ideal_index, bound } => {
            expect(Verdict::Holds)?;
            let basis = ideal.iter().map(|m| read_matrix(field, m)).collect::<Result<Vec<_>, _>>()?;
            if span_nilpotency(field, n, &basis, *ideal_index) != Some(*ideal_index) {
                return fail("ideal does not have the stated nilpotency index");
            }
            if bound != &(ideal_index * length) || !descending_image(&rep, *bound).is_zero() {
                return fail("lifted identity does not hold");
            }
            report.push(format!(
                "ideal nilpotent of index {ideal_index}; every generator product of length {bound} vanishes"
            ));
        }
        Payload::StandardIdentity { algebra, degrees, minimal } => {
            let (basis, _) = check_algebra(&rep, algebra)?;
            report.push(format!("enveloping algebra of dimension {} is closed", basis.len()));
            for dv in degrees {
                match (&dv.witness, &dv.value) {
                    (Some(idx), Some(v)) => {
                        let args = idx
                            .iter()
                            .map(|&i| basis.get(i).cloned().ok_or("witness index out of range"))
                            .collect::<Result<Vec<_>, _>>()?;
                        let value = standard_polynomial(&args);
                        if value.is_zero() || value != read_matrix(field, v)? {
                            return fail(format!("S_{} witness does not reproduce", dv.degree));
                        }
                        report.push(format!("S_{} witness recomputed, nonzero", dv.degree));
                    }
                    (None, None) => {
                        let d = basis.len();
                        let tuples: u128 =
                            if dv.degree > d { 0 } else { ((d - dv.degree + 1)..=d).map(|x| x as u128).product() };
                        let perms: u128 = (1..=dv.degree as u128).product();
                        if tuples.saturating_mul(perms) > IDENTITY_RECHECK_BUDGET {
                            report.push(format!("S_{} holds: not rechecked ({tuples} tuples over budget)", dv.degree));
                            continue;
                        }
                        let mut idx = vec![0usize; dv.degree];
                        if tuples > 0 {
                            loop {
                                let distinct = idx.iter().enumerate().all(|(i, a)| !idx[..i].contains(a));
                                if distinct {
                                    let args: Vec<Matrix> = idx.iter().map(|&i| basis[i].clone()).collect();
                                    if !standard_polynomial(&args).is_zero() {
                                        return fail(format!("S_{} claimed but fails on {idx:?}", dv.degree));
                                    }
                                }
                                let Some(pos) = (0..idx.len()).rev().find(|&i| idx[i] + 1 < d) else { break };
                                idx[pos] += 1;
                                for t in &mut idx[pos + 1..] {
                                    *t = 0;
                                }
                            }
                        }
                        report.push(format!("S_{} rechecked on all {tuples} injective tuples", dv.degree));
                    }
                    _ => return fail("degree verdict must have both witness and value or neither"),
                }
            }
            let found = degrees.iter().find(|d| d.witness.is_none()).map(|d| d.degree);
            if found != *minimal {
                return fail("minimal degree inconsistent with verdicts");
            }
            expect(if minimal.is_some() { Verdict::Holds } else { Verdict::Inconclusive })?;
        }
        Payload::UnipotentRadical { algebra, radical, nilpotency_index, tests, oracle } => {
            let (basis, span) = check_algebra(&rep, algebra)?;
            let rad = radical.iter().map(|m| read_matrix(field, m)).collect::<Result<Vec<_>, _>>()?;
            let rad_span = matrix_span(field, n, &rad);
            if !rad_span.is_subspace_of(&span) {
                return fail("radical is not inside the algebra");
            }
            for r in &rad {
                for a in &basis {
                    if !rad_span.contains(&a.mul(r).flatten()) || !rad_span.contains(&r.mul(a).flatten()) {
                        return fail("radical is not a two-sided ideal");
                    }
                }
            }
            if span_nilpotency(field, n, &rad, *nilpotency_index) != Some(*nilpotency_index) {
                return fail("radical does not have the stated nilpotency index");
            }
            report.push(format!("radical of dimension {} is a nilpotent ideal of index {nilpotency_index}", rad.len()));
            for t in tests {
                let inside = rad_span.contains(&read_word(&rep, &t.word)?.minus_identity().flatten());
                if inside != t.member {
                    return fail(format!("membership of {} is wrong", t.word));
                }
            }
            if !tests.is_empty() {
                report.push(format!("{} membership verdicts recomputed", tests.len()));
            }
            let agrees = oracle.as_ref().is_none_or(|o| o.agrees);
            expect(if agrees { Verdict::Holds } else { Verdict::Fails })?;
            if oracle.is_some() {
                report.push("oracle comparison recorded, not recomputed".to_string());
            }
        }
        Payload::NilProbe { g, depth_cap, results } => {
            let gm = read_word(&rep, g)?;
            let g_inv = gm.inverse().ok_or("g is singular")?;
            for r in results {
                let mut c = read_word(&rep, &r.x)?;
                let mut hit = None;
                for depth in 1..=*depth_cap {
                    let c_inv = c.inverse().ok_or("singular commutator")?;
                    c = c_inv.mul(&g_inv).mul(&c).mul(&gm);
                    if c.is_identity() {
                        hit = Some(depth);
                        break;
                    }
                }
                if hit != r.depth {
                    return fail(format!("nil index for x = {} does not reproduce", r.x));
                }
            }
            let all = results.iter().all(|r| r.depth.is_some());
            expect(if all { Verdict::Holds } else { Verdict::Inconclusive })?;
            report.push(format!("{} commutator chains recomputed", results.len()));
        }
        Payload::EngelProbe { n: depth, counterexample, samples } => match counterexample {
            Some(words) => {
                expect(Verdict::Fails)?;
                let [x, y] = words.as_slice() else { return fail("counterexample must be a pair") };
                let (xm, ym) = (read_word(&rep, x)?, read_word(&rep, y)?);
                let y_inv = ym.inverse().ok_or("singular")?;
                let mut c = xm;
                for _ in 0..*depth {
                    c = c.inverse().ok_or("singular")?.mul(&y_inv).mul(&c).mul(&ym);
                }
                if c.is_identity() {
                    return fail("counterexample commutator is the identity");
                }
                report.push("counterexample commutator recomputed, not the identity".to_string());
            }
            None => {
                expect(Verdict::Holds)?;
                report.push(format!("{samples} samples consistent: evidence only, not rechecked"));
            }
        },
        Payload::AlgebraicProbe { results, .. } => {
            let all = results.iter().all(|r| r.depth.is_some());
            expect(if all { Verdict::Holds } else { Verdict::Inconclusive })?;
            report.push("subgroup stabilization is evidence only, not rechecked".to_string());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_sum_matches_known_values() {
        let q = FieldSpec::Rationals;
        let e = |i, j| Matrix::unit(q, 2, i, j);
        assert_eq!(standard_polynomial(&[e(0, 1), e(1, 0)]), Matrix::diagonal(q, &[1, -1]));
        assert!(standard_polynomial(&[e(0, 0), e(0, 1), e(1, 0), e(1, 1)]).is_zero());
        let s3 = standard_polynomial(&[e(0, 0), e(0, 1), e(1, 0)]);
        assert_eq!(s3, pirep_core::identity::standard_identity_eval(&[e(0, 0), e(0, 1), e(1, 0)]));
    }

    #[test]
    fn span_nilpotency_of_strictly_upper() {
        let q = FieldSpec::Rationals;
        let ms = vec![Matrix::unit(q, 3, 0, 1), Matrix::unit(q, 3, 1, 2), Matrix::unit(q, 3, 0, 2)];
        assert_eq!(span_nilpotency(q, 3, &ms, 5), Some(3));
        assert_eq!(span_nilpotency(q, 3, &[Matrix::identity(q, 3)], 5), None);
    }
}
