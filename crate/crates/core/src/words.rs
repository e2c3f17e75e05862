//! Words in the generators, finite-group enumeration, commutator probes and
//! the brute-force unipotent radical used as an oracle.
//!
//! Commutator convention throughout: `[x, g] = x⁻¹·g⁻¹·x·g`, iterated on the
//! left: `[[x, g], g]`, and so on.

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::integral::{IntUnitri, IntegralForm};
use crate::matrix::Matrix;
use crate::rep::{unitriangular_degree, Representation};

pub const COMMUTATOR_CONVENTION: &str = "[x,g] = x^-1 g^-1 x g, left-normed [[x,g],g],...";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: String,
    pub inverse: bool,
}

/// A word in the generators and their inverses. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(name: &str) -> Self {
        Word { letters: vec![Letter { generator: name.to_string(), inverse: false }] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { generator: l.generator.clone(), inverse: !l.inverse })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Word { letters }
    }

    /// Parses whitespace- or `*`-separated tokens: `a`, `a^-1`, `a⁻¹`, `a^3`.
    /// `""` and `"1"` denote the identity.
    pub fn parse(text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for token in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            if token == "1" {
                continue;
            }
            let (name, exp) = if let Some(name) = token.strip_suffix("⁻¹") {
                (name, -1i64)
            } else if let Some((name, e)) = token.split_once('^') {
                let e: i64 = e.parse().map_err(|_| Error::InvalidWord(text.to_string()))?;
                (name, e)
            } else {
                (token, 1)
            };
            if name.is_empty() || name.contains('^') {
                return Err(Error::InvalidWord(text.to_string()));
            }
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter { generator: name.to_string(), inverse: exp < 0 });
            }
        }
        Ok(Word { letters })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| if l.inverse { format!("{}^-1", l.generator) } else { l.generator.clone() })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Product of the letters' matrices, left to right.
pub fn evaluate_word(rep: &Representation, w: &Word) -> Result<Matrix> {
    let mut acc = rep.identity();
    for l in &w.letters {
        let g = rep.generator(&l.generator).ok_or_else(|| Error::UnknownGenerator(l.generator.clone()))?;
        acc = acc.mul(if l.inverse { &g.inverse } else { &g.matrix });
    }
    Ok(acc)
}

/// Uniform random word with length in `1..=max_len` (identity if there are no generators).
pub fn random_word(rep: &Representation, max_len: usize, rng: &mut impl Rng) -> Word {
    let k = rep.generator_count();
    if k == 0 || max_len == 0 {
        return Word::identity();
    }
    let len = rng.gen_range(1..=max_len);
    let letters = (0..len)
        .map(|_| {
            let (name, _) = rep.generator_at(rng.gen_range(0..k));
            Letter { generator: name.to_string(), inverse: rng.gen_bool(0.5) }
        })
        .collect();
    Word { letters }
}

/// Seeded generator used by every sampling routine.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    Closed,
    TruncatedAtCap,
}

/// Elements found by breadth-first search. Each element records the element
/// it was reached from and the letter applied, so shortest words are
/// rebuilt on demand instead of stored.
#[derive(Clone, Debug)]
pub struct ElementTable {
    elements: IndexMap<Matrix, (usize, usize)>,
    letters: Vec<Letter>,
    pub completeness: Completeness,
}

impl ElementTable {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.completeness == Completeness::Closed
    }

    pub fn matrices(&self) -> impl Iterator<Item = &Matrix> {
        self.elements.keys()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.elements.contains_key(m)
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.elements.get_index_of(m)
    }

    pub fn element(&self, i: usize) -> &Matrix {
        self.elements.get_index(i).expect("element index").0
    }

    /// A shortest word for element `i`.
    pub fn word(&self, mut i: usize) -> Word {
        let mut letters = Vec::new();
        while i != 0 {
            let (parent, letter) = self.elements[i];
            letters.push(self.letters[letter].clone());
            i = parent;
        }
        letters.reverse();
        Word { letters }
    }
}

/// BFS over words by length. `Closed` iff a full layer produced nothing new
/// without exceeding `element_cap` elements or `length_cap` letters.
pub fn enumerate_elements(rep: &Representation, element_cap: usize, length_cap: usize) -> ElementTable {
    assert!(element_cap >= 1 && length_cap >= 1, "caps must be positive");
    let mut letters = Vec::with_capacity(2 * rep.generator_count());
    let mut mats = Vec::with_capacity(2 * rep.generator_count());
    for (name, g) in rep.generators() {
        letters.push(Letter { generator: name.to_string(), inverse: false });
        mats.push(g.matrix.clone());
        letters.push(Letter { generator: name.to_string(), inverse: true });
        mats.push(g.inverse.clone());
    }
    let mut elements: IndexMap<Matrix, (usize, usize)> = IndexMap::new();
    elements.insert(rep.identity(), (0, 0));
    let mut frontier = vec![0usize];
    let mut length = 0;
    loop {
        let mut next = Vec::new();
        for &idx in &frontier {
            let m = elements.get_index(idx).expect("frontier index").0.clone();
            for (li, g) in mats.iter().enumerate() {
                let prod = m.mul(g);
                if elements.contains_key(&prod) {
                    continue;
                }
                if length == length_cap || elements.len() == element_cap {
                    // growth past a cap: the table cannot be certified closed
                    return ElementTable { elements, letters, completeness: Completeness::TruncatedAtCap };
                }
                elements.insert(prod, (idx, li));
                next.push(elements.len() - 1);
            }
        }
        if next.is_empty() {
            return ElementTable { elements, letters, completeness: Completeness::Closed };
        }
        frontier = next;
        length += 1;
    }
}

/// `[x, g] = x⁻¹·g⁻¹·x·g`, given inverses.
fn commutator_with_inverses(x: &Matrix, x_inv: &Matrix, g: &Matrix, g_inv: &Matrix) -> (Matrix, Matrix) {
    let c = x_inv.mul(g_inv).mul(x).mul(g);
    // [x, g]⁻¹ = g⁻¹·x⁻¹·g·x
    let c_inv = g_inv.mul(x_inv).mul(g).mul(x);
    (c, c_inv)
}

/// `[[x, g], …, g]` with `depth` brackets; `depth = 0` returns `x`.
pub fn left_normed_commutator(x: &Matrix, g: &Matrix, depth: usize) -> Result<Matrix> {
    let x_inv = x.inverse().ok_or_else(|| Error::NotInvertible("x".into()))?;
    let g_inv = g.inverse().ok_or_else(|| Error::NotInvertible("g".into()))?;
    let (mut c, mut c_inv) = (x.clone(), x_inv);
    for _ in 0..depth {
        (c, c_inv) = commutator_with_inverses(&c, &c_inv, g, &g_inv);
    }
    Ok(c)
}

/// `[[x_1, x_2], x_3, …, x_n]` for elements given with their inverses.
pub fn weight_commutator(args: &[(Matrix, Matrix)]) -> Matrix {
    let (mut c, mut c_inv) = args[0].clone();
    for (g, g_inv) in &args[1..] {
        (c, c_inv) = commutator_with_inverses(&c, &c_inv, g, g_inv);
    }
    c
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeResult {
    Found(usize),
    NotFoundUpTo(usize),
}

/// Smallest depth `n ≥ 1` with `[[x, g], …, g] = I`.
pub fn nil_index_probe(x: &Matrix, g: &Matrix, depth_cap: usize) -> Result<ProbeResult> {
    assert!(depth_cap >= 1);
    let x_inv = x.inverse().ok_or_else(|| Error::NotInvertible("x".into()))?;
    let g_inv = g.inverse().ok_or_else(|| Error::NotInvertible("g".into()))?;
    let (mut c, mut c_inv) = (x.clone(), x_inv);
    for depth in 1..=depth_cap {
        (c, c_inv) = commutator_with_inverses(&c, &c_inv, g, &g_inv);
        if c.is_identity() {
            return Ok(ProbeResult::Found(depth));
        }
    }
    Ok(ProbeResult::NotFoundUpTo(depth_cap))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleOutcome {
    /// No violation among `samples` checks. Evidence, not proof.
    Consistent {
        samples: usize,
    },
    Counterexample {
        words: Vec<Word>,
        value: Matrix,
    },
}

/// Pairs/tuples to test: every generator tuple first (lexicographic) when
/// there are at most `budget` of them, then random words.
fn sample_tuples(rep: &Representation, arity: usize, budget: usize, length_cap: usize, seed: u64) -> Vec<Vec<Word>> {
    let k = rep.generator_count();
    let mut out = Vec::with_capacity(budget);
    if k == 0 {
        out.push(vec![Word::identity(); arity]);
        return out;
    }
    let exhaustive = (k as u128).checked_pow(arity as u32).is_some_and(|c| c <= budget as u128);
    if exhaustive {
        let mut idx = vec![0usize; arity];
        loop {
            out.push(idx.iter().map(|&i| Word::generator(rep.generator_at(i).0)).collect());
            let Some(pos) = (0..arity).rev().find(|&i| idx[i] + 1 < k) else { break };
            idx[pos] += 1;
            for t in &mut idx[pos + 1..] {
                *t = 0;
            }
        }
    }
    let mut rng = seeded_rng(seed);
    while out.len() < budget {
        out.push((0..arity).map(|_| random_word(rep, length_cap, &mut rng)).collect());
    }
    out
}

fn with_inverse(rep: &Representation, w: &Word) -> Result<(Matrix, Matrix)> {
    Ok((evaluate_word(rep, w)?, evaluate_word(rep, &w.inverse())?))
}

fn evaluate_integral(rep: &Representation, form: &IntegralForm, w: &Word) -> Result<IntUnitri> {
    let mut acc = IntUnitri::identity(rep.dim());
    for l in &w.letters {
        let i = rep.generator_index(&l.generator).ok_or_else(|| Error::UnknownGenerator(l.generator.clone()))?;
        let (g, g_inv) = &form.generators[i];
        acc = acc.mul(if l.inverse { g_inv } else { g });
    }
    Ok(acc)
}

/// First tuple whose left-normed commutator is not `I`, with its value.
///
/// Unitriangular groups over ℚ are evaluated in integer form (see
/// [`IntegralForm`]); the answer is the same, only faster.
fn first_nontrivial_commutator(rep: &Representation, tuples: &[Vec<Word>]) -> Result<Option<(usize, Matrix)>> {
    if let Some(form) = IntegralForm::new(rep) {
        for (t, words) in tuples.iter().enumerate() {
            let args = words
                .iter()
                .map(|w| Ok((evaluate_integral(rep, &form, w)?, evaluate_integral(rep, &form, &w.inverse())?)))
                .collect::<Result<Vec<_>>>()?;
            let (mut c, mut c_inv) = args[0].clone();
            for (g, g_inv) in &args[1..] {
                (c, c_inv) = (c_inv.mul(g_inv).mul(&c).mul(g), g_inv.mul(&c_inv).mul(g).mul(&c));
            }
            if !c.is_identity() {
                return Ok(Some((t, form.to_original(&c))));
            }
        }
        return Ok(None);
    }
    for (t, words) in tuples.iter().enumerate() {
        let args = words.iter().map(|w| with_inverse(rep, w)).collect::<Result<Vec<_>>>()?;
        let c = weight_commutator(&args);
        if !c.is_identity() {
            return Ok(Some((t, c)));
        }
    }
    Ok(None)
}

fn sample_outcome(rep: &Representation, mut tuples: Vec<Vec<Word>>) -> Result<SampleOutcome> {
    Ok(match first_nontrivial_commutator(rep, &tuples)? {
        Some((t, value)) => SampleOutcome::Counterexample { words: tuples.swap_remove(t), value },
        None => SampleOutcome::Consistent { samples: tuples.len() },
    })
}

/// Samples pairs `(x, y)` and checks `[[x, y], …, y] = I` at depth `n`.
pub fn engel_probe(
    rep: &Representation,
    n: usize,
    sample_budget: usize,
    length_cap: usize,
    seed: u64,
) -> Result<SampleOutcome> {
    let tuples = sample_tuples(rep, 2, sample_budget, length_cap, seed)
        .into_iter()
        .map(|pair| {
            let mut args = vec![pair[0].clone()];
            args.extend(std::iter::repeat_n(pair[1].clone(), n));
            args
        })
        .collect();
    Ok(match sample_outcome(rep, tuples)? {
        SampleOutcome::Counterexample { mut words, value } => {
            words.truncate(2);
            SampleOutcome::Counterexample { words, value }
        }
        consistent => consistent,
    })
}

/// Samples weight-`n` left-normed commutators `[[w_1, w_2], …, w_n]` and
/// checks each is `I`; a faithful `n`-unitriangular group has class `≤ n − 1`.
pub fn kaloujnine_class_check(
    rep: &Representation,
    n: usize,
    sample_budget: usize,
    word_length_cap: usize,
    seed: u64,
) -> Result<SampleOutcome> {
    assert!(n >= 1);
    sample_outcome(rep, sample_tuples(rep, n, sample_budget, word_length_cap, seed))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicProbe {
    /// Depth-`k` and every deeper commutator up to the cap already lie in
    /// the subgroup generated by the shallower ones. Evidence, not proof.
    StabilizedAt(usize),
    Inconclusive,
}

/// Watches the subgroup generated by `[x, g], [[x, g], g], …` grow.
pub fn algebraic_element_probe(
    rep: &Representation,
    g: &Matrix,
    x: &Matrix,
    depth_cap: usize,
    element_cap: usize,
) -> Result<AlgebraicProbe> {
    assert!(depth_cap >= 1 && element_cap >= 1);
    let g_inv = g.inverse().ok_or_else(|| Error::NotInvertible("g".into()))?;
    let x_inv = x.inverse().ok_or_else(|| Error::NotInvertible("x".into()))?;
    let mut commutators = Vec::with_capacity(depth_cap);
    let (mut c, mut c_inv) = (x.clone(), x_inv);
    for _ in 0..depth_cap {
        (c, c_inv) = commutator_with_inverses(&c, &c_inv, g, &g_inv);
        commutators.push(c.clone());
    }
    'depth: for k in 1..=depth_cap {
        let table = if k == 1 {
            None
        } else {
            let sub = Representation::from_matrices(rep.field(), rep.dim(), commutators[..k - 1].to_vec())?;
            Some(enumerate_elements(&sub, element_cap, element_cap))
        };
        for later in &commutators[k - 1..] {
            let inside = match &table {
                None => later.is_identity(),
                Some(t) => t.contains(later),
            };
            if !inside {
                if table.as_ref().is_some_and(|t| !t.is_closed()) {
                    // membership cannot be refuted in a truncated table
                    return Ok(AlgebraicProbe::Inconclusive);
                }
                continue 'depth;
            }
        }
        return Ok(AlgebraicProbe::StabilizedAt(k));
    }
    Ok(AlgebraicProbe::Inconclusive)
}

/// A finite group with its multiplication table, for subgroup searches.
pub struct FiniteGroup {
    pub table: ElementTable,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
    generator_indices: Vec<usize>,
}

impl FiniteGroup {
    pub fn new(rep: &Representation, element_cap: usize) -> Result<Self> {
        let table = enumerate_elements(rep, element_cap, element_cap);
        if !table.is_closed() {
            return Err(Error::NotFinite { elements: table.len() });
        }
        let elems: Vec<&Matrix> = table.matrices().collect();
        let mult: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| table.index_of(&a.mul(b)).expect("closed table is product-closed")).collect())
            .collect();
        let inv =
            (0..elems.len()).map(|i| mult[i].iter().position(|&p| p == 0).expect("identity is element 0")).collect();
        let generator_indices =
            rep.generators().map(|(_, g)| table.index_of(&g.matrix).expect("generators are elements")).collect();
        Ok(FiniteGroup { table, mult, inv, generator_indices })
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn element(&self, i: usize) -> &Matrix {
        self.table.element(i)
    }

    /// Subgroup generated by `seeds`, as sorted element indices.
    pub fn generate(&self, seeds: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set: BTreeSet<usize> = BTreeSet::from([0]);
        let mut queue: Vec<usize> = vec![0];
        let gens: Vec<usize> = seeds.into_iter().collect();
        while let Some(x) = queue.pop() {
            for &s in &gens {
                let y = self.mult[x][s];
                if set.insert(y) {
                    queue.push(y);
                }
            }
        }
        set
    }

    /// Every subgroup, built as joins of cyclic subgroups.
    pub fn all_subgroups(&self) -> Vec<BTreeSet<usize>> {
        let cyclic: BTreeSet<BTreeSet<usize>> = (0..self.order()).map(|g| self.generate([g])).collect();
        let cyclic: Vec<BTreeSet<usize>> = cyclic.into_iter().collect();
        let mut all: BTreeSet<BTreeSet<usize>> = cyclic.iter().cloned().collect();
        let mut frontier: Vec<BTreeSet<usize>> = all.iter().cloned().collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.is_subset(h) {
                        continue;
                    }
                    let joined = self.generate(h.iter().chain(c.iter()).copied());
                    if all.insert(joined.clone()) {
                        next.push(joined);
                    }
                }
            }
            frontier = next;
        }
        all.into_iter().collect()
    }

    /// Normal iff stable under conjugation by the group's generators.
    pub fn is_normal(&self, h: &BTreeSet<usize>) -> bool {
        h.iter().all(|&x| {
            self.generator_indices.iter().all(|&g| {
                let conj = self.mult[self.mult[self.inv[g]][x]][g];
                h.contains(&conj)
            })
        })
    }
}

/// Largest normal subgroup acting unitriangularly, by exhaustive search over
/// all subgroups of a finite group.
pub fn brute_force_unipotent_radical(rep: &Representation, element_cap: usize) -> Result<Vec<Matrix>> {
    let group = FiniteGroup::new(rep, element_cap)?;
    let mut qualifying: Vec<BTreeSet<usize>> = Vec::new();
    for h in group.all_subgroups() {
        if !group.is_normal(&h) {
            continue;
        }
        let mats: Vec<Matrix> = h.iter().map(|&i| group.element(i).clone()).collect();
        let sub = Representation::from_matrices(rep.field(), rep.dim(), mats)?;
        if unitriangular_degree(&sub)?.is_finite() {
            qualifying.push(h);
        }
    }
    let largest = qualifying
        .iter()
        .max_by_key(|h| h.len())
        .ok_or_else(|| Error::InternalInconsistency("trivial subgroup did not qualify".into()))?;
    if !qualifying.iter().all(|h| h.is_subset(largest)) {
        return Err(Error::InternalInconsistency("no unique maximal normal unitriangular subgroup".into()));
    }
    Ok(largest.iter().map(|&i| group.element(i).clone()).collect())
}
