//! Standard polynomial identities `S_k(x_1,…,x_k) = Σ_σ sign(σ)·x_σ(1)···x_σ(k)`.
//!
//! `S_k` is multilinear and alternating, so it vanishes on an algebra iff it
//! vanishes on every injective tuple of basis elements. The sweep walks those
//! tuples in lexicographic order and reports the first nonzero evaluation.

use rayon::prelude::*;

use crate::algebra::AlgebraBasis;
use crate::matrix::Matrix;

/// Literal evaluation: all `k!` permutations in lexicographic order, sign by
/// inversion parity. Cost is `k!·k` products; use it for small `k` or as a
/// reference.
pub fn standard_identity_eval(args: &[Matrix]) -> Matrix {
    let k = args.len();
    assert!(k > 0, "S_0 is not defined");
    let field = args[0].field();
    let n = args[0].rows();
    let mut acc = Matrix::zeros(field, n, n);
    let mut perm: Vec<usize> = (0..k).collect();
    loop {
        let mut term = args[perm[0]].clone();
        for &p in &perm[1..] {
            term = term.mul(&args[p]);
        }
        acc = if inversions(&perm).is_multiple_of(2) { acc.add(&term) } else { acc.sub(&term) };
        if !next_permutation(&mut perm) {
            break;
        }
    }
    acc
}

fn inversions(p: &[usize]) -> usize {
    (0..p.len()).map(|i| (i + 1..p.len()).filter(|&j| p[i] > p[j]).count()).sum()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Same value as [`standard_identity_eval`], computed by first-factor
/// expansion over subsets: for `U = {u_1 < … < u_m}`,
/// `S(U) = Σ_j (−1)^(j−1) · x_{u_j} · S(U ∖ u_j)`.
/// Every signed permutation term is still accounted for, at `k·2^(k−1)`
/// products instead of `k·k!`.
pub fn standard_identity_expand(args: &[&Matrix]) -> Matrix {
    let k = args.len();
    assert!((1..=24).contains(&k), "S_k expansion supports 1 ≤ k ≤ 24");
    let field = args[0].field();
    let n = args[0].rows();
    // None marks a zero partial sum
    let mut table: Vec<Option<Matrix>> = vec![None; 1 << k];
    for (i, a) in args.iter().enumerate() {
        table[1 << i] = (!a.is_zero()).then(|| (*a).clone());
    }
    for mask in 1usize..(1 << k) {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut acc: Option<Matrix> = None;
        let mut position = 0;
        for (i, a) in args.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            if let Some(rest) = &table[mask ^ (1 << i)] {
                let term = a.mul(rest);
                if !term.is_zero() {
                    acc = Some(match acc {
                        None if position % 2 == 0 => term,
                        None => term.neg(),
                        Some(s) if position % 2 == 0 => s.add(&term),
                        Some(s) => s.sub(&term),
                    });
                }
            }
            position += 1;
        }
        table[mask] = acc.filter(|m| !m.is_zero());
    }
    table[(1 << k) - 1].take().unwrap_or_else(|| Matrix::zeros(field, n, n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityVerdict {
    Verified,
    /// First injective basis-index tuple (lexicographic) with nonzero value.
    Witness {
        indices: Vec<usize>,
        value: Matrix,
    },
}

impl IdentityVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, IdentityVerdict::Verified)
    }
}

/// Number of injective `k`-tuples from `d` elements.
pub fn injective_tuple_count(d: usize, k: usize) -> u128 {
    if k > d {
        return 0;
    }
    ((d - k + 1)..=d).map(|x| x as u128).product()
}

/// Calls `f` on each injective tuple extending `prefix`, lexicographically,
/// stopping at the first `Some`.
fn search_injective<T>(
    d: usize,
    k: usize,
    prefix: &mut Vec<usize>,
    used: &mut [bool],
    f: &mut impl FnMut(&[usize]) -> Option<T>,
) -> Option<T> {
    if prefix.len() == k {
        return f(prefix);
    }
    for i in 0..d {
        if used[i] {
            continue;
        }
        used[i] = true;
        prefix.push(i);
        let found = search_injective(d, k, prefix, used, f);
        prefix.pop();
        used[i] = false;
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Exhaustive check of `S_k` on all injective `k`-tuples of basis elements.
///
/// Work is split by the first two tuple entries and evaluated in parallel;
/// the reported witness is the lexicographically first one regardless of
/// scheduling.
pub fn satisfies_standard_identity(a: &AlgebraBasis, k: usize) -> IdentityVerdict {
    assert!(k >= 1);
    let d = a.dim();
    if k > d {
        // every tuple repeats an element
        return IdentityVerdict::Verified;
    }
    let prefix_len = k.min(2);
    let mut prefixes = Vec::new();
    search_injective(d, prefix_len, &mut Vec::new(), &mut vec![false; d], &mut |p: &[usize]| {
        prefixes.push(p.to_vec());
        None::<()>
    });
    let basis = a.basis();
    prefixes
        .par_iter()
        .find_map_first(|prefix| {
            let mut used = vec![false; d];
            for &i in prefix {
                used[i] = true;
            }
            let mut tuple = prefix.clone();
            search_injective(d, k, &mut tuple, &mut used, &mut |t: &[usize]| {
                let args: Vec<&Matrix> = t.iter().map(|&i| &basis[i]).collect();
                let value = standard_identity_expand(&args);
                (!value.is_zero()).then(|| IdentityVerdict::Witness { indices: t.to_vec(), value })
            })
        })
        .unwrap_or(IdentityVerdict::Verified)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinimalDegree {
    Found(usize),
    NotFoundUpTo(usize),
}

/// Smallest `k` in `2..=max_k` for which `S_k` holds, together with the
/// verdict for every degree scanned.
pub fn minimal_standard_degree(a: &AlgebraBasis, max_k: usize) -> (MinimalDegree, Vec<(usize, IdentityVerdict)>) {
    assert!(max_k >= 2, "max_k must be at least 2");
    let mut scanned = Vec::new();
    for k in 2..=max_k {
        let v = satisfies_standard_identity(a, k);
        let ok = v.is_verified();
        scanned.push((k, v));
        if ok {
            return (MinimalDegree::Found(k), scanned);
        }
    }
    (MinimalDegree::NotFoundUpTo(max_k), scanned)
}
