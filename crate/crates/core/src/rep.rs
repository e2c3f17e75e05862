//! Finitely generated matrix representations and their unitriangularity.
//!
//! A [`Representation`] stores the images of a finite generating set. Since
//! only images are stored, the representation is automatically faithful on
//! the group they generate, and the enveloping algebra `A = span(G)` acts
//! faithfully on `V`. That makes the augmentation-ideal test in
//! [`unitriangular_degree`] exact for all group elements, not just generators.

use std::sync::Arc;

use indexmap::IndexMap;

use crate::algebra::{ideal_closure, ideal_power_chain, span_closure, trace_radical, AlgebraBasis, Ideal, Nilpotency};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{assemble_flag_basis, fixed_space, quotient_action, Flag, Subspace};
use crate::matrix::Matrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub matrix: Matrix,
    pub inverse: Matrix,
}

/// Images of a named generating set acting on row vectors of length `dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    field: FieldSpec,
    dim: usize,
    generators: IndexMap<String, Generator>,
}

impl Representation {
    pub fn new(field: FieldSpec, dim: usize, generators: Vec<(String, Matrix)>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("representation dimension must be positive".into()));
        }
        let mut map = IndexMap::with_capacity(generators.len());
        for (name, m) in generators {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "generator {name:?} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), m.field().to_string()));
            }
            let inverse = m.inverse().ok_or_else(|| Error::NotInvertible(name.clone()))?;
            if map.contains_key(&name) {
                return Err(Error::DuplicateGenerator(name));
            }
            map.insert(name, Generator { matrix: m, inverse });
        }
        Ok(Representation { field, dim, generators: map })
    }

    /// Generators named `g0, g1, …`.
    pub fn from_matrices(field: FieldSpec, dim: usize, mats: Vec<Matrix>) -> Result<Self> {
        Self::new(field, dim, mats.into_iter().enumerate().map(|(i, m)| (format!("g{i}"), m)).collect())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.generators.keys().map(String::as_str)
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.generators.values().map(|g| g.matrix.clone()).collect()
    }

    pub fn generators(&self) -> impl Iterator<Item = (&str, &Generator)> {
        self.generators.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.generators.get(name)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.get_index_of(name)
    }

    pub fn generator_at(&self, i: usize) -> (&str, &Generator) {
        let (k, v) = self.generators.get_index(i).expect("generator index in range");
        (k.as_str(), v)
    }

    pub fn identity(&self) -> Matrix {
        Matrix::identity(self.field, self.dim)
    }

    /// `P·g·P⁻¹` for every generator: the same group in another basis.
    pub fn change_basis(&self, p: &Matrix) -> Result<Representation> {
        let p_inv = p.inverse().ok_or_else(|| Error::NotInvertible("base change".into()))?;
        let gens = self.generators.iter().map(|(k, g)| (k.clone(), p.mul(&g.matrix).mul(&p_inv))).collect();
        Representation::new(self.field, self.dim, gens)
    }

    fn check_element(&self, g: &Matrix) -> Result<()> {
        if g.rows() != self.dim || g.cols() != self.dim || g.field() != self.field {
            return Err(Error::DimensionMismatch(format!(
                "element is {}x{} over {}, representation is {}x{} over {}",
                g.rows(),
                g.cols(),
                g.field(),
                self.dim,
                self.dim,
                self.field
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unipotency {
    /// Smallest `n` with `(g − I)^n = 0`.
    Index(usize),
    NotUnipotent,
}

/// Nilpotency index of `g − I`; by Cayley-Hamilton it is at most `dim`.
pub fn unipotency_index(rep: &Representation, g: &Matrix) -> Result<Unipotency> {
    rep.check_element(g)?;
    let d = g.minus_identity();
    let mut p = d.clone();
    for k in 1..=rep.dim() {
        if p.is_zero() {
            return Ok(Unipotency::Index(k));
        }
        p = p.mul(&d);
    }
    Ok(Unipotency::NotUnipotent)
}

/// A flag dropped by every generator, with the adapted basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitriCertificate {
    pub flag: Flag,
    /// Rows list `W_1`'s basis first; `B·g·B⁻¹` is lower unitriangular.
    pub base_change: Matrix,
    pub degree: usize,
}

impl UnitriCertificate {
    /// Re-checks that every generator drops every step.
    pub fn verify(&self, rep: &Representation) -> bool {
        rep.generators().all(|(_, g)| self.flag.drops(&g.matrix))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KolchinOutcome {
    Unitriangular(UnitriCertificate),
    /// The induced action on `V/residual` has no nonzero fixed vector.
    NotUnipotent {
        stage: usize,
        residual: Subspace,
    },
}

/// Kolchin flag by successive fixed spaces.
///
/// `W_s` is the preimage of the vectors of `V/W_{s−1}` fixed by every
/// generator; the fixed space of the generators equals the fixed space of
/// the group they generate.
pub fn kolchin_flag(rep: &Representation) -> Result<KolchinOutcome> {
    let field = rep.field();
    let n = rep.dim();
    let mats = rep.matrices();
    let mut w = Subspace::zero(field, n);
    let mut steps = vec![w.clone()];
    let mut stage = 0;
    while !w.is_full() {
        stage += 1;
        let induced = mats.iter().map(|g| quotient_action(g, &w)).collect::<Result<Vec<_>>>()?;
        let q = n - w.dim();
        let fixed = fixed_space(field, q, &induced)?;
        if fixed.is_zero() {
            return Ok(KolchinOutcome::NotUnipotent { stage, residual: w });
        }
        let lifted: Vec<Vec<Scalar>> = fixed.basis_vectors().iter().map(|x| w.lift_from_quotient(x)).collect();
        w = w.sum(&Subspace::span(field, n, &lifted))?;
        steps.push(w.clone());
    }
    let flag = Flag::new(steps)?;
    let base_change = assemble_flag_basis(&flag)?;
    let cert = UnitriCertificate { degree: flag.length(), flag, base_change };
    if !cert.verify(rep) {
        return Err(Error::InternalInconsistency("kolchin flag is not dropped by every generator".into()));
    }
    Ok(KolchinOutcome::Unitriangular(cert))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorIdentity {
    Verified,
    /// First generator tuple (lexicographic by generator order) whose product
    /// `(h_1 − I)···(h_n − I)` is nonzero.
    Witness {
        tuple: Vec<usize>,
        product: Matrix,
    },
}

impl GeneratorIdentity {
    pub fn is_verified(&self) -> bool {
        matches!(self, GeneratorIdentity::Verified)
    }
}

/// Checks `(h_1 − I)···(h_n − I) = 0` for all `|M|^n` generator tuples.
pub fn check_generator_identity(rep: &Representation, n: usize) -> GeneratorIdentity {
    assert!(n >= 1, "identity length must be positive");
    let diffs: Vec<Matrix> = rep.generators().map(|(_, g)| g.matrix.minus_identity()).collect();
    if diffs.is_empty() {
        return GeneratorIdentity::Verified;
    }
    fn walk(diffs: &[Matrix], n: usize, prefix: &mut Vec<usize>, acc: &Matrix) -> Option<(Vec<usize>, Matrix)> {
        if prefix.len() == n {
            return (!acc.is_zero()).then(|| (prefix.clone(), acc.clone()));
        }
        for (i, d) in diffs.iter().enumerate() {
            prefix.push(i);
            let next = if prefix.len() == 1 { d.clone() } else { acc.mul(d) };
            // a zero prefix can only produce zero products
            let found = if next.is_zero() { None } else { walk(diffs, n, prefix, &next) };
            prefix.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    let start = Matrix::identity(rep.field(), rep.dim());
    match walk(&diffs, n, &mut Vec::new(), &start) {
        None => GeneratorIdentity::Verified,
        Some((tuple, product)) => GeneratorIdentity::Witness { tuple, product },
    }
}

/// Names of the generators at the given indices.
pub fn tuple_names(rep: &Representation, tuple: &[usize]) -> Vec<String> {
    tuple.iter().map(|&i| rep.generator_at(i).0.to_string()).collect()
}

/// The series `0 = V_n ⊂ … ⊂ V_1 ⊂ V_0 = V` with
/// `V_k = span{ v·(h_1 − I)···(h_k − I) }`, returned ascending with repeated
/// zero steps removed. Every generator acts trivially on every factor.
pub fn invariant_series_from_identity(rep: &Representation, n: usize) -> Result<Flag> {
    if let GeneratorIdentity::Witness { tuple, .. } = check_generator_identity(rep, n) {
        return Err(Error::IdentityFails { length: n, witness: tuple_names(rep, &tuple) });
    }
    let field = rep.field();
    let dim = rep.dim();
    let diffs: Vec<Matrix> = rep.generators().map(|(_, g)| g.matrix.minus_identity()).collect();
    let mut descending = vec![Subspace::full(field, dim)];
    for _ in 0..n {
        let prev = descending.last().expect("nonempty");
        let mut next = Subspace::zero(field, dim);
        for d in &diffs {
            next = next.sum(&prev.image(d))?;
        }
        descending.push(next);
    }
    if !descending.last().expect("nonempty").is_zero() {
        return Err(Error::InternalInconsistency("V_n is not zero although the identity holds".into()));
    }
    let mut steps: Vec<Subspace> = Vec::with_capacity(descending.len());
    for s in descending.into_iter().rev() {
        if steps.last() != Some(&s) {
            steps.push(s);
        }
    }
    let flag = Flag::new(steps)?;
    for (_, g) in rep.generators() {
        for (i, pair) in flag.steps().windows(2).enumerate() {
            if let Err(v) = pair[1].check_invariant(&g.matrix) {
                return Err(Error::InternalInconsistency(format!(
                    "series step {} is not invariant: {}",
                    i + 1,
                    crate::matrix::format_vector(&v)
                )));
            }
        }
        if !flag.drops(&g.matrix) {
            return Err(Error::InternalInconsistency("generator acts nontrivially on a factor".into()));
        }
    }
    Ok(flag)
}

/// The enveloping algebra `A = span(G)` with its augmentation ideal and radical.
#[derive(Clone, Debug)]
pub struct EnvelopingData {
    pub algebra: Arc<AlgebraBasis>,
    /// Two-sided ideal generated by `g − I` over the generators.
    pub augmentation_ideal: Ideal,
    /// `None` when the trace criterion does not apply (`0 < p ≤ dim`).
    pub radical: Option<Ideal>,
}

impl EnvelopingData {
    pub fn new(rep: &Representation) -> Result<Self> {
        let algebra = Arc::new(span_closure(rep.field(), rep.dim(), &rep.matrices(), true)?);
        let seeds: Vec<Matrix> = rep.generators().map(|(_, g)| g.matrix.minus_identity()).collect();
        let augmentation_ideal = ideal_closure(&algebra, &seeds)?;
        let radical = match trace_radical(&algebra) {
            Ok(r) => Some(r),
            Err(Error::CharacteristicTooSmall { .. }) => None,
            Err(e) => return Err(e),
        };
        Ok(EnvelopingData { algebra, augmentation_ideal, radical })
    }

    pub fn radical(&self) -> Result<&Ideal> {
        self.radical.as_ref().ok_or(Error::CharacteristicTooSmall {
            characteristic: self.algebra.field().characteristic(),
            size: self.algebra.size(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitriangularDegree {
    /// Smallest `n` with `(augmentation ideal)^n = 0`.
    Degree(usize),
    NotUnitriangular,
}

impl UnitriangularDegree {
    pub fn is_finite(&self) -> bool {
        matches!(self, UnitriangularDegree::Degree(_))
    }
}

/// Exact unitriangularity class: the nilpotency index of the augmentation ideal.
pub fn unitriangular_degree(rep: &Representation) -> Result<UnitriangularDegree> {
    let env = EnvelopingData::new(rep)?;
    unitriangular_degree_of(&env)
}

pub fn unitriangular_degree_of(env: &EnvelopingData) -> Result<UnitriangularDegree> {
    Ok(match ideal_power_chain(&env.augmentation_ideal)?.nilpotency {
        Nilpotency::Index(m) => UnitriangularDegree::Degree(m),
        Nilpotency::NotNilpotent => UnitriangularDegree::NotUnitriangular,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftedBound {
    /// Nilpotency index `m` of the ideal lifted through.
    pub ideal_index: usize,
    /// Length `n` of the identity holding modulo the ideal.
    pub length: usize,
    /// `m·n`, verified: every generator product of this length vanishes.
    pub bound: usize,
}

/// If every length-`n` generator product lies in the nilpotent ideal `a1`
/// of index `m`, then every length-`m·n` product vanishes.
pub fn lift_identity_through_nilpotent_ideal(
    rep: &Representation,
    env: &EnvelopingData,
    a1: &Ideal,
    n: usize,
) -> Result<LiftedBound> {
    assert!(n >= 1, "identity length must be positive");
    if **a1.parent() != *env.algebra {
        return Err(Error::NotInAlgebra("ideal belongs to a different algebra".into()));
    }
    let m = match ideal_power_chain(a1)?.nilpotency {
        Nilpotency::Index(m) => m,
        Nilpotency::NotNilpotent => return Err(Error::IdealNotNilpotent),
    };
    let diffs: Vec<Matrix> = rep.generators().map(|(_, g)| g.matrix.minus_identity()).collect();
    if !diffs.is_empty() {
        let k = diffs.len();
        let mut tuple = vec![0usize; n];
        loop {
            let mut p = diffs[tuple[0]].clone();
            for &i in &tuple[1..] {
                p = p.mul(&diffs[i]);
            }
            if !a1.contains(&p) {
                return Err(Error::LiftHypothesis { witness: tuple_names(rep, &tuple) });
            }
            // odometer over [0, k)^n
            let Some(pos) = (0..n).rev().find(|&i| tuple[i] + 1 < k) else {
                break;
            };
            tuple[pos] += 1;
            for t in &mut tuple[pos + 1..] {
                *t = 0;
            }
        }
    }
    let bound = m * n;
    if !check_generator_identity(rep, bound).is_verified() {
        return Err(Error::InternalInconsistency(format!("lifted identity of length {bound} fails")));
    }
    Ok(LiftedBound { ideal_index: m, length: n, bound })
}

/// Matrix of `x ↦ x·g` on the algebra's coordinates, for `g ∈ A`.
pub fn regular_image(algebra: &AlgebraBasis, g: &Matrix) -> Option<Matrix> {
    let d = algebra.dim();
    let mut data = Vec::with_capacity(d * d);
    for b in algebra.basis() {
        data.extend(algebra.coordinates(&b.mul(g))?);
    }
    Some(Matrix::from_flat(algebra.field(), d, d, data))
}

/// The group acting on its enveloping algebra by right multiplication.
pub fn regular_representation(rep: &Representation, env: &EnvelopingData) -> Result<Representation> {
    let d = env.algebra.dim();
    let gens = rep
        .generators()
        .map(|(name, g)| {
            regular_image(&env.algebra, &g.matrix)
                .map(|m| (name.to_string(), m))
                .ok_or_else(|| Error::InternalInconsistency(format!("generator {name} outside its own span")))
        })
        .collect::<Result<Vec<_>>>()?;
    Representation::new(rep.field(), d, gens)
}

/// The unipotent radical `G ∩ (I + J(A))`.
#[derive(Clone, Debug)]
pub struct UnipotentRadical {
    pub radical: Ideal,
    /// Nilpotency index of `J(A)`; every radical element satisfies the
    /// unitriangularity identity of this length.
    pub nilpotency_index: usize,
}

impl UnipotentRadical {
    /// Whether a group element belongs to the radical, i.e. `g − I ∈ J(A)`.
    pub fn contains(&self, g: &Matrix) -> bool {
        self.radical.contains(&g.minus_identity())
    }

    /// Members of an explicitly enumerated group.
    pub fn members<'a>(&self, elements: impl IntoIterator<Item = &'a Matrix>) -> Vec<Matrix> {
        elements.into_iter().filter(|g| self.contains(g)).cloned().collect()
    }
}

/// Computes the radical ideal and checks that it is stable under
/// conjugation by every generator, which makes the membership set normal.
pub fn unipotent_radical(rep: &Representation, env: &EnvelopingData) -> Result<UnipotentRadical> {
    let radical = env.radical()?.clone();
    let nilpotency_index = match ideal_power_chain(&radical)?.nilpotency {
        Nilpotency::Index(m) => m,
        Nilpotency::NotNilpotent => return Err(Error::InternalInconsistency("radical is not nilpotent".into())),
    };
    for x in radical.matrices() {
        for (name, g) in rep.generators() {
            if !radical.contains(&g.inverse.mul(&x).mul(&g.matrix)) {
                return Err(Error::InternalInconsistency(format!("radical not stable under conjugation by {name}")));
            }
        }
    }
    Ok(UnipotentRadical { radical, nilpotency_index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::examples::strictly_upper_coordinates;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn unit(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(Q, n, i, j)
    }

    fn heisenberg() -> Representation {
        Representation::new(
            Q,
            3,
            vec![("a".into(), unit(3, 0, 1).plus_identity()), ("b".into(), unit(3, 1, 2).plus_identity())],
        )
        .unwrap()
    }

    fn single(m: Matrix) -> Representation {
        let n = m.rows();
        Representation::new(m.field(), n, vec![("g".into(), m)]).unwrap()
    }

    fn span(n: usize, rows: &[&[i64]]) -> Subspace {
        let vs: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| Q.from_i64(x)).collect()).collect();
        Subspace::span(Q, n, &vs)
    }

    #[test]
    fn construction_errors() {
        let sing = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        assert!(matches!(Representation::new(Q, 2, vec![("s".into(), sing)]), Err(Error::NotInvertible(_))));
        let id = Matrix::identity(Q, 2);
        assert!(matches!(
            Representation::new(Q, 2, vec![("a".into(), id.clone()), ("a".into(), id.clone())]),
            Err(Error::DuplicateGenerator(_))
        ));
        assert!(Representation::new(Q, 3, vec![("a".into(), id)]).is_err());
    }

    #[test]
    fn unipotency_examples() {
        let rep = heisenberg();
        assert_eq!(unipotency_index(&rep, &rep.identity()).unwrap(), Unipotency::Index(1));
        let two = single(unit(2, 0, 1).plus_identity());
        assert_eq!(unipotency_index(&two, &unit(2, 0, 1).plus_identity()).unwrap(), Unipotency::Index(2));
        assert_eq!(unipotency_index(&two, &Matrix::diagonal(Q, &[2, 1])).unwrap(), Unipotency::NotUnipotent);
        assert!(unipotency_index(&two, &Matrix::identity(Q, 3)).is_err());
    }

    #[test]
    fn kolchin_examples() {
        let trivial = single(Matrix::identity(Q, 3));
        match kolchin_flag(&trivial).unwrap() {
            KolchinOutcome::Unitriangular(c) => {
                assert_eq!(c.degree, 1);
                assert_eq!(c.flag.steps().len(), 2);
            }
            other => panic!("{other:?}"),
        }

        match kolchin_flag(&heisenberg()).unwrap() {
            KolchinOutcome::Unitriangular(c) => {
                assert_eq!(c.degree, 3);
                assert_eq!(c.flag.steps()[1], span(3, &[&[0, 0, 1]]));
                assert_eq!(c.flag.steps()[2], span(3, &[&[0, 1, 0], &[0, 0, 1]]));
                assert!(c.verify(&heisenberg()));
            }
            other => panic!("{other:?}"),
        }

        match kolchin_flag(&single(Matrix::diagonal(Q, &[2, 1]))).unwrap() {
            KolchinOutcome::NotUnipotent { stage, residual } => {
                assert_eq!(stage, 2);
                assert_eq!(residual, span(2, &[&[0, 1]]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn base_change_triangularizes() {
        let rep = heisenberg();
        let KolchinOutcome::Unitriangular(c) = kolchin_flag(&rep).unwrap() else { panic!() };
        let b_inv = c.base_change.inverse().unwrap();
        for m in rep.matrices() {
            let t = c.base_change.mul(&m).mul(&b_inv);
            for i in 0..3 {
                assert!(t.get(i, i).is_one());
                for j in i + 1..3 {
                    assert!(t.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn generator_identity_examples() {
        assert!(check_generator_identity(&single(Matrix::identity(Q, 2)), 1).is_verified());
        assert!(check_generator_identity(&single(unit(2, 0, 1).plus_identity()), 2).is_verified());
        match check_generator_identity(&heisenberg(), 2) {
            GeneratorIdentity::Witness { tuple, product } => {
                assert_eq!(tuple, vec![0, 1]);
                assert_eq!(product, unit(3, 0, 2));
            }
            GeneratorIdentity::Verified => panic!("length 2 must fail"),
        }
        assert!(check_generator_identity(&heisenberg(), 3).is_verified());
    }

    #[test]
    fn invariant_series_examples() {
        let trivial = single(Matrix::identity(Q, 2));
        assert_eq!(invariant_series_from_identity(&trivial, 1).unwrap().length(), 1);
        // over-long identities collapse repeated zero steps
        assert_eq!(invariant_series_from_identity(&trivial, 3).unwrap().length(), 1);

        let f = invariant_series_from_identity(&single(unit(2, 0, 1).plus_identity()), 2).unwrap();
        assert_eq!(f.steps()[1], span(2, &[&[0, 1]]));

        let h = heisenberg();
        let f = invariant_series_from_identity(&h, 3).unwrap();
        let KolchinOutcome::Unitriangular(c) = kolchin_flag(&h).unwrap() else { panic!() };
        assert_eq!(f, c.flag);

        assert!(matches!(invariant_series_from_identity(&h, 2), Err(Error::IdentityFails { length: 2, .. })));
    }

    #[test]
    fn unitriangular_degree_examples() {
        assert_eq!(unitriangular_degree(&single(Matrix::identity(Q, 2))).unwrap(), UnitriangularDegree::Degree(1));
        assert_eq!(unitriangular_degree(&heisenberg()).unwrap(), UnitriangularDegree::Degree(3));
        assert_eq!(
            unitriangular_degree(&single(Matrix::diagonal(Q, &[2, 1]))).unwrap(),
            UnitriangularDegree::NotUnitriangular
        );
    }

    #[test]
    fn lift_examples() {
        let two = single(unit(2, 0, 1).plus_identity());
        let env = EnvelopingData::new(&two).unwrap();
        let zero = Ideal::zero(env.algebra.clone());
        assert_eq!(lift_identity_through_nilpotent_ideal(&two, &env, &zero, 2).unwrap().bound, 2);
        assert!(matches!(
            lift_identity_through_nilpotent_ideal(&two, &env, &zero, 1),
            Err(Error::LiftHypothesis { .. })
        ));
        let e12 = ideal_closure(&env.algebra, &[unit(2, 0, 1)]).unwrap();
        let lb = lift_identity_through_nilpotent_ideal(&two, &env, &e12, 1).unwrap();
        assert_eq!((lb.ideal_index, lb.bound), (2, 2));

        let h = heisenberg();
        let env = EnvelopingData::new(&h).unwrap();
        let strict = ideal_closure(&env.algebra, &[unit(3, 0, 1), unit(3, 1, 2)]).unwrap();
        let lb = lift_identity_through_nilpotent_ideal(&h, &env, &strict, 1).unwrap();
        assert_eq!((lb.ideal_index, lb.bound), (3, 3));
        assert_eq!(unitriangular_degree(&h).unwrap(), UnitriangularDegree::Degree(3));

        let whole = Ideal::whole(env.algebra.clone());
        assert!(matches!(lift_identity_through_nilpotent_ideal(&h, &env, &whole, 1), Err(Error::IdealNotNilpotent)));
    }

    #[test]
    fn regular_representation_examples() {
        let trivial = single(Matrix::identity(Q, 2));
        let env = EnvelopingData::new(&trivial).unwrap();
        let reg = regular_representation(&trivial, &env).unwrap();
        assert_eq!(reg.dim(), 1);
        assert!(reg.matrices()[0].is_identity());

        let two = single(unit(2, 0, 1).plus_identity());
        let env = EnvelopingData::new(&two).unwrap();
        let reg = regular_representation(&two, &env).unwrap();
        assert_eq!(reg.dim(), 2);
        // basis-dependent matrix; check it is a single Jordan block
        let n = reg.matrices()[0].minus_identity();
        assert!(!n.is_zero());
        assert!(n.mul(&n).is_zero());

        let h = heisenberg();
        let env = EnvelopingData::new(&h).unwrap();
        assert_eq!(regular_representation(&h, &env).unwrap().dim(), 4);
    }

    #[test]
    fn unipotent_radical_examples() {
        let h = heisenberg();
        let env = EnvelopingData::new(&h).unwrap();
        let rad = unipotent_radical(&h, &env).unwrap();
        for m in h.matrices() {
            assert!(rad.contains(&m));
        }

        let rep = Representation::new(
            Q,
            2,
            vec![("s".into(), Matrix::diagonal(Q, &[-1, 1])), ("u".into(), unit(2, 0, 1).plus_identity())],
        )
        .unwrap();
        let env = EnvelopingData::new(&rep).unwrap();
        let rad = unipotent_radical(&rep, &env).unwrap();
        assert!(rad.contains(&unit(2, 0, 1).plus_identity()));
        assert!(!rad.contains(&Matrix::diagonal(Q, &[-1, 1])));
        assert_eq!(rad.radical.dim(), 1);
        assert!(rad.radical.contains(&unit(2, 0, 1)));
    }

    #[test]
    fn strictly_upper_ideal_has_index_n() {
        let ut = Arc::new(crate::algebra::examples::upper_triangular(Q, 4));
        let strict = Ideal::new(ut, strictly_upper_coordinates(Q, 4)).unwrap();
        assert_eq!(ideal_power_chain(&strict).unwrap().nilpotency, Nilpotency::Index(4));
    }
}
