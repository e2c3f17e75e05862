use pirep_core::identity::{standard_identity_eval, standard_identity_expand};
use pirep_core::linalg::rref_naive;
use pirep_core::rep::{
    kolchin_flag, unitriangular_degree, EnvelopingData, KolchinOutcome, Representation, UnitriangularDegree,
};
use pirep_core::words::{evaluate_word, FiniteGroup, Word};
use pirep_core::{kernel, quotient_action, rref, FieldSpec, Matrix, Subspace};
use proptest::prelude::*;

const Q: FieldSpec = FieldSpec::Rationals;

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(Q),
        Just(FieldSpec::PrimeField(2)),
        Just(FieldSpec::PrimeField(7)),
        Just(FieldSpec::PrimeField(101))
    ]
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..5, rows * cols)
}

fn build(field: FieldSpec, rows: usize, cols: usize, data: &[i64]) -> Matrix {
    let data = data.iter().map(|&x| field.from_i64(x)).collect();
    Matrix::from_flat(field, rows, cols, data)
}

fn sized_matrix() -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| (Just(r), Just(c), int_matrix(r, c)))
}

/// Upper unitriangular: `e_k, …, e_{n-1}` span an invariant subspace for every k.
fn upper_unitri(field: FieldSpec, n: usize, data: &[i64]) -> Matrix {
    let mut m = Matrix::identity(field, n);
    let mut it = data.iter();
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, field.from_i64(*it.next().unwrap_or(&0)));
        }
    }
    m
}

/// An invertible integer matrix: lower unitriangular times upper unitriangular.
fn invertible(field: FieldSpec, n: usize, data: &[i64]) -> Matrix {
    let u = upper_unitri(field, n, data);
    u.transpose().mul(&upper_unitri(field, n, &data[data.len() / 2..]))
}

fn unitri_rep(field: FieldSpec, n: usize, gens: usize, data: &[i64]) -> Representation {
    let step = data.len() / gens.max(1);
    let mats = (0..gens).map(|g| upper_unitri(field, n, &data[g * step..])).collect();
    Representation::from_matrices(field, n, mats).unwrap()
}

/// Block upper triangular with a random invertible diagonal entry: often not unipotent.
fn mixed_rep(field: FieldSpec, n: usize, data: &[i64], scale: i64) -> Representation {
    let mut a = upper_unitri(field, n, data);
    a.set(0, 0, field.from_i64(scale));
    let b = upper_unitri(field, n, &data[1..]).transpose();
    Representation::from_matrices(field, n, vec![a, b]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent_and_rank_nullity_holds(f in field(), (r, c, data) in sized_matrix()) {
        let m = build(f, r, c, &data);
        let e = rref(&m);
        prop_assert_eq!(rref(&e.reduced), e.clone());
        prop_assert_eq!(e.rank + kernel(&m).dim(), r);
        prop_assert_eq!(e.rank, e.pivots.len());
        for v in kernel(&m).basis_vectors() {
            prop_assert!(m.vec_mul(&v).iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn fraction_free_rref_matches_naive(( r, c, data) in sized_matrix()) {
        let m = build(Q, r, c, &data);
        prop_assert_eq!(rref(&m), rref_naive(&m));
    }

    #[test]
    fn rank_over_q_bounds_rank_mod_p((r, c, data) in sized_matrix(), p in prop::sample::select(vec![2u64, 3, 5, 101])) {
        let over_q = rref(&build(Q, r, c, &data)).rank;
        let over_p = rref(&build(FieldSpec::PrimeField(p), r, c, &data)).rank;
        prop_assert!(over_q >= over_p);
    }

    #[test]
    fn subspace_canonical_form_ignores_spanning_set((r, c, data) in sized_matrix(), f in field(), mix in int_matrix(5, 5)) {
        let m = build(f, r, c, &data);
        let p = invertible(f, r, &mix);
        let a = Subspace::row_space(&m);
        let b = Subspace::row_space(&p.mul(&m));
        prop_assert_eq!(a.basis(), b.basis());
    }

    #[test]
    fn quotient_action_is_multiplicative(
        f in field(), n in 2usize..6, k in 1usize..5, a in int_matrix(4, 4), b in int_matrix(4, 4),
    ) {
        let k = k.min(n - 1);
        let g = upper_unitri(f, n, &a);
        let h = upper_unitri(f, n, &b);
        let tail: Vec<Vec<_>> = (k..n).map(|i| Matrix::identity(f, n).row(i).to_vec()).collect();
        let w = Subspace::span(f, n, &tail);
        let qg = quotient_action(&g, &w).unwrap();
        let qh = quotient_action(&h, &w).unwrap();
        prop_assert_eq!(quotient_action(&g.mul(&h), &w).unwrap(), qg.mul(&qh));
    }

    #[test]
    fn standard_polynomial_alternates(f in field(), k in 2usize..5, data in prop::collection::vec(int_matrix(2, 2), 4), i in 0usize..4, j in 0usize..4) {
        let args: Vec<Matrix> = data[..k].iter().map(|d| build(f, 2, 2, d)).collect();
        let (i, j) = (i % k, j % k);
        let value = standard_identity_eval(&args);
        let refs: Vec<&Matrix> = args.iter().collect();
        prop_assert_eq!(&standard_identity_expand(&refs), &value);
        let mut swapped = args.clone();
        swapped.swap(i, j);
        let expected = if i == j { value.clone() } else { value.neg() };
        prop_assert_eq!(standard_identity_eval(&swapped), expected);
        if i != j {
            let mut repeated = args.clone();
            repeated[j] = repeated[i].clone();
            prop_assert!(standard_identity_eval(&repeated).is_zero());
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in field(), data in int_matrix(6, 1), u in "[abAB]{0,6}", v in "[abAB]{0,6}") {
        let rep = unitri_rep(f, 3, 2, &data);
        let letters = |s: &str| s.chars().map(|ch| match ch {
            'a' => "g0".to_string(),
            'b' => "g1".to_string(),
            'A' => "g0^-1".to_string(),
            _ => "g1^-1".to_string(),
        }).collect::<Vec<_>>().join(" ");
        let wu = Word::parse(&letters(&u)).unwrap();
        let wv = Word::parse(&letters(&v)).unwrap();
        let eu = evaluate_word(&rep, &wu).unwrap();
        let ev = evaluate_word(&rep, &wv).unwrap();
        prop_assert_eq!(evaluate_word(&rep, &wu.concat(&wv)).unwrap(), eu.mul(&ev));
        prop_assert_eq!(evaluate_word(&rep, &wu.inverse()).unwrap(), eu.inverse().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn invariants_survive_base_change(
        f in prop_oneof![Just(Q), Just(FieldSpec::PrimeField(101))],
        n in 2usize..5,
        data in int_matrix(4, 4),
        mix in int_matrix(4, 4),
        scale in prop::sample::select(vec![1i64, 2, 3]),
    ) {
        let rep = mixed_rep(f, n, &data, scale);
        let p = invertible(f, n, &mix);
        let moved = rep.change_basis(&p).unwrap();

        let dims = |r: &Representation| {
            let env = EnvelopingData::new(r).unwrap();
            (env.algebra.dim(), env.radical().unwrap().dim(), env.augmentation_ideal.dim())
        };
        prop_assert_eq!(dims(&rep), dims(&moved));

        let degree = unitriangular_degree(&rep).unwrap();
        prop_assert_eq!(degree, unitriangular_degree(&moved).unwrap());
        let kolchin = |r: &Representation| match kolchin_flag(r).unwrap() {
            KolchinOutcome::Unitriangular(cert) => {
                prop_assert!(cert.verify(r));
                Ok(Some(cert.degree))
            }
            KolchinOutcome::NotUnipotent { .. } => Ok(None),
        };
        let k = kolchin(&rep)?;
        prop_assert_eq!(k, kolchin(&moved)?);
        match degree {
            UnitriangularDegree::Degree(d) => prop_assert_eq!(k, Some(d)),
            UnitriangularDegree::NotUnitriangular => prop_assert_eq!(k, None),
        }
    }

    #[test]
    fn subgroup_orders_divide_group_order(p in prop::sample::select(vec![2u64, 3]), data in int_matrix(3, 2), twist in any::<bool>()) {
        let f = FieldSpec::PrimeField(p);
        let mut mats = vec![upper_unitri(f, 3, &data), upper_unitri(f, 3, &data[3..])];
        if twist {
            mats.push(Matrix::diagonal(f, &[-1, 1, 1]));
        }
        let rep = Representation::from_matrices(f, 3, mats).unwrap();
        let g = FiniteGroup::new(&rep, 500).unwrap();
        for h in g.all_subgroups() {
            prop_assert_eq!(g.order() % h.len(), 0);
        }
    }
}
