use pirep_cli::repfile::{parse_rep, render_rep};
use pirep_core::rep::Representation;
use pirep_core::{FieldSpec, Matrix};
use proptest::prelude::*;

fn unitriangular(field: FieldSpec, n: usize, entries: &[(i64, i64)]) -> Matrix {
    let mut m = Matrix::identity(field, n);
    let mut it = entries.iter().cycle();
    for i in 0..n {
        for j in i + 1..n {
            let (num, den) = *it.next().unwrap();
            let s = field.from_fraction(&num.into(), &den.into()).unwrap_or_else(|| field.from_i64(num));
            m.set(i, j, s);
        }
    }
    m
}

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![Just(FieldSpec::Rationals), Just(FieldSpec::PrimeField(5)), Just(FieldSpec::PrimeField(101))]
}

proptest! {
    #[test]
    fn render_then_parse_is_identity(
        field in field_strategy(),
        n in 1usize..5,
        gens in 1usize..4,
        entries in prop::collection::vec((-30i64..30, 1i64..12), 1..12),
    ) {
        let mats: Vec<Matrix> = (0..gens)
            .map(|g| unitriangular(field, n, &entries[g % entries.len()..]))
            .collect();
        let rep = Representation::from_matrices(field, n, mats).unwrap();
        let text = render_rep(&rep);
        let back = parse_rep(&text).unwrap();
        prop_assert_eq!(back.field(), rep.field());
        prop_assert_eq!(back.names().collect::<Vec<_>>(), rep.names().collect::<Vec<_>>());
        prop_assert_eq!(back.matrices(), rep.matrices());
        prop_assert_eq!(render_rep(&back), text);
    }
}
