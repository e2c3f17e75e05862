//! Representation files.
//!
//! ```json
//! {
//!   "field": "Q",
//!   "dim": 2,
//!   "generators": {
//!     "u": [
//!       ["1", "1/2"],
//!       ["0", 1]
//!     ]
//!   }
//! }
//! ```
//!
//! `field` is `"Q"` or `{"Fp": p}`. Scalars are strings `"n"` or `"n/d"`, or
//! plain integers. Generator order is file order.

use std::fmt;
use std::path::Path;

use indexmap::IndexMap;
use pirep_core::field::parse_fraction;
use pirep_core::rep::Representation;
use pirep_core::{FieldSpec, Matrix};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::{Deserialize, Serialize, Serializer};

#[derive(Debug)]
pub enum LoadError {
    Io(std::io::Error),
    /// Syntax or scalar error with 1-based position.
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Invalid(pirep_core::Error),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io(e) => write!(f, "cannot read file: {e}"),
            LoadError::Parse { line, column, message } => write!(f, "line {line}, column {column}: {message}"),
            LoadError::Invalid(e) => write!(f, "invalid representation: {e}"),
        }
    }
}

impl std::error::Error for LoadError {}

/// A scalar as written: validated fraction syntax, reduced into a field later.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarText(pub String);

impl<'de> Deserialize<'de> for ScalarText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ScalarText;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a scalar string like \"-7/2\" or an integer")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<ScalarText, E> {
                parse_fraction(s).map_err(|e| E::custom(e.to_string()))?;
                Ok(ScalarText(s.trim().to_string()))
            }
            fn visit_i64<E: de::Error>(self, n: i64) -> Result<ScalarText, E> {
                Ok(ScalarText(n.to_string()))
            }
            fn visit_u64<E: de::Error>(self, n: u64) -> Result<ScalarText, E> {
                Ok(ScalarText(n.to_string()))
            }
            fn visit_f64<E: de::Error>(self, _: f64) -> Result<ScalarText, E> {
                Err(E::custom("floating-point scalars are not exact; write \"n/d\" (large integers must be quoted)"))
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for ScalarText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldText(pub FieldSpec);

impl<'de> Deserialize<'de> for FieldText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = FieldText;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "\"Q\" or {{\"Fp\": p}}")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<FieldText, E> {
                match s {
                    "Q" => Ok(FieldText(FieldSpec::Rationals)),
                    other => Err(E::custom(format!("unknown field {other:?}; expected \"Q\" or {{\"Fp\": p}}"))),
                }
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<FieldText, A::Error> {
                let mut p = None;
                while let Some(key) = map.next_key::<String>()? {
                    if key != "Fp" || p.is_some() {
                        return Err(de::Error::custom(format!("unexpected key {key:?} in field")));
                    }
                    p = Some(map.next_value::<u64>()?);
                }
                let p = p.ok_or_else(|| de::Error::custom("missing \"Fp\""))?;
                FieldSpec::prime(p).map(FieldText).map_err(|e| de::Error::custom(e.to_string()))
            }
        }
        d.deserialize_any(V)
    }
}

impl Serialize for FieldText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            FieldSpec::Rationals => s.serialize_str("Q"),
            FieldSpec::PrimeField(p) => {
                let mut m = IndexMap::new();
                m.insert("Fp", p);
                m.serialize(s)
            }
        }
    }
}

pub type MatrixText = Vec<Vec<ScalarText>>;

/// Generator map that rejects repeated names.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Generators(pub IndexMap<String, MatrixText>);

impl<'de> Deserialize<'de> for Generators {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Generators;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a map from generator names to matrices")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Generators, A::Error> {
                let mut out = IndexMap::new();
                while let Some(name) = map.next_key::<String>()? {
                    if out.contains_key(&name) {
                        return Err(de::Error::custom(format!("duplicate generator {name:?}")));
                    }
                    let m: MatrixText = map.next_value()?;
                    out.insert(name, m);
                }
                Ok(Generators(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepFile {
    pub field: FieldText,
    pub dim: usize,
    pub generators: Generators,
}

pub fn matrix_text(m: &Matrix) -> MatrixText {
    m.row_vecs().iter().map(|r| r.iter().map(|s| ScalarText(s.to_string())).collect()).collect()
}

pub fn matrix_from_text(field: FieldSpec, rows: &MatrixText) -> pirep_core::Result<Matrix> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| field.parse_scalar(&s.0)).collect::<pirep_core::Result<Vec<_>>>())
        .collect::<pirep_core::Result<Vec<_>>>()?;
    Matrix::from_rows(field, parsed)
}

impl RepFile {
    pub fn from_representation(rep: &Representation) -> Self {
        RepFile {
            field: FieldText(rep.field()),
            dim: rep.dim(),
            generators: Generators(rep.generators().map(|(n, g)| (n.to_string(), matrix_text(&g.matrix))).collect()),
        }
    }

    pub fn to_representation(&self) -> pirep_core::Result<Representation> {
        let field = self.field.0;
        let gens = self
            .generators
            .0
            .iter()
            .map(|(n, m)| Ok((n.clone(), matrix_from_text(field, m)?)))
            .collect::<pirep_core::Result<Vec<_>>>()?;
        Representation::new(field, self.dim, gens)
    }
}

pub fn parse_rep_file(text: &str) -> Result<RepFile, LoadError> {
    serde_json::from_str(text).map_err(|e| {
        // the position is reported separately
        let mut message = e.to_string();
        if let Some(at) = message.rfind(" at line ") {
            message.truncate(at);
        }
        LoadError::Parse { line: e.line(), column: e.column(), message }
    })
}

pub fn parse_rep(text: &str) -> Result<Representation, LoadError> {
    parse_rep_file(text)?.to_representation().map_err(LoadError::Invalid)
}

pub fn load_rep(path: &Path) -> Result<Representation, LoadError> {
    let text = std::fs::read_to_string(path).map_err(LoadError::Io)?;
    parse_rep(&text)
}

fn quoted(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn render_matrix(out: &mut String, m: &MatrixText, indent: &str) {
    if m.is_empty() {
        out.push_str("[]");
        return;
    }
    out.push_str("[\n");
    for (i, row) in m.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|s| quoted(&s.0)).collect();
        out.push_str(&format!("{indent}  [{}]", cells.join(", ")));
        out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
    }
    out.push_str(indent);
    out.push(']');
}

/// Canonical text: one matrix row per line, scalars as strings.
pub fn render_rep_file(f: &RepFile) -> String {
    let field = serde_json::to_string(&f.field).expect("field serializes");
    let mut out = format!("{{\n  \"field\": {field},\n  \"dim\": {},\n  \"generators\": {{", f.dim);
    if f.generators.0.is_empty() {
        out.push_str("}\n}\n");
        return out;
    }
    out.push('\n');
    let n = f.generators.0.len();
    for (i, (name, m)) in f.generators.0.iter().enumerate() {
        out.push_str(&format!("    {}: ", quoted(name)));
        render_matrix(&mut out, m, "    ");
        out.push_str(if i + 1 < n { ",\n" } else { "\n" });
    }
    out.push_str("  }\n}\n");
    out
}

pub fn render_rep(rep: &Representation) -> String {
    render_rep_file(&RepFile::from_representation(rep))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEIS: &str = r#"{
  "field": "Q",
  "dim": 3,
  "generators": {
    "a": [["1", "1", "0"], ["0", "1", "0"], ["0", "0", "1"]],
    "b": [[1, 0, 0], [0, 1, 1], [0, 0, 1]]
  }
}"#;

    #[test]
    fn parses_strings_and_integers() {
        let rep = parse_rep(HEIS).unwrap();
        assert_eq!(rep.dim(), 3);
        assert_eq!(rep.names().collect::<Vec<_>>(), vec!["a", "b"]);
        assert_eq!(rep.generator("b").unwrap().matrix, Matrix::unit(FieldSpec::Rationals, 3, 1, 2).plus_identity());
    }

    #[test]
    fn zero_denominator_reports_position() {
        let text = "{\n  \"field\": \"Q\",\n  \"dim\": 1,\n  \"generators\": {\"g\": [[\"1/0\"]]}\n}";
        match parse_rep(text) {
            Err(LoadError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn prime_field_reduces_scalars() {
        let text = r#"{"field": {"Fp": 3}, "dim": 1, "generators": {"g": [["5"]]}}"#;
        let rep = parse_rep(text).unwrap();
        assert_eq!(rep.generator("g").unwrap().matrix.get(0, 0).to_string(), "2");
        let bad = r#"{"field": {"Fp": 4}, "dim": 1, "generators": {}}"#;
        assert!(matches!(parse_rep(bad), Err(LoadError::Parse { .. })));
    }

    #[test]
    fn rejects_duplicates_floats_and_singular() {
        let dup = r#"{"field": "Q", "dim": 1, "generators": {"g": [["1"]], "g": [["2"]]}}"#;
        assert!(matches!(parse_rep(dup), Err(LoadError::Parse { .. })));
        let float = r#"{"field": "Q", "dim": 1, "generators": {"g": [[0.5]]}}"#;
        assert!(matches!(parse_rep(float), Err(LoadError::Parse { .. })));
        let singular = r#"{"field": "Q", "dim": 1, "generators": {"g": [["0"]]}}"#;
        assert!(matches!(parse_rep(singular), Err(LoadError::Invalid(_))));
        let shape = r#"{"field": "Q", "dim": 2, "generators": {"g": [["1"]]}}"#;
        assert!(matches!(parse_rep(shape), Err(LoadError::Invalid(_))));
    }

    #[test]
    fn canonical_text_round_trips() {
        let rep = parse_rep(HEIS).unwrap();
        let text = render_rep(&rep);
        assert_eq!(parse_rep(&text).unwrap(), rep);
        assert_eq!(render_rep(&parse_rep(&text).unwrap()), text);
        assert!(text.contains("[\"1\", \"1\", \"0\"]"));
    }
}
