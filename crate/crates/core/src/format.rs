//! JSON forms of complexes, move scripts and chain maps.
//!
//! Output is canonical: object keys sorted, differential entries in basis
//! order, ring elements in their display form. Parsing a serialized value
//! gives back an equal value.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::chain::{BasedComplex, ChainError, ChainMap, Generator};
use crate::group_algebra::{AlgebraError, GroupSpec, RingElement, TrivialUnit};
use crate::moves::{Move, MoveScript};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("JSON error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{field}: cannot parse {text:?} at byte {position}: {message}")]
    Ring {
        field: String,
        text: String,
        position: usize,
        message: String,
    },
    #[error("{field}: {error}")]
    Algebra { field: String, error: AlgebraError },
    #[error(transparent)]
    Chain(#[from] ChainError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let (line, column) = (e.line(), e.column());
        let full = e.to_string();
        let suffix = format!(" at line {line} column {column}");
        FormatError::Json {
            line,
            column,
            message: full.strip_suffix(&suffix).unwrap_or(&full).to_string(),
        }
    }
}

fn ring(group: &GroupSpec, text: &str, field: impl FnOnce() -> String) -> Result<RingElement, FormatError> {
    RingElement::parse(group, text).map_err(|e| lift_algebra(e, field()))
}

fn unit(group: &GroupSpec, text: &str, field: impl FnOnce() -> String) -> Result<TrivialUnit, FormatError> {
    TrivialUnit::parse(group, text).map_err(|e| lift_algebra(e, field()))
}

fn lift_algebra(e: AlgebraError, field: String) -> FormatError {
    match e {
        AlgebraError::Parse {
            text,
            position,
            message,
        } => FormatError::Ring {
            field,
            text,
            position,
            message,
        },
        error => FormatError::Algebra { field, error },
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorJson {
    label: String,
    degree: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    filtration: Option<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryJson {
    from: String,
    to: String,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    group: GroupSpec,
    generators: Vec<GeneratorJson>,
    d: Vec<EntryJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
enum MoveJson {
    Expand {
        a: String,
        b: String,
        degree: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        levels: Option<(i64, i64)>,
    },
    Collapse {
        a: String,
        b: String,
    },
    Slide {
        target: String,
        source: String,
        c: String,
    },
    BaseChange {
        label: String,
        u: String,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScriptJson {
    initial: ComplexJson,
    moves: Vec<MoveJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapJson {
    source: ComplexJson,
    target: ComplexJson,
    f: Vec<EntryJson>,
}

fn entries_json(m: &crate::group_algebra::RingMatrix) -> Vec<EntryJson> {
    m.entries()
        .map(|((i, j), v)| EntryJson {
            from: m.rows()[i].clone(),
            to: m.cols()[j].clone(),
            coeff: v.to_string(),
        })
        .collect()
}

fn complex_dto(c: &BasedComplex) -> ComplexJson {
    ComplexJson {
        group: c.group().clone(),
        generators: c
            .generators()
            .iter()
            .map(|g| GeneratorJson {
                label: g.label.clone(),
                degree: g.degree,
                filtration: g.filtration,
            })
            .collect(),
        d: entries_json(c.differential()),
    }
}

fn parse_entries(group: &GroupSpec, entries: &[EntryJson], field: &str) -> Result<Vec<RingElement>, FormatError> {
    entries
        .iter()
        .enumerate()
        .map(|(i, e)| ring(group, &e.coeff, || format!("{field}[{i}].coeff")))
        .collect()
}

fn complex_from_dto(dto: ComplexJson, field: &str) -> Result<BasedComplex, FormatError> {
    let coeffs = parse_entries(&dto.group, &dto.d, &format!("{field}d"))?;
    let gens = dto
        .generators
        .into_iter()
        .map(|g| Generator {
            label: g.label,
            degree: g.degree,
            filtration: g.filtration,
        })
        .collect();
    Ok(BasedComplex::new(
        &dto.group,
        gens,
        dto.d.iter().zip(coeffs).map(|(e, v)| (e.from.as_str(), e.to.as_str(), v)),
    )?)
}

fn move_dto(m: &Move) -> MoveJson {
    match m {
        Move::Expand { a, b, degree, levels } => MoveJson::Expand {
            a: a.clone(),
            b: b.clone(),
            degree: *degree,
            levels: *levels,
        },
        Move::Collapse { a, b } => MoveJson::Collapse {
            a: a.clone(),
            b: b.clone(),
        },
        Move::Slide { target, source, c } => MoveJson::Slide {
            target: target.clone(),
            source: source.clone(),
            c: c.to_string(),
        },
        Move::BaseChange { label, u } => MoveJson::BaseChange {
            label: label.clone(),
            u: u.to_string(),
        },
    }
}

fn move_from_dto(group: &GroupSpec, m: MoveJson, index: usize) -> Result<Move, FormatError> {
    Ok(match m {
        MoveJson::Expand { a, b, degree, levels } => Move::Expand { a, b, degree, levels },
        MoveJson::Collapse { a, b } => Move::Collapse { a, b },
        MoveJson::Slide { target, source, c } => Move::Slide {
            c: ring(group, &c, || format!("moves[{index}].c"))?,
            target,
            source,
        },
        MoveJson::BaseChange { label, u } => Move::BaseChange {
            u: unit(group, &u, || format!("moves[{index}].u"))?,
            label,
        },
    })
}

pub fn complex_to_json(c: &BasedComplex) -> Value {
    serde_json::to_value(complex_dto(c)).expect("plain data")
}

pub fn move_to_json(m: &Move) -> Value {
    serde_json::to_value(move_dto(m)).expect("plain data")
}

pub fn script_to_json(s: &MoveScript) -> Value {
    serde_json::to_value(ScriptJson {
        initial: complex_dto(&s.initial),
        moves: s.moves.iter().map(move_dto).collect(),
    })
    .expect("plain data")
}

pub fn chain_map_to_json(f: &ChainMap) -> Value {
    serde_json::to_value(MapJson {
        source: complex_dto(f.source()),
        target: complex_dto(f.target()),
        f: entries_json(f.matrix()),
    })
    .expect("plain data")
}

/// Parses and validates a complex.
pub fn parse_complex(text: &str) -> Result<BasedComplex, FormatError> {
    complex_from_dto(serde_json::from_str(text)?, "")
}

pub fn complex_from_json(v: &Value) -> Result<BasedComplex, FormatError> {
    complex_from_dto(ComplexJson::deserialize(v)?, "")
}

/// Parses a script; the initial complex is validated, the moves are not run.
pub fn parse_script(text: &str) -> Result<MoveScript, FormatError> {
    script_from_dto(serde_json::from_str(text)?)
}

pub fn script_from_json(v: &Value) -> Result<MoveScript, FormatError> {
    script_from_dto(ScriptJson::deserialize(v)?)
}

fn script_from_dto(dto: ScriptJson) -> Result<MoveScript, FormatError> {
    let initial = complex_from_dto(dto.initial, "initial.")?;
    let moves = dto
        .moves
        .into_iter()
        .enumerate()
        .map(|(i, m)| move_from_dto(initial.group(), m, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MoveScript::new(initial, moves))
}

/// Parses a chain map and checks that it commutes with the differentials.
pub fn parse_chain_map(text: &str) -> Result<ChainMap, FormatError> {
    let dto: MapJson = serde_json::from_str(text)?;
    let source = complex_from_dto(dto.source, "source.")?;
    let target = complex_from_dto(dto.target, "target.")?;
    let coeffs = parse_entries(source.group(), &dto.f, "f")?;
    Ok(ChainMap::from_entries(
        source,
        target,
        dto.f.iter().zip(coeffs).map(|(e, v)| (e.from.as_str(), e.to.as_str(), v)),
    )?)
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXPANSION: &str = r#"{
  "group": {"kind": "cyclic", "n": 5},
  "generators": [{"label": "a", "degree": -1}, {"label": "b", "degree": 0}],
  "d": [{"from": "a", "to": "b", "coeff": "1"}]
}"#;

    #[test]
    fn complex_round_trip() {
        let c = parse_complex(EXPANSION).unwrap();
        assert_eq!(c.len(), 2);
        let text = to_canonical_string(&complex_to_json(&c));
        let back = parse_complex(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(to_canonical_string(&complex_to_json(&back)), text);
        assert!(text.find("\"d\"").unwrap() < text.find("\"generators\"").unwrap());
    }

    #[test]
    fn script_round_trip() {
        let c = parse_complex(EXPANSION).unwrap();
        let g = c.group().clone();
        let s = MoveScript::new(
            c,
            vec![
                Move::Expand {
                    a: "u".into(),
                    b: "v".into(),
                    degree: 2,
                    levels: None,
                },
                Move::slide("a", "v", RingElement::parse(&g, "0").unwrap()),
                Move::base_change("a", TrivialUnit::parse(&g, "-t^3").unwrap()),
                Move::slide("u", "a", RingElement::parse(&g, "1 - t^2 + 3*t^4").unwrap()),
            ],
        );
        let text = to_canonical_string(&script_to_json(&s));
        assert!(text.contains(r#""op": "base_change""#));
        assert!(text.contains(r#""c": "1 - t^2 + 3*t^4""#));
        let back = parse_script(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(to_canonical_string(&script_to_json(&back)), text);
    }

    #[test]
    fn filtered_generators_and_levels() {
        let text = r#"{"initial": {"group": {"kind": "trivial"},
            "generators": [{"label": "a", "degree": 0, "filtration": 2}], "d": []},
            "moves": [{"op": "expand", "a": "x", "b": "y", "degree": 0, "levels": [1, 0]}]}"#;
        let s = parse_script(text).unwrap();
        assert_eq!(s.initial.generator("a").unwrap().filtration, Some(2));
        assert!(matches!(s.moves[0], Move::Expand { levels: Some((1, 0)), .. }));
        assert_eq!(s.run().unwrap().len(), 3);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_complex(&EXPANSION[..40]).unwrap_err();
        assert!(matches!(err, FormatError::Json { line: 2, .. }), "{err:?}");
        let bad = EXPANSION.replace(r#""coeff": "1""#, r#""coeff": "1 + *t""#);
        let err = parse_complex(&bad).unwrap_err();
        assert_eq!(
            err,
            FormatError::Ring {
                field: "d[0].coeff".into(),
                text: "1 + *t".into(),
                position: 4,
                message: match &err {
                    FormatError::Ring { message, .. } => message.clone(),
                    _ => unreachable!(),
                },
            }
        );
        let bad = EXPANSION.replace(r#""degree": 0"#, r#""degree": 3"#);
        assert!(matches!(parse_complex(&bad), Err(FormatError::Chain(_))));
    }

    #[test]
    fn chain_map_round_trip() {
        let c = parse_complex(EXPANSION).unwrap();
        let g = c.group().clone();
        let f = ChainMap::from_entries(
            c.clone(),
            c,
            [("a", "a", RingElement::parse(&g, "t").unwrap()), ("b", "b", RingElement::parse(&g, "t").unwrap())],
        )
        .unwrap();
        let text = to_canonical_string(&chain_map_to_json(&f));
        assert_eq!(parse_chain_map(&text).unwrap(), f);
    }
}
