//! JSON formats shared by the library and the command line.
//!
//! Payoff entries are plain JSON numbers. Numerators, denominators and
//! complexities are decimal strings so that no consumer silently rounds them.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exact::IntMatrix;
use crate::game::{Game, GameError, MixedStrategy, Profile};
use crate::ne::SolveReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl ParseError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError::Field { field: field.into(), message: message.into() }
    }
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Syntax { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGame {
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<i64>>,
    #[serde(default)]
    family_tag: Option<String>,
    #[serde(default)]
    constant_sum: Option<i64>,
}

fn check_matrix(name: &str, rows: &[Vec<i64>], n: usize) -> Result<IntMatrix, ParseError> {
    if rows.len() != n {
        return Err(ParseError::field(name, format!("expected {n} rows, found {}", rows.len())));
    }
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
        return Err(ParseError::field(format!("{name}[{i}]"), format!("expected {n} entries, found {}", row.len())));
    }
    IntMatrix::from_rows(rows).map_err(|e| ParseError::field(name, e.to_string()))
}

/// Parses a game file and checks its declared shape and constant sum.
pub fn parse_game(text: &str) -> Result<Game, ParseError> {
    let raw: RawGame = serde_json::from_str(text)?;
    if raw.n == 0 {
        return Err(ParseError::field("n", "must be positive"));
    }
    let a = check_matrix("A", &raw.a, raw.n)?;
    let b = check_matrix("B", &raw.b, raw.n)?;
    let mut game = Game::new(a, b).map_err(|e| ParseError::field("B", e.to_string()))?;
    if let Some(tag) = raw.family_tag {
        game = game.with_tag(tag);
    }
    if let Some(u) = raw.constant_sum {
        game = game
            .with_constant_sum(BigInt::from(u))
            .map_err(|e| ParseError::field("constant_sum", e.to_string()))?;
    }
    Ok(game)
}

fn write_matrix(out: &mut String, m: &IntMatrix) {
    out.push_str("[\n");
    let n = m.dim();
    for (i, row) in m.rows().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let sep = if i + 1 < n { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", cells.join(", "));
    }
    out.push_str("  ]");
}

/// Game file text with one matrix row per line.
pub fn game_to_json(game: &Game) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{{\n  \"n\": {},", game.dim());
    if let Some(tag) = game.family_tag() {
        let _ = writeln!(out, "  \"family_tag\": {},", Value::from(tag));
    }
    if let Some(u) = game.constant_sum() {
        let _ = writeln!(out, "  \"constant_sum\": {u},");
    }
    out.push_str("  \"A\": ");
    write_matrix(&mut out, game.a());
    out.push_str(",\n  \"B\": ");
    write_matrix(&mut out, game.b());
    out.push_str("\n}\n");
    out
}

pub fn strategy_json(x: &MixedStrategy) -> Value {
    json!({
        "numerators": x.numerators().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "denominator": x.denominator().to_string(),
    })
}

fn big_from(value: &Value, field: &str) -> Result<BigInt, ParseError> {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => return Err(ParseError::field(field, format!("expected a decimal string, found {other}"))),
    };
    text.trim()
        .parse()
        .map_err(|_| ParseError::field(field, format!("`{text}` is not an integer")))
}

/// Reads `{"numerators": [...], "denominator": "..."}`. The numerators must
/// be nonnegative and sum to the denominator; the result is gcd-reduced.
pub fn strategy_from_json(value: &Value, field: &str) -> Result<MixedStrategy, ParseError> {
    let nums = value
        .get("numerators")
        .and_then(Value::as_array)
        .ok_or_else(|| ParseError::field(format!("{field}.numerators"), "missing array"))?;
    let den_field = format!("{field}.denominator");
    let den = big_from(value.get("denominator").ok_or_else(|| ParseError::field(&den_field, "missing"))?, &den_field)?;
    let weights = nums
        .iter()
        .enumerate()
        .map(|(i, v)| big_from(v, &format!("{field}.numerators[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if weights.is_empty() {
        return Err(ParseError::field(format!("{field}.numerators"), "empty"));
    }
    let sum: BigInt = weights.iter().sum();
    if sum != den {
        return Err(ParseError::field(&den_field, format!("numerators sum to {sum}, not {den}")));
    }
    MixedStrategy::from_weights(weights).map_err(|e: GameError| ParseError::field(field, e.to_string()))
}

pub fn parse_strategy(text: &str) -> Result<MixedStrategy, ParseError> {
    let value: Value = serde_json::from_str(text)?;
    strategy_from_json(&value, "distribution")
}

pub fn profile_json(p: &Profile) -> Value {
    json!({ "x": strategy_json(&p.x), "y": strategy_json(&p.y) })
}

pub fn parse_profile(text: &str) -> Result<Profile, ParseError> {
    let value: Value = serde_json::from_str(text)?;
    let get = |k: &str| value.get(k).ok_or_else(|| ParseError::field(k, "missing"));
    let x = strategy_from_json(get("x")?, "x")?;
    let y = strategy_from_json(get("y")?, "y")?;
    Profile::new(x, y).map_err(|e| ParseError::field("y", e.to_string()))
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// Solve report; supports are written 1-based.
pub fn report_json(game: &Game, report: &SolveReport) -> Value {
    let equilibria: Vec<Value> = report
        .equilibria
        .iter()
        .zip(&report.supports)
        .map(|(p, s)| {
            json!({
                "x": strategy_json(&p.x),
                "y": strategy_json(&p.y),
                "C1": p.x.complexity().to_string(),
                "C2": p.y.complexity().to_string(),
                "support_x": one_based(&s.rows),
                "support_y": one_based(&s.cols),
            })
        })
        .collect();
    json!({
        "n": game.dim(),
        "family_tag": game.family_tag(),
        "equilibria": equilibria,
        "C1_min": report.c1_min.as_ref().map(|c| c.to_string()),
        "C2_min": report.c2_min.as_ref().map(|c| c.to_string()),
        "degenerate": report.degenerate,
        "note": report.degeneracy_note(),
        "enumerated_supports": report.enumerated_supports,
    })
}
