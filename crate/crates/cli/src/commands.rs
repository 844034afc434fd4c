use std::fs;
use std::path::Path;
use std::time::Instant;

use nashrand_core::families::{example1_game, example2_game};
use nashrand_core::io::{game_to_json, parse_game, parse_profile, parse_strategy, report_json};
use nashrand_core::sampler::{chi_square_test, DEPTH_CAP};
use nashrand_core::{
    beta_game, capability_admissible, closed_form_ne, cofactor_sum, cofactor_sum_by_solve, complexity_upper_bound,
    det, is_nash, min_complexities, permutation_game, prime_block_game, recurrence_table, support_enumeration,
    BigInt, BigRational, ClosedFormFamily, DdgSampler, EnumConfig, Game, MixedStrategy, NeError, Permutation,
    SeededBits,
};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::{Format, Limits, Output};

const CHI_SQUARE_ALPHA: f64 = 1e-3;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_game(path: &Path) -> Result<Game, CliError> {
    parse_game(&read(path)?).map_err(|source| CliError::Parse { path: path.to_owned(), source })
}

fn load_strategy(path: &Path) -> Result<MixedStrategy, CliError> {
    parse_strategy(&read(path)?).map_err(|source| CliError::Parse { path: path.to_owned(), source })
}

fn write(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn csv_text<R: Serialize>(rows: &[R]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Invalid(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv of UTF-8 fields"))
}

fn json_only(output: &Output, command: &str) -> Result<(), CliError> {
    match output.format {
        Some(Format::Csv) => Err(CliError::Invalid(format!("{command} has no csv output"))),
        _ => Ok(()),
    }
}

/// Rounds to 6 significant digits.
fn sig6(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.5e}").parse().expect("formatted float parses")
}

fn ser_sig6<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(sig6(*v))
}

fn ser_sig6_opt<S: serde::Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&sig6(*v)),
        None => s.serialize_none(),
    }
}

fn log2(v: &BigInt) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_f64().unwrap_or(f64::NAN).log2();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap_or(f64::NAN).log2() + shift as f64
}

fn ratio(num: &BigInt, den: &BigInt) -> Option<f64> {
    (!den.is_zero()).then(|| BigRational::new(num.clone(), den.clone()).to_f64().unwrap_or(f64::NAN))
}

fn parse_big(flag: &str, text: &str) -> Result<BigInt, CliError> {
    text.trim().parse().map_err(|_| CliError::Invalid(format!("--{flag}: `{text}` is not an integer")))
}

// ---------------------------------------------------------------------------

pub fn generate(family: &str, n: Option<usize>) -> Result<Game, CliError> {
    let need = || n.ok_or_else(|| CliError::Invalid(format!("family `{family}` needs --n")));
    let fixed = |game: Game| match n {
        Some(n) if n != game.dim() => {
            Err(CliError::Invalid(format!("family `{family}` has fixed dimension {}, got --n {n}", game.dim())))
        }
        _ => Ok(game),
    };
    match family {
        "example1" => fixed(example1_game()),
        "example2" => fixed(example2_game()),
        "beta" => Ok(beta_game(need()?)?),
        "primeblock" => Ok(prime_block_game(need()?)?),
        "permutation" => {
            let n = need()?;
            if n == 0 {
                return Err(CliError::Invalid("permutation games need n >= 1".into()));
            }
            let (game, _) = permutation_game(&Permutation::identity(n), &Permutation::shift(n, 1))?;
            Ok(game.with_tag("permutation"))
        }
        other => match ClosedFormFamily::parse(other) {
            Some(f) => Ok(closed_form_ne(f, need()?)?.game),
            None => Err(CliError::Invalid(format!("unknown family `{other}`"))),
        },
    }
}

pub fn gen(family: &str, n: Option<usize>, out: Option<&Path>) -> Result<(), CliError> {
    write(out, &game_to_json(&generate(family, n)?))
}

#[derive(Serialize)]
struct EquilibriumRow {
    index: usize,
    support_x: String,
    support_y: String,
    x: String,
    y: String,
    #[serde(rename = "C1")]
    c1: String,
    #[serde(rename = "C2")]
    c2: String,
}

fn one_based(v: &[usize]) -> String {
    v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ")
}

pub fn solve(input: &Path, limits: Limits, output: &Output) -> Result<(), CliError> {
    let game = load_game(input)?;
    let report = support_enumeration(&game, &EnumConfig::with_max_n(limits.max_n))?;
    if let Some(note) = report.degeneracy_note() {
        eprintln!("note: {note}");
    }
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&report_json(&game, &report)),
        Format::Csv => {
            let rows: Vec<EquilibriumRow> = report
                .equilibria
                .iter()
                .zip(&report.supports)
                .enumerate()
                .map(|(i, (p, s))| EquilibriumRow {
                    index: i + 1,
                    support_x: one_based(&s.rows),
                    support_y: one_based(&s.cols),
                    x: p.x.to_string(),
                    y: p.y.to_string(),
                    c1: p.x.complexity().to_string(),
                    c2: p.y.complexity().to_string(),
                })
                .collect();
            csv_text(&rows)?
        }
    };
    write(output.out.as_deref(), &text)
}

pub fn verify(input: &Path, profile: &Path, c1: Option<&str>, c2: Option<&str>, output: &Output) -> Result<(), CliError> {
    json_only(output, "verify")?;
    let game = load_game(input)?;
    let p = parse_profile(&read(profile)?).map_err(|source| CliError::Parse { path: profile.to_owned(), source })?;
    if p.x.len() != game.dim() {
        return Err(CliError::Invalid(format!(
            "profile has {} strategies per player, game has {}",
            p.x.len(),
            game.dim()
        )));
    }
    let c1 = c1.map(|t| parse_big("c1", t)).transpose()?;
    let c2 = c2.map(|t| parse_big("c2", t)).transpose()?;
    let nash = is_nash(&game, &p);
    let ok1 = c1.as_ref().map(|c| capability_admissible(&p.x, c));
    let ok2 = c2.as_ref().map(|c| capability_admissible(&p.y, c));
    let (u1, u2) = game.payoffs(&p);
    let value = json!({
        "n": game.dim(),
        "nash": nash,
        "C1": p.x.complexity().to_string(),
        "C2": p.y.complexity().to_string(),
        "payoff_1": u1.to_string(),
        "payoff_2": u2.to_string(),
        "capability": {
            "c1": c1.map(|c| c.to_string()),
            "c2": c2.map(|c| c.to_string()),
            "player_1_within": ok1,
            "player_2_within": ok2,
            "admissible": nash && ok1.unwrap_or(true) && ok2.unwrap_or(true),
        },
    });
    write(output.out.as_deref(), &pretty(&value))
}

/// One closed-form scan row. `n` is the family parameter, `dim` the game
/// dimension; the growth column divides by `dim`.
#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub dim: usize,
    #[serde(rename = "C1")]
    pub c1: String,
    #[serde(rename = "C2")]
    pub c2: String,
    #[serde(rename = "log2C1_over_n", serialize_with = "ser_sig6")]
    pub log2_c1_over_n: f64,
    pub g_n: String,
    pub abs_det: String,
    #[serde(rename = "abs_K")]
    pub abs_k: String,
    #[serde(serialize_with = "ser_sig6")]
    pub wallclock_ms: f64,
}

fn scan_row(family: ClosedFormFamily, n: usize) -> Result<ScanRow, CliError> {
    let start = Instant::now();
    let cf = closed_form_ne(family, n)?;
    // Player 1's strategy is pinned down by B in every family here.
    let b = cf.game.b();
    let d = det(b);
    let k = cofactor_sum_by_solve(b).unwrap_or_else(|| cofactor_sum(b)).abs();
    if k.is_zero() || !(&k % &cf.c1).is_zero() {
        return Err(CliError::Hypothesis(format!("{} n = {n}: C1 = {} does not divide |K| = {k}", family.name(), cf.c1)));
    }
    let g = &k / &cf.c1;
    let dim = cf.game.dim();
    Ok(ScanRow {
        n,
        dim,
        log2_c1_over_n: log2(&cf.c1) / dim as f64,
        c1: cf.c1.to_string(),
        c2: cf.c2.to_string(),
        g_n: g.to_string(),
        abs_det: d.abs().to_string(),
        abs_k: k.to_string(),
        wallclock_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn scan_rows(family: &str, from: usize, to: usize) -> Result<Vec<ScanRow>, CliError> {
    let family = ClosedFormFamily::parse(family)
        .ok_or_else(|| CliError::Invalid(format!("family `{family}` has no closed form to scan")))?;
    if from > to {
        return Err(CliError::Invalid(format!("empty range {from}..{to}")));
    }
    (from..=to).into_par_iter().map(|n| scan_row(family, n)).collect()
}

pub fn scan(family: &str, from: usize, to: usize, output: &Output) -> Result<(), CliError> {
    let rows = scan_rows(family, from, to)?;
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_text(&rows)?,
        Format::Json => pretty(&serde_json::to_value(&rows).expect("rows serialize")),
    };
    write(output.out.as_deref(), &text)
}

#[derive(Serialize)]
struct RecurrenceRow {
    n: usize,
    a_n: String,
    b_n: String,
    #[serde(rename = "detB_n")]
    det_b_n: String,
    g_n: String,
    /// `b_{n+1} / b_n`.
    #[serde(serialize_with = "ser_sig6_opt")]
    ratio: Option<f64>,
    /// `a_n - b_n - b_{n+1}`.
    anbn_residual: String,
    /// `det B_n - det B_{n-1} - det B_{n-3}`, from `n = 4`.
    detb_residual: Option<String>,
}

pub fn recurrence(to: usize, output: &Output) -> Result<(), CliError> {
    if to < 8 {
        return Err(CliError::Invalid(format!("--to must be at least 8, got {to}")));
    }
    let t = recurrence_table(to);
    let rows: Vec<RecurrenceRow> = (1..=to)
        .map(|n| RecurrenceRow {
            n,
            a_n: t.a(n).to_string(),
            b_n: t.b(n).to_string(),
            det_b_n: t.det_b(n).to_string(),
            g_n: t.g(n).to_string(),
            ratio: ratio(t.b(n + 1), t.b(n)),
            anbn_residual: (t.a(n) - t.b(n) - t.b(n + 1)).to_string(),
            detb_residual: (n >= 4).then(|| (t.det_b(n) - t.det_b(n - 1) - t.det_b(n - 3)).to_string()),
        })
        .collect();
    let text = match output.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_text(&rows)?,
        Format::Json => pretty(&serde_json::to_value(&rows).expect("rows serialize")),
    };
    write(output.out.as_deref(), &text)?;
    let broken: Vec<usize> = rows
        .iter()
        .filter(|r| r.anbn_residual != "0" || r.detb_residual.as_deref().is_some_and(|v| v != "0"))
        .map(|r| r.n)
        .collect();
    if broken.is_empty() {
        Ok(())
    } else {
        Err(CliError::Hypothesis(format!("recurrence identities fail at n = {broken:?}")))
    }
}

#[derive(Serialize)]
struct SampleRow {
    outcome: usize,
    count: u64,
    #[serde(serialize_with = "ser_sig6")]
    frequency: f64,
    #[serde(serialize_with = "ser_sig6")]
    probability: f64,
}

pub fn sample(dist: &Path, count: usize, seed: u64, output: &Output) -> Result<(), CliError> {
    let x = load_strategy(dist)?;
    let sampler = DdgSampler::build(x.clone());
    let stats = sampler.sample_many(&mut SeededBits::new(seed), count)?;
    let probs: Vec<f64> = x.probabilities().iter().map(|p| p.to_f64().unwrap_or(f64::NAN)).collect();
    let freq = |c: u64| if count == 0 { 0.0 } else { c as f64 / count as f64 };
    let text = match output.format.unwrap_or(Format::Json) {
        Format::Csv => {
            let rows: Vec<SampleRow> = stats
                .counts
                .iter()
                .zip(&probs)
                .enumerate()
                .map(|(i, (&c, &p))| SampleRow { outcome: i + 1, count: c, frequency: freq(c), probability: p })
                .collect();
            csv_text(&rows)?
        }
        Format::Json => {
            let chi = chi_square_test(&stats.counts, &x, CHI_SQUARE_ALPHA);
            pretty(&json!({
                "n": x.len(),
                "count": count,
                "seed": seed,
                "counts": stats.counts,
                "frequencies": stats.counts.iter().map(|&c| sig6(freq(c))).collect::<Vec<_>>(),
                "probabilities": probs.iter().map(|&p| sig6(p)).collect::<Vec<_>>(),
                "bits": stats.bits,
                "mean_bits": sig6(stats.mean_bits()),
                "entropy": sig6(x.entropy()),
                "chi_square": {
                    "alpha": CHI_SQUARE_ALPHA,
                    "statistic": sig6(chi.statistic),
                    "dof": chi.dof,
                    "critical": sig6(chi.critical),
                    "passed": chi.passed,
                },
            }))
        }
    };
    write(output.out.as_deref(), &text)
}

pub fn analyze(dist: &Path, depth: usize, output: &Output) -> Result<(), CliError> {
    json_only(output, "analyze")?;
    if depth == 0 {
        return Err(CliError::Invalid("--depth must be positive".into()));
    }
    if depth > DEPTH_CAP {
        return Err(CliError::Resource(format!("--depth {depth} exceeds the cap {DEPTH_CAP}")));
    }
    let x = load_strategy(dist)?;
    let a = DdgSampler::build(x.clone()).analyze(depth);
    let f = |r: &BigRational| sig6(r.to_f64().unwrap_or(f64::NAN));
    let value = json!({
        "n": x.len(),
        "depth": depth,
        "resolved": a.resolved.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "tail": a.tail.to_string(),
        "tail_f64": f(&a.tail),
        "tail_bound": format!("{}/2^{depth}", x.len()),
        "max_error": a.max_error.to_string(),
        "max_error_f64": f(&a.max_error),
        "expected_bits": a.expected_bits.to_string(),
        "expected_bits_f64": sig6(a.expected_bits_f64()),
        "entropy": sig6(a.entropy),
        "errors_within_tail": a.errors_within_tail,
        "tail_within_bound": a.tail_within_bound,
        "bounds_hold": a.bounds_hold(),
    });
    write(output.out.as_deref(), &pretty(&value))
}

pub fn bound(input: &Path, limits: Limits, output: &Output) -> Result<(), CliError> {
    json_only(output, "bound")?;
    let game = load_game(input)?;
    let (b1, b2) = complexity_upper_bound(&game);
    let (measured, note) = match min_complexities(&game, &EnumConfig::with_max_n(limits.max_n)) {
        Ok(c) => (Some(c), None),
        Err(e @ (NeError::DimensionTooLarge { .. } | NeError::NoEquilibriumFound { .. })) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let dominates = measured.as_ref().map(|(c1, c2)| &b1 >= c1 && &b2 >= c2);
    let value = json!({
        "n": game.dim(),
        "max_abs_A": game.a().max_abs_entry().to_string(),
        "max_abs_B": game.b().max_abs_entry().to_string(),
        "bound_C1": b1.to_string(),
        "bound_C2": b2.to_string(),
        "C1_min": measured.as_ref().map(|(c, _)| c.to_string()),
        "C2_min": measured.as_ref().map(|(_, c)| c.to_string()),
        "dominates": dominates,
        "note": note,
    });
    write(output.out.as_deref(), &pretty(&value))?;
    if dominates == Some(false) {
        return Err(CliError::Hypothesis("measured complexity exceeds the upper bound".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.551463_4), 0.551463);
        assert_eq!(sig6(1234567.0), 1234570.0);
        assert_eq!(sig6(0.0), 0.0);
    }

    #[test]
    fn log2_of_large_integers() {
        assert_eq!(log2(&BigInt::from(34)), 34f64.log2());
        let big = BigInt::from(3) << 200;
        assert!((log2(&big) - (200.0 + 3f64.log2())).abs() < 1e-12);
    }

    #[test]
    fn scan_rows_for_beta_8() {
        let rows = scan_rows("beta", 8, 9).unwrap();
        assert_eq!((rows[0].c1.as_str(), rows[0].g_n.as_str()), ("34", "1"));
        assert_eq!(rows[0].dim, 8);
    }
}
