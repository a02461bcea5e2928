use std::fs;
use std::io::{self, Read};
use std::path::Path;

use udkdv_core::rational::{self, Rational};
use udkdv_core::scattering::SpectralData;
use udkdv_core::texpr::TExpr;
use udkdv_core::{Error, State};

use crate::Failure;

/// Contents of `path`, or of stdin for `-`.
pub fn read_text(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
    } else {
        text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

/// The text with `#` comment lines and blank lines removed.
fn strip_comments(text: &str) -> String {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Parses the first non-comment line as a state. `origin` replaces the
/// default index of the first value when the line has no `@k` token.
pub fn parse_state(text: &str, origin: Option<i64>) -> Result<State, Error> {
    let body = strip_comments(text);
    let line = body.lines().next().ok_or_else(|| Error::Parse("empty state file".into()))?;
    match origin {
        Some(k) if !line.starts_with('@') => format!("@{k} {line}").parse(),
        _ => line.parse(),
    }
}

pub fn read_state(path: &Path, origin: Option<i64>) -> Result<State, Failure> {
    Ok(parse_state(&read_text(path)?, origin)?)
}

/// Anything `render` and `solve` can draw from.
pub enum Input {
    Spectral(SpectralData),
    Expr(TExpr),
    State(State),
}

/// Sniffs the format: JSON spectral data, a T-expression, or a state line.
pub fn parse_input(text: &str, origin: Option<i64>) -> Result<Input, Error> {
    let body = strip_comments(text);
    match body.chars().next() {
        Some('{') => Ok(Input::Spectral(SpectralData::from_json(&body)?)),
        Some('(') => Ok(Input::Expr(body.parse()?)),
        _ => Ok(Input::State(parse_state(&body, origin)?)),
    }
}

pub fn rational_arg(s: &str) -> Result<Rational, String> {
    rational::parse_rational(s).map_err(|e| e.to_string())
}

pub fn positive_rational_arg(s: &str) -> Result<Rational, String> {
    let q = rational_arg(s)?;
    if q <= rational::zero() {
        return Err(format!("must be positive, got {q}"));
    }
    Ok(q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Times(pub Vec<i64>);

/// A list of times: comma-separated integers or inclusive ranges `a..b`,
/// optionally strided as `a..b:k`.
pub fn times_arg(s: &str) -> Result<Times, String> {
    let int = |x: &str| x.trim().parse::<i64>().map_err(|_| format!("bad time `{x}`"));
    let mut out = Vec::new();
    for item in s.split(',') {
        match item.split_once("..") {
            None => out.push(int(item)?),
            Some((a, rest)) => {
                let (b, k) = match rest.split_once(':') {
                    Some((b, k)) => (b, int(k)?),
                    None => (rest, 1),
                };
                let (a, b) = (int(a)?, int(b)?);
                if k <= 0 {
                    return Err(format!("stride must be positive in `{item}`"));
                }
                if a > b {
                    return Err(format!("empty range `{item}`"));
                }
                out.extend((a..=b).step_by(k as usize));
            }
        }
    }
    Ok(Times(out))
}
