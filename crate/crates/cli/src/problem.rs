//! Plain-text problem files.
//!
//! ```text
//! # maximize 2x1 + x2
//! 2 2          # k n
//! 2 1          # f
//! 1 1  5       # row of A, then b_i
//! 1 0  2
//! ```
//!
//! Tokens are whitespace separated, `#` starts a comment, blank lines are
//! ignored.

use std::fmt::Write as _;

use skewlp::LinearProgram;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    /// 1-based; 0 when the error concerns the whole file.
    pub line: usize,
    pub reason: String,
}

impl ParseError {
    fn new(line: usize, reason: impl Into<String>) -> Self {
        Self {
            line,
            reason: reason.into(),
        }
    }
}

// (line number, tokens) for every line with content
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn numbers(line: usize, tokens: &[&str]) -> Result<Vec<f64>, ParseError> {
    tokens
        .iter()
        .map(|t| match t.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(ParseError::new(
                line,
                format!("'{t}' is not a finite number"),
            )),
        })
        .collect()
}

fn dimension(line: usize, token: &str, what: &str) -> Result<usize, ParseError> {
    match token.parse::<usize>() {
        Ok(0) => Err(ParseError::new(line, format!("{what} must be at least 1"))),
        Ok(v) => Ok(v),
        Err(_) => Err(ParseError::new(
            line,
            format!("{what} '{token}' is not a positive integer"),
        )),
    }
}

pub fn parse_problem(text: &str) -> Result<LinearProgram, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "missing header 'k n'"))?;
    if header.len() != 2 {
        return Err(ParseError::new(
            hline,
            format!(
                "header needs 2 integers 'k n', found {} tokens",
                header.len()
            ),
        ));
    }
    let k = dimension(hline, header[0], "k")?;
    let n = dimension(hline, header[1], "n")?;

    let (fline, ftoks) = lines
        .next()
        .ok_or_else(|| ParseError::new(hline, "missing objective line"))?;
    if ftoks.len() != n {
        return Err(ParseError::new(
            fline,
            format!("objective needs {n} coefficients, found {}", ftoks.len()),
        ));
    }
    let f = numbers(fline, &ftoks)?;

    let mut a = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    let mut last = fline;
    for i in 0..k {
        let (line, toks) = lines
            .next()
            .ok_or_else(|| ParseError::new(last, format!("missing constraint {} of {k}", i + 1)))?;
        if toks.len() != n + 1 {
            return Err(ParseError::new(
                line,
                format!(
                    "constraint needs {n} coefficients and a right-hand side, found {} tokens",
                    toks.len()
                ),
            ));
        }
        let mut row = numbers(line, &toks)?;
        b.push(row.pop().expect("n + 1 tokens"));
        a.push(row);
        last = line;
    }
    if let Some((line, _)) = lines.next() {
        return Err(ParseError::new(
            line,
            format!("unexpected content after {k} constraints"),
        ));
    }
    LinearProgram::from_rows(&f, &a, &b).map_err(|e| ParseError::new(0, e.to_string()))
}

/// Inverse of [`parse_problem`]; numbers use the shortest exact decimal form.
pub fn render(lp: &LinearProgram) -> String {
    let join = |v: &[f64]| {
        v.iter()
            .map(|x| format!("{x}"))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    writeln!(out, "{} {}", lp.k(), lp.n()).unwrap();
    writeln!(out, "{}", join(lp.f())).unwrap();
    for i in 0..lp.k() {
        writeln!(out, "{} {}", join(lp.a().row(i)), lp.b()[i]).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "\
# two-variable example
2 2
2 1        # maximize 2x1 + x2

1 1 5
1 0 2
";

    #[test]
    fn parses_example() {
        let lp = parse_problem(EXAMPLE).unwrap();
        assert_eq!(lp.f(), &[2.0, 1.0]);
        assert_eq!(lp.b(), &[5.0, 2.0]);
        assert_eq!(lp.a().to_rows(), vec![vec![1.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn zero_dimensions_rejected() {
        let err = parse_problem("0 0\n").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.reason.contains("at least 1"), "{err}");
    }

    #[test]
    fn extra_constraint_rejected() {
        let err = parse_problem("1 2\n1 1\n1 1 5\n1 0 2\n").unwrap_err();
        assert_eq!(err.line, 4);
    }

    #[test]
    fn missing_and_malformed() {
        assert_eq!(parse_problem("").unwrap_err().line, 0);
        assert_eq!(parse_problem("2 2\n2 1\n1 1 5\n").unwrap_err().line, 3);
        assert_eq!(parse_problem("1 1\n1\nx 2\n").unwrap_err().line, 3);
        assert_eq!(parse_problem("1 1\n1 2\n1 2\n").unwrap_err().line, 2);
        assert_eq!(parse_problem("1 1\n1\n1 2 3\n").unwrap_err().line, 3);
        assert_eq!(parse_problem("1 -1\n").unwrap_err().line, 1);
        assert_eq!(parse_problem("1 1\ninf\n1 2\n").unwrap_err().line, 2);
    }

    #[test]
    fn render_round_trips() {
        let lp = parse_problem(EXAMPLE).unwrap();
        assert_eq!(parse_problem(&render(&lp)).unwrap(), lp);
        let odd = LinearProgram::from_rows(&[0.1, -2.5e-7], &[[1.0 / 3.0, -0.0]], &[1e12]).unwrap();
        assert_eq!(parse_problem(&render(&odd)).unwrap(), odd);
    }
}
