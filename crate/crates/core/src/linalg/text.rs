//! Row-major text form: rows separated by `;`, entries by `,`.
//! Scalar-factored matrices print as `scalar * [pattern]`.

use super::exact::{factor, Exact};
use super::matrix::{Entry, Matrix};
use super::LinalgError;
use crate::precision::BigReal;

fn rows_to_string<T>(m: &Matrix<T>, mut f: impl FnMut(&T) -> String) -> String
where
    T: Entry,
{
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| f(m.get(i, j))).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn format_exact(m: &Matrix<Exact>) -> String {
    if let Some(f) = factor(m) {
        let pattern = rows_to_string(&f.pattern, |v| v.to_string());
        if f.scalar == Exact::one() {
            return pattern;
        }
        let s = f.scalar.to_string();
        let s = if f.scalar.terms().count() > 1 { format!("({s})") } else { s };
        return format!("{s} * [{pattern}]");
    }
    rows_to_string(m, |e| e.to_string())
}

pub fn format_numeric(m: &Matrix<BigReal>, digits: u32) -> String {
    rows_to_string(m, |e| e.to_decimal(digits))
}

fn parse_rows(s: &str) -> Result<Matrix<Exact>, LinalgError> {
    let rows: Vec<Vec<Exact>> = s
        .split(';')
        .map(|r| r.split(',').map(|e| e.trim().parse::<Exact>()).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    let cols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != cols) {
        return Err(LinalgError::Parse(format!("ragged rows in {s:?}")));
    }
    let n = rows.len();
    Matrix::new(n, cols, rows.into_iter().flatten().collect())
}

/// Parses `1,1;0,1` or `alpha * [1,0;1,1]`.
pub fn parse_matrix(s: &str) -> Result<Matrix<Exact>, LinalgError> {
    let s = s.trim();
    if let Some(open) = s.find('[') {
        let close = s
            .rfind(']')
            .filter(|&c| c > open)
            .ok_or_else(|| LinalgError::Parse(format!("unclosed '[' in {s:?}")))?;
        if !s[close + 1..].trim().is_empty() {
            return Err(LinalgError::Parse(format!("trailing input in {s:?}")));
        }
        let head = s[..open].trim();
        let pattern = parse_rows(&s[open + 1..close])?;
        if head.is_empty() {
            return Ok(pattern);
        }
        let scalar_text = head
            .strip_suffix('*')
            .ok_or_else(|| LinalgError::Parse(format!("expected 'scalar * [..]' in {s:?}")))?;
        let scalar: Exact = scalar_text.trim().parse()?;
        return Ok(pattern.scale(&scalar));
    }
    parse_rows(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_round_trip() {
        let m = parse_matrix("1,1;0,1").unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(format_exact(&m), "1,1;0,1");
    }

    #[test]
    fn factored_round_trip() {
        let m = parse_matrix("alpha_star * [1,0;1,1]").unwrap();
        assert_eq!(*m.get(1, 0), "alpha_star".parse::<Exact>().unwrap());
        assert_eq!(format_exact(&m), "alpha_star * [1,0;1,1]");
        assert_eq!(parse_matrix(&format_exact(&m)).unwrap(), m);
        let half = parse_matrix("1/2 * [2,0;0,2]").unwrap();
        assert_eq!(format_exact(&half), "1,0;0,1");
    }

    #[test]
    fn mixed_entries_print_elementwise() {
        let m = parse_matrix("a, 1; 0, b").unwrap();
        assert_eq!(format_exact(&m), "a,1;0,b");
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_matrix("1,2;3").is_err());
        assert!(parse_matrix("a [1]").is_err());
        assert!(parse_matrix("2 * [1,0;0,1").is_err());
    }
}
