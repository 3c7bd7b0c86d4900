//! Plain-text matrix files: a line holding `N`, then `N` rows of `N`
//! whitespace-separated entries such as `0.5-0.25i`, `1`, or `-3e-2i`.
//! Blank lines and lines starting with `#` are ignored.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Parses one entry. Bare reals have zero imaginary part.
pub fn parse_complex(token: &str) -> std::result::Result<Complex64, String> {
    let t = token.trim();
    let bad = || format!("cannot read '{token}' as a complex number");
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    // the split is at the last sign that is neither leading nor part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Seventeen significant digits, so the text reads back bit for bit.
pub fn format_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{sign}{:.16e}i", z.re, z.im.abs())
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty matrix file".into(),
    })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("expected the dimension, found '{header}'"),
    })?;
    if n == 0 {
        return Err(Error::Parse {
            line,
            msg: "dimension must be positive".into(),
        });
    }
    let mut rows = Vec::with_capacity(n);
    for (line, text) in lines {
        if rows.len() == n {
            return Err(Error::Parse {
                line,
                msg: format!("more than {n} rows"),
            });
        }
        let row = text
            .split_whitespace()
            .map(parse_complex)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|msg| Error::Parse { line, msg })?;
        if row.len() != n {
            return Err(Error::Parse {
                line,
                msg: format!("expected {n} entries, found {}", row.len()),
            });
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {n} rows, found {}", rows.len()),
        });
    }
    Matrix::from_rows(rows)
}

pub fn format_matrix(m: &Matrix) -> String {
    let mut out = format!("{}\n", m.dim());
    for r in 0..m.dim() {
        let row: Vec<String> = (0..m.dim()).map(|c| format_complex(m[(r, c)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
