//! Text formats for coefficient tables and spectra.
//!
//! A table has one line per bit-string, `b re [im]`. A spectrum has a
//! `global re im` line and one `c re im` line per nonzero `c`. Blank lines
//! and `#` comments are ignored; entries may come in any order.

use std::fmt::Write as _;

use num_complex::Complex64 as C64;

use super::{CoeffTable, FourierError, GadgetForm, MAX_QUBITS};
use crate::bits::BitString;

fn err(line: usize, msg: impl Into<String>) -> FourierError {
    FourierError::Parse { line, msg: msg.into() }
}

fn parse_value(fields: &[&str], line: usize) -> Result<C64, FourierError> {
    let num = |s: &str| s.parse::<f64>().map_err(|_| err(line, format!("bad number '{s}'")));
    let v = match fields {
        [re] => C64::new(num(re)?, 0.0),
        [re, im] => C64::new(num(re)?, num(im)?),
        _ => return Err(err(line, "expected a real part and an optional imaginary part")),
    };
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(err(line, "value is not finite"));
    }
    Ok(v)
}

/// Parse `(key, value)` entries, returning them with their line numbers.
fn entries(text: &str) -> Result<Vec<(usize, String, C64)>, FourierError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        let value = parse_value(&fields[1..], line)?;
        out.push((line, fields[0].to_string(), value));
    }
    Ok(out)
}

fn bits(key: &str, n: usize, line: usize) -> Result<BitString, FourierError> {
    let b: BitString = key.parse().map_err(|_| err(line, format!("bad bit-string '{key}'")))?;
    if b.len() != n {
        return Err(err(line, format!("bit-string '{key}' has length {}, expected {n}", b.len())));
    }
    Ok(b)
}

fn width(key: &str, line: usize) -> Result<usize, FourierError> {
    let n = key.len();
    if n == 0 || n > MAX_QUBITS {
        return Err(err(line, format!("bit-string length {n} out of range 1..={MAX_QUBITS}")));
    }
    Ok(n)
}

pub fn parse_table(text: &str) -> Result<CoeffTable, FourierError> {
    let es = entries(text)?;
    let Some((line, key, _)) = es.first() else {
        return Err(err(1, "empty table"));
    };
    let n = width(key, *line)?;
    let mut alpha = vec![None; 1 << n];
    for (line, key, v) in &es {
        let b = bits(key, n, *line)?;
        if alpha[b.index()].replace(*v).is_some() {
            return Err(err(*line, format!("duplicate entry for {b}")));
        }
    }
    if let Some(missing) = alpha.iter().position(Option::is_none) {
        return Err(err(es.last().unwrap().0, format!("missing entry for {}", BitString::new(missing as u64, n))));
    }
    CoeffTable::new(alpha.into_iter().map(Option::unwrap).collect())
}

pub fn parse_spectrum(text: &str) -> Result<GadgetForm, FourierError> {
    let es = entries(text)?;
    let Some((line, key, _)) = es.iter().find(|(_, k, _)| k != "global") else {
        return Err(err(1, "empty spectrum"));
    };
    let n = width(key, *line)?;
    let mut gf = GadgetForm::zeros(n);
    let mut seen = vec![false; 1 << n];
    let mut global = None;
    for (line, key, v) in &es {
        if key == "global" {
            if global.replace(*v).is_some() {
                return Err(err(*line, "duplicate global line"));
            }
            continue;
        }
        let c = bits(key, n, *line)?;
        if c.is_zero() {
            return Err(err(*line, "the zero parity belongs on the global line"));
        }
        if std::mem::replace(&mut seen[c.index()], true) {
            return Err(err(*line, format!("duplicate entry for {c}")));
        }
        gf.set(&c, *v);
    }
    gf.set_global_phase(global.unwrap_or_default());
    Ok(gf)
}

pub fn format_table(ct: &CoeffTable) -> String {
    let mut s = String::new();
    for (b, a) in ct.iter() {
        writeln!(s, "{b} {} {}", a.re + 0.0, a.im + 0.0).unwrap();
    }
    s
}

pub fn format_spectrum(gf: &GadgetForm) -> String {
    let g = gf.global_phase();
    let mut s = format!("global {} {}\n", g.re + 0.0, g.im + 0.0);
    for (c, t) in gf.iter() {
        writeln!(s, "{c} {} {}", t.re + 0.0, t.im + 0.0).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::{forward, inverse};

    #[test]
    fn table_round_trip() {
        let text = "# cz\n00 0\n01 0\n10 0\n11 3.141592653589793\n";
        let ct = parse_table(text).unwrap();
        let again = parse_table(&format_table(&ct)).unwrap();
        assert_eq!(ct, again);
        let gf = forward(&ct);
        assert_eq!(parse_spectrum(&format_spectrum(&gf)).unwrap(), gf);
        assert_eq!(format_table(&inverse(&gf)), format_table(&ct));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_table("00 0\n01 x\n").unwrap_err();
        assert_eq!(e, FourierError::Parse { line: 2, msg: "bad number 'x'".into() });
        let e = parse_table("00 0\n01 0\n10 0\n").unwrap_err();
        assert!(matches!(e, FourierError::Parse { line: 3, .. }));
        let e = parse_table("00 0\n0 1\n").unwrap_err();
        assert!(matches!(e, FourierError::Parse { line: 2, .. }));
        let e = parse_spectrum("global 0 0\n00 1 0\n").unwrap_err();
        assert!(matches!(e, FourierError::Parse { line: 2, .. }));
    }
}
