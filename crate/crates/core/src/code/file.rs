//! Code-definition files.
//!
//! Plain files start with a header `n k` followed by one Pauli string per
//! stabilizer generator. CSS files start with `css n`, list the rows of h1,
//! a `--` separator, then the rows of h2. Blank lines and `#` comments are
//! ignored.

use std::path::Path;

use crate::pauli::{BinaryVector, PauliVector};

use super::{css_split, CodeError, CssCode, StabilizerCode};

/// Built-in codes bundled with the library, by name.
pub const BUILTIN_CODES: &[(&str, &str)] = &[
    ("code422", include_str!("../../codes/code422.code")),
    ("steane713", include_str!("../../codes/steane713.code")),
    ("shor913", include_str!("../../codes/shor913.code")),
    ("rm1513", include_str!("../../codes/rm1513.code")),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN_CODES.iter().map(|(n, _)| *n).collect()
}

/// A parsed code, with its CSS structure when the file declared one.
#[derive(Debug, Clone)]
pub struct LoadedCode {
    pub name: String,
    pub code: StabilizerCode,
    pub css: Option<CssCode>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> CodeError {
    CodeError::Parse {
        line,
        msg: msg.into(),
    }
}

/// Parses the text of a code file.
pub fn parse_code(name: &str, text: &str) -> Result<LoadedCode, CodeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(hline, "header must be `n k` or `css n`"));
    }
    if fields[0] == "css" {
        let n: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(hline, "bad qubit count"))?;
        let mut h1 = Vec::new();
        let mut h2 = Vec::new();
        let mut seen_sep = false;
        for (ln, l) in lines {
            if l == "--" {
                if seen_sep {
                    return Err(parse_err(ln, "repeated `--` separator"));
                }
                seen_sep = true;
                continue;
            }
            let row: BinaryVector = l.parse().map_err(|e| parse_err(ln, format!("{e}")))?;
            if row.len() != n {
                return Err(parse_err(
                    ln,
                    format!("row has {} bits, expected {n}", row.len()),
                ));
            }
            if seen_sep {
                h2.push(row)
            } else {
                h1.push(row)
            }
        }
        if !seen_sep {
            return Err(parse_err(hline, "CSS file lacks the `--` separator"));
        }
        let css = css_split(&h1, &h2, n)?;
        Ok(LoadedCode {
            name: name.to_string(),
            code: css.base().clone(),
            css: Some(css),
        })
    } else {
        let n: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(hline, "bad qubit count"))?;
        let k: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(hline, "bad logical count"))?;
        let mut gens = Vec::new();
        for (ln, l) in lines {
            let g: PauliVector = l.parse().map_err(|e| parse_err(ln, format!("{e}")))?;
            if g.len() != n {
                return Err(parse_err(
                    ln,
                    format!("generator has length {}, expected {n}", g.len()),
                ));
            }
            gens.push(g);
        }
        if gens.len() + k != n {
            return Err(parse_err(
                hline,
                format!(
                    "{} generators do not give k = {k} on {n} qubits",
                    gens.len()
                ),
            ));
        }
        let code = StabilizerCode::new(gens)?;
        Ok(LoadedCode {
            name: name.to_string(),
            code,
            css: None,
        })
    }
}

/// Loads a built-in code by name, or a code file by path.
pub fn load_code(name_or_path: &str) -> Result<LoadedCode, CodeError> {
    if let Some((name, text)) = BUILTIN_CODES.iter().find(|(n, _)| *n == name_or_path) {
        return parse_code(name, text);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        return Err(CodeError::UnknownCode(name_or_path.to_string()));
    }
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(name_or_path);
    parse_code(name, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse() {
        let expect = [
            ("code422", 4, 2),
            ("steane713", 7, 1),
            ("shor913", 9, 1),
            ("rm1513", 15, 1),
        ];
        for (name, n, k) in expect {
            let c = load_code(name).unwrap();
            assert_eq!((c.code.n(), c.code.k()), (n, k), "{name}");
            assert!(c.css.is_some());
        }
    }

    #[test]
    fn plain_format() {
        let c = parse_code("five", "# perfect code\n5 1\nXZZXI\nIXZZX\nXIXZZ\nZXIXZ\n").unwrap();
        assert_eq!(c.code.k(), 1);
        assert!(c.css.is_none());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_code("x", "4 1\nXXXX\nZZZZ\n"),
            Err(CodeError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_code("x", "2 0\nXX\nZQ\n"),
            Err(CodeError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_code("x", "css 2\n11\n"),
            Err(CodeError::Parse { .. })
        ));
        assert!(matches!(parse_code("x", ""), Err(CodeError::Parse { .. })));
        assert!(matches!(
            load_code("no-such-code"),
            Err(CodeError::UnknownCode(_))
        ));
    }
}
