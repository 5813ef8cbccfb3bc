//! Algebra file grammar.
//!
//! ```text
//! # comment
//! field p=<int> k=<int> [poly=<c0,...,ck>]
//! gens <name> <name> ...
//! bracket <name> <name> : <term> [+ <term>]...
//! ```
//!
//! A term is `<coeff>*<name>` or `<name>`. A coefficient is an integer in
//! `[0, p)` or, over an extension field, `[c0,...,c_{k-1}]` (constant first).
//! Declarations appear in the order shown; any number of `bracket` lines.

use std::collections::HashMap;
use std::fmt;

use commfib_core::{make_field, FieldConfig, FieldElement, FullLieAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownGenerator(String),
    DuplicateGenerator(String),
    DuplicateBracket(String, String),
    SelfBracket(String),
    CoefficientOutOfRange(String),
    Field(commfib_core::Error),
}

/// A diagnostic tied to a 1-based line number (0 when the file ends early).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: ", self.line)?;
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::UnknownGenerator(g) => write!(f, "unknown generator `{g}`"),
            ParseErrorKind::DuplicateGenerator(g) => write!(f, "generator `{g}` declared twice"),
            ParseErrorKind::DuplicateBracket(a, b) => write!(f, "bracket [{a}, {b}] given twice"),
            ParseErrorKind::SelfBracket(a) => write!(f, "self-bracket [{a}, {a}] is always zero"),
            ParseErrorKind::CoefficientOutOfRange(c) => write!(f, "coefficient {c} out of range"),
            ParseErrorKind::Field(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(line: usize, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { line, kind })
}

fn syntax<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    err(line, ParseErrorKind::Syntax(msg.into()))
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

fn parse_uint(line: usize, s: &str) -> Result<u64, ParseError> {
    s.parse().or_else(|_| syntax(line, format!("expected a non-negative integer, found `{s}`")))
}

fn parse_field(line: usize, rest: &str) -> Result<FieldConfig, ParseError> {
    let mut p = None;
    let mut k = None;
    let mut poly = None;
    for tok in rest.split_whitespace() {
        let Some((key, value)) = tok.split_once('=') else {
            return syntax(line, format!("expected key=value, found `{tok}`"));
        };
        let slot = match key {
            "p" => &mut p,
            "k" => &mut k,
            "poly" => &mut poly,
            _ => return syntax(line, format!("unknown field parameter `{key}`")),
        };
        if slot.replace(value).is_some() {
            return syntax(line, format!("field parameter `{key}` given twice"));
        }
    }
    let (Some(p), Some(k)) = (p, k) else {
        return syntax(line, "field declaration needs p=<int> and k=<int>");
    };
    let p = parse_uint(line, p)?;
    let k = parse_uint(line, k)?;
    let k = u32::try_from(k).or_else(|_| syntax(line, "extension degree too large"))?;
    let coeffs = poly
        .map(|s| {
            s.split(',')
                .map(|c| {
                    let c = parse_uint(line, c.trim())?;
                    if c >= p {
                        return err(line, ParseErrorKind::CoefficientOutOfRange(c.to_string()));
                    }
                    Ok(c as u32)
                })
                .collect::<Result<Vec<u32>, _>>()
        })
        .transpose()?;
    make_field(p, k, coeffs.as_deref()).map_err(|e| ParseError { line, kind: ParseErrorKind::Field(e) })
}

fn parse_coeff(line: usize, field: &FieldConfig, s: &str) -> Result<FieldElement, ParseError> {
    let p = field.p() as u64;
    if let Some(inner) = s.strip_prefix('[') {
        let Some(inner) = inner.strip_suffix(']') else {
            return syntax(line, format!("unterminated coefficient `{s}`"));
        };
        let coords = inner
            .split(',')
            .map(|c| {
                let v = parse_uint(line, c.trim())?;
                if v >= p {
                    return err(line, ParseErrorKind::CoefficientOutOfRange(s.to_string()));
                }
                Ok(v as u32)
            })
            .collect::<Result<Vec<u32>, _>>()?;
        if coords.len() != field.k() as usize {
            return syntax(line, format!("coefficient `{s}` needs {} entries", field.k()));
        }
        return field.from_coords(&coords).map_err(|e| ParseError { line, kind: ParseErrorKind::Field(e) });
    }
    let v = parse_uint(line, s)?;
    if v >= p {
        return err(line, ParseErrorKind::CoefficientOutOfRange(s.to_string()));
    }
    Ok(field.from_prime(v as i64))
}

/// Parses an algebra file. Only syntax and naming are checked here; Jacobi,
/// nilpotency and class are left to validation.
pub fn parse_algebra_file(text: &str) -> Result<FullLieAlgebra, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let last_line = text.lines().count();

    let Some((ln, first)) = lines.next() else {
        return syntax(last_line, "missing field declaration");
    };
    let Some(rest) = first.strip_prefix("field").filter(|r| r.is_empty() || r.starts_with(char::is_whitespace)) else {
        return syntax(ln, "expected `field p=<int> k=<int>`");
    };
    let field = parse_field(ln, rest)?;

    let Some((ln, second)) = lines.next() else {
        return syntax(last_line, "missing gens declaration");
    };
    let mut words = second.split_whitespace();
    if words.next() != Some("gens") {
        return syntax(ln, "expected `gens <name> ...`");
    }
    let names: Vec<String> = words.map(str::to_string).collect();
    if names.is_empty() {
        return syntax(ln, "gens needs at least one name");
    }
    let mut index = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if !valid_name(name) {
            return syntax(ln, format!("invalid generator name `{name}`"));
        }
        if index.insert(name.as_str(), i).is_some() {
            return err(ln, ParseErrorKind::DuplicateGenerator(name.clone()));
        }
    }
    let lookup = |ln: usize, name: &str| -> Result<usize, ParseError> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| ParseError { line: ln, kind: ParseErrorKind::UnknownGenerator(name.into()) })
    };

    let n = names.len();
    let mut seen = HashMap::new();
    let mut relations = Vec::new();
    for (ln, line) in lines {
        let Some(rest) = line.strip_prefix("bracket").filter(|r| r.starts_with(char::is_whitespace)) else {
            return syntax(ln, "expected `bracket <name> <name> : <terms>`");
        };
        let Some((lhs, rhs)) = rest.split_once(':') else {
            return syntax(ln, "missing `:` in bracket");
        };
        let pair: Vec<&str> = lhs.split_whitespace().collect();
        let [a, b] = pair[..] else {
            return syntax(ln, "bracket needs exactly two generators before `:`");
        };
        let (i, j) = (lookup(ln, a)?, lookup(ln, b)?);
        if i == j {
            return err(ln, ParseErrorKind::SelfBracket(a.into()));
        }
        if seen.insert((i.min(j), i.max(j)), ()).is_some() {
            return err(ln, ParseErrorKind::DuplicateBracket(a.into(), b.into()));
        }
        let mut value = vec![FieldElement::ZERO; n];
        for term in rhs.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return syntax(ln, "empty term");
            }
            let (coeff, name) = match term.rsplit_once('*') {
                Some((c, name)) => (parse_coeff(ln, &field, c.trim())?, name.trim()),
                None => (field.one(), term),
            };
            let m = lookup(ln, name)?;
            value[m] = field.add(value[m], coeff);
        }
        relations.push((i, j, value));
    }
    FullLieAlgebra::new(field, names, relations).map_err(|e| ParseError { line: 0, kind: ParseErrorKind::Field(e) })
}

/// Canonical text for an algebra: brackets with `i < j` in index order, terms
/// in generator order, unit coefficients omitted.
pub fn write_algebra_file(alg: &FullLieAlgebra) -> String {
    let f = alg.field();
    let mut out = format!("field p={} k={}", f.p(), f.k());
    if f.k() > 1 {
        let poly: Vec<String> = f.modulus().iter().map(u32::to_string).collect();
        out.push_str(&format!(" poly={}", poly.join(",")));
    }
    out.push('\n');
    out.push_str(&format!("gens {}\n", alg.names().join(" ")));
    for (i, j, value) in alg.relations() {
        let terms: Vec<String> = value
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, &c)| {
                let name = &alg.names()[m];
                if c == f.one() {
                    name.clone()
                } else {
                    format!("{}*{}", f.format(c), name)
                }
            })
            .collect();
        out.push_str(&format!("bracket {} {} : {}\n", alg.names()[i], alg.names()[j], terms.join(" + ")));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use commfib_core::builtin;

    const HEIS: &str = "field p=3 k=1\ngens x1 x2 y1\nbracket x1 x2 : y1\n";

    #[test]
    fn heisenberg_file() {
        let alg = parse_algebra_file(HEIS).unwrap();
        let f = make_field(3, 1, None).unwrap();
        let h = builtin("heisenberg", &f, None).unwrap();
        assert_eq!(alg.names(), h.names());
        assert_eq!(write_algebra_file(&alg), write_algebra_file(&h));
        assert_eq!(write_algebra_file(&alg), HEIS);
    }

    #[test]
    fn quadric8_file_matches_builtin() {
        let text = "# P^3 quadric\nfield p=5 k=1\ngens x1 x2 x3 x4 y1 y2 y3 y4\n\
                    bracket x1 x3 : y1\nbracket x1 x4 : y2\nbracket x2 x3 : y3   # comment\nbracket x2 x4 : y4\n";
        let alg = parse_algebra_file(text).unwrap();
        let f = make_field(5, 1, None).unwrap();
        let q8 = builtin("quadric8", &f, None).unwrap();
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(alg.basis_bracket(i, j), q8.basis_bracket(i, j));
            }
        }
    }

    #[test]
    fn coefficients_and_antisymmetric_order() {
        let text = "field p=5 k=1\ngens a b c d\nbracket b a : 2*c + d + 3*d\n";
        let alg = parse_algebra_file(text).unwrap();
        let f = alg.field().clone();
        assert_eq!(alg.basis_bracket(1, 0), &[f.zero(), f.zero(), f.from_prime(2), f.from_prime(4)]);
        assert_eq!(alg.basis_bracket(0, 1), &[f.zero(), f.zero(), f.from_prime(3), f.from_prime(1)]);
        assert_eq!(write_algebra_file(&alg), "field p=5 k=1\ngens a b c d\nbracket a b : 3*c + d\n");
    }

    #[test]
    fn extension_field_round_trip() {
        let text = "field p=3 k=2 poly=1,0,1\ngens x1 x2 y1\nbracket x1 x2 : [0,1]*y1\n";
        let alg = parse_algebra_file(text).unwrap();
        assert_eq!(alg.field().q(), 9);
        assert_eq!(write_algebra_file(&alg), text);
        let again = parse_algebra_file(&write_algebra_file(&alg)).unwrap();
        assert_eq!(write_algebra_file(&again), text);
    }

    #[test]
    fn diagnostics() {
        let kind = |t: &str| parse_algebra_file(t).unwrap_err();
        let e = kind("field p=3 k=1\ngens x1 x2 y1\nbracket x1 x1 : y1\n");
        assert_eq!(e, ParseError { line: 3, kind: ParseErrorKind::SelfBracket("x1".into()) });
        let e = kind("field p=3 k=1\ngens x1 x2 y1\nbracket x1 x2 : z\n");
        assert_eq!(e.kind, ParseErrorKind::UnknownGenerator("z".into()));
        let e = kind("field p=3 k=1\ngens x1 x2 y1\n\nbracket x1 x2 : y1\nbracket x2 x1 : y1\n");
        assert_eq!(e.line, 5);
        assert!(matches!(e.kind, ParseErrorKind::DuplicateBracket(..)));
        let e = kind("field p=3 k=1\ngens x1 x2 y1\nbracket x1 x2 : 3*y1\n");
        assert_eq!(e.kind, ParseErrorKind::CoefficientOutOfRange("3".into()));
        let e = kind("field p=3 k=2\ngens x1 x2 y1\nbracket x1 x2 : [0,3]*y1\n");
        assert!(matches!(e.kind, ParseErrorKind::CoefficientOutOfRange(_)));
        assert_eq!(kind("gens x1\n").line, 1);
        assert!(matches!(kind("field p=4 k=1\ngens x\n").kind, ParseErrorKind::Field(_)));
        assert_eq!(kind("field p=3 k=1\n").kind, ParseErrorKind::Syntax("missing gens declaration".into()));
        assert!(matches!(kind("field p=3 k=1\ngens x x\n").kind, ParseErrorKind::DuplicateGenerator(_)));
        assert!(matches!(kind(&format!("{HEIS}gens z\n")).kind, ParseErrorKind::Syntax(_)));
        assert_eq!(kind("field p=3 k=1\ngens a b\nbracket a b y1\n").line, 3);
        assert_eq!(kind("").line, 0);
    }
}
