//! The `.alg` text format and the coefficient-expression grammar.
//!
//! ```text
//! # the 2-torus
//! dimension: 2
//! basis:
//!   1 0
//!   a 1
//!   b 1
//!   ab 2
//! unit: 1
//! orientation: ab
//! products:
//!   a*b = ab
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::{zero_vec, Scalar};
use crate::galg::{BasisElement, GradedAlgebra};

const RESERVED: &[char] = &['*', '+', '-', '/', '=', ',', ';', ':', '#', '(', ')', '[', ']'];

pub fn is_valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c))
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses `p`, `-p` or `p/q` with `q ≠ 0`.
pub fn parse_scalar(s: &str) -> std::result::Result<Scalar, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p, q),
        None => (s, "1"),
    };
    let parse = |t: &str, signed: bool| {
        let t = t.trim();
        let digits = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
        if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("malformed coefficient '{s}'"));
        }
        t.parse::<BigInt>().map_err(|_| format!("malformed coefficient '{s}'"))
    };
    let (p, q) = (parse(num, true)?, parse(den, false)?);
    if q.is_zero() {
        return Err(format!("zero denominator in '{s}'"));
    }
    Ok(Scalar::new(p, q))
}

/// Parses a rational linear combination such as `ab`, `2*x - 1/3*y` or `0`.
pub fn parse_expr(s: &str, lookup: impl Fn(&str) -> Option<usize>, dim: usize) -> std::result::Result<Vec<Scalar>, String> {
    let mut out = zero_vec(dim);
    let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if text.is_empty() {
        return Err("empty expression".into());
    }
    if text == "0" {
        return Ok(out);
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes: Vec<(usize, char)> = text.char_indices().collect();
    for (k, &(pos, c)) in bytes.iter().enumerate() {
        // A sign right after '/' belongs to the coefficient and is rejected there.
        let after_slash = k > 0 && bytes[k - 1].1 == '/';
        if (c == '+' || c == '-') && pos > 0 && !after_slash {
            terms.push(&text[start..pos]);
            start = pos;
        }
    }
    terms.push(&text[start..]);
    for term in terms {
        let (negative, body) = match term.chars().next() {
            Some('-') => (true, &term[1..]),
            Some('+') => (false, &term[1..]),
            _ => (false, term),
        };
        if body.is_empty() {
            return Err(format!("dangling sign in '{s}'"));
        }
        let (coeff, name) = match body.split_once('*') {
            Some((c, n)) => (parse_scalar(c)?, n),
            None => (Scalar::one(), body),
        };
        if name.contains('*') {
            return Err(format!("products are not evaluated in expressions: '{body}'"));
        }
        let idx = lookup(name).ok_or_else(|| format!("unknown basis element '{name}'"))?;
        let c = if negative { -coeff } else { coeff };
        out[idx] += c;
    }
    Ok(out)
}

/// Parses an expression against the basis of an algebra.
pub fn parse_expr_in(a: &GradedAlgebra, s: &str) -> Result<Vec<Scalar>> {
    parse_expr(s, |n| a.index_of(n), a.dim()).map_err(Error::Input)
}

/// Formats a vector so that `parse_expr` reads it back.
pub fn format_expr(a: &GradedAlgebra, v: &[Scalar]) -> String {
    a.format_vector(v)
}

#[derive(PartialEq)]
enum Section {
    None,
    Basis,
    Products,
}

/// Parses an algebra from `.alg` text; `first_line` offsets reported line numbers.
pub fn parse_algebra_at(text: &str, first_line: usize) -> Result<GradedAlgebra> {
    let mut dimension: Option<(u32, usize)> = None;
    let mut basis: Vec<BasisElement> = Vec::new();
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut unit: Option<(String, usize)> = None;
    let mut orientation: Option<(String, usize)> = None;
    let mut raw_products: Vec<(usize, String, String, String)> = Vec::new();
    let mut section = Section::None;

    for (k, raw) in text.lines().enumerate() {
        let line_no = first_line + k;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once(':') {
            let value = value.trim();
            section = Section::None;
            match key.trim() {
                "dimension" => {
                    if dimension.is_some() {
                        return Err(perr(line_no, "duplicate 'dimension'"));
                    }
                    let n = value.parse::<u32>().map_err(|_| perr(line_no, format!("bad dimension '{value}'")))?;
                    dimension = Some((n, line_no));
                }
                "basis" => {
                    if !basis.is_empty() {
                        return Err(perr(line_no, "duplicate 'basis' section"));
                    }
                    section = Section::Basis;
                }
                "products" => section = Section::Products,
                "unit" => {
                    if unit.is_some() {
                        return Err(perr(line_no, "duplicate 'unit'"));
                    }
                    unit = Some((value.to_string(), line_no));
                }
                "orientation" => {
                    if orientation.is_some() {
                        return Err(perr(line_no, "duplicate 'orientation'"));
                    }
                    orientation = Some((value.to_string(), line_no));
                }
                other => return Err(perr(line_no, format!("unknown key '{other}'"))),
            }
            if matches!(section, Section::Basis | Section::Products) && !value.is_empty() {
                return Err(perr(line_no, "section entries go on the following lines"));
            }
            continue;
        }
        match section {
            Section::Basis => {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(perr(line_no, "basis lines are 'name degree'"));
                }
                if !is_valid_name(parts[0]) {
                    return Err(perr(line_no, format!("invalid name '{}'", parts[0])));
                }
                let d = parts[1]
                    .parse::<u32>()
                    .map_err(|_| perr(line_no, format!("bad degree '{}'", parts[1])))?;
                if names.insert(parts[0].to_string(), basis.len()).is_some() {
                    return Err(perr(line_no, format!("duplicate basis name '{}'", parts[0])));
                }
                basis.push(BasisElement::new(parts[0], d));
            }
            Section::Products => {
                let (lhs, rhs) = line
                    .split_once('=')
                    .ok_or_else(|| perr(line_no, "product lines are 'a*b = expression'"))?;
                let (a, b) = lhs
                    .split_once('*')
                    .ok_or_else(|| perr(line_no, "product lines are 'a*b = expression'"))?;
                raw_products.push((line_no, a.trim().to_string(), b.trim().to_string(), rhs.trim().to_string()));
            }
            Section::None => return Err(perr(line_no, format!("unexpected line '{line}'"))),
        }
    }

    let last = first_line + text.lines().count().saturating_sub(1);
    let (n, _) = dimension.ok_or_else(|| perr(last, "missing 'dimension'"))?;
    if basis.is_empty() {
        return Err(perr(last, "missing or empty 'basis' section"));
    }
    let lookup = |name: &str, line: usize| names.get(name).copied().ok_or_else(|| perr(line, format!("unknown name '{name}'")));
    let (uname, uline) = unit.ok_or_else(|| perr(last, "missing 'unit'"))?;
    let unit_idx = lookup(&uname, uline)?;
    let orient_idx = match orientation {
        Some((o, line)) => Some(lookup(&o, line)?),
        None => None,
    };
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut products = Vec::new();
    for (line, a, b, rhs) in raw_products {
        let (i, j) = (lookup(&a, line)?, lookup(&b, line)?);
        if i > j {
            return Err(perr(line, format!("list '{b}*{a}' instead: factors must follow basis order")));
        }
        if let Some(prev) = seen.insert((i, j), line) {
            return Err(perr(line, format!("duplicate product {a}*{b} (first on line {prev})")));
        }
        let v = parse_expr(&rhs, |s| names.get(s).copied(), basis.len()).map_err(|m| perr(line, m))?;
        products.push(((i, j), v));
    }
    GradedAlgebra::new(n, basis, unit_idx, orient_idx, products).map_err(|e| match e {
        Error::Input(m) => perr(last, m),
        other => other,
    })
}

pub fn parse_algebra(text: &str) -> Result<GradedAlgebra> {
    parse_algebra_at(text, 1)
}

/// Writes an algebra in `.alg` form. Unit products equal to the identity are implicit.
pub fn serialize_algebra(a: &GradedAlgebra) -> Result<String> {
    if let Some(bad) = a.basis().iter().find(|b| !is_valid_name(&b.name)) {
        return Err(Error::Input(format!("name '{}' cannot be written in the text format", bad.name)));
    }
    let mut out = String::new();
    let _ = writeln!(out, "dimension: {}", a.formal_dimension());
    out.push_str("basis:\n");
    for b in a.basis() {
        let _ = writeln!(out, "  {} {}", b.name, b.degree);
    }
    let _ = writeln!(out, "unit: {}", a.name(a.unit()));
    if let Some(o) = a.orientation() {
        let _ = writeln!(out, "orientation: {}", a.name(o));
    }
    out.push_str("products:\n");
    let u = a.unit();
    for i in 0..a.dim() {
        for j in i..a.dim() {
            let v = a.product_basis(i, j);
            let implicit = if i == u {
                Some(j)
            } else if j == u {
                Some(i)
            } else {
                None
            };
            let skip = match implicit {
                Some(k) => v.iter().enumerate().all(|(t, c)| if t == k { c.is_one() } else { c.is_zero() }),
                None => v.iter().all(Zero::is_zero),
            };
            if !skip {
                let _ = writeln!(out, "  {}*{} = {}", a.name(i), a.name(j), format_expr(a, &v));
            }
        }
    }
    Ok(out)
}
