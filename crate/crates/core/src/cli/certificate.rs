//! Text form of an A∞ certificate and its independent re-verification.
//!
//! ```text
//! [source]
//! <algebra>
//! [target]
//! <algebra>
//! differential:
//!   θ = x
//! [f1]
//!   x = x
//! [f2]
//!   x,x = θx
//! [residuals]
//!   p=1 tuples=4 nonzero=0
//! ```

use std::fmt::Write as _;

use super::format::{is_valid_name, parse_algebra_at, parse_expr, serialize_algebra};
use crate::ainfty::{certify, AInfinityCertificate, MorphismTables, ResidualSummary};
use crate::error::{Error, Result};
use crate::exactla::{is_zero_vec, zero_vec, Matrix};
use crate::galg::{BasisElement, GradedAlgebra};

/// A copy of `a` whose names all survive the text format; returns renamed pairs.
fn writable(a: &GradedAlgebra) -> Result<(GradedAlgebra, Vec<(String, String)>)> {
    let mut renamed = Vec::new();
    let mut basis: Vec<BasisElement> = Vec::with_capacity(a.dim());
    for (k, b) in a.basis().iter().enumerate() {
        if is_valid_name(&b.name) {
            basis.push(b.clone());
            continue;
        }
        let mut name = format!("h{k}");
        while a.index_of(&name).is_some() || basis.iter().any(|e| e.name == name) {
            name.push('_');
        }
        renamed.push((name.clone(), b.name.clone()));
        basis.push(BasisElement::new(name, b.degree));
    }
    if renamed.is_empty() {
        return Ok((a.clone(), renamed));
    }
    let mut products = Vec::new();
    for i in 0..a.dim() {
        for j in i..a.dim() {
            products.push(((i, j), a.product_basis(i, j)));
        }
    }
    Ok((GradedAlgebra::new(a.formal_dimension(), basis, a.unit(), a.orientation(), products)?, renamed))
}

fn tuple_names(a: &GradedAlgebra, t: &[usize]) -> String {
    t.iter().map(|&i| a.name(i)).collect::<Vec<_>>().join(",")
}

pub fn serialize_certificate(c: &AInfinityCertificate) -> Result<String> {
    let (src, renamed) = writable(&c.source)?;
    let (tgt, _) = writable(&c.target)?;
    let mut out = String::new();
    out.push_str("# A-infinity morphism f1, f2 (higher components zero) from a cohomology ring to a CDGA\n");
    out.push_str("[source]\n");
    for (new, old) in &renamed {
        let _ = writeln!(out, "# {new} stands for {old}");
    }
    out.push_str(&serialize_algebra(&src)?);
    out.push_str("[target]\n");
    out.push_str(&serialize_algebra(&tgt)?);
    out.push_str("differential:\n");
    for j in 0..tgt.dim() {
        let col = c.differential.column(j);
        if !is_zero_vec(&col) {
            let _ = writeln!(out, "  {} = {}", tgt.name(j), tgt.format_vector(&col));
        }
    }
    out.push_str("[f1]\n");
    for (i, v) in c.maps.f1.iter().enumerate() {
        let _ = writeln!(out, "  {} = {}", src.name(i), tgt.format_vector(v));
    }
    out.push_str("[f2]\n");
    let n = src.dim();
    for (k, v) in c.maps.f2.iter().enumerate() {
        if !is_zero_vec(v) {
            let _ = writeln!(out, "  {},{} = {}", src.name(k / n), src.name(k % n), tgt.format_vector(v));
        }
    }
    out.push_str("[residuals]\n");
    for r in &c.residuals {
        let _ = writeln!(out, "  p={} tuples={} nonzero={}", r.p, r.tuples_checked, r.nonzero.len());
        for (t, v) in &r.nonzero {
            let _ = writeln!(out, "  p={} {} = {}", r.p, tuple_names(&src, t), tgt.format_vector(v));
        }
    }
    Ok(out)
}

/// A certificate as read from text, before any checking.
#[derive(Clone, Debug)]
pub struct ParsedCertificate {
    pub source: GradedAlgebra,
    pub target: GradedAlgebra,
    pub differential: Matrix,
    pub maps: MorphismTables,
    pub recorded: Vec<ResidualSummary>,
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn split_assignment(line: &str, line_no: usize) -> Result<(&str, &str)> {
    line.split_once('=')
        .map(|(l, r)| (l.trim(), r.trim()))
        .ok_or_else(|| perr(line_no, "expected 'lhs = expression'"))
}

fn lookup_tuple(a: &GradedAlgebra, s: &str, line: usize) -> Result<Vec<usize>> {
    s.split(',')
        .map(|n| a.index_of(n.trim()).ok_or_else(|| perr(line, format!("unknown source element '{}'", n.trim()))))
        .collect()
}

pub fn parse_certificate(text: &str) -> Result<ParsedCertificate> {
    let lines: Vec<&str> = text.lines().collect();
    let mut starts: Vec<(&str, usize)> = Vec::new();
    for (k, l) in lines.iter().enumerate() {
        let t = l.trim();
        if t.starts_with('[') && t.ends_with(']') {
            starts.push((t, k));
        }
    }
    let names = ["[source]", "[target]", "[f1]", "[f2]", "[residuals]"];
    if starts.iter().map(|s| s.0).collect::<Vec<_>>() != names {
        return Err(perr(starts.first().map_or(1, |s| s.1 + 1), "expected sections [source] [target] [f1] [f2] [residuals] in order"));
    }
    let body = |i: usize| {
        let from = starts[i].1 + 1;
        let to = starts.get(i + 1).map_or(lines.len(), |s| s.1);
        (from, &lines[from..to])
    };
    let (src_from, src_lines) = body(0);
    let source = parse_algebra_at(&src_lines.join("\n"), src_from + 1)?;

    let (tgt_from, tgt_lines) = body(1);
    let split = tgt_lines
        .iter()
        .position(|l| l.trim() == "differential:")
        .ok_or_else(|| perr(tgt_from, "target section needs a 'differential:' block"))?;
    let target = parse_algebra_at(&tgt_lines[..split].join("\n"), tgt_from + 1)?;
    let tn = target.dim();
    let expr = |s: &str, line: usize| parse_expr(s, |n| target.index_of(n), tn).map_err(|m| perr(line, m));
    let content = |l: &str| l.split('#').next().unwrap_or("").trim().to_string();

    let mut differential = Matrix::zeros(tn, tn);
    for (k, l) in tgt_lines[split + 1..].iter().enumerate() {
        let line_no = tgt_from + split + k + 2;
        let l = content(l);
        if l.is_empty() {
            continue;
        }
        let (lhs, rhs) = split_assignment(&l, line_no)?;
        let j = target.index_of(lhs).ok_or_else(|| perr(line_no, format!("unknown target element '{lhs}'")))?;
        for (r, c) in expr(rhs, line_no)?.into_iter().enumerate() {
            differential[(r, j)] = c;
        }
    }

    let sn = source.dim();
    let mut f1 = vec![zero_vec(tn); sn];
    let (f1_from, f1_lines) = body(2);
    for (k, l) in f1_lines.iter().enumerate() {
        let line_no = f1_from + k + 1;
        let l = content(l);
        if l.is_empty() {
            continue;
        }
        let (lhs, rhs) = split_assignment(&l, line_no)?;
        let i = lookup_tuple(&source, lhs, line_no)?;
        if i.len() != 1 {
            return Err(perr(line_no, "f1 entries take one argument"));
        }
        f1[i[0]] = expr(rhs, line_no)?;
    }

    let mut f2 = vec![zero_vec(tn); sn * sn];
    let (f2_from, f2_lines) = body(3);
    for (k, l) in f2_lines.iter().enumerate() {
        let line_no = f2_from + k + 1;
        let l = content(l);
        if l.is_empty() {
            continue;
        }
        let (lhs, rhs) = split_assignment(&l, line_no)?;
        let t = lookup_tuple(&source, lhs, line_no)?;
        if t.len() != 2 {
            return Err(perr(line_no, "f2 entries take two arguments"));
        }
        f2[t[0] * sn + t[1]] = expr(rhs, line_no)?;
    }

    let mut recorded: Vec<ResidualSummary> = Vec::new();
    let (res_from, res_lines) = body(4);
    for (k, l) in res_lines.iter().enumerate() {
        let line_no = res_from + k + 1;
        let l = content(l);
        if l.is_empty() {
            continue;
        }
        let (head, rest) = l.split_once(' ').ok_or_else(|| perr(line_no, "malformed residual line"))?;
        let p: usize = head
            .strip_prefix("p=")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| perr(line_no, "residual lines start with p=<arity>"))?;
        if rest.contains('=') && !rest.starts_with("tuples=") {
            let (lhs, rhs) = split_assignment(rest, line_no)?;
            let t = lookup_tuple(&source, lhs, line_no)?;
            let last = recorded.last_mut().filter(|r| r.p == p).ok_or_else(|| perr(line_no, "residual entry before its summary"))?;
            last.nonzero.push((t, expr(rhs, line_no)?));
        } else {
            let mut tuples = None;
            for field in rest.split_whitespace() {
                if let Some(v) = field.strip_prefix("tuples=") {
                    tuples = v.parse().ok();
                }
            }
            let tuples_checked = tuples.ok_or_else(|| perr(line_no, "summary needs tuples=<count>"))?;
            recorded.push(ResidualSummary { p, tuples_checked, nonzero: Vec::new() });
        }
    }
    Ok(ParsedCertificate { source, target, differential, maps: MorphismTables { f1, f2 }, recorded })
}

#[derive(Clone, Debug)]
pub struct Verification {
    pub certificate: AInfinityCertificate,
    pub recorded_consistent: bool,
}

impl Verification {
    pub fn valid(&self) -> bool {
        self.recorded_consistent && self.certificate.all_zero()
    }
}

/// Recomputes every residual from the tables alone.
pub fn verify_certificate(text: &str) -> Result<Verification> {
    let p = parse_certificate(text)?;
    if let Err(v) = p.source.validate() {
        return Err(Error::Input(format!("source algebra is invalid: {}", v[0])));
    }
    if !p.differential.mul(&p.differential).is_zero() {
        return Err(Error::Input("differential does not square to zero".into()));
    }
    let recorded = p.recorded;
    let certificate = certify(&p.source, &p.target, &p.differential, p.maps)?;
    let recorded_consistent = recorded == certificate.residuals;
    Ok(Verification { certificate, recorded_consistent })
}

/// Count of nonzero residual entries per arity, for reports.
pub fn residual_summary(c: &AInfinityCertificate) -> String {
    c.residuals
        .iter()
        .map(|r| format!("p={}:{}", r.p, r.nonzero.len()))
        .collect::<Vec<_>>()
        .join(" ")
}
