//! Command-line front end: argument parsing, file loading and report assembly.

pub mod certificate;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bmt::bm_tensor;
use crate::decide::{
    hard_lefschetz_check, hl_obstruction, s22_name, sphere_bundle_formality, utm_classify, BundleSpec,
    FormalityVerdict, HlVerdict, Outcome,
};
use crate::error::{Error, Result};
use crate::exactla::Scalar;
use crate::galg::{format_combination, GradedAlgebra};
use crate::gysin::GysinExtension;
use crate::sympow::product_kernel;

use self::certificate::{residual_summary, serialize_certificate, verify_certificate};
use self::format::{parse_algebra, parse_expr_in};
use self::report::{digest, Report};

#[derive(Debug, Parser)]
#[command(name = "bmt", version, about = "Formality of sphere bundles from the cohomology ring of the base")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an algebra file and check Poincaré duality.
    Check { file: PathBuf },
    /// Decide formality of the total space of an S^k-bundle.
    Formality(FormalityArgs),
    /// Dump the Bianchi–Massey tensor of a Gysin extension.
    BmTensor(TensorArgs),
    /// Classify the unit tangent bundle of the base.
    Utm { file: PathBuf },
    /// Test the reducible-Euler-class obstruction.
    Hl(HlArgs),
    /// Tabulate the hard Lefschetz maps of a degree-2 class.
    Lefschetz {
        file: PathBuf,
        #[arg(long)]
        omega: String,
    },
    /// Re-check a certificate file from its tables alone.
    CertifyVerify { certificate: PathBuf },
}

#[derive(Debug, Args)]
pub struct FormalityArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub sphere_dim: u32,
    /// Euler class as a combination of basis names, e.g. "2*x - y".
    #[arg(long)]
    pub euler: Option<String>,
    /// Attest that the base manifold is formal.
    #[arg(long)]
    pub base_formal: bool,
    /// Print the tensor in every degree, not only the decision degree.
    #[arg(long)]
    pub all_degrees: bool,
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random admissible choices to re-derive the tensor with.
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    /// Include wall-clock timing (makes the report non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub sphere_dim: u32,
    #[arg(long)]
    pub euler: String,
    #[arg(long)]
    pub all_degrees: bool,
}

#[derive(Debug, Args)]
pub struct HlArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub omega: String,
    /// Half the degree of ω.
    #[arg(long)]
    pub r: u32,
    /// Pairs "x1,y1;x2,y2" with ω = Σ x_i y_i.
    #[arg(long)]
    pub decomposition: Option<String>,
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Execution { code: 2, stdout: String::new(), stderr: text }
            } else {
                Execution { code: 0, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn execute(command: &Command) -> Execution {
    let result = match command {
        Command::Check { file } => check(file),
        Command::Formality(a) => formality(a),
        Command::BmTensor(a) => tensor(a),
        Command::Utm { file } => utm(file),
        Command::Hl(a) => hl(a),
        Command::Lefschetz { file, omega } => lefschetz(file, omega),
        Command::CertifyVerify { certificate } => certify_verify(certificate),
    };
    match result {
        Ok((code, report)) => Execution { code, stdout: report.render(), stderr: String::new() },
        Err(e) => Execution { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(GradedAlgebra, String)> {
    let text = read(path)?;
    let alg = parse_algebra(&text).map_err(|e| match e {
        Error::Parse { line, message } => Error::Input(format!("{}:{line}: {message}", path.display())),
        other => other,
    })?;
    Ok((alg, text))
}

fn header(command: &str, path: &Path, text: &str, args: &str) -> Report {
    let mut r = Report::new(command);
    r.push("input", path.display());
    r.push("digest", digest(&[command.as_bytes(), text.as_bytes(), args.as_bytes()]));
    r
}

fn betti(a: &GradedAlgebra) -> String {
    (0..=a.max_degree()).map(|d| a.degree_dim(d).to_string()).collect::<Vec<_>>().join(" ")
}

fn check(file: &Path) -> Result<(i32, Report)> {
    let (a, text) = load(file)?;
    let mut r = header("check", file, &text, "");
    r.push("dimension", a.formal_dimension());
    r.push("basis-size", a.dim());
    r.push("betti", betti(&a));
    let mut ok = true;
    if let Err(violations) = a.validate() {
        ok = false;
        for v in violations {
            r.push("violation", v);
        }
    } else {
        r.push("euler-characteristic", a.euler_characteristic());
        match a.poincare_check() {
            Ok(_) => r.push("poincare", "ok"),
            Err(Error::Input(_)) if a.orientation().is_none() => r.push("poincare", "skipped (no orientation)"),
            Err(Error::NotPoincare { degree }) => {
                ok = false;
                r.push("poincare", format!("pairing degenerate in degree {degree}"));
            }
            Err(e) => return Err(e),
        }
    }
    r.push("verdict", if ok { "ok" } else { "invalid" });
    Ok((if ok { 0 } else { 2 }, r))
}

fn push_verdict(r: &mut Report, v: &FormalityVerdict) {
    r.push("verdict", v.outcome);
    r.push("reason", v.reason);
    if let Some(n) = v.total_dimension {
        r.push("total-dimension", n);
    }
    if let Some(w) = &v.witness {
        r.push("witness-degree", w.degree);
        r.push("witness", &w.element_label);
        r.push("witness-value", &w.value_label);
    }
    for f in &v.findings {
        r.push("finding", f);
    }
}

fn code_of(outcome: Outcome) -> i32 {
    match outcome {
        Outcome::Formal => 0,
        Outcome::NonFormal => 1,
    }
}

fn formality(a: &FormalityArgs) -> Result<(i32, Report)> {
    let start = Instant::now();
    let (base, text) = load(&a.file)?;
    let args = format!(
        "k={} euler={:?} base-formal={} seed={} trials={}",
        a.sphere_dim, a.euler, a.base_formal, a.seed, a.trials
    );
    let mut r = header("formality", &a.file, &text, &args);
    let euler = a.euler.as_deref().map(|e| parse_expr_in(&base, e)).transpose()?;
    r.push("sphere-dim", a.sphere_dim);
    if let Some(e) = &euler {
        r.push("euler", base.format_vector(e));
    }
    let spec = BundleSpec {
        base,
        sphere_dim: a.sphere_dim,
        euler,
        base_formal_attested: a.base_formal,
        trials: a.trials,
        seed: a.seed,
    };
    let v = sphere_bundle_formality(&spec)?;
    push_verdict(&mut r, &v);
    if let Some(c) = &v.choice_report {
        r.push(
            "choice-independence",
            format!("identical over {} random choices ({} values compared)", c.trials, c.entries_compared),
        );
    }
    if a.all_degrees {
        if let Some(t) = &v.tensor {
            // Rebuild the naming context; cheap next to the tensor itself.
            let e = spec.euler.as_ref().expect("odd spheres carry an Euler class");
            let g = GysinExtension::extend(&spec.base, e, a.sphere_dim + 1, true)?;
            let n = g.cohomology().formal_dimension();
            let pk = product_kernel(g.cohomology(), n + 1);
            for (m, entries) in &t.degrees {
                for entry in entries {
                    let label = format_combination(
                        &entry.s22,
                        |k| s22_name(g.cohomology(), &pk.sym2, &pk.b[m].s22, k),
                        true,
                    );
                    r.push("tensor", format!("F[{m}] {label} = {}", g.cohomology().format_vector(&entry.value)));
                }
            }
        }
    }
    match (&v.certificate, &a.certificate) {
        (Some(c), Some(path)) => {
            std::fs::write(path, serialize_certificate(c)?)
                .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            r.push("certificate", path.display());
            r.push("certificate-residuals", residual_summary(c));
        }
        (Some(c), None) => {
            r.push("certificate", "verified, not written (use --certificate PATH)");
            r.push("certificate-residuals", residual_summary(c));
        }
        (None, _) => r.push("certificate", "none"),
    }
    r.push("seed", a.seed);
    if a.timing {
        r.push("timing-ms", start.elapsed().as_millis());
    }
    Ok((code_of(v.outcome), r))
}

fn tensor(a: &TensorArgs) -> Result<(i32, Report)> {
    let (base, text) = load(&a.file)?;
    let args = format!("k={} euler={} all={}", a.sphere_dim, a.euler, a.all_degrees);
    let mut r = header("bm-tensor", &a.file, &text, &args);
    if a.sphere_dim.is_multiple_of(2) {
        return Err(Error::Unsupported("the tensor is defined for odd-dimensional spheres".into()));
    }
    let e = parse_expr_in(&base, &a.euler)?;
    let g = GysinExtension::extend(&base, &e, a.sphere_dim + 1, true)?;
    let h = g.cohomology();
    let n = h.formal_dimension();
    let pk = product_kernel(h, n + 1);
    let degrees: Vec<u32> = if a.all_degrees { (0..=n + 1).collect() } else { vec![n + 1] };
    let t = bm_tensor(&g, &pk, &degrees)?;
    r.push("total-dimension", n);
    r.push("cohomology", h.basis().iter().map(|b| format!("{}:{}", b.name, b.degree)).collect::<Vec<_>>().join(" "));
    for (m, entries) in &t.degrees {
        r.push("degree", format!("{m} (dim ℬ = {})", entries.len()));
        for entry in entries {
            let label = format_combination(&entry.s22, |k| s22_name(h, &pk.sym2, &pk.b[m].s22, k), true);
            r.push("tensor", format!("F[{m}] {label} = {}", h.format_vector(&entry.value)));
        }
    }
    let vanishes = t.vanishes_in(n + 1);
    r.push("decision-degree", n + 1);
    r.push("vanishes", vanishes);
    for m in t.nonzero_degrees().into_iter().filter(|&m| m != n + 1) {
        r.push("finding", format!("ℱ is nonzero in degree {m}"));
    }
    Ok((if vanishes { 0 } else { 1 }, r))
}

fn utm(file: &Path) -> Result<(i32, Report)> {
    let (base, text) = load(file)?;
    let mut r = header("utm", file, &text, "");
    let chi = base.euler_characteristic();
    let v = utm_classify(&base)?;
    r.push("euler-characteristic", chi);
    push_verdict(&mut r, &v);
    Ok((code_of(v.outcome), r))
}

fn parse_decomposition(a: &GradedAlgebra, s: &str) -> Result<Vec<(Vec<Scalar>, Vec<Scalar>)>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (x, y) = p
                .split_once(',')
                .ok_or_else(|| Error::Input(format!("decomposition pairs are 'x,y', got '{p}'")))?;
            Ok((parse_expr_in(a, x)?, parse_expr_in(a, y)?))
        })
        .collect()
}

fn hl(a: &HlArgs) -> Result<(i32, Report)> {
    let (base, text) = load(&a.file)?;
    let args = format!("omega={} r={} dec={:?}", a.omega, a.r, a.decomposition);
    let mut r = header("hl", &a.file, &text, &args);
    let omega = parse_expr_in(&base, &a.omega)?;
    let dec = a.decomposition.as_deref().map(|d| parse_decomposition(&base, d)).transpose()?;
    r.push("omega", base.format_vector(&omega));
    match hl_obstruction(&base, &omega, a.r, dec)? {
        HlVerdict::NonFormal { s, transcript, .. } => {
            r.push("verdict", Outcome::NonFormal);
            r.push("reason", crate::decide::Reason::HlObstruction);
            r.push("s", s);
            for t in transcript {
                r.push("transcript", t);
            }
            Ok((1, r))
        }
        HlVerdict::NotApplicable { failed, transcript } => {
            r.push("verdict", "not-applicable");
            r.push("failed", failed);
            for t in transcript {
                r.push("transcript", t);
            }
            Ok((0, r))
        }
    }
}

fn lefschetz(file: &Path, omega: &str) -> Result<(i32, Report)> {
    let (base, text) = load(file)?;
    let mut r = header("lefschetz", file, &text, omega);
    let w = parse_expr_in(&base, omega)?;
    let table = hard_lefschetz_check(&base, &w)?;
    let n = base.formal_dimension() / 2;
    for (i, ok) in &table {
        let status = if *ok { "isomorphism" } else { "not an isomorphism" };
        r.push("degree", format!("{i}: ω^{} : H^{i} → H^{} is {status}", n - i, 2 * n - i));
    }
    let all = table.iter().all(|(_, ok)| *ok);
    r.push("hard-lefschetz", all);
    Ok((if all { 0 } else { 1 }, r))
}

fn certify_verify(path: &Path) -> Result<(i32, Report)> {
    let text = read(path)?;
    let mut r = header("certify-verify", path, &text, "");
    let v = verify_certificate(&text).map_err(|e| match e {
        Error::Parse { line, message } => Error::Input(format!("{}:{line}: {message}", path.display())),
        other => other,
    })?;
    r.push("residuals", residual_summary(&v.certificate));
    r.push("recorded-residuals", if v.recorded_consistent { "consistent" } else { "inconsistent" });
    for s in &v.certificate.residuals {
        for (t, res) in &s.nonzero {
            let args: Vec<&str> = t.iter().map(|&i| v.certificate.source.name(i)).collect();
            r.push("nonzero", format!("p={} ({}) = {}", s.p, args.join(", "), v.certificate.target.format_vector(res)));
        }
    }
    r.push("verdict", if v.valid() { "valid" } else { "invalid" });
    Ok((if v.valid() { 0 } else { 1 }, r))
}
