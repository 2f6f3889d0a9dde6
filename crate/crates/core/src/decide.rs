//! Formality verdicts for sphere bundles, the unit-tangent-bundle classifier and
//! the hard-Lefschetz obstruction for reducible Euler classes.

use std::fmt;

use num_traits::{One, Zero};

use crate::ainfty::{build_certificate, AInfinityCertificate};
use crate::bmt::{bm_tensor, choice_independence, eta_correct, BianchiMasseyTensor, ChoiceReport};
use crate::error::{Error, Result};
use crate::exactla::{
    int, is_zero_vec, kernel_basis, rref, scaled, solve_particular, unit_vec, zero_vec, Matrix, Scalar,
};
use crate::galg::{format_combination, GradedAlgebra};
use crate::gysin::GysinExtension;
use crate::sympow::{product_kernel, sym2_product, ProductKernelData, Sym2Basis, Sym2Sym2Basis};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Formal,
    NonFormal,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Formal => "formal",
            Outcome::NonFormal => "non-formal",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    EvenSphere,
    ZeroTensor,
    NonzeroTensor,
    EulerCharacteristicZero,
    SingleGenerator,
    OddClass,
    ProductKernel,
    HlObstruction,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::EvenSphere => "EvenSphere",
            Reason::ZeroTensor => "ZeroTensor",
            Reason::NonzeroTensor => "NonzeroTensor",
            Reason::EulerCharacteristicZero => "EulerCharacteristicZero",
            Reason::SingleGenerator => "SingleGenerator",
            Reason::OddClass => "OddClass",
            Reason::ProductKernel => "ProductKernel",
            Reason::HlObstruction => "HlObstruction",
        })
    }
}

/// An element of `ℬ^m` with nonzero `ℱ`-value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub degree: u32,
    /// Coordinates in the degree-`m` basis of `𝒢²𝒢²H`.
    pub element: Vec<Scalar>,
    pub element_label: String,
    /// `ℱ` of the element, in cohomology coordinates of the extension.
    pub value: Vec<Scalar>,
    pub value_label: String,
}

#[derive(Clone, Debug)]
pub struct FormalityVerdict {
    pub outcome: Outcome,
    pub reason: Reason,
    pub witness: Option<Witness>,
    pub certificate: Option<AInfinityCertificate>,
    /// Nonzero `ℱ`-values away from the decision degree, and similar observations.
    pub findings: Vec<String>,
    pub tensor: Option<BianchiMasseyTensor>,
    pub choice_report: Option<ChoiceReport>,
    /// Formal dimension of the total space, when an extension was built.
    pub total_dimension: Option<u32>,
}

impl FormalityVerdict {
    fn simple(outcome: Outcome, reason: Reason) -> Self {
        FormalityVerdict {
            outcome,
            reason,
            witness: None,
            certificate: None,
            findings: Vec::new(),
            tensor: None,
            choice_report: None,
            total_dimension: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BundleSpec {
    pub base: GradedAlgebra,
    pub sphere_dim: u32,
    pub euler: Option<Vec<Scalar>>,
    pub base_formal_attested: bool,
    /// Random re-derivations of `ℱ` to compare against the canonical one.
    pub trials: usize,
    pub seed: u64,
}

impl BundleSpec {
    pub fn new(base: GradedAlgebra, sphere_dim: u32, euler: Option<Vec<Scalar>>) -> Self {
        BundleSpec { base, sphere_dim, euler, base_formal_attested: true, trials: 0, seed: 0 }
    }
}

/// Names of `𝒢²𝒢²H` basis elements, e.g. `((a·b)·(a·b))`.
pub fn s22_name(h: &GradedAlgebra, sym2: &Sym2Basis, s22: &Sym2Sym2Basis, k: usize) -> String {
    let t = s22.element(k);
    let pair = |p: usize| {
        let e = sym2.element(p);
        format!("({}·{})", h.name(e[0]), h.name(e[1]))
    };
    format!("({}·{})", pair(t[0]), pair(t[1]))
}

fn witness_from(g: &GysinExtension, pk: &ProductKernelData, m: u32, element: Vec<Scalar>, value: Vec<Scalar>) -> Witness {
    let h = g.cohomology();
    let s22 = &pk.b[&m].s22;
    let element_label = format_combination(&element, |k| s22_name(h, &pk.sym2, s22, k), true);
    let value_label = h.format_vector(&value);
    Witness { degree: m, element, element_label, value, value_label }
}

/// Decides formality of an `S^k`-bundle over a formal base from the base ring and Euler class.
pub fn sphere_bundle_formality(spec: &BundleSpec) -> Result<FormalityVerdict> {
    if !spec.base_formal_attested {
        return Err(Error::Refused(
            "formality of the base cannot be read off its cohomology ring; attest it explicitly (--base-formal)"
                .into(),
        ));
    }
    if let Err(v) = spec.base.validate() {
        let list: Vec<String> = v.iter().take(5).map(ToString::to_string).collect();
        return Err(Error::Input(format!("base algebra is invalid: {}", list.join("; "))));
    }
    if spec.sphere_dim == 0 {
        return Err(Error::Input("sphere dimension must be at least 1".into()));
    }
    if spec.sphere_dim.is_multiple_of(2) {
        return Ok(FormalityVerdict::simple(Outcome::Formal, Reason::EvenSphere));
    }
    let euler = spec
        .euler
        .as_ref()
        .ok_or_else(|| Error::Input("an Euler class is required for odd-dimensional spheres".into()))?;
    let g = GysinExtension::extend(&spec.base, euler, spec.sphere_dim + 1, true)?;
    let h = g.cohomology();
    h.poincare_check().map_err(|e| Error::Input(format!("the total space ring is not Poincaré: {e}")))?;
    let n = h.formal_dimension();
    let pk = product_kernel(h, n + 1);
    let degrees: Vec<u32> = (0..=n + 1).collect();
    let tensor = bm_tensor(&g, &pk, &degrees)?;
    let mut findings: Vec<String> = tensor
        .nonzero_degrees()
        .into_iter()
        .filter(|&m| m != n + 1)
        .map(|m| format!("ℱ is nonzero in degree {m} (decision degree is {})", n + 1))
        .collect();
    let choice_report = if spec.trials > 0 {
        let r = choice_independence(&g, &pk, &tensor, spec.trials, spec.seed)?;
        if !r.identical() {
            return Err(Error::Invariant(format!("ℱ changed under a different choice (deviation {})", r.max_deviation)));
        }
        Some(r)
    } else {
        None
    };
    let mut verdict = if let Some(entry) = tensor.first_nonzero(n + 1) {
        let mut v = FormalityVerdict::simple(Outcome::NonFormal, Reason::NonzeroTensor);
        v.witness = Some(witness_from(&g, &pk, n + 1, entry.s22.clone(), entry.value.clone()));
        v
    } else {
        if !tensor.vanishes() {
            findings.push("ℱ vanishes in the decision degree but not everywhere".into());
        }
        let u = eta_correct(&g, &pk, &tensor)?;
        let cert = build_certificate(&g, &pk, &u)?;
        let mut v = FormalityVerdict::simple(Outcome::Formal, Reason::ZeroTensor);
        v.certificate = Some(cert);
        v
    };
    verdict.findings = findings;
    verdict.tensor = Some(tensor);
    verdict.choice_report = choice_report;
    verdict.total_dimension = Some(n);
    Ok(verdict)
}

/// `Some((deg x, p))` when `h ≅ 𝕂[x]/(x^p)`.
pub fn single_generator_check(h: &GradedAlgebra) -> Option<(u32, u32)> {
    if h.degrees().any(|d| h.degree_dim(d) > 1) {
        return None;
    }
    let Some(d) = h.degrees().find(|&d| d > 0) else {
        return Some((0, 1));
    };
    let x = unit_vec(h.dim(), h.degree_indices(d)[0]);
    let mut power = h.unit_vector();
    let mut p = 0u32;
    while !is_zero_vec(&power) {
        match h.homogeneous_degree(&power) {
            Ok(Some(deg)) if deg == p * d => {}
            _ => return None,
        }
        p += 1;
        power = h.multiply(&power, &x);
    }
    (p as usize == h.dim()).then_some((d, p))
}

/// Solves for `z` in degree `deg` with `α_H(x_k z) = target_k` for each `x_k`.
fn dual_against(h: &GradedAlgebra, xs: &[Vec<Scalar>], deg: u32, targets: &[Scalar], nu: usize) -> Option<Vec<Scalar>> {
    let idx = h.degree_indices(deg);
    let mut m = Matrix::zeros(xs.len(), idx.len());
    for (r, x) in xs.iter().enumerate() {
        for (c, &b) in idx.iter().enumerate() {
            m[(r, c)] = h.multiply(x, &unit_vec(h.dim(), b))[nu].clone();
        }
    }
    let local = solve_particular(&m, targets)?;
    Some(h.from_local(&local, deg))
}

/// Element `(u·v)` of `𝒢²𝒢²H` from two `𝒢²H` vectors.
fn s22_product(s22: &Sym2Sym2Basis, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
    let mut out = zero_vec(s22.len());
    for (p, a) in u.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (q, b) in v.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            if let Some((k, s)) = s22.canonical(&[p, q]) {
                out[k] += s * a * b;
            }
        }
    }
    out
}

/// Evaluates `ℱ` on an arbitrary element of `𝒢²𝒢²H^m` through the `ℬ^m` basis.
pub fn evaluate_on(pk: &ProductKernelData, tensor: &BianchiMasseyTensor, m: u32, element: &[Scalar]) -> Option<Vec<Scalar>> {
    let block = pk.b.get(&m)?;
    let coords = block.subspace.coordinates(element)?;
    let entries = tensor.degrees.get(&m)?;
    let mut out = zero_vec(entries.first().map_or(0, |e| e.value.len()));
    for (c, e) in coords.iter().zip(entries) {
        crate::exactla::axpy(&mut out, c, &e.value);
    }
    Some(out)
}

/// Classifies formality of the unit tangent bundle of a formal Poincaré base.
pub fn utm_classify(h: &GradedAlgebra) -> Result<FormalityVerdict> {
    if let Err(v) = h.validate() {
        let list: Vec<String> = v.iter().take(5).map(ToString::to_string).collect();
        return Err(Error::Input(format!("algebra is invalid: {}", list.join("; "))));
    }
    let ps = h.poincare_check()?;
    let dim = h.formal_dimension();
    let chi = h.euler_characteristic();
    if dim % 2 == 1 || chi == 0 {
        return Ok(FormalityVerdict::simple(Outcome::Formal, Reason::EulerCharacteristicZero));
    }
    if single_generator_check(h).is_some() {
        return Ok(FormalityVerdict::simple(Outcome::Formal, Reason::SingleGenerator));
    }
    let nu = ps.orientation;
    let omega = scaled(&int(chi), &unit_vec(h.dim(), nu));
    let g = GysinExtension::extend(h, &omega, dim, true)?;
    let ht = g.cohomology();
    let n = ht.formal_dimension();
    let pk = product_kernel(ht, n + 1);
    let tensor = bm_tensor(&g, &pk, &[n + 1])?;
    let lift = |x: &[Scalar]| -> Result<Vec<Scalar>> {
        let mut z = zero_vec(g.chain_dim());
        z[..h.dim()].clone_from_slice(x);
        g.project(&z)
    };
    let theta_omega = {
        let mut z = zero_vec(g.chain_dim());
        z[h.dim()..].clone_from_slice(&omega);
        g.project(&z)?
    };
    let s22 = &pk.b.get(&(n + 1)).ok_or_else(|| Error::Invariant("no ℬ block in the decision degree".into()))?.s22;
    let pair = |a: &[Scalar], b: &[Scalar]| sym2_product(&pk.sym2, a, b);
    let chi_s = int(chi);

    let odd = (1..dim).step_by(2).find(|&d| h.degree_dim(d) > 0);
    let (reason, element, expected) = if let Some(d) = odd {
        let x = unit_vec(h.dim(), h.degree_indices(d)[0]);
        let xs = dual_against(h, std::slice::from_ref(&x), dim - d, std::slice::from_ref(&chi_s), nu)
            .ok_or_else(|| Error::Invariant("no Poincaré dual for an odd class".into()))?;
        let xx = pair(&lift(&x)?, &lift(&xs)?);
        let w = s22_product(s22, &xx, &xx);
        (Reason::OddClass, w, scaled(&int(2), &theta_omega))
    } else {
        let (i, j, kernel) = product_kernel_element(h, dim / 2)
            .ok_or_else(|| Error::Invariant("classifier found neither an odd class nor a product kernel".into()))?;
        // Rank factorization: kernel = C R with independent columns of C and rows of R.
        let r = rref(&kernel);
        let xs: Vec<Vec<Scalar>> = r.pivots.iter().map(|&c| h.from_local(&kernel.column(c), i)).collect();
        let ys: Vec<Vec<Scalar>> = (0..r.pivots.len()).map(|k| h.from_local(r.reduced.row(k), j)).collect();
        let mut delta = vec![Scalar::zero(); xs.len()];
        delta[0] = chi_s.clone();
        let x1 = dual_against(h, &xs, dim - i, &delta, nu)
            .ok_or_else(|| Error::Invariant("no dual for the kernel factors".into()))?;
        let y1 = dual_against(h, &ys, dim - j, &delta, nu)
            .ok_or_else(|| Error::Invariant("no dual for the kernel factors".into()))?;
        let (x1, y1) = (lift(&x1)?, lift(&y1)?);
        let mut sum_xy = zero_vec(pk.sym2.len());
        let mut w = zero_vec(s22.len());
        for (x, y) in xs.iter().zip(&ys) {
            let (x, y) = (lift(x)?, lift(y)?);
            crate::exactla::axpy(&mut sum_xy, &Scalar::one(), &pair(&x, &y));
            let term = s22_product(s22, &pair(&x, &x1), &pair(&y, &y1));
            crate::exactla::axpy(&mut w, &-Scalar::one(), &term);
        }
        let head = s22_product(s22, &sum_xy, &pair(&x1, &y1));
        crate::exactla::axpy(&mut w, &Scalar::one(), &head);
        (Reason::ProductKernel, w, scaled(&int(-2), &theta_omega))
    };
    let value = evaluate_on(&pk, &tensor, n + 1, &element)
        .ok_or_else(|| Error::Invariant("witness does not lie in ℬ".into()))?;
    if is_zero_vec(&value) || value != expected {
        return Err(Error::Invariant(format!(
            "witness value {} differs from the predicted {}",
            ht.format_vector(&value),
            ht.format_vector(&expected)
        )));
    }
    let mut v = FormalityVerdict::simple(Outcome::NonFormal, reason);
    v.witness = Some(witness_from(&g, &pk, n + 1, element, value));
    v.tensor = Some(tensor);
    v.total_dimension = Some(n);
    Ok(v)
}

/// First `(i, j)` with `0 < i ≤ j ≤ half` where `H^i ⊗ H^j → H^{i+j}` has a kernel,
/// with one kernel element as a `dim H^i × dim H^j` matrix.
fn product_kernel_element(h: &GradedAlgebra, half: u32) -> Option<(u32, u32, Matrix)> {
    for i in 1..=half {
        for j in i..=half {
            let (a, b) = (h.degree_indices(i), h.degree_indices(j));
            if a.is_empty() || b.is_empty() {
                continue;
            }
            let tgt = h.degree_indices(i + j);
            let mut m = Matrix::zeros(tgt.len(), a.len() * b.len());
            for (p, &x) in a.iter().enumerate() {
                for (q, &y) in b.iter().enumerate() {
                    let prod = h.product_basis(x, y);
                    for (r, &t) in tgt.iter().enumerate() {
                        m[(r, p * b.len() + q)] = prod[t].clone();
                    }
                }
            }
            if let Some(k) = kernel_basis(&m).basis().first() {
                let mut km = Matrix::zeros(a.len(), b.len());
                for p in 0..a.len() {
                    for q in 0..b.len() {
                        km[(p, q)] = k[p * b.len() + q].clone();
                    }
                }
                return Some((i, j, km));
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HlVerdict {
    /// Both hypotheses hold; the extension is non-formal.
    NonFormal { s: u32, decomposition: Vec<(Vec<Scalar>, Vec<Scalar>)>, transcript: Vec<String> },
    /// Some hypothesis fails; nothing is claimed about formality.
    NotApplicable { failed: String, transcript: Vec<String> },
}

/// Checks the hypotheses of the reducible-Euler-class obstruction.
pub fn hl_obstruction(
    h: &GradedAlgebra,
    omega: &[Scalar],
    r: u32,
    decomposition: Option<Vec<(Vec<Scalar>, Vec<Scalar>)>>,
) -> Result<HlVerdict> {
    if r.is_multiple_of(2) {
        return Err(Error::Refused(format!(
            "|ω| = {} ≡ 0 (mod 4); the obstruction needs |ω| ≡ 2 (mod 4), and that condition is necessary",
            2 * r
        )));
    }
    if let Err(v) = h.validate() {
        let list: Vec<String> = v.iter().take(5).map(ToString::to_string).collect();
        return Err(Error::Input(format!("algebra is invalid: {}", list.join("; "))));
    }
    match h.homogeneous_degree(omega)? {
        Some(d) if d == 2 * r => {}
        Some(d) => return Err(Error::Input(format!("ω has degree {d}, expected {}", 2 * r))),
        None => return Err(Error::Input("ω is zero".into())),
    }
    let mut transcript = vec![format!("ω = {} in degree {}", h.format_vector(omega), 2 * r)];
    transcript.push("decompositions are checked in cohomology; closed representatives lift them, so this holds for any base".into());

    let decomposition = match decomposition {
        Some(dec) => {
            let mut sum = zero_vec(h.dim());
            for (x, y) in &dec {
                for v in [x, y] {
                    match h.homogeneous_degree(v)? {
                        Some(d) if d != r => {
                            return Err(Error::Input(format!("decomposition factor has degree {d}, expected {r}")))
                        }
                        _ => {}
                    }
                }
                crate::exactla::axpy(&mut sum, &Scalar::one(), &h.multiply(x, y));
            }
            if sum != omega {
                return Err(Error::Input(format!(
                    "decomposition multiplies to {}, not ω",
                    h.format_vector(&sum)
                )));
            }
            transcript.push("condition 1: decomposition supplied and verified".into());
            dec
        }
        None => {
            let basis = h.degree_indices(r);
            let mut pairs = Vec::new();
            let mut cols = Vec::new();
            for &p in basis {
                for &q in basis {
                    pairs.push((p, q));
                    cols.push(h.product_basis(p, q));
                }
            }
            let m = Matrix::from_columns(h.dim(), &cols);
            match solve_particular(&m, omega) {
                Some(c) if !pairs.is_empty() => {
                    let dec: Vec<(Vec<Scalar>, Vec<Scalar>)> = pairs
                        .iter()
                        .zip(&c)
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(&(p, q), x)| (scaled(x, &unit_vec(h.dim(), p)), unit_vec(h.dim(), q)))
                        .collect();
                    transcript.push(format!(
                        "condition 1: ω = {}",
                        dec.iter()
                            .map(|(x, y)| format!("({})·({})", h.format_vector(x), h.format_vector(y)))
                            .collect::<Vec<_>>()
                            .join(" + ")
                    ));
                    dec
                }
                _ => {
                    transcript.push(format!("condition 1 fails: ω is not a sum of products of degree-{r} classes"));
                    return Ok(HlVerdict::NotApplicable { failed: "condition 1".into(), transcript });
                }
            }
        }
    };

    for s in 0..=h.formal_dimension() {
        if h.degree_dim(s) == 0 {
            continue;
        }
        let iso = h.left_multiplication(omega, 2 * r, s);
        let iso_ok = iso.rows() == iso.cols() && iso.rank() == iso.cols();
        let (inj_ok, inj_note) = if s >= r {
            let m = h.left_multiplication(omega, 2 * r, s - r);
            let ok = m.rank() == m.cols();
            (ok, format!("ω: H^{} → H^{} injective: {ok} (rank {} of {})", s - r, s + r, m.rank(), m.cols()))
        } else {
            (true, format!("ω: H^{} → H^{} injective: vacuous", s as i64 - r as i64, s + r))
        };
        transcript.push(format!(
            "s = {s}: ω: H^{s} → H^{} is {} ({}x{}, rank {}); {inj_note}",
            s + 2 * r,
            if iso_ok { "an isomorphism" } else { "not an isomorphism" },
            iso.rows(),
            iso.cols(),
            iso.rank(),
        ));
        if iso_ok && inj_ok {
            return Ok(HlVerdict::NonFormal { s, decomposition, transcript });
        }
    }
    Ok(HlVerdict::NotApplicable { failed: "condition 2".into(), transcript })
}

/// Per-degree table of whether `ω^{n−i}: H^i → H^{2n−i}` is an isomorphism.
pub fn hard_lefschetz_check(h: &GradedAlgebra, omega: &[Scalar]) -> Result<Vec<(u32, bool)>> {
    let dim = h.formal_dimension();
    if dim % 2 == 1 {
        return Err(Error::Input("hard Lefschetz needs an even formal dimension".into()));
    }
    match h.homogeneous_degree(omega)? {
        Some(2) | None => {}
        Some(d) => return Err(Error::Input(format!("ω has degree {d}, expected 2"))),
    }
    let n = dim / 2;
    let mut table = Vec::new();
    for i in 0..=n {
        let mut power = h.unit_vector();
        for _ in 0..(n - i) {
            power = h.multiply(&power, omega);
        }
        let m = h.left_multiplication(&power, 2 * (n - i), i);
        table.push((i, m.rows() == m.cols() && m.rank() == m.cols()));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galg::BasisElement;

    fn alg(formal: u32, names: &[(&str, u32)], orient: usize, prods: &[(usize, usize, usize, i64)]) -> GradedAlgebra {
        let n = names.len();
        let basis = names.iter().map(|(s, d)| BasisElement::new(*s, *d)).collect();
        let mut grouped: std::collections::BTreeMap<(usize, usize), Vec<Scalar>> = Default::default();
        for &(i, j, k, c) in prods {
            grouped.entry((i, j)).or_insert_with(|| zero_vec(n))[k] = int(c);
        }
        GradedAlgebra::new(formal, basis, 0, Some(orient), grouped.into_iter().collect()).unwrap()
    }

    fn s2() -> GradedAlgebra {
        alg(2, &[("1", 0), ("x", 2)], 1, &[])
    }

    fn t2() -> GradedAlgebra {
        alg(2, &[("1", 0), ("a", 1), ("b", 1), ("ab", 2)], 3, &[(1, 2, 3, 1)])
    }

    fn sigma2() -> GradedAlgebra {
        alg(
            2,
            &[("1", 0), ("a1", 1), ("b1", 1), ("a2", 1), ("b2", 1), ("v", 2)],
            5,
            &[(1, 2, 5, 1), (3, 4, 5, 1)],
        )
    }

    fn cp2() -> GradedAlgebra {
        alg(4, &[("1", 0), ("x", 2), ("xx", 4)], 2, &[(1, 1, 2, 1)])
    }

    fn s2s2() -> GradedAlgebra {
        s2().tensor_product(&s2()).unwrap()
    }

    #[test]
    fn even_sphere_is_formal() {
        let v = sphere_bundle_formality(&BundleSpec::new(t2(), 2, None)).unwrap();
        assert_eq!((v.outcome, v.reason), (Outcome::Formal, Reason::EvenSphere));
    }

    #[test]
    fn missing_attestation_is_refused() {
        let mut spec = BundleSpec::new(t2(), 1, Some(unit_vec(4, 3)));
        spec.base_formal_attested = false;
        assert!(matches!(sphere_bundle_formality(&spec), Err(Error::Refused(_))));
    }

    #[test]
    fn hopf_bundle_is_formal_with_certificate() {
        let v = sphere_bundle_formality(&BundleSpec::new(s2(), 1, Some(unit_vec(2, 1)))).unwrap();
        assert_eq!(v.outcome, Outcome::Formal);
        assert!(v.certificate.unwrap().all_zero());
    }

    #[test]
    fn heisenberg_bundle_is_non_formal() {
        let v = sphere_bundle_formality(&BundleSpec::new(t2(), 1, Some(unit_vec(4, 3)))).unwrap();
        assert_eq!(v.outcome, Outcome::NonFormal);
        let w = v.witness.unwrap();
        assert_eq!(w.element_label, "((a·b)·(a·b))");
        assert_eq!(w.value_label, "2*θab");
    }

    #[test]
    fn cp2_three_sphere_bundle_is_formal() {
        let v = sphere_bundle_formality(&BundleSpec::new(cp2(), 3, Some(unit_vec(3, 2)))).unwrap();
        assert_eq!(v.outcome, Outcome::Formal);
        assert!(v.certificate.unwrap().all_zero());
    }

    #[test]
    fn single_generator_examples() {
        assert_eq!(single_generator_check(&cp2()), Some((2, 3)));
        assert_eq!(single_generator_check(&s2()), Some((2, 2)));
        assert_eq!(single_generator_check(&s2s2()), None);
        assert_eq!(single_generator_check(&t2()), None);
    }

    #[test]
    fn utm_examples() {
        assert_eq!(utm_classify(&s2()).unwrap().reason, Reason::SingleGenerator);
        assert_eq!(utm_classify(&t2()).unwrap().reason, Reason::EulerCharacteristicZero);
        let v = utm_classify(&sigma2()).unwrap();
        assert_eq!((v.outcome, v.reason), (Outcome::NonFormal, Reason::OddClass));
        let v = utm_classify(&s2s2()).unwrap();
        assert_eq!((v.outcome, v.reason), (Outcome::NonFormal, Reason::ProductKernel));
    }

    #[test]
    fn hl_examples() {
        match hl_obstruction(&t2(), &unit_vec(4, 3), 1, None).unwrap() {
            HlVerdict::NonFormal { s, .. } => assert_eq!(s, 0),
            other => panic!("{other:?}"),
        }
        assert!(matches!(hl_obstruction(&cp2(), &unit_vec(3, 2), 2, None), Err(Error::Refused(_))));
        assert!(matches!(
            hl_obstruction(&s2(), &unit_vec(2, 1), 1, None).unwrap(),
            HlVerdict::NotApplicable { .. }
        ));
    }

    #[test]
    fn bad_decomposition_is_input_error() {
        let a = unit_vec(4, 1);
        let dec = vec![(a.clone(), a)];
        assert!(matches!(hl_obstruction(&t2(), &unit_vec(4, 3), 1, Some(dec)), Err(Error::Input(_))));
    }

    #[test]
    fn hard_lefschetz_tables() {
        assert!(hard_lefschetz_check(&t2(), &unit_vec(4, 3)).unwrap().iter().all(|(_, ok)| *ok));
        assert!(hard_lefschetz_check(&cp2(), &unit_vec(3, 1)).unwrap().iter().all(|(_, ok)| *ok));
    }
}
