//! A∞ relations and morphism equations on finite bases, and the formality
//! certificate `f₁ = α`, `f₂(x, y) = γ′((1·xy) − (x·y))`, `f_{≥3} = 0`.
//!
//! Sign conventions: `Σ (−1)^{r+st} m_{r+t+1}(1^r ⊗ m_s ⊗ 1^t) = 0` for the
//! relations, and for morphisms
//! `Σ (−1)^{r+st} f_{r+t+1}(1^r ⊗ m_s ⊗ 1^t) = Σ (−1)^σ m_q(f_{i_1} ⊗ … ⊗ f_{i_q})`
//! with `σ = Σ_j (q−j)(i_j−1)`. Applying `g ⊗ h` to `x ⊗ y` costs `(−1)^{|h||x|}`,
//! with `|m_s| = 2 − s` and `|f_i| = 1 − i`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactla::{axpy, int, is_zero_vec, kernel_basis, sub_vec, unit_vec, zero_vec, Matrix, Scalar, Subspace};
use crate::bmt::UniformMassey;
use crate::galg::GradedAlgebra;
use crate::gysin::GysinExtension;
use crate::sympow::ProductKernelData;

fn sign(odd: bool) -> Scalar {
    int(if odd { -1 } else { 1 })
}

/// A CDGA viewed as an A∞ algebra: `m₁ = d`, `m₂` the product, `m_{≥3} = 0`.
#[derive(Clone, Copy)]
pub struct Cdga<'a> {
    pub alg: &'a GradedAlgebra,
    /// `None` for the zero differential.
    pub d: Option<&'a Matrix>,
}

impl<'a> Cdga<'a> {
    pub fn new(alg: &'a GradedAlgebra, d: Option<&'a Matrix>) -> Self {
        Cdga { alg, d }
    }

    fn has_m(&self, k: usize) -> bool {
        match k {
            1 => self.d.is_some_and(|d| !d.is_zero()),
            2 => true,
            _ => false,
        }
    }

    fn m(&self, args: &[Vec<Scalar>]) -> Vec<Scalar> {
        match args.len() {
            1 => self.d.map_or_else(|| zero_vec(self.alg.dim()), |d| d.mul_vec(&args[0])),
            2 => self.alg.multiply(&args[0], &args[1]),
            _ => zero_vec(self.alg.dim()),
        }
    }

    fn top(&self) -> u32 {
        self.alg.max_degree()
    }
}

/// A failing basis tuple of a relation or morphism equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationFailure {
    pub p: usize,
    pub tuple: Vec<String>,
    pub residual: Vec<Scalar>,
}

/// Calls `visit` on every basis tuple of length `p` whose degree sum lies in `[lo, hi]`.
fn for_each_tuple(
    degrees: &[u32],
    p: usize,
    lo: i64,
    hi: i64,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> usize {
    #[allow(clippy::too_many_arguments)]
    fn rec(
        degrees: &[u32],
        p: usize,
        lo: i64,
        hi: i64,
        acc: i64,
        min_deg: i64,
        cur: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
        count: &mut usize,
        stop: &mut bool,
    ) {
        if *stop {
            return;
        }
        if cur.len() == p {
            if acc >= lo && acc <= hi {
                *count += 1;
                if !visit(cur) {
                    *stop = true;
                }
            }
            return;
        }
        let remaining = (p - cur.len() - 1) as i64;
        for (i, &d) in degrees.iter().enumerate() {
            let next = acc + i64::from(d);
            if next + remaining * min_deg > hi {
                continue;
            }
            cur.push(i);
            rec(degrees, p, lo, hi, next, min_deg, cur, visit, count, stop);
            cur.pop();
        }
    }
    let min_deg = degrees.iter().copied().min().map_or(0, i64::from);
    let mut count = 0;
    let mut stop = false;
    rec(degrees, p, lo, hi, 0, min_deg, &mut Vec::with_capacity(p), visit, &mut count, &mut stop);
    count
}

fn degrees_of(alg: &GradedAlgebra) -> Vec<u32> {
    (0..alg.dim()).map(|i| alg.degree(i)).collect()
}

/// Stasheff sum at one basis tuple.
fn stasheff(a: &Cdga<'_>, x: &[usize]) -> Vec<Scalar> {
    let p = x.len();
    let dim = a.alg.dim();
    let deg: Vec<u32> = x.iter().map(|&i| a.alg.degree(i)).collect();
    let mut out = zero_vec(dim);
    for s in 1..=p {
        if !a.has_m(s) {
            continue;
        }
        for r in 0..=p - s {
            let t = p - r - s;
            if !a.has_m(r + t + 1) {
                continue;
            }
            let inner_args: Vec<Vec<Scalar>> = x[r..r + s].iter().map(|&i| unit_vec(dim, i)).collect();
            let inner = a.m(&inner_args);
            if is_zero_vec(&inner) {
                continue;
            }
            let mut args: Vec<Vec<Scalar>> = x[..r].iter().map(|&i| unit_vec(dim, i)).collect();
            args.push(inner);
            args.extend(x[r + s..].iter().map(|&i| unit_vec(dim, i)));
            let passed: u32 = deg[..r].iter().sum();
            let odd = ((r + s * t) % 2 == 1) ^ (s % 2 == 1 && passed % 2 == 1);
            axpy(&mut out, &sign(odd), &a.m(&args));
        }
    }
    out
}

/// Checks the A∞ relations of a CDGA on all basis tuples of length `≤ p_max`.
pub fn verify_relations(a: &Cdga<'_>, p_max: usize) -> std::result::Result<(), RelationFailure> {
    let degrees = degrees_of(a.alg);
    for p in 1..=p_max {
        let shift = 3 - p as i64;
        let mut failure = None;
        for_each_tuple(&degrees, p, -shift, i64::from(a.top()) - shift, &mut |x| {
            let r = stasheff(a, x);
            if is_zero_vec(&r) {
                true
            } else {
                failure = Some(RelationFailure {
                    p,
                    tuple: x.iter().map(|&i| a.alg.name(i).to_string()).collect(),
                    residual: r,
                });
                false
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
    }
    Ok(())
}

/// The maps `f₁` (linear) and `f₂` (bilinear) of a morphism with `f_{≥3} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismTables {
    /// `f1[i]` is the image of source basis element `i`.
    pub f1: Vec<Vec<Scalar>>,
    /// `f2[i * dim + j]` is `f₂(b_i, b_j)`.
    pub f2: Vec<Vec<Scalar>>,
}

impl MorphismTables {
    fn has_f(&self, k: usize) -> bool {
        k == 1 || (k == 2 && self.f2.iter().any(|v| !is_zero_vec(v)))
    }

    fn f(&self, args: &[Vec<Scalar>], target_dim: usize) -> Vec<Scalar> {
        let mut out = zero_vec(target_dim);
        match args.len() {
            1 => {
                for (i, c) in args[0].iter().enumerate() {
                    if !c.is_zero() {
                        axpy(&mut out, c, &self.f1[i]);
                    }
                }
            }
            2 => {
                let dim = self.f1.len();
                for (i, a) in args[0].iter().enumerate() {
                    if a.is_zero() {
                        continue;
                    }
                    for (j, b) in args[1].iter().enumerate() {
                        if !b.is_zero() {
                            axpy(&mut out, &(a * b), &self.f2[i * dim + j]);
                        }
                    }
                }
            }
            _ => {}
        }
        out
    }
}

/// Compositions of `p` into `q` positive parts.
fn compositions(p: usize, q: usize) -> Vec<Vec<usize>> {
    if q == 0 {
        return if p == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=p.saturating_sub(q - 1) {
        for mut rest in compositions(p - first, q - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// LHS − RHS of the morphism equation at one basis tuple.
fn morphism_residual(src: &Cdga<'_>, tgt: &Cdga<'_>, f: &MorphismTables, x: &[usize]) -> Vec<Scalar> {
    let p = x.len();
    let sd = src.alg.dim();
    let td = tgt.alg.dim();
    let deg: Vec<u32> = x.iter().map(|&i| src.alg.degree(i)).collect();
    let unit = |i: usize| unit_vec(sd, i);
    let mut out = zero_vec(td);
    for s in 1..=p {
        if !src.has_m(s) {
            continue;
        }
        for r in 0..=p - s {
            let t = p - r - s;
            if !f.has_f(r + t + 1) {
                continue;
            }
            let inner = src.m(&x[r..r + s].iter().map(|&i| unit(i)).collect::<Vec<_>>());
            if is_zero_vec(&inner) {
                continue;
            }
            let mut args: Vec<Vec<Scalar>> = x[..r].iter().map(|&i| unit(i)).collect();
            args.push(inner);
            args.extend(x[r + s..].iter().map(|&i| unit(i)));
            let passed: u32 = deg[..r].iter().sum();
            let odd = ((r + s * t) % 2 == 1) ^ (s % 2 == 1 && passed % 2 == 1);
            axpy(&mut out, &sign(odd), &f.f(&args, td));
        }
    }
    for q in 1..=p {
        if !tgt.has_m(q) {
            continue;
        }
        for parts in compositions(p, q) {
            if !parts.iter().all(|&i| f.has_f(i)) {
                continue;
            }
            let sigma: usize = parts.iter().enumerate().map(|(j, &i)| (q - 1 - j) * (i - 1)).sum();
            let mut koszul = 0u32;
            let mut start = 0;
            let mut args = Vec::with_capacity(q);
            let mut zero = false;
            for &i in &parts {
                let passed: u32 = deg[..start].iter().sum();
                if (i - 1) % 2 == 1 {
                    koszul += passed;
                }
                let v = f.f(&x[start..start + i].iter().map(|&k| unit(k)).collect::<Vec<_>>(), td);
                zero |= is_zero_vec(&v);
                args.push(v);
                start += i;
            }
            if zero {
                continue;
            }
            let odd = (sigma % 2 == 1) ^ (koszul % 2 == 1);
            axpy(&mut out, &-sign(odd), &tgt.m(&args));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualSummary {
    pub p: usize,
    pub tuples_checked: usize,
    /// Basis tuples (by source index) with a nonzero residual, and the residual.
    pub nonzero: Vec<(Vec<usize>, Vec<Scalar>)>,
}

/// Evaluates the morphism equations for `p ≤ p_max` on all basis tuples whose
/// output degree lies inside the target.
pub fn morphism_residuals(src: &Cdga<'_>, tgt: &Cdga<'_>, f: &MorphismTables, p_max: usize) -> Vec<ResidualSummary> {
    let degrees = degrees_of(src.alg);
    let top = i64::from(tgt.top());
    (1..=p_max)
        .map(|p| {
            let shift = 2 - p as i64;
            let mut nonzero = Vec::new();
            let checked = for_each_tuple(&degrees, p, -shift, top - shift, &mut |x| {
                let r = morphism_residual(src, tgt, f, x);
                if !is_zero_vec(&r) {
                    nonzero.push((x.to_vec(), r));
                }
                true
            });
            ResidualSummary { p, tuples_checked: checked, nonzero }
        })
        .collect()
}

/// Whether `f₁` is a quasi-isomorphism from a zero-differential source.
pub fn is_quasi_isomorphism(src: &GradedAlgebra, tgt: &GradedAlgebra, d: &Matrix, f1: &[Vec<Scalar>]) -> bool {
    if f1.len() != src.dim() || f1.iter().any(|v| v.len() != tgt.dim() || !is_zero_vec(&d.mul_vec(v))) {
        return false;
    }
    let top = src.max_degree().max(tgt.max_degree());
    for i in 0..=top {
        let cols = tgt.degree_indices(i);
        let below = if i > 0 { tgt.degree_indices(i - 1) } else { &[] };
        let boundaries: Vec<Vec<Scalar>> = below.iter().map(|&j| d.column(j)).collect();
        let b = Subspace::span(tgt.dim(), &boundaries);
        let mut restricted = Matrix::zeros(tgt.dim(), cols.len());
        for (c, &j) in cols.iter().enumerate() {
            for r in 0..tgt.dim() {
                restricted[(r, c)] = d[(r, j)].clone();
            }
        }
        let cycles = kernel_basis(&restricted).dim();
        let h_dim = cycles - b.dim();
        let images: Vec<Vec<Scalar>> = src.degree_indices(i).iter().map(|&k| f1[k].clone()).collect();
        if images.iter().any(|v| tgt.homogeneous_degree(v).ok().flatten().is_some_and(|g| g != i)) {
            return false;
        }
        let with_images = b.sum(&Subspace::span(tgt.dim(), &images));
        if h_dim != src.degree_dim(i) || with_images.dim() - b.dim() != images.len() {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct AInfinityCertificate {
    pub source: GradedAlgebra,
    pub target: GradedAlgebra,
    pub differential: Matrix,
    pub maps: MorphismTables,
    pub residuals: Vec<ResidualSummary>,
}

impl AInfinityCertificate {
    pub fn all_zero(&self) -> bool {
        self.residuals.iter().all(|r| r.nonzero.is_empty())
    }
}

pub const CERTIFICATE_ARITY: usize = 5;

/// Assembles `f₁ = α`, `f₂(x, y) = γ′((1·xy) − (x·y))` and verifies the morphism equations.
pub fn build_certificate(g: &GysinExtension, pk: &ProductKernelData, u: &UniformMassey) -> Result<AInfinityCertificate> {
    let h = g.cohomology();
    let hd = h.dim();
    if !u.choice.gamma.iter().all(|v| g.in_theta_ideal(v)) {
        return Err(Error::Invariant("γ′ leaves the ideal generated by θ".into()));
    }
    if !u.vanishes() {
        return Err(Error::Invariant("𝒯 does not vanish for the supplied choice".into()));
    }
    let f1 = u.choice.alpha.clone();
    let mut f2 = vec![zero_vec(g.chain_dim()); hd * hd];
    for i in 0..hd {
        for j in 0..hd {
            let xy = h.product_basis(i, j);
            let mut v = crate::sympow::sym2_product(&pk.sym2, &h.unit_vector(), &xy);
            let xy_pair = crate::sympow::sym2_product(&pk.sym2, &unit_vec(hd, i), &unit_vec(hd, j));
            v = sub_vec(&v, &xy_pair);
            if is_zero_vec(&v) {
                continue;
            }
            let deg = h.degree(i) + h.degree(j);
            let coords = pk.e.get(&deg).and_then(|e| e.coordinates(&v)).ok_or_else(|| {
                Error::Invariant(format!("(1·xy) − (x·y) is not in E for ({}, {})", h.name(i), h.name(j)))
            })?;
            let e_idx: Vec<usize> = pk.e_in_degree(deg).collect();
            for (c, &a) in coords.iter().zip(&e_idx) {
                if !c.is_zero() {
                    axpy(&mut f2[i * hd + j], c, &u.choice.gamma[a]);
                }
            }
        }
    }
    if !f2.iter().all(|v| g.in_theta_ideal(v)) {
        return Err(Error::Invariant("f₂ leaves the ideal generated by θ".into()));
    }
    let maps = MorphismTables { f1, f2 };
    let cert = certify(h, g.chain(), g.differential(), maps)?;
    if !cert.all_zero() {
        return Err(Error::Invariant("nonzero residual in the morphism equations".into()));
    }
    for c in 0..hd {
        if g.project(&cert.maps.f1[c])? != unit_vec(hd, c) {
            return Err(Error::Invariant("f₁ does not induce the identity on cohomology".into()));
        }
    }
    Ok(cert)
}

/// Checks the target is a CDGA and `f₁` a quasi-isomorphism, then records all residuals.
pub fn certify(source: &GradedAlgebra, target: &GradedAlgebra, d: &Matrix, maps: MorphismTables) -> Result<AInfinityCertificate> {
    let tgt = Cdga::new(target, Some(d));
    if let Err(f) = verify_relations(&tgt, 3) {
        return Err(Error::Input(format!("target is not a CDGA: relation p={} fails at ({})", f.p, f.tuple.join(", "))));
    }
    if !is_quasi_isomorphism(source, target, d, &maps.f1) {
        return Err(Error::Input("f₁ is not a quasi-isomorphism".into()));
    }
    let src = Cdga::new(source, None);
    let residuals = morphism_residuals(&src, &tgt, &maps, CERTIFICATE_ARITY);
    Ok(AInfinityCertificate {
        source: source.clone(),
        target: target.clone(),
        differential: d.clone(),
        maps,
        residuals,
    })
}
