//! The Bianchi–Massey tensor `ℱ`, the uniform Massey triple product `𝒯`, the
//! `η`-correction making `𝒯` vanish, and randomized choice-independence checks.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{
    axpy, complement_in, int, is_zero_vec, kernel_basis, solve_particular, sub_vec, unit_vec, zero_vec, Matrix,
    Scalar, Subspace,
};
use crate::galg::{koszul, GradedAlgebra};
use crate::gysin::{ClassKind, GysinExtension};
use crate::sympow::{ProductKernelData, SymmetrizationBuilder};

/// A choice of section `α` (per cohomology class) and of `γ` (per E-basis vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Choice {
    pub alpha: Vec<Vec<Scalar>>,
    pub gamma: Vec<Vec<Scalar>>,
}

impl Choice {
    /// `α` canonical and `γ = θ ω⁻¹ α²`.
    pub fn canonical(g: &GysinExtension, pk: &ProductKernelData) -> Result<Self> {
        let gamma = pk
            .e_basis
            .iter()
            .map(|(_, e)| g.gamma_canonical(&pk.sym2, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Choice { alpha: g.alpha_all().to_vec(), gamma })
    }

    pub fn alpha_squared(&self, g: &GysinExtension, pk: &ProductKernelData, e: usize) -> Vec<Scalar> {
        g.alpha_squared_with(&self.alpha, &pk.sym2, &pk.e_basis[e].1)
    }

    /// Checks `dγ(e) = α²(e)` for every E-basis vector.
    pub fn is_admissible(&self, g: &GysinExtension, pk: &ProductKernelData) -> bool {
        (0..pk.e_basis.len()).all(|a| g.d(&self.gamma[a]) == self.alpha_squared(g, pk, a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BmEntry {
    /// Basis vector of `ℬ` in `𝒢²𝒢²H` coordinates of its degree.
    pub s22: Vec<Scalar>,
    /// The same vector as a combination of the block's `e_pairs`.
    pub e_pairs: Vec<Scalar>,
    /// `ℱ` of it, in cohomology coordinates.
    pub value: Vec<Scalar>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BianchiMasseyTensor {
    pub degrees: BTreeMap<u32, Vec<BmEntry>>,
}

impl BianchiMasseyTensor {
    pub fn vanishes_in(&self, m: u32) -> bool {
        self.degrees.get(&m).is_none_or(|v| v.iter().all(|e| is_zero_vec(&e.value)))
    }

    pub fn vanishes(&self) -> bool {
        self.degrees.keys().all(|&m| self.vanishes_in(m))
    }

    pub fn nonzero_degrees(&self) -> Vec<u32> {
        self.degrees.keys().copied().filter(|&m| !self.vanishes_in(m)).collect()
    }

    pub fn first_nonzero(&self, m: u32) -> Option<&BmEntry> {
        self.degrees.get(&m)?.iter().find(|e| !is_zero_vec(&e.value))
    }

    pub fn values(&self) -> Vec<(u32, Vec<Scalar>)> {
        self.degrees.iter().flat_map(|(m, v)| v.iter().map(move |e| (*m, e.value.clone()))).collect()
    }
}

/// `ℱ` on `ℬ^m` for each requested `m`, with the canonical choice.
pub fn bm_tensor(g: &GysinExtension, pk: &ProductKernelData, degrees: &[u32]) -> Result<BianchiMasseyTensor> {
    let choice = Choice::canonical(g, pk)?;
    bm_tensor_with(g, pk, &choice, degrees)
}

pub fn bm_tensor_with(
    g: &GysinExtension,
    pk: &ProductKernelData,
    choice: &Choice,
    degrees: &[u32],
) -> Result<BianchiMasseyTensor> {
    let squares: Vec<Vec<Scalar>> = (0..pk.e_basis.len()).map(|a| choice.alpha_squared(g, pk, a)).collect();
    let mut out = BianchiMasseyTensor::default();
    for &m in degrees {
        let Some(block) = pk.b.get(&m) else {
            out.degrees.insert(m, Vec::new());
            continue;
        };
        let mut entries = Vec::new();
        for (coef, s22) in block.in_e_pairs.iter().zip(block.subspace.basis()) {
            let mut chain = zero_vec(g.chain_dim());
            for (&(a, b), c) in block.e_pairs.iter().zip(coef) {
                if c.is_zero() {
                    continue;
                }
                let sign = koszul(pk.e_basis[a].0, pk.e_basis[b].0);
                let mut term = g.mul(&choice.gamma[a], &squares[b]);
                axpy(&mut term, &sign, &g.mul(&choice.gamma[b], &squares[a]));
                axpy(&mut chain, c, &term);
            }
            if !g.is_closed(&chain) {
                return Err(Error::Invariant(format!("ℱ representative in degree {m} is not closed")));
            }
            entries.push(BmEntry { s22: s22.clone(), e_pairs: coef.clone(), value: g.project(&chain)? });
        }
        out.degrees.insert(m, entries);
    }
    Ok(out)
}

/// `K[E ⊗ H]` in one degree and the values of `𝒯` on its basis.
#[derive(Clone, Debug)]
pub struct TBlock {
    pub degree: u32,
    /// Pairs `(E-basis index, cohomology basis index)`.
    pub pairs: Vec<(usize, usize)>,
    pub kernel: Vec<Vec<Scalar>>,
    pub values: Vec<Vec<Scalar>>,
}

#[derive(Clone, Debug)]
pub struct UniformMassey {
    pub choice: Choice,
    /// The correction added to the canonical `γ`, when one was made.
    pub eta: Option<Vec<Vec<Scalar>>>,
    pub blocks: BTreeMap<u32, TBlock>,
}

impl UniformMassey {
    pub fn vanishes(&self) -> bool {
        self.blocks.values().all(|b| b.values.iter().all(|v| is_zero_vec(v)))
    }
}

/// Degrees in which `𝒯` can be nonzero: the chain algebra is zero above its top degree.
fn t_degrees(g: &GysinExtension) -> u32 {
    g.chain().max_degree() + 1
}

/// `K[E ⊗ H]` in degree `m`: kernel of `e ⊗ x ↦ (e·x)` into `𝒢³H`.
pub fn tensor_kernel(g: &GysinExtension, pk: &ProductKernelData, m: u32) -> (Vec<(usize, usize)>, Vec<Vec<Scalar>>) {
    let h = g.cohomology();
    let mut pairs = Vec::new();
    for (a, (d, _)) in pk.e_basis.iter().enumerate() {
        if *d > m {
            continue;
        }
        for &x in h.degree_indices(m - d) {
            pairs.push((a, x));
        }
    }
    let hdeg: Vec<u32> = (0..h.dim()).map(|i| h.degree(i)).collect();
    let mut builder = SymmetrizationBuilder::new(&hdeg);
    for &(a, x) in &pairs {
        builder.start_column();
        for (p, c) in pk.e_basis[a].1.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = pk.sym2.element(p);
            builder.add(&[t[0], t[1], x], c);
        }
    }
    let kernel = kernel_basis(&builder.finish().matrix).into_basis();
    (pairs, kernel)
}

/// Evaluates `𝒯(Σ e ⊗ x) = [Σ γ(e) α(x)]` on `K[E ⊗ H]` in all degrees where it can be nonzero.
pub fn uniform_massey(g: &GysinExtension, pk: &ProductKernelData, choice: &Choice) -> Result<UniformMassey> {
    let mut blocks = BTreeMap::new();
    for m in 0..=t_degrees(g) {
        let (pairs, kernel) = tensor_kernel(g, pk, m);
        let mut values = Vec::with_capacity(kernel.len());
        for k in &kernel {
            let mut chain = zero_vec(g.chain_dim());
            for (&(a, x), c) in pairs.iter().zip(k) {
                if !c.is_zero() {
                    axpy(&mut chain, c, &g.mul(&choice.gamma[a], &choice.alpha[x]));
                }
            }
            if !g.is_closed(&chain) {
                return Err(Error::Invariant(format!("𝒯 representative in degree {m} is not closed")));
            }
            values.push(g.project(&chain)?);
        }
        blocks.insert(m, TBlock { degree: m, pairs, kernel, values });
    }
    Ok(UniformMassey { choice: choice.clone(), eta: None, blocks })
}

fn sym2_weight(g: &GysinExtension, pk: &ProductKernelData, k: usize) -> u32 {
    pk.sym2.element(k).iter().map(|&i| g.kind(i).weight()).sum()
}

/// Weight of a `𝒢²H` vector, or an invariant violation when it mixes weights.
fn vector_weight(g: &GysinExtension, pk: &ProductKernelData, v: &[Scalar]) -> Result<u32> {
    let mut w = None;
    for (k, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let wk = sym2_weight(g, pk, k);
        match w {
            None => w = Some(wk),
            Some(x) if x != wk => return Err(Error::Invariant("product-kernel vector mixes θ-weights".into())),
            _ => {}
        }
    }
    Ok(w.unwrap_or(0))
}

/// Builds `γ′ = γ + η` with `𝒯′ ≡ 0` and `im γ′ ⊆ 𝐈(θ)`; refuses when `ℱ` is nonzero on `ℬ^{n+1}`.
pub fn eta_correct(g: &GysinExtension, pk: &ProductKernelData, f: &BianchiMasseyTensor) -> Result<UniformMassey> {
    let h = g.cohomology();
    let ps = h.poincare_check()?;
    let n = h.formal_dimension();
    if !f.degrees.contains_key(&(n + 1)) {
        return Err(Error::Input(format!("ℱ was not evaluated in degree {}", n + 1)));
    }
    if !f.vanishes_in(n + 1) {
        return Err(Error::Refused(format!("ℱ is nonzero on ℬ^{}; no correction exists", n + 1)));
    }
    let canonical = Choice::canonical(g, pk)?;
    let hd = h.dim();

    let e_weight: Vec<u32> =
        pk.e_basis.iter().map(|(_, v)| vector_weight(g, pk, v)).collect::<Result<Vec<_>>>()?;
    let d_basis: Vec<(u32, Vec<Scalar>)> =
        pk.d.iter().flat_map(|(deg, s)| s.basis().iter().map(move |v| (*deg, v.clone()))).collect();
    let d_weight: Vec<u32> = d_basis.iter().map(|(_, v)| vector_weight(g, pk, v)).collect::<Result<Vec<_>>>()?;

    // Coordinates of each 𝒢²H basis element in E ⊕ D, per degree.
    let mut split: BTreeMap<u32, (Vec<usize>, Vec<usize>, Matrix)> = BTreeMap::new();
    for (&deg, e_sub) in &pk.e {
        let idx = pk.sym2.indices_in_degree(deg);
        let es: Vec<usize> = pk.e_in_degree(deg).collect();
        let ds: Vec<usize> = (0..d_basis.len()).filter(|&t| d_basis[t].0 == deg).collect();
        let cols: Vec<Vec<Scalar>> = es
            .iter()
            .map(|&a| &pk.e_basis[a].1)
            .chain(ds.iter().map(|&t| &d_basis[t].1))
            .map(|v| idx.iter().map(|&k| v[k].clone()).collect())
            .collect();
        debug_assert_eq!(e_sub.dim(), es.len());
        let inv = Matrix::from_columns(idx.len(), &cols)
            .inverse()
            .ok_or_else(|| Error::Invariant(format!("E and D do not split 𝒢²H in degree {deg}")))?;
        split.insert(deg, (es, ds, inv));
    }

    // K_0 ⊂ E_0 ⊗ (𝒢²H)_0 in degree n+1.
    let mut kpairs = Vec::new();
    for (a, (da, _)) in pk.e_basis.iter().enumerate() {
        if e_weight[a] != 0 || *da > n + 1 {
            continue;
        }
        for &s in pk.sym2.indices_in_degree(n + 1 - da) {
            if sym2_weight(g, pk, s) == 0 {
                kpairs.push((a, s));
            }
        }
    }
    let hdeg: Vec<u32> = (0..hd).map(|i| h.degree(i)).collect();
    let mut builder = SymmetrizationBuilder::new(&hdeg);
    for &(a, s) in &kpairs {
        builder.start_column();
        let t2 = pk.sym2.element(s);
        for (p, c) in pk.e_basis[a].1.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t1 = pk.sym2.element(p);
            builder.add(&[t1[0], t1[1], t2[0], t2[1]], c);
        }
    }
    let k0 = kernel_basis(&builder.finish().matrix).into_basis();

    // Target pairs (a, t) spanning E_0 ⊗ D_0 in degree n+1.
    let mut ed_pairs = Vec::new();
    for (a, (da, _)) in pk.e_basis.iter().enumerate() {
        if e_weight[a] != 0 {
            continue;
        }
        for (t, (dt, _)) in d_basis.iter().enumerate() {
            if d_weight[t] == 0 && da + dt == n + 1 {
                ed_pairs.push((a, t));
            }
        }
    }
    let ed_pos: BTreeMap<(usize, usize), usize> = ed_pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();

    let mut p_vecs = Vec::with_capacity(k0.len());
    let mut mu = Vec::with_capacity(k0.len());
    for k in &k0 {
        let mut pv = zero_vec(ed_pairs.len());
        let mut chain = zero_vec(g.chain_dim());
        for (&(a, s), c) in kpairs.iter().zip(k) {
            if c.is_zero() {
                continue;
            }
            let deg = pk.sym2.degree(s);
            let (es, ds, inv) = &split[&deg];
            let local = pk.sym2.indices_in_degree(deg).iter().position(|&x| x == s).expect("in degree block");
            let coords = inv.column(local);
            for (slot, &t) in ds.iter().enumerate() {
                let x = &coords[es.len() + slot];
                if x.is_zero() {
                    continue;
                }
                let pos = ed_pos
                    .get(&(a, t))
                    .ok_or_else(|| Error::Invariant("weight-0 element has a component outside D_0".into()))?;
                pv[*pos] += c * x;
            }
            let a2 = g.alpha_squared_with(&canonical.alpha, &pk.sym2, &unit_vec(pk.sym2.len(), s));
            axpy(&mut chain, c, &g.mul(&canonical.gamma[a], &a2));
        }
        if !g.is_closed(&chain) {
            return Err(Error::Invariant("μ representative is not closed".into()));
        }
        mu.push(ps.alpha(&g.project(&chain)?));
        p_vecs.push(pv);
    }

    // ℓ on E_0 ⊗ D_0: prescribed on im p, zero on the greedy complement.
    let image = Subspace::span(ed_pairs.len(), &p_vecs);
    let comp = complement_in(&image, &Subspace::full(ed_pairs.len())).map_err(|e| Error::Invariant(e.to_string()))?;
    let mut rows = p_vecs.clone();
    let mut rhs = mu.clone();
    for v in comp.basis() {
        rows.push(v.clone());
        rhs.push(Scalar::zero());
    }
    let ell = if ed_pairs.is_empty() {
        if mu.iter().any(|x| !x.is_zero()) {
            return Err(Error::Refused("μ is nonzero on a kernel with trivial projection".into()));
        }
        Vec::new()
    } else {
        solve_particular(&Matrix::from_rows_with_cols(&rows, ed_pairs.len()), &rhs)
            .ok_or_else(|| Error::Refused("μ does not factor through E ⊗ D".into()))?
    };

    // η(e): the θ-class whose pairing with c(d) is −ℓ(e ⊗ d).
    let c_of_d: Vec<Vec<Scalar>> = d_basis.iter().map(|(_, v)| pk.product.mul_vec(v)).collect();
    let mut eta = vec![zero_vec(g.chain_dim()); pk.e_basis.len()];
    for (a, (i, _)) in pk.e_basis.iter().enumerate() {
        if e_weight[a] != 0 || *i == 0 || *i > n + 1 {
            continue;
        }
        let unknowns: Vec<usize> =
            h.degree_indices(i - 1).iter().copied().filter(|&m| g.kind(m) == ClassKind::Theta).collect();
        let targets: Vec<usize> = (0..d_basis.len()).filter(|&t| d_basis[t].0 == n + 1 - i).collect();
        let f: Vec<Scalar> = targets
            .iter()
            .map(|&t| match ed_pos.get(&(a, t)) {
                Some(&pos) => -ell[pos].clone(),
                None => Scalar::zero(),
            })
            .collect();
        if f.iter().all(Zero::is_zero) {
            continue;
        }
        let mut sys = Matrix::zeros(targets.len(), unknowns.len());
        for (r, &t) in targets.iter().enumerate() {
            for (col, &m) in unknowns.iter().enumerate() {
                sys[(r, col)] = ps.alpha(&h.multiply(&unit_vec(hd, m), &c_of_d[t]));
            }
        }
        let coef = solve_particular(&sys, &f)
            .ok_or_else(|| Error::Invariant(format!("pairing solve for η failed in degree {}", i - 1)))?;
        for (&m, c) in unknowns.iter().zip(&coef) {
            axpy(&mut eta[a], c, g.alpha(m));
        }
    }

    let gamma: Vec<Vec<Scalar>> =
        canonical.gamma.iter().zip(&eta).map(|(x, y)| crate::exactla::add_vec(x, y)).collect();
    let corrected = Choice { alpha: canonical.alpha.clone(), gamma };
    if !corrected.is_admissible(g, pk) {
        return Err(Error::Invariant("dγ′ ≠ α² after correction".into()));
    }
    if !corrected.gamma.iter().all(|v| g.in_theta_ideal(v)) {
        return Err(Error::Invariant("γ′ leaves the ideal generated by θ".into()));
    }
    let mut t = uniform_massey(g, pk, &corrected)?;
    if !t.vanishes() {
        return Err(Error::Invariant("𝒯′ does not vanish after correction".into()));
    }
    t.eta = Some(eta);
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChoiceReport {
    pub seed: u64,
    pub trials: usize,
    pub entries_compared: usize,
    pub max_deviation: Scalar,
}

impl ChoiceReport {
    pub fn identical(&self) -> bool {
        self.max_deviation.is_zero()
    }
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let num: i64 = rng.gen_range(-4..=4);
    let den: i64 = rng.gen_range(1..=3);
    crate::exactla::frac(num, den)
}

fn random_in(rng: &mut ChaCha8Rng, a: &GradedAlgebra, d: u32) -> Vec<Scalar> {
    let mut v = zero_vec(a.dim());
    for &i in a.degree_indices(d) {
        v[i] = random_scalar(rng);
    }
    v
}

/// A random admissible choice: `α` shifted by exact elements on coker classes,
/// `γ` built from a perturbed right inverse of `ω` and shifted by closed chains.
pub fn random_choice(g: &GysinExtension, pk: &ProductKernelData, rng: &mut ChaCha8Rng) -> Result<Choice> {
    let a = g.base();
    let n = a.dim();
    let h = g.cohomology();
    let w = g.omega_degree();
    let mut alpha = g.alpha_all().to_vec();
    for (c, rep) in alpha.iter_mut().enumerate() {
        if g.kind(c) != ClassKind::Coker || h.degree(c) < w {
            continue;
        }
        let r = random_in(rng, a, h.degree(c) - w);
        let shift = a.multiply(g.omega(), &r);
        for (k, x) in shift.into_iter().enumerate() {
            rep[k] += x;
        }
    }
    let closed_theta = |rng: &mut ChaCha8Rng, deg: u32| -> Vec<Scalar> {
        // θ·(random element of ker ω)
        let mut z = zero_vec(2 * n);
        if deg >= g.theta_degree() {
            for m in h.degree_indices(deg) {
                if g.kind(*m) == ClassKind::Theta {
                    axpy(&mut z, &random_scalar(rng), g.alpha(*m));
                }
            }
        }
        z
    };
    let mut gamma = Vec::with_capacity(pk.e_basis.len());
    for (deg, e) in &pk.e_basis {
        let a2 = g.alpha_squared_with(&alpha, &pk.sym2, e);
        let mut gm = g.primitive(&a2)?;
        if *deg >= 1 {
            let target = deg - 1;
            let kshift = closed_theta(rng, target);
            for (k, x) in kshift.into_iter().enumerate() {
                gm[k] += x;
            }
            let base = random_in(rng, a, target);
            for (k, x) in base.into_iter().enumerate() {
                gm[k] += x;
            }
        }
        gamma.push(gm);
    }
    let choice = Choice { alpha, gamma };
    if !choice.is_admissible(g, pk) {
        return Err(Error::Invariant("random choice is not admissible".into()));
    }
    Ok(choice)
}

/// Re-derives `ℱ` under `trials` random admissible choices and compares with `reference` exactly.
pub fn choice_independence(
    g: &GysinExtension,
    pk: &ProductKernelData,
    reference: &BianchiMasseyTensor,
    trials: usize,
    seed: u64,
) -> Result<ChoiceReport> {
    let degrees: Vec<u32> = reference.degrees.keys().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_deviation = Scalar::zero();
    let mut compared = 0;
    for _ in 0..trials {
        let choice = random_choice(g, pk, &mut rng)?;
        let f = bm_tensor_with(g, pk, &choice, &degrees)?;
        for ((_, v1), (_, v2)) in reference.values().iter().zip(f.values()) {
            compared += 1;
            let diff = crate::exactla::max_abs(&sub_vec(v1, &v2));
            if diff > max_deviation {
                max_deviation = diff;
            }
        }
    }
    Ok(ChoiceReport { seed, trials, entries_compared: compared, max_deviation })
}

/// Human-readable form of an E-basis vector, e.g. `(a·b)` or `[(a·b)-(c·d)]`.
pub fn format_e(h: &GradedAlgebra, pk: &ProductKernelData, a: usize) -> String {
    let v = &pk.e_basis[a].1;
    let names = |k: usize| {
        let t = pk.sym2.element(k);
        format!("({}·{})", h.name(t[0]), h.name(t[1]))
    };
    let nz: Vec<usize> = (0..v.len()).filter(|&k| !v[k].is_zero()).collect();
    if nz.len() == 1 && v[nz[0]] == int(1) {
        names(nz[0])
    } else {
        format!("[{}]", crate::galg::format_combination(v, names, false))
    }
}

/// Human-readable form of a `ℬ` element given as a combination of E-pairs.
pub fn format_b(h: &GradedAlgebra, pk: &ProductKernelData, m: u32, coef: &[Scalar]) -> String {
    let block = &pk.b[&m];
    crate::galg::format_combination(
        coef,
        |i| {
            let (a, b) = block.e_pairs[i];
            format!("({}·{})", format_e(h, pk, a), format_e(h, pk, b))
        },
        true,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galg::BasisElement;
    use crate::sympow::product_kernel;

    fn alg(formal: u32, names: &[(&str, u32)], orient: usize, prods: &[(usize, usize, usize, i64)]) -> GradedAlgebra {
        let n = names.len();
        let basis = names.iter().map(|(s, d)| BasisElement::new(*s, *d)).collect();
        let products = prods
            .iter()
            .map(|&(i, j, k, c)| {
                let mut v = zero_vec(n);
                v[k] = int(c);
                ((i, j), v)
            })
            .collect();
        GradedAlgebra::new(formal, basis, 0, Some(orient), products).unwrap()
    }

    fn t2() -> GradedAlgebra {
        alg(2, &[("1", 0), ("a", 1), ("b", 1), ("ab", 2)], 3, &[(1, 2, 3, 1)])
    }

    fn cp2() -> GradedAlgebra {
        alg(4, &[("1", 0), ("x", 2), ("xx", 4)], 2, &[(1, 1, 2, 1)])
    }

    fn s2() -> GradedAlgebra {
        alg(2, &[("1", 0), ("x", 2)], 1, &[])
    }

    fn setup(a: &GradedAlgebra, w: Vec<Scalar>, d: u32) -> (GysinExtension, ProductKernelData) {
        let g = GysinExtension::extend(a, &w, d, true).unwrap();
        let n = g.cohomology().formal_dimension();
        let pk = product_kernel(g.cohomology(), n + 1);
        (g, pk)
    }

    #[test]
    fn torus_tensor_is_twice_theta_ab() {
        let (g, pk) = setup(&t2(), unit_vec(4, 3), 2);
        let f = bm_tensor(&g, &pk, &[4]).unwrap();
        let entries = &f.degrees[&4];
        assert_eq!(entries.len(), 1);
        let mut expect = zero_vec(6);
        expect[5] = int(2);
        assert_eq!(entries[0].value, expect);
        let h = g.cohomology();
        assert_eq!(format_b(h, &pk, 4, &entries[0].e_pairs), "((a·b)·(a·b))");
    }

    #[test]
    fn hopf_extension_has_empty_tensor() {
        let (g, pk) = setup(&s2(), unit_vec(2, 1), 2);
        let f = bm_tensor(&g, &pk, &[1, 2, 3, 4]).unwrap();
        assert!(f.degrees.values().all(Vec::is_empty));
    }

    #[test]
    fn zero_euler_class_tensor_vanishes() {
        let (g, pk) = setup(&t2(), zero_vec(4), 2);
        let n = g.cohomology().formal_dimension();
        let f = bm_tensor(&g, &pk, &(0..=n + 1).collect::<Vec<_>>()).unwrap();
        assert!(f.vanishes());
    }

    #[test]
    fn antisymmetric_part_is_exact() {
        let (g, pk) = setup(&t2(), unit_vec(4, 3), 2);
        let ch = Choice::canonical(&g, &pk).unwrap();
        for a in 0..pk.e_basis.len() {
            for b in 0..pk.e_basis.len() {
                let sign = koszul(pk.e_basis[a].0, pk.e_basis[b].0);
                let mut z = g.mul(&ch.gamma[a], &ch.alpha_squared(&g, &pk, b));
                axpy(&mut z, &-sign, &g.mul(&ch.gamma[b], &ch.alpha_squared(&g, &pk, a)));
                assert!(g.is_exact(&z), "({a},{b})");
            }
        }
    }

    #[test]
    fn torus_correction_is_refused() {
        let (g, pk) = setup(&t2(), unit_vec(4, 3), 2);
        let f = bm_tensor(&g, &pk, &[4]).unwrap();
        assert!(matches!(eta_correct(&g, &pk, &f), Err(Error::Refused(_))));
    }

    #[test]
    fn cp2_correction_kills_uniform_massey() {
        let (g, pk) = setup(&cp2(), unit_vec(3, 2), 4);
        let f = bm_tensor(&g, &pk, &[8]).unwrap();
        let t = eta_correct(&g, &pk, &f).unwrap();
        assert!(t.vanishes());
        assert!(t.choice.is_admissible(&g, &pk));
        let f2 = bm_tensor_with(&g, &pk, &t.choice, &[8]).unwrap();
        assert_eq!(f, f2);
    }

    #[test]
    fn hopf_correction_is_trivial() {
        let (g, pk) = setup(&s2(), unit_vec(2, 1), 2);
        let f = bm_tensor(&g, &pk, &[4]).unwrap();
        let t = eta_correct(&g, &pk, &f).unwrap();
        assert!(t.eta.unwrap().iter().all(|v| is_zero_vec(v)));
    }

    #[test]
    fn torus_tensor_is_choice_independent() {
        let (g, pk) = setup(&t2(), unit_vec(4, 3), 2);
        let f = bm_tensor(&g, &pk, &[4]).unwrap();
        let r = choice_independence(&g, &pk, &f, 50, 7).unwrap();
        assert!(r.identical());
        assert_eq!(r.entries_compared, 50);
    }

    #[test]
    fn random_choices_differ_from_canonical() {
        let (g, pk) = setup(&t2(), unit_vec(4, 3), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = random_choice(&g, &pk, &mut rng).unwrap();
        assert_ne!(c, Choice::canonical(&g, &pk).unwrap());
    }

    #[test]
    fn torus_uniform_massey_with_canonical_gamma() {
        let (g, pk) = setup(&t2(), unit_vec(4, 3), 2);
        let c = Choice::canonical(&g, &pk).unwrap();
        let t = uniform_massey(&g, &pk, &c).unwrap();
        // (a·b)⊗a symmetrizes to zero and evaluates to [θ·a].
        let block = &t.blocks[&3];
        assert!(!block.kernel.is_empty());
        assert!(!t.vanishes());
    }

    #[test]
    fn cp2_tensor_kernel_is_empty() {
        let (g, pk) = setup(&cp2(), unit_vec(3, 2), 4);
        let c = Choice::canonical(&g, &pk).unwrap();
        let t = uniform_massey(&g, &pk, &c).unwrap();
        assert!(t.blocks.values().all(|b| b.kernel.is_empty()));
    }
}
