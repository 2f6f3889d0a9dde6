//! The extension `A_θ = A ⊕ θA` with `dθ = ω` over an algebra with zero
//! differential, its cohomology `coker ω ⊕ θ ker ω`, and the canonical
//! choices `α`, `ω⁻¹`, `γ`.
//!
//! Chain elements are vectors of length `2N` (`N = dim A`): the first `N`
//! coordinates are `x`, the last `N` are `y`, for the element `x + θy`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::{
    complement_in, is_zero_vec, kernel_basis, solve_particular, unit_vec, zero_vec, Matrix, Scalar, Subspace,
};
use crate::galg::{format_combination, is_odd, BasisElement, GradedAlgebra};
use crate::sympow::Sym2Basis;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassKind {
    /// A class of `coker ω`, represented by a base element.
    Coker,
    /// A class `θy` with `y ∈ ker ω`.
    Theta,
}

impl ClassKind {
    /// Number of `θ` factors: 0 or 1.
    pub fn weight(self) -> u32 {
        match self {
            ClassKind::Coker => 0,
            ClassKind::Theta => 1,
        }
    }
}

/// Per base degree `d`: `im ω ⊆ A^d`, the chosen complement, `ω⁻¹` and `ker ω ⊆ A^d`.
#[derive(Clone, Debug)]
struct DegreeData {
    /// Local positions of the standard vectors spanning the complement of `im ω` in `A^d`.
    coker_positions: Vec<usize>,
    /// H indices of the coker classes, parallel to `coker_positions`.
    coker_classes: Vec<usize>,
    /// Inverse of `[complement | im ω basis]` in local coordinates of `A^d`.
    split_inverse: Matrix,
    /// `ω⁻¹: A^d → A^{d-|ω|}` in local coordinates.
    omega_inverse: Matrix,
    /// Basis of `ker(ω: A^d → A^{d+|ω|})`, local coordinates.
    kernel: Vec<Vec<Scalar>>,
    /// Left inverse of the kernel basis matrix.
    kernel_left_inverse: Matrix,
    /// H indices of the classes `θy`, parallel to `kernel`.
    theta_classes: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct GysinExtension {
    base: GradedAlgebra,
    omega: Vec<Scalar>,
    omega_degree: u32,
    theta_degree: u32,
    chain: GradedAlgebra,
    differential: Matrix,
    cohomology: GradedAlgebra,
    kinds: Vec<ClassKind>,
    alpha: Vec<Vec<Scalar>>,
    per_degree: BTreeMap<u32, DegreeData>,
}

impl GysinExtension {
    /// Builds `A_θ` for a homogeneous Euler class `omega` of even degree `omega_degree >= 2`.
    pub fn extend(a: &GradedAlgebra, omega: &[Scalar], omega_degree: u32, require_poincare: bool) -> Result<Self> {
        if let Err(v) = a.validate() {
            let list: Vec<String> = v.iter().take(5).map(ToString::to_string).collect();
            return Err(Error::Input(format!("base algebra is invalid: {}", list.join("; "))));
        }
        if omega.len() != a.dim() {
            return Err(Error::Input(format!("Euler class has {} coordinates, algebra has {}", omega.len(), a.dim())));
        }
        if is_odd(omega_degree) {
            return Err(Error::Input(format!(
                "Euler class of odd degree {omega_degree} is not supported (θ would be even and θ² ≠ 0)"
            )));
        }
        if omega_degree == 0 {
            return Err(Error::Input("Euler class must have positive degree".into()));
        }
        match a.homogeneous_degree(omega)? {
            Some(d) if d != omega_degree => {
                return Err(Error::Input(format!("Euler class has degree {d}, expected {omega_degree}")));
            }
            _ => {}
        }
        if require_poincare {
            a.poincare_check()?;
        }
        let theta_degree = omega_degree - 1;
        let n = a.dim();

        let mut per_degree = BTreeMap::new();
        for d in 0..=a.max_degree() {
            let dim_d = a.degree_dim(d);
            let from_below = if d >= omega_degree {
                a.left_multiplication(omega, omega_degree, d - omega_degree)
            } else {
                Matrix::zeros(dim_d, 0)
            };
            let cols: Vec<Vec<Scalar>> = (0..from_below.cols()).map(|j| from_below.column(j)).collect();
            let image = Subspace::span(dim_d, &cols);
            let comp = complement_in(&image, &Subspace::full(dim_d)).map_err(|e| Error::Invariant(e.to_string()))?;
            let coker_positions: Vec<usize> = comp
                .basis()
                .iter()
                .map(|v| v.iter().position(|c| !c.is_zero()).expect("standard vector"))
                .collect();
            let mut split_cols: Vec<Vec<Scalar>> = coker_positions.iter().map(|&p| unit_vec(dim_d, p)).collect();
            split_cols.extend(image.basis().iter().cloned());
            let split_inverse = Matrix::from_columns(dim_d, &split_cols)
                .inverse()
                .ok_or_else(|| Error::Invariant("complement and image do not split".into()))?;
            let lower = if d >= omega_degree { a.degree_dim(d - omega_degree) } else { 0 };
            let mut pre = Matrix::zeros(lower, dim_d);
            if lower > 0 {
                let mut s_cols: Vec<Vec<Scalar>> = vec![zero_vec(lower); coker_positions.len()];
                for v in image.basis() {
                    let x = solve_particular(&from_below, v)
                        .ok_or_else(|| Error::Invariant("image vector has no preimage".into()))?;
                    s_cols.push(x);
                }
                pre = Matrix::from_columns(lower, &s_cols).mul(&split_inverse);
            }
            let up = a.left_multiplication(omega, omega_degree, d);
            let kernel = kernel_basis(&up).into_basis();
            let kernel_left_inverse = left_inverse(&kernel, dim_d)?;
            per_degree.insert(
                d,
                DegreeData {
                    coker_positions,
                    coker_classes: Vec::new(),
                    split_inverse,
                    omega_inverse: pre,
                    kernel,
                    kernel_left_inverse,
                    theta_classes: Vec::new(),
                },
            );
        }

        let chain = chain_algebra(a, theta_degree)?;
        let mut differential = Matrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            let wy = a.multiply(omega, &unit_vec(n, j));
            for (k, c) in wy.iter().enumerate() {
                if !c.is_zero() {
                    differential[(k, n + j)] = c.clone();
                }
            }
        }

        // Cohomology basis ordered by degree, coker classes before θ-classes.
        let top = a.max_degree() + theta_degree;
        let mut basis = Vec::new();
        let mut kinds = Vec::new();
        let mut alpha = Vec::new();
        for deg in 0..=top {
            if let Some(dd) = per_degree.get_mut(&deg) {
                for &p in &dd.coker_positions {
                    let g = a.degree_indices(deg)[p];
                    dd.coker_classes.push(basis.len());
                    basis.push(BasisElement::new(a.name(g), deg));
                    kinds.push(ClassKind::Coker);
                    alpha.push(unit_vec(2 * n, g));
                }
            }
            if deg >= theta_degree {
                let base_deg = deg - theta_degree;
                if let Some(dd) = per_degree.get_mut(&base_deg) {
                    let idx = a.degree_indices(base_deg);
                    for y in &dd.kernel {
                        dd.theta_classes.push(basis.len());
                        let nonzero: Vec<usize> = (0..y.len()).filter(|&t| !y[t].is_zero()).collect();
                        let name = if nonzero.len() == 1 && y[nonzero[0]].is_one() {
                            let g = idx[nonzero[0]];
                            if g == a.unit() {
                                "θ".to_string()
                            } else {
                                format!("θ{}", a.name(g))
                            }
                        } else {
                            format!("θ[{}]", format_combination(y, |t| a.name(idx[t]).to_string(), false))
                        };
                        basis.push(BasisElement::new(name, deg));
                        kinds.push(ClassKind::Theta);
                        let mut chain_vec = zero_vec(2 * n);
                        for (t, c) in y.iter().enumerate() {
                            chain_vec[n + idx[t]] = c.clone();
                        }
                        alpha.push(chain_vec);
                    }
                }
            }
        }

        let orientation = a.orientation().filter(|&nu| a.degree(nu) == a.formal_dimension()).and_then(|nu| {
            alpha.iter().position(|v| {
                v.iter().enumerate().all(|(k, c)| if k == n + nu { c.is_one() } else { c.is_zero() })
            })
        });
        let mut ext = GysinExtension {
            base: a.clone(),
            omega: omega.to_vec(),
            omega_degree,
            theta_degree,
            chain,
            differential,
            cohomology: GradedAlgebra::new(0, vec![BasisElement::new("1", 0)], 0, None, vec![])?,
            kinds,
            alpha,
            per_degree,
        };
        let h_dim = basis.len();
        let mut products = Vec::new();
        for i in 0..h_dim {
            for j in i..h_dim {
                let z = ext.chain.multiply(&ext.alpha[i], &ext.alpha[j]);
                products.push(((i, j), ext.project(&z)?));
            }
        }
        let unit = ext.alpha.iter().position(|v| *v == unit_vec(2 * n, a.unit())).expect("unit class");
        ext.cohomology =
            GradedAlgebra::new(a.formal_dimension() + theta_degree, basis, unit, orientation, products)?;
        Ok(ext)
    }

    pub fn base(&self) -> &GradedAlgebra {
        &self.base
    }

    pub fn omega(&self) -> &[Scalar] {
        &self.omega
    }

    pub fn omega_degree(&self) -> u32 {
        self.omega_degree
    }

    pub fn theta_degree(&self) -> u32 {
        self.theta_degree
    }

    /// The chain algebra `A_θ`: basis `b_0..b_{N-1}, θb_0..θb_{N-1}`.
    pub fn chain(&self) -> &GradedAlgebra {
        &self.chain
    }

    pub fn differential(&self) -> &Matrix {
        &self.differential
    }

    pub fn chain_dim(&self) -> usize {
        2 * self.base.dim()
    }

    pub fn cohomology(&self) -> &GradedAlgebra {
        &self.cohomology
    }

    pub fn kind(&self, class: usize) -> ClassKind {
        self.kinds[class]
    }

    pub fn kinds(&self) -> &[ClassKind] {
        &self.kinds
    }

    pub fn d(&self, z: &[Scalar]) -> Vec<Scalar> {
        self.differential.mul_vec(z)
    }

    pub fn mul(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        self.chain.multiply(u, v)
    }

    /// Whether a chain lies in the ideal generated by `θ` (its `x` part vanishes).
    pub fn in_theta_ideal(&self, z: &[Scalar]) -> bool {
        is_zero_vec(&z[..self.base.dim()])
    }

    /// Canonical section: coker classes to their base representatives, `θy` to itself.
    pub fn alpha(&self, class: usize) -> &[Scalar] {
        &self.alpha[class]
    }

    pub fn alpha_all(&self) -> &[Vec<Scalar>] {
        &self.alpha
    }

    pub fn alpha_of(&self, h: &[Scalar]) -> Vec<Scalar> {
        apply_section(&self.alpha, h, self.chain_dim())
    }

    /// Cohomology class of a closed chain.
    pub fn project(&self, z: &[Scalar]) -> Result<Vec<Scalar>> {
        let n = self.base.dim();
        let mut out = zero_vec(self.cohomology_dim_hint());
        for (d, dd) in &self.per_degree {
            let x = self.base.to_local(&z[..n], *d);
            if !is_zero_vec(&x) {
                let split = dd.split_inverse.mul_vec(&x);
                for (t, &cls) in dd.coker_classes.iter().enumerate() {
                    out[cls] = split[t].clone();
                }
            }
            let y = self.base.to_local(&z[n..], *d);
            if !is_zero_vec(&y) {
                let coords = dd.kernel_left_inverse.mul_vec(&y);
                let back = combine(&dd.kernel, &coords, y.len());
                if back != y {
                    return Err(Error::Invariant("chain is not closed".into()));
                }
                for (t, &cls) in dd.theta_classes.iter().enumerate() {
                    out[cls] = coords[t].clone();
                }
            }
        }
        Ok(out)
    }

    fn cohomology_dim_hint(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_closed(&self, z: &[Scalar]) -> bool {
        is_zero_vec(&self.d(z))
    }

    /// Whether `z` is a boundary: `y = 0` and `x ∈ im ω`.
    pub fn is_exact(&self, z: &[Scalar]) -> bool {
        let n = self.base.dim();
        if !is_zero_vec(&z[n..]) {
            return false;
        }
        self.per_degree.iter().all(|(d, dd)| {
            let x = self.base.to_local(&z[..n], *d);
            let split = dd.split_inverse.mul_vec(&x);
            split[..dd.coker_positions.len()].iter().all(Zero::is_zero)
        })
    }

    /// `ω⁻¹` on a base vector: a preimage under `ω·` on `im ω`, zero on the complement.
    pub fn omega_inverse(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.base.dim());
        for (d, dd) in &self.per_degree {
            if *d < self.omega_degree || dd.omega_inverse.rows() == 0 {
                continue;
            }
            let local = self.base.to_local(x, *d);
            if is_zero_vec(&local) {
                continue;
            }
            let pre = dd.omega_inverse.mul_vec(&local);
            for (c, &g) in pre.iter().zip(self.base.degree_indices(d - self.omega_degree)) {
                out[g] = c.clone();
            }
        }
        out
    }

    /// A chain `w` with `dw = z` for an exact `z`, of the form `θ ω⁻¹(x)`.
    pub fn primitive(&self, z: &[Scalar]) -> Result<Vec<Scalar>> {
        if !self.is_exact(z) {
            return Err(Error::Invariant("chain is not exact".into()));
        }
        let n = self.base.dim();
        let mut w = zero_vec(2 * n);
        for (k, c) in self.omega_inverse(&z[..n]).into_iter().enumerate() {
            w[n + k] = c;
        }
        Ok(w)
    }

    /// `α²(e) = Σ e_k α(x_k) α(y_k)` for `e` in `𝒢²H` coordinates, using the section `alpha`.
    pub fn alpha_squared_with(&self, alpha: &[Vec<Scalar>], sym2: &Sym2Basis, e: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vec(self.chain_dim());
        for (k, c) in e.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = sym2.element(k);
            let p = self.chain.multiply(&alpha[t[0]], &alpha[t[1]]);
            crate::exactla::axpy(&mut out, c, &p);
        }
        out
    }

    /// `γ(e) = θ ω⁻¹ α²(e)`.
    pub fn gamma_canonical(&self, sym2: &Sym2Basis, e: &[Scalar]) -> Result<Vec<Scalar>> {
        let a2 = self.alpha_squared_with(&self.alpha, sym2, e);
        if !self.is_exact(&a2) {
            return Err(Error::Invariant("α²(e) is not exact; e is not in the product kernel".into()));
        }
        self.primitive(&a2)
    }

    /// Independent Gysin rank count: `dim A^i − rank(ω into A^i) + dim ker(ω on A^{i−|θ|})`.
    pub fn rank_nullity_dimension(&self, i: u32) -> usize {
        let a = &self.base;
        let rank_in = if i >= self.omega_degree {
            a.left_multiplication(&self.omega, self.omega_degree, i - self.omega_degree).rank()
        } else {
            0
        };
        let ker = if i >= self.theta_degree {
            let j = i - self.theta_degree;
            a.degree_dim(j) - a.left_multiplication(&self.omega, self.omega_degree, j).rank()
        } else {
            0
        };
        a.degree_dim(i) - rank_in + ker
    }
}

pub fn apply_section(alpha: &[Vec<Scalar>], h: &[Scalar], chain_dim: usize) -> Vec<Scalar> {
    let mut out = zero_vec(chain_dim);
    for (k, c) in h.iter().enumerate() {
        if !c.is_zero() {
            crate::exactla::axpy(&mut out, c, &alpha[k]);
        }
    }
    out
}

fn combine(basis: &[Vec<Scalar>], coords: &[Scalar], dim: usize) -> Vec<Scalar> {
    let mut out = zero_vec(dim);
    for (v, c) in basis.iter().zip(coords) {
        crate::exactla::axpy(&mut out, c, v);
    }
    out
}

fn left_inverse(basis: &[Vec<Scalar>], dim: usize) -> Result<Matrix> {
    if basis.is_empty() {
        return Ok(Matrix::zeros(0, dim));
    }
    let k = Matrix::from_columns(dim, basis);
    let kt = k.transpose();
    let gram = kt.mul(&k).inverse().ok_or_else(|| Error::Invariant("kernel basis is dependent".into()))?;
    Ok(gram.mul(&kt))
}

/// `A ⊗ Λθ` as a graded algebra: `b_i·θb_j = (−1)^{|b_i|} θ(b_i b_j)`, `θ·θ = 0`.
pub fn chain_algebra(a: &GradedAlgebra, theta_degree: u32) -> Result<GradedAlgebra> {
    let n = a.dim();
    let mut basis: Vec<BasisElement> = a.basis().to_vec();
    for (j, b) in a.basis().iter().enumerate() {
        let name = if j == a.unit() { "θ".to_string() } else { format!("θ{}", b.name) };
        basis.push(BasisElement::new(name, b.degree + theta_degree));
    }
    let mut products = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut v = zero_vec(2 * n);
            for (k, c) in a.product_sparse(i, j) {
                v[*k] = c.clone();
            }
            products.push(((i, j), v));
        }
        let sign = if is_odd(a.degree(i)) { -Scalar::one() } else { Scalar::one() };
        for j in 0..n {
            let mut v = zero_vec(2 * n);
            for (k, c) in a.product_sparse(i, j) {
                v[n + *k] = &sign * c;
            }
            products.push(((i, n + j), v));
        }
    }
    for i in n..2 * n {
        for j in i..2 * n {
            products.push(((i, j), zero_vec(2 * n)));
        }
    }
    GradedAlgebra::new(a.formal_dimension() + theta_degree, basis, a.unit(), None, products)
}
