//! Graded symmetric powers, symmetrisation maps and the kernels built from them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};

use crate::exactla::{complement_in, kernel_basis, zero_vec, Matrix, Scalar, Subspace};
use crate::galg::{is_odd, GradedAlgebra};

/// Sorts `idx` into nondecreasing order and returns the Koszul sign of the
/// permutation, or `None` when an odd index repeats (the product is zero).
pub fn sort_with_sign(idx: &mut [usize], degrees: &[u32]) -> Option<Scalar> {
    let mut negative = false;
    let n = idx.len();
    for pass in 0..n {
        for k in 0..n.saturating_sub(pass + 1) {
            if idx[k] > idx[k + 1] {
                if is_odd(degrees[idx[k]]) && is_odd(degrees[idx[k + 1]]) {
                    negative = !negative;
                }
                idx.swap(k, k + 1);
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1] && is_odd(degrees[w[0]])) {
        return None;
    }
    Some(if negative { -Scalar::one() } else { Scalar::one() })
}

/// Basis of `𝒢^k V` (optionally a single degree of it): nondecreasing index
/// tuples with no repeated odd index, ordered by (degree, indices).
#[derive(Clone, Debug)]
pub struct SymPowerBasis {
    k: usize,
    degrees: Vec<u32>,
    elements: Vec<Vec<usize>>,
    element_degree: Vec<u32>,
    index: HashMap<Vec<usize>, usize>,
    by_degree: BTreeMap<u32, Vec<usize>>,
}

pub type Sym2Basis = SymPowerBasis;
pub type Sym2Sym2Basis = SymPowerBasis;

impl SymPowerBasis {
    /// All of `𝒢^k V`, where `degrees` lists the degree of each basis vector of `V`.
    pub fn new(degrees: &[u32], k: usize) -> Self {
        Self::build(degrees, k, |_| true, None)
    }

    /// Only the degree-`d` part of `𝒢^k V`.
    pub fn in_degree(degrees: &[u32], k: usize, d: u32) -> Self {
        Self::build(degrees, k, |x| x == d, Some(d))
    }

    fn build(degrees: &[u32], k: usize, keep: impl Fn(u32) -> bool, bound: Option<u32>) -> Self {
        let mut found: Vec<(u32, Vec<usize>)> = Vec::new();
        let mut cur = Vec::with_capacity(k);
        enumerate(degrees, k, 0, 0, bound, &mut cur, &mut |t, d| {
            if keep(d) {
                found.push((d, t.to_vec()));
            }
        });
        found.sort();
        let mut basis = SymPowerBasis {
            k,
            degrees: degrees.to_vec(),
            elements: Vec::with_capacity(found.len()),
            element_degree: Vec::with_capacity(found.len()),
            index: HashMap::with_capacity(found.len()),
            by_degree: BTreeMap::new(),
        };
        for (pos, (d, t)) in found.into_iter().enumerate() {
            basis.index.insert(t.clone(), pos);
            basis.by_degree.entry(d).or_default().push(pos);
            basis.elements.push(t);
            basis.element_degree.push(d);
        }
        basis
    }

    pub fn power(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &[usize] {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.element_degree[i]
    }

    pub fn element_degrees(&self) -> &[u32] {
        &self.element_degree
    }

    pub fn ambient_degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn indices_in_degree(&self, d: u32) -> &[usize] {
        self.by_degree.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn position(&self, sorted: &[usize]) -> Option<usize> {
        self.index.get(sorted).copied()
    }

    /// Coordinate and sign of the product of the given factors: `None` when the
    /// product vanishes. Panics if the product is nonzero but lies outside the
    /// enumerated degrees, which is a caller bug.
    pub fn canonical(&self, factors: &[usize]) -> Option<(usize, Scalar)> {
        let mut t = factors.to_vec();
        let sign = sort_with_sign(&mut t, &self.degrees)?;
        let pos = self
            .position(&t)
            .unwrap_or_else(|| panic!("product {factors:?} lies outside the enumerated symmetric power"));
        Some((pos, sign))
    }

    pub fn name(&self, i: usize, names: &dyn Fn(usize) -> String) -> String {
        let parts: Vec<String> = self.elements[i].iter().map(|&x| names(x)).collect();
        format!("({})", parts.join("·"))
    }
}

fn enumerate(
    degrees: &[u32],
    k: usize,
    start: usize,
    acc: u32,
    bound: Option<u32>,
    cur: &mut Vec<usize>,
    out: &mut dyn FnMut(&[usize], u32),
) {
    if cur.len() == k {
        out(cur, acc);
        return;
    }
    for i in start..degrees.len() {
        let d = acc + degrees[i];
        if bound.is_some_and(|b| d > b) {
            continue;
        }
        if cur.last() == Some(&i) && is_odd(degrees[i]) {
            continue;
        }
        cur.push(i);
        enumerate(degrees, k, i, d, bound, cur, out);
        cur.pop();
    }
}

/// Matrix of a symmetrisation map whose target rows are the sorted index tuples
/// that actually occur, in lexicographic order.
#[derive(Clone, Debug)]
pub struct Symmetrization {
    pub rows: Vec<Vec<usize>>,
    pub matrix: Matrix,
}

/// Accumulates columns of a map into a graded symmetric power of `V`.
pub struct SymmetrizationBuilder<'a> {
    degrees: &'a [u32],
    columns: Vec<BTreeMap<Vec<usize>, Scalar>>,
}

impl<'a> SymmetrizationBuilder<'a> {
    pub fn new(degrees: &'a [u32]) -> Self {
        SymmetrizationBuilder { degrees, columns: Vec::new() }
    }

    pub fn start_column(&mut self) {
        self.columns.push(BTreeMap::new());
    }

    /// Adds `coeff · (f_1 · f_2 · ...)` to the current column.
    pub fn add(&mut self, factors: &[usize], coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        let mut t = factors.to_vec();
        if let Some(sign) = sort_with_sign(&mut t, self.degrees) {
            let col = self.columns.last_mut().expect("start_column before add");
            let entry = col.entry(t).or_insert_with(Scalar::zero);
            *entry += sign * coeff;
        }
    }

    pub fn finish(self) -> Symmetrization {
        let keys: BTreeSet<Vec<usize>> = self
            .columns
            .iter()
            .flat_map(|c| c.iter().filter(|(_, v)| !v.is_zero()).map(|(k, _)| k.clone()))
            .collect();
        let rows: Vec<Vec<usize>> = keys.into_iter().collect();
        let pos: HashMap<&Vec<usize>, usize> = rows.iter().enumerate().map(|(i, r)| (r, i)).collect();
        let mut matrix = Matrix::zeros(rows.len(), self.columns.len());
        for (j, col) in self.columns.iter().enumerate() {
            for (key, v) in col {
                if !v.is_zero() {
                    matrix[(pos[key], j)] = v.clone();
                }
            }
        }
        Symmetrization { rows, matrix }
    }
}

/// Full graded symmetrisation `((x·y)·(z·w)) ↦ (x·y·z·w)` on the columns of `s22`,
/// which must be a power-2 basis over the degrees of `sym2`.
pub fn symmetrize_to_g4(sym2: &Sym2Basis, s22: &Sym2Sym2Basis) -> Symmetrization {
    let mut b = SymmetrizationBuilder::new(sym2.ambient_degrees());
    for pq in s22.elements() {
        b.start_column();
        let mut f = sym2.element(pq[0]).to_vec();
        f.extend_from_slice(sym2.element(pq[1]));
        b.add(&f, &Scalar::one());
    }
    b.finish()
}

/// Sum of `coeff (x·y)` over a vector in `𝒢²` coordinates, for `x` in `a`, `y` in `b`.
pub fn sym2_product(sym2: &Sym2Basis, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = zero_vec(sym2.len());
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            if let Some((k, s)) = sym2.canonical(&[i, j]) {
                out[k] += s * x * y;
            }
        }
    }
    out
}

/// The product map `c: 𝒢²H → H`, one column per `𝒢²H` basis element.
pub fn product_matrix(h: &GradedAlgebra, sym2: &Sym2Basis) -> Matrix {
    let mut m = Matrix::zeros(h.dim(), sym2.len());
    for (col, t) in sym2.elements().iter().enumerate() {
        for (k, c) in h.product_sparse(t[0], t[1]) {
            m[(*k, col)] = c.clone();
        }
    }
    m
}

/// Degree-`m` part of `ℬ = 𝒢²E ∩ K[𝒢²𝒢²H]`.
#[derive(Clone, Debug)]
pub struct BBlock {
    pub degree: u32,
    /// Basis of `𝒢²𝒢²H` in this degree (pairs of `𝒢²H` indices).
    pub s22: Sym2Sym2Basis,
    /// Unordered pairs `(a, b)` of global E-basis indices spanning `𝒢²E` here.
    pub e_pairs: Vec<(usize, usize)>,
    /// Basis of `ℬ` as combinations of `e_pairs`.
    pub in_e_pairs: Vec<Vec<Scalar>>,
    /// The same basis in `𝒢²𝒢²H` coordinates.
    pub subspace: Subspace,
}

#[derive(Clone, Debug)]
pub struct ProductKernelData {
    pub sym2: Sym2Basis,
    /// `c` as a matrix `𝒢²H → H`.
    pub product: Matrix,
    /// `E = ker c` per degree, in global `𝒢²H` coordinates.
    pub e: BTreeMap<u32, Subspace>,
    /// Greedy complement of `E` per degree, global `𝒢²H` coordinates.
    pub d: BTreeMap<u32, Subspace>,
    /// All E basis vectors in degree order, with their degrees.
    pub e_basis: Vec<(u32, Vec<Scalar>)>,
    pub b: BTreeMap<u32, BBlock>,
}

impl ProductKernelData {
    pub fn e_in_degree(&self, d: u32) -> impl Iterator<Item = usize> + '_ {
        self.e_basis.iter().enumerate().filter(move |(_, (g, _))| *g == d).map(|(i, _)| i)
    }
}

/// Computes `E`, `D` and `ℬ` for the cohomology algebra `h`; `ℬ` is computed in
/// degrees up to `max_b_degree`.
pub fn product_kernel(h: &GradedAlgebra, max_b_degree: u32) -> ProductKernelData {
    let hdeg: Vec<u32> = (0..h.dim()).map(|i| h.degree(i)).collect();
    let sym2 = SymPowerBasis::new(&hdeg, 2);
    let product = product_matrix(h, &sym2);
    let mut e = BTreeMap::new();
    let mut d = BTreeMap::new();
    let mut e_basis = Vec::new();
    let degs: Vec<u32> = sym2.element_degrees().iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    for &deg in &degs {
        let cols = sym2.indices_in_degree(deg);
        let rows = h.degree_indices(deg);
        let mut local = Matrix::zeros(rows.len(), cols.len());
        for (r, &i) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                local[(r, c)] = product[(i, j)].clone();
            }
        }
        let ker = kernel_basis(&local);
        let full = Subspace::full(cols.len());
        let comp = complement_in(&ker, &full).expect("kernel lies in the ambient space");
        let globalize = |v: &[Scalar]| {
            let mut g = zero_vec(sym2.len());
            for (x, &j) in v.iter().zip(cols) {
                g[j] = x.clone();
            }
            g
        };
        let eg: Vec<Vec<Scalar>> = ker.basis().iter().map(|v| globalize(v)).collect();
        let dg: Vec<Vec<Scalar>> = comp.basis().iter().map(|v| globalize(v)).collect();
        for v in &eg {
            e_basis.push((deg, v.clone()));
        }
        e.insert(deg, Subspace::from_basis(sym2.len(), eg).expect("independent"));
        d.insert(deg, Subspace::from_basis(sym2.len(), dg).expect("independent"));
    }
    let mut data = ProductKernelData { sym2, product, e, d, e_basis, b: BTreeMap::new() };
    let top = data.e_basis.iter().map(|(g, _)| *g).max().unwrap_or(0);
    for m in 0..=max_b_degree.min(2 * top) {
        data.b.insert(m, b_block(&data, m));
    }
    data
}

/// Computes `ℬ^m` as the image of `ker(S ∘ ι)` under the inclusion
/// `ι: 𝒢²E → 𝒢²𝒢²H`; `ι` is injective, so this is the intersection.
fn b_block(data: &ProductKernelData, m: u32) -> BBlock {
    let sym2 = &data.sym2;
    let s22 = SymPowerBasis::in_degree(sym2.element_degrees(), 2, m);
    let eb = &data.e_basis;
    let mut e_pairs = Vec::new();
    for a in 0..eb.len() {
        for b in a..eb.len() {
            if eb[a].0 + eb[b].0 != m || (a == b && is_odd(eb[a].0)) {
                continue;
            }
            e_pairs.push((a, b));
        }
    }
    let supports: Vec<Vec<(usize, &Scalar)>> =
        eb.iter().map(|(_, v)| v.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()).collect();
    let mut builder = SymmetrizationBuilder::new(sym2.ambient_degrees());
    for &(a, b) in &e_pairs {
        builder.start_column();
        for &(p, x) in &supports[a] {
            for &(q, y) in &supports[b] {
                let mut f = sym2.element(p).to_vec();
                f.extend_from_slice(sym2.element(q));
                builder.add(&f, &(x * y));
            }
        }
    }
    let sym = builder.finish();
    let ker = kernel_basis(&sym.matrix);
    let in_e_pairs: Vec<Vec<Scalar>> = ker.into_basis();
    let vectors: Vec<Vec<Scalar>> = in_e_pairs
        .iter()
        .map(|coef| {
            let mut v = zero_vec(s22.len());
            for (&(a, b), c) in e_pairs.iter().zip(coef) {
                if c.is_zero() {
                    continue;
                }
                for &(p, x) in &supports[a] {
                    for &(q, y) in &supports[b] {
                        if let Some((k, s)) = s22.canonical(&[p, q]) {
                            v[k] += s * c * x * y;
                        }
                    }
                }
            }
            v
        })
        .collect();
    let subspace = Subspace::from_basis(s22.len(), vectors).expect("inclusion of 𝒢²E is injective");
    BBlock { degree: m, s22, e_pairs, in_e_pairs, subspace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{int, intersect, unit_vec};
    use crate::galg::BasisElement;
    use proptest::prelude::*;

    #[test]
    fn even_diagonal_survives() {
        let b = SymPowerBasis::new(&[2], 2);
        assert_eq!(b.elements(), &[vec![0, 0]]);
    }

    #[test]
    fn odd_diagonal_dies() {
        assert!(SymPowerBasis::new(&[1], 2).is_empty());
    }

    #[test]
    fn two_odd_classes() {
        let b = SymPowerBasis::new(&[1, 1], 2);
        assert_eq!(b.elements(), &[vec![0, 1]]);
        assert_eq!(b.canonical(&[1, 0]), Some((0, int(-1))));
    }

    #[test]
    fn block_dimensions() {
        for m in 0..6usize {
            assert_eq!(SymPowerBasis::new(&vec![2; m], 2).len(), m * (m + 1) / 2);
            assert_eq!(SymPowerBasis::new(&vec![3; m], 2).len(), m * m.saturating_sub(1) / 2);
        }
    }

    #[test]
    fn even_fourth_power_maps_to_one() {
        let sym2 = SymPowerBasis::new(&[2], 2);
        let s22 = SymPowerBasis::new(sym2.element_degrees(), 2);
        let s = symmetrize_to_g4(&sym2, &s22);
        assert_eq!(s.rows, vec![vec![0, 0, 0, 0]]);
        assert_eq!(s.matrix, Matrix::from_i64(&[&[1]]));
    }

    #[test]
    fn odd_square_of_pair_symmetrizes_to_zero() {
        let sym2 = SymPowerBasis::new(&[1, 1], 2);
        let s22 = SymPowerBasis::new(sym2.element_degrees(), 2);
        assert_eq!(s22.len(), 1);
        let s = symmetrize_to_g4(&sym2, &s22);
        assert!(s.matrix.is_zero());
    }

    fn g4_image(sym2: &Sym2Basis, p: &[usize], q: &[usize]) -> BTreeMap<Vec<usize>, Scalar> {
        let mut f = p.to_vec();
        f.extend_from_slice(q);
        let mut b = SymmetrizationBuilder::new(sym2.ambient_degrees());
        b.start_column();
        let p2 = sym2.canonical(p);
        let q2 = sym2.canonical(q);
        if let (Some((_, s1)), Some((_, s2))) = (p2, q2) {
            let mut g = sym2.element(sym2.canonical(p).unwrap().0).to_vec();
            g.extend_from_slice(sym2.element(sym2.canonical(q).unwrap().0));
            b.add(&g, &(s1 * s2));
        }
        let s = b.finish();
        s.rows.into_iter().enumerate().map(|(i, r)| (r, s.matrix[(i, 0)].clone())).collect()
    }

    #[test]
    fn swapping_middle_factors_is_in_kernel() {
        let degs = [1, 2, 3, 1];
        let sym2 = SymPowerBasis::new(&degs, 2);
        let (x, y, z, w) = (0, 1, 2, 3);
        let lhs = g4_image(&sym2, &[x, y], &[z, w]);
        let rhs = g4_image(&sym2, &[x, z], &[y, w]);
        let sign = crate::galg::koszul(degs[y], degs[z]);
        for (k, v) in &lhs {
            assert_eq!(*v, &sign * rhs.get(k).cloned().unwrap_or_else(Scalar::zero));
        }
        assert_eq!(lhs.len(), rhs.len());
    }

    fn sign_by_inversions(idx: &[usize], degrees: &[u32]) -> Scalar {
        let mut s = Scalar::one();
        for a in 0..idx.len() {
            for b in a + 1..idx.len() {
                if idx[a] > idx[b] && is_odd(degrees[idx[a]]) && is_odd(degrees[idx[b]]) {
                    s = -s;
                }
            }
        }
        s
    }

    proptest! {
        #[test]
        fn sorting_sign_is_path_independent(
            degrees in prop::collection::vec(0u32..4, 6),
            perm in Just((0..6usize).collect::<Vec<_>>()).prop_shuffle(),
            len in 2usize..6,
        ) {
            let idx: Vec<usize> = perm[..len].to_vec();
            let mut sorted = idx.clone();
            let s = sort_with_sign(&mut sorted, &degrees).unwrap();
            prop_assert_eq!(s, sign_by_inversions(&idx, &degrees));
        }
    }

    fn s3() -> GradedAlgebra {
        GradedAlgebra::new(3, vec![BasisElement::new("1", 0), BasisElement::new("z", 3)], 0, Some(1), vec![]).unwrap()
    }

    #[test]
    fn three_sphere_has_no_product_kernel() {
        let k = product_kernel(&s3(), 8);
        for deg in 1..6 {
            assert_eq!(k.e.get(&deg).map_or(0, Subspace::dim), 0, "degree {deg}");
        }
        assert!(k.b.values().all(|b| b.subspace.dim() == 0));
    }

    /// Cohomology of the Heisenberg nilmanifold: 1, a, b, θa, θb, θab.
    pub(crate) fn heisenberg() -> GradedAlgebra {
        let names = [("1", 0), ("a", 1), ("b", 1), ("ta", 2), ("tb", 2), ("tab", 3)];
        let basis = names.iter().map(|(n, d)| BasisElement::new(*n, *d)).collect();
        let n = 6;
        let mut neg = zero_vec(n);
        neg[5] = int(-1);
        // a·θb = -θab, b·θa = θab
        let products = vec![((1, 4), neg), ((2, 3), unit_vec(n, 5))];
        GradedAlgebra::new(3, basis, 0, Some(5), products).unwrap()
    }

    #[test]
    fn heisenberg_kernel_and_b() {
        let h = heisenberg();
        assert!(h.validate().is_ok());
        let k = product_kernel(&h, 4);
        let ab = k.sym2.position(&[1, 2]).unwrap();
        assert!(k.e[&2].contains(&unit_vec(k.sym2.len(), ab)));
        let b4 = &k.b[&4];
        let pp = b4.s22.position(&[ab, ab]).unwrap();
        assert!(b4.subspace.contains(&unit_vec(b4.s22.len(), pp)));
    }

    #[test]
    fn b_agrees_with_generic_intersection() {
        let h = heisenberg();
        let k = product_kernel(&h, 4);
        for (m, block) in &k.b {
            let s22 = &block.s22;
            let sym = symmetrize_to_g4(&k.sym2, s22);
            let kk = kernel_basis(&sym.matrix);
            let mut g2e = Vec::new();
            for &(a, b) in &block.e_pairs {
                let mut v = zero_vec(s22.len());
                for (p, x) in k.e_basis[a].1.iter().enumerate() {
                    for (q, y) in k.e_basis[b].1.iter().enumerate() {
                        if x.is_zero() || y.is_zero() {
                            continue;
                        }
                        if let Some((idx, s)) = s22.canonical(&[p, q]) {
                            v[idx] += s * x * y;
                        }
                    }
                }
                g2e.push(v);
            }
            let span = Subspace::span(s22.len(), &g2e);
            let generic = intersect(&span, &kk).unwrap();
            assert!(generic.same_as(&block.subspace), "degree {m}");
        }
    }

    #[test]
    fn cp2_extension_has_no_b_in_degree_eight() {
        // 1, x, θx, θx² in degrees 0, 2, 5, 7
        let basis = vec![
            BasisElement::new("1", 0),
            BasisElement::new("x", 2),
            BasisElement::new("tx", 5),
            BasisElement::new("txx", 7),
        ];
        let h = GradedAlgebra::new(7, basis, 0, Some(3), vec![((1, 1), zero_vec(4)), ((1, 2), unit_vec(4, 3))]).unwrap();
        assert!(h.validate().is_ok());
        let k = product_kernel(&h, 8);
        assert_eq!(k.b.get(&8).map_or(0, |b| b.subspace.dim()), 0);
        let xx = k.sym2.position(&[1, 1]).unwrap();
        assert!(k.e[&4].contains(&unit_vec(k.sym2.len(), xx)));
    }

    #[test]
    fn e_and_d_split_and_c_injective_on_d() {
        let h = heisenberg();
        let k = product_kernel(&h, 4);
        for (deg, e) in &k.e {
            let d = &k.d[deg];
            assert_eq!(e.dim() + d.dim(), k.sym2.indices_in_degree(*deg).len());
            assert_eq!(e.sum(d).dim(), e.dim() + d.dim());
            for v in e.basis() {
                assert!(crate::exactla::is_zero_vec(&k.product.mul_vec(v)));
            }
            let images: Vec<Vec<Scalar>> = d.basis().iter().map(|v| k.product.mul_vec(v)).collect();
            assert_eq!(Subspace::span(h.dim(), &images).dim(), d.dim());
        }
    }
}
