//! Finite-dimensional graded-commutative unital algebras given by a basis and
//! structure constants.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::{is_zero_vec, zero_vec, Matrix, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: u32,
}

impl BasisElement {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        BasisElement { name: name.into(), degree }
    }
}

type Sparse = Vec<(usize, Scalar)>;

/// Koszul sign `(-1)^{p q}`.
pub fn koszul(p: u32, q: u32) -> Scalar {
    if (p % 2 == 1) && (q % 2 == 1) {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

pub fn is_odd(d: u32) -> bool {
    d % 2 == 1
}

/// Graded-commutative algebra over the rationals.
///
/// The full table of ordered products is stored; constructors only accept the
/// index-ordered half and derive the rest by the Koszul sign, so a freshly built
/// algebra is graded commutative off the diagonal by construction.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    formal_dimension: u32,
    basis: Vec<BasisElement>,
    unit: usize,
    orientation: Option<usize>,
    table: Vec<Sparse>,
    by_degree: BTreeMap<u32, Vec<usize>>,
    local: Vec<usize>,
}

impl fmt::Debug for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedAlgebra")
            .field("formal_dimension", &self.formal_dimension)
            .field("basis", &self.basis.iter().map(|b| format!("{}:{}", b.name, b.degree)).collect::<Vec<_>>())
            .field("unit", &self.unit)
            .field("orientation", &self.orientation)
            .finish()
    }
}

impl GradedAlgebra {
    pub fn format_vector(&self, v: &[Scalar]) -> String {
        format_combination(v, |i| self.name(i).to_string(), true)
    }

    /// Builds an algebra from products `(i, j) -> b_i b_j` with `i <= j`.
    ///
    /// Products involving the unit that are not listed default to the identity;
    /// pairs that are not listed are zero.
    pub fn new(
        formal_dimension: u32,
        basis: Vec<BasisElement>,
        unit: usize,
        orientation: Option<usize>,
        products: Vec<((usize, usize), Vec<Scalar>)>,
    ) -> Result<Self> {
        let n = basis.len();
        if unit >= n {
            return Err(Error::Input(format!("unit index {unit} out of range")));
        }
        if let Some(o) = orientation {
            if o >= n {
                return Err(Error::Input(format!("orientation index {o} out of range")));
            }
        }
        let mut seen = HashMap::new();
        for (k, b) in basis.iter().enumerate() {
            if let Some(prev) = seen.insert(b.name.clone(), k) {
                return Err(Error::Input(format!("duplicate basis name '{}' (elements {prev} and {k})", b.name)));
            }
        }
        let mut alg = GradedAlgebra {
            formal_dimension,
            basis,
            unit,
            orientation,
            table: vec![Vec::new(); n * n],
            by_degree: BTreeMap::new(),
            local: vec![0; n],
        };
        alg.index_degrees();
        let mut given = vec![false; n * n];
        for ((i, j), v) in products {
            if i >= n || j >= n {
                return Err(Error::Input(format!("product ({i},{j}) out of range")));
            }
            if i > j {
                return Err(Error::Input(format!("product ({i},{j}) must be listed with factors in basis order")));
            }
            if v.len() != n {
                return Err(Error::Input(format!("product ({i},{j}) has {} coefficients, expected {n}", v.len())));
            }
            if given[i * n + j] {
                return Err(Error::Input(format!(
                    "duplicate product {}*{}",
                    alg.basis[i].name, alg.basis[j].name
                )));
            }
            given[i * n + j] = true;
            let sparse = to_sparse(&v);
            let sign = koszul(alg.basis[i].degree, alg.basis[j].degree);
            if i != j {
                alg.table[j * n + i] = sparse.iter().map(|(k, c)| (*k, &sign * c)).collect();
            }
            alg.table[i * n + j] = sparse;
        }
        for k in 0..n {
            let (i, j) = if unit <= k { (unit, k) } else { (k, unit) };
            if !given[i * n + j] {
                alg.table[unit * n + k] = vec![(k, Scalar::one())];
                alg.table[k * n + unit] = vec![(k, Scalar::one())];
            }
        }
        Ok(alg)
    }

    fn index_degrees(&mut self) {
        self.by_degree.clear();
        for (k, b) in self.basis.iter().enumerate() {
            let block = self.by_degree.entry(b.degree).or_default();
            self.local[k] = block.len();
            block.push(k);
        }
    }

    pub fn formal_dimension(&self) -> u32 {
        self.formal_dimension
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].name
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn orientation(&self) -> Option<usize> {
        self.orientation
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn max_degree(&self) -> u32 {
        self.by_degree.keys().next_back().copied().unwrap_or(0)
    }

    /// Global indices of the basis elements of degree `d`, in basis order.
    pub fn degree_indices(&self, d: u32) -> &[usize] {
        self.by_degree.get(&d).map_or(&[], Vec::as_slice)
    }

    pub fn degree_dim(&self, d: u32) -> usize {
        self.degree_indices(d).len()
    }

    /// Position of basis element `i` inside its degree block.
    pub fn local_index(&self, i: usize) -> usize {
        self.local[i]
    }

    pub fn degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn unit_vector(&self) -> Vec<Scalar> {
        crate::exactla::unit_vec(self.dim(), self.unit)
    }

    /// Structure constants of `b_i b_j` as a sparse vector.
    pub fn product_sparse(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i * self.dim() + j]
    }

    pub fn product_basis(&self, i: usize, j: usize) -> Vec<Scalar> {
        let mut v = zero_vec(self.dim());
        for (k, c) in self.product_sparse(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    /// Overwrites the single ordered entry `b_i b_j` without touching `b_j b_i`.
    /// Intended for mutation testing and for reading back externally supplied tables.
    pub fn set_raw_product(&mut self, i: usize, j: usize, v: &[Scalar]) {
        let n = self.dim();
        self.table[i * n + j] = to_sparse(v);
    }

    pub fn multiply(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = zero_vec(n);
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i * n + j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    /// Degree of a homogeneous vector; `None` for zero, error when mixed.
    pub fn homogeneous_degree(&self, v: &[Scalar]) -> Result<Option<u32>> {
        if v.len() != self.dim() {
            return Err(Error::Input(format!("vector has {} coordinates, algebra has {}", v.len(), self.dim())));
        }
        let mut deg = None;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(self.degree(i)),
                Some(d) if d != self.degree(i) => {
                    return Err(Error::Input("vector is not homogeneous".into()));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Coordinates of `v` restricted to the degree-`d` block.
    pub fn to_local(&self, v: &[Scalar], d: u32) -> Vec<Scalar> {
        self.degree_indices(d).iter().map(|&i| v[i].clone()).collect()
    }

    pub fn from_local(&self, local: &[Scalar], d: u32) -> Vec<Scalar> {
        let mut v = zero_vec(self.dim());
        for (x, &i) in local.iter().zip(self.degree_indices(d)) {
            v[i] = x.clone();
        }
        v
    }

    /// Homogeneous components keyed by degree (zero components omitted).
    pub fn components(&self, v: &[Scalar]) -> BTreeMap<u32, Vec<Scalar>> {
        self.by_degree
            .keys()
            .filter_map(|&d| {
                let c = self.to_local(v, d);
                (!is_zero_vec(&c)).then_some((d, c))
            })
            .collect()
    }

    /// Matrix of `x -> v x` from degree `from` to degree `from + shift`, in local coordinates.
    pub fn left_multiplication(&self, v: &[Scalar], shift: u32, from: u32) -> Matrix {
        let src = self.degree_indices(from);
        let tgt_deg = from + shift;
        let mut m = Matrix::zeros(self.degree_dim(tgt_deg), src.len());
        for (col, &j) in src.iter().enumerate() {
            let p = self.multiply(v, &crate::exactla::unit_vec(self.dim(), j));
            for (row, &k) in self.degree_indices(tgt_deg).iter().enumerate() {
                m[(row, col)] = p[k].clone();
            }
        }
        m
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.basis.iter().map(|b| if is_odd(b.degree) { -1 } else { 1 }).sum()
    }

    /// Exhaustive check of the graded-commutative unital algebra axioms.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let n = self.dim();
        let mut out = Vec::new();
        if self.degree(self.unit) != 0 {
            out.push(Violation::UnitDegree { unit: self.name(self.unit).to_string() });
        }
        let d0 = self.degree_dim(0);
        if d0 != 1 {
            out.push(Violation::NotConnected { degree_zero_dim: d0 });
        }
        for i in 0..n {
            for j in 0..n {
                let target = self.degree(i) + self.degree(j);
                for (k, _) in self.product_sparse(i, j) {
                    if self.degree(*k) != target {
                        out.push(Violation::WrongDegree {
                            left: self.name(i).into(),
                            right: self.name(j).into(),
                            target: self.name(*k).into(),
                        });
                    }
                }
            }
        }
        for i in 0..n {
            for j in i..n {
                let sign = koszul(self.degree(i), self.degree(j));
                let ij = self.product_basis(i, j);
                let ji = self.product_basis(j, i);
                let consistent = ij.iter().zip(&ji).all(|(a, b)| *b == &sign * a);
                if !consistent {
                    out.push(Violation::Commutativity { left: self.name(i).into(), right: self.name(j).into() });
                }
            }
        }
        for k in 0..n {
            let e = crate::exactla::unit_vec(n, k);
            if self.product_basis(self.unit, k) != e || self.product_basis(k, self.unit) != e {
                out.push(Violation::UnitIdentity { element: self.name(k).into() });
            }
        }
        let top = self.max_degree();
        for i in 0..n {
            for j in 0..n {
                if self.degree(i) + self.degree(j) > top {
                    continue;
                }
                let ij = self.product_basis(i, j);
                for k in 0..n {
                    if self.degree(i) + self.degree(j) + self.degree(k) > top {
                        continue;
                    }
                    let left = self.multiply(&ij, &crate::exactla::unit_vec(n, k));
                    let jk = self.product_basis(j, k);
                    let right = self.multiply(&crate::exactla::unit_vec(n, i), &jk);
                    if left != right {
                        out.push(Violation::Associativity {
                            a: self.name(i).into(),
                            b: self.name(j).into(),
                            c: self.name(k).into(),
                        });
                    }
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    pub fn poincare_check(&self) -> Result<PoincareStructure> {
        let nu = self
            .orientation
            .ok_or_else(|| Error::Input("no orientation class given; Poincaré duality cannot be checked".into()))?;
        let n = self.formal_dimension;
        let top = n.max(self.max_degree());
        let mut pairings = BTreeMap::new();
        for d in 0..=top {
            let rows = self.degree_indices(d);
            let cols: &[usize] = if d <= n { self.degree_indices(n - d) } else { &[] };
            if rows.len() != cols.len() {
                return Err(Error::NotPoincare { degree: d });
            }
            let mut p = Matrix::zeros(rows.len(), cols.len());
            for (r, &i) in rows.iter().enumerate() {
                for (c, &j) in cols.iter().enumerate() {
                    p[(r, c)] = self.top_coefficient(nu, self.product_sparse(i, j));
                }
            }
            if p.rank() != rows.len() {
                return Err(Error::NotPoincare { degree: d });
            }
            pairings.insert(d, p);
        }
        Ok(PoincareStructure { orientation: nu, formal_dimension: n, pairings })
    }

    fn top_coefficient(&self, nu: usize, v: &[(usize, Scalar)]) -> Scalar {
        if self.degree(nu) != self.formal_dimension {
            return Scalar::zero();
        }
        v.iter().find(|(k, _)| *k == nu).map_or_else(Scalar::zero, |(_, c)| c.clone())
    }

    /// Graded tensor product `self ⊗ other` with `(a⊗b)(a'⊗b') = (-1)^{|b||a'|} aa'⊗bb'`.
    pub fn tensor_product(&self, other: &GradedAlgebra) -> Result<GradedAlgebra> {
        let clash = self.basis.iter().any(|b| other.index_of(&b.name).is_some());
        let rname = |j: usize| {
            if clash {
                format!("{}'", other.name(j))
            } else {
                other.name(j).to_string()
            }
        };
        let mut pairs: Vec<(usize, usize)> =
            (0..self.dim()).flat_map(|i| (0..other.dim()).map(move |j| (i, j))).collect();
        pairs.sort_by_key(|&(i, j)| (self.degree(i) + other.degree(j), i, j));
        let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let basis: Vec<BasisElement> = pairs
            .iter()
            .map(|&(i, j)| {
                let name = match (i == self.unit, j == other.unit) {
                    (true, true) => self.name(i).to_string(),
                    (false, true) => self.name(i).to_string(),
                    (true, false) => rname(j),
                    (false, false) => format!("{}_{}", self.name(i), rname(j)),
                };
                BasisElement::new(name, self.degree(i) + other.degree(j))
            })
            .collect();
        let n = pairs.len();
        let mut products = Vec::new();
        for p in 0..n {
            for q in p..n {
                let (a, b) = pairs[p];
                let (a2, b2) = pairs[q];
                let sign = koszul(other.degree(b), self.degree(a2));
                let mut v = zero_vec(n);
                for (k1, c1) in self.product_sparse(a, a2) {
                    for (k2, c2) in other.product_sparse(b, b2) {
                        v[pos[&(*k1, *k2)]] += &sign * c1 * c2;
                    }
                }
                products.push(((p, q), v));
            }
        }
        let orientation = match (self.orientation, other.orientation) {
            (Some(x), Some(y)) => Some(pos[&(x, y)]),
            _ => None,
        };
        GradedAlgebra::new(
            self.formal_dimension + other.formal_dimension,
            basis,
            pos[&(self.unit, other.unit)],
            orientation,
            products,
        )
    }
}

/// Writes `v` as `c*name` terms, e.g. `a - 1/2*b`; `0` for the zero vector.
pub fn format_combination(v: &[Scalar], name: impl Fn(usize) -> String, spaced: bool) -> String {
    let mut out = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let negative = c < &Scalar::zero();
        let mag = if negative { -c.clone() } else { c.clone() };
        let term = if mag.is_one() {
            name(i)
        } else {
            format!("{}*{}", crate::exactla::format_scalar(&mag), name(i))
        };
        match (out.is_empty(), negative, spaced) {
            (true, false, _) => out.push_str(&term),
            (true, true, _) => {
                out.push('-');
                out.push_str(&term);
            }
            (false, neg, true) => {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&term);
            }
            (false, neg, false) => {
                out.push(if neg { '-' } else { '+' });
                out.push_str(&term);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn to_sparse(v: &[Scalar]) -> Sparse {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k, c.clone())).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotConnected { degree_zero_dim: usize },
    UnitDegree { unit: String },
    WrongDegree { left: String, right: String, target: String },
    Commutativity { left: String, right: String },
    UnitIdentity { element: String },
    Associativity { a: String, b: String, c: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotConnected { degree_zero_dim } => {
                write!(f, "degree-0 component has dimension {degree_zero_dim}, expected 1")
            }
            Violation::UnitDegree { unit } => write!(f, "unit '{unit}' does not have degree 0"),
            Violation::WrongDegree { left, right, target } => {
                write!(f, "product {left}*{right} has a component on '{target}' of the wrong degree")
            }
            Violation::Commutativity { left, right } => {
                write!(f, "graded commutativity fails for ({left}, {right})")
            }
            Violation::UnitIdentity { element } => write!(f, "unit does not act as identity on '{element}'"),
            Violation::Associativity { a, b, c } => write!(f, "associativity fails for ({a}, {b}, {c})"),
        }
    }
}

/// Orientation data of a Poincaré algebra: `α_H` is the coefficient of `ν`.
#[derive(Clone, Debug)]
pub struct PoincareStructure {
    pub orientation: usize,
    pub formal_dimension: u32,
    pairings: BTreeMap<u32, Matrix>,
}

impl PoincareStructure {
    /// `P_d(x, y) = α_H(x y)` on `H^d x H^{n-d}` in local coordinates.
    pub fn pairing(&self, d: u32) -> Option<&Matrix> {
        self.pairings.get(&d)
    }

    pub fn alpha(&self, v: &[Scalar]) -> Scalar {
        v[self.orientation].clone()
    }
}
