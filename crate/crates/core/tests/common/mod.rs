#![allow(dead_code)]

use std::path::PathBuf;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sphere_formality::cli::format::{parse_algebra, parse_expr_in};
use sphere_formality::exactla::{frac, int, unit_vec, zero_vec, Matrix, Scalar};
use sphere_formality::galg::{BasisElement, GradedAlgebra};

pub const FIXTURES: &[&str] = &[
    "s2", "torus", "sigma2", "sigma3", "cp2", "cp3", "s2xs2", "s3xs3", "truncated-x3", "kodaira-thurston",
];

/// Fixtures whose underlying manifolds are formal.
pub const FORMAL_FIXTURES: &[&str] = &["s2", "torus", "sigma2", "sigma3", "cp2", "cp3", "s2xs2", "s3xs3", "truncated-x3"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(format!("{name}.alg"))
}

pub fn fixture(name: &str) -> GradedAlgebra {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    parse_algebra(&text).unwrap()
}

pub fn v(a: &GradedAlgebra, expr: &str) -> Vec<Scalar> {
    parse_expr_in(a, expr).unwrap()
}

pub fn orientation_vector(a: &GradedAlgebra) -> Vec<Scalar> {
    unit_vec(a.dim(), a.orientation().unwrap())
}

fn build(formal: u32, names: &[(String, u32)], orient: usize, products: Vec<((usize, usize), Vec<Scalar>)>) -> GradedAlgebra {
    let basis = names.iter().map(|(s, d)| BasisElement::new(s.clone(), *d)).collect();
    GradedAlgebra::new(formal, basis, 0, Some(orient), products).unwrap()
}

pub fn sphere(d: u32) -> GradedAlgebra {
    build(d, &[("1".into(), 0), (format!("s{d}"), d)], 1, vec![])
}

pub fn surface(genus: usize) -> GradedAlgebra {
    let mut names = vec![("1".to_string(), 0)];
    for i in 1..=genus {
        names.push((format!("a{i}"), 1));
        names.push((format!("b{i}"), 1));
    }
    names.push(("v".into(), 2));
    let n = names.len();
    let products = (0..genus)
        .map(|i| {
            let mut p = zero_vec(n);
            p[n - 1] = int(1);
            ((1 + 2 * i, 2 + 2 * i), p)
        })
        .collect();
    build(2, &names, n - 1, products)
}

pub fn projective(k: u32) -> GradedAlgebra {
    let names: Vec<(String, u32)> = (0..=k).map(|i| (if i == 0 { "1".into() } else { format!("x{i}") }, 2 * i)).collect();
    let n = names.len();
    let mut products = Vec::new();
    for i in 1..n {
        for j in i..n {
            if i + j < n {
                products.push(((i, j), unit_vec(n, i + j)));
            }
        }
    }
    build(2 * k, &names, n - 1, products)
}

/// The same algebra in the basis `c_i b_i`.
pub fn rescale(a: &GradedAlgebra, c: &[Scalar]) -> GradedAlgebra {
    let n = a.dim();
    let mut products = Vec::new();
    for i in 0..n {
        for j in i..n {
            let p = a.product_basis(i, j);
            let q: Vec<Scalar> = (0..n).map(|k| &p[k] * &c[i] * &c[j] / &c[k]).collect();
            products.push(((i, j), q));
        }
    }
    GradedAlgebra::new(a.formal_dimension(), a.basis().to_vec(), a.unit(), a.orientation(), products).unwrap()
}

pub fn random_scalar(rng: &mut ChaCha8Rng) -> Scalar {
    let mut num: i64 = rng.gen_range(-5..=5);
    if num == 0 {
        num = 1;
    }
    frac(num, rng.gen_range(1..=4))
}

/// A random Poincaré algebra: a product of spheres, surfaces and projective
/// spaces in a randomly rescaled basis.
pub fn random_poincare(rng: &mut ChaCha8Rng) -> GradedAlgebra {
    let factors = rng.gen_range(1..=2);
    let mut acc: Option<GradedAlgebra> = None;
    for _ in 0..factors {
        let f = match rng.gen_range(0..3) {
            0 => sphere(rng.gen_range(1..=5)),
            1 => surface(rng.gen_range(0..=2)),
            _ => projective(rng.gen_range(1..=3)),
        };
        acc = Some(match acc {
            None => f,
            Some(a) => a.tensor_product(&f).unwrap(),
        });
    }
    let a = acc.unwrap();
    let c: Vec<Scalar> = (0..a.dim()).map(|i| if i == a.unit() { Scalar::one() } else { random_scalar(rng) }).collect();
    rescale(&a, &c)
}

/// Graded-algebra axioms checked entry by entry.
pub fn brute_force_axioms(a: &GradedAlgebra) -> bool {
    let n = a.dim();
    let u = a.unit();
    let mul = |x: &[Scalar], j: usize| {
        let mut out = zero_vec(n);
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, p) in a.product_basis(i, j).iter().enumerate() {
                out[k] += c * p;
            }
        }
        out
    };
    for i in 0..n {
        if a.product_basis(u, i) != unit_vec(n, i) || a.product_basis(i, u) != unit_vec(n, i) {
            return false;
        }
        for j in 0..n {
            let p = a.product_basis(i, j);
            let sign = if a.degree(i) % 2 == 1 && a.degree(j) % 2 == 1 { int(-1) } else { int(1) };
            let q: Vec<Scalar> = a.product_basis(j, i).iter().map(|c| c * &sign).collect();
            if p != q {
                return false;
            }
            if p.iter().enumerate().any(|(k, c)| !c.is_zero() && a.degree(k) != a.degree(i) + a.degree(j)) {
                return false;
            }
            for k in 0..n {
                let left = mul(&p, k);
                let jk = a.product_basis(j, k);
                let mut right = zero_vec(n);
                for (t, c) in jk.iter().enumerate() {
                    if !c.is_zero() {
                        for (s, x) in a.product_basis(i, t).iter().enumerate() {
                            right[s] += c * x;
                        }
                    }
                }
                if left != right {
                    return false;
                }
            }
        }
    }
    true
}

/// Rank of multiplication by `w` (of degree `shift`) from degree `from`.
pub fn mult_rank(a: &GradedAlgebra, w: &[Scalar], shift: u32, from: u32) -> usize {
    let src = a.degree_indices(from);
    let tgt = a.degree_indices(from + shift);
    let mut m = Matrix::zeros(tgt.len(), src.len());
    for (c, &j) in src.iter().enumerate() {
        let p = a.multiply(w, &unit_vec(a.dim(), j));
        for (r, &i) in tgt.iter().enumerate() {
            m[(r, c)] = p[i].clone();
        }
    }
    m.rank()
}

/// `dim H_θ^i = dim coker(ω: A^{i−|ω|} → A^i) + dim ker(ω: A^{i−|θ|} → A^{i+1})`.
pub fn gysin_dimension(a: &GradedAlgebra, omega: &[Scalar], omega_degree: u32, i: u32) -> usize {
    let theta = omega_degree - 1;
    let coker = if i >= omega_degree {
        a.degree_dim(i) - mult_rank(a, omega, omega_degree, i - omega_degree)
    } else {
        a.degree_dim(i)
    };
    let ker = if i >= theta {
        let from = i - theta;
        a.degree_dim(from) - mult_rank(a, omega, omega_degree, from)
    } else {
        0
    };
    coker + ker
}

/// Every (fixture, Euler class, sphere dimension) pair used across the suites.
pub fn bundle_cases() -> Vec<(String, GradedAlgebra, Vec<Scalar>, u32)> {
    let mut out = Vec::new();
    for name in FIXTURES {
        let a = fixture(name);
        for d in (2..=a.formal_dimension()).step_by(2) {
            for &i in a.degree_indices(d) {
                out.push((format!("{name} e={}", a.name(i)), a.clone(), unit_vec(a.dim(), i), d - 1));
            }
            if a.degree_dim(d) > 1 {
                let all: Vec<Scalar> = (0..a.dim()).map(|k| if a.degree(k) == d { int(1) } else { int(0) }).collect();
                out.push((format!("{name} e=sum of degree {d}"), a.clone(), all, d - 1));
            }
        }
        out.push((format!("{name} e=0"), a.clone(), zero_vec(a.dim()), 1));
    }
    out
}
