//! Finite-dimensional CDGAs presented by a basis, structure constants and a
//! differential matrix. Basis element 0 is always the unit, of degree 0; all
//! other basis elements have positive degree.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{AlgebraError, ParseError, ParseErrorKind};
use crate::gca::format_terms;
use crate::linalg::{self, Echelon};
use crate::parse;
use crate::{rat, Rational, SparseVec};

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteCdga {
    label: String,
    names: Vec<String>,
    degrees: Vec<u32>,
    /// `products[u][v]` expands `b_u * b_v` in the basis.
    products: Vec<Vec<SparseVec>>,
    differential: Vec<SparseVec>,
    by_degree: Vec<Vec<usize>>,
}

/// Accumulates basis elements, products and differentials by name, then
/// validates every axiom in [`FiniteCdgaBuilder::build`].
///
/// Products involving the unit are implied. A product given for `(u, v)`
/// but not `(v, u)` is completed by graded commutativity; when both are
/// given they must agree.
#[derive(Debug, Clone, Default)]
pub struct FiniteCdgaBuilder {
    label: String,
    names: Vec<String>,
    degrees: Vec<u32>,
    products: BTreeMap<(usize, usize), SparseVec>,
    differential: BTreeMap<usize, SparseVec>,
}

fn add_into(acc: &mut BTreeMap<usize, Rational>, i: usize, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(i).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&i);
    }
}

pub(crate) fn sparse_from_map(m: BTreeMap<usize, Rational>) -> SparseVec {
    m.into_iter().collect()
}

fn koszul(p: u32, q: u32) -> Rational {
    if p % 2 == 1 && q % 2 == 1 {
        rat(-1)
    } else {
        rat(1)
    }
}

impl FiniteCdgaBuilder {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            names: vec!["1".to_string()],
            degrees: vec![0],
            ..Default::default()
        }
    }

    /// Adds a basis element; returns its index.
    pub fn element(&mut self, name: impl Into<String>, degree: u32) -> Result<usize, AlgebraError> {
        let name = name.into();
        if degree == 0 {
            return Err(AlgebraError::ZeroDegree(name));
        }
        if self.names.contains(&name) {
            return Err(AlgebraError::DuplicateName(name));
        }
        self.names.push(name);
        self.degrees.push(degree);
        Ok(self.names.len() - 1)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn index(&self, name: &str) -> Result<usize, AlgebraError> {
        self.index_of(name).ok_or_else(|| AlgebraError::UnknownName(name.to_string()))
    }

    /// Parses a linear combination of basis names (a bare rational means a
    /// multiple of the unit).
    pub fn parse_linear(&self, text: &str) -> Result<SparseVec, ParseError> {
        let mut acc = BTreeMap::new();
        for t in parse::parse_terms(text)? {
            match t.factors.as_slice() {
                [] => add_into(&mut acc, 0, t.coefficient),
                [f] if f.power == 1 => {
                    let i = self
                        .index_of(&f.name)
                        .ok_or_else(|| ParseError::new(ParseErrorKind::UnknownName(f.name.clone()), f.position))?;
                    add_into(&mut acc, i, t.coefficient);
                }
                fs => {
                    return Err(ParseError::new(ParseErrorKind::NotLinear(text.to_string()), fs[0].position));
                }
            }
        }
        Ok(sparse_from_map(acc))
    }

    pub fn product(&mut self, u: &str, v: &str, value: SparseVec) -> Result<&mut Self, AlgebraError> {
        let (u, v) = (self.index(u)?, self.index(v)?);
        self.products.insert((u, v), value);
        Ok(self)
    }

    pub fn product_expr(&mut self, u: &str, v: &str, expr: &str) -> Result<&mut Self, AlgebraError> {
        let value = self.parse_linear(expr)?;
        self.product(u, v, value)
    }

    pub fn differential(&mut self, u: &str, value: SparseVec) -> Result<&mut Self, AlgebraError> {
        let u = self.index(u)?;
        self.differential.insert(u, value);
        Ok(self)
    }

    pub fn differential_expr(&mut self, u: &str, expr: &str) -> Result<&mut Self, AlgebraError> {
        let value = self.parse_linear(expr)?;
        self.differential(u, value)
    }

    pub fn build(&self) -> Result<FiniteCdga, AlgebraError> {
        let n = self.names.len();
        let mut products = vec![vec![SparseVec::new(); n]; n];
        for u in 0..n {
            products[0][u] = vec![(u, Rational::one())];
            products[u][0] = vec![(u, Rational::one())];
        }
        for (&(u, v), value) in &self.products {
            if u == 0 || v == 0 {
                if *value != products[u][v] {
                    return Err(AlgebraError::FiniteAxiom(format!(
                        "product with the unit must be the identity ({} * {})",
                        self.names[u], self.names[v]
                    )));
                }
                continue;
            }
            products[u][v] = value.clone();
        }
        for (&(u, v), value) in &self.products {
            if u == 0 || v == 0 || self.products.contains_key(&(v, u)) {
                continue;
            }
            let s = koszul(self.degrees[u], self.degrees[v]);
            products[v][u] = value.iter().map(|(w, c)| (*w, c * &s)).collect();
        }
        let mut differential = vec![SparseVec::new(); n];
        for (&u, value) in &self.differential {
            differential[u] = value.clone();
        }
        let top = self.degrees.iter().copied().max().unwrap_or(0);
        let mut by_degree = vec![Vec::new(); top as usize + 1];
        for (i, &d) in self.degrees.iter().enumerate() {
            by_degree[d as usize].push(i);
        }
        let a = FiniteCdga {
            label: self.label.clone(),
            names: self.names.clone(),
            degrees: self.degrees.clone(),
            products,
            differential,
            by_degree,
        };
        a.validate()?;
        Ok(a)
    }
}

impl FiniteCdga {
    /// The one-dimensional algebra `Q`, the model of a point.
    pub fn unit() -> Self {
        FiniteCdgaBuilder::new("Q").build().expect("unit algebra is valid")
    }

    pub fn builder(label: impl Into<String>) -> FiniteCdgaBuilder {
        FiniteCdgaBuilder::new(label)
    }

    /// Formal model of the sphere `S^n`: basis `{1, name}`.
    pub fn sphere(n: u32, name: &str) -> Result<Self, AlgebraError> {
        let mut b = FiniteCdgaBuilder::new(format!("S^{n}"));
        b.element(name, n)?;
        b.build()
    }

    /// Truncated polynomial algebra `Q[a]/(a^{top+1})`, `|a| = degree`
    /// (even); with `degree = 2` this is the cohomology of `CP^top`.
    pub fn truncated_polynomial(name: &str, degree: u32, top: u32) -> Result<Self, AlgebraError> {
        if degree % 2 == 1 && top >= 2 {
            return Err(AlgebraError::InvalidParameter("odd generator squares to zero".into()));
        }
        let mut b = FiniteCdgaBuilder::new(format!("Q[{name}]/({name}^{})", top + 1));
        let mut names = vec!["1".to_string()];
        for p in 1..=top {
            let nm = if p == 1 { name.to_string() } else { format!("{name}{p}") };
            b.element(nm.clone(), degree * p)?;
            names.push(nm);
        }
        for p in 1..=top {
            for q in 1..=top {
                if p + q <= top {
                    b.product(&names[p as usize], &names[q as usize], vec![((p + q) as usize, Rational::one())])?;
                }
            }
        }
        b.build()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, u: usize) -> &str {
        &self.names[u]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn degree(&self, u: usize) -> u32 {
        self.degrees[u]
    }

    pub fn top_degree(&self) -> u32 {
        self.by_degree.len() as u32 - 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Basis indices of degree `n` (empty beyond the top degree).
    pub fn basis_in_degree(&self, n: u32) -> &[usize] {
        self.by_degree.get(n as usize).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn product(&self, u: usize, v: usize) -> &SparseVec {
        &self.products[u][v]
    }

    pub fn d(&self, u: usize) -> &SparseVec {
        &self.differential[u]
    }

    pub fn is_formal_presentation(&self) -> bool {
        self.differential.iter().all(|v| v.is_empty())
    }

    /// Product of two basis vectors extended bilinearly.
    pub fn mul_vec(&self, a: &[(usize, Rational)], b: &[(usize, Rational)]) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (u, x) in a {
            for (v, y) in b {
                for (w, c) in &self.products[*u][*v] {
                    add_into(&mut acc, *w, x * y * c);
                }
            }
        }
        sparse_from_map(acc)
    }

    pub fn d_vec(&self, a: &[(usize, Rational)]) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (u, x) in a {
            for (w, c) in &self.differential[*u] {
                add_into(&mut acc, *w, x * c);
            }
        }
        sparse_from_map(acc)
    }

    pub fn format_vec(&self, v: &[(usize, Rational)]) -> String {
        format_terms(v.iter().map(|(u, c)| (if *u == 0 { String::new() } else { self.names[*u].clone() }, c)))
    }

    /// Evaluates an expression whose factors are basis names.
    pub fn parse(&self, text: &str) -> Result<SparseVec, ParseError> {
        let mut acc = BTreeMap::new();
        for t in parse::parse_terms(text)? {
            let mut prod: SparseVec = vec![(0, t.coefficient)];
            for f in &t.factors {
                let i = self
                    .index_of(&f.name)
                    .ok_or_else(|| ParseError::new(ParseErrorKind::UnknownName(f.name.clone()), f.position))?;
                for _ in 0..f.power {
                    prod = self.mul_vec(&prod, &[(i, Rational::one())]);
                }
            }
            for (w, c) in prod {
                add_into(&mut acc, w, c);
            }
        }
        Ok(sparse_from_map(acc))
    }

    fn homogeneous_degree(&self, v: &[(usize, Rational)]) -> Option<u32> {
        let d = self.degrees[v.first()?.0];
        v.iter().all(|(w, _)| self.degrees[*w] == d).then_some(d)
    }

    fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.dim();
        let err = |s: String| Err(AlgebraError::FiniteAxiom(s));
        for u in 0..n {
            for v in 0..n {
                let p = &self.products[u][v];
                if let Some(d) = self.homogeneous_degree(p) {
                    if d != self.degrees[u] + self.degrees[v] {
                        return err(format!("{} * {} has degree {d}", self.names[u], self.names[v]));
                    }
                } else if !p.is_empty() {
                    return err(format!("{} * {} is not homogeneous", self.names[u], self.names[v]));
                }
                let s = koszul(self.degrees[u], self.degrees[v]);
                let swapped: SparseVec = self.products[v][u].iter().map(|(w, c)| (*w, c * &s)).collect();
                if *p != swapped {
                    return err(format!("{} * {} is not graded commutative", self.names[u], self.names[v]));
                }
            }
        }
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    let left = self.mul_vec(&self.products[u][v], &[(w, Rational::one())]);
                    let right = self.mul_vec(&[(u, Rational::one())], &self.products[v][w]);
                    if left != right {
                        return err(format!(
                            "({} * {}) * {} != {} * ({} * {})",
                            self.names[u], self.names[v], self.names[w], self.names[u], self.names[v], self.names[w]
                        ));
                    }
                }
            }
        }
        for u in 0..n {
            let du = &self.differential[u];
            if let Some(d) = self.homogeneous_degree(du) {
                if d != self.degrees[u] + 1 {
                    return err(format!("d({}) has degree {d}", self.names[u]));
                }
            } else if !du.is_empty() {
                return err(format!("d({}) is not homogeneous", self.names[u]));
            }
            if !self.d_vec(du).is_empty() {
                return err(format!("d^2({}) != 0", self.names[u]));
            }
        }
        if !self.differential[0].is_empty() {
            return err("d(1) != 0".into());
        }
        for u in 0..n {
            for v in 0..n {
                // d(uv) = d(u) v + (-1)^|u| u d(v)
                let lhs = self.d_vec(&self.products[u][v]);
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (w, c) in self.mul_vec(&self.differential[u], &[(v, Rational::one())]) {
                    add_into(&mut acc, w, c);
                }
                let s = if self.degrees[u] % 2 == 1 { rat(-1) } else { rat(1) };
                for (w, c) in self.mul_vec(&[(u, Rational::one())], &self.differential[v]) {
                    add_into(&mut acc, w, c * &s);
                }
                if lhs != sparse_from_map(acc) {
                    return err(format!("Leibniz rule fails on {} * {}", self.names[u], self.names[v]));
                }
            }
        }
        Ok(())
    }

    /// Exact Betti numbers `b_0..=b_top`.
    pub fn betti(&self) -> Vec<usize> {
        (0..=self.top_degree()).map(|n| self.betti_in_degree(n)).collect()
    }

    fn d_images(&self, n: u32) -> (Vec<SparseVec>, BTreeMap<usize, usize>) {
        let target: BTreeMap<usize, usize> =
            self.basis_in_degree(n + 1).iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let images = self
            .basis_in_degree(n)
            .iter()
            .map(|&u| self.differential[u].iter().map(|(w, c)| (target[w], c.clone())).collect())
            .collect();
        (images, target)
    }

    pub fn betti_in_degree(&self, n: u32) -> usize {
        let dim = self.basis_in_degree(n).len();
        let rank_out = linalg::rank(&self.d_images(n).0);
        let rank_in = if n == 0 { 0 } else { linalg::rank(&self.d_images(n - 1).0) };
        dim - rank_out - rank_in
    }

    pub fn is_simply_connected(&self) -> bool {
        self.basis_in_degree(0).len() == 1 && self.betti_in_degree(1) == 0
    }

    pub fn is_closed(&self, v: &[(usize, Rational)]) -> bool {
        self.d_vec(v).is_empty()
    }

    /// Whether a cocycle is a coboundary.
    pub fn is_exact(&self, v: &[(usize, Rational)]) -> bool {
        self.primitive(v).is_some()
    }

    /// Some `b` with `d b = v`, if it exists. `v` must be homogeneous.
    pub fn primitive(&self, v: &[(usize, Rational)]) -> Option<SparseVec> {
        let Some(n) = self.homogeneous_degree(v) else { return Some(Vec::new()) };
        if n == 0 {
            return None;
        }
        let (images, target) = self.d_images(n - 1);
        let mut e = Echelon::new();
        for (j, img) in images.iter().enumerate() {
            e.insert_tagged(
                linalg::IntVec::from_rational(img),
                linalg::IntVec(vec![(j, num_bigint::BigInt::one())]),
            );
        }
        let local: SparseVec = {
            let mut m = BTreeMap::new();
            for (w, c) in v {
                m.insert(target[w], c.clone());
            }
            sparse_from_map(m)
        };
        let coeffs = e.solve(&local)?;
        let source = self.basis_in_degree(n - 1);
        let mut m = BTreeMap::new();
        for (j, c) in coeffs {
            add_into(&mut m, source[j], c);
        }
        Some(sparse_from_map(m))
    }

    /// Graded tensor product `self ⊗ other`. Basis element `(i, j)` has index
    /// `i * other.dim() + j`; names are made unique with primes.
    pub fn tensor(&self, other: &FiniteCdga) -> FiniteCdga {
        let nb = other.dim();
        let n = self.dim() * nb;
        let mut names = Vec::with_capacity(n);
        let mut degrees = Vec::with_capacity(n);
        for i in 0..self.dim() {
            for j in 0..nb {
                let base = match (i, j) {
                    (0, 0) => "1".to_string(),
                    (0, j) => other.names[j].clone(),
                    (i, 0) => self.names[i].clone(),
                    (i, j) => format!("{}_{}", self.names[i], other.names[j]),
                };
                let mut name = base;
                while names.contains(&name) {
                    name.push('\'');
                }
                names.push(name);
                degrees.push(self.degrees[i] + other.degrees[j]);
            }
        }
        let mut products = vec![vec![SparseVec::new(); n]; n];
        for (i1, j1) in (0..self.dim()).flat_map(|i| (0..nb).map(move |j| (i, j))) {
            for (i2, j2) in (0..self.dim()).flat_map(|i| (0..nb).map(move |j| (i, j))) {
                // (a ⊗ b)(a' ⊗ b') = (-1)^{|b||a'|} aa' ⊗ bb'
                let s = koszul(other.degrees[j1], self.degrees[i2]);
                let mut acc = BTreeMap::new();
                for (w1, c1) in &self.products[i1][i2] {
                    for (w2, c2) in &other.products[j1][j2] {
                        add_into(&mut acc, w1 * nb + w2, c1 * c2 * &s);
                    }
                }
                products[i1 * nb + j1][i2 * nb + j2] = sparse_from_map(acc);
            }
        }
        let mut differential = vec![SparseVec::new(); n];
        for i in 0..self.dim() {
            for j in 0..nb {
                let mut acc = BTreeMap::new();
                for (w, c) in &self.differential[i] {
                    add_into(&mut acc, w * nb + j, c.clone());
                }
                let s = if self.degrees[i] % 2 == 1 { rat(-1) } else { rat(1) };
                for (w, c) in &other.differential[j] {
                    add_into(&mut acc, i * nb + w, c * &s);
                }
                differential[i * nb + j] = sparse_from_map(acc);
            }
        }
        let top = degrees.iter().copied().max().unwrap_or(0);
        let mut by_degree = vec![Vec::new(); top as usize + 1];
        for (i, &d) in degrees.iter().enumerate() {
            by_degree[d as usize].push(i);
        }
        FiniteCdga {
            label: format!("{} ⊗ {}", self.label, other.label),
            names,
            degrees,
            products,
            differential,
            by_degree,
        }
    }

    /// Iterates basis elements as `(name, degree)`.
    pub fn basis(&self) -> impl Iterator<Item = (&str, u32)> {
        self.names.iter().map(String::as_str).zip(self.degrees.iter().copied())
    }

    /// Entries of the products table with both factors non-unit, as
    /// `(u, v, value)`.
    pub fn product_entries(&self) -> impl Iterator<Item = (usize, usize, &SparseVec)> {
        (1..self.dim()).flat_map(move |u| (1..self.dim()).map(move |v| (u, v, &self.products[u][v])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_and_cp2_betti() {
        assert_eq!(FiniteCdga::sphere(3, "a").unwrap().betti(), vec![1, 0, 0, 1]);
        let cp2 = FiniteCdga::truncated_polynomial("a", 2, 2).unwrap();
        assert_eq!(cp2.betti(), vec![1, 0, 1, 0, 1]);
        assert!(cp2.is_simply_connected());
        assert_eq!(cp2.parse("a^2").unwrap(), cp2.parse("a2").unwrap());
        assert!(cp2.parse("a^3").unwrap().is_empty());
    }

    #[test]
    fn commutativity_completed_and_checked() {
        let mut b = FiniteCdgaBuilder::new("S3xS3");
        b.element("x", 3).unwrap();
        b.element("y", 3).unwrap();
        b.element("xy", 6).unwrap();
        b.product_expr("x", "y", "xy").unwrap();
        let a = b.build().unwrap();
        let y = a.index_of("y").unwrap();
        let x = a.index_of("x").unwrap();
        assert_eq!(a.product(y, x), &vec![(3, rat(-1))]);

        b.product_expr("y", "x", "xy").unwrap();
        assert!(matches!(b.build(), Err(AlgebraError::FiniteAxiom(_))));
    }

    #[test]
    fn acyclic_pair_and_primitive() {
        // Q[a]/(a^2) ⊗ (z, w = dz) truncated: cohomology of S^2
        let mut b = FiniteCdgaBuilder::new("S2+pair");
        b.element("a", 2).unwrap();
        b.element("z", 3).unwrap();
        b.element("w", 4).unwrap();
        b.element("az", 5).unwrap();
        b.element("aw", 6).unwrap();
        b.product_expr("a", "z", "az").unwrap();
        b.product_expr("a", "w", "aw").unwrap();
        b.differential_expr("z", "w").unwrap();
        b.differential_expr("az", "aw").unwrap();
        let a = b.build().unwrap();
        assert_eq!(a.betti(), vec![1, 0, 1, 0, 0, 0, 0]);
        let w = a.parse("2*w").unwrap();
        assert!(a.is_closed(&w));
        let prim = a.primitive(&w).unwrap();
        assert_eq!(a.d_vec(&prim), w);
        assert!(a.primitive(&a.parse("a").unwrap()).is_none());
    }

    #[test]
    fn broken_leibniz_rejected() {
        let mut b = FiniteCdgaBuilder::new("bad");
        b.element("a", 2).unwrap();
        b.element("z", 3).unwrap();
        b.element("w", 4).unwrap();
        b.element("az", 5).unwrap();
        b.element("aw", 6).unwrap();
        b.product_expr("a", "z", "az").unwrap();
        b.product_expr("a", "w", "aw").unwrap();
        b.differential_expr("z", "w").unwrap();
        // d(az) should be aw
        assert!(matches!(b.build(), Err(AlgebraError::FiniteAxiom(_))));
    }

    #[test]
    fn tensor_of_spheres() {
        let s2 = FiniteCdga::sphere(2, "a").unwrap();
        let s3 = FiniteCdga::sphere(3, "b").unwrap();
        let t = s2.tensor(&s3);
        assert_eq!(t.betti(), vec![1, 0, 1, 1, 0, 1]);
        t.validate().unwrap();
        let t2 = s3.tensor(&s3);
        t2.validate().unwrap();
        assert_eq!(t2.betti(), vec![1, 0, 0, 2, 0, 0, 1]);
    }
}
