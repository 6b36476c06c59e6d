//! Finite-dimensional unital algebras given by structure constants.

use crate::error::{Error, Result};
use crate::linalg::{self, Accum, Echelon, LinearMap, SparseVec, Subspace};
use crate::report::{Report, Tally};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    dim: usize,
    labels: Vec<String>,
    /// `mult[i * dim + j]` is the product `e_i · e_j`.
    mult: Vec<SparseVec>,
    unit: SparseVec,
}

fn render(v: &[(usize, Scalar)], labels: &[String]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    v.iter().map(|(i, c)| if c.is_one() { labels[*i].clone() } else { format!("({c})·{}", labels[*i]) }).collect::<Vec<_>>().join(" + ")
}

impl FiniteAlgebra {
    pub fn new(labels: Vec<String>, mult: Vec<SparseVec>, unit: SparseVec) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 || mult.len() != dim * dim {
            return Err(Error::Shape(format!("structure constants for dim {dim}")));
        }
        if mult.iter().flatten().chain(unit.iter()).any(|(k, _)| *k >= dim) {
            return Err(Error::Shape("basis index out of range".into()));
        }
        Ok(FiniteAlgebra { dim, labels, mult, unit })
    }

    /// From `(i, j, k, c)` entries meaning `e_i e_j ∋ c e_k`.
    pub fn from_entries(labels: Vec<String>, entries: &[(usize, usize, usize, Scalar)], unit: SparseVec) -> Result<Self> {
        let dim = labels.len();
        let mut acc: Vec<Accum> = vec![Accum::new(); dim * dim];
        for (i, j, k, c) in entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(Error::Shape(format!("entry ({i},{j},{k}) outside dim {dim}")));
            }
            acc[i * dim + j].add(*k, c);
        }
        FiniteAlgebra::new(labels, acc.into_iter().map(Accum::finish).collect(), unit)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn basis_product(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i * self.dim + j]
    }

    pub fn entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in self.basis_product(i, j) {
                    out.push((i, j, *k, c.clone()));
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (i, a) in x {
            for (j, b) in y {
                acc.add_scaled(&(a * b), self.basis_product(*i, *j));
            }
        }
        acc.finish()
    }

    /// `e_i · y`.
    pub fn lmul_basis(&self, i: usize, y: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (j, b) in y {
            acc.add_scaled(b, self.basis_product(i, *j));
        }
        acc.finish()
    }

    /// `x · e_j`.
    pub fn rmul_basis(&self, x: &[(usize, Scalar)], j: usize) -> SparseVec {
        let mut acc = Accum::new();
        for (i, a) in x {
            acc.add_scaled(a, self.basis_product(*i, j));
        }
        acc.finish()
    }

    pub fn mul_all(&self, factors: &[&SparseVec]) -> SparseVec {
        let mut acc = self.unit.clone();
        for f in factors {
            acc = self.mul(&acc, f);
        }
        acc
    }

    pub fn render(&self, v: &[(usize, Scalar)]) -> String {
        render(v, &self.labels)
    }

    pub fn left_mult_map(&self, x: &[(usize, Scalar)]) -> LinearMap {
        LinearMap { dom: self.dim, cod: self.dim, cols: (0..self.dim).map(|j| self.rmul_basis(x, j)).collect() }
    }

    pub fn right_mult_map(&self, x: &[(usize, Scalar)]) -> LinearMap {
        LinearMap { dom: self.dim, cod: self.dim, cols: (0..self.dim).map(|i| self.mul(&linalg::unit(i), x)).collect() }
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    pub fn opposite(&self) -> FiniteAlgebra {
        let n = self.dim;
        let mut mult = vec![Vec::new(); n * n];
        for i in 0..n {
            for j in 0..n {
                mult[i * n + j] = self.basis_product(j, i).clone();
            }
        }
        let labels = self.labels.iter().map(|l| format!("{l}°")).collect();
        FiniteAlgebra { dim: n, labels, mult, unit: self.unit.clone() }
    }

    /// `A ⊗ B` with basis index `i * dim B + j`.
    pub fn tensor(&self, other: &FiniteAlgebra) -> FiniteAlgebra {
        let (n, m) = (self.dim, other.dim);
        let mut mult = vec![Vec::new(); n * m * n * m];
        for i in 0..n {
            for j in 0..m {
                for k in 0..n {
                    for l in 0..m {
                        mult[(i * m + j) * n * m + k * m + l] =
                            linalg::kron(self.basis_product(i, k), other.basis_product(j, l), m);
                    }
                }
            }
        }
        let mut labels = Vec::with_capacity(n * m);
        for a in &self.labels {
            for b in &other.labels {
                labels.push(format!("{a}⊗{b}"));
            }
        }
        FiniteAlgebra { dim: n * m, labels, mult, unit: linalg::kron(&self.unit, &other.unit, m) }
    }

    /// The subalgebra spanned by `basis` together with its inclusion. Fails if
    /// the span is not closed under multiplication or misses the unit.
    pub fn subalgebra(&self, basis: Vec<SparseVec>, labels: Vec<String>) -> Result<(FiniteAlgebra, LinearMap)> {
        let space = Subspace::new(self.dim, basis.clone())?;
        let k = basis.len();
        let mut mult = Vec::with_capacity(k * k);
        for a in &basis {
            for b in &basis {
                let p = self.mul(a, b);
                mult.push(space.coords(&p).ok_or_else(|| Error::Shape("span not closed under multiplication".into()))?);
            }
        }
        let unit = space.coords(&self.unit).ok_or_else(|| Error::Shape("span misses the unit".into()))?;
        let sub = FiniteAlgebra::new(labels, mult, unit)?;
        Ok((sub, LinearMap { dom: k, cod: self.dim, cols: basis }))
    }

    /// Same algebra with the basis changed along an invertible map `phi`
    /// whose columns express the new basis in the old one.
    pub fn rebase(&self, phi: &LinearMap, labels: Vec<String>) -> Result<FiniteAlgebra> {
        let (sub, _) = self.subalgebra(phi.cols.clone(), labels)?;
        Ok(sub)
    }
}

/// Associativity and unit laws on all basis instances.
pub fn verify_algebra(a: &FiniteAlgebra) -> Report {
    let n = a.dim();
    let mut rep = Report::new("algebra");
    let mut assoc = Tally::new("associativity");
    for i in 0..n {
        for j in 0..n {
            let ij = a.basis_product(i, j);
            for k in 0..n {
                let left = a.rmul_basis(ij, k);
                let right = a.lmul_basis(i, a.basis_product(j, k));
                assoc.expect(left == right, || {
                    format!(
                        "({}·{})·{} = {} but {}·({}·{}) = {}",
                        a.labels[i], a.labels[j], a.labels[k], a.render(&left), a.labels[i], a.labels[j], a.labels[k], a.render(&right)
                    )
                });
            }
        }
    }
    rep.record(assoc);
    let mut unit = Tally::new("unit");
    for i in 0..n {
        let e = linalg::unit(i);
        let l = a.mul(a.unit(), &e);
        let r = a.mul(&e, a.unit());
        unit.expect(l == e, || format!("1·{} = {}", a.labels[i], a.render(&l)));
        unit.expect(r == e, || format!("{}·1 = {}", a.labels[i], a.render(&r)));
    }
    rep.record(unit);
    rep
}

/// Basis of `{x : x e_i = e_i x for all i}`.
pub fn center(a: &FiniteAlgebra) -> Vec<SparseVec> {
    let n = a.dim();
    // column x ↦ [x, e_i] has rows indexed by (i, output coordinate)
    let mut rows: Vec<Accum> = vec![Accum::new(); n * n];
    for i in 0..n {
        for x in 0..n {
            for (k, c) in a.basis_product(x, i) {
                rows[i * n + k].add(x, c);
            }
            for (k, c) in a.basis_product(i, x) {
                rows[i * n + k].add(x, &-c);
            }
        }
    }
    let mut e = Echelon::new(n);
    for r in rows {
        e.insert(&r.finish());
    }
    e.kernel()
}

/// `f(xy) = f(x)f(y)` on basis pairs and `f(1) = 1`.
pub fn check_algebra_map(f: &LinearMap, a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    algebra_map_violations(f, a, b, false).is_clean()
}

/// `f(xy) = f(y)f(x)` on basis pairs and `f(1) = 1`.
pub fn check_anti_algebra_map(f: &LinearMap, a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    algebra_map_violations(f, a, b, true).is_clean()
}

pub(crate) fn algebra_map_violations(f: &LinearMap, a: &FiniteAlgebra, b: &FiniteAlgebra, anti: bool) -> Tally {
    let mut t = Tally::new(if anti { "anti-multiplicative" } else { "multiplicative" });
    if f.dom != a.dim() || f.cod != b.dim() {
        t.fail(|| format!("shape {}->{} vs algebras {} and {}", f.dom, f.cod, a.dim(), b.dim()));
        return t;
    }
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let lhs = f.apply(a.basis_product(i, j));
            let rhs = if anti { b.mul(&f.cols[j], &f.cols[i]) } else { b.mul(&f.cols[i], &f.cols[j]) };
            t.expect(lhs == rhs, || format!("basis pair ({}, {})", a.labels()[i], a.labels()[j]));
        }
    }
    let u = f.apply(a.unit());
    t.expect(&u == b.unit(), || format!("unit maps to {}", b.render(&u)));
    t
}

/// Direct sum of full matrix algebras with matrix-unit basis.
#[derive(Clone, Debug)]
pub struct MultiMatrixAlgebra {
    blocks: Vec<usize>,
    offsets: Vec<usize>,
    algebra: FiniteAlgebra,
}

impl MultiMatrixAlgebra {
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    /// Basis index of `E^{(α)}_{ij}`.
    pub fn index(&self, alpha: usize, i: usize, j: usize) -> usize {
        let d = self.blocks[alpha];
        self.offsets[alpha] + i * d + j
    }

    /// `(α, i, j)` for a basis index.
    pub fn locate(&self, idx: usize) -> (usize, usize, usize) {
        let alpha = self.offsets.partition_point(|&o| o <= idx) - 1;
        let d = self.blocks[alpha];
        let r = idx - self.offsets[alpha];
        (alpha, r / d, r % d)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

pub fn make_multimatrix(blocks: &[usize]) -> Result<MultiMatrixAlgebra> {
    if blocks.is_empty() || blocks.contains(&0) {
        return Err(Error::Malformed(format!("blocks {blocks:?}")));
    }
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut dim = 0;
    for &d in blocks {
        offsets.push(dim);
        dim += d * d;
    }
    let mut labels = Vec::with_capacity(dim);
    let mut mult = vec![Vec::new(); dim * dim];
    let mut unit = Vec::new();
    for (alpha, &d) in blocks.iter().enumerate() {
        let o = offsets[alpha];
        for i in 0..d {
            for j in 0..d {
                labels.push(if blocks.len() == 1 { format!("E{}{}", i + 1, j + 1) } else { format!("E{}_{}{}", alpha + 1, i + 1, j + 1) });
                for l in 0..d {
                    mult[(o + i * d + j) * dim + o + j * d + l] = linalg::unit(o + i * d + l);
                }
            }
            unit.push((o + i * d + i, Scalar::one()));
        }
    }
    let algebra = FiniteAlgebra::new(labels, mult, unit)?;
    Ok(MultiMatrixAlgebra { blocks: blocks.to_vec(), offsets, algebra })
}
