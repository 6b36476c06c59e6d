//! Sparse exact linear algebra: vectors, echelon forms, quotients, subspaces
//! and linear maps.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sorted `(index, coefficient)` pairs with no zero coefficients.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Accumulator for building sparse vectors from many contributions.
#[derive(Default, Clone, Debug)]
pub struct Accum(BTreeMap<usize, Scalar>);

impl Accum {
    pub fn new() -> Self {
        Accum(BTreeMap::new())
    }

    pub fn add(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.0.get_mut(&i) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.0.remove(&i);
                }
            }
            None => {
                self.0.insert(i, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, v: &[(usize, Scalar)]) {
        if c.is_zero() {
            return;
        }
        if c.is_one() {
            for (i, x) in v {
                self.add(*i, x);
            }
        } else {
            for (i, x) in v {
                self.add(*i, &(c * x));
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn finish(self) -> SparseVec {
        self.0.into_iter().collect()
    }
}

pub fn unit(i: usize) -> SparseVec {
    vec![(i, Scalar::one())]
}

pub fn scale(c: &Scalar, v: &[(usize, Scalar)]) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, c * x)).collect()
}

pub fn add(x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
    let mut acc = Accum::new();
    acc.add_scaled(&Scalar::one(), x);
    acc.add_scaled(&Scalar::one(), y);
    acc.finish()
}

pub fn sub(x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
    let mut acc = Accum::new();
    acc.add_scaled(&Scalar::one(), x);
    acc.add_scaled(&-Scalar::one(), y);
    acc.finish()
}

pub fn coeff(v: &[(usize, Scalar)], i: usize) -> Scalar {
    match v.binary_search_by_key(&i, |e| e.0) {
        Ok(k) => v[k].1.clone(),
        Err(_) => Scalar::zero(),
    }
}

pub fn to_dense(v: &[(usize, Scalar)], n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn from_dense(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

/// Tensor product of two sparse vectors, index `i * n2 + j`.
pub fn kron(x: &[(usize, Scalar)], y: &[(usize, Scalar)], n2: usize) -> SparseVec {
    let mut out = Vec::with_capacity(x.len() * y.len());
    for (i, a) in x {
        for (j, b) in y {
            out.push((i * n2 + j, a * b));
        }
    }
    out
}

/// Row echelon form keyed by leading index. Rows have leading coefficient 1
/// and every other entry lies to the right of the leading one, so reduction of
/// a vector yields the unique representative free of pivot coordinates.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    rows: Vec<Option<SparseVec>>,
    rank: usize,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon { width, rows: vec![None; width], rank: 0 }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.rows[c].is_some()
    }

    pub fn pivots(&self) -> Vec<usize> {
        (0..self.width).filter(|&c| self.rows[c].is_some()).collect()
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.width).filter(|&c| self.rows[c].is_none()).collect()
    }

    pub fn reduce(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut work: BTreeMap<usize, Scalar> = v.iter().cloned().collect();
        let mut out = Vec::new();
        while let Some((i, c)) = work.pop_first() {
            if c.is_zero() {
                continue;
            }
            match &self.rows[i] {
                Some(row) => {
                    for (j, r) in &row[1..] {
                        let t = &c * r;
                        match work.get_mut(j) {
                            Some(x) => {
                                *x -= &t;
                                if x.is_zero() {
                                    work.remove(j);
                                }
                            }
                            None => {
                                work.insert(*j, -t);
                            }
                        }
                    }
                }
                None => out.push((i, c)),
            }
        }
        out
    }

    /// Adds a vector to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: &[(usize, Scalar)]) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].1.inv().expect("nonzero leading coefficient");
        let row: SparseVec = r.iter().map(|(i, x)| (*i, x * &lead)).collect();
        let p = row[0].0;
        self.rows[p] = Some(row);
        self.rank += 1;
        true
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.reduce(v).is_empty()
    }

    /// The stored rows; they span the same space as everything inserted.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.iter().flatten()
    }

    /// Solutions `x` of `row · x = 0` for every inserted row.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let pivots: Vec<usize> = self.pivots();
        let mut basis = Vec::new();
        for f in self.free_columns() {
            let mut x: BTreeMap<usize, Scalar> = BTreeMap::new();
            x.insert(f, Scalar::one());
            for &p in pivots.iter().rev() {
                if p > f {
                    continue;
                }
                let row = self.rows[p].as_ref().unwrap();
                let mut s = Scalar::zero();
                for (j, r) in &row[1..] {
                    if let Some(xj) = x.get(j) {
                        s += &(r * xj);
                    }
                }
                if !s.is_zero() {
                    x.insert(p, -s);
                }
            }
            basis.push(x.into_iter().collect());
        }
        basis
    }
}

/// Quotient of a coordinate space by the span of relation vectors. Quotient
/// coordinates are the non-pivot ambient coordinates, so the section sends a
/// quotient basis vector to an ambient basis vector.
#[derive(Clone, Debug)]
pub struct Quotient {
    relations: Echelon,
    free: Vec<usize>,
    index_of: Vec<usize>,
}

impl Quotient {
    pub fn new(relations: Echelon) -> Self {
        let free = relations.free_columns();
        let mut index_of = vec![usize::MAX; relations.width()];
        for (k, &f) in free.iter().enumerate() {
            index_of[f] = k;
        }
        Quotient { relations, free, index_of }
    }

    pub fn from_relations<I>(width: usize, rels: I) -> Self
    where
        I: IntoIterator<Item = SparseVec>,
    {
        let mut e = Echelon::new(width);
        for r in rels {
            e.insert(&r);
        }
        Quotient::new(e)
    }

    /// The quotient by nothing.
    pub fn identity(width: usize) -> Self {
        Quotient::new(Echelon::new(width))
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn ambient(&self) -> usize {
        self.relations.width()
    }

    pub fn relations(&self) -> &Echelon {
        &self.relations
    }

    /// Ambient index representing quotient basis vector `k`.
    pub fn lift(&self, k: usize) -> usize {
        self.free[k]
    }

    pub fn project(&self, v: &[(usize, Scalar)]) -> SparseVec {
        self.relations.reduce(v).into_iter().map(|(i, c)| (self.index_of[i], c)).collect()
    }

    pub fn project_index(&self, i: usize) -> SparseVec {
        if self.index_of[i] != usize::MAX {
            unit(self.index_of[i])
        } else {
            self.project(&unit(i))
        }
    }

    pub fn is_zero(&self, v: &[(usize, Scalar)]) -> bool {
        self.relations.contains(v)
    }

    pub fn lift_vec(&self, v: &[(usize, Scalar)]) -> SparseVec {
        v.iter().map(|(k, c)| (self.free[*k], c.clone())).collect()
    }
}

/// Span of given vectors with a coordinate solver.
#[derive(Clone, Debug)]
pub struct Subspace {
    width: usize,
    basis: Vec<SparseVec>,
    solver: Echelon,
}

impl Subspace {
    /// Builds from a linearly independent family; fails otherwise.
    pub fn new(width: usize, basis: Vec<SparseVec>) -> Result<Self> {
        let n = basis.len();
        let mut solver = Echelon::new(width + n);
        for (k, b) in basis.iter().enumerate() {
            let mut aug = b.clone();
            aug.push((width + k, Scalar::one()));
            let r = solver.reduce(&aug);
            if r[0].0 >= width {
                return Err(Error::Singular("dependent spanning family".into()));
            }
            solver.insert(&r);
        }
        Ok(Subspace { width, basis, solver })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    /// Coordinates of `v` in the basis, `None` when `v` is outside the span.
    pub fn coords(&self, v: &[(usize, Scalar)]) -> Option<SparseVec> {
        let r = self.solver.reduce(v);
        if r.first().map_or(false, |(i, _)| *i < self.width) {
            return None;
        }
        Some(r.into_iter().map(|(i, c)| (i - self.width, -c)).collect())
    }

    pub fn contains(&self, v: &[(usize, Scalar)]) -> bool {
        self.coords(v).is_some()
    }

    pub fn element(&self, c: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (k, x) in c {
            acc.add_scaled(x, &self.basis[*k]);
        }
        acc.finish()
    }
}

/// Spanning family reduced to an independent one.
pub fn independent(width: usize, family: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new(width);
    family.iter().filter(|v| e.insert(v)).cloned().collect()
}

pub fn rank(width: usize, family: &[SparseVec]) -> usize {
    let mut e = Echelon::new(width);
    family.iter().filter(|v| e.insert(v)).count()
}

/// Linear map stored by the images of the domain basis vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap {
    pub dom: usize,
    pub cod: usize,
    pub cols: Vec<SparseVec>,
}

impl LinearMap {
    pub fn new(dom: usize, cod: usize, cols: Vec<SparseVec>) -> Result<Self> {
        if cols.len() != dom || cols.iter().flatten().any(|(i, _)| *i >= cod) {
            return Err(Error::Shape(format!("linear map {dom} -> {cod}")));
        }
        Ok(LinearMap { dom, cod, cols })
    }

    pub fn identity(n: usize) -> Self {
        LinearMap { dom: n, cod: n, cols: (0..n).map(unit).collect() }
    }

    pub fn zero(dom: usize, cod: usize) -> Self {
        LinearMap { dom, cod, cols: vec![Vec::new(); dom] }
    }

    /// From a dense row-major matrix with `cod` rows and `dom` columns.
    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        let cod = rows.len();
        let dom = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dom) {
            return Err(Error::Shape("ragged matrix".into()));
        }
        let cols = (0..dom)
            .map(|j| (0..cod).filter(|&i| !rows[i][j].is_zero()).map(|i| (i, rows[i][j].clone())).collect())
            .collect();
        Ok(LinearMap { dom, cod, cols })
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        let mut rows = vec![vec![Scalar::zero(); self.dom]; self.cod];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                rows[*i][j] = x.clone();
            }
        }
        rows
    }

    pub fn apply(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (j, x) in v {
            acc.add_scaled(x, &self.cols[*j]);
        }
        acc.finish()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        if other.cod != self.dom {
            return Err(Error::Shape(format!("compose {}->{} after {}->{}", self.dom, self.cod, other.dom, other.cod)));
        }
        Ok(LinearMap { dom: other.dom, cod: self.cod, cols: other.cols.iter().map(|c| self.apply(c)).collect() })
    }

    pub fn rank(&self) -> usize {
        rank(self.cod, &self.cols)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom == self.cod && self.rank() == self.dom
    }

    pub fn kernel(&self) -> Vec<SparseVec> {
        let rows = self.transpose();
        let mut e = Echelon::new(self.dom);
        for r in &rows.cols {
            e.insert(r);
        }
        e.kernel()
    }

    pub fn transpose(&self) -> LinearMap {
        let mut cols = vec![Vec::new(); self.cod];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c {
                cols[*i].push((j, x.clone()));
            }
        }
        LinearMap { dom: self.cod, cod: self.dom, cols }
    }

    /// Some `x` with `self(x) = b`.
    pub fn solve(&self, b: &[(usize, Scalar)]) -> Option<SparseVec> {
        let mut e = Echelon::new(self.cod);
        let chosen: Vec<usize> = (0..self.dom).filter(|&j| e.insert(&self.cols[j])).collect();
        let img = Subspace::new(self.cod, chosen.iter().map(|&j| self.cols[j].clone()).collect()).ok()?;
        let c = img.coords(b)?;
        Some(c.into_iter().map(|(k, x)| (chosen[k], x)).collect())
    }

    pub fn inverse(&self) -> Result<LinearMap> {
        if !self.is_bijective() {
            return Err(Error::Singular(format!("map {}->{} of rank {}", self.dom, self.cod, self.rank())));
        }
        let img = Subspace::new(self.cod, self.cols.clone())?;
        let cols = (0..self.cod).map(|i| img.coords(&unit(i)).expect("bijective")).collect();
        Ok(LinearMap { dom: self.cod, cod: self.dom, cols })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(i, c)| (i, Scalar::from_int(c))).collect()
    }

    #[test]
    fn echelon_rank_and_reduce() {
        let mut e = Echelon::new(4);
        assert!(e.insert(&v(&[(0, 1), (1, -1)])));
        assert!(e.insert(&v(&[(1, 1), (2, -1)])));
        assert!(!e.insert(&v(&[(0, 1), (2, -1)])));
        assert_eq!(e.rank(), 2);
        // e0 ~ e1 ~ e2
        assert_eq!(e.reduce(&v(&[(0, 3)])), v(&[(2, 3)]));
        assert_eq!(e.free_columns(), vec![2, 3]);
    }

    #[test]
    fn kernel_is_annihilated() {
        let rows = [v(&[(0, 1), (1, 2), (3, 1)]), v(&[(1, 1), (2, -1)])];
        let mut e = Echelon::new(4);
        for r in &rows {
            e.insert(r);
        }
        let k = e.kernel();
        assert_eq!(k.len(), 2);
        for x in &k {
            for r in &rows {
                let dot: Scalar = r.iter().map(|(i, a)| a * coeff(x, *i)).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn quotient_projects_consistently() {
        let q = Quotient::from_relations(3, vec![v(&[(0, 1), (2, -2)])]);
        assert_eq!(q.dim(), 2);
        assert_eq!(q.project(&v(&[(0, 1)])), q.project(&v(&[(2, 2)])));
        for k in 0..q.dim() {
            assert_eq!(q.project(&unit(q.lift(k))), unit(k));
        }
    }

    #[test]
    fn subspace_coords() {
        let s = Subspace::new(3, vec![v(&[(0, 1), (1, 1)]), v(&[(1, 1), (2, 1)])]).unwrap();
        let x = v(&[(0, 2), (1, 5), (2, 3)]);
        assert_eq!(s.coords(&x).unwrap(), v(&[(0, 2), (1, 3)]));
        assert!(s.coords(&v(&[(0, 1)])).is_none());
        assert!(Subspace::new(2, vec![v(&[(0, 1)]), v(&[(0, 2)])]).is_err());
    }

    #[test]
    fn inverse_map() {
        let m = LinearMap::from_rows(&[
            vec![Scalar::from_int(2), Scalar::from_int(1)],
            vec![Scalar::from_int(1), Scalar::from_int(1)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.compose(&inv).unwrap(), LinearMap::identity(2));
        assert!(LinearMap::zero(2, 2).inverse().is_err());
    }
}
