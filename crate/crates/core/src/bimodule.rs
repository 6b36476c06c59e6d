//! Bimodules over pairs of algebras and tensor products over an algebra.

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Accum, LinearMap, Quotient, SparseVec, Subspace};
use crate::report::{Report, Tally};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct Bimodule {
    pub left: FiniteAlgebra,
    pub right: FiniteAlgebra,
    pub dim: usize,
    /// `left_action[i * dim + m] = e_i · v_m`.
    pub left_action: Vec<SparseVec>,
    /// `right_action[m * dim(right) + j] = v_m · e_j`.
    pub right_action: Vec<SparseVec>,
}

impl Bimodule {
    pub fn new(left: FiniteAlgebra, right: FiniteAlgebra, dim: usize, left_action: Vec<SparseVec>, right_action: Vec<SparseVec>) -> Result<Self> {
        if left_action.len() != left.dim() * dim || right_action.len() != dim * right.dim() {
            return Err(Error::Shape(format!("action tensors for a bimodule of dim {dim}")));
        }
        if left_action.iter().chain(&right_action).flatten().any(|(k, _)| *k >= dim) {
            return Err(Error::Shape("action output outside the module".into()));
        }
        Ok(Bimodule { left, right, dim, left_action, right_action })
    }

    /// `A` as an `(A, A)`-bimodule.
    pub fn regular(a: &FiniteAlgebra) -> Bimodule {
        let n = a.dim();
        let mut act = Vec::with_capacity(n * n);
        for i in 0..n {
            for m in 0..n {
                act.push(a.basis_product(i, m).clone());
            }
        }
        Bimodule { left: a.clone(), right: a.clone(), dim: n, left_action: act.clone(), right_action: act }
    }

    pub fn act_left(&self, i: usize, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (m, c) in v {
            acc.add_scaled(c, &self.left_action[i * self.dim + m]);
        }
        acc.finish()
    }

    pub fn act_right(&self, v: &[(usize, Scalar)], j: usize) -> SparseVec {
        let mut acc = Accum::new();
        let r = self.right.dim();
        for (m, c) in v {
            acc.add_scaled(c, &self.right_action[m * r + j]);
        }
        acc.finish()
    }

    pub fn act_left_vec(&self, x: &[(usize, Scalar)], v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (i, c) in x {
            acc.add_scaled(c, &self.act_left(*i, v));
        }
        acc.finish()
    }

    pub fn act_right_vec(&self, v: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (j, c) in y {
            acc.add_scaled(c, &self.act_right(v, *j));
        }
        acc.finish()
    }
}

/// Module axioms and commutation of the two actions on all basis instances.
pub fn verify_bimodule(m: &Bimodule) -> Report {
    let mut rep = Report::new("bimodule");
    let (a, b) = (&m.left, &m.right);
    let mut left = Tally::new("left action");
    let mut right = Tally::new("right action");
    let mut commute = Tally::new("actions commute");
    for v in 0..m.dim {
        let e = linalg::unit(v);
        left.expect(m.act_left_vec(a.unit(), &e) == e, || format!("1·v{v} ≠ v{v}"));
        right.expect(m.act_right_vec(&e, b.unit()) == e, || format!("v{v}·1 ≠ v{v}"));
        for i in 0..a.dim() {
            let iv = m.act_left(i, &e);
            for j in 0..a.dim() {
                let lhs = m.act_left(j, &iv);
                let rhs = m.act_left_vec(a.basis_product(j, i), &e);
                left.expect(lhs == rhs, || format!("(a{j}a{i})·v{v}"));
            }
            for j in 0..b.dim() {
                commute.expect(m.act_right(&iv, j) == m.act_left(i, &m.act_right(&e, j)), || format!("(a{i}·v{v})·b{j}"));
            }
        }
        for i in 0..b.dim() {
            let vi = m.act_right(&e, i);
            for j in 0..b.dim() {
                let lhs = m.act_right(&vi, j);
                let rhs = m.act_right_vec(&e, b.basis_product(i, j));
                right.expect(lhs == rhs, || format!("v{v}·(b{i}b{j})"));
            }
        }
    }
    rep.record(left);
    rep.record(right);
    rep.record(commute);
    rep
}

/// A subspace of a quotient of a coordinate space.
#[derive(Clone, Debug)]
pub struct Subquotient {
    pub quotient: Quotient,
    pub space: Subspace,
}

impl Subquotient {
    pub fn whole(quotient: Quotient) -> Self {
        let q = quotient.dim();
        let space = Subspace::new(q, (0..q).map(linalg::unit).collect()).expect("unit vectors");
        Subquotient { quotient, space }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn ambient(&self) -> usize {
        self.quotient.ambient()
    }

    /// Coordinates of an ambient vector; `None` if its class lies outside the subspace.
    pub fn coords(&self, v: &[(usize, Scalar)]) -> Option<SparseVec> {
        self.space.coords(&self.quotient.project(v))
    }

    /// Ambient representative of basis vector `k`.
    pub fn rep(&self, k: usize) -> SparseVec {
        self.quotient.lift_vec(&self.space.basis()[k])
    }

    pub fn rep_vec(&self, c: &[(usize, Scalar)]) -> SparseVec {
        self.quotient.lift_vec(&self.space.element(c))
    }

    /// Ambient → quotient projection.
    pub fn projection(&self) -> LinearMap {
        LinearMap { dom: self.ambient(), cod: self.quotient.dim(), cols: (0..self.ambient()).map(|i| self.quotient.project_index(i)).collect() }
    }

    /// Subquotient → quotient inclusion.
    pub fn inclusion(&self) -> LinearMap {
        LinearMap { dom: self.dim(), cod: self.quotient.dim(), cols: self.space.basis().to_vec() }
    }
}

/// `M ⊗_A N` with the outer actions, and the quotient of `M ⊗ N` realizing it.
pub fn tensor_over(m: &Bimodule, a: &FiniteAlgebra, n: &Bimodule) -> Result<(Bimodule, Subquotient)> {
    if m.right.dim() != a.dim() || n.left.dim() != a.dim() || m.right.entries() != a.entries() || n.left.entries() != a.entries() {
        return Err(Error::ActionMismatch("M must be a right A-module and N a left A-module".into()));
    }
    let (dm, dn) = (m.dim, n.dim);
    let width = dm * dn;
    let mut rels = Vec::new();
    for x in 0..dm {
        let ex = linalg::unit(x);
        for i in 0..a.dim() {
            let xa = m.act_right(&ex, i);
            for y in 0..dn {
                let ay = n.act_left(i, &linalg::unit(y));
                let mut acc = Accum::new();
                for (p, c) in &xa {
                    acc.add(p * dn + y, c);
                }
                for (q, c) in &ay {
                    acc.add(x * dn + q, &-c);
                }
                if !acc.is_empty() {
                    rels.push(acc.finish());
                }
            }
        }
    }
    let quotient = Quotient::from_relations(width, rels);
    let sq = Subquotient::whole(quotient);
    let q = &sq.quotient;
    let d = q.dim();
    let mut left_action = Vec::with_capacity(m.left.dim() * d);
    for i in 0..m.left.dim() {
        for k in 0..d {
            let (x, y) = (q.lift(k) / dn, q.lift(k) % dn);
            let ix = m.act_left(i, &linalg::unit(x));
            left_action.push(q.project(&ix.iter().map(|(p, c)| (p * dn + y, c.clone())).collect::<Vec<_>>()));
        }
    }
    let mut right_action = Vec::with_capacity(d * n.right.dim());
    for k in 0..d {
        let (x, y) = (q.lift(k) / dn, q.lift(k) % dn);
        for j in 0..n.right.dim() {
            let yj = n.act_right(&linalg::unit(y), j);
            right_action.push(q.project(&yj.iter().map(|(p, c)| (x * dn + p, c.clone())).collect::<Vec<_>>()));
        }
    }
    let out = Bimodule::new(m.left.clone(), n.right.clone(), d, left_action, right_action)?;
    Ok((out, sq))
}
