//! R^e-bimodules, R^e-rings, Takeuchi's ×_R product and its structure maps.

use crate::algebra::{self, make_multimatrix, FiniteAlgebra};
use crate::bimodule::Subquotient;
use crate::error::{Error, Result};
use crate::linalg::{self, Accum, Echelon, LinearMap, Quotient, SparseVec, Subspace};
use crate::report::{Report, Tally};
use crate::scalar::Scalar;

/// Which of the four R-actions on an R^e-bimodule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `r · m`
    Left,
    /// `r̄ · m`, a left action of the opposite algebra
    LeftBar,
    /// `m · r`
    Right,
    /// `m · r̄`, a right action of the opposite algebra
    RightBar,
}

const SIDES: [Side; 4] = [Side::Left, Side::LeftBar, Side::Right, Side::RightBar];

/// A vector space with four commuting actions of `base`: left and right
/// actions of `R` and of `R̄ = R^op`.
#[derive(Clone, Debug)]
pub struct EnvBimodule {
    pub base: FiniteAlgebra,
    pub dim: usize,
    /// `ops[side][r * dim + m]` is the action of basis element `r` on `v_m`.
    ops: [Vec<SparseVec>; 4],
}

fn side_index(s: Side) -> usize {
    match s {
        Side::Left => 0,
        Side::LeftBar => 1,
        Side::Right => 2,
        Side::RightBar => 3,
    }
}

impl EnvBimodule {
    pub fn new(base: FiniteAlgebra, dim: usize, ops: [Vec<SparseVec>; 4]) -> Result<Self> {
        if ops.iter().any(|o| o.len() != base.dim() * dim) {
            return Err(Error::Shape(format!("R^e-bimodule of dim {dim}")));
        }
        Ok(EnvBimodule { base, dim, ops })
    }

    pub fn act(&self, side: Side, r: usize, v: &[(usize, Scalar)]) -> SparseVec {
        let op = &self.ops[side_index(side)];
        let mut acc = Accum::new();
        for (m, c) in v {
            acc.add_scaled(c, &op[r * self.dim + m]);
        }
        acc.finish()
    }

    pub fn act_basis(&self, side: Side, r: usize, m: usize) -> &SparseVec {
        &self.ops[side_index(side)][r * self.dim + m]
    }

    pub fn act_vec(&self, side: Side, r: &[(usize, Scalar)], v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (i, c) in r {
            acc.add_scaled(c, &self.act(side, *i, v));
        }
        acc.finish()
    }

    /// The same bimodule carried over to a subspace preserved by all actions.
    pub fn restrict(&self, space: &Subspace) -> Result<EnvBimodule> {
        let mut ops: [Vec<SparseVec>; 4] = Default::default();
        for side in SIDES {
            let out = &mut ops[side_index(side)];
            for r in 0..self.base.dim() {
                for b in space.basis() {
                    let img = self.act(side, r, b);
                    out.push(space.coords(&img).ok_or_else(|| Error::ActionMismatch("subspace not invariant".into()))?);
                }
            }
        }
        EnvBimodule::new(self.base.clone(), space.dim(), ops)
    }
}

/// Action and commutation laws of an R^e-bimodule on basis instances.
pub fn verify_env_bimodule(m: &EnvBimodule) -> Report {
    let r = &m.base;
    let n = r.dim();
    let mut rep = Report::new("R^e-bimodule");
    let mut assoc = Tally::new("action laws");
    let mut units = Tally::new("unit acts trivially");
    let mut commute = Tally::new("actions commute");
    for v in 0..m.dim {
        let e = linalg::unit(v);
        for side in SIDES {
            units.expect(m.act_vec(side, r.unit(), &e) == e, || format!("{side:?} unit on v{v}"));
        }
        for i in 0..n {
            for j in 0..n {
                // Left: i·(j·v) = (ij)·v, LeftBar: ī·(j̄·v) = (ji)‾·v,
                // Right: (v·i)·j = v·(ij), RightBar: (v·ī)·j̄ = v·(ji)‾
                let checks = [
                    (Side::Left, m.act(Side::Left, i, &m.act(Side::Left, j, &e)), r.basis_product(i, j)),
                    (Side::LeftBar, m.act(Side::LeftBar, i, &m.act(Side::LeftBar, j, &e)), r.basis_product(j, i)),
                    (Side::Right, m.act(Side::Right, j, &m.act(Side::Right, i, &e)), r.basis_product(i, j)),
                    (Side::RightBar, m.act(Side::RightBar, j, &m.act(Side::RightBar, i, &e)), r.basis_product(j, i)),
                ];
                for (side, lhs, prod) in checks {
                    let rhs = m.act_vec(side, prod, &e);
                    assoc.expect(lhs == rhs, || format!("{side:?} with r{i}, r{j} on v{v}"));
                }
                for (a, b) in [(Side::Left, Side::LeftBar), (Side::Right, Side::RightBar)]
                    .into_iter()
                    .chain([Side::Left, Side::LeftBar].into_iter().flat_map(|a| [(a, Side::Right), (a, Side::RightBar)]))
                {
                    let x = m.act(a, i, &m.act(b, j, &e));
                    let y = m.act(b, j, &m.act(a, i, &e));
                    commute.expect(x == y, || format!("{a:?} r{i} vs {b:?} r{j} on v{v}"));
                }
            }
        }
    }
    rep.record(assoc);
    rep.record(units);
    rep.record(commute);
    rep
}

/// An algebra `A` with an algebra map `R^e → A`, given by its restrictions
/// `source: R → A` and the anti-multiplicative `target: R → A`.
#[derive(Clone, Debug)]
pub struct EnvRing {
    pub algebra: FiniteAlgebra,
    pub base: FiniteAlgebra,
    pub source: LinearMap,
    pub target: LinearMap,
}

impl EnvRing {
    /// The bimodule structure by multiplication with `s(r)` and `t(r)`.
    pub fn env(&self) -> EnvBimodule {
        let a = &self.algebra;
        let n = a.dim();
        let mut ops: [Vec<SparseVec>; 4] = Default::default();
        for r in 0..self.base.dim() {
            let s = &self.source.cols[r];
            let t = &self.target.cols[r];
            for m in 0..n {
                let e = linalg::unit(m);
                ops[0].push(a.mul(s, &e));
                ops[1].push(a.mul(t, &e));
                ops[2].push(a.mul(&e, s));
                ops[3].push(a.mul(&e, t));
            }
        }
        EnvBimodule { base: self.base.clone(), dim: n, ops }
    }

    pub fn verify(&self) -> Report {
        let mut rep = Report::new("R^e-ring");
        let s = algebra::algebra_map_violations(&self.source, &self.base, &self.algebra, false);
        let t = algebra::algebra_map_violations(&self.target, &self.base, &self.algebra, true);
        rep.record(s.named("source is an algebra map"));
        rep.record(t.named("target is an anti-algebra map"));
        let mut c = Tally::new("source and target images commute");
        for i in 0..self.base.dim() {
            for j in 0..self.base.dim() {
                let x = self.algebra.mul(&self.source.cols[i], &self.target.cols[j]);
                let y = self.algebra.mul(&self.target.cols[j], &self.source.cols[i]);
                c.expect(x == y, || format!("s(r{i}) t(r{j})"));
            }
        }
        rep.record(c);
        rep
    }
}

/// `End(R)` as the matrix algebra on the basis of `R`, with
/// `r ⊗ s̄ ↦ (x ↦ r x s)`.
pub fn end_ring(r: &FiniteAlgebra) -> EnvRing {
    let n = r.dim();
    let algebra = make_multimatrix(&[n]).expect("nonzero dim").algebra().clone();
    let matrix_of = |image: &dyn Fn(usize) -> SparseVec| -> SparseVec {
        let mut acc = Accum::new();
        for b in 0..n {
            for (a, c) in image(b) {
                acc.add(a * n + b, &c);
            }
        }
        acc.finish()
    };
    let source = (0..n).map(|x| matrix_of(&|b| r.basis_product(x, b).clone())).collect();
    let target = (0..n).map(|x| matrix_of(&|b| r.basis_product(b, x).clone())).collect();
    EnvRing {
        algebra,
        base: r.clone(),
        source: LinearMap { dom: n, cod: n * n, cols: source },
        target: LinearMap { dom: n, cod: n * n, cols: target },
    }
}

/// `f(1)` for an element of `End(R)` in the matrix basis.
pub fn end_eval_unit(r: &FiniteAlgebra, f: &[(usize, Scalar)]) -> SparseVec {
    let n = r.dim();
    let mut acc = Accum::new();
    for (ab, c) in f {
        let (a, b) = (ab / n, ab % n);
        let u = linalg::coeff(r.unit(), b);
        acc.add(a, &(c * &u));
    }
    acc.finish()
}

/// `M ×_R N`: the ∫^s equalizer inside the ∫_r quotient of `M ⊗ N`.
#[derive(Clone, Debug)]
pub struct TakeuchiProduct {
    pub m: EnvBimodule,
    pub n: EnvBimodule,
    pub space: Subquotient,
}

fn same_base(a: &FiniteAlgebra, b: &FiniteAlgebra) -> bool {
    a.dim() == b.dim() && a.entries() == b.entries() && a.unit() == b.unit()
}

/// `x ⊗ y` for vectors of M and N, ambient index `m * dim N + n`.
fn tensor(x: &[(usize, Scalar)], y: &[(usize, Scalar)], dn: usize) -> SparseVec {
    let mut v = linalg::kron(x, y, dn);
    v.sort_by_key(|e| e.0);
    v
}

pub fn takeuchi_product(m: &EnvBimodule, n: &EnvBimodule) -> Result<TakeuchiProduct> {
    if !same_base(&m.base, &n.base) {
        return Err(Error::ActionMismatch("M and N are bimodules over different algebras".into()));
    }
    let (dm, dn, nr) = (m.dim, n.dim, m.base.dim());
    let mut e = Echelon::new(dm * dn);
    for r in 0..nr {
        for a in 0..dm {
            let ra = m.act_basis(Side::LeftBar, r, a);
            for b in 0..dn {
                let rb = n.act_basis(Side::Left, r, b);
                let rel = linalg::sub(&tensor(ra, &linalg::unit(b), dn), &tensor(&linalg::unit(a), rb, dn));
                if !rel.is_empty() {
                    e.insert(&rel);
                }
            }
        }
    }
    let quotient = Quotient::new(e);
    // x ↦ x·s̄ ⊗ − − − ⊗ −·s on ambient vectors
    let cond = |s: usize, v: &[(usize, Scalar)]| -> SparseVec {
        let mut acc = Accum::new();
        for (ab, c) in v {
            let (a, b) = (ab / dn, ab % dn);
            for (a2, x) in m.act_basis(Side::RightBar, s, a) {
                acc.add(a2 * dn + b, &(c * x));
            }
            for (b2, x) in n.act_basis(Side::Right, s, b) {
                acc.add(a * dn + b2, &-(c * x));
            }
        }
        acc.finish()
    };
    for s in 0..nr {
        for row in quotient.relations().rows() {
            if !quotient.is_zero(&cond(s, row)) {
                return Err(Error::IllDefined(format!("equalizer condition for basis element {s} of R")));
            }
        }
    }
    let q = quotient.dim();
    let mut rows: Vec<Accum> = vec![Accum::new(); nr * q];
    for k in 0..q {
        for s in 0..nr {
            for (c, x) in quotient.project(&cond(s, &linalg::unit(quotient.lift(k)))) {
                rows[s * q + c].add(k, &x);
            }
        }
    }
    let mut sys = Echelon::new(q);
    for r in rows {
        sys.insert(&r.finish());
    }
    let space = Subspace::new(q, sys.kernel())?;
    Ok(TakeuchiProduct { m: m.clone(), n: n.clone(), space: Subquotient { quotient, space } })
}

impl TakeuchiProduct {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn ambient_index(&self, a: usize, b: usize) -> usize {
        a * self.n.dim + b
    }

    /// Class of an ambient vector in the ∫_r quotient.
    pub fn project(&self, v: &[(usize, Scalar)]) -> SparseVec {
        self.space.quotient.project(v)
    }

    /// Whether the class of `v` satisfies the ∫^s condition.
    pub fn in_product(&self, v: &[(usize, Scalar)]) -> bool {
        self.space.coords(v).is_some()
    }

    /// The R^e-bimodule structure: `r` and `r̄` act on the outer legs.
    pub fn env(&self) -> Result<EnvBimodule> {
        let (dn, nr) = (self.n.dim, self.m.base.dim());
        let mut ops: [Vec<SparseVec>; 4] = Default::default();
        for (side, on_m) in [(Side::Left, true), (Side::LeftBar, false), (Side::Right, true), (Side::RightBar, false)] {
            let out = &mut ops[side_index(side)];
            for r in 0..nr {
                for k in 0..self.dim() {
                    let rep = self.space.rep(k);
                    let mut acc = Accum::new();
                    for (ab, c) in &rep {
                        let (a, b) = (ab / dn, ab % dn);
                        if on_m {
                            for (a2, x) in self.m.act_basis(side, r, a) {
                                acc.add(a2 * dn + b, &(c * x));
                            }
                        } else {
                            for (b2, x) in self.n.act_basis(side, r, b) {
                                acc.add(a * dn + b2, &(c * x));
                            }
                        }
                    }
                    out.push(self.space.coords(&acc.finish()).ok_or_else(|| Error::IllDefined("action leaves the ×_R space".into()))?);
                }
            }
        }
        EnvBimodule::new(self.m.base.clone(), self.dim(), ops)
    }

    /// Product in `M ×_R N` for R^e-rings, computed on representatives.
    pub fn ring_mul(&self, rm: &FiniteAlgebra, rn: &FiniteAlgebra, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let dn = self.n.dim;
        let mut acc = Accum::new();
        for (ab, c) in x {
            for (cd, d) in y {
                let l = rm.basis_product(ab / dn, cd / dn);
                let r = rn.basis_product(ab % dn, cd % dn);
                acc.add_scaled(&(c * d), &tensor(l, r, dn));
            }
        }
        acc.finish()
    }
}

/// θ: `M ×_R End(R) → M` and θ′: `End(R) ×_R M → M`.
#[derive(Clone, Debug)]
pub struct ThetaMaps {
    pub end: EnvRing,
    pub right_product: TakeuchiProduct,
    pub theta: LinearMap,
    pub left_product: TakeuchiProduct,
    pub theta_prime: LinearMap,
}

pub fn theta_maps(m: &EnvBimodule) -> Result<ThetaMaps> {
    let end = end_ring(&m.base);
    let e = end.env();
    let r = &m.base;
    let ne = e.dim;
    let right_product = takeuchi_product(m, &e)?;
    let left_product = takeuchi_product(&e, m)?;
    // θ(a ⊗ f) = f(1)‾ · a
    let theta_on = |v: &[(usize, Scalar)]| -> SparseVec {
        let mut acc = Accum::new();
        for (af, c) in v {
            let (a, f) = (af / ne, af % ne);
            let f1 = end_eval_unit(r, &linalg::unit(f));
            acc.add_scaled(c, &m.act_vec(Side::LeftBar, &f1, &linalg::unit(a)));
        }
        acc.finish()
    };
    // θ′(f ⊗ a) = f(1) · a
    let theta_prime_on = |v: &[(usize, Scalar)]| -> SparseVec {
        let mut acc = Accum::new();
        for (fa, c) in v {
            let (f, a) = (fa / m.dim, fa % m.dim);
            let f1 = end_eval_unit(r, &linalg::unit(f));
            acc.add_scaled(c, &m.act_vec(Side::Left, &f1, &linalg::unit(a)));
        }
        acc.finish()
    };
    for row in right_product.space.quotient.relations().rows() {
        if !theta_on(row).is_empty() {
            return Err(Error::IllDefined("θ on the ∫_r relations".into()));
        }
    }
    for row in left_product.space.quotient.relations().rows() {
        if !theta_prime_on(row).is_empty() {
            return Err(Error::IllDefined("θ′ on the ∫_r relations".into()));
        }
    }
    let theta = LinearMap { dom: right_product.dim(), cod: m.dim, cols: (0..right_product.dim()).map(|k| theta_on(&right_product.space.rep(k))).collect() };
    let theta_prime = LinearMap { dom: left_product.dim(), cod: m.dim, cols: (0..left_product.dim()).map(|k| theta_prime_on(&left_product.space.rep(k))).collect() };
    Ok(ThetaMaps { end, right_product, theta, left_product, theta_prime })
}

/// Whether `f: X → M` intertwines all four R-actions.
pub fn is_env_map(f: &LinearMap, x: &EnvBimodule, m: &EnvBimodule) -> bool {
    SIDES.iter().all(|&side| {
        (0..x.base.dim()).all(|r| (0..x.dim).all(|k| f.apply(x.act_basis(side, r, k)) == m.act(side, r, &f.cols[k])))
    })
}

impl ThetaMaps {
    /// Bimodule-map checks, plus ring-map checks when `ring` is the R^e-ring
    /// whose bimodule `M` is.
    pub fn verify(&self, m: &EnvBimodule, ring: Option<&EnvRing>) -> Result<Report> {
        let mut rep = Report::new("theta maps");
        let xr = self.right_product.env()?;
        let xl = self.left_product.env()?;
        rep.check("θ is an R^e-bimodule map", is_env_map(&self.theta, &xr, m), || "action mismatch".into());
        rep.check("θ′ is an R^e-bimodule map", is_env_map(&self.theta_prime, &xl, m), || "action mismatch".into());
        if let Some(ring) = ring {
            let e = &self.end.algebra;
            for (name, prod, map, m_first) in [("θ", &self.right_product, &self.theta, true), ("θ′", &self.left_product, &self.theta_prime, false)] {
                let mut t = Tally::new(format!("{name} is multiplicative"));
                for i in 0..prod.dim() {
                    for j in 0..prod.dim() {
                        let (x, y) = (prod.space.rep(i), prod.space.rep(j));
                        let xy = if m_first { prod.ring_mul(&ring.algebra, e, &x, &y) } else { prod.ring_mul(e, &ring.algebra, &x, &y) };
                        match prod.space.coords(&xy) {
                            Some(c) => {
                                let lhs = map.apply(&c);
                                let rhs = ring.algebra.mul(&map.cols[i], &map.cols[j]);
                                t.expect(lhs == rhs, || format!("basis pair ({i}, {j})"));
                            }
                            None => t.fail(|| format!("product of basis {i} and {j} leaves the ×_R space")),
                        }
                    }
                }
                rep.record(t);
            }
        }
        Ok(rep)
    }
}

/// The threefold product `M ×_R P ×_R N` and the maps α, α′ into it.
#[derive(Clone, Debug)]
pub struct AlphaMaps {
    pub triple: Subquotient,
    pub mp_n: TakeuchiProduct,
    pub m_pn: TakeuchiProduct,
    pub alpha: LinearMap,
    pub alpha_prime: LinearMap,
}

/// The ∫_{r,t} quotient of `M ⊗ P ⊗ N`, ambient index `(a·dim P + b)·dim N + c`.
pub fn triple_quotient(m: &EnvBimodule, p: &EnvBimodule, n: &EnvBimodule) -> Quotient {
    let (dm, dp, dn, nr) = (m.dim, p.dim, n.dim, m.base.dim());
    let idx = |a: usize, b: usize, c: usize| (a * dp + b) * dn + c;
    let mut e = Echelon::new(dm * dp * dn);
    for r in 0..nr {
        for a in 0..dm {
            for b in 0..dp {
                for c in 0..dn {
                    let mut acc = Accum::new();
                    for (a2, x) in m.act_basis(Side::LeftBar, r, a) {
                        acc.add(idx(*a2, b, c), x);
                    }
                    for (b2, x) in p.act_basis(Side::Left, r, b) {
                        acc.add(idx(a, *b2, c), &-x);
                    }
                    e.insert(&acc.finish());
                    let mut acc = Accum::new();
                    for (b2, x) in p.act_basis(Side::LeftBar, r, b) {
                        acc.add(idx(a, *b2, c), x);
                    }
                    for (c2, x) in n.act_basis(Side::Left, r, c) {
                        acc.add(idx(a, b, *c2), &-x);
                    }
                    e.insert(&acc.finish());
                }
            }
        }
    }
    Quotient::new(e)
}

pub fn triple_product(m: &EnvBimodule, p: &EnvBimodule, n: &EnvBimodule) -> Result<Subquotient> {
    let (dp, dn, nr) = (p.dim, n.dim, m.base.dim());
    let idx = |a: usize, b: usize, c: usize| (a * dp + b) * dn + c;
    let quotient = triple_quotient(m, p, n);
    let cond = |first: bool, s: usize, v: &[(usize, Scalar)]| -> SparseVec {
        let mut acc = Accum::new();
        for (i, coef) in v {
            let (a, b, c) = (i / (dp * dn), (i / dn) % dp, i % dn);
            if first {
                for (a2, x) in m.act_basis(Side::RightBar, s, a) {
                    acc.add(idx(*a2, b, c), &(coef * x));
                }
                for (b2, x) in p.act_basis(Side::Right, s, b) {
                    acc.add(idx(a, *b2, c), &-(coef * x));
                }
            } else {
                for (b2, x) in p.act_basis(Side::RightBar, s, b) {
                    acc.add(idx(a, *b2, c), &(coef * x));
                }
                for (c2, x) in n.act_basis(Side::Right, s, c) {
                    acc.add(idx(a, b, *c2), &-(coef * x));
                }
            }
        }
        acc.finish()
    };
    for first in [true, false] {
        for s in 0..nr {
            for row in quotient.relations().rows() {
                if !quotient.is_zero(&cond(first, s, row)) {
                    return Err(Error::IllDefined("threefold equalizer condition".into()));
                }
            }
        }
    }
    let q = quotient.dim();
    let mut rows: Vec<Accum> = vec![Accum::new(); 2 * nr * q];
    for k in 0..q {
        let v = linalg::unit(quotient.lift(k));
        for (fi, first) in [true, false].into_iter().enumerate() {
            for s in 0..nr {
                for (c, x) in quotient.project(&cond(first, s, &v)) {
                    rows[(fi * nr + s) * q + c].add(k, &x);
                }
            }
        }
    }
    let mut sys = Echelon::new(q);
    for r in rows {
        sys.insert(&r.finish());
    }
    let space = Subspace::new(q, sys.kernel())?;
    Ok(Subquotient { quotient, space })
}

pub fn alpha_maps(m: &EnvBimodule, p: &EnvBimodule, n: &EnvBimodule) -> Result<AlphaMaps> {
    let triple = triple_product(m, p, n)?;
    let mp = takeuchi_product(m, p)?;
    let pn = takeuchi_product(p, n)?;
    let mp_n = takeuchi_product(&mp.env()?, n)?;
    let m_pn = takeuchi_product(m, &pn.env()?)?;
    let (dp, dn) = (p.dim, n.dim);
    let dpn = pn.dim();
    // (k, c) with k a basis vector of M×P ↦ rep(k) ⊗ c
    let alpha_on = |v: &[(usize, Scalar)]| -> SparseVec {
        let mut acc = Accum::new();
        for (kc, coef) in v {
            let (k, c) = (kc / dn, kc % dn);
            for (ab, x) in mp.space.rep(k) {
                acc.add(ab * dn + c, &(coef * &x));
            }
        }
        acc.finish()
    };
    let alpha_prime_on = |v: &[(usize, Scalar)]| -> SparseVec {
        let mut acc = Accum::new();
        for (ak, coef) in v {
            let (a, k) = (ak / dpn, ak % dpn);
            for (bc, x) in pn.space.rep(k) {
                acc.add(a * dp * dn + bc, &(coef * &x));
            }
        }
        acc.finish()
    };
    for row in mp_n.space.quotient.relations().rows() {
        if !triple.quotient.is_zero(&alpha_on(row)) {
            return Err(Error::IllDefined("α on relations".into()));
        }
    }
    for row in m_pn.space.quotient.relations().rows() {
        if !triple.quotient.is_zero(&alpha_prime_on(row)) {
            return Err(Error::IllDefined("α′ on relations".into()));
        }
    }
    let image = |prod: &TakeuchiProduct, f: &dyn Fn(&[(usize, Scalar)]) -> SparseVec| -> Result<Vec<SparseVec>> {
        (0..prod.dim())
            .map(|k| triple.coords(&f(&prod.space.rep(k))).ok_or_else(|| Error::IllDefined("image outside the threefold product".into())))
            .collect()
    };
    let alpha = LinearMap { dom: mp_n.dim(), cod: triple.dim(), cols: image(&mp_n, &alpha_on)? };
    let alpha_prime = LinearMap { dom: m_pn.dim(), cod: triple.dim(), cols: image(&m_pn, &alpha_prime_on)? };
    Ok(AlphaMaps { triple, mp_n, m_pn, alpha, alpha_prime })
}

/// The regular R^e-bimodule `R ⊗ R̄` of an algebra.
pub fn enveloping_regular(r: &FiniteAlgebra) -> EnvBimodule {
    let renv = r.tensor(&r.opposite());
    let n = r.dim();
    let one = r.unit();
    let source = LinearMap { dom: n, cod: n * n, cols: (0..n).map(|x| linalg::kron(&linalg::unit(x), one, n)).collect() };
    let target = LinearMap { dom: n, cod: n * n, cols: (0..n).map(|x| linalg::kron(one, &linalg::unit(x), n)).collect() };
    EnvRing { algebra: renv, base: r.clone(), source, target }.env()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k_n(n: usize) -> FiniteAlgebra {
        make_multimatrix(&vec![1; n]).unwrap().algebra().clone()
    }

    #[test]
    fn regular_env_is_valid() {
        let m = enveloping_regular(&make_multimatrix(&[2, 1]).unwrap().algebra().clone());
        assert!(verify_env_bimodule(&m).passed());
        let e = end_ring(&k_n(2));
        assert!(e.verify().passed());
        assert!(verify_env_bimodule(&e.env()).passed());
    }

    #[test]
    fn over_ground_field() {
        let m = enveloping_regular(&make_multimatrix(&[2]).unwrap().algebra().clone());
        // restrict scalars to R = k by viewing M_2 ⊗ M_2^op as a k^e-bimodule
        let k = k_n(1);
        let ops: [Vec<SparseVec>; 4] = std::array::from_fn(|_| (0..m.dim).map(linalg::unit).collect());
        let mk = EnvBimodule::new(k, m.dim, ops).unwrap();
        let p = takeuchi_product(&mk, &mk).unwrap();
        assert_eq!(p.dim(), 256);
    }

    #[test]
    fn k2_regular_has_dim_eight() {
        let re = enveloping_regular(&k_n(2));
        let p = takeuchi_product(&re, &re).unwrap();
        assert_eq!(p.dim(), 8);
        assert!(verify_env_bimodule(&p.env().unwrap()).passed());
    }

    #[test]
    fn end_ring_dims() {
        assert_eq!(end_ring(&k_n(1)).algebra.dim(), 1);
        let e = end_ring(&k_n(2));
        assert_eq!(e.algebra.dim(), 4);
        let m2 = make_multimatrix(&[2]).unwrap().algebra().clone();
        let e = end_ring(&m2);
        assert_eq!(e.algebra.dim(), 16);
        assert!(e.verify().passed());
        // r ⊗ s̄ ↦ (x ↦ r x s) is injective on R ⊗ R̄
        let mut images = Vec::new();
        for r in 0..4 {
            for s in 0..4 {
                images.push(e.algebra.mul(&e.source.cols[r], &e.target.cols[s]));
            }
        }
        assert_eq!(linalg::rank(16, &images), 16);
    }

    #[test]
    fn theta_on_end_ring() {
        let e = end_ring(&k_n(2));
        let t = theta_maps(&e.env()).unwrap();
        assert_eq!(t.theta.rank(), 4);
        assert_eq!(t.theta_prime.rank(), 4);
        assert!(t.verify(&e.env(), Some(&e)).unwrap().passed());
        let k = end_ring(&k_n(1));
        let t = theta_maps(&k.env()).unwrap();
        assert_eq!(t.theta, LinearMap::identity(1));
    }

    #[test]
    fn alpha_over_k2() {
        let re = enveloping_regular(&k_n(2));
        let a = alpha_maps(&re, &re, &re).unwrap();
        assert_eq!(a.alpha.dom, a.mp_n.dim());
        assert_eq!(a.alpha.rank(), a.alpha.dom);
        let k = k_n(1);
        let ops: [Vec<SparseVec>; 4] = std::array::from_fn(|_| (0..2).map(linalg::unit).collect());
        let v = EnvBimodule::new(k, 2, ops).unwrap();
        let a = alpha_maps(&v, &v, &v).unwrap();
        assert!(a.alpha.is_bijective() && a.alpha_prime.is_bijective());
    }
}
