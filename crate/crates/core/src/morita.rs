//! Strict Morita contexts and base change of weak bialgebras along them.

use crate::algebra::{make_multimatrix, FiniteAlgebra, MultiMatrixAlgebra};
use crate::bimodule::{tensor_over, verify_bimodule, Bimodule, Subquotient};
use crate::error::{Error, Result};
use crate::frobenius::Frobenius;
use crate::linalg::{self, Accum, Echelon, LinearMap, Quotient, SparseVec};
use crate::report::{Report, Tally};
use crate::scalar::Scalar;
use crate::weak::{tensor_mul, tensor_vec, Based, WeakBialgebra};

/// Embedding of `P` and `Q` into `R` for contexts cut out by an idempotent
/// `p ∈ R`, with `P = pR`, `Q = Rp`.
#[derive(Clone, Debug)]
pub struct Corner {
    pub p_in_r: LinearMap,
    pub q_in_r: LinearMap,
    pub idempotent: SparseVec,
}

/// `(R, S, P, Q, f, g)` with `P` an `(S,R)`- and `Q` an `(R,S)`-bimodule.
#[derive(Clone, Debug)]
pub struct MoritaContext {
    pub r: FiniteAlgebra,
    pub s: FiniteAlgebra,
    pub p: Bimodule,
    pub q: Bimodule,
    /// `P ⊗ Q → S`, index `p * dim Q + q`.
    pub f: LinearMap,
    /// `Q ⊗ P → R`, index `q * dim P + p`.
    pub g: LinearMap,
    /// `Σ p_i ⊗ q^i` with `f(Σ p_i ⊗ q^i) = 1_S`.
    pub f_inv: SparseVec,
    /// `Σ q_i ⊗ p^i` with `g(Σ q_i ⊗ p^i) = 1_R`.
    pub g_inv: SparseVec,
    pub frob_r: Frobenius,
    pub frob_s: Frobenius,
    pub corner: Option<Corner>,
}

fn split(v: &SparseVec, n: usize) -> Vec<(usize, usize, Scalar)> {
    v.iter().map(|(k, c)| (k / n, k % n, c.clone())).collect()
}

impl MoritaContext {
    /// Finds the dual bases; fails if `f` or `g` misses the unit.
    #[allow(clippy::too_many_arguments)]
    pub fn new(r: FiniteAlgebra, s: FiniteAlgebra, p: Bimodule, q: Bimodule, f: LinearMap, g: LinearMap, frob_r: Frobenius, frob_s: Frobenius) -> Result<Self> {
        let (dp, dq) = (p.dim, q.dim);
        if f.dom != dp * dq || f.cod != s.dim() || g.dom != dq * dp || g.cod != r.dim() {
            return Err(Error::Shape("pairings of a Morita context".into()));
        }
        let f_inv = f.solve(s.unit()).ok_or_else(|| Error::InvalidContext("f does not reach 1_S".into()))?;
        let g_inv = g.solve(r.unit()).ok_or_else(|| Error::InvalidContext("g does not reach 1_R".into()))?;
        Ok(MoritaContext { r, s, p, q, f, g, f_inv, g_inv, frob_r, frob_s, corner: None })
    }

    /// `(S, R, Q, P, g, f)`.
    pub fn swap(&self) -> MoritaContext {
        MoritaContext {
            r: self.s.clone(),
            s: self.r.clone(),
            p: self.q.clone(),
            q: self.p.clone(),
            f: self.g.clone(),
            g: self.f.clone(),
            f_inv: self.g_inv.clone(),
            g_inv: self.f_inv.clone(),
            frob_r: self.frob_s.clone(),
            frob_s: self.frob_r.clone(),
            corner: None,
        }
    }

    pub fn f_pairs(&self) -> Vec<(usize, usize, Scalar)> {
        split(&self.f_inv, self.q.dim)
    }

    pub fn g_pairs(&self) -> Vec<(usize, usize, Scalar)> {
        split(&self.g_inv, self.p.dim)
    }

    pub fn f_of(&self, p: &[(usize, Scalar)], q: &[(usize, Scalar)]) -> SparseVec {
        self.f.apply(&tensor_vec(p, q, self.q.dim))
    }

    pub fn g_of(&self, q: &[(usize, Scalar)], p: &[(usize, Scalar)]) -> SparseVec {
        self.g.apply(&tensor_vec(q, p, self.p.dim))
    }
}

/// Base change along `ctx` or its swap, whichever starts at the base of `b`.
pub fn base_change_auto(b: &Based, ctx: &MoritaContext) -> Result<BaseChange> {
    let e = b.base.entries();
    if e == ctx.r.entries() && b.base.dim() == ctx.r.dim() {
        base_change(b, ctx)
    } else if e == ctx.s.entries() && b.base.dim() == ctx.s.dim() {
        base_change(b, &ctx.swap())
    } else {
        Err(Error::BaseMismatch(format!("base of dim {} matches neither side of the context ({}, {})", b.base.dim(), ctx.r.dim(), ctx.s.dim())))
    }
}

/// `R` regarded as a Morita context with itself.
pub fn trivial_context(r: &FiniteAlgebra, frob: Frobenius) -> MoritaContext {
    let n = r.dim();
    let reg = Bimodule::regular(r);
    let mult = LinearMap { dom: n * n, cod: n, cols: (0..n * n).map(|k| r.basis_product(k / n, k % n).clone()).collect() };
    let one = tensor_vec(r.unit(), r.unit(), n);
    MoritaContext {
        r: r.clone(),
        s: r.clone(),
        p: reg.clone(),
        q: reg,
        f: mult.clone(),
        g: mult,
        f_inv: one.clone(),
        g_inv: one,
        frob_r: frob.clone(),
        frob_s: frob,
        corner: Some(Corner { p_in_r: LinearMap::identity(n), q_in_r: LinearMap::identity(n), idempotent: r.unit().clone() }),
    }
}

/// Context between a multi-matrix algebra and `k^n`, cut out by
/// `p = Σ_α E^α_11`.
pub fn canonical_context(m: &MultiMatrixAlgebra) -> Result<MoritaContext> {
    let blocks = m.blocks();
    let nb = blocks.len();
    let r = m.algebra().clone();
    let kn = make_multimatrix(&vec![1; nb])?;
    let s = kn.algebra().clone();
    // basis of P = pR: E^α_{1j}; of Q = Rp: E^α_{i1}
    let slots: Vec<(usize, usize)> = (0..nb).flat_map(|a| (0..blocks[a]).map(move |j| (a, j))).collect();
    let d = slots.len();
    let pos = |a: usize, j: usize| slots.iter().position(|&x| x == (a, j)).expect("slot");
    let mut p_left = Vec::with_capacity(nb * d);
    let mut q_right = Vec::with_capacity(d * nb);
    for b in 0..nb {
        for &(a, _) in &slots {
            p_left.push(if a == b { linalg::unit(p_left.len() % d) } else { Vec::new() });
        }
    }
    for (k, &(a, _)) in slots.iter().enumerate() {
        for b in 0..nb {
            q_right.push(if a == b { linalg::unit(k) } else { Vec::new() });
        }
    }
    let nr = r.dim();
    let mut p_right = Vec::with_capacity(d * nr);
    for &(a, j) in &slots {
        for x in 0..nr {
            let (b, k, l) = m.locate(x);
            p_right.push(if a == b && j == k { linalg::unit(pos(a, l)) } else { Vec::new() });
        }
    }
    let mut q_left = Vec::with_capacity(nr * d);
    for x in 0..nr {
        let (b, k, l) = m.locate(x);
        for &(a, i) in &slots {
            q_left.push(if a == b && l == i { linalg::unit(pos(a, k)) } else { Vec::new() });
        }
    }
    let p = Bimodule::new(s.clone(), r.clone(), d, p_left, p_right)?;
    let q = Bimodule::new(r.clone(), s.clone(), d, q_left, q_right)?;
    let mut f_cols = Vec::with_capacity(d * d);
    let mut g_cols = Vec::with_capacity(d * d);
    for &(a, j) in &slots {
        for &(b, i) in &slots {
            f_cols.push(if a == b && i == j { linalg::unit(kn.index(a, 0, 0)) } else { Vec::new() });
        }
    }
    for &(a, i) in &slots {
        for &(b, j) in &slots {
            g_cols.push(if a == b { linalg::unit(m.index(a, i, j)) } else { Vec::new() });
        }
    }
    let f = LinearMap { dom: d * d, cod: nb, cols: f_cols };
    let g = LinearMap { dom: d * d, cod: nr, cols: g_cols };
    let one = Scalar::one();
    let f_inv: SparseVec = (0..nb).map(|a| (pos(a, 0) * d + pos(a, 0), one.clone())).collect();
    let g_inv: SparseVec = (0..d).map(|k| (k * d + k, one.clone())).collect();
    let embed = |mk: &dyn Fn(usize, usize) -> usize| LinearMap { dom: d, cod: nr, cols: slots.iter().map(|&(a, j)| linalg::unit(mk(a, j))).collect() };
    let corner = Corner {
        p_in_r: embed(&|a, j| m.index(a, 0, j)),
        q_in_r: embed(&|a, i| m.index(a, i, 0)),
        idempotent: {
            let mut v: SparseVec = (0..nb).map(|a| (m.index(a, 0, 0), one.clone())).collect();
            v.sort_by_key(|e| e.0);
            v
        },
    };
    Ok(MoritaContext {
        r,
        s,
        p,
        q,
        f,
        g,
        f_inv,
        g_inv,
        frob_r: Frobenius::standard(m),
        frob_s: Frobenius::standard(&kn),
        corner: Some(corner),
    })
}

/// Bimodule, balancing, mixed-associativity and unit checks.
pub fn verify_context(ctx: &MoritaContext) -> Report {
    let mut rep = Report::new("Morita context");
    rep.absorb("P", verify_bimodule(&ctx.p));
    rep.absorb("Q", verify_bimodule(&ctx.q));
    let (p, q, r, s) = (&ctx.p, &ctx.q, &ctx.r, &ctx.s);
    let mut bal = Tally::new("f and g are balanced bimodule maps");
    let mut mixed = Tally::new("mixed associativity");
    for x in 0..p.dim {
        let ex = linalg::unit(x);
        for y in 0..q.dim {
            let ey = linalg::unit(y);
            let fxy = ctx.f_of(&ex, &ey);
            let gyx = ctx.g_of(&ey, &ex);
            for i in 0..r.dim() {
                let lhs = ctx.f_of(&p.act_right(&ex, i), &ey);
                let rhs = ctx.f_of(&ex, &q.act_left(i, &ey));
                bal.expect(lhs == rhs, || format!("f(p{x}·r{i} ⊗ q{y})"));
                bal.expect(ctx.g_of(&q.act_left(i, &ey), &ex) == r.lmul_basis(i, &gyx), || format!("g(r{i}·q{y} ⊗ p{x})"));
                bal.expect(ctx.g_of(&ey, &p.act_right(&ex, i)) == r.rmul_basis(&gyx, i), || format!("g(q{y} ⊗ p{x}·r{i})"));
            }
            for j in 0..s.dim() {
                let lhs = ctx.g_of(&q.act_right(&ey, j), &ex);
                let rhs = ctx.g_of(&ey, &p.act_left(j, &ex));
                bal.expect(lhs == rhs, || format!("g(q{y}·s{j} ⊗ p{x})"));
                bal.expect(ctx.f_of(&p.act_left(j, &ex), &ey) == s.lmul_basis(j, &fxy), || format!("f(s{j}·p{x} ⊗ q{y})"));
                bal.expect(ctx.f_of(&ex, &q.act_right(&ey, j)) == s.rmul_basis(&fxy, j), || format!("f(p{x} ⊗ q{y}·s{j})"));
            }
            for x2 in 0..p.dim {
                let ex2 = linalg::unit(x2);
                mixed.expect(p.act_left_vec(&fxy, &ex2) == p.act_right_vec(&ex, &ctx.g_of(&ey, &ex2)), || format!("f(p{x}⊗q{y})·p{x2}"));
            }
            for y2 in 0..q.dim {
                let ey2 = linalg::unit(y2);
                mixed.expect(q.act_left_vec(&gyx, &ey2) == q.act_right_vec(&ey, &ctx.f_of(&ex, &ey2)), || format!("g(q{y}⊗p{x})·q{y2}"));
            }
        }
    }
    rep.record(bal);
    rep.record(mixed);
    rep.check("f(Σ p_i ⊗ q^i) = 1_S", &ctx.f.apply(&ctx.f_inv) == s.unit(), || "dual basis for f".into());
    rep.check("g(Σ q_i ⊗ p^i) = 1_R", &ctx.g.apply(&ctx.g_inv) == r.unit(), || "dual basis for g".into());
    for (name, a, rr) in [("P ⊗_R Q ≅ S", tensor_over(p, r, q), s), ("Q ⊗_S P ≅ R", tensor_over(q, s, p), r)] {
        let d = a.map(|(t, _)| t.dim).unwrap_or(usize::MAX);
        rep.check(name, d == rr.dim(), || format!("dimension {d} vs {}", rr.dim()));
    }
    rep.check("Frobenius form on R", ctx.frob_r.is_valid(r), || "invalid".into());
    rep.check("Frobenius form on S", ctx.frob_s.is_valid(s), || "invalid".into());
    rep
}

/// `R ⊗ R^op`, basis `r_a ⊗ r̄_b` at `a * dim R + b`.
pub fn enveloping(r: &FiniteAlgebra) -> FiniteAlgebra {
    r.tensor(&r.opposite())
}

/// `L` as an `(R^e, R^e)`-bimodule through `η(r ⊗ r̄′) = s(r)t(r′)`.
fn ring_as_env_bimodule(b: &Based, re: &FiniteAlgebra) -> Result<Bimodule> {
    let l = &b.h.algebra;
    let (nl, nr) = (l.dim(), b.base.dim());
    let t = b.target();
    let eta: Vec<SparseVec> = (0..nr * nr).map(|k| l.mul(&b.source.cols[k / nr], &t.cols[k % nr])).collect();
    let mut left = Vec::with_capacity(nr * nr * nl);
    for e in &eta {
        for m in 0..nl {
            left.push(l.mul(e, &linalg::unit(m)));
        }
    }
    let mut right = Vec::with_capacity(nl * nr * nr);
    for m in 0..nl {
        for e in &eta {
            right.push(l.mul(&linalg::unit(m), e));
        }
    }
    Bimodule::new(re.clone(), re.clone(), nl, left, right)
}

/// `P^e = P ⊗ Q̄` as an `(S^e, R^e)`-bimodule, index `p * dim Q + q`.
fn p_env(ctx: &MoritaContext, se: &FiniteAlgebra, re: &FiniteAlgebra) -> Result<Bimodule> {
    let (p, q) = (&ctx.p, &ctx.q);
    let (dp, dq, ns, nr) = (p.dim, q.dim, ctx.s.dim(), ctx.r.dim());
    let mut left = Vec::new();
    for k in 0..ns * ns {
        for x in 0..dp {
            for y in 0..dq {
                // (σ ⊗ τ̄)(p ⊗ q̄) = σp ⊗ (qτ)‾
                left.push(tensor_vec(&p.act_left(k / ns, &linalg::unit(x)), &q.act_right(&linalg::unit(y), k % ns), dq));
            }
        }
    }
    let mut right = Vec::new();
    for x in 0..dp {
        for y in 0..dq {
            for k in 0..nr * nr {
                // (p ⊗ q̄)(r ⊗ r̄′) = pr ⊗ (r′q)‾
                right.push(tensor_vec(&p.act_right(&linalg::unit(x), k / nr), &q.act_left(k % nr, &linalg::unit(y)), dq));
            }
        }
    }
    Bimodule::new(se.clone(), re.clone(), dp * dq, left, right)
}

/// `Q^e = Q ⊗ P̄` as an `(R^e, S^e)`-bimodule, index `q * dim P + p`.
fn q_env(ctx: &MoritaContext, re: &FiniteAlgebra, se: &FiniteAlgebra) -> Result<Bimodule> {
    let (p, q) = (&ctx.p, &ctx.q);
    let (dp, dq, ns, nr) = (p.dim, q.dim, ctx.s.dim(), ctx.r.dim());
    let mut left = Vec::new();
    for k in 0..nr * nr {
        for y in 0..dq {
            for x in 0..dp {
                left.push(tensor_vec(&q.act_left(k / nr, &linalg::unit(y)), &p.act_right(&linalg::unit(x), k % nr), dp));
            }
        }
    }
    let mut right = Vec::new();
    for y in 0..dq {
        for x in 0..dp {
            for k in 0..ns * ns {
                right.push(tensor_vec(&q.act_right(&linalg::unit(y), k / ns), &p.act_left(k % ns, &linalg::unit(x)), dp));
            }
        }
    }
    Bimodule::new(re.clone(), se.clone(), dq * dp, left, right)
}

/// Tuple `(p₁, q̄₁, ℓ, q₂, p̄₂)` of basis indices.
pub type Tuple = [usize; 5];

/// `L̃ = P^e ⊗_{R^e} L ⊗_{R^e} Q^e` together with its presentation.
#[derive(Clone, Debug)]
pub struct BaseChange {
    /// The weak bialgebra that was base-changed.
    pub input: Based,
    pub based: Based,
    /// Dimensions of `P`, `Q` and `L`.
    pub dims: (usize, usize, usize),
    left: Subquotient,
    right: Subquotient,
    /// Class of every ambient basis tuple.
    classes: Vec<SparseVec>,
    /// Representative tuple of every basis vector of `L̃`.
    pub reps: Vec<Tuple>,
}

impl BaseChange {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn ambient(&self) -> usize {
        self.classes.len()
    }

    pub fn index(&self, t: Tuple) -> usize {
        let (_, dq, dl) = self.dims;
        let dp = self.dims.0;
        (((t[0] * dq + t[1]) * dl + t[2]) * dq + t[3]) * dp + t[4]
    }

    pub fn tuple(&self, mut i: usize) -> Tuple {
        let (dp, dq, dl) = self.dims;
        let mut t = [0; 5];
        for (slot, d) in [(4, dp), (3, dq), (2, dl), (1, dq), (0, dp)] {
            t[slot] = i % d;
            i /= d;
        }
        t
    }

    pub fn class(&self, t: Tuple) -> &SparseVec {
        &self.classes[self.index(t)]
    }

    pub fn class_of(&self, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (i, c) in v {
            acc.add_scaled(c, &self.classes[*i]);
        }
        acc.finish()
    }

    /// Class of `p₁ q̄₁ ⊗ ℓ ⊗ q₂ p̄₂` for vectors in each slot.
    pub fn class_multi(&self, parts: [&[(usize, Scalar)]; 5]) -> SparseVec {
        let (dp, dq, dl) = self.dims;
        let mut v: SparseVec = vec![(0, Scalar::one())];
        for (part, d) in parts.iter().zip([dp, dq, dl, dq, dp]) {
            v = linalg::kron(&v, part, d);
        }
        self.class_of(&v)
    }

    /// Spanning set of the relations among ambient tuples.
    pub fn relation_generators(&self) -> Vec<SparseVec> {
        let (dp, dq, _) = self.dims;
        let tail = dq * dp;
        let mut out = Vec::new();
        for row in self.left.quotient.relations().rows() {
            for b in 0..tail {
                out.push(row.iter().map(|(a, c)| (a * tail + b, c.clone())).collect());
            }
        }
        for row in self.right.quotient.relations().rows() {
            let mut v: SparseVec = row.iter().map(|(xb, c)| (self.left.quotient.lift(xb / tail) * tail + xb % tail, c.clone())).collect();
            v.sort_by_key(|e| e.0);
            out.push(v);
        }
        out
    }
}

fn for_terms<'a>(bc: &'a BaseChange, v: &'a [(usize, Scalar)]) -> impl Iterator<Item = (Tuple, &'a Scalar)> + 'a {
    v.iter().map(move |(i, c)| (bc.tuple(*i), c))
}

/// Base change of `L` over `R` to a weak bialgebra over `S`.
pub fn base_change(b: &Based, ctx: &MoritaContext) -> Result<BaseChange> {
    if b.base.dim() != ctx.r.dim() || b.base.entries() != ctx.r.entries() {
        return Err(Error::BaseMismatch("context algebra R differs from the base of L".into()));
    }
    let l = &b.h;
    let la = &l.algebra;
    let re = enveloping(&ctx.r);
    let se = enveloping(&ctx.s);
    let pe = p_env(ctx, &se, &re)?;
    let qe = q_env(ctx, &re, &se)?;
    let lb = ring_as_env_bimodule(b, &re)?;
    let (x, left) = tensor_over(&pe, &re, &lb)?;
    let (_, right) = tensor_over(&x, &re, &qe)?;
    let (dp, dq, dl) = (ctx.p.dim, ctx.q.dim, l.dim());
    let tail = dq * dp;
    let first: Vec<SparseVec> = (0..dp * dq * dl).map(|a| left.quotient.project_index(a)).collect();
    let mut classes = Vec::with_capacity(dp * dq * dl * tail);
    for xs in &first {
        for t in 0..tail {
            let v: SparseVec = xs.iter().map(|(k, c)| (k * tail + t, c.clone())).collect();
            classes.push(right.quotient.project(&v));
        }
    }
    let n = right.quotient.dim();
    let mut bc = BaseChange { input: b.clone(), based: b.clone(), dims: (dp, dq, dl), left, right, classes, reps: Vec::new() };
    bc.reps = (0..n).map(|k| {
        let xb = bc.right.quotient.lift(k);
        bc.tuple(bc.left.quotient.lift(xb / tail) * tail + xb % tail)
    }).collect();
    let gens = bc.relation_generators();

    let t = b.target();
    let u = |i: usize| linalg::unit(i);
    let mul_tuples = |x: Tuple, y: Tuple| -> SparseVec {
        let r1 = ctx.g_of(&u(x[3]), &u(y[0]));
        let r2 = ctx.g_of(&u(y[1]), &u(x[4]));
        let mid = la.mul_all(&[&u(x[2]), &b.source.apply(&r1), &t.apply(&r2), &u(y[2])]);
        bc.class_multi([&u(x[0]), &u(x[1]), &mid, &u(y[3]), &u(y[4])])
    };
    let mut mult = Vec::with_capacity(n * n);
    for &x in &bc.reps {
        for &y in &bc.reps {
            mult.push(mul_tuples(x, y));
        }
    }
    for g in &gens {
        for &y in &bc.reps {
            let mut lhs = Accum::new();
            let mut rhs = Accum::new();
            for (x, c) in for_terms(&bc, g) {
                lhs.add_scaled(c, &mul_tuples(x, y));
                rhs.add_scaled(c, &mul_tuples(y, x));
            }
            if !lhs.is_empty() || !rhs.is_empty() {
                return Err(Error::IllDefined("multiplication on L̃".into()));
            }
        }
    }
    let fp = ctx.f_pairs();
    let unit_with = |act: &dyn Fn(usize, usize) -> (SparseVec, SparseVec)| -> SparseVec {
        let mut acc = Accum::new();
        for (pi, qi, ci) in &fp {
            for (pj, qj, cj) in &fp {
                let (p1, q1) = act(*pi, *qj);
                acc.add_scaled(&(ci * cj), &bc.class_multi([&p1, &q1, la.unit(), &u(*qi), &u(*pj)]));
            }
        }
        acc.finish()
    };
    let unit = unit_with(&|p, q| (u(p), u(q)));
    let labels = (0..n).map(|k| format!("x{k}")).collect();
    let algebra = FiniteAlgebra::new(labels, mult, unit)?;
    let ns = ctx.s.dim();
    let s_tilde = LinearMap { dom: ns, cod: n, cols: (0..ns).map(|j| unit_with(&|p, q| (ctx.p.act_left(j, &u(p)), u(q)))).collect() };
    let t_tilde = LinearMap { dom: ns, cod: n, cols: (0..ns).map(|j| unit_with(&|p, q| (u(p), ctx.q.act_right(&u(q), j)))).collect() };

    let counit_tuple = |x: Tuple| -> Scalar {
        let r = ctx.g_of(&u(x[3]), &u(x[4]));
        let er = b.counit_base(&la.mul(&u(x[2]), &b.source.apply(&r)));
        ctx.frob_s.eval(&ctx.f_of(&ctx.p.act_right_vec(&u(x[0]), &er), &u(x[1])))
    };
    for g in &gens {
        let e: Scalar = for_terms(&bc, g).map(|(x, c)| c * &counit_tuple(x)).sum();
        if !e.is_zero() {
            return Err(Error::IllDefined("counit on L̃".into()));
        }
    }
    let counit: Vec<Scalar> = bc.reps.iter().map(|&x| counit_tuple(x)).collect();

    // Δ lifted from L̃ ×_S L̃ with the separability element of ψ_S
    let lift = {
        let mut acc = Accum::new();
        for (a, c, k) in &ctx.frob_s.element {
            acc.add_scaled(k, &tensor_vec(&t_tilde.cols[*a], &s_tilde.cols[*c], n));
        }
        acc.finish()
    };
    let gp = ctx.g_pairs();
    let delta_tuple = |x: Tuple| -> SparseVec {
        let mut acc = Accum::new();
        for (jk, c) in l.delta_basis(x[2]) {
            let (l1, l2) = (jk / dl, jk % dl);
            for (qi, pi, ci) in &gp {
                for (pj, qj, cj) in &fp {
                    let a = bc.class([x[0], *qi, l1, x[3], *pj]);
                    let z = bc.class([*pi, x[1], l2, *qj, x[4]]);
                    acc.add_scaled(&(c * &(ci * cj)), &tensor_vec(a, z, n));
                }
            }
        }
        acc.finish()
    };
    let mut comult = Vec::with_capacity(n);
    for &x in &bc.reps {
        comult.push(tensor_mul(&algebra, 2, &lift, &delta_tuple(x)));
    }
    for g in &gens {
        let mut acc = Accum::new();
        for (x, c) in for_terms(&bc, g) {
            acc.add_scaled(c, &delta_tuple(x));
        }
        if !tensor_mul(&algebra, 2, &lift, &acc.finish()).is_empty() {
            return Err(Error::IllDefined("comultiplication on L̃".into()));
        }
    }
    let h = WeakBialgebra::new(algebra, comult, counit)?;
    let based = Based::new(h, ctx.s.clone(), s_tilde)?;
    if based.target() != t_tilde {
        return Err(Error::IllDefined("target map of L̃ disagrees with ε_s∘s̃".into()));
    }
    bc.based = based;
    Ok(bc)
}

/// Base change along the swapped context: from `S` back to `R`.
pub fn amplify(h: &Based, ctx: &MoritaContext) -> Result<BaseChange> {
    base_change(h, &ctx.swap())
}

/// `Φ(p₁q̄₁ ⊗ ℓ ⊗ q₂p̄₂) = s(p₁)t(q₁)ℓs(q₂)t(p₂)` into `L`, for contexts
/// with a corner embedding.
pub fn corner_map(bc: &BaseChange, ctx: &MoritaContext) -> Result<LinearMap> {
    let corner = ctx.corner.as_ref().ok_or_else(|| Error::InvalidContext("context has no corner embedding".into()))?;
    let b = &bc.input;
    let l = &b.h.algebra;
    let t = b.target();
    let phi = |x: Tuple| -> SparseVec {
        let s = |v: &SparseVec| b.source.apply(v);
        let tt = |v: &SparseVec| t.apply(v);
        l.mul_all(&[
            &s(&corner.p_in_r.cols[x[0]]),
            &tt(&corner.q_in_r.cols[x[1]]),
            &linalg::unit(x[2]),
            &s(&corner.q_in_r.cols[x[3]]),
            &tt(&corner.p_in_r.cols[x[4]]),
        ])
    };
    for g in bc.relation_generators() {
        let mut acc = Accum::new();
        for (x, c) in for_terms(bc, &g) {
            acc.add_scaled(c, &phi(x));
        }
        if !acc.is_empty() {
            return Err(Error::IllDefined("corner map".into()));
        }
    }
    Ok(LinearMap { dom: bc.dim(), cod: l.dim(), cols: bc.reps.iter().map(|&x| phi(x)).collect() })
}

/// Bijectivity and compatibility with all weak-bialgebra structure maps.
pub fn weak_iso_report(phi: &LinearMap, a: &WeakBialgebra, b: &WeakBialgebra) -> Report {
    let mut rep = Report::new("weak bialgebra isomorphism");
    let n = a.dim();
    rep.check("bijective", phi.dom == n && phi.cod == b.dim() && phi.is_bijective(), || format!("rank {} for dims {n} and {}", phi.rank(), b.dim()));
    rep.check("unit", &phi.apply(a.one()) == b.one(), || "φ(1) ≠ 1".into());
    let mut mult = Tally::new("multiplicative");
    let mut comult = Tally::new("comultiplicative");
    let mut counit = Tally::new("counital");
    let nb = b.dim();
    let phi2 = |v: &SparseVec| -> SparseVec {
        let mut acc = Accum::new();
        for (jk, c) in v {
            acc.add_scaled(c, &tensor_vec(&phi.cols[jk / n], &phi.cols[jk % n], nb));
        }
        acc.finish()
    };
    for i in 0..n {
        for j in 0..n {
            let lhs = phi.apply(a.algebra.basis_product(i, j));
            let rhs = b.mul(&phi.cols[i], &phi.cols[j]);
            mult.expect(lhs == rhs, || format!("({i}, {j})"));
        }
        comult.expect(phi2(a.delta_basis(i)) == b.delta(&phi.cols[i]), || format!("Δ on {i}"));
        counit.expect(b.eps(&phi.cols[i]) == a.counit()[i], || format!("ε on {i}"));
    }
    rep.record(mult);
    rep.record(comult);
    rep.record(counit);
    rep
}

/// The canonical map `base_change(amplify(H)) → H`,
/// `p₁q̄₁ ⊗ (a₁b̄₁ ⊗ h ⊗ b₂ā₂) ⊗ q₂p̄₂ ↦ s(f(p₁a₁))t(f(b₁q₁)) h s(f(b₂q₂))t(f(p₂a₂))`.
pub fn round_trip_map(amp: &BaseChange, back: &BaseChange, ctx: &MoritaContext) -> Result<LinearMap> {
    let h = &amp.input;
    let ha = &h.h.algebra;
    let t = h.target();
    let u = linalg::unit;
    let eval = |outer: Tuple, inner: Tuple| -> SparseVec {
        let s1 = h.source.apply(&ctx.f_of(&u(outer[0]), &u(inner[0])));
        let t1 = t.apply(&ctx.f_of(&u(inner[1]), &u(outer[1])));
        let s2 = h.source.apply(&ctx.f_of(&u(inner[3]), &u(outer[3])));
        let t2 = t.apply(&ctx.f_of(&u(outer[4]), &u(inner[4])));
        ha.mul_all(&[&s1, &t1, &u(inner[2]), &s2, &t2])
    };
    let eval_outer = |outer: Tuple| -> SparseVec { eval(outer, amp.reps[outer[2]]) };
    for g in back.relation_generators() {
        let mut acc = Accum::new();
        for (x, c) in for_terms(back, &g) {
            acc.add_scaled(c, &eval_outer(x));
        }
        if !acc.is_empty() {
            return Err(Error::IllDefined("round-trip map on the outer relations".into()));
        }
    }
    let (dp, dq, _) = back.dims;
    let inner_gens = amp.relation_generators();
    for p1 in 0..dp {
        for q1 in 0..dq {
            for q2 in 0..dq {
                for p2 in 0..dp {
                    for g in &inner_gens {
                        let mut acc = Accum::new();
                        for (x, c) in for_terms(amp, g) {
                            acc.add_scaled(c, &eval([p1, q1, 0, q2, p2], x));
                        }
                        if !acc.is_empty() {
                            return Err(Error::IllDefined("round-trip map on the inner relations".into()));
                        }
                    }
                }
            }
        }
    }
    Ok(LinearMap { dom: back.dim(), cod: ha.dim(), cols: back.reps.iter().map(|&x| eval_outer(x)).collect() })
}

/// A left module over a finite algebra; `action[i * dim + m] = e_i · v_m`.
#[derive(Clone, Debug)]
pub struct Module {
    pub algebra: FiniteAlgebra,
    pub dim: usize,
    pub action: Vec<SparseVec>,
}

impl Module {
    pub fn new(algebra: FiniteAlgebra, dim: usize, action: Vec<SparseVec>) -> Result<Module> {
        if action.len() != algebra.dim() * dim || action.iter().flatten().any(|(k, _)| *k >= dim) {
            return Err(Error::Shape(format!("module action of dim {dim}")));
        }
        Ok(Module { algebra, dim, action })
    }

    pub fn regular(a: &FiniteAlgebra) -> Module {
        let n = a.dim();
        let action = (0..n * n).map(|k| a.basis_product(k / n, k % n).clone()).collect();
        Module { algebra: a.clone(), dim: n, action }
    }

    pub fn act(&self, i: usize, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (m, c) in v {
            acc.add_scaled(c, &self.action[i * self.dim + m]);
        }
        acc.finish()
    }

    pub fn act_vec(&self, x: &[(usize, Scalar)], v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (i, c) in x {
            acc.add_scaled(c, &self.act(*i, v));
        }
        acc.finish()
    }

    /// The matrix of `x` acting on the module.
    pub fn operator(&self, x: &[(usize, Scalar)]) -> LinearMap {
        LinearMap { dom: self.dim, cod: self.dim, cols: (0..self.dim).map(|m| self.act_vec(x, &linalg::unit(m))).collect() }
    }
}

pub fn verify_module(m: &Module) -> Report {
    let mut rep = Report::new("module");
    let a = &m.algebra;
    let mut unit = Tally::new("unit acts trivially");
    let mut assoc = Tally::new("associativity");
    for v in 0..m.dim {
        let e = linalg::unit(v);
        unit.expect(m.act_vec(a.unit(), &e) == e, || format!("1·v{v}"));
        for j in 0..a.dim() {
            let jv = m.act(j, &e);
            for i in 0..a.dim() {
                assoc.expect(m.act(i, &jv) == m.act_vec(a.basis_product(i, j), &e), || format!("(a{i}a{j})·v{v}"));
            }
        }
    }
    rep.record(unit);
    rep.record(assoc);
    rep
}

/// Module homomorphisms `M → N`, as a basis of linear maps.
pub fn module_homs(m: &Module, n: &Module) -> Vec<LinearMap> {
    let (dm, dn) = (m.dim, n.dim);
    // unknown φ[y][x] at y * dm + x; φ(a·v_x) = a·φ(v_x)
    let mut eqs = Echelon::new(dn * dm);
    for i in 0..m.algebra.dim() {
        for x in 0..dm {
            let mut rows: Vec<Accum> = (0..dn).map(|_| Accum::new()).collect();
            for (x2, c) in m.act(i, &linalg::unit(x)) {
                for (y, row) in rows.iter_mut().enumerate() {
                    row.add(y * dm + x2, &c);
                }
            }
            for y in 0..dn {
                for (y2, c) in n.act(i, &linalg::unit(y)) {
                    rows[y2].add(y * dm + x, &-c);
                }
            }
            for row in rows {
                eqs.insert(&row.finish());
            }
        }
    }
    eqs.kernel()
        .into_iter()
        .map(|v| {
            let mut cols = vec![Accum::new(); dm];
            for (k, c) in v {
                cols[k % dm].add(k / dm, &c);
            }
            LinearMap { dom: dm, cod: dn, cols: cols.into_iter().map(Accum::finish).collect() }
        })
        .collect()
}

/// Looks for an invertible module map among small integer combinations of a
/// basis of homomorphisms.
pub fn find_module_iso(m: &Module, n: &Module) -> Option<LinearMap> {
    if m.dim != n.dim {
        return None;
    }
    let homs = module_homs(m, n);
    let k = homs.len();
    if k == 0 {
        return if m.dim == 0 { Some(LinearMap::identity(0)) } else { None };
    }
    let mut coeffs = vec![1i64; k];
    for attempt in 0..64i64 {
        for (j, c) in coeffs.iter_mut().enumerate() {
            *c = 1 + (attempt * (j as i64 + 1) * 7 + j as i64 * 3) % 11;
        }
        let mut cols = vec![Accum::new(); m.dim];
        for (h, &c) in homs.iter().zip(&coeffs) {
            for (x, col) in h.cols.iter().enumerate() {
                cols[x].add_scaled(&Scalar::from_int(c), col);
            }
        }
        let phi = LinearMap { dom: m.dim, cod: n.dim, cols: cols.into_iter().map(Accum::finish).collect() };
        if phi.is_bijective() {
            return Some(phi);
        }
    }
    None
}

/// `F(M) = P^e ⊗_{R^e} M` with its action of `L̃`.
#[derive(Clone, Debug)]
pub struct Transported {
    pub module: Module,
    /// Quotient of `P ⊗ Q ⊗ M`, index `(p * dim Q + q) * dim M + m`.
    pub quotient: Quotient,
    pub source_dim: usize,
}

impl Transported {
    pub fn class(&self, p: usize, q: usize, m: &[(usize, Scalar)], dq: usize) -> SparseVec {
        let base = (p * dq + q) * self.source_dim;
        self.quotient.project(&m.iter().map(|(k, c)| (base + k, c.clone())).collect::<Vec<_>>())
    }

    pub fn rep(&self, k: usize, dq: usize) -> (usize, usize, usize) {
        let i = self.quotient.lift(k);
        let dm = self.source_dim;
        ((i / dm) / dq, (i / dm) % dq, i % dm)
    }
}

pub fn transport_module(bc: &BaseChange, ctx: &MoritaContext, m: &Module) -> Result<Transported> {
    let b = &bc.input;
    if m.algebra.entries() != b.h.algebra.entries() {
        return Err(Error::ActionMismatch("module is not over the base-changed algebra".into()));
    }
    let (dp, dq, dm) = (ctx.p.dim, ctx.q.dim, m.dim);
    let t = b.target();
    let u = linalg::unit;
    let idx = |p: usize, q: usize, x: usize| (p * dq + q) * dm + x;
    let mut rels = Echelon::new(dp * dq * dm);
    for r in 0..ctx.r.dim() {
        let sr = &b.source.cols[r];
        let tr = &t.cols[r];
        for p in 0..dp {
            for q in 0..dq {
                for x in 0..dm {
                    let mut acc = Accum::new();
                    for (p2, c) in ctx.p.act_right(&u(p), r) {
                        acc.add(idx(p2, q, x), &c);
                    }
                    for (x2, c) in m.act_vec(sr, &u(x)) {
                        acc.add(idx(p, q, x2), &-c);
                    }
                    rels.insert(&acc.finish());
                    let mut acc = Accum::new();
                    for (q2, c) in ctx.q.act_left(r, &u(q)) {
                        acc.add(idx(p, q2, x), &c);
                    }
                    for (x2, c) in m.act_vec(tr, &u(x)) {
                        acc.add(idx(p, q, x2), &-c);
                    }
                    rels.insert(&acc.finish());
                }
            }
        }
    }
    let quotient = Quotient::new(rels);
    let d = quotient.dim();
    let la = &b.h.algebra;
    let act_tuple = |x: Tuple, i: usize| -> SparseVec {
        let (p3, q3, mm) = (i / dm / dq, (i / dm) % dq, i % dm);
        let r1 = ctx.g_of(&u(x[3]), &u(p3));
        let r2 = ctx.g_of(&u(q3), &u(x[4]));
        let l = la.mul_all(&[&u(x[2]), &b.source.apply(&r1), &t.apply(&r2)]);
        let base = (x[0] * dq + x[1]) * dm;
        quotient.project(&m.act_vec(&l, &u(mm)).into_iter().map(|(k, c)| (base + k, c)).collect::<Vec<_>>())
    };
    for row in quotient.relations().rows() {
        for &x in &bc.reps {
            let mut acc = Accum::new();
            for (i, c) in row {
                acc.add_scaled(c, &act_tuple(x, *i));
            }
            if !acc.is_empty() {
                return Err(Error::IllDefined("transported action on module relations".into()));
            }
        }
    }
    for g in bc.relation_generators() {
        for k in 0..d {
            let mut acc = Accum::new();
            for (x, c) in for_terms(bc, &g) {
                acc.add_scaled(c, &act_tuple(x, quotient.lift(k)));
            }
            if !acc.is_empty() {
                return Err(Error::IllDefined("transported action on L̃ relations".into()));
            }
        }
    }
    let mut action = Vec::with_capacity(bc.dim() * d);
    for &x in &bc.reps {
        for k in 0..d {
            action.push(act_tuple(x, quotient.lift(k)));
        }
    }
    let module = Module::new(bc.based.h.algebra.clone(), d, action)?;
    Ok(Transported { module, quotient, source_dim: dm })
}

/// `M ⋄ N = M ⊗ N / (t(r)m ⊗ n − m ⊗ s(r)n)` with the action through `Δ`.
#[derive(Clone, Debug)]
pub struct ModuleProduct {
    pub module: Module,
    /// Quotient of `M ⊗ N`, index `m * dim N + n`.
    pub quotient: Quotient,
    pub right_dim: usize,
}

pub fn module_product(b: &Based, m: &Module, n: &Module) -> Result<ModuleProduct> {
    let (dm, dn) = (m.dim, n.dim);
    let t = b.target();
    let mut rels = Echelon::new(dm * dn);
    for r in 0..b.base.dim() {
        for x in 0..dm {
            let tx = m.act_vec(&t.cols[r], &linalg::unit(x));
            for y in 0..dn {
                let sy = n.act_vec(&b.source.cols[r], &linalg::unit(y));
                rels.insert(&linalg::sub(&tensor_vec(&tx, &linalg::unit(y), dn), &tensor_vec(&linalg::unit(x), &sy, dn)));
            }
        }
    }
    let quotient = Quotient::new(rels);
    let h = &b.h;
    let act = |i: usize, v: &[(usize, Scalar)]| -> SparseVec {
        let nl = h.dim();
        let mut acc = Accum::new();
        for (jk, c) in h.delta_basis(i) {
            for (xy, d) in v {
                let a = m.act(jk / nl, &linalg::unit(xy / dn));
                let z = n.act(jk % nl, &linalg::unit(xy % dn));
                acc.add_scaled(&(c * d), &tensor_vec(&a, &z, dn));
            }
        }
        quotient.project(&acc.finish())
    };
    for row in quotient.relations().rows() {
        for i in 0..h.dim() {
            if !act(i, row).is_empty() {
                return Err(Error::IllDefined("action on M ⋄ N".into()));
            }
        }
    }
    let d = quotient.dim();
    let mut action = Vec::with_capacity(h.dim() * d);
    for i in 0..h.dim() {
        for k in 0..d {
            action.push(act(i, &linalg::unit(quotient.lift(k))));
        }
    }
    Ok(ModuleProduct { module: Module::new(h.algebra.clone(), d, action)?, quotient, right_dim: dn })
}

/// `ξ: F(M) ⋄ F(N) → F(M ⋄ N)` with its inverse.
#[derive(Clone, Debug)]
pub struct Xi {
    pub xi: LinearMap,
    pub xi_inv: LinearMap,
    pub report: Report,
}

pub fn monoidal_xi(bc: &BaseChange, ctx: &MoritaContext, m: &Module, n: &Module) -> Result<Xi> {
    let dq = ctx.q.dim;
    let fm = transport_module(bc, ctx, m)?;
    let fn_ = transport_module(bc, ctx, n)?;
    let left = module_product(&bc.based, &fm.module, &fn_.module)?;
    let mn = module_product(&bc.input, m, n)?;
    let right = transport_module(bc, ctx, &mn.module)?;
    let s = &bc.input.source;
    let u = linalg::unit;
    let dfn = fn_.module.dim;
    // ξ on a pair of transported basis classes
    let xi_pair = |a: usize, z: usize| -> SparseVec {
        let (p1, q1, x) = fm.rep(a, dq);
        let (p2, q2, y) = fn_.rep(z, dq);
        let r = ctx.g_of(&u(q1), &u(p2));
        let sy = n.act_vec(&s.apply(&r), &u(y));
        let inner = mn.quotient.project(&tensor_vec(&u(x), &sy, n.dim));
        right.class(p1, q2, &inner, dq)
    };
    for row in left.quotient.relations().rows() {
        let mut acc = Accum::new();
        for (az, c) in row {
            acc.add_scaled(c, &xi_pair(az / dfn, az % dfn));
        }
        if !acc.is_empty() {
            return Err(Error::IllDefined("ξ on the ⋄ relations".into()));
        }
    }
    let xi = LinearMap { dom: left.quotient.dim(), cod: right.module.dim, cols: (0..left.quotient.dim()).map(|k| {
        let az = left.quotient.lift(k);
        xi_pair(az / dfn, az % dfn)
    }).collect() };
    let gp = ctx.g_pairs();
    let xi_inv_cols = (0..right.module.dim).map(|k| {
        let (p, q, w) = right.rep(k, dq);
        let xy = mn.quotient.lift(w);
        let (x, y) = (xy / n.dim, xy % n.dim);
        let mut acc = Accum::new();
        for (qi, pi, c) in &gp {
            let a = fm.class(p, *qi, &u(x), dq);
            let z = fn_.class(*pi, q, &u(y), dq);
            acc.add_scaled(c, &tensor_vec(&a, &z, dfn));
        }
        left.quotient.project(&acc.finish())
    }).collect();
    let xi_inv = LinearMap { dom: right.module.dim, cod: left.quotient.dim(), cols: xi_inv_cols };
    let mut report = Report::new("monoidal structure ξ");
    report.check("dim F(M) ⋄ F(N) = dim F(M ⋄ N)", xi.dom == xi.cod, || format!("{} vs {}", xi.dom, xi.cod));
    let id_l = LinearMap::identity(xi.dom);
    let id_r = LinearMap::identity(xi.cod);
    report.check("ξ⁻¹ ∘ ξ = id", xi_inv.compose(&xi).ok() == Some(id_l), || "left inverse fails".into());
    report.check("ξ ∘ ξ⁻¹ = id", xi.compose(&xi_inv).ok() == Some(id_r), || "right inverse fails".into());
    let mut eq = Tally::new("ξ is L̃-equivariant");
    for i in 0..bc.dim() {
        for k in 0..xi.dom {
            let lhs = xi.apply(&left.module.act(i, &u(k)));
            let rhs = right.module.act(i, &xi.cols[k]);
            eq.expect(lhs == rhs, || format!("x{i} on basis vector {k}"));
        }
    }
    report.record(eq);
    Ok(Xi { xi, xi_inv, report })
}

/// The ordinary bialgebra obtained from `L` over a full matrix algebra.
#[derive(Clone, Debug)]
pub struct Azumaya {
    pub h: WeakBialgebra,
    /// `H → L`, onto the centralizer.
    pub embedding: LinearMap,
    pub centralizer: Vec<SparseVec>,
    pub report: Report,
}

/// `{ℓ : s(r)ℓ = t(r)ℓ, ℓs(r) = ℓt(r)}`.
pub fn centralizer(b: &Based) -> Vec<SparseVec> {
    let l = &b.h.algebra;
    let n = l.dim();
    let t = b.target();
    let nr = b.base.dim();
    let cols: Vec<SparseVec> = (0..n)
        .map(|x| {
            let ex = linalg::unit(x);
            let mut acc = Accum::new();
            for r in 0..nr {
                let d1 = linalg::sub(&l.mul(&b.source.cols[r], &ex), &l.mul(&t.cols[r], &ex));
                let d2 = linalg::sub(&l.mul(&ex, &b.source.cols[r]), &l.mul(&ex, &t.cols[r]));
                for (k, c) in d1 {
                    acc.add(2 * r * n + k, &c);
                }
                for (k, c) in d2 {
                    acc.add((2 * r + 1) * n + k, &c);
                }
            }
            acc.finish()
        })
        .collect();
    LinearMap { dom: n, cod: 2 * nr * n, cols }.kernel()
}

pub fn azumaya_reduce(b: &Based) -> Result<Azumaya> {
    let nr = b.base.dim();
    let d = (1..=nr).find(|d| d * d == nr).ok_or_else(|| Error::NotSingleBlock(format!("base of dim {nr}")))?;
    let m = make_multimatrix(&[d])?;
    if m.algebra().entries() != b.base.entries() {
        return Err(Error::NotSingleBlock("base is not presented as a full matrix algebra".into()));
    }
    let ctx = canonical_context(&m)?;
    let bc = base_change(b, &ctx)?;
    let phi = corner_map(&bc, &ctx)?;
    let corner = ctx.corner.as_ref().expect("canonical context");
    let l = &b.h.algebra;
    let t = b.target();
    let mut spread_l = Accum::new();
    let mut spread_r = Accum::new();
    for (qi, pi, c) in ctx.g_pairs() {
        let q = &corner.q_in_r.cols[qi];
        let p = &corner.p_in_r.cols[pi];
        spread_l.add_scaled(&c, &l.mul(&b.source.apply(q), &t.apply(p)));
        spread_r.add_scaled(&c, &l.mul(&b.source.apply(p), &t.apply(q)));
    }
    let (spread_l, spread_r) = (spread_l.finish(), spread_r.finish());
    let inv_d = Scalar::ratio(1, d as i64);
    let embedding = LinearMap {
        dom: bc.dim(),
        cod: l.dim(),
        cols: phi.cols.iter().map(|y| linalg::scale(&inv_d, &l.mul_all(&[&spread_l, y, &spread_r]))).collect(),
    };
    let cent = centralizer(b);
    let h = bc.based.h.clone();
    let mut report = Report::new("Azumaya reduction");
    report.check("embedding is injective", embedding.rank() == h.dim(), || format!("rank {}", embedding.rank()));
    let mut e = Echelon::new(l.dim());
    for v in &cent {
        e.insert(v);
    }
    report.check("image is the centralizer", cent.len() == h.dim() && embedding.cols.iter().all(|v| e.contains(v)), || {
        format!("centralizer dim {} vs {}", cent.len(), h.dim())
    });
    let mut restricted = Tally::new("L's product restricts to H");
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            let lhs = l.mul(&embedding.cols[i], &embedding.cols[j]);
            let rhs = embedding.apply(h.algebra.basis_product(i, j));
            restricted.expect(lhs == rhs, || format!("({i}, {j})"));
        }
    }
    report.record(restricted);
    report.check("Δ(1) = 1 ⊗ 1", h.delta(h.one()) == tensor_vec(h.one(), h.one(), h.dim()), || "weak unit".into());
    let mut eps = Tally::new("ε is multiplicative");
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            eps.expect(h.eps(h.algebra.basis_product(i, j)) == &h.counit()[i] * &h.counit()[j], || format!("({i}, {j})"));
        }
    }
    report.record(eps);
    report.check("dim L = d⁴ · dim H", l.dim() == d.pow(4) * h.dim(), || format!("{} vs {}·{}", l.dim(), d.pow(4), h.dim()));
    Ok(Azumaya { h, embedding, centralizer: cent, report })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::weak::{groupoid_based, groupoid_weak_hopf, hopf_beta_check, takeuchi_report, verify_weak_bialgebra, Groupoid};

    /// Groupoid algebra over `k^n` with `e_x ↦ id_x`.
    pub(crate) fn groupoid_over_kn(g: &Groupoid) -> Based {
        groupoid_based(g).unwrap()
    }

    #[test]
    fn canonical_contexts_verify() {
        for blocks in [vec![1, 1], vec![2, 1], vec![2]] {
            let m = make_multimatrix(&blocks).unwrap();
            let ctx = canonical_context(&m).unwrap();
            let rep = verify_context(&ctx);
            assert!(rep.passed(), "{rep}");
            assert!(verify_context(&ctx.swap()).passed());
        }
        let ctx = canonical_context(&make_multimatrix(&[2, 1]).unwrap()).unwrap();
        assert_eq!((ctx.p.dim, ctx.q.dim, ctx.g_pairs().len()), (3, 3, 3));
    }

    #[test]
    fn trivial_base_change_is_identity() {
        let b = groupoid_over_kn(&Groupoid::pair(2));
        let ctx = trivial_context(&b.base, Frobenius::standard(&make_multimatrix(&[1, 1]).unwrap()));
        assert!(verify_context(&ctx).passed());
        let bc = base_change(&b, &ctx).unwrap();
        assert_eq!(bc.dim(), 4);
        let phi = corner_map(&bc, &ctx).unwrap();
        assert!(phi.is_bijective());
        assert!(verify_weak_bialgebra(&bc.based.h).passed());
    }

    #[test]
    fn amplify_pair_groupoid() {
        let b = groupoid_over_kn(&Groupoid::pair(2));
        let ctx = canonical_context(&make_multimatrix(&[2, 1]).unwrap()).unwrap();
        let amp = amplify(&b, &ctx).unwrap();
        assert_eq!(amp.dim(), 25);
        let rep = verify_weak_bialgebra(&amp.based.h);
        assert!(rep.passed(), "{rep}");
        let rep = takeuchi_report(&amp.based).unwrap();
        assert!(rep.passed(), "{rep}");
        assert!(hopf_beta_check(&amp.based).unwrap().0);
        let back = base_change(&amp.based, &ctx).unwrap();
        assert_eq!(back.dim(), 4);
        assert!(verify_weak_bialgebra(&back.based.h).passed());
        let phi = corner_map(&back, &ctx).unwrap();
        assert_eq!(phi.rank(), 4);
    }

    fn c2_over_k() -> Based {
        let (h, _) = groupoid_weak_hopf(&Groupoid::cyclic(2)).unwrap();
        Based::canonical(h).unwrap()
    }

    #[test]
    fn round_trips_are_isomorphisms() {
        let cases: Vec<(Based, Vec<usize>)> = vec![
            (groupoid_over_kn(&Groupoid::pair(2)), vec![2, 1]),
            (groupoid_over_kn(&Groupoid::cyclic(1).disjoint_union(&Groupoid::cyclic(1))), vec![1, 2]),
            (c2_over_k(), vec![2]),
        ];
        for (b, blocks) in cases {
            let ctx = canonical_context(&make_multimatrix(&blocks).unwrap()).unwrap();
            let amp = amplify(&b, &ctx).unwrap();
            let back = base_change(&amp.based, &ctx).unwrap();
            let phi = round_trip_map(&amp, &back, &ctx).unwrap();
            let rep = weak_iso_report(&phi, &back.based.h, &b.h);
            assert!(rep.passed(), "{blocks:?}: {rep}");
        }
    }

    #[test]
    fn corner_realization_is_an_algebra_embedding() {
        let b = groupoid_over_kn(&Groupoid::pair(2));
        let ctx = canonical_context(&make_multimatrix(&[2, 1]).unwrap()).unwrap();
        let amp = amplify(&b, &ctx).unwrap();
        let back = base_change(&amp.based, &ctx).unwrap();
        let phi = corner_map(&back, &ctx).unwrap();
        let l = &amp.based.h.algebra;
        let x = &back.based.h.algebra;
        for i in 0..back.dim() {
            for j in 0..back.dim() {
                assert_eq!(phi.apply(x.basis_product(i, j)), l.mul(&phi.cols[i], &phi.cols[j]));
            }
        }
        let corner = ctx.corner.as_ref().unwrap();
        let e = l.mul(&amp.based.source.apply(&corner.idempotent), &amp.based.target().apply(&corner.idempotent));
        assert_eq!(phi.apply(back.based.h.one()), e);
        let pieces: Vec<SparseVec> = (0..l.dim()).map(|k| l.mul_all(&[&e, &linalg::unit(k), &e])).collect();
        assert_eq!(linalg::rank(l.dim(), &pieces), phi.rank());
    }

    #[test]
    fn xi_for_amplified_regular_modules() {
        let b = groupoid_over_kn(&Groupoid::pair(2));
        let ctx = canonical_context(&make_multimatrix(&[2, 1]).unwrap()).unwrap();
        let amp = amplify(&b, &ctx).unwrap();
        let reg = Module::regular(&b.h.algebra);
        assert!(verify_module(&reg).passed());
        let x = monoidal_xi(&amp, &ctx.swap(), &reg, &reg).unwrap();
        assert!(x.report.passed(), "{}", x.report);
        let f = transport_module(&amp, &ctx.swap(), &reg).unwrap();
        assert!(verify_module(&f.module).passed());
    }

    #[test]
    fn modules_survive_a_round_trip() {
        let b = groupoid_over_kn(&Groupoid::pair(2));
        let ctx = canonical_context(&make_multimatrix(&[2, 1]).unwrap()).unwrap();
        let amp = amplify(&b, &ctx).unwrap();
        let back = base_change(&amp.based, &ctx).unwrap();
        let reg = Module::regular(&b.h.algebra);
        let m1 = transport_module(&amp, &ctx.swap(), &reg).unwrap().module;
        let m2 = transport_module(&back, &ctx, &m1).unwrap().module;
        // pull back along the round-trip isomorphism
        let phi = round_trip_map(&amp, &back, &ctx).unwrap();
        let inv = phi.inverse().unwrap();
        let action = (0..b.h.dim()).flat_map(|i| (0..m2.dim).map(move |k| (i, k))).map(|(i, k)| m2.act_vec(&inv.cols[i], &linalg::unit(k))).collect();
        let pulled = Module::new(b.h.algebra.clone(), m2.dim, action).unwrap();
        assert!(verify_module(&pulled).passed());
        assert!(find_module_iso(&reg, &pulled).is_some());
    }

    #[test]
    fn azumaya_of_amplified_c2() {
        let b = c2_over_k();
        let ctx = canonical_context(&make_multimatrix(&[2]).unwrap()).unwrap();
        let amp = amplify(&b, &ctx).unwrap();
        assert_eq!(amp.dim(), 32);
        let az = azumaya_reduce(&amp.based).unwrap();
        assert!(az.report.passed(), "{}", az.report);
        assert_eq!(az.h.dim(), 2);
        assert!(verify_weak_bialgebra(&az.h).passed());
        // single-block check
        assert!(matches!(azumaya_reduce(&groupoid_over_kn(&Groupoid::pair(2))), Err(Error::NotSingleBlock(_))));
    }
}
