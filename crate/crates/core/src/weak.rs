//! Weak bialgebras by structure constants, their counital subalgebras,
//! antipodes, and the ×_R-bialgebra structure over `H_t`.

use crate::algebra::{self, verify_algebra, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::frobenius::Frobenius;
use crate::linalg::{self, Accum, Echelon, LinearMap, Quotient, SparseVec, Subspace};
use crate::report::{Report, Tally};
use crate::scalar::Scalar;
use crate::takeuchi::{self, EnvRing, Side};

#[derive(Clone, Debug)]
pub struct WeakBialgebra {
    pub algebra: FiniteAlgebra,
    /// `comult[i]` is `Δ(e_i)` in `H ⊗ H`, index `j * dim + k`.
    comult: Vec<SparseVec>,
    counit: Vec<Scalar>,
}

/// Product in `A^{⊗k}`; basis indices are base-`dim A` digit strings.
pub fn tensor_mul(a: &FiniteAlgebra, k: usize, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
    let n = a.dim();
    let mut acc = Accum::new();
    let digits = |mut i: usize| -> Vec<usize> {
        let mut d = vec![0; k];
        for slot in d.iter_mut().rev() {
            *slot = i % n;
            i /= n;
        }
        d
    };
    for (i, c) in x {
        let di = digits(*i);
        for (j, d) in y {
            let dj = digits(*j);
            let mut term: SparseVec = vec![(0, c * d)];
            for s in 0..k {
                term = linalg::kron(&term, a.basis_product(di[s], dj[s]), n);
                if term.is_empty() {
                    break;
                }
            }
            for (idx, v) in term {
                acc.add(idx, &v);
            }
        }
    }
    acc.finish()
}

/// `x ⊗ y` in `A^{⊗(p+q)}` for `x ∈ A^{⊗p}` and `y ∈ A^{⊗q}`.
pub fn tensor_vec(x: &[(usize, Scalar)], y: &[(usize, Scalar)], ydim: usize) -> SparseVec {
    let mut v = linalg::kron(x, y, ydim);
    v.sort_by_key(|e| e.0);
    v
}

impl WeakBialgebra {
    pub fn new(algebra: FiniteAlgebra, comult: Vec<SparseVec>, counit: Vec<Scalar>) -> Result<Self> {
        let n = algebra.dim();
        if comult.len() != n || counit.len() != n || comult.iter().flatten().any(|(k, _)| *k >= n * n) {
            return Err(Error::Shape(format!("coalgebra tensors for dim {n}")));
        }
        Ok(WeakBialgebra { algebra, comult, counit })
    }

    pub fn from_entries(algebra: FiniteAlgebra, entries: &[(usize, usize, usize, Scalar)], counit: Vec<Scalar>) -> Result<Self> {
        let n = algebra.dim();
        let mut acc = vec![Accum::new(); n];
        for (i, j, k, c) in entries {
            if *i >= n || *j >= n || *k >= n {
                return Err(Error::Shape(format!("comultiplication entry ({i},{j},{k})")));
            }
            acc[*i].add(j * n + k, c);
        }
        WeakBialgebra::new(algebra, acc.into_iter().map(Accum::finish).collect(), counit)
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn comult_entries(&self) -> Vec<(usize, usize, usize, Scalar)> {
        let n = self.dim();
        let mut out = Vec::new();
        for (i, d) in self.comult.iter().enumerate() {
            for (jk, c) in d {
                out.push((i, jk / n, jk % n, c.clone()));
            }
        }
        out
    }

    pub fn counit(&self) -> &[Scalar] {
        &self.counit
    }

    pub fn delta_basis(&self, i: usize) -> &SparseVec {
        &self.comult[i]
    }

    pub fn delta(&self, x: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accum::new();
        for (i, c) in x {
            acc.add_scaled(c, &self.comult[*i]);
        }
        acc.finish()
    }

    pub fn eps(&self, x: &[(usize, Scalar)]) -> Scalar {
        x.iter().map(|(i, c)| c * &self.counit[*i]).sum()
    }

    pub fn mul(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        self.algebra.mul(x, y)
    }

    pub fn one(&self) -> &SparseVec {
        self.algebra.unit()
    }

    pub fn mul2(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        tensor_mul(&self.algebra, 2, x, y)
    }

    /// `ε_t(h) = ε(1₁h)1₂`.
    pub fn eps_t(&self, h: &[(usize, Scalar)]) -> SparseVec {
        let n = self.dim();
        let mut acc = Accum::new();
        for (ab, c) in self.delta(self.one()) {
            let e = self.eps(&self.algebra.lmul_basis(ab / n, h));
            acc.add(ab % n, &(c * e));
        }
        acc.finish()
    }

    /// `ε_s(h) = 1₁ε(h1₂)`.
    pub fn eps_s(&self, h: &[(usize, Scalar)]) -> SparseVec {
        let n = self.dim();
        let mut acc = Accum::new();
        for (ab, c) in self.delta(self.one()) {
            let e = self.eps(&self.algebra.rmul_basis(h, ab % n));
            acc.add(ab / n, &(c * e));
        }
        acc.finish()
    }

    pub fn eps_t_map(&self) -> LinearMap {
        let n = self.dim();
        LinearMap { dom: n, cod: n, cols: (0..n).map(|i| self.eps_t(&linalg::unit(i))).collect() }
    }

    pub fn eps_s_map(&self) -> LinearMap {
        let n = self.dim();
        LinearMap { dom: n, cod: n, cols: (0..n).map(|i| self.eps_s(&linalg::unit(i))).collect() }
    }

    /// Same structure on new basis vectors (columns of an invertible `phi`).
    pub fn rebase(&self, phi: &LinearMap, labels: Vec<String>) -> Result<WeakBialgebra> {
        let n = self.dim();
        let inv = phi.inverse()?;
        let algebra = self.algebra.rebase(phi, labels)?;
        let mut comult = Vec::with_capacity(n);
        for b in &phi.cols {
            let d = self.delta(b);
            let mut acc = Accum::new();
            for (jk, c) in d {
                let l = &inv.cols[jk / n];
                let r = &inv.cols[jk % n];
                acc.add_scaled(&c, &tensor_vec(l, r, n));
            }
            comult.push(acc.finish());
        }
        let counit = phi.cols.iter().map(|b| self.eps(b)).collect();
        WeakBialgebra::new(algebra, comult, counit)
    }

    /// Same space with the opposite multiplication.
    pub fn with_algebra(&self, algebra: FiniteAlgebra) -> Result<WeakBialgebra> {
        WeakBialgebra::new(algebra, self.comult.clone(), self.counit.clone())
    }
}

/// Exhaustive check of all weak-bialgebra axioms on basis instances.
pub fn verify_weak_bialgebra(h: &WeakBialgebra) -> Report {
    let mut rep = Report::new("weak bialgebra");
    rep.absorb("algebra", verify_algebra(&h.algebra));
    let a = &h.algebra;
    let n = h.dim();
    let mut coassoc = Tally::new("coassociativity");
    let mut counit = Tally::new("counit");
    for i in 0..n {
        let d = h.delta_basis(i);
        let mut left = Accum::new();
        let mut right = Accum::new();
        let mut el = Accum::new();
        let mut er = Accum::new();
        for (jk, c) in d {
            let (j, k) = (jk / n, jk % n);
            left.add_scaled(c, &tensor_vec(h.delta_basis(j), &linalg::unit(k), n));
            right.add_scaled(c, &tensor_vec(&linalg::unit(j), h.delta_basis(k), n * n));
            el.add(k, &(c * &h.counit[j]));
            er.add(j, &(c * &h.counit[k]));
        }
        coassoc.expect(left.finish() == right.finish(), || format!("Δ on {}", a.labels()[i]));
        let e = linalg::unit(i);
        counit.expect(el.finish() == e, || format!("(ε⊗id)Δ({})", a.labels()[i]));
        counit.expect(er.finish() == e, || format!("(id⊗ε)Δ({})", a.labels()[i]));
    }
    rep.record(coassoc);
    rep.record(counit);
    let mut mult = Tally::new("comultiplication is multiplicative");
    for i in 0..n {
        for j in 0..n {
            let lhs = h.delta(a.basis_product(i, j));
            let rhs = h.mul2(h.delta_basis(i), h.delta_basis(j));
            mult.expect(lhs == rhs, || format!("Δ({}·{})", a.labels()[i], a.labels()[j]));
        }
    }
    rep.record(mult);
    // E[f][g] = ε(e_f e_g)
    let pair: Vec<Vec<Scalar>> = (0..n).map(|f| (0..n).map(|g| h.eps(a.basis_product(f, g))).collect()).collect();
    let mut weak_counit = Tally::new("weak counit axiom");
    for g in 0..n {
        let d = h.delta_basis(g);
        for f in 0..n {
            let fg = a.basis_product(f, g);
            for k in 0..n {
                let lhs: Scalar = fg.iter().map(|(x, c)| c * &pair[*x][k]).sum();
                let mut m1 = Scalar::zero();
                let mut m2 = Scalar::zero();
                for (jl, c) in d {
                    let (j, l) = (jl / n, jl % n);
                    m1 += &(c * &(&pair[f][j] * &pair[l][k]));
                    m2 += &(c * &(&pair[f][l] * &pair[j][k]));
                }
                weak_counit.expect(lhs == m1 && lhs == m2, || {
                    format!("ε(fgh) with f={}, g={}, h={}: {lhs}, {m1}, {m2}", a.labels()[f], a.labels()[g], a.labels()[k])
                });
            }
        }
    }
    rep.record(weak_counit);
    let mut weak_unit = Tally::new("weak unit axiom");
    let d1 = h.delta(h.one());
    let lhs = {
        let mut acc = Accum::new();
        for (jk, c) in &d1 {
            acc.add_scaled(c, &tensor_vec(h.delta_basis(jk / n), &linalg::unit(jk % n), n));
        }
        acc.finish()
    };
    let d1_1 = tensor_vec(&d1, h.one(), n);
    let one_d1 = tensor_vec(h.one(), &d1, n * n);
    let m1 = tensor_mul(a, 3, &d1_1, &one_d1);
    let m2 = tensor_mul(a, 3, &one_d1, &d1_1);
    weak_unit.expect(lhs == m1, || "(Δ⊗id)Δ(1) ≠ (Δ(1)⊗1)(1⊗Δ(1))".into());
    weak_unit.expect(lhs == m2, || "(Δ⊗id)Δ(1) ≠ (1⊗Δ(1))(Δ(1)⊗1)".into());
    rep.record(weak_unit);
    rep
}

/// Bases of `H_t`, `H_s` and the two projections.
#[derive(Clone, Debug)]
pub struct CounitalData {
    pub target_basis: Vec<SparseVec>,
    pub source_basis: Vec<SparseVec>,
    pub target_projection: LinearMap,
    pub source_projection: LinearMap,
}

pub fn counital_subalgebras(h: &WeakBialgebra) -> CounitalData {
    let et = h.eps_t_map();
    let es = h.eps_s_map();
    let n = h.dim();
    CounitalData {
        target_basis: linalg::independent(n, &et.cols),
        source_basis: linalg::independent(n, &es.cols),
        target_projection: et,
        source_projection: es,
    }
}

fn span_eq(n: usize, a: &[SparseVec], b: &[SparseVec]) -> bool {
    let mut e = Echelon::new(n);
    for v in a {
        e.insert(v);
    }
    a.len() == b.len() && b.iter().all(|v| e.contains(v))
}

/// Subalgebra, commutation and idempotence checks on the counital data.
pub fn verify_counital(h: &WeakBialgebra, cd: &CounitalData) -> Report {
    let mut rep = Report::new("counital subalgebras");
    let a = &h.algebra;
    for (name, basis) in [("H_t", &cd.target_basis), ("H_s", &cd.source_basis)] {
        let ok = a.subalgebra(basis.clone(), (0..basis.len()).map(|k| format!("b{k}")).collect()).is_ok();
        rep.check(format!("{name} is a unital subalgebra"), ok, || format!("{name} not closed or misses 1"));
    }
    let mut commute = Tally::new("H_t and H_s commute");
    for x in &cd.target_basis {
        for y in &cd.source_basis {
            commute.expect(a.mul(x, y) == a.mul(y, x), || format!("{} vs {}", a.render(x), a.render(y)));
        }
    }
    rep.record(commute);
    let et = &cd.target_projection;
    let es = &cd.source_projection;
    rep.check("ε_t is idempotent", et.compose(et).ok().as_ref() == Some(et), || "ε_t∘ε_t ≠ ε_t".into());
    rep.check("ε_s is idempotent", es.compose(es).ok().as_ref() == Some(es), || "ε_s∘ε_s ≠ ε_s".into());
    rep.check("dim H_t = dim H_s", cd.target_basis.len() == cd.source_basis.len(), || {
        format!("{} vs {}", cd.target_basis.len(), cd.source_basis.len())
    });
    // r ↦ ε_s(r) on H_t: bijective onto H_s and anti-multiplicative
    let images: Vec<SparseVec> = cd.target_basis.iter().map(|x| es.apply(x)).collect();
    rep.check("ε_s maps H_t onto H_s", span_eq(h.dim(), &images, &cd.source_basis) && linalg::rank(h.dim(), &images) == images.len(), || {
        "ε_s|H_t is not a bijection onto H_s".into()
    });
    let mut anti = Tally::new("ε_s on H_t is anti-multiplicative");
    for x in &cd.target_basis {
        for y in &cd.target_basis {
            let lhs = es.apply(&a.mul(x, y));
            let rhs = a.mul(&es.apply(y), &es.apply(x));
            anti.expect(lhs == rhs, || format!("{} and {}", a.render(x), a.render(y)));
        }
    }
    rep.record(anti);
    rep
}

/// Whether `H_t` is commutative.
pub fn is_face_algebra(h: &WeakBialgebra) -> bool {
    let cd = counital_subalgebras(h);
    let a = &h.algebra;
    cd.target_basis.iter().all(|x| cd.target_basis.iter().all(|y| a.mul(x, y) == a.mul(y, x)))
}

/// A weak bialgebra with an explicit algebra isomorphism from a base algebra
/// `R` onto `H_t`.
#[derive(Clone, Debug)]
pub struct Based {
    pub h: WeakBialgebra,
    pub base: FiniteAlgebra,
    /// The inclusion `s: R → H`.
    pub source: LinearMap,
    image: Subspace,
}

impl Based {
    pub fn new(h: WeakBialgebra, base: FiniteAlgebra, source: LinearMap) -> Result<Based> {
        if source.dom != base.dim() || source.cod != h.dim() {
            return Err(Error::BaseMismatch(format!("source map {}->{} for base dim {} and H dim {}", source.dom, source.cod, base.dim(), h.dim())));
        }
        if !algebra::check_algebra_map(&source, &base, &h.algebra) {
            return Err(Error::BaseMismatch("identification is not an algebra map".into()));
        }
        let image = Subspace::new(h.dim(), source.cols.clone()).map_err(|_| Error::BaseMismatch("identification is not injective".into()))?;
        let cd = counital_subalgebras(&h);
        if !span_eq(h.dim(), &cd.target_basis, &source.cols) {
            return Err(Error::BaseMismatch(format!("image has dim {} but H_t has dim {}", source.dom, cd.target_basis.len())));
        }
        Ok(Based { h, base, source, image })
    }

    /// `R := H_t` with the basis extracted from the image of `ε_t`.
    pub fn canonical(h: WeakBialgebra) -> Result<Based> {
        let cd = counital_subalgebras(&h);
        let labels = (0..cd.target_basis.len()).map(|k| format!("t{k}")).collect();
        let (base, inc) = h.algebra.subalgebra(cd.target_basis, labels)?;
        Based::new(h, base, inc)
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// `t = ε_s ∘ s`.
    pub fn target(&self) -> LinearMap {
        LinearMap { dom: self.base.dim(), cod: self.h.dim(), cols: self.source.cols.iter().map(|x| self.h.eps_s(x)).collect() }
    }

    pub fn env_ring(&self) -> EnvRing {
        EnvRing { algebra: self.h.algebra.clone(), base: self.base.clone(), source: self.source.clone(), target: self.target() }
    }

    /// Coordinates in `R` of an element of `H_t`.
    pub fn to_base(&self, v: &[(usize, Scalar)]) -> Result<SparseVec> {
        self.image.coords(v).ok_or_else(|| Error::BaseMismatch("element outside H_t".into()))
    }

    /// `ε̂(h)(1) = s⁻¹(ε_t(h))`.
    pub fn counit_base(&self, h: &[(usize, Scalar)]) -> SparseVec {
        self.to_base(&self.h.eps_t(h)).expect("ε_t lands in H_t")
    }

    /// `ψ = ε ∘ s` with its separability element.
    pub fn frobenius(&self) -> Result<Frobenius> {
        let psi = self.source.cols.iter().map(|x| self.h.eps(x)).collect();
        Frobenius::from_functional(&self.base, psi)
    }

    /// `ε̂(h) ∈ End(R)`, `r ↦ s⁻¹(ε_t(h s(r)))`, in the matrix basis.
    pub fn counit_end(&self, h: &[(usize, Scalar)]) -> SparseVec {
        let n = self.base.dim();
        let mut acc = Accum::new();
        for b in 0..n {
            let hr = self.h.mul(h, &self.source.cols[b]);
            for (a, c) in self.counit_base(&hr) {
                acc.add(a * n + b, &c);
            }
        }
        acc.finish()
    }
}

/// ×_R-bialgebra checks over `R = H_t`. Errors only when a map fails to be
/// well defined; axiom failures are report content.
pub fn takeuchi_report(b: &Based) -> Result<Report> {
    let h = &b.h;
    let a = &h.algebra;
    let n = h.dim();
    let mut rep = Report::new("×_R-bialgebra");
    let ring = b.env_ring();
    rep.absorb("R^e-ring", ring.verify());
    let env = ring.env();
    let tp = takeuchi::takeuchi_product(&env, &env)?;
    let q = &tp.space.quotient;

    let mut lands = Tally::new("Δ lands in H ×_R H");
    for i in 0..n {
        lands.expect(tp.in_product(h.delta_basis(i)), || format!("Δ({})", a.labels()[i]));
    }
    rep.record(lands);

    let reps: Vec<SparseVec> = (0..n).map(|i| q.lift_vec(&q.project(h.delta_basis(i)))).collect();
    let mut mult = Tally::new("Δ is multiplicative into H ×_R H");
    for i in 0..n {
        for j in 0..n {
            let lhs = q.project(&h.mul2(&reps[i], &reps[j]));
            let rhs = q.project(&h.delta(a.basis_product(i, j)));
            mult.expect(lhs == rhs, || format!("({}, {})", a.labels()[i], a.labels()[j]));
        }
    }
    rep.record(mult);
    let t = b.target();
    let mut unit = Tally::new("Δ respects the R^e-ring maps");
    unit.expect(q.project(&h.delta(h.one())) == q.project(&tensor_vec(h.one(), h.one(), n)), || "Δ(1) ≠ 1⊗1".into());
    for r in 0..b.base.dim() {
        let s_r = &b.source.cols[r];
        let t_r = &t.cols[r];
        unit.expect(q.project(&h.delta(s_r)) == q.project(&tensor_vec(s_r, h.one(), n)), || format!("Δ(s(r{r}))"));
        unit.expect(q.project(&h.delta(t_r)) == q.project(&tensor_vec(h.one(), t_r, n)), || format!("Δ(t(r{r}))"));
    }
    rep.record(unit);

    let frob = b.frobenius();
    rep.check("ψ = ε∘s is Frobenius with normalized separability element", frob.is_ok(), || "ψ degenerate or not normalized".into());
    if let Ok(f) = &frob {
        let mut acc = Accum::new();
        for (x, y, c) in &f.element {
            acc.add_scaled(c, &tensor_vec(&t.cols[*x], &b.source.cols[*y], n));
        }
        let ok = acc.finish() == h.delta(h.one());
        rep.check("Δ(1) = t(e¹) ⊗ s(e²)", ok, || "mismatch with the separability element".into());
    }

    // coassociativity through the threefold ∫ quotient
    let triple = takeuchi::triple_quotient(&env, &env, &env);
    let delta_left = |v: &[(usize, Scalar)]| -> SparseVec {
        let mut acc = Accum::new();
        for (jk, c) in v {
            acc.add_scaled(c, &tensor_vec(h.delta_basis(jk / n), &linalg::unit(jk % n), n));
        }
        acc.finish()
    };
    let delta_right = |v: &[(usize, Scalar)]| -> SparseVec {
        let mut acc = Accum::new();
        for (jk, c) in v {
            acc.add_scaled(c, &tensor_vec(&linalg::unit(jk / n), h.delta_basis(jk % n), n * n));
        }
        acc.finish()
    };
    for row in q.relations().rows() {
        if !triple.is_zero(&delta_left(row)) || !triple.is_zero(&delta_right(row)) {
            return Err(Error::IllDefined("Δ×id or id×Δ on the ∫_r relations".into()));
        }
    }
    let mut coass = Tally::new("coassociativity in H ×_R H ×_R H");
    for i in 0..n {
        coass.expect(triple.project(&delta_left(&reps[i])) == triple.project(&delta_right(&reps[i])), || a.labels()[i].clone());
    }
    rep.record(coass);

    // counit through θ and θ′
    let th = takeuchi::theta_maps(&env)?;
    let ne = th.end.algebra.dim();
    let ends: Vec<SparseVec> = (0..n).map(|i| b.counit_end(&linalg::unit(i))).collect();
    let id_end: SparseVec = {
        let nr = b.base.dim();
        (0..nr).map(|r| (r * nr + r, Scalar::one())).collect()
    };
    rep.check("ε̂(1) = id", b.counit_end(h.one()) == id_end, || "counit of 1 is not the identity of R".into());
    let mut cu = Tally::new("counit law through θ and θ′");
    for i in 0..n {
        let mut right = Accum::new();
        let mut left = Accum::new();
        for (jk, c) in &reps[i] {
            let (j, k) = (jk / n, jk % n);
            for (f, x) in &ends[k] {
                right.add(j * ne + f, &(c * x));
            }
            for (f, x) in &ends[j] {
                left.add(f * n + k, &(c * x));
            }
        }
        let e = linalg::unit(i);
        match th.right_product.space.coords(&right.finish()) {
            Some(c) => cu.expect(th.theta.apply(&c) == e, || format!("θ(id×ε̂)Δ({}) ≠ {}", a.labels()[i], a.labels()[i])),
            None => cu.fail(|| format!("(id×ε̂)Δ({}) leaves H ×_R End(R)", a.labels()[i])),
        }
        match th.left_product.space.coords(&left.finish()) {
            Some(c) => cu.expect(th.theta_prime.apply(&c) == e, || format!("θ′(ε̂×id)Δ({}) ≠ {}", a.labels()[i], a.labels()[i])),
            None => cu.fail(|| format!("(ε̂×id)Δ({}) leaves End(R) ×_R H", a.labels()[i])),
        }
    }
    rep.record(cu);
    Ok(rep)
}

/// Runs [`takeuchi_report`] and turns any failed check into an error.
pub fn embed_as_takeuchi_bialgebra(b: &Based) -> Result<Report> {
    let rep = takeuchi_report(b)?;
    if let Some(c) = rep.failures().first() {
        return Err(Error::EmbeddingFailure(c.name.clone()));
    }
    Ok(rep)
}

/// Bijectivity and rank of `β: L ⊗_{R̄} L → L ∇ L`, `ℓ⊗m ↦ ℓ₁ ⊗ ℓ₂m`.
pub fn hopf_beta_check(b: &Based) -> Result<(bool, usize)> {
    let h = &b.h;
    let n = h.dim();
    let env = b.env_ring().env();
    let nr = b.base.dim();
    let mut dom_rel = Echelon::new(n * n);
    let mut cod_rel = Echelon::new(n * n);
    for r in 0..nr {
        for x in 0..n {
            for y in 0..n {
                let d = linalg::sub(
                    &tensor_vec(env.act_basis(Side::RightBar, r, x), &linalg::unit(y), n),
                    &tensor_vec(&linalg::unit(x), env.act_basis(Side::LeftBar, r, y), n),
                );
                dom_rel.insert(&d);
                let c = linalg::sub(
                    &tensor_vec(env.act_basis(Side::LeftBar, r, x), &linalg::unit(y), n),
                    &tensor_vec(&linalg::unit(x), env.act_basis(Side::Left, r, y), n),
                );
                cod_rel.insert(&c);
            }
        }
    }
    let dom = Quotient::new(dom_rel);
    let cod = Quotient::new(cod_rel);
    let beta = |v: &[(usize, Scalar)]| -> SparseVec {
        let mut acc = Accum::new();
        for (xy, c) in v {
            let (x, y) = (xy / n, xy % n);
            for (jk, d) in h.delta_basis(x) {
                let m = h.algebra.basis_product(jk % n, y);
                acc.add_scaled(&(c * d), &tensor_vec(&linalg::unit(jk / n), m, n));
            }
        }
        acc.finish()
    };
    for row in dom.relations().rows() {
        if !cod.is_zero(&beta(row)) {
            return Err(Error::IllDefined("β on the L ⊗_R̄ L relations".into()));
        }
    }
    let cols: Vec<SparseVec> = (0..dom.dim()).map(|k| cod.project(&beta(&linalg::unit(dom.lift(k))))).collect();
    let map = LinearMap { dom: dom.dim(), cod: cod.dim(), cols };
    let rank = map.rank();
    Ok((rank == dom.dim() && rank == cod.dim(), rank))
}

#[derive(Clone, Debug)]
pub struct Antipode {
    pub map: LinearMap,
}

pub fn verify_antipode(h: &WeakBialgebra, s: &Antipode) -> Report {
    let mut rep = Report::new("antipode");
    let a = &h.algebra;
    let n = h.dim();
    let sm = &s.map;
    let mut left = Tally::new("S(h₁)h₂ = ε_s(h)");
    let mut right = Tally::new("h₁S(h₂) = ε_t(h)");
    let mut three = Tally::new("S(h₁)h₂S(h₃) = S(h)");
    for i in 0..n {
        let d = h.delta_basis(i);
        let mut l = Accum::new();
        let mut r = Accum::new();
        let mut t = Accum::new();
        for (jk, c) in d {
            let (j, k) = (jk / n, jk % n);
            l.add_scaled(c, &a.mul(&sm.cols[j], &linalg::unit(k)));
            r.add_scaled(c, &a.mul(&linalg::unit(j), &sm.cols[k]));
            for (lm, e) in h.delta_basis(k) {
                let (p, q) = (lm / n, lm % n);
                let x = a.mul(&a.mul(&sm.cols[j], &linalg::unit(p)), &sm.cols[q]);
                t.add_scaled(&(c * e), &x);
            }
        }
        let ei = linalg::unit(i);
        left.expect(l.finish() == h.eps_s(&ei), || a.labels()[i].clone());
        right.expect(r.finish() == h.eps_t(&ei), || a.labels()[i].clone());
        three.expect(t.finish() == sm.cols[i], || a.labels()[i].clone());
    }
    rep.record(left);
    rep.record(right);
    rep.record(three);
    rep.record(algebra::algebra_map_violations(sm, a, a, true).named("S is an anti-homomorphism"));
    let cd = counital_subalgebras(h);
    let st: Vec<SparseVec> = cd.target_basis.iter().map(|x| sm.apply(x)).collect();
    let ss: Vec<SparseVec> = cd.source_basis.iter().map(|x| sm.apply(x)).collect();
    rep.check("S(H_t) = H_s", span_eq(n, &cd.source_basis, &st), || "image differs".into());
    rep.check("S(H_s) = H_t", span_eq(n, &cd.target_basis, &ss), || "image differs".into());
    rep
}

/// A finite groupoid. Composition `g·h` is defined when `src(g) = tgt(h)`.
#[derive(Clone, Debug)]
pub struct Groupoid {
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// `(g, h, gh)` for every composable pair.
    pub compose: Vec<(usize, usize, usize)>,
    pub inverses: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct Arrow {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

impl Groupoid {
    /// Every ordered pair of objects is joined by exactly one arrow.
    pub fn pair(n: usize) -> Groupoid {
        let objects = (1..=n).map(|i| i.to_string()).collect();
        let idx = |i: usize, j: usize| i * n + j;
        let mut arrows = Vec::new();
        let mut compose = Vec::new();
        let mut inverses = Vec::new();
        for i in 0..n {
            for j in 0..n {
                arrows.push(Arrow { name: format!("g{}{}", i + 1, j + 1), src: j, tgt: i });
                inverses.push((idx(i, j), idx(j, i)));
                for k in 0..n {
                    compose.push((idx(i, j), idx(j, k), idx(i, k)));
                }
            }
        }
        Groupoid { objects, arrows, compose, inverses }
    }

    /// The cyclic group of order `n` as a one-object groupoid.
    pub fn cyclic(n: usize) -> Groupoid {
        let arrows = (0..n).map(|k| Arrow { name: if k == 0 { "1".into() } else { format!("c{k}") }, src: 0, tgt: 0 }).collect();
        let mut compose = Vec::new();
        for a in 0..n {
            for b in 0..n {
                compose.push((a, b, (a + b) % n));
            }
        }
        let inverses = (0..n).map(|a| (a, (n - a) % n)).collect();
        Groupoid { objects: vec!["*".into()], arrows, compose, inverses }
    }

    pub fn disjoint_union(&self, other: &Groupoid) -> Groupoid {
        let (no, na) = (self.objects.len(), self.arrows.len());
        let mut g = self.clone();
        g.objects.extend(other.objects.iter().map(|o| format!("{o}'")));
        g.arrows.extend(other.arrows.iter().map(|a| Arrow { name: format!("{}'", a.name), src: a.src + no, tgt: a.tgt + no }));
        g.compose.extend(other.compose.iter().map(|&(a, b, c)| (a + na, b + na, c + na)));
        g.inverses.extend(other.inverses.iter().map(|&(a, b)| (a + na, b + na)));
        g
    }

    fn table(&self) -> Result<Vec<Vec<Option<usize>>>> {
        let n = self.arrows.len();
        let bad = |m: String| Error::InvalidGroupoid(m);
        let mut t = vec![vec![None; n]; n];
        for &(g, h, gh) in &self.compose {
            if g >= n || h >= n || gh >= n {
                return Err(bad(format!("composition ({g},{h},{gh}) out of range")));
            }
            if t[g][h].replace(gh).is_some() {
                return Err(bad(format!("composition of {} and {} given twice", self.arrows[g].name, self.arrows[h].name)));
            }
        }
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.arrows.len();
        let bad = |m: String| Error::InvalidGroupoid(m);
        let no = self.objects.len();
        if self.arrows.iter().any(|a| a.src >= no || a.tgt >= no) {
            return Err(bad("arrow endpoint outside the object set".into()));
        }
        let t = self.table()?;
        let name = |g: usize| self.arrows[g].name.clone();
        for g in 0..n {
            for h in 0..n {
                let composable = self.arrows[g].src == self.arrows[h].tgt;
                match (composable, t[g][h]) {
                    (true, None) => return Err(bad(format!("{}·{} missing", name(g), name(h)))),
                    (false, Some(_)) => return Err(bad(format!("{}·{} given but not composable", name(g), name(h)))),
                    (true, Some(gh)) => {
                        if self.arrows[gh].src != self.arrows[h].src || self.arrows[gh].tgt != self.arrows[g].tgt {
                            return Err(bad(format!("{}·{} has wrong endpoints", name(g), name(h))));
                        }
                    }
                    _ => {}
                }
            }
        }
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    if let (Some(gh), Some(hk)) = (t[g][h], t[h][k]) {
                        if t[gh][k] != t[g][hk] {
                            return Err(bad(format!("associativity fails on ({}, {}, {})", name(g), name(h), name(k))));
                        }
                    }
                }
            }
        }
        let ids = self.identities()?;
        for &(g, gi) in &self.inverses {
            if g >= n || gi >= n || t[g][gi] != Some(ids[self.arrows[g].tgt]) || t[gi][g] != Some(ids[self.arrows[g].src]) {
                return Err(bad(format!("inverse of {} is wrong", self.arrows.get(g).map_or("?".into(), |a| a.name.clone()))));
            }
        }
        if (0..n).any(|g| !self.inverses.iter().any(|&(x, _)| x == g)) {
            return Err(bad("some arrow has no inverse listed".into()));
        }
        Ok(())
    }

    /// Identity arrow of each object.
    pub fn identities(&self) -> Result<Vec<usize>> {
        let t = self.table()?;
        let n = self.arrows.len();
        (0..self.objects.len())
            .map(|o| {
                (0..n)
                    .find(|&e| {
                        self.arrows[e].src == o
                            && self.arrows[e].tgt == o
                            && (0..n).all(|h| (self.arrows[h].tgt != o || t[e][h] == Some(h)) && (self.arrows[h].src != o || t[h][e] == Some(h)))
                    })
                    .ok_or_else(|| Error::InvalidGroupoid(format!("object {} has no identity", self.objects[o])))
            })
            .collect()
    }
}

/// Groupoid algebra with `Δ(g) = g⊗g`, `ε(g) = 1`, `S(g) = g⁻¹`.
pub fn groupoid_weak_hopf(g: &Groupoid) -> Result<(WeakBialgebra, Antipode)> {
    g.validate()?;
    let n = g.arrows.len();
    let labels = g.arrows.iter().map(|a| a.name.clone()).collect();
    let entries: Vec<_> = g.compose.iter().map(|&(a, b, c)| (a, b, c, Scalar::one())).collect();
    let unit = g.identities()?.into_iter().map(|e| (e, Scalar::one())).collect::<Vec<_>>();
    let mut unit = unit;
    unit.sort_by_key(|e| e.0);
    let algebra = FiniteAlgebra::from_entries(labels, &entries, unit)?;
    let comult = (0..n).map(|a| vec![(a * n + a, Scalar::one())]).collect();
    let h = WeakBialgebra::new(algebra, comult, vec![Scalar::one(); n])?;
    let mut cols = vec![Vec::new(); n];
    for &(a, b) in &g.inverses {
        cols[a] = linalg::unit(b);
    }
    Ok((h, Antipode { map: LinearMap { dom: n, cod: n, cols } }))
}

/// The groupoid algebra over `k^n`, object `i` sent to its identity arrow.
pub fn groupoid_based(g: &Groupoid) -> Result<Based> {
    let (h, _) = groupoid_weak_hopf(g)?;
    let kn = algebra::make_multimatrix(&vec![1; g.objects.len()])?;
    let ids = g.identities()?;
    let src = LinearMap { dom: ids.len(), cod: h.dim(), cols: ids.iter().map(|&e| linalg::unit(e)).collect() };
    Based::new(h, kn.algebra().clone(), src)
}

/// Monoid algebra with grouplike basis, from a full multiplication table and
/// the index of the identity element.
pub fn monoid_bialgebra(labels: Vec<String>, table: &[Vec<usize>], identity: usize) -> Result<WeakBialgebra> {
    let n = labels.len();
    let mut entries = Vec::new();
    for (a, row) in table.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            entries.push((a, b, c, Scalar::one()));
        }
    }
    let algebra = FiniteAlgebra::from_entries(labels, &entries, linalg::unit(identity))?;
    let comult = (0..n).map(|a| vec![(a * n + a, Scalar::one())]).collect();
    WeakBialgebra::new(algebra, comult, vec![Scalar::one(); n])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_groupoid_axioms() {
        let (h, s) = groupoid_weak_hopf(&Groupoid::pair(2)).unwrap();
        assert_eq!(h.dim(), 4);
        assert!(verify_weak_bialgebra(&h).passed());
        assert!(verify_antipode(&h, &s).passed());
        let cd = counital_subalgebras(&h);
        // oracle: ε(1₁ g) 1₂ = identity at the target of g
        assert_eq!(cd.target_basis.len(), 2);
        for (idx, arrow) in Groupoid::pair(2).arrows.iter().enumerate() {
            let id = arrow.tgt * 2 + arrow.tgt;
            assert_eq!(h.eps_t(&linalg::unit(idx)), linalg::unit(id));
        }
        assert!(verify_counital(&h, &cd).passed());
        assert!(is_face_algebra(&h));
    }

    #[test]
    fn cyclic_group_is_ordinary() {
        let (h, s) = groupoid_weak_hopf(&Groupoid::cyclic(2)).unwrap();
        assert!(verify_weak_bialgebra(&h).passed());
        assert!(verify_antipode(&h, &s).passed());
        assert!(verify_antipode(&h, &Antipode { map: LinearMap::identity(2) }).passed());
        assert_eq!(counital_subalgebras(&h).target_basis.len(), 1);
    }

    #[test]
    fn disjoint_trivial_groups() {
        let g = Groupoid::cyclic(1).disjoint_union(&Groupoid::cyclic(1));
        let (h, _) = groupoid_weak_hopf(&g).unwrap();
        assert_eq!(h.dim(), 2);
        assert!(h.algebra.is_commutative());
        assert!(verify_weak_bialgebra(&h).passed());
    }

    #[test]
    fn broken_counit_is_reported() {
        let (h, _) = groupoid_weak_hopf(&Groupoid::pair(2)).unwrap();
        let bad = WeakBialgebra::new(h.algebra.clone(), h.comult.clone(), vec![Scalar::zero(); 4]).unwrap();
        let rep = verify_weak_bialgebra(&bad);
        assert!(rep.failed("counit"));
    }

    #[test]
    fn identity_is_not_an_antipode_for_pairs() {
        let (h, _) = groupoid_weak_hopf(&Groupoid::pair(2)).unwrap();
        let rep = verify_antipode(&h, &Antipode { map: LinearMap::identity(4) });
        assert!(rep.failed("S(h₁)h₂ = ε_s(h)"));
    }

    #[test]
    fn takeuchi_embedding_and_beta() {
        for g in [Groupoid::pair(2), Groupoid::cyclic(2), Groupoid::pair(3)] {
            let (h, _) = groupoid_weak_hopf(&g).unwrap();
            let b = Based::canonical(h).unwrap();
            let rep = takeuchi_report(&b).unwrap();
            assert!(rep.passed(), "{rep}");
            assert!(hopf_beta_check(&b).unwrap().0);
        }
    }

    #[test]
    fn null_monoid_is_not_hopf() {
        let h = monoid_bialgebra(vec!["1".into(), "z".into()], &[vec![0, 1], vec![1, 1]], 0).unwrap();
        assert!(verify_weak_bialgebra(&h).passed());
        let b = Based::canonical(h).unwrap();
        let (bij, rank) = hopf_beta_check(&b).unwrap();
        assert!(!bij);
        // oracle: β(x⊗y) = x⊗xy; β(z⊗1) = z⊗z = β(z⊗z)
        assert_eq!(rank, 3);
    }

    #[test]
    fn invalid_groupoid() {
        let mut g = Groupoid::pair(2);
        g.compose.pop();
        assert!(matches!(groupoid_weak_hopf(&g), Err(Error::InvalidGroupoid(_))));
    }
}
