//! Dual weak bialgebras, base-valued skew pairings and their transport along
//! Morita contexts.

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{self, Accum, LinearMap, SparseVec};
use crate::morita::{base_change, weak_iso_report, BaseChange, MoritaContext};
use crate::report::{Report, Tally};
use crate::scalar::Scalar;
use crate::weak::{Based, WeakBialgebra};

/// Linear dual: product from `Δ`, coproduct from the product, unit `ε`,
/// counit evaluation at `1`. Basis vector `i` is the dual functional `e_i*`.
pub fn dual_weak_bialgebra(h: &WeakBialgebra) -> Result<WeakBialgebra> {
    dual_with(h, false)
}

/// `(H*)^op`: the dual with the product reversed.
pub fn dual_opposite(h: &WeakBialgebra) -> Result<WeakBialgebra> {
    dual_with(h, true)
}

fn dual_with(h: &WeakBialgebra, op: bool) -> Result<WeakBialgebra> {
    let n = h.dim();
    let mut entries = Vec::new();
    for (k, i, j, c) in h.comult_entries() {
        let (a, b) = if op { (j, i) } else { (i, j) };
        entries.push((a, b, k, c));
    }
    let labels = h.algebra.labels().iter().map(|l| format!("{l}*")).collect();
    let unit = linalg::from_dense(h.counit());
    let algebra = FiniteAlgebra::from_entries(labels, &entries, unit)?;
    let comult_entries: Vec<_> = h.algebra.entries().into_iter().map(|(i, j, k, c)| (k, i, j, c)).collect();
    let counit = linalg::to_dense(h.one(), n);
    WeakBialgebra::from_entries(algebra, &comult_entries, counit)
}

/// `Λ = (H*)^op` over the base of `H`, with `s_Λ(r) = ε(s(r) ε_t(−))`.
pub fn dual_based(b: &Based) -> Result<Based> {
    let h = &b.h;
    let lambda = dual_opposite(h)?;
    let n = h.dim();
    let et: Vec<SparseVec> = (0..n).map(|l| h.eps_t(&linalg::unit(l))).collect();
    let cols = b
        .source
        .cols
        .iter()
        .map(|sr| linalg::from_dense(&et.iter().map(|e| h.eps(&h.mul(sr, e))).collect::<Vec<_>>()))
        .collect();
    Based::new(lambda, b.base.clone(), LinearMap { dom: b.base.dim(), cod: n, cols })
}

/// A bilinear `R`-valued form `τ: Λ ⊗ L → R`.
#[derive(Clone, Debug)]
pub struct SkewPairing {
    pub lambda: Based,
    pub l: Based,
    /// `tau[x * dim L + ℓ] = τ(x|ℓ)` as a vector in `R`.
    pub tau: Vec<SparseVec>,
}

impl SkewPairing {
    pub fn new(lambda: Based, l: Based, tau: Vec<SparseVec>) -> Result<SkewPairing> {
        if lambda.base.entries() != l.base.entries() {
            return Err(Error::BaseMismatch("the two sides have different bases".into()));
        }
        if tau.len() != lambda.dim() * l.dim() {
            return Err(Error::Shape("pairing tensor".into()));
        }
        Ok(SkewPairing { lambda, l, tau })
    }

    pub fn eval(&self, x: &[(usize, Scalar)], y: &[(usize, Scalar)]) -> SparseVec {
        let dl = self.l.dim();
        let mut acc = Accum::new();
        for (i, c) in x {
            for (j, d) in y {
                acc.add_scaled(&(c * d), &self.tau[i * dl + j]);
            }
        }
        acc.finish()
    }
}

/// `τ(φ|ℓ) = Σ φ(t(e¹)ℓ) e²` between `(H*)^op` and `H`.
pub fn evaluation_pairing(b: &Based) -> Result<SkewPairing> {
    let lambda = dual_based(b)?;
    let frob = b.frobenius()?;
    let h = &b.h;
    let n = h.dim();
    let t = b.target();
    let mut tau = vec![Accum::new(); n * n];
    for (a, c, k) in &frob.element {
        for l in 0..n {
            for (x, v) in h.mul(&t.cols[*a], &linalg::unit(l)) {
                tau[x * n + l].add(*c, &(k * &v));
            }
        }
    }
    SkewPairing::new(lambda, b.clone(), tau.into_iter().map(Accum::finish).collect())
}

/// The pairing axioms on every basis instance. The two-sided module
/// identity is checked through its five one-sided specialisations, which
/// generate it.
pub fn verify_skew_pairing(p: &SkewPairing) -> Report {
    let mut rep = Report::new("skew pairing");
    let (lam, l) = (&p.lambda, &p.l);
    let (la, ll) = (&lam.h.algebra, &l.h.algebra);
    let r = &l.base;
    let (nx, nl, nr) = (lam.dim(), l.dim(), r.dim());
    let (tl, tlam) = (l.target(), lam.target());
    let u = linalg::unit;
    let mut module = Tally::new("R^e-balancing of τ");
    for x in 0..nx {
        for y in 0..nl {
            let tau = &p.tau[x * nl + y];
            for k in 0..nr {
                let checks: [(&str, SparseVec, SparseVec); 5] = [
                    ("r", p.eval(&la.mul(&lam.source.cols[k], &u(x)), &u(y)), r.lmul_basis(k, tau)),
                    ("s̄", p.eval(&la.mul(&tlam.cols[k], &u(x)), &u(y)), p.eval(&u(x), &ll.mul(&u(y), &tl.cols[k]))),
                    ("t", p.eval(&la.mul(&u(x), &lam.source.cols[k]), &u(y)), p.eval(&u(x), &ll.mul(&l.source.cols[k], &u(y)))),
                    ("ū", p.eval(&la.mul(&u(x), &tlam.cols[k]), &u(y)), p.eval(&u(x), &ll.mul(&u(y), &l.source.cols[k]))),
                    ("v̄", r.rmul_basis(tau, k), p.eval(&u(x), &ll.mul(&tl.cols[k], &u(y)))),
                ];
                for (name, lhs, rhs) in checks {
                    module.expect(lhs == rhs, || format!("{name} = r{k} on ({}, {})", la.labels()[x], ll.labels()[y]));
                }
            }
        }
    }
    rep.record(module);
    let mut skp2 = Tally::new("τ(ξ|ℓm) = τ(τ(ξ₂|m)‾ξ₁|ℓ)");
    for x in 0..nx {
        let d = lam.h.delta_basis(x);
        for m in 0..nl {
            // Σ t_Λ(τ(ξ₂|m)) ξ₁
            let mut acc = Accum::new();
            for (ab, c) in d {
                let z = tlam.apply(&p.tau[(ab % nx) * nl + m]);
                acc.add_scaled(c, &la.mul(&z, &u(ab / nx)));
            }
            let xi = acc.finish();
            for y in 0..nl {
                let lhs = p.eval(&u(x), ll.basis_product(y, m));
                let rhs = p.eval(&xi, &u(y));
                skp2.expect(lhs == rhs, || format!("ξ={}, ℓ={}, m={}", la.labels()[x], ll.labels()[y], ll.labels()[m]));
            }
        }
    }
    rep.record(skp2);
    let mut unit2 = Tally::new("τ(ξ|1) = ε(ξ)(1)");
    for x in 0..nx {
        let lhs = p.eval(&u(x), l.h.one());
        unit2.expect(lhs == lam.counit_base(&u(x)), || la.labels()[x].clone());
    }
    rep.record(unit2);
    let mut skp3 = Tally::new("τ(ξζ|ℓ) = τ(ξ|τ(ζ|ℓ₁)ℓ₂)");
    for y in 0..nl {
        let d = l.h.delta_basis(y);
        for z in 0..nx {
            let mut acc = Accum::new();
            for (ab, c) in d {
                let s = l.source.apply(&p.tau[z * nl + ab / nl]);
                acc.add_scaled(c, &ll.mul(&s, &u(ab % nl)));
            }
            let ell = acc.finish();
            for x in 0..nx {
                let lhs = p.eval(la.basis_product(x, z), &u(y));
                let rhs = p.eval(&u(x), &ell);
                skp3.expect(lhs == rhs, || format!("ξ={}, ζ={}, ℓ={}", la.labels()[x], la.labels()[z], ll.labels()[y]));
            }
        }
    }
    rep.record(skp3);
    let mut unit3 = Tally::new("τ(1|ℓ) = ε(ℓ)(1)");
    for y in 0..nl {
        unit3.expect(p.eval(lam.h.one(), &u(y)) == l.counit_base(&u(y)), || ll.labels()[y].clone());
    }
    rep.record(unit3);
    rep
}

/// `τ̃(p₁q̄₁⊗ξ⊗q₂p̄₂ | p₃q̄₃⊗ℓ⊗q₄p̄₄) = f(p₁ · τ(ξ | s(q₂p₃) ℓ s(q₄p₂) t(q₁p₄)) ⊗ q₃)`.
pub fn induce_pairing(p: &SkewPairing, lt: &BaseChange, ll: &BaseChange, ctx: &MoritaContext) -> Result<SkewPairing> {
    if lt.input.h.algebra.entries() != p.lambda.h.algebra.entries() || ll.input.h.algebra.entries() != p.l.h.algebra.entries() {
        return Err(Error::BaseMismatch("base changes are not of the paired algebras".into()));
    }
    let l = &p.l;
    let t = l.target();
    let u = linalg::unit;
    let la = &l.h.algebra;
    let pair = |x: [usize; 5], y: [usize; 5]| -> SparseVec {
        let g1 = l.source.apply(&ctx.g_of(&u(x[3]), &u(y[0])));
        let g2 = l.source.apply(&ctx.g_of(&u(y[3]), &u(x[4])));
        let g3 = t.apply(&ctx.g_of(&u(x[1]), &u(y[4])));
        let ell = la.mul_all(&[&g1, &u(y[2]), &g2, &g3]);
        let r = p.eval(&u(x[2]), &ell);
        ctx.f_of(&ctx.p.act_right_vec(&u(x[0]), &r), &u(y[1]))
    };
    let dl = ll.dim();
    for g in lt.relation_generators() {
        for &y in &ll.reps {
            let mut acc = Accum::new();
            for (i, c) in &g {
                acc.add_scaled(c, &pair(lt.tuple(*i), y));
            }
            if !acc.is_empty() {
                return Err(Error::IllDefined("τ̃ in its first argument".into()));
            }
        }
    }
    for g in ll.relation_generators() {
        for &x in &lt.reps {
            let mut acc = Accum::new();
            for (i, c) in &g {
                acc.add_scaled(c, &pair(x, ll.tuple(*i)));
            }
            if !acc.is_empty() {
                return Err(Error::IllDefined("τ̃ in its second argument".into()));
            }
        }
    }
    let mut tau = Vec::with_capacity(lt.dim() * dl);
    for &x in &lt.reps {
        for &y in &ll.reps {
            tau.push(pair(x, y));
        }
    }
    SkewPairing::new(lt.based.clone(), ll.based.clone(), tau)
}

/// `F: Λ̃ → (L̃*)^op`, `F(x)(y) = ψ_S(τ̃(x|y))`, with the checks that it is an
/// isomorphism and that evaluation after `F` reproduces `τ̃`.
#[derive(Clone, Debug)]
pub struct DualIso {
    pub map: LinearMap,
    pub induced: SkewPairing,
    pub report: Report,
}

pub fn dual_base_change_iso(l: &Based, ctx: &MoritaContext) -> Result<DualIso> {
    let p = evaluation_pairing(l)?;
    let lt = base_change(&p.lambda, ctx)?;
    let ll = base_change(l, ctx)?;
    let induced = induce_pairing(&p, &lt, &ll, ctx)?;
    let target = evaluation_pairing(&ll.based)?;
    let (nx, ny) = (lt.dim(), ll.dim());
    let psi = &ctx.frob_s;
    let cols = (0..nx)
        .map(|x| linalg::from_dense(&(0..ny).map(|y| psi.eval(&induced.tau[x * ny + y])).collect::<Vec<_>>()))
        .collect();
    let map = LinearMap { dom: nx, cod: ny, cols };
    let mut report = Report::new("duality after base change");
    report.absorb("F", weak_iso_report(&map, &lt.based.h, &target.lambda.h));
    let mut eval = Tally::new("eval ∘ (F ⊗ id) = τ̃");
    for x in 0..nx {
        for y in 0..ny {
            let lhs = target.eval(&map.cols[x], &linalg::unit(y));
            eval.expect(lhs == induced.tau[x * ny + y], || format!("({x}, {y})"));
        }
    }
    report.record(eval);
    report.absorb("τ̃", verify_skew_pairing(&induced));
    Ok(DualIso { map, induced, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_multimatrix;
    use crate::morita::{amplify, canonical_context, round_trip_map};
    use crate::weak::{groupoid_based, groupoid_weak_hopf, takeuchi_report, verify_weak_bialgebra, Groupoid};

    #[test]
    fn dual_of_pair_groupoid_is_a_function_algebra() {
        let (h, _) = groupoid_weak_hopf(&Groupoid::pair(2)).unwrap();
        let d = dual_weak_bialgebra(&h).unwrap();
        assert!(verify_weak_bialgebra(&d).passed());
        // oracle: δ_g δ_h = [g = h] δ_g
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { linalg::unit(i) } else { Vec::new() };
                assert_eq!(d.algebra.basis_product(i, j), &want);
            }
        }
        let dd = dual_weak_bialgebra(&d).unwrap();
        assert_eq!(dd.algebra.entries(), h.algebra.entries());
        assert_eq!(dd.comult_entries(), h.comult_entries());
        assert_eq!(dd.counit(), h.counit());
    }

    #[test]
    fn evaluation_pairings_are_skew() {
        for g in [Groupoid::pair(2), Groupoid::cyclic(2), Groupoid::pair(3)] {
            let b = groupoid_based(&g).unwrap();
            let p = evaluation_pairing(&b).unwrap();
            assert!(verify_weak_bialgebra(&p.lambda.h).passed());
            let rep = verify_skew_pairing(&p);
            assert!(rep.passed(), "{rep}");
        }
    }

    #[test]
    fn zero_pairing_fails_the_unit_law() {
        let b = groupoid_based(&Groupoid::pair(2)).unwrap();
        let mut p = evaluation_pairing(&b).unwrap();
        p.tau.iter_mut().for_each(Vec::clear);
        assert!(verify_skew_pairing(&p).failed("τ(ξ|1) = ε(ξ)(1)"));
    }

    #[test]
    fn amplified_pairing_and_duality_iso() {
        let b = groupoid_based(&Groupoid::pair(2)).unwrap();
        let ctx = canonical_context(&make_multimatrix(&[2, 1]).unwrap()).unwrap().swap();
        let iso = dual_base_change_iso(&b, &ctx).unwrap();
        assert!(iso.report.passed(), "{}", iso.report);
        assert!(takeuchi_report(&iso.induced.lambda).unwrap().passed());
    }

    #[test]
    fn induced_back_matches_original() {
        let b = groupoid_based(&Groupoid::pair(2)).unwrap();
        let ctx = canonical_context(&make_multimatrix(&[2, 1]).unwrap()).unwrap();
        let p = evaluation_pairing(&b).unwrap();
        let (al, ah) = (amplify(&p.lambda, &ctx).unwrap(), amplify(&b, &ctx).unwrap());
        let up = induce_pairing(&p, &al, &ah, &ctx.swap()).unwrap();
        assert!(verify_skew_pairing(&up).passed());
        let (bl, bh) = (base_change(&al.based, &ctx).unwrap(), base_change(&ah.based, &ctx).unwrap());
        let down = induce_pairing(&up, &bl, &bh, &ctx).unwrap();
        assert!(verify_skew_pairing(&down).passed());
        let phl = round_trip_map(&al, &bl, &ctx).unwrap();
        let phh = round_trip_map(&ah, &bh, &ctx).unwrap();
        let (il, ih) = (phl.inverse().unwrap(), phh.inverse().unwrap());
        for x in 0..p.lambda.dim() {
            for y in 0..b.dim() {
                assert_eq!(down.eval(&il.cols[x], &ih.cols[y]), p.tau[x * b.dim() + y]);
            }
        }
    }
}
