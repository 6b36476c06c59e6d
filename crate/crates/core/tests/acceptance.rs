//! One line per acceptance criterion. Every criterion runs even when an
//! earlier one fails; the binary exits nonzero if any line says FAIL.

use std::time::{Duration, Instant};

use num_rational::Rational64;
use num_traits::{One, Zero};

use quantgroupoid::algebra::{make_multimatrix, FiniteAlgebra};
use quantgroupoid::duality::{dual_base_change_iso, evaluation_pairing, induce_pairing, verify_skew_pairing};
use quantgroupoid::io::{verify_loaded, Loaded, LoadedWeak};
use quantgroupoid::linalg::{self, LinearMap};
use quantgroupoid::morita::{
    amplify, azumaya_reduce, base_change, canonical_context, monoidal_xi, round_trip_map, weak_iso_report, Module, MoritaContext,
};
use quantgroupoid::takeuchi::{enveloping_regular, takeuchi_product, EnvBimodule};
use quantgroupoid::towers::{self, floors, infer_middle_inclusion, subfactor_data, tl_algebra, tower, verify_tl};
use quantgroupoid::weak::{
    embed_as_takeuchi_bialgebra, groupoid_based, groupoid_weak_hopf, hopf_beta_check, monoid_bialgebra, verify_antipode,
    verify_weak_bialgebra, Based, Groupoid,
};
use quantgroupoid::Scalar;

const TOWER_LIMIT: Duration = Duration::from_secs(1);
const INFER_LIMIT: Duration = Duration::from_secs(5);
const TL_LIMIT: Duration = Duration::from_secs(10);
const AXIOM_LIMIT: Duration = Duration::from_secs(5);

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn timed(limit: Duration, what: &str, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    f()?;
    let t = start.elapsed();
    ensure!(t < limit, "{what} took {t:?}, limit {limit:?}");
    Ok(())
}

/// A corpus instance: a weak bialgebra over `k^n` with block sizes for its canonical context.
struct Instance {
    name: &'static str,
    based: Based,
    blocks: Vec<usize>,
}

fn c2() -> Based {
    let (h, _) = groupoid_weak_hopf(&Groupoid::cyclic(2)).unwrap();
    Based::canonical(h).unwrap()
}

fn corpus() -> Vec<Instance> {
    let null_monoid = monoid_bialgebra(vec!["1".into(), "z".into()], &[vec![0, 1], vec![1, 1]], 0).unwrap();
    vec![
        Instance { name: "pair(2)", based: groupoid_based(&Groupoid::pair(2)).unwrap(), blocks: vec![2, 1] },
        Instance { name: "pair(1) ⊔ pair(1)", based: groupoid_based(&Groupoid::pair(1).disjoint_union(&Groupoid::pair(1))).unwrap(), blocks: vec![1, 2] },
        Instance { name: "pair(3)", based: groupoid_based(&Groupoid::pair(3)).unwrap(), blocks: vec![1, 1, 2] },
        Instance { name: "kC₂", based: c2(), blocks: vec![2] },
        Instance { name: "k{1, z}", based: Based::canonical(null_monoid).unwrap(), blocks: vec![2] },
    ]
}

fn ctx_for(blocks: &[usize]) -> MoritaContext {
    canonical_context(&make_multimatrix(blocks).unwrap()).unwrap()
}

fn full_suite(b: &Based) -> Outcome {
    let lw = LoadedWeak { h: b.h.clone(), base: Some((b.base.clone(), b.source.clone())), antipode: None };
    let v = ok(verify_loaded(&Loaded::Weak(Box::new(lw))))?;
    ensure!(v.report.passed(), "{}", v.report);
    Ok(())
}

fn criterion_1() -> Outcome {
    timed(TOWER_LIMIT, "tower(3)", || {
        let steps = ok(tower(3, 5))?;
        let fl = floors(&steps);
        let dims: Vec<u64> = fl.iter().map(|f| f.dim()).collect();
        ensure!(dims == [2, 5, 14, 41, 122], "floor dims {dims:?}");
        let top = fl.last().unwrap();
        ensure!(top.ranks == [5, 9, 4], "final ranks {:?}", top.ranks);
        Ok(())
    })
}

fn criterion_2() -> Outcome {
    let d = ok(subfactor_data(3))?;
    ensure!(d.composite.lower.ranks == [2, 1], "H_t ranks {:?}", d.composite.lower.ranks);
    ensure!(d.composite.matrix == [vec![2, 3, 1], vec![1, 3, 2]], "composite {:?}", d.composite.matrix);
    Ok(())
}

fn criterion_3() -> Outcome {
    let d = ok(subfactor_data(3))?;
    timed(INFER_LIMIT, "infer_middle_inclusion", || {
        let sols = ok(infer_middle_inclusion(&d.bottom, &d.composite, &d.swaps))?;
        ensure!(sols.len() == 1, "{} solutions", sols.len());
        let m = towers::transpose(&sols[0].matrix, sols[0].upper.len());
        ensure!(m == [vec![1, 0, 0, 1], vec![1, 1, 1, 1], vec![0, 1, 1, 0]], "middle {m:?}");
        Ok(())
    })
}

fn criterion_4() -> Outcome {
    let r = ok(ok(subfactor_data(3))?.reduced())?;
    ensure!(r.lower.ranks == [1, 1, 1, 1], "lower {:?}", r.lower.ranks);
    ensure!(r.upper.ranks == [2, 4, 2], "upper {:?}", r.upper.ranks);
    ensure!(r.upper.dim() == 24, "dim {}", r.upper.dim());
    Ok(())
}

fn criterion_5() -> Outcome {
    let d = ok(subfactor_data(2))?;
    ensure!(d.h().ranks == [2, 3] && d.h().dim() == 13, "H {:?}", d.h().ranks);
    ensure!(d.h_t().ranks == [1, 1], "H_t {:?}", d.h_t().ranks);
    let fl = floors(&d.tower);
    ensure!(fl[1].ranks == [2, 1] && fl[1].dim() == 5, "A_{{1,2}} {:?}", fl[1].ranks);
    let r = ok(d.reduced())?;
    ensure!(r.upper.dim() == 13, "reduced dim {}", r.upper.dim());
    Ok(())
}

fn catalan_oracle(k: u64) -> u64 {
    // C_k = binom(2k, k) / (k + 1)
    let mut c: u64 = 1;
    for i in 0..k {
        c = c * (2 * k - i) / (i + 1);
    }
    c / (k + 1)
}

fn criterion_6() -> Outcome {
    timed(TL_LIMIT, "TL n ∈ {2,3}, k ≤ 5", || {
        for n in [2, 3] {
            for k in 1..=5 {
                let tl = ok(tl_algebra(n, k))?;
                let rep = verify_tl(&tl);
                ensure!(rep.passed(), "n={n} k={k}: {rep}");
                ensure!(tl.algebra.dim() as u64 == catalan_oracle(k as u64), "n={n} k={k}: dim {}", tl.algebra.dim());
            }
        }
        Ok(())
    })
}

fn criterion_7() -> Outcome {
    for (name, g) in [("pair(2)", Groupoid::pair(2)), ("pair(3)", Groupoid::pair(3)), ("C₂", Groupoid::cyclic(2))] {
        timed(AXIOM_LIMIT, name, || {
            let (h, s) = ok(groupoid_weak_hopf(&g))?;
            let rep = verify_weak_bialgebra(&h);
            ensure!(rep.passed(), "{name}: {rep}");
            let rep = verify_antipode(&h, &s);
            ensure!(rep.passed(), "{name}: {rep}");
            let b = ok(groupoid_based(&g))?;
            let rep = ok(embed_as_takeuchi_bialgebra(&b))?;
            ensure!(rep.passed(), "{name}: {rep}");
            let (hopf, _) = ok(hopf_beta_check(&b))?;
            ensure!(hopf, "{name}: β not bijective");
            Ok(())
        })?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    for inst in corpus() {
        let ctx = ctx_for(&inst.blocks);
        let amp = ok(amplify(&inst.based, &ctx))?;
        let back = ok(base_change(&amp.based, &ctx))?;
        let phi = ok(round_trip_map(&amp, &back, &ctx))?;
        let rep = weak_iso_report(&phi, &back.based.h, &inst.based.h);
        ensure!(rep.passed(), "{}: {rep}", inst.name);
        ensure!(phi.inverse().is_ok(), "{}: round-trip map not invertible", inst.name);
    }
    Ok(())
}

fn criterion_9() -> Outcome {
    for inst in corpus() {
        let ctx = ctx_for(&inst.blocks);
        let amp = ok(amplify(&inst.based, &ctx))?;
        full_suite(&amp.based).map_err(|e| format!("{} amplified: {e}", inst.name))?;
        let back = ok(base_change(&amp.based, &ctx))?;
        full_suite(&back.based).map_err(|e| format!("{} back: {e}", inst.name))?;
        if inst.based.dim() <= 4 {
            let reg = Module::regular(&inst.based.h.algebra);
            let xi = ok(monoidal_xi(&amp, &ctx.swap(), &reg, &reg))?;
            ensure!(xi.report.passed(), "{}: {}", inst.name, xi.report);
        }
    }
    Ok(())
}

fn criterion_10() -> Outcome {
    let mut seen_non_hopf = false;
    for inst in corpus() {
        let ctx = ctx_for(&inst.blocks);
        let (before, _) = ok(hopf_beta_check(&inst.based))?;
        let amp = ok(amplify(&inst.based, &ctx))?;
        let (after, _) = ok(hopf_beta_check(&amp.based))?;
        ensure!(before == after, "{}: {before} before, {after} after", inst.name);
        seen_non_hopf |= !before;
    }
    ensure!(seen_non_hopf, "corpus has no non-Hopf instance");
    Ok(())
}

fn criterion_11() -> Outcome {
    for (name, b) in [("pair(2)", groupoid_based(&Groupoid::pair(2))), ("pair(3)", groupoid_based(&Groupoid::pair(3))), ("C₂", Ok(c2()))] {
        let b = ok(b)?;
        let rep = verify_skew_pairing(&ok(evaluation_pairing(&b))?);
        ensure!(rep.passed(), "{name}: {rep}");
    }
    for inst in corpus() {
        let ctx = ctx_for(&inst.blocks);
        let p = ok(evaluation_pairing(&inst.based))?;
        let (al, ah) = (ok(amplify(&p.lambda, &ctx))?, ok(amplify(&inst.based, &ctx))?);
        let up = ok(induce_pairing(&p, &al, &ah, &ctx.swap()))?;
        let rep = verify_skew_pairing(&up);
        ensure!(rep.passed(), "{} induced: {rep}", inst.name);
        let iso = ok(dual_base_change_iso(&inst.based, &ctx.swap()))?;
        ensure!(iso.report.passed(), "{}: {}", inst.name, iso.report);
        ensure!(iso.map.dom == iso.map.cod && iso.map.inverse().is_ok(), "{}: F not bijective", inst.name);
    }
    Ok(())
}

/// `g = 1 − (2/λ)v` where `v` spans `ker ε` and `v² = λv`.
fn criterion_12() -> Outcome {
    let amp = ok(amplify(&c2(), &ctx_for(&[2])))?;
    let az = ok(azumaya_reduce(&amp.based))?;
    ensure!(az.report.passed(), "{}", az.report);
    let h = &az.h;
    ensure!(h.dim() == 2, "dim {}", h.dim());
    let rep = verify_weak_bialgebra(h);
    ensure!(rep.passed(), "{rep}");
    let eps = h.counit();
    // ker ε in a 2-dimensional space
    let v = if eps[1].is_zero() {
        linalg::unit(1)
    } else {
        linalg::from_dense(&[eps[1].clone(), -eps[0].clone()])
    };
    let v2 = h.mul(&v, &v);
    let lambda = (0..2).find_map(|i| {
        let c = linalg::coeff(&v, i);
        (!c.is_zero()).then(|| linalg::coeff(&v2, i).checked_div(&c).unwrap())
    });
    let lambda = lambda.ok_or("v = 0")?;
    ensure!(linalg::scale(&lambda, &v) == v2, "ker ε is not an ideal");
    ensure!(!lambda.is_zero(), "ker ε is nilpotent");
    let g = linalg::sub(h.one(), &linalg::scale(&ok(Scalar::from_int(2).checked_div(&lambda))?, &v));
    ensure!(h.mul(&g, &g) == *h.one(), "g² ≠ 1");
    ensure!(h.delta(&g) == linalg::kron(&g, &g, 2), "g not grouplike");
    let (kc2, _) = ok(groupoid_weak_hopf(&Groupoid::cyclic(2)))?;
    let id = ok(Groupoid::cyclic(2).identities())?[0];
    let cols = (0..2).map(|i| if i == id { h.one().clone() } else { g.clone() }).collect();
    let phi = ok(LinearMap::new(2, 2, cols))?;
    let rep = weak_iso_report(&phi, &kc2, h);
    ensure!(rep.passed(), "{rep}");
    Ok(())
}

// Brute force: dense rationals, the enveloping algebra built by hand.

fn dense_rank(mut rows: Vec<Vec<Rational64>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][col];
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col] / pivot;
                for c in 0..width {
                    let x = rows[rank][c];
                    rows[r][c] -= f * x;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim(R^e ×_R R^e)` for `R = k^n`, from the four actions on `R ⊗ R^op`
/// written as diagonal matrices.
fn takeuchi_oracle_kn(n: usize) -> usize {
    let d = n * n;
    let v = d * d;
    // basis e_a ⊗ ē_b at a*n + b; e_c acts on it by δ_{ca} (unbarred) or δ_{cb} (barred)
    let act = |barred: bool, c: usize, i: usize| -> bool { if barred { i % n == c } else { i / n == c } };
    let vec_of = |f: &dyn Fn(usize, usize) -> Rational64| -> Vec<Rational64> {
        (0..v).map(|x| f(x / d, x % d)).collect()
    };
    let one = Rational64::one();
    let zero = Rational64::zero();
    let ind = |b: bool| if b { one } else { zero };
    // relations r̄m ⊗ n − m ⊗ rn, one vector per (c, basis pair)
    let mut w = Vec::new();
    for c in 0..n {
        for x in 0..v {
            let (m, nn) = (x / d, x % d);
            let coeff = ind(act(true, c, m)) - ind(act(false, c, nn));
            w.push(vec_of(&|a, b| if a == m && b == nn { coeff } else { zero }));
        }
    }
    let dim_w = dense_rank(w.clone());
    // x ↦ x·s̄ ⊗ y − x ⊗ y·s for each s, then mod W
    let mut cols: Vec<Vec<Rational64>> = Vec::new();
    for x in 0..v {
        let (m, nn) = (x / d, x % d);
        let mut col = Vec::new();
        for s in 0..n {
            let c = ind(act(true, s, m)) - ind(act(false, s, nn));
            col.extend(vec_of(&|a, b| if a == m && b == nn { c } else { zero }));
        }
        cols.push(col);
    }
    for s in 0..n {
        for g in &w {
            let mut col = vec![zero; n * v];
            col[s * v..(s + 1) * v].copy_from_slice(g);
            cols.push(col);
        }
    }
    let rank_t_mod_w = dense_rank(cols) - n * dim_w;
    v - rank_t_mod_w - dim_w
}

fn ground_module(dim: usize) -> EnvBimodule {
    let k = make_multimatrix(&[1]).unwrap().algebra().clone();
    let id: Vec<_> = (0..dim).map(linalg::unit).collect();
    EnvBimodule::new(k, dim, [id.clone(), id.clone(), id.clone(), id]).unwrap()
}

fn k_n(n: usize) -> FiniteAlgebra {
    make_multimatrix(&vec![1; n]).unwrap().algebra().clone()
}

fn criterion_13() -> Outcome {
    for dm in 1..=3 {
        for dn in 1..=3 {
            let p = ok(takeuchi_product(&ground_module(dm), &ground_module(dn)))?;
            ensure!(p.dim() == dm * dn, "{dm} × {dn}: dim {}", p.dim());
        }
    }
    let oracle = takeuchi_oracle_kn(2);
    ensure!(oracle == 8, "oracle says {oracle}");
    let reg = enveloping_regular(&k_n(2));
    let p = ok(takeuchi_product(&reg, &reg))?;
    ensure!(p.dim() == oracle, "library {} vs oracle {oracle}", p.dim());
    let reg3 = enveloping_regular(&k_n(3));
    let p3 = ok(takeuchi_product(&reg3, &reg3))?;
    ensure!(p3.dim() == takeuchi_oracle_kn(3), "k³: library {} vs oracle {}", p3.dim(), takeuchi_oracle_kn(3));
    Ok(())
}

fn main() {
    // R = k: the product is R^e ⊗ R^e = k
    assert_eq!(takeuchi_oracle_kn(1), 1, "oracle sanity");
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("tower n=3 floor dims 2, 5, 14, 41, 122, final ranks (5,9,4)", criterion_1),
        ("composite H_t ⊂ H is [[2,3,1],[1,3,2]]", criterion_2),
        ("unique middle inclusion [[1,0,0,1],[1,1,1,1],[0,1,1,0]]", criterion_3),
        ("reduction to lower ranks 1 gives (2,4,2), dim 24", criterion_4),
        ("tower n=2: H (2,3) dim 13, A_{1,2} (2,1) dim 5", criterion_5),
        ("Temperley-Lieb relations and Catalan dims", criterion_6),
        ("groupoid algebras pass the axiom suite", criterion_7),
        ("base change after amplification is isomorphic to the input", criterion_8),
        ("base-change outputs pass the suite, ξ equivariant", criterion_9),
        ("Hopf property preserved by base change", criterion_10),
        ("skew pairings, induced pairings and the duality isomorphism", criterion_11),
        ("Azumaya reduction of amplified kC₂ is kC₂", criterion_12),
        ("Takeuchi products against a brute-force oracle", criterion_13),
    ];
    let mut failed = Vec::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("[PASS] {:>2}. {title} ({ms} ms)", i + 1),
            Err(why) => {
                println!("[FAIL] {:>2}. {title} ({ms} ms): {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
