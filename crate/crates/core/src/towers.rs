//! Temperley–Lieb diagram algebras, Bratteli diagrams of multi-matrix
//! inclusions and the subfactor tower built from them.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{center, verify_algebra, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{self, Echelon, LinearMap, SparseVec};
use crate::morita::{enveloping, BaseChange};
use crate::report::{Report, Tally};
use crate::scalar::{beta_of, delta_of, Rational, Scalar};
use crate::weak::Based;

pub const MAX_STRANDS: usize = 6;

/// `n`-th Catalan number.
pub fn catalan(n: usize) -> u64 {
    (0..n as u64).fold(1, |c, i| c * 2 * (2 * i + 1) / (i + 2))
}

/// Perfect matching on `2k` boundary points: `0..k` on top, `k..2k` on the
/// bottom, both read left to right.
pub type Diagram = Vec<usize>;

/// All planar pairings of `2k` points, sorted.
pub fn planar_pairings(k: usize) -> Vec<Diagram> {
    // around the rectangle: top left→right, then bottom right→left
    let point = |c: usize| if c < k { c } else { 3 * k - 1 - c };
    let mut out = Vec::new();
    let mut partial = vec![usize::MAX; 2 * k];
    fn rec(lo: usize, hi: usize, partial: &mut Vec<usize>, done: &mut dyn FnMut(&mut Vec<usize>), rest: &mut Vec<(usize, usize)>) {
        if lo >= hi {
            match rest.pop() {
                None => done(partial),
                Some((a, b)) => {
                    rec(a, b, partial, done, rest);
                    rest.push((a, b));
                }
            }
            return;
        }
        for j in (lo + 1..hi).step_by(2) {
            partial[lo] = j;
            partial[j] = lo;
            rest.push((j + 1, hi));
            rec(lo + 1, j, partial, done, rest);
            rest.pop();
        }
    }
    rec(0, 2 * k, &mut partial, &mut |m: &mut Vec<usize>| {
        let mut d = vec![0; 2 * k];
        for c in 0..2 * k {
            d[point(c)] = point(m[c]);
        }
        out.push(d);
    }, &mut Vec::new());
    out.sort();
    out
}

/// Stack `a` above `b`; returns the product diagram and the number of
/// closed loops.
pub fn stack(a: &[usize], b: &[usize]) -> (Diagram, usize) {
    let k = a.len() / 2;
    // nodes: a-top 0..k, middle k..2k, b-bottom 2k..3k
    let via_a = |x: usize| a[x];
    // b-top y sits at middle node k + y, b-bottom k + y at 2k + y
    let via_b = |x: usize| b[x - k] + k;
    let mut seen = vec![false; 3 * k];
    let mut out = vec![0; 2 * k];
    let ends: Vec<usize> = (0..k).chain(2 * k..3 * k).collect();
    let outer = |x: usize| if x < k { x } else { x - k };
    for &start in &ends {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let (mut x, mut use_a) = (start, start < k);
        loop {
            x = if use_a { via_a(x) } else { via_b(x) };
            seen[x] = true;
            if x < k || x >= 2 * k {
                break;
            }
            use_a = !use_a;
        }
        out[outer(start)] = outer(x);
        out[outer(x)] = outer(start);
    }
    let mut loops = 0;
    for m in k..2 * k {
        if seen[m] {
            continue;
        }
        loops += 1;
        let (mut x, mut use_a) = (m, true);
        while !seen[x] {
            seen[x] = true;
            x = if use_a { via_a(x) } else { via_b(x) };
            use_a = !use_a;
        }
    }
    (out, loops)
}

fn render_diagram(d: &[usize]) -> String {
    let k = d.len() / 2;
    let name = |x: usize| if x < k { format!("{}", x + 1) } else { format!("{}'", x - k + 1) };
    let pairs: Vec<String> = (0..d.len()).filter(|&x| x < d[x]).map(|x| format!("{}-{}", name(x), name(d[x]))).collect();
    pairs.join(",")
}

/// Diagram algebra with loop value `δ`, `δ² = β`.
#[derive(Clone, Debug)]
pub struct TLAlgebra {
    pub strands: usize,
    pub delta: Scalar,
    pub beta: Scalar,
    pub diagrams: Vec<Diagram>,
    pub algebra: FiniteAlgebra,
    /// `e_i = U_i / δ` for `i = 1..k−1`.
    pub generators: Vec<SparseVec>,
}

pub fn tl_algebra(n: u32, k: usize) -> Result<TLAlgebra> {
    let delta = delta_of(n)?;
    let beta = beta_of(n)?;
    if k > MAX_STRANDS {
        return Err(Error::TooManyStrands(k));
    }
    if k == 0 {
        return Err(Error::Shape("at least one strand".into()));
    }
    let diagrams = planar_pairings(k);
    let index: HashMap<&Diagram, usize> = diagrams.iter().enumerate().map(|(i, d)| (d, i)).collect();
    let powers: Vec<Scalar> = (0..=k).map(|e| delta.pow(e as u32)).collect();
    let mut entries = Vec::new();
    for (i, a) in diagrams.iter().enumerate() {
        for (j, b) in diagrams.iter().enumerate() {
            let (c, loops) = stack(a, b);
            entries.push((i, j, index[&c], powers[loops].clone()));
        }
    }
    let identity: Diagram = (0..2 * k).map(|x| (x + k) % (2 * k)).collect();
    let labels = diagrams.iter().map(|d| render_diagram(d)).collect();
    let algebra = FiniteAlgebra::from_entries(labels, &entries, linalg::unit(index[&identity]))?;
    let inv = delta.inv()?;
    let generators = (0..k.saturating_sub(1))
        .map(|i| {
            let mut u = identity.clone();
            u[i] = i + 1;
            u[i + 1] = i;
            u[k + i] = k + i + 1;
            u[k + i + 1] = k + i;
            vec![(index[&u], inv.clone())]
        })
        .collect();
    Ok(TLAlgebra { strands: k, delta, beta, diagrams, algebra, generators })
}

/// Algebra axioms, the three relation families and `dim = Catalan(k)`.
pub fn verify_tl(tl: &TLAlgebra) -> Report {
    let mut rep = verify_algebra(&tl.algebra);
    rep.check("dim = Catalan(k)", tl.algebra.dim() as u64 == catalan(tl.strands), || format!("dim {}", tl.algebra.dim()));
    let a = &tl.algebra;
    let e = &tl.generators;
    let mut idem = Tally::new("e_i² = e_i");
    let mut braid = Tally::new("β e_i e_j e_i = e_i, |i−j| = 1");
    let mut far = Tally::new("e_i e_j = e_j e_i, |i−j| ≥ 2");
    for i in 0..e.len() {
        idem.expect(a.mul(&e[i], &e[i]) == e[i], || format!("e{}", i + 1));
        for j in 0..e.len() {
            if i.abs_diff(j) == 1 {
                let lhs = linalg::scale(&tl.beta, &a.mul_all(&[&e[i], &e[j], &e[i]]));
                braid.expect(lhs == e[i], || format!("i={}, j={}", i + 1, j + 1));
            } else if i.abs_diff(j) >= 2 {
                far.expect(a.mul(&e[i], &e[j]) == a.mul(&e[j], &e[i]), || format!("i={}, j={}", i + 1, j + 1));
            }
        }
    }
    rep.record(idem);
    rep.record(braid);
    rep.record(far);
    rep
}

/// Simple components of a multi-matrix algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BratteliFloor {
    pub labels: Vec<String>,
    pub ranks: Vec<u64>,
}

impl BratteliFloor {
    pub fn new(labels: Vec<String>, ranks: Vec<u64>) -> Result<BratteliFloor> {
        if labels.len() != ranks.len() || ranks.contains(&0) {
            return Err(Error::Shape("floor needs one positive rank per label".into()));
        }
        Ok(BratteliFloor { labels, ranks })
    }

    pub fn unlabeled(ranks: &[u64]) -> Result<BratteliFloor> {
        BratteliFloor::new((0..ranks.len()).map(|i| format!("c{i}")).collect(), ranks.to_vec())
    }

    pub fn dim(&self) -> u64 {
        self.ranks.iter().map(|r| r * r).sum()
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

pub type Matrix = Vec<Vec<u64>>;

pub fn transpose(m: &Matrix, cols: usize) -> Matrix {
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

pub fn matmul(a: &Matrix, b: &Matrix, cols: usize) -> Matrix {
    a.iter().map(|row| (0..cols).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum()).collect()).collect()
}

/// `lower ⊂ upper` with multiplicities; rows are lower components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionStep {
    pub lower: BratteliFloor,
    pub upper: BratteliFloor,
    pub matrix: Matrix,
}

impl InclusionStep {
    pub fn new(lower: BratteliFloor, upper: BratteliFloor, matrix: Matrix) -> Result<InclusionStep> {
        if matrix.len() != lower.len() || matrix.iter().any(|r| r.len() != upper.len()) {
            return Err(Error::Shape(format!("inclusion matrix must be {}×{}", lower.len(), upper.len())));
        }
        let step = InclusionStep { lower, upper, matrix };
        let pushed = step.pushed_ranks(&step.lower.ranks);
        if pushed != step.upper.ranks {
            return Err(Error::InconsistentRanks(format!("{:?}·Λ = {pushed:?}, upper ranks {:?}", step.lower.ranks, step.upper.ranks)));
        }
        Ok(step)
    }

    /// `Σ_i lower[i] Λ[i][j]`.
    pub fn pushed_ranks(&self, lower: &[u64]) -> Vec<u64> {
        (0..self.upper.len()).map(|j| lower.iter().zip(&self.matrix).map(|(r, row)| r * row[j]).sum()).collect()
    }

    pub fn identity(floor: BratteliFloor) -> InclusionStep {
        let n = floor.len();
        let matrix = (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect();
        InclusionStep { lower: floor.clone(), upper: floor, matrix }
    }
}

/// `B ⊂ B₁ = End_A(B)`: components of `B₁` are those of `A`, ranks `Λ·ranks(B)`,
/// matrix `Λᵀ`.
pub fn basic_construction_step(step: &InclusionStep) -> Result<InclusionStep> {
    InclusionStep::new(step.lower.clone(), step.upper.clone(), step.matrix.clone())?;
    let ranks = step.matrix.iter().map(|row| row.iter().zip(&step.upper.ranks).map(|(m, r)| m * r).sum()).collect();
    let upper = BratteliFloor::new(step.lower.labels.clone(), ranks)?;
    InclusionStep::new(step.upper.clone(), upper, transpose(&step.matrix, step.upper.len()))
}

pub fn compose_steps(s1: &InclusionStep, s2: &InclusionStep) -> Result<InclusionStep> {
    if s1.upper.ranks != s2.lower.ranks {
        return Err(Error::FloorMismatch(format!("{:?} vs {:?}", s1.upper.ranks, s2.lower.ranks)));
    }
    InclusionStep::new(s1.lower.clone(), s2.upper.clone(), matmul(&s1.matrix, &s2.matrix, s2.upper.len()))
}

/// `A ⊂ A ⊗ B`, `a ↦ a ⊗ 1`; component `(a, b)` at `a * |B| + b`.
pub fn tensor_inclusion(a: &BratteliFloor, b: &BratteliFloor) -> Result<InclusionStep> {
    let mut labels = Vec::new();
    let mut ranks = Vec::new();
    for (la, ra) in a.labels.iter().zip(&a.ranks) {
        for (lb, rb) in b.labels.iter().zip(&b.ranks) {
            labels.push(format!("{la}⊗{lb}"));
            ranks.push(ra * rb);
        }
    }
    let m = b.len();
    let matrix = (0..a.len()).map(|i| (0..a.len() * m).map(|c| if c / m == i { b.ranks[c % m] } else { 0 }).collect()).collect();
    InclusionStep::new(a.clone(), BratteliFloor::new(labels, ranks)?, matrix)
}

/// Pairs `(a,b) ↔ (b,a)` of components of `A ⊗ A`.
pub fn flip_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a * n + b, b * n + a))).collect()
}

/// All middle inclusions `M ⊂ H` with `bottom · middle = composite`, the
/// rank equation, and equal columns on each swapped pair of middle
/// components. Entries are bounded by the largest rank of `H`. Sorted.
pub fn infer_middle_inclusion(bottom: &InclusionStep, composite: &InclusionStep, antipode_pairs: &[(usize, usize)]) -> Result<Vec<InclusionStep>> {
    if bottom.lower.ranks != composite.lower.ranks {
        return Err(Error::FloorMismatch("bottom and composite start on different floors".into()));
    }
    let mid = &bottom.upper;
    let top = &composite.upper;
    let m = mid.len();
    if antipode_pairs.iter().any(|&(a, b)| a >= m || b >= m) {
        return Err(Error::Shape("swap pair out of range".into()));
    }
    let bound = top.ranks.iter().copied().max().unwrap_or(0);
    // each column of the middle matrix is constrained independently
    let mut per_column: Vec<Vec<Vec<u64>>> = Vec::with_capacity(top.len());
    for j in 0..top.len() {
        let mut found = Vec::new();
        let mut col = vec![0u64; m];
        loop {
            let ok_rank = col.iter().zip(&mid.ranks).map(|(x, r)| x * r).sum::<u64>() == top.ranks[j];
            let ok_swap = antipode_pairs.iter().all(|&(a, b)| col[a] == col[b]);
            let ok_comp = bottom.matrix.iter().zip(&composite.matrix).all(|(row, crow)| row.iter().zip(&col).map(|(x, y)| x * y).sum::<u64>() == crow[j]);
            if ok_rank && ok_swap && ok_comp {
                found.push(col.clone());
            }
            let mut i = 0;
            while i < m && col[i] == bound {
                col[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
            col[i] += 1;
        }
        if found.is_empty() {
            return Err(Error::NoSolution);
        }
        per_column.push(found);
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; top.len()];
    loop {
        let cols: Vec<&Vec<u64>> = choice.iter().enumerate().map(|(j, &c)| &per_column[j][c]).collect();
        let matrix = (0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        out.push(InclusionStep::new(mid.clone(), top.clone(), matrix)?);
        let mut j = 0;
        while j < choice.len() && choice[j] + 1 == per_column[j].len() {
            choice[j] = 0;
            j += 1;
        }
        if j == choice.len() {
            break;
        }
        choice[j] += 1;
    }
    out.sort_by(|a, b| a.matrix.cmp(&b.matrix));
    Ok(out)
}

/// Same matrix, new lower ranks, upper ranks from the rank equation.
pub fn bratteli_base_change(step: &InclusionStep, new_lower_ranks: &[u64]) -> Result<InclusionStep> {
    if new_lower_ranks.len() != step.lower.len() {
        return Err(Error::Shape(format!("{} lower components, {} new ranks", step.lower.len(), new_lower_ranks.len())));
    }
    let lower = BratteliFloor::new(step.lower.labels.clone(), new_lower_ranks.to_vec())?;
    let upper = BratteliFloor::new(step.upper.labels.clone(), step.pushed_ranks(new_lower_ranks))?;
    InclusionStep::new(lower, upper, step.matrix.clone())
}

fn binomial(n: u64, k: i64) -> u64 {
    if k < 0 || k as u64 > n {
        return 0;
    }
    (0..k as u64).fold(1, |c, i| c * (n - i) / (i + 1))
}

/// Generic floor of `TL_m`: components by number `t` of through strands.
pub fn generic_tl_floor(m: usize) -> BratteliFloor {
    let m = m as u64;
    let ts: Vec<u64> = (m % 2..=m).step_by(2).collect();
    let ranks = ts.iter().map(|t| binomial(m, ((m - t) / 2) as i64) - binomial(m, ((m - t) / 2) as i64 - 1)).collect();
    BratteliFloor { labels: ts.iter().map(|t| format!("t{t}")).collect(), ranks }
}

/// Generic `TL_m ⊂ TL_{m+1}`: `t ↦ t ± 1`.
pub fn generic_tl_step(m: usize) -> Result<InclusionStep> {
    let lower = generic_tl_floor(m);
    let upper = generic_tl_floor(m + 1);
    let parse = |l: &str| l[1..].parse::<i64>().unwrap_or(-9);
    let matrix = lower
        .labels
        .iter()
        .map(|a| upper.labels.iter().map(|b| u64::from((parse(a) - parse(b)).abs() == 1)).collect())
        .collect();
    InclusionStep::new(lower, upper, matrix)
}

/// `A_{1,1} ⊂ … ⊂ A_{1,up_to}`: generic floors `A_{1,k} = TL_{k+1}` for
/// `k < n`, then the basic construction.
pub fn tower(n: u32, up_to: usize) -> Result<Vec<InclusionStep>> {
    beta_of(n)?;
    if up_to < 2 {
        return Err(Error::Shape("a tower needs at least two floors".into()));
    }
    let n = n as usize;
    let mut steps: Vec<InclusionStep> = Vec::new();
    for k in 1..up_to {
        let step = if k < n { generic_tl_step(k + 1)? } else { basic_construction_step(steps.last().expect("n ≥ 2"))? };
        steps.push(step);
    }
    Ok(steps)
}

/// Floors of a tower, bottom first.
pub fn floors(steps: &[InclusionStep]) -> Vec<&BratteliFloor> {
    steps.first().map(|s| &s.lower).into_iter().chain(steps.iter().map(|s| &s.upper)).collect()
}

/// `Σ ranks² = dim TL_{k+1}` on every generic floor, using the diagram algebra.
pub fn catalan_cross_check(n: u32, steps: &[InclusionStep]) -> Result<Report> {
    let mut rep = Report::new("generic floors against diagram algebras");
    for (i, f) in floors(steps).into_iter().enumerate().take(n as usize) {
        let tl = tl_algebra(n, i + 2)?;
        rep.check(format!("A_{{1,{}}}", i + 1), f.dim() == tl.algebra.dim() as u64, || format!("{} vs {}", f.dim(), tl.algebra.dim()));
    }
    Ok(rep)
}

/// The weak Hopf algebra of the index `4cos²(π/(n+3))` subfactor at the
/// Bratteli level: `H = A_{1,2n−1}`, `H_t = A_{1,n−1}`, `H_s ≅ H_t`.
#[derive(Clone, Debug)]
pub struct SubfactorData {
    pub n: u32,
    pub tower: Vec<InclusionStep>,
    /// `H_t ⊂ H`.
    pub composite: InclusionStep,
    /// `H_t ⊂ H_t ⊗ H_s`.
    pub bottom: InclusionStep,
    pub swaps: Vec<(usize, usize)>,
    /// Every solution for `H_t ⊗ H_s ⊂ H`.
    pub middle: Vec<InclusionStep>,
}

impl SubfactorData {
    pub fn h(&self) -> &BratteliFloor {
        &self.composite.upper
    }

    pub fn h_t(&self) -> &BratteliFloor {
        &self.composite.lower
    }

    /// Base change to `H̃_t` with all ranks 1, through the first middle solution.
    pub fn reduced(&self) -> Result<InclusionStep> {
        let m = &self.middle[0];
        bratteli_base_change(m, &vec![1; m.lower.len()])
    }
}

pub fn subfactor_data(n: u32) -> Result<SubfactorData> {
    let nn = n as usize;
    let tower = tower(n, 2 * nn - 1)?;
    let start = nn.saturating_sub(2);
    let mut composite = tower[start].clone();
    for s in &tower[start + 1..] {
        composite = compose_steps(&composite, s)?;
    }
    let ht = composite.lower.clone();
    let bottom = tensor_inclusion(&ht, &ht)?;
    let swaps = flip_pairs(ht.len());
    let middle = infer_middle_inclusion(&bottom, &composite, &swaps)?;
    Ok(SubfactorData { n, tower, composite, bottom, swaps, middle })
}

fn ranks_text(r: &[u64]) -> String {
    format!("({})", r.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
}

fn matrix_text(m: &Matrix) -> String {
    format!("[{}]", m.iter().map(|r| format!("[{}]", r.iter().map(u64::to_string).collect::<Vec<_>>().join(","))).collect::<Vec<_>>().join(","))
}

/// Plain-text floors, matrices and dimensions, ending in `dim H = …`.
pub fn tower_table(d: &SubfactorData, base_change: bool) -> Result<String> {
    let mut s = String::new();
    let _ = writeln!(s, "floor     ranks        dim");
    for (i, f) in floors(&d.tower).into_iter().enumerate() {
        let _ = writeln!(s, "A_{{1,{}}}   {:<12} {}", i + 1, ranks_text(&f.ranks), f.dim());
    }
    for (i, st) in d.tower.iter().enumerate() {
        let _ = writeln!(s, "A_{{1,{}}} ⊂ A_{{1,{}}}: {}", i + 1, i + 2, matrix_text(&st.matrix));
    }
    let _ = writeln!(s, "H_t ⊂ H: {}", matrix_text(&d.composite.matrix));
    let _ = writeln!(s, "dim H_t = {}", d.h_t().dim());
    if base_change {
        let _ = writeln!(s, "H_t ⊂ H_t⊗H_s: {}", matrix_text(&d.bottom.matrix));
        let _ = writeln!(s, "H_t⊗H_s ⊂ H: {} ({} solution{})", matrix_text(&d.middle[0].matrix), d.middle.len(), if d.middle.len() == 1 { "" } else { "s" });
        let r = d.reduced()?;
        let _ = writeln!(s, "H̃_t⊗H̃_s ranks {}", ranks_text(&r.lower.ranks));
        let _ = writeln!(s, "H̃ ranks {}", ranks_text(&r.upper.ranks));
        let _ = writeln!(s, "dim H = {}", d.h().dim());
        let _ = writeln!(s, "dim H̃ = {}", r.upper.dim());
    } else {
        let _ = writeln!(s, "dim H = {}", d.h().dim());
    }
    Ok(s)
}

/// One rank-labelled node per component, `Λ[i][j]` parallel edges.
pub fn steps_dot(name: &str, steps: &[InclusionStep]) -> String {
    let mut s = format!("graph {name} {{\n  rankdir=BT;\n");
    for (f, floor) in floors(steps).into_iter().enumerate() {
        let _ = write!(s, "  {{ rank=same;");
        for (i, r) in floor.ranks.iter().enumerate() {
            let _ = write!(s, " f{f}_{i} [label=\"{r}\"];");
        }
        let _ = writeln!(s, " }}");
    }
    for (f, st) in steps.iter().enumerate() {
        for (i, row) in st.matrix.iter().enumerate() {
            for (j, &m) in row.iter().enumerate() {
                for _ in 0..m {
                    let _ = writeln!(s, "  f{f}_{i} -- f{}_{j};", f + 1);
                }
            }
        }
    }
    s.push_str("}\n");
    s
}

pub fn tower_dot(d: &SubfactorData, base_change: bool) -> Result<String> {
    let mut s = steps_dot("tower", &d.tower);
    s.push_str(&steps_dot("inclusion", std::slice::from_ref(&d.composite)));
    if base_change {
        s.push_str(&steps_dot("middle", &[d.bottom.clone(), d.middle[0].clone()]));
        s.push_str(&steps_dot("reduced", &[d.reduced()?]));
    }
    Ok(s)
}

// ---- blocks of concrete split semisimple algebras ----

fn rational(c: &Scalar) -> Result<Rational> {
    if c.is_rational() {
        Ok(c.rational_part().clone())
    } else {
        Err(Error::NotSplit("irrational central eigenvalue".into()))
    }
}

fn divisors(n: &BigInt) -> Result<Vec<u64>> {
    let n = n.abs().to_u64().filter(|&n| n < 1 << 40).ok_or_else(|| Error::NotSplit("coefficient too large".into()))?;
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            out.push(n / d);
        }
        d += 1;
    }
    Ok(out)
}

/// Distinct rational roots of `Σ c_i x^i` (coefficients low degree first).
fn rational_roots(coeffs: &[Rational]) -> Result<Vec<Rational>> {
    let lcm = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let mut ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    while ints.len() > 1 && ints[0].is_zero() {
        ints.remove(0);
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
    }
    if ints.len() == 1 {
        return Ok(roots);
    }
    let eval = |x: &Rational| ints.iter().rev().fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()));
    for p in divisors(&ints[0])? {
        for q in divisors(ints.last().expect("nonempty"))? {
            for sign in [1i64, -1] {
                let x = Rational::new(BigInt::from(sign) * BigInt::from(p), BigInt::from(q));
                if !roots.contains(&x) && eval(&x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    Ok(roots)
}

/// Central primitive idempotents, found by splitting with rational
/// eigenvalues of central elements.
pub fn central_idempotents(a: &FiniteAlgebra) -> Result<Vec<SparseVec>> {
    let n = a.dim();
    let z = center(a);
    let mut idem = vec![a.unit().clone()];
    for w0 in &z {
        let mut next = Vec::new();
        for e in idem {
            let w = a.mul(w0, &e);
            // minimal polynomial of w in the corner with unit e
            let mut powers = vec![e.clone()];
            let mut ech = Echelon::new(n);
            ech.insert(&e);
            let coeffs = loop {
                let p = a.mul(powers.last().expect("nonempty"), &w);
                if ech.contains(&p) {
                    let map = LinearMap { dom: powers.len(), cod: n, cols: powers.clone() };
                    let c = map.solve(&p).ok_or_else(|| Error::NotSplit("minimal polynomial".into()))?;
                    let mut poly: Vec<Rational> = (0..powers.len()).map(|i| rational(&linalg::coeff(&c, i)).map(|x| -x)).collect::<Result<_>>()?;
                    poly.push(Rational::one());
                    break poly;
                }
                ech.insert(&p);
                powers.push(p);
            };
            let roots = rational_roots(&coeffs)?;
            if roots.len() + 1 != coeffs.len() {
                return Err(Error::NotSplit("central element without a split square-free minimal polynomial".into()));
            }
            for (i, l) in roots.iter().enumerate() {
                let mut f = e.clone();
                for (j, m) in roots.iter().enumerate() {
                    if i != j {
                        let shifted = linalg::sub(&w, &linalg::scale(&Scalar::from_rational(m.clone()), &e));
                        let c = Scalar::from_rational((l - m).recip());
                        f = linalg::scale(&c, &a.mul(&f, &shifted));
                    }
                }
                next.push(f);
            }
        }
        idem = next;
    }
    Ok(idem)
}

fn int_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.checked_mul(r) == Some(n)).then_some(r)
}

fn ideal_dim(a: &FiniteAlgebra, left: &[(usize, Scalar)], right: &[(usize, Scalar)]) -> usize {
    let cols: Vec<SparseVec> = (0..a.dim()).map(|x| a.mul_all(&[&left.to_vec(), &linalg::unit(x), &right.to_vec()])).collect();
    linalg::rank(a.dim(), &cols)
}

/// Blocks of `a`: idempotents and matrix ranks.
pub fn blocks(a: &FiniteAlgebra) -> Result<(Vec<SparseVec>, BratteliFloor)> {
    let idem = central_idempotents(a)?;
    let mut ranks = Vec::new();
    for e in &idem {
        let d = ideal_dim(a, e, a.unit()) as u64;
        ranks.push(int_sqrt(d).ok_or_else(|| Error::NotSplit(format!("block of dimension {d}")))?);
    }
    let floor = BratteliFloor::unlabeled(&ranks)?;
    Ok((idem, floor))
}

/// Bratteli data of a unital algebra map `φ: B → A` between split semisimple
/// algebras. Blocks of `B` killed by `φ` get zero rows.
pub fn inclusion_matrix(b: &FiniteAlgebra, a: &FiniteAlgebra, phi: &LinearMap) -> Result<InclusionStep> {
    if phi.apply(b.unit()) != *a.unit() {
        return Err(Error::Shape("map is not unital".into()));
    }
    let (eb, fb) = blocks(b)?;
    let (ea, fa) = blocks(a)?;
    let mut matrix = Vec::new();
    for (e, n) in eb.iter().zip(&fb.ranks) {
        let pe = phi.apply(e);
        let mut row = Vec::new();
        for (z, m) in ea.iter().zip(&fa.ranks) {
            let d = ideal_dim(a, &pe, z) as u64;
            if d % (n * m) != 0 {
                return Err(Error::NotSplit("multiplicity is not an integer".into()));
            }
            row.push(d / (n * m));
        }
        matrix.push(row);
    }
    // killed blocks keep their row but do not count in the rank equation
    let lower_eff: Vec<u64> = fb.ranks.iter().zip(&matrix).map(|(r, row)| if row.iter().all(|&x| x == 0) { 0 } else { *r }).collect();
    let step = InclusionStep { lower: fb, upper: fa, matrix };
    if step.pushed_ranks(&lower_eff) != step.upper.ranks {
        return Err(Error::InconsistentRanks("block multiplicities".into()));
    }
    Ok(step)
}

/// `η: R ⊗ R^op → L`, `r ⊗ r̄′ ↦ s(r)t(r′)`.
pub fn enveloping_map(b: &Based) -> (FiniteAlgebra, LinearMap) {
    let re = enveloping(&b.base);
    let nr = b.base.dim();
    let t = b.target();
    let cols = (0..nr * nr).map(|k| b.h.mul(&b.source.cols[k / nr], &t.cols[k % nr])).collect();
    (re, LinearMap { dom: nr * nr, cod: b.dim(), cols })
}

pub fn enveloping_inclusion(b: &Based) -> Result<InclusionStep> {
    let (re, eta) = enveloping_map(b);
    inclusion_matrix(&re, &b.h.algebra, &eta)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn sorted_columns(m: &Matrix, rows: &[usize], cols: usize) -> Vec<Vec<u64>> {
    let mut c: Vec<Vec<u64>> = (0..cols).map(|j| rows.iter().map(|&i| m[i][j]).collect()).collect();
    c.sort();
    c
}

/// Compares the Bratteli diagrams of `R^e → L` and `S^e → L̃` up to
/// relabelling of components, and the ranks of `L̃` with the prediction
/// from the lower ranks of `S^e`.
pub fn bratteli_invariance(bc: &BaseChange) -> Result<Report> {
    let before = enveloping_inclusion(&bc.input)?;
    let after = enveloping_inclusion(&bc.based)?;
    let mut rep = Report::new("Bratteli diagram under base change");
    let same_shape = before.lower.len() == after.lower.len() && before.upper.len() == after.upper.len();
    rep.check("component counts", same_shape, || format!("{:?} vs {:?}", before.matrix, after.matrix));
    if !same_shape || before.lower.len() > 8 {
        return Ok(rep);
    }
    let cols = before.upper.len();
    let target = sorted_columns(&after.matrix, &(0..after.lower.len()).collect::<Vec<_>>(), cols);
    let matched = permutations(before.lower.len()).into_iter().find(|p| sorted_columns(&before.matrix, p, cols) == target);
    rep.check("inclusion matrix preserved", matched.is_some(), || format!("{} vs {}", matrix_text(&before.matrix), matrix_text(&after.matrix)));
    let predicted = after.pushed_ranks(&after.lower.ranks.iter().zip(&after.matrix).map(|(r, row)| if row.iter().all(|&x| x == 0) { 0 } else { *r }).collect::<Vec<_>>());
    rep.check("upper ranks from new lower ranks", predicted == after.upper.ranks, || format!("{predicted:?} vs {:?}", after.upper.ranks));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_multimatrix;
    use crate::morita::{amplify, canonical_context};
    use crate::weak::Groupoid;

    fn fl(r: &[u64]) -> BratteliFloor {
        BratteliFloor::unlabeled(r).unwrap()
    }

    #[test]
    fn pairing_counts_are_catalan() {
        // oracle: binomial formula C(2k,k)/(k+1)
        for k in 1..=6usize {
            let b = (0..k as u64).fold(1u64, |c, i| c * (2 * k as u64 - i) / (i + 1));
            assert_eq!(planar_pairings(k).len() as u64, b / (k as u64 + 1));
            assert_eq!(catalan(k), b / (k as u64 + 1));
        }
    }

    #[test]
    fn three_strand_relations() {
        let tl = tl_algebra(3, 3).unwrap();
        assert_eq!(tl.algebra.dim(), 5);
        let a = &tl.algebra;
        let u: Vec<SparseVec> = tl.generators.iter().map(|e| linalg::scale(&tl.delta, e)).collect();
        assert_eq!(a.mul_all(&[&u[0], &u[1], &u[0]]), u[0]);
        assert_eq!(a.mul(&u[0], &u[0]), linalg::scale(&tl.delta, &u[0]));
        assert!(verify_tl(&tl).passed());
    }

    #[test]
    fn both_indices_verify_up_to_five_strands() {
        for n in [2, 3] {
            for k in 1..=5 {
                let tl = tl_algebra(n, k).unwrap();
                let rep = verify_tl(&tl);
                assert!(rep.passed(), "n={n} k={k}: {rep}");
            }
        }
    }

    #[test]
    fn errors_for_bad_parameters() {
        assert!(matches!(tl_algebra(4, 3), Err(Error::UnsupportedIndex(4))));
        assert!(matches!(tl_algebra(3, 7), Err(Error::TooManyStrands(7))));
        assert!(matches!(tower(5, 3), Err(Error::UnsupportedIndex(5))));
    }

    #[test]
    fn basic_construction_examples() {
        let s = InclusionStep::new(fl(&[2, 1]), fl(&[2, 3, 1]), vec![vec![1, 1, 0], vec![0, 1, 1]]).unwrap();
        let b1 = basic_construction_step(&s).unwrap();
        assert_eq!(b1.upper.ranks, vec![5, 4]);
        assert_eq!(b1.matrix, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        let b2 = basic_construction_step(&b1).unwrap();
        assert_eq!(b2.upper.ranks, vec![5, 9, 4]);
        assert_eq!(b2.upper.dim(), 122);
        let id = InclusionStep::identity(fl(&[3, 1]));
        assert_eq!(basic_construction_step(&id).unwrap().upper, id.upper);
        let bad = InclusionStep { lower: fl(&[2]), upper: fl(&[3]), matrix: vec![vec![1]] };
        assert!(matches!(basic_construction_step(&bad), Err(Error::InconsistentRanks(_))));
    }

    #[test]
    fn compose_examples() {
        let t = tower(3, 5).unwrap();
        let c = compose_steps(&compose_steps(&t[1], &t[2]).unwrap(), &t[3]).unwrap();
        assert_eq!(c.matrix, vec![vec![2, 3, 1], vec![1, 3, 2]]);
        let id = InclusionStep::identity(c.upper.clone());
        assert_eq!(compose_steps(&c, &id).unwrap(), c);
        assert!(matches!(compose_steps(&t[0], &t[2]), Err(Error::FloorMismatch(_))));
    }

    #[test]
    fn tower_three() {
        let t = tower(3, 5).unwrap();
        let dims: Vec<u64> = floors(&t).iter().map(|f| f.dim()).collect();
        assert_eq!(dims, vec![2, 5, 14, 41, 122]);
        assert!(catalan_cross_check(3, &t).unwrap().passed());
        assert_eq!(t[1].matrix, vec![vec![1, 1, 0], vec![0, 1, 1]]);
    }

    #[test]
    fn tower_two() {
        let d = subfactor_data(2).unwrap();
        assert_eq!(d.h().ranks, vec![2, 3]);
        assert_eq!(d.h().dim(), 13);
        assert_eq!(d.h_t().ranks, vec![1, 1]);
        assert_eq!(d.reduced().unwrap().upper.dim(), 13);
        assert!(catalan_cross_check(2, &d.tower).unwrap().passed());
    }

    #[test]
    fn middle_inference_three() {
        let d = subfactor_data(3).unwrap();
        assert_eq!(d.bottom.matrix, vec![vec![2, 1, 0, 0], vec![0, 0, 2, 1]]);
        assert_eq!(d.swaps, vec![(1, 2)]);
        assert_eq!(d.middle.len(), 1);
        let want = vec![vec![1, 0, 0, 1], vec![1, 1, 1, 1], vec![0, 1, 1, 0]];
        assert_eq!(transpose(&d.middle[0].matrix, 3), want);
        let r = d.reduced().unwrap();
        assert_eq!(r.upper.ranks, vec![2, 4, 2]);
        assert_eq!(r.upper.dim(), 24);
    }

    #[test]
    fn middle_inference_edge_cases() {
        let one = InclusionStep::identity(fl(&[2]));
        let sols = infer_middle_inclusion(&one, &one, &[]).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].matrix, vec![vec![1]]);
        let d = subfactor_data(3).unwrap();
        let mut bad = d.composite.clone();
        bad.matrix[0][0] = 3;
        assert!(matches!(infer_middle_inclusion(&d.bottom, &bad, &d.swaps), Err(Error::NoSolution)));
    }

    #[test]
    fn base_change_keeps_matrix() {
        let d = subfactor_data(3).unwrap();
        let m = &d.middle[0];
        assert_eq!(bratteli_base_change(m, &m.lower.ranks).unwrap(), *m);
        assert_eq!(bratteli_base_change(m, &[1, 1, 1, 1]).unwrap().matrix, m.matrix);
    }

    #[test]
    fn emission() {
        let d = subfactor_data(3).unwrap();
        let t = tower_table(&d, false).unwrap();
        assert_eq!(t.lines().last(), Some("dim H = 122"));
        let t = tower_table(&d, true).unwrap();
        assert_eq!(t.lines().last(), Some("dim H̃ = 24"));
        let dot = tower_dot(&d, false).unwrap();
        assert_eq!(dot.matches("f3_1 -- f4_1").count(), 1);
        assert!(dot.contains("label=\"9\""));
    }

    #[test]
    fn blocks_of_multimatrix_and_tl() {
        let m = make_multimatrix(&[2, 1, 3]).unwrap();
        let (_, f) = blocks(m.algebra()).unwrap();
        let mut r = f.ranks.clone();
        r.sort();
        assert_eq!(r, vec![1, 2, 3]);
        // TL_3 at β = 3 is semisimple with blocks of ranks 2 and 1
        let tl = tl_algebra(3, 3).unwrap();
        let (_, f) = blocks(&tl.algebra).unwrap();
        let mut r = f.ranks.clone();
        r.sort();
        assert_eq!(r, vec![1, 2]);
    }

    #[test]
    fn invariance_for_amplified_groupoids() {
        let cases = [(Groupoid::pair(2), vec![2, 1]), (Groupoid::pair(1).disjoint_union(&Groupoid::pair(1)), vec![1, 2])];
        for (g, blocks) in cases {
            let b = crate::morita::tests::groupoid_over_kn(&g);
            let ctx = canonical_context(&make_multimatrix(&blocks).unwrap()).unwrap();
            let amp = amplify(&b, &ctx).unwrap();
            let rep = bratteli_invariance(&amp).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }
}
