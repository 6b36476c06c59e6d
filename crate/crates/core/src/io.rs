//! JSON documents with a `"kind"` discriminator, their loading into library
//! objects, and the verification suite matching each kind.

use serde::{Deserialize, Serialize};

use crate::algebra::{make_multimatrix, verify_algebra, FiniteAlgebra};
use crate::bimodule::Bimodule;
use crate::duality::{evaluation_pairing, verify_skew_pairing, SkewPairing};
use crate::error::{Error, Result};
use crate::frobenius::Frobenius;
use crate::linalg::{self, Accum, LinearMap, SparseVec};
use crate::morita::{canonical_context, trivial_context, verify_context, MoritaContext};
use crate::report::Report;
use crate::scalar::Scalar;
use crate::towers::{self, BratteliFloor, InclusionStep, Matrix};
use crate::weak::{
    counital_subalgebras, groupoid_weak_hopf, hopf_beta_check, is_face_algebra, takeuchi_report, verify_antipode, verify_counital,
    verify_weak_bialgebra, Antipode, Arrow, Based, Groupoid, WeakBialgebra,
};

/// A scalar as written in a file: an integer or text such as `"1/2+1/2*sqrt(5)"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ScalarText {
    Int(i64),
    Text(String),
}

impl From<&Scalar> for ScalarText {
    fn from(c: &Scalar) -> Self {
        match c.to_integer().and_then(|n| i64::try_from(n).ok()) {
            Some(n) => ScalarText::Int(n),
            None => ScalarText::Text(c.to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Quadratic { d: u32 },
}

pub type Entry3 = (usize, usize, usize, ScalarText);
pub type Entry2 = (usize, usize, ScalarText);

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
    /// Coordinates of the unit.
    pub unit: Vec<ScalarText>,
    /// `e_i e_j ∋ c e_k`.
    pub mult: Vec<Entry3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseFile {
    pub algebra: AlgebraFile,
    /// `s(e_r) ∋ c e_h`.
    pub source: Vec<Entry2>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakFile {
    pub algebra: AlgebraFile,
    /// `Δ(e_i) ∋ c e_j ⊗ e_k`.
    pub comult: Vec<Entry3>,
    pub counit: Vec<ScalarText>,
    /// `S(e_i) ∋ c e_j`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipode: Option<Vec<Entry2>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowFile {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

/// Either a shorthand (`pair`, `cyclic`, `union`) or the full tables.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub union: Option<Vec<GroupoidFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objects: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrows: Option<Vec<ArrowFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compose: Option<Vec<(usize, usize, usize)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverses: Option<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlgebraRef {
    Name(String),
    Inline(Box<AlgebraFile>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BimoduleFile {
    pub left: AlgebraRef,
    pub right: AlgebraRef,
    pub dim: usize,
    /// `e_i · v_m ∋ c v_m'`.
    pub left_action: Vec<Entry3>,
    /// `v_m · e_j ∋ c v_m'`.
    pub right_action: Vec<Entry3>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Blocks {
    pub blocks: Vec<usize>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<Blocks>,
    /// The base of the input, with itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trivial: Option<bool>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<AlgebraFile>,
    #[serde(rename = "S", default, skip_serializing_if = "Option::is_none")]
    pub s: Option<AlgebraFile>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    pub p: Option<BimoduleFile>,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<BimoduleFile>,
    /// `f(p ⊗ q) ∋ c s_k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Entry3>>,
    /// `g(q ⊗ p) ∋ c r_k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Entry3>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_r: Option<Vec<ScalarText>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi_s: Option<Vec<ScalarText>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingFile {
    /// Shorthand for the evaluation pairing of this weak bialgebra.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Box<WeakFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Box<WeakFile>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Box<WeakFile>>,
    /// `τ(x|y) ∋ c r_k` as `[x, y, k, c]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<Vec<Entry3>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TowerFile {
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub up_to: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InclusionFile {
    pub lower: Vec<u64>,
    pub upper: Vec<u64>,
    /// Rows are lower components.
    pub matrix: Matrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub new_lower: Option<Vec<u64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Document {
    Algebra(AlgebraFile),
    WeakBialgebra(WeakFile),
    Groupoid(GroupoidFile),
    Context(ContextFile),
    Pairing(PairingFile),
    Tower(TowerFile),
    Inclusion(InclusionFile),
}

pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

/// Pretty JSON with arrays of scalars kept on one line.
pub fn to_json(doc: &Document) -> String {
    let v = serde_json::to_value(doc).expect("documents serialize");
    let mut s = String::new();
    write_value(&v, 0, &mut s);
    s.push('\n');
    s
}

fn write_value(v: &serde_json::Value, indent: usize, out: &mut String) {
    use serde_json::Value;
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in m.iter().enumerate() {
                out.push_str(&format!("{}{}: ", pad(indent + 1), Value::String(k.clone())));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}}}", pad(indent)));
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.as_array().is_some_and(|y| y.iter().any(|z| z.is_array() || z.is_object()))) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(x, indent + 1, out);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}]", pad(indent)));
        }
        Value::Array(a) if a.iter().any(Value::is_array) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&format!("{}{}", pad(indent + 1), x));
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&format!("{}]", pad(indent)));
        }
        _ => out.push_str(&v.to_string()),
    }
}

fn bad(at: &str, what: impl std::fmt::Display) -> Error {
    Error::Malformed(format!("{at}: {what}"))
}

fn scalar(t: &ScalarText, field: Option<u32>, at: &str) -> Result<Scalar> {
    let c = match t {
        ScalarText::Int(n) => Scalar::from_int(*n),
        ScalarText::Text(s) => Scalar::parse(s).map_err(|e| bad(at, e))?,
    };
    if !c.is_rational() && field != Some(c.field()) {
        return Err(bad(at, format!("{c} lies outside the declared field")));
    }
    Ok(c)
}

fn field_of(spec: &Option<FieldSpec>, at: &str) -> Result<Option<u32>> {
    match spec {
        None => Ok(None),
        Some(FieldSpec::Named(n)) if n == "rational" => Ok(None),
        Some(FieldSpec::Named(n)) => Err(bad(at, format!("unknown field {n:?}"))),
        Some(FieldSpec::Quadratic { d }) => Scalar::sqrt(*d).map(|_| Some(*d)).map_err(|e| bad(at, e)),
    }
}

fn check_index(i: usize, bound: usize, at: &str) -> Result<()> {
    if i >= bound {
        return Err(bad(at, format!("index {i} out of range (< {bound})")));
    }
    Ok(())
}

fn dense(v: &[ScalarText], n: usize, field: Option<u32>, at: &str) -> Result<Vec<Scalar>> {
    if v.len() != n {
        return Err(bad(at, format!("expected {n} entries, found {}", v.len())));
    }
    v.iter().enumerate().map(|(i, t)| scalar(t, field, &format!("{at}[{i}]"))).collect()
}

/// `out[a * nb + b] ∋ c e_k` from `[a, b, k, c]`.
fn table3(entries: &[Entry3], (na, nb, nk): (usize, usize, usize), field: Option<u32>, at: &str) -> Result<Vec<SparseVec>> {
    let mut acc = vec![Accum::new(); na * nb];
    for (n, (a, b, k, c)) in entries.iter().enumerate() {
        let here = format!("{at}[{n}]");
        check_index(*a, na, &here)?;
        check_index(*b, nb, &here)?;
        check_index(*k, nk, &here)?;
        acc[a * nb + b].add(*k, &scalar(c, field, &here)?);
    }
    Ok(acc.into_iter().map(Accum::finish).collect())
}

fn table2(entries: &[Entry2], (na, nk): (usize, usize), field: Option<u32>, at: &str) -> Result<Vec<SparseVec>> {
    table3(&entries.iter().map(|(a, k, c)| (*a, 0, *k, c.clone())).collect::<Vec<_>>(), (na, 1, nk), field, at)
}

pub fn load_algebra(f: &AlgebraFile, at: &str) -> Result<FiniteAlgebra> {
    let field = field_of(&f.field, &format!("{at}.field"))?;
    let n = f.dim;
    let labels = if f.labels.is_empty() {
        (0..n).map(|i| format!("e{i}")).collect()
    } else if f.labels.len() == n {
        f.labels.clone()
    } else {
        return Err(bad(&format!("{at}.labels"), format!("expected {n} labels")));
    };
    let mult = table3(&f.mult, (n, n, n), field, &format!("{at}.mult"))?;
    let unit = linalg::from_dense(&dense(&f.unit, n, field, &format!("{at}.unit"))?);
    FiniteAlgebra::new(labels, mult, unit).map_err(|e| bad(at, e))
}

fn algebra_field(a: &FiniteAlgebra) -> Option<FieldSpec> {
    a.entries().iter().find(|e| !e.3.is_rational()).map(|e| FieldSpec::Quadratic { d: e.3.field() })
}

fn text_entries3(entries: impl IntoIterator<Item = (usize, usize, usize, Scalar)>) -> Vec<Entry3> {
    entries.into_iter().map(|(a, b, k, c)| (a, b, k, ScalarText::from(&c))).collect()
}

fn text_dense(v: &[Scalar]) -> Vec<ScalarText> {
    v.iter().map(ScalarText::from).collect()
}

pub fn algebra_file(a: &FiniteAlgebra) -> AlgebraFile {
    AlgebraFile {
        dim: a.dim(),
        labels: a.labels().to_vec(),
        unit: text_dense(&linalg::to_dense(a.unit(), a.dim())),
        mult: text_entries3(a.entries()),
        field: algebra_field(a),
    }
}

fn map_entries(m: &LinearMap) -> Vec<Entry2> {
    m.cols.iter().enumerate().flat_map(|(a, col)| col.iter().map(move |(k, c)| (a, *k, ScalarText::from(c)))).collect()
}

pub fn weak_file(b: &Based) -> WeakFile {
    let h = &b.h;
    let mut algebra = algebra_file(&h.algebra);
    let irr = h.comult_entries().iter().chain(b.base.entries().iter()).find(|e| !e.3.is_rational()).map(|e| e.3.field());
    if algebra.field.is_none() {
        algebra.field = irr.map(|d| FieldSpec::Quadratic { d });
    }
    let mut base = algebra_file(&b.base);
    if base.field.is_none() {
        base.field = algebra.field.clone();
    }
    WeakFile {
        algebra,
        comult: text_entries3(h.comult_entries()),
        counit: text_dense(h.counit()),
        antipode: None,
        base: Some(BaseFile { algebra: base, source: map_entries(&b.source) }),
    }
}

/// A loaded weak bialgebra; the base is resolved only once the axioms hold.
#[derive(Clone, Debug)]
pub struct LoadedWeak {
    pub h: WeakBialgebra,
    pub base: Option<(FiniteAlgebra, LinearMap)>,
    pub antipode: Option<Antipode>,
}

impl LoadedWeak {
    pub fn based(&self) -> Result<Based> {
        match &self.base {
            Some((r, s)) => Based::new(self.h.clone(), r.clone(), s.clone()),
            None => default_base(&self.h),
        }
    }
}

/// `H_t` with its extracted basis, or `k^n` in its idempotent basis when
/// `H_t` is commutative and split.
pub fn default_base(h: &WeakBialgebra) -> Result<Based> {
    let canon = Based::canonical(h.clone())?;
    if canon.base.is_commutative() {
        if let Ok(idem) = towers::central_idempotents(&canon.base) {
            if idem.len() == canon.base.dim() {
                let kn = make_multimatrix(&vec![1; idem.len()])?;
                let src = LinearMap { dom: idem.len(), cod: h.dim(), cols: idem.iter().map(|e| canon.source.apply(e)).collect() };
                return Based::new(h.clone(), kn.algebra().clone(), src);
            }
        }
    }
    Ok(canon)
}

pub fn load_weak(f: &WeakFile, at: &str) -> Result<LoadedWeak> {
    let algebra = load_algebra(&f.algebra, &format!("{at}.algebra"))?;
    let field = field_of(&f.algebra.field, at)?;
    let n = algebra.dim();
    let comult = table2(
        &f.comult.iter().map(|(i, j, k, c)| (*i, j * n + k, c.clone())).collect::<Vec<_>>(),
        (n, n * n),
        field,
        &format!("{at}.comult"),
    )?;
    for (m, (_, j, k, _)) in f.comult.iter().enumerate() {
        check_index(*j, n, &format!("{at}.comult[{m}]"))?;
        check_index(*k, n, &format!("{at}.comult[{m}]"))?;
    }
    let counit = dense(&f.counit, n, field, &format!("{at}.counit"))?;
    let h = WeakBialgebra::new(algebra, comult, counit).map_err(|e| bad(at, e))?;
    let antipode = match &f.antipode {
        Some(s) => Some(Antipode { map: LinearMap { dom: n, cod: n, cols: table2(s, (n, n), field, &format!("{at}.antipode"))? } }),
        None => None,
    };
    let base = match &f.base {
        Some(b) => {
            let r = load_algebra(&b.algebra, &format!("{at}.base.algebra"))?;
            let cols = table2(&b.source, (r.dim(), n), field, &format!("{at}.base.source"))?;
            let dom = r.dim();
            Some((r, LinearMap { dom, cod: n, cols }))
        }
        None => None,
    };
    Ok(LoadedWeak { h, base, antipode })
}

pub fn load_groupoid(f: &GroupoidFile, at: &str) -> Result<Groupoid> {
    if let Some(n) = f.pair {
        return Ok(Groupoid::pair(n));
    }
    if let Some(n) = f.cyclic {
        return Ok(Groupoid::cyclic(n));
    }
    if let Some(parts) = &f.union {
        let mut it = parts.iter().enumerate().map(|(i, p)| load_groupoid(p, &format!("{at}.union[{i}]")));
        let first = it.next().ok_or_else(|| bad(&format!("{at}.union"), "empty union"))??;
        return it.try_fold(first, |acc, g| Ok(acc.disjoint_union(&g?)));
    }
    let missing = |name: &str| bad(at, format!("missing field `{name}` (or a shorthand `pair`, `cyclic`, `union`)"));
    let objects = f.objects.clone().ok_or_else(|| missing("objects"))?;
    let arrows = f.arrows.as_ref().ok_or_else(|| missing("arrows"))?;
    let compose = f.compose.clone().ok_or_else(|| missing("compose"))?;
    let inverses = f.inverses.clone().ok_or_else(|| missing("inverses"))?;
    for (i, a) in arrows.iter().enumerate() {
        check_index(a.src, objects.len(), &format!("{at}.arrows[{i}].src"))?;
        check_index(a.tgt, objects.len(), &format!("{at}.arrows[{i}].tgt"))?;
    }
    for (i, (a, b, c)) in compose.iter().enumerate() {
        for x in [a, b, c] {
            check_index(*x, arrows.len(), &format!("{at}.compose[{i}]"))?;
        }
    }
    for (i, (a, b)) in inverses.iter().enumerate() {
        for x in [a, b] {
            check_index(*x, arrows.len(), &format!("{at}.inverses[{i}]"))?;
        }
    }
    let arrows = arrows.iter().map(|a| Arrow { name: a.name.clone(), src: a.src, tgt: a.tgt }).collect();
    Ok(Groupoid { objects, arrows, compose, inverses })
}

fn resolve<'a>(r: &'a AlgebraRef, known: &'a [(&str, &FiniteAlgebra)], at: &str) -> Result<FiniteAlgebra> {
    match r {
        AlgebraRef::Name(n) => known.iter().find(|(k, _)| k == n).map(|(_, a)| (*a).clone()).ok_or_else(|| bad(at, format!("unknown algebra {n:?}"))),
        AlgebraRef::Inline(f) => load_algebra(f, at),
    }
}

fn load_bimodule(f: &BimoduleFile, known: &[(&str, &FiniteAlgebra)], field: Option<u32>, at: &str) -> Result<Bimodule> {
    let left = resolve(&f.left, known, &format!("{at}.left"))?;
    let right = resolve(&f.right, known, &format!("{at}.right"))?;
    let la = table3(&f.left_action, (left.dim(), f.dim, f.dim), field, &format!("{at}.left_action"))?;
    let ra = table3(&f.right_action, (f.dim, right.dim(), f.dim), field, &format!("{at}.right_action"))?;
    Bimodule::new(left, right, f.dim, la, ra).map_err(|e| bad(at, e))
}

/// A context file; `trivial` needs the base it will act on.
#[derive(Clone, Debug)]
pub enum LoadedContext {
    Context(Box<MoritaContext>),
    Trivial,
}

impl LoadedContext {
    pub fn for_base(&self, base: &FiniteAlgebra) -> Result<MoritaContext> {
        match self {
            LoadedContext::Context(c) => Ok((**c).clone()),
            LoadedContext::Trivial => Ok(trivial_context(base, Frobenius::normalized(base)?)),
        }
    }
}

pub fn load_context(f: &ContextFile, at: &str) -> Result<LoadedContext> {
    if let Some(b) = &f.canonical {
        if b.blocks.is_empty() || b.blocks.contains(&0) {
            return Err(bad(&format!("{at}.canonical.blocks"), "blocks must be positive"));
        }
        return Ok(LoadedContext::Context(Box::new(canonical_context(&make_multimatrix(&b.blocks)?)?)));
    }
    if f.trivial == Some(true) {
        return Ok(LoadedContext::Trivial);
    }
    let need = |x: bool, name: &str| if x { Ok(()) } else { Err(bad(at, format!("missing field `{name}` (or `canonical`)"))) };
    need(f.r.is_some(), "R")?;
    need(f.s.is_some(), "S")?;
    need(f.p.is_some(), "P")?;
    need(f.q.is_some(), "Q")?;
    need(f.f.is_some(), "f")?;
    need(f.g.is_some(), "g")?;
    let rf = f.r.as_ref().expect("checked");
    let sf = f.s.as_ref().expect("checked");
    let r = load_algebra(rf, &format!("{at}.R"))?;
    let s = load_algebra(sf, &format!("{at}.S"))?;
    let field = field_of(&rf.field, at)?.or(field_of(&sf.field, at)?);
    let known = [("R", &r), ("S", &s)];
    let p = load_bimodule(f.p.as_ref().expect("checked"), &known, field, &format!("{at}.P"))?;
    let q = load_bimodule(f.q.as_ref().expect("checked"), &known, field, &format!("{at}.Q"))?;
    let fm = table3(f.f.as_ref().expect("checked"), (p.dim, q.dim, s.dim()), field, &format!("{at}.f"))?;
    let gm = table3(f.g.as_ref().expect("checked"), (q.dim, p.dim, r.dim()), field, &format!("{at}.g"))?;
    let frob = |psi: &Option<Vec<ScalarText>>, a: &FiniteAlgebra, name: &str| -> Result<Frobenius> {
        match psi {
            Some(v) => Frobenius::from_functional(a, dense(v, a.dim(), field, &format!("{at}.{name}"))?),
            None => Frobenius::normalized(a),
        }
    };
    let frob_r = frob(&f.psi_r, &r, "psi_r")?;
    let frob_s = frob(&f.psi_s, &s, "psi_s")?;
    let (fd, gd) = (p.dim * q.dim, q.dim * p.dim);
    let f_map = LinearMap { dom: fd, cod: s.dim(), cols: fm };
    let g_map = LinearMap { dom: gd, cod: r.dim(), cols: gm };
    Ok(LoadedContext::Context(Box::new(MoritaContext::new(r, s, p, q, f_map, g_map, frob_r, frob_s)?)))
}

pub fn load_pairing(f: &PairingFile, at: &str) -> Result<SkewPairing> {
    if let Some(w) = &f.evaluation {
        let b = load_weak(w, &format!("{at}.evaluation"))?.based()?;
        return evaluation_pairing(&b);
    }
    let (lw, ww, tau) = match (&f.lambda, &f.l, &f.tau) {
        (Some(a), Some(b), Some(t)) => (a, b, t),
        _ => return Err(bad(at, "needs `evaluation`, or all of `lambda`, `l`, `tau`")),
    };
    let lambda = load_weak(lw, &format!("{at}.lambda"))?.based()?;
    let l = load_weak(ww, &format!("{at}.l"))?.based()?;
    let field = field_of(&lw.algebra.field, at)?;
    let t = table3(tau, (lambda.dim(), l.dim(), l.base.dim()), field, &format!("{at}.tau"))?;
    SkewPairing::new(lambda, l, t)
}

/// Everything a document can turn into.
#[derive(Clone, Debug)]
pub enum Loaded {
    Algebra(FiniteAlgebra),
    Weak(Box<LoadedWeak>),
    Groupoid(Groupoid),
    Context(LoadedContext),
    Pairing(Box<SkewPairing>),
    Tower { n: u32, up_to: Option<usize> },
    Inclusion { lower: Vec<u64>, upper: Vec<u64>, matrix: Matrix, new_lower: Option<Vec<u64>> },
}

pub fn load(doc: &Document) -> Result<Loaded> {
    Ok(match doc {
        Document::Algebra(a) => Loaded::Algebra(load_algebra(a, "algebra")?),
        Document::WeakBialgebra(w) => Loaded::Weak(Box::new(load_weak(w, "weak_bialgebra")?)),
        Document::Groupoid(g) => Loaded::Groupoid(load_groupoid(g, "groupoid")?),
        Document::Context(c) => Loaded::Context(load_context(c, "context")?),
        Document::Pairing(p) => Loaded::Pairing(Box::new(load_pairing(p, "pairing")?)),
        Document::Tower(t) => Loaded::Tower { n: t.n, up_to: t.up_to },
        Document::Inclusion(i) => Loaded::Inclusion { lower: i.lower.clone(), upper: i.upper.clone(), matrix: i.matrix.clone(), new_lower: i.new_lower.clone() },
    })
}

/// A verification report plus informational lines that are not axioms.
#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub report: Report,
    pub notes: Vec<String>,
}

fn weak_suite(h: &WeakBialgebra, base: Result<Based>, antipode: Option<&Antipode>) -> Result<Verification> {
    let mut report = Report::new("weak bialgebra");
    let mut notes = Vec::new();
    report.absorb("axioms", verify_weak_bialgebra(h));
    if !report.passed() {
        return Ok(Verification { report, notes });
    }
    report.absorb("counital subalgebras", verify_counital(h, &counital_subalgebras(h)));
    let based = base?;
    notes.push(format!("dim H = {}, dim R = {}", h.dim(), based.base.dim()));
    notes.push(format!("face algebra: {}", is_face_algebra(h)));
    report.absorb("Takeuchi embedding", takeuchi_report(&based)?);
    let (hopf, rank) = hopf_beta_check(&based)?;
    notes.push(format!("β bijective (×_R-Hopf): {hopf} (rank {rank})"));
    if let Some(s) = antipode {
        report.absorb("antipode", verify_antipode(h, s));
        report.check("antipode implies ×_R-Hopf", hopf, || format!("β has rank {rank}"));
    }
    Ok(Verification { report, notes })
}

/// Runs the suite matching the loaded kind.
pub fn verify_loaded(l: &Loaded) -> Result<Verification> {
    match l {
        Loaded::Algebra(a) => Ok(Verification { report: verify_algebra(a), notes: vec![format!("dim = {}", a.dim())] }),
        Loaded::Weak(w) => weak_suite(&w.h, w.based(), w.antipode.as_ref()),
        Loaded::Groupoid(g) => {
            if let Err(e) = g.validate() {
                let mut report = Report::new("groupoid");
                report.check("groupoid axioms", false, || e.to_string());
                return Ok(Verification { report, notes: Vec::new() });
            }
            let (h, s) = groupoid_weak_hopf(g)?;
            let mut v = weak_suite(&h, crate::weak::groupoid_based(g), Some(&s))?;
            v.report.title = "groupoid algebra".into();
            Ok(v)
        }
        Loaded::Context(LoadedContext::Context(c)) => Ok(Verification {
            report: verify_context(c),
            notes: vec![format!("dim R = {}, dim S = {}, dim P = {}, dim Q = {}", c.r.dim(), c.s.dim(), c.p.dim, c.q.dim)],
        }),
        Loaded::Context(LoadedContext::Trivial) => Ok(Verification { report: Report::new("trivial context"), notes: vec!["built from the base of its input".into()] }),
        Loaded::Pairing(p) => Ok(Verification { report: verify_skew_pairing(p), notes: vec![format!("dim Λ = {}, dim L = {}", p.lambda.dim(), p.l.dim())] }),
        Loaded::Tower { n, up_to } => {
            let steps = towers::tower(*n, up_to.unwrap_or(2 * *n as usize - 1))?;
            let report = towers::catalan_cross_check(*n, &steps)?;
            let notes = towers::floors(&steps).iter().enumerate().map(|(i, f)| format!("A_{{1,{}}}: ranks {:?}, dim {}", i + 1, f.ranks, f.dim())).collect();
            Ok(Verification { report, notes })
        }
        Loaded::Inclusion { lower, upper, matrix, .. } => {
            let mut report = Report::new("inclusion");
            let step = BratteliFloor::unlabeled(lower).and_then(|lo| BratteliFloor::unlabeled(upper).and_then(|up| InclusionStep::new(lo, up, matrix.clone())));
            report.check("rank equation", step.is_ok(), || step.as_ref().err().map(|e| e.to_string()).unwrap_or_default());
            Ok(Verification { report, notes: Vec::new() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weak::groupoid_based;

    #[test]
    fn weak_files_round_trip() {
        let b = groupoid_based(&Groupoid::pair(2)).unwrap();
        let text = to_json(&Document::WeakBialgebra(weak_file(&b)));
        let back = match load(&parse_document(&text).unwrap()).unwrap() {
            Loaded::Weak(w) => w.based().unwrap(),
            _ => panic!("kind"),
        };
        assert_eq!(back.h.algebra.entries(), b.h.algebra.entries());
        assert_eq!(back.h.comult_entries(), b.h.comult_entries());
        assert_eq!(back.source, b.source);
        assert_eq!(back.base.entries(), b.base.entries());
    }

    #[test]
    fn quadratic_scalars_survive() {
        let tl = towers::tl_algebra(2, 3).unwrap();
        let f = algebra_file(&tl.algebra);
        assert_eq!(f.field, Some(FieldSpec::Quadratic { d: 5 }));
        let text = to_json(&Document::Algebra(f));
        match load(&parse_document(&text).unwrap()).unwrap() {
            Loaded::Algebra(a) => assert_eq!(a.entries(), tl.algebra.entries()),
            _ => panic!("kind"),
        }
        let rational = text.replace("\"d\": 5", "\"d\": 3");
        assert!(matches!(load(&parse_document(&rational).unwrap()), Err(Error::Malformed(_))));
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = parse_document("").unwrap_err();
        assert!(matches!(e, Error::Malformed(_)));
        let e = parse_document(r#"{"kind":"algebra","dim":1,"unit":[1]}"#).unwrap_err();
        assert!(e.to_string().contains("mult"), "{e}");
        let doc = parse_document(r#"{"kind":"algebra","dim":1,"unit":[1],"mult":[[0,0,3,1]]}"#).unwrap();
        let e = load(&doc).unwrap_err();
        assert!(e.to_string().contains("algebra.mult[0]"), "{e}");
    }

    #[test]
    fn shorthand_documents_verify() {
        for text in [
            r#"{"kind":"groupoid","pair":2}"#,
            r#"{"kind":"groupoid","union":[{"pair":1},{"cyclic":2}]}"#,
            r#"{"kind":"context","canonical":{"blocks":[2,1]}}"#,
            r#"{"kind":"tower","n":3}"#,
            r#"{"kind":"inclusion","lower":[2,1],"upper":[2,3,1],"matrix":[[1,1,0],[0,1,1]]}"#,
        ] {
            let v = verify_loaded(&load(&parse_document(text).unwrap()).unwrap()).unwrap();
            assert!(v.report.passed(), "{text}: {}", v.report);
        }
    }

    #[test]
    fn broken_counit_is_reported() {
        let b = groupoid_based(&Groupoid::pair(2)).unwrap();
        let mut f = weak_file(&b);
        f.counit[1] = ScalarText::Int(5);
        f.base = None;
        let v = verify_loaded(&Loaded::Weak(Box::new(load_weak(&f, "w").unwrap()))).unwrap();
        assert!(!v.report.passed());
        assert!(v.report.failures().iter().any(|c| c.name.contains("counit")), "{}", v.report);
    }

    #[test]
    fn default_base_finds_idempotents() {
        let b = groupoid_based(&Groupoid::pair(3)).unwrap();
        let d = default_base(&b.h).unwrap();
        assert_eq!(d.base.entries(), b.base.entries());
    }

    #[test]
    fn explicit_context_matches_canonical() {
        let c = canonical_context(&make_multimatrix(&[2, 1]).unwrap()).unwrap();
        let bim = |m: &Bimodule, l: &str, r: &str| BimoduleFile {
            left: AlgebraRef::Name(l.into()),
            right: AlgebraRef::Name(r.into()),
            dim: m.dim,
            left_action: text_entries3(m.left_action.iter().enumerate().flat_map(|(k, v)| v.iter().map(move |(o, c)| (k / m.dim, k % m.dim, *o, c.clone())))),
            right_action: text_entries3(
                m.right_action.iter().enumerate().flat_map(|(k, v)| v.iter().map(move |(o, c)| (k / m.right.dim(), k % m.right.dim(), *o, c.clone()))),
            ),
        };
        let lin = |m: &LinearMap, nb: usize| text_entries3(m.cols.iter().enumerate().flat_map(|(k, v)| v.iter().map(move |(o, c)| (k / nb, k % nb, *o, c.clone()))));
        let file = ContextFile {
            r: Some(algebra_file(&c.r)),
            s: Some(algebra_file(&c.s)),
            p: Some(bim(&c.p, "S", "R")),
            q: Some(bim(&c.q, "R", "S")),
            f: Some(lin(&c.f, c.q.dim)),
            g: Some(lin(&c.g, c.p.dim)),
            ..Default::default()
        };
        let text = to_json(&Document::Context(file));
        let loaded = load(&parse_document(&text).unwrap()).unwrap();
        let v = verify_loaded(&loaded).unwrap();
        assert!(v.report.passed(), "{}", v.report);
        match loaded {
            Loaded::Context(LoadedContext::Context(l)) => assert_eq!(l.frob_r.psi, c.frob_r.psi),
            _ => panic!("kind"),
        }
    }
}
