//! Checkers for two sufficient conditions under which a simple module has no
//! right approximation by modules of finite projective dimension.
//!
//! Every condition ends up `Certified` (with replayable evidence), `Refuted`
//! (with a counterexample when one is available) or `Unverified`.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::{subspace, Matrix};
use crate::monomial::{path_pdim, summand_of_radical};
use crate::quiver::{ArrowId, PathWord, VertexId};
use crate::rep::{cyclic_module, pdim, presented_module, InfinityWitness, PdimVerdict, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    NoApproximation,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::NoApproximation => "NoApproximation",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

/// Data that lets a verdict be re-derived independently.
#[derive(Clone, Debug)]
pub enum Evidence {
    /// `Λx ∩ Λy = 0`
    IntersectionZero { x: AlgebraElement, y: AlgebraElement },
    /// the module has the stated finite projective dimension
    FinitePdim { module: Representation, dim: usize },
    /// the module has infinite projective dimension, with a witness
    InfinitePdim { module: Representation, witness: InfinityWitness },
    /// `Λa` is a direct summand of `Je_v`
    RadicalSummand { arrow: PathWord, vertex: VertexId },
    /// the element `x` kills every arrow ending at its source
    KillsIncoming { x: AlgebraElement, vertex: VertexId },
    /// `Jx = 0`
    KilledByRadical { x: AlgebraElement },
    Violation(Box<Condition2Violation>),
    All(Vec<Evidence>),
    Note(String),
}

impl Evidence {
    /// Recomputes the claim from scratch.
    pub fn replay(&self, alg: &Arc<Algebra>, cutoff: usize) -> bool {
        match self {
            Evidence::IntersectionZero { x, y } => alg.left_ideal_intersection(x, y).cols() == 0,
            Evidence::FinitePdim { module, dim } => pdim(module, cutoff.max(*dim + 1), false).finite() == Some(*dim),
            Evidence::InfinitePdim { witness, .. } => match witness {
                InfinityWitness::Cycle(c) => c.verify(alg),
                InfinityWitness::Periodic(p) => p.verify(),
            },
            Evidence::RadicalSummand { arrow, vertex } => {
                radical_summand(alg, arrow, *vertex).unwrap_or(false)
            }
            Evidence::KillsIncoming { x, vertex } => kills_incoming(alg, x, *vertex),
            Evidence::KilledByRadical { x } => killed_by_radical(alg, x),
            Evidence::Violation(v) => v.verify(),
            Evidence::All(parts) => parts.iter().all(|e| e.replay(alg, cutoff)),
            Evidence::Note(_) => true,
        }
    }

    pub fn summary(&self) -> String {
        match self {
            Evidence::IntersectionZero { .. } => "left ideals meet trivially".into(),
            Evidence::FinitePdim { dim, .. } => format!("pdim = {dim}"),
            Evidence::InfinitePdim { witness, .. } => match witness {
                InfinityWitness::Cycle(c) => format!("syzygy cycle of length {}", c.len()),
                InfinityWitness::Periodic(p) => format!("Ω^{} ≅ Ω^{}", p.j, p.k),
            },
            Evidence::RadicalSummand { .. } => "direct summand of the radical".into(),
            Evidence::KillsIncoming { .. } => "annihilates incoming arrows".into(),
            Evidence::KilledByRadical { .. } => "annihilated by the radical".into(),
            Evidence::Violation(_) => "explicit top-element violation".into(),
            Evidence::All(parts) => parts.iter().map(Evidence::summary).collect::<Vec<_>>().join("; "),
            Evidence::Note(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Status {
    Certified(Evidence),
    Refuted {
        detail: String,
        counterexample: Option<Representation>,
        evidence: Option<Evidence>,
    },
    Unverified(String),
}

impl Status {
    pub fn is_certified(&self) -> bool {
        matches!(self, Status::Certified(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Status::Refuted { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Status::Certified(_) => "Certified",
            Status::Refuted { .. } => "Refuted",
            Status::Unverified(_) => "Unverified",
        }
    }

    pub fn detail(&self) -> String {
        match self {
            Status::Certified(e) => e.summary(),
            Status::Refuted { detail, .. } => detail.clone(),
            Status::Unverified(why) => why.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ConditionEntry {
    pub condition: String,
    pub status: Status,
}

#[derive(Clone, Debug)]
pub struct CriterionReport {
    pub criterion: String,
    pub entries: Vec<ConditionEntry>,
    pub verdict: Verdict,
}

impl CriterionReport {
    pub fn entry(&self, condition: &str) -> Option<&ConditionEntry> {
        self.entries.iter().find(|e| e.condition == condition)
    }

    pub fn status_label(&self, condition: &str) -> &'static str {
        self.entry(condition).map_or("missing", |e| e.status.label())
    }

    pub fn json_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "condition": e.condition,
                    "status": e.status.label(),
                    "evidence_ref": e.status.detail(),
                })
                .to_string()
            })
            .collect();
        out.push(json!({ "criterion": self.criterion, "verdict": self.verdict }).to_string());
        out
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(&format!("{:<14} {:<11} {}\n", e.condition, e.status.label(), e.status.detail()));
        }
        s.push_str(&format!("verdict: {}\n", self.verdict));
        s
    }

    /// Replays the evidence of every `Certified` entry and every refutation that carries some.
    pub fn replay(&self, alg: &Arc<Algebra>, cutoff: usize) -> bool {
        self.entries.iter().all(|e| match &e.status {
            Status::Certified(ev) => ev.replay(alg, cutoff),
            Status::Refuted { evidence: Some(ev), .. } => ev.replay(alg, cutoff),
            _ => true,
        })
    }

    /// Process exit code: 0 for a positive verdict, 10 when inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::NoApproximation => 0,
            Verdict::Inconclusive => 10,
        }
    }
}

fn entry(condition: &str, status: Status) -> ConditionEntry {
    ConditionEntry {
        condition: condition.to_string(),
        status,
    }
}

fn pdim_status(module: Representation, cutoff: usize, refute_detail: &str) -> Status {
    match pdim(&module, cutoff, true) {
        PdimVerdict::Finite(dim) => Status::Certified(Evidence::FinitePdim { module, dim }),
        PdimVerdict::Infinite(witness) => Status::Refuted {
            detail: refute_detail.to_string(),
            counterexample: None,
            evidence: Some(Evidence::InfinitePdim { module, witness }),
        },
        PdimVerdict::Unknown(c) => Status::Unverified(format!("syzygies did not terminate within {c} steps")),
    }
}

fn killed_by_radical(alg: &Algebra, x: &AlgebraElement) -> bool {
    (0..alg.quiver().num_arrows()).all(|a| alg.left_mul_arrow(a, x).is_zero())
}

fn kills_incoming(alg: &Algebra, x: &AlgebraElement, vertex: VertexId) -> bool {
    alg.quiver()
        .arrows_into(vertex)
        .all(|a| alg.multiply(x, &alg.arrow_element(a)).is_zero())
}

/// `Λa` is a direct summand of `Je_v`, for an arrow `a` starting at `v`, over any algebra.
pub fn radical_summand(alg: &Algebra, a: &PathWord, vertex: VertexId) -> Result<bool> {
    if alg.is_monomial() {
        return summand_of_radical(alg, a, vertex);
    }
    if a.len() != 1 || a.source != vertex {
        return Ok(false);
    }
    let q = alg.quiver();
    let own = alg.left_ideal(&[alg.path_element(a)]);
    if own.cols() == 0 {
        return Ok(false);
    }
    let rest: Vec<_> = q
        .arrows_from(vertex)
        .filter(|&b| b != a.arrows[0])
        .map(|b| alg.arrow_element(b))
        .collect();
    let rest = alg.left_ideal(&rest);
    let meet = subspace::intersection(&own, &rest);
    Ok(meet.cols() == 0)
}

/// Exact projective dimension of `Λp`, combinatorially when the algebra is monomial.
fn path_ideal_pdim(alg: &Arc<Algebra>, p: &PathWord, cutoff: usize) -> Result<(Representation, PdimVerdict)> {
    let module = crate::monomial::path_module(alg, p)?;
    let verdict = if alg.is_monomial() {
        path_pdim(alg, p)?
    } else {
        pdim(&module, cutoff, true)
    };
    Ok((module, verdict))
}

/// `Λe_s / Λx` for `x ∈ Λe_s`.
fn cyclic_quotient(alg: &Arc<Algebra>, s: VertexId, x: &AlgebraElement) -> Result<Representation> {
    Ok(presented_module(alg, &[s], &[vec![x.clone()]])?.module)
}

/// `x ∈ e_1C ∖ JC` and `y ∈ e_1JC` with `p x = q y`.
#[derive(Clone, Debug)]
pub struct Condition2Violation {
    pub module: Representation,
    pub p: AlgebraElement,
    pub q: AlgebraElement,
    pub vertex: VertexId,
    pub target: VertexId,
    pub x: Vec<Scalar>,
    pub y: Vec<Scalar>,
}

impl Condition2Violation {
    pub fn verify(&self) -> bool {
        let fp = self.module.element_matrix(&self.p, self.vertex, self.target);
        let fq = self.module.element_matrix(&self.q, self.vertex, self.target);
        let rad = &self.module.radical_subspace()[self.vertex];
        fp.mul_vec(&self.x) == fq.mul_vec(&self.y)
            && !subspace::contains(rad, &self.x)
            && subspace::contains(rad, &self.y)
    }
}

/// Searches `C` for a top element `x` of type `e_s` with `px ∈ q·e_sJC`; exact.
pub fn condition2_falsify(
    alg: &Arc<Algebra>,
    p: &PathWord,
    q: &PathWord,
    c: &Representation,
) -> Result<Option<Condition2Violation>> {
    if p.source != q.source || p.target != q.target {
        return Err(Error::EndpointMismatch("p and q must be parallel".into()));
    }
    let (s, t) = (p.source, p.target);
    let (pe, qe) = (alg.path_element(p), alg.path_element(q));
    let fp = c.element_matrix(&pe, s, t);
    let fq = c.element_matrix(&qe, s, t);
    let rad = c.radical_subspace()[s].clone();
    let field = c.field();
    let image_q = fq.mul(&rad);
    let system = fp.hstack(&image_q.scale(&-field.one()));
    let ds = c.dims()[s];
    for col in 0..system.kernel().cols() {
        let k = system.kernel();
        let v = k.column(col);
        let x: Vec<Scalar> = v[..ds].to_vec();
        if subspace::contains(&rad, &x) {
            continue;
        }
        let coeffs = &v[ds..];
        let y = if coeffs.is_empty() {
            vec![field.zero(); ds]
        } else {
            rad.mul_vec(coeffs)
        };
        let out = Condition2Violation {
            module: c.clone(),
            p: pe,
            q: qe,
            vertex: s,
            target: t,
            x,
            y,
        };
        debug_assert!(out.verify());
        return Ok(Some(out));
    }
    Ok(None)
}

#[derive(Clone, Debug)]
pub struct Criterion1Options {
    pub cutoff: usize,
    /// a module of finite projective dimension to test the top condition against
    pub counterexample: Option<Representation>,
}

impl Default for Criterion1Options {
    fn default() -> Self {
        Criterion1Options {
            cutoff: 12,
            counterexample: None,
        }
    }
}

fn package_check(alg: &Arc<Algebra>, p: &PathWord, q: &PathWord, cutoff: usize) -> Result<std::result::Result<Evidence, String>> {
    let mut missing = Vec::new();
    let mut parts = Vec::new();
    if p.len() != 1 {
        missing.push("p is not an arrow");
    }
    if q.len() == 0 || q == p {
        missing.push("q must be a nontrivial path different from p");
    }
    let (pe, qe) = (alg.path_element(p), alg.path_element(q));
    if killed_by_radical(alg, &pe) {
        parts.push(Evidence::KilledByRadical { x: pe.clone() });
    } else {
        missing.push("Jp ≠ 0");
    }
    if kills_incoming(alg, &qe, q.source) {
        parts.push(Evidence::KillsIncoming { x: qe.clone(), vertex: q.source });
    } else {
        missing.push("qJ ≠ 0");
    }
    if !q.is_trivial() {
        let (module, v) = path_ideal_pdim(alg, q, cutoff)?;
        match v {
            PdimVerdict::Finite(dim) => parts.push(Evidence::FinitePdim { module, dim }),
            _ => missing.push("pdim Λq is not known to be finite"),
        }
    }
    let target = PathWord::trivial(p.target);
    let (module, v) = path_ideal_pdim(alg, &target, cutoff)?;
    match v {
        PdimVerdict::Infinite(witness) => parts.push(Evidence::InfinitePdim { module, witness }),
        _ => missing.push("pdim of the simple at the target is not known to be infinite"),
    }
    Ok(if missing.is_empty() {
        Ok(Evidence::All(parts))
    } else {
        Err(missing.join(", "))
    })
}

/// First criterion for two parallel paths `p ≠ q` from `e_1` to `e_2`.
///
/// Entries: `intersection` (`Λp ∩ Λq = 0`), `(i)` (`pdim Λ(p,q) < ∞`),
/// `(ii)` (the top condition, certified through a sufficient package of
/// checks or refuted by a counterexample), `(ii')` (never mechanized) and
/// `(iii)` (`Λp` splits off `Je_1` with infinite projective dimension).
pub fn criterion1_check(
    alg: &Arc<Algebra>,
    p: &PathWord,
    q: &PathWord,
    opts: &Criterion1Options,
) -> Result<CriterionReport> {
    if p.source != q.source || p.target != q.target {
        return Err(Error::EndpointMismatch(format!(
            "{} and {} are not parallel",
            p.display(alg.quiver()),
            q.display(alg.quiver())
        )));
    }
    for path in [p, q] {
        if path.is_trivial() || !alg.path_survives(path) {
            return Err(Error::PathInIdeal(path.display(alg.quiver()).to_string()));
        }
    }
    let s = p.source;
    let (pe, qe) = (alg.path_element(p), alg.path_element(q));
    let mut entries = Vec::new();

    let meet = alg.left_ideal_intersection(&pe, &qe).cols();
    entries.push(entry(
        "intersection",
        if meet == 0 {
            Status::Certified(Evidence::IntersectionZero { x: pe.clone(), y: qe.clone() })
        } else {
            Status::Refuted {
                detail: format!("Λp ∩ Λq has dimension {meet}"),
                counterexample: None,
                evidence: None,
            }
        },
    ));

    let pq = cyclic_module(alg, &[s, s], &[pe.clone(), qe.clone()])?.0;
    entries.push(entry("(i)", pdim_status(pq, opts.cutoff, "Λ(p,q) has infinite projective dimension")));

    let mut cond2 = None;
    let mut sweep: Vec<Representation> = opts.counterexample.iter().cloned().collect();
    sweep.push(Representation::projective(alg, s)?);
    for c in sweep {
        if !pdim(&c, opts.cutoff, true).is_finite() {
            continue;
        }
        if let Some(v) = condition2_falsify(alg, p, q, &c)? {
            cond2 = Some(Status::Refuted {
                detail: format!("a top element x of type e_{} has px ∈ q·JC", alg.quiver().vertex_name(s)),
                counterexample: Some(c),
                evidence: Some(Evidence::Violation(Box::new(v))),
            });
            break;
        }
    }
    let cond2 = match cond2 {
        Some(st) => st,
        None => match package_check(alg, p, q, opts.cutoff)? {
            Ok(ev) => Status::Certified(ev),
            Err(why) => Status::Unverified(format!("sufficient checks failed: {why}")),
        },
    };
    entries.push(entry("(ii)", cond2));
    entries.push(entry(
        "(ii')",
        Status::Unverified("needs ker f_p ⊆ ker f_q on all modules of finite projective dimension".into()),
    ));

    let cond3 = if p.len() == 1 && radical_summand(alg, p, s)? {
        let (module, v) = path_ideal_pdim(alg, p, opts.cutoff)?;
        match v {
            PdimVerdict::Infinite(witness) => Status::Certified(Evidence::All(vec![
                Evidence::RadicalSummand { arrow: p.clone(), vertex: s },
                Evidence::InfinitePdim { module, witness },
            ])),
            PdimVerdict::Finite(dim) => refute_iii(alg, s, &pe, module, dim, opts.cutoff)?,
            PdimVerdict::Unknown(c) => Status::Unverified(format!("pdim Λp unresolved after {c} syzygies")),
        }
    } else {
        let (module, v) = path_ideal_pdim(alg, p, opts.cutoff)?;
        match v {
            PdimVerdict::Finite(dim) => refute_iii(alg, s, &pe, module, dim, opts.cutoff)?,
            _ => Status::Unverified("Λp is not known to split off the radical".into()),
        }
    };
    entries.push(entry("(iii)", cond3));

    let certified = |name: &str| entries.iter().any(|e| e.condition == name && e.status.is_certified());
    let verdict = if certified("intersection") && certified("(i)") && (certified("(ii)") || (certified("(ii')") && certified("(iii)"))) {
        Verdict::NoApproximation
    } else {
        Verdict::Inconclusive
    };
    Ok(CriterionReport {
        criterion: "criterion-1".into(),
        entries,
        verdict,
    })
}

fn refute_iii(
    alg: &Arc<Algebra>,
    s: VertexId,
    pe: &AlgebraElement,
    module: Representation,
    dim: usize,
    cutoff: usize,
) -> Result<Status> {
    let quotient = cyclic_quotient(alg, s, pe)?;
    let qdim = pdim(&quotient, cutoff, true);
    Ok(Status::Refuted {
        detail: format!("Λp has finite projective dimension {dim}; Λe_1/Λp is a counterexample ({qdim})"),
        counterexample: Some(quotient),
        evidence: Some(Evidence::FinitePdim { module, dim }),
    })
}

/// Vertices `e_1..e_m` with elements `p_j, q_j ∈ J e_j` such that `p_j` and
/// `q_{j+1}` (indices mod m) end at the same vertex.
#[derive(Clone, Debug)]
pub struct ZipperSpec {
    pub vertices: Vec<VertexId>,
    pub p: Vec<AlgebraElement>,
    pub q: Vec<AlgebraElement>,
}

impl ZipperSpec {
    /// One `step <vertex> | <p> | <q>` line per index; `#` starts a comment.
    pub fn parse(alg: &Algebra, text: &str) -> Result<ZipperSpec> {
        let mut spec = ZipperSpec {
            vertices: Vec::new(),
            p: Vec::new(),
            q: Vec::new(),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let Some(rest) = line.strip_prefix("step") else {
                return Err(err(format!("expected `step`, found `{line}`")));
            };
            let fields: Vec<&str> = rest.split('|').map(str::trim).collect();
            let [v, p, q] = fields.as_slice() else {
                return Err(err("expected `step <vertex> | <p> | <q>`".into()));
            };
            let v = alg.quiver().vertex(v).map_err(|e| err(e.to_string()))?;
            spec.vertices.push(v);
            spec.p.push(alg.parse_element(p).map_err(|e| err(e.to_string()))?);
            spec.q.push(alg.parse_element(q).map_err(|e| err(e.to_string()))?);
        }
        if spec.vertices.is_empty() {
            return Err(Error::Invalid("empty zipper specification".into()));
        }
        Ok(spec)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn check(&self, alg: &Algebra) -> std::result::Result<(), String> {
        let m = self.len();
        for j in 0..m {
            let v = self.vertices[j];
            for (name, x) in [("p", &self.p[j]), ("q", &self.q[j])] {
                if x.is_zero() {
                    return Err(format!("{name}_{} is zero in the algebra", j + 1));
                }
                for (i, _) in x.terms() {
                    let path = alg.basis_path(i);
                    if path.source != v || path.is_trivial() {
                        return Err(format!("{name}_{} does not lie in J e_{}", j + 1, alg.quiver().vertex_name(v)));
                    }
                }
            }
            let next = (j + 1) % m;
            let tp = alg.endpoints(&self.p[j]).map(|e| e.1);
            let tq = alg.endpoints(&self.q[next]).map(|e| e.1);
            if tp.is_none() || tp != tq {
                return Err(format!("p_{} and q_{} do not end at a common vertex", j + 1, next + 1));
            }
        }
        Ok(())
    }

    /// `M_n`: generators `x_1..x_{mn}` of types `e_{r(i)}` and relators
    /// `p_{r(i)} x_i - q_{r(i+1)} x_{i+1}`.
    pub fn module(&self, alg: &Arc<Algebra>, n: usize) -> Result<crate::rep::PresentedModule> {
        let m = self.len();
        let total = m * n;
        let gens: Vec<VertexId> = (0..total).map(|i| self.vertices[i % m]).collect();
        let minus = -alg.field().one();
        let relators: Vec<Vec<AlgebraElement>> = (0..total.saturating_sub(1))
            .map(|i| {
                let mut r = vec![AlgebraElement::zero(); total];
                r[i] = self.p[i % m].clone();
                r[i + 1] = self.q[(i + 1) % m].scaled(&minus);
                r
            })
            .collect();
        presented_module(alg, &gens, &relators)
    }
}

fn top_chain_holds(pm: &crate::rep::PresentedModule, spec: &ZipperSpec) -> bool {
    let m = spec.len();
    let total = pm.gens.len();
    let module = &pm.module;
    let rad = module.radical_subspace();
    let mut tops: Vec<Vec<Vec<Scalar>>> = module.dims().iter().map(|_| Vec::new()).collect();
    for k in 0..total {
        let (v, x) = pm.generator(k);
        tops[v].push(x);
    }
    for (v, xs) in tops.iter().enumerate() {
        if xs.is_empty() {
            continue;
        }
        let field = module.field();
        let cols = Matrix::from_columns(field, module.dims()[v], xs).hstack(&rad[v]);
        if cols.rank() != xs.len() + rad[v].cols() {
            return false;
        }
    }
    (0..total.saturating_sub(1)).all(|i| {
        let px = pm.element(i, &spec.p[i % m]);
        px.iter().any(|v| v.iter().any(|c| !c.is_zero()))
    })
}

fn arrow_route(alg: &Arc<Algebra>, x: &AlgebraElement, vertex: VertexId, cutoff: usize) -> Result<Status> {
    let single = match x.terms().collect::<Vec<_>>().as_slice() {
        [(i, c)] if c.is_one() => Some(alg.basis_path(*i).clone()),
        _ => None,
    };
    if let Some(a) = single.filter(|a| a.len() == 1) {
        let (module, v) = path_ideal_pdim(alg, &a, cutoff)?;
        let summand = radical_summand(alg, &a, vertex)?;
        return Ok(match v {
            PdimVerdict::Infinite(witness) if summand => Status::Certified(Evidence::All(vec![
                Evidence::RadicalSummand { arrow: a, vertex },
                Evidence::InfinitePdim { module, witness },
            ])),
            PdimVerdict::Finite(dim) => refute_iii(alg, vertex, x, module, dim, cutoff)?,
            _ => Status::Unverified("the arrow does not split off the radical with infinite projective dimension".into()),
        });
    }
    let module = crate::rep::cyclic_module(alg, &[vertex], std::slice::from_ref(x))?.0;
    Ok(match pdim(&module, cutoff, true) {
        PdimVerdict::Finite(dim) => refute_iii(alg, vertex, x, module, dim, cutoff)?,
        _ => Status::Unverified("only single arrows are certified".into()),
    })
}

/// Second criterion, for a cyclic zipper specification.
///
/// `(1)` is certified for every `n` when all `Λp_j ∩ Λq_j = 0` and all
/// `Λ(p_j, q_{j+1})` have finite projective dimension: the kernel of the free
/// cover of `M_n` is then the direct sum of the relator submodules. Otherwise
/// the modules are checked for `n ≤ n_max` only and the entry stays unverified.
pub fn criterion10_check(alg: &Arc<Algebra>, spec: &ZipperSpec, n_max: usize, cutoff: usize) -> Result<CriterionReport> {
    let mut entries = Vec::new();
    if let Err(why) = spec.check(alg) {
        entries.push(entry(
            "precondition",
            Status::Refuted {
                detail: why,
                counterexample: None,
                evidence: None,
            },
        ));
        return Ok(CriterionReport {
            criterion: "criterion-10".into(),
            entries,
            verdict: Verdict::Inconclusive,
        });
    }
    let m = spec.len();
    let mut uniform = Vec::new();
    let mut uniform_ok = true;
    for j in 0..m {
        let next = (j + 1) % m;
        if alg.left_ideal_intersection(&spec.p[j], &spec.q[j]).cols() == 0 {
            uniform.push(Evidence::IntersectionZero {
                x: spec.p[j].clone(),
                y: spec.q[j].clone(),
            });
        } else {
            uniform_ok = false;
        }
        let minus = spec.q[next].scaled(&-alg.field().one());
        let pq = cyclic_module(alg, &[spec.vertices[j], spec.vertices[next]], &[spec.p[j].clone(), minus])?.0;
        match pdim(&pq, cutoff, true) {
            PdimVerdict::Finite(dim) => uniform.push(Evidence::FinitePdim { module: pq, dim }),
            _ => uniform_ok = false,
        }
    }
    let mut failures = Vec::new();
    for n in 1..=n_max {
        let pm = spec.module(alg, n)?;
        if !top_chain_holds(&pm, spec) {
            failures.push(format!("n = {n}: tops or chain elements degenerate"));
        } else if !pdim(&pm.module, cutoff, true).is_finite() {
            failures.push(format!("n = {n}: projective dimension not shown finite"));
        }
    }
    let cond1 = if uniform_ok && failures.is_empty() {
        Status::Certified(Evidence::All(uniform))
    } else if failures.is_empty() {
        Status::Unverified(format!("checked for n ≤ {n_max} only"))
    } else {
        Status::Unverified(failures.join("; "))
    };
    entries.push(entry("(1)", cond1));

    let first = arrow_route(alg, &spec.p[0], spec.vertices[0], cutoff)?;
    entries.push(entry("(2)(i)", first.clone()));

    let mut parts = Vec::new();
    let mut why = Vec::new();
    for j in 0..m {
        let v = spec.vertices[j];
        if kills_incoming(alg, &spec.q[j], v) {
            parts.push(Evidence::KillsIncoming { x: spec.q[j].clone(), vertex: v });
        } else {
            why.push(format!("q_{} does not annihilate the arrows into its source", j + 1));
        }
        let st = if j == 0 { first.clone() } else { arrow_route(alg, &spec.p[j], v, cutoff)? };
        match st {
            Status::Certified(ev) => parts.push(ev),
            other => why.push(format!("p_{}: {}", j + 1, other.detail())),
        }
    }
    entries.push(entry(
        "(2)(ii)",
        if why.is_empty() {
            Status::Certified(Evidence::All(parts))
        } else {
            Status::Unverified(why.join("; "))
        },
    ));
    let verdict = if entries.iter().all(|e| e.status.is_certified()) {
        Verdict::NoApproximation
    } else {
        Verdict::Inconclusive
    };
    Ok(CriterionReport {
        criterion: "criterion-10".into(),
        entries,
        verdict,
    })
}

#[derive(Clone, Debug)]
pub struct SeedReport {
    pub vertex: VertexId,
    pub arrows: Vec<ArrowId>,
    pub witnesses: Vec<Evidence>,
    pub summands: Vec<bool>,
    pub seed: Representation,
    pub seed_pdim: PdimVerdict,
    pub subgraph: String,
}

/// `Λe_v / (J^2 e_v + Σ Λb)` over the arrows `b` from `v` not in `arrows`,
/// after checking that every listed arrow spans a path ideal of infinite
/// projective dimension.
pub fn remark11_seed(alg: &Arc<Algebra>, vertex: VertexId, arrows: &[ArrowId], cutoff: usize) -> Result<SeedReport> {
    if !alg.is_monomial() {
        return Err(Error::NotMonomial);
    }
    let q = alg.quiver();
    let mut targets = Vec::new();
    for &a in arrows {
        let data = q.arrow_data(a);
        if data.source != vertex {
            return Err(Error::EndpointMismatch(format!("{} does not start at the chosen vertex", data.name)));
        }
        if targets.contains(&data.target) {
            return Err(Error::Invalid("the arrows must end at distinct vertices".into()));
        }
        targets.push(data.target);
    }
    let mut finite = Vec::new();
    let mut witnesses = Vec::new();
    let mut summands = Vec::new();
    for &a in arrows {
        let path = PathWord::arrow(q, a);
        match path_pdim(alg, &path)? {
            PdimVerdict::Infinite(witness) => witnesses.push(Evidence::InfinitePdim {
                module: crate::monomial::path_module(alg, &path)?,
                witness,
            }),
            _ => finite.push(q.arrow_data(a).name.clone()),
        }
        summands.push(summand_of_radical(alg, &path, vertex)?);
    }
    if !finite.is_empty() {
        return Err(Error::FinitePdimArrow(finite));
    }
    let mut killed: Vec<AlgebraElement> = alg
        .basis_from(vertex)
        .into_iter()
        .filter(|&i| alg.degree(i) == 2)
        .map(|i| AlgebraElement::basis(i, alg.field()))
        .collect();
    killed.extend(q.arrows_from(vertex).filter(|b| !arrows.contains(b)).map(|b| alg.arrow_element(b)));
    let relators: Vec<Vec<AlgebraElement>> = killed.into_iter().map(|x| vec![x]).collect();
    let seed = presented_module(alg, &[vertex], &relators)?.module;
    let seed_pdim = pdim(&seed, cutoff, true);
    let subgraph = arrows
        .iter()
        .map(|&a| {
            let d = q.arrow_data(a);
            format!("{} --{}--> {}", q.vertex_name(d.source), d.name, q.vertex_name(d.target))
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok(SeedReport {
        vertex,
        arrows: arrows.to_vec(),
        witnesses,
        summands,
        seed,
        seed_pdim,
        subgraph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn example_two_positive() {
        let alg = fixtures::ex2_algebra();
        let q = alg.quiver();
        let (beta, alpha) = (q.parse_path("beta").unwrap(), q.parse_path("alpha").unwrap());
        let rep = criterion1_check(&alg, &beta, &alpha, &Criterion1Options::default()).unwrap();
        assert_eq!(rep.verdict, Verdict::NoApproximation);
        for c in ["intersection", "(i)", "(ii)", "(iii)"] {
            assert!(rep.entry(c).unwrap().status.is_certified(), "{c}");
        }
        assert!(rep.replay(&alg, 12));
        assert_eq!(rep.exit_code(), 0);
    }

    #[test]
    fn swapped_paths_refute_iii() {
        let alg = fixtures::ex2_algebra();
        let q = alg.quiver();
        let (beta, alpha) = (q.parse_path("beta").unwrap(), q.parse_path("alpha").unwrap());
        let rep = criterion1_check(&alg, &alpha, &beta, &Criterion1Options::default()).unwrap();
        assert!(rep.entry("(iii)").unwrap().status.is_refuted());
    }

    #[test]
    fn zipper_spec_parsing() {
        let alg = fixtures::ex2_algebra();
        let spec = ZipperSpec::parse(&alg, "# one step\nstep 1 | beta | alpha\n").unwrap();
        assert_eq!(spec.len(), 1);
        assert_eq!(spec.module(&alg, 3).unwrap().module.dim(), 8);
        assert!(ZipperSpec::parse(&alg, "step 1 | beta\n").is_err());
        let bad = ZipperSpec::parse(&alg, "step 1 | beta | gamma*alpha\n").unwrap();
        let rep = criterion10_check(&alg, &bad, 2, 8).unwrap();
        assert!(rep.entry("precondition").unwrap().status.is_refuted());
    }

    #[test]
    fn seed_requires_infinite_arrows() {
        let alg = fixtures::ex12_algebra();
        let q = alg.quiver();
        assert!(matches!(
            remark11_seed(&alg, 0, &[q.arrow("beta").unwrap()], 8),
            Err(Error::FinitePdimArrow(_))
        ));
        let rep = remark11_seed(&alg, 0, &[q.arrow("alpha").unwrap()], 8).unwrap();
        assert_eq!(rep.seed.dims(), &[2, 0, 0, 0]);
    }
}
