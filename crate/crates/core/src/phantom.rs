//! Zipper families, towers of relative approximations and subfactor search.

use std::fmt::Write as _;
use std::sync::Arc;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::algebra::{Algebra, AlgebraElement};
use crate::approx::{
    extend_approximation, factor_through, right_minimize, ApproxCertificate, FamilyGenerator, FiniteCategory,
};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::quiver::VertexId;
use crate::rep::{
    cyclic_module, hom_space, hom_space_killed_by, is_isomorphic, pdim, presented_module, random_combination,
    ModuleMap, PdimVerdict, PresentedModule, Representation,
};
use crate::DEFAULT_SEED;

fn common_endpoints(alg: &Algebra, p: &AlgebraElement, q: &AlgebraElement) -> Result<(VertexId, VertexId)> {
    let ep = alg.endpoints(p);
    let eq = alg.endpoints(q);
    match (ep, eq) {
        (Some(a), Some(b)) if a == b => Ok(a),
        _ => Err(Error::EndpointMismatch(format!(
            "{} and {} must be nonzero and share source and target",
            alg.display_element(p),
            alg.display_element(q)
        ))),
    }
}

/// `N_n = (⊕_{i=1}^n Λb_i) / (p b_i - q b_{i+1})`.
pub fn build_nn(alg: &Arc<Algebra>, p: &AlgebraElement, q: &AlgebraElement, n: usize) -> Result<PresentedModule> {
    if n == 0 {
        return Err(Error::Invalid("n must be positive".into()));
    }
    let (s, _) = common_endpoints(alg, p, q)?;
    let minus_q = q.scaled(&-alg.field().one());
    let relators: Vec<Vec<AlgebraElement>> = (0..n - 1)
        .map(|i| {
            let mut r = vec![AlgebraElement::zero(); n];
            r[i] = p.clone();
            r[i + 1] = minus_q.clone();
            r
        })
        .collect();
    presented_module(alg, &vec![s; n], &relators)
}

#[derive(Clone, Debug, Serialize)]
pub struct NnReport {
    pub n: usize,
    pub intersection_zero: bool,
    pub kernel_split: bool,
    pub summands_iso: bool,
    pub pdim_pq: String,
    pub pdim_nn: String,
    pub pdim_transfer: bool,
}

impl NnReport {
    pub fn holds(&self) -> bool {
        self.intersection_zero && self.kernel_split && self.summands_iso && self.pdim_transfer
    }
}

/// Checks `Ω^1(N_n) ≅ Λ(p,q)^{n-1}` (as an internal direct sum of the relator
/// submodules) and that `pdim N_n < ∞` whenever `pdim Λ(p,q) < ∞`.
pub fn verify_nn_syzygy_split(
    alg: &Arc<Algebra>,
    p: &AlgebraElement,
    q: &AlgebraElement,
    n: usize,
    cutoff: usize,
) -> Result<NnReport> {
    let (s, _) = common_endpoints(alg, p, q)?;
    let nn = build_nn(alg, p, q, n)?;
    let intersection_zero = alg.left_ideal_intersection(p, q).cols() == 0;
    let minus_q = q.scaled(&-alg.field().one());
    let pq = cyclic_module(alg, &[s, s], &[p.clone(), minus_q])?.0;
    let mut parts = Vec::new();
    for r in &nn.relators {
        let single = presented_module(alg, &nn.gens, std::slice::from_ref(r))?;
        parts.push(single.relator_submodule);
    }
    let total: usize = nn.relator_submodule.iter().map(|m| m.cols()).sum();
    let separate: usize = parts.iter().flatten().map(|m| m.cols()).sum();
    let kernel_split = total == separate;
    let mut summands_iso = true;
    for sub in &parts {
        let (c, _) = nn.free.sub_representation(sub)?;
        summands_iso &= is_isomorphic(&c, &pq)?.is_yes();
    }
    let v_pq = pdim(&pq, cutoff, true);
    let v_nn = pdim(&nn.module, cutoff, true);
    let pdim_transfer = !v_pq.is_finite() || v_nn.is_finite();
    Ok(NnReport {
        n,
        intersection_zero,
        kernel_split,
        summands_iso,
        pdim_pq: v_pq.label(),
        pdim_nn: v_nn.label(),
        pdim_transfer,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// no freedom: the connecting map is unique
    Unique,
    /// all coefficient vectors in {-1, 0, 1}^k
    Exhaustive,
    /// randomized coordinate descent on the rank
    Descent,
    /// first solution, no rank search
    FirstSolution,
}

#[derive(Clone, Debug)]
pub struct TowerOptions {
    /// number of `n` steps (each produces `A_{2n-1}` and `A_{2n}`)
    pub budget: usize,
    pub ambient: Option<FiniteCategory>,
    pub seed: u64,
    /// growth is reported when the last `k` values of `dim U` strictly increase
    pub k: usize,
    pub exhaustive_limit: usize,
    /// stop early (budget exhausted) when a stage exceeds this dimension
    pub max_source_dim: usize,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            budget: 4,
            ambient: None,
            seed: DEFAULT_SEED,
            k: 3,
            exhaustive_limit: 4096,
            max_source_dim: 400,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TowerStage {
    pub index: usize,
    pub family: Vec<String>,
    pub cert: ApproxCertificate,
    pub verified: bool,
}

#[derive(Clone, Debug)]
pub struct ConnectingMap {
    pub from: usize,
    pub to: usize,
    pub map: ModuleMap,
    pub mode: SearchMode,
    pub verified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TowerStatus {
    Complete,
    BudgetExhausted,
}

#[derive(Clone, Debug)]
pub struct PhantomTower {
    pub stages: Vec<TowerStage>,
    pub maps: Vec<ConnectingMap>,
    /// `(2n, dim U_{2n})`
    pub u_dims: Vec<(usize, usize)>,
    /// `(2n, g_{2n,2n+1} injective on U_{2n})`
    pub u_stable: Vec<(usize, bool)>,
    pub status: TowerStatus,
    pub k: usize,
}

fn rebase(cert: &ApproxCertificate) -> ApproxCertificate {
    ApproxCertificate {
        family: FiniteCategory::new("rebased"),
        witnesses: Vec::new(),
        right_minimal: false,
        ..cert.clone()
    }
}

fn minimize_rank(
    g0: ModuleMap,
    kernel: &[ModuleMap],
    opts: &TowerOptions,
    rng: &mut ChaCha8Rng,
) -> (ModuleMap, SearchMode) {
    if kernel.is_empty() {
        return (g0, SearchMode::Unique);
    }
    let (src, tgt) = (g0.source().clone(), g0.target().clone());
    let field = src.field();
    let combine = |coeffs: &[i64]| {
        let mut terms: Vec<(Scalar, &ModuleMap)> = vec![(field.one(), &g0)];
        terms.extend(coeffs.iter().zip(kernel).map(|(&c, k)| (field.from_i64(c), k)));
        ModuleMap::combination(&src, &tgt, &terms)
    };
    let exhaustive = (kernel.len() as u32) < 64
        && 3usize.checked_pow(kernel.len() as u32).is_some_and(|n| n <= opts.exhaustive_limit);
    if exhaustive {
        let best = (0..kernel.len())
            .map(|_| [-1i64, 0, 1])
            .multi_cartesian_product()
            .map(|c| combine(&c))
            .min_by_key(ModuleMap::rank)
            .expect("nonempty search space");
        return (best, SearchMode::Exhaustive);
    }
    let mut coeffs = vec![0i64; kernel.len()];
    let mut best = g0.clone();
    let mut best_rank = best.rank();
    for _ in 0..200 {
        if best_rank == 0 {
            break;
        }
        let j = rng.gen_range(0..kernel.len());
        let step = if rng.gen_bool(0.5) { 1 } else { -1 };
        coeffs[j] += step;
        let cand = combine(&coeffs);
        let r = cand.rank();
        if r < best_rank {
            best = cand;
            best_rank = r;
        } else {
            coeffs[j] -= step;
        }
    }
    (best, SearchMode::Descent)
}

fn solve_connecting(
    prev: &ApproxCertificate,
    next: &ApproxCertificate,
    minimize: bool,
    opts: &TowerOptions,
    rng: &mut ChaCha8Rng,
) -> Result<(ModuleMap, SearchMode)> {
    let g0 = factor_through(&next.map, &prev.source, &prev.map)?
        .ok_or_else(|| Error::Invalid("connecting map does not exist".into()))?;
    if !minimize {
        return Ok((g0, SearchMode::FirstSolution));
    }
    let kernel = hom_space_killed_by(&prev.source, &next.map)?;
    Ok(minimize_rank(g0, &kernel, opts, rng))
}

/// Alternating tower `A_1 -> A_2 -> A_3 -> ...` of minimal approximations of `x`:
/// `A_{2n-1}` approximates `{D_n, A_{2n-2}}` and `A_{2n}` approximates
/// `{A_{2n-1}}` (both together with the optional ambient family). The
/// connecting maps `g_{2n-1,2n}` are chosen of minimal rank and
/// `U_{2n} = im g_{2n-1,2n}`.
pub fn phantom_tower(x: &Representation, d: &FamilyGenerator<'_>, opts: &TowerOptions) -> Result<PhantomTower> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let ambient = opts.ambient.clone().unwrap_or_default();
    let mut stages: Vec<TowerStage> = Vec::new();
    let mut maps = Vec::new();
    let mut u_dims = Vec::new();
    let mut u_stable = Vec::new();
    let mut u_prev: Option<crate::rep::VertexSubspace> = None;
    let mut status = TowerStatus::Complete;
    for n in 1..=opts.budget {
        let (dname, dmod) = d(n)?;
        let mut family = ambient.clone();
        let start = match stages.last() {
            Some(prev) => {
                family.push(&format!("A{}", prev.index), prev.cert.source.clone());
                rebase(&prev.cert)
            }
            None => crate::approx::empty_certificate(x),
        };
        family.push(&dname, dmod);
        let odd = right_minimize(&extend_approximation(&start, &family)?, opts.seed ^ (2 * n - 1) as u64)?;
        if let Some(prev) = stages.last() {
            let (g, mode) = solve_connecting(&prev.cert, &odd, false, opts, &mut rng)?;
            if let Some(u) = &u_prev {
                let img = g.image_of(u);
                let stable = img.iter().map(|m| m.cols()).sum::<usize>() == u.iter().map(|m| m.cols()).sum::<usize>();
                u_stable.push((prev.index, stable));
            }
            let verified = odd.map.compose(&g) == prev.cert.map;
            maps.push(ConnectingMap {
                from: prev.index,
                to: 2 * n - 1,
                map: g,
                mode,
                verified,
            });
        }
        let odd_stage = TowerStage {
            index: 2 * n - 1,
            family: family.names(),
            verified: odd.verify(),
            cert: odd,
        };
        let mut even_family = ambient.clone();
        even_family.push(&format!("A{}", 2 * n - 1), odd_stage.cert.source.clone());
        let even = right_minimize(
            &extend_approximation(&rebase(&odd_stage.cert), &even_family)?,
            opts.seed ^ (2 * n) as u64,
        )?;
        let (g, mode) = solve_connecting(&odd_stage.cert, &even, true, opts, &mut rng)?;
        let u = g.image_subspace();
        u_dims.push((2 * n, u.iter().map(|m| m.cols()).sum()));
        u_prev = Some(u);
        let verified = even.map.compose(&g) == odd_stage.cert.map;
        maps.push(ConnectingMap {
            from: 2 * n - 1,
            to: 2 * n,
            map: g,
            mode,
            verified,
        });
        let even_stage = TowerStage {
            index: 2 * n,
            family: even_family.names(),
            verified: even.verify(),
            cert: even,
        };
        let too_big = odd_stage.cert.source_dim().max(even_stage.cert.source_dim()) > opts.max_source_dim;
        stages.push(odd_stage);
        stages.push(even_stage);
        if too_big && n < opts.budget {
            status = TowerStatus::BudgetExhausted;
            break;
        }
    }
    Ok(PhantomTower {
        stages,
        maps,
        u_dims,
        u_stable,
        status,
        k: opts.k,
    })
}

impl PhantomTower {
    pub fn odd_dims(&self) -> Vec<usize> {
        self.stages
            .iter()
            .filter(|s| s.index % 2 == 1)
            .map(|s| s.cert.source_dim())
            .collect()
    }

    /// `dim U` strictly increases over the last `k` recorded values.
    pub fn growth_evidence(&self) -> bool {
        let k = self.k.max(2);
        self.u_dims.len() >= k
            && self.u_dims[self.u_dims.len() - k..]
                .windows(2)
                .all(|w| w[1].1 > w[0].1)
    }

    pub fn all_verified(&self) -> bool {
        self.stages.iter().all(|s| s.verified && s.cert.right_minimal) && self.maps.iter().all(|m| m.verified)
    }

    pub fn json_lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for s in &self.stages {
            out.push(
                json!({
                    "stage": s.index,
                    "dims": s.cert.source.dims(),
                    "dim": s.cert.source_dim(),
                    "family": s.family,
                    "right_minimal": s.cert.right_minimal,
                    "verified": s.verified,
                })
                .to_string(),
            );
        }
        for m in &self.maps {
            out.push(
                json!({
                    "map": format!("g_{},{}", m.from, m.to),
                    "rank": m.map.rank(),
                    "mode": m.mode,
                    "verified": m.verified,
                })
                .to_string(),
            );
        }
        for (i, d) in &self.u_dims {
            let stable = self.u_stable.iter().find(|(j, _)| j == i).map(|(_, s)| *s);
            out.push(json!({ "u": i, "dim": d, "stable": stable }).to_string());
        }
        out.push(
            json!({
                "status": self.status,
                "growth_evidence": self.growth_evidence(),
                "k": self.k,
            })
            .to_string(),
        );
        out
    }

    pub fn dot(&self) -> String {
        let mut s = String::from("digraph tower {\n  rankdir=LR;\n");
        for st in &self.stages {
            writeln!(
                s,
                "  A{} [label=\"A{}\\n{:?}\"];",
                st.index,
                st.index,
                st.cert.source.dims()
            )
            .unwrap();
        }
        s.push_str("  X [shape=box];\n");
        for m in &self.maps {
            writeln!(s, "  A{} -> A{} [label=\"rank {}\"];", m.from, m.to, m.map.rank()).unwrap();
        }
        for st in &self.stages {
            writeln!(s, "  A{} -> X [style=dashed];", st.index).unwrap();
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug)]
pub enum SubfactorVerdict {
    /// `U ⊆ A` generated by `generators`, with a surjection `U -> B`
    Yes {
        generators: Vec<(VertexId, Vec<Scalar>)>,
        submodule: Representation,
        surjection: ModuleMap,
    },
    No(String),
    Unknown(String),
}

impl SubfactorVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, SubfactorVerdict::Yes { .. })
    }
}

const MAX_CANDIDATES: usize = 5000;

/// Searches for a submodule of `a`, generated by at most `gen_bound` vectors,
/// that maps onto `b`.
pub fn subfactor_check(b: &Representation, a: &Representation, gen_bound: usize, seed: u64) -> Result<SubfactorVerdict> {
    b.require_same_algebra(a)?;
    if let Some(v) = (0..b.dims().len()).find(|&v| b.dims()[v] > a.dims()[v]) {
        return Ok(SubfactorVerdict::No(format!(
            "multiplicity of vertex {v} is {} in the candidate but {} in the ambient module",
            b.dims()[v],
            a.dims()[v]
        )));
    }
    if b.is_zero() {
        let zero = Representation::zero(a.algebra());
        return Ok(SubfactorVerdict::Yes {
            generators: Vec::new(),
            submodule: zero.clone(),
            surjection: ModuleMap::zero(&zero, b),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = a.field();
    let mut pool: Vec<(VertexId, Vec<Scalar>)> = a.top_elements();
    for (v, &d) in a.dims().iter().enumerate() {
        for i in 0..d {
            let mut x = vec![field.zero(); d];
            x[i] = field.one();
            if !pool.iter().any(|(w, y)| *w == v && *y == x) {
                pool.push((v, x));
            }
        }
    }
    let full_gens = a.top_elements();
    let mut candidates: Vec<Vec<(VertexId, Vec<Scalar>)>> = vec![full_gens];
    'outer: for size in 1..=gen_bound.min(pool.len()) {
        for combo in pool.iter().cloned().combinations(size) {
            if candidates.len() >= MAX_CANDIDATES {
                break 'outer;
            }
            candidates.push(combo);
        }
    }
    for gens in candidates {
        let sub = a.generate_submodule(&gens);
        if sub.iter().zip(b.dims()).any(|(m, &d)| m.cols() < d) {
            continue;
        }
        let (u, _) = a.sub_representation(&sub)?;
        let homs = hom_space(&u, b)?;
        if homs.is_empty() {
            continue;
        }
        let found = homs.iter().find(|h| h.is_surjective()).cloned().or_else(|| {
            (0..8)
                .map(|_| random_combination(&u, b, &homs, &mut rng))
                .find(ModuleMap::is_surjective)
        });
        if let Some(surjection) = found {
            return Ok(SubfactorVerdict::Yes {
                generators: gens,
                submodule: u,
                surjection,
            });
        }
    }
    Ok(SubfactorVerdict::Unknown(format!(
        "no submodule generated by at most {gen_bound} vectors maps onto the candidate"
    )))
}

/// Projective dimension label, shared by reports.
pub fn pdim_label(m: &Representation, cutoff: usize) -> String {
    match pdim(m, cutoff, true) {
        PdimVerdict::Finite(d) => format!("{d}"),
        other => other.label(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn nn_dimensions_and_split() {
        let alg = fixtures::ex2_algebra();
        let beta = alg.parse_element("beta").unwrap();
        let alpha = alg.parse_element("alpha").unwrap();
        for n in 1..=3 {
            let nn = build_nn(&alg, &beta, &alpha, n).unwrap();
            assert_eq!(nn.module.dim(), 4 * n - (n - 1) * 2);
            assert!(verify_nn_syzygy_split(&alg, &beta, &alpha, n, 10).unwrap().holds());
        }
        let gamma = alg.parse_element("gamma").unwrap();
        assert!(matches!(build_nn(&alg, &beta, &gamma, 2), Err(Error::EndpointMismatch(_))));
    }

    #[test]
    fn subfactors() {
        let alg = fixtures::ex2_algebra();
        let p1 = Representation::projective(&alg, 0).unwrap();
        let s2 = Representation::simple(&alg, 1).unwrap();
        assert!(subfactor_check(&s2, &p1, 1, 1).unwrap().is_yes());
        let m3 = fixtures::zipper_m(&alg, 3).unwrap().module;
        assert!(matches!(subfactor_check(&m3, &p1, 2, 1).unwrap(), SubfactorVerdict::No(_)));
    }

    #[test]
    fn small_tower() {
        let alg = fixtures::ex2_algebra();
        let s1 = Representation::simple(&alg, 0).unwrap();
        let gen = |n: usize| -> Result<(String, Representation)> {
            Ok((format!("M{n}"), fixtures::zipper_m(&alg, n)?.module))
        };
        let t = phantom_tower(&s1, &gen, &TowerOptions { budget: 3, ..TowerOptions::default() }).unwrap();
        assert_eq!(t.u_dims.iter().map(|u| u.1).collect::<Vec<_>>(), vec![2, 4, 6]);
        assert!(t.all_verified());
        assert!(t.growth_evidence());
        assert!(t.dot().contains("A1 -> A2"));
    }
}
