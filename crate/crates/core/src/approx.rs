//! Relative right approximations inside a finite family of modules.
//!
//! A map `f: A -> X` is a `C`-approximation when every `g: C_i -> X` with
//! `C_i` in the family factors as `g = f ∘ h`. Certificates keep one witness
//! `h` per basis element of each `Hom(C_i, X)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::{subspace, Matrix};
use crate::rep::{
    hom_space, hom_space_killed_by, pdim, random_combination, ModuleMap, PdimVerdict,
    Representation, VertexSubspace,
};

#[derive(Clone, Debug)]
pub struct Member {
    pub name: String,
    pub module: Representation,
    pub pdim: Option<PdimVerdict>,
}

/// A finite, named list of modules standing in for a subcategory.
#[derive(Clone, Debug, Default)]
pub struct FiniteCategory {
    pub name: String,
    pub members: Vec<Member>,
}

impl FiniteCategory {
    pub fn new(name: &str) -> FiniteCategory {
        FiniteCategory {
            name: name.to_string(),
            members: Vec::new(),
        }
    }

    pub fn with(mut self, name: &str, module: Representation) -> FiniteCategory {
        self.push(name, module);
        self
    }

    pub fn push(&mut self, name: &str, module: Representation) {
        self.members.push(Member {
            name: name.to_string(),
            module,
            pdim: None,
        });
    }

    pub fn extend(&mut self, other: &FiniteCategory) {
        self.members.extend(other.members.iter().cloned());
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.members.iter().map(|m| m.name.clone()).collect()
    }

    /// Attaches projective dimension verdicts; fails unless every member has finite pdim.
    pub fn require_finite_pdim(&mut self, cutoff: usize) -> Result<()> {
        for m in &mut self.members {
            let v = pdim(&m.module, cutoff, true);
            if !v.is_finite() {
                return Err(Error::Invalid(format!(
                    "member {} has projective dimension {v}",
                    m.name
                )));
            }
            m.pdim = Some(v);
        }
        Ok(())
    }

    /// Re-derives every attached verdict.
    pub fn verify_pdims(&self, cutoff: usize) -> bool {
        self.members.iter().all(|m| match &m.pdim {
            Some(PdimVerdict::Finite(d)) => pdim(&m.module, cutoff, false).finite() == Some(*d),
            Some(_) => false,
            None => true,
        })
    }
}

/// `f ∘ h = g` for the basis map `g` of `Hom(C_member, X)`.
#[derive(Clone, Debug)]
pub struct Witness {
    pub member: usize,
    pub g: ModuleMap,
    pub h: ModuleMap,
}

#[derive(Clone, Debug)]
pub struct ApproxCertificate {
    pub target: Representation,
    pub family: FiniteCategory,
    pub source: Representation,
    pub map: ModuleMap,
    pub witnesses: Vec<Witness>,
    pub right_minimal: bool,
}

impl ApproxCertificate {
    /// Exact replay: every witness composes correctly and each member has
    /// as many independent witnesses as `dim Hom(C_i, X)`.
    pub fn verify(&self) -> bool {
        if self.map.source() != &self.source || self.map.target() != &self.target {
            return false;
        }
        if !self.map.intertwines() {
            return false;
        }
        for w in &self.witnesses {
            if w.h.target() != &self.source || !w.h.intertwines() {
                return false;
            }
            if self.map.compose(&w.h) != w.g {
                return false;
            }
        }
        for (i, m) in self.family.members.iter().enumerate() {
            let Ok(dim) = hom_space(&m.module, &self.target).map(|b| b.len()) else {
                return false;
            };
            let gs: Vec<Vec<Scalar>> = self
                .witnesses
                .iter()
                .filter(|w| w.member == i)
                .map(|w| w.g.to_flat())
                .collect();
            let rank = if gs.is_empty() || gs[0].is_empty() {
                0
            } else {
                Matrix::from_columns(self.target.field(), gs[0].len(), &gs).rank()
            };
            if rank != dim {
                return false;
            }
        }
        true
    }

    pub fn source_dim(&self) -> usize {
        self.source.dim()
    }
}

/// `A = ⊕ C_i^{dim Hom(C_i, X)}` with `f` assembled from Hom bases.
pub fn naive_approximation(family: &FiniteCategory, x: &Representation) -> Result<ApproxCertificate> {
    if family.is_empty() {
        return Err(Error::Invalid("empty family".into()));
    }
    let alg = x.algebra();
    let mut parts = Vec::new();
    let mut gs = Vec::new();
    for (i, m) in family.members.iter().enumerate() {
        for g in hom_space(&m.module, x)? {
            parts.push(m.module.clone());
            gs.push((i, g));
        }
    }
    let sum = Representation::direct_sum(alg, &parts)?;
    let mut map = ModuleMap::zero(&sum.module, x);
    let mut witnesses = Vec::with_capacity(gs.len());
    for ((i, g), (inj, proj)) in gs.into_iter().zip(sum.injections.iter().zip(&sum.projections)) {
        map = map.add(&g.compose(proj));
        witnesses.push(Witness {
            member: i,
            g,
            h: inj.clone(),
        });
    }
    Ok(ApproxCertificate {
        target: x.clone(),
        family: family.clone(),
        source: sum.module,
        map,
        witnesses,
        right_minimal: false,
    })
}

/// Solves `f ∘ h = g` over a basis of `Hom(C, A)`.
pub fn factor_through(f: &ModuleMap, c: &Representation, g: &ModuleMap) -> Result<Option<ModuleMap>> {
    let basis = hom_space(c, f.source())?;
    Ok(factor_with_basis(f, c, &basis, g))
}

fn factor_with_basis(f: &ModuleMap, c: &Representation, basis: &[ModuleMap], g: &ModuleMap) -> Option<ModuleMap> {
    let target = g.to_flat();
    if basis.is_empty() {
        return g.is_zero().then(|| ModuleMap::zero(c, f.source()));
    }
    if target.is_empty() {
        return Some(ModuleMap::zero(c, f.source()));
    }
    let cols: Vec<Vec<Scalar>> = basis.iter().map(|h| f.compose(h).to_flat()).collect();
    let m = Matrix::from_columns(c.field(), target.len(), &cols);
    let coeffs = m.solve(&target)?;
    let terms: Vec<(Scalar, &ModuleMap)> = coeffs.into_iter().zip(basis).collect();
    Some(ModuleMap::combination(c, f.source(), &terms))
}

#[derive(Clone, Debug)]
pub struct ApproxCheck {
    pub holds: bool,
    pub witnesses: Vec<Witness>,
    /// (member, index of the Hom basis element that does not factor)
    pub failures: Vec<(usize, usize)>,
}

/// Tests whether `f` is a `family`-approximation of its target.
pub fn is_approximation(f: &ModuleMap, family: &FiniteCategory) -> Result<ApproxCheck> {
    let x = f.target();
    let mut witnesses = Vec::new();
    let mut failures = Vec::new();
    for (i, m) in family.members.iter().enumerate() {
        let gs = hom_space(&m.module, x)?;
        if gs.is_empty() {
            continue;
        }
        let basis = hom_space(&m.module, f.source())?;
        for (k, g) in gs.into_iter().enumerate() {
            match factor_with_basis(f, &m.module, &basis, &g) {
                Some(h) => witnesses.push(Witness { member: i, g, h }),
                None => failures.push((i, k)),
            }
        }
    }
    Ok(ApproxCheck {
        holds: failures.is_empty(),
        witnesses,
        failures,
    })
}

/// Adds the members of `more` to an approximation, with one copy of `C` for
/// each basis element of a complement to the maps that already factor.
pub fn extend_approximation(cert: &ApproxCertificate, more: &FiniteCategory) -> Result<ApproxCertificate> {
    let x = &cert.target;
    let alg = x.algebra();
    let mut family = cert.family.clone();
    let mut source = cert.source.clone();
    let mut map = cert.map.clone();
    let mut witnesses = cert.witnesses.clone();
    for m in &more.members {
        let idx = family.len();
        family.members.push(m.clone());
        let gs = hom_space(&m.module, x)?;
        if gs.is_empty() {
            continue;
        }
        let basis = hom_space(&m.module, &source)?;
        let flat_len = gs[0].to_flat().len();
        let field = x.field();
        let factoring: Vec<Vec<Scalar>> = basis.iter().map(|h| map.compose(h).to_flat()).collect();
        let span = if factoring.is_empty() {
            Matrix::zeros(field, flat_len, 0)
        } else {
            subspace::span(field, flat_len, &factoring)
        };
        let mut new_gs: Vec<ModuleMap> = Vec::new();
        let mut acc = span.clone();
        for g in &gs {
            let v = g.to_flat();
            if !subspace::contains(&acc, &v) {
                acc = acc.hstack(&Matrix::from_columns(field, flat_len, &[v]));
                new_gs.push(g.clone());
            }
        }
        let mut parts = vec![source.clone()];
        parts.extend(std::iter::repeat(m.module.clone()).take(new_gs.len()));
        let sum = Representation::direct_sum(alg, &parts)?;
        let mut new_map = map.compose(&sum.projections[0]);
        for (k, g) in new_gs.iter().enumerate() {
            new_map = new_map.add(&g.compose(&sum.projections[k + 1]));
        }
        witnesses = witnesses
            .into_iter()
            .map(|w| Witness {
                h: sum.injections[0].compose(&w.h),
                ..w
            })
            .collect();
        source = sum.module.clone();
        map = new_map;
        let new_basis = hom_space(&m.module, &source)?;
        for g in gs {
            let h = factor_with_basis(&map, &m.module, &new_basis, &g)
                .ok_or_else(|| Error::Invalid("extension lost a factorization".into()))?;
            witnesses.push(Witness { member: idx, g, h });
        }
    }
    Ok(ApproxCertificate {
        target: x.clone(),
        family,
        source,
        map,
        witnesses,
        right_minimal: false,
    })
}

/// Approximation of `x` relative to `family`, built member by member and then minimized.
pub fn minimal_approximation(family: &FiniteCategory, x: &Representation, seed: u64) -> Result<ApproxCertificate> {
    let empty = empty_certificate(x);
    let cert = extend_approximation(&empty, family)?;
    right_minimize(&cert, seed)
}

pub fn empty_certificate(x: &Representation) -> ApproxCertificate {
    let zero = Representation::zero(x.algebra());
    ApproxCertificate {
        target: x.clone(),
        family: FiniteCategory::new("empty"),
        source: zero.clone(),
        map: ModuleMap::zero(&zero, x),
        witnesses: Vec::new(),
        right_minimal: true,
    }
}

/// `V(A), V(V(A)), ...` for the span `V` of `maps`; zero at some step iff `V` is nilpotent.
fn iterated_images(a: &Representation, maps: &[ModuleMap]) -> bool {
    let mut cur: VertexSubspace = a.full_subspace();
    let limit = a.dim() + 1;
    for _ in 0..=limit {
        let next: VertexSubspace = (0..a.dims().len())
            .map(|v| {
                let mut cols = Matrix::zeros(a.field(), a.dims()[v], 0);
                for m in maps {
                    cols = cols.hstack(&m.block(v).mul(&cur[v]));
                }
                cols.column_space()
            })
            .collect();
        let dims: usize = next.iter().map(Matrix::cols).sum();
        if dims == 0 {
            return true;
        }
        let prev: usize = cur.iter().map(Matrix::cols).sum();
        if dims == prev {
            return false;
        }
        cur = next;
    }
    false
}

fn find_non_nilpotent(a: &Representation, v: &[ModuleMap], rng: &mut ChaCha8Rng) -> Option<ModuleMap> {
    let m = a.dim();
    for b in v {
        if !b.pow(m).is_zero() {
            return Some(b.clone());
        }
    }
    for _ in 0..24 {
        let c = random_combination(a, a, v, rng);
        if !c.pow(m).is_zero() {
            return Some(c);
        }
    }
    // products of basis elements catch idempotent-like elements missed by sparse sampling
    for x in v {
        for y in v {
            let c = x.compose(y);
            if !c.pow(m).is_zero() {
                return Some(c);
            }
        }
    }
    None
}

/// Projection of `A = ker w ⊕ im w` onto `ker w`, in the coordinates of the kernel basis.
fn fitting_projection(a: &Representation, w: &ModuleMap) -> (Representation, ModuleMap, ModuleMap) {
    let ker = w.kernel_subspace();
    let im = w.image_subspace();
    let mut blocks = Vec::with_capacity(ker.len());
    for v in 0..ker.len() {
        let full = ker[v].hstack(&im[v]);
        let inv = full.inverse().expect("Fitting decomposition");
        blocks.push(inv.block(0, ker[v].cols(), 0, a.dims()[v]));
    }
    let (k, incl) = a.sub_representation(&ker).expect("kernel is a submodule");
    let proj = ModuleMap::new(a.clone(), k.clone(), blocks).expect("projection along a summand");
    (k, incl, proj)
}

/// Fitting reduction until `{u ∈ End A : f ∘ u = f}` consists of automorphisms.
pub fn right_minimize(cert: &ApproxCertificate, seed: u64) -> Result<ApproxCertificate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = cert.clone();
    loop {
        if cur.source.is_zero() {
            cur.right_minimal = true;
            return Ok(cur);
        }
        let v = hom_space_killed_by(&cur.source, &cur.map)?;
        if v.is_empty() {
            cur.right_minimal = true;
            return Ok(cur);
        }
        match find_non_nilpotent(&cur.source, &v, &mut rng) {
            Some(u) => {
                let w = u.pow(cur.source.dim());
                let (k, incl, proj) = fitting_projection(&cur.source, &w);
                let map = cur.map.compose(&incl);
                let witnesses = cur
                    .witnesses
                    .iter()
                    .map(|wt| Witness {
                        member: wt.member,
                        g: wt.g.clone(),
                        h: proj.compose(&wt.h),
                    })
                    .collect();
                cur = ApproxCertificate {
                    target: cur.target.clone(),
                    family: cur.family.clone(),
                    source: k,
                    map,
                    witnesses,
                    right_minimal: false,
                };
            }
            None => {
                cur.right_minimal = iterated_images(&cur.source, &v);
                return Ok(cur);
            }
        }
    }
}

/// Exact test that every `u` with `f ∘ u = f` is invertible.
pub fn is_right_minimal(f: &ModuleMap) -> Result<bool> {
    let v = hom_space_killed_by(f.source(), f)?;
    Ok(iterated_images(f.source(), &v))
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub source_dim: usize,
    pub minimized: bool,
    pub witnesses_verified: bool,
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub growth: bool,
    pub seed: u64,
    pub certificates: Vec<ApproxCertificate>,
}

pub type FamilyGenerator<'a> = dyn Fn(usize) -> Result<(String, Representation)> + 'a;

/// Minimal `{F_1, ..., F_n}`-approximations of `x` (plus an optional fixed
/// ambient family) for `n = 1..=n_max`. `growth` is set when the source
/// dimension strictly increases over the last `k` steps.
pub fn approximation_growth_scan(
    generator: &FamilyGenerator<'_>,
    x: &Representation,
    n_max: usize,
    ambient: Option<&FiniteCategory>,
    k: usize,
    seed: u64,
) -> Result<GrowthReport> {
    let mut cert = empty_certificate(x);
    if let Some(amb) = ambient {
        cert = right_minimize(&extend_approximation(&cert, amb)?, seed)?;
    }
    let mut rows = Vec::new();
    let mut certificates = Vec::new();
    for n in 1..=n_max {
        let (name, module) = generator(n)?;
        let step = FiniteCategory::new(&name).with(&name, module);
        cert = right_minimize(&extend_approximation(&cert, &step)?, seed ^ n as u64)?;
        if let Some(prev) = rows.last().map(|r: &GrowthRow| r.source_dim) {
            if cert.source_dim() < prev {
                return Err(Error::Invalid(format!(
                    "approximation dimension dropped from {prev} to {} at n = {n}",
                    cert.source_dim()
                )));
            }
        }
        rows.push(GrowthRow {
            n,
            source_dim: cert.source_dim(),
            minimized: cert.right_minimal,
            witnesses_verified: cert.verify(),
        });
        certificates.push(cert.clone());
    }
    let growth = rows.len() > k
        && rows[rows.len() - k - 1..]
            .windows(2)
            .all(|w| w[1].source_dim > w[0].source_dim);
    Ok(GrowthReport {
        rows,
        growth,
        seed,
        certificates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_is_an_approximation() {
        let alg = fixtures::ex2_algebra();
        let s1 = Representation::simple(&alg, 0).unwrap();
        let fam = FiniteCategory::new("f").with("M2", fixtures::zipper_m(&alg, 2).unwrap().module);
        let id = ModuleMap::identity(&s1);
        assert!(is_approximation(&id, &fam).unwrap().holds);
    }

    #[test]
    fn naive_then_minimal() {
        let alg = fixtures::ex2_algebra();
        let s1 = Representation::simple(&alg, 0).unwrap();
        let p1 = Representation::projective(&alg, 0).unwrap();
        let fam = FiniteCategory::new("f").with("P1", p1.clone());
        let cert = naive_approximation(&fam, &s1).unwrap();
        assert_eq!(cert.source, p1);
        assert!(cert.verify());
        let min = right_minimize(&cert, 1).unwrap();
        assert!(min.right_minimal);
        assert_eq!(min.source_dim(), 4);
    }

    #[test]
    fn minimization_drops_redundant_summands() {
        let alg = fixtures::ex2_algebra();
        let s1 = Representation::simple(&alg, 0).unwrap();
        let m1 = fixtures::zipper_m(&alg, 1).unwrap().module;
        let m2 = fixtures::zipper_m(&alg, 2).unwrap().module;
        let fam = FiniteCategory::new("f").with("M1", m1).with("M2", m2);
        let naive = naive_approximation(&fam, &s1).unwrap();
        assert_eq!(naive.source_dim(), 10);
        let min = right_minimize(&naive, 3).unwrap();
        assert!(min.verify());
        assert!(min.right_minimal);
        assert_eq!(min.source_dim(), 4);
        let again = right_minimize(&min, 4).unwrap();
        assert_eq!(again.source_dim(), 4);
    }
}
