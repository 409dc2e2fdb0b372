use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::monomial::SyzygyCycleWitness;
use crate::quiver::VertexId;

use super::{hom_dimension, hom_space, map_from_projective, ModuleMap, Representation};

pub struct ProjectiveCover {
    pub projective: Representation,
    pub map: ModuleMap,
    /// the lifted top elements, one per indecomposable summand, in summand order
    pub tops: Vec<(VertexId, Vec<Scalar>)>,
}

/// Projective cover built by lifting a basis of `M/JM`; its kernel lies in the radical.
pub fn projective_cover(m: &Representation) -> ProjectiveCover {
    let alg = m.algebra();
    let tops = m.top_elements();
    let parts: Vec<Representation> = tops
        .iter()
        .map(|(v, _)| Representation::projective(alg, *v).expect("vertex exists"))
        .collect();
    let p = Representation::direct_sum(alg, &parts)
        .expect("same algebra")
        .module;
    let n = alg.num_vertices();
    let mut blocks: Vec<Matrix> = (0..n)
        .map(|t| Matrix::zeros(m.field(), m.dims()[t], 0))
        .collect();
    for (v, x) in &tops {
        let parts = map_from_projective(m, *v, x);
        for (t, b) in parts.into_iter().enumerate() {
            blocks[t] = blocks[t].hstack(&b);
        }
    }
    let map = ModuleMap::from_blocks_unchecked(p.clone(), m.clone(), blocks);
    ProjectiveCover {
        projective: p,
        map,
        tops,
    }
}

/// `Ω^1(M)`, the kernel of the projective cover.
pub fn syzygy(m: &Representation) -> Representation {
    projective_cover(m).map.kernel().0
}

/// `[M, Ω^1 M, ..., Ω^k M]`, stopping early at the zero module.
pub fn syzygy_chain(m: &Representation, k: usize) -> Vec<Representation> {
    let mut out = vec![m.clone()];
    for _ in 0..k {
        let last = out.last().expect("non-empty");
        if last.is_zero() {
            break;
        }
        let next = syzygy(last);
        out.push(next);
    }
    out
}

/// `Ω^j ≅ Ω^k` with both nonzero and `j < k`.
#[derive(Clone, Debug)]
pub struct PeriodicWitness {
    pub j: usize,
    pub k: usize,
    pub omega_j: Representation,
    pub omega_k: Representation,
    pub iso: ModuleMap,
}

impl PeriodicWitness {
    pub fn verify(&self) -> bool {
        self.j < self.k
            && !self.omega_j.is_zero()
            && self.iso.source() == &self.omega_j
            && self.iso.target() == &self.omega_k
            && self.iso.intertwines()
            && self.iso.is_isomorphism()
    }
}

#[derive(Clone, Debug)]
pub enum InfinityWitness {
    Cycle(SyzygyCycleWitness),
    Periodic(Box<PeriodicWitness>),
}

#[derive(Clone, Debug)]
pub enum PdimVerdict {
    Finite(usize),
    Infinite(InfinityWitness),
    Unknown(usize),
}

impl PdimVerdict {
    pub fn is_finite(&self) -> bool {
        matches!(self, PdimVerdict::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PdimVerdict::Infinite(_))
    }

    pub fn finite(&self) -> Option<usize> {
        match self {
            PdimVerdict::Finite(d) => Some(*d),
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            PdimVerdict::Finite(d) => format!("Finite({d})"),
            PdimVerdict::Infinite(InfinityWitness::Cycle(c)) => {
                format!("Infinite(syzygy cycle of length {})", c.len())
            }
            PdimVerdict::Infinite(InfinityWitness::Periodic(w)) => {
                format!("Infinite(Ω^{} ≅ Ω^{})", w.j, w.k)
            }
            PdimVerdict::Unknown(c) => format!("Unknown(cutoff {c})"),
        }
    }
}

impl std::fmt::Display for PdimVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Projective dimension by syzygy iteration up to `cutoff` syzygies.
///
/// `Finite(d)` means `Ω^d` is projective (so `Ω^{d+1} = 0`) and, for `d ≥ 1`,
/// `Ω^{d-1}` is not. The zero module is `Finite(0)`.
pub fn pdim(m: &Representation, cutoff: usize, detect_periodicity: bool) -> PdimVerdict {
    let mut rng = ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED);
    let mut chain = vec![m.clone()];
    for d in 0..=cutoff {
        let cur = chain[d].clone();
        if cur.is_zero() {
            return PdimVerdict::Finite(d.saturating_sub(1));
        }
        let next = syzygy(&cur);
        if next.is_zero() {
            return PdimVerdict::Finite(d);
        }
        if detect_periodicity {
            for (j, earlier) in chain.iter().enumerate() {
                if earlier.dims() != next.dims() {
                    continue;
                }
                if let Ok(IsoVerdict::Yes(iso)) = is_isomorphic_with(earlier, &next, 24, &mut rng) {
                    return PdimVerdict::Infinite(InfinityWitness::Periodic(Box::new(
                        PeriodicWitness {
                            j,
                            k: d + 1,
                            omega_j: earlier.clone(),
                            omega_k: next,
                            iso,
                        },
                    )));
                }
            }
        }
        chain.push(next);
    }
    PdimVerdict::Unknown(cutoff)
}

#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Yes(ModuleMap),
    No(String),
    ProbablyNo,
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }
}

pub fn is_isomorphic(m: &Representation, n: &Representation) -> Result<IsoVerdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(crate::DEFAULT_SEED);
    is_isomorphic_with(m, n, 32, &mut rng)
}

pub(crate) fn random_scalar<R: Rng>(field: Field, rng: &mut R) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-3..=3)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
    }
}

/// Random combination of `basis` with small coefficients.
pub(crate) fn random_combination<R: Rng>(
    source: &Representation,
    target: &Representation,
    basis: &[ModuleMap],
    rng: &mut R,
) -> ModuleMap {
    let terms: Vec<(Scalar, &ModuleMap)> = basis
        .iter()
        .map(|b| (random_scalar(source.field(), rng), b))
        .collect();
    ModuleMap::combination(source, target, &terms)
}

/// Isomorphism test: invariants first, then a search for an invertible map in `Hom(M, N)`.
pub fn is_isomorphic_with<R: Rng>(
    m: &Representation,
    n: &Representation,
    trials: usize,
    rng: &mut R,
) -> Result<IsoVerdict> {
    m.require_same_algebra(n)?;
    if m.dims() != n.dims() {
        return Ok(IsoVerdict::No(format!(
            "dimension vectors differ: {:?} vs {:?}",
            m.dims(),
            n.dims()
        )));
    }
    if m.is_zero() {
        return Ok(IsoVerdict::Yes(ModuleMap::zero(m, n)));
    }
    if m.top() != n.top() {
        return Ok(IsoVerdict::No("top multiplicities differ".into()));
    }
    let soc = |x: &Representation| -> Vec<usize> {
        x.socle_subspace().iter().map(Matrix::cols).collect()
    };
    if soc(m) != soc(n) {
        return Ok(IsoVerdict::No("socle dimensions differ".into()));
    }
    let basis = hom_space(m, n)?;
    if basis.is_empty() {
        return Ok(IsoVerdict::No("Hom(M, N) = 0".into()));
    }
    for b in &basis {
        if b.is_isomorphism() {
            return Ok(IsoVerdict::Yes(b.clone()));
        }
    }
    for _ in 0..trials {
        let c = random_combination(m, n, &basis, rng);
        if c.is_isomorphism() {
            return Ok(IsoVerdict::Yes(c));
        }
    }
    let end_m = hom_dimension(m, m)?;
    let end_n = hom_dimension(n, n)?;
    let back = hom_dimension(n, m)?;
    if basis.len() != end_m || end_m != end_n || back != end_m {
        return Ok(IsoVerdict::No(format!(
            "Hom dimensions differ: Hom(M,N)={}, Hom(N,M)={back}, End M={end_m}, End N={end_n}",
            basis.len()
        )));
    }
    Ok(IsoVerdict::ProbablyNo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn cover_contract_on_projective_and_simple() {
        let alg = fixtures::ex2_algebra();
        let s1 = Representation::simple(&alg, 0).unwrap();
        let c = projective_cover(&s1);
        assert_eq!(c.projective, Representation::projective(&alg, 0).unwrap());
        assert!(c.map.is_surjective());
        let p1 = Representation::projective(&alg, 0).unwrap();
        assert!(syzygy(&p1).is_zero());
        assert!(matches!(pdim(&p1, 5, true), PdimVerdict::Finite(0)));
        assert!(matches!(
            pdim(&Representation::zero(&alg), 5, true),
            PdimVerdict::Finite(0)
        ));
    }

    #[test]
    fn simple_two_has_periodic_syzygies() {
        let alg = fixtures::ex2_algebra();
        let s2 = Representation::simple(&alg, 1).unwrap();
        let v = pdim(&s2, 8, true);
        match v {
            PdimVerdict::Infinite(InfinityWitness::Periodic(w)) => assert!(w.verify()),
            other => panic!("unexpected verdict {other}"),
        }
        assert!(matches!(pdim(&s2, 8, false), PdimVerdict::Unknown(8)));
    }

    #[test]
    fn identity_is_an_isomorphism_witness() {
        let alg = fixtures::ex2_algebra();
        let p1 = Representation::projective(&alg, 0).unwrap();
        assert!(is_isomorphic(&p1, &p1).unwrap().is_yes());
        let s1 = Representation::simple(&alg, 0).unwrap();
        assert!(matches!(is_isomorphic(&p1, &s1).unwrap(), IsoVerdict::No(_)));
    }
}
