use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::quiver::VertexId;

use super::{ModuleMap, ProjectiveCoords, Representation, VertexSubspace};

/// `(⊕ Λe_{v_k}) / (relators)`, together with the presentation epimorphism.
#[derive(Clone, Debug)]
pub struct PresentedModule {
    pub gens: Vec<VertexId>,
    /// each relator has one component per generator, component `k` lying in `Λe_{v_k}`
    pub relators: Vec<Vec<AlgebraElement>>,
    pub free: Representation,
    pub relator_submodule: VertexSubspace,
    pub module: Representation,
    pub cover: ModuleMap,
}

impl PresentedModule {
    /// Image of the `k`-th generator, as (vertex, vector).
    pub fn generator(&self, k: usize) -> (VertexId, Vec<Scalar>) {
        let v = self.gens[k];
        let x = free_vector(&self.free, &self.gens, k, &self.free.algebra().idempotent(v));
        let proj = &self.cover.blocks()[v];
        (v, proj.mul_vec(&x[v]))
    }

    /// Image of `λ·b_k` in the module, as per-vertex vectors.
    pub fn element(&self, k: usize, lambda: &AlgebraElement) -> Vec<Vec<Scalar>> {
        let x = free_vector(&self.free, &self.gens, k, lambda);
        x.iter()
            .enumerate()
            .map(|(v, xv)| self.cover.blocks()[v].mul_vec(xv))
            .collect()
    }
}

/// Per-vertex coordinates in `⊕ Λe_{v_j}` of `λ` placed in summand `k`.
fn free_vector(
    free: &Representation,
    gens: &[VertexId],
    k: usize,
    lambda: &AlgebraElement,
) -> Vec<Vec<Scalar>> {
    let alg = free.algebra();
    let field = alg.field();
    let mut out: Vec<Vec<Scalar>> = free.dims().iter().map(|&d| vec![field.zero(); d]).collect();
    let mut start = vec![0; alg.num_vertices()];
    for (j, &v) in gens.iter().enumerate() {
        let coords = ProjectiveCoords::new(alg, v);
        if j == k {
            for (t, part) in coords.coordinates(field, lambda).into_iter().enumerate() {
                for (i, c) in part.into_iter().enumerate() {
                    out[t][start[t] + i] = c;
                }
            }
        }
        for (t, d) in coords.dims.iter().enumerate() {
            start[t] += d;
        }
    }
    out
}

/// The cyclic submodule `Λ·(x_1, ..., x_k)` of `⊕ Λe_{v_k}`, with `x_k ∈ Λe_{v_k}`.
pub fn cyclic_module(
    alg: &Arc<Algebra>,
    gens: &[VertexId],
    comps: &[AlgebraElement],
) -> Result<(Representation, ModuleMap)> {
    let parts: Vec<Representation> = gens
        .iter()
        .map(|&v| Representation::projective(alg, v))
        .collect::<Result<_>>()?;
    let free = Representation::direct_sum(alg, &parts)?.module;
    let mut total: Vec<Vec<Scalar>> =
        free.dims().iter().map(|&d| vec![alg.field().zero(); d]).collect();
    for (k, comp) in comps.iter().enumerate() {
        for (i, _) in comp.terms() {
            if alg.basis_path(i).source != gens[k] {
                return Err(Error::EndpointMismatch(format!(
                    "component {k} does not lie in the projective of its vertex"
                )));
            }
        }
        let x = free_vector(&free, gens, k, comp);
        for (t, xv) in x.into_iter().enumerate() {
            for (i, c) in xv.into_iter().enumerate() {
                total[t][i] += &c;
            }
        }
    }
    let seeds: Vec<(VertexId, Vec<Scalar>)> = total
        .into_iter()
        .enumerate()
        .filter(|(_, x)| x.iter().any(|c| !c.is_zero()))
        .collect();
    let sub = free.generate_submodule(&seeds);
    free.sub_representation(&sub)
}

/// Builds the module presented by generators of the given vertex types and relators.
pub fn presented_module(
    alg: &Arc<Algebra>,
    gens: &[VertexId],
    relators: &[Vec<AlgebraElement>],
) -> Result<PresentedModule> {
    for &v in gens {
        if v >= alg.num_vertices() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
    }
    for (ri, rel) in relators.iter().enumerate() {
        if rel.len() != gens.len() {
            return Err(Error::MalformedRelator(format!(
                "relator {ri} has {} components for {} generators",
                rel.len(),
                gens.len()
            )));
        }
        for (k, comp) in rel.iter().enumerate() {
            for (i, _) in comp.terms() {
                let p = alg.basis_path(i);
                if p.source != gens[k] {
                    return Err(Error::MalformedRelator(format!(
                        "relator {ri}: term {} does not start at the vertex of generator {k}",
                        p.display(alg.quiver())
                    )));
                }
            }
        }
    }
    let parts: Vec<Representation> = gens
        .iter()
        .map(|&v| Representation::projective(alg, v))
        .collect::<Result<_>>()?;
    let free = Representation::direct_sum(alg, &parts)?.module;
    let mut seeds: Vec<(VertexId, Vec<Scalar>)> = Vec::new();
    for rel in relators {
        let mut total: Vec<Vec<Scalar>> =
            free.dims().iter().map(|&d| vec![alg.field().zero(); d]).collect();
        for (k, comp) in rel.iter().enumerate() {
            let x = free_vector(&free, gens, k, comp);
            for (t, xv) in x.into_iter().enumerate() {
                for (i, c) in xv.into_iter().enumerate() {
                    total[t][i] += &c;
                }
            }
        }
        for (t, xv) in total.into_iter().enumerate() {
            if xv.iter().any(|c| !c.is_zero()) {
                seeds.push((t, xv));
            }
        }
    }
    let sub = free.generate_submodule(&seeds);
    let quot = free.quotient(&sub)?;
    Ok(PresentedModule {
        gens: gens.to_vec(),
        relators: relators.to_vec(),
        free,
        relator_submodule: sub,
        module: quot.module,
        cover: quot.projection,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn free_presentation_is_projective() {
        let alg = fixtures::ex2_algebra();
        let p = presented_module(&alg, &[0], &[]).unwrap();
        assert_eq!(p.module, Representation::projective(&alg, 0).unwrap());
    }

    #[test]
    fn zipper_relator() {
        let alg = fixtures::ex2_algebra();
        let beta = alg.parse_element("beta").unwrap();
        let alpha = alg.parse_element("alpha").unwrap();
        let p = presented_module(&alg, &[0, 0], &[vec![beta, alpha.scaled(&-alg.field().one())]]).unwrap();
        assert_eq!(p.module.dims(), &[3, 3]);
        assert_eq!(p.module.top(), vec![2, 0]);
        let (v, x) = p.generator(1);
        assert_eq!(v, 0);
        assert!(x.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn malformed_relator() {
        let alg = fixtures::ex2_algebra();
        let gamma = alg.parse_element("gamma").unwrap();
        assert!(matches!(
            presented_module(&alg, &[0], &[vec![gamma]]),
            Err(Error::MalformedRelator(_))
        ));
    }
}
