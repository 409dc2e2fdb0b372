//! Syzygies of path ideals over monomial relation algebras.
//!
//! For a nontrivial residue path `p: s -> t`, `Λp ≅ Λe_t / K` where `K` is
//! spanned by the residue paths `u` from `t` with `up = 0`. Over a monomial
//! algebra `K = ⊕ Λu` for the minimal such `u`, so syzygies of path ideals are
//! again direct sums of path ideals and projective dimension reduces to a
//! finite graph search. A trivial path `e_i` stands for the simple `S_i`, whose
//! syzygy is `Je_i = ⊕ Λa` over the arrows `a` leaving `i`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::quiver::{PathWord, VertexId};
use crate::rep::{cyclic_module, is_isomorphic, syzygy, InfinityWitness, PdimVerdict, Representation};

/// A path together with the paths whose left ideals make up its syzygy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathIdealNode {
    pub path: PathWord,
    pub syzygy: Vec<PathWord>,
}

/// A reachable cycle in the path-ideal syzygy graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyzygyCycleWitness {
    /// path from the start node to the first cycle node (excluding it)
    pub prefix: Vec<PathWord>,
    /// `p_0 -> p_1 -> ... -> p_{k-1} -> p_0`
    pub cycle: Vec<PathWord>,
}

impl SyzygyCycleWitness {
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    /// Re-checks every edge with module computations: `Λp_{i+1}` occurs in the
    /// combinatorial syzygy of `Λp_i`, and that syzygy agrees with the kernel
    /// of the projective cover up to isomorphism.
    pub fn verify(&self, alg: &Arc<Algebra>) -> bool {
        let mut nodes = self.prefix.clone();
        nodes.extend(self.cycle.iter().cloned());
        nodes.push(self.cycle[0].clone());
        nodes.windows(2).all(|w| {
            let Ok(children) = path_ideal_syzygy(alg, &w[0]) else {
                return false;
            };
            children.contains(&w[1]) && !children.is_empty() && verify_node(alg, &w[0], &children)
        })
    }

    pub fn display(&self, alg: &Algebra) -> String {
        let names: Vec<String> = self
            .cycle
            .iter()
            .chain(std::iter::once(&self.cycle[0]))
            .map(|p| node_name(alg, p))
            .collect();
        names.join(" -> ")
    }
}

/// `Λp`, or `S_i` for a trivial path.
pub fn node_name(alg: &Algebra, p: &PathWord) -> String {
    if p.is_trivial() {
        format!("S_{}", alg.quiver().vertex_name(p.source))
    } else {
        format!("Λ{}", p.display(alg.quiver()))
    }
}

/// The module a node stands for: `S_i` for `e_i`, else the left ideal `Λp`.
pub fn path_module(alg: &Arc<Algebra>, p: &PathWord) -> Result<Representation> {
    if p.is_trivial() {
        return Representation::simple(alg, p.source);
    }
    let x = alg.path_element(p);
    if x.is_zero() {
        return Err(Error::PathInIdeal(p.display(alg.quiver()).to_string()));
    }
    Ok(cyclic_module(alg, &[p.source], &[x])?.0)
}

/// Whether `Ω^1` of the node is isomorphic to `⊕ Λq` over `children`.
pub fn verify_node(alg: &Arc<Algebra>, p: &PathWord, children: &[PathWord]) -> bool {
    let Ok(m) = path_module(alg, p) else {
        return false;
    };
    let omega = syzygy(&m);
    let parts: Result<Vec<Representation>> = children.iter().map(|q| path_module(alg, q)).collect();
    let Ok(parts) = parts else {
        return false;
    };
    let Ok(sum) = Representation::direct_sum(alg, &parts) else {
        return false;
    };
    matches!(is_isomorphic(&omega, &sum.module), Ok(v) if v.is_yes())
}

fn require_monomial(alg: &Algebra) -> Result<()> {
    if alg.is_monomial() {
        Ok(())
    } else {
        Err(Error::NotMonomial)
    }
}

/// Paths `q` with `Ω^1(Λp) ≅ ⊕ Λq` (for trivial `p`, `Ω^1(S_i)`).
pub fn path_ideal_syzygy(alg: &Algebra, p: &PathWord) -> Result<Vec<PathWord>> {
    require_monomial(alg)?;
    let q = alg.quiver();
    if p.is_trivial() {
        return Ok(q
            .arrows_from(p.source)
            .map(|a| PathWord::arrow(q, a))
            .collect());
    }
    if !alg.path_survives(p) {
        return Err(Error::PathInIdeal(p.display(q).to_string()));
    }
    let mut out = Vec::new();
    for i in alg.basis_from(p.target) {
        let u = alg.basis_path(i);
        if u.is_trivial() {
            continue;
        }
        let Some(up) = u.after(p) else { continue };
        if alg.path_survives(&up) {
            continue;
        }
        let minimal = (1..u.len()).all(|k| {
            let first = u.first_part(q, k);
            alg.path_survives(&first.after(p).expect("composable"))
        });
        if minimal {
            out.push(u.clone());
        }
    }
    Ok(out)
}

/// Exact projective dimension of `Λp` (or `S_i` for trivial `p`); never `Unknown`.
pub fn path_pdim(alg: &Algebra, p: &PathWord) -> Result<PdimVerdict> {
    require_monomial(alg)?;
    if !p.is_trivial() && !alg.path_survives(p) {
        return Err(Error::PathInIdeal(p.display(alg.quiver()).to_string()));
    }
    let mut search = Search {
        alg,
        state: HashMap::new(),
        stack: Vec::new(),
    };
    match search.visit(p)? {
        Ok(d) => Ok(PdimVerdict::Finite(d)),
        Err(w) => Ok(PdimVerdict::Infinite(InfinityWitness::Cycle(w))),
    }
}

/// The whole reachable syzygy graph from `p`.
pub fn syzygy_graph(alg: &Algebra, p: &PathWord) -> Result<Vec<PathIdealNode>> {
    let mut seen: Vec<PathWord> = vec![p.clone()];
    let mut out = Vec::new();
    let mut i = 0;
    while i < seen.len() {
        let node = seen[i].clone();
        let children = path_ideal_syzygy(alg, &node)?;
        for c in &children {
            if !seen.contains(c) {
                seen.push(c.clone());
            }
        }
        out.push(PathIdealNode {
            path: node,
            syzygy: children,
        });
        i += 1;
    }
    Ok(out)
}

enum Mark {
    OnStack,
    Done(usize),
}

struct Search<'a> {
    alg: &'a Algebra,
    state: HashMap<PathWord, Mark>,
    stack: Vec<PathWord>,
}

impl Search<'_> {
    fn visit(&mut self, p: &PathWord) -> Result<std::result::Result<usize, SyzygyCycleWitness>> {
        match self.state.get(p) {
            Some(Mark::Done(d)) => return Ok(Ok(*d)),
            Some(Mark::OnStack) => {
                let pos = self.stack.iter().position(|x| x == p).expect("on stack");
                return Ok(Err(SyzygyCycleWitness {
                    prefix: self.stack[..pos].to_vec(),
                    cycle: self.stack[pos..].to_vec(),
                }));
            }
            None => {}
        }
        self.state.insert(p.clone(), Mark::OnStack);
        self.stack.push(p.clone());
        let children = path_ideal_syzygy(self.alg, p)?;
        let mut best: Option<usize> = None;
        for c in &children {
            match self.visit(c)? {
                Ok(d) => best = Some(best.map_or(d, |b| b.max(d))),
                Err(w) => return Ok(Err(w)),
            }
        }
        self.stack.pop();
        let d = best.map_or(0, |b| b + 1);
        self.state.insert(p.clone(), Mark::Done(d));
        Ok(Ok(d))
    }
}

/// Whether `Λp` is a direct summand of `Je_vertex`.
pub fn summand_of_radical(alg: &Algebra, p: &PathWord, vertex: VertexId) -> Result<bool> {
    require_monomial(alg)?;
    if p.source != vertex {
        return Err(Error::EndpointMismatch(format!(
            "{} does not start at the given vertex",
            p.display(alg.quiver())
        )));
    }
    if p.is_trivial() || !alg.path_survives(p) {
        return Ok(false);
    }
    if p.len() >= 2 {
        return Ok(false);
    }
    let q = alg.quiver();
    let own = alg.left_ideal(&[alg.path_element(p)]);
    let others: Vec<_> = q
        .arrows_from(vertex)
        .filter(|&a| a != p.arrows[0])
        .map(|a| alg.arrow_element(a))
        .collect();
    let rest = alg.left_ideal(&others);
    let radical: Vec<_> = q.arrows_from(vertex).map(|a| alg.arrow_element(a)).collect();
    let total = alg.left_ideal(&radical);
    let meet = crate::matrix::subspace::intersection(&own, &rest);
    Ok(meet.cols() == 0 && own.cols() + rest.cols() == total.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn example_two_syzygies() {
        let alg = fixtures::ex2_algebra();
        let q = alg.quiver();
        let alpha = q.parse_path("alpha").unwrap();
        let beta = q.parse_path("beta").unwrap();
        let gamma = q.parse_path("gamma").unwrap();
        assert!(path_ideal_syzygy(&alg, &alpha).unwrap().is_empty());
        assert_eq!(
            path_ideal_syzygy(&alg, &PathWord::trivial(0)).unwrap(),
            vec![alpha.clone(), beta.clone()]
        );
        // Λγ ≅ S_1, whose syzygy is Λα ⊕ Λβ
        assert_eq!(path_ideal_syzygy(&alg, &gamma).unwrap(), vec![alpha.clone(), beta.clone()]);
        assert!(matches!(path_pdim(&alg, &alpha).unwrap(), PdimVerdict::Finite(0)));
        match path_pdim(&alg, &PathWord::trivial(1)).unwrap() {
            PdimVerdict::Infinite(InfinityWitness::Cycle(w)) => assert!(w.verify(&alg)),
            other => panic!("unexpected {other}"),
        }
        assert!(path_pdim(&alg, &beta).unwrap().is_infinite());
    }

    #[test]
    fn radical_summands() {
        let alg = fixtures::ex2_algebra();
        let q = alg.quiver();
        assert!(summand_of_radical(&alg, &q.parse_path("beta").unwrap(), 0).unwrap());
        assert!(summand_of_radical(&alg, &q.parse_path("alpha").unwrap(), 0).unwrap());
        assert!(!summand_of_radical(&alg, &PathWord::trivial(0), 0).unwrap());
        assert!(!summand_of_radical(&alg, &q.parse_path("gamma*alpha").unwrap(), 0).unwrap());
    }

    #[test]
    fn free_acyclic_quiver() {
        let q = crate::Quiver::new(&["1", "2", "3"], &[("a", "1", "2"), ("b", "1", "3")]).unwrap();
        let alg = Algebra::build(q, crate::Field::Rational, vec![], 3).unwrap();
        assert_eq!(path_ideal_syzygy(&alg, &PathWord::trivial(0)).unwrap().len(), 2);
        assert!(matches!(path_pdim(&alg, &PathWord::trivial(0)).unwrap(), PdimVerdict::Finite(1)));
    }
}
