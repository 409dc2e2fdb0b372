//! Finitely generated modules as representations of the bound quiver.

mod homological;
mod hom;
mod map;
mod presented;

use std::fmt;
use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{subspace, Echelon, Matrix, SparseRow};
use crate::quiver::{ArrowId, PathWord, VertexId};

pub(crate) use homological::random_combination;
pub use homological::{
    is_isomorphic, is_isomorphic_with, pdim, projective_cover, syzygy, syzygy_chain,
    InfinityWitness, IsoVerdict, PdimVerdict, PeriodicWitness, ProjectiveCover,
};
pub use hom::{hom_dimension, hom_space, hom_space_killed_by, hom_span_flats};
pub use map::ModuleMap;
pub use presented::{cyclic_module, presented_module, PresentedModule};

struct Inner {
    alg: Arc<Algebra>,
    dims: Vec<usize>,
    /// per arrow, `dims[target] x dims[source]`
    maps: Vec<Matrix>,
}

/// A representation of the bound quiver: one vector space per vertex and one
/// matrix per arrow. Cloning is cheap.
#[derive(Clone)]
pub struct Representation {
    inner: Arc<Inner>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("dims", &self.inner.dims)
            .field("maps", &self.inner.maps)
            .finish()
    }
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other)
            && self.inner.dims == other.inner.dims
            && self.inner.maps == other.inner.maps
    }
}

/// Vertex-wise subspace of a representation, given by column bases.
pub type VertexSubspace = Vec<Matrix>;

impl Representation {
    /// Checks matrix shapes and that every relation acts as zero.
    pub fn new(alg: &Arc<Algebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Result<Representation> {
        let q = alg.quiver();
        if dims.len() != q.num_vertices() {
            return Err(Error::DimensionMismatch(format!(
                "{} vertex dimensions for {} vertices",
                dims.len(),
                q.num_vertices()
            )));
        }
        if maps.len() != q.num_arrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for {} arrows",
                maps.len(),
                q.num_arrows()
            )));
        }
        for (a, m) in maps.iter().enumerate() {
            let arr = q.arrow_data(a);
            if m.shape() != (dims[arr.target], dims[arr.source]) {
                return Err(Error::DimensionMismatch(format!(
                    "matrix of `{}` is {}x{}, expected {}x{}",
                    arr.name,
                    m.rows(),
                    m.cols(),
                    dims[arr.target],
                    dims[arr.source]
                )));
            }
            if m.field() != alg.field() {
                return Err(Error::InvalidField(format!(
                    "matrix of `{}` is over {}, algebra over {}",
                    arr.name,
                    m.field(),
                    alg.field()
                )));
            }
        }
        let rep = Representation::from_parts(alg.clone(), dims, maps);
        rep.check_relations()?;
        Ok(rep)
    }

    pub(crate) fn from_parts(alg: Arc<Algebra>, dims: Vec<usize>, maps: Vec<Matrix>) -> Representation {
        Representation {
            inner: Arc::new(Inner { alg, dims, maps }),
        }
    }

    pub fn zero(alg: &Arc<Algebra>) -> Representation {
        let dims = vec![0; alg.num_vertices()];
        let maps = (0..alg.quiver().num_arrows())
            .map(|_| Matrix::zeros(alg.field(), 0, 0))
            .collect();
        Representation::from_parts(alg.clone(), dims, maps)
    }

    /// Indecomposable projective `Λe_v` with the residue-path basis.
    pub fn projective(alg: &Arc<Algebra>, v: VertexId) -> Result<Representation> {
        if v >= alg.num_vertices() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        let coords = ProjectiveCoords::new(alg, v);
        let field = alg.field();
        let q = alg.quiver();
        let mut maps = Vec::with_capacity(q.num_arrows());
        for a in 0..q.num_arrows() {
            let arr = q.arrow_data(a);
            let mut m = Matrix::zeros(field, coords.dims[arr.target], coords.dims[arr.source]);
            for (col, &b) in coords.by_vertex[arr.source].iter().enumerate() {
                let prod = alg.left_mul_arrow(a, &AlgebraElement::basis(b, field));
                for (i, c) in prod.terms() {
                    m[(coords.local[&i].1, col)] = c.clone();
                }
            }
            maps.push(m);
        }
        Ok(Representation::from_parts(alg.clone(), coords.dims, maps))
    }

    /// Simple module `S_v`.
    pub fn simple(alg: &Arc<Algebra>, v: VertexId) -> Result<Representation> {
        if v >= alg.num_vertices() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        let mut dims = vec![0; alg.num_vertices()];
        dims[v] = 1;
        let q = alg.quiver();
        let maps = (0..q.num_arrows())
            .map(|a| {
                let arr = q.arrow_data(a);
                Matrix::zeros(alg.field(), dims[arr.target], dims[arr.source])
            })
            .collect();
        Ok(Representation::from_parts(alg.clone(), dims, maps))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.inner.alg
    }

    pub fn field(&self) -> Field {
        self.inner.alg.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.inner.dims
    }

    pub fn dim(&self) -> usize {
        self.inner.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Multiplicities of the simples as composition factors, i.e. `dim e_i M`.
    pub fn composition_multiplicities(&self) -> Vec<usize> {
        self.inner.dims.clone()
    }

    pub fn arrow_matrix(&self, a: ArrowId) -> &Matrix {
        &self.inner.maps[a]
    }

    pub fn arrow_matrices(&self) -> &[Matrix] {
        &self.inner.maps
    }

    pub fn same_algebra(&self, other: &Representation) -> bool {
        Arc::ptr_eq(&self.inner.alg, &other.inner.alg) || *self.inner.alg == *other.inner.alg
    }

    pub(crate) fn require_same_algebra(&self, other: &Representation) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Matrix of the induced map `f_p : e_{s(p)} M -> e_{t(p)} M`.
    pub fn path_matrix(&self, p: &PathWord) -> Matrix {
        let mut m = Matrix::identity(self.field(), self.inner.dims[p.source]);
        for &a in &p.arrows {
            m = self.inner.maps[a].mul(&m);
        }
        m
    }

    pub fn act_path(&self, p: &PathWord, v: &[Scalar]) -> Vec<Scalar> {
        let mut cur = v.to_vec();
        for &a in &p.arrows {
            cur = self.inner.maps[a].mul_vec(&cur);
        }
        cur
    }

    /// Matrix of `x : e_s M -> e_t M` for an element whose terms run `s -> t`.
    pub fn element_matrix(&self, x: &AlgebraElement, s: VertexId, t: VertexId) -> Matrix {
        let alg = &self.inner.alg;
        let mut m = Matrix::zeros(self.field(), self.inner.dims[t], self.inner.dims[s]);
        for (i, c) in x.terms() {
            let p = alg.basis_path(i);
            if p.source == s && p.target == t {
                m = m.add(&self.path_matrix(p).scale(c));
            }
        }
        m
    }

    pub fn check_relations(&self) -> Result<()> {
        let alg = &self.inner.alg;
        for r in alg.relations() {
            let (s, t) = (r.terms[0].1.source, r.terms[0].1.target);
            let mut m = Matrix::zeros(self.field(), self.inner.dims[t], self.inner.dims[s]);
            for (c, p) in &r.terms {
                m = m.add(&self.path_matrix(p).scale(c));
            }
            if !m.is_zero() {
                return Err(Error::Invalid(format!(
                    "relation {} does not act as zero",
                    r.display(alg.quiver())
                )));
            }
        }
        Ok(())
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut off = Vec::with_capacity(self.inner.dims.len());
        let mut acc = 0;
        for d in &self.inner.dims {
            off.push(acc);
            acc += d;
        }
        off
    }

    pub fn zero_subspace(&self) -> VertexSubspace {
        self.inner
            .dims
            .iter()
            .map(|&d| Matrix::zeros(self.field(), d, 0))
            .collect()
    }

    pub fn full_subspace(&self) -> VertexSubspace {
        self.inner
            .dims
            .iter()
            .map(|&d| Matrix::identity(self.field(), d))
            .collect()
    }

    /// `JM`: span of all arrow images, vertex by vertex.
    pub fn radical_subspace(&self) -> VertexSubspace {
        let q = self.inner.alg.quiver();
        (0..q.num_vertices())
            .map(|v| {
                let mut m = Matrix::zeros(self.field(), self.inner.dims[v], 0);
                for a in q.arrows_into(v) {
                    m = m.hstack(&self.inner.maps[a]);
                }
                m.column_space()
            })
            .collect()
    }

    /// Joint kernel of the arrows leaving each vertex.
    pub fn socle_subspace(&self) -> VertexSubspace {
        let q = self.inner.alg.quiver();
        (0..q.num_vertices())
            .map(|v| {
                let mut m = Matrix::zeros(self.field(), 0, self.inner.dims[v]);
                for a in q.arrows_from(v) {
                    m = m.vstack(&self.inner.maps[a]);
                }
                m.kernel()
            })
            .collect()
    }

    /// Top multiplicities `dim e_i (M/JM)`.
    pub fn top(&self) -> Vec<usize> {
        self.radical_subspace()
            .iter()
            .zip(&self.inner.dims)
            .map(|(r, d)| d - r.cols())
            .collect()
    }

    /// Representatives of a basis of `M/JM`: unit vectors completing `JM`.
    pub fn top_elements(&self) -> Vec<(VertexId, Vec<Scalar>)> {
        let mut out = Vec::new();
        for (v, rad) in self.radical_subspace().iter().enumerate() {
            for i in subspace::complement_indices(rad) {
                let mut x = vec![self.field().zero(); self.inner.dims[v]];
                x[i] = self.field().one();
                out.push((v, x));
            }
        }
        out
    }

    pub fn radical(&self) -> (Representation, ModuleMap) {
        self.sub_representation(&self.radical_subspace())
            .expect("radical is a submodule")
    }

    pub fn socle(&self) -> (Representation, ModuleMap) {
        self.sub_representation(&self.socle_subspace())
            .expect("socle is a submodule")
    }

    /// Smallest submodule containing the given homogeneous vectors.
    pub fn generate_submodule(&self, gens: &[(VertexId, Vec<Scalar>)]) -> VertexSubspace {
        let field = self.field();
        let q = self.inner.alg.quiver();
        let n = q.num_vertices();
        let mut ech: Vec<Echelon> = self.inner.dims.iter().map(|&d| Echelon::new(field, d)).collect();
        let mut basis: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); n];
        let mut queue: Vec<(VertexId, Vec<Scalar>)> = gens.to_vec();
        while let Some((v, x)) = queue.pop() {
            if !ech[v].insert(to_sparse(&x)) {
                continue;
            }
            for a in q.arrows_from(v) {
                let y = self.inner.maps[a].mul_vec(&x);
                if y.iter().any(|c| !c.is_zero()) {
                    queue.push((q.arrow_data(a).target, y));
                }
            }
            basis[v].push(x);
        }
        basis
            .iter()
            .enumerate()
            .map(|(v, cols)| Matrix::from_columns(field, self.inner.dims[v], cols))
            .collect()
    }

    /// Splits a global vector into homogeneous generators and closes under the action.
    pub fn generate_from_global(&self, vectors: &[Vec<Scalar>]) -> VertexSubspace {
        let off = self.offsets();
        let mut gens = Vec::new();
        for x in vectors {
            for (v, &d) in self.inner.dims.iter().enumerate() {
                let part = x[off[v]..off[v] + d].to_vec();
                if part.iter().any(|c| !c.is_zero()) {
                    gens.push((v, part));
                }
            }
        }
        self.generate_submodule(&gens)
    }

    pub fn is_submodule(&self, sub: &VertexSubspace) -> bool {
        let q = self.inner.alg.quiver();
        (0..q.num_arrows()).all(|a| {
            let arr = q.arrow_data(a);
            let img = self.inner.maps[a].mul(&sub[arr.source]);
            subspace::contains_all(&sub[arr.target], &img)
        })
    }

    /// The submodule spanned vertex-wise by `sub` (columns must be independent) and its inclusion.
    pub fn sub_representation(&self, sub: &VertexSubspace) -> Result<(Representation, ModuleMap)> {
        let q = self.inner.alg.quiver();
        let mut maps = Vec::with_capacity(q.num_arrows());
        for a in 0..q.num_arrows() {
            let arr = q.arrow_data(a);
            let img = self.inner.maps[a].mul(&sub[arr.source]);
            let coords = sub[arr.target].solve_matrix(&img).ok_or_else(|| {
                Error::NotASubmodule(format!("not stable under `{}`", arr.name))
            })?;
            maps.push(coords);
        }
        let dims = sub.iter().map(Matrix::cols).collect();
        let rep = Representation::from_parts(self.inner.alg.clone(), dims, maps);
        let incl = ModuleMap::from_blocks_unchecked(rep.clone(), self.clone(), sub.clone());
        Ok((rep, incl))
    }

    /// `M / sub` with the projection and a vertex-wise linear section of it.
    pub fn quotient(&self, sub: &VertexSubspace) -> Result<Quotient> {
        if !self.is_submodule(sub) {
            return Err(Error::NotASubmodule("quotient by a non-stable subspace".into()));
        }
        let field = self.field();
        let n = self.inner.dims.len();
        let mut proj = Vec::with_capacity(n);
        let mut section = Vec::with_capacity(n);
        for v in 0..n {
            let d = self.inner.dims[v];
            let comp = subspace::complement_indices(&sub[v]);
            let units = subspace::unit_columns(field, d, &comp);
            let full = sub[v].hstack(&units);
            let inv = full.inverse().expect("subspace plus complement is a basis");
            proj.push(inv.block(sub[v].cols(), comp.len(), 0, d));
            section.push(units);
        }
        let q = self.inner.alg.quiver();
        let maps = (0..q.num_arrows())
            .map(|a| {
                let arr = q.arrow_data(a);
                proj[arr.target]
                    .mul(&self.inner.maps[a])
                    .mul(&section[arr.source])
            })
            .collect();
        let dims = section.iter().map(Matrix::cols).collect();
        let rep = Representation::from_parts(self.inner.alg.clone(), dims, maps);
        let projection = ModuleMap::from_blocks_unchecked(self.clone(), rep.clone(), proj);
        Ok(Quotient {
            module: rep,
            projection,
            section,
        })
    }

    /// Direct sum with the canonical injections and projections.
    pub fn direct_sum(alg: &Arc<Algebra>, parts: &[Representation]) -> Result<DirectSum> {
        for p in parts {
            if !Arc::ptr_eq(p.algebra(), alg) && **p.algebra() != **alg {
                return Err(Error::AlgebraMismatch);
            }
        }
        let field = alg.field();
        let q = alg.quiver();
        let n = q.num_vertices();
        let dims: Vec<usize> = (0..n)
            .map(|v| parts.iter().map(|p| p.dims()[v]).sum())
            .collect();
        let mut maps = Vec::with_capacity(q.num_arrows());
        for a in 0..q.num_arrows() {
            let arr = q.arrow_data(a);
            let mut m = Matrix::zeros(field, dims[arr.target], dims[arr.source]);
            let (mut r0, mut c0) = (0, 0);
            for p in parts {
                m.set_block(r0, c0, p.arrow_matrix(a));
                r0 += p.dims()[arr.target];
                c0 += p.dims()[arr.source];
            }
            maps.push(m);
        }
        let sum = Representation::from_parts(alg.clone(), dims.clone(), maps);
        let mut injections = Vec::with_capacity(parts.len());
        let mut projections = Vec::with_capacity(parts.len());
        let mut start = vec![0; n];
        for p in parts {
            let mut inj = Vec::with_capacity(n);
            let mut pr = Vec::with_capacity(n);
            for v in 0..n {
                let mut i = Matrix::zeros(field, dims[v], p.dims()[v]);
                i.set_block(start[v], 0, &Matrix::identity(field, p.dims()[v]));
                pr.push(i.transpose());
                inj.push(i);
                start[v] += p.dims()[v];
            }
            injections.push(ModuleMap::from_blocks_unchecked(p.clone(), sum.clone(), inj));
            projections.push(ModuleMap::from_blocks_unchecked(sum.clone(), p.clone(), pr));
        }
        Ok(DirectSum {
            module: sum,
            injections,
            projections,
        })
    }

    /// Vertex-wise sum of two subspaces.
    pub fn subspace_sum(a: &VertexSubspace, b: &VertexSubspace) -> VertexSubspace {
        a.iter().zip(b).map(|(x, y)| subspace::sum(x, y)).collect()
    }

    pub fn subspace_dims(sub: &VertexSubspace) -> Vec<usize> {
        sub.iter().map(Matrix::cols).collect()
    }
}

pub struct Quotient {
    pub module: Representation,
    pub projection: ModuleMap,
    /// vertex-wise linear (not module) section of the projection
    pub section: Vec<Matrix>,
}

pub struct DirectSum {
    pub module: Representation,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

pub(crate) fn to_sparse(x: &[Scalar]) -> SparseRow {
    x.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Local coordinates of `Λe_v`: residue paths from `v` grouped by target.
pub struct ProjectiveCoords {
    pub vertex: VertexId,
    pub dims: Vec<usize>,
    /// algebra basis indices per target vertex
    pub by_vertex: Vec<Vec<usize>>,
    /// algebra basis index -> (target vertex, local index)
    pub local: std::collections::HashMap<usize, (VertexId, usize)>,
}

impl ProjectiveCoords {
    pub fn new(alg: &Algebra, v: VertexId) -> ProjectiveCoords {
        let n = alg.num_vertices();
        let mut by_vertex = vec![Vec::new(); n];
        let mut local = std::collections::HashMap::new();
        for i in alg.basis_from(v) {
            let t = alg.basis_path(i).target;
            local.insert(i, (t, by_vertex[t].len()));
            by_vertex[t].push(i);
        }
        ProjectiveCoords {
            vertex: v,
            dims: by_vertex.iter().map(Vec::len).collect(),
            by_vertex,
            local,
        }
    }

    /// Vertex-wise coordinates of an element of `Λe_v`.
    pub fn coordinates(&self, field: Field, x: &AlgebraElement) -> Vec<Vec<Scalar>> {
        let mut out: Vec<Vec<Scalar>> = self.dims.iter().map(|&d| vec![field.zero(); d]).collect();
        for (i, c) in x.terms() {
            let (t, k) = self.local[&i];
            out[t][k] = c.clone();
        }
        out
    }
}

/// Homomorphism `Λe_v -> M` sending `e_v` to `x ∈ e_v M`, as blocks on the path basis.
pub fn map_from_projective(m: &Representation, v: VertexId, x: &[Scalar]) -> Vec<Matrix> {
    let alg = m.algebra();
    let coords = ProjectiveCoords::new(alg, v);
    (0..alg.num_vertices())
        .map(|t| {
            let cols: Vec<Vec<Scalar>> = coords.by_vertex[t]
                .iter()
                .map(|&b| m.act_path(alg.basis_path(b), x))
                .collect();
            Matrix::from_columns(m.field(), m.dims()[t], &cols)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn projectives_of_example_two() {
        let alg = fixtures::ex2_algebra();
        let p1 = Representation::projective(&alg, 0).unwrap();
        let p2 = Representation::projective(&alg, 1).unwrap();
        assert_eq!(p1.dims(), &[2, 2]);
        assert_eq!(p2.dims(), &[1, 1]);
        assert_eq!(p1.top(), vec![1, 0]);
        assert!(p1.check_relations().is_ok());
        assert_eq!(Representation::simple(&alg, 0).unwrap().dims(), &[1, 0]);
        assert_eq!(Representation::direct_sum(&alg, &[]).unwrap().module.dim(), 0);
    }

    #[test]
    fn quotient_by_radical_is_simple() {
        let alg = fixtures::ex2_algebra();
        let p1 = Representation::projective(&alg, 0).unwrap();
        let q = p1.quotient(&p1.radical_subspace()).unwrap();
        assert_eq!(q.module, Representation::simple(&alg, 0).unwrap());
        assert!(q.projection.is_surjective());
    }

    #[test]
    fn invalid_representation_rejected() {
        let alg = fixtures::ex2_algebra();
        let f = alg.field();
        // alpha*gamma acts as 1 on the 1-dim space at vertex 2
        let one = Matrix::identity(f, 1);
        let r = Representation::new(&alg, vec![1, 1], vec![one.clone(), Matrix::zeros(f, 1, 1), one]);
        assert!(r.is_err());
        let bad_shape = Representation::new(&alg, vec![1, 1], vec![Matrix::zeros(f, 2, 1); 3]);
        assert!(matches!(bad_shape, Err(Error::DimensionMismatch(_))));
    }
}
