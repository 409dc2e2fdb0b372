use std::fmt;

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::Matrix;

use super::{Representation, VertexSubspace};

/// Module homomorphism given by one matrix per vertex.
#[derive(Clone, PartialEq)]
pub struct ModuleMap {
    source: Representation,
    target: Representation,
    blocks: Vec<Matrix>,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModuleMap")
            .field("source_dims", &self.source.dims())
            .field("target_dims", &self.target.dims())
            .field("blocks", &self.blocks)
            .finish()
    }
}

impl ModuleMap {
    /// Checks shapes and the intertwining condition for every arrow.
    pub fn new(source: Representation, target: Representation, blocks: Vec<Matrix>) -> Result<ModuleMap> {
        source.require_same_algebra(&target)?;
        let n = source.dims().len();
        if blocks.len() != n {
            return Err(Error::DimensionMismatch(format!("{} blocks for {n} vertices", blocks.len())));
        }
        for (v, b) in blocks.iter().enumerate() {
            if b.shape() != (target.dims()[v], source.dims()[v]) {
                return Err(Error::DimensionMismatch(format!("block at vertex {v} has wrong shape")));
            }
        }
        let map = ModuleMap { source, target, blocks };
        if !map.intertwines() {
            return Err(Error::Invalid("matrices do not commute with the arrows".into()));
        }
        Ok(map)
    }

    pub(crate) fn from_blocks_unchecked(
        source: Representation,
        target: Representation,
        blocks: Vec<Matrix>,
    ) -> ModuleMap {
        debug_assert_eq!(blocks.len(), source.dims().len());
        ModuleMap { source, target, blocks }
    }

    pub fn intertwines(&self) -> bool {
        let q = self.source.algebra().quiver();
        (0..q.num_arrows()).all(|a| {
            let arr = q.arrow_data(a);
            let lhs = self.target.arrow_matrix(a).mul(&self.blocks[arr.source]);
            let rhs = self.blocks[arr.target].mul(self.source.arrow_matrix(a));
            lhs == rhs
        })
    }

    pub fn identity(m: &Representation) -> ModuleMap {
        let blocks = m.dims().iter().map(|&d| Matrix::identity(m.field(), d)).collect();
        ModuleMap::from_blocks_unchecked(m.clone(), m.clone(), blocks)
    }

    pub fn zero(source: &Representation, target: &Representation) -> ModuleMap {
        let blocks = source
            .dims()
            .iter()
            .zip(target.dims())
            .map(|(&s, &t)| Matrix::zeros(source.field(), t, s))
            .collect();
        ModuleMap::from_blocks_unchecked(source.clone(), target.clone(), blocks)
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    pub fn block(&self, v: usize) -> &Matrix {
        &self.blocks[v]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleMap) -> ModuleMap {
        assert_eq!(other.target.dims(), self.source.dims(), "composition of incompatible maps");
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.mul(b)).collect();
        ModuleMap::from_blocks_unchecked(other.source.clone(), self.target.clone(), blocks)
    }

    pub fn add(&self, other: &ModuleMap) -> ModuleMap {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect();
        ModuleMap::from_blocks_unchecked(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn sub(&self, other: &ModuleMap) -> ModuleMap {
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.sub(b)).collect();
        ModuleMap::from_blocks_unchecked(self.source.clone(), self.target.clone(), blocks)
    }

    pub fn scale(&self, c: &Scalar) -> ModuleMap {
        let blocks = self.blocks.iter().map(|a| a.scale(c)).collect();
        ModuleMap::from_blocks_unchecked(self.source.clone(), self.target.clone(), blocks)
    }

    /// Linear combination `Σ c_i maps_i`; all maps share source and target.
    pub fn combination(source: &Representation, target: &Representation, terms: &[(Scalar, &ModuleMap)]) -> ModuleMap {
        let mut out = ModuleMap::zero(source, target);
        for (c, m) in terms {
            if !c.is_zero() {
                out = out.add(&m.scale(c));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Matrix::is_zero)
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Matrix::rank).sum()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.source.dim()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.source.dims() == self.target.dims() && self.blocks.iter().all(Matrix::is_invertible)
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        let blocks = self
            .blocks
            .iter()
            .map(Matrix::inverse)
            .collect::<Option<Vec<_>>>()?;
        Some(ModuleMap::from_blocks_unchecked(self.target.clone(), self.source.clone(), blocks))
    }

    /// `self^e` for an endomorphism.
    pub fn pow(&self, e: usize) -> ModuleMap {
        let mut out = ModuleMap::identity(&self.source);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        out
    }

    /// Concatenation of the row-major vertex blocks.
    pub fn to_flat(&self) -> Vec<Scalar> {
        self.blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }

    pub fn from_flat(source: &Representation, target: &Representation, flat: &[Scalar]) -> ModuleMap {
        let mut blocks = Vec::with_capacity(source.dims().len());
        let mut pos = 0;
        for (&s, &t) in source.dims().iter().zip(target.dims()) {
            blocks.push(Matrix::from_rows(source.field(), t, s, flat[pos..pos + s * t].to_vec()));
            pos += s * t;
        }
        ModuleMap::from_blocks_unchecked(source.clone(), target.clone(), blocks)
    }

    pub fn kernel_subspace(&self) -> VertexSubspace {
        self.blocks.iter().map(Matrix::kernel).collect()
    }

    pub fn image_subspace(&self) -> VertexSubspace {
        self.blocks.iter().map(Matrix::column_space).collect()
    }

    /// Image of a vertex-wise subspace of the source.
    pub fn image_of(&self, sub: &VertexSubspace) -> VertexSubspace {
        self.blocks
            .iter()
            .zip(sub)
            .map(|(b, s)| b.mul(s).column_space())
            .collect()
    }

    pub fn kernel(&self) -> (Representation, ModuleMap) {
        self.source
            .sub_representation(&self.kernel_subspace())
            .expect("kernel is a submodule")
    }

    /// `(im f, f: source -> im f, im f -> target)`.
    pub fn image(&self) -> (Representation, ModuleMap, ModuleMap) {
        let sub = self.image_subspace();
        let (im, incl) = self
            .target
            .sub_representation(&sub)
            .expect("image is a submodule");
        let blocks = self
            .blocks
            .iter()
            .zip(&sub)
            .map(|(b, s)| s.solve_matrix(b).expect("columns lie in the image"))
            .collect();
        let onto = ModuleMap::from_blocks_unchecked(self.source.clone(), im.clone(), blocks);
        (im, onto, incl)
    }

    /// Replaces the source by a submodule via its inclusion.
    pub fn restrict(&self, incl: &ModuleMap) -> ModuleMap {
        self.compose(incl)
    }

    pub fn with_target(&self, target: Representation) -> ModuleMap {
        ModuleMap::from_blocks_unchecked(self.source.clone(), target, self.blocks.clone())
    }

    pub fn with_source(&self, source: Representation) -> ModuleMap {
        ModuleMap::from_blocks_unchecked(source, self.target.clone(), self.blocks.clone())
    }
}

#[cfg(test)]
mod tests {
    use crate::fixtures;
    use crate::rep::{hom_space, Representation};

    use super::*;

    #[test]
    fn kernel_image_bookkeeping() {
        let alg = fixtures::ex2_algebra();
        let p1 = Representation::projective(&alg, 0).unwrap();
        let s1 = Representation::simple(&alg, 0).unwrap();
        let id = ModuleMap::identity(&p1);
        assert_eq!(id.kernel().0.dim(), 0);
        let f = &hom_space(&p1, &s1).unwrap()[0];
        let (k, _) = f.kernel();
        let (im, onto, incl) = f.image();
        for v in 0..2 {
            assert_eq!(k.dims()[v] + im.dims()[v], p1.dims()[v]);
        }
        assert_eq!(incl.compose(&onto), *f);
        assert!(f.intertwines());
    }

    #[test]
    fn rejects_non_intertwining_blocks() {
        let alg = fixtures::ex2_algebra();
        let p1 = Representation::projective(&alg, 0).unwrap();
        let f = alg.field();
        let blocks = vec![Matrix::identity(f, 2), Matrix::zeros(f, 2, 2)];
        assert!(ModuleMap::new(p1.clone(), p1, blocks).is_err());
    }
}
