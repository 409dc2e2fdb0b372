use crate::error::Result;
use crate::field::Scalar;
use crate::matrix::{Echelon, SparseRow};

use super::{ModuleMap, Representation};

/// Unknown `φ_v[r][c]` of a map `M -> N` in flat coordinates.
struct Layout {
    offsets: Vec<usize>,
    total: usize,
}

impl Layout {
    fn new(m: &Representation, n: &Representation) -> Layout {
        let mut offsets = Vec::with_capacity(m.dims().len());
        let mut total = 0;
        for (&dm, &dn) in m.dims().iter().zip(n.dims()) {
            offsets.push(total);
            total += dm * dn;
        }
        Layout { offsets, total }
    }

    fn index(&self, v: usize, r: usize, c: usize, dm: usize) -> usize {
        self.offsets[v] + r * dm + c
    }
}

fn push_row(ech: &mut Echelon, mut row: SparseRow) {
    row.sort_by_key(|e| e.0);
    let mut merged: SparseRow = Vec::with_capacity(row.len());
    for (c, v) in row {
        match merged.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += &v,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|(_, v)| !v.is_zero());
    if !merged.is_empty() {
        ech.insert(merged);
    }
}

fn intertwining_system(m: &Representation, n: &Representation, layout: &Layout) -> Echelon {
    let q = m.algebra().quiver();
    let mut ech = Echelon::new(m.field(), layout.total);
    for a in 0..q.num_arrows() {
        let arr = q.arrow_data(a);
        let (s, t) = (arr.source, arr.target);
        let ma = m.arrow_matrix(a);
        let na = n.arrow_matrix(a);
        // N_a φ_s - φ_t M_a = 0, entry (r, c) with r in N_t, c in M_s
        for r in 0..n.dims()[t] {
            for c in 0..m.dims()[s] {
                let mut row: SparseRow = Vec::new();
                for k in 0..n.dims()[s] {
                    let coeff = &na[(r, k)];
                    if !coeff.is_zero() {
                        row.push((layout.index(s, k, c, m.dims()[s]), coeff.clone()));
                    }
                }
                for k in 0..m.dims()[t] {
                    let coeff = &ma[(k, c)];
                    if !coeff.is_zero() {
                        row.push((layout.index(t, r, k, m.dims()[t]), -coeff));
                    }
                }
                push_row(&mut ech, row);
            }
        }
    }
    ech
}

fn solve_basis(m: &Representation, n: &Representation, mut ech: Echelon) -> Vec<ModuleMap> {
    ech.back_substitute();
    ech.nullspace()
        .into_iter()
        .map(|flat| ModuleMap::from_flat(m, n, &flat))
        .collect()
}

/// Basis of `Hom_Λ(M, N)`.
pub fn hom_space(m: &Representation, n: &Representation) -> Result<Vec<ModuleMap>> {
    m.require_same_algebra(n)?;
    let layout = Layout::new(m, n);
    let ech = intertwining_system(m, n, &layout);
    Ok(solve_basis(m, n, ech))
}

pub fn hom_dimension(m: &Representation, n: &Representation) -> Result<usize> {
    m.require_same_algebra(n)?;
    let layout = Layout::new(m, n);
    let mut ech = intertwining_system(m, n, &layout);
    ech.back_substitute();
    Ok(layout.total - ech.rank())
}

/// Basis of `{h ∈ Hom(M, N) : f ∘ h = 0}` for `f : N -> X`.
pub fn hom_space_killed_by(m: &Representation, f: &ModuleMap) -> Result<Vec<ModuleMap>> {
    let n = f.source();
    m.require_same_algebra(n)?;
    let layout = Layout::new(m, n);
    let mut ech = intertwining_system(m, n, &layout);
    for v in 0..m.dims().len() {
        let fv = f.block(v);
        for r in 0..fv.rows() {
            for c in 0..m.dims()[v] {
                let row: SparseRow = (0..n.dims()[v])
                    .filter(|&k| !fv[(r, k)].is_zero())
                    .map(|k| (layout.index(v, k, c, m.dims()[v]), fv[(r, k)].clone()))
                    .collect();
                push_row(&mut ech, row);
            }
        }
    }
    Ok(solve_basis(m, n, ech))
}

/// Flat coordinates of `f ∘ h` for each `h` in `basis`.
pub fn hom_span_flats(f: &ModuleMap, basis: &[ModuleMap]) -> Vec<Vec<Scalar>> {
    basis.iter().map(|h| f.compose(h).to_flat()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn hom_between_projectives_and_simples() {
        let alg = fixtures::ex2_algebra();
        let p1 = Representation::projective(&alg, 0).unwrap();
        let s1 = Representation::simple(&alg, 0).unwrap();
        assert_eq!(hom_dimension(&p1, &s1).unwrap(), 1);
        assert_eq!(hom_dimension(&s1, &p1).unwrap(), 1);
        // Hom(Λe_i, M) ≅ e_i M
        assert_eq!(hom_dimension(&p1, &p1).unwrap(), p1.dims()[0]);
        for h in hom_space(&p1, &p1).unwrap() {
            assert!(h.intertwines());
        }
    }

    #[test]
    fn killed_by_subspace() {
        let alg = fixtures::ex2_algebra();
        let p1 = Representation::projective(&alg, 0).unwrap();
        let s1 = Representation::simple(&alg, 0).unwrap();
        let f = hom_space(&p1, &s1).unwrap().remove(0);
        let v = hom_space_killed_by(&p1, &f).unwrap();
        // radical endomorphisms of Λe_1: right multiplication by γα
        assert_eq!(v.len(), 1);
        assert!(f.compose(&v[0]).is_zero());
    }
}
