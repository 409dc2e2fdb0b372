//! Finite dimensional quotients `KΓ/I` of path algebras by length-homogeneous ideals.
//!
//! The basis is computed degree by degree. Degree `d` of the quotient is
//! `KΓ_1 ⊗ Λ_{d-1}` modulo the span of `r·v` for relations `r` and basis paths
//! `v`, so only pairs (arrow, basis path of degree `d-1`) are ever enumerated.
//! Each basis element is represented by one residue path; the table
//! `left_mul[b][a]` holds `a·b` re-expanded over the basis.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{subspace, Echelon, Matrix, SparseRow};
use crate::quiver::{ArrowId, PathWord, Quiver, VertexId};

/// Formal linear combination of paths in `KΓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCombination {
    pub terms: Vec<(Scalar, PathWord)>,
}

impl PathCombination {
    pub fn path(field: Field, p: PathWord) -> PathCombination {
        PathCombination {
            terms: vec![(field.one(), p)],
        }
    }

    /// Merges equal paths and drops zero coefficients.
    pub fn collect(&self) -> PathCombination {
        let mut acc: BTreeMap<PathWord, Scalar> = BTreeMap::new();
        for (c, p) in &self.terms {
            match acc.get_mut(p) {
                Some(v) => *v += c,
                None => {
                    acc.insert(p.clone(), c.clone());
                }
            }
        }
        PathCombination {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(p, c)| (c, p))
                .collect(),
        }
    }

    pub fn display<'a>(&'a self, q: &'a Quiver) -> impl fmt::Display + 'a {
        CombinationDisplay { comb: self, q }
    }
}

struct CombinationDisplay<'a> {
    comb: &'a PathCombination,
    q: &'a Quiver,
}

impl fmt::Display for CombinationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comb.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (c, p)) in self.comb.terms.iter().enumerate() {
            write_term(f, i == 0, c, &p.display(self.q).to_string())?;
        }
        Ok(())
    }
}

pub(crate) fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Scalar,
    body: &str,
) -> fmt::Result {
    let text = c.to_string();
    let (neg, mag) = match text.strip_prefix('-') {
        Some(m) => (true, m.to_string()),
        None => (false, text),
    };
    let sign = match (first, neg) {
        (true, false) => "",
        (true, true) => "-",
        (false, false) => " + ",
        (false, true) => " - ",
    };
    if mag == "1" {
        write!(f, "{sign}{body}")
    } else {
        write!(f, "{sign}{mag}*{body}")
    }
}

/// Element of `Λ` in normal form: coefficients on basis indices, zeros dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    terms: BTreeMap<usize, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> AlgebraElement {
        AlgebraElement::default()
    }

    pub fn basis(i: usize, field: Field) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        terms.insert(i, field.one());
        AlgebraElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.terms.iter().map(|(i, c)| (*i, c))
    }

    pub fn coefficient(&self, i: usize) -> Option<&Scalar> {
        self.terms.get(&i)
    }

    pub fn add_term(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(&i) {
            Some(v) => {
                *v += c;
                v.is_zero()
            }
            None => {
                self.terms.insert(i, c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &AlgebraElement) {
        for (i, v) in &other.terms {
            self.add_term(*i, &(c * v));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn plus(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (i, v) in &other.terms {
            out.add_term(*i, v);
        }
        out
    }

    pub fn minus(&self, other: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (i, v) in &other.terms {
            out.add_term(*i, &-v);
        }
        out
    }

    pub fn to_vec(&self, field: Field, dim: usize) -> Vec<Scalar> {
        let mut v = vec![field.zero(); dim];
        for (i, c) in &self.terms {
            v[*i] = c.clone();
        }
        v
    }

    pub fn from_vec(v: &[Scalar]) -> AlgebraElement {
        AlgebraElement {
            terms: v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    fn to_sparse(&self) -> SparseRow {
        self.terms.iter().map(|(i, c)| (*i, c.clone())).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Algebra {
    quiver: Quiver,
    field: Field,
    relations: Vec<PathCombination>,
    max_len: usize,
    basis: Vec<PathWord>,
    by_degree: Vec<Vec<usize>>,
    /// `left_mul[b][a]` is `a·b`
    left_mul: Vec<Vec<AlgebraElement>>,
    monomial: bool,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.quiver == other.quiver
            && self.field == other.field
            && self.relations == other.relations
            && self.basis == other.basis
    }
}

impl Algebra {
    /// Builds `KΓ/I`, `I` generated by `relations`; `max_len` must satisfy `J^max_len ⊆ I`.
    pub fn build(
        quiver: Quiver,
        field: Field,
        relations: Vec<PathCombination>,
        max_len: usize,
    ) -> Result<Algebra> {
        if max_len == 0 {
            return Err(Error::NonAdmissible("maxlen must be positive".into()));
        }
        let relations: Vec<PathCombination> = relations.iter().map(|r| r.collect()).collect();
        let mut rel_degree = Vec::with_capacity(relations.len());
        for r in &relations {
            let text = r.display(&quiver).to_string();
            let Some((_, first)) = r.terms.first() else {
                continue;
            };
            let len = first.len();
            if r.terms.iter().any(|(_, p)| p.len() != len) {
                return Err(Error::InhomogeneousRelation(text));
            }
            if r
                .terms
                .iter()
                .any(|(_, p)| p.source != first.source || p.target != first.target)
            {
                return Err(Error::EndpointMismatch(format!(
                    "terms of `{text}` do not share endpoints"
                )));
            }
            if len < 2 {
                return Err(Error::NonAdmissible(format!(
                    "relation `{text}` has length {len} < 2"
                )));
            }
            rel_degree.push(len);
        }
        let relations: Vec<PathCombination> =
            relations.into_iter().filter(|r| !r.terms.is_empty()).collect();
        let monomial = relations.iter().all(|r| r.terms.len() == 1);

        let n = quiver.num_vertices();
        let na = quiver.num_arrows();
        let mut alg = Algebra {
            quiver,
            field,
            relations,
            max_len,
            basis: Vec::new(),
            by_degree: Vec::new(),
            left_mul: Vec::new(),
            monomial,
        };
        for v in 0..n {
            alg.push_basis(PathWord::trivial(v));
        }
        alg.by_degree.push((0..n).collect());
        if max_len == 1 && na > 0 {
            return Err(Error::NonAdmissible(
                "arrows survive at length maxlen = 1".into(),
            ));
        }
        let mut deg1 = Vec::with_capacity(na);
        for a in 0..na {
            let p = PathWord::arrow(&alg.quiver, a);
            let idx = alg.push_basis(p);
            let src = alg.quiver.arrow_data(a).source;
            alg.left_mul[src][a] = AlgebraElement::basis(idx, field);
            deg1.push(idx);
        }
        alg.by_degree.push(deg1);

        for d in 2..=max_len {
            if alg.by_degree[d - 1].is_empty() {
                break;
            }
            let mut candidates: Vec<(ArrowId, usize)> = Vec::new();
            let mut cand_index: HashMap<(ArrowId, usize), usize> = HashMap::new();
            for &b in &alg.by_degree[d - 1] {
                let t = alg.basis[b].target;
                for a in alg.quiver.arrows_from(t) {
                    cand_index.insert((a, b), candidates.len());
                    candidates.push((a, b));
                }
            }
            let mut ech = Echelon::new(field, candidates.len());
            for r in &alg.relations {
                let k = r.terms[0].1.len();
                if k > d {
                    continue;
                }
                let rs = r.terms[0].1.source;
                for &v in &alg.by_degree[d - k] {
                    if alg.basis[v].target != rs {
                        continue;
                    }
                    let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for (c, w) in &r.terms {
                        let last = *w.arrows.last().expect("relations have positive length");
                        let rest = w.first_part(&alg.quiver, k - 1);
                        let inner =
                            alg.left_mul_path(&rest, &AlgebraElement::basis(v, field));
                        for (b, coeff) in inner.terms() {
                            let ci = cand_index[&(last, b)];
                            let add = c * coeff;
                            let e = row.entry(ci).or_insert_with(|| field.zero());
                            *e += &add;
                        }
                    }
                    let row: SparseRow = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
                    ech.insert(row);
                }
            }
            ech.back_substitute();
            let pivots = ech.pivots();
            let mut is_pivot = vec![false; candidates.len()];
            for &p in &pivots {
                is_pivot[p] = true;
            }
            // free candidates become basis elements
            let mut new_index = vec![usize::MAX; candidates.len()];
            let mut deg = Vec::new();
            for (ci, &(a, b)) in candidates.iter().enumerate() {
                if !is_pivot[ci] {
                    let word = PathWord::arrow(&alg.quiver, a)
                        .after(&alg.basis[b])
                        .expect("candidate is composable");
                    let idx = alg.push_basis(word);
                    new_index[ci] = idx;
                    deg.push(idx);
                }
            }
            if d == max_len && !deg.is_empty() {
                let word = alg.basis[deg[0]].display(&alg.quiver).to_string();
                return Err(Error::NonAdmissible(format!(
                    "path {word} of length {max_len} does not reduce to 0"
                )));
            }
            for (ci, &(a, b)) in candidates.iter().enumerate() {
                let nf = if is_pivot[ci] {
                    let mut e = AlgebraElement::zero();
                    for (pc, row) in ech.rows() {
                        if *pc != ci {
                            continue;
                        }
                        for (c, v) in row {
                            if *c != ci {
                                e.add_term(new_index[*c], &-v);
                            }
                        }
                    }
                    e
                } else {
                    AlgebraElement::basis(new_index[ci], field)
                };
                alg.left_mul[b][a] = nf;
            }
            alg.by_degree.push(deg);
        }
        while alg.by_degree.last().is_some_and(|d| d.is_empty()) {
            alg.by_degree.pop();
        }
        Ok(alg)
    }

    fn push_basis(&mut self, p: PathWord) -> usize {
        let idx = self.basis.len();
        self.basis.push(p);
        self.left_mul
            .push(vec![AlgebraElement::zero(); self.quiver.num_arrows()]);
        idx
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn relations(&self) -> &[PathCombination] {
        &self.relations
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn is_monomial(&self) -> bool {
        self.monomial
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.quiver.num_vertices()
    }

    /// Least `N` with `J^N = 0`.
    pub fn loewy_length(&self) -> usize {
        self.by_degree.len()
    }

    pub fn degree_sizes(&self) -> Vec<usize> {
        self.by_degree.iter().map(Vec::len).collect()
    }

    pub fn basis_path(&self, i: usize) -> &PathWord {
        &self.basis[i]
    }

    pub fn basis_paths(&self) -> &[PathWord] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> usize {
        self.basis[i].len()
    }

    /// Basis indices of `e_t Λ e_s`.
    pub fn basis_between(&self, s: VertexId, t: VertexId) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.basis[i].source == s && self.basis[i].target == t)
            .collect()
    }

    /// Basis indices of `Λe_s`, i.e. paths starting at `s`.
    pub fn basis_from(&self, s: VertexId) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.basis[i].source == s)
            .collect()
    }

    pub fn idempotent(&self, v: VertexId) -> AlgebraElement {
        AlgebraElement::basis(v, self.field)
    }

    pub fn unit(&self) -> AlgebraElement {
        let mut e = AlgebraElement::zero();
        for v in 0..self.num_vertices() {
            e.add_term(v, &self.field.one());
        }
        e
    }

    pub fn arrow_element(&self, a: ArrowId) -> AlgebraElement {
        AlgebraElement::basis(self.num_vertices() + a, self.field)
    }

    pub fn left_mul_arrow(&self, a: ArrowId, x: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (b, c) in x.terms() {
            out.add_scaled(c, &self.left_mul[b][a]);
        }
        out
    }

    /// `p·x` for a path `p`.
    pub fn left_mul_path(&self, p: &PathWord, x: &AlgebraElement) -> AlgebraElement {
        if p.is_trivial() {
            let mut out = AlgebraElement::zero();
            for (b, c) in x.terms() {
                if self.basis[b].target == p.source {
                    out.add_term(b, c);
                }
            }
            return out;
        }
        let mut cur = AlgebraElement::zero();
        for (b, c) in x.terms() {
            if self.basis[b].target == p.source {
                cur.add_term(b, c);
            }
        }
        for &a in &p.arrows {
            if cur.is_zero() {
                break;
            }
            cur = self.left_mul_arrow(a, &cur);
        }
        cur
    }

    pub fn path_element(&self, p: &PathWord) -> AlgebraElement {
        self.left_mul_path(p, &self.idempotent(p.source))
    }

    pub fn normal_form(&self, x: &PathCombination) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (c, p) in &x.terms {
            out.add_scaled(c, &self.path_element(p));
        }
        out
    }

    /// Whether the path is nonzero in `Λ`.
    pub fn path_survives(&self, p: &PathWord) -> bool {
        !self.path_element(p).is_zero()
    }

    pub fn multiply(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (i, c) in x.terms() {
            let prod = self.left_mul_path(&self.basis[i], y);
            out.add_scaled(c, &prod);
        }
        out
    }

    /// Basis (as columns in `K^{dim Λ}`) of the left ideal `Σ Λ·g`.
    pub fn left_ideal(&self, gens: &[AlgebraElement]) -> Matrix {
        let mut cols = Vec::new();
        for g in gens {
            for i in 0..self.dim() {
                let p = self.left_mul_path(&self.basis[i], g);
                if !p.is_zero() {
                    cols.push(p.to_vec(self.field, self.dim()));
                }
            }
        }
        if cols.is_empty() {
            return Matrix::zeros(self.field, self.dim(), 0);
        }
        subspace::span(self.field, self.dim(), &cols)
    }

    pub fn left_ideal_dimension(&self, gens: &[AlgebraElement]) -> usize {
        self.left_ideal(gens).cols()
    }

    /// Basis of `Λx ∩ Λy`.
    pub fn left_ideal_intersection(&self, x: &AlgebraElement, y: &AlgebraElement) -> Matrix {
        let a = self.left_ideal(std::slice::from_ref(x));
        let b = self.left_ideal(std::slice::from_ref(y));
        subspace::intersection(&a, &b)
    }

    /// Row-vector form of an element, for membership tests.
    pub fn element_row(&self, x: &AlgebraElement) -> SparseRow {
        x.to_sparse()
    }

    /// Parses `2*alpha*gamma - 1/2*e1 + delta` into a path combination.
    pub fn parse_combination(&self, text: &str) -> Result<PathCombination> {
        crate::format::parse_path_combination(&self.quiver, self.field, text)
    }

    pub fn parse_element(&self, text: &str) -> Result<AlgebraElement> {
        Ok(self.normal_form(&self.parse_combination(text)?))
    }

    /// The (source, target) pair shared by all terms, if any.
    pub fn endpoints(&self, x: &AlgebraElement) -> Option<(VertexId, VertexId)> {
        let mut it = x.terms().map(|(i, _)| (self.basis[i].source, self.basis[i].target));
        let first = it.next()?;
        it.all(|e| e == first).then_some(first)
    }

    pub fn display_element<'a>(&'a self, x: &'a AlgebraElement) -> impl fmt::Display + 'a {
        ElementDisplay { alg: self, x }
    }
}

struct ElementDisplay<'a> {
    alg: &'a Algebra,
    x: &'a AlgebraElement,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x.is_zero() {
            return write!(f, "0");
        }
        for (k, (i, c)) in self.x.terms().enumerate() {
            let body = self.alg.basis[i].display(&self.alg.quiver).to_string();
            write_term(f, k == 0, c, &body)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex2() -> Algebra {
        let q = Quiver::new(
            &["1", "2"],
            &[("alpha", "1", "2"), ("beta", "1", "2"), ("gamma", "2", "1")],
        )
        .unwrap();
        let f = Field::Rational;
        let rels = ["alpha*gamma", "beta*gamma", "gamma*beta"]
            .iter()
            .map(|r| PathCombination::path(f, q.parse_path(r).unwrap()))
            .collect();
        Algebra::build(q, f, rels, 4).unwrap()
    }

    #[test]
    fn example_two_basis() {
        let a = ex2();
        assert_eq!(a.dim(), 6);
        assert!(a.is_monomial());
        assert_eq!(a.degree_sizes(), vec![2, 3, 1]);
        assert_eq!(a.loewy_length(), 3);
        let g = a.parse_element("gamma*alpha").unwrap();
        assert!(!g.is_zero());
        assert!(a.parse_element("alpha*gamma").unwrap().is_zero());
        // e_t Λ e_s dimensions
        assert_eq!(a.basis_between(0, 0).len(), 2);
        assert_eq!(a.basis_between(0, 1).len(), 2);
        assert_eq!(a.basis_between(1, 0).len(), 1);
        assert_eq!(a.basis_between(1, 1).len(), 1);
    }

    #[test]
    fn multiplication_conventions() {
        let a = ex2();
        let alpha = a.parse_element("alpha").unwrap();
        let gamma = a.parse_element("gamma").unwrap();
        let e1 = a.idempotent(0);
        let e2 = a.idempotent(1);
        assert_eq!(a.multiply(&gamma, &alpha), a.parse_element("gamma*alpha").unwrap());
        assert!(a.multiply(&alpha, &gamma).is_zero());
        assert_eq!(a.multiply(&e2, &alpha), alpha);
        assert!(a.multiply(&alpha, &e2).is_zero());
        assert_eq!(a.multiply(&e1, &e1), e1);
        assert_eq!(a.multiply(&a.unit(), &gamma), gamma);
    }

    #[test]
    fn left_ideals() {
        let a = ex2();
        let alpha = a.parse_element("alpha").unwrap();
        let beta = a.parse_element("beta").unwrap();
        assert_eq!(a.left_ideal_dimension(&[alpha.clone()]), 2);
        assert_eq!(a.left_ideal_dimension(&[beta.clone()]), 1);
        assert_eq!(a.left_ideal_intersection(&alpha, &beta).cols(), 0);
        assert_eq!(a.left_ideal_dimension(&[a.idempotent(0)]), 4);
    }

    #[test]
    fn rejects_bad_relations() {
        let q = Quiver::new(&["1", "2"], &[("a", "1", "2"), ("b", "2", "1")]).unwrap();
        let f = Field::Rational;
        let mixed = PathCombination {
            terms: vec![
                (f.one(), q.parse_path("b*a").unwrap()),
                (f.one(), q.parse_path("e1").unwrap()),
            ],
        };
        assert!(matches!(
            Algebra::build(q.clone(), f, vec![mixed], 4),
            Err(Error::InhomogeneousRelation(_))
        ));
        // cycle a,b without relations is infinite dimensional
        assert!(matches!(
            Algebra::build(q.clone(), f, vec![], 5),
            Err(Error::NonAdmissible(_))
        ));
        let short = PathCombination::path(f, q.parse_path("a").unwrap());
        assert!(matches!(
            Algebra::build(q, f, vec![short], 5),
            Err(Error::NonAdmissible(_))
        ));
    }

    #[test]
    fn commutativity_relation() {
        // square 1 -> 2 -> 4, 1 -> 3 -> 4 with a commutativity relation
        let q = Quiver::new(
            &["1", "2", "3", "4"],
            &[("a", "1", "2"), ("b", "1", "3"), ("c", "2", "4"), ("d", "3", "4")],
        )
        .unwrap();
        let f = Field::Rational;
        let rel = PathCombination {
            terms: vec![
                (f.one(), q.parse_path("c*a").unwrap()),
                (f.from_i64(-1), q.parse_path("d*b").unwrap()),
            ],
        };
        let alg = Algebra::build(q, f, vec![rel], 3).unwrap();
        assert!(!alg.is_monomial());
        assert_eq!(alg.dim(), 4 + 4 + 1);
        assert_eq!(
            alg.parse_element("c*a").unwrap(),
            alg.parse_element("d*b").unwrap()
        );
    }
}
