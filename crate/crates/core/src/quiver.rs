use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type ArrowId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: VertexId,
    pub target: VertexId,
}

/// Finite quiver. Vertices double as the primitive idempotents `e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    vertex_index: HashMap<String, VertexId>,
    arrow_index: HashMap<String, ArrowId>,
}

impl Quiver {
    pub fn new<S: AsRef<str>>(vertices: &[S], arrows: &[(&str, &str, &str)]) -> Result<Quiver> {
        let mut q = Quiver {
            vertices: Vec::new(),
            arrows: Vec::new(),
            vertex_index: HashMap::new(),
            arrow_index: HashMap::new(),
        };
        for v in vertices {
            q.add_vertex(v.as_ref())?;
        }
        for (name, s, t) in arrows {
            q.add_arrow(name, s, t)?;
        }
        Ok(q)
    }

    pub fn empty() -> Quiver {
        Quiver::new::<&str>(&[], &[]).expect("empty quiver")
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId> {
        if self.vertex_index.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let id = self.vertices.len();
        self.vertices.push(name.to_string());
        self.vertex_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_arrow(&mut self, name: &str, source: &str, target: &str) -> Result<ArrowId> {
        if self.arrow_index.contains_key(name) {
            return Err(Error::Duplicate(name.to_string()));
        }
        let source = self.vertex(source)?;
        let target = self.vertex(target)?;
        let id = self.arrows.len();
        self.arrows.push(Arrow {
            name: name.to_string(),
            source,
            target,
        });
        self.arrow_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.vertex_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn arrow(&self, name: &str) -> Result<ArrowId> {
        self.arrow_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownArrow(name.to_string()))
    }

    pub fn has_arrow(&self, name: &str) -> bool {
        self.arrow_index.contains_key(name)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_data(&self, a: ArrowId) -> &Arrow {
        &self.arrows[a]
    }

    pub fn arrows_from(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].source == v)
    }

    pub fn arrows_into(&self, v: VertexId) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].target == v)
    }

    /// No arrow ends at `v`.
    pub fn is_source(&self, v: VertexId) -> bool {
        self.arrows_into(v).next().is_none()
    }

    /// Parses `a*b*c` (meaning `c` first, then `b`, then `a`) or `e<vertex>`.
    pub fn parse_path(&self, text: &str) -> Result<PathWord> {
        let tokens: Vec<&str> = text.split('*').map(str::trim).collect();
        self.path_from_tokens(&tokens)
    }

    /// Tokens are in composition order: the last token is applied first.
    pub fn path_from_tokens(&self, tokens: &[&str]) -> Result<PathWord> {
        let mut word: Option<PathWord> = None;
        for tok in tokens.iter().rev() {
            let step = self.token_path(tok)?;
            word = Some(match word {
                None => step,
                Some(w) => step.after(&w).ok_or_else(|| {
                    Error::EndpointMismatch(format!("`{}` cannot follow the path before it", tok))
                })?,
            });
        }
        word.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "empty path".into(),
        })
    }

    fn token_path(&self, tok: &str) -> Result<PathWord> {
        if let Ok(a) = self.arrow(tok) {
            return Ok(PathWord::arrow(self, a));
        }
        if let Some(v) = tok.strip_prefix('e') {
            let v = v.strip_prefix('_').unwrap_or(v);
            if let Ok(v) = self.vertex(v) {
                return Ok(PathWord::trivial(v));
            }
        }
        Err(Error::UnknownArrow(tok.to_string()))
    }
}

/// A path of the quiver. `arrows` is in application order: `arrows[0]` leaves `source`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathWord {
    pub source: VertexId,
    pub target: VertexId,
    pub arrows: Vec<ArrowId>,
}

impl PathWord {
    pub fn trivial(v: VertexId) -> PathWord {
        PathWord {
            source: v,
            target: v,
            arrows: Vec::new(),
        }
    }

    pub fn arrow(q: &Quiver, a: ArrowId) -> PathWord {
        let arr = q.arrow_data(a);
        PathWord {
            source: arr.source,
            target: arr.target,
            arrows: vec![a],
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    /// `self` applied after `first`, i.e. the juxtaposition `self·first`.
    pub fn after(&self, first: &PathWord) -> Option<PathWord> {
        if first.target != self.source {
            return None;
        }
        let mut arrows = first.arrows.clone();
        arrows.extend(&self.arrows);
        Some(PathWord {
            source: first.source,
            target: self.target,
            arrows,
        })
    }

    /// Prefix applied first of the given length.
    pub fn first_part(&self, q: &Quiver, len: usize) -> PathWord {
        if len == 0 {
            return PathWord::trivial(self.source);
        }
        let arrows = self.arrows[..len].to_vec();
        let target = q.arrow_data(arrows[len - 1]).target;
        PathWord {
            source: self.source,
            target,
            arrows,
        }
    }

    pub fn display<'a>(&'a self, q: &'a Quiver) -> PathDisplay<'a> {
        PathDisplay { path: self, quiver: q }
    }
}

pub struct PathDisplay<'a> {
    path: &'a PathWord,
    quiver: &'a Quiver,
}

impl fmt::Display for PathDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.arrows.is_empty() {
            return write!(f, "e{}", self.quiver.vertex_name(self.path.source));
        }
        let names: Vec<&str> = self
            .path
            .arrows
            .iter()
            .rev()
            .map(|&a| self.quiver.arrow_data(a).name.as_str())
            .collect();
        write!(f, "{}", names.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kronecker_loop() -> Quiver {
        Quiver::new(
            &["1", "2"],
            &[("alpha", "1", "2"), ("beta", "1", "2"), ("gamma", "2", "1")],
        )
        .unwrap()
    }

    #[test]
    fn composition_is_right_to_left() {
        let q = kronecker_loop();
        let p = q.parse_path("alpha*gamma").unwrap();
        assert_eq!(p.source, q.vertex("2").unwrap());
        assert_eq!(p.target, q.vertex("2").unwrap());
        assert_eq!(p.arrows, vec![q.arrow("gamma").unwrap(), q.arrow("alpha").unwrap()]);
        assert_eq!(p.display(&q).to_string(), "alpha*gamma");
        assert!(q.parse_path("alpha*beta").is_err());
    }

    #[test]
    fn trivial_paths_and_sources() {
        let q = kronecker_loop();
        let e = q.parse_path("e1").unwrap();
        assert!(e.is_trivial());
        assert_eq!(q.parse_path("alpha*e1").unwrap(), q.parse_path("alpha").unwrap());
        assert!(!q.is_source(0));
        let q2 = Quiver::new(&["1", "2"], &[("a", "1", "2")]).unwrap();
        assert!(q2.is_source(0));
        assert!(matches!(
            Quiver::new(&["1"], &[("a", "1", "9")]),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(Quiver::new(&["1", "1"], &[]), Err(Error::Duplicate(_))));
    }
}
