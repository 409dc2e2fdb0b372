//! Line-oriented text formats for algebras and modules.
//!
//! Algebra files:
//!
//! ```text
//! field Q            # or: field F 101
//! vertex 1 2
//! arrow alpha 1 2
//! arrow gamma 2 1
//! rel alpha*gamma
//! maxlen 4
//! ```
//!
//! Module files hold `presented` and `explicit` stanzas:
//!
//! ```text
//! presented N2
//! gen b1 1
//! gen b2 1
//! rel beta*b1 - alpha*b2
//! end
//!
//! explicit S1
//! dim 1 0
//! mat alpha            # omitted or empty rows mean the zero matrix
//! end
//! ```
//!
//! `p*q` always means "q first, then p"; coefficients may be written `a/b`.

use std::fmt::Write as _;
use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraElement, PathCombination};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::Matrix;
use crate::quiver::{Quiver, VertexId};
use crate::rep::{presented_module, PresentedModule, Representation};

/// Maximal path length assumed when an algebra file has no `maxlen` line.
pub const DEFAULT_MAXLEN: usize = 16;

fn at_line(line: usize) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::Parse { line: 0, msg } => Error::Parse { line, msg },
        Error::Parse { .. } => e,
        other => Error::Parse {
            line,
            msg: other.to_string(),
        },
    }
}

/// Splits `a*b - 2*c + d` into signed terms, each a list of `*`-separated tokens.
fn split_terms(field: Field, text: &str) -> Result<Vec<(Scalar, Vec<String>)>> {
    let bad = |msg: String| Error::Parse { line: 0, msg };
    let mut out = Vec::new();
    let mut sign = field.one();
    let mut cur = String::new();
    let mut pending = false;
    let flush = |cur: &mut String, sign: &Scalar, out: &mut Vec<(Scalar, Vec<String>)>| -> Result<()> {
        let body = cur.trim();
        if body.is_empty() {
            return Err(bad(format!("empty term in `{text}`")));
        }
        let tokens: Vec<String> = body.split('*').map(|t| t.trim().to_string()).collect();
        if tokens.iter().any(String::is_empty) {
            return Err(bad(format!("dangling `*` in `{text}`")));
        }
        let mut coeff = sign.clone();
        let mut rest = tokens.as_slice();
        while let Some(first) = rest.first() {
            if first.starts_with(|c: char| c.is_ascii_digit()) {
                coeff = &coeff * &field.parse_scalar(first)?;
                rest = &rest[1..];
            } else {
                break;
            }
        }
        out.push((coeff, rest.to_vec()));
        cur.clear();
        Ok(())
    };
    for ch in text.chars() {
        match ch {
            '+' | '-' => {
                if !cur.trim().is_empty() {
                    flush(&mut cur, &sign, &mut out)?;
                    sign = field.one();
                }
                if ch == '-' {
                    sign = -&sign;
                }
                pending = true;
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        flush(&mut cur, &sign, &mut out)?;
    } else if pending || out.is_empty() {
        return Err(bad(format!("incomplete expression `{text}`")));
    }
    Ok(out)
}

/// Parses a linear combination of paths such as `gamma*alpha - 1/2*delta*beta`.
pub fn parse_path_combination(q: &Quiver, field: Field, text: &str) -> Result<PathCombination> {
    if text.trim() == "0" {
        return Ok(PathCombination { terms: Vec::new() });
    }
    let mut terms = Vec::new();
    for (c, tokens) in split_terms(field, text)? {
        if tokens.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("scalar term without a path in `{text}`"),
            });
        }
        let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
        terms.push((c, q.path_from_tokens(&refs)?));
    }
    Ok(PathCombination { terms })
}

/// Reads an algebra file; `default_field` applies when there is no `field` line.
pub fn parse_algebra_with(text: &str, default_field: Field) -> Result<Algebra> {
    let mut field = None;
    let mut quiver = Quiver::empty();
    let mut rels: Vec<(usize, String)> = Vec::new();
    let mut maxlen = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let words: Vec<&str> = rest.split_whitespace().collect();
        let err = |msg: &str| Error::Parse {
            line: line_no,
            msg: msg.to_string(),
        };
        match kw {
            "field" => {
                field = Some(match words.as_slice() {
                    ["Q"] => Field::Rational,
                    ["F", p] => {
                        let p: u32 = p.parse().map_err(|_| err("bad characteristic"))?;
                        Field::prime(p).map_err(at_line(line_no))?
                    }
                    _ => return Err(err("expected `field Q` or `field F <p>`")),
                });
            }
            "vertex" => {
                if words.is_empty() {
                    return Err(err("`vertex` needs at least one name"));
                }
                for w in words {
                    quiver.add_vertex(w).map_err(at_line(line_no))?;
                }
            }
            "arrow" => match words.as_slice() {
                [name, s, t] => {
                    quiver.add_arrow(name, s, t).map_err(at_line(line_no))?;
                }
                _ => return Err(err("expected `arrow <name> <source> <target>`")),
            },
            "rel" => {
                if rest.is_empty() {
                    return Err(err("empty relation"));
                }
                rels.push((line_no, rest.to_string()));
            }
            "maxlen" => {
                let n: usize = match words.as_slice() {
                    [n] => n.parse().map_err(|_| err("bad maxlen"))?,
                    _ => return Err(err("expected `maxlen <n>`")),
                };
                maxlen = Some(n);
            }
            other => return Err(err(&format!("unknown keyword `{other}`"))),
        }
    }
    let field = field.unwrap_or(default_field);
    let mut relations = Vec::with_capacity(rels.len());
    for (line_no, text) in &rels {
        relations.push(parse_path_combination(&quiver, field, text).map_err(at_line(*line_no))?);
    }
    Algebra::build(quiver, field, relations, maxlen.unwrap_or(DEFAULT_MAXLEN))
}

pub fn parse_algebra(text: &str) -> Result<Algebra> {
    parse_algebra_with(text, Field::Rational)
}

pub fn write_algebra(alg: &Algebra) -> String {
    let q = alg.quiver();
    let mut out = String::new();
    writeln!(out, "field {}", alg.field()).unwrap();
    writeln!(out, "vertex {}", q.vertex_names().join(" ")).unwrap();
    for a in q.arrows() {
        writeln!(
            out,
            "arrow {} {} {}",
            a.name,
            q.vertex_name(a.source),
            q.vertex_name(a.target)
        )
        .unwrap();
    }
    for r in alg.relations() {
        writeln!(out, "rel {}", r.display(q)).unwrap();
    }
    writeln!(out, "maxlen {}", alg.max_len()).unwrap();
    out
}

/// A module read from a file, with its presentation when it was given as one.
#[derive(Clone, Debug)]
pub struct NamedModule {
    pub name: String,
    pub module: Representation,
    pub presentation: Option<PresentedModule>,
    pub generator_names: Vec<String>,
}

enum Stanza {
    Presented {
        gens: Vec<(String, VertexId)>,
        rels: Vec<(usize, String)>,
    },
    Explicit {
        dims: Option<Vec<usize>>,
        mats: Vec<(usize, String, String)>,
    },
}

/// Parses a relator `beta*b1 - alpha*b2` into one component per generator.
pub fn parse_relator(
    alg: &Algebra,
    gens: &[(String, VertexId)],
    text: &str,
) -> Result<Vec<AlgebraElement>> {
    let mut comps = vec![AlgebraElement::zero(); gens.len()];
    for (c, tokens) in split_terms(alg.field(), text)? {
        let Some((gen, path)) = tokens.split_last() else {
            return Err(Error::Parse {
                line: 0,
                msg: format!("term without generator in `{text}`"),
            });
        };
        let k = gens
            .iter()
            .position(|(g, _)| g == gen)
            .ok_or_else(|| Error::MalformedRelator(format!("unknown generator `{gen}`")))?;
        let word = if path.is_empty() {
            crate::quiver::PathWord::trivial(gens[k].1)
        } else {
            let refs: Vec<&str> = path.iter().map(String::as_str).collect();
            alg.quiver().path_from_tokens(&refs)?
        };
        if word.source != gens[k].1 {
            return Err(Error::MalformedRelator(format!(
                "path {} does not start at the vertex of `{gen}`",
                word.display(alg.quiver())
            )));
        }
        comps[k].add_scaled(&c, &alg.path_element(&word));
    }
    Ok(comps)
}

fn parse_matrix(field: Field, rows: usize, cols: usize, text: &str) -> Result<Matrix> {
    let bad = |msg: String| Error::Parse { line: 0, msg };
    let mut m = Matrix::zeros(field, rows, cols);
    if text.trim().is_empty() {
        return Ok(m);
    }
    let lines: Vec<&str> = text.split(';').collect();
    if lines.len() != rows {
        return Err(bad(format!("expected {rows} rows, found {}", lines.len())));
    }
    for (r, line) in lines.iter().enumerate() {
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(bad(format!("row {r}: expected {cols} entries, found {}", entries.len())));
        }
        for (c, e) in entries.iter().enumerate() {
            m[(r, c)] = field.parse_scalar(e)?;
        }
    }
    Ok(m)
}

/// Reads all stanzas of a module file over `alg`.
pub fn parse_modules(alg: &Arc<Algebra>, text: &str) -> Result<Vec<NamedModule>> {
    let q = alg.quiver();
    let mut out = Vec::new();
    let mut current: Option<(usize, String, Stanza)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let words: Vec<&str> = rest.split_whitespace().collect();
        let err = |msg: &str| Error::Parse {
            line: line_no,
            msg: msg.to_string(),
        };
        match (kw, current.as_mut()) {
            ("presented" | "explicit", None) => {
                let [name] = words.as_slice() else {
                    return Err(err("expected a single module name"));
                };
                let stanza = if kw == "presented" {
                    Stanza::Presented {
                        gens: Vec::new(),
                        rels: Vec::new(),
                    }
                } else {
                    Stanza::Explicit {
                        dims: None,
                        mats: Vec::new(),
                    }
                };
                current = Some((line_no, name.to_string(), stanza));
            }
            ("presented" | "explicit", Some(_)) => return Err(err("missing `end`")),
            ("gen", Some((_, _, Stanza::Presented { gens, .. }))) => {
                let [name, v] = words.as_slice() else {
                    return Err(err("expected `gen <name> <vertex>`"));
                };
                if gens.iter().any(|(g, _)| g == name) {
                    return Err(err(&format!("duplicate generator `{name}`")));
                }
                gens.push((name.to_string(), q.vertex(v).map_err(at_line(line_no))?));
            }
            ("rel", Some((_, _, Stanza::Presented { rels, .. }))) => {
                rels.push((line_no, rest.to_string()));
            }
            ("dim", Some((_, _, Stanza::Explicit { dims, .. }))) => {
                let d: Vec<usize> = words
                    .iter()
                    .map(|w| w.parse().map_err(|_| err("bad dimension")))
                    .collect::<Result<_>>()?;
                if d.len() != q.num_vertices() {
                    return Err(err("one dimension per vertex expected"));
                }
                *dims = Some(d);
            }
            ("mat", Some((_, _, Stanza::Explicit { mats, .. }))) => {
                let (name, body) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                if name.is_empty() {
                    return Err(err("expected `mat <arrow> <rows>`"));
                }
                mats.push((line_no, name.to_string(), body.to_string()));
            }
            ("end", Some(_)) => {
                let (start, name, stanza) = current.take().expect("inside a stanza");
                out.push(finish_stanza(alg, start, name, stanza)?);
            }
            (other, _) => return Err(err(&format!("unexpected `{other}`"))),
        }
    }
    if let Some((start, _, _)) = current {
        return Err(Error::Parse {
            line: start,
            msg: "stanza not closed with `end`".into(),
        });
    }
    Ok(out)
}

fn finish_stanza(alg: &Arc<Algebra>, start: usize, name: String, stanza: Stanza) -> Result<NamedModule> {
    match stanza {
        Stanza::Presented { gens, rels } => {
            let mut relators = Vec::with_capacity(rels.len());
            for (line_no, text) in &rels {
                relators.push(parse_relator(alg, &gens, text).map_err(at_line(*line_no))?);
            }
            let vertices: Vec<VertexId> = gens.iter().map(|(_, v)| *v).collect();
            let pm = presented_module(alg, &vertices, &relators).map_err(at_line(start))?;
            Ok(NamedModule {
                name,
                module: pm.module.clone(),
                presentation: Some(pm),
                generator_names: gens.into_iter().map(|(g, _)| g).collect(),
            })
        }
        Stanza::Explicit { dims, mats } => {
            let q = alg.quiver();
            let dims = dims.ok_or(Error::Parse {
                line: start,
                msg: "missing `dim` line".into(),
            })?;
            let mut maps: Vec<Option<Matrix>> = vec![None; q.num_arrows()];
            for (line_no, arrow, body) in mats {
                let a = q.arrow(&arrow).map_err(at_line(line_no))?;
                let arr = q.arrow_data(a);
                let m = parse_matrix(alg.field(), dims[arr.target], dims[arr.source], &body)
                    .map_err(at_line(line_no))?;
                maps[a] = Some(m);
            }
            let maps = maps
                .into_iter()
                .enumerate()
                .map(|(a, m)| {
                    m.unwrap_or_else(|| {
                        let arr = q.arrow_data(a);
                        Matrix::zeros(alg.field(), dims[arr.target], dims[arr.source])
                    })
                })
                .collect();
            let module = Representation::new(alg, dims, maps).map_err(at_line(start))?;
            Ok(NamedModule {
                name,
                module,
                presentation: None,
                generator_names: Vec::new(),
            })
        }
    }
}

/// Writes a module as an `explicit` stanza.
pub fn write_explicit(name: &str, m: &Representation) -> String {
    let q = m.algebra().quiver();
    let mut out = String::new();
    writeln!(out, "explicit {name}").unwrap();
    let dims: Vec<String> = m.dims().iter().map(usize::to_string).collect();
    writeln!(out, "dim {}", dims.join(" ")).unwrap();
    for (a, arr) in q.arrows().iter().enumerate() {
        let mat = m.arrow_matrix(a);
        if mat.is_zero() {
            continue;
        }
        let rows: Vec<String> = (0..mat.rows())
            .map(|r| {
                mat.row(r)
                    .iter()
                    .map(Scalar::to_text)
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        writeln!(out, "mat {} {}", arr.name, rows.join(" ; ")).unwrap();
    }
    writeln!(out, "end").unwrap();
    out
}

/// Writes a presentation as a `presented` stanza.
pub fn write_presented(name: &str, pm: &PresentedModule, gen_names: &[String]) -> String {
    let alg = pm.free.algebra();
    let q = alg.quiver();
    let mut out = String::new();
    writeln!(out, "presented {name}").unwrap();
    for (g, v) in gen_names.iter().zip(&pm.gens) {
        writeln!(out, "gen {g} {}", q.vertex_name(*v)).unwrap();
    }
    for rel in &pm.relators {
        let mut terms = Vec::new();
        for (k, comp) in rel.iter().enumerate() {
            for (i, c) in comp.terms() {
                let p = alg.basis_path(i);
                let body = if p.is_trivial() {
                    gen_names[k].clone()
                } else {
                    format!("{}*{}", p.display(q), gen_names[k])
                };
                terms.push((c.clone(), body));
            }
        }
        let mut line = String::new();
        for (j, (c, body)) in terms.iter().enumerate() {
            let text = c.to_text();
            let (neg, mag) = match text.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, text),
            };
            let sign = match (j == 0, neg) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            if mag == "1" {
                write!(line, "{sign}{body}").unwrap();
            } else {
                write!(line, "{sign}{mag}*{body}").unwrap();
            }
        }
        if !line.is_empty() {
            writeln!(out, "rel {line}").unwrap();
        }
    }
    writeln!(out, "end").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EX2: &str = "field Q\nvertex 1 2\narrow alpha 1 2\narrow beta 1 2\narrow gamma 2 1\n\
                       rel alpha*gamma\nrel beta*gamma\nrel gamma*beta\nmaxlen 4\n";

    #[test]
    fn algebra_round_trip() {
        let a = parse_algebra(EX2).unwrap();
        assert_eq!(a.dim(), 6);
        let b = parse_algebra(&write_algebra(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "vertex 1 2\narrow a 1 2\nrel a*b\n";
        match parse_algebra(text) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_algebra("vertex 1\nbogus\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn combinations_with_coefficients() {
        let a = parse_algebra(EX2).unwrap();
        let c = a.parse_combination("2*gamma*alpha - 1/2*gamma*beta + e1").unwrap();
        assert_eq!(c.terms.len(), 3);
        assert_eq!(c.terms[1].0, Field::Rational.parse_scalar("-1/2").unwrap());
        assert!(a.parse_combination("alpha -").is_err());
        assert!(a.parse_combination("3").is_err());
    }

    #[test]
    fn module_stanzas() {
        let a = Arc::new(parse_algebra(EX2).unwrap());
        let text = "presented N2\ngen b1 1\ngen b2 1\nrel beta*b1 - alpha*b2\nend\n\
                    explicit S1\ndim 1 0\nend\n";
        let mods = parse_modules(&a, text).unwrap();
        assert_eq!(mods[0].module.dims(), &[3, 3]);
        assert_eq!(mods[1].module, Representation::simple(&a, 0).unwrap());
        let pm = mods[0].presentation.as_ref().unwrap();
        let again = parse_modules(&a, &write_presented("N2", pm, &mods[0].generator_names)).unwrap();
        assert_eq!(again[0].module, mods[0].module);
        let explicit = parse_modules(&a, &write_explicit("N2", &mods[0].module)).unwrap();
        assert_eq!(explicit[0].module, mods[0].module);
        assert!(parse_modules(&a, "explicit X\ndim 1 1\nmat alpha 1\nmat gamma 1\nend\n").is_err());
    }
}
