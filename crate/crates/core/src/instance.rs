//! The line-oriented instance format.
//!
//! ```text
//! [ring]
//! modulus = 2
//! [coalgebra]
//! rank = 2
//! delta 1 = 1*(1,1)
//! delta 2 = 1*(2,2)
//! counit = 1 1
//! [comodule M]
//! rank = 2
//! rho 1 = 1*(1,1)
//! rho 2 = 1*(2,2)
//! relation = 0 0
//! ```
//!
//! Indices are 1-based, `#` starts a comment, and a right-hand side of `0`
//! is the empty sum. `delta j` lists `Δ(c_j) = Σ c·c_i⊗c_k`; `rho j` lists
//! `ϱ(b_j) = Σ c·b_i⊗c_k`. Each `relation` line adds a relation vector, so a
//! comodule section may present a quotient of a free module.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::coalgebra::{tensor_index, Coalgebra, CoalgebraData};
use crate::comodule::{Comodule, ComoduleData};
use crate::howell::howell;
use crate::matrix::RMatrix;
use crate::ring::RingSpec;

pub const MAX_COALGEBRA_RANK: usize = 64;
pub const MAX_COMODULE_RANK: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}, column {column}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },
    #[error("line {line}: {message}")]
    Semantic { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedComodule {
    pub name: String,
    pub data: ComoduleData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub ring: RingSpec,
    pub coalgebra: CoalgebraData,
    pub comodules: Vec<NamedComodule>,
}

impl Instance {
    /// The coalgebra, or its axiom failures.
    pub fn coalgebra(&self) -> crate::Result<Coalgebra> {
        Coalgebra::new(self.coalgebra.clone())
    }

    pub fn comodule(&self, c: &Coalgebra, index: usize) -> crate::Result<Comodule> {
        Comodule::new(c, self.comodules[index].data.clone())
    }

    pub fn comodule_index(&self, name: &str) -> Option<usize> {
        self.comodules.iter().position(|m| m.name == name)
    }

    /// Hex SHA-256 of the canonical text.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(serialize(self).as_bytes());
        hash.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u128),
    Sym(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::Sym(c) => format!("`{c}`"),
        }
    }
}

/// Tokens of one line with their 1-based columns.
struct Cursor {
    line: usize,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_column: usize,
}

impl Cursor {
    fn lex(line: usize, text: &str) -> Result<Self, ParseError> {
        let text = text.split('#').next().unwrap_or("");
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                let n = digits.parse::<u128>().map_err(|_| ParseError::Semantic {
                    line,
                    message: format!("number {digits} is too large"),
                })?;
                toks.push((column, Tok::Num(n)));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                    i += 1;
                }
                toks.push((column, Tok::Ident(chars[start..i].iter().collect())));
            } else if "=*(),+[]".contains(c) {
                toks.push((column, Tok::Sym(c)));
                i += 1;
            } else {
                return Err(ParseError::Syntax {
                    line,
                    column,
                    expected: "a number, a name or one of `= * ( ) , + [ ]`".into(),
                    found: format!("`{c}`"),
                });
            }
        }
        Ok(Cursor {
            line,
            toks,
            pos: 0,
            end_column: chars.len() + 1,
        })
    }

    fn is_empty(&self) -> bool {
        self.toks.is_empty()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |(c, _)| *c)
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column(),
            expected: expected.into(),
            found: self.peek().map_or("end of line".into(), Tok::describe),
        }
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        let hit = self.peek() == Some(&Tok::Sym(c));
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn num(&mut self) -> Result<u128, ParseError> {
        match self.peek() {
            Some(&Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("a number")),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error("a name")),
        }
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.pos == self.toks.len() {
            Ok(())
        } else {
            Err(self.error("end of line"))
        }
    }
}

/// `(coefficient, i, k)` with 1-based indices.
type Term = (u128, u128, u128);

enum Item {
    Section(String, Option<String>),
    Assign(String, Vec<u128>),
    Terms(String, u128, Vec<Term>),
}

fn parse_terms(cur: &mut Cursor) -> Result<Vec<Term>, ParseError> {
    if cur.peek() == Some(&Tok::Num(0)) && cur.toks.len() == cur.pos + 1 {
        cur.pos += 1;
        return Ok(Vec::new());
    }
    let mut terms = Vec::new();
    loop {
        let coef = if matches!(cur.peek(), Some(Tok::Num(_))) {
            let c = cur.num()?;
            cur.sym('*')?;
            c
        } else {
            1
        };
        cur.sym('(')?;
        let i = cur.num()?;
        cur.sym(',')?;
        let k = cur.num()?;
        cur.sym(')')?;
        terms.push((coef, i, k));
        if !cur.eat_sym('+') {
            return Ok(terms);
        }
    }
}

fn parse_line(cur: &mut Cursor) -> Result<Item, ParseError> {
    if cur.eat_sym('[') {
        let kind = cur.ident()?;
        let name = if kind == "comodule" { Some(cur.ident()?) } else { None };
        cur.sym(']')?;
        cur.end()?;
        return Ok(Item::Section(kind, name));
    }
    let key = cur.ident()?;
    let item = match key.as_str() {
        "delta" | "rho" => {
            let j = cur.num()?;
            cur.sym('=')?;
            Item::Terms(key, j, parse_terms(cur)?)
        }
        "modulus" | "rank" | "counit" | "relation" => {
            cur.sym('=')?;
            let mut values = vec![cur.num()?];
            while matches!(cur.peek(), Some(Tok::Num(_))) {
                values.push(cur.num()?);
            }
            Item::Assign(key, values)
        }
        _ => {
            cur.pos -= 1;
            return Err(cur.error("`delta`, `rho`, `modulus`, `rank`, `counit`, `relation` or a section header"));
        }
    };
    cur.end()?;
    Ok(item)
}

#[derive(Default)]
struct SectionBuilder {
    name: Option<String>,
    header_line: usize,
    rank: Option<usize>,
    terms: Vec<Option<Vec<Term>>>,
    counit: Option<Vec<u64>>,
    relations: Vec<Vec<u64>>,
}

enum Current {
    None,
    Ring,
    Coalgebra,
    Comodule,
}

struct Builder {
    modulus: Option<(u64, RingSpec)>,
    ring_seen: bool,
    coalgebra: Option<SectionBuilder>,
    comodules: Vec<SectionBuilder>,
    current: Current,
}

fn semantic(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Semantic {
        line,
        message: message.into(),
    }
}

impl Builder {
    fn ring(&self, line: usize) -> Result<RingSpec, ParseError> {
        self.modulus
            .map(|(_, r)| r)
            .ok_or_else(|| semantic(line, "`[ring]` with `modulus` must come first"))
    }

    fn residue(&self, line: usize, v: u128) -> Result<u64, ParseError> {
        let n = self.ring(line)?.modulus();
        if v >= n as u128 {
            return Err(semantic(line, format!("residue {v} out of range for Z/{n}")));
        }
        Ok(v as u64)
    }

    fn section(&mut self) -> Option<&mut SectionBuilder> {
        match self.current {
            Current::Coalgebra => self.coalgebra.as_mut(),
            Current::Comodule => self.comodules.last_mut(),
            _ => None,
        }
    }

    fn apply(&mut self, line: usize, item: Item) -> Result<(), ParseError> {
        match item {
            Item::Section(kind, name) => match kind.as_str() {
                "ring" if self.ring_seen => return Err(semantic(line, "duplicate `[ring]` section")),
                "ring" => {
                    self.ring_seen = true;
                    self.current = Current::Ring;
                }
                "coalgebra" if self.coalgebra.is_some() => {
                    return Err(semantic(line, "duplicate `[coalgebra]` section"))
                }
                "coalgebra" => {
                    self.ring(line)?;
                    self.coalgebra = Some(SectionBuilder {
                        header_line: line,
                        ..Default::default()
                    });
                    self.current = Current::Coalgebra;
                }
                "comodule" => {
                    if self.coalgebra.is_none() {
                        return Err(semantic(line, "`[coalgebra]` must come before any comodule"));
                    }
                    let name = name.expect("comodule header has a name");
                    if self.comodules.iter().any(|c| c.name.as_deref() == Some(name.as_str())) {
                        return Err(semantic(line, format!("duplicate comodule `{name}`")));
                    }
                    self.comodules.push(SectionBuilder {
                        name: Some(name),
                        header_line: line,
                        ..Default::default()
                    });
                    self.current = Current::Comodule;
                }
                other => return Err(semantic(line, format!("unknown section `[{other}]`"))),
            },
            Item::Assign(key, values) => self.assign(line, &key, values)?,
            Item::Terms(key, j, terms) => self.terms(line, &key, j, terms)?,
        }
        Ok(())
    }

    fn assign(&mut self, line: usize, key: &str, values: Vec<u128>) -> Result<(), ParseError> {
        let single = |what: &str| -> Result<u128, ParseError> {
            match values.as_slice() {
                [v] => Ok(*v),
                _ => Err(semantic(line, format!("`{what}` takes one value"))),
            }
        };
        match (key, &self.current) {
            ("modulus", Current::Ring) => {
                if self.modulus.is_some() {
                    return Err(semantic(line, "duplicate `modulus`"));
                }
                let n = single("modulus")?;
                let ring = u64::try_from(n)
                    .ok()
                    .and_then(|n| RingSpec::new(n).ok())
                    .ok_or_else(|| semantic(line, format!("modulus {n} outside 2..=2^32")))?;
                self.modulus = Some((ring.modulus(), ring));
            }
            ("rank", Current::Coalgebra | Current::Comodule) => {
                let coalgebra = matches!(self.current, Current::Coalgebra);
                let limit = if coalgebra {
                    MAX_COALGEBRA_RANK
                } else {
                    MAX_COMODULE_RANK
                };
                let r = single("rank")?;
                let low = usize::from(coalgebra);
                if r < low as u128 || r > limit as u128 {
                    return Err(semantic(line, format!("rank {r} outside {low}..={limit}")));
                }
                let s = self.section().expect("inside a section");
                if s.rank.is_some() {
                    return Err(semantic(line, "duplicate `rank`"));
                }
                s.rank = Some(r as usize);
                s.terms = vec![None; r as usize];
            }
            ("counit", Current::Coalgebra) => {
                let residues = values
                    .iter()
                    .map(|&v| self.residue(line, v))
                    .collect::<Result<Vec<_>, _>>()?;
                let s = self.section().expect("inside a section");
                let r = s
                    .rank
                    .ok_or_else(|| semantic(line, "`rank` must come before `counit`"))?;
                if s.counit.is_some() {
                    return Err(semantic(line, "duplicate `counit`"));
                }
                if residues.len() != r {
                    return Err(semantic(
                        line,
                        format!("counit has {} values, rank is {r}", residues.len()),
                    ));
                }
                s.counit = Some(residues);
            }
            ("relation", Current::Comodule) => {
                let residues = values
                    .iter()
                    .map(|&v| self.residue(line, v))
                    .collect::<Result<Vec<_>, _>>()?;
                let s = self.section().expect("inside a section");
                let m = s
                    .rank
                    .ok_or_else(|| semantic(line, "`rank` must come before `relation`"))?;
                if residues.len() != m {
                    return Err(semantic(
                        line,
                        format!("relation has {} values, rank is {m}", residues.len()),
                    ));
                }
                s.relations.push(residues);
            }
            _ => return Err(semantic(line, format!("`{key}` is not allowed here"))),
        }
        Ok(())
    }

    fn terms(&mut self, line: usize, key: &str, j: u128, terms: Vec<Term>) -> Result<(), ParseError> {
        let expected = match self.current {
            Current::Coalgebra => "delta",
            Current::Comodule => "rho",
            _ => "",
        };
        if key != expected {
            return Err(semantic(line, format!("`{key}` is not allowed here")));
        }
        let n = self.ring(line)?.modulus() as u128;
        let coalgebra_rank = self.coalgebra.as_ref().and_then(|c| c.rank);
        let s = self.section().expect("inside a section");
        let m = s
            .rank
            .ok_or_else(|| semantic(line, format!("`rank` must come before `{key}`")))?;
        let r = if key == "delta" {
            m
        } else {
            coalgebra_rank.ok_or_else(|| semantic(line, "coalgebra has no `rank`"))?
        };
        let range = |v: u128, limit: usize, what: &str| {
            if v == 0 || v > limit as u128 {
                Err(semantic(line, format!("{what} index {v} out of range 1..={limit}")))
            } else {
                Ok(())
            }
        };
        range(j, m, "basis")?;
        for &(c, i, k) in &terms {
            if c >= n {
                return Err(semantic(line, format!("residue {c} out of range for Z/{n}")));
            }
            range(i, m, "basis")?;
            range(k, r, "coalgebra basis")?;
        }
        let slot = &mut s.terms[j as usize - 1];
        if slot.is_some() {
            return Err(semantic(line, format!("duplicate `{key} {j}`")));
        }
        *slot = Some(terms);
        Ok(())
    }

    fn finish(self, last_line: usize) -> Result<Instance, ParseError> {
        let (_, ring) = self
            .modulus
            .ok_or_else(|| semantic(last_line, "missing `[ring]` with `modulus`"))?;
        let c = self
            .coalgebra
            .ok_or_else(|| semantic(last_line, "missing `[coalgebra]` section"))?;
        let r = c
            .rank
            .ok_or_else(|| semantic(c.header_line, "coalgebra has no `rank`"))?;
        let counit = c
            .counit
            .clone()
            .ok_or_else(|| semantic(c.header_line, "coalgebra has no `counit`"))?;
        let delta = assemble(ring, &c.terms, r, r, r);
        let coalgebra = CoalgebraData {
            ring,
            rank: r,
            delta,
            counit,
        };
        let mut comodules = Vec::new();
        for s in self.comodules {
            let m = s
                .rank
                .ok_or_else(|| semantic(s.header_line, "comodule has no `rank`"))?;
            let rho = assemble(ring, &s.terms, m, m, r);
            let relations = if s.relations.is_empty() {
                RMatrix::zeros(ring, 0, m)
            } else {
                howell(&RMatrix::from_rows(ring, m, &s.relations)).matrix().clone()
            };
            comodules.push(NamedComodule {
                name: s.name.expect("comodule has a name"),
                data: ComoduleData {
                    rank: m,
                    rho,
                    relations,
                },
            });
        }
        Ok(Instance {
            ring,
            coalgebra,
            comodules,
        })
    }
}

/// Column `j` of the result is `Σ c·e_{(i,k)}` over the terms of line `j`.
fn assemble(ring: RingSpec, lines: &[Option<Vec<Term>>], cols: usize, left: usize, right: usize) -> RMatrix {
    let mut out = RMatrix::zeros(ring, left * right, cols);
    for (j, terms) in lines.iter().enumerate() {
        for &(c, i, k) in terms.iter().flatten() {
            let row = tensor_index(i as usize - 1, k as usize - 1, right);
            let v = ring.add(out.get(row, j), c as u64);
            out.set(row, j, v);
        }
    }
    out
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut b = Builder {
        modulus: None,
        ring_seen: false,
        coalgebra: None,
        comodules: Vec::new(),
        current: Current::None,
    };
    let mut last = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last = line;
        let mut cur = Cursor::lex(line, raw)?;
        if cur.is_empty() {
            continue;
        }
        let item = parse_line(&mut cur)?;
        b.apply(line, item)?;
    }
    b.finish(last + 1)
}

fn write_terms(out: &mut String, key: &str, m: &RMatrix, right: usize) {
    for j in 0..m.cols() {
        let terms: Vec<String> = (0..m.rows())
            .filter(|&row| m.get(row, j) != 0)
            .map(|row| format!("{}*({},{})", m.get(row, j), row / right + 1, row % right + 1))
            .collect();
        let rhs = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        let _ = writeln!(out, "{key} {} = {rhs}", j + 1);
    }
}

fn join(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}

/// Canonical text: fixed section order, terms sorted by `(i, k)`, zero
/// coefficients omitted, relations in Howell form.
pub fn serialize(inst: &Instance) -> String {
    let mut out = String::new();
    let c = &inst.coalgebra;
    let _ = writeln!(out, "[ring]\nmodulus = {}\n", inst.ring.modulus());
    let _ = writeln!(out, "[coalgebra]\nrank = {}", c.rank);
    write_terms(&mut out, "delta", &c.delta, c.rank);
    let _ = writeln!(out, "counit = {}", join(&c.counit));
    for m in &inst.comodules {
        let _ = writeln!(out, "\n[comodule {}]\nrank = {}", m.name, m.data.rank);
        write_terms(&mut out, "rho", &m.data.rho, c.rank);
        for row in howell(&m.data.relations).matrix().row_vecs() {
            let _ = writeln!(out, "relation = {}", join(&row));
        }
    }
    out
}

/// An instance holding one coalgebra and the given named comodules.
pub fn instance_of(c: &Coalgebra, comodules: &[(&str, &Comodule)]) -> Instance {
    Instance {
        ring: c.ring(),
        coalgebra: c.data().clone(),
        comodules: comodules
            .iter()
            .map(|(name, m)| NamedComodule {
                name: name.to_string(),
                data: m.data(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRADED: &str = "\
# grouplike(2) with the graded comodule
[ring]
modulus = 2

[coalgebra]
rank = 2
delta 1 = 1*(1,1)
delta 2 = (2,2)
counit = 1 1

[comodule M]
rank = 2
rho 1 = 1*(1,1)   # b1 lives in grade 1
rho 2 = 1*(2,2)
";

    #[test]
    fn graded_matches_catalog() {
        let inst = parse_instance(GRADED).unwrap();
        let c = inst.coalgebra().unwrap();
        let g = Coalgebra::grouplike(RingSpec::new(2).unwrap(), 2);
        assert_eq!(c.data(), g.data());
        let m = inst.comodule(&c, 0).unwrap();
        assert_eq!(m.data(), Comodule::free(&g, 1).data());
        let again = parse_instance(&serialize(&inst)).unwrap();
        assert_eq!(again, inst);
        assert_eq!(serialize(&again), serialize(&inst));
    }

    #[test]
    fn index_out_of_range() {
        let text = "[ring]\nmodulus = 3\n[coalgebra]\nrank = 2\ndelta 1 = 1*(1,3)\n";
        match parse_instance(text) {
            Err(ParseError::Semantic { line: 5, message }) => assert!(message.contains("index 3")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn residue_out_of_range() {
        let text = "[ring]\nmodulus = 3\n[coalgebra]\nrank = 1\ncounit = 3\n";
        assert!(matches!(
            parse_instance(text),
            Err(ParseError::Semantic { line: 5, .. })
        ));
    }

    #[test]
    fn syntax_error_position() {
        let text = "[ring]\nmodulus = 3\n[coalgebra]\nrank = 1\ndelta 1 = 1*(1 1)\n";
        match parse_instance(text) {
            Err(ParseError::Syntax {
                line,
                column,
                expected,
                found,
            }) => {
                assert_eq!((line, column), (5, 16));
                assert_eq!(expected, "`,`");
                assert_eq!(found, "`1`");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_instance("[ring]\nmodulus 3\n"),
            Err(ParseError::Syntax { line: 2, column: 9, .. })
        ));
        assert!(matches!(
            parse_instance("[ring]\nmodulus = 3 $\n"),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn missing_sections() {
        assert!(matches!(parse_instance(""), Err(ParseError::Semantic { .. })));
        assert!(matches!(
            parse_instance("[ring]\nmodulus = 1\n"),
            Err(ParseError::Semantic { line: 2, .. })
        ));
        assert!(matches!(
            parse_instance("[coalgebra]\nrank = 1\n"),
            Err(ParseError::Semantic { line: 1, .. })
        ));
    }

    #[test]
    fn duplicates_rejected() {
        let text = "[ring]\nmodulus = 3\n[coalgebra]\nrank = 1\ndelta 1 = (1,1)\ndelta 1 = (1,1)\n";
        assert!(matches!(
            parse_instance(text),
            Err(ParseError::Semantic { line: 6, .. })
        ));
    }

    #[test]
    fn relations_round_trip() {
        let text = "[ring]\nmodulus = 4\n[coalgebra]\nrank = 1\ndelta 1 = (1,1)\ncounit = 1\n\
                    [comodule Q]\nrank = 2\nrho 1 = (1,1)\nrho 2 = (2,1)\nrelation = 2 0\nrelation = 0 0\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.comodules[0].data.relations.row_vecs(), vec![vec![2, 0]]);
        let c = inst.coalgebra().unwrap();
        assert_eq!(inst.comodule(&c, 0).unwrap().order(), 8);
        assert_eq!(parse_instance(&serialize(&inst)).unwrap(), inst);
    }

    #[test]
    fn axiom_failure_is_not_a_parse_error() {
        let text = "[ring]\nmodulus = 2\n[coalgebra]\nrank = 1\ndelta 1 = 0\ncounit = 1\n";
        let inst = parse_instance(text).unwrap();
        assert!(inst.coalgebra().is_err());
    }
}
