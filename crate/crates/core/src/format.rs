//! The AlgebraFile text format.
//!
//! ```text
//! # comment
//! kind ainf
//! truncation 12 5 8
//! basis x:1
//! basis y:4
//! m3(x,x,x) = 1/36 y
//! ```
//!
//! `kind` comes first; `truncation` (max degree, max arity, max weight) is
//! optional; `basis` lines list `name:degree` pairs; operation lines use
//! `m` for `ainf`/`dga` and `l` for `linf`/`dgl`. Right-hand sides are
//! `0` or `c name` terms joined by `+`, where a missing coefficient means 1.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::homotopy::{check_jacobi, check_stasheff, skew_canonical, AInfAlgebra, IdentityReport, LInfAlgebra};
use crate::multiop::{MultiOp, Truncation};
use crate::scalar::parse_q;
use crate::space::{Element, GradedSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    LInf,
    AInf,
    Dgl,
    Dga,
}

impl Kind {
    fn parse(s: &str) -> Option<Kind> {
        Some(match s {
            "linf" => Kind::LInf,
            "ainf" => Kind::AInf,
            "dgl" => Kind::Dgl,
            "dga" => Kind::Dga,
            _ => return None,
        })
    }

    pub fn is_lie(self) -> bool {
        matches!(self, Kind::LInf | Kind::Dgl)
    }

    fn prefix(self) -> char {
        if self.is_lie() {
            'l'
        } else {
            'm'
        }
    }

    fn max_arity(self) -> Option<usize> {
        matches!(self, Kind::Dgl | Kind::Dga).then_some(2)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::LInf => "linf",
            Kind::AInf => "ainf",
            Kind::Dgl => "dgl",
            Kind::Dga => "dga",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Lie(LInfAlgebra),
    Assoc(AInfAlgebra),
}

impl Structure {
    pub fn space(&self) -> &GradedSpace {
        match self {
            Structure::Lie(l) => l.space(),
            Structure::Assoc(a) => a.space(),
        }
    }

    /// `check_jacobi` or `check_stasheff` within `t`.
    pub fn check(&self, t: &Truncation) -> Result<IdentityReport> {
        match self {
            Structure::Lie(l) => check_jacobi(l, t),
            Structure::Assoc(a) => check_stasheff(a, t),
        }
    }

    fn tables(&self) -> Vec<(usize, &MultiOp)> {
        match self {
            Structure::Lie(l) => l.tables().collect(),
            Structure::Assoc(a) => a.tables().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraFile {
    pub kind: Kind,
    pub structure: Structure,
    pub truncation: Option<Truncation>,
}

impl AlgebraFile {
    pub fn lie(kind: Kind, l: LInfAlgebra, truncation: Option<Truncation>) -> Self {
        AlgebraFile {
            kind,
            structure: Structure::Lie(l),
            truncation,
        }
    }

    pub fn assoc(kind: Kind, a: AInfAlgebra, truncation: Option<Truncation>) -> Self {
        AlgebraFile {
            kind,
            structure: Structure::Assoc(a),
            truncation,
        }
    }

    /// Canonical text: kind, truncation, basis in the global order, then
    /// operations by arity and input tuple.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kind {}", self.kind);
        if let Some(t) = &self.truncation {
            let _ = writeln!(s, "truncation {} {} {}", t.max_degree, t.max_arity, t.max_weight);
        }
        let space = self.structure.space();
        for (_, name, deg) in space.basis() {
            let _ = writeln!(s, "basis {name}:{deg}");
        }
        for (k, table) in self.structure.tables() {
            for (inputs, out) in table.entries() {
                s.push_str(&format_entry(self.kind.prefix(), k, inputs, out, space));
                s.push('\n');
            }
        }
        s
    }
}

/// `m3(x,x,x) = 1/36 y`.
pub fn format_entry(prefix: char, k: usize, inputs: &[usize], out: &Element, space: &GradedSpace) -> String {
    let args: Vec<&str> = inputs.iter().map(|&i| space.name(i)).collect();
    format!("{prefix}{k}({}) = {}", args.join(","), out.format(space))
}

fn is_name_char(c: char) -> bool {
    !c.is_whitespace() && !":,()=+#".contains(c)
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.text[..self.pos].chars().count() + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn token(&mut self, what: &str) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.text[self.pos..].chars().next() {
            if !is_name_char(c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        if start == self.pos {
            return Err(self.err(format!("expected {what}")));
        }
        Ok(&self.text[start..self.pos])
    }

    fn integer<T: std::str::FromStr>(&mut self, what: &str) -> Result<T> {
        let start = self.pos;
        let tok = self.token(what)?;
        tok.parse().map_err(|_| {
            self.pos = start;
            self.skip_ws();
            self.err(format!("invalid {what} `{tok}`"))
        })
    }
}

fn looks_like_rational(tok: &str) -> bool {
    let t = tok.strip_prefix('-').unwrap_or(tok);
    !t.is_empty() && t.chars().all(|c| c.is_ascii_digit() || c == '/') && t.starts_with(|c: char| c.is_ascii_digit())
}

fn parse_rhs(cur: &mut Cursor, space: &GradedSpace) -> Result<Element> {
    let mut out = Element::zero();
    loop {
        let start = cur.pos;
        let first = cur.token("a term")?;
        let save = cur.pos;
        let (coeff, name) = if looks_like_rational(first) {
            let at = start + (cur.text[start..].len() - cur.text[start..].trim_start().len());
            let q = parse_q(first).map_err(|_| {
                cur.pos = at;
                cur.err(format!("invalid rational `{first}`"))
            })?;
            if cur.at_end() || cur.text[cur.pos..].starts_with('+') {
                // a bare number is only allowed as the whole zero right-hand side
                if q == crate::scalar::zero() && out.is_zero() && cur.at_end() {
                    return Ok(out);
                }
                cur.pos = save;
                return Err(cur.err("expected a basis name after the coefficient"));
            }
            (q, cur.token("a basis name")?)
        } else {
            (crate::scalar::one(), first)
        };
        let Some(i) = space.index_of(name) else {
            cur.pos -= name.len();
            return Err(cur.err(format!("unknown basis element `{name}`")));
        };
        out.add_term(i, coeff);
        if cur.at_end() {
            return Ok(out);
        }
        cur.expect('+')?;
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(p) => &line[..p],
        None => line,
    }
}

enum Builder {
    Lie(LInfAlgebra),
    Assoc(AInfAlgebra),
}

/// Parses a file without running the identity check.
pub fn parse(text: &str) -> Result<AlgebraFile> {
    let mut kind: Option<Kind> = None;
    let mut truncation = None;
    let mut basis: Vec<(String, i64)> = Vec::new();
    let mut builder: Option<Builder> = None;
    let mut seen: HashSet<(usize, Vec<usize>)> = HashSet::new();
    for (n, raw) in text.lines().enumerate() {
        let body = strip_comment(raw);
        let mut cur = Cursor {
            line: n + 1,
            text: body,
            pos: 0,
        };
        if cur.at_end() {
            continue;
        }
        let start = cur.pos;
        let head = cur.token("a keyword")?;
        match head {
            "kind" => {
                if kind.is_some() {
                    cur.pos = start;
                    return Err(cur.err("duplicate `kind`"));
                }
                let at = cur.pos;
                let k = cur.token("a kind")?;
                kind = Some(Kind::parse(k).ok_or_else(|| {
                    cur.pos = at;
                    cur.skip_ws();
                    cur.err(format!("unknown kind `{k}`, expected linf, ainf, dgl or dga"))
                })?);
            }
            "truncation" => {
                if kind.is_none() || truncation.is_some() || !basis.is_empty() || builder.is_some() {
                    cur.pos = start;
                    return Err(cur.err("`truncation` must follow `kind`, at most once"));
                }
                let d: i64 = cur.integer("max degree")?;
                let a: usize = cur.integer("max arity")?;
                let w: usize = cur.integer("max weight")?;
                truncation = Some(Truncation::new(d, a, w).map_err(|e| {
                    cur.pos = start;
                    cur.err(e.to_string())
                })?);
            }
            "basis" => {
                if kind.is_none() || builder.is_some() {
                    cur.pos = start;
                    return Err(cur.err("`basis` must follow `kind` and precede operations"));
                }
                while !cur.at_end() {
                    let name = cur.token("a basis name")?;
                    cur.expect(':')?;
                    let deg: i64 = cur.integer("degree")?;
                    if basis.iter().any(|(b, _)| b == name) {
                        return Err(cur.err(format!("duplicate basis element `{name}`")));
                    }
                    basis.push((name.to_string(), deg));
                }
            }
            op => {
                let Some(k) = kind else {
                    cur.pos = start;
                    return Err(cur.err("the file must start with `kind`"));
                };
                let arity = op
                    .strip_prefix(k.prefix())
                    .and_then(|a| a.parse::<usize>().ok())
                    .filter(|&a| a >= 1);
                let Some(arity) = arity else {
                    cur.pos = start;
                    return Err(cur.err(format!("unknown statement `{op}`")));
                };
                if k.max_arity().is_some_and(|m| arity > m) {
                    cur.pos = start;
                    return Err(cur.err(format!("a {k} has no operations of arity {arity}")));
                }
                if builder.is_none() {
                    let space = GradedSpace::new(basis.iter().cloned()).map_err(|e| cur.err(e.to_string()))?;
                    builder = Some(if k.is_lie() {
                        Builder::Lie(LInfAlgebra::new(space))
                    } else {
                        Builder::Assoc(AInfAlgebra::new(space))
                    });
                }
                let b = builder.as_mut().expect("set above");
                let space = match b {
                    Builder::Lie(l) => l.space().clone(),
                    Builder::Assoc(a) => a.space().clone(),
                };
                cur.expect('(')?;
                let mut inputs = Vec::new();
                loop {
                    let name = cur.token("a basis name")?;
                    let i = space.index_of(name).ok_or_else(|| {
                        let mut c = Cursor { ..cur };
                        c.pos -= name.len();
                        c.err(format!("unknown basis element `{name}`"))
                    })?;
                    inputs.push(i);
                    if cur.eat(')') {
                        break;
                    }
                    cur.expect(',')?;
                }
                if inputs.len() != arity {
                    cur.pos = start;
                    return Err(cur.err(format!("{op} takes {arity} inputs, got {}", inputs.len())));
                }
                cur.expect('=')?;
                let rhs_at = cur.pos;
                let rhs = parse_rhs(&mut cur, &space)?;
                let key = match b {
                    Builder::Lie(_) => skew_canonical(&space, &inputs).map(|(s, _)| s).unwrap_or(inputs.clone()),
                    Builder::Assoc(_) => inputs.clone(),
                };
                if !seen.insert((arity, key)) {
                    cur.pos = start;
                    return Err(cur.err("duplicate entry"));
                }
                let res = match b {
                    Builder::Lie(l) => l.set(inputs, rhs),
                    Builder::Assoc(a) => a.set(inputs, rhs),
                };
                res.map_err(|e| {
                    cur.pos = rhs_at;
                    cur.skip_ws();
                    cur.err(e.to_string())
                })?;
            }
        }
    }
    let Some(kind) = kind else {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            column: 1,
            message: "missing `kind`".into(),
        });
    };
    let structure = match builder {
        Some(Builder::Lie(l)) => Structure::Lie(l),
        Some(Builder::Assoc(a)) => Structure::Assoc(a),
        None => {
            let space = GradedSpace::new(basis).map_err(|e| Error::Parse {
                line: 1,
                column: 1,
                message: e.to_string(),
            })?;
            if kind.is_lie() {
                Structure::Lie(LInfAlgebra::new(space))
            } else {
                Structure::Assoc(AInfAlgebra::new(space))
            }
        }
    };
    Ok(AlgebraFile {
        kind,
        structure,
        truncation,
    })
}

/// Parses and runs the identity check within the file's truncation (or
/// `fallback`); a violation is reported as [`Error::IdentityViolation`]
/// naming the first failing identity and tuple.
pub fn load(text: &str, fallback: &Truncation) -> Result<AlgebraFile> {
    let f = parse(text)?;
    let t = f.truncation.unwrap_or(*fallback);
    let report = f.structure.check(&t)?;
    if let Some(msg) = report.first_failure(f.structure.space(), f.structure.space()) {
        return Err(Error::IdentityViolation(msg));
    }
    Ok(f)
}
