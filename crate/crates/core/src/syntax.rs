//! The text formats: DGL descriptions, retract choices and extension tables.
//!
//! ```text
//! # line comment
//! dgl {
//!   title "two spheres"
//!   cap 10
//!   gen a:2
//!   gen b:2
//!   gen u:5
//!   d u = [a, b]
//! }
//! ```
//!
//! Expressions: `expr := sign? term (("+"|"-") term)*`,
//! `term := (RATIONAL "*")? factor`, `factor := IDENT | "[" expr "," expr "]" | "(" expr ")"`.
//! Retract files hold `a DEG = expr` and `c DEG = expr` lines inside
//! `retract { ... }`; extension files hold `spheres n1 n2 ...` and
//! `NAME = expr` lines inside `extension { ... }`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::dgl::{FreeDgl, Generator};
use crate::error::{Error, Result};
use crate::lie::{right_normed, GenId, LieElement, Word};
use crate::qlinalg::Scalar;

/// Source position. Positions never take part in equality, so documents
/// compare by content only.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

fn error_at(at: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        message: message.into(),
        line: at.line,
        column: at.column,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    Gen { name: String, at: Pos },
    Bracket(Box<Expr>, Box<Expr>),
    Group(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Scalar,
    pub factor: Factor,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
    pub at: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenDecl {
    pub name: String,
    pub degree: i64,
    pub at: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffDecl {
    pub name: String,
    pub expr: Expr,
    pub at: Pos,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DglDocument {
    pub title: Option<String>,
    pub cap: Option<u32>,
    pub generators: Vec<GenDecl>,
    pub differentials: Vec<DiffDecl>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    A,
    C,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractEntry {
    pub part: Part,
    pub degree: i64,
    pub expr: Expr,
}

/// A hand-chosen decomposition: elements of `A` and `C` by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RetractDocument {
    pub entries: Vec<RetractEntry>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtensionDocument {
    pub spheres: Vec<i64>,
    pub assignments: Vec<(String, Expr)>,
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    at: Pos,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let at = Pos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), at });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Int(s), at });
            continue;
        }
        if c == '"' {
            let start = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(error_at(at, "unterminated string"));
            }
            let s: String = chars[start..i].iter().collect();
            col += i + 1 - (start - 1);
            i += 1;
            out.push(Token { tok: Tok::Str(s), at });
            continue;
        }
        if "{}[](),:=+-*/".contains(c) {
            out.push(Token { tok: Tok::Sym(c), at });
            col += 1;
            i += 1;
            continue;
        }
        return Err(error_at(at, format!("unexpected character `{c}`")));
    }
    out.push(Token {
        tok: Tok::End,
        at: Pos { line, column: col },
    });
    Ok(out)
}

// ---------------------------------------------------------------- parser

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(s) => format!("`{s}`"),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<Pos> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(t.at)
        } else {
            Err(error_at(t.at, format!("expected `{c}`, found {}", Self::describe(&t.tok))))
        }
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect_ident(&mut self) -> Result<(String, Pos)> {
        let t = self.next();
        match t.tok {
            Tok::Ident(s) => Ok((s, t.at)),
            other => Err(error_at(t.at, format!("expected a name, found {}", Self::describe(&other)))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<Pos> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == kw => Ok(t.at),
            other => Err(error_at(t.at, format!("expected `{kw}`, found {}", Self::describe(other)))),
        }
    }

    fn expect_int(&mut self) -> Result<(i64, Pos)> {
        let t = self.next();
        match &t.tok {
            Tok::Int(s) => s
                .parse::<i64>()
                .map(|v| (v, t.at))
                .map_err(|_| error_at(t.at, format!("integer `{s}` out of range"))),
            other => Err(error_at(t.at, format!("expected an integer, found {}", Self::describe(other)))),
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::End {
            Ok(())
        } else {
            Err(error_at(t.at, format!("unexpected {} after the closing brace", Self::describe(&t.tok))))
        }
    }

    fn rational(&mut self) -> Result<Scalar> {
        let (n, at) = self.expect_int()?;
        if self.is_sym('/') {
            self.next();
            let (d, dat) = self.expect_int()?;
            if d == 0 {
                return Err(error_at(dat, "zero denominator"));
            }
            Scalar::new(n, d).map_err(|e| error_at(at, e.to_string()))
        } else {
            Ok(Scalar::from_int(n))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let at = self.peek().at;
        let mut terms = Vec::new();
        let mut sign = Scalar::one();
        if self.is_sym('+') || self.is_sym('-') {
            if self.next().tok == Tok::Sym('-') {
                sign = -sign;
            }
        }
        loop {
            let mut t = self.term()?;
            t.coeff = &t.coeff * &sign;
            terms.push(t);
            if self.is_sym('+') {
                self.next();
                sign = Scalar::one();
            } else if self.is_sym('-') {
                self.next();
                sign = -Scalar::one();
            } else {
                break;
            }
        }
        Ok(Expr { terms, at })
    }

    fn term(&mut self) -> Result<Term> {
        let coeff = if matches!(self.peek().tok, Tok::Int(_)) {
            let c = self.rational()?;
            self.expect_sym('*')?;
            c
        } else {
            Scalar::one()
        };
        Ok(Term {
            coeff,
            factor: self.factor()?,
        })
    }

    fn factor(&mut self) -> Result<Factor> {
        let t = self.next();
        match t.tok {
            Tok::Ident(name) => Ok(Factor::Gen { name, at: t.at }),
            Tok::Sym('[') => {
                let a = self.expr()?;
                self.expect_sym(',')?;
                let b = self.expr()?;
                self.expect_sym(']')?;
                Ok(Factor::Bracket(Box::new(a), Box::new(b)))
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(Factor::Group(Box::new(e)))
            }
            other => Err(error_at(
                t.at,
                format!("expected a generator, `[` or `(`, found {}", Self::describe(&other)),
            )),
        }
    }
}

/// Parses a DGL description. Checks names and degrees but does not build
/// the DGL; see [`DglDocument::build`].
pub fn parse_dgl(text: &str) -> Result<DglDocument> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("dgl")?;
    p.expect_sym('{')?;
    let mut doc = DglDocument::default();
    loop {
        let t = p.next();
        match &t.tok {
            Tok::Sym('}') => break,
            Tok::Ident(kw) if kw == "gen" => {
                let (name, at) = p.expect_ident()?;
                p.expect_sym(':')?;
                let (degree, dat) = p.expect_int()?;
                if degree < 1 {
                    return Err(error_at(dat, format!("generator `{name}` needs a positive degree")));
                }
                doc.generators.push(GenDecl { name, degree, at });
            }
            Tok::Ident(kw) if kw == "d" => {
                let (name, at) = p.expect_ident()?;
                p.expect_sym('=')?;
                let expr = p.expr()?;
                doc.differentials.push(DiffDecl { name, expr, at });
            }
            Tok::Ident(kw) if kw == "cap" => {
                let (c, at) = p.expect_int()?;
                if c < 1 || c > u32::MAX as i64 {
                    return Err(error_at(at, "cap must be a positive integer"));
                }
                doc.cap = Some(c as u32);
            }
            Tok::Ident(kw) if kw == "title" => {
                let s = p.next();
                match s.tok {
                    Tok::Str(v) => doc.title = Some(v),
                    other => return Err(error_at(s.at, format!("expected a string, found {}", Parser::describe(&other)))),
                }
            }
            other => {
                return Err(error_at(
                    t.at,
                    format!("expected `gen`, `d`, `cap`, `title` or `}}`, found {}", Parser::describe(other)),
                ))
            }
        }
    }
    p.expect_end()?;
    doc.validate()?;
    Ok(doc)
}

/// Parses a standalone expression.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    let t = p.next();
    if t.tok != Tok::End {
        return Err(error_at(t.at, format!("unexpected {}", Parser::describe(&t.tok))));
    }
    Ok(e)
}

pub fn parse_retract(text: &str) -> Result<RetractDocument> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("retract")?;
    p.expect_sym('{')?;
    let mut doc = RetractDocument::default();
    loop {
        let t = p.next();
        let part = match &t.tok {
            Tok::Sym('}') => break,
            Tok::Ident(kw) if kw == "a" => Part::A,
            Tok::Ident(kw) if kw == "c" => Part::C,
            other => {
                return Err(error_at(t.at, format!("expected `a`, `c` or `}}`, found {}", Parser::describe(other))))
            }
        };
        let (degree, _) = p.expect_int()?;
        p.expect_sym('=')?;
        let expr = p.expr()?;
        doc.entries.push(RetractEntry { part, degree, expr });
    }
    p.expect_end()?;
    Ok(doc)
}

pub fn parse_extension(text: &str) -> Result<ExtensionDocument> {
    let mut p = Parser::new(text)?;
    p.expect_keyword("extension")?;
    p.expect_sym('{')?;
    let mut doc = ExtensionDocument::default();
    loop {
        let t = p.next();
        match &t.tok {
            Tok::Sym('}') => break,
            Tok::Ident(kw) if kw == "spheres" => {
                while matches!(p.peek().tok, Tok::Int(_)) {
                    doc.spheres.push(p.expect_int()?.0);
                }
            }
            Tok::Ident(name) => {
                p.expect_sym('=')?;
                let expr = p.expr()?;
                doc.assignments.push((name.clone(), expr));
            }
            other => return Err(error_at(t.at, format!("expected a name or `}}`, found {}", Parser::describe(other)))),
        }
    }
    p.expect_end()?;
    Ok(doc)
}

// ---------------------------------------------------------------- evaluation

/// Evaluates an expression; `lookup` gives the id and degree of a name.
pub fn eval_expr(expr: &Expr, lookup: &dyn Fn(&str) -> Option<(GenId, i64)>) -> Result<LieElement> {
    let mut out: Option<LieElement> = None;
    for t in &expr.terms {
        let v = eval_factor(&t.factor, lookup)?;
        match &mut out {
            None => out = Some(v.scale(&t.coeff)),
            Some(acc) => {
                if acc.degree() != v.degree() {
                    return Err(error_at(
                        factor_pos(&t.factor).unwrap_or(expr.at),
                        format!("term of degree {} added to terms of degree {}", v.degree(), acc.degree()),
                    ));
                }
                acc.add_scaled(&v, &t.coeff);
            }
        }
    }
    out.ok_or_else(|| error_at(expr.at, "empty expression"))
}

fn factor_pos(f: &Factor) -> Option<Pos> {
    match f {
        Factor::Gen { at, .. } => Some(*at),
        Factor::Bracket(a, _) => Some(a.at),
        Factor::Group(e) => Some(e.at),
    }
}

fn eval_factor(f: &Factor, lookup: &dyn Fn(&str) -> Option<(GenId, i64)>) -> Result<LieElement> {
    match f {
        Factor::Gen { name, at } => {
            let (id, deg) = lookup(name).ok_or_else(|| error_at(*at, format!("unknown generator `{name}`")))?;
            Ok(LieElement::generator(id, deg))
        }
        Factor::Bracket(a, b) => {
            let x = eval_expr(a, lookup)?;
            let y = eval_expr(b, lookup)?;
            let mut out = x.bracket(&y);
            if out.is_zero() {
                out = LieElement::zero(x.degree() + y.degree());
            }
            Ok(out)
        }
        Factor::Group(e) => eval_expr(e, lookup),
    }
}

/// Evaluates an expression against the generators of a DGL.
pub fn eval_in(dgl: &FreeDgl, expr: &Expr) -> Result<LieElement> {
    eval_expr(expr, &|name| dgl.generator_id(name).map(|id| (id, dgl.generator_degree(id))))
}

/// Parses and evaluates an expression against a DGL.
pub fn parse_element(dgl: &FreeDgl, text: &str) -> Result<LieElement> {
    eval_in(dgl, &parse_expr(text)?)
}

impl DglDocument {
    fn validate(&self) -> Result<()> {
        let mut degrees = HashMap::new();
        for g in &self.generators {
            if degrees.insert(g.name.clone(), g.degree).is_some() {
                return Err(error_at(g.at, format!("generator `{}` declared twice", g.name)));
            }
        }
        let mut seen = HashSet::new();
        let ids: HashMap<String, GenId> = self
            .generators
            .iter()
            .enumerate()
            .map(|(j, g)| (g.name.clone(), j as GenId))
            .collect();
        let lookup = |name: &str| ids.get(name).map(|&id| (id, degrees[name]));
        for d in &self.differentials {
            let Some(&deg) = degrees.get(&d.name) else {
                return Err(error_at(d.at, format!("differential of undeclared generator `{}`", d.name)));
            };
            if !seen.insert(d.name.clone()) {
                return Err(error_at(d.at, format!("differential of `{}` given twice", d.name)));
            }
            let v = eval_expr(&d.expr, &lookup)?;
            if v.degree() != deg - 1 {
                return Err(error_at(
                    d.expr.at,
                    format!(
                        "d{} has degree {} but `{}` has degree {deg}; expected {}",
                        d.name,
                        v.degree(),
                        d.name,
                        deg - 1
                    ),
                ));
            }
        }
        Ok(())
    }

    /// Builds the DGL with the given cap, falling back to the document's cap
    /// and then to `default_cap`.
    pub fn build(&self, cap: Option<u32>, default_cap: u32) -> Result<FreeDgl> {
        let gens: Vec<Generator> = self
            .generators
            .iter()
            .map(|g| Generator::new(g.name.clone(), g.degree))
            .collect();
        let ids: HashMap<&str, (GenId, i64)> = gens
            .iter()
            .enumerate()
            .map(|(j, g)| (g.name.as_str(), (j as GenId, g.degree)))
            .collect();
        let lookup = |name: &str| ids.get(name).copied();
        let mut diffs: Vec<LieElement> = gens.iter().map(|g| LieElement::zero(g.degree - 1)).collect();
        for d in &self.differentials {
            let (id, _) = ids[d.name.as_str()];
            diffs[id as usize] = eval_expr(&d.expr, &lookup)?;
        }
        FreeDgl::new(gens, diffs, cap.or(self.cap).unwrap_or(default_cap))
    }

    /// The document describing an existing DGL.
    pub fn from_dgl(dgl: &FreeDgl, title: Option<String>) -> DglDocument {
        let generators = dgl
            .generators()
            .iter()
            .map(|g| GenDecl {
                name: g.name.clone(),
                degree: g.degree,
                at: Pos::default(),
            })
            .collect();
        let differentials = (0..dgl.generators().len())
            .filter(|&j| !dgl.generator_differential(j as GenId).is_zero())
            .map(|j| DiffDecl {
                name: dgl.generators()[j].name.clone(),
                expr: element_to_expr(dgl, dgl.generator_differential(j as GenId)),
                at: Pos::default(),
            })
            .collect();
        DglDocument {
            title,
            cap: Some(dgl.cap()),
            generators,
            differentials,
        }
    }
}

// ---------------------------------------------------------------- printing

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            let abs = t.coeff.abs();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "{}", t.factor)?;
        }
        Ok(())
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Gen { name, .. } => f.write_str(name),
            Factor::Bracket(a, b) => write!(f, "[{a}, {b}]"),
            Factor::Group(e) => write!(f, "({e})"),
        }
    }
}

impl fmt::Display for DglDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dgl {{")?;
        if let Some(t) = &self.title {
            writeln!(f, "  title \"{t}\"")?;
        }
        if let Some(c) = self.cap {
            writeln!(f, "  cap {c}")?;
        }
        for g in &self.generators {
            writeln!(f, "  gen {}:{}", g.name, g.degree)?;
        }
        for d in &self.differentials {
            writeln!(f, "  d {} = {}", d.name, d.expr)?;
        }
        writeln!(f, "}}")
    }
}

impl fmt::Display for RetractDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "retract {{")?;
        for e in &self.entries {
            let p = match e.part {
                Part::A => "a",
                Part::C => "c",
            };
            writeln!(f, "  {p} {} = {}", e.degree, e.expr)?;
        }
        writeln!(f, "}}")
    }
}

impl fmt::Display for ExtensionDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "extension {{")?;
        let s: Vec<String> = self.spheres.iter().map(|n| n.to_string()).collect();
        writeln!(f, "  spheres {}", s.join(" "))?;
        for (name, e) in &self.assignments {
            writeln!(f, "  {name} = {e}")?;
        }
        writeln!(f, "}}")
    }
}

fn gen_factor(dgl: &FreeDgl, g: GenId) -> Factor {
    Factor::Gen {
        name: dgl.generators()[g as usize].name.clone(),
        at: Pos::default(),
    }
}

fn single(f: Factor) -> Expr {
    Expr {
        terms: vec![Term {
            coeff: Scalar::one(),
            factor: f,
        }],
        at: Pos::default(),
    }
}

fn right_normed_factor(dgl: &FreeDgl, w: &[GenId]) -> Factor {
    if w.len() == 1 {
        return gen_factor(dgl, w[0]);
    }
    Factor::Bracket(
        Box::new(single(gen_factor(dgl, w[0]))),
        Box::new(single(right_normed_factor(dgl, &w[1..]))),
    )
}

/// Writes a Lie element as a combination of right-normed brackets of
/// generators. Within the degree cap the brackets come from the monomial
/// spanning set of the Lie basis; above it each word-length-`m` component
/// `P` is written as `P = (1/m) sum_w c_w [w_1,[w_2,...]]`.
pub fn element_to_expr(dgl: &FreeDgl, x: &LieElement) -> Expr {
    let degree_of = |g: GenId| dgl.generator_degree(g);
    let monomial = x.degree() >= 1
        && x.degree() <= dgl.cap() as i64
        && !x.is_zero();
    let pieces: Vec<(Word, Scalar)> = match monomial
        .then(|| dgl.space(x.degree()).ok())
        .flatten()
        .and_then(|s| s.monomial_expansion(x, degree_of).ok())
    {
        Some(p) => p,
        None => dynkin_pieces(dgl, x),
    };
    let mut collected: BTreeMap<(usize, Word), Scalar> = BTreeMap::new();
    for (w, c) in pieces {
        let mut coeff = c;
        let mut key = w.clone();
        if w.len() == 2 && w[0] > w[1] {
            // [a, b] = -(-1)^{|a||b|} [b, a]
            let sign = -Scalar::sign(degree_of(w[0]) * degree_of(w[1]));
            coeff = &coeff * &sign;
            key = vec![w[1], w[0]];
        }
        let e = collected.entry((w.len(), key)).or_insert_with(Scalar::zero);
        *e += &coeff;
    }
    let terms = collected
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((_, w), coeff)| Term {
            coeff,
            factor: right_normed_factor(dgl, &w),
        })
        .collect();
    Expr {
        terms,
        at: Pos::default(),
    }
}

fn dynkin_pieces(_dgl: &FreeDgl, x: &LieElement) -> Vec<(Word, Scalar)> {
    x.terms()
        .iter()
        .map(|(w, c)| (w.clone(), c / &Scalar::from_int(w.len() as i64)))
        .collect()
}

/// Human readable form of an element, re-parseable by [`parse_element`].
pub fn format_element(dgl: &FreeDgl, x: &LieElement) -> String {
    element_to_expr(dgl, x).to_string()
}

/// Expands a right-normed bracket, for callers that build elements by word.
pub fn expand_word(dgl: &FreeDgl, w: &[GenId]) -> LieElement {
    right_normed(w, |g| dgl.generator_degree(g))
}
