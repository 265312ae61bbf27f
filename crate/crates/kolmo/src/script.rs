//! The check-script language.
//!
//! ```text
//! script     = [ instance ] { statement } ;
//! instance   = "instance" ( "finstoch" | "setmulti" | "vietoris"
//!                         | "cringplus" [ "degree" NUMBER ] ) ;
//! statement  = "object" IDENT "=" source
//!            | "morphism" IDENT "=" source
//!            | "family" IDENT "=" source
//!            | "term" IDENT "=" expr
//!            | "check" [ "not" ] directive ;
//! source     = JSON | "load" STRING ;
//! expr       = IDENT | "gen" "(" IDENT ")"
//!            | "id" "(" obj ")" | "copy" "(" obj ")" | "discard" "(" obj ")"
//!            | "swap" "(" obj "," obj ")"
//!            | ( "seq" | "par" ) "(" expr "," expr { "," expr } ")" ;
//! obj        = "I" | IDENT { "*" IDENT } ;
//! directive  = "comonoid" obj
//!            | "multiplicativity" obj "," obj
//!            | "discard-natural" expr
//!            | "deterministic" expr
//!            | "continuity" expr
//!            | "equal" expr "," expr
//!            | "as-equal" expr "," expr "," expr          (* p, f, g *)
//!            | "ci" expr ":" obj { "," obj }
//!            | "causality" expr "," expr "," expr "," expr (* f, g, h1, h2 *)
//!            | "determinism-lemma" expr "," expr          (* p, s *)
//!            | "aseq-lemma" expr "," expr "," expr        (* p, f, g *)
//!            | "kolmogorov" IDENT "," expr                (* family, statistic *)
//!            | "compatibility" IDENT "depth" NUMBER
//!            | "infindep" IDENT "at" LABEL "depth" NUMBER
//!            | "exchangeable" IDENT "window" NUMBER
//!            | "catdet" IDENT "depth" NUMBER
//!            | "noncausality" NUMBER
//!            | "witness" NUMBER ;
//! ```
//!
//! `JSON` is any JSON object or array (see [`crate::json`]); `#` starts a
//! comment; whitespace and newlines are insignificant. `seq` and `par`
//! with more than two arguments associate to the left. Script-level names
//! must be bound before use; names inside JSON are resolved when loading.

use std::collections::BTreeSet;
use std::fmt;

use serde_json::Value;

use crate::json::InstanceKind;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unbound generator `{name}`")]
    UnboundGenerator { name: String, line: usize, col: usize },
    #[error("{line}:{col}: unbound {kind} `{name}`")]
    UnboundName {
        kind: &'static str,
        name: String,
        line: usize,
        col: usize,
    },
    #[error("{line}:{col}: `{name}` is already bound")]
    Rebound { name: String, line: usize, col: usize },
}

impl ParseError {
    pub fn location(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, col, .. }
            | ParseError::UnboundGenerator { line, col, .. }
            | ParseError::UnboundName { line, col, .. }
            | ParseError::Rebound { line, col, .. } => (*line, *col),
        }
    }
}

/// `X*Y`; empty is the unit `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjExpr(pub Vec<String>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Gen(String),
    Id(ObjExpr),
    Seq(Box<Expr>, Box<Expr>),
    Par(Box<Expr>, Box<Expr>),
    Swap(ObjExpr, ObjExpr),
    Copy(ObjExpr),
    Discard(ObjExpr),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Inline(Value),
    Load(String),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Directive {
    Comonoid(ObjExpr),
    Multiplicativity(ObjExpr, ObjExpr),
    DiscardNatural(Expr),
    Deterministic(Expr),
    Continuity(Expr),
    Equal(Expr, Expr),
    AsEqual(Expr, Expr, Expr),
    Ci(Expr, Vec<ObjExpr>),
    Causality(Expr, Expr, Expr, Expr),
    DeterminismLemma(Expr, Expr),
    AseqLemma(Expr, Expr, Expr),
    Kolmogorov(String, Expr),
    Compatibility(String, usize),
    Infindep(String, String, usize),
    Exchangeable(String, usize),
    Catdet(String, usize),
    Noncausality(u32),
    Witness(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Statement {
    Object(String, Source),
    Morphism(String, Source),
    Family(String, Source),
    Term(String, Expr),
    Check { negated: bool, directive: Directive },
}

/// A parsed script. Equality ignores source positions.
#[derive(Clone, Debug, Default)]
pub struct Script {
    pub instance: Option<InstanceKind>,
    pub statements: Vec<Statement>,
    /// `(line, column)` of each statement.
    pub positions: Vec<(usize, usize)>,
}

impl PartialEq for Script {
    fn eq(&self, other: &Self) -> bool {
        self.instance == other.instance && self.statements == other.statements
    }
}

impl Script {
    pub fn instance_kind(&self) -> InstanceKind {
        self.instance.unwrap_or(InstanceKind::FinStoch)
    }

    pub fn is_empty(&self) -> bool {
        self.instance.is_none() && self.statements.is_empty()
    }
}

// ---------------------------------------------------------------- emitting

impl fmt::Display for ObjExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("I")
        } else {
            f.write_str(&self.0.join("*"))
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Gen(n) => f.write_str(n),
            Expr::Id(x) => write!(f, "id({x})"),
            Expr::Seq(a, b) => write!(f, "seq({a}, {b})"),
            Expr::Par(a, b) => write!(f, "par({a}, {b})"),
            Expr::Swap(x, y) => write!(f, "swap({x}, {y})"),
            Expr::Copy(x) => write!(f, "copy({x})"),
            Expr::Discard(x) => write!(f, "discard({x})"),
        }
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Inline(v) => write!(f, "{v}"),
            Source::Load(p) => write!(f, "load {}", Value::String(p.clone())),
        }
    }
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Directive::*;
        match self {
            Comonoid(x) => write!(f, "comonoid {x}"),
            Multiplicativity(x, y) => write!(f, "multiplicativity {x}, {y}"),
            DiscardNatural(e) => write!(f, "discard-natural {e}"),
            Deterministic(e) => write!(f, "deterministic {e}"),
            Continuity(e) => write!(f, "continuity {e}"),
            Equal(a, b) => write!(f, "equal {a}, {b}"),
            AsEqual(p, a, b) => write!(f, "as-equal {p}, {a}, {b}"),
            Ci(e, objs) => {
                let objs: Vec<String> = objs.iter().map(ToString::to_string).collect();
                write!(f, "ci {e} : {}", objs.join(", "))
            }
            Causality(a, b, c, d) => write!(f, "causality {a}, {b}, {c}, {d}"),
            DeterminismLemma(p, s) => write!(f, "determinism-lemma {p}, {s}"),
            AseqLemma(p, a, b) => write!(f, "aseq-lemma {p}, {a}, {b}"),
            Kolmogorov(fam, s) => write!(f, "kolmogorov {fam}, {s}"),
            Compatibility(fam, d) => write!(f, "compatibility {fam} depth {d}"),
            Infindep(fam, l, d) => write!(f, "infindep {fam} at {l} depth {d}"),
            Exchangeable(fam, w) => write!(f, "exchangeable {fam} window {w}"),
            Catdet(fam, d) => write!(f, "catdet {fam} depth {d}"),
            Noncausality(d) => write!(f, "noncausality {d}"),
            Witness(n) => write!(f, "witness {n}"),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Object(n, s) => write!(f, "object {n} = {s}"),
            Statement::Morphism(n, s) => write!(f, "morphism {n} = {s}"),
            Statement::Family(n, s) => write!(f, "family {n} = {s}"),
            Statement::Term(n, e) => write!(f, "term {n} = {e}"),
            Statement::Check { negated, directive } => {
                write!(f, "check {}{directive}", if *negated { "not " } else { "" })
            }
        }
    }
}

/// Renders a script in the surface syntax, one statement per line.
pub fn emit(script: &Script) -> String {
    let mut out = String::new();
    if let Some(kind) = script.instance {
        out.push_str(&match kind {
            InstanceKind::CRingPlus(d) => format!("instance cringplus degree {d}\n"),
            k => format!("instance {}\n", k.name()),
        });
    }
    for s in &script.statements {
        out.push_str(&s.to_string());
        out.push('\n');
    }
    out
}

// ----------------------------------------------------------------- lexing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    /// Digits, dots and `*`: numbers and labels.
    Num(String),
    Str(String),
    Json(Value),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(s) => write!(f, "number `{s}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Json(_) => f.write_str("JSON value"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax { line, col, msg: msg.into() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c == '#' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    /// The extent of a balanced JSON value starting at `{` or `[`.
    fn json(&mut self, line: usize, col: usize) -> Result<Value, ParseError> {
        let start = self.pos;
        let (mut depth, mut in_str, mut escaped) = (0usize, false, false);
        while let Some(c) = self.bump() {
            if in_str {
                match (escaped, c) {
                    (true, _) => escaped = false,
                    (false, '\\') => escaped = true,
                    (false, '"') => in_str = false,
                    _ => {}
                }
                continue;
            }
            match c {
                '"' => in_str = true,
                '{' | '[' => depth += 1,
                '}' | ']' => {
                    depth -= 1;
                    if depth == 0 {
                        let text = &self.src[start..self.pos];
                        return serde_json::from_str(text).map_err(|e| {
                            let (l, c) = (line + e.line() - 1, if e.line() == 1 { col + e.column() - 1 } else { e.column() });
                            self.err(l, c, format!("invalid JSON: {e}"))
                        });
                    }
                }
                _ => {}
            }
        }
        Err(self.err(line, col, "unterminated JSON value"))
    }

    fn next(&mut self) -> Result<(Tok, usize, usize), ParseError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek() else {
            return Ok((Tok::Eof, line, col));
        };
        let tok = if c == '{' || c == '[' {
            Tok::Json(self.json(line, col)?)
        } else if c == '"' {
            let start = self.pos;
            self.bump();
            let mut escaped = false;
            loop {
                match self.bump() {
                    None => return Err(self.err(line, col, "unterminated string")),
                    Some('\\') if !escaped => escaped = true,
                    Some('"') if !escaped => break,
                    Some(_) => escaped = false,
                }
            }
            let s: String = serde_json::from_str(&self.src[start..self.pos])
                .map_err(|e| self.err(line, col, format!("bad string: {e}")))?;
            Tok::Str(s)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '\'') {
                self.bump();
            }
            Tok::Ident(self.src[start..self.pos].to_string())
        } else if c.is_ascii_digit() {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit() || c == '.' || c == '*') {
                self.bump();
            }
            Tok::Num(self.src[start..self.pos].to_string())
        } else if "=(),:*".contains(c) {
            self.bump();
            Tok::Punct(c)
        } else {
            return Err(self.err(line, col, format!("unexpected character `{c}`")));
        };
        Ok((tok, line, col))
    }
}

// ---------------------------------------------------------------- parsing

const RESERVED: &[&str] = &["id", "gen", "seq", "par", "swap", "copy", "discard", "I", "load", "not"];

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
    objects: BTreeSet<String>,
    morphisms: BTreeSet<String>,
    families: BTreeSet<String>,
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<Tok, ParseError> {
        let (t, l, c) = self.lex.next()?;
        self.line = l;
        self.col = c;
        Ok(std::mem::replace(&mut self.tok, t))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        })
    }

    fn is_ident(&self, word: &str) -> bool {
        matches!(&self.tok, Tok::Ident(s) if s == word)
    }

    fn expect_word(&mut self, word: &str) -> Result<(), ParseError> {
        if self.is_ident(word) {
            self.advance()?;
            Ok(())
        } else {
            self.err(format!("expected `{word}`, found {}", self.tok))
        }
    }

    fn expect_punct(&mut self, p: char) -> Result<(), ParseError> {
        if self.tok == Tok::Punct(p) {
            self.advance()?;
            Ok(())
        } else {
            self.err(format!("expected `{p}`, found {}", self.tok))
        }
    }

    fn ident(&mut self) -> Result<(String, usize, usize), ParseError> {
        let (l, c) = (self.line, self.col);
        match &self.tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.advance()?;
                Ok((s, l, c))
            }
            t => self.err(format!("expected a name, found {t}")),
        }
    }

    fn number<T: std::str::FromStr>(&mut self) -> Result<T, ParseError> {
        match &self.tok {
            Tok::Num(s) => match s.parse() {
                Ok(n) => {
                    self.advance()?;
                    Ok(n)
                }
                Err(_) => self.err(format!("`{s}` is not a valid count")),
            },
            t => self.err(format!("expected a number, found {t}")),
        }
    }

    fn bound(&self, set: &BTreeSet<String>, kind: &'static str, name: &str, line: usize, col: usize) -> Result<(), ParseError> {
        if set.contains(name) {
            Ok(())
        } else if kind == "generator" {
            Err(ParseError::UnboundGenerator { name: name.into(), line, col })
        } else {
            Err(ParseError::UnboundName { kind, name: name.into(), line, col })
        }
    }

    fn fresh(&self, name: &str, line: usize, col: usize) -> Result<(), ParseError> {
        if RESERVED.contains(&name) {
            return Err(ParseError::Syntax {
                line,
                col,
                msg: format!("`{name}` is reserved"),
            });
        }
        if self.objects.contains(name) || self.morphisms.contains(name) || self.families.contains(name) {
            return Err(ParseError::Rebound { name: name.into(), line, col });
        }
        Ok(())
    }

    fn obj(&mut self) -> Result<ObjExpr, ParseError> {
        if self.is_ident("I") {
            self.advance()?;
            return Ok(ObjExpr(Vec::new()));
        }
        let mut names = Vec::new();
        loop {
            let (n, l, c) = self.ident()?;
            self.bound(&self.objects, "object", &n, l, c)?;
            names.push(n);
            if self.tok != Tok::Punct('*') {
                return Ok(ObjExpr(names));
            }
            self.advance()?;
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let (head, l, c) = self.ident()?;
        let call = |p: &mut Self, f: &mut dyn FnMut(&mut Self) -> Result<Expr, ParseError>| -> Result<Expr, ParseError> {
            p.expect_punct('(')?;
            let e = f(p)?;
            p.expect_punct(')')?;
            Ok(e)
        };
        match head.as_str() {
            "gen" => call(self, &mut |p| {
                let (n, l, c) = p.ident()?;
                p.bound(&p.morphisms, "generator", &n, l, c)?;
                Ok(Expr::Gen(n))
            }),
            "id" => call(self, &mut |p| Ok(Expr::Id(p.obj()?))),
            "copy" => call(self, &mut |p| Ok(Expr::Copy(p.obj()?))),
            "discard" => call(self, &mut |p| Ok(Expr::Discard(p.obj()?))),
            "swap" => call(self, &mut |p| {
                let x = p.obj()?;
                p.expect_punct(',')?;
                Ok(Expr::Swap(x, p.obj()?))
            }),
            "seq" | "par" => call(self, &mut |p| {
                let mut acc = p.expr()?;
                p.expect_punct(',')?;
                loop {
                    let next = p.expr()?;
                    acc = if head == "seq" {
                        Expr::Seq(Box::new(acc), Box::new(next))
                    } else {
                        Expr::Par(Box::new(acc), Box::new(next))
                    };
                    if p.tok != Tok::Punct(',') {
                        return Ok(acc);
                    }
                    p.advance()?;
                }
            }),
            _ => {
                self.bound(&self.morphisms, "generator", &head, l, c)?;
                Ok(Expr::Gen(head))
            }
        }
    }

    fn exprs(&mut self, n: usize) -> Result<Vec<Expr>, ParseError> {
        let mut out = vec![self.expr()?];
        for _ in 1..n {
            self.expect_punct(',')?;
            out.push(self.expr()?);
        }
        Ok(out)
    }

    fn family_ref(&mut self) -> Result<String, ParseError> {
        let (n, l, c) = self.ident()?;
        self.bound(&self.families, "family", &n, l, c)?;
        Ok(n)
    }

    fn source(&mut self) -> Result<Source, ParseError> {
        if self.is_ident("load") {
            self.advance()?;
            return match self.advance()? {
                Tok::Str(p) => Ok(Source::Load(p)),
                t => self.err(format!("expected a file path, found {t}")),
            };
        }
        match &self.tok {
            Tok::Json(_) => match self.advance()? {
                Tok::Json(v) => Ok(Source::Inline(v)),
                _ => unreachable!(),
            },
            t => self.err(format!("expected a JSON value or `load`, found {t}")),
        }
    }

    fn directive(&mut self) -> Result<Directive, ParseError> {
        use Directive::*;
        let (word, _, _) = self.ident()?;
        Ok(match word.as_str() {
            "comonoid" => Comonoid(self.obj()?),
            "multiplicativity" => {
                let x = self.obj()?;
                self.expect_punct(',')?;
                Multiplicativity(x, self.obj()?)
            }
            "discard-natural" => DiscardNatural(self.expr()?),
            "deterministic" => Deterministic(self.expr()?),
            "continuity" => Continuity(self.expr()?),
            "equal" => {
                let [a, b] = <[Expr; 2]>::try_from(self.exprs(2)?).expect("two");
                Equal(a, b)
            }
            "as-equal" => {
                let [p, a, b] = <[Expr; 3]>::try_from(self.exprs(3)?).expect("three");
                AsEqual(p, a, b)
            }
            "ci" => {
                let e = self.expr()?;
                self.expect_punct(':')?;
                let mut objs = vec![self.obj()?];
                while self.tok == Tok::Punct(',') {
                    self.advance()?;
                    objs.push(self.obj()?);
                }
                Ci(e, objs)
            }
            "causality" => {
                let [a, b, c, d] = <[Expr; 4]>::try_from(self.exprs(4)?).expect("four");
                Causality(a, b, c, d)
            }
            "determinism-lemma" => {
                let [p, s] = <[Expr; 2]>::try_from(self.exprs(2)?).expect("two");
                DeterminismLemma(p, s)
            }
            "aseq-lemma" => {
                let [p, a, b] = <[Expr; 3]>::try_from(self.exprs(3)?).expect("three");
                AseqLemma(p, a, b)
            }
            "kolmogorov" => {
                let fam = self.family_ref()?;
                self.expect_punct(',')?;
                Kolmogorov(fam, self.expr()?)
            }
            "compatibility" | "catdet" => {
                let fam = self.family_ref()?;
                self.expect_word("depth")?;
                let d = self.number()?;
                if word == "catdet" {
                    Catdet(fam, d)
                } else {
                    Compatibility(fam, d)
                }
            }
            "infindep" => {
                let fam = self.family_ref()?;
                self.expect_word("at")?;
                let label = match self.advance()? {
                    Tok::Num(s) => s,
                    t => return self.err(format!("expected a label, found {t}")),
                };
                self.expect_word("depth")?;
                Infindep(fam, label, self.number()?)
            }
            "exchangeable" => {
                let fam = self.family_ref()?;
                self.expect_word("window")?;
                Exchangeable(fam, self.number()?)
            }
            "noncausality" => Noncausality(self.number()?),
            "witness" => Witness(self.number()?),
            other => return self.err(format!("unknown directive `{other}`")),
        })
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let (word, _, _) = self.ident()?;
        let binding = |p: &mut Self| -> Result<(String, usize, usize), ParseError> {
            let (n, l, c) = p.ident()?;
            p.fresh(&n, l, c)?;
            p.expect_punct('=')?;
            Ok((n, l, c))
        };
        Ok(match word.as_str() {
            "object" => {
                let (n, _, _) = binding(self)?;
                let s = self.source()?;
                self.objects.insert(n.clone());
                Statement::Object(n, s)
            }
            "morphism" => {
                let (n, _, _) = binding(self)?;
                let s = self.source()?;
                self.morphisms.insert(n.clone());
                Statement::Morphism(n, s)
            }
            "family" => {
                let (n, _, _) = binding(self)?;
                let s = self.source()?;
                self.families.insert(n.clone());
                Statement::Family(n, s)
            }
            "term" => {
                let (n, _, _) = binding(self)?;
                let e = self.expr()?;
                self.morphisms.insert(n.clone());
                Statement::Term(n, e)
            }
            "check" => {
                let negated = self.is_ident("not");
                if negated {
                    self.advance()?;
                }
                Statement::Check {
                    negated,
                    directive: self.directive()?,
                }
            }
            "instance" => return self.err("`instance` must be the first statement"),
            other => return self.err(format!("unknown statement `{other}`")),
        })
    }

    fn instance(&mut self) -> Result<InstanceKind, ParseError> {
        let (name, _, _) = self.ident()?;
        Ok(match name.as_str() {
            "finstoch" => InstanceKind::FinStoch,
            "setmulti" => InstanceKind::SetMulti,
            "vietoris" => InstanceKind::Vietoris,
            "cringplus" => {
                if self.is_ident("degree") {
                    self.advance()?;
                    InstanceKind::CRingPlus(self.number()?)
                } else {
                    InstanceKind::CRingPlus(kolmo_core::cringplus::CRingPlus::default().degree_bound)
                }
            }
            other => return self.err(format!("unknown instance `{other}`")),
        })
    }
}

/// Parses a script, stopping at the first error.
pub fn parse_script(src: &str) -> Result<Script, ParseError> {
    let mut p = Parser {
        lex: Lexer { src, pos: 0, line: 1, col: 1 },
        tok: Tok::Eof,
        line: 1,
        col: 1,
        objects: BTreeSet::new(),
        morphisms: BTreeSet::new(),
        families: BTreeSet::new(),
    };
    p.advance()?;
    let mut script = Script::default();
    if p.is_ident("instance") {
        p.advance()?;
        script.instance = Some(p.instance()?);
    }
    while p.tok != Tok::Eof {
        script.positions.push((p.line, p.col));
        script.statements.push(p.statement()?);
    }
    Ok(script)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_script() {
        let s = parse_script("").unwrap();
        assert!(s.is_empty());
        assert_eq!(parse_script("  # only a comment\n\n").unwrap(), Script::default());
    }

    #[test]
    fn unbound_generator_is_located() {
        let src = "object X = [\"a\", \"b\"]\nmorphism f = {\"dom\": \"X\", \"cod\": \"X\", \"function\": {\"a\": \"a\", \"b\": \"b\"}}\nterm h = seq(f, g)\n";
        match parse_script(src) {
            Err(ParseError::UnboundGenerator { name, line, col }) => {
                assert_eq!(name, "g");
                assert_eq!((line, col), (3, 17));
            }
            other => panic!("expected an unbound generator, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_script("object X = [\"a\"]\ncheck comonoid X,").unwrap_err();
        assert!(matches!(e, ParseError::Syntax { line: 2, .. }), "{e}");
        let e = parse_script("object X = [\"a\",\n  ]").unwrap_err();
        assert_eq!(e.location().0, 2, "{e}");
        let e = parse_script("check frobnicate").unwrap_err();
        assert!(e.to_string().contains("unknown directive"));
        let e = parse_script("object X = [1]\nobject X = [2]").unwrap_err();
        assert!(matches!(e, ParseError::Rebound { .. }));
        let e = parse_script("check compatibility P depth 3").unwrap_err();
        assert!(matches!(e, ParseError::UnboundName { kind: "family", .. }));
        let e = parse_script("object X = [1]\ninstance finstoch").unwrap_err();
        assert!(e.to_string().contains("first statement"));
    }

    #[test]
    fn full_grammar_round_trips() {
        let src = r#"
instance cringplus degree 6
object R = ["t"]   # univariate
object S = [["s"], ["u"]]
morphism f = {"builtin": "f"}
morphism g = load "g.json"
family P = {"kind": "iid", "q": "f"}
term fg = seq(f, g, id(R))
term both = par(gen(fg), copy(I), discard(R*R))
check comonoid R
check not multiplicativity R, S
check discard-natural fg
check deterministic swap(R, S)
check continuity f
check equal fg, seq(f, g)
check as-equal f, g, fg
check ci copy(R) : R, R
check causality f, g, f, g
check determinism-lemma f, g
check aseq-lemma f, g, fg
check kolmogorov P, f
check compatibility P depth 3
check infindep P at 1.2 depth 4
check exchangeable P window 3
check catdet P depth 2
check noncausality 12
check witness 8
"#;
        let s = parse_script(src).unwrap();
        assert_eq!(s.instance, Some(InstanceKind::CRingPlus(6)));
        assert_eq!(s.statements.len(), 25);
        assert_eq!(s.positions[0], (3, 1));
        let text = emit(&s);
        assert_eq!(parse_script(&text).unwrap(), s);
        assert_eq!(emit(&parse_script(&text).unwrap()), text);
    }
}
