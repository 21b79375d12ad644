//! Relational signatures, first-order formulas, the surface parser and the
//! printer.
//!
//! Variables are slots `v1, v2, ...` (stored zero-based). Any other variable
//! name is assigned a slot while parsing: free names take the lowest slots not
//! claimed by an explicit `vK`, in order of first occurrence; bound names get
//! fresh slots above every free slot.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use super::FoError;

/// Relation symbols with their arities. Binary symbols spelled with
/// punctuation (`<`, `<=`, `~`) are written infix; others can be declared infix.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    arities: BTreeMap<String, usize>,
    infix: BTreeSet<String>,
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_symbolic(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| "<>~+*#@$%^/\\:?".contains(c))
}

const KEYWORDS: [&str; 4] = ["exists", "forall", "true", "false"];

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: &str, arity: usize) -> Result<Self, FoError> {
        self.add(name, arity)?;
        Ok(self)
    }

    pub fn add(&mut self, name: &str, arity: usize) -> Result<(), FoError> {
        if arity == 0 {
            return Err(FoError::Signature(format!("`{name}` needs a positive arity")));
        }
        let symbolic = is_symbolic(name);
        if !(is_ident(name) || symbolic) || KEYWORDS.contains(&name) {
            return Err(FoError::Signature(format!("`{name}` is not a usable symbol name")));
        }
        if symbolic && arity != 2 {
            return Err(FoError::Signature(format!("symbolic `{name}` must be binary")));
        }
        if self.arities.insert(name.to_string(), arity).is_some() {
            return Err(FoError::Signature(format!("`{name}` declared twice")));
        }
        if symbolic {
            self.infix.insert(name.to_string());
        }
        Ok(())
    }

    pub fn declare_infix(&mut self, name: &str) -> Result<(), FoError> {
        match self.arities.get(name) {
            Some(2) => {
                self.infix.insert(name.to_string());
                Ok(())
            }
            Some(_) => Err(FoError::Signature(format!("`{name}` is not binary"))),
            None => Err(FoError::UnknownSymbol(name.to_string())),
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.arities.get(name).copied()
    }

    pub fn is_infix(&self, name: &str) -> bool {
        self.infix.contains(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, usize)> {
        self.arities.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn to_map(&self) -> BTreeMap<String, usize> {
        self.arities.clone()
    }

    pub fn from_map(map: &BTreeMap<String, usize>) -> Result<Self, FoError> {
        let mut s = Self::new();
        for (k, &v) in map {
            s.add(k, v)?;
        }
        Ok(s)
    }

    // infix symbols, longest first so `<=` wins over `<`
    fn infix_tokens(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.infix.iter().map(String::as_str).collect();
        v.sort_by_key(|s| std::cmp::Reverse(s.len()));
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Rel(String, Vec<usize>),
    Eq(usize, usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(usize, Box<Formula>),
    Forall(usize, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(v: usize, f: Formula) -> Self {
        Formula::Exists(v, Box::new(f))
    }

    pub fn forall(v: usize, f: Formula) -> Self {
        Formula::Forall(v, Box::new(f))
    }

    pub fn rel(name: &str, args: &[usize]) -> Self {
        Formula::Rel(name.to_string(), args.to_vec())
    }

    /// Free variable slots.
    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<usize>, out: &mut BTreeSet<usize>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, args) => out.extend(args.iter().filter(|v| !bound.contains(v))),
            Formula::Eq(a, b) => out.extend([a, b].into_iter().filter(|v| !bound.contains(v))),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(*v);
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Number of slots any evaluation touches: one more than the largest slot
    /// mentioned, free or bound.
    pub fn slot_count(&self) -> usize {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Rel(_, args) => args.iter().map(|v| v + 1).max().unwrap_or(0),
            Formula::Eq(a, b) => a.max(b) + 1,
            Formula::Not(f) => f.slot_count(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => a.slot_count().max(b.slot_count()),
            Formula::Exists(v, f) | Formula::Forall(v, f) => (v + 1).max(f.slot_count()),
        }
    }

    /// Smallest `n` such that the free variables are among `v1..vn`.
    pub fn min_vars(&self) -> usize {
        self.free_vars().iter().next_back().map_or(0, |v| v + 1)
    }

    pub fn check(&self, sig: &Signature) -> Result<(), FoError> {
        match self {
            Formula::Rel(name, args) => match sig.arity(name) {
                None => Err(FoError::UnknownSymbol(name.clone())),
                Some(k) if k != args.len() => Err(FoError::Arity {
                    symbol: name.clone(),
                    expected: k,
                    got: args.len(),
                }),
                Some(_) => Ok(()),
            },
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => f.check(sig),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.check(sig)?;
                b.check(sig)
            }
            _ => Ok(()),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Exists(..) | Formula::Forall(..) => 0,
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }

    /// Printer that uses the signature to decide infix spelling.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { f: self, sig }
    }
}

pub struct FormulaDisplay<'a> {
    f: &'a Formula,
    sig: &'a Signature,
}

impl FormulaDisplay<'_> {
    fn write(&self, f: &Formula, need: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let paren = f.prec() < need;
        if paren {
            write!(out, "(")?;
        }
        match f {
            Formula::True => write!(out, "true")?,
            Formula::False => write!(out, "false")?,
            Formula::Rel(name, args) if args.len() == 2 && self.sig.is_infix(name) => {
                write!(out, "v{} {} v{}", args[0] + 1, name, args[1] + 1)?
            }
            Formula::Rel(name, args) => {
                let a: Vec<String> = args.iter().map(|v| format!("v{}", v + 1)).collect();
                write!(out, "{}({})", name, a.join(","))?
            }
            Formula::Eq(a, b) => write!(out, "v{} = v{}", a + 1, b + 1)?,
            Formula::Not(g) => {
                write!(out, "!")?;
                let atomic_infix = match &**g {
                    Formula::Eq(..) => true,
                    Formula::Rel(name, args) => args.len() == 2 && self.sig.is_infix(name),
                    _ => false,
                };
                if atomic_infix {
                    write!(out, "(")?;
                    self.write(g, 0, out)?;
                    write!(out, ")")?;
                } else {
                    self.write(g, 4, out)?;
                }
            }
            Formula::And(a, b) => {
                self.write(a, 3, out)?;
                write!(out, " & ")?;
                self.write(b, 4, out)?;
            }
            Formula::Or(a, b) => {
                self.write(a, 2, out)?;
                write!(out, " | ")?;
                self.write(b, 3, out)?;
            }
            Formula::Implies(a, b) => {
                self.write(a, 2, out)?;
                write!(out, " -> ")?;
                self.write(b, 1, out)?;
            }
            Formula::Exists(v, g) => {
                write!(out, "exists v{}. ", v + 1)?;
                self.write(g, 0, out)?;
            }
            Formula::Forall(v, g) => {
                write!(out, "forall v{}. ", v + 1)?;
                self.write(g, 0, out)?;
            }
        }
        if paren {
            write!(out, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.f, 0, out)
    }
}

/// Formula with variable names still attached; used for named definitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RawFormula {
    True,
    False,
    Rel(String, Vec<String>),
    Eq(String, String),
    Not(Box<RawFormula>),
    And(Box<RawFormula>, Box<RawFormula>),
    Or(Box<RawFormula>, Box<RawFormula>),
    Implies(Box<RawFormula>, Box<RawFormula>),
    Exists(String, Box<RawFormula>),
    Forall(String, Box<RawFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Sym(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Bar,
    Arrow,
    Equals,
}

fn lex(text: &str, sig: &Signature) -> Result<Vec<(usize, Tok)>, FoError> {
    let syms = sig.infix_tokens();
    let mut out = Vec::new();
    let mut i = 0;
    let b = text.as_bytes();
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let rest = &text[i..];
        if rest.starts_with("->") {
            out.push((i, Tok::Arrow));
            i += 2;
            continue;
        }
        if let Some(s) = syms.iter().find(|s| rest.starts_with(**s)) {
            out.push((i, Tok::Sym(s.to_string())));
            i += s.len();
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '!' => Some(Tok::Bang),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '=' => Some(Tok::Equals),
            _ => None,
        };
        if let Some(t) = single {
            out.push((i, t));
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
            continue;
        }
        return Err(FoError::Syntax {
            pos: i,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    sig: &'a Signature,
    named: &'a BTreeMap<String, RawFormula>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FoError> {
        Err(FoError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), FoError> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, FoError> {
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn formula(&mut self) -> Result<RawFormula, FoError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(RawFormula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<RawFormula, FoError> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Bar) {
            f = RawFormula::Or(Box::new(f), Box::new(self.conjunction()?));
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<RawFormula, FoError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            f = RawFormula::And(Box::new(f), Box::new(self.unary()?));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<RawFormula, FoError> {
        if self.eat(&Tok::Bang) {
            return Ok(RawFormula::Not(Box::new(self.unary()?)));
        }
        if let Some(Tok::Ident(k)) = self.peek() {
            if k == "exists" || k == "forall" {
                let k = k.clone();
                self.at += 1;
                let v = self.ident("a variable after the quantifier")?;
                self.expect(&Tok::Dot, "`.` after the quantified variable")?;
                let body = Box::new(self.formula()?);
                return Ok(if k == "exists" {
                    RawFormula::Exists(v, body)
                } else {
                    RawFormula::Forall(v, body)
                });
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<RawFormula, FoError> {
        if self.eat(&Tok::LParen) {
            let f = self.formula()?;
            self.expect(&Tok::RParen, "`)`")?;
            return Ok(f);
        }
        let start = self.pos();
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.err("expected a formula"),
        };
        self.at += 1;
        match name.as_str() {
            "true" => return Ok(RawFormula::True),
            "false" => return Ok(RawFormula::False),
            _ => {}
        }
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let mut args = vec![self.ident("a variable")?];
                while self.eat(&Tok::Comma) {
                    args.push(self.ident("a variable")?);
                }
                self.expect(&Tok::RParen, "`)` closing the argument list")?;
                self.relation(&name, args)
            }
            Some(Tok::Equals) => {
                self.at += 1;
                let rhs = self.ident("a variable after `=`")?;
                Ok(RawFormula::Eq(name, rhs))
            }
            Some(Tok::Sym(s)) => {
                self.at += 1;
                let rhs = self.ident(&format!("a variable after `{s}`"))?;
                self.relation(&s, vec![name, rhs])
            }
            Some(Tok::Ident(s)) if self.sig.is_infix(&s) => {
                self.at += 1;
                let rhs = self.ident(&format!("a variable after `{s}`"))?;
                self.relation(&s, vec![name, rhs])
            }
            _ => match self.named.get(&name) {
                Some(f) => Ok(f.clone()),
                None if self.sig.arity(&name).is_some() => Err(FoError::Syntax {
                    pos: start,
                    msg: format!("relation `{name}` needs arguments"),
                }),
                None => Err(FoError::UnknownSymbol(name)),
            },
        }
    }

    fn relation(&self, name: &str, args: Vec<String>) -> Result<RawFormula, FoError> {
        match self.sig.arity(name) {
            None => Err(FoError::UnknownSymbol(name.to_string())),
            Some(k) if k != args.len() => Err(FoError::Arity {
                symbol: name.to_string(),
                expected: k,
                got: args.len(),
            }),
            Some(_) => Ok(RawFormula::Rel(name.to_string(), args)),
        }
    }
}

fn explicit_slot(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('v')?;
    if digits.is_empty() || digits.starts_with('0') || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    digits.parse::<usize>().ok().map(|k| k - 1)
}

impl RawFormula {
    fn free_names(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut add = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            RawFormula::True | RawFormula::False => {}
            RawFormula::Rel(_, args) => args.iter().for_each(|v| add(v, bound)),
            RawFormula::Eq(a, b) => {
                add(a, bound);
                add(b, bound);
            }
            RawFormula::Not(f) => f.free_names(bound, out),
            RawFormula::And(a, b) | RawFormula::Or(a, b) | RawFormula::Implies(a, b) => {
                a.free_names(bound, out);
                b.free_names(bound, out);
            }
            RawFormula::Exists(v, f) | RawFormula::Forall(v, f) => {
                bound.push(v.clone());
                f.free_names(bound, out);
                bound.pop();
            }
        }
    }

    fn bound_names(&self, out: &mut Vec<String>) {
        match self {
            RawFormula::Not(f) => f.bound_names(out),
            RawFormula::And(a, b) | RawFormula::Or(a, b) | RawFormula::Implies(a, b) => {
                a.bound_names(out);
                b.bound_names(out);
            }
            RawFormula::Exists(v, f) | RawFormula::Forall(v, f) => {
                if explicit_slot(v).is_none() && !out.contains(v) {
                    out.push(v.clone());
                }
                f.bound_names(out);
            }
            _ => {}
        }
    }

    fn all_explicit(&self, out: &mut BTreeSet<usize>) {
        let mut add = |v: &String| out.extend(explicit_slot(v));
        match self {
            RawFormula::True | RawFormula::False => {}
            RawFormula::Rel(_, args) => args.iter().for_each(add),
            RawFormula::Eq(a, b) => {
                add(a);
                add(b);
            }
            RawFormula::Not(f) => f.all_explicit(out),
            RawFormula::And(a, b) | RawFormula::Or(a, b) | RawFormula::Implies(a, b) => {
                a.all_explicit(out);
                b.all_explicit(out);
            }
            RawFormula::Exists(v, f) | RawFormula::Forall(v, f) => {
                add(v);
                f.all_explicit(out);
            }
        }
    }

    /// Assigns slots to variable names.
    pub fn resolve(&self) -> Formula {
        let mut explicit = BTreeSet::new();
        self.all_explicit(&mut explicit);
        let mut free = Vec::new();
        self.free_names(&mut Vec::new(), &mut free);
        let mut env: HashMap<String, usize> = HashMap::new();
        let mut next = 0;
        for name in free.iter().filter(|n| explicit_slot(n).is_none()) {
            while explicit.contains(&next) {
                next += 1;
            }
            env.insert(name.clone(), next);
            next += 1;
        }
        let mut bound = Vec::new();
        self.bound_names(&mut bound);
        let fresh = explicit.iter().next_back().map_or(0, |v| v + 1).max(next);
        let binder_slots: HashMap<String, usize> = bound.into_iter().zip(fresh..).collect();
        self.to_slots(&env, &binder_slots)
    }

    fn to_slots(&self, env: &HashMap<String, usize>, binders: &HashMap<String, usize>) -> Formula {
        let slot = |v: &String| explicit_slot(v).unwrap_or_else(|| env[v]);
        let rec = |f: &RawFormula| Box::new(f.to_slots(env, binders));
        match self {
            RawFormula::True => Formula::True,
            RawFormula::False => Formula::False,
            RawFormula::Rel(n, args) => Formula::Rel(n.clone(), args.iter().map(slot).collect()),
            RawFormula::Eq(a, b) => Formula::Eq(slot(a), slot(b)),
            RawFormula::Not(f) => Formula::Not(rec(f)),
            RawFormula::And(a, b) => Formula::And(rec(a), rec(b)),
            RawFormula::Or(a, b) => Formula::Or(rec(a), rec(b)),
            RawFormula::Implies(a, b) => Formula::Implies(rec(a), rec(b)),
            RawFormula::Exists(v, f) | RawFormula::Forall(v, f) => {
                let s = explicit_slot(v).unwrap_or_else(|| binders[v]);
                let mut inner = env.clone();
                inner.insert(v.clone(), s);
                let body = Box::new(f.to_slots(&inner, binders));
                if matches!(self, RawFormula::Exists(..)) {
                    Formula::Exists(s, body)
                } else {
                    Formula::Forall(s, body)
                }
            }
        }
    }
}

/// Parses with named formulas available as nullary references.
pub fn parse_raw(
    text: &str,
    sig: &Signature,
    named: &BTreeMap<String, RawFormula>,
) -> Result<RawFormula, FoError> {
    let toks = lex(text, sig)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        sig,
        named,
    };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(f)
}

pub fn parse_formula(text: &str, sig: &Signature) -> Result<Formula, FoError> {
    Ok(parse_raw(text, sig, &BTreeMap::new())?.resolve())
}

pub fn parse_formula_with(
    text: &str,
    sig: &Signature,
    named: &BTreeMap<String, RawFormula>,
) -> Result<Formula, FoError> {
    Ok(parse_raw(text, sig, named)?.resolve())
}

/// A formula file: one formula per line; `name: formula` lines define names
/// usable in later lines. Blank lines and `#` comments are skipped.
#[derive(Debug, Clone, Default)]
pub struct FormulaFile {
    pub named: BTreeMap<String, RawFormula>,
    /// Every line in order, with its name when it had one.
    pub entries: Vec<(Option<String>, String, Formula)>,
}

impl FormulaFile {
    pub fn parse(text: &str, sig: &Signature) -> Result<Self, FoError> {
        let mut out = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, body) = match line.split_once(':') {
                Some((n, b)) if is_ident(n.trim()) && !sig.is_infix(":") => (Some(n.trim().to_string()), b.trim()),
                _ => (None, line),
            };
            let raw = parse_raw(body, sig, &out.named).map_err(|e| e.at_line(lineno + 1))?;
            let f = raw.resolve();
            if let Some(n) = &name {
                out.named.insert(n.clone(), raw);
            }
            out.entries.push((name, body.to_string(), f));
        }
        Ok(out)
    }

    /// Resolves a reference: either a defined name or a formula text using
    /// the defined names.
    pub fn lookup(&self, text: &str, sig: &Signature) -> Result<Formula, FoError> {
        parse_formula_with(text, sig, &self.named)
    }
}
