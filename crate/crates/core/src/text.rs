//! The `.kbq` text format for knowledge bases and queries.
//!
//! ```text
//! dialect elhi-bot.
//! tbox exo { exists hasIngr.FishBased sub FishBased. hasSauce sub hasIngr. }
//! abox endo { hasIngr(poulardeNantua, poularde) @ 1/2. }
//! abox exo { Meat(poularde). }
//! ```
//!
//! Concept names start uppercase. Roles may use any identifier; a role inclusion whose
//! left role starts uppercase is written `role R sub S.` to keep it apart from concept
//! inclusions. Queries are `q :- atom, ....` lines (repeated lines form a union),
//! `reach(r, s, t).` or `axiom C sub D.`; query variables start with `?`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::kb::{
    ABox, Assertion, Atom, Axiom, BooleanQuery, Concept, Cq, Dialect, Individual, KbError,
    PartitionedKB, Role, Term,
};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TextError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Dialect(#[from] KbError),
    #[error("assertion `{0}` appears in both endo and exo blocks")]
    Duplicate(String),
    #[error("probability {0} is outside (0,1]")]
    Probability(String),
    #[error("answer variables are not supported: `{0}`")]
    FreeVariable(String),
}

/// A parsed `.kbq` file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KbDocument {
    pub dialect: Dialect,
    pub tbox_endo: BTreeSet<Axiom>,
    pub tbox_exo: BTreeSet<Axiom>,
    pub abox_endo: ABox,
    pub abox_exo: ABox,
    pub probabilities: BTreeMap<Assertion, Rational>,
}

impl KbDocument {
    pub fn partitioned(&self) -> PartitionedKB {
        PartitionedKB {
            dialect: self.dialect,
            abox_endo: self.abox_endo.clone(),
            abox_exo: self.abox_exo.clone(),
            tbox_endo: self.tbox_endo.clone(),
            tbox_exo: self.tbox_exo.clone(),
        }
    }

    pub fn from_partitioned(pk: &PartitionedKB) -> Self {
        Self {
            dialect: pk.dialect,
            tbox_endo: pk.tbox_endo.clone(),
            tbox_exo: pk.tbox_exo.clone(),
            abox_endo: pk.abox_endo.clone(),
            abox_exo: pk.abox_exo.clone(),
            probabilities: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Punct(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '~' || c == '-'
}

fn lex(src: &str) -> Result<Vec<Token>, TextError> {
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
        } else if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if is_ident_char(c) || c == '?' {
            let var = c == '?';
            if var {
                bump(&mut chars);
            }
            let mut s = String::new();
            while chars.peek().is_some_and(|&c| is_ident_char(c)) {
                s.push(bump(&mut chars));
            }
            if s.is_empty() {
                return Err(TextError::Syntax {
                    line: tl,
                    col: tc,
                    msg: "expected variable name after `?`".into(),
                });
            }
            out.push(Token {
                tok: if var { Tok::Var(s) } else { Tok::Ident(s) },
                line: tl,
                col: tc,
            });
        } else {
            bump(&mut chars);
            let p = match c {
                '.' => ".",
                '(' => "(",
                ')' => ")",
                ',' => ",",
                '{' => "{",
                '}' => "}",
                '@' => "@",
                '/' => "/",
                ':' if chars.peek() == Some(&'-') => {
                    bump(&mut chars);
                    ":-"
                }
                _ => {
                    return Err(TextError::Syntax {
                        line: tl,
                        col: tc,
                        msg: format!("unexpected character `{c}`"),
                    })
                }
            };
            out.push(Token {
                tok: Tok::Punct(p),
                line: tl,
                col: tc,
            });
        }
    }
    Ok(out)
}

const KEYWORDS: &[&str] = &["top", "bot", "exists", "not", "and", "sub", "inv", "role"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, TextError> {
        Ok(Self {
            toks: lex(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TextError> {
        let (line, col) = match self.toks.get(self.pos) {
            Some(t) => (t.line, t.col),
            None => self.toks.last().map_or((1, 1), |t| (t.line, t.col + 1)),
        };
        Err(TextError::Syntax {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn at_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn at_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(i)) if i == s)
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), TextError> {
        if self.at_punct(p) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{p}`"))
        }
    }

    fn expect_keyword(&mut self, k: &str) -> Result<(), TextError> {
        if self.at_ident(k) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{k}`"))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, TextError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                if s.starts_with(['_', '~', '-']) || s.contains('-') {
                    return self.err(format!("invalid {what} `{s}`"));
                }
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn concept_name(&mut self) -> Result<String, TextError> {
        let s = self.ident("concept name")?;
        if !s.starts_with(|c: char| c.is_ascii_uppercase()) {
            self.pos -= 1;
            return self.err(format!("concept name `{s}` must start uppercase"));
        }
        Ok(s)
    }

    fn role(&mut self) -> Result<Role, TextError> {
        if self.at_ident("inv") && matches!(self.peek_at(1), Some(Tok::Punct("("))) {
            self.pos += 2;
            let r = self.role()?;
            self.expect_punct(")")?;
            return Ok(r.inv());
        }
        let name = self.ident("role name")?;
        if KEYWORDS.contains(&name.as_str()) {
            self.pos -= 1;
            return self.err(format!("keyword `{name}` used as role name"));
        }
        Ok(Role::new(name.as_str()))
    }

    fn concept(&mut self) -> Result<Concept, TextError> {
        let mut c = self.operand()?;
        while self.at_ident("and") {
            self.pos += 1;
            let rhs = self.operand()?;
            c = Concept::and(c, rhs);
        }
        Ok(c)
    }

    fn operand(&mut self) -> Result<Concept, TextError> {
        match self.peek() {
            Some(Tok::Punct("(")) => {
                self.pos += 1;
                let c = self.concept()?;
                self.expect_punct(")")?;
                Ok(c)
            }
            Some(Tok::Ident(s)) => match s.as_str() {
                "top" => {
                    self.pos += 1;
                    Ok(Concept::Top)
                }
                "bot" => {
                    self.pos += 1;
                    Ok(Concept::Bot)
                }
                "exists" => {
                    self.pos += 1;
                    let r = self.role()?;
                    self.expect_punct(".")?;
                    let c = self.operand()?;
                    Ok(Concept::Exists(r, Box::new(c)))
                }
                "not" => {
                    self.pos += 1;
                    Ok(Concept::not(self.operand()?))
                }
                _ => Ok(Concept::name(&self.concept_name()?)),
            },
            _ => self.err("expected concept"),
        }
    }

    fn starts_role_incl(&self) -> bool {
        match (self.peek(), self.peek_at(1)) {
            (Some(Tok::Ident(s)), _) if s == "role" => true,
            (Some(Tok::Ident(s)), Some(Tok::Punct("("))) if s == "inv" => true,
            (Some(Tok::Ident(s)), _) => {
                !KEYWORDS.contains(&s.as_str()) && !s.starts_with(|c: char| c.is_ascii_uppercase())
            }
            _ => false,
        }
    }

    /// Axiom body without the trailing `.`.
    fn axiom(&mut self) -> Result<Axiom, TextError> {
        if self.starts_role_incl() {
            if self.at_ident("role") {
                self.pos += 1;
            }
            let lhs = self.role()?;
            self.expect_keyword("sub")?;
            let negated = self.at_ident("not");
            if negated {
                self.pos += 1;
            }
            let rhs = self.role()?;
            return Ok(Axiom::RoleIncl { lhs, rhs, negated });
        }
        let lhs = self.concept()?;
        self.expect_keyword("sub")?;
        let rhs = self.concept()?;
        Ok(Axiom::ConceptIncl { lhs, rhs })
    }

    fn integer(&mut self) -> Result<BigInt, TextError> {
        match self.peek() {
            Some(Tok::Ident(s)) => match s.parse::<BigInt>() {
                Ok(n) => {
                    self.pos += 1;
                    Ok(n)
                }
                Err(_) => self.err("expected integer"),
            },
            _ => self.err("expected integer"),
        }
    }

    /// Assertion statement, with optional probability, without the trailing `.`.
    fn assertion(&mut self) -> Result<(Assertion, Option<Rational>), TextError> {
        let pred = if self.at_ident("inv") && matches!(self.peek_at(1), Some(Tok::Punct("("))) {
            // `inv(r)(a,b)`
            self.pos += 2;
            let r = self.role()?;
            self.expect_punct(")")?;
            Err(r.inv())
        } else {
            Ok(self.ident("predicate")?)
        };
        self.expect_punct("(")?;
        let first = self.ident("individual")?;
        let second = if self.at_punct(",") {
            self.pos += 1;
            Some(self.ident("individual")?)
        } else {
            None
        };
        self.expect_punct(")")?;
        let a = match (pred, second) {
            (Ok(p), None) => {
                if !p.starts_with(|c: char| c.is_ascii_uppercase()) {
                    return self.err(format!("concept name `{p}` must start uppercase"));
                }
                Assertion::concept(&p, &first)
            }
            (Ok(p), Some(second)) => Assertion::role(&p, &first, &second),
            (Err(r), Some(second)) => Assertion::Role {
                role: r,
                subject: first.as_str().into(),
                object: second.as_str().into(),
            },
            (Err(_), None) => return self.err("inverse role needs two arguments"),
        };
        let prob = if self.at_punct("@") {
            self.pos += 1;
            let num = self.integer()?;
            let den = if self.at_punct("/") {
                self.pos += 1;
                self.integer()?
            } else {
                BigInt::one()
            };
            if den.is_zero() {
                return self.err("zero denominator");
            }
            let p = Rational::new(num, den);
            if p <= Rational::zero() || p > Rational::one() {
                return Err(TextError::Probability(p.to_string()));
            }
            Some(p)
        } else {
            None
        };
        Ok((crate::kb::normalize_assertion(a), prob))
    }

    fn term(&mut self) -> Result<Term, TextError> {
        match self.peek() {
            Some(Tok::Var(v)) => {
                let v = v.clone();
                self.pos += 1;
                Ok(Term::Var(v))
            }
            _ => Ok(Term::Const(Individual::new(self.ident("term")?))),
        }
    }

    fn query_atom(&mut self) -> Result<Atom, TextError> {
        let pred = if self.at_ident("inv") && matches!(self.peek_at(1), Some(Tok::Punct("("))) {
            self.pos += 2;
            let r = self.role()?;
            self.expect_punct(")")?;
            Err(r.inv())
        } else {
            Ok(self.ident("predicate")?)
        };
        self.expect_punct("(")?;
        let t1 = self.term()?;
        let t2 = if self.at_punct(",") {
            self.pos += 1;
            Some(self.term()?)
        } else {
            None
        };
        self.expect_punct(")")?;
        match (pred, t2) {
            (Ok(p), None) => {
                if !p.starts_with(|c: char| c.is_ascii_uppercase()) {
                    return self.err(format!("concept name `{p}` must start uppercase"));
                }
                Ok(Atom::concept(&p, t1))
            }
            (Ok(p), Some(t2)) => Ok(Atom::role(Role::new(p.as_str()), t1, t2)),
            (Err(r), Some(t2)) => Ok(Atom::role(r, t1, t2)),
            (Err(_), None) => self.err("inverse role needs two arguments"),
        }
    }
}

pub fn parse_kb(src: &str) -> Result<KbDocument, TextError> {
    let mut p = Parser::new(src)?;
    let mut doc = KbDocument::default();
    if p.at_ident("dialect") {
        p.pos += 1;
        doc.dialect = match p.peek() {
            Some(Tok::Ident(s)) if s == "elhi-bot" => Dialect::ElhiBot,
            Some(Tok::Ident(s)) if s == "dl-lite" => Dialect::DlLite,
            _ => return p.err("expected `elhi-bot` or `dl-lite`"),
        };
        p.pos += 1;
        p.expect_punct(".")?;
    }
    while p.peek().is_some() {
        let is_tbox = if p.at_ident("tbox") {
            true
        } else if p.at_ident("abox") {
            false
        } else {
            return p.err("expected `tbox` or `abox` block");
        };
        p.pos += 1;
        let endo = if p.at_ident("endo") {
            true
        } else if p.at_ident("exo") {
            false
        } else {
            return p.err("expected `endo` or `exo`");
        };
        p.pos += 1;
        p.expect_punct("{")?;
        while !p.at_punct("}") {
            if p.peek().is_none() {
                return p.err("unterminated block");
            }
            if is_tbox {
                let ax = p.axiom()?;
                p.expect_punct(".")?;
                ax.check(doc.dialect)?;
                if endo { &mut doc.tbox_endo } else { &mut doc.tbox_exo }.insert(ax);
            } else {
                let (a, prob) = p.assertion()?;
                p.expect_punct(".")?;
                if let Some(prob) = prob {
                    doc.probabilities.insert(a.clone(), prob);
                }
                if endo { &mut doc.abox_endo } else { &mut doc.abox_exo }.insert(a);
            }
        }
        p.pos += 1;
    }
    if let Some(a) = doc.abox_endo.iter().find(|a| doc.abox_exo.contains(a)) {
        return Err(TextError::Duplicate(a.to_string()));
    }
    if let Some(ax) = doc.tbox_endo.intersection(&doc.tbox_exo).next() {
        return Err(TextError::Dialect(KbError::AxiomOverlap(ax.to_string())));
    }
    Ok(doc)
}

pub fn parse_query(src: &str) -> Result<BooleanQuery, TextError> {
    let mut p = Parser::new(src)?;
    if p.at_ident("reach") && matches!(p.peek_at(1), Some(Tok::Punct("("))) {
        p.pos += 2;
        let role = p.ident("role name")?;
        p.expect_punct(",")?;
        let source = p.ident("individual")?;
        p.expect_punct(",")?;
        let target = p.ident("individual")?;
        p.expect_punct(")")?;
        p.expect_punct(".")?;
        if p.peek().is_some() {
            return p.err("trailing input after reach query");
        }
        return Ok(BooleanQuery::Reach {
            role: role.into(),
            source: source.into(),
            target: target.into(),
        });
    }
    if p.at_ident("axiom") {
        p.pos += 1;
        let ax = p.axiom()?;
        p.expect_punct(".")?;
        if p.peek().is_some() {
            return p.err("trailing input after axiom goal");
        }
        return Ok(BooleanQuery::AxiomGoal(ax));
    }
    let mut disjuncts = Vec::new();
    while p.peek().is_some() {
        p.expect_keyword("q")?;
        if p.at_punct("(") {
            let start = p.pos;
            while p.peek().is_some() && !p.at_punct(":-") {
                p.pos += 1;
            }
            let head: Vec<String> = p.toks[start..p.pos]
                .iter()
                .map(|t| match &t.tok {
                    Tok::Ident(s) => s.clone(),
                    Tok::Var(v) => format!("?{v}"),
                    Tok::Punct(q) => q.to_string(),
                })
                .collect();
            return Err(TextError::FreeVariable(format!("q{}", head.join(""))));
        }
        p.expect_punct(":-")?;
        let mut atoms = vec![p.query_atom()?];
        while p.at_punct(",") {
            p.pos += 1;
            atoms.push(p.query_atom()?);
        }
        p.expect_punct(".")?;
        disjuncts.push(Cq::new(atoms));
    }
    if disjuncts.is_empty() {
        return p.err("expected `q :-`, `reach(...)` or `axiom`");
    }
    Ok(BooleanQuery::Ucq(disjuncts))
}

/// Canonical text for a document: sorted statements, all four blocks present.
pub fn serialize(doc: &KbDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "dialect {}.", doc.dialect);
    for (name, axioms) in [("endo", &doc.tbox_endo), ("exo", &doc.tbox_exo)] {
        let _ = writeln!(s, "tbox {name} {{");
        for ax in axioms {
            let _ = writeln!(s, "  {ax}.");
        }
        s.push_str("}\n");
    }
    for (name, abox) in [("endo", &doc.abox_endo), ("exo", &doc.abox_exo)] {
        let _ = writeln!(s, "abox {name} {{");
        for a in abox {
            match doc.probabilities.get(a) {
                Some(p) => {
                    let _ = writeln!(s, "  {a} @ {p}.");
                }
                None => {
                    let _ = writeln!(s, "  {a}.");
                }
            }
        }
        s.push_str("}\n");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exo_axiom() {
        let doc = parse_kb("dialect elhi-bot. tbox exo { exists HasIngr.FishBased sub FishBased. }").unwrap();
        assert_eq!(doc.tbox_exo.len(), 1);
        let ax = doc.tbox_exo.iter().next().unwrap();
        assert_eq!(
            *ax,
            Axiom::sub(Concept::exists("HasIngr", Concept::name("FishBased")), Concept::name("FishBased"))
        );
    }

    #[test]
    fn parses_endo_abox() {
        let doc = parse_kb("abox endo { r(a,b). }").unwrap();
        assert!(doc.abox_endo.contains(&Assertion::role("r", "a", "b")));
        assert_eq!(doc.dialect, Dialect::ElhiBot);
    }

    #[test]
    fn rejects_bad_probability() {
        assert!(matches!(
            parse_kb("abox exo { A(c) @ 3/2. }"),
            Err(TextError::Probability(_))
        ));
        assert!(parse_kb("abox exo { A(c) @ 0/2. }").is_err());
    }

    #[test]
    fn reports_positions() {
        match parse_kb("abox endo {\n  r(a,b)\n}") {
            Err(TextError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dialect_violations() {
        assert!(matches!(
            parse_kb("tbox exo { A sub not B. }"),
            Err(TextError::Dialect(_))
        ));
        assert!(parse_kb("dialect dl-lite. tbox exo { A sub not B. r sub not s. }").is_ok());
        assert!(parse_kb("dialect dl-lite. tbox exo { exists r.A sub B. }").is_err());
    }

    #[test]
    fn duplicate_across_blocks() {
        assert!(matches!(
            parse_kb("abox endo { A(a). } abox exo { A(a). }"),
            Err(TextError::Duplicate(_))
        ));
    }

    #[test]
    fn queries() {
        let q = parse_query("q :- LandSea(poulardeNantua).").unwrap();
        assert_eq!(q, BooleanQuery::cq([Atom::concept("LandSea", Term::constant("poulardeNantua"))]));
        assert_eq!(
            parse_query("reach(edge, s, t).").unwrap(),
            BooleanQuery::Reach {
                role: "edge".into(),
                source: "s".into(),
                target: "t".into()
            }
        );
        match parse_query("q :- R1(?x,?y). q :- R2(?y,?z).").unwrap() {
            BooleanQuery::Ucq(ds) => assert_eq!(ds.len(), 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_query("q(?x) :- A(?x)."),
            Err(TextError::FreeVariable(_))
        ));
        assert!(matches!(
            parse_query("axiom A sub B.").unwrap(),
            BooleanQuery::AxiomGoal(_)
        ));
        assert!(parse_query("hello.").is_err());
    }

    #[test]
    fn serialize_shapes() {
        let empty = serialize(&KbDocument::default());
        assert!(empty.starts_with("dialect elhi-bot."));
        assert!(empty.contains("abox exo {"));
        let doc = parse_kb("abox endo { r(a,b) @ 1/2. }").unwrap();
        assert!(serialize(&doc).contains("@ 1/2"));
    }

    #[test]
    fn round_trip_handles_roles_and_nesting() {
        let src = "tbox exo { role HasSauce sub HasIngr. inv(r) sub s. A sub exists inv(r).(B and C). \
                   A and (B and C) sub exists r.top. } abox endo { inv(r)(a,b) @ 1. }";
        let doc = parse_kb(src).unwrap();
        assert!(doc.abox_endo.contains(&Assertion::role("r", "b", "a")));
        assert_eq!(parse_kb(&serialize(&doc)).unwrap(), doc);
    }
}
