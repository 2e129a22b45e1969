//! TeX-style surface syntax: lexer, Pratt parser, printer and the JSON AST
//! form of formulas.

use std::fmt;

use serde_json::{json, Value};

use crate::calculus::{Inequality, QuasiInequality};
use crate::error::{ParseError, PrintError};
use crate::formula::{Atom, AtomKind, BinOp, Const, Formula, UnOp};

/// Surface syntax. `Bi` reads `*`, `-*` and `\to` as fusion, relevant
/// implication and Heyting implication; `Ra` additionally accepts classical
/// negation and converse.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Syntax {
    #[default]
    Relevance,
    Bi,
    Ra,
}

impl Syntax {
    pub fn name(self) -> &'static str {
        match self {
            Syntax::Relevance => "relevance",
            Syntax::Bi => "bi",
            Syntax::Ra => "ra",
        }
    }
}

impl std::str::FromStr for Syntax {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "relevance" => Ok(Syntax::Relevance),
            "bi" => Ok(Syntax::Bi),
            "ra" => Ok(Syntax::Ra),
            other => Err(format!("unknown syntax {other:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LParen,
    RParen,
    Arrow,
    DoubleArrow,
    Wand,
    Tail,
    CoImp,
    And,
    Or,
    Circ,
    Tilde,
    TildeFlat,
    TildeSharp,
    Not,
    Converse,
    Const(Const),
    Nominal(u32),
    CoNominal(u32),
    Ident(String),
    Le,
    Vdash,
    Comma,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::LParen => "'('",
            Tok::RParen => "')'",
            Tok::Arrow => "implication",
            Tok::DoubleArrow => "'\\Rightarrow'",
            Tok::Wand => "'-*'",
            Tok::Tail => "'\\leftarrowtail'",
            Tok::CoImp => "co-implication",
            Tok::And => "conjunction",
            Tok::Or => "disjunction",
            Tok::Circ => "fusion",
            Tok::Tilde | Tok::TildeFlat | Tok::TildeSharp => "negation",
            Tok::Not => "'\\neg'",
            Tok::Converse => "converse",
            Tok::Const(_) => "constant",
            Tok::Nominal(_) => "nominal",
            Tok::CoNominal(_) => "co-nominal",
            Tok::Ident(name) => return write!(f, "variable {name:?}"),
            Tok::Le => "'\\le'",
            Tok::Vdash => "'\\vdash'",
            Tok::Comma => "','",
        };
        f.write_str(s)
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    /// Letters of a `\command` name.
    fn command_name(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.bump();
        }
        self.src[start..self.pos].to_string()
    }

    /// `_k`, `_{k}` or nothing.
    fn subscript(&mut self) -> Option<String> {
        let save = self.pos;
        if !self.eat("_") {
            return None;
        }
        let braced = self.eat("{");
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        let digits = self.src[start..self.pos].to_string();
        if digits.is_empty() || (braced && !self.eat("}")) {
            self.pos = save;
            return None;
        }
        Some(digits)
    }

    /// `^\flat`, `^{\flat}`, `^♭` after a negation sign.
    fn negation_modifier(&mut self) -> Tok {
        let save = self.pos;
        if self.eat("♭") {
            return Tok::TildeFlat;
        }
        if self.eat("♯") {
            return Tok::TildeSharp;
        }
        if self.eat("^") {
            let braced = self.eat("{");
            let tok = if self.eat("\\flat") || self.eat("♭") {
                Some(Tok::TildeFlat)
            } else if self.eat("\\sharp") || self.eat("♯") {
                Some(Tok::TildeSharp)
            } else {
                None
            };
            if let Some(tok) = tok {
                if !braced || self.eat("}") {
                    return tok;
                }
            }
        }
        self.pos = save;
        Tok::Tilde
    }

    fn mathbf(&mut self, pos: usize) -> Result<Tok, ParseError> {
        self.skip_ws();
        let braced = self.eat("{");
        self.skip_ws();
        let letter = self.bump().ok_or(ParseError::UnexpectedEnd { expected: "\\mathbf argument" })?;
        self.skip_ws();
        if braced && !self.eat("}") {
            return Err(ParseError::UnexpectedToken { found: "\\mathbf argument".into(), pos });
        }
        let sub = self.subscript().map(|d| d.parse::<u32>().unwrap_or(u32::MAX));
        match (letter, sub) {
            ('t' | 'I', None) => Ok(Tok::Const(Const::Truth)),
            ('i', None) => Ok(Tok::Nominal(0)),
            ('i' | 'j', Some(k)) => Ok(Tok::Nominal(k)),
            ('j', None) => Err(ParseError::MissingIndex { what: "nominal \\mathbf j", pos }),
            ('m', None) => Ok(Tok::CoNominal(0)),
            ('m' | 'n', Some(k)) => Ok(Tok::CoNominal(k)),
            ('n', None) => Err(ParseError::MissingIndex { what: "co-nominal \\mathbf n", pos }),
            (c, _) => Err(ParseError::UnexpectedToken { found: format!("\\mathbf {c}"), pos }),
        }
    }

    fn command(&mut self, pos: usize) -> Result<Option<Tok>, ParseError> {
        let name = self.command_name();
        let tok = match name.as_str() {
            "" => {
                // `\,` `\;` `\!` `\ ` spacing
                match self.bump() {
                    Some(',' | ';' | '!' | ' ' | ':') => return Ok(None),
                    Some(c) => return Err(ParseError::UnexpectedChar { ch: c, pos }),
                    None => return Err(ParseError::UnexpectedEnd { expected: "command name" }),
                }
            }
            "quad" | "qquad" | "left" | "right" | "big" | "Big" | "bigl" | "bigr" | "Bigl" | "Bigr" | "mathrel"
            | "mathbin" => return Ok(None),
            "to" | "rightarrow" | "relimp" => Tok::Arrow,
            "Rightarrow" | "Impl" => Tok::DoubleArrow,
            "multimap" | "wand" => Tok::Wand,
            "leftarrowtail" | "furesfc" => Tok::Tail,
            "coimp" | "prec" => Tok::CoImp,
            "land" | "wedge" => Tok::And,
            "lor" | "vee" => Tok::Or,
            "circ" | "ast" => Tok::Circ,
            "sim" => self.negation_modifier(),
            "neg" | "lnot" => Tok::Not,
            "smallsmile" | "smile" => Tok::Converse,
            "top" => Tok::Const(Const::Top),
            "bot" => Tok::Const(Const::Bottom),
            "mathbf" | "textbf" => self.mathbf(pos)?,
            "le" | "leq" => Tok::Le,
            "vdash" => Tok::Vdash,
            _ => return Err(ParseError::UnknownCommand { name, pos }),
        };
        Ok(Some(tok))
    }

    fn ident(&mut self, first: char) -> Tok {
        let mut name = String::new();
        name.push(first);
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            name.push(self.bump().unwrap());
        }
        if let Some(d) = self.subscript() {
            name.push('_');
            name.push_str(&d);
        }
        while self.eat("'") {
            name.push('\'');
        }
        Tok::Ident(name)
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let pos = self.pos;
            let Some(c) = self.bump() else { break };
            let tok = match c {
                '{' | '}' => continue,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '\\' => match self.command(pos)? {
                    Some(t) => t,
                    None => continue,
                },
                '^' => {
                    let braced = self.eat("{");
                    let ok = self.eat("\\smallsmile") || self.eat("\\smile") || self.eat("⌣");
                    if !ok || (braced && !self.eat("}")) {
                        return Err(ParseError::UnexpectedChar { ch: '^', pos });
                    }
                    Tok::Converse
                }
                '-' | '−' => {
                    if self.eat("<") {
                        Tok::CoImp
                    } else if self.eat("*") {
                        Tok::Wand
                    } else if self.eat(">") {
                        Tok::Arrow
                    } else {
                        return Err(ParseError::UnexpectedChar { ch: c, pos });
                    }
                }
                '<' => {
                    if self.eat("=") {
                        Tok::Le
                    } else {
                        return Err(ParseError::UnexpectedChar { ch: c, pos });
                    }
                }
                '|' => {
                    if self.eat("-") {
                        Tok::Vdash
                    } else {
                        return Err(ParseError::UnexpectedChar { ch: c, pos });
                    }
                }
                '→' => Tok::Arrow,
                '⇒' => Tok::DoubleArrow,
                '⊸' => Tok::Wand,
                '↢' => Tok::Tail,
                '∧' | '&' => Tok::And,
                '∨' => Tok::Or,
                '∘' | '*' | '∗' => Tok::Circ,
                '∼' | '~' => self.negation_modifier(),
                '¬' => Tok::Not,
                '⌣' => Tok::Converse,
                '⊤' => Tok::Const(Const::Top),
                '⊥' => Tok::Const(Const::Bottom),
                '≤' => Tok::Le,
                '⊢' => Tok::Vdash,
                c if c.is_ascii_alphabetic() => self.ident(c),
                c => return Err(ParseError::UnexpectedChar { ch: c, pos }),
            };
            out.push((tok, pos));
        }
        Ok(out)
    }
}

/// Parser state. Variable indices are assigned by order of first
/// occurrence and shared across every call on the same parser.
pub struct Parser {
    syntax: Syntax,
    vars: Vec<String>,
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    pub fn new(syntax: Syntax) -> Self {
        Parser { syntax, vars: Vec::new(), toks: Vec::new(), at: 0, end: 0 }
    }

    pub fn formula(&mut self, text: &str) -> Result<Formula, ParseError> {
        self.load(text)?;
        let f = self.parse_impl()?;
        self.finish()?;
        Ok(f)
    }

    pub fn inequality(&mut self, text: &str) -> Result<Inequality, ParseError> {
        self.load(text)?;
        let ineq = self.parse_inequality()?;
        self.finish()?;
        Ok(ineq)
    }

    /// `A_1 \le B_1, ..., A_n \le B_n \vdash A \le B`; the premise list may
    /// be empty.
    pub fn quasi(&mut self, text: &str) -> Result<QuasiInequality, ParseError> {
        self.load(text)?;
        let mut premises = Vec::new();
        if !matches!(self.peek(), Some(Tok::Vdash)) {
            loop {
                premises.push(self.parse_inequality()?);
                if matches!(self.peek(), Some(Tok::Comma)) {
                    self.at += 1;
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::Vdash, "'\\vdash'")?;
        let conclusion = self.parse_inequality()?;
        self.finish()?;
        Ok(QuasiInequality::new(premises, conclusion))
    }

    fn load(&mut self, text: &str) -> Result<(), ParseError> {
        self.toks = Lexer { src: text, pos: 0 }.tokens()?;
        self.at = 0;
        self.end = text.len();
        Ok(())
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.toks.get(self.at) {
            None => Ok(()),
            Some((Tok::RParen, pos)) => Err(ParseError::UnbalancedParens { pos: *pos }),
            Some((t, pos)) => Err(ParseError::UnexpectedToken { found: t.to_string(), pos: *pos }),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        match self.toks.get(self.at) {
            Some((t, _)) if *t == tok => {
                self.at += 1;
                Ok(())
            }
            Some((t, pos)) => Err(ParseError::UnexpectedToken { found: t.to_string(), pos: *pos }),
            None => Err(ParseError::UnexpectedEnd { expected }),
        }
    }

    fn parse_inequality(&mut self) -> Result<Inequality, ParseError> {
        let lhs = self.parse_impl()?;
        self.expect(Tok::Le, "'\\le'")?;
        let rhs = self.parse_impl()?;
        Ok(Inequality::new(lhs, rhs))
    }

    fn not_in_syntax(&self, what: &str) -> ParseError {
        ParseError::NotInSyntax { what: what.to_string(), syntax: self.syntax.name() }
    }

    fn implication(&self, tok: &Tok) -> Result<Option<BinOp>, ParseError> {
        Ok(Some(match (tok, self.syntax) {
            (Tok::Arrow, Syntax::Bi) => BinOp::IntImp,
            (Tok::Arrow, _) => BinOp::RelImp,
            (Tok::Wand, Syntax::Bi) => BinOp::RelImp,
            (Tok::Wand, _) => return Err(self.not_in_syntax("'-*'")),
            (Tok::DoubleArrow, _) => BinOp::IntImp,
            (Tok::Tail, _) => BinOp::RightRes,
            (Tok::CoImp, _) => BinOp::CoImp,
            _ => return Ok(None),
        }))
    }

    /// Implications are right-associative; a chain must use one connective.
    fn parse_impl(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.parse_binary(1)?;
        let Some(tok) = self.peek().cloned() else { return Ok(lhs) };
        let Some(op) = self.implication(&tok)? else { return Ok(lhs) };
        self.at += 1;
        let rhs = self.parse_impl_chain(op)?;
        Ok(Formula::binary(op, lhs, rhs))
    }

    fn parse_impl_chain(&mut self, op: BinOp) -> Result<Formula, ParseError> {
        let lhs = self.parse_binary(1)?;
        let Some(tok) = self.peek().cloned() else { return Ok(lhs) };
        let Some(next) = self.implication(&tok)? else { return Ok(lhs) };
        if next != op {
            return Err(ParseError::MixedImplications { pos: self.pos() });
        }
        self.at += 1;
        let rhs = self.parse_impl_chain(op)?;
        Ok(Formula::binary(op, lhs, rhs))
    }

    fn infix(tok: &Tok) -> Option<(BinOp, u8)> {
        match tok {
            Tok::Or => Some((BinOp::Or, 1)),
            Tok::And => Some((BinOp::And, 2)),
            Tok::Circ => Some((BinOp::Fusion, 3)),
            _ => None,
        }
    }

    /// Left-associative levels: disjunction, conjunction, fusion.
    fn parse_binary(&mut self, min_bp: u8) -> Result<Formula, ParseError> {
        let mut lhs = self.parse_unary()?;
        while let Some((op, bp)) = self.peek().and_then(Self::infix) {
            if bp < min_bp {
                break;
            }
            self.at += 1;
            let rhs = self.parse_binary(bp + 1)?;
            lhs = Formula::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Formula, ParseError> {
        let op = match self.peek() {
            Some(Tok::Tilde) => Some(UnOp::Neg),
            Some(Tok::TildeFlat) => Some(UnOp::NegFlat),
            Some(Tok::TildeSharp) => Some(UnOp::NegSharp),
            Some(Tok::Not) => {
                if self.syntax != Syntax::Ra {
                    return Err(self.not_in_syntax("classical negation"));
                }
                self.at += 1;
                let inner = self.parse_unary()?;
                return Ok(Formula::int_imp(inner, Formula::bottom()));
            }
            _ => None,
        };
        if let Some(op) = op {
            if self.syntax == Syntax::Bi {
                return Err(self.not_in_syntax("negation"));
            }
            self.at += 1;
            let inner = self.parse_unary()?;
            return Ok(Formula::unary(op, inner));
        }
        let mut f = self.parse_primary()?;
        while matches!(self.peek(), Some(Tok::Converse)) {
            if self.syntax != Syntax::Ra {
                return Err(self.not_in_syntax("converse"));
            }
            self.at += 1;
            f = Formula::neg(Formula::int_imp(f, Formula::bottom()));
        }
        Ok(f)
    }

    fn parse_primary(&mut self) -> Result<Formula, ParseError> {
        let Some((tok, pos)) = self.toks.get(self.at).cloned() else {
            return Err(ParseError::UnexpectedEnd { expected: "formula" });
        };
        self.at += 1;
        match tok {
            Tok::LParen => {
                let f = self.parse_impl()?;
                match self.toks.get(self.at) {
                    Some((Tok::RParen, _)) => {
                        self.at += 1;
                        Ok(f)
                    }
                    Some((t, p)) => Err(ParseError::UnexpectedToken { found: t.to_string(), pos: *p }),
                    None => Err(ParseError::UnbalancedParens { pos }),
                }
            }
            Tok::RParen => Err(ParseError::UnbalancedParens { pos }),
            Tok::Const(c) => Ok(Formula::Const(c)),
            Tok::Nominal(k) => Ok(Formula::nominal(k)),
            Tok::CoNominal(k) => Ok(Formula::conominal(k)),
            Tok::Ident(name) => Ok(Formula::Atom(self.var(&name))),
            t => Err(ParseError::UnexpectedToken { found: t.to_string(), pos }),
        }
    }

    fn var(&mut self, name: &str) -> Atom {
        let index = match self.vars.iter().position(|v| v == name) {
            Some(k) => k,
            None => {
                self.vars.push(name.to_string());
                self.vars.len() - 1
            }
        };
        Atom::named(AtomKind::PropVar, index as u32, name)
    }
}

pub fn parse_formula(text: &str, syntax: Syntax) -> Result<Formula, ParseError> {
    Parser::new(syntax).formula(text)
}

pub fn parse_inequality(text: &str, syntax: Syntax) -> Result<Inequality, ParseError> {
    Parser::new(syntax).inequality(text)
}

pub fn parse_quasi(text: &str, syntax: Syntax) -> Result<QuasiInequality, ParseError> {
    Parser::new(syntax).quasi(text)
}

fn subscript(k: u32) -> String {
    if k < 10 {
        format!("_{k}")
    } else {
        format!("_{{{k}}}")
    }
}

pub fn atom_text(a: &Atom) -> String {
    match a.kind {
        AtomKind::PropVar => match a.name() {
            Some(name) => match name.split_once('_') {
                Some((base, digits)) if digits.len() > 1 && digits.chars().all(|c| c.is_ascii_digit()) => {
                    format!("{base}_{{{digits}}}")
                }
                _ => name.to_string(),
            },
            None => format!("p{}", subscript(a.index)),
        },
        AtomKind::Nominal if a.index == 0 => "\\mathbf i".to_string(),
        AtomKind::Nominal => format!("\\mathbf j{}", subscript(a.index)),
        AtomKind::CoNominal if a.index == 0 => "\\mathbf m".to_string(),
        AtomKind::CoNominal => format!("\\mathbf n{}", subscript(a.index)),
    }
}

fn const_text(c: Const, syntax: Syntax) -> &'static str {
    match (c, syntax) {
        (Const::Truth, Syntax::Bi) => "\\mathbf I",
        (Const::Truth, _) => "\\mathbf t",
        (Const::Top, _) => "\\top",
        (Const::Bottom, _) => "\\bot",
    }
}

fn unop_text(op: UnOp) -> &'static str {
    match op {
        UnOp::Neg => "\\sim",
        UnOp::NegFlat => "\\sim^\\flat",
        UnOp::NegSharp => "\\sim^\\sharp",
    }
}

fn binop_text(op: BinOp, syntax: Syntax) -> &'static str {
    match (op, syntax) {
        (BinOp::And, _) => "\\land",
        (BinOp::Or, _) => "\\lor",
        (BinOp::Fusion, Syntax::Bi) => "*",
        (BinOp::Fusion, _) => "\\circ",
        (BinOp::RelImp, Syntax::Bi) => "-*",
        (BinOp::RelImp, _) => "\\to",
        (BinOp::IntImp, Syntax::Bi) => "\\to",
        (BinOp::IntImp, _) => "\\Rightarrow",
        (BinOp::CoImp, _) => "-<",
        (BinOp::RightRes, _) => "\\leftarrowtail",
    }
}

fn level(op: BinOp) -> u8 {
    match op {
        BinOp::Or => 1,
        BinOp::And => 2,
        BinOp::Fusion => 3,
        _ => 0,
    }
}

fn needs_parens(child: &Formula, parent: Option<BinOp>, right: bool) -> bool {
    let Formula::Binary(cop, _, _) = child else { return false };
    let Some(pop) = parent else { return true };
    let (cl, pl) = (level(*cop), level(pop));
    if pl == 0 {
        cl == 0 && (!right || *cop != pop)
    } else {
        cl < pl || (cl == pl && right)
    }
}

/// Print with minimal parentheses; the result parses back to the same
/// formula under the same syntax.
pub fn to_text(f: &Formula, syntax: Syntax) -> Result<String, PrintError> {
    let mut out = String::new();
    write_formula(f, syntax, &mut out)?;
    Ok(out)
}

fn write_child(
    child: &Formula,
    parent: Option<BinOp>,
    right: bool,
    syntax: Syntax,
    out: &mut String,
) -> Result<(), PrintError> {
    if needs_parens(child, parent, right) {
        out.push('(');
        write_formula(child, syntax, out)?;
        out.push(')');
        Ok(())
    } else {
        write_formula(child, syntax, out)
    }
}

fn write_formula(f: &Formula, syntax: Syntax, out: &mut String) -> Result<(), PrintError> {
    match f {
        Formula::Atom(a) => out.push_str(&atom_text(a)),
        Formula::Const(c) => out.push_str(const_text(*c, syntax)),
        Formula::Unary(op, x) => {
            if syntax == Syntax::Bi {
                return Err(PrintError::Unprintable { what: "negation", syntax: "bi" });
            }
            out.push_str(unop_text(*op));
            out.push(' ');
            write_child(x, None, false, syntax, out)?;
        }
        Formula::Binary(op, x, y) => {
            write_child(x, Some(*op), false, syntax, out)?;
            out.push(' ');
            out.push_str(binop_text(*op, syntax));
            out.push(' ');
            write_child(y, Some(*op), true, syntax, out)?;
        }
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match to_text(self, Syntax::Relevance) {
            Ok(s) => f.write_str(&s),
            Err(e) => write!(f, "<{e}>"),
        }
    }
}

fn op_id(op: BinOp) -> &'static str {
    binop_text(op, Syntax::Relevance)
}

/// JSON AST: `{"id": ..., "a": [children]}`, with `"v"` holding the index
/// of a propositional variable.
pub fn to_json(f: &Formula) -> Value {
    match f {
        Formula::Atom(a) if a.is_var() => json!({"id": atom_text(a), "a": [], "v": a.index}),
        Formula::Atom(a) => json!({"id": atom_text(a), "a": []}),
        Formula::Const(c) => json!({"id": const_text(*c, Syntax::Relevance), "a": []}),
        Formula::Unary(op, x) => json!({"id": unop_text(*op), "a": [to_json(x)]}),
        Formula::Binary(op, x, y) => json!({"id": op_id(*op), "a": [to_json(x), to_json(y)]}),
    }
}

pub fn from_json(v: &Value) -> Result<Formula, ParseError> {
    let bad = |msg: &str| ParseError::BadAst(format!("{msg} in {v}"));
    let id = v.get("id").and_then(Value::as_str).ok_or_else(|| bad("missing id"))?;
    let args: Vec<&Value> = match v.get("a") {
        None => vec![],
        Some(Value::Array(a)) => a.iter().collect(),
        Some(_) => return Err(bad("\"a\" is not an array")),
    };
    let arity = |n: usize| if args.len() == n { Ok(()) } else { Err(bad("wrong arity")) };
    let un = [UnOp::Neg, UnOp::NegFlat, UnOp::NegSharp].into_iter().find(|op| unop_text(*op) == id);
    if let Some(op) = un {
        arity(1)?;
        return Ok(Formula::unary(op, from_json(args[0])?));
    }
    let bin = [
        BinOp::And,
        BinOp::Or,
        BinOp::Fusion,
        BinOp::RelImp,
        BinOp::CoImp,
        BinOp::IntImp,
        BinOp::RightRes,
    ]
    .into_iter()
    .find(|op| op_id(*op) == id);
    if let Some(op) = bin {
        arity(2)?;
        return Ok(Formula::binary(op, from_json(args[0])?, from_json(args[1])?));
    }
    arity(0)?;
    if let Some(k) = v.get("v") {
        let k = k.as_u64().ok_or_else(|| bad("\"v\" is not an index"))?;
        return Ok(Formula::Atom(Atom::named(AtomKind::PropVar, k as u32, id)));
    }
    let toks = Lexer { src: id, pos: 0 }.tokens()?;
    match toks.as_slice() {
        [(Tok::Const(c), _)] => Ok(Formula::Const(*c)),
        [(Tok::Nominal(k), _)] => Ok(Formula::nominal(*k)),
        [(Tok::CoNominal(k), _)] => Ok(Formula::conominal(*k)),
        _ => Err(bad("unknown atom")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> String {
        to_text(&parse_formula(s, Syntax::Relevance).unwrap(), Syntax::Relevance).unwrap()
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse_formula("p \\to q \\land \\mathbf t", Syntax::Relevance).unwrap();
        let expected = Formula::imp(
            Formula::named_var(0, "p"),
            Formula::and(Formula::named_var(1, "q"), Formula::truth()),
        );
        assert_eq!(f, expected);

        let f = parse_formula("a \\to b \\to c", Syntax::Relevance).unwrap();
        assert_eq!(f, Formula::imp(Formula::var(0), Formula::imp(Formula::var(1), Formula::var(2))));

        let f = parse_formula("a \\lor b \\lor c", Syntax::Relevance).unwrap();
        assert_eq!(f, Formula::or(Formula::or(Formula::var(0), Formula::var(1)), Formula::var(2)));

        let f = parse_formula("a \\lor b \\land c \\circ d", Syntax::Relevance).unwrap();
        let expected = Formula::or(
            Formula::var(0),
            Formula::and(Formula::var(1), Formula::fusion(Formula::var(2), Formula::var(3))),
        );
        assert_eq!(f, expected);

        let f = parse_formula("\\sim p \\land q", Syntax::Relevance).unwrap();
        assert_eq!(f, Formula::and(Formula::neg(Formula::var(0)), Formula::var(1)));
    }

    #[test]
    fn printing_is_minimal() {
        assert_eq!(rt("p \\to (q \\land \\mathbf{t})"), "p \\to q \\land \\mathbf t");
        assert_eq!(rt("\\mathbf i \\circ (\\mathbf i \\circ \\mathbf j_1)"), "\\mathbf i \\circ (\\mathbf i \\circ \\mathbf j_1)");
        assert_eq!(rt("(a \\to b) \\to c"), "(a \\to b) \\to c");
        assert_eq!(rt("((a \\lor b) \\lor c)"), "a \\lor b \\lor c");
        assert_eq!(rt("a \\lor (b \\lor c)"), "a \\lor (b \\lor c)");
        assert_eq!(rt("\\sim (\\sim A)"), "\\sim \\sim A");
        assert_eq!(rt("\\sim (A \\to B)"), "\\sim (A \\to B)");
        assert_eq!(rt("a \\to (b \\Rightarrow c)"), "a \\to (b \\Rightarrow c)");
    }

    #[test]
    fn nominals_and_constants() {
        let f = parse_formula("\\mathbf j_2 \\circ \\mathbf n_3 \\lor \\mathbf m_4 \\lor \\top \\lor \\bot", Syntax::Relevance)
            .unwrap();
        let atoms = f.atoms();
        assert_eq!(atoms, vec![Atom::nominal(2), Atom::conominal(3), Atom::conominal(4)]);
        assert!(parse_formula("\\mathbf j", Syntax::Relevance).is_err());
    }

    #[test]
    fn adjoint_negations() {
        let f = parse_formula("\\sim^\\flat p \\land \\sim^{\\sharp} q \\land ∼♭r", Syntax::Relevance).unwrap();
        let expected = Formula::and(
            Formula::and(Formula::neg_flat(Formula::var(0)), Formula::neg_sharp(Formula::var(1))),
            Formula::neg_flat(Formula::var(2)),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn unicode_input() {
        let a = parse_formula("(A → B) ∧ (B → C) → (A → C)", Syntax::Relevance).unwrap();
        let b = parse_formula("(A \\to B) \\land (B \\to C) \\to (A \\to C)", Syntax::Relevance).unwrap();
        assert_eq!(a, b);
        let c = parse_formula("p −< q", Syntax::Relevance).unwrap();
        assert_eq!(c, Formula::coimp(Formula::var(0), Formula::var(1)));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_formula("(p \\to q", Syntax::Relevance), Err(ParseError::UnbalancedParens { .. })));
        assert!(matches!(parse_formula("p \\to q)", Syntax::Relevance), Err(ParseError::UnbalancedParens { .. })));
        assert!(matches!(parse_formula("p \\land", Syntax::Relevance), Err(ParseError::UnexpectedEnd { .. })));
        assert!(matches!(
            parse_formula("p \\to q \\Rightarrow r", Syntax::Relevance),
            Err(ParseError::MixedImplications { .. })
        ));
        assert!(matches!(parse_formula("p \\foo q", Syntax::Relevance), Err(ParseError::UnknownCommand { .. })));
        assert!(parse_formula("p q", Syntax::Relevance).is_err());
        assert!(parse_formula("", Syntax::Relevance).is_err());
    }

    #[test]
    fn bi_syntax() {
        let f = parse_formula("p * q -* r \\land \\mathbf I", Syntax::Bi).unwrap();
        let expected = Formula::imp(
            Formula::fusion(Formula::var(0), Formula::var(1)),
            Formula::and(Formula::var(2), Formula::truth()),
        );
        assert_eq!(f, expected);
        let g = parse_formula("p \\to q", Syntax::Bi).unwrap();
        assert_eq!(g, Formula::int_imp(Formula::var(0), Formula::var(1)));
        assert_eq!(to_text(&g, Syntax::Bi).unwrap(), "p \\to q");
        assert!(parse_formula("\\sim p", Syntax::Bi).is_err());
        assert!(to_text(&Formula::neg(Formula::var(0)), Syntax::Bi).is_err());
    }

    #[test]
    fn ra_syntax() {
        let f = parse_formula("\\neg p \\lor p^\\smallsmile", Syntax::Ra).unwrap();
        let np = Formula::int_imp(Formula::var(0), Formula::bottom());
        assert_eq!(f, Formula::or(np.clone(), Formula::neg(np)));
        assert!(parse_formula("\\neg p", Syntax::Relevance).is_err());
        assert!(parse_formula("p^\\smallsmile", Syntax::Relevance).is_err());
    }

    #[test]
    fn inequalities() {
        let q = parse_quasi(
            "\\mathbf j_1 \\to \\mathbf n_1 \\le \\mathbf m, \\mathbf i \\circ (\\mathbf i \\circ \\mathbf j_1) \\le \\mathbf n_1 \\vdash \\mathbf i \\le \\mathbf m",
            Syntax::Relevance,
        )
        .unwrap();
        assert_eq!(q.premises.len(), 2);
        assert_eq!(q.conclusion, Inequality::new(Formula::nominal(0), Formula::conominal(0)));
        let q = parse_quasi("\\vdash p \\le q", Syntax::Relevance).unwrap();
        assert!(q.premises.is_empty());
        let i = parse_inequality("A \\le \\sim A \\to \\bot", Syntax::Relevance).unwrap();
        assert_eq!(i.to_string(), "A \\le \\sim A \\to \\bot");
    }

    #[test]
    fn shared_variable_indices() {
        let q = parse_quasi("p \\le q \\vdash q \\le p", Syntax::Relevance).unwrap();
        assert_eq!(q.premises[0].lhs, q.conclusion.rhs);
        assert_eq!(q.premises[0].rhs.as_atom().unwrap().index, 1);
    }

    #[test]
    fn json_roundtrip() {
        let f = parse_formula("\\sim^\\flat (p \\to \\mathbf j_1) \\circ \\mathbf t -< \\mathbf n_2", Syntax::Relevance).unwrap();
        let v = to_json(&f);
        assert_eq!(from_json(&v).unwrap(), f);
        assert!(from_json(&json!({"id": "\\land", "a": []})).is_err());
    }

    #[test]
    fn long_subscripts() {
        let f = Formula::and(Formula::nominal(12), Formula::named_var(0, "p_12"));
        let s = to_text(&f, Syntax::Relevance).unwrap();
        assert_eq!(s, "\\mathbf j_{12} \\land p_{12}");
        assert_eq!(parse_formula(&s, Syntax::Relevance).unwrap(), f);
    }
}
