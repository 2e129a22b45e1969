//! Recursive-descent checker for TPTP `fof` annotated formulas.
//!
//! Accepts the first-order form of the TPTP grammar: quantifiers, unary and
//! binary connectives, equality, `$true`/`$false`, and plain terms. It also
//! rejects free variables and symbols used at two different arities.

use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Punct(&'static str),
    Upper(String),
    Lower(String),
    Dollar(String),
    Int(String),
}

const PUNCT: [&str; 19] = [
    "<=>", "<~>", "=>", "<=", "~|", "~&", "!=", "(", ")", "[", "]", ",", ".", ":", "!", "?", "~", "&", "|",
];

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let b = src.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    'outer: while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == '%' {
            while i < b.len() && b[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        for p in PUNCT {
            if src[i..].starts_with(p) {
                out.push(Tok::Punct(p));
                i += p.len();
                continue 'outer;
            }
        }
        if c == '=' {
            out.push(Tok::Punct("="));
            i += 1;
            continue;
        }
        let start = i;
        let word = |i: &mut usize| {
            while *i < b.len() && (b[*i].is_ascii_alphanumeric() || b[*i] == b'_') {
                *i += 1;
            }
        };
        if c.is_ascii_uppercase() {
            word(&mut i);
            out.push(Tok::Upper(src[start..i].to_string()));
        } else if c.is_ascii_lowercase() {
            word(&mut i);
            out.push(Tok::Lower(src[start..i].to_string()));
        } else if c == '$' {
            i += 1;
            word(&mut i);
            out.push(Tok::Dollar(src[start..i].to_string()));
        } else if c.is_ascii_digit() {
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Int(src[start..i].to_string()));
        } else {
            return Err(format!("unexpected character {c:?} at {i}"));
        }
    }
    Ok(out)
}

const ROLES: [&str; 9] =
    ["axiom", "hypothesis", "definition", "assumption", "lemma", "theorem", "conjecture", "negated_conjecture", "plain"];

struct P {
    toks: Vec<Tok>,
    at: usize,
    bound: Vec<String>,
    arity: BTreeMap<String, usize>,
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at)
    }

    fn is(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn expect(&mut self, p: &str) -> Result<(), String> {
        if self.is(p) {
            self.at += 1;
            Ok(())
        } else {
            Err(format!("expected {p:?} at token {}, found {:?}", self.at, self.peek()))
        }
    }

    fn annotated(&mut self) -> Result<(), String> {
        match self.peek() {
            Some(Tok::Lower(w)) if w == "fof" => self.at += 1,
            t => return Err(format!("expected fof, found {t:?}")),
        }
        self.expect("(")?;
        match self.peek() {
            Some(Tok::Lower(_)) | Some(Tok::Int(_)) => self.at += 1,
            t => return Err(format!("bad name {t:?}")),
        }
        self.expect(",")?;
        match self.peek() {
            Some(Tok::Lower(r)) if ROLES.contains(&r.as_str()) => self.at += 1,
            t => return Err(format!("bad role {t:?}")),
        }
        self.expect(",")?;
        self.logic()?;
        self.expect(")")?;
        self.expect(".")
    }

    fn logic(&mut self) -> Result<(), String> {
        self.unitary()?;
        for nonassoc in ["<=>", "=>", "<=", "<~>", "~|", "~&"] {
            if self.is(nonassoc) {
                self.at += 1;
                return self.unitary();
            }
        }
        for assoc in ["&", "|"] {
            if self.is(assoc) {
                while self.is(assoc) {
                    self.at += 1;
                    self.unitary()?;
                }
                if self.is(if assoc == "&" { "|" } else { "&" }) {
                    return Err("mixed & and | without parentheses".into());
                }
                return Ok(());
            }
        }
        Ok(())
    }

    fn unitary(&mut self) -> Result<(), String> {
        if self.is("!") || self.is("?") {
            self.at += 1;
            self.expect("[")?;
            let mark = self.bound.len();
            loop {
                match self.peek().cloned() {
                    Some(Tok::Upper(v)) => {
                        self.at += 1;
                        self.bound.push(v);
                    }
                    t => return Err(format!("expected variable, found {t:?}")),
                }
                if self.is(",") {
                    self.at += 1;
                } else {
                    break;
                }
            }
            self.expect("]")?;
            self.expect(":")?;
            self.unitary()?;
            self.bound.truncate(mark);
            return Ok(());
        }
        if self.is("~") {
            self.at += 1;
            return self.unitary();
        }
        if self.is("(") {
            self.at += 1;
            self.logic()?;
            return self.expect(")");
        }
        self.atomic()
    }

    fn atomic(&mut self) -> Result<(), String> {
        let lhs_is_var = matches!(self.peek(), Some(Tok::Upper(_)));
        match self.peek().cloned() {
            Some(Tok::Dollar(w)) if (w == "$true" || w == "$false") && !self.next_is_eq() => {
                self.at += 1;
                return Ok(());
            }
            _ => {}
        }
        self.term()?;
        if self.is("=") || self.is("!=") {
            self.at += 1;
            self.term()
        } else if lhs_is_var {
            Err("variable used as a formula".into())
        } else {
            Ok(())
        }
    }

    fn next_is_eq(&self) -> bool {
        matches!(self.toks.get(self.at + 1), Some(Tok::Punct("=")) | Some(Tok::Punct("!=")))
    }

    fn term(&mut self) -> Result<(), String> {
        match self.peek().cloned() {
            Some(Tok::Upper(v)) => {
                self.at += 1;
                if self.bound.contains(&v) {
                    Ok(())
                } else {
                    Err(format!("free variable {v}"))
                }
            }
            Some(Tok::Lower(f)) | Some(Tok::Dollar(f)) => {
                self.at += 1;
                let mut n = 0;
                if self.is("(") {
                    self.at += 1;
                    loop {
                        self.term()?;
                        n += 1;
                        if self.is(",") {
                            self.at += 1;
                        } else {
                            break;
                        }
                    }
                    self.expect(")")?;
                }
                match self.arity.insert(f.clone(), n) {
                    Some(m) if m != n => Err(format!("{f} used with arities {m} and {n}")),
                    _ => Ok(()),
                }
            }
            Some(Tok::Int(_)) => {
                self.at += 1;
                Ok(())
            }
            t => Err(format!("expected term, found {t:?}")),
        }
    }
}

/// Check a sequence of `fof(...)` annotated formulas.
pub fn check(src: &str) -> Result<(), String> {
    let toks = lex(src)?;
    let mut p = P { toks, at: 0, bound: Vec::new(), arity: BTreeMap::new() };
    if p.toks.is_empty() {
        return Err("empty input".into());
    }
    while p.at < p.toks.len() {
        p.annotated()?;
        p.bound.clear();
    }
    Ok(())
}

#[test]
fn checker_accepts_and_rejects() {
    assert!(check("fof(a, axiom, ! [X] : (p(X) => ? [Y] : r(X,Y,X))).").is_ok());
    assert!(check("fof(a, axiom, ! [X] : (X = X & $true)).").is_ok());
    assert!(check("fof(a, axiom, ! [X] : p(X)). fof(b, conjecture, ~ $false).").is_ok());
    assert!(check("fof(a, axiom, p(X)).").is_err());
    assert!(check("fof(a, axiom, ! [X] : p(X) & q(X) | r(X)).").is_err());
    assert!(check("fof(a, axiom, ! [X] : (p(X) => q(X) => r(X))).").is_err());
    assert!(check("fof(a-b, axiom, $true).").is_err());
    assert!(check("fof(a, axiom, ! [X] : (p(X) & p(X,X))).").is_err());
    assert!(check("fof(a, axiom, $true)").is_err());
    assert!(check("fof(a, lemmas, $true).").is_err());
}
