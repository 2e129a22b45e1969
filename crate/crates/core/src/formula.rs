//! Formula AST for the extended relevance language, together with the
//! polarity machinery the rewrite calculus relies on.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AtomKind {
    PropVar,
    Nominal,
    CoNominal,
}

/// An atom is identified by its kind and index; the display name is
/// carried along for printing only.
#[derive(Clone, Debug)]
pub struct Atom {
    pub kind: AtomKind,
    pub index: u32,
    name: Option<Arc<str>>,
}

impl Atom {
    pub fn new(kind: AtomKind, index: u32) -> Self {
        Atom { kind, index, name: None }
    }

    pub fn named(kind: AtomKind, index: u32, name: impl Into<Arc<str>>) -> Self {
        Atom { kind, index, name: Some(name.into()) }
    }

    pub fn var(index: u32) -> Self {
        Atom::new(AtomKind::PropVar, index)
    }

    pub fn nominal(index: u32) -> Self {
        Atom::new(AtomKind::Nominal, index)
    }

    pub fn conominal(index: u32) -> Self {
        Atom::new(AtomKind::CoNominal, index)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn is_var(&self) -> bool {
        self.kind == AtomKind::PropVar
    }

    pub fn is_nominal(&self) -> bool {
        self.kind == AtomKind::Nominal
    }

    pub fn is_conominal(&self) -> bool {
        self.kind == AtomKind::CoNominal
    }

    /// Plain-text label (`p`, `j1`, `n2`, ...), used in element names such as
    /// the signed elimination order.
    pub fn label(&self) -> String {
        match (self.kind, &self.name) {
            (AtomKind::PropVar, Some(n)) => n.to_string(),
            (AtomKind::PropVar, None) => format!("p_{}", self.index),
            (AtomKind::Nominal, _) if self.index == 0 => "i".to_string(),
            (AtomKind::Nominal, _) => format!("j{}", self.index),
            (AtomKind::CoNominal, _) if self.index == 0 => "m".to_string(),
            (AtomKind::CoNominal, _) => format!("n{}", self.index),
        }
    }
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.index == other.index
    }
}

impl Eq for Atom {}

impl Hash for Atom {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.index.hash(state);
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.kind, self.index).cmp(&(other.kind, other.index))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Const {
    /// Relevant truth `t`.
    Truth,
    Top,
    Bottom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnOp {
    /// Relevant negation `∼`.
    Neg,
    /// Left adjoint `∼♭` of negation.
    NegFlat,
    /// Right adjoint `∼♯` of negation.
    NegSharp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    And,
    Or,
    /// Fusion `∘`.
    Fusion,
    /// Relevant implication `→`.
    RelImp,
    /// Co-implication `−<`, left residual of `∨`.
    CoImp,
    /// Heyting implication `⇒`, right residual of `∧`.
    IntImp,
    /// `↢`, residual of fusion in its second coordinate.
    RightRes,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    /// Sign composition: `Pos` is the identity, `Neg` flips.
    pub fn compose(self, other: Sign) -> Sign {
        if self == other {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Pos => '+',
            Sign::Neg => '-',
        }
    }
}

impl UnOp {
    pub fn polarity(self) -> Sign {
        Sign::Neg
    }
}

impl BinOp {
    /// Order type of the connective, one sign per coordinate.
    pub fn polarity(self) -> (Sign, Sign) {
        use BinOp::*;
        match self {
            And | Or | Fusion => (Sign::Pos, Sign::Pos),
            RelImp | IntImp | RightRes => (Sign::Neg, Sign::Pos),
            CoImp => (Sign::Pos, Sign::Neg),
        }
    }

    pub fn is_commutative(self) -> bool {
        matches!(self, BinOp::And | BinOp::Or)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Const(Const),
    Unary(UnOp, Box<Formula>),
    Binary(BinOp, Box<Formula>, Box<Formula>),
}

/// Position of a subformula: the sequence of child indices from the root.
pub type Path = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub path: Path,
    pub sign: Sign,
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn var(index: u32) -> Self {
        Formula::Atom(Atom::var(index))
    }

    pub fn named_var(index: u32, name: &str) -> Self {
        Formula::Atom(Atom::named(AtomKind::PropVar, index, name))
    }

    pub fn nominal(index: u32) -> Self {
        Formula::Atom(Atom::nominal(index))
    }

    pub fn conominal(index: u32) -> Self {
        Formula::Atom(Atom::conominal(index))
    }

    pub fn truth() -> Self {
        Formula::Const(Const::Truth)
    }

    pub fn top() -> Self {
        Formula::Const(Const::Top)
    }

    pub fn bottom() -> Self {
        Formula::Const(Const::Bottom)
    }

    pub fn unary(op: UnOp, a: Formula) -> Self {
        Formula::Unary(op, Box::new(a))
    }

    pub fn binary(op: BinOp, a: Formula, b: Formula) -> Self {
        Formula::Binary(op, Box::new(a), Box::new(b))
    }

    pub fn neg(a: Formula) -> Self {
        Formula::unary(UnOp::Neg, a)
    }

    pub fn neg_flat(a: Formula) -> Self {
        Formula::unary(UnOp::NegFlat, a)
    }

    pub fn neg_sharp(a: Formula) -> Self {
        Formula::unary(UnOp::NegSharp, a)
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::And, a, b)
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::Or, a, b)
    }

    pub fn fusion(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::Fusion, a, b)
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::RelImp, a, b)
    }

    pub fn coimp(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::CoImp, a, b)
    }

    pub fn int_imp(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::IntImp, a, b)
    }

    pub fn right_res(a: Formula, b: Formula) -> Self {
        Formula::binary(BinOp::RightRes, a, b)
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_atom(&self, a: &Atom) -> bool {
        matches!(self, Formula::Atom(b) if b == a)
    }

    pub fn is_nominal(&self) -> bool {
        matches!(self, Formula::Atom(a) if a.is_nominal())
    }

    pub fn is_conominal(&self) -> bool {
        matches!(self, Formula::Atom(a) if a.is_conominal())
    }

    /// Nominal or co-nominal.
    pub fn is_special(&self) -> bool {
        self.is_nominal() || self.is_conominal()
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Const(_) => vec![],
            Formula::Unary(_, a) => vec![a],
            Formula::Binary(_, a, b) => vec![a, b],
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Atoms in order of first occurrence (pre-order, left to right).
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Formula::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Formula::Const(_) => {}
            Formula::Unary(_, a) => a.collect_atoms(out),
            Formula::Binary(_, a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn prop_vars(&self) -> Vec<Atom> {
        self.atoms().into_iter().filter(Atom::is_var).collect()
    }

    pub fn contains(&self, a: &Atom) -> bool {
        match self {
            Formula::Atom(b) => a == b,
            Formula::Const(_) => false,
            Formula::Unary(_, x) => x.contains(a),
            Formula::Binary(_, x, y) => x.contains(a) || y.contains(a),
        }
    }

    /// No propositional variables.
    pub fn is_pure(&self) -> bool {
        match self {
            Formula::Atom(a) => !a.is_var(),
            Formula::Const(_) => true,
            Formula::Unary(_, x) => x.is_pure(),
            Formula::Binary(_, x, y) => x.is_pure() && y.is_pure(),
        }
    }

    /// Only variables, constants and `∼ ∧ ∨ ∘ →`.
    pub fn is_base_language(&self) -> bool {
        match self {
            Formula::Atom(a) => a.is_var(),
            Formula::Const(_) => true,
            Formula::Unary(op, x) => *op == UnOp::Neg && x.is_base_language(),
            Formula::Binary(op, x, y) => {
                matches!(op, BinOp::And | BinOp::Or | BinOp::Fusion | BinOp::RelImp)
                    && x.is_base_language()
                    && y.is_base_language()
            }
        }
    }

    pub fn occurrences(&self, a: &Atom) -> Vec<Occurrence> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_occurrences(a, Sign::Pos, &mut path, &mut out);
        out
    }

    fn collect_occurrences(&self, a: &Atom, sign: Sign, path: &mut Path, out: &mut Vec<Occurrence>) {
        match self {
            Formula::Atom(b) => {
                if a == b {
                    out.push(Occurrence { path: path.clone(), sign });
                }
            }
            Formula::Const(_) => {}
            Formula::Unary(op, x) => {
                path.push(0);
                x.collect_occurrences(a, sign.compose(op.polarity()), path, out);
                path.pop();
            }
            Formula::Binary(op, x, y) => {
                let (s0, s1) = op.polarity();
                path.push(0);
                x.collect_occurrences(a, sign.compose(s0), path, out);
                path.pop();
                path.push(1);
                y.collect_occurrences(a, sign.compose(s1), path, out);
                path.pop();
            }
        }
    }

    /// Number of positive and negative occurrences of `a`.
    pub fn sign_counts(&self, a: &Atom) -> (usize, usize) {
        fn go(f: &Formula, a: &Atom, sign: Sign, acc: &mut (usize, usize)) {
            match f {
                Formula::Atom(b) => {
                    if a == b {
                        match sign {
                            Sign::Pos => acc.0 += 1,
                            Sign::Neg => acc.1 += 1,
                        }
                    }
                }
                Formula::Const(_) => {}
                Formula::Unary(op, x) => go(x, a, sign.compose(op.polarity()), acc),
                Formula::Binary(op, x, y) => {
                    let (s0, s1) = op.polarity();
                    go(x, a, sign.compose(s0), acc);
                    go(y, a, sign.compose(s1), acc);
                }
            }
        }
        let mut acc = (0, 0);
        go(self, a, Sign::Pos, &mut acc);
        acc
    }

    /// Every occurrence of `a` is positive (vacuously true if absent).
    pub fn is_positive_in(&self, a: &Atom) -> bool {
        self.sign_counts(a).1 == 0
    }

    /// Every occurrence of `a` is negative (vacuously true if absent).
    pub fn is_negative_in(&self, a: &Atom) -> bool {
        self.sign_counts(a).0 == 0
    }

    pub fn substitute(&self, a: &Atom, replacement: &Formula) -> Formula {
        match self {
            Formula::Atom(b) if a == b => replacement.clone(),
            Formula::Atom(_) | Formula::Const(_) => self.clone(),
            Formula::Unary(op, x) => Formula::unary(*op, x.substitute(a, replacement)),
            Formula::Binary(op, x, y) => {
                Formula::binary(*op, x.substitute(a, replacement), y.substitute(a, replacement))
            }
        }
    }

    pub fn subformula(&self, path: &[u8]) -> Option<&Formula> {
        let Some((&first, rest)) = path.split_first() else {
            return Some(self);
        };
        match (self, first) {
            (Formula::Unary(_, x), 0) => x.subformula(rest),
            (Formula::Binary(_, x, _), 0) => x.subformula(rest),
            (Formula::Binary(_, _, y), 1) => y.subformula(rest),
            _ => None,
        }
    }

    /// Replace the subformula at `path`. Panics on an invalid path.
    pub fn replace_at(&self, path: &[u8], replacement: Formula) -> Formula {
        let Some((&first, rest)) = path.split_first() else {
            return replacement;
        };
        match (self, first) {
            (Formula::Unary(op, x), 0) => Formula::unary(*op, x.replace_at(rest, replacement)),
            (Formula::Binary(op, x, y), 0) => {
                Formula::binary(*op, x.replace_at(rest, replacement), (**y).clone())
            }
            (Formula::Binary(op, x, y), 1) => {
                Formula::binary(*op, (**x).clone(), y.replace_at(rest, replacement))
            }
            _ => panic!("invalid formula path {path:?}"),
        }
    }

    /// Renumber propositional variables by order of first occurrence.
    pub fn canonicalize_vars(&self) -> Formula {
        let vars = self.prop_vars();
        let mut out = self.clone();
        // Two passes through temporary indices so renamings cannot collide.
        let offset = vars.iter().map(|v| v.index).max().unwrap_or(0) + 1;
        for (k, v) in vars.iter().enumerate() {
            let tmp = Atom { kind: AtomKind::PropVar, index: offset + k as u32, name: v.name.clone() };
            out = out.substitute(v, &Formula::Atom(tmp));
        }
        for (k, v) in vars.iter().enumerate() {
            let tmp = Atom::var(offset + k as u32);
            let fin = Atom { kind: AtomKind::PropVar, index: k as u32, name: v.name.clone() };
            out = out.substitute(&tmp, &Formula::Atom(fin));
        }
        out
    }
}

/// Least-index atom of `kind` that is not in `used`.
pub fn fresh_atom(kind: AtomKind, used: &BTreeSet<Atom>) -> Atom {
    let mut index = 0;
    loop {
        let candidate = Atom::new(kind, index);
        if !used.contains(&candidate) {
            return candidate;
        }
        index += 1;
    }
}
