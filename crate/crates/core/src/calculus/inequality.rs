use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{Atom, Formula, Sign};
use crate::parser::{to_text, Syntax};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Inequality {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Inequality {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Inequality { lhs, rhs }
    }

    /// Counts of positive and negative occurrences of `a`, where an
    /// occurrence is positive when it is positive in the right-hand side or
    /// negative in the left-hand side.
    pub fn sign_counts(&self, a: &Atom) -> (usize, usize) {
        let (lp, ln) = self.lhs.sign_counts(a);
        let (rp, rn) = self.rhs.sign_counts(a);
        (rp + ln, rn + lp)
    }

    pub fn is_positive_in(&self, a: &Atom) -> bool {
        self.sign_counts(a).1 == 0
    }

    pub fn is_negative_in(&self, a: &Atom) -> bool {
        self.sign_counts(a).0 == 0
    }

    pub fn has_sign(&self, a: &Atom, sign: Sign) -> bool {
        match sign {
            Sign::Pos => self.is_positive_in(a),
            Sign::Neg => self.is_negative_in(a),
        }
    }

    pub fn contains(&self, a: &Atom) -> bool {
        self.lhs.contains(a) || self.rhs.contains(a)
    }

    pub fn is_pure(&self) -> bool {
        self.lhs.is_pure() && self.rhs.is_pure()
    }

    pub fn substitute(&self, a: &Atom, f: &Formula) -> Inequality {
        Inequality::new(self.lhs.substitute(a, f), self.rhs.substitute(a, f))
    }

    pub fn collect_atoms(&self, out: &mut Vec<Atom>) {
        self.lhs.collect_atoms(out);
        self.rhs.collect_atoms(out);
    }

    /// `⊥ ≤ x`, `x ≤ ⊤` or `x ≤ x`.
    pub fn is_trivial(&self) -> bool {
        self.lhs == Formula::bottom() || self.rhs == Formula::top() || self.lhs == self.rhs
    }

    pub fn to_text(&self, syntax: Syntax) -> String {
        let side = |f: &Formula| to_text(f, syntax).unwrap_or_else(|e| format!("<{e}>"));
        format!("{} \\le {}", side(&self.lhs), side(&self.rhs))
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(Syntax::Relevance))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuasiInequality {
    pub premises: Vec<Inequality>,
    pub conclusion: Inequality,
}

impl QuasiInequality {
    pub fn new(premises: Vec<Inequality>, conclusion: Inequality) -> Self {
        QuasiInequality { premises, conclusion }
    }

    pub fn inequalities(&self) -> impl Iterator<Item = &Inequality> {
        self.premises.iter().chain(std::iter::once(&self.conclusion))
    }

    /// Atoms in order of first occurrence, premises first.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for ineq in self.inequalities() {
            ineq.collect_atoms(&mut out);
        }
        out
    }

    pub fn atom_set(&self) -> BTreeSet<Atom> {
        self.atoms().into_iter().collect()
    }

    pub fn prop_vars(&self) -> Vec<Atom> {
        self.atoms().into_iter().filter(Atom::is_var).collect()
    }

    pub fn is_pure(&self) -> bool {
        self.inequalities().all(Inequality::is_pure)
    }

    pub fn substitute(&self, a: &Atom, f: &Formula) -> QuasiInequality {
        QuasiInequality {
            premises: self.premises.iter().map(|p| p.substitute(a, f)).collect(),
            conclusion: self.conclusion.substitute(a, f),
        }
    }

    pub fn to_text(&self, syntax: Syntax) -> String {
        let prem: Vec<String> = self.premises.iter().map(|p| p.to_text(syntax)).collect();
        if prem.is_empty() {
            format!("\\vdash {}", self.conclusion.to_text(syntax))
        } else {
            format!("{} \\vdash {}", prem.join(", "), self.conclusion.to_text(syntax))
        }
    }
}

impl fmt::Display for QuasiInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(Syntax::Relevance))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inequality_signs() {
        let p = Atom::var(0);
        let ineq = Inequality::new(Formula::var(0), Formula::var(1));
        assert_eq!(ineq.sign_counts(&p), (0, 1));
        assert!(ineq.is_negative_in(&p));
        let ineq = Inequality::new(Formula::nominal(0), Formula::imp(Formula::var(0), Formula::var(0)));
        assert_eq!(ineq.sign_counts(&p), (1, 1));
    }

    #[test]
    fn triviality() {
        assert!(Inequality::new(Formula::bottom(), Formula::var(0)).is_trivial());
        assert!(Inequality::new(Formula::var(0), Formula::top()).is_trivial());
        assert!(Inequality::new(Formula::var(1), Formula::var(1)).is_trivial());
        assert!(!Inequality::new(Formula::top(), Formula::bottom()).is_trivial());
    }
}
