//! First-order frame language: `R`, `O`, `⪯`, `=`, `*` and unary
//! predicates for propositional variables.

use std::collections::BTreeSet;
use std::fmt;

use crate::formula::Atom;
use crate::oracle::RmFrame;

/// `X(k)` ranges over worlds named by nominal `k`, `Y(k)` over worlds named
/// by co-nominal `k`, `Z(k)` are bound variables of the standard
/// translation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(u32),
    Y(u32),
    Z(u32),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(k) => write!(f, "x{k}"),
            Var::Y(k) => write!(f, "y{k}"),
            Var::Z(k) => write!(f, "z{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Star(Box<Term>),
}

impl Term {
    pub fn var(v: Var) -> Term {
        Term::Var(v)
    }

    pub fn star(t: Term) -> Term {
        Term::Star(Box::new(t))
    }

    fn root(&self) -> Var {
        match self {
            Term::Var(v) => *v,
            Term::Star(t) => t.root(),
        }
    }

    fn rename(&self, from: Var, to: Var) -> Term {
        match self {
            Term::Var(v) if *v == from => Term::Var(to),
            Term::Var(_) => self.clone(),
            Term::Star(t) => Term::star(t.rename(from, to)),
        }
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Term {
        Term::Var(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Fo {
    True,
    False,
    R(Term, Term, Term),
    O(Term),
    Leq(Term, Term),
    Eq(Term, Term),
    Pred(Atom, Term),
    Not(Box<Fo>),
    And(Box<Fo>, Box<Fo>),
    Or(Box<Fo>, Box<Fo>),
    Implies(Box<Fo>, Box<Fo>),
    Forall(Var, Box<Fo>),
    Exists(Var, Box<Fo>),
}

impl Fo {
    pub fn r(a: impl Into<Term>, b: impl Into<Term>, c: impl Into<Term>) -> Fo {
        Fo::R(a.into(), b.into(), c.into())
    }

    pub fn o(a: impl Into<Term>) -> Fo {
        Fo::O(a.into())
    }

    pub fn leq(a: impl Into<Term>, b: impl Into<Term>) -> Fo {
        Fo::Leq(a.into(), b.into())
    }

    pub fn eq(a: impl Into<Term>, b: impl Into<Term>) -> Fo {
        Fo::Eq(a.into(), b.into())
    }

    pub fn not(a: Fo) -> Fo {
        Fo::Not(Box::new(a))
    }

    pub fn and(a: Fo, b: Fo) -> Fo {
        Fo::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Fo, b: Fo) -> Fo {
        Fo::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Fo, b: Fo) -> Fo {
        Fo::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, a: Fo) -> Fo {
        Fo::Forall(v, Box::new(a))
    }

    pub fn exists(v: Var, a: Fo) -> Fo {
        Fo::Exists(v, Box::new(a))
    }

    /// Conjunction of a list, `True` when empty.
    pub fn conj(items: Vec<Fo>) -> Fo {
        let mut it = items.into_iter();
        match it.next() {
            None => Fo::True,
            Some(first) => it.fold(first, Fo::and),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        let mut term = |t: &Term, bound: &Vec<Var>| {
            let v = t.root();
            if !bound.contains(&v) {
                out.insert(v);
            }
        };
        match self {
            Fo::True | Fo::False => {}
            Fo::R(a, b, c) => {
                term(a, bound);
                term(b, bound);
                term(c, bound);
            }
            Fo::O(a) | Fo::Pred(_, a) => term(a, bound),
            Fo::Leq(a, b) | Fo::Eq(a, b) => {
                term(a, bound);
                term(b, bound);
            }
            Fo::Not(a) => a.collect_free(bound, out),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Fo::Forall(v, a) | Fo::Exists(v, a) => {
                bound.push(*v);
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn has_free(&self, v: Var) -> bool {
        self.free_vars().contains(&v)
    }

    /// Universal closure over the free variables, `x` before `y` before
    /// `z`, each ascending.
    pub fn close(self) -> Fo {
        let vars: Vec<Var> = self.free_vars().into_iter().collect();
        vars.into_iter().rev().fold(self, |acc, v| Fo::forall(v, acc))
    }

    /// Strip leading universal quantifiers.
    pub fn matrix(&self) -> &Fo {
        match self {
            Fo::Forall(_, a) => a.matrix(),
            other => other,
        }
    }

    /// Rename free occurrences of `from` to `to` (no capture check; callers
    /// rename to variables not bound below).
    pub fn rename(&self, from: Var, to: Var) -> Fo {
        let t = |x: &Term| x.rename(from, to);
        match self {
            Fo::True | Fo::False => self.clone(),
            Fo::R(a, b, c) => Fo::R(t(a), t(b), t(c)),
            Fo::O(a) => Fo::O(t(a)),
            Fo::Pred(p, a) => Fo::Pred(p.clone(), t(a)),
            Fo::Leq(a, b) => Fo::Leq(t(a), t(b)),
            Fo::Eq(a, b) => Fo::Eq(t(a), t(b)),
            Fo::Not(a) => Fo::not(a.rename(from, to)),
            Fo::And(a, b) => Fo::and(a.rename(from, to), b.rename(from, to)),
            Fo::Or(a, b) => Fo::or(a.rename(from, to), b.rename(from, to)),
            Fo::Implies(a, b) => Fo::implies(a.rename(from, to), b.rename(from, to)),
            Fo::Forall(v, _) | Fo::Exists(v, _) if *v == from => self.clone(),
            Fo::Forall(v, a) => Fo::forall(*v, a.rename(from, to)),
            Fo::Exists(v, a) => Fo::exists(*v, a.rename(from, to)),
        }
    }

    /// Replace `Leq` atoms by equality, as on frames whose order is
    /// discrete.
    pub fn leq_to_eq(&self) -> Fo {
        match self {
            Fo::Leq(a, b) => Fo::Eq(a.clone(), b.clone()),
            Fo::Not(a) => Fo::not(a.leq_to_eq()),
            Fo::And(a, b) => Fo::and(a.leq_to_eq(), b.leq_to_eq()),
            Fo::Or(a, b) => Fo::or(a.leq_to_eq(), b.leq_to_eq()),
            Fo::Implies(a, b) => Fo::implies(a.leq_to_eq(), b.leq_to_eq()),
            Fo::Forall(v, a) => Fo::forall(*v, a.leq_to_eq()),
            Fo::Exists(v, a) => Fo::exists(*v, a.leq_to_eq()),
            other => other.clone(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Fo::Not(a) | Fo::Forall(_, a) | Fo::Exists(_, a) => 1 + a.size(),
            Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => 1 + a.size() + b.size(),
            _ => 1,
        }
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Fo, b: &Fo) -> bool {
    fn term_eq(s: &Term, t: &Term, env: &[(Var, Var)]) -> bool {
        match (s, t) {
            (Term::Star(x), Term::Star(y)) => term_eq(x, y, env),
            (Term::Var(x), Term::Var(y)) => {
                // innermost binding wins
                for (l, r) in env.iter().rev() {
                    if l == x || r == y {
                        return l == x && r == y;
                    }
                }
                x == y
            }
            _ => false,
        }
    }
    fn go(a: &Fo, b: &Fo, env: &mut Vec<(Var, Var)>) -> bool {
        match (a, b) {
            (Fo::True, Fo::True) | (Fo::False, Fo::False) => true,
            (Fo::R(a1, a2, a3), Fo::R(b1, b2, b3)) => {
                term_eq(a1, b1, env) && term_eq(a2, b2, env) && term_eq(a3, b3, env)
            }
            (Fo::O(x), Fo::O(y)) => term_eq(x, y, env),
            (Fo::Pred(p, x), Fo::Pred(q, y)) => p == q && term_eq(x, y, env),
            (Fo::Leq(a1, a2), Fo::Leq(b1, b2)) | (Fo::Eq(a1, a2), Fo::Eq(b1, b2)) => {
                term_eq(a1, b1, env) && term_eq(a2, b2, env)
            }
            (Fo::Not(x), Fo::Not(y)) => go(x, y, env),
            (Fo::And(a1, a2), Fo::And(b1, b2))
            | (Fo::Or(a1, a2), Fo::Or(b1, b2))
            | (Fo::Implies(a1, a2), Fo::Implies(b1, b2)) => go(a1, b1, env) && go(a2, b2, env),
            (Fo::Forall(v, x), Fo::Forall(w, y)) | (Fo::Exists(v, x), Fo::Exists(w, y)) => {
                env.push((*v, *w));
                let ok = go(x, y, env);
                env.pop();
                ok
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

fn simplify_once(f: &Fo) -> Fo {
    use Fo::*;
    match f {
        Not(a) => match simplify_once(a) {
            Not(b) => *b,
            True => False,
            False => True,
            b => Fo::not(b),
        },
        And(a, b) => match (simplify_once(a), simplify_once(b)) {
            (True, y) => y,
            (x, True) => x,
            (False, _) | (_, False) => False,
            (x, y) if x == y => x,
            (And(x, y), z) if *y == z || *x == z => Fo::and(*x, *y),
            (x, y) => Fo::and(x, y),
        },
        Or(a, b) => match (simplify_once(a), simplify_once(b)) {
            (False, y) => y,
            (x, False) => x,
            (True, _) | (_, True) => True,
            (x, y) if x == y => x,
            (x, y) => Fo::or(x, y),
        },
        Implies(a, b) => {
            let (x, y) = (simplify_once(a), simplify_once(b));
            match (x, y) {
                (True, y) => y,
                (False, _) | (_, True) => True,
                (x, False) => Fo::not(x),
                (x, y) if x == y => True,
                (Not(x), Not(y)) => Fo::implies(*y, *x),
                (x, Not(k)) => match pull_existential(&x, &k) {
                    Some(g) => g,
                    None => Fo::implies(x, Fo::not(*k)),
                },
                (x, y) => Fo::implies(x, y),
            }
        }
        Forall(v, a) | Exists(v, a) => {
            let body = simplify_once(a);
            if !body.has_free(*v) {
                body
            } else if matches!(f, Forall(..)) {
                Fo::forall(*v, body)
            } else {
                Fo::exists(*v, body)
            }
        }
        other => other.clone(),
    }
}

/// `(∀v̄ (G → ¬H)) → ¬K` becomes `K → ∃v̄ (G ∧ H)` when no `v̄` is free in
/// `K`.
fn pull_existential(lhs: &Fo, k: &Fo) -> Option<Fo> {
    let mut vars = Vec::new();
    let mut body = lhs;
    while let Fo::Forall(v, a) = body {
        vars.push(*v);
        body = a;
    }
    if vars.is_empty() {
        return None;
    }
    let Fo::Implies(g, neg_h) = body else { return None };
    let Fo::Not(h) = &**neg_h else { return None };
    let free = k.free_vars();
    if vars.iter().any(|v| free.contains(v)) {
        return None;
    }
    let inner = Fo::and((**g).clone(), (**h).clone());
    let ex = vars.into_iter().rev().fold(inner, |acc, v| Fo::exists(v, acc));
    Some(Fo::implies(k.clone(), ex))
}

/// Propositional and quantifier clean-up, applied bottom-up until nothing
/// changes.
pub fn fo_simplify(f: &Fo) -> Fo {
    let mut cur = f.clone();
    loop {
        let next = simplify_once(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn lookup(env: &[(Var, usize)], v: Var) -> Option<usize> {
    env.iter().rev().find(|(w, _)| *w == v).map(|(_, x)| *x)
}

fn eval_term(frame: &RmFrame, t: &Term, env: &[(Var, usize)]) -> Option<usize> {
    match t {
        Term::Var(v) => lookup(env, *v),
        Term::Star(a) => eval_term(frame, a, env).map(|x| frame.star(x)),
    }
}

/// Evaluate on a frame. Free variables are read from `env`; `preds` gives
/// the extension of each propositional variable as a bitmask. Returns
/// `None` when a variable or predicate has no value.
pub fn eval_fo_with(
    frame: &RmFrame,
    f: &Fo,
    env: &mut Vec<(Var, usize)>,
    preds: &dyn Fn(&Atom) -> Option<u32>,
) -> Option<bool> {
    Some(match f {
        Fo::True => true,
        Fo::False => false,
        Fo::R(a, b, c) => frame.r(eval_term(frame, a, env)?, eval_term(frame, b, env)?, eval_term(frame, c, env)?),
        Fo::O(a) => frame.is_normal(eval_term(frame, a, env)?),
        Fo::Leq(a, b) => frame.leq(eval_term(frame, a, env)?, eval_term(frame, b, env)?),
        Fo::Eq(a, b) => eval_term(frame, a, env)? == eval_term(frame, b, env)?,
        Fo::Pred(p, a) => preds(p)? >> eval_term(frame, a, env)? & 1 == 1,
        Fo::Not(a) => !eval_fo_with(frame, a, env, preds)?,
        Fo::And(a, b) => eval_fo_with(frame, a, env, preds)? && eval_fo_with(frame, b, env, preds)?,
        Fo::Or(a, b) => eval_fo_with(frame, a, env, preds)? || eval_fo_with(frame, b, env, preds)?,
        Fo::Implies(a, b) => !eval_fo_with(frame, a, env, preds)? || eval_fo_with(frame, b, env, preds)?,
        Fo::Forall(v, a) | Fo::Exists(v, a) => {
            let universal = matches!(f, Fo::Forall(..));
            for w in 0..frame.size() {
                env.push((*v, w));
                let r = eval_fo_with(frame, a, env, preds);
                env.pop();
                if r? != universal {
                    return Some(!universal);
                }
            }
            universal
        }
    })
}

/// Evaluate a formula without propositional predicates.
pub fn eval_fo(frame: &RmFrame, f: &Fo, env: &[(Var, usize)]) -> Option<bool> {
    let mut env = env.to_vec();
    eval_fo_with(frame, f, &mut env, &|_| None)
}

impl fmt::Display for Fo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::serialize::tex(self, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Var::*;

    fn x(k: u32) -> Term {
        Term::Var(X(k))
    }
    fn y(k: u32) -> Term {
        Term::Var(Y(k))
    }

    #[test]
    fn pulls_existential() {
        let raw = Fo::implies(
            Fo::forall(X(2), Fo::implies(Fo::r(x(0), x(1), x(2)), Fo::not(Fo::r(x(0), x(2), y(1))))),
            Fo::not(Fo::r(x(0), x(1), y(1))),
        );
        let want = Fo::implies(
            Fo::r(x(0), x(1), y(1)),
            Fo::exists(X(2), Fo::and(Fo::r(x(0), x(1), x(2)), Fo::r(x(0), x(2), y(1)))),
        );
        assert_eq!(fo_simplify(&raw), want);
    }

    #[test]
    fn contraposes_negations() {
        let raw = Fo::forall(X(2), Fo::implies(Fo::not(Fo::leq(x(2), y(2))), Fo::not(Fo::r(x(2), x(1), y(1)))));
        let want = Fo::forall(X(2), Fo::implies(Fo::r(x(2), x(1), y(1)), Fo::leq(x(2), y(2))));
        assert_eq!(fo_simplify(&raw), want);
    }

    #[test]
    fn absorbs_constants() {
        let f = Fo::and(Fo::True, Fo::or(Fo::False, Fo::not(Fo::not(Fo::o(x(0))))));
        assert_eq!(fo_simplify(&f), Fo::o(x(0)));
        assert_eq!(fo_simplify(&Fo::implies(Fo::o(x(0)), Fo::o(x(0)))), Fo::True);
        assert_eq!(fo_simplify(&Fo::forall(X(3), Fo::o(x(0)))), Fo::o(x(0)));
        assert_eq!(fo_simplify(&Fo::implies(Fo::o(x(1)), Fo::False)), Fo::not(Fo::o(x(1))));
    }

    #[test]
    fn capture_blocks_pull() {
        // the bound variable occurs in K
        let raw = Fo::implies(
            Fo::forall(X(2), Fo::implies(Fo::o(x(2)), Fo::not(Fo::o(x(0))))),
            Fo::not(Fo::o(x(2))),
        );
        assert!(matches!(fo_simplify(&raw), Fo::Implies(..)));
        assert!(matches!(fo_simplify(&raw), Fo::Implies(a, _) if matches!(*a, Fo::Forall(..))));
    }

    #[test]
    fn alpha_equivalence() {
        let a = Fo::exists(X(2), Fo::r(x(0), x(2), x(2)));
        let b = Fo::exists(Z(7), Fo::r(x(0), Term::Var(Z(7)), Term::Var(Z(7))));
        assert!(alpha_eq(&a, &b));
        let c = Fo::exists(Z(7), Fo::r(x(0), Term::Var(Z(7)), x(2)));
        assert!(!alpha_eq(&a, &c));
        // free variables must match exactly
        assert!(!alpha_eq(&Fo::o(x(0)), &Fo::o(x(1))));
        // a free variable in one side cannot match a bound one in the other
        let d = Fo::exists(X(1), Fo::leq(x(1), x(0)));
        let e = Fo::exists(X(0), Fo::leq(x(0), x(0)));
        assert!(!alpha_eq(&d, &e));
    }

    #[test]
    fn closure_order() {
        let f = Fo::r(y(1), x(1), x(0)).close();
        assert_eq!(f, Fo::forall(X(0), Fo::forall(X(1), Fo::forall(Y(1), Fo::r(y(1), x(1), x(0))))));
        assert!(f.free_vars().is_empty());
    }
}
