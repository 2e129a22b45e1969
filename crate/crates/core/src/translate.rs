//! Translation of pure inequalities into the first-order frame language,
//! and the standard translation of arbitrary formulas.

use crate::calculus::{Inequality, QuasiInequality};
use crate::error::TranslateError;
use crate::fo::{Fo, Term, Var};
use crate::formula::{Atom, AtomKind, BinOp, Formula, UnOp};

/// Which clause of the translation handles an inequality. Numbered
/// clauses follow the priority order; `Gap*` cover nominal-left shapes the
/// numbered list leaves to the generic clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrRule {
    Numbered(u8),
    GapNegFlat,
    GapNegSharp,
    GapCoImp,
}

/// Number of the generic fallback clause.
pub const GENERIC: u8 = 31;

fn nominal(f: &Formula) -> Option<u32> {
    match f {
        Formula::Atom(a) if a.kind == AtomKind::Nominal => Some(a.index),
        _ => None,
    }
}

fn conominal(f: &Formula) -> Option<u32> {
    match f {
        Formula::Atom(a) if a.kind == AtomKind::CoNominal => Some(a.index),
        _ => None,
    }
}

fn x(k: u32) -> Term {
    Term::Var(Var::X(k))
}

fn y(k: u32) -> Term {
    Term::Var(Var::Y(k))
}

/// Pick the first clause whose pattern matches.
pub fn classify(lhs: &Formula, rhs: &Formula) -> Result<TrRule, TranslateError> {
    use Formula::*;
    if !lhs.is_pure() || !rhs.is_pure() {
        return Err(TranslateError::NotPure(Inequality::new(lhs.clone(), rhs.clone()).to_string()));
    }
    let n = TrRule::Numbered;
    if nominal(lhs).is_some() {
        let rule = match rhs {
            _ if nominal(rhs).is_some() => n(1),
            _ if conominal(rhs).is_some() => n(2),
            Const(crate::formula::Const::Truth) => n(3),
            Const(crate::formula::Const::Bottom) => n(4),
            Const(crate::formula::Const::Top) => n(5),
            Unary(UnOp::Neg, a) if conominal(a).is_some() => n(6),
            Unary(UnOp::Neg, a) if nominal(a).is_some() => n(7),
            Unary(UnOp::Neg, _) => n(8),
            Binary(BinOp::Fusion, a, b) if nominal(a).is_some() && nominal(b).is_some() => n(9),
            Binary(BinOp::Fusion, a, _) if nominal(a).is_some() => n(10),
            Binary(BinOp::Fusion, _, _) => n(11),
            Binary(BinOp::RelImp, _, _) => n(12),
            Binary(BinOp::RightRes, _, _) => n(13),
            Binary(BinOp::IntImp, _, _) => n(14),
            Binary(BinOp::And, _, _) => n(15),
            Binary(BinOp::Or, _, _) => n(16),
            Unary(UnOp::NegFlat, _) => TrRule::GapNegFlat,
            Unary(UnOp::NegSharp, _) => TrRule::GapNegSharp,
            Binary(BinOp::CoImp, _, _) => TrRule::GapCoImp,
            Atom(_) => unreachable!("pure atoms are nominals or co-nominals"),
        };
        return Ok(rule);
    }
    if conominal(rhs).is_some() {
        let rule = match lhs {
            _ if conominal(lhs).is_some() => Some(17),
            Const(crate::formula::Const::Truth) => Some(18),
            Const(crate::formula::Const::Bottom) => Some(19),
            Const(crate::formula::Const::Top) => Some(20),
            Unary(UnOp::Neg, a) if conominal(a).is_some() => Some(21),
            Unary(UnOp::Neg, a) if nominal(a).is_some() => Some(22),
            Unary(UnOp::Neg, _) => Some(23),
            Binary(BinOp::Fusion, a, b) if nominal(a).is_some() && nominal(b).is_some() => Some(24),
            Binary(BinOp::Fusion, a, _) if nominal(a).is_some() => Some(25),
            Binary(BinOp::Fusion, _, _) => Some(26),
            Binary(BinOp::IntImp, _, _) => Some(27),
            Binary(BinOp::CoImp, _, _) => Some(28),
            Binary(BinOp::And, _, _) => Some(29),
            Binary(BinOp::Or, _, _) => Some(30),
            _ => None,
        };
        if let Some(k) = rule {
            return Ok(n(k));
        }
    }
    Ok(n(GENERIC))
}

/// Stateful translator: a supply of fresh world variables and a log of
/// clauses used outside the numbered list.
#[derive(Debug, Default)]
pub struct Translator {
    next: u32,
    pub fallthroughs: Vec<(TrRule, String)>,
}

impl Translator {
    /// Fresh variables start above every nominal index in `qi`.
    pub fn for_quasi(qi: &QuasiInequality) -> Self {
        let next = qi.atoms().iter().filter(|a| a.is_nominal()).map(|a| a.index + 1).max().unwrap_or(0);
        Translator { next, fallthroughs: Vec::new() }
    }

    pub fn starting_at(next: u32) -> Self {
        Translator { next, fallthroughs: Vec::new() }
    }

    fn fresh(&mut self) -> (u32, Formula) {
        let k = self.next;
        self.next += 1;
        (k, Formula::nominal(k))
    }

    pub fn tr(&mut self, ineq: &Inequality) -> Result<Fo, TranslateError> {
        self.tr_sides(&ineq.lhs, &ineq.rhs)
    }

    fn tr_sides(&mut self, lhs: &Formula, rhs: &Formula) -> Result<Fo, TranslateError> {
        use Formula::*;
        let rule = classify(lhs, rhs)?;
        let i = nominal(lhs);
        let m = conominal(rhs);
        let sub = |f: &Formula, k: usize| -> Formula {
            match (f, k) {
                (Unary(_, a), 0) => (**a).clone(),
                (Binary(_, a, _), 0) => (**a).clone(),
                (Binary(_, _, b), 1) => (**b).clone(),
                _ => unreachable!("classified shape"),
            }
        };
        let idx = |f: &Formula| match f {
            Atom(a) => a.index,
            _ => unreachable!("classified shape"),
        };
        let leq = Fo::leq;
        Ok(match rule {
            TrRule::Numbered(1) => leq(x(idx(rhs)), x(i.unwrap())),
            TrRule::Numbered(2) => Fo::not(leq(x(i.unwrap()), y(m.unwrap()))),
            TrRule::Numbered(3) => Fo::o(x(i.unwrap())),
            TrRule::Numbered(4) => Fo::False,
            TrRule::Numbered(5) => Fo::True,
            TrRule::Numbered(6) => leq(Term::star(x(i.unwrap())), y(idx(&sub(rhs, 0)))),
            TrRule::Numbered(7) => Fo::not(leq(x(idx(&sub(rhs, 0))), Term::star(x(i.unwrap())))),
            TrRule::Numbered(8) => {
                let (j, jf) = self.fresh();
                let body = self.tr_sides(&jf, &sub(rhs, 0))?;
                Fo::forall(Var::X(j), Fo::implies(body, Fo::not(leq(x(j), Term::star(x(i.unwrap()))))))
            }
            TrRule::Numbered(9) => Fo::r(x(idx(&sub(rhs, 0))), x(idx(&sub(rhs, 1))), x(i.unwrap())),
            TrRule::Numbered(10) => {
                let (k, kf) = self.fresh();
                let body = self.tr_sides(&kf, &sub(rhs, 1))?;
                Fo::exists(Var::X(k), Fo::and(body, Fo::r(x(idx(&sub(rhs, 0))), x(k), x(i.unwrap()))))
            }
            TrRule::Numbered(11) => {
                let (j, jf) = self.fresh();
                let first = self.tr_sides(&jf, &sub(rhs, 0))?;
                let second = self.tr_sides(lhs, &Formula::fusion(jf, sub(rhs, 1)))?;
                Fo::exists(Var::X(j), Fo::and(first, second))
            }
            TrRule::Numbered(12) => self.tr_sides(&Formula::fusion(lhs.clone(), sub(rhs, 0)), &sub(rhs, 1))?,
            TrRule::Numbered(13) => self.tr_sides(&Formula::fusion(sub(rhs, 0), lhs.clone()), &sub(rhs, 1))?,
            TrRule::Numbered(14) => self.tr_sides(&Formula::and(lhs.clone(), sub(rhs, 0)), &sub(rhs, 1))?,
            TrRule::Numbered(15) => Fo::and(self.tr_sides(lhs, &sub(rhs, 0))?, self.tr_sides(lhs, &sub(rhs, 1))?),
            TrRule::Numbered(16) => Fo::or(self.tr_sides(lhs, &sub(rhs, 0))?, self.tr_sides(lhs, &sub(rhs, 1))?),
            TrRule::Numbered(17) => leq(y(m.unwrap()), y(idx(lhs))),
            TrRule::Numbered(18) => Fo::not(Fo::o(y(m.unwrap()))),
            TrRule::Numbered(19) => Fo::True,
            TrRule::Numbered(20) => Fo::False,
            TrRule::Numbered(21) => Fo::not(leq(Term::star(y(m.unwrap())), y(idx(&sub(lhs, 0))))),
            TrRule::Numbered(22) => leq(x(idx(&sub(lhs, 0))), Term::star(y(m.unwrap()))),
            TrRule::Numbered(23) => {
                let (j, jf) = self.fresh();
                let body = self.tr_sides(&jf, &sub(lhs, 0))?;
                Fo::exists(Var::X(j), Fo::and(body, leq(x(j), Term::star(y(m.unwrap())))))
            }
            TrRule::Numbered(24) => Fo::not(Fo::r(x(idx(&sub(lhs, 0))), x(idx(&sub(lhs, 1))), y(m.unwrap()))),
            TrRule::Numbered(25) => {
                let (j, jf) = self.fresh();
                let body = self.tr_sides(&jf, &sub(lhs, 1))?;
                Fo::forall(
                    Var::X(j),
                    Fo::implies(body, Fo::not(Fo::r(x(idx(&sub(lhs, 0))), x(j), y(m.unwrap())))),
                )
            }
            TrRule::Numbered(26) => {
                let (k, kf) = self.fresh();
                let first = self.tr_sides(&kf, &sub(lhs, 0))?;
                let second = self.tr_sides(&Formula::fusion(kf, sub(lhs, 1)), rhs)?;
                Fo::forall(Var::X(k), Fo::implies(first, second))
            }
            TrRule::Numbered(27) => {
                let (k, kf) = self.fresh();
                let first = self.tr_sides(&kf, lhs)?;
                let second = self.tr_sides(&kf, rhs)?;
                Fo::forall(Var::X(k), Fo::implies(first, second))
            }
            TrRule::Numbered(28) => self.tr_sides(&sub(lhs, 0), &Formula::or(sub(lhs, 1), rhs.clone()))?,
            TrRule::Numbered(29) => Fo::or(self.tr_sides(&sub(lhs, 0), rhs)?, self.tr_sides(&sub(lhs, 1), rhs)?),
            TrRule::Numbered(30) => Fo::and(self.tr_sides(&sub(lhs, 0), rhs)?, self.tr_sides(&sub(lhs, 1), rhs)?),
            TrRule::Numbered(_) => {
                let (j, jf) = self.fresh();
                let first = self.tr_sides(&jf, lhs)?;
                let second = self.tr_sides(&jf, rhs)?;
                Fo::forall(Var::X(j), Fo::implies(first, second))
            }
            gap => {
                self.fallthroughs.push((gap, Inequality::new(lhs.clone(), rhs.clone()).to_string()));
                let xi = x(i.unwrap());
                let (j, jf) = self.fresh();
                match gap {
                    TrRule::GapNegFlat => {
                        let body = self.tr_sides(&jf, &sub(rhs, 0))?;
                        Fo::exists(Var::X(j), Fo::and(leq(Term::star(x(j)), xi), Fo::not(body)))
                    }
                    TrRule::GapNegSharp => {
                        let body = self.tr_sides(&jf, &sub(rhs, 0))?;
                        Fo::forall(Var::X(j), Fo::implies(body, Fo::not(leq(xi, Term::star(x(j))))))
                    }
                    _ => {
                        let a = self.tr_sides(&jf, &sub(rhs, 0))?;
                        let b = self.tr_sides(&jf, &sub(rhs, 1))?;
                        Fo::exists(Var::X(j), Fo::and(leq(x(j), xi), Fo::and(a, Fo::not(b))))
                    }
                }
            }
        })
    }
}

/// Translate one pure inequality; fresh variables start above its
/// nominals.
pub fn tr(ineq: &Inequality) -> Result<Fo, TranslateError> {
    let qi = QuasiInequality::new(vec![], ineq.clone());
    Translator::for_quasi(&qi).tr(ineq)
}

/// Premises imply conclusion, universally closed.
pub fn tr_quasi(qi: &QuasiInequality) -> Result<Fo, TranslateError> {
    let mut t = Translator::for_quasi(qi);
    tr_quasi_with(&mut t, qi)
}

pub fn tr_quasi_with(t: &mut Translator, qi: &QuasiInequality) -> Result<Fo, TranslateError> {
    let premises = qi.premises.iter().map(|p| t.tr(p)).collect::<Result<Vec<_>, _>>()?;
    let conclusion = t.tr(&qi.conclusion)?;
    let body = if premises.is_empty() { conclusion } else { Fo::implies(Fo::conj(premises), conclusion) };
    Ok(body.close())
}

struct St {
    next: u32,
}

impl St {
    fn fresh(&mut self) -> Var {
        let v = Var::Z(self.next);
        self.next += 1;
        v
    }

    fn st(&mut self, phi: &Formula, w: &Term) -> Fo {
        let z = |v: Var| Term::Var(v);
        match phi {
            Formula::Atom(a) => atom_st(a, w),
            Formula::Const(crate::formula::Const::Truth) => Fo::O(w.clone()),
            Formula::Const(crate::formula::Const::Top) => Fo::Eq(w.clone(), w.clone()),
            Formula::Const(crate::formula::Const::Bottom) => Fo::not(Fo::Eq(w.clone(), w.clone())),
            Formula::Unary(op, a) => {
                let v = self.fresh();
                let inner = Fo::not(self.st(a, &z(v)));
                match op {
                    UnOp::Neg => Fo::exists(v, Fo::and(Fo::eq(z(v), Term::star(w.clone())), inner)),
                    UnOp::NegFlat => Fo::exists(v, Fo::and(Fo::leq(Term::star(z(v)), w.clone()), inner)),
                    UnOp::NegSharp => Fo::forall(v, Fo::implies(Fo::leq(w.clone(), Term::star(z(v))), inner)),
                }
            }
            Formula::Binary(op, a, b) => match op {
                BinOp::And => Fo::and(self.st(a, w), self.st(b, w)),
                BinOp::Or => Fo::or(self.st(a, w), self.st(b, w)),
                BinOp::Fusion => {
                    let (u, v) = (self.fresh(), self.fresh());
                    let body = Fo::and(Fo::r(z(u), z(v), w.clone()), Fo::and(self.st(a, &z(u)), self.st(b, &z(v))));
                    Fo::exists(u, Fo::exists(v, body))
                }
                BinOp::RelImp | BinOp::RightRes => {
                    let (u, v) = (self.fresh(), self.fresh());
                    let rel = if *op == BinOp::RelImp {
                        Fo::r(w.clone(), z(u), z(v))
                    } else {
                        Fo::r(z(u), w.clone(), z(v))
                    };
                    let body = Fo::implies(Fo::and(rel, self.st(a, &z(u))), self.st(b, &z(v)));
                    Fo::forall(u, Fo::forall(v, body))
                }
                BinOp::CoImp => {
                    let u = self.fresh();
                    let body = Fo::and(Fo::leq(z(u), w.clone()), Fo::and(self.st(a, &z(u)), Fo::not(self.st(b, &z(u)))));
                    Fo::exists(u, body)
                }
                BinOp::IntImp => {
                    let u = self.fresh();
                    let body = Fo::implies(Fo::and(Fo::leq(w.clone(), z(u)), self.st(a, &z(u))), self.st(b, &z(u)));
                    Fo::forall(u, body)
                }
            },
        }
    }
}

fn atom_st(a: &Atom, w: &Term) -> Fo {
    match a.kind {
        AtomKind::PropVar => Fo::Pred(a.clone(), w.clone()),
        AtomKind::Nominal => Fo::leq(x(a.index), w.clone()),
        AtomKind::CoNominal => Fo::not(Fo::leq(w.clone(), y(a.index))),
    }
}

/// Standard translation of `phi` at the world term `w`; bound variables
/// are `Z(0)`, `Z(1)`, ... and must not occur in `w`.
pub fn st(phi: &Formula, w: &Term) -> Fo {
    St { next: 0 }.st(phi, w)
}

/// `∀z (ST_z(lhs) → ST_z(rhs))`.
pub fn st_inequality(ineq: &Inequality) -> Fo {
    let mut s = St { next: 0 };
    let z = s.fresh();
    let l = s.st(&ineq.lhs, &Term::Var(z));
    let r = s.st(&ineq.rhs, &Term::Var(z));
    Fo::forall(z, Fo::implies(l, r))
}

/// Standard-translation counterpart of [`tr_quasi`].
pub fn st_quasi(qi: &QuasiInequality) -> Fo {
    let premises: Vec<Fo> = qi.premises.iter().map(st_inequality).collect();
    let conclusion = st_inequality(&qi.conclusion);
    let body = if premises.is_empty() { conclusion } else { Fo::implies(Fo::conj(premises), conclusion) };
    body.close()
}
