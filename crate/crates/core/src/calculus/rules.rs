//! Individual rewrite rules. Each rule is a partial function on
//! quasi-inequalities and reports why it does not apply.

use crate::calculus::{Inequality, QuasiInequality};
use crate::error::NotApplicable;
use crate::formula::{Atom, BinOp, Formula, Path, Sign, UnOp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Lhs,
    Rhs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Down,
    Up,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ApproxRule {
    ImpL,
    ImpR,
    FusionL,
    FusionR,
    NegL,
    NegR,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResRule {
    Or,
    And,
    Imp,
    Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AdjRule {
    Or,
    And,
    NegL,
    NegR,
}

impl ApproxRule {
    pub fn name(self) -> &'static str {
        match self {
            ApproxRule::ImpL => "→Appr-L",
            ApproxRule::ImpR => "→Appr-R",
            ApproxRule::FusionL => "∘Appr-L",
            ApproxRule::FusionR => "∘Appr-R",
            ApproxRule::NegL => "∼Appr-L",
            ApproxRule::NegR => "∼Appr-R",
        }
    }
}

impl ResRule {
    pub fn name(self) -> &'static str {
        match self {
            ResRule::Or => "∨Res",
            ResRule::And => "∧Res",
            ResRule::Imp => "→Res",
            ResRule::Tail => "↢Res",
        }
    }
}

impl AdjRule {
    pub fn name(self) -> &'static str {
        match self {
            AdjRule::Or => "∨Adj",
            AdjRule::And => "∧Adj",
            AdjRule::NegL => "∼Adj-L",
            AdjRule::NegR => "∼Adj-R",
        }
    }
}

fn premise<'a>(qi: &'a QuasiInequality, idx: usize, rule: &str) -> Result<&'a Inequality, NotApplicable> {
    qi.premises
        .get(idx)
        .ok_or_else(|| NotApplicable::new(rule, format!("no premise {idx}")))
}

fn with_premise(qi: &QuasiInequality, idx: usize, ineq: Inequality) -> QuasiInequality {
    let mut out = qi.clone();
    out.premises[idx] = ineq;
    out
}

fn binary(f: &Formula, op: BinOp) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Binary(o, a, b) if *o == op => Some((a, b)),
        _ => None,
    }
}

fn unary(f: &Formula, op: UnOp) -> Option<&Formula> {
    match f {
        Formula::Unary(o, a) if *o == op => Some(a),
        _ => None,
    }
}

fn check_fresh(qi: &QuasiInequality, a: &Atom, rule: &str) -> Result<(), NotApplicable> {
    if qi.inequalities().any(|i| i.contains(a)) {
        Err(NotApplicable::new(rule, format!("{a} is not fresh")))
    } else {
        Ok(())
    }
}

/// `{⊢ φ ≤ ψ}` becomes `{i ≤ φ, ψ ≤ m ⊢ i ≤ m}`.
pub fn first_approximation(
    qi: &QuasiInequality,
    nominal: &Atom,
    conominal: &Atom,
) -> Result<QuasiInequality, NotApplicable> {
    let rule = "first approximation";
    if !qi.premises.is_empty() {
        return Err(NotApplicable::new(rule, "premise list is not empty"));
    }
    if !nominal.is_nominal() || !conominal.is_conominal() {
        return Err(NotApplicable::new(rule, "needs a nominal and a co-nominal"));
    }
    check_fresh(qi, nominal, rule)?;
    check_fresh(qi, conominal, rule)?;
    let i = Formula::Atom(nominal.clone());
    let m = Formula::Atom(conominal.clone());
    Ok(QuasiInequality::new(
        vec![
            Inequality::new(i.clone(), qi.conclusion.lhs.clone()),
            Inequality::new(qi.conclusion.rhs.clone(), m.clone()),
        ],
        Inequality::new(i, m),
    ))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Req {
    Join,
    Meet,
}

impl Req {
    fn flip(self) -> Req {
        match self {
            Req::Join => Req::Meet,
            Req::Meet => Req::Join,
        }
    }
}

/// First position (pre-order) where the formula can be split into a join
/// (`Req::Join`) or meet (`Req::Meet`) of two formulas.
fn find_split(f: &Formula, req: Req, path: &mut Path) -> Option<Path> {
    let child = |k: u8, c: &Formula, r: Req, path: &mut Path| {
        path.push(k);
        let found = find_split(c, r, path);
        path.pop();
        found
    };
    match (f, req) {
        (Formula::Binary(BinOp::Or, _, _), Req::Join) | (Formula::Binary(BinOp::And, _, _), Req::Meet) => {
            Some(path.clone())
        }
        (Formula::Binary(BinOp::Or | BinOp::And, a, b), r) => {
            child(0, a, r, path).or_else(|| child(1, b, r, path))
        }
        (Formula::Unary(UnOp::Neg, a), r) => child(0, a, r.flip(), path),
        (Formula::Unary(UnOp::NegFlat, a), Req::Join) => child(0, a, Req::Meet, path),
        (Formula::Unary(UnOp::NegSharp, a), Req::Meet) => child(0, a, Req::Join, path),
        (Formula::Binary(BinOp::Fusion, a, b), Req::Join) => {
            child(0, a, Req::Join, path).or_else(|| child(1, b, Req::Join, path))
        }
        (Formula::Binary(BinOp::RelImp | BinOp::IntImp | BinOp::RightRes, a, b), Req::Meet)
        | (Formula::Binary(BinOp::CoImp, a, b), Req::Join) => {
            child(0, a, Req::Join, path).or_else(|| child(1, b, Req::Meet, path))
        }
        _ => None,
    }
}

/// Split the left side at a join or the right side at a meet.
pub fn split_inequality(ineq: &Inequality, side: Side) -> Option<(Inequality, Inequality)> {
    let (f, req) = match side {
        Side::Lhs => (&ineq.lhs, Req::Join),
        Side::Rhs => (&ineq.rhs, Req::Meet),
    };
    let path = find_split(f, req, &mut Vec::new())?;
    let Some(Formula::Binary(_, a, b)) = f.subformula(&path) else {
        unreachable!("split target is binary")
    };
    let fa = f.replace_at(&path, (**a).clone());
    let fb = f.replace_at(&path, (**b).clone());
    Some(match side {
        Side::Lhs => (Inequality::new(fa, ineq.rhs.clone()), Inequality::new(fb, ineq.rhs.clone())),
        Side::Rhs => (Inequality::new(ineq.lhs.clone(), fa), Inequality::new(ineq.lhs.clone(), fb)),
    })
}

/// Splitting keeps the first part in place and inserts the second right
/// after it.
pub fn split(qi: &QuasiInequality, idx: usize, side: Side) -> Result<QuasiInequality, NotApplicable> {
    let rule = "split";
    let ineq = premise(qi, idx, rule)?;
    let (a, b) = split_inequality(ineq, side).ok_or_else(|| NotApplicable::new(rule, "no splittable position"))?;
    let mut out = with_premise(qi, idx, a);
    out.premises.insert(idx + 1, b);
    Ok(out)
}

/// Approximation rules. The rewritten premise stays in its slot and the
/// extracted premise is appended.
pub fn approximate(
    qi: &QuasiInequality,
    idx: usize,
    rule: ApproxRule,
    fresh: &Atom,
) -> Result<QuasiInequality, NotApplicable> {
    let name = rule.name();
    let ineq = premise(qi, idx, name)?;
    check_fresh(qi, fresh, name)?;
    let want_nominal = matches!(rule, ApproxRule::ImpL | ApproxRule::FusionL | ApproxRule::FusionR | ApproxRule::NegL);
    if want_nominal != fresh.is_nominal() || (!want_nominal && !fresh.is_conominal()) {
        return Err(NotApplicable::new(name, "fresh atom has the wrong kind"));
    }
    let x = Formula::Atom(fresh.clone());
    let not_special = |f: &Formula| {
        if f.is_special() {
            Err(NotApplicable::new(name, "argument is already a nominal or co-nominal"))
        } else {
            Ok(())
        }
    };
    let (rewritten, extracted) = match rule {
        ApproxRule::ImpL | ApproxRule::ImpR => {
            if !ineq.rhs.is_conominal() {
                return Err(NotApplicable::new(name, "right side is not a co-nominal"));
            }
            let (a, b) = binary(&ineq.lhs, BinOp::RelImp).ok_or_else(|| NotApplicable::new(name, "left side is not an implication"))?;
            if rule == ApproxRule::ImpL {
                not_special(a)?;
                (Inequality::new(Formula::imp(x.clone(), b.clone()), ineq.rhs.clone()), Inequality::new(x, a.clone()))
            } else {
                not_special(b)?;
                (Inequality::new(Formula::imp(a.clone(), x.clone()), ineq.rhs.clone()), Inequality::new(b.clone(), x))
            }
        }
        ApproxRule::FusionL | ApproxRule::FusionR => {
            if !ineq.lhs.is_nominal() {
                return Err(NotApplicable::new(name, "left side is not a nominal"));
            }
            let (a, b) = binary(&ineq.rhs, BinOp::Fusion).ok_or_else(|| NotApplicable::new(name, "right side is not a fusion"))?;
            if rule == ApproxRule::FusionL {
                not_special(a)?;
                (Inequality::new(ineq.lhs.clone(), Formula::fusion(x.clone(), b.clone())), Inequality::new(x, a.clone()))
            } else {
                not_special(b)?;
                (Inequality::new(ineq.lhs.clone(), Formula::fusion(a.clone(), x.clone())), Inequality::new(x, b.clone()))
            }
        }
        ApproxRule::NegL => {
            if !ineq.rhs.is_conominal() {
                return Err(NotApplicable::new(name, "right side is not a co-nominal"));
            }
            let a = unary(&ineq.lhs, UnOp::Neg).ok_or_else(|| NotApplicable::new(name, "left side is not a negation"))?;
            not_special(a)?;
            (Inequality::new(Formula::neg(x.clone()), ineq.rhs.clone()), Inequality::new(x, a.clone()))
        }
        ApproxRule::NegR => {
            if !ineq.lhs.is_nominal() {
                return Err(NotApplicable::new(name, "left side is not a nominal"));
            }
            let a = unary(&ineq.rhs, UnOp::Neg).ok_or_else(|| NotApplicable::new(name, "right side is not a negation"))?;
            not_special(a)?;
            (Inequality::new(ineq.lhs.clone(), Formula::neg(x.clone())), Inequality::new(a.clone(), x))
        }
    };
    let mut out = with_premise(qi, idx, rewritten);
    out.premises.push(extracted);
    Ok(out)
}

/// Residuation moves on one premise. `commute` swaps the arguments of a
/// commutative connective before the move.
pub fn residuate(
    qi: &QuasiInequality,
    idx: usize,
    rule: ResRule,
    dir: Direction,
    commute: bool,
) -> Result<QuasiInequality, NotApplicable> {
    let name = rule.name();
    let ineq = premise(qi, idx, name)?;
    if commute && !matches!(rule, ResRule::Or | ResRule::And) {
        return Err(NotApplicable::new(name, "connective is not commutative"));
    }
    let sw = |a: &Formula, b: &Formula| if commute { (b.clone(), a.clone()) } else { (a.clone(), b.clone()) };
    let miss = |what: &str| NotApplicable::new(name, format!("{what} has the wrong shape"));
    let (l, r) = (&ineq.lhs, &ineq.rhs);
    let new = match (rule, dir) {
        // φ ≤ χ ∨ ψ  ⟺  φ −< χ ≤ ψ
        (ResRule::Or, Direction::Down) => {
            let (a, b) = binary(r, BinOp::Or).ok_or_else(|| miss("right side"))?;
            let (a, b) = sw(a, b);
            Inequality::new(Formula::coimp(l.clone(), a), b)
        }
        (ResRule::Or, Direction::Up) => {
            let (a, b) = binary(l, BinOp::CoImp).ok_or_else(|| miss("left side"))?;
            let (x, y) = sw(b, r);
            Inequality::new(a.clone(), Formula::or(x, y))
        }
        // φ ∧ χ ≤ ψ  ⟺  φ ≤ χ ⇒ ψ
        (ResRule::And, Direction::Down) => {
            let (a, b) = binary(l, BinOp::And).ok_or_else(|| miss("left side"))?;
            let (a, b) = sw(a, b);
            Inequality::new(a, Formula::int_imp(b, r.clone()))
        }
        (ResRule::And, Direction::Up) => {
            let (a, b) = binary(r, BinOp::IntImp).ok_or_else(|| miss("right side"))?;
            let (x, y) = sw(l, a);
            Inequality::new(Formula::and(x, y), b.clone())
        }
        // φ ≤ χ → ψ  ⟺  φ ∘ χ ≤ ψ
        (ResRule::Imp, Direction::Down) => {
            let (a, b) = binary(r, BinOp::RelImp).ok_or_else(|| miss("right side"))?;
            Inequality::new(Formula::fusion(l.clone(), a.clone()), b.clone())
        }
        (ResRule::Imp, Direction::Up) => {
            let (a, b) = binary(l, BinOp::Fusion).ok_or_else(|| miss("left side"))?;
            Inequality::new(a.clone(), Formula::imp(b.clone(), r.clone()))
        }
        // ψ ≤ φ ↢ χ  ⟺  φ ∘ ψ ≤ χ
        (ResRule::Tail, Direction::Down) => {
            let (a, b) = binary(r, BinOp::RightRes).ok_or_else(|| miss("right side"))?;
            Inequality::new(Formula::fusion(a.clone(), l.clone()), b.clone())
        }
        (ResRule::Tail, Direction::Up) => {
            let (a, b) = binary(l, BinOp::Fusion).ok_or_else(|| miss("left side"))?;
            Inequality::new(b.clone(), Formula::right_res(a.clone(), r.clone()))
        }
    };
    Ok(with_premise(qi, idx, new))
}

/// Adjunction moves. Splitting moves (`∨Adj`, `∧Adj` down) insert the
/// second part right after `idx`; merging moves (`∨Adj`, `∧Adj` up) combine
/// premise `idx` with premise `other`, keeping the result at `idx`.
pub fn adjoin(
    qi: &QuasiInequality,
    idx: usize,
    rule: AdjRule,
    dir: Direction,
    other: Option<usize>,
    commute: bool,
) -> Result<QuasiInequality, NotApplicable> {
    let name = rule.name();
    let ineq = premise(qi, idx, name)?;
    let miss = |what: &str| NotApplicable::new(name, format!("{what} has the wrong shape"));
    if commute && !matches!(rule, AdjRule::Or | AdjRule::And) {
        return Err(NotApplicable::new(name, "connective is not commutative"));
    }
    if other.is_some() != (dir == Direction::Up && matches!(rule, AdjRule::Or | AdjRule::And)) {
        return Err(NotApplicable::new(name, "second premise given to a one-premise move"));
    }
    let (l, r) = (&ineq.lhs, &ineq.rhs);
    match (rule, dir) {
        (AdjRule::Or | AdjRule::And, Direction::Down) => {
            let (a, b) = if rule == AdjRule::Or {
                let (a, b) = binary(l, BinOp::Or).ok_or_else(|| miss("left side"))?;
                (Inequality::new(a.clone(), r.clone()), Inequality::new(b.clone(), r.clone()))
            } else {
                let (a, b) = binary(r, BinOp::And).ok_or_else(|| miss("right side"))?;
                (Inequality::new(l.clone(), a.clone()), Inequality::new(l.clone(), b.clone()))
            };
            let (a, b) = if commute { (b, a) } else { (a, b) };
            let mut out = with_premise(qi, idx, a);
            out.premises.insert(idx + 1, b);
            Ok(out)
        }
        (AdjRule::Or | AdjRule::And, Direction::Up) => {
            let j = other.unwrap();
            if j == idx {
                return Err(NotApplicable::new(name, "cannot merge a premise with itself"));
            }
            let second = premise(qi, j, name)?;
            let merged = if rule == AdjRule::Or {
                if second.rhs != *r {
                    return Err(NotApplicable::new(name, "right sides differ"));
                }
                let (a, b) = if commute { (&second.lhs, l) } else { (l, &second.lhs) };
                Inequality::new(Formula::or(a.clone(), b.clone()), r.clone())
            } else {
                if second.lhs != *l {
                    return Err(NotApplicable::new(name, "left sides differ"));
                }
                let (a, b) = if commute { (&second.rhs, r) } else { (r, &second.rhs) };
                Inequality::new(l.clone(), Formula::and(a.clone(), b.clone()))
            };
            let mut out = with_premise(qi, idx, merged);
            out.premises.remove(j);
            Ok(out)
        }
        // ∼φ ≤ ψ  ⟺  ∼♭ψ ≤ φ
        (AdjRule::NegL, Direction::Down) => {
            let a = unary(l, UnOp::Neg).ok_or_else(|| miss("left side"))?;
            Ok(with_premise(qi, idx, Inequality::new(Formula::neg_flat(r.clone()), a.clone())))
        }
        (AdjRule::NegL, Direction::Up) => {
            let a = unary(l, UnOp::NegFlat).ok_or_else(|| miss("left side"))?;
            Ok(with_premise(qi, idx, Inequality::new(Formula::neg(r.clone()), a.clone())))
        }
        // φ ≤ ∼ψ  ⟺  ψ ≤ ∼♯φ
        (AdjRule::NegR, Direction::Down) => {
            let a = unary(r, UnOp::Neg).ok_or_else(|| miss("right side"))?;
            Ok(with_premise(qi, idx, Inequality::new(a.clone(), Formula::neg_sharp(l.clone()))))
        }
        (AdjRule::NegR, Direction::Up) => {
            let a = unary(r, UnOp::NegSharp).ok_or_else(|| miss("right side"))?;
            Ok(with_premise(qi, idx, Inequality::new(a.clone(), Formula::neg(l.clone()))))
        }
    }
}

/// Side conditions shared by the Ackermann and monotone rules: every
/// premise other than `solved` has sign `-s` in `p`, the conclusion has
/// sign `s`.
fn check_ackermann_shape(
    qi: &QuasiInequality,
    p: &Atom,
    sign: Sign,
    solved: Option<usize>,
    rule: &str,
) -> Result<(), NotApplicable> {
    for (k, ineq) in qi.premises.iter().enumerate() {
        if Some(k) != solved && !ineq.has_sign(p, sign.flip()) {
            return Err(NotApplicable::new(rule, format!("premise {k} has the wrong polarity in {p}")));
        }
    }
    if !qi.conclusion.has_sign(p, sign) {
        return Err(NotApplicable::new(rule, format!("conclusion has the wrong polarity in {p}")));
    }
    Ok(())
}

/// Substitute `⊥` (sign `+`) or `⊤` (sign `-`) for `p`.
pub fn monotone(qi: &QuasiInequality, p: &Atom, sign: Sign) -> Result<QuasiInequality, NotApplicable> {
    let rule = "monotone";
    if !p.is_var() {
        return Err(NotApplicable::new(rule, format!("{p} is not a variable")));
    }
    check_ackermann_shape(qi, p, sign, None, rule)?;
    let value = match sign {
        Sign::Pos => Formula::bottom(),
        Sign::Neg => Formula::top(),
    };
    Ok(qi.substitute(p, &value))
}

/// Index of the unique premise in solved form for `p`: `α ≤ p` for sign
/// `+`, `p ≤ α` for sign `-`, with `α` free of `p`.
pub fn solved_premise(qi: &QuasiInequality, p: &Atom, sign: Sign) -> Option<usize> {
    let mut found = None;
    for (k, ineq) in qi.premises.iter().enumerate() {
        let (own, other) = match sign {
            Sign::Pos => (&ineq.rhs, &ineq.lhs),
            Sign::Neg => (&ineq.lhs, &ineq.rhs),
        };
        if own.is_atom(p) && !other.contains(p) {
            if found.is_some() {
                return None;
            }
            found = Some(k);
        }
    }
    found
}

/// Right (`+`) or left (`-`) Ackermann rule: drop the solved premise and
/// substitute its other side for `p` everywhere.
pub fn ackermann(qi: &QuasiInequality, p: &Atom, sign: Sign) -> Result<QuasiInequality, NotApplicable> {
    let rule = if sign == Sign::Pos { "RAR" } else { "LAR" };
    if !p.is_var() {
        return Err(NotApplicable::new(rule, format!("{p} is not a variable")));
    }
    let k = solved_premise(qi, p, sign)
        .ok_or_else(|| NotApplicable::new(rule, format!("no unique solved premise for {p}")))?;
    check_ackermann_shape(qi, p, sign, Some(k), rule)?;
    let alpha = match sign {
        Sign::Pos => qi.premises[k].lhs.clone(),
        Sign::Neg => qi.premises[k].rhs.clone(),
    };
    let mut rest = qi.clone();
    rest.premises.remove(k);
    Ok(rest.substitute(p, &alpha))
}

fn occurs_elsewhere(qi: &QuasiInequality, idx: usize, a: &Atom, skip_conclusion_side: Side) -> bool {
    qi.premises.iter().enumerate().any(|(k, ineq)| {
        if k == idx {
            match skip_conclusion_side {
                Side::Lhs => ineq.rhs.contains(a),
                Side::Rhs => ineq.lhs.contains(a),
            }
        } else {
            ineq.contains(a)
        }
    }) || match skip_conclusion_side {
        Side::Lhs => qi.conclusion.rhs.contains(a),
        Side::Rhs => qi.conclusion.lhs.contains(a),
    }
}

/// `Γ, i ≤ α ⊢ i ≤ β` becomes `Γ ⊢ α ≤ β` when `i` occurs nowhere else.
pub fn simplify_left(qi: &QuasiInequality, idx: usize) -> Result<QuasiInequality, NotApplicable> {
    let rule = "Simpl-Left";
    let ineq = premise(qi, idx, rule)?;
    let Some(i) = ineq.lhs.as_atom().filter(|a| a.is_nominal()) else {
        return Err(NotApplicable::new(rule, "premise does not start with a nominal"));
    };
    if !qi.conclusion.lhs.is_atom(i) {
        return Err(NotApplicable::new(rule, "conclusion has a different left side"));
    }
    if occurs_elsewhere(qi, idx, i, Side::Lhs) {
        return Err(NotApplicable::new(rule, format!("{i} occurs elsewhere")));
    }
    let mut out = qi.clone();
    let removed = out.premises.remove(idx);
    out.conclusion = Inequality::new(removed.rhs, qi.conclusion.rhs.clone());
    Ok(out)
}

/// `Γ, α ≤ m ⊢ β ≤ m` becomes `Γ ⊢ β ≤ α` when `m` occurs nowhere else.
pub fn simplify_right(qi: &QuasiInequality, idx: usize) -> Result<QuasiInequality, NotApplicable> {
    let rule = "Simpl-Right";
    let ineq = premise(qi, idx, rule)?;
    let Some(m) = ineq.rhs.as_atom().filter(|a| a.is_conominal()) else {
        return Err(NotApplicable::new(rule, "premise does not end with a co-nominal"));
    };
    if !qi.conclusion.rhs.is_atom(m) {
        return Err(NotApplicable::new(rule, "conclusion has a different right side"));
    }
    if occurs_elsewhere(qi, idx, m, Side::Rhs) {
        return Err(NotApplicable::new(rule, format!("{m} occurs elsewhere")));
    }
    let mut out = qi.clone();
    let removed = out.premises.remove(idx);
    out.conclusion = Inequality::new(qi.conclusion.lhs.clone(), removed.lhs);
    Ok(out)
}

/// Drop a tautological premise or one that repeats an earlier premise.
pub fn drop_trivial(qi: &QuasiInequality, idx: usize) -> Result<QuasiInequality, NotApplicable> {
    let rule = "drop";
    let ineq = premise(qi, idx, rule)?;
    if !ineq.is_trivial() && !qi.premises[..idx].contains(ineq) {
        return Err(NotApplicable::new(rule, "premise is neither trivial nor repeated"));
    }
    let mut out = qi.clone();
    out.premises.remove(idx);
    Ok(out)
}
