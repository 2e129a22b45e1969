//! The end-to-end procedure: preprocessing, approximation, variable
//! elimination with backtracking, simplification and translation.

use std::collections::{BTreeSet, HashSet};

use serde_json::{json, Value};

use crate::calculus::rules::{self, AdjRule, ApproxRule, Direction, ResRule, Side};
use crate::calculus::trace::{inequality_json, quasi_json};
use crate::calculus::{Inequality, QuasiInequality, Step, Trace, TraceStep};
use crate::error::{NotApplicable, ParseError};
use crate::fo::{fo_simplify, Fo};
use crate::formula::{fresh_atom, Atom, AtomKind, BinOp, Formula, Sign, UnOp};
use crate::parser::{parse_formula, Syntax};
use crate::serialize;
use crate::translate::{tr_quasi_with, Translator};

#[derive(Clone, Debug)]
pub struct PearlOptions {
    pub syntax: Syntax,
    /// Upper bound on single-variable elimination attempts per goal.
    pub max_attempts: usize,
    /// Upper bound on the number of premises during approximation.
    pub max_premises: usize,
}

impl Default for PearlOptions {
    fn default() -> Self {
        PearlOptions { syntax: Syntax::Relevance, max_attempts: 20_000, max_premises: 512 }
    }
}

impl PearlOptions {
    pub fn with_syntax(syntax: Syntax) -> Self {
        PearlOptions { syntax, ..PearlOptions::default() }
    }
}

/// A signed variable in an elimination order.
pub type Signed = (Atom, Sign);

pub fn order_text(order: &[Signed]) -> String {
    let items: Vec<String> = order.iter().map(|(a, s)| format!("{}{}", s.symbol(), a)).collect();
    format!("[{}]", items.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreStep {
    Split { index: usize, side: Side },
    Monotone { index: usize, var: Atom, sign: Sign },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preprocessed {
    pub initial: Vec<Inequality>,
    pub steps: Vec<(PreStep, Vec<Inequality>)>,
    pub result: Vec<Inequality>,
}

/// Initial inequalities: `ψ ≤ θ` for an implication `ψ → θ`, `t ≤ φ`
/// otherwise.
pub fn initial_inequality(phi: &Formula) -> Inequality {
    match phi {
        Formula::Binary(BinOp::RelImp, a, b) => Inequality::new((**a).clone(), (**b).clone()),
        _ => Inequality::new(Formula::truth(), phi.clone()),
    }
}

/// Split and apply monotone elimination until nothing changes.
pub fn preprocess(phi: &Formula) -> Preprocessed {
    let initial = vec![initial_inequality(phi)];
    let mut cur = initial.clone();
    let mut steps = Vec::new();
    loop {
        let mut changed = false;
        for side in [Side::Lhs, Side::Rhs] {
            let mut k = 0;
            while k < cur.len() {
                if let Some((a, b)) = rules::split_inequality(&cur[k], side) {
                    cur[k] = a;
                    cur.insert(k + 1, b);
                    steps.push((PreStep::Split { index: k, side }, cur.clone()));
                    changed = true;
                } else {
                    k += 1;
                }
            }
        }
        for k in 0..cur.len() {
            let mut vars = Vec::new();
            cur[k].collect_atoms(&mut vars);
            let mut seen = BTreeSet::new();
            for var in vars.into_iter().filter(Atom::is_var) {
                if !seen.insert(var.clone()) {
                    continue;
                }
                let (pos, neg) = cur[k].sign_counts(&var);
                let sign = match (pos, neg) {
                    (_, 0) => Sign::Pos,
                    (0, _) => Sign::Neg,
                    _ => continue,
                };
                let value = if sign == Sign::Pos { Formula::bottom() } else { Formula::top() };
                cur[k] = cur[k].substitute(&var, &value);
                steps.push((PreStep::Monotone { index: k, var, sign }, cur.clone()));
                changed = true;
            }
        }
        if !changed {
            return Preprocessed { initial, steps, result: cur };
        }
    }
}

/// Variables of an inequality by first occurrence, right side first.
pub fn base_order(ineq: &Inequality) -> Vec<Atom> {
    let mut atoms = Vec::new();
    ineq.rhs.collect_atoms(&mut atoms);
    ineq.lhs.collect_atoms(&mut atoms);
    let mut seen = BTreeSet::new();
    atoms.into_iter().filter(|a| a.is_var() && seen.insert(a.clone())).collect()
}

const APPROX_ORDER: [ApproxRule; 6] = [
    ApproxRule::ImpR,
    ApproxRule::ImpL,
    ApproxRule::FusionL,
    ApproxRule::FusionR,
    ApproxRule::NegL,
    ApproxRule::NegR,
];

fn fresh_for(qi: &QuasiInequality, rule: ApproxRule) -> Atom {
    let kind = match rule {
        ApproxRule::ImpR | ApproxRule::NegR => AtomKind::CoNominal,
        _ => AtomKind::Nominal,
    };
    fresh_atom(kind, &qi.atom_set())
}

/// First approximation followed by exhaustive splitting and
/// approximation, premise by premise from the left. Returns `Err` with the
/// trace so far when the premise bound is exceeded.
pub fn approximate(ineq: &Inequality, max_premises: usize) -> Result<Trace, Trace> {
    let start = QuasiInequality::new(vec![], ineq.clone());
    let mut t = Trace::new(start);
    let used = t.initial.atom_set();
    let nominal = fresh_atom(AtomKind::Nominal, &used);
    let conominal = fresh_atom(AtomKind::CoNominal, &used);
    t.apply(Step::FirstApproximation { nominal, conominal }).expect("fresh atoms on an empty premise list");
    let mut k = 0;
    while k < t.last().premises.len() {
        if t.last().premises.len() > max_premises {
            return Err(t);
        }
        if t.apply(Step::Split { premise: k, side: Side::Lhs }).is_ok()
            || t.apply(Step::Split { premise: k, side: Side::Rhs }).is_ok()
        {
            continue;
        }
        let applied = APPROX_ORDER.iter().any(|&rule| {
            let fresh = fresh_for(t.last(), rule);
            t.apply(Step::Approx { rule, premise: k, fresh }).is_ok()
        });
        if !applied {
            k += 1;
        }
    }
    Ok(t)
}

/// The single step that moves `p` one connective closer to solved form in
/// premise `k`, or `None` when no move applies.
fn solving_move(ineq: &Inequality, k: usize, p: &Atom, sign: Sign) -> Option<Step> {
    let res = |rule, dir, commute| Step::Residuation { rule, dir, premise: k, commute };
    let adj = |rule, dir, commute| Step::Adjunction { rule, dir, premise: k, other: None, commute };
    let in_lhs = ineq.lhs.contains(p);
    let side = if in_lhs { &ineq.lhs } else { &ineq.rhs };
    let (a, b) = match side {
        Formula::Binary(_, a, b) => (Some(&**a), Some(&**b)),
        Formula::Unary(_, a) => (Some(&**a), None),
        _ => (None, None),
    };
    let in_a = a.is_some_and(|a| a.contains(p));
    let in_b = b.is_some_and(|b| b.contains(p));
    use Direction::{Down, Up};
    match (sign, in_lhs, side) {
        // target `α ≤ p`
        (Sign::Pos, false, Formula::Binary(BinOp::Or, ..)) => Some(res(ResRule::Or, Down, in_a)),
        (Sign::Pos, false, Formula::Binary(BinOp::And, ..)) => Some(adj(AdjRule::And, Down, in_b)),
        (Sign::Pos, false, Formula::Binary(BinOp::RelImp, ..)) if in_b => Some(res(ResRule::Imp, Down, false)),
        (Sign::Pos, false, Formula::Binary(BinOp::IntImp, ..)) if in_b => Some(res(ResRule::And, Up, false)),
        (Sign::Pos, false, Formula::Binary(BinOp::RightRes, ..)) if in_b => Some(res(ResRule::Tail, Down, false)),
        (Sign::Pos, true, Formula::Binary(BinOp::CoImp, ..)) if in_b => Some(res(ResRule::Or, Up, true)),
        (Sign::Pos, true, Formula::Unary(UnOp::Neg, _)) => Some(adj(AdjRule::NegL, Down, false)),
        (Sign::Pos, true, Formula::Unary(UnOp::NegFlat, _)) => Some(adj(AdjRule::NegL, Up, false)),
        // target `p ≤ α`
        (Sign::Neg, true, Formula::Binary(BinOp::And, ..)) => Some(res(ResRule::And, Down, in_b)),
        (Sign::Neg, true, Formula::Binary(BinOp::Or, ..)) => Some(adj(AdjRule::Or, Down, in_b)),
        (Sign::Neg, true, Formula::Binary(BinOp::Fusion, ..)) if in_a => Some(res(ResRule::Imp, Up, false)),
        (Sign::Neg, true, Formula::Binary(BinOp::Fusion, ..)) if in_b => Some(res(ResRule::Tail, Up, false)),
        (Sign::Neg, true, Formula::Binary(BinOp::CoImp, ..)) if in_a => Some(res(ResRule::Or, Up, false)),
        (Sign::Neg, false, Formula::Unary(UnOp::Neg, _)) => Some(adj(AdjRule::NegR, Down, false)),
        (Sign::Neg, false, Formula::Unary(UnOp::NegSharp, _)) => Some(adj(AdjRule::NegR, Up, false)),
        (Sign::Neg, false, Formula::Binary(BinOp::RelImp, ..)) if in_a => Some(res(ResRule::Imp, Down, false)),
        (Sign::Neg, false, Formula::Binary(BinOp::IntImp, ..)) if in_a => Some(res(ResRule::And, Up, false)),
        (Sign::Neg, false, Formula::Binary(BinOp::RightRes, ..)) if in_a => Some(res(ResRule::Tail, Down, false)),
        _ => None,
    }
}

fn is_solved(ineq: &Inequality, p: &Atom, sign: Sign) -> bool {
    match sign {
        Sign::Pos => ineq.rhs.is_atom(p) && !ineq.lhs.contains(p),
        Sign::Neg => ineq.lhs.is_atom(p) && !ineq.rhs.contains(p),
    }
}

const SOLVE_STEP_BOUND: usize = 1_000;

fn solve(t: &mut Trace, k: usize, p: &Atom, sign: Sign) -> Result<(), NotApplicable> {
    for _ in 0..SOLVE_STEP_BOUND {
        let ineq = &t.last().premises[k];
        if is_solved(ineq, p, sign) {
            return Ok(());
        }
        let step = solving_move(ineq, k, p, sign)
            .ok_or_else(|| NotApplicable::new("solve", format!("premise {k} is stuck at {ineq}")))?;
        t.apply(step)?;
    }
    Err(NotApplicable::new("solve", "step bound exceeded"))
}

/// Eliminate one variable with the given sign: solve every premise that
/// has a single occurrence of that sign, merge the solutions and apply the
/// Ackermann rule, or apply monotone elimination when nothing needs
/// solving.
pub fn eliminate_var(qi: &QuasiInequality, p: &Atom, sign: Sign) -> Result<Vec<TraceStep>, NotApplicable> {
    let rule = if sign == Sign::Pos { "RAR" } else { "LAR" };
    let mut t = Trace::new(qi.clone());
    // trivial premises such as `p ≤ p` carry no constraint
    while let Some(k) = t.last().premises.iter().position(|i| i.contains(p) && i.is_trivial()) {
        t.apply(Step::DropTrivial { premise: k })?;
    }
    let qi = t.last().clone();
    if !qi.conclusion.has_sign(p, sign) {
        return Err(NotApplicable::new(rule, format!("conclusion has the wrong polarity in {p}")));
    }
    let mut candidates = Vec::new();
    for (k, ineq) in qi.premises.iter().enumerate() {
        let (pos, neg) = ineq.sign_counts(p);
        let (same, other) = if sign == Sign::Pos { (pos, neg) } else { (neg, pos) };
        match (same, other) {
            (0, _) => {}
            (1, 0) => candidates.push(k),
            _ => return Err(NotApplicable::new(rule, format!("premise {k} has several occurrences of {p}"))),
        }
    }
    if candidates.is_empty() {
        t.apply(Step::Monotone { var: p.clone(), sign })?;
        return Ok(t.steps);
    }
    for &k in candidates.iter().rev() {
        solve(&mut t, k, p, sign)?;
    }
    let merge = if sign == Sign::Pos { AdjRule::Or } else { AdjRule::And };
    loop {
        let solved: Vec<usize> =
            t.last().premises.iter().enumerate().filter(|(_, i)| is_solved(i, p, sign)).map(|(k, _)| k).collect();
        if solved.len() < 2 {
            break;
        }
        t.apply(Step::Adjunction {
            rule: merge,
            dir: Direction::Up,
            premise: solved[0],
            other: Some(solved[solved.len() - 1]),
            commute: false,
        })?;
    }
    t.apply(Step::Ackermann { var: p.clone(), sign })?;
    Ok(t.steps)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub order: Vec<Signed>,
    pub steps: Vec<TraceStep>,
    pub result: QuasiInequality,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EliminationFailure {
    /// The state reached by the longest partial order.
    pub stuck: QuasiInequality,
    /// Signed orders tried, each ending with the attempt that failed.
    pub attempted: Vec<Vec<Signed>>,
    pub budget_exhausted: bool,
}

const MAX_RECORDED_ORDERS: usize = 1_000;

struct Search {
    base: Vec<Atom>,
    memo: HashSet<QuasiInequality>,
    attempts: usize,
    max_attempts: usize,
    path: Vec<Signed>,
    attempted: Vec<Vec<Signed>>,
    stuck: Option<(usize, QuasiInequality)>,
    exhausted: bool,
}

impl Search {
    fn vars(&self, qi: &QuasiInequality) -> Vec<Atom> {
        let present = qi.prop_vars();
        let mut out: Vec<Atom> = self.base.iter().filter(|a| present.contains(a)).cloned().collect();
        out.extend(present.into_iter().filter(|a| !self.base.contains(a)));
        out
    }

    fn dead_end(&mut self, qi: &QuasiInequality) {
        if self.stuck.as_ref().is_none_or(|(d, _)| self.path.len() > *d) {
            self.stuck = Some((self.path.len(), qi.clone()));
        }
    }

    fn dfs(&mut self, qi: &QuasiInequality) -> Option<Vec<TraceStep>> {
        let vars = self.vars(qi);
        if vars.is_empty() {
            return Some(Vec::new());
        }
        if self.memo.contains(qi) {
            return None;
        }
        for var in vars {
            for sign in [Sign::Pos, Sign::Neg] {
                if self.attempts >= self.max_attempts {
                    self.exhausted = true;
                    self.dead_end(qi);
                    return None;
                }
                self.attempts += 1;
                self.path.push((var.clone(), sign));
                match eliminate_var(qi, &var, sign) {
                    Ok(steps) => {
                        let next = steps.last().map(|s| s.result.clone()).unwrap_or_else(|| qi.clone());
                        if let Some(rest) = self.dfs(&next) {
                            let mut all = steps;
                            all.extend(rest);
                            return Some(all);
                        }
                    }
                    Err(_) => {
                        if self.attempted.len() < MAX_RECORDED_ORDERS {
                            self.attempted.push(self.path.clone());
                        }
                    }
                }
                self.path.pop();
                if self.exhausted {
                    return None;
                }
            }
        }
        self.memo.insert(qi.clone());
        self.dead_end(qi);
        None
    }
}

/// Backtracking search over signed variable orders; variables are tried in
/// `base` order (then any others by first occurrence), `+` before `-`.
pub fn eliminate(qi: &QuasiInequality, base: &[Atom], max_attempts: usize) -> Result<Elimination, EliminationFailure> {
    let mut s = Search {
        base: base.to_vec(),
        memo: HashSet::new(),
        attempts: 0,
        max_attempts,
        path: Vec::new(),
        attempted: Vec::new(),
        stuck: None,
        exhausted: false,
    };
    match s.dfs(qi) {
        Some(steps) => {
            let order = steps
                .iter()
                .filter_map(|s| match &s.step {
                    Step::Ackermann { var, sign } | Step::Monotone { var, sign } => Some((var.clone(), *sign)),
                    _ => None,
                })
                .collect();
            let result = steps.last().map(|s| s.result.clone()).unwrap_or_else(|| qi.clone());
            Ok(Elimination { order, steps, result })
        }
        None => Err(EliminationFailure {
            stuck: s.stuck.map(|(_, q)| q).unwrap_or_else(|| qi.clone()),
            attempted: s.attempted,
            budget_exhausted: s.exhausted,
        }),
    }
}

/// Drop trivial and repeated premises, then apply Simpl-Right and
/// Simpl-Left, until nothing changes.
pub fn simplify(qi: &QuasiInequality) -> Vec<TraceStep> {
    let mut t = Trace::new(qi.clone());
    loop {
        let n = t.last().premises.len();
        let mut done = false;
        for make in [
            (|k| Step::DropTrivial { premise: k }) as fn(usize) -> Step,
            |k| Step::SimplRight { premise: k },
            |k| Step::SimplLeft { premise: k },
        ] {
            if (0..n).any(|k| t.apply(make(k)).is_ok()) {
                done = true;
                break;
            }
        }
        if !done {
            return t.steps;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalResult {
    pub initial: Inequality,
    pub base_order: Vec<Atom>,
    pub approximated: QuasiInequality,
    pub order: Vec<Signed>,
    pub pure: QuasiInequality,
    pub simplified: QuasiInequality,
    /// Translation before clean-up.
    pub fo_raw: Fo,
    pub fo: Fo,
    /// Every rule application from `{⊢ initial}` to `simplified`.
    pub trace: Trace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalFailure {
    pub goal: usize,
    pub initial: Inequality,
    pub approximated: Option<QuasiInequality>,
    pub stuck: QuasiInequality,
    pub attempted: Vec<Vec<Signed>>,
    pub reason: String,
    pub trace: Trace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PearlResult {
    pub input: Formula,
    pub syntax: Syntax,
    pub preprocess: Preprocessed,
    pub goals: Vec<GoalResult>,
    pub failure: Option<GoalFailure>,
    /// Conjunction of the goal correspondents; `None` on failure.
    pub fo: Option<Fo>,
}

impl PearlResult {
    pub fn status(&self) -> Status {
        if self.failure.is_none() {
            Status::Success
        } else {
            Status::Failure
        }
    }

    pub fn is_success(&self) -> bool {
        self.failure.is_none()
    }

    /// Signed orders of all goals, concatenated.
    pub fn order(&self) -> Vec<Signed> {
        self.goals.iter().flat_map(|g| g.order.iter().cloned()).collect()
    }

    pub fn to_json(&self) -> Value {
        let list = |v: &[Inequality]| v.iter().map(inequality_json).collect::<Vec<_>>();
        let text = |v: &[Inequality]| v.iter().map(|i| i.to_text(self.syntax)).collect::<Vec<_>>();
        let orders = |o: &[Vec<Signed>]| o.iter().map(|x| order_text(x)).collect::<Vec<_>>();
        let goals: Vec<Value> = self
            .goals
            .iter()
            .map(|g| {
                json!({
                    "initial": g.initial.to_text(self.syntax),
                    "approximation": g.approximated.to_text(self.syntax),
                    "order": g.order.iter().map(|(a, s)| format!("{}{}", s.symbol(), a)).collect::<Vec<_>>(),
                    "pure": g.pure.to_text(self.syntax),
                    "simplified": g.simplified.to_text(self.syntax),
                    "simplified_ast": quasi_json(&g.simplified),
                    "fo": serialize::tex(&g.fo, false),
                    "trace": g.trace.to_json(),
                })
            })
            .collect();
        let failure = self.failure.as_ref().map(|f| {
            json!({
                "goal": f.goal,
                "initial": f.initial.to_text(self.syntax),
                "stuck": f.stuck.to_text(self.syntax),
                "stuck_ast": quasi_json(&f.stuck),
                "attempted": orders(&f.attempted),
                "reason": f.reason,
                "trace": f.trace.to_json(),
            })
        });
        json!({
            "input": crate::parser::to_text(&self.input, self.syntax).unwrap_or_default(),
            "syntax": self.syntax.name(),
            "status": if self.is_success() { "success" } else { "failure" },
            "preprocess": {
                "initial": text(&self.preprocess.initial),
                "result": text(&self.preprocess.result),
                "result_ast": list(&self.preprocess.result),
            },
            "goals": goals,
            "failure": failure,
            "fo": self.fo.as_ref().map(|f| serialize::tex(f, false)),
            "fo_ast": self.fo.as_ref().map(serialize::to_json),
        })
    }
}

fn run_goal(goal: usize, ineq: &Inequality, opts: &PearlOptions) -> Result<GoalResult, GoalFailure> {
    let base = base_order(ineq);
    let mut trace = approximate(ineq, opts.max_premises).map_err(|t| GoalFailure {
        goal,
        initial: ineq.clone(),
        approximated: None,
        stuck: t.last().clone(),
        attempted: Vec::new(),
        reason: format!("approximation exceeded {} premises", opts.max_premises),
        trace: t,
    })?;
    let approximated = trace.last().clone();
    let elim = eliminate(&approximated, &base, opts.max_attempts).map_err(|f| GoalFailure {
        goal,
        initial: ineq.clone(),
        approximated: Some(approximated.clone()),
        stuck: f.stuck,
        attempted: f.attempted,
        reason: if f.budget_exhausted {
            format!("search budget of {} attempts exhausted", opts.max_attempts)
        } else {
            "no signed order eliminates every variable".into()
        },
        trace: trace.clone(),
    })?;
    trace.steps.extend(elim.steps);
    let pure = trace.last().clone();
    trace.steps.extend(simplify(&pure));
    let simplified = trace.last().clone();
    let mut translator = Translator::for_quasi(&simplified);
    let fo_raw = tr_quasi_with(&mut translator, &simplified).expect("elimination output is pure");
    let mut fo = fo_simplify(&fo_raw);
    if opts.syntax == Syntax::Ra {
        fo = fo.leq_to_eq();
    }
    Ok(GoalResult { initial: ineq.clone(), base_order: base, approximated, order: elim.order, pure, simplified, fo_raw, fo, trace })
}

/// Run the whole procedure on a formula.
pub fn pearl(phi: &Formula, opts: &PearlOptions) -> PearlResult {
    let preprocess = preprocess(phi);
    let mut goals = Vec::new();
    let mut failure = None;
    for (k, ineq) in preprocess.result.iter().enumerate() {
        match run_goal(k, ineq, opts) {
            Ok(g) => goals.push(g),
            Err(f) => {
                failure = Some(f);
                break;
            }
        }
    }
    let fo = failure.is_none().then(|| fo_simplify(&Fo::conj(goals.iter().map(|g| g.fo.clone()).collect())));
    PearlResult { input: phi.clone(), syntax: opts.syntax, preprocess, goals, failure, fo }
}

/// Parse `text` in the options' syntax and run [`pearl`].
pub fn pearl_text(text: &str, opts: &PearlOptions) -> Result<PearlResult, ParseError> {
    let phi = parse_formula(text, opts.syntax)?;
    Ok(pearl(&phi, opts))
}
