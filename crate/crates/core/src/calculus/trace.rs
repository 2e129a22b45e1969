use serde_json::{json, Value};

use crate::calculus::rules::{self, AdjRule, ApproxRule, Direction, ResRule, Side};
use crate::calculus::{Inequality, QuasiInequality};
use crate::error::NotApplicable;
use crate::formula::{Atom, Sign};
use crate::parser::to_json;

/// One application of a calculus rule, with enough data to replay it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    FirstApproximation { nominal: Atom, conominal: Atom },
    Split { premise: usize, side: Side },
    Approx { rule: ApproxRule, premise: usize, fresh: Atom },
    Residuation { rule: ResRule, dir: Direction, premise: usize, commute: bool },
    Adjunction { rule: AdjRule, dir: Direction, premise: usize, other: Option<usize>, commute: bool },
    Monotone { var: Atom, sign: Sign },
    Ackermann { var: Atom, sign: Sign },
    SimplLeft { premise: usize },
    SimplRight { premise: usize },
    DropTrivial { premise: usize },
}

fn arrow(dir: Direction) -> &'static str {
    match dir {
        Direction::Down => "↓",
        Direction::Up => "↑",
    }
}

impl Step {
    pub fn apply(&self, qi: &QuasiInequality) -> Result<QuasiInequality, NotApplicable> {
        match self {
            Step::FirstApproximation { nominal, conominal } => rules::first_approximation(qi, nominal, conominal),
            Step::Split { premise, side } => rules::split(qi, *premise, *side),
            Step::Approx { rule, premise, fresh } => rules::approximate(qi, *premise, *rule, fresh),
            Step::Residuation { rule, dir, premise, commute } => rules::residuate(qi, *premise, *rule, *dir, *commute),
            Step::Adjunction { rule, dir, premise, other, commute } => {
                rules::adjoin(qi, *premise, *rule, *dir, *other, *commute)
            }
            Step::Monotone { var, sign } => rules::monotone(qi, var, *sign),
            Step::Ackermann { var, sign } => rules::ackermann(qi, var, *sign),
            Step::SimplLeft { premise } => rules::simplify_left(qi, *premise),
            Step::SimplRight { premise } => rules::simplify_right(qi, *premise),
            Step::DropTrivial { premise } => rules::drop_trivial(qi, *premise),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Step::FirstApproximation { .. } => "first approximation".into(),
            Step::Split { side: Side::Lhs, .. } => "split (left)".into(),
            Step::Split { side: Side::Rhs, .. } => "split (right)".into(),
            Step::Approx { rule, .. } => rule.name().into(),
            Step::Residuation { rule, dir, .. } => format!("{}{}", rule.name(), arrow(*dir)),
            Step::Adjunction { rule, dir, .. } => format!("{}{}", rule.name(), arrow(*dir)),
            Step::Monotone { var, sign } => format!("monotone {}{}", sign.symbol(), var),
            Step::Ackermann { var, sign: Sign::Pos } => format!("RAR +{var}"),
            Step::Ackermann { var, sign: Sign::Neg } => format!("LAR -{var}"),
            Step::SimplLeft { .. } => "Simpl-Left".into(),
            Step::SimplRight { .. } => "Simpl-Right".into(),
            Step::DropTrivial { .. } => "drop redundant premise".into(),
        }
    }

    /// Premise indices the step reads, in the state before the step.
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Step::FirstApproximation { .. } | Step::Monotone { .. } | Step::Ackermann { .. } => vec![],
            Step::Adjunction { premise, other: Some(o), .. } => vec![*premise, *o],
            Step::Split { premise, .. }
            | Step::Approx { premise, .. }
            | Step::Residuation { premise, .. }
            | Step::Adjunction { premise, .. }
            | Step::SimplLeft { premise }
            | Step::SimplRight { premise }
            | Step::DropTrivial { premise } => vec![*premise],
        }
    }

    pub fn fresh(&self) -> Vec<Atom> {
        match self {
            Step::FirstApproximation { nominal, conominal } => vec![nominal.clone(), conominal.clone()],
            Step::Approx { fresh, .. } => vec![fresh.clone()],
            _ => vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: Step,
    pub result: QuasiInequality,
}

/// A rule sequence with a snapshot after every step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub initial: QuasiInequality,
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn new(initial: QuasiInequality) -> Self {
        Trace { initial, steps: Vec::new() }
    }

    pub fn last(&self) -> &QuasiInequality {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.initial)
    }

    /// Apply `step` to the current state and record it.
    pub fn apply(&mut self, step: Step) -> Result<&QuasiInequality, NotApplicable> {
        let result = step.apply(self.last())?;
        self.steps.push(TraceStep { step, result });
        Ok(self.last())
    }

    /// Re-run every step from the initial state; fails if a step does not
    /// apply or yields something other than its snapshot.
    pub fn replay(&self) -> Result<QuasiInequality, NotApplicable> {
        let mut cur = self.initial.clone();
        for (k, s) in self.steps.iter().enumerate() {
            cur = s.step.apply(&cur)?;
            if cur != s.result {
                return Err(NotApplicable::new(s.step.name(), format!("step {k} diverges from its snapshot")));
            }
        }
        Ok(cur)
    }

    pub fn to_json(&self) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                json!({
                    "rule": s.step.name(),
                    "premises": s.step.premises(),
                    "fresh": s.step.fresh().iter().map(|a| to_json(&crate::formula::Formula::Atom(a.clone()))).collect::<Vec<_>>(),
                    "text": s.result.to_string(),
                    "snapshot": quasi_json(&s.result),
                })
            })
            .collect();
        json!({ "initial": quasi_json(&self.initial), "steps": steps })
    }
}

pub fn inequality_json(ineq: &Inequality) -> Value {
    json!({ "lhs": to_json(&ineq.lhs), "rhs": to_json(&ineq.rhs) })
}

pub fn quasi_json(qi: &QuasiInequality) -> Value {
    json!({
        "premises": qi.premises.iter().map(inequality_json).collect::<Vec<_>>(),
        "conclusion": inequality_json(&qi.conclusion),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_quasi, Syntax};

    #[test]
    fn record_and_replay() {
        let start = parse_quasi("\\vdash A \\to C \\le B", Syntax::Relevance).unwrap();
        let mut t = Trace::new(start);
        t.apply(Step::FirstApproximation { nominal: Atom::nominal(0), conominal: Atom::conominal(0) }).unwrap();
        t.apply(Step::Residuation { rule: ResRule::Imp, dir: Direction::Down, premise: 0, commute: false })
            .unwrap();
        assert_eq!(t.replay().unwrap(), *t.last());
        assert!(t.apply(Step::SimplLeft { premise: 5 }).is_err());
        assert_eq!(t.steps.len(), 2);

        let mut broken = t.clone();
        broken.steps[1].result = broken.initial.clone();
        assert!(broken.replay().is_err());

        let v = t.to_json();
        assert_eq!(v["steps"].as_array().unwrap().len(), 2);
        assert_eq!(v["steps"][0]["fresh"].as_array().unwrap().len(), 2);
    }
}
