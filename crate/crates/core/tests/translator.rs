mod common;

use std::collections::BTreeSet;

use common::arb_pure;
use pearl::oracle::{enumerate_frames, RmFrame};
use pearl::translate::{classify, st, st_inequality, tr, tr_quasi, TrRule, Translator, GENERIC};
use pearl::{
    alpha_eq, eval_fo, fo_simplify, parse_inequality, parse_quasi, Atom, Fo, Formula, Inequality, QuasiInequality,
    Syntax, Term, Var,
};
use proptest::prelude::*;

fn ineq(s: &str) -> Inequality {
    parse_inequality(s, Syntax::Relevance).unwrap()
}

fn qi(s: &str) -> QuasiInequality {
    parse_quasi(s, Syntax::Relevance).unwrap()
}

fn x(k: u32) -> Term {
    Term::Var(Var::X(k))
}

fn y(k: u32) -> Term {
    Term::Var(Var::Y(k))
}

fn frames() -> Vec<RmFrame> {
    (1..=2).flat_map(|n| enumerate_frames(n).unwrap()).collect()
}

fn assignments(n: usize, vars: &BTreeSet<Var>) -> Vec<Vec<(Var, usize)>> {
    let mut out = vec![Vec::new()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|a| {
                (0..n).map(move |w| {
                    let mut b: Vec<(Var, usize)> = a.clone();
                    b.push((*v, w));
                    b
                })
            })
            .collect();
    }
    out
}

/// Same truth value on every frame with at most two worlds, under every
/// assignment of the free variables.
fn agree(a: &Fo, b: &Fo) -> Result<(), String> {
    let vars: BTreeSet<Var> = a.free_vars().union(&b.free_vars()).copied().collect();
    for f in frames() {
        for env in assignments(f.size(), &vars) {
            if eval_fo(&f, a, &env) != eval_fo(&f, b, &env) {
                return Err(format!("{a} vs {b} on {} under {env:?}", f.to_json()));
            }
        }
    }
    Ok(())
}

#[test]
fn standard_translation_examples() {
    let w = Term::Var(Var::Z(9));
    assert_eq!(st(&Formula::truth(), &w), Fo::o(w.clone()));
    let got = st(&Formula::neg(Formula::var(0)), &w);
    let want = Fo::exists(
        Var::Z(0),
        Fo::and(Fo::eq(Var::Z(0), Term::star(w.clone())), Fo::not(Fo::Pred(Atom::var(0), Term::Var(Var::Z(0))))),
    );
    assert!(alpha_eq(&got, &want), "{got:?}");
    assert_eq!(st(&Formula::bottom(), &w), Fo::not(Fo::eq(w.clone(), w)));
}

#[test]
fn tr_examples() {
    assert_eq!(tr(&ineq("\\mathbf i \\le \\mathbf j_1")).unwrap(), Fo::leq(x(1), x(0)));
    assert_eq!(tr(&ineq("\\mathbf i \\le \\bot")).unwrap(), Fo::False);
    assert_eq!(tr(&ineq("\\mathbf i \\le \\top")).unwrap(), Fo::True);
    let got = tr(&ineq("\\mathbf i \\circ (\\mathbf i \\circ \\mathbf j_1) \\le \\mathbf n_1")).unwrap();
    let want = Fo::forall(Var::X(2), Fo::implies(Fo::r(x(0), x(1), x(2)), Fo::not(Fo::r(x(0), x(2), y(1)))));
    assert!(alpha_eq(&got, &want), "{got}");
    assert!(tr(&ineq("p \\le \\mathbf m")).is_err());
}

#[test]
fn tr_quasi_examples() {
    let got = tr_quasi(&qi(
        "\\mathbf i \\circ (\\mathbf i \\circ \\mathbf j_1) \\le \\mathbf n_1 \\vdash \\mathbf i \\le \\mathbf j_1 \\to \\mathbf n_1",
    ))
    .unwrap();
    let premise = Fo::forall(Var::X(2), Fo::implies(Fo::r(x(0), x(1), x(2)), Fo::not(Fo::r(x(0), x(2), y(1)))));
    let want = Fo::forall(
        Var::X(0),
        Fo::forall(Var::X(1), Fo::forall(Var::Y(1), Fo::implies(premise, Fo::not(Fo::r(x(0), x(1), y(1)))))),
    );
    assert!(alpha_eq(&got, &want), "{got}");

    let contraposed = Fo::forall(
        Var::X(0),
        Fo::forall(
            Var::X(1),
            Fo::forall(
                Var::Y(1),
                Fo::implies(
                    Fo::r(x(0), x(1), y(1)),
                    Fo::exists(Var::X(2), Fo::and(Fo::r(x(0), x(1), x(2)), Fo::r(x(0), x(2), y(1)))),
                ),
            ),
        ),
    );
    assert!(alpha_eq(&fo_simplify(&got), &contraposed), "{}", fo_simplify(&got));

    let got = tr_quasi(&qi("\\vdash \\mathbf i \\le \\mathbf m")).unwrap();
    let want = Fo::forall(Var::X(0), Fo::forall(Var::Y(0), Fo::not(Fo::leq(x(0), y(0)))));
    assert!(alpha_eq(&got, &want), "{got}");
    assert!(frames().iter().all(|f| eval_fo(f, &got, &[]) == Some(false)));

    let got = fo_simplify(&tr_quasi(&qi("\\mathbf j_1 \\le \\sim \\mathbf n_2 \\vdash \\mathbf n_2 \\le \\mathbf j_1 \\to \\mathbf n_1")).unwrap());
    let body = Fo::implies(
        Fo::leq(Term::star(x(1)), y(2)),
        Fo::forall(Var::X(2), Fo::implies(Fo::r(x(2), x(1), y(1)), Fo::leq(x(2), y(2)))),
    );
    let want = Fo::forall(Var::X(1), Fo::forall(Var::Y(1), Fo::forall(Var::Y(2), body)));
    assert!(alpha_eq(&got, &want), "{got}");
}

#[test]
fn simplifier_examples() {
    let a = Fo::r(x(0), x(1), y(1));
    assert_eq!(fo_simplify(&Fo::not(Fo::not(a.clone()))), a);
    assert_eq!(fo_simplify(&Fo::and(a.clone(), Fo::True)), a);
    assert_eq!(fo_simplify(&Fo::and(a.clone(), a.clone())), a);
}

#[test]
fn rule_priority() {
    let nom = |s: &str| {
        let i = ineq(s);
        classify(&i.lhs, &i.rhs).unwrap()
    };
    assert_eq!(nom("\\mathbf i \\le \\mathbf j_1"), TrRule::Numbered(1));
    assert_eq!(nom("\\mathbf i \\le \\mathbf m"), TrRule::Numbered(2));
    assert_eq!(nom("\\mathbf i \\le \\bot"), TrRule::Numbered(4));
    assert_eq!(nom("\\mathbf i \\le \\top"), TrRule::Numbered(5));
    assert_eq!(nom("\\mathbf i \\lor \\mathbf j_1 \\le \\mathbf m \\land \\mathbf n_1"), TrRule::Numbered(GENERIC));
}

#[test]
fn gap_shapes_are_logged() {
    let mut t = Translator::starting_at(3);
    let f = t.tr(&ineq("\\mathbf i \\le \\sim^\\flat \\mathbf j_1")).unwrap();
    agree(&f, &st_inequality(&ineq("\\mathbf i \\le \\sim^\\flat \\mathbf j_1"))).unwrap();
    assert_eq!(t.fallthroughs[0].0, TrRule::GapNegFlat);
    assert!(!t.fallthroughs.is_empty());
}

fn pure_ineq() -> impl Strategy<Value = Inequality> {
    (arb_pure(3, 3, 3), arb_pure(3, 3, 3)).prop_map(|(a, b)| Inequality::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tr_agrees_with_standard_translation(i in pure_ineq()) {
        let a = tr(&i).unwrap();
        let b = st_inequality(&i);
        prop_assert!(agree(&a, &b).is_ok(), "{}: {}", i, agree(&a, &b).unwrap_err());
    }

    #[test]
    fn simplification_preserves_truth(i in pure_ineq(), j in pure_ineq()) {
        let q = QuasiInequality::new(vec![i], j);
        let raw = tr_quasi(&q).unwrap();
        let simple = fo_simplify(&raw);
        prop_assert!(simple.free_vars().is_empty());
        prop_assert!(agree(&raw, &simple).is_ok());
        prop_assert_eq!(fo_simplify(&simple), simple.clone());
    }

    #[test]
    fn relation_algebra_rewrite_removes_order(i in pure_ineq()) {
        let f = tr(&i).unwrap().leq_to_eq();
        let text = format!("{f:?}");
        prop_assert!(!text.contains("Leq"));
    }
}
