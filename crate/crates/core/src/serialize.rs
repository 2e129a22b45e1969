//! Renderers for first-order formulas: TeX, TPTP, Prover9, SPASS and JSON.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::SerializeError;
use crate::fo::{Fo, Term, Var};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum OutputFormat {
    #[default]
    TexMath,
    Tptp,
    Prover9,
    Spass,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tex" => Ok(OutputFormat::TexMath),
            "tptp" => Ok(OutputFormat::Tptp),
            "prover9" => Ok(OutputFormat::Prover9),
            "spass" => Ok(OutputFormat::Spass),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::TexMath => "tex",
            OutputFormat::Tptp => "tptp",
            OutputFormat::Prover9 => "prover9",
            OutputFormat::Spass => "spass",
            OutputFormat::Json => "json",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RenderOptions {
    /// Replace `u ⪯ v` by `∃z (O z ∧ R z u v)`.
    pub expand_leq: bool,
    /// Annotation name in sentence formats.
    pub name: String,
    /// TeX only: drop the outer universal closure.
    pub omit_closure: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { expand_leq: false, name: "correspondent".into(), omit_closure: false }
    }
}

/// A lower-case identifier usable as a TPTP, Prover9 or SPASS name.
pub fn annotation_name(name: &str) -> String {
    let mut out: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '_' }).collect();
    if !out.starts_with(|c: char| c.is_ascii_lowercase()) {
        out.insert(0, 'f');
    }
    out
}

pub fn render(f: &Fo, format: OutputFormat, opts: &RenderOptions) -> Result<String, SerializeError> {
    let name = annotation_name(&opts.name);
    let f = if opts.expand_leq { expand_leq(f) } else { f.clone() };
    let sentence = |fmt: &'static str| -> Result<(), SerializeError> {
        match f.free_vars().into_iter().next() {
            Some(v) => Err(SerializeError::Unsupported { format: fmt, what: format!("free variable {v}") }),
            None => Ok(()),
        }
    };
    Ok(match format {
        OutputFormat::TexMath => tex(&f, opts.omit_closure),
        OutputFormat::Tptp => {
            sentence("tptp")?;
            format!("fof({name}, axiom, {}).", tptp_body(&f))
        }
        OutputFormat::Prover9 => {
            sentence("prover9")?;
            format!("formulas(assumptions).\n{} # label({}).\nend_of_list.", prover9_body(&f), name)
        }
        OutputFormat::Spass => {
            sentence("spass")?;
            format!("formula({},{name}).", spass_body(&f))
        }
        OutputFormat::Json => serde_json::to_string(&to_json(&f)).expect("json value serializes"),
    })
}

fn all_vars(f: &Fo, out: &mut BTreeSet<Var>) {
    let term = |t: &Term, out: &mut BTreeSet<Var>| {
        let mut t = t;
        while let Term::Star(inner) = t {
            t = inner;
        }
        if let Term::Var(v) = t {
            out.insert(*v);
        }
    };
    match f {
        Fo::True | Fo::False => {}
        Fo::R(a, b, c) => {
            term(a, out);
            term(b, out);
            term(c, out);
        }
        Fo::O(a) | Fo::Pred(_, a) => term(a, out),
        Fo::Leq(a, b) | Fo::Eq(a, b) => {
            term(a, out);
            term(b, out);
        }
        Fo::Not(a) => all_vars(a, out),
        Fo::And(a, b) | Fo::Or(a, b) | Fo::Implies(a, b) => {
            all_vars(a, out);
            all_vars(b, out);
        }
        Fo::Forall(v, a) | Fo::Exists(v, a) => {
            out.insert(*v);
            all_vars(a, out);
        }
    }
}

/// Replace every `⪯` atom by its definition through `O` and `R`, using
/// bound variables not occurring in `f`.
pub fn expand_leq(f: &Fo) -> Fo {
    let mut used = BTreeSet::new();
    all_vars(f, &mut used);
    let mut next = used.iter().filter_map(|v| if let Var::Z(k) = v { Some(k + 1) } else { None }).max().unwrap_or(0);
    fn go(f: &Fo, next: &mut u32) -> Fo {
        match f {
            Fo::Leq(a, b) => {
                let z = Var::Z(*next);
                *next += 1;
                Fo::exists(z, Fo::and(Fo::o(z), Fo::R(Term::Var(z), a.clone(), b.clone())))
            }
            Fo::Not(a) => Fo::not(go(a, next)),
            Fo::And(a, b) => Fo::and(go(a, next), go(b, next)),
            Fo::Or(a, b) => Fo::or(go(a, next), go(b, next)),
            Fo::Implies(a, b) => Fo::implies(go(a, next), go(b, next)),
            Fo::Forall(v, a) => Fo::forall(*v, go(a, next)),
            Fo::Exists(v, a) => Fo::exists(*v, go(a, next)),
            other => other.clone(),
        }
    }
    go(f, &mut next)
}

fn tex_var(v: Var) -> String {
    match v {
        Var::X(k) => format!("x{}", sub(k)),
        Var::Y(k) => format!("y{}", sub(k)),
        Var::Z(k) => format!("z{}", sub(k)),
    }
}

fn sub(k: u32) -> String {
    if k < 10 {
        format!("_{k}")
    } else {
        format!("_{{{k}}}")
    }
}

fn tex_term(t: &Term) -> String {
    match t {
        Term::Var(v) => tex_var(*v),
        Term::Star(a) => format!("{}^*", tex_term_group(a)),
    }
}

fn tex_term_group(t: &Term) -> String {
    match t {
        Term::Var(_) => tex_term(t),
        Term::Star(_) => format!("({})", tex_term(t)),
    }
}

fn tex_atomic(f: &Fo) -> Option<String> {
    Some(match f {
        Fo::True => "\\top".into(),
        Fo::False => "\\bot".into(),
        Fo::R(a, b, c) => format!("R {} {} {}", tex_term(a), tex_term(b), tex_term(c)),
        Fo::O(a) => format!("O {}", tex_term(a)),
        Fo::Leq(a, b) => format!("{} \\preceq {}", tex_term(a), tex_term(b)),
        Fo::Eq(a, b) => format!("{} = {}", tex_term(a), tex_term(b)),
        Fo::Pred(p, a) => format!("{}({})", crate::parser::atom_text(p), tex_term(a)),
        _ => return None,
    })
}

fn tex_inner(f: &Fo) -> String {
    if let Some(s) = tex_atomic(f) {
        return s;
    }
    let child = |c: &Fo| -> String {
        match c {
            Fo::And(..) | Fo::Or(..) | Fo::Implies(..) => format!("({})", tex_inner(c)),
            _ => tex_inner(c),
        }
    };
    match f {
        Fo::Not(a) => match &**a {
            Fo::Leq(x, y) => format!("{} \\not\\preceq {}", tex_term(x), tex_term(y)),
            Fo::Eq(x, y) => format!("{} \\neq {}", tex_term(x), tex_term(y)),
            other => format!("\\neg {}", child(other)),
        },
        Fo::And(a, b) => format!("{} \\land {}", child(a), child(b)),
        Fo::Or(a, b) => format!("{} \\lor {}", child(a), child(b)),
        Fo::Implies(a, b) => format!("{} \\implies {}", child(a), child(b)),
        Fo::Forall(..) | Fo::Exists(..) => {
            let mut prefix = String::new();
            let mut body = f;
            loop {
                match body {
                    Fo::Forall(v, a) => {
                        prefix.push_str(&format!("\\forall {} ", tex_var(*v)));
                        body = a;
                    }
                    Fo::Exists(v, a) => {
                        prefix.push_str(&format!("\\exists {} ", tex_var(*v)));
                        body = a;
                    }
                    _ => break,
                }
            }
            format!("{prefix}({})", tex_inner(body))
        }
        _ => unreachable!("atomic handled above"),
    }
}

/// TeX math rendering; with `omit_closure` the outer universal
/// quantifiers are dropped.
pub fn tex(f: &Fo, omit_closure: bool) -> String {
    if omit_closure {
        tex_inner(f.matrix())
    } else {
        tex_inner(f)
    }
}

fn upper_var(v: Var) -> String {
    match v {
        Var::X(k) => format!("X{k}"),
        Var::Y(k) => format!("Y{k}"),
        Var::Z(k) => format!("Z{k}"),
    }
}

fn lower_var(v: Var) -> String {
    upper_var(v).to_lowercase()
}

fn term_with(t: &Term, var: &dyn Fn(Var) -> String) -> String {
    match t {
        Term::Var(v) => var(*v),
        Term::Star(a) => format!("s({})", term_with(a, var)),
    }
}

fn pred_name(p: &crate::formula::Atom) -> String {
    format!("p{}", p.index)
}

/// TPTP formula body without the `fof(...)` wrapper.
pub fn tptp_body(f: &Fo) -> String {
    let t = |x: &Term| term_with(x, &upper_var);
    let unit = |c: &Fo| -> String {
        match c {
            Fo::And(..) | Fo::Or(..) | Fo::Implies(..) | Fo::Eq(..) => format!("({})", tptp_body(c)),
            _ => tptp_body(c),
        }
    };
    match f {
        Fo::True => "$true".into(),
        Fo::False => "$false".into(),
        Fo::R(a, b, c) => format!("r({},{},{})", t(a), t(b), t(c)),
        Fo::O(a) => format!("o({})", t(a)),
        Fo::Leq(a, b) => format!("leq({},{})", t(a), t(b)),
        Fo::Eq(a, b) => format!("{} = {}", t(a), t(b)),
        Fo::Pred(p, a) => format!("{}({})", pred_name(p), t(a)),
        Fo::Not(a) => format!("~ {}", unit(a)),
        Fo::And(a, b) => format!("{} & {}", unit(a), unit(b)),
        Fo::Or(a, b) => format!("{} | {}", unit(a), unit(b)),
        Fo::Implies(a, b) => format!("{} => {}", unit(a), unit(b)),
        Fo::Forall(v, a) => format!("! [{}] : {}", upper_var(*v), unit(a)),
        Fo::Exists(v, a) => format!("? [{}] : {}", upper_var(*v), unit(a)),
    }
}

fn prover9_body(f: &Fo) -> String {
    let t = |x: &Term| term_with(x, &lower_var);
    let unit = |c: &Fo| -> String {
        match c {
            Fo::And(..) | Fo::Or(..) | Fo::Implies(..) | Fo::Eq(..) | Fo::Forall(..) | Fo::Exists(..) => {
                format!("({})", prover9_body(c))
            }
            _ => prover9_body(c),
        }
    };
    match f {
        Fo::True => "$T".into(),
        Fo::False => "$F".into(),
        Fo::R(a, b, c) => format!("r({},{},{})", t(a), t(b), t(c)),
        Fo::O(a) => format!("o({})", t(a)),
        Fo::Leq(a, b) => format!("leq({},{})", t(a), t(b)),
        Fo::Eq(a, b) => format!("{} = {}", t(a), t(b)),
        Fo::Pred(p, a) => format!("{}({})", pred_name(p), t(a)),
        Fo::Not(a) => format!("-{}", unit(a)),
        Fo::And(a, b) => format!("{} & {}", unit(a), unit(b)),
        Fo::Or(a, b) => format!("{} | {}", unit(a), unit(b)),
        Fo::Implies(a, b) => format!("{} -> {}", unit(a), unit(b)),
        Fo::Forall(v, a) => format!("all {} {}", lower_var(*v), unit(a)),
        Fo::Exists(v, a) => format!("exists {} {}", lower_var(*v), unit(a)),
    }
}

fn spass_body(f: &Fo) -> String {
    let t = |x: &Term| term_with(x, &upper_var);
    match f {
        Fo::True => "true".into(),
        Fo::False => "false".into(),
        Fo::R(a, b, c) => format!("r({},{},{})", t(a), t(b), t(c)),
        Fo::O(a) => format!("o({})", t(a)),
        Fo::Leq(a, b) => format!("leq({},{})", t(a), t(b)),
        Fo::Eq(a, b) => format!("equal({},{})", t(a), t(b)),
        Fo::Pred(p, a) => format!("{}({})", pred_name(p), t(a)),
        Fo::Not(a) => format!("not({})", spass_body(a)),
        Fo::And(a, b) => format!("and({},{})", spass_body(a), spass_body(b)),
        Fo::Or(a, b) => format!("or({},{})", spass_body(a), spass_body(b)),
        Fo::Implies(a, b) => format!("implies({},{})", spass_body(a), spass_body(b)),
        Fo::Forall(v, a) => format!("forall([{}],{})", upper_var(*v), spass_body(a)),
        Fo::Exists(v, a) => format!("exists([{}],{})", upper_var(*v), spass_body(a)),
    }
}

fn term_json(t: &Term) -> Value {
    match t {
        Term::Var(v) => json!(v.to_string()),
        Term::Star(a) => json!({"star": term_json(a)}),
    }
}

pub fn to_json(f: &Fo) -> Value {
    match f {
        Fo::True => json!({"op": "true"}),
        Fo::False => json!({"op": "false"}),
        Fo::R(a, b, c) => json!({"op": "R", "args": [term_json(a), term_json(b), term_json(c)]}),
        Fo::O(a) => json!({"op": "O", "args": [term_json(a)]}),
        Fo::Leq(a, b) => json!({"op": "leq", "args": [term_json(a), term_json(b)]}),
        Fo::Eq(a, b) => json!({"op": "eq", "args": [term_json(a), term_json(b)]}),
        Fo::Pred(p, a) => json!({"op": "pred", "name": p.label(), "v": p.index, "args": [term_json(a)]}),
        Fo::Not(a) => json!({"op": "not", "args": [to_json(a)]}),
        Fo::And(a, b) => json!({"op": "and", "args": [to_json(a), to_json(b)]}),
        Fo::Or(a, b) => json!({"op": "or", "args": [to_json(a), to_json(b)]}),
        Fo::Implies(a, b) => json!({"op": "implies", "args": [to_json(a), to_json(b)]}),
        Fo::Forall(v, a) => json!({"op": "forall", "var": v.to_string(), "args": [to_json(a)]}),
        Fo::Exists(v, a) => json!({"op": "exists", "var": v.to_string(), "args": [to_json(a)]}),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(k: u32) -> Term {
        Term::Var(Var::X(k))
    }
    fn y(k: u32) -> Term {
        Term::Var(Var::Y(k))
    }

    fn b2() -> Fo {
        Fo::implies(
            Fo::r(x(0), x(1), y(1)),
            Fo::exists(Var::X(2), Fo::and(Fo::r(x(0), x(1), x(2)), Fo::r(x(0), x(2), y(1)))),
        )
        .close()
    }

    #[test]
    fn tex_output() {
        assert_eq!(tex(&b2(), true), "R x_0 x_1 y_1 \\implies \\exists x_2 (R x_0 x_1 x_2 \\land R x_0 x_2 y_1)");
        assert!(tex(&b2(), false).starts_with("\\forall x_0 \\forall x_1 \\forall y_1 ("));
        let f = Fo::leq(Term::star(x(1)), y(2));
        assert_eq!(tex(&f, false), "x_1^* \\preceq y_2");
        assert_eq!(tex(&Fo::not(Fo::leq(x(12), y(0))), false), "x_{12} \\not\\preceq y_0");
    }

    #[test]
    fn tptp_output() {
        let opts = RenderOptions { name: "name".into(), ..RenderOptions::default() };
        assert_eq!(render(&Fo::True, OutputFormat::Tptp, &opts).unwrap(), "fof(name, axiom, $true).");
        let got = render(&b2(), OutputFormat::Tptp, &opts).unwrap();
        assert_eq!(
            got,
            "fof(name, axiom, ! [X0] : ! [X1] : ! [Y1] : (r(X0,X1,Y1) => ? [X2] : (r(X0,X1,X2) & r(X0,X2,Y1))))."
        );
        assert!(render(&Fo::o(x(0)), OutputFormat::Tptp, &opts).is_err());
    }

    #[test]
    fn expanded_leq() {
        let f = Fo::leq(Term::star(x(1)), y(2)).close();
        let opts = RenderOptions { expand_leq: true, name: "e".into(), ..RenderOptions::default() };
        let got = render(&f, OutputFormat::Tptp, &opts).unwrap();
        assert!(got.contains("? [Z0] : (o(Z0) & r(Z0,s(X1),Y2))"), "{got}");
    }

    #[test]
    fn names_are_identifiers() {
        assert_eq!(annotation_name("self-distribution"), "self_distribution");
        assert_eq!(annotation_name("B2"), "b2");
        assert_eq!(annotation_name("2x"), "f2x");
    }

    #[test]
    fn other_formats() {
        let opts = RenderOptions::default();
        let p9 = render(&b2(), OutputFormat::Prover9, &opts).unwrap();
        assert!(p9.starts_with("formulas(assumptions).\nall x0 (all x1 (all y1 (r(x0,x1,y1) -> (exists x2 (r(x0,x1,x2) & r(x0,x2,y1))))))"), "{p9}");
        assert!(p9.ends_with("# label(correspondent).\nend_of_list."));
        let spass = render(&b2(), OutputFormat::Spass, &opts).unwrap();
        assert!(spass.starts_with("formula(forall([X0],forall([X1],forall([Y1],implies(r(X0,X1,Y1),exists([X2],and("));
        let js = render(&b2(), OutputFormat::Json, &opts).unwrap();
        let v: Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["op"], "forall");
    }
}
