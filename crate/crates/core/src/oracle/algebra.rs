//! Complex algebra of a frame: operations on up-sets, valuations and
//! evaluation of formulas and quasi-inequalities.

use std::collections::BTreeMap;

use crate::calculus::{Inequality, QuasiInequality};
use crate::error::OracleError;
use crate::formula::{Atom, AtomKind, BinOp, Const, Formula, UnOp};
use crate::oracle::frame::{bits, RmFrame};

pub fn fusion(f: &RmFrame, a: u32, b: u32) -> u32 {
    let mut out = 0;
    for v in bits(a) {
        for w in bits(b) {
            out |= f.r_mask(v, w);
        }
    }
    out
}

pub fn rel_imp(f: &RmFrame, a: u32, b: u32) -> u32 {
    (0..f.size())
        .filter(|&u| bits(a).all(|v| f.r_mask(u, v) & !b == 0))
        .fold(0, |m, u| m | 1 << u)
}

pub fn right_res(f: &RmFrame, a: u32, b: u32) -> u32 {
    (0..f.size())
        .filter(|&w| bits(a).all(|v| f.r_mask(v, w) & !b == 0))
        .fold(0, |m, w| m | 1 << w)
}

pub fn neg(f: &RmFrame, a: u32) -> u32 {
    (0..f.size()).filter(|&u| a >> f.star(u) & 1 == 0).fold(0, |m, u| m | 1 << u)
}

/// Left adjoint of `neg`: the up-closure of `{v* | v ∉ A}`.
pub fn neg_flat(f: &RmFrame, a: u32) -> u32 {
    let image = bits(f.all() & !a).fold(0, |m, v| m | 1 << f.star(v));
    f.up_closure(image)
}

/// Right adjoint of `neg`: `{w | ∀x ∈ A. w ⋠ x*}`.
pub fn neg_sharp(f: &RmFrame, a: u32) -> u32 {
    (0..f.size())
        .filter(|&w| bits(a).all(|x| !f.leq(w, f.star(x))))
        .fold(0, |m, w| m | 1 << w)
}

pub fn coimp(f: &RmFrame, a: u32, b: u32) -> u32 {
    f.up_closure(a & !b)
}

pub fn int_imp(f: &RmFrame, a: u32, b: u32) -> u32 {
    (0..f.size()).filter(|&w| f.up(w) & a & !b == 0).fold(0, |m, w| m | 1 << w)
}

/// Assignment of subsets of worlds (bitmasks) to atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<Atom, u32>);

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn insert(&mut self, a: Atom, ext: u32) {
        self.0.insert(a, ext);
    }

    pub fn get(&self, a: &Atom) -> Option<u32> {
        self.0.get(a).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &u32)> {
        self.0.iter()
    }

    /// Check the range restriction: up-sets for variables, principal
    /// up-sets for nominals, complements of principal down-sets for
    /// co-nominals.
    pub fn validate(&self, f: &RmFrame) -> Result<(), OracleError> {
        for (a, &m) in &self.0 {
            let dom = domain(f, a.kind);
            if !dom.contains(&m) {
                let reason = match a.kind {
                    AtomKind::PropVar => "not an up-set",
                    AtomKind::Nominal => "not a principal up-set",
                    AtomKind::CoNominal => "not the complement of a principal down-set",
                };
                return Err(OracleError::BadValuation { atom: a.label(), reason: reason.into() });
            }
        }
        Ok(())
    }
}

impl FromIterator<(Atom, u32)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Atom, u32)>>(iter: I) -> Self {
        Valuation(iter.into_iter().collect())
    }
}

/// Admissible values for atoms of a kind, ascending and without repeats.
pub fn domain(f: &RmFrame, kind: AtomKind) -> Vec<u32> {
    let mut out: Vec<u32> = match kind {
        AtomKind::PropVar => return f.upsets(),
        AtomKind::Nominal => (0..f.size()).map(|w| f.up(w)).collect(),
        AtomKind::CoNominal => (0..f.size()).map(|v| f.all() & !f.down(v)).collect(),
    };
    out.sort_unstable();
    out.dedup();
    out
}

/// Extension of a formula in the complex algebra.
pub fn extension(f: &RmFrame, v: &Valuation, phi: &Formula) -> Result<u32, OracleError> {
    Ok(match phi {
        Formula::Atom(a) => v.get(a).ok_or_else(|| OracleError::Unbound(a.label()))?,
        Formula::Const(Const::Truth) => f.normal(),
        Formula::Const(Const::Top) => f.all(),
        Formula::Const(Const::Bottom) => 0,
        Formula::Unary(op, x) => {
            let a = extension(f, v, x)?;
            match op {
                UnOp::Neg => neg(f, a),
                UnOp::NegFlat => neg_flat(f, a),
                UnOp::NegSharp => neg_sharp(f, a),
            }
        }
        Formula::Binary(op, x, y) => {
            let (a, b) = (extension(f, v, x)?, extension(f, v, y)?);
            match op {
                BinOp::And => a & b,
                BinOp::Or => a | b,
                BinOp::Fusion => fusion(f, a, b),
                BinOp::RelImp => rel_imp(f, a, b),
                BinOp::CoImp => coimp(f, a, b),
                BinOp::IntImp => int_imp(f, a, b),
                BinOp::RightRes => right_res(f, a, b),
            }
        }
    })
}

pub fn inequality_holds(f: &RmFrame, v: &Valuation, ineq: &Inequality) -> Result<bool, OracleError> {
    let l = extension(f, v, &ineq.lhs)?;
    let r = extension(f, v, &ineq.rhs)?;
    Ok(l & !r == 0)
}

/// Truth of a quasi-inequality under one admissible valuation.
pub fn complex_algebra_eval(f: &RmFrame, v: &Valuation, qi: &QuasiInequality) -> Result<bool, OracleError> {
    v.validate(f)?;
    for p in &qi.premises {
        if !inequality_holds(f, v, p)? {
            return Ok(true);
        }
    }
    inequality_holds(f, v, &qi.conclusion)
}

/// Call `visit` on every admissible valuation of `atoms` until it returns
/// `false`; reports whether every call returned `true`.
pub fn for_all_valuations(
    f: &RmFrame,
    atoms: &[Atom],
    mut visit: impl FnMut(&Valuation) -> bool,
) -> bool {
    let domains: Vec<Vec<u32>> = atoms.iter().map(|a| domain(f, a.kind)).collect();
    if domains.iter().any(Vec::is_empty) {
        return true;
    }
    let mut idx = vec![0usize; atoms.len()];
    let mut val: Valuation = atoms.iter().zip(&domains).map(|(a, d)| (a.clone(), d[0])).collect();
    loop {
        if !visit(&val) {
            return false;
        }
        let mut k = 0;
        loop {
            if k == atoms.len() {
                return true;
            }
            idx[k] += 1;
            if idx[k] < domains[k].len() {
                val.insert(atoms[k].clone(), domains[k][idx[k]]);
                break;
            }
            idx[k] = 0;
            val.insert(atoms[k].clone(), domains[k][0]);
            k += 1;
        }
    }
}
