use rayon::prelude::*;
use serde::Serialize;

use crate::calculus::QuasiInequality;
use crate::error::OracleError;
use crate::fo::{eval_fo, Fo};
use crate::formula::{Atom, Formula};
use crate::oracle::algebra::{self, complex_algebra_eval, extension, for_all_valuations, Valuation};
use crate::oracle::frame::{enumerate_antichain_frames, enumerate_frames, RmFrame};

/// Frame classes the oracle can sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum FrameClass {
    /// Every Routley-Meyer frame.
    #[default]
    Relevance,
    /// Fusion associative and commutative in the complex algebra.
    Bi,
    /// Discrete order, fusion associative, `x → y = ∼(∼y ∘ x)` and
    /// `(x ∘ y)⌣ = y⌣ ∘ x⌣` in the complex algebra.
    Ra,
}

impl From<crate::parser::Syntax> for FrameClass {
    fn from(s: crate::parser::Syntax) -> Self {
        match s {
            crate::parser::Syntax::Relevance => FrameClass::Relevance,
            crate::parser::Syntax::Bi => FrameClass::Bi,
            crate::parser::Syntax::Ra => FrameClass::Ra,
        }
    }
}

impl FrameClass {
    pub fn contains(self, f: &RmFrame) -> bool {
        let ups = f.upsets();
        let assoc = || {
            ups.iter().all(|&a| {
                ups.iter().all(|&b| {
                    ups.iter().all(|&c| {
                        let ab = algebra::fusion(f, a, b);
                        let bc = algebra::fusion(f, b, c);
                        algebra::fusion(f, ab, c) == algebra::fusion(f, a, bc)
                    })
                })
            })
        };
        match self {
            FrameClass::Relevance => true,
            FrameClass::Bi => {
                let comm = ups.iter().all(|&a| ups.iter().all(|&b| algebra::fusion(f, a, b) == algebra::fusion(f, b, a)));
                comm && assoc()
            }
            FrameClass::Ra => {
                if !f.is_antichain() {
                    return false;
                }
                let conv = |x: u32| algebra::neg(f, f.all() & !x);
                let laws = ups.iter().all(|&x| {
                    ups.iter().all(|&y| {
                        algebra::rel_imp(f, x, y) == algebra::neg(f, algebra::fusion(f, algebra::neg(f, y), x))
                            && conv(algebra::fusion(f, x, y)) == algebra::fusion(f, conv(y), conv(x))
                    })
                });
                laws && assoc()
            }
        }
    }

    /// Frames of the class with `n` worlds, in enumeration order.
    pub fn frames(self, n: usize) -> Result<Vec<RmFrame>, OracleError> {
        let stream = match self {
            FrameClass::Ra => enumerate_antichain_frames(n)?,
            _ => enumerate_frames(n)?,
        };
        Ok(stream.filter(|f| self.contains(f)).collect())
    }
}

/// Truth of `phi` at world `w`.
pub fn eval_formula(f: &RmFrame, v: &Valuation, phi: &Formula, w: usize) -> Result<bool, OracleError> {
    Ok(extension(f, v, phi)? >> w & 1 == 1)
}

/// `phi` holds at every normal world under every admissible valuation.
pub fn frame_valid(f: &RmFrame, phi: &Formula) -> bool {
    let atoms = phi.atoms();
    let normal = f.normal();
    for_all_valuations(f, &atoms, |v| {
        let ext = extension(f, v, phi).expect("every atom is valued");
        normal & !ext == 0
    })
}

/// A quasi-inequality holds under every admissible valuation.
pub fn qi_valid(f: &RmFrame, qi: &QuasiInequality) -> bool {
    let atoms = qi.atoms();
    for_all_valuations(f, &atoms, |v| complex_algebra_eval(f, v, qi).expect("admissible valuation"))
}

/// Equivalence of two quasi-inequalities as the calculus uses it: atoms
/// shared by both are fixed, atoms occurring on one side only are
/// universally quantified on that side.
pub fn qi_equivalent(f: &RmFrame, a: &QuasiInequality, b: &QuasiInequality) -> bool {
    let atoms_a = a.atoms();
    let atoms_b = b.atoms();
    let shared: Vec<Atom> = atoms_a.iter().filter(|x| atoms_b.contains(x)).cloned().collect();
    let only_a: Vec<Atom> = atoms_a.iter().filter(|x| !shared.contains(x)).cloned().collect();
    let only_b: Vec<Atom> = atoms_b.iter().filter(|x| !shared.contains(x)).cloned().collect();
    let holds = |qi: &QuasiInequality, base: &Valuation, extra: &[Atom]| {
        for_all_valuations(f, extra, |v| {
            let mut full = base.clone();
            for (atom, m) in v.iter() {
                full.insert(atom.clone(), *m);
            }
            complex_algebra_eval(f, &full, qi).expect("admissible valuation")
        })
    };
    for_all_valuations(f, &shared, |v| holds(a, v, &only_a) == holds(b, v, &only_b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub agree: bool,
    pub frames_checked: usize,
    pub counterexample: Option<RmFrame>,
}

/// Compare frame validity of `phi` with truth of the closed FO sentence
/// `g` on every frame of the class up to `n` worlds.
pub fn correspondence_check_in(phi: &Formula, g: &Fo, n: usize, class: FrameClass) -> Result<Report, OracleError> {
    let mut checked = 0;
    for size in 1..=n {
        let frames = class.frames(size)?;
        checked += frames.len();
        let bad = frames.into_par_iter().find_first(|f| {
            let fo = eval_fo(f, g, &[]).unwrap_or(false);
            frame_valid(f, phi) != fo
        });
        if let Some(frame) = bad {
            return Ok(Report { agree: false, frames_checked: checked, counterexample: Some(frame) });
        }
    }
    Ok(Report { agree: true, frames_checked: checked, counterexample: None })
}

pub fn correspondence_check(phi: &Formula, g: &Fo, n: usize) -> Result<Report, OracleError> {
    correspondence_check_in(phi, g, n, FrameClass::Relevance)
}
