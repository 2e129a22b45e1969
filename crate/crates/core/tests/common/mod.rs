//! Helpers shared by the integration tests: seeded generators for formulas,
//! frames and valuations, plus a TPTP syntax checker.

#![allow(dead_code)]

pub mod tptp;

use pearl::oracle::{check_frame, domain, frame_from_bits, RmFrame, Valuation};
use pearl::{Atom, Formula};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Connectives a generated formula may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fragment {
    /// `t ⊤ ⊥ ∼ ∧ ∨ ∘ →`
    Base,
    /// Base plus `∼♭ ∼♯ ⇒ ↢ −<`.
    Extended,
}

/// Random formula of depth at most `depth` (atoms have depth 1) over the
/// variables `p_0 .. p_{vars-1}`.
pub fn formula(rng: &mut impl Rng, depth: usize, vars: u32, frag: Fragment) -> Formula {
    assert!(depth >= 1 && vars >= 1);
    if depth == 1 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Formula::truth(),
            1 => Formula::top(),
            2 => Formula::bottom(),
            _ => Formula::var(rng.gen_range(0..vars)),
        };
    }
    let d = depth - 1;
    let ops = match frag {
        Fragment::Base => 5,
        Fragment::Extended => 10,
    };
    match rng.gen_range(0..ops) {
        0 => Formula::neg(formula(rng, d, vars, frag)),
        1 => Formula::and(formula(rng, d, vars, frag), formula(rng, d, vars, frag)),
        2 => Formula::or(formula(rng, d, vars, frag), formula(rng, d, vars, frag)),
        3 => Formula::fusion(formula(rng, d, vars, frag), formula(rng, d, vars, frag)),
        4 => Formula::imp(formula(rng, d, vars, frag), formula(rng, d, vars, frag)),
        5 => Formula::neg_flat(formula(rng, d, vars, frag)),
        6 => Formula::neg_sharp(formula(rng, d, vars, frag)),
        7 => Formula::int_imp(formula(rng, d, vars, frag), formula(rng, d, vars, frag)),
        8 => Formula::right_res(formula(rng, d, vars, frag), formula(rng, d, vars, frag)),
        _ => Formula::coimp(formula(rng, d, vars, frag), formula(rng, d, vars, frag)),
    }
}

/// Uniform random frame with `n ≤ 3` worlds, by rejection sampling over
/// `(O, R, star)` candidates.
pub fn frame(rng: &mut impl Rng, n: usize) -> RmFrame {
    assert!((1..=3).contains(&n));
    let bits = n * n * n;
    loop {
        let normal = rng.gen_range(0..1u32 << n);
        let r_bits = rng.gen_range(0..1u64 << bits);
        let star: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let f = frame_from_bits(n, normal, r_bits, star);
        if check_frame(&f) {
            return f;
        }
    }
}

/// Random admissible valuation of `atoms`.
pub fn valuation(rng: &mut impl Rng, f: &RmFrame, atoms: &[Atom]) -> Valuation {
    let mut v = Valuation::new();
    for a in atoms {
        let d = domain(f, a.kind);
        v.insert(a.clone(), *d.choose(rng).expect("nonempty domain"));
    }
    v
}

/// Every subformula, the formula itself included.
pub fn subformulas(f: &Formula) -> Vec<&Formula> {
    let mut out = vec![f];
    for c in f.children() {
        out.extend(subformulas(c));
    }
    out
}

pub fn grow(leaf: BoxedStrategy<Formula>, depth: u32, frag: Fragment) -> BoxedStrategy<Formula> {
    leaf.prop_recursive(depth, 64, 2, move |inner| {
        let un = |op: fn(Formula) -> Formula, s: BoxedStrategy<Formula>| s.prop_map(op).boxed();
        let bin = |op: fn(Formula, Formula) -> Formula, s: BoxedStrategy<Formula>| {
            (s.clone(), s).prop_map(move |(a, b)| op(a, b)).boxed()
        };
        let mut arms = vec![
            un(Formula::neg, inner.clone()),
            bin(Formula::and, inner.clone()),
            bin(Formula::or, inner.clone()),
            bin(Formula::fusion, inner.clone()),
            bin(Formula::imp, inner.clone()),
        ];
        if frag == Fragment::Extended {
            arms.extend([
                un(Formula::neg_flat, inner.clone()),
                un(Formula::neg_sharp, inner.clone()),
                bin(Formula::int_imp, inner.clone()),
                bin(Formula::right_res, inner.clone()),
                bin(Formula::coimp, inner),
            ]);
        }
        proptest::strategy::Union::new(arms)
    })
    .boxed()
}

fn constant() -> BoxedStrategy<Formula> {
    prop_oneof![Just(Formula::truth()), Just(Formula::top()), Just(Formula::bottom())].boxed()
}

/// Formulas of depth at most `depth + 1` over `vars` variables.
pub fn arb_formula(vars: u32, depth: u32, frag: Fragment) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![4 => (0..vars).prop_map(Formula::var), 1 => constant()].boxed();
    grow(leaf, depth, frag)
}

/// Pure formulas over nominals `0..nom` and co-nominals `0..conom`.
pub fn arb_pure(nom: u32, conom: u32, depth: u32) -> BoxedStrategy<Formula> {
    let leaf = prop_oneof![
        3 => (0..nom).prop_map(Formula::nominal),
        3 => (0..conom).prop_map(Formula::conominal),
        1 => constant(),
    ]
    .boxed();
    grow(leaf, depth, Fragment::Extended)
}

/// Frame with 1 to 3 worlds drawn from a seed.
pub fn arb_frame(max: usize) -> BoxedStrategy<RmFrame> {
    (1..=max, any::<u64>()).prop_map(|(n, seed)| frame(&mut rng(seed), n)).boxed()
}
