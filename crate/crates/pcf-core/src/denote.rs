//! Denotation of PCF terms as strategies.
//!
//! A term `Gamma |- M : T` denotes a strategy from the context product to
//! the arena of `T`. The base type is interpreted at a finite window, and
//! the fixpoint combinator as a finite chain of unrollings
//! `Y = lub_k G^k(bot)` cut off at a configurable depth (with early exit
//! when the chain stabilizes, which it must at any fixed window).

use std::collections::HashMap;

use crate::arena::Arena;
use crate::compose::compose;
use crate::error::{Error, Result};
use crate::eval::Outcome;
use crate::strategy::Strategy;
use crate::structural::{
    case_strategy, curry, ev, pair, proj, weaken_closed,
};
use crate::syntax::{case_type, typecheck, Ctx, Term, Ty};

pub const DEFAULT_WINDOW: u32 = 4;
pub const DEFAULT_UNROLL: u32 = 16;

/// Shared denotation parameters plus a memo table for fixpoint strategies,
/// which are expensive to build and recur constantly.
pub struct Denoter {
    pub window: u32,
    pub unroll: u32,
    y_cache: HashMap<Ty, Strategy>,
}

impl Denoter {
    pub fn new(window: u32, unroll: u32) -> Denoter {
        Denoter { window, unroll, y_cache: HashMap::new() }
    }

    pub fn arena_of(&self, ty: &Ty) -> Arena {
        Arena::of_type(ty, self.window)
    }

    fn ctx_arena(&self, ctx: &Ctx) -> Arena {
        Arena::of_context(&ctx.types(), self.window)
    }

    fn ctx_parts(&self, ctx: &Ctx) -> Vec<Arena> {
        ctx.0.iter().map(|(_, t)| self.arena_of(t)).collect()
    }

    /// `[[Gamma |- m]] : [[Gamma]] -> [[T]]`.
    pub fn denote(&mut self, ctx: &Ctx, m: &Term) -> Result<Strategy> {
        match m {
            Term::Var(x) => {
                let (i, _) = ctx
                    .lookup(x)
                    .ok_or_else(|| Error::UnboundVariable(x.clone()))?;
                proj(&self.ctx_parts(ctx), i)
            }
            Term::Lam(x, t, body) => {
                let inner = ctx.extend(x.clone(), t.clone());
                let d = self.denote(&inner, body)?;
                curry(&d, self.ctx_arena(ctx), &self.arena_of(t))
            }
            Term::App(f, a) => {
                let at = typecheck(ctx, a)?;
                let bt = match typecheck(ctx, f)? {
                    Ty::Arrow(_, b) => *b,
                    t => {
                        return Err(Error::Type(format!(
                            "cannot apply a term of type {}",
                            t
                        )))
                    }
                };
                let df = self.denote(ctx, f)?;
                let da = self.denote(ctx, a)?;
                let e = ev(&self.arena_of(&at), &self.arena_of(&bt))?;
                compose(&e, &pair(&df, &da)?)
            }
            Term::Num(n) => Strategy::constant(self.ctx_arena(ctx), *n, self.window)
                .map_err(|e| match e {
                    Error::PointOutOfWindow { point, window } => {
                        Error::NumeralOutOfWindow { numeral: point, window }
                    }
                    e => e,
                }),
            Term::Omega => Ok(Strategy::bot(
                self.ctx_arena(ctx),
                Arena::flat(self.window),
            )),
            Term::CaseK(k) => {
                let closed = case_strategy(*k, self.window)?
                    .resplit(Arena::unit(), self.arena_of(&case_type(*k)))?;
                weaken_closed(&closed, &self.ctx_arena(ctx))
            }
            Term::Y(t) => {
                let y = self.y_strategy(t)?;
                weaken_closed(&y, &self.ctx_arena(ctx))
            }
        }
    }

    /// Denotation of a closed term.
    pub fn denote_closed(&mut self, m: &Term) -> Result<Strategy> {
        self.denote(&Ctx::empty(), m)
    }

    /// The fixpoint strategy at type `(t -> t) -> t` as the limit of
    /// `s_0 = bot`, `s_{i+1} = [[F |- \f. f (F f)]] . s_i`.
    fn y_strategy(&mut self, t: &Ty) -> Result<Strategy> {
        if let Some(s) = self.y_cache.get(t) {
            return Ok(s.clone());
        }
        let yty = Ty::arrow(Ty::arrow(t.clone(), t.clone()), t.clone());
        let step_term = Term::lam(
            "f",
            Ty::arrow(t.clone(), t.clone()),
            Term::app(
                Term::var("f"),
                Term::app(Term::var("F"), Term::var("f")),
            ),
        );
        let ctx = Ctx::empty().extend("F", yty.clone());
        let step = self.denote(&ctx, &step_term)?;
        let mut s = Strategy::bot(Arena::unit(), self.arena_of(&yty));
        for _ in 0..self.unroll {
            let next = compose(&step, &s)?;
            if next == s {
                break;
            }
            s = next;
        }
        self.y_cache.insert(t.clone(), s.clone());
        Ok(s)
    }
}

/// Reads the outcome a closed `nat` denotation exhibits: its answer to the
/// opening question, if any.
pub fn strategy_outcome(s: &Strategy) -> Result<Option<u32>> {
    use crate::arena::{Move, MoveKind};
    if s.dom().n_roots() != 0 || s.cod().n_roots() != 1 {
        return Err(Error::ShapeMismatch(
            "outcomes are read off closed strategies at the base type".into(),
        ));
    }
    match s.respond(&vec![(Move::question(vec![0]), None)]) {
        None => Ok(None),
        Some((m, _)) => match m.kind {
            MoveKind::Answer(v) => Ok(Some(v)),
            MoveKind::Question => Err(Error::IllFormedStrategy(
                "closed base strategy asked a question".into(),
            )),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdequacyReport {
    pub operational: Outcome,
    pub denotational: Option<u32>,
    /// Least unroll depth at which the denotation already answers, when it
    /// does at all within `k_max`.
    pub k_converged: Option<u32>,
    pub agree: bool,
}

/// Compares the operational outcome of a program with the outcome of its
/// denotation, sampled along the unrolling chain up to `k_max`. Since the
/// chain is monotone, the outcome at `k_max` decides whether any depth
/// answers; the least such depth is then located by bisection.
pub fn adequacy_check(
    p: &Term,
    fuel: u64,
    window: u32,
    k_max: u32,
) -> Result<AdequacyReport> {
    let operational = crate::eval::evaluate(p, fuel)?;
    let outcome_at = |k: u32| -> Result<Option<u32>> {
        strategy_outcome(&Denoter::new(window, k).denote_closed(p)?)
    };
    let denotational = outcome_at(k_max)?;
    let k_converged = match denotational {
        None => None,
        Some(_) => {
            let (mut lo, mut hi) = (0u32, k_max);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if outcome_at(mid)?.is_some() {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            Some(lo)
        }
    };
    let agree = match (operational, denotational) {
        (Outcome::Converges(n), Some(v)) => n == v,
        (Outcome::FuelExhausted, None) => true,
        _ => false,
    };
    Ok(AdequacyReport { operational, denotational, k_converged, agree })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;
    use crate::structural::identity;

    fn dn(src: &str, w: u32) -> Strategy {
        Denoter::new(w, DEFAULT_UNROLL)
            .denote_closed(&parse_term(src).unwrap())
            .unwrap()
    }

    #[test]
    fn numeral_is_point() {
        assert_eq!(dn("3", 4), Strategy::point(3, 4).unwrap());
    }

    #[test]
    fn numeral_out_of_window() {
        let r = Denoter::new(3, 4).denote_closed(&Term::Num(3));
        assert!(matches!(
            r,
            Err(Error::NumeralOutOfWindow { numeral: 3, window: 3 })
        ));
    }

    #[test]
    fn beta_redex_denotes_its_value() {
        assert_eq!(dn("(\\x:nat. x) 2", 4), Strategy::point(2, 4).unwrap());
    }

    #[test]
    fn lambda_is_named_identity() {
        let w = 4;
        let flat = Arena::flat(w);
        let id = identity(&flat).unwrap();
        let named = curry(&id, Arena::unit(), &flat).unwrap();
        assert_eq!(dn("\\x:nat. x", w), named);
    }

    #[test]
    fn case_skips_divergent_branch() {
        assert_eq!(
            dn("case[2] 1 omega 5", 6),
            Strategy::point(5, 6).unwrap()
        );
    }

    #[test]
    fn omega_is_bottom() {
        assert!(dn("omega", 4).is_bot());
    }

    #[test]
    fn trivial_fixpoint_is_bottom() {
        assert!(dn("Y[nat] (\\x:nat. x)", 3).is_bot());
    }

    #[test]
    fn countdown_recursion_denotes_zero() {
        let src =
            "Y[nat -> nat] (\\f:nat -> nat. \\x:nat. case[3] x 0 (f 0) (f 1)) 2";
        assert_eq!(dn(src, 3), Strategy::point(0, 3).unwrap());
    }

    #[test]
    fn adequacy_on_smoke_programs() {
        for src in [
            "0",
            "case[2] 0 3 omega",
            "(\\f:nat -> nat. f 1) (\\x:nat. x)",
            "Y[nat] (\\x:nat. x)",
            "Y[nat -> nat] (\\f:nat -> nat. \\x:nat. case[3] x 0 (f 0) (f 1)) 2",
        ] {
            let p = parse_term(src).unwrap();
            let r = adequacy_check(&p, 10_000, 4, 8).unwrap();
            assert!(r.agree, "{}: {:?}", src, r);
        }
    }
}
