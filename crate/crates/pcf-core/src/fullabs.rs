//! A desk-scale observational-comparison harness.
//!
//! Two routes to the same preorder are implemented: the intrinsic one,
//! which composes denotations with enumerated compact tests into the base
//! type, and the operational one, which applies extracted test *terms* and
//! runs the evaluator. `coherence_check` cross-replays every separation
//! found on one side against the other.
//!
//! Verdicts are bounded claims: `RelatedUpToBounds` means no separator was
//! found among the enumerated tests, never that none exists.

use serde::Serialize;

use crate::arena::Arena;
use crate::compose::compose;
use crate::denote::{strategy_outcome, Denoter};
use crate::error::{Error, Result};
use crate::eval::{evaluate, Outcome};
use crate::evaltree::extract_term;
use crate::generate::enumerate_strategies;
use crate::strategy::Strategy;
use crate::syntax::{typecheck, Ctx, Term, Ty};

#[derive(Debug, Clone)]
pub enum Verdict {
    /// No separator among the enumerated tests; `tests` were tried.
    RelatedUpToBounds { tests: usize },
    /// A compact test sends the left side to `value` but not the right.
    SeparatedByTest { test: Strategy, value: u32 },
    /// A closed test term converges to `value` on the left side only.
    SeparatedByContext { context: Term, value: u32 },
}

impl Verdict {
    pub fn is_related(&self) -> bool {
        matches!(self, Verdict::RelatedUpToBounds { .. })
    }

    pub fn separation_value(&self) -> Option<u32> {
        match self {
            Verdict::RelatedUpToBounds { .. } => None,
            Verdict::SeparatedByTest { value, .. }
            | Verdict::SeparatedByContext { value, .. } => Some(*value),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Verdict::RelatedUpToBounds { tests } => {
                format!("related-up-to-bounds ({} tests)", tests)
            }
            Verdict::SeparatedByTest { test, value } => {
                let shown = crate::serialize::write_strategy(test)
                    .unwrap_or_else(|_| "<unserializable test>".into());
                format!("separated (value {}) by test:\n{}", value, shown)
            }
            Verdict::SeparatedByContext { context, value } => {
                format!("separated (value {}) by context: {}", value, context)
            }
        }
    }
}

/// All compact tests `[[T]] -> flat` up to the norm bound, in the
/// reproducible enumeration order (norm, then serialized form).
pub fn tests_at(ty: &Ty, norm_bound: usize, window: u32) -> Result<Vec<Strategy>> {
    enumerate_strategies(
        &Arena::of_context(std::slice::from_ref(ty), window),
        &Arena::flat(window),
        norm_bound,
    )
}

fn point_at(f: &Strategy, ty: &Ty, window: u32) -> Result<()> {
    if f.dom().n_roots() != 0 {
        return Err(Error::ShapeMismatch(
            "comparison expects closed points".into(),
        ));
    }
    if *f.cod() != Arena::of_type(ty, window) {
        return Err(Error::Type(format!(
            "point does not live at {} (window {})",
            ty, window
        )));
    }
    Ok(())
}

/// Does every enumerated test that converges on `f` converge, with the
/// same value, on `g`?
pub fn intrinsic_leq(
    f: &Strategy,
    g: &Strategy,
    ty: &Ty,
    norm_bound: usize,
    window: u32,
) -> Result<Verdict> {
    point_at(f, ty, window)?;
    point_at(g, ty, window)?;
    let tests = tests_at(ty, norm_bound, window)?;
    let count = tests.len();
    for alpha in tests {
        if let Some(n) = strategy_outcome(&compose(&alpha, f)?)? {
            if strategy_outcome(&compose(&alpha, g)?)? != Some(n) {
                return Ok(Verdict::SeparatedByTest { test: alpha, value: n });
            }
        }
    }
    Ok(Verdict::RelatedUpToBounds { tests: count })
}

/// Does every extracted test term that converges on `m` converge, with the
/// same value, on `n`? Test terms are the extractions of the same compact
/// tests `intrinsic_leq` enumerates.
pub fn obs_compare(
    m: &Term,
    n: &Term,
    norm_bound: usize,
    fuel: u64,
    window: u32,
) -> Result<Verdict> {
    let tm = typecheck(&Ctx::empty(), m)?;
    let tn = typecheck(&Ctx::empty(), n)?;
    if tm != tn {
        return Err(Error::Type(format!(
            "compared terms have different types: {} vs {}",
            tm, tn
        )));
    }
    let tests = tests_at(&tm, norm_bound, window)?;
    let count = tests.len();
    for alpha in tests {
        let p = extract_term(&alpha)?;
        if let Outcome::Converges(v) = evaluate(&Term::app(p.clone(), m.clone()), fuel)? {
            if evaluate(&Term::app(p.clone(), n.clone()), fuel)? != Outcome::Converges(v)
            {
                return Ok(Verdict::SeparatedByContext { context: p, value: v });
            }
        }
    }
    Ok(Verdict::RelatedUpToBounds { tests: count })
}

#[derive(Debug, Clone, Serialize)]
pub struct CoherenceReport {
    /// Separation value found by the intrinsic route, if any.
    pub intrinsic: Option<u32>,
    /// Separation value found by the operational route, if any.
    pub observational: Option<u32>,
    /// Both routes agree, and every separation replays on the other side.
    pub coherent: bool,
}

/// Compares `m <= n` along both routes and cross-replays any separation:
/// an intrinsic separator must separate operationally once extracted, and
/// an operational separator must separate intrinsically once denoted.
pub fn coherence_check(
    m: &Term,
    n: &Term,
    norm_bound: usize,
    fuel: u64,
    window: u32,
    unroll: u32,
) -> Result<CoherenceReport> {
    let ty = typecheck(&Ctx::empty(), m)?;
    let f = Denoter::new(window, unroll).denote_closed(m)?;
    let g = Denoter::new(window, unroll).denote_closed(n)?;
    let fp = f.resplit(Arena::product([]), Arena::of_type(&ty, window))?;
    let gp = g.resplit(Arena::product([]), Arena::of_type(&ty, window))?;
    let iv = intrinsic_leq(&fp, &gp, &ty, norm_bound, window)?;
    let ov = obs_compare(m, n, norm_bound, fuel, window)?;

    let mut coherent = iv.is_related() == ov.is_related();
    if let Verdict::SeparatedByTest { test, value } = &iv {
        let p = extract_term(test)?;
        coherent &= evaluate(&Term::app(p.clone(), m.clone()), fuel)?
            == Outcome::Converges(*value);
        coherent &= evaluate(&Term::app(p, n.clone()), fuel)?
            != Outcome::Converges(*value);
    }
    if let Verdict::SeparatedByContext { context, value } = &ov {
        let alpha = Denoter::new(window, unroll)
            .denote_closed(context)?
            .resplit(
                Arena::of_context(std::slice::from_ref(&ty), window),
                Arena::flat(window),
            )?;
        coherent &=
            strategy_outcome(&compose(&alpha, &fp)?)? == Some(*value);
        coherent &=
            strategy_outcome(&compose(&alpha, &gp)?)? != Some(*value);
    }
    Ok(CoherenceReport {
        intrinsic: iv.separation_value(),
        observational: ov.separation_value(),
        coherent,
    })
}
