//! Big-step evaluation of programs (closed terms of type `nat`), driven by
//! a deterministic head-reduction schedule with fuel.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::syntax::{substitute, typecheck, Ctx, Term, Ty};

pub const DEFAULT_FUEL: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Converges(u32),
    FuelExhausted,
}

/// Runs `p` for at most `fuel` rule applications. A term with no applicable
/// rule (omega at the head, or `case[k]` stuck on a scrutinee >= k) is
/// reported as `FuelExhausted`: it diverges under the evaluation relation.
pub fn evaluate(p: &Term, fuel: u64) -> Result<Outcome> {
    let ty = typecheck(&Ctx::empty(), p)?;
    if ty != Ty::Nat {
        return Err(Error::Type(format!(
            "programs must have type nat, got {}",
            ty
        )));
    }
    let mut cur = p.clone();
    let mut left = fuel;
    // pending `case` dispatches: (k, the arguments after the scrutinee).
    // Holding them on an explicit stack keeps each step independent of how
    // deeply stuck scrutinees have nested, so divergent programs that grow
    // a chain of case frames cost linear time and constant term depth.
    let mut frames: Vec<(u32, Vec<Term>)> = Vec::new();
    loop {
        if let Term::Num(n) = cur {
            match frames.pop() {
                None => return Ok(Outcome::Converges(n)),
                Some((k, rest)) => {
                    if (n as usize) >= k as usize {
                        // scrutinee out of range: no rule applies
                        return Ok(Outcome::FuelExhausted);
                    }
                    if left == 0 {
                        return Ok(Outcome::FuelExhausted);
                    }
                    left -= 1;
                    let branch = rest[n as usize].clone();
                    cur = Term::apps(branch, rest[k as usize..].iter().cloned());
                    continue;
                }
            }
        }
        if left == 0 {
            return Ok(Outcome::FuelExhausted);
        }
        left -= 1;
        enum Step {
            Replace(Term),
            Descend(u32, Vec<Term>, Term),
        }
        let step = {
            let (head, args) = cur.spine();
            match head {
                Term::Lam(x, _, body) if !args.is_empty() => {
                    Some(Step::Replace(Term::apps(
                        substitute(body, x, args[0]),
                        args[1..].iter().map(|a| (*a).clone()),
                    )))
                }
                Term::Y(ty) if !args.is_empty() => {
                    let m = args[0].clone();
                    let unfolded =
                        Term::app(m.clone(), Term::app(Term::Y(ty.clone()), m));
                    Some(Step::Replace(Term::apps(
                        unfolded,
                        args[1..].iter().map(|a| (*a).clone()),
                    )))
                }
                Term::CaseK(k) if args.len() >= *k as usize + 1 => Some(Step::Descend(
                    *k,
                    args[1..].iter().map(|a| (*a).clone()).collect(),
                    args[0].clone(),
                )),
                _ => None,
            }
        };
        match step {
            None => return Ok(Outcome::FuelExhausted),
            Some(Step::Replace(t)) => cur = t,
            Some(Step::Descend(k, rest, scrutinee)) => {
                frames.push((k, rest));
                cur = scrutinee;
            }
        }
    }
}
