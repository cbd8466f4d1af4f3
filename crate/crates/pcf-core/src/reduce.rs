//! Reduction machinery: leftmost-outermost steps for the structural
//! congruence (beta, eta-contraction, Y-unfolding) and head reduction for
//! the evaluator and the evaluation-tree oracle.

use crate::syntax::{alpha_eq, substitute, Term};

/// One leftmost-outermost congruence step: beta, eta-contraction, or a
/// Y-unfolding `Y M -> M (Y M)`.
pub fn congruence_step(t: &Term) -> Option<Term> {
    // redex at the root?
    if let Term::App(f, a) = t {
        if let Term::Lam(x, _, body) = f.as_ref() {
            return Some(substitute(body, x, a));
        }
        if let Term::Y(ty) = f.as_ref() {
            return Some(Term::app(
                a.as_ref().clone(),
                Term::app(Term::Y(ty.clone()), a.as_ref().clone()),
            ));
        }
    }
    if let Term::Lam(x, _, body) = t {
        // eta-contraction \x. f x -> f when x not free in f
        if let Term::App(f, a) = body.as_ref() {
            if matches!(a.as_ref(), Term::Var(y) if y == x) && !f.free_vars().contains(x) {
                return Some(f.as_ref().clone());
            }
        }
    }
    match t {
        Term::App(f, a) => {
            if let Some(f2) = congruence_step(f) {
                return Some(Term::app(f2, a.as_ref().clone()));
            }
            congruence_step(a).map(|a2| Term::app(f.as_ref().clone(), a2))
        }
        Term::Lam(x, ty, body) => {
            congruence_step(body).map(|b2| Term::lam(x.clone(), ty.clone(), b2))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivVerdict {
    Equivalent,
    NotShown,
}

/// Semi-decides the structural congruence by running bounded reduction
/// chains from both terms and looking for an alpha-equal pair. Sound but
/// not complete: `NotShown` may be returned for congruent terms.
pub fn struct_equiv(m: &Term, n: &Term, budget: usize) -> EquivVerdict {
    let chain = |t: &Term| {
        let mut out = vec![t.clone()];
        let mut cur = t.clone();
        for _ in 0..budget {
            match congruence_step(&cur) {
                Some(next) => {
                    cur = next;
                    out.push(cur.clone());
                }
                None => break,
            }
        }
        out
    };
    let cm = chain(m);
    let cn = chain(n);
    for a in &cm {
        for b in &cn {
            if alpha_eq(a, b) {
                return EquivVerdict::Equivalent;
            }
        }
    }
    EquivVerdict::NotShown
}

/// One step of head reduction for closed terms of type `nat`: beta and
/// Y-unfolding at the head, plus the case rule (scrutinee first, then the
/// selected branch). Returns `None` when the term is a numeral or no rule
/// applies (divergence).
pub fn head_step(t: &Term) -> Option<Term> {
    let (head, args) = t.spine();
    match head {
        Term::Lam(x, _, body) if !args.is_empty() => {
            let reduced = substitute(body, x, args[0]);
            Some(Term::apps(reduced, args[1..].iter().map(|a| (*a).clone())))
        }
        Term::Y(ty) if !args.is_empty() => {
            let m = args[0].clone();
            let unfolded = Term::app(m.clone(), Term::app(Term::Y(ty.clone()), m));
            Some(Term::apps(unfolded, args[1..].iter().map(|a| (*a).clone())))
        }
        Term::CaseK(k) if !args.is_empty() => {
            let k = *k as usize;
            match args[0] {
                Term::Num(i) => {
                    if (*i as usize) < k && args.len() >= k + 1 {
                        let branch = args[*i as usize + 1].clone();
                        Some(Term::apps(
                            branch,
                            args[k + 1..].iter().map(|a| (*a).clone()),
                        ))
                    } else {
                        // scrutinee out of range: no rule applies
                        None
                    }
                }
                _ => head_step(args[0]).map(|s| {
                    Term::apps(
                        Term::CaseK(k as u32),
                        std::iter::once(s).chain(args[1..].iter().map(|a| (*a).clone())),
                    )
                }),
            }
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;
    use crate::syntax::Ty;

    #[test]
    fn one_beta_step() {
        let m = parse_term("(\\x:nat. x) 3").unwrap();
        assert_eq!(
            struct_equiv(&m, &Term::Num(3), 1),
            EquivVerdict::Equivalent
        );
    }

    #[test]
    fn y_unfolding_is_congruent() {
        let m = parse_term("\\x:nat. case[1] x 2").unwrap();
        let ym = Term::app(Term::Y(Ty::Nat), m.clone());
        let unf = Term::app(m, ym.clone());
        assert_eq!(struct_equiv(&ym, &unf, 1), EquivVerdict::Equivalent);
        assert_eq!(struct_equiv(&unf, &ym, 1), EquivVerdict::Equivalent);
    }

    #[test]
    fn distinct_normal_forms_not_shown() {
        let a = parse_term("\\x:nat. omega").unwrap();
        let b = parse_term("\\x:nat. 0").unwrap();
        assert_eq!(struct_equiv(&a, &b, 64), EquivVerdict::NotShown);
    }

    #[test]
    fn eta_contracts() {
        let a = parse_term("\\x:nat. (\\y:nat. y) x").unwrap();
        let b = parse_term("\\y:nat. y").unwrap();
        assert_eq!(struct_equiv(&a, &b, 4), EquivVerdict::Equivalent);
    }
}
