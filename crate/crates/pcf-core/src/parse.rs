//! Concrete syntax: `\x:T. M`, application by juxtaposition, `case[k]`,
//! `omega`, `Y[T]`, decimal numerals, `--` line comments.

use crate::error::{Error, Result};
use crate::syntax::{Term, Ty};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u32),
    Lambda,
    Colon,
    Dot,
    Arrow,
    LParen,
    RParen,
    LBrack,
    RBrack,
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    let err = |line, col, msg: &str| Error::Syntax {
        line,
        col,
        msg: msg.to_string(),
    };
    while let Some(&c) = chars.peek() {
        let (l, co) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '-' => {
                chars.next();
                bump(c, &mut line, &mut col);
                match chars.peek() {
                    Some('-') => {
                        // line comment
                        for d in chars.by_ref() {
                            bump(d, &mut line, &mut col);
                            if d == '\n' {
                                break;
                            }
                        }
                    }
                    Some('>') => {
                        chars.next();
                        bump('>', &mut line, &mut col);
                        out.push(Lexed { tok: Tok::Arrow, line: l, col: co });
                    }
                    _ => return Err(err(l, co, "expected `->` or `--`")),
                }
            }
            '\\' => {
                chars.next();
                bump(c, &mut line, &mut col);
                out.push(Lexed { tok: Tok::Lambda, line: l, col: co });
            }
            ':' => {
                chars.next();
                bump(c, &mut line, &mut col);
                out.push(Lexed { tok: Tok::Colon, line: l, col: co });
            }
            '.' => {
                chars.next();
                bump(c, &mut line, &mut col);
                out.push(Lexed { tok: Tok::Dot, line: l, col: co });
            }
            '(' => {
                chars.next();
                bump(c, &mut line, &mut col);
                out.push(Lexed { tok: Tok::LParen, line: l, col: co });
            }
            ')' => {
                chars.next();
                bump(c, &mut line, &mut col);
                out.push(Lexed { tok: Tok::RParen, line: l, col: co });
            }
            '[' => {
                chars.next();
                bump(c, &mut line, &mut col);
                out.push(Lexed { tok: Tok::LBrack, line: l, col: co });
            }
            ']' => {
                chars.next();
                bump(c, &mut line, &mut col);
                out.push(Lexed { tok: Tok::RBrack, line: l, col: co });
            }
            d if d.is_ascii_digit() => {
                let mut n = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                let v: u32 = n
                    .parse()
                    .map_err(|_| err(l, co, "numeral too large"))?;
                out.push(Lexed { tok: Tok::Num(v), line: l, col: co });
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                let mut s = String::new();
                while let Some(&a) = chars.peek() {
                    if a.is_ascii_alphanumeric() || a == '_' || a == '\'' {
                        s.push(a);
                        chars.next();
                        bump(a, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                out.push(Lexed { tok: Tok::Ident(s), line: l, col: co });
            }
            other => {
                return Err(err(l, co, &format!("unexpected character `{}`", other)))
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn err(&self, msg: &str) -> Error {
        let (line, col) = self
            .toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1));
        Error::Syntax { line, col, msg: msg.to_string() }
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.tok.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if *t == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(&format!("expected {}", what))),
        }
    }

    fn ty(&mut self) -> Result<Ty> {
        let lhs = self.ty_atom()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.ty()?;
            Ok(Ty::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_atom(&mut self) -> Result<Ty> {
        match self.next() {
            Some(Tok::Ident(s)) if s == "nat" => Ok(Ty::Nat),
            Some(Tok::Ident(s)) if s == "i" => Ok(Ty::Iota),
            Some(Tok::LParen) => {
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err("expected a type"))
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        if self.peek() == Some(&Tok::Lambda) {
            self.pos += 1;
            let x = match self.next() {
                Some(Tok::Ident(s)) if !is_keyword(&s) => s,
                _ => {
                    self.pos = self.pos.saturating_sub(1);
                    return Err(self.err("expected a variable name after `\\`"));
                }
            };
            self.expect(Tok::Colon, "`:`")?;
            let t = self.ty()?;
            self.expect(Tok::Dot, "`.`")?;
            let body = self.term()?;
            Ok(Term::lam(x, t, body))
        } else {
            let mut head = self.atom()?;
            while self.starts_atom() {
                let arg = self.atom()?;
                head = Term::app(head, arg);
            }
            Ok(head)
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::LParen) | Some(Tok::Lambda)
        )
    }

    fn atom(&mut self) -> Result<Term> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Term::Num(n)),
            Some(Tok::Ident(s)) if s == "omega" => Ok(Term::Omega),
            Some(Tok::Ident(s)) if s == "Y" => {
                self.expect(Tok::LBrack, "`[` after `Y`")?;
                let t = self.ty()?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Term::Y(t))
            }
            Some(Tok::Ident(s)) if s == "case" => {
                self.expect(Tok::LBrack, "`[` after `case`")?;
                let k = match self.next() {
                    Some(Tok::Num(k)) => k,
                    _ => {
                        self.pos = self.pos.saturating_sub(1);
                        return Err(self.err("expected an arity numeral"));
                    }
                };
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Term::CaseK(k))
            }
            Some(Tok::Ident(s)) if !is_keyword(&s) => Ok(Term::var(s)),
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(Tok::Lambda) => {
                self.pos -= 1;
                self.term()
            }
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err("expected a term"))
            }
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "nat" | "i" | "omega" | "case")
}

/// Parses a term, requiring all input to be consumed.
pub fn parse_term(text: &str) -> Result<Term> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let t = p.term()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after term"));
    }
    Ok(t)
}

/// Parses a type, requiring all input to be consumed.
pub fn parse_type(text: &str) -> Result<Ty> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let t = p.ty()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input after type"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::alpha_eq;

    #[test]
    fn literal() {
        assert_eq!(parse_term("0").unwrap(), Term::Num(0));
    }

    #[test]
    fn case_under_lambda() {
        let t = parse_term("\\x:nat. case[2] x 1 0").unwrap();
        let want = Term::lam(
            "x",
            Ty::Nat,
            Term::apps(
                Term::CaseK(2),
                [Term::var("x"), Term::Num(1), Term::Num(0)],
            ),
        );
        assert_eq!(t, want);
    }

    #[test]
    fn fixpoint_application() {
        let t = parse_term("Y[nat] (\\x:nat. x)").unwrap();
        let want = Term::app(
            Term::Y(Ty::Nat),
            Term::lam("x", Ty::Nat, Term::var("x")),
        );
        assert_eq!(t, want);
    }

    #[test]
    fn comments_and_whitespace() {
        let t = parse_term("-- a numeral\n  3 -- trailing\n").unwrap();
        assert_eq!(t, Term::Num(3));
    }

    #[test]
    fn arrow_right_associates() {
        let t = parse_type("nat -> nat -> nat").unwrap();
        assert_eq!(
            t,
            Ty::arrow(Ty::Nat, Ty::arrow(Ty::Nat, Ty::Nat))
        );
        let u = parse_type("(nat -> nat) -> nat").unwrap();
        assert_eq!(
            u,
            Ty::arrow(Ty::arrow(Ty::Nat, Ty::Nat), Ty::Nat)
        );
    }

    #[test]
    fn print_parse_round_trip() {
        for src in [
            "\\x:nat. case[2] x 1 0",
            "Y[nat -> nat] (\\f:nat -> nat. \\x:nat. f x)",
            "(\\x:nat. x) 3",
            "\\f:(nat -> nat) -> nat. f (\\x:nat. omega)",
        ] {
            let t = parse_term(src).unwrap();
            let back = parse_term(&t.to_string()).unwrap();
            assert!(alpha_eq(&t, &back), "{} -> {}", src, t);
        }
    }

    #[test]
    fn error_has_position() {
        match parse_term("\\x:nat") {
            Err(Error::Syntax { line: 1, .. }) => {}
            other => panic!("unexpected: {:?}", other),
        }
    }
}
