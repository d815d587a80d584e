use std::fmt;

use super::{Formula, Term};

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

pub fn print_term(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t, 0);
    s
}

pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, IFF, true);
    s
}

fn infix_prec(t: &Term) -> Option<u8> {
    match t {
        Term::App(f, args) if args.len() == 2 && f == "+" => Some(1),
        Term::App(f, args) if args.len() == 2 && f == "*" => Some(2),
        _ => None,
    }
}

fn write_term(out: &mut String, t: &Term, ctx: u8) {
    match t {
        Term::Var(v) | Term::Const(v) => out.push_str(v),
        Term::App(f, args) => {
            if let Some(prec) = infix_prec(t) {
                let paren = prec < ctx;
                if paren {
                    out.push('(');
                }
                write_term(out, &args[0], prec);
                out.push_str(if f == "+" { " + " } else { " * " });
                write_term(out, &args[1], prec + 1);
                if paren {
                    out.push(')');
                }
            } else {
                out.push_str(f);
                out.push('(');
                write_args(out, args);
                out.push(')');
            }
        }
    }
}

fn write_args(out: &mut String, args: &[Term]) {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_term(out, a, 0);
    }
}

/// `tail` is true when nothing follows this formula inside the enclosing
/// parenthesis level, so a quantifier's maximal scope needs no parentheses.
fn write_formula(out: &mut String, f: &Formula, ctx: u8, tail: bool) {
    use Formula::*;
    match f {
        Pred(p, args) => {
            out.push_str(p);
            out.push('(');
            write_args(out, args);
            out.push(')');
        }
        Eq(l, r) => {
            // an equation is an operand of the surrounding connective
            write_term(out, l, 0);
            out.push_str(" = ");
            write_term(out, r, 0);
        }
        Not(a) => unary(out, "~", a, tail),
        G(a) => unary(out, "G ", a, tail),
        H(a) => unary(out, "H ", a, tail),
        F(a) => unary(out, "F ", a, tail),
        P(a) => unary(out, "P ", a, tail),
        Always(a) => unary(out, "box ", a, tail),
        Sometime(a) => unary(out, "dia ", a, tail),
        Forall(x, a) | Exists(x, a) => {
            let paren = !tail;
            if paren {
                out.push('(');
            }
            out.push_str(if matches!(f, Forall(..)) { "forall " } else { "exists " });
            out.push_str(x);
            out.push_str(". ");
            write_formula(out, a, IFF, true);
            if paren {
                out.push(')');
            }
        }
        And(a, b) => binary(out, " & ", AND, false, a, b, ctx, tail),
        Or(a, b) => binary(out, " | ", OR, false, a, b, ctx, tail),
        Implies(a, b) => binary(out, " -> ", IMP, true, a, b, ctx, tail),
        Iff(a, b) => binary(out, " <-> ", IFF, false, a, b, ctx, tail),
    }
}

fn unary(out: &mut String, op: &str, a: &Formula, tail: bool) {
    out.push_str(op);
    if matches!(a, Formula::Eq(..)) {
        out.push('(');
        write_formula(out, a, IFF, true);
        out.push(')');
    } else {
        write_formula(out, a, UNARY, tail);
    }
}

#[allow(clippy::too_many_arguments)]
fn binary(
    out: &mut String,
    op: &str,
    prec: u8,
    right_assoc: bool,
    a: &Formula,
    b: &Formula,
    ctx: u8,
    tail: bool,
) {
    let paren = prec < ctx;
    let tail = paren || tail;
    if paren {
        out.push('(');
    }
    let (lctx, rctx) = if right_assoc {
        (prec + 1, prec)
    } else {
        (prec, prec + 1)
    };
    write_formula(out, a, lctx, false);
    out.push_str(op);
    write_formula(out, b, rctx, tail);
    if paren {
        out.push(')');
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_term(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula_infer;

    fn roundtrip(src: &str) -> String {
        let (f, _) = parse_formula_infer(src, &["c"]).unwrap();
        let printed = print_formula(&f);
        let (g, _) = parse_formula_infer(&printed, &["c"]).unwrap();
        assert_eq!(f, g, "{src} printed as {printed}");
        printed
    }

    #[test]
    fn prints_canonical_text() {
        assert_eq!(roundtrip("G p() -> G G p()"), "G p() -> G G p()");
        assert_eq!(
            roundtrip("forall x.(q(x)->box q(x))"),
            "forall x. q(x) -> box q(x)"
        );
        assert_eq!(roundtrip("~(p() & q(c))"), "~(p() & q(c))");
        assert_eq!(roundtrip("(p() -> p()) -> p()"), "(p() -> p()) -> p()");
        assert_eq!(roundtrip("x + y * z = (x + y) * z"), "x + y * z = (x + y) * z");
    }

    #[test]
    fn quantifiers_in_non_tail_positions_get_parentheses() {
        assert_eq!(
            roundtrip("(forall x. q(x)) & p()"),
            "(forall x. q(x)) & p()"
        );
        assert_eq!(
            roundtrip("G (forall x. q(x)) -> p()"),
            "G (forall x. q(x)) -> p()"
        );
        assert_eq!(roundtrip("p() & G forall x. q(x)"), "p() & G forall x. q(x)");
        assert_eq!(roundtrip("~(x = c)"), "~(x = c)");
    }
}
