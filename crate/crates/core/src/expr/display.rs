use std::fmt::{self, Write};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::{Expr, Node};

// Printing contexts, from loosest to tightest binding.
const SUM: u8 = 0;
const PRODUCT: u8 = 1;
const DIVISOR: u8 = 2;
const BASE: u8 = 3;

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, SUM, f)
    }
}

fn write_rational(c: &BigRational, out: &mut impl Write) -> fmt::Result {
    if c.is_integer() {
        write!(out, "{}", c.numer())
    } else {
        write!(out, "{}/{}", c.numer(), c.denom())
    }
}

fn write_exponent(e: &BigRational, out: &mut impl Write) -> fmt::Result {
    if e.is_integer() && e.is_positive() {
        write!(out, "{}", e.numer())
    } else {
        out.write_char('(')?;
        write_rational(e, out)?;
        out.write_char(')')
    }
}

fn is_negative_term(e: &Expr) -> bool {
    match e.node() {
        Node::Const(c) => c.is_negative(),
        Node::Mul(fs) => fs.iter().any(|f| f.as_const().is_some_and(|c| c.is_negative())),
        _ => false,
    }
}

fn write_expr(e: &Expr, level: u8, out: &mut impl Write) -> fmt::Result {
    match e.node() {
        Node::Const(c) => {
            let bare = c.is_integer() && !c.is_negative();
            let wrap = !bare && (level >= DIVISOR || (level == PRODUCT && c.is_negative()));
            if wrap {
                out.write_char('(')?;
            }
            write_rational(c, out)?;
            if wrap {
                out.write_char(')')?;
            }
            Ok(())
        }
        Node::Pi => out.write_str("pi"),
        Node::Var(v) => out.write_str(v),
        Node::Add(terms) => {
            let wrap = level >= PRODUCT;
            if wrap {
                out.write_char('(')?;
            }
            for (k, t) in terms.iter().enumerate() {
                if k == 0 {
                    write_expr(t, SUM, out)?;
                } else if is_negative_term(t) {
                    out.write_str(" - ")?;
                    write_expr(&-t, SUM, out)?;
                } else {
                    out.write_str(" + ")?;
                    write_expr(t, SUM, out)?;
                }
            }
            if wrap {
                out.write_char(')')?;
            }
            Ok(())
        }
        Node::Mul(factors) => {
            let wrap = level >= DIVISOR;
            if wrap {
                out.write_char('(')?;
            }
            write_product(factors, out)?;
            if wrap {
                out.write_char(')')?;
            }
            Ok(())
        }
        Node::Pow(base, exp) => {
            if exp.is_negative() {
                let wrap = level >= DIVISOR;
                if wrap {
                    out.write_char('(')?;
                }
                out.write_str("1/")?;
                write_expr(&Expr::pow(base.clone(), -exp), DIVISOR, out)?;
                if wrap {
                    out.write_char(')')?;
                }
                return Ok(());
            }
            let wrap = level >= BASE;
            if wrap {
                out.write_char('(')?;
            }
            if *exp == super::rat(1, 2) {
                out.write_str("sqrt(")?;
                write_expr(base, SUM, out)?;
                out.write_char(')')?;
            } else {
                write_expr(base, BASE, out)?;
                out.write_char('^')?;
                write_exponent(exp, out)?;
            }
            if wrap {
                out.write_char(')')?;
            }
            Ok(())
        }
        Node::Func(func, arg) => {
            out.write_str(func.name())?;
            out.write_char('(')?;
            write_expr(arg, SUM, out)?;
            out.write_char(')')
        }
    }
}

fn write_product(factors: &[Expr], out: &mut impl Write) -> fmt::Result {
    let mut coeff = BigRational::one();
    let mut num: Vec<Expr> = Vec::new();
    let mut den: Vec<Expr> = Vec::new();
    for f in factors {
        match f.node() {
            Node::Const(c) => coeff *= c,
            Node::Pow(b, e) if e.is_negative() => den.push(Expr::pow(b.clone(), -e)),
            _ => num.push(f.clone()),
        }
    }
    if coeff.is_negative() {
        out.write_char('-')?;
    }
    let n = coeff.numer().abs();
    let d = coeff.denom().clone();
    let mut first = true;
    if !n.is_one() || num.is_empty() {
        write!(out, "{n}")?;
        first = false;
    }
    // `x^2/2` would read as `x^(2/2)`, so guard a trailing power.
    let guard_last = !d.is_one() && den.is_empty();
    for (k, f) in num.iter().enumerate() {
        if !first {
            out.write_char('*')?;
        }
        if guard_last && k + 1 == num.len() && matches!(f.node(), Node::Pow(_, e) if e.is_integer()) {
            out.write_char('(')?;
            write_expr(f, SUM, out)?;
            out.write_char(')')?;
        } else {
            write_expr(f, PRODUCT, out)?;
        }
        first = false;
    }
    let mut den_items: Vec<String> = Vec::new();
    if !d.is_one() {
        den_items.push(d.to_string());
    }
    if den_items.len() + den.len() == 0 {
        return Ok(());
    }
    out.write_char('/')?;
    if den_items.len() + den.len() == 1 {
        if let Some(s) = den_items.first() {
            return out.write_str(s);
        }
        return write_expr(&den[0], DIVISOR, out);
    }
    out.write_char('(')?;
    let mut first = true;
    for s in &den_items {
        out.write_str(s)?;
        first = false;
    }
    for f in &den {
        if !first {
            out.write_char('*')?;
        }
        write_expr(f, PRODUCT, out)?;
        first = false;
    }
    out.write_char(')')
}
