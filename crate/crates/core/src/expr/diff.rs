use num_rational::BigRational;
use num_traits::One;

use super::{Expr, Func, Node};

impl Expr {
    /// Exact partial derivative with respect to `var`.
    pub fn diff(&self, var: &str) -> Expr {
        if !self.depends_on(var) {
            return Expr::zero();
        }
        match self.node() {
            Node::Const(_) | Node::Pi => Expr::zero(),
            Node::Var(v) => {
                if &**v == var {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Node::Add(terms) => Expr::add(terms.iter().map(|t| t.diff(var))),
            Node::Mul(factors) => {
                let mut terms = Vec::new();
                for (k, f) in factors.iter().enumerate() {
                    if !f.depends_on(var) {
                        continue;
                    }
                    let df = f.diff(var);
                    let mut prod: Vec<Expr> = factors.clone();
                    prod[k] = df;
                    terms.push(Expr::mul(prod));
                }
                Expr::add(terms)
            }
            Node::Pow(base, e) => {
                let lowered = Expr::pow(base.clone(), e - BigRational::one());
                Expr::mul([Expr::constant(e.clone()), lowered, base.diff(var)])
            }
            Node::Func(f, arg) => {
                let inner = arg.diff(var);
                let outer = match f {
                    Func::Exp => self.clone(),
                    Func::Log => arg.recip(),
                    Func::Sin => Expr::cos(arg.clone()),
                    Func::Cos => -Expr::sin(arg.clone()),
                };
                outer * inner
            }
        }
    }
}

/// Free function form of [`Expr::diff`].
pub fn differentiate(e: &Expr, var: &str) -> Expr {
    e.diff(var)
}
