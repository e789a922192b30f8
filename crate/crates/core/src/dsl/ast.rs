use std::fmt;

use crate::mock::MockKind;
use crate::qseries::{Base, Monomial, Unit};

/// The scalar symbols of the language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sym {
    /// `w`, a primitive cube root of unity.
    Omega,
    /// `I`, a primitive fourth root of unity.
    I,
    /// `z`, a primitive twelfth root of unity.
    Zeta,
}

impl Sym {
    pub fn unit(self) -> Unit {
        match self {
            Sym::Omega => Unit::OMEGA,
            Sym::I => Unit::I,
            Sym::Zeta => Unit::new(1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sym::Omega => "w",
            Sym::I => "I",
            Sym::Zeta => "z",
        }
    }
}

/// Built-in functions. Monomial and base arguments are stored already
/// normalized, so `j(-q^2; -q^10)` and `j(-1*q^2; -q^10)` are the same node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Call {
    /// `j(x; base)`
    Theta { x: Monomial, base: Base },
    /// `J(a,m)`
    J { a: i64, m: i64 },
    /// `Jb(a,m)`
    Jbar { a: i64, m: i64 },
    /// `Jm(m)`
    Jm { m: i64 },
    /// `P(x; base; n)` or `P(x; base; inf)`
    Poch { x: Monomial, base: Base, n: Option<u64> },
    /// `m(x; base; z)`
    Appell { x: Monomial, base: Base, z: Monomial },
    /// `f(a,b,c; x, y; base)`
    Hecke { a: i64, b: i64, c: i64, x: Monomial, y: Monomial, base: Base },
    /// `D(n; x; base; z; z')`
    Dn { n: i64, x: Monomial, base: Base, z: Monomial, zp: Monomial },
    /// `phi(arg)` and friends: the mock function with `q -> arg`.
    Mock { kind: MockKind, arg: Monomial },
}

/// Expression tree. Integer literals are nonnegative; a leading minus is a
/// [`Expr::Neg`] node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Sym(Sym),
    /// `q^e`; plain `q` is `QPow(1)`.
    QPow(i64),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Call(Call),
}

impl Expr {
    /// Builds the tree the parser produces for the rendered monomial, e.g.
    /// `-w^2*q^3` becomes `Mul(Neg(Pow(w, 2)), q^3)`.
    pub fn from_monomial(m: Monomial) -> Expr {
        crate::dsl::parse_expr(&m.to_string()).expect("monomials render to valid syntax")
    }

    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn pow(self, k: i64) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    /// The expression with `q` replaced by `u q` throughout. Named theta
    /// constants become explicit `j` calls.
    pub fn subst_unit(&self, u: Unit) -> Expr {
        let s = |m: Monomial| m.subst(u, 1);
        let sb = |b: Base| Base::new(b.mono().subst(u, 1)).expect("substitution keeps the exponent");
        let theta = |x: Monomial, m: i64| {
            Expr::Call(Call::Theta {
                x: s(x),
                base: sb(Base::q(m)),
            })
        };
        let bx = |a: &Expr| Box::new(a.subst_unit(u));
        match self {
            Expr::Int(_) | Expr::Sym(_) => self.clone(),
            Expr::QPow(e) => {
                if u.pow(*e).is_one() {
                    Expr::QPow(*e)
                } else {
                    Expr::Mul(
                        Box::new(Expr::from_monomial(Monomial::unit(u.pow(*e)))),
                        Box::new(Expr::QPow(*e)),
                    )
                }
            }
            Expr::Neg(a) => Expr::Neg(bx(a)),
            Expr::Add(a, b) => Expr::Add(bx(a), bx(b)),
            Expr::Sub(a, b) => Expr::Sub(bx(a), bx(b)),
            Expr::Mul(a, b) => Expr::Mul(bx(a), bx(b)),
            Expr::Div(a, b) => Expr::Div(bx(a), bx(b)),
            Expr::Pow(a, k) => Expr::Pow(bx(a), *k),
            Expr::Call(c) => match *c {
                Call::Theta { x, base } => Expr::Call(Call::Theta { x: s(x), base: sb(base) }),
                Call::J { a, m } => theta(Monomial::q(a), m),
                Call::Jbar { a, m } => theta(Monomial::neg_q(a), m),
                Call::Jm { m } => Expr::Call(Call::Theta {
                    x: s(Monomial::q(m)),
                    base: sb(Base::q(3 * m)),
                }),
                Call::Poch { x, base, n } => Expr::Call(Call::Poch { x: s(x), base: sb(base), n }),
                Call::Appell { x, base, z } => Expr::Call(Call::Appell { x: s(x), base: sb(base), z: s(z) }),
                Call::Hecke { a, b, c, x, y, base } => Expr::Call(Call::Hecke {
                    a,
                    b,
                    c,
                    x: s(x),
                    y: s(y),
                    base: sb(base),
                }),
                Call::Dn { n, x, base, z, zp } => Expr::Call(Call::Dn {
                    n,
                    x: s(x),
                    base: sb(base),
                    z: s(z),
                    zp: s(zp),
                }),
                Call::Mock { kind, arg } => Expr::Call(Call::Mock { kind, arg: s(arg) }),
            },
        }
    }

    /// Visits every call node.
    pub fn calls(&self) -> Vec<&Call> {
        let mut out = Vec::new();
        self.collect_calls(&mut out);
        out
    }

    fn collect_calls<'a>(&'a self, out: &mut Vec<&'a Call>) {
        match self {
            Expr::Int(_) | Expr::Sym(_) | Expr::QPow(_) => {}
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_calls(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_calls(out);
                b.collect_calls(out);
            }
            Expr::Call(c) => out.push(c),
        }
    }

    /// Precedence level used by the renderer: sums 1, products 2, negation
    /// 3, powers 4, atoms 5.
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Sym(s) => f.write_str(s.name()),
            Expr::QPow(1) => f.write_str("q"),
            Expr::QPow(e) => write!(f, "q^{e}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " {} ", if matches!(self, Expr::Add(..)) { '+' } else { '-' })?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "{}", if matches!(self, Expr::Mul(..)) { '*' } else { '/' })?;
                b.write_at(f, 3)
            }
            Expr::Pow(a, k) => {
                // `q^2` would be read back as a single atom.
                if matches!(**a, Expr::QPow(_)) {
                    write!(f, "({a})")?;
                } else {
                    a.write_at(f, 4)?;
                }
                write!(f, "^{k}")
            }
            Expr::Call(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Call::Theta { x, base } => write!(f, "j({x}; {base})"),
            Call::J { a, m } => write!(f, "J({a},{m})"),
            Call::Jbar { a, m } => write!(f, "Jb({a},{m})"),
            Call::Jm { m } => write!(f, "Jm({m})"),
            Call::Poch { x, base, n: Some(n) } => write!(f, "P({x}; {base}; {n})"),
            Call::Poch { x, base, n: None } => write!(f, "P({x}; {base}; inf)"),
            Call::Appell { x, base, z } => write!(f, "m({x}; {base}; {z})"),
            Call::Hecke { a, b, c, x, y, base } => write!(f, "f({a},{b},{c}; {x}, {y}; {base})"),
            Call::Dn { n, x, base, z, zp } => write!(f, "D({n}; {x}; {base}; {z}; {zp})"),
            Call::Mock { kind, arg } => write!(f, "{kind}({arg})"),
        }
    }
}

/// One `name : lhs == rhs [@ order]` statement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub name: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub order: Option<i64>,
    pub line: usize,
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} == {}", self.name, self.lhs, self.rhs)?;
        if let Some(o) = self.order {
            write!(f, " @ {o}")?;
        }
        Ok(())
    }
}

/// A parsed identity file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdentityFile {
    pub statements: Vec<Statement>,
}
