//! Parametrized theta and Appell-Lerch identities. Each builder renders an
//! instance as text in the expression language and parses it, so a built
//! instance is an ordinary catalog entry. Builders return `None` when an
//! argument hits a zero of a theta function in a denominator or a pole of
//! an Appell-Lerch sum, or when `j(z)` vanishes for one of the sums.

use crate::appell::AppellArg;
use crate::qseries::{Base, Monomial, Unit};
use crate::theta::theta_vanishes;

use super::IdentitySpec;

fn th(x: Monomial, b: Base) -> String {
    format!("j({x}; {b})")
}

/// `J_k` for the base `b`, i.e. `j(b^k; b^(3k))`.
fn jk(b: Base, k: i64) -> String {
    th(b.mono_pow(k), b.pow(3 * k))
}

fn m_call(x: Monomial, b: Base, z: Monomial) -> Option<String> {
    if theta_vanishes(z, b) {
        return None;
    }
    AppellArg::new(x, b, z).check_poles().ok()?;
    Some(format!("m({x}; {b}; {z})"))
}

/// A theta value that is about to divide something.
fn den(x: Monomial, b: Base) -> Option<String> {
    (!theta_vanishes(x, b)).then(|| th(x, b))
}

fn spec(id: &str, lhs: &str, rhs: &str) -> Option<IdentitySpec> {
    Some(IdentitySpec::parse(id, &format!("{lhs} == {rhs}")).expect("builders emit valid syntax"))
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// `j(b^n x; b) = (-1)^n b^(-C(n,2)) x^(-n) j(x; b)`.
pub fn theta_elliptic(x: Monomial, b: Base, n: i64) -> Option<IdentitySpec> {
    let c = Monomial::unit(Unit::MINUS_ONE.pow(n)).mul(b.mono_pow(-binom2(n))).mul(x.pow(-n));
    spec("theta-elliptic", &th(b.mono_pow(n).mul(x), b), &format!("({c})*{}", th(x, b)))
}

/// `j(x; b) = j(b/x; b)`.
pub fn theta_inversion_a(x: Monomial, b: Base) -> Option<IdentitySpec> {
    spec("theta-inversion-a", &th(x, b), &th(b.mono().div(x), b))
}

/// `j(x; b) = -x j(1/x; b)`.
pub fn theta_inversion_b(x: Monomial, b: Base) -> Option<IdentitySpec> {
    spec("theta-inversion-b", &th(x, b), &format!("({})*{}", x.neg(), th(x.inv(), b)))
}

/// `j(x; b) = J_1 j(x, bx, ..., b^(n-1)x; b^n) / J_n^n`.
pub fn theta_mod_inc(x: Monomial, b: Base, n: i64) -> Option<IdentitySpec> {
    if n < 1 {
        return None;
    }
    let prod: Vec<String> = (0..n).map(|k| th(b.mono_pow(k).mul(x), b.pow(n))).collect();
    let rhs = format!("{}*{}/{}^{n}", jk(b, 1), prod.join("*"), jk(b, n));
    spec("theta-mod-inc", &th(x, b), &rhs)
}

/// `j(x; -b) = j(x; b^2) j(-bx; b^2) / J_{1,4}`.
pub fn theta_neg_mod(x: Monomial, b: Base) -> Option<IdentitySpec> {
    let nb = Base::new(b.mono().neg()).ok()?;
    let rhs = format!("{}*{}/{}", th(x, b.pow(2)), th(b.mono().mul(x).neg(), b.pow(2)), th(b.mono(), b.pow(4)));
    spec("theta-neg-mod", &th(x, nb), &rhs)
}

/// `j(z; b) = sum_{k<m} (-1)^k b^C(k,2) z^k j((-1)^(m+1) b^(C(m,2)+mk) z^m; b^(m^2))`.
pub fn theta_split(z: Monomial, b: Base, m: i64) -> Option<IdentitySpec> {
    if m < 1 {
        return None;
    }
    let terms: Vec<String> = (0..m)
        .map(|k| {
            let c = Monomial::unit(Unit::MINUS_ONE.pow(k)).mul(b.mono_pow(binom2(k))).mul(z.pow(k));
            let arg = Monomial::unit(Unit::MINUS_ONE.pow(m + 1)).mul(b.mono_pow(binom2(m) + m * k)).mul(z.pow(m));
            format!("({c})*{}", th(arg, b.pow(m * m)))
        })
        .collect();
    spec("theta-split", &th(z, b), &terms.join(" + "))
}

/// `j(x^n; b^n) = J_n j(x, zeta x, ..., zeta^(n-1) x; b) / J_1^n` for
/// `n | 12`, with `zeta` a primitive `n`-th root of unity.
pub fn theta_mod_dec(x: Monomial, b: Base, n: i64) -> Option<IdentitySpec> {
    if n < 1 || 12 % n != 0 {
        return None;
    }
    let zeta = Monomial::unit(Unit::new(12 / n));
    let prod: Vec<String> = (0..n).map(|k| th(zeta.pow(k).mul(x), b)).collect();
    let rhs = format!("{}*{}/{}^{n}", jk(b, n), prod.join("*"), jk(b, 1));
    spec("theta-mod-dec", &th(x.pow(n), b.pow(n)), &rhs)
}

/// `j(b x^3; b^3) + x j(b^2 x^3; b^3) = j(-x; b) j(b x^2; b^2) / J_2`.
pub fn quintuple_a(x: Monomial, b: Base) -> Option<IdentitySpec> {
    let x3 = x.pow(3);
    let lhs = format!("{} + ({x})*{}", th(b.mono().mul(x3), b.pow(3)), th(b.mono_pow(2).mul(x3), b.pow(3)));
    let rhs = format!("{}*{}/{}", th(x.neg(), b), th(b.mono().mul(x.pow(2)), b.pow(2)), jk(b, 2));
    spec("quintuple-a", &lhs, &rhs)
}

/// `j(-x; b) j(b x^2; b^2) / J_2 = J_1 j(x^2; b) / j(x; b)`.
pub fn quintuple_b(x: Monomial, b: Base) -> Option<IdentitySpec> {
    let lhs = format!("{}*{}/{}", th(x.neg(), b), th(b.mono().mul(x.pow(2)), b.pow(2)), jk(b, 2));
    let rhs = format!("{}*{}/{}", jk(b, 1), th(x.pow(2), b), den(x, b)?);
    spec("quintuple-b", &lhs, &rhs)
}

/// `j(x; b) j(y; b) = j(-xy; b^2) j(-b y/x; b^2) - x j(-b xy; b^2) j(-y/x; b^2)`.
pub fn theta_product_split(x: Monomial, y: Monomial, b: Base) -> Option<IdentitySpec> {
    let b2 = b.pow(2);
    let xy = x.mul(y);
    let rhs = format!(
        "{}*{} - ({x})*{}*{}",
        th(xy.neg(), b2),
        th(b.mono().mul(y).div(x).neg(), b2),
        th(b.mono().mul(xy).neg(), b2),
        th(y.div(x).neg(), b2)
    );
    spec("theta-product-split", &format!("{}*{}", th(x, b), th(y, b)), &rhs)
}

/// `j(-x; b) j(y; b) + j(x; b) j(-y; b) = 2 j(xy; b^2) j(b y/x; b^2)`.
pub fn theta_product_sym(x: Monomial, y: Monomial, b: Base) -> Option<IdentitySpec> {
    let b2 = b.pow(2);
    let lhs = format!("{}*{} + {}*{}", th(x.neg(), b), th(y, b), th(x, b), th(y.neg(), b));
    let rhs = format!("2*{}*{}", th(x.mul(y), b2), th(b.mono().mul(y).div(x), b2));
    spec("theta-product-sym", &lhs, &rhs)
}

/// The three-term relation
/// `j(ac, a/c, bd, b/d) = j(ad, a/d, bc, b/c) + (b/c) j(ab, a/b, cd, c/d)`,
/// all to the base `q0`.
pub fn weierstrass(a: Monomial, b: Monomial, c: Monomial, d: Monomial, q0: Base) -> Option<IdentitySpec> {
    let prod = |xs: [Monomial; 4]| xs.map(|x| th(x, q0)).join("*");
    let lhs = prod([a.mul(c), a.div(c), b.mul(d), b.div(d)]);
    let rhs = format!(
        "{} + ({})*{}",
        prod([a.mul(d), a.div(d), b.mul(c), b.div(c)]),
        b.div(c),
        prod([a.mul(b), a.div(b), c.mul(d), c.div(d)])
    );
    spec("weierstrass", &lhs, &rhs)
}

/// `m(x, b, z) = m(x, b, bz)`.
pub fn appell_shift(x: Monomial, b: Base, z: Monomial) -> Option<IdentitySpec> {
    spec("appell-shift", &m_call(x, b, z)?, &m_call(x, b, b.mono().mul(z))?)
}

/// `m(x, b, z) = x^-1 m(x^-1, b, z^-1)`.
pub fn appell_flip(x: Monomial, b: Base, z: Monomial) -> Option<IdentitySpec> {
    spec("appell-flip", &m_call(x, b, z)?, &format!("({})*{}", x.inv(), m_call(x.inv(), b, z.inv())?))
}

/// `m(x, b, z) = m(x, b, x^-1 z^-1)`.
pub fn appell_new_z(x: Monomial, b: Base, z: Monomial) -> Option<IdentitySpec> {
    spec("appell-new-z", &m_call(x, b, z)?, &m_call(x, b, x.mul(z).inv())?)
}

/// `m(x, b, z1) - m(x, b, z0)` as a single theta quotient.
pub fn appell_changing_z(x: Monomial, b: Base, z1: Monomial, z0: Monomial) -> Option<IdentitySpec> {
    let lhs = format!("{} - {}", m_call(x, b, z1)?, m_call(x, b, z0)?);
    let rhs = format!(
        "({z0})*{}^3*{}*{}/({}*{}*{}*{})",
        jk(b, 1),
        th(z1.div(z0), b),
        th(x.mul(z0).mul(z1), b),
        den(z0, b)?,
        den(z1, b)?,
        den(x.mul(z0), b)?,
        den(x.mul(z1), b)?
    );
    spec("appell-changing-z", &lhs, &rhs)
}

/// The Appell-Lerch sums in the definition of `D_n(x, b, z, z')`, checked
/// for poles.
fn dn_generic(n: i64, x: Monomial, b: Base, z: Monomial, zp: Monomial) -> Option<String> {
    m_call(x, b, z)?;
    let inner = b.pow(n * n);
    for r in 0..n {
        let arg = b.mono_pow(binom2(n) - n * r).mul(x.neg().pow(n)).neg();
        m_call(arg, inner, zp)?;
    }
    Some(format!("D({n}; {x}; {b}; {z}; {zp})"))
}

/// The `n = 2` closed form of `D_2(x, b, z, z')`.
pub fn d2_closed_form(x: Monomial, b: Base, z: Monomial, zp: Monomial) -> Option<IdentitySpec> {
    let lhs = dn_generic(2, x, b, z, zp)?;
    let (b2, b4) = (b.pow(2), b.pow(4));
    let x2 = x.pow(2);
    let q = b.mono();
    let common = format!("({zp})*{}^3/({}*{})", jk(b, 2), den(x.mul(z), b)?, den(zp, b4)?);
    let shared = den(q.mul(x2).mul(zp).neg(), b2)?;
    let t0 = format!(
        "{}*{}/({shared}*{})",
        th(q.mul(x2).mul(z).mul(zp).neg(), b2),
        th(z.pow(2).div(zp), b4),
        den(z, b2)?
    );
    let t1 = format!(
        "({})*{}*{}/({shared}*{})",
        x.mul(z),
        th(q.pow(2).mul(x2).mul(z).mul(zp).neg(), b2),
        th(q.pow(2).mul(z.pow(2)).div(zp), b4),
        den(q.mul(z), b2)?
    );
    spec("cor-2.3-instance", &lhs, &format!("{common}*({t0} - {t1})"))
}

/// The `n = 3` closed form of `D_3(x, b, z, z')`.
pub fn d3_closed_form(x: Monomial, b: Base, z: Monomial, zp: Monomial) -> Option<IdentitySpec> {
    let lhs = dn_generic(3, x, b, z, zp)?;
    let (b3, b9) = (b.pow(3), b.pow(9));
    let x3 = x.pow(3);
    let q = b.mono();
    let common = format!(
        "({zp})*{}^3/({}*{}*{})",
        jk(b, 3),
        den(x.mul(z), b)?,
        den(zp, b9)?,
        den(x3.mul(zp), b3)?
    );
    let term = |k: i64| -> Option<String> {
        Some(format!(
            "{}*{}/{}",
            th(q.pow(k).mul(x3).mul(z).mul(zp), b3),
            th(q.pow(3 * k).mul(z.pow(3)).div(zp), b9),
            den(q.pow(k).mul(z), b3)?
        ))
    };
    let rhs = format!(
        "{common}*(({})*{} - ({})*{} + ({})*{})",
        z.inv(),
        term(0)?,
        x.div(q),
        term(1)?,
        x.pow(2).mul(z).div(q),
        term(2)?
    );
    spec("cor-2.4-instance", &lhs, &rhs)
}

/// The general closed form of `D_n(x, b, z, z')` as a sum of `n` theta
/// quotients.
pub fn dn_closed_form(n: i64, x: Monomial, b: Base, z: Monomial, zp: Monomial) -> Option<IdentitySpec> {
    if n < 1 {
        return None;
    }
    let lhs = dn_generic(n, x, b, z, zp)?;
    let (bn, bnn) = (b.pow(n), b.pow(n * n));
    let xn = x.neg().pow(n);
    let common = format!(
        "({zp})*{}^3/({}*{}*{})",
        jk(b, n),
        den(x.mul(z), b)?,
        den(zp, bnn)?,
        den(b.mono_pow(binom2(n)).mul(xn).mul(zp).neg(), bn)?
    );
    let mut terms = Vec::new();
    for r in 0..n {
        let c = b.mono_pow(binom2(r)).mul(x.mul(z).neg().pow(r));
        terms.push(format!(
            "({c})*{}*{}/{}",
            th(b.mono_pow(binom2(n) + r).mul(xn).mul(z).mul(zp).neg(), bn),
            th(b.mono_pow(n * r).mul(z.pow(n)).div(zp), bnn),
            den(b.mono_pow(r).mul(z), bn)?
        ));
    }
    spec("dn-closed-instance", &lhs, &format!("{common}*({})", terms.join(" + ")))
}

/// `j(x; b) j(y; b^6)` as a sum of five products of thetas to the bases
/// `b^15` and `b^10`.
pub fn quintisection(x: Monomial, y: Monomial, b: Base) -> Option<IdentitySpec> {
    let terms: Vec<String> = (-2..=2i64)
        .map(|i| {
            let c = Monomial::unit(Unit::MINUS_ONE.pow(i)).mul(b.mono_pow((i * i - i) / 2)).mul(x.pow(i));
            format!(
                "({c})*{}*{}",
                th(b.mono_pow(3 * i + 9).mul(x.pow(3)).div(y).neg(), b.pow(15)),
                th(b.mono_pow(2 * i + 1).mul(x.pow(2)).mul(y), b.pow(10))
            )
        })
        .collect();
    spec("thm-2.5-instance", &format!("{}*{}", th(x, b), th(y, b.pow(6))), &terms.join(" + "))
}

/// The `y = -x^3` case of [`quintisection`] with terms paired up.
pub fn quintisection_cubic(x: Monomial, b: Base) -> Option<IdentitySpec> {
    let x5 = x.pow(5);
    let b10 = b.pow(10);
    let q = b.mono();
    let lhs = format!("{}*{}", th(x, b), th(x.pow(3).neg(), b.pow(6)));
    let rhs = format!(
        "{}*(({})*{} - ({x})*{}) + {}*({} - ({})*{})",
        th(q.pow(3), b.pow(15)),
        q.pow(3).div(x.pow(2)),
        th(x5.div(q.pow(3)).neg(), b10),
        th(q.pow(3).mul(x5).neg(), b10),
        th(q.pow(6), b.pow(15)),
        th(q.mul(x5).neg(), b10),
        q.div(x),
        th(x5.div(q).neg(), b10)
    );
    spec("cor-2.6-instance", &lhs, &rhs)
}

/// `f_{2,3,2}(x, y, b)` in terms of four Appell-Lerch sums and a theta
/// quotient.
pub fn f232_appell(x: Monomial, y: Monomial, b: Base) -> Option<IdentitySpec> {
    let q = b.mono();
    let b2 = b.pow(2);
    let b5 = b.pow(5);
    let b10 = b.pow(10);
    let minus1 = Monomial::unit(Unit::MINUS_ONE);
    let m = |u: i64, num: Monomial, den_: Monomial| m_call(q.pow(u).mul(num.pow(2)).div(den_.pow(3)), b10, minus1);
    let rhs = format!(
        "{}*{} - ({y})*{}*{} + {}*{} - ({x})*{}*{} - ({})*{}^3*{}*{}/({}*{}*{})",
        th(x, b2),
        m(6, y, x)?,
        th(q.pow(3).mul(x), b2),
        m(1, y, x)?,
        th(y, b2),
        m(6, x, y)?,
        th(q.pow(3).mul(y), b2),
        m(1, x, y)?,
        y.div(q.mul(x)),
        jk(b, 5),
        th(x.pow(2).div(y.pow(2)).neg(), b2),
        th(q.pow(3).mul(x).mul(y), b5),
        den(minus1, b10)?,
        den(q.pow(4).mul(y.pow(3)).div(x.pow(2)).neg(), b5)?,
        den(q.pow(4).mul(x.pow(3)).div(y.pow(2)).neg(), b5)?
    );
    spec("prop-3.2-instance", &format!("f(2,3,2; {x}, {y}; {b})"), &rhs)
}

/// Same entry under a different id.
pub fn renamed(mut s: IdentitySpec, id: &str) -> IdentitySpec {
    s.id = id.to_string();
    s
}
