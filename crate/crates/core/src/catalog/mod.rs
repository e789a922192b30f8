//! The built-in identity catalog and the verification engine.
//!
//! Each side of an identity is evaluated on its own to the requested order
//! and the two series are compared coefficient by coefficient.

pub mod toolkit;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::dsl::{self, Call, Expr, ParseError};
use crate::qseries::{Base, Monomial, Unit};

/// The hand-written part of the catalog.
const BUILTIN_SOURCE: &str = include_str!("builtin.ids");

/// The checked-in list of catalog ids and default orders.
pub const MANIFEST: &str = include_str!("manifest.txt");

/// Default order for entries involving mock functions, Appell-Lerch sums,
/// Hecke sums or `D_n`.
pub const MOCK_ORDER: i64 = 50;
/// Default order for pure theta-function entries.
pub const THETA_ORDER: i64 = 100;

/// A named equation between two expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentitySpec {
    pub id: String,
    pub lhs: Expr,
    pub rhs: Expr,
    pub default_order: i64,
    pub tags: Vec<String>,
}

impl IdentitySpec {
    /// Builds an entry, deriving the default order and tags from the calls
    /// on both sides.
    pub fn new(id: &str, lhs: Expr, rhs: Expr) -> Self {
        let mut kinds = BTreeSet::new();
        for c in lhs.calls().into_iter().chain(rhs.calls()) {
            kinds.insert(match c {
                Call::Theta { .. } | Call::J { .. } | Call::Jbar { .. } | Call::Jm { .. } | Call::Poch { .. } => "theta",
                Call::Appell { .. } => "appell",
                Call::Hecke { .. } => "hecke",
                Call::Dn { .. } => "dn",
                Call::Mock { .. } => "mock",
            });
        }
        let theta_only = kinds.iter().all(|k| *k == "theta");
        let family = id.split('-').next().unwrap_or(id).to_string();
        let mut tags = vec![family];
        tags.extend(kinds.into_iter().map(String::from));
        IdentitySpec {
            id: id.to_string(),
            lhs,
            rhs,
            default_order: if theta_only { THETA_ORDER } else { MOCK_ORDER },
            tags,
        }
    }

    /// Parses `lhs == rhs`.
    pub fn parse(id: &str, text: &str) -> Result<Self, ParseError> {
        let (lhs, rhs) = dsl::parse_identity(text)?;
        Ok(Self::new(id, lhs, rhs))
    }

    /// The same identity with `q` replaced by `u q` on both sides.
    pub fn subst_unit(&self, u: Unit, id: &str) -> Self {
        let mut s = Self::new(id, self.lhs.subst_unit(u), self.rhs.subst_unit(u));
        s.default_order = self.default_order;
        s
    }
}

/// The first exponent at which the two sides differ, with both
/// coefficients rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FirstMismatch {
    pub exp: i64,
    pub lhs: String,
    pub rhs: String,
}

/// Outcome of checking one identity. `pass` holds exactly when there is
/// neither a mismatch nor an evaluation error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub id: String,
    pub order_checked: i64,
    pub pass: bool,
    pub first_mismatch: Option<FirstMismatch>,
    pub wall_time: Duration,
    pub error: Option<String>,
}

impl VerificationReport {
    /// Equality ignoring timing.
    pub fn same_outcome(&self, other: &Self) -> bool {
        Self { wall_time: Duration::ZERO, ..self.clone() } == Self { wall_time: Duration::ZERO, ..other.clone() }
    }
}

/// Evaluates both sides through `q^order` and compares them.
pub fn verify(spec: &IdentitySpec, order: i64) -> VerificationReport {
    let start = Instant::now();
    let outcome = check(spec, order);
    let (first_mismatch, error) = match outcome {
        Ok(m) => (m, None),
        Err(e) => (None, Some(e)),
    };
    VerificationReport {
        id: spec.id.clone(),
        order_checked: order,
        pass: first_mismatch.is_none() && error.is_none(),
        first_mismatch,
        wall_time: start.elapsed(),
        error,
    }
}

fn check(spec: &IdentitySpec, order: i64) -> Result<Option<FirstMismatch>, String> {
    if order < 1 {
        return Err(format!("order must be at least 1, got {order}"));
    }
    let l = dsl::eval::eval_labeled(&spec.lhs, order, "lhs").map_err(|e| e.to_string())?;
    let r = dsl::eval::eval_labeled(&spec.rhs, order, "rhs").map_err(|e| e.to_string())?;
    let cmp = l.eq_to(&r, order).map_err(|e| e.to_string())?;
    Ok(cmp.mismatch.map(|m| FirstMismatch { exp: m.exp, lhs: m.lhs.to_string(), rhs: m.rhs.to_string() }))
}

/// Verifies every entry of `specs`, each at `order` or its default order.
/// Reports come back in input order whether or not the work is spread
/// over threads.
pub fn verify_many(specs: &[IdentitySpec], order: Option<i64>, parallel: bool) -> Vec<VerificationReport> {
    let run = |s: &IdentitySpec| verify(s, order.unwrap_or(s.default_order));
    if parallel {
        specs.par_iter().map(run).collect()
    } else {
        specs.iter().map(run).collect()
    }
}

/// Verifies the whole built-in catalog.
pub fn verify_all(order: Option<i64>, parallel: bool) -> Vec<VerificationReport> {
    verify_many(&builtin_catalog(), order, parallel)
}

/// Looks up a built-in entry by id.
pub fn find(id: &str) -> Option<IdentitySpec> {
    builtin_catalog().into_iter().find(|s| s.id == id)
}

fn q(e: i64) -> Monomial {
    Monomial::q(e)
}

fn nq(e: i64) -> Monomial {
    Monomial::neg_q(e)
}

fn bq(e: i64) -> Base {
    Base::q(e)
}

/// Fixed generic instances of the parametrized toolkit identities.
fn toolkit_entries() -> Vec<IdentitySpec> {
    use toolkit::*;
    let w = Monomial::unit(Unit::OMEGA);
    let i = Monomial::unit(Unit::I);
    let entries = [
        theta_elliptic(q(2).mul(w), bq(3), 4),
        theta_inversion_a(nq(3), bq(2)),
        theta_inversion_b(q(-1).mul(i), bq(3)),
        theta_mod_inc(q(1).mul(w), bq(2), 3),
        theta_neg_mod(q(3), bq(2)),
        theta_split(nq(1), bq(1), 3),
        theta_mod_dec(Monomial::new(Unit::new(1), 1), bq(1), 4),
        quintuple_a(q(1).mul(w), bq(2)),
        quintuple_b(nq(2), bq(3)),
        theta_product_split(q(1), nq(3), bq(2)),
        theta_product_sym(q(2).mul(w), q(1), bq(3)),
        weierstrass(q(16), q(7), q(3), q(2), bq(30)),
        weierstrass(q(9), q(10), q(5).mul(w.pow(2)), q(5).mul(w), bq(30)).map(|s| renamed(s, "weierstrass-unit")),
        appell_shift(q(2), bq(5), nq(1)),
        appell_flip(nq(1), bq(3), q(1).mul(w)),
        appell_new_z(q(1), bq(4), nq(2)),
        appell_changing_z(q(3), bq(10), q(4), q(1)),
        d2_closed_form(q(1), bq(1), nq(2).mul(w), q(3)),
        d3_closed_form(q(2).mul(i), bq(1), q(1).mul(w), nq(-2)),
        dn_closed_form(4, nq(1), bq(1), q(1).mul(w), q(5)).map(|s| renamed(s, "thm-1-n4-instance")),
        quintisection(q(1), q(2), bq(1)),
        quintisection(nq(2), q(1).mul(w), bq(1)).map(|s| renamed(s, "thm-2.5-instance-2")),
        quintisection(q(1).mul(i), nq(3), bq(2)).map(|s| renamed(s, "thm-2.5-instance-3")),
        quintisection_cubic(q(2).mul(w), bq(3)),
        f232_appell(q(3), nq(1), bq(1)),
    ];
    entries.into_iter().map(|s| s.expect("catalog instances are generic")).collect()
}

/// Every built-in identity, in a fixed order.
pub fn builtin_catalog() -> Vec<IdentitySpec> {
    let file = dsl::parse_file(BUILTIN_SOURCE).expect("built-in identities parse");
    let mut out: Vec<IdentitySpec> = file
        .statements
        .into_iter()
        .map(|st| {
            let mut s = IdentitySpec::new(&st.name, st.lhs, st.rhs);
            if let Some(o) = st.order {
                s.default_order = o;
            }
            s
        })
        .collect();
    // The single-quotient D_3 evaluations at the unit-bearing bases used to
    // rewrite the first four identities.
    let d3: Vec<IdentitySpec> = out
        .iter()
        .filter(|s| ["lemma-5.3", "lemma-5.4", "lemma-5.5", "lemma-5.6"].iter().any(|p| s.id.starts_with(p)))
        .cloned()
        .collect();
    for s in &d3 {
        out.push(s.subst_unit(Unit::OMEGA, &format!("{}-w", s.id)));
        out.push(s.subst_unit(Unit::OMEGA2, &format!("{}-w2", s.id)));
    }
    out.extend(toolkit_entries());
    out
}

/// Deliberately corrupted copies of built-in entries. Each must fail.
pub fn negative_controls() -> Vec<IdentitySpec> {
    let mutate = |id: &str, text: &str| {
        let base = find(id).expect("control source exists");
        let mut s = IdentitySpec::parse(&format!("{id}-mutant"), text).expect("control parses");
        s.default_order = base.default_order;
        s
    };
    vec![
        mutate("RLN-1.2", "q^2*phi(q^9) - (psi(w*q) - psi(w^2*q))/(w - w^2) == q*J(1,2)/J(3,6)*J(3,15)*Jm(6)/Jm(3)"),
        mutate("RLN-1.6", "phi(q) - q^-1*psi(-q^4) + q^-2*chi(q^8) == Jb(1,2)*j(-q^2; -q^10)/J(2,9)"),
        mutate("cor-2.7-id1", "J(1,5)*J(12,30) + q*J(2,5)*J(6,30) == J(1,2)*Jb(3,12)"),
        mutate("hecke-3.3", "J(1,2)*psi(q) == -q^2*f(2,3,2; q^4, q^5; q)"),
        mutate("cor-3.3-chi", "chi(q) == m(-q; q^5; q^2) - m(-q; q^5; q^3)"),
        mutate("lemma-5.1-a", "D(2; q^3; q^10; q^6; q^-8) == -Jm(20)^3*Jb(14,20)*J(20,40)/(J(1,10)*J(8,40)*Jb(8,20)*J(7,20))"),
        mutate("lemma-3.4-b", "D(2; -q^2; q^5; q^4; -1) == q^-3*Jm(10)^3*J(5,10)*J(3,10)*Jb(4,20)/(Jb(1,5)*Jb(0,20)*J(1,10)^2*J(4,10))"),
    ]
}

/// Parses the manifest into `(id, order)` pairs.
pub fn manifest_entries() -> Vec<(String, i64)> {
    MANIFEST
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (id, o) = l.split_once(char::is_whitespace).expect("manifest lines are `id order`");
            (id.to_string(), o.trim().parse().expect("manifest order is an integer"))
        })
        .collect()
}
