//! Shared generators for the integration and acceptance tests.

#![allow(dead_code)]

use mockverify::catalog::{verify, IdentitySpec};
use mockverify::dsl::{Call, Expr, Sym};
use mockverify::mock::MockKind;
use mockverify::{Base, Monomial, Unit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `u q^e` with `u` any twelfth root of unity.
pub fn mono(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Monomial {
    Monomial::new(Unit::new(rng.gen_range(0..12)), rng.gen_range(lo..=hi))
}

pub fn base(rng: &mut ChaCha8Rng, hi: i64) -> Base {
    Base::new(mono(rng, 1, hi)).unwrap()
}

/// Result of a randomized identity suite.
#[derive(Debug, Default)]
pub struct Suite {
    pub passed: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl Suite {
    pub fn ok(&self, want: usize) -> bool {
        self.failures.is_empty() && self.passed >= want
    }
}

/// Draws instances until `count` generic ones have been verified at
/// `order`. Non-generic draws (builder returns `None`) are skipped, with a
/// cap so a broken generator cannot loop forever.
pub fn run_suite(
    seed: u64,
    count: usize,
    order: i64,
    mut gen: impl FnMut(&mut ChaCha8Rng) -> Option<IdentitySpec>,
) -> Suite {
    let mut rng = rng(seed);
    let mut s = Suite::default();
    while s.passed + s.failures.len() < count && s.skipped < 20 * count {
        let Some(spec) = gen(&mut rng) else {
            s.skipped += 1;
            continue;
        };
        let r = verify(&spec, order);
        if r.pass {
            s.passed += 1;
        } else {
            let lhs = spec.lhs.to_string();
            s.failures.push(format!("{lhs} == {}: {:?} {:?}", spec.rhs, r.first_mismatch, r.error));
        }
    }
    s
}

fn arb_unit() -> impl Strategy<Value = Unit> {
    (0i64..12).prop_map(Unit::new)
}

pub fn arb_monomial() -> impl Strategy<Value = Monomial> {
    (arb_unit(), -12i64..12).prop_map(|(u, e)| Monomial::new(u, e))
}

pub fn arb_base() -> impl Strategy<Value = Base> {
    (arb_unit(), 1i64..12).prop_map(|(u, e)| Base::new(Monomial::new(u, e)).unwrap())
}

fn arb_call() -> impl Strategy<Value = Call> {
    let kind = prop_oneof![Just(MockKind::Phi), Just(MockKind::Psi), Just(MockKind::BigX), Just(MockKind::Chi)];
    prop_oneof![
        (arb_monomial(), arb_base()).prop_map(|(x, base)| Call::Theta { x, base }),
        (-40i64..40, 1i64..40).prop_map(|(a, m)| Call::J { a, m }),
        (-40i64..40, 1i64..40).prop_map(|(a, m)| Call::Jbar { a, m }),
        (1i64..40).prop_map(|m| Call::Jm { m }),
        (arb_monomial(), arb_base(), prop::option::of(0u64..9)).prop_map(|(x, base, n)| Call::Poch { x, base, n }),
        (arb_monomial(), arb_base(), arb_monomial()).prop_map(|(x, base, z)| Call::Appell { x, base, z }),
        (0i64..4, 0i64..6, 0i64..4, arb_monomial(), arb_monomial(), arb_base())
            .prop_map(|(a, b, c, x, y, base)| Call::Hecke { a, b, c, x, y, base }),
        (1i64..5, arb_monomial(), arb_base(), arb_monomial(), arb_monomial())
            .prop_map(|(n, x, base, z, zp)| Call::Dn { n, x, base, z, zp }),
        (kind, arb_monomial()).prop_map(|(kind, arg)| Call::Mock { kind, arg }),
    ]
}

/// Arbitrary expression trees of moderate depth.
pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (0i64..1000).prop_map(Expr::Int),
        prop_oneof![Just(Sym::Omega), Just(Sym::I), Just(Sym::Zeta)].prop_map(Expr::Sym),
        (-30i64..30).prop_map(Expr::QPow),
        arb_call().prop_map(Expr::Call),
    ];
    leaf.prop_recursive(5, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner, -5i64..6).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
        ]
    })
}

pub type Gen = Box<dyn Fn(&mut ChaCha8Rng) -> Option<IdentitySpec>>;

/// Random instances of the general theta transformation laws.
pub fn theta_law_gens() -> Vec<(&'static str, Gen)> {
    use mockverify::catalog::toolkit::*;
    vec![
        ("elliptic", Box::new(|r| theta_elliptic(mono(r, -4, 4), base(r, 3), r.gen_range(-3..=3)))),
        ("inversion-a", Box::new(|r| theta_inversion_a(mono(r, -4, 4), base(r, 3)))),
        ("inversion-b", Box::new(|r| theta_inversion_b(mono(r, -4, 4), base(r, 3)))),
        ("mod-inc", Box::new(|r| theta_mod_inc(mono(r, -3, 3), base(r, 2), r.gen_range(1..=4)))),
        ("neg-mod", Box::new(|r| theta_neg_mod(mono(r, -4, 4), base(r, 3)))),
        ("split", Box::new(|r| theta_split(mono(r, -3, 3), base(r, 2), r.gen_range(1..=4)))),
        ("mod-dec", Box::new(|r| theta_mod_dec(mono(r, -2, 2), base(r, 2), [1, 2, 3, 4, 6][r.gen_range(0..5)]))),
    ]
}

/// Random instances of the three product formulas.
pub fn product_gens() -> Vec<(&'static str, Gen)> {
    use mockverify::catalog::toolkit::*;
    vec![
        ("quintuple-a", Box::new(|r| quintuple_a(mono(r, -3, 3), base(r, 3)))),
        ("quintuple-b", Box::new(|r| quintuple_b(mono(r, -3, 3), base(r, 3)))),
        ("product-split", Box::new(|r| theta_product_split(mono(r, -3, 3), mono(r, -3, 3), base(r, 3)))),
        ("product-sym", Box::new(|r| theta_product_sym(mono(r, -3, 3), mono(r, -3, 3), base(r, 3)))),
    ]
}

pub fn weierstrass_gen() -> Gen {
    Box::new(|r| {
        let b = base(r, 2);
        mockverify::catalog::toolkit::weierstrass(mono(r, -3, 3), mono(r, -3, 3), mono(r, -3, 3), mono(r, -3, 3), b)
    })
}

/// Random instances of the Appell-Lerch functional equations.
pub fn appell_gens() -> Vec<(&'static str, Gen)> {
    use mockverify::catalog::toolkit::*;
    vec![
        ("shift", Box::new(|r| appell_shift(mono(r, -3, 3), base(r, 4), mono(r, -3, 3)))),
        ("flip", Box::new(|r| appell_flip(mono(r, -3, 3), base(r, 4), mono(r, -3, 3)))),
        ("new-z", Box::new(|r| appell_new_z(mono(r, -3, 3), base(r, 4), mono(r, -3, 3)))),
        (
            "changing-z",
            Box::new(|r| appell_changing_z(mono(r, -3, 3), base(r, 4), mono(r, -3, 3), mono(r, -3, 3))),
        ),
    ]
}
