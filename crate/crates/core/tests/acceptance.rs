//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits nonzero if any criterion fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use mockverify::appell::AppellArg;
use mockverify::catalog::{builtin_catalog, find, negative_controls, verify, verify_many};
use mockverify::dn::{dn_closed, dn_def, DnArg};
use mockverify::dsl::{parse_expr, parse_identity};
use mockverify::hecke::HeckeParams;
use mockverify::mock::{mock_series, MockKind};
use mockverify::theta::{theta_j, theta_j_product};
use mockverify::{Base, CycNum, Monomial};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const SIX_ORDER: i64 = 50;
const SIX_TIME_LIMIT: Duration = Duration::from_secs(60);
const APPELL_FORM_ORDER: i64 = 50;
const HECKE_ORDER: i64 = 40;
const DN_ORDER: i64 = 30;
const DN_SAMPLES: usize = 10;
const LEMMA_ORDER: i64 = 40;
const TRIPLE_PRODUCT_ORDER: i64 = 200;
const TRIPLE_PRODUCT_ARGS: usize = 20;
const THETA_SUITE_SIZE: usize = 50;
const THETA_SUITE_ORDER: i64 = 60;
const THETA_ID_ORDER: i64 = 200;
const APPELL_SUITE_SIZE: usize = 25;
const APPELL_SUITE_ORDER: i64 = 40;
const MIN_CONTROLS: usize = 5;
const GENERATED_ASTS: usize = 500;
const CLI_ORDER: &str = "50";

type Outcome = Result<String, String>;

fn all_pass(ids: &[&str], order: i64) -> Outcome {
    let specs: Vec<_> = ids.iter().map(|id| find(id).ok_or(format!("missing {id}"))).collect::<Result<_, _>>()?;
    let reports = verify_many(&specs, Some(order), true);
    match reports.iter().find(|r| !r.pass) {
        Some(r) => Err(format!("{} failed: {:?} {:?}", r.id, r.first_mismatch, r.error)),
        None => Ok(format!("{} identities at order {order}", reports.len())),
    }
}

fn six_identities() -> Outcome {
    let start = Instant::now();
    let ids = ["RLN-1.2", "RLN-1.3", "RLN-1.4", "RLN-1.5", "RLN-1.6", "RLN-1.7"];
    let msg = all_pass(&ids, SIX_ORDER)?;
    let t = start.elapsed();
    if t > SIX_TIME_LIMIT {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("{msg} in {t:?}"))
}

/// `phi` through `q^3` from its Eulerian definition with plain integer
/// polynomials.
fn phi_oracle() -> Vec<i64> {
    const N: usize = 4;
    let mul = |a: &[i64], b: &[i64]| {
        let mut c = [0i64; N];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate().take(N - i) {
                c[i + j] += x * y;
            }
        }
        c
    };
    let mut total = [0i64; N];
    for n in 0..N {
        // 1/(q;q^2)_{n+1} as a product of geometric series.
        let mut term = [0i64; N];
        let shift = n * (n + 1) / 2;
        if shift >= N {
            break;
        }
        term[shift] = 1;
        for i in 0..=n {
            let step = 2 * i + 1;
            let mut geo = [0i64; N];
            for k in (0..N).step_by(step) {
                geo[k] = 1;
            }
            term = mul(&term, &geo);
        }
        for k in 0..N {
            total[k] += term[k];
        }
    }
    total.to_vec()
}

fn appell_forms() -> Outcome {
    let msg = all_pass(&["cor-3.3-phi", "cor-3.3-psi", "cor-3.3-X", "cor-3.3-chi"], APPELL_FORM_ORDER)?;
    let oracle = phi_oracle();
    let phi = mock_series(MockKind::Phi, 4);
    let got: Vec<CycNum> = (0..4).map(|e| phi.coeff(e)).collect();
    let want: Vec<CycNum> = oracle.iter().map(|&c| CycNum::from_int(c)).collect();
    if oracle != [1, 2, 2, 3] || got != want {
        return Err(format!("phi oracle {oracle:?}, series {got:?}"));
    }
    Ok(format!("{msg}; phi = 1 + 2q + 2q^2 + 3q^3 + ..."))
}

fn hecke_rewrites() -> Outcome {
    let msg = all_pass(&["hecke-3.2", "hecke-3.3", "hecke-3.4", "hecke-3.5"], HECKE_ORDER)?;
    let prec = HECKE_ORDER + 1;
    let sums = [
        (Monomial::q(2), Monomial::q(2), Base::q(1)),
        (Monomial::q(4), Monomial::q(4), Base::q(1)),
        (Monomial::neg_q(3), Monomial::neg_q(3), Base::q(2)),
        (Monomial::neg_q(-1), Monomial::neg_q(-1), Base::q(2)),
    ];
    for (x, y, b) in sums {
        let p = HeckeParams::new(2, 3, 2, x, y, b);
        let rings = p.ring_count(prec).map_err(|e| e.to_string())?;
        if p.sum_rings(prec, rings) != p.sum_rings(prec, 2 * rings + 2) {
            return Err(format!("f(2,3,2; {x}, {y}; {b}) changes when the rings double"));
        }
    }
    Ok(format!("{msg}; ring doubling stable on all four sums"))
}

fn dn_cross_check() -> Outcome {
    let mut rng = rng(2024);
    let prec = DN_ORDER + 1;
    let compare = |arg: DnArg| -> Result<bool, String> {
        let (Ok(d), Ok(c)) = (dn_def(arg, prec), dn_closed(arg, prec)) else {
            return Ok(false);
        };
        if d.eq_to(&c, DN_ORDER).map_err(|e| e.to_string())?.is_equal() {
            Ok(true)
        } else {
            Err(format!("definition and closed form differ at {arg:?}"))
        }
    };
    let mut counts = Vec::new();
    for n in 1..=3 {
        let mut done = 0;
        let mut draws = 0;
        while done < DN_SAMPLES && draws < 20 * DN_SAMPLES {
            draws += 1;
            let b = base(&mut rng, 2);
            let arg = DnArg::new(n, mono(&mut rng, -3, 3), b, mono(&mut rng, -3, 3), mono(&mut rng, -6, 6))
                .map_err(|e| e.to_string())?;
            if compare(arg)? {
                done += 1;
            }
        }
        if done < DN_SAMPLES {
            return Err(format!("only {done} generic samples for n = {n}"));
        }
        counts.push(done);
    }
    let four = DnArg::new(4, Monomial::neg_q(1), Base::q(1), Monomial::new(mockverify::Unit::OMEGA, 1), Monomial::q(5))
        .map_err(|e| e.to_string())?;
    if !compare(four)? {
        return Err("n = 4 spot check is not generic".into());
    }
    Ok(format!("n = 1, 2, 3 with {counts:?} random quadruples each plus n = 4, order {DN_ORDER}"))
}

fn single_quotients() -> Outcome {
    let ids: Vec<String> = builtin_catalog()
        .into_iter()
        .map(|s| s.id)
        .filter(|id| id.starts_with("lemma-5.") || id.starts_with("lemma-3.4"))
        .collect();
    let base_only = ids.iter().filter(|id| !id.ends_with("-w") && !id.ends_with("-w2")).count();
    if base_only != 14 || ids.len() != 30 {
        return Err(format!("expected 12 + 2 evaluations and 16 unit variants, found {}", ids.len()));
    }
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    all_pass(&refs, LEMMA_ORDER).map(|m| format!("{m} (including bases w*q^10, w*q^5, w^2*q^5)"))
}

fn run_named_suites(gens: Vec<(&'static str, Gen)>, seed: u64, count: usize, order: i64) -> Result<usize, String> {
    let mut n = 0;
    for (i, (name, g)) in gens.into_iter().enumerate() {
        let s = run_suite(seed + i as u64, count, order, g);
        if !s.ok(count) {
            return Err(format!("{name}: {} passed, failures {:?}", s.passed, s.failures.first()));
        }
        n += 1;
    }
    Ok(n)
}

fn theta_toolkit() -> Outcome {
    let mut r = rng(99);
    let mut args = 0;
    while args < TRIPLE_PRODUCT_ARGS {
        // The product form needs both (x)_inf and (b/x)_inf to be defined.
        let b = base(&mut r, 6);
        let x = mono(&mut r, 0, b.exp());
        let sum = theta_j(x, b, TRIPLE_PRODUCT_ORDER + 1);
        let prod = theta_j_product(x, b, TRIPLE_PRODUCT_ORDER + 1).map_err(|e| e.to_string())?;
        if !sum.eq_to(&prod, TRIPLE_PRODUCT_ORDER).map_err(|e| e.to_string())?.is_equal() {
            return Err(format!("triple product fails at j({x}; {b})"));
        }
        args += 1;
    }
    let laws = run_named_suites(theta_law_gens(), 1000, THETA_SUITE_SIZE, THETA_SUITE_ORDER)?;
    let products = run_named_suites(product_gens(), 2000, THETA_SUITE_SIZE, THETA_SUITE_ORDER)?;
    let w = run_suite(3000, THETA_SUITE_SIZE, THETA_SUITE_ORDER, weierstrass_gen());
    if !w.ok(THETA_SUITE_SIZE) {
        return Err(format!("weierstrass: {:?}", w.failures.first()));
    }
    all_pass(&["cor-2.7-id1", "cor-2.7-id1-prod", "cor-2.7-id2", "cor-2.7-id2-prod"], THETA_ID_ORDER)?;
    Ok(format!(
        "{args} triple products at {TRIPLE_PRODUCT_ORDER}; {} suites x {THETA_SUITE_SIZE} at {THETA_SUITE_ORDER}; two theta identities at {THETA_ID_ORDER}",
        laws + products + 1
    ))
}

fn appell_equations() -> Outcome {
    let suites = run_named_suites(appell_gens(), 4000, APPELL_SUITE_SIZE, APPELL_SUITE_ORDER)?;
    let mut r = rng(5000);
    let prec = APPELL_SUITE_ORDER + 1;
    let mut checked = 0;
    while checked < APPELL_SUITE_SIZE {
        let arg = AppellArg::new(mono(&mut r, -3, 3), base(&mut r, 4), mono(&mut r, -3, 3));
        let (lo, hi) = arg.r_window(prec);
        let (Ok(a), Ok(b)) = (arg.series_in_window(prec, (lo, hi)), arg.series_in_window(prec, (2 * lo - 10, 2 * hi + 10)))
        else {
            continue;
        };
        let p = a.prec().min(b.prec());
        if a.truncate(p) != b.truncate(p) {
            return Err(format!("window doubling changes {arg:?}"));
        }
        checked += 1;
    }
    Ok(format!("{suites} suites x {APPELL_SUITE_SIZE} at {APPELL_SUITE_ORDER}; {checked} window doublings"))
}

fn controls() -> Outcome {
    let reports = verify_many(&negative_controls(), None, true);
    if reports.len() < MIN_CONTROLS {
        return Err(format!("only {} controls", reports.len()));
    }
    if let Some(r) = reports.iter().find(|r| r.pass || r.first_mismatch.is_none()) {
        return Err(format!("{} did not fail with a mismatch", r.id));
    }
    let flipped = {
        let s = find("RLN-1.2").ok_or("missing RLN-1.2")?;
        mockverify::catalog::IdentitySpec::new("flip", s.lhs, s.rhs.neg())
    };
    let r = verify(&flipped, SIX_ORDER);
    if r.first_mismatch.as_ref().map(|m| m.exp) != Some(1) {
        return Err(format!("sign flip reported {:?}", r.first_mismatch));
    }
    Ok(format!("{} mutants fail with a first mismatch", reports.len() + 1))
}

fn dsl_and_cli() -> Outcome {
    let cat = builtin_catalog();
    for s in &cat {
        let (l, r) = parse_identity(&format!("{} == {}", s.lhs, s.rhs)).map_err(|e| format!("{}: {e}", s.id))?;
        if l != s.lhs || r != s.rhs {
            return Err(format!("{} does not round-trip", s.id));
        }
    }
    let mut runner = TestRunner::new_with_rng(Config::default(), TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    let strategy = arb_expr();
    for _ in 0..GENERATED_ASTS {
        let e = strategy.new_tree(&mut runner).map_err(|e| e.to_string())?.current();
        let text = e.to_string();
        if parse_expr(&text).ok().as_ref() != Some(&e) {
            return Err(format!("generated tree does not round-trip: {text}"));
        }
    }
    let out = Command::new(env!("CARGO_BIN_EXE_mockverify"))
        .args(["--all", "--order", CLI_ORDER, "--report", "json"])
        .output()
        .map_err(|e| e.to_string())?;
    if out.status.code() != Some(0) {
        return Err(format!("exit code {:?}", out.status.code()));
    }
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let rows = v.as_array().ok_or("not an array")?;
    if rows.len() != cat.len() {
        return Err(format!("{} rows for {} entries", rows.len(), cat.len()));
    }
    for row in rows {
        let o = row.as_object().ok_or("row is not an object")?;
        let mut keys: Vec<&str> = o.keys().map(String::as_str).collect();
        keys.sort_unstable();
        let mismatch_ok = match &o["mismatch"] {
            serde_json::Value::Null => true,
            serde_json::Value::Object(m) => m["exp"].is_i64() && m["lhs"].is_string() && m["rhs"].is_string(),
            _ => false,
        };
        if keys != ["id", "mismatch", "ms", "order", "pass"]
            || !o["id"].is_string()
            || o["order"].as_i64() != CLI_ORDER.parse().ok()
            || !o["pass"].is_boolean()
            || !o["ms"].is_u64()
            || !mismatch_ok
        {
            return Err(format!("row does not match the schema: {row}"));
        }
    }
    Ok(format!("{} entries and {GENERATED_ASTS} generated trees round-trip; CLI JSON conforms", cat.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("six identities", six_identities),
        ("Appell-Lerch forms of the mock functions", appell_forms),
        ("Hecke-type rewrites", hecke_rewrites),
        ("D_n definition vs closed form", dn_cross_check),
        ("single-quotient evaluations", single_quotients),
        ("theta toolkit", theta_toolkit),
        ("Appell-Lerch functional equations", appell_equations),
        ("negative controls", controls),
        ("DSL round-trip and CLI", dsl_and_cli),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let t = start.elapsed();
        match res {
            Ok(msg) => println!("PASS {}: {name}: {msg} [{t:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {}: {name}: {msg} [{t:.2?}]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
