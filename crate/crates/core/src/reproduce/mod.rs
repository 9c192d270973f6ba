//! The acceptance checks, runnable as one batch.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::deauto::{self, GridFamily, LinearizationMode};
use crate::degrees::{self, BackendKind, DegreeTable};
use crate::growth::{self, Growth, Interpretation};
use crate::lattice::backend::{Backend, ExactBackend, NaiveBackend, NumericBackend};
use crate::lattice::engine::apply_rule;
use crate::lattice::expr::{BinOp, Expr, Leaf, Op, Sym};
use crate::lattice::{CoefficientGrid, InitScheme, LatticeRule, Region, Stencil, BUILTINS};
use crate::symcore::{gcd_with, GcdStrategy, Int, Polynomial, Ring, Variable};

/// Exact KdV table on the 4x6 region.
pub const KDV_TABLE: [[u64; 6]; 4] =
    [[1, 1, 1, 1, 1, 1], [1, 3, 5, 7, 9, 11], [1, 5, 13, 19, 25, 31], [1, 7, 19, 31, 41, 51]];
/// mKdV with generic coefficients, rows m = 1, 2, 3 from n = 0.
pub const MKDV_GENERIC_ROWS: [&[u64]; 3] = [&[1, 2, 3, 4, 5, 6], &[1, 3, 7, 13, 21, 31], &[1, 4, 13, 32, 65]];
/// Sine-Gordon with generic coefficients, rows m = 2, 3 from n = 0.
pub const SINE_GORDON_GENERIC_ROWS: [&[u64]; 2] = [&[1, 4, 11, 19, 29, 41], &[1, 5, 19, 49, 96]];

/// Relative tolerance on the mKdV entropy ratio.
pub const ENTROPY_RATIO_TOLERANCE: f64 = 0.05;
pub const KDV_EXACT_LIMIT: Duration = Duration::from_secs(300);
pub const KDV_SPECIALIZED_LIMIT: Duration = Duration::from_secs(5);
pub const PKDV_EXACT_LIMIT: Duration = Duration::from_secs(60);
pub const MKDV_ENTROPY_LIMIT: Duration = Duration::from_secs(120);
/// Trials of the specialized backend throughout.
pub const TRIALS: usize = 3;
/// Seeds for seeded checks.
pub const SEEDS: usize = 3;
pub const PROPERTY_SEEDS: u64 = 5;
pub const EXPRESSION_TREES: usize = 200;
pub const EVALUATION_POINTS: usize = 20;
pub const GCD_PAIRS: usize = 50;

/// Outcome of one sub-check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl CriterionResult {
    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "title": self.title,
            "pass": self.pass(),
            "seconds": self.elapsed.as_secs_f64(),
            "checks": self.checks.iter().map(|c| json!({"label": c.label, "pass": c.pass, "detail": c.detail})).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.pass).map(|c| c.label.as_str()).collect();
        write!(
            f,
            "[{}] criterion {:>2}: {} ({} checks)",
            if self.pass() { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.checks.len()
        )?;
        if !failed.is_empty() {
            write!(f, "; failed: {}", failed.join(", "))?;
        }
        Ok(())
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn check(&mut self, label: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check { label: label.into(), pass, detail: detail.into() });
    }

    /// Records a failed check for an error, or hands back the value.
    fn ok<T, E: fmt::Display>(&mut self, label: &str, r: Result<T, E>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(label, false, format!("error: {e}"));
                None
            }
        }
    }
}

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    run: fn(&mut Recorder),
}

pub const CRITERIA: [Criterion; 10] = [
    Criterion { id: 1, title: "KdV degree table and closed form", run: kdv },
    Criterion { id: 2, title: "pKdV constant, generic and staircase tables", run: pkdv },
    Criterion { id: 3, title: "mKdV generic table, recursion and entropy", run: mkdv },
    Criterion { id: 4, title: "sine-Gordon tables and corrected recursion", run: sine_gordon },
    Criterion { id: 5, title: "Liouville table, class and gauge", run: liouville },
    Criterion { id: 6, title: "Burgers tables and linearisation", run: burgers },
    Criterion { id: 7, title: "constraint derivation", run: derivation },
    Criterion { id: 8, title: "constraint sufficiency and perturbation", run: sufficiency },
    Criterion { id: 9, title: "specialized backend matches exact backend", run: oracle },
    Criterion { id: 10, title: "substrate properties", run: substrate },
];

impl Criterion {
    pub fn run(&self) -> CriterionResult {
        let start = Instant::now();
        let mut rec = Recorder { checks: Vec::new() };
        (self.run)(&mut rec);
        CriterionResult { id: self.id, title: self.title, checks: rec.checks, elapsed: start.elapsed() }
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    CRITERIA.iter().map(Criterion::run).collect()
}

fn rule(name: &str) -> LatticeRule {
    LatticeRule::builtin(name).expect("builtin rule")
}

fn grid_eq(table: &DegreeTable, f: impl Fn(u64, u64) -> u64, interior_only: bool) -> Result<(), String> {
    for m in 0..table.rows() {
        for n in 0..table.cols() {
            if interior_only && m * n == 0 {
                continue;
            }
            let want = f(m as u64, n as u64);
            if table.get(m, n) != want {
                return Err(format!("({m},{n}) is {} expected {want}", table.get(m, n)));
            }
        }
    }
    Ok(())
}

fn record_grid(rec: &mut Recorder, label: &str, table: &DegreeTable, f: impl Fn(u64, u64) -> u64, interior: bool) {
    match grid_eq(table, f, interior) {
        Ok(()) => rec.check(label, true, format!("{} cells match", table.rows() * table.cols())),
        Err(e) => rec.check(label, false, e),
    }
}

fn rows_match(table: &DegreeTable, first_row: usize, rows: &[&[u64]]) -> Result<(), String> {
    for (i, want) in rows.iter().enumerate() {
        let m = first_row + i;
        let got: Vec<u64> = (0..want.len()).map(|n| table.get(m, n)).collect();
        if got != *want {
            return Err(format!("row m={m} is {got:?} expected {want:?}"));
        }
    }
    Ok(())
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn kdv(rec: &mut Recorder) {
    let kdv = rule("kdv");
    let region = Region::new(4, 6);
    let c = CoefficientGrid::Constant(3);
    let (t, el) = timed(|| degrees::exact_table(&kdv, InitScheme::Corner, &c, region));
    if let Some(t) = rec.ok("exact table", t) {
        record_grid(rec, "exact table", &t, |m, n| KDV_TABLE[m as usize][n as usize], false);
        rec.check("exact runtime", el < KDV_EXACT_LIMIT, format!("{:.3}s", el.as_secs_f64()));
        if let Some(fit) = rec.ok("closed form", growth::fit_closed_form(&t)) {
            let formula = fit.formula().unwrap_or_default();
            let pass = fit.valid
                && formula == "4*m*n - 2*max(m,n) + 1"
                && (1..4).all(|m| (1..6).all(|n| fit.eval(m, n) == int(4 * m * n - 2 * m.max(n) + 1)));
            rec.check("closed form", pass, formula);
        }
    }
    let (s, el) = timed(|| degrees::degree_table_specialized(&kdv, InitScheme::Corner, &c, region, TRIALS, 1));
    if let Some(s) = rec.ok("specialized table", s) {
        record_grid(rec, "specialized table", &s, |m, n| KDV_TABLE[m as usize][n as usize], false);
        rec.check("specialized runtime", el < KDV_SPECIALIZED_LIMIT, format!("{:.3}s", el.as_secs_f64()));
    }
}

fn pkdv(rec: &mut Recorder) {
    let pkdv = rule("pkdv");
    let r5 = Region::new(5, 5);
    let (t, el) = timed(|| degrees::exact_table(&pkdv, InitScheme::Corner, &CoefficientGrid::Constant(3), r5));
    if let Some(t) = rec.ok("constant exact 5x5", t) {
        record_grid(rec, "constant exact 5x5", &t, |m, n| m * n + 1, false);
        rec.check("constant exact runtime", el < PKDV_EXACT_LIMIT, format!("{:.3}s", el.as_secs_f64()));
    }
    let pascal = |m, n| binom(m + n, m);
    for (label, coeffs) in
        [("generic symbolic 5x5", CoefficientGrid::GenericSymbolic), ("generic random 5x5", CoefficientGrid::GenericRandom { seed: 1 })]
    {
        let t = degrees::degree_table_specialized(&pkdv, InitScheme::Corner, &coeffs, r5, TRIALS, 2);
        if let Some(t) = rec.ok(label, t) {
            record_grid(rec, label, &t, pascal, false);
        }
    }
    let t = degrees::exact_table(&pkdv, InitScheme::Corner, &CoefficientGrid::GenericSymbolic, Region::new(4, 4));
    if let Some(t) = rec.ok("generic symbolic exact 4x4", t) {
        record_grid(rec, "generic symbolic exact 4x4", &t, pascal, false);
    }
    // Anti-diagonals N = m + n up to 6.
    let t = degrees::exact_table(&pkdv, InitScheme::Staircase, &CoefficientGrid::Constant(3), Region::new(4, 4));
    if let Some(t) = rec.ok("staircase exact", t) {
        record_grid(rec, "staircase exact", &t, |m, n| 1 + (m + n) * (m + n).saturating_sub(1) / 2, false);
    }
}

fn mkdv(rec: &mut Recorder) {
    let mkdv = rule("mkdv");
    let ((t, report), el) = timed(|| {
        let t = degrees::degree_table_specialized(
            &mkdv,
            InitScheme::Corner,
            &CoefficientGrid::GenericRandom { seed: 1 },
            Region::new(7, 7),
            TRIALS,
            3,
        );
        let report = t.as_ref().ok().map(growth::analyze);
        (t, report)
    });
    let Some(t) = rec.ok("generic table", t) else { return };
    match rows_match(&t, 1, &MKDV_GENERIC_ROWS) {
        Ok(()) => rec.check("generic rows", true, "rows m=1..3 match"),
        Err(e) => rec.check("generic rows", false, e),
    }
    let Some(report) = rec.ok("analysis", report.expect("table present")) else { return };
    let r = &report.recursion;
    let pass = r.valid && r.delta_correction.is_none() && r.coefficients() == [&int(1), &int(1), &int(1), &int(-1)];
    rec.check("recursion", pass, r.formula().unwrap_or_else(|| "none".into()));
    let target = 1.0 + 2f64.sqrt();
    match &report.entropy {
        Some(e) => {
            let rel = (e.ratio - target).abs() / target;
            rec.check("entropy ratio", rel < ENTROPY_RATIO_TOLERANCE, format!("ratio {:.5}, relative error {:.4}", e.ratio, rel));
        }
        None => rec.check("entropy ratio", false, "diagonal too short"),
    }
    rec.check("runtime", el < MKDV_ENTROPY_LIMIT, format!("{:.3}s", el.as_secs_f64()));
}

fn sine_gordon(rec: &mut Recorder) {
    let sg = rule("sine_gordon");
    let t = degrees::exact_table(&sg, InitScheme::Corner, &CoefficientGrid::Constant(3), Region::new(5, 5));
    if let Some(t) = rec.ok("constant exact 5x5", t) {
        record_grid(rec, "constant exact 5x5", &t, |m, n| m * n + m.min(n) + 1, false);
    }
    let t = degrees::degree_table_specialized(
        &sg,
        InitScheme::Corner,
        &CoefficientGrid::GenericRandom { seed: 1 },
        Region::new(6, 6),
        TRIALS,
        4,
    );
    let Some(t) = rec.ok("generic table", t) else { return };
    match rows_match(&t, 2, &SINE_GORDON_GENERIC_ROWS) {
        Ok(()) => rec.check("generic rows", true, "rows m=2,3 match"),
        Err(e) => rec.check("generic rows", false, e),
    }
    if let Some(r) = rec.ok("recursion", growth::detect_recursion(&t)) {
        let pass = r.valid
            && r.coefficients() == [&int(1), &int(1), &int(1), &int(-1)]
            && r.delta_correction == Some(int(1));
        rec.check("recursion", pass, r.formula().unwrap_or_else(|| "none".into()));
    }
}

fn liouville(rec: &mut Recorder) {
    let lv = rule("liouville");
    let r5 = Region::new(5, 5);
    let t = degrees::exact_table(&lv, InitScheme::Corner, &CoefficientGrid::Constant(3), r5);
    let Some(t) = rec.ok("constant exact 5x5", t) else { return };
    record_grid(rec, "constant interior", &t, |m, n| m + n, true);
    if let Some(c) = rec.ok("classify", growth::classify(&t)) {
        rec.check(
            "classify",
            c.class == Growth::Linear && c.interpretation == Interpretation::Linearisable,
            format!("{} / {}", c.class, c.interpretation),
        );
    }
    if let Some(ok) = rec.ok("gauge", deauto::check_gauge(&lv, Region::new(4, 4), SEEDS, 0)) {
        rec.check("gauge", ok, format!("{SEEDS} seeds"));
    }
}

fn burgers(rec: &mut Recorder) {
    let b = rule("burgers");
    let region = Region::new(6, 4);
    let cases: [(&str, CoefficientGrid, fn(u64) -> u64); 2] = [
        ("constant", CoefficientGrid::Constant(3), |m| m + 1),
        ("generic random", CoefficientGrid::GenericRandom { seed: 1 }, |m| 1 << m),
    ];
    for (label, coeffs, f) in cases {
        let t = degrees::exact_table(&b, InitScheme::Line, &coeffs, region);
        if let Some(t) = rec.ok(label, t) {
            record_grid(rec, label, &t, |m, _| f(m), false);
        }
    }
    for seed in 0..SEEDS as u64 {
        let label = format!("row-only seed {seed}");
        let t = degrees::exact_table(&b, InitScheme::Line, &CoefficientGrid::row_only_random(seed), region);
        if let Some(t) = rec.ok(&label, t) {
            record_grid(rec, &label, &t, |m, _| m + 1, false);
        }
    }
    for mode in [LinearizationMode::Simple, LinearizationMode::General] {
        let label = format!("linearisation {mode:?}");
        if let Some(ok) = rec.ok(&label, deauto::check_burgers_linearization(mode, Region::new(4, 6), SEEDS, 0)) {
            rec.check(label, ok, format!("{SEEDS} seeds"));
        }
    }
}

/// Builds `sum c_i prod z(cells)` in the constraint's own ring.
fn z_poly(ring: &Arc<Ring>, terms: &[(i64, &[(i64, i64)])]) -> Option<Polynomial> {
    let mut acc = Polynomial::zero(ring);
    for (c, cells) in terms {
        let mut t = Polynomial::constant(ring, *c);
        for &(m, n) in *cells {
            t = &t * &Polynomial::var(ring, Variable::z(m, n)).ok()?;
        }
        acc = &acc + &t;
    }
    Some(acc)
}

fn derivation(rec: &mut Recorder) {
    type Terms = &'static [(i64, &'static [(i64, i64)])];
    let plaquette: Terms = &[(1, &[(1, 1)]), (-1, &[(1, 0)]), (-1, &[(0, 1)]), (1, &[(0, 0)])];
    let cross: Terms = &[(1, &[(1, 1), (0, 0)]), (-1, &[(1, 0), (0, 1)])];
    let burgers: Terms = &[(1, &[(0, 1)]), (-1, &[(0, 0)])];
    for (name, expected) in [("pkdv", plaquette), ("mkdv", cross), ("sine_gordon", cross), ("burgers", burgers)] {
        let r = rule(name);
        let region = if r.stencil == Stencil::Tri { Region::new(5, 4) } else { Region::new(4, 4) };
        let Some(cell) = rec.ok(name, deauto::first_discrepancy(&r, region)) else { continue };
        let Some(cell) = cell else {
            rec.check(name, false, "constant and generic tables agree");
            continue;
        };
        let Some(c) = rec.ok(name, deauto::derive_constraint(&r, (cell.m as i64, cell.n as i64))) else { continue };
        let want = z_poly(c.poly.ring(), expected).map(|p| p.canonical());
        let pass = want.as_ref() == Some(&c.poly.canonical());
        rec.check(name, pass, format!("{} at ({},{}), factor {}", c.poly, cell.m, cell.n, c.movable_factor));
    }
}

fn sufficiency(rec: &mut Recorder) {
    let r4 = Region::new(4, 4);
    for (name, family) in
        [("pkdv", GridFamily::Sum), ("mkdv", GridFamily::Product), ("sine_gordon", GridFamily::Product), ("burgers", GridFamily::RowOnly)]
    {
        let label = format!("{name} {}", family.name());
        let report = deauto::verify_constraint(&rule(name), &family, r4, SEEDS, 0, BackendKind::Exact);
        if let Some(report) = rec.ok(&label, report) {
            rec.check(label, report.pass, format!("{} seeds", report.trials.len()));
        }
    }
    let pkdv = rule("pkdv");
    let grid = CoefficientGrid::sum_random(0);
    let before = degrees::exact_table(&pkdv, InitScheme::Corner, &grid, r4);
    let after = deauto::perturb_grid(&pkdv, &grid, r4, (1, 1), 1)
        .map_err(|e| e.to_string())
        .and_then(|g| degrees::exact_table(&pkdv, InitScheme::Corner, &g, r4).map_err(|e| e.to_string()));
    if let (Some(before), Some(after)) = (rec.ok("perturbation", before), rec.ok("perturbation", after)) {
        let (b, a) = (before.get(2, 2), after.get(2, 2));
        rec.check("perturbation", b == 5 && a == 6, format!("d[2][2] {b} -> {a}"));
    }
}

fn oracle(rec: &mut Recorder) {
    let r4 = Region::new(4, 4);
    let modes = [
        CoefficientGrid::Constant(3),
        CoefficientGrid::GenericSymbolic,
        CoefficientGrid::GenericRandom { seed: 11 },
        CoefficientGrid::sum_random(12),
        CoefficientGrid::product_random(13),
        CoefficientGrid::row_only_random(14),
    ];
    let compare = |rec: &mut Recorder, r: &LatticeRule, coeffs: &CoefficientGrid, seed: u64| {
        let label = format!("{} {} seed {seed}", r.name, coeffs.mode_name());
        let scheme = InitScheme::default_for(r.stencil);
        let exact = degrees::exact_table(r, scheme, coeffs, r4);
        let spec = degrees::degree_table_specialized(r, scheme, coeffs, r4, TRIALS, seed);
        if let (Some(e), Some(s)) = (rec.ok(&label, exact), rec.ok(&label, spec)) {
            match degrees::compare_tables(&e, &s) {
                Ok(c) if c.equal => rec.check(label, true, "equal"),
                Ok(c) => rec.check(label, false, format!("{:?}", c.first_discrepancy)),
                Err(err) => rec.check(label, false, err.to_string()),
            }
        }
    };
    for b in BUILTINS {
        let r = rule(b.name);
        for coeffs in &modes {
            compare(rec, &r, coeffs, 100);
        }
        for seed in 0..PROPERTY_SEEDS {
            compare(rec, &r, &CoefficientGrid::GenericRandom { seed: 1000 + seed }, seed);
        }
    }
}

/// Random expression over the four placeholders with small constants.
pub fn random_expr(rng: &mut impl Rng, depth: u32, allow_div: bool) -> Expr {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.7) {
            Expr::Sym(Sym::ALL[rng.gen_range(0..4)])
        } else {
            Expr::Num(rng.gen_range(1..6))
        };
    }
    if rng.gen_bool(0.1) {
        return Expr::Neg(Box::new(random_expr(rng, depth - 1, allow_div)));
    }
    let ops: &[BinOp] = if allow_div { &[BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div] } else { &[BinOp::Add, BinOp::Sub, BinOp::Mul] };
    let op = ops[rng.gen_range(0..ops.len())];
    Expr::bin(op, random_expr(rng, depth - 1, allow_div), random_expr(rng, depth - 1, allow_div))
}

/// Random polynomial with up to `terms` terms, small exponents and coefficients.
pub fn random_poly(rng: &mut impl Rng, ring: &Arc<Ring>, terms: usize) -> Polynomial {
    let n = ring.len();
    let terms = (0..rng.gen_range(1..=terms)).map(|_| {
        let e: Vec<u16> = (0..n).map(|_| if rng.gen_bool(0.5) { rng.gen_range(0..3) } else { 0 }).collect();
        let c: i64 = loop {
            let c = rng.gen_range(-9..=9);
            if c != 0 {
                break c;
            }
        };
        (e, Int::from(c))
    });
    Polynomial::from_terms(ring, terms.collect::<Vec<_>>())
}

/// Placeholder bindings used by the evaluation checks.
pub fn placeholder_vars() -> [(Sym, Variable); 4] {
    [(Sym::X00, Variable::p(0)), (Sym::X10, Variable::r(1)), (Sym::X01, Variable::p(1)), (Sym::Z, Variable::z(0, 0))]
}

fn numeric_at(expr: &Expr, vals: &HashMap<Variable, BigRational>) -> Option<BigRational> {
    let rule = LatticeRule { name: "tree".into(), stencil: Stencil::Quad, expr: expr.clone() };
    let v = |s: Sym| vals[&placeholder_vars().iter().find(|(x, _)| *x == s).expect("bound").1].clone();
    apply_rule(&rule, &mut NumericBackend { values: HashMap::new() }, &v(Sym::X00), Some(&v(Sym::X10)), &v(Sym::X01), &v(Sym::Z))
}

/// Checks exact, naive and numeric evaluation of random rational trees, and
/// polynomial trees against integer evaluation. Returns the failure, if any.
pub fn evaluation_consistency(seed: u64, trees: usize, points: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = Ring::new(placeholder_vars().map(|(_, v)| v));
    let mut compared = 0;
    let mut built = 0;
    while built < trees {
        let allow_div = built % 2 == 0;
        let expr = random_expr(&mut rng, 4, allow_div);
        let rule = LatticeRule { name: "tree".into(), stencil: Stencil::Quad, expr: expr.clone() };
        let mut exact = ExactBackend::new(&ring);
        let mut naive = NaiveBackend { ring: ring.clone() };
        let xs: Vec<_> = placeholder_vars().iter().map(|&(_, v)| v).collect();
        let e: Vec<_> = xs.iter().map(|&v| exact.symbol(v)).collect();
        let Some(fx) = apply_rule(&rule, &mut exact, &e[0], Some(&e[1]), &e[2], &e[3]) else { continue };
        let n: Vec<_> = xs.iter().map(|&v| naive.symbol(v)).collect();
        let Some(rf) = apply_rule(&rule, &mut naive, &n[0], Some(&n[1]), &n[2], &n[3]) else {
            return Err(format!("naive backend divides by zero on {expr} but exact does not"));
        };
        let poly = if allow_div {
            None
        } else {
            let mut leaf = |l: Leaf| -> Result<Polynomial, ()> {
                Ok(match l {
                    Leaf::Num(n) => Polynomial::constant(&ring, n as i64),
                    Leaf::Sym(s) => Polynomial::var(&ring, placeholder_vars().iter().find(|(x, _)| *x == s).expect("bound").1).map_err(|_| ())?,
                })
            };
            let mut op = |o: Op<Polynomial>| -> Result<Polynomial, ()> {
                Ok(match o {
                    Op::Neg(a) => -&a,
                    Op::Bin(BinOp::Add, a, b) => &a + &b,
                    Op::Bin(BinOp::Sub, a, b) => &a - &b,
                    Op::Bin(BinOp::Mul, a, b) => &a * &b,
                    Op::Bin(BinOp::Div, ..) => return Err(()),
                })
            };
            Some(expr.eval(&mut leaf, &mut op).map_err(|_| "polynomial tree contains a division".to_string())?)
        };
        built += 1;
        for _ in 0..points {
            let point: Vec<BigRational> = (0..ring.len()).map(|_| int(rng.gen_range(-50..=50))).collect();
            let vals: HashMap<Variable, BigRational> = ring.vars().iter().copied().zip(point.iter().cloned()).collect();
            let Some(want) = numeric_at(&expr, &vals) else { continue };
            if let Some(p) = &poly {
                if p.eval_rational(&point) != want {
                    return Err(format!("polynomial tree {expr} disagrees at {point:?}"));
                }
            }
            if let Some(got) = exact.pool.eval_rational(&fx, &point) {
                if got != want {
                    return Err(format!("factored value of {expr} disagrees at {point:?}"));
                }
            }
            if let Some(got) = rf.eval_rational(&point) {
                if got != want {
                    return Err(format!("canonical value of {expr} disagrees at {point:?}"));
                }
            }
            compared += 1;
        }
    }
    Ok(compared)
}

/// Builds `a c`, `b c` and checks the gcd divides both and is divisible by
/// `c`, under both strategies.
pub fn gcd_pairs(seed: u64, pairs: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ring = Ring::new([Variable::p(0), Variable::p(1), Variable::r(1), Variable::q(), Variable::z(0, 0)]);
    for i in 0..pairs {
        let a = random_poly(&mut rng, &ring, 4);
        let b = random_poly(&mut rng, &ring, 4);
        let c = random_poly(&mut rng, &ring, 3);
        let (x, y) = (&a * &c, &b * &c);
        for strategy in [GcdStrategy::Fast, GcdStrategy::Recursive] {
            let g = gcd_with(&x, &y, strategy);
            if x.div_exact(&g).is_none() || y.div_exact(&g).is_none() {
                return Err(format!("pair {i}: gcd {g} does not divide both ({strategy:?})"));
            }
            if g.div_exact(&c).is_none() {
                return Err(format!("pair {i}: common factor {c} does not divide gcd {g} ({strategy:?})"));
            }
        }
    }
    Ok(())
}

fn substrate(rec: &mut Recorder) {
    match evaluation_consistency(7, EXPRESSION_TREES, EVALUATION_POINTS) {
        Ok(n) => rec.check("evaluation consistency", true, format!("{EXPRESSION_TREES} trees, {n} point comparisons")),
        Err(e) => rec.check("evaluation consistency", false, e),
    }
    match gcd_pairs(8, GCD_PAIRS) {
        Ok(()) => rec.check("gcd divides both", true, format!("{GCD_PAIRS} pairs, both strategies")),
        Err(e) => rec.check("gcd divides both", false, e),
    }
    // Exact tables reject any cell whose numerator and denominator are not
    // homogeneous of one degree, so building them is the check.
    let mut cells = 0;
    let mut failures = Vec::new();
    for b in BUILTINS {
        let r = rule(b.name);
        for coeffs in [CoefficientGrid::Constant(3), CoefficientGrid::GenericSymbolic] {
            match degrees::exact_table(&r, InitScheme::default_for(r.stencil), &coeffs, Region::new(4, 4)) {
                Ok(t) => cells += t.rows() * t.cols(),
                Err(e) => failures.push(format!("{} {}: {e}", b.name, coeffs.mode_name())),
            }
        }
    }
    rec.check("homogeneity", failures.is_empty(), if failures.is_empty() { format!("{cells} cells") } else { failures.join("; ") });
}
