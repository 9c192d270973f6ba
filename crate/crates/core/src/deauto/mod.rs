//! Nonautonomous coefficients: constraint verification and derivation,
//! the Liouville gauge and Burgers linearisation identities.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::degrees::{self, BackendKind, Comparison, DegreeError, DegreeTable, Discrepancy};
use crate::lattice::backend::NumericBackend;
use crate::lattice::coeff::{DEFAULT_CONSTANT, SEQUENCE_RANGE};
use crate::lattice::engine::{self, apply_rule};
use crate::lattice::{Cell, CoefficientGrid, InitScheme, LatticeError, LatticeRule, Plan, Region, Stencil, ZValue};
use crate::symcore::{gcd, Polynomial, VarKind};

/// Trials per table when verifying with the specialized backend.
pub const SPECIALIZED_TRIALS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeautoError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Degree(#[from] DegreeError),
    #[error("cell ({m},{n}) is not computed by this rule")]
    InvalidCell { m: i64, n: i64 },
    #[error("no movable factor found at cell ({m},{n})")]
    NoMovableFactor { m: i64, n: i64 },
    #[error("several movable factors give different constraints: {}", .0.join("; "))]
    AmbiguousFactor(Vec<String>),
    #[error("movable factor {0} is not linear in any initial datum")]
    NonlinearFactor(String),
    #[error("coefficients do not share a generator: {}", .0.join(", "))]
    NotPrincipal(Vec<String>),
    #[error("coefficient grid at cell ({m},{n}) is symbolic; an integer grid is required")]
    SymbolicEntry { m: i64, n: i64 },
    #[error("seed {seed} produced a zero denominator; try another seed")]
    Degenerate { seed: u64 },
    #[error("seeds must be at least 1")]
    NoSeeds,
    #[error("region {0} is too small for this check")]
    RegionTooSmall(Region),
}

/// How constrained coefficient grids are generated per seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridFamily {
    /// `z = f(n) + g(m)`.
    Sum,
    /// `z = f(n) g(m)`.
    Product,
    /// `z = g(m)`.
    RowOnly,
    /// The same grid for every seed.
    Fixed(CoefficientGrid),
}

impl GridFamily {
    pub fn grid(&self, seed: u64) -> CoefficientGrid {
        match self {
            GridFamily::Sum => CoefficientGrid::sum_random(seed),
            GridFamily::Product => CoefficientGrid::product_random(seed),
            GridFamily::RowOnly => CoefficientGrid::row_only_random(seed),
            GridFamily::Fixed(g) => g.clone(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GridFamily::Sum => "sum",
            GridFamily::Product => "product",
            GridFamily::RowOnly => "row-only",
            GridFamily::Fixed(g) => g.mode_name(),
        }
    }
}

impl FromStr for GridFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "sum" => Ok(GridFamily::Sum),
            "product" => Ok(GridFamily::Product),
            "row-only" | "row_only" | "rowonly" => Ok(GridFamily::RowOnly),
            _ => Err(format!("unknown constraint family '{s}' (expected sum, product or row-only)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyTrial {
    pub seed: u64,
    pub table: DegreeTable,
    pub comparison: Comparison,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub pass: bool,
    pub autonomous: DegreeTable,
    pub trials: Vec<VerifyTrial>,
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "pass": self.pass,
            "autonomous": self.autonomous.to_json(),
            "trials": self.trials.iter().map(|t| json!({
                "seed": t.seed,
                "equal": t.comparison.equal,
                "first_discrepancy": t.comparison.first_discrepancy,
                "table": t.table.to_json(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn table_for(
    rule: &LatticeRule,
    scheme: InitScheme,
    coeffs: &CoefficientGrid,
    region: Region,
    backend: BackendKind,
    seed: u64,
) -> Result<DegreeTable, DeautoError> {
    Ok(match backend {
        BackendKind::Exact => degrees::exact_table(rule, scheme, coeffs, region)?,
        BackendKind::Specialized => {
            degrees::degree_table_specialized(rule, scheme, coeffs, region, SPECIALIZED_TRIALS, seed)?
        }
    })
}

/// Compares constrained-grid tables against the constant-coefficient table,
/// one grid per seed `base_seed..base_seed + seeds`.
pub fn verify_constraint(
    rule: &LatticeRule,
    family: &GridFamily,
    region: Region,
    seeds: usize,
    base_seed: u64,
    backend: BackendKind,
) -> Result<VerifyReport, DeautoError> {
    if seeds == 0 {
        return Err(DeautoError::NoSeeds);
    }
    let scheme = InitScheme::default_for(rule.stencil);
    let autonomous = table_for(rule, scheme, &CoefficientGrid::Constant(DEFAULT_CONSTANT), region, backend, base_seed)?;
    let count = if matches!(family, GridFamily::Fixed(_)) { 1 } else { seeds };
    let mut trials = Vec::with_capacity(count);
    for seed in base_seed..base_seed + count as u64 {
        let table = table_for(rule, scheme, &family.grid(seed), region, backend, seed)?;
        let comparison = degrees::compare_tables(&autonomous, &table)?;
        trials.push(VerifyTrial { seed, table, comparison });
    }
    Ok(VerifyReport { pass: trials.iter().all(|t| t.comparison.equal), autonomous, trials })
}

/// The grid's values on `region` with `delta` added at one coefficient cell.
pub fn perturb_grid(
    rule: &LatticeRule,
    grid: &CoefficientGrid,
    region: Region,
    cell: Cell,
    delta: i64,
) -> Result<CoefficientGrid, DeautoError> {
    let plan = Plan::new(rule.stencil, InitScheme::default_for(rule.stencil), region)?;
    let mut values = BTreeMap::new();
    for (c, v) in grid.materialize(&plan.z_cells())? {
        match v {
            ZValue::Int(x) => values.insert(c, x),
            ZValue::Symbol => return Err(DeautoError::SymbolicEntry { m: c.0, n: c.1 }),
        };
    }
    let v = values.get_mut(&cell).ok_or(DeautoError::InvalidCell { m: cell.0, n: cell.1 })?;
    *v += delta;
    Ok(CoefficientGrid::Explicit(values))
}

/// First cell where generic symbolic coefficients raise the degree above
/// the constant-coefficient table.
pub fn first_discrepancy(rule: &LatticeRule, region: Region) -> Result<Option<Discrepancy>, DeautoError> {
    let scheme = InitScheme::default_for(rule.stencil);
    let a = degrees::exact_table(rule, scheme, &CoefficientGrid::Constant(DEFAULT_CONSTANT), region)?;
    let b = degrees::exact_table(rule, scheme, &CoefficientGrid::GenericSymbolic, region)?;
    Ok(degrees::compare_tables(&a, &b)?.first_discrepancy)
}

/// A polynomial in the coefficient symbols whose vanishing lets the
/// movable factor cancel at `cell`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintPolynomial {
    pub poly: Polynomial,
    pub cell: Cell,
    pub movable_factor: Polynomial,
}

impl ConstraintPolynomial {
    pub fn to_json(&self) -> Value {
        json!({
            "constraint": self.poly.to_string(),
            "cell": [self.cell.0, self.cell.1],
            "movable_factor": self.movable_factor.to_string(),
        })
    }
}

impl fmt::Display for ConstraintPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = 0 (cell ({},{}), movable factor {})",
            self.poly, self.cell.0, self.cell.1, self.movable_factor
        )
    }
}

fn is_data(kind: VarKind) -> bool {
    matches!(kind, VarKind::P(_) | VarKind::R(_) | VarKind::Q)
}

fn gcd_all<'a>(polys: impl IntoIterator<Item = &'a Polynomial>) -> Option<Polynomial> {
    polys.into_iter().filter(|p| !p.is_zero()).fold(None, |acc, p| {
        Some(match acc {
            None => p.canonical(),
            Some(g) => gcd(&g, p),
        })
    })
}

/// Removes factors that involve a single coefficient symbol; those values
/// are generically nonzero.
fn strip_single_variable_factors(mut g: Polynomial) -> Polynomial {
    let ring = g.ring().clone();
    for w in g.used_vars() {
        let var = ring.var(w);
        let parts = g.collect_by(|v| *v != var);
        if let Some(h) = gcd_all(parts.iter().map(|(_, c)| c)) {
            if !h.is_constant() {
                g = g.div_exact(&h).expect("content divides");
            }
        }
    }
    g.canonical()
}

/// `num` restricted to `F = 0` by eliminating `v`, where `F = A v + B`:
/// the homogenised sum of `c_i (-B)^i A^(d-i)`.
fn restrict_to_zero(num: &Polynomial, factor: &Polynomial, v: usize) -> Polynomial {
    let fc = factor.to_univariate(v);
    let (b, a) = (&fc[0], &fc[1]);
    let neg_b = -b;
    let cs = num.to_univariate(v);
    let d = cs.len() - 1;
    let mut acc = Polynomial::zero(num.ring());
    for (i, c) in cs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        acc = &acc + &(&(c * &neg_b.pow(i as u32)) * &a.pow((d - i) as u32));
    }
    acc
}

enum CandidateOutcome {
    Constraint(Polynomial),
    NotPrincipal(Vec<String>),
    Vanishes,
}

fn constraint_for(num: &Polynomial, factor: &Polynomial) -> Result<CandidateOutcome, DeautoError> {
    let ring = factor.ring();
    let v = factor
        .used_vars()
        .into_iter()
        .filter(|&i| is_data(ring.var(i).kind) && factor.degree_in(i) == 1)
        .last()
        .ok_or_else(|| DeautoError::NonlinearFactor(factor.to_string()))?;
    let restricted = restrict_to_zero(num, factor, v);
    let coefficients = restricted.collect_by(|x| !matches!(x.kind, VarKind::Z(..)));
    let Some(g) = gcd_all(coefficients.iter().map(|(_, c)| c)) else { return Ok(CandidateOutcome::Vanishes) };
    let g = strip_single_variable_factors(g);
    if g.is_constant() {
        return Ok(CandidateOutcome::NotPrincipal(coefficients.iter().map(|(_, c)| c.to_string()).collect()));
    }
    Ok(CandidateOutcome::Constraint(g))
}

/// Derives the coefficient constraint at `cell` by requiring that a movable
/// factor from an earlier denominator divide the numerator there.
pub fn derive_constraint(rule: &LatticeRule, cell: Cell) -> Result<ConstraintPolynomial, DeautoError> {
    let (m, n) = cell;
    if m < 0 || n < 0 {
        return Err(DeautoError::InvalidCell { m, n });
    }
    let region = Region::new(m as usize + 1, n as usize + 1);
    let scheme = InitScheme::default_for(rule.stencil);
    let st = engine::iterate(rule, scheme, &CoefficientGrid::GenericSymbolic, region)?;
    if st.plan.is_initial(cell) {
        return Err(DeautoError::NoMovableFactor { m, n });
    }
    let target_order = st.plan.order_of(cell).ok_or(DeautoError::InvalidCell { m, n })?;
    let target = st.pool.normalize(st.factored(cell).ok_or(DeautoError::InvalidCell { m, n })?);
    let mut earlier = BTreeSet::new();
    for step in &st.plan.steps {
        if st.plan.order_of(step.target).is_some_and(|o| o < target_order) {
            let v = st.pool.normalize(&st.cells[&step.target]);
            earlier.extend(v.exps().iter().map(|&(id, _)| id));
        }
    }
    let ring = st.pool.ring().clone();
    let candidates: Vec<usize> = target
        .exps()
        .iter()
        .filter(|&&(id, e)| e < 0 && earlier.contains(&id))
        .map(|&(id, _)| id)
        .filter(|&id| {
            st.pool.factor(id).used_vars().iter().any(|&i| matches!(ring.var(i).kind, VarKind::P(_) | VarKind::R(_)))
        })
        .collect();
    if candidates.is_empty() {
        return Err(DeautoError::NoMovableFactor { m, n });
    }
    let num = st.pool.to_rational(&target).num().clone();
    let mut found: Vec<(Polynomial, Polynomial)> = Vec::new();
    let mut not_principal = None;
    for id in candidates {
        let factor = st.pool.factor(id).clone();
        match constraint_for(&num, &factor)? {
            CandidateOutcome::Constraint(g) => {
                if !found.iter().any(|(c, _)| *c == g) {
                    found.push((g, factor));
                }
            }
            CandidateOutcome::NotPrincipal(cs) => {
                not_principal.get_or_insert(cs);
            }
            CandidateOutcome::Vanishes => {}
        }
    }
    match found.len() {
        0 => Err(not_principal.map_or(DeautoError::NoMovableFactor { m, n }, DeautoError::NotPrincipal)),
        1 => {
            let (poly, movable_factor) = found.pop().expect("one constraint");
            Ok(ConstraintPolynomial { poly, cell, movable_factor })
        }
        _ => Err(DeautoError::AmbiguousFactor(
            found.iter().map(|(c, f)| format!("{c} (factor {f})")).collect(),
        )),
    }
}

/// The first of `Sum`, `Product`, `RowOnly` whose random grids satisfy the
/// constraint identically, checked on a few seeds.
pub fn matching_family(c: &ConstraintPolynomial) -> Result<Option<GridFamily>, DeautoError> {
    let ring = c.poly.ring();
    let cells: Vec<Cell> = ring
        .vars()
        .iter()
        .filter_map(|v| match v.kind {
            VarKind::Z(m, n) => Some((m, n)),
            _ => None,
        })
        .collect();
    for family in [GridFamily::Sum, GridFamily::Product, GridFamily::RowOnly] {
        let mut holds = true;
        for seed in 0..3 {
            let values = family.grid(seed).integer_grid(&cells)?;
            let point: Vec<BigRational> = ring
                .vars()
                .iter()
                .map(|v| match v.kind {
                    VarKind::Z(m, n) => rat(values[&(m, n)]),
                    _ => BigRational::zero(),
                })
                .collect();
            holds &= c.poly.eval_rational(&point).is_zero();
        }
        if holds {
            return Ok(Some(family));
        }
    }
    Ok(None)
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// A gauge `x = alpha(n) beta(m) X` for the product grid `z = f(n) g(m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeSpec {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub f: Vec<i64>,
    pub g: Vec<i64>,
}

impl GaugeSpec {
    /// Random `alpha`, `beta` with `f(n) = alpha(n) alpha(n+1)`,
    /// `g(m) = beta(m) beta(m+1)`.
    pub fn random(region: Region, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha: Vec<i64> = (0..=region.cols).map(|_| rng.gen_range(SEQUENCE_RANGE)).collect();
        let beta: Vec<i64> = (0..=region.rows).map(|_| rng.gen_range(SEQUENCE_RANGE)).collect();
        Self::from_factors(alpha, beta)
    }

    pub fn identity(region: Region) -> Self {
        Self::from_factors(vec![1; region.cols + 1], vec![1; region.rows + 1])
    }

    pub fn from_factors(alpha: Vec<i64>, beta: Vec<i64>) -> Self {
        let f = alpha.windows(2).map(|w| w[0] * w[1]).collect();
        let g = beta.windows(2).map(|w| w[0] * w[1]).collect();
        GaugeSpec { alpha, beta, f, g }
    }

    fn phi(&self, (m, n): Cell) -> BigRational {
        rat(self.alpha[n as usize] * self.beta[m as usize])
    }
}

fn numeric_run(
    rule: &LatticeRule,
    plan: &Plan,
    zgrid: &BTreeMap<Cell, ZValue>,
    initial: impl Fn(Cell) -> BigRational,
    seed: u64,
) -> Result<HashMap<Cell, BigRational>, DeautoError> {
    let mut values: HashMap<_, _> = plan.initial.iter().map(|&(c, v)| (v, initial(c))).collect();
    values.insert(crate::symcore::Variable::q(), BigRational::one());
    match engine::run(rule, plan, zgrid, &mut NumericBackend { values }) {
        Ok(cells) => Ok(cells),
        Err(LatticeError::ZeroDenominator { .. }) => Err(DeautoError::Degenerate { seed }),
        Err(e) => Err(e.into()),
    }
}

/// Checks numerically that `x = phi X` carries the rule with `z = f(n) g(m)`
/// to the rule with `z = 1`, at every cell of the region.
pub fn check_gauge_with(rule: &LatticeRule, region: Region, spec: &GaugeSpec, seed: u64) -> Result<bool, DeautoError> {
    if rule.stencil != Stencil::Quad {
        return Err(LatticeError::IncompatibleScheme { scheme: InitScheme::Corner, stencil: rule.stencil }.into());
    }
    let plan = Plan::new(Stencil::Quad, InitScheme::Corner, region)?;
    let zcells = plan.z_cells();
    let zx: BTreeMap<Cell, ZValue> =
        zcells.iter().map(|&(m, n)| ((m, n), ZValue::Int(spec.f[n as usize] * spec.g[m as usize]))).collect();
    let z1: BTreeMap<Cell, ZValue> = zcells.iter().map(|&c| (c, ZValue::Int(1))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: HashMap<Cell, BigRational> =
        plan.initial.iter().map(|&(c, _)| (c, rat(rng.gen_range(SEQUENCE_RANGE)))).collect();
    let x = numeric_run(rule, &plan, &zx, |c| data[&c].clone(), seed)?;
    let big_x = numeric_run(rule, &plan, &z1, |c| &data[&c] / spec.phi(c), seed)?;
    let ok = plan.box_cells().all(|c| x[&c] == spec.phi(c) * &big_x[&c]);
    Ok(ok)
}

/// [`check_gauge_with`] over random gauges for `seeds` seeds.
pub fn check_gauge(rule: &LatticeRule, region: Region, seeds: usize, base_seed: u64) -> Result<bool, DeautoError> {
    if seeds == 0 {
        return Err(DeautoError::NoSeeds);
    }
    for seed in base_seed..base_seed + seeds as u64 {
        if !check_gauge_with(rule, region, &GaugeSpec::random(region, seed), seed)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinearizationMode {
    /// `X^{m+1}_n = f(m) (X^m_n + g(m) X^m_{n+1})` against the builtin rule with `z = g(m)`.
    Simple,
    /// `X^{m+1}_n = psi (X^m_n + gamma phi X^m_{n+1})` against
    /// `x^{m+1}_n = x^m_n (alpha + beta x^m_{n+1}) / (1 + gamma x^m_n)`.
    General,
}

impl FromStr for LinearizationMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "simple" => Ok(LinearizationMode::Simple),
            "general" => Ok(LinearizationMode::General),
            _ => Err(format!("unknown linearisation mode '{s}' (expected simple or general)")),
        }
    }
}

/// Options for one linearisation check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LinearizationCheck {
    pub mode: LinearizationMode,
    /// Take `f(m) = 1` in simple mode.
    pub unit_f: bool,
    /// Add one to `beta` at this cell, breaking the side relation.
    pub perturb_beta: Option<Cell>,
}

impl LinearizationCheck {
    pub fn new(mode: LinearizationMode) -> Self {
        LinearizationCheck { mode, unit_f: false, perturb_beta: None }
    }
}

type Grid = Vec<Vec<BigRational>>;

/// Maps a random solution of the linear equation through
/// `x^m_n = phi^m_n X^m_{n+1} / X^m_n` and checks the Burgers-type rule at
/// every cell with `m + 1 < rows`, `n < cols`.
pub fn check_burgers_linearization_with(
    check: LinearizationCheck,
    region: Region,
    seed: u64,
) -> Result<bool, DeautoError> {
    if region.rows < 2 {
        return Err(DeautoError::RegionTooSmall(region));
    }
    let (rows, cols) = (region.rows, region.cols);
    let width = cols + rows + 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || rat(rng.gen_range(SEQUENCE_RANGE));
    let one = BigRational::one;
    let mut unit = one;
    let full = |f: &mut dyn FnMut() -> BigRational| -> Grid { (0..rows).map(|_| (0..width).map(|_| f()).collect()).collect() };

    let (alpha, gamma, psi, phi, beta): (Grid, Grid, Grid, Grid, Grid) = match check.mode {
        LinearizationMode::Simple => {
            let g: Vec<BigRational> = (0..rows).map(|_| draw()).collect();
            let f: Vec<BigRational> = (0..rows).map(|_| if check.unit_f { one() } else { draw() }).collect();
            let row = |v: &[BigRational]| -> Grid { v.iter().map(|x| vec![x.clone(); width]).collect() };
            (full(&mut unit), row(&g), row(&f), full(&mut unit), row(&g))
        }
        LinearizationMode::General => {
            let alpha = full(&mut draw);
            let gamma = full(&mut draw);
            let psi = full(&mut draw);
            let mut phi = full(&mut draw);
            for m in 0..rows - 1 {
                for n in 0..width - 1 {
                    phi[m + 1][n] = &alpha[m][n] * &psi[m][n] * &phi[m][n] / &psi[m][n + 1];
                }
            }
            let beta = (0..rows)
                .map(|m| (0..width).map(|n| if n + 1 < width { &alpha[m][n] * &gamma[m][n + 1] } else { one() }).collect())
                .collect();
            (alpha, gamma, psi, phi, beta)
        }
    };
    let mut beta = beta;
    if let Some((m, n)) = check.perturb_beta {
        let cell = beta.get_mut(m as usize).and_then(|r| r.get_mut(n as usize)).ok_or(DeautoError::InvalidCell { m, n })?;
        *cell += one();
    }

    // X^0 on a wide row; each row up is one shorter.
    let mut big_x: Vec<Vec<BigRational>> = vec![(0..width).map(|_| draw()).collect()];
    for m in 0..rows - 1 {
        let prev = &big_x[m];
        let next: Vec<BigRational> = (0..prev.len() - 1)
            .map(|n| &psi[m][n] * (&prev[n] + &gamma[m][n] * &phi[m][n] * &prev[n + 1]))
            .collect();
        big_x.push(next);
    }
    if big_x.iter().flatten().any(Zero::is_zero) {
        return Err(DeautoError::Degenerate { seed });
    }
    let x = |m: usize, n: usize| &phi[m][n] * &big_x[m][n + 1] / &big_x[m][n];

    let burgers = LatticeRule::builtin("burgers")?;
    let mut numeric = NumericBackend { values: HashMap::new() };
    for m in 0..rows - 1 {
        for n in 0..cols {
            let (x00, x01) = (x(m, n), x(m, n + 1));
            let rhs = match check.mode {
                LinearizationMode::Simple => {
                    apply_rule(&burgers, &mut numeric, &x00, None, &x01, &gamma[m][n]).ok_or(DeautoError::Degenerate { seed })?
                }
                LinearizationMode::General => {
                    let den = one() + &gamma[m][n] * &x00;
                    if den.is_zero() {
                        return Err(DeautoError::Degenerate { seed });
                    }
                    &x00 * (&alpha[m][n] + &beta[m][n] * &x01) / den
                }
            };
            if x(m + 1, n) != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`check_burgers_linearization_with`] over `seeds` seeds.
pub fn check_burgers_linearization(
    mode: LinearizationMode,
    region: Region,
    seeds: usize,
    base_seed: u64,
) -> Result<bool, DeautoError> {
    if seeds == 0 {
        return Err(DeautoError::NoSeeds);
    }
    for seed in base_seed..base_seed + seeds as u64 {
        if !check_burgers_linearization_with(LinearizationCheck::new(mode), region, seed)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_gauge_and_broken_relation() {
        let rule = LatticeRule::builtin("liouville").unwrap();
        let r = Region::new(3, 3);
        assert!(check_gauge_with(&rule, r, &GaugeSpec::identity(r), 1).unwrap());
        assert!(check_gauge(&rule, r, 3, 10).unwrap());
        let mut broken = GaugeSpec::random(r, 4);
        broken.f = broken.alpha.iter().take(r.cols).map(|a| a * a).collect();
        assert!(!check_gauge_with(&rule, r, &broken, 4).unwrap());
    }

    #[test]
    fn burgers_linearisation_modes() {
        let r = Region::new(4, 6);
        assert!(check_burgers_linearization(LinearizationMode::Simple, r, 3, 0).unwrap());
        assert!(check_burgers_linearization(LinearizationMode::General, r, 3, 0).unwrap());
        let unit = LinearizationCheck { unit_f: true, ..LinearizationCheck::new(LinearizationMode::Simple) };
        assert!(check_burgers_linearization_with(unit, r, 5).unwrap());
        let broken = LinearizationCheck { perturb_beta: Some((1, 2)), ..LinearizationCheck::new(LinearizationMode::General) };
        assert!(!check_burgers_linearization_with(broken, r, 5).unwrap());
    }

    #[test]
    fn sum_grid_is_not_the_sine_gordon_condition() {
        let rule = LatticeRule::builtin("sine_gordon").unwrap();
        let rep = verify_constraint(&rule, &GridFamily::Sum, Region::new(4, 4), 1, 0, BackendKind::Exact).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn pkdv_constraint() {
        let rule = LatticeRule::builtin("pkdv").unwrap();
        let c = derive_constraint(&rule, (2, 2)).unwrap();
        assert_eq!(c.poly.to_string(), "z11 - z10 - z01 + z00");
        assert_eq!(c.movable_factor.to_string(), "p1 - r1");
        assert_eq!(matching_family(&c).unwrap(), Some(GridFamily::Sum));
    }
}
