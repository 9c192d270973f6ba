//! Closed-form fits, affine recursions, entropy and growth classification.

pub mod linsolve;

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::degrees::DegreeTable;
use crate::lattice::{InitScheme, Region};
use linsolve::Solution;

/// Smallest table side accepted by the fitters.
pub const MIN_SIDE: usize = 4;
/// Diagonal length needed by [`entropy_estimate`] when no polynomial fit exists.
pub const MIN_DIAGONAL: usize = 4;
/// Diagonal ratios above this count as exponential growth.
pub const EXPONENTIAL_RATIO: f64 = 1.2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrowthError {
    #[error("table {region} is too small: at least {need}x{need} is required")]
    TooSmall { region: Region, need: usize },
    #[error("diagonal too short: {have} cells beyond the origin, at least {need} required")]
    DiagonalTooShort { have: usize, need: usize },
}

/// Basis functions for closed-form fits. `S` is the anti-diagonal index `m + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Term {
    One,
    M,
    N,
    MN,
    Min,
    Max,
    MSq,
    NSq,
    S,
    SSq,
}

pub const CORNER_BASIS: [Term; 8] = [Term::One, Term::M, Term::N, Term::MN, Term::Min, Term::Max, Term::MSq, Term::NSq];
pub const STAIRCASE_BASIS: [Term; 3] = [Term::One, Term::S, Term::SSq];

impl Term {
    pub fn eval(self, m: i64, n: i64) -> i64 {
        match self {
            Term::One => 1,
            Term::M => m,
            Term::N => n,
            Term::MN => m * n,
            Term::Min => m.min(n),
            Term::Max => m.max(n),
            Term::MSq => m * m,
            Term::NSq => n * n,
            Term::S => m + n,
            Term::SSq => (m + n) * (m + n),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Term::One => "1",
            Term::M => "m",
            Term::N => "n",
            Term::MN => "m*n",
            Term::Min => "min(m,n)",
            Term::Max => "max(m,n)",
            Term::MSq => "m^2",
            Term::NSq => "n^2",
            Term::S => "(m+n)",
            Term::SSq => "(m+n)^2",
        }
    }

    pub fn is_quadratic(self) -> bool {
        matches!(self, Term::MN | Term::MSq | Term::NSq | Term::SSq)
    }

    fn print_rank(self) -> u8 {
        match self {
            Term::SSq | Term::MSq | Term::NSq | Term::MN => 0,
            Term::Max | Term::Min => 1,
            Term::S | Term::M | Term::N => 2,
            Term::One => 3,
        }
    }
}

/// Formula fitted on interior cells (`m*n != 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormFit {
    pub basis: Vec<Term>,
    pub coefficients: Vec<BigRational>,
    /// Interior cells of this box were used to solve for the coefficients.
    pub training_region: Region,
    /// Interior cells of this box were checked.
    pub validation_region: Region,
    pub valid: bool,
}

/// `d[m+1][n+1] = a d[m+1][n] + b d[m][n+1] + c d[m][n] + e (+ delta [m = n])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecursionFit {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
    pub e: BigRational,
    pub delta_correction: Option<BigRational>,
    pub valid_region: Region,
    pub valid: bool,
    /// The coefficients were determined uniquely by the table.
    pub unique: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entropy {
    #[serde(rename = "E")]
    pub e: f64,
    pub ratio: f64,
    pub extrapolation: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Growth {
    Linear,
    Polynomial { degree: u32 },
    Exponential,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Interpretation {
    Linearisable,
    ISTIntegrable,
    NonIntegrable,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GrowthClass {
    pub class: Growth,
    pub interpretation: Interpretation,
}

impl From<Growth> for GrowthClass {
    fn from(class: Growth) -> Self {
        let interpretation = match class {
            Growth::Linear => Interpretation::Linearisable,
            Growth::Polynomial { .. } => Interpretation::ISTIntegrable,
            Growth::Exponential => Interpretation::NonIntegrable,
            Growth::Indeterminate => Interpretation::Undetermined,
        };
        GrowthClass { class, interpretation }
    }
}

impl fmt::Display for Growth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Growth::Linear => write!(f, "Linear"),
            Growth::Polynomial { degree } => write!(f, "Polynomial(degree {degree})"),
            Growth::Exponential => write!(f, "Exponential"),
            Growth::Indeterminate => write!(f, "Indeterminate"),
        }
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Integers as JSON numbers, other rationals as `"p/q"` strings.
pub fn rational_json(r: &BigRational) -> Value {
    if r.is_integer() {
        if let Some(v) = r.to_integer().to_i64() {
            return json!(v);
        }
    }
    json!(r.to_string())
}

fn check_size(table: &DegreeTable) -> Result<(), GrowthError> {
    if table.rows() < MIN_SIDE || table.cols() < MIN_SIDE {
        return Err(GrowthError::TooSmall { region: table.region, need: MIN_SIDE });
    }
    Ok(())
}

fn interior(rows: usize, cols: usize) -> Vec<(i64, i64)> {
    (1..rows as i64).flat_map(|m| (1..cols as i64).map(move |n| (m, n))).collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

impl ClosedFormFit {
    pub fn eval(&self, m: i64, n: i64) -> BigRational {
        self.basis.iter().zip(&self.coefficients).map(|(t, c)| c * int(t.eval(m, n))).sum()
    }

    pub fn is_linear(&self) -> bool {
        self.basis.iter().zip(&self.coefficients).all(|(t, c)| !t.is_quadratic() || c.is_zero())
    }

    pub fn formula(&self) -> Option<String> {
        if !self.valid {
            return None;
        }
        let mut terms: Vec<(Term, &BigRational)> =
            self.basis.iter().copied().zip(&self.coefficients).filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|(t, _)| (t.print_rank(), *t));
        if terms.is_empty() {
            return Some("0".to_string());
        }
        let mut s = String::new();
        for (i, (t, c)) in terms.into_iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if c.is_negative() { " - " } else { " + " });
            }
            if t == Term::One {
                let _ = write!(s, "{mag}");
            } else if mag.is_one() {
                s.push_str(t.label());
            } else {
                let _ = write!(s, "{mag}*{}", t.label());
            }
        }
        Some(s)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "valid": self.valid,
            "formula": self.formula(),
            "basis": self.basis.iter().map(|t| t.label()).collect::<Vec<_>>(),
            "coefficients": self.coefficients.iter().map(rational_json).collect::<Vec<_>>(),
            "training_region": [self.training_region.rows, self.training_region.cols],
            "validation_region": [self.validation_region.rows, self.validation_region.cols],
        })
    }
}

/// Searches basis subsets by size, then lexicographically, for the first
/// combination that is determined by the training cells and reproduces
/// every interior cell.
pub fn fit_closed_form(table: &DegreeTable) -> Result<ClosedFormFit, GrowthError> {
    check_size(table)?;
    let basis: &[Term] = if table.meta.init == InitScheme::Staircase { &STAIRCASE_BASIS } else { &CORNER_BASIS };
    let t = 2.max((table.rows() - 1).min(table.cols() - 1) - 1);
    let training_region = Region::new(t + 1, t + 1);
    let validation_region = table.region;
    let training = interior(t + 1, t + 1);
    let validation = interior(table.rows(), table.cols());
    let value = |(m, n): (i64, i64)| int(table.get(m as usize, n as usize) as i64);
    for k in 1..=basis.len().min(training.len()) {
        for subset in combinations(basis.len(), k) {
            let terms: Vec<Term> = subset.iter().map(|&i| basis[i]).collect();
            let a: Vec<Vec<BigRational>> =
                training.iter().map(|&(m, n)| terms.iter().map(|t| int(t.eval(m, n))).collect()).collect();
            let b: Vec<BigRational> = training.iter().map(|&c| value(c)).collect();
            let Solution::Unique(coefficients) = linsolve::solve(&a, &b) else { continue };
            if coefficients.iter().any(Zero::is_zero) {
                continue;
            }
            let fit = ClosedFormFit {
                basis: terms,
                coefficients,
                training_region,
                validation_region,
                valid: true,
            };
            if validation.iter().all(|&(m, n)| fit.eval(m, n) == value((m, n))) {
                return Ok(fit);
            }
        }
    }
    Ok(ClosedFormFit { basis: Vec::new(), coefficients: Vec::new(), training_region, validation_region, valid: false })
}

impl RecursionFit {
    pub fn coefficients(&self) -> [&BigRational; 4] {
        [&self.a, &self.b, &self.c, &self.e]
    }

    pub fn predict(&self, table: &DegreeTable, m: usize, n: usize) -> BigRational {
        let d = |i: usize, j: usize| int(table.get(i, j) as i64);
        let mut v = &self.a * d(m + 1, n) + &self.b * d(m, n + 1) + &self.c * d(m, n) + &self.e;
        if let (Some(delta), true) = (&self.delta_correction, m == n) {
            v += delta;
        }
        v
    }

    pub fn formula(&self) -> Option<String> {
        if !self.valid {
            return None;
        }
        let mut s = String::from("d[m+1][n+1] =");
        let mut first = true;
        let mut push = |s: &mut String, c: &BigRational, label: &str| {
            if c.is_zero() {
                return;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                s.push(' ');
                if c.is_negative() {
                    s.push('-');
                }
            } else {
                let _ = write!(s, " {sign} ");
            }
            first = false;
            match (label.is_empty(), mag.is_one()) {
                (true, _) => {
                    let _ = write!(s, "{mag}");
                }
                (false, true) => s.push_str(label),
                (false, false) => {
                    let _ = write!(s, "{mag}*{label}");
                }
            }
        };
        push(&mut s, &self.a, "d[m+1][n]");
        push(&mut s, &self.b, "d[m][n+1]");
        push(&mut s, &self.c, "d[m][n]");
        push(&mut s, &self.e, "");
        if let Some(delta) = &self.delta_correction {
            push(&mut s, delta, "delta(m,n)");
        }
        if first {
            s.push_str(" 0");
        }
        Some(s)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "valid": self.valid,
            "unique": self.unique,
            "formula": self.formula(),
            "a": rational_json(&self.a),
            "b": rational_json(&self.b),
            "c": rational_json(&self.c),
            "e": rational_json(&self.e),
            "delta": self.delta_correction.as_ref().map(rational_json),
            "valid_region": [self.valid_region.rows, self.valid_region.cols],
        })
    }
}

fn recursion_row(table: &DegreeTable, m: usize, n: usize, with_delta: bool) -> (Vec<BigRational>, BigRational) {
    let d = |i: usize, j: usize| int(table.get(i, j) as i64);
    let mut row = vec![d(m + 1, n), d(m, n + 1), d(m, n), BigRational::one()];
    if with_delta {
        row.push(if m == n { BigRational::one() } else { BigRational::zero() });
    }
    (row, d(m + 1, n + 1))
}

fn try_recursion(table: &DegreeTable, with_delta: bool) -> Option<RecursionFit> {
    let eqs: Vec<(usize, usize)> =
        (0..table.rows() - 1).flat_map(|m| (0..table.cols() - 1).map(move |n| (m, n))).collect();
    let unknowns = if with_delta { 5 } else { 4 };
    let max_s = table.rows() + table.cols() - 4;
    // Grow the training set along anti-diagonals until it pins the coefficients.
    let mut chosen = None;
    for s in 0..=max_s {
        let train: Vec<_> = eqs.iter().filter(|&&(m, n)| m + n <= s).collect();
        if train.len() < unknowns {
            continue;
        }
        let (a, b): (Vec<_>, Vec<_>) = train.iter().map(|&&(m, n)| recursion_row(table, m, n, with_delta)).unzip();
        match linsolve::solve(&a, &b) {
            Solution::Inconsistent => return None,
            Solution::Unique(x) => {
                chosen = Some((x, true));
                break;
            }
            Solution::Underdetermined(x) if s == max_s => chosen = Some((x, false)),
            Solution::Underdetermined(_) => {}
        }
    }
    let (x, unique) = chosen?;
    let fit = RecursionFit {
        a: x[0].clone(),
        b: x[1].clone(),
        c: x[2].clone(),
        e: x[3].clone(),
        delta_correction: if with_delta { Some(x[4].clone()) } else { None },
        valid_region: table.region,
        valid: true,
        unique,
    };
    eqs.iter().all(|&(m, n)| fit.predict(table, m, n) == int(table.get(m + 1, n + 1) as i64)).then_some(fit)
}

/// Finds an affine recursion over the unit square, adding a diagonal
/// correction only when the plain form fails.
pub fn detect_recursion(table: &DegreeTable) -> Result<RecursionFit, GrowthError> {
    check_size(table)?;
    Ok(try_recursion(table, false).or_else(|| try_recursion(table, true)).unwrap_or_else(|| RecursionFit {
        a: BigRational::zero(),
        b: BigRational::zero(),
        c: BigRational::zero(),
        e: BigRational::zero(),
        delta_correction: None,
        valid_region: table.region,
        valid: false,
        unique: false,
    }))
}

/// `d[k][k]` for `k = 0..=K`.
pub fn diagonal(table: &DegreeTable) -> Vec<u64> {
    (0..table.rows().min(table.cols())).map(|k| table.get(k, k)).collect()
}

/// Per-unit-of-`m+n` entropy from the diagonal. Polynomial tables give 0.
/// Otherwise the last two increments `ln(d[k][k] / d[k-1][k-1]) / 2` are
/// combined as `k L_k - (k-1) L_{k-1}`, cancelling a `1/k` correction.
pub fn entropy_estimate(table: &DegreeTable) -> Result<Entropy, GrowthError> {
    if table.rows() >= MIN_SIDE && table.cols() >= MIN_SIDE {
        let fit = fit_closed_form(table)?;
        if fit.valid {
            return Ok(Entropy { e: 0.0, ratio: 1.0, extrapolation: "polynomial closed form".to_string() });
        }
    }
    let diag = diagonal(table);
    let k = diag.len().saturating_sub(1);
    if k < MIN_DIAGONAL {
        return Err(GrowthError::DiagonalTooShort { have: k, need: MIN_DIAGONAL });
    }
    let ln = |i: usize| (diag[i].max(1) as f64).ln();
    let inc = |i: usize| (ln(i) - ln(i - 1)) / 2.0;
    let e = (k as f64 * inc(k) - (k - 1) as f64 * inc(k - 1)).max(0.0);
    Ok(Entropy { e, ratio: e.exp(), extrapolation: format!("Richardson on diagonal increments at k={},{}", k - 1, k) })
}

/// Rows `k, d[k][k], ln(d[k][k])/(2k)` for `k >= 1`.
pub fn entropy_csv(table: &DegreeTable) -> String {
    let mut s = String::from("k,d_kk,log_d_over_2k\n");
    for (k, d) in diagonal(table).into_iter().enumerate().skip(1) {
        let _ = writeln!(s, "{k},{d},{}", (d.max(1) as f64).ln() / (2 * k) as f64);
    }
    s
}

pub fn classify(table: &DegreeTable) -> Result<GrowthClass, GrowthError> {
    let fit = fit_closed_form(table)?;
    Ok(classify_with(table, &fit))
}

fn classify_with(table: &DegreeTable, fit: &ClosedFormFit) -> GrowthClass {
    if fit.valid {
        return if fit.is_linear() { Growth::Linear } else { Growth::Polynomial { degree: 2 } }.into();
    }
    let diag = diagonal(table);
    let ratios: Vec<f64> = diag.windows(2).map(|w| w[1] as f64 / w[0].max(1) as f64).collect();
    if ratios.len() >= 3 {
        let last = &ratios[ratios.len() - 3..];
        if last.iter().all(|&r| r > EXPONENTIAL_RATIO) && last.windows(2).all(|w| w[1] >= w[0]) {
            return Growth::Exponential.into();
        }
    }
    Growth::Indeterminate.into()
}

/// Fit, recursion, entropy and class of one table.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub fit: ClosedFormFit,
    pub recursion: RecursionFit,
    /// `None` when the diagonal is too short and no polynomial fit exists.
    pub entropy: Option<Entropy>,
    pub class: GrowthClass,
}

pub fn analyze(table: &DegreeTable) -> Result<GrowthReport, GrowthError> {
    let fit = fit_closed_form(table)?;
    let recursion = detect_recursion(table)?;
    let entropy = match entropy_estimate(table) {
        Ok(e) => Some(e),
        Err(GrowthError::DiagonalTooShort { .. }) => None,
        Err(e) => return Err(e),
    };
    let class = classify_with(table, &fit);
    Ok(GrowthReport { fit, recursion, entropy, class })
}

impl GrowthReport {
    pub fn to_json(&self) -> Value {
        json!({
            "fit": self.fit.to_json(),
            "recursion": self.recursion.to_json(),
            "entropy": self.entropy,
            "class": self.class.class,
            "interpretation": self.class.interpretation,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "closed form: {}", self.fit.formula().unwrap_or_else(|| "none in basis".into()));
        let _ = writeln!(s, "recursion:   {}", self.recursion.formula().unwrap_or_else(|| "none".into()));
        match &self.entropy {
            Some(e) => {
                let _ = writeln!(s, "entropy:     E = {:.6}, ratio = {:.6} ({})", e.e, e.ratio, e.extrapolation);
            }
            None => {
                let _ = writeln!(s, "entropy:     diagonal too short");
            }
        }
        let _ = writeln!(s, "class:       {} / {}", self.class.class, self.class.interpretation);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrees::{BackendKind, TableMeta};
    use crate::lattice::Stencil;

    fn table(scheme: InitScheme, rows: usize, cols: usize, f: impl Fn(u64, u64) -> u64) -> DegreeTable {
        DegreeTable {
            meta: TableMeta {
                rule: "t".into(),
                init: scheme,
                coeff_mode: "constant".into(),
                backend: BackendKind::Exact,
                seed: None,
                trials: None,
            },
            stencil: Stencil::Quad,
            region: Region::new(rows, cols),
            entries: (0..rows as u64).map(|m| (0..cols as u64).map(|n| f(m, n)).collect()).collect(),
        }
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn kdv_formula() {
        let t = table(InitScheme::Corner, 4, 6, |m, n| if m * n == 0 { 1 } else { 4 * m * n - 2 * m.max(n) + 1 });
        let fit = fit_closed_form(&t).unwrap();
        assert_eq!(fit.formula().unwrap(), "4*m*n - 2*max(m,n) + 1");
        assert_eq!(classify(&t).unwrap(), Growth::Polynomial { degree: 2 }.into());
    }

    #[test]
    fn linear_and_staircase() {
        let t = table(InitScheme::Corner, 5, 5, |m, n| if m * n == 0 { 1 } else { m + n });
        assert_eq!(fit_closed_form(&t).unwrap().formula().unwrap(), "m + n");
        assert_eq!(classify(&t).unwrap().interpretation, Interpretation::Linearisable);
        let s = table(InitScheme::Staircase, 5, 5, |m, n| 1 + (m + n) * (m + n).saturating_sub(1) / 2);
        assert_eq!(fit_closed_form(&s).unwrap().formula().unwrap(), "1/2*(m+n)^2 - 1/2*(m+n) + 1");
    }

    #[test]
    fn pascal_has_no_closed_form() {
        let t = table(InitScheme::Corner, 6, 6, |m, n| binom(m + n, m));
        assert!(!fit_closed_form(&t).unwrap().valid);
        let r = detect_recursion(&t).unwrap();
        assert!(r.valid);
        assert_eq!(r.coefficients(), [&int(1), &int(1), &int(0), &int(0)]);
        assert_eq!(classify(&t).unwrap().class, Growth::Exponential);
        let e = entropy_estimate(&table(InitScheme::Corner, 12, 12, |m, n| binom(m + n, m))).unwrap();
        assert!((e.ratio - 2.0).abs() < 0.02, "{}", e.ratio);
    }

    #[test]
    fn polynomial_tables_have_zero_entropy() {
        let t = table(InitScheme::Corner, 5, 5, |m, n| m * n + 1);
        let e = entropy_estimate(&t).unwrap();
        assert_eq!((e.e, e.ratio), (0.0, 1.0));
    }

    #[test]
    fn too_small_and_indeterminate() {
        let t = table(InitScheme::Corner, 3, 5, |_, _| 1);
        assert!(matches!(fit_closed_form(&t), Err(GrowthError::TooSmall { .. })));
        // Irregular but slowly growing: no fit and no stable ratio.
        let t = table(InitScheme::Corner, 5, 5, |m, n| [1, 7, 3, 9, 4][((m * 3 + n * 5) % 5) as usize]);
        assert_eq!(classify(&t).unwrap().class, Growth::Indeterminate);
    }

    #[test]
    fn recursion_formula_text() {
        let t = table(InitScheme::Corner, 6, 6, |m, n| binom(m + n, m));
        assert_eq!(detect_recursion(&t).unwrap().formula().unwrap(), "d[m+1][n+1] = d[m+1][n] + d[m][n+1]");
    }

    #[test]
    fn rationals_in_json() {
        assert_eq!(rational_json(&int(-3)), json!(-3));
        assert_eq!(rational_json(&BigRational::new(1.into(), 2.into())), json!("1/2"));
    }
}
