//! Degree tables of lattice iterates.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::lattice::backend::SpecializedBackend;
use crate::lattice::engine::{self, LatticeState};
use crate::lattice::{Cell, CoefficientGrid, InitScheme, LatticeError, LatticeRule, Plan, Region, Stencil, ZValue};
use crate::symcore::modp::UniPoly;
use crate::symcore::Variable;

/// Coefficient range of the random line used by the specialized backend.
pub const LINE_COEFF_RANGE: std::ops::Range<u64> = 1..(1 << 31);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Exact,
    Specialized,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Exact => "exact",
            BackendKind::Specialized => "specialized",
        }
    }
}

/// Provenance of a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableMeta {
    pub rule: String,
    pub init: InitScheme,
    pub coeff_mode: String,
    pub backend: BackendKind,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
}

/// Degrees `d^m_n` over rows `m` and columns `n` of a region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTable {
    pub meta: TableMeta,
    pub stencil: Stencil,
    pub region: Region,
    /// `entries[m][n]`.
    pub entries: Vec<Vec<u64>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegreeError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("cell ({m},{n}) is not balanced: numerator and denominator degrees differ or are inhomogeneous")]
    Unbalanced { m: i64, n: i64 },
    #[error("all {trials} trials hit a zero denominator; try another seed")]
    AllTrialsDegenerate { trials: usize },
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("tables cover different regions ({0} vs {1})")]
    RegionMismatch(Region, Region),
}

/// First cell, in dependency order, where two tables differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub m: usize,
    pub n: usize,
    pub a: u64,
    pub b: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub equal: bool,
    pub first_discrepancy: Option<Discrepancy>,
}

impl DegreeTable {
    pub fn get(&self, m: usize, n: usize) -> u64 {
        self.entries[m][n]
    }

    pub fn rows(&self) -> usize {
        self.region.rows
    }

    pub fn cols(&self) -> usize {
        self.region.cols
    }

    /// Box cells in dependency order: anti-diagonals for the quad stencil,
    /// rows for the triangular one.
    pub fn dependency_order(&self) -> Vec<(usize, usize)> {
        let (rows, cols) = (self.rows(), self.cols());
        let mut cells: Vec<(usize, usize)> = (0..rows).flat_map(|m| (0..cols).map(move |n| (m, n))).collect();
        if self.stencil == Stencil::Quad {
            cells.sort_by_key(|&(m, n)| (m + n, m));
        }
        cells
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rule": self.meta.rule,
            "init": self.meta.init.name(),
            "coeff_mode": self.meta.coeff_mode,
            "backend": self.meta.backend.name(),
            "seed": self.meta.seed,
            "trials": self.meta.trials,
            "region": [self.region.rows, self.region.cols],
            "degrees": self.entries,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(|d| d.to_string()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Aligned matrix, `m` increasing downward.
    pub fn to_text(&self) -> String {
        let width = self.entries.iter().flatten().map(|d| d.to_string().len()).max().unwrap_or(1).max(2);
        let mw = (self.rows().saturating_sub(1)).to_string().len().max(1);
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# {} {} {} ({} backend), region {}",
            self.meta.rule,
            self.meta.init,
            self.meta.coeff_mode,
            self.meta.backend.name(),
            self.region
        );
        let _ = writeln!(s, "# rows: m increasing downward; columns: n increasing to the right");
        let _ = write!(s, "{:>mw$} |", "m\\n", mw = mw.max(3));
        for n in 0..self.cols() {
            let _ = write!(s, " {n:>width$}");
        }
        s.push('\n');
        for (m, row) in self.entries.iter().enumerate() {
            let _ = write!(s, "{m:>mw$} |", mw = mw.max(3));
            for d in row {
                let _ = write!(s, " {d:>width$}");
            }
            s.push('\n');
        }
        s
    }
}

fn meta_for(rule: &LatticeRule, scheme: InitScheme, coeffs: &CoefficientGrid, backend: BackendKind) -> TableMeta {
    let seed = match coeffs {
        CoefficientGrid::GenericRandom { seed } => Some(*seed),
        _ => None,
    };
    TableMeta { rule: rule.name.clone(), init: scheme, coeff_mode: coeffs.mode_name().to_string(), backend, seed, trials: None }
}

/// Reads degrees off an exactly iterated lattice, checking that every cell
/// has homogeneous numerator and denominator of one weighted degree.
pub fn degree_table_exact(state: &LatticeState) -> Result<DegreeTable, DegreeError> {
    let region = state.region();
    let mut entries = vec![vec![0u64; region.cols]; region.rows];
    for (m, n) in state.plan.box_cells() {
        if state.is_balanced((m, n)) != Some(true) {
            return Err(DegreeError::Unbalanced { m, n });
        }
        entries[m as usize][n as usize] = state.degree((m, n)).expect("box cell computed");
    }
    Ok(DegreeTable {
        meta: meta_for(&state.rule, state.plan.scheme, &state.coeffs, BackendKind::Exact),
        stencil: state.plan.stencil,
        region,
        entries,
    })
}

/// Iterates exactly and returns the degree table.
pub fn exact_table(
    rule: &LatticeRule,
    scheme: InitScheme,
    coeffs: &CoefficientGrid,
    region: Region,
) -> Result<DegreeTable, DegreeError> {
    let state = engine::iterate(rule, scheme, coeffs, region)?;
    degree_table_exact(&state)
}

fn specialized_trial(
    rule: &LatticeRule,
    plan: &Plan,
    zgrid: &std::collections::BTreeMap<Cell, ZValue>,
    seed: u64,
    trial: usize,
) -> Result<Option<Vec<Vec<u64>>>, LatticeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    let mut used = std::collections::HashSet::new();
    let mut draw = |rng: &mut ChaCha8Rng| loop {
        let x = rng.gen_range(LINE_COEFF_RANGE);
        if used.insert(x) {
            return x;
        }
    };
    let mut subst: HashMap<Variable, UniPoly> = HashMap::new();
    for v in plan.data_variables() {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        subst.insert(v, UniPoly::linear(a, b));
    }
    for (&(m, n), v) in zgrid {
        if *v == ZValue::Symbol {
            let c = draw(&mut rng);
            subst.insert(Variable::z(m, n), UniPoly::constant(c));
        }
    }
    let mut backend = SpecializedBackend { subst };
    match engine::run(rule, plan, zgrid, &mut backend) {
        Ok(cells) => {
            let mut entries = vec![vec![0u64; plan.region.cols]; plan.region.rows];
            for (m, n) in plan.box_cells() {
                entries[m as usize][n as usize] = cells[&(m, n)].degree() as u64;
            }
            Ok(Some(entries))
        }
        Err(LatticeError::ZeroDenominator { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Degrees along a random line through the initial data, reduced modulo a
/// prime; each entry is the maximum over trials. Never exceeds the exact table.
pub fn degree_table_specialized(
    rule: &LatticeRule,
    scheme: InitScheme,
    coeffs: &CoefficientGrid,
    region: Region,
    trials: usize,
    seed: u64,
) -> Result<DegreeTable, DegreeError> {
    if trials == 0 {
        return Err(DegreeError::NoTrials);
    }
    let plan = Plan::new(rule.stencil, scheme, region)?;
    let zgrid = coeffs.materialize(&plan.z_cells())?;
    let results: Vec<Result<Option<Vec<Vec<u64>>>, LatticeError>> =
        (0..trials).into_par_iter().map(|t| specialized_trial(rule, &plan, &zgrid, seed, t)).collect();
    let mut entries: Option<Vec<Vec<u64>>> = None;
    for r in results {
        if let Some(e) = r? {
            entries = Some(match entries {
                None => e,
                Some(acc) => acc
                    .iter()
                    .zip(&e)
                    .map(|(x, y)| x.iter().zip(y).map(|(a, b)| *a.max(b)).collect())
                    .collect(),
            });
        }
    }
    let entries = entries.ok_or(DegreeError::AllTrialsDegenerate { trials })?;
    let mut meta = meta_for(rule, scheme, coeffs, BackendKind::Specialized);
    meta.seed = Some(seed);
    meta.trials = Some(trials);
    Ok(DegreeTable { meta, stencil: rule.stencil, region, entries })
}

/// Cell-wise comparison reporting the first difference in dependency order.
pub fn compare_tables(a: &DegreeTable, b: &DegreeTable) -> Result<Comparison, DegreeError> {
    if a.region != b.region {
        return Err(DegreeError::RegionMismatch(a.region, b.region));
    }
    let first = a
        .dependency_order()
        .into_iter()
        .find(|&(m, n)| a.get(m, n) != b.get(m, n))
        .map(|(m, n)| Discrepancy { m, n, a: a.get(m, n), b: b.get(m, n) });
    Ok(Comparison { equal: first.is_none(), first_discrepancy: first })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pkdv() -> LatticeRule {
        LatticeRule::builtin("pkdv").unwrap()
    }

    #[test]
    fn pkdv_constant_is_mn_plus_one() {
        let t = exact_table(&pkdv(), InitScheme::Corner, &CoefficientGrid::Constant(3), Region::new(4, 4)).unwrap();
        for m in 0..4 {
            for n in 0..4 {
                assert_eq!(t.get(m, n), (m * n + 1) as u64);
            }
        }
    }

    #[test]
    fn specialized_agrees_with_exact_on_small_region() {
        let c = CoefficientGrid::Constant(3);
        let e = exact_table(&pkdv(), InitScheme::Corner, &c, Region::new(4, 4)).unwrap();
        let s = degree_table_specialized(&pkdv(), InitScheme::Corner, &c, Region::new(4, 4), 3, 11).unwrap();
        assert!(compare_tables(&e, &s).unwrap().equal);
    }

    #[test]
    fn first_discrepancy_in_dependency_order() {
        let c = exact_table(&pkdv(), InitScheme::Corner, &CoefficientGrid::Constant(3), Region::new(4, 4)).unwrap();
        let g = degree_table_specialized(
            &pkdv(),
            InitScheme::Corner,
            &CoefficientGrid::GenericRandom { seed: 2 },
            Region::new(4, 4),
            3,
            5,
        )
        .unwrap();
        let cmp = compare_tables(&c, &g).unwrap();
        assert_eq!(cmp.first_discrepancy, Some(Discrepancy { m: 2, n: 2, a: 5, b: 6 }));
        assert!(compare_tables(&c, &c).unwrap().equal);
    }

    #[test]
    fn renderings() {
        let t = exact_table(&pkdv(), InitScheme::Corner, &CoefficientGrid::Constant(3), Region::new(2, 3)).unwrap();
        assert_eq!(t.to_csv(), "1,1,1\n1,2,3\n");
        let j = t.to_json();
        assert_eq!(j["region"], json!([2, 3]));
        assert_eq!(j["degrees"], json!([[1, 1, 1], [1, 2, 3]]));
        assert!(t.to_text().contains("m increasing downward"));
    }
}
