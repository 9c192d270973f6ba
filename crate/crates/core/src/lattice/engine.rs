use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::backend::{Backend, ExactBackend};
use super::coeff::{CoefficientGrid, ZValue};
use super::expr::{BinOp, Leaf, Op, Sym};
use super::init::{InitScheme, Plan};
use super::rule::LatticeRule;
use super::{Cell, LatticeError, Region};
use crate::symcore::{FactorPool, Factored, RationalFunction, Ring, Variable};

/// Evaluates the rule once; `None` on a zero divisor.
pub fn apply_rule<B: Backend>(
    rule: &LatticeRule,
    backend: &mut B,
    x00: &B::Value,
    x10: Option<&B::Value>,
    x01: &B::Value,
    z: &B::Value,
) -> Option<B::Value> {
    let cell = std::cell::RefCell::new(backend);
    let mut leaf = |l: Leaf| -> Result<B::Value, ()> {
        let mut b = cell.borrow_mut();
        Ok(match l {
            Leaf::Num(n) => b.int(i64::try_from(n).map_err(|_| ())?),
            Leaf::Sym(Sym::X00) => x00.clone(),
            Leaf::Sym(Sym::X10) => x10.ok_or(())?.clone(),
            Leaf::Sym(Sym::X01) => x01.clone(),
            Leaf::Sym(Sym::Z) => z.clone(),
        })
    };
    let mut op = |o: Op<B::Value>| -> Result<B::Value, ()> {
        let mut b = cell.borrow_mut();
        match o {
            Op::Neg(a) => Ok(b.neg(&a)),
            Op::Bin(BinOp::Add, x, y) => Ok(b.add(&x, &y)),
            Op::Bin(BinOp::Sub, x, y) => Ok(b.sub(&x, &y)),
            Op::Bin(BinOp::Mul, x, y) => Ok(b.mul(&x, &y)),
            Op::Bin(BinOp::Div, x, y) => b.div(&x, &y).ok_or(()),
        }
    };
    let v = rule.expr.eval(&mut leaf, &mut op).ok()?;
    Some(cell.into_inner().finish(v))
}

/// Fills every cell of the plan. Coefficient cells holding
/// [`ZValue::Symbol`] are read as the variable `z^m_n`.
pub fn run<B: Backend>(
    rule: &LatticeRule,
    plan: &Plan,
    zgrid: &BTreeMap<Cell, ZValue>,
    backend: &mut B,
) -> Result<HashMap<Cell, B::Value>, LatticeError> {
    if rule.stencil != plan.stencil {
        return Err(LatticeError::IncompatibleScheme { scheme: plan.scheme, stencil: rule.stencil });
    }
    let mut cells: HashMap<Cell, B::Value> = HashMap::with_capacity(plan.initial.len() + plan.steps.len());
    let q = backend.symbol(Variable::q());
    for &(cell, datum) in &plan.initial {
        let d = backend.symbol(datum);
        let v = backend.div(&d, &q).ok_or(LatticeError::ZeroDenominator { m: cell.0, n: cell.1 })?;
        let v = backend.finish(v);
        cells.insert(cell, v);
    }
    for step in &plan.steps {
        let (m, n) = step.target;
        let z = match zgrid.get(&step.z) {
            Some(ZValue::Int(c)) => backend.int(*c),
            Some(ZValue::Symbol) => backend.symbol(Variable::z(step.z.0, step.z.1)),
            None => return Err(LatticeError::MissingCoefficient { m: step.z.0, n: step.z.1 }),
        };
        let v = apply_rule(rule, backend, &cells[&step.x00], step.x10.map(|c| &cells[&c]), &cells[&step.x01], &z)
            .ok_or(LatticeError::ZeroDenominator { m, n })?;
        cells.insert(step.target, v);
    }
    Ok(cells)
}

/// Polynomial ring holding the initial data and any symbolic coefficients.
pub fn symbolic_ring(plan: &Plan, zgrid: &BTreeMap<Cell, ZValue>) -> Arc<Ring> {
    let mut vars = plan.data_variables();
    vars.extend(zgrid.iter().filter(|(_, v)| **v == ZValue::Symbol).map(|(&(m, n), _)| Variable::z(m, n)));
    Ring::new(vars)
}

/// A lattice filled with exact symbolic iterates.
pub struct LatticeState {
    pub rule: LatticeRule,
    pub coeffs: CoefficientGrid,
    pub plan: Plan,
    pub zgrid: BTreeMap<Cell, ZValue>,
    pub pool: FactorPool,
    pub cells: HashMap<Cell, Factored>,
}

impl LatticeState {
    pub fn region(&self) -> Region {
        self.plan.region
    }

    pub fn factored(&self, cell: Cell) -> Option<&Factored> {
        self.cells.get(&cell)
    }

    /// Canonical rational function at a cell, expanded on demand.
    pub fn value(&self, cell: Cell) -> Option<RationalFunction> {
        self.cells.get(&cell).map(|f| self.pool.to_rational(f))
    }

    /// Weighted degree of the denominator at a cell.
    pub fn degree(&self, cell: Cell) -> Option<u64> {
        self.cells.get(&cell).map(|f| self.pool.den_degree(f))
    }

    /// Numerator and denominator homogeneous of one weighted degree.
    pub fn is_balanced(&self, cell: Cell) -> Option<bool> {
        self.cells.get(&cell).map(|f| self.pool.is_balanced(f))
    }
}

/// Iterates the rule exactly over the region.
pub fn iterate(
    rule: &LatticeRule,
    scheme: InitScheme,
    coeffs: &CoefficientGrid,
    region: Region,
) -> Result<LatticeState, LatticeError> {
    let plan = Plan::new(rule.stencil, scheme, region)?;
    let zgrid = coeffs.materialize(&plan.z_cells())?;
    let ring = symbolic_ring(&plan, &zgrid);
    let mut backend = ExactBackend::new(&ring);
    let cells = run(rule, &plan, &zgrid, &mut backend)?;
    Ok(LatticeState { rule: rule.clone(), coeffs: coeffs.clone(), plan, zgrid, pool: backend.pool, cells })
}
