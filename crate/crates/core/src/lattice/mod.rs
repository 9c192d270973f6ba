//! Lattice equations, initial data and the iteration engine.

pub mod backend;
pub mod coeff;
pub mod engine;
pub mod expr;
pub mod init;
pub mod rule;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use coeff::{CoefficientGrid, Sequence, ZValue};
pub use engine::{iterate, LatticeState};
pub use expr::{Expr, ParseError};
pub use init::{InitScheme, Plan, Step};
pub use rule::{LatticeRule, Stencil, BUILTINS};

/// Lattice coordinates `(m, n)`.
pub type Cell = (i64, i64);

/// Rows `m = 0..rows` and columns `n = 0..cols`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub rows: usize,
    pub cols: usize,
}

impl Region {
    pub fn new(rows: usize, cols: usize) -> Self {
        Region { rows, cols }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.rows, self.cols)
    }
}

impl FromStr for Region {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, LatticeError> {
        let bad = || LatticeError::BadRegion(s.to_string());
        let (a, b) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        let rows = a.trim().parse().map_err(|_| bad())?;
        let cols = b.trim().parse().map_err(|_| bad())?;
        if rows == 0 || cols == 0 {
            return Err(bad());
        }
        Ok(Region { rows, cols })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("placeholder {sym} is not allowed with the {stencil} stencil")]
    IllegalPlaceholder { sym: &'static str, stencil: Stencil },
    #[error("rule denominator is identically zero")]
    ZeroDenominatorRule,
    #[error("unknown rule '{0}'")]
    UnknownRule(String),
    #[error("rule file line {line}: {msg}")]
    RuleFile { line: usize, msg: String },
    #[error("zero denominator at cell ({m},{n}): initial data or coefficients are not generic")]
    ZeroDenominator { m: i64, n: i64 },
    #[error("{scheme} initial data cannot drive the {stencil} stencil")]
    IncompatibleScheme { scheme: InitScheme, stencil: Stencil },
    #[error("region {rows}x{cols} is empty")]
    EmptyRegion { rows: usize, cols: usize },
    #[error("invalid region '{0}' (expected MxN with M, N >= 1)")]
    BadRegion(String),
    #[error("no coefficient value for cell ({m},{n})")]
    MissingCoefficient { m: i64, n: i64 },
    #[error("coefficient sequence has no entry at index {0}")]
    SequenceIndex(i64),
    #[error("symbolic coefficients are not allowed here")]
    SymbolicCoefficient,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::{Polynomial, Variable};

    #[test]
    fn region_parsing() {
        assert_eq!("4x6".parse::<Region>().unwrap(), Region::new(4, 6));
        assert!("4x0".parse::<Region>().is_err());
        assert!("four".parse::<Region>().is_err());
    }

    #[test]
    fn pkdv_first_cell_matches_hand_computation() {
        let rule = LatticeRule::builtin("pkdv").unwrap();
        let st = iterate(&rule, InitScheme::Corner, &CoefficientGrid::GenericSymbolic, Region::new(2, 2)).unwrap();
        let ring = st.pool.ring().clone();
        let v = |x| Polynomial::var(&ring, x).unwrap();
        let (p0, p1, r1, q, z) = (v(Variable::p(0)), v(Variable::p(1)), v(Variable::r(1)), v(Variable::q()), v(Variable::z(0, 0)));
        let x11 = st.value((1, 1)).unwrap();
        let num = &(&(&p0 * &p1) - &(&p0 * &r1)) - &(&z * &(&q * &q));
        let den = &q * &(&p1 - &r1);
        assert_eq!(x11.num(), &num);
        assert_eq!(x11.den(), &den);
        assert_eq!(st.degree((1, 1)), Some(2));
    }

    #[test]
    fn kdv_first_cell_matches_hand_computation() {
        let rule = LatticeRule::builtin("kdv").unwrap();
        let st = iterate(&rule, InitScheme::Corner, &CoefficientGrid::Constant(3), Region::new(2, 2)).unwrap();
        let ring = st.pool.ring().clone();
        let v = |x| Polynomial::var(&ring, x).unwrap();
        let (p0, p1, r1, q) = (v(Variable::p(0)), v(Variable::p(1)), v(Variable::r(1)), v(Variable::q()));
        let x11 = st.value((1, 1)).unwrap();
        assert_eq!(x11.num().to_string(), "p0*p1*r1 - p1*q^2 + r1*q^2");
        assert_eq!(x11.den(), &(&q * &(&p1 * &r1)));
        let _ = p0;
        assert_eq!(st.degree((1, 1)), Some(3));
    }

    #[test]
    fn identity_copy_rule_has_degree_one() {
        let rule = LatticeRule::parse("copy", Stencil::Quad, "x00").unwrap();
        let st = iterate(&rule, InitScheme::Corner, &CoefficientGrid::Constant(3), Region::new(3, 3)).unwrap();
        assert_eq!(st.value((2, 2)), st.value((0, 0)));
        assert!(st.plan.box_cells().all(|c| st.degree(c) == Some(1)));
    }

    #[test]
    fn zero_denominator_names_the_cell() {
        use crate::lattice::backend::NumericBackend;
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let rule = LatticeRule::parse("bad", Stencil::Quad, "1/(x10 - x01)").unwrap();
        let plan = Plan::new(Stencil::Quad, InitScheme::Corner, Region::new(2, 2)).unwrap();
        let zgrid = CoefficientGrid::Constant(3).materialize(&plan.z_cells()).unwrap();
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        let values = [(Variable::p(0), 1), (Variable::p(1), 2), (Variable::r(1), 2), (Variable::q(), 1)]
            .into_iter()
            .map(|(k, v)| (k, int(v)))
            .collect();
        let err = engine::run(&rule, &plan, &zgrid, &mut NumericBackend { values }).unwrap_err();
        assert_eq!(err, LatticeError::ZeroDenominator { m: 1, n: 1 });
    }
}
