use std::collections::{BTreeMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Cell, LatticeError};

/// Default value of a constant coefficient. Unity degenerates mKdV and
/// sine-Gordon to degree one everywhere, so a generic value is used.
pub const DEFAULT_CONSTANT: i64 = 3;

/// Range of values drawn by sequence generators.
pub const SEQUENCE_RANGE: std::ops::RangeInclusive<i64> = 2..=97;

/// Range of values drawn for generic random grids.
pub const GENERIC_RANGE: std::ops::Range<i64> = 2..(1 << 31);

/// An integer sequence indexed by a lattice coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sequence {
    /// Seeded draws from [`SEQUENCE_RANGE`], one per index.
    Random { seed: u64 },
    /// Explicit values for indices `0..len`.
    Values(Vec<i64>),
}

impl Sequence {
    pub fn value(&self, i: i64) -> Result<i64, LatticeError> {
        match self {
            Sequence::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(i as u64);
                Ok(rng.gen_range(SEQUENCE_RANGE))
            }
            Sequence::Values(v) => {
                usize::try_from(i).ok().and_then(|k| v.get(k)).copied().ok_or(LatticeError::SequenceIndex(i))
            }
        }
    }
}

/// Value of the coefficient at one cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZValue {
    Int(i64),
    /// A free weight-0 symbol `z^m_n`.
    Symbol,
}

/// How the coefficient `z^m_n` varies over the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientGrid {
    Constant(i64),
    GenericSymbolic,
    GenericRandom { seed: u64 },
    /// `z^m_n = f(n) + g(m)`.
    Sum { f: Sequence, g: Sequence },
    /// `z^m_n = f(n) g(m)`.
    Product { f: Sequence, g: Sequence },
    /// `z^m_n = g(m)`.
    RowOnly { g: Sequence },
    Explicit(BTreeMap<Cell, i64>),
}

fn sub_seed(seed: u64, k: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng.gen()
}

impl CoefficientGrid {
    pub fn sum_random(seed: u64) -> Self {
        CoefficientGrid::Sum { f: Sequence::Random { seed: sub_seed(seed, 1) }, g: Sequence::Random { seed: sub_seed(seed, 2) } }
    }

    pub fn product_random(seed: u64) -> Self {
        CoefficientGrid::Product {
            f: Sequence::Random { seed: sub_seed(seed, 1) },
            g: Sequence::Random { seed: sub_seed(seed, 2) },
        }
    }

    pub fn row_only_random(seed: u64) -> Self {
        CoefficientGrid::RowOnly { g: Sequence::Random { seed: sub_seed(seed, 2) } }
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            CoefficientGrid::Constant(_) => "constant",
            CoefficientGrid::GenericSymbolic => "generic-symbolic",
            CoefficientGrid::GenericRandom { .. } => "generic-random",
            CoefficientGrid::Sum { .. } => "sum",
            CoefficientGrid::Product { .. } => "product",
            CoefficientGrid::RowOnly { .. } => "row-only",
            CoefficientGrid::Explicit(_) => "explicit",
        }
    }

    fn generic_draw(seed: u64, (m, n): Cell) -> i64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(((m as u32 as u64) << 32) | n as u32 as u64);
        rng.gen_range(GENERIC_RANGE)
    }

    fn value(&self, (m, n): Cell) -> Result<ZValue, LatticeError> {
        Ok(match self {
            CoefficientGrid::Constant(c) => ZValue::Int(*c),
            CoefficientGrid::GenericSymbolic => ZValue::Symbol,
            CoefficientGrid::GenericRandom { seed } => ZValue::Int(Self::generic_draw(*seed, (m, n))),
            CoefficientGrid::Sum { f, g } => ZValue::Int(f.value(n)? + g.value(m)?),
            CoefficientGrid::Product { f, g } => ZValue::Int(f.value(n)? * g.value(m)?),
            CoefficientGrid::RowOnly { g } => ZValue::Int(g.value(m)?),
            CoefficientGrid::Explicit(map) => {
                ZValue::Int(*map.get(&(m, n)).ok_or(LatticeError::MissingCoefficient { m, n })?)
            }
        })
    }

    /// Values on the given cells. Generic random grids are made pairwise
    /// distinct by stepping past collisions in cell order.
    pub fn materialize(&self, cells: &[Cell]) -> Result<BTreeMap<Cell, ZValue>, LatticeError> {
        let mut cells = cells.to_vec();
        cells.sort_unstable();
        cells.dedup();
        let mut out = BTreeMap::new();
        let mut seen = HashSet::new();
        for c in cells {
            let mut v = self.value(c)?;
            if matches!(self, CoefficientGrid::GenericRandom { .. }) {
                if let ZValue::Int(x) = &mut v {
                    while !seen.insert(*x) {
                        *x = if *x + 1 >= GENERIC_RANGE.end { GENERIC_RANGE.start } else { *x + 1 };
                    }
                }
            }
            out.insert(c, v);
        }
        Ok(out)
    }

    /// Integer values on the given cells, for modes without symbols.
    pub fn integer_grid(&self, cells: &[Cell]) -> Result<BTreeMap<Cell, i64>, LatticeError> {
        self.materialize(cells)?
            .into_iter()
            .map(|(c, v)| match v {
                ZValue::Int(x) => Ok((c, x)),
                ZValue::Symbol => Err(LatticeError::SymbolicCoefficient),
            })
            .collect()
    }
}

impl fmt::Display for CoefficientGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientGrid::Constant(c) => write!(f, "constant({c})"),
            CoefficientGrid::GenericRandom { seed } => write!(f, "generic-random(seed {seed})"),
            other => f.write_str(other.mode_name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(rows: i64, cols: i64) -> Vec<Cell> {
        (0..rows).flat_map(|m| (0..cols).map(move |n| (m, n))).collect()
    }

    #[test]
    fn structured_grids_hold_by_construction() {
        let cs = cells(5, 5);
        let sum = CoefficientGrid::sum_random(9).integer_grid(&cs).unwrap();
        let prod = CoefficientGrid::product_random(9).integer_grid(&cs).unwrap();
        let row = CoefficientGrid::row_only_random(9).integer_grid(&cs).unwrap();
        for m in 0..4 {
            for n in 0..4 {
                let z = |g: &BTreeMap<Cell, i64>, a: i64, b: i64| g[&(a, b)];
                assert_eq!(z(&sum, m + 1, n + 1) - z(&sum, m + 1, n) - z(&sum, m, n + 1) + z(&sum, m, n), 0);
                assert_eq!(z(&prod, m + 1, n + 1) * z(&prod, m, n), z(&prod, m + 1, n) * z(&prod, m, n + 1));
                assert_eq!(z(&row, m, n + 1), z(&row, m, n));
            }
        }
    }

    #[test]
    fn generic_random_is_distinct_and_seeded() {
        let cs = cells(6, 6);
        let a = CoefficientGrid::GenericRandom { seed: 4 }.integer_grid(&cs).unwrap();
        let b = CoefficientGrid::GenericRandom { seed: 4 }.integer_grid(&cs).unwrap();
        assert_eq!(a, b);
        let distinct: HashSet<i64> = a.values().copied().collect();
        assert_eq!(distinct.len(), a.len());
        assert!(a.values().all(|&v| v != 0));
        let c = CoefficientGrid::GenericRandom { seed: 5 }.integer_grid(&cs).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn explicit_grid_reports_missing_cells() {
        let g = CoefficientGrid::Explicit(BTreeMap::from([((0, 0), 2)]));
        assert!(matches!(g.materialize(&[(0, 1)]), Err(LatticeError::MissingCoefficient { m: 0, n: 1 })));
        assert!(matches!(
            CoefficientGrid::RowOnly { g: Sequence::Values(vec![1]) }.materialize(&[(3, 0)]),
            Err(LatticeError::SequenceIndex(3))
        ));
    }
}
