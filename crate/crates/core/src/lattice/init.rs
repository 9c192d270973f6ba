use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::rule::Stencil;
use super::{Cell, LatticeError, Region};
use crate::symcore::Variable;

/// How the initial values are laid out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitScheme {
    /// `x^0_n = p_n/q`, `x^m_0 = r_m/q`, with `r_0 = p_0`.
    Corner,
    /// `x^{-k}_k = p_k/q`, `x^{1-k}_k = r_k/q` on two adjacent anti-diagonals.
    Staircase,
    /// `x^0_n = p_n/q` on the first row only.
    Line,
}

impl InitScheme {
    pub fn name(self) -> &'static str {
        match self {
            InitScheme::Corner => "corner",
            InitScheme::Staircase => "staircase",
            InitScheme::Line => "line",
        }
    }

    /// The scheme used when none is given.
    pub fn default_for(stencil: Stencil) -> InitScheme {
        match stencil {
            Stencil::Quad => InitScheme::Corner,
            Stencil::Tri => InitScheme::Line,
        }
    }
}

impl fmt::Display for InitScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InitScheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "corner" => Ok(InitScheme::Corner),
            "staircase" => Ok(InitScheme::Staircase),
            "line" => Ok(InitScheme::Line),
            _ => Err(format!("unknown initial-data scheme '{s}' (expected corner, staircase or line)")),
        }
    }
}

/// One application of the rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub target: Cell,
    pub x00: Cell,
    /// Absent for the triangular stencil.
    pub x10: Option<Cell>,
    pub x01: Cell,
    /// Cell index of the coefficient `z` used by this step.
    pub z: Cell,
}

/// The full dependency schedule for a region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub stencil: Stencil,
    pub scheme: InitScheme,
    pub region: Region,
    /// Initial cells, each holding `datum / q`.
    pub initial: Vec<(Cell, Variable)>,
    /// Rule applications in a valid dependency order.
    pub steps: Vec<Step>,
}

impl Plan {
    pub fn new(stencil: Stencil, scheme: InitScheme, region: Region) -> Result<Plan, LatticeError> {
        if region.rows == 0 || region.cols == 0 {
            return Err(LatticeError::EmptyRegion { rows: region.rows, cols: region.cols });
        }
        let (m_max, n_max) = (region.rows as i64 - 1, region.cols as i64 - 1);
        let mut initial = Vec::new();
        let mut steps = Vec::new();
        let quad = |m: i64, n: i64| Step {
            target: (m, n),
            x00: (m - 1, n - 1),
            x10: Some((m, n - 1)),
            x01: (m - 1, n),
            z: (m - 1, n - 1),
        };
        match (stencil, scheme) {
            (Stencil::Quad, InitScheme::Corner) => {
                for n in 0..=n_max {
                    initial.push(((0, n), Variable::p(n)));
                }
                for m in 1..=m_max {
                    initial.push(((m, 0), Variable::r(m)));
                }
                for s in 2..=m_max + n_max {
                    for m in 1..=m_max {
                        let n = s - m;
                        if (1..=n_max).contains(&n) {
                            steps.push(quad(m, n));
                        }
                    }
                }
            }
            (Stencil::Quad, InitScheme::Staircase) => {
                for k in -m_max..=n_max {
                    initial.push(((-k, k), Variable::p(k)));
                }
                for k in (1 - m_max)..=n_max {
                    initial.push(((1 - k, k), Variable::r(k)));
                }
                // every cell of the dependency cone of the box, by anti-diagonal
                for s in 2..=m_max + n_max {
                    for m in (s - n_max)..=m_max {
                        steps.push(quad(m, s - m));
                    }
                }
            }
            (Stencil::Tri, InitScheme::Line) => {
                let width = n_max + m_max;
                for n in 0..=width {
                    initial.push(((0, n), Variable::p(n)));
                }
                for m in 1..=m_max {
                    for n in 0..=(width - m) {
                        steps.push(Step { target: (m, n), x00: (m - 1, n), x10: None, x01: (m - 1, n + 1), z: (m - 1, n) });
                    }
                }
            }
            _ => return Err(LatticeError::IncompatibleScheme { scheme, stencil }),
        }
        Ok(Plan { stencil, scheme, region, initial, steps })
    }

    /// Cells of the reported box, row by row.
    pub fn box_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let cols = self.region.cols as i64;
        (0..self.region.rows as i64).flat_map(move |m| (0..cols).map(move |n| (m, n)))
    }

    /// Coefficient cells referenced by the schedule.
    pub fn z_cells(&self) -> Vec<Cell> {
        let mut v: Vec<Cell> = self.steps.iter().map(|s| s.z).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Every variable the symbolic iteration needs (coefficient symbols excluded).
    pub fn data_variables(&self) -> Vec<Variable> {
        let mut v: Vec<Variable> = self.initial.iter().map(|(_, x)| *x).collect();
        v.push(Variable::q());
        v
    }

    pub fn is_initial(&self, cell: Cell) -> bool {
        self.initial.iter().any(|(c, _)| *c == cell)
    }

    /// Position of a cell in the fill order (initial cells first).
    pub fn order_of(&self, cell: Cell) -> Option<usize> {
        if let Some(i) = self.initial.iter().position(|(c, _)| *c == cell) {
            return Some(i);
        }
        self.steps.iter().position(|s| s.target == cell).map(|i| i + self.initial.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(rows: usize, cols: usize) -> Region {
        Region { rows, cols }
    }

    #[test]
    fn corner_schedule_respects_dependencies() {
        let plan = Plan::new(Stencil::Quad, InitScheme::Corner, region(4, 6)).unwrap();
        assert_eq!(plan.initial.len(), 6 + 3);
        assert_eq!(plan.steps.len(), 3 * 5);
        let mut done: Vec<Cell> = plan.initial.iter().map(|(c, _)| *c).collect();
        for s in &plan.steps {
            assert!(done.contains(&s.x00) && done.contains(&s.x01) && done.contains(&s.x10.unwrap()));
            done.push(s.target);
        }
    }

    #[test]
    fn staircase_covers_box_through_its_cone() {
        let plan = Plan::new(Stencil::Quad, InitScheme::Staircase, region(3, 3)).unwrap();
        let mut done: Vec<Cell> = plan.initial.iter().map(|(c, _)| *c).collect();
        for s in &plan.steps {
            assert!(done.contains(&s.x00) && done.contains(&s.x01) && done.contains(&s.x10.unwrap()), "{s:?}");
            done.push(s.target);
        }
        for c in plan.box_cells() {
            assert!(done.contains(&c), "{c:?}");
        }
        assert!(plan.initial.iter().any(|&(c, v)| c == (2, -2) && v == Variable::p(-2)));
    }

    #[test]
    fn line_extent_follows_the_cone() {
        let plan = Plan::new(Stencil::Tri, InitScheme::Line, region(5, 4)).unwrap();
        assert_eq!(plan.initial.len(), 4 + 4);
        assert!(plan.steps.iter().any(|s| s.target == (4, 3)));
        assert!(Plan::new(Stencil::Tri, InitScheme::Corner, region(2, 2)).is_err());
        assert!(Plan::new(Stencil::Quad, InitScheme::Line, region(2, 2)).is_err());
    }
}
