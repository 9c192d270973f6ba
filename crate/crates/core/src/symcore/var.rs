use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// What a polynomial variable stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VarKind {
    /// Initial datum `p_n` on the first row (or the first staircase line).
    P(i64),
    /// Initial datum `r_m` on the first column (or the second staircase line).
    R(i64),
    /// Common homogenising denominator `q`.
    Q,
    /// Symbolic coefficient `z^m_n`.
    Z(i64, i64),
    /// Specialisation parameter.
    T,
    /// Free auxiliary symbol.
    Aux(u32),
}

/// A polynomial variable: a kind plus a homogeneity weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub kind: VarKind,
    pub weight: u32,
}

impl Variable {
    pub fn p(n: i64) -> Self {
        Variable { kind: VarKind::P(n), weight: 1 }
    }

    pub fn r(m: i64) -> Self {
        Variable { kind: VarKind::R(m), weight: 1 }
    }

    pub fn q() -> Self {
        Variable { kind: VarKind::Q, weight: 1 }
    }

    pub fn z(m: i64, n: i64) -> Self {
        Variable { kind: VarKind::Z(m, n), weight: 0 }
    }

    pub fn t() -> Self {
        Variable { kind: VarKind::T, weight: 0 }
    }

    pub fn aux(index: u32, weight: u32) -> Self {
        Variable { kind: VarKind::Aux(index), weight }
    }

    pub fn is_coefficient(&self) -> bool {
        matches!(self.kind, VarKind::Z(..))
    }

    /// Sort key: smaller keys are more significant in the lexicographic term order.
    /// Coefficient symbols of later cells come first so that constraints print
    /// with the highest lattice index leading.
    fn order_key(&self) -> (u8, i64, i64, u32) {
        match self.kind {
            VarKind::P(n) => (0, n, 0, 0),
            VarKind::R(m) => (1, m, 0, 0),
            VarKind::Q => (2, 0, 0, 0),
            VarKind::Z(m, n) => (3, -m, -n, 0),
            VarKind::T => (4, 0, 0, 0),
            VarKind::Aux(i) => (5, i as i64, 0, self.weight),
        }
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

fn signed_index(f: &mut fmt::Formatter<'_>, v: i64) -> fmt::Result {
    if v < 0 {
        write!(f, "m{}", -v)
    } else {
        write!(f, "{v}")
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::P(n) => {
                f.write_str("p")?;
                signed_index(f, n)
            }
            VarKind::R(m) => {
                f.write_str("r")?;
                signed_index(f, m)
            }
            VarKind::Q => f.write_str("q"),
            VarKind::Z(m, n) if (0..10).contains(&m) && (0..10).contains(&n) => {
                write!(f, "z{m}{n}")
            }
            VarKind::Z(m, n) => {
                f.write_str("z")?;
                signed_index(f, m)?;
                f.write_str("_")?;
                signed_index(f, n)
            }
            VarKind::T => f.write_str("t"),
            VarKind::Aux(i) => write!(f, "u{i}"),
        }
    }
}

/// The ordered variable universe a family of polynomials lives in.
///
/// Index 0 is the most significant variable of the lexicographic term order.
#[derive(Debug)]
pub struct Ring {
    vars: Vec<Variable>,
    index: HashMap<Variable, usize>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new(vars: impl IntoIterator<Item = Variable>) -> Arc<Ring> {
        let mut vars: Vec<Variable> = vars.into_iter().collect();
        vars.sort();
        vars.dedup();
        let index = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        Arc::new(Ring { vars, index })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn var(&self, i: usize) -> Variable {
        self.vars[i]
    }

    pub fn index_of(&self, v: &Variable) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn weights(&self) -> Vec<u32> {
        self.vars.iter().map(|v| v.weight).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_follow_kind() {
        assert_eq!(Variable::p(3).weight, 1);
        assert_eq!(Variable::r(1).weight, 1);
        assert_eq!(Variable::q().weight, 1);
        assert_eq!(Variable::z(0, 0).weight, 0);
        assert_eq!(Variable::t().weight, 0);
    }

    #[test]
    fn ring_order_is_deterministic() {
        let a = Ring::new([Variable::z(0, 0), Variable::q(), Variable::p(1), Variable::z(1, 1), Variable::r(1), Variable::p(0)]);
        let b = Ring::new([Variable::p(0), Variable::z(1, 1), Variable::r(1), Variable::p(1), Variable::q(), Variable::z(0, 0)]);
        assert_eq!(a, b);
        let names: Vec<String> = a.vars().iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["p0", "p1", "r1", "q", "z11", "z00"]);
    }

    #[test]
    fn display_handles_wide_and_negative_indices() {
        assert_eq!(Variable::z(12, 3).to_string(), "z12_3");
        assert_eq!(Variable::p(-2).to_string(), "pm2");
    }
}
