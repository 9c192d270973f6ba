use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::expr::{BinOp, Expr, Leaf, Op, Sym};
use super::LatticeError;
use crate::symcore::{Polynomial, RationalFunction, Ring, SymError, Variable};

/// Which neighbours determine a new cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stencil {
    /// `x^{m+1}_{n+1}` from `x^m_n`, `x^{m+1}_n`, `x^m_{n+1}`.
    Quad,
    /// `x^{m+1}_n` from `x^m_n`, `x^m_{n+1}`.
    Tri,
}

impl fmt::Display for Stencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stencil::Quad => "quad",
            Stencil::Tri => "tri",
        })
    }
}

impl FromStr for Stencil {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "quad" => Ok(Stencil::Quad),
            "tri" => Ok(Stencil::Tri),
            _ => Err(format!("unknown stencil '{s}' (expected quad or tri)")),
        }
    }
}

/// A named explicit evolution rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeRule {
    pub name: String,
    pub stencil: Stencil,
    pub expr: Expr,
}

/// Registry entry for a built-in equation.
#[derive(Clone, Copy, Debug)]
pub struct Builtin {
    pub name: &'static str,
    pub stencil: Stencil,
    pub expr: &'static str,
    pub description: &'static str,
}

/// Built-in equations in listing order. Implicit equations are stored solved
/// for the new corner.
pub const BUILTINS: [Builtin; 6] = [
    Builtin { name: "kdv", stencil: Stencil::Quad, expr: "x00 + 1/x01 - 1/x10", description: "lattice KdV" },
    Builtin { name: "pkdv", stencil: Stencil::Quad, expr: "x00 + z/(x10 - x01)", description: "lattice potential KdV" },
    Builtin {
        name: "mkdv",
        stencil: Stencil::Quad,
        expr: "x00*(x10 - z*x01)/(z*x10 - x01)",
        description: "lattice modified KdV",
    },
    Builtin {
        name: "sine_gordon",
        stencil: Stencil::Quad,
        expr: "(1 + z*x10*x01)/(x00*(x10*x01 + z))",
        description: "lattice sine-Gordon, solved for x11 from x11*x00 = (1 + z*x10*x01)/(x10*x01 + z)",
    },
    Builtin {
        name: "liouville",
        stencil: Stencil::Quad,
        expr: "(x10*x01 + z)/x00",
        description: "lattice Liouville, solved for x11 from x11*x00 = x10*x01 + z",
    },
    Builtin { name: "burgers", stencil: Stencil::Tri, expr: "x00*(1 + z*x01)/(1 + z*x00)", description: "lattice Burgers" },
];

impl LatticeRule {
    pub fn new(name: &str, stencil: Stencil, expr: Expr) -> Result<Self, LatticeError> {
        let rule = LatticeRule { name: name.to_string(), stencil, expr };
        rule.validate()?;
        Ok(rule)
    }

    pub fn parse(name: &str, stencil: Stencil, text: &str) -> Result<Self, LatticeError> {
        Self::new(name, stencil, Expr::parse(text)?)
    }

    pub fn builtin(name: &str) -> Result<Self, LatticeError> {
        let b = BUILTINS
            .iter()
            .find(|b| b.name == name)
            .ok_or_else(|| LatticeError::UnknownRule(name.to_string()))?;
        Self::parse(b.name, b.stencil, b.expr)
    }

    /// Parses the line-oriented rule file format (`name = ...`,
    /// `stencil = quad|tri`, `rule = "..."`; `#` starts a comment).
    pub fn from_file_text(text: &str) -> Result<Self, LatticeError> {
        let mut name = None;
        let mut stencil = None;
        let mut rule = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| LatticeError::RuleFile { line: lineno + 1, msg };
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected 'key = value'".into()))?;
            let value = value.trim();
            match key.trim() {
                "name" => {
                    if value.is_empty() || !value.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                        return Err(bad(format!("invalid name '{value}'")));
                    }
                    name = Some(value.to_string());
                }
                "stencil" => stencil = Some(value.parse::<Stencil>().map_err(bad)?),
                "rule" => {
                    let inner = value
                        .strip_prefix('"')
                        .and_then(|v| v.strip_suffix('"'))
                        .ok_or_else(|| bad("rule must be a double-quoted expression".into()))?;
                    rule = Some((lineno + 1, inner.to_string()));
                }
                other => return Err(bad(format!("unknown key '{other}'"))),
            }
        }
        let missing = |k: &str| LatticeError::RuleFile { line: 0, msg: format!("missing '{k}'") };
        let name = name.ok_or_else(|| missing("name"))?;
        let stencil = stencil.ok_or_else(|| missing("stencil"))?;
        let (line, text) = rule.ok_or_else(|| missing("rule"))?;
        let expr = Expr::parse(&text).map_err(|e| LatticeError::RuleFile { line, msg: e.to_string() })?;
        Self::new(&name, stencil, expr)
    }

    /// Renders in the rule file format; [`LatticeRule::from_file_text`]
    /// reads it back to an equal rule.
    pub fn to_file_text(&self) -> String {
        format!("name = {}\nstencil = {}\nrule = \"{}\"\n", self.name, self.stencil, self.expr)
    }

    fn validate(&self) -> Result<(), LatticeError> {
        if self.stencil == Stencil::Tri && self.expr.symbols().contains(&Sym::X10) {
            return Err(LatticeError::IllegalPlaceholder { sym: Sym::X10.name(), stencil: self.stencil });
        }
        self.symbolic().map(|_| ())
    }

    /// The rule as a rational function of free symbols `u0 = x00`, `u1 = x10`,
    /// `u2 = x01`, `u3 = z`.
    pub fn symbolic(&self) -> Result<RationalFunction, LatticeError> {
        let ring = Ring::new((0..4).map(|i| Variable::aux(i, 0)));
        let mut leaf = |l: Leaf| -> Result<RationalFunction, SymError> {
            match l {
                Leaf::Num(n) => Ok(RationalFunction::constant(&ring, n)),
                Leaf::Sym(s) => {
                    let i = Sym::ALL.iter().position(|&x| x == s).expect("known symbol") as u32;
                    Ok(RationalFunction::from_poly(Polynomial::var(&ring, Variable::aux(i, 0))?))
                }
            }
        };
        let mut op = |o: Op<RationalFunction>| -> Result<RationalFunction, SymError> {
            Ok(match o {
                Op::Neg(a) => a.neg(),
                Op::Bin(BinOp::Add, a, b) => a.add(&b),
                Op::Bin(BinOp::Sub, a, b) => a.sub(&b),
                Op::Bin(BinOp::Mul, a, b) => a.mul(&b),
                Op::Bin(BinOp::Div, a, b) => a.div(&b)?,
            })
        };
        self.expr.eval(&mut leaf, &mut op).map_err(|_| LatticeError::ZeroDenominatorRule)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_parse_with_expected_stencils() {
        for b in BUILTINS {
            let r = LatticeRule::builtin(b.name).unwrap();
            assert_eq!(r.stencil, if b.name == "burgers" { Stencil::Tri } else { Stencil::Quad });
            assert_eq!(r.expr.to_string(), b.expr);
        }
        assert!(matches!(LatticeRule::builtin("nope"), Err(LatticeError::UnknownRule(_))));
    }

    #[test]
    fn rejects_zero_denominator_and_illegal_placeholder() {
        let e = LatticeRule::parse("bad", Stencil::Quad, "x00 + z/(x10 - x10)").unwrap_err();
        assert_eq!(e, LatticeError::ZeroDenominatorRule);
        let e = LatticeRule::parse("bad", Stencil::Tri, "x00 + x10").unwrap_err();
        assert!(matches!(e, LatticeError::IllegalPlaceholder { .. }));
        assert!(LatticeRule::parse("copy", Stencil::Quad, "x00").is_ok());
    }

    #[test]
    fn rule_file_round_trip() {
        let text = "# potential KdV\nname = mine\nstencil = quad\nrule = \"x00 + z/(x10 - x01)\"\n";
        let r = LatticeRule::from_file_text(text).unwrap();
        assert_eq!(r.name, "mine");
        let again = LatticeRule::from_file_text(&r.to_file_text()).unwrap();
        assert_eq!(again, r);
        let err = LatticeRule::from_file_text("name = a\nstencil = hex\n").unwrap_err();
        assert!(matches!(err, LatticeError::RuleFile { line: 2, .. }));
    }
}
