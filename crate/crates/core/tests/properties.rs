use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use latgrowth::degrees::{self, BackendKind, DegreeTable, TableMeta};
use latgrowth::growth::linsolve::{solve, Solution};
use latgrowth::growth::{self, fit_closed_form};
use latgrowth::lattice::{CoefficientGrid, Expr, InitScheme, LatticeRule, Region, Stencil, BUILTINS};
use latgrowth::reproduce::{evaluation_consistency, gcd_pairs, random_expr, random_poly};
use latgrowth::symcore::{gcd, Polynomial, Ring, Variable};

fn ring() -> std::sync::Arc<Ring> {
    Ring::new([Variable::p(0), Variable::p(1), Variable::r(1), Variable::q(), Variable::z(0, 0)])
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn point(rng: &mut ChaCha8Rng, n: usize) -> Vec<BigRational> {
    (0..n).map(|_| rat(rng.gen_range(-30..=30))).collect()
}

fn specialized(name: &str, coeffs: &CoefficientGrid, region: Region, seed: u64) -> DegreeTable {
    let rule = LatticeRule::builtin(name).unwrap();
    degrees::degree_table_specialized(&rule, InitScheme::default_for(rule.stencil), coeffs, region, 3, seed).unwrap()
}

fn quad_builtins() -> Vec<&'static str> {
    BUILTINS.iter().filter(|b| b.stencil == Stencil::Quad).map(|b| b.name).collect()
}

fn synthetic(rows: usize, cols: usize, f: impl Fn(i64, i64) -> i64) -> DegreeTable {
    DegreeTable {
        meta: TableMeta {
            rule: "synthetic".into(),
            init: InitScheme::Corner,
            coeff_mode: "constant".into(),
            backend: BackendKind::Exact,
            seed: None,
            trials: None,
        },
        stencil: Stencil::Quad,
        region: Region::new(rows, cols),
        entries: (0..rows as i64)
            .map(|m| (0..cols as i64).map(|n| if m * n == 0 { 1 } else { f(m, n) as u64 }).collect())
            .collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn evaluation_is_a_ring_homomorphism(seed in any::<u64>()) {
        let ring = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_poly(&mut rng, &ring, 5), random_poly(&mut rng, &ring, 5), random_poly(&mut rng, &ring, 5));
        let x = point(&mut rng, ring.len());
        let (ea, eb, ec) = (a.eval_rational(&x), b.eval_rational(&x), c.eval_rational(&x));
        prop_assert_eq!((&a + &b).eval_rational(&x), &ea + &eb);
        prop_assert_eq!((&a * &b).eval_rational(&x), &ea * &eb);
        prop_assert_eq!((&a - &a).is_zero(), true);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(((&a * &b) * c.clone()).eval_rational(&x), ea * eb * ec);
    }

    #[test]
    fn exact_division_inverts_multiplication(seed in any::<u64>()) {
        let ring = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_poly(&mut rng, &ring, 5);
        let b = random_poly(&mut rng, &ring, 4);
        prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
    }

    #[test]
    fn gcd_contains_common_factor(seed in any::<u64>()) {
        prop_assert_eq!(gcd_pairs(seed, 2), Ok(()));
    }

    #[test]
    fn gcd_is_symmetric_up_to_sign(seed in any::<u64>()) {
        let ring = ring();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_poly(&mut rng, &ring, 3);
        let x = &random_poly(&mut rng, &ring, 3) * &c;
        let y = &random_poly(&mut rng, &ring, 3) * &c;
        prop_assert_eq!(gcd(&x, &y).canonical(), gcd(&y, &x).canonical());
    }

    #[test]
    fn backends_agree_on_random_trees(seed in any::<u64>()) {
        let compared = evaluation_consistency(seed, 4, 4);
        prop_assert!(compared.is_ok(), "{:?}", compared);
    }

    #[test]
    fn expressions_round_trip_through_text(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 4, true);
        let back = Expr::parse(&e.to_string()).unwrap();
        prop_assert_eq!(back.to_string(), e.to_string());
    }

    #[test]
    fn rule_files_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_expr(&mut rng, 3, false);
        let Ok(rule) = LatticeRule::new("r", Stencil::Quad, e) else { return Ok(()) };
        let back = LatticeRule::from_file_text(&rule.to_file_text()).unwrap();
        prop_assert_eq!(back.to_file_text(), rule.to_file_text());
        prop_assert_eq!(back.symbolic().unwrap().equals(&rule.symbolic().unwrap()), true);
    }

    #[test]
    fn region_text_round_trips(rows in 1usize..50, cols in 1usize..50) {
        let r = Region::new(rows, cols);
        prop_assert_eq!(r.to_string().parse::<Region>().unwrap(), r);
    }

    #[test]
    fn closed_forms_are_recovered(c in prop::array::uniform5(0i64..5)) {
        let f = |m: i64, n: i64| 1 + c[0] + c[1] * m * n + c[2] * m.max(n) + c[3] * m.min(n) + c[4] * (m + n);
        let t = synthetic(5, 5, f);
        let fit = fit_closed_form(&t).unwrap();
        prop_assert!(fit.valid);
        for m in 1..5 {
            for n in 1..5 {
                prop_assert_eq!(fit.eval(m, n), rat(f(m, n)));
            }
        }
    }

    #[test]
    fn square_systems_solve_exactly(x in prop::collection::vec(-20i64..20, 3), a in prop::collection::vec(-9i64..10, 9)) {
        let rows: Vec<Vec<BigRational>> = a.chunks(3).map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        let b: Vec<BigRational> =
            rows.iter().map(|r| r.iter().zip(&x).map(|(p, &q)| p * rat(q)).sum()).collect();
        match solve(&rows, &b) {
            Solution::Unique(s) => prop_assert_eq!(s, x.iter().map(|&v| rat(v)).collect::<Vec<_>>()),
            Solution::Underdetermined(s) => {
                let back: Vec<BigRational> =
                    rows.iter().map(|r| r.iter().zip(&s).map(|(p, q)| p * q).sum()).collect();
                prop_assert_eq!(back, b);
            }
            Solution::Inconsistent => prop_assert!(false, "consistent system reported inconsistent"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn specialized_never_exceeds_exact(seed in any::<u64>(), which in 0usize..6) {
        let b = BUILTINS[which];
        let rule = LatticeRule::builtin(b.name).unwrap();
        let scheme = InitScheme::default_for(rule.stencil);
        let region = Region::new(3, 3);
        let coeffs = CoefficientGrid::GenericRandom { seed };
        let exact = degrees::exact_table(&rule, scheme, &coeffs, region).unwrap();
        let spec = degrees::degree_table_specialized(&rule, scheme, &coeffs, region, 1, seed).unwrap();
        for m in 0..3 {
            for n in 0..3 {
                prop_assert!(spec.get(m, n) <= exact.get(m, n), "{} at ({m},{n})", b.name);
            }
        }
    }

    #[test]
    fn specialized_tables_are_deterministic(seed in any::<u64>(), which in 0usize..6) {
        let name = BUILTINS[which].name;
        let coeffs = CoefficientGrid::GenericRandom { seed };
        let a = specialized(name, &coeffs, Region::new(5, 5), seed);
        let b = specialized(name, &coeffs, Region::new(5, 5), seed);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn degrees_grow_along_rows_and_columns(seed in any::<u64>(), which in 0usize..6) {
        let name = BUILTINS[which].name;
        for coeffs in [CoefficientGrid::Constant(3), CoefficientGrid::GenericRandom { seed }] {
            let t = specialized(name, &coeffs, Region::new(5, 5), seed);
            for m in 0..5 {
                for n in 0..5 {
                    if m + 1 < 5 {
                        prop_assert!(t.get(m, n) <= t.get(m + 1, n), "{name} column {n}");
                    }
                    if n + 1 < 5 && t.stencil == Stencil::Quad {
                        prop_assert!(t.get(m, n) <= t.get(m, n + 1), "{name} row {m}");
                    }
                }
            }
        }
    }

    #[test]
    fn corner_tables_are_symmetric(seed in any::<u64>()) {
        for name in quad_builtins() {
            for coeffs in [CoefficientGrid::Constant(3), CoefficientGrid::GenericRandom { seed }] {
                let t = specialized(name, &coeffs, Region::new(5, 5), seed);
                for m in 0..5 {
                    for n in 0..m {
                        prop_assert_eq!(t.get(m, n), t.get(n, m), "{} ({},{})", name, m, n);
                    }
                }
            }
        }
    }

    #[test]
    fn larger_regions_extend_smaller_ones(seed in any::<u64>(), which in 0usize..6) {
        let name = BUILTINS[which].name;
        let coeffs = CoefficientGrid::GenericRandom { seed };
        let small = specialized(name, &coeffs, Region::new(3, 3), seed);
        let large = specialized(name, &coeffs, Region::new(5, 4), seed);
        for m in 0..3 {
            for n in 0..3 {
                prop_assert_eq!(small.get(m, n), large.get(m, n));
            }
        }
    }

    #[test]
    fn analysis_never_panics_on_monotone_tables(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t = synthetic(5, 5, |_, _| 1);
        for m in 1..5 {
            for n in 1..5 {
                let floor = t.entries[m - 1][n].max(t.entries[m][n - 1]);
                t.entries[m][n] = floor + rng.gen_range(0..6);
            }
        }
        let report = growth::analyze(&t).unwrap();
        prop_assert!(report.entropy.is_none_or(|e| e.e >= 0.0));
    }
}

#[test]
fn polynomial_ring_rejects_foreign_variables() {
    let ring = ring();
    assert!(Polynomial::var(&ring, Variable::p(7)).is_err());
}
