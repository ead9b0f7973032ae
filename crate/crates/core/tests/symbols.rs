use hecke::lattice::{enumerate, Filter};
use hecke::rings::{gcd, EisInt, GaussInt, QuadInt};
use hecke::symbols::{
    symbol_bruteforce, symbol_by_factoring, symbol_fast, unit_and_ramified_supplement, PowerResidue,
    SymbolValue,
};
use proptest::prelude::*;

fn primary<R: QuadInt>(max_norm: i64) -> Vec<R> {
    enumerate::<R>(max_norm, Filter::Primary).collect()
}

fn residues<R: QuadInt>(n: R) -> impl Iterator<Item = R> {
    let r = (n.norm() as f64).sqrt() as i64 + 1;
    (-r..=r).flat_map(move |a| (-r..=r).map(move |b| R::new(a, b)))
}

fn agrees_with_oracle<R: PowerResidue>(order: u8, max_norm: i64) {
    for n in primary::<R>(max_norm) {
        for a in residues(n) {
            assert_eq!(
                symbol_fast(order, a, n).unwrap(),
                symbol_by_factoring(order, a, n).unwrap(),
                "({a}/{n})_{order}"
            );
        }
    }
}

#[test]
fn fast_symbol_matches_oracle_on_small_moduli() {
    agrees_with_oracle::<GaussInt>(2, 120);
    agrees_with_oracle::<GaussInt>(4, 120);
    agrees_with_oracle::<EisInt>(3, 120);
}

#[test]
fn zero_exactly_when_not_coprime() {
    fn check<R: PowerResidue>(order: u8) {
        for n in primary::<R>(150) {
            for a in residues(n) {
                let unit = gcd(a, n).unwrap().is_unit();
                assert_eq!(symbol_fast(order, a, n).unwrap().is_zero(), !unit, "({a}/{n})");
            }
        }
    }
    check::<GaussInt>(4);
    check::<EisInt>(3);
}

#[test]
fn supplements_match_power_congruence() {
    fn check<R: PowerResidue>(order: u8) {
        for p in enumerate::<R>(3000, Filter::PrimaryPrime) {
            let (unit, ram) = unit_and_ramified_supplement(order, p).unwrap();
            assert_eq!(unit, symbol_bruteforce(order, R::units()[1], p).unwrap(), "unit at {p}");
            assert_eq!(ram, symbol_bruteforce(order, R::ramified(), p).unwrap(), "ramified at {p}");
        }
    }
    check::<GaussInt>(4);
    check::<GaussInt>(2);
    check::<EisInt>(3);
}

/// `(alpha, beta, primes checked)` from the fixture.
fn cubic_fixture() -> (i64, i64, usize) {
    let text = include_str!("fixtures/cubic_ramified_supplement.txt");
    let mut vals = std::collections::HashMap::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let (k, v) = line.split_once('=').expect("key = value");
        vals.insert(k.trim().to_string(), v.trim().parse::<i64>().expect("integer"));
    }
    (vals["alpha"], vals["beta"], vals["primes"] as usize)
}

#[test]
fn cubic_ramified_supplement_calibration() {
    // candidates e = (alpha (a-1) + beta b)/3 for ((1-w)/n)_3 = w^e
    let primes: Vec<EisInt> = enumerate::<EisInt>(10_000, Filter::PrimaryPrime).collect();
    let mut survivors = Vec::new();
    for alpha in 0..3 {
        for beta in 0..3 {
            let fits = primes.iter().all(|p| {
                let e = (alpha * (p.a() - 1) + beta * p.b()) / 3;
                symbol_bruteforce(3, EisInt::ramified(), *p).unwrap() == SymbolValue::root(3, e)
            });
            if fits {
                survivors.push((alpha, beta));
            }
        }
    }
    let (alpha, beta, count) = cubic_fixture();
    assert_eq!(survivors, vec![(alpha, beta)]);
    assert_eq!(primes.len(), count);
    for p in &primes {
        let (_, ram) = unit_and_ramified_supplement(3, *p).unwrap();
        assert_eq!(ram, SymbolValue::root(3, (alpha * (p.a() - 1) + beta * p.b()) / 3));
    }
}

fn gauss_primary() -> impl Strategy<Value = GaussInt> {
    (-300i64..300, -300i64..300)
        .prop_filter_map("primary", |(a, b)| {
            let z = GaussInt::new(a, b);
            hecke::rings::to_primary(z).ok().map(|(_, p)| p).filter(|p| *p != GaussInt::one())
        })
}

fn eis_primary() -> impl Strategy<Value = EisInt> {
    (-300i64..300, -300i64..300)
        .prop_filter_map("primary", |(a, b)| {
            let z = EisInt::new(a, b);
            hecke::rings::to_primary(z).ok().map(|(_, p)| p).filter(|p| *p != EisInt::one())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn multiplicative_in_the_numerator(a in -500i64..500, b in -500i64..500, c in -500i64..500, d in -500i64..500, n in gauss_primary()) {
        let (x, y) = (GaussInt::new(a, b), GaussInt::new(c, d));
        for order in [2, 4] {
            prop_assert_eq!(symbol_fast(order, x * y, n).unwrap(), symbol_fast(order, x, n).unwrap() * symbol_fast(order, y, n).unwrap());
        }
    }

    #[test]
    fn multiplicative_in_the_modulus(a in -500i64..500, b in -500i64..500, m in eis_primary(), n in eis_primary()) {
        let x = EisInt::new(a, b);
        prop_assert_eq!(symbol_fast(3, x, m * n).unwrap(), symbol_fast(3, x, m).unwrap() * symbol_fast(3, x, n).unwrap());
    }

    #[test]
    fn periodic_modulo_the_modulus(a in -500i64..500, b in -500i64..500, c in -50i64..50, d in -50i64..50, n in gauss_primary(), m in eis_primary()) {
        let x = GaussInt::new(a, b);
        prop_assert_eq!(symbol_fast(4, x + GaussInt::new(c, d) * n, n).unwrap(), symbol_fast(4, x, n).unwrap());
        let y = EisInt::new(a, b);
        prop_assert_eq!(symbol_fast(3, y + EisInt::new(c, d) * m, m).unwrap(), symbol_fast(3, y, m).unwrap());
    }

    #[test]
    fn reciprocity(m in gauss_primary(), n in gauss_primary(), p in eis_primary(), q in eis_primary()) {
        if gcd(m, n).unwrap().is_unit() {
            let sign = if ((m.norm() - 1) / 4) * ((n.norm() - 1) / 4) % 2 == 0 { 0 } else { 2 };
            prop_assert_eq!(symbol_fast(4, m, n).unwrap(), symbol_fast(4, n, m).unwrap() * SymbolValue::root(4, sign));
            prop_assert_eq!(symbol_fast(2, m, n).unwrap(), symbol_fast(2, n, m).unwrap());
        }
        if gcd(p, q).unwrap().is_unit() {
            prop_assert_eq!(symbol_fast(3, p, q).unwrap(), symbol_fast(3, q, p).unwrap());
        }
    }

    #[test]
    fn quadratic_is_square_of_quartic(a in -500i64..500, b in -500i64..500, n in gauss_primary()) {
        let x = GaussInt::new(a, b);
        prop_assert_eq!(symbol_fast(4, x, n).unwrap().pow(2).exponent().map(|e| e / 2), symbol_fast(2, x, n).unwrap().exponent());
    }
}
