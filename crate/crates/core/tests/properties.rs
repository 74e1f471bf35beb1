use proptest::prelude::*;

use schottky_lab::cli::format_float;
use schottky_lab::coding::{BranchCocycle, CylinderTable, SchottkyScheme, Symbol, Word};
use schottky_lab::geometry::{angle_distance, Complex, MoebiusMap};
use schottky_lab::transfer::pressure;

fn complex() -> impl Strategy<Value = Complex> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    (0u8..4, prop::collection::vec(0u8..3, 0..max_len)).prop_map(|(first, steps)| {
        let mut symbols = vec![Symbol(first)];
        for d in steps {
            let last = symbols.last().unwrap().bar().0;
            symbols.push(Symbol(if d < last { d } else { d + 1 }));
        }
        Word::new(symbols).unwrap()
    })
}

proptest! {
    #[test]
    fn inverse_cancels(a in complex(), b in complex(), c in complex(), d in complex()) {
        prop_assume!((a * d - b * c).norm() > 0.1);
        let m = MoebiusMap::new(a, b, c, d).unwrap();
        prop_assert!(m.compose(&m.inverse()).approx_eq(&MoebiusMap::identity(), 1e-9));
    }

    #[test]
    fn conjugation_keeps_length_and_angle(w in word(6), c in complex(), d in complex()) {
        let scheme = SchottkyScheme::fixture_b();
        prop_assume!(w.is_cyclically_reduced());
        let h = MoebiusMap::new(Complex::new(1.0, 0.0), c, Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)).unwrap()
            .compose(&MoebiusMap::new(Complex::new(1.0, 0.0), Complex::new(0.0, 0.0), d * 0.1, Complex::new(1.0, 0.0)).unwrap());
        let g = scheme.word_map(&w);
        let before = g.loxodromic_data().unwrap();
        let after = g.conjugate_by(&h).loxodromic_data().unwrap();
        prop_assert!((before.translation_length - after.translation_length).abs() < 1e-8);
        prop_assert!(angle_distance(before.rotation_angle, after.rotation_angle) < 1e-8);
    }

    #[test]
    fn word_inverse_is_an_involution(w in word(10)) {
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert_eq!(Word::parse(&w.to_string()).unwrap(), w);
    }

    #[test]
    fn constant_shift_pressure(c in 0.1..3.0f64, s in 0.0..2.0f64) {
        let table = CylinderTable::from_cocycles(4, 1, vec![BranchCocycle::new(c, 0.0); 4]).unwrap();
        prop_assert!((pressure(&table, s).unwrap() - (3f64.ln() - s * c)).abs() < 1e-12);
    }

    #[test]
    fn floats_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
    }
}
