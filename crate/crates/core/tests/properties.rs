mod common;

use common::oracles::{q, tables_match};
use proptest::prelude::*;
use stocon::io::{parse_automaton, write_automaton};
use stocon::randomization::kleisli_extension;
use stocon::testing::Generator;
use stocon::{check_power_friendship, factor_automaton, is_congruence, Distribution, Rational, Weight};

fn lambda() -> impl Strategy<Value = Rational> {
    (0i64..=8).prop_map(|k| q(k, 8))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn push_forward_is_functorial(seed in any::<u64>(), n in 1usize..7, m in 1usize..5, k in 1usize..4) {
        let mut g = Generator::new(seed);
        let (m, k) = (m.min(n), k.min(m.min(n)));
        let d = g.distribution(n, false);
        let f = g.surjection(n, m);
        let h = g.surjection(m, k);
        let composite: Vec<usize> = f.iter().map(|&i| h[i]).collect();
        let once = d.push_forward(&f).unwrap();
        prop_assert_eq!(once.push_forward(&h).unwrap(), d.push_forward(&composite).unwrap());
        prop_assert_eq!(once.mass(), d.mass());
        let id: Vec<usize> = (0..n).collect();
        prop_assert_eq!(d.push_forward(&id).unwrap(), d);
    }

    #[test]
    fn kleisli_extension_is_linear(seed in any::<u64>(), l in lambda()) {
        let mut g = Generator::new(seed);
        let (nf, nh) = (g.range(1, 5), g.range(1, 5));
        let rows = g.relation(nf, nh, false);
        let mu = g.distribution(nf, false);
        let nu = g.distribution(nf, false);
        let rest = q(1, 1) - l.clone();
        let mut mix = mu.scaled(&l);
        mix.add_scaled(&nu, &rest);
        let mut expected = kleisli_extension(&rows, &mu).unwrap().scaled(&l);
        expected.add_scaled(&kleisli_extension(&rows, &nu).unwrap(), &rest);
        prop_assert_eq!(kleisli_extension(&rows, &mix).unwrap(), expected);
        let points: Vec<Distribution> = (0..nf).map(|x| kleisli_extension(&rows, &Distribution::point(x)).unwrap()).collect();
        prop_assert_eq!(points, rows);
    }

    #[test]
    fn automaton_files_round_trip(seed in any::<u64>(), full in any::<bool>()) {
        let mut g = Generator::new(seed);
        let (nx, ny, nz) = (g.range(1, 3), g.range(1, 3), g.range(1, 4));
        let a = g.automaton(nx, ny, nz, full);
        let once = write_automaton(&a);
        let back = parse_automaton(&once, "round-trip").unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(write_automaton(&back), once);
    }

    #[test]
    fn factor_rows_do_not_depend_on_representatives(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let (a, c) = g.congruent((3, 3, 4), false, false);
        let fr = factor_automaton(&a, &c).unwrap();
        let m = fr.canonical();
        prop_assert!(tables_match(&a, fr.factor(), m.f(), m.g(), m.h()));
    }

    #[test]
    fn power_one_restates_the_congruence(seed in any::<u64>()) {
        let mut g = Generator::new(seed);
        let a = g.automaton(2, 2, 3, false);
        let (a, c) = if seed % 2 == 0 {
            g.congruent((2, 2, 3), false, false)
        } else {
            let c = stocon::CongruenceTriple::new(g.partition(2, 2), g.partition(2, 2), g.partition(3, 3));
            (a, c)
        };
        let holds = is_congruence(&a, &c).unwrap().friendly();
        match check_power_friendship(&a, &c, 1, None) {
            Ok(r) => prop_assert!(holds && r.friendly()),
            Err(stocon::Error::NotACongruence(_)) => prop_assert!(!holds),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}

#[test]
fn weights_print_as_fractions() {
    assert_eq!(q(4, 8).to_fraction_string(), "1/2");
    assert_eq!(q(1, 1).to_fraction_string(), "1/1");
}
