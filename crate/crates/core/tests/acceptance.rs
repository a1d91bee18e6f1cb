//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//! Instance counts, sizes and time limits are fixed below.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::instances::{branching_tree, friendly_relation};
use common::oracles::*;
use stocon::streams::decorate_along;
use stocon::testing::Generator;
use stocon::{
    check_power_friendship, coarsest_state_congruence, decorate_tree, factor_automaton, is_congruence, is_friendly,
    is_morphism, is_random_friend, kernel_congruence, kernel_partition, refactor_isomorphism, stepwise_reduction,
    word_behavior, Automaton, CongruenceTriple, Error, Morphism, Partition, ReductionOrder,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn as_map(d: &stocon::SubDistribution<Vec<usize>, stocon::Rational>) -> BTreeMap<Vec<usize>, stocon::Rational> {
    d.iter().map(|(w, p)| (w.clone(), p.clone())).collect()
}

/// Relations with `|F|, |H| ≤ 5` and at most 4 blocks per partition; half
/// of them friendly by construction.
fn friendship_instances() -> Vec<(Vec<stocon::Distribution>, Partition, Partition)> {
    let mut g = Generator::new(1001);
    (0..200)
        .map(|i| {
            let (nf, nh) = (g.range(1, 5), g.range(1, 5));
            let xi = g.partition(nf, 4);
            let theta = g.partition(nh, 4);
            let rows = if i % 2 == 0 { friendly_relation(&mut g, &xi, &theta) } else { g.relation(nf, nh, false) };
            (rows, xi, theta)
        })
        .collect()
}

fn c1_friendship_oracle() -> Outcome {
    let mut friendly = 0;
    for (i, (rows, xi, theta)) in friendship_instances().iter().enumerate() {
        let lib = is_friendly(rows, xi, theta).map_err(|e| e.to_string())?.friendly();
        ensure(lib == brute_friendly(rows, xi, theta), || format!("instance {i} disagrees"))?;
        friendly += lib as usize;
    }
    Ok(format!("200 instances, {friendly} friendly"))
}

fn c2_integral_characterization() -> Outcome {
    let mut g = Generator::new(1002);
    let mut separated = 0;
    for (i, (rows, xi, theta)) in friendship_instances().iter().enumerate() {
        let friendly = is_friendly(rows, xi, theta).map_err(|e| e.to_string())?.friendly();
        let mut integrals_agree = true;
        for _ in 0..20 {
            let values: Vec<_> =
                (0..theta.num_blocks()).map(|_| q(g.range(0, 2000) as i64 - 1000, g.range(1, 60) as i64)).collect();
            let f: Vec<_> = (0..theta.len()).map(|h| values[theta.class_of(h)].clone()).collect();
            for a in 0..rows.len() {
                for b in a + 1..rows.len() {
                    if xi.related(a, b) && integral(&rows[a], &f) != integral(&rows[b], &f) {
                        integrals_agree = false;
                    }
                }
            }
        }
        ensure(friendly == integrals_agree, || {
            format!("instance {i}: friendly={friendly}, integrals agree={integrals_agree}")
        })?;
        separated += !friendly as usize;
    }
    Ok(format!("200 instances x 20 functions, {separated} separated by an integral"))
}

fn c3_kernel_congruences() -> Outcome {
    let mut g = Generator::new(1003);
    let mut enumerated = 0;
    for i in 0..100 {
        let (nx, ny, nz) = (g.range(1, 5), g.range(1, 5), g.range(1, 5));
        let (kx, ky, kz) = (g.range(1, nx), g.range(1, ny), g.range(1, nz));
        let target = g.automaton(kx, ky, kz, i % 2 == 0);
        let (f, gy, h) = (g.surjection(nx, kx), g.surjection(ny, ky), g.surjection(nz, kz));
        let source = g.refine(&target, (nx, ny, nz), (&f, &gy, &h), false);
        let m = Morphism::new(source.clone(), target, f, gy, h).map_err(|e| format!("instance {i}: {e}"))?;
        let c = kernel_congruence(&m).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(is_congruence(&source, &c).map_err(|e| e.to_string())?.friendly(), || {
            format!("instance {i}: kernel is not a congruence")
        })?;
        if c.gamma.num_blocks() * c.beta.num_blocks() <= 12 {
            enumerated += 1;
            ensure(brute_congruence(&source, &c.alpha, &c.beta, &c.gamma), || {
                format!("instance {i}: oracle rejects the kernel")
            })?;
        }
    }
    Ok(format!("100 morphisms, {enumerated} also checked by enumeration"))
}

fn factor_is_sound(a: &Automaton, c: &CongruenceTriple) -> Result<(), String> {
    let fr = factor_automaton(a, c).map_err(|e| e.to_string())?;
    let m = fr.canonical();
    ensure(is_morphism(a, fr.factor(), m.f(), m.g(), m.h()).map_err(|e| e.to_string())?.holds(), || {
        "canonical triple is not a morphism".into()
    })?;
    ensure(tables_match(a, fr.factor(), m.f(), m.g(), m.h()), || "factor rows depend on representatives".into())?;
    let kernel = (kernel_partition(m.f()), kernel_partition(m.g()), kernel_partition(m.h()));
    ensure(kernel == (c.alpha.clone(), c.beta.clone(), c.gamma.clone()), || {
        "canonical kernels differ from the congruence".into()
    })
}

fn c4_factor_soundness() -> Outcome {
    let mut g = Generator::new(1004);
    let mut found = 0;
    for i in 0..100 {
        let (nx, ny, nz) = (g.range(1, 4), g.range(1, 4), g.range(1, 5));
        let a = g.automaton(nx, ny, nz, i % 3 == 0);
        let (alpha, beta) = if i % 2 == 0 {
            (Partition::discrete(nx), Partition::discrete(ny))
        } else {
            (g.partition(nx, nx), g.partition(ny, ny))
        };
        let seed = g.partition(nz, 2);
        match coarsest_state_congruence(&a, &alpha, &beta, &seed) {
            Ok(gamma) => {
                found += 1;
                factor_is_sound(&a, &CongruenceTriple::new(alpha, beta, gamma))
                    .map_err(|e| format!("instance {i}: {e}"))?;
            }
            Err(Error::NotACongruence(_)) => {}
            Err(e) => return Err(format!("instance {i}: {e}")),
        }
    }
    let mut g = Generator::new(1044);
    for i in 0..100 {
        let (a, c) = g.congruent((3, 3, 4), false, false);
        let gamma =
            coarsest_state_congruence(&a, &c.alpha, &c.beta, &Partition::single_block(4)).map_err(|e| e.to_string())?;
        found += 1;
        factor_is_sound(&a, &CongruenceTriple::new(c.alpha, c.beta, gamma))
            .map_err(|e| format!("congruent instance {i}: {e}"))?;
    }
    Ok(format!("{found} congruences from 200 automata"))
}

fn c5_coarsest_property() -> Outcome {
    let mut g = Generator::new(1005);
    let mut nontrivial = 0;
    for i in 0..50 {
        let (nx, ny, nz) = (g.range(1, 2), g.range(1, 2), g.range(1, 4));
        let (a, alpha, beta) = if i % 2 == 0 {
            let (a, c) = g.congruent((nx, ny, nz), i % 4 == 0, false);
            (a, c.alpha, c.beta)
        } else {
            (g.automaton(nx, ny, nz, false), g.partition(nx, 2), g.partition(ny, 2))
        };
        let seed = if i % 3 == 0 { g.partition(nz, 2) } else { Partition::single_block(nz) };
        let expected = brute_coarsest(&a, &alpha, &beta, &seed).map_err(|e| format!("instance {i}: {e}"))?;
        let got = match coarsest_state_congruence(&a, &alpha, &beta, &seed) {
            Ok(gamma) => Some(gamma),
            Err(Error::NotACongruence(_)) => None,
            Err(e) => return Err(format!("instance {i}: {e}")),
        };
        ensure(got == expected, || format!("instance {i}: got {got:?}, exhaustive search {expected:?}"))?;
        nontrivial += got.is_some_and(|p| !p.is_discrete()) as usize;
    }
    Ok(format!("50 automata, {nontrivial} with a non-discrete coarsest relation"))
}

fn c6_power_friendship() -> Outcome {
    let mut g = Generator::new(1006);
    for i in 0..50 {
        let (a, c) = g.congruent((2, 2, 3), i % 2 == 0, false);
        let mu = g.distribution(3, i % 2 == 0);
        for n in 1..=3 {
            let r = check_power_friendship(&a, &c, n, Some(&mu)).map_err(|e| format!("instance {i}: {e}"))?;
            ensure(r.friendly(), || format!("instance {i}, n = {n}: {r:?}"))?;
        }
    }
    Ok("50 instances, n = 1, 2, 3".into())
}

fn c7_projective_consistency() -> Outcome {
    let mut g = Generator::new(1007);
    for i in 0..50 {
        let (nx, ny, nz) = (g.range(1, 3), g.range(1, 3), g.range(1, 3));
        let a = g.automaton(nx, ny, nz, true);
        let mu = g.distribution(nz, true);
        let tau: Vec<usize> = (0..4).map(|_| g.range(0, nx - 1)).collect();
        let laws: Vec<_> = (1..=4)
            .map(|n| word_behavior(&a, &mu, &tau[..n]).map(|d| as_map(&d)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for m in 1..=4 {
            ensure(laws[m - 1] == path_behavior(&a, &mu, &tau[..m]), || {
                format!("instance {i}: length {m} differs from path sums")
            })?;
            for n in 1..m {
                ensure(marginal(&laws[m - 1], n) == laws[n - 1], || format!("instance {i}: marginal {m} -> {n}"))?;
            }
        }
    }
    Ok("50 instances, all n < m <= 4".into())
}

fn c8_tree_well_definedness() -> Outcome {
    let mut g = Generator::new(1008);
    let mut shared = 0;
    for i in 0..30 {
        let (nx, ny, nz) = (g.range(2, 3), g.range(1, 3), g.range(1, 3));
        let a = g.automaton(nx, ny, nz, true);
        let mu = g.distribution(nz, true);
        let tree = branching_tree(&mut g, nx);
        let mut prefixes = std::collections::BTreeSet::new();
        for p in tree.paths() {
            for n in 1..=4 {
                if let Some(v) = p.truncate(n) {
                    prefixes.insert(v);
                }
            }
        }
        for v in prefixes {
            let containing = tree.containing(&v);
            if containing.len() < 2 {
                continue;
            }
            shared += 1;
            let at = decorate_tree(&a, &mu, &tree, &v).map_err(|e| e.to_string())?;
            for &k in &containing {
                let along = decorate_along(&a, &mu, &tree.paths()[k], &v).map_err(|e| e.to_string())?;
                ensure(along == at, || format!("tree {i}: prefix {v:?} depends on the path"))?;
            }
            ensure(as_map(&at) == path_behavior(&a, &mu, &v), || {
                format!("tree {i}: prefix {v:?} differs from the black box")
            })?;
        }
    }
    ensure(shared > 0, || "no shared prefixes generated".into())?;
    Ok(format!("30 trees, {shared} shared prefixes"))
}

fn c9_two_step_factoring() -> Outcome {
    let mut g = Generator::new(1009);
    for i in 0..50 {
        let (a, c, c2) = g.stacked((4, 3, 4), i % 2 == 0);
        let r = refactor_isomorphism(&a, &c, &c2).map_err(|e| format!("instance {i}: {e}"))?;
        let (fw, bw) = (&r.forward, &r.backward);
        let inverse = fw.then(bw).map_err(|e| e.to_string())?.is_identity()
            && bw.then(fw).map_err(|e| e.to_string())?.is_identity();
        ensure(inverse, || format!("instance {i}: maps are not mutually inverse"))?;
        ensure(tables_match(r.direct.factor(), r.iterated.factor(), fw.f(), fw.g(), fw.h()), || {
            format!("instance {i}: forward relabeling changes entries")
        })?;
        ensure(tables_match(r.iterated.factor(), r.direct.factor(), bw.f(), bw.g(), bw.h()), || {
            format!("instance {i}: backward relabeling changes entries")
        })?;
    }
    let mut g = Generator::new(1090);
    for i in 0..50 {
        let (a, c) = g.congruent((3, 3, 4), i % 2 == 0, true);
        let direct = factor_automaton(&a, &c).map_err(|e| e.to_string())?;
        for order in [ReductionOrder::StatesFirst, ReductionOrder::IoFirst] {
            let s = stepwise_reduction(&a, &c, order).map_err(|e| format!("instance {i} {order:?}: {e}"))?;
            let t = &s.to_direct;
            ensure(t.is_injective() && t.target() == direct.factor(), || {
                format!("instance {i} {order:?}: not onto the direct factor")
            })?;
            ensure(tables_match(s.result.factor(), direct.factor(), t.f(), t.g(), t.h()), || {
                format!("instance {i} {order:?}: tables differ")
            })?;
            let m = s.result.canonical();
            let kernels =
                CongruenceTriple::new(kernel_partition(m.f()), kernel_partition(m.g()), kernel_partition(m.h()));
            ensure(kernels == c, || format!("instance {i} {order:?}: composite maps have the wrong kernel"))?;
        }
    }
    Ok("50 stacked pairs, 50 stepwise instances in both orders".into())
}

fn c10_randomization_collapse() -> Outcome {
    let mut checked = 0;
    let mut g = Generator::new(1010);
    for nf in 1..=3 {
        for nh in 1..=3 {
            let xis = all_partitions(nf);
            let zetas = all_partitions(nh);
            for xi in &xis {
                for zeta in &zetas {
                    let mut relations = vec![g.relation(nf, nh, false), g.relation(nf, nh, true)];
                    relations.push(friendly_relation(&mut g, xi, zeta));
                    for rows in &relations {
                        let rf = is_random_friend(rows, xi, zeta).map_err(|e| e.to_string())?.random_friend();
                        let fr = is_friendly(rows, xi, zeta).map_err(|e| e.to_string())?.friendly();
                        ensure(rf == fr && fr == brute_friendly(rows, xi, zeta), || {
                            format!("|F|={nf} |H|={nh}: {xi:?} {zeta:?}")
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    for i in 0..100 {
        let (nf, nh) = (g.range(4, 6), g.range(4, 6));
        let xi = g.partition(nf, 3);
        let zeta = g.partition(nh, 4);
        let rows = if i % 2 == 0 { friendly_relation(&mut g, &xi, &zeta) } else { g.relation(nf, nh, false) };
        let rf = is_random_friend(&rows, &xi, &zeta).map_err(|e| e.to_string())?.random_friend();
        let fr = is_friendly(&rows, &xi, &zeta).map_err(|e| e.to_string())?.friendly();
        ensure(rf == fr, || format!("random instance {i} disagrees"))?;
        checked += 1;
    }
    Ok(format!("{checked} relations"))
}

fn c11_cli_golden_files() -> Outcome {
    let cases = common::cases();
    for case in &cases {
        common::check_case(case)?;
    }
    Ok(format!("{} reports", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("friendship oracle equivalence", 5, c1_friendship_oracle),
        ("integral characterization", 5, c2_integral_characterization),
        ("kernel congruences", 10, c3_kernel_congruences),
        ("factor soundness", 10, c4_factor_soundness),
        ("coarsest property", 30, c5_coarsest_property),
        ("power friendship", 30, c6_power_friendship),
        ("projective consistency", 30, c7_projective_consistency),
        ("tree well-definedness", 10, c8_tree_well_definedness),
        ("two-step factoring", 30, c9_two_step_factoring),
        ("randomization collapse", 30, c10_randomization_collapse),
        ("CLI golden files", 5, c11_cli_golden_files),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= Duration::from_secs(limit) {
                Ok(detail)
            } else {
                Err(format!("{detail}, but over the time limit"))
            }
        });
        let (verdict, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {verdict} {name}: {detail} ({:.2} s, limit {limit} s)", i + 1, elapsed.as_secs_f64());
    }
    if failed == 0 {
        println!("acceptance: all 11 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 11 criteria fail");
        ExitCode::FAILURE
    }
}
