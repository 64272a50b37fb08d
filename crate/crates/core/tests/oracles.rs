mod common;

use common::*;
use listdec::attack::{run_general_attack, GeneralOptions, Stage};
use listdec::bounds::{binomial, binomial_entropy_bounds, chernoff_tail};
use listdec::constructions::{random_code as draw_code, FamilyOptions, RandomCodeSpec, DEFAULT_CODE_CAP};
use listdec::fraction::frac;
use listdec::model::{Code, Symbol, Word};
use listdec::verifier::{exact_radius, is_list_decodable, DecodingMode, RadiusQuery, VerifierConfig};
use rand::Rng;

/// Exact `Pr[Bin(m, alpha) > x]`.
fn binomial_upper_tail(m: u64, alpha: f64, x: f64) -> f64 {
    let mut ln_pmf = m as f64 * (1.0 - alpha).ln();
    let mut tail = 0.0;
    for k in 0..=m {
        if k > 0 {
            ln_pmf += ((m - k + 1) as f64 / k as f64).ln() + (alpha / (1.0 - alpha)).ln();
        }
        if k as f64 > x {
            tail += ln_pmf.exp();
        }
    }
    tail
}

#[test]
fn chernoff_bound_dominates_exact_tail() {
    for (alpha, m, delta) in [(0.3, 200, 0.2), (0.5, 100, 0.5), (0.1, 1000, 0.3), (0.6, 50, 0.1), (0.25, 400, 1.0)] {
        let bound = chernoff_tail(alpha, m, delta).unwrap();
        let exact = binomial_upper_tail(m, alpha, (1.0 + delta) * alpha * m as f64);
        assert!(exact <= bound, "alpha={alpha} m={m} delta={delta}: exact {exact} > bound {bound}");
    }
}

#[test]
fn chernoff_bound_dominates_monte_carlo_tail() {
    let (alpha, m, delta) = (0.3, 120u64, 0.25);
    let trials = 100_000;
    let cut = (1.0 + delta) * alpha * m as f64;
    let mut r = rng(31);
    let hits = (0..trials).filter(|_| ((0..m).filter(|_| r.gen_bool(alpha)).count() as f64) > cut).count();
    let freq = hits as f64 / trials as f64;
    let exact = binomial_upper_tail(m, alpha, cut);
    let se = (exact * (1.0 - exact) / trials as f64).sqrt();
    assert!((freq - exact).abs() <= 5.0 * se, "empirical {freq} vs exact {exact}");
    assert!(freq <= chernoff_tail(alpha, m, delta).unwrap());
}

#[test]
fn binomial_matches_factorial_formula() {
    for n in 0..=30usize {
        for k in 0..=n {
            let direct = (1..=k as u128).fold(1u128, |acc, i| acc * (n as u128 + 1 - i) / i);
            assert_eq!(binomial(n, k), direct);
        }
    }
}

#[test]
fn binomial_ball_sum_matches_direct_count() {
    for n in 1..=16usize {
        for num in 0..=n {
            let alpha = num as f64 / n as f64;
            let b = binomial_entropy_bounds(n, alpha).unwrap();
            let count = (0u32..1 << n).filter(|x| x.count_ones() as usize <= num).count() as u128;
            assert_eq!(b.exact_sum, count, "n={n} r={num}");
        }
    }
}

/// Chi-square statistic of symbol counts against the uniform distribution.
fn chi_square(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expect = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum()
}

#[test]
fn random_code_symbols_are_uniform() {
    // 99.9% quantiles of chi-square with 3 and 15 degrees of freedom.
    for (q, n, rate, crit) in [(4u32, 10usize, frac(1, 2), 16.27), (16, 8, frac(1, 4), 37.70)] {
        let mut pooled = vec![0u64; q as usize];
        for seed in 0..5 {
            let spec = RandomCodeSpec { q, n, rate, eps: frac(0, 1), list_size: 2, seed };
            let code = draw_code(&spec, DEFAULT_CODE_CAP).unwrap();
            assert_eq!(code.len() as u128, spec.target_size().unwrap());
            let mut counts = vec![0u64; q as usize];
            for w in code.words() {
                for &s in w.symbols() {
                    counts[s as usize] += 1;
                    pooled[s as usize] += 1;
                }
            }
            let stat = chi_square(&counts);
            assert!(stat < crit, "q={q} seed={seed}: chi-square {stat} >= {crit}");
        }
        assert!(chi_square(&pooled) < crit);
    }
}

#[test]
fn random_code_coordinates_are_uniform() {
    let spec = RandomCodeSpec { q: 4, n: 10, rate: frac(1, 2), eps: frac(0, 1), list_size: 2, seed: 77 };
    let code = draw_code(&spec, DEFAULT_CODE_CAP).unwrap();
    for i in 0..code.n() {
        let mut counts = vec![0u64; 4];
        for w in code.words() {
            counts[w.symbols()[i] as usize] += 1;
        }
        // Bonferroni over 10 coordinates at 0.1%: chi-square(3) quantile at 0.9999.
        assert!(chi_square(&counts) < 21.11, "coordinate {i}: {counts:?}");
    }
}

/// Largest `t` such that no `L+1` codewords fit in a ball of radius `t`, by exhaustion.
fn brute_radius(code: &Code, l: usize, average: bool) -> usize {
    (0..=code.n()).rev().find(|&t| brute_decodable(code, l, t, (l + 1) * t, average)).unwrap_or(0)
}

#[test]
fn exact_radius_matches_exhaustion() {
    let mut r = rng(404);
    let config = VerifierConfig::default();
    for _ in 0..200 {
        let q = r.gen_range(2..=3u32);
        let n = r.gen_range(2..=5usize);
        let m = r.gen_range(3..=7usize.min(q.pow(n as u32) as usize));
        let code = random_code(&mut r, q, n, m);
        for l in [1, 2] {
            for (mode, average) in [(DecodingMode::Ordinary, false), (DecodingMode::AverageRadius, true)] {
                let got = exact_radius(&code, l, mode, &config).unwrap();
                let want = if code.len() <= l { n } else { brute_radius(&code, l, average) };
                assert_eq!(got.t_star, want, "q={q} n={n} L={l} {mode}");
                if let Some(v) = &got.witness {
                    let ds: Vec<usize> =
                        v.indices.iter().map(|&i| dist(v.center.symbols(), code.word(i).symbols())).collect();
                    let t = got.t_star + 1;
                    assert!(if average { ds.iter().sum::<usize>() <= (l + 1) * t } else { ds.iter().all(|&d| d <= t) });
                }
            }
        }
    }
}

#[test]
fn full_binary_space_of_length_two_has_radius_zero() {
    let code = full_space(2, 2);
    let r = exact_radius(&code, 1, DecodingMode::Ordinary, &VerifierConfig::default()).unwrap();
    assert_eq!(r.t_star, 0);
}

#[test]
fn verifier_agrees_at_non_integer_radii() {
    let mut r = rng(505);
    let config = VerifierConfig::default();
    for _ in 0..200 {
        let n = r.gen_range(2..=5usize);
        let m = r.gen_range(3..=6);
        let code = random_code(&mut r, 3, n, m);
        let (num, den) = (r.gen_range(0..=10i128), r.gen_range(1..=10i128));
        if num > den {
            continue;
        }
        let p = frac(num, den);
        let radius = (num as usize * n) / den as usize;
        let budget = (3 * num as usize * n) / den as usize;
        let got = is_list_decodable(&code, &RadiusQuery::average(p, 2).unwrap(), &config).unwrap();
        assert_eq!(got.is_decodable(), brute_decodable(&code, 2, radius, budget, true));
        let got = is_list_decodable(&code, &RadiusQuery::ordinary(p, 2).unwrap(), &config).unwrap();
        assert_eq!(got.is_decodable(), brute_decodable(&code, 2, radius, budget, false));
    }
}

/// Every partner of the zero word gets its own value on `I_0`, so no two collide.
#[test]
fn pigeonhole_failure_is_consistent_with_counting() {
    let plant = general_plant(5);
    let mut words: Vec<Vec<Symbol>> = plant.code.words().iter().map(|w| w.symbols().to_vec()).collect();
    let d0 = plant.params.d0;
    for (j, w) in words.iter_mut().enumerate().skip(1).take(14) {
        w[0] = j as Symbol;
    }
    let code = Code::new(16, 60, words.into_iter().map(Word::new).collect()).unwrap();
    let report =
        run_general_attack(&code, &plant.params, &GeneralOptions { seed: 5, family: FamilyOptions::default() })
            .unwrap();
    assert_eq!(report.failed_stage(), Some(Stage::PigeonholeI0), "{}", report.summary());
    let diag = report.general.as_ref().unwrap();
    assert_eq!(diag.pigeonhole_consistent, Some(true));
    assert!(report.counters.class_sizes.iter().all(|&s| s < report.counters.need));
    let need = report.counters.need as f64;
    assert!(need * 16f64.powi(d0 as i32) >= report.counters.best_fc as f64);
}

#[test]
fn general_attack_recovers_the_planted_pattern() {
    for seed in 0..3 {
        let plant = general_plant(seed);
        assert!(plant.family.len() >= plant.params.union_arity * plant.params.list_size);
        let report =
            run_general_attack(&plant.code, &plant.params, &GeneralOptions { seed, family: FamilyOptions::default() })
                .unwrap();
        let cert = report.certificate().unwrap_or_else(|| panic!("{}", report.summary()));
        assert_eq!(cert.codewords[0], 0);
        assert_eq!(cert.threshold, plant.params.pn);
        assert!(cert.distances[1..].iter().all(|&d| d <= plant.params.partner_bound()));
        assert!(report.general.as_ref().unwrap().fc_exceeds_half);
    }
}
