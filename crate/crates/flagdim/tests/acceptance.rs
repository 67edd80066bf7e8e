//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible under `cargo test --test acceptance -- --nocapture`).
//!
//! Every expected value below was re-derived with an independent oracle
//! before being frozen: flag dimensions against pair counting over block
//! compositions, Poincare coefficients against minimal coset-representative
//! lengths in S_n, double cosets against an exhaustive orbit scan, and the
//! equivalence claims against full field-state enumeration.

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::time::{Duration, Instant};

use flagdim::arith::{gcd, AlgebraClass};
use flagdim::cdim::{cdim, CdimQuery};
use flagdim::flags::{
    decompose_primary_variety, equivalent, reduce_flag, FlagSpec, VarietyExpr,
};
use flagdim::motive::{middle_chow_decomposition, poincare_polynomial, verify_rank_identity};
use flagdim::parity::{
    certify_incompressible, even_degree_ch0, flag_summand_parity, verify_certificates, Verdict,
};
use flagdim::weyl::{
    associated_subset, brute_force_double_cosets, coset_representative, RootSubset,
};

fn criterion<F: FnOnce() + UnwindSafe>(id: u32, name: &str, body: F) {
    let outcome = catch_unwind(body);
    match &outcome {
        Ok(()) => println!("ACCEPTANCE {id} ({name}): PASS"),
        Err(_) => println!("ACCEPTANCE {id} ({name}): FAIL"),
    }
    if let Err(cause) = outcome {
        resume_unwind(cause);
    }
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    (2..=limit).filter(|&n| flagdim::arith::is_prime(n)).collect()
}

fn distinct_prime_count(mut n: u64) -> usize {
    let mut count = 0;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            count += 1;
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        count += 1;
    }
    count
}

fn is_squarefree(n: u64) -> bool {
    let a = AlgebraClass::with_index(n).unwrap();
    a.index().factors().values().all(|&e| e == 1)
}

fn query(index: u64, dims: &[u64], p: u64, char_zero: bool) -> CdimQuery {
    CdimQuery {
        algebra: AlgebraClass::with_index(index).unwrap(),
        flag: FlagSpec::new(index, dims.to_vec()).unwrap(),
        p,
        char_zero,
    }
}

/// Criterion 1: for a in 1..=4, certifying X_e(A) with ind A = 2^(a+1) and
/// e = 2^a returns incompressible with cdim chain (4^a, 4^a, 4^a), each
/// run under one second. The certify subcommand must report the same.
#[test]
fn acceptance_1_theorem_reproduction() {
    criterion(1, "theorem reproduction", || {
        for a in 1..=4u32 {
            let e = 2u64.pow(a);
            let algebra = AlgebraClass::with_index(2 * e).unwrap();
            let start = Instant::now();
            let verdict = certify_incompressible(&algebra, e).unwrap();
            let elapsed = start.elapsed();
            assert!(verdict.incompressible_2, "a = {a}");
            let expected = 4u64.pow(a);
            assert_eq!(verdict.cdim_chain, (expected, expected, expected), "a = {a}");
            verify_certificates(&verdict).unwrap();
            assert!(
                elapsed < Duration::from_secs(1),
                "a = {a} took {elapsed:?}, over the 1 s budget"
            );

            let out = std::process::Command::new(env!("CARGO_BIN_EXE_flagdim"))
                .args([
                    "certify",
                    "--index",
                    &(2 * e).to_string(),
                    "--e",
                    &e.to_string(),
                    "--format",
                    "json",
                ])
                .output()
                .expect("binary runs");
            assert!(out.status.success(), "a = {a}");
            let doc: flagdim::output::OutputDocument<flagdim::parity::IncompressibilityVerdict> =
                serde_json::from_slice(&out.stdout).expect("verdict document");
            assert_eq!(doc.result, verdict, "a = {a}");
        }
    });
}

/// Criterion 2: the engine returns exactly q_j - 1 at p = p_j and d = 1 for
/// every square-free and prime-power index up to 64, and exactly 0 at every
/// prime not dividing the index.
#[test]
fn acceptance_2_severi_brauer_values() {
    criterion(2, "Severi-Brauer values", || {
        let primes = primes_up_to(67);
        for index in 1..=64u64 {
            let algebra = AlgebraClass::with_index(index).unwrap();
            let decomposition = algebra.primary_decomposition();
            let squarefree = is_squarefree(index);
            let prime_power = decomposition.len() == 1;
            if !squarefree && !prime_power {
                continue;
            }
            for factor in &decomposition {
                let result = cdim(&query(index, &[1], factor.prime, false)).unwrap();
                assert!(result.exact, "ind {index}, p = {}", factor.prime);
                assert_eq!(
                    result.lower,
                    factor.power - 1,
                    "ind {index}, p = {}",
                    factor.prime
                );
            }
            for &p in primes.iter().filter(|&&p| index % p != 0) {
                let result = cdim(&query(index, &[1], p, false)).unwrap();
                assert!(result.exact && result.upper == 0, "ind {index}, p = {p}");
            }
        }
    });
}

/// Criterion 3: (ind 6, d = 1, p = 0) is exactly 3 in characteristic 0 and
/// the interval [2, 3] otherwise, the lower bound coming from p = 3.
#[test]
fn acceptance_3_index_six_case() {
    criterion(3, "ind-6 case", || {
        let with_char0 = cdim(&query(6, &[1], 0, true)).unwrap();
        assert!(with_char0.exact);
        assert_eq!((with_char0.lower, with_char0.upper), (3, 3));

        let without = cdim(&query(6, &[1], 0, false)).unwrap();
        assert!(!without.exact);
        assert_eq!((without.lower, without.upper), (2, 3));
        assert!(
            without
                .rules_applied
                .iter()
                .any(|r| r.id == "R2" && r.citation.contains("cdim_{3} = 2")),
            "the lower bound must come from the p = 3 rule"
        );

        let p3 = cdim(&query(6, &[1], 3, false)).unwrap();
        assert!(p3.exact);
        assert_eq!(p3.lower, 2, "the p = 3 rule supplies the lower bound");
    });
}

/// Criterion 4: for every index up to 512 with at most three prime factors,
/// reduce_flag and decompose_primary_variety outputs are field-state
/// equivalent to their inputs. Flags are covered exhaustively for n <= 12;
/// beyond that every achievable gcd class is exercised with one-, two- and
/// three-step flags (the equivalence class of a flag depends only on the
/// gcd of its entries, which the exhaustive range confirms).
#[test]
fn acceptance_4_equivalence_oracle() {
    criterion(4, "equivalence oracle", || {
        let start = Instant::now();
        let mut reduce_checks = 0u64;
        let mut decompose_checks = 0u64;
        for index in 1..=512u64 {
            if distinct_prime_count(index) > 3 {
                continue;
            }
            let algebra = AlgebraClass::with_index(index).unwrap();

            let mut flags: Vec<Vec<u64>> = Vec::new();
            if index <= 12 {
                for mask in 1u64..(1 << index) {
                    flags.push((1..=index).filter(|d| mask & (1 << (d - 1)) != 0).collect());
                }
            } else {
                for g in 1..=index {
                    flags.push(vec![g]);
                    if 2 * g <= index {
                        flags.push(vec![g, 2 * g]);
                    }
                    if 3 * g <= index {
                        flags.push(vec![g, 2 * g, 3 * g]);
                    }
                }
            }
            for dims in flags {
                let spec = FlagSpec::new(index, dims).unwrap();
                let input = VarietyExpr::single(algebra.clone(), spec.clone()).unwrap();
                let (reduced, _) = reduce_flag(&algebra, &spec).unwrap();
                assert!(
                    equivalent(&input, &reduced).unwrap(),
                    "reduce_flag not equivalent at ind {index}, {spec}"
                );
                reduce_checks += 1;
            }

            for d in 1..index {
                let single =
                    VarietyExpr::single(algebra.clone(), FlagSpec::grassmannian(index, d).unwrap())
                        .unwrap();
                let (product, _) = decompose_primary_variety(&algebra, d).unwrap();
                assert!(
                    equivalent(&single, &product).unwrap(),
                    "decompose not equivalent at ind {index}, d = {d}"
                );
                decompose_checks += 1;
            }
        }
        let elapsed = start.elapsed();
        assert!(reduce_checks > 100_000, "{reduce_checks} reduce checks");
        assert!(decompose_checks > 100_000, "{decompose_checks} decompose checks");
        assert!(
            elapsed < Duration::from_secs(60),
            "suite took {elapsed:?}, over the 60 s budget"
        );
    });
}

/// Criterion 5: for n in {2, 4, 6, 8} the exhaustive S_n scan finds exactly
/// e + 1 double cosets; the closed-form representatives are involutions in
/// pairwise distinct cosets (one of them the identity), have lengths l^2,
/// and their associated subsets match Pi \ {alpha_(e-l), alpha_e,
/// alpha_(e+l)} with Pi \ {alpha_e} at l = e.
#[test]
fn acceptance_5_weyl_double_cosets() {
    criterion(5, "Weyl double cosets", || {
        let start = Instant::now();
        for e in 1..=4usize {
            let n = 2 * e;
            let subset = RootSubset::maximal_parabolic(n, e).unwrap();
            let brute = brute_force_double_cosets(n, &subset).unwrap();
            assert_eq!(brute.len(), e + 1, "n = {n}");
            let total: usize = brute.iter().map(|(_, size)| size).sum();
            assert_eq!(total, (1..=n).product::<usize>(), "n = {n}");

            // coset 0 is the identity's
            assert_eq!(brute[0].0.images(), flagdim::weyl::Permutation::identity(n).images());

            // the canonical representative of each brute-force coset is the
            // closed-form block swap, so the e+1 representatives are
            // pairwise inequivalent
            for (l, (rep, _)) in brute.iter().enumerate() {
                let expected = if l == 0 {
                    flagdim::weyl::Permutation::identity(n)
                } else {
                    coset_representative(e, l - 1).unwrap()
                };
                assert_eq!(rep, &expected, "n = {n}, l = {l}");
            }

            for i in 0..e {
                let l = i + 1;
                let w = coset_representative(e, i).unwrap();
                assert!(w.is_involution(), "n = {n}, l = {l}");
                assert_eq!(w.length(), l * l, "n = {n}, l = {l}");
                let assoc = associated_subset(&w, &subset).unwrap();
                let expected: Vec<usize> = if l == e {
                    vec![e]
                } else {
                    vec![e - l, e, e + l]
                };
                assert_eq!(assoc.removed(), expected, "n = {n}, l = {l}");
            }
        }
        let elapsed = start.elapsed();
        assert!(
            elapsed < Duration::from_secs(30),
            "suite took {elapsed:?}, over the 30 s budget"
        );
    });
}

/// Criterion 6: the Poincare identity
/// P(Gr(e,2e))^2 = P(Gr(e,2e)) (1 + t^(e^2)) + sum_l t^(l^2) P(X_{e-l,e,e+l})
/// holds coefficient-wise for e <= 6; at e = 2 both sides are
/// (1,2,5,6,8,6,5,2,1) with total 36 and the middle degree splits 1+6+1.
#[test]
fn acceptance_6_rank_identity() {
    criterion(6, "rank identity", || {
        let start = Instant::now();
        for e in 1..=6usize {
            verify_rank_identity(e).unwrap_or_else(|err| panic!("e = {e}: {err}"));
        }

        let report = verify_rank_identity(2).unwrap();
        let expected: Vec<u64> = vec![1, 2, 5, 6, 8, 6, 5, 2, 1];
        for (d, (lhs, rhs)) in report
            .rows()
            .into_iter()
            .map(|(d, l, r)| (d, (l, r)))
        {
            assert_eq!(lhs, expected[d].into(), "degree {d}");
            assert_eq!(rhs, expected[d].into(), "degree {d}");
        }
        assert_eq!(report.total(), 36u32.into());

        let middle: Vec<u64> = middle_chow_decomposition(2)
            .unwrap()
            .iter()
            .map(|s| u64::try_from(&s.split_rank).unwrap())
            .collect();
        assert_eq!(middle, vec![1, 6, 1]);

        let elapsed = start.elapsed();
        assert!(
            elapsed < Duration::from_secs(5),
            "suite took {elapsed:?}, over the 5 s budget"
        );
    });
}

/// Criterion 7: for every e = 2^a up to 16 and every middle summand
/// l = 1..e-1, the computed d = gcd(e, l) is strictly below e and the flag
/// parity certificate is both-even; the even-degree certificate for
/// CH_0(X_e) is both-even as well.
#[test]
fn acceptance_7_parity_hypothesis_coverage() {
    criterion(7, "parity hypothesis coverage", || {
        for e in [1u64, 2, 4, 8, 16] {
            let algebra = AlgebraClass::with_index(2 * e).unwrap();
            for l in 1..e {
                let d = gcd(e, l);
                assert!(d < e, "e = {e}, l = {l}");
                let flag = FlagSpec::new(2 * e, vec![e - l, e, e + l]).unwrap();
                let certificate = flag_summand_parity(&algebra, e, &flag).unwrap();
                assert_eq!(certificate.verdict, Verdict::BothEven, "e = {e}, l = {l}");
                let recorded_d = certificate
                    .steps
                    .iter()
                    .flat_map(|s| s.numeric_facts.iter())
                    .find(|(name, _)| name == "d")
                    .map(|(_, v)| v.value());
                assert_eq!(recorded_d, Some(d), "e = {e}, l = {l}");
            }
            let even = even_degree_ch0(&algebra, e).unwrap();
            assert_eq!(even.verdict, Verdict::BothEven, "e = {e}");
        }
    });
}

/// Criterion 8: dim X_2 of an index-4 algebra is the 4-dimensional quadric.
#[test]
fn acceptance_8_albert_quadric_dimension() {
    criterion(8, "Albert quadric consistency", || {
        assert_eq!(FlagSpec::new(4, vec![2]).unwrap().dimension(), 4);
        // and the Poincare polynomial of the split quadric agrees in degree
        let p = poincare_polynomial(&FlagSpec::new(4, vec![2]).unwrap()).unwrap();
        assert_eq!(p.degree(), 4);
    });
}
