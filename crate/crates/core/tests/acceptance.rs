//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
//!
//! `cargo test -p gamma-lab --test acceptance`

use std::time::{Duration, Instant};

use gamma_lab::enumerate::permutations;
use gamma_lab::{
    canonical_key, check_claim, check_congruence, enumerate_corpus, enumerate_semilattice_congruences,
    enumerate_structures, filter_closure, is_filter, parse_structure, principal_filter, principal_filter_oracle,
    quotient, quotient_upset_t, random_structure, relation_n, search_counterexamples, search_structures,
    serialize_structure, ClaimId, Corpus, ElementSet, EnumConfig, Kind, OrderMode, PoGammaStructure,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_LIMIT: Duration = Duration::from_secs(120);
const SWEEP_LIMIT: Duration = Duration::from_secs(300);
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn corpus() -> Vec<PoGammaStructure> {
    enumerate_corpus(3, 2, EnumConfig::new(3, 2)).expect("corpus")
}

fn random_perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let perms = permutations(n);
    perms[rng.gen_range(0..perms.len())].clone()
}

fn ac1(corpus: &[PoGammaStructure]) -> Outcome {
    let start = Instant::now();
    let cfg = EnumConfig::new(4, 2);
    let randoms: Vec<_> = (0..200)
        .map(|i| random_structure(&cfg, SEED + i).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let mut checked = 0;
    for s in corpus.iter().chain(&randoms) {
        for a in 0..s.n() {
            let fast = principal_filter(s, a).map_err(|e| e.to_string())?;
            let slow = principal_filter_oracle(s, a).map_err(|e| e.to_string())?;
            ensure(fast == slow, || {
                format!("N({a}) = {fast}, oracle {slow} on\n{}", serialize_structure(s))
            })?;
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < ORACLE_LIMIT, || format!("took {elapsed:.1?}"))?;
    Ok(format!(
        "{checked} principal filters over {} corpus + 200 random n=4 structures in {elapsed:.2?}",
        corpus.len()
    ))
}

fn ac2(corpus: &[PoGammaStructure]) -> Outcome {
    for s in corpus {
        let p = relation_n(s).map_err(|e| e.to_string())?;
        let check = check_congruence(s, &p).map_err(|e| e.to_string())?;
        ensure(check.is_semilattice, || {
            format!(
                "{:?} not a semilattice congruence on\n{}",
                check.witness,
                serialize_structure(s)
            )
        })?;
    }
    Ok(format!(
        "N is a semilattice congruence on all {} structures",
        corpus.len()
    ))
}

fn ac3(corpus: &[PoGammaStructure]) -> Outcome {
    let start = Instant::now();
    let groupoids = enumerate_corpus(2, 2, EnumConfig::new(2, 2).kind(Kind::Groupoid)).map_err(|e| e.to_string())?;
    let claims = [
        ClaimId::C1,
        ClaimId::C2,
        ClaimId::C5,
        ClaimId::C6,
        ClaimId::C7,
        ClaimId::C8,
        ClaimId::C9,
        ClaimId::C10,
    ];
    let mut parts = Vec::new();
    for id in claims {
        let report = search_structures(id, corpus, 1).map_err(|e| e.to_string())?;
        ensure(report.failures == 0, || {
            format!(
                "{id}: {} counterexamples, first {:?}",
                report.failures,
                report.counterexamples.first().map(|c| &c.witness)
            )
        })?;
        if !id.needs_semigroup() {
            let report = search_structures(id, &groupoids, 1).map_err(|e| e.to_string())?;
            ensure(report.failures == 0, || {
                format!("{id} on groupoids: {} counterexamples", report.failures)
            })?;
        }
        parts.push(format!("{id}:{}", report.structures_checked - report.vacuous));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SWEEP_LIMIT, || format!("took {elapsed:.1?}"))?;
    Ok(format!(
        "no counterexamples (non-vacuous structures {}) in {elapsed:.2?}",
        parts.join(" ")
    ))
}

fn ac4(corpus: &[PoGammaStructure]) -> Outcome {
    let mut cases = 0;
    for s in corpus {
        for p in enumerate_semilattice_congruences(s).map_err(|e| e.to_string())? {
            let q = quotient(s, &p).map_err(|e| e.to_string())?;
            for x in 0..s.n() {
                let t = quotient_upset_t(s, &p, x).map_err(|e| e.to_string())?;
                let ok = is_filter(q.as_structure(), &t).map_err(|e| e.to_string())?.verdict;
                ensure(ok, || {
                    format!(
                        "T({x}) = {t} not a filter for {:?} on\n{}",
                        p.class_of(),
                        serialize_structure(s)
                    )
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (structure, congruence, element) cases"))
}

fn ac5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..1000 {
        let n = rng.gen_range(1..=5);
        let g = rng.gen_range(1..=2);
        let s = random_structure(&EnumConfig::new(n, g), rng.gen()).map_err(|e| e.to_string())?;
        let mut small = ElementSet::from_elements(n, (0..n).filter(|_| rng.gen_bool(0.3)));
        small.insert(rng.gen_range(0..n));
        let big = small.union(&ElementSet::from_elements(n, (0..n).filter(|_| rng.gen_bool(0.3))));
        let cs = filter_closure(&s, &small).map_err(|e| e.to_string())?;
        let cb = filter_closure(&s, &big).map_err(|e| e.to_string())?;
        let again = filter_closure(&s, &cs).map_err(|e| e.to_string())?;
        ensure(small.is_subset(&cs), || format!("pair {i}: not extensive"))?;
        ensure(cs.is_subset(&cb), || format!("pair {i}: not monotone"))?;
        ensure(again == cs, || format!("pair {i}: not idempotent"))?;
    }
    Ok("extensive, monotone and idempotent on 1000 seeded seed-set pairs".into())
}

fn findings_block(report: &gamma_lab::SearchReport) -> Result<String, String> {
    serde_json::to_string_pretty(report).map_err(|e| e.to_string())
}

fn ac6() -> Outcome {
    let start = Instant::now();
    let corpus = Corpus::Exhaustive {
        cfg: EnumConfig::new(3, 2),
        cumulative: true,
    };
    let findings = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../book/src/findings.md"))
        .map_err(|e| format!("findings document: {e}"))?;
    let mut parts = Vec::new();
    for id in [ClaimId::C3, ClaimId::C4] {
        let first = search_counterexamples(id, &corpus, 10).map_err(|e| e.to_string())?;
        let second = search_counterexamples(id, &corpus, 10).map_err(|e| e.to_string())?;
        let (a, b) = (findings_block(&first)?, findings_block(&second)?);
        ensure(a == b, || format!("{id}: reports differ between runs"))?;
        ensure(findings.contains(&a), || {
            format!("{id}: report not recorded in the findings document")
        })?;
        parts.push(format!(
            "{id}: {} failures / {} structures",
            first.failures, first.structures_checked
        ));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < SWEEP_LIMIT, || format!("took {elapsed:.1?}"))?;
    Ok(format!(
        "{} in {elapsed:.2?}, deterministic and recorded",
        parts.join(", ")
    ))
}

fn ac7() -> Outcome {
    let cfg = EnumConfig::new(2, 1)
        .order_mode(OrderMode::DiscreteOnly)
        .iso_dedup(false);
    let found = enumerate_structures(&cfg).map_err(|e| e.to_string())?;
    let mut brute = Vec::new();
    for code in 0..16usize {
        let t: Vec<usize> = (0..4).map(|i| (code >> i) & 1).collect();
        let m = |a: usize, b: usize| t[a * 2 + b];
        let assoc = (0..2).all(|a| (0..2).all(|b| (0..2).all(|c| m(m(a, b), c) == m(a, m(b, c)))));
        if assoc {
            brute.push(t);
        }
    }
    let mut tables: Vec<Vec<usize>> = found.iter().map(|s| s.flat_op().to_vec()).collect();
    tables.sort();
    brute.sort();
    ensure(found.len() == 8 && tables == brute, || {
        format!("enumerated {}, brute force {}", found.len(), brute.len())
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    for i in 0..100 {
        let cfg = EnumConfig::new(rng.gen_range(2..=5), rng.gen_range(1..=2));
        let s = random_structure(&cfg, rng.gen()).map_err(|e| e.to_string())?;
        let t = s
            .relabel(&random_perm(s.n(), &mut rng), &random_perm(s.g(), &mut rng))
            .map_err(|e| e.to_string())?;
        let (ks, kt) = (
            canonical_key(&s).map_err(|e| e.to_string())?,
            canonical_key(&t).map_err(|e| e.to_string())?,
        );
        ensure(ks == kt, || format!("pair {i}: keys differ"))?;
    }
    Ok("8 tables match brute force over 16; 100 relabeled pairs share a canonical key".into())
}

fn ac8(corpus: &[PoGammaStructure]) -> Outcome {
    for s in corpus {
        let text = serialize_structure(s);
        let back = parse_structure(&text).map_err(|e| e.to_string())?;
        ensure(&back == s && serialize_structure(&back) == text, || {
            format!("round trip failed on\n{text}")
        })?;
    }
    let id = ClaimId::C1;
    let report =
        |c: &[PoGammaStructure]| search_structures(id, c, 10).map(|r| serde_json::to_string_pretty(&r).unwrap());
    let a = report(corpus).map_err(|e| e.to_string())?;
    let b = report(corpus).map_err(|e| e.to_string())?;
    ensure(a == b, || "JSON report differs between runs".into())?;
    Ok(format!(
        "{} structures round-trip; JSON reports byte-identical",
        corpus.len()
    ))
}

fn ac9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    for i in 0..100 {
        let cfg = EnumConfig::new(rng.gen_range(2..=4), rng.gen_range(1..=2));
        let s = random_structure(&cfg, rng.gen()).map_err(|e| e.to_string())?;
        let t = s
            .relabel(&random_perm(s.n(), &mut rng), &random_perm(s.g(), &mut rng))
            .map_err(|e| e.to_string())?;
        for id in ClaimId::ALL {
            let (vs, vt) = (
                check_claim(id, &s).map_err(|e| e.to_string())?,
                check_claim(id, &t).map_err(|e| e.to_string())?,
            );
            ensure(vs.status == vt.status && vs.vacuous == vt.vacuous, || {
                format!("pair {i}: {id} verdicts differ")
            })?;
        }
    }
    Ok(format!("{} claims agree on 100 relabeled pairs", ClaimId::ALL.len()))
}

fn main() {
    let start = Instant::now();
    let corpus = corpus();
    println!(
        "corpus: {} structures (n <= 3, g <= 2, all compatible orders, up to isomorphism)",
        corpus.len()
    );
    let results: Vec<(&str, Outcome)> = vec![
        ("AC1 oracle equivalence", ac1(&corpus)),
        ("AC2 N is a semilattice congruence", ac2(&corpus)),
        ("AC3 proved claims", ac3(&corpus)),
        ("AC4 quotient up-sets are filters", ac4(&corpus)),
        ("AC5 closure operator", ac5()),
        ("AC6 doubted-claim searches", ac6()),
        ("AC7 enumeration and canonical keys", ac7()),
        ("AC8 round trip and stable JSON", ac8(&corpus)),
        ("AC9 relabeling invariance of verdicts", ac9()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "{} passed, {failed} failed in {:.2?}",
        results.len() - failed,
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
