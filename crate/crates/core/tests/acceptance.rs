//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use fusionkit::alperin;
use fusionkit::biset;
use fusionkit::catalog;
use fusionkit::group::prime_divisors;
use fusionkit::thompson::{self, TlInstance};
use fusionkit::{AbelianSection, Coset, FusionSystem, Subgroup};

struct Outcome {
    passed: bool,
    detail: String,
    /// Serialized reports, compared across reruns.
    json: String,
}

fn system(name: &str, p: u64) -> FusionSystem {
    FusionSystem::new(catalog::build(name).expect("fixture"), p).expect("system")
}

fn systems_at(primes: &[u64]) -> Vec<(String, FusionSystem)> {
    let mut out = Vec::new();
    for name in catalog::STANDARD_FIXTURES {
        let order = catalog::build(name).unwrap().order() as u64;
        for &p in primes {
            if order % p == 0 {
                out.push((format!("{name}@{p}"), system(name, p)));
            }
        }
    }
    out
}

fn four_groups(f: &FusionSystem) -> Vec<Subgroup> {
    let g = f.group();
    thompson::abelian_quotient_kernels(f)
        .unwrap()
        .into_iter()
        .filter(|t| t.order() == 4 && t.elements().iter().all(|&x| g.element_order(x) <= 2))
        .collect()
}

fn criterion_1() -> Outcome {
    let f = system("sl3_2", 2);
    let g = f.group();
    let mut passed = true;
    let mut json = Vec::new();
    let mut count = 0;
    for t in four_groups(&f) {
        for &u in f.sylow().elements().iter().filter(|&&x| !t.contains(x) && g.element_order(x) == 4) {
            let inst = TlInstance::new(&f, &t, u).unwrap();
            let r = thompson::tl_verify(&inst).unwrap();
            passed &= !r.cond1 && r.witness.is_none() && thompson::find_witness(&inst).is_none();
            json.push(r.to_json(&inst));
            count += 1;
        }
    }
    passed &= count > 0;
    Outcome { passed, detail: format!("{count} instances, (1) false and no witness"), json: serde_json::to_string(&json).unwrap() }
}

fn criterion_2() -> Outcome {
    let f = system("sl2_3", 2);
    let g = f.group();
    let s = f.sylow();
    let t = g.center(s);
    let section = AbelianSection::new(g, s, &t).unwrap();
    let nontrivial: Vec<Coset> = section.cosets().filter(|&c| c != Coset::TRIVIAL).collect();
    let mut passed = section.order() == 4 && nontrivial.iter().all(|&c| section.coset_order(c) == 2);
    let mut json = Vec::new();
    for &u in s.elements().iter().filter(|&&x| !t.contains(x)) {
        let inst = TlInstance::new(&f, &t, u).unwrap();
        let r = thompson::tl_verify(&inst).unwrap();
        passed &= r.conditions() == [true, false, true] && r.cond2.cosets == nontrivial && r.witness.is_none();
        json.push(r.to_json(&inst));
    }
    Outcome {
        passed,
        detail: format!("{} choices of u, conditions [true, false, true], I T = 3 cosets", json.len()),
        json: serde_json::to_string(&json).unwrap(),
    }
}

/// Instances `(T, u)` over the `O^2`-closed fixtures, with the trace checks
/// of criterion 4 evaluated alongside.
fn tl_sweep() -> (usize, usize, bool, bool, String) {
    let mut names: Vec<&str> = catalog::STANDARD_FIXTURES.to_vec();
    names.push("alt4xalt4");
    let mut hypotheses = 0;
    let mut total = 0;
    let mut witnesses_ok = true;
    let mut internals_ok = true;
    let mut json = Vec::new();
    for name in names {
        let f = system(name, 2);
        if !f.is_op_closed() {
            continue;
        }
        for inst in thompson::all_instances(&f).unwrap() {
            total += 1;
            let r = match thompson::tl_verify(&inst) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("  {name}: {e}");
                    witnesses_ok = false;
                    continue;
                }
            };
            let tr = &r.trace;
            let fixed = biset::orbit_fixed_points(&f, inst.biset(), &f.group().centralizer(f.sylow(), &[tr.traced]));
            internals_ok &= tr.exponent_sum() == tr.pairs && tr.pairs == fixed && tr.pairs % 2 == 1;
            if r.hypotheses_hold() {
                hypotheses += 1;
                witnesses_ok &= r.witness.is_some();
                json.push((name, r.to_json(&inst)));
            }
        }
    }
    (total, hypotheses, witnesses_ok, internals_ok, serde_json::to_string(&json).unwrap())
}

fn criterion_3_and_4() -> (Outcome, Outcome) {
    let (total, hyp, witnesses_ok, internals_ok, json) = tl_sweep();
    (
        Outcome {
            passed: witnesses_ok && hyp > 0,
            detail: format!("{hyp} of {total} instances satisfy (1)-(3), each has a witness in T"),
            json: json.clone(),
        },
        Outcome {
            passed: internals_ok,
            detail: format!("sum k_j = |T| = |(Omega/S)^P|, odd, on all {total} instances"),
            json,
        },
    )
}

fn criterion_5() -> Outcome {
    let mut passed = true;
    let mut json = Vec::new();
    let mut checked = 0;
    for (label, f) in systems_at(&[2, 3]) {
        let g = f.group();
        let s = f.sylow();
        let section = AbelianSection::new(g, s, &g.commutator_subgroup(s)).unwrap();
        let omega = biset::characteristic_biset(&f);
        let focal = f.focal_subgroup();
        for &u in s.elements() {
            let classical = biset::classical_transfer(g, &section, u).unwrap();
            passed &= classical == biset::mackey_transfer(&f, &section, u).unwrap();
            passed &= classical == biset::biset_transfer(&f, &omega, &section, u).unwrap();
            if focal.contains(u) {
                passed &= biset::biset_transfer(&f, &omega, &section, u).unwrap() == Coset::TRIVIAL;
            }
            checked += 1;
        }
        json.push((label, biset::transfer_table(&f, &omega, &section).unwrap()));
    }
    Outcome {
        passed,
        detail: format!("{checked} elements: Mackey = classical, focal subgroup in the kernel"),
        json: serde_json::to_string(&json).unwrap(),
    }
}

fn criterion_6() -> Outcome {
    let mut passed = true;
    let mut json = Vec::new();
    for name in catalog::STANDARD_FIXTURES {
        let g = catalog::build(name).unwrap();
        for p in prime_divisors(g.order() as u64) {
            let f = system(name, p);
            let g = f.group();
            let oracle = g.intersection(f.sylow(), &g.commutator_subgroup(&g.whole()));
            let focal = f.focal_subgroup();
            passed &= focal == oracle;
            json.push((name.to_string(), p, focal.order()));
        }
    }
    Outcome { passed, detail: format!("{} (group, prime) pairs", json.len()), json: serde_json::to_string(&json).unwrap() }
}

fn criterion_7() -> Outcome {
    let mut passed = true;
    let mut json = Vec::new();
    for (label, f) in systems_at(&[2, 3]) {
        let omega = biset::characteristic_biset(&f);
        let report = biset::verify_characteristic(&f, &omega).unwrap();
        passed &= report.passed();
        let p = f.prime() as usize;
        let scaled = biset::verify_characteristic(&f, &omega.disjoint_copies(p)).unwrap();
        passed &= !scaled.prime_to_p.passed;
        json.push((label, report, scaled.prime_to_p));
    }
    Outcome {
        passed,
        detail: format!("{} systems pass (a)(b)(c); p copies fail (c)", json.len()),
        json: serde_json::to_string(&json).unwrap(),
    }
}

fn criterion_8() -> (Outcome, Outcome) {
    let f = system("sym4xsym4", 2);
    let r = alperin::normalizer_counterexample(&f).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    let holds = r.essentials_are_vs1_vs2
        && r.essential_orders == [32, 32]
        && r.normalizer_index == 2
        && r.p_fully_normalized
        && !r.p_h1_fully_normalized
        && r.stated_chain_realizes
        && !r.normalized_chain_exists;
    let class = r.class_size == 3 && r.others_normalizer_is_v;
    // P lies in V, which is normal, so every G-conjugate of P lies in S
    let g = f.group();
    let oracle = g.order() / g.normalizer(&g.whole(), &r.p_subgroup).order();
    (
        Outcome {
            passed: holds,
            detail: format!(
                "essentials {:?}, |S:N_S(P)| = {}, P fully normalized {}, P^h1 fully normalized {}, chain through VS2 then VS1 {}, all-normalized chain exists {}",
                r.essential_orders, r.normalizer_index, r.p_fully_normalized, r.p_h1_fully_normalized, r.stated_chain_realizes, r.normalized_chain_exists
            ),
            json: json.clone(),
        },
        Outcome {
            passed: class,
            detail: format!(
                "|P^F| = {} = |G:N_G(P)| = {} (expected 3), |N_S(R)| for R in P^F - {{P}} = {:?} (expected all |V| = {}); on the <h1>-orbit of P: {:?}",
                r.class_size, oracle, r.other_normalizer_orders, r.v_order, r.h1_orbit_normalizer_orders
            ),
            json,
        },
    )
}

fn criterion_9() -> Outcome {
    let mut passed = true;
    let mut count = 0;
    let mut json = Vec::new();
    for name in ["sym4", "sl2_3", "sl3_2", "alt6"] {
        let f = system(name, 2);
        let g = f.group();
        let family = alperin::essential_family(&f).unwrap();
        for p in f.subgroup_class_reps().unwrap() {
            for phi in f.hom_f(&p, f.sylow()) {
                let ud = alperin::updown_decompose(&f, &family, &phi).unwrap();
                passed &= ud.decomposition.realizes(&f, &phi) && alperin::is_unimodal_at(&ud.decomposition.profile, ud.peak);
                json.push(ud.decomposition.to_json(g, Some(ud.peak)));
                count += 1;
            }
        }
    }
    Outcome {
        passed,
        detail: format!("{count} morphisms, unimodal profiles, composites equal the input"),
        json: serde_json::to_string(&json).unwrap(),
    }
}

type Criterion = (&'static str, Duration, Box<dyn Fn() -> Vec<Outcome>>);

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("1", Duration::from_secs(1), Box::new(|| vec![criterion_1()])),
        ("2", Duration::from_secs(1), Box::new(|| vec![criterion_2()])),
        ("3,4", Duration::from_secs(300), Box::new(|| {
            let (a, b) = criterion_3_and_4();
            vec![a, b]
        })),
        ("5", Duration::from_secs(60), Box::new(|| vec![criterion_5()])),
        ("6", Duration::from_secs(60), Box::new(|| vec![criterion_6()])),
        ("7", Duration::from_secs(300), Box::new(|| vec![criterion_7()])),
        ("8", Duration::from_secs(120), Box::new(|| {
            let (a, b) = criterion_8();
            vec![a, b]
        })),
        ("9", Duration::from_secs(300), Box::new(|| vec![criterion_9()])),
    ];
    let labels = [
        vec!["1 counterexample to (1) in SL3(2)"],
        vec!["2 counterexample to (2) in SL2(3)"],
        vec!["3 transfer theorem sweep", "4 proof internals"],
        vec!["5 transfer consistency"],
        vec!["6 focal subgroup oracle"],
        vec!["7 characteristic biset"],
        vec!["8 Sym4 x Sym4 normalizer remark", "8 Sym4 x Sym4 class size and normalizers"],
        vec!["9 up/down decompositions"],
    ];

    let mut failures = 0;
    let mut first_run = Vec::new();
    for ((_, limit, run), names) in criteria.iter().zip(&labels) {
        let start = Instant::now();
        let outcomes = run();
        let elapsed = start.elapsed();
        for (outcome, name) in outcomes.iter().zip(names) {
            let ok = outcome.passed && elapsed <= *limit;
            failures += usize::from(!ok);
            println!(
                "criterion {name}: {} ({}; {:.2?} of {:?})",
                if ok { "PASS" } else { "FAIL" },
                outcome.detail,
                elapsed,
                limit
            );
        }
        first_run.push(outcomes.into_iter().map(|o| o.json).collect::<Vec<_>>());
    }

    let identical = criteria
        .iter()
        .zip(&first_run)
        .all(|((_, _, run), before)| run().into_iter().map(|o| o.json).collect::<Vec<_>>() == *before);
    failures += usize::from(!identical);
    println!(
        "criterion 10 determinism: {} (reports of criteria 1-9 recomputed {})",
        if identical { "PASS" } else { "FAIL" },
        if identical { "byte-identical" } else { "with differences" }
    );

    if failures > 0 {
        println!("{failures} acceptance line(s) failed");
        std::process::exit(1);
    }
}
