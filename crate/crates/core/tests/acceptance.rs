//! Acceptance run: prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use stablepi1::fpgroup::{is_cyclic_of_order, parse_word, reduce_word, todd_coxeter_order, Word, DEFAULT_MAX_COSETS};
use stablepi1::intlin::{determinant, smith_normal_form, IntMatrix, RatVector};
use stablepi1::scenarios::{
    bundled_scenario, bundled_scenarios, van_kampen_group, verify_bundled, Execution, Payload, RunOptions,
};
use stablepi1::torus::bitri::{
    enumerate_glue_subgroups, normalized_glue_subgroups, theta_fbar, twisting_number, BiTriEllipticParams,
    GlueSubgroup,
};
use stablepi1::torus::{preimage_count, DEFAULT_GROUP_CAP};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let table: BTreeMap<&str, u64> = [
        ("P1", 4), ("P2", 1), ("P3", 3), ("X1.1", 1), ("X1.2", 1), ("X1.3", 3), ("X1.4", 4), ("X1.5", 5),
        ("B1", 4), ("B2", 3), ("E1", 1), ("E2", 2), ("E3", 3), ("E4", 4), ("E5", 5), ("E2red", 1),
        ("E3red", 1), ("E4red", 1), ("E5red", 1), ("dP", 1), ("R3", 3), ("R4", 4), ("R5", 5),
    ]
    .into_iter()
    .collect();
    let opts = RunOptions::default();
    let catalogue = verify_bundled(Execution::Parallel, &opts);
    ensure(catalogue.all_passed(), || format!("{}/{} passed", catalogue.summary.passed, catalogue.summary.total))?;
    let computed: BTreeMap<&str, u64> =
        catalogue.reports.iter().filter_map(|r| Some((r.scenario.as_str(), r.order?))).collect();
    ensure(computed == table, || format!("computed orders {computed:?}"))?;
    for s in bundled_scenarios().map_err(|e| e.to_string())? {
        let r = catalogue.reports.iter().find(|r| r.scenario == s.id).expect("every scenario reported");
        ensure(r.cyclic, || format!("{} not certified cyclic", s.id))?;
        if let Payload::VanKampen(v) = &s.payload {
            let p = van_kampen_group(v).map_err(|e| e.to_string())?;
            let cyclic = is_cyclic_of_order(&p, s.expected.order, DEFAULT_MAX_COSETS).map_err(|e| e.to_string())?;
            ensure(cyclic, || format!("{} fails is_cyclic_of_order", s.id))?;
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    for (id, _, _) in common::DIRECT_ENTRY {
        let s = bundled_scenario(id).ok_or_else(|| format!("{id} missing"))?;
        let Payload::VanKampen(v) = &s.payload else { return Err(format!("{id} is not a van Kampen case")) };
        let engine = common::invariants(&van_kampen_group(v).map_err(|e| e.to_string())?);
        let direct = common::invariants(&common::direct_entry(id));
        ensure(engine == direct && engine.0.is_some(), || format!("{id}: engine {engine:?} vs direct {direct:?}"))?;
    }
    Ok(())
}

fn criterion_3() -> Outcome {
    let b = |id: &str| match bundled_scenario(id).map(|s| s.payload) {
        Some(Payload::Bielliptic(b)) => Ok(b),
        _ => Err(format!("{id} is not bielliptic")),
    };
    let (b1, b2) = (b("B1")?, b("B2")?);
    let e = |e: stablepi1::torus::TorusError| e.to_string();
    for (id, data, order) in [("B1", &b1, 4), ("B2", &b2, 9)] {
        let gens = data.group_maps();
        let n = data.torus.group_closure(&gens, DEFAULT_GROUP_CAP).map_err(e)?.len();
        ensure(n == order, || format!("{id} group has order {n}"))?;
        ensure(data.torus.is_free_action(&gens, DEFAULT_GROUP_CAP).map_err(e)?, || format!("{id} not free"))?;
    }
    let sigma = b1.cover.map_order(b1.deck_map(), DEFAULT_GROUP_CAP).map_err(e)?;
    ensure(sigma == 4, || format!("map_order(σ̄) = {sigma}"))?;
    for (id, data, count) in [("B1", &b1, 4), ("B2", &b2, 3)] {
        let t = RatVector::zero(data.transversal.rows());
        let got = preimage_count(&data.transversal, &t).map_err(e)?;
        ensure(got == BigInt::from(count), || format!("{id} preimage count {got}"))?;
    }
    for p in [BiTriEllipticParams::odd(3), BiTriEllipticParams::even(1, 0)] {
        let p = p.map_err(e)?;
        let theta = theta_fbar(&p).map_err(e)?;
        ensure(theta == BigInt::from(3), || format!("ΘF̄ = {theta} for {p:?}"))?;
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let e = |e: stablepi1::torus::TorusError| e.to_string();
    let g1 = GlueSubgroup::generated_by(&[[0, 1, 0, 1], [1, 0, 1, 0]]);
    let g2 = GlueSubgroup::generated_by(&[[0, 1, 0, 1], [1, 0, 1, 1]]);
    for d_prime in [1, 2] {
        let p = BiTriEllipticParams::even(d_prime, 0).map_err(e)?;
        let all = enumerate_glue_subgroups(&p).map_err(e)?;
        ensure(all.len() == 4, || format!("d′ = {d_prime}: {} unfiltered subgroups", all.len()))?;
        let normalized = normalized_glue_subgroups(&p).map_err(e)?;
        ensure(normalized == vec![g1.clone(), g2.clone()], || format!("d′ = {d_prime}: {normalized:?}"))?;
    }
    let mut twists = Vec::new();
    for s in bundled_scenarios().map_err(|e| e.to_string())? {
        if let Payload::BiTriElliptic(p) = s.payload {
            twists.push(twisting_number(&p).map_err(e)?);
        }
    }
    twists.sort();
    ensure(twists == [1, 2, 3, 4, 5], || format!("twisting numbers {twists:?}"))
}

fn run_property<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Outcome {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn criterion_5() -> Outcome {
    run_property(1000, common::word_strategy(4, 40), |letters| {
        let w = Word::from_signed(&letters);
        let r = reduce_word(&w);
        prop_assert_eq!(common::signed(&r), common::stack_reduce(&letters));
        prop_assert_eq!(reduce_word(&r), r.clone());
        prop_assert!(reduce_word(&w.concat(&w.inverse())).is_empty());
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        prop_assert_eq!(parse_word(&w.display(&names).to_string(), &names).unwrap(), w);
        Ok(())
    })?;
    run_property(500, common::small_matrix(), |a| {
        let snf = smith_normal_form(&a);
        prop_assert!(determinant(&snf.u).magnitude() == &1u32.into());
        prop_assert!(determinant(&snf.v).magnitude() == &1u32.into());
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.d.clone());
        if a.is_square() {
            let product: BigInt = snf.diagonal().iter().product();
            let det = determinant(&a);
            prop_assert_eq!(product.magnitude(), det.magnitude());
        }
        Ok(())
    })?;
    let finite = common::square_matrix(3, 6).prop_filter("finite of order at most 60", |a| {
        let d = determinant(a);
        d != BigInt::from(0) && d.magnitude() <= &60u32.into()
    });
    run_property(100, finite, |a: IntMatrix| {
        let p = common::abelian_presentation(&a);
        let order = todd_coxeter_order(&p, DEFAULT_MAX_COSETS).unwrap();
        let ab = stablepi1::fpgroup::abelianization(&p).order().unwrap();
        prop_assert_eq!(BigInt::from(order), ab);
        Ok(())
    })?;
    for (id, _, _) in common::DIRECT_ENTRY {
        let Some(Payload::VanKampen(v)) = bundled_scenario(id).map(|s| s.payload) else {
            return Err(format!("{id} missing"));
        };
        let base = common::invariants(&van_kampen_group(&v).map_err(|e| e.to_string())?);
        let (m, n) = (v.dbar.edges().len(), v.d.edges().len());
        let perms = (Just((0..m).collect::<Vec<_>>()).prop_shuffle(), Just((0..n).collect::<Vec<_>>()).prop_shuffle());
        run_property(25, perms, |(pm, pn)| {
            let mut w = (*v).clone();
            w.dbar = v.dbar.with_edge_order(&pm);
            w.d = v.d.with_edge_order(&pn);
            prop_assert_eq!(common::invariants(&van_kampen_group(&w).unwrap()), base.clone());
            Ok(())
        })
        .map_err(|e| format!("{id}: {e}"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 5] = [
        ("catalogue reproduction", criterion_1),
        ("van Kampen oracle equivalence", criterion_2),
        ("torus arithmetic", criterion_3),
        ("bi-tri-elliptic combinatorics", criterion_4),
        ("property suites", criterion_5),
    ];
    let mut failed = false;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {}: PASS ({name})", i + 1),
            Err(msg) => {
                failed = true;
                println!("criterion {}: FAIL ({name}): {msg}", i + 1);
            }
        }
    }
    println!("criterion 6: excluded by design (smoothability and moduli statements)");
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
