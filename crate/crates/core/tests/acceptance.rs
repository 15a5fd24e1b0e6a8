//! End-to-end acceptance checks: every closed formula is held against an
//! independent computation (brute-force linear algebra, direct series
//! evaluation, or an explicit verifier), with exact integer agreement.

use equideform_core::node::{
    classify_relevability, h1_ext0_dimension, lift_first_order, phi_cocycle_is_coboundary,
    verify_lift, Branch, CyclicNodeAction, RelevabilityClass,
};
use equideform_core::oracle::{default_window, h1_dimension_bruteforce, OracleInput};
use equideform_core::smooth::{
    ext1_dimension_smooth, no_unit_witness_to_precision, order_p2_tower, predict_trace_valuation,
    trace_zero_basis_construct, trace_zero_basis_exists, CyclicSmoothAction,
};
use equideform_core::{TruncatedSeries, Valuation, VectorField};

const PRIMES: [u64; 3] = [2, 3, 5];

fn conductor_sweep(p: u64) -> Vec<u64> {
    (1..=7).filter(|m| m % p != 0).collect()
}

/// Constructible upper jump pairs for order-p^2 towers.
fn tower_sweep() -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for (p, m0) in [(2u64, 1u64), (3, 1), (3, 2)] {
        for u1 in p * m0..=p * m0 + 2 {
            if u1 == p * m0 || u1 % p != 0 {
                out.push((p, m0, u1));
            }
        }
    }
    out
}

#[test]
fn criterion_1_smooth_dimension_formula_matches_oracle() {
    for p in PRIMES {
        for m in conductor_sweep(p) {
            let d = (p - 1) * (m + 1);
            let (window, ambient) = default_window(d, m, p);
            let a = CyclicSmoothAction::standard_action(p, m, ambient + 16).unwrap();
            let formula = ext1_dimension_smooth(&a.ramification_profile().unwrap(), 1).unwrap();
            let oracle =
                h1_dimension_bruteforce(&OracleInput::Smooth(&a), window, ambient).unwrap();
            assert_eq!(oracle as u64, formula, "smooth p={p} m={m}");
        }
    }
}

#[test]
fn criterion_2_node_dimension_formula_matches_oracle() {
    for p in PRIMES {
        let ms = conductor_sweep(p);
        for &m in &ms {
            for &mp in &ms {
                let big = m.max(mp);
                let d = (p - 1) * (big + 1);
                let (window, ambient) = default_window(d, big, p);
                let a = CyclicNodeAction::standard_node_action(p, Some(m), Some(mp), ambient + 16)
                    .unwrap();
                let formula = h1_ext0_dimension(&a).unwrap();
                let oracle =
                    h1_dimension_bruteforce(&OracleInput::Node(&a), window, ambient).unwrap();
                assert_eq!(oracle as u64, formula, "node p={p} m={m} mp={mp}");
            }
        }
    }
}

fn check_trace_zero_criterion(a: &CyclicSmoothAction, label: &str) {
    let exists = trace_zero_basis_exists(a).unwrap();
    if exists {
        let w = trace_zero_basis_construct(a).unwrap();
        assert!(w.is_unit(), "{label}: witness is not a unit");
        assert!(
            a.trace(&w).unwrap().series().is_zero(),
            "{label}: witness trace is nonzero"
        );
    } else {
        let d = a.ramification_profile().unwrap().different;
        let bound = ((2 * d + 4 * a.p() + 4) as usize).min(a.precision() - 1);
        assert!(
            no_unit_witness_to_precision(a, bound, bound).unwrap(),
            "{label}: a unit witness exists although the criterion says none does"
        );
    }
}

#[test]
fn criterion_3_trace_zero_existence_matches_construction() {
    for p in PRIMES {
        for m in conductor_sweep(p) {
            let prec = (4 * ((p - 1) * (m + 1) + 1) as usize).max(48);
            let a = CyclicSmoothAction::standard_action(p, m, prec).unwrap();
            check_trace_zero_criterion(&a, &format!("order-p p={p} m={m}"));
        }
    }
    for (p, m0, u1) in tower_sweep() {
        let a = order_p2_tower(p, m0, u1, 220).unwrap();
        check_trace_zero_criterion(&a, &format!("tower p={p} m0={m0} u1={u1}"));
    }
}

#[test]
fn criterion_4_lifting_trichotomy_matches_solver() {
    for p in PRIMES {
        let mut ms: Vec<Option<u64>> = conductor_sweep(p).into_iter().map(Some).collect();
        ms.push(None);
        for &m in &ms {
            for &mp in &ms {
                let big = m.unwrap_or(1).max(mp.unwrap_or(1));
                let prec = (4 * ((p - 1) * (big + 1) + 1) as usize).max(60);
                let a = CyclicNodeAction::standard_node_action(p, m, mp, prec).unwrap();
                let class = classify_relevability(&a).unwrap();
                match lift_first_order(&a) {
                    Ok(lift) => {
                        assert_ne!(
                            class,
                            RelevabilityClass::NonRelevable,
                            "p={p} {m:?} {mp:?}: solver lifted a non-relevable node"
                        );
                        assert!(
                            verify_lift(&a, &lift).unwrap(),
                            "p={p} {m:?} {mp:?}: produced lift fails verification"
                        );
                    }
                    Err(e) if e.is_hypothesis_violation() => {
                        assert_eq!(
                            class,
                            RelevabilityClass::NonRelevable,
                            "p={p} {m:?} {mp:?}: solver refused a relevable node: {e}"
                        );
                    }
                    Err(e) => panic!("p={p} {m:?} {mp:?}: solver failed internally: {e}"),
                }
            }
        }
    }
}

#[test]
fn criterion_5_trace_valuation_law_matches_direct_computation() {
    let mut checked = 0usize;
    let mut actions: Vec<(String, CyclicSmoothAction)> = Vec::new();
    for p in [3u64, 5] {
        for m in conductor_sweep(p) {
            if (2 * m + 1) % p != 0 {
                continue;
            }
            let prec = (6 * ((p - 1) * (m + 1) + 1) as usize).max(200);
            let a = CyclicSmoothAction::standard_action(p, m, prec).unwrap();
            actions.push((format!("p={p} m={m}"), a));
        }
    }
    actions.push(("tower p=3 m0=1 u1=4".to_string(), order_p2_tower(3, 1, 4, 300).unwrap()));
    for (label, a) in &actions {
        let profile = a.ramification_profile().unwrap();
        let p = a.p();
        for l in 1..=2 * p * p {
            let Ok(predicted) = predict_trace_valuation(&profile, l) else {
                continue;
            };
            let phi =
                VectorField::new(TruncatedSeries::monomial(p, l as usize, 1, a.precision()).unwrap());
            let theta = a.theta(&phi).unwrap();
            match theta.valuation() {
                Valuation::Finite(v) => {
                    assert_eq!(v as u64, predicted, "{label} l={l}");
                    checked += 1;
                }
                Valuation::ZeroAtPrecision(n) => {
                    panic!("{label} l={l}: theta invisible at precision {n}")
                }
            }
        }
    }
    assert!(checked >= 8, "valuation law exercised only {checked} times");
}

#[test]
fn criterion_6_node_cocycle_classes_match_congruence() {
    for p in PRIMES {
        let mut ms: Vec<Option<u64>> = conductor_sweep(p).into_iter().map(Some).collect();
        ms.push(None);
        for &m in &ms {
            let big = m.unwrap_or(1);
            let prec = (4 * ((p - 1) * (big + 1) + 1) as usize).max(60);
            let a = CyclicNodeAction::standard_node_action(p, m, Some(1), prec).unwrap();
            let expected = match m {
                None => true,
                Some(m) => (m + 1) % p == 0,
            };
            assert_eq!(
                phi_cocycle_is_coboundary(&a, Branch::X).unwrap(),
                expected,
                "p={p} m={m:?}"
            );
        }
    }
}

#[test]
fn criterion_7_global_dimensions_consistent() {
    use equideform_core::global::{dim_ext1_smooth_curve, dim_ext1_stable_curve};
    use equideform_core::{
        ComponentOrbit, Extended, GlobalCurveSpec, GlobalFlags, RamificationOrbit, SingularOrbit,
    };

    let component = |id: &str| ComponentOrbit {
        id: id.to_string(),
        quotient_genus: 2,
        component_genus: 4,
        stabilizer_order: 3,
        inertia_order: 1,
    };
    let ram = |c: &str, d: u64| RamificationOrbit {
        component: c.to_string(),
        different: d,
        stabilizer_order: 3,
        image_group_order: 3,
    };
    let flags = GlobalFlags {
        all_stabilizers_cyclic: true,
        components_genus_ge_2: true,
        action_free_on_dense_open: false,
    };

    // Node-free: the stable-curve total must collapse to the smooth
    // per-orbit formula.
    let node_free = GlobalCurveSpec {
        p: 3,
        group_order: 3,
        components: vec![component("a")],
        ramification_orbits: vec![ram("a", 6)],
        singular_orbits: vec![],
        flags: flags.clone(),
    };
    let report = dim_ext1_stable_curve(&node_free).unwrap();
    let smooth = dim_ext1_smooth_curve(&node_free).unwrap();
    assert_eq!(report.dim_ext1_total, Some(smooth));

    // The two worked totals, from numeric decorations and from series.
    let worked = |m: u64, d: u64| GlobalCurveSpec {
        p: 3,
        group_order: 3,
        components: vec![component("a"), component("b")],
        ramification_orbits: vec![ram("a", d), ram("b", d)],
        singular_orbits: vec![SingularOrbit {
            branch_components: ("a".to_string(), "b".to_string()),
            conductors: (Extended::Finite(m), Extended::Finite(m)),
            differents: (d, d),
            image_orders: (3, 3),
            stabilizer_order: 3,
            permutes_branches: false,
            relevability: None,
        }],
        flags: flags.clone(),
    };
    for (m, d, expect) in [(2u64, 6u64, 15i64), (1, 4, 12)] {
        let numeric = worked(m, d);
        assert_eq!(dim_ext1_stable_curve(&numeric).unwrap().dim_ext1_total, Some(expect));
        let action = CyclicNodeAction::standard_node_action(3, Some(m), Some(m), 60).unwrap();
        let orbit =
            SingularOrbit::from_action(&action, ("a".to_string(), "b".to_string())).unwrap();
        let mut from_series = worked(m, d);
        from_series.singular_orbits = vec![orbit];
        assert_eq!(
            dim_ext1_stable_curve(&from_series).unwrap().dim_ext1_total,
            Some(expect)
        );
    }
}

#[test]
fn criterion_8_oracle_results_stable_under_window_bump() {
    for (p, m) in [(2u64, 3u64), (3, 2), (5, 3)] {
        let d = (p - 1) * (m + 1);
        let (window, ambient) = default_window(d, m, p);
        let g = p as usize;
        let a = CyclicSmoothAction::standard_action(p, m, ambient + 4 * g + 16).unwrap();
        // Each call already re-runs at a bumped window internally and
        // errors on disagreement; on top of that the reported value must
        // not move when the whole window is shifted.
        let base = h1_dimension_bruteforce(&OracleInput::Smooth(&a), window, ambient).unwrap();
        let bumped =
            h1_dimension_bruteforce(&OracleInput::Smooth(&a), window + g, ambient + 2 * g).unwrap();
        assert_eq!(base, bumped, "p={p} m={m}");
    }
    let a = CyclicNodeAction::standard_node_action(3, Some(2), Some(2), 80).unwrap();
    let base = h1_dimension_bruteforce(&OracleInput::Node(&a), 24, 40).unwrap();
    let bumped = h1_dimension_bruteforce(&OracleInput::Node(&a), 27, 46).unwrap();
    assert_eq!(base, bumped);
}
