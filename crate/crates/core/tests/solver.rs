use kmcds::connectivity::{is_k_connected, is_m_dominating, validate_certificate, ConnectivityFailure};
use kmcds::generate::{gen_gnp, gen_unit_disk, WeightRange};
use kmcds::guarantee::ratio_within_log_bound;
use kmcds::oracle::opt_kmcds;
use kmcds::rooted::Backend;
use kmcds::solver::{precheck, Precheck, RootRule};
use kmcds::{solve_general, solve_guess_root, solve_unit_disk, Error, Graph, Instance, NodeSet, Rational, RationalPoint, SolutionReport, SolverConfig};

fn unit(g: Graph, k: usize, m: usize) -> Instance {
    let n = g.slot_count();
    Instance::new(g, vec![1; n], k, m).unwrap()
}

fn assert_feasible(inst: &Instance, report: &SolutionReport) {
    let g = inst.graph();
    assert!(is_m_dominating(g, &report.solution, inst.m()).dominating);
    assert!(is_k_connected(&g.induced_subgraph(&report.solution), inst.k()));
    validate_certificate(g, &report.solution, inst.k(), inst.m(), &report.certificate).unwrap();
    let w = &report.weights;
    assert!(w.terminals + w.rooted + w.paths + w.anchor >= w.total);
    assert_eq!(w.total, inst.weight_of(&report.solution));
    assert!(report.forest.is_acyclic());
    assert!(report.forest.len() < inst.k().max(1));
}

#[test]
fn precheck_examples() {
    assert_eq!(precheck(&unit(Graph::complete(5), 3, 3)), Precheck::Ok);
    match precheck(&unit(Graph::path(4), 2, 2)) {
        Precheck::Infeasible(ConnectivityFailure::Separator { separator, .. }) => {
            assert_eq!(separator.len(), 1);
            let v = separator.as_slice()[0];
            assert!(v == 1 || v == 2, "cut vertex expected, got {v}");
        }
        other => panic!("unexpected {other:?}"),
    }
    assert_eq!(precheck(&unit(Graph::petersen(), 3, 3)), Precheck::Ok);
}

#[test]
fn complete_graph_returns_everything() {
    for k in 1..=4 {
        let inst = unit(Graph::complete(k + 1), k, k);
        let report = solve_general(&inst, &SolverConfig::default()).unwrap();
        assert_feasible(&inst, &report);
        assert_eq!(report.solution, NodeSet::full(k + 1));
        assert_eq!(report.weights.total, k as u64 + 1);
        assert_eq!(opt_kmcds(&inst).unwrap().unwrap().weight, k as u64 + 1);
    }
}

#[test]
fn five_cycle_k1() {
    let inst = unit(Graph::cycle(5), 1, 1);
    let report = solve_general(&inst, &SolverConfig::default()).unwrap();
    assert_feasible(&inst, &report);
    let opt = opt_kmcds(&inst).unwrap().unwrap();
    assert_eq!(opt.weight, 3);
    assert_eq!(report.weights.total, 3);
    let (_, max_degree) = inst.graph().degree_stats();
    assert!(report.guarantee.is_within(report.weights.total as u128, opt.weight as u128, max_degree, 1));

    let faithful = SolverConfig {
        prune: false,
        ..SolverConfig::default()
    };
    let raw = solve_general(&inst, &faithful).unwrap();
    assert_feasible(&inst, &raw);
    assert!(raw.pruned.is_empty());
    assert!(ratio_within_log_bound(raw.weights.total as u128, 3, raw.guarantee.backend_factor_value, 3));
}

#[test]
fn zero_weights_give_zero_total() {
    let inst = Instance::new(Graph::petersen(), vec![0; 10], 2, 3).unwrap();
    for backend in [Backend::FlowUnion, Backend::Exact] {
        let report = solve_general(&inst, &SolverConfig::default().with_backend(backend)).unwrap();
        assert_feasible(&inst, &report);
        assert_eq!(report.weights.total, 0);
    }
}

#[test]
fn infeasible_instances_are_reported() {
    let err = solve_general(&unit(Graph::path(4), 2, 2), &SolverConfig::default()).unwrap_err();
    match err {
        Error::Infeasible { witness, .. } => assert_eq!(witness.len(), 1),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn root_enumeration_never_loses_to_min_weight() {
    for seed in 0..6 {
        let inst = gen_gnp(12, 0.55, WeightRange::new(1, 9).unwrap(), 2, 3, seed).unwrap();
        if precheck(&inst) != Precheck::Ok {
            continue;
        }
        let faithful = SolverConfig {
            prune: false,
            ..SolverConfig::default()
        };
        let base = solve_general(&inst, &faithful).unwrap();
        let enumerated = solve_general(
            &inst,
            &SolverConfig {
                root_rule: RootRule::Enumerate,
                ..faithful
            },
        )
        .unwrap();
        assert_feasible(&inst, &enumerated);
        assert!(enumerated.weights.total <= base.weights.total);
    }
}

fn circle_points() -> Vec<RationalPoint> {
    // vertices of a regular hexagon with rational coordinates are not exact; use a
    // hexagon-like ring on the 1/10 grid instead
    [(5, 0), (9, 3), (9, 7), (5, 10), (1, 7), (1, 3)]
        .iter()
        .map(|&(x, y)| RationalPoint::new(Rational::new(x, 10), Rational::new(y, 10)))
        .collect()
}

#[test]
fn unit_disk_examples() {
    let k6 = Instance::unit_disk(circle_points(), Rational::from_integer(2), vec![1; 6], 2, 2).unwrap();
    assert_eq!(k6.graph().edge_count(), 15);
    let report = solve_unit_disk(&k6, &SolverConfig::default()).unwrap();
    assert_feasible(&k6, &report);
    assert!(report.conversion.as_ref().is_none_or(|c| c.holds));
    let opt = opt_kmcds(&k6).unwrap().unwrap();
    assert_eq!(opt.weight, 3);
    let (_, max_degree) = k6.graph().degree_stats();
    assert!(report.guarantee.is_within(report.weights.total as u128, opt.weight as u128, max_degree, 2));

    let grid: Vec<RationalPoint> = (0..9)
        .map(|i| RationalPoint::new(Rational::from_integer(i % 3), Rational::from_integer(i / 3)))
        .collect();
    let g9 = Instance::unit_disk(grid, Rational::from_integer(1), vec![1; 9], 1, 1).unwrap();
    assert_eq!(g9.graph().edge_count(), 12);
    let report = solve_unit_disk(&g9, &SolverConfig::default()).unwrap();
    assert_feasible(&g9, &report);
    let opt = opt_kmcds(&g9).unwrap().unwrap();
    assert_eq!(opt.weight, 3);
    assert!(report.weights.total >= opt.weight);

    let spread: Vec<RationalPoint> = (0..4)
        .map(|i| RationalPoint::new(Rational::from_integer(i), Rational::from_integer(0)))
        .collect();
    let apart = Instance::unit_disk(spread, Rational::new(1, 2), vec![1; 4], 1, 1).unwrap();
    assert!(solve_unit_disk(&apart, &SolverConfig::default()).unwrap_err().is_infeasible());

    assert!(matches!(
        solve_unit_disk(&unit(Graph::complete(4), 1, 1), &SolverConfig::default()),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn guess_root_examples() {
    let k4 = unit(Graph::complete(4), 3, 3);
    let report = solve_guess_root(&k4, &SolverConfig::default()).unwrap();
    assert_feasible(&k4, &report);
    assert_eq!(report.weights.total, 4);
    assert!(report.forest.is_empty() && report.paths.is_empty() && !report.fell_back);

    let petersen = unit(Graph::petersen(), 3, 3);
    let report = solve_guess_root(&petersen, &SolverConfig::default()).unwrap();
    assert_feasible(&petersen, &report);
    assert!(report.forest.is_empty() && report.paths.is_empty() && !report.fell_back);

    let c5 = unit(Graph::cycle(5), 2, 2);
    let report = solve_guess_root(&c5, &SolverConfig::default()).unwrap();
    assert_feasible(&c5, &report);
    assert_eq!(report.solution, NodeSet::full(5));
    assert_eq!(opt_kmcds(&c5).unwrap().unwrap().weight, 5);

    assert!(matches!(
        solve_guess_root(&unit(Graph::complete(6), 4, 4), &SolverConfig::default()),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn random_instances_all_variants() {
    let w = WeightRange::new(1, 20).unwrap();
    let mut solved = 0;
    for seed in 0..40u64 {
        let k = 1 + (seed % 3) as usize;
        let inst = if seed % 2 == 0 {
            gen_gnp(16, 0.5, w, k, k + (seed % 2) as usize, seed).unwrap()
        } else {
            gen_unit_disk(16, Rational::new(1, 2), w, k, k + 1, seed).unwrap()
        };
        if precheck(&inst) != Precheck::Ok {
            continue;
        }
        solved += 1;
        let cfg = SolverConfig::default();
        assert_feasible(&inst, &solve_general(&inst, &cfg).unwrap());
        if inst.geometry().is_some() {
            let report = solve_unit_disk(&inst, &cfg).unwrap();
            assert_feasible(&inst, &report);
            assert!(report.conversion.unwrap().holds);
        }
        if (2..=3).contains(&k) {
            let report = solve_guess_root(&inst, &cfg).unwrap();
            assert_feasible(&inst, &report);
            assert!(report.forest.is_empty() && report.paths.is_empty());
        }
    }
    assert!(solved >= 10, "only {solved} feasible instances");
}

#[test]
fn timings_only_when_requested() {
    let inst = unit(Graph::petersen(), 2, 2);
    let quiet = solve_general(&inst, &SolverConfig::default()).unwrap();
    assert!(quiet.timings.is_none());
    let timed = solve_general(
        &inst,
        &SolverConfig {
            record_timings: true,
            ..SolverConfig::default()
        },
    )
    .unwrap();
    assert!(timed.timings.is_some());
}
