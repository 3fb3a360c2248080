mod common;

use tsr_core::prelude::*;
use tsr_core::solvers::TndContext;

use common::*;

const SIX_CLASSES_TEXT: &str = include_str!("data/six_classes.tg");

#[test]
fn fixture_file_matches_builder() {
    let parsed = parse_instance(SIX_CLASSES_TEXT).unwrap();
    let (built, _) = six_classes();
    assert_eq!(parsed, built);
    assert_eq!(parsed.n(), 26);
    assert_eq!(parsed.tau(), 3);
}

#[test]
fn six_classes_partition_and_kinds() {
    let (g, classes) = six_classes();
    let p = tnd_partition(&g);
    assert_eq!(p.classes(), classes.as_slice());
    assert_eq!(p.sizes(), SIX_SIZES.to_vec());
    let tnd = tnd_graph(&g, &p).unwrap();
    for t in 1..=3 {
        for (i, kinds) in SIX_KINDS.iter().enumerate() {
            let want = if kinds.as_bytes()[t - 1] == b'C' {
                ClassKind::Clique
            } else {
                ClassKind::Independent
            };
            assert_eq!(tnd.kind(t, i), want, "class {} at t={t}", i + 1);
        }
        for i in 0..6 {
            for j in 0..6 {
                let listed = SIX_CLASS_EDGES[t - 1]
                    .iter()
                    .any(|&(a, b)| (a - 1, b - 1) == (i, j) || (a - 1, b - 1) == (j, i));
                assert_eq!(tnd.adjacent(t, i, j), listed);
            }
        }
    }
}

#[test]
fn ds_bounds_on_six_classes() {
    let (g, _) = six_classes();
    let ds = ProblemDescriptor::dominating_set();
    let ctx = TndContext::new(&g, &ds).unwrap();
    let ndld = ctx.ndld();
    let y: ClassSet = [0, 1, 2].into_iter().collect();
    assert!(ndld.check(&ctx.tnd, 1, y));
    let bounds = |i| (ndld.low(&ctx.tnd, 1, y, i), ndld.up(&ctx.tnd, 1, y, i));
    assert_eq!(bounds(0), (1, 3));
    assert_eq!(bounds(1), (1, 4));
    assert_eq!(bounds(3), (0, 0));
}

#[test]
fn is_bounds_on_six_classes_at_step_three() {
    let (g, _) = six_classes();
    let is = ProblemDescriptor::independent_set();
    let ctx = TndContext::new(&g, &is).unwrap();
    let ndld = ctx.ndld();
    let y: ClassSet = [0, 1].into_iter().collect();
    assert!(ndld.check(&ctx.tnd, 3, y));
    // both classes induce cliques at t=3
    assert_eq!(
        (ndld.low(&ctx.tnd, 3, y, 0), ndld.up(&ctx.tnd, 3, y, 0)),
        (1, 1)
    );
    assert_eq!(
        (ndld.low(&ctx.tnd, 3, y, 1), ndld.up(&ctx.tnd, 3, y, 1)),
        (1, 1)
    );
}

#[test]
fn candidate_on_six_classes_matches_orbit_search() {
    let (g, classes) = six_classes();
    let ds = ProblemDescriptor::dominating_set();
    let ctx = TndContext::new(&g, &ds).unwrap();
    let y = vec![vec![0, 1, 2], vec![1, 2, 5], vec![1, 2, 4, 5]];
    let candidate = CandidateSequence::new(y.iter().map(|s| s.iter().copied().collect()).collect());
    let (_, outcome) = ctx.evaluate(&candidate).unwrap();
    let (flow, seq) = outcome.unwrap();
    assert_eq!(flow.total_cost, 9);
    assert_eq!(seq.size(), 9);
    assert_eq!(
        compatible_optimum(&g, &classes, &y, &dominates, false),
        Some(9)
    );
    assert!(check_solution(&g, &ds, &seq.sets).is_ok());
}

#[test]
fn six_classes_full_solve_is_verified() {
    let (g, _) = six_classes();
    for prob in [
        ProblemDescriptor::dominating_set(),
        ProblemDescriptor::independent_set(),
    ] {
        let opts = TndOptions {
            jobs: 0,
            ..TndOptions::default()
        };
        let r = solve_tnd_with(&g, &prob, &opts, None).unwrap().unwrap();
        assert!(check_solution(&g, &prob, &r.sequence.sets).is_ok());
        let approx_bound = solve_approx(&g, &ProblemDescriptor::dominating_set())
            .unwrap()
            .size();
        if prob.name == "ds" {
            assert!(r.size() <= approx_bound);
        }
    }
}

#[test]
fn edgeless_last_snapshot_forces_all_vertices() {
    let mut rng = rng(4);
    for _ in 0..20 {
        let g0 = random_temporal(&mut rng, 6, 2, 0.5);
        // drop every label at t = 3 by extending the lifetime
        let edges: Vec<_> = g0
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.labels.to_vec()))
            .collect();
        let g = TemporalGraph::new(6, 3, edges).unwrap();
        let ds = ProblemDescriptor::dominating_set();
        let r = solve_tnd(&g, &ds).unwrap().unwrap();
        assert_eq!(r.size(), 6);
        assert_eq!(r.sequence.sets[2].len(), 6);
    }
}

#[test]
fn infeasible_custom_problem_is_reported_by_exact_methods() {
    // two vertices are required while the edge is active, one afterwards
    let g = TemporalGraph::new(3, 2, [(0, 1, vec![1])]).unwrap();
    let wanted = |s: &StaticGraph| if s.edge_count() > 0 { 2 } else { 1 };
    let parity =
        ProblemDescriptor::new("parity", Sense::Minimize, move |s, x| x.len() == wanted(s))
            .with_enumerator(move |s, _| {
                Ok((0..1u64 << s.n())
                    .map(TokenSet::from_mask)
                    .filter(|x| x.len() == wanted(s))
                    .collect())
            });
    assert_eq!(solve_brute(&g, &parity).unwrap(), None);
    assert_eq!(solve_enum(&g, &parity).unwrap(), None);
}
