//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero if a
//! required criterion fails. Optional tiers are reported but never fail the run.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use pmu_sched::bnb::{greedy_baseline, solve, solve_observed, Limits, SolveOptions};
use pmu_sched::grid::{
    build_admittance, bundled_case, derive, parse_case, place_pmus_with, Placement,
    PlacementLimits, PowerNetwork,
};
use pmu_sched::harness::verify::{run_verify, trial_specs, VerifyConfig};
use pmu_sched::lagrangian::{build_cost_matrix, compute_bound, init_multipliers, LagrangianState};
use pmu_sched::sched::oracle::count_linear_extensions;
use pmu_sched::sched::{evaluate_schedule, random_instance, wspt_order, Instance};
use pmu_sched::trace::{Event, Observer};

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

fn trace_instance() -> Instance {
    Instance::new(vec![1, 2, 3], vec![3, 2, 1], &[(2, 0)]).unwrap()
}

fn no_precedence_instances() -> Vec<Instance> {
    (0..100u64)
        .map(|s| random_instance(10_000 + s, 1 + (s as usize % 10), 0.0, 10))
        .collect()
}

fn oracle_instances() -> Vec<(Instance, u64)> {
    trial_specs(&VerifyConfig::default())
        .into_iter()
        .map(|t| (random_instance(t.seed, t.n, t.density, 10), t.seed))
        .collect()
}

fn c1_oracle() -> Outcome {
    let started = Instant::now();
    let report = run_verify(&VerifyConfig::default()).unwrap();
    let elapsed = started.elapsed();
    let detail = format!(
        "{}/{} trials exact, N 2..8, densities 0/0.2/0.5, {:.1}s",
        report.passed(),
        report.trials,
        elapsed.as_secs_f64()
    );
    if !report.ok() {
        return fail(format!(
            "{detail}; first failure: {}",
            report.failures[0].reason
        ));
    }
    if elapsed > Duration::from_secs(60) {
        return fail(format!("{detail} exceeds 60s"));
    }
    pass(detail)
}

fn c2_trace() -> Outcome {
    let inst = trace_instance();
    let lb0 = init_multipliers(&build_cost_matrix(&inst), inst.self_cost())
        .unwrap()
        .lb();
    let reference = evaluate_schedule(&inst, &[1, 2, 0]).unwrap();
    let out = compute_bound(&inst, &reference).unwrap();
    let solved = solve(&inst, &SolveOptions::default());
    let got = (
        lb0,
        out.state.r(),
        out.state.constraints().first().map(|c| c.beta()),
        out.lb(),
        out.schedule.as_ref().map(|s| s.order().to_vec()),
        out.upper_bound,
        solved.best_objective,
        solved.nodes_explored,
        solved.proven_optimal,
    );
    let want = (
        23,
        1,
        Some(4),
        27,
        Some(vec![1, 2, 0]),
        Some(27),
        27,
        1,
        true,
    );
    let detail = format!(
        "LB0={} constraints={} beta={:?} LB1={} order={:?} UB={:?} solve={} nodes={}",
        got.0,
        got.1,
        got.2,
        got.3,
        got.4
            .as_ref()
            .map(|o| o.iter().map(|j| j + 1).collect::<Vec<_>>()),
        got.5,
        got.6,
        got.7
    );
    if got == want {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn c3_wspt() -> Outcome {
    let insts = no_precedence_instances();
    let mismatches = insts
        .iter()
        .filter(|inst| {
            let lb0 = init_multipliers(&build_cost_matrix(inst), inst.self_cost())
                .unwrap()
                .lb();
            lb0 != wspt_order(inst).unwrap().objective()
        })
        .count();
    let detail = format!(
        "{}/{} instances LB0 == WSPT",
        insts.len() - mismatches,
        insts.len()
    );
    if mismatches == 0 {
        pass(detail)
    } else {
        fail(detail)
    }
}

/// Checks bound invariants at every constraint application and every search node.
#[derive(Default)]
struct InvariantObserver {
    applications: u64,
    nodes: u64,
    violations: Vec<String>,
}

impl Observer for InvariantObserver {
    fn on_event(&mut self, event: &Event<'_>, state: Option<&LagrangianState>) {
        match event {
            Event::Applied { lb_before, .. } | Event::Strengthened { lb_before, .. } => {
                self.applications += 1;
                let state = state.expect("bound events carry the state");
                if state.lb() < *lb_before {
                    self.violations
                        .push(format!("lb fell from {lb_before} to {}", state.lb()));
                }
                if let Err(e) = state.check_invariants() {
                    self.violations.push(e);
                }
            }
            Event::NodeBounded {
                instance,
                reference,
                extracted,
                upper_bound,
                ..
            } => {
                self.nodes += 1;
                let state = state.expect("node events carry the state");
                let lb = state.lb();
                let ref_obj = evaluate_schedule(instance, reference).unwrap().objective();
                if lb > ref_obj {
                    self.violations
                        .push(format!("node lb {lb} above feasible schedule {ref_obj}"));
                }
                if let (Some(order), Some(ub)) = (extracted, upper_bound) {
                    let direct = evaluate_schedule(instance, order).unwrap().objective();
                    if *ub != direct {
                        self.violations
                            .push(format!("UB formula {ub} != objective {direct}"));
                    }
                    if lb > *ub {
                        self.violations
                            .push(format!("node lb {lb} above node UB {ub}"));
                    }
                }
            }
            _ => {}
        }
    }
}

fn c4_invariants() -> Outcome {
    let mut obs = InvariantObserver::default();
    let mut runs: Vec<(Instance, u64)> = oracle_instances();
    runs.push((trace_instance(), 0));
    runs.extend(no_precedence_instances().into_iter().map(|i| (i, 0)));
    for (inst, seed) in &runs {
        let r = solve_observed(
            inst,
            &SolveOptions {
                seed: *seed,
                ..Default::default()
            },
            &mut obs,
        );
        if r.global_lb > r.best_objective {
            obs.violations.push(format!(
                "global lb {} above incumbent {}",
                r.global_lb, r.best_objective
            ));
        }
    }
    let detail = format!(
        "{} solves, {} nodes, {} constraint steps, {} violations",
        runs.len(),
        obs.nodes,
        obs.applications,
        obs.violations.len()
    );
    match obs.violations.first() {
        None => pass(detail),
        Some(v) => fail(format!("{detail}; first: {v}")),
    }
}

fn network(name: &str) -> PowerNetwork {
    parse_case(bundled_case(name).unwrap()).unwrap()
}

fn timed_placement(name: &str, cap: Duration) -> (Placement, Duration, PowerNetwork) {
    let net = network(name);
    let started = Instant::now();
    let p = place_pmus_with(
        &net,
        PlacementLimits {
            node_cap: None,
            time_cap: Some(cap),
        },
    );
    (p, started.elapsed(), net)
}

fn c5_placement() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (name, want) in [
        ("case14", 4),
        ("case30", 10),
        ("case39", 13),
        ("case57", 17),
    ] {
        let (p, took, net) = timed_placement(name, Duration::from_secs(60));
        let good = p.n() == want && p.optimal && p.covers(&net) && took <= Duration::from_secs(60);
        ok &= good;
        parts.push(format!(
            "{name}: N={} (want {want}) optimal={} {:.2}s",
            p.n(),
            p.optimal,
            took.as_secs_f64()
        ));
    }
    if ok {
        pass(parts.join("; "))
    } else {
        fail(parts.join("; "))
    }
}

fn c5_optional_118() -> Outcome {
    let (p, took, net) = timed_placement("case118", Duration::from_secs(600));
    let detail = format!(
        "case118: N={} (want 32) optimal={} {:.2}s",
        p.n(),
        p.optimal,
        took.as_secs_f64()
    );
    if p.n() == 32 && p.optimal && p.covers(&net) {
        pass(detail)
    } else {
        fail(detail)
    }
}

/// Smallest k admitting a k-bus cover, by enumeration.
fn min_cover_size(net: &PowerNetwork) -> usize {
    let ids: Vec<u32> = net.buses().iter().map(|b| b.id).collect();
    let b = ids.len();
    assert!(b <= 20);
    (1..=b)
        .find(|&k| {
            (0u32..1 << b).any(|mask| {
                mask.count_ones() as usize == k
                    && Placement {
                        buses: (0..b)
                            .filter(|i| mask >> i & 1 == 1)
                            .map(|i| ids[i])
                            .collect(),
                        optimal: false,
                        nodes: 0,
                    }
                    .covers(net)
            })
        })
        .unwrap()
}

fn c6_ieee14() -> Outcome {
    let net = network("case14");
    let d = derive(&net, 0, PlacementLimits::default()).unwrap();
    let target = [9u32, 6, 7, 2];
    let mut problems = Vec::new();
    if d.placement.buses != [2, 6, 7, 9] || !d.placement.covers(&net) {
        problems.push(format!("placement {:?}", d.placement.buses));
    }
    if min_cover_size(&net) != 4 {
        problems.push("{2,6,7,9} is not a minimum cover".to_string());
    }
    let mut sorted = d.chain.clone();
    sorted.sort_unstable();
    if sorted != d.placement.buses {
        problems.push(format!(
            "chain {:?} is not a permutation of the placement",
            d.chain
        ));
    }
    if count_linear_extensions(&d.instance) != 1 || build_admittance(&net).is_err() {
        problems.push("derived precedence is not a total order".to_string());
    }
    let chain = |c: &[u32]| {
        c.iter()
            .map(|b| format!("PMU{b}"))
            .collect::<Vec<_>>()
            .join(">")
    };
    let chain_note = if d.chain == target {
        format!("chain {} matches the target", chain(&d.chain))
    } else {
        format!(
            "DISCREPANCY: derived chain {} differs from target {} under the pi-model admittance",
            chain(&d.chain),
            chain(&target)
        )
    };
    let detail = format!(
        "placement {:?} minimal, sigma={:.4?}, weights by rank {:?}; {chain_note}",
        d.placement.buses, d.svd.singular_values, d.weights
    );
    if problems.is_empty() {
        pass(detail)
    } else {
        fail(format!("{}; {detail}", problems.join("; ")))
    }
}

fn c7_greedy() -> Outcome {
    let mut insts: Vec<(Instance, bool)> = Vec::new();
    for n in [6, 10, 14, 18] {
        for density in [0.0, 0.2, 0.5] {
            for seed in 0..5 {
                insts.push((random_instance(seed * 31 + n as u64, n, density, 10), false));
            }
        }
        for seed in 0..3 {
            insts.push((random_instance(seed + 500, n, 1.0, 10), true));
        }
    }
    for name in ["case14", "case30", "case39", "case57"] {
        let d = derive(&network(name), 1, PlacementLimits::default()).unwrap();
        insts.push((d.instance, true));
    }
    let opts = SolveOptions {
        limits: Limits {
            node_cap: Some(100_000),
            time_cap: None,
        },
        seed: 0,
    };
    let mut proven = 0;
    let mut problems = Vec::new();
    for (inst, chain) in &insts {
        let r = solve(inst, &opts);
        let g = greedy_baseline(inst);
        if r.proven_optimal {
            proven += 1;
            if r.best_objective > g.objective() {
                problems.push(format!(
                    "bnb {} > greedy {}",
                    r.best_objective,
                    g.objective()
                ));
            }
        }
        if *chain && (r.best_schedule.order() != g.order() || r.best_objective != g.objective()) {
            problems.push(format!("chain instance with n={} differs", inst.n_jobs()));
        }
    }
    let detail = format!("{} instances, {proven} proven optimal", insts.len());
    match problems.first() {
        None => pass(detail),
        Some(p) => fail(format!("{detail}; {p}")),
    }
}

fn c8_scale() -> Outcome {
    let chain = random_instance(156, 156, 1.0, 10);
    let started = Instant::now();
    let r = solve(&chain, &SolveOptions::default());
    let chain_time = started.elapsed();
    let chain_ok = r.proven_optimal
        && r.nodes_explored == 1
        && r.best_schedule.order() == (0..156).collect::<Vec<_>>()
        && chain_time < Duration::from_secs(1);

    let inst = random_instance(32, 32, 0.3, 10);
    let mut obs = InvariantObserver::default();
    let started = Instant::now();
    let r32 = solve_observed(
        &inst,
        &SolveOptions {
            limits: Limits {
                node_cap: Some(100_000),
                time_cap: None,
            },
            seed: 0,
        },
        &mut obs,
    );
    let ok32 = (r32.proven_optimal || r32.nodes_explored == 100_000)
        && obs.violations.is_empty()
        && r32.global_lb <= r32.best_objective;
    let detail = format!(
        "156-job chain: {:.3}s, {} node(s); 32-job d=0.3: objective {} lb {} proven={} nodes={} {:.1}s, {} violations",
        chain_time.as_secs_f64(),
        r.nodes_explored,
        r32.best_objective,
        r32.global_lb,
        r32.proven_optimal,
        r32.nodes_explored,
        started.elapsed().as_secs_f64(),
        obs.violations.len()
    );
    if chain_ok && ok32 {
        pass(detail)
    } else {
        fail(detail)
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, bool, fn() -> Outcome); 9] = [
        ("1 oracle optimality", true, c1_oracle),
        ("2 lagrangian hand trace", true, c2_trace),
        ("3 no-precedence identity", true, c3_wspt),
        ("4 bound invariants", true, c4_invariants),
        ("5 placement counts", true, c5_placement),
        ("5 placement IEEE-118 (optional)", false, c5_optional_118),
        ("6 IEEE-14 pipeline", true, c6_ieee14),
        ("7 greedy dominance", true, c7_greedy),
        ("8 scale substitutes", true, c8_scale),
    ];
    let mut failed = 0;
    for (name, required, check) in criteria {
        let started = Instant::now();
        let out = check();
        let status = match (out.ok, required) {
            (true, _) => "PASS",
            (false, true) => {
                failed += 1;
                "FAIL"
            }
            (false, false) => "FAIL (optional)",
        };
        println!(
            "[{status}] criterion {name} ({:.1}s): {}",
            started.elapsed().as_secs_f64(),
            out.detail
        );
    }
    println!("acceptance: {} required criteria failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
