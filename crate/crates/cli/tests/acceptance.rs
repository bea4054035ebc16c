//! Acceptance criteria. Runs as a plain binary (`harness = false`) so every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use switchctl::commands::{EXIT_CONTROLLABLE, EXIT_UNCONTROLLABLE};
use switchctl::{analyze, generate, AnalyzeOptions, GenParams};
use switchctl_core::exact::Matrix;
use switchctl_core::oracle::{form_i_by_permutation, form_ii_by_permutation};
use switchctl_core::switched::{DEFAULT_BOUND, DEFAULT_ENUMERATION_CAP};
use switchctl_core::{
    decide, enumerate_controllability_matrix, extract_pair, instantiate_all, is_connected,
    is_leader_follower_connected, kalman_matrix, reachable_subspace_rank, union_graph, DecideOptions, Pattern,
    StructuredPair, SwitchedNetwork,
};

const TRIALS: u64 = 5;
const EDGE_PROBS: [f64; 3] = [0.2, 0.4, 0.7];
const PERMUTATION_CAP: u128 = 1_000_000;

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn network(params: &GenParams) -> SwitchedNetwork {
    generate(params).unwrap().to_network().unwrap()
}

fn pairs(net: &SwitchedNetwork) -> Vec<StructuredPair> {
    net.snapshots().iter().map(extract_pair).collect()
}

fn some_draw_has_full_rank(net: &SwitchedNetwork, seed: u64) -> bool {
    let p = pairs(net);
    let n = p[0].n_states();
    (0..TRIALS).any(|t| {
        let numeric = instantiate_all(&p, seed.wrapping_mul(TRIALS).wrapping_add(t), DEFAULT_BOUND).unwrap();
        reachable_subspace_rank(&numeric).unwrap() == n
    })
}

fn verdict(net: &SwitchedNetwork) -> bool {
    decide(net, &DecideOptions::default()).unwrap().structurally_controllable
}

fn criterion_1() -> Outcome {
    let opts = AnalyzeOptions {
        certify: true,
        ..Default::default()
    };
    let report = analyze(&data("fig1.json"), &opts).unwrap();
    let analyzed = report.code == EXIT_CONTROLLABLE && report.stdout.contains("certificate: rank 3/3 full");

    let net = switchctl::NetworkDocument::read(&data("fig1.json")).unwrap().to_network().unwrap();
    let ones: Vec<_> = pairs(&net).iter().map(|p| p.constant(1)).collect();
    let rank = reachable_subspace_rank(&ones).unwrap();
    let b1 = ones[0].b.column(0);
    let b2 = ones[1].b.column(0);
    let a1b2 = ones[0].a.mul_vec(&b2);
    let independent = Matrix::from_columns(3, &[b1, b2, a1b2]).rank() == 3;
    outcome(
        analyzed && rank == 3 && independent,
        format!("analyze exit {}, all-ones rank {rank}, B1/B2/A1B2 independent: {independent}", report.code),
    )
}

fn criterion_2() -> Outcome {
    let report = analyze(&data("fig2.json"), &AnalyzeOptions::default()).unwrap();
    let analyzed = report.code == EXIT_UNCONTROLLABLE && report.stdout.contains("witness: isolated agent 2");

    let net = switchctl::NetworkDocument::read(&data("fig2.json")).unwrap().to_network().unwrap();
    let p = pairs(&net);
    let row = net.followers().binary_search(&2).unwrap();
    let mut zero_row_every_time = true;
    let mut max_rank = 0;
    for seed in 0..100 {
        let numeric = instantiate_all(&p, seed, DEFAULT_BOUND).unwrap();
        let c = enumerate_controllability_matrix(&numeric, DEFAULT_ENUMERATION_CAP).unwrap();
        zero_row_every_time &= c.matrix.row_is_zero(row);
        max_rank = max_rank.max(c.matrix.rank());
    }
    outcome(
        analyzed && zero_row_every_time && max_rank <= 2,
        format!(
            "analyze exit {}, agent-2 row zero in all 100 draws: {zero_row_every_time}, max rank {max_rank}",
            report.code
        ),
    )
}

/// Generated networks versus "some of 5 draws reaches full rank".
fn agreement_suite(count: usize, leader_choices: &[usize]) -> (usize, usize, usize, Vec<String>) {
    let mut disagreements = Vec::new();
    let mut positives = 0;
    let mut checked = 0;
    let mut i = 0u64;
    while checked < count {
        let leaders = leader_choices[i as usize % leader_choices.len()];
        let agents = 3 + (i as usize / leader_choices.len()) % 4;
        let snapshots = 1 + (i as usize / 7) % 3;
        let edge_prob = EDGE_PROBS[(i as usize / 3) % 3];
        i += 1;
        if agents <= leaders {
            continue;
        }
        let net = network(&GenParams {
            agents,
            leaders,
            snapshots,
            edge_prob,
            seed: i,
        });
        let union = union_graph(&net);
        let graph = if leaders == 1 {
            is_connected(&union)
        } else {
            is_leader_follower_connected(&union)
        };
        let numeric = some_draw_has_full_rank(&net, i);
        if graph != numeric || verdict(&net) != graph {
            disagreements.push(format!("agents={agents} leaders={leaders} m={snapshots} p={edge_prob} seed={i}"));
        }
        positives += graph as usize;
        checked += 1;
    }
    (checked, positives, disagreements.len(), disagreements)
}

fn criterion_3() -> Outcome {
    let (n, pos, bad, examples) = agreement_suite(500, &[1]);
    outcome(
        bad == 0,
        format!("{n} networks ({pos} connected), {bad} disagreements {examples:?}"),
    )
}

fn criterion_4() -> Outcome {
    let (n, pos, bad, examples) = agreement_suite(300, &[2, 3]);
    outcome(
        bad == 0,
        format!("{n} networks ({pos} leader-follower connected), {bad} disagreements {examples:?}"),
    )
}

/// Drops each free diagonal entry with probability 1/2 so that Form II
/// actually occurs.
fn thinned(pair: &StructuredPair, rng: &mut ChaCha8Rng) -> StructuredPair {
    let mut a: Pattern = pair.a().clone();
    for i in 0..a.rows() {
        if rng.gen_bool(0.5) {
            a.set(i, i, false);
        }
    }
    StructuredPair::from_patterns(a, pair.b().clone()).unwrap()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut disagreements = [0usize; 4];
    let mut checks = [0usize; 4];
    let mut form_ii_seen = 0;
    for i in 0..200u64 {
        let states = rng.gen_range(1..=4);
        let leaders = rng.gen_range(1..=2);
        let net = network(&GenParams {
            agents: states + leaders,
            leaders,
            snapshots: rng.gen_range(1..=3),
            edge_prob: EDGE_PROBS[i as usize % 3],
            seed: i,
        });
        let p = pairs(&net);
        let numeric = instantiate_all(&p, i, DEFAULT_BOUND).unwrap();

        let enumerated = enumerate_controllability_matrix(&numeric, DEFAULT_ENUMERATION_CAP).unwrap();
        checks[0] += 1;
        disagreements[0] += (reachable_subspace_rank(&numeric).unwrap() != enumerated.matrix.rank()) as usize;

        let mut structured = p.clone();
        structured.push(StructuredPair::sum(&p).unwrap());
        let thinned_pairs: Vec<_> = structured.iter().map(|s| thinned(s, &mut rng)).collect();
        structured.extend(thinned_pairs);
        for s in &structured {
            checks[1] += 1;
            disagreements[1] +=
                (s.is_form_i() != form_i_by_permutation(s, PERMUTATION_CAP).unwrap().is_some()) as usize;
            checks[2] += 1;
            let slow = form_ii_by_permutation(s, PERMUTATION_CAP).unwrap();
            form_ii_seen += slow as usize;
            disagreements[2] += (s.is_form_ii() != slow) as usize;
        }

        for single in &numeric {
            checks[3] += 1;
            let switched = reachable_subspace_rank(std::slice::from_ref(single)).unwrap();
            disagreements[3] += (switched != kalman_matrix(single).rank()) as usize;
        }
    }
    outcome(
        disagreements.iter().all(|&d| d == 0),
        format!(
            "fixpoint/enumerated {}/{} disagree, form I {}/{}, form II {}/{} ({form_ii_seen} form II cases), switched/Kalman {}/{}",
            disagreements[0], checks[0], disagreements[1], checks[1], disagreements[2], checks[2], disagreements[3], checks[3]
        ),
    )
}

fn random_params(rng: &mut ChaCha8Rng, max_snapshots: usize) -> GenParams {
    let agents = rng.gen_range(2..=7);
    GenParams {
        agents,
        leaders: rng.gen_range(1..agents.min(4)),
        snapshots: rng.gen_range(1..=max_snapshots),
        edge_prob: EDGE_PROBS[rng.gen_range(0..3)],
        seed: rng.gen(),
    }
}

fn criterion_6() -> Outcome {
    const CASES: usize = 200;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures: Vec<&str> = Vec::new();

    for _ in 0..CASES {
        // union idempotence and commutativity
        let net = network(&random_params(&mut rng, 3));
        let s = net.snapshots();
        let u = union_graph(&net);
        let doubled = SwitchedNetwork::new(s.iter().chain(s).cloned().collect()).unwrap();
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.shuffle(&mut rng);
        if union_graph(&doubled) != u || union_graph(&net.reordered(&order).unwrap()) != u {
            failures.push("union idempotence/commutativity");
        }

        // snapshot-order invariance of the verdict
        if verdict(&net.reordered(&order).unwrap()) != verdict(&net) {
            failures.push("snapshot-order invariance");
        }

        // monotonicity under an added snapshot
        let extra = network(&GenParams {
            agents: net.n_agents(),
            leaders: net.leaders().len(),
            snapshots: 1,
            edge_prob: EDGE_PROBS[rng.gen_range(0..3)],
            seed: rng.gen(),
        });
        let bigger = net.with_snapshot(extra.snapshots()[0].clone()).unwrap();
        if verdict(&net) && !verdict(&bigger) {
            failures.push("monotonicity (added snapshot)");
        }

        // monotonicity under an added edge
        let n = net.n_agents();
        let (a, b) = loop {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b && !(net.leaders().contains(&a) && net.leaders().contains(&b)) {
                break (a, b);
            }
        };
        let k = rng.gen_range(0..s.len());
        let mut snaps = s.to_vec();
        snaps[k] = snaps[k].with_edge(a, b).unwrap();
        let with_edge = SwitchedNetwork::new(snaps).unwrap();
        if verdict(&net) && !verdict(&with_edge) {
            failures.push("monotonicity (added edge)");
        }

        // relabeling invariance
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let relabeled = net.relabel(&perm).unwrap();
        if verdict(&relabeled) != verdict(&net) {
            failures.push("relabeling invariance");
        }
    }
    failures.dedup();
    outcome(
        failures.is_empty(),
        format!("{CASES} cases for each of 5 properties, failures: {failures:?}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 6] = [
        ("1 fig. 1 example controllable, rank 3", criterion_1, Some(Duration::from_secs(1))),
        ("2 fig. 2 example uncontrollable, zero row", criterion_2, Some(Duration::from_secs(5))),
        ("3 single-leader agreement (500)", criterion_3, Some(Duration::from_secs(60))),
        ("4 multi-leader agreement (300)", criterion_4, Some(Duration::from_secs(60))),
        ("5 oracle equivalence (200)", criterion_5, None),
        ("6 property suite", criterion_6, None),
    ];

    let mut all_pass = true;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed < l);
        let pass = result.pass && in_time;
        all_pass &= pass;
        let limit_note = limit.map_or(String::new(), |l| format!(" / limit {:.0?}", l));
        println!(
            "criterion {name}: {} ({}; {:.3?}{limit_note})",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed
        );
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
