//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit when any
//! criterion fails.

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bellchain_core::chsh::{
    all_heterosexual_pairs, chsh_operator, gluing_index, xi_exact, ConventionPreset, PairSpec, XiValue,
};
use bellchain_core::claims::{
    find_state, four_party_roster, optimal_pair_state, place_pairs, three_party_roster, triplet_state,
    two_party_roster, verify_all, PresetPolicy, Verdict, VerifyConfig,
};
use bellchain_core::optimize::{
    ascend_unrestricted, classical_bound, max_biphoton_family, max_unrestricted, Objective, Partition, SearchConfig,
};
use bellchain_core::qcore::{born_distribution, partial_trace, ComplexMatrix, Observable, PureState};
use bellchain_core::synthesis::{mc_gluing_indices, ProtocolConfig};

const PRESET: ConventionPreset = ConventionPreset::TripletCal;

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

fn pair(roster: &[bellchain_core::Participant], label: &str) -> PairSpec {
    PairSpec::from_label(label, roster).unwrap()
}

fn tsirelson() -> Outcome {
    let r = two_party_roster();
    let ab = pair(&r, "Alice-Bob");
    let t = xi_exact(&triplet_state(), &ab, PRESET).unwrap().value();
    let mut worst: f64 = 0.0;
    for preset in ConventionPreset::ALL {
        let m = max_unrestricted(&Objective::SinglePairXi(ab.clone()), 2, preset).unwrap().value;
        worst = worst.max((m - FRAC_1_SQRT_2).abs());
    }
    let pass = (t - FRAC_1_SQRT_2).abs() <= 1e-12 && worst <= 1e-10;
    outcome(pass, format!("xi(|t>) = {t:.15}, max eigen deviation {worst:.1e}"))
}

fn classical() -> Outcome {
    let r2 = two_party_roster();
    let xi = classical_bound(&Objective::SinglePairXi(pair(&r2, "Alice-Bob")), &r2).unwrap().value;
    let r3 = three_party_roster();
    let s3 = classical_bound(&Objective::SumIndex(all_heterosexual_pairs(&r3).unwrap()), &r3).unwrap().value;
    let r4 = four_party_roster();
    let s4 = classical_bound(&Objective::SumIndex(all_heterosexual_pairs(&r4).unwrap()), &r4).unwrap().value;
    let idx = gluing_index(XiValue(xi));
    let pass = xi == 0.5 && idx == 0.75 && s3 == 1.5 && s4 == 3.0;
    outcome(pass, format!("xi {xi}, index {idx}, sums {s3} and {s4}"))
}

fn differentiation() -> Outcome {
    let r3 = three_party_roster();
    let bell = optimal_pair_state(PRESET).unwrap();
    let state = place_pairs(3, &[((0, 2), &bell)]).unwrap();
    let legal = xi_exact(&state, &pair(&r3, "Alice-Bob"), PRESET).unwrap().gluing_index();
    let illegal = xi_exact(&state, &pair(&r3, "Natalia-Bob"), PRESET).unwrap().gluing_index();
    let want_legal = (1.0 + FRAC_1_SQRT_2) / 2.0;
    let diff = legal - illegal;
    let pass = (legal - want_legal).abs() <= 1e-9 && (illegal - 0.5).abs() <= 1e-9 && (diff - 0.35).abs() <= 5e-3;
    outcome(pass, format!("legal {legal:.9}, illegal {illegal:.9}, difference {diff:.6} vs 0.35"))
}

fn four_party_sum() -> Outcome {
    let r4 = four_party_roster();
    let sum = Objective::SumIndex(all_heterosexual_pairs(&r4).unwrap());
    let quoted = 2.707_106_781_186_547_5;
    let mut parts = Vec::new();
    let mut pass = false;
    for groups in ["Alice+Bob,Natasha+Ivan", "Alice+Ivan,Natasha+Bob"] {
        let p = Partition::parse(groups, &r4).unwrap();
        let v = max_biphoton_family(&sum, &p, PRESET, &SearchConfig::default()).unwrap().value;
        pass |= (v - quoted).abs() <= 1e-6;
        parts.push(format!("{groups}: {v:.9}"));
    }
    outcome(pass, format!("{} vs {quoted}", parts.join(", ")))
}

fn minimal_states() -> Outcome {
    let quarter = ComplexMatrix::identity(4).scale_real(0.25);
    let mut failures = Vec::new();
    for id in ["S6.4A", "S6.4B", "S6.3A", "S6.3B"] {
        let s = find_state(id).unwrap();
        let n = s.state.num_qubits();
        for p in s.pairs() {
            let (f, q) = p.qubits();
            let keep = if f < q { [f, q] } else { [q, f] };
            let rho = partial_trace(&s.state.density(), &keep, n).unwrap();
            let dev = rho.matrix().max_abs_diff(&quarter);
            let xi = xi_exact(&s.state, &p, PRESET).unwrap();
            if dev > 1e-12 {
                failures.push(format!("{id}/{} rho differs from I/4 by {dev:.3}", p.label()));
            }
            if xi.value().abs() > 1e-12 || xi.gluing_index() != 0.5 {
                failures.push(format!("{id}/{} xi {:e}", p.label(), xi.value()));
            }
        }
    }
    if failures.is_empty() {
        outcome(true, "all pairs: rho = I/4, xi = 0, index 0.5")
    } else {
        outcome(false, failures.join("; "))
    }
}

fn registry_groupings() -> Outcome {
    let config = VerifyConfig {
        policy: PresetPolicy::Calibrated,
        trials: 10,
        chain_length: 100,
        search: SearchConfig {
            restarts: 4,
            ..SearchConfig::default()
        },
        timestamp: Some(0),
        ..VerifyConfig::default()
    };
    let run = verify_all(&config).unwrap();
    let good = (1.0 + FRAC_1_SQRT_2) / 2.0;
    let mut pass = run.manifest.preset == PRESET.name();
    let mut lines = Vec::new();
    let groupings = [["Alice-Ivan", "Natasha-Bob"], ["Alice-Bob", "Natasha-Ivan"]];
    for id in ["S5.G1.1", "S5.G1.2", "S5.G1.3", "S5.G1.4", "S5.G2.1", "S5.G2.2", "S5.G2.3", "S5.G2.4"] {
        let rows: Vec<_> = run.pairs.iter().filter(|r| r.state_id == id).collect();
        let two_valued = rows.len() == 4
            && rows
                .iter()
                .all(|r| (r.exact - good).abs() < 1e-9 || (r.exact - 0.5).abs() < 1e-9);
        let high: Vec<&str> = rows.iter().filter(|r| r.exact > 0.75).map(|r| r.pair.as_str()).collect();
        let matches = groupings.iter().any(|g| high == g);
        let surfaced = run
            .claims
            .iter()
            .any(|c| c.id.starts_with(id) && c.verdict == Verdict::Refuted && c.note.contains("computed table"));
        let claimed_ok = run
            .claims
            .iter()
            .filter(|c| c.id.starts_with(id))
            .all(|c| c.verdict == Verdict::Confirmed);
        pass &= two_valued && ((matches && claimed_ok) || surfaced);
        lines.push(format!(
            "{id} high={{{}}} {}",
            high.join(","),
            if claimed_ok { "as quoted" } else if matches { "other grouping, refuted" } else { "refuted" }
        ));
    }
    outcome(pass, lines.join("; "))
}

fn monte_carlo() -> Outcome {
    let ids = ["S4.1", "S4.6", "S5.G1.1", "S5.G2.4", "S6.4A"];
    let runs = 100;
    let mut worst_rate: f64 = 1.0;
    let mut deterministic = true;
    for id in ids {
        let s = find_state(id).unwrap();
        let pairs = s.pairs();
        let exact: Vec<f64> = pairs
            .iter()
            .map(|p| xi_exact(&s.state, p, PRESET).unwrap().gluing_index())
            .collect();
        let mut hits = vec![0usize; pairs.len()];
        for run in 0..runs {
            let config = ProtocolConfig {
                state: s.state.clone(),
                participants: s.roster.clone(),
                preset: PRESET,
                chain_length: 1000,
                trials: 1000,
                master_seed: 1_000 + run as u64,
            };
            let est = mc_gluing_indices(&config, &pairs).unwrap();
            for (k, e) in est.iter().enumerate() {
                hits[k] += usize::from((e.estimate - exact[k]).abs() <= 4.0 * e.stderr);
            }
            if run == 0 {
                let with = |threads: usize| {
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(threads)
                        .build()
                        .unwrap()
                        .install(|| mc_gluing_indices(&config, &pairs).unwrap())
                };
                let one = with(1);
                let four = with(4);
                deterministic &= one
                    .iter()
                    .zip(&four)
                    .zip(&est)
                    .all(|((a, b), c)| a.estimate.to_bits() == b.estimate.to_bits() && a.estimate.to_bits() == c.estimate.to_bits() && a.stderr.to_bits() == b.stderr.to_bits());
            }
        }
        for h in hits {
            worst_rate = worst_rate.min(h as f64 / runs as f64);
        }
    }
    outcome(
        worst_rate >= 0.99 && deterministic,
        format!("worst within-4-se rate {worst_rate:.2} over {runs} runs, thread-count invariant: {deterministic}"),
    )
}

fn three_party_sum() -> Outcome {
    let r3 = three_party_roster();
    let sum = Objective::SumIndex(all_heterosexual_pairs(&r3).unwrap());
    let eigen = max_unrestricted(&sum, 3, PRESET).unwrap().value;
    let ascent = ascend_unrestricted(&sum, 3, PRESET, &SearchConfig::default()).unwrap().value;
    let p = Partition::parse("Alice+Bob,Natalia", &r3).unwrap();
    let family = max_biphoton_family(&sum, &p, PRESET, &SearchConfig::default()).unwrap().value;
    let classical = classical_bound(&sum, &r3).unwrap().value;
    let agree = (eigen - ascent).abs() <= 1e-6;
    let run = verify_all(&VerifyConfig {
        trials: 10,
        chain_length: 100,
        search: SearchConfig {
            restarts: 4,
            ..SearchConfig::default()
        },
        timestamp: Some(0),
        ..VerifyConfig::default()
    })
    .unwrap();
    let record = run.claims.iter().find(|c| c.id == "sum3/max").unwrap();
    outcome(
        agree && !record.note.is_empty(),
        format!(
            "unrestricted {eigen:.9} (ascent {ascent:.9}), products {family:.9}, classical {classical} vs 1.157: {:?}",
            record.verdict
        ),
    )
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_norm: f64 = 0.0;
    let mut worst_herm: f64 = 0.0;
    let mut worst_trace: f64 = 0.0;
    let mut worst_born: f64 = 0.0;
    let mut worst_xi: f64 = f64::NEG_INFINITY;
    let observables = [Observable::sigma_x(), Observable::sigma_z(), PRESET.x(), PRESET.y()];
    for k in 0..10_000 {
        let n = 2 + k % 3;
        let s = PureState::random(n, &mut rng).unwrap();
        worst_norm = worst_norm.max((s.norm_sqr() - 1.0).abs());
        let rho = s.density();
        worst_herm = worst_herm.max(rho.matrix().hermitian_defect());
        let keep: Vec<usize> = (0..n).filter(|q| (k >> q) & 1 == 0).collect();
        let keep = if keep.is_empty() { vec![0] } else { keep };
        let reduced = partial_trace(&rho, &keep, n).unwrap();
        worst_trace = worst_trace.max((reduced.trace() - 1.0).abs());
        let obs: Vec<Observable> = (0..n).map(|q| observables[(k + q) % 4].clone()).collect();
        let born = born_distribution(&s, &obs).unwrap();
        worst_born = worst_born.max((born.total() - 1.0).abs());
        let r = if n == 2 {
            two_party_roster()
        } else if n == 3 {
            three_party_roster()
        } else {
            four_party_roster()
        };
        for p in all_heterosexual_pairs(&r).unwrap() {
            let op = chsh_operator(&p, n, PRESET).unwrap();
            worst_herm = worst_herm.max(op.matrix().hermitian_defect());
            worst_xi = worst_xi.max(xi_exact(&s, &p, PRESET).unwrap().value().abs());
        }
    }
    let pass = worst_norm <= 1e-12
        && worst_herm <= 1e-12
        && worst_trace <= 1e-12
        && worst_born <= 1e-12
        && worst_xi <= FRAC_1_SQRT_2 + 1e-12;
    outcome(
        pass,
        format!(
            "10000 states: norm {worst_norm:.1e}, hermiticity {worst_herm:.1e}, partial trace {worst_trace:.1e}, born {worst_born:.1e}, max |xi| {worst_xi:.12}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("tsirelson value", tsirelson),
        ("classical bounds", classical),
        ("three-party differentiation", differentiation),
        ("four-party pair-product sum", four_party_sum),
        ("minimal-overlap states", minimal_states),
        ("four-party registry groupings", registry_groupings),
        ("monte carlo agreement", monte_carlo),
        ("three-party maximum sum", three_party_sum),
        ("property suite", properties),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "acceptance {} {:<30} {}  {}  ({:.1}s)",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
