use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chsh::{validate_roster, ConventionPreset, PairSpec, Participant, Sex};
use crate::error::{Error, Result};
use crate::qcore::PureState;

use super::sampler::RoundSampler;
use super::{Chain, GluingTable, Monoblock, Shift};

/// Smallest `trials * chain_length` accepted by the Monte Carlo estimator.
pub const MIN_ROUNDS: usize = 100;

#[derive(Clone, Debug)]
pub struct ProtocolConfig {
    pub state: PureState,
    pub participants: Vec<Participant>,
    pub preset: ConventionPreset,
    pub chain_length: usize,
    pub trials: usize,
    pub master_seed: u64,
}

impl ProtocolConfig {
    pub fn validate(&self) -> Result<()> {
        if self.chain_length == 0 {
            return Err(Error::InvalidConfig("chain length must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        validate_roster(&self.participants, self.state.num_qubits())
    }

    fn sampler(&self) -> Result<RoundSampler> {
        self.validate()?;
        RoundSampler::new(&self.state, &self.participants, self.preset)
    }
}

/// Generator for one trial: the master seed keys a ChaCha8 stream and the
/// trial index selects the stream, so trials are independent of scheduling.
pub fn trial_rng(master_seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial as u64);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialChains {
    pub trial: usize,
    /// One chain per participant, in roster order.
    pub chains: Vec<Chain>,
}

impl TrialChains {
    pub fn chain_of(&self, participant_id: &str) -> Option<&Chain> {
        self.chains.iter().find(|c| c.owner.id == participant_id)
    }
}

/// Grows one chain per participant for every trial.
pub fn synthesize_chains(config: &ProtocolConfig) -> Result<Vec<TrialChains>> {
    let sampler = config.sampler()?;
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.master_seed, trial);
            let mut chains: Vec<Chain> = config
                .participants
                .iter()
                .map(|p| Chain {
                    owner: p.clone(),
                    blocks: Vec::with_capacity(config.chain_length),
                })
                .collect();
            for _ in 0..config.chain_length {
                let round = sampler.sample_raw(&mut rng);
                for chain in &mut chains {
                    let q = chain.owner.qubit;
                    chain.blocks.push(Monoblock::new(
                        sampler.kind_of(round, q),
                        Shift::from_outcome(sampler.outcome_of(round, q)),
                    ));
                }
            }
            TrialChains { trial, chains }
        })
        .collect();
    Ok(trials)
}

#[derive(Clone, Debug, Serialize)]
pub struct McEstimate {
    pub pair: String,
    pub estimate: f64,
    pub stderr: f64,
    pub trials: usize,
    pub chain_length: usize,
}

struct PairMask {
    first_qubit: usize,
    second_qubit: usize,
    first_bit: usize,
    second_bit: usize,
}

/// Monte Carlo gluing index for several pairs from the same simulated chains.
///
/// The estimate is the mean glue fraction over trials and the standard error
/// comes from the across-trial variance. With a single trial the binomial
/// error `sqrt(f (1 - f) / L)` is used instead, since positions are i.i.d.
pub fn mc_gluing_indices(config: &ProtocolConfig, pairs: &[PairSpec]) -> Result<Vec<McEstimate>> {
    let sampler = config.sampler()?;
    if config.trials * config.chain_length < MIN_ROUNDS {
        return Err(Error::InvalidConfig(format!(
            "trials * chain length must be at least {MIN_ROUNDS}"
        )));
    }
    let n = config.state.num_qubits();
    let mut masks = Vec::with_capacity(pairs.len());
    for pair in pairs {
        for p in [&pair.first, &pair.second] {
            if !config.participants.contains(p) {
                return Err(Error::UnknownParticipant(p.id.clone()));
            }
        }
        debug_assert!(pair.first.sex == Sex::First && pair.second.sex == Sex::Second);
        let (f, s) = pair.qubits();
        masks.push(PairMask {
            first_qubit: f,
            second_qubit: s,
            first_bit: n - 1 - f,
            second_bit: n - 1 - s,
        });
    }
    let table = GluingTable::default();
    // needs_flip[kf][ks]: glue requires opposite outcomes
    let mut needs_flip = [[0usize; 2]; 2];
    for (kf, row) in needs_flip.iter_mut().enumerate() {
        for (ks, cell) in row.iter_mut().enumerate() {
            let sign = table.sign(super::MonomerKind::from_bit(kf), super::MonomerKind::from_bit(ks));
            *cell = usize::from(sign < 0);
        }
    }

    let length = config.chain_length;
    let per_trial: Vec<Vec<u32>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.master_seed, trial);
            let mut glued = vec![0u32; masks.len()];
            for _ in 0..length {
                let r = sampler.sample_raw(&mut rng);
                for (count, m) in glued.iter_mut().zip(&masks) {
                    let kf = r.kinds >> m.first_qubit & 1;
                    let ks = r.kinds >> m.second_qubit & 1;
                    let differ = (r.outcomes >> m.first_bit ^ r.outcomes >> m.second_bit) & 1;
                    *count += u32::from(differ == needs_flip[kf][ks]);
                }
            }
            glued
        })
        .collect();

    let trials = config.trials as f64;
    let len = length as f64;
    let estimates = pairs
        .iter()
        .enumerate()
        .map(|(k, pair)| {
            let fractions = per_trial.iter().map(|g| f64::from(g[k]) / len);
            let mean = fractions.clone().sum::<f64>() / trials;
            let stderr = if config.trials > 1 {
                let var = fractions.map(|f| (f - mean) * (f - mean)).sum::<f64>() / (trials - 1.0);
                (var / trials).sqrt()
            } else {
                (mean * (1.0 - mean) / len).sqrt()
            };
            McEstimate {
                pair: pair.label(),
                estimate: mean,
                stderr,
                trials: config.trials,
                chain_length: length,
            }
        })
        .collect();
    Ok(estimates)
}

/// `(estimate, standard_error)` for a single pair.
pub fn mc_gluing_index(config: &ProtocolConfig, pair: &PairSpec) -> Result<(f64, f64)> {
    let e = mc_gluing_indices(config, std::slice::from_ref(pair))?;
    Ok((e[0].estimate, e[0].stderr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::all_heterosexual_pairs;
    use crate::qcore::parse_state;
    use crate::synthesis::{exact_glue_fraction, overlay};

    fn config(text: &str, roster: &[(&str, Sex)], l: usize, trials: usize, seed: u64) -> ProtocolConfig {
        ProtocolConfig {
            state: parse_state(text).unwrap(),
            participants: Participant::roster(roster),
            preset: ConventionPreset::TripletCal,
            chain_length: l,
            trials,
            master_seed: seed,
        }
    }

    const AB: [(&str, Sex); 2] = [("Alice", Sex::First), ("Bob", Sex::Second)];

    #[test]
    fn zero_length_rejected() {
        let c = config("|01> + |10>", &AB, 0, 10, 1);
        assert!(matches!(synthesize_chains(&c), Err(Error::InvalidConfig(_))));
        let c = config("|01> + |10>", &AB, 10, 0, 1);
        assert!(c.validate().is_err());
    }

    #[test]
    fn too_few_rounds_rejected() {
        let c = config("|01> + |10>", &AB, 9, 10, 1);
        let pair = all_heterosexual_pairs(&c.participants).unwrap().remove(0);
        assert!(mc_gluing_index(&c, &pair).is_err());
    }

    #[test]
    fn same_seed_same_chains() {
        let roster = [
            ("Alice", Sex::First),
            ("Natasha", Sex::First),
            ("Bob", Sex::Second),
            ("Ivan", Sex::Second),
        ];
        let c = config("0.5|0011> + 0.5|0110> + 0.5|1001> + 0.5|1100>", &roster, 50, 8, 42);
        let a = synthesize_chains(&c).unwrap();
        let b = synthesize_chains(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        assert!(a.iter().all(|t| t.chains.len() == 4 && t.chains.iter().all(|ch| ch.len() == 50)));
        let other = synthesize_chains(&ProtocolConfig { master_seed: 43, ..c }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn estimator_agrees_with_chain_overlay() {
        let c = config("|01> + |10>", &AB, 40, 25, 5);
        let pair = all_heterosexual_pairs(&c.participants).unwrap().remove(0);
        let (est, _) = mc_gluing_index(&c, &pair).unwrap();
        let chains = synthesize_chains(&c).unwrap();
        let table = GluingTable::default();
        let mean = chains
            .iter()
            .map(|t| overlay(&t.chains[0], &t.chains[1], &table).unwrap().glue_fraction)
            .sum::<f64>()
            / 25.0;
        assert_eq!(est, mean);
    }

    #[test]
    fn triplet_converges_to_tsirelson_index() {
        let c = config("|01> + |10>", &AB, 1000, 1000, 2024);
        let pair = all_heterosexual_pairs(&c.participants).unwrap().remove(0);
        let (est, se) = mc_gluing_index(&c, &pair).unwrap();
        assert!((est - 0.8536).abs() < 0.002, "{est}");
        let exact = exact_glue_fraction(&c.state, &pair, c.preset).unwrap();
        assert!((est - exact).abs() < 4.0 * se);
    }

    #[test]
    fn product_state_matches_exact() {
        let c = config("|00> + 0.5|01>", &AB, 500, 200, 11);
        let pair = all_heterosexual_pairs(&c.participants).unwrap().remove(0);
        let (est, se) = mc_gluing_index(&c, &pair).unwrap();
        let exact = exact_glue_fraction(&c.state, &pair, c.preset).unwrap();
        assert!((est - exact).abs() < 3.0 * se, "{est} vs {exact} ± {se}");
    }

    #[test]
    fn single_trial_uses_binomial_error() {
        let c = config("|01> + |10>", &AB, 400, 1, 3);
        let pair = all_heterosexual_pairs(&c.participants).unwrap().remove(0);
        let (est, se) = mc_gluing_index(&c, &pair).unwrap();
        assert!((se - (est * (1.0 - est) / 400.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unknown_pair_rejected() {
        let c = config("|01> + |10>", &AB, 100, 2, 3);
        let stranger = PairSpec::new(
            Participant::new("Zoe", 0, Sex::First),
            Participant::new("Bob", 1, Sex::Second),
        )
        .unwrap();
        assert!(matches!(
            mc_gluing_index(&c, &stranger),
            Err(Error::UnknownParticipant(_))
        ));
    }
}
