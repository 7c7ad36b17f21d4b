use rand::RngCore;

use crate::chsh::{validate_roster, ConventionPreset, Participant};
use crate::error::{Error, Result};
use crate::qcore::{born_distribution, PureState};

use super::{kind_to_observable, MonomerKind, Shift};

/// Joint sampler for one synthesis round.
///
/// Kinds are encoded as a mask with bit `q` set when qubit `q` received kind
/// `b`. The Born table for every one of the `2^n` kind assignments is
/// precomputed as a cumulative distribution, so a round costs one 64-bit draw
/// and a scan over at most 16 entries.
#[derive(Clone, Debug)]
pub struct RoundSampler {
    num_qubits: usize,
    participants: Vec<Participant>,
    cdfs: Vec<Vec<f64>>,
    last_positive: Vec<usize>,
}

/// Kind mask and joint outcome index produced by one round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawRound {
    pub kinds: usize,
    pub outcomes: usize,
}

impl RoundSampler {
    pub fn new(state: &PureState, participants: &[Participant], preset: ConventionPreset) -> Result<Self> {
        let n = state.num_qubits();
        validate_roster(participants, n)?;
        if participants.len() != n {
            return Err(Error::InvalidConfig(format!(
                "{} participants for a {n}-qubit state; every qubit needs an owner",
                participants.len()
            )));
        }
        let mut by_qubit = participants.to_vec();
        by_qubit.sort_by_key(|p| p.qubit);

        let mut cdfs = Vec::with_capacity(1 << n);
        let mut last_positive = Vec::with_capacity(1 << n);
        for mask in 0..1usize << n {
            let observables: Vec<_> = by_qubit
                .iter()
                .map(|p| kind_to_observable(MonomerKind::from_bit(mask >> p.qubit & 1), p.sex, preset))
                .collect();
            let table = born_distribution(state, &observables)?;
            let mut acc = 0.0;
            let cdf: Vec<f64> = table
                .probs()
                .iter()
                .map(|p| {
                    acc += p;
                    acc
                })
                .collect();
            let last = table.probs().iter().rposition(|&p| p > 0.0).unwrap_or(0);
            cdfs.push(cdf);
            last_positive.push(last);
        }
        Ok(Self {
            num_qubits: n,
            participants: participants.to_vec(),
            cdfs,
            last_positive,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn participants(&self) -> &[Participant] {
        &self.participants
    }

    #[inline]
    fn draw_outcome(&self, kinds: usize, uniform: f64) -> usize {
        let cdf = &self.cdfs[kinds];
        cdf.iter()
            .position(|&c| uniform < c)
            .unwrap_or(self.last_positive[kinds])
    }

    /// Uniform kinds and a Born-distributed joint outcome from a single
    /// 64-bit draw: the low `n` bits pick the kinds, the top 53 bits form the
    /// uniform variate.
    #[inline]
    pub fn sample_raw<R: RngCore + ?Sized>(&self, rng: &mut R) -> RawRound {
        let word = rng.next_u64();
        let kinds = (word as usize) & ((1 << self.num_qubits) - 1);
        let uniform = (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        RawRound {
            kinds,
            outcomes: self.draw_outcome(kinds, uniform),
        }
    }

    /// Same as [`Self::sample_raw`] with the kinds fixed by the caller.
    pub fn sample_raw_with_kinds<R: RngCore + ?Sized>(&self, kinds: usize, rng: &mut R) -> RawRound {
        assert!(kinds < 1 << self.num_qubits);
        let uniform = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        RawRound {
            kinds,
            outcomes: self.draw_outcome(kinds, uniform),
        }
    }

    #[inline]
    pub fn kind_of(&self, round: RawRound, qubit: usize) -> MonomerKind {
        MonomerKind::from_bit(round.kinds >> qubit & 1)
    }

    #[inline]
    pub fn outcome_of(&self, round: RawRound, qubit: usize) -> i8 {
        if round.outcomes >> (self.num_qubits - 1 - qubit) & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// Expands a raw round into per-participant records, in roster order.
    pub fn expand(&self, round: RawRound) -> Vec<RoundOutcome> {
        self.participants
            .iter()
            .map(|p| {
                let outcome = self.outcome_of(round, p.qubit);
                RoundOutcome {
                    participant_id: p.id.clone(),
                    kind: self.kind_of(round, p.qubit),
                    outcome,
                    shift: Shift::from_outcome(outcome),
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundOutcome {
    pub participant_id: String,
    pub kind: MonomerKind,
    pub outcome: i8,
    pub shift: Shift,
}

/// Draws one round: independent uniform kinds, then a joint measurement of
/// the kind-selected observables.
pub fn sample_round<R: RngCore + ?Sized>(
    state: &PureState,
    participants: &[Participant],
    preset: ConventionPreset,
    rng: &mut R,
) -> Result<Vec<RoundOutcome>> {
    let sampler = RoundSampler::new(state, participants, preset)?;
    Ok(sampler.expand(sampler.sample_raw(rng)))
}

/// [`sample_round`] with the kinds forced, one per participant in roster
/// order.
pub fn sample_round_with_kinds<R: RngCore + ?Sized>(
    state: &PureState,
    participants: &[Participant],
    preset: ConventionPreset,
    kinds: &[MonomerKind],
    rng: &mut R,
) -> Result<Vec<RoundOutcome>> {
    if kinds.len() != participants.len() {
        return Err(Error::DimensionMismatch {
            expected: participants.len(),
            found: kinds.len(),
        });
    }
    let sampler = RoundSampler::new(state, participants, preset)?;
    let mask = participants
        .iter()
        .zip(kinds)
        .filter(|(_, k)| **k == MonomerKind::B)
        .map(|(p, _)| 1 << p.qubit)
        .sum();
    Ok(sampler.expand(sampler.sample_raw_with_kinds(mask, rng)))
}
