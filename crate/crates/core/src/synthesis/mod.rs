//! Two-site chain synthesis under one-way control.
//!
//! Every round each participant attaches a monoblock of a uniformly random
//! kind. The kind selects the observable measured on that participant's
//! photon, and the ±1 outcome fixes the attachment shift (+1 forward, −1
//! back). Overlaying a FIRST-sex chain with a SECOND-sex chain, position `j`
//! glues iff the product of the two shifts equals the table sign for the pair
//! of kinds: +1 for `aa`, `ab` and `bb`, −1 for `ba`.
//!
//! For SECOND-sex participants kind `a` selects `Y` and kind `b` selects `X`.
//! With that assignment the four kind pairs reproduce the four CHSH terms
//! (`aa→aY`, `ab→aX`, `bb→bX`, `ba→−bY`), so the expected glue fraction is
//! exactly `(1 + ξ) / 2`.

mod export;
mod monte_carlo;
mod sampler;

use serde::{Deserialize, Serialize};

use crate::chsh::{gluing_index, xi_exact, ConventionPreset, PairSpec, Participant, Sex};
use crate::error::{Error, Result};
use crate::qcore::{Observable, PureState};

pub use export::{read_trace_csv, write_trace_csv, McSummary, TraceRow};
pub use monte_carlo::{
    mc_gluing_index, mc_gluing_indices, synthesize_chains, trial_rng, McEstimate, ProtocolConfig,
    TrialChains,
};
pub use sampler::{sample_round, sample_round_with_kinds, RoundOutcome, RoundSampler};

/// Displacement of a shifted monoblock, in monoblock lengths. Only the shift
/// direction affects gluing.
pub const DX: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MonomerKind {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
}

impl MonomerKind {
    pub fn symbol(self) -> char {
        match self {
            Self::A => 'a',
            Self::B => 'b',
        }
    }

    pub(crate) fn from_bit(bit: usize) -> Self {
        if bit == 0 {
            Self::A
        } else {
            Self::B
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Shift {
    #[serde(rename = "+")]
    Forward,
    #[serde(rename = "-")]
    Back,
}

impl Shift {
    pub fn from_outcome(outcome: i8) -> Self {
        if outcome > 0 {
            Self::Forward
        } else {
            Self::Back
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Self::Forward => 1,
            Self::Back => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Self::Forward => '+',
            Self::Back => '-',
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Self::Forward => Self::Back,
            Self::Back => Self::Forward,
        }
    }

    /// Signed displacement in monoblock lengths.
    pub fn displacement(self) -> f64 {
        f64::from(self.sign()) * DX
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monoblock {
    pub kind: MonomerKind,
    pub shift: Shift,
}

impl Monoblock {
    pub fn new(kind: MonomerKind, shift: Shift) -> Self {
        Self { kind, shift }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Chain {
    pub owner: Participant,
    pub blocks: Vec<Monoblock>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Required shift product for each (FIRST kind, SECOND kind).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GluingTable {
    signs: [[i8; 2]; 2],
}

impl Default for GluingTable {
    fn default() -> Self {
        // rows: FIRST kind a, b; columns: SECOND kind a, b
        Self {
            signs: [[1, 1], [-1, 1]],
        }
    }
}

impl GluingTable {
    pub fn sign(&self, first: MonomerKind, second: MonomerKind) -> i8 {
        self.signs[first as usize][second as usize]
    }

    pub fn glues(&self, first: &Monoblock, second: &Monoblock) -> bool {
        first.shift.sign() * second.shift.sign() == self.sign(first.kind, second.kind)
    }
}

/// Observable measured when a participant of `sex` receives a monomer of
/// `kind`.
pub fn kind_to_observable(kind: MonomerKind, sex: Sex, preset: ConventionPreset) -> Observable {
    match (sex, kind) {
        (Sex::First, MonomerKind::A) => Observable::sigma_x(),
        (Sex::First, MonomerKind::B) => Observable::sigma_z(),
        (Sex::Second, MonomerKind::A) => preset.y(),
        (Sex::Second, MonomerKind::B) => preset.x(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Overlay {
    pub glue_count: usize,
    pub glue_fraction: f64,
}

/// Superimposes a FIRST-sex chain on a SECOND-sex chain and counts glued
/// positions.
pub fn overlay(first: &Chain, second: &Chain, table: &GluingTable) -> Result<Overlay> {
    if first.owner.sex != Sex::First || second.owner.sex != Sex::Second {
        return Err(Error::SameSexPair(first.owner.id.clone(), second.owner.id.clone()));
    }
    if first.len() != second.len() {
        return Err(Error::LengthMismatch(first.len(), second.len()));
    }
    if first.is_empty() {
        return Err(Error::InvalidConfig("cannot overlay empty chains".into()));
    }
    let glue_count = first
        .blocks
        .iter()
        .zip(&second.blocks)
        .filter(|(x, y)| table.glues(x, y))
        .count();
    Ok(Overlay {
        glue_count,
        glue_fraction: glue_count as f64 / first.len() as f64,
    })
}

/// Expected glue fraction `(1 + ξ) / 2` from the exact ξ.
pub fn exact_glue_fraction(state: &PureState, pair: &PairSpec, preset: ConventionPreset) -> Result<f64> {
    Ok(gluing_index(xi_exact(state, pair, preset)?))
}
