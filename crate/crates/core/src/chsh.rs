//! Participants, observable conventions and CHSH operators.
//!
//! FIRST-sex participants measure `a = σx` or `b = σz`; SECOND-sex
//! participants measure the preset's `X` or `Y`. For a pair the random
//! variable ξ takes the value `aX`, `aY`, `bX` or `-bY` depending on the
//! chosen bases, so its mean is the expectation of
//!
//! ```text
//! (1/4) (a⊗X + a⊗Y + b⊗X - b⊗Y)
//! ```
//!
//! which is at most 1/2 for local deterministic responses and at most 1/√2
//! quantum mechanically.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{embed_local, expectation, HermitianOperator, Observable, PureState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sex {
    /// Measures σx or σz.
    First,
    /// Measures the preset's X or Y.
    Second,
}

/// Sign convention for the SECOND-sex observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionPreset {
    /// X = (σx+σz)/√2, Y = (σx−σz)/√2.
    Section2,
    /// X = (σz−σx)/√2, Y = −(σx+σz)/√2.
    Figure4,
    /// X = (σx−σz)/√2, Y = (σx+σz)/√2.
    TripletCal,
}

impl ConventionPreset {
    /// Declaration order; calibration ties resolve to the earliest entry.
    pub const ALL: [Self; 3] = [Self::Section2, Self::Figure4, Self::TripletCal];

    pub fn name(self) -> &'static str {
        match self {
            Self::Section2 => "section2",
            Self::Figure4 => "figure4",
            Self::TripletCal => "triplet-cal",
        }
    }

    fn axes(self) -> ([f64; 2], [f64; 2]) {
        // (x, z) Bloch components of X and Y, before the 1/√2 factor.
        match self {
            Self::Section2 => ([1.0, 1.0], [1.0, -1.0]),
            Self::Figure4 => ([-1.0, 1.0], [-1.0, -1.0]),
            Self::TripletCal => ([1.0, -1.0], [1.0, 1.0]),
        }
    }

    pub fn x(self) -> Observable {
        let ([x, z], _) = self.axes();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Observable::bloch(x * r, 0.0, z * r).expect("unit axis")
    }

    pub fn y(self) -> Observable {
        let (_, [x, z]) = self.axes();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Observable::bloch(x * r, 0.0, z * r).expect("unit axis")
    }
}

impl fmt::Display for ConventionPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConventionPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// The FIRST-sex observables `(a, b) = (σx, σz)`.
pub fn first_observables() -> (Observable, Observable) {
    (Observable::sigma_x(), Observable::sigma_z())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Participant {
    pub id: String,
    pub qubit: usize,
    pub sex: Sex,
}

impl Participant {
    pub fn new(id: impl Into<String>, qubit: usize, sex: Sex) -> Self {
        Self {
            id: id.into(),
            qubit,
            sex,
        }
    }

    /// Participants assigned to qubits 0, 1, ... in the given order.
    pub fn roster(entries: &[(&str, Sex)]) -> Vec<Participant> {
        entries
            .iter()
            .enumerate()
            .map(|(q, (id, sex))| Participant::new(*id, q, *sex))
            .collect()
    }
}

/// Checks that ids and qubits are unique and that qubits fit an `n`-qubit
/// register.
pub fn validate_roster(participants: &[Participant], n: usize) -> Result<()> {
    for (i, p) in participants.iter().enumerate() {
        if p.qubit >= n {
            return Err(Error::QubitOutOfRange { qubit: p.qubit, n });
        }
        if participants[..i].iter().any(|o| o.qubit == p.qubit) {
            return Err(Error::QubitCollision(p.qubit));
        }
        if participants[..i].iter().any(|o| o.id == p.id) {
            return Err(Error::InvalidConfig(format!("duplicate participant id {}", p.id)));
        }
    }
    Ok(())
}

/// Opposite-sex pair; `first` is always the FIRST-sex member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairSpec {
    pub first: Participant,
    pub second: Participant,
    pub legal: bool,
}

impl PairSpec {
    /// Orders the two participants by sex; same-sex pairs are rejected.
    pub fn new(p: Participant, q: Participant) -> Result<Self> {
        let (first, second) = match (p.sex, q.sex) {
            (Sex::First, Sex::Second) => (p, q),
            (Sex::Second, Sex::First) => (q, p),
            _ => return Err(Error::SameSexPair(p.id, q.id)),
        };
        if first.qubit == second.qubit {
            return Err(Error::QubitCollision(first.qubit));
        }
        Ok(Self {
            first,
            second,
            legal: false,
        })
    }

    pub fn with_legal(mut self, legal: bool) -> Self {
        self.legal = legal;
        self
    }

    pub fn label(&self) -> String {
        format!("{}-{}", self.first.id, self.second.id)
    }

    pub fn qubits(&self) -> (usize, usize) {
        (self.first.qubit, self.second.qubit)
    }

    /// Looks up `"First-Second"` (either order) among `participants`.
    pub fn from_label(label: &str, participants: &[Participant]) -> Result<Self> {
        let (l, r) = label
            .split_once('-')
            .ok_or_else(|| Error::InvalidConfig(format!("pair label {label:?} is not NAME-NAME")))?;
        let find = |id: &str| {
            participants
                .iter()
                .find(|p| p.id == id)
                .cloned()
                .ok_or_else(|| Error::UnknownParticipant(id.to_string()))
        };
        Self::new(find(l.trim())?, find(r.trim())?)
    }
}

/// Mean of ξ for one pair.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct XiValue(pub f64);

impl XiValue {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn gluing_index(self) -> f64 {
        gluing_index(self)
    }
}

/// Expected glue fraction `(1 + ξ) / 2`.
pub fn gluing_index(xi: XiValue) -> f64 {
    (1.0 + xi.0) / 2.0
}

fn pair_term(
    u: &Observable,
    v: &Observable,
    pair: &PairSpec,
    n: usize,
) -> Result<HermitianOperator> {
    let (p, q) = pair.qubits();
    embed_local(&[(u.operator(), p), (v.operator(), q)], n)
}

/// `(1/4)(a⊗X + a⊗Y + b⊗X − b⊗Y)` on the pair's qubits of an `n`-qubit
/// register.
pub fn chsh_operator(pair: &PairSpec, n: usize, preset: ConventionPreset) -> Result<HermitianOperator> {
    let (p, q) = pair.qubits();
    for qubit in [p, q] {
        if qubit >= n {
            return Err(Error::QubitOutOfRange { qubit, n });
        }
    }
    if p == q {
        return Err(Error::QubitCollision(p));
    }
    let (a, b) = first_observables();
    let (x, y) = (preset.x(), preset.y());
    let sum = pair_term(&a, &x, pair, n)?
        .add(&pair_term(&a, &y, pair, n)?)?
        .add(&pair_term(&b, &x, pair, n)?)?
        .sub(&pair_term(&b, &y, pair, n)?)?;
    Ok(sum.scale(0.25))
}

/// The four two-party correlators entering ξ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlators {
    pub ax: f64,
    pub ay: f64,
    pub bx: f64,
    pub by: f64,
}

impl Correlators {
    pub fn xi(&self) -> XiValue {
        XiValue((self.ax + self.ay + self.bx - self.by) / 4.0)
    }
}

pub fn correlators(state: &PureState, pair: &PairSpec, preset: ConventionPreset) -> Result<Correlators> {
    let n = state.num_qubits();
    let (a, b) = first_observables();
    let (x, y) = (preset.x(), preset.y());
    let e = |u: &Observable, v: &Observable| -> Result<f64> {
        expectation(state, &pair_term(u, v, pair, n)?)
    };
    Ok(Correlators {
        ax: e(&a, &x)?,
        ay: e(&a, &y)?,
        bx: e(&b, &x)?,
        by: e(&b, &y)?,
    })
}

/// Exact ξ for `pair` in `state`.
pub fn xi_exact(state: &PureState, pair: &PairSpec, preset: ConventionPreset) -> Result<XiValue> {
    let op = chsh_operator(pair, state.num_qubits(), preset)?;
    Ok(XiValue(expectation(state, &op)?))
}

/// Every FIRST×SECOND pair, ordered by the FIRST member's id, then the
/// SECOND member's id.
pub fn all_heterosexual_pairs(participants: &[Participant]) -> Result<Vec<PairSpec>> {
    let mut firsts: Vec<&Participant> = participants.iter().filter(|p| p.sex == Sex::First).collect();
    let mut seconds: Vec<&Participant> = participants.iter().filter(|p| p.sex == Sex::Second).collect();
    if firsts.is_empty() || seconds.is_empty() {
        return Err(Error::SingleSexRoster);
    }
    firsts.sort_by(|a, b| a.id.cmp(&b.id));
    seconds.sort_by(|a, b| a.id.cmp(&b.id));
    firsts
        .iter()
        .flat_map(|f| seconds.iter().map(move |s| PairSpec::new((*f).clone(), (*s).clone())))
        .collect()
}

/// One state/pair whose gluing index has a published target.
#[derive(Clone, Debug)]
pub struct CalibrationTarget {
    pub label: String,
    pub state: PureState,
    pub pair: PairSpec,
    pub target_index: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PresetScore {
    pub preset: ConventionPreset,
    pub total_deviation: f64,
    /// `(label, computed index - target)` per target.
    pub residuals: Vec<(String, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub preset: ConventionPreset,
    pub scores: Vec<PresetScore>,
}

/// Picks the preset whose gluing indices deviate least (sum of absolute
/// residuals) from the targets. Ties within 1e-12 go to the preset declared
/// first in [`ConventionPreset::ALL`].
pub fn calibrate_convention(targets: &[CalibrationTarget]) -> Result<Calibration> {
    if targets.is_empty() {
        return Err(Error::InvalidConfig("calibration needs at least one target".into()));
    }
    let mut scores = Vec::with_capacity(ConventionPreset::ALL.len());
    for preset in ConventionPreset::ALL {
        let mut residuals = Vec::with_capacity(targets.len());
        for t in targets {
            let idx = xi_exact(&t.state, &t.pair, preset)?.gluing_index();
            residuals.push((t.label.clone(), idx - t.target_index));
        }
        let total_deviation = residuals.iter().map(|(_, r)| r.abs()).sum();
        scores.push(PresetScore {
            preset,
            total_deviation,
            residuals,
        });
    }
    let mut best = &scores[0];
    for s in &scores[1..] {
        if s.total_deviation < best.total_deviation - 1e-12 {
            best = s;
        }
    }
    Ok(Calibration {
        preset: best.preset,
        scores,
    })
}
