use crate::chsh::{all_heterosexual_pairs, CalibrationTarget, PairSpec, Participant, Sex};
use crate::error::{Error, Result};
use crate::qcore::{parse_state, PureState};

/// Index value quoted for a "good" overlap.
pub const GOOD_INDEX: f64 = 0.85;
/// Index value quoted for a "bad" overlap.
pub const BAD_INDEX: f64 = 0.5;

/// Which published scenario a state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    TwoParty,
    ThreeParty,
    FourParty,
    MinimalOverlap,
    Bounds,
}

impl Group {
    pub fn title(self) -> &'static str {
        match self {
            Group::TwoParty => "two participants",
            Group::ThreeParty => "three participants",
            Group::FourParty => "four participants",
            Group::MinimalOverlap => "minimal overlap",
            Group::Bounds => "bounds and maxima",
        }
    }
}

/// A published state with its roster and the pair indices quoted for it.
#[derive(Clone, Debug)]
pub struct PaperState {
    pub id: String,
    pub group: Group,
    pub expression: String,
    pub state: PureState,
    pub roster: Vec<Participant>,
    /// `(pair label, quoted index)`; `None` when no value is quoted.
    pub claimed: Vec<(String, Option<f64>)>,
}

impl PaperState {
    pub fn pairs(&self) -> Vec<PairSpec> {
        all_heterosexual_pairs(&self.roster).expect("registry rosters have both sexes")
    }

    pub fn claimed_index(&self, pair_label: &str) -> Option<f64> {
        self.claimed
            .iter()
            .find(|(l, _)| l == pair_label)
            .and_then(|(_, v)| *v)
    }
}

pub fn three_party_roster() -> Vec<Participant> {
    Participant::roster(&[("Alice", Sex::First), ("Natalia", Sex::First), ("Bob", Sex::Second)])
}

pub fn four_party_roster() -> Vec<Participant> {
    Participant::roster(&[
        ("Alice", Sex::First),
        ("Natasha", Sex::First),
        ("Bob", Sex::Second),
        ("Ivan", Sex::Second),
    ])
}

pub fn two_party_roster() -> Vec<Participant> {
    Participant::roster(&[("Alice", Sex::First), ("Bob", Sex::Second)])
}

/// The two-qubit triplet `(|01> + |10>)/√2`.
pub fn triplet_state() -> PureState {
    parse_state("1/sqrt(2)|01> + 1/sqrt(2)|10>").expect("valid literal")
}

const H: &str = "1/2";
const R: &str = "1/sqrt(2)";

fn expr(coef: &str, kets: &[&str]) -> String {
    kets.iter()
        .map(|k| format!("{coef}|{k}>"))
        .collect::<Vec<_>>()
        .join(" + ")
}

struct Entry {
    id: &'static str,
    group: Group,
    coef: &'static str,
    kets: &'static [&'static str],
    claims: &'static [(&'static str, f64)],
}

const FOUR_GOOD_NB_AI: &[(&str, f64)] = &[
    ("Alice-Bob", BAD_INDEX),
    ("Alice-Ivan", GOOD_INDEX),
    ("Natasha-Bob", GOOD_INDEX),
    ("Natasha-Ivan", BAD_INDEX),
];
const FOUR_GOOD_AB_NI: &[(&str, f64)] = &[
    ("Alice-Bob", GOOD_INDEX),
    ("Alice-Ivan", BAD_INDEX),
    ("Natasha-Bob", BAD_INDEX),
    ("Natasha-Ivan", GOOD_INDEX),
];
const THREE_LEGAL_AB: &[(&str, f64)] = &[("Alice-Bob", GOOD_INDEX), ("Natalia-Bob", BAD_INDEX)];
const THREE_ALL_BAD: &[(&str, f64)] = &[("Alice-Bob", BAD_INDEX), ("Natalia-Bob", BAD_INDEX)];
const FOUR_ALL_BAD: &[(&str, f64)] = &[
    ("Alice-Bob", BAD_INDEX),
    ("Alice-Ivan", BAD_INDEX),
    ("Natasha-Bob", BAD_INDEX),
    ("Natasha-Ivan", BAD_INDEX),
];

// States whose structure matches the quoted legal-pair description carry
// claims; the others are listed without quoted values.
const ENTRIES: &[Entry] = &[
    Entry { id: "S4.1", group: Group::ThreeParty, coef: H, kets: &["000", "010", "101", "111"], claims: THREE_LEGAL_AB },
    Entry { id: "S4.2", group: Group::ThreeParty, coef: H, kets: &["001", "010", "101", "110"], claims: &[] },
    Entry { id: "S4.3", group: Group::ThreeParty, coef: R, kets: &["000", "011"], claims: &[] },
    Entry { id: "S4.4", group: Group::ThreeParty, coef: R, kets: &["001", "010"], claims: &[] },
    Entry { id: "S4.5", group: Group::ThreeParty, coef: R, kets: &["010", "111"], claims: THREE_LEGAL_AB },
    Entry { id: "S4.6", group: Group::ThreeParty, coef: R, kets: &["011", "110"], claims: THREE_LEGAL_AB },
    Entry { id: "S5.G1.1", group: Group::FourParty, coef: H, kets: &["0011", "0110", "1001", "1100"], claims: FOUR_GOOD_NB_AI },
    Entry { id: "S5.G1.2", group: Group::FourParty, coef: H, kets: &["0010", "0111", "1000", "1101"], claims: FOUR_GOOD_NB_AI },
    Entry { id: "S5.G1.3", group: Group::FourParty, coef: H, kets: &["0001", "0100", "1011", "1110"], claims: FOUR_GOOD_NB_AI },
    Entry { id: "S5.G1.4", group: Group::FourParty, coef: H, kets: &["0000", "0101", "1010", "1111"], claims: FOUR_GOOD_NB_AI },
    Entry { id: "S5.G2.1", group: Group::FourParty, coef: H, kets: &["0010", "0100", "1011", "1101"], claims: FOUR_GOOD_AB_NI },
    Entry { id: "S5.G2.2", group: Group::FourParty, coef: H, kets: &["0001", "0111", "1000", "1110"], claims: FOUR_GOOD_AB_NI },
    Entry { id: "S5.G2.3", group: Group::FourParty, coef: H, kets: &["0000", "0110", "1001", "1111"], claims: FOUR_GOOD_AB_NI },
    Entry { id: "S5.G2.4", group: Group::FourParty, coef: H, kets: &["0011", "0101", "1010", "1100"], claims: FOUR_GOOD_AB_NI },
    Entry { id: "S6.3A", group: Group::MinimalOverlap, coef: H, kets: &["000", "001", "110", "111"], claims: THREE_ALL_BAD },
    Entry { id: "S6.3B", group: Group::MinimalOverlap, coef: H, kets: &["010", "011", "100", "101"], claims: THREE_ALL_BAD },
    Entry { id: "S6.4A", group: Group::MinimalOverlap, coef: H, kets: &["0000", "0011", "1100", "1111"], claims: FOUR_ALL_BAD },
    Entry { id: "S6.4B", group: Group::MinimalOverlap, coef: H, kets: &["0100", "0111", "1000", "1011"], claims: FOUR_ALL_BAD },
];

/// Every published state, in listing order.
pub fn load_registry() -> Vec<PaperState> {
    ENTRIES
        .iter()
        .map(|e| {
            let expression = expr(e.coef, e.kets);
            let state = parse_state(&expression).expect("registry literal parses");
            debug_assert!((state.norm_sqr() - 1.0).abs() < 1e-12);
            let roster = if state.num_qubits() == 3 {
                three_party_roster()
            } else {
                four_party_roster()
            };
            let claimed = all_heterosexual_pairs(&roster)
                .expect("both sexes")
                .iter()
                .map(|p| {
                    let label = p.label();
                    let v = e.claims.iter().find(|(l, _)| *l == label).map(|(_, v)| *v);
                    (label, v)
                })
                .collect();
            PaperState {
                id: e.id.to_string(),
                group: e.group,
                expression,
                state,
                roster,
                claimed,
            }
        })
        .collect()
}

pub fn find_state(id: &str) -> Result<PaperState> {
    load_registry()
        .into_iter()
        .find(|s| s.id == id)
        .ok_or_else(|| Error::UnknownState(id.to_string()))
}

/// Targets used to fix the sign convention: the triplet's quoted quantum
/// value plus every quoted pair index in the registry.
pub fn calibration_targets() -> Vec<CalibrationTarget> {
    let roster = two_party_roster();
    let mut targets = vec![CalibrationTarget {
        label: "triplet/Alice-Bob".into(),
        state: triplet_state(),
        pair: PairSpec::new(roster[0].clone(), roster[1].clone()).expect("opposite sexes"),
        target_index: (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0,
    }];
    for s in load_registry() {
        for pair in s.pairs() {
            if let Some(v) = s.claimed_index(&pair.label()) {
                targets.push(CalibrationTarget {
                    label: format!("{}/{}", s.id, pair.label()),
                    state: s.state.clone(),
                    pair,
                    target_index: v,
                });
            }
        }
    }
    targets
}
