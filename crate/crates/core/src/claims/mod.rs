//! Published states and quoted numbers, the verification runner and report
//! emitters.
//!
//! Every quoted value becomes a [`ClaimRecord`] holding the recomputed value,
//! the tolerance and a verdict. Values that cannot be matched in any
//! reasonable reading are marked ambiguous rather than forced.

mod registry;
mod report;
mod verify;

pub use registry::{
    calibration_targets, find_state, four_party_roster, load_registry, three_party_roster, triplet_state,
    two_party_roster, Group, PaperState, BAD_INDEX, GOOD_INDEX,
};
pub use report::{claims_to_csv, emit_report, parse_claims_csv, ReportFormat};
pub use verify::{
    optimal_pair_state, place_pairs, resolve_preset, state_seed, verify_all, ClaimRecord, PairRow, PresetPolicy,
    RunManifest, Tolerances, Verdict, VerificationRun, VerifyConfig,
};
