use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::monte_carlo::TrialChains;
use super::{MonomerKind, Shift};

/// One monoblock of one chain in a Monte Carlo trace.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub trial: usize,
    pub position: usize,
    pub participant_id: String,
    pub kind: MonomerKind,
    pub outcome: i8,
    pub shift: Shift,
}

/// Writes `trial,position,participant_id,kind,outcome,shift` rows, ordered by
/// trial, then position, then roster order.
pub fn write_trace_csv<W: Write>(writer: W, trials: &[TrialChains]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for t in trials {
        let len = t.chains.first().map_or(0, |c| c.len());
        for position in 0..len {
            for chain in &t.chains {
                let block = chain.blocks[position];
                w.serialize(TraceRow {
                    trial: t.trial,
                    position,
                    participant_id: chain.owner.id.clone(),
                    kind: block.kind,
                    outcome: block.shift.sign(),
                    shift: block.shift,
                })?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_csv<R: Read>(reader: R) -> Result<Vec<TraceRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for row in r.deserialize() {
        rows.push(row?);
    }
    Ok(rows)
}

/// JSON summary of one Monte Carlo estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub state_id: String,
    pub pair: String,
    pub preset: String,
    #[serde(rename = "L")]
    pub chain_length: usize,
    pub trials: usize,
    pub seed: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub exact: f64,
}

impl McSummary {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::{ConventionPreset, Participant, Sex};
    use crate::qcore::parse_state;
    use crate::synthesis::{synthesize_chains, ProtocolConfig};

    #[test]
    fn trace_round_trip() {
        let config = ProtocolConfig {
            state: parse_state("|01> + |10>").unwrap(),
            participants: Participant::roster(&[("Alice", Sex::First), ("Bob", Sex::Second)]),
            preset: ConventionPreset::TripletCal,
            chain_length: 3,
            trials: 2,
            master_seed: 9,
        };
        let chains = synthesize_chains(&config).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &chains).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("trial,position,participant_id,kind,outcome,shift\n"));
        let rows = read_trace_csv(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), 2 * 3 * 2);
        for row in &rows {
            let block = chains[row.trial].chain_of(&row.participant_id).unwrap().blocks[row.position];
            assert_eq!((row.kind, row.shift), (block.kind, block.shift));
            assert_eq!(row.outcome, row.shift.sign());
        }
        let first_line = text.lines().nth(1).unwrap();
        assert!(first_line.starts_with("0,0,Alice,"));
    }

    #[test]
    fn summary_schema() {
        let s = McSummary {
            state_id: "S5.G1.1".into(),
            pair: "Alice-Bob".into(),
            preset: "triplet-cal".into(),
            chain_length: 1000,
            trials: 1000,
            seed: 7,
            estimate: 0.85,
            stderr: 0.001,
            exact: 0.8535,
        };
        let v: serde_json::Value = serde_json::from_str(&s.to_json().unwrap()).unwrap();
        for key in ["state_id", "pair", "preset", "L", "trials", "seed", "estimate", "stderr", "exact"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(serde_json::from_value::<McSummary>(v).unwrap(), s);
    }
}
