use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

use super::verify::{ClaimRecord, PairRow, RunManifest, VerificationRun, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    manifest: &'a RunManifest,
    claims: &'a [ClaimRecord],
    pairs: &'a [PairRow],
    footnotes: &'a [String],
}

pub fn emit_report(run: &VerificationRun, format: ReportFormat) -> Result<String> {
    if run.claims.is_empty() {
        return Err(Error::EmptyRecords);
    }
    match format {
        ReportFormat::Json => Ok(serde_json::to_string_pretty(&JsonReport {
            manifest: &run.manifest,
            claims: &run.claims,
            pairs: &run.pairs,
            footnotes: &run.footnotes,
        })?),
        ReportFormat::Csv => claims_to_csv(&run.claims),
        ReportFormat::Text => Ok(text_report(run)),
    }
}

/// One row per claim: `id,group,paper,computed,preset,tolerance,verdict,note`.
pub fn claims_to_csv(records: &[ClaimRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn parse_claims_csv(text: &str) -> Result<Vec<ClaimRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize().map(|row| Ok(row?)).collect()
}

fn text_report(run: &VerificationRun) -> String {
    let m = &run.manifest;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "bellchain {}  preset {} ({})  seed {}  trials {}  L {}",
        m.tool_version, m.preset, m.policy, m.seed, m.trials, m.chain_length
    );
    let _ = writeln!(
        out,
        "tolerances: coarse {:e}, exact {:e}, matrix {:e}",
        m.tolerances.coarse, m.tolerances.exact, m.tolerances.matrix
    );
    let mut group = None;
    for c in &run.claims {
        if group != Some(c.group) {
            group = Some(c.group);
            let _ = writeln!(out, "\n== {} ==", c.group.title());
        }
        let _ = writeln!(
            out,
            "{} {:<34} quoted {:<12} computed {:<20} residual {:+.3e}  tol {:e}",
            c.verdict.marker(),
            c.id,
            format!("{}", c.paper),
            format!("{:.12}", c.computed),
            c.residual(),
            c.tolerance
        );
        if c.verdict != Verdict::Confirmed && !c.note.is_empty() {
            let _ = writeln!(out, "        {}", c.note);
        }
    }
    let _ = writeln!(out, "\n== pair indices ==");
    for p in &run.pairs {
        let claimed = p.claimed.map_or("-".to_string(), |v| v.to_string());
        let _ = writeln!(
            out,
            "{:<8} {:<13} exact {:.6}  mc {:.6} ± {:.6}{}  quoted {}",
            p.state_id,
            p.pair,
            p.exact,
            p.mc_estimate,
            p.mc_stderr,
            if p.mc_consistent { "" } else { " (outside 4 se)" },
            claimed
        );
    }
    let _ = writeln!(
        out,
        "\n{} confirmed, {} refuted, {} ambiguous",
        run.count(Verdict::Confirmed),
        run.count(Verdict::Refuted),
        run.count(Verdict::Ambiguous)
    );
    for (i, f) in run.footnotes.iter().enumerate() {
        let _ = writeln!(out, "[{}] {f}", i + 1);
    }
    out
}
