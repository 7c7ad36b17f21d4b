use std::fmt;

use serde::Serialize;

use crate::chsh::{Participant, Sex};
use crate::error::{Error, Result};

use super::Objective;

/// Predetermined `±1` answers of one participant to its two measurements:
/// `(a, b)` for FIRST sex, `(X, Y)` for SECOND sex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Response {
    pub participant_id: String,
    pub sex: Sex,
    pub values: [i8; 2],
}

/// Deterministic local hidden-variable strategy: one [`Response`] per
/// participant, in roster order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassicalAssignment {
    pub responses: Vec<Response>,
}

impl ClassicalAssignment {
    fn values_of(&self, id: &str) -> [i8; 2] {
        self.responses
            .iter()
            .find(|r| r.participant_id == id)
            .map(|r| r.values)
            .expect("assignment covers every pair member")
    }

    /// ξ of a pair under this assignment.
    pub fn xi(&self, first_id: &str, second_id: &str) -> f64 {
        let [a, b] = self.values_of(first_id).map(f64::from);
        let [x, y] = self.values_of(second_id).map(f64::from);
        0.25 * (a * x + a * y + b * x - b * y)
    }

    pub fn evaluate(&self, objective: &Objective) -> f64 {
        let xis: Vec<f64> = objective
            .pairs()
            .iter()
            .map(|p| self.xi(&p.first.id, &p.second.id))
            .collect();
        objective.value_from_xis(&xis)
    }
}

impl fmt::Display for ClassicalAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |v: i8| if v > 0 { "+1" } else { "-1" };
        let parts: Vec<String> = self
            .responses
            .iter()
            .map(|r| {
                let (u, v) = match r.sex {
                    Sex::First => ("a", "b"),
                    Sex::Second => ("X", "Y"),
                };
                format!("{}({u}={},{v}={})", r.participant_id, sign(r.values[0]), sign(r.values[1]))
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

fn assignment(participants: &[Participant], code: usize) -> ClassicalAssignment {
    let total_bits = 2 * participants.len();
    let bit = |k: usize| if code >> (total_bits - 1 - k) & 1 == 1 { 1 } else { -1 };
    ClassicalAssignment {
        responses: participants
            .iter()
            .enumerate()
            .map(|(i, p)| Response {
                participant_id: p.id.clone(),
                sex: p.sex,
                values: [bit(2 * i), bit(2 * i + 1)],
            })
            .collect(),
    }
}

/// Exhaustive search over the `4^n` deterministic assignments.
///
/// Assignments are visited in lexicographic order of the response sequence
/// (roster order, -1 before +1) and only strict improvements replace the
/// incumbent, so ties resolve to the lexicographically smallest assignment.
pub fn classical_extremum(
    objective: &Objective,
    participants: &[Participant],
    maximize: bool,
) -> Result<(f64, ClassicalAssignment)> {
    objective.validate()?;
    if participants.is_empty() || participants.len() > 8 {
        return Err(Error::InvalidConfig(format!(
            "classical enumeration needs 1 to 8 participants, got {}",
            participants.len()
        )));
    }
    for p in objective.pairs() {
        for member in [&p.first, &p.second] {
            if !participants.iter().any(|q| q.id == member.id) {
                return Err(Error::UnknownParticipant(member.id.clone()));
            }
        }
    }
    let mut best: Option<(f64, ClassicalAssignment)> = None;
    for code in 0..1usize << (2 * participants.len()) {
        let a = assignment(participants, code);
        let v = a.evaluate(objective);
        let better = match &best {
            None => true,
            Some((b, _)) if maximize => v > *b,
            Some((b, _)) => v < *b,
        };
        if better {
            best = Some((v, a));
        }
    }
    Ok(best.expect("at least one assignment"))
}
