use std::fmt;

use serde::Serialize;

use crate::chsh::Participant;
use crate::error::{Error, Result};
use crate::qcore::C64;

/// One factor of a biphoton product state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Block {
    /// Arbitrary two-qubit state on the given qubits.
    Pair(usize, usize),
    /// Single-qubit pure state.
    Single(usize),
}

impl Block {
    fn qubits(&self) -> Vec<usize> {
        match *self {
            Block::Pair(a, b) => vec![a, b],
            Block::Single(a) => vec![a],
        }
    }

    /// Real parameters needed to describe the block.
    pub fn num_params(&self) -> usize {
        match self {
            Block::Pair(..) => 6,
            Block::Single(_) => 2,
        }
    }
}

/// Disjoint cover of the register by pair and single blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Partition {
    blocks: Vec<Block>,
    num_qubits: usize,
}

impl Partition {
    pub fn new(blocks: Vec<Block>, num_qubits: usize) -> Result<Self> {
        let mut seen = vec![false; num_qubits];
        for b in &blocks {
            if let Block::Pair(x, y) = b {
                if x == y {
                    return Err(Error::InvalidPartition(format!("pair block repeats qubit {x}")));
                }
            }
            for q in b.qubits() {
                if q >= num_qubits {
                    return Err(Error::QubitOutOfRange { qubit: q, n: num_qubits });
                }
                if std::mem::replace(&mut seen[q], true) {
                    return Err(Error::InvalidPartition(format!("qubit {q} appears twice")));
                }
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("qubit {q} is not covered")));
        }
        Ok(Self { blocks, num_qubits })
    }

    /// Builds a partition from groups of participant ids such as
    /// `[["Alice", "Bob"], ["Natalia"]]`.
    pub fn from_groups<S: AsRef<str>>(groups: &[Vec<S>], roster: &[Participant]) -> Result<Self> {
        let qubit = |id: &str| {
            roster
                .iter()
                .find(|p| p.id == id)
                .map(|p| p.qubit)
                .ok_or_else(|| Error::UnknownParticipant(id.to_string()))
        };
        let blocks = groups
            .iter()
            .map(|g| match g.as_slice() {
                [a] => Ok(Block::Single(qubit(a.as_ref())?)),
                [a, b] => Ok(Block::Pair(qubit(a.as_ref())?, qubit(b.as_ref())?)),
                _ => Err(Error::InvalidPartition(format!("groups hold one or two participants, got {}", g.len()))),
            })
            .collect::<Result<_>>()?;
        Self::new(blocks, roster.len())
    }

    /// Parses `Alice+Bob,Natalia` against a roster.
    pub fn parse(text: &str, roster: &[Participant]) -> Result<Self> {
        let groups: Vec<Vec<&str>> = text
            .split(',')
            .map(|g| g.split('+').map(str::trim).collect())
            .collect();
        Self::from_groups(&groups, roster)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_params(&self) -> usize {
        self.blocks.iter().map(Block::num_params).sum()
    }

    /// Product-state amplitudes for a parameter vector.
    ///
    /// Pair blocks use hyperspherical magnitudes `(t1, t2, t3)` and relative
    /// phases on the last three amplitudes. Single blocks use `cos t, e^{i p}
    /// sin t`. The result is normalized by construction.
    pub fn amplitudes(&self, params: &[f64]) -> Vec<C64> {
        debug_assert_eq!(params.len(), self.num_params());
        let n = self.num_qubits;
        let mut out = vec![C64::new(1.0, 0.0); 1 << n];
        let mut off = 0;
        for block in &self.blocks {
            let p = &params[off..off + block.num_params()];
            off += block.num_params();
            let local: Vec<C64> = match block {
                Block::Pair(..) => {
                    let (s1, c1) = p[0].sin_cos();
                    let (s2, c2) = p[1].sin_cos();
                    let (s3, c3) = p[2].sin_cos();
                    vec![
                        C64::new(c1, 0.0),
                        C64::from_polar(s1 * c2, p[3]),
                        C64::from_polar(s1 * s2 * c3, p[4]),
                        C64::from_polar(s1 * s2 * s3, p[5]),
                    ]
                }
                Block::Single(_) => {
                    let (s, c) = p[0].sin_cos();
                    vec![C64::new(c, 0.0), C64::from_polar(s, p[1])]
                }
            };
            let qubits = block.qubits();
            for (idx, amp) in out.iter_mut().enumerate() {
                let local_idx = qubits
                    .iter()
                    .fold(0, |acc, &q| acc << 1 | (idx >> (n - 1 - q) & 1));
                *amp *= local[local_idx];
            }
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| match b {
                Block::Pair(a, b) => format!("{{{a},{b}}}"),
                Block::Single(a) => format!("{{{a}}}"),
            })
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

/// Unconstrained parameterization of a normalized `n`-qubit pure state by
/// `2^(n+1)` reals.
pub(crate) fn normalized_amplitudes(params: &[f64]) -> Vec<C64> {
    let amps: Vec<C64> = params.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm < 1e-300 {
        let mut e = vec![C64::new(0.0, 0.0); amps.len()];
        e[0] = C64::new(1.0, 0.0);
        return e;
    }
    amps.into_iter().map(|a| a / norm).collect()
}
