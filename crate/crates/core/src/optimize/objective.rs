use std::fmt;

use crate::chsh::{chsh_operator, gluing_index, ConventionPreset, PairSpec, XiValue};
use crate::error::{Error, Result};
use crate::qcore::{expectation, HermitianOperator, PureState, C64};

/// Quantity optimized over a strategy space. Values are in gluing-index
/// units except for [`Objective::SinglePairXi`], which is ξ itself.
#[derive(Clone, Debug, PartialEq)]
pub enum Objective {
    SinglePairXi(PairSpec),
    SumIndex(Vec<PairSpec>),
    /// Legal-pair index minus the largest illegal-pair index.
    Differentiation { legal: PairSpec, illegal: Vec<PairSpec> },
    /// Largest index over the pair set.
    MinMaxIndex(Vec<PairSpec>),
}

impl Objective {
    pub fn validate(&self) -> Result<()> {
        let empty = match self {
            Self::SinglePairXi(_) => false,
            Self::SumIndex(p) | Self::MinMaxIndex(p) => p.is_empty(),
            Self::Differentiation { illegal, .. } => illegal.is_empty(),
        };
        if empty {
            Err(Error::InvalidConfig("objective needs a nonempty pair set".into()))
        } else {
            Ok(())
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::SinglePairXi(_) => "single-pair-xi",
            Self::SumIndex(_) => "sum-index",
            Self::Differentiation { .. } => "differentiation",
            Self::MinMaxIndex(_) => "min-max-index",
        }
    }

    /// Pairs whose ξ the objective depends on, in evaluation order.
    pub fn pairs(&self) -> Vec<&PairSpec> {
        match self {
            Self::SinglePairXi(p) => vec![p],
            Self::SumIndex(p) | Self::MinMaxIndex(p) => p.iter().collect(),
            Self::Differentiation { legal, illegal } => std::iter::once(legal).chain(illegal).collect(),
        }
    }

    /// Objective value given ξ for each entry of [`Self::pairs`].
    pub fn value_from_xis(&self, xis: &[f64]) -> f64 {
        let idx = |x: f64| gluing_index(XiValue(x));
        match self {
            Self::SinglePairXi(_) => xis[0],
            Self::SumIndex(_) => xis.iter().map(|&x| idx(x)).sum(),
            Self::Differentiation { .. } => {
                idx(xis[0]) - xis[1..].iter().map(|&x| idx(x)).fold(f64::NEG_INFINITY, f64::max)
            }
            Self::MinMaxIndex(_) => xis.iter().map(|&x| idx(x)).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    pub fn evaluate(&self, state: &PureState, preset: ConventionPreset) -> Result<f64> {
        let mut xis = Vec::new();
        for pair in self.pairs() {
            let op = chsh_operator(pair, state.num_qubits(), preset)?;
            xis.push(expectation(state, &op)?);
        }
        Ok(self.value_from_xis(&xis))
    }

    /// `(H, c)` with `value = c + <psi|H|psi>` when the objective is linear in
    /// the projector `|psi><psi|`.
    pub fn linear_form(&self, n: usize, preset: ConventionPreset) -> Result<Option<(HermitianOperator, f64)>> {
        let op = |p: &PairSpec| chsh_operator(p, n, preset);
        Ok(match self {
            Self::SinglePairXi(p) => Some((op(p)?, 0.0)),
            Self::SumIndex(pairs) => {
                let mut sum = op(&pairs[0])?;
                for p in &pairs[1..] {
                    sum = sum.add(&op(p)?)?;
                }
                Some((sum.scale(0.5), pairs.len() as f64 / 2.0))
            }
            Self::Differentiation { legal, illegal } if illegal.len() == 1 => {
                Some((op(legal)?.sub(&op(&illegal[0])?)?.scale(0.5), 0.0))
            }
            Self::Differentiation { .. } | Self::MinMaxIndex(_) => None,
        })
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = |ps: &[PairSpec]| ps.iter().map(PairSpec::label).collect::<Vec<_>>().join(",");
        match self {
            Self::SinglePairXi(p) => write!(f, "single-pair-xi({})", p.label()),
            Self::SumIndex(p) => write!(f, "sum-index({})", labels(p)),
            Self::Differentiation { legal, illegal } => {
                write!(f, "differentiation({} vs {})", legal.label(), labels(illegal))
            }
            Self::MinMaxIndex(p) => write!(f, "min-max-index({})", labels(p)),
        }
    }
}

/// Objective with its pair operators prebuilt for repeated evaluation on raw
/// amplitude vectors.
pub(crate) struct CompiledObjective<'a> {
    objective: &'a Objective,
    linear: Option<(Vec<C64>, f64)>,
    ops: Vec<Vec<C64>>,
    dim: usize,
}

fn quadratic_form(op: &[C64], amps: &[C64], dim: usize) -> f64 {
    let mut acc = 0.0;
    for (i, a) in amps.iter().enumerate() {
        let row = &op[i * dim..(i + 1) * dim];
        let h: C64 = row.iter().zip(amps).map(|(h, b)| h * b).sum();
        acc += (a.conj() * h).re;
    }
    acc
}

impl<'a> CompiledObjective<'a> {
    pub(crate) fn new(objective: &'a Objective, n: usize, preset: ConventionPreset) -> Result<Self> {
        objective.validate()?;
        let linear = objective
            .linear_form(n, preset)?
            .map(|(h, c)| (h.into_matrix().data().to_vec(), c));
        let ops = if linear.is_some() {
            Vec::new()
        } else {
            objective
                .pairs()
                .into_iter()
                .map(|p| Ok(chsh_operator(p, n, preset)?.into_matrix().data().to_vec()))
                .collect::<Result<_>>()?
        };
        Ok(Self {
            objective,
            linear,
            ops,
            dim: 1 << n,
        })
    }

    /// Value at a normalized amplitude vector.
    pub(crate) fn eval(&self, amps: &[C64]) -> f64 {
        debug_assert_eq!(amps.len(), self.dim);
        match &self.linear {
            Some((h, c)) => c + quadratic_form(h, amps, self.dim),
            None => {
                let xis: Vec<f64> = self.ops.iter().map(|op| quadratic_form(op, amps, self.dim)).collect();
                self.objective.value_from_xis(&xis)
            }
        }
    }
}
