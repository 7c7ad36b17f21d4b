//! Extrema of CHSH objectives over three strategy spaces: unrestricted pure
//! states (exact, via the largest eigenvalue when the objective is linear),
//! products of pair and single blocks (random-restart Nelder-Mead), and
//! deterministic classical assignments (exhaustive enumeration).

mod classical;
mod family;
mod nelder_mead;
mod objective;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use rayon::prelude::*;
use serde::Serialize;

use crate::chsh::{ConventionPreset, Participant};
use crate::error::{Error, Result};
use crate::qcore::{eig_hermitian, format_state, PureState, C64};

pub use classical::{classical_extremum, ClassicalAssignment, Response};
pub use family::{Block, Partition};
pub use nelder_mead::{nelder_mead, polish, Minimum};
pub use objective::Objective;

use family::normalized_amplitudes;
use objective::CompiledObjective;

#[derive(Clone, Debug, PartialEq)]
pub enum StrategySpace {
    UnrestrictedPure,
    BiphotonProduct(Partition),
    ClassicalDeterministic,
}

impl StrategySpace {
    pub fn label(&self) -> String {
        match self {
            Self::UnrestrictedPure => "unrestricted".into(),
            Self::BiphotonProduct(p) => format!("biphoton{p}"),
            Self::ClassicalDeterministic => "classical".into(),
        }
    }
}

/// Settings of the random-restart simplex search.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub restarts: usize,
    pub tolerance: f64,
    pub initial_scale: f64,
    /// Factor applied to the simplex size between polishing runs.
    pub decay: f64,
    pub max_evals: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            tolerance: 1e-9,
            initial_scale: 0.1,
            decay: 0.5,
            max_evals: 200_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Argmax {
    State(PureState),
    Classical(ClassicalAssignment),
}

impl std::fmt::Display for Argmax {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Argmax::State(s) => f.write_str(&format_state(s)),
            Argmax::Classical(a) => write!(f, "{a}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct OptimizationResult {
    pub value: f64,
    pub argmax: Argmax,
    pub method: &'static str,
    pub restarts_used: usize,
    /// Eigen residual, gradient norm or final simplex spread, by method.
    pub residual: f64,
}

/// Serializable form of an [`OptimizationResult`].
#[derive(Clone, Debug, Serialize)]
pub struct OptimizationReport {
    pub objective: String,
    pub space: String,
    pub preset: String,
    pub value: f64,
    pub argmax: String,
    pub method: String,
    pub restarts: usize,
    pub residual: f64,
}

impl OptimizationReport {
    pub fn new(
        objective: &Objective,
        space: &StrategySpace,
        preset: ConventionPreset,
        result: &OptimizationResult,
    ) -> Self {
        Self {
            objective: objective.to_string(),
            space: space.label(),
            preset: preset.name().into(),
            value: result.value,
            argmax: result.argmax.to_string(),
            method: result.method.into(),
            restarts: result.restarts_used,
            residual: result.residual,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn check_register(objective: &Objective, n: usize) -> Result<()> {
    objective.validate()?;
    for p in objective.pairs() {
        let (f, s) = p.qubits();
        for q in [f, s] {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
        }
    }
    Ok(())
}

/// Exact maximum over all `n`-qubit pure states: the offset plus the largest
/// eigenvalue of the objective's operator. Nonlinear objectives are rejected.
pub fn max_unrestricted(objective: &Objective, n: usize, preset: ConventionPreset) -> Result<OptimizationResult> {
    check_register(objective, n)?;
    let (h, offset) = objective.linear_form(n, preset)?.ok_or(Error::NonlinearObjective)?;
    let eig = eig_hermitian(&h);
    let v = eig.vector(0);
    let hv = h.matrix().apply(&v)?;
    let residual = hv
        .iter()
        .zip(&v)
        .map(|(a, b)| (a - b * eig.values[0]).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let state = PureState::from_amplitudes(v)?;
    let value = objective.evaluate(&state, preset)?;
    debug_assert!((value - offset - eig.max_value()).abs() < 1e-9);
    Ok(OptimizationResult {
        value,
        argmax: Argmax::State(state),
        method: "eigen",
        restarts_used: 0,
        residual,
    })
}

/// Projected gradient ascent of the Rayleigh quotient from random starts.
/// Independent of the eigensolver; used to cross-check [`max_unrestricted`].
pub fn ascend_unrestricted(
    objective: &Objective,
    n: usize,
    preset: ConventionPreset,
    config: &SearchConfig,
) -> Result<OptimizationResult> {
    check_register(objective, n)?;
    let (h, offset) = objective.linear_form(n, preset)?.ok_or(Error::NonlinearObjective)?;
    let dim = 1usize << n;
    let frob = h.matrix().data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let step = if frob > 0.0 { 1.0 / frob } else { 1.0 };
    let restarts = config.restarts.max(1);

    let runs: Vec<(f64, Vec<C64>, f64)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(config.seed, r);
            let params: Vec<f64> = (0..2 * dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let mut psi = normalized_amplitudes(&params);
            let mut value = f64::NEG_INFINITY;
            let mut grad_norm = f64::INFINITY;
            for _ in 0..200_000 {
                let hpsi = h.matrix().apply(&psi).expect("dimension");
                let v: f64 = psi.iter().zip(&hpsi).map(|(a, b)| (a.conj() * b).re).sum();
                let grad: Vec<C64> = hpsi.iter().zip(&psi).map(|(hp, p)| hp - p * v).collect();
                grad_norm = grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
                let converged = (v - value).abs() < 1e-16 && grad_norm < config.tolerance;
                value = v;
                if converged {
                    break;
                }
                let moved: Vec<C64> = psi.iter().zip(&grad).map(|(p, g)| p + g * step).collect();
                let norm = moved.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                psi = moved.into_iter().map(|z| z / norm).collect();
            }
            (value, psi, grad_norm)
        })
        .collect();

    let best = pick_best(runs.iter().map(|r| r.0), true);
    let (_, psi, grad_norm) = runs[best].clone();
    let state = PureState::from_amplitudes(psi)?;
    let value = objective.evaluate(&state, preset)?;
    debug_assert!((value - offset - runs[best].0).abs() < 1e-9);
    Ok(OptimizationResult {
        value,
        argmax: Argmax::State(state),
        method: "rayleigh-ascent",
        restarts_used: restarts,
        residual: grad_norm,
    })
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Index of the best value; earliest wins ties.
fn pick_best(values: impl Iterator<Item = f64>, maximize: bool) -> usize {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.enumerate() {
        let better = match best {
            None => true,
            Some((_, b)) => (maximize && v > b) || (!maximize && v < b),
        };
        if better {
            best = Some((i, v));
        }
    }
    best.map_or(0, |(i, _)| i)
}

enum Family<'a> {
    Unrestricted(usize),
    Product(&'a Partition),
}

impl Family<'_> {
    fn num_params(&self) -> usize {
        match self {
            Family::Unrestricted(n) => 2 << n,
            Family::Product(p) => p.num_params(),
        }
    }

    fn amplitudes(&self, params: &[f64]) -> Vec<C64> {
        match self {
            Family::Unrestricted(_) => normalized_amplitudes(params),
            Family::Product(p) => p.amplitudes(params),
        }
    }

    fn start(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match self {
            Family::Unrestricted(_) => (0..self.num_params()).map(|_| StandardNormal.sample(rng)).collect(),
            Family::Product(_) => {
                let angle = Uniform::new(0.0, std::f64::consts::TAU).expect("finite range");
                (0..self.num_params()).map(|_| angle.sample(rng)).collect()
            }
        }
    }
}

fn simplex_search(
    objective: &Objective,
    family: Family<'_>,
    n: usize,
    preset: ConventionPreset,
    maximize: bool,
    config: &SearchConfig,
) -> Result<OptimizationResult> {
    check_register(objective, n)?;
    if config.restarts == 0 {
        return Err(Error::InvalidConfig("at least one restart is required".into()));
    }
    let compiled = CompiledObjective::new(objective, n, preset)?;
    let sign = if maximize { -1.0 } else { 1.0 };
    let f = |x: &[f64]| sign * compiled.eval(&family.amplitudes(x));

    let runs: Vec<Minimum> = (0..config.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = restart_rng(config.seed, r);
            let x0 = family.start(&mut rng);
            polish(&f, &x0, config.initial_scale, config.decay, config.tolerance, config.max_evals)
        })
        .collect();
    let best = &runs[pick_best(runs.iter().map(|m| m.value), false)];
    let state = PureState::from_amplitudes(family.amplitudes(&best.x))?;
    let value = objective.evaluate(&state, preset)?;
    Ok(OptimizationResult {
        value,
        argmax: Argmax::State(state),
        method: "nelder-mead",
        restarts_used: config.restarts,
        residual: best.spread,
    })
}

/// Maximum over product states of the given partition.
pub fn max_biphoton_family(
    objective: &Objective,
    partition: &Partition,
    preset: ConventionPreset,
    config: &SearchConfig,
) -> Result<OptimizationResult> {
    simplex_search(objective, Family::Product(partition), partition.num_qubits(), preset, true, config)
}

/// Simplex search over all pure states; works for nonlinear objectives.
pub fn search_unrestricted(
    objective: &Objective,
    n: usize,
    preset: ConventionPreset,
    maximize: bool,
    config: &SearchConfig,
) -> Result<OptimizationResult> {
    simplex_search(objective, Family::Unrestricted(n), n, preset, maximize, config)
}

/// Classical (local deterministic) maximum.
pub fn classical_bound(objective: &Objective, participants: &[Participant]) -> Result<OptimizationResult> {
    let (value, a) = classical_extremum(objective, participants, true)?;
    Ok(OptimizationResult {
        value,
        argmax: Argmax::Classical(a),
        method: "enumeration",
        restarts_used: 0,
        residual: 0.0,
    })
}

/// Maximum in any of the three spaces. Unrestricted linear objectives use
/// the eigensolver; nonlinear ones fall back to the simplex search.
pub fn maximize(
    objective: &Objective,
    space: &StrategySpace,
    participants: &[Participant],
    preset: ConventionPreset,
    config: &SearchConfig,
) -> Result<OptimizationResult> {
    let n = participants.len();
    match space {
        StrategySpace::UnrestrictedPure => match max_unrestricted(objective, n, preset) {
            Err(Error::NonlinearObjective) => search_unrestricted(objective, n, preset, true, config),
            other => other,
        },
        StrategySpace::BiphotonProduct(p) => max_biphoton_family(objective, p, preset, config),
        StrategySpace::ClassicalDeterministic => classical_bound(objective, participants),
    }
}

/// Smallest achievable value of the largest gluing index over `pairs`.
pub fn min_all_pairs(
    objective_pairs: Vec<crate::chsh::PairSpec>,
    space: &StrategySpace,
    participants: &[Participant],
    preset: ConventionPreset,
    config: &SearchConfig,
) -> Result<OptimizationResult> {
    let objective = Objective::MinMaxIndex(objective_pairs);
    let n = participants.len();
    match space {
        StrategySpace::UnrestrictedPure => search_unrestricted(&objective, n, preset, false, config),
        StrategySpace::BiphotonProduct(p) => {
            simplex_search(&objective, Family::Product(p), p.num_qubits(), preset, false, config)
        }
        StrategySpace::ClassicalDeterministic => {
            let (value, a) = classical_extremum(&objective, participants, false)?;
            Ok(OptimizationResult {
                value,
                argmax: Argmax::Classical(a),
                method: "enumeration",
                restarts_used: 0,
                residual: 0.0,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chsh::{all_heterosexual_pairs, PairSpec, Sex};
    use crate::qcore::{eig_hermitian, expectation};
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn roster(entries: &[(&str, Sex)]) -> Vec<Participant> {
        Participant::roster(entries)
    }

    fn three() -> Vec<Participant> {
        roster(&[("Alice", Sex::First), ("Natalia", Sex::First), ("Bob", Sex::Second)])
    }

    fn four() -> Vec<Participant> {
        roster(&[
            ("Alice", Sex::First),
            ("Natasha", Sex::First),
            ("Bob", Sex::Second),
            ("Ivan", Sex::Second),
        ])
    }

    fn pair(r: &[Participant], a: &str, b: &str) -> PairSpec {
        PairSpec::from_label(&format!("{a}-{b}"), r).unwrap()
    }

    fn quick() -> SearchConfig {
        SearchConfig {
            restarts: 16,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn tsirelson_for_every_preset() {
        let r = roster(&[("Alice", Sex::First), ("Bob", Sex::Second)]);
        let o = Objective::SinglePairXi(pair(&r, "Alice", "Bob"));
        for preset in ConventionPreset::ALL {
            let res = max_unrestricted(&o, 2, preset).unwrap();
            assert!((res.value - FRAC_1_SQRT_2).abs() < 1e-12, "{preset}");
            assert!(res.residual < 1e-12);
        }
    }

    #[test]
    fn single_pair_sum_index() {
        let r = roster(&[("Alice", Sex::First), ("Bob", Sex::Second)]);
        let o = Objective::SumIndex(vec![pair(&r, "Alice", "Bob")]);
        let res = max_unrestricted(&o, 2, ConventionPreset::TripletCal).unwrap();
        assert!((res.value - (1.0 + FRAC_1_SQRT_2) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn classical_bounds() {
        let r = roster(&[("Alice", Sex::First), ("Bob", Sex::Second)]);
        let o = Objective::SinglePairXi(pair(&r, "Alice", "Bob"));
        assert_eq!(classical_bound(&o, &r).unwrap().value, 0.5);
        let r3 = three();
        let o = Objective::SumIndex(all_heterosexual_pairs(&r3).unwrap());
        assert_eq!(classical_bound(&o, &r3).unwrap().value, 1.5);
        let r4 = four();
        let o = Objective::SumIndex(all_heterosexual_pairs(&r4).unwrap());
        assert_eq!(classical_bound(&o, &r4).unwrap().value, 3.0);
    }

    #[test]
    fn unrestricted_sum_matches_classical_for_shared_partner() {
        // both FIRST participants share Bob, so the sum saturates at 1.5
        let r3 = three();
        let o = Objective::SumIndex(all_heterosexual_pairs(&r3).unwrap());
        let res = max_unrestricted(&o, 3, ConventionPreset::TripletCal).unwrap();
        assert!((res.value - 1.5).abs() < 1e-10, "{}", res.value);
        let r4 = four();
        let o = Objective::SumIndex(all_heterosexual_pairs(&r4).unwrap());
        let res = max_unrestricted(&o, 4, ConventionPreset::TripletCal).unwrap();
        assert!((res.value - 3.0).abs() < 1e-10, "{}", res.value);
    }

    #[test]
    fn eigen_and_ascent_agree() {
        let r4 = four();
        let objectives = [
            Objective::SumIndex(vec![pair(&r4, "Alice", "Bob"), pair(&r4, "Natasha", "Ivan")]),
            Objective::Differentiation {
                legal: pair(&r4, "Alice", "Bob"),
                illegal: vec![pair(&r4, "Natasha", "Bob")],
            },
            Objective::SinglePairXi(pair(&r4, "Natasha", "Ivan")),
        ];
        for o in &objectives {
            for preset in ConventionPreset::ALL {
                let e = max_unrestricted(o, 4, preset).unwrap();
                let a = ascend_unrestricted(o, 4, preset, &SearchConfig { restarts: 4, ..quick() }).unwrap();
                assert!((e.value - a.value).abs() < 1e-6, "{o} {preset}: {} vs {}", e.value, a.value);
            }
        }
    }

    #[test]
    fn degenerate_top_eigenspace_value_is_basis_independent() {
        // AB operator on four qubits has a fourfold degenerate top eigenvalue
        let r4 = four();
        let o = Objective::SinglePairXi(pair(&r4, "Alice", "Bob"));
        let (h, _) = o.linear_form(4, ConventionPreset::Section2).unwrap().unwrap();
        let eig = eig_hermitian(&h);
        assert!((eig.values[3] - eig.values[0]).abs() < 1e-12);
        assert!(eig.values[4] < eig.values[0] - 1e-6);
        for k in 0..4 {
            let s = PureState::from_amplitudes(eig.vector(k)).unwrap();
            assert!((expectation(&s, &h).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        }
        let mix: Vec<C64> = (0..16)
            .map(|i| eig.vector(0)[i] * 0.6 + eig.vector(3)[i] * C64::new(0.0, 0.8))
            .collect();
        let s = PureState::from_amplitudes(mix).unwrap();
        assert!((expectation(&s, &h).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        let res = max_unrestricted(&o, 4, ConventionPreset::Section2).unwrap();
        assert!((res.value - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn nonlinear_objective_rejected_by_eigen_path() {
        let r3 = three();
        let o = Objective::MinMaxIndex(all_heterosexual_pairs(&r3).unwrap());
        assert!(matches!(
            max_unrestricted(&o, 3, ConventionPreset::Section2),
            Err(Error::NonlinearObjective)
        ));
    }

    #[test]
    fn biphoton_pair_reaches_tsirelson() {
        let r3 = three();
        let p = Partition::parse("Alice+Bob,Natalia", &r3).unwrap();
        let o = Objective::SinglePairXi(pair(&r3, "Alice", "Bob"));
        let res = max_biphoton_family(&o, &p, ConventionPreset::TripletCal, &quick()).unwrap();
        assert!((res.value - FRAC_1_SQRT_2).abs() < 1e-6, "{}", res.value);
    }

    #[test]
    fn split_pair_is_limited_to_product_correlations() {
        // product states: ξ = (√2/4) max over unit vectors of n·m restricted to the xz plane
        let r3 = three();
        let p = Partition::parse("Natalia+Bob,Alice", &r3).unwrap();
        let o = Objective::SinglePairXi(pair(&r3, "Alice", "Bob"));
        let res = max_biphoton_family(&o, &p, ConventionPreset::TripletCal, &quick()).unwrap();
        assert!((res.value - SQRT_2 / 4.0).abs() < 1e-6, "{}", res.value);
    }

    #[test]
    fn biphoton_three_party_maxima() {
        let r3 = three();
        let p = Partition::parse("Alice+Bob,Natalia", &r3).unwrap();
        let sum = Objective::SumIndex(all_heterosexual_pairs(&r3).unwrap());
        let diff = Objective::Differentiation {
            legal: pair(&r3, "Alice", "Bob"),
            illegal: vec![pair(&r3, "Natalia", "Bob")],
        };
        for preset in [ConventionPreset::Section2, ConventionPreset::TripletCal] {
            let s = max_biphoton_family(&sum, &p, preset, &quick()).unwrap();
            assert!((s.value - (1.0 + (1.0 + FRAC_1_SQRT_2) / 4.0)).abs() < 1e-6, "{}", s.value);
            let d = max_biphoton_family(&diff, &p, preset, &quick()).unwrap();
            assert!((d.value - (1.0 + FRAC_1_SQRT_2) / 4.0).abs() < 1e-6, "{}", d.value);
        }
    }

    #[test]
    fn biphoton_four_party_sum() {
        let r4 = four();
        let sum = Objective::SumIndex(all_heterosexual_pairs(&r4).unwrap());
        let want = 2.0 + 9.0 / (8.0 * SQRT_2);
        for groups in ["Alice+Bob,Natasha+Ivan", "Alice+Ivan,Natasha+Bob"] {
            let p = Partition::parse(groups, &r4).unwrap();
            let res = max_biphoton_family(&sum, &p, ConventionPreset::TripletCal, &quick()).unwrap();
            assert!((res.value - want).abs() < 1e-6, "{groups}: {}", res.value);
        }
    }

    #[test]
    fn nesting_classical_product_unrestricted() {
        let r3 = three();
        let o = Objective::Differentiation {
            legal: pair(&r3, "Alice", "Bob"),
            illegal: vec![pair(&r3, "Natalia", "Bob")],
        };
        let preset = ConventionPreset::TripletCal;
        let p = Partition::parse("Alice+Bob,Natalia", &r3).unwrap();
        let c = classical_bound(&o, &r3).unwrap().value;
        let b = max_biphoton_family(&o, &p, preset, &quick()).unwrap().value;
        let u = max_unrestricted(&o, 3, preset).unwrap().value;
        assert!(b <= u + 1e-9 && c <= u + 1e-9, "{c} {b} {u}");

        let single = Objective::SinglePairXi(pair(&r3, "Alice", "Bob"));
        let c = classical_bound(&single, &r3).unwrap().value;
        let b = max_biphoton_family(&single, &p, preset, &quick()).unwrap().value;
        let u = max_unrestricted(&single, 3, preset).unwrap().value;
        assert!(c <= b + 1e-9 && b <= u + 1e-9, "{c} {b} {u}");
        assert!((b - u).abs() < 1e-6);
    }

    #[test]
    fn result_value_matches_argmax() {
        let r3 = three();
        let o = Objective::SumIndex(all_heterosexual_pairs(&r3).unwrap());
        let p = Partition::parse("Alice+Bob,Natalia", &r3).unwrap();
        let res = max_biphoton_family(&o, &p, ConventionPreset::TripletCal, &quick()).unwrap();
        let Argmax::State(s) = &res.argmax else { panic!() };
        assert!((o.evaluate(s, ConventionPreset::TripletCal).unwrap() - res.value).abs() < 1e-9);
    }

    #[test]
    fn search_is_deterministic() {
        let r3 = three();
        let o = Objective::SumIndex(all_heterosexual_pairs(&r3).unwrap());
        let p = Partition::parse("Alice+Bob,Natalia", &r3).unwrap();
        let cfg = SearchConfig { restarts: 4, ..quick() };
        let a = max_biphoton_family(&o, &p, ConventionPreset::TripletCal, &cfg).unwrap();
        let b = max_biphoton_family(&o, &p, ConventionPreset::TripletCal, &cfg).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.argmax, b.argmax);
    }

    #[test]
    fn min_max_index() {
        let r3 = three();
        let pairs = all_heterosexual_pairs(&r3).unwrap();
        let c = min_all_pairs(pairs.clone(), &StrategySpace::ClassicalDeterministic, &r3, ConventionPreset::TripletCal, &quick())
            .unwrap();
        assert_eq!(c.value, 0.25);
        let q = min_all_pairs(pairs, &StrategySpace::UnrestrictedPure, &r3, ConventionPreset::TripletCal, &quick()).unwrap();
        assert!(q.value < 0.26 && q.value > 0.24, "{}", q.value);
    }

    #[test]
    fn report_json_keys() {
        let r = roster(&[("Alice", Sex::First), ("Bob", Sex::Second)]);
        let o = Objective::SinglePairXi(pair(&r, "Alice", "Bob"));
        let res = classical_bound(&o, &r).unwrap();
        let rep = OptimizationReport::new(&o, &StrategySpace::ClassicalDeterministic, ConventionPreset::Section2, &res);
        let v: serde_json::Value = serde_json::from_str(&rep.to_json().unwrap()).unwrap();
        for k in ["objective", "space", "preset", "value", "argmax", "restarts", "residual"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert_eq!(v["argmax"], "Alice(a=-1,b=-1) Bob(X=-1,Y=-1)");
    }
}
