/// Outcome of one Nelder-Mead minimization.
#[derive(Clone, Debug)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    /// Spread of function values over the final simplex.
    pub spread: f64,
    pub evaluations: usize,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Downhill simplex minimization from an axis-aligned simplex of edge `scale`
/// around `x0`. Stops when the value spread drops to `tol` or after
/// `max_evals` evaluations.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], scale: f64, tol: f64, max_evals: usize) -> Minimum {
    let d = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    simplex.push(x0.to_vec());
    for i in 0..d {
        let mut v = x0.to_vec();
        v[i] += scale;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    let mut evals = d + 1;
    let mut order: Vec<usize> = (0..=d).collect();

    loop {
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let (best, worst, second) = (order[0], order[d], order[d.saturating_sub(1)]);
        let spread = values[worst] - values[best];
        if spread <= tol || evals >= max_evals {
            return Minimum {
                x: simplex[best].clone(),
                value: values[best],
                spread,
                evaluations: evals,
            };
        }

        let mut centroid = vec![0.0; d];
        for &k in &order[..d] {
            for (c, v) in centroid.iter_mut().zip(&simplex[k]) {
                *c += v / d as f64;
            }
        }
        let along = |t: f64, from: &[f64]| -> Vec<f64> {
            centroid.iter().zip(from).map(|(c, w)| c + t * (c - w)).collect()
        };

        let xr = along(REFLECT, &simplex[worst]);
        let fr = f(&xr);
        evals += 1;
        if fr < values[best] {
            let xe = along(REFLECT * EXPAND, &simplex[worst]);
            let fe = f(&xe);
            evals += 1;
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            simplex[worst] = xr;
            values[worst] = fr;
            continue;
        }
        let (xc, fc) = if fr < values[worst] {
            let xc = along(REFLECT * CONTRACT, &simplex[worst]);
            let fc = f(&xc);
            (xc, fc)
        } else {
            let xc = along(-CONTRACT, &simplex[worst]);
            let fc = f(&xc);
            (xc, fc)
        };
        evals += 1;
        if fc < fr.min(values[worst]) {
            simplex[worst] = xc;
            values[worst] = fc;
            continue;
        }
        let anchor = simplex[best].clone();
        for &k in &order[1..] {
            for (v, a) in simplex[k].iter_mut().zip(&anchor) {
                *v = a + SHRINK * (*v - a);
            }
            values[k] = f(&simplex[k]);
            evals += 1;
        }
    }
}

/// Repeated Nelder-Mead runs from the incumbent with a geometrically
/// shrinking initial simplex, until a run improves by no more than `tol`.
pub fn polish<F: Fn(&[f64]) -> f64>(
    f: &F,
    x0: &[f64],
    scale: f64,
    decay: f64,
    tol: f64,
    max_evals: usize,
) -> Minimum {
    let mut best = nelder_mead(f, x0, scale, tol, max_evals);
    let mut s = scale * decay;
    let mut evals = best.evaluations;
    while s > 1e-7 {
        let next = nelder_mead(f, &best.x, s, tol, max_evals);
        evals += next.evaluations;
        let gain = best.value - next.value;
        if next.value < best.value {
            best = next;
        }
        if gain <= tol {
            break;
        }
        s *= decay;
    }
    best.evaluations = evals;
    best
}
