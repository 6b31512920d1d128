use num_complex::Complex64;

use super::{integrate_1d, QuadResult, QuadSpec};

const LADDER: usize = 8;

/// `PV ∫_{c−h}^{c+h} f` for `f` with a simple pole at `c`.
///
/// The symmetric exclusion `∫_{ε<|x−c|<h} f` is evaluated on the ladder
/// `ε_j = h·2^{−j−2}` through the folded integrand `f(c+s) + f(c−s)`, and
/// the limit `ε → 0` is taken by Richardson extrapolation in powers of `ε`.
pub fn principal_value(
    mut f: impl FnMut(f64) -> Complex64,
    center: f64,
    halfwidth: f64,
    spec: QuadSpec,
) -> QuadResult {
    let eps: Vec<f64> = (0..LADDER)
        .map(|j| halfwidth * 0.5f64.powi(j as i32 + 2))
        .collect();
    let piece_spec = QuadSpec {
        abs_tol: spec.abs_tol / (2 * LADDER) as f64,
        rel_tol: spec.rel_tol / 4.0,
        ..spec
    };
    let mut folded = |s: f64| f(center + s) + f(center - s);
    let mut acc = integrate_1d(&mut folded, eps[0], halfwidth, piece_spec);
    let mut excluded = vec![acc];
    for j in 1..LADDER {
        let piece = integrate_1d(&mut folded, eps[j], eps[j - 1], piece_spec);
        acc = acc.combine(piece);
        excluded.push(acc);
    }
    // Neville–Richardson table with ratio 2 in ε.
    let mut table: Vec<Complex64> = excluded.iter().map(|r| r.value).collect();
    let mut previous_best = table[LADDER - 1];
    let mut best = previous_best;
    for m in 1..LADDER {
        let factor = 2f64.powi(m as i32) - 1.0;
        for j in (m..LADDER).rev() {
            table[j] = table[j] + (table[j] - table[j - 1]) / factor;
        }
        previous_best = best;
        best = table[LADDER - 1];
    }
    let last = excluded[LADDER - 1];
    let extrapolation = (best - previous_best).norm();
    let error_estimate = last.error_estimate + extrapolation;
    QuadResult {
        value: best,
        error_estimate,
        evals: last.evals,
        converged: last.converged && error_estimate <= spec.target(best),
    }
}
