use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::{QuadResult, QuadSpec};
use crate::compensated::ComplexNeumaierSum;

pub const KRONROD_POINTS: usize = 21;

/// Non-negative 21-point Kronrod abscissae, largest first; odd indices are
/// the 10-point Gauss nodes.
pub(crate) const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

pub(crate) const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_029_016,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

pub(crate) const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Abscissae and Kronrod weights of the 21-point rule on `[a, b]`.
pub fn kronrod_nodes(a: f64, b: f64) -> [(f64, f64); KRONROD_POINTS] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); KRONROD_POINTS];
    for i in 0..10 {
        out[i] = (c - h * XGK[i], h * WGK[i]);
        out[20 - i] = (c + h * XGK[i], h * WGK[i]);
    }
    out[10] = (c, h * WGK[10]);
    out
}

/// Gauss weight for Kronrod node `i` (0..21), zero when not a Gauss node.
pub(crate) fn gauss_weight(i: usize) -> f64 {
    let j = if i <= 10 { i } else { 20 - i };
    if j % 2 == 1 {
        WG[j / 2]
    } else {
        0.0
    }
}

/// Nodes on `[a, b]` with Kronrod and embedded Gauss weights.
pub(crate) fn paired_nodes(a: f64, b: f64) -> [(f64, f64, f64); KRONROD_POINTS] {
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0, 0.0); KRONROD_POINTS];
    for (i, (x, wk)) in kronrod_nodes(a, b).into_iter().enumerate() {
        out[i] = (x, wk, h * gauss_weight(i));
    }
    out
}

/// Kronrod value and QUADPACK error estimate from precomputed samples at
/// [`paired_nodes`].
pub(crate) fn panel_estimate(nodes: &[(f64, f64, f64)], values: &[f64]) -> (f64, f64) {
    let width: f64 = nodes.iter().map(|n| n.1).sum();
    let kron: f64 = nodes.iter().zip(values).map(|(n, f)| n.1 * f).sum();
    let gauss: f64 = nodes.iter().zip(values).map(|(n, f)| n.2 * f).sum();
    let resabs: f64 = nodes.iter().zip(values).map(|(n, f)| n.1 * f.abs()).sum();
    let mean = kron / width;
    let resasc: f64 = nodes
        .iter()
        .zip(values)
        .map(|(n, f)| n.1 * (f - mean).abs())
        .sum();
    (kron, scaled_error((kron - gauss).abs(), resasc, resabs))
}

/// QUADPACK's error heuristic given `|K − G|`, `∫|f − mean|` and `∫|f|`.
pub(crate) fn scaled_error(raw: f64, resasc: f64, resabs: f64) -> f64 {
    let mut err = raw;
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    err
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err
            .total_cmp(&other.err)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21(f: &mut impl FnMut(f64) -> Complex64, a: f64, b: f64, depth: u32) -> Segment {
    let nodes = kronrod_nodes(a, b);
    let h = 0.5 * (b - a);
    let mut vals = [Complex64::new(0.0, 0.0); KRONROD_POINTS];
    let mut resk = Complex64::new(0.0, 0.0);
    let mut resg = Complex64::new(0.0, 0.0);
    let mut resabs = 0.0;
    for (i, &(x, w)) in nodes.iter().enumerate() {
        let v = f(x);
        vals[i] = v;
        resk += w * v;
        resg += h * gauss_weight(i) * v;
        resabs += w * v.norm();
    }
    let mean = resk / (b - a);
    let resasc: f64 = nodes
        .iter()
        .zip(vals.iter())
        .map(|(&(_, w), v)| w * (v - mean).norm())
        .sum();
    Segment {
        a,
        b,
        value: resk,
        err: scaled_error((resk - resg).norm(), resasc.abs(), resabs.abs()),
        depth,
    }
}

/// Globally adaptive GK21 starting from the panels between consecutive
/// breakpoints. Subdivision order is deterministic.
pub fn integrate_panels(
    mut f: impl FnMut(f64) -> Complex64,
    breakpoints: &[f64],
    spec: QuadSpec,
) -> QuadResult {
    if breakpoints.len() < 2 {
        return QuadResult::zero();
    }
    let mut heap = BinaryHeap::new();
    let mut frozen = Vec::new();
    let mut evals = 0;
    for w in breakpoints.windows(2) {
        if w[1] != w[0] {
            heap.push(gk21(&mut f, w[0], w[1], 0));
            evals += KRONROD_POINTS;
        }
    }
    let total = |heap: &BinaryHeap<Segment>, frozen: &[Segment]| {
        let mut v = ComplexNeumaierSum::new();
        let mut e = 0.0;
        let mut all: Vec<&Segment> = heap.iter().chain(frozen.iter()).collect();
        all.sort_by(|x, y| x.a.total_cmp(&y.a));
        for s in all {
            v.add(s.value);
            e += s.err;
        }
        (v.value(), e)
    };
    let (mut value, mut err) = total(&heap, &frozen);
    let mut since_refresh = 0;
    let mut frozen_err = 0.0;
    loop {
        if err <= spec.target(value) || evals + 2 * KRONROD_POINTS > spec.max_evals {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= spec.max_depth {
            frozen_err += worst.err;
            frozen.push(worst);
            if frozen_err > spec.target(value) {
                break;
            }
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk21(&mut f, worst.a, mid, worst.depth + 1);
        let right = gk21(&mut f, mid, worst.b, worst.depth + 1);
        evals += 2 * KRONROD_POINTS;
        value += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        since_refresh += 1;
        if since_refresh >= 64 || err <= spec.target(value) {
            (value, err) = total(&heap, &frozen);
            since_refresh = 0;
        }
    }
    let (value, err) = total(&heap, &frozen);
    QuadResult {
        value,
        error_estimate: err,
        evals,
        converged: err <= spec.target(value),
    }
}

pub fn integrate_1d(f: impl FnMut(f64) -> Complex64, a: f64, b: f64, spec: QuadSpec) -> QuadResult {
    integrate_panels(f, &[a, b], spec)
}

pub fn integrate_1d_real(
    mut f: impl FnMut(f64) -> f64,
    a: f64,
    b: f64,
    spec: QuadSpec,
) -> QuadResult {
    integrate_panels(|x| Complex64::new(f(x), 0.0), &[a, b], spec)
}

/// `∫_a^∞ f` through `x = a + (1 − u)/u`, `u ∈ (0, 1]`.
pub fn integrate_semi_infinite(
    mut f: impl FnMut(f64) -> Complex64,
    a: f64,
    spec: QuadSpec,
) -> QuadResult {
    integrate_panels(
        |u| {
            if u <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let x = a + (1.0 - u) / u;
            let v = f(x) / (u * u);
            if v.is_finite() {
                v
            } else {
                Complex64::new(0.0, 0.0)
            }
        },
        &[0.0, 1.0],
        spec,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = WGK.iter().sum::<f64>() * 2.0 - WGK[10];
        let g: f64 = WG.iter().sum::<f64>() * 2.0;
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_for_polynomials() {
        let r = integrate_1d_real(|x| x.powi(20), 0.0, 1.0, QuadSpec::default());
        assert!((r.re() - 1.0 / 21.0).abs() < 1e-15);
        assert_eq!(r.evals, KRONROD_POINTS);
    }
}
