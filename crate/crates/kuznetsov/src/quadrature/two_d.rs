use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::gauss_kronrod::{gauss_weight, kronrod_nodes, scaled_error};
use super::{QuadResult, QuadSpec, KRONROD_POINTS};
use crate::compensated::ComplexNeumaierSum;

/// Axis-aligned box `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    rect: Rect,
    value: Complex64,
    err_x: f64,
    err_y: f64,
    depth: u32,
}

impl Cell {
    fn err(&self) -> f64 {
        self.err_x + self.err_y
    }
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err()
            .total_cmp(&other.err())
            .then_with(|| other.rect.x0.total_cmp(&self.rect.x0))
            .then_with(|| other.rect.y0.total_cmp(&self.rect.y0))
    }
}

/// Tensor GK21 on one box; the per-axis errors compare the full Kronrod
/// tensor with Gauss-in-one-axis, Kronrod-in-the-other.
fn tensor_rule(f: &mut impl FnMut(f64, f64) -> Complex64, rect: Rect, depth: u32) -> Cell {
    let nx = kronrod_nodes(rect.x0, rect.x1);
    let ny = kronrod_nodes(rect.y0, rect.y1);
    let hx = 0.5 * (rect.x1 - rect.x0);
    let hy = 0.5 * (rect.y1 - rect.y0);
    let mut vals = [[Complex64::new(0.0, 0.0); KRONROD_POINTS]; KRONROD_POINTS];
    let mut kk = Complex64::new(0.0, 0.0);
    let mut gk = Complex64::new(0.0, 0.0);
    let mut kg = Complex64::new(0.0, 0.0);
    let mut resabs = 0.0;
    for (i, &(x, wx)) in nx.iter().enumerate() {
        let gx = hx * gauss_weight(i);
        for (j, &(y, wy)) in ny.iter().enumerate() {
            let v = f(x, y);
            vals[i][j] = v;
            kk += wx * wy * v;
            gk += gx * wy * v;
            kg += wx * hy * gauss_weight(j) * v;
            resabs += wx * wy * v.norm();
        }
    }
    let area = (rect.x1 - rect.x0) * (rect.y1 - rect.y0);
    let mean = kk / area;
    let mut resasc = 0.0;
    for (i, &(_, wx)) in nx.iter().enumerate() {
        for (j, &(_, wy)) in ny.iter().enumerate() {
            resasc += wx * wy * (vals[i][j] - mean).norm();
        }
    }
    Cell {
        rect,
        value: kk,
        err_x: scaled_error((kk - gk).norm(), resasc, resabs),
        err_y: scaled_error((kk - kg).norm(), resasc, resabs),
        depth,
    }
}

/// Adaptive tensor Gauss–Kronrod over a box, bisecting each cell along the
/// axis that carries the larger error estimate.
pub fn integrate_2d(
    mut f: impl FnMut(f64, f64) -> Complex64,
    rect: Rect,
    spec: QuadSpec,
) -> QuadResult {
    const PER_CELL: usize = KRONROD_POINTS * KRONROD_POINTS;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Cell> = Vec::new();
    heap.push(tensor_rule(&mut f, rect, 0));
    let mut evals = PER_CELL;
    let total = |heap: &BinaryHeap<Cell>, frozen: &[Cell]| {
        let mut cells: Vec<&Cell> = heap.iter().chain(frozen.iter()).collect();
        cells.sort_by(|a, b| {
            a.rect
                .x0
                .total_cmp(&b.rect.x0)
                .then_with(|| a.rect.y0.total_cmp(&b.rect.y0))
        });
        let mut v = ComplexNeumaierSum::new();
        let mut e = 0.0;
        for c in cells {
            v.add(c.value);
            e += c.err();
        }
        (v.value(), e)
    };
    let (mut value, mut err) = total(&heap, &frozen);
    let mut since_refresh = 0;
    let mut frozen_err = 0.0;
    while err > spec.target(value) && evals + 2 * PER_CELL <= spec.max_evals {
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= spec.max_depth {
            frozen_err += worst.err();
            frozen.push(worst);
            if frozen_err > spec.target(value) {
                break;
            }
            continue;
        }
        let r = worst.rect;
        let (a, b) = if worst.err_x >= worst.err_y {
            let m = 0.5 * (r.x0 + r.x1);
            (Rect { x1: m, ..r }, Rect { x0: m, ..r })
        } else {
            let m = 0.5 * (r.y0 + r.y1);
            (Rect { y1: m, ..r }, Rect { y0: m, ..r })
        };
        let ca = tensor_rule(&mut f, a, worst.depth + 1);
        let cb = tensor_rule(&mut f, b, worst.depth + 1);
        evals += 2 * PER_CELL;
        value += ca.value + cb.value - worst.value;
        err += ca.err() + cb.err() - worst.err();
        heap.push(ca);
        heap.push(cb);
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
