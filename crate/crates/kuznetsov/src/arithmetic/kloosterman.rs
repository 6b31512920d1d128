use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, RwLock};

use num_complex::Complex64;
use num_integer::Integer;
use rustfft::FftPlanner;

use super::mod_inverse;
use crate::compensated::NeumaierSum;

/// Largest modulus accepted; keeps every index product inside `i128`
/// comfortably and tables small.
const MAX_MODULUS: u64 = 1 << 31;

fn reduce(a: i64, c: u64) -> u64 {
    i128::from(a).rem_euclid(i128::from(c)) as u64
}

/// `S(a, b; c) = Σ_{x ∈ (Z/c)^*} cos(2π (a x̄ + b x) / c)`, indices reduced
/// exactly in integers before the table lookup.
pub fn kloosterman_direct(a: i64, b: i64, c: u64) -> f64 {
    assert!(c >= 1 && c < MAX_MODULUS, "modulus out of range: {c}");
    let (a, b) = (u128::from(reduce(a, c)), u128::from(reduce(b, c)));
    let cc = u128::from(c);
    let table: Vec<f64> = (0..c).map(|k| (TAU * k as f64 / c as f64).cos()).collect();
    let mut acc = NeumaierSum::new();
    for x in (0..c).filter(|x| x.gcd(&c) == 1) {
        let xbar = u128::from(mod_inverse(x as i64, c).expect("unit").value());
        let k = (a * xbar + b * u128::from(x)) % cc;
        acc.add(table[k as usize]);
    }
    acc.value()
}

/// All `S(a, n; c)` for `n = 0..c`, via one inverse DFT of
/// `x ↦ e(a x̄ / c)` on units.
pub fn kloosterman_row(a: i64, c: u64) -> Vec<f64> {
    assert!(c >= 1 && c < MAX_MODULUS, "modulus out of range: {c}");
    let cu = c as usize;
    let ar = u128::from(reduce(a, c));
    let mut buf = vec![Complex64::new(0.0, 0.0); cu];
    for x in (0..c).filter(|x| x.gcd(&c) == 1) {
        let xbar = u128::from(mod_inverse(x as i64, c).expect("unit").value());
        let k = (ar * xbar % u128::from(c)) as f64;
        buf[x as usize] = Complex64::from_polar(1.0, TAU * k / c as f64);
    }
    if cu > 1 {
        let mut planner = FftPlanner::new();
        planner.plan_fft_inverse(cu).process(&mut buf);
    }
    buf.into_iter().map(|z| z.re).collect()
}

type Row = Arc<Vec<f64>>;

/// Memoised Kloosterman sums keyed by reduced arguments, plus whole rows
/// `n ↦ S(a, n; c)` for the experiment loops. Safe for concurrent use.
#[derive(Debug, Default)]
pub struct KloostermanCache {
    values: RwLock<HashMap<(u64, u64, u64), f64>>,
    rows: RwLock<HashMap<(u64, u64), Row>>,
}

impl KloostermanCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.values.read().expect("cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, a: i64, b: i64, c: u64) -> f64 {
        let key = (reduce(a, c), reduce(b, c), c);
        if let Some(v) = self.values.read().expect("cache poisoned").get(&key) {
            return *v;
        }
        let v = kloosterman_direct(key.0 as i64, key.1 as i64, c);
        self.values.write().expect("cache poisoned").insert(key, v);
        v
    }

    pub fn row(&self, a: i64, c: u64) -> Row {
        let key = (reduce(a, c), c);
        if let Some(r) = self.rows.read().expect("cache poisoned").get(&key) {
            return Arc::clone(r);
        }
        let row = Arc::new(kloosterman_row(key.0 as i64, c));
        let mut w = self.rows.write().expect("cache poisoned");
        Arc::clone(w.entry(key).or_insert(row))
    }

    /// Inserts precomputed rows (e.g. built in parallel).
    pub fn insert_rows(&self, a: i64, rows: impl IntoIterator<Item = (u64, Vec<f64>)>) {
        let mut w = self.rows.write().expect("cache poisoned");
        for (c, row) in rows {
            w.entry((reduce(a, c), c)).or_insert_with(|| Arc::new(row));
        }
    }
}

/// Cached `S(a, b; c)`.
pub fn kloosterman(a: i64, b: i64, c: u64, cache: &KloostermanCache) -> f64 {
    cache.get(a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(kloosterman_direct(1, 1, 1), 1.0);
        assert!((kloosterman_direct(1, 1, 3) + 1.0).abs() < 1e-14);
        assert!((kloosterman_direct(1, 1, 2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn row_matches_direct() {
        for c in [1u64, 2, 7, 12, 30, 97, 128, 210] {
            for a in [1i64, 2, -3] {
                let row = kloosterman_row(a, c);
                for n in 0..c {
                    let d = kloosterman_direct(a, n as i64, c);
                    assert!((row[n as usize] - d).abs() < 1e-10, "a={a} n={n} c={c}");
                }
            }
        }
    }

    #[test]
    fn cache_reduces_keys() {
        let cache = KloostermanCache::new();
        let v = kloosterman(3, 5, 11, &cache);
        assert_eq!(kloosterman(3 + 11, 5 - 22, 11, &cache), v);
        assert_eq!(cache.len(), 1);
    }
}
