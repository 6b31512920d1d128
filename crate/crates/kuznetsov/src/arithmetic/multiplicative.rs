use num_integer::Integer;

/// Prime factorisation by trial division over a 2,3-wheel.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize needs n >= 1");
    let mut out = Vec::new();
    for p in [2u64, 3] {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    let mut p = 5u64;
    let mut step = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += step;
        step = 6 - step;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sorted list of positive divisors.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn num_divisors(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(_, e)| u64::from(e) + 1)
        .product()
}

pub fn sigma1(n: u64) -> u64 {
    divisors(n).into_iter().sum()
}

/// Ramanujan sum `f_l(m) = μ(l/(l,m)) φ(l) / φ(l/(l,m))`.
pub fn ramanujan_closed(l: u64, m: i64) -> i64 {
    assert!(l >= 1, "ramanujan_closed needs l >= 1");
    let g = l.gcd(&m.unsigned_abs());
    let q = l / g;
    let mu = moebius(q);
    if mu == 0 {
        return 0;
    }
    let num = euler_phi(l);
    let den = euler_phi(q);
    debug_assert_eq!(num % den, 0);
    mu * (num / den) as i64
}

/// Ramanujan sum via `f_n(m) = Σ_{r | (m,n)} μ(n/r) r`.
pub fn ramanujan_divisor(n: u64, m: i64) -> i64 {
    assert!(n >= 1, "ramanujan_divisor needs n >= 1");
    let g = n.gcd(&m.unsigned_abs());
    divisors(g)
        .into_iter()
        .map(|r| moebius(n / r) * r as i64)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(divisors(6), vec![1, 2, 3, 6]);
        assert_eq!(ramanujan_closed(4, 2), -2);
        assert_eq!(ramanujan_divisor(4, 2), -2);
        assert_eq!(ramanujan_closed(1, 17), 1);
        assert_eq!(ramanujan_divisor(1, 5), 1);
    }

    #[test]
    fn factorisation_roundtrip() {
        for n in 1..5000u64 {
            let prod: u64 = factorize(n).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
        }
    }

    #[test]
    fn zero_argument_gives_phi() {
        for c in 1..300 {
            assert_eq!(ramanujan_closed(c, 0), euler_phi(c) as i64);
            assert_eq!(ramanujan_divisor(c, 0), euler_phi(c) as i64);
        }
    }

    #[test]
    fn phi_matches_gcd_count() {
        for n in 1..400u64 {
            let count = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            assert_eq!(euler_phi(n), count, "n = {n}");
        }
    }
}
