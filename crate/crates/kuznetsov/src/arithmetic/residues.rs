use num_integer::Integer;
use serde::Serialize;

use super::{divisors, ArithmeticError, Result};

/// A residue class `value mod modulus` with `0 <= value < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    pub fn new(a: i64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(ArithmeticError::ZeroModulus);
        }
        let value = i128::from(a).rem_euclid(i128::from(modulus)) as u64;
        Ok(Self { value, modulus })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn mul(self, other: Residue) -> Residue {
        assert_eq!(self.modulus, other.modulus, "moduli differ");
        let v = (u128::from(self.value) * u128::from(other.value)) % u128::from(self.modulus);
        Residue {
            value: v as u64,
            modulus: self.modulus,
        }
    }
}

/// Inverse of `a` modulo `c`.
pub fn mod_inverse(a: i64, c: u64) -> Result<Residue> {
    if c == 0 {
        return Err(ArithmeticError::ZeroModulus);
    }
    let ci = c as i128;
    let ar = i128::from(a).rem_euclid(ci);
    let eg = ar.extended_gcd(&ci);
    if eg.gcd != 1 {
        return Err(ArithmeticError::NotCoprime { a, c });
    }
    Ok(Residue {
        value: eg.x.rem_euclid(ci) as u64,
        modulus: c,
    })
}

/// Representative `(x, y)` of a class in `X(c1, c2, n)`: `c2 x + c1 y = n`,
/// `(x, c1) = (y, c2) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct XClass {
    pub x: i64,
    pub y: i64,
    pub c1: u64,
    pub c2: u64,
    pub n: i64,
}

impl XClass {
    pub fn satisfies_invariants(&self) -> bool {
        let lhs =
            i128::from(self.c2) * i128::from(self.x) + i128::from(self.c1) * i128::from(self.y);
        lhs == i128::from(self.n)
            && self.x.unsigned_abs().gcd(&self.c1) == 1
            && self.y.unsigned_abs().gcd(&self.c2) == 1
    }
}

/// The pair `(r1, r2)` attached to an element of `X(c1, c2, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RPair {
    pub r1: Residue,
    pub r2: Residue,
}

impl RPair {
    pub fn is_inverse_pair(&self) -> bool {
        self.r1.mul(self.r2).value() == 1 % self.r1.modulus()
    }
}

/// One representative per class of `X(c1, c2, n)`, with `x` in `[0, c1)`.
pub fn enumerate_x(c1: u64, c2: u64, n: i64) -> Vec<XClass> {
    assert!(c1 >= 1 && c2 >= 1, "enumerate_x needs positive moduli");
    let (c1i, c2i, ni) = (c1 as i128, c2 as i128, i128::from(n));
    (0..c1)
        .filter(|&x| x.gcd(&c1) == 1)
        .filter(|&x| (c2i * x as i128 - ni).rem_euclid(c1i) == 0)
        .filter_map(|x| {
            let y = (ni - c2i * x as i128) / c1i;
            (y.unsigned_abs().gcd(&u128::from(c2)) == 1).then(|| XClass {
                x: x as i64,
                y: y as i64,
                c1,
                c2,
                n,
            })
        })
        .collect()
}

/// Units `r mod |n|` with `(c1/d) r + c2/d ≡ 0 (mod n/d)` and the same
/// congruence failing modulo `n/d'` for every proper divisor `d'` of
/// `d = (c1, c2)`. Empty when `d ∤ n` or `n = 0`.
pub fn enumerate_y(c1: u64, c2: u64, n: i64) -> Vec<Residue> {
    assert!(c1 >= 1 && c2 >= 1, "enumerate_y needs positive moduli");
    let d = c1.gcd(&c2);
    let nn = n.unsigned_abs();
    if n == 0 || nn % d != 0 {
        return Vec::new();
    }
    let (a, b) = (u128::from(c1 / d), u128::from(c2 / d));
    let proper: Vec<u64> = divisors(d).into_iter().filter(|&e| e < d).collect();
    (0..nn)
        .filter(|&r| r.gcd(&nn) == 1)
        .filter(|&r| {
            let v = a * u128::from(r) + b;
            v % u128::from(nn / d) == 0 && proper.iter().all(|&e| v % u128::from(nn / e) != 0)
        })
        .map(|r| Residue {
            value: r,
            modulus: nn,
        })
        .collect()
}

/// `r1 = (n x̄ − c2)/c1`, `r2 = (n ȳ − c1)/c2`, both reduced mod `|n|`.
pub fn bijection_r(cls: &XClass) -> Result<RPair> {
    if cls.n == 0 {
        return Err(ArithmeticError::ZeroN);
    }
    let nn = cls.n.unsigned_abs();
    let xbar = i128::from(mod_inverse(cls.x, cls.c1)?.value());
    let ybar = i128::from(mod_inverse(cls.y, cls.c2)?.value());
    let n = i128::from(cls.n);
    let exact = |num: i128, den: u64| -> Result<Residue> {
        let den = i128::from(den);
        if num % den != 0 {
            return Err(ArithmeticError::InexactDivision(*cls));
        }
        let q = (num / den).rem_euclid(i128::from(nn));
        Ok(Residue {
            value: q as u64,
            modulus: nn,
        })
    };
    Ok(RPair {
        r1: exact(n * xbar - i128::from(cls.c2), cls.c1)?,
        r2: exact(n * ybar - i128::from(cls.c1), cls.c2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        assert_eq!(mod_inverse(1, 7).unwrap().value(), 1);
        assert_eq!(mod_inverse(3, 7).unwrap().value(), 5);
        assert_eq!(mod_inverse(-3, 7).unwrap().value(), 2);
        assert_eq!(
            mod_inverse(2, 4),
            Err(ArithmeticError::NotCoprime { a: 2, c: 4 })
        );
        assert_eq!(mod_inverse(5, 1).unwrap().value(), 0);
    }

    #[test]
    fn x_example_three_four_one() {
        let xs = enumerate_x(3, 4, 1);
        assert_eq!(xs.len(), 1);
        assert_eq!((xs[0].x, xs[0].y), (1, -1));
    }

    #[test]
    fn trivial_moduli_single_class() {
        for n in -30..=30 {
            assert_eq!(enumerate_x(1, 1, n).len(), 1);
        }
    }

    #[test]
    fn zero_n_forces_antidiagonal() {
        for c in 1..25u64 {
            for cls in enumerate_x(c, c, 0) {
                assert_eq!(cls.x, -cls.y);
            }
        }
        for c1 in 1..12u64 {
            for c2 in 1..12u64 {
                if c1 != c2 {
                    assert!(enumerate_x(c1, c2, 0).is_empty(), "c1={c1} c2={c2}");
                }
            }
        }
    }

    #[test]
    fn y_examples() {
        for n in [2i64, 5, 9, -7] {
            let ys = enumerate_y(1, 1, n);
            assert_eq!(ys.len(), 1);
            assert_eq!(ys[0].value(), n.unsigned_abs() - 1);
        }
        assert_eq!(enumerate_y(3, 4, 1).len(), 1);
        assert!(enumerate_y(4, 6, 3).is_empty());
    }

    #[test]
    fn trivial_class_maps_to_minus_one() {
        for n in 2..40i64 {
            let cls = enumerate_x(1, 1, n)[0];
            let rp = bijection_r(&cls).unwrap();
            assert_eq!(rp.r1.value(), (n - 1) as u64);
            assert_eq!(rp.r2.value(), (n - 1) as u64);
        }
    }
}
