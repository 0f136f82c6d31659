//! Dense truncated power series over exact rationals.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::Pow;
use num::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub(crate) type Rat = BigRational;

/// Exact conversion of a finite `f64` (every finite double is rational).
pub(crate) fn rat(x: f64) -> Rat {
    BigRational::from_float(x).expect("finite input")
}

pub(crate) fn rat_i(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational converts to f64")
}

/// `r^e` with a possibly negative exponent.
pub(crate) fn rat_pow(r: &Rat, e: i64) -> Rat {
    if e >= 0 {
        Pow::pow(r.clone(), e as u64)
    } else {
        Pow::pow(r.clone().recip(), (-e) as u64)
    }
}

pub(crate) fn factorial(n: u64) -> Rat {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

pub(crate) fn binomial(n: u64, k: u64) -> Rat {
    let mut acc = BigRational::one();
    for j in 0..k {
        acc *= BigRational::new(BigInt::from(n - j), BigInt::from(j + 1));
    }
    acc
}

/// Truncated product of two dense series.
pub(crate) fn mul_trunc(a: &[Rat], b: &[Rat], len: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

/// √ of a series with constant term 1: `p² = q`, `p₀ = 1`.
pub(crate) fn sqrt_one(q: &[Rat], len: usize) -> Vec<Rat> {
    let mut p = vec![Rat::zero(); len];
    p[0] = Rat::one();
    for k in 1..len {
        let mut s = Rat::zero();
        for i in 1..k {
            s += &p[i] * &p[k - i];
        }
        let qk = if k < q.len() { q[k].clone() } else { Rat::zero() };
        p[k] = (qk - s) / rat_i(2);
    }
    p
}

/// Lagrange reversion: given `t = Σ_{k≥1} a_k w^k` with `a₁ ≠ 0`, returns the
/// coefficients of `w = Σ_{k≥1} b_k t^k` up to `t^{len−1}`.
///
/// Triangular solve against the powers of the forward series: matching the
/// coefficient of `w^m` in `Σ b_k·a(w)^k = w` gives `b₁a₁ = 1` and, for
/// `m ≥ 2`, `b_m a₁^m = −Σ_{k<m} b_k·[w^m] a^k`.
pub(crate) fn revert(a: &[Rat], len: usize) -> Result<Vec<Rat>> {
    if len < 2 || a.len() < 2 || !a[0].is_zero() {
        return Err(Error::ReversionDegenerate);
    }
    if a[1].is_zero() {
        return Err(Error::ReversionDegenerate);
    }
    let mut b = vec![Rat::zero(); len];
    b[1] = a[1].clone().recip();
    // powers[k] = a(w)^k truncated to len
    let mut powers: Vec<Vec<Rat>> = Vec::with_capacity(len);
    powers.push(Vec::new()); // unused index 0
    powers.push(a[..a.len().min(len)].to_vec());
    for k in 2..len {
        let next = mul_trunc(&powers[k - 1], &powers[1], len);
        powers.push(next);
    }
    let mut a1_pow = b[1].clone(); // a₁^{−1}
    for m in 2..len {
        a1_pow = &a1_pow * &b[1]; // a₁^{−m}
        let mut s = Rat::zero();
        for k in 1..m {
            let coeff = &powers[k];
            if m < coeff.len() && !coeff[m].is_zero() {
                s += &b[k] * &coeff[m];
            }
        }
        b[m] = -s * &a1_pow;
    }
    Ok(b)
}


#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sqrt_of_one_plus_sigma() {
        // √(1+σ) = 1 + σ/2 − σ²/8 + σ³/16 − …
        let q = vec![Rat::one(), Rat::one()];
        let p = sqrt_one(&q, 4);
        assert_eq!(p[1], r(1, 2));
        assert_eq!(p[2], r(-1, 8));
        assert_eq!(p[3], r(1, 16));
    }

    #[test]
    fn revert_geometric() {
        // t = w/(1−w) = w + w² + w³ + …  ⇒  w = t/(1+t) = t − t² + t³ − …
        let a: Vec<Rat> = (0..8)
            .map(|k| if k == 0 { Rat::zero() } else { Rat::one() })
            .collect();
        let b = revert(&a, 8).unwrap();
        for (k, bk) in b.iter().enumerate().skip(1) {
            let expect = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
            assert_eq!(*bk, expect, "k = {k}");
        }
    }

    #[test]
    fn revert_sin_gives_arcsin() {
        // sin w = w − w³/6 + w⁵/120 − …  ⇒  arcsin t = t + t³/6 + 3t⁵/40 + …
        let mut a = vec![Rat::zero(); 8];
        a[1] = Rat::one();
        a[3] = r(-1, 6);
        a[5] = r(1, 120);
        a[7] = r(-1, 5040);
        let b = revert(&a, 8).unwrap();
        assert_eq!(b[1], Rat::one());
        assert_eq!(b[3], r(1, 6));
        assert_eq!(b[5], r(3, 40));
        assert_eq!(b[7], r(15, 336));
    }

    #[test]
    fn revert_rejects_zero_leading() {
        let a = vec![Rat::zero(), Rat::zero(), Rat::one()];
        assert!(revert(&a, 4).is_err());
    }

    #[test]
    fn float_conversion_is_exact() {
        let x = 0.1f64;
        assert_eq!(to_f64(&rat(x)), x);
    }
}
