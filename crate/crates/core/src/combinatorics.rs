use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Weyl binomial coefficient `n! / (2^k k! (m−k)! (n−m−k)!)`.
///
/// It is the multiplicity of `a†^(m−k) a^(n−m−k)` in the normal ordering of
/// `(a + a†)^n`. Requires `m ≤ n` and `k ≤ min(m, n − m)`.
pub fn weyl_binomial(n: u32, m: u32, k: u32) -> Result<BigRational> {
    if m > n || k > m.min(n - m) {
        return Err(Error::Domain(format!("weyl_binomial({n}, {m}, {k}) needs m <= n and k <= min(m, n - m)")));
    }
    let denom = (BigInt::one() << k) * factorial(k) * factorial(m - k) * factorial(n - m - k);
    Ok(BigRational::new(factorial(n), denom))
}

/// `k!·C(q,k)·C(r,k)`, the weight of `a†^(p+r−k) a^(q+s−k)` in `a†^p a^q · a†^r a^s`.
pub fn contraction_weight(q: u32, r: u32, k: u32) -> BigInt {
    factorial(k) * binomial(q, k) * binomial(r, k)
}

/// Signed Stirling numbers of the first kind, rows `0..=n`.
pub fn stirling_first(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigInt::zero(); i + 1];
        for (j, slot) in row.iter_mut().enumerate().skip(1) {
            let carry = prev.get(j - 1).cloned().unwrap_or_default();
            let stay = prev.get(j).cloned().unwrap_or_default();
            *slot = carry - BigInt::from(i - 1) * stay;
        }
        rows.push(row);
    }
    rows
}

/// Stirling numbers of the second kind, rows `0..=n`.
pub fn stirling_second(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows = vec![vec![BigInt::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigInt::zero(); i + 1];
        for (j, slot) in row.iter_mut().enumerate().skip(1) {
            let carry = prev.get(j - 1).cloned().unwrap_or_default();
            let stay = prev.get(j).cloned().unwrap_or_default();
            *slot = carry + BigInt::from(j) * stay;
        }
        rows.push(row);
    }
    rows
}
