//! Exact binomials, factorials and multinomials.

use num_bigint::BigUint;
use num_traits::One;

pub fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    // each prefix product is itself a binomial, so the division is exact
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Multinomial coefficient `(Σ parts)! / ∏ parts!`, built as a product of binomials.
pub fn multinomial(parts: &[usize]) -> BigUint {
    let mut total = 0;
    let mut acc = BigUint::one();
    for &p in parts {
        total += p;
        acc *= binomial(total, p);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(factorial(0), BigUint::from(1u32));
        assert_eq!(factorial(5), BigUint::from(120u32));
        assert_eq!(binomial(6, 4), BigUint::from(15u32));
        assert_eq!(binomial(3, 4), BigUint::ZERO);
        assert_eq!(binomial(10, 0), BigUint::from(1u32));
        assert_eq!(multinomial(&[2, 1, 1]), BigUint::from(12u32));
        assert_eq!(multinomial(&[]), BigUint::from(1u32));
    }

    #[test]
    fn multinomial_matches_factorial_ratio() {
        let parts = [3, 4, 2, 5];
        let total: usize = parts.iter().sum();
        let denom = parts.iter().fold(BigUint::one(), |a, &p| a * factorial(p));
        assert_eq!(multinomial(&parts), factorial(total) / denom);
    }
}
