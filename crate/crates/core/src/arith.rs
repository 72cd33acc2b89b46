//! Small-integer arithmetic: segmented prime sieve, factorisation, Λ and μ.

const SEGMENT: u64 = 1 << 15;

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// All primes p with `lo <= p <= hi`, in ascending order.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let lo = lo.max(2);
    let base = simple_sieve(isqrt(hi));
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = (start + SEGMENT - 1).min(hi);
        let len = (end - start + 1) as usize;
        let mut composite = vec![false; len];
        for &p in &base {
            if p * p > end {
                break;
            }
            let first = (start.div_ceil(p) * p).max(p * p);
            let mut m = first;
            while m <= end {
                composite[(m - start) as usize] = true;
                m += p;
            }
        }
        out.extend(
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| start + i as u64),
        );
        start = end + 1;
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    primes_in_range(2, n)
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Prime factorisation by trial division, as (prime, exponent) pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Λ(n): log p if n = p^k, else 0.
pub fn von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let f = factorize(n);
    if f.len() == 1 {
        (f[0].0 as f64).ln()
    } else {
        0.0
    }
}

/// μ(n).
pub fn mobius(n: u64) -> i32 {
    if n == 0 {
        return 0;
    }
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Λ(n) for n = 0..=limit, computed by a sieve over prime powers.
pub fn von_mangoldt_table(limit: u64) -> Vec<f64> {
    let mut table = vec![0.0; limit as usize + 1];
    for p in primes_up_to(limit) {
        let lp = (p as f64).ln();
        let mut q = p;
        loop {
            table[q as usize] = lp;
            match q.checked_mul(p) {
                Some(next) if next <= limit => q = next,
                _ => break,
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_in_range(90, 110), vec![97, 101, 103, 107, 109]);
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
    }

    #[test]
    fn von_mangoldt_values() {
        assert!((von_mangoldt(8) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(von_mangoldt(6), 0.0);
        assert!((von_mangoldt(97) - 97f64.ln()).abs() < 1e-15);
        assert_eq!(von_mangoldt(1), 0.0);
    }

    #[test]
    fn mobius_values() {
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(15), 1);
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(12), 0);
    }

    proptest! {
        #[test]
        fn table_matches_trial_division(n in 1u64..5000) {
            let t = von_mangoldt_table(5000);
            prop_assert_eq!(t[n as usize], von_mangoldt(n));
        }

        #[test]
        fn segmented_matches_simple(lo in 0u64..200_000, len in 0u64..100_000) {
            let hi = lo + len;
            let expected: Vec<u64> = simple_sieve(hi).into_iter().filter(|&p| p >= lo).collect();
            prop_assert_eq!(primes_in_range(lo, hi), expected);
        }
    }
}
