//! Small prime utilities for sweeps and solver searches.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == d {
            return true;
        }
        if n.is_multiple_of(d) {
            return false;
        }
    }
    let mut d = 37u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn next_prime(after: u64) -> u64 {
    let mut n = after + 1;
    loop {
        if is_prime(n) {
            return n;
        }
        n += 1;
    }
}

/// All primes up to and including the bound, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return vec![];
    }
    let mut sieve = vec![true; (bound + 1) as usize];
    let mut out = vec![];
    for i in 2..=bound as usize {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= bound as usize {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// Prime factorization of a u64 by trial division, as (prime, exponent)
/// pairs in ascending order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_and_sieve_agree() {
        let sieved = primes_up_to(500);
        let scanned: Vec<u64> = (2..=500).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieved, scanned);
        assert_eq!(next_prime(1), 2);
        assert_eq!(next_prime(13), 17);
    }

    #[test]
    fn factorization_reassembles() {
        for n in [2u64, 12, 97, 360, 1024, 9973 * 2] {
            let f = factorize(n);
            let prod: u64 = f.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(prod, n);
            for (p, _) in f {
                assert!(is_prime(p));
            }
        }
    }
}
