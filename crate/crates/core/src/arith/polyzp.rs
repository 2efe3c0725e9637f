//! Dense polynomials over the prime field F_p and their factorization.
//!
//! Coefficients are stored in ascending order of the exponent with the
//! leading coefficient nonzero (the zero polynomial has an empty list).
//! Factorization is squarefree decomposition, then distinct-degree, then
//! randomized equal-degree splitting; the output is sorted by
//! (degree, coefficients from the leading term down), which is the canonical
//! prime indexing used by everything downstream, so it is independent of the
//! random choices made while splitting.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::arith::zpoly::ZPoly;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a mod p for prime p and a != 0 mod p.
pub fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyZp {
    p: u64,
    coeffs: Vec<u64>,
}

impl std::fmt::Debug for PolyZp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PolyZp(mod {}: {})", self.p, self)
    }
}

impl std::fmt::Display for PolyZp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => {
                    if c == 1 {
                        write!(f, "x")?
                    } else {
                        write!(f, "{}x", c)?
                    }
                }
                _ => {
                    if c == 1 {
                        write!(f, "x^{}", i)?
                    } else {
                        write!(f, "{}x^{}", c, i)?
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PolyZp {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        debug_assert!(p >= 2);
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyZp { p, coeffs }
    }

    pub fn from_i64(p: u64, coeffs: &[i64]) -> Self {
        let q = p as i64;
        PolyZp::new(p, coeffs.iter().map(|&c| (c.rem_euclid(q)) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        PolyZp { p, coeffs: vec![] }
    }

    pub fn one(p: u64) -> Self {
        PolyZp::new(p, vec![1])
    }

    pub fn constant(p: u64, c: u64) -> Self {
        PolyZp::new(p, vec![c])
    }

    pub fn x(p: u64) -> Self {
        PolyZp::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial mapped to None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    fn check_same_field(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed prime fields {} and {}", self.p, other.p);
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (self.coeff(i) + other.coeff(i)) % self.p;
        }
        PolyZp::new(self.p, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = (self.coeff(i) + self.p - other.coeff(i)) % self.p;
        }
        PolyZp::new(self.p, out)
    }

    pub fn neg(&self) -> Self {
        PolyZp::new(self.p, self.coeffs.iter().map(|&c| (self.p - c) % self.p).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_field(other);
        if self.is_zero() || other.is_zero() {
            return PolyZp::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, self.p)) % self.p;
            }
        }
        PolyZp::new(self.p, out)
    }

    pub fn mul_scalar(&self, c: u64) -> Self {
        PolyZp::new(self.p, self.coeffs.iter().map(|&a| mulmod(a, c, self.p)).collect())
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        self.check_same_field(divisor);
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.deg() < divisor.deg() || self.is_zero() {
            return (PolyZp::zero(self.p), self.clone());
        }
        let p = self.p;
        let dlead_inv = invmod(divisor.leading(), p);
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mulmod(rem[i], dlead_inv, p);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + p - mulmod(c, d, p)) % p;
            }
        }
        (PolyZp::new(p, quot), PolyZp::new(p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    pub fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.divrem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() || self.leading() == 1 {
            return self.clone();
        }
        self.mul_scalar(invmod(self.leading(), self.p))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        self.check_same_field(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Extended gcd: returns (g, u, v) with u*self + v*other = g, g monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        self.check_same_field(other);
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (PolyZp::one(p), PolyZp::zero(p));
        let (mut t0, mut t1) = (PolyZp::zero(p), PolyZp::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let lead_inv = invmod(r0.leading(), p);
        (r0.mul_scalar(lead_inv), s0.mul_scalar(lead_inv), t0.mul_scalar(lead_inv))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return PolyZp::zero(self.p);
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(mulmod(c, (i as u64) % self.p, self.p));
        }
        PolyZp::new(self.p, out)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mulmod(acc, x, self.p) + c) % self.p;
        }
        acc
    }

    /// self^e mod modulus, with a BigUint exponent.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Self) -> Self {
        let mut acc = PolyZp::one(self.p);
        let mut base = self.rem(modulus);
        let mut e = e.clone();
        while !e.is_zero() {
            if (&e % 2u32) == BigUint::one() {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Canonical order: degree first, then coefficients from the leading
    /// term down. This is the prime-indexing order.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.coeffs.len().cmp(&other.coeffs.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..self.coeffs.len()).rev() {
            match self.coeffs[i].cmp(&other.coeffs[i]) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        Ordering::Equal
    }

    /// Lift to an integer polynomial with coefficients in [0, p).
    pub fn lift(&self) -> ZPoly {
        ZPoly::from_u64(&self.coeffs)
    }
}

/// Is f irreducible over F_p? (Ben-Or style test via x^{p^k} - x gcds.)
pub fn is_irreducible(f: &PolyZp) -> bool {
    let n = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(n) => n,
    };
    let p = f.modulus();
    let f = f.make_monic();
    let x = PolyZp::x(p);
    let pb = BigUint::from(p);
    // x^{p^n} == x mod f, and gcd(x^{p^(n/l)} - x, f) == 1 for prime l | n.
    let mut xp = x.clone();
    let mut powers = Vec::with_capacity(n);
    for _ in 0..n {
        xp = xp.pow_mod(&pb, &f);
        powers.push(xp.clone());
    }
    if powers[n - 1] != x.rem(&f) {
        return false;
    }
    let mut m = n;
    let mut prime_divs = vec![];
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            prime_divs.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_divs.push(m);
    }
    for l in prime_divs {
        let k = n / l;
        let g = powers[k - 1].sub(&x).gcd(&f);
        if !g.is_one() {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree d over F_p, by canonical order.
pub fn find_irreducible(p: u64, d: usize) -> PolyZp {
    assert!(d >= 1);
    if d == 1 {
        return PolyZp::x(p);
    }
    // enumerate lower coefficients in base-p counting order
    let mut idx = vec![0u64; d];
    loop {
        let mut coeffs = idx.clone();
        coeffs.push(1);
        let cand = PolyZp::new(p, coeffs);
        if is_irreducible(&cand) {
            return cand;
        }
        let mut i = 0;
        loop {
            idx[i] += 1;
            if idx[i] < p {
                break;
            }
            idx[i] = 0;
            i += 1;
            assert!(i < d, "no irreducible of degree {} over F_{} found", d, p);
        }
    }
}

/// p-th root of a polynomial with zero derivative: f(x) = h(x)^p with
/// h's coefficients read off every p-th slot (Frobenius is the identity
/// on F_p).
fn pth_root(f: &PolyZp) -> PolyZp {
    let p = f.modulus() as usize;
    let mut out = Vec::with_capacity(f.coeffs().len() / p + 1);
    let mut i = 0;
    while i < f.coeffs().len() {
        out.push(f.coeffs()[i]);
        i += p;
    }
    PolyZp::new(f.modulus(), out)
}

/// Squarefree decomposition of a monic polynomial: pairwise coprime monic
/// squarefree parts with their multiplicities.
fn squarefree_decomposition(f: &PolyZp) -> Vec<(PolyZp, u32)> {
    let p = f.modulus();
    let mut result = Vec::new();
    let fd = f.derivative();
    if fd.is_zero() {
        let root = pth_root(f);
        for (g, m) in squarefree_decomposition(&root) {
            result.push((g, m * p as u32));
        }
        return result;
    }
    let mut c = f.gcd(&fd);
    let mut w = f.div_exact(&c);
    let mut i = 1u32;
    while w.deg() > 0 {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y);
        if fac.deg() > 0 {
            result.push((fac, i));
        }
        w = y;
        c = c.div_exact(&w);
        i += 1;
    }
    if c.deg() > 0 {
        let root = pth_root(&c);
        for (g, m) in squarefree_decomposition(&root) {
            result.push((g, m * p as u32));
        }
    }
    result
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// (degree d, product of all irreducible factors of degree d).
fn distinct_degree(f: &PolyZp) -> Vec<(usize, PolyZp)> {
    let p = f.modulus();
    let pb = BigUint::from(p);
    let x = PolyZp::x(p);
    let mut out = Vec::new();
    let mut rem = f.clone();
    let mut h = x.rem(&rem);
    let mut d = 0usize;
    while rem.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&pb, &rem);
        let g = h.sub(&x).gcd(&rem);
        if g.deg() > 0 {
            out.push((d, g.clone()));
            rem = rem.div_exact(&g);
            h = h.rem(&rem);
        }
    }
    if rem.deg() > 0 {
        out.push((rem.deg(), rem));
    }
    out
}

/// Cantor-Zassenhaus equal-degree splitting: f is monic squarefree, a
/// product of irreducibles all of degree d.
fn equal_degree(f: &PolyZp, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<PolyZp>) {
    if f.deg() == d {
        out.push(f.make_monic());
        return;
    }
    let p = f.modulus();
    loop {
        let deg = f.deg();
        let coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
        let a = PolyZp::new(p, coeffs);
        if a.deg() == 0 || a.is_zero() {
            continue;
        }
        let g0 = a.gcd(f);
        if g0.deg() > 0 && g0.deg() < deg {
            equal_degree(&g0, d, rng, out);
            equal_degree(&f.div_exact(&g0), d, rng, out);
            return;
        }
        let split = if p == 2 {
            // trace map over F_2: a + a^2 + a^4 + ... + a^(2^(d-1))
            let mut tr = a.rem(f);
            let mut cur = a.rem(f);
            for _ in 1..d {
                cur = cur.mul(&cur).rem(f);
                tr = tr.add(&cur);
            }
            tr.gcd(f)
        } else {
            let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
            let b = a.pow_mod(&e, f);
            b.sub(&PolyZp::one(p)).gcd(f)
        };
        if split.deg() > 0 && split.deg() < deg {
            equal_degree(&split, d, rng, out);
            equal_degree(&f.div_exact(&split), d, rng, out);
            return;
        }
    }
}

/// Factor an integer polynomial mod p into monic irreducibles with
/// multiplicities, sorted canonically. The seed drives the randomized
/// equal-degree splitting only; the sorted output is seed-independent.
pub fn factor_mod_p(f: &ZPoly, p: u64, seed: u64) -> Result<Vec<(PolyZp, u32)>> {
    let fp = f.reduce_mod(p);
    if fp.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if fp.deg() == 0 {
        return Ok(vec![]);
    }
    let fp = fp.make_monic();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut factors: Vec<(PolyZp, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(&fp) {
        for (d, prod) in distinct_degree(&part) {
            let mut irr = Vec::new();
            equal_degree(&prod, d, &mut rng, &mut irr);
            for g in irr {
                factors.push((g, mult));
            }
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zp(p: u64, c: &[i64]) -> PolyZp {
        PolyZp::from_i64(p, c)
    }

    #[test]
    fn factor_x2_plus_1_mod_5() {
        let f = ZPoly::from_i64(&[1, 0, 1]);
        let fac = factor_mod_p(&f, 5, 0).unwrap();
        assert_eq!(fac, vec![(zp(5, &[2, 1]), 1), (zp(5, &[3, 1]), 1)]);
    }

    #[test]
    fn factor_x2_plus_1_mod_3() {
        let f = ZPoly::from_i64(&[1, 0, 1]);
        let fac = factor_mod_p(&f, 3, 0).unwrap();
        assert_eq!(fac, vec![(zp(3, &[1, 0, 1]), 1)]);
    }

    #[test]
    fn factor_x2_plus_1_mod_2() {
        let f = ZPoly::from_i64(&[1, 0, 1]);
        let fac = factor_mod_p(&f, 2, 0).unwrap();
        assert_eq!(fac, vec![(zp(2, &[1, 1]), 2)]);
    }

    #[test]
    fn zero_polynomial_is_rejected() {
        let f = ZPoly::from_i64(&[5, 0, 10]);
        assert_eq!(factor_mod_p(&f, 5, 0), Err(Error::ZeroPolynomial));
    }

    /// Brute-force factorization by trial division with enumerated monic
    /// irreducibles; the independent oracle for small cases.
    fn factor_brute(f: &PolyZp) -> Vec<(PolyZp, u32)> {
        let p = f.modulus();
        let mut rem = f.make_monic();
        let mut out: Vec<(PolyZp, u32)> = Vec::new();
        let mut d = 1usize;
        while rem.deg() >= 1 {
            if d > rem.deg() {
                break;
            }
            // enumerate monic candidates of degree d in base-p order
            let mut idx = vec![0u64; d];
            'cands: loop {
                let mut coeffs = idx.clone();
                coeffs.push(1);
                let cand = PolyZp::new(p, coeffs);
                if is_irreducible(&cand) {
                    let mut m = 0u32;
                    loop {
                        let (q, r) = rem.divrem(&cand);
                        if r.is_zero() {
                            rem = q;
                            m += 1;
                        } else {
                            break;
                        }
                    }
                    if m > 0 {
                        out.push((cand.clone(), m));
                    }
                }
                let mut i = 0;
                loop {
                    idx[i] += 1;
                    if idx[i] < p {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                    if i == d {
                        break 'cands;
                    }
                }
            }
            d += 1;
        }
        out.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        out
    }

    #[test]
    fn factorization_matches_brute_force_oracle() {
        // all polynomials of degree <= 3 over F_2, F_3 and a sample over F_5
        for &p in &[2u64, 3] {
            let n = p.pow(4);
            for code in p.pow(3)..n {
                let mut c = code;
                let mut coeffs = vec![];
                for _ in 0..4 {
                    coeffs.push((c % p) as i64);
                    c /= p;
                }
                let f = zp(p, &coeffs);
                if f.deg() < 1 {
                    continue;
                }
                let fz = f.lift();
                let got = factor_mod_p(&fz, p, 7).unwrap();
                let want = factor_brute(&f);
                assert_eq!(got, want, "mismatch for {} mod {}", f, p);
            }
        }
    }

    #[test]
    fn random_factorizations_reexpand() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 31, 61, 97];
        for trial in 0..200 {
            let p = primes[trial % primes.len()];
            let deg = rng.gen_range(1..=8usize);
            let mut coeffs: Vec<i64> = (0..deg).map(|_| rng.gen_range(0..1000i64)).collect();
            coeffs.push(rng.gen_range(1..1000i64));
            let f = ZPoly::from_i64(&coeffs);
            let fp = f.reduce_mod(p);
            if fp.is_zero() {
                continue;
            }
            let fac = factor_mod_p(&f, p, trial as u64).unwrap();
            // re-expansion reproduces f mod p up to the leading unit
            let mut prod = PolyZp::constant(p, fp.leading());
            let mut degsum = 0usize;
            for (g, m) in &fac {
                assert!(is_irreducible(g), "non-irreducible factor {}", g);
                for _ in 0..*m {
                    prod = prod.mul(g);
                }
                degsum += g.deg() * (*m as usize);
            }
            assert_eq!(prod, fp);
            assert_eq!(degsum, fp.deg());
            // distinct factors
            for i in 1..fac.len() {
                assert_ne!(fac[i - 1].0, fac[i].0);
            }
            // seed independence
            let fac2 = factor_mod_p(&f, p, trial as u64 + 101).unwrap();
            assert_eq!(fac, fac2);
        }
    }

    #[test]
    fn irreducible_search_is_consistent() {
        for &p in &[2u64, 3, 5, 13] {
            for d in 1..=4usize {
                let g = find_irreducible(p, d);
                assert_eq!(g.deg(), d);
                assert!(is_irreducible(&g));
            }
        }
    }

    proptest! {
        #[test]
        fn divrem_reconstructs(a in prop::collection::vec(0u64..13, 0..9),
                               b in prop::collection::vec(0u64..13, 1..5)) {
            let p = 13u64;
            let fa = PolyZp::new(p, a);
            let fb = PolyZp::new(p, b);
            prop_assume!(!fb.is_zero());
            let (q, r) = fa.divrem(&fb);
            prop_assert_eq!(q.mul(&fb).add(&r), fa.clone());
            prop_assert!(r.is_zero() || r.deg() < fb.deg());
        }

        #[test]
        fn gcd_divides_both(a in prop::collection::vec(0u64..7, 1..7),
                            b in prop::collection::vec(0u64..7, 1..7)) {
            let p = 7u64;
            let fa = PolyZp::new(p, a);
            let fb = PolyZp::new(p, b);
            prop_assume!(!fa.is_zero() && !fb.is_zero());
            let g = fa.gcd(&fb);
            prop_assert!(fa.rem(&g).is_zero());
            prop_assert!(fb.rem(&g).is_zero());
        }
    }
}
