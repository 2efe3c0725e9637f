//! Integer polynomials with arbitrary-precision coefficients.
//!
//! Carries the defining polynomials of number fields plus the handful of
//! exact global computations they need: resultants and discriminants via
//! fraction-free elimination, reduction mod p, and an irreducibility test
//! over the rationals that combines a rational-root scan, Eisenstein
//! certificates, mod-p degree analysis, and a Kronecker-style exhaustive
//! factor search as the desk-scale fallback.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::polyzp::PolyZp;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ZPoly {
    coeffs: Vec<BigInt>, // ascending, trimmed
}

impl ZPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().map(|c| c.is_zero()) == Some(true) {
            coeffs.pop();
        }
        ZPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        ZPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_u64(coeffs: &[u64]) -> Self {
        ZPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        ZPoly::new(vec![BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

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

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        ZPoly::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        ZPoly::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return ZPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ZPoly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        ZPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact division by an integer; panics if not exact.
    pub fn div_exact_int(&self, c: &BigInt) -> Self {
        ZPoly::new(
            self.coeffs
                .iter()
                .map(|a| {
                    let (q, r) = num_integer::Integer::div_rem(a, c);
                    assert!(r.is_zero(), "inexact integer division of polynomial");
                    q
                })
                .collect(),
        )
    }

    /// Division by a monic divisor stays over the integers.
    pub fn divrem_monic(&self, divisor: &Self) -> (Self, Self) {
        assert!(divisor.is_monic(), "divisor must be monic");
        if self.deg() < divisor.deg() || self.is_zero() {
            return (ZPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i].clone();
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                let t = &c * d;
                rem[idx] -= t;
            }
        }
        (ZPoly::new(quot), ZPoly::new(rem))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return ZPoly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * BigInt::from(i));
        }
        ZPoly::new(out)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn reduce_mod(&self, p: u64) -> PolyZp {
        let pb = BigInt::from(p);
        let coeffs: Vec<u64> = self
            .coeffs
            .iter()
            .map(|c| {
                let r = num_integer::Integer::mod_floor(c, &pb);
                u64::try_from(r).expect("residue fits in u64")
            })
            .collect();
        PolyZp::new(p, coeffs)
    }

    /// Substitute x -> x + shift.
    pub fn shift_var(&self, shift: i64) -> Self {
        let s = BigInt::from(shift);
        let mut acc = ZPoly::zero();
        for c in self.coeffs.iter().rev() {
            // acc = acc * (x + s) + c
            let shifted = acc.mul(&ZPoly::new(vec![s.clone(), BigInt::one()]));
            acc = shifted.add(&ZPoly::new(vec![c.clone()]));
        }
        acc
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = num_integer::Integer::gcd(&g, c);
        }
        g
    }
}

/// Resultant of two integer polynomials via Sylvester matrix and
/// fraction-free Bareiss elimination.
pub fn resultant(f: &ZPoly, g: &ZPoly) -> BigInt {
    let n = match f.degree() {
        None => return BigInt::zero(),
        Some(n) => n,
    };
    let m = match g.degree() {
        None => return BigInt::zero(),
        Some(m) => m,
    };
    if n == 0 {
        return f.leading().pow(m as u32);
    }
    if m == 0 {
        return g.leading().pow(n as u32);
    }
    let size = n + m;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..m {
        for (k, c) in f.coeffs.iter().enumerate() {
            mat[row][row + n - k] = c.clone();
        }
    }
    for row in 0..n {
        for (k, c) in g.coeffs.iter().enumerate() {
            mat[m + row][row + m - k] = c.clone();
        }
    }
    // Bareiss fraction-free Gaussian elimination
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            let mut swap = None;
            for (i, row) in mat.iter().enumerate().skip(k + 1) {
                if !row[k].is_zero() {
                    swap = Some(i);
                    break;
                }
            }
            match swap {
                Some(i) => {
                    mat.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                let (q, r) = num_integer::Integer::div_rem(&num, &prev);
                debug_assert!(r.is_zero());
                mat[i][j] = q;
            }
            mat[i][k] = BigInt::zero();
        }
        prev = mat[k][k].clone();
    }
    sign * mat[size - 1][size - 1].clone()
}

/// Discriminant of a monic polynomial.
pub fn discriminant(f: &ZPoly) -> BigInt {
    let n = f.deg();
    if n == 0 {
        return BigInt::one();
    }
    let r = resultant(f, &f.derivative());
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}

fn small_primes(limit: u64) -> Vec<u64> {
    let mut sieve = vec![true; (limit + 1) as usize];
    let mut out = vec![];
    for i in 2..=limit as usize {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit as usize {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

fn divisors_signed(v: &BigInt) -> Vec<BigInt> {
    // all signed divisors of a nonzero integer; desk-scale trial division
    let a = v.abs();
    let mut divs = vec![];
    let mut d = BigInt::one();
    loop {
        let dsq = &d * &d;
        if dsq > a {
            break;
        }
        if (&a % &d).is_zero() {
            divs.push(d.clone());
            let q = &a / &d;
            if q != d {
                divs.push(q);
            }
        }
        d += 1;
    }
    let mut out = Vec::with_capacity(divs.len() * 2);
    for d in divs {
        out.push(d.clone());
        out.push(-d);
    }
    out
}

/// Does f have a monic integer factor of degree d? Kronecker-style search:
/// a factor's values at d+1 points divide f's values there, so interpolate
/// every divisor combination and trial-divide.
fn has_monic_factor_of_degree(f: &ZPoly, d: usize) -> Result<bool> {
    let points: Vec<i64> = {
        let mut pts = vec![0i64];
        let mut k = 1i64;
        while pts.len() < d + 1 {
            pts.push(k);
            pts.push(-k);
            k += 1;
        }
        pts.truncate(d + 1);
        pts
    };
    let mut value_divisors: Vec<Vec<BigInt>> = Vec::with_capacity(points.len());
    let mut combos: u128 = 1;
    for &x in &points {
        let v = f.eval(&BigInt::from(x));
        if v.is_zero() {
            // integer root, hence a linear factor
            return Ok(true);
        }
        let divs = divisors_signed(&v);
        combos = combos.saturating_mul(divs.len() as u128);
        value_divisors.push(divs);
    }
    if combos > 4_000_000 {
        return Err(Error::Internal(format!(
            "irreducibility search space too large ({} combinations) at degree {}",
            combos, d
        )));
    }
    // iterate the Cartesian product
    let mut idx = vec![0usize; points.len()];
    loop {
        let values: Vec<BigRational> = idx
            .iter()
            .zip(&value_divisors)
            .map(|(&i, divs)| BigRational::from_integer(divs[i].clone()))
            .collect();
        if let Some(cand) = interpolate_integer(&points, &values, d) {
            if cand.is_monic() && cand.deg() == d {
                let (_, r) = f.divrem_monic(&cand);
                if r.is_zero() {
                    return Ok(true);
                }
            }
        }
        let mut i = 0;
        loop {
            idx[i] += 1;
            if idx[i] < value_divisors[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
            if i == idx.len() {
                return Ok(false);
            }
        }
    }
}

/// Lagrange interpolation; returns the polynomial only if all coefficients
/// land on integers and the degree is at most d.
fn interpolate_integer(points: &[i64], values: &[BigRational], d: usize) -> Option<ZPoly> {
    let n = points.len();
    let mut acc = vec![BigRational::zero(); n];
    for k in 0..n {
        // basis polynomial through point k
        let mut basis = vec![BigRational::zero(); n];
        basis[0] = BigRational::one();
        let mut blen = 1;
        let mut denom = BigRational::one();
        for (j, &xj) in points.iter().enumerate() {
            if j == k {
                continue;
            }
            let xjr = BigRational::from_integer(BigInt::from(xj));
            // basis *= (x - xj)
            let mut next = vec![BigRational::zero(); blen + 1];
            for (i, b) in basis.iter().enumerate().take(blen) {
                next[i + 1] += b;
                next[i] -= b * &xjr;
            }
            basis = next;
            blen += 1;
            denom *= BigRational::from_integer(BigInt::from(points[k] - xj));
        }
        let w = &values[k] / denom;
        for i in 0..blen {
            acc[i] += &basis[i] * &w;
        }
    }
    for c in acc.iter().skip(d + 1) {
        if !c.is_zero() {
            return None;
        }
    }
    let mut out = Vec::with_capacity(d + 1);
    for c in acc.iter().take(d + 1) {
        if !c.is_integer() {
            return None;
        }
        out.push(c.to_integer());
    }
    Some(ZPoly::new(out))
}

fn is_eisenstein_at(f: &ZPoly, p: u64) -> bool {
    let pb = BigInt::from(p);
    let n = f.deg();
    for i in 0..n {
        if !(f.coeff(i) % &pb).is_zero() {
            return false;
        }
    }
    let psq = &pb * &pb;
    !(f.coeff(0) % psq).is_zero()
}

fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = vec![];
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Irreducibility of a monic integer polynomial over the rationals.
pub fn is_irreducible_over_q(f: &ZPoly) -> Result<bool> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = f.deg();
    if n == 0 {
        return Ok(false);
    }
    if n == 1 {
        return Ok(true);
    }
    if f.coeff(0).is_zero() {
        return Ok(false); // root at 0
    }
    // rational roots of a monic polynomial are integer divisors of the
    // constant term
    for d in divisors_signed(&f.coeff(0)) {
        if f.eval(&d).is_zero() {
            return Ok(false);
        }
    }
    // squarefree over Q?
    let disc = discriminant(f);
    if disc.is_zero() {
        return Ok(false); // repeated factor, and no rational roots were found
    }
    // Eisenstein, possibly after a small shift
    for shift in [0i64, 1, -1, 2, -2] {
        let g = f.shift_var(shift);
        if g.coeff(0).is_zero() {
            return Ok(false);
        }
        let c0 = g.coeff(0).abs();
        if let Ok(c0s) = u64::try_from(&c0) {
            for p in prime_factors_u64(c0s) {
                if is_eisenstein_at(&g, p) {
                    return Ok(true);
                }
            }
        }
    }
    // mod-p degree analysis: intersect the achievable proper factor degrees
    let mut possible: Option<std::collections::BTreeSet<usize>> = None;
    let mut used = 0;
    for p in small_primes(1000) {
        if (disc.clone() % BigInt::from(p)).is_zero() {
            continue;
        }
        let factors = crate::arith::polyzp::factor_mod_p(f, p, 0)?;
        let degrees: Vec<usize> = factors.iter().map(|(g, _)| g.deg()).collect();
        if degrees.len() == 1 {
            return Ok(true); // irreducible mod p
        }
        // subset sums of the factor degrees
        let mut sums = std::collections::BTreeSet::new();
        sums.insert(0usize);
        for d in degrees {
            let prev: Vec<usize> = sums.iter().copied().collect();
            for s in prev {
                sums.insert(s + d);
            }
        }
        sums.remove(&0);
        sums.remove(&n);
        possible = Some(match possible {
            None => sums,
            Some(acc) => acc.intersection(&sums).copied().collect(),
        });
        if possible.as_ref().map(|s| s.is_empty()) == Some(true) {
            return Ok(true);
        }
        used += 1;
        if used >= 25 {
            break;
        }
    }
    // exhaustive factor search over the remaining candidate degrees
    let candidates: Vec<usize> = match &possible {
        Some(s) => s.iter().copied().filter(|&d| d <= n / 2).collect(),
        None => (1..=n / 2).collect(),
    };
    for d in candidates {
        if d == 0 {
            continue;
        }
        if has_monic_factor_of_degree(f, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_of_quadratics() {
        // res(x^2 - 1, x^2 - 4) = (1-4)^2 = ... direct: product of f evaluated
        // at roots of g: f(2) * f(-2) = 3 * 3 = 9
        let f = ZPoly::from_i64(&[-1, 0, 1]);
        let g = ZPoly::from_i64(&[-4, 0, 1]);
        assert_eq!(resultant(&f, &g), BigInt::from(9));
    }

    #[test]
    fn discriminants_of_standard_fields() {
        assert_eq!(discriminant(&ZPoly::from_i64(&[1, 0, 1])), BigInt::from(-4)); // x^2+1
        assert_eq!(discriminant(&ZPoly::from_i64(&[-2, 0, 1])), BigInt::from(8)); // x^2-2
        assert_eq!(discriminant(&ZPoly::from_i64(&[-2, 0, 0, 1])), BigInt::from(-108)); // x^3-2
        assert_eq!(discriminant(&ZPoly::from_i64(&[1, 0, 0, 0, 1])), BigInt::from(256)); // x^4+1
    }

    #[test]
    fn irreducibility_fixture_sweep() {
        let irreducible = [
            vec![0i64, 1],          // x
            vec![1, 0, 1],          // x^2+1
            vec![-2, 0, 1],         // x^2-2
            vec![3, 0, 1],          // x^2+3
            vec![-2, 0, 0, 1],      // x^3-2
            vec![-16, 0, 0, 1],     // x^3-16
            vec![1, 0, 0, 0, 1],    // x^4+1
            vec![-3, 0, 0, 0, 0, 0, 0, 0, 1],  // x^8-3
            vec![-48, 0, 0, 0, 0, 0, 0, 0, 1], // x^8-48
        ];
        for coeffs in &irreducible {
            let f = ZPoly::from_i64(coeffs);
            assert!(is_irreducible_over_q(&f).unwrap(), "{:?} should be irreducible", coeffs);
        }
        let reducible = [
            vec![-1i64, 0, 1],      // (x-1)(x+1)
            vec![0, 0, 1],          // x^2
            vec![-4, 0, 1],         // (x-2)(x+2)
            vec![1, 2, 1],          // (x+1)^2
            vec![-1, 0, 0, 0, 1],   // x^4-1
            vec![4, 0, 1],          // x^2+4 irreducible! (excluded below)
            vec![2, 3, 2, 1],       // (x+1)(x^2+x+2)? check: product = x^3+2x^2+3x+2
            vec![1, 0, 0, 0, 0, 0, 1], // x^6+1 = (x^2+1)(x^4-x^2+1)
        ];
        for (i, coeffs) in reducible.iter().enumerate() {
            if i == 5 {
                assert!(is_irreducible_over_q(&ZPoly::from_i64(coeffs)).unwrap());
                continue;
            }
            let f = ZPoly::from_i64(coeffs);
            assert!(!is_irreducible_over_q(&f).unwrap(), "{:?} should be reducible", coeffs);
        }
    }

    #[test]
    fn shift_var_round_trip() {
        let f = ZPoly::from_i64(&[1, 0, 0, 0, 1]);
        let g = f.shift_var(1);
        assert_eq!(g.eval(&BigInt::from(0)), f.eval(&BigInt::from(1)));
        assert_eq!(g.eval(&BigInt::from(4)), f.eval(&BigInt::from(5)));
    }
}
