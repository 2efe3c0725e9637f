//! Local L-factors and truncated L-series data, all in exact cyclotomic
//! arithmetic.
//!
//! The local factor of a character at one prime is 1 - chi(p) T^f; the
//! local factor at a rational prime is the product over the primes above
//! it. Series are never compared through floating point: equality up to a
//! bound means the local factors agree at every tested prime, with the
//! excluded primes reported alongside.


use crate::arith::cyc::CycInt;
use crate::arith::primes::primes_up_to;
use crate::characters::{eval_char, CharacterRep};
use crate::error::{Error, Result};
use crate::number_field::{split_prime, NumberField, PrimeIdealData};

/// Polynomial in T with cyclotomic-integer coefficients and constant term 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    l: u64,
    coefficients: Vec<CycInt>, // ascending in T, constant term first
}

impl LocalFactor {
    pub fn one(l: u64) -> Self {
        LocalFactor { l, coefficients: vec![CycInt::one(l)] }
    }

    /// 1 - v T^k (the factor collapses to 1 when v = 0).
    pub fn binomial(v: &CycInt, k: usize) -> Self {
        let l = v.order();
        if v.is_zero() || k == 0 {
            return LocalFactor::one(l);
        }
        let mut coefficients = vec![CycInt::zero(l); k + 1];
        coefficients[0] = CycInt::one(l);
        coefficients[k] = v.neg();
        LocalFactor { l, coefficients }
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn coefficients(&self) -> &[CycInt] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.l != other.l {
            return Err(Error::MixedOrder(self.l, other.l));
        }
        let mut out =
            vec![CycInt::zero(self.l); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(LocalFactor { l: self.l, coefficients: out })
    }

    /// Value at T = 1: the coefficient sum.
    pub fn value_at_one(&self) -> CycInt {
        let mut acc = CycInt::zero(self.l);
        for c in &self.coefficients {
            acc = acc.add(c).expect("uniform order");
        }
        acc
    }

    /// Leading coefficients of the inverse power series, up to T^k.
    pub fn inverse_series(&self, k: usize) -> Vec<CycInt> {
        let mut out = Vec::with_capacity(k + 1);
        out.push(CycInt::one(self.l));
        for j in 1..=k {
            let mut acc = CycInt::zero(self.l);
            for i in 1..=j.min(self.degree()) {
                acc = acc
                    .add(&self.coefficients[i].mul(&out[j - i]).expect("uniform order"))
                    .expect("uniform order");
            }
            out.push(acc.neg());
        }
        out
    }
}

impl std::fmt::Display for LocalFactor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})T", c)?,
                _ => write!(f, "({})T^{}", c, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Local factor of a character at a single prime ideal: 1 - chi(p) T^f.
pub fn local_factor_at_prime_ideal(
    chi: &CharacterRep,
    prime: &PrimeIdealData,
) -> Result<LocalFactor> {
    let v = eval_char(chi, prime)?;
    Ok(LocalFactor::binomial(&v, prime.f as usize))
}

/// Local factor at a rational prime: the product over all primes above p.
pub fn local_factor_at_p(
    chi: &CharacterRep,
    field: &NumberField,
    p: u64,
) -> Result<LocalFactor> {
    if chi.base_field() != *field {
        return Err(Error::BaseFieldMismatch);
    }
    let mut acc = LocalFactor::one(chi.l());
    for prime in split_prime(field, p)? {
        acc = acc.mul(&local_factor_at_prime_ideal(chi, &prime)?)?;
    }
    Ok(acc)
}

/// Largest k with (1 - T)^k dividing the factor, by repeated exact
/// synthetic division over the cyclotomic integers.
pub fn vanishing_order_at_one(factor: &LocalFactor) -> usize {
    let mut current = factor.coefficients.clone();
    let l = factor.l;
    let mut order = 0usize;
    loop {
        if current.len() <= 1 {
            return order;
        }
        let mut sum = CycInt::zero(l);
        for c in &current {
            sum = sum.add(c).expect("uniform order");
        }
        if !sum.is_zero() {
            return order;
        }
        // divide by (1 - T): q_i = c_i + q_(i-1)
        let mut quotient = Vec::with_capacity(current.len() - 1);
        let mut prev = CycInt::zero(l);
        for c in current.iter().take(current.len() - 1) {
            let q = c.add(&prev).expect("uniform order");
            quotient.push(q.clone());
            prev = q;
        }
        current = quotient;
        order += 1;
    }
}

/// Truncated Dirichlet coefficients a_1..a_N of the Euler product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCoefficients {
    l: u64,
    bound: u64,
    values: Vec<CycInt>, // values[i] = a_(i+1)
}

impl DirichletCoefficients {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn get(&self, n: u64) -> &CycInt {
        assert!(n >= 1 && n <= self.bound);
        &self.values[(n - 1) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &CycInt)> {
        self.values.iter().enumerate().map(|(i, v)| (i as u64 + 1, v))
    }
}

/// Coefficients of the truncated Euler product over p <= N. Requires the
/// splitting to be defined at every prime up to the bound; an excluded
/// prime makes the requested bound unusable and is reported.
pub fn dirichlet_coefficients(
    chi: &CharacterRep,
    field: &NumberField,
    bound: u64,
) -> Result<DirichletCoefficients> {
    let l = chi.l();
    let mut values = vec![CycInt::zero(l); bound as usize];
    if bound >= 1 {
        values[0] = CycInt::one(l);
    }
    // smallest prime factor sieve
    let n = bound as usize;
    let mut spf = vec![0usize; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    // prime-power coefficients from inverted local factors
    let mut ppow: std::collections::BTreeMap<u64, Vec<CycInt>> = Default::default();
    for p in primes_up_to(bound) {
        let lf = local_factor_at_p(chi, field, p).map_err(|e| match e {
            Error::NotPMaximal(q) => Error::BoundTooLarge { bound, excluded: q },
            other => other,
        })?;
        let mut k = 0usize;
        let mut acc = 1u64;
        while acc <= bound / p {
            acc *= p;
            k += 1;
        }
        ppow.insert(p, lf.inverse_series(k));
    }
    for m in 2..=n {
        let p = spf[m];
        let mut j = 0usize;
        let mut rest = m;
        while rest % p == 0 {
            rest /= p;
            j += 1;
        }
        let head = &ppow[&(p as u64)][j];
        let a = head.mul(&values[rest - 1]).expect("uniform order");
        values[m - 1] = a;
    }
    Ok(DirichletCoefficients { l, bound, values })
}

/// Outcome of an L-series comparison up to a bound: either every tested
/// local factor agreed (with the skipped primes listed), or the first
/// prime where they differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComparisonOutcome {
    Equal { bound: u64, excluded: Vec<u64> },
    FirstMismatch { p: u64 },
}

impl ComparisonOutcome {
    pub fn is_equal(&self) -> bool {
        matches!(self, ComparisonOutcome::Equal { .. })
    }
}

/// Compare two L-series through their local factors at every p up to the
/// bound, in increasing order. Primes where either field refuses to split
/// are excluded and reported, never silently compared.
pub fn compare_lseries(
    chi: &CharacterRep,
    field: &NumberField,
    chi_other: &CharacterRep,
    field_other: &NumberField,
    bound: u64,
) -> Result<ComparisonOutcome> {
    if chi.l() != chi_other.l() {
        return Err(Error::MixedOrder(chi.l(), chi_other.l()));
    }
    let mut excluded = vec![];
    for p in primes_up_to(bound) {
        let lhs = match local_factor_at_p(chi, field, p) {
            Ok(f) => f,
            Err(Error::NotPMaximal(_)) => {
                excluded.push(p);
                continue;
            }
            Err(e) => return Err(e),
        };
        let rhs = match local_factor_at_p(chi_other, field_other, p) {
            Ok(f) => f,
            Err(Error::NotPMaximal(_)) => {
                excluded.push(p);
                continue;
            }
            Err(e) => return Err(e),
        };
        if lhs != rhs {
            return Ok(ComparisonOutcome::FirstMismatch { p });
        }
    }
    Ok(ComparisonOutcome::Equal { bound, excluded })
}
