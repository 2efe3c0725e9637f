//! Exact cyclotomic integers Z[zeta_l] for prime l.
//!
//! Coordinates live on the power basis 1, zeta, ..., zeta^{l-2}, reduced mod
//! the l-th cyclotomic polynomial, so equality is literal coordinate
//! equality. For l = 2 the single coordinate is an ordinary integer and
//! zeta_2 = -1. Character values and L-factor coefficients all live here;
//! roots of unity are compared structurally, never through floats.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycInt {
    order: u64,
    coords: Vec<BigInt>, // length max(order - 1, 1)
}

impl std::fmt::Debug for CycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CycInt(l={}: {})", self.order, self)
    }
}

impl std::fmt::Display for CycInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 || self.order == 2 {
                write!(f, "{}", c)?;
            } else if c.is_one() {
                write!(f, "z{}^{}", self.order, k)?;
            } else {
                write!(f, "{}*z{}^{}", c, self.order, k)?;
            }
        }
        Ok(())
    }
}

impl CycInt {
    fn width(order: u64) -> usize {
        ((order - 1) as usize).max(1)
    }

    pub fn zero(order: u64) -> Self {
        assert!(order >= 2);
        CycInt { order, coords: vec![BigInt::zero(); Self::width(order)] }
    }

    pub fn one(order: u64) -> Self {
        let mut z = CycInt::zero(order);
        z.coords[0] = BigInt::one();
        z
    }

    pub fn from_int(order: u64, v: i64) -> Self {
        let mut z = CycInt::zero(order);
        z.coords[0] = BigInt::from(v);
        z
    }

    /// zeta_l^k.
    pub fn root_of_unity(order: u64, k: u64) -> Self {
        assert!(order >= 2);
        let k = (k % order) as usize;
        let mut z = CycInt::zero(order);
        if order == 2 {
            z.coords[0] = if k == 0 { BigInt::one() } else { -BigInt::one() };
            return z;
        }
        if k < (order - 1) as usize {
            z.coords[k] = BigInt::one();
        } else {
            // zeta^{l-1} = -(1 + zeta + ... + zeta^{l-2})
            for c in z.coords.iter_mut() {
                *c = -BigInt::one();
            }
        }
        z
    }

    pub fn from_coords(order: u64, coords: Vec<BigInt>) -> Self {
        assert!(order >= 2);
        assert_eq!(coords.len(), Self::width(order));
        CycInt { order, coords }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords.iter().skip(1).all(|c| c.is_zero())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::MixedOrder(self.order, other.order));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycInt { order: self.order, coords })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycInt { order: self.order, coords })
    }

    pub fn neg(&self) -> Self {
        CycInt { order: self.order, coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let l = self.order as usize;
        if l == 2 {
            return Ok(CycInt {
                order: 2,
                coords: vec![&self.coords[0] * &other.coords[0]],
            });
        }
        // convolve on exponents 0..2l-4, fold zeta^l = 1, then eliminate
        // the zeta^{l-1} slot through the cyclotomic relation
        let w = l - 1;
        let mut conv = vec![BigInt::zero(); l];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                let mut e = i + j;
                if e >= l {
                    e -= l;
                }
                conv[e] += a * b;
            }
        }
        let top = conv[w].clone();
        let mut coords: Vec<BigInt> = conv.into_iter().take(w).collect();
        if !top.is_zero() {
            for c in coords.iter_mut() {
                *c -= &top;
            }
        }
        Ok(CycInt { order: self.order, coords })
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = CycInt::one(self.order);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same order");
            }
            base = base.mul(&base).expect("same order");
            e >>= 1;
        }
        acc
    }

    /// Floating-point image under zeta_l -> exp(2 pi i / l); sanity
    /// cross-checks only, exactness is the contract.
    pub fn approx_complex(&self) -> (f64, f64) {
        let l = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.coords.iter().enumerate() {
            let cf = bigint_to_f64(c);
            if self.order == 2 {
                re += cf;
                continue;
            }
            let ang = 2.0 * std::f64::consts::PI * (k as f64) / l;
            re += cf * ang.cos();
            im += cf * ang.sin();
        }
        (re, im)
    }
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    v.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

impl Serialize for CycInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CycInt", 2)?;
        s.serialize_field("l", &self.order)?;
        let coords: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        s.serialize_field("coords", &coords)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cube_roots_multiply_to_one() {
        let z = CycInt::root_of_unity(3, 1);
        let z2 = CycInt::root_of_unity(3, 2);
        assert!(z.mul(&z2).unwrap().is_one());
        assert!(z.pow(3).is_one());
    }

    #[test]
    fn fifth_roots_sum_to_zero() {
        let mut acc = CycInt::one(5);
        for k in 1..5 {
            acc = acc.add(&CycInt::root_of_unity(5, k)).unwrap();
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn minus_one_squares_to_one() {
        let m = CycInt::root_of_unity(2, 1);
        assert!(m.mul(&m).unwrap().is_one());
        assert_eq!(m.coords()[0], BigInt::from(-1));
    }

    #[test]
    fn mixed_orders_are_rejected() {
        let a = CycInt::one(3);
        let b = CycInt::one(5);
        assert_eq!(a.mul(&b), Err(Error::MixedOrder(3, 5)));
        assert_eq!(a.add(&b), Err(Error::MixedOrder(3, 5)));
    }

    #[test]
    fn matches_complex_arithmetic() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let l = [2u64, 3, 5, 7][rng.gen_range(0..4)];
            let w = ((l - 1) as usize).max(1);
            let a = CycInt::from_coords(
                l,
                (0..w).map(|_| BigInt::from(rng.gen_range(-9i64..10))).collect(),
            );
            let b = CycInt::from_coords(
                l,
                (0..w).map(|_| BigInt::from(rng.gen_range(-9i64..10))).collect(),
            );
            let prod = a.mul(&b).unwrap();
            let (ar, ai) = a.approx_complex();
            let (br, bi) = b.approx_complex();
            let (pr, pi) = prod.approx_complex();
            assert!((pr - (ar * br - ai * bi)).abs() < 1e-9);
            assert!((pi - (ar * bi + ai * br)).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn multiplication_is_commutative_and_associative(
            l in prop::sample::select(vec![2u64, 3, 5]),
            a in prop::collection::vec(-20i64..20, 4),
            b in prop::collection::vec(-20i64..20, 4),
            c in prop::collection::vec(-20i64..20, 4),
        ) {
            let w = ((l - 1) as usize).max(1);
            let mk = |v: &Vec<i64>| CycInt::from_coords(
                l, v.iter().take(w).map(|&x| BigInt::from(x)).collect());
            let (x, y, z) = (mk(&a), mk(&b), mk(&c));
            prop_assert_eq!(x.mul(&y).unwrap(), y.mul(&x).unwrap());
            prop_assert_eq!(
                x.mul(&y).unwrap().mul(&z).unwrap(),
                x.mul(&y.mul(&z).unwrap()).unwrap()
            );
            prop_assert_eq!(x.mul(&CycInt::one(l)).unwrap(), x);
        }
    }
}
