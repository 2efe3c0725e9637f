//! Finite-field extensions F_{p^f} presented as F_p[x]/(m), and the
//! power-residue evaluation behind character values.
//!
//! Elements are reduced `PolyZp` representatives; the `Fq` context owns the
//! modulus. Root-of-unity extraction matches a^{(q-1)/l} against powers of
//! the canonical generator's (q-1)/l power, so character values land in the
//! exact cyclotomic integers with no floating point anywhere.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::cyc::CycInt;
use crate::arith::polyzp::{is_irreducible, PolyZp};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    p: u64,
    modulus: PolyZp,
}

/// An element of F_{p^f} together with its field presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqElem {
    pub field: Fq,
    pub rep: PolyZp,
}

impl Fq {
    pub fn new(p: u64, modulus: PolyZp) -> Result<Self> {
        if modulus.modulus() != p || modulus.deg() < 1 || !is_irreducible(&modulus) {
            return Err(Error::Internal(format!(
                "invalid residue field modulus {} over F_{}",
                modulus, p
            )));
        }
        Ok(Fq { p, modulus: modulus.make_monic() })
    }

    pub fn prime_field(p: u64) -> Self {
        Fq { p, modulus: PolyZp::x(p) }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn extension_degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn modulus_poly(&self) -> &PolyZp {
        &self.modulus
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.extension_degree() as u32)
    }

    pub fn reduce(&self, a: &PolyZp) -> PolyZp {
        a.rem(&self.modulus)
    }

    pub fn elem(&self, a: PolyZp) -> FqElem {
        FqElem { field: self.clone(), rep: self.reduce(&a) }
    }

    pub fn mul(&self, a: &PolyZp, b: &PolyZp) -> PolyZp {
        a.mul(b).rem(&self.modulus)
    }

    pub fn pow(&self, a: &PolyZp, e: &BigUint) -> PolyZp {
        a.pow_mod(e, &self.modulus)
    }

    /// Multiplicative inverse; None for zero.
    pub fn inv(&self, a: &PolyZp) -> Option<PolyZp> {
        let a = self.reduce(a);
        if a.is_zero() {
            return None;
        }
        let (g, u, _) = a.ext_gcd(&self.modulus);
        debug_assert!(g.is_one());
        Some(self.reduce(&u))
    }

    /// The element with the given index under base-p counting of the
    /// coefficient vector; the canonical enumeration order of the field.
    pub fn element_from_index(&self, mut idx: u64) -> PolyZp {
        let mut coeffs = Vec::with_capacity(self.extension_degree());
        for _ in 0..self.extension_degree() {
            coeffs.push(idx % self.p);
            idx /= self.p;
        }
        PolyZp::new(self.p, coeffs)
    }

    /// Canonical generator of the multiplicative group: the first element
    /// in enumeration order whose order is q - 1. Needs q - 1 factored, so
    /// this is for desk-scale fields.
    pub fn canonical_generator(&self) -> Result<PolyZp> {
        let q1 = self.order() - 1u32;
        let q1_u = u64::try_from(&q1)
            .map_err(|_| Error::Internal("field too large for generator search".into()))?;
        let mut prime_divs = vec![];
        let mut m = q1_u;
        let mut d = 2u64;
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
        for idx in 1.. {
            let cand = self.element_from_index(idx);
            if cand.is_zero() {
                continue;
            }
            let mut ok = true;
            for &l in &prime_divs {
                let e = BigUint::from(q1_u / l);
                if self.pow(&cand, &e).is_one() {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(cand);
            }
        }
        unreachable!()
    }

    /// Power-residue evaluation: 0 for a = 0; otherwise the l-th root of
    /// unity a^{(q-1)/l}, identified exactly as a power of the canonical
    /// generator's (q-1)/l-th power. For l = 2 this is the quadratic
    /// residue symbol with values +-1.
    pub fn pow_residue(&self, a: &PolyZp, l: u64) -> Result<CycInt> {
        let a = self.reduce(a);
        if a.is_zero() {
            return Ok(CycInt::zero(l));
        }
        let q1 = self.order() - 1u32;
        if !(&q1 % l).is_zero() {
            return Err(Error::UnsupportedOrder(l));
        }
        let e = &q1 / l;
        let t = self.pow(&a, &e);
        if l == 2 {
            if t.is_one() {
                return Ok(CycInt::one(2));
            }
            if t == PolyZp::constant(self.p, self.p - 1) {
                return Ok(CycInt::root_of_unity(2, 1));
            }
            return Err(Error::Internal(format!(
                "quadratic residue power landed outside {{+-1}}: {} in F_{}^{}",
                t,
                self.p,
                self.extension_degree()
            )));
        }
        let gen = self.canonical_generator()?;
        let z = self.pow(&gen, &e);
        let mut acc = PolyZp::one(self.p);
        for k in 0..l {
            if acc == t {
                return Ok(CycInt::root_of_unity(l, k));
            }
            acc = self.mul(&acc, &z);
        }
        Err(Error::Internal(
            "power residue did not match any root of unity".into(),
        ))
    }
}

/// Dense polynomial over F_q, used for root extraction inside residue
/// fields. Minimal operation set: this is internal machinery.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFq {
    pub field: Fq,
    pub coeffs: Vec<PolyZp>, // ascending, trimmed
}

impl PolyFq {
    pub fn new(field: Fq, coeffs: Vec<PolyZp>) -> Self {
        let mut coeffs: Vec<PolyZp> = coeffs.into_iter().map(|c| field.reduce(&c)).collect();
        while coeffs.last().map(|c| c.is_zero()) == Some(true) {
            coeffs.pop();
        }
        PolyFq { field, coeffs }
    }

    pub fn zero(field: Fq) -> Self {
        PolyFq { field, coeffs: vec![] }
    }

    pub fn one(field: Fq) -> Self {
        let p = field.p();
        PolyFq::new(field, vec![PolyZp::one(p)])
    }

    pub fn x(field: Fq) -> Self {
        let p = field.p();
        PolyFq::new(field, vec![PolyZp::zero(p), PolyZp::one(p)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> usize {
        if self.coeffs.is_empty() {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    fn coeff(&self, i: usize) -> PolyZp {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| PolyZp::zero(self.field.p()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect();
        PolyFq::new(self.field.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect();
        PolyFq::new(self.field.clone(), coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return PolyFq::zero(self.field.clone());
        }
        let p = self.field.p();
        let mut out = vec![PolyZp::zero(p); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&self.field.mul(a, b));
            }
        }
        PolyFq::new(self.field.clone(), out)
    }

    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero over F_q");
        if self.is_zero() || self.deg() < divisor.deg() {
            return (PolyFq::zero(self.field.clone()), self.clone());
        }
        let field = &self.field;
        let lead_inv = field.inv(divisor.coeffs.last().unwrap()).expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        let mut quot = vec![PolyZp::zero(field.p()); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = field.mul(&rem[i], &lead_inv);
            if c.is_zero() {
                continue;
            }
            quot[i - dd] = c.clone();
            for (j, d) in divisor.coeffs.iter().enumerate() {
                let t = field.mul(&c, d);
                rem[i - dd + j] = rem[i - dd + j].sub(&t);
            }
        }
        (
            PolyFq::new(field.clone(), quot),
            PolyFq::new(field.clone(), rem),
        )
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.divrem(divisor).1
    }

    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lead_inv = self.field.inv(self.coeffs.last().unwrap()).unwrap();
        let coeffs = self.coeffs.iter().map(|c| self.field.mul(c, &lead_inv)).collect();
        PolyFq::new(self.field.clone(), coeffs)
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    pub fn pow_mod(&self, e: &BigUint, modulus: &Self) -> Self {
        let mut acc = PolyFq::one(self.field.clone());
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

    pub fn eval(&self, x: &PolyZp) -> PolyZp {
        let mut acc = PolyZp::zero(self.field.p());
        for c in self.coeffs.iter().rev() {
            acc = self.field.mul(&acc, x).add(c);
        }
        self.field.reduce(&acc)
    }
}

/// All roots in F_q of a polynomial with F_q coefficients, sorted in the
/// canonical order of their representatives. Splitting uses seeded
/// randomness; the sorted output is deterministic.
pub fn roots_in_fq(field: &Fq, poly: &PolyFq, seed: u64) -> Vec<PolyZp> {
    if poly.is_zero() {
        return vec![];
    }
    let q = field.order();
    // product of the distinct linear factors: gcd(x^q - x, poly)
    let xq = PolyFq::x(field.clone()).pow_mod(&q, poly);
    let lin = xq.sub(&PolyFq::x(field.clone())).gcd(poly);
    let mut roots = Vec::new();
    collect_roots(field, &lin, seed, &mut roots);
    roots.sort_by(|a, b| a.canonical_cmp(b));
    roots
}

fn collect_roots(field: &Fq, f: &PolyFq, seed: u64, out: &mut Vec<PolyZp>) {
    match f.deg() {
        0 => {}
        1 => {
            // monic x + c -> root -c
            let f = f.make_monic();
            out.push(f.coeffs[0].neg());
        }
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = field.p();
            let deg = field.extension_degree();
            loop {
                // random element a, split via gcd((x+a)^((q-1)/2) - 1, f)
                let coeffs: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
                let a = PolyZp::new(p, coeffs);
                let shifted = PolyFq::new(
                    field.clone(),
                    vec![a, PolyZp::one(p)],
                );
                if p == 2 {
                    // tiny characteristic-2 fields: brute force
                    let total = u64::try_from(&field.order()).unwrap_or(u64::MAX);
                    assert!(total <= 1 << 16, "root split unsupported for large F_2^f");
                    for idx in 0..total {
                        let cand = field.element_from_index(idx);
                        if f.eval(&cand).is_zero() {
                            out.push(cand);
                        }
                    }
                    return;
                }
                let e = (field.order() - 1u32) / 2u32;
                let b = shifted.pow_mod(&e, f).sub(&PolyFq::one(field.clone()));
                let g = b.gcd(f);
                if g.deg() > 0 && g.deg() < f.deg() {
                    let (q, _) = f.divrem(&g);
                    collect_roots(field, &g, seed.wrapping_add(1), out);
                    collect_roots(field, &q, seed.wrapping_add(2), out);
                    return;
                }
            }
        }
    }
}
