//! Order-l characters and their constructive solvers.
//!
//! Two concrete representations cover everything the sweeps need: classical
//! Dirichlet characters over Q presented by exponent data on the canonical
//! generators of (Z/m)^x, and quadratic characters chi_sqrt(d) over an
//! arbitrary base field presented by the element d. The group of all order-l
//! characters is never materialized; characters are concrete witnesses with
//! a partial product law, which is all the finite sweeps consume.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::cyc::CycInt;
use crate::arith::polyzp::{mulmod, powmod, PolyZp};
use crate::arith::primes::{factorize, next_prime};
use crate::error::{Error, Result};
use crate::number_field::{is_square, residue_symbol, split_prime, FieldElement, NumberField, PrimeIdealData};

/// Moduli above this are refused; products of characters over Q can grow
/// the working modulus without bound, and we report rather than guess.
pub const MODULUS_CAP: u64 = 100_000_000_000_000_000;

/// Default search bound for auxiliary primes in the character solvers.
pub const SOLVER_BOUND: u64 = 10_000;

// ---------------------------------------------------------------------------
// Kronecker symbol
// ---------------------------------------------------------------------------

/// Kronecker symbol (a / n), the full extension of the Legendre symbol.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    let mut a = a.clone();
    let mut n = n.clone();
    let mut result = 1i32;
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            result = -result;
        }
    }
    if n.is_zero() {
        unreachable!();
    }
    // strip the even part of n
    let two = BigInt::from(2);
    let mut e = 0u32;
    while n.is_even() {
        n /= &two;
        e += 1;
    }
    if e > 0 {
        if a.is_even() {
            return 0;
        }
        if e % 2 == 1 {
            let m8 = a.mod_floor(&BigInt::from(8));
            let m8 = u64::try_from(&m8).unwrap();
            if m8 == 3 || m8 == 5 {
                result = -result;
            }
        }
    }
    // Jacobi loop for odd positive n
    a = a.mod_floor(&n);
    while !a.is_zero() {
        let mut t = 0u32;
        while a.is_even() {
            a /= &two;
            t += 1;
        }
        if t % 2 == 1 {
            let m8 = u64::try_from(&n.mod_floor(&BigInt::from(8))).unwrap();
            if m8 == 3 || m8 == 5 {
                result = -result;
            }
        }
        // reciprocity: both odd now
        let am4 = u64::try_from(&a.mod_floor(&BigInt::from(4))).unwrap();
        let nm4 = u64::try_from(&n.mod_floor(&BigInt::from(4))).unwrap();
        if am4 == 3 && nm4 == 3 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// Dirichlet characters over Q
// ---------------------------------------------------------------------------

/// One cyclic component of (Z/m)^x: a generator residue mod its prime-power
/// block, with the generator's order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub prime: u64,
    pub prime_power: u64,
    pub residue: u64,
    pub order: u64,
}

/// Canonical generator decomposition of (Z/m)^x, components ordered by
/// prime: odd prime powers get their smallest primitive root, 4 gets 3, and
/// 2^a for a >= 3 gets -1 and 5.
pub fn canonical_generators(m: u64) -> Vec<Generator> {
    assert!(m >= 1);
    let mut out = vec![];
    for (q, a) in factorize(m) {
        let qa = q.pow(a);
        if q == 2 {
            if a == 1 {
                continue;
            }
            if a == 2 {
                out.push(Generator { prime: 2, prime_power: 4, residue: 3, order: 2 });
            } else {
                out.push(Generator { prime: 2, prime_power: qa, residue: qa - 1, order: 2 });
                out.push(Generator {
                    prime: 2,
                    prime_power: qa,
                    residue: 5,
                    order: qa / 4,
                });
            }
            continue;
        }
        let phi = qa / q * (q - 1);
        let phi_primes: Vec<u64> = factorize(phi).into_iter().map(|(p, _)| p).collect();
        let mut g = 2u64;
        loop {
            let gm = g % qa;
            if gm != 0 && gm.gcd(&qa) == 1 {
                let mut ok = true;
                for &l in &phi_primes {
                    if powmod(gm, phi / l, qa) == 1 {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    out.push(Generator { prime: q, prime_power: qa, residue: gm, order: phi });
                    break;
                }
            }
            g += 1;
        }
    }
    out
}

/// Discrete log of a residue against a component generator; brute force at
/// desk scale. For 2^a blocks with a >= 3 the caller splits into the -1 and
/// 5 parts.
fn dlog_component(gen: &Generator, a: u64) -> Option<u64> {
    let qa = gen.prime_power;
    let am = a % qa;
    let mut acc = 1u64;
    for t in 0..gen.order {
        if acc == am {
            return Some(t);
        }
        acc = mulmod(acc, gen.residue, qa);
    }
    None
}

/// Joint discrete log over a 2^a block (a >= 3): a = (-1)^s 5^t.
fn dlog_two_block(qa: u64, a: u64) -> Option<(u64, u64)> {
    let am = a % qa;
    let ord5 = qa / 4;
    let mut acc = 1u64;
    for t in 0..ord5 {
        if acc == am {
            return Some((0, t));
        }
        if qa - acc == am {
            return Some((1, t));
        }
        acc = mulmod(acc, 5, qa);
    }
    None
}

/// A character of order dividing l presented by its exponents on the
/// canonical generators of (Z/m)^x. Kept in conductor-reduced form, so
/// equal characters have equal data and evaluation at p | m is honestly 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirichletCharQ {
    l: u64,
    modulus: u64,
    exponents: Vec<u64>,
}

impl DirichletCharQ {
    pub fn new(l: u64, modulus: u64, exponents: Vec<u64>) -> Result<Self> {
        if modulus == 0 || modulus > MODULUS_CAP {
            return Err(Error::ModulusOverflow(modulus));
        }
        let gens = canonical_generators(modulus);
        if exponents.len() != gens.len() {
            return Err(Error::Internal(format!(
                "expected {} exponents for modulus {}, got {}",
                gens.len(),
                modulus,
                exponents.len()
            )));
        }
        let exponents: Vec<u64> = exponents.into_iter().map(|e| e % l).collect();
        for (g, &e) in gens.iter().zip(&exponents) {
            if e != 0 && !g.order.is_multiple_of(l) {
                return Err(Error::Internal(format!(
                    "generator of order {} cannot carry an order-{} character",
                    g.order, l
                )));
            }
        }
        Ok(DirichletCharQ { l, modulus, exponents }.conductor_reduce())
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_principal(&self) -> bool {
        self.modulus == 1
    }

    /// Exponent k with value zeta_l^k at a residue coprime to the modulus.
    pub fn eval_exponent(&self, a: u64) -> Option<u64> {
        if a.gcd(&self.modulus) != 1 {
            return None;
        }
        let gens = canonical_generators(self.modulus);
        let mut k = 0u64;
        let mut i = 0;
        while i < gens.len() {
            let g = &gens[i];
            if g.prime == 2 && g.prime_power >= 8 {
                // joint (-1, 5) block occupies two slots
                let (s, t) = dlog_two_block(g.prime_power, a)?;
                k = (k + self.exponents[i] * (s % self.l)) % self.l;
                k = (k + self.exponents[i + 1] % self.l * (t % self.l)) % self.l;
                i += 2;
                continue;
            }
            let t = dlog_component(g, a)?;
            k = (k + self.exponents[i] % self.l * (t % self.l)) % self.l;
            i += 1;
        }
        Some(k % self.l)
    }

    pub fn eval_u64(&self, a: u64) -> CycInt {
        match self.eval_exponent(a) {
            Some(k) => CycInt::root_of_unity(self.l, k),
            None => CycInt::zero(self.l),
        }
    }

    /// Drop components where the character is trivial and shrink each
    /// remaining prime power to the conductor.
    fn conductor_reduce(self) -> DirichletCharQ {
        let l = self.l;
        let gens = canonical_generators(self.modulus);
        // collect per-prime blocks
        let mut blocks: Vec<(u64, Vec<(Generator, u64)>)> = vec![];
        for (g, &e) in gens.iter().zip(&self.exponents) {
            match blocks.last_mut() {
                Some((q, v)) if *q == g.prime => v.push((g.clone(), e)),
                _ => blocks.push((g.prime, vec![(g.clone(), e)])),
            }
        }
        let mut new_modulus = 1u64;
        let mut parts: Vec<(u64, Vec<u64>)> = vec![]; // (prime power, exponents)
        for (q, comps) in blocks {
            if comps.iter().all(|(_, e)| *e == 0) {
                continue;
            }
            if q == 2 {
                // l = 2 here (an odd l cannot divide a power of 2)
                let eps = comps[0].1;
                let delta = if comps.len() > 1 { comps[1].1 } else { 0 };
                if delta != 0 {
                    new_modulus *= 8;
                    parts.push((8, vec![eps, delta]));
                } else {
                    new_modulus *= 4;
                    parts.push((4, vec![eps]));
                }
                continue;
            }
            let (g, e) = (&comps[0].0, comps[0].1);
            let b = if (q - 1).is_multiple_of(l) { 1u32 } else { 2 };
            let qb = q.pow(b);
            if qb == g.prime_power {
                new_modulus *= qb;
                parts.push((qb, vec![e]));
                continue;
            }
            // re-express on the canonical generator of the smaller block
            let small = canonical_generators(qb);
            let g_small = &small[0];
            let u = dlog_component(g_small, g.residue % qb).expect("generator reduces");
            let u_inv = mod_inverse(u % l, l).expect("unit mod l");
            new_modulus *= qb;
            parts.push((qb, vec![mulmod(e, u_inv, l)]));
        }
        if new_modulus == 1 {
            return DirichletCharQ { l, modulus: 1, exponents: vec![] };
        }
        // reassemble exponents in the canonical generator order of the new
        // modulus (parts are already sorted by prime)
        let mut exponents = vec![];
        for (_, es) in parts {
            exponents.extend(es);
        }
        debug_assert_eq!(canonical_generators(new_modulus).len(), exponents.len());
        DirichletCharQ { l, modulus: new_modulus, exponents }
    }
}

fn mod_inverse(a: u64, l: u64) -> Option<u64> {
    if a.is_multiple_of(l) {
        return None;
    }
    (1..l).find(|&x| mulmod(a, x, l) == 1)
}

/// The Dirichlet form of the quadratic character attached to a squarefree
/// integer d: modulus |disc| with the exponents read off Kronecker values.
pub fn quad_to_dirichlet(d: &BigInt) -> Result<DirichletCharQ> {
    if d.is_zero() || d.is_one() {
        return Err(Error::Internal("quadratic character needs d != 0, 1".into()));
    }
    let four = BigInt::from(4);
    let disc = if d.mod_floor(&four).is_one() { d.clone() } else { d * &four };
    let m = u64::try_from(disc.abs()).map_err(|_| Error::ModulusOverflow(u64::MAX))?;
    if m > MODULUS_CAP {
        return Err(Error::ModulusOverflow(m));
    }
    let gens = canonical_generators(m);
    let mut exponents = Vec::with_capacity(gens.len());
    for g in &gens {
        // a residue that is the generator in its own block and 1 elsewhere
        let other = m / g.prime_power;
        let r = crt_u64(g.residue, g.prime_power, 1, other);
        let val = kronecker(&disc, &BigInt::from(r));
        exponents.push(match val {
            1 => 0,
            -1 => 1,
            _ => {
                return Err(Error::Internal(
                    "kronecker vanished on a coprime residue".into(),
                ))
            }
        });
    }
    DirichletCharQ::new(2, m, exponents)
}

/// CRT for u64 moduli with gcd 1 (m2 may be 1).
fn crt_u64(r1: u64, m1: u64, r2: u64, m2: u64) -> u64 {
    if m2 == 1 {
        return r1 % m1;
    }
    let m = m1 as u128 * m2 as u128;
    // inverse of m1 mod m2 by brute extended Euclid on i128
    let (mut a, mut b) = (m1 as i128, m2 as i128);
    let (mut x0, mut x1) = (1i128, 0i128);
    while b != 0 {
        let q = a / b;
        let t = a - q * b;
        a = b;
        b = t;
        let tx = x0 - q * x1;
        x0 = x1;
        x1 = tx;
    }
    debug_assert_eq!(a, 1);
    let inv = ((x0 % m2 as i128) + m2 as i128) % m2 as i128;
    let diff = ((r2 as i128 - r1 as i128) % m2 as i128 + m2 as i128) % m2 as i128;
    let k = (diff * inv) % m2 as i128;
    let res = (r1 as u128 + (k as u128) * m1 as u128) % m;
    res as u64
}

// ---------------------------------------------------------------------------
// Quadratic characters over a general base field
// ---------------------------------------------------------------------------

/// Quadratic character chi_sqrt(d) of a base field: value at an odd prime
/// is the residue symbol of d there, with value 0 where d vanishes and at
/// every prime over 2 (fixed convention).
#[derive(Clone, Debug)]
pub struct QuadCharK {
    base: NumberField,
    d: FieldElement,
}

impl QuadCharK {
    pub fn base(&self) -> &NumberField {
        &self.base
    }

    pub fn d(&self) -> &FieldElement {
        &self.d
    }
}

impl PartialEq for QuadCharK {
    fn eq(&self, other: &Self) -> bool {
        if self.base != other.base {
            return false;
        }
        let prod = match self.d.mul(&other.d) {
            Ok(p) => p,
            Err(_) => return false,
        };
        is_square(&prod).unwrap_or(false)
    }
}
impl Eq for QuadCharK {}

/// Reduce d modulo squares: clear denominators with a square, then remove
/// the square part of the integer content. The result has squarefree
/// content and integral coordinates; over Q it is exactly the squarefree
/// integer representative.
pub fn normalize_quad_d(d: &FieldElement) -> FieldElement {
    use num_rational::BigRational;
    let field = d.field().clone();
    let lam = d.denominator_lcm();
    let scaled = d.scale(&BigRational::from_integer(&lam * &lam));
    let coords = scaled.integral_coords().expect("integral after scaling");
    let mut content = BigInt::zero();
    for c in &coords {
        content = content.gcd(c);
    }
    if content.is_zero() {
        return field.zero();
    }
    let s = exact_square_part(&content);
    let ssq = &s * &s;
    let reduced: Vec<BigRational> = coords
        .into_iter()
        .map(|c| BigRational::from_integer(c / &ssq))
        .collect();
    field.element_from_rationals(reduced)
}

/// The largest integer whose square divides v, computed by trial division;
/// a huge leftover cofactor is tested for being a perfect square and
/// otherwise treated as squarefree.
fn exact_square_part(v: &BigInt) -> BigInt {
    let mut rest = v.abs();
    let mut out = BigInt::one();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &d * &d <= rest && d <= limit {
        if (&rest % &d).is_zero() {
            let mut count = 0u32;
            while (&rest % &d).is_zero() {
                rest /= &d;
                count += 1;
            }
            out *= d.pow(count / 2);
        }
        d += 1;
    }
    if rest > BigInt::one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            out *= r;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// The character representation used everywhere downstream
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacterRep {
    /// The trivial character: value 1 at every prime. Carries the ambient
    /// order so values land in the right cyclotomic ring.
    Trivial { base: NumberField, l: u64 },
    DirichletQ(DirichletCharQ),
    Quad(QuadCharK),
}

impl CharacterRep {
    pub fn trivial(base: NumberField, l: u64) -> Self {
        CharacterRep::Trivial { base, l }
    }

    /// Quadratic character for an element d; a square d collapses to the
    /// trivial character.
    pub fn quad(base: NumberField, d: FieldElement) -> Result<Self> {
        if d.field() != &base {
            return Err(Error::BaseFieldMismatch);
        }
        if d.is_zero() {
            return Err(Error::Internal("chi_sqrt(0) is not a character".into()));
        }
        let nd = normalize_quad_d(&d);
        if is_square(&nd)? {
            return Ok(CharacterRep::trivial(base, 2));
        }
        Ok(CharacterRep::Quad(QuadCharK { base, d: nd }))
    }

    pub fn dirichlet(chi: DirichletCharQ) -> Self {
        if chi.is_principal() {
            CharacterRep::trivial(NumberField::rationals(), chi.l())
        } else {
            CharacterRep::DirichletQ(chi)
        }
    }

    pub fn base_field(&self) -> NumberField {
        match self {
            CharacterRep::Trivial { base, .. } => base.clone(),
            CharacterRep::DirichletQ(_) => NumberField::rationals(),
            CharacterRep::Quad(q) => q.base.clone(),
        }
    }

    pub fn l(&self) -> u64 {
        match self {
            CharacterRep::Trivial { l, .. } => *l,
            CharacterRep::DirichletQ(chi) => chi.l(),
            CharacterRep::Quad(_) => 2,
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, CharacterRep::Trivial { .. })
    }

    /// Short description for reports.
    pub fn describe(&self) -> String {
        match self {
            CharacterRep::Trivial { base, .. } => format!("trivial over {}", base.label()),
            CharacterRep::DirichletQ(chi) => format!(
                "dirichlet mod {} exps {:?} (l = {})",
                chi.modulus(),
                chi.exponents(),
                chi.l()
            ),
            CharacterRep::Quad(q) => {
                format!("quad d = {} over {}", q.d.rep(), q.base.label())
            }
        }
    }
}

/// Characters serialize to the config schema: a tagged object with the
/// fields the loader reads back.
impl serde::Serialize for CharacterRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            CharacterRep::Trivial { base, l } => {
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("kind", "trivial")?;
                m.serialize_entry("field", base.label())?;
                m.serialize_entry("l", l)?;
                m.end()
            }
            CharacterRep::DirichletQ(chi) => {
                let mut m = s.serialize_map(Some(4))?;
                m.serialize_entry("kind", "dirichlet_q")?;
                m.serialize_entry("l", &chi.l())?;
                m.serialize_entry("modulus", &chi.modulus())?;
                m.serialize_entry("exponents", chi.exponents())?;
                m.end()
            }
            CharacterRep::Quad(q) => {
                let coords: Vec<String> = (0..q.base.degree())
                    .map(|i| {
                        let c = q.d.rep().coeff(i);
                        if c.is_integer() {
                            c.numer().to_string()
                        } else {
                            format!("{}/{}", c.numer(), c.denom())
                        }
                    })
                    .collect();
                let mut m = s.serialize_map(Some(3))?;
                m.serialize_entry("kind", "quad")?;
                m.serialize_entry("field", q.base.label())?;
                m.serialize_entry("d", &coords)?;
                m.end()
            }
        }
    }
}

/// Character value at a prime: a root of unity, or exactly zero at primes
/// the representation treats as ramified.
pub fn eval_char(chi: &CharacterRep, prime: &PrimeIdealData) -> Result<CycInt> {
    match chi {
        CharacterRep::Trivial { l, .. } => Ok(CycInt::one(*l)),
        CharacterRep::DirichletQ(c) => Ok(c.eval_u64(prime.p)),
        CharacterRep::Quad(q) => {
            if prime.p == 2 {
                return Ok(CycInt::zero(2));
            }
            residue_symbol(&q.d, prime, 2)
        }
    }
}

/// Product of two characters over the same base with the same order.
/// Products over Q are returned in Dirichlet form (with exact values at 2);
/// products of quadratic characters stay quadratic.
pub fn char_mul(a: &CharacterRep, b: &CharacterRep) -> Result<CharacterRep> {
    if a.base_field() != b.base_field() {
        return Err(Error::BaseFieldMismatch);
    }
    match (a, b) {
        (CharacterRep::Trivial { l, .. }, other) | (other, CharacterRep::Trivial { l, .. }) => {
            if !other.is_trivial() && other.l() != *l {
                return Err(Error::MixedOrder(*l, other.l()));
            }
            Ok(other.clone())
        }
        (CharacterRep::Quad(x), CharacterRep::Quad(y)) => {
            let d = x.d.mul(&y.d)?;
            if d.is_zero() {
                return Err(Error::Internal("product of nonzero d vanished".into()));
            }
            CharacterRep::quad(x.base.clone(), d)
        }
        (CharacterRep::DirichletQ(x), CharacterRep::DirichletQ(y)) => {
            if x.l() != y.l() {
                return Err(Error::MixedOrder(x.l(), y.l()));
            }
            Ok(CharacterRep::dirichlet(dirichlet_mul(x, y)?))
        }
        (CharacterRep::DirichletQ(x), CharacterRep::Quad(y))
        | (CharacterRep::Quad(y), CharacterRep::DirichletQ(x)) => {
            if x.l() != 2 {
                return Err(Error::MixedOrder(x.l(), 2));
            }
            let dz = y.d.rep().coeff(0).to_integer();
            let yd = quad_to_dirichlet(&dz)?;
            Ok(CharacterRep::dirichlet(dirichlet_mul(x, &yd)?))
        }
    }
}

fn dirichlet_mul(x: &DirichletCharQ, y: &DirichletCharQ) -> Result<DirichletCharQ> {
    let l = x.l();
    let m = lcm_checked(x.modulus(), y.modulus())?;
    let gens = canonical_generators(m);
    let mut exponents = Vec::with_capacity(gens.len());
    for g in &gens {
        let other = m / g.prime_power;
        let r = crt_u64(g.residue, g.prime_power, 1, other);
        let ex = x
            .eval_exponent(r)
            .ok_or_else(|| Error::Internal("generator residue not coprime".into()))?;
        let ey = y
            .eval_exponent(r)
            .ok_or_else(|| Error::Internal("generator residue not coprime".into()))?;
        exponents.push((ex + ey) % l);
    }
    DirichletCharQ::new(l, m, exponents)
}

fn lcm_checked(a: u64, b: u64) -> Result<u64> {
    let g = a.gcd(&b);
    let l = (a / g).checked_mul(b).ok_or(Error::ModulusOverflow(u64::MAX))?;
    if l > MODULUS_CAP {
        return Err(Error::ModulusOverflow(l));
    }
    Ok(l)
}

/// chi^k by repeated multiplication.
pub fn char_pow(chi: &CharacterRep, k: u64) -> Result<CharacterRep> {
    let mut acc = CharacterRep::trivial(chi.base_field(), chi.l());
    for _ in 0..k {
        acc = char_mul(&acc, chi)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Constructive solvers for prescribed character values
// ---------------------------------------------------------------------------

/// Order-l character over Q with prescribed values zeta_l^{a_i} at distinct
/// primes p_i: search auxiliary primes q = 1 mod l in increasing order, take
/// the canonical order-l character mod q, and solve the exponent system over
/// Z/l by elimination. The first solvable system wins, so the construction
/// is reproducible.
pub fn grunwald_wang_q(
    l: u64,
    targets: &[(u64, u64)],
    aux_bound: u64,
) -> Result<DirichletCharQ> {
    for (i, (p, _)) in targets.iter().enumerate() {
        if !crate::arith::primes::is_prime(*p) {
            return Err(Error::Internal(format!("target {} is not prime", p)));
        }
        for (q, _) in targets.iter().skip(i + 1) {
            if p == q {
                return Err(Error::Internal("target primes must be distinct".into()));
            }
        }
    }
    let goal: Vec<u64> = targets.iter().map(|(_, a)| a % l).collect();
    if goal.iter().all(|&a| a == 0) {
        return DirichletCharQ::new(l, 1, vec![]);
    }
    let mut aux: Vec<(u64, Generator)> = vec![]; // (q, its generator)
    let mut columns: Vec<Vec<u64>> = vec![];
    let mut q = 2u64;
    loop {
        q = next_prime(q);
        if q > aux_bound {
            return Err(Error::SolverBoundExceeded(aux_bound));
        }
        if !(q - 1).is_multiple_of(l) || targets.iter().any(|(p, _)| *p == q) {
            continue;
        }
        let gen = canonical_generators(q).remove(0);
        let col: Vec<u64> = targets
            .iter()
            .map(|(p, _)| dlog_component(&gen, p % q).expect("coprime residue") % l)
            .collect();
        aux.push((q, gen));
        columns.push(col);
        if let Some(solution) = solve_mod_l(&columns, &goal, l) {
            // assemble the product of chi_q^{x_q}
            let mut modulus = 1u64;
            let mut used: Vec<(u64, u64)> = vec![]; // (q, exponent)
            for ((q, _), &x) in aux.iter().zip(&solution) {
                if x % l != 0 {
                    modulus = lcm_checked(modulus, *q)?;
                    used.push((*q, x % l));
                }
            }
            used.sort();
            let exponents: Vec<u64> = used.iter().map(|&(_, x)| x).collect();
            let chi = DirichletCharQ::new(l, modulus, exponents)?;
            // sanity: the construction hits the targets exactly
            debug_assert!(targets
                .iter()
                .all(|&(p, a)| chi.eval_exponent(p) == Some(a % l)));
            return Ok(chi);
        }
    }
}

/// Solve sum x_j col_j = goal over Z/l (l prime); returns one solution.
fn solve_mod_l(columns: &[Vec<u64>], goal: &[u64], l: u64) -> Option<Vec<u64>> {
    let rows = goal.len();
    let cols = columns.len();
    // augmented matrix, row-major
    let mut m: Vec<Vec<u64>> = (0..rows)
        .map(|r| {
            let mut row: Vec<u64> = columns.iter().map(|c| c[r] % l).collect();
            row.push(goal[r] % l);
            row
        })
        .collect();
    let mut pivot_cols = vec![];
    let mut rank = 0usize;
    for c in 0..cols {
        let mut pivot = None;
        for (r, row) in m.iter().enumerate().skip(rank) {
            if row[c] != 0 {
                pivot = Some(r);
                break;
            }
        }
        let Some(pr) = pivot else { continue };
        m.swap(rank, pr);
        let inv = mod_inverse(m[rank][c], l)?;
        for v in m[rank].iter_mut() {
            *v = mulmod(*v, inv, l);
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let factor = m[r][c];
                let pivot_row = m[rank].clone();
                for (v, pv) in m[r].iter_mut().zip(&pivot_row) {
                    let sub = mulmod(factor, *pv, l);
                    *v = (*v + l - sub) % l;
                }
            }
        }
        pivot_cols.push(c);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    // consistency
    for row in m.iter().skip(rank) {
        if row[cols] != 0 {
            return None;
        }
    }
    let mut x = vec![0u64; cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[r][cols];
    }
    Some(x)
}

/// Quadratic character of a base field with prescribed square classes at
/// the primes over one odd unramified p: pick residues of the right class
/// in each residue field, combine by polynomial CRT mod (f mod p), lift the
/// coefficients to integers in [0, p), and nudge by multiples of p until
/// the element is a global non-square. Primes over p not named in the
/// targets get class +1.
pub fn grunwald_wang_quad(
    base: &NumberField,
    p: u64,
    targets: &[(usize, i8)],
) -> Result<QuadCharK> {
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    let primes = split_prime(base, p)?;
    if primes.iter().any(|q| q.e > 1) {
        return Err(Error::RamifiedBase(p));
    }
    for &(i, e) in targets {
        if i >= primes.len() || (e != 1 && e != -1) {
            return Err(Error::Internal("bad quadratic target".into()));
        }
    }
    let fbar = base.defining_poly().reduce_mod(p).make_monic();
    let mut dbar = PolyZp::zero(p);
    for q in &primes {
        let eps = targets
            .iter()
            .find(|&&(i, _)| i == q.index)
            .map(|&(_, e)| e)
            .unwrap_or(1);
        let fq = q.residue_field()?;
        let r = if eps == 1 {
            PolyZp::one(p)
        } else {
            // first non-square in the canonical enumeration
            let mut idx = 1u64;
            loop {
                let cand = fq.element_from_index(idx);
                if !cand.is_zero() && fq.pow_residue(&cand, 2)? == CycInt::root_of_unity(2, 1) {
                    break cand;
                }
                idx += 1;
            }
        };
        // idempotent for this component
        let mi = fbar.div_exact(&q.local_factor_poly);
        let (g, u, _) = mi.ext_gcd(&q.local_factor_poly);
        debug_assert!(g.is_one());
        let ei = mi.mul(&u).rem(&fbar);
        dbar = dbar.add(&r.mul(&ei).rem(&fbar));
    }
    let dbar = dbar.rem(&fbar);
    let coords: Vec<i64> = (0..base.degree())
        .map(|i| dbar.coeff(i) as i64)
        .collect();
    let mut d = base.element_from_i64(&coords);
    // make d a global non-square without moving it mod p
    let pb = num_rational::BigRational::from_integer(BigInt::from(p));
    while is_square(&d)? {
        d = d.add_rational(&pb);
    }
    match CharacterRep::quad(base.clone(), d)? {
        CharacterRep::Quad(q) => Ok(q),
        _ => unreachable!("non-square d cannot collapse"),
    }
}

/// The order-l character that is zeta_l at one chosen prime over p and 1 at
/// every other prime over p. For l = 2 this works over any base field; for
/// l > 2 the base must be Q.
pub fn indicator_character(
    base: &NumberField,
    prime: &PrimeIdealData,
    l: u64,
) -> Result<CharacterRep> {
    let p = prime.p;
    if p == 2 {
        return Err(Error::EvenPrime);
    }
    if l == 2 {
        let quad = grunwald_wang_quad(base, p, &[(prime.index, -1)])?;
        return Ok(CharacterRep::Quad(quad));
    }
    if !base.is_rationals() {
        return Err(Error::UnsupportedOrder(l));
    }
    let chi = grunwald_wang_q(l, &[(p, 1)], SOLVER_BOUND)?;
    Ok(CharacterRep::dirichlet(chi))
}
