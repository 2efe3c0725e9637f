//! Number fields presented by monic irreducible integer polynomials:
//! prime splitting through the Dedekind criterion, residue symbols of field
//! elements, exact isomorphism search, and the prime bijection a field
//! isomorphism induces.

mod hensel;

pub use hensel::{roots_in_target, sqrt_in_field};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::cyc::CycInt;
use crate::arith::fq::Fq;
use crate::arith::polyzp::{factor_mod_p, invmod, PolyZp};
use crate::arith::qpoly::QPoly;
use crate::arith::zpoly::{discriminant, is_irreducible_over_q, ZPoly};
use crate::error::{Error, Result};
use crate::DEFAULT_SEED;

/// A number field Q(theta) given by the monic irreducible minimal
/// polynomial of theta. Fields compare equal when their defining
/// polynomials do; the label is presentation only.
#[derive(Clone, Debug)]
pub struct NumberField {
    label: String,
    poly: ZPoly,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}
impl Eq for NumberField {}

impl NumberField {
    /// Irreducibility is verified at construction; every downstream
    /// invariant assumes it.
    pub fn new(label: &str, poly: ZPoly) -> Result<Self> {
        if !poly.is_monic() {
            return Err(Error::NotMonic);
        }
        if !is_irreducible_over_q(&poly)? {
            return Err(Error::NotIrreducible);
        }
        Ok(NumberField { label: label.to_string(), poly })
    }

    pub fn from_i64(label: &str, coeffs: &[i64]) -> Result<Self> {
        NumberField::new(label, ZPoly::from_i64(coeffs))
    }

    /// The rationals, as the degree-1 field defined by x.
    pub fn rationals() -> Self {
        NumberField { label: "Q".into(), poly: ZPoly::from_i64(&[0, 1]) }
    }

    pub fn is_rationals(&self) -> bool {
        self.poly == ZPoly::from_i64(&[0, 1])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn defining_poly(&self) -> &ZPoly {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.deg()
    }

    pub fn discriminant(&self) -> BigInt {
        discriminant(&self.poly)
    }

    /// The zero element.
    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), rep: QPoly::zero() }
    }

    pub fn element(&self, rep: QPoly) -> FieldElement {
        let g = QPoly::from_zpoly(&self.poly);
        FieldElement { field: self.clone(), rep: rep.rem(&g) }
    }

    pub fn element_from_i64(&self, coeffs: &[i64]) -> FieldElement {
        self.element(QPoly::from_i64(coeffs))
    }

    pub fn element_from_rationals(&self, coeffs: Vec<BigRational>) -> FieldElement {
        self.element(QPoly::new(coeffs))
    }

    /// The generator theta.
    pub fn generator(&self) -> FieldElement {
        self.element(QPoly::x())
    }
}

/// One prime over p: ramification index e, inertia degree f, and the
/// irreducible factor of the defining polynomial mod p that presents the
/// residue field. The index is the position in the canonical factor order
/// and is the prime's stable identity in reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeIdealData {
    pub p: u64,
    pub index: usize,
    pub e: u32,
    pub f: u32,
    pub local_factor_poly: PolyZp,
}

impl PrimeIdealData {
    pub fn norm(&self) -> num_bigint::BigUint {
        num_bigint::BigUint::from(self.p).pow(self.f)
    }

    pub fn residue_field(&self) -> Result<Fq> {
        Fq::new(self.p, self.local_factor_poly.clone())
    }
}

/// Element of a number field: a rational polynomial in the generator of
/// degree below the field degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: NumberField,
    rep: QPoly,
}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn rep(&self) -> &QPoly {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::BaseFieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.field.element(self.rep.add(&other.rep)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        Ok(self.field.element(self.rep.mul(&other.rep)))
    }

    pub fn add_rational(&self, c: &BigRational) -> Self {
        self.field.element(self.rep.add(&QPoly::constant(c.clone())))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        self.field.element(self.rep.scale(c))
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        let mut l = BigInt::one();
        for c in self.rep.coeffs() {
            l = l.lcm(c.denom());
        }
        l
    }

    /// Integer coordinates, provided the element lies in Z[theta].
    pub fn integral_coords(&self) -> Option<Vec<BigInt>> {
        let n = self.field.degree();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let c = self.rep.coeff(i);
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(out)
    }

    /// Reduce into the residue field of a prime over p. The denominators
    /// must be coprime to p.
    pub fn reduce_mod_prime(&self, prime: &PrimeIdealData) -> Result<PolyZp> {
        let p = prime.p;
        let pb = BigInt::from(p);
        let mut coeffs = Vec::with_capacity(self.rep.coeffs().len());
        for c in self.rep.coeffs() {
            let den = c.denom().mod_floor(&pb);
            if den.is_zero() {
                return Err(Error::DenominatorClash(p));
            }
            let den_u = u64::try_from(&den).expect("residue fits");
            let num = c.numer().mod_floor(&pb);
            let num_u = u64::try_from(&num).expect("residue fits");
            coeffs.push(crate::arith::polyzp::mulmod(num_u, invmod(den_u, p), p));
        }
        let reduced = PolyZp::new(p, coeffs);
        Ok(reduced.rem(&prime.local_factor_poly))
    }
}

/// A field isomorphism, presented by the image of the source generator.
/// Construction verifies that the image is a root of the source's defining
/// polynomial, exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldIso {
    source: NumberField,
    target: NumberField,
    image_of_generator: FieldElement,
}

impl FieldIso {
    pub fn new(source: NumberField, target: NumberField, image: FieldElement) -> Result<Self> {
        if image.field != target {
            return Err(Error::BaseFieldMismatch);
        }
        if source.degree() != target.degree() {
            return Err(Error::BaseFieldMismatch);
        }
        let value = eval_zpoly_at_element(source.defining_poly(), &image);
        if !value.is_zero() {
            return Err(Error::Internal(format!(
                "claimed generator image {} is not a root of the defining polynomial",
                image.rep
            )));
        }
        Ok(FieldIso { source, target, image_of_generator: image })
    }

    pub fn identity(field: &NumberField) -> Self {
        FieldIso {
            source: field.clone(),
            target: field.clone(),
            image_of_generator: field.generator(),
        }
    }

    pub fn source(&self) -> &NumberField {
        &self.source
    }

    pub fn target(&self) -> &NumberField {
        &self.target
    }

    pub fn image_of_generator(&self) -> &FieldElement {
        &self.image_of_generator
    }

    pub fn is_identity(&self) -> bool {
        self.source == self.target && self.image_of_generator.rep == QPoly::x()
    }

    /// Apply to an element of the source field.
    pub fn apply(&self, elem: &FieldElement) -> Result<FieldElement> {
        if elem.field != self.source {
            return Err(Error::BaseFieldMismatch);
        }
        let g = QPoly::from_zpoly(self.target.defining_poly());
        let mut acc = QPoly::zero();
        for c in elem.rep.coeffs().iter().rev() {
            acc = acc.mul(&self.image_of_generator.rep).rem(&g);
            acc = acc.add(&QPoly::constant(c.clone()));
        }
        Ok(self.target.element(acc))
    }

    /// Composition: first self (K -> K'), then other (K' -> K'').
    pub fn compose(&self, other: &FieldIso) -> Result<FieldIso> {
        if self.target != other.source {
            return Err(Error::BaseFieldMismatch);
        }
        let image = other.apply(&self.image_of_generator)?;
        FieldIso::new(self.source.clone(), other.target.clone(), image)
    }
}

fn eval_zpoly_at_element(f: &ZPoly, x: &FieldElement) -> FieldElement {
    let g = QPoly::from_zpoly(x.field.defining_poly());
    let mut acc = QPoly::zero();
    for c in f.coeffs().iter().rev() {
        acc = acc.mul(&x.rep).rem(&g);
        acc = acc.add(&QPoly::constant(BigRational::from_integer(c.clone())));
    }
    x.field.element(acc)
}

/// Split a rational prime: one entry per irreducible factor of the defining
/// polynomial mod p, in canonical factor order, with e the multiplicity and
/// f the degree. The full Dedekind criterion decides whether Z[theta] is
/// p-maximal first; if not, the prime is refused rather than mis-split.
pub fn split_prime(field: &NumberField, p: u64) -> Result<Vec<PrimeIdealData>> {
    split_prime_seeded(field, p, DEFAULT_SEED)
}

/// `split_prime` with the randomized-splitting seed threaded through; the
/// canonical factor order makes the result seed-independent.
pub fn split_prime_seeded(field: &NumberField, p: u64, seed: u64) -> Result<Vec<PrimeIdealData>> {
    let factors = factor_mod_p(field.defining_poly(), p, seed)?;
    // Dedekind: with fbar = prod g_i^{e_i}, set g = prod g_i and h = fbar/g,
    // lift both, and test gcd(T, g, h) with T = (lift(g) lift(h) - f)/p.
    let mut g_rad = PolyZp::one(p);
    let mut h_co = PolyZp::one(p);
    for (gi, e) in &factors {
        g_rad = g_rad.mul(gi);
        for _ in 1..*e {
            h_co = h_co.mul(gi);
        }
    }
    let lifted = g_rad.lift().mul(&h_co.lift());
    let diff = lifted.sub(field.defining_poly());
    let t = diff.div_exact_int(&BigInt::from(p));
    let tbar = t.reduce_mod(p);
    let witness = tbar.gcd(&g_rad).gcd(&h_co);
    if !witness.is_one() {
        return Err(Error::NotPMaximal(p));
    }
    let primes: Vec<PrimeIdealData> = factors
        .into_iter()
        .enumerate()
        .map(|(index, (g, e))| PrimeIdealData {
            p,
            index,
            e,
            f: g.deg() as u32,
            local_factor_poly: g,
        })
        .collect();
    debug_assert_eq!(
        primes.iter().map(|q| (q.e * q.f) as usize).sum::<usize>(),
        field.degree()
    );
    Ok(primes)
}

/// Power-residue symbol of a field element at a prime: reduce into the
/// residue field and evaluate. Value 0 exactly when the element vanishes
/// there. p = 2 is excluded by convention.
pub fn residue_symbol(d: &FieldElement, prime: &PrimeIdealData, l: u64) -> Result<CycInt> {
    if prime.p == 2 {
        return Err(Error::EvenPrime);
    }
    let fq = prime.residue_field()?;
    let red = d.reduce_mod_prime(prime)?;
    fq.pow_residue(&red, l)
}

/// All isomorphisms source -> target: the roots of the source's defining
/// polynomial inside the target, each packaged with its generator image.
/// Empty exactly when the fields are not isomorphic; for source == target
/// this is the automorphism group.
pub fn find_isomorphisms(source: &NumberField, target: &NumberField) -> Result<Vec<FieldIso>> {
    find_isomorphisms_seeded(source, target, DEFAULT_SEED)
}

/// `find_isomorphisms` with an explicit seed for the randomized splitting
/// steps; the sorted output is seed-independent.
pub fn find_isomorphisms_seeded(
    source: &NumberField,
    target: &NumberField,
    seed: u64,
) -> Result<Vec<FieldIso>> {
    if source.degree() != target.degree() {
        return Ok(vec![]);
    }
    let roots = roots_in_target(source.defining_poly(), target, seed)?;
    roots
        .into_iter()
        .map(|r| FieldIso::new(source.clone(), target.clone(), target.element(r)))
        .collect()
}

/// The prime matching over p induced by a field isomorphism: the source
/// prime with factor g maps to the unique target prime whose residue field
/// kills g evaluated at the generator image.
pub fn prime_map_of_iso(iso: &FieldIso, p: u64) -> Result<Vec<(usize, usize)>> {
    let source_primes = split_prime(iso.source(), p)?;
    let target_primes = split_prime(iso.target(), p)?;
    if source_primes.len() != target_primes.len() {
        return Err(Error::NotBijective(p));
    }
    // reduce the generator image once per target prime
    let mut pairs = Vec::with_capacity(source_primes.len());
    let mut images: Vec<PolyZp> = Vec::with_capacity(target_primes.len());
    let mut fields: Vec<Fq> = Vec::with_capacity(target_primes.len());
    for q in &target_primes {
        images.push(iso.image_of_generator.reduce_mod_prime(q)?);
        fields.push(q.residue_field()?);
    }
    for sp in &source_primes {
        let mut hit: Option<usize> = None;
        for (j, q) in target_primes.iter().enumerate() {
            // evaluate the source factor at the reduced image, inside the
            // target residue field
            let mut acc = PolyZp::zero(p);
            for &c in sp.local_factor_poly.coeffs().iter().rev() {
                acc = fields[j].mul(&acc, &images[j]).add(&PolyZp::constant(p, c));
            }
            if fields[j].reduce(&acc).is_zero() {
                if hit.is_some() {
                    return Err(Error::NotBijective(p));
                }
                hit = Some(j);
                if q.e != sp.e || q.f != sp.f {
                    return Err(Error::NormMismatch { p, index: sp.index });
                }
            }
        }
        match hit {
            Some(j) => pairs.push((sp.index, j)),
            None => return Err(Error::NotBijective(p)),
        }
    }
    // bijectivity on the target side
    let mut seen = vec![false; target_primes.len()];
    for &(_, j) in &pairs {
        if seen[j] {
            return Err(Error::NotBijective(p));
        }
        seen[j] = true;
    }
    Ok(pairs)
}

/// Is the element a square in its field?
pub fn is_square(d: &FieldElement) -> Result<bool> {
    if d.is_zero() {
        return Ok(true);
    }
    if d.field.is_rationals() {
        // rational shortcut: positive with square numerator and denominator
        let c = d.rep.coeff(0);
        if c.is_negative() {
            return Ok(false);
        }
        return Ok(is_perfect_square(c.numer()) && is_perfect_square(c.denom()));
    }
    Ok(sqrt_in_field(d)?.is_some())
}

pub(crate) fn is_perfect_square(v: &BigInt) -> bool {
    if v.is_negative() {
        return false;
    }
    let r = v.sqrt();
    &(&r * &r) == v
}
