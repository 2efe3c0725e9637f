//! Exact root extraction inside a number field.
//!
//! To find the roots in K' = Q[y]/(g) of a monic polynomial with integral
//! coefficients, reduce at a good odd prime p, read candidate roots off the
//! residue algebra F_p[y]/(g mod p) component by component, Newton-lift each
//! candidate to precision p^k beyond a rigorous coefficient bound, and then
//! verify exactly over the rationals. Every true root is integral, so a
//! fixed multiple of it has integer coordinates dominated by a
//! Hadamard/discriminant bound; a candidate that fails the exact check is
//! spurious, and if no candidate survives the polynomial provably has no
//! root in the field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith::fq::{roots_in_fq, Fq, PolyFq};
use crate::arith::primes::next_prime;
use crate::arith::polyzp::PolyZp;
use crate::arith::qpoly::QPoly;
use crate::arith::zpoly::{discriminant, resultant, ZPoly};
use crate::error::{Error, Result};
use crate::number_field::{FieldElement, NumberField};

const CANDIDATE_CAP: u64 = 65_536;
const PRIME_WINDOW: usize = 60;

/// Per-component data at the chosen prime: the irreducible factor of g and
/// the roots of the reduced polynomial inside its residue field.
type ComponentRoots = Vec<(PolyZp, Vec<PolyZp>)>;

/// Roots of a monic integer polynomial inside the target field, sorted
/// canonically. Completeness and the emptiness certificate both rest on
/// the integrality bound computed in `coefficient_bound`.
pub fn roots_in_target(f: &ZPoly, target: &NumberField, seed: u64) -> Result<Vec<QPoly>> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let coeffs: Vec<ZPoly> = f
        .coeffs()
        .iter()
        .map(|c| ZPoly::new(vec![c.clone()]))
        .collect();
    let disc_f = discriminant(f).abs();
    roots_of_monic_element_poly(target, &coeffs, &disc_f, seed)
}

/// Square root of a field element, if one exists. The element may have
/// denominators; they are cleared by a square factor first.
pub fn sqrt_in_field(d: &FieldElement) -> Result<Option<FieldElement>> {
    if d.is_zero() {
        return Ok(Some(d.field().zero()));
    }
    let field = d.field().clone();
    let lam = d.denominator_lcm();
    let scaled = d.scale(&BigRational::from_integer(&lam * &lam));
    let coords = scaled
        .integral_coords()
        .expect("cleared denominators are integral");
    let dz = ZPoly::new(coords);
    // f(x) = x^2 - d_scaled; the norm of its discriminant 4 d is the extra
    // bad-prime mass
    let norm_d = resultant(field.defining_poly(), &dz).abs();
    if norm_d.is_zero() {
        return Err(Error::Internal("nonzero element has zero norm".into()));
    }
    let bad = BigInt::from(4) * norm_d;
    let coeffs = vec![
        dz.scale(&BigInt::from(-1)),
        ZPoly::zero(),
        ZPoly::one(),
    ];
    let roots = roots_of_monic_element_poly(&field, &coeffs, &bad, crate::DEFAULT_SEED)?;
    let inv = BigRational::new(BigInt::one(), lam);
    Ok(roots
        .into_iter()
        .next()
        .map(|r| field.element(r).scale(&inv)))
}

/// Roots in the target field of a monic polynomial whose coefficients are
/// integral elements of the target (each a ZPoly in the generator of degree
/// below n). `bad_extra` must be a nonzero multiple of the norm of the
/// polynomial's discriminant, so that good primes keep the reduction
/// squarefree in every residue component.
fn roots_of_monic_element_poly(
    target: &NumberField,
    coeffs: &[ZPoly],
    bad_extra: &BigInt,
    seed: u64,
) -> Result<Vec<QPoly>> {
    let g = target.defining_poly();
    let m = coeffs.len() - 1;
    assert!(m >= 1, "constant polynomial has no roots");
    assert!(coeffs[m] == ZPoly::one(), "leading coefficient must be 1");
    let disc_g = discriminant(g).abs();
    if disc_g.is_zero() {
        return Err(Error::Internal("defining polynomial is not squarefree".into()));
    }
    let dmul = square_part_multiple(&disc_g);
    let bad = &disc_g * &dmul * bad_extra;

    // choose the good prime with the fewest candidate roots mod p
    let mut best: Option<(u64, ComponentRoots, u64)> = None;
    let mut p = 2u64;
    let mut inspected = 0usize;
    while inspected < PRIME_WINDOW {
        p = next_prime(p);
        if p == 2 || (&bad % BigInt::from(p)).is_zero() {
            continue;
        }
        inspected += 1;
        let factors = crate::arith::polyzp::factor_mod_p(g, p, seed)?;
        let mut comps: ComponentRoots = Vec::with_capacity(factors.len());
        let mut total: u64 = 1;
        for (gi, e) in &factors {
            debug_assert_eq!(*e, 1);
            let fq = Fq::new(p, gi.clone())?;
            let fbar = reduce_element_poly(coeffs, p, gi, &fq);
            let roots = roots_in_fq(&fq, &fbar, seed ^ p);
            total = total.saturating_mul(roots.len() as u64);
            comps.push((gi.clone(), roots));
        }
        if total == 0 {
            // no root mod p, hence no root at all
            return Ok(vec![]);
        }
        if best.as_ref().map(|b| b.2 > total) != Some(false) {
            best = Some((p, comps, total));
        }
        if total <= (m as u64) {
            break; // cannot do better than one root per conjugate block
        }
    }
    let (p, comps, total) = best.expect("prime window is nonempty");
    if total > CANDIDATE_CAP {
        return Err(Error::Internal(format!(
            "root search needs {} candidates mod p = {}",
            total, p
        )));
    }

    // coefficient bound: |coords of dmul * root| <= dmul * bc
    let bc = coefficient_bound(g, coeffs, &disc_g);
    let bound = &dmul * bc;
    let mut k = 1u32;
    let mut modulus = BigInt::from(p);
    let two_bound = BigInt::from(2) * &bound + 1;
    while modulus <= two_bound {
        modulus *= BigInt::from(p);
        k += 1;
    }
    let newton_steps = (64 - u64::from(k).leading_zeros()) as usize + 2;

    // CRT idempotents for the components of g mod p
    let gbar = g.reduce_mod(p);
    let idems: Vec<PolyZp> = comps
        .iter()
        .map(|(gi, _)| {
            let mi = gbar.div_exact(gi);
            let (gcd, u, _) = mi.ext_gcd(gi);
            debug_assert!(gcd.is_one());
            mi.mul(&u).rem(&gbar)
        })
        .collect();

    // walk the Cartesian product of per-component roots
    let mut out: Vec<QPoly> = Vec::new();
    let sizes: Vec<usize> = comps.iter().map(|(_, r)| r.len()).collect();
    let mut idx = vec![0usize; comps.len()];
    loop {
        let mut cand = PolyZp::zero(p);
        for (ci, (comp, roots)) in comps.iter().enumerate() {
            let _ = comp;
            cand = cand.add(&roots[idx[ci]].mul(&idems[ci]));
        }
        let cand = cand.rem(&gbar);
        if let Some(root) = lift_and_verify(
            target, coeffs, &cand, p, &modulus, newton_steps, &dmul, &bound,
        )? {
            if !out.contains(&root) {
                out.push(root);
            }
        }
        // advance the product index
        let mut i = 0;
        loop {
            if i == idx.len() {
                out.sort_by(|a, b| a.canonical_cmp(b));
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < sizes[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Reduce the element-coefficient polynomial into F_p[y]/(g_i) as a PolyFq.
fn reduce_element_poly(coeffs: &[ZPoly], p: u64, gi: &PolyZp, fq: &Fq) -> PolyFq {
    let reduced: Vec<PolyZp> = coeffs
        .iter()
        .map(|c| c.reduce_mod(p).rem(gi))
        .collect();
    PolyFq::new(fq.clone(), reduced)
}

/// A multiple of the largest integer whose square divides v, by trial
/// division up to a desk-scale bound; the unfactored cofactor is folded in
/// whole, which keeps the result a valid multiple.
fn square_part_multiple(v: &BigInt) -> BigInt {
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
        out *= rest;
    }
    out
}

/// Hadamard/discriminant bound: any root of the monic polynomial has
/// generator-basis coordinates of absolute value at most this.
fn coefficient_bound(g: &ZPoly, coeffs: &[ZPoly], disc_g: &BigInt) -> BigInt {
    let n = g.deg();
    // bound on the target's conjugates
    let mg = BigInt::one()
        + g.coeffs()
            .iter()
            .take(n)
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
    let mg = mg.max(BigInt::one());
    // bound on the embeddings of each coefficient, then a Cauchy root bound
    let mut cmax = BigInt::zero();
    for c in coeffs.iter().take(coeffs.len() - 1) {
        let mut acc = BigInt::zero();
        let mut pw = BigInt::one();
        for a in c.coeffs() {
            acc += a.abs() * &pw;
            pw *= &mg;
        }
        cmax = cmax.max(acc);
    }
    let mf = BigInt::one() + cmax;
    // H^2 = n^n * mf^2 * mg^(n(n-1)); bound = isqrt(H^2 / disc) + 1
    let h2 = BigInt::from(n).pow(n as u32) * &mf * &mf * mg.pow((n * (n - 1)) as u32);
    let q = h2 / disc_g;
    q.sqrt() + 1
}

#[allow(clippy::too_many_arguments)]
fn lift_and_verify(
    target: &NumberField,
    coeffs: &[ZPoly],
    cand: &PolyZp,
    p: u64,
    modulus: &BigInt,
    newton_steps: usize,
    dmul: &BigInt,
    bound: &BigInt,
) -> Result<Option<QPoly>> {
    let g = target.defining_poly();
    let n = target.degree();
    let gbar = g.reduce_mod(p);
    // derivative coefficients (as elements)
    let deriv: Vec<ZPoly> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&BigInt::from(i)))
        .collect();
    // inverse of f'(cand) mod (p, g)
    let fprime_bar = eval_element_poly_mod_p(&deriv, cand, p, &gbar);
    let (gcd, u0, _) = fprime_bar.ext_gcd(&gbar);
    if !gcd.is_one() {
        return Err(Error::Internal(
            "derivative not invertible at candidate despite good prime".into(),
        ));
    }

    let mut rho: Vec<BigInt> = (0..n).map(|i| BigInt::from(cand.coeff(i))).collect();
    let mut inv: Vec<BigInt> = (0..n).map(|i| BigInt::from(u0.coeff(i))).collect();
    let two = vec_scalar(n, BigInt::from(2));
    for _ in 0..newton_steps {
        let fp = eval_element_poly_mod(&deriv, &rho, g, modulus);
        // inv <- inv (2 - fp inv)
        let t = mp_sub(&two, &mp_mul(&fp, &inv, g, modulus), modulus);
        inv = mp_mul(&inv, &t, g, modulus);
        let fv = eval_element_poly_mod(coeffs, &rho, g, modulus);
        rho = mp_sub(&rho, &mp_mul(&fv, &inv, g, modulus), modulus);
    }
    let residue = eval_element_poly_mod(coeffs, &rho, g, modulus);
    if residue.iter().any(|c| !c.is_zero()) {
        return Ok(None);
    }
    // symmetric lift of dmul * rho, then exact verification over Q
    let half = modulus / BigInt::from(2);
    let mut num = Vec::with_capacity(n);
    for c in &rho {
        let mut v = (c * dmul).mod_floor(modulus);
        if v > half {
            v -= modulus;
        }
        if v.abs() > *bound {
            return Ok(None);
        }
        num.push(v);
    }
    let root = QPoly::new(
        num.into_iter()
            .map(|v| BigRational::new(v, dmul.clone()))
            .collect(),
    );
    // exact check: f(root) = 0 mod g over Q
    let gq = QPoly::from_zpoly(g);
    let mut acc = QPoly::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(&root).rem(&gq);
        acc = acc.add(&QPoly::from_zpoly(c));
    }
    acc = acc.rem(&gq);
    if acc.is_zero() {
        Ok(Some(root))
    } else {
        Ok(None)
    }
}

fn eval_element_poly_mod_p(coeffs: &[ZPoly], x: &PolyZp, p: u64, gbar: &PolyZp) -> PolyZp {
    let mut acc = PolyZp::zero(p);
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).rem(gbar).add(&c.reduce_mod(p).rem(gbar));
    }
    acc.rem(gbar)
}

fn vec_scalar(n: usize, c: BigInt) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[0] = c;
    v
}

fn mp_normalize(v: &mut [BigInt], modulus: &BigInt) {
    for c in v.iter_mut() {
        *c = c.mod_floor(modulus);
    }
}

fn mp_sub(a: &[BigInt], b: &[BigInt], modulus: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    mp_normalize(&mut out, modulus);
    out
}

/// Multiply two elements of (Z/modulus)[y]/(g) with g monic.
fn mp_mul(a: &[BigInt], b: &[BigInt], g: &ZPoly, modulus: &BigInt) -> Vec<BigInt> {
    let n = g.deg();
    let mut conv = vec![BigInt::zero(); 2 * n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            conv[i + j] += x * y;
        }
    }
    // reduce by monic g
    for i in (n..2 * n).rev() {
        if conv[i].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut conv[i]);
        for (j, gc) in g.coeffs().iter().enumerate().take(n) {
            conv[i - n + j] -= &c * gc;
        }
    }
    let mut out: Vec<BigInt> = conv.into_iter().take(n).collect();
    mp_normalize(&mut out, modulus);
    out
}

fn eval_element_poly_mod(
    coeffs: &[ZPoly],
    x: &[BigInt],
    g: &ZPoly,
    modulus: &BigInt,
) -> Vec<BigInt> {
    let n = g.deg();
    let mut acc = vec![BigInt::zero(); n];
    for c in coeffs.iter().rev() {
        acc = mp_mul(&acc, x, g, modulus);
        for (i, cc) in c.coeffs().iter().enumerate() {
            acc[i] += cc;
        }
        mp_normalize(&mut acc, modulus);
    }
    acc
}

