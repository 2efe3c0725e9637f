//! Recovering prime bijections from character-group isomorphisms, and the
//! reverse transport of characters along field isomorphisms.
//!
//! A character-group isomorphism is presented as an evaluation rule on
//! concrete characters; every check below consumes only finitely many
//! values, so the rule interface is faithful. The reconstruction at one
//! prime builds, for each source prime, the character that singles it out,
//! pushes it through the rule, and reads the matched target prime off the
//! unique place where the image has value different from 1. Failures of
//! that uniqueness are verdicts, not bugs: they falsify the claim that the
//! rule preserves L-series.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::cyc::CycInt;
use crate::characters::{
    char_mul, eval_char, indicator_character, kronecker, CharacterRep,
};
use crate::error::{Error, Result};
use crate::lseries::{compare_lseries, ComparisonOutcome};
use crate::number_field::{
    find_isomorphisms, prime_map_of_iso, split_prime, FieldIso, NumberField,
};
use num_bigint::BigInt;
use num_traits::Signed;

/// Transport a character along a field isomorphism: quadratic characters
/// map by applying the isomorphism to d coefficientwise; characters over Q
/// are fixed (Q has no nontrivial automorphism). The transported character
/// takes at sigma(p) the value the original takes at p.
pub fn transport_character(sigma: &FieldIso, chi: &CharacterRep) -> Result<CharacterRep> {
    if chi.base_field() != *sigma.source() {
        return Err(Error::BaseFieldMismatch);
    }
    match chi {
        CharacterRep::Trivial { l, .. } => Ok(CharacterRep::trivial(sigma.target().clone(), *l)),
        CharacterRep::Quad(q) => {
            let image = sigma.apply(q.d())?;
            CharacterRep::quad(sigma.target().clone(), image)
        }
        CharacterRep::DirichletQ(_) => {
            if !sigma.source().is_rationals() || !sigma.target().is_rationals() {
                return Err(Error::BaseFieldMismatch);
            }
            Ok(chi.clone())
        }
    }
}

/// How a character-group isomorphism is presented.
#[derive(Clone, Debug)]
pub enum CharMapRule {
    /// The identity on characters of a field.
    Identity,
    /// Induced by a field isomorphism (transport along it).
    Induced(FieldIso),
    /// The involution over Q that fixes chi_sqrt(d) when the p-free part of
    /// d is a square mod p and sends it to chi_sqrt(-d) otherwise; defined
    /// for p = 1 mod 4.
    LegendreTwist { p: u64 },
    /// Finite list of generator -> image pairs, extended multiplicatively
    /// over Q by factoring squarefree d into prime-indexed generators.
    Table { pairs: Vec<(CharacterRep, CharacterRep)> },
}

/// A computable isomorphism between order-l character groups, as an
/// evaluation rule. The homomorphism property is spot-checked by the
/// verifiers, never assumed.
#[derive(Clone, Debug)]
pub struct CharIso {
    l: u64,
    source: NumberField,
    target: NumberField,
    rule: CharMapRule,
}

impl CharIso {
    pub fn identity(field: NumberField, l: u64) -> Self {
        CharIso { l, source: field.clone(), target: field, rule: CharMapRule::Identity }
    }

    pub fn induced(sigma: FieldIso, l: u64) -> Self {
        CharIso {
            l,
            source: sigma.source().clone(),
            target: sigma.target().clone(),
            rule: CharMapRule::Induced(sigma),
        }
    }

    /// The twist-by-Legendre-symbol counterexample rule over Q (l = 2).
    pub fn legendre_twist(p: u64) -> Result<Self> {
        if p % 4 != 1 || !crate::arith::primes::is_prime(p) {
            return Err(Error::BadModulus(p));
        }
        let q = NumberField::rationals();
        Ok(CharIso { l: 2, source: q.clone(), target: q, rule: CharMapRule::LegendreTwist { p } })
    }

    pub fn table(
        l: u64,
        source: NumberField,
        target: NumberField,
        pairs: Vec<(CharacterRep, CharacterRep)>,
    ) -> Self {
        CharIso { l, source, target, rule: CharMapRule::Table { pairs } }
    }

    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn source(&self) -> &NumberField {
        &self.source
    }

    pub fn target(&self) -> &NumberField {
        &self.target
    }

    pub fn rule(&self) -> &CharMapRule {
        &self.rule
    }

    /// Apply the rule to a character over the source field.
    pub fn apply(&self, chi: &CharacterRep) -> Result<CharacterRep> {
        if chi.base_field() != self.source {
            return Err(Error::BaseFieldMismatch);
        }
        match &self.rule {
            CharMapRule::Identity => Ok(chi.clone()),
            CharMapRule::Induced(sigma) => transport_character(sigma, chi),
            CharMapRule::LegendreTwist { p } => apply_legendre_twist(*p, chi),
            CharMapRule::Table { pairs } => apply_table(pairs, &self.target, self.l, chi),
        }
    }
}

fn apply_legendre_twist(p: u64, chi: &CharacterRep) -> Result<CharacterRep> {
    match chi {
        CharacterRep::Trivial { .. } => Ok(chi.clone()),
        CharacterRep::Quad(q) if q.base().is_rationals() => {
            let d = q.d().rep().coeff(0).to_integer();
            let pb = BigInt::from(p);
            // strip the p-part (squarefree d has it to the first power)
            let d0 = if (&d % &pb) == BigInt::from(0) { &d / &pb } else { d.clone() };
            match kronecker(&d0, &pb) {
                1 => Ok(chi.clone()),
                -1 => {
                    let qf = q.base().clone();
                    let neg = qf.element_from_rationals(vec![
                        num_rational::BigRational::from_integer(-d),
                    ]);
                    CharacterRep::quad(qf, neg)
                }
                _ => Err(Error::Internal("stripped d still vanished mod p".into())),
            }
        }
        other => Err(Error::RuleIncomplete(other.describe())),
    }
}

/// Table lookup with multiplicative extension over Q: a squarefree d
/// factors into the generators chi_sqrt(-1), chi_sqrt(2), chi_sqrt(q), and
/// the image is the corresponding product of table images.
fn apply_table(
    pairs: &[(CharacterRep, CharacterRep)],
    target: &NumberField,
    l: u64,
    chi: &CharacterRep,
) -> Result<CharacterRep> {
    if chi.is_trivial() {
        return Ok(CharacterRep::trivial(target.clone(), l));
    }
    for (from, to) in pairs {
        if from == chi {
            return Ok(to.clone());
        }
    }
    if let CharacterRep::Quad(q) = chi {
        if q.base().is_rationals() && l == 2 {
            let d = q.d().rep().coeff(0).to_integer();
            let mut gens: Vec<BigInt> = vec![];
            if d.is_negative() {
                gens.push(BigInt::from(-1));
            }
            for (p, _) in crate::arith::primes::factorize(
                u64::try_from(d.abs()).map_err(|_| Error::RuleIncomplete(chi.describe()))?,
            ) {
                gens.push(BigInt::from(p));
            }
            let qf = q.base().clone();
            let mut acc = CharacterRep::trivial(target.clone(), l);
            for g in gens {
                let gen_char = CharacterRep::quad(
                    qf.clone(),
                    qf.element_from_rationals(vec![num_rational::BigRational::from_integer(g)]),
                )?;
                let image = pairs
                    .iter()
                    .find(|(from, _)| *from == gen_char)
                    .map(|(_, to)| to.clone())
                    .ok_or_else(|| Error::RuleIncomplete(gen_char.describe()))?;
                acc = char_mul(&acc, &image)?;
            }
            return Ok(acc);
        }
    }
    Err(Error::RuleIncomplete(chi.describe()))
}

/// The per-prime bijection recovered at p, with the inertia degrees of the
/// source primes alongside.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeMatching {
    pub p: u64,
    pub pairs: Vec<(usize, usize)>,
    pub f: Vec<u32>,
}

/// Reconstruct the prime matching over p from the character-map rule: for
/// each source prime build its indicator character, push it through the
/// rule, and locate the unique target prime where the image is not 1. The
/// matched value must be exactly the expected root of unity and the
/// matching must preserve inertia degrees and be a bijection; any failure
/// is the falsification verdict for the rule at p.
pub fn reconstruct_prime_matching(psi: &CharIso, p: u64) -> Result<PrimeMatching> {
    if p == 2 {
        return Err(Error::ExcludedPrime(p));
    }
    let source_primes = split_prime(psi.source(), p)?;
    let target_primes = split_prime(psi.target(), p)?;
    if source_primes.iter().any(|q| q.e > 1) || target_primes.iter().any(|q| q.e > 1) {
        return Err(Error::ExcludedPrime(p));
    }
    let l = psi.l();
    let zeta = CycInt::root_of_unity(l, 1);
    let mut pairs = Vec::with_capacity(source_primes.len());
    let mut f = Vec::with_capacity(source_primes.len());
    for sp in &source_primes {
        let chi = indicator_character(psi.source(), sp, l)?;
        let image = psi.apply(&chi)?;
        let mut hits = vec![];
        for tp in &target_primes {
            let v = eval_char(&image, tp)?;
            if !v.is_one() {
                hits.push((tp.index, v));
            }
        }
        if hits.len() != 1 {
            return Err(Error::NotSinglePrime { p, index: sp.index, found: hits.len() });
        }
        let (j, value) = hits.pop().unwrap();
        if target_primes[j].f != sp.f {
            return Err(Error::NormMismatch { p, index: sp.index });
        }
        if value != zeta {
            return Err(Error::ValueMismatch { p, index: sp.index });
        }
        pairs.push((sp.index, j));
        f.push(sp.f);
    }
    if source_primes.len() != target_primes.len() {
        return Err(Error::NotBijective(p));
    }
    let mut seen = vec![false; target_primes.len()];
    for &(_, j) in &pairs {
        if seen[j] {
            return Err(Error::NotBijective(p));
        }
        seen[j] = true;
    }
    Ok(PrimeMatching { p, pairs, f })
}

/// One compatibility failure: a sampled character whose value at a source
/// prime differs from the image character's value at the matched prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatFailure {
    pub p: u64,
    pub source_index: usize,
    pub chi: String,
    pub expected: CycInt,
    pub got: CycInt,
}

/// Report of a compatibility sweep; failures empty means every sampled
/// identity held at every tested prime.
#[derive(Clone, Debug, Serialize)]
pub struct CompatReport {
    pub bound: u64,
    pub tested: Vec<u64>,
    pub excluded: Vec<u64>,
    pub failures: Vec<CompatFailure>,
}

impl CompatReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check chi(p) = psi(chi)(phi(p)) for every sampled character, every
/// matched prime, and every p up to the bound with a matching. The
/// ramified case rides along: a value of 0 on one side must be 0 on the
/// other. Failures are data, not errors.
pub fn verify_compatibility(
    psi: &CharIso,
    matchings: &BTreeMap<u64, PrimeMatching>,
    bound: u64,
    sample: &[CharacterRep],
) -> Result<CompatReport> {
    let mut tested = vec![];
    let mut excluded = vec![];
    let mut failures = vec![];
    for p in crate::arith::primes::primes_up_to(bound) {
        let Some(matching) = matchings.get(&p) else {
            excluded.push(p);
            continue;
        };
        tested.push(p);
        let source_primes = split_prime(psi.source(), p)?;
        let target_primes = split_prime(psi.target(), p)?;
        for chi in sample {
            let image = psi.apply(chi)?;
            for &(i, j) in &matching.pairs {
                let expected = eval_char(chi, &source_primes[i])?;
                let got = eval_char(&image, &target_primes[j])?;
                if expected != got {
                    failures.push(CompatFailure {
                        p,
                        source_index: i,
                        chi: chi.describe(),
                        expected,
                        got,
                    });
                }
            }
        }
    }
    Ok(CompatReport { bound, tested, excluded, failures })
}

/// Outcome of comparing two matchings at the same prime: either equal, or
/// a separating character over the target together with its conflicting
/// values at the two claimed images of one source prime.
#[derive(Clone, Debug)]
pub enum UniquenessOutcome {
    Equal,
    Separated {
        source_index: usize,
        separating: CharacterRep,
        value_at_first: CycInt,
        value_at_second: CycInt,
    },
}

/// If two matchings at p differ, produce the witness: a character over the
/// target with value 1 at one claimed image and a nontrivial value at the
/// other, so that no single rule can be compatible with both.
pub fn check_matching_uniqueness(
    psi: &CharIso,
    first: &PrimeMatching,
    second: &PrimeMatching,
) -> Result<UniquenessOutcome> {
    if first.p != second.p {
        return Err(Error::Internal("matchings live at different primes".into()));
    }
    if first.pairs == second.pairs {
        return Ok(UniquenessOutcome::Equal);
    }
    let p = first.p;
    let target_primes = split_prime(psi.target(), p)?;
    for (&(i1, j1), &(i2, j2)) in first.pairs.iter().zip(&second.pairs) {
        debug_assert_eq!(i1, i2);
        if j1 == j2 {
            continue;
        }
        let separating = indicator_character(psi.target(), &target_primes[j2], psi.l())?;
        let value_at_first = eval_char(&separating, &target_primes[j1])?;
        let value_at_second = eval_char(&separating, &target_primes[j2])?;
        return Ok(UniquenessOutcome::Separated {
            source_index: i1,
            separating,
            value_at_first,
            value_at_second,
        });
    }
    Err(Error::Internal("pair lists differ but no split index found".into()))
}

/// Prime exclusion lists for a sweep over a field pair: p = 2, primes where
/// an equation order is not maximal, and primes ramified in either field.
#[derive(Clone, Debug, Serialize)]
pub struct SweepExclusions {
    pub bound: u64,
    pub even: Vec<u64>,
    pub not_maximal: Vec<u64>,
    pub ramified: Vec<u64>,
}

impl SweepExclusions {
    pub fn compute(source: &NumberField, target: &NumberField, bound: u64) -> Self {
        let mut even = vec![];
        let mut not_maximal = vec![];
        let mut ramified = vec![];
        for p in crate::arith::primes::primes_up_to(bound) {
            if p == 2 {
                even.push(p);
                continue;
            }
            let mut bad_max = false;
            let mut bad_ram = false;
            for field in [source, target] {
                match split_prime(field, p) {
                    Ok(primes) => {
                        if primes.iter().any(|q| q.e > 1) {
                            bad_ram = true;
                        }
                    }
                    Err(_) => bad_max = true,
                }
            }
            if bad_max {
                not_maximal.push(p);
            } else if bad_ram {
                ramified.push(p);
            }
        }
        SweepExclusions { bound, even, not_maximal, ramified }
    }

    pub fn is_excluded(&self, p: u64) -> bool {
        self.even.contains(&p) || self.not_maximal.contains(&p) || self.ramified.contains(&p)
    }

    pub fn valid_primes(&self) -> Vec<u64> {
        crate::arith::primes::primes_up_to(self.bound)
            .into_iter()
            .filter(|&p| !self.is_excluded(p))
            .collect()
    }
}

/// Verdict of the bounded isomorphism recovery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RecoveryVerdict {
    /// Exactly one field isomorphism matches the reconstruction at every
    /// tested prime.
    UniqueIsomorphism { candidate_index: usize },
    /// No field isomorphism matches (including the case of none existing).
    NoneFound,
    /// Reconstruction itself failed at some prime: the rule is not
    /// L-series-preserving there.
    Falsified { p: u64, reason: String },
}

/// Full report of a recovery sweep.
#[derive(Clone, Debug)]
pub struct RecoveryReport {
    pub verdict: RecoveryVerdict,
    pub matchings: BTreeMap<u64, PrimeMatching>,
    pub exclusions: SweepExclusions,
    pub candidates: Vec<FieldIso>,
}

/// Bounded substitute for the density-one descent: reconstruct the matching
/// at every valid prime up to the bound, then search the finite isomorphism
/// list for the unique candidate whose induced prime map agrees with every
/// reconstructed matching. Primes where a candidate's generator image has
/// denominators are skipped for that candidate only.
pub fn recover_isomorphism(psi: &CharIso, bound: u64) -> Result<RecoveryReport> {
    let exclusions = SweepExclusions::compute(psi.source(), psi.target(), bound);
    let mut matchings = BTreeMap::new();
    for p in exclusions.valid_primes() {
        match reconstruct_prime_matching(psi, p) {
            Ok(m) => {
                matchings.insert(p, m);
            }
            Err(
                e @ (Error::NotSinglePrime { .. }
                | Error::NormMismatch { .. }
                | Error::NotBijective(_)
                | Error::ValueMismatch { .. }),
            ) => {
                return Ok(RecoveryReport {
                    verdict: RecoveryVerdict::Falsified { p, reason: e.to_string() },
                    matchings,
                    exclusions,
                    candidates: vec![],
                });
            }
            Err(e) => return Err(e),
        }
    }
    let candidates = find_isomorphisms(psi.source(), psi.target())?;
    let mut agreeing = vec![];
    for (idx, sigma) in candidates.iter().enumerate() {
        let mut ok = true;
        for (p, matching) in &matchings {
            match prime_map_of_iso(sigma, *p) {
                Ok(pairs) => {
                    if pairs != matching.pairs {
                        ok = false;
                        break;
                    }
                }
                Err(Error::DenominatorClash(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        if ok {
            agreeing.push(idx);
        }
    }
    let verdict = match agreeing.as_slice() {
        [] => RecoveryVerdict::NoneFound,
        [idx] => RecoveryVerdict::UniqueIsomorphism { candidate_index: *idx },
        more => {
            return Err(Error::Internal(format!(
                "{} distinct isomorphisms agree with the reconstruction",
                more.len()
            )))
        }
    };
    Ok(RecoveryReport { verdict, matchings, exclusions, candidates })
}

/// Arithmetic-equivalence report: zeta comparison through local factors,
/// the isomorphism count, and the per-prime splitting-type comparison.
#[derive(Clone, Debug)]
pub struct GassmannReport {
    pub zeta: ComparisonOutcome,
    pub isomorphism_count: usize,
    pub splitting_first_mismatch: Option<u64>,
    pub excluded: Vec<u64>,
}

impl GassmannReport {
    /// Arithmetically equivalent but not isomorphic, as far as tested.
    pub fn equivalent_non_isomorphic(&self) -> bool {
        self.zeta.is_equal() && self.splitting_first_mismatch.is_none() && self.isomorphism_count == 0
    }
}

pub fn gassmann_check(
    first: &NumberField,
    second: &NumberField,
    bound: u64,
) -> Result<GassmannReport> {
    let zeta = compare_lseries(
        &CharacterRep::trivial(first.clone(), 2),
        first,
        &CharacterRep::trivial(second.clone(), 2),
        second,
        bound,
    )?;
    let isomorphism_count = find_isomorphisms(first, second)?.len();
    let mut splitting_first_mismatch = None;
    let mut excluded = vec![];
    for p in crate::arith::primes::primes_up_to(bound) {
        let (a, b) = match (split_prime(first, p), split_prime(second, p)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => {
                excluded.push(p);
                continue;
            }
        };
        let mut ta: Vec<(u32, u32)> = a.iter().map(|q| (q.e, q.f)).collect();
        let mut tb: Vec<(u32, u32)> = b.iter().map(|q| (q.e, q.f)).collect();
        ta.sort_unstable();
        tb.sort_unstable();
        if ta != tb {
            splitting_first_mismatch = Some(p);
            break;
        }
    }
    Ok(GassmannReport { zeta, isomorphism_count, splitting_first_mismatch, excluded })
}
