//! Integration checks of module-level invariants at their full
//! sweep ranges (the per-criterion acceptance suite lives in acceptance.rs).

use lsiso::arith::cyc::CycInt;
use lsiso::arith::primes::primes_up_to;
use lsiso::characters::{char_mul, eval_char, indicator_character, CharacterRep};
use lsiso::error::Error;
use lsiso::lseries::{compare_lseries, dirichlet_coefficients};
use lsiso::number_field::{find_isomorphisms, prime_map_of_iso, split_prime, NumberField};
use lsiso::reconstruction::{
    transport_character, verify_compatibility, CharIso, PrimeMatching, SweepExclusions,
};

fn fixture_fields() -> Vec<NumberField> {
    vec![
        NumberField::rationals(),
        NumberField::from_i64("Qi", &[1, 0, 1]).unwrap(),
        NumberField::from_i64("Qsqrt2", &[-2, 0, 1]).unwrap(),
        NumberField::from_i64("Qsqrt-2", &[2, 0, 1]).unwrap(),
        NumberField::from_i64("Qsqrt3", &[-3, 0, 1]).unwrap(),
        NumberField::from_i64("Qcbrt2", &[-2, 0, 0, 1]).unwrap(),
        NumberField::from_i64("Qzeta8", &[1, 0, 0, 0, 1]).unwrap(),
        NumberField::from_i64("K8a", &[-3, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap(),
        NumberField::from_i64("K8b", &[-48, 0, 0, 0, 0, 0, 0, 0, 1]).unwrap(),
    ]
}

#[test]
fn indicator_characters_select_exactly_one_prime_up_to_200() {
    for field in fixture_fields() {
        for p in primes_up_to(200) {
            if p == 2 {
                continue;
            }
            let primes = match split_prime(&field, p) {
                Ok(x) => x,
                Err(Error::NotPMaximal(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            if primes.iter().any(|q| q.e > 1) {
                continue;
            }
            for target in &primes {
                let chi = indicator_character(&field, target, 2).unwrap();
                for other in &primes {
                    let v = eval_char(&chi, other).unwrap();
                    if other.index == target.index {
                        assert_eq!(v, CycInt::root_of_unity(2, 1));
                    } else {
                        assert!(
                            v.is_one(),
                            "{} at p = {} index {}",
                            field.label(),
                            p,
                            other.index
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn transported_characters_have_equal_lseries() {
    // a matching verified compatible up to B forces local-factor equality
    // up to B, hence the L-series agree as far as tested
    let pairs = [
        ("Qsqrt2", vec![-2i64, 0, 1], "Qsqrt8", vec![-8i64, 0, 1]),
        ("Qcbrt2", vec![-2, 0, 0, 1], "Qcbrt16", vec![-16, 0, 0, 1]),
    ];
    for (l1, c1, l2, c2) in pairs {
        let src = NumberField::from_i64(l1, &c1).unwrap();
        let tgt = NumberField::from_i64(l2, &c2).unwrap();
        for sigma in find_isomorphisms(&src, &tgt).unwrap() {
            let psi = CharIso::induced(sigma.clone(), 2);
            let bound = 300;
            let exclusions = SweepExclusions::compute(&src, &tgt, bound);
            let mut matchings = std::collections::BTreeMap::new();
            for p in exclusions.valid_primes() {
                match prime_map_of_iso(&sigma, p) {
                    Ok(pairs) => {
                        let f = split_prime(&src, p).unwrap().iter().map(|q| q.f).collect();
                        matchings.insert(p, PrimeMatching { p, pairs, f });
                    }
                    Err(Error::DenominatorClash(_)) => continue,
                    Err(e) => panic!("{e}"),
                }
            }
            let sample = vec![
                CharacterRep::trivial(src.clone(), 2),
                CharacterRep::quad(src.clone(), src.element_from_i64(&[0, 1])).unwrap(),
                CharacterRep::quad(src.clone(), src.element_from_i64(&[5, 2])).unwrap(),
            ];
            let report = verify_compatibility(&psi, &matchings, bound, &sample).unwrap();
            assert!(report.passed(), "failures: {:?}", report.failures);
            for chi in &sample {
                let image = transport_character(&sigma, chi).unwrap();
                let outcome = compare_lseries(chi, &src, &image, &tgt, bound).unwrap();
                assert!(outcome.is_equal(), "{:?}", outcome);
            }
        }
    }
}

#[test]
fn character_products_multiply_values() {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1234);
    let fields = [
        NumberField::from_i64("Qi", &[1, 0, 1]).unwrap(),
        NumberField::from_i64("Qsqrt2", &[-2, 0, 1]).unwrap(),
        NumberField::from_i64("Qzeta8", &[1, 0, 0, 0, 1]).unwrap(),
    ];
    let mut checked = 0usize;
    while checked < 500 {
        let field = &fields[rng.gen_range(0..fields.len())];
        let n = field.degree();
        let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
            let coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(-9i64..10)).collect();
            field.element_from_i64(&coeffs)
        };
        let d1 = mk(&mut rng);
        let d2 = mk(&mut rng);
        if d1.is_zero() || d2.is_zero() {
            continue;
        }
        let c1 = CharacterRep::quad(field.clone(), d1).unwrap();
        let c2 = CharacterRep::quad(field.clone(), d2).unwrap();
        let prod = char_mul(&c1, &c2).unwrap();
        let p = [3u64, 5, 7, 11, 13, 17, 19, 23, 29][rng.gen_range(0..9)];
        let primes = match split_prime(field, p) {
            Ok(x) => x,
            Err(_) => continue,
        };
        let prime = &primes[rng.gen_range(0..primes.len())];
        let v1 = eval_char(&c1, prime).unwrap();
        let v2 = eval_char(&c2, prime).unwrap();
        if v1.is_zero() || v2.is_zero() {
            continue;
        }
        assert_eq!(eval_char(&prod, prime).unwrap(), v1.mul(&v2).unwrap());
        checked += 1;
    }
}

#[test]
fn trivial_coefficients_count_degree_one_primes_up_to_1000() {
    for field in [
        NumberField::from_i64("Qi", &[1, 0, 1]).unwrap(),
        NumberField::from_i64("Qcbrt2", &[-2, 0, 0, 1]).unwrap(),
    ] {
        let triv = CharacterRep::trivial(field.clone(), 2);
        let coeffs = dirichlet_coefficients(&triv, &field, 1000).unwrap();
        for p in primes_up_to(1000) {
            let count = split_prime(&field, p)
                .unwrap()
                .iter()
                .filter(|q| q.f == 1)
                .count() as i64;
            assert_eq!(coeffs.get(p), &CycInt::from_int(2, count), "p = {}", p);
        }
    }
}

#[test]
fn every_fixture_character_equals_itself_up_to_500() {
    let q = NumberField::rationals();
    let gaussian = NumberField::from_i64("Qi", &[1, 0, 1]).unwrap();
    let chars: Vec<(CharacterRep, NumberField)> = vec![
        (CharacterRep::trivial(q.clone(), 2), q.clone()),
        (
            CharacterRep::quad(q.clone(), q.element_from_i64(&[-6])).unwrap(),
            q.clone(),
        ),
        (
            CharacterRep::quad(gaussian.clone(), gaussian.element_from_i64(&[4, 4])).unwrap(),
            gaussian.clone(),
        ),
        (CharacterRep::trivial(gaussian.clone(), 2), gaussian.clone()),
    ];
    for (chi, field) in &chars {
        let out = compare_lseries(chi, field, chi, field, 500).unwrap();
        assert!(out.is_equal());
    }
}
