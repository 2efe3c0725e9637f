//! Task implementations behind the subcommands. Every task yields the same
//! report regardless of seed (seeds only steer randomized splitting, whose
//! output is canonically sorted), and all tables are sorted by
//! (p, canonical prime index), so identical inputs produce byte-identical
//! reports.

use serde_json::{json, Value};

use lsiso::arith::cyc::CycInt;
use lsiso::arith::primes::{next_prime, primes_up_to};
use lsiso::characters::{eval_char, CharacterRep};
use lsiso::error::Error;
use lsiso::lseries::{compare_lseries, dirichlet_coefficients, local_factor_at_p, ComparisonOutcome};
use lsiso::number_field::{
    find_isomorphisms_seeded, split_prime_seeded, NumberField,
};
use lsiso::reconstruction::{
    gassmann_check, recover_isomorphism, verify_compatibility, CharIso, PrimeMatching,
    RecoveryVerdict, SweepExclusions,
};

pub struct TaskResult {
    pub json: Value,
    pub tsv: String,
    pub exit: i32,
}

fn cyc_value(v: &CycInt) -> Value {
    serde_json::to_value(v).expect("cyclotomic serializes")
}

fn cyc_tsv(v: &CycInt) -> String {
    v.coords()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn split(field: &NumberField, bound: u64, seed: u64) -> Result<TaskResult, String> {
    let mut rows = vec![];
    let mut tsv = String::from("p\ttypes\n");
    let mut excluded = vec![];
    for p in primes_up_to(bound) {
        match split_prime_seeded(field, p, seed) {
            Ok(primes) => {
                let types: Vec<Value> =
                    primes.iter().map(|q| json!([q.e, q.f])).collect();
                let tsv_types: Vec<String> =
                    primes.iter().map(|q| format!("({},{})", q.e, q.f)).collect();
                tsv.push_str(&format!("{}\t{}\n", p, tsv_types.join(";")));
                rows.push(json!({"p": p, "types": types}));
            }
            Err(Error::NotPMaximal(_)) => {
                excluded.push(p);
                tsv.push_str(&format!("{}\texcluded\n", p));
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(TaskResult {
        json: json!({
            "task": "split",
            "field": field.label(),
            "bound": bound,
            "rows": rows,
            "excluded": excluded,
        }),
        tsv,
        exit: 0,
    })
}

pub fn zeta(field: &NumberField, bound: u64) -> Result<TaskResult, String> {
    let triv = CharacterRep::trivial(field.clone(), 2);
    let coeffs = dirichlet_coefficients(&triv, field, bound).map_err(|e| e.to_string())?;
    let mut rows = vec![];
    let mut tsv = String::from("n\ta_n\n");
    for (n, a) in coeffs.iter() {
        rows.push(json!({"n": n, "a": cyc_value(a)}));
        tsv.push_str(&format!("{}\t{}\n", n, cyc_tsv(a)));
    }
    Ok(TaskResult {
        json: json!({
            "task": "zeta",
            "field": field.label(),
            "bound": bound,
            "rows": rows,
        }),
        tsv,
        exit: 0,
    })
}

pub fn lfactor(chi: &CharacterRep, bound: u64) -> Result<TaskResult, String> {
    let field = chi.base_field();
    let mut rows = vec![];
    let mut excluded = vec![];
    let mut tsv = String::from("p\tcoefficients\n");
    for p in primes_up_to(bound) {
        match local_factor_at_p(chi, &field, p) {
            Ok(factor) => {
                let coeffs: Vec<Value> = factor.coefficients().iter().map(cyc_value).collect();
                let tsv_coeffs: Vec<String> =
                    factor.coefficients().iter().map(cyc_tsv).collect();
                tsv.push_str(&format!("{}\t{}\n", p, tsv_coeffs.join("|")));
                rows.push(json!({"p": p, "coefficients": coeffs}));
            }
            Err(Error::NotPMaximal(_)) => {
                excluded.push(p);
                tsv.push_str(&format!("{}\texcluded\n", p));
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(TaskResult {
        json: json!({
            "task": "lfactor",
            "character": serde_json::to_value(chi).expect("character serializes"),
            "describe": chi.describe(),
            "field": field.label(),
            "bound": bound,
            "rows": rows,
            "excluded": excluded,
        }),
        tsv,
        exit: 0,
    })
}

pub fn compare(
    first: &CharacterRep,
    second: &CharacterRep,
    bound: u64,
) -> Result<TaskResult, String> {
    let f1 = first.base_field();
    let f2 = second.base_field();
    let outcome = compare_lseries(first, &f1, second, &f2, bound).map_err(|e| e.to_string())?;
    let (verdict, exit, tsv) = match &outcome {
        ComparisonOutcome::Equal { bound, excluded } => (
            json!({"equal": true, "bound": bound, "excluded": excluded}),
            0,
            format!("verdict\tequal-up-to-{}\nexcluded\t{:?}\n", bound, excluded),
        ),
        ComparisonOutcome::FirstMismatch { p } => (
            json!({"equal": false, "first_mismatch": p}),
            2,
            format!("verdict\tfirst-mismatch-at-{}\n", p),
        ),
    };
    Ok(TaskResult {
        json: json!({
            "task": "compare",
            "first": first.describe(),
            "second": second.describe(),
            "outcome": verdict,
        }),
        tsv,
        exit,
    })
}

fn parse_rule(
    rule: &str,
    source: &NumberField,
    target: &NumberField,
    seed: u64,
) -> Result<CharIso, String> {
    if rule == "identity" {
        if source != target {
            return Err("identity rule needs source == target".into());
        }
        return Ok(CharIso::identity(source.clone(), 2));
    }
    if let Some(idx) = rule.strip_prefix("induced:") {
        let idx: usize = idx.parse().map_err(|e| format!("bad rule index: {e}"))?;
        let isos = find_isomorphisms_seeded(source, target, seed).map_err(|e| e.to_string())?;
        if idx >= isos.len() {
            return Err(format!(
                "rule index {} out of range: {} isomorphisms found",
                idx,
                isos.len()
            ));
        }
        return Ok(CharIso::induced(isos[idx].clone(), 2));
    }
    if let Some(p) = rule.strip_prefix("twist:") {
        let p: u64 = p.parse().map_err(|e| format!("bad twist prime: {e}"))?;
        return CharIso::legendre_twist(p).map_err(|e| e.to_string());
    }
    Err(format!("unknown rule {}; use identity, induced:N, or twist:P", rule))
}

pub fn reconstruct(
    source: &NumberField,
    target: &NumberField,
    rule: &str,
    bound: u64,
    seed: u64,
) -> Result<TaskResult, String> {
    let psi = parse_rule(rule, source, target, seed)?;
    let report = recover_isomorphism(&psi, bound).map_err(|e| e.to_string())?;
    let matchings: Vec<Value> = report
        .matchings
        .values()
        .map(|m| serde_json::to_value(m).expect("matching serializes"))
        .collect();
    let (verdict, exit) = match &report.verdict {
        RecoveryVerdict::UniqueIsomorphism { candidate_index } => (
            json!({
                "kind": "unique_isomorphism",
                "candidate_index": candidate_index,
                "generator_image": format!("{}", report.candidates[*candidate_index].image_of_generator().rep()),
            }),
            0,
        ),
        RecoveryVerdict::NoneFound => (json!({"kind": "none_found"}), 2),
        RecoveryVerdict::Falsified { p, reason } => {
            (json!({"kind": "falsified", "p": p, "reason": reason}), 2)
        }
    };
    let mut tsv = format!("verdict\t{}\n", verdict["kind"].as_str().unwrap());
    tsv.push_str("p\tpairs\n");
    for m in report.matchings.values() {
        let pairs: Vec<String> = m.pairs.iter().map(|(i, j)| format!("{}->{}", i, j)).collect();
        tsv.push_str(&format!("{}\t{}\n", m.p, pairs.join(";")));
    }
    Ok(TaskResult {
        json: json!({
            "task": "reconstruct",
            "source": source.label(),
            "target": target.label(),
            "rule": rule,
            "bound": bound,
            "verdict": verdict,
            "matchings": matchings,
            "exclusions": serde_json::to_value(&report.exclusions).expect("exclusions serialize"),
        }),
        tsv,
        exit,
    })
}

pub fn gassmann(
    first: &NumberField,
    second: &NumberField,
    bound: u64,
    seed: u64,
) -> Result<TaskResult, String> {
    let _ = seed;
    let report = gassmann_check(first, second, bound).map_err(|e| e.to_string())?;
    let zeta = match &report.zeta {
        ComparisonOutcome::Equal { bound, excluded } => {
            json!({"equal": true, "bound": bound, "excluded": excluded})
        }
        ComparisonOutcome::FirstMismatch { p } => {
            json!({"equal": false, "first_mismatch": p})
        }
    };
    let exit = if report.zeta.is_equal() { 0 } else { 2 };
    let tsv = format!(
        "zeta_equal\t{}\nisomorphisms\t{}\nsplitting_mismatch\t{}\n",
        report.zeta.is_equal(),
        report.isomorphism_count,
        report
            .splitting_first_mismatch
            .map(|p| p.to_string())
            .unwrap_or_else(|| "none".into()),
    );
    Ok(TaskResult {
        json: json!({
            "task": "gassmann",
            "first": first.label(),
            "second": second.label(),
            "bound": bound,
            "zeta": zeta,
            "isomorphism_count": report.isomorphism_count,
            "splitting_first_mismatch": report.splitting_first_mismatch,
            "excluded": report.excluded,
            "equivalent_non_isomorphic": report.equivalent_non_isomorphic(),
        }),
        tsv,
        exit,
    })
}

pub fn remark(p: u64, dmax: u64, bound: u64) -> Result<TaskResult, String> {
    let q = NumberField::rationals();
    let psi = CharIso::legendre_twist(p).map_err(|e| e.to_string())?;
    // sample: chi_sqrt(d) for squarefree d, |d| <= dmax
    let mut sample = vec![];
    let mut sample_d = vec![];
    for d in -(dmax as i64)..=(dmax as i64) {
        if d == 0 || d == 1 {
            continue;
        }
        if !squarefree(d.unsigned_abs()) {
            continue;
        }
        sample.push(
            CharacterRep::quad(q.clone(), q.element_from_i64(&[d])).map_err(|e| e.to_string())?,
        );
        sample_d.push(d);
    }
    // identity matchings at every odd prime up to the bound
    let mut matchings = std::collections::BTreeMap::new();
    let exclusions = SweepExclusions::compute(&q, &q, bound);
    for pr in exclusions.valid_primes() {
        matchings.insert(pr, PrimeMatching { p: pr, pairs: vec![(0, 0)], f: vec![1] });
    }
    let report = verify_compatibility(&psi, &matchings, bound, &sample).map_err(|e| e.to_string())?;
    let failures_one_mod_four: Vec<&_> =
        report.failures.iter().filter(|f| f.p % 4 == 1).collect();
    // involution and the 3-mod-4 witnesses per moved character
    let mut involution_ok = true;
    let mut moved = vec![];
    let mut all_moved_have_witness = true;
    for (chi, &d) in sample.iter().zip(&sample_d) {
        let image = psi.apply(chi).map_err(|e| e.to_string())?;
        let twice = psi.apply(&image).map_err(|e| e.to_string())?;
        if &twice != chi {
            involution_ok = false;
        }
        if &image != chi {
            // first failing prime q = 3 mod 4 within 100
            let mut witness = None;
            let mut pr = 2u64;
            while pr < 100.min(bound) {
                pr = next_prime(pr);
                if pr % 4 != 3 {
                    continue;
                }
                let prime = &split_prime_seeded(&q, pr, lsiso::DEFAULT_SEED).map_err(|e| e.to_string())?[0];
                let lhs = eval_char(chi, prime).map_err(|e| e.to_string())?;
                let rhs = eval_char(&image, prime).map_err(|e| e.to_string())?;
                if lhs != rhs {
                    witness = Some(pr);
                    break;
                }
            }
            if witness.is_none() {
                all_moved_have_witness = false;
            }
            moved.push(json!({"d": d, "witness_three_mod_four": witness}));
        }
    }
    let ok = failures_one_mod_four.is_empty() && involution_ok && all_moved_have_witness;
    let tsv = format!(
        "sample_size\t{}\nfailures_at_one_mod_four\t{}\nmoved_characters\t{}\ninvolution\t{}\nverdict\t{}\n",
        sample.len(),
        failures_one_mod_four.len(),
        moved.len(),
        involution_ok,
        if ok { "as-predicted" } else { "unexpected" },
    );
    Ok(TaskResult {
        json: json!({
            "task": "remark",
            "p": p,
            "dmax": dmax,
            "bound": bound,
            "sample_size": sample.len(),
            "failures_at_one_mod_four": failures_one_mod_four.len(),
            "failures_total": report.failures.len(),
            "failures": serde_json::to_value(&report.failures).expect("failures serialize"),
            "moved": moved,
            "involution_ok": involution_ok,
            "verdict": if ok { "as-predicted" } else { "unexpected" },
        }),
        tsv,
        exit: if ok { 0 } else { 2 },
    })
}

fn squarefree(mut n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d * d) {
            return false;
        }
        while n.is_multiple_of(d) {
            n /= d;
        }
        d += 1;
    }
    true
}
