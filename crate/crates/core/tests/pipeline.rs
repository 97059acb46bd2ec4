//! Cross-module pipelines driven from text descriptors.

use seqpred::capacity::{build_rho_capacity, truncate_class};
use seqpred::cover::{assemble_nu, gamma_prime, greedy_cover};
use seqpred::divergence::{dn_block, dn_stepwise};
use seqpred::nml::{build_nml_table, build_rho_c, ParametricClass};
use seqpred::process::descriptor::{parse_measure, parse_measures, to_descriptor};
use seqpred::process::{check_consistency, distribution};

const CLASS: &str = "\
# three binary sources
bernoulli p=2.5e-1
markov alphabet=2 order=1 table=9e-1,1e-1;3e-1,7e-1 initial=7.5e-1,2.5e-1
deterministic alphabet=2 period=0,1
";

#[test]
fn descriptor_round_trip_preserves_divergence() {
    let ms = parse_measures(CLASS).unwrap();
    let rho = parse_measure("laplace alphabet=2").unwrap();
    for m in &ms {
        let again = parse_measure(&to_descriptor(m).unwrap()).unwrap();
        for n in 1..=8 {
            let a = dn_block(m, &rho, n).unwrap().dn;
            let b = dn_stepwise(&again, &rho, n).unwrap().dn;
            assert!((a - b).abs() <= 1e-9, "n={n}: {a} vs {b}");
        }
    }
}

#[test]
fn class_file_feeds_nml_capacity_and_cover() {
    let class = ParametricClass::parse(CLASS).unwrap();
    let members = class.members().unwrap();
    assert_eq!(members.len(), 3);

    let table = build_nml_table(&class, 6).unwrap();
    let total: f64 = (0..64).map(|x| table.lambda(x)).sum();
    assert!((total - 1.0).abs() <= 1e-12);

    let nml = build_rho_c(&class, 6).unwrap();
    assert!(check_consistency(&nml.predictor, 6).unwrap().passed(1e-12));

    let rows = truncate_class(&class, 4, None).unwrap();
    assert_eq!(rows.len(), 3);
    let cap = build_rho_capacity(&class, 4, 1e-9, None).unwrap();
    assert!(cap.converged());
    for n in 1..=4 {
        assert!(cap.result(n).unwrap().capacity <= table_log_cn(&class, n) + 1e-6);
    }

    let covers: Vec<_> = (1..=5).map(|n| greedy_cover(&members, &nml.predictor, n).unwrap()).collect();
    let gamma = gamma_prime(&class, 5).unwrap();
    let nu = assemble_nu(&covers, gamma).unwrap();
    let law = distribution(&nu, 5).unwrap();
    // ν_n are sub-probabilities, so ν keeps at least the γ half of the mass
    let mass: f64 = law.iter().sum();
    assert!(mass >= 0.5 - 1e-12 && mass <= 1.0 + 1e-12, "mass {mass}");
    assert!(check_consistency(&nu, 5).unwrap().max_monotone_excess <= 1e-12);
}

fn table_log_cn(class: &ParametricClass, n: usize) -> f64 {
    build_nml_table(class, n).unwrap().log_cn
}

#[test]
fn malformed_class_file_is_rejected() {
    assert!(ParametricClass::parse("bernoulli p=1.5").is_err());
    assert!(ParametricClass::parse("class kind=bernoulli-grid points=0.2,2").is_err());
    assert!(ParametricClass::parse("class kind=nonsense").is_err());
    assert!(ParametricClass::parse("bernoulli p=0.5\nuniform alphabet=3").is_err());
}
