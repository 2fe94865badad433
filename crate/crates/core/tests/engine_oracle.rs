use syzlab_core::koszul::*;
use syzlab_core::{Error, FieldChoice, RingContext};

fn ctx(n: usize, b: i64, d: u32) -> RingContext {
    RingContext::new(n, b, d).unwrap()
}

fn compare_with_oracle(n: usize, b: i64, d: u32, mode: OracleMode) -> usize {
    let c = ctx(n, b, d);
    let table = betti_table(c, FieldChoice::default_prime()).unwrap();
    let mut compared = 0;
    for (p, q) in table_cells(&c) {
        match brute_kpq_with(c, p, q, mode) {
            Ok(v) => {
                assert_eq!(table.get(p, q), v, "({n},{b},{d}) p={p} q={q} {mode:?}");
                compared += 1;
            }
            Err(Error::Budget { .. }) => {}
            Err(e) => panic!("oracle failed: {e}"),
        }
    }
    compared
}

#[test]
fn engine_matches_reduced_oracle() {
    for (n, b, d) in [(1, 0, 3), (1, 1, 3), (1, 0, 4), (1, -1, 4), (2, 0, 2), (2, 1, 2), (2, 0, 3)] {
        let c = compare_with_oracle(n, b, d, OracleMode::Reduced);
        assert!(c > 0, "nothing compared for ({n},{b},{d})");
    }
}

#[test]
fn engine_matches_unreduced_definition() {
    for (n, b, d) in [(1, 0, 3), (1, 1, 3), (1, 0, 4), (2, 0, 2)] {
        let c = compare_with_oracle(n, b, d, OracleMode::Unreduced);
        assert!(c > 0);
    }
}

#[test]
fn differentials_compose_to_zero() {
    for (n, b, d) in [(1, 0, 4), (2, 0, 3), (2, 1, 3), (3, 0, 2)] {
        let c = ctx(n, b, d);
        for (p, q) in table_cells(&c) {
            let s = build_strand(c, p, q, FieldChoice::default_prime()).unwrap();
            assert!(s.is_complex().unwrap(), "({n},{b},{d}) p={p} q={q}");
            assert_eq!(s.cohomology_dim(FieldChoice::default_prime()).unwrap(), kpq_dim(c, p, q, FieldChoice::default_prime()).unwrap());
        }
    }
}

#[test]
fn cell_results_are_consistent() {
    let c = ctx(2, 0, 3);
    let engine = Engine::new(c, EngineConfig::default());
    let f = FieldChoice::default_prime();
    for (p, q) in table_cells(&c) {
        let r = engine.kpq(p, q, f).unwrap();
        assert_eq!(r.value + r.rank_in + r.rank_out, r.middle_dim);
        if p > 0 {
            // the outgoing map of K_{p,q} is the incoming map of K_{p-1,q+1}
            let next = engine.kpq(p - 1, q + 1, f).unwrap();
            if next.middle_dim > 0 && r.middle_dim > 0 {
                assert_eq!(r.rank_out, next.rank_in, "p={p} q={q}");
            }
        }
    }
}

#[test]
fn prime_field_never_undercounts_rationals() {
    for (n, b, d) in [(1, 0, 3), (1, 1, 4), (2, 0, 2)] {
        let c = ctx(n, b, d);
        for (p, q) in table_cells(&c) {
            let over_q = kpq_dim(c, p, q, FieldChoice::Rational).unwrap();
            for prime in [3, 5, 7, 32003] {
                let over_p = kpq_dim(c, p, q, FieldChoice::prime(prime).unwrap()).unwrap();
                assert!(over_p >= over_q, "({n},{b},{d}) p={p} q={q} GF({prime})");
            }
        }
    }
}

#[test]
fn rows_beyond_n_plus_one_vanish() {
    for (n, b, d) in [(1, 0, 3), (1, 2, 3), (2, 0, 3), (2, 2, 2)] {
        let c = ctx(n, b, d);
        let f = FieldChoice::default_prime();
        for q in (n as i64 + 2)..(n as i64 + 4) {
            for p in 0..6 {
                assert_eq!(kpq_dim(c, p, q, f).unwrap(), 0);
            }
        }
    }
}

#[test]
fn multi_prime_table_agrees_with_single_prime() {
    let c = ctx(2, 0, 3);
    let multi = betti_table_multi(c, &[32003, 32009, 32027], &EngineConfig::default()).unwrap();
    assert!(multi.disagreements().is_empty());
    let single = betti_table(c, FieldChoice::default_prime()).unwrap();
    assert_eq!(multi.table.entries().collect::<Vec<_>>(), single.entries().collect::<Vec<_>>());
    assert_eq!(multi.table.field.to_string(), "GF(32003|32009|32027)");
}

#[test]
fn tiny_budget_yields_partial_table() {
    let c = ctx(2, 0, 3);
    let cfg = EngineConfig { max_entries: 200, ..EngineConfig::default() };
    match betti_table_with(c, FieldChoice::default_prime(), &cfg) {
        Err(TableError::Partial(p)) => {
            assert!(!p.missing.is_empty());
            assert!(!p.completed.is_empty());
            for &(p_, q) in &p.completed {
                assert_eq!(p.table.get(p_, q), kpq_dim(c, p_, q, FieldChoice::default_prime()).unwrap());
            }
        }
        other => panic!("expected a partial table, got {other:?}"),
    }
}
