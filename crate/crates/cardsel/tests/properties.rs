//! Property tests over randomly generated formulas, networks and constraints.

use std::collections::BTreeMap;

use cardsel::card::emit::{emit_network, Polarity};
use cardsel::card::{encode_atmost, EncodeOptions, Method, Relation};
use cardsel::cnf::{Clause, CnfFormula, Lit, Var};
use cardsel::net::build::{even_columns, mw_sel, oe4_combine, oe4_sel, selection_network, SelMethod};
use cardsel::net::ir::{eval_gate, GateKind};
use cardsel::pb::encode::build_pb_network;
use cardsel::pb::{find_base, to_digits, value_of, DigitPlan, GeConstraint, MixedRadixBase, PbConstraint, PbProblem};
use cardsel::solve::{minimize, DpllBackend, MinimizeConfig, MinimizeStatus, Strategy as Search};
use cardsel::up::{dpll_sat, unit_propagate, UpStatus};
use cardsel::verify::{combine_reference, Precondition};
use proptest::prelude::*;
use proptest::sample::select;

fn network_methods() -> Vec<SelMethod> {
    Method::ALL
        .into_iter()
        .filter_map(|m| match m {
            Method::Network(s) => Some(s),
            _ => None,
        })
        .collect()
}

fn inputs(n: usize) -> Vec<Lit> {
    (1..=n as Var).map(Lit::pos).collect()
}

fn model_of(bits: &[bool]) -> Vec<bool> {
    let mut m = vec![false];
    m.extend_from_slice(bits);
    m
}

fn all_models(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1u64 << n).map(move |v| model_of(&(0..n).map(|i| v >> i & 1 == 1).collect::<Vec<_>>()))
}

/// A literal over `1..=n` or a constant.
fn any_lit(n: Var) -> impl Strategy<Value = Lit> {
    prop_oneof![
        8 => (1..=n, any::<bool>()).prop_map(|(v, s)| Lit::new(v, s)),
        1 => any::<bool>().prop_map(Lit::constant),
    ]
}

fn raw_clauses(n: Var, max: usize) -> impl Strategy<Value = Vec<Vec<Lit>>> {
    prop::collection::vec(prop::collection::vec(any_lit(n), 0..5), 0..max)
}

/// Test-only DIMACS reader: clauses as sorted integer lists.
fn read_dimacs(text: &str) -> (i64, Vec<Vec<i64>>) {
    let mut header = 0;
    let mut clauses = Vec::new();
    let mut cur = Vec::new();
    for line in text.lines() {
        if line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf") {
            header = rest.split_whitespace().next().unwrap().parse().unwrap();
            continue;
        }
        for tok in line.split_whitespace() {
            match tok.parse::<i64>().unwrap() {
                0 => {
                    cur.sort_unstable();
                    clauses.push(std::mem::take(&mut cur));
                }
                d => cur.push(d),
            }
        }
    }
    (header, clauses)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn negation_is_an_involution(v in 1u32..1000, s: bool) {
        let l = Lit::new(v, s);
        prop_assert_eq!(!!l, l);
        prop_assert_ne!(!l, l);
        prop_assert_eq!(l.var(), Some(v));
        prop_assert_eq!(Lit::TRUE, !Lit::FALSE);
    }

    #[test]
    fn dimacs_round_trip(clauses in raw_clauses(12, 30)) {
        let mut f = CnfFormula::with_vars(12);
        for c in &clauses {
            f.add_clause(c);
        }
        let (nv, read) = read_dimacs(&f.to_dimacs());
        prop_assert_eq!(nv, 12);
        let mut want: Vec<Vec<i64>> = f
            .clauses()
            .iter()
            .map(|c| {
                let mut v: Vec<i64> = c.lits().iter().map(|l| l.to_dimacs() as i64).collect();
                v.sort_unstable();
                v
            })
            .collect();
        if f.is_trivially_unsat() {
            want = vec![vec![1], vec![-1]];
        }
        let mut read = read;
        read.sort();
        want.sort();
        prop_assert_eq!(read, want);
    }

    #[test]
    fn add_clause_keeps_variables_and_fresh_var_keeps_clauses(clauses in raw_clauses(8, 10), extra in 0usize..5) {
        let mut f = CnfFormula::with_vars(8);
        for c in &clauses {
            let before = f.next_var();
            f.add_clause(c);
            prop_assert_eq!(f.next_var(), before);
        }
        let count = f.num_clauses();
        for _ in 0..extra {
            f.fresh_var();
        }
        prop_assert_eq!(f.num_clauses(), count);
        prop_assert_eq!(f.num_vars(), 8 + extra as Var);
    }

    #[test]
    fn simplification_is_sound(clauses in raw_clauses(10, 12)) {
        let mut f = CnfFormula::with_vars(10);
        for c in &clauses {
            f.add_clause(c);
        }
        for c in f.clauses() {
            prop_assert!(c.lits().iter().all(|l| !l.is_const()));
        }
        for m in all_models(10) {
            let raw = clauses.iter().all(|c| c.iter().any(|l| l.eval(&m)));
            prop_assert_eq!(f.eval(&m), raw);
        }
    }

    #[test]
    fn clause_simplify_drops_tautologies(lits in prop::collection::vec(any_lit(4), 0..6)) {
        let has_true = lits.iter().any(|l| l.const_value() == Some(true));
        let taut = lits.iter().any(|&l| !l.is_const() && lits.contains(&!l));
        match Clause::simplify(&lits) {
            None => prop_assert!(has_true || taut),
            Some(c) => {
                prop_assert!(!has_true && !taut);
                let mut sorted = c.lits().to_vec();
                sorted.sort();
                sorted.dedup();
                prop_assert_eq!(sorted.len(), c.len());
            }
        }
    }

    #[test]
    fn selection_networks_sort_the_top(
        method in select(network_methods()),
        n in 1usize..=16,
        k_seed: usize,
        input in prop::collection::vec(any::<bool>(), 16),
        mixing in prop_oneof![Just(None), Just(Some(5.0))],
    ) {
        let k = 1 + k_seed % n;
        let net = selection_network(method, n, k, mixing).unwrap();
        let x = &input[..n];
        let y = net.eval(x).unwrap();
        let ones = x.iter().filter(|&&b| b).count();
        prop_assert_eq!(y.iter().filter(|&&b| b).count(), ones);
        for (i, &b) in y.iter().take(k).enumerate() {
            prop_assert_eq!(b, i < ones);
        }
    }

    #[test]
    fn selector_on_sorted_input_returns_prefix(n in 1usize..=8, m_seed: usize, ones_seed: usize) {
        let m = 1 + m_seed % n;
        let ones = ones_seed % (n + 1);
        let x: Vec<bool> = (0..n).map(|i| i < ones).collect();
        let y = eval_gate(GateKind::Selector { n, m }, &x);
        prop_assert_eq!(&y[..m], &x[..m]);
    }

    #[test]
    fn cnf_cost_matches_emitted_encoding(method in select(network_methods()), n in 2usize..=24, k_seed: usize) {
        let k = k_seed % (n - 1) + 1;
        let net = selection_network(method, n, k + 1, None).unwrap();
        let (v, c) = net.cnf_cost();
        let mut f = CnfFormula::with_vars(n as Var);
        let opts = EncodeOptions { direct_mixing: false, ..EncodeOptions::with_method(Method::Network(method)) };
        let enc = encode_atmost(&mut f, &inputs(n), k, &opts).unwrap();
        let unit = usize::from(!enc.output_lits[k].is_const());
        prop_assert_eq!(f.num_vars() as usize - n, v);
        prop_assert_eq!(f.num_clauses(), c + unit);
    }

    #[test]
    fn combine_matches_two_layer_semantics(x_len in 0usize..=8, y_len in 0usize..=8, xo: usize, yo: usize) {
        let pre = Precondition::CombineCounts { x_len, y_len };
        let x_ones = xo % (x_len + 1);
        let y_ones = yo % (y_len + 1);
        let mut input: Vec<bool> = (0..x_len).map(|i| i < x_ones).collect();
        input.extend((0..y_len).map(|i| i < y_ones));
        prop_assume!(pre.admits(&input));
        let fused = oe4_combine(x_len, y_len).eval(&input).unwrap();
        let reference = combine_reference(x_len, y_len).eval(&input).unwrap();
        prop_assert_eq!(fused, reference);
    }

    #[test]
    fn unit_propagation_is_confluent(
        method in select(Method::ALL.to_vec()),
        n in 2usize..=8,
        k_seed: usize,
        seed_lits in prop::collection::vec((0usize..8, any::<bool>()), 0..6),
        rotate: usize,
    ) {
        let k = k_seed % n;
        let mut f = CnfFormula::with_vars(n as Var);
        encode_atmost(&mut f, &inputs(n), k, &EncodeOptions::with_method(method)).unwrap();
        let seed: Vec<Lit> = seed_lits.iter().map(|&(i, s)| Lit::new((i % n) as Var + 1, s)).collect();
        let mut other = seed.clone();
        other.reverse();
        if !other.is_empty() {
            let r = rotate % other.len();
            other.rotate_left(r);
        }
        let a = unit_propagate(&f, &seed);
        let b = unit_propagate(&f, &other);
        prop_assert_eq!(a.status, b.status);
        if a.status == UpStatus::Fixpoint {
            for v in 1..=f.num_vars() {
                prop_assert_eq!(a.assignment.value(Lit::pos(v)), b.assignment.value(Lit::pos(v)));
            }
        } else {
            let clause = a.conflict_clause.clone().unwrap_or_default();
            prop_assert!(clause.iter().all(|&l| a.assignment.value(l) == Some(false)));
        }
        let mut seen = std::collections::HashSet::new();
        for (l, _) in a.assignment.trail() {
            prop_assert!(seen.insert(l.var()));
        }
    }

    #[test]
    fn all_methods_agree_with_binomial(
        method in select(Method::ALL.to_vec()),
        n in 1usize..=7,
        k_seed: usize,
        fixing in prop::collection::vec(prop_oneof![Just(None), Just(Some(false)), Just(Some(true))], 7),
    ) {
        let k = k_seed % n;
        let sat = |m: Method| {
            let mut f = CnfFormula::with_vars(n as Var);
            encode_atmost(&mut f, &inputs(n), k, &EncodeOptions::with_method(m)).unwrap();
            let a: Vec<Lit> = (0..n).filter_map(|i| fixing[i].map(|b| Lit::new(i as Var + 1, b))).collect();
            dpll_sat(&f, &a).is_some()
        };
        prop_assert_eq!(sat(method), sat(Method::Binomial));
    }

    #[test]
    fn digits_round_trip(v in 0u64..1_000_000, radices in prop::collection::vec(2u64..12, 0..5)) {
        let base = MixedRadixBase::new(radices);
        let d = to_digits(v, &base);
        prop_assert_eq!(d.len(), base.len() + 1);
        for (i, &r) in base.radices().iter().enumerate() {
            prop_assert!(d[i] < r);
        }
        prop_assert_eq!(value_of(&d, &base), Some(v));
        prop_assert!(base.weights().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn digit_plan_accounts_for_every_coefficient(coeffs in prop::collection::vec(1u64..=60, 1..8), k_frac in 0.0f64..1.0) {
        let total: u64 = coeffs.iter().sum();
        let k = 1 + ((total - 1) as f64 * k_frac) as u64;
        let terms = coeffs.iter().enumerate().map(|(i, &a)| (a, Lit::pos(i as Var + 1))).collect();
        let c = GeConstraint { terms, k };
        let plan = DigitPlan::new(&c, find_base(&coeffs));
        prop_assert_eq!(plan.weighted_total(), total + plan.const_add);
        prop_assert_eq!(plan.k_prime % plan.base.top_weight(), 0);
        prop_assert!(plan.const_add < plan.base.top_weight());
    }

    #[test]
    fn carries_reach_the_top_position(
        coeffs in prop::collection::vec(1u64..=20, 1..6),
        k_frac in 0.0f64..1.0,
        bits in prop::collection::vec(any::<bool>(), 6),
    ) {
        let total: u64 = coeffs.iter().sum();
        let k = 1 + ((total - 1) as f64 * k_frac) as u64;
        let terms = coeffs.iter().enumerate().map(|(i, &a)| (a, Lit::pos(i as Var + 1))).collect();
        let c = GeConstraint { terms, k };
        let plan = DigitPlan::new(&c, find_base(&coeffs));
        let pbn = build_pb_network(&plan, &EncodeOptions::default(), false).unwrap();
        let model = model_of(&bits);
        let x: Vec<bool> = pbn.inputs.iter().map(|l| l.eval(&model)).collect();
        let top = pbn.net.eval(&x).unwrap().iter().filter(|&&b| b).count() as u64;
        let lhs: u64 = coeffs.iter().zip(&bits).filter(|(_, &b)| b).map(|(&a, _)| a).sum();
        prop_assert_eq!(top, (lhs + plan.const_add) / plan.base.top_weight());
    }
}

fn small_problem() -> impl Strategy<Value = PbProblem> {
    let term = (1i64..=6, any::<bool>());
    (2usize..=6)
        .prop_flat_map(move |n| {
            (
                Just(n),
                prop::collection::vec((prop::collection::vec(term.clone(), n), select(vec![Relation::Ge, Relation::Le]), 0i64..12), 1..3),
                prop::collection::vec(-2i64..=9, n),
            )
        })
        .prop_map(|(n, cons, obj)| {
            let mut p = PbProblem::default();
            let vars: Vec<Var> = (1..=n).map(|i| p.var_names.intern(&format!("v{i}"))).collect();
            for (terms, rel, k) in cons {
                let terms = terms.iter().zip(&vars).map(|(&(a, s), &v)| (a, Lit::new(v, s))).collect();
                p.constraints.push(PbConstraint { terms, rel, k });
            }
            p.objective = Some(obj.iter().zip(&vars).filter(|(a, _)| **a != 0).map(|(&a, &v)| (a, Lit::pos(v))).collect());
            p
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimization_is_monotone_and_strategies_agree(p in small_problem(), switch_gap in select(vec![1i64, 4, 96])) {
        let mut results = BTreeMap::new();
        for strategy in [Search::Sequential, Search::Binary] {
            let cfg = MinimizeConfig { strategy, switch_gap, ..MinimizeConfig::default() };
            let out = minimize(&p, &EncodeOptions::default(), &cfg, &mut DpllBackend).unwrap();
            prop_assert!(out.incumbents.windows(2).all(|w| w[0] > w[1]));
            if out.status == MinimizeStatus::Optimal {
                let best = out.best.unwrap();
                prop_assert_eq!(out.incumbents.last(), Some(&best));
                prop_assert!(out.lower <= best);
                let w = out.witness.as_ref().unwrap();
                prop_assert!(p.constraints.iter().all(|c| c.holds(w)));
            }
            results.insert(format!("{strategy:?}"), (out.status, out.best));
        }
        let v: Vec<_> = results.values().collect();
        prop_assert_eq!(v[0], v[1]);
    }

    #[test]
    fn dpll_agrees_with_truth_tables(n in 1u32..=18, clauses in prop::collection::vec(prop::collection::vec((0u32..18, any::<bool>()), 1..4), 1..60)) {
        let mut f = CnfFormula::with_vars(n);
        let raw: Vec<Vec<Lit>> = clauses.iter().map(|c| c.iter().map(|&(v, s)| Lit::new(v % n + 1, s)).collect()).collect();
        for c in &raw {
            f.add_clause(c);
        }
        let model = dpll_sat(&f, &[]);
        if let Some(m) = &model {
            prop_assert!(f.eval(m));
        }
        let brute = (0..1u64 << n).any(|v| {
            raw.iter().all(|c| c.iter().any(|l| (v >> (l.var().unwrap() - 1) & 1 == 1) == l.is_positive()))
        });
        prop_assert_eq!(model.is_some(), brute);
    }
}

#[test]
fn four_column_selectors_accept_any_order() {
    for n in 1usize..=16 {
        for k in 1..=n {
            let net = oe4_sel(n, k).unwrap_or_else(|e| panic!("oe4_sel({n},{k}): {e}"));
            assert_eq!(net.num_inputs(), n);
            let net = mw_sel(n, k, even_columns(n)).unwrap_or_else(|e| panic!("mw_sel({n},{k}): {e}"));
            assert_eq!(net.num_inputs(), n);
        }
    }
}

#[test]
fn builders_are_deterministic() {
    for method in network_methods() {
        let a = selection_network(method, 37, 9, Some(5.0)).unwrap();
        let b = selection_network(method, 37, 9, Some(5.0)).unwrap();
        assert_eq!(a, b);
        let emit = |net: &cardsel::net::ir::Network| {
            let mut f = CnfFormula::with_vars(37);
            emit_network(&mut f, net, &inputs(37), Polarity::Up, 9);
            f.to_dimacs()
        };
        assert_eq!(emit(&a), emit(&b));
    }
}
