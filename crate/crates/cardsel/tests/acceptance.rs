//! Acceptance suite: one pass/fail line per criterion. Expected values are
//! either published sizes or come from the brute-force oracles below.

use std::time::Instant;

use cardsel::card::emit::{emit_combine, emit_network, Polarity};
use cardsel::card::{encode_atmost, EncodeOptions, Method};
use cardsel::cnf::{CnfFormula, Lit, Var};
use cardsel::cnfp::{encode_cnfp, queens};
use cardsel::net::build::{
    bit_sel, bitonic_merge, fourw_merge_main_loop, m_oe_sel, oe4_combine, oe4_merge, oe4_sel, oe_merge2, oe_sort,
    pw_merge, pw_sel, PwVariant,
};
use cardsel::net::ir::{GateKind, Network};
use cardsel::pb::{encode_pb, encode_pb_constraint, find_base, to_digits, GeConstraint, MixedRadixBase, PbConstraint, PbProblem};
use cardsel::card::Relation;
use cardsel::solve::{minimize, next_binary_bound, DpllBackend, MinimizeConfig, MinimizeStatus, Strategy};
use cardsel::up::{dpll_sat, unit_propagate, UpStatus};
use cardsel::verify::{combine_reference, zero_one_catalog, Precondition};
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn log2(n: usize) -> usize {
    n.trailing_zeros() as usize
}

fn bits(v: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| v >> i & 1 == 1).collect()
}

fn input_lits(n: usize) -> Vec<Lit> {
    (1..=n as Var).map(Lit::pos).collect()
}

fn fixing(x: &[bool]) -> Vec<Lit> {
    x.iter().enumerate().map(|(i, &b)| Lit::new(i as Var + 1, b)).collect()
}

/// 2-sorters of a pure comparator network; other gates are an error.
fn sorters2(net: &Network) -> Result<usize, String> {
    net.gates()
        .iter()
        .map(|g| match g.kind {
            GateKind::Selector { n: 2, .. } => Ok(1),
            other => Err(format!("unexpected gate {other:?}")),
        })
        .sum()
}

fn network_options() -> Vec<(String, EncodeOptions)> {
    Method::ALL
        .into_iter()
        .filter(|m| m.is_network())
        .flat_map(|m| {
            [
                (format!("{m} plain"), EncodeOptions { direct_mixing: false, ..EncodeOptions::with_method(m) }),
                (format!("{m} mixed"), EncodeOptions::with_method(m)),
            ]
        })
        .collect()
}

// 1. Every construction sorts the top k of every admissible 0-1 input.
fn zero_one() -> Outcome {
    let catalog = zero_one_catalog(12);
    let required = [
        "oe_sort",
        "oe_merge2",
        "bitonic_merge",
        "half_bitonic_merge",
        "bit_sel",
        "pw_merge",
        "pw_sel",
        "mw_sel",
        "fourw_merge",
        "oe4_combine",
        "oe4_merge",
        "oe4_sel",
        "m_oe_sel",
    ];
    for fam in required {
        ensure(catalog.iter().any(|i| i.family == fam), || format!("family {fam} missing"))?;
    }
    let mut inputs = 0usize;
    for inst in &catalog {
        let n = inst.net.num_inputs();
        let k = inst.net.k();
        let mut admitted = 0;
        for v in 0..1u64 << n {
            let x = bits(v, n);
            if !inst.pre.admits(&x) {
                continue;
            }
            admitted += 1;
            let y = inst.net.eval(&x).map_err(|e| e.to_string())?;
            let mut want = x.clone();
            want.sort_by(|a, b| b.cmp(a));
            let mut got = y.clone();
            got.sort_by(|a, b| b.cmp(a));
            ensure(got == want && y[..k] == want[..k], || {
                format!("{} {}: input {x:?} gave {y:?}", inst.family, inst.label)
            })?;
        }
        ensure(admitted > 0 || matches!(inst.pre, Precondition::Any) && n == 0, || {
            format!("{} {}: no admissible input", inst.family, inst.label)
        })?;
        inputs += admitted;
    }
    Ok(format!("{} networks, {inputs} inputs", catalog.len()))
}

// 2. Exact 2-sorter counts.
fn exact_sizes() -> Outcome {
    for n in [2usize, 4, 8, 16, 32] {
        let l = log2(n);
        let want = n * l * (l - 1) / 4 + n - 1;
        let got = sorters2(&oe_sort(n).map_err(|e| e.to_string())?)?;
        ensure(got == want, || format!("oe_sort({n}) = {got}, want {want}"))?;
        let want = n * l / 2;
        let got = sorters2(&bitonic_merge(n, false).map_err(|e| e.to_string())?)?;
        ensure(got == want, || format!("bit_merge({n}) = {got}, want {want}"))?;
    }
    for k in [2usize, 4, 8, 16] {
        let l = log2(k);
        let got = sorters2(&pw_merge(2 * k, k, PwVariant::Classic).map_err(|e| e.to_string())?)?;
        ensure(got == k * l - k + 1, || format!("pw_merge classic k={k} = {got}"))?;
        let got = sorters2(&pw_merge(2 * k, k, PwVariant::HalfBitonic).map_err(|e| e.to_string())?)?;
        ensure(got == k * l / 2, || format!("pw_hbit_merge k={k} = {got}"))?;
    }
    let published = [
        ("oe_sort(8)", sorters2(&oe_sort(8).unwrap())?, 19),
        ("oe_sort(16)", sorters2(&oe_sort(16).unwrap())?, 63),
        ("pw_merge k=4", sorters2(&pw_merge(8, 4, PwVariant::Classic).unwrap())?, 5),
        ("pw_hbit_merge k=8", sorters2(&pw_merge(16, 8, PwVariant::HalfBitonic).unwrap())?, 12),
        ("bit_merge(8)", sorters2(&bitonic_merge(8, false).unwrap())?, 12),
        ("bit_sel(8,2)", sorters2(&bit_sel(8, 2).unwrap())?, 13),
    ];
    for (what, got, want) in published {
        ensure(got == want, || format!("{what} = {got}, want {want}"))?;
    }
    Ok("oe_sort 19/63, pw_merge 5, pw_hbit 12, bit_merge 12, bit_sel 13".into())
}

// 3. Saving of the half-bitonic pairwise selector at k = n/2.
fn half_bitonic_saving() -> Outcome {
    let mut got = Vec::new();
    for big_n in [8usize, 16, 32] {
        let classic = sorters2(&pw_sel(big_n, big_n / 2, PwVariant::Classic).map_err(|e| e.to_string())?)?;
        let half = sorters2(&pw_sel(big_n, big_n / 2, PwVariant::HalfBitonic).map_err(|e| e.to_string())?)?;
        got.push(classic as i64 - half as i64);
    }
    ensure(got == [1, 6, 23], || format!("savings {got:?}, want [1, 6, 23]"))?;
    Ok(format!("savings {got:?}"))
}

// 4. Merger emission costs.
fn merger_costs() -> Outcome {
    for (k, want) in [(2usize, (6, 9)), (4, (18, 27)), (8, (50, 75))] {
        let got = oe_merge2(2 * k).map_err(|e| e.to_string())?.cnf_cost();
        ensure(got == want, || format!("oe2 merger k={k}: {got:?}, want {want:?}"))?;
    }
    let mut seen = Vec::new();
    for k in [4usize, 8, 16] {
        let (v, c) = oe4_merge(&[k; 4], k).map_err(|e| e.to_string())?.cnf_cost();
        let l = log2(k);
        let v_max = (k - 2) * l + 5 * k - 1;
        // (5/2 k - 5) log k + 21k - 6, doubled to stay integral.
        let c_max2 = (5 * k - 10) * l + 42 * k - 12;
        ensure(v <= v_max && 2 * c <= c_max2, || {
            format!("oe4 merger k={k}: ({v}, {c}) exceeds ({v_max}, {})", c_max2 as f64 / 2.0)
        })?;
        seen.push((v, c));
    }
    Ok(format!("oe2 (6,9) (18,27) (50,75); oe4 {seen:?} within bounds"))
}

// 5. Encodings are satisfiable exactly under fixings with at most k ones.
fn equisat() -> Outcome {
    let mut cells = network_options();
    cells.extend(Method::ALL.into_iter().filter(|m| !m.is_network()).map(|m| (m.to_string(), EncodeOptions::with_method(m))));
    let mut checked = 0usize;
    for (name, opts) in &cells {
        for n in 1..=8usize {
            for k in 0..n {
                let mut f = CnfFormula::with_vars(n as Var);
                encode_atmost(&mut f, &input_lits(n), k, opts).map_err(|e| e.to_string())?;
                for v in 0..1u64 << n {
                    let x = bits(v, n);
                    let sat = dpll_sat(&f, &fixing(&x)).is_some();
                    let want = x.iter().filter(|&&b| b).count() <= k;
                    ensure(sat == want, || format!("{name} n={n} k={k} fixing {x:?}: sat={sat}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{} encoders, {checked} fixings", cells.len()))
}

// 6. Arc-consistency and forward propagation by unit propagation alone.
fn arc_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut scenarios_checked = 0usize;
    for (name, opts) in network_options() {
        for n in 1..=10usize {
            let lits = input_lits(n);
            for k in 0..n {
                let mut f = CnfFormula::with_vars(n as Var);
                let enc = encode_atmost(&mut f, &lits, k, &opts).map_err(|e| e.to_string())?;
                let scenarios: Vec<Vec<usize>> = if n <= 8 {
                    (0..n).combinations(k).collect()
                } else {
                    (0..200).map(|_| rand::seq::index::sample(&mut rng, n, k).into_vec()).collect()
                };
                for sc in scenarios {
                    let seed: Vec<Lit> = sc.iter().map(|&i| lits[i]).collect();
                    let r = unit_propagate(&f, &seed);
                    ensure(r.status == UpStatus::Fixpoint, || format!("{name} n={n} k={k} {sc:?}: conflict"))?;
                    for j in (0..n).filter(|j| !sc.contains(j)) {
                        ensure(r.assignment.value(lits[j]) == Some(false), || {
                            format!("{name} n={n} k={k} {sc:?}: input {j} not forced false")
                        })?;
                        let mut more = seed.clone();
                        more.push(lits[j]);
                        ensure(unit_propagate(&f, &more).status == UpStatus::Conflict, || {
                            format!("{name} n={n} k={k} {sc:?} + {j}: no conflict")
                        })?;
                    }
                    for i in 1..=k {
                        let r = unit_propagate(&f, &seed[..i]);
                        for (o, &y) in enc.output_lits.iter().take(i).enumerate() {
                            ensure(r.assignment.value(y) == Some(true), || {
                                format!("{name} n={n} k={k} prefix {:?}: y{} not set", &sc[..i], o + 1)
                            })?;
                        }
                    }
                    scenarios_checked += 1;
                }
            }
        }
    }
    Ok(format!("{scenarios_checked} scenarios"))
}

fn emit_fresh(net: &Network, polarity: Polarity) -> (CnfFormula, Vec<Lit>) {
    let n = net.num_inputs();
    let mut f = CnfFormula::with_vars(n as Var);
    let outs = emit_network(&mut f, net, &input_lits(n), polarity, net.outputs().len());
    (f, outs)
}

fn sat_with(f: &CnfFormula, fixing: &[Lit], extra: Lit) -> bool {
    match extra.const_value() {
        Some(v) => v && dpll_sat(f, fixing).is_some(),
        None => {
            let mut a = fixing.to_vec();
            a.push(extra);
            dpll_sat(f, &a).is_some()
        }
    }
}

// 7. Fused combine clauses against the two-layer comparator reference.
fn fused_combine() -> Outcome {
    for polarity in [Polarity::Up, Polarity::Down] {
        let mut f = CnfFormula::with_vars(6);
        let ins: [Lit; 6] = std::array::from_fn(|i| Lit::pos(i as Var + 1));
        emit_combine(&mut f, &ins, &[true, true], polarity);
        let cost = (f.num_vars() - 6, f.num_clauses());
        ensure(cost == (2, 5), || format!("interior pair {polarity:?}: {cost:?} (vars, clauses)"))?;
    }
    let mut cases = 0usize;
    for x_len in 0..=10usize {
        for y_len in 0..=10 - x_len {
            let t = x_len + y_len;
            let pre = Precondition::CombineCounts { x_len, y_len };
            let fused = oe4_combine(x_len, y_len);
            let reference = combine_reference(x_len, y_len);
            for polarity in [Polarity::Up, Polarity::Down] {
                let (ff, fo) = emit_fresh(&fused, polarity);
                let (rf, ro) = emit_fresh(&reference, polarity);
                ensure(fo.len() == ro.len(), || format!("|x|={x_len} |y|={y_len}: output count differs"))?;
                for v in 0..1u64 << t {
                    let x = bits(v, t);
                    if !pre.admits(&x) {
                        continue;
                    }
                    let fx = fixing(&x);
                    for o in 0..fo.len() {
                        for val in [false, true] {
                            let a = sat_with(&ff, &fx, if val { fo[o] } else { !fo[o] });
                            let b = sat_with(&rf, &fx, if val { ro[o] } else { !ro[o] });
                            ensure(a == b, || {
                                format!("|x|={x_len} |y|={y_len} {polarity:?} {x:?} output {o}={val}: fused {a} reference {b}")
                            })?;
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("interior pair 5 clauses / 2 vars; {cases} fixings agree"))
}

// 8. 4-wise merger halving-loop sorter counts within 10%.
fn fourw_table() -> Outcome {
    let mut worst = 0f64;
    for k in [16usize, 32, 64] {
        let h = fourw_merge_main_loop([k, k / 2, k / 3, k / 4], k).map_err(|e| e.to_string())?.gate_histogram();
        let (s2, s3, s4) = (h.of_order(2) as f64, h.of_order(3) as f64, h.of_order(4) as f64);
        let (kf, l) = (k as f64, (k as f64).log2());
        let rows = [
            ("2-sorters", s2, 13.0 * kf / 12.0 - 1.0),
            ("3-sorters", s3, kf / 2.0 - 1.0),
            ("4-sorters", s4, kf / 4.0 * l - 13.0 * kf / 24.0),
            ("V", 2.0 * s2 + 3.0 * s3 + 4.0 * s4, kf * l + 7.0 * kf / 6.0 - 5.0),
        ];
        for (what, got, want) in rows {
            let rel = (got - want).abs() / want;
            worst = worst.max(rel);
            ensure(rel <= 0.10, || format!("k={k} {what}: counted {got}, closed form {want:.2} ({:.1}%)", rel * 100.0))?;
        }
    }
    Ok(format!("worst deviation {:.1}%", worst * 100.0))
}

/// Every radix list of primes below 50 whose product stays within `max`.
fn all_bases(max: u64) -> Vec<Vec<u64>> {
    const P: [u64; 15] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::new(), 1u64)];
    while let Some((radices, w)) = frontier.pop() {
        for p in P.into_iter().filter(|&p| w * p <= max) {
            let mut r: Vec<u64> = radices.clone();
            r.push(p);
            out.push(r.clone());
            frontier.push((r, w * p));
        }
    }
    out
}

fn digit_sum_cost(coeffs: &[u64], radices: &[u64]) -> u64 {
    coeffs
        .iter()
        .map(|&c| {
            let mut v = c;
            let mut s = 0;
            for &r in radices {
                s += v % r;
                v /= r;
            }
            s + v
        })
        .sum()
}

// 9. Mixed-radix digits and the optimal base search.
fn mixed_radix() -> Outcome {
    let d = to_digits(164, &MixedRadixBase::new(vec![3, 5]));
    ensure(d == [2, 4, 10], || format!("to_digits(164, <3,5>) = {d:?}"))?;
    let coeffs = [2u64, 2, 2, 2, 5, 18];
    let b = find_base(&coeffs);
    let cost = digit_sum_cost(&coeffs, b.radices());
    ensure(cost <= 8, || format!("find_base{coeffs:?} = {:?} costs {cost}", b.radices()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..50 {
        let len = rng.gen_range(1..=8);
        let mut cs: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=60)).collect();
        if case % 5 == 0 {
            cs.push(60);
        }
        let max = *cs.iter().max().unwrap();
        let best = all_bases(max).iter().map(|r| digit_sum_cost(&cs, r)).min().unwrap();
        let found = find_base(&cs);
        let got = digit_sum_cost(&cs, found.radices());
        ensure(found.weights().iter().all(|&w| w <= max), || format!("{cs:?}: base {:?} too large", found.radices()))?;
        ensure(got == best, || format!("{cs:?}: find_base {:?} costs {got}, optimum {best}", found.radices()))?;
    }
    Ok(format!("<2,4,10>; cost {cost} on {coeffs:?}; 50 random sets optimal"))
}

fn random_ge(rng: &mut ChaCha8Rng, n: usize) -> PbConstraint {
    let terms: Vec<(i64, Lit)> =
        (1..=n as Var).map(|v| (rng.gen_range(1..=20), Lit::new(v, rng.gen_bool(0.7)))).collect();
    let total: i64 = terms.iter().map(|t| t.0).sum();
    PbConstraint { terms, rel: Relation::Ge, k: rng.gen_range(0..=total + 2) }
}

// 10. PB encodings against arithmetic, and the worked base example.
fn pb_end_to_end() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let methods: Vec<EncodeOptions> = network_options().into_iter().map(|(_, o)| o).collect();
    for case in 0..200 {
        let n = rng.gen_range(1..=8);
        let c = random_ge(&mut rng, n);
        let opts = methods[case % methods.len()];
        let mut f = CnfFormula::with_vars(n as Var);
        encode_pb_constraint(&mut f, &c, &opts).map_err(|e| e.to_string())?;
        for v in 0..1u64 << n {
            let x = bits(v, n);
            let mut model = vec![false];
            model.extend(&x);
            let lhs: i64 = c.terms.iter().filter(|(_, l)| l.eval(&model)).map(|t| t.0).sum();
            let sat = dpll_sat(&f, &fixing(&x)).is_some();
            ensure(sat == (lhs >= c.k), || format!("case {case} {c:?} ({}) fixing {x:?}: sat={sat}", opts.method))?;
        }
    }
    let mut f = CnfFormula::with_vars(2);
    let ge = GeConstraint { terms: vec![(5, Lit::pos(1)), (7, Lit::pos(2))], k: 9 };
    let enc = encode_pb(&mut f, &ge, Some(MixedRadixBase::new(vec![2, 2])), &EncodeOptions::default())
        .map_err(|e| e.to_string())?;
    ensure(enc.plan.const_add == 3 && enc.plan.k_prime == 12, || {
        format!("const_add {} k' {}", enc.plan.const_add, enc.plan.k_prime)
    })?;
    let top_units: Vec<Lit> = f
        .clauses()
        .iter()
        .filter(|cl| cl.len() == 1 && enc.top_outputs.contains(&cl.lits()[0]))
        .map(|cl| cl.lits()[0])
        .collect();
    ensure(top_units.len() == 1, || format!("top assertion units {top_units:?}"))?;
    ensure(top_units[0] == enc.top_outputs[2], || "assertion is not on the third top output".into())?;
    Ok("200 random constraints; const_add 3, k' 12, one top unit".into())
}

fn random_problem(rng: &mut ChaCha8Rng) -> PbProblem {
    let n = rng.gen_range(2..=7);
    let mut p = PbProblem::default();
    let vars: Vec<Var> = (1..=n).map(|i| p.var_names.intern(&format!("x{i}"))).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let mut terms: Vec<(i64, Lit)> = Vec::new();
        for &v in vars.iter().filter(|_| rng.gen_bool(0.7)).collect::<Vec<_>>() {
            let sign = if rng.gen_bool(0.8) { 1 } else { -1 };
            terms.push((rng.gen_range(1..=9) * sign, Lit::new(v, rng.gen_bool(0.7))));
        }
        let rel = [Relation::Ge, Relation::Le, Relation::Eq][rng.gen_range(0..3)];
        let span: i64 = terms.iter().map(|t| t.0.abs()).sum();
        p.constraints.push(PbConstraint { k: rng.gen_range(-2..=span / 2 + 1), terms, rel });
    }
    let objective = vars
        .iter()
        .map(|&v| (if rng.gen_bool(0.3) { 1 } else { rng.gen_range(-3..=12) }, Lit::new(v, rng.gen_bool(0.8))))
        .filter(|t| t.0 != 0)
        .collect();
    p.objective = Some(objective);
    p
}

/// Exhaustive optimum, `None` when infeasible.
fn brute_optimum(p: &PbProblem) -> Option<i64> {
    let n = p.var_names.len();
    (0..1u64 << n)
        .filter_map(|v| {
            let mut model = vec![false];
            model.extend(bits(v, n));
            let feasible = p.constraints.iter().all(|c| {
                let lhs: i64 = c.terms.iter().filter(|(_, l)| l.eval(&model)).map(|t| t.0).sum();
                match c.rel {
                    Relation::Ge => lhs >= c.k,
                    Relation::Gt => lhs > c.k,
                    Relation::Le => lhs <= c.k,
                    Relation::Lt => lhs < c.k,
                    Relation::Eq => lhs == c.k,
                }
            });
            feasible.then(|| p.objective.as_ref().unwrap().iter().filter(|(_, l)| l.eval(&model)).map(|t| t.0).sum())
        })
        .min()
}

// 11. Both minimization strategies reach the exhaustive optimum.
fn optimization() -> Outcome {
    ensure(next_binary_bound(10, 0, 3) == 6, || format!("next bound {}", next_binary_bound(10, 0, 3)))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut feasible = 0;
    for case in 0..50 {
        let p = random_problem(&mut rng);
        let want = brute_optimum(&p);
        feasible += want.is_some() as usize;
        for (strategy, switch_gap) in [(Strategy::Sequential, 96), (Strategy::Binary, 96), (Strategy::Binary, 1)] {
            let cfg = MinimizeConfig { strategy, q: 3, switch_gap, ..MinimizeConfig::default() };
            let out = minimize(&p, &EncodeOptions::default(), &cfg, &mut DpllBackend).map_err(|e| e.to_string())?;
            match want {
                None => ensure(out.status == MinimizeStatus::Infeasible, || format!("case {case}: {:?}", out.status))?,
                Some(best) => {
                    ensure(out.status == MinimizeStatus::Optimal && out.best == Some(best), || {
                        format!("case {case} {strategy:?}/{switch_gap}: got {:?} {:?}, want {best}", out.status, out.best)
                    })?;
                    let w = out.witness.as_ref().ok_or("optimum without witness")?;
                    let value: i64 = p.objective.as_ref().unwrap().iter().filter(|(_, l)| l.eval(w)).map(|t| t.0).sum();
                    ensure(value == best && p.constraints.iter().all(|c| c.holds(w)), || {
                        format!("case {case}: witness invalid")
                    })?;
                }
            }
        }
    }
    Ok(format!("next bound 6; 50 problems ({feasible} feasible) optimal under both strategies"))
}

// 12. The 4-column selector uses fewer variables than the 2-column one.
fn ds_v() -> Outcome {
    let mut gaps = Vec::new();
    for (n, k) in [(64usize, 4usize), (256, 4), (256, 16)] {
        let v2 = m_oe_sel(n, k, 2).map_err(|e| e.to_string())?.cnf_cost().0 as i64;
        let v4 = oe4_sel(n, k).map_err(|e| e.to_string())?.cnf_cost().0 as i64;
        ensure(v2 - v4 > 0, || format!("({n},{k}): V2 {v2} V4 {v4}"))?;
        gaps.push(v2 - v4);
    }
    Ok(format!("gaps {gaps:?}"))
}

// 13. 4-Queens under the binomial encoding.
fn queens_demo() -> Outcome {
    let p = queens(4);
    let mut f = encode_cnfp(&p, &EncodeOptions::with_method(Method::Binomial)).map_err(|e| e.to_string())?;
    ensure(f.num_clauses() == 84, || format!("{} clauses", f.num_clauses()))?;
    let mut models = 0;
    while let Some(m) = dpll_sat(&f, &[]) {
        models += 1;
        ensure(models <= 100, || "too many models".into())?;
        let block: Vec<Lit> = (1..=16).map(|v: Var| Lit::new(v, !m[v as usize])).collect();
        f.add_clause(&block);
    }
    ensure(models == 2, || format!("{models} models"))?;
    Ok("84 clauses, 2 models".into())
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("zero-one principle", zero_one),
        ("exact size formulas", exact_sizes),
        ("half-bitonic saving", half_bitonic_saving),
        ("merger costs", merger_costs),
        ("equisatisfiability", equisat),
        ("arc-consistency", arc_consistency),
        ("fused combine", fused_combine),
        ("4-wise merger table", fourw_table),
        ("mixed radix", mixed_radix),
        ("PB end to end", pb_end_to_end),
        ("optimization", optimization),
        ("dsV positivity", ds_v),
        ("queens demo", queens_demo),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let results: Vec<(usize, &str, Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .filter(|(i, (name, _))| filter.is_empty() || filter.iter().any(|f| name.contains(f.as_str()) || *f == (i + 1).to_string()))
            .map(|(i, &(name, f))| {
                s.spawn(move || {
                    let t = Instant::now();
                    let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                    (i + 1, name, r, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, name, r, secs) in &results {
        match r {
            Ok(detail) => println!("PASS {i:>2} {name}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL {i:>2} {name}: {why} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
