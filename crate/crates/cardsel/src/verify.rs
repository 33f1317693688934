//! Verification suites: exhaustive 0-1 checks of every construction,
//! arc-consistency, equisatisfiability and closed-form size checks.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::card::emit::{emit_combine, emit_network, Polarity};
use crate::card::{baseline, encode_atmost, EncodeOptions, Method};
use crate::cnf::{CnfFormula, Lit, Var};
use crate::formulas::{self, FormulaKind, Q};
use crate::net::build::{
    bit_sel, bitonic_merge, direct_selector, fourw_merge, fourw_merge_main_loop, m_oe_sel, mw_sel, oe4_combine, oe4_merge,
    oe4_sel, oe_merge2, oe_sort, pw_merge, pw_sel, selection_network, PwVariant, SelMethod,
};
use crate::net::ir::{GateKind, NetBuilder, Network, Wire};
use crate::pb::{encode_pb_constraint, PbConstraint};
use crate::seq::{bits_of, is_sorted, is_top_k_sorted, ones, BitSeq};
use crate::up::{check_arc_consistency_indexed, check_forward_prop, dpll_indexed, ClauseIndex};

/// Failures kept per check.
const MAX_FAILURES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    ZeroOne,
    Ac,
    Equisat,
    Sizes,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::ZeroOne => "zero-one",
            Suite::Ac => "ac",
            Suite::Equisat => "equisat",
            Suite::Sizes => "sizes",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Suite, String> {
        [Suite::ZeroOne, Suite::Ac, Suite::Equisat, Suite::Sizes, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    /// Number of cases examined.
    pub cases: usize,
    /// Up to [`MAX_FAILURES`] failure descriptions.
    pub failures: Vec<String>,
    pub failed_cases: usize,
}

impl Check {
    fn new(suite: Suite, name: impl Into<String>) -> Check {
        Check { suite, name: name.into(), cases: 0, failures: Vec::new(), failed_cases: 0 }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed_cases += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed_cases == 0
    }

    /// One summary line.
    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("{status} {}/{} ({} cases", self.suite, self.name, self.cases);
        if !self.passed() {
            s.push_str(&format!(", {} failed", self.failed_cases));
        }
        s.push(')');
        s
    }
}

/// Collected checks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// Summary lines followed by failure details.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.line());
            out.push('\n');
            for f in &c.failures {
                out.push_str("    ");
                out.push_str(f);
                out.push('\n');
            }
        }
        out
    }
}

/// Suite parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub zero_one_max_n: usize,
    pub ac_max_n: usize,
    /// Up to this order every `k`-subset scenario is checked.
    pub ac_exhaustive_max_n: usize,
    pub ac_random_scenarios: usize,
    pub equisat_max_n: usize,
    pub pb_constraints: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            zero_one_max_n: 12,
            ac_max_n: 10,
            ac_exhaustive_max_n: 8,
            ac_random_scenarios: 200,
            equisat_max_n: 8,
            pb_constraints: 200,
            seed: 0x5eed,
        }
    }
}

/// Runs one suite, or all of them.
pub fn run(suite: Suite, cfg: &VerifyConfig) -> Report {
    let mut checks = Vec::new();
    if matches!(suite, Suite::ZeroOne | Suite::All) {
        checks.extend(zero_one_suite(cfg.zero_one_max_n));
        checks.push(combine_check(cfg.zero_one_max_n.min(10)));
    }
    if matches!(suite, Suite::Ac | Suite::All) {
        checks.extend(ac_suite(cfg));
    }
    if matches!(suite, Suite::Equisat | Suite::All) {
        checks.extend(equisat_suite(cfg.equisat_max_n));
        checks.push(pb_equisat_check(cfg.pb_constraints, 8, 20, cfg.seed));
    }
    if matches!(suite, Suite::Sizes | Suite::All) {
        checks.extend(size_checks().iter().map(SizeCheck::to_check));
    }
    Report { checks }
}

// ---------------------------------------------------------------------
// 0-1 principle
// ---------------------------------------------------------------------

/// Input class a construction is specified for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Precondition {
    Any,
    /// Consecutive sorted columns of the given lengths.
    SortedColumns(Vec<usize>),
    /// Ones form one cyclically contiguous block.
    CyclicBitonic,
    /// `1^a 0^b 1^c` with `b_j ≥ b_{n-j+1}` for `j ≤ n/2`.
    VShapedDominating,
    /// Halves `l`, `r` as left by a splitter and the two sub-selections:
    /// `l` top-`k` sorted, `r` top-`k/2` sorted, `|l|₁ ≥ |r|₁` and
    /// `pref(k/2, l) ≥ pref(k/2, r)` pointwise.
    PairwiseHalves { k: usize },
    /// Sorted columns whose rows are non-increasing.
    FourWise(Vec<usize>),
    /// Sorted `x` and `y` with `|y|₁ ≤ |x|₁ ≤ |y|₁ + 4`.
    CombineCounts { x_len: usize, y_len: usize },
}

fn sorted_column_inputs(lens: &[usize]) -> Vec<BitSeq> {
    lens.iter()
        .map(|&l| 0..=l)
        .multi_cartesian_product()
        .map(|counts| {
            let mut x = Vec::new();
            for (&l, &c) in lens.iter().zip(&counts) {
                x.extend((0..l).map(|i| i < c));
            }
            x
        })
        .collect()
}

fn column_counts(x: &[bool], lens: &[usize]) -> Vec<usize> {
    let mut off = 0;
    lens.iter()
        .map(|&l| {
            let c = ones(&x[off..off + l]);
            off += l;
            c
        })
        .collect()
}

impl Precondition {
    /// Every admissible 0-1 input of length `n`.
    pub fn inputs(&self, n: usize) -> Vec<BitSeq> {
        match self {
            Precondition::SortedColumns(lens) => sorted_column_inputs(lens),
            Precondition::FourWise(lens) => sorted_column_inputs(lens)
                .into_iter()
                .filter(|x| {
                    // Sorted columns have non-increasing rows iff the
                    // column counts are non-increasing.
                    column_counts(x, lens).windows(2).all(|w| w[0] >= w[1])
                })
                .collect(),
            Precondition::CombineCounts { x_len, y_len } => sorted_column_inputs(&[*x_len, *y_len])
                .into_iter()
                .filter(|x| {
                    let c = column_counts(x, &[*x_len, *y_len]);
                    c[1] <= c[0] && c[0] <= c[1] + 4
                })
                .collect(),
            _ => (0..1u64 << n).map(|v| bits_of(v, n)).filter(|x| self.admits(x)).collect(),
        }
    }

    pub fn admits(&self, x: &[bool]) -> bool {
        let n = x.len();
        match self {
            Precondition::Any => true,
            Precondition::SortedColumns(lens) => {
                let mut off = 0;
                lens.iter().all(|&l| {
                    let ok = is_sorted(&x[off..off + l]);
                    off += l;
                    ok
                })
            }
            Precondition::CyclicBitonic => (0..n).filter(|&i| x[i] != x[(i + 1) % n]).count() <= 2,
            Precondition::VShapedDominating => {
                let a = x.iter().take_while(|&&b| b).count();
                let c = x.iter().rev().take_while(|&&b| b).count();
                let v_shaped = a + c >= n || x[a..n - c].iter().all(|&b| !b);
                v_shaped && (0..n / 2).all(|j| x[j] >= x[n - 1 - j])
            }
            Precondition::PairwiseHalves { k } => {
                let (l, r) = x.split_at(n / 2);
                is_top_k_sorted(l, *k)
                    && is_top_k_sorted(r, k / 2)
                    && ones(l) >= ones(r)
                    && (0..k / 2).all(|i| l[i] >= r[i])
            }
            Precondition::FourWise(lens) => {
                Precondition::SortedColumns(lens.clone()).admits(x)
                    && column_counts(x, lens).windows(2).all(|w| w[0] >= w[1])
            }
            Precondition::CombineCounts { x_len, y_len } => {
                let lens = [*x_len, *y_len];
                let c = column_counts(x, &lens);
                Precondition::SortedColumns(lens.to_vec()).admits(x) && c[1] <= c[0] && c[0] <= c[1] + 4
            }
        }
    }
}

/// One network instance of the 0-1 catalog.
#[derive(Clone, Debug)]
pub struct Instance {
    pub family: &'static str,
    pub label: String,
    pub net: Network,
    pub pre: Precondition,
}

fn pow2_upto(max: usize) -> impl Iterator<Item = usize> {
    (0..).map(|e| 1usize << e).take_while(move |&v| v <= max)
}

/// Non-increasing column profiles of `1..=4` columns summing to `s`.
fn profiles(s: usize, cols: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if left == 0 {
            return;
        }
        for v in (1..=max.min(rest)).rev() {
            cur.push(v);
            go(rest - v, v, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(s, s, cols, &mut Vec::new(), &mut out);
    out
}

/// Every construction over its parameter domain with at most `max_n` inputs.
pub fn zero_one_catalog(max_n: usize) -> Vec<Instance> {
    let mut out = Vec::new();
    let mut push = |family: &'static str, label: String, net: Network, pre: Precondition| {
        out.push(Instance { family, label, net, pre });
    };
    let variants = [
        ("classic", PwVariant::Classic),
        ("bitonic", PwVariant::Bitonic),
        ("half-bitonic", PwVariant::HalfBitonic),
    ];
    for n in pow2_upto(max_n) {
        push("oe_sort", format!("n={n}"), oe_sort(n).unwrap(), Precondition::Any);
        if n >= 2 {
            push("oe_merge2", format!("n={n}"), oe_merge2(n).unwrap(), Precondition::SortedColumns(vec![n / 2, n / 2]));
            push("bitonic_merge", format!("n={n}"), bitonic_merge(n, false).unwrap(), Precondition::CyclicBitonic);
            push("half_bitonic_merge", format!("n={n}"), bitonic_merge(n, true).unwrap(), Precondition::VShapedDominating);
        }
        for k in pow2_upto(n) {
            push("bit_sel", format!("n={n} k={k}"), bit_sel(n, k).unwrap(), Precondition::Any);
            for (vname, v) in variants {
                push("pw_sel", format!("{vname} n={n} k={k}"), pw_sel(n, k, v).unwrap(), Precondition::Any);
                if k < n {
                    push(
                        "pw_merge",
                        format!("{vname} n={n} k={k}"),
                        pw_merge(n, k, v).unwrap(),
                        Precondition::PairwiseHalves { k },
                    );
                }
            }
        }
    }
    for n in 1..=max_n {
        for k in 1..=n {
            push("oe4_sel", format!("n={n} k={k}"), oe4_sel(n, k).unwrap(), Precondition::Any);
            for m in [2, 4] {
                push("m_oe_sel", format!("m={m} n={n} k={k}"), m_oe_sel(n, k, m).unwrap(), Precondition::Any);
            }
            for p in profiles(n, 4).into_iter().filter(|p| p.len() == 4 && p[0] < n) {
                let cols = [p[0], p[1], p[2], p[3]];
                push("mw_sel", format!("n={n} k={k} cols={cols:?}"), mw_sel(n, k, cols).unwrap(), Precondition::Any);
            }
        }
    }
    for n in 1..=max_n {
        for p in profiles(n, 4) {
            for k in p[0].max(1)..=n {
                if let Ok(net) = oe4_merge(&p, k) {
                    push("oe4_merge", format!("cols={p:?} k={k}"), net, Precondition::SortedColumns(p.clone()));
                }
            }
        }
    }
    // 4-wise tuples: column i has length min(c, ⌊k/i⌋).
    let mut seen = std::collections::HashSet::new();
    for k in 1..=max_n {
        for c in 1..=k {
            let lens: [usize; 4] = std::array::from_fn(|i| c.min(k / (i + 1)));
            if lens.iter().sum::<usize>() > max_n || !seen.insert((lens, k)) {
                continue;
            }
            if let Ok(net) = fourw_merge(lens, k) {
                push("fourw_merge", format!("cols={lens:?} k={k}"), net, Precondition::FourWise(lens.to_vec()));
            }
        }
    }
    for x_len in 0..=max_n {
        for y_len in 0..=(max_n - x_len) {
            push(
                "oe4_combine",
                format!("|x|={x_len} |y|={y_len}"),
                oe4_combine(x_len, y_len),
                Precondition::CombineCounts { x_len, y_len },
            );
        }
    }
    let methods = [
        ("oe4", SelMethod::Oe4),
        ("oe2", SelMethod::Oe2),
        ("pairwise", SelMethod::Pairwise(PwVariant::Classic)),
        ("pairwise-bitonic", SelMethod::Pairwise(PwVariant::Bitonic)),
        ("pairwise-half-bitonic", SelMethod::Pairwise(PwVariant::HalfBitonic)),
        ("fourwise", SelMethod::Fourwise),
        ("bitonic", SelMethod::BitonicSel),
    ];
    for n in 1..=max_n.min(10) {
        for k in 1..=n {
            for (name, m) in methods {
                for lambda in [None, Some(5.0)] {
                    let tag = if lambda.is_some() { "mixed" } else { "plain" };
                    push(
                        "selection",
                        format!("{name} {tag} n={n} k={k}"),
                        selection_network(m, n, k, lambda).unwrap(),
                        Precondition::Any,
                    );
                }
            }
        }
    }
    out
}

/// Checks that every admissible input yields a top-`k` sorted permutation.
pub fn check_instance(inst: &Instance, check: &mut Check) {
    let n = inst.net.num_inputs();
    for x in inst.pre.inputs(n) {
        let y = inst.net.eval(&x).expect("input length matches");
        let ok = y.len() == x.len() && ones(&y) == ones(&x) && is_top_k_sorted(&y, inst.net.k());
        check.record(ok, || format!("{} {}: input {} gave {}", inst.family, inst.label, bits(&x), bits(&y)));
    }
}

fn bits(x: &[bool]) -> String {
    x.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// One check per construction family.
pub fn zero_one_suite(max_n: usize) -> Vec<Check> {
    let catalog = zero_one_catalog(max_n);
    let families: Vec<&'static str> = catalog.iter().map(|i| i.family).unique().collect();
    families
        .into_iter()
        .map(|fam| {
            let mut check = Check::new(Suite::ZeroOne, fam);
            for inst in catalog.iter().filter(|i| i.family == fam) {
                check_instance(inst, &mut check);
            }
            check
        })
        .collect()
}

// ---------------------------------------------------------------------
// Fused combine against the two-layer comparator reference
// ---------------------------------------------------------------------

/// Two layers of comparators computing the combine outputs `a_1 … a_t`.
pub fn combine_reference(x_len: usize, y_len: usize) -> Network {
    let t = x_len + y_len;
    let mut b = NetBuilder::new(t);
    let xs = b.inputs();
    let x = |i: i64| if i >= 1 && i as usize <= x_len { xs[i as usize - 1] } else { Wire::Const(false) };
    let y = |i: i64| {
        if i < 1 {
            Wire::Const(true)
        } else if i as usize > y_len {
            Wire::Const(false)
        } else {
            xs[x_len + i as usize - 1]
        }
    };
    let pairs = t as i64 / 2 + 2;
    let mut hi = vec![Wire::Const(true); pairs as usize + 1];
    let mut lo = vec![Wire::Const(true); pairs as usize + 1];
    for i in 0..=pairs {
        let (h, l) = b.sort2(x(i + 1), y(i - 1));
        hi[i as usize] = h;
        lo[i as usize] = l;
    }
    let mut a = vec![Wire::Const(true); 2 * pairs as usize + 1];
    for i in 1..=pairs as usize {
        let (mx, mn) = b.sort2(hi[i], lo[i - 1]);
        a[2 * i - 2] = mx;
        a[2 * i - 1] = mn;
    }
    b.finish_partial(a[1..=t].to_vec(), t)
}

/// Output values forced by unit propagation plus search under an input
/// fixing: `Some(v)` when the opposite value is unsatisfiable.
fn forced_outputs(index: &ClauseIndex, fixing: &[Lit], outputs: &[Lit]) -> Vec<Option<bool>> {
    outputs
        .iter()
        .map(|&o| {
            if let Some(v) = o.const_value() {
                return Some(v);
            }
            let mut with = fixing.to_vec();
            with.push(!o);
            let can_false = dpll_indexed(index, &with).is_some();
            with.pop();
            with.push(o);
            let can_true = dpll_indexed(index, &with).is_some();
            match (can_true, can_false) {
                (true, false) => Some(true),
                (false, true) => Some(false),
                _ => None,
            }
        })
        .collect()
}

fn emit_on_fresh(net: &Network, polarity: Polarity) -> (CnfFormula, Vec<Lit>) {
    let n = net.num_inputs();
    let mut f = CnfFormula::with_vars(n as Var);
    let inputs: Vec<Lit> = (1..=n as Var).map(Lit::pos).collect();
    let outs = emit_network(&mut f, net, &inputs, polarity, net.outputs().len());
    (f, outs)
}

/// Fused and reference combine CNFs force the same output values under
/// every admissible fixing, in both polarities; an interior pair costs
/// exactly 5 clauses and 2 variables.
pub fn combine_check(max_len: usize) -> Check {
    let mut check = Check::new(Suite::ZeroOne, "oe4_combine-vs-reference");
    for polarity in [Polarity::Up, Polarity::Down] {
        let mut f = CnfFormula::with_vars(6);
        let ins: [Lit; 6] = std::array::from_fn(|i| Lit::pos(i as Var + 1));
        emit_combine(&mut f, &ins, &[true, true], polarity);
        let cost = (f.num_vars() - 6, f.num_clauses());
        check.record(cost == (2, 5), || format!("interior pair {polarity:?} costs {cost:?}"));
    }
    for x_len in 0..=max_len {
        for y_len in 0..=(max_len - x_len) {
            let fused = oe4_combine(x_len, y_len);
            let reference = combine_reference(x_len, y_len);
            let pre = Precondition::CombineCounts { x_len, y_len };
            for polarity in [Polarity::Up, Polarity::Down] {
                let (ff, fo) = emit_on_fresh(&fused, polarity);
                let (rf, ro) = emit_on_fresh(&reference, polarity);
                let (fi, ri) = (ClauseIndex::new(&ff), ClauseIndex::new(&rf));
                for x in pre.inputs(x_len + y_len) {
                    let fixing: Vec<Lit> =
                        x.iter().enumerate().map(|(i, &b)| Lit::new(i as Var + 1, b)).collect();
                    let a = forced_outputs(&fi, &fixing, &fo);
                    let b = forced_outputs(&ri, &fixing, &ro);
                    check.record(a == b, || {
                        format!("|x|={x_len} |y|={y_len} {polarity:?} input {}: fused {a:?} reference {b:?}", bits(&x))
                    });
                }
            }
        }
    }
    check
}

// ---------------------------------------------------------------------
// Arc-consistency
// ---------------------------------------------------------------------

fn scenarios(n: usize, k: usize, cfg: &VerifyConfig, rng: &mut ChaCha8Rng) -> Vec<Vec<usize>> {
    if n <= cfg.ac_exhaustive_max_n {
        return (0..n).combinations(k).collect();
    }
    let idx: Vec<usize> = (0..n).collect();
    (0..cfg.ac_random_scenarios)
        .map(|_| {
            let mut s: Vec<usize> = idx.choose_multiple(rng, k).copied().collect();
            s.shuffle(rng);
            s
        })
        .collect()
}

/// Options for a verification cell: network methods with and without
/// direct mixing, baselines once.
fn method_options(networks_only: bool) -> Vec<(String, EncodeOptions)> {
    let mut out = Vec::new();
    for m in Method::ALL {
        if m.is_network() {
            out.push((format!("{m} plain"), EncodeOptions { direct_mixing: false, ..EncodeOptions::with_method(m) }));
            out.push((format!("{m} mixed"), EncodeOptions::with_method(m)));
        } else if !networks_only {
            out.push((m.to_string(), EncodeOptions::with_method(m)));
        }
    }
    out
}

/// Arc-consistency and forward propagation for every network method.
pub fn ac_suite(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::new();
    for (name, opts) in method_options(true) {
        let mut check = Check::new(Suite::Ac, name.clone());
        for n in 1..=cfg.ac_max_n {
            let lits: Vec<Lit> = (1..=n as Var).map(Lit::pos).collect();
            for k in 0..n {
                let mut f = CnfFormula::with_vars(n as Var);
                let enc = encode_atmost(&mut f, &lits, k, &opts).expect("valid bound");
                let index = ClauseIndex::new(&f);
                for sc in scenarios(n, k, cfg, &mut rng) {
                    let rep = check_arc_consistency_indexed(&index, &enc, &sc).expect("scenario matches k");
                    check.record(rep.passed(), || format!("{name} n={n} k={k} scenario {sc:?}: {rep:?}"));
                    for i in 1..=k {
                        let fw = check_forward_prop(&index, &enc, &sc[..i]).expect("depth within k");
                        let ok = !fw.conflict && fw.unset_outputs.is_empty();
                        check.record(ok, || format!("{name} n={n} k={k} prefix {:?}: {fw:?}", &sc[..i]));
                    }
                    if let Some(extra) = (0..n).find(|j| !sc.contains(j)) {
                        let mut deeper = sc.clone();
                        deeper.push(extra);
                        let fw = check_forward_prop(&index, &enc, &deeper).expect("depth k + 1");
                        check.record(fw.conflict, || format!("{name} n={n} k={k} inputs {deeper:?}: no conflict"));
                    }
                }
            }
        }
        out.push(check);
    }
    out
}

// ---------------------------------------------------------------------
// Equisatisfiability
// ---------------------------------------------------------------------

/// Every encoder, `n ≤ max_n`, `0 ≤ k < n`, every input fixing: the encoding
/// is satisfiable exactly when at most `k` inputs are true.
pub fn equisat_suite(max_n: usize) -> Vec<Check> {
    method_options(false)
        .into_iter()
        .map(|(name, opts)| {
            let mut check = Check::new(Suite::Equisat, name.clone());
            for n in 1..=max_n {
                let lits: Vec<Lit> = (1..=n as Var).map(Lit::pos).collect();
                for k in 0..n {
                    let mut f = CnfFormula::with_vars(n as Var);
                    encode_atmost(&mut f, &lits, k, &opts).expect("valid bound");
                    let index = ClauseIndex::new(&f);
                    for v in 0..1u64 << n {
                        let x = bits_of(v, n);
                        let fixing: Vec<Lit> = x.iter().enumerate().map(|(i, &b)| Lit::new(i as Var + 1, b)).collect();
                        let sat = dpll_indexed(&index, &fixing).is_some();
                        check.record(sat == (ones(&x) <= k), || {
                            format!("{name} n={n} k={k} input {}: sat = {sat}", bits(&x))
                        });
                    }
                }
            }
            check
        })
        .collect()
}

/// Random `≥` constraint over `1..=n` with coefficients in `1..=max_coeff`
/// and random literal signs.
pub fn random_pb(rng: &mut impl Rng, max_n: usize, max_coeff: i64) -> PbConstraint {
    let n = rng.gen_range(1..=max_n);
    let terms: Vec<(i64, Lit)> =
        (1..=n as Var).map(|v| (rng.gen_range(1..=max_coeff), Lit::new(v, rng.gen_bool(0.7)))).collect();
    let sum: i64 = terms.iter().map(|t| t.0).sum();
    let k = rng.gen_range(1..=sum);
    PbConstraint { terms, rel: crate::card::Relation::Ge, k }
}

/// Random PB constraints, cycling through the network methods.
pub fn pb_equisat_check(count: usize, max_n: usize, max_coeff: i64, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let methods: Vec<Method> = Method::ALL.into_iter().filter(|m| m.is_network()).collect();
    let mut check = Check::new(Suite::Equisat, "pb");
    for i in 0..count {
        let c = random_pb(&mut rng, max_n, max_coeff);
        let opts = EncodeOptions::with_method(methods[i % methods.len()]);
        let n = c.terms.len();
        let mut f = CnfFormula::with_vars(n as Var);
        if let Err(e) = encode_pb_constraint(&mut f, &c, &opts) {
            check.record(false, || format!("{c:?}: {e}"));
            continue;
        }
        let index = ClauseIndex::new(&f);
        for v in 0..1u64 << n {
            let x = bits_of(v, n);
            let fixing: Vec<Lit> = x.iter().enumerate().map(|(i, &b)| Lit::new(i as Var + 1, b)).collect();
            let sat = dpll_indexed(&index, &fixing).is_some();
            let mut model = vec![false];
            model.extend(&x);
            let want = c.holds(&model);
            check.record(sat == want, || format!("{} {c:?} input {}: sat = {sat}", opts.method, bits(&x)));
        }
    }
    check
}

// ---------------------------------------------------------------------
// Size formulas
// ---------------------------------------------------------------------

/// Counted value against a closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeCheck {
    pub formula: &'static str,
    pub params: Vec<i64>,
    pub counted: i128,
    pub expected: Q,
    pub kind: FormulaKind,
}

/// Relative tolerance for approximate formulas.
pub fn approx_tolerance() -> Q {
    Q::new(1, 10)
}

impl SizeCheck {
    pub fn passed(&self) -> bool {
        let c = Q::from_integer(self.counted);
        match self.kind {
            FormulaKind::Exact => c == self.expected,
            FormulaKind::UpperBound => c <= self.expected,
            FormulaKind::LowerBound => c >= self.expected,
            FormulaKind::Approximate => formulas::within(self.counted, &self.expected, approx_tolerance()),
        }
    }

    fn to_check(&self) -> Check {
        let mut c = Check::new(Suite::Sizes, format!("{}{:?}", self.formula, self.params));
        c.record(self.passed(), || {
            format!("{} {:?}: counted {} vs {} ({})", self.formula, self.params, self.counted, self.expected, self.kind.label())
        });
        c
    }
}

fn size(formula: &'static str, params: &[i64], counted: usize) -> SizeCheck {
    let info = formulas::info(formula).expect("registered formula");
    let expected = formulas::closed_form(formula, params).expect("parameters in domain");
    SizeCheck { formula, params: params.to_vec(), counted: counted as i128, expected, kind: info.kind }
}

fn sorters2(net: &Network) -> usize {
    net.gate_histogram().of_order(2)
}

/// Comparator count with a 1-selector of order `n` counted as `n − 1`
/// comparators.
pub fn comparators(net: &Network) -> usize {
    net.gates()
        .iter()
        .map(|g| match g.kind {
            GateKind::Selector { n, m: 1 } => n - 1,
            GateKind::Selector { n, .. } => n * (n - 1) / 2,
            GateKind::CombinePair { .. } => 0,
        })
        .sum()
}

/// Network of a `≤ k` baseline encoder, counted in clauses.
fn baseline_clauses(n: usize, k: usize, which: Method) -> usize {
    let mut f = CnfFormula::with_vars(n as Var);
    let lits: Vec<Lit> = (1..=n as Var).map(Lit::pos).collect();
    match which {
        Method::Sequential => {
            baseline::sequential(&mut f, &lits, k);
        }
        Method::Binomial => baseline::binomial(&mut f, &lits, k),
        _ => unreachable!("baseline only"),
    }
    f.num_clauses()
}

/// Every closed-form check against counted networks and encodings.
pub fn size_checks() -> Vec<SizeCheck> {
    let mut out = Vec::new();
    for n in [2usize, 4, 8, 16, 32] {
        out.push(size("oe_sort_size", &[n as i64], sorters2(&oe_sort(n).unwrap())));
        out.push(size("oe_merge_size", &[n as i64], sorters2(&oe_merge2(n).unwrap())));
        out.push(size("bit_merge_size", &[n as i64], sorters2(&bitonic_merge(n, false).unwrap())));
        out.push(size("half_bit_merge_size", &[n as i64], sorters2(&bitonic_merge(n, true).unwrap())));
    }
    for k in [2usize, 4, 8, 16] {
        let p = [k as i64];
        out.push(size("pw_merge_size", &p, sorters2(&pw_merge(2 * k, k, PwVariant::Classic).unwrap())));
        out.push(size("pw_bit_merge_size", &p, sorters2(&pw_merge(2 * k, k, PwVariant::Bitonic).unwrap())));
        out.push(size("pw_hbit_merge_size", &p, sorters2(&pw_merge(2 * k, k, PwVariant::HalfBitonic).unwrap())));
    }
    for n in [4usize, 8, 16, 32] {
        for k in pow2_upto(n / 2) {
            out.push(size("bit_sel_size", &[n as i64, k as i64], sorters2(&bit_sel(n, k).unwrap())));
        }
    }
    for big_n in [4usize, 8, 16, 32] {
        let classic = comparators(&pw_sel(big_n, big_n / 2, PwVariant::Classic).unwrap());
        let half = comparators(&pw_sel(big_n, big_n / 2, PwVariant::HalfBitonic).unwrap());
        out.push(size("pw_sel_half_saving", &[big_n as i64], classic - half));
    }
    for n in 1usize..=5 {
        for k in 1..n {
            let (big_n, big_k) = (1usize << n, 1usize << k);
            let classic = comparators(&pw_sel(big_n, big_k, PwVariant::Classic).unwrap());
            let half_net = pw_sel(big_n, big_k, PwVariant::HalfBitonic).unwrap();
            let half = comparators(&half_net);
            let (ni, ki) = (n as i64, k as i64);
            out.push(size("pw_sel_size_difference", &[ni, ki], classic - half));
            out.push(size("pw_hbit_sel_upper_bound", &[ni, ki], half));
        }
    }
    for k in [2usize, 4, 8] {
        let (v, c) = oe_merge2(2 * k).unwrap().cnf_cost();
        out.push(size("oe2_merge_vars", &[k as i64], v));
        out.push(size("oe2_merge_clauses", &[k as i64], c));
    }
    for k in [4usize, 8, 16] {
        let (v, c) = oe4_merge(&[k, k, k, k], k).unwrap().cnf_cost();
        out.push(size("oe4_merge_vars_bound", &[k as i64], v));
        out.push(size("oe4_merge_clauses_bound", &[k as i64], c));
    }
    for k in [16usize, 32, 64] {
        let h = fourw_merge_main_loop([k, k / 2, k / 3, k / 4], k).unwrap().gate_histogram();
        let p = [k as i64];
        let (s2, s3, s4) = (h.of_order(2), h.of_order(3), h.of_order(4));
        out.push(size("fourw_merge_sorters2", &p, s2));
        out.push(size("fourw_merge_sorters3", &p, s3));
        out.push(size("fourw_merge_sorters4", &p, s4));
        // Every sorter output is a variable; a full n-sorter has 2^n - 1 clauses.
        out.push(size("fourw_merge_vars", &p, 2 * s2 + 3 * s3 + 4 * s4));
        out.push(size("fourw_merge_clauses", &p, 3 * s2 + 7 * s3 + 15 * s4));
    }
    for (n, k) in [(16usize, 4usize), (64, 4), (64, 16), (256, 4), (256, 16), (256, 64)] {
        let v2 = m_oe_sel(n, k, 2).unwrap().cnf_cost().0;
        let v4 = m_oe_sel(n, k, 4).unwrap().cnf_cost().0;
        out.push(size("oe2_oe4_vars_gap", &[n as i64, k as i64], v2.saturating_sub(v4)));
    }
    for n in 1usize..=8 {
        for m in (1..=n).filter(|_| n >= 2) {
            out.push(size("selector_clauses", &[n as i64, m as i64], direct_selector(n, m).unwrap().cnf_cost().1));
        }
        for k in 0..n {
            let p = [n as i64, k as i64];
            if k >= 1 {
                out.push(size("sequential_clauses", &p, baseline_clauses(n, k, Method::Sequential)));
            }
            out.push(size("binomial_clauses", &p, baseline_clauses(n, k, Method::Binomial)));
        }
    }
    out
}
