//! Constructors for selection, sorting and merging networks.
//!
//! The `*_wires` functions extend a [`NetBuilder`] and are composable; the
//! remaining public functions wrap them into standalone [`Network`]s with
//! parameter checks.

use std::collections::HashMap;

use crate::net::ir::{NetBuilder, NetError, Network, Wire};
use crate::seq;

/// Merger used in the last step of the pairwise selection network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PwVariant {
    Classic,
    Bitonic,
    HalfBitonic,
}

/// Splitter flavours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitKind {
    /// 2-sorters on `(i, i + n/2)`.
    Plain,
    /// 2-sorters on `(i, n - i + 1)`.
    Bitonic,
    /// Plain splitter without its first `n/4` comparators.
    Half,
}

/// Selection network families that can back a cardinality encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SelMethod {
    /// 4-column odd-even selection.
    Oe4,
    /// 2-column odd-even selection.
    Oe2,
    /// Pairwise selection (inputs padded to powers of two).
    Pairwise(PwVariant),
    /// 4-wise selection with the 4-wise merger.
    Fourwise,
    /// Bitonic selection (inputs padded to powers of two).
    BitonicSel,
}

fn is_pow2(n: usize) -> bool {
    n >= 1 && n.is_power_of_two()
}

fn domain(msg: impl Into<String>) -> NetError {
    NetError::Domain(msg.into())
}

/// Applies a splitter to `xs` (length must be even, divisible by 4 for `Half`).
pub fn split_wires(b: &mut NetBuilder, xs: &[Wire], kind: SplitKind) -> Vec<Wire> {
    let n = xs.len();
    let mut out = xs.to_vec();
    match kind {
        SplitKind::Plain => {
            for i in 0..n / 2 {
                let (hi, lo) = b.sort2(out[i], out[i + n / 2]);
                out[i] = hi;
                out[i + n / 2] = lo;
            }
        }
        SplitKind::Bitonic => {
            for i in 0..n / 2 {
                let (hi, lo) = b.sort2(out[i], out[n - 1 - i]);
                out[i] = hi;
                out[n - 1 - i] = lo;
            }
        }
        SplitKind::Half => {
            for i in 0..n / 4 {
                let (a, c) = (n / 4 + i, 3 * n / 4 + i);
                let (hi, lo) = b.sort2(out[a], out[c]);
                out[a] = hi;
                out[c] = lo;
            }
        }
    }
    out
}

/// Odd-even merge of two sorted sequences of arbitrary lengths.
pub fn batcher_merge_wires(b: &mut NetBuilder, x: &[Wire], y: &[Wire]) -> Vec<Wire> {
    if x.is_empty() {
        return y.to_vec();
    }
    if y.is_empty() {
        return x.to_vec();
    }
    if x.len() == 1 && y.len() == 1 {
        let (hi, lo) = b.sort2(x[0], y[0]);
        return vec![hi, lo];
    }
    let v = batcher_merge_wires(b, &seq::odd(x), &seq::odd(y));
    let w = batcher_merge_wires(b, &seq::even(x), &seq::even(y));
    let mut out = Vec::with_capacity(x.len() + y.len());
    out.push(v[0]);
    let mut i = 0;
    while i < w.len() && i + 1 < v.len() {
        let (hi, lo) = b.sort2(w[i], v[i + 1]);
        out.push(hi);
        out.push(lo);
        i += 1;
    }
    out.extend_from_slice(&w[i..]);
    out.extend_from_slice(&v[(i + 1).min(v.len())..]);
    out
}

/// Odd-even merge sort.
pub fn oe_sort_wires(b: &mut NetBuilder, xs: &[Wire]) -> Vec<Wire> {
    if xs.len() <= 1 {
        return xs.to_vec();
    }
    let l = oe_sort_wires(b, &seq::left(xs));
    let r = oe_sort_wires(b, &seq::right(xs));
    batcher_merge_wires(b, &l, &r)
}

/// Bitonic merger: plain splitter then recursion on both halves.
pub fn bit_merge_wires(b: &mut NetBuilder, xs: &[Wire]) -> Vec<Wire> {
    let n = xs.len();
    if n <= 1 {
        return xs.to_vec();
    }
    let y = split_wires(b, xs, SplitKind::Plain);
    let mut out = bit_merge_wires(b, &y[..n / 2]);
    out.extend(bit_merge_wires(b, &y[n / 2..]));
    out
}

/// Half-bitonic merger for v-shaped s-dominating inputs.
pub fn half_bit_merge_wires(b: &mut NetBuilder, xs: &[Wire]) -> Vec<Wire> {
    let n = xs.len();
    if n <= 2 {
        return xs.to_vec();
    }
    let y = split_wires(b, xs, SplitKind::Half);
    let mut out = half_bit_merge_wires(b, &y[..n / 2]);
    out.extend(bit_merge_wires(b, &y[n / 2..]));
    out
}

/// Pairwise merger of `l` (top-`k` sorted) and `r` (top-`k/2` sorted).
pub fn pw_merge_wires(b: &mut NetBuilder, l: &[Wire], r: &[Wire], k: usize, variant: PwVariant) -> Vec<Wire> {
    let h = l.len();
    if 2 * h <= 2 || k <= 1 {
        return seq::zip(&[l.to_vec(), r.to_vec()]).expect("equal halves");
    }
    match variant {
        PwVariant::Classic => {
            let y = pw_merge_wires(b, &seq::odd(l), &seq::odd(r), k / 2, variant);
            let y2 = pw_merge_wires(b, &seq::even(l), &seq::even(r), k / 2, variant);
            let mut z = seq::zip(&[y, y2]).expect("equal halves");
            for i in 1..k {
                let (hi, lo) = b.sort2(z[2 * i - 1], z[2 * i]);
                z[2 * i - 1] = hi;
                z[2 * i] = lo;
            }
            z
        }
        PwVariant::Bitonic | PwVariant::HalfBitonic => {
            let half = k / 2;
            let mut u = l[half..k].to_vec();
            u.extend_from_slice(&r[..half]);
            let y = split_wires(b, &u, SplitKind::Bitonic);
            let mut bb = l[..half].to_vec();
            bb.extend_from_slice(&y[..half]);
            let mut out = if variant == PwVariant::Bitonic {
                bit_merge_wires(b, &bb)
            } else {
                half_bit_merge_wires(b, &bb)
            };
            out.extend_from_slice(&y[half..]);
            out.extend_from_slice(&l[k..]);
            out.extend_from_slice(&r[half..]);
            out
        }
    }
}

/// Pairwise selection of the top `k` of `xs` (both powers of two).
pub fn pw_sel_wires(b: &mut NetBuilder, xs: &[Wire], k: usize, variant: PwVariant, planner: &mut Planner) -> Vec<Wire> {
    let n = xs.len();
    if k == 1 {
        return b.selector(xs, 1);
    }
    if k == n {
        return oe_sort_wires(b, xs);
    }
    let y = split_wires(b, xs, SplitKind::Plain);
    let l = planner.sub_select(b, &y[..n / 2], k.min(n / 2));
    let r = planner.sub_select(b, &y[n / 2..], (k / 2).min(n / 2));
    pw_merge_wires(b, &l, &r, k, variant)
}

/// Bitonic selection of the top `k` of `xs` (both powers of two).
pub fn bit_sel_wires(b: &mut NetBuilder, xs: &[Wire], k: usize) -> Vec<Wire> {
    let n = xs.len();
    if k >= n {
        return oe_sort_wires(b, xs);
    }
    let mut blocks: Vec<Vec<Wire>> = xs.chunks(k).map(|c| oe_sort_wires(b, c)).collect();
    let mut residue = Vec::new();
    while blocks.len() > 1 {
        let mut next = Vec::with_capacity(blocks.len() / 2);
        for pair in blocks.chunks(2) {
            let mut joined = pair[0].clone();
            joined.extend_from_slice(&pair[1]);
            let y = split_wires(b, &joined, SplitKind::Bitonic);
            next.push(bit_merge_wires(b, &y[..k]));
            residue.extend_from_slice(&y[k..]);
        }
        blocks = next;
    }
    let mut out = blocks.pop().unwrap_or_default();
    out.extend(residue);
    out
}

/// Sorts the wires at the listed positions; the first position gets the
/// maximum.
fn sort_positions(b: &mut NetBuilder, cols: &mut [Vec<Wire>; 4], at: &[(usize, usize)]) {
    let ins: Vec<Wire> = at.iter().map(|&(c, j)| cols[c][j]).collect();
    let out = b.selector(&ins, ins.len());
    for (&(c, j), w) in at.iter().zip(out) {
        cols[c][j] = w;
    }
}

/// 4-wise merger of columns `w, x, y, z` (non-increasing lengths,
/// `|w| ≥ 1`); returns the columns in row-major order.
pub fn fourw_merge_wires(b: &mut NetBuilder, cols: [Vec<Wire>; 4], k: usize) -> Result<Vec<Wire>, NetError> {
    fourw_merge_phases(b, cols, k, true)
}

fn fourw_merge_phases(
    b: &mut NetBuilder,
    cols: [Vec<Wire>; 4],
    k: usize,
    final_phase: bool,
) -> Result<Vec<Wire>, NetError> {
    let lens: Vec<i64> = cols.iter().map(|c| c.len() as i64).collect();
    if lens[0] == 0 {
        return Err(domain("4-wise merger needs a non-empty first column"));
    }
    if lens.windows(2).any(|w| w[0] < w[1]) {
        return Err(domain("4-wise merger needs non-increasing column lengths"));
    }
    let (k1, k2, k3, k4) = (lens[0], lens[1], lens[2], lens[3]);
    let mut c = cols;
    const W: usize = 0;
    const X: usize = 1;
    const Y: usize = 2;
    const Z: usize = 3;
    // 1-based index helper
    let p = |j: i64| (j - 1) as usize;

    let mut h: i64 = 1;
    while h < k1 {
        h *= 2;
    }
    while h > 1 {
        h /= 2;
        for j in 1..=(k3 - h).min(k4) {
            if j + 3 * h <= k1 && j + 2 * h <= k2 {
                sort_positions(b, &mut c, &[(Z, p(j)), (Y, p(j + h)), (X, p(j + 2 * h)), (W, p(j + 3 * h))]);
            } else if j + 2 * h <= k2 {
                sort_positions(b, &mut c, &[(Z, p(j)), (Y, p(j + h)), (X, p(j + 2 * h))]);
            } else {
                sort_positions(b, &mut c, &[(Z, p(j)), (Y, p(j + h))]);
            }
        }
        for j in 1..=(k2 - h).min(k3).min(h) {
            if j + 2 * h <= k1 {
                sort_positions(b, &mut c, &[(Y, p(j)), (X, p(j + h)), (W, p(j + 2 * h))]);
            } else {
                sort_positions(b, &mut c, &[(Y, p(j)), (X, p(j + h))]);
            }
        }
        for j in 1..=(k1 - h).min(k2).min(h) {
            sort_positions(b, &mut c, &[(X, p(j)), (W, p(j + h))]);
        }
    }
    if !final_phase {
        return Ok(seq::zip(&c).expect("lengths checked"));
    }
    for j in 1..=(k1 - 2).min(k4) {
        sort_positions(b, &mut c, &[(Z, p(j)), (W, p(j + 2))]);
    }
    for j in 1..=(k2 - 1).min(k4) {
        sort_positions(b, &mut c, &[(Y, p(j)), (Z, p(j)), (W, p(j + 1)), (X, p(j + 1))]);
    }
    if k4 >= 1 && k1 > k4 && k2 == k4 {
        sort_positions(b, &mut c, &[(Y, p(k4)), (Z, p(k4)), (W, p(k4 + 1))]);
    }
    if k % 4 == 3 && k1 > k3 && k3 > k4 {
        sort_positions(b, &mut c, &[(Y, p(k4 + 1)), (W, p(k4 + 2))]);
    }
    Ok(seq::zip(&c).expect("lengths checked"))
}

/// Column sizes `(n1, n2, n3, n4)` used by default: as even as possible,
/// remainder in the first column.
pub fn even_columns(n: usize) -> [usize; 4] {
    let n2 = (n + 2) / 4;
    let n3 = (n + 1) / 4;
    let n4 = n / 4;
    [n - n2 - n3 - n4, n2, n3, n4]
}

/// Column sizes of the 4-odd-even selection network.
pub fn oe4_columns(n: usize, k: usize) -> [usize; 4] {
    if n < 8 || k == n {
        return even_columns(n);
    }
    let mut p = 1;
    while 6 * p < k {
        p *= 2;
    }
    let c = if p <= n / 4 { p } else { k / 4 };
    [n - 3 * c, c, c, c]
}

/// Removes `count` statically false wires, scanning from the end.
fn drop_false(b: &NetBuilder, xs: Vec<Wire>, mut count: usize) -> Vec<Wire> {
    let mut out: Vec<Wire> = Vec::with_capacity(xs.len());
    for w in xs.into_iter().rev() {
        if count > 0 && b.static_value(w) == Some(false) {
            count -= 1;
        } else {
            out.push(w);
        }
    }
    assert_eq!(count, 0, "padding wires must stay constant");
    out.reverse();
    out
}

/// 4-wise selection with explicit column sizes (`None` = even split).
pub fn mw_sel_wires(
    b: &mut NetBuilder,
    xs: &[Wire],
    k: usize,
    cols: Option<[usize; 4]>,
    planner: &mut Planner,
) -> Result<Vec<Wire>, NetError> {
    let n = xs.len();
    if k == 0 || n <= 1 {
        return Ok(xs.to_vec());
    }
    if k == 1 {
        return Ok(b.selector(xs, 1));
    }
    let sizes = cols.unwrap_or_else(|| even_columns(n));
    if sizes.iter().sum::<usize>() != n || sizes[0] >= n || sizes.windows(2).any(|w| w[0] < w[1]) {
        return Err(domain(format!("invalid column profile {sizes:?} for n = {n}")));
    }
    let mut columns: Vec<Vec<Wire>> = Vec::with_capacity(4);
    let mut off = 0;
    for &s in &sizes {
        columns.push(xs[off..off + s].to_vec());
        off += s;
    }
    let n1 = sizes[0];
    for row in 0..n1 {
        let width = sizes.iter().filter(|&&s| s > row).count();
        if width >= 2 {
            let ins: Vec<Wire> = (0..width).map(|c| columns[c][row]).collect();
            let out = b.selector(&ins, width);
            for (c, w) in out.into_iter().enumerate() {
                columns[c][row] = w;
            }
        }
    }
    let mut merge_cols: [Vec<Wire>; 4] = Default::default();
    let mut rest = Vec::new();
    let mut pads = 0;
    for (i, col) in columns.iter().enumerate() {
        let share = k / (i + 1);
        let ki = n1.min(share);
        let li = sizes[i].min(share);
        let z = if li == 0 { col.clone() } else { planner.sub_select(b, col, li) };
        merge_cols[i] = z[..li].to_vec();
        merge_cols[i].extend(std::iter::repeat_n(Wire::Const(false), ki - li));
        pads += ki - li;
        rest.extend_from_slice(&z[li..]);
    }
    let res = fourw_merge_wires(b, merge_cols, k)?;
    let mut out = drop_false(b, res, pads);
    out.extend(rest);
    Ok(out)
}

/// Fused combine of sorted `x` and `y`; output length `|x| + |y|`.
pub fn oe4_combine_wires(b: &mut NetBuilder, x: &[Wire], y: &[Wire]) -> Vec<Wire> {
    let t = x.len() + y.len();
    let yv = |i: i64| -> Wire {
        if i < 1 {
            Wire::Const(true)
        } else if i as usize > y.len() {
            Wire::Const(false)
        } else {
            y[i as usize - 1]
        }
    };
    let xv = |i: i64| -> Wire {
        if i as usize > x.len() {
            Wire::Const(false)
        } else {
            x[i as usize - 1]
        }
    };
    let mut out = Vec::with_capacity(t);
    for i in 1..=t.div_ceil(2) as i64 {
        let outputs = if 2 * i as usize <= t { 2 } else { 1 };
        let ins = [yv(i - 2), yv(i - 1), yv(i), xv(i), xv(i + 1), xv(i + 2)];
        out.extend(b.combine_pair(ins, outputs));
    }
    out
}

/// 4-odd-even merger of up to four sorted columns (non-increasing lengths).
pub fn oe4_merge_wires(b: &mut NetBuilder, cols: &[Vec<Wire>], k: usize) -> Vec<Wire> {
    let cols: Vec<Vec<Wire>> = cols.iter().filter(|c| !c.is_empty()).cloned().collect();
    let s: usize = cols.iter().map(Vec::len).sum();
    if cols.len() <= 1 {
        return cols.into_iter().next().unwrap_or_default();
    }
    let k = k.clamp(1, s);
    if cols[0].len() == 1 {
        return b.selector(&cols.concat(), k);
    }
    let odds: Vec<Vec<Wire>> = cols.iter().map(|c| seq::odd(c)).collect();
    let evens: Vec<Vec<Wire>> = cols.iter().map(|c| seq::even(c)).collect();
    let s_a: usize = odds.iter().map(Vec::len).sum();
    let s_b: usize = evens.iter().map(Vec::len).sum();
    let k_a = s_a.min(k / 2 + 2);
    let k_b = s_b.min(k / 2);
    let a = oe4_merge_wires(b, &odds, k_a);
    let bb = if k_b == 0 { evens.concat() } else { oe4_merge_wires(b, &evens, k_b) };
    let mut out = oe4_combine_wires(b, &a[..k_a], &bb[..k_b]);
    out.extend_from_slice(&a[k_a..]);
    out.extend_from_slice(&bb[k_b..]);
    out
}

/// 4-odd-even selection; `even_only` forces the even column split.
pub fn oe4_sel_wires(b: &mut NetBuilder, xs: &[Wire], k: usize, even_only: bool, planner: &mut Planner) -> Vec<Wire> {
    let n = xs.len();
    if k == 0 || n <= 1 {
        return xs.to_vec();
    }
    if k == 1 {
        return b.selector(xs, 1);
    }
    let sizes = if even_only { even_columns(n) } else { oe4_columns(n, k) };
    let mut prefixes = Vec::with_capacity(4);
    let mut rest = Vec::new();
    let mut off = 0;
    for &s in sizes.iter().filter(|&&s| s > 0) {
        let ki = k.min(s);
        let y = planner.sub_select(b, &xs[off..off + s], ki);
        off += s;
        prefixes.push(y[..ki].to_vec());
        rest.extend_from_slice(&y[ki..]);
    }
    let mut out = oe4_merge_wires(b, &prefixes, k);
    out.extend(rest);
    out
}

/// 2-column odd-even selection: halves selected recursively, prefixes
/// merged with the full odd-even merger.
pub fn oe2_sel_wires(b: &mut NetBuilder, xs: &[Wire], k: usize, planner: &mut Planner) -> Vec<Wire> {
    let n = xs.len();
    if k == 0 || n <= 1 {
        return xs.to_vec();
    }
    if k == 1 {
        return b.selector(xs, 1);
    }
    let n1 = n.div_ceil(2);
    let (k1, k2) = (k.min(n1), k.min(n - n1));
    let y1 = planner.sub_select(b, &xs[..n1], k1);
    let y2 = planner.sub_select(b, &xs[n1..], k2);
    let mut out = batcher_merge_wires(b, &y1[..k1], &y2[..k2]);
    out.extend_from_slice(&y1[k1..]);
    out.extend_from_slice(&y2[k2..]);
    out
}

/// Above this many clauses a direct selector is never considered.
const DIRECT_CLAUSE_LIMIT: u128 = 1 << 22;

/// `Σ_{p=1..m} C(n, p)`, or `None` beyond [`DIRECT_CLAUSE_LIMIT`].
pub fn direct_clause_count(n: usize, m: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for p in 1..=m.min(n) {
        c = c * (n - p + 1) as u128 / p as u128;
        total += c;
        if total > DIRECT_CLAUSE_LIMIT {
            return None;
        }
    }
    Some(total)
}

/// Recursion driver: routes sub-selections of a method and decides, with
/// the `λ·V + C` rule, when a direct selector replaces a recursive one.
#[derive(Clone, Debug)]
pub struct Planner {
    method: SelMethod,
    lambda: Option<f64>,
    decisions: HashMap<(usize, usize), bool>,
}

impl Planner {
    /// `lambda = None` disables direct mixing.
    pub fn new(method: SelMethod, lambda: Option<f64>) -> Planner {
        Planner { method, lambda, decisions: HashMap::new() }
    }

    pub fn method(&self) -> SelMethod {
        self.method
    }

    /// Whether a direct `m`-selector of order `n` is used instead of the
    /// method's recursive construction. Deterministic and cached.
    pub fn choose_direct(&mut self, n: usize, m: usize) -> bool {
        let Some(lambda) = self.lambda else { return false };
        if m == 0 || n <= 1 || m > n {
            return false;
        }
        if let Some(&d) = self.decisions.get(&(n, m)) {
            return d;
        }
        let decision = match direct_clause_count(n, m) {
            None => false,
            Some(c_direct) => {
                let (v_rec, c_rec) = self.recursive_cost(n, m);
                lambda * m as f64 + c_direct as f64 <= lambda * v_rec as f64 + c_rec as f64
            }
        };
        self.decisions.insert((n, m), decision);
        decision
    }

    /// `(V, C)` of the method's own construction for `(n, m)`.
    pub fn recursive_cost(&mut self, n: usize, m: usize) -> (usize, usize) {
        let mut b = NetBuilder::new(n);
        let xs = b.inputs();
        let out = self.construct(&mut b, &xs, m);
        b.finish(out, m).cnf_cost()
    }

    /// Top-`k` selection of `xs` with the mixing rule applied at the top.
    pub fn select(&mut self, b: &mut NetBuilder, xs: &[Wire], k: usize) -> Vec<Wire> {
        self.sub_select(b, xs, k)
    }

    /// Recursive sub-selection inside a construction.
    pub fn sub_select(&mut self, b: &mut NetBuilder, xs: &[Wire], k: usize) -> Vec<Wire> {
        let n = xs.len();
        if k == 0 || n <= 1 {
            return xs.to_vec();
        }
        if self.choose_direct(n, k) {
            return b.selector(xs, k);
        }
        self.construct(b, xs, k)
    }

    fn construct(&mut self, b: &mut NetBuilder, xs: &[Wire], k: usize) -> Vec<Wire> {
        let n = xs.len();
        if k == 0 || n <= 1 {
            return xs.to_vec();
        }
        match self.method {
            SelMethod::Oe4 => oe4_sel_wires(b, xs, k, false, self),
            SelMethod::Oe2 => oe2_sel_wires(b, xs, k, self),
            SelMethod::Fourwise => mw_sel_wires(b, xs, k, None, self).expect("even split is valid"),
            SelMethod::Pairwise(v) => {
                let (padded, pads, kk) = pad_pow2(xs, k);
                let out = pw_sel_wires(b, &padded, kk, v, self);
                drop_false(b, out, pads)
            }
            SelMethod::BitonicSel => {
                let (padded, pads, kk) = pad_pow2(xs, k);
                let out = bit_sel_wires(b, &padded, kk);
                drop_false(b, out, pads)
            }
        }
    }
}

fn pad_pow2(xs: &[Wire], k: usize) -> (Vec<Wire>, usize, usize) {
    let n = xs.len().next_power_of_two();
    let mut padded = xs.to_vec();
    padded.resize(n, Wire::Const(false));
    (padded, n - xs.len(), k.next_power_of_two().min(n))
}

/// Selection network of order `(n, k)` for `method`; `lambda` enables
/// direct mixing.
pub fn selection_network(method: SelMethod, n: usize, k: usize, lambda: Option<f64>) -> Result<Network, NetError> {
    if k > n {
        return Err(domain(format!("k = {k} exceeds n = {n}")));
    }
    let mut planner = Planner::new(method, lambda);
    let mut b = NetBuilder::new(n);
    let xs = b.inputs();
    let out = planner.select(&mut b, &xs, k);
    Ok(b.finish(out, k))
}

fn build(n: usize, k: usize, f: impl FnOnce(&mut NetBuilder, &[Wire]) -> Vec<Wire>) -> Network {
    let mut b = NetBuilder::new(n);
    let xs = b.inputs();
    let out = f(&mut b, &xs);
    b.finish(out, k)
}

/// A single `m`-selector of order `n`.
pub fn direct_selector(n: usize, m: usize) -> Result<Network, NetError> {
    if m == 0 || m > n {
        return Err(domain(format!("selector needs 1 <= m <= n, got n = {n}, m = {m}")));
    }
    Ok(build(n, m, |b, xs| b.selector(xs, m)))
}

/// A splitter on `n` inputs.
pub fn splitter(kind: SplitKind, n: usize) -> Result<Network, NetError> {
    let ok = match kind {
        SplitKind::Plain | SplitKind::Bitonic => n.is_multiple_of(2),
        SplitKind::Half => n.is_multiple_of(4),
    };
    if !ok || n == 0 {
        return Err(domain(format!("splitter {kind:?} does not accept n = {n}")));
    }
    Ok(build(n, 0, |b, xs| split_wires(b, xs, kind)))
}

/// Odd-even merger of two sorted halves of length `n/2`.
pub fn oe_merge2(n: usize) -> Result<Network, NetError> {
    if !is_pow2(n) || n < 2 {
        return Err(domain(format!("oe_merge2 needs a power of two n >= 2, got {n}")));
    }
    Ok(build(n, n, |b, xs| batcher_merge_wires(b, &xs[..n / 2], &xs[n / 2..])))
}

/// Odd-even merge sorter.
pub fn oe_sort(n: usize) -> Result<Network, NetError> {
    if !is_pow2(n) {
        return Err(domain(format!("oe_sort needs a power of two, got {n}")));
    }
    Ok(build(n, n, oe_sort_wires))
}

/// Bitonic merger (`half = false`) or half-bitonic merger.
pub fn bitonic_merge(n: usize, half: bool) -> Result<Network, NetError> {
    if !is_pow2(n) {
        return Err(domain(format!("bitonic merger needs a power of two, got {n}")));
    }
    Ok(build(n, n, |b, xs| if half { half_bit_merge_wires(b, xs) } else { bit_merge_wires(b, xs) }))
}

/// Bitonic selection network.
pub fn bit_sel(n: usize, k: usize) -> Result<Network, NetError> {
    if !is_pow2(n) || !is_pow2(k) || k > n {
        return Err(domain(format!("bit_sel needs powers of two with k <= n, got ({n}, {k})")));
    }
    Ok(build(n, k, |b, xs| bit_sel_wires(b, xs, k)))
}

/// Pairwise merger on `n` inputs (`l` = first half, `r` = second half).
pub fn pw_merge(n: usize, k: usize, variant: PwVariant) -> Result<Network, NetError> {
    if !is_pow2(n) || !is_pow2(k) || k >= n {
        return Err(domain(format!("pw_merge needs powers of two with k < n, got ({n}, {k})")));
    }
    Ok(build(n, k, |b, xs| pw_merge_wires(b, &xs[..n / 2], &xs[n / 2..], k, variant)))
}

/// Pairwise selection network without direct mixing.
pub fn pw_sel(n: usize, k: usize, variant: PwVariant) -> Result<Network, NetError> {
    if !is_pow2(n) || !is_pow2(k) || k > n {
        return Err(domain(format!("pw_sel needs powers of two with k <= n, got ({n}, {k})")));
    }
    let mut planner = Planner::new(SelMethod::Pairwise(variant), None);
    Ok(build(n, k, |b, xs| pw_sel_wires(b, xs, k, variant, &mut planner)))
}

/// 4-wise selection network with the given column sizes.
pub fn mw_sel(n: usize, k: usize, cols: [usize; 4]) -> Result<Network, NetError> {
    if k == 0 || k > n {
        return Err(domain(format!("mw_sel needs 1 <= k <= n, got ({n}, {k})")));
    }
    let mut planner = Planner::new(SelMethod::Fourwise, None);
    let mut b = NetBuilder::new(n);
    let xs = b.inputs();
    let out = mw_sel_wires(&mut b, &xs, k, Some(cols), &mut planner)?;
    Ok(b.finish(out, k))
}

/// 4-wise merger over columns of the given lengths, laid out consecutively.
pub fn fourw_merge(col_lens: [usize; 4], k: usize) -> Result<Network, NetError> {
    let n: usize = col_lens.iter().sum();
    let mut b = NetBuilder::new(n);
    let xs = b.inputs();
    let mut cols: [Vec<Wire>; 4] = Default::default();
    let mut off = 0;
    for (c, &len) in cols.iter_mut().zip(&col_lens) {
        *c = xs[off..off + len].to_vec();
        off += len;
    }
    let out = fourw_merge_wires(&mut b, cols, k)?;
    Ok(b.finish(out, k))
}

/// The halving loop of the 4-wise merger alone, without the final row
/// corrections. Not a merger; used to count the loop's sorters.
pub fn fourw_merge_main_loop(col_lens: [usize; 4], k: usize) -> Result<Network, NetError> {
    let n: usize = col_lens.iter().sum();
    let mut b = NetBuilder::new(n);
    let xs = b.inputs();
    let mut cols: [Vec<Wire>; 4] = Default::default();
    let mut off = 0;
    for (c, &len) in cols.iter_mut().zip(&col_lens) {
        *c = xs[off..off + len].to_vec();
        off += len;
    }
    let out = fourw_merge_phases(&mut b, cols, k, false)?;
    Ok(b.finish(out, k))
}

/// Combine step over `x` (first `x_len` inputs) and `y` (the rest).
pub fn oe4_combine(x_len: usize, y_len: usize) -> Network {
    let n = x_len + y_len;
    build(n, n, |b, xs| oe4_combine_wires(b, &xs[..x_len], &xs[x_len..]))
}

/// 4-odd-even merger over consecutive sorted columns.
pub fn oe4_merge(col_lens: &[usize], k: usize) -> Result<Network, NetError> {
    if col_lens.len() > 4 || col_lens.windows(2).any(|w| w[0] < w[1]) {
        return Err(domain("oe4_merge needs at most four columns of non-increasing length"));
    }
    let n: usize = col_lens.iter().sum();
    if k == 0 || k > n || col_lens.first().is_some_and(|&w| w > k) {
        return Err(domain(format!("oe4_merge needs |w| <= k <= s, got k = {k}")));
    }
    let mut b = NetBuilder::new(n);
    let xs = b.inputs();
    let mut cols = Vec::new();
    let mut off = 0;
    for &len in col_lens {
        cols.push(xs[off..off + len].to_vec());
        off += len;
    }
    let out = oe4_merge_wires(&mut b, &cols, k);
    Ok(b.finish(out, k))
}

/// 4-odd-even selection network without direct mixing.
pub fn oe4_sel(n: usize, k: usize) -> Result<Network, NetError> {
    selection_network(SelMethod::Oe4, n, k, None)
}

/// m-column odd-even selection network (`m` ∈ {2, 4}) without direct mixing.
pub fn m_oe_sel(n: usize, k: usize, m: usize) -> Result<Network, NetError> {
    if k > n {
        return Err(domain(format!("k = {k} exceeds n = {n}")));
    }
    match m {
        2 => selection_network(SelMethod::Oe2, n, k, None),
        4 => Ok(build(n, k, |b, xs| oe4_sel_even(b, xs, k))),
        _ => Err(domain(format!("no merger for m = {m}"))),
    }
}

fn oe4_sel_even(b: &mut NetBuilder, xs: &[Wire], k: usize) -> Vec<Wire> {
    // Recursion keeps the even split at every level.
    let n = xs.len();
    if k == 0 || n <= 1 {
        return xs.to_vec();
    }
    if k == 1 {
        return b.selector(xs, 1);
    }
    let sizes = even_columns(n);
    let mut prefixes = Vec::new();
    let mut rest = Vec::new();
    let mut off = 0;
    for &s in sizes.iter().filter(|&&s| s > 0) {
        let ki = k.min(s);
        let y = oe4_sel_even(b, &xs[off..off + s], ki);
        off += s;
        prefixes.push(y[..ki].to_vec());
        rest.extend_from_slice(&y[ki..]);
    }
    let mut out = oe4_merge_wires(b, &prefixes, k);
    out.extend(rest);
    out
}
