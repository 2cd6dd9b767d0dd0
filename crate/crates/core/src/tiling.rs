//! Partition vectors `K_r`, p-adic boxes, and the r-tiling minimization
//! `s̃_p(r, S)` with its bijection to minimal-weight partitions.
//!
//! A partition `k_1 ≥ ... ≥ k_d ≥ 0` is determined by its jumps
//! `m_l = k_l - k_{l+1}` (with `k_{d+1} = 0`), and `Σ k_l = Σ l·m_l`.
//! Its weight is `Σ s_p(m_l)`. A tiling sequence is determined by the
//! digit `a` it places at each `(b, l)`, i.e. by integers `m_l` whose
//! base-`p` digits are those `a`; both sides are therefore indexed by the
//! same vectors `m`, which is what the bijection checks exploit.

use std::collections::BTreeSet;
use std::fmt;

use crate::arith::{self, digit_sum};
use crate::error::{Error, Result};

pub const MAX_R: u64 = 500;
pub const MAX_D: usize = 12;
/// Largest number of objects any enumeration here will materialize.
pub const MAX_OBJECTS: u128 = 5_000_000;

/// `k_1 ≥ k_2 ≥ ... ≥ k_d ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    pub k: Vec<u64>,
}

impl Partition {
    pub fn new(k: Vec<u64>) -> Result<Partition> {
        if k.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Unsupported(format!("{k:?} is not nonincreasing")));
        }
        Ok(Partition { k })
    }

    /// Partition of length `m.len()` with jumps `m_l = k_l - k_{l+1}`.
    pub fn from_jumps(m: &[u64]) -> Partition {
        let mut k = vec![0u64; m.len()];
        let mut acc = 0;
        for l in (0..m.len()).rev() {
            acc += m[l];
            k[l] = acc;
        }
        Partition { k }
    }

    pub fn r(&self) -> u64 {
        self.k.iter().sum()
    }

    pub fn d(&self) -> usize {
        self.k.len()
    }

    /// `m_l = k_l - k_{l+1}` for `l = 1..=d`.
    pub fn jumps(&self) -> Vec<u64> {
        (0..self.k.len())
            .map(|l| self.k[l] - self.k.get(l + 1).copied().unwrap_or(0))
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.k.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

fn guard_rd(r: u64, d: usize) -> Result<()> {
    if r > MAX_R || d > MAX_D {
        return Err(Error::Guardrail(format!(
            "r = {r}, d = {d} (limits r ≤ {MAX_R}, d ≤ {MAX_D})"
        )));
    }
    Ok(())
}

/// Number of partitions of `r` into at most `d` parts.
pub fn partition_count(r: u64, d: usize) -> u128 {
    let r = r as usize;
    let mut ways = vec![0u128; r + 1];
    ways[0] = 1;
    for part in 1..=d {
        for v in part..=r {
            ways[v] = ways[v].saturating_add(ways[v - part]);
        }
    }
    ways[r]
}

/// Every `k ∈ K_r` of length `d`, in decreasing lexicographic order.
pub fn enumerate_partitions(r: u64, d: usize) -> Result<Vec<Partition>> {
    guard_rd(r, d)?;
    if d == 0 {
        return Ok(if r == 0 { vec![Partition { k: vec![] }] } else { vec![] });
    }
    let count = partition_count(r, d);
    if count > MAX_OBJECTS {
        return Err(Error::Guardrail(format!(
            "K_{r} with d = {d} has {count} elements"
        )));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = Vec::with_capacity(d);
    fill_partitions(r, d, r, &mut cur, &mut out);
    Ok(out)
}

fn fill_partitions(rem: u64, slots: usize, cap: u64, cur: &mut Vec<u64>, out: &mut Vec<Partition>) {
    if slots == 0 {
        if rem == 0 {
            out.push(Partition { k: cur.clone() });
        }
        return;
    }
    let hi = rem.min(cap);
    let lo = rem.div_ceil(slots as u64);
    for part in (lo..=hi).rev() {
        cur.push(part);
        fill_partitions(rem - part, slots - 1, part, cur, out);
        cur.pop();
    }
}

/// `s_p(k) = Σ_l s_p(k_l - k_{l+1})`.
pub fn weight(k: &Partition, p: u64) -> u64 {
    k.jumps().iter().map(|&m| digit_sum(m, p)).sum()
}

/// Rows `l = 1..=d` (index `l - 1`), columns `v = 0..`; row `l` is row
/// `l + 1` plus the base-`p` digits of `k_l - k_{l+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicBox {
    pub entries: Vec<Vec<u64>>,
    pub p: u64,
}

impl PAdicBox {
    /// `Σ_v k_{l,v} p^v` for row index `l` (0-based).
    pub fn row_value(&self, l: usize) -> u64 {
        self.entries[l]
            .iter()
            .rev()
            .fold(0, |acc, &e| acc * self.p + e)
    }

    pub fn columns(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    /// `Σ_l k_{l,v}`.
    pub fn column_sum(&self, v: usize) -> u64 {
        self.entries.iter().map(|row| row[v]).sum()
    }

    pub fn max_entry(&self) -> u64 {
        self.entries
            .iter()
            .flat_map(|r| r.iter().copied())
            .max()
            .unwrap_or(0)
    }
}

pub fn padic_box(k: &Partition, p: u64) -> PAdicBox {
    let cols = k.k.first().map_or(0, |&k1| arith::digits(k1, p).len());
    let d = k.d();
    let mut entries = vec![vec![0u64; cols]; d];
    let jumps = k.jumps();
    for l in (0..d).rev() {
        if l + 1 < d {
            entries[l] = entries[l + 1].clone();
        }
        for (v, dig) in arith::digits(jumps[l], p).into_iter().enumerate() {
            entries[l][v] += dig;
        }
    }
    PAdicBox { entries, p }
}

/// `s̃_p(r, S)`; `Infinite` when no tiling exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TilingWeight {
    Finite(u64),
    Infinite,
}

impl TilingWeight {
    pub fn finite(self) -> Option<u64> {
        match self {
            TilingWeight::Finite(w) => Some(w),
            TilingWeight::Infinite => None,
        }
    }
}

impl fmt::Display for TilingWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TilingWeight::Finite(w) => write!(f, "{w}"),
            TilingWeight::Infinite => write!(f, "inf"),
        }
    }
}

/// One triple `[a, b, l]`: `a` copies of `l·p^b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile {
    pub a: u64,
    pub b: u32,
    pub l: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TilingSequence {
    pub tiles: Vec<Tile>,
}

impl TilingSequence {
    pub fn length(&self) -> u64 {
        self.tiles.iter().map(|t| t.a).sum()
    }

    /// Checks the ordering, range and sum conditions.
    pub fn is_valid(&self, r: u64, s: &BTreeSet<u64>, p: u64) -> bool {
        let ordered = self.tiles.windows(2).all(|w| {
            w[0].b < w[1].b || (w[0].b == w[1].b && w[0].l > w[1].l)
        });
        let ranges = self
            .tiles
            .iter()
            .all(|t| s.contains(&t.l) && (1..p).contains(&t.a));
        let total: Option<u64> = self.tiles.iter().try_fold(0u64, |acc, t| {
            acc.checked_add(t.a.checked_mul(t.l)?.checked_mul(p.checked_pow(t.b)?)?)
        });
        ordered && ranges && total == Some(r)
    }

    /// The jump vector `m_l = Σ_{tiles with this l} a·p^b`, indexed `l - 1`.
    pub fn jumps(&self, d: usize, p: u64) -> Vec<u64> {
        let mut m = vec![0u64; d];
        for t in &self.tiles {
            m[t.l as usize - 1] += t.a * p.pow(t.b);
        }
        m
    }

    /// Box built from the tiling: `k_{l,v} = Σ a_i` over tiles with
    /// `b_i = v` and `l ≤ l_i`.
    pub fn to_box(&self, d: usize, p: u64) -> PAdicBox {
        let cols = self.tiles.iter().map(|t| t.b as usize + 1).max().unwrap_or(0);
        let mut entries = vec![vec![0u64; cols]; d];
        for t in &self.tiles {
            for row in entries.iter_mut().take(t.l as usize) {
                row[t.b as usize] += t.a;
            }
        }
        PAdicBox { entries, p }
    }

    /// The partition whose rows are read off [`TilingSequence::to_box`].
    pub fn to_partition(&self, d: usize, p: u64) -> Partition {
        let b = self.to_box(d, p);
        Partition {
            k: (0..d).map(|l| b.row_value(l)).collect(),
        }
    }
}

impl fmt::Display for TilingSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .tiles
            .iter()
            .map(|t| format!("[{},{},{}]", t.a, t.b, t.l))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn check_set(s: &BTreeSet<u64>) -> Result<()> {
    if s.is_empty() || s.contains(&0) {
        return Err(Error::Unsupported(
            "S must be a nonempty set of positive integers".into(),
        ));
    }
    Ok(())
}

/// Tiles `(b, l, l·p^b)` with `l·p^b ≤ r`, in sequence order: `b`
/// ascending, `l` descending.
fn items(r: u64, s: &BTreeSet<u64>, p: u64) -> Vec<(u32, u64, u64)> {
    let mut out = Vec::new();
    let mut b = 0u32;
    let mut pb = 1u64;
    loop {
        let before = out.len();
        for &l in s.iter().rev() {
            if let Some(w) = l.checked_mul(pb).filter(|&w| w <= r) {
                out.push((b, l, w));
            }
        }
        if out.len() == before {
            break;
        }
        b += 1;
        pb = match pb.checked_mul(p) {
            Some(x) => x,
            None => break,
        };
    }
    out
}

const INF: u64 = u64::MAX;

/// `s̃_p(r', S)` for every `r' ≤ r_max` by a bounded-multiplicity
/// exact-sum knapsack (items outer, multiplicity `≤ p-1`, unit cost).
pub fn tilde_s_table(r_max: u64, s: &BTreeSet<u64>, p: u64) -> Result<Vec<TilingWeight>> {
    check_set(s)?;
    let n = r_max as usize;
    let mut dp = vec![INF; n + 1];
    dp[0] = 0;
    for (_, _, w) in items(r_max, s, p) {
        let w = w as usize;
        let prev = dp.clone();
        for v in w..=n {
            for m in 1..p as usize {
                let Some(from) = v.checked_sub(m * w) else { break };
                if prev[from] != INF {
                    dp[v] = dp[v].min(prev[from] + m as u64);
                }
            }
        }
    }
    Ok(dp
        .into_iter()
        .map(|x| {
            if x == INF {
                TilingWeight::Infinite
            } else {
                TilingWeight::Finite(x)
            }
        })
        .collect())
}

pub fn tilde_s(r: u64, s: &BTreeSet<u64>, p: u64) -> Result<TilingWeight> {
    Ok(tilde_s_table(r, s, p)?[r as usize])
}

/// Minimum of `Σ_l s_p(m_l)` over every vector `(m_l)_{l∈S}` with
/// `Σ l·m_l = r'`, for all `r' ≤ r_max`, by direct enumeration of the
/// vectors. Each vector is one tiling sequence (its digits are the `a_i`).
pub fn exhaustive_tilde_s_table(r_max: u64, s: &BTreeSet<u64>, p: u64) -> Result<Vec<TilingWeight>> {
    check_set(s)?;
    let ls: Vec<u64> = s.iter().copied().filter(|&l| l <= r_max.max(1)).collect();
    let mut best = vec![INF; r_max as usize + 1];
    fn walk(ls: &[u64], p: u64, sum: u64, cost: u64, r_max: u64, best: &mut [u64]) {
        match ls.split_first() {
            None => {
                let slot = &mut best[sum as usize];
                *slot = (*slot).min(cost);
            }
            Some((&l, rest)) => {
                let mut m = 0u64;
                while sum + l * m <= r_max {
                    walk(rest, p, sum + l * m, cost + digit_sum(m, p), r_max, best);
                    m += 1;
                }
            }
        }
    }
    walk(&ls, p, 0, 0, r_max, &mut best);
    Ok(best
        .into_iter()
        .map(|x| {
            if x == INF {
                TilingWeight::Infinite
            } else {
                TilingWeight::Finite(x)
            }
        })
        .collect())
}

/// Every valid r-tiling sequence, built tile by tile in sequence order.
pub fn enumerate_tilings(r: u64, s: &BTreeSet<u64>, p: u64) -> Result<Vec<TilingSequence>> {
    check_set(s)?;
    guard_rd(r, 0)?;
    let its = items(r, s, p);
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn walk(
        its: &[(u32, u64, u64)],
        rem: u64,
        p: u64,
        cur: &mut Vec<Tile>,
        out: &mut Vec<TilingSequence>,
    ) -> Result<()> {
        if rem == 0 {
            if out.len() as u128 >= MAX_OBJECTS {
                return Err(Error::Guardrail("too many tiling sequences".into()));
            }
            out.push(TilingSequence { tiles: cur.clone() });
            return Ok(());
        }
        let Some((&(b, l, w), rest)) = its.split_first() else {
            return Ok(());
        };
        for a in 0..p {
            if a * w > rem {
                break;
            }
            if a > 0 {
                cur.push(Tile { a, b, l });
            }
            walk(rest, rem - a * w, p, cur, out)?;
            if a > 0 {
                cur.pop();
            }
        }
        Ok(())
    }
    walk(&its, r, p, &mut cur, &mut out)?;
    Ok(out)
}

/// All shortest r-tiling sequences, in increasing order. Empty when
/// `s̃_p(r, S)` is infinite.
pub fn shortest_tilings(r: u64, s: &BTreeSet<u64>, p: u64) -> Result<Vec<TilingSequence>> {
    check_set(s)?;
    guard_rd(r, 0)?;
    let its = items(r, s, p);
    let n = r as usize;
    // best[i][v]: fewest units to make v from items i.. .
    let mut best = vec![vec![INF; n + 1]; its.len() + 1];
    best[its.len()][0] = 0;
    for i in (0..its.len()).rev() {
        let w = its[i].2 as usize;
        for v in 0..=n {
            let mut b = best[i + 1][v];
            for m in 1..p as usize {
                let Some(from) = v.checked_sub(m * w) else { break };
                if best[i + 1][from] != INF {
                    b = b.min(best[i + 1][from] + m as u64);
                }
            }
            best[i][v] = b;
        }
    }
    let mut out = Vec::new();
    if best[0][n] == INF {
        return Ok(out);
    }
    let mut cur = Vec::new();
    fn walk(
        i: usize,
        v: usize,
        its: &[(u32, u64, u64)],
        best: &[Vec<u64>],
        p: u64,
        cur: &mut Vec<Tile>,
        out: &mut Vec<TilingSequence>,
    ) -> Result<()> {
        if i == its.len() {
            if out.len() as u128 >= MAX_OBJECTS {
                return Err(Error::Guardrail("too many shortest tilings".into()));
            }
            out.push(TilingSequence { tiles: cur.clone() });
            return Ok(());
        }
        let (b, l, w) = its[i];
        for a in 0..p {
            let Some(from) = v.checked_sub((a * w) as usize) else { break };
            if best[i + 1][from] != INF && best[i + 1][from] + a == best[i][v] {
                if a > 0 {
                    cur.push(Tile { a, b, l });
                }
                walk(i + 1, from, its, best, p, cur, out)?;
                if a > 0 {
                    cur.pop();
                }
            }
        }
        Ok(())
    }
    walk(0, n, &its, &best, p, &mut cur, &mut out)?;
    out.sort();
    Ok(out)
}

/// Every jump vector over `S` (entries outside `S` zero, length `d`) with
/// `Σ l·m_l = r`, as partitions.
pub fn constrained_partitions(r: u64, s: &BTreeSet<u64>, d: usize) -> Result<Vec<Partition>> {
    check_set(s)?;
    guard_rd(r, d)?;
    if s.iter().any(|&l| l as usize > d) {
        return Err(Error::Unsupported(format!("max(S) exceeds d = {d}")));
    }
    let ls: Vec<u64> = s.iter().copied().collect();
    let mut out = Vec::new();
    let mut m = vec![0u64; d];
    fn walk(
        ls: &[u64],
        rem: u64,
        m: &mut Vec<u64>,
        out: &mut Vec<Partition>,
    ) -> Result<()> {
        match ls.split_first() {
            None => {
                if rem == 0 {
                    if out.len() as u128 >= MAX_OBJECTS {
                        return Err(Error::Guardrail("too many constrained partitions".into()));
                    }
                    out.push(Partition::from_jumps(m));
                }
                Ok(())
            }
            Some((&l, rest)) => {
                for c in 0..=rem / l {
                    m[l as usize - 1] = c;
                    walk(rest, rem - c * l, m, out)?;
                }
                m[l as usize - 1] = 0;
                Ok(())
            }
        }
    }
    walk(&ls, r, &mut m, &mut out)?;
    out.sort();
    out.reverse();
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BijectionViolation {
    /// A constrained partition lighter than `s̃`.
    BelowTildeS(Partition),
    /// A tiling whose image is not a minimal constrained partition.
    ImageNotMinimal(TilingSequence, Partition),
    /// The tiling's box disagrees with the p-adic box of its image.
    BoxMismatch(TilingSequence),
    /// Two tilings share this image.
    NotInjective(Partition),
    /// A minimal partition outside the image.
    Missed(Partition),
}

impl fmt::Display for BijectionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BijectionViolation::BelowTildeS(k) => write!(f, "partition {k} is lighter than s~"),
            BijectionViolation::ImageNotMinimal(t, k) => {
                write!(f, "tiling {t} maps to non-minimal {k}")
            }
            BijectionViolation::BoxMismatch(t) => write!(f, "box of tiling {t} is not a p-adic box"),
            BijectionViolation::NotInjective(k) => write!(f, "two tilings map to {k}"),
            BijectionViolation::Missed(k) => write!(f, "minimal partition {k} has no tiling"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BijectionReport {
    pub tilde_s: TilingWeight,
    pub tilings: usize,
    pub constrained: usize,
    pub minimal: usize,
    pub violation: Option<BijectionViolation>,
}

impl BijectionReport {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks that no constrained partition (`k_l = k_{l+1}` for `l ∉ S`) is
/// lighter than `s̃_p(r, S)`, and that the box construction maps shortest
/// tilings bijectively onto the constrained partitions of weight `s̃`.
pub fn bijection_check(r: u64, s: &BTreeSet<u64>, p: u64, d: usize) -> Result<BijectionReport> {
    let ts = tilde_s(r, s, p)?;
    let constrained = constrained_partitions(r, s, d)?;
    let tilings = shortest_tilings(r, s, p)?;
    let mut report = BijectionReport {
        tilde_s: ts,
        tilings: tilings.len(),
        constrained: constrained.len(),
        minimal: 0,
        violation: None,
    };
    let mut minimal = BTreeSet::new();
    for k in &constrained {
        let w = TilingWeight::Finite(weight(k, p));
        if w < ts {
            report.violation = Some(BijectionViolation::BelowTildeS(k.clone()));
            return Ok(report);
        }
        if w == ts {
            minimal.insert(k.clone());
        }
    }
    report.minimal = minimal.len();
    let mut image = BTreeSet::new();
    for t in &tilings {
        let k = t.to_partition(d, p);
        if !minimal.contains(&k) {
            report.violation = Some(BijectionViolation::ImageNotMinimal(t.clone(), k));
            return Ok(report);
        }
        if padic_box(&k, p) != trimmed_box(t.to_box(d, p), &k, p) {
            report.violation = Some(BijectionViolation::BoxMismatch(t.clone()));
            return Ok(report);
        }
        if !image.insert(k.clone()) {
            report.violation = Some(BijectionViolation::NotInjective(k));
            return Ok(report);
        }
    }
    if let Some(k) = minimal.difference(&image).next() {
        report.violation = Some(BijectionViolation::Missed(k.clone()));
    }
    Ok(report)
}

/// Pads or trims a tiling box to the column count [`padic_box`] uses.
fn trimmed_box(mut b: PAdicBox, k: &Partition, p: u64) -> PAdicBox {
    let cols = k.k.first().map_or(0, |&k1| arith::digits(k1, p).len());
    for row in b.entries.iter_mut() {
        row.resize(cols.max(row.len()), 0);
        if row[cols..].iter().all(|&x| x == 0) {
            row.truncate(cols);
        }
    }
    b
}

/// Minimum weight over all of `K_r` with `d` parts, with a minimizer.
/// Exact: `K_r` is in bijection with jump vectors `m ∈ N^d`,
/// `Σ l·m_l = r`, and the weight is `Σ s_p(m_l)`.
pub fn min_weight(r: u64, d: usize, p: u64) -> (u64, Partition) {
    let n = r as usize;
    // best[l][v]: least weight using jumps m_1..m_l with Σ l·m_l = v.
    let mut best = vec![vec![INF; n + 1]; d + 1];
    best[0][0] = 0;
    for l in 1..=d {
        for v in 0..=n {
            let mut b = INF;
            let mut m = 0usize;
            while m * l <= v {
                let prev = best[l - 1][v - m * l];
                if prev != INF {
                    b = b.min(prev + digit_sum(m as u64, p));
                }
                m += 1;
            }
            best[l][v] = b;
        }
    }
    let mut jumps = vec![0u64; d];
    let mut v = n;
    for l in (1..=d).rev() {
        let mut m = 0usize;
        loop {
            let prev = best[l - 1][v - m * l];
            if prev != INF && prev + digit_sum(m as u64, p) == best[l][v] {
                break;
            }
            m += 1;
        }
        jumps[l - 1] = m as u64;
        v -= m * l;
    }
    (best[d][n], Partition::from_jumps(&jumps))
}

/// Every `k ∈ K_r` (length `d`) whose weight is exactly `w`, up to `cap`
/// results; the flag reports truncation.
pub fn partitions_of_weight(r: u64, d: usize, p: u64, w: u64, cap: usize) -> (Vec<Partition>, bool) {
    let light: Vec<u64> = (0..=r).filter(|&m| digit_sum(m, p) <= w).collect();
    let mut out = Vec::new();
    let mut m = vec![0u64; d];
    let mut truncated = false;
    #[allow(clippy::too_many_arguments)]
    fn walk(
        l: usize,
        rem: u64,
        wrem: u64,
        p: u64,
        light: &[u64],
        m: &mut Vec<u64>,
        out: &mut Vec<Partition>,
        cap: usize,
        truncated: &mut bool,
    ) {
        if *truncated {
            return;
        }
        if l == 1 {
            if digit_sum(rem, p) == wrem {
                m[0] = rem;
                if out.len() >= cap {
                    *truncated = true;
                    return;
                }
                out.push(Partition::from_jumps(m));
            }
            return;
        }
        for &c in light {
            if c * l as u64 > rem {
                break;
            }
            let cw = digit_sum(c, p);
            if cw > wrem {
                continue;
            }
            m[l - 1] = c;
            walk(l - 1, rem - c * l as u64, wrem - cw, p, light, m, out, cap, truncated);
        }
        m[l - 1] = 0;
    }
    if d == 0 {
        return (out, false);
    }
    walk(d, r, w, p, &light, &mut m, &mut out, cap, &mut truncated);
    out.sort();
    out.reverse();
    (out, truncated)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KboxReport {
    pub r: u64,
    pub d: usize,
    /// `⌈s_p(r) / (h(p-1))⌉`.
    pub bound: u64,
    pub min_weight: u64,
    /// A lightest partition; a counterexample when `part1` fails.
    pub witness: Partition,
    pub part1: bool,
    /// Partitions of weight exactly `bound`.
    pub attaining: usize,
    /// Whether `h(p-1)·bound = s_p(r)`, the case in which the digit
    /// estimates are all equalities.
    pub exact: bool,
    /// Box entries are 0/1 (or up to 2 when `(p²-1)/2 ≤ d < p²-1`), on
    /// attaining partitions in the exact case.
    pub part2a: bool,
    /// `s_p(Σ_l k_{l,v}) = k_{1,v}·h(p-1)` for all `v`, same scope.
    pub part2b: bool,
    /// For `r = j(p^{bh}-1)`: attaining boxes are 0/1.
    pub part2c: Option<bool>,
    /// Attaining partitions outside the exact case that break the
    /// columnwise identity (informational).
    pub inexact_2b_exceptions: usize,
    pub first_failure: Option<Partition>,
    pub truncated: bool,
}

impl KboxReport {
    pub fn holds(&self) -> bool {
        self.part1 && self.part2a && self.part2b && self.part2c != Some(false)
    }
}

/// Cap on attaining partitions examined per instance.
pub const KBOX_ATTAINING_CAP: usize = 200_000;

/// Digit-sum inequalities for partitions of `r` with `d = j(p^h - 1)` parts.
pub fn kbox_check(r: u64, j: u64, h: u32, p: u64) -> Result<KboxReport> {
    arith::require_prime(p)?;
    if !(1..p).contains(&j) || h == 0 {
        return Err(Error::Unsupported(format!(
            "need 1 ≤ j ≤ p-1 and h ≥ 1, got j = {j}, h = {h}"
        )));
    }
    let d = arith::checked_pow(p, h)
        .and_then(|x| (x - 1).checked_mul(j))
        .filter(|&d| d as usize <= MAX_D)
        .ok_or_else(|| Error::Guardrail(format!("d = j(p^h - 1) exceeds {MAX_D}")))?
        as usize;
    guard_rd(r, d)?;
    if r == 0 {
        return Err(Error::Unsupported("r must be positive".into()));
    }
    let hp = h as u64 * (p - 1);
    let spr = digit_sum(r, p);
    let bound = spr.div_ceil(hp);
    let (min_w, witness) = min_weight(r, d, p);
    let exact = hp * bound == spr;
    let (attaining, truncated) = partitions_of_weight(r, d, p, bound, KBOX_ATTAINING_CAP);
    let allow_two = 2 * d as u64 + 1 >= p * p && (d as u64) < p * p - 1;
    let entry_cap = if allow_two { 2 } else { 1 };
    let special = (1..=64u32).any(|b| {
        arith::checked_pow(p, b * h).is_some_and(|pb| (pb - 1).checked_mul(j) == Some(r))
    });
    let mut report = KboxReport {
        r,
        d,
        bound,
        min_weight: min_w,
        witness,
        part1: min_w >= bound,
        attaining: attaining.len(),
        exact,
        part2a: true,
        part2b: true,
        part2c: special.then_some(true),
        inexact_2b_exceptions: 0,
        first_failure: None,
        truncated,
    };
    for k in &attaining {
        let bx = padic_box(k, p);
        let col_ok = (0..bx.columns())
            .all(|v| digit_sum(bx.column_sum(v), p) == bx.entries[0][v] * hp);
        if exact {
            if bx.max_entry() > entry_cap {
                report.part2a = false;
            }
            if !col_ok {
                report.part2b = false;
            }
        } else if !col_ok {
            report.inexact_2b_exceptions += 1;
        }
        if special && bx.max_entry() > 1 {
            report.part2c = Some(false);
        }
        if report.first_failure.is_none() && !(report.part2a && report.part2b && report.part2c != Some(false)) {
            report.first_failure = Some(k.clone());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    fn part(k: &[u64]) -> Partition {
        Partition::new(k.to_vec()).unwrap()
    }

    #[test]
    fn partitions_small() {
        let ks = enumerate_partitions(3, 2).unwrap();
        assert_eq!(ks, vec![part(&[3, 0]), part(&[2, 1])]);
        assert_eq!(enumerate_partitions(0, 3).unwrap(), vec![part(&[0, 0, 0])]);
        assert_eq!(enumerate_partitions(4, 4).unwrap().len(), 5);
        assert_eq!(partition_count(4, 4), 5);
        assert!(enumerate_partitions(501, 2).is_err());
        assert!(enumerate_partitions(500, 12).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(weight(&part(&[1, 1, 1]), 2), 1);
        assert_eq!(weight(&part(&[3, 1]), 2), 2);
        assert_eq!(weight(&part(&[5, 0, 0]), 5), 1);
    }

    #[test]
    fn boxes() {
        let b = padic_box(&part(&[1, 1, 1]), 2);
        assert_eq!(b.entries, vec![vec![1], vec![1], vec![1]]);
        let b = padic_box(&part(&[0, 0]), 3);
        assert_eq!(b.max_entry(), 0);
        let b = padic_box(&part(&[2, 1]), 2);
        assert_eq!(b.entries, vec![vec![2, 0], vec![1, 0]]);
        assert_eq!(b.row_value(0), 2);
    }

    #[test]
    fn tilde_s_examples() {
        assert_eq!(tilde_s(3, &set(&[1, 3]), 2).unwrap(), TilingWeight::Finite(1));
        assert_eq!(tilde_s(1, &set(&[2]), 2).unwrap(), TilingWeight::Infinite);
        assert_eq!(tilde_s(12, &set(&[3]), 2).unwrap(), TilingWeight::Finite(1));
    }

    #[test]
    fn shortest_examples() {
        let t = shortest_tilings(3, &set(&[1, 3]), 2).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].to_string(), "[[1,0,3]]");
        let t = shortest_tilings(2, &set(&[1]), 2).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].to_string(), "[[1,1,1]]");
        for p in [2, 3, 5, 7] {
            let t = shortest_tilings(1, &set(&[1]), p).unwrap();
            assert_eq!(t[0].to_string(), "[[1,0,1]]");
        }
        assert!(shortest_tilings(1, &set(&[2]), 2).unwrap().is_empty());
    }

    #[test]
    fn bijection_examples() {
        assert!(bijection_check(3, &set(&[1, 3]), 2, 3).unwrap().holds());
        let r = bijection_check(1, &set(&[2]), 2, 2).unwrap();
        assert!(r.holds());
        assert_eq!((r.tilings, r.minimal), (0, 0));
        assert!(bijection_check(6, &set(&[1, 2, 3]), 3, 3).unwrap().holds());
    }

    #[test]
    fn kbox_examples() {
        let r = kbox_check(3, 1, 2, 2).unwrap();
        assert_eq!(r.bound, 1);
        assert_eq!(r.min_weight, 1);
        assert!(r.holds());
        assert!(kbox_check(4, 2, 1, 3).unwrap().part1);
        for b in 1..=2u32 {
            let r = kbox_check(2u64.pow(2 * b) - 1, 1, 2, 2).unwrap();
            assert_eq!(r.part2c, Some(true));
            assert!(r.holds());
        }
    }

    #[test]
    fn min_weight_matches_enumeration() {
        for p in [2, 3, 5] {
            for d in [1, 2, 3, 4, 7] {
                for r in 0..=24 {
                    let ks = enumerate_partitions(r, d).unwrap();
                    let brute = ks.iter().map(|k| weight(k, p)).min().unwrap_or(INF);
                    let (w, k) = min_weight(r, d, p);
                    assert_eq!(w, brute, "p={p} d={d} r={r}");
                    assert_eq!(weight(&k, p), w);
                    assert_eq!(k.r(), r);
                }
            }
        }
    }

    #[test]
    fn weight_classes_match_enumeration() {
        for p in [2, 3] {
            for d in [2, 3, 4] {
                for r in 1..=20 {
                    let ks = enumerate_partitions(r, d).unwrap();
                    for w in 0..6 {
                        let mut brute: Vec<_> =
                            ks.iter().filter(|k| weight(k, p) == w).cloned().collect();
                        brute.sort();
                        brute.reverse();
                        let (fast, trunc) = partitions_of_weight(r, d, p, w, usize::MAX);
                        assert!(!trunc);
                        assert_eq!(fast, brute, "p={p} d={d} r={r} w={w}");
                    }
                }
            }
        }
    }

    #[test]
    fn constrained_matches_filter() {
        for (s, d) in [(set(&[1, 3]), 3), (set(&[2, 3]), 4), (set(&[1, 2, 4]), 4)] {
            for r in 0..=18 {
                let mut brute: Vec<Partition> = enumerate_partitions(r, d)
                    .unwrap()
                    .into_iter()
                    .filter(|k| {
                        k.jumps()
                            .iter()
                            .enumerate()
                            .all(|(l, &m)| m == 0 || s.contains(&(l as u64 + 1)))
                    })
                    .collect();
                brute.sort();
                brute.reverse();
                assert_eq!(constrained_partitions(r, &s, d).unwrap(), brute);
            }
        }
    }

    #[test]
    fn literal_tilings_agree_with_vectors() {
        for p in [2, 3, 5] {
            for s in [set(&[1]), set(&[2, 3]), set(&[1, 4, 6])] {
                let table = exhaustive_tilde_s_table(40, &s, p).unwrap();
                for r in 1..=40 {
                    let all = enumerate_tilings(r, &s, p).unwrap();
                    assert!(all.iter().all(|t| t.is_valid(r, &s, p)));
                    let best = all.iter().map(|t| t.length()).min();
                    assert_eq!(best, table[r as usize].finite(), "p={p} S={s:?} r={r}");
                    let shortest = shortest_tilings(r, &s, p).unwrap();
                    let mut expect: Vec<_> = all
                        .into_iter()
                        .filter(|t| Some(t.length()) == best)
                        .collect();
                    expect.sort();
                    assert_eq!(shortest, expect);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn dp_matches_exhaustive(
            p in prop::sample::select(vec![2u64, 3, 5]),
            s in prop::collection::btree_set(1u64..=12, 1..=4),
        ) {
            let dp = tilde_s_table(120, &s, p).unwrap();
            let ex = exhaustive_tilde_s_table(120, &s, p).unwrap();
            prop_assert_eq!(dp, ex);
        }

        #[test]
        fn superadditive(
            p in prop::sample::select(vec![2u64, 3, 5]),
            s in prop::collection::btree_set(1u64..=12, 1..=4),
            r1 in 1u64..100, r2 in 1u64..100,
        ) {
            let t = tilde_s_table(r1 + r2, &s, p).unwrap();
            if let (Some(a), Some(b)) = (t[r1 as usize].finite(), t[r2 as usize].finite()) {
                let sum = t[(r1 + r2) as usize].finite();
                prop_assert!(sum.is_some_and(|c| c <= a + b));
            }
        }

        #[test]
        fn boxes_reconstruct(k in prop::collection::vec(0u64..300, 1..12), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
            let mut k = k;
            k.sort_unstable_by(|a, b| b.cmp(a));
            let part = Partition::new(k).unwrap();
            let b = padic_box(&part, p);
            for l in 0..part.d() {
                prop_assert_eq!(b.row_value(l), part.k[l]);
            }
            prop_assert_eq!(Partition::from_jumps(&part.jumps()), part.clone());
        }

        #[test]
        fn sigma_chain(
            p in prop::sample::select(vec![2u64, 3, 5]),
            s in prop::collection::btree_set(1u64..=12, 1..=4),
        ) {
            let sigma = s.iter().map(|&l| digit_sum(l, p)).max().unwrap();
            let t = tilde_s_table(150, &s, p).unwrap();
            for (r, w) in t.iter().enumerate().skip(1) {
                if let Some(w) = w.finite() {
                    prop_assert!(sigma * w >= digit_sum(r as u64, p));
                }
            }
        }
    }
}
