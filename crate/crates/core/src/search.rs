//! Exhaustive enumeration of valid configurations under weight and width
//! bounds, plus verifiers for the classification theorems.
//!
//! The search fixes a gap vector, then builds the edge multiset vertex by
//! vertex in moment order. When `P_i` is processed it receives its upward
//! edges; `P_{i+1}` must be complete afterwards. Once `c_1 = k[ω]` is fixed,
//! every `Γ_i = Γ_0 - kφ_i` is known, so the upward weights at `P_i` have a
//! prescribed sum.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohomology::{ring_presentation, total_chern};
use crate::constraints::{
    check_all, check_smallest_weight_pairing, compute_c1, CheckFlags, MAX_C1,
};
use crate::examples::{builtin, Builtin};
use crate::model::{
    canonicalize, derive_weight_system, Configuration, MomentProfile, WeightEdge, POINTS,
    WEIGHTS_PER_POINT,
};

const GAPS: usize = POINTS - 1;
const LAST: usize = POINTS - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invalid search spec: {0}")]
    InvalidSpec(String),
    #[error("node budget of {0} exhausted")]
    BudgetExceeded(u64),
}

/// Rules the enumerator may use to cut branches before a configuration is
/// complete. Turning a toggle off never changes the result, only the cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PruningToggles {
    /// Only offer weights that divide the moment gap of their edge.
    pub divisibility: bool,
    /// Fix `P_0P_1` and `P_4P_5` to weights equal to their gaps.
    pub extremal_edges: bool,
    /// Branch on `c_1` and prescribe the weight sum at each vertex.
    pub gamma_sums: bool,
    /// Enumerate one gap vector of each reversal pair.
    pub flip_symmetry: bool,
}

impl Default for PruningToggles {
    fn default() -> Self {
        PruningToggles {
            divisibility: true,
            extremal_edges: true,
            gamma_sums: true,
            flip_symmetry: true,
        }
    }
}

impl PruningToggles {
    pub fn none() -> Self {
        PruningToggles {
            divisibility: false,
            extremal_edges: false,
            gamma_sums: false,
            flip_symmetry: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub max_weight: i64,
    pub max_width: i64,
    #[serde(default)]
    pub c1: Option<i64>,
    /// Vertex pairs that must carry an edge of the largest weight.
    #[serde(default)]
    pub largest_from: Vec<(usize, usize)>,
    #[serde(default)]
    pub require_effective: bool,
    /// Require `φ_1 - φ_0 = φ_5 - φ_4` and `φ_2 - φ_0 = φ_5 - φ_3`.
    #[serde(default)]
    pub symmetry_gaps: bool,
    #[serde(default)]
    pub pruning: PruningToggles,
    #[serde(default)]
    pub node_limit: Option<u64>,
}

impl SearchSpec {
    pub fn new(max_weight: i64, max_width: i64) -> Self {
        SearchSpec {
            max_weight,
            max_width,
            c1: None,
            largest_from: Vec::new(),
            require_effective: false,
            symmetry_gaps: false,
            pruning: PruningToggles::default(),
            node_limit: None,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.max_weight < 1 {
            return Err(SearchError::InvalidSpec(
                "max_weight must be at least 1".into(),
            ));
        }
        if self.max_width < GAPS as i64 {
            return Err(SearchError::InvalidSpec(format!(
                "max_width must be at least {GAPS}"
            )));
        }
        if let Some(k) = self.c1 {
            if !(1..=MAX_C1).contains(&k) {
                return Err(SearchError::InvalidSpec(format!(
                    "c1 must lie in 1..={MAX_C1}"
                )));
            }
        }
        if let Some(&(i, j)) = self
            .largest_from
            .iter()
            .find(|(i, j)| i >= j || *j >= POINTS)
        {
            return Err(SearchError::InvalidSpec(format!(
                "largest_from pair ({i}, {j}) is not ordered"
            )));
        }
        Ok(())
    }

    /// Filters that do not depend on the orientation of the circle action.
    fn passes_filters(&self, c: &Configuration) -> bool {
        if !self.largest_from.is_empty() {
            let top = c.largest_weight();
            let ok = |c: &Configuration| {
                self.largest_from.iter().all(|&(i, j)| {
                    c.edges()
                        .iter()
                        .any(|e| e.lo == i && e.hi == j && e.weight == top)
                })
            };
            if !ok(c) && !ok(&c.flipped()) {
                return false;
            }
        }
        if self.require_effective && c.weight_gcd() != 1 {
            return false;
        }
        true
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Partial configurations in which some vertex was completed.
    pub nodes: u64,
    /// Complete edge multisets reached.
    pub leaves: u64,
    /// Rejections by cause. A leaf failing a quick pre-check is counted under
    /// that rule only; one failing the full check counts every failing rule.
    pub pruned: BTreeMap<String, u64>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SearchStats {
    fn bump(&mut self, key: &str) {
        *self.pruned.entry(key.to_string()).or_insert(0) += 1;
    }

    fn merge(&mut self, other: SearchStats) {
        self.nodes += other.nodes;
        self.leaves += other.leaves;
        for (k, v) in other.pruned {
            *self.pruned.entry(k).or_insert(0) += v;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub spec: SearchSpec,
    /// Canonical representatives, sorted and free of duplicates.
    pub configurations: Vec<Configuration>,
    pub stats: SearchStats,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("search result serializes")
    }

    pub fn weight_systems(&self) -> Vec<WeightSystemClass> {
        collapse(&self.configurations)
    }
}

/// Configurations sharing moment values and per-point weight multisets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightSystemClass {
    pub moment: [i64; POINTS],
    pub weights: [Vec<i64>; POINTS],
    pub c1: Option<i64>,
    pub pairings: Vec<Configuration>,
}

/// Upper endpoint and weight of an edge leaving the current vertex.
type Slot = (usize, i64);

/// Moment values and per-point weights: what two pairings of one weight system share.
type SystemKey = ([i64; POINTS], [Vec<i64>; POINTS]);

pub fn collapse(configs: &[Configuration]) -> Vec<WeightSystemClass> {
    let mut groups: BTreeMap<SystemKey, Vec<Configuration>> = BTreeMap::new();
    for c in configs {
        let key = (*c.profile().values(), derive_weight_system(c).weights);
        groups.entry(key).or_default().push(c.clone());
    }
    groups
        .into_iter()
        .map(|((moment, weights), pairings)| WeightSystemClass {
            moment,
            weights,
            c1: compute_c1(&pairings[0]).ok(),
            pairings,
        })
        .collect()
}

struct Shared {
    nodes: AtomicU64,
    limit: Option<u64>,
    exhausted: AtomicBool,
}

impl Shared {
    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, AtomicOrdering::Relaxed) + 1;
        match self.limit {
            Some(limit) if n > limit => {
                self.exhausted.store(true, AtomicOrdering::Relaxed);
                false
            }
            _ => !self.exhausted.load(AtomicOrdering::Relaxed),
        }
    }
}

fn gap_vectors(spec: &SearchSpec) -> Vec<[i64; GAPS]> {
    let mut out = Vec::new();
    let mut gaps = [0i64; GAPS];
    fn rec(
        spec: &SearchSpec,
        idx: usize,
        used: i64,
        gaps: &mut [i64; GAPS],
        out: &mut Vec<[i64; GAPS]>,
    ) {
        if idx == GAPS {
            out.push(*gaps);
            return;
        }
        let remaining = (GAPS - idx - 1) as i64;
        for g in 1..=spec.max_width - used - remaining {
            gaps[idx] = g;
            rec(spec, idx + 1, used + g, gaps, out);
        }
    }
    rec(spec, 0, 0, &mut gaps, &mut out);
    out.retain(|g| {
        let mut reversed = *g;
        reversed.reverse();
        (!spec.pruning.flip_symmetry || *g <= reversed)
            && (!spec.symmetry_gaps || (g[0] == g[4] && g[1] == g[3]))
    });
    out
}

/// Everything fixed for one gap vector and one branch of `c_1`.
struct Frame<'a> {
    spec: &'a SearchSpec,
    profile: MomentProfile,
    phi: [i64; POINTS],
    k: Option<i64>,
    /// Upward options `(target, weight)` per vertex, sorted.
    options: [Vec<Slot>; POINTS],
    /// Suffix minima and maxima of option weights.
    suffix_min: [Vec<i64>; POINTS],
    suffix_max: [Vec<i64>; POINTS],
    shared: &'a Shared,
}

#[derive(Clone)]
struct State {
    edges: Vec<WeightEdge>,
    down_count: [usize; POINTS],
    down_sum: [i64; POINTS],
    gamma0: i64,
}

struct Sink {
    found: Vec<Configuration>,
    stats: SearchStats,
}

impl<'a> Frame<'a> {
    fn new(
        spec: &'a SearchSpec,
        profile: MomentProfile,
        k: Option<i64>,
        shared: &'a Shared,
    ) -> Self {
        let phi = *profile.values();
        let gaps = profile.gaps();
        let toggles = spec.pruning;
        let options: [Vec<Slot>; POINTS] = std::array::from_fn(|i| {
            let mut opts = Vec::new();
            for j in i + 1..POINTS {
                for w in 1..=spec.max_weight {
                    if toggles.divisibility && (phi[j] - phi[i]) % w != 0 {
                        continue;
                    }
                    if toggles.extremal_edges {
                        if i == 0 && j == 1 && w != gaps[0] {
                            continue;
                        }
                        if i == LAST - 1 && w != gaps[LAST - 1] {
                            continue;
                        }
                    }
                    opts.push((j, w));
                }
            }
            opts
        });
        let suffix = |pick: fn(i64, i64) -> i64, init: i64| -> [Vec<i64>; POINTS] {
            std::array::from_fn(|i| {
                let opts = &options[i];
                let mut out = vec![init; opts.len() + 1];
                for idx in (0..opts.len()).rev() {
                    out[idx] = pick(out[idx + 1], opts[idx].1);
                }
                out
            })
        };
        let suffix_min = suffix(i64::min, i64::MAX);
        let suffix_max = suffix(i64::max, i64::MIN);
        Frame {
            spec,
            profile,
            phi,
            k,
            options,
            suffix_min,
            suffix_max,
            shared,
        }
    }

    /// Bounds on the achievable weight sum at every unfinished vertex.
    fn gamma_feasible(&self, st: &State, from: usize) -> bool {
        let Some(k) = self.k else { return true };
        let max_w = self.spec.max_weight;
        for j in from..POINTS {
            let target = st.gamma0 - k * self.phi[j];
            let up = (WEIGHTS_PER_POINT - j) as i64;
            let rest = (j - st.down_count[j]) as i64;
            let (up_min, up_max) = if up == 0 {
                (0, 0)
            } else if self.options[j].is_empty() {
                return false;
            } else {
                (up * self.suffix_min[j][0], up * self.suffix_max[j][0])
            };
            let lo = up_min - st.down_sum[j] - rest * max_w;
            let hi = up_max - st.down_sum[j] - rest;
            if target < lo || target > hi {
                return false;
            }
        }
        true
    }

    fn visit(&self, st: &mut State, i: usize, sink: &mut Sink) {
        if !self.shared.tick() {
            return;
        }
        sink.stats.nodes += 1;
        if i == LAST {
            self.leaf(st, sink);
            return;
        }
        let slots = WEIGHTS_PER_POINT - i;
        let need_next = i + 1 - st.down_count[i + 1];
        if need_next > slots {
            sink.stats.bump("slot_budget");
            return;
        }
        let target = match self.k {
            Some(k) if i > 0 => Some(st.gamma0 - k * self.phi[i] + st.down_sum[i]),
            _ => None,
        };
        let mut cap = [0usize; POINTS];
        for (j, c) in cap.iter_mut().enumerate().skip(i + 1) {
            *c = j - st.down_count[j];
        }
        let mut picked = Vec::with_capacity(slots);
        self.choose(
            i,
            0,
            slots,
            target,
            need_next,
            &mut cap,
            &mut picked,
            &mut |picked| {
                let saved = (st.edges.len(), st.down_count, st.down_sum, st.gamma0);
                let mut sum = 0;
                for &(j, w) in picked {
                    st.edges.push(WeightEdge::new(i, j, w));
                    st.down_count[j] += 1;
                    st.down_sum[j] += w;
                    sum += w;
                }
                if i == 0 {
                    st.gamma0 = sum;
                }
                if self.gamma_feasible(st, i + 1) {
                    self.visit(st, i + 1, sink);
                } else {
                    sink.stats.bump("gamma_bounds");
                }
                st.edges.truncate(saved.0);
                st.down_count = saved.1;
                st.down_sum = saved.2;
                st.gamma0 = saved.3;
            },
        );
    }

    /// Chooses a multiset of `slots` upward options for `P_i` starting at
    /// option index `start`, with `need_next` of them landing on `P_{i+1}`.
    #[allow(clippy::too_many_arguments)]
    fn choose(
        &self,
        i: usize,
        start: usize,
        slots: usize,
        sum: Option<i64>,
        need_next: usize,
        cap: &mut [usize; POINTS],
        picked: &mut Vec<Slot>,
        f: &mut dyn FnMut(&[Slot]),
    ) {
        if slots == 0 {
            if need_next == 0 && sum.is_none_or(|s| s == 0) {
                f(picked);
            }
            return;
        }
        let opts = &self.options[i];
        for (idx, &(j, w)) in opts.iter().enumerate().skip(start) {
            if need_next > 0 && j > i + 1 {
                break;
            }
            if cap[j] == 0 {
                continue;
            }
            let rest = (slots - 1) as i64;
            let next_sum = sum.map(|s| s - w);
            if let Some(s) = next_sum {
                if s < rest * self.suffix_min[i][idx]
                    || (rest > 0 && s > rest * self.suffix_max[i][idx])
                {
                    continue;
                }
                if rest == 0 && s != 0 {
                    continue;
                }
            }
            cap[j] -= 1;
            picked.push((j, w));
            let next_need = if j == i + 1 { need_next - 1 } else { need_next };
            self.choose(i, idx, slots - 1, next_sum, next_need, cap, picked, f);
            picked.pop();
            cap[j] += 1;
        }
    }

    /// Necessary conditions that `check_all` also tests, evaluated on the raw
    /// edge list before anything is allocated.
    fn quick_reject(&self, st: &State) -> Option<&'static str> {
        if st
            .edges
            .iter()
            .any(|e| (self.phi[e.hi] - self.phi[e.lo]) % e.weight != 0)
        {
            return Some("Divisibility");
        }
        let gaps = self.profile.gaps();
        let has = |lo: usize, hi: usize, w: i64| {
            st.edges
                .iter()
                .any(|e| e.lo == lo && e.hi == hi && e.weight == w)
        };
        if !has(0, 1, gaps[0]) || !has(LAST - 1, LAST, gaps[GAPS - 1]) {
            return Some("ExtremalEdge");
        }
        let mut gamma = [0i64; POINTS];
        for e in &st.edges {
            gamma[e.lo] += e.weight;
            gamma[e.hi] -= e.weight;
        }
        let width = self.phi[LAST];
        let diff = gamma[0] - gamma[LAST];
        let k = diff / width;
        if diff % width != 0
            || !(1..=MAX_C1).contains(&k)
            || (1..POINTS).any(|i| gamma[0] - gamma[i] != k * self.phi[i])
        {
            return Some("C1Consistency");
        }
        None
    }

    fn leaf(&self, st: &State, sink: &mut Sink) {
        sink.stats.leaves += 1;
        if let Some(rule) = self.quick_reject(st) {
            sink.stats.bump(rule);
            return;
        }
        let mut c = match Configuration::new("", self.profile, st.edges.clone(), false) {
            Ok(c) => c,
            Err(_) => {
                sink.stats.bump("structure");
                return;
            }
        };
        let effective = c.weight_gcd() == 1;
        c = canonicalize(&c.with_effective(effective));
        if let Some(k) = self.spec.c1 {
            if self.k.is_none() && compute_c1(&c).ok() != Some(k) {
                sink.stats.bump("filter");
                return;
            }
        }
        if !self.spec.passes_filters(&c) {
            sink.stats.bump("filter");
            return;
        }
        let report = check_all(
            &c,
            CheckFlags {
                require_effective: self.spec.require_effective,
            },
        );
        if !report.pass {
            for rule in report.rules() {
                sink.stats.bump(&rule.to_string());
            }
            return;
        }
        if ring_presentation(&c).is_err() || total_chern(&c).is_err() {
            sink.stats.bump("cohomology");
            return;
        }
        sink.found.push(c);
    }
}

fn search_gaps(spec: &SearchSpec, gaps: [i64; GAPS], shared: &Shared) -> Sink {
    let mut sink = Sink {
        found: Vec::new(),
        stats: SearchStats::default(),
    };
    let profile = MomentProfile::from_gaps(gaps).expect("positive gaps");
    let toggles = spec.pruning;
    if toggles.extremal_edges && (gaps[0] > spec.max_weight || gaps[GAPS - 1] > spec.max_weight) {
        sink.stats.bump("extremal_gaps");
        return sink;
    }
    let ks: Vec<Option<i64>> = if toggles.gamma_sums {
        // Γ_0 - Γ_5 = k·width is at most 10·max_weight.
        let top = 2 * WEIGHTS_PER_POINT as i64 * spec.max_weight / profile.width();
        (1..=MAX_C1.min(top))
            .filter(|k| spec.c1.is_none_or(|c| c == *k))
            .map(Some)
            .collect()
    } else {
        vec![None]
    };
    for k in ks {
        let frame = Frame::new(spec, profile, k, shared);
        let mut st = State {
            edges: Vec::with_capacity(15),
            down_count: [0; POINTS],
            down_sum: [0; POINTS],
            gamma0: 0,
        };
        frame.visit(&mut st, 0, &mut sink);
    }
    sink
}

/// Runs the search on the current rayon pool. The output does not depend on
/// the number of threads.
pub fn enumerate(spec: &SearchSpec) -> Result<SearchResult, SearchError> {
    spec.validate()?;
    let start = Instant::now();
    let shared = Shared {
        nodes: AtomicU64::new(0),
        limit: spec.node_limit,
        exhausted: AtomicBool::new(false),
    };
    let sinks: Vec<Sink> = gap_vectors(spec)
        .into_par_iter()
        .map(|gaps| search_gaps(spec, gaps, &shared))
        .collect();
    if shared.exhausted.load(AtomicOrdering::Relaxed) {
        return Err(SearchError::BudgetExceeded(spec.node_limit.unwrap_or(0)));
    }
    let mut stats = SearchStats::default();
    let mut configurations = Vec::new();
    for sink in sinks {
        stats.merge(sink.stats);
        configurations.extend(sink.found);
    }
    configurations.sort_by(|a, b| a.cmp_data(b));
    configurations.dedup_by(|a, b| a.same_data(b));
    stats.wall_time = start.elapsed();
    Ok(SearchResult {
        spec: spec.clone(),
        configurations,
        stats,
    })
}

/// One verified statement inside a theorem report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum VerifyFailure {
    CounterexampleFound(usize),
    EquivalenceViolation(String),
    UniquenessViolation(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub pass: bool,
    pub failure: Option<VerifyFailure>,
    pub checks: Vec<Check>,
    pub weight_systems: Vec<WeightSystemClass>,
    pub stats: SearchStats,
}

impl TheoremReport {
    fn new(theorem: impl Into<String>, stats: SearchStats) -> Self {
        TheoremReport {
            theorem: theorem.into(),
            pass: true,
            failure: None,
            checks: Vec::new(),
            weight_systems: Vec::new(),
            stats,
        }
    }

    fn check(
        &mut self,
        name: &str,
        pass: bool,
        detail: impl Into<String>,
        failure: impl FnOnce() -> VerifyFailure,
    ) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
        if !pass {
            self.pass = false;
            if self.failure.is_none() {
                self.failure = Some(failure());
            }
        }
    }
}

fn orbit_weights() -> [Vec<i64>; POINTS] {
    derive_weight_system(&builtin(Builtin::O).expect("orbit fixture")).weights
}

/// No configuration has all weights at most 4. Widths beyond `10 * 4` are
/// impossible since `Γ_0 - Γ_5 = k·width` with `k >= 1`.
pub fn verify_theorem1(max_width: i64) -> Result<TheoremReport, SearchError> {
    verify_theorem1_at(4, max_width)
}

/// Runs the small-weight search at an arbitrary weight bound. Below 5 the result
/// must be empty; from 5 on it must contain the orbit whenever the width
/// bound admits it.
pub fn verify_theorem1_at(max_weight: i64, max_width: i64) -> Result<TheoremReport, SearchError> {
    let result = enumerate(&SearchSpec::new(max_weight, max_width))?;
    let mut report = TheoremReport::new("1", result.stats.clone());
    let classes = result.weight_systems();
    let n = result.configurations.len();
    if max_weight <= 4 {
        report.check(
            "no configuration with largest weight below 5",
            n == 0,
            format!("{n} configurations with max_weight {max_weight}, max_width {max_width}"),
            || VerifyFailure::CounterexampleFound(n),
        );
    } else if max_width >= 10 {
        let orbit = orbit_weights();
        let found = classes.iter().any(|c| c.weights == orbit);
        report.check(
            "orbit weight system present",
            found,
            format!(
                "{} weight systems with max_weight {max_weight}",
                classes.len()
            ),
            || VerifyFailure::UniquenessViolation("orbit weight system missing".into()),
        );
    }
    report.weight_systems = classes;
    Ok(report)
}

fn has_edge(c: &Configuration, lo: usize, hi: usize, w: i64) -> bool {
    c.edges()
        .iter()
        .any(|e| e.lo == lo && e.hi == hi && e.weight == w)
}

fn condition_c1(c: &Configuration) -> bool {
    compute_c1(c).ok() == Some(3)
}

fn condition_top_from_ends(c: &Configuration) -> bool {
    let top = c.largest_weight();
    has_edge(c, 0, 5, top) && 2 * top == c.profile().width()
}

fn condition_top_from_middle(c: &Configuration) -> bool {
    let top = c.largest_weight();
    let p = c.profile();
    has_edge(c, 1, 3, top)
        && has_edge(c, 2, 4, top)
        && p.diff(1, 3) == top
        && p.diff(2, 4) == top
        && p.diff(0, 1) == p.diff(4, 5)
}

/// Width bound for the largest-weight-5 pool: `10 * 5`.
pub const THEOREM2_WIDTH: i64 = 50;

/// Splits all configurations with largest weight exactly 5 by the three
/// conditions and checks they select the same members.
pub fn verify_theorem2(max_width: i64) -> Result<TheoremReport, SearchError> {
    let result = enumerate(&SearchSpec::new(5, max_width))?;
    let pool: Vec<Configuration> = result
        .configurations
        .into_iter()
        .filter(|c| c.largest_weight() == 5)
        .collect();
    let mut report = TheoremReport::new("2", result.stats);
    let select = |pred: fn(&Configuration) -> bool| -> Vec<usize> {
        pool.iter()
            .enumerate()
            .filter(|(_, c)| pred(c))
            .map(|(i, _)| i)
            .collect()
    };
    let s1 = select(condition_c1);
    let s2 = select(condition_top_from_ends);
    let s3 = select(condition_top_from_middle);
    let mut hist: BTreeMap<String, usize> = BTreeMap::new();
    for c in &pool {
        let key = compute_c1(c)
            .map(|k| k.to_string())
            .unwrap_or_else(|_| "none".into());
        *hist.entry(key).or_insert(0) += 1;
    }
    report.check(
        "pool",
        !pool.is_empty(),
        format!(
            "{} configurations with largest weight 5; c1 histogram {hist:?}",
            pool.len()
        ),
        || VerifyFailure::EquivalenceViolation("empty pool".into()),
    );
    report.check(
        "(1) <=> (2) <=> (3)",
        s1 == s2 && s2 == s3,
        format!(
            "|(1)| = {}, |(2)| = {}, |(3)| = {}",
            s1.len(),
            s2.len(),
            s3.len()
        ),
        || {
            VerifyFailure::EquivalenceViolation(format!(
                "condition sets differ: {s1:?} {s2:?} {s3:?}"
            ))
        },
    );
    let members: Vec<&Configuration> = s1.iter().map(|&i| &pool[i]).collect();
    let placement_ok = members.iter().all(|c| {
        c.edges()
            .iter()
            .filter(|e| e.weight == 5)
            .all(|e| matches!((e.lo, e.hi), (0, 5) | (1, 3) | (2, 4)) && e.mult == 1)
    });
    report.check(
        "weight 5 only on P0P5, P1P3, P2P4",
        placement_ok,
        format!("{} members", members.len()),
        || VerifyFailure::EquivalenceViolation("weight 5 elsewhere".into()),
    );
    let mult_ok = members.iter().all(|c| {
        let ws = derive_weight_system(c);
        (0..POINTS).all(|v| ws.mult(v, 5) + ws.mult(v, -5) == 1)
    });
    report.check(
        "|±5| has multiplicity one",
        mult_ok,
        "at every fixed point of every member",
        || VerifyFailure::EquivalenceViolation("multiplicity of 5 is not one".into()),
    );
    let grass = canonicalize(&builtin(Builtin::Grass { a: 1, b: 1, c: 2 }).expect("grass fixture"));
    let grass_in_pool = pool.iter().any(|c| c.same_data(&grass));
    report.check(
        "grass(1,1,2) lies in the pool with c1 = 5 and fails (2), (3)",
        grass_in_pool
            && compute_c1(&grass).ok() == Some(5)
            && !condition_top_from_ends(&grass)
            && !condition_top_from_middle(&grass),
        format!("present: {grass_in_pool}"),
        || VerifyFailure::EquivalenceViolation("grass(1,1,2) not classified as expected".into()),
    );
    let selected: Vec<Configuration> = members.into_iter().cloned().collect();
    report.weight_systems = collapse(&selected);
    Ok(report)
}

/// The largest weight 5 from `P_0` to `P_5` with `φ_5 - φ_0 = 10` pins down
/// the orbit's weights.
pub fn verify_theorem3() -> Result<TheoremReport, SearchError> {
    let mut spec = SearchSpec::new(5, 10);
    spec.largest_from = vec![(0, 5)];
    let result = enumerate(&spec)?;
    let configs: Vec<Configuration> = result
        .configurations
        .into_iter()
        .filter(|c| c.largest_weight() == 5 && c.profile().width() == 10)
        .collect();
    let classes = collapse(&configs);
    let mut report = TheoremReport::new("3", result.stats);
    report.check(
        "unique weight system",
        classes.len() == 1,
        format!("{} weight systems", classes.len()),
        || VerifyFailure::UniquenessViolation(format!("{} weight systems", classes.len())),
    );
    if let Some(class) = classes.first() {
        report.check(
            "weights equal the orbit's",
            class.weights == orbit_weights(),
            format!("{:?}", class.weights),
            || VerifyFailure::UniquenessViolation("weights differ from the orbit".into()),
        );
        let gaps = MomentProfile::new(class.moment).map(|p| p.gaps()).ok();
        report.check(
            "gaps (1,3,2,3,1)",
            gaps == Some([1, 3, 2, 3, 1]),
            format!("{gaps:?}"),
            || VerifyFailure::UniquenessViolation("unexpected gaps".into()),
        );
        pairing_checks(&mut report, class);
    }
    report.weight_systems = classes;
    Ok(report)
}

fn one_edge_per_pair(c: &Configuration) -> bool {
    c.edges().len() == POINTS * (POINTS - 1) / 2
        && c.edges()
            .windows(2)
            .all(|w| (w[0].lo, w[0].hi) != (w[1].lo, w[1].hi))
}

/// Pairings of one weight system that survive the pairing form of the
/// smallest-weight balance must be unique and join every pair once.
fn pairing_checks(report: &mut TheoremReport, class: &WeightSystemClass) {
    let kept: Vec<&Configuration> = class
        .pairings
        .iter()
        .filter(|c| check_smallest_weight_pairing(c).is_empty())
        .collect();
    report.check(
        "one edge per pair of fixed points",
        kept.len() == 1 && one_edge_per_pair(kept[0]),
        format!(
            "{} of {} pairings respect the smallest-weight pairing",
            kept.len(),
            class.pairings.len()
        ),
        || VerifyFailure::UniquenessViolation("pairing is not one edge per pair".into()),
    );
}

/// Weight sets predicted for `φ_1 - φ_0 = a`, `φ_2 - φ_1 = c`; listed per
/// fixed point and sorted.
pub fn theorem4_weights(a: i64, c: i64) -> [Vec<i64>; POINTS] {
    let b = c / 3;
    let raw: [Vec<i64>; POINTS] = [
        vec![a, a + c, a + b, a + 2 * b, 2 * a + c],
        vec![-a, b, 2 * a + c, a + c, a + 2 * b],
        vec![-a - c, -b, a, 2 * a + c, a + b],
        vec![-a - b, -2 * a - c, -a, b, a + c],
        vec![-a - 2 * b, -a - c, -2 * a - c, -b, a],
        vec![-2 * a - c, -a - 2 * b, -a - b, -a - c, -a],
    ];
    raw.map(|mut v| {
        v.sort_unstable();
        v
    })
}

/// With gap symmetry and the largest weight `2a + c` on `P_0P_5`, `P_1P_3`
/// and `P_2P_4`, the weights are the parametric family in `a` and `c`.
pub fn verify_theorem4(a: i64, c: i64) -> Result<TheoremReport, SearchError> {
    if a < 1 || c < 3 || c % 3 != 0 {
        return Err(SearchError::InvalidSpec(
            "need a >= 1 and c a positive multiple of 3".into(),
        ));
    }
    if num_integer::gcd(a, c / 3) != 1 {
        return Err(SearchError::InvalidSpec(
            "a and c/3 must be coprime for an effective action".into(),
        ));
    }
    let top = 2 * a + c;
    let mut spec = SearchSpec::new(top, 2 * top);
    spec.largest_from = vec![(0, 5), (1, 3), (2, 4)];
    spec.symmetry_gaps = true;
    spec.require_effective = true;
    let result = enumerate(&spec)?;
    let configs: Vec<Configuration> = result
        .configurations
        .into_iter()
        .filter(|cfg| {
            let p = cfg.profile();
            cfg.largest_weight() == top
                && p.width() == 2 * top
                && p.diff(1, 3) == top
                && p.diff(2, 4) == top
        })
        .collect();
    let classes = collapse(&configs);
    let mut report = TheoremReport::new(format!("4(a={a}, c={c})"), result.stats);
    report.check(
        "unique weight system",
        classes.len() == 1,
        format!("{} weight systems", classes.len()),
        || VerifyFailure::UniquenessViolation(format!("{} weight systems", classes.len())),
    );
    if let Some(class) = classes.first() {
        let expected = theorem4_weights(a, c);
        report.check(
            "weights equal the parametric family",
            class.weights == expected,
            format!("{:?}", class.weights),
            || {
                VerifyFailure::UniquenessViolation(
                    "weights differ from the parametric family".into(),
                )
            },
        );
        let gaps = MomentProfile::new(class.moment).map(|p| p.gaps()).ok();
        report.check(
            "gaps (a, c, 2a, c, a)",
            gaps == Some([a, c, 2 * a, c, a]),
            format!("{gaps:?}"),
            || VerifyFailure::UniquenessViolation("unexpected gaps".into()),
        );
        pairing_checks(&mut report, class);
        if (a, c) == (1, 3) {
            report.check(
                "agrees with the orbit",
                class.weights == orbit_weights(),
                "a = 1, c = 3",
                || VerifyFailure::UniquenessViolation("differs from the orbit".into()),
            );
        }
    }
    report.weight_systems = classes;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(SearchSpec::new(0, 10).validate().is_err());
        assert!(SearchSpec::new(3, 4).validate().is_err());
        let mut s = SearchSpec::new(3, 10);
        s.largest_from = vec![(3, 1)];
        assert!(s.validate().is_err());
        s.largest_from = vec![(1, 3)];
        s.c1 = Some(7);
        assert!(s.validate().is_err());
    }

    #[test]
    fn gap_vectors_respect_symmetry_options() {
        let mut s = SearchSpec::new(1, 6);
        s.pruning.flip_symmetry = false;
        assert_eq!(gap_vectors(&s).len(), 6);
        s.pruning.flip_symmetry = true;
        // [1,1,1,1,1] plus the palindromic-or-smaller placements of a 2.
        assert_eq!(gap_vectors(&s).len(), 4);
        s.symmetry_gaps = true;
        assert_eq!(gap_vectors(&s), vec![[1, 1, 1, 1, 1], [1, 1, 2, 1, 1]]);
    }

    #[test]
    fn unit_weights_admit_nothing() {
        assert!(enumerate(&SearchSpec::new(1, 12))
            .unwrap()
            .configurations
            .is_empty());
    }

    #[test]
    fn unit_gaps_give_cp5() {
        let r = enumerate(&SearchSpec::new(5, 5)).unwrap();
        assert_eq!(r.configurations.len(), 1);
        let cp5 = builtin(Builtin::Cp5 { gaps: [1; 5] }).unwrap();
        assert!(r.configurations[0].same_data(&cp5));
    }

    #[test]
    fn node_budget() {
        let mut s = SearchSpec::new(3, 12);
        s.node_limit = Some(10);
        assert_eq!(enumerate(&s).unwrap_err(), SearchError::BudgetExceeded(10));
    }

    #[test]
    fn theorem4_family_at_unit_parameters_is_the_orbit() {
        assert_eq!(theorem4_weights(1, 3), orbit_weights());
        let w = theorem4_weights(2, 3);
        assert_eq!(w[0], vec![2, 3, 4, 5, 7]);
        let w = theorem4_weights(1, 6);
        assert_eq!(w[0], vec![1, 3, 5, 7, 8]);
    }
}
