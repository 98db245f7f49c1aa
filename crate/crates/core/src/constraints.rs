//! Exact necessary conditions on fixed-point data. Each checker returns the
//! violations it finds; an empty list means the rule holds. Violations are
//! ordinary data so the enumerator can use them as pruning signals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{
    derive_weight_system, isotropy_components, Configuration, IsotropyComponent, WeightSystem,
    POINTS, WEIGHTS_PER_POINT,
};

/// Largest admissible `k` in `c_1 = k[ω]`.
pub const MAX_C1: i64 = POINTS as i64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    Divisibility,
    ModK,
    SmallestWeightBalance,
    ComponentRegularity,
    IndexBound,
    ExtremalEdge,
    C1Consistency,
    GammaRelation,
    Effectiveness,
}

impl Rule {
    pub const ALL: [Rule; 9] = [
        Rule::Divisibility,
        Rule::ModK,
        Rule::SmallestWeightBalance,
        Rule::ComponentRegularity,
        Rule::IndexBound,
        Rule::ExtremalEdge,
        Rule::C1Consistency,
        Rule::GammaRelation,
        Rule::Effectiveness,
    ];
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Fixed points and edges `(lo, hi, w)` a violation refers to.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Location {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize, i64)>,
}

impl Location {
    pub fn vertices(vs: impl IntoIterator<Item = usize>) -> Self {
        let mut vertices: Vec<usize> = vs.into_iter().collect();
        vertices.sort_unstable();
        vertices.dedup();
        Location {
            vertices,
            edges: Vec::new(),
        }
    }

    pub fn edge(lo: usize, hi: usize, w: i64) -> Self {
        Location {
            vertices: vec![lo, hi],
            edges: vec![(lo, hi, w)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub location: Location,
    pub detail: String,
}

impl Violation {
    fn new(rule: Rule, location: Location, detail: impl Into<String>) -> Self {
        debug_assert!(!location.vertices.is_empty() || !location.edges.is_empty());
        Violation {
            rule,
            location,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ", self.rule)?;
        let vs: Vec<String> = self
            .location
            .vertices
            .iter()
            .map(|v| format!("P{v}"))
            .collect();
        write!(f, "{}: {}", vs.join(","), self.detail)
    }
}

pub fn check_divisibility(c: &Configuration) -> Vec<Violation> {
    let p = c.profile();
    let mut out = Vec::new();
    for e in c.edges() {
        let gap = p.diff(e.lo, e.hi);
        if gap % e.weight != 0 {
            out.push(Violation::new(
                Rule::Divisibility,
                Location::edge(e.lo, e.hi, e.weight),
                format!("weight {} does not divide moment gap {}", e.weight, gap),
            ));
        }
    }
    // Every weight must divide the gap to some fixed point on its side.
    let ws = derive_weight_system(c);
    for v in 0..POINTS {
        for &w in &ws.weights[v] {
            let witnessed = if w < 0 {
                (0..v).any(|q| p.diff(q, v) % w == 0)
            } else {
                (v + 1..POINTS).any(|q| p.diff(v, q) % w == 0)
            };
            if !witnessed {
                out.push(Violation::new(
                    Rule::Divisibility,
                    Location::vertices([v]),
                    format!("weight {w} divides no moment gap on its side"),
                ));
            }
        }
    }
    out
}

fn residues(ws: &WeightSystem, v: usize, k: i64) -> Vec<i64> {
    let mut r: Vec<i64> = ws.weights[v].iter().map(|w| w.rem_euclid(k)).collect();
    r.sort_unstable();
    r
}

/// Moduli `k >= 2` dividing at least one edge weight.
fn isotropy_orders(c: &Configuration) -> Vec<i64> {
    let max = c.largest_weight();
    (2..=max)
        .filter(|k| c.edges().iter().any(|e| e.weight % k == 0))
        .collect()
}

pub fn check_mod(c: &Configuration) -> Vec<Violation> {
    let ws = derive_weight_system(c);
    let mut out = Vec::new();
    for k in isotropy_orders(c) {
        for comp in isotropy_components(c, k) {
            let base = comp.vertices[0];
            let base_res = residues(&ws, base, k);
            for &v in &comp.vertices[1..] {
                if residues(&ws, v, k) != base_res {
                    out.push(Violation::new(
                        Rule::ModK,
                        Location::vertices([base, v]),
                        format!(
                            "weights {:?} and {:?} differ modulo {k} on one Z_{k} component",
                            ws.weights[base], ws.weights[v]
                        ),
                    ));
                }
            }
        }
    }
    out
}

/// Counts the smallest positive weight `w` and `-w` by index level.
///
/// `points` lists `(vertex, weights, half_index)`; the condition is that the
/// number of `-w` at half-index `m + 1` equals the number of `+w` at half-index `m`.
fn balance_failures(points: &[(usize, Vec<i64>, usize)]) -> Option<(i64, usize)> {
    let w = points
        .iter()
        .flat_map(|(_, ws, _)| ws.iter())
        .map(|x| x.abs())
        .min()?;
    let top = points.iter().map(|p| p.2).max().unwrap_or(0);
    for m in 0..top.max(1) {
        let down: usize = points
            .iter()
            .filter(|p| p.2 == m + 1)
            .map(|p| p.1.iter().filter(|&&x| x == -w).count())
            .sum();
        let up: usize = points
            .iter()
            .filter(|p| p.2 == m)
            .map(|p| p.1.iter().filter(|&&x| x == w).count())
            .sum();
        if down != up {
            return Some((w, m));
        }
    }
    None
}

pub fn check_smallest_weight_balance(c: &Configuration) -> Vec<Violation> {
    let ws = derive_weight_system(c);
    let mut out = Vec::new();
    let global: Vec<(usize, Vec<i64>, usize)> =
        (0..POINTS).map(|v| (v, ws.weights[v].clone(), v)).collect();
    if let Some((w, m)) = balance_failures(&global) {
        out.push(Violation::new(
            Rule::SmallestWeightBalance,
            Location::vertices([m, m + 1]),
            format!(
                "count of -{w} at index {} differs from count of +{w} at index {}",
                2 * m + 2,
                2 * m
            ),
        ));
    }
    for k in isotropy_orders(c) {
        for comp in isotropy_components(c, k) {
            if !comp.saturated || comp.half_dim().is_none() {
                continue;
            }
            let pts: Vec<(usize, Vec<i64>, usize)> = comp
                .vertices
                .iter()
                .zip(&comp.within_index)
                .map(|(&v, &idx)| {
                    let divisible = ws.weights[v]
                        .iter()
                        .copied()
                        .filter(|x| x % k == 0)
                        .collect();
                    (v, divisible, idx)
                })
                .collect();
            if let Some((w, m)) = balance_failures(&pts) {
                out.push(Violation::new(
                    Rule::SmallestWeightBalance,
                    Location::vertices(comp.vertices.iter().copied()),
                    format!(
                        "on a Z_{k} component, count of -{w} at index {} differs from count of +{w} at index {}",
                        2 * m + 2,
                        2 * m
                    ),
                ));
            }
        }
    }
    out
}

/// Pairing form of the smallest-weight balance: in the whole graph and in
/// every saturated isotropy component, an edge carrying the smallest weight
/// joins points whose indices in that component differ by 2.
///
/// Not part of [`check_all`]. It restricts how weights are paired, not which
/// weights occur, and is used to discard alternative pairings of one weight
/// system.
pub fn check_smallest_weight_pairing(c: &Configuration) -> Vec<Violation> {
    let mut out = Vec::new();
    let global: Vec<(usize, usize)> = (0..POINTS).map(|v| (v, v)).collect();
    let mut scopes: Vec<(i64, Vec<(usize, usize)>)> = vec![(1, global)];
    for k in isotropy_orders(c) {
        for comp in isotropy_components(c, k) {
            if comp.saturated {
                let members = comp
                    .vertices
                    .iter()
                    .copied()
                    .zip(comp.within_index.iter().copied())
                    .collect();
                scopes.push((k, members));
            }
        }
    }
    for (k, members) in scopes {
        let index_of = |v: usize| members.iter().find(|(u, _)| *u == v).map(|&(_, idx)| idx);
        let inside: Vec<_> = c
            .edges()
            .iter()
            .filter(|e| e.weight % k == 0 && index_of(e.lo).is_some() && index_of(e.hi).is_some())
            .collect();
        let Some(w) = inside.iter().map(|e| e.weight).min() else {
            continue;
        };
        for e in inside.iter().filter(|e| e.weight == w) {
            let (lo, hi) = (index_of(e.lo).unwrap(), index_of(e.hi).unwrap());
            if hi != lo + 1 {
                out.push(Violation::new(
                    Rule::SmallestWeightBalance,
                    Location::edge(e.lo, e.hi, e.weight),
                    format!(
                        "smallest weight {w} of a Z_{k} component joins half-indices {lo} and {hi}"
                    ),
                ));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Morse-theoretic conditions on one isotropy component.
pub fn component_regularity(comp: &IsotropyComponent) -> Vec<Violation> {
    let here = || Location::vertices(comp.vertices.iter().copied());
    let k = comp.k;
    let Some(d) = comp.half_dim() else {
        return vec![Violation::new(
            Rule::ComponentRegularity,
            here(),
            format!(
                "counts of weights divisible by {k} vary along one component: {:?}",
                comp.divisible_count
            ),
        )];
    };
    if !comp.saturated {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut betti = vec![0usize; d + 1];
    for &idx in &comp.within_index {
        if idx > d {
            out.push(Violation::new(
                Rule::ComponentRegularity,
                here(),
                "index exceeds dimension",
            ));
            return out;
        }
        betti[idx] += 1;
    }
    if betti[0] != 1 || betti[d] != 1 {
        out.push(Violation::new(
            Rule::ComponentRegularity,
            here(),
            format!(
                "Z_{k} component needs exactly one minimum and one maximum, index counts {betti:?}"
            ),
        ));
    }
    if betti.contains(&0) {
        out.push(Violation::new(
            Rule::ComponentRegularity,
            here(),
            format!("Z_{k} component has an empty index level, index counts {betti:?}"),
        ));
    }
    if (0..=d).any(|m| betti[m] != betti[d - m]) {
        out.push(Violation::new(
            Rule::ComponentRegularity,
            here(),
            format!("Z_{k} component index counts {betti:?} are not symmetric"),
        ));
    }
    let n = comp.vertices.len();
    for (p, &idx) in comp.within_index.iter().enumerate() {
        let below = p;
        let above = n - 1 - p;
        if idx > below || d - idx > above {
            out.push(Violation::new(
                Rule::IndexBound,
                Location::vertices([comp.vertices[p]]),
                format!(
                    "on a Z_{k} component, half-index {idx} (coindex {}) with {below} points below and {above} above",
                    d - idx
                ),
            ));
        }
    }
    out
}

pub fn check_component_regularity(c: &Configuration) -> Vec<Violation> {
    isotropy_orders(c)
        .into_iter()
        .flat_map(|k| isotropy_components(c, k))
        .flat_map(|comp| component_regularity(&comp))
        .collect()
}

pub fn check_extremal_edges(c: &Configuration) -> Vec<Violation> {
    let p = c.profile();
    let last = POINTS - 1;
    let mut out = Vec::new();
    for (lo, hi) in [(0, 1), (last - 1, last)] {
        let w = p.diff(lo, hi);
        if c.edge_mult(lo, hi, w) == 0 {
            out.push(Violation::new(
                Rule::ExtremalEdge,
                Location::edge(lo, hi, w),
                format!("missing weight {w} = φ(P{hi}) - φ(P{lo}) between P{lo} and P{hi}"),
            ));
        }
    }
    out
}

/// The integer `k` with `c_1 = k[ω]`, from `Γ_i - Γ_j = k(φ_j - φ_i)` over all pairs.
pub fn compute_c1(c: &Configuration) -> Result<i64, Violation> {
    let ws = derive_weight_system(c);
    c1_from_sums(&ws.gamma, c.profile().values())
}

pub(crate) fn c1_from_sums(gamma: &[i64; POINTS], phi: &[i64; POINTS]) -> Result<i64, Violation> {
    let mut found: Option<(i64, usize, usize)> = None;
    for i in 0..POINTS {
        for j in i + 1..POINTS {
            let num = gamma[i] - gamma[j];
            let den = phi[j] - phi[i];
            if num % den != 0 {
                return Err(Violation::new(
                    Rule::C1Consistency,
                    Location::vertices([i, j]),
                    format!("Γ{i} - Γ{j} = {num} is not a multiple of φ(P{j}) - φ(P{i}) = {den}"),
                ));
            }
            let k = num / den;
            match found {
                None => found = Some((k, i, j)),
                Some((k0, a, b)) if k0 != k => {
                    return Err(Violation::new(
                        Rule::C1Consistency,
                        Location::vertices([a, b, i, j]),
                        format!("pair (P{a}, P{b}) gives k = {k0} but (P{i}, P{j}) gives k = {k}"),
                    ));
                }
                _ => {}
            }
        }
    }
    let (k, a, b) = found.expect("at least two fixed points");
    if !(1..=MAX_C1).contains(&k) {
        return Err(Violation::new(
            Rule::C1Consistency,
            Location::vertices([a, b]),
            format!("k = {k} lies outside 1..={MAX_C1}"),
        ));
    }
    Ok(k)
}

pub fn check_gamma_relation(c: &Configuration, k: i64) -> Vec<Violation> {
    let ws = derive_weight_system(c);
    let p = c.profile();
    let max_abs = |v: usize| ws.weights[v].iter().map(|x| x.abs()).max().unwrap_or(0);
    let mut out = Vec::new();
    for e in c.edges() {
        let (i, j, w) = (e.lo, e.hi, e.weight);
        if ws.mult(i, -w) > 0 || max_abs(i) > w || max_abs(j) > w {
            continue;
        }
        let s = ws.mult(j, -w) as i64;
        let lhs = (j as i64 - i as i64 + s) * w;
        let rhs = k * p.diff(i, j);
        if lhs != rhs {
            out.push(Violation::new(
                Rule::GammaRelation,
                Location::edge(i, j, w),
                format!(
                    "j - i + s = {} but k(φ(P{j}) - φ(P{i}))/w = {}/{}",
                    j as i64 - i as i64 + s,
                    rhs,
                    w
                ),
            ));
        }
    }
    out
}

pub fn check_effective(c: &Configuration) -> Vec<Violation> {
    let g = c.weight_gcd();
    if g == 1 {
        return Vec::new();
    }
    let mut loc = Location::vertices(0..POINTS);
    loc.edges = c.edges().iter().map(|e| (e.lo, e.hi, e.weight)).collect();
    vec![Violation::new(
        Rule::Effectiveness,
        loc,
        format!("all weights share the factor {g}"),
    )]
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFlags {
    /// Require gcd of all weights to be 1 even if the configuration does not
    /// assert effectiveness itself.
    pub require_effective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub pass: bool,
    pub c1: Option<i64>,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn rules(&self) -> Vec<Rule> {
        let mut r: Vec<Rule> = self.violations.iter().map(|v| v.rule).collect();
        r.dedup();
        r
    }
}

pub fn check_all(c: &Configuration, flags: CheckFlags) -> Report {
    let mut violations = Vec::new();
    violations.extend(check_divisibility(c));
    violations.extend(check_mod(c));
    violations.extend(check_smallest_weight_balance(c));
    violations.extend(check_component_regularity(c));
    violations.extend(check_extremal_edges(c));
    let c1 = match compute_c1(c) {
        Ok(k) => {
            violations.extend(check_gamma_relation(c, k));
            Some(k)
        }
        Err(v) => {
            violations.push(v);
            None
        }
    };
    if flags.require_effective || c.is_effective_asserted() {
        violations.extend(check_effective(c));
    }
    violations.sort();
    violations.dedup();
    Report {
        pass: violations.is_empty(),
        c1,
        violations,
    }
}

/// Slot-count sanity used by tests and the search: `P_i` has `i` negative weights.
pub fn index_profile_ok(ws: &WeightSystem) -> bool {
    (0..POINTS).all(|v| ws.negative_count(v) == v && ws.weights[v].len() == WEIGHTS_PER_POINT)
}
