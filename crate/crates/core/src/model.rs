//! Fixed-point data of a Hamiltonian circle action with minimal isolated
//! fixed points: moment values, weighted isotropy edges, the per-point
//! weight sets they induce, and the isotropy-subgraph components.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of fixed points. The manifold has real dimension `2 * (POINTS - 1)`.
pub const POINTS: usize = 6;
/// Number of weights at each fixed point (complex dimension).
pub const WEIGHTS_PER_POINT: usize = POINTS - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("expected {POINTS} moment values, got {0}")]
    WrongLength(usize),
    #[error("moment values must be strictly increasing: {0:?}")]
    NotIncreasing(Vec<i64>),
    #[error("moment values must start at 0, got {0}")]
    NotNormalized(i64),
    #[error("edge ({lo}, {hi}) does not join two distinct fixed points in moment order")]
    BadEndpoints { lo: usize, hi: usize },
    #[error("edge ({lo}, {hi}) has non-positive weight {weight}")]
    BadWeight { lo: usize, hi: usize, weight: i64 },
    #[error("edge ({lo}, {hi}, w={weight}) has multiplicity 0")]
    ZeroMultiplicity { lo: usize, hi: usize, weight: i64 },
    #[error(
        "P{vertex} has {down} downward and {up} upward weight slots, expected {} and {}",
        vertex, WEIGHTS_PER_POINT - vertex
    )]
    SlotCount { vertex: usize, down: u32, up: u32 },
}

/// Moment map values `φ(P_0) < ... < φ(P_5)`, normalized so that `φ(P_0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MomentProfile([i64; POINTS]);

impl MomentProfile {
    pub fn new(values: [i64; POINTS]) -> Result<Self, StructureError> {
        if values[0] != 0 {
            return Err(StructureError::NotNormalized(values[0]));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(StructureError::NotIncreasing(values.to_vec()));
        }
        Ok(MomentProfile(values))
    }

    /// Shifts arbitrary strictly increasing values so the minimum is 0.
    pub fn normalized(values: &[i64]) -> Result<Self, StructureError> {
        let arr: [i64; POINTS] = values
            .try_into()
            .map_err(|_| StructureError::WrongLength(values.len()))?;
        let base = arr[0];
        Self::new(arr.map(|v| v - base))
    }

    pub fn from_gaps(gaps: [i64; POINTS - 1]) -> Result<Self, StructureError> {
        let mut values = [0i64; POINTS];
        for i in 0..POINTS - 1 {
            values[i + 1] = values[i] + gaps[i];
        }
        Self::new(values)
    }

    pub fn values(&self) -> &[i64; POINTS] {
        &self.0
    }

    pub fn value(&self, i: usize) -> i64 {
        self.0[i]
    }

    /// `φ(P_j) - φ(P_i)`.
    pub fn diff(&self, i: usize, j: usize) -> i64 {
        self.0[j] - self.0[i]
    }

    pub fn gaps(&self) -> [i64; POINTS - 1] {
        std::array::from_fn(|i| self.0[i + 1] - self.0[i])
    }

    pub fn width(&self) -> i64 {
        self.0[POINTS - 1]
    }

    /// Profile of the reversed circle action.
    pub fn flipped(&self) -> Self {
        let w = self.width();
        MomentProfile(std::array::from_fn(|i| w - self.0[POINTS - 1 - i]))
    }
}

/// A weight `w` from `P_lo` to `P_hi`, repeated `mult` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightEdge {
    pub lo: usize,
    pub hi: usize,
    #[serde(rename = "w")]
    pub weight: i64,
    pub mult: u32,
}

impl WeightEdge {
    pub fn new(lo: usize, hi: usize, weight: i64) -> Self {
        WeightEdge {
            lo,
            hi,
            weight,
            mult: 1,
        }
    }

    pub fn with_mult(lo: usize, hi: usize, weight: i64, mult: u32) -> Self {
        WeightEdge {
            lo,
            hi,
            weight,
            mult,
        }
    }

    pub fn touches(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }
}

/// Moment profile plus a pairing of every weight with the fixed point at the
/// other end of its isotropy sphere.
///
/// Always structurally valid: every point carries five weight slots and
/// `P_i` has exactly `i` downward slots. Edges are merged and sorted by
/// `(lo, hi, w)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConfiguration", into = "RawConfiguration")]
pub struct Configuration {
    label: String,
    profile: MomentProfile,
    edges: Vec<WeightEdge>,
    effective: bool,
}

#[derive(Serialize, Deserialize)]
struct RawConfiguration {
    #[serde(default)]
    label: String,
    moment: Vec<i64>,
    edges: Vec<WeightEdge>,
    #[serde(default)]
    effective: bool,
}

impl TryFrom<RawConfiguration> for Configuration {
    type Error = StructureError;

    fn try_from(raw: RawConfiguration) -> Result<Self, Self::Error> {
        let values: [i64; POINTS] = raw
            .moment
            .as_slice()
            .try_into()
            .map_err(|_| StructureError::WrongLength(raw.moment.len()))?;
        let profile = MomentProfile::new(values)?;
        Configuration::new(raw.label, profile, raw.edges, raw.effective)
    }
}

impl From<Configuration> for RawConfiguration {
    fn from(c: Configuration) -> Self {
        RawConfiguration {
            label: c.label,
            moment: c.profile.0.to_vec(),
            edges: c.edges,
            effective: c.effective,
        }
    }
}

fn merge_edges(mut edges: Vec<WeightEdge>) -> Vec<WeightEdge> {
    edges.sort();
    let mut merged: Vec<WeightEdge> = Vec::with_capacity(edges.len());
    for e in edges {
        match merged.last_mut() {
            Some(last) if (last.lo, last.hi, last.weight) == (e.lo, e.hi, e.weight) => {
                last.mult += e.mult
            }
            _ => merged.push(e),
        }
    }
    merged
}

impl Configuration {
    pub fn new(
        label: impl Into<String>,
        profile: MomentProfile,
        edges: Vec<WeightEdge>,
        effective: bool,
    ) -> Result<Self, StructureError> {
        let mut down = [0u32; POINTS];
        let mut up = [0u32; POINTS];
        for e in &edges {
            if e.lo >= e.hi || e.hi >= POINTS {
                return Err(StructureError::BadEndpoints { lo: e.lo, hi: e.hi });
            }
            if e.weight < 1 {
                return Err(StructureError::BadWeight {
                    lo: e.lo,
                    hi: e.hi,
                    weight: e.weight,
                });
            }
            if e.mult == 0 {
                return Err(StructureError::ZeroMultiplicity {
                    lo: e.lo,
                    hi: e.hi,
                    weight: e.weight,
                });
            }
            up[e.lo] += e.mult;
            down[e.hi] += e.mult;
        }
        for v in 0..POINTS {
            if down[v] as usize != v || up[v] as usize != WEIGHTS_PER_POINT - v {
                return Err(StructureError::SlotCount {
                    vertex: v,
                    down: down[v],
                    up: up[v],
                });
            }
        }
        Ok(Configuration {
            label: label.into(),
            profile,
            edges: merge_edges(edges),
            effective,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn profile(&self) -> &MomentProfile {
        &self.profile
    }

    pub fn edges(&self) -> &[WeightEdge] {
        &self.edges
    }

    pub fn is_effective_asserted(&self) -> bool {
        self.effective
    }

    pub fn with_effective(mut self, effective: bool) -> Self {
        self.effective = effective;
        self
    }

    /// Edges incident to `v`.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = &WeightEdge> {
        self.edges.iter().filter(move |e| e.touches(v))
    }

    pub fn largest_weight(&self) -> i64 {
        self.edges.iter().map(|e| e.weight).max().unwrap_or(0)
    }

    /// gcd of all edge weights.
    pub fn weight_gcd(&self) -> i64 {
        self.edges
            .iter()
            .fold(0, |g, e| num_integer::gcd(g, e.weight))
    }

    /// Multiplicity of weight `w` on edges joining `lo` and `hi`.
    pub fn edge_mult(&self, lo: usize, hi: usize, w: i64) -> u32 {
        self.edges
            .iter()
            .filter(|e| e.lo == lo && e.hi == hi && e.weight == w)
            .map(|e| e.mult)
            .sum()
    }

    /// The same data for the reversed circle action: moment order reversed,
    /// every weight negated.
    pub fn flipped(&self) -> Configuration {
        let edges = self
            .edges
            .iter()
            .map(|e| WeightEdge {
                lo: POINTS - 1 - e.hi,
                hi: POINTS - 1 - e.lo,
                weight: e.weight,
                mult: e.mult,
            })
            .collect();
        Configuration {
            label: self.label.clone(),
            profile: self.profile.flipped(),
            edges: merge_edges(edges),
            effective: self.effective,
        }
    }

    /// Ordering used for canonical representatives: moment values first, then
    /// the sorted edge list. Labels and flags are ignored.
    pub fn cmp_data(&self, other: &Configuration) -> Ordering {
        self.profile
            .cmp(&other.profile)
            .then_with(|| self.edges.cmp(&other.edges))
    }

    pub fn same_data(&self, other: &Configuration) -> bool {
        self.cmp_data(other) == Ordering::Equal
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("configuration serializes")
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.label.is_empty() {
            write!(f, "{}: ", self.label)?;
        }
        write!(f, "moment {:?}; edges", self.profile.0)?;
        for e in &self.edges {
            write!(f, " P{}P{}:{}", e.lo, e.hi, e.weight)?;
            if e.mult > 1 {
                write!(f, "x{}", e.mult)?;
            }
        }
        Ok(())
    }
}

/// Lexicographically smaller of `c` and its flip.
pub fn canonicalize(c: &Configuration) -> Configuration {
    let flipped = c.flipped();
    if flipped.cmp_data(c) == Ordering::Less {
        flipped
    } else {
        c.clone()
    }
}

/// Signed weights at every fixed point with their sums and products.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightSystem {
    /// Weights at `P_i`, sorted ascending.
    pub weights: [Vec<i64>; POINTS],
    /// `Γ_i`, the sum of the weights at `P_i`.
    pub gamma: [i64; POINTS],
    /// `Λ_i^-`, the product of the negative weights at `P_i` (1 if none).
    pub lambda_neg: [i64; POINTS],
    /// `Λ_i`, the product of all weights at `P_i`.
    pub lambda: [i64; POINTS],
}

impl WeightSystem {
    /// Number of negative weights at `P_i`; the Morse index is twice this.
    pub fn negative_count(&self, i: usize) -> usize {
        self.weights[i].iter().filter(|&&w| w < 0).count()
    }

    /// Number of weights at `P_i` divisible by `k`.
    pub fn divisible_count(&self, i: usize, k: i64) -> usize {
        self.weights[i].iter().filter(|&&w| w % k == 0).count()
    }

    /// Largest absolute value of any weight.
    pub fn largest(&self) -> i64 {
        self.weights
            .iter()
            .flatten()
            .map(|w| w.abs())
            .max()
            .unwrap_or(0)
    }

    /// Multiplicity of `w` (signed) at `P_i`.
    pub fn mult(&self, i: usize, w: i64) -> usize {
        self.weights[i].iter().filter(|&&x| x == w).count()
    }
}

pub fn derive_weight_system(c: &Configuration) -> WeightSystem {
    let mut weights: [Vec<i64>; POINTS] = Default::default();
    for e in c.edges() {
        for _ in 0..e.mult {
            weights[e.lo].push(e.weight);
            weights[e.hi].push(-e.weight);
        }
    }
    for w in weights.iter_mut() {
        w.sort_unstable();
    }
    let gamma = std::array::from_fn(|i| weights[i].iter().sum());
    let lambda_neg = std::array::from_fn(|i| weights[i].iter().filter(|&&w| w < 0).product());
    let lambda = std::array::from_fn(|i| weights[i].iter().product());
    WeightSystem {
        weights,
        gamma,
        lambda_neg,
        lambda,
    }
}

/// Connected component of the subgraph of edges whose weight is divisible by `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsotropyComponent {
    pub k: i64,
    /// Member fixed points in moment order.
    pub vertices: Vec<usize>,
    /// Per member: incident edge slots inside the `k`-subgraph.
    pub within_degree: Vec<usize>,
    /// Per member: weights divisible by `k`.
    pub divisible_count: Vec<usize>,
    /// Per member: negative weights divisible by `k` (half the index inside
    /// the component).
    pub within_index: Vec<usize>,
    pub saturated: bool,
}

impl IsotropyComponent {
    /// Half the real dimension of the component, if it is constant.
    pub fn half_dim(&self) -> Option<usize> {
        let first = *self.divisible_count.first()?;
        self.divisible_count
            .iter()
            .all(|&d| d == first)
            .then_some(first)
    }
}

fn find(parent: &mut [usize; POINTS], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

pub fn isotropy_components(c: &Configuration, k: i64) -> Vec<IsotropyComponent> {
    assert!(k >= 2, "isotropy order must be at least 2");
    let mut parent: [usize; POINTS] = std::array::from_fn(|i| i);
    let mut degree = [0usize; POINTS];
    let mut down = [0usize; POINTS];
    for e in c.edges().iter().filter(|e| e.weight % k == 0) {
        let (a, b) = (find(&mut parent, e.lo), find(&mut parent, e.hi));
        parent[a.max(b)] = a.min(b);
        degree[e.lo] += e.mult as usize;
        degree[e.hi] += e.mult as usize;
        down[e.hi] += e.mult as usize;
    }
    let ws = derive_weight_system(c);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for v in (0..POINTS).filter(|&v| degree[v] > 0) {
        let r = find(&mut parent, v);
        match roots.iter().position(|&x| x == r) {
            Some(idx) => groups[idx].push(v),
            None => {
                roots.push(r);
                groups.push(vec![v]);
            }
        }
    }
    groups
        .into_iter()
        .map(|vertices| {
            let within_degree: Vec<usize> = vertices.iter().map(|&v| degree[v]).collect();
            let divisible_count: Vec<usize> =
                vertices.iter().map(|&v| ws.divisible_count(v, k)).collect();
            let within_index = vertices.iter().map(|&v| down[v]).collect();
            let saturated = within_degree == divisible_count;
            IsotropyComponent {
                k,
                vertices,
                within_degree,
                divisible_count,
                within_index,
                saturated,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{builtin, Builtin};

    fn o() -> Configuration {
        builtin(Builtin::O).unwrap()
    }

    #[test]
    fn weight_system_of_orbit() {
        let ws = derive_weight_system(&o());
        let mut p0 = vec![1, 4, 2, 3, 5];
        p0.sort();
        assert_eq!(ws.weights[0], p0);
        let mut p3 = vec![-2, -5, -1, 1, 4];
        p3.sort();
        assert_eq!(ws.weights[3], p3);
        assert_eq!(ws.gamma, [15, 12, 3, -3, -12, -15]);
    }

    #[test]
    fn weight_system_of_remark_w7() {
        let ws = derive_weight_system(&builtin(Builtin::RemarkW7).unwrap());
        let mut p4 = vec![1, -1, -2, -3, -7];
        p4.sort();
        assert_eq!(ws.weights[4], p4);
    }

    #[test]
    fn missing_edge_is_structure_error() {
        let c = o();
        let mut edges = c.edges().to_vec();
        let idx = edges.iter().position(|e| e.lo == 1 && e.hi == 2).unwrap();
        edges.remove(idx);
        let err = Configuration::new("", *c.profile(), edges, false).unwrap_err();
        assert!(matches!(err, StructureError::SlotCount { vertex: 1, .. }));
    }

    #[test]
    fn profile_validation() {
        assert!(MomentProfile::new([0, 1, 1, 2, 3, 4]).is_err());
        assert!(MomentProfile::new([1, 2, 3, 4, 5, 6]).is_err());
        assert_eq!(
            MomentProfile::normalized(&[-5, -4, -1, 1, 4, 5])
                .unwrap()
                .values(),
            &[0, 1, 4, 6, 9, 10]
        );
        assert_eq!(
            MomentProfile::from_gaps([1, 3, 2, 3, 1]).unwrap().width(),
            10
        );
        assert!(MomentProfile::normalized(&[0, 1]).is_err());
    }

    #[test]
    fn bad_edges_rejected() {
        let p = MomentProfile::from_gaps([1, 1, 1, 1, 1]).unwrap();
        let e = |lo, hi, w| WeightEdge::new(lo, hi, w);
        assert!(matches!(
            Configuration::new("", p, vec![e(2, 1, 1)], false),
            Err(StructureError::BadEndpoints { .. })
        ));
        assert!(matches!(
            Configuration::new("", p, vec![e(0, 1, 0)], false),
            Err(StructureError::BadWeight { .. })
        ));
    }

    #[test]
    fn orbit_components_for_five() {
        let comps = isotropy_components(&o(), 5);
        let sets: Vec<Vec<usize>> = comps.iter().map(|c| c.vertices.clone()).collect();
        assert_eq!(sets, vec![vec![0, 5], vec![1, 3], vec![2, 4]]);
        for comp in &comps {
            assert!(comp.saturated);
            assert_eq!(comp.divisible_count, vec![1, 1]);
            assert_eq!(comp.within_index, vec![0, 1]);
        }
    }

    #[test]
    fn orbit_components_for_two() {
        // Even weights of the orbit: P0P2:4, P0P3:2, P1P4:4, P2P5:2, P3P5:4.
        let comps = isotropy_components(&o(), 2);
        let sets: Vec<Vec<usize>> = comps.iter().map(|c| c.vertices.clone()).collect();
        assert_eq!(sets, vec![vec![0, 2, 3, 5], vec![1, 4]]);
        let ws = derive_weight_system(&o());
        for comp in &comps {
            for (idx, &v) in comp.vertices.iter().enumerate() {
                let even = ws.weights[v].iter().filter(|w| *w % 2 == 0).count();
                assert_eq!(comp.divisible_count[idx], even);
                assert!(comp.within_degree[idx] <= comp.divisible_count[idx]);
            }
        }
        assert_eq!(comps[0].divisible_count, vec![2, 2, 2, 2]);
        assert_eq!(comps[0].within_index, vec![0, 1, 1, 2]);
        assert_eq!(comps[1].divisible_count, vec![1, 1]);
    }

    #[test]
    fn large_k_has_no_components() {
        assert!(isotropy_components(&o(), 6).is_empty());
        assert!(isotropy_components(&o(), 100).is_empty());
    }

    #[test]
    fn orbit_is_flip_symmetric() {
        let c = o();
        assert!(c.flipped().same_data(&c));
        assert!(canonicalize(&c).same_data(&c));
    }

    #[test]
    fn cp5_flip_pair_canonicalizes_together() {
        let a = builtin(Builtin::Cp5 {
            gaps: [1, 1, 1, 1, 2],
        })
        .unwrap();
        let b = builtin(Builtin::Cp5 {
            gaps: [2, 1, 1, 1, 1],
        })
        .unwrap();
        assert!(canonicalize(&a).same_data(&canonicalize(&b)));
        assert_eq!(canonicalize(&a).profile().gaps(), [1, 1, 1, 1, 2]);
        let once = canonicalize(&b);
        assert!(canonicalize(&once).same_data(&once));
    }

    #[test]
    fn json_round_trip_and_canonical_edge_order() {
        let c = o();
        let json = c.to_json();
        let back: Configuration = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["moment"], serde_json::json!([0, 1, 4, 6, 9, 10]));
        assert_eq!(
            v["edges"][0],
            serde_json::json!({"lo": 0, "hi": 1, "w": 1, "mult": 1})
        );
    }

    #[test]
    fn json_with_bad_slots_is_rejected() {
        let json = r#"{"label":"x","moment":[0,1,2,3,4,5],"edges":[{"lo":0,"hi":1,"w":1,"mult":1}],"effective":false}"#;
        assert!(serde_json::from_str::<Configuration>(json).is_err());
    }
}
