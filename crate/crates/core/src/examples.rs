//! Built-in fixed-point data: the 10-dimensional coadjoint orbit of `G_2`
//! (from its `T^2` GKM graph), `CP^5`, the oriented Grassmannian
//! `G̃_2(R^7)`, and a weight-7 configuration with `c_1 = 3[ω]` that differs
//! from the orbit.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{Configuration, MomentProfile, StructureError, WeightEdge, POINTS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExampleError {
    #[error("invalid parameters for {family}: {reason}")]
    Param {
        family: &'static str,
        reason: String,
    },
    #[error("unknown example {0:?}; expected one of o, cp5, grass, remark_w7")]
    UnknownName(String),
    #[error("direction {0:?} is degenerate: {1}")]
    DegenerateDirection([i64; 2], String),
    #[error(transparent)]
    Structure(#[from] StructureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    /// The coadjoint orbit, projected along `(1, 2)`.
    O,
    /// `CP^5` with the given consecutive moment gaps.
    Cp5 { gaps: [i64; 5] },
    /// `G̃_2(R^7)` with parameters `a, b >= 1` and even `c >= 2`.
    Grass { a: i64, b: i64, c: i64 },
    /// Weight sets with largest weight 7 between `P_1P_3` and `P_2P_4`.
    RemarkW7,
}

impl Builtin {
    pub const NAMES: [&'static str; 4] = ["o", "cp5", "grass", "remark_w7"];

    /// Parses a name plus positional integer parameters. Missing parameters
    /// take the unit defaults (`cp5 1 1 1 1 1`, `grass 1 1 2`).
    pub fn parse(name: &str, params: &[i64]) -> Result<Self, ExampleError> {
        let want = |family: &'static str, n: usize| -> Result<(), ExampleError> {
            if params.is_empty() || params.len() == n {
                Ok(())
            } else {
                Err(ExampleError::Param {
                    family,
                    reason: format!("expected {n} parameters, got {}", params.len()),
                })
            }
        };
        match name {
            "o" => {
                want("o", 0)?;
                Ok(Builtin::O)
            }
            "remark_w7" => {
                want("remark_w7", 0)?;
                Ok(Builtin::RemarkW7)
            }
            "cp5" => {
                want("cp5", 5)?;
                let gaps = if params.is_empty() {
                    [1; 5]
                } else {
                    params.try_into().unwrap()
                };
                Ok(Builtin::Cp5 { gaps })
            }
            "grass" => {
                want("grass", 3)?;
                let (a, b, c) = if params.is_empty() {
                    (1, 1, 2)
                } else {
                    (params[0], params[1], params[2])
                };
                Ok(Builtin::Grass { a, b, c })
            }
            other => Err(ExampleError::UnknownName(other.to_string())),
        }
    }
}

impl FromStr for Builtin {
    type Err = ExampleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Builtin::parse(s, &[])
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::O => write!(f, "o"),
            Builtin::Cp5 { gaps } => {
                write!(f, "cp5({})", gaps.map(|g| g.to_string()).join(","))
            }
            Builtin::Grass { a, b, c } => write!(f, "grass({a},{b},{c})"),
            Builtin::RemarkW7 => write!(f, "remark_w7"),
        }
    }
}

fn edges(list: &[(usize, usize, i64)]) -> Vec<WeightEdge> {
    list.iter()
        .map(|&(lo, hi, w)| WeightEdge::new(lo, hi, w))
        .collect()
}

pub fn builtin(which: Builtin) -> Result<Configuration, ExampleError> {
    let label = which.to_string();
    match which {
        Builtin::O => {
            let profile = MomentProfile::new([0, 1, 4, 6, 9, 10])?;
            let list = [
                (0, 1, 1),
                (0, 2, 4),
                (0, 3, 2),
                (0, 4, 3),
                (0, 5, 5),
                (1, 2, 1),
                (1, 3, 5),
                (1, 4, 4),
                (1, 5, 3),
                (2, 3, 1),
                (2, 4, 5),
                (2, 5, 2),
                (3, 4, 1),
                (3, 5, 4),
                (4, 5, 1),
            ];
            Ok(Configuration::new(label, profile, edges(&list), true)?)
        }
        Builtin::RemarkW7 => {
            let profile = MomentProfile::new([0, 1, 2, 8, 9, 10])?;
            let list = [
                (0, 1, 1),
                (0, 2, 2),
                (0, 3, 4),
                (0, 4, 3),
                (0, 5, 5),
                (1, 2, 1),
                (1, 3, 7),
                (1, 4, 2),
                (1, 5, 3),
                (2, 3, 1),
                (2, 4, 7),
                (2, 5, 4),
                (3, 4, 1),
                (3, 5, 2),
                (4, 5, 1),
            ];
            Ok(Configuration::new(label, profile, edges(&list), true)?)
        }
        Builtin::Cp5 { gaps } => {
            if gaps.iter().any(|&g| g < 1) {
                return Err(ExampleError::Param {
                    family: "cp5",
                    reason: "gaps must be positive".into(),
                });
            }
            let profile = MomentProfile::from_gaps(gaps)?;
            let mut list = Vec::new();
            for i in 0..POINTS {
                for j in i + 1..POINTS {
                    list.push((i, j, profile.diff(i, j)));
                }
            }
            let effective = gaps.iter().fold(0, |g, &x| num_integer::gcd(g, x)) == 1;
            Ok(Configuration::new(label, profile, edges(&list), effective)?)
        }
        Builtin::Grass { a, b, c } => {
            if a < 1 || b < 1 {
                return Err(ExampleError::Param {
                    family: "grass",
                    reason: "a and b must be positive".into(),
                });
            }
            if c < 2 || c % 2 != 0 {
                return Err(ExampleError::Param {
                    family: "grass",
                    reason: "c must be even and at least 2".into(),
                });
            }
            // -a-b-c/2, -b-c/2, -c/2, c/2, b+c/2, a+b+c/2 shifted to start at 0.
            let half = c / 2;
            let profile = MomentProfile::normalized(&[
                -a - b - half,
                -b - half,
                -half,
                half,
                b + half,
                a + b + half,
            ])?;
            let mut list = Vec::new();
            for i in 0..POINTS {
                for j in i + 1..POINTS {
                    let w = if i + j == POINTS - 1 {
                        profile.diff(i, j) / 2
                    } else {
                        profile.diff(i, j)
                    };
                    list.push((i, j, w));
                }
            }
            Ok(Configuration::new(label, profile, edges(&list), false)?)
        }
    }
}

/// A `T^2` GKM graph with six fixed points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmGraph {
    pub names: [&'static str; POINTS],
    pub positions: [[i64; 2]; POINTS],
    /// Unordered vertex pairs with their weight vectors.
    pub edges: Vec<(usize, usize, [i64; 2])>,
}

/// The moment polytope `UVWXYZ` of the coadjoint orbit and its 15 edge weights.
pub fn orbit_gkm() -> GkmGraph {
    const U: usize = 0;
    const V: usize = 1;
    const W: usize = 2;
    const X: usize = 3;
    const Y: usize = 4;
    const Z: usize = 5;
    GkmGraph {
        names: ["U", "V", "W", "X", "Y", "Z"],
        positions: [[-1, -2], [-2, -1], [-1, 1], [1, 2], [2, 1], [1, -1]],
        edges: vec![
            (U, V, [-1, 1]),
            (U, Z, [2, 1]),
            (U, W, [0, 1]),
            (U, Y, [1, 1]),
            (U, X, [1, 2]),
            (V, Z, [1, 0]),
            (V, W, [1, 2]),
            (V, Y, [2, 1]),
            (V, X, [1, 1]),
            (Z, W, [-1, 1]),
            (Z, Y, [1, 2]),
            (Z, X, [0, 1]),
            (W, Y, [1, 0]),
            (W, X, [2, 1]),
            (Y, X, [-1, 1]),
        ],
    }
}

/// Restricts the torus action to the circle generated by `xi`.
pub fn project_gkm(g: &GkmGraph, xi: [i64; 2]) -> Result<Configuration, ExampleError> {
    let dot = |v: [i64; 2]| xi[0] * v[0] + xi[1] * v[1];
    let values: Vec<i64> = g.positions.iter().map(|&p| dot(p)).collect();
    let mut order: Vec<usize> = (0..POINTS).collect();
    order.sort_by_key(|&v| values[v]);
    if order.windows(2).any(|w| values[w[0]] == values[w[1]]) {
        return Err(ExampleError::DegenerateDirection(
            xi,
            "two fixed points share a moment value".into(),
        ));
    }
    let mut rank = [0usize; POINTS];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let mut list = Vec::with_capacity(g.edges.len());
    for &(p, q, wv) in &g.edges {
        let w = dot(wv).abs();
        if w == 0 {
            return Err(ExampleError::DegenerateDirection(
                xi,
                format!(
                    "edge {}{} has weight orthogonal to the direction",
                    g.names[p], g.names[q]
                ),
            ));
        }
        let (lo, hi) = if rank[p] < rank[q] {
            (rank[p], rank[q])
        } else {
            (rank[q], rank[p])
        };
        list.push(WeightEdge::new(lo, hi, w));
    }
    let sorted: Vec<i64> = order.iter().map(|&v| values[v]).collect();
    let profile = MomentProfile::normalized(&sorted)?;
    Ok(Configuration::new(
        format!("gkm{xi:?}"),
        profile,
        list,
        true,
    )?)
}
