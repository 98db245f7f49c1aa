//! Equivariant and ordinary cohomology computed from restrictions to the
//! fixed points, in exact rational arithmetic.
//!
//! An equivariant class of degree `2m` is stored by its restrictions to the
//! six fixed points, each a polynomial in the generator `t` of `H^2(BS^1)`.
//! Homogeneous classes restrict to rational multiples of `t^m`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{derive_weight_system, Configuration, MomentProfile, WeightSystem, POINTS};

pub type Rational = BigRational;

const TOP: usize = POINTS - 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("integrality obstruction at degree {degree}: {what} = {value} is not an integer")]
    Integrality {
        degree: usize,
        what: String,
        value: String,
    },
    #[error("duality fails: q{i} * q{j} = {product} but q{top} = {expected}", top = TOP)]
    Duality {
        i: usize,
        j: usize,
        product: String,
        expected: String,
    },
    #[error("class of degree {degree} disagrees with its basis expansion at P{vertex}")]
    Consistency { degree: usize, vertex: usize },
    #[error("top Chern coefficient is {0}, expected the number of fixed points {POINTS}")]
    EulerMismatch(String),
    #[error("class is not homogeneous")]
    NotHomogeneous,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `"p/q"`, or `"p"` when it is an integer.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Polynomial in `t` with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn monomial(c: Rational, deg: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); deg + 1];
        coeffs[deg] = c;
        Poly(coeffs).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn coeff(&self, deg: usize) -> Rational {
        self.0.get(deg).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `Some(m)` if the only nonzero term is `t^m`; `None` for zero or mixed.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut nz = self.0.iter().enumerate().filter(|(_, c)| !c.is_zero());
        let (d, _) = nz.next()?;
        nz.next().is_none().then_some(d)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect()).trimmed()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }
}

/// Equivariant class of degree `2 * degree`, given by its restrictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivariantClass {
    degree: usize,
    restrictions: Vec<Poly>,
}

impl EquivariantClass {
    /// Class of half-degree `degree` with restriction `coeffs[i] * t^degree` at `P_i`.
    pub fn from_coefficients(degree: usize, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len(), POINTS);
        let restrictions = coeffs
            .into_iter()
            .map(|c| Poly::monomial(c, degree))
            .collect();
        EquivariantClass {
            degree,
            restrictions,
        }
    }

    pub fn one() -> Self {
        Self::from_coefficients(0, vec![rat(1); POINTS])
    }

    /// `t^m` pulled back from a point.
    pub fn t_power(m: usize) -> Self {
        Self::from_coefficients(m, vec![rat(1); POINTS])
    }

    /// The equivariant extension `ũ` of `[ω]`: restricts to `-φ(P_i) t`.
    pub fn u_tilde(profile: &MomentProfile) -> Self {
        Self::from_coefficients(1, profile.values().iter().map(|&v| rat(-v)).collect())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn restriction(&self, i: usize) -> &Poly {
        &self.restrictions[i]
    }

    /// Coefficient of `t^degree` in the restriction to `P_i`.
    pub fn coeff_at(&self, i: usize) -> Rational {
        self.restrictions[i].coeff(self.degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.restrictions
            .iter()
            .all(|p| p.is_zero() || p.homogeneous_degree() == Some(self.degree))
    }

    pub fn mul(&self, other: &Self) -> Self {
        EquivariantClass {
            degree: self.degree + other.degree,
            restrictions: self
                .restrictions
                .iter()
                .zip(&other.restrictions)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.degree, other.degree,
            "adding classes of different degree"
        );
        EquivariantClass {
            degree: self.degree,
            restrictions: self
                .restrictions
                .iter()
                .zip(&other.restrictions)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        EquivariantClass {
            degree: self.degree,
            restrictions: self.restrictions.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn pow(&self, m: usize) -> Self {
        (0..m).fold(Self::t_power(0), |acc, _| acc.mul(self))
    }
}

/// `(Λ_i^-, Λ_i)` per fixed point.
pub fn lambda_products(ws: &WeightSystem) -> ([i64; POINTS], [i64; POINTS]) {
    (ws.lambda_neg, ws.lambda)
}

/// `∏_{j<i} (φ(P_j) - φ(P_i))`.
fn lower_product(profile: &MomentProfile, i: usize) -> i64 {
    (0..i).map(|j| profile.diff(i, j)).product()
}

/// Generators `α_i = q_i [ω]^i` of `H^*(M; Z)` and the integers `a_i = 1/q_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingPresentation {
    pub q: [Rational; POINTS],
    pub a: [BigInt; POINTS],
}

impl RingPresentation {
    pub fn q_strings(&self) -> Vec<String> {
        self.q.iter().map(fmt_rational).collect()
    }
}

pub fn ring_presentation(c: &Configuration) -> Result<RingPresentation, CohomologyError> {
    let ws = derive_weight_system(c);
    let profile = c.profile();
    let q: [Rational; POINTS] =
        std::array::from_fn(|i| ratio(ws.lambda_neg[i], lower_product(profile, i)));
    let mut a: [BigInt; POINTS] = Default::default();
    for i in 0..POINTS {
        let inv = q[i].recip();
        if !inv.is_integer() {
            return Err(CohomologyError::Integrality {
                degree: 2 * i,
                what: format!("a{i}"),
                value: fmt_rational(&inv),
            });
        }
        a[i] = inv.to_integer();
    }
    for i in 0..=TOP / 2 {
        let j = TOP - i;
        let product = &q[i] * &q[j];
        if product != q[TOP] {
            return Err(CohomologyError::Duality {
                i,
                j,
                product: fmt_rational(&product),
                expected: fmt_rational(&q[TOP]),
            });
        }
    }
    Ok(RingPresentation { q, a })
}

/// Module basis `α̃_i = (1/a_i) ∏_{j<i} (ũ + φ(P_j) t)` of `H^*_{S^1}(M; Z)`.
#[derive(Debug, Clone)]
pub struct EquivariantBasis {
    pub a: [BigInt; POINTS],
    pub classes: Vec<EquivariantClass>,
}

pub fn equivariant_basis(c: &Configuration) -> Result<EquivariantBasis, CohomologyError> {
    let ring = ring_presentation(c)?;
    let profile = c.profile();
    let u = EquivariantClass::u_tilde(profile);
    let mut classes = Vec::with_capacity(POINTS);
    let mut product = EquivariantClass::one();
    for i in 0..POINTS {
        classes.push(product.scale(&ring.q[i]));
        let shift = EquivariantClass::t_power(1).scale(&rat(profile.value(i)));
        product = product.mul(&u.add(&shift));
    }
    let ws = derive_weight_system(c);
    for (i, class) in classes.iter().enumerate() {
        for j in 0..i {
            if !class.coeff_at(j).is_zero() {
                return Err(CohomologyError::Consistency {
                    degree: 2 * i,
                    vertex: j,
                });
            }
        }
        if class.coeff_at(i) != rat(ws.lambda_neg[i]) {
            return Err(CohomologyError::Consistency {
                degree: 2 * i,
                vertex: i,
            });
        }
    }
    Ok(EquivariantBasis { a: ring.a, classes })
}

fn elementary_symmetric(weights: &[i64]) -> Vec<i128> {
    let mut e = vec![0i128; weights.len() + 1];
    e[0] = 1;
    for (n, &w) in weights.iter().enumerate() {
        for m in (1..=n + 1).rev() {
            e[m] += e[m - 1] * w as i128;
        }
    }
    e
}

/// `c_m^{S^1}(M)`: restriction `σ_m(W_i) t^m` at `P_i`.
pub fn chern_restrictions(ws: &WeightSystem, m: usize) -> EquivariantClass {
    let coeffs = ws
        .weights
        .iter()
        .map(|w| Rational::from_integer(BigInt::from(elementary_symmetric(w)[m])))
        .collect();
    EquivariantClass::from_coefficients(m, coeffs)
}

/// Coefficients `d_0..d_m` with `x = Σ_i d_i t^{m-i} α̃_i`.
///
/// Solved by forward substitution on the restrictions at `P_0..P_m`; the
/// remaining fixed points then have to agree.
pub fn expand_in_basis(
    x: &EquivariantClass,
    basis: &EquivariantBasis,
) -> Result<Vec<Rational>, CohomologyError> {
    if !x.is_homogeneous() {
        return Err(CohomologyError::NotHomogeneous);
    }
    let m = x.degree();
    assert!(m <= TOP, "degree above the top class");
    let base = |i: usize, j: usize| basis.classes[i].coeff_at(j);
    let mut d: Vec<Rational> = Vec::with_capacity(m + 1);
    for j in 0..=m {
        let known: Rational = (0..j).map(|i| &d[i] * base(i, j)).sum();
        d.push((x.coeff_at(j) - known) / base(j, j));
    }
    for j in m + 1..POINTS {
        let value: Rational = (0..=m).map(|i| &d[i] * base(i, j)).sum();
        if value != x.coeff_at(j) {
            return Err(CohomologyError::Consistency {
                degree: 2 * m,
                vertex: j,
            });
        }
    }
    Ok(d)
}

/// Integer expansions of the equivariant Chern classes and the ordinary
/// Chern coefficients `c_m(M) = d_{m,m} α_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernReport {
    /// `equivariant[m-1] = [d_{m,0}, ..., d_{m,m}]` for `m = 1..=5`.
    pub equivariant: Vec<Vec<BigInt>>,
    pub ordinary: Vec<BigInt>,
}

impl ChernReport {
    pub fn ordinary_i64(&self) -> Vec<i64> {
        self.ordinary
            .iter()
            .map(|x| i64::try_from(x).expect("small coefficient"))
            .collect()
    }
}

pub fn total_chern(c: &Configuration) -> Result<ChernReport, CohomologyError> {
    let basis = equivariant_basis(c)?;
    let ws = derive_weight_system(c);
    let mut equivariant = Vec::with_capacity(TOP);
    for m in 1..=TOP {
        let d = expand_in_basis(&chern_restrictions(&ws, m), &basis)?;
        let mut ints = Vec::with_capacity(d.len());
        for (i, di) in d.iter().enumerate() {
            if !di.is_integer() {
                return Err(CohomologyError::Integrality {
                    degree: 2 * m,
                    what: format!("d[{m},{i}]"),
                    value: fmt_rational(di),
                });
            }
            ints.push(di.to_integer());
        }
        equivariant.push(ints);
    }
    let ordinary: Vec<BigInt> = equivariant
        .iter()
        .map(|d| d.last().unwrap().clone())
        .collect();
    if ordinary[TOP - 1] != BigInt::from(POINTS) {
        return Err(CohomologyError::EulerMismatch(
            ordinary[TOP - 1].to_string(),
        ));
    }
    Ok(ChernReport {
        equivariant,
        ordinary,
    })
}

/// Localization sum `Σ_i x|_{P_i} / (Λ_i t^5)` for a homogeneous class,
/// reported as the coefficient of `t^{m-5}`. It must vanish for `m < 5`.
pub fn localize_integral(
    x: &EquivariantClass,
    ws: &WeightSystem,
) -> Result<Rational, CohomologyError> {
    if !x.is_homogeneous() {
        return Err(CohomologyError::NotHomogeneous);
    }
    Ok((0..POINTS).map(|i| x.coeff_at(i) / rat(ws.lambda[i])).sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Integrals {
    /// `∫ [ω]^5`.
    pub omega5: String,
    /// `∫ c_5`.
    pub euler: String,
}

/// Everything `report` prints about one configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub ring_q: Vec<String>,
    pub a: Vec<String>,
    pub chern_ordinary: Vec<String>,
    pub chern_equivariant: Vec<Vec<String>>,
    pub integrals: Integrals,
}

pub fn cohomology_report(c: &Configuration) -> Result<CohomologyReport, CohomologyError> {
    let ring = ring_presentation(c)?;
    let chern = total_chern(c)?;
    let ws = derive_weight_system(c);
    let omega5 = localize_integral(&EquivariantClass::u_tilde(c.profile()).pow(TOP), &ws)?;
    let euler = localize_integral(&chern_restrictions(&ws, TOP), &ws)?;
    let strs = |v: &[BigInt]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    Ok(CohomologyReport {
        ring_q: ring.q_strings(),
        a: strs(&ring.a),
        chern_ordinary: strs(&chern.ordinary),
        chern_equivariant: chern.equivariant.iter().map(|d| strs(d)).collect(),
        integrals: Integrals {
            omega5: fmt_rational(&omega5),
            euler: fmt_rational(&euler),
        },
    })
}

/// True if every coefficient is a (possibly negative) integer.
pub fn all_integral(values: &[Rational]) -> bool {
    values.iter().all(|v| v.is_integer())
}
