use hamfix_core::cohomology::{
    chern_restrictions, cohomology_report, equivariant_basis, localize_integral, rat,
    ring_presentation, total_chern, EquivariantClass,
};
use hamfix_core::constraints::{check_all, compute_c1, CheckFlags};
use hamfix_core::examples::{builtin, orbit_gkm, project_gkm, Builtin};
use hamfix_core::model::{canonicalize, derive_weight_system, Configuration};
use num_bigint::BigInt;
use num_rational::Ratio;

type Q = Ratio<i128>;

fn fixtures() -> Vec<(Builtin, Configuration)> {
    [
        Builtin::O,
        Builtin::Cp5 { gaps: [1; 5] },
        Builtin::Grass { a: 1, b: 1, c: 2 },
        Builtin::RemarkW7,
    ]
    .into_iter()
    .map(|b| (b, builtin(b).unwrap()))
    .collect()
}

/// Signed weights at every point, straight from the edge list.
fn weights(c: &Configuration) -> Vec<Vec<i128>> {
    let mut w = vec![Vec::new(); 6];
    for e in c.edges() {
        for _ in 0..e.mult {
            w[e.lo].push(e.weight as i128);
            w[e.hi].push(-(e.weight as i128));
        }
    }
    w
}

/// `Σ_i (-φ_i)^m / Λ_i`, the localization of `ũ^m`.
fn oracle_u_integral(c: &Configuration, m: u32) -> Q {
    let w = weights(c);
    (0..6)
        .map(|i| {
            let phi = c.profile().value(i) as i128;
            let lambda: i128 = w[i].iter().product();
            Q::new((-phi).pow(m), lambda)
        })
        .sum()
}

/// `c_1 = (Γ_0 - Γ_5) / φ_5`.
fn oracle_c1(c: &Configuration) -> Q {
    let w = weights(c);
    let g0: i128 = w[0].iter().sum();
    let g5: i128 = w[5].iter().sum();
    Q::new(g0 - g5, c.profile().width() as i128)
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn c1_matches_independent_sums() {
    let expected = [3, 6, 5, 3];
    for ((b, c), k) in fixtures().into_iter().zip(expected) {
        assert_eq!(compute_c1(&c), Ok(k), "{b}");
        assert_eq!(oracle_c1(&c), Q::from_integer(k as i128), "{b}");
    }
}

#[test]
fn fixtures_pass_all_checks() {
    for (b, c) in fixtures() {
        let r = check_all(&c, CheckFlags::default());
        assert!(r.pass, "{b}: {:?}", r.violations);
    }
}

#[test]
fn orbit_sums_and_products() {
    let ws = derive_weight_system(&builtin(Builtin::O).unwrap());
    assert_eq!(ws.gamma, [15, 12, 3, -3, -12, -15]);
    assert_eq!(ws.lambda_neg, [1, -1, 4, -10, 60, -120]);
    assert_eq!(ws.lambda, [120, -60, 40, -40, 60, -120]);
}

#[test]
fn ring_generators() {
    let o = ring_presentation(&builtin(Builtin::O).unwrap()).unwrap();
    assert_eq!(o.q_strings(), ["1", "1", "1/3", "1/6", "1/18", "1/18"]);
    let w7 = ring_presentation(&builtin(Builtin::RemarkW7).unwrap()).unwrap();
    assert_eq!(w7.q_strings(), ["1", "1", "1", "1/12", "1/12", "1/12"]);
    let cp5 = ring_presentation(&builtin(Builtin::Cp5 { gaps: [1; 5] }).unwrap()).unwrap();
    assert!(cp5.q.iter().all(|q| *q == rat(1)));
}

#[test]
fn ring_duality_on_fixtures() {
    for (b, c) in fixtures() {
        let r = ring_presentation(&c).unwrap();
        for i in 0..6 {
            assert_eq!(&r.q[i] * &r.q[5 - i], r.q[5], "{b} at {i}");
        }
    }
}

#[test]
fn orbit_chern_classes() {
    let chern = total_chern(&builtin(Builtin::O).unwrap()).unwrap();
    assert_eq!(chern.ordinary_i64(), vec![3, 13, 22, 30, 6]);
    let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    assert_eq!(chern.equivariant[0], big(&[15, 3]));
    assert_eq!(chern.equivariant[1], big(&[85, 39, 13]));
}

#[test]
fn cp5_chern_classes_are_binomial() {
    let chern = total_chern(&builtin(Builtin::Cp5 { gaps: [1; 5] }).unwrap()).unwrap();
    let expected: Vec<i64> = (1..=5).map(|m| binomial(6, m)).collect();
    assert_eq!(chern.ordinary_i64(), expected);
}

#[test]
fn top_chern_number_is_six_everywhere() {
    for (b, c) in fixtures() {
        let chern = total_chern(&c).unwrap();
        assert_eq!(chern.ordinary_i64()[4], 6, "{b}");
    }
}

#[test]
fn localization_of_powers_matches_oracle() {
    for (b, c) in fixtures() {
        let ws = derive_weight_system(&c);
        let u = EquivariantClass::u_tilde(c.profile());
        for m in 0..=5 {
            let lib = localize_integral(&u.pow(m), &ws).unwrap();
            let oracle = oracle_u_integral(&c, m as u32);
            assert_eq!(
                lib.numer().to_string(),
                oracle.numer().to_string(),
                "{b} m={m}"
            );
            assert_eq!(
                lib.denom().to_string(),
                oracle.denom().to_string(),
                "{b} m={m}"
            );
        }
    }
}

#[test]
fn orbit_integrals() {
    let c = builtin(Builtin::O).unwrap();
    let ws = derive_weight_system(&c);
    let u = EquivariantClass::u_tilde(c.profile());
    assert_eq!(
        localize_integral(&EquivariantClass::one(), &ws).unwrap(),
        rat(0)
    );
    for m in 1..5 {
        assert_eq!(localize_integral(&u.pow(m), &ws).unwrap(), rat(0));
    }
    assert_eq!(localize_integral(&u.pow(5), &ws).unwrap(), rat(18));
    // α_5 = [ω]^5 / 18 integrates to 1.
    let basis = equivariant_basis(&c).unwrap();
    assert_eq!(localize_integral(&basis.classes[5], &ws).unwrap(), rat(1));
    assert_eq!(
        localize_integral(&chern_restrictions(&ws, 5), &ws).unwrap(),
        rat(6)
    );
}

#[test]
fn report_strings() {
    let r = cohomology_report(&builtin(Builtin::O).unwrap()).unwrap();
    assert_eq!(r.a, ["1", "1", "3", "6", "18", "18"]);
    assert_eq!(r.chern_ordinary, ["3", "13", "22", "30", "6"]);
    assert_eq!(r.integrals.omega5, "18");
    assert_eq!(r.integrals.euler, "6");
}

#[test]
fn gkm_projection_reproduces_orbit() {
    let projected = project_gkm(&orbit_gkm(), [1, 2]).unwrap();
    let fixture = builtin(Builtin::O).unwrap();
    assert!(canonicalize(&projected).same_data(&canonicalize(&fixture)));
}

#[test]
fn gkm_projection_along_other_generic_directions_is_valid() {
    // Any generic direction gives a circle action on the same orbit.
    let mut projected = 0;
    for xi in [[1, 3], [2, 3], [3, 1], [1, -3]] {
        let Ok(c) = project_gkm(&orbit_gkm(), xi) else {
            continue;
        };
        let g = c.weight_gcd();
        let r = check_all(&c.with_effective(g == 1), CheckFlags::default());
        assert!(r.pass, "{xi:?}: {:?}", r.violations);
        projected += 1;
    }
    assert!(projected >= 2);
}

#[test]
fn cp5_family_c1() {
    for gaps in [[1, 1, 1, 1, 1], [1, 2, 1, 2, 1], [2, 1, 1, 1, 3]] {
        let c = builtin(Builtin::Cp5 { gaps }).unwrap();
        // Every pair is joined by the gap itself, so Γ_0 - Γ_5 = 6 φ_5.
        assert_eq!(oracle_c1(&c), Q::from_integer(6));
        assert_eq!(compute_c1(&c), Ok(6));
    }
}

#[test]
fn grass_family_c1() {
    for (a, b, c) in [(1, 1, 2), (2, 1, 2), (1, 3, 4)] {
        let cfg = builtin(Builtin::Grass { a, b, c }).unwrap();
        assert_eq!(oracle_c1(&cfg), Q::from_integer(5), "{a} {b} {c}");
    }
}
