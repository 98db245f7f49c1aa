use hamfix_core::cohomology::{ring_presentation, total_chern};
use hamfix_core::constraints::{check_all, check_divisibility, compute_c1, CheckFlags};
use hamfix_core::examples::{builtin, Builtin};
use hamfix_core::model::{
    canonicalize, derive_weight_system, Configuration, MomentProfile, WeightEdge,
};
use hamfix_core::search::{enumerate, SearchSpec};
use proptest::prelude::*;
use std::sync::OnceLock;

/// Pair every upward slot with a downward slot, vertex by vertex. Any choice
/// sequence gives a structurally valid pairing because unused upward slots
/// below `j` always number at least `j`.
fn build(gaps: [i64; 5], weights: &[i64], choices: &[usize]) -> Configuration {
    let mut open: Vec<usize> = Vec::new();
    let mut edges = Vec::new();
    let mut n = 0;
    for j in 0..6 {
        for _ in 0..j {
            let lo = open.remove(choices[n] % open.len());
            edges.push(WeightEdge::new(lo, j, weights[n]));
            n += 1;
        }
        open.extend(std::iter::repeat_n(j, 5 - j));
    }
    Configuration::new("", MomentProfile::from_gaps(gaps).unwrap(), edges, false).unwrap()
}

fn configuration() -> impl Strategy<Value = Configuration> {
    (
        prop::array::uniform5(1i64..=6),
        prop::collection::vec(1i64..=6, 15),
        prop::collection::vec(0usize..64, 15),
    )
        .prop_map(|(g, w, c)| build(g, &w, &c))
}

/// Configurations whose weights are the moment differences, so divisibility
/// and often the whole check suite hold.
fn tight_configuration() -> impl Strategy<Value = Configuration> {
    (
        prop::array::uniform5(1i64..=4),
        prop::collection::vec(0usize..64, 15),
    )
        .prop_map(|(g, c)| {
            let p = MomentProfile::from_gaps(g).unwrap();
            let skeleton = build(g, &[1; 15], &c);
            let edges = skeleton
                .edges()
                .iter()
                .map(|e| WeightEdge::with_mult(e.lo, e.hi, p.diff(e.lo, e.hi), e.mult))
                .collect();
            Configuration::new("", p, edges, false).unwrap()
        })
}

fn pool() -> &'static [Configuration] {
    static POOL: OnceLock<Vec<Configuration>> = OnceLock::new();
    POOL.get_or_init(|| enumerate(&SearchSpec::new(5, 12)).unwrap().configurations)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn flip_is_an_involution(c in configuration()) {
        prop_assert_eq!(c.flipped().flipped(), c);
    }

    #[test]
    fn canonical_form_is_idempotent_and_flip_invariant(c in configuration()) {
        let canon = canonicalize(&c);
        prop_assert!(canonicalize(&canon).same_data(&canon));
        prop_assert!(canonicalize(&c.flipped()).same_data(&canon));
        prop_assert!(canon.cmp_data(&c).is_le() && canon.cmp_data(&c.flipped()).is_le());
    }

    #[test]
    fn json_round_trip(c in configuration(), label in "[a-z]{0,6}", eff in any::<bool>()) {
        let c = c.with_label(label).with_effective(eff);
        let back: Configuration = serde_json::from_str(&c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn weight_system_of_flip_is_negated_and_reversed(c in configuration()) {
        let ws = derive_weight_system(&c);
        let fs = derive_weight_system(&c.flipped());
        for i in 0..6 {
            let mut neg: Vec<i64> = ws.weights[5 - i].iter().map(|w| -w).collect();
            neg.sort();
            let mut got = fs.weights[i].clone();
            got.sort();
            prop_assert_eq!(got, neg);
            prop_assert_eq!(fs.weights[i].iter().filter(|w| **w < 0).count(), i);
        }
    }

    #[test]
    fn c1_matches_sum_formula_and_is_flip_invariant(c in tight_configuration()) {
        let ws = derive_weight_system(&c);
        let g0: i64 = ws.weights[0].iter().sum();
        let g5: i64 = ws.weights[5].iter().sum();
        let k = compute_c1(&c).ok();
        prop_assert_eq!(k, compute_c1(&c.flipped()).ok());
        if let Some(k) = k {
            prop_assert_eq!(g0 - g5, k * c.profile().width());
        }
    }

    #[test]
    fn divisibility_matches_direct_test(c in configuration()) {
        let direct = c.edges().iter().all(|e| c.profile().diff(e.lo, e.hi) % e.weight == 0);
        prop_assert_eq!(check_divisibility(&c).is_empty(), direct);
    }

    #[test]
    fn verdict_is_flip_invariant(c in tight_configuration()) {
        let a = check_all(&c, CheckFlags::default());
        let b = check_all(&c.flipped(), CheckFlags::default());
        prop_assert_eq!(a.pass, b.pass);
        prop_assert_eq!(a.c1, b.c1);
        let mut ra = a.rules();
        let mut rb = b.rules();
        ra.sort();
        ra.dedup();
        rb.sort();
        rb.dedup();
        prop_assert_eq!(ra, rb);
    }

    #[test]
    fn valid_configurations_have_consistent_cohomology(i in 0usize..1000) {
        let pool = pool();
        let c = &pool[i % pool.len()];
        let chern = total_chern(c).unwrap();
        prop_assert_eq!(chern.ordinary_i64()[4], 6);
        let r = ring_presentation(c).unwrap();
        for j in 0..6 {
            prop_assert_eq!(&r.q[j] * &r.q[5 - j], r.q[5].clone());
        }
        let k = compute_c1(c).unwrap();
        prop_assert_eq!(chern.ordinary_i64()[0], k);
    }
}

#[test]
fn every_single_weight_mutation_is_detected() {
    let fixtures = [
        Builtin::O,
        Builtin::Cp5 { gaps: [1; 5] },
        Builtin::Grass { a: 1, b: 1, c: 2 },
        Builtin::RemarkW7,
    ];
    for b in fixtures {
        let c = builtin(b).unwrap();
        let k = compute_c1(&c).unwrap();
        for (idx, e) in c.edges().iter().enumerate() {
            for w in 1..=12 {
                if w == e.weight {
                    continue;
                }
                let mut edges = c.edges().to_vec();
                edges[idx].mult -= 1;
                edges.retain(|e| e.mult > 0);
                edges.push(WeightEdge::new(e.lo, e.hi, w));
                let m = Configuration::new("", *c.profile(), edges, false).unwrap();
                let r = check_all(&m, CheckFlags::default());
                assert!(
                    !r.pass || r.c1 != Some(k),
                    "{b}: P{}P{} {} -> {w} undetected",
                    e.lo,
                    e.hi,
                    e.weight
                );
            }
        }
    }
}
