use forestrecom::exact::{
    bottleneck_ratio, enumerate_forests, exact_distribution, fraction_balanced,
    recom_reachability_graph, EnumOptions,
};
use forestrecom::graph::{self, Graph};
use forestrecom::spanning::count_spanning_trees;
use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_rational::BigRational;

fn instances() -> Vec<Graph> {
    vec![
        graph::cycle(3).unwrap(),
        graph::cycle(4).unwrap(),
        graph::grid(2, 3).unwrap(),
        graph::double_cycle(3).unwrap(),
        graph::grid(2, 4).unwrap(),
        graph::grid(3, 3).unwrap(),
    ]
}

#[test]
fn partition_function_counts_forests_and_obeys_the_binomial_bound() {
    for g in instances() {
        let trees = count_spanning_trees(&g).0;
        for k in 2..=3 {
            let dist = exact_distribution(&g, k, 0.0, EnumOptions::default()).unwrap();
            let z = dist.exact_total().unwrap().clone();
            let forests = enumerate_forests(&g, g.n() - k).unwrap().len();
            assert_eq!(z, BigUint::from(forests));
            let bound = BigUint::from(binomial(g.n() - 1, k - 1)) * &trees;
            assert!(z <= bound, "n={} k={k}: {z} > {bound}", g.n());
        }
    }
}

#[test]
fn balanced_fractions() {
    let r = |a: i64, b: i64| BigRational::new(BigInt::from(a), BigInt::from(b));
    let opts = EnumOptions::default();
    assert_eq!(
        fraction_balanced(&graph::cycle(4).unwrap(), 2, opts).unwrap(),
        r(1, 3)
    );
    // grid(2,2) is the 4-cycle
    assert_eq!(
        fraction_balanced(&graph::grid(2, 2).unwrap(), 2, opts).unwrap(),
        r(1, 3)
    );
    // grid(2,3): 33 two-tree forests (35 four-edge subsets minus the two
    // squares); balanced are the two rows and the two mirrored L pairs.
    let g = graph::grid(2, 3).unwrap();
    assert_eq!(fraction_balanced(&g, 2, opts).unwrap(), r(3, 33));
    let dist = exact_distribution(&g, 2, 0.0, opts).unwrap();
    assert_eq!(dist.exact_total().unwrap(), &BigUint::from(33u32));
    // Odd widths cannot cut between columns, so n * fraction dips there;
    // it stays above a constant all the same.
    for n in 2..=6 {
        let f = fraction_balanced(&graph::grid(2, n).unwrap(), 2, opts).unwrap();
        assert!(f * BigInt::from(n as i64) >= r(1, 5), "n = {n}");
    }
}

#[test]
fn bottleneck_ratio_shrinks() {
    let r: Vec<f64> = [2, 3, 4]
        .iter()
        .map(|&n| {
            let g = graph::double_cycle(3 * n).unwrap();
            let opts = EnumOptions {
                override_guard: n == 4,
                part_size: None,
            };
            let b = bottleneck_ratio(&g, opts).unwrap();
            use num_traits::ToPrimitive;
            b.ratio.to_f64().unwrap()
        })
        .collect();
    assert!(r[0] > r[1] && r[1] > r[2], "{r:?}");
    assert!(r[2] / r[1] <= r[1] / r[0] * 1.5, "{r:?}");
}

#[test]
fn reachability() {
    let opts = EnumOptions::default();
    let dc = recom_reachability_graph(&graph::double_cycle(3).unwrap(), 3, opts).unwrap();
    assert!(dc.states.len() > 1);
    assert!(dc.is_strongly_connected());
    // On a single cycle two adjacent pairs merge into a 4-path whose only
    // balanced split is the one it came from.
    let c6 = recom_reachability_graph(&graph::cycle(6).unwrap(), 3, opts).unwrap();
    assert_eq!(c6.states.len(), 2);
    assert_eq!(c6.non_self_edge_count(), 0);
    assert!(!c6.is_strongly_connected());
}
