//! Heavyweight randomized cross-check of the two engines, beyond what the
//! default suites run. Ignored by default:
//!
//! ```sh
//! cargo test -p pathcount --test stress -- --ignored --nocapture
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pathcount::btcount::{count_paths_bt, count_paths_bt_all, BtOptions};
use pathcount::fbs::{compute_edge_order, count_paths_fbs, FbsOptions};
use pathcount::{Graph, Instance, SolverError};

fn random_graph(rng: &mut ChaCha8Rng, n: u32, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

#[test]
#[ignore]
fn engines_agree_on_thousands_of_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut bt_opts = BtOptions::new();
    bt_opts.path_budget = Some(20_000_000); // keep the oracle tractable
    let mut compared = 0u64;
    let mut skipped = 0u64;

    for round in 0..3000 {
        let n = rng.gen_range(2..=12);
        let p = [0.15, 0.3, 0.5, 0.8][rng.gen_range(0..4)];
        let g = random_graph(&mut rng, n, p);
        let order = compute_edge_order(&g, 1);
        let max_len = rng.gen_range(0..=n);
        let terminals = if rng.gen_bool(0.5) {
            let s = rng.gen_range(1..=n);
            let t = (s + rng.gen_range(1..n.max(2))) % n + 1;
            if s == t {
                None
            } else {
                Some((s.min(t), s.max(t)))
            }
        } else {
            None
        };
        let inst = Instance::new(g, max_len, terminals).unwrap();
        let expected = match inst.terminals {
            Some(_) => count_paths_bt::<u128>(&inst, &bt_opts),
            None => count_paths_bt_all::<u128>(&inst, &bt_opts),
        };
        match expected {
            Ok(expected) => {
                let got = count_paths_fbs::<u128>(&inst, &order, &FbsOptions::new()).unwrap();
                assert_eq!(got, expected, "round {round}: n={n} p={p} l={max_len} terminals={terminals:?}");
                compared += 1;
            }
            Err(SolverError::BudgetExceeded { .. }) => skipped += 1,
            Err(other) => panic!("oracle failed: {other:?}"),
        }
    }
    println!("stress: {compared} instances compared exactly, {skipped} beyond the oracle budget");
    assert!(compared >= 2500);
}
