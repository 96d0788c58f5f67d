use batchlab_core::sweep::compare_algorithms;
use std::time::Instant;

#[test]
#[ignore]
fn measure_coupled_compare() {
    let grid: Vec<u64> = (8..=13).map(|e| 1u64 << e).collect();
    for seed in [1010u64, 77, 4242] {
        let t = Instant::now();
        let rep = compare_algorithms(0.0, 0.1, &grid, 3200, 100, seed).unwrap();
        let bm: Vec<f64> = rep.rows.iter().filter(|r| r.statistic.ends_with("batch")).map(|r| r.value).collect();
        let fm: Vec<f64> = rep.rows.iter().filter(|r| r.statistic.ends_with("full_memory")).map(|r| r.value).collect();
        println!("seed {seed} ({:.0}s):", t.elapsed().as_secs_f64());
        let mut prev = f64::INFINITY;
        for (i, n) in grid.iter().enumerate() {
            let r = bm[i] / fm[i];
            println!("  n={n}: ratio={r:.4} {}", if r < prev {"dec"} else {"** UP **"});
            prev = r;
        }
        for c in &rep.checks { println!("  {}", c.line()); }
    }
}
