//! Shared fixtures for the benchmarks.

use tourglue::generators::{k4half, random_cyclic};
use tourglue::rational::rat;
use tourglue::CyclicPoint;

/// K4H plus random cyclic points of growing size.
pub fn cyclic_suite() -> Vec<(String, CyclicPoint)> {
    let mut out = vec![("k4half".to_string(), k4half())];
    for (n, seed) in [(8, 1), (12, 2), (16, 3)] {
        out.push((format!("random-{n}"), random_cyclic(n, &rat(1, 3), seed).expect("generator")));
    }
    out
}
