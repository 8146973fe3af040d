use tourglue::cyclic::critical_cuts;
use tourglue::generators::{k4half, random_cyclic};
use tourglue::matchings::{
    check_partition_relaxed, partition_induced_matchings, verify_partition, PartitionMethod,
};
use tourglue::rational::{half, rat};

#[test]
fn k4half_every_root() {
    let p = k4half();
    for v in 0..4 {
        let mp = partition_induced_matchings(&p, v).unwrap();
        assert!(verify_partition(&p, v, &mp));
    }
}

#[test]
fn random_points_without_critical_cuts() {
    let mut tried = 0;
    let mut structural = 0;
    let mut forced = 0;
    for seed in 0..200u64 {
        for theta in [half(), rat(1, 3), rat(2, 5)] {
            let n = 6 + 2 * (seed as usize % 6);
            let Ok(p) = random_cyclic(n, &theta, seed) else { continue };
            if !critical_cuts(&p).is_empty() {
                continue;
            }
            tried += 1;
            let v = seed as usize % n;
            let mp = partition_induced_matchings(&p, v).unwrap();
            if mp.forced_pair.is_some() {
                forced += 1;
                check_partition_relaxed(&p, v, &mp).unwrap();
            } else {
                assert!(verify_partition(&p, v, &mp));
            }
            if mp.method == PartitionMethod::Structural {
                structural += 1;
            }
        }
    }
    assert!(tried > 20, "only {tried} instances");
    println!("structural {structural}/{tried}, forced {forced}");
    assert_eq!(structural, tried);
}

