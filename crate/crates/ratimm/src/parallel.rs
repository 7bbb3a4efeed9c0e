//! Per-degree ranks on scoped threads.

use std::sync::atomic::{AtomicU32, Ordering};
use std::thread;

use ratimm_core::cohomology::CochainComplex;
use ratimm_core::{BettiTable, Cdga};

pub fn available_threads() -> usize {
    thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// Same table as [`ratimm_core::cohomology`], with the ranks of the
/// differentials computed concurrently (largest degrees first).
pub fn cohomology_parallel(cdga: &Cdga, cutoff: u32, threads: usize) -> BettiTable {
    let cx = CochainComplex::new(cdga, cutoff + 1);
    let dims: Vec<usize> = (0..=cutoff + 1).map(|n| cx.dim(n)).collect();
    let next = AtomicU32::new(0);
    let mut ranks = vec![0; cutoff as usize + 1];
    thread::scope(|s| {
        let workers: Vec<_> = (0..threads.max(1))
            .map(|_| {
                s.spawn(|| {
                    let mut done = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i > cutoff {
                            break done;
                        }
                        let n = cutoff - i;
                        done.push((n, cx.rank(n)));
                    }
                })
            })
            .collect();
        for w in workers {
            for (n, r) in w.join().expect("rank worker panicked") {
                ranks[n as usize] = r;
            }
        }
    });
    BettiTable::from_ranks(cutoff, &dims, &ranks)
}
