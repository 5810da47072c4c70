//! Batch evaluation over independent instances.
//!
//! Every instance decision is pure, so batches fan out with rayon when the
//! `parallel` feature is enabled (the default) and fall back to a plain
//! sequential loop otherwise. Results are merged in instance order either
//! way, so output never depends on scheduling.

use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::decide::{decide_direct, decide_grouped, Certificate};
use crate::graph::graph_of;
use crate::instance::random_instance_with;
use crate::oracle::decide_oracle;
use crate::reduction::dc_fixpoint;
use crate::tsft::{Alphabet, AllowableSet, OneBlock, SymbolId, Verdict};

/// Verdicts of the three deciders on one instance.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct TrioOutcome {
    pub direct: Verdict,
    pub grouped: Verdict,
    pub oracle: Verdict,
}

impl TrioOutcome {
    pub fn agree(&self) -> bool {
        self.direct == self.grouped && self.grouped == self.oracle
    }
}

pub fn verdict_trio(b: &AllowableSet) -> TrioOutcome {
    TrioOutcome {
        direct: decide_direct(b).verdict,
        grouped: decide_grouped(b).verdict,
        oracle: decide_oracle(b),
    }
}

#[cfg(feature = "parallel")]
pub fn verdict_trio_many(instances: &[AllowableSet]) -> Vec<TrioOutcome> {
    instances.par_iter().map(verdict_trio).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn verdict_trio_many(instances: &[AllowableSet]) -> Vec<TrioOutcome> {
    verdict_trio_many_sequential(instances)
}

pub fn verdict_trio_many_sequential(instances: &[AllowableSet]) -> Vec<TrioOutcome> {
    instances.iter().map(verdict_trio).collect()
}

#[cfg(feature = "parallel")]
pub fn decide_many(instances: &[AllowableSet]) -> Vec<Certificate> {
    instances.par_iter().map(decide_direct).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn decide_many(instances: &[AllowableSet]) -> Vec<Certificate> {
    decide_many_sequential(instances)
}

pub fn decide_many_sequential(instances: &[AllowableSet]) -> Vec<Certificate> {
    instances.iter().map(decide_direct).collect()
}

/// All 2^(n³) allowable sets over `n` symbols. Practical only for n ≤ 2.
pub fn all_instances(symbols: usize) -> Vec<AllowableSet> {
    let alphabet =
        Alphabet::new((0..symbols).map(|i| i.to_string())).expect("numeric names are distinct");
    let mut all_blocks = Vec::new();
    for p in 0..symbols {
        for l in 0..symbols {
            for r in 0..symbols {
                all_blocks.push(OneBlock::new(SymbolId(p), SymbolId(l), SymbolId(r)));
            }
        }
    }
    let count = 1usize << all_blocks.len();
    (0..count)
        .map(|mask| {
            let blocks = all_blocks
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, b)| *b);
            AllowableSet::new(alphabet.clone(), blocks).expect("blocks index the alphabet")
        })
        .collect()
}

/// `count` random instances over `symbols` symbols, densities drawn per
/// instance. Deterministic per seed.
pub fn sample_instances(symbols: usize, count: usize, seed: u64) -> Vec<AllowableSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let density = rng.random_range(0.05..0.95);
            random_instance_with(&mut rng, symbols, density)
        })
        .collect()
}

/// One reduction-fixpoint measurement for the bench report.
#[derive(Clone, Copy, Debug)]
pub struct BenchRecord {
    pub vertices: usize,
    pub conv_edges: usize,
    pub div_edges: usize,
    pub steps: usize,
    pub micros: u128,
}

/// Times `dc_fixpoint` over random graphs of the given vertex counts at a
/// grid of densities. Step counts are bounded by |V|² by construction; the
/// records let callers confirm it.
pub fn bench_reduction(sizes: &[usize], seed: u64) -> Vec<BenchRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for &size in sizes {
        for density in [0.1, 0.3, 0.5, 0.8] {
            for _ in 0..3 {
                let instance = random_instance_with(&mut rng, size, density);
                let graph = graph_of(&instance);
                let start = Instant::now();
                let (_, trace) = dc_fixpoint(&graph);
                let micros = start.elapsed().as_micros();
                records.push(BenchRecord {
                    vertices: size,
                    conv_edges: graph.convergent().len(),
                    div_edges: graph.divergent().len(),
                    steps: trace.len(),
                    micros,
                });
            }
        }
    }
    records
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("vertices,conv_edges,div_edges,steps,micros\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.vertices, r.conv_edges, r.div_edges, r.steps, r.micros
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_symbol_space_has_256_instances() {
        let all = all_instances(2);
        assert_eq!(all.len(), 256);
    }

    #[test]
    fn parallel_and_sequential_batches_agree() {
        let instances = sample_instances(3, 64, 11);
        assert_eq!(
            verdict_trio_many(&instances),
            verdict_trio_many_sequential(&instances)
        );
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_instances(4, 5, 3), sample_instances(4, 5, 3));
    }

    #[test]
    fn bench_steps_respect_the_quadratic_bound() {
        for record in bench_reduction(&[4, 6], 5) {
            assert!(record.steps <= record.vertices * record.vertices);
        }
    }

    #[test]
    fn bench_csv_has_the_pinned_header() {
        let csv = bench_csv(&bench_reduction(&[3], 1));
        assert!(csv.starts_with("vertices,conv_edges,div_edges,steps,micros\n"));
        assert_eq!(csv.lines().count(), 1 + 4 * 3);
    }
}
