//! Deterministic synthetic stand-ins for the benchmark tables.
//!
//! The two generators mirror the shape of the public datasets the benchmarks
//! target (row count, attribute count, class count) and plant a tree-shaped
//! signal: hidden anchor bits determine the class, and every informative
//! column is a noisy copy of one anchor. No column is clean, so a single
//! tree caps at the per-copy noise ceiling while an ensemble that spreads
//! its splits across many copies averages the noise away. Shallow trees can
//! only partially decode the class; full decoding needs the planted depth.

use std::io::Write;
use std::path::Path;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::rng::tagged_rng;

/// A generated table ready to be written as CSV.
#[derive(Debug, Clone)]
pub struct SyntheticTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl SyntheticTable {
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.headers.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut file = std::fs::File::create(path)?;
        file.write_all(self.to_csv_string().as_bytes())?;
        Ok(())
    }
}

const SYNTH_STREAM: u64 = 0x5EED;

struct AnchorLayout {
    anchors: usize,
    copies_per_anchor: usize,
    copy_flip_prob: f64,
    noise_columns: usize,
    noise_one_prob: f64,
    label_noise: f64,
    /// Probability that each hidden anchor bit is 1; biases the cell masses.
    bit_probs: &'static [f64],
}

/// 70 rows, 206 attributes, 7 classes. Three anchor bits set the class
/// through an unbalanced cell map, so depth-1 trees decode ~37%, depth-2
/// ~62%, and the full depth-3 rule approaches 100% before noise.
pub fn scadi_like(seed: u64) -> SyntheticTable {
    let layout = AnchorLayout {
        anchors: 3,
        copies_per_anchor: 60,
        copy_flip_prob: 0.03,
        noise_columns: 206 - 1 - 3 * 60,
        noise_one_prob: 0.25,
        label_noise: 0.01,
        bit_probs: &[0.40, 0.50, 0.40],
    };
    // cells indexed by (b0 b1 b2); two cells share class 0
    let cell_map = [0usize, 0, 1, 2, 3, 4, 5, 6];
    generate(seed, 70, &layout, &cell_map, 7, "class")
}

/// 32 rows, 56 attributes, 3 classes. Two anchor bits set the class through
/// an exclusive-or style map over biased bits: every single split leaves a
/// class mix, so shallow trees vote against the rarer diagonal cell, while
/// the biased masses keep each split's likelihood gain positive enough for
/// samplers to grow into the structure.
pub fn lung_cancer_like(seed: u64) -> SyntheticTable {
    let layout = AnchorLayout {
        anchors: 2,
        copies_per_anchor: 27,
        copy_flip_prob: 0.04,
        noise_columns: 56 - 1 - 2 * 27,
        noise_one_prob: 0.3,
        label_noise: 0.02,
        bit_probs: &[0.40, 0.50],
    };
    let cell_map = [0usize, 1, 2, 0];
    generate(seed, 32, &layout, &cell_map, 3, "class")
}

fn generate(
    seed: u64,
    rows: usize,
    layout: &AnchorLayout,
    cell_map: &[usize],
    class_count: usize,
    label_header: &str,
) -> SyntheticTable {
    assert_eq!(cell_map.len(), 1 << layout.anchors);
    assert_eq!(layout.bit_probs.len(), layout.anchors);
    assert!(cell_map.iter().all(|&c| c < class_count));
    let mut rng: ChaCha8Rng = tagged_rng(seed, SYNTH_STREAM);

    let mut headers = vec!["age".to_string()];
    for a in 0..layout.anchors {
        for c in 0..layout.copies_per_anchor {
            headers.push(format!("a{a}_c{c}"));
        }
    }
    for i in 0..layout.noise_columns {
        headers.push(format!("n{i}"));
    }
    headers.push(label_header.to_string());

    let mut out_rows = Vec::with_capacity(rows);
    let mut class_seen = vec![false; class_count];
    for r in 0..rows {
        // Cycle cells for the first pass so every class is present, then
        // sample anchor bits with their configured biases.
        let bits: Vec<u8> = if r < cell_map.len() {
            (0..layout.anchors)
                .map(|a| ((r >> (layout.anchors - 1 - a)) & 1) as u8)
                .collect()
        } else {
            layout
                .bit_probs
                .iter()
                .map(|&p| u8::from(rng.random::<f64>() < p))
                .collect()
        };
        let cell: usize = bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize);
        let mut class = cell_map[cell];
        if rng.random::<f64>() < layout.label_noise {
            class = rng.random_range(0..class_count);
        }
        class_seen[class] = true;

        let mut row = Vec::with_capacity(headers.len());
        row.push(rng.random_range(1..=18u32).to_string());
        for &b in &bits {
            for _ in 0..layout.copies_per_anchor {
                let flipped = if rng.random::<f64>() < layout.copy_flip_prob {
                    1 - b
                } else {
                    b
                };
                row.push(flipped.to_string());
            }
        }
        for _ in 0..layout.noise_columns {
            let v = u8::from(rng.random::<f64>() < layout.noise_one_prob);
            row.push(v.to_string());
        }
        row.push(format!("c{class}"));
        out_rows.push(row);
    }
    debug_assert!(class_seen.iter().all(|&s| s));

    SyntheticTable {
        headers,
        rows: out_rows,
    }
}
