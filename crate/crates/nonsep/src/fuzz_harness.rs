//! Panic-free drivers shared by the fuzz targets and the corpus smoke test.

use crate::config::{parse_config, parse_overlap_list};
use crate::gram::GramSpec;
use crate::grid::Grid;
use crate::identical::{PHI, PHI_TILDE, PSI, PSI_TILDE};
use crate::oracle::embed_modes;

const GRID_STEP_CAP: usize = 10_000;

/// Feeds arbitrary bytes to the config parser.
pub fn fuzz_config_json(data: &[u8]) {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_config(text);
    }
}

/// Feeds arbitrary bytes to the grid parser and expands small accepted grids.
pub fn fuzz_grid_spec(data: &[u8]) {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(grid) = text.parse::<Grid>() {
            if grid.steps <= GRID_STEP_CAP {
                let values = grid.values();
                assert_eq!(values.len(), grid.steps);
            }
        }
    }
}

/// Feeds arbitrary bytes to the overlap-list parser.
pub fn fuzz_overlap_list(data: &[u8]) {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(values) = parse_overlap_list(text) {
            assert!(!values.is_empty());
        }
    }
}

/// Interprets bytes as a raw complex 4x4 table and runs validation plus embedding.
pub fn fuzz_gram_table(data: &[u8]) {
    const N: usize = 4;
    const NEED: usize = N * N * 2 * 8;
    if data.len() < NEED {
        return;
    }
    let mut reals = [0f64; N * N * 2];
    for (k, chunk) in data[..NEED].chunks_exact(8).enumerate() {
        let mut bytes = [0u8; 8];
        bytes.copy_from_slice(chunk);
        reals[k] = f64::from_le_bytes(bytes);
    }
    let entries = nalgebra::DMatrix::from_fn(N, N, |i, j| {
        let k = (i * N + j) * 2;
        num_complex::Complex64::new(reals[k], reals[k + 1])
    });
    if let Ok(spec) = GramSpec::new(vec![PHI, PSI_TILDE, PHI_TILDE, PSI], entries) {
        let _ = embed_modes(&spec);
    }
}
