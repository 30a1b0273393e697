//! Overlap tables between single-particle spatial modes.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::Error;
use crate::states::require_finite_complex;

/// Tolerance for Hermiticity, unit-diagonal, and positivity checks.
pub const GRAM_TOL: f64 = 1e-12;

/// Labeled table of pairwise overlaps between normalized spatial modes.
#[derive(Debug, Clone, PartialEq)]
pub struct GramSpec {
    labels: Vec<String>,
    entries: DMatrix<Complex64>,
}

impl GramSpec {
    /// Validates and wraps an overlap table; labels index its rows and columns.
    pub fn new<S: Into<String>>(labels: Vec<S>, entries: DMatrix<Complex64>) -> Result<Self, Error> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != entries.nrows() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), got: labels.len() });
        }
        validate_gram(&entries)?;
        Ok(GramSpec { labels, entries })
    }

    /// Number of modes in the table.
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Mode labels in row order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The validated overlap matrix.
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Overlap of modes `i` (bra) and `j` (ket).
    pub fn overlap(&self, i: usize, j: usize) -> Complex64 {
        self.entries[(i, j)]
    }

    /// Row index of a label.
    pub fn index_of(&self, label: &str) -> Result<usize, Error> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownModeLabel { label: label.to_string() })
    }

    /// Overlap looked up by bra and ket labels.
    pub fn overlap_by_label(&self, bra: &str, ket: &str) -> Result<Complex64, Error> {
        Ok(self.overlap(self.index_of(bra)?, self.index_of(ket)?))
    }
}

/// Checks Hermiticity, unit diagonal, and positive semidefiniteness of an overlap table.
///
/// Positivity is tested through leading principal minors, which must all be
/// at least `-GRAM_TOL`. Validation never mutates the input and is idempotent.
pub fn validate_gram(entries: &DMatrix<Complex64>) -> Result<(), Error> {
    let n = entries.nrows();
    if entries.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: entries.ncols() });
    }
    for i in 0..n {
        for j in 0..n {
            require_finite_complex(&format!("overlap ({i}, {j})"), entries[(i, j)])?;
        }
    }
    for i in 0..n {
        for j in i..n {
            let a = entries[(i, j)];
            let b = entries[(j, i)].conj();
            if (a - b).norm() > GRAM_TOL {
                return Err(Error::NonHermitian {
                    row: i,
                    col: j,
                    detail: format!("entry ({i}, {j}) = {a} vs conj of ({j}, {i}) = {b}"),
                });
            }
        }
    }
    for i in 0..n {
        let d = entries[(i, i)];
        if (d - Complex64::new(1.0, 0.0)).norm() > GRAM_TOL {
            return Err(Error::NonUnitDiagonal { index: i, value: d.re });
        }
    }
    for (k, minor) in leading_principal_minors(entries).iter().enumerate() {
        if *minor < -GRAM_TOL {
            return Err(Error::NotPositiveSemidefinite {
                detail: format!("leading principal minor of order {} is {minor}", k + 1),
            });
        }
    }
    Ok(())
}

/// Real parts of the determinants of the upper-left k-by-k blocks, k = 1..=n.
pub fn leading_principal_minors(entries: &DMatrix<Complex64>) -> Vec<f64> {
    let n = entries.nrows();
    (1..=n)
        .map(|k| entries.view((0, 0), (k, k)).clone_owned().determinant().re)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real_gram(rows: &[&[f64]]) -> DMatrix<Complex64> {
        let n = rows.len();
        DMatrix::from_fn(n, n, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    #[test]
    fn accepts_valid_two_mode_table() {
        let g = real_gram(&[&[1.0, 0.6], &[0.6, 1.0]]);
        assert!(validate_gram(&g).is_ok());
    }

    #[test]
    fn rejects_overlap_magnitude_above_one_as_not_psd() {
        let g = real_gram(&[&[1.0, 1.2], &[1.2, 1.0]]);
        assert!(matches!(validate_gram(&g), Err(Error::NotPositiveSemidefinite { .. })));
    }

    #[test]
    fn rejects_non_hermitian_table() {
        let mut g = real_gram(&[&[1.0, 0.5], &[0.5, 1.0]]);
        g[(0, 1)] = Complex64::new(0.5, 0.25);
        let err = validate_gram(&g).unwrap_err();
        match err {
            Error::NonHermitian { row, col, .. } => {
                assert_eq!((row, col), (0, 1));
            }
            other => panic!("expected NonHermitian, got {other:?}"),
        }
    }

    #[test]
    fn rejects_non_unit_diagonal() {
        let g = real_gram(&[&[1.0, 0.0], &[0.0, 0.9]]);
        assert!(matches!(
            validate_gram(&g),
            Err(Error::NonUnitDiagonal { index: 1, .. })
        ));
    }

    #[test]
    fn validation_is_idempotent() {
        let g = real_gram(&[&[1.0, 0.3], &[0.3, 1.0]]);
        let before = g.clone();
        validate_gram(&g).unwrap();
        validate_gram(&g).unwrap();
        assert_eq!(g, before);
    }

    #[test]
    fn four_mode_minors_match_hand_values() {
        let g = real_gram(&[
            &[1.0, 0.6, 0.6, 0.0],
            &[0.6, 1.0, 0.5, 0.0],
            &[0.6, 0.5, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        let minors = leading_principal_minors(&g);
        assert!((minors[0] - 1.0).abs() < 1e-12);
        assert!((minors[1] - 0.64).abs() < 1e-12);
        assert!((minors[2] - 0.39).abs() < 1e-12);
        assert!((minors[3] - 0.39).abs() < 1e-12);
        validate_gram(&g).unwrap();
    }

    #[test]
    fn label_lookup_round_trips() {
        let spec = GramSpec::new(
            vec!["a", "b"],
            real_gram(&[&[1.0, 0.25], &[0.25, 1.0]]),
        )
        .unwrap();
        assert_eq!(spec.overlap_by_label("a", "b").unwrap().re, 0.25);
        assert!(matches!(
            spec.overlap_by_label("a", "c"),
            Err(Error::UnknownModeLabel { .. })
        ));
    }

    proptest! {
        #[test]
        fn two_mode_validity_tracks_overlap_magnitude(re in -1.5f64..1.5, im in -1.5f64..1.5) {
            let r = Complex64::new(re, im);
            let g = DMatrix::from_row_slice(2, 2, &[
                Complex64::new(1.0, 0.0), r,
                r.conj(), Complex64::new(1.0, 0.0),
            ]);
            let ok = validate_gram(&g).is_ok();
            prop_assert_eq!(ok, r.norm_sqr() <= 1.0 + 2.0 * GRAM_TOL);
        }
    }
}
