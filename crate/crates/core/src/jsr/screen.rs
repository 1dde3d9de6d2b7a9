//! Double-precision screening used to pick which products get evaluated
//! at full precision.

use nalgebra::DMatrix;

use crate::linalg::Matrix;
use crate::precision::BigReal;

pub(crate) type Fm = DMatrix<f64>;

pub(crate) fn to_f64(m: &Matrix<BigReal>) -> Fm {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j).to_f64())
}

pub(crate) fn is_zero(m: &Fm) -> bool {
    m.iter().all(|&x| x == 0.0)
}

pub(crate) fn op_norm(m: &Fm) -> f64 {
    if is_zero(m) {
        return 0.0;
    }
    m.clone().singular_values().max()
}

pub(crate) fn spectral_radius(m: &Fm) -> f64 {
    if is_zero(m) {
        return 0.0;
    }
    m.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// True when `w` is strictly smaller than each of its proper rotations.
pub(crate) fn is_lyndon(w: &[u32]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        let rot = w[r..].iter().chain(&w[..r]);
        w.iter().cmp(rot) == std::cmp::Ordering::Less
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_words() {
        assert!(is_lyndon(&[0]));
        assert!(is_lyndon(&[0, 1]));
        assert!(!is_lyndon(&[1, 0]));
        assert!(!is_lyndon(&[0, 1, 0, 1]));
        assert!(is_lyndon(&[0, 0, 1]));
        // Necklace counts for binary words: 2, 1, 2, 3, 6.
        for (k, want) in [(1, 2), (2, 1), (3, 2), (4, 3), (5, 6)] {
            let c = (0..1u32 << k)
                .filter(|bits| is_lyndon(&(0..k).map(|i| (bits >> (k - 1 - i)) & 1).collect::<Vec<_>>()))
                .count();
            assert_eq!(c, want, "k={k}");
        }
    }

    #[test]
    fn screening_norms() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]);
        assert!((op_norm(&a) - 1.618033988749895).abs() < 1e-12);
        assert!((spectral_radius(&a) - 1.0).abs() < 1e-7);
        let r = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((spectral_radius(&r) - 1.0).abs() < 1e-12);
    }
}
