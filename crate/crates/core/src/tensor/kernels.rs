//! Shared inner loops for the heavier primitives.
//!
//! Forward kernels for conv/linear/matmul keep the contraction index
//! ascending per output element so results are bit-identical to the naive
//! triple-loop definition at equal precision. Backward kernels are free to
//! use lane-split dot products; gradients are only held to a finite
//! difference tolerance.

use super::Scalar;

/// out[m,n] += a[m,k] * b[k,n], accumulation over k ascending for every
/// output element. The k-middle loop keeps inner access contiguous.
pub fn gemm_accum<T: Scalar>(out: &mut [T], a: &[T], b: &[T], m: usize, k: usize, n: usize) {
    debug_assert_eq!(a.len(), m * k);
    debug_assert_eq!(b.len(), k * n);
    debug_assert_eq!(out.len(), m * n);
    for i in 0..m {
        let a_row = &a[i * k..(i + 1) * k];
        let out_row = &mut out[i * n..(i + 1) * n];
        for (kk, &a_ik) in a_row.iter().enumerate() {
            let b_row = &b[kk * n..(kk + 1) * n];
            for (o, &bv) in out_row.iter_mut().zip(b_row) {
                *o += a_ik * bv;
            }
        }
    }
}

/// Dot product with eight independent accumulators. Reassociated, so only
/// for gradient paths.
pub fn fast_dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut lanes = [T::ZERO; 8];
    let chunks = a.len() / 8;
    for c in 0..chunks {
        let ai = &a[c * 8..c * 8 + 8];
        let bi = &b[c * 8..c * 8 + 8];
        for l in 0..8 {
            lanes[l] += ai[l] * bi[l];
        }
    }
    let mut acc = T::ZERO;
    for l in lanes {
        acc += l;
    }
    for i in chunks * 8..a.len() {
        acc += a[i] * b[i];
    }
    acc
}

/// out[m,n] += a[m,p] * b[n,p]ᵀ using lane-split dots (gradient path).
pub fn gemm_a_bt_accum<T: Scalar>(out: &mut [T], a: &[T], b: &[T], m: usize, p: usize, n: usize) {
    debug_assert_eq!(a.len(), m * p);
    debug_assert_eq!(b.len(), n * p);
    debug_assert_eq!(out.len(), m * n);
    for i in 0..m {
        let a_row = &a[i * p..(i + 1) * p];
        for j in 0..n {
            out[i * n + j] += fast_dot(a_row, &b[j * p..(j + 1) * p]);
        }
    }
}

/// Row-major transpose into a fresh buffer.
pub fn transpose<T: Scalar>(src: &[T], rows: usize, cols: usize) -> Vec<T> {
    debug_assert_eq!(src.len(), rows * cols);
    let mut out = vec![T::ZERO; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = src[r * cols + c];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_dot_matches_sequential() {
        let a: Vec<f64> = (0..37).map(|i| (i as f64) * 0.37 - 3.0).collect();
        let b: Vec<f64> = (0..37).map(|i| (i as f64) * -0.11 + 1.0).collect();
        let seq: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        assert!((fast_dot(&a, &b) - seq).abs() < 1e-12);
    }

    #[test]
    fn transpose_round_trip() {
        let src: Vec<f32> = (0..12).map(|i| i as f32).collect();
        let t = transpose(&src, 3, 4);
        assert_eq!(transpose(&t, 4, 3), src);
    }
}
