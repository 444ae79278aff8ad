//! Reductions and softmax. Reduction sums run row-major sequential so a
//! naive re-computation at equal precision reproduces them exactly.

use super::{Scalar, Tensor};
use crate::error::{Error, Result};
use crate::tensor::{Tape, TapeNode};

impl<T: Scalar> Tape<T> {
    /// Sum of all elements, as a [1]-shaped tensor.
    pub fn sum(&self, x: &Tensor<T>) -> Tensor<T> {
        let mut acc = T::ZERO;
        for &v in x.data().iter() {
            acc += v;
        }
        let rg = x.requires_grad();
        let out = Tensor::from_op(vec![1], vec![acc], rg);
        if rg {
            self.record(Box::new(SumNode {
                x: x.clone(),
                out: out.clone(),
                scale: T::ONE,
            }));
        }
        out
    }

    /// Mean of all elements, as a [1]-shaped tensor.
    pub fn mean(&self, x: &Tensor<T>) -> Result<Tensor<T>> {
        let n = x.numel();
        if n == 0 {
            return Err(Error::Contract("mean of an empty tensor".into()));
        }
        let mut acc = T::ZERO;
        for &v in x.data().iter() {
            acc += v;
        }
        let inv = T::ONE / T::from_usize(n);
        let rg = x.requires_grad();
        let out = Tensor::from_op(vec![1], vec![acc * inv], rg);
        if rg {
            self.record(Box::new(SumNode {
                x: x.clone(),
                out: out.clone(),
                scale: inv,
            }));
        }
        Ok(out)
    }

    /// Softmax over the last axis.
    pub fn softmax(&self, x: &Tensor<T>) -> Result<Tensor<T>> {
        let shape = x.shape();
        let last = *shape.last().ok_or_else(|| {
            Error::dimension("softmax", "rank-0 tensor has no softmax axis".to_string())
        })?;
        if last == 0 {
            return Err(Error::dimension("softmax", "empty softmax axis".to_string()));
        }
        let rows = x.numel() / last;
        let xd = x.data();
        let mut data = vec![T::ZERO; x.numel()];
        for r in 0..rows {
            let row = &xd[r * last..(r + 1) * last];
            let mut mx = T::NEG_INFINITY;
            for &v in row {
                mx = mx.maximum(v);
            }
            let mut denom = T::ZERO;
            for (i, &v) in row.iter().enumerate() {
                let e = (v - mx).exp();
                data[r * last + i] = e;
                denom += e;
            }
            for v in &mut data[r * last..(r + 1) * last] {
                *v = *v / denom;
            }
        }
        drop(xd);
        let rg = x.requires_grad();
        let out = Tensor::from_op(shape.to_vec(), data, rg);
        if rg {
            self.record(Box::new(SoftmaxNode {
                x: x.clone(),
                out: out.clone(),
                last,
            }));
        }
        Ok(out)
    }
}

struct SumNode<T: Scalar> {
    x: Tensor<T>,
    out: Tensor<T>,
    scale: T,
}

impl<T: Scalar> TapeNode<T> for SumNode<T> {
    fn backward(&self) {
        let slot = self.out.grad_ref();
        let Some(dy) = slot.as_ref() else { return };
        let g = dy[0] * self.scale;
        let dx = vec![g; self.x.numel()];
        self.x.accumulate_grad(&dx);
    }
    fn output(&self) -> &Tensor<T> {
        &self.out
    }
}

struct SoftmaxNode<T: Scalar> {
    x: Tensor<T>,
    out: Tensor<T>,
    last: usize,
}

impl<T: Scalar> TapeNode<T> for SoftmaxNode<T> {
    fn backward(&self) {
        let slot = self.out.grad_ref();
        let Some(dy) = slot.as_ref() else { return };
        let yd = self.out.data();
        let rows = self.x.numel() / self.last;
        let mut dx = vec![T::ZERO; self.x.numel()];
        for r in 0..rows {
            let span = r * self.last..(r + 1) * self.last;
            let y = &yd[span.clone()];
            let g = &dy[span.clone()];
            let mut dot = T::ZERO;
            for i in 0..self.last {
                dot += y[i] * g[i];
            }
            for (i, d) in dx[span].iter_mut().enumerate() {
                *d = y[i] * (g[i] - dot);
            }
        }
        drop(yd);
        self.x.accumulate_grad(&dx);
    }
    fn output(&self) -> &Tensor<T> {
        &self.out
    }
}
