//! Dense tensors with a reverse-mode autodiff tape.
//!
//! A [`Tensor`] is a cheap-to-clone handle to an immutable value buffer plus
//! an optional gradient buffer. Operations live on [`Tape`]; running one
//! records a node so [`Tape::backward`] can replay the chain in reverse.
//! Everything is generic over [`Scalar`] — the training lane runs f32, all
//! gradient checks run f64.

mod tape;
pub(crate) mod kernels;
pub mod ops;
pub mod gradcheck;
pub mod checkpoint;

pub use tape::Tape;
pub(crate) use tape::TapeNode;

use std::cell::{Ref, RefCell};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::rc::Rc;

use crate::error::{Error, Result};

/// Floating-point element of a tensor.
pub trait Scalar:
    Copy
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + 'static
{
    const ZERO: Self;
    const ONE: Self;
    const NEG_INFINITY: Self;
    fn from_f64(v: f64) -> Self;
    fn from_usize(v: usize) -> Self;
    fn to_f64(self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sqrt(self) -> Self;
    fn abs(self) -> Self;
    fn maximum(self, other: Self) -> Self;
    fn is_finite(self) -> bool;
    fn is_nan(self) -> bool;
}

macro_rules! impl_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const ZERO: Self = 0.0;
            const ONE: Self = 1.0;
            const NEG_INFINITY: Self = <$t>::NEG_INFINITY;
            fn from_f64(v: f64) -> Self {
                v as $t
            }
            fn from_usize(v: usize) -> Self {
                v as $t
            }
            fn to_f64(self) -> f64 {
                self as f64
            }
            fn exp(self) -> Self {
                <$t>::exp(self)
            }
            fn ln(self) -> Self {
                <$t>::ln(self)
            }
            fn sqrt(self) -> Self {
                <$t>::sqrt(self)
            }
            fn abs(self) -> Self {
                <$t>::abs(self)
            }
            fn maximum(self, other: Self) -> Self {
                <$t>::max(self, other)
            }
            fn is_finite(self) -> bool {
                <$t>::is_finite(self)
            }
            fn is_nan(self) -> bool {
                <$t>::is_nan(self)
            }
        }
    };
}

impl_scalar!(f32);
impl_scalar!(f64);

struct Inner<T: Scalar> {
    shape: Vec<usize>,
    data: RefCell<Vec<T>>,
    grad: RefCell<Option<Vec<T>>>,
    requires_grad: bool,
    /// Leaves are user-created tensors; everything produced by a tape op is
    /// an intermediate whose gradient is reset at the start of backward().
    leaf: bool,
}

/// Dense n-dimensional array handle.
pub struct Tensor<T: Scalar> {
    inner: Rc<Inner<T>>,
}

impl<T: Scalar> Clone for Tensor<T> {
    fn clone(&self) -> Self {
        Tensor {
            inner: Rc::clone(&self.inner),
        }
    }
}

impl<T: Scalar> Tensor<T> {
    fn build(shape: Vec<usize>, data: Vec<T>, requires_grad: bool, leaf: bool) -> Result<Self> {
        let numel: usize = shape.iter().product();
        if numel != data.len() {
            return Err(Error::dimension(
                "tensor",
                format!("shape {:?} implies {} values, got {}", shape, numel, data.len()),
            ));
        }
        Ok(Tensor {
            inner: Rc::new(Inner {
                shape,
                data: RefCell::new(data),
                grad: RefCell::new(None),
                requires_grad,
                leaf,
            }),
        })
    }

    /// Constant leaf tensor (not tracked by backward).
    pub fn from_vec(shape: impl Into<Vec<usize>>, data: Vec<T>) -> Result<Self> {
        Self::build(shape.into(), data, false, true)
    }

    /// Trainable leaf tensor; backward() accumulates into its grad buffer.
    pub fn param(shape: impl Into<Vec<usize>>, data: Vec<T>) -> Result<Self> {
        Self::build(shape.into(), data, true, true)
    }

    pub fn zeros(shape: impl Into<Vec<usize>>) -> Self {
        let shape = shape.into();
        let numel = shape.iter().product();
        Self::build(shape, vec![T::ZERO; numel], false, true).expect("consistent by construction")
    }

    pub fn full(shape: impl Into<Vec<usize>>, value: T) -> Self {
        let shape = shape.into();
        let numel = shape.iter().product();
        Self::build(shape, vec![value; numel], false, true).expect("consistent by construction")
    }

    pub fn scalar(value: T) -> Self {
        Self::full(vec![1], value)
    }

    pub(crate) fn from_op(shape: Vec<usize>, data: Vec<T>, requires_grad: bool) -> Self {
        Self::build(shape, data, requires_grad, false).expect("op produced inconsistent shape")
    }

    pub fn shape(&self) -> &[usize] {
        &self.inner.shape
    }

    pub fn numel(&self) -> usize {
        self.inner.shape.iter().product()
    }

    pub fn requires_grad(&self) -> bool {
        self.inner.requires_grad
    }

    pub fn is_leaf(&self) -> bool {
        self.inner.leaf
    }

    /// Borrow the value buffer.
    pub fn data(&self) -> Ref<'_, Vec<T>> {
        self.inner.data.borrow()
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.inner.data.borrow().clone()
    }

    /// The single element of a scalar tensor.
    pub fn item(&self) -> Result<T> {
        if self.numel() != 1 {
            return Err(Error::Contract(format!(
                "item() requires a scalar tensor, shape is {:?}",
                self.shape()
            )));
        }
        Ok(self.inner.data.borrow()[0])
    }

    /// Replace the value buffer. Only sound between tapes (optimizer steps,
    /// finite-difference probes); never while a tape referencing this
    /// tensor is still alive.
    pub fn set_data(&self, data: Vec<T>) -> Result<()> {
        if data.len() != self.numel() {
            return Err(Error::dimension(
                "set_data",
                format!("expected {} values, got {}", self.numel(), data.len()),
            ));
        }
        *self.inner.data.borrow_mut() = data;
        Ok(())
    }

    /// Add `delta` to one coordinate in place (finite-difference probes).
    pub fn nudge(&self, index: usize, delta: T) {
        self.inner.data.borrow_mut()[index] += delta;
    }

    pub fn grad(&self) -> Option<Vec<T>> {
        self.inner.grad.borrow().clone()
    }

    /// Borrow the gradient slot without cloning (backward hot path).
    pub(crate) fn grad_ref(&self) -> Ref<'_, Option<Vec<T>>> {
        self.inner.grad.borrow()
    }

    pub fn zero_grad(&self) {
        *self.inner.grad.borrow_mut() = None;
    }

    pub(crate) fn accumulate_grad(&self, delta: &[T]) {
        debug_assert_eq!(delta.len(), self.numel());
        let mut slot = self.inner.grad.borrow_mut();
        match slot.as_mut() {
            Some(g) => {
                for (gi, &d) in g.iter_mut().zip(delta) {
                    *gi += d;
                }
            }
            None => *slot = Some(delta.to_vec()),
        }
    }

    /// Gradient buffer cloned, or zeros when backward never reached this
    /// tensor.
    pub fn grad_or_zeros(&self) -> Vec<T> {
        self.grad().unwrap_or_else(|| vec![T::ZERO; self.numel()])
    }

    /// Identity of the underlying buffer; two handles to one tensor compare
    /// equal.
    pub fn ptr_id(&self) -> usize {
        Rc::as_ptr(&self.inner) as usize
    }
}

impl<T: Scalar> fmt::Debug for Tensor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tensor")
            .field("shape", &self.inner.shape)
            .field("requires_grad", &self.inner.requires_grad)
            .finish()
    }
}

/// Row-major strides for a shape.
pub(crate) fn strides(shape: &[usize]) -> Vec<usize> {
    let mut s = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape[i + 1];
    }
    s
}

/// Output extent of a convolution/pooling axis.
pub fn conv_out_extent(input: usize, kernel: usize, stride: usize, padding: usize) -> Option<usize> {
    let padded = input + 2 * padding;
    if kernel == 0 || stride == 0 || kernel > padded {
        return None;
    }
    Some((padded - kernel) / stride + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_data_consistency_enforced() {
        assert!(Tensor::<f32>::from_vec(vec![2, 3], vec![0.0; 5]).is_err());
        assert!(Tensor::<f32>::from_vec(vec![2, 3], vec![0.0; 6]).is_ok());
    }

    #[test]
    fn grad_accumulates_additively() {
        let t = Tensor::<f64>::param(vec![2], vec![1.0, 2.0]).unwrap();
        t.accumulate_grad(&[1.0, 1.0]);
        t.accumulate_grad(&[0.5, 0.25]);
        assert_eq!(t.grad().unwrap(), vec![1.5, 1.25]);
        t.zero_grad();
        assert!(t.grad().is_none());
    }

    #[test]
    fn conv_arithmetic() {
        assert_eq!(conv_out_extent(64, 3, 2, 1), Some(32));
        assert_eq!(conv_out_extent(5, 3, 1, 0), Some(3));
        assert_eq!(conv_out_extent(2, 3, 1, 0), None);
    }
}
