//! The autodiff tape: an append-only record of executed primitives in
//! execution (hence topological) order.

use std::cell::RefCell;

use super::{Scalar, Tensor};
use crate::error::{Error, Result};

/// One recorded primitive. `backward` reads the output gradient and
/// accumulates into the inputs; `output` is exposed so the tape can reset
/// intermediate gradients before each backward pass.
pub(crate) trait TapeNode<T: Scalar> {
    fn backward(&self);
    fn output(&self) -> &Tensor<T>;
}

/// Ordered record of executed ops. One tape per forward pass; single
/// threaded by construction.
pub struct Tape<T: Scalar> {
    nodes: RefCell<Vec<Box<dyn TapeNode<T>>>>,
}

impl<T: Scalar> Default for Tape<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> Tape<T> {
    pub fn new() -> Self {
        Tape {
            nodes: RefCell::new(Vec::new()),
        }
    }

    pub(crate) fn record(&self, node: Box<dyn TapeNode<T>>) {
        self.nodes.borrow_mut().push(node);
    }

    pub fn len(&self) -> usize {
        self.nodes.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.borrow().is_empty()
    }

    /// Reverse-mode sweep from a scalar loss. Gradients of leaf tensors
    /// accumulate additively across repeated calls; intermediate gradients
    /// are transient per call.
    pub fn backward(&self, loss: &Tensor<T>) -> Result<()> {
        if loss.numel() != 1 {
            return Err(Error::Contract(format!(
                "backward requires a scalar loss, shape is {:?}",
                loss.shape()
            )));
        }
        let nodes = self.nodes.borrow();
        for node in nodes.iter() {
            let out = node.output();
            if !out.is_leaf() {
                out.zero_grad();
            }
        }
        loss.accumulate_grad(&[T::ONE]);
        for node in nodes.iter().rev() {
            node.backward();
        }
        Ok(())
    }
}
