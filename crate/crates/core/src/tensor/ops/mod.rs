//! Primitive tensor operations. Each op validates shapes, computes the
//! forward value, and (when any input is tracked) records a tape node
//! carrying everything its backward rule needs.

mod conv;
mod dense;
mod dropout;
mod elementwise;
mod norm;
mod reduce;
mod shape_ops;

pub use norm::{BnMode, RunningStats};

use super::{Scalar, Tensor};
use crate::error::{Error, Result};

fn same_shape<T: Scalar>(op: &'static str, a: &Tensor<T>, b: &Tensor<T>) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::dimension(
            op,
            format!("shapes {:?} and {:?} differ", a.shape(), b.shape()),
        ));
    }
    Ok(())
}

fn expect_rank<T: Scalar>(op: &'static str, t: &Tensor<T>, rank: usize) -> Result<()> {
    if t.shape().len() != rank {
        return Err(Error::dimension(
            op,
            format!("expected rank {}, got shape {:?}", rank, t.shape()),
        ));
    }
    Ok(())
}
