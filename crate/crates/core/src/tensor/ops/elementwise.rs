//! Elementwise primitives: add, mul, scale, relu, sigmoid and the
//! channel-broadcast multiply used by gating layers.

use super::{same_shape, Scalar, Tensor};
use crate::error::{Error, Result};
use crate::tensor::{Tape, TapeNode};

impl<T: Scalar> Tape<T> {
    pub fn add(&self, a: &Tensor<T>, b: &Tensor<T>) -> Result<Tensor<T>> {
        same_shape("add", a, b)?;
        let data: Vec<T> = a.data().iter().zip(b.data().iter()).map(|(&x, &y)| x + y).collect();
        let rg = a.requires_grad() || b.requires_grad();
        let out = Tensor::from_op(a.shape().to_vec(), data, rg);
        if rg {
            self.record(Box::new(AddNode {
                a: a.clone(),
                b: b.clone(),
                out: out.clone(),
            }));
        }
        Ok(out)
    }

    pub fn mul(&self, a: &Tensor<T>, b: &Tensor<T>) -> Result<Tensor<T>> {
        same_shape("mul", a, b)?;
        let data: Vec<T> = a.data().iter().zip(b.data().iter()).map(|(&x, &y)| x * y).collect();
        let rg = a.requires_grad() || b.requires_grad();
        let out = Tensor::from_op(a.shape().to_vec(), data, rg);
        if rg {
            self.record(Box::new(MulNode {
                a: a.clone(),
                b: b.clone(),
                out: out.clone(),
            }));
        }
        Ok(out)
    }

    /// Multiply by a compile-time constant (not a tracked tensor).
    pub fn scale(&self, x: &Tensor<T>, factor: T) -> Tensor<T> {
        let data: Vec<T> = x.data().iter().map(|&v| v * factor).collect();
        let rg = x.requires_grad();
        let out = Tensor::from_op(x.shape().to_vec(), data, rg);
        if rg {
            self.record(Box::new(ScaleNode {
                x: x.clone(),
                out: out.clone(),
                factor,
            }));
        }
        out
    }

    pub fn relu(&self, x: &Tensor<T>) -> Tensor<T> {
        let data: Vec<T> = x.data().iter().map(|&v| v.maximum(T::ZERO)).collect();
        let rg = x.requires_grad();
        let out = Tensor::from_op(x.shape().to_vec(), data, rg);
        if rg {
            self.record(Box::new(ReluNode {
                x: x.clone(),
                out: out.clone(),
            }));
        }
        out
    }

    pub fn sigmoid(&self, x: &Tensor<T>) -> Tensor<T> {
        let data: Vec<T> = x
            .data()
            .iter()
            .map(|&v| T::ONE / (T::ONE + (-v).exp()))
            .collect();
        let rg = x.requires_grad();
        let out = Tensor::from_op(x.shape().to_vec(), data, rg);
        if rg {
            self.record(Box::new(SigmoidNode {
                x: x.clone(),
                out: out.clone(),
            }));
        }
        out
    }

    /// x[N,C,H,W] * gate[N,1,H,W], gate broadcast over channels.
    pub fn channel_broadcast_mul(&self, x: &Tensor<T>, gate: &Tensor<T>) -> Result<Tensor<T>> {
        let xs = x.shape();
        let gs = gate.shape();
        if xs.len() != 4 || gs.len() != 4 || gs[1] != 1 || gs[0] != xs[0] || gs[2] != xs[2] || gs[3] != xs[3] {
            return Err(Error::dimension(
                "channel_broadcast_mul",
                format!("input {:?} with gate {:?}", xs, gs),
            ));
        }
        let (n, c, h, w) = (xs[0], xs[1], xs[2], xs[3]);
        let plane = h * w;
        let xd = x.data();
        let gd = gate.data();
        let mut data = vec![T::ZERO; x.numel()];
        for ni in 0..n {
            let g_plane = &gd[ni * plane..(ni + 1) * plane];
            for ci in 0..c {
                let base = (ni * c + ci) * plane;
                for p in 0..plane {
                    data[base + p] = xd[base + p] * g_plane[p];
                }
            }
        }
        drop(xd);
        drop(gd);
        let rg = x.requires_grad() || gate.requires_grad();
        let out = Tensor::from_op(xs.to_vec(), data, rg);
        if rg {
            self.record(Box::new(ChannelBroadcastMulNode {
                x: x.clone(),
                gate: gate.clone(),
                out: out.clone(),
            }));
        }
        Ok(out)
    }
}

struct AddNode<T: Scalar> {
    a: Tensor<T>,
    b: Tensor<T>,
    out: Tensor<T>,
}

impl<T: Scalar> TapeNode<T> for AddNode<T> {
    fn backward(&self) {
        let slot = self.out.grad_ref();
        let Some(dy) = slot.as_ref() else { return };
        if self.a.requires_grad() {
            self.a.accumulate_grad(dy);
        }
        if self.b.requires_grad() {
            self.b.accumulate_grad(dy);
        }
    }
    fn output(&self) -> &Tensor<T> {
        &self.out
    }
}

struct MulNode<T: Scalar> {
    a: Tensor<T>,
    b: Tensor<T>,
    out: Tensor<T>,
}

impl<T: Scalar> TapeNode<T> for MulNode<T> {
    fn backward(&self) {
        let slot = self.out.grad_ref();
        let Some(dy) = slot.as_ref() else { return };
        if self.a.requires_grad() {
            let bd = self.b.data();
            let da: Vec<T> = dy.iter().zip(bd.iter()).map(|(&g, &v)| g * v).collect();
            drop(bd);
            self.a.accumulate_grad(&da);
        }
        if self.b.requires_grad() {
            let ad = self.a.data();
            let db: Vec<T> = dy.iter().zip(ad.iter()).map(|(&g, &v)| g * v).collect();
            drop(ad);
            self.b.accumulate_grad(&db);
        }
    }
    fn output(&self) -> &Tensor<T> {
        &self.out
    }
}

struct ScaleNode<T: Scalar> {
    x: Tensor<T>,
    out: Tensor<T>,
    factor: T,
}

impl<T: Scalar> TapeNode<T> for ScaleNode<T> {
    fn backward(&self) {
        let slot = self.out.grad_ref();
        let Some(dy) = slot.as_ref() else { return };
        let dx: Vec<T> = dy.iter().map(|&g| g * self.factor).collect();
        self.x.accumulate_grad(&dx);
    }
    fn output(&self) -> &Tensor<T> {
        &self.out
    }
}

struct ReluNode<T: Scalar> {
    x: Tensor<T>,
    out: Tensor<T>,
}

impl<T: Scalar> TapeNode<T> for ReluNode<T> {
    fn backward(&self) {
        let slot = self.out.grad_ref();
        let Some(dy) = slot.as_ref() else { return };
        let xd = self.x.data();
        let dx: Vec<T> = dy
            .iter()
            .zip(xd.iter())
            .map(|(&g, &v)| if v > T::ZERO { g } else { T::ZERO })
            .collect();
        drop(xd);
        self.x.accumulate_grad(&dx);
    }
    fn output(&self) -> &Tensor<T> {
        &self.out
    }
}

struct SigmoidNode<T: Scalar> {
    x: Tensor<T>,
    out: Tensor<T>,
}

impl<T: Scalar> TapeNode<T> for SigmoidNode<T> {
    fn backward(&self) {
        let slot = self.out.grad_ref();
        let Some(dy) = slot.as_ref() else { return };
        let yd = self.out.data();
        let dx: Vec<T> = dy
            .iter()
            .zip(yd.iter())
            .map(|(&g, &y)| g * y * (T::ONE - y))
            .collect();
        drop(yd);
        self.x.accumulate_grad(&dx);
    }
    fn output(&self) -> &Tensor<T> {
        &self.out
    }
}

struct ChannelBroadcastMulNode<T: Scalar> {
    x: Tensor<T>,
    gate: Tensor<T>,
    out: Tensor<T>,
}

impl<T: Scalar> TapeNode<T> for ChannelBroadcastMulNode<T> {
    fn backward(&self) {
        let slot = self.out.grad_ref();
        let Some(dy) = slot.as_ref() else { return };
        let shape = self.x.shape();
        let (n, c, h, w) = (shape[0], shape[1], shape[2], shape[3]);
        let plane = h * w;
        if self.x.requires_grad() {
            let gd = self.gate.data();
            let mut dx = vec![T::ZERO; self.x.numel()];
            for ni in 0..n {
                let g_plane = &gd[ni * plane..(ni + 1) * plane];
                for ci in 0..c {
                    let base = (ni * c + ci) * plane;
                    for p in 0..plane {
                        dx[base + p] = dy[base + p] * g_plane[p];
                    }
                }
            }
            drop(gd);
            self.x.accumulate_grad(&dx);
        }
        if self.gate.requires_grad() {
            let xd = self.x.data();
            let mut dg = vec![T::ZERO; self.gate.numel()];
            for ni in 0..n {
                let dg_plane = &mut dg[ni * plane..(ni + 1) * plane];
                for ci in 0..c {
                    let base = (ni * c + ci) * plane;
                    for p in 0..plane {
                        dg_plane[p] += dy[base + p] * xd[base + p];
                    }
                }
            }
            drop(xd);
            self.gate.accumulate_grad(&dg);
        }
    }
    fn output(&self) -> &Tensor<T> {
        &self.out
    }
}
