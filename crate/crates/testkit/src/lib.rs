//! Naive reference implementations used as independent oracles by the test
//! suites. Everything here is written as plainly as possible — explicit
//! loops, no shared code with the production crates — so that agreement
//! between the two paths is meaningful evidence.

/// Minimal float abstraction so oracles can run at the same precision as the
/// code under test (f32 for the training lane, f64 for gradient checks).
pub trait Real:
    Copy
    + PartialOrd
    + std::fmt::Debug
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    const ZERO: Self;
    const ONE: Self;
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
    fn exp(self) -> Self;
    fn maximum(self, other: Self) -> Self;
}

impl Real for f32 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn from_f64(v: f64) -> Self {
        v as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
    fn exp(self) -> Self {
        f32::exp(self)
    }
    fn maximum(self, other: Self) -> Self {
        f32::max(self, other)
    }
}

impl Real for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn maximum(self, other: Self) -> Self {
        f64::max(self, other)
    }
}

/// Sliding-window convolution by explicit loops. Accumulates over
/// (channel, kernel row, kernel col) in that order, skips out-of-image
/// taps, and adds the bias after the accumulation.
#[allow(clippy::too_many_arguments)]
pub fn naive_conv2d<T: Real>(
    input: &[T],
    n: usize,
    c: usize,
    h: usize,
    w: usize,
    weight: &[T],
    k_out: usize,
    kh: usize,
    kw: usize,
    bias: Option<&[T]>,
    stride: usize,
    padding: usize,
) -> (Vec<T>, usize, usize) {
    let oh = (h + 2 * padding - kh) / stride + 1;
    let ow = (w + 2 * padding - kw) / stride + 1;
    let mut out = vec![T::ZERO; n * k_out * oh * ow];
    for ni in 0..n {
        for ko in 0..k_out {
            for oy in 0..oh {
                for ox in 0..ow {
                    let mut acc = T::ZERO;
                    for ci in 0..c {
                        for ky in 0..kh {
                            for kx in 0..kw {
                                let iy = (oy * stride + ky) as isize - padding as isize;
                                let ix = (ox * stride + kx) as isize - padding as isize;
                                if iy < 0 || ix < 0 || iy >= h as isize || ix >= w as isize {
                                    continue;
                                }
                                let iv = input
                                    [((ni * c + ci) * h + iy as usize) * w + ix as usize];
                                let wv = weight[((ko * c + ci) * kh + ky) * kw + kx];
                                acc = acc + iv * wv;
                            }
                        }
                    }
                    if let Some(b) = bias {
                        acc = acc + b[ko];
                    }
                    out[((ni * k_out + ko) * oh + oy) * ow + ox] = acc;
                }
            }
        }
    }
    (out, oh, ow)
}

/// Triple-loop matrix product, contraction index innermost and ascending.
pub fn naive_matmul<T: Real>(a: &[T], b: &[T], m: usize, k: usize, n: usize) -> Vec<T> {
    let mut out = vec![T::ZERO; m * n];
    for i in 0..m {
        for j in 0..n {
            let mut acc = T::ZERO;
            for kk in 0..k {
                acc = acc + a[i * k + kk] * b[kk * n + j];
            }
            out[i * n + j] = acc;
        }
    }
    out
}

/// Fully connected layer y = x·Wᵀ + b by explicit loops, weight layout
/// [out, in], bias added after the accumulation.
pub fn naive_linear<T: Real>(
    x: &[T],
    n: usize,
    in_dim: usize,
    weight: &[T],
    out_dim: usize,
    bias: &[T],
) -> Vec<T> {
    let mut out = vec![T::ZERO; n * out_dim];
    for ni in 0..n {
        for o in 0..out_dim {
            let mut acc = T::ZERO;
            for i in 0..in_dim {
                acc = acc + x[ni * in_dim + i] * weight[o * in_dim + i];
            }
            out[ni * out_dim + o] = acc + bias[o];
        }
    }
    out
}

/// Multi-head attention over *all* position pairs, relative offsets indexed
/// into row/col embedding tables of spatial extent `k`. Only valid when
/// every offset |u-i|, |v-j| fits inside the tables, i.e. k >= 2*max(h,w)-1.
/// The per-head query is split in half: first half dots the row embedding,
/// second half the column embedding.
#[allow(clippy::too_many_arguments)]
pub fn global_attention_reference<T: Real>(
    f: &[T],
    n: usize,
    c_in: usize,
    h: usize,
    w: usize,
    wq: &[T],
    wk: &[T],
    wv: &[T],
    c_out: usize,
    e_row: &[T],
    e_col: &[T],
    k: usize,
    heads: usize,
) -> Vec<T> {
    assert!(k >= 2 * h.max(w) - 1, "window must cover every offset");
    let d = c_out / heads;
    let half = d / 2;
    let r = k / 2;
    let project = |weight: &[T]| -> Vec<T> {
        // [n, c_out, h, w] from 1x1 projection of f
        let mut out = vec![T::ZERO; n * c_out * h * w];
        for ni in 0..n {
            for co in 0..c_out {
                for y in 0..h {
                    for x in 0..w {
                        let mut acc = T::ZERO;
                        for ci in 0..c_in {
                            acc = acc
                                + weight[co * c_in + ci]
                                    * f[((ni * c_in + ci) * h + y) * w + x];
                        }
                        out[((ni * c_out + co) * h + y) * w + x] = acc;
                    }
                }
            }
        }
        out
    };
    let q = project(wq);
    let key = project(wk);
    let val = project(wv);
    let at = |buf: &[T], ni: usize, ch: usize, y: usize, x: usize| {
        buf[((ni * c_out + ch) * h + y) * w + x]
    };

    let mut out = vec![T::ZERO; n * c_out * h * w];
    for ni in 0..n {
        for m in 0..heads {
            for i in 0..h {
                for j in 0..w {
                    // logits over every (u, v) in the image
                    let mut logits = Vec::with_capacity(h * w);
                    for u in 0..h {
                        for v in 0..w {
                            let mut dot = T::ZERO;
                            for dch in 0..d {
                                dot = dot
                                    + at(&q, ni, m * d + dch, i, j)
                                        * at(&key, ni, m * d + dch, u, v);
                            }
                            let row_idx = (u as isize - i as isize + r as isize) as usize;
                            let col_idx = (v as isize - j as isize + r as isize) as usize;
                            let mut pos = T::ZERO;
                            for e in 0..half {
                                pos = pos
                                    + at(&q, ni, m * d + e, i, j) * e_row[row_idx * half + e];
                            }
                            for e in 0..half {
                                pos = pos
                                    + at(&q, ni, m * d + half + e, i, j)
                                        * e_col[col_idx * half + e];
                            }
                            logits.push(dot + pos);
                        }
                    }
                    let mut mx = logits[0];
                    for &l in &logits[1..] {
                        mx = mx.maximum(l);
                    }
                    let mut denom = T::ZERO;
                    let weights: Vec<T> = logits
                        .iter()
                        .map(|&l| {
                            let e = (l - mx).exp();
                            denom = denom + e;
                            e
                        })
                        .collect();
                    for dch in 0..d {
                        let mut acc = T::ZERO;
                        for u in 0..h {
                            for v in 0..w {
                                acc = acc
                                    + weights[u * w + v] / denom
                                        * at(&val, ni, m * d + dch, u, v);
                            }
                        }
                        out[((ni * c_out + m * d + dch) * h + i) * w + j] = acc;
                    }
                }
            }
        }
    }
    out
}

/// Direct per-site evaluation of the additive attention gate:
/// h = psi'·sigmoid(W_rgb'·F_rgb + W_evt'·F_evt) + b, alpha = sigmoid(h),
/// out = F_evt * alpha broadcast over channels.
#[allow(clippy::too_many_arguments)]
pub fn additive_attention_reference<T: Real>(
    f_rgb: &[T],
    f_evt: &[T],
    n: usize,
    c: usize,
    h: usize,
    w: usize,
    w_rgb: &[T],
    w_evt: &[T],
    c_mid: usize,
    psi: &[T],
    b_psi: T,
) -> Vec<T> {
    let sigmoid = |v: T| T::ONE / (T::ONE + (-v).exp());
    let mut out = vec![T::ZERO; n * c * h * w];
    for ni in 0..n {
        for y in 0..h {
            for x in 0..w {
                let mut gate = T::ZERO;
                for m in 0..c_mid {
                    let mut s = T::ZERO;
                    for ci in 0..c {
                        let site = ((ni * c + ci) * h + y) * w + x;
                        s = s + w_rgb[m * c + ci] * f_rgb[site];
                        s = s + w_evt[m * c + ci] * f_evt[site];
                    }
                    gate = gate + psi[m] * sigmoid(s);
                }
                let alpha = sigmoid(gate + b_psi);
                for ci in 0..c {
                    let site = ((ni * c + ci) * h + y) * w + x;
                    out[site] = f_evt[site] * alpha;
                }
            }
        }
    }
    out
}

/// Events produced by one pixel's brightness trace. The reference level
/// starts at the first sample; each later sample emits
/// floor(|log L - ref| / eta + 1e-9) events with interpolated timestamps
/// and advances the reference by that many threshold steps.
pub fn pixel_event_reference(samples: &[(u64, f64)], eta: f64) -> Vec<(u64, i8)> {
    assert!(eta > 0.0);
    let mut out = Vec::new();
    if samples.is_empty() {
        return out;
    }
    let mut reference = samples[0].1.ln();
    let mut prev_t = samples[0].0;
    let mut prev_l = reference;
    for &(t, brightness) in &samples[1..] {
        let l = brightness.ln();
        let delta = l - reference;
        let count = (delta.abs() / eta + 1e-9).floor() as u64;
        let sign = if delta >= 0.0 { 1.0 } else { -1.0 };
        for i in 1..=count {
            let level = reference + sign * eta * i as f64;
            let alpha = if l == prev_l {
                1.0
            } else {
                (level - prev_l) / (l - prev_l)
            };
            let ts = prev_t + ((t - prev_t) as f64 * alpha).round() as u64;
            out.push((ts, if sign > 0.0 { 1 } else { -1 }));
        }
        reference += sign * eta * count as f64;
        prev_t = t;
        prev_l = l;
    }
    out
}

/// Per-pixel polarity histograms over consecutive full groups of
/// `events_per_frame` events; the trailing partial group is dropped.
/// Events are (t, x, y, polarity). Returns (positive, negative) count
/// images per frame, row-major.
pub fn histogram_render_reference(
    events: &[(u64, u16, u16, i8)],
    width: usize,
    height: usize,
    events_per_frame: usize,
) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut frames = Vec::new();
    let full = events.len() / events_per_frame;
    for f in 0..full {
        let mut pos = vec![0u32; width * height];
        let mut neg = vec![0u32; width * height];
        for &(_, x, y, p) in &events[f * events_per_frame..(f + 1) * events_per_frame] {
            let idx = y as usize * width + x as usize;
            if p > 0 {
                pos[idx] += 1;
            } else {
                neg[idx] += 1;
            }
        }
        frames.push((pos, neg));
    }
    frames
}

/// For each base timestamp, the index of the other-sequence entry with the
/// smallest absolute time difference, scanning everything; ties keep the
/// earlier timestamp.
pub fn exhaustive_nearest(base: &[u64], other: &[u64]) -> Vec<usize> {
    base.iter()
        .map(|&tb| {
            let mut best = 0usize;
            let mut best_d = u64::MAX;
            for (idx, &to) in other.iter().enumerate() {
                let d = to.abs_diff(tb);
                if d < best_d {
                    best_d = d;
                    best = idx;
                }
            }
            best
        })
        .collect()
}

/// Plain per-coordinate AdamW: decoupled decay and the bias-corrected
/// moment update, both computed from the pre-step parameter value.
pub struct ScalarAdamW {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    pub weight_decay: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    t: i32,
}

impl ScalarAdamW {
    pub fn new(dim: usize, lr: f64, beta1: f64, beta2: f64, eps: f64, weight_decay: f64) -> Self {
        Self {
            lr,
            beta1,
            beta2,
            eps,
            weight_decay,
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            t: 0,
        }
    }

    pub fn step(&mut self, w: &mut [f64], g: &[f64]) {
        self.t += 1;
        let bc1 = 1.0 - self.beta1.powi(self.t);
        let bc2 = 1.0 - self.beta2.powi(self.t);
        for i in 0..w.len() {
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g[i];
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g[i] * g[i];
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            w[i] = w[i] - self.lr * self.weight_decay * w[i]
                - self.lr * m_hat / (v_hat.sqrt() + self.eps);
        }
    }
}

/// Closed-form Huber value for a single residual.
pub fn huber_scalar(x: f64, delta: f64) -> f64 {
    if x.abs() <= delta {
        0.5 * x * x
    } else {
        delta * (x.abs() - 0.5 * delta)
    }
}
