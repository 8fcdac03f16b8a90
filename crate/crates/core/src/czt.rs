//! Bluestein chirp-z evaluation of `X_j = Σ_n a_n e^{i β j n}` for
//! `j = 0..out_len`, with arbitrary real `β`.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Chirp {
    in_len: usize,
    out_len: usize,
    fft_len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// `e^{iβn²/2}` for `n < max(in_len, out_len)`.
    chirp: Vec<Complex64>,
    /// FFT of the conjugate chirp laid out for circular convolution, pre-scaled by `1/fft_len`.
    filter: Vec<Complex64>,
}

impl Chirp {
    pub(crate) fn new(in_len: usize, out_len: usize, beta: f64) -> Self {
        let fft_len = (in_len + out_len - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);
        let chirp: Vec<Complex64> = (0..in_len.max(out_len))
            .map(|n| {
                let n = n as f64;
                Complex64::from_polar(1.0, 0.5 * beta * n * n)
            })
            .collect();
        let mut filter = vec![Complex64::new(0.0, 0.0); fft_len];
        for l in 0..out_len {
            filter[l] = chirp[l].conj();
        }
        for l in 1..in_len {
            filter[fft_len - l] = chirp[l].conj();
        }
        forward.process(&mut filter);
        let scale = 1.0 / fft_len as f64;
        filter.iter_mut().for_each(|v| *v *= scale);
        Self { in_len, out_len, fft_len, forward, inverse, chirp, filter }
    }

    pub(crate) fn scratch(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.fft_len]
    }

    /// Writes `X_j` into `out`; `buf` must come from [`Chirp::scratch`].
    pub(crate) fn eval(&self, input: &[Complex64], buf: &mut [Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(input.len(), self.in_len);
        debug_assert_eq!(out.len(), self.out_len);
        for (n, slot) in buf.iter_mut().enumerate() {
            *slot = if n < self.in_len { input[n] * self.chirp[n] } else { Complex64::new(0.0, 0.0) };
        }
        self.forward.process(buf);
        for (b, f) in buf.iter_mut().zip(&self.filter) {
            *b *= f;
        }
        self.inverse.process(buf);
        for (j, o) in out.iter_mut().enumerate() {
            *o = buf[j] * self.chirp[j];
        }
    }
}
