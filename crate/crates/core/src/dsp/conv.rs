use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Outputs up to this length are convolved with one transform; longer
/// ones go through overlap-add.
const SINGLE_SHOT_MAX: usize = 1 << 16;
const MIN_BLOCK_FFT: usize = 1 << 13;

/// Full linear convolution of `signal` with `kernel`, `N + L - 1` samples.
///
/// Returns an empty vector when either input is empty.
pub fn fft_convolve(signal: &[f64], kernel: &[f64]) -> Vec<f64> {
    if signal.is_empty() || kernel.is_empty() {
        return Vec::new();
    }
    let out_len = signal.len() + kernel.len() - 1;
    if out_len <= SINGLE_SHOT_MAX {
        let fft_len = out_len.next_power_of_two();
        let mut out = OverlapAdd::new(kernel, fft_len).block(signal);
        out.truncate(out_len);
        return out;
    }

    let fft_len = (2 * kernel.len()).next_power_of_two().max(MIN_BLOCK_FFT);
    let block_len = fft_len - kernel.len() + 1;
    let mut engine = OverlapAdd::new(kernel, fft_len);
    let mut out = vec![0.0; out_len];
    for (b, chunk) in signal.chunks(block_len).enumerate() {
        let start = b * block_len;
        let piece = engine.block(chunk);
        let end = (start + piece.len()).min(out_len);
        for (o, p) in out[start..end].iter_mut().zip(&piece) {
            *o += p;
        }
    }
    out
}

struct OverlapAdd {
    fft_len: usize,
    kernel_spectrum: Vec<Complex<f64>>,
    forward: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inverse: std::sync::Arc<dyn rustfft::Fft<f64>>,
    buf: Vec<Complex<f64>>,
}

impl OverlapAdd {
    fn new(kernel: &[f64], fft_len: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(fft_len);
        let inverse = planner.plan_fft_inverse(fft_len);
        let mut kernel_spectrum = to_complex(kernel, fft_len);
        forward.process(&mut kernel_spectrum);
        Self {
            fft_len,
            kernel_spectrum,
            forward,
            inverse,
            buf: Vec::with_capacity(fft_len),
        }
    }

    /// Convolves one block; the result has `fft_len` samples.
    fn block(&mut self, chunk: &[f64]) -> Vec<f64> {
        self.buf.clear();
        self.buf.extend(chunk.iter().map(|&x| Complex::new(x, 0.0)));
        self.buf.resize(self.fft_len, Complex::new(0.0, 0.0));
        self.forward.process(&mut self.buf);
        for (x, k) in self.buf.iter_mut().zip(&self.kernel_spectrum) {
            *x *= k;
        }
        self.inverse.process(&mut self.buf);
        let scale = 1.0 / self.fft_len as f64;
        self.buf.iter().map(|c| c.re * scale).collect()
    }
}

fn to_complex(x: &[f64], len: usize) -> Vec<Complex<f64>> {
    let mut v: Vec<Complex<f64>> = x.iter().map(|&r| Complex::new(r, 0.0)).collect();
    v.resize(len, Complex::new(0.0, 0.0));
    v
}
