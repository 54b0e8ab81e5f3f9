use num_complex::Complex64;
use rustfft::FftPlanner;

/// Evaluates `S_m = sum_k x_k exp(-j (w0 + m dw)(t0 + k dt))` for
/// `m = 0..m_out` by Bluestein's chirp factorization, so the output
/// frequencies need not be tied to the FFT bin spacing `2 pi / (n dt)`.
pub fn chirp_z(x: &[Complex64], t0: f64, dt: f64, w0: f64, dw: f64, m_out: usize) -> Vec<Complex64> {
    let n = x.len();
    if n == 0 || m_out == 0 {
        return vec![Complex64::new(0.0, 0.0); m_out];
    }
    let theta = dw * dt;
    let half = 0.5 * theta;
    let len = (n + m_out - 1).next_power_of_two();

    let mut a = vec![Complex64::new(0.0, 0.0); len];
    for (k, (ak, &xk)) in a.iter_mut().zip(x).enumerate() {
        let kf = k as f64;
        *ak = xk * Complex64::from_polar(1.0, -(w0 * dt * kf) - half * kf * kf);
    }

    // Chirp b_l = exp(+j theta l^2 / 2) for l in -(n-1)..m_out, stored
    // circularly.
    let mut b = vec![Complex64::new(0.0, 0.0); len];
    for l in 0..m_out.max(n) {
        let lf = l as f64;
        let v = Complex64::from_polar(1.0, half * lf * lf);
        if l < m_out {
            b[l] = v;
        }
        if l > 0 && l < n {
            b[len - l] = v;
        }
    }

    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(len);
    let inv = planner.plan_fft_inverse(len);
    fwd.process(&mut a);
    fwd.process(&mut b);
    for (ai, bi) in a.iter_mut().zip(&b) {
        *ai *= bi;
    }
    inv.process(&mut a);

    let scale = 1.0 / len as f64;
    (0..m_out)
        .map(|m| {
            let mf = m as f64;
            let wm = w0 + mf * dw;
            a[m] * scale * Complex64::from_polar(1.0, -wm * t0 - half * mf * mf)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(x: &[Complex64], t0: f64, dt: f64, w0: f64, dw: f64, m_out: usize) -> Vec<Complex64> {
        (0..m_out)
            .map(|m| {
                let w = w0 + m as f64 * dw;
                x.iter()
                    .enumerate()
                    .map(|(k, &xk)| xk * Complex64::from_polar(1.0, -w * (t0 + k as f64 * dt)))
                    .sum()
            })
            .collect()
    }

    #[test]
    fn matches_direct_sum() {
        let x: Vec<Complex64> = (0..37)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        for &(t0, dt, w0, dw, m) in &[
            (-1.0, 0.05, -3.0, 0.2, 29usize),
            (0.3, 0.1, 2.0, -0.07, 50),
            (-4.0, 0.25, 0.0, 1.3, 5),
        ] {
            let fast = chirp_z(&x, t0, dt, w0, dw, m);
            let slow = brute(&x, t0, dt, w0, dw, m);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).norm() < 1e-11, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn empty_input_gives_zeros() {
        assert_eq!(chirp_z(&[], 0.0, 1.0, 0.0, 1.0, 3), vec![Complex64::new(0.0, 0.0); 3]);
    }
}
