//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

/// `ψ(hi)` for `−2ψ'' + 4e^{2q}ψ = λψ`, `ψ(lo) = 0`, `ψ'(lo) = 1`, by RK4.
pub fn shoot(lambda: f64, lo: f64, hi: f64, steps: usize) -> f64 {
    let h = (hi - lo) / steps as f64;
    let rhs = |q: f64, y: [f64; 2]| [y[1], (2.0 * (2.0 * q).exp() - 0.5 * lambda) * y[0]];
    let mut y = [0.0, 1.0];
    let mut q = lo;
    for _ in 0..steps {
        let k1 = rhs(q, y);
        let k2 = rhs(q + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(q + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(q + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        q += h;
        // keep the magnitude bounded; only the sign at `hi` matters
        let m = y[0].abs().max(y[1].abs());
        if m > 1e100 {
            y[0] /= m;
            y[1] /= m;
        }
    }
    y[0]
}

/// Lowest Dirichlet eigenvalue of `−2∂² + 4e^{2q}` on `[lo, hi]`: scan for
/// the first sign change of the shooting function, then bisect.
pub fn shooting_ground_state(lo: f64, hi: f64) -> f64 {
    let steps = 200_000;
    let mut a = 1e-4;
    let fa0 = shoot(a, lo, hi, steps);
    let mut b = a;
    loop {
        b += 0.01;
        if shoot(b, lo, hi, steps).signum() != fa0.signum() {
            break;
        }
        assert!(b < 10.0, "no eigenvalue found below 10");
    }
    let mut fa = fa0;
    for _ in 0..60 {
        let m = 0.5 * (a + b);
        let fm = shoot(m, lo, hi, steps);
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
