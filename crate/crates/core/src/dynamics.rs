//! Hamiltonian flow of the open Toda lattice in Darboux coordinates.
//!
//! The reduced energy `H(q, p) = T(p) + V(q)` is separable, so the flow is
//! integrated with Störmer–Verlet (kick–drift–kick).

use std::io::Write;

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::toda::{toda_energy, CanonicalPoint, TodaPhasePoint};

/// `∂T/∂p_i = 4 (p_i − p_{i−1}) − 4 (p_{i+1} − p_i)` with `p_0 = 0`, `p_n = trace_c`.
fn kinetic_gradient(p: &[f64], trace_c: f64, out: &mut [f64]) {
    let m = p.len();
    for i in 0..m {
        let prev = if i == 0 { 0.0 } else { p[i - 1] };
        let next = if i + 1 == m { trace_c } else { p[i + 1] };
        out[i] = 4.0 * (p[i] - prev) - 4.0 * (next - p[i]);
    }
}

/// `∂V/∂q_i = 8 exp(2 q_i)`.
fn potential_gradient(q: &[f64], out: &mut [f64]) -> Result<()> {
    for (o, qi) in out.iter_mut().zip(q) {
        *o = 8.0 * (2.0 * qi).exp();
        if !o.is_finite() {
            return Err(Error::Overflow("exp(2q)"));
        }
    }
    Ok(())
}

/// Hamilton's equations `q̇ = ∂H/∂p`, `ṗ = −∂H/∂q` for [`toda_energy`].
pub fn hamiltonian_vector_field(c: &CanonicalPoint, trace_c: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    c.validate()?;
    let m = c.dim();
    let mut dq = vec![0.0; m];
    let mut dp = vec![0.0; m];
    kinetic_gradient(&c.p, trace_c, &mut dq);
    potential_gradient(&c.q, &mut dp)?;
    dp.iter_mut().for_each(|v| *v = -*v);
    Ok((dq, dp))
}

/// One Störmer–Verlet step, in place.
pub fn verlet_step(c: &mut CanonicalPoint, trace_c: f64, dt: f64) -> Result<()> {
    let m = c.dim();
    let mut grad = vec![0.0; m];
    potential_gradient(&c.q, &mut grad)?;
    for (p, g) in c.p.iter_mut().zip(&grad) {
        *p -= 0.5 * dt * g;
    }
    kinetic_gradient(&c.p, trace_c, &mut grad);
    for (q, g) in c.q.iter_mut().zip(&grad) {
        *q += dt * g;
    }
    potential_gradient(&c.q, &mut grad)?;
    for (p, g) in c.p.iter_mut().zip(&grad) {
        *p -= 0.5 * dt * g;
    }
    Ok(())
}

/// Uniformly sampled trajectory of the flow.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub points: Vec<CanonicalPoint>,
    pub trace_c: f64,
    pub step: f64,
    pub integrator_name: String,
    /// False when the run was cut short by a non-finite state; `points` then
    /// holds the last finite prefix.
    pub completed: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn last(&self) -> &CanonicalPoint {
        self.points.last().expect("trajectory holds at least the initial point")
    }

    pub fn state_at(&self, index: usize) -> Result<TodaPhasePoint> {
        TodaPhasePoint::from_canonical(&self.points[index], self.trace_c)
    }

    /// Writes `t, q_1.., p_1.., H, TrL2..TrLn` rows with a header.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let m = self.points.first().map_or(0, CanonicalPoint::dim);
        let n = m + 1;
        let mut header = vec!["t".to_string()];
        header.extend((1..=m).map(|i| format!("q_{i}")));
        header.extend((1..=m).map(|i| format!("p_{i}")));
        header.push("H".into());
        header.extend((2..=n).map(|k| format!("TrL{k}")));
        writeln!(w, "{}", header.join(","))?;
        for (t, c) in self.times.iter().zip(&self.points) {
            let mut row = vec![fmt17(*t)];
            row.extend(c.q.iter().map(|v| fmt17(*v)));
            row.extend(c.p.iter().map(|v| fmt17(*v)));
            row.push(fmt17(toda_energy(c, self.trace_c)?));
            let s = TodaPhasePoint::from_canonical(c, self.trace_c)?;
            for k in 2..=n {
                row.push(fmt17(s.integral_of_motion(k)?));
            }
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Integrates from `c0` to `t_end` with fixed step `dt`.
///
/// The number of steps is `round(t_end / dt)`; the recorded step is `dt`.
pub fn integrate(c0: &CanonicalPoint, trace_c: f64, t_end: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) || !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need dt > 0 and t_end > 0 (got dt = {dt}, t_end = {t_end})"
        )));
    }
    c0.validate()?;
    // surface overflow at the start as an error rather than a truncated run
    hamiltonian_vector_field(c0, trace_c)?;
    let steps = (t_end / dt).round().max(1.0) as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut points = Vec::with_capacity(steps + 1);
    times.push(0.0);
    points.push(c0.clone());
    let mut cur = c0.clone();
    let mut completed = true;
    for step in 1..=steps {
        let ok = verlet_step(&mut cur, trace_c, dt).is_ok()
            && cur.q.iter().chain(&cur.p).all(|v| v.is_finite());
        if !ok {
            completed = false;
            break;
        }
        times.push(step as f64 * dt);
        points.push(cur.clone());
    }
    Ok(Trajectory {
        times,
        points,
        trace_c,
        step: dt,
        integrator_name: "stormer-verlet".into(),
        completed,
    })
}

/// Drift of the conserved quantities along a trajectory.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ConservationReport {
    /// Entry `k − 1` is `max_t |Tr L(t)^k − Tr L(0)^k| / max(1, |Tr L(0)^k|)`.
    pub trace_power_drift: Vec<f64>,
    /// `max_t max_j |λ_j(t) − λ_j(0)| / max(1, |λ_j(0)|)` over the sorted spectrum of `L`.
    pub eigenvalue_drift: f64,
    /// `max_t |H(t) − H(0)| / max(1, |H(0)|)`.
    pub energy_drift: f64,
}

fn sorted_spectrum(s: &TodaPhasePoint) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(s.lax_matrix().symmetric())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn conservation_report(tr: &Trajectory) -> Result<ConservationReport> {
    if tr.is_empty() {
        return Err(Error::InvalidArgument("empty trajectory".into()));
    }
    let s0 = tr.state_at(0)?;
    let n = s0.n();
    let powers0: Vec<f64> = (1..=n).map(|k| s0.integral_of_motion(k)).collect::<Result<_>>()?;
    let spec0 = sorted_spectrum(&s0);
    let h0 = toda_energy(&tr.points[0], tr.trace_c)?;

    let mut trace_power_drift = vec![0.0f64; n];
    let mut eigenvalue_drift: f64 = 0.0;
    let mut energy_drift: f64 = 0.0;
    for (idx, c) in tr.points.iter().enumerate().skip(1) {
        let s = tr.state_at(idx)?;
        for k in 1..=n {
            let v = s.integral_of_motion(k)?;
            let d = (v - powers0[k - 1]).abs() / powers0[k - 1].abs().max(1.0);
            trace_power_drift[k - 1] = trace_power_drift[k - 1].max(d);
        }
        for (l, l0) in sorted_spectrum(&s).iter().zip(&spec0) {
            eigenvalue_drift = eigenvalue_drift.max((l - l0).abs() / l0.abs().max(1.0));
        }
        let h = toda_energy(c, tr.trace_c)?;
        energy_drift = energy_drift.max((h - h0).abs() / h0.abs().max(1.0));
    }
    Ok(ConservationReport {
        trace_power_drift,
        eigenvalue_drift,
        energy_drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_field_example() {
        let c = CanonicalPoint::new(vec![0.0], vec![0.0]).unwrap();
        let (dq, dp) = hamiltonian_vector_field(&c, 0.0).unwrap();
        assert_eq!(dq, vec![0.0]);
        assert_eq!(dp, vec![-8.0]);
    }

    #[test]
    fn field_never_vanishes() {
        for q in [-30.0, -5.0, 0.0, 3.0] {
            let c = CanonicalPoint::new(vec![q, q], vec![0.0, 0.0]).unwrap();
            let (_, dp) = hamiltonian_vector_field(&c, 0.0).unwrap();
            assert!(dp.iter().all(|v| *v < 0.0));
        }
    }

    #[test]
    fn integrate_rejects_bad_steps() {
        let c = CanonicalPoint::new(vec![0.0], vec![0.0]).unwrap();
        assert!(integrate(&c, 0.0, 1.0, 0.0).is_err());
        assert!(integrate(&c, 0.0, -1.0, 0.1).is_err());
        let hot = CanonicalPoint::new(vec![400.0], vec![0.0]).unwrap();
        assert!(matches!(integrate(&hot, 0.0, 1.0, 0.1), Err(Error::Overflow(_))));
    }

    #[test]
    fn blow_up_is_flagged() {
        // huge momentum drives q to overflow within a few steps
        let c = CanonicalPoint::new(vec![0.0], vec![1e150]).unwrap();
        let tr = integrate(&c, 0.0, 1.0, 0.1).unwrap();
        assert!(!tr.completed);
        assert!(tr.len() < 11);
    }

    #[test]
    fn constant_trajectory_has_no_drift() {
        let c = CanonicalPoint::new(vec![0.1, -0.2], vec![0.3, 0.1]).unwrap();
        let tr = Trajectory {
            times: vec![0.0, 1.0, 2.0],
            points: vec![c.clone(), c.clone(), c],
            trace_c: 0.0,
            step: 1.0,
            integrator_name: "none".into(),
            completed: true,
        };
        let r = conservation_report(&tr).unwrap();
        assert!(r.trace_power_drift.iter().all(|d| *d == 0.0));
        assert_eq!(r.eigenvalue_drift, 0.0);
        assert_eq!(r.energy_drift, 0.0);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let c = CanonicalPoint::new(vec![0.0, 0.0], vec![0.1, 0.2]).unwrap();
        let tr = integrate(&c, 0.0, 0.01, 0.005).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,q_1,q_2,p_1,p_2,H,TrL2,TrL3");
        assert_eq!(lines.count(), 3);
    }
}
