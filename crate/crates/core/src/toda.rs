//! Phase space of the open Toda lattice.
//!
//! Three charts are used throughout the crate:
//!
//! * physical positions and momenta `(x, y)` of the `n` particles,
//! * Flaschka variables `(a, b)`, with `a_i = ½ exp((x_i − x_{i+1})/2)` and
//!   `b_i = y_i / 2`, which place the state on a coadjoint orbit,
//! * Darboux coordinates `(q, p)`, with `q_i = ln a_i` and `p_i = b_1 + … + b_i`.
//!
//! The chain is open: there is no coupling between particle `n` and particle 1.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ b_i == trace_c` accepted by [`TodaPhasePoint`].
pub const TRACE_TOLERANCE: f64 = 1e-12;

/// A point of the Toda orbit: positive off-diagonals `a` (length `n − 1`) and
/// diagonals `b` (length `n`) with fixed trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRecord", into = "StateRecord")]
pub struct TodaPhasePoint {
    a: Vec<f64>,
    b: Vec<f64>,
    trace_c: f64,
}

#[derive(Serialize, Deserialize)]
struct StateRecord {
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TryFrom<StateRecord> for TodaPhasePoint {
    type Error = Error;

    fn try_from(rec: StateRecord) -> Result<Self> {
        if rec.b.len() != rec.n {
            return Err(Error::DimensionMismatch {
                expected: rec.n,
                found: rec.b.len(),
            });
        }
        TodaPhasePoint::new(rec.a, rec.b)
    }
}

impl From<TodaPhasePoint> for StateRecord {
    fn from(s: TodaPhasePoint) -> Self {
        StateRecord {
            n: s.n(),
            a: s.a,
            b: s.b,
        }
    }
}

impl TodaPhasePoint {
    /// Builds a validated state; the trace constant is taken from `b`.
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        let trace_c = b.iter().sum();
        Self::with_trace(a, b, trace_c)
    }

    /// Builds a state with an explicitly supplied trace constant.
    pub fn with_trace(a: Vec<f64>, b: Vec<f64>, trace_c: f64) -> Result<Self> {
        if b.len() < 2 {
            return Err(Error::LatticeTooSmall(b.len()));
        }
        if a.len() + 1 != b.len() {
            return Err(Error::DimensionMismatch {
                expected: b.len() - 1,
                found: a.len(),
            });
        }
        if a.iter().chain(b.iter()).any(|v| !v.is_finite()) || !trace_c.is_finite() {
            return Err(Error::NonFinite("Toda state"));
        }
        if let Some((index, &value)) = a.iter().enumerate().find(|(_, v)| **v <= 0.0) {
            return Err(Error::NonPositiveOffDiagonal { index, value });
        }
        let sum: f64 = b.iter().sum();
        if (sum - trace_c).abs() > TRACE_TOLERANCE * trace_c.abs().max(1.0) {
            return Err(Error::InvalidArgument(format!(
                "sum(b) = {sum} differs from trace {trace_c}"
            )));
        }
        Ok(Self { a, b, trace_c })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn trace_c(&self) -> f64 {
        self.trace_c
    }

    /// Partial sums `p_i = b_1 + … + b_i`, `i = 1..n−1`.
    pub fn momenta(&self) -> Vec<f64> {
        self.b[..self.n() - 1]
            .iter()
            .scan(0.0, |acc, &bi| {
                *acc += bi;
                Some(*acc)
            })
            .collect()
    }

    pub fn to_canonical(&self) -> CanonicalPoint {
        CanonicalPoint {
            q: self.a.iter().map(|a| a.ln()).collect(),
            p: self.momenta(),
        }
    }

    /// Inverse of [`to_canonical`](Self::to_canonical).
    pub fn from_canonical(c: &CanonicalPoint, trace_c: f64) -> Result<Self> {
        c.validate()?;
        let m = c.dim();
        let a: Vec<f64> = c.q.iter().map(|q| q.exp()).collect();
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::Overflow("exp(q)"));
        }
        let mut b = Vec::with_capacity(m + 1);
        let mut prev = 0.0;
        for &pi in &c.p {
            b.push(pi - prev);
            prev = pi;
        }
        b.push(trace_c - prev);
        Self::with_trace(a, b, trace_c)
    }

    pub fn lax_matrix(&self) -> LaxMatrix {
        let n = self.n();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.b[i];
        }
        for i in 0..n - 1 {
            m[(i, i + 1)] = self.a[i];
        }
        LaxMatrix(m)
    }

    /// Flaschka map from particle coordinates.
    pub fn from_physical(pt: &PhysicalPoint) -> Result<Self> {
        pt.validate()?;
        let a = pt
            .x
            .windows(2)
            .map(|w| 0.5 * (0.5 * (w[0] - w[1])).exp())
            .collect();
        let b = pt.y.iter().map(|y| 0.5 * y).collect();
        Self::new(a, b)
    }

    /// Inverse Flaschka map in the centre-of-mass gauge `Σ x_i = 0`.
    pub fn to_physical(&self) -> PhysicalPoint {
        let n = self.n();
        // x_k − x_1 accumulated from the gaps x_i − x_{i+1} = 2 ln(2 a_i)
        let mut offsets = Vec::with_capacity(n);
        offsets.push(0.0);
        for ai in &self.a {
            let last = *offsets.last().unwrap();
            offsets.push(last - 2.0 * (2.0 * ai).ln());
        }
        let shift = -offsets.iter().sum::<f64>() / n as f64;
        PhysicalPoint {
            x: offsets.into_iter().map(|o| o + shift).collect(),
            y: self.b.iter().map(|b| 2.0 * b).collect(),
        }
    }

    /// `Tr(L^k)` for the symmetric Lax operator, `1 ≤ k ≤ n`.
    ///
    /// `k = 1` returns the orbit's trace constant.
    pub fn integral_of_motion(&self, k: usize) -> Result<f64> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(Error::BadOrder { k, n });
        }
        if k == 1 {
            return Ok(self.trace_c);
        }
        let l = self.lax_matrix().symmetric();
        let mut power = l.clone();
        for _ in 1..k {
            power = &power * &l;
        }
        Ok(power.trace())
    }
}

/// Darboux coordinates `(q, p) ∈ ℝ^{n−1} × ℝ^{n−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalPoint {
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

impl CanonicalPoint {
    pub fn new(q: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        let c = Self { q, p };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.q.len() != self.p.len() {
            return Err(Error::DimensionMismatch {
                expected: self.q.len(),
                found: self.p.len(),
            });
        }
        if self.q.is_empty() {
            return Err(Error::LatticeTooSmall(1));
        }
        if self.q.iter().chain(self.p.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("canonical point"));
        }
        Ok(())
    }

    /// Number of degrees of freedom, `n − 1`.
    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// Lattice size `n`.
    pub fn n(&self) -> usize {
        self.q.len() + 1
    }
}

/// Particle positions and momenta.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalPoint {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl PhysicalPoint {
    pub fn validate(&self) -> Result<()> {
        if self.x.len() != self.y.len() {
            return Err(Error::DimensionMismatch {
                expected: self.x.len(),
                found: self.y.len(),
            });
        }
        if self.x.iter().chain(self.y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("physical point"));
        }
        Ok(())
    }

    /// Open-chain energy `½ Σ y_i² + Σ_{i<n} exp(x_i − x_{i+1})`.
    pub fn energy(&self) -> f64 {
        let kinetic: f64 = self.y.iter().map(|y| 0.5 * y * y).sum();
        let potential: f64 = self.x.windows(2).map(|w| (w[0] - w[1]).exp()).sum();
        kinetic + potential
    }
}

/// The upper-bidiagonal orbit representative: `b` on the diagonal, `a` on the
/// superdiagonal, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct LaxMatrix(DMatrix<f64>);

impl LaxMatrix {
    /// Wraps a matrix after checking the bidiagonal pattern exactly.
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.ncols(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                if (j < i || j > i + 1) && m[(i, j)] != 0.0 {
                    return Err(Error::NotBidiagonal {
                        row: i,
                        col: j,
                        value: m[(i, j)],
                    });
                }
            }
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.0.diagonal().iter().copied().collect()
    }

    pub fn superdiagonal(&self) -> Vec<f64> {
        (0..self.n() - 1).map(|i| self.0[(i, i + 1)]).collect()
    }

    /// Symmetric tridiagonal Lax operator `L = A + (A − diag A)ᵀ`.
    ///
    /// `A` itself is triangular, so its eigenvalues are just `b`; the
    /// isospectral quantity of the flow is the spectrum of `L`.
    pub fn symmetric(&self) -> DMatrix<f64> {
        let mut l = self.0.clone();
        for i in 0..self.n() - 1 {
            l[(i + 1, i)] = l[(i, i + 1)];
        }
        l
    }

    /// Converts back to orbit coordinates, validating positivity.
    pub fn to_state(&self) -> Result<TodaPhasePoint> {
        TodaPhasePoint::new(self.superdiagonal(), self.diagonal())
    }
}

/// Eq. (9.1)-form Hamiltonian `2 Σ_{i<n} (p_i − p_{i−1})² + 4 Σ_{i<n} e^{2 q_i}`,
/// `p_0 = 0`.
///
/// This drops the kinetic energy `2 b_n²` of the last particle; see
/// [`toda_energy`] for the full reduced energy that generates the flow.
pub fn classical_hamiltonian(c: &CanonicalPoint) -> Result<f64> {
    let mut kinetic = 0.0;
    let mut prev = 0.0;
    for &pi in &c.p {
        kinetic += 2.0 * (pi - prev).powi(2);
        prev = pi;
    }
    let potential = potential_energy(&c.q)?;
    Ok(kinetic + potential)
}

/// Reduced open-Toda energy on the orbit with trace `trace_c`:
/// [`classical_hamiltonian`] plus `2 (trace_c − p_{n−1})²`.
///
/// Equals `2 Tr(L²)` and `½ Σ y_i² + Σ exp(x_i − x_{i+1})`.
pub fn toda_energy(c: &CanonicalPoint, trace_c: f64) -> Result<f64> {
    let last = *c.p.last().ok_or(Error::LatticeTooSmall(1))?;
    Ok(classical_hamiltonian(c)? + 2.0 * (trace_c - last).powi(2))
}

fn potential_energy(q: &[f64]) -> Result<f64> {
    let v: f64 = q.iter().map(|qi| 4.0 * (2.0 * qi).exp()).sum();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow("exp(2q)"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn make_state_basic() {
        let s = TodaPhasePoint::new(vec![1.0], vec![0.5, -0.5]).unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.trace_c(), 0.0);
    }

    #[test]
    fn make_state_rejects_nonpositive_a() {
        let err = TodaPhasePoint::new(vec![1.0, -1.0], vec![0.0; 3]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveOffDiagonal { index: 1, .. }));
        let err = TodaPhasePoint::new(vec![0.0], vec![0.0; 2]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveOffDiagonal { index: 0, .. }));
    }

    #[test]
    fn make_state_rejects_bad_lengths() {
        assert!(matches!(
            TodaPhasePoint::new(vec![1.0, 1.0], vec![0.0; 2]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            TodaPhasePoint::new(vec![], vec![0.0]),
            Err(Error::LatticeTooSmall(1))
        ));
    }

    #[test]
    fn flaschka_encoding_example() {
        let s = TodaPhasePoint::new(vec![0.5 * 0.5f64.exp()], vec![0.5, -0.5]).unwrap();
        let pt = s.to_physical();
        // x = (1, 0) shifted to zero centre of mass
        assert!(close(pt.x[0] - pt.x[1], 1.0, 1e-14));
        assert!(close(pt.x[0] + pt.x[1], 0.0, 1e-14));
        assert_eq!(pt.y, vec![1.0, -1.0]);
        let back = TodaPhasePoint::from_physical(&PhysicalPoint {
            x: vec![1.0, 0.0],
            y: vec![1.0, -1.0],
        })
        .unwrap();
        assert!(close(back.a()[0], s.a()[0], 1e-15));
        assert_eq!(back.b(), s.b());
    }

    #[test]
    fn physical_to_orbit_examples() {
        let s = TodaPhasePoint::from_physical(&PhysicalPoint {
            x: vec![0.0, 0.0],
            y: vec![0.0, 0.0],
        })
        .unwrap();
        assert_eq!(s.a(), &[0.5]);
        assert_eq!(s.b(), &[0.0, 0.0]);

        let s = TodaPhasePoint::from_physical(&PhysicalPoint {
            x: vec![2.0, 0.0],
            y: vec![2.0, -2.0],
        })
        .unwrap();
        assert!(close(s.a()[0], 0.5 * std::f64::consts::E, 1e-15));
        assert_eq!(s.b(), &[1.0, -1.0]);
    }

    #[test]
    fn canonical_examples() {
        let s = TodaPhasePoint::new(vec![1.0], vec![0.5, -0.5]).unwrap();
        let c = s.to_canonical();
        assert_eq!(c.q, vec![0.0]);
        assert_eq!(c.p, vec![0.5]);
        let back = TodaPhasePoint::from_canonical(&c, 0.0).unwrap();
        assert_eq!(back.a(), &[1.0]);
        assert_eq!(back.b(), &[0.5, -0.5]);
    }

    #[test]
    fn lax_layout() {
        let s = TodaPhasePoint::new(vec![1.0], vec![0.5, -0.5]).unwrap();
        let l = s.lax_matrix();
        assert_eq!(l.matrix(), &DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 0.0, -0.5]));
        assert_eq!(l.trace(), s.trace_c());

        let s = TodaPhasePoint::new(vec![0.3, 0.7], vec![1.0, 2.0, -0.5]).unwrap();
        let m = s.lax_matrix().into_inner();
        assert_eq!(m[(0, 1)], 0.3);
        assert_eq!(m[(1, 2)], 0.7);
        assert_eq!(m[(0, 2)], 0.0);
        assert_eq!(m[(1, 0)], 0.0);
        assert_eq!(m.trace(), s.trace_c());
    }

    #[test]
    fn lax_from_matrix_rejects_lower_entries() {
        let m = DMatrix::from_row_slice(2, 2, &[0.5, 1.0, 0.1, -0.5]);
        assert!(matches!(
            LaxMatrix::from_matrix(m),
            Err(Error::NotBidiagonal { row: 1, col: 0, .. })
        ));
    }

    #[test]
    fn hamiltonian_examples() {
        let c = CanonicalPoint::new(vec![0.0], vec![0.0]).unwrap();
        assert_eq!(classical_hamiltonian(&c).unwrap(), 4.0);
        let c = CanonicalPoint::new(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(classical_hamiltonian(&c).unwrap(), 6.0);
        let c = CanonicalPoint::new(vec![400.0], vec![0.0]).unwrap();
        assert!(matches!(classical_hamiltonian(&c), Err(Error::Overflow(_))));
    }

    #[test]
    fn integrals_of_motion() {
        let s = TodaPhasePoint::new(vec![1.0], vec![0.5, -0.5]).unwrap();
        assert_eq!(s.integral_of_motion(1).unwrap(), 0.0);
        // L = [[0.5, 1], [1, -0.5]]: Tr L² = 0.25 + 0.25 + 2
        assert!(close(s.integral_of_motion(2).unwrap(), 2.5, 1e-15));
        assert!(matches!(s.integral_of_motion(3), Err(Error::BadOrder { k: 3, n: 2 })));
        assert!(matches!(s.integral_of_motion(0), Err(Error::BadOrder { .. })));
    }

    #[test]
    fn state_json_shape() {
        let s = TodaPhasePoint::new(vec![1.0], vec![0.5, -0.5]).unwrap();
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"n":2,"a":[1.0],"b":[0.5,-0.5]}"#);
        let back: TodaPhasePoint = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<TodaPhasePoint>(r#"{"n":2,"a":[-1.0],"b":[0,0]}"#).is_err());
    }
}
