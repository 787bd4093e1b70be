//! The Toda phase space as a coadjoint orbit of the group of lower-triangular
//! matrices with positive diagonal and unit determinant.
//!
//! Upper-triangular matrices are identified with the dual of the
//! lower-triangular algebra through `⟨X, l⟩ = Tr(X l)`. The group acts by
//! `u ↦ [g u g⁻¹]₊`, where `[·]₊` zeroes the strictly lower part.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::toda::{LaxMatrix, TodaPhasePoint};

const DET_TOLERANCE: f64 = 1e-12;
/// Relative singular-value threshold for numerical ranks.
pub const RANK_THRESHOLD: f64 = 1e-10;
/// Relative finite-difference step for bracket evaluations.
pub const FD_STEP: f64 = 1e-6;

/// Lower-triangular `n × n` matrix with positive diagonal and determinant one.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement(DMatrix<f64>);

impl GroupElement {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n || n == 0 {
            return Err(Error::InvalidGroupElement("matrix must be square".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if m[(i, j)] != 0.0 {
                    return Err(Error::InvalidGroupElement(format!(
                        "entry ({i}, {j}) above the diagonal is {}",
                        m[(i, j)]
                    )));
                }
            }
            if !(m[(i, i)] > 0.0) {
                return Err(Error::InvalidGroupElement(format!(
                    "diagonal entry {i} is {}",
                    m[(i, i)]
                )));
            }
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("group element"));
        }
        let det: f64 = m.diagonal().iter().product();
        if (det - 1.0).abs() > DET_TOLERANCE {
            return Err(Error::InvalidGroupElement(format!("determinant is {det}")));
        }
        Ok(Self(m))
    }

    /// Rescales a lower-triangular matrix with positive diagonal to unit
    /// determinant before validating it.
    pub fn normalized(mut m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        let det: f64 = m.diagonal().iter().product();
        if !(det > 0.0) {
            return Err(Error::InvalidGroupElement(format!("determinant is {det}")));
        }
        m /= det.powf(1.0 / n as f64);
        Self::new(m)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(d)))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Product `self · other`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let mut m = &self.0 * &other.0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                m[(i, j)] = 0.0;
            }
        }
        GroupElement(m)
    }

    /// Inverse by forward substitution.
    pub fn inverse(&self) -> GroupElement {
        let n = self.n();
        let l = &self.0;
        let mut inv = DMatrix::zeros(n, n);
        for j in 0..n {
            inv[(j, j)] = 1.0 / l[(j, j)];
            for i in j + 1..n {
                let s: f64 = (j..i).map(|k| l[(i, k)] * inv[(k, j)]).sum();
                inv[(i, j)] = -s / l[(i, i)];
            }
        }
        GroupElement(inv)
    }

    /// Ratios `L_ii / L_{i+1,i+1}` by which the group scales each `a_i`.
    pub fn a_scaling(&self) -> Vec<f64> {
        (0..self.n() - 1)
            .map(|i| self.0[(i, i)] / self.0[(i + 1, i + 1)])
            .collect()
    }

    /// Coefficients `L_{i+1,i} / L_{i+1,i+1}` of the momentum shift.
    pub fn p_shift(&self) -> Vec<f64> {
        (0..self.n() - 1)
            .map(|i| self.0[(i + 1, i)] / self.0[(i + 1, i + 1)])
            .collect()
    }
}

/// Trace-zero lower-triangular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraElement(DMatrix<f64>);

impl LieAlgebraElement {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::InvalidAlgebraElement("matrix must be square".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                if m[(i, j)] != 0.0 {
                    return Err(Error::InvalidAlgebraElement(format!(
                        "entry ({i}, {j}) above the diagonal is nonzero"
                    )));
                }
            }
        }
        let tr = m.trace();
        if tr.abs() > DET_TOLERANCE * m.amax().max(1.0) {
            return Err(Error::InvalidAlgebraElement(format!("trace is {tr}")));
        }
        Ok(Self(m))
    }

    /// Strictly lower element with the given subdiagonal `l_{i+1,i}`.
    pub fn subdiagonal(values: &[f64]) -> Self {
        let n = values.len() + 1;
        let mut m = DMatrix::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i + 1, i)] = *v;
        }
        Self(m)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn is_strictly_lower(&self) -> bool {
        self.0.diagonal().iter().all(|v| *v == 0.0)
    }
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// Basis `E_ij` (`i > j`) of the strictly lower-triangular algebra.
pub fn strictly_lower_basis(n: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..i {
            out.push(unit(n, i, j));
        }
    }
    out
}

/// Basis of the trace-zero lower-triangular algebra: the strictly lower
/// units followed by `E_kk − E_{k+1,k+1}`.
pub fn algebra_basis(n: usize) -> Vec<DMatrix<f64>> {
    let mut out = strictly_lower_basis(n);
    for k in 0..n - 1 {
        let mut h = unit(n, k, k);
        h[(k + 1, k + 1)] = -1.0;
        out.push(h);
    }
    out
}

pub fn upper_projection(m: &DMatrix<f64>) -> DMatrix<f64> {
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..i.min(m.ncols()) {
            out[(i, j)] = 0.0;
        }
    }
    out
}

fn commutator(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    x * y - y * x
}

/// `[g u g⁻¹]₊` for an arbitrary upper-triangular `u`.
pub fn coadjoint_action_matrix(g: &GroupElement, u: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if u.nrows() != g.n() || u.ncols() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: u.nrows(),
        });
    }
    let ginv = g.inverse();
    Ok(upper_projection(&(g.matrix() * u * ginv.matrix())))
}

/// Coadjoint action on a Toda matrix; the bidiagonal pattern is preserved.
pub fn coadjoint_action(g: &GroupElement, u: &LaxMatrix) -> Result<LaxMatrix> {
    LaxMatrix::from_matrix(coadjoint_action_matrix(g, u.matrix())?)
}

/// Closed-form action on orbit coordinates:
/// `a_i ↦ (L_ii/L_{i+1,i+1}) a_i`,
/// `b_i ↦ b_i + (L_{i,i−1}/L_ii) a_{i−1} − (L_{i+1,i}/L_{i+1,i+1}) a_i`.
pub fn action_on_coordinates(g: &GroupElement, s: &TodaPhasePoint) -> Result<TodaPhasePoint> {
    let n = s.n();
    if g.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: g.n(),
        });
    }
    let a = s.a();
    let new_a = g.a_scaling().iter().zip(a).map(|(r, ai)| r * ai).collect();
    let new_b = (0..n)
        .map(|i| {
            let mut bi = s.b()[i];
            if i > 0 {
                bi += g.get(i, i - 1) / g.get(i, i) * a[i - 1];
            }
            if i + 1 < n {
                bi -= g.get(i + 1, i) / g.get(i + 1, i + 1) * a[i];
            }
            bi
        })
        .collect();
    TodaPhasePoint::with_trace(new_a, new_b, s.trace_c())
}

/// Numerical rank of `{[u, l]₊ : l ∈ algebra_basis(n)}`.
pub fn tangent_rank_of(u: &DMatrix<f64>) -> usize {
    let n = u.nrows();
    let basis = algebra_basis(n);
    let upper_len = n * (n + 1) / 2;
    let mut span = DMatrix::zeros(upper_len, basis.len());
    for (col, l) in basis.iter().enumerate() {
        let v = upper_projection(&commutator(u, l));
        let mut row = 0;
        for i in 0..n {
            for j in i..n {
                span[(row, col)] = v[(i, j)];
                row += 1;
            }
        }
    }
    numerical_rank(&span)
}

pub fn orbit_tangent_rank(s: &TodaPhasePoint) -> usize {
    tangent_rank_of(s.lax_matrix().matrix())
}

fn numerical_rank(m: &DMatrix<f64>) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > RANK_THRESHOLD * max).count()
}

/// Tangent vector in `(a, p)` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Tangent {
    pub da: Vec<f64>,
    pub dp: Vec<f64>,
}

impl Tangent {
    /// Converts a tangent in `(q, p)` coordinates at the point with off-diagonals `a`.
    pub fn from_qp(a: &[f64], dq: &[f64], dp: &[f64]) -> Self {
        Self {
            da: a.iter().zip(dq).map(|(ai, d)| ai * d).collect(),
            dp: dp.to_vec(),
        }
    }

    pub fn to_qp(&self, a: &[f64]) -> (Vec<f64>, Vec<f64>) {
        (
            self.da.iter().zip(a).map(|(d, ai)| d / ai).collect(),
            self.dp.clone(),
        )
    }
}

/// Orbit tangent `[A, l]₊` generated by an algebra element, in `(a, p)` coordinates.
pub fn tangent_from_algebra(s: &TodaPhasePoint, l: &DMatrix<f64>) -> Tangent {
    let v = upper_projection(&commutator(s.lax_matrix().matrix(), l));
    let n = s.n();
    let da = (0..n - 1).map(|i| v[(i, i + 1)]).collect();
    let dp = (0..n - 1)
        .scan(0.0, |acc, i| {
            *acc += v[(i, i)];
            Some(*acc)
        })
        .collect();
    Tangent { da, dp }
}

/// Kostant–Kirillov form on algebra generators: `Tr(A [l₁, l₂])`.
pub fn kk_form_matrix(s: &TodaPhasePoint, l1: &DMatrix<f64>, l2: &DMatrix<f64>) -> f64 {
    (s.lax_matrix().matrix() * commutator(l1, l2)).trace()
}

/// `Σ_i (1/a_i)(δ₁a_i δ₂p_i − δ₂a_i δ₁p_i)`.
pub fn kk_form_coords(s: &TodaPhasePoint, t1: &Tangent, t2: &Tangent) -> f64 {
    s.a()
        .iter()
        .enumerate()
        .map(|(i, ai)| (t1.da[i] * t2.dp[i] - t2.da[i] * t1.dp[i]) / ai)
        .sum()
}

/// Pushforward of a tangent vector by the differential of [`action_on_coordinates`].
pub fn push_tangent(g: &GroupElement, t: &Tangent) -> Tangent {
    let r = g.a_scaling();
    let k = g.p_shift();
    Tangent {
        da: t.da.iter().zip(&r).map(|(d, r)| r * d).collect(),
        dp: t
            .dp
            .iter()
            .zip(&t.da)
            .zip(&k)
            .map(|((dp, da), k)| dp - k * da)
            .collect(),
    }
}

/// Scalar field on the unconstrained `(a, b)` space.
pub type OrbitField<'a> = &'a dyn Fn(&[f64], &[f64]) -> f64;

fn central_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut work = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = FD_STEP * x[i].abs().max(1.0);
            work[i] = x[i] + h;
            let up = f(&work);
            work[i] = x[i] - h;
            let down = f(&work);
            work[i] = x[i];
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn ab_gradients(f: OrbitField, s: &TodaPhasePoint) -> (Vec<f64>, Vec<f64>) {
    let m = s.n() - 1;
    let joined: Vec<f64> = s.a().iter().chain(s.b()).copied().collect();
    let g = central_gradient(&|x: &[f64]| f(&x[..m], &x[m..]), &joined);
    (g[..m].to_vec(), g[m..].to_vec())
}

/// The Toda Poisson bracket in `(a, b)` variables, terms involving
/// `a_0`, `a_n` or `b_{n+1}` omitted; partials by central differences.
pub fn poisson_bracket(f: OrbitField, h: OrbitField, s: &TodaPhasePoint) -> f64 {
    let n = s.n();
    let a = s.a();
    let (fa, fb) = ab_gradients(f, s);
    let (ha, hb) = ab_gradients(h, s);
    let mut total = 0.0;
    for i in 0..n {
        let mut coeff = 0.0;
        if i >= 1 {
            coeff += a[i - 1] * ha[i - 1];
        }
        if i + 1 < n {
            coeff -= a[i] * ha[i];
        }
        total += coeff * fb[i];
    }
    for i in 0..n - 1 {
        total += a[i] * (hb[i] - hb[i + 1]) * fa[i];
    }
    total
}

/// Bracket induced by `ω = Σ dq_i ∧ dp_i` on the orbit through `s`,
/// `{F, G} = Σ (∂F/∂q ∂G/∂p − ∂F/∂p ∂G/∂q)`, for fields given in `(a, b)`.
pub fn omega_bracket(f: OrbitField, h: OrbitField, s: &TodaPhasePoint) -> f64 {
    let m = s.n() - 1;
    let c = s.trace_c();
    let lift = |field: OrbitField<'_>, x: &[f64]| {
        let a: Vec<f64> = x[..m].iter().map(|q| q.exp()).collect();
        let mut b = Vec::with_capacity(m + 1);
        let mut prev = 0.0;
        for &p in &x[m..] {
            b.push(p - prev);
            prev = p;
        }
        b.push(c - prev);
        field(&a, &b)
    };
    let cp = s.to_canonical();
    let x: Vec<f64> = cp.q.iter().chain(&cp.p).copied().collect();
    let gf = central_gradient(&|y: &[f64]| lift(f, y), &x);
    let gh = central_gradient(&|y: &[f64]| lift(h, y), &x);
    (0..m).map(|i| gf[i] * gh[m + i] - gf[m + i] * gh[i]).sum()
}

/// Sign `σ` such that `σ · poisson_bracket` realises `{q_i, p_j} = δ_ij`,
/// fixed from `{q_1, p_1}` at `s`.
pub fn bracket_sign(s: &TodaPhasePoint) -> f64 {
    let q1 = |a: &[f64], _: &[f64]| a[0].ln();
    let p1 = |_: &[f64], b: &[f64]| b[0];
    poisson_bracket(&q1, &p1, s).signum()
}

/// Outcome of the four polarization conditions for a candidate subalgebra.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarizationReport {
    pub n: usize,
    /// The span is closed under the commutator.
    pub closed_under_bracket: bool,
    /// `dim(𝔤/𝔥) = n − 1` and `𝔥 ⊂ 𝔤`.
    pub codimension_ok: bool,
    pub codimension: usize,
    /// `⟨A, [𝔥, 𝔥]⟩ = 0` at every sampled Toda point.
    pub isotropic: bool,
    pub max_pairing: f64,
    /// `𝔥 + 𝔥̄` is a subalgebra.
    pub sum_with_conjugate_closed: bool,
}

impl PolarizationReport {
    pub fn all_pass(&self) -> bool {
        self.closed_under_bracket && self.codimension_ok && self.isotropic && self.sum_with_conjugate_closed
    }
}

fn span_matrix(basis: &[DMatrix<f64>]) -> DMatrix<f64> {
    let len = basis.first().map_or(0, |b| b.len());
    DMatrix::from_fn(len, basis.len(), |r, c| basis[c].as_slice()[r])
}

fn span_residual(span: &DMatrix<f64>, x: &DMatrix<f64>) -> f64 {
    let rhs = DVector::from_column_slice(x.as_slice());
    let svd = span.clone().svd(true, true);
    let coeffs = svd.solve(&rhs, 1e-13).expect("SVD computed with U and V");
    (span * coeffs - rhs).amax()
}

fn closed(basis: &[DMatrix<f64>]) -> bool {
    let span = span_matrix(basis);
    basis.iter().all(|x| {
        basis
            .iter()
            .all(|y| span_residual(&span, &commutator(x, y)) < RANK_THRESHOLD)
    })
}

/// Checks the polarization conditions for the complex span of a real
/// spanning set inside the trace-zero lower-triangular algebra.
///
/// A span of real matrices is invariant under complex conjugation, so
/// `𝔥 + 𝔥̄` is spanned by the same set; ranks and closure over ℂ agree with
/// those over ℝ for real spanning sets.
pub fn verify_polarization_of(
    n: usize,
    basis: &[DMatrix<f64>],
    samples: &[TodaPhasePoint],
) -> PolarizationReport {
    let g_basis = algebra_basis(n);
    let g_rank = numerical_rank(&span_matrix(&g_basis));
    let h_rank = numerical_rank(&span_matrix(basis));
    let mut joined = g_basis.clone();
    joined.extend(basis.iter().cloned());
    let contained = numerical_rank(&span_matrix(&joined)) == g_rank;
    let codimension = g_rank - h_rank.min(g_rank);

    let mut max_pairing: f64 = 0.0;
    for s in samples {
        let a = s.lax_matrix();
        let scale = a.matrix().amax().max(1.0);
        for x in basis {
            for y in basis {
                let v = (a.matrix() * commutator(x, y)).trace().abs() / scale;
                max_pairing = max_pairing.max(v);
            }
        }
    }

    let conjugate_sum: Vec<DMatrix<f64>> = basis.iter().chain(basis.iter()).cloned().collect();
    PolarizationReport {
        n,
        closed_under_bracket: closed(basis),
        codimension_ok: contained && codimension == n - 1,
        codimension,
        isotropic: max_pairing < 1e-12,
        max_pairing,
        sum_with_conjugate_closed: closed(&conjugate_sum),
    }
}

/// Polarization check for the strictly lower-triangular subalgebra.
pub fn verify_polarization(n: usize, samples: &[TodaPhasePoint]) -> PolarizationReport {
    verify_polarization_of(n, &strictly_lower_basis(n), samples)
}
