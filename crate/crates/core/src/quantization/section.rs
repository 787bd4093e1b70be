//! Polarized sections, the weighted inner product and the operators acting
//! on them.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::coherent::BasisSpec;
use crate::error::{Error, Result};
use crate::linalg::quadrature::{CompositeRule, TensorRule};
use crate::orbit::{GroupElement, LieAlgebraElement, Tangent};
use crate::toda::{CanonicalPoint, TodaPhasePoint};

/// Complex-valued function of the off-diagonals `a`.
pub type SectionFn = Arc<dyn Fn(&[f64]) -> Complex64 + Send + Sync>;

/// A polarized section: a function of `a_1 … a_{n−1}` only.
#[derive(Clone)]
pub enum Section {
    /// Expansion over the Hermite-in-log basis.
    Basis { spec: BasisSpec, coeffs: Vec<f64> },
    /// Arbitrary function, negligible outside `extent` (a box in `log a`).
    Function {
        n: usize,
        eval: SectionFn,
        extent: Vec<(f64, f64)>,
    },
}

impl fmt::Debug for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Section::Basis { spec, coeffs } => f
                .debug_struct("Basis")
                .field("spec", spec)
                .field("coeffs", coeffs)
                .finish(),
            Section::Function { n, extent, .. } => f
                .debug_struct("Function")
                .field("n", n)
                .field("extent", extent)
                .finish_non_exhaustive(),
        }
    }
}

impl Section {
    pub fn basis(spec: BasisSpec, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), spec.dim(), "coefficient count must match the basis");
        Section::Basis { spec, coeffs }
    }

    pub fn from_fn(
        n: usize,
        extent: Vec<(f64, f64)>,
        f: impl Fn(&[f64]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        assert_eq!(extent.len(), n - 1, "one extent interval per axis");
        Section::Function {
            n,
            eval: Arc::new(f),
            extent,
        }
    }

    /// `Π_k exp(−(log a_k − μ_k)² / (2σ_k²))`.
    pub fn gaussian(center: &[f64], width: &[f64]) -> Self {
        assert_eq!(center.len(), width.len());
        let n = center.len() + 1;
        let extent = center
            .iter()
            .zip(width)
            .map(|(m, s)| (m - 12.0 * s, m + 12.0 * s))
            .collect();
        let (c, w) = (center.to_vec(), width.to_vec());
        Self::from_fn(n, extent, move |a| {
            let e: f64 = a
                .iter()
                .zip(c.iter().zip(&w))
                .map(|(ak, (m, s))| (ak.ln() - m).powi(2) / (2.0 * s * s))
                .sum();
            Complex64::new((-e).exp(), 0.0)
        })
    }

    pub fn n(&self) -> usize {
        match self {
            Section::Basis { spec, .. } => spec.n,
            Section::Function { n, .. } => *n,
        }
    }

    pub fn extent(&self) -> Vec<(f64, f64)> {
        match self {
            Section::Basis { spec, .. } => spec.extent(),
            Section::Function { extent, .. } => extent.clone(),
        }
    }

    /// Value at `a` (all entries positive).
    pub fn eval(&self, a: &[f64]) -> Complex64 {
        match self {
            Section::Basis { spec, coeffs } => {
                let phi = spec.evaluate_all(a).expect("evaluation point must be valid");
                Complex64::new(phi.iter().zip(coeffs).map(|(p, c)| p * c).sum(), 0.0)
            }
            Section::Function { eval, .. } => eval(a),
        }
    }

    /// Value as a function on phase space, `ψ(q, p) = s(e^q)`.
    pub fn lift(&self) -> impl Fn(&[f64], &[f64]) -> Complex64 + '_ {
        move |q, _p| {
            let a: Vec<f64> = q.iter().map(|x| x.exp()).collect();
            self.eval(&a)
        }
    }
}

/// The measure `e^{−Σp_i²} Π da_i/a_i ∧ dp_i` and its normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeightedMeasure {
    pub n: usize,
}

impl WeightedMeasure {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    /// `c = π^{(n−1)/2}`, the momentum integral of the Gaussian weight.
    pub fn normalization(&self) -> f64 {
        PI.powf((self.n - 1) as f64 / 2.0)
    }

    pub fn weight(&self, p: &[f64]) -> f64 {
        (-p.iter().map(|x| x * x).sum::<f64>()).exp()
    }
}

/// Inner product on a fixed rule alongside the coarser rule it refines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InnerProduct {
    pub value: Complex64,
    pub coarse: Complex64,
    pub norm1: f64,
    pub norm2: f64,
}

fn integrate(s1: &Section, s2: &Section, rule: CompositeRule, bounds: &[(f64, f64)]) -> (Complex64, f64, f64) {
    let tensor = TensorRule::new(rule, bounds);
    let mut value = Complex64::new(0.0, 0.0);
    let mut n1 = 0.0;
    let mut n2 = 0.0;
    let mut a = vec![0.0; bounds.len()];
    tensor.for_each(|x, w| {
        for (ak, xk) in a.iter_mut().zip(x) {
            *ak = xk.exp();
        }
        let u = s1.eval(&a);
        let v = s2.eval(&a);
        value += u.conj() * v * w;
        n1 += u.norm_sqr() * w;
        n2 += v.norm_sqr() * w;
    });
    (value, n1, n2)
}

/// `⟨s₁, s₂⟩` on the weighted space, normalized by the momentum integral:
/// `∫ s̄₁ s₂ Π da_i/a_i`, evaluated with `x = log a` on the tensor rule.
///
/// `rule` and its refinement (panels half as wide) are both applied; the
/// refined value is returned, and rejected when the two differ by more than
/// `1e−8 ‖s₁‖‖s₂‖`.
pub fn weighted_inner_product_with(s1: &Section, s2: &Section, rule: CompositeRule) -> Result<InnerProduct> {
    if s1.n() != s2.n() {
        return Err(Error::DimensionMismatch {
            expected: s1.n(),
            found: s2.n(),
        });
    }
    let zero = Complex64::new(0.0, 0.0);
    let bounds: Vec<(f64, f64)> = s1
        .extent()
        .iter()
        .zip(s2.extent())
        .map(|(e1, e2)| (e1.0.max(e2.0), e1.1.min(e2.1)))
        .collect();
    if bounds.iter().any(|(lo, hi)| lo >= hi) {
        return Ok(InnerProduct {
            value: zero,
            coarse: zero,
            norm1: 0.0,
            norm2: 0.0,
        });
    }
    let (value, norm1, norm2) = integrate(s1, s2, rule.refined(), &bounds);
    let (coarse, _, _) = integrate(s1, s2, rule, &bounds);
    if (value - coarse).norm() > 1e-8 * (norm1 * norm2).sqrt() {
        return Err(Error::NonConvergentQuadrature {
            coarse: coarse.norm(),
            fine: value.norm(),
        });
    }
    Ok(InnerProduct {
        value,
        coarse,
        norm1,
        norm2,
    })
}

/// [`weighted_inner_product_with`] on the default rule (unit panels, order 10,
/// refined once).
pub fn weighted_inner_product(s1: &Section, s2: &Section) -> Result<Complex64> {
    Ok(weighted_inner_product_with(s1, s2, CompositeRule::default())?.value)
}

/// `(g·s)(a) = s(g⁻¹·a)`, where `g⁻¹` scales `a_i` by `L_{i+1,i+1}/L_ii`.
pub fn act_on_section(g: &GroupElement, s: &Section) -> Result<Section> {
    if g.n() != s.n() {
        return Err(Error::DimensionMismatch {
            expected: s.n(),
            found: g.n(),
        });
    }
    let r: Vec<f64> = g.a_scaling().iter().map(|x| 1.0 / x).collect();
    let extent = s
        .extent()
        .iter()
        .zip(&r)
        .map(|((lo, hi), ri)| (lo - ri.ln(), hi - ri.ln()))
        .collect();
    let inner = s.clone();
    Ok(Section::from_fn(s.n(), extent, move |a| {
        let moved: Vec<f64> = a.iter().zip(&r).map(|(ak, rk)| ak * rk).collect();
        inner.eval(&moved)
    }))
}

/// Covector in `(a, p)` coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Covector {
    pub da: Vec<f64>,
    pub dp: Vec<f64>,
}

impl Covector {
    pub fn apply(&self, t: &Tangent) -> f64 {
        let a: f64 = self.da.iter().zip(&t.da).map(|(c, v)| c * v).sum();
        let p: f64 = self.dp.iter().zip(&t.dp).map(|(c, v)| c * v).sum();
        a + p
    }
}

/// `θ = Σ (p_i/a_i) da_i`.
pub fn symplectic_potential(s: &TodaPhasePoint) -> Covector {
    let p = s.momenta();
    Covector {
        da: p.iter().zip(s.a()).map(|(pi, ai)| pi / ai).collect(),
        dp: vec![0.0; s.n() - 1],
    }
}

/// `H_l = Tr(l·A) = Σ l_{i+1,i} a_i` for strictly lower `l`.
pub fn hamiltonian_function(l: &LieAlgebraElement, s: &TodaPhasePoint) -> f64 {
    s.a().iter().enumerate().map(|(i, ai)| l.matrix()[(i + 1, i)] * ai).sum()
}

/// `X_H = Σ a_i l_{i+1,i} ∂p_i`.
pub fn polarization_field(l: &LieAlgebraElement, s: &TodaPhasePoint) -> Tangent {
    Tangent {
        da: vec![0.0; s.n() - 1],
        dp: s.a().iter().enumerate().map(|(i, ai)| ai * l.matrix()[(i + 1, i)]).collect(),
    }
}

/// Observable on phase space in canonical coordinates `(q, p)`.
pub type PhaseFn = Arc<dyn Fn(&[f64], &[f64]) -> f64 + Send + Sync>;

const OP_STEP: f64 = 1e-5;

fn partial<T>(f: &dyn Fn(&[f64], &[f64]) -> T, q: &[f64], p: &[f64], axis: usize, on_p: bool) -> T
where
    T: std::ops::Sub<Output = T> + std::ops::Div<f64, Output = T>,
{
    let (mut q1, mut p1) = (q.to_vec(), p.to_vec());
    let (mut q2, mut p2) = (q.to_vec(), p.to_vec());
    let x = if on_p { p[axis] } else { q[axis] };
    let h = OP_STEP * x.abs().max(1.0);
    if on_p {
        p1[axis] += h;
        p2[axis] -= h;
    } else {
        q1[axis] += h;
        q2[axis] -= h;
    }
    (f(&q1, &p1) - f(&q2, &p2)) / (2.0 * h)
}

/// `f̂ = ∇_{X_f} + 2πi f` with connection `∇ = d − 2πi θ`, in the global
/// trivialization. `X_f = Σ (∂f/∂p_i ∂q_i − ∂f/∂q_i ∂p_i)`; derivatives by
/// central differences.
#[derive(Clone)]
pub struct PrequantumOperator {
    n: usize,
    f: PhaseFn,
}

impl fmt::Debug for PrequantumOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrequantumOperator").field("n", &self.n).finish_non_exhaustive()
    }
}

pub fn prequantum_operator(n: usize, f: impl Fn(&[f64], &[f64]) -> f64 + Send + Sync + 'static) -> PrequantumOperator {
    PrequantumOperator { n, f: Arc::new(f) }
}

impl PrequantumOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `(X_f ψ − 2πi θ(X_f) ψ + 2πi f ψ)` at `c`.
    pub fn apply(&self, psi: &dyn Fn(&[f64], &[f64]) -> Complex64, c: &CanonicalPoint) -> Complex64 {
        let (q, p) = (&c.q, &c.p);
        let f = |q: &[f64], p: &[f64]| (self.f)(q, p);
        let m = self.n - 1;
        let mut out = Complex64::new(0.0, 0.0);
        let mut theta = 0.0;
        for i in 0..m {
            let fq = partial(&f, q, p, i, false);
            let fp = partial(&f, q, p, i, true);
            out += partial(psi, q, p, i, false) * fp - partial(psi, q, p, i, true) * fq;
            // θ = Σ p_i dq_i in canonical coordinates
            theta += p[i] * fp;
        }
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        out + two_pi_i * (f(q, p) - theta) * psi(q, p)
    }

    /// Max `|∂²f/∂p_j∂p_k|` over `samples`; zero exactly when `[∂p_j, X_f]`
    /// stays inside the polarization spanned by the `∂p_i`.
    pub fn polarization_defect(&self, samples: &[CanonicalPoint]) -> f64 {
        let m = self.n - 1;
        let mut worst: f64 = 0.0;
        let h = 1e-3;
        for c in samples {
            for j in 0..m {
                for k in 0..m {
                    let eval = |dj: f64, dk: f64| {
                        let mut p = c.p.clone();
                        p[j] += dj;
                        p[k] += dk;
                        (self.f)(&c.q, &p)
                    };
                    let d2 = (eval(h, h) - eval(h, -h) - eval(-h, h) + eval(-h, -h)) / (4.0 * h * h);
                    let scale = (self.f)(&c.q, &c.p).abs().max(1.0);
                    worst = worst.max(d2.abs() / scale);
                }
            }
        }
        worst
    }

    pub fn check_polarization(&self, samples: &[CanonicalPoint]) -> Result<()> {
        let d = self.polarization_defect(samples);
        if d > 1e-6 {
            return Err(Error::NotPolarizationPreserving { max_second_derivative: d });
        }
        Ok(())
    }
}

/// Position and momentum operators of the Schrödinger picture on functions
/// of `q ∈ ℝ^{n−1}`: `q̂_i ψ = q_i ψ`, `p̂_i ψ = −i ∂ψ/∂q_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhysicistOperators {
    pub n: usize,
}

pub fn physicist_operators(n: usize) -> PhysicistOperators {
    PhysicistOperators { n }
}

impl PhysicistOperators {
    pub fn position(&self, i: usize, psi: &dyn Fn(&[f64]) -> Complex64, q: &[f64]) -> Complex64 {
        psi(q) * q[i]
    }

    pub fn momentum(&self, i: usize, psi: &dyn Fn(&[f64]) -> Complex64, q: &[f64]) -> Complex64 {
        let h = OP_STEP * q[i].abs().max(1.0);
        let mut up = q.to_vec();
        let mut down = q.to_vec();
        up[i] += h;
        down[i] -= h;
        Complex64::new(0.0, -1.0) * (psi(&up) - psi(&down)) / (2.0 * h)
    }

    /// `([q̂_i, p̂_j] ψ)(q)`; equals `i δ_ij ψ(q)`.
    pub fn commutator(&self, i: usize, j: usize, psi: &dyn Fn(&[f64]) -> Complex64, q: &[f64]) -> Complex64 {
        let p_psi = |x: &[f64]| self.momentum(j, psi, x);
        let q_psi = |x: &[f64]| self.position(i, psi, x);
        self.position(i, &p_psi, q) - self.momentum(j, &q_psi, q)
    }
}
